//! Built-in worked examples and their data files, re-verified end to end.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::explorer::{explore, ExploreMode};
use crate::groups::{cyclic_product_orders, product_orders, qaut0_group, relation_check, SeedMap};
use crate::lattice::{lat_equal, span_contains};
use crate::matrix::{matrices_isomorphic, ExtMatrix};
use crate::morphism::{classify, compose, quasi_hom_between, MapClass, MonomialMap, RootMap};
use crate::seed::LabeledSeed;
use crate::symbolic::RatExpr;

pub const EXAMPLES: [&str; 4] = ["nongroup", "weakaut-a2", "cex1", "cex2"];

const FILES: &[(&str, &str)] = &[
    ("nongroup.mat", include_str!("../fixtures/nongroup.mat")),
    ("nongroup-psi.map", include_str!("../fixtures/nongroup-psi.map")),
    ("nongroup-phi.map", include_str!("../fixtures/nongroup-phi.map")),
    ("weakaut-a2.mat", include_str!("../fixtures/weakaut-a2.mat")),
    ("weakaut-a2-mu1.mat", include_str!("../fixtures/weakaut-a2-mu1.mat")),
    ("weakaut-a2-vars.txt", include_str!("../fixtures/weakaut-a2-vars.txt")),
    ("weakaut-tau.map", include_str!("../fixtures/weakaut-tau.map")),
    ("weakaut-sigma.map", include_str!("../fixtures/weakaut-sigma.map")),
    ("cex1.mat", include_str!("../fixtures/cex1.mat")),
    ("cex1-prime.mat", include_str!("../fixtures/cex1-prime.mat")),
    ("cex1-f.map", include_str!("../fixtures/cex1-f.map")),
    ("cex2.mat", include_str!("../fixtures/cex2.mat")),
    ("cex2-prime.mat", include_str!("../fixtures/cex2-prime.mat")),
];

pub fn fixture_text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(f, _)| *f == name).map(|(_, t)| *t)
}

/// Looks up `name` or `name.mat` among the shipped matrices.
pub fn fixture_matrix(name: &str) -> Result<ExtMatrix> {
    let text = fixture_text(name)
        .or_else(|| fixture_text(&format!("{}.mat", name)))
        .ok_or_else(|| Error::UnsupportedType(format!("no fixture named `{}`", name)))?;
    ExtMatrix::parse(text)
}

fn map_fixture(name: &str, source: &LabeledSeed, target: &LabeledSeed) -> Result<MonomialMap> {
    MonomialMap::parse(fixture_text(name).unwrap(), source.clone(), target.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ExampleReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub details: Value,
}

impl ExampleReport {
    fn new(name: &str) -> Self {
        ExampleReport { name: name.to_string(), checks: Vec::new(), details: json!({}) }
    }

    fn check(&mut self, name: &str, pass: bool) {
        self.checks.push(Check { name: name.to_string(), pass });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> Value {
        let checks: BTreeMap<&str, bool> = self.checks.iter().map(|c| (c.name.as_str(), c.pass)).collect();
        json!({"example": self.name, "pass": self.pass(), "checks": checks, "details": self.details})
    }
}

pub fn run_example(name: &str) -> Result<ExampleReport> {
    match name {
        "nongroup" => nongroup(),
        "weakaut-a2" => weakaut_a2(),
        "cex1" => cex1(),
        "cex2" => cex2(),
        _ => Err(Error::UnsupportedType(format!("no example named `{}`", name))),
    }
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn nongroup() -> Result<ExampleReport> {
    let mut r = ExampleReport::new("nongroup");
    let s = LabeledSeed::root(fixture_matrix("nongroup")?);
    let t = s.mutate_path(&[0, 1])?;
    let psi = map_fixture("nongroup-psi.map", &s, &t)?;
    let phi = map_fixture("nongroup-phi.map", &t, &s)?;
    let rp = psi.verify_quasi_hom()?;
    r.check("psi_quasi_hom", rp.holds());
    let witnesses: Vec<Option<Vec<i64>>> = rp.witnesses.iter().map(|w| w.as_ref().map(|w| w.0.clone())).collect();
    r.check("psi_witnesses", witnesses == vec![Some(vec![-3]), Some(vec![6])]);
    r.check("phi_quasi_hom", phi.verify_quasi_hom()?.holds());
    r.check("phi_psi_identity", compose(&phi, &psi)?.proportional_to_identity()?);
    r.check("psi_phi_identity", compose(&psi, &phi)?.proportional_to_identity()?);
    r.check("psi_block_non_unimodular", psi.m2() == vec![ints(&[2])] && !psi.m2_unimodular());
    r.details = json!({"psi": psi.to_json(), "phi": phi.to_json()});
    Ok(r)
}

fn weakaut_a2() -> Result<ExampleReport> {
    let mut r = ExampleReport::new("weakaut-a2");
    let b = fixture_matrix("weakaut-a2")?;
    let root = LabeledSeed::root(b.clone());
    let m = root.m();
    r.check("mu1_matrix", b.mutate(0)? == fixture_matrix("weakaut-a2-mu1")?);

    let printed: Vec<RatExpr> = fixture_text("weakaut-a2-vars.txt")
        .unwrap()
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| RatExpr::parse(l, m))
        .collect::<Result<_>>()?;
    let g = explore(&root, 100, ExploreMode::Symbolic)?;
    let found: BTreeSet<String> = g
        .nodes
        .iter()
        .flat_map(|nd| nd.seed.as_ref().unwrap().cluster().iter().map(|x| x.to_string()))
        .collect();
    let expected: BTreeSet<String> = printed.iter().map(|x| x.to_string()).collect();
    r.check("five_cluster_variables", g.finite && g.len() == 5 && found == expected);

    let tau_target = root.mutate(0)?.relabeled(&[1, 0]);
    let sigma_target = root.relabeled(&[1, 0]);
    let tau = map_fixture("weakaut-tau.map", &root, &tau_target)?;
    let sigma = map_fixture("weakaut-sigma.map", &root, &sigma_target)?;
    let rt = tau.as_root_map()?;
    let rs = sigma.as_root_map()?;

    // x1, x2, x1', x2', x1''
    let [x1, x2, x1p, x2p, x1pp] = [0, 1, 2, 3, 4].map(|i| printed[i].clone());
    let maps_to = |f: &RootMap, a: &RatExpr, b: &RatExpr| f.apply(a).map(|v| &v == b).unwrap_or(false);
    let cycle = [&x1, &x2, &x1p, &x1pp, &x2p, &x1];
    r.check("tau_five_cycle", cycle.windows(2).all(|w| maps_to(&rt, w[0], w[1])));
    let swaps = [(&x1, &x2), (&x2, &x1), (&x1p, &x2p), (&x2p, &x1p), (&x1pp, &x1pp)];
    r.check("sigma_involution", swaps.iter().all(|(a, b)| maps_to(&rs, a, b)));

    r.check("tau_order_5", rt.pow(5)?.fixes_seed(&root)? && !rt.pow(1)?.fixes_seed(&root)?);
    r.check("sigma_order_2", rs.pow(2)?.fixes_seed(&root)? && !rs.fixes_seed(&root)?);
    r.check("dihedral_relation", rt.after(&rs)? == rs.after(&rt.pow(4)?)?);
    let gens: BTreeMap<String, SeedMap> = [
        ("t".to_string(), SeedMap { path: vec![0], pi: vec![1, 0] }),
        ("s".to_string(), SeedMap { path: vec![], pi: vec![1, 0] }),
    ]
    .into_iter()
    .collect();
    let rels = relation_check(&root.specialize_trivial(), &gens, &["t^5", "s^2", "t*s = s*t^-1"])?;
    r.check("seed_map_relations", rels.iter().all(|x| x.holds));

    let ct = classify(&tau, None)?;
    let cs = classify(&sigma, None)?;
    let weak = |c: &MapClass| matches!(c, MapClass::WeakClusterAutomorphism { .. });
    r.check("tau_weak_not_cluster", weak(&ct.class) && !ct.criteria.cluster);
    r.check("sigma_weak_not_cluster", weak(&cs.class) && !cs.criteria.cluster);
    r.check("targets_not_isomorphic", matrices_isomorphic(&b, tau_target.matrix(), true).is_none()
        && matrices_isomorphic(&b, &tau_target.matrix().negated(), true).is_none());
    r.details = json!({"tau": ct.to_json(), "sigma": cs.to_json()});
    Ok(r)
}

fn cex1() -> Result<ExampleReport> {
    let mut r = ExampleReport::new("cex1");
    let b = fixture_matrix("cex1")?;
    let s = LabeledSeed::root(b.clone());
    let t = s.mutate_path(&[1, 0, 2])?;
    let bp = fixture_matrix("cex1-prime")?;
    r.check("mutated_matrix", t.matrix() == &bp);
    r.check("lat_equal", lat_equal(&b, &bp));
    let found = quasi_hom_between(&s, &t)?;
    let found_ok = match &found {
        Some(f) => f.verify_quasi_hom()?.holds(),
        None => false,
    };
    r.check("quasi_hom_found", found_ok);
    let f = map_fixture("cex1-f.map", &s, &t)?;
    r.check("printed_map_quasi_hom", f.verify_quasi_hom()?.holds());
    r.check("no_direct_isomorphism", matrices_isomorphic(&b, &bp, true).is_none());
    r.details = json!({
        "b_prime": bp.to_i64_rows(),
        "found": found.map(|f| f.to_json()),
    });
    Ok(r)
}

fn cex2() -> Result<ExampleReport> {
    let mut r = ExampleReport::new("cex2");
    let b = fixture_matrix("cex2")?;
    let bp = fixture_matrix("cex2-prime")?;
    let s = LabeledSeed::root(b.clone());
    let t = s.relabeled(&[0, 2, 1, 3]);
    r.check("relabeled_matrix", t.matrix() == &bp);
    r.check("row_outside_span", !span_contains(&b, &bp.frozen_rows()[0])?);
    r.check("no_quasi_hom", quasi_hom_between(&s, &t)?.is_none());
    let (rep, _) = qaut0_group(&s, 10_000)?;
    let s3: BTreeMap<usize, usize> = [(1, 1), (2, 3), (3, 2)].into_iter().collect();
    let z4_s3 = product_orders(&cyclic_product_orders(&[4]), &s3);
    r.check("qaut0_order_8", rep.qaut0.order == 8);
    r.check("qaut0_profile_z4_z2", rep.qaut0.element_orders == cyclic_product_orders(&[4, 2]) && rep.qaut0.abelian);
    r.check("aut_triv_order_24", rep.aut_triv.order == 24);
    r.check("aut_triv_profile_z4_s3", rep.aut_triv.element_orders == z4_s3 && !rep.aut_triv.abelian);
    r.check("index_3", rep.index == Some(3));
    r.details = rep.to_json();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_pass() {
        for name in EXAMPLES {
            let r = run_example(name).unwrap();
            assert!(r.pass(), "{} {:?}", name, r.failed());
        }
    }

    #[test]
    fn unknown_example() {
        assert!(run_example("nope").is_err());
        assert!(fixture_matrix("nope").is_err());
    }
}
