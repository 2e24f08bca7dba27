//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cluster_core::examples::{fixture_matrix, fixture_text, run_example};
use cluster_core::explorer::{cluster_count, explore, tau_lat_invariance, tau_order, ExploreMode};
use cluster_core::formulas::{
    aff_a_move, beta_prime_oracle, formula_moves, oracle_matrix, random_betas, standard_matrix, verify_formula,
    Move, Reading, TypeSpec,
};
use cluster_core::groups::{cyclic_product_orders, principal_blocks_unimodular, qaut0_group, QautReport};
use cluster_core::lattice::{hnf, lat_equal};
use cluster_core::matrix::{principal_isomorphisms, ExtMatrix};
use cluster_core::morphism::{classify, quasi_hom_between, Classification, MapClass, MonomialMap};
use cluster_core::symbolic::{LaurentPoly, RatExpr};
use cluster_core::{LabeledSeed, Result};

const SEED: u64 = 20240611;

/// Finite types with their expected group order; every group is cyclic.
const GROUP_TABLE: [(&str, usize); 8] =
    [("A2", 5), ("A3", 6), ("A4", 7), ("B2", 3), ("B3", 4), ("C3", 4), ("G2", 4), ("D5", 10)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn ty(name: &str) -> TypeSpec {
    TypeSpec::parse(name).unwrap()
}

fn example(name: &str) -> Result<Outcome> {
    let r = run_example(name)?;
    let failed = r.failed();
    outcome(failed.is_empty(), if failed.is_empty() { format!("{} checks", r.checks.len()) } else { format!("failed: {}", failed.join(", ")) })
}

fn groups(cache: &mut BTreeMap<&'static str, QautReport>) -> Result<()> {
    for (name, _) in GROUP_TABLE {
        if !cache.contains_key(name) {
            let b = standard_matrix(&ty(name))?.with_principal_coefficients();
            let (r, _) = qaut0_group(&LabeledSeed::root(b), 100_000)?;
            cache.insert(name, r);
        }
    }
    Ok(())
}

fn c5(cache: &mut BTreeMap<&'static str, QautReport>) -> Result<Outcome> {
    groups(cache)?;
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for (name, order) in GROUP_TABLE {
        let q = &cache[name].qaut0;
        seen.push(format!("{}={}", name, q.order));
        if q.order != order || !q.cyclic || q.element_orders != cyclic_product_orders(&[order]) || !q.closure_verified {
            bad.push(name);
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { seen.join(" ") } else { format!("mismatch: {:?} ({})", bad, seen.join(" ")) })
}

fn c6(cache: &mut BTreeMap<&'static str, QautReport>) -> Result<Outcome> {
    groups(cache)?;
    let bad: Vec<&str> = GROUP_TABLE
        .iter()
        .filter(|(n, _)| cache[n].qaut0.order != cache[n].aut_triv.order)
        .map(|(n, _)| *n)
        .collect();
    outcome(bad.is_empty(), format!("{} fixtures, mismatched {:?}", GROUP_TABLE.len(), bad))
}

fn c7() -> Result<Outcome> {
    let mut seeds = 0;
    let mut bad = Vec::new();
    for (name, _) in GROUP_TABLE {
        let (ok, k) = principal_blocks_unimodular(&standard_matrix(&ty(name))?, 100_000)?;
        seeds += k;
        if !ok {
            bad.push(name);
        }
    }
    outcome(bad.is_empty(), format!("{} seeds checked, failing {:?}", seeds, bad))
}

fn c8() -> Result<Outcome> {
    let mut bad = Vec::new();
    for name in ["A3", "A5", "B3", "C3", "D5", "E7"] {
        let t = ty(name);
        for mv in formula_moves(&t) {
            let r = verify_formula(&t, mv, 100, SEED, Reading::Corrected)?;
            if !(r.pass() && r.predictor) {
                bad.push(format!("{} {}", name, mv.name()));
            }
        }
    }
    outcome(bad.is_empty(), format!("6 types x 100 rows, failing {:?}", bad))
}

fn c9() -> Result<Outcome> {
    let mut bad = Vec::new();
    for name in ["AffD4", "AffD5", "AffE6", "AffE7", "AffE8"] {
        let t = ty(name);
        let base = standard_matrix(&t)?;
        for beta in random_betas(t.n, 50, SEED) {
            let b = base.with_frozen(vec![beta])?;
            if !tau_lat_invariance(&b, [1, -1, 2, -2])?.all_pass() {
                bad.push(name.to_string());
                break;
            }
        }
    }
    // r1 on the affine A(2,1) quiver, built from the path-and-relabel recipe.
    let t = TypeSpec::aff_a(2, 1);
    let base = standard_matrix(&t)?;
    let (path, pi) = aff_a_move(2, 1, Move::R1)?;
    for beta in random_betas(t.n, 50, SEED) {
        let b = base.with_frozen(vec![beta.clone()])?;
        let moved = b.mutate_path(&path)?.relabeled(&pi);
        if !(moved.same_principal(&b) && lat_equal(&b, &moved) && moved == oracle_matrix(&t, &beta, Move::R1)?) {
            bad.push("AffA2,1 r1".into());
            break;
        }
    }
    let r1 = verify_formula(&t, Move::R1, 50, SEED, Reading::Corrected)?;
    if !r1.pass() {
        bad.push("AffA2,1 r1 formula".into());
    }
    outcome(bad.is_empty(), format!("5 affine types x 50 rows, tau^{{+-1,+-2}}; failing {:?}", bad))
}

fn c10() -> Result<Outcome> {
    let mut bad = Vec::new();
    for s in 1..=5 {
        for t in 1..=5 {
            let base = standard_matrix(&TypeSpec::rank2(s, t))?;
            for beta in random_betas(2, 50, SEED + (s * 10 + t) as u64) {
                let b = base.with_frozen(vec![beta])?;
                if !tau_lat_invariance(&b, [-3, -2, -1, 1, 2, 3])?.all_pass() {
                    bad.push(format!("lat {},{}", s, t));
                    break;
                }
            }
            let order = tau_order(&base, 200)?;
            let expected = match (s, t) {
                (1, 1) => Some(5),
                (1, 2) | (2, 1) => Some(3),
                (1, 3) | (3, 1) => Some(4),
                _ if s * t >= 4 => None,
                _ => unreachable!(),
            };
            if order != expected {
                bad.push(format!("order {},{}: {:?}", s, t, order));
            }
        }
    }
    outcome(bad.is_empty(), format!("25 (s,t) pairs; failing {:?}", bad))
}

fn c11() -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for (name, family, expected) in [("A2", 'A', 5), ("A3", 'A', 14), ("D4", 'D', 50)] {
        let b = standard_matrix(&ty(name))?;
        let triv = explore(&LabeledSeed::root(b.clone()), 10_000, ExploreMode::Symbolic)?;
        let prin = explore(&LabeledSeed::root(b.with_principal_coefficients()), 10_000, ExploreMode::Symbolic)?;
        let n = b.n();
        let closed = cluster_count(family, n);
        seen.push(format!("{}={}", name, triv.len()));
        let ok = triv.finite
            && prin.finite
            && triv.len() == expected
            && closed == Some(expected as u64)
            && triv.is_regular()
            && prin.is_regular()
            && prin.len() == triv.len()
            && prin.edges().len() == triv.edges().len()
            && triv.edges().len() == expected * n / 2;
        if !ok {
            bad.push(name);
        }
    }
    outcome(bad.is_empty(), format!("{}; failing {:?}", seen.join(" "), bad))
}

fn random_principal(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = rng.gen_range(-2..=2);
            b[i][j] = c * d[j];
            b[j][i] = -c * d[i];
        }
    }
    b
}

fn random_rows(rng: &mut ChaCha8Rng, count: usize, width: usize, bound: i64) -> Vec<Vec<BigInt>> {
    (0..count).map(|_| (0..width).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()).collect()
}

fn random_rat(rng: &mut ChaCha8Rng, nv: usize) -> Result<RatExpr> {
    let poly = |rng: &mut ChaCha8Rng| {
        let mut p = LaurentPoly::zero(nv);
        for _ in 0..rng.gen_range(1..4) {
            let e = (0..nv).map(|_| rng.gen_range(-2..=2)).collect();
            p = p.add(&LaurentPoly::monomial(nv, e, rng.gen_range(-3i64..=3)));
        }
        p
    };
    let a = RatExpr::from_poly(poly(rng));
    let b = poly(rng);
    if rng.gen_bool(0.5) && !b.is_zero() {
        a.div(&RatExpr::from_poly(b))
    } else {
        Ok(a)
    }
}

fn chain_holds(c: &Classification) -> bool {
    let expected = if c.criteria.cluster {
        MapClass::ClusterAutomorphism { direct: c.direct }
    } else if c.criteria.weak {
        MapClass::WeakClusterAutomorphism { direct: c.direct }
    } else if c.criteria.quasi {
        MapClass::QuasiAutomorphismOnly
    } else {
        MapClass::NotQuasi
    };
    (!c.criteria.cluster || c.criteria.weak) && (!(c.criteria.weak && c.direct) || c.criteria.quasi) && c.class == expected
}

fn c12() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad: Vec<&str> = Vec::new();

    // mutation involution
    let mut ok = true;
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let mut rows = random_principal(&mut rng, n);
        let f = rng.gen_range(0..=3);
        rows.extend((0..f).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect::<Vec<i64>>()));
        let b = ExtMatrix::from_i64(n, &rows)?;
        let k = rng.gen_range(0..n);
        ok &= b.mutate(k)?.mutate(k)? == b;
    }
    if !ok {
        bad.push("involution");
    }

    // HNF canonicity under unimodular row operations
    let mut ok = true;
    for _ in 0..200 {
        let m = rng.gen_range(1..=4);
        let mut r = random_rows(&mut rng, m, 4, 6);
        let before = hnf(&r, 4);
        for _ in 0..10 {
            let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
            match rng.gen_range(0..3) {
                0 if i != j => {
                    let c = rng.gen_range(-3i64..=3);
                    let add: Vec<BigInt> = r[j].iter().map(|x| x * c).collect();
                    for (a, b) in r[i].iter_mut().zip(add) {
                        *a += b;
                    }
                }
                1 => r.swap(i, j),
                _ => r[i] = r[i].iter().map(|x| -x).collect(),
            }
        }
        ok &= hnf(&r, 4) == before;
    }
    if !ok {
        bad.push("hnf");
    }

    // ring axioms
    let mut ok = true;
    for _ in 0..40 {
        let (a, b, c) = (random_rat(&mut rng, 3)?, random_rat(&mut rng, 3)?, random_rat(&mut rng, 3)?);
        ok &= a.add(&b) == b.add(&a) && a.mul(&b) == b.mul(&a);
        ok &= a.add(&b).add(&c) == a.add(&b.add(&c)) && a.mul(&b).mul(&c) == a.mul(&b.mul(&c));
        ok &= a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c));
        ok &= a.sub(&a).is_zero();
        if !b.is_zero() {
            ok &= a.div(&b)?.mul(&b) == a;
        }
    }
    if !ok {
        bad.push("ring");
    }

    // Laurent phenomenon with trivial and principal coefficients
    let mut ok = true;
    for name in ["A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "F4"] {
        let b = standard_matrix(&ty(name))?;
        for full in [b.clone(), b.with_principal_coefficients()] {
            let g = explore(&LabeledSeed::root(full), 10_000, ExploreMode::Symbolic)?;
            ok &= g.finite;
            for nd in &g.nodes {
                for x in nd.seed.as_ref().unwrap().cluster() {
                    let d = x.denominator();
                    ok &= d.is_monomial() && d.leading_coefficient() == BigInt::from(1);
                }
            }
        }
    }
    if !ok {
        bad.push("laurent");
    }

    // inclusion chain on found maps and on the shipped maps
    let mut ok = true;
    for round in 0..12 {
        let name = ["A2", "A3", "B2", "G2"][round % 4];
        let base = standard_matrix(&ty(name))?;
        let count = rng.gen_range(1..=2);
        let rows = random_rows(&mut rng, count, base.n(), 2);
        let root = LabeledSeed::root(base.with_frozen(rows)?);
        let g = explore(&root, 100, ExploreMode::Symbolic)?;
        for nd in &g.nodes {
            let seed = nd.seed.as_ref().unwrap();
            for sigma in principal_isomorphisms(root.matrix(), seed.matrix()) {
                if let Some(map) = quasi_hom_between(&root, &seed.relabeled(&sigma))? {
                    ok &= chain_holds(&classify(&map, None)?);
                }
            }
        }
    }
    let root = LabeledSeed::root(fixture_matrix("weakaut-a2")?);
    for (file, target) in [
        ("weakaut-tau.map", root.mutate(0)?.relabeled(&[1, 0])),
        ("weakaut-sigma.map", root.relabeled(&[1, 0])),
    ] {
        let m = MonomialMap::parse(fixture_text(file).unwrap(), root.clone(), target)?;
        ok &= chain_holds(&classify(&m, None)?);
    }
    let s = LabeledSeed::root(fixture_matrix("cex1")?);
    let f = MonomialMap::parse(fixture_text("cex1-f.map").unwrap(), s.clone(), s.mutate_path(&[1, 0, 2])?)?;
    let c = classify(&f, None)?;
    ok &= chain_holds(&c) && c.class == MapClass::QuasiAutomorphismOnly;
    if !ok {
        bad.push("inclusion");
    }

    // one-frozen-row stacking
    let mut ok = true;
    for round in 0..30 {
        let name = ["A5", "B3", "D5", "E7", "AffD5", "AffE6", "Rank2:2,3"][round % 7];
        let t = ty(name);
        let mv = formula_moves(&t)[0];
        let count = rng.gen_range(1..=3);
        let betas = random_rows(&mut rng, count, t.n, 9);
        let base = standard_matrix(&t)?;
        let singles: Vec<Vec<BigInt>> = betas.iter().map(|b| beta_prime_oracle(&t, b, mv)).collect::<Result<_>>()?;
        let stacked = oracle_matrix(&t, &betas[0], mv)?.with_frozen(singles)?;
        ok &= lat_equal(&base.with_frozen(betas)?, &stacked);
    }
    if !ok {
        bad.push("stacking");
    }

    outcome(bad.is_empty(), format!("six suites; failing {:?}", bad))
}

const CRITERIA: [&str; 12] = [
    "nongroup example",
    "weak automorphisms of A2",
    "counterexample 1",
    "counterexample 2",
    "finite-type group orders",
    "QAut0 = Aut+ with principal coefficients",
    "unimodular principal coefficient blocks",
    "frozen row formulas",
    "affine tau lifts",
    "rank 2",
    "exchange graph censuses",
    "property suites",
];

fn run(i: usize, cache: &mut BTreeMap<&'static str, QautReport>) -> Result<Outcome> {
    match i {
        0 => example("nongroup"),
        1 => example("weakaut-a2"),
        2 => example("cex1"),
        3 => example("cex2"),
        4 => c5(cache),
        5 => c6(cache),
        6 => c7(),
        7 => c8(),
        8 => c9(),
        9 => c10(),
        10 => c11(),
        _ => c12(),
    }
}

fn main() -> ExitCode {
    let mut cache = BTreeMap::new();
    let mut failures = 0;
    for (i, name) in CRITERIA.iter().enumerate() {
        let t = Instant::now();
        let (pass, detail) = match run(i, &mut cache) {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {}", e)),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} {:>2} {} [{:.2}s] {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            name,
            t.elapsed().as_secs_f64(),
            detail
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", failures);
        ExitCode::FAILURE
    }
}
