//! Automorphism groups of finite exchange graphs as permutation groups on
//! cluster variables, and relation checks for seed maps.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::explorer::{explore, ExchangeGraph, ExploreMode, SeedKey};
use crate::lattice::{determinant, lat_equal};
use crate::matrix::{principal_isomorphisms, ExtMatrix};
use crate::seed::{seed_proportional, LabeledSeed};
use crate::symbolic::RatExpr;

/// An automorphism of the trivial-coefficient algebra, determined by the
/// labeled seed the root is sent to: node `node` of the exchange graph,
/// relabeled by `sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSymmetry {
    pub target: SeedKey,
    pub node: usize,
    pub sigma: Vec<usize>,
    pub negated: bool,
    /// Permutation of the variable list of the enclosing group.
    pub induced: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupReport {
    pub order: usize,
    pub abelian: bool,
    pub cyclic: bool,
    pub element_orders: BTreeMap<usize, usize>,
    pub closure_verified: bool,
    /// Index of an element of maximal order.
    pub generator: Option<usize>,
}

impl GroupReport {
    pub fn to_json(&self, index: Option<usize>) -> Value {
        let orders: BTreeMap<String, usize> =
            self.element_orders.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        json!({
            "order": self.order,
            "abelian": self.abelian,
            "cyclic": self.cyclic,
            "element_orders": orders,
            "closure_verified": self.closure_verified,
            "subgroup_index_in_aut_triv": index,
        })
    }
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn perm_order(p: &[usize]) -> usize {
    let id: Vec<usize> = (0..p.len()).collect();
    let mut cur = p.to_vec();
    let mut k = 1;
    while cur != id {
        cur = compose_perm(p, &cur);
        k += 1;
    }
    k
}

/// Order, commutativity, element orders and closure of a finite set of permutations.
pub fn analyze_permutations(perms: &[Vec<usize>]) -> GroupReport {
    let set: HashSet<&Vec<usize>> = perms.iter().collect();
    let mut closure = set.len() == perms.len();
    let mut abelian = true;
    for a in perms {
        for b in perms {
            let ab = compose_perm(a, b);
            if !set.contains(&ab) {
                closure = false;
            }
            if abelian && ab != compose_perm(b, a) {
                abelian = false;
            }
        }
    }
    let mut element_orders = BTreeMap::new();
    let mut generator = None;
    let mut best = 0;
    for (i, p) in perms.iter().enumerate() {
        let o = perm_order(p);
        *element_orders.entry(o).or_insert(0) += 1;
        if o > best {
            best = o;
            generator = Some(i);
        }
    }
    GroupReport {
        order: perms.len(),
        abelian,
        cyclic: best == perms.len(),
        element_orders,
        closure_verified: closure,
        generator,
    }
}

/// Element-order profile of a direct product of cyclic groups, for comparison.
pub fn cyclic_product_orders(factors: &[usize]) -> BTreeMap<usize, usize> {
    let mut elems: Vec<usize> = vec![1];
    for &f in factors {
        let mut next = Vec::new();
        for &o in &elems {
            for k in 0..f {
                next.push(num_integer::lcm(o, f / num_integer::gcd(f, k)));
            }
        }
        elems = next;
    }
    let mut out = BTreeMap::new();
    for o in elems {
        *out.entry(o).or_insert(0) += 1;
    }
    out
}

/// Element-order profile of `G × H` from the profiles of `G` and `H`.
pub fn product_orders(g: &BTreeMap<usize, usize>, h: &BTreeMap<usize, usize>) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for (&a, &ca) in g {
        for (&b, &cb) in h {
            *out.entry(num_integer::lcm(a, b)).or_insert(0) += ca * cb;
        }
    }
    out
}

/// Aut⁺ (or Aut with `include_inverse`) of a trivial-coefficient algebra.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub graph: ExchangeGraph,
    pub variables: Vec<RatExpr>,
    pub elements: Vec<SeedSymmetry>,
    pub report: GroupReport,
}

pub fn direct_automorphisms_triv(root: &LabeledSeed, cap: usize, include_inverse: bool) -> Result<AutGroup> {
    let root = if root.m() > root.n() {
        root.specialize_trivial()
    } else {
        root.clone()
    };
    let graph = explore(&root, cap, ExploreMode::Symbolic)?;
    if !graph.finite {
        return Err(Error::NotFinite);
    }
    let seeds: Vec<&LabeledSeed> = graph.nodes.iter().map(|nd| nd.seed.as_ref().unwrap()).collect();
    let mut variables = Vec::new();
    let mut ids: HashMap<RatExpr, usize> = HashMap::new();
    for s in &seeds {
        for x in s.cluster() {
            if !ids.contains_key(x) {
                ids.insert(x.clone(), variables.len());
                variables.push(x.clone());
            }
        }
    }
    let mut elements = Vec::new();
    let signs: &[bool] = if include_inverse { &[false, true] } else { &[false] };
    for &negated in signs {
        let reference = if negated { root.matrix().negated() } else { root.matrix().clone() };
        for (v, nd) in graph.nodes.iter().enumerate() {
            for sigma in principal_isomorphisms(&reference, &nd.matrix) {
                let induced = induced_permutation(&graph, &seeds, &ids, v, &sigma)?;
                elements.push(SeedSymmetry {
                    target: nd.key.clone(),
                    node: v,
                    sigma,
                    negated,
                    induced,
                });
            }
        }
    }
    let perms: Vec<Vec<usize>> = elements.iter().map(|e| e.induced.clone()).collect();
    let report = analyze_permutations(&perms);
    Ok(AutGroup { graph, variables, elements, report })
}

/// Replays the breadth-first tree from the image of the root seed and
/// reads off where each cluster variable goes.
fn induced_permutation(
    graph: &ExchangeGraph,
    seeds: &[&LabeledSeed],
    ids: &HashMap<RatExpr, usize>,
    v: usize,
    sigma: &[usize],
) -> Result<Vec<usize>> {
    let mut images: Vec<Option<LabeledSeed>> = vec![None; graph.len()];
    images[0] = Some(seeds[v].relabeled(sigma));
    let mut perm = vec![usize::MAX; ids.len()];
    for w in 0..graph.len() {
        if w > 0 {
            let (p, k) = graph.nodes[w].parent.expect("non-root node has a parent");
            let img = images[p].as_ref().expect("parent visited first").mutate(k)?;
            images[w] = Some(img);
        }
        let img = images[w].as_ref().unwrap();
        for (x, y) in seeds[w].cluster().iter().zip(img.cluster()) {
            let (a, b) = (ids[x], *ids.get(y).ok_or(Error::NotFinite)?);
            if perm[a] != usize::MAX && perm[a] != b {
                return Err(Error::MalformedMatrix("inconsistent induced map".into()));
            }
            perm[a] = b;
        }
    }
    Ok(perm)
}

/// Which of the sufficient conditions for the exchange graph to depend
/// only on the principal part holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarReason {
    SkewSymmetric,
    Nondegenerate,
    FiniteType,
}

pub fn star_condition(b: &ExtMatrix, cap: usize) -> Result<StarReason> {
    if b.is_skew_symmetric() {
        return Ok(StarReason::SkewSymmetric);
    }
    if !determinant(b.principal()).is_zero() {
        return Ok(StarReason::Nondegenerate);
    }
    let g = explore(&LabeledSeed::root(b.principal_only()), cap, ExploreMode::Symbolic)?;
    if g.finite {
        return Ok(StarReason::FiniteType);
    }
    Err(Error::StarConditionUnknown)
}

#[derive(Clone, Debug)]
pub struct QautReport {
    pub star: StarReason,
    pub aut_triv: GroupReport,
    pub qaut0: GroupReport,
    /// Elements of Aut⁺ of the trivial algebra that lift.
    pub lifted: Vec<usize>,
    pub index: Option<usize>,
    /// Order of Aut₀⁺: lifts whose frozen rows match up to permutation.
    pub aut0_plus_order: usize,
}

impl QautReport {
    pub fn to_json(&self) -> Value {
        let mut v = self.qaut0.to_json(self.index);
        v["aut_triv_order"] = json!(self.aut_triv.order);
        v["aut0_plus_order"] = json!(self.aut0_plus_order);
        v["star"] = json!(format!("{:?}", self.star));
        v
    }
}

fn sorted_rows(rows: &[Vec<num_bigint::BigInt>]) -> Vec<Vec<num_bigint::BigInt>> {
    let mut r = rows.to_vec();
    r.sort();
    r
}

/// QAut₀ as the subgroup of Aut⁺ of the trivial algebra whose elements lift
/// to the coefficient-bearing matrix with the same row lattice.
pub fn qaut0_group(root: &LabeledSeed, cap: usize) -> Result<(QautReport, AutGroup)> {
    let b = root.matrix();
    let star = star_condition(b, cap)?;
    let aut = direct_automorphisms_triv(root, cap, false)?;
    let mut lifted = Vec::new();
    let mut aut0 = 0;
    for (i, e) in aut.elements.iter().enumerate() {
        let path = &aut.graph.nodes[e.node].path;
        let moved = b.mutate_path(path)?.relabeled(&e.sigma);
        if moved.same_principal(b) && lat_equal(&moved, b) {
            lifted.push(i);
            if sorted_rows(moved.frozen_rows()) == sorted_rows(b.frozen_rows()) {
                aut0 += 1;
            }
        }
    }
    let perms: Vec<Vec<usize>> = lifted.iter().map(|&i| aut.elements[i].induced.clone()).collect();
    let qaut0 = analyze_permutations(&perms);
    let index = (qaut0.order > 0 && aut.report.order % qaut0.order == 0).then(|| aut.report.order / qaut0.order);
    Ok((
        QautReport {
            star,
            aut_triv: aut.report.clone(),
            qaut0,
            lifted,
            index,
            aut0_plus_order: aut0,
        },
        aut,
    ))
}

/// Checks that the coefficient block has determinant ±1 at every seed of
/// the principal-coefficient extension of `b`. Returns the number of seeds checked.
pub fn principal_blocks_unimodular(b: &ExtMatrix, cap: usize) -> Result<(bool, usize)> {
    let g = explore(&LabeledSeed::root(b.principal_only()), cap, ExploreMode::Symbolic)?;
    if !g.finite {
        return Err(Error::NotFinite);
    }
    let full = b.principal_only().with_principal_coefficients();
    for nd in &g.nodes {
        let d = determinant(full.mutate_path(&nd.path)?.frozen_rows());
        if d != 1.into() && d != (-1).into() {
            return Ok((false, g.len()));
        }
    }
    Ok((true, g.len()))
}

/// `g(Σ) = μ_w(Σ)` relabeled by `pi`, where position `i` of the result is
/// position `pi[i]` of `μ_w(Σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedMap {
    pub path: Vec<usize>,
    pub pi: Vec<usize>,
}

impl SeedMap {
    pub fn identity(n: usize) -> Self {
        SeedMap { path: Vec::new(), pi: (0..n).collect() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SeedMap) -> SeedMap {
        let mut path = self.path.clone();
        path.extend(other.path.iter().map(|&k| self.pi[k]));
        SeedMap { path, pi: compose_perm(&self.pi, &other.pi) }
    }

    pub fn inverse(&self) -> SeedMap {
        let mut inv = vec![0; self.pi.len()];
        for (i, &p) in self.pi.iter().enumerate() {
            inv[p] = i;
        }
        let path = self.path.iter().rev().map(|&k| inv[k]).collect();
        SeedMap { path, pi: inv }
    }

    pub fn pow(&self, k: i64) -> SeedMap {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = SeedMap::identity(self.pi.len());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn apply(&self, root: &LabeledSeed) -> Result<LabeledSeed> {
        Ok(root.mutate_path(&self.path)?.relabeled(&self.pi))
    }

    /// Whether the image of `root` is `root` itself (up to proportionality
    /// when frozen variables are present).
    pub fn fixes(&self, root: &LabeledSeed) -> Result<bool> {
        let img = self.apply(root)?;
        if root.m() == root.n() {
            return Ok(img.cluster() == root.cluster() && img.matrix() == root.matrix());
        }
        Ok(seed_proportional(&img, root)?.holds())
    }

    /// Whether the map respects the principal part, i.e. is an automorphism candidate.
    pub fn preserves_principal(&self, b: &ExtMatrix) -> Result<bool> {
        Ok(b.mutate_path(&self.path)?.relabeled(&self.pi).same_principal(b))
    }
}

/// Evaluates words like `r1*r2*r1^-1` over named generators.
pub fn eval_word(word: &str, gens: &BTreeMap<String, SeedMap>, n: usize) -> Result<SeedMap> {
    let mut acc = SeedMap::identity(n);
    for tok in word.split(|c: char| c == '*' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let (name, exp) = match tok.split_once('^') {
            Some((a, b)) => (
                a,
                b.parse::<i64>()
                    .map_err(|_| Error::MalformedMatrix(format!("bad exponent in `{}`", tok)))?,
            ),
            None => (tok, 1),
        };
        if name == "1" || name == "id" {
            continue;
        }
        let g = gens
            .get(name)
            .ok_or_else(|| Error::MalformedMatrix(format!("unknown generator `{}`", name)))?;
        acc = acc.compose(&g.pow(exp));
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationResult {
    pub relation: String,
    pub holds: bool,
}

/// Each relation is `lhs = rhs` or a single word that should act trivially.
pub fn relation_check(
    root: &LabeledSeed,
    gens: &BTreeMap<String, SeedMap>,
    relations: &[&str],
) -> Result<Vec<RelationResult>> {
    let n = root.n();
    relations
        .iter()
        .map(|rel| {
            let map = match rel.split_once('=') {
                Some((l, r)) => eval_word(l, gens, n)?.compose(&eval_word(r, gens, n)?.inverse()),
                None => eval_word(rel, gens, n)?,
            };
            Ok(RelationResult { relation: rel.to_string(), holds: map.fixes(root)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: usize) -> ExtMatrix {
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n - 1 {
            let s = if i % 2 == 0 { 1 } else { -1 };
            rows[i][i + 1] = s;
            rows[i + 1][i] = -s;
        }
        ExtMatrix::square(&rows).unwrap()
    }

    #[test]
    fn a2_and_a3() {
        for (n, order) in [(2, 5), (3, 6)] {
            let g = direct_automorphisms_triv(&LabeledSeed::root(a(n)), 1000, false).unwrap();
            assert_eq!(g.report.order, order);
            assert!(g.report.cyclic && g.report.closure_verified);
        }
    }

    #[test]
    fn a2_with_inverse() {
        let g = direct_automorphisms_triv(&LabeledSeed::root(a(2)), 1000, true).unwrap();
        assert_eq!(g.report.order, 10);
        assert!(!g.report.abelian);
    }

    #[test]
    fn cyclic_profiles() {
        let p = cyclic_product_orders(&[4, 2]);
        assert_eq!(p, BTreeMap::from([(1, 1), (2, 3), (4, 4)]));
        assert_eq!(cyclic_product_orders(&[5]), BTreeMap::from([(1, 1), (5, 4)]));
    }

    #[test]
    fn seed_map_algebra() {
        let root = LabeledSeed::root(a(3));
        let g = SeedMap { path: vec![0, 2], pi: vec![1, 2, 0] };
        assert!(g.compose(&g.inverse()).fixes(&root).unwrap());
        assert!(g.inverse().compose(&g).fixes(&root).unwrap());
        assert!(SeedMap::identity(3).fixes(&root).unwrap());
    }
}
