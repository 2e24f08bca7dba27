//! Monomial maps between seeds: quasi-homomorphisms, their verification,
//! composition and classification.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{parse_err, Error, Result};
use crate::explorer::{explore, ExploreMode};
use crate::lattice::{is_unimodular, lat_contains, lat_equal, mat_mul, solve_block_matrix};
use crate::matrix::ExtMatrix;
use crate::seed::{int_json, proportional_parts, LabeledSeed, Proportionality};
use crate::symbolic::{LaurentPoly, RatExpr};

/// `Psi(x_j) = prod_i xbar_i^{m_ij}`, where `x_j` are the source seed's
/// own variables and `xbar_i` the target seed's variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    matrix: Vec<Vec<BigInt>>,
    source: LabeledSeed,
    target: LabeledSeed,
}

impl MonomialMap {
    pub fn new(matrix: Vec<Vec<BigInt>>, source: LabeledSeed, target: LabeledSeed) -> Result<Self> {
        if matrix.len() != target.m() {
            return Err(Error::DimensionMismatch { expected: target.m(), found: matrix.len() });
        }
        for row in &matrix {
            if row.len() != source.m() {
                return Err(Error::DimensionMismatch { expected: source.m(), found: row.len() });
            }
        }
        Ok(MonomialMap { matrix, source, target })
    }

    pub fn from_i64(matrix: &[Vec<i64>], source: LabeledSeed, target: LabeledSeed) -> Result<Self> {
        let rows = matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::new(rows, source, target)
    }

    pub fn identity(seed: LabeledSeed) -> Self {
        let m = seed.m();
        let matrix = (0..m)
            .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        MonomialMap { matrix, source: seed.clone(), target: seed }
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn source(&self) -> &LabeledSeed {
        &self.source
    }

    pub fn target(&self) -> &LabeledSeed {
        &self.target
    }

    fn column(&self, j: usize) -> Vec<BigInt> {
        self.matrix.iter().map(|r| r[j].clone()).collect()
    }

    fn monomial_in_target(&self, exps: &[BigInt]) -> Result<RatExpr> {
        let vars = self.target.variables();
        let mut acc = RatExpr::one(vars[0].nvars());
        for (v, e) in vars.iter().zip(exps) {
            if !e.is_zero() {
                acc = acc.mul(&v.pow(e.to_i64().ok_or(Error::ExponentOverflow)?)?);
            }
        }
        Ok(acc)
    }

    /// Images of the source's own variables, written in root variables.
    pub fn images(&self) -> Result<Vec<RatExpr>> {
        (0..self.source.m()).map(|j| self.monomial_in_target(&self.column(j))).collect()
    }

    /// Applies the map to `e`, given in the source seed's own variables.
    pub fn substitute(&self, e: &RatExpr) -> Result<RatExpr> {
        e.substitute(&self.images()?)
    }

    /// Image of the source seed: cluster images and hatted-variable images.
    fn image_parts(&self) -> Result<(Vec<RatExpr>, Vec<RatExpr>)> {
        let n = self.source.n();
        let cluster = (0..n)
            .map(|j| self.monomial_in_target(&self.column(j)))
            .collect::<Result<Vec<_>>>()?;
        let yhat = self
            .source
            .yhat_exponents()
            .iter()
            .map(|col| {
                let exps: Vec<BigInt> = self
                    .matrix
                    .iter()
                    .map(|r| r.iter().zip(col).map(|(a, b)| a * b).sum())
                    .collect();
                self.monomial_in_target(&exps)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((cluster, yhat))
    }

    /// Compares the image of the source seed with `compare`.
    pub fn verify_against(&self, compare: &LabeledSeed) -> Result<Proportionality> {
        let (xs, ys) = self.image_parts()?;
        let yc = compare.y_variables()?;
        proportional_parts(&xs, &ys, self.source.matrix(), compare.cluster(), &yc.yhat, compare.matrix())
    }

    /// Checks that the image of the source seed is proportional to the target.
    pub fn verify_quasi_hom(&self) -> Result<Proportionality> {
        self.verify_against(&self.target)
    }

    /// Identity test for an endomorphism: the image of the source seed is
    /// proportional to the source seed itself.
    pub fn proportional_to_identity(&self) -> Result<bool> {
        Ok(self.verify_against(&self.source)?.holds())
    }

    pub fn m1(&self) -> Vec<Vec<BigInt>> {
        let n = self.source.n();
        self.matrix[n..].iter().map(|r| r[..n].to_vec()).collect()
    }

    pub fn m2(&self) -> Vec<Vec<BigInt>> {
        let n = self.source.n();
        self.matrix[n..].iter().map(|r| r[n..].to_vec()).collect()
    }

    pub fn m2_unimodular(&self) -> bool {
        is_unimodular(&self.m2())
    }

    /// The induced field map on root variables, valid when the source is a root seed.
    pub fn as_root_map(&self) -> Result<RootMap> {
        Ok(RootMap { images: self.images()? })
    }

    /// Parses one `x<j> -> <monomial>` line per source variable; monomials
    /// are written in the target's variables.
    pub fn parse(text: &str, source: LabeledSeed, target: LabeledSeed) -> Result<Self> {
        let m = source.m();
        let mbar = target.m();
        let mut cols: Vec<Option<Vec<BigInt>>> = vec![None; m];
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| parse_err(ln, 1, "expected `x<j> -> <monomial>`"))?;
            let j: usize = lhs
                .trim()
                .strip_prefix('x')
                .and_then(|s| s.parse().ok())
                .filter(|&j| j >= 1 && j <= m)
                .ok_or_else(|| parse_err(ln, 1, format!("invalid source variable `{}`", lhs.trim())))?;
            let col = line.find("->").unwrap() + 3;
            let p = LaurentPoly::parse(rhs, mbar).map_err(|e| match e {
                Error::Parse { message, .. } => parse_err(ln, col, message),
                other => other,
            })?;
            let exps = match p.terms().next() {
                Some((e, c)) if p.len() == 1 && c.is_one() => e.clone(),
                _ => return Err(parse_err(ln, col, "image must be a monomial with coefficient 1")),
            };
            if cols[j - 1].is_some() {
                return Err(parse_err(ln, 1, format!("x{} given twice", j)));
            }
            cols[j - 1] = Some(exps.into_iter().map(BigInt::from).collect());
        }
        let mut matrix = vec![vec![BigInt::zero(); m]; mbar];
        for (j, c) in cols.into_iter().enumerate() {
            let c = c.ok_or_else(|| parse_err(1, 1, format!("missing image of x{}", j + 1)))?;
            for (i, e) in c.into_iter().enumerate() {
                matrix[i][j] = e;
            }
        }
        MonomialMap::new(matrix, source, target)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "matrix": self.matrix.iter().map(|r| r.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "source_path": self.source.path().iter().map(|k| k + 1).collect::<Vec<_>>(),
            "target_path": self.target.path().iter().map(|k| k + 1).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mbar = self.target.m();
        for j in 0..self.source.m() {
            let exps: Vec<i64> = self.column(j).iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect();
            writeln!(f, "x{} -> {}", j + 1, LaurentPoly::monomial(mbar, exps, 1))?;
        }
        Ok(())
    }
}

/// `outer ∘ inner` by matrix product. Only dimensions are checked; the
/// caller is responsible for `inner`'s target being `outer`'s source.
pub fn compose(outer: &MonomialMap, inner: &MonomialMap) -> Result<MonomialMap> {
    if outer.source.m() != inner.target.m() {
        return Err(Error::DimensionMismatch { expected: inner.target.m(), found: outer.source.m() });
    }
    MonomialMap::new(
        mat_mul(&outer.matrix, &inner.matrix),
        inner.source.clone(),
        outer.target.clone(),
    )
}

/// Two maps with a common source are proportional when their images of the
/// source seed are.
pub fn maps_proportional(f: &MonomialMap, g: &MonomialMap) -> Result<bool> {
    let (xf, yf) = f.image_parts()?;
    let (xg, yg) = g.image_parts()?;
    Ok(proportional_parts(&xf, &yf, f.target.matrix(), &xg, &yg, g.target.matrix())?.holds())
}

/// A quasi-homomorphism taking `s` to a seed proportional to `t`, when one exists.
pub fn quasi_hom_between(s: &LabeledSeed, t: &LabeledSeed) -> Result<Option<MonomialMap>> {
    if s.n() != t.n() || !s.matrix().same_principal(t.matrix()) {
        return Ok(None);
    }
    if !lat_contains(s.matrix(), t.matrix()) {
        return Ok(None);
    }
    match solve_block_matrix(s.matrix(), t.matrix())? {
        Some(sol) => Ok(Some(MonomialMap::new(sol.matrix, s.clone(), t.clone())?)),
        None => Ok(None),
    }
}

/// A field endomorphism given by the images of the root variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootMap {
    pub images: Vec<RatExpr>,
}

impl RootMap {
    pub fn identity(m: usize) -> Self {
        RootMap { images: (0..m).map(|i| RatExpr::var(m, i)).collect() }
    }

    pub fn apply(&self, e: &RatExpr) -> Result<RatExpr> {
        e.substitute(&self.images)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &RootMap) -> Result<RootMap> {
        Ok(RootMap {
            images: inner.images.iter().map(|e| self.apply(e)).collect::<Result<_>>()?,
        })
    }

    pub fn pow(&self, k: usize) -> Result<RootMap> {
        let mut acc = RootMap::identity(self.images.len());
        for _ in 0..k {
            acc = self.after(&acc)?;
        }
        Ok(acc)
    }

    /// Compares the image of `seed` with `compare`.
    pub fn image_proportional(&self, seed: &LabeledSeed, compare: &LabeledSeed) -> Result<Proportionality> {
        let xs = seed.cluster().iter().map(|e| self.apply(e)).collect::<Result<Vec<_>>>()?;
        let ys = seed
            .y_variables()?
            .yhat
            .iter()
            .map(|e| self.apply(e))
            .collect::<Result<Vec<_>>>()?;
        let yc = compare.y_variables()?;
        proportional_parts(&xs, &ys, seed.matrix(), compare.cluster(), &yc.yhat, compare.matrix())
    }

    pub fn fixes_seed(&self, root: &LabeledSeed) -> Result<bool> {
        Ok(self.image_proportional(root, root)?.holds())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapClass {
    ClusterAutomorphism { direct: bool },
    WeakClusterAutomorphism { direct: bool },
    QuasiAutomorphismOnly,
    NotQuasi,
}

/// Each class criterion evaluated on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criteria {
    pub cluster: bool,
    pub weak: bool,
    pub quasi: bool,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub class: MapClass,
    pub criteria: Criteria,
    pub direct: bool,
    pub inverse: bool,
    pub m1_zero: bool,
    pub m2_permutation: bool,
    pub m2_unimodular: bool,
    pub frozen_relation: bool,
    pub lat_equal: bool,
    pub proportional: bool,
    /// Number of seeds at which the frozen relation was checked.
    pub samples: usize,
    /// True when the samples covered the whole (finite) exchange graph.
    pub exhaustive: bool,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        let class = match self.class {
            MapClass::ClusterAutomorphism { .. } => "cluster_automorphism",
            MapClass::WeakClusterAutomorphism { .. } => "weak_cluster_automorphism",
            MapClass::QuasiAutomorphismOnly => "quasi_automorphism",
            MapClass::NotQuasi => "not_quasi",
        };
        json!({
            "class": class,
            "direct": self.direct,
            "inverse": self.inverse,
            "m1_zero": self.m1_zero,
            "m2_permutation": self.m2_permutation,
            "m2_unimodular": self.m2_unimodular,
            "frozen_relation": self.frozen_relation,
            "lat_equal": self.lat_equal,
            "proportional": self.proportional,
            "samples": self.samples,
            "exhaustive": self.exhaustive,
        })
    }
}

fn is_permutation_matrix(a: &[Vec<BigInt>]) -> bool {
    let k = a.len();
    if a.iter().any(|r| r.len() != k) {
        return false;
    }
    let mut col_used = vec![false; k];
    for r in a {
        let ones: Vec<usize> = (0..k).filter(|&j| r[j].is_one()).collect();
        if ones.len() != 1 || r.iter().filter(|x| !x.is_zero()).count() != 1 || col_used[ones[0]] {
            return false;
        }
        col_used[ones[0]] = true;
    }
    true
}

/// Default node cap when classification enumerates sample seeds itself.
pub const CLASSIFY_CAP: usize = 5000;

/// Classifies an endomorphism. Without explicit `samples`, the frozen
/// relation is checked at every seed of the source's exchange graph, or at
/// the first `CLASSIFY_CAP` seeds when the graph is larger.
pub fn classify(map: &MonomialMap, samples: Option<&[Vec<usize>]>) -> Result<Classification> {
    let s = map.source.matrix();
    let t = map.target.matrix();
    let direct = s.same_principal(t);
    let inverse = s.same_principal(&t.negated());
    let m1_zero = map.m1().iter().flatten().all(|x| x.is_zero());
    let m2 = map.m2();
    let m2_permutation = is_permutation_matrix(&m2);
    let m2_unimodular = m2.len() == s.m() - s.n() && is_unimodular(&m2);

    let (paths, exhaustive): (Vec<Vec<usize>>, bool) = match samples {
        Some(p) => (p.to_vec(), false),
        None => {
            let g = explore(&map.source, CLASSIFY_CAP, ExploreMode::Symbolic)?;
            let paths = g.nodes.iter().map(|nd| nd.path.clone()).collect();
            (paths, g.finite)
        }
    };
    let sign = if direct { BigInt::one() } else { -BigInt::one() };
    let mut frozen_relation = (direct || inverse) && m2.len() == t.m() - t.n();
    if frozen_relation {
        for w in &paths {
            let bw = s.mutate_path(w)?;
            let tw = t.mutate_path(w)?;
            let rhs = mat_mul(&m2, bw.frozen_rows());
            let ok = rhs
                .iter()
                .zip(tw.frozen_rows())
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| &(x * &sign) == y));
            if !ok {
                frozen_relation = false;
                break;
            }
        }
    }
    let lat = lat_equal(s, t);
    let proportional = direct && map.verify_quasi_hom()?.holds();
    let criteria = Criteria {
        cluster: (direct || inverse) && m1_zero && m2_permutation && frozen_relation,
        weak: (direct || inverse) && m1_zero && m2_unimodular && frozen_relation,
        quasi: direct && lat && proportional,
    };
    let class = if criteria.cluster {
        MapClass::ClusterAutomorphism { direct }
    } else if criteria.weak {
        MapClass::WeakClusterAutomorphism { direct }
    } else if criteria.quasi {
        MapClass::QuasiAutomorphismOnly
    } else {
        MapClass::NotQuasi
    };
    Ok(Classification {
        class,
        criteria,
        direct,
        inverse,
        m1_zero,
        m2_permutation,
        m2_unimodular,
        frozen_relation,
        lat_equal: lat,
        proportional,
        samples: paths.len(),
        exhaustive,
    })
}

/// A quasi-inverse of `map`, found by solving in the reverse direction.
pub fn quasi_inverse(map: &MonomialMap) -> Result<Option<MonomialMap>> {
    if !lat_equal(map.source.matrix(), map.target.matrix()) {
        return Ok(None);
    }
    quasi_hom_between(&map.target, &map.source)
}

/// Whether `b` and `bp` admit a quasi-automorphism taking one seed to the other.
pub fn quasi_equivalent(b: &ExtMatrix, bp: &ExtMatrix) -> bool {
    b.same_principal(bp) && lat_equal(b, bp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nongroup() -> (LabeledSeed, LabeledSeed) {
        let b = ExtMatrix::from_i64(2, &[vec![0, 1], vec![-1, 0], vec![3, 0]]).unwrap();
        let s = LabeledSeed::root(b);
        let t = s.mutate_path(&[0, 1]).unwrap();
        (s, t)
    }

    #[test]
    fn printed_psi_and_phi() {
        let (s, t) = nongroup();
        let psi = MonomialMap::parse("x1 -> x1*x3^-3\nx2 -> x2*x3^6\nx3 -> x3^2\n", s.clone(), t.clone()).unwrap();
        let rep = psi.verify_quasi_hom().unwrap();
        assert!(rep.holds());
        assert_eq!(rep.witnesses[0].as_ref().unwrap().0, vec![-3]);
        assert_eq!(rep.witnesses[1].as_ref().unwrap().0, vec![6]);
        let phi = MonomialMap::parse("x1 -> x1*x3^6\nx2 -> x2*x3^-3\nx3 -> x3^2\n", t, s).unwrap();
        assert!(phi.verify_quasi_hom().unwrap().holds());
        let comp = compose(&phi, &psi).unwrap();
        assert!(comp.proportional_to_identity().unwrap());
        assert!(!psi.m2_unimodular());
        let sq = compose(&psi, &psi).unwrap();
        assert_eq!(sq.m2(), vec![vec![BigInt::from(4)]]);
    }

    #[test]
    fn perturbed_exponent_breaks_yhat() {
        let (s, t) = nongroup();
        let bad = MonomialMap::parse("x1 -> x1*x3^-3\nx2 -> x2*x3^5\nx3 -> x3^2\n", s, t).unwrap();
        let rep = bad.verify_quasi_hom().unwrap();
        assert!(!rep.holds());
        assert!(rep.yhat_equal.iter().any(|&b| !b));
    }

    #[test]
    fn found_map_is_proportional_to_printed() {
        let (s, t) = nongroup();
        let found = quasi_hom_between(&s, &t).unwrap().unwrap();
        assert!(found.verify_quasi_hom().unwrap().holds());
        let psi = MonomialMap::parse("x1 -> x1*x3^-3\nx2 -> x2*x3^6\nx3 -> x3^2\n", s, t).unwrap();
        assert!(maps_proportional(&found, &psi).unwrap());
    }

    #[test]
    fn identity_is_cluster_automorphism() {
        let (s, _) = nongroup();
        let id = MonomialMap::identity(s);
        let c = classify(&id, None).unwrap();
        assert_eq!(c.class, MapClass::ClusterAutomorphism { direct: true });
    }

    #[test]
    fn map_text_roundtrip() {
        let (s, t) = nongroup();
        let psi = MonomialMap::parse("x1 -> x1*x3^-3\nx2 -> x2*x3^6\nx3 -> x3^2\n", s.clone(), t.clone()).unwrap();
        let again = MonomialMap::parse(&psi.to_string(), s, t).unwrap();
        assert_eq!(psi, again);
    }
}
