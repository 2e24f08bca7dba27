//! Labeled seeds with cluster variables expanded in the root seed's variables.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::ExtMatrix;
use crate::symbolic::{as_coefficient, RatExpr, TropMonomial};

/// A seed `(x, p, B)` reached from a fixed root. Cluster and frozen entries
/// are elements of the ambient field written in the root's `m` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSeed {
    cluster: Vec<RatExpr>,
    frozen: Vec<RatExpr>,
    matrix: ExtMatrix,
    path: Vec<usize>,
    term_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YVariables {
    pub y: Vec<TropMonomial>,
    pub yhat: Vec<RatExpr>,
}

/// Outcome of comparing two seeds for proportionality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proportionality {
    /// `Some(t)` when `x_i = t * x'_i` with `t` in the coefficient semifield.
    pub witnesses: Vec<Option<TropMonomial>>,
    pub yhat_equal: Vec<bool>,
    pub principal_equal: bool,
}

impl Proportionality {
    pub fn holds(&self) -> bool {
        self.principal_equal
            && self.witnesses.iter().all(|w| w.is_some())
            && self.yhat_equal.iter().all(|&b| b)
    }
}

impl LabeledSeed {
    /// The initial seed `(x_1, .., x_m)` with matrix `b`.
    pub fn root(b: ExtMatrix) -> LabeledSeed {
        let m = b.m();
        let n = b.n();
        LabeledSeed {
            cluster: (0..n).map(|i| RatExpr::var(m, i)).collect(),
            frozen: (n..m).map(|i| RatExpr::var(m, i)).collect(),
            matrix: b,
            path: Vec::new(),
            term_cap: None,
        }
    }

    /// Builds a seed from explicit parts. The caller is responsible for the
    /// cluster actually being reachable.
    pub fn from_parts(
        cluster: Vec<RatExpr>,
        frozen: Vec<RatExpr>,
        matrix: ExtMatrix,
        path: Vec<usize>,
    ) -> Result<LabeledSeed> {
        if cluster.len() != matrix.n() {
            return Err(Error::DimensionMismatch { expected: matrix.n(), found: cluster.len() });
        }
        if frozen.len() != matrix.m() - matrix.n() {
            return Err(Error::DimensionMismatch {
                expected: matrix.m() - matrix.n(),
                found: frozen.len(),
            });
        }
        Ok(LabeledSeed { cluster, frozen, matrix, path, term_cap: None })
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = Some(cap);
        self
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn m(&self) -> usize {
        self.matrix.m()
    }

    pub fn cluster(&self) -> &[RatExpr] {
        &self.cluster
    }

    pub fn frozen(&self) -> &[RatExpr] {
        &self.frozen
    }

    pub fn matrix(&self) -> &ExtMatrix {
        &self.matrix
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    /// All `m` variables of the seed: cluster first, then frozen.
    pub fn variables(&self) -> Vec<RatExpr> {
        self.cluster.iter().chain(&self.frozen).cloned().collect()
    }

    /// The exchange relation in direction `k` (0-based).
    pub fn mutate(&self, k: usize) -> Result<LabeledSeed> {
        let n = self.n();
        if k >= n {
            return Err(Error::DirectionOutOfRange { k: k + 1, n });
        }
        let nv = self.cluster[0].nvars();
        let mut plus = RatExpr::one(nv);
        let mut minus = RatExpr::one(nv);
        for (j, x) in self.variables().iter().enumerate() {
            let b = self.matrix.entry(j, k);
            if b.is_zero() {
                continue;
            }
            let e = b.abs().to_i64().ok_or(Error::ExponentOverflow)?;
            let p = x.pow(e)?;
            if b.is_positive() {
                plus = plus.mul(&p);
            } else {
                minus = minus.mul(&p);
            }
        }
        let xk = plus.add(&minus).div(&self.cluster[k])?;
        if let Some(cap) = self.term_cap {
            if xk.term_count() > cap {
                return Err(Error::TermCapExceeded { cap });
            }
        }
        let mut cluster = self.cluster.clone();
        cluster[k] = xk;
        let mut path = self.path.clone();
        if path.last() == Some(&k) {
            path.pop();
        } else {
            path.push(k);
        }
        Ok(LabeledSeed {
            cluster,
            frozen: self.frozen.clone(),
            matrix: self.matrix.mutate(k)?,
            path,
            term_cap: self.term_cap,
        })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<LabeledSeed> {
        let mut s = self.clone();
        for &k in path {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Relabels the exchangeable positions: new position `i` carries the old
    /// position `sigma[i]`. The recorded path is unchanged.
    pub fn relabeled(&self, sigma: &[usize]) -> LabeledSeed {
        LabeledSeed {
            cluster: sigma.iter().map(|&s| self.cluster[s].clone()).collect(),
            frozen: self.frozen.clone(),
            matrix: self.matrix.relabeled(sigma),
            path: self.path.clone(),
            term_cap: self.term_cap,
        }
    }

    /// Coefficient tuple `y` and hatted variables `yhat`, both in root variables.
    pub fn y_variables(&self) -> Result<YVariables> {
        let n = self.n();
        let nv = self.cluster[0].nvars();
        let vars = self.variables();
        let mut y = Vec::with_capacity(n);
        let mut yhat = Vec::with_capacity(n);
        for i in 0..n {
            let col: Vec<i64> = (n..self.m())
                .map(|r| self.matrix.entry(r, i).to_i64().ok_or(Error::ExponentOverflow))
                .collect::<Result<_>>()?;
            y.push(TropMonomial(col));
            let mut acc = RatExpr::one(nv);
            for (j, x) in vars.iter().enumerate() {
                let b = self.matrix.entry(j, i);
                if !b.is_zero() {
                    acc = acc.mul(&x.pow(b.to_i64().ok_or(Error::ExponentOverflow)?)?);
                }
            }
            yhat.push(acc);
        }
        Ok(YVariables { y, yhat })
    }

    /// Hatted variables as exponent vectors in the seed's own symbols:
    /// column `i` of the matrix.
    pub fn yhat_exponents(&self) -> Vec<Vec<BigInt>> {
        (0..self.n())
            .map(|i| (0..self.m()).map(|j| self.matrix.entry(j, i).clone()).collect())
            .collect()
    }

    /// Sets all frozen variables to 1 and drops the frozen rows.
    pub fn specialize_trivial(&self) -> LabeledSeed {
        let n = self.n();
        LabeledSeed {
            cluster: self.cluster.iter().map(|x| x.specialize_ones(n)).collect(),
            frozen: Vec::new(),
            matrix: self.matrix.principal_only(),
            path: self.path.clone(),
            term_cap: self.term_cap,
        }
    }

    /// The sorted printed cluster: a label-free key for the unlabeled seed.
    pub fn cluster_key(&self) -> Vec<String> {
        let mut v: Vec<String> = self.cluster.iter().map(|x| x.to_string()).collect();
        v.sort();
        v
    }

    /// True when every cluster variable has a monomial denominator.
    pub fn is_laurent(&self) -> bool {
        self.cluster.iter().all(|x| x.is_laurent())
    }

    pub fn to_json(&self) -> Value {
        let matrix: Vec<Vec<Value>> = self
            .matrix
            .rows()
            .iter()
            .map(|r| r.iter().map(int_json).collect())
            .collect();
        json!({
            "n": self.n(),
            "m": self.m(),
            "matrix": matrix,
            "path": self.path.iter().map(|k| k + 1).collect::<Vec<_>>(),
            "cluster": self.cluster.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// Compares `s` and `t` for proportionality: clusters agree up to
/// coefficients, hatted variables agree exactly and principal parts agree.
pub fn seed_proportional(s: &LabeledSeed, t: &LabeledSeed) -> Result<Proportionality> {
    let n = s.n();
    if t.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: t.n() });
    }
    let ys = s.y_variables()?;
    let yt = t.y_variables()?;
    proportional_parts(&s.cluster, &ys.yhat, s.matrix(), &t.cluster, &yt.yhat, t.matrix())
}

pub(crate) fn proportional_parts(
    xs: &[RatExpr],
    ys: &[RatExpr],
    bs: &ExtMatrix,
    xt: &[RatExpr],
    yt: &[RatExpr],
    bt: &ExtMatrix,
) -> Result<Proportionality> {
    let n = xs.len();
    let witnesses = xs
        .iter()
        .zip(xt)
        .map(|(a, b)| Ok(as_coefficient(&a.div(b)?, n)))
        .collect::<Result<Vec<_>>>()?;
    let yhat_equal = ys.iter().zip(yt).map(|(a, b)| a == b).collect();
    Ok(Proportionality {
        witnesses,
        yhat_equal,
        principal_equal: bs.same_principal(bt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seven_var_a2() -> ExtMatrix {
        ExtMatrix::from_i64(
            2,
            &[
                vec![0, 1],
                vec![-1, 0],
                vec![2, 1],
                vec![1, 1],
                vec![-1, 0],
                vec![0, -1],
                vec![1, -1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn exchange_in_seven_variable_example() {
        let s = LabeledSeed::root(seven_var_a2()).mutate(0).unwrap();
        let expected = RatExpr::parse("(x3^2*x4*x7 + x2*x5)/(x1)", 7).unwrap();
        assert_eq!(s.cluster()[0], expected);
        let triv = s.specialize_trivial();
        assert_eq!(triv.cluster()[0], RatExpr::parse("x1^-1*x2 + x1^-1", 2).unwrap());
    }

    #[test]
    fn double_mutation_cancels() {
        let s = LabeledSeed::root(seven_var_a2());
        let t = s.mutate(1).unwrap().mutate(1).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn pentagon_orbit() {
        let b = ExtMatrix::square(&[vec![0, 1], vec![-1, 0]]).unwrap();
        let mut s = LabeledSeed::root(b);
        let root = s.clone();
        let mut seen = std::collections::BTreeSet::new();
        for step in 0..10 {
            s = s.mutate(step % 2).unwrap();
            seen.insert(s.cluster_key());
        }
        assert_eq!(seen.len(), 5);
        assert_eq!(s.cluster(), root.cluster());
    }

    #[test]
    fn yhat_of_nongroup_root() {
        let b = ExtMatrix::from_i64(2, &[vec![0, 1], vec![-1, 0], vec![3, 0]]).unwrap();
        let y = LabeledSeed::root(b).y_variables().unwrap();
        assert_eq!(y.yhat[0], RatExpr::parse("x2^-1*x3^3", 3).unwrap());
        assert_eq!(y.yhat[1], RatExpr::parse("x1", 3).unwrap());
        assert_eq!(y.y[0], TropMonomial(vec![3]));
    }

    #[test]
    fn out_of_range_direction() {
        let b = ExtMatrix::square(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(
            LabeledSeed::root(b).mutate(2),
            Err(Error::DirectionOutOfRange { k: 3, n: 2 })
        );
    }

    #[test]
    fn term_cap_is_enforced() {
        let b = ExtMatrix::square(&[vec![0, 2], vec![-2, 0]]).unwrap();
        let s = LabeledSeed::root(b).with_term_cap(6);
        let r = s.mutate_path(&[0, 1, 0, 1, 0, 1]);
        assert_eq!(r, Err(Error::TermCapExceeded { cap: 6 }));
    }
}
