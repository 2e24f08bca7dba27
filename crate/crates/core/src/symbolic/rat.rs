use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::poly::{poly_gcd, Exponents, LaurentPoly};
use crate::error::{Error, Result};

/// An element of the ambient field, kept as a reduced fraction.
///
/// Canonical form: numerator and denominator share no non-unit factor,
/// the denominator has a positive leading coefficient, and whenever the
/// denominator is a monomial it is absorbed so that only a positive integer
/// constant may remain below the bar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatExpr {
    num: LaurentPoly,
    den: LaurentPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RatExpr {
    pub fn from_poly(p: LaurentPoly) -> Self {
        let nv = p.nvars();
        RatExpr { num: p, den: LaurentPoly::one(nv) }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(LaurentPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::from_poly(LaurentPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(LaurentPoly::var(nvars, i))
    }

    pub fn monomial(exps: Exponents) -> Self {
        let nv = exps.len();
        Self::from_poly(LaurentPoly::monomial(nv, exps, 1))
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(normalize(num, den))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn term_count(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return normalize(self.num.add(&o.num), self.den.clone());
        }
        normalize(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_laurent() && o.is_laurent() {
            return RatExpr::from_poly(self.num.mul(&o.num));
        }
        normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(normalize(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn inv(&self) -> Result<Self> {
        RatExpr::one(self.nvars()).div(self)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs();
        if base.is_laurent() {
            return Ok(RatExpr::from_poly(base.num.pow(e)));
        }
        Ok(RatExpr { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn apply(&self, op: RatOp, o: &Self) -> Result<Self> {
        match op {
            RatOp::Add => Ok(self.add(o)),
            RatOp::Sub => Ok(self.sub(o)),
            RatOp::Mul => Ok(self.mul(o)),
            RatOp::Div => self.div(o),
        }
    }

    /// Recomputes the canonical form; the identity on canonical values.
    pub fn renormalize(&self) -> Self {
        normalize(self.num.clone(), self.den.clone())
    }

    /// The single Laurent monomial `(exponents, coefficient)` if the value is one.
    pub fn as_monomial(&self) -> Option<(&Exponents, &BigInt)> {
        if self.is_laurent() && self.num.is_monomial() {
            self.num.terms().next()
        } else {
            None
        }
    }

    /// Sets every variable with index `>= keep` to 1.
    pub fn specialize_ones(&self, keep: usize) -> Self {
        normalize(self.num.specialize_ones(keep), self.den.specialize_ones(keep))
    }

    /// Field homomorphism `x_j -> images[j]`, evaluated exactly.
    pub fn substitute(&self, images: &[RatExpr]) -> Result<Self> {
        assert_eq!(images.len(), self.nvars());
        let nv = images.first().map(|e| e.nvars()).unwrap_or(0);
        let mono: Option<Vec<(&Exponents, &BigInt)>> =
            images.iter().map(|e| e.as_monomial()).collect();
        if let Some(mono) = mono {
            if mono.iter().all(|(_, c)| c.abs().is_one()) {
                let num = substitute_monomial(&self.num, &mono, nv);
                let den = substitute_monomial(&self.den, &mono, nv);
                return RatExpr::new(num, den);
            }
        }
        let n = eval_poly(&self.num, images, nv)?;
        let d = eval_poly(&self.den, images, nv)?;
        n.div(&d)
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix('(') {
            if let Some(idx) = rest.find(")/(") {
                let num = &rest[..idx];
                let den = rest[idx + 3..].trim_end_matches(')');
                return RatExpr::new(
                    LaurentPoly::parse(num, nvars)?,
                    LaurentPoly::parse(den, nvars)?,
                );
            }
        }
        Ok(RatExpr::from_poly(LaurentPoly::parse(t, nvars)?))
    }
}

fn substitute_monomial(p: &LaurentPoly, mono: &[(&Exponents, &BigInt)], nv: usize) -> LaurentPoly {
    let mut out = LaurentPoly::zero(nv);
    for (e, c) in p.terms() {
        let mut exps = vec![0i64; nv];
        let mut sign = BigInt::one();
        for (j, &ej) in e.iter().enumerate() {
            if ej == 0 {
                continue;
            }
            let (img, ic) = mono[j];
            for (o, x) in exps.iter_mut().zip(img.iter()) {
                *o += ej * x;
            }
            if ic.is_negative() && ej % 2 != 0 {
                sign = -sign;
            }
        }
        out = out.add(&LaurentPoly::monomial(nv, exps, c * sign));
    }
    out
}

fn eval_poly(p: &LaurentPoly, images: &[RatExpr], nv: usize) -> Result<RatExpr> {
    let mut acc = RatExpr::zero(nv);
    for (e, c) in p.terms() {
        let mut t = RatExpr::constant(nv, c.clone());
        for (j, &ej) in e.iter().enumerate() {
            if ej != 0 {
                t = t.mul(&images[j].pow(ej)?);
            }
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

fn normalize(num: LaurentPoly, den: LaurentPoly) -> RatExpr {
    let nv = num.nvars();
    if num.is_zero() {
        return RatExpr::zero(nv);
    }
    let en = num.min_exponents();
    let ed = den.min_exponents();
    let n0 = num.shift(&en.iter().map(|x| -x).collect::<Vec<_>>());
    let d0 = den.shift(&ed.iter().map(|x| -x).collect::<Vec<_>>());
    let e: Exponents = en.iter().zip(&ed).map(|(a, b)| a - b).collect();

    if let Some(c) = d0.constant_value().cloned() {
        return absorb_constant(n0, c, &e);
    }
    if let Some(q) = n0.exact_div_poly(&d0) {
        return RatExpr::from_poly(q.shift(&e));
    }
    let g = poly_gcd(&n0, &d0);
    let mut n1 = n0.exact_div_poly(&g).expect("gcd divides numerator");
    let mut d1 = d0.exact_div_poly(&g).expect("gcd divides denominator");
    if let Some(c) = d1.constant_value().cloned() {
        return absorb_constant(n1, c, &e);
    }
    if d1.leading_coefficient().is_negative() {
        n1 = n1.neg();
        d1 = d1.neg();
    }
    let pos_e: Exponents = e.iter().map(|&x| x.max(0)).collect();
    let neg_e: Exponents = e.iter().map(|&x| (-x).max(0)).collect();
    RatExpr {
        num: n1.shift(&pos_e),
        den: d1.shift(&neg_e),
    }
}

fn absorb_constant(n: LaurentPoly, c: BigInt, e: &[i64]) -> RatExpr {
    let nv = n.nvars();
    let g = n.content().gcd(&c);
    let mut c = c / &g;
    let mut n = n.div_const(&g);
    if c.is_negative() {
        c = -c;
        n = n.neg();
    }
    RatExpr {
        num: n.shift(e),
        den: LaurentPoly::constant(nv, c),
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// An element of the tropical semifield on the frozen variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropMonomial(pub Vec<i64>);

impl TropMonomial {
    pub fn zero(len: usize) -> Self {
        TropMonomial(vec![0; len])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        check_len(self, o)?;
        Ok(TropMonomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect()))
    }
}

fn check_len(u: &TropMonomial, v: &TropMonomial) -> Result<()> {
    if u.0.len() != v.0.len() {
        return Err(Error::DimensionMismatch {
            expected: u.0.len(),
            found: v.0.len(),
        });
    }
    Ok(())
}

/// Tropical addition: componentwise minimum of exponents.
pub fn trop_add(u: &TropMonomial, v: &TropMonomial) -> Result<TropMonomial> {
    check_len(u, v)?;
    Ok(TropMonomial(u.0.iter().zip(&v.0).map(|(a, b)| *a.min(b)).collect()))
}

/// Returns the frozen exponent vector if `e` is a coefficient-1 Laurent
/// monomial in the frozen variables `x_{n+1}, ..`.
pub fn as_coefficient(e: &RatExpr, n: usize) -> Option<TropMonomial> {
    let (exps, c) = e.as_monomial()?;
    if !c.is_one() || exps[..n].iter().any(|&x| x != 0) {
        return None;
    }
    Some(TropMonomial(exps[n..].to_vec()))
}

/// Witness for `x ≍ y`: the coefficient `x / y` when it lies in the semifield.
pub fn proportional(x: &RatExpr, y: &RatExpr, n: usize) -> Result<Option<TropMonomial>> {
    Ok(as_coefficient(&x.div(y)?, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str, nv: usize) -> RatExpr {
        RatExpr::parse(s, nv).unwrap()
    }

    #[test]
    fn cancels_to_one() {
        let a = r("x1*x2^-1", 2);
        let b = r("x2*x1^-1", 2);
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn exchange_relation_is_laurent() {
        let num = r("x2 + x3^3", 3);
        let x1 = RatExpr::var(3, 0);
        let q = num.div(&x1).unwrap();
        assert!(q.is_laurent());
        assert_eq!(q, num.mul(&r("x1^-1", 3)));
    }

    #[test]
    fn non_monomial_denominator_is_reduced() {
        let a = r("(x1^2 + -1)/(x1 + 1)", 1);
        assert_eq!(a, r("x1 + -1", 1));
        let b = r("(2*x1 + 2)/(-4*x1^2 + 4)", 1);
        assert_eq!(b.to_string(), "(-1)/(2*x1^1+-2)");
    }

    #[test]
    fn constant_denominator_kept() {
        let a = r("x1", 1).div(&RatExpr::constant(1, -2)).unwrap();
        assert_eq!(a.to_string(), "(-1*x1^1)/(2)");
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(RatExpr::one(2).div(&RatExpr::zero(2)), Err(Error::DivisionByZero));
    }

    #[test]
    fn trop_examples() {
        let u = TropMonomial(vec![2, 1]);
        let v = TropMonomial(vec![0, 3]);
        assert_eq!(trop_add(&u, &v).unwrap(), TropMonomial(vec![0, 1]));
        assert_eq!(trop_add(&u, &u).unwrap(), u);
        assert!(trop_add(&u, &TropMonomial(vec![1])).is_err());
    }

    #[test]
    fn coefficient_membership() {
        assert_eq!(as_coefficient(&r("x3^-3", 3), 2), Some(TropMonomial(vec![-3])));
        assert_eq!(as_coefficient(&r("x1*x3", 3), 2), None);
        assert_eq!(as_coefficient(&r("2*x3", 3), 2), None);
    }
}
