use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{parse_err, Result};

pub type Exponents = Vec<i64>;

/// A Laurent polynomial over the integers in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

/// Graded lexicographic order: total degree first, then lexicographic.
pub fn grlex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), nvars);
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_value().map_or(false, |c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_value(&self) -> Option<&BigInt> {
        if self.terms.is_empty() {
            return None;
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c);
            }
        }
        None
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.constant_value().is_some()
    }

    /// Leading term under graded lexicographic order.
    pub fn leading(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent over all terms (zero vector for 0).
    pub fn min_exponents(&self) -> Exponents {
        let mut it = self.terms.keys();
        let mut out = match it.next() {
            Some(e) => e.clone(),
            None => return vec![0; self.nvars],
        };
        for e in it {
            for (o, x) in out.iter_mut().zip(e) {
                *o = (*o).min(*x);
            }
        }
        out
    }

    /// Divides every coefficient by `c`, which must divide the content.
    pub fn div_const(&self, c: &BigInt) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k / c)).collect(),
        }
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn degree_in(&self, v: usize) -> i64 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(i64::MIN)
    }

    /// Coefficients with respect to `x_v`, each with the `x_v` exponent cleared.
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] = 0;
            out.entry(e[v])
                .or_insert_with(|| LaurentPoly::zero(self.nvars))
                .add_term(e2, c.clone());
        }
        out
    }

    fn coeff_in(&self, v: usize, d: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == d {
                let mut e2 = e.clone();
                e2[v] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] != 0)
    }

    /// Exact division of polynomials (non-negative exponents), or `None`
    /// when `d` does not divide `self`.
    pub fn exact_div_poly(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (ld_e, ld_c) = {
            let (e, c) = d.leading().unwrap();
            (e.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.nvars);
        while let Some((le, lc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Exponents = le.iter().zip(&ld_e).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let (qc, r) = lc.div_rem(&ld_c);
            if !r.is_zero() {
                return None;
            }
            let t = LaurentPoly::monomial(self.nvars, qe, qc);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Exact division of Laurent polynomials.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero(self.nvars));
        }
        let ms = self.min_exponents();
        let md = d.min_exponents();
        let a = self.shift(&neg(&ms));
        let b = d.shift(&neg(&md));
        let q = a.exact_div_poly(&b)?;
        let s: Exponents = ms.iter().zip(&md).map(|(x, y)| x - y).collect();
        Some(q.shift(&s))
    }

    /// Sets variables with index `>= keep` to 1 and drops them.
    pub fn specialize_ones(&self, keep: usize) -> Self {
        let mut out = LaurentPoly::zero(keep);
        for (e, c) in &self.terms {
            out.add_term(e[..keep].to_vec(), c.clone());
        }
        out
    }

    /// Terms in descending graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }

    /// Parses the printing format: terms `c*x1^a1*...` joined by `+`.
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let mut out = LaurentPoly::zero(nvars);
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(parse_err(1, 1, "empty expression"));
        }
        for term in split_terms(&s) {
            let (e, c) = parse_term(term, nvars)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

fn neg(v: &[i64]) -> Exponents {
    v.iter().map(|x| -x).collect()
}

fn split_terms(s: &str) -> Vec<&str> {
    // `+` separates terms; a `-` directly after `^` belongs to an exponent.
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if ch == '+' && i > start {
            out.push(&s[start..i]);
            start = i + 1;
        } else if ch == '+' {
            start = i + 1;
        }
    }
    if start < s.len() {
        out.push(&s[start..]);
    }
    out
}

fn parse_term(term: &str, nvars: usize) -> Result<(Exponents, BigInt)> {
    let mut coef = BigInt::one();
    let mut exps = vec![0i64; nvars];
    let mut sign = BigInt::one();
    let mut body = term;
    if let Some(rest) = body.strip_prefix('-') {
        sign = -sign;
        body = rest;
    }
    for (idx, factor) in body.split('*').enumerate() {
        if factor.is_empty() {
            return Err(parse_err(1, 1, format!("empty factor in `{}`", term)));
        }
        if let Some(var) = factor.strip_prefix('x') {
            let (name, pow) = match var.split_once('^') {
                Some((a, b)) => (a, b),
                None => (var, "1"),
            };
            let i: usize = name
                .parse()
                .map_err(|_| parse_err(1, 1, format!("bad variable `x{}`", name)))?;
            if i == 0 || i > nvars {
                return Err(parse_err(1, 1, format!("variable x{} out of range", i)));
            }
            let p: i64 = pow
                .parse()
                .map_err(|_| parse_err(1, 1, format!("bad exponent `{}`", pow)))?;
            exps[i - 1] += p;
        } else if idx == 0 {
            coef = factor
                .parse()
                .map_err(|_| parse_err(1, 1, format!("bad coefficient `{}`", factor)))?;
        } else {
            return Err(parse_err(1, 1, format!("unexpected factor `{}`", factor)));
        }
    }
    Ok((exps, sign * coef))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                let mut s = c.to_string();
                for (i, &x) in e.iter().enumerate() {
                    if x != 0 {
                        s.push_str(&format!("*x{}^{}", i + 1, x));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Greatest common divisor of two polynomials with non-negative exponents,
/// normalized to a positive leading coefficient.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let common: Exponents = ma.iter().zip(&mb).map(|(x, y)| (*x).min(*y)).collect();
    let a1 = a.shift(&neg(&ma));
    let b1 = b.shift(&neg(&mb));
    gcd_no_monomial(&a1, &b1).shift(&common)
}

fn normalize_sign(p: LaurentPoly) -> LaurentPoly {
    if p.leading_coefficient().is_negative() {
        p.neg()
    } else {
        p
    }
}

fn gcd_no_monomial(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let nv = a.nvars;
    if a.is_constant() || b.is_constant() || a.is_monomial() || b.is_monomial() {
        return LaurentPoly::constant(nv, a.content().gcd(&b.content()));
    }
    let v = match (0..nv).find(|&v| a.uses_var(v) || b.uses_var(v)) {
        Some(v) => v,
        None => return LaurentPoly::constant(nv, a.content().gcd(&b.content())),
    };
    if !b.uses_var(v) {
        return poly_gcd(&content_in(a, v), b);
    }
    if !a.uses_var(v) {
        return poly_gcd(a, &content_in(b, v));
    }
    let vars: Vec<usize> = (0..nv).filter(|&v| a.uses_var(v) || b.uses_var(v)).collect();
    match heuristic_gcd(a, b, &vars) {
        Some(h) => normalize_sign(h),
        None => prs_gcd(a, b, v),
    }
}

/// Primitive part times content gcd, with the primitive part taken from a
/// subresultant remainder sequence in `x_v`.
fn prs_gcd(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let nv = a.nvars;
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.exact_div_poly(&ca).expect("content divides");
    let pb = b.exact_div_poly(&cb).expect("content divides");
    let gc = poly_gcd(&ca, &cb);
    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    // Subresultant remainder sequence.
    let mut lead = LaurentPoly::one(nv);
    let mut h = LaurentPoly::one(nv);
    loop {
        let d = (f.degree_in(v) - g.degree_in(v)) as u64;
        let r = prem(&f, &g, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            g = LaurentPoly::one(nv);
            break;
        }
        let div = lead.mul(&h.pow(d));
        f = g;
        g = r.exact_div_poly(&div).expect("subresultant division is exact");
        lead = f.coeff_in(v, f.degree_in(v));
        h = if d == 0 {
            h
        } else {
            lead.pow(d).exact_div_poly(&h.pow(d - 1)).expect("subresultant division is exact")
        };
    }
    let g = primitive_part(&g, v);
    normalize_sign(gc.mul(&g))
}

fn max_norm(p: &LaurentPoly) -> BigInt {
    p.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Sets `x_v = x`.
fn eval_at(p: &LaurentPoly, v: usize, x: &BigInt) -> LaurentPoly {
    let mut out = LaurentPoly::zero(p.nvars);
    for (e, c) in &p.terms {
        let mut e2 = e.clone();
        e2[v] = 0;
        out.add_term(e2, c * x.pow(e[v] as u32));
    }
    out
}

/// Inverse of `eval_at` on coefficients written in balanced base `x`.
fn interpolate(h: &LaurentPoly, v: usize, x: &BigInt) -> LaurentPoly {
    let half = x / 2;
    let mut out = LaurentPoly::zero(h.nvars);
    for (e, c) in &h.terms {
        let mut c = c.clone();
        let mut k = 0;
        while !c.is_zero() {
            let mut d = c.mod_floor(x);
            if d > half {
                d -= x;
            }
            c = (c - &d) / x;
            let mut e2 = e.clone();
            e2[v] = k;
            out.add_term(e2, d);
            k += 1;
        }
    }
    out
}

/// Heuristic gcd by evaluation at a large integer and balanced-digit
/// interpolation; `None` when every attempt fails, in which case the
/// caller falls back to remainder sequences.
fn heuristic_gcd(f: &LaurentPoly, g: &LaurentPoly, vars: &[usize]) -> Option<LaurentPoly> {
    let nv = f.nvars;
    let common = f.content().gcd(&g.content());
    if vars.is_empty() {
        return Some(LaurentPoly::constant(nv, common));
    }
    let f = f.div_const(&common);
    let g = g.div_const(&common);
    let (fnorm, gnorm) = (max_norm(&f), max_norm(&g));
    let b: BigInt = BigInt::from(2) * fnorm.clone().min(gnorm.clone()) + 29;
    let lead = |p: &LaurentPoly, n: &BigInt| n / p.leading_coefficient().abs();
    let mut x = (b.clone().min(BigInt::from(99) * b.sqrt()))
        .max(BigInt::from(2) * lead(&f, &fnorm).min(lead(&g, &gnorm)) + 4);
    let (v, rest) = (vars[0], &vars[1..]);
    for _ in 0..6 {
        let ff = eval_at(&f, v, &x);
        let gg = eval_at(&g, v, &x);
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(h) = heuristic_gcd(&ff, &gg, rest) {
                let h = interpolate(&h, v, &x);
                if !h.is_zero() {
                    let h = h.div_const(&h.content());
                    if f.exact_div_poly(&h).is_some() && g.exact_div_poly(&h).is_some() {
                        return Some(h.scale(&common));
                    }
                }
            }
        }
        x = BigInt::from(73794) * &x * x.sqrt().sqrt() / 27011;
    }
    None
}

fn content_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let mut acc = LaurentPoly::zero(p.nvars);
    for (_, c) in p.coeffs_in(v) {
        acc = poly_gcd(&acc, &c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn primitive_part(p: &LaurentPoly, v: usize) -> LaurentPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    normalize_sign(p.exact_div_poly(&c).expect("content divides"))
}

/// Pseudo-remainder of `f` by `g` in `x_v`, scaled by `lc(g)^(deg f - deg g + 1)`.
fn prem(f: &LaurentPoly, g: &LaurentPoly, v: usize) -> LaurentPoly {
    let dg = g.degree_in(v);
    let lc = g.coeff_in(v, dg);
    let mut steps = f.degree_in(v) - dg + 1;
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lr = r.coeff_in(v, dr);
        let mut e = vec![0; r.nvars];
        e[v] = dr - dg;
        let t = lr.shift(&e);
        r = r.mul(&lc).sub(&t.mul(g));
        steps -= 1;
    }
    if steps > 0 {
        r = r.mul(&lc.pow(steps as u64));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, 3).unwrap()
    }

    #[test]
    fn print_parse_roundtrip() {
        let a = p("x1^2*x3^-1 + -3*x2 + 7");
        assert_eq!(a.to_string(), "1*x1^2*x3^-1+-3*x2^1+7");
        assert_eq!(LaurentPoly::parse(&a.to_string(), 3).unwrap(), a);
    }

    #[test]
    fn gcd_of_products() {
        let f = p("x1 + x2");
        let g = p("x1*x3 + 2");
        let h = p("x2^2 + x3");
        let a = f.mul(&g);
        let b = f.mul(&h).scale(&BigInt::from(-2));
        assert_eq!(poly_gcd(&a, &b), f);
    }

    #[test]
    fn gcd_keeps_common_monomials_and_content() {
        let a = p("2*x1^2*x2 + 4*x1^2");
        let b = p("6*x1*x2 + 12*x1");
        assert_eq!(poly_gcd(&a, &b), p("2*x1*x2 + 4*x1"));
    }

    #[test]
    fn heuristic_and_remainder_sequence_agree() {
        let f = p("x1^3*x2 + -2*x2^2*x3 + 5");
        let g = p("3*x1*x3^2 + x2^4 + -1");
        let h = p("x1^2*x3 + 7*x2^3 + x3^5");
        let a = f.mul(&g).mul(&g);
        let b = f.mul(&h).scale(&BigInt::from(6));
        let vars = [0, 1, 2];
        assert_eq!(normalize_sign(heuristic_gcd(&a, &b, &vars).unwrap()), f);
        assert_eq!(prs_gcd(&a, &b, 0), f);
        assert_eq!(prs_gcd(&a, &b, 2), f);
        assert_eq!(poly_gcd(&g, &h), LaurentPoly::one(3));
        assert_eq!(prs_gcd(&g, &h, 1), LaurentPoly::one(3));
    }

    #[test]
    fn exact_division() {
        let f = p("x1 + x2 + 1");
        let g = p("x1^2 + x3");
        assert_eq!(f.mul(&g).exact_div_poly(&g), Some(f.clone()));
        assert_eq!(f.exact_div_poly(&g), None);
    }
}
