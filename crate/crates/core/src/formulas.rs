//! Standard bipartite matrices of finite, affine and rank 2 types, closed-form
//! predictors for the frozen row after a move, and a mutation oracle.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::explorer::tau_apply_matrix;
use crate::lattice::lat_equal;
use crate::matrix::ExtMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
    AffA,
    AffD,
    AffE6,
    AffE7,
    AffE8,
    Rank2,
}

/// A type together with its parameters. For `AffD`, `n` is the number of
/// vertices (one more than the subscript); for `AffA`, `n = p + q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TypeSpec {
    pub family: Family,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub s: i64,
    pub t: i64,
}

impl TypeSpec {
    fn plain(family: Family, n: usize) -> Self {
        TypeSpec { family, n, p: 0, q: 0, s: 0, t: 0 }
    }

    pub fn a(n: usize) -> Self {
        Self::plain(Family::A, n)
    }

    pub fn aff_a(p: usize, q: usize) -> Self {
        TypeSpec { family: Family::AffA, n: p + q, p, q, s: 0, t: 0 }
    }

    pub fn rank2(s: i64, t: i64) -> Self {
        TypeSpec { family: Family::Rank2, n: 2, p: 0, q: 0, s, t }
    }

    /// Accepts `A3`, `B3`, `C3`, `D5`, `E6`..`E8`, `F4`, `G2`, `AffA2,1`,
    /// `AffD4` (five vertices), `AffE6`..`AffE8` and `Rank2:s,t`.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        let bad = || Error::UnsupportedType(s.to_string());
        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix("Rank2:") {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            let (a, b) = (num(a)? as i64, num(b)? as i64);
            if a < 1 || b < 1 {
                return Err(bad());
            }
            return Ok(Self::rank2(a, b));
        }
        if let Some(rest) = s.strip_prefix("AffA") {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            let (p, q) = (num(a)?, num(b)?);
            if p < 1 || q < 1 {
                return Err(bad());
            }
            return Ok(Self::aff_a(p, q));
        }
        if let Some(rest) = s.strip_prefix("AffD") {
            let k = num(rest)?;
            if k < 4 {
                return Err(bad());
            }
            return Ok(Self::plain(Family::AffD, k + 1));
        }
        let fixed = match s {
            "E6" => Some((Family::E6, 6)),
            "E7" => Some((Family::E7, 7)),
            "E8" => Some((Family::E8, 8)),
            "F4" => Some((Family::F4, 4)),
            "G2" => Some((Family::G2, 2)),
            "AffE6" => Some((Family::AffE6, 7)),
            "AffE7" => Some((Family::AffE7, 8)),
            "AffE8" => Some((Family::AffE8, 9)),
            _ => None,
        };
        if let Some((f, n)) = fixed {
            return Ok(Self::plain(f, n));
        }
        let (head, tail) = s.split_at(s.len().min(1));
        let n = num(tail)?;
        let (family, min) = match head {
            "A" => (Family::A, 1),
            "B" => (Family::B, 2),
            "C" => (Family::C, 2),
            "D" => (Family::D, 4),
            _ => return Err(bad()),
        };
        if n < min {
            return Err(bad());
        }
        Ok(Self::plain(family, n))
    }

    pub fn is_finite(&self) -> bool {
        match self.family {
            Family::AffA | Family::AffD | Family::AffE6 | Family::AffE7 | Family::AffE8 => false,
            Family::Rank2 => self.s * self.t < 4,
            _ => true,
        }
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A{}", self.n),
            Family::B => write!(f, "B{}", self.n),
            Family::C => write!(f, "C{}", self.n),
            Family::D => write!(f, "D{}", self.n),
            Family::E6 => write!(f, "E6"),
            Family::E7 => write!(f, "E7"),
            Family::E8 => write!(f, "E8"),
            Family::F4 => write!(f, "F4"),
            Family::G2 => write!(f, "G2"),
            Family::AffA => write!(f, "AffA{},{}", self.p, self.q),
            Family::AffD => write!(f, "AffD{}", self.n - 1),
            Family::AffE6 => write!(f, "AffE6"),
            Family::AffE7 => write!(f, "AffE7"),
            Family::AffE8 => write!(f, "AffE8"),
            Family::Rank2 => write!(f, "Rank2:{},{}", self.s, self.t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Tau,
    TauInv,
    R1,
    R2,
}

impl Move {
    pub fn parse(s: &str) -> Result<Move> {
        match s {
            "tau" => Ok(Move::Tau),
            "tau_inv" => Ok(Move::TauInv),
            "r1" => Ok(Move::R1),
            "r2" => Ok(Move::R2),
            _ => Err(Error::UnsupportedMove { ty: String::new(), mv: s.to_string() }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Move::Tau => "tau",
            Move::TauInv => "tau_inv",
            Move::R1 => "r1",
            Move::R2 => "r2",
        }
    }
}

/// Whether closed forms are read exactly as printed or with the evident
/// misprints repaired.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    Printed,
    Corrected,
}

fn arrows(n: usize, arrows: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![0i64; n]; n];
    for &(i, j) in arrows {
        rows[i - 1][j - 1] = 1;
        rows[j - 1][i - 1] = -1;
    }
    rows
}

/// Path with odd vertices as sources.
fn alternating_path(n: usize) -> Vec<Vec<i64>> {
    let arr: Vec<(usize, usize)> = (1..n)
        .map(|i| if i % 2 == 1 { (i, i + 1) } else { (i + 1, i) })
        .collect();
    arrows(n, &arr)
}

/// D-type spine: `1 -> 2, 3, 4`, then `4 <- 5 -> 6 <- 7 ...`.
fn d_spine(n: usize) -> Vec<(usize, usize)> {
    let mut arr = vec![(1, 2), (1, 3), (1, 4)];
    for i in 5..=n {
        if i % 2 == 1 {
            arr.push((i, i - 1));
        } else {
            arr.push((i - 1, i));
        }
    }
    arr
}

pub fn standard_matrix(t: &TypeSpec) -> Result<ExtMatrix> {
    let n = t.n;
    let rows = match t.family {
        Family::A => alternating_path(n),
        Family::B => {
            let mut r = alternating_path(n);
            r[0][1] = 2;
            r
        }
        Family::C => {
            let mut r = alternating_path(n);
            r[1][0] = -2;
            r
        }
        Family::D => arrows(n, &d_spine(n)),
        Family::E6 => arrows(6, &[(1, 2), (1, 3), (1, 4), (5, 2), (6, 4)]),
        Family::E7 => arrows(7, &[(1, 2), (1, 3), (1, 4), (5, 2), (6, 4), (6, 7)]),
        Family::E8 => arrows(8, &[(1, 2), (1, 3), (1, 4), (5, 2), (6, 4), (6, 7), (8, 7)]),
        Family::F4 => {
            let mut r = arrows(4, &[(1, 2), (3, 2), (3, 4)]);
            r[2][1] = 2;
            r
        }
        Family::G2 => vec![vec![0, 1], vec![-3, 0]],
        Family::AffA => {
            let (p, q) = (t.p, t.q);
            let mut arr: Vec<(usize, usize)> = (1..=p).map(|i| (i, i + 1)).collect();
            if q == 1 {
                arr.push((1, p + 1));
            } else {
                arr.push((1, p + q));
                for i in (p + 3..=p + q).rev() {
                    arr.push((i, i - 1));
                }
                arr.push((p + 2, p + 1));
            }
            arrows(n, &arr)
        }
        Family::AffD => {
            if n == 5 {
                arrows(5, &[(1, 2), (1, 3), (1, 4), (1, 5)])
            } else {
                let mut arr = d_spine(n - 2);
                if n % 2 == 1 {
                    arr.push((n - 2, n - 1));
                    arr.push((n - 2, n));
                } else {
                    arr.push((n - 1, n - 2));
                    arr.push((n, n - 2));
                }
                arrows(n, &arr)
            }
        }
        Family::AffE6 => arrows(7, &[(1, 2), (1, 3), (1, 4), (5, 2), (6, 3), (7, 4)]),
        Family::AffE7 => arrows(8, &[(1, 2), (1, 3), (1, 4), (5, 2), (5, 6), (7, 4), (7, 8)]),
        Family::AffE8 => arrows(9, &[(1, 2), (1, 3), (1, 4), (5, 2), (6, 4), (6, 7), (8, 7), (8, 9)]),
        Family::Rank2 => vec![vec![0, t.s], vec![-t.t, 0]],
    };
    ExtMatrix::square(&rows)
}

/// The move each printed closed form describes, fixed by comparison with
/// the oracle. Types without a printed form return an empty list.
pub fn formula_moves(t: &TypeSpec) -> Vec<Move> {
    match t.family {
        Family::A if t.n % 2 == 1 && t.n >= 3 => vec![Move::TauInv],
        Family::B | Family::C if t.n >= 3 => vec![Move::TauInv],
        Family::D if t.n % 2 == 1 => vec![Move::TauInv],
        Family::E7 => vec![Move::TauInv],
        Family::AffD | Family::AffE6 | Family::AffE7 | Family::AffE8 => vec![Move::Tau],
        Family::AffA if t.p % 2 == 0 && t.q % 2 == 1 => vec![Move::R1],
        Family::Rank2 => vec![Move::Tau, Move::TauInv],
        _ => Vec::new(),
    }
}

fn pos(x: i128) -> i128 {
    x.max(0)
}

/// `[x]_-` as `min(x, 0)`; appears once in a printed formula.
fn neg_part(x: i128) -> i128 {
    x.min(0)
}

fn small(beta: &[BigInt]) -> Result<Vec<i128>> {
    beta.iter()
        .map(|x| {
            x.to_i64()
                .map(i128::from)
                .ok_or_else(|| Error::MalformedMatrix("frozen entry out of range for closed forms".into()))
        })
        .collect()
}

/// `-beta - sum c_i alpha_i`, with `coeffs` 1-based.
fn combine(b: &ExtMatrix, beta: &[i128], coeffs: &[(usize, i128)]) -> Vec<BigInt> {
    let n = b.n();
    let mut out: Vec<i128> = beta.iter().map(|x| -x).collect();
    for &(i, c) in coeffs {
        for j in 0..n {
            out[j] -= c * b.entry(i - 1, j).to_i64().unwrap() as i128;
        }
    }
    out.into_iter().map(BigInt::from).collect()
}

pub fn beta_prime_predicted(t: &TypeSpec, beta: &[BigInt], mv: Move, reading: Reading) -> Result<Vec<BigInt>> {
    let unsupported = || Error::UnsupportedMove { ty: t.to_string(), mv: mv.name().to_string() };
    if beta.len() != t.n {
        return Err(Error::DimensionMismatch { expected: t.n, found: beta.len() });
    }
    if t.family == Family::AffA {
        if mv != Move::R1 {
            return Err(unsupported());
        }
        if t.p % 2 != 0 || t.q % 2 != 1 {
            return Err(Error::UnsupportedParity(t.to_string()));
        }
        return Ok(aff_a_r1(t.p, t.q, &small(beta)?, reading).into_iter().map(BigInt::from).collect());
    }
    if !formula_moves(t).contains(&mv) {
        if matches!(t.family, Family::A | Family::D) && t.n % 2 == 0 {
            return Err(Error::UnsupportedParity(t.to_string()));
        }
        return Err(unsupported());
    }
    let bm = standard_matrix(t)?;
    let v = small(beta)?;
    let n = t.n;
    let b = |i: usize| v[i - 1];
    let nb = |i: usize| pos(-v[i - 1]);
    let printed = reading == Reading::Printed;
    let mut c: Vec<(usize, i128)> = Vec::new();
    match t.family {
        Family::A | Family::C => {
            let l = (n - 1) / 2;
            for k in 0..=l {
                c.push((2 * k + 1, pos(b(2 * k + 1))));
            }
            for k in 1..=l {
                c.push((2 * k, pos(b(2 * k) + pos(b(2 * k - 1)) + pos(b(2 * k + 1)))));
            }
            if n % 2 == 0 && !printed {
                c.push((n, pos(b(n) + pos(b(n - 1)))));
            }
        }
        Family::B => {
            // The stored first entry is b1 / 2.
            let b1 = 2 * b(1);
            let bb = |i: usize| if i == 1 { b1 } else { b(i) };
            c.push((1, pos(b1) / 2));
            let l = n / 2;
            let upper = if n % 2 == 1 { l } else { l - 1 };
            for k in 1..=upper {
                c.push((2 * k + 1, pos(bb(2 * k + 1))));
                c.push((2 * k, pos(bb(2 * k) + pos(bb(2 * k - 1)) + pos(bb(2 * k + 1)))));
            }
            if n % 2 == 0 && !printed {
                c.push((n, pos(bb(n) + pos(bb(n - 1)))));
            }
        }
        Family::D => {
            let l = (n - 1) / 2;
            c.push((1, pos(b(1))));
            c.push((2, pos(b(2) + pos(b(1)))));
            c.push((3, pos(b(3) + pos(b(1)))));
            for k in 2..=l {
                c.push((2 * k + 1, pos(b(2 * k + 1))));
            }
            for k in 2..=l {
                let left = if k == 2 && !printed { b(1) } else { b(2 * k - 1) };
                c.push((2 * k, pos(b(2 * k) + pos(left) + pos(b(2 * k + 1)))));
            }
        }
        Family::E7 => {
            c.push((1, pos(b(1))));
            c.push((2, pos(b(2) + pos(b(1)) + pos(b(5)))));
            c.push((3, pos(b(3) + pos(b(1)))));
            c.push((4, pos(b(4) + pos(b(1)) + pos(b(6)))));
            if !printed {
                c.push((5, pos(b(5))));
            }
            c.push((6, pos(b(6))));
            c.push((7, pos(b(7) + pos(b(6)))));
        }
        Family::AffD => {
            if n == 5 {
                c.push((1, pos(-b(1) + nb(2) + nb(3) + nb(4) + nb(5))));
                for j in 2..=5 {
                    c.push((j, nb(j)));
                }
            } else {
                c.push((1, pos(-b(1) + nb(2) + nb(3) + nb(4))));
                c.push((3, nb(3)));
                let (upper_odd, upper_even) = if n % 2 == 1 { ((n - 5) / 2, (n - 1) / 2) } else { ((n - 4) / 2, (n - 2) / 2) };
                for k in 2..=upper_odd {
                    c.push((2 * k + 1, pos(-b(2 * k + 1) + nb(2 * k) + nb(2 * k + 2))));
                }
                for k in 1..=upper_even {
                    c.push((2 * k, nb(2 * k)));
                }
                if n % 2 == 1 {
                    c.push((n - 2, pos(-b(n - 2) + nb(n - 3) + nb(n - 1) + nb(n))));
                    c.push((n, nb(n)));
                } else {
                    c.push((n - 1, pos(-b(n - 1) + nb(n - 2))));
                    c.push((n, pos(-b(n) + nb(n - 2))));
                }
            }
        }
        Family::AffE6 => {
            c.push((1, pos(-b(1) + nb(2) + nb(3) + nb(4))));
            c.push((2, nb(2)));
            c.push((3, nb(3)));
            c.push((4, nb(4)));
            c.push((5, pos(-b(5) + nb(2))));
            c.push((6, pos(-b(6) + nb(3))));
            c.push((7, pos(-b(7) + nb(4))));
        }
        Family::AffE7 => {
            c.push((1, pos(-b(1) + nb(2) + nb(3) + nb(4))));
            c.push((2, nb(2)));
            c.push((3, nb(3)));
            c.push((4, nb(4)));
            let x5 = -b(5) + nb(2) + nb(6);
            c.push((5, if printed { neg_part(x5) } else { pos(x5) }));
            c.push((6, nb(6)));
            c.push((7, pos(-b(7) + nb(4) + nb(8))));
            c.push((8, nb(8)));
        }
        Family::AffE8 => {
            c.push((1, pos(-b(1) + nb(2) + nb(3) + nb(4))));
            c.push((2, nb(2)));
            c.push((3, nb(3)));
            c.push((4, nb(4)));
            c.push((5, pos(-b(5) + nb(2))));
            let x6 = if printed { -b(6) + nb(4) - nb(7) } else { -b(6) + nb(4) + nb(7) };
            c.push((6, pos(x6)));
            c.push((7, nb(7)));
            c.push((8, pos(-b(8) + nb(7) + nb(9))));
            c.push((9, nb(9)));
        }
        Family::Rank2 => {
            let (s, tt) = (t.s as i128, t.t as i128);
            if mv == Move::Tau {
                c.push((1, pos(-b(1) + tt * nb(2))));
                c.push((2, nb(2)));
            } else {
                c.push((1, pos(b(1))));
                c.push((2, pos(b(2) + s * pos(b(1)))));
            }
        }
        _ => return Err(unsupported()),
    }
    Ok(combine(&bm, &v, &c))
}

/// The `r1` closed form for `p` even and `q` odd, via the auxiliary values
/// `{b_{p+i}}`. Index `0` of the result is `b'_1`.
fn aff_a_r1(p: usize, q: usize, v: &[i128], reading: Reading) -> Vec<i128> {
    let n = p + q;
    let b = |i: usize| v[i - 1];
    // curly[i] holds {b_{p+i}} for 1 <= i <= q.
    let mut curly = vec![0i128; q + 1];
    curly[q] = b(p + q) + pos(b(1));
    for i in (1..q).rev() {
        curly[i] = b(p + i) + pos(curly[i + 1]);
    }
    let mut out = vec![0i128; n + 1];
    out[1] = b(2) + pos(b(1));
    for i in 2..p {
        out[i] = b(i + 1);
    }
    out[p] = curly[1];
    if q >= 2 {
        out[p + 1] = -curly[2];
    }
    for i in 2..q {
        out[p + i] = -curly[i + 1] + pos(curly[i]);
    }
    out[p + q] = -b(1) + pos(curly[q]);
    if q == 1 && reading == Reading::Corrected {
        // no mutation at p + q happens when q = 1
        out[p + 1] = -b(1);
    }
    out[1..].to_vec()
}

/// The printed `a_k` coefficients of the `r1` closed form, 1-based, for
/// `p` even and `q` odd. The printed combination is `beta' = -beta + sum a_k alpha_k`.
pub fn aff_a_coefficients(p: usize, q: usize, beta: &[i128], beta_prime: &[i128]) -> Vec<(usize, i128)> {
    let s = |i: usize| beta[i - 1] + beta_prime[i - 1];
    let n = p + q;
    let even_p: i128 = (1..=p / 2).map(|i| s(2 * i)).sum();
    let odd_q: i128 = (1..=(q - 1) / 2).map(|i| s(p + 2 * i)).sum();
    let last = s(n);
    let mut a = vec![(1, last)];
    for k in 1..=p / 2 {
        let odd_k: i128 = (1..=k).map(|i| s(2 * i - 1)).sum();
        a.push((2 * k, -odd_k + even_p - odd_q - last));
        let even_k: i128 = (1..=k).map(|i| s(2 * i)).sum();
        a.push((2 * k + 1, -even_k + last));
    }
    for k in 1..=(q - 1) / 2 {
        let odd_k: i128 = (1..=k).map(|i| s(p + 2 * i - 1)).sum();
        a.push((p + 2 * k, odd_k - even_p + odd_q + last));
        let even_k: i128 = (1..=k).map(|i| s(p + 2 * i)).sum();
        a.push((p + 2 * k + 1, even_k - even_p + last));
    }
    a.sort();
    a.dedup_by_key(|x| x.0);
    a
}

/// The `r1` and `r2` recipes as a mutation path and relabeling (0-based),
/// where position `i` of the result is position `pi[i]` of the mutated seed.
pub fn aff_a_move(p: usize, q: usize, mv: Move) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = p + q;
    match mv {
        Move::R1 => {
            let mut path = vec![0];
            path.extend((p + 1..n).rev());
            let pi = (0..n).map(|i| (i + 1) % n).collect();
            Ok((path, pi))
        }
        Move::R2 => {
            let path = (0..p).collect();
            let pi = (0..n).map(|i| (i + n - 1) % n).collect();
            Ok((path, pi))
        }
        _ => Err(Error::UnsupportedMove { ty: format!("AffA{},{}", p, q), mv: mv.name().into() }),
    }
}

/// Applies `mv` to the standard matrix extended by `beta` and returns the
/// resulting full matrix.
pub fn oracle_matrix(t: &TypeSpec, beta: &[BigInt], mv: Move) -> Result<ExtMatrix> {
    let b = standard_matrix(t)?.with_frozen(vec![beta.to_vec()])?;
    let out = match (t.family, mv) {
        (Family::AffA, Move::R1 | Move::R2) => {
            let (path, pi) = aff_a_move(t.p, t.q, mv)?;
            b.mutate_path(&path)?.relabeled(&pi)
        }
        (Family::AffA, _) => {
            return Err(Error::UnsupportedMove { ty: t.to_string(), mv: mv.name().into() })
        }
        (_, Move::Tau) => tau_apply_matrix(&b, 1)?,
        (_, Move::TauInv) => tau_apply_matrix(&b, -1)?,
        _ => return Err(Error::UnsupportedMove { ty: t.to_string(), mv: mv.name().into() }),
    };
    Ok(out)
}

/// Ground truth: the frozen row after performing the move by mutation.
pub fn beta_prime_oracle(t: &TypeSpec, beta: &[BigInt], mv: Move) -> Result<Vec<BigInt>> {
    Ok(oracle_matrix(t, beta, mv)?.frozen_rows()[0].clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub beta: Vec<BigInt>,
    pub predicted: Option<Vec<BigInt>>,
    pub oracle: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaReport {
    pub ty: String,
    pub mv: Move,
    pub trials: usize,
    /// False when no closed form applies and only the oracle ran.
    pub predictor: bool,
    pub predictor_pass: bool,
    pub lat_pass: bool,
    pub first_failure: Option<Failure>,
}

impl FormulaReport {
    pub fn pass(&self) -> bool {
        self.predictor_pass && self.lat_pass
    }

    pub fn to_json(&self) -> Value {
        let ints = |v: &[BigInt]| v.iter().map(|x| x.to_string().parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(x.to_string()))).collect::<Vec<_>>();
        json!({
            "type": self.ty,
            "move": self.mv.name(),
            "trials": self.trials,
            "status": if self.predictor { "predictor" } else { "oracle_only" },
            "pass": self.pass(),
            "lat_pass": self.lat_pass,
            "first_failure": self.first_failure.as_ref().map(|f| json!({
                "beta": ints(&f.beta),
                "predicted": f.predicted.as_ref().map(|p| ints(p)),
                "oracle": ints(&f.oracle),
            })),
        })
    }
}

/// Random single frozen rows with entries in `[-9, 9]`.
pub fn random_betas(n: usize, trials: usize, seed: u64) -> Vec<Vec<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
        .collect()
}

pub fn verify_formula(t: &TypeSpec, mv: Move, trials: usize, seed: u64, reading: Reading) -> Result<FormulaReport> {
    let base = standard_matrix(t)?;
    let mut report = FormulaReport {
        ty: t.to_string(),
        mv,
        trials,
        predictor: true,
        predictor_pass: true,
        lat_pass: true,
        first_failure: None,
    };
    for beta in random_betas(t.n, trials, seed) {
        let oracle_full = oracle_matrix(t, &beta, mv)?;
        let oracle = oracle_full.frozen_rows()[0].clone();
        let predicted = match beta_prime_predicted(t, &beta, mv, reading) {
            Ok(p) => Some(p),
            Err(Error::UnsupportedMove { .. } | Error::UnsupportedParity(_)) => {
                report.predictor = false;
                None
            }
            Err(e) => return Err(e),
        };
        let full = base.with_frozen(vec![beta.clone()])?;
        let lat_ok = lat_equal(&full, &oracle_full) && oracle_full.same_principal(&full);
        let pred_ok = predicted.as_ref().map_or(true, |p| *p == oracle);
        if !lat_ok {
            report.lat_pass = false;
        }
        if !pred_ok {
            report.predictor_pass = false;
        }
        if (!lat_ok || !pred_ok) && report.first_failure.is_none() {
            report.first_failure = Some(Failure { beta, predicted, oracle });
        }
    }
    Ok(report)
}
