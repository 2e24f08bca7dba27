//! Extended exchange matrices: an `m x n` integer matrix whose top `n x n`
//! block (the principal part) is skew-symmetrizable and whose remaining rows
//! are frozen.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{parse_err, Error, Result};

#[inline]
pub(crate) fn pos(x: &BigInt) -> BigInt {
    if x.is_positive() {
        x.clone()
    } else {
        BigInt::zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtMatrix {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewSymmetrizer {
    pub d: Vec<BigInt>,
}

/// Finds the minimal positive diagonal `D` with `D * B` skew-symmetric,
/// normalized so that each connected component has gcd 1.
pub fn find_skew_symmetrizer(principal: &[Vec<BigInt>]) -> Result<SkewSymmetrizer> {
    let n = principal.len();
    for (i, row) in principal.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        if !row[i].is_zero() {
            return Err(Error::NotSkewSymmetrizable(format!(
                "nonzero diagonal entry at {}",
                i + 1
            )));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&principal[i][j], &principal[j][i]);
            if a.is_zero() != b.is_zero() || (!a.is_zero() && a.signum() == b.signum()) {
                return Err(Error::NotSkewSymmetrizable(format!(
                    "sign pattern violated at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let mut ratio: Vec<Option<BigRational>> = vec![None; n];
    let mut comp = vec![usize::MAX; n];
    let mut d = vec![BigInt::zero(); n];
    for start in 0..n {
        if ratio[start].is_some() {
            continue;
        }
        ratio[start] = Some(BigRational::one());
        comp[start] = start;
        let mut members = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = ratio[i].clone().unwrap();
            for j in 0..n {
                if principal[i][j].is_zero() {
                    continue;
                }
                // d_i b_ij = -d_j b_ji
                let dj = &di * BigRational::new(-principal[i][j].clone(), principal[j][i].clone());
                match &ratio[j] {
                    Some(existing) => {
                        if *existing != dj {
                            return Err(Error::NotSkewSymmetrizable(format!(
                                "inconsistent ratios on a cycle through {}",
                                j + 1
                            )));
                        }
                    }
                    None => {
                        ratio[j] = Some(dj);
                        comp[j] = start;
                        members.push(j);
                        stack.push(j);
                    }
                }
            }
        }
        let lcm_den = members
            .iter()
            .fold(BigInt::one(), |acc, &i| acc.lcm(ratio[i].as_ref().unwrap().denom()));
        let scaled: Vec<BigInt> = members
            .iter()
            .map(|&i| {
                let r = ratio[i].as_ref().unwrap();
                r.numer() * (&lcm_den / r.denom())
            })
            .collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        for (&i, v) in members.iter().zip(scaled) {
            d[i] = v / &g;
        }
    }
    Ok(SkewSymmetrizer { d })
}

/// A witness that `B' ` relabeled by `sigma` (and with frozen rows reordered
/// by `frozen`) equals `B`, or `-B` when `negated` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub sigma: Vec<usize>,
    pub frozen: Vec<usize>,
    pub negated: bool,
}

impl ExtMatrix {
    pub fn new(n: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedMatrix("rank must be at least 1".into()));
        }
        if rows.len() < n {
            return Err(Error::MalformedMatrix(format!(
                "{} rows given for rank {}",
                rows.len(),
                n
            )));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        find_skew_symmetrizer(&rows[..n])?;
        Ok(ExtMatrix { n, rows })
    }

    pub fn from_i64(n: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            n,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Square matrix with no frozen rows.
    pub fn square(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_i64(rows.len(), rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn entry(&self, j: usize, i: usize) -> &BigInt {
        &self.rows[j][i]
    }

    pub fn principal(&self) -> &[Vec<BigInt>] {
        &self.rows[..self.n]
    }

    pub fn frozen_rows(&self) -> &[Vec<BigInt>] {
        &self.rows[self.n..]
    }

    pub fn skew_symmetrizer(&self) -> SkewSymmetrizer {
        find_skew_symmetrizer(self.principal()).expect("checked at construction")
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.rows[i][j] == -&self.rows[j][i]))
    }

    pub fn principal_only(&self) -> ExtMatrix {
        ExtMatrix {
            n: self.n,
            rows: self.rows[..self.n].to_vec(),
        }
    }

    pub fn same_principal(&self, other: &ExtMatrix) -> bool {
        self.n == other.n && self.principal() == other.principal()
    }

    pub fn with_frozen(&self, frozen: Vec<Vec<BigInt>>) -> Result<ExtMatrix> {
        let mut rows = self.rows[..self.n].to_vec();
        rows.extend(frozen);
        ExtMatrix::new(self.n, rows)
    }

    pub fn with_frozen_i64(&self, frozen: &[Vec<i64>]) -> Result<ExtMatrix> {
        self.with_frozen(
            frozen
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Principal part stacked on an identity block.
    pub fn with_principal_coefficients(&self) -> ExtMatrix {
        let frozen = (0..self.n)
            .map(|r| {
                (0..self.n)
                    .map(|c| if r == c { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        self.with_frozen(frozen).expect("principal part already valid")
    }

    pub fn negated(&self) -> ExtMatrix {
        ExtMatrix {
            n: self.n,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    /// Matrix mutation in direction `k` (0-based).
    pub fn mutate(&self, k: usize) -> Result<ExtMatrix> {
        if k >= self.n {
            return Err(Error::DirectionOutOfRange { k: k + 1, n: self.n });
        }
        let bk: Vec<BigInt> = self.rows[k].clone();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(j, row)| {
                let bjk = &row[k];
                row.iter()
                    .enumerate()
                    .map(|(i, bji)| {
                        if i == k || j == k {
                            -bji
                        } else {
                            bji + pos(&-bjk) * &bk[i] + bjk * pos(&bk[i])
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(ExtMatrix { n: self.n, rows })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<ExtMatrix> {
        let mut b = self.clone();
        for &k in path {
            b = b.mutate(k)?;
        }
        Ok(b)
    }

    /// Simultaneous relabeling: entry `(i, j)` of the result is entry
    /// `(sigma[i], sigma[j])` of `self`; frozen rows are permuted by column only.
    pub fn relabeled(&self, sigma: &[usize]) -> ExtMatrix {
        let n = self.n;
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, _)| {
                let src = if r < n { sigma[r] } else { r };
                (0..n).map(|c| self.rows[src][sigma[c]].clone()).collect()
            })
            .collect();
        ExtMatrix { n, rows }
    }

    /// Applies a full isomorphism witness to `self`.
    pub fn apply_witness(&self, w: &IsoWitness) -> ExtMatrix {
        let relabeled = self.relabeled(&w.sigma);
        let n = self.n;
        let mut rows = relabeled.rows[..n].to_vec();
        for &src in &w.frozen {
            rows.push(relabeled.rows[n + src].clone());
        }
        let out = ExtMatrix { n, rows };
        if w.negated {
            out.negated()
        } else {
            out
        }
    }

    /// Lexicographically minimal encoding over simultaneous principal
    /// permutations, with frozen rows sorted. Permutations are only taken
    /// inside classes of vertices sharing the same local invariant.
    pub fn canonical_form(&self) -> Vec<BigInt> {
        let n = self.n;
        let inv: Vec<_> = (0..n).map(|i| vertex_invariant(self, i, true)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in &order {
            match classes.last_mut() {
                Some(c) if inv[c[0]] == inv[v] => c.push(v),
                _ => classes.push(vec![v]),
            }
        }
        let mut best: Option<Vec<BigInt>> = None;
        let mut current: Vec<usize> = Vec::with_capacity(n);
        canonical_rec(self, &classes, 0, &mut vec![false; n], &mut current, &mut best);
        best.unwrap()
    }

    fn encode(&self, ord: &[usize]) -> Vec<BigInt> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.m() * n);
        for &r in ord {
            for &c in ord {
                out.push(self.rows[r][c].clone());
            }
        }
        let mut frozen: Vec<Vec<BigInt>> = self.rows[n..]
            .iter()
            .map(|row| ord.iter().map(|&c| row[c].clone()).collect())
            .collect();
        frozen.sort();
        for row in frozen {
            out.extend(row);
        }
        out
    }

    pub fn parse(text: &str) -> Result<ExtMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, 1, "missing `n m` header"))?;
        let dims = parse_ints(hline, header)?;
        if dims.len() != 2 {
            return Err(parse_err(hline, 1, "header must be `n m`"));
        }
        let to_usize = |x: &BigInt, col: usize| -> Result<usize> {
            usize::try_from(x).map_err(|_| parse_err(hline, col, "dimension must be non-negative"))
        };
        let n = to_usize(&dims[0], 1)?;
        let m = to_usize(&dims[1], 2)?;
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(hline, 1, format!("expected {} matrix rows", m)))?;
            let row = parse_ints(ln, line)?;
            if row.len() != n {
                return Err(parse_err(
                    ln,
                    1,
                    format!("expected {} entries, found {}", n, row.len()),
                ));
            }
            rows.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, 1, "trailing content after matrix"));
        }
        ExtMatrix::new(n, rows)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).ok()).collect())
            .collect()
    }
}

fn parse_ints(line_no: usize, line: &str) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut col = 1;
    for tok in line.split_whitespace() {
        let offset = line[col - 1..].find(tok).unwrap_or(0) + col - 1;
        col = offset + tok.len() + 1;
        let v: BigInt = tok
            .parse()
            .map_err(|_| parse_err(line_no, offset + 1, format!("invalid integer `{}`", tok)))?;
        out.push(v);
    }
    Ok(out)
}

impl fmt::Display for ExtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.m())?;
        for row in &self.rows {
            let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

type Invariant = (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>);

fn vertex_invariant(b: &ExtMatrix, i: usize, with_frozen: bool) -> Invariant {
    let n = b.n;
    let mut row: Vec<BigInt> = (0..n).map(|j| b.rows[i][j].clone()).collect();
    let mut col: Vec<BigInt> = (0..n).map(|j| b.rows[j][i].clone()).collect();
    row.sort();
    col.sort();
    let mut fr: Vec<BigInt> = if with_frozen {
        b.rows[n..].iter().map(|r| r[i].clone()).collect()
    } else {
        Vec::new()
    };
    fr.sort();
    (row, col, fr)
}

fn canonical_rec(
    b: &ExtMatrix,
    classes: &[Vec<usize>],
    ci: usize,
    used: &mut Vec<bool>,
    current: &mut Vec<usize>,
    best: &mut Option<Vec<BigInt>>,
) {
    if current.len() == b.n {
        let enc = b.encode(current);
        if best.as_ref().map_or(true, |x| enc < *x) {
            *best = Some(enc);
        }
        return;
    }
    let class = &classes[ci];
    let placed_in_class = class.iter().filter(|&&v| used[v]).count();
    let next_ci = if placed_in_class + 1 == class.len() {
        ci + 1
    } else {
        ci
    };
    for &v in class {
        if used[v] {
            continue;
        }
        used[v] = true;
        current.push(v);
        canonical_rec(b, classes, next_ci, used, current, best);
        current.pop();
        used[v] = false;
    }
}

/// Searches for a relabeling taking `bp` to `b` (and, unless `direct`, to `-b`).
/// Returns the lexicographically least `sigma`.
pub fn matrices_isomorphic(b: &ExtMatrix, bp: &ExtMatrix, direct: bool) -> Option<IsoWitness> {
    if b.n != bp.n || b.m() != bp.m() {
        return None;
    }
    let mut found = None;
    search_isomorphisms(b, bp, false, &mut |w| {
        found = Some(w);
        false
    });
    if found.is_none() && !direct {
        let neg = b.negated();
        search_isomorphisms(&neg, bp, false, &mut |mut w| {
            w.negated = true;
            found = Some(w);
            false
        });
    }
    found
}

/// All permutations `sigma` of the principal part with
/// `bp.relabeled(sigma).principal() == b.principal()`, in lexicographic order.
pub fn principal_isomorphisms(b: &ExtMatrix, bp: &ExtMatrix) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if b.n != bp.n {
        return out;
    }
    search_isomorphisms(b, bp, true, &mut |w| {
        out.push(w.sigma);
        true
    });
    out
}

fn search_isomorphisms(
    b: &ExtMatrix,
    bp: &ExtMatrix,
    principal_only: bool,
    visit: &mut dyn FnMut(IsoWitness) -> bool,
) {
    let n = b.n;
    let with_frozen = !principal_only;
    let inv_b: Vec<_> = (0..n).map(|i| vertex_invariant(b, i, with_frozen)).collect();
    let inv_p: Vec<_> = (0..n).map(|i| vertex_invariant(bp, i, with_frozen)).collect();
    let mut sa = inv_b.clone();
    let mut sb = inv_p.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return;
    }
    if with_frozen {
        let mut fa: Vec<Vec<BigInt>> = b.frozen_rows().to_vec();
        let mut fb: Vec<Vec<BigInt>> = bp.frozen_rows().to_vec();
        for r in fa.iter_mut().chain(fb.iter_mut()) {
            r.sort();
        }
        fa.sort();
        fb.sort();
        if fa != fb {
            return;
        }
    }
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    iso_rec(b, bp, &inv_b, &inv_p, principal_only, 0, &mut sigma, &mut used, visit);
}

#[allow(clippy::too_many_arguments)]
fn iso_rec(
    b: &ExtMatrix,
    bp: &ExtMatrix,
    inv_b: &[Invariant],
    inv_p: &[Invariant],
    principal_only: bool,
    i: usize,
    sigma: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(IsoWitness) -> bool,
) -> bool {
    let n = b.n;
    if i == n {
        let frozen = if principal_only {
            Vec::new()
        } else {
            match match_frozen(b, bp, sigma) {
                Some(f) => f,
                None => return true,
            }
        };
        return visit(IsoWitness {
            sigma: sigma.clone(),
            frozen,
            negated: false,
        });
    }
    for c in 0..n {
        if used[c] || inv_b[i] != inv_p[c] {
            continue;
        }
        let consistent = (0..i).all(|j| {
            bp.rows[c][sigma[j]] == b.rows[i][j] && bp.rows[sigma[j]][c] == b.rows[j][i]
        });
        if !consistent {
            continue;
        }
        sigma[i] = c;
        used[c] = true;
        let keep_going = iso_rec(b, bp, inv_b, inv_p, principal_only, i + 1, sigma, used, visit);
        used[c] = false;
        sigma[i] = usize::MAX;
        if !keep_going {
            return false;
        }
    }
    true
}

fn match_frozen(b: &ExtMatrix, bp: &ExtMatrix, sigma: &[usize]) -> Option<Vec<usize>> {
    let n = b.n;
    let k = b.m() - n;
    let mut taken = vec![false; k];
    let mut out = Vec::with_capacity(k);
    for r in 0..k {
        let target = &b.rows[n + r];
        let hit = (0..k).find(|&rp| {
            !taken[rp] && (0..n).all(|j| bp.rows[n + rp][sigma[j]] == target[j])
        })?;
        taken[hit] = true;
        out.push(hit);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, rows: &[&[i64]]) -> ExtMatrix {
        ExtMatrix::from_i64(n, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn symmetrizer_of_valued_example() {
        let b = m(4, &[&[0, 1, 0, 0], &[-1, 0, -1, 0], &[0, 2, 0, 2], &[0, 0, -2, 0]]);
        let d: Vec<i64> = b.skew_symmetrizer().d.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![2, 2, 1, 1]);
    }

    #[test]
    fn symmetric_sign_pattern_rejected() {
        let err = ExtMatrix::square(&[vec![0, 1], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, Error::NotSkewSymmetrizable(_)));
    }

    #[test]
    fn inconsistent_cycle_rejected() {
        // ratios 1->2 is 2, 2->3 is 1, 3->1 is 1: inconsistent around the triangle
        let err = ExtMatrix::square(&[vec![0, 2, -1], vec![-1, 0, 1], vec![1, -1, 0]]).unwrap_err();
        assert!(matches!(err, Error::NotSkewSymmetrizable(_)));
    }

    #[test]
    fn direction_out_of_range() {
        let b = m(2, &[&[0, 1], &[-1, 0]]);
        assert_eq!(b.mutate(2).unwrap_err(), Error::DirectionOutOfRange { k: 3, n: 2 });
    }

    #[test]
    fn text_roundtrip_with_comments() {
        let text = "# a3 with one frozen row\n3 4\n0 1 0\n-1 0 -1\n0 1 0\n0 0 1\n";
        let b = ExtMatrix::parse(text).unwrap();
        assert_eq!(b.m(), 4);
        assert_eq!(ExtMatrix::parse(&b.to_text()).unwrap(), b);
    }

    #[test]
    fn parse_reports_position() {
        let err = ExtMatrix::parse("2 2\n0 1\n-1 x\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                column: 4,
                message: "invalid integer `x`".into()
            }
        );
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let b = m(3, &[&[0, 1, 0], &[-1, 0, -1], &[0, 1, 0], &[0, 0, 1]]);
        let r = b.relabeled(&[2, 0, 1]);
        assert_eq!(b.canonical_form(), r.canonical_form());
    }
}
