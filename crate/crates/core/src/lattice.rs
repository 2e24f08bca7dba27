//! Integer row lattices via row-style Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::ExtMatrix;

/// Canonical basis of a row lattice: positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, zero rows removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HnfBasis {
    pub rows: Vec<Vec<BigInt>>,
    pub width: usize,
}

/// `u * input = h` with `u` unimodular. Rows of `h` past `rank` are zero, so
/// the matching rows of `u` span the left kernel of the input.
#[derive(Clone, Debug)]
pub struct HnfDecomposition {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl HnfDecomposition {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> HnfBasis {
        HnfBasis {
            rows: self.h[..self.rank()].to_vec(),
            width: self.h.first().map_or(0, |r| r.len()),
        }
    }

    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        self.u[self.rank()..].to_vec()
    }
}

fn sub_multiple(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

pub fn hnf_with_transform(rows: &[Vec<BigInt>], width: usize) -> HnfDecomposition {
    let r = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut p = 0;
    for c in 0..width {
        if p == r {
            break;
        }
        loop {
            let best = (p..r)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(best) = best else { break };
            a.swap(p, best);
            u.swap(p, best);
            let mut done = true;
            for i in (p + 1)..r {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[p][c]);
                let (ap, ai) = (a[p].clone(), &mut a[i]);
                sub_multiple(ai, &ap, &q);
                let up = u[p].clone();
                sub_multiple(&mut u[i], &up, &q);
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[p][c].is_zero() {
            continue;
        }
        if a[p][c].is_negative() {
            for x in a[p].iter_mut().chain(u[p].iter_mut()) {
                *x = -&*x;
            }
        }
        let piv = a[p][c].clone();
        let (ap, up) = (a[p].clone(), u[p].clone());
        for i in 0..p {
            let q = a[i][c].div_floor(&piv);
            sub_multiple(&mut a[i], &ap, &q);
            sub_multiple(&mut u[i], &up, &q);
        }
        pivots.push(c);
        p += 1;
    }
    HnfDecomposition { h: a, u, pivots }
}

pub fn hnf(rows: &[Vec<BigInt>], width: usize) -> HnfBasis {
    hnf_with_transform(rows, width).basis()
}

impl HnfBasis {
    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("zero row in basis"))
            .collect()
    }

    /// Integer coefficients `q` with `v = sum q_k rows[k]`, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.width {
            return Err(Error::DimensionMismatch { expected: self.width, found: v.len() });
        }
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        let mut col = 0;
        for (row, c) in self.rows.iter().zip(self.pivots()) {
            if rest[col..c].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
            let (q, rem) = rest[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return Ok(None);
            }
            sub_multiple(&mut rest, row, &q);
            coords.push(q);
            col = c + 1;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(coords))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Reduces `v` into the fundamental domain `0 <= v[pivot] < pivot` for
    /// every basis row, giving a canonical coset representative.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for (row, c) in self.rows.iter().zip(self.pivots()) {
            let q = out[c].div_floor(&row[c]);
            sub_multiple(&mut out, row, &q);
        }
        out
    }

    pub fn contains_all(&self, other: &HnfBasis) -> Result<bool> {
        for r in &other.rows {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The lattice spanned by all rows of `b`.
pub fn lattice_of(b: &ExtMatrix) -> HnfBasis {
    hnf(b.rows(), b.n())
}

pub fn span_contains(b: &ExtMatrix, v: &[BigInt]) -> Result<bool> {
    lattice_of(b).contains(v)
}

pub fn lat_equal(b: &ExtMatrix, bp: &ExtMatrix) -> bool {
    b.n() == bp.n() && lattice_of(b) == lattice_of(bp)
}

/// `Lat(sub) ⊆ Lat(sup)`.
pub fn lat_contains(sup: &ExtMatrix, sub: &ExtMatrix) -> bool {
    sup.n() == sub.n() && lattice_of(sup).contains_all(&lattice_of(sub)).unwrap_or(false)
}

/// A solution `M` of `M * B = B'` in block shape `(I 0; M1 M2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSolution {
    /// `m' x m`, rows of `B'` as combinations of rows of `B`.
    pub matrix: Vec<Vec<BigInt>>,
    /// Basis of `{x : x * B = 0}`; the frozen rows of `matrix` are unique
    /// modulo this lattice.
    pub kernel: Vec<Vec<BigInt>>,
}

impl BlockSolution {
    pub fn m1(&self, n: usize) -> Vec<Vec<BigInt>> {
        self.matrix[n..].iter().map(|r| r[..n].to_vec()).collect()
    }

    pub fn m2(&self, n: usize) -> Vec<Vec<BigInt>> {
        self.matrix[n..].iter().map(|r| r[n..].to_vec()).collect()
    }
}

/// Solves each frozen row of `bp` as an integer combination of the rows of
/// `b`. The returned rows are reduced modulo the kernel lattice.
pub fn solve_block_matrix(b: &ExtMatrix, bp: &ExtMatrix) -> Result<Option<BlockSolution>> {
    if !b.same_principal(bp) {
        return Err(Error::PrincipalPartsDiffer);
    }
    let n = b.n();
    let m = b.m();
    let dec = hnf_with_transform(b.rows(), n);
    let basis = dec.basis();
    let kernel = dec.kernel();
    let kernel_hnf = hnf(&kernel, m);
    let mut matrix: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for row in bp.frozen_rows() {
        let Some(q) = basis.coordinates(row)? else {
            return Ok(None);
        };
        let mut x = vec![BigInt::zero(); m];
        for (qk, uk) in q.iter().zip(&dec.u) {
            for (xi, ui) in x.iter_mut().zip(uk) {
                *xi += qk * ui;
            }
        }
        matrix.push(kernel_hnf.reduce(&x));
    }
    Ok(Some(BlockSolution { matrix, kernel: kernel_hnf.rows }))
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, br)| x * &br[j]).sum())
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free elimination.
pub fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn is_unimodular(a: &[Vec<BigInt>]) -> bool {
    a.iter().all(|r| r.len() == a.len()) && determinant(a).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| v(r)).collect()
    }

    #[test]
    fn identity_basis() {
        let id = mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(hnf(&id, 3).rows, id);
    }

    #[test]
    fn reduced_above_pivots() {
        let h = hnf(&mat(&[&[2, 3], &[0, 4], &[4, 2]]), 2);
        assert_eq!(h.rows, mat(&[&[2, 3], &[0, 4]]));
        let h = hnf(&mat(&[&[2, 7], &[0, 4]]), 2);
        assert_eq!(h.rows, mat(&[&[2, 3], &[0, 4]]));
    }

    #[test]
    fn transform_is_consistent() {
        let a = mat(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5], &[3, 5, 8]]);
        let d = hnf_with_transform(&a, 3);
        assert_eq!(mat_mul(&d.u, &a), d.h);
        assert!(determinant(&d.u).abs().is_one());
    }

    #[test]
    fn nongroup_solution_coset() {
        let b = ExtMatrix::from_i64(2, &[vec![0, 1], vec![-1, 0], vec![3, 0]]).unwrap();
        let bp = ExtMatrix::from_i64(2, &[vec![0, 1], vec![-1, 0], vec![0, -3]]).unwrap();
        let s = solve_block_matrix(&b, &bp).unwrap().unwrap();
        assert_eq!(s.matrix[2], v(&[-3, 0, 0]));
        assert_eq!(s.kernel, vec![v(&[0, 3, 1])]);
        let printed = v(&[-3, 6, 2]);
        let diff: Vec<BigInt> = printed.iter().zip(&s.matrix[2]).map(|(a, b)| a - b).collect();
        assert!(hnf(&s.kernel, 3).contains(&diff).unwrap());
        assert_eq!(mat_mul(&s.matrix, b.rows()), bp.rows().to_vec());
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&mat(&[&[2, 1], &[7, 4]])), BigInt::from(1));
        assert_eq!(determinant(&mat(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]])), BigInt::from(-2));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }
}
