//! Iced valued quivers and their correspondence with extended matrices.
//!
//! An arrow `i -> j` with values `(p, q)` encodes `b_ij = p`, `b_ji = -q`.
//! Arrows touching a frozen vertex carry `p = q`, since the frozen column
//! of the matrix is not recorded.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{parse_err, Error, Result};
use crate::matrix::ExtMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub p: BigInt,
    pub q: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedQuiver {
    pub mutable: usize,
    pub frozen: usize,
    /// Vertices are 0-based; frozen vertices are `mutable..mutable + frozen`.
    pub arrows: Vec<Arrow>,
}

impl ValuedQuiver {
    pub fn from_matrix(b: &ExtMatrix) -> ValuedQuiver {
        let n = b.n();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let bij = b.entry(i, j);
                if bij.is_zero() {
                    continue;
                }
                let bji = b.entry(j, i);
                if bij.is_positive() {
                    arrows.push(Arrow { from: i, to: j, p: bij.clone(), q: -bji });
                } else {
                    arrows.push(Arrow { from: j, to: i, p: bji.clone(), q: -bij });
                }
            }
        }
        for r in n..b.m() {
            for j in 0..n {
                let brj = b.entry(r, j);
                if brj.is_positive() {
                    arrows.push(Arrow { from: r, to: j, p: brj.clone(), q: brj.clone() });
                } else if brj.is_negative() {
                    arrows.push(Arrow { from: j, to: r, p: -brj, q: -brj });
                }
            }
        }
        ValuedQuiver {
            mutable: n,
            frozen: b.m() - n,
            arrows,
        }
    }

    pub fn to_matrix(&self) -> Result<ExtMatrix> {
        let n = self.mutable;
        let m = n + self.frozen;
        let mut rows = vec![vec![BigInt::zero(); n]; m];
        let mut seen = std::collections::HashSet::new();
        for a in &self.arrows {
            if a.from >= m || a.to >= m {
                return Err(Error::MalformedQuiver(format!(
                    "vertex out of range in arrow {} -> {}",
                    a.from + 1,
                    a.to + 1
                )));
            }
            if a.from == a.to {
                return Err(Error::MalformedQuiver(format!("loop at vertex {}", a.from + 1)));
            }
            if a.from >= n && a.to >= n {
                return Err(Error::MalformedQuiver(format!(
                    "arrow between frozen vertices {} and {}",
                    a.from + 1,
                    a.to + 1
                )));
            }
            if !a.p.is_positive() || !a.q.is_positive() {
                return Err(Error::MalformedQuiver("arrow values must be positive".into()));
            }
            let pair = (a.from.min(a.to), a.from.max(a.to));
            if !seen.insert(pair) {
                return Err(Error::MalformedQuiver(format!(
                    "more than one arrow between {} and {}",
                    pair.0 + 1,
                    pair.1 + 1
                )));
            }
            if a.from >= n {
                if a.p != a.q {
                    return Err(Error::MalformedQuiver("inconsistent values on frozen arrow".into()));
                }
                rows[a.from][a.to] = a.p.clone();
            } else if a.to >= n {
                if a.p != a.q {
                    return Err(Error::MalformedQuiver("inconsistent values on frozen arrow".into()));
                }
                rows[a.to][a.from] = -&a.p;
            } else {
                rows[a.from][a.to] = a.p.clone();
                rows[a.to][a.from] = -&a.q;
            }
        }
        ExtMatrix::new(n, rows).map_err(|e| match e {
            Error::NotSkewSymmetrizable(msg) => Error::MalformedQuiver(msg),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<ValuedQuiver> {
        let mut header: Option<(usize, usize)> = None;
        let mut arrows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "v" => {
                    if header.is_some() || toks.len() != 3 {
                        return Err(parse_err(ln, 1, "expected a single `v <mutable> <frozen>` line"));
                    }
                    let a = toks[1].parse().map_err(|_| parse_err(ln, 3, "invalid count"))?;
                    let b = toks[2].parse().map_err(|_| parse_err(ln, 3, "invalid count"))?;
                    header = Some((a, b));
                }
                "a" => {
                    if header.is_none() {
                        return Err(parse_err(ln, 1, "arrow before `v` line"));
                    }
                    if toks.len() != 5 {
                        return Err(parse_err(ln, 1, "expected `a <i> <j> <p> <q>`"));
                    }
                    let idx_of = |k: usize| -> Result<usize> {
                        let v: usize = toks[k]
                            .parse()
                            .map_err(|_| parse_err(ln, 1, format!("invalid vertex `{}`", toks[k])))?;
                        if v == 0 {
                            return Err(parse_err(ln, 1, "vertices are numbered from 1"));
                        }
                        Ok(v - 1)
                    };
                    let val = |k: usize| -> Result<BigInt> {
                        toks[k]
                            .parse()
                            .map_err(|_| parse_err(ln, 1, format!("invalid value `{}`", toks[k])))
                    };
                    arrows.push(Arrow {
                        from: idx_of(1)?,
                        to: idx_of(2)?,
                        p: val(3)?,
                        q: val(4)?,
                    });
                }
                other => return Err(parse_err(ln, 1, format!("unknown record `{}`", other))),
            }
        }
        let (mutable, frozen) = header.ok_or_else(|| parse_err(1, 1, "missing `v` line"))?;
        if mutable == 0 {
            return Err(Error::MalformedQuiver("no mutable vertices".into()));
        }
        Ok(ValuedQuiver { mutable, frozen, arrows })
    }
}

impl fmt::Display for ValuedQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "v {} {}", self.mutable, self.frozen)?;
        for a in &self.arrows {
            writeln!(f, "a {} {} {} {}", a.from + 1, a.to + 1, a.p, a.q)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arrow() {
        let b = ExtMatrix::square(&[vec![0, 1], vec![-1, 0]]).unwrap();
        let q = ValuedQuiver::from_matrix(&b);
        assert_eq!(q.to_string(), "v 2 0\na 1 2 1 1\n");
    }

    #[test]
    fn frozen_to_frozen_rejected() {
        let q = ValuedQuiver::parse("v 1 2\na 2 3 1 1\n").unwrap();
        assert!(matches!(q.to_matrix(), Err(Error::MalformedQuiver(_))));
    }

    #[test]
    fn inconsistent_values_rejected() {
        let q = ValuedQuiver::parse("v 3 0\na 1 2 2 1\na 2 3 1 1\na 3 1 1 1\n").unwrap();
        assert!(matches!(q.to_matrix(), Err(Error::MalformedQuiver(_))));
    }
}
