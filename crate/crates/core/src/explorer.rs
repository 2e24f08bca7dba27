//! Breadth-first exchange graph enumeration and bipartite moves.

use std::collections::{HashMap, VecDeque};

use num_traits::Signed;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::lat_equal;
use crate::matrix::ExtMatrix;
use crate::seed::LabeledSeed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExploreMode {
    /// Seeds identified by their (unordered) clusters.
    Symbolic,
    /// Seeds identified by the canonical form of their matrix. This
    /// enumerates matrix classes, which can be fewer than seeds.
    MatrixOnly,
}

impl ExploreMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "symbolic" => Some(ExploreMode::Symbolic),
            "matrix_only" => Some(ExploreMode::MatrixOnly),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExploreMode::Symbolic => "symbolic",
            ExploreMode::MatrixOnly => "matrix_only",
        }
    }

    /// Symbolic up to rank 6, matrix classes above.
    pub fn default_for(n: usize) -> Self {
        if n <= 6 {
            ExploreMode::Symbolic
        } else {
            ExploreMode::MatrixOnly
        }
    }
}

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeedKey(pub String);

impl SeedKey {
    pub fn of_seed(s: &LabeledSeed) -> SeedKey {
        SeedKey(s.cluster_key().join(";"))
    }

    pub fn of_matrix(b: &ExtMatrix) -> SeedKey {
        let parts: Vec<String> = b.canonical_form().iter().map(|x| x.to_string()).collect();
        SeedKey(parts.join(","))
    }

    /// Short stable identifier for output.
    pub fn hash_hex(&self) -> String {
        let d = Sha256::digest(self.0.as_bytes());
        d.iter().take(8).map(|b| format!("{:02x}", b)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub key: SeedKey,
    pub matrix: ExtMatrix,
    /// Path from the root along the breadth-first tree.
    pub path: Vec<usize>,
    /// Present in symbolic mode.
    pub seed: Option<LabeledSeed>,
    /// `(parent index, direction)` in the breadth-first tree.
    pub parent: Option<(usize, usize)>,
    /// Neighbor reached by each direction; `None` where the cap stopped exploration.
    pub neighbors: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub mode: ExploreMode,
    pub n: usize,
    pub nodes: Vec<Node>,
    pub finite: bool,
    pub cap_hit: bool,
    index: HashMap<SeedKey, usize>,
}

pub fn explore(root: &LabeledSeed, cap: usize, mode: ExploreMode) -> Result<ExchangeGraph> {
    let n = root.n();
    let cap = cap.max(1);
    let root_key = match mode {
        ExploreMode::Symbolic => SeedKey::of_seed(root),
        ExploreMode::MatrixOnly => SeedKey::of_matrix(root.matrix()),
    };
    let mut g = ExchangeGraph {
        mode,
        n,
        nodes: vec![Node {
            key: root_key.clone(),
            matrix: root.matrix().clone(),
            path: Vec::new(),
            seed: (mode == ExploreMode::Symbolic).then(|| root.clone()),
            parent: None,
            neighbors: vec![None; n],
        }],
        finite: false,
        cap_hit: false,
        index: HashMap::from([(root_key, 0)]),
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for k in 0..n {
            let (key, matrix, seed) = match mode {
                ExploreMode::Symbolic => {
                    let s = g.nodes[i].seed.as_ref().expect("symbolic node").mutate(k)?;
                    (SeedKey::of_seed(&s), s.matrix().clone(), Some(s))
                }
                ExploreMode::MatrixOnly => {
                    let b = g.nodes[i].matrix.mutate(k)?;
                    (SeedKey::of_matrix(&b), b, None)
                }
            };
            if let Some(&j) = g.index.get(&key) {
                g.nodes[i].neighbors[k] = Some(j);
                continue;
            }
            if g.nodes.len() >= cap {
                g.cap_hit = true;
                continue;
            }
            let j = g.nodes.len();
            let mut path = g.nodes[i].path.clone();
            if path.last() == Some(&k) {
                path.pop();
            } else {
                path.push(k);
            }
            g.nodes.push(Node {
                key: key.clone(),
                matrix,
                path,
                seed,
                parent: Some((i, k)),
                neighbors: vec![None; n],
            });
            g.index.insert(key, j);
            g.nodes[i].neighbors[k] = Some(j);
            queue.push_back(j);
        }
    }
    g.finite = !g.cap_hit;
    Ok(g)
}

impl ExchangeGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, key: &SeedKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Undirected edges `(i, j, direction)` with `i <= j`, each listed once.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, nd) in self.nodes.iter().enumerate() {
            for (k, nb) in nd.neighbors.iter().enumerate() {
                if let Some(j) = *nb {
                    if i < j || (i == j && !out.contains(&(i, j, k))) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// Every node has `n` distinct neighbors, none of them itself.
    pub fn is_regular(&self) -> bool {
        self.finite
            && self.nodes.iter().enumerate().all(|(i, nd)| {
                let mut nb: Vec<usize> = nd.neighbors.iter().filter_map(|x| *x).collect();
                let full = nb.len() == self.n;
                nb.sort();
                nb.dedup();
                full && nb.len() == self.n && !nb.contains(&i)
            })
    }

    pub fn census(&self) -> Value {
        json!({
            "mode": self.mode.name(),
            "nodes": self.nodes.len(),
            "edges": self.edges().len(),
            "finite": self.finite,
            "cap_hit": self.cap_hit,
            "regular": self.is_regular(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph {\n");
        for nd in &self.nodes {
            s.push_str(&format!("  \"{}\";\n", nd.key.hash_hex()));
        }
        for (i, j, k) in self.edges() {
            s.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                self.nodes[i].key.hash_hex(),
                self.nodes[j].key.hash_hex(),
                k + 1
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// Number of clusters of a finite type, used as an independent check on
/// enumeration: `prod (h + e_i + 1) / (e_i + 1)` over the exponents.
pub fn cluster_count(family: char, n: usize) -> Option<u64> {
    let (h, exps): (u64, Vec<u64>) = match family {
        'A' => (n as u64 + 1, (1..=n as u64).collect()),
        'B' | 'C' => (2 * n as u64, (0..n as u64).map(|i| 2 * i + 1).collect()),
        'D' if n >= 4 => {
            let mut e: Vec<u64> = (0..n as u64 - 1).map(|i| 2 * i + 1).collect();
            e.push(n as u64 - 1);
            (2 * n as u64 - 2, e)
        }
        'E' if n == 6 => (12, vec![1, 4, 5, 7, 8, 11]),
        'E' if n == 7 => (18, vec![1, 5, 7, 9, 11, 13, 17]),
        'E' if n == 8 => (30, vec![1, 7, 11, 13, 17, 19, 23, 29]),
        'F' if n == 4 => (12, vec![1, 5, 7, 11]),
        'G' if n == 2 => (6, vec![1, 5]),
        _ => return None,
    };
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for e in exps {
        num *= (h + e + 1) as u128;
        den *= (e + 1) as u128;
    }
    Some((num / den) as u64)
}

/// Vertices of the principal quiver split into sources and sinks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

/// Sources have `b_ij >= 0` for all `j`; sinks have `b_ij <= 0`. Isolated
/// vertices count as sources.
pub fn bipartite_check(b: &ExtMatrix) -> Option<Bipartition> {
    let n = b.n();
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    for i in 0..n {
        let row = &b.rows()[i][..n];
        if row.iter().all(|x| !x.is_negative()) {
            sources.push(i);
        } else if row.iter().all(|x| !x.is_positive()) {
            sinks.push(i);
        } else {
            return None;
        }
    }
    Some(Bipartition { sources, sinks })
}

/// Mutation sequence of `tau^power`: `tau` mutates at the sinks first and
/// then at the sources; `tau^-1` does the reverse.
pub fn tau_sequence(b: &ExtMatrix, power: i64) -> Result<Vec<usize>> {
    let bp = bipartite_check(b).ok_or(Error::NotBipartite)?;
    let one: Vec<usize> = if power >= 0 {
        bp.sinks.iter().chain(&bp.sources).copied().collect()
    } else {
        bp.sources.iter().chain(&bp.sinks).copied().collect()
    };
    Ok(one.repeat(power.unsigned_abs() as usize))
}

pub fn tau_apply(s: &LabeledSeed, power: i64) -> Result<LabeledSeed> {
    s.mutate_path(&tau_sequence(s.matrix(), power)?)
}

pub fn tau_apply_matrix(b: &ExtMatrix, power: i64) -> Result<ExtMatrix> {
    b.mutate_path(&tau_sequence(b, power)?)
}

#[derive(Clone, Debug)]
pub struct TauLatReport {
    pub results: Vec<(i64, bool)>,
}

impl TauLatReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.1)
    }
}

pub fn tau_lat_invariance(b: &ExtMatrix, powers: impl IntoIterator<Item = i64>) -> Result<TauLatReport> {
    let results = powers
        .into_iter()
        .map(|p| Ok((p, lat_equal(b, &tau_apply_matrix(b, p)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TauLatReport { results })
}

/// Order of `tau` on labeled seeds, through periodicity of the principal
/// coefficient matrix: the seed returns exactly when the coefficient
/// block is the identity again.
pub fn tau_order(b: &ExtMatrix, max_steps: usize) -> Result<Option<usize>> {
    let start = b.principal_only().with_principal_coefficients();
    let seq = tau_sequence(b, 1)?;
    let mut cur = start.clone();
    for k in 1..=max_steps {
        cur = cur.mutate_path(&seq)?;
        if cur == start {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Length of the `tau`-orbit of an unlabeled seed.
pub fn tau_orbit_length(s: &LabeledSeed, max_steps: usize) -> Result<Option<usize>> {
    let key = SeedKey::of_seed(s);
    let seq = tau_sequence(s.matrix(), 1)?;
    let mut cur = s.clone();
    for k in 1..=max_steps {
        cur = cur.mutate_path(&seq)?;
        if SeedKey::of_seed(&cur) == key {
            return Ok(Some(k));
        }
    }
    Ok(None)
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
    fn small_censuses() {
        for (n, expect) in [(2, 5), (3, 14)] {
            let g = explore(&LabeledSeed::root(a(n)), 1000, ExploreMode::Symbolic).unwrap();
            assert_eq!(g.len(), expect);
            assert!(g.is_regular());
            assert_eq!(cluster_count('A', n), Some(expect as u64));
        }
    }

    #[test]
    fn cap_is_reported() {
        let g = explore(&LabeledSeed::root(a(3)), 4, ExploreMode::Symbolic).unwrap();
        assert!(g.cap_hit && !g.finite);
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn bipartite_orientations() {
        let bp = bipartite_check(&a(3)).unwrap();
        assert_eq!(bp.sources, vec![0, 2]);
        assert_eq!(bp.sinks, vec![1]);
        let linear = ExtMatrix::square(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        assert!(bipartite_check(&linear).is_none());
    }

    #[test]
    fn tau_round_trip_and_orders() {
        let s = LabeledSeed::root(a(3).with_frozen_i64(&[vec![2, -1, 3]]).unwrap());
        let t = tau_apply(&tau_apply(&s, 1).unwrap(), -1).unwrap();
        assert_eq!(t.cluster(), s.cluster());
        assert_eq!(t.matrix(), s.matrix());
        assert_eq!(tau_orbit_length(&LabeledSeed::root(a(2)), 20).unwrap(), Some(5));
        assert_eq!(tau_order(&a(2), 20).unwrap(), Some(5));
    }

    #[test]
    fn dot_lists_each_edge_once() {
        let g = explore(&LabeledSeed::root(a(2)), 100, ExploreMode::Symbolic).unwrap();
        let dot = g.to_dot();
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert!(dot.starts_with("graph {"));
    }
}
