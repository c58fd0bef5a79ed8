//! Small explicit graphs and the combinatorial bounds
//! `M(G)/N ≤ rate ≤ (N − α(G))/N` on storage rates.

mod independent;
mod matching;

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use independent::{max_independent_set, IndependentSet, DEFAULT_NODE_BUDGET};
pub use matching::max_matching;

use crate::cosetgraph::{CosetGraphHandle, StorageReport};
use crate::error::{Error, Result};
use crate::rate::Rate;

/// Largest vertex count [`expand`] accepts.
pub const MAX_EXPAND_VERTICES: usize = 1 << 16;

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl ExplicitGraph {
    /// Rejects loops, repeated edges and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
            list.push(e);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(ExplicitGraph { n, edges: list, adj })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("cycle needs at least 3 vertices, got {n}")));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    /// `w × h` grid with wrap-around; 4-regular for `w, h ≥ 3`.
    pub fn torus(w: usize, h: usize) -> Result<Self> {
        if w < 3 || h < 3 {
            return Err(Error::InvalidParameter(format!("torus {w}x{h} needs both sides at least 3")));
        }
        let id = |x: usize, y: usize| y * w + x;
        let mut edges = Vec::with_capacity(2 * w * h);
        for y in 0..h {
            for x in 0..w {
                edges.push((id(x, y), id((x + 1) % w, y)));
                edges.push((id(x, y), id(x, (y + 1) % h)));
            }
        }
        Self::new(w * h, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// `Some(d)` if every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}

/// Loopless Cayley graph of the handle as an explicit edge list.
pub fn expand(g: &CosetGraphHandle) -> Result<ExplicitGraph> {
    let n = g.n_vertices();
    if n > MAX_EXPAND_VERTICES {
        return Err(Error::Capacity {
            what: "explicit graph".into(),
            requested: n as u64,
            budget: MAX_EXPAND_VERTICES as u64,
        });
    }
    let gens = g.generators().effective_nonzero();
    let edges = (0..n).flat_map(|x| {
        gens.iter()
            .map(move |&s| (x, x ^ s as usize))
            .filter(|&(x, y)| x < y)
    });
    ExplicitGraph::new(n, edges)
}

/// Edge-list text: header `N M`, then `M` lines `u v` (0-based).
pub fn parse_edge_list(text: &str) -> Result<ExplicitGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing \"N M\" header"))?;
    let nums = parse_pair(hline, header)?;
    let (n, m) = nums;
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if edges.len() == m {
            return Err(Error::parse(lineno, format!("more than {m} edges")));
        }
        edges.push(parse_pair(lineno, line)?);
    }
    if edges.len() != m {
        return Err(Error::parse(0, format!("expected {m} edges, found {}", edges.len())));
    }
    ExplicitGraph::new(n, edges)
}

fn parse_pair(lineno: usize, line: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::parse(lineno, format!("expected two integers, got {line:?}")));
    }
    let p = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| Error::parse(lineno, format!("bad integer {s:?}: {e}")))
    };
    Ok((p(parts[0])?, p(parts[1])?))
}

pub fn read_edge_list(path: &Path) -> Result<ExplicitGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn format_edge_list(g: &ExplicitGraph) -> String {
    let mut s = format!("{} {}\n", g.n, g.edges.len());
    for (u, v) in &g.edges {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcVerdict {
    pub matching: u64,
    pub alpha: u64,
    /// `false` if the independent-set search ran out of budget; the upper
    /// bound is then looser but still valid.
    pub alpha_exact: bool,
    pub lower: Rate,
    pub rate: Rate,
    pub upper: Rate,
    pub pass: bool,
}

/// Checks `M/N ≤ rate ≤ (N − α)/N` exactly.
pub fn vc_bounds(g: &ExplicitGraph, report: &StorageReport, alpha: &IndependentSet, matching: usize) -> Result<VcVerdict> {
    let n = g.n() as u64;
    if report.n_vertices != n {
        return Err(Error::DimensionMismatch(format!(
            "report is for N = {}, graph has {n} vertices",
            report.n_vertices
        )));
    }
    let lower = Rate::new(matching as u64, n)?;
    let upper = Rate::new(n - alpha.size as u64, n)?;
    let rate = report.rate;
    Ok(VcVerdict {
        matching: matching as u64,
        alpha: alpha.size as u64,
        alpha_exact: alpha.exact,
        lower,
        rate,
        upper,
        pass: lower <= rate && rate <= upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_code, CodeFamilyId};
    use crate::cosetgraph::{storage_report, GeneratorSet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn clebsch() -> (CosetGraphHandle, ExplicitGraph) {
        let h = CosetGraphHandle::from_code(&build_code(&CodeFamilyId::Repetition(5)).unwrap()).unwrap();
        let g = expand(&h).unwrap();
        (h, g)
    }

    #[test]
    fn clebsch_expansion() {
        let (_, g) = clebsch();
        assert_eq!((g.n(), g.edges().len(), g.regular_degree()), (16, 40, Some(5)));
    }

    #[test]
    fn single_generator_is_perfect_matching() {
        let h = CosetGraphHandle::from_generators(GeneratorSet::new(4, vec![0b1010], true).unwrap());
        let g = expand(&h).unwrap();
        assert_eq!(g.edges().len(), 8);
        assert_eq!(g.regular_degree(), Some(1));
    }

    #[test]
    fn expanded_degree_matches_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for _ in 0..50 {
            let r = rng.random_range(1..=8usize);
            let gens: Vec<u64> = (0..rng.random_range(0..10)).map(|_| rng.random_range(0..1u64 << r)).collect();
            let h = CosetGraphHandle::from_generators(GeneratorSet::new(r, gens, rng.random_bool(0.5)).unwrap());
            let g = expand(&h).unwrap();
            assert_eq!(g.regular_degree(), Some(h.degree()));
        }
    }

    #[test]
    fn clebsch_sandwich() {
        let (h, g) = clebsch();
        let report = storage_report(&h).unwrap();
        let alpha = max_independent_set(&g, DEFAULT_NODE_BUDGET);
        let v = vc_bounds(&g, &report, &alpha, max_matching(&g)).unwrap();
        assert_eq!((v.alpha, v.matching), (5, 8));
        assert!(v.alpha_exact && v.pass);
        assert_eq!(v.lower.to_string(), "8/16");
        assert_eq!(v.upper.to_string(), "11/16");
    }

    fn fake_report(n: u64, k: u64) -> StorageReport {
        StorageReport {
            label: "manual".into(),
            r: 0,
            n_vertices: n,
            rank_tilde: n - k,
            k,
            rate: Rate::new(k, n).unwrap(),
            triangle_free: false,
            conditions: None,
            elimination: "none".into(),
            elapsed_seconds: 0.0,
        }
    }

    #[test]
    fn complete_graph_single_parity() {
        let g = ExplicitGraph::complete(6).unwrap();
        let alpha = max_independent_set(&g, DEFAULT_NODE_BUDGET);
        let v = vc_bounds(&g, &fake_report(6, 5), &alpha, max_matching(&g)).unwrap();
        assert!(v.pass);
        assert_eq!((v.lower.to_string(), v.upper.to_string()), ("3/6".into(), "5/6".into()));
    }

    #[test]
    fn corrupted_report_fails() {
        let (h, g) = clebsch();
        let mut report = storage_report(&h).unwrap();
        report.rate = Rate::new(12, 16).unwrap();
        let alpha = max_independent_set(&g, DEFAULT_NODE_BUDGET);
        assert!(!vc_bounds(&g, &report, &alpha, max_matching(&g)).unwrap().pass);
        report.rate = Rate::new(7, 16).unwrap();
        assert!(!vc_bounds(&g, &report, &alpha, max_matching(&g)).unwrap().pass);
    }

    #[test]
    fn repetition_7_sandwich() {
        let h = CosetGraphHandle::from_code(&build_code(&CodeFamilyId::Repetition(7)).unwrap()).unwrap();
        let g = expand(&h).unwrap();
        let report = storage_report(&h).unwrap();
        let alpha = max_independent_set(&g, DEFAULT_NODE_BUDGET);
        assert!(alpha.exact);
        let v = vc_bounds(&g, &report, &alpha, max_matching(&g)).unwrap();
        assert!(v.pass, "{v:?}");
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = ExplicitGraph::torus(3, 4).unwrap();
        assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
        assert!(parse_edge_list("3 1\n0 0\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n1 0\n").is_err());
        assert!(parse_edge_list("3 1\n0 3\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("3 1\n0 1 2\n").is_err());
    }

    #[test]
    fn constructors() {
        assert_eq!(ExplicitGraph::torus(16, 16).unwrap().regular_degree(), Some(4));
        assert_eq!(ExplicitGraph::cycle(5).unwrap().regular_degree(), Some(2));
        assert_eq!(ExplicitGraph::path(4).unwrap().regular_degree(), None);
        assert!(ExplicitGraph::complete(7).unwrap().is_connected());
    }
}
