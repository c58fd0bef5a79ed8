use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{peel, EdgeVertexCode, LocalMode};
use crate::error::{Error, Result};

fn require_parity(code: &EdgeVertexCode) -> Result<()> {
    if code.mode() != LocalMode::SingleParity {
        return Err(Error::InvalidParameter(
            "symbol-level recovery needs the single-parity local code".into(),
        ));
    }
    Ok(())
}

fn alphabet_mask(bits: u32) -> Result<u8> {
    if !(1..=8).contains(&bits) {
        return Err(Error::InvalidParameter(format!("alphabet of {bits} bits, need 1..=8")));
    }
    Ok((((1u16) << bits) - 1) as u8)
}

/// Spanning forest: BFS order and, for non-roots, the index of the tree
/// edge to the parent.
fn spanning_forest(code: &EdgeVertexCode, index: &HashMap<(usize, usize), usize>) -> (Vec<usize>, Vec<Option<usize>>) {
    let g = code.graph();
    let mut parent_edge = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    for root in 0..g.n() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent_edge[u] = Some(index[&key(u, v)]);
                    queue.push_back(u);
                }
            }
        }
    }
    (order, parent_edge)
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn edge_index(code: &EdgeVertexCode) -> HashMap<(usize, usize), usize> {
    code.graph()
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| (key(u, v), i))
        .collect()
}

/// Free symbols of the single-parity code: `|E| − N + c` for `c` components.
pub fn payload_len(code: &EdgeVertexCode) -> usize {
    let index = edge_index(code);
    let (_, parent) = spanning_forest(code, &index);
    code.graph().edges().len() - parent.iter().flatten().count()
}

/// Writes `payload` on the edges outside a spanning forest and solves the
/// forest edges, leaves first, so the symbols at every vertex XOR to zero.
/// Returns one value per edge, in the graph's edge order.
pub fn encode(code: &EdgeVertexCode, payload: &[u8], alphabet_bits: u32) -> Result<Vec<u8>> {
    require_parity(code)?;
    let mask = alphabet_mask(alphabet_bits)?;
    let index = edge_index(code);
    let (order, parent) = spanning_forest(code, &index);
    let tree: Vec<bool> = {
        let mut t = vec![false; code.graph().edges().len()];
        for e in parent.iter().flatten() {
            t[*e] = true;
        }
        t
    };
    let free = tree.iter().filter(|&&t| !t).count();
    if payload.len() != free {
        return Err(Error::DimensionMismatch(format!(
            "payload has {} symbols, code carries {free}",
            payload.len()
        )));
    }
    if let Some(b) = payload.iter().find(|&&b| b & !mask != 0) {
        return Err(Error::InvalidParameter(format!("symbol {b} outside a {alphabet_bits}-bit alphabet")));
    }
    let mut values = vec![0u8; tree.len()];
    let mut it = payload.iter();
    for (i, &t) in tree.iter().enumerate() {
        if !t {
            values[i] = *it.next().expect("length checked");
        }
    }
    // Children precede parents in reverse BFS order.
    for &v in order.iter().rev() {
        if let Some(pe) = parent[v] {
            let g = code.graph();
            values[pe] = g
                .neighbors(v)
                .iter()
                .map(|&u| index[&key(u, v)])
                .filter(|&e| e != pe)
                .fold(0, |acc, e| acc ^ values[e]);
        }
    }
    Ok(values)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripVerdict {
    pub recovered: usize,
    pub remaining: Vec<usize>,
    /// Every recovered vertex symbol equals the original.
    pub symbols_match: bool,
    /// Symbol-level and combinatorial peeling agree on what is recovered.
    pub matches_combinatorial: bool,
}

impl RoundtripVerdict {
    pub fn success(&self) -> bool {
        self.remaining.is_empty() && self.symbols_match
    }
}

/// Builds vertex symbols from edge values and runs [`symbol_roundtrip_vertices`].
pub fn symbol_roundtrip(code: &EdgeVertexCode, edge_values: &[u8], erased: &[usize]) -> Result<RoundtripVerdict> {
    require_parity(code)?;
    let g = code.graph();
    if edge_values.len() != g.edges().len() {
        return Err(Error::DimensionMismatch(format!(
            "{} edge values for {} edges",
            edge_values.len(),
            g.edges().len()
        )));
    }
    let index = edge_index(code);
    let symbols: Vec<Vec<u8>> = (0..g.n())
        .map(|v| g.neighbors(v).iter().map(|&u| edge_values[index[&key(u, v)]]).collect())
        .collect();
    symbol_roundtrip_vertices(code, &symbols, erased)
}

/// `symbols[v][i]` is the value vertex `v` holds for its edge to
/// `graph.neighbors(v)[i]`. Checks consistency, erases, recovers at the
/// symbol level and compares.
pub fn symbol_roundtrip_vertices(
    code: &EdgeVertexCode,
    symbols: &[Vec<u8>],
    erased: &[usize],
) -> Result<RoundtripVerdict> {
    require_parity(code)?;
    let g = code.graph();
    let n = g.n();
    if symbols.len() != n || (0..n).any(|v| symbols[v].len() != g.degree(v)) {
        return Err(Error::DimensionMismatch("vertex symbols do not match the graph degrees".into()));
    }
    // Position of u in v's neighbour list.
    let slot = |v: usize, u: usize| g.neighbors(v).binary_search(&u).expect("adjacent");
    for &(u, v) in g.edges() {
        if symbols[u][slot(u, v)] != symbols[v][slot(v, u)] {
            return Err(Error::Integrity(format!("copies of edge {{{u}, {v}}} disagree")));
        }
    }
    for (v, s) in symbols.iter().enumerate() {
        if s.iter().fold(0, |a, b| a ^ b) != 0 {
            return Err(Error::Integrity(format!("vertex {v} violates its parity check")));
        }
    }

    let mut is_erased = vec![false; n];
    for &v in erased {
        if v >= n {
            return Err(Error::InvalidParameter(format!("vertex {v} outside 0..{n}")));
        }
        is_erased[v] = true;
    }
    let mut held: Vec<Option<Vec<u8>>> = (0..n)
        .map(|v| (!is_erased[v]).then(|| symbols[v].clone()))
        .collect();
    let erased_nbrs = |v: usize, is_erased: &[bool]| g.neighbors(v).iter().filter(|&&u| is_erased[u]).count();
    let mut queue: VecDeque<usize> = (0..n)
        .filter(|&v| is_erased[v] && erased_nbrs(v, &is_erased) <= 1)
        .collect();
    let mut queued = vec![false; n];
    for &v in &queue {
        queued[v] = true;
    }
    let mut recovered = 0;
    while let Some(v) = queue.pop_front() {
        let nb = g.neighbors(v);
        let mut sym = vec![0u8; nb.len()];
        let mut unknown = None;
        for (i, &u) in nb.iter().enumerate() {
            match &held[u] {
                Some(su) => sym[i] = su[slot(u, v)],
                None => unknown = Some(i),
            }
        }
        if let Some(i) = unknown {
            sym[i] = sym.iter().fold(0, |a, b| a ^ b);
        }
        held[v] = Some(sym);
        is_erased[v] = false;
        recovered += 1;
        for &u in nb {
            if is_erased[u] && !queued[u] && erased_nbrs(u, &is_erased) <= 1 {
                queued[u] = true;
                queue.push_back(u);
            }
        }
    }
    let remaining: Vec<usize> = (0..n).filter(|&v| is_erased[v]).collect();
    let symbols_match = (0..n).all(|v| held[v].as_ref().is_none_or(|s| *s == symbols[v]));
    let combinatorial = peel(code, erased)?;
    Ok(RoundtripVerdict {
        recovered,
        matches_combinatorial: combinatorial.erased == remaining,
        remaining,
        symbols_match,
    })
}
