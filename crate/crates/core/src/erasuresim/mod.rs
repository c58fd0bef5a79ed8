//! Edge-vertex storage codes on regular graphs and iterative recovery.
//!
//! Every edge carries a symbol and every vertex stores the symbols of its
//! incident edges. When the symbols around each vertex form a codeword of a
//! local code correcting `t` erasures, an erased vertex is recoverable once at
//! most `t` of its neighbours are still erased. [`peel`] runs that process;
//! the rest of the module asks when it is guaranteed to finish.

mod guarantee;
mod percolation;
mod symbols;

use std::collections::VecDeque;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use guarantee::{verify_mixing_guarantee, MixingVerdict, EXHAUSTIVE_MAX_VERTICES};
pub use percolation::{
    curve_is_monotone, estimate_pc, success_curve, trial_rng, wilson_interval, CurvePoint, PcEstimate,
    BISECTION_LEVELS, BISECTION_WIDTH,
};
pub use symbols::{encode, payload_len, symbol_roundtrip, symbol_roundtrip_vertices, RoundtripVerdict};

use crate::error::{Error, Result};
use crate::gf2::MemoryGate;
use crate::graphbounds::ExplicitGraph;

/// Largest graph whose `λ` is computed by dense eigendecomposition.
pub const MAX_DENSE_LAMBDA_VERTICES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalMode {
    /// Recovery rule only: `≤ t` erased neighbours suffice.
    Combinatorial,
    /// Edge symbols XOR to zero around each vertex (`t = 1`).
    SingleParity,
}

#[derive(Clone, Debug)]
pub struct EdgeVertexCode {
    graph: ExplicitGraph,
    d: usize,
    t: usize,
    mode: LocalMode,
}

impl EdgeVertexCode {
    pub fn new(graph: ExplicitGraph, t: usize, mode: LocalMode) -> Result<Self> {
        let d = graph
            .regular_degree()
            .ok_or_else(|| Error::NotRegular("graph is not regular".into()))?;
        if t >= d {
            return Err(Error::InvalidParameter(format!("need t < d, got t = {t}, d = {d}")));
        }
        if mode == LocalMode::SingleParity && t != 1 {
            return Err(Error::InvalidParameter(format!(
                "single-parity local code corrects exactly one erasure, got t = {t}"
            )));
        }
        Ok(EdgeVertexCode { graph, d, t, mode })
    }

    pub fn graph(&self) -> &ExplicitGraph {
        &self.graph
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn mode(&self) -> LocalMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// `R(D) = (d − t)/d` for an MDS local code.
    pub fn local_rate(&self) -> Ratio<i64> {
        Ratio::new((self.d - self.t) as i64, self.d as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelingState {
    /// Vertices still erased at termination, sorted.
    pub erased: Vec<usize>,
    /// `(vertex, step)`; vertices recoverable at the start are step 1, and a
    /// vertex unlocked by a step-`k` recovery is step `k + 1`.
    pub recovered_order: Vec<(usize, usize)>,
    pub stuck: bool,
}

impl PeelingState {
    pub fn is_complete(&self) -> bool {
        self.erased.is_empty()
    }
}

fn erased_flags(n: usize, erased: &[usize]) -> Result<Vec<bool>> {
    let mut flag = vec![false; n];
    for &v in erased {
        if v >= n {
            return Err(Error::InvalidParameter(format!("vertex {v} outside 0..{n}")));
        }
        flag[v] = true;
    }
    Ok(flag)
}

/// Iteratively recovers erased vertices with at most `t` erased neighbours.
pub fn peel(code: &EdgeVertexCode, erased: &[usize]) -> Result<PeelingState> {
    let g = &code.graph;
    let mut is_erased = erased_flags(g.n(), erased)?;
    let mut count = vec![0usize; g.n()];
    let mut queued = vec![false; g.n()];
    let mut queue = VecDeque::new();
    for v in 0..g.n() {
        if is_erased[v] {
            count[v] = g.neighbors(v).iter().filter(|&&u| is_erased[u]).count();
            if count[v] <= code.t {
                queued[v] = true;
                queue.push_back((v, 1));
            }
        }
    }
    let mut order = Vec::new();
    while let Some((v, step)) = queue.pop_front() {
        is_erased[v] = false;
        order.push((v, step));
        for &u in g.neighbors(v) {
            if is_erased[u] {
                count[u] -= 1;
                if count[u] <= code.t && !queued[u] {
                    queued[u] = true;
                    queue.push_back((u, step + 1));
                }
            }
        }
    }
    let remaining: Vec<usize> = (0..g.n()).filter(|&v| is_erased[v]).collect();
    Ok(PeelingState {
        stuck: !remaining.is_empty(),
        erased: remaining,
        recovered_order: order,
    })
}

/// [`peel`] with the next recoverable vertex drawn uniformly at random;
/// `step` is then the position in the order.
pub fn peel_shuffled<R: Rng>(code: &EdgeVertexCode, erased: &[usize], rng: &mut R) -> Result<PeelingState> {
    let g = &code.graph;
    let mut is_erased = erased_flags(g.n(), erased)?;
    let mut count = vec![0usize; g.n()];
    let mut ready = Vec::new();
    let mut in_ready = vec![false; g.n()];
    for v in 0..g.n() {
        if is_erased[v] {
            count[v] = g.neighbors(v).iter().filter(|&&u| is_erased[u]).count();
            if count[v] <= code.t {
                in_ready[v] = true;
                ready.push(v);
            }
        }
    }
    let mut order = Vec::new();
    while !ready.is_empty() {
        let v = ready.swap_remove(rng.random_range(0..ready.len()));
        is_erased[v] = false;
        order.push((v, order.len() + 1));
        for &u in g.neighbors(v) {
            if is_erased[u] {
                count[u] -= 1;
                if count[u] <= code.t && !in_ready[u] {
                    in_ready[u] = true;
                    ready.push(u);
                }
            }
        }
    }
    let remaining: Vec<usize> = (0..g.n()).filter(|&v| is_erased[v]).collect();
    Ok(PeelingState {
        stuck: !remaining.is_empty(),
        erased: remaining,
        recovered_order: order,
    })
}

/// `t/d − λ/d`; at most this fraction of erased vertices always peels.
pub fn mixing_threshold(code: &EdgeVertexCode, lambda: Ratio<i64>) -> Ratio<i64> {
    (Ratio::from_integer(code.t as i64) - lambda) / code.d as i64
}

/// Second eigenvalue of an explicit regular graph: `max(|λ₂|, |λ_N|)` from
/// a dense symmetric eigensolver, plus a rational upper bound on a 1/1000
/// grid (values within 1e-9 of a grid point snap to it).
pub fn explicit_lambda(g: &ExplicitGraph) -> Result<(f64, Ratio<i64>)> {
    let n = g.n();
    if n > MAX_DENSE_LAMBDA_VERTICES {
        return Err(Error::Capacity {
            what: "dense eigendecomposition".into(),
            requested: n as u64,
            budget: MAX_DENSE_LAMBDA_VERTICES as u64,
        });
    }
    if n < 2 {
        return Ok((0.0, Ratio::from_integer(0)));
    }
    let _admission = MemoryGate::global().admit("dense eigensolver", (3 * n * n * 8) as u64)?;
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    for &(u, v) in g.edges() {
        m[(u, v)] = 1.0;
        m[(v, u)] = 1.0;
    }
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    let lambda = ev[1].abs().max(ev[n - 1].abs());
    let grid = ((lambda - 1e-9) * 1000.0).ceil().max(0.0) as i64;
    Ok((lambda, Ratio::new(grid, 1000)))
}

/// Renders a rational as `a/b`, or `a` when integral.
pub fn ratio_string(r: &Ratio<i64>) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
