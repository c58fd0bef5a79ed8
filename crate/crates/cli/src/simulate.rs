use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use cstore::codes::{build_code, CodeFamilyId};
use cstore::cosetgraph::{second_eigenvalue, CosetGraphHandle};
use cstore::erasuresim::{
    estimate_pc, explicit_lambda, mixing_threshold, ratio_string, verify_mixing_guarantee, EdgeVertexCode, LocalMode,
    MixingVerdict, PcEstimate,
};
use cstore::graphbounds::{expand, read_edge_list, ExplicitGraph};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::output::{self, Format};
use crate::{Failure, Settings};

/// Smallest per-point trial count accepted for threshold estimation.
pub const MIN_PC_TRIALS: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSource {
    /// Coset graph of a code family (or `file:PATH` parity-check matrix).
    Cayley(CodeFamilyId),
    /// Edge-list file.
    Edges(PathBuf),
    Torus(usize, usize),
    Cycle(usize),
    Complete(usize),
}

impl FromStr for GraphSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| format!("graph source {s:?} needs KIND:PARAM"))?;
        let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
        match kind {
            "cayley" => rest.parse().map(GraphSource::Cayley).map_err(|e: cstore::Error| e.to_string()),
            "edges" => Ok(GraphSource::Edges(PathBuf::from(rest))),
            "torus" => {
                let (w, h) = rest.split_once('x').ok_or_else(|| format!("torus needs WxH, got {rest:?}"))?;
                Ok(GraphSource::Torus(num(w)?, num(h)?))
            }
            "cycle" => Ok(GraphSource::Cycle(num(rest)?)),
            "complete" => Ok(GraphSource::Complete(num(rest)?)),
            other => Err(format!("unknown graph source {other:?}; use cayley, edges, torus, cycle or complete")),
        }
    }
}

impl std::fmt::Display for GraphSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphSource::Cayley(id) => write!(f, "cayley:{id}"),
            GraphSource::Edges(p) => write!(f, "edges:{}", p.display()),
            GraphSource::Torus(w, h) => write!(f, "torus:{w}x{h}"),
            GraphSource::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSource::Complete(n) => write!(f, "complete:{n}"),
        }
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// `cayley:FAMILY`, `edges:PATH`, `torus:WxH`, `cycle:N` or `complete:N`.
    #[arg(long)]
    pub graph: GraphSource,
    /// Erasures corrected by the local code at each vertex.
    #[arg(long)]
    pub t: usize,
    /// Random erased sets checked against the mixing threshold; 0 reports
    /// the threshold only.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Also estimate the percolation threshold with this many trials per point.
    #[arg(long)]
    pub pc_trials: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub graph: String,
    pub n: usize,
    pub d: usize,
    pub t: usize,
    /// Exact for Cayley sources; a rational upper bound otherwise.
    pub lambda: String,
    pub lambda_method: String,
    pub lambda_float: f64,
    pub threshold: String,
    pub guaranteed: bool,
    pub seed: u64,
    pub mixing: Option<MixingVerdict>,
    pub pc: Option<PcEstimate>,
}

fn build(src: &GraphSource) -> Result<(ExplicitGraph, Ratio<i64>, f64, &'static str), Failure> {
    match src {
        GraphSource::Cayley(id) => {
            let h = CosetGraphHandle::from_code(&build_code(id)?)?;
            let lambda = second_eigenvalue(&h)? as i64;
            Ok((expand(&h)?, Ratio::from_integer(lambda), lambda as f64, "walsh-hadamard"))
        }
        other => {
            let g = match other {
                GraphSource::Edges(p) => read_edge_list(p)?,
                GraphSource::Torus(w, h) => ExplicitGraph::torus(*w, *h)?,
                GraphSource::Cycle(n) => ExplicitGraph::cycle(*n)?,
                GraphSource::Complete(n) => ExplicitGraph::complete(*n)?,
                GraphSource::Cayley(_) => unreachable!(),
            };
            if g.regular_degree().is_none() {
                return Err(Failure::Input(format!("{src}: graph is not regular")));
            }
            let (raw, bound) = explicit_lambda(&g)?;
            Ok((g, bound, raw, "dense-eigensolver"))
        }
    }
}

pub(crate) fn run(args: &SimulateArgs, s: &Settings, out: &mut dyn Write) -> Result<(), Failure> {
    if let Some(k) = args.pc_trials {
        if k < MIN_PC_TRIALS {
            return Err(Failure::Input(format!("--pc-trials must be at least {MIN_PC_TRIALS}, got {k}")));
        }
    }
    let (graph, lambda, lambda_float, method) = build(&args.graph)?;
    let code = EdgeVertexCode::new(graph, args.t, LocalMode::Combinatorial)?;
    let threshold = mixing_threshold(&code, lambda);
    let mixing = if args.trials > 0 {
        Some(verify_mixing_guarantee(&code, lambda, args.trials, s.seed)?)
    } else {
        None
    };
    let pc = match args.pc_trials {
        Some(k) => Some(estimate_pc(&code, k, s.seed)?),
        None => None,
    };
    let rep = SimulationReport {
        graph: args.graph.to_string(),
        n: code.n(),
        d: code.d(),
        t: code.t(),
        lambda: ratio_string(&lambda),
        lambda_method: method.into(),
        lambda_float,
        threshold: ratio_string(&threshold),
        guaranteed: threshold > Ratio::from_integer(0),
        seed: s.seed,
        mixing,
        pc,
    };
    emit(&rep, s.format, out)?;
    match &rep.mixing {
        Some(m) if !m.holds() => Err(Failure::Mismatch(format!(
            "{} erased sets below the threshold did not peel; counterexample {:?}",
            m.sampled_failures as u64 + m.exhaustive_failures,
            m.counterexample
        ))),
        _ => Ok(()),
    }
}

fn to_text(r: &SimulationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph: {}", r.graph);
    let _ = writeln!(s, "N: {}", r.n);
    let _ = writeln!(s, "d: {}", r.d);
    let _ = writeln!(s, "t: {}", r.t);
    let _ = writeln!(s, "lambda: {} ({}, {:.6})", r.lambda, r.lambda_method, r.lambda_float);
    let _ = writeln!(s, "threshold: {}", r.threshold);
    if !r.guaranteed {
        let _ = writeln!(s, "guarantee: none (threshold is not positive)");
    }
    let _ = writeln!(s, "seed: {}", r.seed);
    if let Some(m) = r.mixing.as_ref().filter(|m| m.guaranteed) {
        let _ = writeln!(s, "erased_size: {}", m.erased_size);
        let _ = writeln!(s, "sampled: {} sets, {} failures", m.trials, m.sampled_failures);
        if m.exhaustive {
            let _ = writeln!(s, "exhaustive: {} sets, {} failures", m.exhaustive_sets, m.exhaustive_failures);
        }
        if let Some(c) = &m.counterexample {
            let _ = writeln!(s, "counterexample: {c:?}");
        }
    }
    if let Some(pc) = &r.pc {
        let _ = writeln!(s, "p_c_bracket: [{}, {}]", pc.lo, pc.hi);
        let _ = writeln!(s, "p_c_estimate: {} (finite-size, {} trials/point)", pc.estimate, pc.trials_per_point);
        if pc.degenerate {
            let _ = writeln!(s, "p_c_degenerate: success never crosses 1/2 on [0, 1]");
        }
        for p in &pc.curve {
            let _ = writeln!(
                s,
                "  p = {:<10} success {:>5}/{:<5} wilson [{:.4}, {:.4}]",
                p.p, p.successes, p.trials, p.wilson_lo, p.wilson_hi
            );
        }
    }
    s
}

#[derive(Serialize)]
struct CurveRow<'a> {
    graph: &'a str,
    seed: u64,
    p: f64,
    trials: usize,
    successes: usize,
    wilson_lo: f64,
    wilson_hi: f64,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    graph: &'a str,
    n: usize,
    d: usize,
    t: usize,
    lambda: &'a str,
    threshold: &'a str,
    guaranteed: bool,
    erased_size: Option<usize>,
    trials: Option<usize>,
    failures: Option<u64>,
    seed: u64,
}

fn emit(r: &SimulationReport, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Text => output::text(&to_text(r), out),
        Format::Json => output::json(r, out),
        Format::Csv => match &r.pc {
            Some(pc) => {
                let rows: Vec<CurveRow> = pc
                    .curve
                    .iter()
                    .map(|p| CurveRow {
                        graph: &r.graph,
                        seed: r.seed,
                        p: p.p,
                        trials: p.trials,
                        successes: p.successes,
                        wilson_lo: p.wilson_lo,
                        wilson_hi: p.wilson_hi,
                    })
                    .collect();
                output::csv(&rows, out)
            }
            None => output::csv(
                &[SummaryRow {
                    graph: &r.graph,
                    n: r.n,
                    d: r.d,
                    t: r.t,
                    lambda: &r.lambda,
                    threshold: &r.threshold,
                    guaranteed: r.guaranteed,
                    erased_size: r.mixing.as_ref().map(|m| m.erased_size),
                    trials: r.mixing.as_ref().map(|m| m.trials),
                    failures: r.mixing.as_ref().map(|m| m.sampled_failures as u64 + m.exhaustive_failures),
                    seed: r.seed,
                }],
                out,
            ),
        },
    }
}
