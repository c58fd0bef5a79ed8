use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use cstore::codes::build_code;
use cstore::cosetgraph::{
    rank_lower_bound, second_eigenvalue, spectrum as eigenvalues, storage_report_with, CosetGraphHandle, ReportOptions,
    StorageReport,
};
use cstore::graphbounds::{expand, max_independent_set, max_matching, vc_bounds, VcVerdict};
use serde::{Deserialize, Serialize};

use crate::output::{self, Format, Progress};
use crate::{CodeSource, Failure, Settings};

/// Largest graph on which `check` runs the independent-set and matching bounds.
pub const VC_MAX_VERTICES: usize = 256;
/// Search-node budget for the independent-set bound inside `check`.
pub const VC_NODE_BUDGET: u64 = 5_000_000;

fn handle(src: &CodeSource) -> Result<CosetGraphHandle, Failure> {
    let code = build_code(&src.family_id())?;
    Ok(CosetGraphHandle::from_code(&code)?)
}

pub(crate) fn report(g: &CosetGraphHandle, k_max: usize, s: &Settings) -> Result<StorageReport, Failure> {
    let progress = Progress::new(g.label());
    let tick = |p| progress.tick(p);
    let opts = ReportOptions {
        method: s.method,
        progress: Some(&tick),
        k_max,
    };
    Ok(storage_report_with(g, &opts)?)
}

#[derive(Serialize)]
struct RateRow<'a> {
    label: &'a str,
    r: usize,
    n_vertices: u64,
    rank: u64,
    k: u64,
    rate: String,
    rate_reduced: String,
    triangle_free: bool,
    elimination: &'a str,
    elapsed_seconds: f64,
}

fn rate_row(r: &StorageReport) -> RateRow<'_> {
    RateRow {
        label: &r.label,
        r: r.r,
        n_vertices: r.n_vertices,
        rank: r.rank_tilde,
        k: r.k,
        rate: r.rate.to_string(),
        rate_reduced: r.rate.reduced_string(),
        triangle_free: r.triangle_free,
        elimination: &r.elimination,
        elapsed_seconds: r.elapsed_seconds,
    }
}

pub(crate) fn rate(src: &CodeSource, s: &Settings, out: &mut dyn Write) -> Result<(), Failure> {
    let g = handle(src)?;
    let mut r = report(&g, 0, s)?;
    r.conditions = None;
    match s.format {
        Format::Text => output::text(&r.to_text(), out),
        Format::Json => output::json(&r, out),
        Format::Csv => output::csv(&[rate_row(&r)], out),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub report: StorageReport,
    pub rank_lower_bound: u64,
    pub lower_bound_holds: bool,
    /// Matching and independent-set bounds; absent above the size limit.
    pub vc: Option<VcVerdict>,
    pub consistent: bool,
}

impl CheckReport {
    fn to_text(&self) -> String {
        let mut s = self.report.to_text();
        let _ = writeln!(s, "rank_lower_bound: {}", self.rank_lower_bound);
        let _ = writeln!(s, "lower_bound_holds: {}", self.lower_bound_holds);
        match &self.vc {
            Some(v) => {
                let _ = writeln!(s, "matching: {}", v.matching);
                let _ = writeln!(s, "alpha: {}{}", v.alpha, if v.alpha_exact { "" } else { " (lower bound)" });
                let _ = writeln!(s, "vc_sandwich: {} <= {} <= {}: {}", v.lower, v.rate, v.upper, v.pass);
            }
            None => {
                let _ = writeln!(s, "vc_sandwich: skipped (N > {VC_MAX_VERTICES})");
            }
        }
        let _ = writeln!(s, "consistent: {}", self.consistent);
        s
    }
}

#[derive(Serialize)]
struct CheckRow<'a> {
    label: &'a str,
    n_vertices: u64,
    k: u64,
    rate: String,
    triangle_free: bool,
    odd_length_even_rows: &'a str,
    dual_power_containment: String,
    rank_lower_bound: u64,
    matching: Option<u64>,
    alpha: Option<u64>,
    vc_pass: Option<bool>,
    consistent: bool,
}

pub(crate) fn check(src: &CodeSource, k_max: usize, s: &Settings, out: &mut dyn Write) -> Result<(), Failure> {
    let g = handle(src)?;
    let report = report(&g, k_max, s)?;
    let lower = rank_lower_bound(&g)?;
    let vc = if g.n_vertices() <= VC_MAX_VERTICES {
        let explicit = expand(&g)?;
        let alpha = max_independent_set(&explicit, VC_NODE_BUDGET);
        Some(vc_bounds(&explicit, &report, &alpha, max_matching(&explicit))?)
    } else {
        None
    };
    let lower_bound_holds = lower <= report.rank_tilde;
    let conditions_ok = !report.conditions.as_ref().is_some_and(|c| c.any_fail());
    let consistent = conditions_ok && lower_bound_holds && vc.as_ref().is_none_or(|v| v.pass);
    let c = CheckReport {
        report,
        rank_lower_bound: lower,
        lower_bound_holds,
        vc,
        consistent,
    };
    match s.format {
        Format::Text => output::text(&c.to_text(), out)?,
        Format::Json => output::json(&c, out)?,
        Format::Csv => {
            let cond = c.report.conditions.as_ref();
            let row = CheckRow {
                label: &c.report.label,
                n_vertices: c.report.n_vertices,
                k: c.report.k,
                rate: c.report.rate.to_string(),
                triangle_free: c.report.triangle_free,
                odd_length_even_rows: cond.map_or("not-applicable", |c| c.odd_length_even_rows.as_str()),
                dual_power_containment: cond
                    .map(|c| {
                        c.dual_power_containment
                            .iter()
                            .map(|kv| format!("k{}={}", kv.k, kv.verdict.as_str()))
                            .collect::<Vec<_>>()
                            .join(";")
                    })
                    .unwrap_or_default(),
                rank_lower_bound: c.rank_lower_bound,
                matching: c.vc.as_ref().map(|v| v.matching),
                alpha: c.vc.as_ref().map(|v| v.alpha),
                vc_pass: c.vc.as_ref().map(|v| v.pass),
                consistent: c.consistent,
            };
            output::csv(&[row], out)?
        }
    }
    if c.consistent {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{} violates a necessary condition or bound", c.report.label)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenCount {
    pub eigenvalue: i64,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub label: String,
    pub r: usize,
    pub n_vertices: u64,
    pub degree: u64,
    /// Largest absolute eigenvalue other than the degree eigenvalue.
    pub lambda: u64,
    pub bipartite: bool,
    pub histogram: Option<Vec<EigenCount>>,
}

pub(crate) fn spectrum(src: &CodeSource, histogram: bool, s: &Settings, out: &mut dyn Write) -> Result<(), Failure> {
    let g = handle(src)?.with_zero(false);
    let ev = eigenvalues(&g)?;
    let degree = g.degree() as u64;
    let mut counts = BTreeMap::new();
    for &e in &ev {
        *counts.entry(e).or_insert(0u64) += 1;
    }
    let rep = SpectrumReport {
        label: g.label(),
        r: g.r(),
        n_vertices: g.n_vertices() as u64,
        degree,
        lambda: second_eigenvalue(&g)?,
        bipartite: counts.contains_key(&-(degree as i64)),
        histogram: histogram.then(|| {
            counts
                .iter()
                .rev()
                .map(|(&eigenvalue, &multiplicity)| EigenCount {
                    eigenvalue,
                    multiplicity,
                })
                .collect()
        }),
    };
    match s.format {
        Format::Text => {
            let mut t = String::new();
            let _ = writeln!(t, "label: {}", rep.label);
            let _ = writeln!(t, "N: {}", rep.n_vertices);
            let _ = writeln!(t, "degree: {}", rep.degree);
            let _ = writeln!(t, "lambda: {}", rep.lambda);
            let _ = writeln!(t, "bipartite: {}", rep.bipartite);
            for e in rep.histogram.iter().flatten() {
                let _ = writeln!(t, "eigenvalue {:>6}  multiplicity {}", e.eigenvalue, e.multiplicity);
            }
            output::text(&t, out)
        }
        Format::Json => output::json(&rep, out),
        Format::Csv => match &rep.histogram {
            Some(h) => output::csv(h, out),
            None => {
                #[derive(Serialize)]
                struct Row<'a> {
                    label: &'a str,
                    n_vertices: u64,
                    degree: u64,
                    lambda: u64,
                    bipartite: bool,
                }
                output::csv(
                    &[Row {
                        label: &rep.label,
                        n_vertices: rep.n_vertices,
                        degree: rep.degree,
                        lambda: rep.lambda,
                        bipartite: rep.bipartite,
                    }],
                    out,
                )
            }
        },
    }
}
