use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Instant;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{triangle_free, CosetGraphHandle};
use crate::codes::{build_code, contains_dual_power, distance_at_least_4, BinaryCode, CodeFamilyId};
use crate::error::{Error, Result};
use crate::gf2::{Elimination, RankOptions, RankProgress};
use crate::rate::Rate;

/// Default largest `k` for the Schur-power conditions.
pub const DEFAULT_K_MAX: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        }
    }

    pub fn is_fail(&self) -> bool {
        *self == Verdict::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KVerdict {
    pub k: usize,
    pub verdict: Verdict,
}

/// Necessary conditions for a storage rate above `1/2` and above
/// `(2^k − 1)/2^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRecord {
    /// Rate > 1/2 requires odd length and even-weight parity rows.
    pub odd_length_even_rows: Verdict,
    /// Rate > (2^k − 1)/2^k requires `(C^⊥)^{∗(k−1)} ⊂ C`.
    pub dual_power_containment: Vec<KVerdict>,
}

impl ConditionRecord {
    pub fn any_fail(&self) -> bool {
        self.odd_length_even_rows.is_fail() || self.dual_power_containment.iter().any(|v| v.verdict.is_fail())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StorageReport {
    pub label: String,
    pub r: usize,
    pub n_vertices: u64,
    pub rank_tilde: u64,
    pub k: u64,
    pub rate: Rate,
    pub triangle_free: bool,
    pub conditions: Option<ConditionRecord>,
    pub elimination: String,
    pub elapsed_seconds: f64,
}

impl StorageReport {
    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "label: {}", self.label);
        let _ = writeln!(s, "r: {}", self.r);
        let _ = writeln!(s, "N: {}", self.n_vertices);
        let _ = writeln!(s, "rank: {}", self.rank_tilde);
        let _ = writeln!(s, "K: {}", self.k);
        let _ = writeln!(s, "rate: {}", self.rate);
        let _ = writeln!(s, "rate_reduced: {}", self.rate.reduced_string());
        let _ = writeln!(s, "triangle_free: {}", self.triangle_free);
        if let Some(c) = &self.conditions {
            let _ = writeln!(s, "odd_length_even_rows: {}", c.odd_length_even_rows.as_str());
            for kv in &c.dual_power_containment {
                let _ = writeln!(s, "dual_power_containment_k{}: {}", kv.k, kv.verdict.as_str());
            }
        }
        let _ = writeln!(s, "elimination: {}", self.elimination);
        let _ = writeln!(s, "elapsed_seconds: {:.3}", self.elapsed_seconds);
        s
    }
}

#[derive(Clone, Copy)]
pub struct ReportOptions<'a> {
    /// `None` picks [`CosetGraphHandle::default_elimination`].
    pub method: Option<Elimination>,
    pub progress: Option<&'a (dyn Fn(RankProgress) + Sync)>,
    pub k_max: usize,
}

impl Default for ReportOptions<'_> {
    fn default() -> Self {
        ReportOptions {
            method: None,
            progress: None,
            k_max: DEFAULT_K_MAX,
        }
    }
}

pub fn storage_report(g: &CosetGraphHandle) -> Result<StorageReport> {
    storage_report_with(g, &ReportOptions::default())
}

pub fn storage_report_with(g: &CosetGraphHandle, opts: &ReportOptions<'_>) -> Result<StorageReport> {
    let start = Instant::now();
    let method = opts.method.unwrap_or_else(|| g.default_elimination());
    let rank = g.operator_rank(&RankOptions {
        method,
        progress: opts.progress,
    })? as u64;
    let n = g.n_vertices() as u64;
    let rate = Rate::new(n - rank, n)?;
    let tri = match g.code() {
        Some(code) if columns_nonzero_distinct(code) => distance_at_least_4(code),
        _ => triangle_free(g.generators())?,
    };
    let mut report = StorageReport {
        label: g.label(),
        r: g.r(),
        n_vertices: n,
        rank_tilde: rank,
        k: n - rank,
        rate,
        triangle_free: tri,
        conditions: None,
        elimination: match method {
            Elimination::Plain => "plain".into(),
            Elimination::FourRussians { k } => format!("four-russians:{k}"),
        },
        elapsed_seconds: 0.0,
    };
    if let Some(code) = g.code() {
        report.conditions = Some(check_theorem_43(code, &report, opts.k_max)?);
    }
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// When columns are nonzero and pairwise distinct, `d(C) ≥ 4` is exactly
/// triangle-freeness of the coset graph.
fn columns_nonzero_distinct(code: &BinaryCode) -> bool {
    let cols = code.columns();
    let mut seen = HashSet::with_capacity(cols.len());
    cols.iter().all(|c| !c.is_zero() && seen.insert(c))
}

pub fn check_theorem_43(code: &BinaryCode, report: &StorageReport, k_max: usize) -> Result<ConditionRecord> {
    let rate = report.rate.as_ratio();
    let half = Ratio::new(1i128, 2);
    let odd_length_even_rows = if rate > half {
        let h = code.parity_check();
        let even_rows = (0..h.rows()).all(|i| h.row(i).weight() % 2 == 0);
        Verdict::from_bool(code.n() % 2 == 1 && even_rows)
    } else {
        Verdict::NotApplicable
    };
    let mut dual_power_containment = Vec::new();
    for k in 2..=k_max {
        let pow = 1i128 << k;
        let verdict = if rate > Ratio::new(pow - 1, pow) {
            Verdict::from_bool(contains_dual_power(code, k)?)
        } else {
            Verdict::NotApplicable
        };
        dual_power_containment.push(KVerdict { k, verdict });
    }
    Ok(ConditionRecord {
        odd_length_even_rows,
        dual_power_containment,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormCheck {
    pub family: String,
    pub n_vertices: u64,
    pub predicted_k: u64,
    pub computed_k: u64,
    pub matches: bool,
}

/// Predicted storage dimension for the families that have a closed form.
pub fn predicted_dimension(family: &CodeFamilyId) -> Result<(u64, u64)> {
    match *family {
        CodeFamilyId::Repetition(n) if n >= 5 && n % 2 == 1 => {
            Ok(((1u64 << (n - 2)) + (1u64 << ((n - 3) / 2)), 1u64 << (n - 1)))
        }
        // K/N = 3/4 − 2^{−r} with N = 2^{r+1}.
        CodeFamilyId::AugmentedHr(r) if r >= 4 => Ok((3 * (1u64 << (r - 1)) - 2, 1u64 << (r + 1))),
        _ => Err(Error::OutOfScope(format!("no closed form for {family}"))),
    }
}

pub fn closed_form_check(family: &CodeFamilyId) -> Result<ClosedFormCheck> {
    let (predicted_k, n) = predicted_dimension(family)?;
    let code = build_code(family)?;
    let report = storage_report(&CosetGraphHandle::from_code(&code)?)?;
    debug_assert_eq!(report.n_vertices, n);
    Ok(ClosedFormCheck {
        family: family.to_string(),
        n_vertices: report.n_vertices,
        predicted_k,
        computed_k: report.k,
        matches: predicted_k == report.k && n == report.n_vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosetgraph::GeneratorSet;
    use crate::gf2::Gf2Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn report(id: CodeFamilyId) -> StorageReport {
        storage_report(&CosetGraphHandle::from_code(&build_code(&id).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn clebsch_report() {
        let r = report(CodeFamilyId::Repetition(5));
        assert_eq!((r.n_vertices, r.rank_tilde, r.k), (16, 6, 10));
        assert_eq!(r.rate.reduced_string(), "5/8");
        assert!(r.triangle_free);
        let c = r.conditions.unwrap();
        assert_eq!(c.odd_length_even_rows, Verdict::Pass);
        assert!(c.dual_power_containment.iter().all(|v| v.verdict == Verdict::NotApplicable));
    }

    #[test]
    fn published_rates() {
        let golay = report(CodeFamilyId::Golay23);
        assert_eq!((golay.n_vertices, golay.k), (2048, 1312));
        assert_eq!(golay.rate.reduced_string(), "41/64");
        assert_eq!(report(CodeFamilyId::Bch2(4)).rate.reduced_string(), "39/64");
        assert_eq!(report(CodeFamilyId::Bch2(5)).rate.reduced_string(), "347/512");
        assert_eq!(report(CodeFamilyId::AugmentedHr(4)).rate.to_string(), "22/32");
    }

    #[test]
    fn closed_forms() {
        for id in [
            CodeFamilyId::Repetition(5),
            CodeFamilyId::Repetition(7),
            CodeFamilyId::AugmentedHr(4),
            CodeFamilyId::AugmentedHr(5),
        ] {
            let c = closed_form_check(&id).unwrap();
            assert!(c.matches, "{c:?}");
        }
        assert_eq!(closed_form_check(&CodeFamilyId::Repetition(5)).unwrap().predicted_k, 10);
        let r7 = closed_form_check(&CodeFamilyId::Repetition(7)).unwrap();
        assert_eq!((r7.predicted_k, r7.n_vertices), (36, 64));
        let h5 = closed_form_check(&CodeFamilyId::AugmentedHr(5)).unwrap();
        assert_eq!((h5.predicted_k, h5.n_vertices), (46, 64));
        assert!(closed_form_check(&CodeFamilyId::Golay23).is_err());
        assert!(closed_form_check(&CodeFamilyId::Repetition(6)).is_err());
    }

    #[test]
    fn low_rate_codes_have_no_applicable_conditions() {
        // Extended Hamming coset graph: K_{2^{m}, 2^{m}} plus loops.
        let r = report(CodeFamilyId::ExtendedHamming(3));
        assert!(r.rate.as_ratio() <= Ratio::new(1, 2));
        let c = r.conditions.unwrap();
        assert_eq!(c.odd_length_even_rows, Verdict::NotApplicable);
        assert!(c.dual_power_containment.iter().all(|v| v.verdict == Verdict::NotApplicable));
    }

    #[test]
    fn corrupted_report_triggers_violation() {
        // Even length violates the first condition once the rate is claimed
        // above 1/2.
        let code = build_code(&CodeFamilyId::Repetition(4)).unwrap();
        let mut r = report(CodeFamilyId::Repetition(4));
        r.rate = Rate::new(7, 8).unwrap();
        let c = check_theorem_43(&code, &r, 3).unwrap();
        assert_eq!(c.odd_length_even_rows, Verdict::Fail);
        assert!(c.any_fail());
    }

    #[test]
    fn rate_is_one_minus_rank_over_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let n = rng.random_range(2..12);
            let r = rng.random_range(1..=7);
            let h = Gf2Matrix::from_fn(r, n, |_, _| rng.random_bool(0.5));
            let code = BinaryCode::new(h, "random");
            let g = CosetGraphHandle::from_code(&code).unwrap();
            let rep = storage_report(&g).unwrap();
            let rank = g.operator_matrix().unwrap().rank().unwrap() as i128;
            let big_n = 1i128 << r;
            assert_eq!(rep.rate.as_ratio(), Ratio::new(big_n - rank, big_n));
            assert_eq!(rep.k + rep.rank_tilde, rep.n_vertices);
        }
    }

    #[test]
    fn raw_generator_reports_use_triangle_scan() {
        let g = CosetGraphHandle::from_generators(GeneratorSet::new(2, vec![1, 2, 3], true).unwrap());
        let r = storage_report(&g).unwrap();
        assert!(!r.triangle_free);
        assert_eq!(r.rank_tilde, 1);
        assert!(r.conditions.is_none());
    }

    #[test]
    fn accelerated_and_plain_agree_on_reports() {
        for id in [CodeFamilyId::Golay23, CodeFamilyId::Bch2(5), CodeFamilyId::AugmentedHr(6)] {
            let g = CosetGraphHandle::from_code(&build_code(&id).unwrap()).unwrap();
            let plain = storage_report_with(&g, &ReportOptions { method: Some(Elimination::Plain), ..Default::default() }).unwrap();
            let fast = storage_report_with(&g, &ReportOptions { method: Some(Elimination::four_russians()), ..Default::default() }).unwrap();
            assert_eq!(plain.rank_tilde, fast.rank_tilde, "{id}");
        }
    }

    #[test]
    fn text_and_json_rendering() {
        let r = report(CodeFamilyId::Repetition(5));
        let text = r.to_text();
        assert!(text.contains("rate: 10/16\n"));
        assert!(text.contains("rate_reduced: 5/8\n"));
        let json = serde_json::to_string(&r).unwrap();
        let back: StorageReport = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
