use num_rational::Ratio;
use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mixing_threshold, peel, percolation::trial_rng, ratio_string, EdgeVertexCode};
use crate::error::Result;

/// Graphs up to this size are also checked over every small erased set.
pub const EXHAUSTIVE_MAX_VERTICES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixingVerdict {
    pub n: usize,
    pub d: usize,
    pub t: usize,
    pub lambda: String,
    pub threshold: String,
    /// `false` when the threshold is not positive; nothing is then checked.
    pub guaranteed: bool,
    /// `⌊threshold · N⌋`.
    pub erased_size: usize,
    pub seed: u64,
    pub trials: usize,
    pub sampled_failures: usize,
    pub exhaustive: bool,
    /// Number of erased sets of size `≤ erased_size` checked exhaustively.
    pub exhaustive_sets: u64,
    pub exhaustive_failures: u64,
    pub counterexample: Option<Vec<usize>>,
}

impl MixingVerdict {
    pub fn holds(&self) -> bool {
        self.sampled_failures == 0 && self.exhaustive_failures == 0
    }
}

/// Checks that every erased set below the mixing threshold peels: `trials`
/// random sets of size `⌊σN⌋`, plus all sets of at most that size when
/// `N ≤ EXHAUSTIVE_MAX_VERTICES`.
pub fn verify_mixing_guarantee(
    code: &EdgeVertexCode,
    lambda: Ratio<i64>,
    trials: usize,
    seed: u64,
) -> Result<MixingVerdict> {
    let n = code.n();
    let threshold = mixing_threshold(code, lambda);
    let guaranteed = threshold > Ratio::from_integer(0);
    let erased_size = if guaranteed {
        (threshold * n as i64).floor().to_integer() as usize
    } else {
        0
    };
    let mut verdict = MixingVerdict {
        n,
        d: code.d(),
        t: code.t(),
        lambda: ratio_string(&lambda),
        threshold: ratio_string(&threshold),
        guaranteed,
        erased_size,
        seed,
        trials: 0,
        sampled_failures: 0,
        exhaustive: false,
        exhaustive_sets: 0,
        exhaustive_failures: 0,
        counterexample: None,
    };
    if !guaranteed {
        return Ok(verdict);
    }

    let outcomes: Vec<Option<Vec<usize>>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, 0, i);
            let mut erased = sample(&mut rng, n, erased_size).into_vec();
            erased.sort_unstable();
            peel(code, &erased).map(|s| (!s.is_complete()).then_some(erased))
        })
        .collect::<Result<_>>()?;
    verdict.trials = trials;
    verdict.sampled_failures = outcomes.iter().filter(|o| o.is_some()).count();
    verdict.counterexample = outcomes.into_iter().flatten().next();

    if n <= EXHAUSTIVE_MAX_VERTICES {
        verdict.exhaustive = true;
        let failures: Vec<u32> = (0u32..1 << n)
            .into_par_iter()
            .filter(|m| m.count_ones() as usize <= erased_size)
            .filter(|&m| {
                let erased: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
                !peel(code, &erased).expect("vertices in range").is_complete()
            })
            .collect();
        verdict.exhaustive_sets = (0..=erased_size.min(n)).map(|k| binomial(n, k)).sum();
        verdict.exhaustive_failures = failures.len() as u64;
        if verdict.counterexample.is_none() {
            verdict.counterexample = failures
                .first()
                .map(|&m| (0..n).filter(|&v| m >> v & 1 == 1).collect());
        }
    }
    Ok(verdict)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_code, CodeFamilyId};
    use crate::cosetgraph::{second_eigenvalue, CosetGraphHandle};
    use crate::erasuresim::{explicit_lambda, LocalMode};
    use crate::graphbounds::{expand, ExplicitGraph};

    fn cayley(id: CodeFamilyId) -> (ExplicitGraph, Ratio<i64>) {
        let h = CosetGraphHandle::from_code(&build_code(&id).unwrap()).unwrap();
        (expand(&h).unwrap(), Ratio::from_integer(second_eigenvalue(&h).unwrap() as i64))
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 3), 560);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(20, 10), 184_756);
    }

    #[test]
    fn clebsch_below_threshold_always_peels() {
        let (g, lambda) = cayley(CodeFamilyId::Repetition(5));
        let code = EdgeVertexCode::new(g, 4, LocalMode::Combinatorial).unwrap();
        let v = verify_mixing_guarantee(&code, lambda, 200, 0).unwrap();
        assert_eq!(v.threshold, "1/5");
        assert_eq!(v.erased_size, 3);
        assert!(v.exhaustive);
        assert_eq!(v.exhaustive_sets, 1 + 16 + 120 + 560);
        assert!(v.holds(), "{v:?}");
    }

    #[test]
    fn complete_graphs_with_t_one_below_degree() {
        for n in 5..=9 {
            let g = ExplicitGraph::complete(n).unwrap();
            let (_, lambda) = explicit_lambda(&g).unwrap();
            assert_eq!(lambda, Ratio::from_integer(1));
            let code = EdgeVertexCode::new(g, n - 2, LocalMode::Combinatorial).unwrap();
            let v = verify_mixing_guarantee(&code, lambda, 100, 1).unwrap();
            assert_eq!(v.threshold, ratio_string(&Ratio::new(n as i64 - 3, n as i64 - 1)));
            assert!(v.guaranteed && v.exhaustive && v.holds(), "{v:?}");
        }
    }

    #[test]
    fn nonpositive_threshold_checks_nothing() {
        let code = EdgeVertexCode::new(ExplicitGraph::cycle(8).unwrap(), 0, LocalMode::Combinatorial).unwrap();
        let v = verify_mixing_guarantee(&code, Ratio::from_integer(2), 50, 0).unwrap();
        assert!(!v.guaranteed && v.trials == 0 && !v.exhaustive);
        assert_eq!(v.threshold, "-1");
    }

    #[test]
    fn wrong_lambda_is_caught() {
        // A bogus λ = −1 on the 4-cycle with t = 1 claims every erased set
        // peels; the fully erased cycle does not.
        let code = EdgeVertexCode::new(ExplicitGraph::cycle(4).unwrap(), 1, LocalMode::Combinatorial).unwrap();
        let v = verify_mixing_guarantee(&code, Ratio::new(-1, 1), 20, 0).unwrap();
        assert_eq!(v.erased_size, 4);
        assert!(!v.holds());
        assert_eq!(v.counterexample, Some(vec![0, 1, 2, 3]));
    }
}
