use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::CosetGraphHandle;
use crate::error::{Error, Result};
use crate::gf2::RankOptions;

/// Random off-diagonal row pairs checked for orthogonality.
const SAMPLED_PAIRS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssDimension {
    pub n_vertices: u64,
    pub rank: u64,
    pub k_quantum: u64,
}

/// `N − 2·rank(A)` for the operator of the handle as given (loop included
/// only if the handle has one). The effective set must have even size, which
/// makes `A·Aᵀ = 0`; that is spot-checked before reporting.
pub fn css_dimension(g: &CosetGraphHandle) -> Result<CssDimension> {
    let eff = g.generators().effective();
    if eff.len() % 2 == 1 {
        return Err(Error::NotSelfOrthogonal(format!(
            "effective generator set has odd size {}",
            eff.len()
        )));
    }
    let n = g.n_vertices() as u64;
    // Diagonal entries are |S_eff| mod 2 for every row; check each row anyway.
    for x in 0..n {
        if g.adjacency_row(x).weight() % 2 == 1 {
            return Err(Error::NotSelfOrthogonal(format!("row {x} has odd weight")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..SAMPLED_PAIRS {
        let (x, y) = (rng.random_range(0..n), rng.random_range(0..n));
        if g.adjacency_row(x).dot(&g.adjacency_row(y)) {
            return Err(Error::NotSelfOrthogonal(format!("rows {x} and {y} are not orthogonal")));
        }
    }
    let rank = g.operator_rank(&RankOptions::with_method(g.default_elimination()))? as u64;
    Ok(CssDimension {
        n_vertices: n,
        rank,
        k_quantum: n - 2 * rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_code, CodeFamilyId};

    fn even_repetition(m: usize) -> CosetGraphHandle {
        let code = build_code(&CodeFamilyId::Repetition(m)).unwrap();
        CosetGraphHandle::from_code(&code).unwrap().with_zero(false)
    }

    #[test]
    fn even_repetition_dimensions() {
        for (m, k) in [(4, 4), (6, 8), (8, 16)] {
            let d = css_dimension(&even_repetition(m)).unwrap();
            assert_eq!(d.n_vertices, 1 << (m - 1));
            assert_eq!(d.k_quantum, k, "m = {m}");
        }
    }

    #[test]
    fn odd_effective_size_is_rejected() {
        let code = build_code(&CodeFamilyId::Repetition(5)).unwrap();
        let g = CosetGraphHandle::from_code(&code).unwrap().with_zero(false);
        assert!(matches!(css_dimension(&g), Err(Error::NotSelfOrthogonal(_))));
    }

    #[test]
    fn full_product_vanishes_for_even_sets() {
        let g = even_repetition(6);
        let a = g.operator_matrix().unwrap();
        assert!(a.mul(&a.transpose()).unwrap().is_zero());
    }
}
