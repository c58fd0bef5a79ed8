use serde::{Deserialize, Serialize};

use super::{operator_from_effective, GeneratorSet};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};

/// Largest `r + 1` accepted by [`verify_lemma_53`].
pub const MAX_LIFTED_R: usize = 14;

/// Splitting `S̃ ⊂ F₂^{r+1}` by its last coordinate into `S₀` and `S₁`
/// (projected to `F₂^r`) gives `A = A₀ + A₁` and
/// `dim ker Ã = dim ker A + dim(ker A₁ ∩ ker A) + dim(Im A ∩ A₀(ker A))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma53 {
    pub r: usize,
    pub dim_ker_a: u64,
    pub dim_ker_a1_cap_ker_a: u64,
    pub dim_im_a_cap_a0_ker_a: u64,
    pub sum: u64,
    pub dim_ker_tilde: u64,
    pub holds: bool,
    /// `S₀` and `S₁` share an element, so the F₂ sum `A₀ + A₁` differs from
    /// the adjacency of the deduplicated union `S₀ ∪ S₁`.
    pub readings_differ: bool,
    /// `dim ker` of the adjacency of the deduplicated union.
    pub dim_ker_union: u64,
}

pub fn verify_lemma_53(stilde: &GeneratorSet) -> Result<Lemma53> {
    let lifted = stilde.r();
    if lifted == 0 || lifted > MAX_LIFTED_R {
        return Err(Error::InvalidParameter(format!(
            "lifted dimension r + 1 = {lifted} outside 1..={MAX_LIFTED_R}"
        )));
    }
    let r = lifted - 1;
    let n = 1u64 << r;
    let top = 1u64 << r;
    let eff = stilde.effective();
    let s0: Vec<u64> = eff.iter().copied().filter(|&s| s & top == 0).collect();
    let s1: Vec<u64> = eff.iter().filter(|&&s| s & top != 0).map(|&s| s ^ top).collect();
    let sum_set = symmetric_difference(&s0, &s1);
    let mut union: Vec<u64> = s0.iter().chain(&s1).copied().collect();
    union.sort_unstable();
    union.dedup();

    let a0 = operator_from_effective(r, &s0)?;
    let a1 = operator_from_effective(r, &s1)?;
    let a = operator_from_effective(r, &sum_set)?;

    let rank_a = a.rank()? as u64;
    let dim_ker_a = n - rank_a;
    let dim_ker_a1_cap_ker_a = n - a1.vstack(&a)?.rank()? as u64;

    let images: Vec<Gf2Vector> = a.kernel_basis()?.row_vectors().iter().map(|b| a0.mul_vec(b)).collect();
    let w = Gf2Matrix::from_rows(n as usize, &images)?;
    // A is symmetric, so its row space is its image.
    let rank_w = w.rank()? as u64;
    let dim_im_a_cap_a0_ker_a = rank_a + rank_w - a.vstack(&w)?.rank()? as u64;

    let dim_ker_tilde = 2 * n - operator_from_effective(lifted, &eff)?.rank()? as u64;
    let dim_ker_union = n - operator_from_effective(r, &union)?.rank()? as u64;
    let sum = dim_ker_a + dim_ker_a1_cap_ker_a + dim_im_a_cap_a0_ker_a;
    Ok(Lemma53 {
        r,
        dim_ker_a,
        dim_ker_a1_cap_ker_a,
        dim_im_a_cap_a0_ker_a,
        sum,
        dim_ker_tilde,
        holds: sum == dim_ker_tilde,
        readings_differ: union.len() != sum_set.len(),
        dim_ker_union,
    })
}

/// Both inputs sorted and duplicate-free.
fn symmetric_difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().filter(|x| b.binary_search(x).is_err()).copied().collect();
    out.extend(b.iter().filter(|x| a.binary_search(x).is_err()));
    out.sort_unstable();
    out
}
