use std::collections::HashSet;

use super::{CosetGraphHandle, GeneratorSet};
use crate::error::Result;
use crate::gf2::MemoryGate;

/// In-place unnormalised Walsh–Hadamard transform; `v.len()` must be a power
/// of two. Afterwards `v[x] = Σ_y (−1)^{⟨x,y⟩} v_in[y]`.
pub fn walsh_hadamard(v: &mut [i64]) {
    let n = v.len();
    assert!(n.is_power_of_two() || n == 0, "length {n} is not a power of two");
    let mut h = 1;
    while h < n {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Eigenvalue at character `x` for every `x`, indexed by `x`.
fn eigenvalues(r: usize, effective: &[u64]) -> Result<Vec<i64>> {
    let n = 1usize << r;
    let _admission = MemoryGate::global().admit("spectrum", (n * 8) as u64)?;
    let mut v = vec![0i64; n];
    for &s in effective {
        v[s as usize] += 1;
    }
    walsh_hadamard(&mut v);
    Ok(v)
}

/// All `N` eigenvalues of the operator of the effective set (a loop adds
/// `+1` to each), sorted in descending order.
pub fn spectrum(g: &CosetGraphHandle) -> Result<Vec<i64>> {
    let mut ev = eigenvalues(g.r(), &g.generators().effective())?;
    ev.sort_unstable_by(|a, b| b.cmp(a));
    Ok(ev)
}

/// `max(|λ₂|, |λ_N|)` of the loopless adjacency matrix: the largest
/// absolute eigenvalue over the nontrivial characters `x ≠ 0`.
pub fn second_eigenvalue(g: &CosetGraphHandle) -> Result<u64> {
    let ev = eigenvalues(g.r(), &g.generators().effective_nonzero())?;
    Ok(ev.iter().skip(1).map(|v| v.unsigned_abs()).max().unwrap_or(0))
}

/// No three nonzero effective generators with `s₁ + s₂ = s₃`.
pub fn triangle_free(gens: &GeneratorSet) -> Result<bool> {
    let nz = gens.effective_nonzero();
    if nz.len() <= 4096 {
        let set: HashSet<u64> = nz.iter().copied().collect();
        for (i, &a) in nz.iter().enumerate() {
            for &b in &nz[i + 1..] {
                if set.contains(&(a ^ b)) {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
    // Closed 3-walks through 0 number N⁻¹ Σ_x λ(x)³.
    let ev = eigenvalues(gens.r(), &nz)?;
    let cubes: i128 = ev.iter().map(|&l| (l as i128).pow(3)).sum();
    Ok(cubes == 0)
}

/// Largest `2^{|B|}` over coordinate subsets `B` such that an odd number of
/// effective generators have support inside `B`; 0 if there is none.
pub fn rank_lower_bound(g: &CosetGraphHandle) -> Result<u64> {
    let r = g.r();
    let n = 1usize << r;
    let _admission = MemoryGate::global().admit("parity table", n as u64)?;
    let mut parity = vec![0u8; n];
    for s in g.generators().effective() {
        parity[s as usize] ^= 1;
    }
    // Subset-sum (zeta) transform: parity[B] becomes the parity of the
    // number of generators supported inside B.
    for bit in 0..r {
        let step = 1usize << bit;
        for mask in 0..n {
            if mask & step != 0 {
                parity[mask] ^= parity[mask ^ step];
            }
        }
    }
    Ok(parity
        .iter()
        .enumerate()
        .filter(|(_, &p)| p == 1)
        .map(|(mask, _)| 1u64 << mask.count_ones())
        .max()
        .unwrap_or(0))
}
