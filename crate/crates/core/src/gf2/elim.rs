//! Gaussian elimination kernels.
//!
//! Two rank routines share one contract: the plain column-by-column path and
//! a "method of four Russians" path that clears `k` pivot columns at a time
//! through a table of all 2^k pivot-row combinations. Both choose pivots
//! deterministically (lowest row index first) and return identical ranks.

use rayon::prelude::*;

use super::matrix::Gf2Matrix;

/// Below this many words of elimination work per pivot, stay single-threaded.
const PAR_MIN_WORDS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Elimination {
    #[default]
    Plain,
    /// Table-driven elimination over `k`-column windows (1 ≤ k ≤ 16).
    FourRussians { k: u32 },
}

impl Elimination {
    pub const fn four_russians() -> Self {
        Elimination::FourRussians { k: 8 }
    }
}

/// Snapshot passed to progress callbacks.
#[derive(Clone, Copy, Debug)]
pub struct RankProgress {
    pub pivots: usize,
    pub column: usize,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Default, Clone, Copy)]
pub struct RankOptions<'a> {
    pub method: Elimination,
    /// Called periodically during elimination; must be cheap.
    pub progress: Option<&'a (dyn Fn(RankProgress) + Sync)>,
}

impl<'a> RankOptions<'a> {
    pub fn with_method(method: Elimination) -> Self {
        RankOptions {
            method,
            progress: None,
        }
    }
}

pub(crate) fn rank_in_place(m: &mut Gf2Matrix, opts: &RankOptions<'_>) -> usize {
    match opts.method {
        Elimination::Plain => rank_plain(m, opts.progress),
        Elimination::FourRussians { k } => rank_four_russians(m, k.clamp(1, 16) as usize, opts.progress),
    }
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Row `dst` ^= row `src`, words `from..stride`.
#[inline]
fn xor_rows(data: &mut [u64], stride: usize, src: usize, dst: usize, from: usize) {
    debug_assert_ne!(src, dst);
    if src < dst {
        let (a, b) = data.split_at_mut(dst * stride);
        xor_into(&mut b[from..stride], &a[src * stride + from..(src + 1) * stride]);
    } else {
        let (a, b) = data.split_at_mut(src * stride);
        xor_into(&mut a[dst * stride + from..(dst + 1) * stride], &b[from..stride]);
    }
}

#[inline]
fn swap_rows(data: &mut [u64], stride: usize, i: usize, j: usize, from: usize) {
    if i == j {
        return;
    }
    let (lo, hi) = (i.min(j), i.max(j));
    let (a, b) = data.split_at_mut(hi * stride);
    a[lo * stride + from..(lo + 1) * stride].swap_with_slice(&mut b[from..stride]);
}

fn report(progress: Option<&(dyn Fn(RankProgress) + Sync)>, pivots: usize, column: usize, rows: usize, cols: usize) {
    if let Some(cb) = progress {
        cb(RankProgress {
            pivots,
            column,
            rows,
            cols,
        });
    }
}

fn rank_plain(m: &mut Gf2Matrix, progress: Option<&(dyn Fn(RankProgress) + Sync)>) -> usize {
    let (rows, cols, stride) = (m.rows(), m.cols(), m.stride());
    let data = m.data_mut();
    let mut pivot = vec![0u64; stride];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let w = c / 64;
        let bit = 1u64 << (c % 64);
        // Rows r.. are zero left of column c, so only words w.. matter.
        let Some(p) = (r..rows).find(|&i| data[i * stride + w] & bit != 0) else {
            continue;
        };
        swap_rows(data, stride, p, r, w);
        pivot[w..].copy_from_slice(&data[r * stride + w..(r + 1) * stride]);
        let below = &mut data[(r + 1) * stride..];
        let piv = &pivot[w..];
        let clear = |row: &mut [u64]| {
            if row[w] & bit != 0 {
                xor_into(&mut row[w..], piv);
            }
        };
        if (rows - r - 1) * (stride - w) >= PAR_MIN_WORDS {
            below.par_chunks_mut(stride).for_each(clear);
        } else {
            below.chunks_mut(stride).for_each(clear);
        }
        r += 1;
        if r % 256 == 0 {
            report(progress, r, c, rows, cols);
        }
    }
    report(progress, r, cols, rows, cols);
    r
}

/// Bits `c..c + width` of a row as an integer (width ≤ 64).
#[inline]
fn window_bits(row: &[u64], c: usize, width: usize) -> usize {
    let w = c / 64;
    let off = c % 64;
    let mut bits = row[w] >> off;
    if off + width > 64 {
        bits |= row[w + 1] << (64 - off);
    }
    (bits & ((1u64 << width) - 1)) as usize
}

fn rank_four_russians(
    m: &mut Gf2Matrix,
    k: usize,
    progress: Option<&(dyn Fn(RankProgress) + Sync)>,
) -> usize {
    let (rows, cols, stride) = (m.rows(), m.cols(), m.stride());
    let data = m.data_mut();
    let mut table: Vec<u64> = Vec::new();
    let mut r = 0;
    let mut c = 0;
    let mut last_report = 0;
    while c < cols && r < rows {
        let width = k.min(cols - c);
        let w0 = c / 64;

        // Find up to `width` pivots among rows r.., keeping them mutually
        // reduced on the window. Every scanned non-pivot row ends up zero on
        // the window.
        let mut piv_rows: Vec<usize> = Vec::with_capacity(width);
        let mut piv_cols: Vec<usize> = Vec::with_capacity(width);
        let mut scan = r;
        while scan < rows && piv_rows.len() < width {
            for j in 0..piv_rows.len() {
                let bits = window_bits(&data[scan * stride..(scan + 1) * stride], c, width);
                if (bits >> piv_cols[j]) & 1 == 1 {
                    xor_rows(data, stride, piv_rows[j], scan, w0);
                }
            }
            let bits = window_bits(&data[scan * stride..(scan + 1) * stride], c, width);
            if bits != 0 {
                let pc = bits.trailing_zeros() as usize;
                for &p in &piv_rows {
                    let pb = window_bits(&data[p * stride..(p + 1) * stride], c, width);
                    if (pb >> pc) & 1 == 1 {
                        xor_rows(data, stride, scan, p, w0);
                    }
                }
                piv_rows.push(scan);
                piv_cols.push(pc);
            }
            scan += 1;
        }
        let np = piv_rows.len();

        // piv_rows is ascending, so each swap target r + j is either the
        // pivot itself or an already-cleared non-pivot row.
        for (j, &p) in piv_rows.iter().enumerate() {
            swap_rows(data, stride, p, r + j, w0);
        }

        if scan < rows {
            // Rows left unscanned imply a full window: each pivot row is a
            // unit vector on the window, so the window bits index the table.
            debug_assert_eq!(np, width);
            let span = stride - w0;
            let size = 1usize << width;
            table.clear();
            table.resize(size * span, 0);
            let mut by_col = vec![0usize; width];
            for (j, &pc) in piv_cols.iter().enumerate() {
                by_col[pc] = r + j;
            }
            for mask in 1..size {
                let low = mask.trailing_zeros() as usize;
                let prev = mask & (mask - 1);
                let src = by_col[low];
                let (done, rest) = table.split_at_mut(mask * span);
                let dst = &mut rest[..span];
                dst.copy_from_slice(&done[prev * span..(prev + 1) * span]);
                xor_into(dst, &data[src * stride + w0..(src + 1) * stride]);
            }
            let table = &table;
            let tail = &mut data[scan * stride..];
            let apply = |row: &mut [u64]| {
                let mask = window_bits(row, c, width);
                if mask != 0 {
                    xor_into(&mut row[w0..], &table[mask * span..(mask + 1) * span]);
                }
            };
            if (rows - scan) * span >= PAR_MIN_WORDS {
                tail.par_chunks_mut(stride).for_each(apply);
            } else {
                tail.chunks_mut(stride).for_each(apply);
            }
        }

        r += np;
        c += width;
        if r - last_report >= 256 {
            last_report = r;
            report(progress, r, c, rows, cols);
        }
    }
    report(progress, r, cols, rows, cols);
    r
}

/// Gauss–Jordan to reduced row echelon form. Nonzero rows end up first, in
/// pivot order; returns the pivot columns.
pub(crate) fn rref_in_place(m: &mut Gf2Matrix) -> Vec<usize> {
    let (rows, cols, stride) = (m.rows(), m.cols(), m.stride());
    let data = m.data_mut();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let w = c / 64;
        let bit = 1u64 << (c % 64);
        let Some(p) = (r..rows).find(|&i| data[i * stride + w] & bit != 0) else {
            continue;
        };
        swap_rows(data, stride, p, r, 0);
        for i in 0..rows {
            if i != r && data[i * stride + w] & bit != 0 {
                xor_rows(data, stride, r, i, w);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, density: f64, rng: &mut ChaCha8Rng) -> Gf2Matrix {
        Gf2Matrix::from_fn(rows, cols, |_, _| rng.random_bool(density))
    }

    #[test]
    fn four_russians_agrees_with_plain() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..200 {
            let rows = rng.random_range(0..150);
            let cols = rng.random_range(0..150);
            let density = [0.02, 0.1, 0.5][trial % 3];
            let m = random(rows, cols, density, &mut rng);
            let plain = m.clone().into_rank(&RankOptions::default());
            for k in [1, 3, 8, 16] {
                let fr = m
                    .clone()
                    .into_rank(&RankOptions::with_method(Elimination::FourRussians { k }));
                assert_eq!(plain, fr, "k={k} on {rows}x{cols}");
            }
        }
    }

    #[test]
    fn low_rank_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random(200, 30, 0.5, &mut rng);
        let b = random(30, 200, 0.5, &mut rng);
        let p = a.mul(&b).unwrap();
        let plain = p.clone().into_rank(&RankOptions::default());
        assert!(plain <= 30);
        let fr = p.into_rank(&RankOptions::with_method(Elimination::four_russians()));
        assert_eq!(plain, fr);
    }
}
