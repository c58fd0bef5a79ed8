//! Binary linear codes given by parity-check matrices.
//!
//! A [`BinaryCode`] is just its `r × n` parity-check matrix `H` plus a label.
//! The code is `ker H`, its dual is the row space of `H`, and the columns of
//! `H` are what the coset-graph module uses as Cayley generators.

mod family;
mod io;

use std::collections::HashSet;

pub use family::CodeFamilyId;
pub use io::{format_parity_check, parse_parity_check, read_parity_check};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector, Gf2sField};

/// Upper limit on `k` for exhaustive codeword enumeration.
pub const EXHAUSTIVE_MAX_DIMENSION: usize = 24;

/// Products are reduced into the running basis after this many rows.
const SCHUR_BATCH_ROWS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    h: Gf2Matrix,
    label: String,
}

impl BinaryCode {
    pub fn new(h: Gf2Matrix, label: impl Into<String>) -> Self {
        BinaryCode {
            h,
            label: label.into(),
        }
    }

    /// Builds `H` from its columns, each an `r`-bit vector.
    pub fn from_columns(r: usize, columns: &[Gf2Vector], label: impl Into<String>) -> Result<Self> {
        let mut h = Gf2Matrix::try_zeros(r, columns.len())?;
        for (j, col) in columns.iter().enumerate() {
            if col.len() != r {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} bits, expected {r}",
                    col.len()
                )));
            }
            for i in col.iter_ones() {
                h.set(i, j, true);
            }
        }
        Ok(Self::new(h, label))
    }

    /// Columns given as integer labels: bit `i` of a label is row `i`.
    pub fn from_column_labels(r: usize, labels: &[u64], label: impl Into<String>) -> Result<Self> {
        let cols: Vec<Gf2Vector> = labels.iter().map(|&l| Gf2Vector::from_u64(r, l)).collect();
        Self::from_columns(r, &cols, label)
    }

    pub fn parity_check(&self) -> &Gf2Matrix {
        &self.h
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of parity rows (not necessarily independent).
    pub fn r(&self) -> usize {
        self.h.rows()
    }

    pub fn rank_h(&self) -> usize {
        self.h.rank().expect("parity-check matrix fits the budget it was built under")
    }

    /// `k = n − rank(H)`.
    pub fn dimension(&self) -> usize {
        self.n() - self.rank_h()
    }

    pub fn columns(&self) -> Vec<Gf2Vector> {
        (0..self.n()).map(|j| self.h.column(j)).collect()
    }

    /// Columns as integer labels (requires `r ≤ 64`).
    pub fn column_labels(&self) -> Result<Vec<u64>> {
        if self.r() > 64 {
            return Err(Error::InvalidParameter(format!(
                "{} parity rows do not fit a 64-bit label",
                self.r()
            )));
        }
        Ok((0..self.n())
            .map(|j| (0..self.r()).fold(0u64, |acc, i| acc | ((self.h.get(i, j) as u64) << i)))
            .collect())
    }

    /// Generator matrix: a basis of `ker H`.
    pub fn generator(&self) -> Result<Gf2Matrix> {
        self.h.kernel_basis()
    }

    pub fn contains(&self, word: &Gf2Vector) -> bool {
        self.h.mul_vec(word).is_zero()
    }
}

/// Builds a code from a family identifier.
pub fn build_code(id: &CodeFamilyId) -> Result<BinaryCode> {
    id.validate()?;
    let label = id.to_string();
    match *id {
        CodeFamilyId::Repetition(n) => repetition(n, label),
        CodeFamilyId::ExtendedHamming(m) => {
            BinaryCode::from_column_labels(m + 1, &ext_hamming_labels(m), label)
        }
        CodeFamilyId::AugmentedHr(r) => augmented_hr_with_partner(r, (1usize << (r - 1)) - 1),
        CodeFamilyId::Golay23 => golay23(label),
        CodeFamilyId::Bch2(s) => bch2(s, label),
        CodeFamilyId::RmQuadratic(m) => rm_quadratic(m, label),
        CodeFamilyId::FromFile(ref path) => {
            let h = read_parity_check(path)?;
            Ok(BinaryCode::new(h, label))
        }
    }
}

/// `H = [I_{n−1} | 1]`.
fn repetition(n: usize, label: String) -> Result<BinaryCode> {
    let r = n - 1;
    let mut cols: Vec<Gf2Vector> = (0..r).map(|i| Gf2Vector::from_support(r, &[i])).collect();
    cols.push(Gf2Vector::ones(r));
    BinaryCode::from_columns(r, &cols, label)
}

/// Columns `(v, 1)` for `v ∈ F₂^m` in integer order.
fn ext_hamming_labels(m: usize) -> Vec<u64> {
    (0..1u64 << m).map(|v| v | (1 << m)).collect()
}

/// The augmented extended-Hamming matrix with the weight-2 row placed on the
/// appended zero column and column `partner` of the extended-Hamming block.
/// The canonical choice `partner = 2^{r−1} − 1` hits the all-ones column.
pub fn augmented_hr_with_partner(r: usize, partner: usize) -> Result<BinaryCode> {
    CodeFamilyId::AugmentedHr(r).validate()?;
    let block = 1usize << (r - 1);
    if partner >= block {
        return Err(Error::InvalidParameter(format!(
            "partner column {partner} outside the extended-Hamming block of {block} columns"
        )));
    }
    let mut labels = ext_hamming_labels(r - 1);
    labels.push(0);
    labels[partner] |= 1 << r;
    labels[block] |= 1 << r;
    let label = if partner == block - 1 {
        CodeFamilyId::AugmentedHr(r).to_string()
    } else {
        format!("augmented-hr:{r}@{partner}")
    };
    BinaryCode::from_column_labels(r + 1, &labels, label)
}

/// Coefficients of the Golay generator polynomial
/// x¹¹ + x¹⁰ + x⁶ + x⁵ + x⁴ + x² + 1, bit `i` for `x^i`.
pub const GOLAY_GENERATOR: u32 = (1 << 11) | (1 << 10) | (1 << 6) | (1 << 5) | (1 << 4) | (1 << 2) | 1;

fn poly_div_exact(num: u64, den: u64) -> Option<u64> {
    let dd = 63 - den.leading_zeros();
    let mut rem = num;
    let mut quot = 0u64;
    while rem != 0 && 63 - rem.leading_zeros() >= dd {
        let shift = 63 - rem.leading_zeros() - dd;
        quot |= 1 << shift;
        rem ^= den << shift;
    }
    (rem == 0).then_some(quot)
}

/// Parity checks of the cyclic code generated by `g(x)`: shifts of the
/// reciprocal of `h(x) = (x^n − 1)/g(x)`.
pub fn cyclic_parity_check(n: usize, generator: u64, label: impl Into<String>) -> Result<BinaryCode> {
    assert!(n < 64, "cyclic constructor handles n < 64");
    let xn1 = (1u64 << n) | 1;
    let h = poly_div_exact(xn1, generator).ok_or_else(|| {
        Error::InvalidParameter(format!("{generator:#x} does not divide x^{n} - 1"))
    })?;
    let deg_h = (63 - h.leading_zeros()) as usize;
    let recip: Vec<bool> = (0..=deg_h).map(|i| (h >> (deg_h - i)) & 1 == 1).collect();
    let rows = n - deg_h;
    let mut m = Gf2Matrix::try_zeros(rows, n)?;
    for i in 0..rows {
        for (j, &b) in recip.iter().enumerate() {
            if b {
                m.set(i, i + j, true);
            }
        }
    }
    Ok(BinaryCode::new(m, label))
}

fn golay23(label: String) -> Result<BinaryCode> {
    cyclic_parity_check(23, GOLAY_GENERATOR as u64, label)
}

/// Column `i` stacks `α^i` (low `s` bits) over `α^{3i}` (high `s` bits).
fn bch2(s: u32, label: String) -> Result<BinaryCode> {
    let field = Gf2sField::new(s)?;
    let n = field.order() as u64;
    let labels: Vec<u64> = (0..n)
        .map(|i| field.pow_generator(i) as u64 | ((field.pow_generator(3 * i) as u64) << s))
        .collect();
    BinaryCode::from_column_labels(2 * s as usize, &labels, label)
}

/// Rows: `v_i` for `i < m`, then `v_i v_j` for `i < j`, evaluated at the
/// nonzero points of F₂^m in integer order.
fn rm_quadratic(m: usize, label: String) -> Result<BinaryCode> {
    let n = (1usize << m) - 1;
    let mut monomials: Vec<u64> = (0..m).map(|i| 1u64 << i).collect();
    for i in 0..m {
        for j in i + 1..m {
            monomials.push((1 << i) | (1 << j));
        }
    }
    let mut h = Gf2Matrix::try_zeros(monomials.len(), n)?;
    for (row, &mono) in monomials.iter().enumerate() {
        for x in 1..=n as u64 {
            if x & mono == mono {
                h.set(row, (x - 1) as usize, true);
            }
        }
    }
    Ok(BinaryCode::new(h, label))
}

/// Row-reduced basis of `C^⊥`, i.e. of the row space of `H`.
pub fn dual_generators(code: &BinaryCode) -> Gf2Matrix {
    code.parity_check().row_basis()
}

/// Incrementally maintained reduced basis of a row space.
pub(crate) struct SpanBuilder {
    len: usize,
    rows: Vec<(usize, Gf2Vector)>,
}

impl SpanBuilder {
    pub(crate) fn new(len: usize) -> Self {
        SpanBuilder { len, rows: Vec::new() }
    }

    fn reduce(&self, mut v: Gf2Vector) -> Gf2Vector {
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub(crate) fn insert(&mut self, v: Gf2Vector) -> bool {
        let v = self.reduce(v);
        let Some(pivot) = v.first_one() else {
            return false;
        };
        for (_, row) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        self.rows.push((pivot, v));
        true
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn into_matrix(mut self) -> Gf2Matrix {
        self.rows.sort_by_key(|(p, _)| *p);
        let vecs: Vec<Gf2Vector> = self.rows.into_iter().map(|(_, v)| v).collect();
        Gf2Matrix::from_rows(self.len, &vecs).expect("basis rows share one length")
    }
}

/// Basis of `(C^⊥)^{∗(k−1)}`, the span of all coordinatewise products of
/// `k − 1` dual codewords. `k = 2` returns the dual itself.
pub fn schur_power_dual(code: &BinaryCode, k: usize) -> Result<Gf2Matrix> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("Schur power index k = {k} < 2")));
    }
    let dual = dual_generators(code);
    let factors = dual.row_vectors();
    let n = code.n();
    let mut current = dual;
    for _ in 2..k {
        let mut span = SpanBuilder::new(n);
        let mut batch: Vec<Gf2Vector> = Vec::with_capacity(SCHUR_BATCH_ROWS);
        'outer: for b in current.row_vectors() {
            for f in &factors {
                batch.push(b.and(f));
                if batch.len() == SCHUR_BATCH_ROWS {
                    for v in batch.drain(..) {
                        span.insert(v);
                    }
                    if span.dim() == n {
                        break 'outer;
                    }
                }
            }
        }
        for v in batch {
            span.insert(v);
        }
        let next = span.into_matrix();
        if next.rows() == current.rows() && next.same_row_space(&current) {
            // Stationary from here on.
            return Ok(next);
        }
        current = next;
    }
    Ok(current)
}

/// True iff `(C^⊥)^{∗(k−1)} ⊂ C`.
pub fn contains_dual_power(code: &BinaryCode, k: usize) -> Result<bool> {
    let power = schur_power_dual(code, k)?;
    let h = code.parity_check();
    Ok((0..power.rows()).all(|i| h.mul_vec(&power.row(i)).is_zero()))
}

/// `d(C) ≥ 4`: columns nonzero, pairwise distinct, and no two summing to a
/// third.
pub fn distance_at_least_4(code: &BinaryCode) -> bool {
    let cols = code.columns();
    let mut seen: HashSet<&Gf2Vector> = HashSet::with_capacity(cols.len());
    for c in &cols {
        if c.is_zero() || !seen.insert(c) {
            return false;
        }
    }
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let mut sum = cols[i].clone();
            sum.xor_assign(&cols[j]);
            if seen.contains(&sum) {
                return false;
            }
        }
    }
    true
}

/// Minimum weight over all nonzero codewords, by Gray-code enumeration.
pub fn min_distance_exhaustive(code: &BinaryCode) -> Result<usize> {
    let g = code.generator()?;
    let k = g.rows();
    if k > EXHAUSTIVE_MAX_DIMENSION {
        return Err(Error::SearchBudget(format!(
            "dimension {k} exceeds the exhaustive limit {EXHAUSTIVE_MAX_DIMENSION}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "code has no nonzero codewords".into(),
        ));
    }
    let gens = g.row_vectors();
    let mut word = Gf2Vector::zeros(code.n());
    let mut best = usize::MAX;
    for step in 1u64..1 << k {
        word.xor_assign(&gens[step.trailing_zeros() as usize]);
        best = best.min(word.weight());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code(id: CodeFamilyId) -> BinaryCode {
        build_code(&id).unwrap()
    }

    fn sorted_columns(c: &BinaryCode) -> Vec<String> {
        let mut v: Vec<String> = c.columns().iter().map(|x| x.to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn repetition_5_matches_displayed_matrix() {
        let c = code(CodeFamilyId::Repetition(5));
        let expected = Gf2Matrix::from_strs(&["10001", "01001", "00101", "00011"]).unwrap();
        let shown = BinaryCode::new(expected, "shown");
        assert_eq!(sorted_columns(&c), sorted_columns(&shown));
        assert_eq!((c.n(), c.r(), c.dimension()), (5, 4, 1));
    }

    #[test]
    fn augmented_hr_4_matches_displayed_matrix() {
        let shown = Gf2Matrix::from_strs(&[
            "000011110",
            "001100110",
            "010101010",
            "111111110",
            "000000011",
        ])
        .unwrap();
        let c = code(CodeFamilyId::AugmentedHr(4));
        assert_eq!((c.r(), c.n()), (5, 9));
        // Rows of the displayed matrix list the high coordinate first; match
        // up to row relabelling by comparing column multisets after mapping
        // displayed rows (v3, v2, v1, 1, extra) onto bits (2, 1, 0, 3, 4).
        let perm = [2usize, 1, 0, 3, 4];
        let mut remapped = Gf2Matrix::zeros(5, 9);
        for (disp_row, &bit) in perm.iter().enumerate() {
            for j in 0..9 {
                remapped.set(bit, j, shown.get(disp_row, j));
            }
        }
        assert_eq!(
            sorted_columns(&c),
            sorted_columns(&BinaryCode::new(remapped, "shown"))
        );
    }

    #[test]
    fn bch2_4_parameters() {
        let c = code(CodeFamilyId::Bch2(4));
        assert_eq!((c.r(), c.n(), c.rank_h(), c.dimension()), (8, 15, 8, 7));
    }

    #[test]
    fn golay_parameters_and_generator_orthogonality() {
        let c = code(CodeFamilyId::Golay23);
        assert_eq!((c.n(), c.r(), c.rank_h(), c.dimension()), (23, 11, 11, 12));
        // Shifts of g(x) are codewords.
        for shift in 0..12 {
            let w = Gf2Vector::from_words(23, vec![(GOLAY_GENERATOR as u64) << shift]);
            assert!(c.contains(&w));
        }
        assert_eq!(min_distance_exhaustive(&c).unwrap(), 7);
        assert_eq!(dual_generators(&c).rows(), 11);
    }

    #[test]
    fn min_distances() {
        assert_eq!(min_distance_exhaustive(&code(CodeFamilyId::Repetition(5))).unwrap(), 5);
        assert_eq!(min_distance_exhaustive(&code(CodeFamilyId::ExtendedHamming(3))).unwrap(), 4);
    }

    #[test]
    fn dual_of_repetition_3_is_even_weight_code() {
        let d = dual_generators(&code(CodeFamilyId::Repetition(3)));
        assert_eq!(d.rows(), 2);
        for i in 0..d.rows() {
            assert_eq!(d.row(i).weight() % 2, 0);
        }
    }

    #[test]
    fn dual_is_orthogonal_to_every_codeword() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let n = rng.random_range(2..=14);
            let r = rng.random_range(1..n);
            let h = Gf2Matrix::from_fn(r, n, |_, _| rng.random_bool(0.5));
            let c = BinaryCode::new(h, "random");
            let dual = dual_generators(&c);
            for x in 0u64..1 << n {
                let w = Gf2Vector::from_u64(n, x);
                if c.contains(&w) {
                    for i in 0..dual.rows() {
                        assert!(!dual.row(i).dot(&w));
                    }
                }
            }
        }
    }

    #[test]
    fn schur_square_matches_explicit_pairwise_span() {
        let c = code(CodeFamilyId::Bch2(4));
        let fast = schur_power_dual(&c, 3).unwrap();
        // Enumerate the whole dual (2^8 words) and span all pairwise products.
        let dual = dual_generators(&c);
        let gens = dual.row_vectors();
        let words: Vec<Gf2Vector> = (0u32..1 << gens.len())
            .map(|mask| {
                let mut w = Gf2Vector::zeros(15);
                for (i, g) in gens.iter().enumerate() {
                    if (mask >> i) & 1 == 1 {
                        w.xor_assign(g);
                    }
                }
                w
            })
            .collect();
        let mut all = Vec::new();
        for a in &words {
            for b in &words {
                all.push(a.and(b));
            }
        }
        let oracle = Gf2Matrix::from_rows(15, &all).unwrap();
        assert!(fast.same_row_space(&oracle));
        assert_eq!(fast.rows(), oracle.rank().unwrap());
    }

    #[test]
    fn schur_power_two_is_dual() {
        for id in [CodeFamilyId::Golay23, CodeFamilyId::Bch2(5), CodeFamilyId::AugmentedHr(4)] {
            let c = code(id);
            assert!(schur_power_dual(&c, 2).unwrap().same_row_space(c.parity_check()));
        }
        assert!(schur_power_dual(&code(CodeFamilyId::Golay23), 1).is_err());
    }

    #[test]
    fn all_ones_row_leaves_product_span_unchanged() {
        let c = code(CodeFamilyId::ExtendedHamming(3));
        let dual = dual_generators(&c);
        let ones = Gf2Vector::ones(c.n());
        assert!(dual.row_space_contains(&ones));
        for i in 0..dual.rows() {
            assert_eq!(dual.row(i).and(&ones), dual.row(i));
        }
    }

    #[test]
    fn schur_powers_grow_monotonically() {
        for id in [CodeFamilyId::ExtendedHamming(4), CodeFamilyId::AugmentedHr(5)] {
            let c = code(id);
            let mut prev = schur_power_dual(&c, 2).unwrap();
            for k in 3..=5 {
                let next = schur_power_dual(&c, k).unwrap();
                for i in 0..prev.rows() {
                    assert!(next.row_space_contains(&prev.row(i)));
                }
                prev = next;
            }
        }
    }

    #[test]
    fn dual_containment_examples() {
        assert!(!contains_dual_power(&code(CodeFamilyId::Repetition(5)), 2).unwrap());
        let parity = BinaryCode::new(Gf2Matrix::from_strs(&["11"]).unwrap(), "parity");
        assert!(contains_dual_power(&parity, 2).unwrap());
        assert!(contains_dual_power(&code(CodeFamilyId::Bch2(7)), 2).unwrap());
    }

    #[test]
    fn distance_four_criterion() {
        let tri = BinaryCode::new(Gf2Matrix::from_strs(&["101", "011"]).unwrap(), "tri");
        assert!(!distance_at_least_4(&tri));
        assert!(distance_at_least_4(&code(CodeFamilyId::Repetition(5))));
        for s in 3..=5 {
            assert!(distance_at_least_4(&code(CodeFamilyId::Bch2(s))));
        }
    }

    /// Weight ≤ 3 syndrome search, independent of the hashed column test.
    fn has_low_weight_word(c: &BinaryCode) -> bool {
        let cols = c.columns();
        let n = cols.len();
        for i in 0..n {
            if cols[i].is_zero() {
                return true;
            }
            for j in i + 1..n {
                let mut s = cols[i].clone();
                s.xor_assign(&cols[j]);
                if s.is_zero() {
                    return true;
                }
                for l in j + 1..n {
                    let mut t = s.clone();
                    t.xor_assign(&cols[l]);
                    if t.is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn bch_distance_by_syndrome_search() {
        for s in 3..=5 {
            assert!(!has_low_weight_word(&code(CodeFamilyId::Bch2(s))));
        }
    }

    #[test]
    fn distance_criterion_agrees_with_exhaustion() {
        let families = [
            CodeFamilyId::Repetition(5),
            CodeFamilyId::Repetition(7),
            CodeFamilyId::ExtendedHamming(3),
            CodeFamilyId::ExtendedHamming(4),
            CodeFamilyId::AugmentedHr(4),
            CodeFamilyId::AugmentedHr(5),
            CodeFamilyId::Golay23,
            CodeFamilyId::Bch2(4),
            CodeFamilyId::Bch2(5),
            CodeFamilyId::RmQuadratic(4),
        ];
        for id in families {
            let c = code(id.clone());
            let d = min_distance_exhaustive(&c).unwrap();
            assert_eq!(distance_at_least_4(&c), d >= 4, "{id}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(200);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.random_range(3..=20);
            let r = rng.random_range(1..n);
            let h = Gf2Matrix::from_fn(r, n, |_, _| rng.random_bool(0.5));
            let c = BinaryCode::new(h, "random");
            if c.dimension() == 0 {
                continue;
            }
            let d = min_distance_exhaustive(&c).unwrap();
            assert_eq!(distance_at_least_4(&c), d >= 4);
            checked += 1;
        }
    }

    #[test]
    fn built_in_families_have_full_row_rank() {
        for id in [
            CodeFamilyId::Repetition(9),
            CodeFamilyId::ExtendedHamming(5),
            CodeFamilyId::AugmentedHr(6),
            CodeFamilyId::Golay23,
            CodeFamilyId::Bch2(6),
        ] {
            let c = code(id.clone());
            assert_eq!(c.rank_h(), c.r(), "{id}");
        }
        for m in 3..=6 {
            let c = code(CodeFamilyId::RmQuadratic(m));
            assert_eq!(c.r(), m * (m + 1) / 2);
            assert_eq!(c.n(), (1 << m) - 1);
            assert_eq!(c.rank_h(), c.r(), "rm-quadratic:{m}");
        }
    }

    #[test]
    fn partner_column_is_configurable() {
        let c = augmented_hr_with_partner(4, 3).unwrap();
        assert_eq!(c.parity_check().row(4).weight(), 2);
        assert!(c.parity_check().get(4, 3) && c.parity_check().get(4, 8));
        assert!(augmented_hr_with_partner(4, 8).is_err());
    }
}
