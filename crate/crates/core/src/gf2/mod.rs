//! Bit-packed linear algebra over F₂ and small extension fields GF(2^s).
//!
//! Everything else in the crate funnels through [`Gf2Matrix`]: ranks of
//! storage operators, kernels, row spaces of parity-check matrices. Rows are
//! packed 64 bits per word and eliminated with whole-word XORs.

mod budget;
mod elim;
mod field;
mod matrix;
mod vector;

pub use budget::{matrix_bytes, Admission, MemoryGate, DEFAULT_BUDGET};
pub use elim::{Elimination, RankOptions, RankProgress};
pub use field::Gf2sField;
pub use matrix::Gf2Matrix;
pub use vector::Gf2Vector;

use crate::error::Result;

pub fn rank(m: &Gf2Matrix) -> Result<usize> {
    m.rank()
}

pub fn kernel_dimension(m: &Gf2Matrix) -> Result<usize> {
    m.kernel_dimension()
}

pub fn kernel_basis(m: &Gf2Matrix) -> Result<Gf2Matrix> {
    m.kernel_basis()
}

pub fn mat_mul(a: &Gf2Matrix, b: &Gf2Matrix) -> Result<Gf2Matrix> {
    a.mul(b)
}

pub fn gf2s_mul(field: &Gf2sField, a: u32, b: u32) -> u32 {
    field.mul(a, b)
}
