//! Cayley graphs `Cay(F₂^r, S)` and their storage operator `Ã = I + A`.
//!
//! Vertices are the integers `0..2^r`, read as little-endian bit vectors.
//! Generators form a multiset; every operator works with the *effective*
//! set, the generators of odd multiplicity, because the adjacency sum is
//! taken over F₂. Adjoining `0` to the generators puts the identity into the
//! operator, so the storage code of a coset graph is the kernel of the
//! operator of `S ∪ {0}`.

mod css;
mod lemma53;
mod report;
mod spectrum;

use rayon::prelude::*;

pub use css::{css_dimension, CssDimension};
pub use lemma53::{verify_lemma_53, Lemma53};
pub use report::{
    check_theorem_43, closed_form_check, predicted_dimension, storage_report, storage_report_with, ClosedFormCheck,
    ConditionRecord, KVerdict, ReportOptions, StorageReport, Verdict, DEFAULT_K_MAX,
};
pub use spectrum::{rank_lower_bound, second_eigenvalue, spectrum, triangle_free, walsh_hadamard};

use crate::codes::BinaryCode;
use crate::error::{Error, Result};
use crate::gf2::{matrix_bytes, Elimination, Gf2Matrix, Gf2Vector, MemoryGate, RankOptions};

/// Largest `r` for which the tool builds operators over `F₂^r`.
pub const MAX_R: usize = 26;

/// Above this vertex count the accelerated elimination is used by default.
pub const ACCELERATE_ABOVE: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    r: usize,
    gens: Vec<u64>,
    include_zero: bool,
}

impl GeneratorSet {
    pub fn new(r: usize, gens: Vec<u64>, include_zero: bool) -> Result<Self> {
        if r > MAX_R {
            return Err(Error::Capacity {
                what: format!("Cayley graph over F2^{r}"),
                requested: 1u64.checked_shl(r as u32).unwrap_or(u64::MAX),
                budget: 1 << MAX_R,
            });
        }
        if let Some(&g) = gens.iter().find(|&&g| g >> r != 0) {
            return Err(Error::InvalidParameter(format!(
                "generator {g:#x} does not fit in {r} bits"
            )));
        }
        Ok(GeneratorSet {
            r,
            gens,
            include_zero,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn gens(&self) -> &[u64] {
        &self.gens
    }

    pub fn include_zero(&self) -> bool {
        self.include_zero
    }

    pub fn with_zero(&self, include_zero: bool) -> Self {
        GeneratorSet {
            include_zero,
            ..self.clone()
        }
    }

    /// Elements of odd multiplicity (counting the adjoined 0), sorted.
    pub fn effective(&self) -> Vec<u64> {
        let mut all = self.gens.clone();
        if self.include_zero {
            all.push(0);
        }
        all.sort_unstable();
        let mut out = Vec::with_capacity(all.len());
        let mut i = 0;
        while i < all.len() {
            let mut j = i;
            while j < all.len() && all[j] == all[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                out.push(all[i]);
            }
            i = j;
        }
        out
    }

    /// Nonzero effective generators: the neighbours of vertex 0.
    pub fn effective_nonzero(&self) -> Vec<u64> {
        self.effective().into_iter().filter(|&g| g != 0).collect()
    }
}

#[derive(Clone, Debug)]
pub struct CosetGraphHandle {
    gens: GeneratorSet,
    code: Option<BinaryCode>,
}

impl CosetGraphHandle {
    /// Coset graph of `C` with `0` adjoined, so the operator is `I + A`.
    pub fn from_code(code: &BinaryCode) -> Result<Self> {
        let r = code.r();
        if r > MAX_R {
            return Err(Error::Capacity {
                what: format!("coset graph of {} ({r} parity rows)", code.label()),
                requested: 1u64.checked_shl(r as u32).unwrap_or(u64::MAX),
                budget: 1 << MAX_R,
            });
        }
        let gens = GeneratorSet::new(r, code.column_labels()?, true)?;
        Ok(CosetGraphHandle {
            gens,
            code: Some(code.clone()),
        })
    }

    pub fn from_generators(gens: GeneratorSet) -> Self {
        CosetGraphHandle { gens, code: None }
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn code(&self) -> Option<&BinaryCode> {
        self.code.as_ref()
    }

    pub fn r(&self) -> usize {
        self.gens.r
    }

    /// `N = 2^r`.
    pub fn n_vertices(&self) -> usize {
        1 << self.gens.r
    }

    /// Degree ignoring loops.
    pub fn degree(&self) -> usize {
        self.gens.effective_nonzero().len()
    }

    /// The same graph with the loop removed or adjoined.
    pub fn with_zero(&self, include_zero: bool) -> Self {
        CosetGraphHandle {
            gens: self.gens.with_zero(include_zero),
            code: self.code.clone(),
        }
    }

    pub fn label(&self) -> String {
        match &self.code {
            Some(c) => c.label().to_string(),
            None => format!("cayley(r={}, |S|={})", self.gens.r, self.gens.gens.len()),
        }
    }

    /// Row `x` of the operator: ones at `x + s` for effective `s`.
    pub fn adjacency_row(&self, x: u64) -> Gf2Vector {
        let mut row = Gf2Vector::zeros(self.n_vertices());
        for s in self.gens.effective() {
            row.set((x ^ s) as usize, true);
        }
        row
    }

    /// The full `N × N` operator. Subject to the memory budget.
    pub fn operator_matrix(&self) -> Result<Gf2Matrix> {
        operator_from_effective(self.gens.r, &self.gens.effective())
    }

    /// Rank of the operator, streaming rows into an owned working matrix.
    pub fn operator_rank(&self, opts: &RankOptions<'_>) -> Result<usize> {
        let n = self.n_vertices();
        let _admission = MemoryGate::global().admit("storage operator", matrix_bytes(n, n))?;
        let m = self.operator_matrix()?;
        Ok(m.into_rank(opts))
    }

    /// Elimination used when the caller does not choose: the accelerated
    /// path above [`ACCELERATE_ABOVE`] vertices, unless its lookup table does
    /// not fit the budget.
    pub fn default_elimination(&self) -> Elimination {
        let n = self.n_vertices();
        if n <= ACCELERATE_ABOVE {
            return Elimination::Plain;
        }
        let accel = Elimination::four_russians();
        let Elimination::FourRussians { k } = accel else {
            unreachable!()
        };
        let table = (1u64 << k) * matrix_bytes(1, n);
        let working = matrix_bytes(n, n);
        match MemoryGate::global().check("elimination table", working + table) {
            Ok(()) => accel,
            Err(_) => Elimination::Plain,
        }
    }
}

/// Operator of an effective generator set over `F₂^r`.
pub(crate) fn operator_from_effective(r: usize, effective: &[u64]) -> Result<Gf2Matrix> {
    let n = 1usize << r;
    let mut m = Gf2Matrix::try_zeros(n, n)?;
    let stride = m.stride();
    if stride == 0 {
        return Ok(m);
    }
    m.data_mut()
        .par_chunks_mut(stride)
        .enumerate()
        .for_each(|(x, row)| {
            for &s in effective {
                let y = x ^ s as usize;
                row[y / 64] ^= 1 << (y % 64);
            }
        });
    Ok(m)
}
