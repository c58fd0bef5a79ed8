//! Process-wide memory budget for dense matrices.
//!
//! A single matrix larger than the budget is refused with
//! [`Error::Capacity`]. Concurrent computations reserve their working set
//! through [`MemoryGate::admit`] and wait until enough budget is free.

use std::sync::{Condvar, Mutex, OnceLock};

use crate::error::{Error, Result};

/// 1 GiB.
pub const DEFAULT_BUDGET: u64 = 1 << 30;

pub struct MemoryGate {
    state: Mutex<GateState>,
    freed: Condvar,
}

struct GateState {
    budget: u64,
    in_use: u64,
}

/// Reserved bytes, returned to the gate on drop.
#[must_use]
pub struct Admission {
    bytes: u64,
}

impl Drop for Admission {
    fn drop(&mut self) {
        let gate = MemoryGate::global();
        let mut st = gate.state.lock().unwrap();
        st.in_use -= self.bytes;
        gate.freed.notify_all();
    }
}

impl MemoryGate {
    pub fn global() -> &'static MemoryGate {
        static GATE: OnceLock<MemoryGate> = OnceLock::new();
        GATE.get_or_init(|| MemoryGate {
            state: Mutex::new(GateState {
                budget: DEFAULT_BUDGET,
                in_use: 0,
            }),
            freed: Condvar::new(),
        })
    }

    pub fn budget(&self) -> u64 {
        self.state.lock().unwrap().budget
    }

    pub fn set_budget(&self, bytes: u64) {
        self.state.lock().unwrap().budget = bytes;
        self.freed.notify_all();
    }

    /// Fails immediately if `bytes` alone exceeds the budget.
    pub fn check(&self, what: &str, bytes: u64) -> Result<()> {
        let budget = self.budget();
        if bytes > budget {
            return Err(Error::Capacity {
                what: what.to_string(),
                requested: bytes,
                budget,
            });
        }
        Ok(())
    }

    /// Blocks until `bytes` can be reserved alongside other admitted work.
    pub fn admit(&self, what: &str, bytes: u64) -> Result<Admission> {
        let mut st = self.state.lock().unwrap();
        loop {
            if bytes > st.budget {
                return Err(Error::Capacity {
                    what: what.to_string(),
                    requested: bytes,
                    budget: st.budget,
                });
            }
            if st.in_use + bytes <= st.budget {
                st.in_use += bytes;
                return Ok(Admission { bytes });
            }
            st = self.freed.wait(st).unwrap();
        }
    }
}

/// Bytes needed for a dense `rows × cols` bit matrix.
pub fn matrix_bytes(rows: usize, cols: usize) -> u64 {
    rows as u64 * cols.div_ceil(64) as u64 * 8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oversized_request_is_refused() {
        let gate = MemoryGate::global();
        let err = gate.check("probe", gate.budget() + 1).unwrap_err();
        assert!(err.is_capacity());
        let ok = gate.admit("small", 1024).unwrap();
        drop(ok);
    }
}
