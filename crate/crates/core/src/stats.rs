//! Per-thread counters of the exact linear algebra behind a computation.

use std::cell::Cell;

thread_local! {
    static RR_SPACES: Cell<u64> = const { Cell::new(0) };
    static CONSTRAINTS: Cell<u64> = const { Cell::new(0) };
    static UNKNOWNS: Cell<u64> = const { Cell::new(0) };
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Riemann-Roch spaces computed.
    pub rr_spaces: u64,
    /// Linear conditions imposed, summed over all spaces.
    pub constraints: u64,
    /// Ansatz coefficients, summed over all spaces.
    pub unknowns: u64,
}

pub(crate) fn record_rr(constraints: usize, unknowns: usize) {
    RR_SPACES.with(|c| c.set(c.get() + 1));
    CONSTRAINTS.with(|c| c.set(c.get() + constraints as u64));
    UNKNOWNS.with(|c| c.set(c.get() + unknowns as u64));
}

pub fn snapshot() -> Stats {
    Stats {
        rr_spaces: RR_SPACES.with(Cell::get),
        constraints: CONSTRAINTS.with(Cell::get),
        unknowns: UNKNOWNS.with(Cell::get),
    }
}

pub fn reset() {
    RR_SPACES.with(|c| c.set(0));
    CONSTRAINTS.with(|c| c.set(0));
    UNKNOWNS.with(|c| c.set(0));
}
