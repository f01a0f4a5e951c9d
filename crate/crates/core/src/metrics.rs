//! Operation counters.
//!
//! Counters are thread-local, so concurrent workers never interfere; a caller
//! that fans work out sums the per-worker [`Metrics`] it gets back from
//! [`measure`]. Trie edges are the machine-independent cost measure used by the
//! scaling benchmark.

use std::cell::{Cell, RefCell};
use std::ops::{Add, AddAssign};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Metrics {
    /// Trie edges traversed by lookups, inserts and iteration.
    pub trie_edges: u64,
    /// Multiplications in the scalar ring.
    pub ring_muls: u64,
    /// Filter lookups performed by the product algorithm.
    pub lookups: u64,
}

impl Add for Metrics {
    type Output = Metrics;

    fn add(self, o: Metrics) -> Metrics {
        Metrics {
            trie_edges: self.trie_edges + o.trie_edges,
            ring_muls: self.ring_muls + o.ring_muls,
            lookups: self.lookups + o.lookups,
        }
    }
}

impl AddAssign for Metrics {
    fn add_assign(&mut self, o: Metrics) {
        *self = *self + o;
    }
}

/// One scheduling decision of the product algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratorChoice {
    /// Nesting depth of the map level (0 = outermost attribute).
    pub depth: usize,
    /// Component count of every factor: explicit keys plus one for a baseline.
    pub components: Vec<usize>,
    /// Whether each factor has a nonzero baseline.
    pub has_baseline: Vec<bool>,
    /// Index of the factor that was enumerated.
    pub chosen: usize,
}

thread_local! {
    static EDGES: Cell<u64> = const { Cell::new(0) };
    static MULS: Cell<u64> = const { Cell::new(0) };
    static LOOKUPS: Cell<u64> = const { Cell::new(0) };
    static TRACE: RefCell<Option<Vec<EnumeratorChoice>>> = const { RefCell::new(None) };
}

#[inline]
pub(crate) fn edges(n: u64) {
    EDGES.with(|c| c.set(c.get() + n));
}

#[inline]
pub(crate) fn ring_mul() {
    MULS.with(|c| c.set(c.get() + 1));
}

#[inline]
pub(crate) fn lookup() {
    LOOKUPS.with(|c| c.set(c.get() + 1));
}

pub(crate) fn tracing() -> bool {
    TRACE.with(|t| t.borrow().is_some())
}

pub(crate) fn record(choice: EnumeratorChoice) {
    TRACE.with(|t| {
        if let Some(v) = t.borrow_mut().as_mut() {
            v.push(choice);
        }
    });
}

/// Current counter values on this thread.
pub fn snapshot() -> Metrics {
    Metrics {
        trie_edges: EDGES.with(Cell::get),
        ring_muls: MULS.with(Cell::get),
        lookups: LOOKUPS.with(Cell::get),
    }
}

/// Runs `f` and returns its result with the work it did on this thread.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, Metrics) {
    let before = snapshot();
    let r = f();
    let after = snapshot();
    let delta = Metrics {
        trie_edges: after.trie_edges - before.trie_edges,
        ring_muls: after.ring_muls - before.ring_muls,
        lookups: after.lookups - before.lookups,
    };
    (r, delta)
}

/// Runs `f` while recording every enumerator choice made on this thread.
pub fn trace<R>(f: impl FnOnce() -> R) -> (R, Vec<EnumeratorChoice>) {
    let saved = TRACE.with(|t| t.borrow_mut().replace(Vec::new()));
    let r = f();
    let log = TRACE.with(|t| std::mem::replace(&mut *t.borrow_mut(), saved));
    (r, log.unwrap_or_default())
}
