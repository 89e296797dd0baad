//! Run-scoped operation counting.
//!
//! A [`Context`] carries the multiplication tuning knobs and an
//! [`OpCounter`] through a single computation. Counters use interior
//! mutability and are deliberately `!Sync`: each run owns its own.

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::time::Instant;

/// Default length at which truncated multiplication switches to Karatsuba.
pub const DEFAULT_KARATSUBA_THRESHOLD: usize = 32;

/// Default smallest matrix dimension handled by Strassen recursion.
pub const DEFAULT_STRASSEN_THRESHOLD: usize = 256;

/// Which phase a polynomial multiplication belongs to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MulTag {
    #[default]
    Main,
    /// Multiplications inside a series reciprocal.
    Reciprocal,
}

#[derive(Debug, Default)]
pub struct OpCounter {
    enabled: bool,
    tag: Cell<MulTag>,
    poly: RefCell<BTreeMap<(MulTag, usize), u64>>,
    scalar: Cell<u64>,
    matrix_ns: Cell<u64>,
}

impl OpCounter {
    pub fn new(enabled: bool) -> Self {
        Self {
            enabled,
            ..Self::default()
        }
    }

    pub fn enabled(&self) -> bool {
        self.enabled
    }

    pub(crate) fn record_poly_mul(&self, len: usize) {
        if self.enabled {
            *self.poly.borrow_mut().entry((self.tag.get(), len)).or_insert(0) += 1;
        }
    }

    pub(crate) fn record_scalar_muls(&self, count: u64) {
        if self.enabled {
            self.scalar.set(self.scalar.get() + count);
        }
    }

    /// Runs `f` with every polynomial multiplication attributed to `tag`.
    pub fn with_tag<T>(&self, tag: MulTag, f: impl FnOnce() -> T) -> T {
        let prev = self.tag.replace(tag);
        let out = f();
        self.tag.set(prev);
        out
    }

    /// Runs `f` and adds its wall time to the matrix-time total.
    pub fn time_matrix<T>(&self, f: impl FnOnce() -> T) -> T {
        if !self.enabled {
            return f();
        }
        let start = Instant::now();
        let out = f();
        let ns = start.elapsed().as_nanos() as u64;
        self.matrix_ns.set(self.matrix_ns.get() + ns);
        out
    }

    /// Number of truncated multiplications carrying `tag`, at any length.
    pub fn poly_mul_count(&self, tag: MulTag) -> u64 {
        self.poly
            .borrow()
            .iter()
            .filter(|((t, _), _)| *t == tag)
            .map(|(_, c)| *c)
            .sum()
    }

    /// Number of truncated multiplications carrying `tag` at exactly `len`.
    pub fn poly_mul_count_at(&self, tag: MulTag, len: usize) -> u64 {
        self.poly.borrow().get(&(tag, len)).copied().unwrap_or(0)
    }

    /// All `(tag, length) -> count` entries in ascending order.
    pub fn poly_muls(&self) -> Vec<((MulTag, usize), u64)> {
        self.poly.borrow().iter().map(|(k, v)| (*k, *v)).collect()
    }

    pub fn scalar_mul_count(&self) -> u64 {
        self.scalar.get()
    }

    pub fn matrix_ns(&self) -> u64 {
        self.matrix_ns.get()
    }
}

/// Tuning knobs plus the counter for one computation.
#[derive(Debug)]
pub struct Context {
    pub karatsuba_threshold: usize,
    pub strassen_threshold: usize,
    pub counter: OpCounter,
}

impl Context {
    pub fn new(karatsuba_threshold: usize, instrument: bool) -> Self {
        Self {
            karatsuba_threshold,
            strassen_threshold: DEFAULT_STRASSEN_THRESHOLD,
            counter: OpCounter::new(instrument),
        }
    }

    pub fn instrumented() -> Self {
        Self::new(DEFAULT_KARATSUBA_THRESHOLD, true)
    }
}

impl Default for Context {
    fn default() -> Self {
        Self::new(DEFAULT_KARATSUBA_THRESHOLD, false)
    }
}
