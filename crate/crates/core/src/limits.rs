//! Resource caps. Exceeding a cap is reported as
//! [`Error::ResourceExceeded`](crate::Error::ResourceExceeded).
//!
//! The process-wide values can be changed with the `set_*` functions; the
//! `with_*` functions install a temporary override for the current thread only.

use std::cell::Cell;
use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_MAX_STATES: usize = 10_000;
pub const DEFAULT_MAX_CARRIER: usize = 4096;

static MAX_STATES: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_STATES);
static MAX_CARRIER: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_CARRIER);

thread_local! {
    static LOCAL_STATES: Cell<Option<usize>> = const { Cell::new(None) };
    static LOCAL_CARRIER: Cell<Option<usize>> = const { Cell::new(None) };
}

/// Largest number of automaton states any single construction may create.
pub fn max_states() -> usize {
    LOCAL_STATES.with(Cell::get).unwrap_or_else(|| MAX_STATES.load(Ordering::Relaxed))
}

pub fn set_max_states(n: usize) {
    MAX_STATES.store(n.max(1), Ordering::Relaxed);
}

/// Largest carrier of any enumerated finite algebra.
pub fn max_carrier() -> usize {
    LOCAL_CARRIER.with(Cell::get).unwrap_or_else(|| MAX_CARRIER.load(Ordering::Relaxed))
}

pub fn set_max_carrier(n: usize) {
    MAX_CARRIER.store(n.max(1), Ordering::Relaxed);
}

fn scoped<R>(key: &'static std::thread::LocalKey<Cell<Option<usize>>>, n: usize, f: impl FnOnce() -> R) -> R {
    struct Restore(&'static std::thread::LocalKey<Cell<Option<usize>>>, Option<usize>);
    impl Drop for Restore {
        fn drop(&mut self) {
            self.0.with(|c| c.set(self.1));
        }
    }
    let _restore = Restore(key, key.with(|c| c.replace(Some(n.max(1)))));
    f()
}

pub fn with_max_states<R>(n: usize, f: impl FnOnce() -> R) -> R {
    scoped(&LOCAL_STATES, n, f)
}

pub fn with_max_carrier<R>(n: usize, f: impl FnOnce() -> R) -> R {
    scoped(&LOCAL_CARRIER, n, f)
}

pub(crate) fn check_states(n: usize) -> crate::Result<()> {
    let limit = max_states();
    if n > limit {
        return Err(crate::Error::ResourceExceeded { what: "automaton state count", limit });
    }
    Ok(())
}

pub(crate) fn check_carrier(n: usize) -> crate::Result<()> {
    let limit = max_carrier();
    if n > limit {
        return Err(crate::Error::ResourceExceeded { what: "carrier size", limit });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_is_scoped() {
        let outer = max_carrier();
        with_max_carrier(7, || {
            assert_eq!(max_carrier(), 7);
            assert!(check_carrier(8).is_err());
        });
        assert_eq!(max_carrier(), outer);
    }
}
