//! Enumeration caps. Every exhaustive routine checks its search size against
//! one of these before starting.

use std::env;

use num_bigint::BigUint;

use crate::error::{Error, Result};

pub const ENV_ENUMERATION: &str = "MISLAB_ENUM_CAP";
pub const ENV_CFF_CHECK: &str = "MISLAB_CFF_CAP";
pub const ENV_GRAPH_PAIRS: &str = "MISLAB_PAIR_CAP";
pub const ENV_EXACT_SEARCH: &str = "MISLAB_SEARCH_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Members of an adversarial family.
    pub enumeration: u64,
    /// `(A, B)` selections examined by the cover-free checker.
    pub cff_check: u64,
    /// Unordered graph pairs examined by the query-scheme checker.
    pub graph_pairs: u64,
    /// Candidate families examined by the minimal-ground-size search.
    pub exact_search: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 1_000_000,
            cff_check: 10_000_000,
            graph_pairs: 500_000_000,
            exact_search: 1_000_000_000,
        }
    }
}

impl Caps {
    /// Defaults, overridden by the `MISLAB_*_CAP` environment variables.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        for (var, slot) in [
            (ENV_ENUMERATION, &mut caps.enumeration),
            (ENV_CFF_CHECK, &mut caps.cff_check),
            (ENV_GRAPH_PAIRS, &mut caps.graph_pairs),
            (ENV_EXACT_SEARCH, &mut caps.exact_search),
        ] {
            if let Ok(raw) = env::var(var) {
                let value: u64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("{var}={raw:?} is not a positive integer")))?;
                if value == 0 {
                    return Err(Error::invalid(format!("{var} must be positive")));
                }
                *slot = value;
            }
        }
        Ok(caps)
    }
}

pub(crate) fn check_cap(what: &'static str, required: &BigUint, cap: u64) -> Result<()> {
    if *required > BigUint::from(cap) {
        Err(Error::CapExceeded {
            what,
            required: required.to_string(),
            cap,
        })
    } else {
        Ok(())
    }
}
