//! Enumeration budgets.

use std::fmt::Display;

use crate::error::{Error, Result};

/// Environment variable that overrides [`Budget::DEFAULT`].
pub const BUDGET_ENV: &str = "GADGETFORGE_BUDGET";

/// Upper bound on the number of elementary steps an exhaustive oracle may
/// take before refusing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(1 << 28);

    /// Reads `GADGETFORGE_BUDGET`, falling back to the default.
    pub fn from_env() -> Budget {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map_or(Budget::DEFAULT, Budget)
    }

    pub fn unlimited() -> Budget {
        Budget(u64::MAX)
    }

    pub fn limit(self) -> u64 {
        self.0
    }

    pub fn allows(self, cost: u128) -> bool {
        cost <= self.0 as u128
    }

    pub fn check(self, what: &str, cost: impl Display + TryInto<u128> + Copy) -> Result<()> {
        let fits = cost.try_into().map(|c| self.allows(c)).unwrap_or(false);
        if fits {
            Ok(())
        } else {
            Err(self.exceeded(what, cost))
        }
    }

    pub fn exceeded(self, what: &str, needed: impl Display) -> Error {
        Error::BudgetExceeded {
            what: what.to_string(),
            needed: needed.to_string(),
            budget: self.0,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}
