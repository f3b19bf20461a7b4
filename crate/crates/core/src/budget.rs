use crate::error::{Error, Result};

/// Limits on exponential searches.
///
/// `search` bounds unconstrained morphism and isomorphism searches: the
/// product of domain and codomain sizes must not exceed `search * search`.
/// `nodes` bounds the number of search nodes any single search may visit,
/// and `carrier` bounds the size of multirings built or validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub search: usize,
    pub nodes: u64,
    pub carrier: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            search: 12,
            nodes: 20_000_000,
            carrier: 64,
        }
    }
}

impl Budget {
    pub fn with_search(search: usize) -> Self {
        Budget {
            search,
            ..Budget::default()
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            search: usize::MAX >> 33,
            nodes: u64::MAX,
            carrier: usize::MAX >> 1,
        }
    }

    pub(crate) fn check_search(&self, what: &str, left: usize, right: usize) -> Result<()> {
        if left.saturating_mul(right) > self.search.saturating_mul(self.search) {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                detail: format!("{left}x{right} exceeds {}^2", self.search),
            });
        }
        Ok(())
    }

    pub(crate) fn check_carrier(&self, what: &str, size: usize) -> Result<()> {
        if size > self.carrier {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                detail: format!("{size} elements exceeds {}", self.carrier),
            });
        }
        Ok(())
    }
}
