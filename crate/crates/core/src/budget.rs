use serde::{Deserialize, Serialize};

use crate::error::CheckError;
use crate::rewrite::ReductionBudget;

/// Search limits shared by the closure-based orderings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    pub max_search_depth: usize,
    pub max_red_steps: usize,
    pub max_term_size_slack: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_search_depth: 12, max_red_steps: 4, max_term_size_slack: 6 }
    }
}

impl Budget {
    pub fn new(max_search_depth: usize, max_red_steps: usize, max_term_size_slack: usize) -> Result<Self, CheckError> {
        let b = Budget { max_search_depth, max_red_steps, max_term_size_slack };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), CheckError> {
        if self.max_search_depth == 0 || self.max_red_steps == 0 || self.max_term_size_slack == 0 {
            return Err(CheckError::Budget);
        }
        Ok(())
    }

    pub fn scaled(&self, k: usize) -> Budget {
        Budget {
            max_search_depth: self.max_search_depth * k,
            max_red_steps: self.max_red_steps * k,
            max_term_size_slack: self.max_term_size_slack * k,
        }
    }

    /// Reduction limits for terms around `base_size` nodes.
    pub fn reduction(&self, base_size: usize) -> ReductionBudget {
        ReductionBudget { max_steps: self.max_red_steps, max_term_size: base_size + self.max_term_size_slack }
    }
}
