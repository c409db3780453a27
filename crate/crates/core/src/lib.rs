//! W-types with reductions over finite data.
//!
//! Three independent constructions of the initial algebra of a pointed
//! polynomial endofunctor: a classical one by closed sets ([`classical`]),
//! one by a partial equivalence relation over cover-indexed terms ([`per`]),
//! and normal forms in diagram categories ([`presheaf`]). The [`awfs`]
//! module uses them to build free factorizations from generating families.

pub mod error;
pub mod fin;
pub mod fixtures;
pub mod poly;
pub mod classical;
pub mod per;
pub mod prescat;
pub mod presheaf;
pub mod awfs;
pub mod cli;

pub use error::{Error, Result};

/// Bounds on enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_depth: usize,
    pub max_count: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 16,
            max_count: 100_000,
        }
    }
}

/// Whether an enumeration reached a fixpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Finite,
    /// Stopped by the budget; `depth` complete levels were computed.
    Truncated { depth: usize },
}

impl Status {
    pub fn is_finite(self) -> bool {
        self == Status::Finite
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Finite => f.write_str("Finite"),
            Status::Truncated { depth } => write!(f, "Truncated({depth})"),
        }
    }
}
