//! Certified numerics: complex disk arithmetic with exact rational centers
//! and radii, rational enclosures of elementary real constants, and certified
//! univariate root isolation.
//!
//! The guiding rule is that every box produced here *provably contains* the
//! mathematical value it stands for; precision parameters only control how
//! tight the enclosure is, never its correctness.

pub mod cbox;
pub mod real;
pub mod roots;

pub use cbox::CBox;
pub use roots::{isolate_roots, RootBox, UniPoly};

use core::fmt;

/// Failures of the certified-numerics layer.  All of them mean "the requested
/// enclosure could not be certified", typically cured by a retry at higher
/// precision — which callers in this crate do automatically up to a cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericError {
    /// The internal precision ladder hit its cap without certifying a result.
    PrecisionExceeded,
    /// A divisor or modulus could not be bounded away from zero.
    UncertainZero,
    /// A square root or logarithm operand straddles the branch cut.
    BranchCut,
    /// An input lies outside the validated domain of a series expansion.
    NotInDomain,
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::PrecisionExceeded => {
                write!(f, "precision cap reached before the enclosure was certified")
            }
            NumericError::UncertainZero => {
                write!(f, "cannot bound a divisor away from zero at this precision")
            }
            NumericError::BranchCut => {
                write!(f, "operand box straddles a branch cut")
            }
            NumericError::NotInDomain => {
                write!(f, "operand box leaves the validated domain of the expansion")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NumericError {}
