//! Relations on small finite domains that are disjunctions of unary
//! membership conditions ("crosses"), the pattern vectors they induce, and
//! the downsets of pattern vectors under the support-preserving order.
//!
//! The crate also ships a brute-force polymorphism layer: enumerate every
//! operation table up to a bounded arity, filter the tables that preserve a
//! set of relations, and compare the resulting bounded clones. Pattern
//! downset inclusion yields one-sided certificates for clone inclusion; the
//! brute-force layer probes the converse direction and produces explicit
//! counterexample tables when an inclusion fails.
//!
//! Everything is exact and deterministic. Enumerations that could blow up
//! (relation expansion, operation tables, preservation scans, downset
//! enumeration) are guarded by an explicit [`Budget`].
//!
//! The crate is `no_std` compatible; it only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod cloneorder;
pub mod downsets;
pub mod patterns;
pub mod polymorph;
pub mod relations;

use core::fmt;

/// Limits for the enumerations the library is willing to run.
///
/// All limits are inclusive: work is refused only when the predicted size
/// strictly exceeds the corresponding field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest tuple universe `|A|^n` a relation expansion may walk.
    pub max_relation_tuples: u128,
    /// Largest number of operation tables `|A|^(|A|^k)` an enumeration may
    /// produce.
    pub max_operation_tables: u128,
    /// Largest number of tuple selections `|R|^k` a single preservation
    /// check may scan.
    pub max_selections: u128,
    /// Largest number of downsets a box enumeration may materialize, and
    /// the largest intermediate count a counting recursion may reach.
    pub max_downsets: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_relation_tuples: 1 << 20,
            max_operation_tables: 1 << 20,
            max_selections: 1 << 26,
            max_downsets: 1 << 20,
        }
    }
}

impl Budget {
    /// Checks a predicted amount of work against one of the limits.
    ///
    /// `needed` of `None` means the prediction already overflowed `u128` and
    /// is treated as larger than any limit.
    pub(crate) fn check(
        &self,
        what: &'static str,
        needed: Option<u128>,
        limit: u128,
    ) -> Result<u128, Error> {
        match needed {
            Some(n) if n <= limit => Ok(n),
            Some(n) => Err(Error::BudgetExceeded {
                what,
                needed: Some(n),
                limit,
            }),
            None => Err(Error::BudgetExceeded {
                what,
                needed: None,
                limit,
            }),
        }
    }
}

/// Errors reported by the library.
///
/// `BudgetExceeded` is the only resource error; every other variant is a
/// semantic problem with the inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Domains must have at least one element.
    EmptyDomain,
    /// Domains are capped at 64 elements so subsets fit in a machine word.
    DomainTooLarge { size: usize },
    /// An element does not belong to the domain.
    ElementOutOfRange { element: usize, size: usize },
    /// Two unary relations in a language share a name.
    DuplicateGammaName,
    /// Two unary relations in a language have the same extension.
    DuplicateGammaExtension { first: usize, second: usize },
    /// Languages are capped at 64 unary relations so supports fit in a
    /// machine word.
    TooManyGammas { count: usize },
    /// A parameter index does not refer to a unary relation of the language.
    UnknownGamma { index: usize, count: usize },
    /// A cross needs at least one parameter.
    EmptyParameterList,
    /// Relations have arity at least one.
    ZeroArity,
    /// A tuple has the wrong length for its relation.
    TupleLengthMismatch { expected: usize, found: usize },
    /// The full relation is a cross only when the language contains the
    /// full unary relation.
    FullCrossOutsideLanguage,
    /// The input to a decomposition is not a downward closed subset of the
    /// box.
    NotADownset,
    /// The chain construction needs a unary relation that is neither empty
    /// nor the whole domain.
    TrivialGamma { index: usize },
    /// Chain levels start at two; level one has no predecessor to separate
    /// from.
    ChainTooShort { level: usize },
    /// A predicted enumeration size exceeds the configured budget. A
    /// `needed` of `None` means the prediction overflowed `u128`.
    BudgetExceeded {
        what: &'static str,
        needed: Option<u128>,
        limit: u128,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyDomain => write!(f, "domain must have at least one element"),
            Error::DomainTooLarge { size } => {
                write!(f, "domain size {size} exceeds the supported maximum of 64")
            }
            Error::ElementOutOfRange { element, size } => {
                write!(f, "element {element} out of range for domain of size {size}")
            }
            Error::DuplicateGammaName => write!(f, "duplicate unary relation name"),
            Error::DuplicateGammaExtension { first, second } => write!(
                f,
                "unary relations {first} and {second} have identical extensions"
            ),
            Error::TooManyGammas { count } => {
                write!(f, "a language holds at most 64 unary relations, got {count}")
            }
            Error::UnknownGamma { index, count } => {
                write!(f, "unary relation index {index} out of range ({count} defined)")
            }
            Error::EmptyParameterList => write!(f, "a cross needs at least one parameter"),
            Error::ZeroArity => write!(f, "relations must have arity at least one"),
            Error::TupleLengthMismatch { expected, found } => {
                write!(f, "expected tuples of length {expected}, found length {found}")
            }
            Error::FullCrossOutsideLanguage => write!(
                f,
                "the full relation is a cross only when the language contains the full unary relation"
            ),
            Error::NotADownset => write!(f, "input set is not downward closed within the box"),
            Error::TrivialGamma { index } => write!(
                f,
                "unary relation {index} is empty or full; the chain needs a proper nonempty one"
            ),
            Error::ChainTooShort { level } => {
                write!(f, "chain level {level} is below the minimum of 2")
            }
            Error::BudgetExceeded {
                what,
                needed: Some(needed),
                limit,
            } => write!(f, "{what} budget exceeded: needed {needed}, limit {limit}"),
            Error::BudgetExceeded {
                what,
                needed: None,
                limit,
            } => write!(f, "{what} budget exceeded: size overflows, limit {limit}"),
        }
    }
}

impl core::error::Error for Error {}
