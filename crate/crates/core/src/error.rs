use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument outside the operation's domain of definition
    /// (composite `p`, `D` not prime to `p`, mismatched primes, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A mathematically meaningful request this toolkit deliberately does not
    /// handle, e.g. half-Tate twists when `p` is not 1 mod 4.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A value outside the subset where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("work budget exceeded: {what} needs {requested}, limit is {limit}")]
    Budget {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    /// Character table data that violates one or more structural invariants.
    #[error("character table rejected: {}", .0.join("; "))]
    TableIntegrity(Vec<String>),
}
