use alloc::string::String;

use crate::poly::Var;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid index tuple: {0}")]
    InvalidTuple(String),
    #[error("({j},{k}) is not in JK(P)")]
    InvalidPair { j: u32, k: u32 },
    #[error("unknown label {0}")]
    InvalidLabel(String),
    #[error("unbound variable {0}")]
    UnboundVariable(Var),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("empty leading-term set for ({j},{k})")]
    EmptyRelation { j: u32, k: u32 },
    #[error("solving order has a cycle through ({j},{k})")]
    PartialOrderViolation { j: u32, k: u32 },
    #[error("assignment domain mismatch: {0}")]
    AssignmentDomain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}
