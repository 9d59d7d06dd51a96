use alloc::string::String;

/// Failures of the symbolic layer.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative power on non-x2 atom (at {pos})")]
    NegativePower { pos: usize },
    #[error("pinv2 not in leading position (at {pos})")]
    PinvNotLeading { pos: usize },
    #[error("p-inverse ordering violation")]
    OrderingViolation,
    #[error("non-commuting residue under p²")]
    NonCommutingResidue,
    #[error("unverifiable Q22 structure")]
    UnverifiableQ22,
}
