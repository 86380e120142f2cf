use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SpectralError {
    #[error("grid cutoff {0} outside supported range 1..={max}", max = crate::MAX_CUTOFF)]
    CutoffOutOfRange(u32),

    #[error("grid mismatch: cutoff {0} vs {1}")]
    GridMismatch(u32, u32),

    #[error("multiplier produced a non-finite value at |k| = {shell:.3}")]
    MultiplierOverflow { shell: f64 },

    #[error("norm overflows f64 range (log₂ magnitude ≈ {log2_magnitude:.0})")]
    NormOverflow { log2_magnitude: f64 },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid field data: {0}")]
    InvalidField(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for SpectralError {
    fn from(e: std::io::Error) -> Self {
        SpectralError::Io(e.to_string())
    }
}
