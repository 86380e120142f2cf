//! Fourier-side arithmetic for mean-free, real vector fields on the periodic
//! box `[0, 2π]³` in dimensionless units (`ν = 1`, `κ₀ = 1`).
//!
//! Fields are stored as truncated Fourier coefficient cubes. All norms and
//! inner products use the convention
//!
//! ```text
//! ⟨u, v⟩ = Σ_k û(k)·conj(v̂(k)),     ‖u‖²_{L²} = Σ_k |û(k)|²,
//! ```
//!
//! i.e. the `(2π)³` volume factor is dropped uniformly. Everything downstream
//! (solver, diagnostics, bound calculus) is scale-consistent under this
//! convention; changing it would only rescale implied constants.
//!
//! The Stokes operator acts as the multiplier `|k|²` on divergence-free
//! fields, `e^{αA^{θ/2}}` as `e^{α|k|^θ}`, and the Leray projection removes
//! the component of `û(k)` parallel to `k`.

mod error;
mod field;
mod grid;
mod io;
mod norm;
mod weight;

pub use error::SpectralError;
pub use field::SpectralField;
pub use grid::{Wavevector, WavevectorGrid, MAX_CUTOFF};
pub use io::{field_from_json, field_to_json, read_field, write_field};
pub use norm::{gevrey_norm, inner_product, kahan::KahanSum, sobolev_norm, wiener_norm};
pub use weight::{GevreyWeight, TimeVaryingWeight};

pub type Complex64 = num_complex::Complex<f64>;

/// Convenience alias used throughout the workspace.
pub type Result<T> = std::result::Result<T, SpectralError>;
