//! Galerkin-truncated incompressible Navier–Stokes on the periodic box,
//! integrated in Fourier space:
//!
//! ```text
//! du/dt + A u + B(u,u) = 0,      A ↦ |k|²,   B(u,v) = Π[(u·∇)v],
//! ```
//!
//! truncated to the cube lattice of `spectral-core`. Two nonlinear backends
//! serve as mutual oracles: an exact truncated convolution (`direct`) and a
//! dealiased pseudo-spectral product (`fast`). The viscous part is advanced
//! exactly by the per-mode integrating factor `e^{−|k|² dt}`.

mod direct;
mod integrate;
mod transform;

pub use direct::{bilinear_direct, nonlinear_term_direct, trilinear_form_direct};
pub use integrate::{
    ledger_violation, run, IntegratorSpec, LedgerRow, RunResult, Scheme, SolverState, Stepper,
    BLOWUP_THRESHOLD, LEDGER_SLACK,
};
pub use transform::FourierWorkspace;

use spectral_core::{Complex64, SpectralField};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    /// A coefficient left the finite range or the L² norm passed the
    /// blow-up threshold. Galerkin trajectories with ν = 1 are globally
    /// regular in exact arithmetic; this signal is an upper-scale proxy for
    /// the paper-level T*, not a statement about the true solution.
    #[error("numerical blow-up signalled at t = {last_finite_t}")]
    BlowUp {
        last_finite_t: f64,
        last_state: Box<SolverState>,
    },

    #[error("vorticity/velocity mismatch: relative residual {0:.3e}")]
    VorticityMismatch(f64),

    #[error("invalid integrator spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Spectral(#[from] spectral_core::SpectralError),
}

pub type Result<T> = std::result::Result<T, SolverError>;

/// Relative tolerance for accepting `ω` as the curl of `u`.
pub const VORTICITY_CONSISTENCY_TOL: f64 = 1e-6;

/// Convenience wrapper over [`FourierWorkspace::nonlinear_term`] that builds
/// a fresh workspace. For repeated evaluation construct the workspace once.
pub fn nonlinear_term_fast(u: &SpectralField, dealias: bool) -> SpectralField {
    let mut ws = FourierWorkspace::new(u.grid(), dealias);
    ws.nonlinear_term(u)
}

/// Right side of the vorticity equation, `−Aω − B(u,ω) + B(ω,u)`, with both
/// bilinear terms evaluated through `ws`. Errors if `ω` is not the curl of
/// `u` within [`VORTICITY_CONSISTENCY_TOL`].
///
/// Taking the curl of the velocity right side `−Au − B(u,u)` reproduces this
/// field mode by mode, which the tests use as a consistency oracle.
pub fn vorticity_rhs(
    u: &SpectralField,
    omega: &SpectralField,
    ws: &mut FourierWorkspace,
) -> Result<SpectralField> {
    let curl_u = u.curl();
    let scale = curl_u.l2_norm();
    let mismatch = omega.sub_field(&curl_u).l2_norm();
    if scale > 0.0 && mismatch > VORTICITY_CONSISTENCY_TOL * scale {
        return Err(SolverError::VorticityMismatch(mismatch / scale));
    }
    if scale == 0.0 && mismatch > 0.0 {
        return Err(SolverError::VorticityMismatch(f64::INFINITY));
    }

    let (b_u_omega, b_omega_u) = ws.bilinear_pair(u, omega);
    let mut rhs = omega
        .apply_multiplier(|x| -(x * x))
        .expect("Stokes multiplier is finite on the lattice");
    rhs.axpy(-1.0, &b_u_omega);
    rhs.axpy(1.0, &b_omega_u);
    Ok(rhs)
}

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
