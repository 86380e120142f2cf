//! Time integration of the truncated functional NSE.
//!
//! Schemes and their stability budgets (dt·N² is the viscous scale number):
//!
//! * `IntegratingFactorRk4` — the stiff viscous part is advanced exactly by
//!   `e^{−|k|² dt}` per mode; the nonlinear term by classical RK4 on the
//!   transformed variable. Accuracy O(dt⁴); the step is limited only by the
//!   advective CFL (dt ≲ 1/(N·max|u|)), so dt·N² well above 1 is stable for
//!   desk-scale amplitudes.
//! * `ImexEuler` — backward Euler on the viscous part, forward Euler on the
//!   nonlinear term: `û⁺ = (û − dt B̂)/(1 + |k|² dt)`. Unconditionally
//!   stable in the stiff part but first-order; cross-check scheme only.
//!
//! The default `dt = 0.1/N²` resolves the fastest retained viscous mode;
//! [`run`] halves it (up to [`MAX_HALVINGS`] times) whenever the discrete
//! Leray energy ledger is violated by more than [`LEDGER_SLACK`].

use spectral_core::{SpectralField, WavevectorGrid};

use crate::transform::FourierWorkspace;
use crate::{Result, SolverError};

/// Numerical blow-up proxy: declared when the L² norm exceeds this or any
/// coefficient stops being finite. The paper-level T* concerns the true
/// solution; this signal is only an upper-scale numeric guard.
pub const BLOWUP_THRESHOLD: f64 = 1e12;

/// Relative slack allowed in the discrete Leray energy inequality.
pub const LEDGER_SLACK: f64 = 1e-6;

const MAX_HALVINGS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    IntegratingFactorRk4,
    ImexEuler,
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorSpec {
    pub dt: f64,
    pub scheme: Scheme,
    pub dealias: bool,
}

impl IntegratorSpec {
    /// Default viscous-scale step for cutoff `N`.
    pub fn default_for(n: u32) -> Self {
        IntegratorSpec {
            dt: 0.1 / (n as f64 * n as f64),
            scheme: Scheme::IntegratingFactorRk4,
            dealias: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(SolverError::InvalidSpec(format!("dt = {}", self.dt)));
        }
        Ok(())
    }
}

/// A point on a Galerkin trajectory (dimensionless time, ν = 1 units).
#[derive(Debug, Clone)]
pub struct SolverState {
    pub t: f64,
    pub u: SpectralField,
}

/// Per-step energy accounting: `energy = ‖u‖²_{L²}`,
/// `enstrophy = ‖∇u‖²_{L²} = Σ|k|²|û|²`.
#[derive(Debug, Clone, Copy)]
pub struct LedgerRow {
    pub t: f64,
    pub energy: f64,
    pub enstrophy: f64,
}

/// Reusable stepper: FFT workspace plus cached per-mode viscous factors.
pub struct Stepper {
    spec: IntegratorSpec,
    ws: FourierWorkspace,
    exp_half: Vec<f64>,
    exp_full: Vec<f64>,
    imex_div: Vec<f64>,
}

impl Stepper {
    pub fn new(grid: WavevectorGrid, spec: IntegratorSpec) -> Result<Self> {
        spec.validate()?;
        let len = grid.side().pow(3);
        let mut exp_half = vec![0.0; len];
        let mut exp_full = vec![0.0; len];
        let mut imex_div = vec![0.0; len];
        for i in 0..len {
            let ksq = grid.wavevector_at(i).norm_sq() as f64;
            exp_half[i] = (-ksq * spec.dt / 2.0).exp();
            exp_full[i] = (-ksq * spec.dt).exp();
            imex_div[i] = 1.0 / (1.0 + ksq * spec.dt);
        }
        Ok(Stepper {
            spec,
            ws: FourierWorkspace::new(grid, spec.dealias),
            exp_half,
            exp_full,
            imex_div,
        })
    }

    pub fn spec(&self) -> IntegratorSpec {
        self.spec
    }

    fn check_finite(&self, state: &SolverState, previous: &SolverState) -> Result<()> {
        if !state.u.is_finite() || state.u.l2_norm() > BLOWUP_THRESHOLD {
            return Err(SolverError::BlowUp {
                last_finite_t: previous.t,
                last_state: Box::new(previous.clone()),
            });
        }
        Ok(())
    }

    /// Advance one step of `dt`. On blow-up the last finite state is
    /// carried in the error.
    pub fn step(&mut self, state: &SolverState) -> Result<SolverState> {
        let dt = self.spec.dt;
        let next = match self.spec.scheme {
            Scheme::IntegratingFactorRk4 => {
                // Lawson RK4 on v = e^{tA}u; E = e^{−A dt/2}.
                let u = &state.u;
                let k1 = self.nonlinear_rhs(u);

                let mut a = u.clone();
                a.axpy(dt / 2.0, &k1);
                a.mul_diag(&self.exp_half);
                let k2 = self.nonlinear_rhs(&a);

                let mut b = u.clone();
                b.mul_diag(&self.exp_half);
                b.axpy(dt / 2.0, &k2);
                let k3 = self.nonlinear_rhs(&b);

                let mut c = u.clone();
                c.mul_diag(&self.exp_full);
                let mut k3e = k3.clone();
                k3e.mul_diag(&self.exp_half);
                c.axpy(dt, &k3e);
                let k4 = self.nonlinear_rhs(&c);

                let mut acc = k1;
                acc.mul_diag(&self.exp_full); // E² k1
                let mut mid = k2;
                mid.axpy(1.0, &k3);
                mid.mul_diag(&self.exp_half); // E (k2 + k3)
                acc.axpy(2.0, &mid);
                acc.axpy(1.0, &k4);

                let mut u_next = state.u.clone();
                u_next.mul_diag(&self.exp_full);
                u_next.axpy(dt / 6.0, &acc);
                SolverState {
                    t: state.t + dt,
                    u: u_next,
                }
            }
            Scheme::ImexEuler => {
                let mut u_next = state.u.clone();
                let b = self.ws.nonlinear_term(&state.u);
                u_next.axpy(-dt, &b);
                u_next.mul_diag(&self.imex_div);
                SolverState {
                    t: state.t + dt,
                    u: u_next,
                }
            }
        };
        self.check_finite(&next, state)?;
        Ok(next)
    }

    /// `N(u) = −B(u,u)`.
    fn nonlinear_rhs(&mut self, u: &SpectralField) -> SpectralField {
        let mut b = self.ws.nonlinear_term(u);
        b.scale(-1.0);
        b
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BlowupSignal {
    pub last_finite_t: f64,
}

#[derive(Debug)]
pub struct RunResult {
    /// Ordered snapshots, always including t = 0 and the final time reached.
    pub snapshots: Vec<SolverState>,
    /// One row per step (plus t = 0); the Leray ledger source.
    pub ledger: Vec<LedgerRow>,
    pub blowup: Option<BlowupSignal>,
    /// Step actually used after any ledger-driven halving.
    pub dt_used: f64,
    pub halvings: u32,
}

fn ledger_row(t: f64, u: &SpectralField) -> LedgerRow {
    LedgerRow {
        t,
        energy: u.l2_norm_sq(),
        enstrophy: u.h1_norm_sq(),
    }
}

/// Worst relative excess of `‖u(t)‖² + 2∫₀ᵗ‖∇u‖²` over `‖u⁰‖²`, the
/// trapezoid rule supplying the integral. Non-positive when the discrete
/// Leray inequality holds exactly.
pub fn ledger_violation(ledger: &[LedgerRow]) -> f64 {
    if ledger.is_empty() {
        return 0.0;
    }
    let e0 = ledger[0].energy;
    if e0 == 0.0 {
        return 0.0;
    }
    let mut integral = 0.0;
    let mut worst = (ledger[0].energy - e0) / e0;
    for w in ledger.windows(2) {
        integral += 0.5 * (w[1].t - w[0].t) * (w[0].enstrophy + w[1].enstrophy);
        worst = worst.max((w[1].energy + 2.0 * integral - e0) / e0);
    }
    worst
}

/// Integrate from `u0` to `tmax`, sampling every `sample_every` steps.
///
/// The step count is `ceil(tmax/dt)` with the step stretched to land exactly
/// on `tmax`; doubling `dt` therefore halves the snapshot count. If the
/// energy ledger closes worse than [`LEDGER_SLACK`], the run is repeated
/// with dt halved (at most [`MAX_HALVINGS`] times). Blow-up truncates the
/// series and is reported in the result rather than as an error.
pub fn run(
    u0: &SpectralField,
    tmax: f64,
    spec: IntegratorSpec,
    sample_every: usize,
) -> Result<RunResult> {
    spec.validate()?;
    if !(tmax >= 0.0) {
        return Err(SolverError::InvalidSpec(format!("tmax = {tmax}")));
    }
    let sample_every = sample_every.max(1);

    let mut attempt_spec = spec;
    let mut halvings = 0;
    loop {
        let result = run_once(u0, tmax, attempt_spec, sample_every, halvings)?;
        let violation = ledger_violation(&result.ledger);
        if violation <= LEDGER_SLACK || halvings >= MAX_HALVINGS || result.blowup.is_some() {
            return Ok(result);
        }
        halvings += 1;
        attempt_spec.dt /= 2.0;
    }
}

fn run_once(
    u0: &SpectralField,
    tmax: f64,
    spec: IntegratorSpec,
    sample_every: usize,
    halvings: u32,
) -> Result<RunResult> {
    let nsteps = if tmax == 0.0 {
        0
    } else {
        (tmax / spec.dt - 1e-9).ceil().max(1.0) as usize
    };
    let spec = IntegratorSpec {
        dt: if nsteps == 0 { spec.dt } else { tmax / nsteps as f64 },
        ..spec
    };

    let mut state = SolverState {
        t: 0.0,
        u: u0.clone(),
    };
    let mut snapshots = vec![state.clone()];
    let mut ledger = vec![ledger_row(0.0, &state.u)];
    let mut blowup = None;

    if nsteps > 0 {
        let mut stepper = Stepper::new(u0.grid(), spec)?;
        for step_idx in 1..=nsteps {
            match stepper.step(&state) {
                Ok(next) => state = next,
                Err(SolverError::BlowUp { last_finite_t, .. }) => {
                    blowup = Some(BlowupSignal { last_finite_t });
                    break;
                }
                Err(e) => return Err(e),
            }
            ledger.push(ledger_row(state.t, &state.u));
            if step_idx % sample_every == 0 || step_idx == nsteps {
                snapshots.push(state.clone());
            }
        }
    }

    Ok(RunResult {
        snapshots,
        ledger,
        blowup,
        dt_used: spec.dt,
        halvings,
    })
}
