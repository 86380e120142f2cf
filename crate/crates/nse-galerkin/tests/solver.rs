//! Backend cross-validation and exact-flow checks for the Galerkin solver.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use nse_galerkin::{
    bilinear_direct, ledger_violation, nonlinear_term_direct, nonlinear_term_fast, run,
    trilinear_form_direct, vorticity_rhs, FourierWorkspace, IntegratorSpec, Scheme, SolverState,
    Stepper, LEDGER_SLACK,
};
use spectral_core::{inner_product, SpectralField, Wavevector, WavevectorGrid};

type C64 = Complex<f64>;

fn grid(n: u32) -> WavevectorGrid {
    WavevectorGrid::new(n).unwrap()
}

fn random_solenoidal(n: u32, seed: u64, decay: f64) -> SpectralField {
    let g = grid(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = SpectralField::zeros(g);
    let modes: Vec<Wavevector> = g.modes().filter(|k| k.is_canonical()).collect();
    for k in modes {
        let damp = (-decay * k.norm()).exp();
        let coeff = std::array::from_fn(|_| {
            C64::new(
                damp * (rng.gen::<f64>() * 2.0 - 1.0),
                damp * (rng.gen::<f64>() * 2.0 - 1.0),
            )
        });
        u.set_mode_pair(k, coeff);
    }
    u.project_leray_in_place();
    u
}

/// u = (0, 2a cos x₁, 0): a single invariant shear mode, B(u,u) = 0.
fn shear(n: u32, a: f64) -> SpectralField {
    let mut u = SpectralField::zeros(grid(n));
    u.set_mode_pair(
        Wavevector::new(1, 0, 0),
        [C64::new(0.0, 0.0), C64::new(a, 0.0), C64::new(0.0, 0.0)],
    );
    u
}

/// 2D Taylor–Green vortex u = a(cos x₁ sin x₂, −sin x₁ cos x₂, 0).
fn taylor_green(n: u32, a: f64) -> SpectralField {
    let mut u = SpectralField::zeros(grid(n));
    let q = a * 0.25;
    // cos x₁ sin x₂ → ∓i/4 at (±1, ±1); −sin x₁ cos x₂ → mirrored signs.
    u.set_mode_pair(
        Wavevector::new(1, 1, 0),
        [C64::new(0.0, -q), C64::new(0.0, q), C64::new(0.0, 0.0)],
    );
    u.set_mode_pair(
        Wavevector::new(1, -1, 0),
        [C64::new(0.0, q), C64::new(0.0, q), C64::new(0.0, 0.0)],
    );
    u
}

#[test]
fn taylor_green_construction_is_solenoidal_and_invariant() {
    let u = taylor_green(4, 1.0);
    assert!(u.solenoidal_residual() < 1e-15);
    assert!(u.reality_residual() < 1e-15);
    // The quadratic term is a pure gradient: Π annihilates it.
    let b = nonlinear_term_direct(&u);
    assert!(b.l2_norm() < 1e-13 * u.l2_norm().powi(2));
}

#[test]
fn shear_flow_has_zero_nonlinear_term_in_both_backends() {
    let u = shear(4, 0.9);
    assert!(nonlinear_term_direct(&u).l2_norm() < 1e-14);
    assert!(nonlinear_term_fast(&u, true).l2_norm() < 1e-13);
}

#[test]
fn nonlinear_term_is_orthogonal_to_velocity() {
    for seed in 0..5 {
        let u = random_solenoidal(6, seed, 0.5);
        let b = nonlinear_term_direct(&u);
        let ip = inner_product(&b, &u).unwrap();
        assert!(ip.abs() < 1e-12 * u.l2_norm().powi(3));
        assert!(b.solenoidal_residual() < 1e-13);
        assert!(b.reality_residual() < 1e-12);
    }
}

#[test]
fn fast_backend_matches_direct_convolution() {
    let mut ws = FourierWorkspace::new(grid(8), true);
    for seed in 0..6 {
        let u = random_solenoidal(8, seed, 0.4);
        let direct = nonlinear_term_direct(&u);
        let fast = ws.nonlinear_term(&u);
        let dev = fast.sub_field(&direct).l2_norm() / direct.l2_norm();
        assert!(dev < 1e-10, "seed {seed}: relative deviation {dev:.3e}");
    }
}

#[test]
fn bilinear_pair_matches_direct_for_distinct_arguments() {
    let u = random_solenoidal(6, 3, 0.5);
    let w = u.curl();
    let mut ws = FourierWorkspace::new(grid(6), true);
    let (b_uw, b_wu) = ws.bilinear_pair(&u, &w);
    let d_uw = bilinear_direct(&u, &w);
    let d_wu = bilinear_direct(&w, &u);
    assert!(b_uw.sub_field(&d_uw).l2_norm() < 1e-10 * d_uw.l2_norm());
    assert!(b_wu.sub_field(&d_wu).l2_norm() < 1e-10 * d_wu.l2_norm());
}

/// Constructed aliasing case: with the bare 2N+1 transform grid the
/// self-interaction of a corner mode folds back into the retained cube;
/// the padded grid does not.
#[test]
fn aliasing_sentinel_appears_only_without_dealiasing() {
    let n = 4;
    let g = grid(n);
    let mut u = SpectralField::zeros(g);
    // Mode near the cutoff with a component along x so the folded image
    // survives the divergence-form contraction.
    let k = Wavevector::new(n as i32, 1, 0);
    let amp = C64::new(0.8, 0.0);
    // û ⟂ k: (1, −N, 0)/|·|
    let norm = ((1 + (n * n) as i32) as f64).sqrt();
    u.set_mode_pair(
        k,
        [amp * (1.0 / norm), amp * (-(n as f64) / norm), C64::new(0.0, 0.0)],
    );

    let exact = nonlinear_term_direct(&u);
    let dealiased = nonlinear_term_fast(&u, true);
    let aliased = nonlinear_term_fast(&u, false);

    let err_on = dealiased.sub_field(&exact).l2_norm();
    let err_off = aliased.sub_field(&exact).l2_norm();
    assert!(err_on < 1e-12);
    assert!(
        err_off > 1e-3,
        "aliasing error should be visible, got {err_off:.3e}"
    );
}

#[test]
fn vorticity_rhs_consistency() {
    let g = grid(6);
    let mut ws = FourierWorkspace::new(g, true);

    // Zero field → zero rhs.
    let zero = SpectralField::zeros(g);
    let rhs = vorticity_rhs(&zero, &zero.curl(), &mut ws).unwrap();
    assert_eq!(rhs.l2_norm(), 0.0);

    // Shear flow: both bilinear terms vanish; rhs = −Aω exactly.
    let u = shear(6, 0.7);
    let w = u.curl();
    let rhs = vorticity_rhs(&u, &w, &mut ws).unwrap();
    let minus_a_omega = w.apply_multiplier(|x| -(x * x)).unwrap();
    assert!(rhs.sub_field(&minus_a_omega).l2_norm() < 1e-12);

    // Random solenoidal: curl of the velocity rhs equals the vorticity rhs.
    let u = random_solenoidal(6, 11, 0.5);
    let w = u.curl();
    let rhs_w = vorticity_rhs(&u, &w, &mut ws).unwrap();
    let mut rhs_u = u.apply_multiplier(|x| -(x * x)).unwrap();
    let b = ws.nonlinear_term(&u);
    rhs_u.axpy(-1.0, &b);
    let curl_rhs_u = rhs_u.curl();
    let dev = rhs_w.sub_field(&curl_rhs_u).l2_norm() / curl_rhs_u.l2_norm();
    assert!(dev < 1e-10, "curl-consistency residual {dev:.3e}");

    // Inconsistent ω is rejected.
    let mut bad = w.clone();
    bad.scale(1.5);
    assert!(vorticity_rhs(&u, &bad, &mut ws).is_err());
}

#[test]
fn orthogonality_survives_galerkin_truncation_for_any_test_field() {
    // (B(u, w), w) = 0 for solenoidal u and ANY w in the truncation.
    let u = random_solenoidal(5, 2, 0.4);
    let w = random_solenoidal(5, 77, 0.3); // independent of u
    let form = trilinear_form_direct(&u, &w, &w);
    let scale = u.l2_norm() * w.l2_norm().powi(2);
    assert!(form.abs() < 1e-12 * scale);
}

#[test]
fn zero_field_stays_zero() {
    let g = grid(4);
    let spec = IntegratorSpec::default_for(4);
    let mut stepper = Stepper::new(g, spec).unwrap();
    let state = SolverState {
        t: 0.0,
        u: SpectralField::zeros(g),
    };
    let next = stepper.step(&state).unwrap();
    assert_eq!(next.u.l2_norm(), 0.0);
    assert!((next.t - spec.dt).abs() < 1e-15);
}

#[test]
fn invariant_mode_decays_exactly_with_integrating_factor() {
    // Shear mode: B = 0, so û(t) = e^{−|k|²t} û(0) must hold to roundoff.
    let u0 = shear(4, 1.0);
    let spec = IntegratorSpec {
        dt: 1e-2,
        scheme: Scheme::IntegratingFactorRk4,
        dealias: true,
    };
    let result = run(&u0, 0.5, spec, 10).unwrap();
    let last = result.snapshots.last().unwrap();
    let expect = (-1.0 * last.t).exp(); // |k|² = 1, unit initial coefficient
    let got = last.u.coeff(Wavevector::new(1, 0, 0))[1].re;
    assert!((got - expect).abs() < 1e-12 * expect);
}

#[test]
fn taylor_green_energy_decay_matches_closed_form() {
    // All TG modes have |k|² = 2 and the nonlinearity projects away, so
    // ‖u(t)‖² = e^{−4t} ‖u(0)‖². Desk-size check; the acceptance suite
    // runs the spec-scale version (t = 1, dt = 1e−3, N = 8).
    let u0 = taylor_green(4, 1.0);
    let e0 = u0.l2_norm_sq();
    let spec = IntegratorSpec {
        dt: 1e-3,
        scheme: Scheme::IntegratingFactorRk4,
        dealias: true,
    };
    let result = run(&u0, 0.25, spec, 50).unwrap();
    for snap in &result.snapshots {
        let expect = e0 * (-4.0 * snap.t).exp();
        assert!((snap.u.l2_norm_sq() - expect).abs() < 1e-6 * e0);
    }
}

#[test]
fn imex_euler_decays_heat_flow_first_order() {
    let u0 = shear(4, 1.0);
    let spec = IntegratorSpec {
        dt: 1e-3,
        scheme: Scheme::ImexEuler,
        dealias: true,
    };
    let result = run(&u0, 0.2, spec, 200).unwrap();
    let last = result.snapshots.last().unwrap();
    let got = last.u.coeff(Wavevector::new(1, 0, 0))[1].re;
    let expect = (-0.2f64).exp();
    // first-order scheme: error O(dt)
    assert!((got - expect).abs() < 5.0 * 1e-3 * expect);
    assert!((got - expect).abs() > 1e-8); // and genuinely inexact
}

#[test]
fn run_bookkeeping() {
    let u0 = random_solenoidal(4, 5, 0.8);

    // tmax = 0 → single snapshot equal to u0.
    let spec = IntegratorSpec::default_for(4);
    let r = run(&u0, 0.0, spec, 1).unwrap();
    assert_eq!(r.snapshots.len(), 1);
    assert_eq!(r.snapshots[0].u.sub_field(&u0).l2_norm(), 0.0);

    // Doubling dt halves the snapshot count for a fixed tmax. A single
    // slow mode keeps the ledger comfortably inside its slack so the
    // automatic dt halving stays out of the bookkeeping.
    let slow = shear(4, 1.0);
    let spec1 = IntegratorSpec {
        dt: 1e-3,
        ..IntegratorSpec::default_for(4)
    };
    let spec2 = IntegratorSpec {
        dt: 2e-3,
        ..IntegratorSpec::default_for(4)
    };
    let r1 = run(&slow, 0.064, spec1, 1).unwrap();
    let r2 = run(&slow, 0.064, spec2, 1).unwrap();
    assert_eq!(r1.halvings, 0);
    assert_eq!(r2.halvings, 0);
    assert_eq!(r1.snapshots.len() - 1, 2 * (r2.snapshots.len() - 1));
}

#[test]
fn energy_ledger_closes_on_random_data() {
    let u0 = random_solenoidal(8, 9, 0.8);
    let spec = IntegratorSpec::default_for(8);
    let result = run(&u0, 0.2, spec, 20).unwrap();
    assert!(result.blowup.is_none());
    let violation = ledger_violation(&result.ledger);
    assert!(
        violation <= LEDGER_SLACK,
        "ledger violated by {violation:.3e} (halvings = {})",
        result.halvings
    );
    // Energy must be monotone under pure decay dynamics.
    for w in result.ledger.windows(2) {
        assert!(w[1].energy <= w[0].energy * (1.0 + 1e-12));
    }
}
