use crate::field::SpectralField;
use crate::weight::GevreyWeight;
use crate::{Result, SpectralError};

pub mod kahan {
    /// Compensated (Kahan) accumulator. All norm and inner-product sums go
    /// through this sequentially, in dense-index order, so results are
    /// deterministic and keep oracle comparisons at the 1e−13 level.
    #[derive(Debug, Clone, Copy, Default)]
    pub struct KahanSum {
        sum: f64,
        carry: f64,
    }

    impl KahanSum {
        pub fn new() -> Self {
            Self::default()
        }

        #[inline]
        pub fn add(&mut self, x: f64) {
            let y = x - self.carry;
            let t = self.sum + y;
            self.carry = (t - self.sum) - y;
            self.sum = t;
        }

        pub fn value(&self) -> f64 {
            self.sum
        }
    }
}

use kahan::KahanSum;

/// Direct evaluation overflows once the largest per-mode log-weight exceeds
/// this budget; beyond it the sum is assembled in log space.
const LOG_SPACE_THRESHOLD: f64 = 600.0;

const LN_F64_MAX: f64 = 709.782712893384;

/// Gevrey norm `( Σ_k |k|^{2s} e^{2α|k|^θ} |û(k)|² )^{1/2}`.
///
/// With `α = 0` this is the Sobolev norm `‖u‖_s` along the identical code
/// path (the exponential factor is exactly 1.0). Weights too large for f64
/// are evaluated in log space and reported as an overflow error when even
/// the final norm is unrepresentable.
pub fn gevrey_norm(u: &SpectralField, w: &GevreyWeight) -> Result<f64> {
    let grid = u.grid();
    // Conservative bound on the largest per-mode log-weight (|k| ≥ 1).
    let xmax = grid.max_norm();
    let worst = 2.0 * w.s.abs() * xmax.ln() + 2.0 * w.alpha * xmax.powf(w.theta);
    if worst > LOG_SPACE_THRESHOLD {
        return gevrey_norm_log_space(u, w);
    }

    let mut acc = KahanSum::new();
    let len = grid.side().pow(3);
    for i in 0..len {
        let k = grid.wavevector_at(i);
        if k.is_zero() {
            continue;
        }
        let v = u.coeff_at_index(i);
        let mag = v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr();
        if mag == 0.0 {
            continue;
        }
        let x = k.norm();
        let weight = x.powf(2.0 * w.s) * (2.0 * w.alpha * x.powf(w.theta)).exp();
        acc.add(weight * mag);
    }
    let out = acc.value().sqrt();
    if !out.is_finite() {
        return Err(SpectralError::NormOverflow {
            log2_magnitude: f64::INFINITY,
        });
    }
    Ok(out)
}

fn gevrey_norm_log_space(u: &SpectralField, w: &GevreyWeight) -> Result<f64> {
    let grid = u.grid();
    let len = grid.side().pow(3);

    // log of each term; two passes (max, then shifted sum).
    let mut max_log = f64::NEG_INFINITY;
    for i in 0..len {
        let k = grid.wavevector_at(i);
        if k.is_zero() {
            continue;
        }
        let v = u.coeff_at_index(i);
        let mag = v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr();
        if mag == 0.0 {
            continue;
        }
        max_log = max_log.max(w.log_weight_sq(k.norm()) + mag.ln());
    }
    if max_log == f64::NEG_INFINITY {
        return Ok(0.0);
    }

    let mut acc = KahanSum::new();
    for i in 0..len {
        let k = grid.wavevector_at(i);
        if k.is_zero() {
            continue;
        }
        let v = u.coeff_at_index(i);
        let mag = v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr();
        if mag == 0.0 {
            continue;
        }
        acc.add((w.log_weight_sq(k.norm()) + mag.ln() - max_log).exp());
    }
    let log_norm = 0.5 * (max_log + acc.value().ln());
    if log_norm > LN_F64_MAX {
        return Err(SpectralError::NormOverflow {
            log2_magnitude: log_norm / std::f64::consts::LN_2,
        });
    }
    Ok(log_norm.exp())
}

/// Sobolev norm `‖u‖_s`; same code path as [`gevrey_norm`] with unit weight.
pub fn sobolev_norm(u: &SpectralField, s: f64) -> f64 {
    gevrey_norm(u, &GevreyWeight::sobolev(s)).expect("sobolev weight cannot overflow")
}

/// Wiener norm `‖u‖_{F^r} = Σ_k |k|^r |û(k)|` over stored modes.
pub fn wiener_norm(u: &SpectralField, r: f64) -> f64 {
    let grid = u.grid();
    let mut acc = KahanSum::new();
    let len = grid.side().pow(3);
    for i in 0..len {
        let k = grid.wavevector_at(i);
        if k.is_zero() {
            continue;
        }
        let v = u.coeff_at_index(i);
        let mag = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
        if mag == 0.0 {
            continue;
        }
        acc.add(k.norm().powf(r) * mag);
    }
    acc.value()
}

/// L² inner product `Re Σ_k û(k)·conj(v̂(k))` (volume convention per the
/// crate docs). Errors on grid mismatch.
pub fn inner_product(u: &SpectralField, v: &SpectralField) -> Result<f64> {
    if u.grid() != v.grid() {
        return Err(SpectralError::GridMismatch(
            u.grid().cutoff(),
            v.grid().cutoff(),
        ));
    }
    let mut acc = KahanSum::new();
    for c in 0..3 {
        for (a, b) in u.component(c).iter().zip(v.component(c)) {
            acc.add((a * b.conj()).re);
        }
    }
    Ok(acc.value())
}
