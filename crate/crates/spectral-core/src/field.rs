use crate::grid::{Wavevector, WavevectorGrid};
use crate::norm::kahan::KahanSum;
use crate::{Complex64, Result, SpectralError};

/// Truncated Fourier coefficients of a mean-free, real vector field.
///
/// Coefficients are held densely, one cube per component (structure of
/// arrays), with the origin slot pinned to zero. The reality invariant
/// `û(−k) = conj(û(k))` is preserved by every operation here; constructors
/// that take raw coefficients symmetrize or mirror explicitly.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: WavevectorGrid,
    comp: [Vec<Complex64>; 3],
}

impl SpectralField {
    pub fn zeros(grid: WavevectorGrid) -> Self {
        let len = grid.side().pow(3);
        SpectralField {
            grid,
            comp: std::array::from_fn(|_| vec![Complex64::ZERO; len]),
        }
    }

    pub fn grid(&self) -> WavevectorGrid {
        self.grid
    }

    #[inline]
    pub fn coeff(&self, k: Wavevector) -> [Complex64; 3] {
        let i = self.grid.index_of(k);
        [self.comp[0][i], self.comp[1][i], self.comp[2][i]]
    }

    #[inline]
    pub fn coeff_at_index(&self, i: usize) -> [Complex64; 3] {
        [self.comp[0][i], self.comp[1][i], self.comp[2][i]]
    }

    /// Raw component cube (dense layout, see [`WavevectorGrid::index_of`]).
    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comp[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comp[c]
    }

    /// All three component cubes, mutably (for writers that interleave
    /// components in one pass).
    pub fn components_mut(&mut self) -> [&mut [Complex64]; 3] {
        let [c0, c1, c2] = &mut self.comp;
        [c0.as_mut_slice(), c1.as_mut_slice(), c2.as_mut_slice()]
    }

    /// Set the coefficient at `k` and its conjugate mirror at `−k`.
    /// Panics if `k` is outside the grid or zero.
    pub fn set_mode_pair(&mut self, k: Wavevector, value: [Complex64; 3]) {
        assert!(self.grid.contains(k), "mode {k:?} outside grid");
        let i = self.grid.index_of(k);
        let j = self.grid.index_of(k.neg());
        for c in 0..3 {
            self.comp[c][i] = value[c];
            self.comp[c][j] = value[c].conj();
        }
    }

    /// Squared L² norm, `Σ_k |û(k)|²` (Parseval under the volume convention
    /// fixed in the crate docs).
    pub fn l2_norm_sq(&self) -> f64 {
        let mut acc = KahanSum::new();
        for c in 0..3 {
            for v in &self.comp[c] {
                acc.add(v.norm_sqr());
            }
        }
        acc.value()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Squared H¹ seminorm `Σ |k|²|û|²`; the enstrophy ledger entry.
    pub fn h1_norm_sq(&self) -> f64 {
        let mut acc = KahanSum::new();
        let len = self.grid.side().pow(3);
        for i in 0..len {
            let k = self.grid.wavevector_at(i);
            let ksq = k.norm_sq() as f64;
            if ksq == 0.0 {
                continue;
            }
            let v = self.coeff_at_index(i);
            acc.add(ksq * (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()));
        }
        acc.value()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        let mut m = 0f64;
        for c in 0..3 {
            for v in &self.comp[c] {
                m = m.max(v.norm_sqr());
            }
        }
        m.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.comp
            .iter()
            .all(|cube| cube.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    /// Leray projection: `û(k) ↦ û(k) − k (k·û(k)) / |k|²`.
    ///
    /// Annihilates gradient parts, fixes divergence-free fields, and is
    /// idempotent. The origin is excluded by construction.
    pub fn project_leray(&self) -> SpectralField {
        let mut out = self.clone();
        out.project_leray_in_place();
        out
    }

    pub fn project_leray_in_place(&mut self) {
        let len = self.grid.side().pow(3);
        for i in 0..len {
            let k = self.grid.wavevector_at(i);
            let ksq = k.norm_sq() as f64;
            if ksq == 0.0 {
                continue;
            }
            let kx = k.0[0] as f64;
            let ky = k.0[1] as f64;
            let kz = k.0[2] as f64;
            let dot = self.comp[0][i] * kx + self.comp[1][i] * ky + self.comp[2][i] * kz;
            let scale = dot / ksq;
            self.comp[0][i] -= scale * kx;
            self.comp[1][i] -= scale * ky;
            self.comp[2][i] -= scale * kz;
        }
    }

    /// Coefficient-wise scaling `û(k) ↦ m(|k|) û(k)` for a scalar multiplier
    /// of the Euclidean shell radius. Real multipliers preserve reality, and
    /// any scalar multiplier preserves solenoidality.
    ///
    /// A non-finite scale or product is reported as an overflow error rather
    /// than saturated.
    pub fn apply_multiplier(&self, m: impl Fn(f64) -> f64) -> Result<SpectralField> {
        let mut out = SpectralField::zeros(self.grid);
        let len = self.grid.side().pow(3);
        for i in 0..len {
            let k = self.grid.wavevector_at(i);
            if k.is_zero() {
                continue;
            }
            let scale = m(k.norm());
            if !scale.is_finite() {
                return Err(SpectralError::MultiplierOverflow { shell: k.norm() });
            }
            for c in 0..3 {
                let v = self.comp[c][i] * scale;
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(SpectralError::MultiplierOverflow { shell: k.norm() });
                }
                out.comp[c][i] = v;
            }
        }
        Ok(out)
    }

    /// Vorticity coefficients `ω̂(k) = i k × û(k)`.
    ///
    /// Output is always solenoidal (`k·(k×v) = 0`), and for solenoidal input
    /// satisfies `‖curl u‖_{s̃,α} = ‖u‖_{s̃+1,α}`.
    pub fn curl(&self) -> SpectralField {
        let mut out = SpectralField::zeros(self.grid);
        let len = self.grid.side().pow(3);
        let i_unit = Complex64::new(0.0, 1.0);
        for i in 0..len {
            let k = self.grid.wavevector_at(i);
            if k.is_zero() {
                continue;
            }
            let kx = k.0[0] as f64;
            let ky = k.0[1] as f64;
            let kz = k.0[2] as f64;
            let u = self.coeff_at_index(i);
            out.comp[0][i] = i_unit * (ky * u[2] - kz * u[1]);
            out.comp[1][i] = i_unit * (kz * u[0] - kx * u[2]);
            out.comp[2][i] = i_unit * (kx * u[1] - ky * u[0]);
        }
        out
    }

    /// Relative divergence residual `(Σ_k |k·û|²/|k|²)^{1/2} / ‖u‖_{L²}`.
    /// Zero field reports 0.
    pub fn solenoidal_residual(&self) -> f64 {
        let mut acc = KahanSum::new();
        let len = self.grid.side().pow(3);
        for i in 0..len {
            let k = self.grid.wavevector_at(i);
            let ksq = k.norm_sq() as f64;
            if ksq == 0.0 {
                continue;
            }
            let u = self.coeff_at_index(i);
            let dot = u[0] * k.0[0] as f64 + u[1] * k.0[1] as f64 + u[2] * k.0[2] as f64;
            acc.add(dot.norm_sqr() / ksq);
        }
        let norm = self.l2_norm();
        if norm == 0.0 {
            0.0
        } else {
            acc.value().sqrt() / norm
        }
    }

    /// Largest relative violation of `û(−k) = conj(û(k))`.
    pub fn reality_residual(&self) -> f64 {
        let mut worst = 0f64;
        let scale = self.max_coeff_norm().max(f64::MIN_POSITIVE);
        for k in self.grid.modes() {
            if !k.is_canonical() {
                continue;
            }
            let a = self.coeff(k);
            let b = self.coeff(k.neg());
            for c in 0..3 {
                worst = worst.max((a[c] - b[c].conj()).norm());
            }
        }
        worst / scale
    }

    /// Symmetrize the half-spectrum pairs: `û(k) ← (û(k) + conj(û(−k)))/2`.
    /// Used after transforms whose rounding breaks exact conjugate symmetry.
    pub fn enforce_reality(&mut self) {
        let grid = self.grid;
        for k in grid.modes() {
            if !k.is_canonical() {
                continue;
            }
            let i = grid.index_of(k);
            let j = grid.index_of(k.neg());
            for c in 0..3 {
                let avg = 0.5 * (self.comp[c][i] + self.comp[c][j].conj());
                self.comp[c][i] = avg;
                self.comp[c][j] = avg.conj();
            }
        }
    }

    // -- small arithmetic kernel used by the time steppers --

    /// `self += a * other`. Grids must agree.
    pub fn axpy(&mut self, a: f64, other: &SpectralField) {
        assert_eq!(self.grid, other.grid);
        for c in 0..3 {
            for (x, y) in self.comp[c].iter_mut().zip(&other.comp[c]) {
                *x += a * y;
            }
        }
    }

    pub fn scale(&mut self, a: f64) {
        for c in 0..3 {
            for x in self.comp[c].iter_mut() {
                *x *= a;
            }
        }
    }

    /// Multiply each coefficient by a per-index diagonal (e.g. the viscous
    /// integrating factor `e^{−|k|² dt}`).
    pub fn mul_diag(&mut self, diag: &[f64]) {
        assert_eq!(diag.len(), self.grid.side().pow(3));
        for c in 0..3 {
            for (x, d) in self.comp[c].iter_mut().zip(diag) {
                *x *= *d;
            }
        }
    }

    pub fn sub_field(&self, other: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }
}
