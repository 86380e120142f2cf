//! Exact truncated-convolution backend. O(modes²) — the correctness oracle
//! for the pseudo-spectral path, practical up to N ≈ 8.

use spectral_core::{Complex64, KahanSum, SpectralField, Wavevector};

use crate::I;

/// `B(a, b) = Π Σ_{j+l=k} i (l·â(j)) b̂(l)`, truncated to the grid.
///
/// Output is solenoidal (projected) and conjugate-symmetric by construction:
/// only canonical output modes are accumulated, mirrors are derived.
pub fn bilinear_direct(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let grid = a.grid();
    assert_eq!(grid, b.grid(), "bilinear arguments must share a grid");
    let n = grid.cutoff() as i32;
    let side = grid.side();

    let mut out = SpectralField::zeros(grid);
    for kx in -n..=n {
        for ky in -n..=n {
            for kz in -n..=n {
                let k = Wavevector::new(kx, ky, kz);
                if k.is_zero() || !k.is_canonical() {
                    continue;
                }
                let mut acc = [Complex64::ZERO; 3];
                // j ranges over the sub-cube keeping l = k − j on the grid.
                let (jx0, jx1) = ((kx - n).max(-n), (kx + n).min(n));
                let (jy0, jy1) = ((ky - n).max(-n), (ky + n).min(n));
                let (jz0, jz1) = ((kz - n).max(-n), (kz + n).min(n));
                for jx in jx0..=jx1 {
                    let lx = kx - jx;
                    for jy in jy0..=jy1 {
                        let ly = ky - jy;
                        let row_j = ((jx + n) as usize * side + (jy + n) as usize) * side;
                        let row_l = ((lx + n) as usize * side + (ly + n) as usize) * side;
                        for jz in jz0..=jz1 {
                            let lz = kz - jz;
                            let ij = row_j + (jz + n) as usize;
                            let il = row_l + (lz + n) as usize;
                            let aj = [
                                a.component(0)[ij],
                                a.component(1)[ij],
                                a.component(2)[ij],
                            ];
                            let dot =
                                aj[0] * lx as f64 + aj[1] * ly as f64 + aj[2] * lz as f64;
                            acc[0] += dot * b.component(0)[il];
                            acc[1] += dot * b.component(1)[il];
                            acc[2] += dot * b.component(2)[il];
                        }
                    }
                }
                let value = [I * acc[0], I * acc[1], I * acc[2]];
                out.set_mode_pair(k, value);
            }
        }
    }
    out.project_leray_in_place();
    out
}

/// `B(u, u)` by exact convolution.
pub fn nonlinear_term_direct(u: &SpectralField) -> SpectralField {
    bilinear_direct(u, u)
}

/// The trilinear form `(B(a,b), c)` evaluated as a single mode sum,
///
/// ```text
/// Re Σ_{j,l} i (l·â(j)) (b̂(l)·conj(ĉ(j+l))),
/// ```
///
/// with Kahan accumulation in a fixed order. Requires `c` solenoidal, which
/// lets the Leray projection inside `B` be dropped from the inner product;
/// conjugate symmetry halves the sum (canonical `j` only, real parts doubled).
pub fn trilinear_form_direct(a: &SpectralField, b: &SpectralField, c: &SpectralField) -> f64 {
    let grid = a.grid();
    assert_eq!(grid, b.grid());
    assert_eq!(grid, c.grid());
    debug_assert!(c.solenoidal_residual() < 1e-8, "c must be solenoidal");
    let n = grid.cutoff() as i32;
    let side = grid.side();

    let mut acc = KahanSum::new();
    for jx in -n..=n {
        for jy in -n..=n {
            for jz in -n..=n {
                let j = Wavevector::new(jx, jy, jz);
                if j.is_zero() || !j.is_canonical() {
                    continue;
                }
                let ij = grid.index_of(j);
                let aj = [
                    a.component(0)[ij],
                    a.component(1)[ij],
                    a.component(2)[ij],
                ];
                if aj[0].norm_sqr() + aj[1].norm_sqr() + aj[2].norm_sqr() == 0.0 {
                    continue;
                }
                // l ranges over the sub-cube keeping k = j + l on the grid.
                let (lx0, lx1) = ((-n - jx).max(-n), (n - jx).min(n));
                let (ly0, ly1) = ((-n - jy).max(-n), (n - jy).min(n));
                let (lz0, lz1) = ((-n - jz).max(-n), (n - jz).min(n));
                for lx in lx0..=lx1 {
                    for ly in ly0..=ly1 {
                        let row_l = ((lx + n) as usize * side + (ly + n) as usize) * side;
                        let row_k =
                            ((lx + jx + n) as usize * side + (ly + jy + n) as usize) * side;
                        for lz in lz0..=lz1 {
                            let il = row_l + (lz + n) as usize;
                            let ik = row_k + (lz + jz + n) as usize;
                            let dot =
                                aj[0] * lx as f64 + aj[1] * ly as f64 + aj[2] * lz as f64;
                            let mut bc = Complex64::ZERO;
                            for comp in 0..3 {
                                bc += b.component(comp)[il] * c.component(comp)[ik].conj();
                            }
                            // Re(i z) = −Im(z)
                            acc.add(-(dot * bc).im);
                        }
                    }
                }
            }
        }
    }
    2.0 * acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectral_core::{inner_product, WavevectorGrid};

    #[test]
    fn trilinear_matches_assembled_inner_product() {
        let grid = WavevectorGrid::new(3).unwrap();
        let mut a = SpectralField::zeros(grid);
        a.set_mode_pair(
            Wavevector::new(1, 0, 0),
            [Complex64::ZERO, Complex64::new(0.4, 0.1), Complex64::new(0.0, -0.3)],
        );
        a.set_mode_pair(
            Wavevector::new(0, 1, 1),
            [Complex64::new(1.0, 0.0), Complex64::ZERO, Complex64::ZERO],
        );
        let a = a.project_leray();
        let mut c = SpectralField::zeros(grid);
        c.set_mode_pair(
            Wavevector::new(1, 1, 0),
            [Complex64::new(0.2, 0.0), Complex64::new(-0.2, 0.5), Complex64::ZERO],
        );
        let c = c.project_leray();

        let assembled = inner_product(&bilinear_direct(&a, &a), &c).unwrap();
        let scalar = trilinear_form_direct(&a, &a, &c);
        assert!((assembled - scalar).abs() < 1e-14);
    }
}
