//! Dealiased pseudo-spectral evaluation of the bilinear term.
//!
//! Products are formed on a physical grid of `M ≥ 3N + 1` points per axis
//! (the 2/3-rule padding: quadratic interactions of modes `|k_i| ≤ N` then
//! cannot alias back into the retained cube), transformed with reused FFT
//! plans, and contracted in divergence form `B(a,b)_i = Π [i k_j (a_j b_i)^]`,
//! which agrees with the advection form whenever the advecting field is
//! solenoidal. With `dealias = false` the transform runs on the bare
//! `2N + 1` grid and quadratic aliases fold back into the cube; that mode
//! exists to demonstrate the error, not for production stepping.
//!
//! Two throughput tricks, both exact:
//! * every 1D pass runs on the fastest axis, with one transpose between
//!   passes; the spectral cube lives in (ky, kz, kx) layout and the embed
//!   tables are built against that layout, so no back-transposes are needed;
//! * real fields are packed in pairs, `c = p + i q`, one complex transform
//!   serving two syntheses or two product analyses (Hermitian split on the
//!   way back).

use rustfft::{Fft, FftPlanner};
use spectral_core::{Complex64, SpectralField, WavevectorGrid};
use std::sync::Arc;

use crate::I;

/// Smallest 5-smooth size ≥ `min` (keeps rustfft on fast mixed-radix paths).
fn good_fft_size(min: usize) -> usize {
    let mut m = min;
    loop {
        let mut r = m;
        for p in [2usize, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Embed-table entry: one grid mode's dense index, its padded-cube index,
/// the cube index of −k, and the wavevector components.
struct Embed {
    grid_idx: u32,
    cube_idx: u32,
    cube_neg_idx: u32,
    k: [f64; 3],
}

pub struct FourierWorkspace {
    grid: WavevectorGrid,
    m: usize,
    dealias: bool,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    embed: Vec<Embed>,
    cube: Vec<Complex64>,
    phys_a: [Vec<f64>; 3],
    phys_b: [Vec<f64>; 3],
}

impl FourierWorkspace {
    pub fn new(grid: WavevectorGrid, dealias: bool) -> Self {
        let n = grid.cutoff() as usize;
        let m = if dealias {
            good_fft_size(3 * n + 1)
        } else {
            2 * n + 1
        };
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(m);
        let fft_inv = planner.plan_fft_inverse(m);
        let scratch_len = fft_fwd
            .get_inplace_scratch_len()
            .max(fft_inv.get_inplace_scratch_len());

        // Spectral layout after the forward pipeline is (ky, kz, kx).
        let wrap = |c: i32| -> usize {
            if c < 0 {
                (c + m as i32) as usize
            } else {
                c as usize
            }
        };
        let spectral_index = |k: [i32; 3]| -> u32 {
            ((wrap(k[1]) * m + wrap(k[2])) * m + wrap(k[0])) as u32
        };
        let mut embed = Vec::with_capacity(grid.mode_count());
        for k in grid.modes() {
            embed.push(Embed {
                grid_idx: grid.index_of(k) as u32,
                cube_idx: spectral_index(k.0),
                cube_neg_idx: spectral_index(k.neg().0),
                k: [k.0[0] as f64, k.0[1] as f64, k.0[2] as f64],
            });
        }

        FourierWorkspace {
            grid,
            m,
            dealias,
            fft_fwd,
            fft_inv,
            scratch: vec![Complex64::ZERO; scratch_len],
            embed,
            cube: vec![Complex64::ZERO; m * m * m],
            phys_a: std::array::from_fn(|_| Vec::new()),
            phys_b: std::array::from_fn(|_| Vec::new()),
        }
    }

    pub fn grid(&self) -> WavevectorGrid {
        self.grid
    }

    pub fn transform_size(&self) -> usize {
        self.m
    }

    pub fn dealiased(&self) -> bool {
        self.dealias
    }

    /// Batched 1D FFTs along the fastest axis: the cube is `m²` contiguous
    /// lanes of length `m`.
    fn fft_fast_axis(&mut self, forward: bool) {
        let fft = if forward {
            &self.fft_fwd
        } else {
            &self.fft_inv
        };
        fft.process_with_scratch(&mut self.cube, &mut self.scratch);
    }

    /// Swap the two fastest axes within every slab of the slowest.
    /// Tiled for cache locality.
    fn swap_last_two(&mut self) {
        const TILE: usize = 16;
        let m = self.m;
        for s in 0..m {
            let slab = &mut self.cube[s * m * m..(s + 1) * m * m];
            for ta in (0..m).step_by(TILE) {
                for tb in (ta..m).step_by(TILE) {
                    for a in ta..(ta + TILE).min(m) {
                        let b0 = tb.max(a + 1);
                        for b in b0..(tb + TILE).min(m) {
                            slab.swap(a * m + b, b * m + a);
                        }
                    }
                }
            }
        }
    }

    /// Swap the slowest and fastest axes (global in-place transpose), tiled.
    fn swap_outer(&mut self) {
        const TILE: usize = 16;
        let m = self.m;
        for ta in (0..m).step_by(TILE) {
            for tb in (ta..m).step_by(TILE) {
                for mid in 0..m {
                    for a in ta..(ta + TILE).min(m) {
                        let b0 = tb.max(a + 1);
                        let row_a = (a * m + mid) * m;
                        for b in b0..(tb + TILE).min(m) {
                            let p = row_a + b;
                            let q = (b * m + mid) * m + a;
                            self.cube.swap(p, q);
                        }
                    }
                }
            }
        }
    }

    /// physical (x,y,z) → spectral (ky,kz,kx)
    fn forward3(&mut self) {
        self.fft_fast_axis(true); // z
        self.swap_last_two(); // (x, kz, y)
        self.fft_fast_axis(true); // y
        self.swap_outer(); // (ky, kz, x)
        self.fft_fast_axis(true); // x
    }

    /// spectral (ky,kz,kx) → physical (x,y,z)
    fn inverse3(&mut self) {
        self.fft_fast_axis(false); // x
        self.swap_outer(); // (x, kz, ky)
        self.fft_fast_axis(false); // y
        self.swap_last_two(); // (x, y, kz)
        self.fft_fast_axis(false); // z
    }

    /// Synthesize two components at once via `c = a + i b`.
    fn to_physical_pair(
        &mut self,
        coeff_a: &[Complex64],
        coeff_b: &[Complex64],
        out_a: &mut Vec<f64>,
        out_b: &mut Vec<f64>,
    ) {
        self.cube.fill(Complex64::ZERO);
        for e in &self.embed {
            let a = coeff_a[e.grid_idx as usize];
            let b = coeff_b[e.grid_idx as usize];
            self.cube[e.cube_idx as usize] = a + I * b;
        }
        self.inverse3();
        out_a.clear();
        out_a.extend(self.cube.iter().map(|c| c.re));
        out_b.clear();
        out_b.extend(self.cube.iter().map(|c| c.im));
    }

    fn to_physical(&mut self, coeff: &[Complex64], out: &mut Vec<f64>) {
        self.cube.fill(Complex64::ZERO);
        for e in &self.embed {
            self.cube[e.cube_idx as usize] = coeff[e.grid_idx as usize];
        }
        self.inverse3();
        out.clear();
        out.extend(self.cube.iter().map(|c| c.re));
    }

    /// Forward-transform the packed product pair `pa·pb + i pc·pd`.
    fn products_spectrum_pair(&mut self, pa: &[f64], pb: &[f64], pc: &[f64], pd: &[f64]) {
        for (idx, slot) in self.cube.iter_mut().enumerate() {
            *slot = Complex64::new(pa[idx] * pb[idx], pc[idx] * pd[idx]);
        }
        self.forward3();
    }

    fn product_spectrum(&mut self, pa: &[f64], pb: &[f64]) {
        for (idx, slot) in self.cube.iter_mut().enumerate() {
            *slot = Complex64::new(pa[idx] * pb[idx], 0.0);
        }
        self.forward3();
    }

    /// Hermitian split of the packed spectrum at one grid mode:
    /// returns (first, second) product coefficients (unnormalized).
    #[inline]
    fn split(&self, e: &Embed) -> (Complex64, Complex64) {
        let z1 = self.cube[e.cube_idx as usize];
        let z2 = self.cube[e.cube_neg_idx as usize].conj();
        let p = 0.5 * (z1 + z2);
        let q = Complex64::new(0.0, -0.5) * (z1 - z2);
        (p, q)
    }

    /// `B(u, u)` in divergence form: 2 packed syntheses + 3 packed product
    /// transforms (six unique entries of the symmetric tensor u_j u_i).
    pub fn nonlinear_term(&mut self, u: &SpectralField) -> SpectralField {
        assert_eq!(u.grid(), self.grid);
        let mut phys = std::mem::take(&mut self.phys_a);
        {
            let [p0, p1, p2] = &mut phys;
            self.to_physical_pair(u.component(0), u.component(1), p0, p1);
            self.to_physical(u.component(2), p2);
        }

        let mut out = SpectralField::zeros(self.grid);
        let norm = 1.0 / (self.m as f64).powi(3);
        // pairs: (T00, T01), (T02, T11), (T12, T22)
        let pairs = [((0, 0), (0, 1)), ((0, 2), (1, 1)), ((1, 2), (2, 2))];
        for &((a1, b1), (a2, b2)) in &pairs {
            self.products_spectrum_pair(&phys[a1], &phys[b1], &phys[a2], &phys[b2]);
            let mut comps = out.components_mut();
            for e in &self.embed {
                let (t1, t2) = self.split(e);
                let gi = e.grid_idx as usize;
                // symmetric product (a,b): feeds comp b with k_a, comp a with k_b
                let v1 = I * (t1 * norm);
                comps[b1][gi] += e.k[a1] * v1;
                if a1 != b1 {
                    comps[a1][gi] += e.k[b1] * v1;
                }
                let v2 = I * (t2 * norm);
                comps[b2][gi] += e.k[a2] * v2;
                if a2 != b2 {
                    comps[a2][gi] += e.k[b2] * v2;
                }
            }
        }
        self.phys_a = phys;

        out.project_leray_in_place();
        out.enforce_reality();
        out
    }

    /// `(B(a,b), B(b,a))` sharing one set of nine product transforms
    /// (packed into five). Both advecting fields must be solenoidal.
    pub fn bilinear_pair(
        &mut self,
        a: &SpectralField,
        b: &SpectralField,
    ) -> (SpectralField, SpectralField) {
        assert_eq!(a.grid(), self.grid);
        assert_eq!(b.grid(), self.grid);
        let mut phys_a = std::mem::take(&mut self.phys_a);
        let mut phys_b = std::mem::take(&mut self.phys_b);
        {
            let [pa0, pa1, pa2] = &mut phys_a;
            let [pb0, pb1, pb2] = &mut phys_b;
            self.to_physical_pair(a.component(0), a.component(1), pa0, pa1);
            self.to_physical_pair(b.component(0), b.component(1), pb0, pb1);
            self.to_physical_pair(a.component(2), b.component(2), pa2, pb2);
        }

        let mut b_ab = SpectralField::zeros(self.grid); // B(a,b)_i = i k_j (a_j b_i)^
        let mut b_ba = SpectralField::zeros(self.grid); // B(b,a)_j = i k_i (a_j b_i)^
        let norm = 1.0 / (self.m as f64).powi(3);
        // nine products (j, i) = a_j b_i, packed in pairs
        let order: [(usize, usize); 9] = [
            (0, 0),
            (0, 1),
            (0, 2),
            (1, 0),
            (1, 1),
            (1, 2),
            (2, 0),
            (2, 1),
            (2, 2),
        ];
        let mut slot = 0;
        while slot < 9 {
            let (j1, i1) = order[slot];
            let second = if slot + 1 < 9 { Some(order[slot + 1]) } else { None };
            match second {
                Some((j2, i2)) => {
                    self.products_spectrum_pair(
                        &phys_a[j1],
                        &phys_b[i1],
                        &phys_a[j2],
                        &phys_b[i2],
                    );
                    let mut ab = b_ab.components_mut();
                    let mut ba = b_ba.components_mut();
                    for e in &self.embed {
                        let (t1, t2) = self.split(e);
                        let gi = e.grid_idx as usize;
                        let v1 = I * (t1 * norm);
                        ab[i1][gi] += e.k[j1] * v1;
                        ba[j1][gi] += e.k[i1] * v1;
                        let v2 = I * (t2 * norm);
                        ab[i2][gi] += e.k[j2] * v2;
                        ba[j2][gi] += e.k[i2] * v2;
                    }
                    slot += 2;
                }
                None => {
                    self.product_spectrum(&phys_a[j1], &phys_b[i1]);
                    let mut ab = b_ab.components_mut();
                    let mut ba = b_ba.components_mut();
                    for e in &self.embed {
                        let t1 = self.cube[e.cube_idx as usize];
                        let gi = e.grid_idx as usize;
                        let v1 = I * (t1 * norm);
                        ab[i1][gi] += e.k[j1] * v1;
                        ba[j1][gi] += e.k[i1] * v1;
                    }
                    slot += 1;
                }
            }
        }
        self.phys_a = phys_a;
        self.phys_b = phys_b;

        b_ab.project_leray_in_place();
        b_ab.enforce_reality();
        b_ba.project_leray_in_place();
        b_ba.enforce_reality();
        (b_ab, b_ba)
    }

    /// `B(a, b)` alone (a solenoidal).
    pub fn bilinear(&mut self, a: &SpectralField, b: &SpectralField) -> SpectralField {
        self.bilinear_pair(a, b).0
    }
}
