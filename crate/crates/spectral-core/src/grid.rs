use crate::{Result, SpectralError};

/// Largest supported Galerkin cutoff. Desk-scale experiments use N ≤ 32;
/// the cap keeps a dense coefficient cube within ~100 MB.
pub const MAX_CUTOFF: u32 = 64;

/// Integer wavevector on the lattice `ℤ³ \ {0}` (κ₀ = 1 units).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Wavevector(pub [i32; 3]);

impl Wavevector {
    pub fn new(x: i32, y: i32, z: i32) -> Self {
        Wavevector([x, y, z])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// Squared Euclidean length, exact in integer arithmetic.
    pub fn norm_sq(&self) -> i64 {
        let [x, y, z] = self.0;
        (x as i64) * (x as i64) + (y as i64) * (y as i64) + (z as i64) * (z as i64)
    }

    /// Euclidean length |k|. At least 1 for any stored mode.
    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    pub fn neg(&self) -> Self {
        Wavevector([-self.0[0], -self.0[1], -self.0[2]])
    }

    pub fn add(&self, other: Wavevector) -> Self {
        Wavevector([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    pub fn sub(&self, other: Wavevector) -> Self {
        Wavevector([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }

    /// Canonical representative of the pair {k, −k}: positive in the last
    /// nonzero coordinate scanned z, y, x. Exactly one of k, −k is canonical.
    pub fn is_canonical(&self) -> bool {
        let [x, y, z] = self.0;
        z > 0 || (z == 0 && (y > 0 || (y == 0 && x > 0)))
    }
}

/// Cube-truncated wavenumber lattice `{k : 0 < max_i |k_i| ≤ N}`.
///
/// The truncation shape is a cube in the max-norm, which keeps convolution
/// index arithmetic closed; Euclidean shells are used only for radius fits.
/// The set is closed under negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WavevectorGrid {
    cutoff: u32,
}

impl WavevectorGrid {
    /// Build the lattice for cutoff `N`. Errors outside `1..=MAX_CUTOFF`.
    pub fn new(cutoff: u32) -> Result<Self> {
        if cutoff == 0 || cutoff > MAX_CUTOFF {
            return Err(SpectralError::CutoffOutOfRange(cutoff));
        }
        Ok(WavevectorGrid { cutoff })
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Edge length of the dense coefficient cube, `2N + 1`.
    pub fn side(&self) -> usize {
        2 * self.cutoff as usize + 1
    }

    /// Number of stored modes, `(2N+1)³ − 1` (origin excluded).
    pub fn mode_count(&self) -> usize {
        self.side().pow(3) - 1
    }

    pub fn contains(&self, k: Wavevector) -> bool {
        let n = self.cutoff as i32;
        k.0.iter().all(|&c| c.abs() <= n) && !k.is_zero()
    }

    /// Dense index of `k` in the coefficient cube (origin included in the
    /// layout, z fastest). Caller must ensure `|k_i| ≤ N`.
    #[inline]
    pub fn index_of(&self, k: Wavevector) -> usize {
        let n = self.cutoff as i32;
        let side = self.side();
        let ix = (k.0[0] + n) as usize;
        let iy = (k.0[1] + n) as usize;
        let iz = (k.0[2] + n) as usize;
        (ix * side + iy) * side + iz
    }

    /// Wavevector at a dense index.
    #[inline]
    pub fn wavevector_at(&self, index: usize) -> Wavevector {
        let n = self.cutoff as i32;
        let side = self.side();
        let iz = (index % side) as i32 - n;
        let iy = ((index / side) % side) as i32 - n;
        let ix = (index / (side * side)) as i32 - n;
        Wavevector([ix, iy, iz])
    }

    /// All modes in dense-index order, origin skipped.
    pub fn modes(&self) -> impl Iterator<Item = Wavevector> + '_ {
        let side = self.side();
        (0..side.pow(3))
            .map(move |i| self.wavevector_at(i))
            .filter(|k| !k.is_zero())
    }

    /// Largest Euclidean length present on the lattice, `N√3`.
    pub fn max_norm(&self) -> f64 {
        self.cutoff as f64 * 3f64.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_counts_match_lattice_enumeration() {
        assert_eq!(WavevectorGrid::new(1).unwrap().mode_count(), 26);
        assert_eq!(WavevectorGrid::new(2).unwrap().mode_count(), 124);
        // Independent enumeration for N = 8.
        let grid = WavevectorGrid::new(8).unwrap();
        let mut count = 0usize;
        for x in -8i32..=8 {
            for y in -8i32..=8 {
                for z in -8i32..=8 {
                    if (x, y, z) != (0, 0, 0) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 4912);
        assert_eq!(grid.mode_count(), count);
        assert_eq!(grid.modes().count(), count);
    }

    #[test]
    fn rejects_out_of_range_cutoffs() {
        assert!(WavevectorGrid::new(0).is_err());
        assert!(WavevectorGrid::new(MAX_CUTOFF + 1).is_err());
        assert!(WavevectorGrid::new(MAX_CUTOFF).is_ok());
    }

    #[test]
    fn closed_under_negation_and_indexing_round_trips() {
        let grid = WavevectorGrid::new(3).unwrap();
        for k in grid.modes() {
            assert!(grid.contains(k.neg()));
            assert_eq!(grid.wavevector_at(grid.index_of(k)), k);
            assert!(k.norm_sq() >= 1);
        }
    }

    #[test]
    fn canonical_splits_pairs() {
        let grid = WavevectorGrid::new(2).unwrap();
        let canonical = grid.modes().filter(|k| k.is_canonical()).count();
        assert_eq!(canonical * 2, grid.mode_count());
        for k in grid.modes() {
            assert_ne!(k.is_canonical(), k.neg().is_canonical());
        }
    }
}
