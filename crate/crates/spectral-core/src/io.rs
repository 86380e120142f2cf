//! Field serialization.
//!
//! Schema: `{"N": cutoff, "modes": [{"k": [i, j, l], "re": [..3], "im": [..3]}]}`
//! storing the canonical half-spectrum only (one representative per {k, −k}
//! pair). The loader re-derives the conjugate mirrors, so reality holds by
//! construction, and validates lattice membership, duplicates, and
//! finiteness. Exact zeros are omitted on write.

use crate::field::SpectralField;
use crate::grid::{Wavevector, WavevectorGrid};
use crate::{Complex64, Result, SpectralError};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct FieldJson {
    #[serde(rename = "N")]
    n: u32,
    modes: Vec<ModeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModeJson {
    k: [i32; 3],
    re: [f64; 3],
    im: [f64; 3],
}

pub fn field_to_json(u: &SpectralField) -> String {
    let grid = u.grid();
    let mut modes = Vec::new();
    for k in grid.modes() {
        if !k.is_canonical() {
            continue;
        }
        let v = u.coeff(k);
        if v.iter().all(|c| c.re == 0.0 && c.im == 0.0) {
            continue;
        }
        modes.push(ModeJson {
            k: k.0,
            re: [v[0].re, v[1].re, v[2].re],
            im: [v[0].im, v[1].im, v[2].im],
        });
    }
    serde_json::to_string(&FieldJson {
        n: grid.cutoff(),
        modes,
    })
    .expect("field serialization cannot fail")
}

pub fn field_from_json(text: &str) -> Result<SpectralField> {
    let parsed: FieldJson = serde_json::from_str(text)
        .map_err(|e| SpectralError::InvalidField(format!("bad JSON: {e}")))?;
    let grid = WavevectorGrid::new(parsed.n)?;
    let mut field = SpectralField::zeros(grid);
    let mut seen: HashSet<[i32; 3]> = HashSet::new();
    for mode in &parsed.modes {
        let k = Wavevector(mode.k);
        if k.is_zero() {
            return Err(SpectralError::InvalidField(
                "mean-free field cannot store k = 0".into(),
            ));
        }
        if !grid.contains(k) {
            return Err(SpectralError::InvalidField(format!(
                "mode {:?} outside cutoff N = {}",
                mode.k, parsed.n
            )));
        }
        if !seen.insert(mode.k) || seen.contains(&k.neg().0) {
            return Err(SpectralError::InvalidField(format!(
                "duplicate mode pair at {:?}",
                mode.k
            )));
        }
        let mut value = [Complex64::default(); 3];
        for c in 0..3 {
            if !mode.re[c].is_finite() || !mode.im[c].is_finite() {
                return Err(SpectralError::InvalidField(format!(
                    "non-finite coefficient at {:?}",
                    mode.k
                )));
            }
            value[c] = Complex64::new(mode.re[c], mode.im[c]);
        }
        field.set_mode_pair(k, value);
    }
    Ok(field)
}

pub fn write_field(path: &Path, u: &SpectralField) -> Result<()> {
    std::fs::write(path, field_to_json(u))?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SpectralField> {
    let text = std::fs::read_to_string(path)?;
    field_from_json(&text)
}
