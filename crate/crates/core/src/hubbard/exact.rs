//! Dense exact diagonalization of small periodic Hubbard rings, used as an
//! independent check on the Bethe-ansatz energies.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const MAX_ORACLE_SITES: usize = 8;

/// Occupation bitmasks with `count` set bits among `sites`.
fn configurations(sites: usize, count: usize) -> Vec<u32> {
    (0u32..1 << sites)
        .filter(|c| c.count_ones() as usize == count)
        .collect()
}

/// Hopping matrix `-sum_j (c+_j c_{j+1} + h.c.)` for one spin species on a ring.
fn hopping(sites: usize, basis: &[u32]) -> DMatrix<f64> {
    let dim = basis.len();
    let mut t = DMatrix::zeros(dim, dim);
    let index = |c: u32| basis.binary_search(&c).ok();
    for (col, &c) in basis.iter().enumerate() {
        for i in 0..sites {
            let j = (i + 1) % sites;
            for (from, to) in [(i, j), (j, i)] {
                if c & (1 << from) == 0 || c & (1 << to) != 0 {
                    continue;
                }
                let (lo, hi) = (from.min(to), from.max(to));
                let between = (c >> (lo + 1)) & ((1u32 << (hi - lo - 1)) - 1);
                let sign = if between.count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let target = c & !(1 << from) | (1 << to);
                if let Some(row) = index(target) {
                    t[(row, col)] -= sign;
                }
            }
        }
    }
    t
}

/// Lowest eigenvalue of the ring Hamiltonian in the sector with
/// `electrons - down_spins` up and `down_spins` down electrons.
pub fn exact_ground_energy_small(
    sites: usize,
    electrons: usize,
    down_spins: usize,
    u: f64,
) -> Result<f64> {
    if sites > MAX_ORACLE_SITES {
        return Err(Error::Configuration(format!(
            "exact diagonalization capped at L = {MAX_ORACLE_SITES}, got {sites}"
        )));
    }
    if sites < 3 {
        return Err(Error::Configuration(format!(
            "periodic ring needs L >= 3, got {sites}"
        )));
    }
    if electrons > 2 * sites
        || down_spins > electrons
        || electrons - down_spins > sites
        || down_spins > sites
    {
        return Err(Error::Configuration(format!(
            "no states with N = {electrons}, M = {down_spins} on L = {sites}"
        )));
    }
    if !u.is_finite() {
        return Err(Error::Validation(format!("U must be finite, got {u}")));
    }
    let up = configurations(sites, electrons - down_spins);
    let down = configurations(sites, down_spins);
    let t_up = hopping(sites, &up);
    let t_down = hopping(sites, &down);
    let (du, dd) = (up.len(), down.len());
    let dim = du * dd;
    let mut h = DMatrix::zeros(dim, dim);
    for a in 0..du {
        for b in 0..dd {
            let row = a * dd + b;
            h[(row, row)] = u * (up[a] & down[b]).count_ones() as f64;
            for a2 in 0..du {
                if t_up[(a2, a)] != 0.0 {
                    h[(a2 * dd + b, row)] += t_up[(a2, a)];
                }
            }
            for b2 in 0..dd {
                if t_down[(b2, b)] != 0.0 {
                    h[(a * dd + b2, row)] += t_down[(b2, b)];
                }
            }
        }
    }
    Ok(h.symmetric_eigenvalues().min())
}
