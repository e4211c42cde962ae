//! Lipkin-Meshkov-Glick model in the maximal-spin `S_z` basis.
//!
//! ```text
//! H = -(lambda / 2S)(1 + gamma)(S^2 - S_z^2 - S) - 2h S_z
//!     -(lambda / 4S)(1 - gamma)(S_+^2 + S_-^2)
//! ```
//!
//! `S_+^2` only couples `m` to `m + 2`, so the matrix splits into an even and
//! an odd `s_z` block, each of which is tridiagonal.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fidelity::{pair_susceptibilities, DensityDistribution, FidelityCurve, FidelityRecord};
use crate::tridiagonal::SymmetricTridiagonal;

/// Relative energy window inside which the two parity sectors count as tied.
pub const PARITY_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgParams {
    pub spin: u32,
    pub gamma: f64,
    pub field: f64,
    pub coupling: f64,
}

impl LmgParams {
    /// Unit coupling, which puts the critical field at `h = 1`.
    pub fn new(spin: u32, gamma: f64, field: f64) -> Result<Self> {
        Self::with_coupling(spin, gamma, field, 1.0)
    }

    pub fn with_coupling(spin: u32, gamma: f64, field: f64, coupling: f64) -> Result<Self> {
        let p = Self {
            spin,
            gamma,
            field,
            coupling,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.spin < 1 {
            return Err(Error::Validation("total spin S must be at least 1".into()));
        }
        if !(self.coupling > 0.0) || !self.coupling.is_finite() {
            return Err(Error::Validation(format!(
                "coupling must be positive, got {}",
                self.coupling
            )));
        }
        if !self.gamma.is_finite() || !self.field.is_finite() {
            return Err(Error::Validation("gamma and h must be finite".into()));
        }
        Ok(())
    }
}

/// `s_z` parity sector an eigenvector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    /// Solved without the block decomposition.
    Full,
}

impl Parity {
    fn contains(self, m: i64) -> bool {
        match self {
            Parity::Even => m.rem_euclid(2) == 0,
            Parity::Odd => m.rem_euclid(2) == 1,
            Parity::Full => true,
        }
    }
}

/// Hamiltonian stored as its diagonal and its `m <-> m + 2` band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetricMatrix {
    spin: u32,
    diagonal: Vec<f64>,
    band: Vec<f64>,
}

impl BandedSymmetricMatrix {
    pub fn spin(&self) -> u32 {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Entry `i` is the diagonal at `m = i - S`.
    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Entry `i` couples `m = i - S` with `m + 2`.
    pub fn band(&self) -> &[f64] {
        &self.band
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal));
        for (i, &b) in self.band.iter().enumerate() {
            h[(i, i + 2)] = b;
            h[(i + 2, i)] = b;
        }
        debug_assert_eq!(h.nrows(), n);
        h
    }

    /// Gershgorin scale of the full matrix.
    pub fn scale(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut r = self.diagonal[i].abs();
                if i >= 2 {
                    r += self.band[i - 2].abs();
                }
                if i + 2 < n {
                    r += self.band[i].abs();
                }
                r
            })
            .fold(f64::MIN_POSITIVE, f64::max)
    }

    /// Basis indices (into `-S..=S`) belonging to a sector.
    pub fn sector_indices(&self, parity: Parity) -> Vec<usize> {
        let s = self.spin as i64;
        (0..self.dim())
            .filter(|&i| parity.contains(i as i64 - s))
            .collect()
    }

    /// The tridiagonal block of one parity sector.
    pub fn parity_block(&self, parity: Parity) -> Result<SymmetricTridiagonal> {
        if parity == Parity::Full {
            return Err(Error::Validation(
                "the full matrix is not tridiagonal".into(),
            ));
        }
        let idx = self.sector_indices(parity);
        let diag = idx.iter().map(|&i| self.diagonal[i]).collect();
        let off = idx.windows(2).map(|w| self.band[w[0]]).collect();
        SymmetricTridiagonal::new(diag, off)
    }
}

/// Eq. (7) of the model in the `|s_z>` basis.
pub fn build_hamiltonian(p: &LmgParams) -> Result<BandedSymmetricMatrix> {
    p.validate()?;
    let s = p.spin as f64;
    let dim = 2 * p.spin as usize + 1;
    let long = p.coupling / (2.0 * s) * (1.0 + p.gamma);
    let pair = p.coupling / (4.0 * s) * (1.0 - p.gamma);
    let diagonal = (0..dim)
        .map(|i| {
            let m = i as f64 - s;
            -long * (s * (s + 1.0) - m * m - s) - 2.0 * p.field * m
        })
        .collect();
    let band = (0..dim - 2)
        .map(|i| {
            let m = i as f64 - s;
            let up1 = ((s - m) * (s + m + 1.0)).sqrt();
            let up2 = ((s - m - 1.0) * (s + m + 2.0)).sqrt();
            -pair * up1 * up2
        })
        .collect();
    Ok(BandedSymmetricMatrix {
        spin: p.spin,
        diagonal,
        band,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Eigensolver {
    /// Sturm bisection plus inverse iteration on each tridiagonal block.
    #[default]
    Tridiagonal,
    /// Dense symmetric eigensolve of each block.
    DenseBlocks,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmgGroundState {
    pub spin: u32,
    pub energy: f64,
    /// `phi(s_z)` for `s_z = -S..=S`.
    pub amplitudes: Vec<f64>,
    pub parity: Parity,
    /// Max-norm of `H phi - E phi`.
    pub residual: f64,
}

/// Global ground state; ties between sectors go to the even one.
pub fn ground_state(h: &BandedSymmetricMatrix) -> Result<LmgGroundState> {
    ground_state_with(h, Eigensolver::default())
}

pub fn ground_state_with(h: &BandedSymmetricMatrix, solver: Eigensolver) -> Result<LmgGroundState> {
    if h.dim() < 2 {
        return Err(Error::Validation("Hamiltonian dimension below 2".into()));
    }
    let even = sector_ground_state(h, Parity::Even, solver)?;
    let odd = sector_ground_state(h, Parity::Odd, solver)?;
    let tie = PARITY_TIE_TOLERANCE * even.energy.abs().max(1.0);
    Ok(if odd.energy < even.energy - tie {
        odd
    } else {
        even
    })
}

/// Lowest state within one parity sector.
pub fn sector_ground_state(
    h: &BandedSymmetricMatrix,
    parity: Parity,
    solver: Eigensolver,
) -> Result<LmgGroundState> {
    let idx = h.sector_indices(parity);
    let block = h.parity_block(parity)?;
    let (energy, vector) = match solver {
        Eigensolver::Tridiagonal => {
            let pair = block.lowest_eigenpair()?;
            (pair.value, pair.vector)
        }
        Eigensolver::DenseBlocks => dense_lowest(&block)?,
    };
    let mut amplitudes = vec![0.0; h.dim()];
    for (&i, &v) in idx.iter().zip(&vector) {
        amplitudes[i] = v;
    }
    finish(h, energy, amplitudes, parity)
}

/// Dense diagonalization of the whole matrix, ignoring the block structure.
pub fn ground_state_dense_full(h: &BandedSymmetricMatrix) -> Result<LmgGroundState> {
    let eig = h.to_dense().symmetric_eigen();
    let (k, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Validation("empty matrix".into()))?;
    let amplitudes = eig.eigenvectors.column(k).iter().cloned().collect();
    finish(h, energy, amplitudes, Parity::Full)
}

fn dense_lowest(block: &SymmetricTridiagonal) -> Result<(f64, Vec<f64>)> {
    let n = block.dim();
    let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(block.diag()));
    for (i, &e) in block.off().iter().enumerate() {
        m[(i, i + 1)] = e;
        m[(i + 1, i)] = e;
    }
    let eig = m.symmetric_eigen();
    let (k, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Validation("empty block".into()))?;
    debug_assert_eq!(eig.eigenvectors.nrows(), n);
    Ok((value, eig.eigenvectors.column(k).iter().cloned().collect()))
}

fn finish(
    h: &BandedSymmetricMatrix,
    energy: f64,
    mut amplitudes: Vec<f64>,
    parity: Parity,
) -> Result<LmgGroundState> {
    let norm = amplitudes.iter().map(|x| x * x).sum::<f64>().sqrt();
    amplitudes.iter_mut().for_each(|x| *x /= norm);
    if let Some(first) = amplitudes.iter().find(|x| **x != 0.0) {
        if *first < 0.0 {
            amplitudes.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let residual = banded_residual(h, energy, &amplitudes);
    let limit = 1e-10 * h.scale();
    if !(residual <= limit) {
        return Err(Error::NumericFailure {
            context: format!("LMG ground state (S = {})", h.spin),
            iterations: 0,
            residual,
        });
    }
    Ok(LmgGroundState {
        spin: h.spin,
        energy,
        amplitudes,
        parity,
        residual,
    })
}

fn banded_residual(h: &BandedSymmetricMatrix, energy: f64, v: &[f64]) -> f64 {
    let n = h.dim();
    (0..n)
        .map(|i| {
            let mut y = (h.diagonal[i] - energy) * v[i];
            if i >= 2 {
                y += h.band[i - 2] * v[i - 2];
            }
            if i + 2 < n {
                y += h.band[i] * v[i + 2];
            }
            y.abs()
        })
        .fold(0.0, f64::max)
}

/// `n(s_z) = phi(s_z)^2` over `s_z = -S..=S`.
pub fn density_distribution(g: &LmgGroundState) -> Result<DensityDistribution> {
    let s = g.spin as f64;
    let labels = (0..g.amplitudes.len()).map(|i| i as f64 - s).collect();
    let weights = g.amplitudes.iter().map(|a| a * a).collect();
    DensityDistribution::new(labels, weights)
}

/// Ground-state density at one parameter point.
pub fn ground_density(p: &LmgParams, solver: Eigensolver) -> Result<DensityDistribution> {
    let h = build_hamiltonian(p)?;
    let g = ground_state_with(&h, solver).map_err(|e| with_field(e, p.field))?;
    density_distribution(&g)
}

fn with_field(e: Error, field: f64) -> Error {
    match e {
        Error::NumericFailure {
            context,
            iterations,
            residual,
        } => Error::NumericFailure {
            context: format!("{context} at h = {field}"),
            iterations,
            residual,
        },
        other => other,
    }
}

/// Field sweep configuration. The grid spacing equals the fidelity step `dh`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgSweep {
    pub spin: u32,
    pub gamma: f64,
    pub coupling: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub dh: f64,
    pub solver: Eigensolver,
}

impl LmgSweep {
    pub fn new(spin: u32, gamma: f64, h_min: f64, h_max: f64, dh: f64) -> Self {
        Self {
            spin,
            gamma,
            coupling: 1.0,
            h_min,
            h_max,
            dh,
            solver: Eigensolver::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        LmgParams::with_coupling(self.spin, self.gamma, self.h_min, self.coupling)?;
        if !(self.h_min < self.h_max) || !self.h_max.is_finite() {
            return Err(Error::Validation(format!(
                "field range [{}, {}] is empty",
                self.h_min, self.h_max
            )));
        }
        if !(self.dh > 0.0) {
            return Err(Error::Validation(format!(
                "dh must be positive, got {}",
                self.dh
            )));
        }
        Ok(())
    }

    /// Grid points `h_min + i dh` up to `h_max`.
    pub fn grid(&self) -> Vec<f64> {
        let steps = ((self.h_max - self.h_min) / self.dh + 1e-9).floor() as usize;
        (0..=steps)
            .map(|i| self.h_min + i as f64 * self.dh)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmgSweepOutput {
    pub curve: FidelityCurve,
    /// Every density that was evaluated, including the trailing `h_max + dh`.
    pub densities: Vec<(f64, DensityDistribution)>,
}

/// Fidelity between `n(h)` and `n(h + dh)` on every grid point, with both
/// susceptibility estimates.
pub fn lmg_dff_sweep(sweep: &LmgSweep) -> Result<LmgSweepOutput> {
    sweep.validate()?;
    let grid = sweep.grid();
    let mut fields = grid.clone();
    fields.push(sweep.h_min + grid.len() as f64 * sweep.dh);
    let densities = fields
        .iter()
        .map(|&h| {
            let p = LmgParams::with_coupling(sweep.spin, sweep.gamma, h, sweep.coupling)?;
            Ok((h, ground_density(&p, sweep.solver)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let records = densities
        .windows(2)
        .map(|w| {
            let (h, lo) = (&w[0].0, &w[0].1);
            let hi = &w[1].1;
            let (fidelity, chi_fidelity, chi_derivative) = pair_susceptibilities(lo, hi, sweep.dh)?;
            Ok(FidelityRecord {
                parameter: *h,
                step: sweep.dh,
                fidelity,
                chi_fidelity,
                chi_derivative: Some(chi_derivative.value),
                singular_terms: chi_derivative.singular_terms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LmgSweepOutput {
        curve: FidelityCurve::new("h", records)?,
        densities,
    })
}
