use std::f64::consts::PI;

use super::bae::BetheRoots;
use crate::error::{Error, Result};
use crate::fidelity::{DensityDistribution, Normalization};

pub const MIN_BINS: usize = 16;
pub const DEFAULT_BINS: usize = 512;

/// Inverse root spacing `rho[(k_{j+1} + k_j)/2] = 1 / [L (k_{j+1} - k_j)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOfStates {
    pub k_mid: Vec<f64>,
    pub rho: Vec<f64>,
    /// Extreme charge rapidities.
    pub support: (f64, f64),
}

impl DensityOfStates {
    /// From strictly increasing momenta on a ring of `sites`.
    pub fn from_momenta(k: &[f64], sites: usize) -> Result<Self> {
        if k.len() < 2 {
            return Err(Error::Validation("need at least two momenta".into()));
        }
        if let Some(w) = k.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Validation(format!(
                "momenta not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
        let l = sites as f64;
        let k_mid = k.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let rho = k.windows(2).map(|w| 1.0 / (l * (w[1] - w[0]))).collect();
        Ok(Self {
            k_mid,
            rho,
            support: (k[0], k[k.len() - 1]),
        })
    }

    pub fn len(&self) -> usize {
        self.k_mid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_mid.is_empty()
    }

    /// Linear interpolation between midpoints, zero outside them.
    pub fn interpolate(&self, k: f64) -> f64 {
        let (first, last) = (self.k_mid[0], self.k_mid[self.len() - 1]);
        if k < first || k > last {
            return 0.0;
        }
        let i = self.k_mid.partition_point(|&x| x <= k);
        if i == 0 {
            return self.rho[0];
        }
        if i == self.len() {
            return self.rho[self.len() - 1];
        }
        let (x0, x1) = (self.k_mid[i - 1], self.k_mid[i]);
        let t = (k - x0) / (x1 - x0);
        self.rho[i - 1] + t * (self.rho[i] - self.rho[i - 1])
    }
}

pub fn density_of_state(roots: &BetheRoots) -> Result<DensityOfStates> {
    DensityOfStates::from_momenta(&roots.k, roots.params.sites)
}

/// Centres of `bins` equal bins over `[-pi, pi]`.
pub fn bin_centres(bins: usize) -> Vec<f64> {
    let width = 2.0 * PI / bins as f64;
    (0..bins).map(|i| -PI + (i as f64 + 0.5) * width).collect()
}

/// Samples the interpolated density at bin centres, multiplies by the bin
/// width and renormalizes to a distribution on the common grid.
pub fn resample_to_grid(dos: &DensityOfStates, bins: usize) -> Result<DensityDistribution> {
    if bins < MIN_BINS {
        return Err(Error::Validation(format!(
            "need at least {MIN_BINS} bins, got {bins}"
        )));
    }
    let width = 2.0 * PI / bins as f64;
    let labels = bin_centres(bins);
    let weights = labels.iter().map(|&k| dos.interpolate(k) * width).collect();
    DensityDistribution::with_normalization(labels, weights, Normalization::Renormalize)
}
