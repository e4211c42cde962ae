use super::bae::{continuation_sweep_with, BetheRoots, ContinuationError, SolverOptions};
use super::dos::{density_of_state, resample_to_grid};
use crate::error::{Error, Result};
use crate::fidelity::{pair_susceptibilities, DensityDistribution, FidelityCurve, FidelityRecord};

/// Resampled momentum-space density for each solution, ordered by ascending `U`.
pub fn resampled_densities(
    roots: &[BetheRoots],
    bins: usize,
) -> Result<Vec<(f64, DensityDistribution)>> {
    let mut out = roots
        .iter()
        .map(|r| {
            Ok((
                r.interaction(),
                resample_to_grid(&density_of_state(r)?, bins)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Fidelity between neighbouring solutions. Each record sits at the lower
/// `U` of its pair and carries the pair spacing as its step.
pub fn fidelity_curve_from_roots(
    roots: &[BetheRoots],
    bins: usize,
    with_derivative: bool,
) -> Result<FidelityCurve> {
    let densities = resampled_densities(roots, bins)?;
    let records = densities
        .windows(2)
        .map(|w| {
            let (u_lo, lo) = (&w[0].0, &w[0].1);
            let (u_hi, hi) = (&w[1].0, &w[1].1);
            let step = u_hi - u_lo;
            let (fidelity, chi_fidelity, chi_derivative) = pair_susceptibilities(lo, hi, step)?;
            Ok(FidelityRecord {
                parameter: *u_lo,
                step,
                fidelity,
                chi_fidelity,
                chi_derivative: with_derivative.then_some(chi_derivative.value),
                singular_terms: if with_derivative {
                    chi_derivative.singular_terms
                } else {
                    0
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FidelityCurve::new("U", records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HubbardSweep {
    pub sites: usize,
    pub electrons: usize,
    pub down_spins: usize,
    pub u_start: f64,
    pub u_end: f64,
    pub du: f64,
    pub bins: usize,
    pub with_derivative: bool,
    pub solver: SolverOptions,
}

impl HubbardSweep {
    pub fn half_filled(sites: usize, u_start: f64, u_end: f64, du: f64) -> Self {
        Self {
            sites,
            electrons: sites,
            down_spins: sites / 2,
            u_start,
            u_end,
            du,
            bins: super::dos::DEFAULT_BINS,
            with_derivative: false,
            solver: SolverOptions::default(),
        }
    }

    pub fn continuation(&self) -> std::result::Result<Vec<BetheRoots>, ContinuationError> {
        self.continuation_with_progress(|_| {})
    }

    pub fn continuation_with_progress<P: FnMut(&BetheRoots)>(
        &self,
        progress: P,
    ) -> std::result::Result<Vec<BetheRoots>, ContinuationError> {
        continuation_sweep_with(
            self.sites,
            self.electrons,
            self.down_spins,
            self.u_start,
            self.u_end,
            self.du,
            &self.solver,
            progress,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HubbardSweepOutput {
    pub roots: Vec<BetheRoots>,
    pub curve: FidelityCurve,
}

/// Continuation from `U_start` down to `U_end`, then the fidelity curve of
/// the resampled densities.
pub fn hubbard_dff_sweep(sweep: &HubbardSweep) -> Result<HubbardSweepOutput> {
    if sweep.bins < super::dos::MIN_BINS {
        return Err(Error::Validation(format!(
            "need at least {} bins, got {}",
            super::dos::MIN_BINS,
            sweep.bins
        )));
    }
    let roots = sweep.continuation().map_err(|e| match e.source {
        Error::NonConvergence {
            iterations,
            residual,
        }
        | Error::NumericFailure {
            iterations,
            residual,
            ..
        } => Error::NumericFailure {
            context: format!(
                "continuation at U = {} ({} points converged)",
                e.failed_at,
                e.converged.len()
            ),
            iterations,
            residual,
        },
        other => other,
    })?;
    let curve = fidelity_curve_from_roots(&roots, sweep.bins, sweep.with_derivative)?;
    Ok(HubbardSweepOutput { roots, curve })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_records() {
        let mut sweep = HubbardSweep::half_filled(30, 4.0, 1.0, 0.5);
        sweep.with_derivative = true;
        let out = hubbard_dff_sweep(&sweep).unwrap();
        assert_eq!(out.roots.len(), 7);
        assert_eq!(out.curve.len(), 6);
        let first = &out.curve.records()[0];
        assert!((first.parameter - 1.0).abs() < 1e-12);
        assert!((first.step - 0.5).abs() < 1e-12);
        for r in out.curve.records() {
            assert!(r.fidelity <= 1.0 && r.fidelity > 0.9);
            let chi6 = r.chi_derivative.unwrap();
            assert!(chi6 > 0.0 && chi6 <= r.chi_fidelity * 1.05);
        }
        sweep.bins = 8;
        assert!(hubbard_dff_sweep(&sweep).is_err());
    }
}
