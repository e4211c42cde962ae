use std::path::{Path, PathBuf};

use dfflab_core::hubbard::{
    density_of_state, fidelity_curve_from_roots, thermodynamic_dos_with, BetheRoots, HubbardSweep,
    SolverOptions, ThermoOptions,
};
use dfflab_core::lmg::{lmg_dff_sweep, Eigensolver, LmgSweep, LmgSweepOutput};
use dfflab_core::{fidelity, susceptibility_from_fidelity, FidelityCurve, Normalization};

use crate::config::{HubbardConfig, LmgConfig, SolverChoice, ThermoConfig};
use crate::error::{CliError, Result};
use crate::output::{float, read_distribution, write_csv};

/// Human-readable progress on standard error, silent unless enabled.
#[derive(Debug, Clone, Copy, Default)]
pub struct Progress(pub bool);

impl Progress {
    pub fn note(&self, msg: impl FnOnce() -> String) {
        if self.0 {
            eprintln!("{}", msg());
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmgRun {
    pub output: LmgSweepOutput,
    pub files: Vec<PathBuf>,
}

pub fn run_lmg(cfg: &LmgConfig, dir: &Path, progress: Progress) -> Result<LmgRun> {
    cfg.validate()?;
    let sweep = LmgSweep {
        coupling: cfg.lambda_c,
        solver: match cfg.solver {
            SolverChoice::Tridiagonal => Eigensolver::Tridiagonal,
            SolverChoice::Dense => Eigensolver::DenseBlocks,
        },
        ..LmgSweep::new(cfg.spin, cfg.gamma, cfg.h_min, cfg.h_max, cfg.dh)
    };
    progress.note(|| {
        format!(
            "lmg: S = {}, {} field points",
            cfg.spin,
            sweep.grid().len() + 1
        )
    });
    let output = lmg_dff_sweep(&sweep)?;

    let mut density = Vec::new();
    for (h, n) in &output.densities {
        let h = float(*h)?;
        for (s, w) in n.labels().iter().zip(n.weights()) {
            density.push(vec![h.clone(), format!("{}", *s as i64), float(*w)?]);
        }
    }
    let dff = output
        .curve
        .records()
        .iter()
        .map(|r| {
            Ok(vec![
                float(r.parameter)?,
                float(r.fidelity)?,
                float(r.chi_fidelity)?,
                float(r.chi_derivative.unwrap_or(f64::NAN))?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let files = vec![
        write_csv(dir, "lmg_density.csv", &["h", "s_z", "n"], &density)?,
        write_csv(dir, "lmg_dff.csv", &["h", "F", "chi_eq5", "chi_eq6"], &dff)?,
    ];
    progress.note(|| {
        format!(
            "lmg: wrote {} density rows, {} fidelity rows",
            density.len(),
            dff.len()
        )
    });
    Ok(LmgRun { output, files })
}

#[derive(Debug, Clone)]
pub struct HubbardRun {
    pub roots: Vec<BetheRoots>,
    pub curve: FidelityCurve,
    pub files: Vec<PathBuf>,
}

fn hubbard_files(
    roots: &[BetheRoots],
    curve: &FidelityCurve,
    with_eq6: bool,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut root_rows = Vec::new();
    let mut dos_rows = Vec::new();
    for r in roots {
        let u = float(r.interaction())?;
        for (j, (k, i)) in r.k.iter().zip(r.qnums.charge()).enumerate() {
            root_rows.push(vec![
                u.clone(),
                "k".into(),
                (j + 1).to_string(),
                float(*i)?,
                float(*k)?,
            ]);
        }
        for (a, (l, q)) in r.lambda.iter().zip(r.qnums.spin()).enumerate() {
            root_rows.push(vec![
                u.clone(),
                "lambda".into(),
                (a + 1).to_string(),
                float(*q)?,
                float(*l)?,
            ]);
        }
        let d = density_of_state(r)?;
        for (k, rho) in d.k_mid.iter().zip(&d.rho) {
            dos_rows.push(vec![u.clone(), float(*k)?, float(*rho)?]);
        }
    }
    let dff_rows = curve
        .records()
        .iter()
        .map(|r| {
            let mut row = vec![
                float(r.parameter)?,
                float(r.fidelity)?,
                float(r.chi_fidelity)?,
            ];
            if with_eq6 {
                row.push(float(r.chi_derivative.unwrap_or(f64::NAN))?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let dff_header: &[&str] = if with_eq6 {
        &["U", "F", "chi_eq5", "chi_eq6"]
    } else {
        &["U", "F", "chi_eq5"]
    };
    Ok(vec![
        write_csv(
            dir,
            "hubbard_roots.csv",
            &["U", "kind", "index", "quantum_number", "value"],
            &root_rows,
        )?,
        write_csv(dir, "hubbard_dos.csv", &["U", "k_mid", "rho"], &dos_rows)?,
        write_csv(dir, "hubbard_dff.csv", dff_header, &dff_rows)?,
    ])
}

/// Continuation sweep plus fidelity curve. When the continuation stops
/// early, everything that converged is written before the error returns.
pub fn run_hubbard(cfg: &HubbardConfig, dir: &Path, progress: Progress) -> Result<HubbardRun> {
    cfg.validate()?;
    let sweep = HubbardSweep {
        sites: cfg.sites,
        electrons: cfg.electrons(),
        down_spins: cfg.down_spins(),
        u_start: cfg.u_start,
        u_end: cfg.u_end,
        du: cfg.du,
        bins: cfg.bins,
        with_derivative: cfg.eq6,
        solver: SolverOptions {
            tol: cfg.newton_tol,
            max_newton: cfg.max_iter,
            ..SolverOptions::default()
        },
    };
    let mut count = 0usize;
    let outcome = sweep.continuation_with_progress(|r| {
        count += 1;
        progress.note(|| {
            format!(
                "hubbard: [{count}] U = {:.6} residual = {:.3e} newton = {}",
                r.interaction(),
                r.residual,
                r.newton_iterations
            )
        });
    });
    match outcome {
        Ok(roots) => {
            let curve = fidelity_curve_from_roots(&roots, cfg.bins, cfg.eq6)?;
            let files = hubbard_files(&roots, &curve, cfg.eq6, dir)?;
            Ok(HubbardRun {
                roots,
                curve,
                files,
            })
        }
        Err(e) => {
            let curve = if e.converged.len() >= 2 {
                fidelity_curve_from_roots(&e.converged, cfg.bins, cfg.eq6)?
            } else {
                FidelityCurve::new("U", vec![])?
            };
            hubbard_files(&e.converged, &curve, cfg.eq6, dir)?;
            Err(CliError::Partial {
                converged: e.converged.len(),
                failed_at: e.failed_at,
                source: e.source,
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct ThermoRun {
    /// `(U, k, rho)` in output order.
    pub rows: Vec<(f64, f64, f64)>,
    pub files: Vec<PathBuf>,
}

pub fn run_thermo(cfg: &ThermoConfig, dir: &Path, progress: Progress) -> Result<ThermoRun> {
    cfg.validate()?;
    let opts = ThermoOptions {
        tol: cfg.quad_tol,
        damping: cfg.damping,
        ..ThermoOptions::default()
    };
    let ks = cfg.k_grid();
    let mut rows = Vec::with_capacity(ks.len() * cfg.interactions.len());
    for &u in &cfg.interactions {
        progress.note(|| format!("thermo-dos: U = {u}, {} momenta", ks.len()));
        for &k in &ks {
            let rho = thermodynamic_dos_with(u, k, &opts).map_err(|source| CliError::Numeric {
                parameter: format!("U = {u}, k = {k}"),
                source,
            })?;
            rows.push((u, k, rho));
        }
    }
    let cells = rows
        .iter()
        .map(|&(u, k, rho)| Ok(vec![float(u)?, float(k)?, float(rho)?]))
        .collect::<Result<Vec<_>>>()?;
    let files = vec![write_csv(
        dir,
        "thermo_dos.csv",
        &["U", "k", "rho"],
        &cells,
    )?];
    Ok(ThermoRun { rows, files })
}

/// Overlap of two stored distributions and the fidelity-route susceptibility.
pub fn run_fidelity(
    a: &Path,
    b: &Path,
    delta: f64,
    select: (Option<f64>, Option<f64>),
    renormalize: bool,
) -> Result<(f64, f64)> {
    let policy = if renormalize {
        Normalization::Renormalize
    } else {
        Normalization::Strict
    };
    let da = read_distribution(a, select.0, policy)?;
    let db = read_distribution(b, select.1, policy)?;
    let f = fidelity(&da, &db)?;
    Ok((f, susceptibility_from_fidelity(f, delta)?))
}
