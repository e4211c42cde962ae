//! Lieb-Wu equations for real charge rapidities `k_j` and spin rapidities
//! `lambda_a`:
//!
//! ```text
//! 2 pi I_j = k_j L - sum_a theta_1(lambda_a - sin k_j)
//! 2 pi J_a = sum_j theta_1(lambda_a - sin k_j) - sum_b theta_2(lambda_a - lambda_b)
//! theta_n(x) = 2 atan(4x / nU)
//! ```

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::params::{ground_state_quantum_numbers, HubbardParams, QuantumNumbers};
use crate::error::{Error, Result};

/// `theta_n(x) = 2 atan(4x / (n U))`.
#[inline]
pub fn theta(n: f64, u: f64, x: f64) -> f64 {
    2.0 * (4.0 * x / (n * u)).atan()
}

/// `theta_n'(x) = 8 n U / ((n U)^2 + 16 x^2)`.
#[inline]
pub fn theta_prime(n: f64, u: f64, x: f64) -> f64 {
    let nu = n * u;
    8.0 * nu / (nu * nu + 16.0 * x * x)
}

/// A converged solution of the Bethe equations.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheRoots {
    pub k: Vec<f64>,
    pub lambda: Vec<f64>,
    pub params: HubbardParams,
    pub qnums: QuantumNumbers,
    /// Max-norm of the equation defects.
    pub residual: f64,
    pub newton_iterations: usize,
}

impl BetheRoots {
    pub fn interaction(&self) -> f64 {
        self.params.interaction
    }

    /// Largest charge rapidity.
    pub fn k_max(&self) -> f64 {
        self.k.last().copied().unwrap_or(0.0)
    }
}

/// `E = -2 sum_j cos k_j`.
pub fn energy(roots: &BetheRoots) -> f64 {
    -2.0 * roots.k.iter().map(|k| k.cos()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Required max-norm residual.
    pub tol: f64,
    pub max_newton: usize,
    /// Coordinate-bisection sweeps before Newton takes over.
    pub max_sweeps: usize,
    /// Largest coordinate update at which the sweeps hand over to Newton.
    pub sweep_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_newton: 60,
            max_sweeps: 4000,
            sweep_tol: 1e-7,
        }
    }
}

/// The defect map and its Jacobian for fixed parameters and quantum numbers.
#[derive(Debug, Clone, Copy)]
pub struct BetheSystem<'a> {
    pub params: &'a HubbardParams,
    pub qnums: &'a QuantumNumbers,
}

impl<'a> BetheSystem<'a> {
    pub fn new(params: &'a HubbardParams, qnums: &'a QuantumNumbers) -> Result<Self> {
        params.validate()?;
        if qnums.charge().len() != params.electrons || qnums.spin().len() != params.down_spins {
            return Err(Error::Configuration(format!(
                "quantum numbers ({}, {}) do not match N = {}, M = {}",
                qnums.charge().len(),
                qnums.spin().len(),
                params.electrons,
                params.down_spins
            )));
        }
        Ok(Self { params, qnums })
    }

    fn n(&self) -> usize {
        self.params.electrons
    }

    fn m(&self) -> usize {
        self.params.down_spins
    }

    fn u(&self) -> f64 {
        self.params.interaction
    }

    /// Charge defect `j` as a function of its own rapidity.
    fn charge_defect(&self, j: usize, kj: f64, lambda: &[f64]) -> f64 {
        let u = self.u();
        let s = kj.sin();
        let spin_sum: f64 = lambda.iter().map(|&l| theta(1.0, u, l - s)).sum();
        kj * self.params.sites as f64 - spin_sum - 2.0 * PI * self.qnums.charge()[j]
    }

    /// Spin defect `a` as a function of its own rapidity.
    fn spin_defect(&self, a: usize, la: f64, sin_k: &[f64], lambda: &[f64]) -> f64 {
        let u = self.u();
        let charge_sum: f64 = sin_k.iter().map(|&s| theta(1.0, u, la - s)).sum();
        let spin_sum: f64 = lambda
            .iter()
            .enumerate()
            .filter(|(b, _)| *b != a)
            .map(|(_, &lb)| theta(2.0, u, la - lb))
            .sum();
        charge_sum - spin_sum - 2.0 * PI * self.qnums.spin()[a]
    }

    /// Defects, charge equations first.
    pub fn defects(&self, k: &[f64], lambda: &[f64]) -> Vec<f64> {
        let sin_k: Vec<f64> = k.iter().map(|x| x.sin()).collect();
        (0..self.n())
            .map(|j| self.charge_defect(j, k[j], lambda))
            .chain((0..self.m()).map(|a| self.spin_defect(a, lambda[a], &sin_k, lambda)))
            .collect()
    }

    /// Analytic Jacobian with respect to `(k_1..k_N, lambda_1..lambda_M)`.
    pub fn jacobian(&self, k: &[f64], lambda: &[f64]) -> DMatrix<f64> {
        let (n, m, u) = (self.n(), self.m(), self.u());
        let l = self.params.sites as f64;
        let mut jac = DMatrix::zeros(n + m, n + m);
        for j in 0..n {
            let (s, c) = k[j].sin_cos();
            let mut own = l;
            for a in 0..m {
                let t = theta_prime(1.0, u, lambda[a] - s);
                own += c * t;
                jac[(j, n + a)] = -t;
                jac[(n + a, j)] = -t * c;
                jac[(n + a, n + a)] += t;
            }
            jac[(j, j)] = own;
        }
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    let t = theta_prime(2.0, u, lambda[a] - lambda[b]);
                    jac[(n + a, n + b)] = t;
                    jac[(n + a, n + a)] -= t;
                }
            }
        }
        jac
    }

    /// Zero-interaction-free starting point: plane-wave momenta and spin
    /// rapidities at the origin.
    fn cold_start(&self) -> (Vec<f64>, Vec<f64>) {
        let l = self.params.sites as f64;
        let k = self
            .qnums
            .charge()
            .iter()
            .map(|i| (2.0 * PI * i / l).clamp(-PI + 1e-9, PI - 1e-9))
            .collect();
        (k, vec![0.0; self.m()])
    }

    /// Nonlinear Gauss-Seidel: each defect is solved for its own rapidity by
    /// bisection with the others held fixed. Returns the last sweep's largest
    /// update.
    fn coordinate_sweeps(&self, k: &mut [f64], lambda: &mut [f64], opts: &SolverOptions) -> f64 {
        let u = self.u();
        let mut change = f64::INFINITY;
        for _ in 0..opts.max_sweeps {
            change = 0.0;
            for j in 0..self.n() {
                let lam: &[f64] = lambda;
                let root = bisect(|x| self.charge_defect(j, x, lam), -PI, PI);
                change = change.max((root - k[j]).abs());
                k[j] = root;
            }
            let sin_k: Vec<f64> = k.iter().map(|x| x.sin()).collect();
            for a in 0..self.m() {
                let old = lambda[a];
                let f = |x: f64| {
                    let mut tmp = lambda.to_vec();
                    tmp[a] = x;
                    self.spin_defect(a, x, &sin_k, &tmp)
                };
                let mut w = 1.0 + u;
                let (mut lo, mut hi) = (old - w, old + w);
                while f(lo) > 0.0 || f(hi) < 0.0 {
                    w *= 2.0;
                    lo = old - w;
                    hi = old + w;
                    if !w.is_finite() {
                        break;
                    }
                }
                let root = bisect(f, lo, hi);
                change = change.max((root - old).abs() / (1.0 + old.abs()));
                lambda[a] = root;
            }
            if change < opts.sweep_tol {
                break;
            }
        }
        change
    }

    /// Damped Newton from `(k, lambda)`, halving the step whenever the
    /// max-norm residual would grow.
    fn newton(
        &self,
        k: &mut Vec<f64>,
        lambda: &mut Vec<f64>,
        opts: &SolverOptions,
    ) -> Result<(f64, usize)> {
        let n = self.n();
        let mut f = self.defects(k, lambda);
        let mut res = max_norm(&f);
        for iter in 0..opts.max_newton {
            if res <= opts.tol {
                return Ok((res, iter));
            }
            let jac = self.jacobian(k, lambda);
            let rhs = DVector::from_vec(f.clone());
            let step = jac.lu().solve(&rhs).ok_or_else(|| Error::NumericFailure {
                context: format!("singular Bethe Jacobian at U = {}", self.u()),
                iterations: iter,
                residual: res,
            })?;
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let k_try: Vec<f64> = (0..n).map(|j| k[j] - t * step[j]).collect();
                let l_try: Vec<f64> = (0..self.m()).map(|a| lambda[a] - t * step[n + a]).collect();
                let f_try = self.defects(&k_try, &l_try);
                let r_try = max_norm(&f_try);
                if r_try.is_finite() && (r_try < res || r_try <= opts.tol) {
                    *k = k_try;
                    *lambda = l_try;
                    f = f_try;
                    res = r_try;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                // no descent at round-off level: stop if already good enough
                if res <= opts.tol {
                    return Ok((res, iter));
                }
                return Err(Error::NonConvergence {
                    iterations: iter,
                    residual: res,
                });
            }
        }
        if res <= opts.tol {
            Ok((res, opts.max_newton))
        } else {
            Err(Error::NonConvergence {
                iterations: opts.max_newton,
                residual: res,
            })
        }
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(
        0.0f64,
        |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) },
    )
}

/// Root of an increasing-through-zero function on `[lo, hi]`.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn solve_bae(
    params: &HubbardParams,
    qnums: &QuantumNumbers,
    guess: Option<&BetheRoots>,
) -> Result<BetheRoots> {
    solve_bae_with(params, qnums, guess, &SolverOptions::default())
}

/// Solves the Bethe equations, warm-started from `guess` when given and
/// bootstrapped by coordinate bisection otherwise.
pub fn solve_bae_with(
    params: &HubbardParams,
    qnums: &QuantumNumbers,
    guess: Option<&BetheRoots>,
    opts: &SolverOptions,
) -> Result<BetheRoots> {
    let system = BetheSystem::new(params, qnums)?;
    let (mut k, mut lambda) = match guess {
        Some(g) => {
            if g.k.len() != params.electrons || g.lambda.len() != params.down_spins {
                return Err(Error::Validation(format!(
                    "guess has {} charge and {} spin rapidities",
                    g.k.len(),
                    g.lambda.len()
                )));
            }
            (g.k.clone(), g.lambda.clone())
        }
        None => {
            let (mut k, mut lambda) = system.cold_start();
            system.coordinate_sweeps(&mut k, &mut lambda, opts);
            (k, lambda)
        }
    };
    let (residual, newton_iterations) = match system.newton(&mut k, &mut lambda, opts) {
        Ok(r) => r,
        // a cold bootstrap gets one more round of sweeps before giving up
        Err(Error::NonConvergence { .. }) if guess.is_none() => {
            let tighter = SolverOptions {
                sweep_tol: opts.sweep_tol * 1e-3,
                max_sweeps: opts.max_sweeps * 4,
                ..*opts
            };
            system.coordinate_sweeps(&mut k, &mut lambda, &tighter);
            system.newton(&mut k, &mut lambda, opts)?
        }
        Err(e) => return Err(e),
    };
    let roots = BetheRoots {
        k,
        lambda,
        params: *params,
        qnums: qnums.clone(),
        residual,
        newton_iterations,
    };
    check_roots(&roots)?;
    Ok(roots)
}

fn check_roots(r: &BetheRoots) -> Result<()> {
    let bad = |what: &str| Error::NumericFailure {
        context: format!("{what} at U = {}", r.params.interaction),
        iterations: r.newton_iterations,
        residual: r.residual,
    };
    if r.k.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(bad("charge rapidities not strictly increasing"));
    }
    if r.k.iter().any(|k| !(k.abs() < PI)) {
        return Err(bad("charge rapidity outside (-pi, pi)"));
    }
    if r.lambda.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(bad("spin rapidities not strictly increasing"));
    }
    Ok(())
}

/// Failure part-way through a continuation; keeps what converged.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationError {
    pub converged: Vec<BetheRoots>,
    pub failed_at: f64,
    pub source: Error,
}

impl std::fmt::Display for ContinuationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "continuation failed at U = {} after {} converged points: {}",
            self.failed_at,
            self.converged.len(),
            self.source
        )
    }
}

impl std::error::Error for ContinuationError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

/// `U_start, U_start - dU, ...` down to `U_end`; the last step is shortened
/// when the range is not a whole number of steps.
pub fn interaction_grid(u_start: f64, u_end: f64, du: f64) -> Result<Vec<f64>> {
    if !(u_end > 0.0) || !(u_start >= u_end) || !u_start.is_finite() {
        return Err(Error::Validation(format!(
            "need U_start >= U_end > 0, got {u_start} -> {u_end}"
        )));
    }
    if !(du > 0.0) {
        return Err(Error::Validation(format!("dU must be positive, got {du}")));
    }
    let span = (u_start - u_end) / du;
    let whole = (span + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=whole).map(|i| u_start - i as f64 * du).collect();
    if (span - whole as f64) > 1e-9 {
        grid.push(u_end);
    }
    Ok(grid)
}

/// Solves at `U_start` from scratch, then walks down in `U` reusing each
/// solution as the next starting point.
pub fn continuation_sweep(
    sites: usize,
    electrons: usize,
    down_spins: usize,
    u_start: f64,
    u_end: f64,
    du: f64,
) -> std::result::Result<Vec<BetheRoots>, ContinuationError> {
    continuation_sweep_with(
        sites,
        electrons,
        down_spins,
        u_start,
        u_end,
        du,
        &SolverOptions::default(),
        |_| {},
    )
}

#[allow(clippy::too_many_arguments)]
pub fn continuation_sweep_with<P: FnMut(&BetheRoots)>(
    sites: usize,
    electrons: usize,
    down_spins: usize,
    u_start: f64,
    u_end: f64,
    du: f64,
    opts: &SolverOptions,
    mut progress: P,
) -> std::result::Result<Vec<BetheRoots>, ContinuationError> {
    let fail = |converged: Vec<BetheRoots>, at: f64, source: Error| ContinuationError {
        converged,
        failed_at: at,
        source,
    };
    let grid = interaction_grid(u_start, u_end, du).map_err(|e| fail(vec![], u_start, e))?;
    let qnums = ground_state_quantum_numbers(sites, electrons, down_spins)
        .map_err(|e| fail(vec![], u_start, e))?;
    let base = HubbardParams::new(sites, electrons, down_spins, u_start)
        .map_err(|e| fail(vec![], u_start, e))?;

    let mut out: Vec<BetheRoots> = Vec::with_capacity(grid.len());
    for &u in &grid {
        let params = base
            .with_interaction(u)
            .map_err(|e| fail(out.clone(), u, e))?;
        let prev = out.last();
        let solved = match solve_bae_with(&params, &qnums, prev, opts) {
            Ok(r) => Ok(r),
            Err(first) => match prev {
                None => Err(first),
                Some(prev) => {
                    // one bisection of the step
                    let mid = 0.5 * (prev.interaction() + u);
                    base.with_interaction(mid)
                        .and_then(|p| solve_bae_with(&p, &qnums, Some(prev), opts))
                        .and_then(|half| solve_bae_with(&params, &qnums, Some(&half), opts))
                }
            },
        };
        match solved {
            Ok(r) => {
                progress(&r);
                out.push(r);
            }
            Err(e) => return Err(fail(out, u, e)),
        }
    }
    Ok(out)
}
