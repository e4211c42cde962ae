//! Density distributions, their overlap (the density-functional fidelity) and
//! the two leading-order susceptibility estimators.
//!
//! All distributions here are diagonal in a fixed basis, so the trace of
//! `sqrt(n(a) n(b))` collapses to the classical Bhattacharyya overlap
//! `sum_x sqrt(a_x b_x)`.

use crate::error::{Error, Result};

/// Tolerance on the raw weight sum accepted by the strict constructor.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Two supports are considered identical when every label agrees to this.
pub const LABEL_TOLERANCE: f64 = 1e-12;

/// Densities below this are treated as vanishing in the derivative estimator.
pub const DENSITY_FLOOR: f64 = 1e-14;

/// Derivatives below this on a vanishing density are taken as the `0/0` limit.
pub const DERIVATIVE_FLOOR: f64 = 1e-10;

/// How the constructor treats a weight vector that does not sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Reject sums further than [`SUM_TOLERANCE`] from one.
    #[default]
    Strict,
    /// Divide by whatever positive sum was supplied.
    Renormalize,
}

/// Normalized nonnegative weights over a strictly increasing set of labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityDistribution {
    labels: Vec<f64>,
    weights: Vec<f64>,
}

impl DensityDistribution {
    /// Strict constructor: weights must already sum to one within [`SUM_TOLERANCE`].
    pub fn new(labels: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::with_normalization(labels, weights, Normalization::Strict)
    }

    pub fn with_normalization(
        labels: Vec<f64>,
        mut weights: Vec<f64>,
        policy: Normalization,
    ) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::Validation(format!(
                "{} labels but {} weights",
                labels.len(),
                weights.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::Validation("empty distribution".into()));
        }
        if let Some(w) = labels.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Validation(format!(
                "labels not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::Validation(format!("weight {i} is {w}")));
        }
        let sum: f64 = weights.iter().sum();
        match policy {
            Normalization::Strict if (sum - 1.0).abs() > SUM_TOLERANCE => {
                return Err(Error::Validation(format!(
                    "weights sum to {sum}, expected 1 within {SUM_TOLERANCE:e}"
                )));
            }
            Normalization::Renormalize if !(sum > 0.0) => {
                return Err(Error::Validation("weights sum to zero".into()));
            }
            _ => {}
        }
        weights.iter_mut().for_each(|w| *w /= sum);
        Ok(Self { labels, weights })
    }

    /// Distribution over the integer labels `0, 1, .., n-1`.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let labels = (0..weights.len()).map(|i| i as f64).collect();
        Self::new(labels, weights)
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Label carrying the largest weight (first one on ties).
    pub fn peak_label(&self) -> f64 {
        let mut best = 0;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > self.weights[best] {
                best = i;
            }
        }
        self.labels[best]
    }

    pub fn mean(&self) -> f64 {
        self.labels
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| x * w)
            .sum()
    }

    /// Checks that `other` lives on the same support.
    pub fn check_support(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::SupportMismatch(format!(
                "{} points vs {} points",
                self.len(),
                other.len()
            )));
        }
        if let Some((i, (a, b))) = self
            .labels
            .iter()
            .zip(&other.labels)
            .enumerate()
            .find(|(_, (a, b))| (*a - *b).abs() > LABEL_TOLERANCE)
        {
            return Err(Error::SupportMismatch(format!(
                "label {i} differs: {a} vs {b}"
            )));
        }
        Ok(())
    }

    /// Pointwise average of two distributions on the same support.
    pub fn midpoint(&self, other: &Self) -> Result<Self> {
        self.check_support(other)?;
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        Self::new(self.labels.clone(), weights)
    }
}

/// Overlap `sum_x sqrt(a_x b_x)` of two distributions on a common support.
pub fn fidelity(a: &DensityDistribution, b: &DensityDistribution) -> Result<f64> {
    a.check_support(b)?;
    let overlap: f64 = a
        .weights
        .iter()
        .zip(&b.weights)
        .map(|(x, y)| (x * y).sqrt())
        .sum();
    Ok(overlap.clamp(0.0, 1.0))
}

/// Result of the derivative-based susceptibility sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    pub value: f64,
    /// Terms with vanishing density but non-vanishing derivative. These are
    /// left out of `value` and reported here instead.
    pub singular_terms: usize,
}

/// `chi = sum_x (dn_x)^2 / (4 n_x)`.
pub fn susceptibility_from_derivative(
    n: &DensityDistribution,
    dn: &[f64],
) -> Result<Susceptibility> {
    if dn.len() != n.len() {
        return Err(Error::Validation(format!(
            "{} derivatives for {} density points",
            dn.len(),
            n.len()
        )));
    }
    let mut value = 0.0;
    let mut singular_terms = 0;
    for (&nx, &d) in n.weights.iter().zip(dn) {
        if !d.is_finite() {
            return Err(Error::Validation(format!("non-finite derivative {d}")));
        }
        if nx < DENSITY_FLOOR {
            if d.abs() >= DERIVATIVE_FLOOR {
                singular_terms += 1;
            }
            continue;
        }
        value += d * d / (4.0 * nx);
    }
    Ok(Susceptibility {
        value,
        singular_terms,
    })
}

/// Inverts `F = 1 - delta^2 chi / 2`.
pub fn susceptibility_from_fidelity(fidelity: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Validation(format!(
            "parameter step must be positive, got {delta}"
        )));
    }
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::Validation(format!(
            "fidelity {fidelity} outside [0, 1]"
        )));
    }
    Ok(2.0 * (1.0 - fidelity) / (delta * delta))
}

/// `(hi - lo) / (2 delta)` per label, for densities evaluated at `x +- delta`.
pub fn central_difference(
    lo: &DensityDistribution,
    hi: &DensityDistribution,
    delta: f64,
) -> Result<Vec<f64>> {
    if !(delta > 0.0) {
        return Err(Error::Validation(format!(
            "difference step must be positive, got {delta}"
        )));
    }
    lo.check_support(hi)?;
    Ok(hi
        .weights
        .iter()
        .zip(&lo.weights)
        .map(|(h, l)| (h - l) / (2.0 * delta))
        .collect())
}

/// Numerical `dn/dlambda` at `lambda` from two evaluations of `evaluator`.
pub fn central_difference_density<F>(mut evaluator: F, lambda: f64, delta: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<DensityDistribution>,
{
    if !(delta > 0.0) {
        return Err(Error::Validation(format!(
            "difference step must be positive, got {delta}"
        )));
    }
    let lo = evaluator(lambda - delta)?;
    let hi = evaluator(lambda + delta)?;
    central_difference(&lo, &hi, delta)
}

/// Both susceptibility estimates for the pair `(n(x), n(x + delta))`.
///
/// The fidelity route uses the pair directly. The derivative route evaluates
/// at the pair midpoint: the derivative is the central difference across the
/// pair and the density is the pair average, so both estimates refer to the
/// same point to second order in `delta`.
pub fn pair_susceptibilities(
    lo: &DensityDistribution,
    hi: &DensityDistribution,
    delta: f64,
) -> Result<(f64, f64, Susceptibility)> {
    let f = fidelity(lo, hi)?;
    let chi_fidelity = susceptibility_from_fidelity(f, delta)?;
    let dn = central_difference(lo, hi, 0.5 * delta)?;
    let chi_derivative = susceptibility_from_derivative(&lo.midpoint(hi)?, &dn)?;
    Ok((f, chi_fidelity, chi_derivative))
}

/// One sweep point: the pair `(parameter, parameter + step)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityRecord {
    pub parameter: f64,
    pub step: f64,
    pub fidelity: f64,
    pub chi_fidelity: f64,
    pub chi_derivative: Option<f64>,
    pub singular_terms: usize,
}

/// Fidelity and susceptibility along a parameter sweep, sorted by parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityCurve {
    parameter_name: String,
    records: Vec<FidelityRecord>,
}

impl FidelityCurve {
    pub fn new(
        parameter_name: impl Into<String>,
        mut records: Vec<FidelityRecord>,
    ) -> Result<Self> {
        records.sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
        if let Some(r) = records.iter().find(|r| !(0.0..=1.0).contains(&r.fidelity)) {
            return Err(Error::Validation(format!(
                "fidelity {} at {} outside [0, 1]",
                r.fidelity, r.parameter
            )));
        }
        if let Some(w) = records
            .windows(2)
            .find(|w| w[0].parameter == w[1].parameter)
        {
            return Err(Error::Validation(format!(
                "duplicate sweep parameter {}",
                w[0].parameter
            )));
        }
        Ok(Self {
            parameter_name: parameter_name.into(),
            records,
        })
    }

    pub fn parameter_name(&self) -> &str {
        &self.parameter_name
    }

    pub fn records(&self) -> &[FidelityRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record with the smallest fidelity.
    pub fn min_fidelity(&self) -> Option<&FidelityRecord> {
        self.records
            .iter()
            .min_by(|a, b| a.fidelity.total_cmp(&b.fidelity))
    }

    /// Record with the largest fidelity-route susceptibility.
    pub fn max_susceptibility(&self) -> Option<&FidelityRecord> {
        self.records
            .iter()
            .max_by(|a, b| a.chi_fidelity.total_cmp(&b.chi_fidelity))
    }

    /// Record whose parameter is closest to `x`.
    pub fn nearest(&self, x: f64) -> Option<&FidelityRecord> {
        self.records
            .iter()
            .min_by(|a, b| (a.parameter - x).abs().total_cmp(&(b.parameter - x).abs()))
    }

    /// Fidelity-route susceptibility linearly interpolated at `x`.
    pub fn susceptibility_at(&self, x: f64) -> Option<f64> {
        let r = &self.records;
        let first = r.first()?;
        let last = r.last()?;
        if x < first.parameter || x > last.parameter {
            return None;
        }
        let i = r.partition_point(|rec| rec.parameter < x);
        if r[i].parameter == x || i == 0 {
            return Some(r[i].chi_fidelity);
        }
        let (a, b) = (&r[i - 1], &r[i]);
        let t = (x - a.parameter) / (b.parameter - a.parameter);
        Some(a.chi_fidelity + t * (b.chi_fidelity - a.chi_fidelity))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn dist(w: &[f64]) -> DensityDistribution {
        DensityDistribution::from_weights(w.to_vec()).unwrap()
    }

    #[test]
    fn fidelity_examples() {
        assert_abs_diff_eq!(
            fidelity(&dist(&[0.5, 0.5]), &dist(&[0.5, 0.5])).unwrap(),
            1.0
        );
        assert_eq!(
            fidelity(&dist(&[1.0, 0.0]), &dist(&[0.0, 1.0])).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            fidelity(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn mismatched_supports_are_rejected() {
        let a = dist(&[0.5, 0.5]);
        let b = dist(&[0.25, 0.25, 0.5]);
        assert!(matches!(fidelity(&a, &b), Err(Error::SupportMismatch(_))));
        let c = DensityDistribution::new(vec![0.0, 2.0], vec![0.5, 0.5]).unwrap();
        assert!(matches!(fidelity(&a, &c), Err(Error::SupportMismatch(_))));
    }

    #[test]
    fn strict_constructor_rejects_unnormalized_weights() {
        assert!(matches!(
            DensityDistribution::from_weights(vec![0.5, 0.6]),
            Err(Error::Validation(_))
        ));
        let d = DensityDistribution::with_normalization(
            vec![0.0, 1.0],
            vec![1.0, 3.0],
            Normalization::Renormalize,
        )
        .unwrap();
        assert_eq!(d.weights(), &[0.25, 0.75]);
        assert!(DensityDistribution::from_weights(vec![1.5, -0.5]).is_err());
        assert!(DensityDistribution::new(vec![1.0, 0.0], vec![0.5, 0.5]).is_err());
        // within tolerance: accepted and renormalized
        let d = DensityDistribution::from_weights(vec![0.5, 0.5 + 1e-10]).unwrap();
        assert_abs_diff_eq!(d.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn derivative_susceptibility_examples() {
        let n = dist(&[0.3, 0.7]);
        assert_eq!(
            susceptibility_from_derivative(&n, &[0.0, 0.0])
                .unwrap()
                .value,
            0.0
        );

        // 2 * (0.01 / 2.0)
        let s = susceptibility_from_derivative(&dist(&[0.5, 0.5]), &[0.1, -0.1]).unwrap();
        assert_abs_diff_eq!(s.value, 0.01, epsilon = 1e-15);

        // 4 * (0.04 / 1.0)
        let s = susceptibility_from_derivative(&dist(&[0.25; 4]), &[0.2, 0.2, -0.2, -0.2]).unwrap();
        assert_abs_diff_eq!(s.value, 0.16, epsilon = 1e-15);
        assert_eq!(s.singular_terms, 0);

        assert!(susceptibility_from_derivative(&n, &[0.0]).is_err());
    }

    #[test]
    fn vanishing_density_terms() {
        let n = dist(&[0.0, 0.5, 0.5]);
        let s = susceptibility_from_derivative(&n, &[1e-12, 0.1, -0.1]).unwrap();
        assert_eq!(s.singular_terms, 0);
        assert_abs_diff_eq!(s.value, 0.01, epsilon = 1e-15);
        let s = susceptibility_from_derivative(&n, &[1e-3, 0.1, -0.1]).unwrap();
        assert_eq!(s.singular_terms, 1);
        assert_abs_diff_eq!(s.value, 0.01, epsilon = 1e-15);
    }

    #[test]
    fn fidelity_susceptibility_examples() {
        assert_eq!(susceptibility_from_fidelity(1.0, 0.005).unwrap(), 0.0);
        assert_abs_diff_eq!(
            susceptibility_from_fidelity(0.995, 0.1).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert!(susceptibility_from_fidelity(0.9, 0.0).is_err());
        assert!(susceptibility_from_fidelity(0.9, -1.0).is_err());
    }

    fn gaussian_histogram(mu: f64) -> (DensityDistribution, Vec<f64>) {
        let xs: Vec<f64> = (0..2001).map(|i| -10.0 + 0.01 * i as f64).collect();
        let g: Vec<f64> = xs
            .iter()
            .map(|x| (-(x - mu) * (x - mu) / 2.0).exp())
            .collect();
        let z: f64 = g.iter().sum();
        let n: Vec<f64> = g.iter().map(|v| v / z).collect();
        // d/dmu of the normalized histogram, by hand
        let mean_shift: f64 = xs.iter().zip(&n).map(|(x, p)| p * (x - mu)).sum();
        let dn = xs
            .iter()
            .zip(&n)
            .map(|(x, p)| p * ((x - mu) - mean_shift))
            .collect();
        (DensityDistribution::new(xs, n).unwrap(), dn)
    }

    #[test]
    fn gaussian_shift_estimators_agree() {
        let (a, dn) = gaussian_histogram(0.0);
        let (b, _) = gaussian_histogram(0.01);
        let chi5 = susceptibility_from_fidelity(fidelity(&a, &b).unwrap(), 0.01).unwrap();
        let chi6 = susceptibility_from_derivative(&a, &dn).unwrap().value;
        assert!((chi5 - chi6).abs() / chi6 < 0.01, "{chi5} vs {chi6}");
        // unit-variance location family: Fisher information 1, chi = 1/4
        assert_abs_diff_eq!(chi6, 0.25, epsilon = 1e-6);
    }

    #[test]
    fn central_difference_examples() {
        let constant = |_: f64| Ok(dist(&[0.2, 0.8]));
        assert_eq!(
            central_difference_density(constant, 0.4, 0.01).unwrap(),
            vec![0.0, 0.0]
        );

        let linear = |l: f64| DensityDistribution::from_weights(vec![l, 1.0 - l]);
        let d = central_difference_density(linear, 0.3, 0.01).unwrap();
        assert_abs_diff_eq!(d[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d[1], -1.0, epsilon = 1e-12);

        let shifting = |l: f64| {
            let n = if l < 0.5 { 2 } else { 3 };
            DensityDistribution::from_weights(vec![1.0 / n as f64; n])
        };
        assert!(matches!(
            central_difference_density(shifting, 0.5, 0.1),
            Err(Error::SupportMismatch(_))
        ));
    }

    #[test]
    fn curve_is_sorted_and_queried() {
        let rec = |p: f64, f: f64, c: f64| FidelityRecord {
            parameter: p,
            step: 0.1,
            fidelity: f,
            chi_fidelity: c,
            chi_derivative: None,
            singular_terms: 0,
        };
        let curve = FidelityCurve::new(
            "U",
            vec![
                rec(0.3, 0.99, 2.0),
                rec(0.1, 0.9, 20.0),
                rec(0.2, 0.95, 10.0),
            ],
        )
        .unwrap();
        let params: Vec<f64> = curve.records().iter().map(|r| r.parameter).collect();
        assert_eq!(params, vec![0.1, 0.2, 0.3]);
        assert_eq!(curve.min_fidelity().unwrap().parameter, 0.1);
        assert_eq!(curve.max_susceptibility().unwrap().parameter, 0.1);
        assert_abs_diff_eq!(curve.susceptibility_at(0.25).unwrap(), 6.0, epsilon = 1e-12);
        assert!(curve.susceptibility_at(0.5).is_none());
        assert!(FidelityCurve::new("U", vec![rec(0.1, 1.5, 0.0)]).is_err());
    }

    fn weights_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, n).prop_filter_map("zero sum", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-6).then(|| w.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn fidelity_bounds_and_symmetry(
            (a, b) in (2usize..40).prop_flat_map(|n| (weights_strategy(n), weights_strategy(n)))
        ) {
            let a = dist(&a);
            let b = dist(&b);
            let f = fidelity(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert_eq!(f, fidelity(&b, &a).unwrap());
            prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn perturbed_pairs_have_fidelity_below_one(
            w in (3usize..30).prop_flat_map(weights_strategy),
            i in any::<prop::sample::Index>(),
            j in any::<prop::sample::Index>(),
        ) {
            let mut p = w.clone();
            let (i, j) = (i.index(p.len()), j.index(p.len()));
            prop_assume!(i != j);
            let eps = 1e-3f64.min(p[i]);
            prop_assume!(eps > 1e-6);
            p[i] -= eps;
            p[j] += eps;
            prop_assert!(fidelity(&dist(&w), &dist(&p)).unwrap() < 1.0);
        }

        #[test]
        fn derivative_susceptibility_is_permutation_invariant(
            (w, dn, seed) in (2usize..20).prop_flat_map(|n| (
                weights_strategy(n),
                prop::collection::vec(-1.0f64..1.0, n),
                any::<u64>(),
            ))
        ) {
            let n = w.len();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for k in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(k, (s >> 33) as usize % (k + 1));
            }
            let pw: Vec<f64> = perm.iter().map(|&k| w[k]).collect();
            let pdn: Vec<f64> = perm.iter().map(|&k| dn[k]).collect();
            let a = susceptibility_from_derivative(&dist(&w), &dn).unwrap();
            let b = susceptibility_from_derivative(&dist(&pw), &pdn).unwrap();
            prop_assert!((a.value - b.value).abs() <= 1e-12 * a.value.max(1.0));
            prop_assert_eq!(a.singular_terms, b.singular_terms);
        }
    }
}
