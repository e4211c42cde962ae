use crate::error::{Error, Result};

/// Chain length, electron count, down-spin count and on-site repulsion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardParams {
    pub sites: usize,
    pub electrons: usize,
    pub down_spins: usize,
    pub interaction: f64,
}

impl HubbardParams {
    pub fn new(
        sites: usize,
        electrons: usize,
        down_spins: usize,
        interaction: f64,
    ) -> Result<Self> {
        let p = Self {
            sites,
            electrons,
            down_spins,
            interaction,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites == 0 || self.electrons == 0 || self.down_spins == 0 {
            return Err(Error::Validation("L, N and M must be positive".into()));
        }
        if self.electrons > self.sites {
            return Err(Error::Validation(format!(
                "N = {} exceeds L = {}",
                self.electrons, self.sites
            )));
        }
        if 2 * self.down_spins > self.electrons {
            return Err(Error::Validation(format!(
                "2M = {} exceeds N = {}",
                2 * self.down_spins,
                self.electrons
            )));
        }
        if !(self.interaction > 0.0) || !self.interaction.is_finite() {
            return Err(Error::Validation(format!(
                "U must be positive and finite, got {}",
                self.interaction
            )));
        }
        Ok(())
    }

    pub fn with_interaction(&self, interaction: f64) -> Result<Self> {
        Self::new(self.sites, self.electrons, self.down_spins, interaction)
    }
}

/// Bethe quantum numbers `I_j` (charge) and `J_a` (spin).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumNumbers {
    charge: Vec<f64>,
    spin: Vec<f64>,
}

impl QuantumNumbers {
    /// Validates unit spacing and the integer / half-odd character:
    /// `I_j` are integers iff `M` is even, `J_a` are integers iff `N - M` is odd.
    pub fn new(charge: Vec<f64>, spin: Vec<f64>) -> Result<Self> {
        let n = charge.len();
        let m = spin.len();
        if n == 0 || m == 0 || 2 * m > n {
            return Err(Error::Configuration(format!(
                "need N >= 2M > 0, got N = {n}, M = {m}"
            )));
        }
        check_run("I", &charge, m % 2 == 0)?;
        check_run("J", &spin, (n - m) % 2 == 1)?;
        Ok(Self { charge, spin })
    }

    /// A run of `N` consecutive charge numbers starting at `first_charge`,
    /// with the spin numbers centred on zero.
    pub fn with_charge_offset(n: usize, m: usize, first_charge: f64) -> Result<Self> {
        let charge = (0..n).map(|i| first_charge + i as f64).collect();
        Self::new(charge, centred_run(m))
    }

    pub fn charge(&self) -> &[f64] {
        &self.charge
    }

    pub fn spin(&self) -> &[f64] {
        &self.spin
    }

    pub fn is_symmetric(&self) -> bool {
        is_centred(&self.charge) && is_centred(&self.spin)
    }
}

fn centred_run(len: usize) -> Vec<f64> {
    let start = -(len as f64 - 1.0) / 2.0;
    (0..len).map(|i| start + i as f64).collect()
}

fn is_centred(run: &[f64]) -> bool {
    run.iter().zip(run.iter().rev()).all(|(a, b)| a + b == 0.0)
}

fn check_run(name: &str, run: &[f64], integer: bool) -> Result<()> {
    if run.windows(2).any(|w| w[1] - w[0] != 1.0) {
        return Err(Error::Configuration(format!(
            "{name} quantum numbers must be consecutive with unit spacing"
        )));
    }
    let want = if integer { 0.0 } else { 0.5 };
    if let Some(x) = run
        .iter()
        .find(|x| (x.rem_euclid(1.0) - want).abs() > 1e-12)
    {
        let kind = if integer {
            "integers"
        } else {
            "half-odd integers"
        };
        return Err(Error::Configuration(format!(
            "{name} quantum numbers must be {kind} here, found {x}"
        )));
    }
    Ok(())
}

/// Symmetric consecutive quantum numbers of the singlet ground state.
///
/// A centred run of length `N` is integer valued iff `N` is odd, which the
/// character rules force to coincide with `M` even; the same for `J`. Both
/// hold together only for `N` even and `M` odd.
pub fn ground_state_quantum_numbers(l: usize, n: usize, m: usize) -> Result<QuantumNumbers> {
    if n > l {
        return Err(Error::Configuration(format!("N = {n} exceeds L = {l}")));
    }
    if m == 0 || 2 * m > n {
        return Err(Error::Configuration(format!(
            "need 0 < 2M <= N, got N = {n}, M = {m}"
        )));
    }
    let charge_integer = m % 2 == 0;
    if (n % 2 == 1) != charge_integer {
        return Err(Error::Configuration(format!(
            "I must be {} for M = {m}, but a centred run of N = {n} is not",
            if charge_integer {
                "integers"
            } else {
                "half-odd integers"
            }
        )));
    }
    let spin_integer = (n - m) % 2 == 1;
    if (m % 2 == 1) != spin_integer {
        return Err(Error::Configuration(format!(
            "J must be {} for N - M = {}, but a centred run of M = {m} is not",
            if spin_integer {
                "integers"
            } else {
                "half-odd integers"
            },
            n - m
        )));
    }
    QuantumNumbers::new(centred_run(n), centred_run(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_site_half_filling() {
        let q = ground_state_quantum_numbers(6, 6, 3).unwrap();
        assert_eq!(q.charge(), &[-2.5, -1.5, -0.5, 0.5, 1.5, 2.5]);
        assert_eq!(q.spin(), &[-1.0, 0.0, 1.0]);
        assert!(q.is_symmetric());
    }

    #[test]
    fn figure_scale() {
        let q = ground_state_quantum_numbers(210, 210, 105).unwrap();
        assert_eq!(q.charge().len(), 210);
        assert_eq!(q.charge()[0], -104.5);
        assert_eq!(q.charge()[209], 104.5);
        assert_eq!(q.spin().len(), 105);
        assert_eq!(q.spin()[0], -52.0);
        assert_eq!(q.spin()[104], 52.0);
        assert_eq!(q.charge().iter().sum::<f64>(), 0.0);
        assert_eq!(q.spin().iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn open_shell_fillings_rejected() {
        // N = 4, M = 2: I must be integers but a centred run of 4 is half-odd
        assert!(matches!(
            ground_state_quantum_numbers(6, 4, 2),
            Err(Error::Configuration(_))
        ));
        assert!(ground_state_quantum_numbers(6, 5, 2).is_err());
        assert!(ground_state_quantum_numbers(6, 6, 4).is_err());
        assert!(ground_state_quantum_numbers(4, 6, 3).is_err());
    }

    #[test]
    fn offset_runs_follow_character_rules() {
        let q = QuantumNumbers::with_charge_offset(4, 2, -1.0).unwrap();
        assert_eq!(q.charge(), &[-1.0, 0.0, 1.0, 2.0]);
        assert_eq!(q.spin(), &[-0.5, 0.5]);
        assert!(!q.is_symmetric());
        assert!(QuantumNumbers::with_charge_offset(4, 2, -1.5).is_err());
        assert!(QuantumNumbers::new(vec![-1.0, 1.0], vec![0.5]).is_err());
    }

    #[test]
    fn params_invariants() {
        assert!(HubbardParams::new(6, 6, 3, 4.0).is_ok());
        assert!(HubbardParams::new(6, 7, 3, 4.0).is_err());
        assert!(HubbardParams::new(6, 6, 4, 4.0).is_err());
        assert!(HubbardParams::new(6, 6, 3, 0.0).is_err());
        assert!(HubbardParams::new(6, 6, 3, -1.0).is_err());
    }
}
