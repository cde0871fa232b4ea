//! Privacy-budget ledger with basic and advanced composition accounting.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct BudgetEntry {
    pub mechanism: String,
    pub epsilon: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PrivacyBudget {
    entries: Vec<BudgetEntry>,
}

impl PrivacyBudget {
    pub fn new() -> PrivacyBudget {
        PrivacyBudget::default()
    }

    pub fn charge(&mut self, mechanism: &str, epsilon: f64, delta: f64) -> Result<()> {
        if epsilon < 0.0 || delta < 0.0 || !epsilon.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidParam(format!(
                "budget charge must be nonnegative: eps={epsilon}, delta={delta}"
            )));
        }
        self.entries.push(BudgetEntry {
            mechanism: mechanism.to_string(),
            epsilon,
            delta,
        });
        Ok(())
    }

    pub fn entries(&self) -> &[BudgetEntry] {
        &self.entries
    }

    /// Basic composition totals.
    pub fn epsilon_spent(&self) -> f64 {
        self.entries.iter().map(|e| e.epsilon).sum()
    }

    pub fn delta_spent(&self) -> f64 {
        self.entries.iter().map(|e| e.delta).sum()
    }

    pub fn merge(&mut self, other: &PrivacyBudget) {
        self.entries.extend(other.entries.iter().cloned());
    }
}

/// Advanced composition of `k` mechanisms at `(epsilon, delta)` each:
/// `(epsilon * sqrt(k * ln(1/(k*delta))), 2*k*delta)`.
pub fn advanced_composition(k: usize, epsilon: f64, delta: f64) -> Result<(f64, f64)> {
    if k == 0 {
        return Ok((0.0, 0.0));
    }
    let kd = k as f64 * delta;
    if !(0.0 < kd && kd < 1.0) {
        return Err(Error::InvalidParam(format!(
            "advanced composition needs 0 < k*delta < 1, got {kd}"
        )));
    }
    Ok((
        epsilon * (k as f64 * (1.0 / kd).ln()).sqrt(),
        2.0 * kd,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charges_add_up() {
        let mut b = PrivacyBudget::new();
        b.charge("a", 0.5, 0.0).unwrap();
        b.charge("b", 0.5, 0.0).unwrap();
        assert!((b.epsilon_spent() - 1.0).abs() < 1e-12);
        assert_eq!(b.delta_spent(), 0.0);
    }

    #[test]
    fn negative_charge_rejected() {
        let mut b = PrivacyBudget::new();
        assert!(b.charge("bad", -0.1, 0.0).is_err());
    }

    #[test]
    fn advanced_formula_exact_at_k1() {
        let (e, d) = advanced_composition(1, 0.3, 1e-6).unwrap();
        assert!((e - 0.3 * (1.0 / 1e-6_f64).ln().sqrt()).abs() < 1e-12);
        assert!((d - 2e-6).abs() < 1e-18);
    }
}
