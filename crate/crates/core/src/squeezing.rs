//! Amplitude-quadrature noise budget under optical loss.
//!
//! Variances are linear and relative to shot noise (`1.0` is the coherent
//! state). A loss with power transmission `η` mixes in vacuum:
//! `V' = η·V + (1 − η)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn db_to_variance<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

pub fn variance_to_db<T: Real>(v: T) -> Result<T> {
    if !(v > T::zero()) || !v.is_finite() {
        return Err(Error::domain(format!("noise variance must be positive, got {v}")));
    }
    Ok(T::lit(10.0) * v.log10())
}

/// Noise variance relative to shot noise with an optional 1σ uncertainty in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingState<T> {
    variance: T,
    uncertainty_db: Option<T>,
}

impl<T: Real> SqueezingState<T> {
    pub fn new(variance: T, uncertainty_db: Option<T>) -> Result<Self> {
        variance_to_db(variance)?;
        if let Some(u) = uncertainty_db {
            if !(u >= T::zero()) {
                return Err(Error::domain(format!("uncertainty must be non-negative, got {u}")));
            }
        }
        Ok(Self { variance, uncertainty_db })
    }

    pub fn from_db(db: T, uncertainty_db: Option<T>) -> Result<Self> {
        if !db.is_finite() {
            return Err(Error::domain("noise level in dB must be finite"));
        }
        Self::new(db_to_variance(db), uncertainty_db)
    }

    pub fn variance(&self) -> T {
        self.variance
    }

    pub fn uncertainty_db(&self) -> Option<T> {
        self.uncertainty_db
    }

    pub fn db(&self) -> T {
        T::lit(10.0) * self.variance.log10()
    }

    pub fn is_squeezed(&self) -> bool {
        self.variance < T::one()
    }

    /// Beam-splitter loss. The dB uncertainty is propagated to first order,
    /// `σ' = σ · η·V / V'`.
    pub fn apply_loss(&self, transmission: T) -> Result<Self> {
        check_transmission(transmission)?;
        let v = transmission * self.variance + (T::one() - transmission);
        let uncertainty_db = self.uncertainty_db.map(|u| u * transmission * self.variance / v);
        Ok(Self { variance: v, uncertainty_db })
    }
}

fn check_transmission<T: Real>(eta: T) -> Result<()> {
    if eta >= T::zero() && eta <= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("transmission must lie in [0, 1], got {eta}")))
    }
}

/// One row of a loss budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetStage<T> {
    /// 1-based stage number; 0 is the input.
    pub stage: usize,
    pub transmission: T,
    pub cumulative_transmission: T,
    pub state: SqueezingState<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetReport<T> {
    pub stages: Vec<BudgetStage<T>>,
}

impl<T: Real> BudgetReport<T> {
    pub fn input(&self) -> &SqueezingState<T> {
        &self.stages[0].state
    }

    pub fn output(&self) -> &SqueezingState<T> {
        &self.stages.last().expect("budget has an input row").state
    }

    pub fn total_transmission(&self) -> T {
        self.stages.last().expect("budget has an input row").cumulative_transmission
    }
}

/// Applies `transmissions` in sequence.
pub fn budget<T: Real>(input: SqueezingState<T>, transmissions: &[T]) -> Result<BudgetReport<T>> {
    let mut stages = vec![BudgetStage {
        stage: 0,
        transmission: T::one(),
        cumulative_transmission: T::one(),
        state: input,
    }];
    let mut state = input;
    let mut cumulative = T::one();
    for (k, &eta) in transmissions.iter().enumerate() {
        state = state.apply_loss(eta)?;
        cumulative = cumulative * eta;
        stages.push(BudgetStage {
            stage: k + 1,
            transmission: eta,
            cumulative_transmission: cumulative,
            state,
        });
    }
    Ok(BudgetReport { stages })
}

/// Transmission that degrades `input_db` to `output_db`: `η = (V_out − 1)/(V_in − 1)`.
pub fn loss_for_target<T: Real>(input_db: T, output_db: T) -> Result<T> {
    let vin = db_to_variance(input_db);
    let vout = db_to_variance(output_db);
    if input_db == output_db {
        return Ok(T::one());
    }
    if vin == T::one() {
        return Err(Error::domain("a shot-noise input cannot be transformed by loss"));
    }
    let eta = (vout - T::one()) / (vin - T::one());
    if !(eta >= T::zero() && eta <= T::one()) {
        return Err(Error::domain(format!(
            "no transmission in [0, 1] maps {input_db} dB to {output_db} dB (would need {eta})"
        )));
    }
    Ok(eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_conversion() {
        assert_eq!(db_to_variance(0.0f64), 1.0);
        assert!((db_to_variance(-3.4f64) - 0.457_088_189_614_875).abs() < 1e-12);
        for &db in &[-3.4f64, -0.9, 0.0, 2.5, 11.0] {
            assert!((variance_to_db(db_to_variance(db)).unwrap() - db).abs() < 1e-12);
        }
        assert!(variance_to_db(0.0f64).is_err());
        assert!(variance_to_db(-1.0f64).is_err());
    }

    #[test]
    fn loss_examples() {
        let s = SqueezingState::from_db(-3.4f64, Some(0.1)).unwrap();
        assert_eq!(s.apply_loss(1.0).unwrap().variance(), s.variance());
        assert_eq!(s.apply_loss(0.0).unwrap().variance(), 1.0);
        let out = SqueezingState::new(0.4571f64, None).unwrap().apply_loss(0.36).unwrap();
        assert!((out.variance() - 0.804_556).abs() < 1e-12);
        let out = s.apply_loss(0.36).unwrap();
        assert!((out.db() + 0.944_460_171_192_303).abs() < 1e-12);
        assert!((out.uncertainty_db().unwrap() - 0.020_452_599_676_397_8).abs() < 1e-12);
        assert!(s.apply_loss(1.2).is_err());
        assert!(s.apply_loss(-0.1).is_err());
    }

    #[test]
    fn budget_examples() {
        let s = SqueezingState::from_db(-3.4f64, None).unwrap();
        let empty = budget(s, &[]).unwrap();
        assert_eq!(empty.output(), &s);
        let two = budget(s, &[0.6, 0.6]).unwrap();
        let one = budget(s, &[0.36]).unwrap();
        assert!((two.output().variance() - one.output().variance()).abs() < 1e-15);
        assert!((one.output().db() + 0.944_460_171_192_303).abs() < 1e-12);
        assert!((two.total_transmission() - 0.36).abs() < 1e-15);
        assert_eq!(two.stages.len(), 3);
        assert!(budget(s, &[0.5, 2.0]).is_err());
    }

    #[test]
    fn inverse_budget() {
        let eta = loss_for_target(-3.4f64, -0.9).unwrap();
        assert!((eta - 0.344_751_173_681_649).abs() < 1e-12);
        assert_eq!(loss_for_target(-2.0f64, -2.0).unwrap(), 1.0);
        assert!(matches!(loss_for_target(-3.0f64, -4.0), Err(Error::Domain(_))));
        assert!(loss_for_target(-3.0f64, 1.0).is_err());
        assert!(loss_for_target(0.0f64, -1.0).is_err());
        // Anti-squeezed inputs contract towards shot noise too.
        assert!((loss_for_target(6.0f64, 3.0).unwrap() - (db_to_variance(3.0) - 1.0) / (db_to_variance(6.0) - 1.0)).abs() < 1e-15);
    }
}
