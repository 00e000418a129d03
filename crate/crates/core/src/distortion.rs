//! Distortion functions `ψ: [0, 1] → [0, 1]` with `ψ(0) = 0`, `ψ(1) = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Distortion {
    /// `ψ(t) = t^{1/ρ}`, `ρ >= 1`.
    ProportionalHazards { rho: f64 },
    /// `ψ(t) = t`; the premium reduces to the mean.
    Identity,
    /// `ψ(t) = 1 - (1 - t)^κ`, `κ >= 1`.
    DualPower { kappa: f64 },
}

impl Distortion {
    pub fn proportional_hazards(rho: f64) -> Result<Self> {
        if rho >= 1.0 && rho.is_finite() {
            Ok(Self::ProportionalHazards { rho })
        } else {
            Err(Error::RhoInvalid(rho))
        }
    }

    pub fn dual_power(kappa: f64) -> Result<Self> {
        if kappa >= 1.0 && kappa.is_finite() {
            Ok(Self::DualPower { kappa })
        } else {
            Err(Error::InvalidDistortion(format!(
                "dual power exponent must be >= 1, got {kappa}"
            )))
        }
    }

    /// Re-checks parameters of a value built without the constructors.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::ProportionalHazards { rho } => Self::proportional_hazards(rho).map(drop),
            Self::Identity => Ok(()),
            Self::DualPower { kappa } => Self::dual_power(kappa).map(drop),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TOutOfRange(t));
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        match *self {
            Self::ProportionalHazards { rho } => t.powf(1.0 / rho),
            Self::Identity => t,
            Self::DualPower { kappa } => -(kappa * (-t).ln_1p()).exp_m1(),
        }
    }

    /// Regular-variation index `β` of `ψ` at zero: `ψ(s) = s^β h(s)` with
    /// `h` bounded and bounded away from zero near the origin.
    pub fn index_at_zero(&self) -> f64 {
        match *self {
            Self::ProportionalHazards { rho } => 1.0 / rho,
            Self::Identity | Self::DualPower { .. } => 1.0,
        }
    }

    /// `h(s) = ψ(s) / s^β` for `0 < s <= 1`, computed without cancellation.
    pub(crate) fn reduced(&self, s: f64) -> f64 {
        match *self {
            Self::ProportionalHazards { .. } | Self::Identity => 1.0,
            Self::DualPower { kappa } => {
                if s == 0.0 {
                    kappa
                } else {
                    -(kappa * (-s).ln_1p()).exp_m1() / s
                }
            }
        }
    }

    /// Distortion parameter `ρ` when this is a proportional-hazards transform.
    pub fn rho(&self) -> Option<f64> {
        match *self {
            Self::ProportionalHazards { rho } => Some(rho),
            _ => None,
        }
    }
}

/// L-statistic weights `c_{i,n} = ψ(i/n) - ψ((i-1)/n)`, `i = 1..=n`.
///
/// `c_{1,n}` multiplies the largest observation.
pub fn l_coefficients(psi: &Distortion, n: usize) -> Result<Vec<f64>> {
    psi.validate()?;
    let nf = n as f64;
    let mut prev = 0.0;
    Ok((1..=n)
        .map(|i| {
            let cur = psi.eval_unchecked(i as f64 / nf);
            let c = cur - prev;
            prev = cur;
            c
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_values() {
        let fams = [
            Distortion::proportional_hazards(1.12).unwrap(),
            Distortion::proportional_hazards(3.0).unwrap(),
            Distortion::Identity,
            Distortion::dual_power(2.0).unwrap(),
        ];
        for psi in fams {
            assert_eq!(psi.eval(0.0).unwrap(), 0.0);
            assert_eq!(psi.eval(1.0).unwrap(), 1.0);
            assert!(psi.eval(1.5).is_err());
            assert!(psi.eval(-0.1).is_err());
        }
    }

    #[test]
    fn sample_values() {
        let ph = Distortion::proportional_hazards(2.0).unwrap();
        assert_eq!(ph.eval(0.25).unwrap(), 0.5);
        assert_eq!(Distortion::Identity.eval(0.37).unwrap(), 0.37);
        let dp = Distortion::dual_power(2.0).unwrap();
        assert!((dp.eval(0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!((dp.reduced(1e-12) - 2.0).abs() < 1e-11);
    }

    #[test]
    fn invalid_parameters() {
        assert_eq!(
            Distortion::proportional_hazards(0.9),
            Err(Error::RhoInvalid(0.9))
        );
        assert!(Distortion::dual_power(0.5).is_err());
        assert!(Distortion::ProportionalHazards { rho: 0.5 }
            .validate()
            .is_err());
    }

    #[test]
    fn coefficients() {
        assert_eq!(
            l_coefficients(&Distortion::Identity, 4).unwrap(),
            vec![0.25; 4]
        );
        let ph = l_coefficients(&Distortion::proportional_hazards(2.0).unwrap(), 4).unwrap();
        assert_eq!(ph[0], 0.5);
        assert_eq!(
            l_coefficients(&Distortion::dual_power(3.0).unwrap(), 1).unwrap(),
            vec![1.0]
        );
    }
}
