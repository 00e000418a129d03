//! Pareto-type loss models used by the simulation studies.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::sample::LossSample;

/// Support of the Pareto components: `[0, ∞)` with survival `(1 + x)^{-1/γ}`
/// or `[1, ∞)` with survival `x^{-1/γ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportVariant {
    #[default]
    Lomax,
    StrictPareto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LossModel {
    StrictPareto {
        gamma: f64,
    },
    Lomax {
        gamma: f64,
    },
    /// `1 - F = (1 - ε) g(x)^{-1/γ₁} + ε g(x)^{-1/γ₂}`, `g(x) = 1 + x` or `x`.
    Mixture {
        gamma1: f64,
        gamma2: f64,
        eps: f64,
        support: SupportVariant,
    },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

impl LossModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::StrictPareto { gamma } | Self::Lomax { gamma } => positive("gamma", gamma),
            Self::Mixture {
                gamma1,
                gamma2,
                eps,
                ..
            } => {
                positive("gamma1", gamma1)?;
                positive("gamma2", gamma2)?;
                if (0.0..0.5).contains(&eps) {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!(
                        "contamination fraction must lie in [0, 0.5), got {eps}"
                    )))
                }
            }
        }
    }

    pub fn support(&self) -> SupportVariant {
        match *self {
            Self::StrictPareto { .. } => SupportVariant::StrictPareto,
            Self::Lomax { .. } => SupportVariant::Lomax,
            Self::Mixture { support, .. } => support,
        }
    }

    /// Left endpoint of the support.
    pub fn lower_bound(&self) -> f64 {
        match self.support() {
            SupportVariant::Lomax => 0.0,
            SupportVariant::StrictPareto => 1.0,
        }
    }

    /// The uncontaminated core distribution (the model itself when not a mixture).
    pub fn core(&self) -> Self {
        match *self {
            Self::Mixture {
                gamma1,
                support: SupportVariant::Lomax,
                ..
            } => Self::Lomax { gamma: gamma1 },
            Self::Mixture {
                gamma1,
                support: SupportVariant::StrictPareto,
                ..
            } => Self::StrictPareto { gamma: gamma1 },
            other => other,
        }
    }

    /// Tail index of the core distribution.
    pub fn core_gamma(&self) -> f64 {
        match *self {
            Self::StrictPareto { gamma } | Self::Lomax { gamma } => gamma,
            Self::Mixture { gamma1, .. } => gamma1,
        }
    }

    /// Tail index governing `1 - F`: the heaviest component with positive weight.
    pub fn effective_gamma(&self) -> f64 {
        match *self {
            Self::Mixture {
                gamma1,
                gamma2,
                eps,
                ..
            } if eps > 0.0 => gamma1.max(gamma2),
            _ => self.core_gamma(),
        }
    }

    /// Returns this model with the contamination fraction replaced (mixtures only).
    pub fn with_eps(&self, eps: f64) -> Self {
        match *self {
            Self::Mixture {
                gamma1,
                gamma2,
                support,
                ..
            } => Self::Mixture {
                gamma1,
                gamma2,
                eps,
                support,
            },
            other => other,
        }
    }

    /// `(1 - ε, γ₁, ε, γ₂)` view; single models have `ε = 0`.
    fn components(&self) -> (f64, f64, f64, f64) {
        match *self {
            Self::StrictPareto { gamma } | Self::Lomax { gamma } => (1.0, gamma, 0.0, gamma),
            Self::Mixture {
                gamma1,
                gamma2,
                eps,
                ..
            } => (1.0 - eps, gamma1, eps, gamma2),
        }
    }

    /// Survival as a function of `y = 1/g(x) ∈ [0, 1]`.
    fn survival_of_y(&self, y: f64) -> f64 {
        let (w1, g1, w2, g2) = self.components();
        if w2 == 0.0 {
            y.powf(1.0 / g1)
        } else {
            w1 * y.powf(1.0 / g1) + w2 * y.powf(1.0 / g2)
        }
    }

    fn y_of_x(&self, x: f64) -> Result<f64> {
        let g = match self.support() {
            SupportVariant::Lomax if x >= 0.0 => 1.0 + x,
            SupportVariant::StrictPareto if x >= 1.0 => x,
            _ => return Err(Error::OutOfSupport(x)),
        };
        Ok(1.0 / g)
    }

    fn x_of_y(&self, y: f64) -> f64 {
        match self.support() {
            SupportVariant::Lomax => 1.0 / y - 1.0,
            SupportVariant::StrictPareto => 1.0 / y,
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if x.is_nan() {
            return Err(Error::OutOfSupport(x));
        }
        let y = self.y_of_x(x)?;
        Ok(1.0 - self.survival_of_y(y))
    }

    /// Inverse cdf for `0 <= u < 1`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..1.0).contains(&u) {
            return Err(Error::UOutOfRange(u));
        }
        self.quantile_unchecked(u)
    }

    fn quantile_unchecked(&self, u: f64) -> Result<f64> {
        match *self {
            Self::StrictPareto { gamma } => Ok((-gamma * (-u).ln_1p()).exp()),
            Self::Lomax { gamma } => Ok((-gamma * (-u).ln_1p()).exp_m1()),
            Self::Mixture { eps: 0.0, .. } => self.core().quantile_unchecked(u),
            Self::Mixture { .. } => {
                let y = self.solve_y(1.0 - u, u)?;
                Ok(self.x_of_y(y))
            }
        }
    }

    /// Bisection for `S(y) = target` on the bracket spanned by the two
    /// component solutions `target^{γ₁}` and `target^{γ₂}`.
    fn solve_y(&self, target: f64, u: f64) -> Result<f64> {
        const MAX_ITER: usize = 200;
        let (_, g1, _, g2) = self.components();
        let (a, b) = (target.powf(g1), target.powf(g2));
        let (mut lo, mut hi) = (a.min(b), a.max(b));
        let slack = 4.0 * f64::EPSILON * target;
        if self.survival_of_y(lo) > target + slack || self.survival_of_y(hi) < target - slack {
            return Err(Error::RootNotBracketed(u));
        }
        for _ in 0..MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.survival_of_y(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `n` independent draws by inverse transform, returned sorted.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<LossSample> {
        self.validate()?;
        if n < 2 {
            return Err(Error::EmptyOrTooSmall(n));
        }
        let mut values = (0..n)
            .map(|_| self.quantile_unchecked(rng.random::<f64>()))
            .collect::<Result<Vec<_>>>()?;
        values.sort_by(f64::total_cmp);
        Ok(LossSample::from_sorted_unchecked(values))
    }

    /// Exact proportional-hazards premium `∫ (1 - F(x))^{1/ρ} dx`.
    ///
    /// Closed forms for the single-component models; quadrature for mixtures.
    pub fn true_premium(&self, rho: f64) -> Result<f64> {
        self.validate()?;
        if !(rho >= 1.0 && rho.is_finite()) {
            return Err(Error::RhoInvalid(rho));
        }
        match *self {
            Self::Lomax { gamma } | Self::StrictPareto { gamma } => {
                let p = gamma * rho;
                if p >= 1.0 {
                    return Err(Error::DivergentPremium { gamma, rho });
                }
                let base = p / (1.0 - p);
                Ok(match self.support() {
                    SupportVariant::Lomax => base,
                    SupportVariant::StrictPareto => 1.0 + base,
                })
            }
            Self::Mixture { eps: 0.0, .. } => self.core().true_premium(rho),
            Self::Mixture { .. } => self.premium_by_quadrature(rho),
        }
    }

    /// Quadrature route to the premium, valid for every family.
    ///
    /// With `y = 1/g(x)` the premium is `∫_0^1 S(y)^{1/ρ} y^{-2} dy` (plus one
    /// for the strict support). Near zero `S(y)^{1/ρ} ~ y^{1/(γρ)}` with `γ`
    /// the effective tail index, so `u = y^e`, `e = 1/(γρ) - 1`, leaves the
    /// bounded integrand `h(u^{1/e}) / e`, `h(y) = (S(y) / y^{1/γ})^{1/ρ}`.
    pub fn premium_by_quadrature(&self, rho: f64) -> Result<f64> {
        self.validate()?;
        if !(rho >= 1.0 && rho.is_finite()) {
            return Err(Error::RhoInvalid(rho));
        }
        let gamma = self.effective_gamma();
        let e = 1.0 / (gamma * rho) - 1.0;
        if !(e > 0.0) {
            return Err(Error::DivergentPremium { gamma, rho });
        }
        let (w1, g1, w2, g2) = self.components();
        let inv_gamma = 1.0 / gamma;
        let h = |y: f64| {
            let mut s = w1 * y.powf(1.0 / g1 - inv_gamma);
            if w2 > 0.0 {
                s += w2 * y.powf(1.0 / g2 - inv_gamma);
            }
            s.powf(1.0 / rho)
        };
        let inv_e = 1.0 / e;
        let integral =
            quadrature::integrate(|u| h(u.powf(inv_e)), 0.0, 1.0, 1e-12, 1e-13, 4000)? / e;
        Ok(match self.support() {
            SupportVariant::Lomax => integral,
            SupportVariant::StrictPareto => 1.0 + integral,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_stream;

    const LOMAX: LossModel = LossModel::Lomax { gamma: 0.6 };

    fn mixture(eps: f64) -> LossModel {
        LossModel::Mixture {
            gamma1: 0.6,
            gamma2: 2.0,
            eps,
            support: SupportVariant::Lomax,
        }
    }

    #[test]
    fn cdf_values() {
        assert_eq!(LOMAX.cdf(0.0).unwrap(), 0.0);
        assert_eq!(
            LossModel::StrictPareto { gamma: 0.5 }.cdf(2.0).unwrap(),
            0.75
        );
        let expect = 1.0 - 0.75 * 2f64.powf(-5.0 / 3.0) - 0.25 * 2f64.powf(-0.5);
        assert!((mixture(0.25).cdf(1.0).unwrap() - expect).abs() < 1e-15);
        assert_eq!(LOMAX.cdf(-0.1), Err(Error::OutOfSupport(-0.1)));
        assert!(LossModel::StrictPareto { gamma: 0.6 }.cdf(0.5).is_err());
    }

    #[test]
    fn degenerate_mixture_matches_core() {
        let m = mixture(0.0);
        for x in [0.0, 0.3, 1.0, 17.0, 1e4] {
            assert_eq!(m.cdf(x).unwrap(), LOMAX.cdf(x).unwrap());
        }
        for u in [0.0, 0.1, 0.5, 0.99, 0.999_999] {
            assert_eq!(m.quantile(u).unwrap(), LOMAX.quantile(u).unwrap());
        }
        assert_eq!(
            m.true_premium(1.12).unwrap(),
            LOMAX.true_premium(1.12).unwrap()
        );
    }

    #[test]
    fn quantile_left_endpoints() {
        assert_eq!(LOMAX.quantile(0.0).unwrap(), 0.0);
        assert_eq!(
            LossModel::StrictPareto { gamma: 0.6 }
                .quantile(0.0)
                .unwrap(),
            1.0
        );
        assert!((mixture(0.1).quantile(0.0).unwrap()).abs() < 1e-15);
        assert_eq!(LOMAX.quantile(1.0), Err(Error::UOutOfRange(1.0)));
    }

    #[test]
    fn mixture_quantile_roots() {
        let m = mixture(0.1);
        let x = m.quantile(0.99).unwrap();
        assert!((m.cdf(x).unwrap() - 0.99).abs() < 1e-10);
        // contaminated tail sits above the core quantile
        assert!(x > LOMAX.quantile(0.99).unwrap());
    }

    #[test]
    fn premiums() {
        let p = LOMAX.true_premium(1.12).unwrap();
        assert!((p - 0.672 / 0.328).abs() < 1e-14);
        assert!((p - 2.0487).abs() < 5e-4);
        assert!((LOMAX.true_premium(1.0).unwrap() - 1.5).abs() < 1e-14);
        assert!((LOMAX.premium_by_quadrature(1.0).unwrap() - 1.5).abs() < 1e-9);
        let strict = LossModel::StrictPareto { gamma: 0.6 };
        assert!((strict.true_premium(1.12).unwrap() - (1.0 + 0.672 / 0.328)).abs() < 1e-14);
        assert!(matches!(
            mixture(0.1).true_premium(1.12),
            Err(Error::DivergentPremium { gamma, .. }) if gamma == 2.0
        ));
        assert!(matches!(
            LossModel::Lomax { gamma: 0.9 }.true_premium(1.2),
            Err(Error::DivergentPremium { .. })
        ));
        assert_eq!(LOMAX.true_premium(0.5), Err(Error::RhoInvalid(0.5)));
    }

    #[test]
    fn convergent_mixture_premium_between_components() {
        let m = LossModel::Mixture {
            gamma1: 0.4,
            gamma2: 0.8,
            eps: 0.2,
            support: SupportVariant::Lomax,
        };
        let p = m.true_premium(1.1).unwrap();
        let lo = LossModel::Lomax { gamma: 0.4 }.true_premium(1.1).unwrap();
        let hi = LossModel::Lomax { gamma: 0.8 }.true_premium(1.1).unwrap();
        assert!(lo < p && p < hi, "{lo} {p} {hi}");
    }

    #[test]
    fn invalid_parameters() {
        assert!(LossModel::Lomax { gamma: 0.0 }.validate().is_err());
        assert!(mixture(0.5).validate().is_err());
        assert!(mixture(-0.1).validate().is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_sorted() {
        let a = mixture(0.25).sample(500, &mut seeded_stream(11)).unwrap();
        let b = mixture(0.25).sample(500, &mut seeded_stream(11)).unwrap();
        assert_eq!(a, b);
        assert!(a.values().windows(2).all(|w| w[0] <= w[1]));
        assert!(LOMAX.sample(1, &mut seeded_stream(1)).is_err());
    }
}
