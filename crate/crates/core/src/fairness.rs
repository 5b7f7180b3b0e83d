//! Constriction fairness.
//!
//! When `phi ~ U(phi1, phi2)` and `beta ~ U(beta1, beta2)` are drawn
//! independently, the momentum constriction factor is active with
//! probability `P(E)`, `E = {phi > 4 / (1 + beta)}`. A scheme is *fairly
//! constricted* when `P(E) = 1/2`; the unfairness `mu = P(E) - 1/2` measures
//! the departure from that (positive: over-constricted).
//!
//! Integrating over `phi`, the event covers a `beta`-length of
//! `beta2 + 1 - 4 / phi` on `[max(phi1, 4/(1+beta2)), min(phi2, 4/(1+beta1))]`
//! and the whole `beta` range above `4 / (1 + beta1)`, which gives a closed
//! form in terms of one logarithm.

use rand::Rng;

use crate::constriction::activation_threshold;
use crate::error::{domain, Error, Result};
use crate::rng;
use crate::scalar::Scalar;

/// Uniform sampling ranges for `phi = c1 + c2` and `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterScheme<F> {
    pub phi1: F,
    pub phi2: F,
    pub beta1: F,
    pub beta2: F,
}

impl<F: Scalar> ParameterScheme<F> {
    pub fn new(phi1: F, phi2: F, beta1: F, beta2: F) -> Result<Self> {
        let all_finite = [phi1, phi2, beta1, beta2].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(domain("scheme bounds must be finite"));
        }
        if !(phi1 > F::zero() && phi1 < phi2) {
            return Err(domain(format!("need 0 < phi1 < phi2, got phi1={phi1}, phi2={phi2}")));
        }
        if !(beta1 >= F::zero() && beta1 < beta2 && beta2 <= F::one()) {
            return Err(domain(format!("need 0 <= beta1 < beta2 <= 1, got beta1={beta1}, beta2={beta2}")));
        }
        Ok(Self { phi1, phi2, beta1, beta2 })
    }

    /// SMPSO's `c1, c2 ~ U(1.5, 2.5)` with the full momentum range.
    pub fn em_smpso() -> Self {
        Self::new(F::lit(3.0), F::lit(5.0), F::zero(), F::one()).unwrap()
    }

    /// The fairly constricted scheme `phi ~ U(2, 3.4672)`, `beta ~ U(0, 1)`.
    pub fn fcpso() -> Self {
        Self::new(F::lit(2.0), F::lit(FCPSO_PHI2), F::zero(), F::one()).unwrap()
    }

    /// `beta ~ U(0, epsilon)` with SMPSO's `phi ~ U(3, 5)`.
    pub fn restricted(epsilon: F) -> Result<Self> {
        Self::new(F::lit(3.0), F::lit(5.0), F::zero(), epsilon)
    }

    pub fn phi_density(&self) -> F {
        F::one() / (self.phi2 - self.phi1)
    }

    pub fn beta_density(&self) -> F {
        F::one() / (self.beta2 - self.beta1)
    }

    /// `phi_l = max(phi1, 4 / (1 + beta2))`.
    pub fn phi_l(&self) -> F {
        self.phi1.max(activation_threshold(self.beta2))
    }

    /// `phi_g = min(4 / (1 + beta1), phi2)`.
    pub fn phi_g(&self) -> F {
        activation_threshold(self.beta1).min(self.phi2)
    }

    /// Per-coefficient range `c ~ U(phi1 / 2, phi2 / 2)`.
    pub fn coefficient_range(&self) -> (F, F) {
        let two = F::lit(2.0);
        (self.phi1 / two, self.phi2 / two)
    }
}

impl<F: Scalar> std::fmt::Display for ParameterScheme<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{}", self.phi1, self.phi2, self.beta1, self.beta2)
    }
}

/// Upper `phi` bound of the published fair scheme (`2 * 1.7336`).
pub const FCPSO_PHI2: f64 = 3.4672;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    MonteCarlo,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Analytic => "analytic",
            Method::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FairnessReport<F> {
    pub p_activation: F,
    pub unfairness: F,
    pub method: Method,
    /// Number of draws; zero for analytic reports.
    pub sample_count: u64,
    /// Binomial standard error of `p_activation` (zero when analytic).
    pub standard_error: F,
}

impl<F: Scalar> FairnessReport<F> {
    pub fn analytic(scheme: &ParameterScheme<F>) -> Self {
        let p = activation_probability(scheme);
        Self {
            p_activation: p,
            unfairness: p - F::lit(0.5),
            method: Method::Analytic,
            sample_count: 0,
            standard_error: F::zero(),
        }
    }
}

/// `ln(hi / lo)` computed as `ln_1p((hi - lo) / lo)` for accuracy near `hi = lo`.
#[inline]
fn ln_ratio<F: Scalar>(hi: F, lo: F) -> F {
    ((hi - lo) / lo).ln_1p()
}

/// Closed-form `P(E)` for any valid scheme.
pub fn activation_probability<F: Scalar>(scheme: &ParameterScheme<F>) -> F {
    let zero = F::zero();
    let low_threshold = activation_threshold(scheme.beta2);
    let high_threshold = activation_threshold(scheme.beta1);

    // Partially active strip: beta in (4/phi - 1, beta2].
    let lo = scheme.phi1.max(low_threshold);
    let hi = scheme.phi2.min(high_threshold);
    let partial = if hi > lo {
        let four = F::lit(4.0);
        ((scheme.beta2 + F::one()) * (hi - lo) - four * ln_ratio(hi, lo)) * scheme.beta_density()
    } else {
        zero
    };

    // Fully active strip: every beta in the range activates.
    let full_lo = scheme.phi1.max(high_threshold);
    let full = if scheme.phi2 > full_lo { scheme.phi2 - full_lo } else { zero };

    let p = (partial + full) * scheme.phi_density();
    p.max(zero).min(F::one())
}

/// `mu = P(E) - 1/2`.
pub fn unfairness<F: Scalar>(scheme: &ParameterScheme<F>) -> F {
    activation_probability(scheme) - F::lit(0.5)
}

/// `1 - ln(1 + e) / e`, with a series near zero.
fn one_minus_log1p_ratio<F: Scalar>(e: F) -> F {
    if e < F::lit(1e-4) {
        // e/2 - e^2/3 + e^3/4 - e^4/5
        let (half, third, quarter, fifth) = (F::lit(0.5), F::lit(1.0 / 3.0), F::lit(0.25), F::lit(0.2));
        e * (half - e * (third - e * (quarter - e * fifth)))
    } else {
        F::one() - e.ln_1p() / e
    }
}

/// Closed-form unfairness of `phi ~ U(3, 5)`, `beta ~ U(0, epsilon)`.
///
/// `2 [1 - ln(1 + e) / e]` below `e = 1/3` and
/// `[1 - (4 ln(4/3) - 1) / e] / 2` from there on.
pub fn unfairness_restricted<F: Scalar>(epsilon: F) -> Result<F> {
    if !(epsilon > F::zero() && epsilon < F::one()) {
        return Err(domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let third = F::one() / F::lit(3.0);
    if epsilon < third {
        Ok(F::lit(2.0) * one_minus_log1p_ratio(epsilon))
    } else {
        let c = F::lit(4.0) * (F::lit(4.0) / F::lit(3.0)).ln() - F::one();
        Ok(F::lit(0.5) * (F::one() - c / epsilon))
    }
}

/// Unfairness of `phi ~ U(2, phi2)`, `beta ~ U(0, 1)` for `phi2 in (2, 4]`:
/// `3/2 - 4 ln(phi2 / 2) / (phi2 - 2)`.
pub fn unfairness_phi2<F: Scalar>(phi2: F) -> Result<F> {
    let two = F::lit(2.0);
    if !(phi2 > two && phi2 <= F::lit(4.0)) {
        return Err(domain(format!("phi2 must lie in (2, 4], got {phi2}")));
    }
    Ok(F::lit(1.5) - F::lit(4.0) * ln_ratio(phi2, two) / (phi2 - two))
}

/// `psi(x) = (x - 1) / ln x - 4/3`; its root `x` gives the fair `phi2 = 2x`.
pub fn psi<F: Scalar>(x: F) -> F {
    (x - F::one()) / x.ln() - F::lit(4.0) / F::lit(3.0)
}

/// Empirical `P(E)` from `samples` uniform draws of `(phi, beta)`.
pub fn monte_carlo_activation(scheme: &ParameterScheme<f64>, samples: u64, seed: u64) -> Result<FairnessReport<f64>> {
    if samples == 0 {
        return Err(domain("monte carlo needs at least one sample"));
    }
    let mut rng = rng::stream(seed, &[0xFA12]);
    let mut hits = 0u64;
    for _ in 0..samples {
        let phi = rng.random_range(scheme.phi1..scheme.phi2);
        let beta = rng.random_range(scheme.beta1..scheme.beta2);
        if phi > activation_threshold(beta) {
            hits += 1;
        }
    }
    let n = samples as f64;
    let p = hits as f64 / n;
    Ok(FairnessReport {
        p_activation: p,
        unfairness: p - 0.5,
        method: Method::MonteCarlo,
        sample_count: samples,
        standard_error: (p * (1.0 - p) / n).sqrt(),
    })
}

/// Bisection for a root of `f` in `[lo, hi]`; `f(lo)` and `f(hi)` must
/// differ in sign. Runs until the bracket can no longer shrink.
pub(crate) fn bisect<F: Scalar>(mut lo: F, mut hi: F, f: impl Fn(F) -> F) -> Result<F> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSolution(format!("function undefined at an end of [{lo}, {hi}]")));
    }
    if f_lo == F::zero() {
        return Ok(lo);
    }
    if f_hi == F::zero() {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSolution(format!("no sign change on [{lo}, {hi}] (f={f_lo}, {f_hi})")));
    }
    let two = F::lit(2.0);
    for _ in 0..200 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == F::zero() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// Upper bound `phi2` making `phi ~ U(phi1, phi2)`, `beta ~ U(0, 1)` fair.
///
/// Searches `(phi1, 4]`; for `phi1 = 2` the answer is `2 x` with `x` the
/// root of [`psi`], about 3.4672.
pub fn solve_fair_phi2<F: Scalar>(phi1: F) -> Result<F> {
    let four = F::lit(4.0);
    if !phi1.is_finite() || phi1 <= F::zero() || phi1 >= four {
        return Err(Error::NoSolution(format!("phi1={phi1} leaves no bracket below 4")));
    }
    let mu =
        |phi2: F| ParameterScheme::new(phi1, phi2, F::zero(), F::one()).map(|s| unfairness(&s)).unwrap_or(F::nan());
    let lo = phi1 + phi1.max(F::one()) * F::epsilon() * four;
    bisect(lo, four, mu)
}

/// Highest unfairness reachable by the restricted-momentum family (`epsilon = 1`).
pub fn max_reachable_unfairness<F: Scalar>() -> F {
    F::one() - F::lit(2.0) * (F::lit(4.0) / F::lit(3.0)).ln()
}

/// A scheme whose unfairness equals `target_mu`.
///
/// Non-positive targets use the `phi ~ U(2, phi2)`, `beta ~ U(0, 1)` family
/// (covering `(-1/2, 0.1137]`); positive targets use `phi ~ U(3, 5)`,
/// `beta ~ U(0, epsilon)` (covering `(0, 1 - 2 ln(4/3)]`), which cannot
/// reach zero itself.
pub fn scheme_for_unfairness<F: Scalar>(target_mu: F) -> Result<ParameterScheme<F>> {
    let half = F::lit(0.5);
    let upper = max_reachable_unfairness::<F>();
    let tol = F::lit(1e-9);
    if !target_mu.is_finite() || target_mu <= -half || target_mu > upper + tol {
        return Err(Error::UnreachableUnfairness(target_mu.to_f64_lossy()));
    }
    let two = F::lit(2.0);
    let four = F::lit(4.0);
    if target_mu <= F::zero() {
        let f = |phi2: F| {
            ParameterScheme::new(two, phi2, F::zero(), F::one()).map(|s| unfairness(&s) - target_mu).unwrap_or(F::nan())
        };
        let lo = two + F::lit(1e-9).max(F::epsilon() * four);
        let phi2 = bisect(lo, four, f).map_err(|_| Error::UnreachableUnfairness(target_mu.to_f64_lossy()))?;
        return ParameterScheme::new(two, phi2, F::zero(), F::one());
    }
    if target_mu >= upper {
        return ParameterScheme::restricted(F::one());
    }
    let f = |eps: F| ParameterScheme::restricted(eps).map(|s| unfairness(&s) - target_mu).unwrap_or(F::nan());
    let lo = F::lit(1e-12).max(F::epsilon());
    let eps = bisect(lo, F::one(), f).map_err(|_| Error::UnreachableUnfairness(target_mu.to_f64_lossy()))?;
    ParameterScheme::restricted(eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln43() -> f64 {
        (4.0f64 / 3.0).ln()
    }

    #[test]
    fn scheme_validation() {
        assert!(ParameterScheme::new(3.0, 3.0, 0.0, 1.0).is_err());
        assert!(ParameterScheme::new(3.0, 5.0, 0.5, 0.5).is_err());
        assert!(ParameterScheme::new(3.0, 5.0, -0.1, 0.5).is_err());
        assert!(ParameterScheme::new(3.0, 5.0, 0.0, 1.1).is_err());
        assert!(ParameterScheme::new(0.0, 5.0, 0.0, 1.0).is_err());
        assert!(ParameterScheme::new(3.0, f64::NAN, 0.0, 1.0).is_err());
        let s = ParameterScheme::new(3.0, 5.0, 0.0, 1.0).unwrap();
        assert_eq!(s.phi_l(), 3.0);
        assert_eq!(s.phi_g(), 4.0);
        assert_eq!(s.phi_density(), 0.5);
        assert_eq!(s.beta_density(), 1.0);
        assert_eq!(s.coefficient_range(), (1.5, 2.5));
    }

    #[test]
    fn em_smpso_scheme_is_over_constricted() {
        let s = ParameterScheme::<f64>::em_smpso();
        let p = activation_probability(&s);
        assert!((p - (3.0 - 4.0 * ln43()) / 2.0).abs() < 1e-14);
        assert!((p - 0.924_636).abs() < 1e-6);
        let mu = unfairness(&s);
        assert!((mu - (1.0 - 2.0 * ln43())).abs() < 1e-14);
        assert!((mu - 0.424_636).abs() < 1e-6);
    }

    #[test]
    fn fair_scheme_is_fair() {
        let s = ParameterScheme::new(2.0f64, 3.4672, 0.0, 1.0).unwrap();
        assert!((activation_probability(&s) - 0.5).abs() < 5e-4);
        assert!(unfairness(&s).abs() < 5e-4);
    }

    #[test]
    fn two_to_four_matches_closed_form() {
        let s = ParameterScheme::new(2.0, 4.0, 0.0, 1.0).unwrap();
        let expected = 2.0 - 2.0 * 2f64.ln();
        assert!((activation_probability(&s) - expected).abs() < 1e-14);
    }

    #[test]
    fn empty_and_full_activation_regions() {
        // phi2 below 4/(1+beta2) = 2: never active.
        let s = ParameterScheme::new(1.0, 1.9, 0.0, 1.0).unwrap();
        assert_eq!(activation_probability(&s), 0.0);
        assert_eq!(unfairness(&s), -0.5);
        // phi1 above 4/(1+beta1) = 4: always active.
        let s = ParameterScheme::new(4.5, 6.0, 0.0, 0.3).unwrap();
        assert_eq!(activation_probability(&s), 1.0);
        // phi1 above the top threshold but below the bottom one.
        let s = ParameterScheme::new(3.5, 3.8, 0.2, 0.9).unwrap();
        let p = activation_probability(&s);
        assert!(p > 0.0 && p <= 1.0);
    }

    #[test]
    fn restricted_branches_meet_at_one_third() {
        let below = 2.0 * (1.0 - 3.0 * (4.0f64 / 3.0).ln());
        let above = unfairness_restricted(1.0 / 3.0).unwrap();
        assert!((below - above).abs() < 1e-14);
        assert!((above - 0.27391).abs() < 1e-5);
        let just_below = unfairness_restricted(1.0 / 3.0 - 1e-12).unwrap();
        assert!((just_below - above).abs() < 1e-10);
    }

    #[test]
    fn restricted_limits() {
        let tiny = unfairness_restricted(1e-8f64).unwrap();
        assert!(tiny.abs() < 1e-7);
        assert!(tiny > 0.0);
        let near_one = unfairness_restricted(0.999).unwrap();
        let expected = 0.5 * (1.0 - (4.0 * ln43() - 1.0) / 0.999);
        assert!((near_one - expected).abs() < 1e-14);
        assert!((near_one - 0.424_560).abs() < 1e-6);
        assert!(unfairness_restricted(0.0).is_err());
        assert!(unfairness_restricted(1.0).is_err());
    }

    #[test]
    fn restricted_matches_general_integral() {
        for i in 1..200 {
            let eps = i as f64 / 200.0;
            let general = unfairness(&ParameterScheme::restricted(eps).unwrap());
            let closed = unfairness_restricted(eps).unwrap();
            assert!((general - closed).abs() < 1e-12, "eps={eps}: {general} vs {closed}");
        }
    }

    #[test]
    fn phi2_family_matches_general_integral() {
        for i in 1..=100 {
            let phi2 = 2.0 + 2.0 * i as f64 / 100.0;
            let general = unfairness(&ParameterScheme::new(2.0, phi2, 0.0, 1.0).unwrap());
            let closed = unfairness_phi2(phi2).unwrap();
            assert!((general - closed).abs() < 1e-12);
        }
        assert!((unfairness_phi2(4.0f64).unwrap() - 0.113_706).abs() < 1e-6);
    }

    #[test]
    fn psi_brackets_the_root() {
        assert!(psi(2.0f64) > 0.0);
        assert!((psi(2.0f64) - (1.0 / 2f64.ln() - 4.0 / 3.0)).abs() < 1e-15);
        assert!((psi(1.0 + 1e-9f64) + 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn fair_phi2_root() {
        let phi2 = solve_fair_phi2(2.0f64).unwrap();
        assert!((phi2 - 3.4672).abs() < 5e-4, "{phi2}");
        let s = ParameterScheme::new(2.0, phi2, 0.0, 1.0).unwrap();
        assert!(unfairness(&s).abs() <= 1e-6);
        assert!(solve_fair_phi2(4.0f64).is_err());
        // phi1 = 3.9: P(E) > 1/2 everywhere above, no root.
        assert!(matches!(solve_fair_phi2(3.9f64), Err(Error::NoSolution(_))));
    }

    #[test]
    fn scheme_for_unfairness_examples() {
        let s = scheme_for_unfairness(0.0f64).unwrap();
        assert_eq!((s.phi1, s.beta1, s.beta2), (2.0, 0.0, 1.0));
        assert!((s.phi2 - 3.4672).abs() < 5e-4);

        let s = scheme_for_unfairness(0.27391f64).unwrap();
        assert_eq!((s.phi1, s.phi2, s.beta1), (3.0, 5.0, 0.0));
        assert!((s.beta2 - 1.0 / 3.0).abs() < 1e-4);

        let s = scheme_for_unfairness(-0.49f64).unwrap();
        assert_eq!(s.phi1, 2.0);
        assert!(s.phi2 > 2.0 && s.phi2 < 2.1, "{}", s.phi2);

        for target in [-0.45f64, -0.2, -0.01, 0.0, 0.01, 0.1, 0.25, 0.4, 0.42, max_reachable_unfairness()] {
            let s = scheme_for_unfairness(target).unwrap();
            assert!((unfairness(&s) - target).abs() <= 1e-6, "target {target}");
        }

        assert!(matches!(scheme_for_unfairness(0.43f64), Err(Error::UnreachableUnfairness(_))));
        assert!(scheme_for_unfairness(-0.5f64).is_err());
    }

    #[test]
    fn monte_carlo_is_deterministic_and_close() {
        let s = ParameterScheme::<f64>::em_smpso();
        let a = monte_carlo_activation(&s, 200_000, 9).unwrap();
        let b = monte_carlo_activation(&s, 200_000, 9).unwrap();
        assert_eq!(a, b);
        assert!((a.p_activation - activation_probability(&s)).abs() < 4.0 * a.standard_error + 1e-12);

        let empty = ParameterScheme::new(1.0, 1.9, 0.0, 1.0).unwrap();
        let r = monte_carlo_activation(&empty, 10_000, 1).unwrap();
        assert_eq!(r.p_activation, 0.0);
        assert!(monte_carlo_activation(&s, 0, 1).is_err());
    }

    #[test]
    fn single_precision_fairness() {
        let s = ParameterScheme::<f32>::em_smpso();
        assert!((unfairness(&s) - 0.424_636).abs() < 1e-5);
        let phi2 = solve_fair_phi2(2.0f32).unwrap();
        assert!((phi2 - 3.4672).abs() < 5e-4);
    }
}
