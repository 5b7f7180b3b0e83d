//! Constriction factors for vanilla and momentum PSO.
//!
//! With `pbest = gbest = g`, `w = 1` and `y = g - x`, one EMPSO step is the
//! linear map `[v, y, m] -> U [v, y, m]`. Two of the eigenvalues of `U` are
//! the roots `lambda_pm` of a quadratic with discriminant
//! `phi^2 - 4 (1 - beta) phi`; the third is zero. The constriction factor is
//! `-1 / max|lambda_pm|` whenever that maximum exceeds one, which happens
//! exactly when `phi > 4 / (1 + beta)`.

use num_complex::Complex;

use crate::error::{domain, Result};
use crate::scalar::Scalar;

/// Validated `(phi, beta)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstrictionInput<F> {
    pub phi: F,
    pub beta: F,
}

impl<F: Scalar> ConstrictionInput<F> {
    pub fn new(phi: F, beta: F) -> Result<Self> {
        check_phi(phi)?;
        check_beta(beta)?;
        Ok(Self { phi, beta })
    }

    /// `Delta = phi^2 - 4 (1 - beta) phi`.
    pub fn discriminant(&self) -> F {
        discriminant(self.phi, self.beta)
    }

    /// Activation threshold `4 / (1 + beta)`.
    pub fn threshold(&self) -> F {
        activation_threshold(self.beta)
    }

    pub fn is_active(&self) -> bool {
        self.phi > self.threshold()
    }
}

/// State of the deterministic `[v, y, m]` map.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MapState<F> {
    pub v: F,
    pub y: F,
    pub m: F,
}

impl<F: Scalar> MapState<F> {
    pub fn new(v: F, y: F, m: F) -> Self {
        Self { v, y, m }
    }

    pub fn to_array(self) -> [F; 3] {
        [self.v, self.y, self.m]
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.y.is_finite() && self.m.is_finite()
    }
}

/// The two non-trivial eigenvalues of the evolution matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair<F> {
    pub lambda_plus: Complex<F>,
    pub lambda_minus: Complex<F>,
    pub discriminant: F,
}

impl<F: Scalar> EigenPair<F> {
    /// `max(|lambda_+|, |lambda_-|)`.
    pub fn max_modulus(&self) -> F {
        self.lambda_plus.norm().max(self.lambda_minus.norm())
    }

    pub fn is_real(&self) -> bool {
        self.discriminant >= F::zero()
    }
}

fn check_phi<F: Scalar>(phi: F) -> Result<()> {
    if !phi.is_finite() || phi <= F::zero() {
        return Err(domain(format!("phi must be finite and positive, got {phi}")));
    }
    Ok(())
}

fn check_beta<F: Scalar>(beta: F) -> Result<()> {
    if !beta.is_finite() || beta < F::zero() || beta >= F::one() {
        return Err(domain(format!("beta must lie in [0, 1), got {beta}")));
    }
    Ok(())
}

#[inline]
fn discriminant<F: Scalar>(phi: F, beta: F) -> F {
    phi * phi - F::lit(4.0) * (F::one() - beta) * phi
}

/// `4 / (1 + beta)`; `phi` strictly above it activates the constriction.
#[inline]
pub fn activation_threshold<F: Scalar>(beta: F) -> F {
    F::lit(4.0) / (F::one() + beta)
}

/// Constriction factor of vanilla PSO.
///
/// Returns `2 / (2 - phi - sqrt(phi^2 - 4 phi))` for `phi > 4` (a negative
/// number) and `1` otherwise.
pub fn chi_vanilla<F: Scalar>(phi: F) -> Result<F> {
    check_phi(phi)?;
    let four = F::lit(4.0);
    if phi > four {
        let two = F::lit(2.0);
        let disc = (phi * phi - four * phi).max(F::zero());
        Ok(two / (two - phi - disc.sqrt()))
    } else {
        Ok(F::one())
    }
}

/// Constriction factor of momentum PSO.
///
/// Returns `2 / (2 - phi - sqrt(phi^2 - 4 (1 - beta) phi))` when
/// `phi > 4 / (1 + beta)` and `1` otherwise. At `beta = 0` this is
/// [`chi_vanilla`].
pub fn chi_momentum<F: Scalar>(phi: F, beta: F) -> Result<F> {
    check_phi(phi)?;
    check_beta(beta)?;
    if phi > activation_threshold(beta) {
        let two = F::lit(2.0);
        // The active branch implies Delta > 0; clamp rounding at the boundary.
        let disc = discriminant(phi, beta).max(F::zero());
        Ok(two / (two - phi - disc.sqrt()))
    } else {
        Ok(F::one())
    }
}

/// Whether the constriction factor takes its active branch.
pub fn activation_event<F: Scalar>(phi: F, beta: F) -> Result<bool> {
    Ok(ConstrictionInput::new(phi, beta)?.is_active())
}

/// Evolution matrix `U` of the `[v, y, m]` map, row-major.
pub fn evolution_matrix<F: Scalar>(phi: F, beta: F) -> [[F; 3]; 3] {
    let one = F::one();
    [[one - beta, phi, beta], [beta - one, one - phi, -beta], [one - beta, F::zero(), beta]]
}

/// One step of the deterministic momentum map.
pub fn step_map<F: Scalar>(state: MapState<F>, phi: F, beta: F) -> MapState<F> {
    let one = F::one();
    let MapState { v, y, m } = state;
    MapState {
        v: (one - beta) * v + phi * y + beta * m,
        y: (beta - one) * v + (one - phi) * y - beta * m,
        m: (one - beta) * v + beta * m,
    }
}

/// `lambda_pm = ((2 - phi) +- sqrt(Delta)) / 2`, complex when `Delta < 0`.
pub fn eigenvalues<F: Scalar>(phi: F, beta: F) -> Result<EigenPair<F>> {
    let input = ConstrictionInput::new(phi, beta)?;
    let disc = input.discriminant();
    let two = F::lit(2.0);
    let centre = (two - phi) / two;
    let root = if disc >= F::zero() {
        Complex::new(disc.sqrt() / two, F::zero())
    } else {
        Complex::new(F::zero(), (-disc).sqrt() / two)
    };
    let centre = Complex::new(centre, F::zero());
    Ok(EigenPair { lambda_plus: centre + root, lambda_minus: centre - root, discriminant: disc })
}

/// `(|phi - 2| + sqrt(Delta)) / 2`, the spectral radius for real roots.
pub fn lambda_max<F: Scalar>(phi: F, beta: F) -> Result<F> {
    let input = ConstrictionInput::new(phi, beta)?;
    let disc = input.discriminant();
    if disc <= F::zero() {
        return Err(domain(format!("lambda_max needs a positive discriminant, got {disc} (phi={phi}, beta={beta})")));
    }
    Ok(((phi - F::lit(2.0)).abs() + disc.sqrt()) / F::lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn chi_vanilla_examples() {
        assert_eq!(chi_vanilla(3.0).unwrap(), 1.0);
        assert_eq!(chi_vanilla(4.0).unwrap(), 1.0);
        assert!(close(chi_vanilla(4.5).unwrap(), -0.5, 1e-15));
        // 2 / (2 - 4.1 - sqrt(0.41))
        let expected = 2.0 / (2.0 - 4.1 - 0.41f64.sqrt());
        assert!(close(chi_vanilla(4.1).unwrap(), expected, 1e-15));
        assert!(close(chi_vanilla(4.1).unwrap(), -0.72985, 1e-5));
    }

    #[test]
    fn chi_rejects_bad_phi() {
        assert!(chi_vanilla(0.0).is_err());
        assert!(chi_vanilla(-1.0).is_err());
        assert!(chi_vanilla(f64::NAN).is_err());
        assert!(chi_vanilla(f64::INFINITY).is_err());
        assert!(chi_momentum(3.0, 1.0).is_err());
        assert!(chi_momentum(3.0, -0.1).is_err());
    }

    #[test]
    fn chi_momentum_examples() {
        assert_eq!(chi_momentum(3.0, 0.2).unwrap(), 1.0);
        let expected = -1.0 / (1.0 + 2f64.sqrt());
        assert!(close(chi_momentum(4.0, 0.5).unwrap(), expected, 1e-15));
        assert!(close(chi_momentum(4.0, 0.5).unwrap(), -0.41421, 1e-5));
        assert_eq!(chi_momentum(4.5, 0.0).unwrap(), chi_vanilla(4.5).unwrap());
    }

    #[test]
    fn boundary_maps_to_inactive_branch() {
        // 4 / (1 + 0.25) = 3.2 exactly representable.
        assert!(!activation_event(3.2, 0.25).unwrap());
        assert_eq!(chi_momentum(3.2, 0.25).unwrap(), 1.0);
        assert!(activation_event(3.2 + 1e-12, 0.25).unwrap());
    }

    #[test]
    fn activation_examples() {
        assert!(activation_event(3.5, 0.2).unwrap());
        assert!(!activation_event(2.0, 0.99).unwrap());
        assert!(activation_event(5.0, 0.0).unwrap());
    }

    #[test]
    fn evolution_matrix_examples() {
        let u = evolution_matrix(4.0, 0.5);
        assert_eq!(u, [[0.5, 4.0, 0.5], [-0.5, -3.0, -0.5], [0.5, 0.0, 0.5]]);
        let u = evolution_matrix(1.0, 0.0);
        assert_eq!(u, [[1.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]);
    }

    #[test]
    fn step_map_examples() {
        let s = step_map(MapState::new(1.0, 1.0, 0.0), 4.0, 0.5);
        assert_eq!(s, MapState::new(4.5, -3.5, 0.5));
        assert_eq!(step_map(MapState::default(), 3.3, 0.7), MapState::default());
        let (v, y, m) = (0.3, -1.7, 2.2);
        let s = step_map(MapState::new(v, y, m), 2.5, 0.0);
        assert_eq!(s, MapState::new(v + 2.5 * y, -v + (1.0 - 2.5) * y, v));
    }

    #[test]
    fn step_map_is_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let phi = rng.random_range(0.01..6.0);
            let beta = rng.random_range(0.0..1.0);
            let s = MapState::new(
                rng.random_range(-10.0..10.0),
                rng.random_range(-10.0..10.0),
                rng.random_range(-10.0..10.0),
            );
            let u = evolution_matrix(phi, beta);
            let x = s.to_array();
            let next = step_map(s, phi, beta).to_array();
            for r in 0..3 {
                let prod: f64 = (0..3).map(|c| u[r][c] * x[c]).sum();
                let scale = prod.abs().max(1.0);
                assert!((prod - next[r]).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let e = eigenvalues(4.0, 0.5).unwrap();
        assert!(e.is_real());
        assert!(close(e.lambda_plus.re, 2f64.sqrt() - 1.0, 1e-12));
        assert!(close(e.lambda_minus.re, -1.0 - 2f64.sqrt(), 1e-12));

        let e = eigenvalues(1.0, 0.5).unwrap();
        assert!(close(e.discriminant, -1.0, 1e-15));
        assert!(close(e.lambda_plus.norm(), 0.5f64.sqrt(), 1e-12));
        assert!(close(e.lambda_minus.norm(), 0.5f64.sqrt(), 1e-12));

        let e = eigenvalues(4.5, 0.0).unwrap();
        assert!(close(e.lambda_minus.re, -2.0, 1e-12));
        assert!(close(e.max_modulus(), 2.0, 1e-12));
        assert!(close(chi_vanilla(4.5).unwrap(), -1.0 / e.max_modulus(), 1e-12));
    }

    #[test]
    fn lambda_max_examples() {
        assert!(close(lambda_max(4.0, 0.5).unwrap(), 1.0 + 2f64.sqrt(), 1e-12));
        assert!(close(lambda_max(4.5, 0.0).unwrap(), 2.0, 1e-15));
        assert!(lambda_max(1.0, 0.5).is_err());
    }

    #[test]
    fn lambda_max_agrees_with_eigenvalue_moduli() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 1000 {
            let phi: f64 = rng.random_range(0.01..8.0);
            let beta: f64 = rng.random_range(0.0..1.0);
            if discriminant(phi, beta) <= 0.0 {
                continue;
            }
            let by_formula = lambda_max(phi, beta).unwrap();
            let e = eigenvalues(phi, beta).unwrap();
            let by_moduli = e.lambda_plus.re.abs().max(e.lambda_minus.re.abs());
            assert!((by_formula - by_moduli).abs() <= 1e-12 * by_moduli.max(1.0));
            checked += 1;
        }
    }

    #[test]
    fn works_in_single_precision() {
        let chi: f32 = chi_momentum(4.0f32, 0.5).unwrap();
        assert!((chi + 0.414_213_57).abs() < 1e-6);
        let e = eigenvalues(1.0f32, 0.5).unwrap();
        assert!((e.max_modulus() - 0.5f32.sqrt()).abs() < 1e-6);
    }
}
