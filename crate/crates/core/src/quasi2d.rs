//! Effective 2D scattering length of a pancake trap with tight axial
//! confinement, `a_eff = 2.092 a_z exp(−√(π/2) a_z/a_3D)`.
//!
//! Here η = ω_z/ω_⊥, so that the in-plane oscillator length is
//! `a_⊥ = a_z √η`.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::schmidt::entropy_of;

/// Prefactor of the effective scattering length, as printed.
pub const A_EFF_PREFACTOR: f64 = 2.092;

fn sqrt_half_pi() -> f64 {
    (0.5 * std::f64::consts::PI).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quasi2DParams {
    pub eta: f64,
    /// `a_z/a_3D`; negative values mean an attractive 3D scattering length.
    pub az_over_a3d: f64,
}

impl Quasi2DParams {
    pub fn new(eta: f64, az_over_a3d: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(domain("Quasi2DParams", format!("eta must be positive, got {eta}")));
        }
        if !az_over_a3d.is_finite() {
            return Err(domain("Quasi2DParams", "a_z/a_3D must be finite"));
        }
        Ok(Self { eta, az_over_a3d })
    }
}

/// Effective 2D scattering length in the same units as `a_z`.
pub fn a_eff(a_z: f64, a_3d: f64) -> Result<f64> {
    if !(a_z > 0.0) || !a_z.is_finite() {
        return Err(domain("a_eff", format!("a_z must be positive, got {a_z}")));
    }
    if a_3d == 0.0 || a_3d.is_nan() {
        return Err(domain("a_eff", "a_3D must be nonzero"));
    }
    Ok(A_EFF_PREFACTOR * a_z * (-sqrt_half_pi() * a_z / a_3d).exp())
}

/// `ln(a_eff/a_⊥) = ln(2.092/√η) − √(π/2)·a_z/a_3D`.
pub fn ln_a_eff_scaled(params: Quasi2DParams) -> f64 {
    (A_EFF_PREFACTOR / params.eta.sqrt()).ln() - sqrt_half_pi() * params.az_over_a3d
}

/// One row of the quasi-2D overlay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quasi2DPoint {
    pub ratio: f64,
    pub ln_a_eff: f64,
    pub entropy: Option<f64>,
}

/// Maps each `a_z/a_3D` to `ln a_eff`, without entropies.
pub fn quasi2d_mapping(eta: f64, ratios: &[f64]) -> Result<Vec<Quasi2DPoint>> {
    ratios
        .iter()
        .map(|&ratio| {
            let p = Quasi2DParams::new(eta, ratio)?;
            Ok(Quasi2DPoint {
                ratio,
                ln_a_eff: ln_a_eff_scaled(p),
                entropy: None,
            })
        })
        .collect()
}

/// True-2D entanglement entropy evaluated at each effective coupling.
pub fn quasi2d_entropy_curve(
    eta: f64,
    ratios: &[f64],
    branch: usize,
    n_max: usize,
) -> Result<Vec<Quasi2DPoint>> {
    let mut rows = quasi2d_mapping(eta, ratios)?;
    for row in &mut rows {
        row.entropy = Some(entropy_of(row.ln_a_eff, branch, n_max)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn critical_value_at_eta_20() {
        let v = ln_a_eff_scaled(Quasi2DParams::new(20.0, 0.0).unwrap());
        assert!((v + 0.7597).abs() <= 1e-3, "{v}");
        assert!((v + 0.76).abs() <= 5e-3);
        let v = ln_a_eff_scaled(Quasi2DParams::new(1.0, 0.0).unwrap());
        assert_relative_eq!(v, 2.092f64.ln(), epsilon = 1e-15);
        assert_relative_eq!(v, 0.738_120_546, epsilon = 1e-9);
    }

    #[test]
    fn direct_evaluation() {
        assert_relative_eq!(a_eff(1.0, 1.0).unwrap(), 2.092 * (-1.253_314_137_3f64).exp(), epsilon = 1e-9);
        assert_relative_eq!(a_eff(1.0, 1.0).unwrap(), 0.5973, epsilon = 1e-4);
        assert_relative_eq!(a_eff(0.5, 1e300).unwrap(), 0.5 * 2.092, epsilon = 1e-12);
        assert!(a_eff(0.0, 1.0).is_err());
        assert!(a_eff(1.0, 0.0).is_err());
        assert!(Quasi2DParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn overlay_points() {
        let rows = quasi2d_entropy_curve(20.0, &[-1.0, 0.0, 1.0], 0, 20).unwrap();
        let crit = rows[1].ln_a_eff;
        assert_relative_eq!(rows[0].ln_a_eff - crit, crit - rows[2].ln_a_eff, epsilon = 1e-12);
        let direct = entropy_of(crit, 0, 20).unwrap();
        assert_eq!(rows[1].entropy, Some(direct));
        // strong 3D repulsion pushes ln a_eff down and the entropy up
        assert!(rows[2].entropy.unwrap() > rows[0].entropy.unwrap());
        assert!(quasi2d_mapping(20.0, &[0.0]).unwrap()[0].entropy.is_none());
    }

    proptest! {
        #[test]
        fn scaled_form_matches_direct(a_z in 0.01f64..10.0, a_3d in -50.0f64..50.0, eta in 0.05f64..100.0) {
            prop_assume!(a_3d.abs() > 1e-2);
            let a_perp = a_z * eta.sqrt();
            let direct = (a_eff(a_z, a_3d).unwrap() / a_perp).ln();
            let scaled = ln_a_eff_scaled(Quasi2DParams::new(eta, a_z / a_3d).unwrap());
            prop_assert!((direct - scaled).abs() <= 1e-12 * direct.abs().max(1.0));
        }

        #[test]
        fn decreasing_in_ratio(eta in 0.1f64..50.0, r in -5.0f64..5.0, dr in 1e-3f64..5.0) {
            let f = |x| ln_a_eff_scaled(Quasi2DParams::new(eta, x).unwrap());
            prop_assert!(f(r + dr) < f(r));
        }
    }
}
