//! Relative-motion eigenfunction, its small-ρ behaviour, radial density,
//! harmonic-basis coefficients and the two-particle wavefunction.
//!
//! Coordinates: ϱ = (r₁ + r₂)/√2, ρ = (r₁ − r₂)/√2, lengths in oscillator
//! units. The relative wavefunction
//! `ψ_ν(ρ) = Γ(−ν)/√(π S2(ν)) e^{−ρ²/2} U(−ν, 1, ρ²)`
//! is normalised with `2π ∫ |ψ|² ρ dρ = 1`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::{digamma, is_nonpositive_integer, laguerre_all, ln_gamma_signed, s2, KummerU, EULER_GAMMA};

/// The normalised relative wavefunction at fixed ν.
#[derive(Debug, Clone)]
pub struct RelativeWavefunction {
    nu: f64,
    inv_norm: f64,
    u: KummerU,
}

impl RelativeWavefunction {
    pub fn new(nu: f64) -> Result<Self> {
        if is_nonpositive_integer(-nu) {
            return Err(Error::Pole {
                func: "psi_rel",
                x: nu,
            });
        }
        let s = s2(nu)?;
        Ok(Self {
            nu,
            inv_norm: 1.0 / (PI * s).sqrt(),
            u: KummerU::new(-nu)?,
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// ψ_ν at relative distance ρ > 0.
    pub fn eval(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(domain("psi_rel", format!("rho must be positive, got {rho}")));
        }
        self.eval_rho2(rho * rho)
    }

    /// ψ_ν as a function of ρ².
    pub fn eval_rho2(&self, rho2: f64) -> Result<f64> {
        if !(rho2 > 0.0) {
            return Err(domain("psi_rel", format!("rho must be positive, got rho^2 = {rho2}")));
        }
        let gu = self.u.eval_gamma_scaled(rho2)?;
        Ok(self.inv_norm * gu * (-0.5 * rho2).exp())
    }
}

/// ψ_ν(ρ) for a single point.
pub fn psi_rel(nu: f64, rho: f64) -> Result<f64> {
    RelativeWavefunction::new(nu)?.eval(rho)
}

/// Small-ρ coefficients: `U(−ν, 1, ρ²) ≈ B ln ρ + C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticCoeffs {
    pub b_nu: f64,
    pub c_nu: f64,
}

pub fn small_rho_coeffs(nu: f64) -> Result<AsymptoticCoeffs> {
    let b_nu = -2.0 * ln_gamma_signed(-nu)?.recip();
    let c_nu = (1.0 + 2.0 * EULER_GAMMA * nu + digamma(1.0 - nu)? * nu)
        * ln_gamma_signed(1.0 - nu)?.recip();
    Ok(AsymptoticCoeffs { b_nu, c_nu })
}

/// Sampled radial density `2π ρ |ψ_ν(ρ)|²`; with the angular factor folded
/// in it integrates to one over ρ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub rho: Vec<f64>,
    pub density: Vec<f64>,
}

impl RadialProfile {
    /// Trapezoid integral over the sampled range.
    pub fn trapezoid(&self) -> f64 {
        self.rho
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(r, d)| 0.5 * (r[1] - r[0]) * (d[0] + d[1]))
            .sum()
    }

    /// Trapezoid estimate of ⟨ρ⟩.
    pub fn mean_rho(&self) -> f64 {
        let num: f64 = self
            .rho
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(r, d)| 0.5 * (r[1] - r[0]) * (r[0] * d[0] + r[1] * d[1]))
            .sum();
        num / self.trapezoid()
    }
}

/// Density on ρ_i = i·ρ_max/points, i = 1..=points (the origin is excluded).
pub fn radial_density(nu: f64, rho_max: f64, points: usize) -> Result<RadialProfile> {
    if !(rho_max > 0.0) || points < 2 {
        return Err(domain("radial_density", "need rho_max > 0 and at least 2 points"));
    }
    let wf = RelativeWavefunction::new(nu)?;
    let h = rho_max / points as f64;
    let mut rho = Vec::with_capacity(points);
    let mut density = Vec::with_capacity(points);
    for i in 1..=points {
        let r = if i == points { rho_max } else { h * i as f64 };
        let psi = wf.eval(r)?;
        rho.push(r);
        density.push(2.0 * PI * r * psi * psi);
    }
    Ok(RadialProfile { rho, density })
}

/// Expansion coefficients `α_n = 1/(√S2(ν) (n − ν))`, n = 0..=n_max, of ψ_ν
/// over the s-wave oscillator orbitals.
pub fn alpha_coeffs(nu: f64, n_max: usize) -> Result<Vec<f64>> {
    let inv = 1.0 / s2(nu)?.sqrt();
    Ok((0..=n_max).map(|n| inv / (n as f64 - nu)).collect())
}

/// s-wave oscillator orbitals `e^{−ρ²/2} L_n(ρ²)/√π`, n = 0..=n_max.
pub fn s_wave_orbitals(n_max: usize, rho: f64) -> Vec<f64> {
    let x = rho * rho;
    let g = (-0.5 * x).exp() / PI.sqrt();
    laguerre_all(n_max, x).into_iter().map(|l| g * l).collect()
}

/// Ground orbital of the 2D oscillator as a function of the squared radius.
pub fn ground_orbital_2d(r2: f64) -> f64 {
    (-0.5 * r2).exp() / PI.sqrt()
}

/// Normalised 1D Hermite functions φ_0(x) ..= φ_n(x).
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * out[0]);
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Two-particle wavefunction with the c.m. in its ground state,
/// `Ψ = −Φ₀(ϱ) ψ_ν(ρ)`.
///
/// The overall minus sign makes the harmonic-basis overlaps equal to the
/// coefficient matrix built in [`crate::schmidt`].
#[derive(Debug, Clone)]
pub struct TotalWavefunction {
    rel: RelativeWavefunction,
}

impl TotalWavefunction {
    pub fn new(nu: f64) -> Result<Self> {
        Ok(Self {
            rel: RelativeWavefunction::new(nu)?,
        })
    }

    pub fn nu(&self) -> f64 {
        self.rel.nu
    }

    pub fn eval(&self, x1: f64, y1: f64, x2: f64, y2: f64) -> Result<f64> {
        let (sx, sy) = (x1 + x2, y1 + y2);
        let (dx, dy) = (x1 - x2, y1 - y2);
        let cm2 = 0.5 * (sx * sx + sy * sy);
        let rel2 = 0.5 * (dx * dx + dy * dy);
        if rel2 == 0.0 {
            return Err(domain("psi_total", "particles coincide"));
        }
        self.eval_jacobi(cm2, rel2)
    }

    /// Ψ from the squared Jacobi radii ϱ² and ρ².
    pub fn eval_jacobi(&self, cm2: f64, rel2: f64) -> Result<f64> {
        Ok(-ground_orbital_2d(cm2) * self.rel.eval_rho2(rel2)?)
    }
}

/// Ψ(r₁, r₂) for a single configuration.
pub fn psi_total(nu: f64, x1: f64, y1: f64, x2: f64, y2: f64) -> Result<f64> {
    TotalWavefunction::new(nu)?.eval(x1, y1, x2, y2)
}
