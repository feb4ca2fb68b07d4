//! Independent checks of the cartesian Schmidt decomposition.
//!
//! * Angular-momentum kernels: Ψ is expanded as
//!   `Σ_m A_m(ρ₁, ρ₂) e^{im(φ₁−φ₂)}/(ρ₁ρ₂)` and every `m` block is
//!   diagonalised on a radial Nyström grid. The symmetric kernel acting on
//!   `L²(dρ)` is `2π A_m(ρ₁, ρ₂)/√(ρ₁ρ₂)`.
//! * A direct 4D quadrature of the overlaps `⟨φ_m ⊗ φ_n | Ψ⟩`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quad::{composite, gauss_hermite, gauss_legendre, graded_breaks, radial_rule, uniform_breaks};
use crate::schmidt::{BasisIndex, ENTROPY_FLOOR};
use crate::wavefn::{hermite_functions, RelativeWavefunction, TotalWavefunction};

/// Angular rules on [0, π] (the integrand is even about θ = π).
#[derive(Debug, Clone)]
struct AngularRules {
    uniform: Vec<(f64, f64, f64)>,
    /// Indexed by grading depth minus one.
    graded: Vec<Vec<(f64, f64, f64)>>,
}

/// (θ, weight, sin²(θ/2)) triples.
fn with_half_sine(rule: Vec<(f64, f64)>) -> Vec<(f64, f64, f64)> {
    rule.into_iter()
        .map(|(t, w)| {
            let s = (0.5 * t).sin();
            (t, w, s * s)
        })
        .collect()
}

impl AngularRules {
    fn new() -> Self {
        let uniform = composite(&gauss_legendre(16), &uniform_breaks(0.0, PI, 16));
        let reference = gauss_legendre(10);
        let graded = (1..=MAX_LEVELS)
            .map(|l| with_half_sine(composite(&reference, &graded_breaks(0.0, PI, l, GRADING, 10))))
            .collect();
        Self {
            uniform: with_half_sine(uniform),
            graded,
        }
    }

    /// Panels graded just far enough to resolve the relative-distance
    /// minimum at θ = 0, whose angular width is about |ρ₁ − ρ₂|/√(ρ₁ρ₂).
    fn pick(&self, r1: f64, r2: f64) -> &[(f64, f64, f64)] {
        let gap = (r1 - r2).abs();
        let width = gap / (r1 * r2).sqrt();
        if gap >= 0.1 && width >= 1.0 {
            return &self.uniform;
        }
        let levels = if width > 0.0 {
            ((width / (4.0 * PI)).ln() / GRADING.ln()).ceil().max(1.0) as usize
        } else {
            MAX_LEVELS
        };
        &self.graded[levels.min(MAX_LEVELS) - 1]
    }
}

const GRADING: f64 = 0.2;
const MAX_LEVELS: usize = 22;

/// Evaluates `I_m(ρ₁, ρ₂) = ∫₀^{2π} Ψ cos(mθ) dθ` for all m ≤ m_max at once.
struct AngularIntegrator {
    psi: TotalWavefunction,
    rules: AngularRules,
}

impl AngularIntegrator {
    fn new(nu: f64) -> Result<Self> {
        Ok(Self {
            psi: TotalWavefunction::new(nu)?,
            rules: AngularRules::new(),
        })
    }

    fn moments(&self, r1: f64, r2: f64, m_max: usize, out: &mut [f64]) -> Result<()> {
        out[..=m_max].iter_mut().for_each(|v| *v = 0.0);
        let sum2 = (r1 + r2) * (r1 + r2);
        let diff2 = (r1 - r2) * (r1 - r2);
        let prod4 = 4.0 * r1 * r2;
        for &(theta, w, s2) in self.rules.pick(r1, r2) {
            let rel2 = 0.5 * (diff2 + prod4 * s2);
            let cm2 = 0.5 * (sum2 - prod4 * s2);
            let v = 2.0 * w * self.psi.eval_jacobi(cm2.max(0.0), rel2)?;
            let c1 = theta.cos();
            let (mut prev, mut cur) = (c1, 1.0);
            for slot in out[..=m_max].iter_mut() {
                *slot += v * cur;
                let next = 2.0 * c1 * cur - prev;
                prev = cur;
                cur = next;
            }
        }
        Ok(())
    }
}

/// `A_m(ρ₁, ρ₂) = (ρ₁ρ₂/2π) ∫₀^{2π} Ψ(ϱ(θ), ρ(θ)) cos(mθ) dθ`.
pub fn angular_projection(nu: f64, m: i64, rho1: f64, rho2: f64) -> Result<f64> {
    if !(rho1 > 0.0) || !(rho2 > 0.0) {
        return Err(domain("angular_projection", "radii must be positive"));
    }
    let m = m.unsigned_abs() as usize;
    let integ = AngularIntegrator::new(nu)?;
    let mut out = vec![0.0; m + 1];
    integ.moments(rho1, rho2, m, &mut out)?;
    Ok(rho1 * rho2 / (2.0 * PI) * out[m])
}

/// One angular-momentum block of the Nyström discretisation.
#[derive(Debug, Clone)]
pub struct AngularBlock {
    pub m: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `√(w_i w_j) · 2π A_m(ρ_i, ρ_j)/√(ρ_i ρ_j)`.
    pub kernel: DMatrix<f64>,
}

/// Builds every block m = 0..=m_max on a shared radial rule.
fn build_blocks(nu: f64, m_max: usize, rule: &[(f64, f64)]) -> Result<Vec<AngularBlock>> {
    let integ = AngularIntegrator::new(nu)?;
    let n = rule.len();
    let mut kernels = vec![DMatrix::zeros(n, n); m_max + 1];
    let mut buf = vec![0.0; m_max + 1];
    for i in 0..n {
        let (ri, wi) = rule[i];
        for j in i..n {
            let (rj, wj) = rule[j];
            integ.moments(ri, rj, m_max, &mut buf)?;
            let scale = (wi * wj * ri * rj).sqrt();
            for (m, k) in kernels.iter_mut().enumerate() {
                let v = scale * buf[m];
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
    }
    let nodes: Vec<f64> = rule.iter().map(|p| p.0).collect();
    let weights: Vec<f64> = rule.iter().map(|p| p.1).collect();
    Ok(kernels
        .into_iter()
        .enumerate()
        .map(|(m, kernel)| AngularBlock {
            m,
            nodes: nodes.clone(),
            weights: weights.clone(),
            kernel,
        })
        .collect())
}

/// One Schmidt coefficient of the kernel method. Each |m| > 0 block
/// appears for both signs of m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaEntry {
    pub m: i64,
    pub s: usize,
    /// Signed eigenvalue of the block kernel.
    pub kappa: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawSchmidt {
    /// Sorted by (|m|, m, s), s indexing descending |κ| within a block.
    pub kappas: Vec<KappaEntry>,
    /// Σκ² per |m| (both signs included), m = 0..
    pub block_weight: Vec<f64>,
    pub sum_sq: f64,
    pub entropy: f64,
}

impl LawSchmidt {
    /// |κ| over all blocks, descending.
    pub fn lambdas(&self) -> Vec<f64> {
        let mut l: Vec<f64> = self.kappas.iter().map(|k| k.kappa.abs()).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        l
    }
}

/// Minimum Σκ² accepted before the grid is declared too coarse.
pub const MIN_SUM_SQ: f64 = 0.995;

/// Radial Nyström rule of `radial_nodes` Gauss–Legendre nodes (five per
/// panel). Panels are uniform in ln ρ up to a knee, since the high-m
/// kernels fall off like (ρ_</ρ_>)^m, and uniform in ρ beyond it.
pub fn law_radial_rule(radial_nodes: usize, radial_cut: f64) -> Vec<(f64, f64)> {
    const PER_PANEL: usize = 5;
    let panels = (radial_nodes / PER_PANEL).max(3);
    let knee = radial_cut.min(5.0) / 2.0;
    let start = knee / 250.0;
    let outer = (panels * 3 / 20).max(1);
    let inner = panels - outer - 1;
    let (lo, hi) = (start.ln(), knee.ln());
    let mut breaks = vec![0.0];
    breaks.extend((0..=inner).map(|i| (lo + (hi - lo) * i as f64 / inner as f64).exp()));
    breaks.extend(uniform_breaks(knee, radial_cut, outer).into_iter().skip(1));
    composite(&gauss_legendre(PER_PANEL), &breaks)
}

/// Kernel-method Schmidt decomposition.
pub fn law_schmidt(nu: f64, m_max: usize, radial_nodes: usize, radial_cut: f64) -> Result<LawSchmidt> {
    if m_max == 0 || radial_nodes < 2 || !(radial_cut > 0.0) {
        return Err(domain("law_schmidt", "need m_max ≥ 1, radial_nodes ≥ 2, radial_cut > 0"));
    }
    let rule = law_radial_rule(radial_nodes, radial_cut);
    law_schmidt_on(nu, m_max, &rule)
}

/// Kernel-method decomposition on an explicit radial rule.
pub fn law_schmidt_on(nu: f64, m_max: usize, rule: &[(f64, f64)]) -> Result<LawSchmidt> {
    let blocks = build_blocks(nu, m_max, rule)?;
    let mut kappas = Vec::new();
    let mut block_weight = Vec::with_capacity(blocks.len());
    for block in blocks {
        let eig = SymmetricEigen::try_new(block.kernel, 1e-15, 10_000)
            .ok_or_else(|| Error::EigenNonConvergence(format!("kernel block m = {}", block.m)))?;
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        let mult = if block.m == 0 { 1.0 } else { 2.0 };
        let weight: f64 = mult * vals.iter().map(|v| v * v).sum::<f64>();
        block_weight.push(weight);
        let signs: &[i64] = if block.m == 0 { &[0] } else { &[1, -1] };
        for &sg in signs {
            for (s, &kappa) in vals.iter().enumerate() {
                kappas.push(KappaEntry {
                    m: sg * block.m as i64,
                    s,
                    kappa,
                });
            }
        }
        if block.m > 0 && weight < 1e-12 {
            break;
        }
    }
    kappas.sort_by(|a, b| {
        a.m.unsigned_abs()
            .cmp(&b.m.unsigned_abs())
            .then(b.m.cmp(&a.m))
            .then(a.s.cmp(&b.s))
    });
    let sum_sq: f64 = block_weight.iter().sum();
    let entropy = kappas
        .iter()
        .map(|k| k.kappa * k.kappa)
        .filter(|&p| p >= ENTROPY_FLOOR)
        .map(|p| -p * p.ln())
        .sum();
    if sum_sq < MIN_SUM_SQ {
        return Err(Error::Underresolved { sum: sum_sq });
    }
    Ok(LawSchmidt {
        kappas,
        block_weight,
        sum_sq,
        entropy,
    })
}

/// `⟨φ_m(r₁) φ_n(r₂) | Ψ⟩` by direct quadrature in Jacobi coordinates:
/// 48×48 Gauss–Hermite in the c.m. plane, and in the relative plane a
/// radial Gauss–Legendre rule graded towards the logarithmic point ρ = 0
/// times a 64-point periodic trapezoid in angle.
pub fn overlap_oracle(nu: f64, m: BasisIndex, n: BasisIndex) -> Result<f64> {
    if m.quanta() > 8 || n.quanta() > 8 {
        return Err(domain("overlap_oracle", "indices limited to 8 quanta"));
    }
    let rel = RelativeWavefunction::new(nu)?;
    let gh = gauss_hermite(48);
    let radial = radial_rule(12.0, 12, 12);
    const ANGLES: usize = 64;
    let trig: Vec<(f64, f64)> = (0..ANGLES)
        .map(|k| (2.0 * PI * k as f64 / ANGLES as f64).sin_cos())
        .collect();
    let deg = m.quanta().max(n.quanta());
    let mut total = 0.0;
    for &(r, wr) in &radial {
        // ψ and the relative half of the Gaussian factors
        let radial_factor = wr * r * (2.0 * PI / ANGLES as f64) * rel.eval(r)?;
        for &(s, c) in &trig {
            let (px, py) = (r * c, r * s);
            // the c.m. factor −e^{−ϱ²/2}/√π times e^{ϱ²} (undoing the Hermite
            // weight) separates over the two cartesian axes
            let axis = |p: f64, mi: usize, ni: usize| -> f64 {
                gh.iter()
                    .map(|&(q, w)| {
                        let h1 = hermite_functions(deg, (q + p) / SQRT_2);
                        let h2 = hermite_functions(deg, (q - p) / SQRT_2);
                        w * (0.5 * q * q).exp() * h1[mi] * h2[ni]
                    })
                    .sum()
            };
            let acc = -axis(px, m.mx, n.mx) * axis(py, m.my, n.my) / PI.sqrt();
            total += radial_factor * acc;
        }
    }
    Ok(total)
}
