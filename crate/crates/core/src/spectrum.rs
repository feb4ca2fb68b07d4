//! Energy quantization `ln a = ln√2 − γ − ψ(−ν)/2`, solved branch by branch.
//!
//! Branch 0 lives on ν ∈ (−∞, 0); branch k ≥ 1 on ν ∈ (k−1, k). On every
//! branch ln a increases strictly with ν.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::{digamma, EULER_GAMMA};

/// One solved spectral point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuSolution {
    pub branch: usize,
    pub nu: f64,
    /// Relative-motion energy `2ν + 1` in units of ħω.
    pub energy: f64,
    pub ln_a: f64,
}

impl NuSolution {
    fn new(branch: usize, nu: f64, ln_a: f64) -> Self {
        Self {
            branch,
            nu,
            energy: 2.0 * nu + 1.0,
            ln_a,
        }
    }
}

/// `ln a` as a function of ν.
pub fn ln_a_of_nu(nu: f64) -> Result<f64> {
    let psi = digamma(-nu).map_err(|e| match e {
        Error::Pole { .. } => Error::Pole {
            func: "ln_a_of_nu",
            x: nu,
        },
        other => other,
    })?;
    Ok(0.5 * std::f64::consts::LN_2 - EULER_GAMMA - 0.5 * psi)
}

/// Open ν-interval of a branch; the ground branch is unbounded below.
pub fn branch_interval(branch: usize) -> (f64, f64) {
    if branch == 0 {
        (f64::NEG_INFINITY, 0.0)
    } else {
        ((branch - 1) as f64, branch as f64)
    }
}

const PAD: f64 = 1e-9;
const MAX_BISECTIONS: usize = 200;

/// Inverts the quantization condition on one branch by bracketed bisection.
pub fn nu_of_ln_a(ln_a: f64, branch: usize) -> Result<NuSolution> {
    if !ln_a.is_finite() {
        return Err(domain("nu_of_ln_a", format!("ln a must be finite, got {ln_a}")));
    }
    let fail = || Error::BracketFailure { branch, ln_a };
    let f = |nu: f64| ln_a_of_nu(nu).map(|v| v - ln_a);
    let (left, right) = branch_interval(branch);

    // upper end: approach the pole until the residual turns positive
    let mut pad = PAD;
    let mut hi = right - pad;
    while f(hi)? <= 0.0 {
        pad *= 1e-3;
        let next = right - right.abs().max(1.0) * pad;
        if next == hi || next >= right {
            return Err(fail());
        }
        hi = next;
    }

    let mut lo = if branch == 0 {
        let mut lo = -1.0;
        while f(lo)? >= 0.0 {
            lo *= 2.0;
            if !lo.is_finite() {
                return Err(fail());
            }
        }
        lo
    } else {
        let mut pad = PAD;
        let mut lo = left + pad;
        while f(lo)? >= 0.0 {
            pad *= 1e-3;
            let next = left + left.abs().max(1.0) * pad;
            if next == lo || next <= left {
                return Err(fail());
            }
            lo = next;
        }
        lo
    };
    if lo >= hi {
        return Err(fail());
    }

    let mut best = (f64::INFINITY, lo);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = f(mid)?;
        if r.abs() < best.0 {
            best = (r.abs(), mid);
        }
        if r == 0.0 {
            break;
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    for end in [lo, hi] {
        let r = f(end)?.abs();
        if r < best.0 {
            best = (r, end);
        }
    }
    Ok(NuSolution::new(branch, best.1, ln_a))
}

/// Solves every branch `0..branches` on a uniform ln a grid.
///
/// Rows are ordered branch-major, ln a ascending within a branch. A single
/// step evaluates `ln_a_min` only.
pub fn spectrum_scan(
    ln_a_min: f64,
    ln_a_max: f64,
    steps: usize,
    branches: usize,
) -> Result<Vec<NuSolution>> {
    if steps == 0 || branches == 0 {
        return Err(domain("spectrum_scan", "steps and branches must be positive"));
    }
    if steps >= 2 && !(ln_a_min < ln_a_max) {
        return Err(domain("spectrum_scan", "ln_a_min must be below ln_a_max"));
    }
    let grid = linspace(ln_a_min, ln_a_max, steps);
    let mut out = Vec::with_capacity(steps * branches);
    for branch in 0..branches {
        let mut prev: Option<f64> = None;
        for &ln_a in &grid {
            let sol = nu_of_ln_a(ln_a, branch)?;
            if let Some(p) = prev {
                if !(sol.nu > p) {
                    return Err(Error::BracketFailure { branch, ln_a });
                }
            }
            prev = Some(sol.nu);
            out.push(sol);
        }
    }
    Ok(out)
}

pub(crate) fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + h * i as f64 })
        .collect()
}

/// Two-body binding energy `−2ν` of a ground-branch state.
pub fn binding_energy(nu: f64) -> Result<f64> {
    if !(nu < 0.0) {
        return Err(domain("binding_energy", format!("requires nu < 0, got {nu}")));
    }
    Ok(-2.0 * nu)
}

/// Effective 2D coupling `g = −2π / ln a`.
pub fn effective_coupling(ln_a: f64) -> Result<f64> {
    if ln_a == 0.0 || !ln_a.is_finite() {
        return Err(domain("effective_coupling", format!("requires finite nonzero ln a, got {ln_a}")));
    }
    Ok(-2.0 * std::f64::consts::PI / ln_a)
}
