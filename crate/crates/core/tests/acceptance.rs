//! Acceptance suite: one [PASS]/[FAIL] line per criterion, non-zero exit on
//! any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use trap2d::oracle::{law_schmidt, overlap_oracle};
use trap2d::quasi2d::{ln_a_eff_scaled, Quasi2DParams};
use trap2d::schmidt::{
    coefficient_matrix, power_law_fit, schmidt_decompose, schmidt_orbital, schmidt_spectrum, BasisIndex,
};
use trap2d::specfun::{kummer_u_log, s2, EULER_GAMMA};
use trap2d::spectrum::{binding_energy, nu_of_ln_a};
use trap2d::wavefn::{ground_orbital_2d, small_rho_coeffs};

const LN_A_REF: f64 = -0.5359;
const N_MAX: usize = 60;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Criterion = fn() -> Result<Outcome, trap2d::Error>;

fn nu(ln_a: f64, branch: usize) -> Result<f64, trap2d::Error> {
    Ok(nu_of_ln_a(ln_a, branch)?.nu)
}

/// Collapses values equal to within `tol` into (value, multiplicity).
fn distinct(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((u, m)) if (*u - v).abs() <= tol => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

fn c1_schmidt_eigenvalues() -> Result<Outcome, trap2d::Error> {
    let expected = [0.7408, 0.3164, 0.1686, 0.1029];
    let s = schmidt_spectrum(&coefficient_matrix(nu(LN_A_REF, 0)?, N_MAX)?, false)?;
    let d = distinct(&s.lambdas, 1e-8);
    let got: Vec<f64> = d.iter().take(4).map(|x| x.0).collect();
    let values_ok = got.iter().zip(&expected).all(|(g, e)| (g - e).abs() <= 0.01);
    let pair_ok = d.len() > 1 && d[1].1 == 2;
    Ok(outcome(
        values_ok && pair_ok,
        format!(
            "distinct leading {:?} (multiplicities {:?}) vs {expected:?}",
            got.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>(),
            d.iter().take(4).map(|x| x.1).collect::<Vec<_>>()
        ),
    ))
}

fn c2_power_law() -> Result<Outcome, trap2d::Error> {
    let s = schmidt_spectrum(&coefficient_matrix(nu(LN_A_REF, 0)?, N_MAX)?, false)?;
    let f = power_law_fit(&s.lambdas)?;
    let pass = (0.65..=0.75).contains(&f.alpha) && (-0.95..=-0.85).contains(&f.beta);
    Ok(outcome(
        pass,
        format!("alpha = {:.4} in [0.65, 0.75], beta = {:.4} in [-0.95, -0.85], R^2 = {:.4}", f.alpha, f.beta, f.r_squared),
    ))
}

fn c3_quasi2d_critical() -> Result<Outcome, trap2d::Error> {
    let v = ln_a_eff_scaled(Quasi2DParams::new(20.0, 0.0)?);
    Ok(outcome((v + 0.760).abs() <= 1e-3, format!("ln a_eff = {v:.6}, target -0.760 +/- 0.001")))
}

fn c4_entropy_curves() -> Result<Outcome, trap2d::Error> {
    let grid: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
    let mut curves = Vec::new();
    for branch in 0..3 {
        let mut row = Vec::new();
        for &l in &grid {
            row.push(schmidt_spectrum(&coefficient_matrix(nu(l, branch)?, N_MAX)?, false)?.entropy);
        }
        curves.push(row);
    }
    let dec = curves[0].windows(2).all(|w| w[1] < w[0]);
    let inc1 = curves[1].windows(2).all(|w| w[1] > w[0]);
    let inc2 = curves[2].windows(2).all(|w| w[1] > w[0]);
    let order = curves[1].iter().zip(&curves[2]).all(|(a, b)| b >= a);
    let fmt = |c: &Vec<f64>| c.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(" ");
    Ok(outcome(
        dec && inc1 && inc2 && order,
        format!(
            "b0 decreasing {dec} [{}]; b1 increasing {inc1} [{}]; b2 increasing {inc2} [{}]; b2 >= b1 {order}",
            fmt(&curves[0]),
            fmt(&curves[1]),
            fmt(&curves[2])
        ),
    ))
}

fn c5_oracle_equivalence() -> Result<Outcome, trap2d::Error> {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for ln_a in [-1.0, LN_A_REF, 0.0, 1.0] {
        let v = nu(ln_a, 0)?;
        let cart = schmidt_spectrum(&coefficient_matrix(v, N_MAX)?, false)?.entropy;
        let law = law_schmidt(v, 40, 400, 10.0)?.entropy;
        worst = worst.max((cart - law).abs());
        parts.push(format!("ln a {ln_a}: cartesian {cart:.4} kernel {law:.4}"));
    }
    Ok(outcome(worst <= 1e-3, format!("{}; max |diff| = {worst:.2e} (tol 1e-3)", parts.join(", "))))
}

fn c6_spectral_anchors() -> Result<Outcome, trap2d::Error> {
    let anchor = 1.5 * std::f64::consts::LN_2 - 0.5 * EULER_GAMMA;
    let a = nu(anchor, 0)?;
    let b = nu(anchor - 1.0, 1)?;
    Ok(outcome(
        (a + 0.5).abs() <= 1e-10 && (b - 0.5).abs() <= 1e-10,
        format!("branch 0: nu + 0.5 = {:.1e}; branch 1: nu - 0.5 = {:.1e}", a + 0.5, b - 0.5),
    ))
}

fn c7_small_rho() -> Result<Outcome, trap2d::Error> {
    let rho: f64 = 1e-3;
    let mut worst = 0.0f64;
    for branch in 0..=1 {
        for ln_a in [-0.5, 0.5] {
            let v = nu(ln_a, branch)?;
            let c = small_rho_coeffs(v)?;
            let u = kummer_u_log(-v, rho * rho)?;
            worst = worst.max(((u - (c.b_nu * rho.ln() + c.c_nu)) / u).abs());
        }
    }
    Ok(outcome(worst <= 1e-3, format!("max relative deviation {worst:.2e} at rho = 1e-3 (tol 1e-3)")))
}

fn c8_entries() -> Result<Outcome, trap2d::Error> {
    let v = nu(LN_A_REF, 0)?;
    let c = coefficient_matrix(v, 4)?;
    let closed = 1.0 / (v * s2(v)?.sqrt());
    let c00_err = (c.entries[(0, 0)] - closed).abs();
    let idx = |b: BasisIndex| c.basis.iter().position(|x| *x == b).expect("in basis");
    let pairs = [
        ((0, 0), (0, 0)),
        ((0, 0), (2, 0)),
        ((2, 0), (0, 2)),
        ((1, 0), (1, 0)),
        ((1, 0), (0, 1)),
        ((1, 1), (1, 1)),
        ((2, 0), (2, 0)),
        ((0, 0), (2, 2)),
        ((3, 0), (1, 0)),
        ((2, 1), (0, 1)),
    ];
    let mut worst = 0.0f64;
    for ((a, b), (p, q)) in pairs {
        let (m, n) = (BasisIndex::new(a, b), BasisIndex::new(p, q));
        let o = overlap_oracle(v, m, n)?;
        worst = worst.max((o - c.entries[(idx(m), idx(n))]).abs());
    }
    Ok(outcome(
        c00_err <= 1e-10 && worst <= 1e-4,
        format!("|C00 - 1/(nu sqrt S2)| = {c00_err:.1e} (tol 1e-10); max |C - quadrature| over 10 entries = {worst:.1e} (tol 1e-4)"),
    ))
}

fn c9_binding_energy() -> Result<Outcome, trap2d::Error> {
    let ln_a = -6.0;
    let ratio = binding_energy(nu(ln_a, 0)?)? * (2.0 * ln_a).exp();
    Ok(outcome(
        (0.95..=1.05).contains(&ratio),
        format!("-2 nu a^2 = {ratio:.5} (target [0.95, 1.05]; limit of the quantization condition 4 exp(-2 gamma) = {:.5})", 4.0 * (-2.0 * EULER_GAMMA).exp()),
    ))
}

fn c10_non_interacting() -> Result<Outcome, trap2d::Error> {
    let d = schmidt_decompose(&coefficient_matrix(nu(10.0, 0)?, N_MAX)?, false)?;
    let s = &d.spectrum;
    let f = schmidt_orbital(&d, 0, 5.0, 101)?;
    let mut worst = 0.0f64;
    for iy in 0..f.n {
        for ix in 0..f.n {
            let (x, y) = (f.coord(ix), f.coord(iy));
            worst = worst.max((f.at(ix, iy) - ground_orbital_2d(x * x + y * y)).abs());
        }
    }
    Ok(outcome(
        s.entropy <= 0.05 && s.lambdas[0] >= 0.99 && worst <= 2e-2,
        format!("S = {:.4} (<= 0.05), lambda_1 = {:.5} (>= 0.99), max orbital deviation {worst:.1e} (<= 2e-2)", s.entropy, s.lambdas[0]),
    ))
}

fn c11_normalization() -> Result<Outcome, trap2d::Error> {
    let v = nu(LN_A_REF, 0)?;
    let mut worst_sum = 0.0f64;
    let mut worst_frob = 0.0f64;
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    let mut last = f64::NAN;
    for n_max in 20..=N_MAX {
        let c = coefficient_matrix(v, n_max)?;
        let s = schmidt_spectrum(&c, false)?;
        let sum: f64 = s.lambdas.iter().map(|l| l * l).sum();
        worst_sum = worst_sum.max((sum + s.deficit - 1.0).abs());
        worst_frob = worst_frob.max((sum - c.entries.norm_squared()).abs());
        monotone &= s.deficit <= prev;
        prev = s.deficit;
        last = s.deficit;
    }
    Ok(outcome(
        worst_sum <= 1e-12 && worst_frob <= 1e-12 && last <= 0.05 && monotone,
        format!(
            "max |sum l^2 + deficit - 1| = {worst_sum:.1e}, max |sum l^2 - ||C||_F^2| = {worst_frob:.1e}, deficit(60) = {last:.4}, non-increasing over 20..=60: {monotone}"
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion, Duration); 11] = [
        ("1 Schmidt eigenvalue reproduction", c1_schmidt_eigenvalues, Duration::from_secs(60)),
        ("2 power-law decay", c2_power_law, Duration::from_secs(60)),
        ("3 quasi-2D critical value", c3_quasi2d_critical, Duration::from_secs(1)),
        ("4 entropy curve shape", c4_entropy_curves, Duration::from_secs(600)),
        ("5 oracle equivalence", c5_oracle_equivalence, Duration::from_secs(600)),
        ("6 closed-form spectral anchors", c6_spectral_anchors, Duration::from_secs(1)),
        ("7 small-rho asymptotics", c7_small_rho, Duration::from_secs(1)),
        ("8 coefficient entries", c8_entries, Duration::from_secs(300)),
        ("9 binding-energy law", c9_binding_energy, Duration::from_secs(1)),
        ("10 non-interacting limit", c10_non_interacting, Duration::from_secs(60)),
        ("11 normalization and truncation", c11_normalization, Duration::from_secs(300)),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= budget;
        let pass = pass && in_time;
        if !pass {
            failures += 1;
        }
        println!(
            "[{}] {name}: {detail} ({:.2} s, budget {} s{})",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
