//! Schmidt decomposition of the two-particle state over a truncated
//! cartesian oscillator basis.
//!
//! With the c.m. in its ground state the state expands as
//! `Ψ = Σ C[m, n] φ_m(r₁) φ_n(r₂)` where
//! `C[m, n] = 2/(π√S2(ν)) · 1/(2ν − Σ_j(m_j+n_j)) · Π_j e_j (−1)^{(m_j−n_j)/2} Γ((m_j+n_j+1)/2)/√(m_j! n_j!)`
//! and `e_j` is 1 when `m_j + n_j` is even, 0 otherwise. The Schmidt
//! coefficients are the absolute eigenvalues of the real symmetric `C`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{is_nonpositive_integer, ln_gamma_half_ratio, s2};
use crate::spectrum::nu_of_ln_a;
use crate::wavefn::hermite_functions;

/// Cartesian oscillator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisIndex {
    pub mx: usize,
    pub my: usize,
}

impl BasisIndex {
    pub fn new(mx: usize, my: usize) -> Self {
        Self { mx, my }
    }

    pub fn quanta(&self) -> usize {
        self.mx + self.my
    }

    /// Index of the parity class (mx mod 2, my mod 2) in 0..4.
    pub fn parity_class(&self) -> usize {
        2 * (self.mx % 2) + self.my % 2
    }
}

/// Basis with `mx + my ≤ n_max`, ordered by total quanta then ascending mx.
pub fn basis_enumerate(n_max: usize) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity((n_max + 1) * (n_max + 2) / 2);
    for t in 0..=n_max {
        for mx in 0..=t {
            out.push(BasisIndex::new(mx, t - mx));
        }
    }
    out
}

/// Dense coefficient matrix over [`basis_enumerate`]`(n_max)`.
#[derive(Debug, Clone)]
pub struct CoefficientMatrix {
    pub nu: f64,
    pub n_max: usize,
    pub basis: Vec<BasisIndex>,
    pub entries: DMatrix<f64>,
}

impl CoefficientMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Entry generator with the ν-dependent prefactor and the Γ-ratio table
/// precomputed.
#[derive(Debug, Clone)]
pub struct CoefficientRule {
    nu: f64,
    ln_prefactor: f64,
    size: usize,
    ln_ratio: Vec<f64>,
}

impl CoefficientRule {
    /// Table covering single-axis quanta up to `max_quanta`.
    pub fn new(nu: f64, max_quanta: usize) -> Result<Self> {
        if is_nonpositive_integer(-nu) {
            return Err(Error::Pole {
                func: "coefficient_matrix",
                x: nu,
            });
        }
        let s = s2(nu)?;
        let size = max_quanta + 1;
        let mut ln_ratio = vec![0.0; size * size];
        for m in 0..size {
            for n in 0..size {
                ln_ratio[m * size + n] = ln_gamma_half_ratio(m, n);
            }
        }
        Ok(Self {
            nu,
            ln_prefactor: (2.0 / (std::f64::consts::PI * s.sqrt())).ln(),
            size,
            ln_ratio,
        })
    }

    pub fn entry(&self, m: BasisIndex, n: BasisIndex) -> f64 {
        if (m.mx + n.mx) % 2 == 1 || (m.my + n.my) % 2 == 1 {
            return 0.0;
        }
        debug_assert!(m.mx.max(n.mx).max(m.my).max(n.my) < self.size);
        let total = (m.quanta() + n.quanta()) as f64;
        let denom = 2.0 * self.nu - total;
        let half_x = (m.mx as i64 - n.mx as i64) / 2;
        let half_y = (m.my as i64 - n.my as i64) / 2;
        let mut negative = denom < 0.0;
        if (half_x + half_y).rem_euclid(2) == 1 {
            negative = !negative;
        }
        let ln_abs = self.ln_prefactor - denom.abs().ln()
            + self.ln_ratio[m.mx * self.size + n.mx]
            + self.ln_ratio[m.my * self.size + n.my];
        let mag = ln_abs.exp();
        if negative {
            -mag
        } else {
            mag
        }
    }
}

/// Builds the coefficient matrix at fixed ν.
pub fn coefficient_matrix(nu: f64, n_max: usize) -> Result<CoefficientMatrix> {
    let rule = CoefficientRule::new(nu, n_max)?;
    let basis = basis_enumerate(n_max);
    let dim = basis.len();
    let mut entries = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        for i in j..dim {
            let v = rule.entry(basis[i], basis[j]);
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    Ok(CoefficientMatrix {
        nu,
        n_max,
        basis,
        entries,
    })
}

/// Schmidt coefficients with their truncation deficit and entropy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtSpectrum {
    /// |eigenvalues|, descending.
    pub lambdas: Vec<f64>,
    /// `1 − Σ λ²`.
    pub deficit: f64,
    pub entropy: f64,
}

/// Squared coefficients below this are dropped from the entropy sum.
pub const ENTROPY_FLOOR: f64 = 1e-14;

/// `−Σ λ² ln λ²` over λ² ≥ 1e-14, optionally after rescaling Σλ² to one.
pub fn entropy_from_lambdas(lambdas: &[f64], renormalize: bool) -> f64 {
    let total: f64 = lambdas.iter().map(|l| l * l).sum();
    let scale = if renormalize && total > 0.0 { 1.0 / total } else { 1.0 };
    lambdas
        .iter()
        .map(|l| l * l * scale)
        .filter(|&p| p >= ENTROPY_FLOOR)
        .map(|p| -p * p.ln())
        .sum()
}

impl SchmidtSpectrum {
    pub fn from_lambdas(lambdas: Vec<f64>, renormalize: bool) -> Self {
        let total: f64 = lambdas.iter().map(|l| l * l).sum();
        let entropy = entropy_from_lambdas(&lambdas, renormalize);
        Self {
            lambdas,
            deficit: 1.0 - total,
            entropy,
        }
    }
}

/// Full eigendecomposition: signed eigenvalues and orthonormal eigenvectors
/// (columns, in the basis order of the matrix), sorted by descending |λ|.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub basis: Vec<BasisIndex>,
    pub eigenvalues: Vec<f64>,
    pub vectors: DMatrix<f64>,
    pub spectrum: SchmidtSpectrum,
}

fn parity_blocks(basis: &[BasisIndex]) -> [Vec<usize>; 4] {
    let mut blocks: [Vec<usize>; 4] = Default::default();
    for (i, b) in basis.iter().enumerate() {
        blocks[b.parity_class()].push(i);
    }
    blocks
}

fn sub_matrix(full: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| full[(idx[i], idx[j])])
}

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Eigenvalues only, descending in magnitude.
pub fn schmidt_lambdas(c: &CoefficientMatrix) -> Result<Vec<f64>> {
    if c.entries.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenNonConvergence("non-finite matrix entry".into()));
    }
    let mut out = Vec::with_capacity(c.dim());
    for idx in parity_blocks(&c.basis) {
        if idx.is_empty() {
            continue;
        }
        let block = sub_matrix(&c.entries, &idx);
        let eig = SymmetricEigen::try_new(block, EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or_else(|| Error::EigenNonConvergence(format!("block of size {}", idx.len())))?;
        out.extend(eig.eigenvalues.iter().map(|v| v.abs()));
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// ⟨L_z²⟩ of a coefficient vector, computed as ‖(a_x†a_y − a_y†a_x) v‖².
pub fn lz_squared(basis: &[BasisIndex], lookup: &HashMap<BasisIndex, usize>, v: &[f64]) -> f64 {
    let mut out = vec![0.0; basis.len()];
    for (i, b) in basis.iter().enumerate() {
        let c = v[i];
        if c == 0.0 {
            continue;
        }
        if b.my > 0 {
            if let Some(&j) = lookup.get(&BasisIndex::new(b.mx + 1, b.my - 1)) {
                out[j] += ((b.mx + 1) as f64 * b.my as f64).sqrt() * c;
            }
        }
        if b.mx > 0 {
            if let Some(&j) = lookup.get(&BasisIndex::new(b.mx - 1, b.my + 1)) {
                out[j] -= (b.mx as f64 * (b.my + 1) as f64).sqrt() * c;
            }
        }
    }
    out.iter().map(|x| x * x).sum()
}

/// Relative tolerance for treating two |λ| as degenerate.
const TIE_TOL: f64 = 1e-9;

/// Diagonalises `C` per parity block and sorts the modes by descending |λ|;
/// within a degenerate group, by ascending ⟨L_z²⟩ then parity class.
pub fn schmidt_decompose(c: &CoefficientMatrix, renormalize: bool) -> Result<SchmidtDecomposition> {
    if c.entries.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenNonConvergence("non-finite matrix entry".into()));
    }
    let dim = c.dim();
    let lookup: HashMap<BasisIndex, usize> =
        c.basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    // (eigenvalue, class, dense vector)
    let mut modes: Vec<(f64, usize, Vec<f64>)> = Vec::with_capacity(dim);
    for (class, idx) in parity_blocks(&c.basis).into_iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        let block = sub_matrix(&c.entries, &idx);
        let eig = SymmetricEigen::try_new(block, EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or_else(|| Error::EigenNonConvergence(format!("block of size {}", idx.len())))?;
        for k in 0..idx.len() {
            let mut v = vec![0.0; dim];
            for (r, &i) in idx.iter().enumerate() {
                v[i] = eig.eigenvectors[(r, k)];
            }
            modes.push((eig.eigenvalues[k], class, v));
        }
    }
    modes.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()));

    let mut start = 0;
    while start < modes.len() {
        let head = modes[start].0.abs();
        let mut end = start + 1;
        while end < modes.len() && head - modes[end].0.abs() <= TIE_TOL * head.max(1e-300) {
            end += 1;
        }
        if end - start > 1 {
            let group = &mut modes[start..end];
            let mut keyed: Vec<(f64, usize, usize)> = group
                .iter()
                .enumerate()
                .map(|(g, m)| (lz_squared(&c.basis, &lookup, &m.2), m.1, g))
                .collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let reordered: Vec<_> = keyed.iter().map(|k| group[k.2].clone()).collect();
            group.clone_from_slice(&reordered);
        }
        start = end;
    }

    let mut vectors = DMatrix::zeros(dim, dim);
    let mut eigenvalues = Vec::with_capacity(dim);
    for (k, (val, _, mut v)) in modes.into_iter().enumerate() {
        // deterministic sign: largest component positive
        let (imax, _) = v
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, x)| if x.abs() > acc.1 + 1e-12 { (i, x.abs()) } else { acc });
        if v[imax] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        vectors.set_column(k, &DVector::from_vec(v));
        eigenvalues.push(val);
    }
    // degenerate groups may be reordered at the 1e-9 level; keep the
    // reported spectrum strictly sorted
    let mut lambdas: Vec<f64> = eigenvalues.iter().map(|v| v.abs()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(SchmidtDecomposition {
        basis: c.basis.clone(),
        eigenvalues,
        vectors,
        spectrum: SchmidtSpectrum::from_lambdas(lambdas, renormalize),
    })
}

/// Schmidt spectrum of `C` (eigenvalues only).
pub fn schmidt_spectrum(c: &CoefficientMatrix, renormalize: bool) -> Result<SchmidtSpectrum> {
    Ok(SchmidtSpectrum::from_lambdas(schmidt_lambdas(c)?, renormalize))
}

/// Spectrum at a scattering length on a given branch.
pub fn spectrum_of(ln_a: f64, branch: usize, n_max: usize, renormalize: bool) -> Result<SchmidtSpectrum> {
    let nu = nu_of_ln_a(ln_a, branch)?.nu;
    schmidt_spectrum(&coefficient_matrix(nu, n_max)?, renormalize)
}

/// Entanglement entropy (not renormalised) at a scattering length.
pub fn entropy_of(ln_a: f64, branch: usize, n_max: usize) -> Result<f64> {
    Ok(spectrum_of(ln_a, branch, n_max, false)?.entropy)
}

/// A Schmidt orbital sampled on the uniform grid `[−extent, extent]²`,
/// row-major with y as the slow index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitalField {
    pub extent: f64,
    pub n: usize,
    pub values: Vec<f64>,
}

impl OrbitalField {
    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / (self.n - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.extent + self.spacing() * i as f64
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.n + ix]
    }

    /// Cell-weighted discrete L² norm.
    pub fn norm(&self) -> f64 {
        let h = self.spacing();
        (self.values.iter().map(|v| v * v).sum::<f64>() * h * h).sqrt()
    }

    /// Field rotated by +90°: g(x, y) = f(y, −x).
    pub fn rotated_90(&self) -> Self {
        let n = self.n;
        let mut values = vec![0.0; n * n];
        for iy in 0..n {
            for ix in 0..n {
                values[iy * n + ix] = self.at(iy, n - 1 - ix);
            }
        }
        Self {
            extent: self.extent,
            n,
            values,
        }
    }
}

/// Samples orbital `k` of a decomposition.
pub fn schmidt_orbital(d: &SchmidtDecomposition, k: usize, extent: f64, n: usize) -> Result<OrbitalField> {
    let dim = d.basis.len();
    if k >= dim {
        return Err(Error::IndexOutOfRange { index: k, dim });
    }
    if n < 2 || !(extent > 0.0) {
        return Err(crate::error::domain("schmidt_orbital", "need extent > 0 and n ≥ 2"));
    }
    let n_max = d.basis.iter().map(|b| b.quanta()).max().unwrap_or(0);
    let h = 2.0 * extent / (n - 1) as f64;
    let herm: Vec<Vec<f64>> = (0..n)
        .map(|i| hermite_functions(n_max, -extent + h * i as f64))
        .collect();
    let coeffs: Vec<(BasisIndex, f64)> = d
        .basis
        .iter()
        .enumerate()
        .map(|(i, b)| (*b, d.vectors[(i, k)]))
        .filter(|(_, c)| *c != 0.0)
        .collect();
    let mut values = vec![0.0; n * n];
    for iy in 0..n {
        for ix in 0..n {
            values[iy * n + ix] = coeffs
                .iter()
                .map(|(b, c)| c * herm[ix][b.mx] * herm[iy][b.my])
                .sum();
        }
    }
    Ok(OrbitalField { extent, n, values })
}

/// Least-squares power law `λ_n = α n^β` over the first 20 values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub beta: f64,
    /// Coefficient of determination of the log–log regression.
    pub r_squared: f64,
}

pub const FIT_POINTS: usize = 20;

/// Fits `ln λ_n = ln α + β ln n`, n = 1..=20. Rejects spectra dominated by
/// a single coefficient (λ₁² > 0.99), which carry no power law.
pub fn power_law_fit(lambdas: &[f64]) -> Result<PowerLawFit> {
    if lambdas.len() < FIT_POINTS {
        return Err(Error::DegenerateFit(format!(
            "need {FIT_POINTS} values, got {}",
            lambdas.len()
        )));
    }
    let head = &lambdas[..FIT_POINTS];
    if let Some(bad) = head.iter().find(|&&l| !(l > 0.0)) {
        return Err(Error::DegenerateFit(format!("non-positive value {bad}")));
    }
    if head[0] * head[0] > 0.99 {
        return Err(Error::DegenerateFit(format!(
            "product state: leading weight {:.6}",
            head[0] * head[0]
        )));
    }
    let xs: Vec<f64> = (1..=FIT_POINTS).map(|n| (n as f64).ln()).collect();
    let ys: Vec<f64> = head.iter().map(|l| l.ln()).collect();
    let nf = FIT_POINTS as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Ok(PowerLawFit {
        alpha: intercept.exp(),
        beta,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn enumeration_order() {
        assert_eq!(basis_enumerate(0), vec![BasisIndex::new(0, 0)]);
        assert_eq!(
            basis_enumerate(1),
            vec![BasisIndex::new(0, 0), BasisIndex::new(0, 1), BasisIndex::new(1, 0)]
        );
        assert_eq!(basis_enumerate(60).len(), 1891);
    }

    #[test]
    fn closed_form_entries() {
        let nu = -1.3;
        let c = coefficient_matrix(nu, 4).unwrap();
        let s = s2(nu).unwrap();
        assert_relative_eq!(c.entries[(0, 0)], 1.0 / (nu * s.sqrt()), max_relative = 1e-12);
        // (1,0) with (0,0) is parity-forbidden
        assert_eq!(c.entries[(2, 0)], 0.0);
        // (2,0),(0,0): 2/(π√S2)·1/(2ν−2)·(−1)·Γ(3/2)/√2·Γ(1/2)
        let expected = 2.0 / (std::f64::consts::PI * s.sqrt()) / (2.0 * nu - 2.0)
            * (-1.0)
            * (std::f64::consts::PI.sqrt() / 2.0 / 2f64.sqrt())
            * std::f64::consts::PI.sqrt();
        let i20 = c.basis.iter().position(|b| *b == BasisIndex::new(2, 0)).unwrap();
        assert_relative_eq!(c.entries[(i20, 0)], expected, max_relative = 1e-12);
        assert!(coefficient_matrix(1.0, 4).is_err());
    }

    #[test]
    fn symmetry_and_sparsity() {
        let c = coefficient_matrix(0.37, 12).unwrap();
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                assert_eq!(c.entries[(i, j)], c.entries[(j, i)]);
                let (m, n) = (c.basis[i], c.basis[j]);
                let allowed = (m.mx + n.mx) % 2 == 0 && (m.my + n.my) % 2 == 0;
                assert_eq!(c.entries[(i, j)] != 0.0, allowed, "{m:?} {n:?}");
            }
        }
    }

    #[test]
    fn frobenius_norm_grows_to_one() {
        let nu = nu_of_ln_a(-0.5359, 0).unwrap().nu;
        let mut prev = 0.0;
        for n_max in [10, 20, 30] {
            let f = coefficient_matrix(nu, n_max).unwrap().entries.norm_squared();
            assert!(f > prev && f <= 1.0);
            prev = f;
        }
        assert!(prev > 0.9);
    }

    #[test]
    fn diagonal_inputs() {
        let s = SchmidtSpectrum::from_lambdas(vec![1.0, 0.0, 0.0], false);
        assert_eq!(s.entropy, 0.0);
        let h = 0.5f64.sqrt();
        let s = SchmidtSpectrum::from_lambdas(vec![h, h], false);
        assert_relative_eq!(s.entropy, std::f64::consts::LN_2, epsilon = 1e-12);
        assert!((s.lambdas.iter().map(|l| l * l).sum::<f64>() + s.deficit - 1.0).abs() <= 1e-12);
        let r = SchmidtSpectrum::from_lambdas(vec![0.6, 0.6], true);
        assert_relative_eq!(r.entropy, std::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn decomposition_is_orthonormal_and_sorted() {
        let nu = nu_of_ln_a(-0.5359, 0).unwrap().nu;
        let c = coefficient_matrix(nu, 16).unwrap();
        let d = schmidt_decompose(&c, false).unwrap();
        let gram = d.vectors.transpose() * &d.vectors;
        let resid = (gram - DMatrix::identity(c.dim(), c.dim())).abs().max();
        assert!(resid <= 1e-10, "{resid}");
        // C v = λ v
        for k in 0..10 {
            let v = d.vectors.column(k);
            let r = (&c.entries * v - v * d.eigenvalues[k]).norm();
            assert!(r <= 1e-12);
        }
        assert!(d.spectrum.lambdas.windows(2).all(|w| w[0] >= w[1]));
        let eig_only = schmidt_spectrum(&c, false).unwrap();
        for (a, b) in eig_only.lambdas.iter().zip(&d.spectrum.lambdas) {
            assert_relative_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn entropy_ordering_matches_physics() {
        assert!(entropy_of(10.0, 0, 40).unwrap() <= 0.05);
        let e = |x: f64| entropy_of(x, 0, 30).unwrap();
        assert!(e(-2.0) > e(0.0) && e(0.0) > e(2.0));
    }

    #[test]
    fn basis_order_independence() {
        let nu = nu_of_ln_a(0.2, 1).unwrap().nu;
        let c = coefficient_matrix(nu, 10).unwrap();
        let dim = c.dim();
        let perm: Vec<usize> = (0..dim).map(|i| (i * 37 + 11) % dim).collect();
        let permuted = DMatrix::from_fn(dim, dim, |i, j| c.entries[(perm[i], perm[j])]);
        let mut a: Vec<f64> = c.entries.clone().symmetric_eigenvalues().iter().map(|v| v.abs()).collect();
        let mut b: Vec<f64> = permuted.symmetric_eigenvalues().iter().map(|v| v.abs()).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        b.sort_by(|x, y| y.total_cmp(x));
        let ea = entropy_from_lambdas(&a, false);
        let eb = entropy_from_lambdas(&b, false);
        assert!((ea - eb).abs() <= 1e-10);
        let blocked = schmidt_spectrum(&c, false).unwrap().entropy;
        assert!((ea - blocked).abs() <= 1e-10);
    }

    #[test]
    fn lz_diagnostic() {
        let basis = basis_enumerate(2);
        let lookup: HashMap<_, _> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        // φ_(1,0) ± i φ_(0,1) carry L_z = ±1; each real component has ⟨L_z²⟩ = 1
        let mut v = vec![0.0; basis.len()];
        v[lookup[&BasisIndex::new(1, 0)]] = 1.0;
        assert_relative_eq!(lz_squared(&basis, &lookup, &v), 1.0);
        let mut g = vec![0.0; basis.len()];
        g[0] = 1.0;
        assert_eq!(lz_squared(&basis, &lookup, &g), 0.0);
        // (φ_20 + φ_02)/√2 is isotropic: L_z² = 0
        let mut iso = vec![0.0; basis.len()];
        iso[lookup[&BasisIndex::new(2, 0)]] = 0.5f64.sqrt();
        iso[lookup[&BasisIndex::new(0, 2)]] = 0.5f64.sqrt();
        assert!(lz_squared(&basis, &lookup, &iso) < 1e-15);
    }

    #[test]
    fn orbital_bounds_and_weak_coupling() {
        let nu = nu_of_ln_a(10.0, 0).unwrap().nu;
        let d = schmidt_decompose(&coefficient_matrix(nu, 20).unwrap(), false).unwrap();
        assert!(matches!(
            schmidt_orbital(&d, d.basis.len(), 4.0, 11),
            Err(Error::IndexOutOfRange { .. })
        ));
        let f = schmidt_orbital(&d, 0, 5.0, 101).unwrap();
        assert!((f.norm() - 1.0).abs() <= 2e-2);
        let mut worst = 0.0f64;
        for iy in 0..f.n {
            for ix in 0..f.n {
                let (x, y) = (f.coord(ix), f.coord(iy));
                let g = (-(x * x + y * y) / 2.0).exp() / std::f64::consts::PI.sqrt();
                worst = worst.max((f.at(ix, iy) - g).abs());
            }
        }
        assert!(worst <= 2e-2, "{worst}");
    }

    #[test]
    fn fit_recovers_generator() {
        let l: Vec<f64> = (1..=25).map(|n| 0.7 * (n as f64).powf(-0.9)).collect();
        let fit = power_law_fit(&l).unwrap();
        assert_relative_eq!(fit.alpha, 0.7, epsilon = 1e-12);
        assert_relative_eq!(fit.beta, -0.9, epsilon = 1e-12);
        assert!(power_law_fit(&l[..10]).is_err());
        let mut bad = l.clone();
        bad[5] = 0.0;
        assert!(power_law_fit(&bad).is_err());
    }

    #[test]
    fn fit_rejects_product_state() {
        let s = spectrum_of(10.0, 0, 20, false).unwrap();
        assert!(matches!(power_law_fit(&s.lambdas), Err(Error::DegenerateFit(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn normalisation_identity(ln_a in -2.0f64..2.0, branch in 0usize..3, n_max in 4usize..16) {
            let s = spectrum_of(ln_a, branch, n_max, false).unwrap();
            let total: f64 = s.lambdas.iter().map(|l| l * l).sum();
            prop_assert!((total + s.deficit - 1.0).abs() <= 1e-12);
            prop_assert!(s.deficit >= -1e-12);
        }
    }
}
