//! Gauss–Legendre rules mapped onto composite and geometrically graded panels.

use std::num::NonZeroUsize;

use gauss_quad::{GaussHermite, GaussLegendre};

/// Node/weight pairs on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).expect("nonzero");
    let rule = GaussLegendre::new(n);
    let mut out: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Physicists' Gauss–Hermite rule, weight e^{−x²}.
pub fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).expect("nonzero");
    let rule = GaussHermite::new(n);
    let mut out: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Applies a reference rule on every panel between consecutive breakpoints.
pub fn composite(reference: &[(f64, f64)], breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(reference.len() * breaks.len().saturating_sub(1));
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        out.extend(reference.iter().map(|&(x, w)| (mid + half * x, half * w)));
    }
    out
}

/// Breakpoints on [a, b] refined geometrically towards `a`: `levels`
/// panels shrinking by `ratio`, followed by `uniform` equal panels.
pub fn graded_breaks(a: f64, b: f64, levels: usize, ratio: f64, uniform: usize) -> Vec<f64> {
    let len = b - a;
    let mut out = vec![a];
    for k in (1..=levels).rev() {
        out.push(a + len * ratio.powi(k as i32));
    }
    let first = *out.last().expect("nonempty");
    let uniform = uniform.max(1);
    let h = (b - first) / uniform as f64;
    for i in 1..uniform {
        out.push(first + h * i as f64);
    }
    out.push(b);
    out
}

/// Equal panels on [a, b].
pub fn uniform_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    (0..=panels)
        .map(|i| if i == panels { b } else { a + h * i as f64 })
        .collect()
}

/// Radial rule on [0, cut] graded towards the origin, suited to integrands
/// with a logarithmic singularity at ρ = 0.
pub fn radial_rule(cut: f64, per_panel: usize, panels: usize) -> Vec<(f64, f64)> {
    let reference = gauss_legendre(per_panel);
    composite(&reference, &graded_breaks(0.0, cut, 12, 0.3, panels))
}
