//! Projection of the blended gradient onto the cone
//! `{ g : gᵀ∇V̄ ≥ 0, gᵀ∇V ≥ 0 }`.

use serde::{Deserialize, Serialize};

use crate::state::{dot, norm_sq};

/// Which branch of the closed form produced `ḡ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GBarCase {
    /// `ĝ` already satisfies both constraints.
    Unconstrained,
    /// `ĝ` projected onto the hyperplane orthogonal to `∇V̄`.
    ProjectVbar,
    /// `ĝ` projected onto the hyperplane orthogonal to `∇V`.
    ProjectVud,
    /// Both inner products negative by rounding only; `ḡ = 0`.
    Zero,
}

/// `ĝ = (λ ∇V̄ + η ∇V) / 2`.
pub fn g_hat(grad_vbar: &[f64], grad_vud: &[f64], lambda: f64, eta: f64) -> Vec<f64> {
    grad_vbar.iter().zip(grad_vud).map(|(a, b)| (lambda * a + eta * b) / 2.0).collect()
}

fn project_out(g: &[f64], normal: &[f64], coeff: f64) -> Vec<f64> {
    let nn = norm_sq(normal);
    assert!(nn > 1e-300, "projection normal vanishes while its constraint is violated");
    g.iter().zip(normal).map(|(gk, nk)| gk - coeff / nn * nk).collect()
}

/// Closed-form `ḡ` with its branch tag.
///
/// With positive gains the two constraints cannot both be violated
/// (Cauchy–Schwarz); if rounding makes them both slightly negative the result
/// is the zero vector, and a genuine violation panics.
pub fn g_bar_closed_form(grad_vbar: &[f64], grad_vud: &[f64], lambda: f64, eta: f64) -> (Vec<f64>, GBarCase) {
    let g = g_hat(grad_vbar, grad_vud, lambda, eta);
    let on_bar = dot(&g, grad_vbar);
    let on_ud = dot(&g, grad_vud);
    match (on_bar >= 0.0, on_ud >= 0.0) {
        (true, true) => (g, GBarCase::Unconstrained),
        (false, true) => (project_out(&g, grad_vbar, on_bar), GBarCase::ProjectVbar),
        (true, false) => (project_out(&g, grad_vud, on_ud), GBarCase::ProjectVud),
        (false, false) => {
            let scale = norm_sq(&g).sqrt() * (norm_sq(grad_vbar).sqrt() + norm_sq(grad_vud).sqrt());
            assert!(
                on_bar.abs().max(on_ud.abs()) <= 1e-9 * scale.max(f64::MIN_POSITIVE),
                "both projection constraints violated: ĝ·∇V̄ = {on_bar:e}, ĝ·∇V = {on_ud:e}"
            );
            (vec![0.0; g.len()], GBarCase::Zero)
        }
    }
}

/// Numerical solution of `min ‖g − ĝ‖²  s.t. gᵀa ≥ 0, gᵀb ≥ 0` by
/// enumerating active sets `∅, {a}, {b}, {a, b}` and keeping the closest
/// feasible candidate. Independent of the closed form; used as an oracle.
pub fn g_bar_qp_oracle(grad_vbar: &[f64], grad_vud: &[f64], lambda: f64, eta: f64) -> Vec<f64> {
    let target = g_hat(grad_vbar, grad_vud, lambda, eta);
    let a = grad_vbar;
    let b = grad_vud;
    let d = target.len();
    let scale = 1.0 + norm_sq(&target).sqrt();
    let feasible = |g: &[f64]| {
        let tol = 1e-12 * scale * (1.0 + norm_sq(a).sqrt().max(norm_sq(b).sqrt()));
        dot(g, a) >= -tol && dot(g, b) >= -tol
    };

    let mut candidates: Vec<Vec<f64>> = vec![target.clone(), vec![0.0; d]];
    // single active constraint: projection onto the hyperplane through 0
    for n in [a, b] {
        let nn = norm_sq(n);
        if nn > 0.0 {
            let c = dot(&target, n) / nn;
            candidates.push(target.iter().zip(n).map(|(t, nk)| t - c * nk).collect());
        }
    }
    // both active: remove the component in span{a, b} (2×2 normal equations)
    let (aa, ab, bb) = (norm_sq(a), dot(a, b), norm_sq(b));
    let det = aa * bb - ab * ab;
    if det > 1e-14 * aa * bb && det > 0.0 {
        let (ta, tb) = (dot(&target, a), dot(&target, b));
        let ca = (bb * ta - ab * tb) / det;
        let cb = (aa * tb - ab * ta) / det;
        candidates.push((0..d).map(|k| target[k] - ca * a[k] - cb * b[k]).collect());
    }

    candidates
        .into_iter()
        .filter(|g| feasible(g))
        .min_by(|g, h| {
            let dg: f64 = g.iter().zip(&target).map(|(x, y)| (x - y) * (x - y)).sum();
            let dh: f64 = h.iter().zip(&target).map(|(x, y)| (x - y) * (x - y)).sum();
            dg.total_cmp(&dh)
        })
        .expect("the origin is always feasible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradients() {
        let (g, case) = g_bar_closed_form(&[0.0, 0.0], &[0.0, 0.0], 1.0, 1.0);
        assert_eq!(g, vec![0.0, 0.0]);
        assert_eq!(case, GBarCase::Unconstrained);
    }

    #[test]
    fn g_hat_hand_value() {
        assert_eq!(g_hat(&[2.0, 0.0], &[0.0, 2.0], 1.0, 1.0), vec![1.0, 1.0]);
        let dominated = g_hat(&[1.0, 0.0], &[0.0, 1.0], 2.0, 0.01);
        assert!(dominated[1] / dominated[0] < 0.01);
    }

    #[test]
    fn orthogonal_gradients_stay_unconstrained() {
        let (g, case) = g_bar_closed_form(&[1.0, 0.0], &[0.0, 1.0], 1.0, 1.0);
        assert_eq!(g, vec![0.5, 0.5]);
        assert_eq!(case, GBarCase::Unconstrained);
        let qp = g_bar_qp_oracle(&[1.0, 0.0], &[0.0, 1.0], 1.0, 1.0);
        assert!((qp[0] - 0.5).abs() < 1e-10 && (qp[1] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn opposing_gradients_project_out_vbar() {
        let (a, b) = ([1.0, 0.0], [-1.0, 0.1]);
        let ghat = g_hat(&a, &b, 0.1, 1.0);
        assert!((ghat[0] + 0.45).abs() < 1e-15 && (ghat[1] - 0.05).abs() < 1e-15);
        let (g, case) = g_bar_closed_form(&a, &b, 0.1, 1.0);
        assert_eq!(case, GBarCase::ProjectVbar);
        assert!(g[0].abs() < 1e-15 && (g[1] - 0.05).abs() < 1e-15);
        let qp = g_bar_qp_oracle(&a, &b, 0.1, 1.0);
        assert!((qp[0] - g[0]).abs() < 1e-10 && (qp[1] - g[1]).abs() < 1e-10);
    }

    #[test]
    fn mirrored_case_projects_out_vud() {
        let (a, b) = ([-1.0, 0.1], [1.0, 0.0]);
        let (g, case) = g_bar_closed_form(&a, &b, 1.0, 0.1);
        assert_eq!(case, GBarCase::ProjectVud);
        assert!(g[0].abs() < 1e-15 && (g[1] - 0.05).abs() < 1e-15);
    }

    #[test]
    fn antiparallel_balanced_gradients_cancel() {
        let (g, case) = g_bar_closed_form(&[1.0, -2.0], &[-1.0, 2.0], 1.0, 1.0);
        assert_eq!(g, vec![0.0, 0.0]);
        assert_eq!(case, GBarCase::Unconstrained);
    }
}
