//! Gauss–Legendre rules and deterministic summation.

use std::sync::OnceLock;

use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Points per panel of the composite rule used for boundary integrals.
pub const PANEL_ORDER: usize = 6;

/// Cached `PANEL_ORDER`-point rule mapped to `[0, 1]`.
pub fn unit_panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = gauss_legendre(PANEL_ORDER);
        (
            x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
            w.iter().map(|v| 0.5 * v).collect(),
        )
    })
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]` with `panels`
/// equal panels.
pub fn composite<T: Real>(a: T, b: T, panels: usize, mut f: impl FnMut(T) -> T) -> T {
    let (x, w) = unit_panel_rule();
    let h = (b - a) / T::lit(panels as f64);
    let mut partial = Vec::with_capacity(panels);
    for k in 0..panels {
        let left = a + h * T::lit(k as f64);
        let mut s = T::zero();
        for (xi, wi) in x.iter().zip(w) {
            s += T::lit(*wi) * f(left + h * T::lit(*xi));
        }
        partial.push(s * h);
    }
    pairwise_sum(&partial)
}

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// slice length, so results are reproducible bit for bit.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in 1..=10 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn composite_sine() {
        let v = composite(0.0, std::f64::consts::PI, 8, f64::sin);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }
}
