//! Gauss-Legendre rules and an integrator for ∫₀¹ z^p (1−z)^q h(z) dz with
//! p, q > −1 and smooth h.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of the n-point Gauss-Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const ORDER: usize = 24;

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Fixed-order Gauss-Legendre on [a, b].
pub fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * x.iter().zip(w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>()
}

/// Bisect [a, b] until a panel and its two halves agree within `tol`, or
/// within rounding noise of the halves.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn go<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (panel(f, a, m), panel(f, m, b));
        let noise = 64.0 * f64::EPSILON * (l.abs() + r.abs());
        if depth == 0 || !(l + r).is_finite() || (l + r - whole).abs() <= tol.max(noise) {
            return l + r;
        }
        go(f, a, m, l, tol, depth - 1) + go(f, m, b, r, tol, depth - 1)
    }
    go(f, a, b, panel(f, a, b), tol, 24)
}

/// Composite rule on [0, t] with panels shrinking geometrically towards 0,
/// for integrands that are bounded but not smooth at the origin.
pub fn graded<F: Fn(f64) -> f64>(f: &F, t: f64) -> f64 {
    const RATIO: f64 = 0.2;
    const LEVELS: usize = 26;
    let mut edges = vec![t];
    for _ in 0..LEVELS {
        edges.push(edges.last().unwrap() * RATIO);
    }
    edges.push(0.0);
    let coarse: f64 = edges.windows(2).map(|e| panel(f, e[1], e[0])).sum();
    let tol = 1e-15 * coarse.abs().max(f64::MIN_POSITIVE);
    edges.windows(2).map(|e| adaptive(f, e[1], e[0], tol)).sum()
}

/// ∫₀^y y^q h(y) dy for q > −1.
pub fn power_weighted<H: Fn(f64) -> f64>(q: f64, h: H, upper: f64) -> f64 {
    beta_weighted(q, 0.0, 0.0, h, upper)
}

/// ∫₀^y e^{−shift} y^p (1−y)^q h(y) dy for p > −1, y < 1. The weight is
/// formed in logarithms so that a shift near its peak keeps large powers in
/// range. Below p = 1 the substitution y = s^{1/(p+1)} absorbs the endpoint
/// power; larger powers are integrated directly, since the substitution would
/// squeeze most of [0, y] into a vanishing sliver near s = 0.
pub fn beta_weighted<H: Fn(f64) -> f64>(p: f64, q: f64, shift: f64, h: H, upper: f64) -> f64 {
    assert!(p > -1.0, "exponent must exceed -1");
    let rest = |y: f64| if q == 0.0 { -shift } else { q * (-y).ln_1p() - shift };
    if p >= 1.0 {
        return graded(&|y: f64| if y > 0.0 { (p * y.ln() + rest(y)).exp() * h(y) } else { 0.0 }, upper);
    }
    let ip = 1.0 / (p + 1.0);
    ip * graded(
        &|s: f64| {
            let y = s.powf(ip);
            rest(y).exp() * h(y)
        },
        upper.powf(p + 1.0),
    )
}

/// ∫₀¹ z^p (1−z)^q h(z) dz for p, q > −1, split at ½ so that each endpoint
/// power is absorbed separately.
pub fn endpoint_weighted<H: Fn(f64) -> f64>(p: f64, q: f64, h: H) -> f64 {
    endpoint_weighted_scaled(p, q, 0.0, h)
}

/// e^{−shift} ∫₀¹ z^p (1−z)^q h(z) dz.
pub fn endpoint_weighted_scaled<H: Fn(f64) -> f64>(p: f64, q: f64, shift: f64, h: H) -> f64 {
    beta_weighted(p, q, shift, &h, 0.5) + beta_weighted(q, p, shift, |y| h(1.0 - y), 0.5)
}

/// ln max z^p (1−z)^q over (0, 1) for p, q ≥ 0.
pub fn log_peak(p: f64, q: f64) -> f64 {
    if p <= 0.0 || q <= 0.0 {
        return 0.0;
    }
    let z = p / (p + q);
    p * z.ln() + q * (1.0 - z).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::beta::ln_beta;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((i - 2.0 / 19.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[1] > p[0]));
        let (x1, w1) = gauss_legendre(1);
        assert_eq!((x1[0], w1[0]), (0.0, 2.0));
    }

    #[test]
    fn beta_integrals() {
        for (p, q) in [(6.8, -0.43), (0.5, 0.5), (-0.9, -0.9926), (2.0, 3.0), (-0.5, 12.0), (155.5, 155.4), (1.0, 0.999)] {
            let got = endpoint_weighted(p, q, |_| 1.0);
            let want = ln_beta(p + 1.0, q + 1.0).exp();
            assert!((got / want - 1.0).abs() < 1e-12, "({p},{q}): {got} vs {want}");
        }
    }

    #[test]
    fn weighted_polynomial() {
        // ∫ z^p (1−z)^q (1 − 2z) = B(p+1,q+1) − 2B(p+2,q+1)
        let (p, q) = (1.3, -0.7);
        let b = |x: f64, y: f64| ln_beta(x, y).exp();
        let want = b(p + 1.0, q + 1.0) - 2.0 * b(p + 2.0, q + 1.0);
        let got = endpoint_weighted(p, q, |z| 1.0 - 2.0 * z);
        assert!((got - want).abs() < 1e-12 * b(p + 1.0, q + 1.0));
    }

    #[test]
    fn shifted_weight_survives_underflow() {
        // z^595 (1−z)^595 peaks near 1e-358, below the smallest double
        let (p, q) = (595.5, 595.4);
        let shift = log_peak(p, q);
        let got = endpoint_weighted_scaled(p, q, shift, |_| 1.0).ln() + shift;
        let want = ln_beta(p + 1.0, q + 1.0);
        assert!(want < -800.0);
        assert!((got - want).abs() < 1e-12);
    }
}
