//! Panel-adaptive Gauss–Legendre quadrature.

use std::sync::OnceLock;

use crate::error::{HubbardError, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
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

struct Rules {
    coarse: (Vec<f64>, Vec<f64>),
    fine: (Vec<f64>, Vec<f64>),
}

fn rules() -> &'static Rules {
    static RULES: OnceLock<Rules> = OnceLock::new();
    RULES.get_or_init(|| Rules {
        coarse: gauss_legendre(10),
        fine: gauss_legendre(20),
    })
}

fn apply_rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Integral and accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const MAX_DEPTH: u32 = 40;

/// Integrate `f` over `[a, b]` split into panels of width at most `panel`,
/// bisecting any panel whose 10- and 20-point Gauss–Legendre values differ by
/// more than its share of `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panel: f64, abs_tol: f64) -> Result<Estimate> {
    if b <= a {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let count = ((b - a) / panel).ceil().max(1.0) as usize;
    let width = (b - a) / count as f64;
    let per_unit = abs_tol / (b - a);
    let mut total = Estimate { value: 0.0, error: 0.0 };
    let mut failed = false;
    for i in 0..count {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == count { b } else { lo + width };
        failed |= !adapt(f, lo, hi, per_unit, 0, &mut total);
    }
    if failed || total.error > abs_tol {
        return Err(HubbardError::Quadrature {
            value: total.value,
            estimate: total.error,
            requested: abs_tol,
        });
    }
    Ok(total)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, per_unit: f64, depth: u32, acc: &mut Estimate) -> bool {
    let r = rules();
    let fine = apply_rule(f, a, b, &r.fine);
    let coarse = apply_rule(f, a, b, &r.coarse);
    let err = (fine - coarse).abs();
    // error floor from summation roundoff
    let floor = 64.0 * f64::EPSILON * fine.abs();
    if err <= per_unit * (b - a) || err <= floor {
        acc.value += fine;
        acc.error += err.min(per_unit * (b - a));
        return true;
    }
    if depth >= MAX_DEPTH {
        acc.value += fine;
        acc.error += err;
        return false;
    }
    let mid = 0.5 * (a + b);
    let left = adapt(f, a, mid, per_unit, depth + 1, acc);
    let right = adapt(f, mid, b, per_unit, depth + 1, acc);
    left && right
}
