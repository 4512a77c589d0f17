//! Bessel functions of the first kind, orders 0 and 1, for real arguments.
//!
//! Three regimes: the power series for `|x| <= 8`, Miller's backward
//! recurrence normalized by `J0 + 2 Σ J_2k = 1` up to `|x| < 25`, and the
//! Hankel asymptotic expansion beyond.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_MAX: f64 = 8.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

/// `(J0(x), J1(x))`.
pub fn j0_j1(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (j0, j1) = if ax <= SERIES_MAX {
        (series(ax, 0), series(ax, 1))
    } else if ax < ASYMPTOTIC_MIN {
        backward_recurrence(ax)
    } else {
        hankel(ax)
    };
    (j0, if x < 0.0 { -j1 } else { j1 })
}

pub fn j0(x: f64) -> f64 {
    j0_j1(x).0
}

pub fn j1(x: f64) -> f64 {
    j0_j1(x).1
}

fn series(x: f64, order: u32) -> f64 {
    let h = 0.5 * x;
    let q = -h * h;
    let mut term = if order == 0 { 1.0 } else { h };
    let mut sum = term;
    let mut k = 1.0;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) || k < 3.0 {
        term *= q / (k * (k + order as f64));
        sum += term;
        k += 1.0;
        if k > 200.0 {
            break;
        }
    }
    sum
}

fn backward_recurrence(x: f64) -> (f64, f64) {
    let start = (x + 30.0 + 6.0 * x.sqrt()) as usize;
    let start = start + start % 2;
    let (mut next, mut cur) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    let mut j1 = 0.0;
    let mut n = start;
    while n > 0 {
        // J_{n-1} = (2n/x) J_n - J_{n+1}
        let prev = 2.0 * n as f64 / x * cur - next;
        next = cur;
        cur = prev;
        n -= 1;
        if n.is_multiple_of(2) && n > 0 {
            norm += 2.0 * cur;
        }
        if n == 1 {
            j1 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    let total = norm + cur;
    (cur / total, j1 / total)
}

/// `a_k(nu) = Π_{i=1..k} (4nu² - (2i-1)²) / (k! 8^k)`.
fn hankel(x: f64) -> (f64, f64) {
    let pq = |nu2x4: f64| {
        let (mut p, mut q) = (0.0, 0.0);
        let mut a = 1.0;
        let mut prev = f64::INFINITY;
        for k in 0..60 {
            let t = a / x.powi(k);
            if t.abs() > prev || t.abs() < 1e-17 {
                break;
            }
            prev = t.abs();
            match k % 4 {
                0 => p += t,
                1 => q += t,
                2 => p -= t,
                _ => q -= t,
            }
            let odd = (2 * k + 1) as f64;
            a *= (nu2x4 - odd * odd) / ((k + 1) as f64 * 8.0);
        }
        (p, q)
    };
    let (s, c) = x.sin_cos();
    // cos(x - π/4), sin(x - π/4) without forming x - π/4
    let cos0 = (c + s) * FRAC_1_SQRT_2;
    let sin0 = (s - c) * FRAC_1_SQRT_2;
    // χ1 = χ0 - π/2
    let (cos1, sin1) = (sin0, -cos0);
    let amp = (2.0 / (PI * x)).sqrt();
    let (p0, q0) = pq(0.0);
    let (p1, q1) = pq(4.0);
    (amp * (p0 * cos0 - q0 * sin0), amp * (p1 * cos1 - q1 * sin1))
}
