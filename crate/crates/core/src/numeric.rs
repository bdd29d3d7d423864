//! Small numerical building blocks shared by the density and symbolizer
//! modules: standard normal functions, bracketed root finding and adaptive
//! quadrature.

use std::f64::consts::SQRT_2;

use statrs::function::erf::{erfc, erfc_inv};

/// 1/sqrt(2*pi)
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal CDF, computed through `erfc` so both tails keep full
/// relative precision.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal quantile function, polished with one Newton step against
/// [`normal_cdf`].
///
/// Returns `-inf` / `+inf` at `p = 0` / `p = 1`. Panics on `p` outside `[0, 1]`.
pub fn normal_quantile(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
    if p == 0.0 || p == 1.0 || p == 0.5 {
        return -SQRT_2 * erfc_inv(2.0 * p);
    }
    let x = -SQRT_2 * erfc_inv(2.0 * p);
    let density = normal_pdf(x);
    if density > 0.0 {
        x - (normal_cdf(x) - p) / density
    } else {
        x
    }
}

/// Outcome of a bracketed root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Bisection for `f(x) = 0` on `[lo, hi]`, assuming `f(lo) <= 0 <= f(hi)`
/// and `f` non-decreasing.
///
/// Stops as soon as `|f(mid)| <= f_tol`, or when the bracket can no longer be
/// split in floating point, or after `max_iter` halvings.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, f_tol: f64, max_iter: usize) -> Root
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo <= hi);
    let mut mid = 0.5 * (lo + hi);
    for it in 0..max_iter {
        mid = 0.5 * (lo + hi);
        let value = f(mid);
        if value.abs() <= f_tol {
            return Root {
                x: mid,
                iterations: it + 1,
                converged: true,
            };
        }
        if value < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if !(lo < mid || mid < hi) || hi - lo <= f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
            return Root {
                x: 0.5 * (lo + hi),
                iterations: it + 1,
                converged: true,
            };
        }
    }
    Root {
        x: mid,
        iterations: max_iter,
        converged: false,
    }
}

/// Brent's method for a sign-changing bracket `[a, b]`.
///
/// Converges when the bracket shrinks below `rel_tol * |x|` (plus a tiny
/// absolute floor). Returns `None` if `f(a)` and `f(b)` have the same sign.
pub fn brent<F>(mut f: F, a: f64, b: f64, rel_tol: f64, max_iter: usize) -> Option<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(Root {
            x: a,
            iterations: 0,
            converged: true,
        });
    }
    if fb == 0.0 {
        return Some(Root {
            x: b,
            iterations: 0,
            converged: true,
        });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for it in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs() + 1e-300;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some(Root {
                x: b,
                iterations: it,
                converged: true,
            });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Some(Root {
        x: b,
        iterations: max_iter,
        converged: false,
    })
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Fixed 5-point Gauss-Legendre rule on `[a, b]`; exact for polynomials up to
/// degree 9.
pub fn gauss_legendre5<F>(f: &F, a: f64, b: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    NODES
        .iter()
        .zip(WEIGHTS.iter())
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516;
