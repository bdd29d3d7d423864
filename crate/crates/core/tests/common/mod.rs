//! Reference computations written independently of the library.
#![allow(dead_code)]

use edwsax::density::{DensityModel, Kernel};

/// Five-point Gauss-Legendre rule on `[a, b]`; exact for polynomials up to
/// degree nine.
pub fn gauss5(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    X.iter().zip(W).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// One adaptive Simpson step; each point is `(x, f(x))`.
fn simpson_rec(
    f: &impl Fn(f64) -> f64,
    lo: (f64, f64),
    mid: (f64, f64),
    hi: (f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (a, fa) = lo;
    let (m, fm) = mid;
    let (b, fb) = hi;
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, lo, (lm, flm), mid, left, tol / 2.0, depth - 1)
            + simpson_rec(f, mid, (rm, frm), hi, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`, with the interval first
/// split at `knots` (points where `f` or a derivative jumps).
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, knots: &[f64], tol: f64) -> f64 {
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(knots.iter().copied().filter(|k| *k > a && *k < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let m = 0.5 * (lo + hi);
            let (fa, fm, fb) = (f(lo), f(m), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson_rec(&f, (lo, fa), (m, fm), (hi, fb), whole, tol / cuts.len() as f64, 50)
        })
        .sum()
}

/// Points where a kernel (or its derivative) is non-smooth.
pub fn kernel_knots(kernel: Kernel) -> Vec<f64> {
    match kernel.support_radius() {
        Some(r) => vec![-r, 0.0, r],
        None => vec![0.0],
    }
}

/// Cumulative probability mass of a fitted density at each query point, by
/// Gauss-Legendre integration of its pdf over pieces on which the pdf is
/// smooth (polynomial for the bounded polynomial kernels).
pub fn density_masses(density: &DensityModel, queries: &[f64]) -> Vec<f64> {
    let (lo, hi) = density.support();
    let h = density.bandwidth();
    let mut cuts: Vec<f64> = match density.kernel().support_radius() {
        Some(r) => density
            .samples()
            .iter()
            .flat_map(|&s| [s - r * h, s, s + r * h])
            .collect(),
        None => {
            // Laplace, like the triangular kernel, has a cusp at each sample.
            let pieces = ((hi - lo) / (0.25 * h)).ceil() as usize;
            (0..=pieces)
                .map(|i| lo + (hi - lo) * i as f64 / pieces as f64)
                .chain(density.samples().iter().copied())
                .collect()
        }
    };
    cuts.extend_from_slice(queries);
    cuts.push(lo);
    cuts.push(hi);
    cuts.retain(|c| *c >= lo && *c <= hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let pdf = |y: f64| density.pdf(y);
    let mut cumulative = Vec::with_capacity(cuts.len());
    let mut acc = 0.0;
    cumulative.push((cuts[0], 0.0));
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        // Long pieces of a smooth pdf get subdivided for accuracy.
        let parts = ((b - a) / (0.25 * h)).ceil().max(1.0) as usize;
        for k in 0..parts {
            let x0 = a + (b - a) * k as f64 / parts as f64;
            let x1 = a + (b - a) * (k + 1) as f64 / parts as f64;
            acc += gauss5(&pdf, x0, x1);
        }
        cumulative.push((b, acc));
    }
    queries
        .iter()
        .map(|q| {
            if *q <= lo {
                0.0
            } else if *q >= hi {
                acc
            } else {
                cumulative[cumulative.partition_point(|(x, _)| x < q)].1
            }
        })
        .collect()
}

/// Standard normal cdf by quadrature of the density from zero.
pub fn normal_cdf(x: f64) -> f64 {
    let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    0.5 + integrate(phi, 0.0, x.abs(), &[], 1e-14) * x.signum()
}

/// Standard normal quantile by bisection on [`normal_cdf`].
pub fn normal_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0, 10.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided signed-rank p-value by enumerating every sign assignment of the
/// ranks of the non-zero differences.
pub fn wilcoxon_enumeration(x: &[f64], y: &[f64]) -> f64 {
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|v| *v != 0.0).collect();
    let n = d.len();
    // Twice the average rank: 2 * (#smaller) + (#equal) + 1.
    let rank2: Vec<u64> = d
        .iter()
        .map(|v| {
            let smaller = d.iter().filter(|u| u.abs() < v.abs()).count() as u64;
            let equal = d.iter().filter(|u| u.abs() == v.abs()).count() as u64;
            2 * smaller + equal + 1
        })
        .collect();
    let observed: u64 = d.iter().zip(&rank2).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let (mut le, mut ge) = (0u64, 0u64);
    for mask in 0u64..(1 << n) {
        let w: u64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| rank2[i]).sum();
        if w <= observed {
            le += 1;
        }
        if w >= observed {
            ge += 1;
        }
    }
    let total = (1u64 << n) as f64;
    (2.0 * le.min(ge) as f64 / total).min(1.0)
}
