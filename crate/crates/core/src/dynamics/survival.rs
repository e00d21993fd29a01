//! `R(x_L)`: total time with `x(t) < x_L`, resolved inside steps through the
//! cubic dense output.

use num_complex::Complex64;

use crate::integrator::Trajectory;

/// `R(x_L)` for the relative position `Re z` of the first component.
pub fn survival_function(traj: &Trajectory, levels: &[f64]) -> Vec<f64> {
    survival_function_of(traj, levels, |y| y[0].re)
}

/// `R(x_L)` for an arbitrary real scalar `pick(y)` that is linear in `y`.
pub fn survival_function_of(
    traj: &Trajectory,
    levels: &[f64],
    pick: impl Fn(&[Complex64]) -> f64,
) -> Vec<f64> {
    let cubics: Vec<([f64; 4], f64)> = (0..traj.len().saturating_sub(1))
        .map(|k| {
            (
                traj.segment_cubic(k, &pick),
                traj.times[k + 1] - traj.times[k],
            )
        })
        .collect();
    levels
        .iter()
        .map(|&level| cubics.iter().map(|(c, h)| time_below(c, *h, level)).sum())
        .collect()
}

fn eval(c: &[f64; 4], s: f64) -> f64 {
    c[0] + s * (c[1] + s * (c[2] + s * c[3]))
}

/// Measure of `{s ∈ [0, h] : c(s) < level}`.
fn time_below(c: &[f64; 4], h: f64, level: f64) -> f64 {
    if level == f64::INFINITY {
        return h;
    }
    if level == f64::NEG_INFINITY {
        return 0.0;
    }
    let d = [c[0] - level, c[1], c[2], c[3]];
    // Split at the critical points so each piece is monotone.
    let mut breaks = vec![0.0];
    breaks.extend(critical_points(&d, h));
    breaks.push(h);
    let mut cuts = vec![0.0];
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval(&d, a), eval(&d, b));
        if (fa < 0.0) != (fb < 0.0) {
            cuts.push(bisect(&d, a, b, fa));
        }
    }
    cuts.push(h);
    cuts.windows(2)
        .filter(|w| w[1] > w[0] && eval(&d, 0.5 * (w[0] + w[1])) < 0.0)
        .map(|w| w[1] - w[0])
        .sum()
}

fn critical_points(d: &[f64; 4], h: f64) -> Vec<f64> {
    // c'(s) = d1 + 2 d2 s + 3 d3 s²
    let (a, b, c) = (3.0 * d[3], 2.0 * d[2], d[1]);
    let mut roots = Vec::with_capacity(2);
    if a.abs() <= 1e-300 {
        if b != 0.0 {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            if q != 0.0 {
                roots.push(q / a);
                roots.push(c / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    let mut inside: Vec<f64> = roots.into_iter().filter(|&s| s > 0.0 && s < h).collect();
    inside.sort_by(f64::total_cmp);
    inside
}

fn bisect(d: &[f64; 4], mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let below = f_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (eval(d, mid) < 0.0) == below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
