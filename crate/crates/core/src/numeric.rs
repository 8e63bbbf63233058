//! Shared numeric machinery: falling factorials, Richardson extrapolation on
//! geometric meshes, log-log slope fitting, and a classical RK4 stepper.

use crate::coefficient::{Coefficient, FieldTag};
use num::{BigInt, BigRational, One, ToPrimitive};

/// `start (start-1) ... (start-count+1)` as an exact integer; `1` for `count = 0`.
pub fn falling_big(start: i64, count: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..count {
        acc *= BigInt::from(start - i as i64);
    }
    acc
}

pub fn falling_f64(start: f64, count: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..count {
        acc *= start - i as f64;
    }
    acc
}

/// Falling factorial as a coefficient in the requested field.
pub fn falling_in(tag: FieldTag, start: i64, count: usize) -> Coefficient {
    match tag {
        FieldTag::Exact => {
            Coefficient::Exact(BigRational::from_integer(falling_big(start, count)))
        }
        FieldTag::Float => Coefficient::Float(
            falling_big(start, count).to_f64().unwrap_or(f64::NAN),
        ),
    }
}

/// Result of a limit extrapolation: the chosen value and a local error
/// estimate (disagreement with the neighbouring table entries).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    pub err: f64,
}

/// Richardson extrapolation for a sequence `s_i -> L` whose error expands in
/// powers of a known geometric factor: `s_i = L + sum_r c_r q^{r i}` with
/// `0 < q < 1`, samples ordered from coarse (`i = 0`) to fine.
///
/// Builds the elimination table and returns the entry with the smallest
/// within-column convergence estimate (an entry's disagreement with its
/// predecessor in the same column; the column head is judged against its
/// diagonal parent). Deep samples contaminated by floating-point
/// cancellation stop converging within their column and are thereby ignored
/// automatically.
pub fn richardson_geometric(
    samples: &[f64],
    q: f64,
    max_levels: usize,
) -> Option<Extrapolation> {
    if samples.is_empty() || !(0.0..1.0).contains(&q) {
        return None;
    }
    if samples.len() == 1 {
        return Some(Extrapolation {
            value: samples[0],
            err: f64::INFINITY,
        });
    }
    let levels = max_levels.min(samples.len() - 1);
    let mut table: Vec<Vec<f64>> = vec![samples.to_vec()];
    for j in 1..=levels {
        let qj = q.powi(j as i32);
        let prev = &table[j - 1];
        let col: Vec<f64> = (0..prev.len() - 1)
            .map(|i| (prev[i + 1] - qj * prev[i]) / (1.0 - qj))
            .collect();
        table.push(col);
    }

    let mut best: Option<Extrapolation> = None;
    for (j, col) in table.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            if !v.is_finite() {
                continue;
            }
            let est = if i >= 1 {
                (v - col[i - 1]).abs()
            } else if j >= 1 {
                (v - table[j - 1][1]).abs()
            } else {
                continue; // the very first sample carries no estimate
            };
            // ties go to the later (deeper) entry
            if best.map_or(true, |b| est <= b.err) {
                best = Some(Extrapolation { value: v, err: est });
            }
        }
    }
    best
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// usable points or a degenerate abscissa.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let nf = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Classical fixed-step RK4 over `[t0, t1]`. The right-hand side writes into
/// `dy` and returns `false` to signal that the state left its domain; the
/// integrator then stops and reports the offending time.
pub fn rk4_integrate<F>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    steps: usize,
    y0: &[f64],
) -> Result<Vec<f64>, f64>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> bool,
{
    assert!(steps >= 1, "need at least one step");
    let dim = y0.len();
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    for step in 0..steps {
        let t = t0 + h * step as f64;
        if !rhs(t, &y, &mut k1) {
            return Err(t);
        }
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        if !rhs(t + 0.5 * h, &tmp, &mut k2) {
            return Err(t);
        }
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        if !rhs(t + 0.5 * h, &tmp, &mut k3) {
            return Err(t);
        }
        for i in 0..dim {
            tmp[i] = y[i] + h * k3[i];
        }
        if !rhs(t + h, &tmp, &mut k4) {
            return Err(t);
        }
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(t);
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_matches_hand_values() {
        assert_eq!(falling_big(5, 3), BigInt::from(60));
        assert_eq!(falling_big(3, 2), BigInt::from(6));
        assert_eq!(falling_big(2, 3), BigInt::from(0));
        assert_eq!(falling_big(4, 0), BigInt::from(1));
        assert_eq!(falling_f64(5.0, 3), 60.0);
    }

    #[test]
    fn richardson_recovers_geometric_limit() {
        // s_i = 2 + 3 q^i + 0.5 q^{2i}
        let q: f64 = 0.5;
        let samples: Vec<f64> = (0..12)
            .map(|i| 2.0 + 3.0 * q.powi(i) + 0.5 * q.powi(2 * i))
            .collect();
        let r = richardson_geometric(&samples, q, 6).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "value {}", r.value);
        assert!(r.err < 1e-10);
    }

    #[test]
    fn richardson_ignores_noisy_tail() {
        let q: f64 = 0.5;
        let mut samples: Vec<f64> = (0..14).map(|i| 1.0 + 2.0 * q.powi(i)).collect();
        // corrupt the deepest entries as float cancellation would
        let len = samples.len();
        samples[len - 1] += 0.3;
        samples[len - 2] -= 0.2;
        let r = richardson_geometric(&samples, q, 6).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "value {}", r.value);
    }

    #[test]
    fn slope_fit_recovers_power() {
        let pts: Vec<(f64, f64)> = (0..7)
            .map(|i| {
                let t = 0.1 * 0.5f64.powi(i);
                (t, 3.0 * t.powf(2.5))
            })
            .collect();
        let s = fit_loglog_slope(&pts).unwrap();
        assert!((s - 2.5).abs() < 1e-12);
    }

    #[test]
    fn rk4_integrates_exponential() {
        let y = rk4_integrate(
            |_t, y, dy| {
                dy[0] = y[0];
                true
            },
            0.0,
            1.0,
            1000,
            &[1.0],
        )
        .unwrap();
        assert!((y[0] - 1.0f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn rk4_reports_domain_exit() {
        let r = rk4_integrate(
            |t, y, dy| {
                if y[0] < 0.0 {
                    return false;
                }
                dy[0] = -1.0;
                let _ = t;
                true
            },
            0.0,
            2.0,
            100,
            &[0.5],
        );
        assert!(r.is_err());
    }
}
