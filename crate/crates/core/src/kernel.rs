//! Entire trigonometric kernels and branch-continued complex logarithms.
//!
//! `C(t)` and `S(t)` solve `f'' = -ω² f` with `C(0) = 1, C'(0) = 0` and
//! `S(0) = 0, S'(0) = 1`. They are entire in ω², so one pair of functions
//! covers the underdamped (cos, sin/ω), overdamped (cosh, sinh/|ω|) and
//! critical (1, t) regimes.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Result, TcsError};

/// Below this value of |ω²|·t² the kernels are evaluated from their series.
pub const TAYLOR_THRESHOLD: f64 = 1e-6;

/// `C(ω², t)`: cos(ωt), cosh(|ω|t) or 1.
pub fn kernel_c(omega_sq: f64, t: f64) -> f64 {
    let x = omega_sq * t * t;
    if x.abs() < TAYLOR_THRESHOLD {
        // 1 - x/2! + x²/4! - x³/6!
        1.0 - x / 2.0 * (1.0 - x / 12.0 * (1.0 - x / 30.0))
    } else if omega_sq > 0.0 {
        (omega_sq.sqrt() * t).cos()
    } else {
        ((-omega_sq).sqrt() * t).cosh()
    }
}

/// `S(ω², t)`: sin(ωt)/ω, sinh(|ω|t)/|ω| or t.
pub fn kernel_s(omega_sq: f64, t: f64) -> f64 {
    let x = omega_sq * t * t;
    if x.abs() < TAYLOR_THRESHOLD {
        // t (1 - x/3! + x²/5! - x³/7!)
        t * (1.0 - x / 6.0 * (1.0 - x / 20.0 * (1.0 - x / 42.0)))
    } else if omega_sq > 0.0 {
        let w = omega_sq.sqrt();
        (w * t).sin() / w
    } else {
        let w = (-omega_sq).sqrt();
        (w * t).sinh() / w
    }
}

/// Continuous logarithm along an ordered path of nonzero complex samples.
///
/// The first sample fixes the branch through its principal logarithm, so a
/// path starting at `1` has `L = 0` there.
pub fn continued_log(path: &[Complex64]) -> Result<Complex64> {
    let first = *path
        .first()
        .ok_or_else(|| TcsError::InvalidArgument("empty path".into()))?;
    if first == Complex64::new(0.0, 0.0) {
        return Err(TcsError::FocalPoint { index: 0 });
    }
    let mut log = first.ln();
    for (index, pair) in path.windows(2).enumerate() {
        let (prev, next) = (pair[0], pair[1]);
        if next.norm() == 0.0 || !next.is_finite() {
            return Err(TcsError::FocalPoint { index: index + 1 });
        }
        let jump = (next / prev).arg();
        if jump.abs() >= FRAC_PI_2 {
            return Err(TcsError::RefinementRequired { index, jump });
        }
        log = Complex64::new(next.norm().ln(), log.im + jump);
    }
    Ok(log)
}

/// `exp(-L/2)` at the final sample, `L` the continued logarithm of the path.
pub fn branch_continued_inv_sqrt(path: &[Complex64]) -> Result<Complex64> {
    Ok((-0.5 * continued_log(path)?).exp())
}

/// Continues `log f(t)` from `(t_from, log_from)` to `t_to`, sampling `f`
/// at steps no larger than `max_step` and bisecting wherever the argument
/// moves by more than π/4 between samples.
pub(crate) fn continue_log_along<F>(
    f: F,
    t_from: f64,
    log_from: Complex64,
    t_to: f64,
    max_step: f64,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    const MAX_DEPTH: u32 = 40;
    let span = t_to - t_from;
    let n = ((span.abs() / max_step).ceil() as usize).max(1);
    let h = span / n as f64;
    let mut arg = log_from.im;
    let mut prev = f(t_from);
    if prev.norm() == 0.0 {
        return Err(TcsError::FocalPoint { index: 0 });
    }
    for i in 1..=n {
        let t_next = if i == n { t_to } else { t_from + h * i as f64 };
        let t_prev = t_from + h * (i - 1) as f64;
        let next = f(t_next);
        if next.norm() == 0.0 || !next.is_finite() {
            return Err(TcsError::FocalPoint { index: i });
        }
        arg += arg_increment(&f, t_prev, prev, t_next, next, MAX_DEPTH, i)?;
        prev = next;
    }
    Ok(Complex64::new(prev.norm().ln(), arg))
}

fn arg_increment<F>(
    f: &F,
    ta: f64,
    za: Complex64,
    tb: f64,
    zb: Complex64,
    depth: u32,
    index: usize,
) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    let jump = (zb / za).arg();
    if jump.abs() <= std::f64::consts::FRAC_PI_4 {
        return Ok(jump);
    }
    if depth == 0 {
        return Err(TcsError::RefinementRequired { index, jump });
    }
    let tm = 0.5 * (ta + tb);
    let zm = f(tm);
    if zm.norm() == 0.0 {
        return Err(TcsError::FocalPoint { index });
    }
    Ok(arg_increment(f, ta, za, tm, zm, depth - 1, index)?
        + arg_increment(f, tm, zm, tb, zb, depth - 1, index)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_s(0.0, 2.5), 2.5);
        assert!((kernel_c(-1.0, 1.0) - 1.5430806348152437).abs() < 1e-12);
        assert!(kernel_s(1.0, PI).abs() < 1e-15);
        assert_eq!(kernel_c(0.0, 7.0), 1.0);
    }

    #[test]
    fn kernel_identity_all_regimes() {
        // C² + ω² S² = 1, relative to the size of C²
        for &w2 in &[1.0, 0.25, 3.0, -1.0, -0.3, 0.0, 1e-9, -1e-9] {
            let mut t = -20.0;
            while t <= 20.0 {
                let c = kernel_c(w2, t);
                let s = kernel_s(w2, t);
                let lhs = c * c + w2 * s * s;
                assert!(
                    (lhs - 1.0).abs() <= 1e-12 * (c * c).max(1.0),
                    "w2={w2} t={t} lhs={lhs}"
                );
                t += 0.37;
            }
        }
    }

    #[test]
    fn kernel_derivatives_by_finite_differences() {
        let h = 1e-3;
        for &w2 in &[1.3, -0.7, 0.0, 2e-7] {
            for &t in &[0.0, 0.4, 1.7, 5.0] {
                let d = |f: &dyn Fn(f64) -> f64| {
                    (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h))
                        / (12.0 * h)
                };
                let dc = d(&|s| kernel_c(w2, s));
                let ds = d(&|s| kernel_s(w2, s));
                let scale = kernel_c(w2, t).abs().max(1.0);
                assert!(
                    (dc + w2 * kernel_s(w2, t)).abs() < 1e-9 * scale,
                    "dC w2={w2} t={t}"
                );
                assert!(
                    (ds - kernel_c(w2, t)).abs() < 1e-9 * scale,
                    "dS w2={w2} t={t}"
                );
            }
        }
    }

    #[test]
    fn kernel_continuous_across_zero() {
        for i in 0..=100 {
            let t = i as f64 * 0.1;
            for &w2 in &[1e-9, -1e-9] {
                let dc = kernel_c(w2, t) - kernel_c(0.0, t);
                let ds = kernel_s(w2, t) - kernel_s(0.0, t);
                if t <= 3.0 {
                    assert!(dc.abs() < 1e-8 && ds.abs() < 1e-8, "t={t}");
                }
                // the remaining gap is the first-order shift -ω² t²/2, -ω² t³/6
                assert!((dc + w2 * t * t / 2.0).abs() < 1e-15, "t={t}");
                assert!((ds + w2 * t * t * t / 6.0).abs() < 1e-14, "t={t}");
            }
        }
    }

    #[test]
    fn taylor_branch_matches_closed_form_at_threshold() {
        // just above and below the switch point
        for &w2 in &[1.0f64, -1.0] {
            let t_switch = (TAYLOR_THRESHOLD / w2.abs()).sqrt();
            for t in [t_switch * 0.999, t_switch * 1.001] {
                let (c_exact, s_exact) = if w2 > 0.0 {
                    (t.cos(), t.sin())
                } else {
                    (t.cosh(), t.sinh())
                };
                assert!((kernel_c(w2, t) - c_exact).abs() < 2.3e-16);
                assert!((kernel_s(w2, t) - s_exact).abs() < 1e-18);
            }
        }
    }

    #[test]
    fn constant_path() {
        let path = vec![Complex64::new(1.0, 0.0); 5];
        assert_eq!(
            branch_continued_inv_sqrt(&path).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn unit_circle_winds_to_second_sheet() {
        let path: Vec<_> = (0..=64)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 64.0))
            .collect();
        let r = branch_continued_inv_sqrt(&path).unwrap();
        assert!((r - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn refinement_stable() {
        let path = |n: usize| -> Vec<Complex64> {
            (0..=n)
                .map(|k| {
                    let s = 3.0 * k as f64 / n as f64;
                    Complex64::new(1.0 + s * s, 0.0) * Complex64::from_polar(1.0, 2.3 * s)
                })
                .collect()
        };
        let a = branch_continued_inv_sqrt(&path(40)).unwrap();
        let b = branch_continued_inv_sqrt(&path(80)).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn path_errors() {
        let zero = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(
            continued_log(&zero),
            Err(TcsError::FocalPoint { index: 1 })
        ));
        let jump = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.1)];
        assert!(matches!(
            continued_log(&jump),
            Err(TcsError::RefinementRequired { index: 0, .. })
        ));
    }

    #[test]
    fn continue_along_refines_fast_rotation() {
        // 3 rad per coarse step; bisection splits each step into quarters
        let log = continue_log_along(
            |t| Complex64::from_polar(2.0, 3.0 * t),
            0.0,
            Complex64::new(0.0, 0.0),
            2.0,
            1.0,
        )
        .unwrap();
        assert!((log.im - 6.0).abs() < 1e-12);
        assert!((log.re - 2f64.ln()).abs() < 1e-15);
    }
}
