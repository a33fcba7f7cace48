//! Trajectory-coherent states as polynomial × Gaussian values.
//!
//! Every state handled here has the form
//!
//! ```text
//! Ψ(x, t) = P(u) · N · z(t)^{-1/2} · exp{ i S(x, t) / ħ },   u = x − x(t)
//! S(x, t) = σ(t) + p(t) u + ½ (w/z) u²
//! ```
//!
//! with `N = (Im b / πħ)^{1/4}`. The ladder operators act on the polynomial
//! `P` alone, so the Bose algebra and the Fock ladder are exact coefficient
//! identities, and inner products reduce to Gaussian moments.

use num_complex::Complex64;

use crate::dynamics::{self, PhaseState};
use crate::error::{Result, TcsError};
use crate::params::OscParams;

/// Highest Fock level built by [`fock_tcs`].
pub const DEGREE_CAP: usize = 64;

/// Default tolerance on the discarded coherent-state tail.
pub const COHERENT_TAIL_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Uniform spatial sampling on `[center − half_width, center + half_width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    center: f64,
    half_width: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(center: f64, half_width: f64, n_points: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() || !center.is_finite() {
            return Err(TcsError::InvalidGrid(format!(
                "half-width {half_width} at center {center}"
            )));
        }
        if n_points < 2 {
            return Err(TcsError::InvalidGrid(format!(
                "{n_points} points (need at least 2)"
            )));
        }
        Ok(Grid {
            center,
            half_width,
            n_points,
        })
    }

    /// Grid centred on ⟨x⟩ reaching `n_sigma` position spreads each side.
    pub fn around(state: &PolyGaussian, n_sigma: f64, n_points: usize) -> Result<Self> {
        let (mean, spread) = state.position_moments()?;
        Grid::new(mean, n_sigma * spread, n_points)
    }

    pub fn center(&self) -> f64 {
        self.center
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.center - self.half_width + self.spacing() * i as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }
}

/// A polynomial times the ground trajectory-coherent envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian {
    params: OscParams,
    phase: PhaseState,
    coeffs: Vec<Complex64>,
}

impl PolyGaussian {
    /// Wraps explicit coefficients `c₀..c_d` (in powers of `u = x − x(t)`).
    pub fn from_parts(params: OscParams, phase: PhaseState, coeffs: Vec<Complex64>) -> Self {
        let mut s = PolyGaussian {
            params,
            phase,
            coeffs,
        };
        s.trim();
        s
    }

    pub fn params(&self) -> &OscParams {
        &self.params
    }
    pub fn phase(&self) -> &PhaseState {
        &self.phase
    }
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
    pub fn t(&self) -> f64 {
        self.phase.t
    }

    /// `N = (Im b / πħ)^{1/4}`.
    pub fn norm_const(&self) -> f64 {
        (self.params.b().im / (std::f64::consts::PI * self.params.hbar())).powf(0.25)
    }

    /// Polynomial degree; `None` for the zero state.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Complex width `w/z` with the imaginary part taken as `Im b / |z|²`.
    ///
    /// The two agree on exact solutions, but when `|w||z| ≫ Im b` the
    /// direct quotient loses every digit of its imaginary part.
    pub fn width(&self) -> Complex64 {
        let ph = &self.phase;
        Complex64::new(ph.width().re, self.params.b().im / ph.z.norm_sqr())
    }

    /// Standard deviation of the envelope `|Ψ₀|²`, `sqrt(ħ / 2 Im(w/z))`.
    pub fn envelope_sigma(&self) -> f64 {
        (self.params.hbar() / (2.0 * self.width().im)).sqrt()
    }

    /// `(⟨x⟩, Δx)` of the normalised state.
    pub fn position_moments(&self) -> Result<(f64, f64)> {
        let mut shifted = vec![ZERO];
        shifted.extend_from_slice(&self.coeffs);
        let times_u = self.with_coeffs(shifted);
        let norm = self.inner(self)?.re;
        let mean_u = self.inner(&times_u)?.re / norm;
        let mean_u2 = times_u.inner(&times_u)?.re / norm;
        Ok((
            self.phase.x + mean_u,
            (mean_u2 - mean_u * mean_u).max(0.0).sqrt(),
        ))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == ZERO) {
            self.coeffs.pop();
        }
    }

    fn with_coeffs(&self, coeffs: Vec<Complex64>) -> Self {
        PolyGaussian::from_parts(self.params, self.phase, coeffs)
    }

    fn check_compatible(&self, other: &PolyGaussian) -> Result<()> {
        if self.params != other.params || self.phase != other.phase {
            return Err(TcsError::MismatchedStates);
        }
        Ok(())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, other: &PolyGaussian, factor: Complex64) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(ZERO)
                    + factor * other.coeffs.get(k).copied().unwrap_or(ZERO)
            })
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    /// Same state with the prefactor `z^{-1/2}` taken on the conjugate branch.
    ///
    /// Such a state no longer solves the Schrödinger equation; it serves as
    /// a negative control for the residual checks.
    pub fn conjugate_branch(&self) -> Self {
        let mut phase = self.phase;
        phase.logz = phase.logz.conj();
        PolyGaussian {
            params: self.params,
            phase,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Same polynomial carried on a different phase state.
    pub fn rebase(&self, phase: PhaseState) -> Self {
        PolyGaussian {
            params: self.params,
            phase,
            coeffs: self.coeffs.clone(),
        }
    }

    fn ladder_prefactor(&self) -> f64 {
        1.0 / (2.0 * self.params.hbar() * self.params.b().im).sqrt()
    }

    /// Amplitude Ψ(x).
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let u = x - self.phase.x;
        let poly = self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * u + c);
        if poly == ZERO {
            return ZERO;
        }
        let ph = &self.phase;
        let s = ph.sigma + ph.p * u + 0.5 * self.width() * u * u;
        let exponent = -0.5 * ph.logz + I * s / self.params.hbar();
        poly * self.norm_const() * exponent.exp()
    }

    pub fn evaluate_grid(&self, grid: &Grid) -> Vec<Complex64> {
        (0..grid.n_points())
            .map(|i| self.evaluate(grid.point(i)))
            .collect()
    }

    /// â⁺ applied to this state: `P → c(−iħ z* P′ + 2i Im b z⁻¹ u P)`.
    pub fn raise(&self) -> Self {
        let mult = 2.0 * I * self.params.b().im / self.phase.z;
        self.raise_with(mult)
    }

    /// â⁺ built literally from `z(p̂ − p) − w(x − x(t))` with the stored
    /// `w`, `z`, without substituting the conserved skew product.
    ///
    /// Agrees with [`raise`](Self::raise) exactly when `z w* − z* w = −2i Im b`.
    pub fn raise_literal(&self) -> Self {
        let ph = &self.phase;
        let mult = (ph.z.conj() * ph.w - ph.z * ph.w.conj()) / ph.z;
        self.raise_with(mult)
    }

    fn raise_with(&self, mult: Complex64) -> Self {
        let c = self.ladder_prefactor();
        let hbar = self.params.hbar();
        let ph = &self.phase;
        let d = derivative(&self.coeffs);
        let mut out = vec![ZERO; self.coeffs.len() + 1];
        for (k, dk) in d.iter().enumerate() {
            out[k] += -I * hbar * ph.z.conj() * dk;
        }
        for (k, ck) in self.coeffs.iter().enumerate() {
            out[k + 1] += mult * ck;
        }
        self.with_coeffs(out.into_iter().map(|v| v * c).collect())
    }

    /// â applied to this state.
    pub fn lower(&self) -> Self {
        let factor = -I * self.params.hbar() * self.ladder_prefactor() * self.phase.z;
        self.with_coeffs(
            derivative(&self.coeffs)
                .into_iter()
                .map(|v| v * factor)
                .collect(),
        )
    }

    /// ⟨self|other⟩ by Gaussian moments.
    pub fn inner(&self, other: &PolyGaussian) -> Result<Complex64> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(ZERO);
        }
        let ph = &self.phase;
        let hbar = self.params.hbar();
        // |Ψ₀|² = N² e^{-Re log z} exp(-a u²)
        let a = self.width().im / hbar;
        if !(a > 0.0) {
            return Err(TcsError::InvalidArgument(
                "envelope is not square-integrable".into(),
            ));
        }
        let s = (0.5 / a).sqrt();
        let nc = self.norm_const();
        let prefactor = nc * nc * (-ph.logz.re).exp() * (std::f64::consts::PI / a).sqrt();
        let lhs: Vec<Complex64> = scaled(&self.coeffs, s);
        let rhs: Vec<Complex64> = scaled(&other.coeffs, s);
        let moments = gaussian_moments(lhs.len() + rhs.len());
        let mut acc = ZERO;
        for (j, aj) in lhs.iter().enumerate() {
            for (k, bk) in rhs.iter().enumerate() {
                if (j + k) % 2 == 0 {
                    acc += aj.conj() * bk * moments[j + k];
                }
            }
        }
        Ok(acc * prefactor)
    }

    /// ⟨self|self⟩.
    pub fn norm_sq(&self) -> f64 {
        self.inner(self).map(|v| v.re).unwrap_or(f64::NAN)
    }
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

fn scaled(coeffs: &[Complex64], s: f64) -> Vec<Complex64> {
    let mut f = 1.0;
    coeffs
        .iter()
        .map(|c| {
            let v = c * f;
            f *= s;
            v
        })
        .collect()
}

/// Moments E[Xᵏ] of a standard normal, k < n.
fn gaussian_moments(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n.max(1)];
    m[0] = 1.0;
    for k in (2..n).step_by(2) {
        m[k] = m[k - 2] * (k - 1) as f64;
    }
    m
}

/// Ground state |0⟩ at time `t`.
pub fn ground_tcs(params: &OscParams, t: f64) -> Result<PolyGaussian> {
    let phase = dynamics::phase_state(params, t)?;
    Ok(PolyGaussian::from_parts(
        *params,
        phase,
        vec![Complex64::new(1.0, 0.0)],
    ))
}

pub fn apply_raising(state: &PolyGaussian) -> PolyGaussian {
    state.raise()
}

pub fn apply_lowering(state: &PolyGaussian) -> PolyGaussian {
    state.lower()
}

/// |n⟩ = (n!)^{-1/2} (â⁺)ⁿ |0⟩ built on an existing phase state.
pub fn fock_on(params: &OscParams, phase: PhaseState, n: usize) -> Result<PolyGaussian> {
    if n > DEGREE_CAP {
        return Err(TcsError::DegreeCap { n, cap: DEGREE_CAP });
    }
    let mut state = PolyGaussian::from_parts(*params, phase, vec![Complex64::new(1.0, 0.0)]);
    for k in 0..n {
        state = state
            .raise()
            .scale(Complex64::new(1.0 / ((k + 1) as f64).sqrt(), 0.0));
    }
    finite_coeffs(&state)?;
    Ok(state)
}

fn finite_coeffs(state: &PolyGaussian) -> Result<()> {
    match state.coeffs.iter().find(|c| !c.is_finite()) {
        Some(c) => Err(TcsError::NonFinite {
            name: "polynomial coefficient",
            value: c.norm(),
        }),
        None => Ok(()),
    }
}

/// Fock trajectory-coherent state |n⟩ at time `t`.
pub fn fock_tcs(params: &OscParams, n: usize, t: f64) -> Result<PolyGaussian> {
    if n > DEGREE_CAP {
        return Err(TcsError::DegreeCap { n, cap: DEGREE_CAP });
    }
    fock_on(params, dynamics::phase_state(params, t)?, n)
}

/// A truncated coherent state and the weight of what was discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    pub state: PolyGaussian,
    /// e^{-|α|²} Σ_{n > n_max} |α|^{2n}/n!
    pub tail_bound: f64,
    pub alpha: Complex64,
    pub n_max: usize,
}

/// e^{-|α|²} Σ_{n > n_max} |α|^{2n} / n!.
pub fn coherent_tail(alpha: Complex64, n_max: usize) -> f64 {
    let r2 = alpha.norm_sqr();
    if r2 == 0.0 {
        return 0.0;
    }
    let ln_fact: f64 = (1..=n_max + 1).map(|k| (k as f64).ln()).sum();
    let mut term = (-r2 + (n_max + 1) as f64 * r2.ln() - ln_fact).exp();
    let mut sum = 0.0;
    let mut n = n_max + 1;
    while term > 0.0 && term > 1e-18 * sum {
        sum += term;
        n += 1;
        term *= r2 / n as f64;
    }
    sum
}

/// Smallest `n_max` whose discarded tail is at most `tol`.
pub fn required_n_max(alpha: Complex64, tol: f64) -> usize {
    (0..)
        .find(|&n| coherent_tail(alpha, n) <= tol)
        .unwrap_or(usize::MAX)
}

/// |α⟩ on an existing phase state, refusing when the tail exceeds `tol`.
pub fn coherent_on(
    params: &OscParams,
    phase: PhaseState,
    alpha: Complex64,
    n_max: usize,
    tol: f64,
) -> Result<CoherentState> {
    if n_max < 1 {
        return Err(TcsError::InvalidArgument("n_max must be at least 1".into()));
    }
    if n_max > DEGREE_CAP {
        return Err(TcsError::DegreeCap {
            n: n_max,
            cap: DEGREE_CAP,
        });
    }
    let tail = coherent_tail(alpha, n_max);
    if tail > tol {
        return Err(TcsError::TruncationTail {
            tail,
            tol,
            required: required_n_max(alpha, tol),
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let mut fock = PolyGaussian::from_parts(*params, phase, vec![one]);
    let mut weight = one;
    let mut total = fock.clone();
    if alpha != Complex64::new(0.0, 0.0) {
        for k in 1..=n_max {
            let root = (k as f64).sqrt();
            fock = fock.raise().scale(Complex64::new(1.0 / root, 0.0));
            weight *= alpha / root;
            total = total.add_scaled(&fock, weight)?;
        }
    }
    let state = total.scale(Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0));
    finite_coeffs(&state)?;
    Ok(CoherentState {
        state,
        tail_bound: tail,
        alpha,
        n_max,
    })
}

/// Coherent state |α⟩ = e^{-|α|²/2} Σ_{n ≤ n_max} αⁿ (n!)^{-1/2} |n⟩ at time `t`.
pub fn coherent_tcs(
    params: &OscParams,
    alpha: Complex64,
    t: f64,
    n_max: usize,
) -> Result<CoherentState> {
    coherent_on(
        params,
        dynamics::phase_state(params, t)?,
        alpha,
        n_max,
        COHERENT_TAIL_TOL,
    )
}

/// ⟨a|b⟩.
pub fn inner_product(a: &PolyGaussian, b: &PolyGaussian) -> Result<Complex64> {
    a.inner(b)
}

pub fn evaluate(state: &PolyGaussian, x: f64) -> Complex64 {
    state.evaluate(x)
}

pub fn evaluate_grid(state: &PolyGaussian, grid: &Grid) -> Vec<Complex64> {
    state.evaluate_grid(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undamped() -> OscParams {
        OscParams::new(1.0, 0.0, 1.0, 1.0, Complex64::new(0.0, 1.0), 1.0, 0.0).unwrap()
    }

    fn damped() -> OscParams {
        OscParams::with_mu(1.0, 0.4, 1.0, 1.0, 0.5, 1.0, 0.5).unwrap()
    }

    fn trapezoid(values: &[f64], dx: f64) -> f64 {
        dx * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[values.len() - 1]))
    }

    #[test]
    fn ground_at_origin_of_packet() {
        let p = undamped();
        let g = ground_tcs(&p, 0.0).unwrap();
        let n = (1.0 / std::f64::consts::PI).powf(0.25);
        assert!((g.evaluate(1.0) - Complex64::new(n, 0.0)).norm() < 1e-15);
        assert!((g.norm_sq() - 1.0).abs() < 1e-14);
        let d = 0.7;
        let ratio = g.evaluate(1.0 + d).norm_sqr() / g.evaluate(1.0).norm_sqr();
        assert!((ratio - (-d * d).exp()).abs() < 1e-14);
    }

    #[test]
    fn rigid_packet_when_undamped() {
        let p = undamped();
        for &t in &[0.5, 2.0, 7.0] {
            let g = ground_tcs(&p, t).unwrap();
            // width ħ/(2mω₀) = 1/2
            assert!((g.envelope_sigma().powi(2) - 0.5).abs() < 1e-14);
            let xt = g.phase().x;
            for &u in &[0.0, 0.3, -1.1] {
                let dens = g.evaluate(xt + u).norm_sqr();
                let expect = (1.0 / std::f64::consts::PI).sqrt() * (-u * u).exp();
                assert!((dens - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ladder_on_ground() {
        let p = damped();
        let g = ground_tcs(&p, 1.3).unwrap();
        assert!(g.lower().is_zero());
        let one = g.raise();
        assert_eq!(one.degree(), Some(1));
        let z = g.phase().z;
        let expect = I * (2.0 * p.b().im / p.hbar()).sqrt() / z;
        assert!((one.coeffs()[1] - expect).norm() < 1e-14);
        assert!(one.coeffs()[0].norm() < 1e-15);
        let back = one.lower();
        assert_eq!(back.degree(), Some(0));
        assert!((back.coeffs()[0] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn fock_ladder_relations() {
        let p = damped();
        for n in 1..=8 {
            let a = fock_tcs(&p, n, 2.0).unwrap();
            let below = fock_tcs(&p, n - 1, 2.0).unwrap();
            let lowered = a.lower();
            let diff = lowered
                .add_scaled(&below, Complex64::new(-(n as f64).sqrt(), 0.0))
                .unwrap();
            assert!(diff.coeffs().iter().all(|c| c.norm() < 1e-12), "n={n}");
            assert!((a.norm_sq() - 1.0).abs() < 1e-12);
        }
        assert_eq!(fock_tcs(&p, 0, 2.0).unwrap(), ground_tcs(&p, 2.0).unwrap());
        assert!(matches!(
            fock_tcs(&p, 65, 0.0),
            Err(TcsError::DegreeCap { .. })
        ));
    }

    #[test]
    fn orthogonality_small() {
        let p = damped();
        let states: Vec<_> = (0..=6).map(|n| fock_tcs(&p, n, 0.8).unwrap()).collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let v = a.inner(b).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).norm() < 1e-12, "<{i}|{j}> = {v}");
            }
        }
    }

    #[test]
    fn inner_product_is_hermitian() {
        let p = damped();
        let a = coherent_tcs(&p, Complex64::new(0.3, 0.9), 1.0, 30)
            .unwrap()
            .state;
        let b = fock_tcs(&p, 3, 1.0)
            .unwrap()
            .add_scaled(&fock_tcs(&p, 1, 1.0).unwrap(), I)
            .unwrap();
        let ab = a.inner(&b).unwrap();
        let ba = b.inner(&a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
    }

    #[test]
    fn mismatched_states_rejected() {
        let p = damped();
        let a = ground_tcs(&p, 1.0).unwrap();
        let b = ground_tcs(&p, 1.5).unwrap();
        assert_eq!(a.inner(&b), Err(TcsError::MismatchedStates));
    }

    #[test]
    fn coherent_basics() {
        let p = damped();
        let zero = coherent_tcs(&p, ZERO, 0.5, 5).unwrap();
        assert_eq!(zero.state, ground_tcs(&p, 0.5).unwrap());
        assert_eq!(zero.tail_bound, 0.0);

        let one = coherent_tcs(&p, Complex64::new(1.0, 0.0), 0.5, 30).unwrap();
        assert!((one.state.norm_sq() - 1.0).abs() < 1e-10);

        let refused = coherent_tcs(&p, Complex64::new(3.0, 0.0), 0.5, 5);
        match refused {
            Err(TcsError::TruncationTail { required, .. }) => {
                assert!(coherent_tail(Complex64::new(3.0, 0.0), required) <= COHERENT_TAIL_TOL);
                assert!(coherent_tail(Complex64::new(3.0, 0.0), required - 1) > COHERENT_TAIL_TOL);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn coherent_tail_matches_direct_sum() {
        // 1 − e^{-r²} Σ_{n ≤ N} r^{2n}/n! for moderate values
        let alpha = Complex64::new(1.2, 0.0);
        let r2 = alpha.norm_sqr();
        let mut partial = 0.0;
        let mut term = 1.0;
        for n in 0..=4 {
            if n > 0 {
                term *= r2 / n as f64;
            }
            partial += term;
        }
        let direct = 1.0 - (-r2).exp() * partial;
        assert!((coherent_tail(alpha, 4) - direct).abs() < 1e-14);
    }

    #[test]
    fn fock_one_vanishes_on_trajectory() {
        let p = damped();
        let s = fock_tcs(&p, 1, 1.7).unwrap();
        assert_eq!(s.evaluate(s.phase().x), ZERO);
    }

    #[test]
    fn grid_norm_of_fock_three() {
        let p = damped();
        let s = fock_tcs(&p, 3, 2.0).unwrap();
        let grid = Grid::around(&s, 10.0, 4096).unwrap();
        let dens: Vec<f64> = s
            .evaluate_grid(&grid)
            .iter()
            .map(|v| v.norm_sqr())
            .collect();
        assert!((trapezoid(&dens, grid.spacing()) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 0.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        let g = Grid::new(1.0, 2.0, 5).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.points(), vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
    }
}
