//! Reduced amplitude equations on the center manifold,
//! `dx_m/dt = β x_m − q x_m |x|²`, and reconstruction of the approximate
//! physical fields from the amplitudes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::harmonics::{ylm_gradient, HarmonicIndex};
use crate::params::{sigma_crit, Params};
use crate::spectrum::{eigenvalues, mode_coefficients, ModeIndex};
use crate::transition::{quadratic_form, transition_number, CenterManifoldCoeffs, Classification};
use crate::{Error, Result};

/// Reality residue above which a state is rejected.
pub const REALITY_TOL: f64 = 1e-9;
/// `|x|²` beyond which a trajectory is declared divergent.
pub const DIVERGENCE_BOUND: f64 = 1e12;
/// Upper bound on `dt·|β|`.
pub const MAX_STEP_RATIO: f64 = 0.1;
/// Number of random starts in [`attractor_check`].
pub const ATTRACTOR_STARTS: usize = 20;
/// Relative agreement of terminal radii with `β/q` required by [`attractor_check`].
pub const ATTRACTOR_TOL: f64 = 1e-4;

/// Amplitudes `x_m`, `m = −l_c..=l_c`, stored at index `m + l_c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeState {
    pub lc: u32,
    pub x: Vec<Complex64>,
    pub t: f64,
}

impl AmplitudeState {
    pub fn new(lc: u32, x: Vec<Complex64>, t: f64) -> Result<Self> {
        if x.len() != (2 * lc + 1) as usize {
            return Err(Error::InvalidParams(format!("expected {} amplitudes, got {}", 2 * lc + 1, x.len())));
        }
        let state = AmplitudeState { lc, x, t };
        let res = state.reality_residue();
        if !(res <= REALITY_TOL) {
            return Err(Error::ConstraintViolated(res));
        }
        Ok(state)
    }

    pub fn zero(lc: u32) -> Self {
        AmplitudeState {
            lc,
            x: vec![Complex64::new(0.0, 0.0); (2 * lc + 1) as usize],
            t: 0.0,
        }
    }

    /// Random state satisfying the reality constraint with `|x|² = norm_sq`.
    pub fn random<R: Rng>(lc: u32, norm_sq: f64, rng: &mut R) -> Self {
        let mut s = AmplitudeState::zero(lc);
        for m in 0..=lc as i32 {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = if m == 0 { 0.0 } else { rng.gen_range(-1.0..1.0) };
            s.set(m, Complex64::new(re, im));
        }
        let n2 = s.norm_sq();
        let scale = if n2 > 0.0 { (norm_sq / n2).sqrt() } else { 0.0 };
        s.x.iter_mut().for_each(|v| *v *= scale);
        s
    }

    /// [`AmplitudeState::random`] drawn from a ChaCha8 stream with the given seed.
    pub fn seeded(lc: u32, norm_sq: f64, seed: u64) -> Self {
        AmplitudeState::random(lc, norm_sq, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn get(&self, m: i32) -> Complex64 {
        self.x[(m + self.lc as i32) as usize]
    }

    /// Sets `x_m` and its partner `x_{−m} = (−1)^m conj(x_m)`.
    pub fn set(&mut self, m: i32, value: Complex64) {
        let lc = self.lc as i32;
        if m == 0 {
            self.x[lc as usize] = Complex64::new(value.re, 0.0);
        } else {
            self.x[(m + lc) as usize] = value;
            self.x[(lc - m) as usize] = parity(m) * value.conj();
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `max_m |x_{−m} − (−1)^m conj(x_m)|`.
    pub fn reality_residue(&self) -> f64 {
        (0..=self.lc as i32)
            .map(|m| (self.get(-m) - parity(m) * self.get(m).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Nearest state satisfying the reality constraint exactly.
    pub fn project(&mut self) {
        for m in 0..=self.lc as i32 {
            let avg = 0.5 * (self.get(m) + parity(m) * self.get(-m).conj());
            self.set(m, avg);
        }
    }
}

fn parity(m: i32) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Right-hand side `β x_m − q x_m |x|²`.
pub fn reduced_rhs(state: &AmplitudeState, beta: f64, q: f64) -> Result<Vec<Complex64>> {
    let res = state.reality_residue();
    if !(res <= REALITY_TOL) {
        return Err(Error::ConstraintViolated(res));
    }
    Ok(rhs(&state.x, beta, q))
}

fn rhs(x: &[Complex64], beta: f64, q: f64) -> Vec<Complex64> {
    let n2: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    let gain = beta - q * n2;
    x.iter().map(|v| gain * v).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub beta: f64,
    pub q: f64,
    pub dt: f64,
    pub samples: Vec<AmplitudeState>,
}

impl Trajectory {
    pub fn last(&self) -> &AmplitudeState {
        self.samples.last().expect("trajectory holds the initial state")
    }
}

/// Classic RK4 from `state0` to time `state0.t + horizon`, re-projecting onto the
/// reality constraint after every step and keeping every `stride`-th state
/// (plus the final one).
pub fn integrate(state0: &AmplitudeState, beta: f64, q: f64, dt: f64, horizon: f64, stride: usize) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidStep(format!("dt must be positive, got {dt}")));
    }
    if !(dt * beta.abs() < MAX_STEP_RATIO) {
        return Err(Error::InvalidStep(format!("dt·|β| = {} must stay below {MAX_STEP_RATIO}", dt * beta.abs())));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidStep(format!("horizon must be non-negative, got {horizon}")));
    }
    let stride = stride.max(1);
    let mut state = state0.clone();
    reduced_rhs(&state, beta, q)?;
    let steps = (horizon / dt).ceil() as usize;
    let t0 = state.t;
    let mut samples = vec![state.clone()];
    for i in 0..steps {
        let h = if i + 1 == steps { t0 + horizon - state.t } else { dt };
        let x = &state.x;
        let k1 = rhs(x, beta, q);
        let k2 = rhs(&axpy(x, &k1, 0.5 * h), beta, q);
        let k3 = rhs(&axpy(x, &k2, 0.5 * h), beta, q);
        let k4 = rhs(&axpy(x, &k3, h), beta, q);
        for j in 0..state.x.len() {
            state.x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        state.project();
        state.t = if i + 1 == steps { t0 + horizon } else { state.t + h };
        let n2 = state.norm_sq();
        if !(n2 <= DIVERGENCE_BOUND) {
            return Err(Error::Diverged { time: state.t, norm_sq: n2 });
        }
        if (i + 1) % stride == 0 || i + 1 == steps {
            samples.push(state.clone());
        }
    }
    Ok(Trajectory { beta, q, dt, samples })
}

fn axpy(x: &[Complex64], k: &[Complex64], h: f64) -> Vec<Complex64> {
    x.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Closed-form `|x(t)|²` of the reduced equations from `|x(0)|² = y0`.
pub fn logistic_norm_sq(beta: f64, q: f64, y0: f64, t: f64) -> f64 {
    if beta == 0.0 {
        return y0 / (1.0 + 2.0 * q * y0 * t);
    }
    let e = (-2.0 * beta * t).exp();
    beta * y0 / (q * y0 * (1.0 - e) + beta * e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorReport {
    pub lc: u32,
    pub sigma: f64,
    pub beta: f64,
    pub q: f64,
    /// `β / q`
    pub expected_norm_sq: f64,
    pub terminal_norm_sq: Vec<f64>,
    pub max_rel_deviation: f64,
    /// Largest distance between terminal unit vectors `x/|x|`.
    pub direction_spread: f64,
    pub seed: u64,
    pub dt: f64,
    pub horizon: f64,
    pub passed: bool,
}

/// Integrates from [`ATTRACTOR_STARTS`] random states at `σ = σ_c + sigma_offset`
/// and compares the terminal radii with `β/q`.
pub fn attractor_check(params: &Params, sigma_offset: f64, seed: u64) -> Result<AttractorReport> {
    if !(sigma_offset > 0.0) {
        return Err(Error::InvalidParams(format!("sigma offset must be positive, got {sigma_offset}")));
    }
    let crit = sigma_crit(params.aspect())?;
    let p = params.with_sigma(crit.sigma_c + sigma_offset);
    let report = transition_number(&p)?;
    if report.classification != Classification::TypeI {
        return Err(Error::TypeIIRegime { q: report.q });
    }
    let (beta, q) = (report.critical_growth, report.q);
    let target = beta / q;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<AmplitudeState> = (0..ATTRACTOR_STARTS)
        .map(|_| {
            let scale: f64 = rng.gen_range(0.05..2.0);
            AmplitudeState::random(report.lc, scale * target, &mut rng)
        })
        .collect();
    let peak = starts.iter().map(|s| s.norm_sq()).fold(0.0, f64::max);
    let dt = 0.05 / beta.abs().max(q * peak);
    let horizon = 20.0 / beta;
    let stride = usize::MAX;

    let terminal: Vec<AmplitudeState> = starts
        .par_iter()
        .map(|s| integrate(s, beta, q, dt, horizon, stride).map(|t| t.last().clone()))
        .collect::<Result<_>>()?;

    let terminal_norm_sq: Vec<f64> = terminal.iter().map(|s| s.norm_sq()).collect();
    let max_rel_deviation = terminal_norm_sq
        .iter()
        .map(|n| (n - target).abs() / target)
        .fold(0.0, f64::max);
    let units: Vec<Vec<Complex64>> = terminal
        .iter()
        .map(|s| {
            let n = s.norm_sq().sqrt();
            s.x.iter().map(|v| v / n).collect()
        })
        .collect();
    let mut direction_spread: f64 = 0.0;
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            let d: f64 = units[i].iter().zip(&units[j]).map(|(a, b)| (a - b).norm_sqr()).sum();
            direction_spread = direction_spread.max(d.sqrt());
        }
    }
    Ok(AttractorReport {
        lc: report.lc,
        sigma: p.sigma(),
        beta,
        q,
        expected_norm_sq: target,
        terminal_norm_sq,
        max_rel_deviation,
        direction_spread,
        seed,
        dt,
        horizon,
        passed: max_rel_deviation < ATTRACTOR_TOL && direction_spread > 0.1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub theta: f64,
    pub phi: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub position: GridPoint,
    pub u_theta: f64,
    pub u_phi: f64,
    pub w: f64,
    pub temperature: f64,
    pub salinity: f64,
}

#[derive(Default, Clone, Copy)]
struct Accum {
    u_theta: Complex64,
    u_phi: Complex64,
    w: Complex64,
    t: Complex64,
    s: Complex64,
}

impl Accum {
    fn values(&self) -> [Complex64; 5] {
        [self.u_theta, self.u_phi, self.w, self.t, self.s]
    }
}

struct Mode {
    idx: HarmonicIndex,
    n: u32,
    amp: Complex64,
    theta: Complex64,
    phi: Complex64,
    u_scale: f64,
    w_scale: f64,
}

fn collect_modes(state: &AmplitudeState, cm: &CenterManifoldCoeffs, params: &Params) -> Result<(Vec<Mode>, Complex64)> {
    let lc = state.lc;
    let mut modes = Vec::new();
    let beta_c = eigenvalues(lc, 1, params).betas[0];
    for m in -(lc as i32)..=lc as i32 {
        let amp = state.get(m);
        let c = mode_coefficients(&ModeIndex::new(lc, m, 1, 1)?, beta_c, params, false)?;
        modes.push(Mode {
            idx: HarmonicIndex::new(lc, m)?,
            n: 1,
            amp,
            theta: c.theta,
            phi: c.phi,
            u_scale: c.u_scale,
            w_scale: c.w_scale,
        });
    }
    for fam in &cm.families {
        let forms = quadratic_form(lc, fam.l, &state.x)?;
        let betas = eigenvalues(fam.l, 2, params).betas;
        for (k, &beta) in betas.iter().enumerate() {
            for (i, &form) in forms.iter().enumerate() {
                let mm = i as i32 - fam.l as i32;
                let c = mode_coefficients(&ModeIndex::new(fam.l, mm, 2, k as u8 + 1)?, beta, params, false)?;
                modes.push(Mode {
                    idx: HarmonicIndex::new(fam.l, mm)?,
                    n: 2,
                    amp: fam.values[k] * form,
                    theta: c.theta,
                    phi: c.phi,
                    u_scale: c.u_scale,
                    w_scale: c.w_scale,
                });
            }
        }
    }
    let mean = quadratic_form(lc, 0, &state.x)?[0];
    Ok((modes, mean))
}

/// Evaluates `Φ_c + Φ_cm` at each grid point.
///
/// The velocity of a mode is `u_scale ∇_H Y cos nπz` with the surface gradient
/// of the sphere of radius `r`; the mean `n = 2` modes carry only temperature
/// and salinity.
pub fn reconstruct_fields(
    state: &AmplitudeState,
    cm: &CenterManifoldCoeffs,
    params: &Params,
    grid: &[GridPoint],
) -> Result<Vec<FieldSample>> {
    if cm.lc != state.lc {
        return Err(Error::InvalidParams(format!(
            "center-manifold coefficients for l_c = {} do not match state l_c = {}",
            cm.lc, state.lc
        )));
    }
    let (modes, mean) = collect_modes(state, cm, params)?;
    let inv_r = 1.0 / params.aspect();
    grid.iter()
        .map(|&gp| {
            let mut acc = Accum::default();
            for mode in &modes {
                if mode.amp == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let g = ylm_gradient(mode.idx, gp.theta, gp.phi);
                let kz = mode.n as f64 * PI * gp.z;
                let (sz, cz) = kz.sin_cos();
                acc.u_theta += mode.amp * mode.u_scale * inv_r * g.d_theta * cz;
                acc.u_phi += mode.amp * mode.u_scale * inv_r * g.d_phi_over_sin * cz;
                acc.w += mode.amp * mode.w_scale * g.value * sz;
                acc.t += mode.amp * mode.theta * g.value * sz;
                acc.s += mode.amp * mode.phi * g.value * sz;
            }
            let s2 = (2.0 * PI * gp.z).sin();
            acc.t += cm.a02[0] * mean * s2;
            acc.s += cm.a02[1] * mean * s2;

            let vals = acc.values();
            let residue = vals.iter().map(|v| v.im.abs() / (1.0 + v.re.abs())).fold(0.0, f64::max);
            if residue > REALITY_TOL {
                return Err(Error::ConstraintViolated(residue));
            }
            Ok(FieldSample {
                position: gp,
                u_theta: vals[0].re,
                u_phi: vals[1].re,
                w: vals[2].re,
                temperature: vals[3].re,
                salinity: vals[4].re,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::center_manifold_coeffs;

    fn real_state(lc: u32, x0: f64) -> AmplitudeState {
        let mut s = AmplitudeState::zero(lc);
        s.set(0, Complex64::new(x0, 0.0));
        s
    }

    #[test]
    fn zero_is_equilibrium() {
        let s = AmplitudeState::zero(2);
        assert!(reduced_rhs(&s, 0.3, 1.0).unwrap().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn axisymmetric_cubic() {
        let s = real_state(1, 0.4);
        let r = reduced_rhs(&s, 0.1, 2.0).unwrap();
        assert!((r[1].re - (0.1 * 0.4 - 2.0 * 0.4f64.powi(3))).abs() < 1e-15);
    }

    #[test]
    fn compact_form_matches_expanded_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = AmplitudeState::random(1, 0.7, &mut rng);
        let (beta, q) = (0.2, 1.5);
        let r = reduced_rhs(&s, beta, q).unwrap();
        let quad = s.get(0) * s.get(0) - 2.0 * s.get(-1) * s.get(1);
        for m in -1..=1 {
            let expanded = beta * s.get(m) - q * s.get(m) * quad;
            assert!((r[(m + 1) as usize] - expanded).norm() < 1e-14);
        }
    }

    #[test]
    fn violated_constraint_is_rejected() {
        let mut s = AmplitudeState::zero(1);
        s.x[0] = Complex64::new(1.0, 0.0);
        assert!(matches!(reduced_rhs(&s, 0.1, 1.0), Err(Error::ConstraintViolated(_))));
        assert!(AmplitudeState::new(1, s.x.clone(), 0.0).is_err());
    }

    #[test]
    fn logistic_fixed_point() {
        let s = real_state(1, 0.01);
        let tr = integrate(&s, 0.1, 1.0, 0.5, 200.0, 10).unwrap();
        assert!((tr.last().norm_sq() - 0.1).abs() < 1e-6);
        assert!((tr.last().t - 200.0).abs() < 1e-12);
    }

    #[test]
    fn matches_logistic_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = AmplitudeState::random(2, 1e-3, &mut rng);
        let tr = integrate(&s, 0.1, 1.0, 0.1, 80.0, 7).unwrap();
        for st in &tr.samples {
            let exact = logistic_norm_sq(0.1, 1.0, 1e-3, st.t);
            assert!((st.norm_sq() - exact).abs() < 1e-6, "t = {}", st.t);
            assert!(st.reality_residue() < 1e-12);
        }
    }

    #[test]
    fn critical_decay_is_algebraic() {
        let s = real_state(1, 0.5);
        let tr = integrate(&s, 0.0, 1.0, 0.05, 500.0, 1000).unwrap();
        let exact = logistic_norm_sq(0.0, 1.0, 0.25, 500.0);
        assert!((tr.last().norm_sq() - exact).abs() < 1e-8);
        assert!(tr.last().norm_sq() < 1e-3);
    }

    #[test]
    fn negative_q_diverges() {
        let s = real_state(1, 0.01);
        assert!(matches!(integrate(&s, 0.1, -1.0, 0.1, 500.0, 1), Err(Error::Diverged { .. })));
    }

    #[test]
    fn step_bounds() {
        let s = real_state(1, 0.01);
        assert!(matches!(integrate(&s, 0.1, 1.0, 1.0, 1.0, 1), Err(Error::InvalidStep(_))));
        assert!(matches!(integrate(&s, 0.1, 1.0, -0.1, 1.0, 1), Err(Error::InvalidStep(_))));
    }

    #[test]
    fn fourth_order_convergence() {
        let s = real_state(1, 0.1);
        let (beta, q, horizon) = (0.1, 1.0, 30.0);
        let exact = logistic_norm_sq(beta, q, 0.01, horizon);
        let err = |dt: f64| (integrate(&s, beta, q, dt, horizon, usize::MAX).unwrap().last().norm_sq() - exact).abs();
        let ratio = err(0.8) / err(0.4);
        assert!((ratio - 16.0).abs() < 3.0, "{ratio}");
    }

    #[test]
    fn phase_rotation_preserves_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = AmplitudeState::random(2, 0.02, &mut rng);
        let base = integrate(&s, 0.1, 1.0, 0.2, 40.0, 20).unwrap();
        for gamma in [0.3, 1.7, -2.2] {
            let mut r = s.clone();
            for m in -2..=2 {
                r.x[(m + 2) as usize] = s.get(m) * Complex64::from_polar(1.0, m as f64 * gamma);
            }
            assert!(r.reality_residue() < 1e-14);
            let tr = integrate(&r, 0.1, 1.0, 0.2, 40.0, 20).unwrap();
            for (a, b) in base.samples.iter().zip(&tr.samples) {
                assert!((a.norm_sq() - b.norm_sq()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn attractor_refuses_type_two() {
        let p = Params::at_criticality(7.5, 0.01, 2.0 / PI, 660.0).unwrap();
        assert!(matches!(attractor_check(&p, 0.5, 1), Err(Error::TypeIIRegime { .. })));
    }

    fn grid() -> Vec<GridPoint> {
        let mut g = Vec::new();
        for &theta in &[0.0, 0.4, 1.3, 2.2, PI] {
            for &phi in &[0.0, 1.1, 4.0] {
                for &z in &[0.0, 0.3, 0.5, 1.0] {
                    g.push(GridPoint { theta, phi, z });
                }
            }
        }
        g
    }

    #[test]
    fn fields_vanish_for_zero_state_and_are_real() {
        for (lc, aspect) in [(1, 2.0 / PI), (2, 2.0 * 3f64.sqrt() / PI)] {
            let p = Params::at_criticality(7.5, 0.5, aspect, 700.0).unwrap();
            let cm = center_manifold_coeffs(&p).unwrap();
            let zero = reconstruct_fields(&AmplitudeState::zero(lc), &cm, &p, &grid()).unwrap();
            assert!(zero.iter().all(|f| [f.u_theta, f.u_phi, f.w, f.temperature, f.salinity] == [0.0; 5]));

            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let s = AmplitudeState::random(lc, 0.3, &mut rng);
            let fields = reconstruct_fields(&s, &cm, &p, &grid()).unwrap();
            for f in &fields {
                if f.position.z == 0.0 || f.position.z == 1.0 {
                    assert!(f.w.abs() < 1e-12 && f.temperature.abs() < 1e-12 && f.salinity.abs() < 1e-12);
                }
            }
            assert!(fields.iter().any(|f| f.temperature.abs() > 1e-6));
        }
    }
}
