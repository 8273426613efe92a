//! Orthonormal spherical harmonics with the Condon–Shortley phase, triple
//! product integrals by quadrature and in closed form, and the set of modes
//! reachable by quadratic interactions of critical modes.
//!
//! Convention: `Y_lm(θ, φ) = P̄_lm(cos θ) e^{imφ}` with `∫|Y_lm|² dΩ = 1`
//! and `conj(Y_lm) = (−1)^m Y_{l,−m}`.

mod quadrature;
mod wigner;

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

pub use quadrature::GaussLegendre;
pub use wigner::{wigner_3j, SignedSqrt};

use crate::{Error, Result};

/// Largest degree accepted by [`oracle_agreement`].
pub const MAX_CHECK_DEGREE: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicIndex {
    pub l: u32,
    pub m: i32,
}

impl HarmonicIndex {
    pub fn new(l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::InvalidParams(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        Ok(HarmonicIndex { l, m })
    }

    /// All indices with degree at most `l_max`, ordered by `l` then `m`.
    pub fn all_up_to(l_max: u32) -> Vec<HarmonicIndex> {
        (0..=l_max)
            .flat_map(|l| (-(l as i32)..=l as i32).map(move |m| HarmonicIndex { l, m }))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleProduct {
    pub indices: [HarmonicIndex; 3],
    pub value: Complex64,
}

/// `P̄_lm(x)` for `l = m..=l_max`, `m ≥ 0`, with `sin θ` passed separately
/// so that the `sin^m θ` factor can be reduced by `drop_sin` powers.
fn legendre_column(l_max: u32, m: u32, x: f64, sin_theta: f64, drop_sin: bool) -> Vec<f64> {
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        let factor = if drop_sin && k == 1 { 1.0 } else { sin_theta };
        pmm *= -((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * factor;
    }
    let mut out = Vec::with_capacity((l_max.saturating_sub(m) + 1) as usize);
    if l_max < m {
        return out;
    }
    out.push(pmm);
    if l_max == m {
        return out;
    }
    out.push((2.0 * m as f64 + 3.0).sqrt() * x * pmm);
    let mf = m as f64;
    for l in (m + 2)..=l_max {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lp = lf - 1.0;
        let b = ((lp * lp - mf * mf) / (4.0 * lp * lp - 1.0)).sqrt();
        let k = (l - m) as usize;
        let next = a * (x * out[k - 1] - b * out[k - 2]);
        out.push(next);
    }
    out
}

/// Normalized associated Legendre function `P̄_lm(cos θ)` for `m ≥ 0`.
pub fn legendre_normalized(l: u32, m: u32, theta: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    legendre_column(l, m, theta.cos(), theta.sin(), false)[(l - m) as usize]
}

fn phase(m: i32, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, m as f64 * phi)
}

fn reflect(m: i32, z: Complex64) -> Complex64 {
    if m < 0 && m % 2 != 0 {
        -z.conj()
    } else if m < 0 {
        z.conj()
    } else {
        z
    }
}

pub fn ylm(idx: HarmonicIndex, theta: f64, phi: f64) -> Complex64 {
    let ma = idx.m.unsigned_abs();
    let p = legendre_normalized(idx.l, ma, theta);
    reflect(idx.m, phase(ma as i32, phi) * p)
}

/// `Y_lm` together with `∂_θ Y_lm` and `(1/sin θ) ∂_φ Y_lm`, finite at the poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicGradient {
    pub value: Complex64,
    pub d_theta: Complex64,
    pub d_phi_over_sin: Complex64,
}

pub fn ylm_gradient(idx: HarmonicIndex, theta: f64, phi: f64) -> HarmonicGradient {
    let l = idx.l;
    let ma = idx.m.unsigned_abs();
    let (s, x) = (theta.sin(), theta.cos());
    let e = phase(ma as i32, phi);
    let column = legendre_column(l, ma, x, s, false);
    let p = column[(l - ma) as usize];

    let (dp, p_over_sin) = if ma == 0 {
        let dp = if l == 0 {
            0.0
        } else {
            let lf = l as f64;
            (lf * (lf + 1.0)).sqrt() * legendre_column(l, 1, x, s, false)[(l - 1) as usize]
        };
        (dp, 0.0)
    } else {
        let reduced = legendre_column(l, ma, x, s, true);
        let pl = reduced[(l - ma) as usize];
        let plm1 = if l > ma { reduced[(l - ma - 1) as usize] } else { 0.0 };
        let (lf, mf) = (l as f64, ma as f64);
        let c = ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt();
        (lf * x * pl - c * plm1, pl)
    };

    let i = Complex64::i();
    HarmonicGradient {
        value: reflect(idx.m, e * p),
        d_theta: reflect(idx.m, e * dp),
        d_phi_over_sin: reflect(idx.m, i * ma as f64 * e * p_over_sin),
    }
}

/// Node counts `(n_θ, n_φ)` that integrate `Y₁ Y₂ conj(Y₃)` exactly.
pub fn minimal_nodes(i1: HarmonicIndex, i2: HarmonicIndex, i3: HarmonicIndex) -> (usize, usize) {
    let n_theta = (i1.l + i2.l + i3.l + 1) as usize;
    let n_phi = (i1.m.unsigned_abs() + i2.m.unsigned_abs() + i3.m.unsigned_abs() + 1) as usize;
    (n_theta, n_phi)
}

/// `∫ Y₁ Y₂ conj(Y₃) dΩ` on the minimal exact tensor-product grid.
pub fn triple_product_quadrature(i1: HarmonicIndex, i2: HarmonicIndex, i3: HarmonicIndex) -> Complex64 {
    let (nt, np) = minimal_nodes(i1, i2, i3);
    triple_product_with_nodes(i1, i2, i3, nt, np)
}

/// Same integral on a Gauss–Legendre × equispaced grid of the given size.
pub fn triple_product_with_nodes(
    i1: HarmonicIndex,
    i2: HarmonicIndex,
    i3: HarmonicIndex,
    n_theta: usize,
    n_phi: usize,
) -> Complex64 {
    let gl = GaussLegendre::new(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
        let theta = x.acos();
        for j in 0..n_phi {
            let phi = j as f64 * dphi;
            let f = ylm(i1, theta, phi) * ylm(i2, theta, phi) * ylm(i3, theta, phi).conj();
            total += w * dphi * f;
        }
    }
    total
}

/// `∫ Y_a conj(Y_b) dΩ` on an `n × n` grid.
pub fn overlap_quadrature(a: HarmonicIndex, b: HarmonicIndex, n: usize) -> Complex64 {
    let gl = GaussLegendre::new(n);
    let dphi = 2.0 * PI / n as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
        let theta = x.acos();
        for j in 0..n {
            let phi = j as f64 * dphi;
            total += w * dphi * ylm(a, theta, phi) * ylm(b, theta, phi).conj();
        }
    }
    total
}

/// Exact Gaunt coefficient as a signed square root of a rational times `1/sqrt(4π)`.
pub fn gaunt_exact(i1: HarmonicIndex, i2: HarmonicIndex, i3: HarmonicIndex) -> SignedSqrt {
    if i1.m + i2.m != i3.m {
        return SignedSqrt::zero();
    }
    let (l1, l2, l3) = (i1.l as i64, i2.l as i64, i3.l as i64);
    if (l1 + l2 + l3) % 2 == 1 {
        return SignedSqrt::zero();
    }
    let w0 = wigner_3j(l1, l2, l3, 0, 0, 0);
    if w0.is_zero() {
        return SignedSqrt::zero();
    }
    let wm = wigner_3j(l1, l2, l3, i1.m as i64, i2.m as i64, -(i3.m as i64));
    if wm.is_zero() {
        return SignedSqrt::zero();
    }
    let dims = num_rational::BigRational::from_integer(((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1)).into());
    let mut out = w0.mul(&wm);
    out.square *= dims;
    if i3.m % 2 != 0 {
        out.negative = !out.negative;
    }
    out
}

/// `∫ Y₁ Y₂ conj(Y₃) dΩ` from Wigner 3j symbols; exactly zero outside the selection rules.
pub fn gaunt_closed_form(i1: HarmonicIndex, i2: HarmonicIndex, i3: HarmonicIndex) -> f64 {
    let g = gaunt_exact(i1, i2, i3);
    if g.is_zero() {
        0.0
    } else {
        g.to_f64() / (4.0 * PI).sqrt()
    }
}

/// `Σ_{m₁+m₂=M} x_{m₁} x_{m₂} ∫ Y_{l_c m₁} Y_{l_c m₂} conj(Y_{l M}) dΩ` for `M = −l..=l`.
/// `x` is indexed by `m + l_c`.
pub fn quadratic_projection(l_c: u32, l: u32, x: &[Complex64]) -> Vec<Complex64> {
    let lc = l_c as i32;
    assert_eq!(x.len(), (2 * l_c + 1) as usize);
    (-(l as i32)..=l as i32)
        .map(|mm| {
            let mut acc = Complex64::new(0.0, 0.0);
            for m1 in -lc..=lc {
                let m2 = mm - m1;
                if m2.abs() > lc {
                    continue;
                }
                let g = gaunt_closed_form(
                    HarmonicIndex { l: l_c, m: m1 },
                    HarmonicIndex { l: l_c, m: m2 },
                    HarmonicIndex { l, m: mm },
                );
                acc += g * x[(m1 + lc) as usize] * x[(m2 + lc) as usize];
            }
            acc
        })
        .collect()
}

/// Modes `(l, n)` excited by quadratic interactions of the critical `(l_c, n = 1)` modes.
pub fn interaction_support(l_c: u32) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = (1..=2 * l_c).map(|l| (l, 0)).collect();
    out.push((0, 2));
    let lc = l_c as i32;
    for l in 1..=2 * l_c {
        let reachable = (-(l as i32)..=l as i32).any(|mm| {
            (-lc..=lc).any(|m1| {
                let m2 = mm - m1;
                m2.abs() <= lc
                    && !gaunt_exact(
                        HarmonicIndex { l: l_c, m: m1 },
                        HarmonicIndex { l: l_c, m: m2 },
                        HarmonicIndex { l, m: mm },
                    )
                    .is_zero()
            })
        });
        if reachable {
            out.push((l, 2));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub max_degree: u32,
    pub triples: usize,
    pub nonzero: usize,
    pub max_deviation: f64,
    pub worst: Option<[HarmonicIndex; 3]>,
    pub selection_rules_exact: bool,
}

impl OracleReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_deviation < tol && self.selection_rules_exact
    }
}

/// Compares quadrature with the closed form on every triple of degree at most `max_degree`.
///
/// All integrals share one exact grid; the φ sum is separable and evaluated once per
/// net azimuthal wavenumber.
pub fn oracle_agreement(max_degree: u32) -> Result<OracleReport> {
    if max_degree > MAX_CHECK_DEGREE {
        return Err(Error::InvalidParams(format!(
            "harmonics check degree {max_degree} exceeds the cap {MAX_CHECK_DEGREE}"
        )));
    }
    let idx = HarmonicIndex::all_up_to(max_degree);
    let n_theta = (3 * max_degree + 1) as usize;
    let n_phi = (3 * max_degree + 1) as usize;
    let gl = GaussLegendre::new(n_theta);
    let thetas: Vec<f64> = gl.nodes.iter().map(|x| x.acos()).collect();

    // θ-profiles P̄ with the reflection sign folded in; φ dependence is e^{imφ}
    let profile: Vec<Vec<f64>> = idx
        .iter()
        .map(|i| {
            let ma = i.m.unsigned_abs();
            let sign = if i.m < 0 && ma % 2 == 1 { -1.0 } else { 1.0 };
            thetas.iter().map(|&t| sign * legendre_normalized(i.l, ma, t)).collect()
        })
        .collect();

    let dphi = 2.0 * PI / n_phi as f64;
    let mut phi_sums: HashMap<i32, Complex64> = HashMap::new();
    let mut phi_sum = |k: i32| -> Complex64 {
        *phi_sums
            .entry(k)
            .or_insert_with(|| (0..n_phi).map(|j| dphi * phase(k, j as f64 * dphi)).sum())
    };

    let mut report = OracleReport {
        max_degree,
        triples: 0,
        nonzero: 0,
        max_deviation: 0.0,
        worst: None,
        selection_rules_exact: true,
    };
    for (a, ia) in idx.iter().enumerate() {
        for (b, ib) in idx.iter().enumerate() {
            let pab: Vec<f64> = (0..n_theta).map(|t| gl.weights[t] * profile[a][t] * profile[b][t]).collect();
            for (c, ic) in idx.iter().enumerate() {
                let theta_sum: f64 = (0..n_theta).map(|t| pab[t] * profile[c][t]).sum();
                let quad = theta_sum * phi_sum(ia.m + ib.m - ic.m);
                let exact = gaunt_closed_form(*ia, *ib, *ic);
                let dev = (quad - exact).norm();
                report.triples += 1;
                if exact != 0.0 {
                    report.nonzero += 1;
                }
                let allowed = ia.m + ib.m == ic.m
                    && ic.l <= ia.l + ib.l
                    && ic.l >= ia.l.abs_diff(ib.l)
                    && (ia.l + ib.l + ic.l) % 2 == 0;
                if !allowed && exact != 0.0 {
                    report.selection_rules_exact = false;
                }
                if dev > report.max_deviation {
                    report.max_deviation = dev;
                    report.worst = Some([*ia, *ib, *ic]);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(l: u32, m: i32) -> HarmonicIndex {
        HarmonicIndex::new(l, m).unwrap()
    }

    #[test]
    fn low_degree_closed_forms() {
        let (t, p) = (0.7, 1.3);
        assert!((ylm(idx(0, 0), t, p) - 0.5 / PI.sqrt()).norm() < 1e-15);
        assert!((ylm(idx(1, 0), t, p) - (3.0 / (4.0 * PI)).sqrt() * t.cos()).norm() < 1e-15);
        let y11 = -(3.0 / (8.0 * PI)).sqrt() * t.sin() * phase(1, p);
        assert!((ylm(idx(1, 1), t, p) - y11).norm() < 1e-15);
        let y22 = 0.25 * (15.0 / (2.0 * PI)).sqrt() * t.sin().powi(2) * phase(2, p);
        assert!((ylm(idx(2, 2), t, p) - y22).norm() < 1e-15);
        let y21 = -0.5 * (15.0 / (2.0 * PI)).sqrt() * t.sin() * t.cos() * phase(1, p);
        assert!((ylm(idx(2, 1), t, p) - y21).norm() < 1e-15);
    }

    #[test]
    fn rejects_order_above_degree() {
        assert!(HarmonicIndex::new(2, 3).is_err());
        assert!(HarmonicIndex::new(2, -2).is_ok());
    }

    #[test]
    fn orthonormal_up_to_degree_eight() {
        let all = HarmonicIndex::all_up_to(8);
        for a in &all {
            for b in &all {
                let v = overlap_quadrature(*a, *b, 17);
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((v - expected).norm() < 1e-12, "{a:?} {b:?}: {v}");
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let h = 1e-6;
        for l in 0..=6 {
            for m in -(l as i32)..=l as i32 {
                let i = idx(l, m);
                for &(t, p) in &[(0.3, 0.4), (1.2, 2.9), (2.8, 5.1)] {
                    let g = ylm_gradient(i, t, p);
                    assert!((g.value - ylm(i, t, p)).norm() < 1e-14);
                    let dt = (ylm(i, t + h, p) - ylm(i, t - h, p)) / (2.0 * h);
                    let dp = (ylm(i, t, p + h) - ylm(i, t, p - h)) / (2.0 * h) / t.sin();
                    assert!((g.d_theta - dt).norm() < 1e-7, "{i:?} dθ {} vs {}", g.d_theta, dt);
                    assert!((g.d_phi_over_sin - dp).norm() < 1e-7, "{i:?} dφ {} vs {}", g.d_phi_over_sin, dp);
                }
            }
        }
    }

    #[test]
    fn gradient_finite_at_poles() {
        for l in 0..=5 {
            for m in -(l as i32)..=l as i32 {
                for t in [0.0, PI] {
                    let g = ylm_gradient(idx(l, m), t, 0.8);
                    assert!(g.d_theta.is_finite() && g.d_phi_over_sin.is_finite());
                    if m.abs() != 1 {
                        assert!(g.d_theta.norm() < 1e-12 && g.d_phi_over_sin.norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn triple_product_constant() {
        let v = triple_product_quadrature(idx(0, 0), idx(0, 0), idx(0, 0));
        assert!((v - 0.5 / PI.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn azimuthal_selection_in_quadrature() {
        let v = triple_product_quadrature(idx(2, 1), idx(3, 1), idx(4, 1));
        assert!(v.norm() < 1e-14, "{v}");
        assert_eq!(gaunt_closed_form(idx(2, 1), idx(3, 1), idx(4, 1)), 0.0);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let a = gaunt_closed_form(idx(1, 0), idx(1, 0), idx(2, 0));
        let b = triple_product_quadrature(idx(1, 0), idx(1, 0), idx(2, 0));
        assert!((b - a).norm() < 1e-12);
        // Y10² = (1/sqrt(4π)) [Y00 + (2/sqrt5) Y20]
        assert!((a - 1.0 / (5.0 * PI).sqrt()).abs() < 1e-15);

        let a = gaunt_closed_form(idx(10, 0), idx(10, 0), idx(20, 0));
        let b = triple_product_quadrature(idx(10, 0), idx(10, 0), idx(20, 0));
        assert!((b - a).norm() < 1e-12, "{a} {b}");
    }

    #[test]
    fn closed_form_is_symmetric_in_first_pair() {
        for (a, b, c) in [((2, 1), (3, -2), (3, -1)), ((4, 2), (2, 2), (6, 4)), ((5, -3), (3, 1), (4, -2))] {
            let (i1, i2, i3) = (idx(a.0, a.1), idx(b.0, b.1), idx(c.0, c.1));
            assert_eq!(gaunt_closed_form(i1, i2, i3), gaunt_closed_form(i2, i1, i3));
        }
    }

    #[test]
    fn odd_parity_triple_vanishes() {
        for m1 in -1..=1 {
            for m2 in -1..=1 {
                for m3 in -1..=1 {
                    assert_eq!(gaunt_closed_form(idx(1, m1), idx(1, m2), idx(1, m3)), 0.0);
                }
            }
        }
    }

    #[test]
    fn doubling_nodes_leaves_quadrature_unchanged() {
        for (a, b, c) in [((2, 1), (3, -2), (3, -1)), ((4, 2), (2, 2), (6, 4)), ((1, 0), (1, 0), (2, 0))] {
            let (i1, i2, i3) = (idx(a.0, a.1), idx(b.0, b.1), idx(c.0, c.1));
            let (nt, np) = minimal_nodes(i1, i2, i3);
            let v1 = triple_product_with_nodes(i1, i2, i3, nt, np);
            let v2 = triple_product_with_nodes(i1, i2, i3, 2 * nt, 2 * np);
            assert!((v1 - v2).norm() < 1e-13);
        }
    }

    #[test]
    fn support_sets() {
        assert_eq!(interaction_support(1), vec![(1, 0), (2, 0), (0, 2), (2, 2)]);
        assert_eq!(interaction_support(2), vec![(1, 0), (2, 0), (3, 0), (4, 0), (0, 2), (2, 2), (4, 2)]);
    }

    #[test]
    fn oracle_agreement_small_degree() {
        let r = oracle_agreement(3).unwrap();
        assert!(r.passed(1e-12), "{r:?}");
        assert_eq!(r.triples, 16usize.pow(3));
        assert!(oracle_agreement(MAX_CHECK_DEGREE + 1).is_err());
    }
}
