//! Transition numbers `q₁`, `q₂` of the first steady bifurcation, the
//! center-manifold coefficients behind them, and the threshold `R*` where the
//! transition changes type.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::params::{r0, r1, regime, sigma_crit, Params, Regime};
use crate::roots::bisect;
use crate::spectrum::eigenvalues;
use crate::{Error, Result};

const PI2: f64 = PI * PI;

/// Relative distance to `R₀` below which the coefficients are refused.
pub const POLE_TOL: f64 = 1e-9;
/// Relative distance to `R₀` below which results carry a warning flag.
pub const NEAR_POLE_WARN: f64 = 1e-6;
/// `|β f|` below this makes a branch singular.
pub const BRANCH_TOL: f64 = 1e-12;
/// Allowed relative imaginary residue of a branch sum.
pub const REALNESS_TOL: f64 = 1e-9;
/// `|q|` below this is reported as marginal.
pub const MARGINAL_TOL: f64 = 1e-10;
/// Absolute tolerance of the `R*` bisection.
pub const R_STAR_TOL: f64 = 1e-6;

/// Interaction prefactors for `(l_c, l)`.
const PREFACTOR_1_2: f64 = -3.0 * PI / 80.0;
const PREFACTOR_2_2: f64 = -45.0 * PI / 784.0;
const PREFACTOR_2_4: f64 = -5.0 * PI / 294.0;

/// Degrees `l` of the `n = 2` modes with a nonzero interaction term.
pub fn interaction_degrees(lc: u32) -> Result<&'static [u32]> {
    match lc {
        1 => Ok(&[2]),
        2 => Ok(&[2, 4]),
        other => Err(Error::UnsupportedDegree(other)),
    }
}

fn prefactor(lc: u32, l: u32) -> Result<f64> {
    match (lc, l) {
        (1, 2) => Ok(PREFACTOR_1_2),
        (2, 2) => Ok(PREFACTOR_2_2),
        (2, 4) => Ok(PREFACTOR_2_4),
        _ => Err(Error::UnsupportedInteraction { lc, l }),
    }
}

/// Branch-resolved coefficients for one interaction degree `l` (vertical index 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCoefficients {
    pub l: u32,
    pub beta: [Complex64; 3],
    pub a: [Complex64; 3],
    pub b: [Complex64; 3],
    pub c: [Complex64; 3],
    pub f: [Complex64; 3],
}

impl BranchCoefficients {
    /// `c_k / (β_k f_k)` per branch.
    pub fn ratios(&self) -> Result<[Complex64; 3]> {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let bf = self.beta[k] * self.f[k];
            if !(bf.norm() >= BRANCH_TOL) {
                return Err(Error::SingularBranch {
                    l: self.l,
                    k: k + 1,
                    value: bf.norm(),
                });
            }
            *slot = self.c[k] / bf;
        }
        Ok(out)
    }

    /// `Σ_k c_k² / (β_k f_k)`, checked to be real.
    pub fn branch_sum(&self) -> Result<f64> {
        let ratios = self.ratios()?;
        let sum: Complex64 = (0..3).map(|k| self.c[k] * ratios[k]).sum();
        real_part(sum)
    }
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > REALNESS_TOL * z.norm() {
        return Err(Error::NotReal { residue: z.im.abs() / z.norm() });
    }
    Ok(z.re)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxCoefficients {
    pub lc: u32,
    pub branches: Vec<BranchCoefficients>,
    pub g: f64,
    pub r0: f64,
    pub near_pole: bool,
}

impl AuxCoefficients {
    pub fn for_degree(&self, l: u32) -> Option<&BranchCoefficients> {
        self.branches.iter().find(|b| b.l == l)
    }
}

struct Setup {
    lc: u32,
    alpha_c_sq: f64,
    r0: f64,
    r1: f64,
    near_pole: bool,
}

fn setup(params: &Params) -> Result<Setup> {
    let reg = regime(params)?;
    if reg.regime != Regime::SteadyMultiEquilibria {
        return Err(Error::NotSteadyRegime { k: reg.k });
    }
    let crit = sigma_crit(params.aspect())?;
    interaction_degrees(crit.lc)?;
    let gap = (reg.r0 - params.rayleigh()).abs();
    if gap < POLE_TOL * reg.r0.abs() {
        return Err(Error::PoleAtR0 {
            r: params.rayleigh(),
            r0: reg.r0,
        });
    }
    Ok(Setup {
        lc: crit.lc,
        alpha_c_sq: crit.alpha_sq,
        r0: reg.r0,
        r1: reg.r1,
        near_pole: gap < NEAR_POLE_WARN * reg.r0.abs(),
    })
}

fn branch_coefficients(l: u32, alpha_c_sq: f64, params: &Params) -> BranchCoefficients {
    let (pr, le, r, rt) = (params.pr(), params.le(), params.rayleigh(), params.saline_rayleigh());
    let sigma = params.sigma();
    let alpha_sq = params.wavenumber_sq(l);
    let base = alpha_sq + 4.0 * PI2;
    let crit = PI2 + alpha_c_sq;
    let beta = eigenvalues(l, 2, params).betas;
    let a: [Complex64; 3] = std::array::from_fn(|k| le * base + beta[k]);
    let b: [Complex64; 3] = std::array::from_fn(|k| base + beta[k]);
    let c = std::array::from_fn(|k| {
        alpha_c_sq * alpha_c_sq / (crit * crit) * (sigma + crit * pr * (r / b[k] - rt / (a[k] * le)))
    });
    let f = std::array::from_fn(|k| 4.0 * PI2 + alpha_sq * (1.0 + pr * (r / (b[k] * b[k]) - rt / (a[k] * a[k]))));
    BranchCoefficients { l, beta, a, b, c, f }
}

/// Auxiliary coefficients `a, b, c, f` per interaction degree and branch, and `g`.
pub fn aux_coefficients(params: &Params) -> Result<AuxCoefficients> {
    let s = setup(params)?;
    let (pr, le) = (params.pr(), params.le());
    let crit = PI2 + s.alpha_c_sq;
    let g = s.alpha_c_sq / (crit * crit) * pr * (1.0 - le) / le * (s.r0 - params.rayleigh());
    let branches = interaction_degrees(s.lc)?
        .iter()
        .map(|&l| branch_coefficients(l, s.alpha_c_sq, params))
        .collect();
    Ok(AuxCoefficients {
        lc: s.lc,
        branches,
        g,
        r0: s.r0,
        near_pole: s.near_pole,
    })
}

/// Interaction of the critical modes with the horizontally uniform `n = 2` modes.
pub fn d_zero_mode(params: &Params) -> Result<f64> {
    let s = setup(params)?;
    let le = params.le();
    let r = params.rayleigh();
    Ok((1.0 + le) * s.alpha_c_sq.powi(2) * (s.r1 - r) / (16.0 * PI * le * (s.r0 - r)))
}

/// Interaction of the critical modes with the degree-`l`, `n = 2` modes.
pub fn d_higher(l: u32, params: &Params) -> Result<f64> {
    let aux = aux_coefficients(params)?;
    let pref = prefactor(aux.lc, l)?;
    let branch = aux.for_degree(l).ok_or(Error::UnsupportedInteraction { lc: aux.lc, l })?;
    Ok(pref / aux.g * branch.branch_sum()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// `q > 0`: continuous transition to an attractor homeomorphic to `S^{2 l_c}`.
    TypeI,
    /// `q < 0`: jump transition, no steady state bifurcates on `σ > σ_c`.
    TypeII,
    Marginal,
}

impl Classification {
    pub fn of(q: f64) -> Self {
        if q.abs() < MARGINAL_TOL {
            Classification::Marginal
        } else if q > 0.0 {
            Classification::TypeI
        } else {
            Classification::TypeII
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DTerm {
    /// `(l_c,1),(l,2)`
    pub label: String,
    pub l: u32,
    pub value: f64,
}

fn d_label(lc: u32, l: u32) -> String {
    format!("({lc},1),({l},2)")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub lc: u32,
    pub q: f64,
    pub d_terms: Vec<DTerm>,
    pub classification: Classification,
    /// `β¹_{l_c,1}(σ) / q`, present when Type-I above criticality.
    pub attractor_radius_sq: Option<f64>,
    pub critical_growth: f64,
    pub cm_coeffs: CenterManifoldCoeffs,
    pub near_pole: bool,
}

impl TransitionReport {
    pub fn d_term(&self, l: u32) -> Option<f64> {
        self.d_terms.iter().find(|d| d.l == l).map(|d| d.value)
    }
}

/// `q_{l_c}` and its decomposition into interaction terms.
pub fn transition_number(params: &Params) -> Result<TransitionReport> {
    let lc = sigma_crit(params.aspect())?.lc;
    interaction_degrees(lc)?;
    let aux = aux_coefficients(params)?;
    let mut d_terms = vec![DTerm {
        label: d_label(lc, 0),
        l: 0,
        value: d_zero_mode(params)?,
    }];
    for branch in &aux.branches {
        d_terms.push(DTerm {
            label: d_label(lc, branch.l),
            l: branch.l,
            value: prefactor(lc, branch.l)? / aux.g * branch.branch_sum()?,
        });
    }
    let q: f64 = d_terms.iter().map(|d| d.value).sum();
    let classification = Classification::of(q);
    let critical_growth = eigenvalues(lc, 1, params).betas[0].re;
    let crit = sigma_crit(params.aspect())?;
    let attractor_radius_sq =
        (classification == Classification::TypeI && params.sigma() > crit.sigma_c).then(|| critical_growth / q);
    Ok(TransitionReport {
        lc,
        q,
        d_terms,
        classification,
        attractor_radius_sq,
        critical_growth,
        cm_coeffs: cm_from_aux(&aux, params),
        near_pole: aux.near_pole,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub lc: u32,
    /// Root of `q_{l_c}` on the critical surface.
    pub r_star: f64,
    pub r0: f64,
    pub r1: f64,
}

/// Rayleigh number `R*` on the critical surface where `q_{l_c}` changes sign.
///
/// The search covers `R̃ ≥ 0` up to the pole at `R₀`.
pub fn critical_r_star(le: f64, pr: f64, aspect: f64) -> Result<Threshold> {
    let crit = sigma_crit(aspect)?;
    interaction_degrees(crit.lc)?;
    let r0v = r0(pr, le, crit.sigma_c);
    let r1v = r1(le, crit.sigma_c);
    let lo = crit.sigma_c * (1.0 + 1e-6);
    let hi = r0v * (1.0 - 1e-6);
    if !(le < 1.0) || !(lo < hi) {
        return Err(Error::NoSignChange { lo, hi });
    }
    let q_at = |rr: f64| -> f64 {
        Params::at_criticality(pr, le, aspect, rr)
            .and_then(|p| transition_number(&p))
            .map(|t| t.q)
            .unwrap_or(f64::NAN)
    };
    let r_star = bisect(q_at, lo, hi, R_STAR_TOL).ok_or(Error::NoSignChange { lo, hi })?;
    Ok(Threshold {
        lc: crit.lc,
        r_star,
        r0: r0v,
        r1: r1v,
    })
}

/// One family `y_{lM2}^k = values[k] · Q_{lM}(x)` of center-manifold coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmFamily {
    pub l: u32,
    /// Constant multiplying `c_k / (β_k f_k)`.
    pub constant: f64,
    pub values: [Complex64; 3],
}

/// Coefficients of the center-manifold function on the `n = 2` modes.
///
/// `a02[0]` multiplies the temperature mode and `a02[1]` the salinity mode
/// of `(l, n) = (0, 2)`; both act on [`quadratic_form`] with `l = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterManifoldCoeffs {
    pub lc: u32,
    pub a02: [f64; 2],
    pub families: Vec<CmFamily>,
}

impl CenterManifoldCoeffs {
    pub fn family(&self, l: u32) -> Option<&CmFamily> {
        self.families.iter().find(|f| f.l == l)
    }
}

fn cm_constant(lc: u32, l: u32) -> Result<f64> {
    match (lc, l) {
        (1, 2) => Ok(-0.25 * (3.0 * PI / 10.0).sqrt()),
        (2, 2) => Ok(3.0 * (5.0 * PI).sqrt() / 56.0),
        (2, 4) => Ok(-(5.0 * PI / 14.0).sqrt() / 6.0),
        _ => Err(Error::UnsupportedInteraction { lc, l }),
    }
}

fn cm_from_aux(aux: &AuxCoefficients, params: &Params) -> CenterManifoldCoeffs {
    let alpha_sq = params.wavenumber_sq(aux.lc);
    let a1 = alpha_sq * alpha_sq / (16.0 * PI2 * (PI2 + alpha_sq));
    let a2 = params.salinity().value() * a1 / params.le().powi(2);
    let families = aux
        .branches
        .iter()
        .map(|b| {
            let constant = cm_constant(aux.lc, b.l).expect("interaction degrees are supported");
            let values = std::array::from_fn(|k| constant * b.c[k] / (b.beta[k] * b.f[k]));
            CmFamily { l: b.l, constant, values }
        })
        .collect();
    CenterManifoldCoeffs {
        lc: aux.lc,
        a02: [a1, a2],
        families,
    }
}

pub fn center_manifold_coeffs(params: &Params) -> Result<CenterManifoldCoeffs> {
    let aux = aux_coefficients(params)?;
    for b in &aux.branches {
        b.ratios()?;
    }
    Ok(cm_from_aux(&aux, params))
}

/// Quadratic form `Q_{lM}(x)` for `M = −l..=l`, so that the center-manifold
/// amplitude of `Ψ_{lM2}^k` is `coefficient_k · Q_{lM}(x)`.
///
/// `x` is indexed by `m + l_c`.
pub fn quadratic_form(lc: u32, l: u32, x: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.len() != (2 * lc + 1) as usize {
        return Err(Error::InvalidParams(format!(
            "expected {} amplitudes, got {}",
            2 * lc + 1,
            x.len()
        )));
    }
    let at = |m: i32| x[(m + lc as i32) as usize];
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let s7 = 7f64.sqrt();
    let out = match (lc, l) {
        (1, 0) => vec![at(0) * at(0) - 2.0 * at(-1) * at(1)],
        (1, 2) => vec![
            at(-1) * at(-1),
            s2 * at(-1) * at(0),
            (2.0f64 / 3.0).sqrt() * (at(0) * at(0) + at(-1) * at(1)),
            s2 * at(1) * at(0),
            at(1) * at(1),
        ],
        (2, 0) => vec![at(0) * at(0) - 2.0 * at(-1) * at(1) + 2.0 * at(-2) * at(2)],
        (2, 2) => vec![
            4.0 * at(0) * at(-2) - s6 * at(-1) * at(-1),
            2.0 * (s6 * at(1) * at(-2) - at(0) * at(-1)),
            2.0 * (2.0 * at(2) * at(-2) + at(1) * at(-1) - at(0) * at(0)),
            2.0 * (s6 * at(2) * at(-1) - at(0) * at(1)),
            4.0 * at(0) * at(2) - s6 * at(1) * at(1),
        ],
        (2, 4) => vec![
            at(-2) * at(-2),
            s2 * at(-2) * at(-1),
            (2.0 * at(-1) * at(-1) + s6 * at(0) * at(-2)) / s7,
            (2.0f64 / 7.0).sqrt() * (at(1) * at(-2) + s6 * at(0) * at(-1)),
            (2.0f64 / 35.0).sqrt() * (4.0 * at(1) * at(-1) + at(2) * at(-2) + 3.0 * at(0) * at(0)),
            (2.0f64 / 7.0).sqrt() * (at(-1) * at(2) + s6 * at(0) * at(1)),
            (2.0 * at(1) * at(1) + s6 * at(0) * at(2)) / s7,
            s2 * at(2) * at(1),
            at(2) * at(2),
        ],
        _ => return Err(Error::UnsupportedInteraction { lc, l }),
    };
    Ok(out)
}
