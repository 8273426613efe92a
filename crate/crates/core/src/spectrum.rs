//! Eigenpairs of the linearised Boussinesq operator with free-slip walls.
//!
//! With `H = sin nπz` and the horizontal structure `Y_lm`, every mode with
//! `l ≥ 1, n ≥ 1` satisfies the dispersion cubic `β³ + b₂β² + b₁β + b₀ = 0`
//! whose coefficients depend on `(l, n)` only through `A = n²π² + α_l²`.
//! The remaining families are the toroidal shear modes (`n = 0`) and the
//! horizontally uniform temperature/salinity modes (`l = 0`).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic::Cubic;
use crate::params::{regime, sigma_crit, Params, Regime};
use crate::{Error, Result};

/// Denominators below this magnitude make a mode singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// `|β¹_{l_c,1}|` below this counts as zero growth at `σ = σ_c`.
pub const CRITICAL_ZERO_TOL: f64 = 1e-7;

/// Relative distance of `σ` from `σ_c` treated as "at criticality".
pub const SIGMA_MATCH_TOL: f64 = 1e-10;

pub const DEFAULT_SCAN_L: u32 = 50;
pub const DEFAULT_SCAN_N: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub l: u32,
    pub m: i32,
    pub n: u32,
    /// Branch of the dispersion cubic, 1-based.
    pub k: u8,
}

impl ModeIndex {
    pub fn new(l: u32, m: i32, n: u32, k: u8) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::InvalidParams(format!("|m| = {} exceeds l = {l}", m.unsigned_abs())));
        }
        if l == 0 && n == 0 {
            return Err(Error::InvalidParams("(l, n) = (0, 0) is not a mode".into()));
        }
        let max_k = match (l, n) {
            (0, _) => 2,
            (_, 0) => 1,
            _ => 3,
        };
        if k == 0 || k > max_k {
            return Err(Error::InvalidParams(format!("branch k = {k} out of range 1..={max_k}")));
        }
        Ok(ModeIndex { l, m, n, k })
    }
}

/// Roots of one dispersion cubic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumTriple {
    /// Ordered by descending real part, ties by descending imaginary part.
    pub betas: [Complex64; 3],
    pub cubic: Cubic,
}

impl SpectrumTriple {
    /// Smallest pairwise distance between roots; near zero flags a repeated root.
    pub fn min_separation(&self) -> f64 {
        let b = &self.betas;
        (b[0] - b[1]).norm().min((b[0] - b[2]).norm()).min((b[1] - b[2]).norm())
    }
}

fn vertical_sq(n: u32) -> f64 {
    let n = n as f64;
    n * n * PI * PI
}

/// Coefficients `(b₀, b₁, b₂)` of the dispersion cubic for `l ≥ 1, n ≥ 1`.
pub fn dispersion_coefficients(l: u32, n: u32, params: &Params) -> Cubic {
    let alpha_sq = params.wavenumber_sq(l);
    let a = vertical_sq(n) + alpha_sq;
    let (pr, le, r, rt) = (params.pr(), params.le(), params.rayleigh(), params.saline_rayleigh());
    let b0 = a.powi(3) * le * pr - alpha_sq * pr * (le * r - rt);
    let b1 = a * a * (le + pr + le * pr) - alpha_sq / a * pr * (r - rt);
    let b2 = a * (1.0 + le + pr);
    Cubic::new(b0, b1, b2)
}

pub fn eigenvalues(l: u32, n: u32, params: &Params) -> SpectrumTriple {
    let cubic = dispersion_coefficients(l, n, params);
    SpectrumTriple {
        betas: cubic.roots(),
        cubic,
    }
}

/// Toroidal shear mode `β_{l0} = −Pr α_l²`.
pub fn eigenvalue_shear(l: u32, params: &Params) -> f64 {
    -params.pr() * params.wavenumber_sq(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeanField {
    Temperature,
    Salinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanMode {
    pub beta: f64,
    /// The only nonzero component of the eigenvector, `sin nπz` in that field.
    pub field: MeanField,
}

/// The two horizontally uniform modes of vertical index `n`.
pub fn eigenvalues_horizontal_mean(n: u32, params: &Params) -> [MeanMode; 2] {
    let v = vertical_sq(n);
    [
        MeanMode {
            beta: -v,
            field: MeanField::Temperature,
        },
        MeanMode {
            beta: -params.le() * v,
            field: MeanField::Salinity,
        },
    ]
}

/// Amplitudes of one eigenvector `Ψ_lmn^k`:
///
/// ```text
/// u = u_scale ∇Y_lm cos nπz,  w = w_scale Y_lm sin nπz,
/// T = theta Y_lm sin nπz,     S = phi Y_lm sin nπz
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeCoefficients {
    pub theta: Complex64,
    pub phi: Complex64,
    /// `nπ`
    pub u_scale: f64,
    /// `α_l²`
    pub w_scale: f64,
    pub adjoint: bool,
}

pub fn mode_coefficients(idx: &ModeIndex, beta: Complex64, params: &Params, adjoint: bool) -> Result<ModeCoefficients> {
    let (l, n) = (idx.l, idx.n);
    if l == 0 || n == 0 {
        return Err(Error::InvalidParams("mode coefficients need l >= 1 and n >= 1".into()));
    }
    let alpha_sq = params.wavenumber_sq(l);
    let a = vertical_sq(n) + alpha_sq;
    let s = params.salinity().value();
    let beta = if adjoint { beta.conj() } else { beta };
    let thermal = a + beta;
    let saline = params.le() * a + beta;
    for d in [thermal, saline] {
        if d.norm() < SINGULAR_TOL {
            return Err(Error::SingularMode { l, n, denominator: d.norm() });
        }
    }
    let (theta, phi) = if adjoint {
        let pr = params.pr();
        (
            pr * params.rayleigh() * alpha_sq / thermal,
            -pr * params.saline_rayleigh() * alpha_sq * s / saline,
        )
    } else {
        (alpha_sq / thermal, alpha_sq * s / saline)
    };
    Ok(ModeCoefficients {
        theta,
        phi,
        u_scale: n as f64 * PI,
        w_scale: alpha_sq,
        adjoint,
    })
}

/// `⟨Ψ_lmn^{k}, Ψ_lmn^{j*}⟩` over `S²_r × (0, 1)` for orthonormal `Y_lm` on the unit sphere.
///
/// Vanishes for distinct roots `β_k ≠ β_j` of the same cubic.
pub fn mode_inner_product(l: u32, n: u32, beta_k: Complex64, beta_j: Complex64, params: &Params) -> Result<Complex64> {
    let idx = ModeIndex::new(l, 0, n, 1)?;
    let direct = mode_coefficients(&idx, beta_k, params, false)?;
    let dual = mode_coefficients(&idx, beta_j, params, true)?;
    let alpha_sq = direct.w_scale;
    let r2 = params.aspect().powi(2);
    let velocity = direct.u_scale.powi(2) * alpha_sq + alpha_sq * alpha_sq;
    Ok(0.5 * r2 * (velocity + direct.theta * dual.theta.conj() + direct.phi * dual.phi.conj()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaPosition {
    Below,
    At,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PesReport {
    pub sigma: f64,
    pub sigma_c: f64,
    pub lc: u32,
    pub position: SigmaPosition,
    /// `β¹_{l_c,1}`
    pub critical_growth: Complex64,
    /// Largest real part over every other mode in the scan.
    pub max_noncritical: f64,
    /// `(k, l, n)` of that mode; `k = 0` marks the toroidal and mean families.
    pub argmax: (u8, u32, u32),
    /// Smallest root separation seen, to flag numerically repeated roots.
    pub min_root_separation: f64,
    pub pattern_holds: bool,
}

/// Scans the spectrum for `1 ≤ l ≤ l_max, 0 ≤ n ≤ n_max` (plus `l = 0`)
/// and checks that only `β¹_{l_c,1}` can reach the imaginary axis, with its
/// sign following that of `σ − σ_c`.
pub fn verify_pes(params: &Params, l_max: u32, n_max: u32) -> Result<PesReport> {
    let reg = regime(params)?;
    if reg.regime != Regime::SteadyMultiEquilibria {
        return Err(Error::NotSteadyRegime { k: reg.k });
    }
    let lc = sigma_crit(params.aspect())?.lc;
    if l_max < 2 * lc + 2 || n_max < 2 * lc + 2 {
        return Err(Error::InvalidParams(format!("scan bounds must be at least {}", 2 * lc + 2)));
    }

    let critical = eigenvalues(lc, 1, params).betas[0];

    // per-degree maxima, reduced in index order
    let per_l: Vec<(f64, (u8, u32, u32), f64)> = (1..=l_max)
        .into_par_iter()
        .map(|l| {
            let mut best = (eigenvalue_shear(l, params), (0u8, l, 0u32));
            let mut sep = f64::INFINITY;
            for n in 1..=n_max {
                let triple = eigenvalues(l, n, params);
                sep = sep.min(triple.min_separation());
                let start = usize::from(l == lc && n == 1);
                for (k, b) in triple.betas.iter().enumerate().skip(start) {
                    if b.re > best.0 {
                        best = (b.re, (k as u8 + 1, l, n));
                    }
                }
            }
            (best.0, best.1, sep)
        })
        .collect();

    let mut max_noncritical = f64::NEG_INFINITY;
    let mut argmax = (0, 0, 0);
    let mut min_root_separation = f64::INFINITY;
    for n in 1..=n_max {
        for mode in eigenvalues_horizontal_mean(n, params) {
            if mode.beta > max_noncritical {
                max_noncritical = mode.beta;
                argmax = (0, 0, n);
            }
        }
    }
    for (value, at, sep) in per_l {
        min_root_separation = min_root_separation.min(sep);
        if value > max_noncritical {
            max_noncritical = value;
            argmax = at;
        }
    }
    if argmax.1 == l_max || argmax.2 == n_max {
        return Err(Error::ScanInconclusive { l: argmax.1, n: argmax.2 });
    }

    let (sigma, sigma_c) = (reg.sigma, reg.sigma_c);
    let position = if (sigma - sigma_c).abs() <= SIGMA_MATCH_TOL * sigma_c {
        SigmaPosition::At
    } else if sigma < sigma_c {
        SigmaPosition::Below
    } else {
        SigmaPosition::Above
    };
    let critical_ok = match position {
        SigmaPosition::Below => critical.re < 0.0,
        SigmaPosition::At => critical.norm() <= CRITICAL_ZERO_TOL,
        SigmaPosition::Above => critical.re > 0.0,
    };
    Ok(PesReport {
        sigma,
        sigma_c,
        lc,
        position,
        critical_growth: critical,
        max_noncritical,
        argmax,
        min_root_separation,
        pattern_holds: critical_ok && max_noncritical < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI2: f64 = PI * PI;

    fn lc1(le: f64, r: f64) -> Params {
        Params::at_criticality(7.5, le, 2.0 / PI, r).unwrap()
    }

    #[test]
    fn b0_vanishes_on_critical_surface() {
        let p = lc1(0.01, 620.0);
        let c = dispersion_coefficients(1, 1, &p);
        assert!(c.b0.abs() < 1e-6 * c.scale(), "{c:?}");
    }

    #[test]
    fn b2_direct_formula() {
        let p = lc1(0.01, 620.0);
        let c = dispersion_coefficients(1, 1, &p);
        assert!((c.b2 - 1.5 * PI2 * 8.51).abs() < 1e-12 * c.b2);
    }

    #[test]
    fn coefficients_match_printed_formula_transcription() {
        // independent transcription: α² = 6/r², A = 4π² + α²
        let p = Params::at_criticality(7.5, 0.5, 2.0 / PI, 700.0).unwrap();
        let (pr, le, r, rt) = (7.5, 0.5, 700.0, p.saline_rayleigh());
        let alpha2 = 6.0 * PI2 / 4.0;
        let big_a = 4.0 * PI2 + alpha2;
        let b0 = big_a * big_a * big_a * le * pr - alpha2 * pr * (le * r - rt);
        let b1 = big_a * big_a * (le + pr + le * pr) - alpha2 * pr * (r - rt) / big_a;
        let b2 = big_a * (1.0 + le + pr);
        let c = dispersion_coefficients(2, 2, &p);
        assert!((c.b0 - b0).abs() <= 1e-12 * b0.abs());
        assert!((c.b1 - b1).abs() <= 1e-12 * b1.abs());
        assert!((c.b2 - b2).abs() <= 1e-12 * b2.abs());
    }

    #[test]
    fn critical_root_is_zero() {
        for le in [0.01, 0.5, 5.0] {
            let s = eigenvalues(1, 1, &lc1(le, 620.0));
            assert!(s.betas[0].norm() < CRITICAL_ZERO_TOL, "{:?}", s.betas);
        }
    }

    #[test]
    fn critical_root_positive_above_threshold() {
        let p = lc1(0.01, 660.0);
        let p = p.with_sigma(p.sigma() * 1.01);
        let s = eigenvalues(1, 1, &p);
        assert!(s.betas[0].re > 0.0 && s.betas[0].im == 0.0);
    }

    #[test]
    fn shear_and_mean_modes() {
        let p = lc1(0.01, 620.0);
        assert!((eigenvalue_shear(1, &p) + 7.5 * PI2 / 2.0).abs() < 1e-12);
        assert!((eigenvalue_shear(3, &p) + 22.5 * PI2).abs() < 1e-11);
        let unit = Params::new(1.0, 0.5, 1.0, 0.0, 0.0).unwrap();
        assert!((eigenvalue_shear(2, &unit) + 6.0).abs() < 1e-15);

        let m = eigenvalues_horizontal_mean(1, &Params::new(7.5, 0.5, 1.0, 0.0, 0.0).unwrap());
        assert_eq!((m[0].beta, m[1].beta), (-PI2, -PI2 / 2.0));
        assert_eq!((m[0].field, m[1].field), (MeanField::Temperature, MeanField::Salinity));
        let m = eigenvalues_horizontal_mean(2, &Params::new(7.5, 0.01, 1.0, 0.0, 0.0).unwrap());
        assert!((m[0].beta + 4.0 * PI2).abs() < 1e-13 && (m[1].beta + 0.04 * PI2).abs() < 1e-13);
        let m = eigenvalues_horizontal_mean(2, &Params::new(7.5, 5.0, 1.0, 0.0, 0.0).unwrap());
        assert!((m[1].beta + 20.0 * PI2).abs() < 1e-12);
    }

    #[test]
    fn mode_index_validation() {
        assert!(ModeIndex::new(1, 2, 1, 1).is_err());
        assert!(ModeIndex::new(0, 0, 0, 1).is_err());
        assert!(ModeIndex::new(0, 0, 1, 3).is_err());
        assert!(ModeIndex::new(2, 0, 0, 2).is_err());
        assert!(ModeIndex::new(2, -2, 1, 3).is_ok());
    }

    #[test]
    fn critical_mode_temperature_amplitude() {
        let p = lc1(0.01, 620.0);
        let idx = ModeIndex::new(1, 0, 1, 1).unwrap();
        let c = mode_coefficients(&idx, Complex64::new(0.0, 0.0), &p, false).unwrap();
        let alpha2 = PI2 / 2.0;
        assert!((c.theta - alpha2 / (PI2 + alpha2)).norm() < 1e-15);
    }

    #[test]
    fn conjugate_eigenvalue_gives_conjugate_coefficients() {
        let p = Params::new(7.5, 0.3, 1.0, 900.0, -400.0).unwrap();
        let idx = ModeIndex::new(2, 1, 1, 1).unwrap();
        let beta = Complex64::new(-3.0, 7.0);
        for adjoint in [false, true] {
            let a = mode_coefficients(&idx, beta, &p, adjoint).unwrap();
            let b = mode_coefficients(&idx, beta.conj(), &p, adjoint).unwrap();
            assert!((a.theta - b.theta.conj()).norm() < 1e-15);
            assert!((a.phi - b.phi.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn singular_denominator_rejected() {
        let p = Params::new(7.5, 0.5, 1.0, 600.0, 0.0).unwrap();
        let idx = ModeIndex::new(1, 0, 1, 1).unwrap();
        let a = PI2 + p.wavenumber_sq(1);
        let err = mode_coefficients(&idx, Complex64::new(-a, 0.0), &p, false).unwrap_err();
        assert!(matches!(err, Error::SingularMode { .. }));
    }

    /// Residuals of the separated ODE system evaluated on `sin nπz` at collocation points.
    fn ode_residual(l: u32, n: u32, beta: Complex64, p: &Params, adjoint: bool) -> f64 {
        let idx = ModeIndex::new(l, 0, n, 1).unwrap();
        let c = mode_coefficients(&idx, beta, p, adjoint).unwrap();
        let alpha2 = p.wavenumber_sq(l);
        let nz = n as f64 * PI;
        let s = p.salinity().value();
        let (pr, r, rt, le) = (p.pr(), p.rayleigh(), p.saline_rayleigh(), p.le());
        let b = if adjoint { beta.conj() } else { beta };
        let mut worst: f64 = 0.0;
        for i in 1..8 {
            let z = i as f64 / 8.0;
            let h = (nz * z).sin();
            // (D² − α²) acting on sin nπz
            let lap = -(nz * nz + alpha2) * h;
            let lap2 = (nz * nz + alpha2).powi(2) * h;
            let (th, ph) = (c.theta * h, c.phi * h);
            let (momentum, heat, salt) = if adjoint {
                let w = alpha2 * h;
                (
                    pr * lap2 * alpha2 - alpha2 * (th + s * ph) - b * lap * alpha2,
                    -(nz * nz + alpha2) * th + pr * r * w - b * th,
                    -le * (nz * nz + alpha2) * ph - pr * rt * s * w - b * ph,
                )
            } else {
                (
                    pr * (lap2 - r * th + s * rt * ph) - b * lap,
                    -(nz * nz + alpha2) * th + alpha2 * h - b * th,
                    -le * (nz * nz + alpha2) * ph + s * alpha2 * h - b * ph,
                )
            };
            worst = worst.max(momentum.norm()).max(heat.norm()).max(salt.norm());
        }
        worst
    }

    #[test]
    fn eigenvectors_solve_the_linear_system() {
        let base = Params::new(7.5, 0.3, 1.1, 900.0, -400.0).unwrap();
        for p in [base, base.with_salinity(crate::params::SalinitySign::Minus), lc1(0.01, 640.0)] {
            for (l, n) in [(1, 1), (2, 2), (3, 1), (4, 3)] {
                let triple = eigenvalues(l, n, &p);
                let scale = triple.cubic.scale();
                for beta in triple.betas {
                    for adjoint in [false, true] {
                        let res = ode_residual(l, n, beta, &p, adjoint);
                        assert!(res < 1e-9 * scale, "l={l} n={n} adj={adjoint} res={res}");
                    }
                }
            }
        }
    }

    #[test]
    fn eigenvectors_are_biorthogonal_to_adjoints() {
        let p = Params::new(7.5, 0.3, 1.1, 900.0, -400.0).unwrap();
        for (l, n) in [(1, 1), (2, 2), (4, 2)] {
            let betas = eigenvalues(l, n, &p).betas;
            for (i, bi) in betas.iter().enumerate() {
                let diag = mode_inner_product(l, n, *bi, *bi, &p).unwrap().norm();
                for (j, bj) in betas.iter().enumerate() {
                    if i != j {
                        let off = mode_inner_product(l, n, *bi, *bj, &p).unwrap();
                        assert!(off.norm() < 1e-10 * diag, "({i},{j}): {off}");
                    }
                }
            }
        }
    }

    #[test]
    fn pes_three_way_pattern() {
        let p = lc1(0.01, 620.0);
        let sc = p.sigma();
        for (factor, pos) in [(0.99, SigmaPosition::Below), (1.0, SigmaPosition::At), (1.01, SigmaPosition::Above)] {
            let rep = verify_pes(&p.with_sigma(sc * factor), DEFAULT_SCAN_L, DEFAULT_SCAN_N).unwrap();
            assert_eq!(rep.position, pos);
            assert!(rep.pattern_holds, "{rep:?}");
        }
    }

    #[test]
    fn pes_rejects_oscillatory_regime_and_small_scans() {
        let p = lc1(0.01, 700.0);
        assert!(matches!(verify_pes(&p, 50, 50), Err(Error::NotSteadyRegime { .. })));
        assert!(verify_pes(&lc1(0.01, 620.0), 3, 50).is_err());
    }

    #[test]
    fn b0_sign_change_locates_sigma_c() {
        let p = lc1(0.5, 800.0);
        let sigma_c = p.sigma();
        let b0 = |s: f64| dispersion_coefficients(1, 1, &p.with_sigma(s)).b0;
        let root = crate::roots::bisect(b0, 0.5 * sigma_c, 2.0 * sigma_c, 1e-12 * sigma_c).unwrap();
        assert!((root - sigma_c).abs() < 1e-8 * sigma_c);
    }
}
