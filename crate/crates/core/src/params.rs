//! Nondimensional parameters, critical degree selection and the regime discriminant.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Aspect ratios closer than this to a threshold radius `r_l` are rejected.
pub const ASPECT_DEGENERACY_TOL: f64 = 1e-9;

const PI2: f64 = PI * PI;

/// Sign of `S₀ − S₁` (bottom minus top salinity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SalinitySign {
    #[default]
    Plus,
    Minus,
}

impl SalinitySign {
    pub fn value(self) -> f64 {
        match self {
            SalinitySign::Plus => 1.0,
            SalinitySign::Minus => -1.0,
        }
    }

    pub fn from_value(v: i32) -> Result<Self> {
        match v {
            1 => Ok(SalinitySign::Plus),
            -1 => Ok(SalinitySign::Minus),
            other => Err(Error::InvalidParams(format!("salinity sign must be +1 or -1, got {other}"))),
        }
    }
}

/// Nondimensional system parameters.
///
/// The saline Rayleigh number is a signed quantity: evaluating the
/// criticality constraint `R − R̃/Le = σ_c` below `σ_c` gives `R̃ < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pr: f64,
    le: f64,
    rayleigh: f64,
    saline_rayleigh: f64,
    aspect: f64,
    salinity: SalinitySign,
}

impl Params {
    pub fn new(pr: f64, le: f64, aspect: f64, rayleigh: f64, saline_rayleigh: f64) -> Result<Self> {
        let check = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(Error::InvalidParams(msg.to_owned())) };
        check(pr.is_finite() && pr > 0.0, "Pr must be positive and finite")?;
        check(le.is_finite() && le > 0.0, "Le must be positive and finite")?;
        check(le != 1.0, "Le = 1 is excluded")?;
        check(aspect.is_finite() && aspect > 0.0, "aspect ratio r must be positive and finite")?;
        check(rayleigh.is_finite(), "R must be finite")?;
        check(saline_rayleigh.is_finite(), "saline Rayleigh number must be finite")?;
        Ok(Params {
            pr,
            le,
            rayleigh,
            saline_rayleigh,
            aspect,
            salinity: SalinitySign::Plus,
        })
    }

    /// Parameters on the critical surface `σ = σ_c(r)`, fixing `R̃ = Le (R − σ_c)`.
    pub fn at_criticality(pr: f64, le: f64, aspect: f64, rayleigh: f64) -> Result<Self> {
        let crit = sigma_crit(aspect)?;
        Params::new(pr, le, aspect, rayleigh, 0.0).map(|p| p.with_sigma(crit.sigma_c))
    }

    /// Same `R`, with `R̃` moved so that the control parameter equals `sigma`.
    pub fn with_sigma(self, sigma: f64) -> Self {
        Params {
            saline_rayleigh: self.le * (self.rayleigh - sigma),
            ..self
        }
    }

    pub fn with_salinity(self, salinity: SalinitySign) -> Self {
        Params { salinity, ..self }
    }

    pub fn pr(&self) -> f64 {
        self.pr
    }

    pub fn le(&self) -> f64 {
        self.le
    }

    /// Thermal Rayleigh number `R`.
    pub fn rayleigh(&self) -> f64 {
        self.rayleigh
    }

    /// Saline Rayleigh number `R̃`.
    pub fn saline_rayleigh(&self) -> f64 {
        self.saline_rayleigh
    }

    pub fn aspect(&self) -> f64 {
        self.aspect
    }

    pub fn salinity(&self) -> SalinitySign {
        self.salinity
    }

    /// Control parameter `σ = R − R̃/Le`.
    pub fn sigma(&self) -> f64 {
        self.rayleigh - self.saline_rayleigh / self.le
    }

    pub fn wavenumber_sq(&self, l: u32) -> f64 {
        wavenumber_sq(l, self.aspect)
    }
}

/// Horizontal wavenumber `α_l² = l(l+1)/r²`.
pub fn wavenumber_sq(l: u32, r: f64) -> f64 {
    let l = l as f64;
    l * (l + 1.0) / (r * r)
}

/// Marginal Rayleigh number of degree `l` on the first vertical mode, `(π² + α²)³/α²`.
pub fn marginal_sigma(alpha_sq: f64) -> f64 {
    (PI2 + alpha_sq).powi(3) / alpha_sq
}

/// Aspect ratio at which degrees `l` and `l + 1` become critical together.
pub fn threshold_radius(l: u32) -> f64 {
    if l == 0 {
        return 0.0;
    }
    let l = l as f64;
    let sum = (l * (2.0 + l).powi(2)).cbrt() + (l * l * (2.0 + l)).cbrt();
    ((1.0 + l) * sum / PI2).sqrt()
}

/// The critical degree `l_c` with `r_{l_c − 1} < r < r_{l_c}`.
pub fn critical_degree(r: f64) -> Result<u32> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParams(format!("aspect ratio must be positive, got {r}")));
    }
    let mut l = 1;
    loop {
        let rl = threshold_radius(l);
        if (r - rl).abs() <= ASPECT_DEGENERACY_TOL {
            return Err(Error::CriticalAspectRatio { r, l });
        }
        if r < rl {
            return Ok(l);
        }
        l += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub sigma_c: f64,
    pub lc: u32,
    /// `α_{l_c}²`
    pub alpha_sq: f64,
}

/// Critical control parameter `σ_c = min_l (π² + α_l²)³/α_l²` and its minimiser.
pub fn sigma_crit(r: f64) -> Result<CriticalPoint> {
    let lc = critical_degree(r)?;
    let alpha_sq = wavenumber_sq(lc, r);
    Ok(CriticalPoint {
        sigma_c: marginal_sigma(alpha_sq),
        lc,
        alpha_sq,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `K > 0`: the first transition leads to multiple steady states.
    SteadyMultiEquilibria,
    /// `K < 0`: the first transition is oscillatory.
    Oscillatory,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub sigma: f64,
    pub sigma_c: f64,
    pub lc: u32,
    pub k: f64,
    pub r0: f64,
    pub r1: f64,
    pub eta: f64,
    pub eta_c: f64,
    pub regime: Regime,
}

/// `R₀ = (Le + Pr) σ_c / ((1 − Le) Pr)`, the Rayleigh number where `K` changes sign on the critical surface.
pub fn r0(pr: f64, le: f64, sigma_c: f64) -> f64 {
    (le + pr) * sigma_c / ((1.0 - le) * pr)
}

/// `R₁ = σ_c / (1 − Le²)`, the zero of the zero-wavenumber interaction.
pub fn r1(le: f64, sigma_c: f64) -> f64 {
    sigma_c / (1.0 - le * le)
}

pub fn regime(params: &Params) -> Result<RegimeReport> {
    let crit = sigma_crit(params.aspect)?;
    let (pr, le, rt) = (params.pr, params.le, params.saline_rayleigh);
    let sigma_c = crit.sigma_c;
    let k = (1.0 - le).signum() * (le * le / (1.0 - le) * (1.0 + 1.0 / pr) * sigma_c - rt);
    let regime = if k > 0.0 {
        Regime::SteadyMultiEquilibria
    } else if k < 0.0 {
        Regime::Oscillatory
    } else {
        Regime::Degenerate
    };
    Ok(RegimeReport {
        sigma: params.sigma(),
        sigma_c,
        lc: crit.lc,
        k,
        r0: r0(pr, le, sigma_c),
        r1: r1(le, sigma_c),
        eta: params.rayleigh - (pr + le) * rt / (pr + 1.0),
        eta_c: (pr + le) * (1.0 + le) * sigma_c / pr,
        regime,
    })
}
