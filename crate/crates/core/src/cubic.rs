//! Roots of monic real cubics `β³ + b₂β² + b₁β + b₀`.
//!
//! Closed form (trigonometric for three real roots, Cardano otherwise)
//! followed by a single Newton step per root. A complex pair is polished
//! once and its partner set to the exact conjugate, so the output is closed
//! under conjugation bit-for-bit.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

/// Relative discriminant threshold below which roots are treated as a complex pair.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

/// Coefficients `(b₀, b₁, b₂)` of the monic cubic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
}

impl Cubic {
    pub fn new(b0: f64, b1: f64, b2: f64) -> Self {
        Cubic { b0, b1, b2 }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        ((x + self.b2) * x + self.b1) * x + self.b0
    }

    fn derivative(&self, x: Complex64) -> Complex64 {
        (3.0 * x + 2.0 * self.b2) * x + self.b1
    }

    /// `max(1, |b₀|, |b₁|, |b₂|)`, the scale used for residual checks.
    pub fn scale(&self) -> f64 {
        1f64.max(self.b0.abs()).max(self.b1.abs()).max(self.b2.abs())
    }

    /// All three roots, ordered by descending real part, ties by descending imaginary part.
    pub fn roots(&self) -> [Complex64; 3] {
        let shift = self.b2 / 3.0;
        // depressed cubic t³ + p t + q with β = t − b₂/3
        let p = self.b1 - self.b2 * shift;
        let q = 2.0 * shift * shift * shift - shift * self.b1 + self.b0;

        let half_q = q / 2.0;
        let third_p = p / 3.0;
        let disc = half_q * half_q + third_p * third_p * third_p;
        let disc_scale = half_q * half_q + third_p.abs().powi(3);

        let mut roots = if disc < -DISCRIMINANT_TOL * disc_scale {
            let m = 2.0 * (-third_p).sqrt();
            let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            let mut out = [0.0; 3];
            for (k, o) in out.iter_mut().enumerate() {
                *o = m * (phi - 2.0 * PI * k as f64 / 3.0).cos() - shift;
            }
            out.map(|x| self.polish(Complex64::new(x, 0.0)))
        } else {
            let sq = disc.max(0.0).sqrt();
            // pick the larger-magnitude branch to avoid cancellation
            let u = (-half_q - half_q.signum() * sq).cbrt();
            let v = if u == 0.0 { 0.0 } else { -third_p / u };
            let real = self.polish(Complex64::new(u + v - shift, 0.0));
            let half_re = -(u + v) / 2.0 - shift;
            let im = 3f64.sqrt() / 2.0 * (u - v).abs();
            let upper = self.polish(Complex64::new(half_re, im));
            let upper = if upper.im < 0.0 { upper.conj() } else { upper };
            if upper.im == 0.0 {
                [real, upper, upper]
            } else {
                [real, upper, upper.conj()]
            }
        };
        roots.sort_by(order_desc);
        roots
    }

    fn polish(&self, x: Complex64) -> Complex64 {
        let d = self.derivative(x);
        if d.norm() == 0.0 {
            return x;
        }
        let step = x - self.eval(x) / d;
        if step.is_finite() && self.eval(step).norm() <= self.eval(x).norm() {
            step
        } else {
            x
        }
    }
}

/// Descending real part, then descending imaginary part.
pub fn order_desc(a: &Complex64, b: &Complex64) -> Ordering {
    b.re.partial_cmp(&a.re)
        .unwrap_or(Ordering::Equal)
        .then(b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
}
