//! Log-magnitude/phase representation of complex values.
//!
//! The rational Painlevé-II functions pair factors like `m^(2m/3) e^(m mu)`
//! with reciprocally tiny ones; storing `(ln|z|, arg z)` keeps every
//! intermediate representable. Exact zero is `logmag = -inf`, and an exact
//! pole hit during evaluation is flagged as `logmag = +inf`.

use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledComplex {
    /// Natural log of the magnitude; `-inf` for zero, `+inf` for a pole hit.
    pub logmag: f64,
    /// Phase in (-pi, pi].
    pub phase: f64,
}

fn wrap_phase(p: f64) -> f64 {
    if p.is_finite() {
        let mut w = p.rem_euclid(std::f64::consts::TAU);
        if w > std::f64::consts::PI {
            w -= std::f64::consts::TAU;
        }
        w
    } else {
        0.0
    }
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex { logmag: f64::NEG_INFINITY, phase: 0.0 };
    pub const POLE: ScaledComplex = ScaledComplex { logmag: f64::INFINITY, phase: 0.0 };

    pub fn new(logmag: f64, phase: f64) -> Self {
        ScaledComplex { logmag, phase: wrap_phase(phase) }
    }

    pub fn from_c64(z: C64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return ScaledComplex::ZERO;
        }
        ScaledComplex { logmag: z.norm().ln(), phase: z.arg() }
    }

    pub fn is_zero(&self) -> bool {
        self.logmag == f64::NEG_INFINITY
    }

    pub fn is_pole(&self) -> bool {
        self.logmag == f64::INFINITY
    }

    /// Back to a complex double; the magnitude saturates to `inf`/`0` outside
    /// the f64 range.
    pub fn to_c64(&self) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        let r = self.logmag.exp();
        C64::new(r * self.phase.cos(), r * self.phase.sin())
    }

    pub fn mul(&self, rhs: &ScaledComplex) -> ScaledComplex {
        ScaledComplex::new(self.logmag + rhs.logmag, self.phase + rhs.phase)
    }

    pub fn div(&self, rhs: &ScaledComplex) -> ScaledComplex {
        ScaledComplex::new(self.logmag - rhs.logmag, self.phase - rhs.phase)
    }

    /// Multiply by `exp(w)` for complex `w` given as (re, im) = (log-scale, phase shift).
    pub fn mul_exp(&self, log_scale: f64, phase_shift: f64) -> ScaledComplex {
        ScaledComplex::new(self.logmag + log_scale, self.phase + phase_shift)
    }

    /// |self - rhs| computed after rescaling by the larger magnitude, so it is
    /// meaningful whenever the result itself is within f64 range.
    pub fn abs_diff(&self, rhs: &ScaledComplex) -> f64 {
        if self.is_zero() {
            return rhs.logmag.exp();
        }
        if rhs.is_zero() {
            return self.logmag.exp();
        }
        let base = self.logmag.max(rhs.logmag);
        let a = C64::from_polar((self.logmag - base).exp(), self.phase);
        let b = C64::from_polar((rhs.logmag - base).exp(), rhs.phase);
        (a - b).norm() * base.exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let z = C64::new(-3.5, 1.25);
        let s = ScaledComplex::from_c64(z);
        assert!((s.to_c64() - z).norm() < 1e-14);
    }

    #[test]
    fn phase_normalization() {
        let s = ScaledComplex::new(0.0, 7.0 * std::f64::consts::PI);
        assert!((s.phase - std::f64::consts::PI).abs() < 1e-12);
        assert!(s.phase <= std::f64::consts::PI && s.phase > -std::f64::consts::PI);
    }

    #[test]
    fn mul_is_additive_in_logs() {
        let a = ScaledComplex::new(1e4, 0.3);
        let b = ScaledComplex::new(-9.99e3, 0.4);
        let p = a.mul(&b);
        assert!((p.logmag - 10.0).abs() < 1e-9);
        assert!((p.phase - 0.7).abs() < 1e-12);
    }

    #[test]
    fn abs_diff_at_scale() {
        let a = ScaledComplex::new(100.0, 0.0);
        let b = ScaledComplex::new(100.0 + 1e-8, 0.0);
        let expect = 100f64.exp() * 1e-8;
        assert!((a.abs_diff(&b) - expect).abs() / expect < 1e-6);
    }
}
