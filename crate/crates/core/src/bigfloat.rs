//! Arbitrary-precision binary floating point on top of `num-bigint`.
//!
//! Only the operations needed for polynomial evaluation at high precision are
//! provided: ring arithmetic, division, conversion from exact rationals, and
//! log-magnitude extraction. Values are `mant * 2^exp` with the mantissa
//! normalized to exactly `prec` bits, rounded to nearest on every operation,
//! so each operation has relative error at most `2^(1-prec)`.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn normalized(mut mant: BigInt, mut exp: i64, prec: u32) -> Self {
        if mant.is_zero() {
            return BigFloat::zero(prec);
        }
        let bits = mant.magnitude().bits() as i64;
        let shift = bits - prec as i64;
        if shift > 0 {
            // round to nearest (half away from zero)
            let half = BigInt::from(1) << (shift - 1) as usize;
            if mant.is_negative() {
                mant -= half;
            } else {
                mant += half;
            }
            mant >>= shift as usize;
            exp += shift;
            // rounding may carry into an extra bit
            if mant.magnitude().bits() as i64 > prec as i64 {
                mant >>= 1usize;
                exp += 1;
            }
        } else if shift < 0 {
            mant <<= (-shift) as usize;
            exp += shift;
        }
        BigFloat { mant, exp, prec }
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::normalized(v.clone(), 0, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if q.numer().is_zero() {
            return BigFloat::zero(prec);
        }
        let nb = q.numer().magnitude().bits() as i64;
        let db = q.denom().magnitude().bits() as i64;
        // scale numerator so the quotient has prec+2 significant bits
        let shift = (db - nb + prec as i64 + 2).max(0);
        let scaled = q.numer() << shift as usize;
        let quot = scaled / q.denom();
        Self::normalized(quot, -shift, prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        if v == 0.0 {
            return BigFloat::zero(prec);
        }
        assert!(v.is_finite(), "cannot build BigFloat from {v}");
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_raw = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_raw == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_raw - 1075)
        };
        Self::normalized(BigInt::from(sign * mant as i64), exp, prec)
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -self.mant.clone(), exp: self.exp, prec: self.prec }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return Self::normalized(rhs.mant.clone(), rhs.exp, prec);
        }
        if rhs.is_zero() {
            return Self::normalized(self.mant.clone(), self.exp, prec);
        }
        let (hi, lo) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let diff = hi.exp - lo.exp;
        // beyond this the low addend cannot affect the rounded result
        if diff > prec as i64 + 4 {
            return Self::normalized(hi.mant.clone(), hi.exp, prec);
        }
        let mant = (&hi.mant << diff as usize) + &lo.mant;
        Self::normalized(mant, lo.exp, prec)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() || rhs.is_zero() {
            return BigFloat::zero(prec);
        }
        Self::normalized(&self.mant * &rhs.mant, self.exp + rhs.exp, prec)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let shift = prec as i64 + 2;
        let scaled = &self.mant << shift as usize;
        let quot = scaled / &rhs.mant;
        Self::normalized(quot, self.exp - rhs.exp - shift, prec)
    }

    /// Natural log of the absolute value, as f64. The absolute error is about
    /// `1e-16 * |result|`, which is far below the tolerances this crate works
    /// to even for values with magnitudes like `exp(±10^5)`.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.to_mant_exp();
        m.abs().ln() + (e as f64) * std::f64::consts::LN_2
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Mantissa scaled into roughly [0.5, 1] as f64 together with the binary
    /// exponent, so that value = m * 2^e with the mantissa rounded to nearest.
    pub fn to_mant_exp(&self) -> (f64, i64) {
        if self.is_zero() {
            return (0.0, 0);
        }
        let bits = self.mant.magnitude().bits() as i64;
        let mut m = if bits <= 53 {
            u64::try_from(self.mant.magnitude()).unwrap() as f64 / 2f64.powi(bits as i32)
        } else {
            // take 54 bits and round the last one
            let shifted = self.mant.magnitude() >> (bits - 54) as usize;
            let v = (u64::try_from(&shifted).unwrap() + 1) >> 1;
            v as f64 / 2f64.powi(53)
        };
        if self.signum() < 0 {
            m = -m;
        }
        (m, self.exp + bits)
    }

    /// Lossy conversion; overflows to ±inf for out-of-range exponents.
    pub fn to_f64(&self) -> f64 {
        let (m, e) = self.to_mant_exp();
        if e > 1024 {
            return if m >= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -1070 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }
}

/// Complex number over [`BigFloat`].
#[derive(Clone, Debug)]
pub struct CBigFloat {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl CBigFloat {
    pub fn zero(prec: u32) -> Self {
        CBigFloat { re: BigFloat::zero(prec), im: BigFloat::zero(prec) }
    }

    pub fn from_c64(z: crate::C64, prec: u32) -> Self {
        CBigFloat { re: BigFloat::from_f64(z.re, prec), im: BigFloat::from_f64(z.im, prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        CBigFloat { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn add_real(&self, rhs: &BigFloat) -> Self {
        CBigFloat { re: self.re.add(rhs), im: self.im.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        CBigFloat { re, im }
    }

    /// Squared magnitude.
    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let d = rhs.norm_sqr();
        let re = self.re.mul(&rhs.re).add(&self.im.mul(&rhs.im)).div(&d);
        let im = self.im.mul(&rhs.re).sub(&self.re.mul(&rhs.im)).div(&d);
        CBigFloat { re, im }
    }

    /// ln |z| computed without overflow.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        0.5 * self.norm_sqr().ln_abs()
    }

    /// Argument in (-pi, pi].
    pub fn arg(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (mr, er) = self.re.to_mant_exp();
        let (mi, ei) = self.im.to_mant_exp();
        // rescale both parts by the common larger exponent
        let e = er.max(ei);
        let re = if er - e < -200 { 0.0 } else { mr * 2f64.powi((er - e) as i32) };
        let im = if ei - e < -200 { 0.0 } else { mi * 2f64.powi((ei - e) as i32) };
        im.atan2(re)
    }

    pub fn to_c64(&self) -> crate::C64 {
        crate::C64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rational_round_trip() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let f = BigFloat::from_rational(&q, 128);
        let ln = f.ln_abs();
        assert!((ln - (1.0f64 / 3.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn arithmetic_matches_f64() {
        let a = BigFloat::from_f64(1.25, 96);
        let b = BigFloat::from_f64(-0.375, 96);
        assert_eq!(a.add(&b).to_f64(), 0.875);
        assert_eq!(a.mul(&b).to_f64(), -0.46875);
        assert_eq!(a.div(&b).to_f64(), 1.25 / -0.375);
        assert_eq!(a.sub(&b).to_f64(), 1.625);
    }

    #[test]
    fn huge_magnitudes_stay_representable() {
        let big = BigInt::one() << 100_000usize;
        let f = BigFloat::from_bigint(&big, 64);
        assert!((f.ln_abs() - 100_000.0 * std::f64::consts::LN_2).abs() < 1e-6);
        let prod = f.mul(&f);
        assert!((prod.ln_abs() - 200_000.0 * std::f64::consts::LN_2).abs() < 1e-6);
    }

    #[test]
    fn complex_ops() {
        let z = CBigFloat::from_c64(crate::C64::new(3.0, 4.0), 80);
        let w = CBigFloat::from_c64(crate::C64::new(-1.0, 2.0), 80);
        let p = z.mul(&w).to_c64();
        assert!((p - crate::C64::new(-11.0, 2.0)).norm() < 1e-12);
        let q = z.div(&w).to_c64();
        let expect = crate::C64::new(3.0, 4.0) / crate::C64::new(-1.0, 2.0);
        assert!((q - expect).norm() < 1e-12);
        assert!((z.ln_abs() - 5.0f64.ln()).abs() < 1e-14);
        assert!((z.arg() - 4.0f64.atan2(3.0)).abs() < 1e-14);
    }

    #[test]
    fn rounding_is_to_nearest() {
        // 2^64 + 1 at 64 bits of precision rounds to 2^64
        let v = (BigInt::one() << 64usize) + 1;
        let f = BigFloat::from_bigint(&v, 64);
        let (m, e) = f.to_mant_exp();
        assert_eq!((m, e), (0.5, 65));
    }
}
