//! Reduced rational functions `num/den` with monic denominators.
//!
//! The monic-denominator convention makes the reduced form unique, so
//! structural equality is semantic equality.

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::BigRationalPoly;
use crate::scaled::ScaledComplex;
use crate::C64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatFnError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("logarithmic derivative of the zero function")]
    ZeroLogDerivative,
    #[error("malformed rational-function record: {0}")]
    BadRecord(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: BigRationalPoly,
    den: BigRationalPoly,
}

impl RationalFunction {
    /// Build and fully reduce; the denominator is normalized monic.
    pub fn new(num: BigRationalPoly, den: BigRationalPoly) -> Result<Self, RatFnError> {
        if den.is_zero() {
            return Err(RatFnError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFunction { num: BigRationalPoly::zero(), den: BigRationalPoly::one() });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.leading().unwrap().clone();
        Ok(RationalFunction { num: num.scale(&lc.recip()), den: den.monic() })
    }

    /// Caller guarantees the pair is already reduced with monic denominator.
    pub(crate) fn from_reduced(num: BigRationalPoly, den: BigRationalPoly) -> Self {
        debug_assert!(den.leading().map(|c| c.is_one()).unwrap_or(false));
        RationalFunction { num, den }
    }

    pub fn from_poly(p: BigRationalPoly) -> Self {
        RationalFunction { num: p, den: BigRationalPoly::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(BigRationalPoly::constant(c))
    }

    pub fn num(&self) -> &BigRationalPoly {
        &self.num
    }

    pub fn den(&self) -> &BigRationalPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RationalFunction::new(num, den).unwrap()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RationalFunction::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).unwrap()
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, RatFnError> {
        if rhs.is_zero() {
            return Err(RatFnError::ZeroDenominator);
        }
        RationalFunction::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn recip(&self) -> Result<Self, RatFnError> {
        if self.is_zero() {
            return Err(RatFnError::ZeroDenominator);
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        RationalFunction::new(num, den).unwrap()
    }

    /// Exact evaluation at a rational point; `None` at a pole.
    pub fn eval_rational(&self, y: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(y);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(y) / d)
    }

    /// Scaled evaluation in `precision_bits`-bit arithmetic on the exact
    /// coefficients. An exact pole hit (denominator evaluates to zero at a
    /// representable point) is reported distinctly as [`ScaledComplex::POLE`].
    pub fn eval_scaled(&self, y: C64, precision_bits: u32) -> ScaledComplex {
        let d = self.den.eval_scaled(y, precision_bits);
        if d.is_zero() {
            return ScaledComplex::POLE;
        }
        let n = self.num.eval_scaled(y, precision_bits);
        n.div(&d)
    }
}

/// Logarithmic derivative `f'/f`, fully reduced.
///
/// Applied to `U_m` this produces `P_m`, and applied to `V_m` it produces
/// `Q_m`.
pub fn log_derivative(f: &RationalFunction) -> Result<RationalFunction, RatFnError> {
    if f.is_zero() {
        return Err(RatFnError::ZeroLogDerivative);
    }
    // f'/f = (N'D - ND')/(ND)
    let num = f
        .num
        .derivative()
        .mul(&f.den)
        .sub(&f.num.mul(&f.den.derivative()));
    let den = f.num.mul(&f.den);
    RationalFunction::new(num, den)
}

/// Serialize one `(m, rational function)` record.
///
/// Format: three lines, `m <integer>`, `num <p/q> <p/q> ...`,
/// `den <p/q> ...`, coefficients lowest degree first in lowest terms. The
/// round trip is bit-exact because reduced representations are unique.
pub fn to_record(m: u32, f: &RationalFunction) -> String {
    let num = f.num().to_coeff_strings().join(" ");
    let den = f.den().to_coeff_strings().join(" ");
    format!("m {m}\nnum {num}\nden {den}\n")
}

pub fn parse_record(text: &str) -> Result<(u32, RationalFunction), RatFnError> {
    let mut m: Option<u32> = None;
    let mut num: Option<BigRationalPoly> = None;
    let mut den: Option<BigRationalPoly> = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (tag, rest) = line
            .split_once(' ')
            .ok_or_else(|| RatFnError::BadRecord(format!("bad line `{line}`")))?;
        match tag {
            "m" => {
                m = Some(
                    rest.trim()
                        .parse()
                        .map_err(|e| RatFnError::BadRecord(format!("bad m: {e}")))?,
                )
            }
            "num" | "den" => {
                let items: Vec<&str> = rest.split_whitespace().collect();
                let p = BigRationalPoly::from_coeff_strings(&items)
                    .map_err(RatFnError::BadRecord)?;
                if tag == "num" {
                    num = Some(p);
                } else {
                    den = Some(p);
                }
            }
            _ => return Err(RatFnError::BadRecord(format!("unknown tag `{tag}`"))),
        }
    }
    let m = m.ok_or_else(|| RatFnError::BadRecord("missing m".into()))?;
    let num = num.ok_or_else(|| RatFnError::BadRecord("missing num".into()))?;
    let den = den.ok_or_else(|| RatFnError::BadRecord("missing den".into()))?;
    let f = RationalFunction::new(num, den)?;
    Ok((m, f))
}
