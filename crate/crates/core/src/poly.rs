//! Dense univariate polynomials with exact big-rational coefficients.
//!
//! Coefficients are stored lowest degree first and kept in lowest terms
//! (`BigRational` reduces on construction). The heavy operations (ladder
//! recursion, gcd) run on primitive integer polynomials with the rational
//! content carried separately, which avoids per-coefficient gcd churn.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{BigFloat, CBigFloat};
use crate::scaled::ScaledComplex;
use crate::C64;

/// Polynomial in the variable `y` over the exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigRationalPoly {
    coeffs: Vec<BigRational>,
}

// ---------------------------------------------------------------------------
// integer polynomial helpers (crate-internal)
// ---------------------------------------------------------------------------

pub(crate) type IntPoly = Vec<BigInt>;

pub(crate) fn ip_trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn ip_degree(p: &IntPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub(crate) fn ip_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    ip_trim(&mut out);
    out
}

pub(crate) fn ip_neg(a: &IntPoly) -> IntPoly {
    a.iter().map(|c| -c).collect()
}

pub(crate) fn ip_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    ip_trim(&mut out);
    out
}

pub(crate) fn ip_scale(a: &IntPoly, s: &BigInt) -> IntPoly {
    if s.is_zero() {
        return vec![];
    }
    a.iter().map(|c| c * s).collect()
}

pub(crate) fn ip_derivative(a: &IntPoly) -> IntPoly {
    if a.len() <= 1 {
        return vec![];
    }
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

pub(crate) fn ip_content(a: &IntPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        if !c.is_zero() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

/// Divide every coefficient by `d`, which must divide exactly.
pub(crate) fn ip_div_scalar(a: &IntPoly, d: &BigInt) -> IntPoly {
    a.iter()
        .map(|c| {
            let (q, r) = c.div_rem(d);
            assert!(r.is_zero(), "inexact scalar division in integer polynomial");
            q
        })
        .collect()
}

/// Exact polynomial division; `None` when the remainder is nonzero or the
/// division does not stay in integer coefficients.
pub(crate) fn ip_exact_div(num: &IntPoly, den: &IntPoly) -> Option<IntPoly> {
    if den.is_empty() {
        return None;
    }
    if num.is_empty() {
        return Some(vec![]);
    }
    if num.len() < den.len() {
        return None;
    }
    let dl = den.last().unwrap();
    let mut rem = num.clone();
    let qlen = num.len() - den.len() + 1;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let top = rem[k + den.len() - 1].clone();
        if top.is_zero() {
            continue;
        }
        let (q, r) = top.div_rem(dl);
        if !r.is_zero() {
            return None;
        }
        for (j, dj) in den.iter().enumerate() {
            let t = dj * &q;
            rem[k + j] -= t;
        }
        quot[k] = q;
    }
    ip_trim(&mut rem);
    if rem.is_empty() {
        ip_trim(&mut quot);
        Some(quot)
    } else {
        None
    }
}

/// Pseudo-remainder: returns `R` with `lc(b)^(da-db+1) * a = Q*b + R`.
fn ip_pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let da = ip_degree(a).unwrap();
    let db = ip_degree(b).unwrap();
    debug_assert!(da >= db);
    let lc_b = b.last().unwrap().clone();
    let mut r = a.clone();
    let mut scale_left = da - db + 1;
    while let Some(dr) = ip_degree(&r) {
        if dr < db {
            break;
        }
        let coef = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= &lc_b;
        }
        scale_left -= 1;
        // cancel the leading term with coef * lc_b / lc_b = coef
        for (j, bj) in b.iter().enumerate() {
            let t = bj * &coef;
            r[dr - db + j] -= t;
        }
        r.truncate(dr);
        ip_trim(&mut r);
    }
    if !r.is_empty() {
        for _ in 0..scale_left {
            for c in r.iter_mut() {
                *c *= &lc_b;
            }
        }
    }
    r
}

/// Subresultant polynomial remainder sequence gcd of primitive integer
/// polynomials; the result is primitive.
pub(crate) fn ip_subresultant_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let (mut f1, mut f2) = if a.len() >= b.len() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let d = ip_degree(&f1).unwrap() - ip_degree(&f2).unwrap();
        let r = ip_pseudo_rem(&f1, &f2);
        if r.is_empty() {
            let c = ip_content(&f2);
            return ip_div_scalar(&f2, &c);
        }
        if ip_degree(&r) == Some(0) {
            return vec![BigInt::one()];
        }
        f1 = f2;
        // divisor g * h^d divides exactly in the subresultant scheme
        let mut div = g.clone();
        for _ in 0..d {
            div *= &h;
        }
        f2 = ip_div_scalar(&r, &div);
        g = f1.last().unwrap().clone();
        // h <- g^d * h^(1-d); exact for d >= 1, h unchanged for d == 0
        if d > 0 {
            let mut gp = BigInt::one();
            for _ in 0..d {
                gp *= &g;
            }
            let mut hp = BigInt::one();
            for _ in 0..d.saturating_sub(1) {
                hp *= &h;
            }
            let (q, rr) = gp.div_rem(&hp);
            debug_assert!(rr.is_zero());
            h = q;
        }
    }
}

// ---------------------------------------------------------------------------
// gcd-is-one certificate over a word-size prime
// ---------------------------------------------------------------------------

const MOD_PRIMES: [u64; 3] = [
    (1u64 << 61) - 1,
    2_305_843_009_213_693_921, // 2^61 - 2^29 + 1? no: a prime near 2^61
    4_611_686_018_427_387_847, // prime near 2^62
];

fn mod_reduce(c: &BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let m = (c % BigInt::from(p)).to_i128().unwrap();
    ((m + p as i128) % p as i128) as u64
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        e >>= 1;
    }
    acc
}

/// Returns `true` when gcd(a, b) = 1 is certified via reduction mod a prime.
/// A `false` answer is inconclusive.
pub(crate) fn ip_coprime_certificate(a: &IntPoly, b: &IntPoly) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    'prime: for &p in &MOD_PRIMES {
        let ra: Vec<u64> = a.iter().map(|c| mod_reduce(c, p)).collect();
        let rb: Vec<u64> = b.iter().map(|c| mod_reduce(c, p)).collect();
        // degree must not drop mod p, else the certificate is invalid
        if *ra.last().unwrap() == 0 || *rb.last().unwrap() == 0 {
            continue 'prime;
        }
        let mut f = ra;
        let mut g = rb;
        while !g.is_empty() {
            // f mod g in Z_p
            let dg = g.len() - 1;
            let inv = mod_inv(*g.last().unwrap(), p);
            while f.len() > dg {
                let q = mod_mul(*f.last().unwrap(), inv, p);
                if q != 0 {
                    let off = f.len() - 1 - dg;
                    for (j, gj) in g.iter().enumerate() {
                        let sub = mod_mul(q, *gj, p);
                        let idx = off + j;
                        f[idx] = (f[idx] + p - sub) % p;
                    }
                }
                while f.last() == Some(&0) {
                    f.pop();
                }
                if f.len() <= dg {
                    break;
                }
            }
            std::mem::swap(&mut f, &mut g);
        }
        // gcd mod p is the final f; constant => coprime over Q
        return f.len() == 1;
    }
    false
}

// ---------------------------------------------------------------------------
// BigRationalPoly
// ---------------------------------------------------------------------------

impl BigRationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BigRationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        BigRationalPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        BigRationalPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        BigRationalPoly::new(vec![c])
    }

    /// The monomial `c * y^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        BigRationalPoly::new(v)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        BigRationalPoly::new(cs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn neg(&self) -> Self {
        BigRationalPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = vec![BigRational::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        BigRationalPoly::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return BigRationalPoly::zero();
        }
        let (ia, da) = self.to_int_scaled();
        let (ib, db) = rhs.to_int_scaled();
        let prod = ip_mul(&ia, &ib);
        let den = da * db;
        BigRationalPoly::from_int_scaled(&prod, &den)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return BigRationalPoly::zero();
        }
        BigRationalPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return BigRationalPoly::zero();
        }
        BigRationalPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * y + c;
        }
        acc
    }

    /// Clear denominators: returns integer coefficients and the common
    /// denominator `d` such that `self = int_poly / d`.
    pub(crate) fn to_int_scaled(&self) -> (IntPoly, BigInt) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ip = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (ip, den)
    }

    pub(crate) fn from_int_scaled(ip: &IntPoly, den: &BigInt) -> Self {
        BigRationalPoly::new(
            ip.iter()
                .map(|c| BigRational::new(c.clone(), den.clone()))
                .collect(),
        )
    }

    /// Content and primitive part: `self = content * primitive` with the
    /// primitive part an integer polynomial of content 1 and positive leading
    /// coefficient.
    pub(crate) fn content_primitive(&self) -> (BigRational, IntPoly) {
        if self.is_zero() {
            return (BigRational::zero(), vec![]);
        }
        let (ip, den) = self.to_int_scaled();
        let mut cont = ip_content(&ip);
        if ip.last().unwrap().is_negative() {
            cont = -cont;
        }
        let prim = ip_div_scalar(&ip, &cont);
        (BigRational::new(cont, den), prim)
    }

    /// Monic gcd via the subresultant PRS on primitive integer parts, with a
    /// modular coprimality certificate as a fast path.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        let (_, pa) = self.content_primitive();
        let (_, pb) = rhs.content_primitive();
        if pa.len() == 1 || pb.len() == 1 {
            return BigRationalPoly::one();
        }
        if ip_coprime_certificate(&pa, &pb) {
            return BigRationalPoly::one();
        }
        let g = ip_subresultant_gcd(&pa, &pb);
        BigRationalPoly::from_int_scaled(&g, &BigInt::one()).monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => BigRationalPoly::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact division, `None` if `rhs` does not divide `self`.
    pub fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BigRationalPoly::zero());
        }
        let (ca, pa) = self.content_primitive();
        let (cb, pb) = rhs.content_primitive();
        let q = ip_exact_div(&pa, &pb)?;
        let scale = ca / cb;
        Some(BigRationalPoly::from_int_scaled(&q, &BigInt::one()).scale(&scale))
    }

    /// Horner evaluation in complex arbitrary-precision arithmetic.
    pub fn eval_cbig(&self, y: &CBigFloat, prec: u32) -> CBigFloat {
        let mut acc = CBigFloat::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(y).add_real(&BigFloat::from_rational(c, prec));
        }
        acc
    }

    /// Scaled evaluation at a complex point with a guaranteed relative error
    /// below `2^(8 - precision_bits/2)` (the internal working precision is
    /// raised until the Horner rounding bound, measured against the magnitude
    /// of the computed value, meets that target).
    pub fn eval_scaled(&self, y: C64, precision_bits: u32) -> ScaledComplex {
        assert!(precision_bits >= 64, "precision_bits must be at least 64");
        if self.is_zero() {
            return ScaledComplex::ZERO;
        }
        let deg = self.degree().unwrap() as f64;
        let target_log2_rel = 8.0 - precision_bits as f64 / 2.0;
        let mut prec = precision_bits;
        loop {
            let yc = CBigFloat::from_c64(y, prec);
            let val = self.eval_cbig(&yc, prec);
            if val.is_zero() {
                return ScaledComplex::ZERO;
            }
            // condition sum: sum |c_k| |y|^k, in log space (f64 is plenty)
            let ln_y = y.norm().ln();
            let mut ln_cond = f64::NEG_INFINITY;
            for (k, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let ln_c = c.numer().magnitude().bits() as f64 * std::f64::consts::LN_2
                    - (c.denom().magnitude().bits() as f64 - 1.0) * std::f64::consts::LN_2;
                let t = ln_c + k as f64 * ln_y;
                ln_cond = ln_cond.max(t);
            }
            ln_cond += (deg + 1.0).ln();
            let ln_val = val.ln_abs();
            // rounding bound: cond * (3 deg) * 2^(1-prec)
            let log2_err = (ln_cond - ln_val) / std::f64::consts::LN_2
                + (3.0 * deg + 3.0).log2()
                + 1.0
                - prec as f64;
            if log2_err <= target_log2_rel || prec >= 16 * precision_bits {
                return ScaledComplex::new(ln_val, val.arg());
            }
            prec *= 2;
        }
    }

    /// Coefficients as exact `p/q` strings, lowest degree first.
    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }

    pub fn from_coeff_strings(items: &[&str]) -> Result<Self, String> {
        let mut coeffs = Vec::with_capacity(items.len());
        for it in items {
            let (n, d) = it
                .split_once('/')
                .ok_or_else(|| format!("coefficient `{it}` is not in p/q form"))?;
            let n: BigInt = n.parse().map_err(|e| format!("bad numerator `{n}`: {e}"))?;
            let d: BigInt = d.parse().map_err(|e| format!("bad denominator `{d}`: {e}"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{it}`"));
            }
            coeffs.push(BigRational::new(n, d));
        }
        Ok(BigRationalPoly::new(coeffs))
    }
}
