//! The Bäcklund recursion for the rational Painlevé-II families.
//!
//! Starting from `U_0 = 1`, `V_0 = -y/6`, each step produces
//!
//! ```text
//! U_{m+1} = -(y/6) U_m - U_m'^2 / U_m + U_m''/2,     V_{m+1} = 1 / U_m.
//! ```
//!
//! `{U_m, V_m}` solves the coupled system `u'' + 2u^2 v + (y/3)u = 0`,
//! `v'' + 2uv^2 + (y/3)v = 0`, and the log-derivatives `P_m = U_m'/U_m`,
//! `Q_m = V_m'/V_m` solve `p'' = 2p^3 + (2/3)yp - (2/3)m` with parameters
//! `m` and `1-m` respectively.
//!
//! Writing `U_m = N/D` in lowest terms, one step of the recursion is
//!
//! ```text
//! U_{m+1} = R / (2 N D^3),
//! R = (N''D - ND'')ND - 2ND'(N'D - ND') - 2(N'D - ND')^2 - (y/3) N^2 D^2,
//! ```
//!
//! and `D^3` divides `R` exactly (every pole of `U_{m+1}` is a zero of
//! `U_m`), so the step needs only exact integer-polynomial divisions, no gcd.
//! The arithmetic runs on primitive integer polynomials with the rational
//! content carried separately; by Gauss's lemma products of primitive
//! polynomials stay primitive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::BigRationalPoly;
use crate::ratfn::{log_derivative, RationalFunction};
use crate::C64;

#[derive(Debug, Error)]
pub enum LadderError {
    #[error("internal ladder corruption at step {step}: {what}")]
    Corruption { step: u32, what: String },
}

/// One rung of the ladder: the pair `(U_m, V_m)`.
#[derive(Clone, Debug)]
pub struct LadderState {
    pub m: u32,
    pub u: RationalFunction,
    pub v: RationalFunction,
}

// --- content/primitive factored polynomials -------------------------------

use crate::poly::{ip_add, ip_content, ip_derivative, ip_div_scalar, ip_exact_div, ip_mul, ip_neg, ip_scale};
type IntPoly = Vec<BigInt>;

/// `value = c * p(y)` with `p` primitive (content 1, positive leading coeff).
#[derive(Clone, Debug)]
struct FPoly {
    c: BigRational,
    p: IntPoly,
}

impl FPoly {
    fn from_poly(q: &BigRationalPoly) -> Self {
        let (c, p) = q.content_primitive();
        FPoly { c, p }
    }

    fn to_poly(&self) -> BigRationalPoly {
        BigRationalPoly::from_int_scaled(&self.p, &BigInt::one()).scale(&self.c)
    }

    fn is_zero(&self) -> bool {
        self.p.is_empty()
    }

    fn normalized(c: BigRational, mut p: IntPoly) -> Self {
        if p.is_empty() || c.is_zero() {
            return FPoly { c: BigRational::zero(), p: vec![] };
        }
        let mut cont = ip_content(&p);
        if p.last().unwrap().is_negative() {
            cont = -cont;
        }
        if !cont.is_one() {
            p = ip_div_scalar(&p, &cont);
        }
        FPoly { c: c * BigRational::from(cont), p }
    }

    fn mul(&self, rhs: &Self) -> Self {
        // product of primitive polynomials is primitive
        FPoly { c: &self.c * &rhs.c, p: ip_mul(&self.p, &rhs.p) }
    }

    fn mul_scalar(&self, s: &BigRational) -> Self {
        if s.is_zero() || self.is_zero() {
            return FPoly { c: BigRational::zero(), p: vec![] };
        }
        FPoly { c: &self.c * s, p: self.p.clone() }
    }

    fn mul_y(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut p = vec![BigInt::zero()];
        p.extend_from_slice(&self.p);
        FPoly { c: self.c.clone(), p }
    }

    fn deriv(&self) -> Self {
        Self::normalized(self.c.clone(), ip_derivative(&self.p))
    }

    fn sub(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return FPoly::normalized(-rhs.c.clone(), rhs.p.clone());
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // write c1 p1 - c2 p2 = (g/L) * [ a1 p1 - a2 p2 ] with integer a1, a2
        let l = self.c.denom().lcm(rhs.c.denom());
        let n1 = self.c.numer() * (&l / self.c.denom());
        let n2 = rhs.c.numer() * (&l / rhs.c.denom());
        let g = n1.gcd(&n2);
        let a1 = &n1 / &g;
        let a2 = &n2 / &g;
        let diff = ip_add(&ip_scale(&self.p, &a1), &ip_neg(&ip_scale(&rhs.p, &a2)));
        Self::normalized(BigRational::new(g, l), diff)
    }

    /// Exact division by another factored polynomial; `None` if not exact.
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let q = ip_exact_div(&self.p, &rhs.p)?;
        Some(FPoly { c: &self.c / &rhs.c, p: q })
    }
}

// --- the ladder ------------------------------------------------------------

fn seed() -> LadderState {
    let u0 = RationalFunction::from_poly(BigRationalPoly::one());
    let v0 = RationalFunction::from_poly(BigRationalPoly::new(vec![
        BigRational::zero(),
        BigRational::new(BigInt::from(-1), BigInt::from(6)),
    ]));
    LadderState { m: 0, u: u0, v: v0 }
}

fn step(state: &LadderState) -> Result<LadderState, LadderError> {
    let m = state.m;
    let n = FPoly::from_poly(state.u.num());
    let d = FPoly::from_poly(state.u.den());
    let n1 = n.deriv();
    let d1 = d.deriv();
    let n2 = n1.deriv();
    let d2 = d1.deriv();

    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let two = BigRational::from(BigInt::from(2));

    // W = N'D - ND'
    let w = n1.mul(&d).sub(&n.mul(&d1));
    let nd = n.mul(&d);
    // R = (N''D - ND'')ND - 2ND'(N'D - ND') - 2W^2 - (y/3)(ND)^2
    let t1 = n2.mul(&d).sub(&n.mul(&d2)).mul(&nd);
    let t2 = n.mul(&d1).mul(&w).mul_scalar(&two);
    let t3 = w.mul(&w).mul_scalar(&two);
    let t4 = nd.mul(&nd).mul_y().mul_scalar(&third);
    let r = t1.sub(&t2).sub(&t3).sub(&t4);

    // divide out D^3 exactly
    let mut q = r;
    for _ in 0..3 {
        q = q.exact_div(&d).ok_or_else(|| LadderError::Corruption {
            step: m + 1,
            what: "denominator cube does not divide the recursion numerator".into(),
        })?;
    }
    // U_{m+1} = q / (2N); normalize the denominator monic
    let den_f = n.mul_scalar(&two);
    let num_poly = q.to_poly();
    let den_poly = den_f.to_poly();
    let lc = den_poly
        .leading()
        .ok_or_else(|| LadderError::Corruption { step: m + 1, what: "zero denominator".into() })?
        .clone();
    let u_next = RationalFunction::from_reduced(
        num_poly.scale(&lc.recip()),
        den_poly.monic(),
    );

    // expected degree growth: deg num = (m+1)(m+2)/2, deg den = m(m+1)/2
    let mm = (m + 1) as usize;
    if u_next.num().degree() != Some(mm * (mm + 1) / 2)
        || u_next.den().degree() != Some(mm * (mm - 1) / 2)
    {
        return Err(LadderError::Corruption {
            step: m + 1,
            what: format!(
                "unexpected degrees num={:?} den={:?}",
                u_next.num().degree(),
                u_next.den().degree()
            ),
        });
    }

    // V_{m+1} = 1/U_m = D_m/N_m, renormalized so the denominator is monic
    let v_next = match state.u.num().leading() {
        Some(lc_n) => RationalFunction::from_reduced(
            state.u.den().scale(&lc_n.clone().recip()),
            state.u.num().monic(),
        ),
        None => {
            return Err(LadderError::Corruption { step: m + 1, what: "U_m is zero".into() });
        }
    };

    Ok(LadderState { m: m + 1, u: u_next, v: v_next })
}

/// Build the ladder `(U_m, V_m)` for `m = 0..=m_max` by the Bäcklund
/// recursion in exact arithmetic, fully reduced at every rung.
pub fn ladder_build(m_max: u32) -> Result<Vec<LadderState>, LadderError> {
    let mut out = Vec::with_capacity(m_max as usize + 1);
    out.push(seed());
    for _ in 0..m_max {
        let next = step(out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// Exact check that `p` solves `p'' = 2p^3 + (2/3)y p - (2/3)m`.
pub fn verify_pii(m: u32, p: &RationalFunction) -> bool {
    let y = RationalFunction::from_poly(BigRationalPoly::monomial(BigRational::one(), 1));
    let two_thirds = BigRational::new(BigInt::from(2), BigInt::from(3));
    let p2 = p.derivative().derivative();
    let rhs = p
        .mul(p)
        .mul(p)
        .mul(&RationalFunction::constant(BigRational::from(BigInt::from(2))))
        .add(&y.mul(p).mul(&RationalFunction::constant(two_thirds.clone())))
        .sub(&RationalFunction::constant(two_thirds * BigRational::from(BigInt::from(m))));
    p2.sub(&rhs).is_zero()
}

/// Exact check of the coupled system for the pair `(u, v)`.
pub fn verify_coupled(_m: u32, u: &RationalFunction, v: &RationalFunction) -> bool {
    let y = RationalFunction::from_poly(BigRationalPoly::monomial(BigRational::one(), 1));
    let third = RationalFunction::constant(BigRational::new(BigInt::one(), BigInt::from(3)));
    let two = RationalFunction::constant(BigRational::from(BigInt::from(2)));
    let eq_u = u
        .derivative()
        .derivative()
        .add(&two.mul(u).mul(u).mul(v))
        .add(&third.mul(&y).mul(u));
    if !eq_u.is_zero() {
        return false;
    }
    let eq_v = v
        .derivative()
        .derivative()
        .add(&two.mul(u).mul(v).mul(v))
        .add(&third.mul(&y).mul(v));
    eq_v.is_zero()
}

/// `P_m = U_m'/U_m` from a ladder state.
pub fn p_of(state: &LadderState) -> RationalFunction {
    log_derivative(&state.u).expect("U_m is never zero")
}

/// `Q_m = V_m'/V_m` from a ladder state.
pub fn q_of(state: &LadderState) -> RationalFunction {
    log_derivative(&state.v).expect("V_m is never zero")
}

/// Scaled coordinate `x = (m - 1/2)^(-2/3) y`.
pub fn to_x(y: C64, m: u32) -> C64 {
    y * (m as f64 - 0.5).powf(-2.0 / 3.0)
}

/// Inverse of [`to_x`]: `y = (m - 1/2)^(2/3) x`.
pub fn from_x(x: C64, m: u32) -> C64 {
    x * (m as f64 - 0.5).powf(2.0 / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfn::log_derivative;

    fn q64(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn seed_is_stated_pair() {
        let l = ladder_build(0).unwrap();
        assert!(l[0].u.is_one());
        assert_eq!(
            l[0].v.num(),
            &BigRationalPoly::new(vec![q64(0, 1), q64(-1, 6)])
        );
    }

    #[test]
    fn first_two_rungs_match_hand_computation() {
        let l = ladder_build(2).unwrap();
        // U_1 = -y/6, V_1 = 1
        assert_eq!(l[1].u.num(), &BigRationalPoly::new(vec![q64(0, 1), q64(-1, 6)]));
        assert!(l[1].u.den().is_one());
        assert!(l[1].v.is_one());
        // U_2 = (y^3 + 6)/(36 y), V_2 = -6/y
        let u2 = RationalFunction::new(
            BigRationalPoly::from_i64s(&[6, 0, 0, 1]),
            BigRationalPoly::from_i64s(&[0, 36]),
        )
        .unwrap();
        assert_eq!(l[2].u, u2);
        let v2 = RationalFunction::new(
            BigRationalPoly::from_i64s(&[-6]),
            BigRationalPoly::from_i64s(&[0, 1]),
        )
        .unwrap();
        assert_eq!(l[2].v, v2);
    }

    #[test]
    fn ladder_step_matches_naive_rational_arithmetic() {
        // recompute U_{m+1} with generic rational-function ops and compare
        let l = ladder_build(6).unwrap();
        let sixth = RationalFunction::constant(q64(-1, 6));
        let y = RationalFunction::from_poly(BigRationalPoly::monomial(BigRational::one(), 1));
        let half = RationalFunction::constant(q64(1, 2));
        for m in 1..6usize {
            let u = &l[m].u;
            let du = u.derivative();
            let naive = sixth
                .mul(&y)
                .mul(u)
                .sub(&du.mul(&du).div(u).unwrap())
                .add(&u.derivative().derivative().mul(&half));
            assert_eq!(&naive, &l[m + 1].u, "mismatch at step {}", m + 1);
        }
    }

    #[test]
    fn backlund_relation_u_v() {
        let l = ladder_build(8).unwrap();
        for m in 1..8usize {
            let prod = l[m].u.mul(&l[m + 1].v);
            assert!(prod.is_one(), "U_{m} * V_{} != 1", m + 1);
        }
    }

    #[test]
    fn reduced_pairs_are_coprime() {
        let l = ladder_build(8).unwrap();
        for s in &l {
            assert!(s.u.num().gcd(s.u.den()).is_one());
        }
    }

    #[test]
    fn pii_and_coupled_small_m() {
        let l = ladder_build(4).unwrap();
        for m in 1..=4u32 {
            let p = p_of(&l[m as usize]);
            assert!(verify_pii(m, &p), "PII fails at m={m}");
            assert!(
                verify_coupled(m, &l[m as usize].u, &l[m as usize].v),
                "coupled fails at m={m}"
            );
        }
    }

    #[test]
    fn pii_rejects_perturbed_solution() {
        // p = 1/y + 1 is not a solution for m = 1
        let p = RationalFunction::new(
            BigRationalPoly::from_i64s(&[1, 1]),
            BigRationalPoly::from_i64s(&[0, 1]),
        )
        .unwrap();
        assert!(!verify_pii(1, &p));
    }

    #[test]
    fn coupled_rejects_perturbation() {
        let l = ladder_build(1).unwrap();
        let bad_v = RationalFunction::from_poly(BigRationalPoly::from_i64s(&[1, 1]));
        assert!(!verify_coupled(1, &l[1].u, &bad_v));
    }

    #[test]
    fn p2_matches_hand_derivative() {
        // P_2 = 2(y^3 - 3)/(y(y^3 + 6))
        let l = ladder_build(2).unwrap();
        let p2 = log_derivative(&l[2].u).unwrap();
        let want = RationalFunction::new(
            BigRationalPoly::from_i64s(&[-6, 0, 0, 2]),
            BigRationalPoly::from_i64s(&[0, 6, 0, 0, 1]),
        )
        .unwrap();
        assert_eq!(p2, want);
    }

    #[test]
    fn x_round_trip() {
        let y = C64::new(2.0, 3.0);
        let back = from_x(to_x(y, 25), 25);
        assert!((back - y).norm() < 1e-15 * y.norm());
        assert_eq!(to_x(C64::new(0.0, 0.0), 13), C64::new(0.0, 0.0));
        let y13 = from_x(C64::new(1.0, 0.0), 13);
        assert!((y13.re - 12.5f64.powf(2.0 / 3.0)).abs() < 1e-14);
    }
}

#[cfg(test)]
mod bench_tests {
    use super::*;

    #[test]
    #[ignore = "timing probe, run explicitly"]
    fn ladder_timing() {
        for target in [15u32, 20, 25, 30, 40] {
            let t0 = std::time::Instant::now();
            let l = ladder_build(target).unwrap();
            let top = &l[target as usize];
            let bits: u64 = top
                .u
                .num()
                .coeffs()
                .iter()
                .map(|c| c.numer().bits() + c.denom().bits())
                .max()
                .unwrap();
            eprintln!(
                "m={target}: {:?}, num deg {}, max coeff bits {}",
                t0.elapsed(),
                top.u.num().degree().unwrap(),
                bits
            );
        }
    }
}
