//! Branch-resolved scalar functions of the scaled coordinate `x`.
//!
//! Everything here derives from the cubic branch `S(x)` solving
//! `3S^3 + 4xS + 8 = 0` with `S ~ -2/x` at infinity, cut along the three
//! spokes joining the origin to `x_c` and its rotations. On the sector `S_0`
//! (`|arg x| < pi/3`) the square-root branch of the band width is fixed by
//! `Delta = -4i / sqrt(-3S)` with the principal root, which is the analytic
//! continuation of the `Delta > 0` branch defined for real `x < x_c`.
//!
//! The edge-detecting function is computed through the one-variable form
//! `d(x) = I(t)`, `t = i sqrt(3)/2 (-S)^(3/2)`, with
//! `I(t) = -(2/t) \int_{-1}^t (w-t) sqrt(w^2-1) dw - i pi/2`, and
//! cross-checked against the defining band integral
//! `c(x) = (3/2) \int_a^{z*} (z - z*) r(z; a, b) dz` on a straight path.
//! Both integrals are regularized by the square substitution `u^2` at the
//! band endpoint and evaluated with a 200-node Gauss–Legendre rule.

use thiserror::Error;

use crate::gauss::gl200_unit;
use crate::C64;

pub const PI: f64 = std::f64::consts::PI;

/// `x_c = -(9/2)^(2/3)`, the corner of the elliptic region on the negative
/// real axis.
pub fn x_corner() -> f64 {
    -(4.5f64).powf(2.0 / 3.0)
}

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("x = {0} lies on the branch cut of S")]
    OnBranchCut(C64),
    #[error("x = {0} outside the supported domain: {1}")]
    OutOfDomain(C64, String),
    #[error("branch-tracking fault at x = {x}: {detail}")]
    BranchTrackingFault { x: C64, detail: String },
    #[error("continuation stalled; last good point {last_good}")]
    ContinuationStall { last_good: C64 },
}

// ---------------------------------------------------------------------------
// the cubic branch S(x)
// ---------------------------------------------------------------------------

fn cubic_newton(x: C64, s0: C64) -> Option<C64> {
    let mut s = s0;
    for _ in 0..60 {
        let f = 3.0 * s * s * s + 4.0 * x * s + 8.0;
        let fp = 9.0 * s * s + 4.0 * x;
        if fp.norm() == 0.0 {
            return None;
        }
        let step = f / fp;
        s -= step;
        if step.norm() < 1e-15 * (1.0 + s.norm()) {
            return Some(s);
        }
    }
    None
}

/// Distance from `x` to the branch cut (three spokes of length `|x_c|`).
fn dist_to_cut(x: C64) -> f64 {
    let len = -x_corner();
    let mut best = f64::INFINITY;
    for k in 0..3 {
        // rotate so the spoke lies on the positive real axis
        let ang = PI - 2.0 * PI * k as f64 / 3.0;
        let z = x * C64::from_polar(1.0, -ang);
        let d = if z.re < 0.0 {
            z.norm()
        } else if z.re > len {
            (z - C64::new(len, 0.0)).norm()
        } else {
            z.im.abs()
        };
        best = best.min(d);
    }
    best
}

/// The branch of `3S^3 + 4xS + 8 = 0` with `S(x) = -2/x + O(x^-4)` at
/// infinity, continued off the cut by adaptive homotopy from the anchor
/// `x = 10^6`. Paths are straight within the sector of the anchor (which is
/// convex and cut-free); otherwise the path runs along the real axis, an arc
/// of radius `max(|x|, 4)` clear of the cut spokes, and a final radial leg.
pub fn solve_s(x: C64) -> Result<C64, GeomError> {
    if dist_to_cut(x) < 1e-9 * (1.0 + x.norm()) {
        return Err(GeomError::OnBranchCut(x));
    }
    let anchor = C64::new(1e6, 0.0);
    let s_anchor = cubic_newton(anchor, C64::new(-2e-6, 0.0)).unwrap();
    let path: Vec<C64> = if x.arg().abs() < PI / 3.0 - 1e-12 {
        vec![anchor, x]
    } else {
        let r = x.norm().max(4.0);
        let mut p = vec![anchor, C64::new(r, 0.0)];
        let steps = 24;
        for k in 1..=steps {
            p.push(C64::from_polar(r, x.arg() * k as f64 / steps as f64));
        }
        p.push(x);
        p
    };
    let mut s = s_anchor;
    for leg in path.windows(2) {
        let (from, to) = (leg[0], leg[1]);
        let mut t = 0.0f64;
        let mut dt = 0.5f64;
        let mut cur = from;
        while t < 1.0 {
            let tn = (t + dt).min(1.0);
            // land exactly on the leg endpoint (from + (to-from)*1.0 would
            // lose low bits of the target when |from| is large)
            let target = if tn >= 1.0 { to } else { from + (to - from) * tn };
            // predictor along dS/dx = -4S / (9S^2 + 4x)
            let denom = 9.0 * s * s + 4.0 * cur;
            let pred = if denom.norm() > 1e-12 {
                s - 4.0 * s / denom * (target - cur)
            } else {
                s
            };
            match cubic_newton(target, pred) {
                Some(next) if (next - s).norm() < 0.5 * (1.0 + s.norm()) => {
                    s = next;
                    cur = target;
                    t = tn;
                    dt = (dt * 1.9).min(0.5);
                }
                _ => {
                    dt *= 0.5;
                    if dt < 1e-9 {
                        return Err(GeomError::ContinuationStall { last_good: cur });
                    }
                }
            }
        }
    }
    let resid = 3.0 * s * s * s + 4.0 * x * s + 8.0;
    if resid.norm() > 1e-10 * (1.0 + x.norm()) {
        return Err(GeomError::BranchTrackingFault {
            x,
            detail: format!("cubic residual {} after continuation", resid.norm()),
        });
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// derived spectral quantities
// ---------------------------------------------------------------------------

/// The branch of `sqrt(w^2 - 1)` cut on `[-1, 1]` and `~ w` at infinity,
/// realized as a product of principal square roots.
pub fn r11(w: C64) -> C64 {
    (w - 1.0).sqrt() * (w + 1.0).sqrt()
}

/// The x-dependent scalars of the outer model, branch-resolved on the sector
/// `S_0` and on the real ray `x < x_c`.
#[derive(Clone, Copy, Debug)]
pub struct Spectral {
    pub x: C64,
    pub s: C64,
    pub delta: C64,
    pub a: C64,
    pub b: C64,
    pub z_star: C64,
    pub r_star: C64,
    pub t_star: C64,
    /// `ell = log( sqrt(2/3) i Delta / (4 r*^{5/2}) )`, real for `x > 0`.
    pub ell: C64,
}

impl Spectral {
    /// `r(z; a, b)` in the branch with `r ~ z` at infinity, cut on the band.
    pub fn r_band(&self, z: C64) -> C64 {
        let w = (2.0 * z - self.s) / self.delta;
        0.5 * self.delta * r11(w)
    }
}

fn in_sector_s0(x: C64, margin: f64) -> bool {
    x.norm() > 0.0 && x.arg().abs() < PI / 3.0 - margin
}

/// Spectral data for `x` in the sector `S_0` or on the real ray `x <= x_c`
/// (where the defining positive-real branch of `Delta` applies). The other
/// sectors reduce to these by the exact rotation symmetries.
pub fn spectral_data(x: C64) -> Result<Spectral, GeomError> {
    let s = solve_s(x)?;
    let on_left_ray = x.im == 0.0 && x.re < x_corner();
    let delta = if in_sector_s0(x, 0.0) {
        C64::new(0.0, -4.0) / (-3.0 * s).sqrt()
    } else if on_left_ray {
        4.0 / (3.0 * s).sqrt()
    } else {
        return Err(GeomError::OutOfDomain(
            x,
            "spectral data is defined on S_0 and the ray x < x_c; use the rotation symmetries"
                .into(),
        ));
    };
    let a = 0.5 * (s - delta);
    let b = 0.5 * (s + delta);
    let z_star = -0.5 * s;
    let w_star = (2.0 * z_star - s) / delta; // = -2S/Delta
    let r_star = 0.5 * delta * r11(w_star);
    let t_star = 2.0 / (C64::i() * delta) * (z_star - 0.5 * s + r_star);
    let i_delta = C64::i() * delta;
    let ell = ((2.0f64 / 3.0).sqrt() * i_delta / (4.0 * r_star.powf(2.5))).ln();
    Ok(Spectral { x, s, delta, a, b, z_star, r_star, t_star, ell })
}

// ---------------------------------------------------------------------------
// the edge-detecting integrals
// ---------------------------------------------------------------------------

/// `I(t) = -(2/t) \int_{-1}^{t} (w - t) sqrt(w^2-1) dw - i pi/2` on the
/// straight path, endpoint-regularized by `w = -1 + (t+1)u^2`.
pub fn i_of_t(t: C64) -> C64 {
    let (xs, ws) = gl200_unit();
    let tp1 = t + 1.0;
    let mut acc = C64::new(0.0, 0.0);
    for (&u, &w) in xs.iter().zip(ws.iter()) {
        let z = -1.0 + tp1 * u * u;
        acc += w * ((z - t) * r11(z) * 2.0 * tp1 * u);
    }
    -2.0 / t * acc - C64::new(0.0, PI / 2.0)
}

/// `I'(t) = 2 r(t;-1,1)^3 / (3 t^2)`.
pub fn i_prime(t: C64) -> C64 {
    let r = r11(t);
    2.0 * r * r * r / (3.0 * t * t)
}

fn t_of_s(s: C64) -> C64 {
    C64::i() * (0.75f64).sqrt() * (-s).powf(1.5)
}

/// Map `x` in `S_0` to the variable of `I`: `t = i sqrt(3)/2 (-S)^{3/2}`.
pub fn t_of_x(x: C64) -> Result<C64, GeomError> {
    Ok(t_of_s(solve_s(x)?))
}

/// Fast single-route `d(x)` through `I(t)`; defined on `S_0`.
pub fn frak_d_fast(x: C64) -> Result<C64, GeomError> {
    if !in_sector_s0(x, 0.0) {
        return Err(GeomError::OutOfDomain(x, "d(x) is defined on the sector S_0".into()));
    }
    Ok(i_of_t(t_of_x(x)?))
}

/// The band-integral route for `c(x)` (straight-line path from `a` to `z*`,
/// endpoint-regularized); this is the independent oracle for [`frak_d`].
pub fn frak_c_direct(x: C64) -> Result<C64, GeomError> {
    let sp = spectral_data(x)?;
    let (xs, ws) = gl200_unit();
    let dz = sp.z_star - sp.a;
    let mut acc = C64::new(0.0, 0.0);
    for (&u, &w) in xs.iter().zip(ws.iter()) {
        let z = sp.a + dz * u * u;
        acc += w * ((z - sp.z_star) * sp.r_band(z) * 2.0 * dz * u);
    }
    Ok(1.5 * acc)
}

/// `d(x) = c(x) - i pi/2` with the two integral routes compared; the `I(t)`
/// route is returned. Route disagreement beyond `1e-10` signals a
/// branch-tracking fault.
pub fn frak_d(x: C64) -> Result<C64, GeomError> {
    let via_i = frak_d_fast(x)?;
    let via_band = frak_c_direct(x)? - C64::new(0.0, PI / 2.0);
    let diff = (via_i - via_band).norm();
    if diff > 1e-10 * (1.0 + via_i.norm()) {
        return Err(GeomError::BranchTrackingFault {
            x,
            detail: format!("I(t) and band routes differ by {diff:.3e}"),
        });
    }
    Ok(via_i)
}

/// `c(x) = d(x) + i pi/2` on `S_0`.
pub fn frak_c(x: C64) -> Result<C64, GeomError> {
    Ok(frak_d(x)? + C64::new(0.0, PI / 2.0))
}

/// `c` extended to the rotated sectors by the exact functional equations
/// `c(x) = c(x e^{-2pi i/3}) - i pi` on `S_0 e^{2pi i/3}` and
/// `c(x) = c(x e^{-4pi i/3})` on `S_0 e^{-2pi i/3}`.
pub fn frak_c_rotated(x: C64) -> Result<C64, GeomError> {
    let rot = C64::from_polar(1.0, -2.0 * PI / 3.0);
    if in_sector_s0(x, 0.0) {
        frak_c(x)
    } else if in_sector_s0(x * rot, 0.0) {
        Ok(frak_c(x * rot)? - C64::new(0.0, PI))
    } else if in_sector_s0(x * rot * rot, 0.0) {
        frak_c(x * rot * rot)
    } else {
        Err(GeomError::OutOfDomain(x, "x not in any rotated copy of S_0".into()))
    }
}

/// Exact derivative `d'(x) = I'(t) t'(x)` with
/// `t'(x) = -i sqrt(3)/2 * (3/2) sqrt(-S) S'` and `S' = -4S/(9S^2+4x)` from
/// the defining cubic.
pub fn frak_d_prime(x: C64) -> Result<C64, GeomError> {
    let s = solve_s(x)?;
    let t = t_of_s(s);
    let sp = -4.0 * s / (9.0 * s * s + 4.0 * x);
    let tp = -C64::i() * (0.75f64).sqrt() * 1.5 * (-s).sqrt() * sp;
    Ok(i_prime(t) * tp)
}

/// Derivative of `ell(x)`, from `ell = const - (1/2) ln(-3S) - (5/2) ln r*`
/// and the closed forms `r*^2 = S^2 - Delta^2/4`, `Delta^2 = 16/(3S)`.
pub fn ell_prime(x: C64) -> Result<C64, GeomError> {
    let s = solve_s(x)?;
    let spd = -4.0 * s / (9.0 * s * s + 4.0 * x);
    let sp = spectral_data(x)?;
    let dr2 = (2.0 * s + 4.0 / (3.0 * s * s)) * spd;
    let rp = 0.5 * dr2 / sp.r_star;
    Ok(-0.5 * spd / s - 2.5 * rp / sp.r_star)
}

// ---------------------------------------------------------------------------
// lambda and mu
// ---------------------------------------------------------------------------

/// `lambda(x)`: the additive normalization making the outer `g`-function
/// satisfy `g(z) = log(-z) + O(1/z)` at infinity. With the elementary
/// antiderivative
///
/// ```text
/// 3 \int (z - z*) r dz = (3 P0) r - 2 log(z - S/2 + r),
/// 3 P0(z) = z^2 + Sz/2 + ab - 3S^2/4,
/// ```
///
/// one gets `lambda = lim_R [ (3P0) r - theta + 2 log(-z) ] + 2 log(-Delta/2)
/// - 2 log(phi)` along the upward ray from `a`, where `phi = z - S/2 + r(z)`
/// is branch-tracked continuously from `phi(a) = -Delta/2`. The polynomial
/// part is evaluated through a cancellation-free rearrangement and a
/// Richardson step in `1/R` removes the leading tail.
///
/// Returns `(lambda, mu)` with `mu = lambda + i pi`.
pub fn lambda_mu(x: C64) -> Result<(C64, C64), GeomError> {
    let sp = spectral_data(x)?;
    let l1 = lambda_at_radius(&sp, 1e6);
    let l2 = lambda_at_radius(&sp, 2e6);
    let lam = 2.0 * l2 - l1;
    if (l2 - l1).norm() > 1e-4 {
        return Err(GeomError::BranchTrackingFault {
            x,
            detail: format!("lambda radii disagree by {:.3e}", (l2 - l1).norm()),
        });
    }
    Ok((lam, lam + C64::new(0.0, PI)))
}

fn lambda_at_radius(sp: &Spectral, radius: f64) -> C64 {
    let (s, delta) = (sp.s, sp.delta);
    let z_end = sp.a + C64::new(0.0, radius);
    let sigma = z_end - 0.5 * s;
    let r_end = sp.r_band(z_end);
    let g = r_end / sigma;
    // D = (3P0) r - theta without large cancellations:
    // D = S^3/4 + 1 - D4/(32 sigma (1+g)^2) - (3 S D2/8)/(1+g)
    //     + D4/(16 sigma (1+g)),   D2 = Delta^2, D4 = Delta^4
    let d2 = delta * delta;
    let d4 = d2 * d2;
    let one_g = 1.0 + g;
    let dval = s * s * s / 4.0 + 1.0 - d4 / (32.0 * sigma * one_g * one_g)
        - 3.0 * s * d2 / (8.0 * one_g)
        + d4 / (16.0 * sigma * one_g);
    // continuous log of phi(z) = z - S/2 + r(z) along the ray from a
    let phi_start = -0.5 * delta;
    let mut arg_acc = phi_start.arg();
    let s0 = delta.norm() / 100.0;
    let steps = 240usize;
    let ratio = (radius / s0).powf(1.0 / steps as f64);
    let mut prev = phi_start;
    let mut t = s0;
    for _ in 0..=steps {
        let z = sp.a + C64::new(0.0, t.min(radius));
        let phi = z - 0.5 * s + sp.r_band(z);
        arg_acc += (phi / prev).arg();
        prev = phi;
        t *= ratio;
    }
    let log_phi_end = C64::new(prev.norm().ln(), arg_acc);
    dval + 2.0 * phi_start.ln() + 2.0 * (-z_end).ln() - 2.0 * log_phi_end
}

// ---------------------------------------------------------------------------
// boundary tracing
// ---------------------------------------------------------------------------

/// Sampled edge of the elliptic region in `S_0` (the locus `Re d = 0`),
/// ordered by increasing `Im d` from the lower corner to the upper corner.
#[derive(Clone, Debug)]
pub struct BoundaryTrace {
    pub samples: Vec<C64>,
    pub d_values: Vec<C64>,
    /// Real-axis crossing of the edge.
    pub x_e: f64,
    /// Corner endpoints `x_c e^{2pi i/3}` (lower) and `x_c e^{-2pi i/3}`
    /// (upper).
    pub corners: [C64; 2],
}

/// Real-axis crossing point of the edge: the root of `d(x) = 0` on `x > 0`.
pub fn find_x_e() -> f64 {
    let mut x = 1.45f64;
    for _ in 0..60 {
        let d = frak_d_fast(C64::new(x, 0.0)).expect("x_e iteration left S_0");
        let dp = frak_d_prime(C64::new(x, 0.0)).unwrap();
        let step = (d / dp).re;
        x -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    x
}

/// Newton solve of `d(x) = target` starting from `x0`.
fn d_inverse_from(x0: C64, target: C64) -> Result<C64, GeomError> {
    let mut x = x0;
    for _ in 0..50 {
        let d = frak_d_fast(x)?;
        let dp = frak_d_prime(x)?;
        let step = (d - target) / dp;
        x -= step;
        if step.norm() < 1e-13 * (1.0 + x.norm()) {
            return Ok(x);
        }
    }
    Err(GeomError::ContinuationStall { last_good: x })
}

/// Local inversion of `d` near the edge: Newton from the nearest trace
/// sample.
pub fn d_inverse(trace: &BoundaryTrace, target: C64) -> Result<C64, GeomError> {
    let x0 = trace
        .samples
        .iter()
        .zip(&trace.d_values)
        .min_by(|a, b| {
            let da = (a.1 - target).norm();
            let db = (b.1 - target).norm();
            da.partial_cmp(&db).unwrap()
        })
        .map(|(x, _)| *x)
        .unwrap_or_else(|| C64::new(find_x_e(), 0.0));
    d_inverse_from(x0, target)
}

/// Trace the edge `Re d = 0` by predictor–corrector continuation in the
/// parameter `v = Im d` from the real axis toward both corners. `n` is the
/// total number of samples (at least 3); samples cluster geometrically near
/// the corners, where the `5/4`-power behavior compresses the
/// parametrization.
pub fn trace_boundary(n: usize) -> Result<BoundaryTrace, GeomError> {
    assert!(n >= 3, "need at least 3 boundary points");
    let x_e = find_x_e();
    let half = (n.max(31) - 1) / 2;
    let tail = 14.min(half / 2);
    let uni = half - tail;
    let v_knee: f64 = PI / 2.0 - 0.08;
    let v_extreme_off: f64 = 3e-5;
    let mut vs: Vec<f64> = Vec::with_capacity(half);
    for k in 1..=uni {
        vs.push(v_knee * k as f64 / uni as f64);
    }
    for k in 1..=tail {
        let off = 0.08 * (v_extreme_off / 0.08).powf(k as f64 / tail as f64);
        vs.push(PI / 2.0 - off);
    }
    let mut upper: Vec<(C64, C64)> = Vec::with_capacity(half);
    let mut x_cur = C64::new(x_e, 0.0);
    let mut v_cur = 0.0f64;
    for &v in &vs {
        let mut lo = v_cur;
        let mut guard = 0usize;
        while (lo - v).abs() > 1e-15 {
            let dv = v - lo;
            let dp = frak_d_prime(x_cur)?;
            let pred = x_cur + C64::new(0.0, dv) / dp;
            match d_inverse_from(pred, C64::new(0.0, lo + dv)) {
                Ok(xn) => {
                    x_cur = xn;
                    lo += dv;
                }
                Err(_) => {
                    guard += 1;
                    if guard > 80 {
                        return Err(GeomError::ContinuationStall { last_good: x_cur });
                    }
                    let mid = lo + dv / 2.0;
                    let dpm = frak_d_prime(x_cur)?;
                    let predm = x_cur + C64::new(0.0, mid - lo) / dpm;
                    let xm = d_inverse_from(predm, C64::new(0.0, mid))
                        .map_err(|_| GeomError::ContinuationStall { last_good: x_cur })?;
                    x_cur = xm;
                    lo = mid;
                }
            }
        }
        upper.push((x_cur, frak_d_fast(x_cur)?));
        v_cur = v;
    }
    let mut samples = Vec::with_capacity(2 * upper.len() + 1);
    let mut d_values = Vec::with_capacity(2 * upper.len() + 1);
    for (xv, dv) in upper.iter().rev() {
        samples.push(xv.conj());
        d_values.push(dv.conj());
    }
    samples.push(C64::new(x_e, 0.0));
    d_values.push(frak_d_fast(C64::new(x_e, 0.0))?);
    for (xv, dv) in &upper {
        samples.push(*xv);
        d_values.push(*dv);
    }
    let xc = x_corner();
    Ok(BoundaryTrace {
        samples,
        d_values,
        x_e,
        corners: [C64::from_polar(-xc, -PI / 3.0), C64::from_polar(-xc, PI / 3.0)],
    })
}

impl BoundaryTrace {
    /// Estimate of the interior opening angle at the upper corner, from the
    /// tangent directions of the two edges meeting there (this edge and the
    /// rotation of this edge by `e^{-2pi i/3}`), extrapolated along the
    /// corner approach.
    pub fn corner_angle(&self) -> f64 {
        let q = self.corners[1];
        let tangent = |pts: &[C64]| -> f64 {
            let th: Vec<f64> = pts.iter().map(|x| (x - q).arg()).collect();
            2.0 * th[th.len() - 1] - th[th.len() - 2]
        };
        let k = 6.min(self.samples.len() / 4);
        let ours: Vec<C64> = self.samples[self.samples.len() - k..].to_vec();
        let t1 = tangent(&ours);
        let rot = C64::from_polar(1.0, -2.0 * PI / 3.0);
        let adjacent: Vec<C64> = self.samples[..k].iter().rev().map(|x| x * rot).collect();
        let t2 = tangent(&adjacent);
        let mut diff = (t1 - t2).abs() % (2.0 * PI);
        if diff > PI {
            diff = 2.0 * PI - diff;
        }
        diff
    }

    /// CSV export: `re_x, im_x, re_d, im_d` for this edge followed by its two
    /// rotations (the `d` columns carry the `S_0`-preimage value, which
    /// parametrizes all three edges).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re_x,im_x,re_d,im_d\n");
        let rots = [
            C64::new(1.0, 0.0),
            C64::from_polar(1.0, 2.0 * PI / 3.0),
            C64::from_polar(1.0, -2.0 * PI / 3.0),
        ];
        for rot in rots {
            for (x, d) in self.samples.iter().zip(&self.d_values) {
                let xr = x * rot;
                out.push_str(&format!("{:e},{:e},{:e},{:e}\n", xr.re, xr.im, d.re, d.im));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    #[test]
    fn s_at_large_real_x() {
        let s = solve_s(C64::new(1e6, 0.0)).unwrap();
        assert!((s.re + 2e-6).abs() / 2e-6 < 1e-6);
    }

    #[test]
    fn s_near_origin_in_sector() {
        let s = solve_s(C64::new(1e-8, 0.0)).unwrap();
        let want = -(8.0f64 / 3.0).powf(1.0 / 3.0);
        assert!((s.re - want).abs() < 1e-7, "got {s}");
    }

    #[test]
    fn s_left_of_corner() {
        let s = solve_s(C64::new(x_corner() - 1e-7, 0.0)).unwrap();
        let want = (4.0f64 / 3.0).powf(1.0 / 3.0);
        assert!((s.re - want).abs() < 1e-3, "got {s}");
        assert!(s.im.abs() < 1e-9);
    }

    #[test]
    fn s_symmetries() {
        let x = C64::new(1.3, 0.4);
        let s = solve_s(x).unwrap();
        assert!((solve_s(x.conj()).unwrap() - s.conj()).norm() < TOL);
        let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let srot = solve_s(x * rot).unwrap();
        assert!((srot - s * C64::from_polar(1.0, -2.0 * PI / 3.0)).norm() < TOL);
    }

    #[test]
    fn s_values_frozen() {
        let s2 = solve_s(C64::new(2.0, 0.0)).unwrap();
        assert!((s2 - C64::new(-0.80463987612562860, 0.0)).norm() < 1e-12);
        let s12 = solve_s(C64::new(1.2, 0.0)).unwrap();
        assert!((s12 - C64::new(-1.0143576693331210, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn s_image_inside_univalence_curve() {
        for &(re, im) in &[(0.5, 0.2), (1.5, -0.6), (3.0, 1.0), (0.9, 0.0)] {
            let s = solve_s(C64::new(re, im)).unwrap();
            // the image boundary is rho = (4/3)^{1/3} sec^{1/3}(theta) with
            // theta measured from the nearest of the arc centers 0, ±2pi/3
            let phi = s.arg();
            let th = [0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0]
                .iter()
                .map(|c| {
                    let mut d = (phi - c).abs() % (2.0 * PI);
                    if d > PI {
                        d = 2.0 * PI - d;
                    }
                    d
                })
                .fold(f64::INFINITY, f64::min);
            assert!(th < PI / 3.0 + 1e-9);
            let bound = (4.0f64 / 3.0).powf(1.0 / 3.0) * (1.0 / th.cos()).powf(1.0 / 3.0);
            assert!(s.norm() < bound + 1e-9, "S={s} outside univalence image");
        }
    }

    #[test]
    fn cut_rejection() {
        // the cut spokes point along arg x = pi and ±pi/3
        assert!(matches!(solve_s(C64::new(-1.0, 0.0)), Err(GeomError::OnBranchCut(_))));
        assert!(matches!(
            solve_s(C64::from_polar(1.5, PI / 3.0)),
            Err(GeomError::OnBranchCut(_))
        ));
        // beyond the spoke length the ray is fine
        assert!(solve_s(C64::from_polar(4.0, PI / 3.0)).is_ok());
    }

    #[test]
    fn spectral_positivity_on_positive_axis() {
        let sp = spectral_data(C64::new(2.0, 0.0)).unwrap();
        let i_delta = C64::i() * sp.delta;
        assert!(i_delta.re > 0.0 && i_delta.im.abs() < 1e-12);
        assert!(sp.r_star.re > 0.0 && sp.r_star.im.abs() < 1e-12);
        assert!(sp.t_star.re > 1.0 && sp.t_star.im.abs() < 1e-12);
        assert!(sp.ell.im.abs() < 1e-12);
        assert!((i_delta.re - 2.57453374299819).abs() < 1e-11);
        assert!((sp.r_star.re - 1.51805840754252).abs() < 1e-11);
        assert!((sp.t_star.re - 1.8043642193349).abs() < 1e-10);
        assert!((sp.ell.re + 1.68693885532188).abs() < 1e-10);
        // band orientation: a on top for this range of arg x
        assert!(sp.a.im > sp.b.im);
    }

    #[test]
    fn r_star_identity() {
        for &(re, im) in &[(2.0, 0.0), (1.3, 0.4), (0.8, -0.3)] {
            let sp = spectral_data(C64::new(re, im)).unwrap();
            let lhs = sp.r_star * sp.r_star;
            let rhs = sp.s * sp.s - 0.25 * sp.delta * sp.delta;
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn corner_band_endpoints() {
        let sp = spectral_data(C64::new(x_corner() - 1e-6, 0.0)).unwrap();
        let a_c = -1.0 / 6.0f64.powf(1.0 / 3.0);
        let b_c = 4.5f64.powf(1.0 / 3.0);
        assert!((sp.a.re - a_c).abs() < 1e-3);
        assert!((sp.b.re - b_c).abs() < 1e-3);
    }

    #[test]
    fn frak_d_values_frozen() {
        let d2 = frak_d(C64::new(2.0, 0.0)).unwrap();
        assert!((d2 - C64::new(0.42183064168092408, 0.0)).norm() < 1e-11);
        let d1 = frak_d(C64::new(1.0, 0.0)).unwrap();
        assert!((d1 - C64::new(-0.339019910430793, 0.0)).norm() < 1e-11);
        let dc = frak_d(C64::new(1.3, 0.4)).unwrap();
        assert!((dc - C64::new(-0.10655353827690580, 0.30418908051182591)).norm() < 1e-10);
    }

    #[test]
    fn i_fixed_points() {
        // I at the corner preimage t = 1 equals i pi/2
        let v = i_of_t(C64::new(1.0, 1e-12));
        assert!((v - C64::new(0.0, PI / 2.0)).norm() < 1e-7);
        let w = i_of_t(C64::new(0.0, 2f64.sqrt()));
        assert!((w - C64::new(-1.1462158347805888, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn frak_d_schwarz_symmetry() {
        let x = C64::new(1.3, 0.4);
        let d = frak_d(x).unwrap();
        let dc = frak_d(x.conj()).unwrap();
        assert!((dc - d.conj()).norm() < TOL);
    }

    #[test]
    fn frak_c_reflection_and_rotation() {
        let x = C64::new(1.3, 0.4);
        let c = frak_c(x).unwrap();
        let cc = frak_c(x.conj()).unwrap();
        assert!((cc - (c.conj() + C64::new(0.0, PI))).norm() < TOL);
        let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let cr = frak_c_rotated(x * rot).unwrap();
        assert!((cr - (c - C64::new(0.0, PI))).norm() < TOL);
        let cr2 = frak_c_rotated(x * rot * rot).unwrap();
        assert!((cr2 - c).norm() < TOL);
    }

    #[test]
    fn frak_c_at_rotated_edge_crossings() {
        let x_e = find_x_e();
        let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let c_up = frak_c_rotated(x_e * rot).unwrap();
        assert!((c_up - C64::new(0.0, -PI / 2.0)).norm() < 1e-9);
        let c_dn = frak_c_rotated(x_e * rot * rot).unwrap();
        assert!((c_dn - C64::new(0.0, PI / 2.0)).norm() < 1e-9);
    }

    #[test]
    fn d_prime_matches_centered_differences() {
        for &(re, im) in &[(2.0, 0.0), (1.3, 0.4), (1.0, -0.2)] {
            let x = C64::new(re, im);
            let h = 1e-5;
            let fd = (frak_d_fast(x + h).unwrap() - frak_d_fast(x - h).unwrap()) / (2.0 * h);
            let an = frak_d_prime(x).unwrap();
            assert!((fd - an).norm() < 1e-8, "at {x}: fd={fd} an={an}");
        }
        let dp2 = frak_d_prime(C64::new(2.0, 0.0)).unwrap();
        assert!((dp2 - C64::new(0.75902920377126033, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn ell_prime_matches_differences() {
        let x = C64::new(1.5, 0.2);
        let h = 1e-5;
        let f = |x: C64| spectral_data(x).unwrap().ell;
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        let an = ell_prime(x).unwrap();
        assert!((fd - an).norm() < 1e-8);
    }

    #[test]
    fn lambda_anchors() {
        for &xr in &[1.2, 2.0, 3.0] {
            let (lam, mu) = lambda_mu(C64::new(xr, 0.0)).unwrap();
            assert!((lam.im + PI).abs() < 1e-9, "Im lambda({xr}) = {}", lam.im);
            assert!(mu.im.abs() < 1e-9);
        }
        let (l2, _) = lambda_mu(C64::new(2.0, 0.0)).unwrap();
        assert!((l2.re + 1.0114919107427638).abs() < 1e-9);
        let (l12, _) = lambda_mu(C64::new(1.2, 0.0)).unwrap();
        assert!((l12.re + 1.3737914616735761).abs() < 1e-9);
        let (l3, _) = lambda_mu(C64::new(3.0, 0.0)).unwrap();
        assert!((l3.re + 0.66094334778996866).abs() < 1e-9);
    }

    #[test]
    fn lambda_at_corner_limit() {
        let want = 1.0 / 3.0 - 6f64.ln() * 2.0 / 3.0;
        let (lam, _) = lambda_mu(C64::new(x_corner() - 1e-6, 0.0)).unwrap();
        assert!((lam.re - want).abs() < 5e-4, "lam={lam} want {want}");
        assert!(lam.im.abs() < 1e-9);
        // lambda(x) - lambda(x_c) ~ C sqrt(x_c - x): eliminate the sqrt term
        let (l1, _) = lambda_mu(C64::new(x_corner() - 4e-8, 0.0)).unwrap();
        let (l2, _) = lambda_mu(C64::new(x_corner() - 1e-8, 0.0)).unwrap();
        let c_est = (l1.re - l2.re) / ((4e-8f64).sqrt() - (1e-8f64).sqrt());
        let extrap = l2.re - c_est * (1e-8f64).sqrt();
        assert!((extrap - want).abs() < 1e-6, "extrap={extrap} want={want}");
    }

    #[test]
    fn lambda_schwarz_through_mu() {
        let x = C64::new(1.4, 0.35);
        let (_, mu) = lambda_mu(x).unwrap();
        let (_, muc) = lambda_mu(x.conj()).unwrap();
        assert!((muc - mu.conj()).norm() < 1e-9);
    }

    #[test]
    fn x_e_value() {
        let xe = find_x_e();
        assert!((xe - 1.4430318723300514).abs() < 1e-10);
    }

    #[test]
    fn boundary_trace_sanity() {
        let tr = trace_boundary(120).unwrap();
        for (i, d) in tr.d_values.iter().enumerate() {
            assert!(d.re.abs() < 1e-9, "Re d at {i} is {}", d.re);
            if i > 0 {
                assert!(d.im > tr.d_values[i - 1].im);
            }
        }
        let first = tr.samples[0];
        let last = *tr.samples.last().unwrap();
        assert!((first - tr.corners[0]).norm() < 1e-3, "lower endpoint {first}");
        assert!((last - tr.corners[1]).norm() < 1e-3, "upper endpoint {last}");
        assert!((tr.x_e - 1.4430318723300514).abs() < 1e-9);
        let ang = tr.corner_angle();
        assert!((ang - 2.0 * PI / 5.0).abs() < 0.05, "angle {ang}");
        // Im ell spans (-pi/4, pi/4) along the edge with 0 at x_e
        let ell_first = spectral_data(first).unwrap().ell;
        let ell_last = spectral_data(last).unwrap().ell;
        assert!((ell_first.im + PI / 4.0).abs() < 0.02);
        assert!((ell_last.im - PI / 4.0).abs() < 0.02);
        let ell_mid = spectral_data(C64::new(tr.x_e, 0.0)).unwrap().ell;
        assert!(ell_mid.im.abs() < 1e-10);
    }
}
