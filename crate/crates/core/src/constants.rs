//! Numerical evaluation of the asymptotic constants, with error bounds.
//!
//! The leading and secondary coefficients of the counts are assembled from
//! a handful of one-dimensional integrals of algebraic functions, one nested
//! double integral, and two slowly converging lattice sums over `1/sqrt(p8)`.
//! Every reported value carries a guaranteed absolute error bound: quadrature
//! bounds come from the Gauss-Kronrod embedded estimate summed over the
//! adaptive subdivision, series bounds from the analytic tail inequality
//! `sum_{w > W} (w/2 + 1) w^-4 < 1/(4W^2) + 1/(3W^3)`.
//!
//! The census modules never consume these values; they exist to compare the
//! exact counts against the asymptotic predictions.

use crate::{Error, Result};

/// A value paired with a guaranteed absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

impl Estimate {
    fn exact(value: f64) -> Self {
        // Closed forms evaluated in f64 are correct to a few ulp.
        Estimate {
            value,
            error_bound: 4.0 * f64::EPSILON * value.abs(),
        }
    }

    /// Do two estimates agree within their combined bounds?
    pub fn consistent_with(&self, other: &Estimate) -> bool {
        (self.value - other.value).abs() <= self.error_bound + other.error_bound
    }
}

impl std::fmt::Display for Estimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.15} ± {:.1e}", self.value, self.error_bound)
    }
}

/// `p8(u, 1) = u^8 + 14u^4 + 1`.
fn p8_unit(u: f64) -> f64 {
    let u4 = (u * u) * (u * u);
    u4 * u4 + 14.0 * u4 + 1.0
}

// --- adaptive Gauss-Kronrod quadrature -------------------------------------

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One 15-point Kronrod evaluation with the embedded 7-point Gauss error
/// estimate; returns `(integral, error_estimate)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    // The center is both a Kronrod node and the middle Gauss node.
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [[0.0f64; 7]; 2];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[0][j] = f1;
        fv[1][j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[0][j] - mean).abs() + (fv[1][j] - mean).abs());
    }
    let err = ((res_kronrod - res_gauss) * half).abs();
    let res_asc = res_asc * half.abs();
    // QUADPACK error rescaling.
    let mut scaled = err;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let res_abs = res_abs * half.abs();
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    (res_kronrod * half, scaled)
}

#[derive(Debug)]
struct Segment {
    err: f64,
    lo: f64,
    hi: f64,
    value: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

const MAX_SEGMENTS: usize = 20_000;

/// Adaptive quadrature: repeatedly bisect the segment with the worst Kronrod
/// error estimate until the estimates sum below `tol` (global strategy, so
/// endpoint trouble spends subdivisions only where it must).
pub fn quad_adaptive<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> Result<Estimate> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::BadTolerance);
    }
    let mut heap = std::collections::BinaryHeap::new();
    let (value, err) = gk15(f, lo, hi);
    heap.push(Segment { err, lo, hi, value });
    let mut total_err = err;
    let span = (hi - lo).abs();
    while total_err > tol && heap.len() < MAX_SEGMENTS {
        let worst = heap.peek().expect("heap nonempty");
        // Cannot split meaningfully below f64 resolution.
        if (worst.hi - worst.lo).abs() < 16.0 * f64::EPSILON * span {
            break;
        }
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let (v1, e1) = gk15(f, worst.lo, mid);
        let (v2, e2) = gk15(f, mid, worst.hi);
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            err: e1,
            lo: worst.lo,
            hi: mid,
            value: v1,
        });
        heap.push(Segment {
            err: e2,
            lo: mid,
            hi: worst.hi,
            value: v2,
        });
    }
    // Re-sum to shed the drift of incremental updates.
    let value = heap.iter().map(|s| s.value).sum();
    let error_bound: f64 = heap.iter().map(|s| s.err).sum();
    if error_bound > tol {
        return Err(Error::QuadratureNonConvergence {
            requested: tol,
            achieved: error_bound,
        });
    }
    Ok(Estimate { value, error_bound })
}

// Below this the Kronrod estimate is noise in f64.
const QUAD_TOL_FLOOR: f64 = 1e-13;

fn quad_tol(requested: f64) -> f64 {
    requested.max(QUAD_TOL_FLOOR)
}

// --- the individual constants ----------------------------------------------

/// `alpha2 = 2^(-1/3) 3^(-1/2)`, the `|b|`-scale of the region.
pub fn alpha2() -> f64 {
    0.5f64.cbrt() / 3.0f64.sqrt()
}

/// `alpha1 = ((sqrt6 + sqrt3)/18)^(1/3) - ((sqrt6 - sqrt3)/18)^(1/3)`, the
/// Cardano root of `u^3 + 4^(-1/3) u = 27^(-1/2)` where the two upper
/// boundary curves of the region cross.
pub fn alpha1() -> f64 {
    let (s6, s3) = (6.0f64.sqrt(), 3.0f64.sqrt());
    ((s6 + s3) / 18.0).cbrt() - ((s6 - s3) / 18.0).cbrt()
}

/// `alpha3 = int_0^1 du / sqrt(p8(u, 1))`.
pub fn compute_alpha3(tol: f64) -> Result<Estimate> {
    quad_adaptive(&|u| 1.0 / p8_unit(u).sqrt(), 0.0, 1.0, quad_tol(tol))
}

/// `beta`, as half the polar integral over the region `p8(x, y) <= 1`,
/// `0 <= x <= y`. The integrand `1 / (2 p8(1, tan t)^(1/4) cos^2 t)` is
/// rewritten over `q(t) = cos^8 t + 14 cos^4 t sin^4 t + sin^8 t` so the
/// upper endpoint needs no tangent.
pub fn compute_beta(tol: f64) -> Result<Estimate> {
    let f = |t: f64| {
        let (s, c) = t.sin_cos();
        let c4 = (c * c) * (c * c);
        let s4 = (s * s) * (s * s);
        let q = c4 * c4 + 14.0 * c4 * s4 + s4 * s4;
        0.5 / q.powf(0.25)
    };
    quad_adaptive(&f, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2, quad_tol(tol))
}

/// Lower limit `g(t) = ((t^4 + 48)^(1/2) - 7)^(1/4)` of the inner integral
/// of `alpha4`, with the subtraction done cancellation-free.
pub fn tail_lower_limit(t: f64) -> f64 {
    let t4 = t * t * t * t;
    ((t4 - 1.0) / ((t4 + 48.0).sqrt() + 7.0)).powf(0.25)
}

/// `alpha4 = int_1^2 int_{g(t)}^1 du dt / sqrt(p8(u, 1))` with the default
/// budget of `1e-10`.
pub fn compute_alpha4() -> Result<Estimate> {
    compute_alpha4_with(1e-10)
}

/// `alpha4` with a caller-chosen absolute error budget.
///
/// `g` has a fourth-root branch at `t = 1`, so substitute `t = 1 + s^4`:
/// both the substituted lower limit and the outer integrand become smooth
/// and the nested quadrature converges at full speed.
pub fn compute_alpha4_with(tol: f64) -> Result<Estimate> {
    let inner_tol = quad_tol(tol / 20.0);
    let outer_tol = quad_tol(tol / 2.0);
    let integrand = |u: f64| 1.0 / p8_unit(u).sqrt();
    let inner_failed = std::cell::Cell::new(false);
    // Inner integral from g(t) to 1, times the Jacobian dt/ds = 4 s^3.
    let outer = |s: f64| -> f64 {
        let t = 1.0 + s * s * s * s;
        let g = tail_lower_limit(t);
        match quad_adaptive(&integrand, g, 1.0, inner_tol) {
            Ok(e) => e.value * 4.0 * s * s * s,
            Err(_) => {
                inner_failed.set(true);
                0.0
            }
        }
    };
    let est = quad_adaptive(&outer, 0.0, 1.0, outer_tol)?;
    if inner_failed.get() {
        return Err(Error::QuadratureNonConvergence {
            requested: inner_tol,
            achieved: f64::NAN,
        });
    }
    // Each outer evaluation carries at most inner_tol of error over a unit
    // t-range.
    Ok(Estimate {
        value: est.value,
        error_bound: est.error_bound + inner_tol,
    })
}

/// The four area integrals `i1..i4` of the one-pair region, each within
/// `tol`.
///
/// `i3`'s integrand `sqrt(3u^2 - 4^(-1/3)) = sqrt(3) sqrt(u - a2) sqrt(u + a2)`
/// vanishes as a square root at `u = alpha2`, so it is integrated in the
/// substituted variable `u = alpha2 + s^2` where it is smooth.
pub fn compute_i_integrals(tol: f64) -> Result<[Estimate; 4]> {
    let t = quad_tol(tol);
    let a1 = alpha1();
    let a2 = alpha2();
    let quarter_pow = 0.25f64.cbrt(); // 4^(-1/3) = 3 * alpha2^2
    let inv_sqrt27 = 1.0 / 27.0f64.sqrt();

    let i1 = quad_adaptive(&|u| 2.0 * (3.0 * u * u + quarter_pow).sqrt(), 0.0, a1, t)?;
    let i2 = quad_adaptive(
        &|u| 2.0 * (2.0 * u * u + inv_sqrt27 / u).sqrt(),
        a1,
        2.0 * a2,
        t,
    )?;
    let i3 = quad_adaptive(
        &|s| {
            let u = a2 + s * s;
            4.0 * s * s * (3.0 * (u + a2)).sqrt()
        },
        0.0,
        a2.sqrt(),
        t,
    )?;
    let i4 = Estimate {
        value: i1.value + i2.value - i3.value,
        error_bound: i1.error_bound + i2.error_bound + i3.error_bound,
    };
    Ok([i1, i2, i3, i4])
}

/// Which parity restriction a `1/sqrt(p8(v,w))` lattice sum carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesParity {
    /// `v != w (mod 2)`: the sum `s0'`.
    Mixed,
    /// `v, w` both odd: the sum `s1'`.
    BothOdd,
}

/// Truncation point: smallest `W` with
/// `sum_{w > W} (w/2 + 1) w^-4 <= 1/(4W^2) + 1/(3W^3) < tol`.
fn series_cutoff(tol: f64) -> u64 {
    let tail = |w: f64| 1.0 / (4.0 * w * w) + 1.0 / (3.0 * w * w * w);
    let mut w = (1.0 / (4.0 * tol)).sqrt().ceil().max(2.0);
    while tail(w) >= tol {
        w = (w * 1.1).ceil() + 1.0;
    }
    w as u64
}

/// Partial sum of `1/sqrt(p8(v, w))` over `1 <= v < w` in the parity class,
/// truncated at the analytically bounded cutoff for `tol`.
///
/// Terms only ever shrink (`p8 > w^8`), so a Kahan accumulator keeps the
/// rounding error orders of magnitude below the tail bound.
pub fn compute_series(parity: SeriesParity, tol: f64) -> Result<Estimate> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::BadTolerance);
    }
    let cutoff = series_cutoff(tol);
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for w in 2..=cutoff {
        let v_start = match parity {
            SeriesParity::Mixed => 1 + (w % 2),
            SeriesParity::BothOdd => {
                if w % 2 == 0 {
                    continue;
                }
                1
            }
        };
        let wf = w as f64;
        let w4 = wf * wf * wf * wf;
        for v in (v_start..w).step_by(2) {
            let vf = v as f64;
            let v4 = vf * vf * vf * vf;
            let term = 1.0 / (v4 * v4 + 14.0 * v4 * w4 + w4 * w4).sqrt();
            let y = term - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
    }
    let wf = cutoff as f64;
    let tail = 1.0 / (4.0 * wf * wf) + 1.0 / (3.0 * wf * wf * wf);
    Ok(Estimate {
        value: sum,
        error_bound: tail + 1e-14,
    })
}

/// Every constant of the asymptotic expansions, with error bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsReport {
    pub requested_tol: f64,
    pub zeta2: Estimate,
    pub zeta4: Estimate,
    pub alpha1: Estimate,
    pub alpha2: Estimate,
    pub alpha3: Estimate,
    pub alpha4: Estimate,
    pub beta: Estimate,
    pub i1: Estimate,
    pub i2: Estimate,
    pub i3: Estimate,
    pub i4: Estimate,
    pub s0_prime: Estimate,
    pub s1_prime: Estimate,
    pub s0: Estimate,
    pub c11: Estimate,
    pub c12: Estimate,
    pub c21: Estimate,
}

/// Default per-constant error target.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Runtime floor for the lattice sums: the cutoff grows as `tol^(-1/2)`, so
/// pushing the series past this point costs minutes for digits the
/// downstream constants cannot use.
pub const SERIES_TOL_FLOOR: f64 = 2e-10;

impl ConstantsReport {
    /// `2*beta - (alpha3 + alpha4)`, which must vanish; the identity ties
    /// the region area to the two tail integrals.
    pub fn two_beta_identity_residual(&self) -> f64 {
        2.0 * self.beta.value - self.alpha3.value - self.alpha4.value
    }
}

/// Computes every constant with per-constant absolute error at most `tol`
/// (series-backed ones at most `max(tol, SERIES_TOL_FLOOR) * 1.4`).
pub fn assemble_constants(tol: f64) -> Result<ConstantsReport> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::BadTolerance);
    }
    let pi = std::f64::consts::PI;
    let zeta2 = Estimate::exact(pi * pi / 6.0);
    let zeta4 = Estimate::exact(pi.powi(4) / 90.0);
    let a1 = Estimate::exact(alpha1());
    let a2 = Estimate::exact(alpha2());

    let alpha3 = compute_alpha3(tol / 2.0)?;
    let beta = compute_beta(tol / 2.0)?;
    let alpha4 = compute_alpha4_with(tol)?;
    let [i1, i2, i3, i4] = compute_i_integrals(tol / 4.0)?;

    let series_tol = (0.7 * tol).max(SERIES_TOL_FLOOR);
    let s0_prime = compute_series(SeriesParity::Mixed, series_tol)?;
    let s1_prime = compute_series(SeriesParity::BothOdd, series_tol)?;

    // s0 = 16 s0' / (15 zeta(4)): the coprimality restriction is an odd
    // Euler factor away from the unrestricted sum.
    let s0_scale = 16.0 / (15.0 * zeta4.value);
    let s0 = Estimate {
        value: s0_scale * s0_prime.value,
        error_bound: s0_scale * s0_prime.error_bound + 1e-15,
    };

    let c11 = Estimate {
        value: i4.value / zeta4.value,
        error_bound: i4.error_bound / zeta4.value + 1e-15,
    };

    // c21 = 16 (s0' + 4 s1') / (2^(1/3) 27^(1/2) 5 zeta(2) zeta(4)).
    let k = 16.0 / (2.0f64.cbrt() * 27.0f64.sqrt() * 5.0 * zeta2.value * zeta4.value);
    let c21 = Estimate {
        value: k * (s0_prime.value + 4.0 * s1_prime.value),
        error_bound: k * (s0_prime.error_bound + 4.0 * s1_prime.error_bound) + 1e-15,
    };

    // c12 = -3 alpha2 / zeta(2) - c21.
    let c12 = Estimate {
        value: -3.0 * a2.value / zeta2.value - c21.value,
        error_bound: 3.0 * a2.error_bound / zeta2.value + c21.error_bound + 1e-15,
    };

    Ok(ConstantsReport {
        requested_tol: tol,
        zeta2,
        zeta4,
        alpha1: a1,
        alpha2: a2,
        alpha3,
        alpha4,
        beta,
        i1,
        i2,
        i3,
        i4,
        s0_prime,
        s1_prime,
        s0,
        c11,
        c12,
        c21,
    })
}
