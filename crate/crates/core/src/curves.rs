//! Curve models and the pair-classification machinery.
//!
//! A curve `y^2 = x^3 + Ax + B` has a pair of Galois-stable cyclic order-4
//! subgroups for each integer root `b0` of the cubic such that `3*b0^2 + A`
//! is a positive perfect square `a^2`: shifting `x` by `b0` then yields the
//! model `y^2 = x(x^2 + 3*b0*x + a^2)`, whose 4-torsion points above `(0,0)`
//! have rational x-coordinates. There are never more than two such pairs.
//!
//! Two-pair curves are exactly the image of the integer family
//! `(r, v, w) -> (A(r,v,w), B(r,v,w))` built from the binary forms `p8` and
//! `p12`, split into four cases by `3 | r` and the parity of `v, w`. The
//! family is a bijection onto minimal models, and [`recover_triple`] inverts
//! it.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::arithmetic::{is_perfect_square, isqrt};
use crate::complex::Complex;
use crate::{Error, Result};

/// `y^2 = x^3 + a*x + b` with integer coefficients, nonsingular, and minimal
/// (no prime `l` with `l^4 | a` and `l^6 | b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinimalCurve {
    pub a: i128,
    pub b: i128,
}

impl MinimalCurve {
    /// Validates nonsingularity and minimality.
    pub fn new(a: i128, b: i128) -> Result<Self> {
        if is_singular(a, b) {
            return Err(Error::SingularCurve);
        }
        match minimality_obstruction(a, b) {
            None => Ok(MinimalCurve { a, b }),
            Some(l) => Err(Error::NonMinimalCurve(l)),
        }
    }

    /// Skips validation. The census loops check the invariants themselves
    /// before constructing.
    pub fn new_unchecked(a: i128, b: i128) -> Self {
        MinimalCurve { a, b }
    }

    /// `max{4|a|^3, 27 b^2}`, exactly.
    pub fn height(&self) -> BigUint {
        let qa = BigUint::from(self.a.unsigned_abs());
        let qb = BigUint::from(self.b.unsigned_abs());
        let ha = (&qa * &qa * &qa) << 2u32;
        let hb = &qb * &qb * 27u32;
        ha.max(hb)
    }
}

/// `4a^3 + 27b^2 == 0`?
pub fn is_singular(a: i128, b: i128) -> bool {
    let fast = || -> Option<bool> {
        let a3 = a.checked_mul(a)?.checked_mul(a)?.checked_mul(4)?;
        let b2 = b.checked_mul(b)?.checked_mul(27)?;
        a3.checked_add(b2).map(|d| d == 0)
    };
    fast().unwrap_or_else(|| {
        let d: BigInt = BigInt::from(a).pow(3) * 4 + BigInt::from(b).pow(2) * 27;
        d.is_zero()
    })
}

/// The smallest prime `l` with `l^4 | a` and `l^6 | b`, if any.
pub fn minimality_obstruction(a: i128, b: i128) -> Option<u64> {
    let (a, b) = (a.unsigned_abs(), b.unsigned_abs());
    let mut l: u128 = 2;
    // A composite l passing the test implies its prime factors pass too, so
    // scanning all integers is sound; the first hit is automatically prime.
    loop {
        let l4 = l * l * l * l;
        if a != 0 && l4 > a {
            return None;
        }
        let l6 = l4 * l * l;
        if a == 0 && (b == 0 || l6 > b) {
            return None;
        }
        if (a == 0 || a % l4 == 0) && (b == 0 || b % l6 == 0) && !(a == 0 && b == 0) {
            return Some(l as u64);
        }
        l += if l == 2 { 1 } else { 2 };
    }
}

/// `p8(v, w) = v^8 + 14 v^4 w^4 + w^8`.
pub fn p8(v: i64, w: i64) -> BigInt {
    let v4 = BigInt::from(v).pow(4);
    let w4 = BigInt::from(w).pow(4);
    &v4 * &v4 + 14 * &v4 * &w4 + &w4 * &w4
}

/// `p12(v, w) = v^12 - 33 v^8 w^4 - 33 v^4 w^8 + w^12`.
pub fn p12(v: i64, w: i64) -> BigInt {
    let v4 = BigInt::from(v).pow(4);
    let w4 = BigInt::from(w).pow(4);
    v4.pow(3) - 33 * &v4 * &v4 * &w4 - 33 * &v4 * &w4 * &w4 + w4.pow(3)
}

/// `p8` on machine words; callers keep `w <= 2^15` so this cannot overflow.
pub(crate) fn p8_u128(v: u64, w: u64) -> u128 {
    let v4 = (v as u128).pow(4);
    let w4 = (w as u128).pow(4);
    v4 * v4 + 14 * v4 * w4 + w4 * w4
}

fn p12_i128(v: u64, w: u64) -> i128 {
    let v4 = (v as i128).pow(4);
    let w4 = (w as i128).pow(4);
    v4 * v4 * v4 - 33 * v4 * v4 * w4 - 33 * v4 * w4 * w4 + w4 * w4 * w4
}

/// Which of the four parametrization cases a triple falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `3 ∤ r`, `v ≢ w (mod 2)`
    I,
    /// `3 | r`, `v ≢ w (mod 2)`
    II,
    /// `3 ∤ r`, `v, w` both odd
    III,
    /// `3 | r`, `v, w` both odd
    IV,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseTag::I => "(i)",
            CaseTag::II => "(ii)",
            CaseTag::III => "(iii)",
            CaseTag::IV => "(iv)",
        };
        f.write_str(s)
    }
}

/// The bijective parameter of two-pair curves: `r` squarefree positive,
/// `1 <= v < w`, `gcd(v, w) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoPairTriple {
    r: u64,
    v: u64,
    w: u64,
}

impl TwoPairTriple {
    pub fn new(r: u64, v: u64, w: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidTriple("r must be positive".into()));
        }
        if !(1..w).contains(&v) {
            return Err(Error::InvalidTriple(format!(
                "need 1 <= v < w, got v={v}, w={w}"
            )));
        }
        if gcd_u64(v, w) != 1 {
            return Err(Error::InvalidTriple(format!(
                "v={v} and w={w} are not coprime"
            )));
        }
        let (sf, _) = squarefree_part(r as u128);
        if sf != r as u128 {
            return Err(Error::InvalidTriple(format!("r={r} is not squarefree")));
        }
        Ok(TwoPairTriple { r, v, w })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn w(&self) -> u64 {
        self.w
    }

    pub fn case_tag(&self) -> CaseTag {
        let div3 = self.r % 3 == 0;
        let both_odd = self.v % 2 == 1 && self.w % 2 == 1;
        match (div3, both_odd) {
            (false, false) => CaseTag::I,
            (true, false) => CaseTag::II,
            (false, true) => CaseTag::III,
            (true, true) => CaseTag::IV,
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `u = s^2 * r` with `r` squarefree: returns `(r, s)`.
pub(crate) fn squarefree_part(u: u128) -> (u128, u128) {
    let mut m = u;
    let mut r: u128 = 1;
    let mut s: u128 = 1;
    let mut p: u128 = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e % 2 == 1 {
                r *= p;
            }
            for _ in 0..e / 2 {
                s *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (r * m, s)
}

fn exact_div(n: i128, d: i128) -> i128 {
    assert!(
        n % d == 0,
        "inexact division {n}/{d}: parametrization invariant violated"
    );
    n / d
}

/// The minimal model `(A, B)` of the two-pair curve with parameter `t`.
///
/// The divisions below are exact: for odd `v, w` one has `16 | p8` and
/// `64 | p12`, and `3 | r` contributes `9 | r^2`, `27 | r^3`.
pub fn param_ab(t: &TwoPairTriple) -> MinimalCurve {
    let r = t.r as i128;
    let r2 = r * r;
    let r3 = r2 * r;
    let p8v = p8_u128(t.v, t.w) as i128;
    let p12v = p12_i128(t.v, t.w);
    let ovf = "triple exceeds the supported i128 coefficient range";
    let r2p8 = r2.checked_mul(p8v).expect(ovf);
    let r3p12 = r3.checked_mul(p12v).expect(ovf);
    let (a, b) = match t.case_tag() {
        CaseTag::I => (
            r2p8.checked_mul(-27).expect(ovf),
            r3p12.checked_mul(54).expect(ovf),
        ),
        CaseTag::II => (-exact_div(r2p8, 3), exact_div(r3p12.checked_mul(2).expect(ovf), 27)),
        CaseTag::III => (
            -exact_div(r2p8.checked_mul(27).expect(ovf), 16),
            exact_div(r3p12.checked_mul(27).expect(ovf), 32),
        ),
        CaseTag::IV => (-exact_div(r2p8, 48), exact_div(r3p12, 864)),
    };
    MinimalCurve::new_unchecked(a, b)
}

/// All integer roots of `x^3 + a*x + b`, ascending, without duplicates.
///
/// The cubic is monotone outside `[-s, s]` with `s = sqrt(-a/3)` (empty for
/// `a >= 0`), so each of the up to three monotone integer ranges is searched
/// by exact binary bisection. Evaluation falls back to big integers when the
/// coefficients are large; no factorization of `b` is ever attempted.
pub fn integer_roots_cubic(a: i128, b: i128) -> Vec<i128> {
    // Cauchy bound: any root x satisfies |x| <= 1 + max(|a|, |b|).
    let bound = 1i128
        .checked_add(a.unsigned_abs().max(b.unsigned_abs()) as i128)
        .unwrap_or(i128::MAX);

    // Use native evaluation only when x^3 + a*x + b cannot overflow.
    const SAFE: i128 = 3_000_000_000_000i128; // SAFE^3 + SAFE^2 + SAFE < i128::MAX
    let eval_fits = bound <= SAFE;

    let sign_at = |x: i128| -> std::cmp::Ordering {
        if eval_fits {
            (x * x * x + a * x + b).cmp(&0)
        } else {
            let v = BigInt::from(x).pow(3) + BigInt::from(a) * x + b;
            v.sign().cmp(&num_bigint::Sign::NoSign)
        }
    };

    let mut pieces = [(0i128, -1i128, true); 3]; // (lo, hi, increasing)
    let n_pieces;
    if a >= 0 {
        pieces[0] = (-bound, bound, true);
        n_pieces = 1;
    } else {
        let q = (-a) as u128 / 3;
        let s_f = isqrt(q) as i128;
        let s_exact = s_f as u128 * s_f as u128 * 3 == (-a) as u128;
        let s_c = if s_exact { s_f } else { s_f + 1 };
        pieces[0] = (-bound, -s_c, true);
        pieces[1] = (-s_f, s_f, false);
        pieces[2] = (s_c, bound, true);
        n_pieces = 3;
    }

    let mut roots = Vec::new();
    for &(mut lo, mut hi, increasing) in &pieces[..n_pieces] {
        if lo > hi {
            continue;
        }
        // Bisect for the zero crossing of a monotone function.
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let s = sign_at(mid);
            let below = if increasing {
                s == std::cmp::Ordering::Less
            } else {
                s == std::cmp::Ordering::Greater
            };
            if below {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if sign_at(lo) == std::cmp::Ordering::Equal {
            roots.push(lo);
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// One pair of Galois-stable cyclic order-4 subgroups, witnessed by the
/// shifted model `y^2 = x(x^2 + gamma*x + delta^2)` at `x -> x + b0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairWitness {
    /// Integer root of `x^3 + Ax + B`.
    pub b0: i128,
    /// Positive square root of `3*b0^2 + A`.
    pub a: i128,
    /// `3 * b0`, the x-coefficient shift.
    pub gamma: i128,
    /// `= a`; the subgroup generators have x-coordinates `±delta`.
    pub delta: i128,
}

/// Outcome of [`classify_pairs`]: between zero and two witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub witnesses: Vec<PairWitness>,
}

impl PairClassification {
    pub fn count(&self) -> usize {
        self.witnesses.len()
    }
}

/// Counts the pairs of Galois-stable cyclic order-4 subgroups of
/// `y^2 = x^3 + ax + b`: the integer roots `b0` of the cubic with
/// `3*b0^2 + a` a positive perfect square. Singular input is rejected.
pub fn classify_pairs(c: &MinimalCurve) -> Result<PairClassification> {
    if is_singular(c.a, c.b) {
        return Err(Error::SingularCurve);
    }
    let mut witnesses = Vec::new();
    for b0 in integer_roots_cubic(c.a, c.b) {
        if let Some(aw) = shift_coefficient_root(b0, c.a) {
            witnesses.push(PairWitness {
                b0,
                a: aw,
                gamma: b0.checked_mul(3).expect("gamma exceeds i128"),
                delta: aw,
            });
        }
    }
    assert!(witnesses.len() <= 2, "more than two pairs is impossible");
    Ok(PairClassification { witnesses })
}

/// Positive square root of `3*b0^2 + a` when that is a positive square.
fn shift_coefficient_root(b0: i128, a: i128) -> Option<i128> {
    if let Some(t) = b0
        .checked_mul(b0)
        .and_then(|s| s.checked_mul(3))
        .and_then(|s| s.checked_add(a))
    {
        return is_perfect_square(t).filter(|&r| r > 0);
    }
    // Wide fallback for coefficients near the i128 edge.
    let t: BigInt = BigInt::from(b0).pow(2) * 3 + a;
    if t.sign() != num_bigint::Sign::Plus {
        return None;
    }
    let u = t.magnitude();
    let root = u.sqrt();
    (&root * &root == *u).then(|| i128::try_from(root).expect("root fits i128"))
}

/// Inverts [`param_ab`]: the unique `(r, v, w)` with `param_ab(t) == *c`,
/// or `None` when `c` does not have exactly two pairs.
///
/// Construction: the two-pair model `y^2 = x(x - r)(x - r*eta^2)` has all
/// three 2-torsion roots rational, so translate the smallest integer root of
/// the cubic to zero, read `r` off as the squarefree part of the largest
/// translated root, and solve `eta = (1 - tau^2)/(1 + tau^2)` for
/// `tau = v/w` in lowest terms. A final `param_ab` round-trip guards the
/// result.
pub fn recover_triple(c: &MinimalCurve) -> Option<TwoPairTriple> {
    let class = classify_pairs(c).ok()?;
    if class.count() != 2 {
        return None;
    }
    let roots = integer_roots_cubic(c.a, c.b);
    if roots.len() != 3 {
        return None;
    }
    // Translate the smallest root to zero; the other two become positive.
    let u1 = roots[1].checked_sub(roots[0])? as u128;
    let u2 = roots[2].checked_sub(roots[0])? as u128;
    let (r, _) = squarefree_part(u2);
    let r = u64::try_from(r).ok()?;
    // eta^2 = u1/u2 must be the square of a rational p/q.
    let g = gcd_u128(u1, u2);
    let p = exact_sqrt(u1 / g)?;
    let q = exact_sqrt(u2 / g)?;
    // tau^2 = (1 - eta)/(1 + eta) = (q - p)/(q + p) must be a square v^2/w^2.
    let g2 = gcd_u128(q - p, q + p);
    let v = u64::try_from(exact_sqrt((q - p) / g2)?).ok()?;
    let w = u64::try_from(exact_sqrt((q + p) / g2)?).ok()?;
    let t = TwoPairTriple::new(r, v, w).ok()?;
    (param_ab(&t) == *c).then_some(t)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn exact_sqrt(n: u128) -> Option<u128> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// An exact rational with positive denominator, reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: i128,
    pub den: i128,
}

impl Rational {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        Rational {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// The three 2-torsion roots `(0, r, r((1-tau^2)/(1+tau^2))^2)` of the
/// Legendre-style two-pair model, as exact rationals (`tau = v/w`).
pub fn legendre_two_pair_model(t: &TwoPairTriple) -> [Rational; 3] {
    let (r, v, w) = (t.r as i128, t.v as i128, t.w as i128);
    let num = w * w - v * v;
    let den = w * w + v * v;
    [
        Rational::new(0, 1),
        Rational::new(r, 1),
        Rational::new(r * num * num, den * den),
    ]
}

/// The four 4-torsion points doubling to `(rho1, 0)` on
/// `y^2 = (x - rho1)(x - rho2)(x - rho3)`, in floating complex arithmetic:
///
/// `(rho1 ± s2 s3,  ± s2 s3 (s2 ± s3))`, `s_i = sqrt(rho1 - rho_i)`,
/// the first and third signs agreeing.
pub fn four_torsion_points(rho: [Complex; 3]) -> Result<[(Complex, Complex); 4]> {
    if rho[0] == rho[1] || rho[0] == rho[2] || rho[1] == rho[2] {
        return Err(Error::RepeatedRoots);
    }
    let s2 = (rho[0] - rho[1]).sqrt();
    let s3 = (rho[0] - rho[2]).sqrt();
    let prod = s2 * s3;
    let mut out = [(Complex::ZERO, Complex::ZERO); 4];
    let mut k = 0;
    for sign1 in [1.0f64, -1.0] {
        for sign2 in [1.0f64, -1.0] {
            let x = rho[0] + prod * sign1;
            let y = prod * (s2 + s3 * sign1) * sign2;
            out[k] = (x, y);
            k += 1;
        }
    }
    Ok(out)
}
