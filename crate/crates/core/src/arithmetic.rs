//! Exact integer number theory: sieves, squarefree counting, integer roots.
//!
//! Everything here is exact. Height thresholds like `X^(1/3) / 4^(1/3)` are
//! never materialized as floats; comparisons against them are rewritten as
//! integer inequalities (`4|A|^3 <= X`) or inverted with [`integer_nth_root`].

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Möbius and smallest-prime-factor tables up to a fixed limit.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct SieveTables {
    limit: u64,
    /// `mobius[n]` = μ(n) for `1 <= n <= limit`; entry 0 is unused.
    mobius: Vec<i8>,
    /// `spf[n]` = smallest prime factor of `n` for `2 <= n <= limit`.
    spf: Vec<u32>,
}

/// Builds Möbius and smallest-prime-factor tables for `1..=limit`
/// with a linear sieve.
pub fn build_sieves(limit: u64) -> Result<SieveTables> {
    if limit == 0 {
        return Err(Error::ZeroSieveLimit);
    }
    if limit >= u32::MAX as u64 {
        return Err(Error::SieveLimitTooLarge(limit));
    }
    let n = limit as usize;
    let mut mobius = vec![0i8; n + 1];
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    mobius[1] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            mobius[i] = -1;
            primes.push(i);
        }
        for &p in &primes {
            if p > spf[i] as usize || i * p > n {
                break;
            }
            spf[i * p] = p as u32;
            mobius[i * p] = if p == spf[i] as usize { 0 } else { -mobius[i] };
        }
    }
    Ok(SieveTables { limit, mobius, spf })
}

impl SieveTables {
    /// Builds tables just large enough to evaluate `squarefree_count(x)`
    /// for every `x <= max_x`.
    pub fn for_squarefree_counts_up_to(max_x: u64) -> Result<Self> {
        build_sieves((isqrt(max_x as u128) as u64).max(1))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// μ(n) for `1 <= n <= limit`.
    pub fn mobius(&self, n: u64) -> i8 {
        self.mobius[n as usize]
    }

    /// Smallest prime factor of `n` for `2 <= n <= limit`.
    pub fn smallest_prime_factor(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        self.mobius[n as usize] != 0
    }

    /// The primes `l` with `l^2 | n`, i.e. the primes of the square part of
    /// `n`. Requires `1 <= n <= limit`.
    pub fn square_prime_divisors(&self, n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e >= 2 {
                out.push(p as u64);
            }
        }
        out
    }

    /// `Q(x)`: the number of squarefree integers in `[1, x]`.
    ///
    /// Computed by the Legendre-style identity
    /// `Q(x) = sum_{d <= sqrt(x)} mu(d) * floor(x / d^2)`,
    /// which needs μ only up to `sqrt(x)`: O(sqrt x) time, O(sqrt x) space.
    pub fn squarefree_count(&self, x: u64) -> u64 {
        let root = isqrt(x as u128) as u64;
        assert!(
            root <= self.limit,
            "sieve tables go up to {} but Q({x}) needs mobius up to {root}",
            self.limit
        );
        let mut acc: i128 = 0;
        for d in 1..=root {
            let mu = self.mobius[d as usize];
            if mu != 0 {
                acc += mu as i128 * (x / (d * d)) as i128;
            }
        }
        acc as u64
    }

    /// `Q3(x)`: the number of squarefree integers in `[1, x]` divisible by 3.
    ///
    /// Uses the alternating identity `Q3(x) = sum_{j>=1} (-1)^(j-1) Q(x/3^j)`,
    /// which terminates once `x / 3^j` reaches zero.
    pub fn squarefree_count_div3(&self, x: u64) -> u64 {
        let mut acc: i128 = 0;
        let mut sign: i128 = 1;
        let mut t = x / 3;
        while t > 0 {
            acc += sign * self.squarefree_count(t) as i128;
            sign = -sign;
            t /= 3;
        }
        acc as u64
    }
}

/// Floor square root of a `u128`.
pub fn isqrt(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let bits = 128 - n.leading_zeros();
    let mut x = 1u128 << bits.div_ceil(2);
    loop {
        let next = (x + n / x) / 2;
        if next >= x {
            return x;
        }
        x = next;
    }
}

/// Smallest `a >= 0` with `a^2 >= n`.
pub fn ceil_sqrt(n: u128) -> u128 {
    if n == 0 {
        0
    } else {
        isqrt(n - 1) + 1
    }
}

/// `floor(x^(1/n))`, exactly, by binary search with exact powering.
///
/// Floats never enter: boundary cases where the answer's n-th power equals
/// `x` must come out exact.
pub fn integer_nth_root(x: &BigUint, n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::ZeroRootDegree);
    }
    if x.is_zero() || x.is_one() || n == 1 {
        return Ok(x.clone());
    }
    // 2^floor(bits/n) <= answer < 2^(floor(bits/n) + 1) would not quite hold;
    // use the safe bracket [0, 2^ceil(bits/n)].
    let bits = x.bits();
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one() << bits.div_ceil(n as u64);
    // Invariant: lo^n <= x < (hi+1)^n.
    while lo < hi {
        let mid: BigUint = (&lo + &hi + 1u32) >> 1u32;
        if mid.pow(n) <= *x {
            lo = mid;
        } else {
            hi = mid - 1u32;
        }
    }
    Ok(lo)
}

/// `floor(x^(1/n))` for `u128` operands. Same contract as [`integer_nth_root`].
pub fn integer_nth_root_u128(x: u128, n: u32) -> Result<u128> {
    if n == 0 {
        return Err(Error::ZeroRootDegree);
    }
    if x <= 1 || n == 1 {
        return Ok(x);
    }
    let bits = 128 - x.leading_zeros();
    let mut lo: u128 = 0;
    let mut hi: u128 = 1u128 << (bits.div_ceil(n)).min(127);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if checked_pow(mid, n).is_some_and(|p| p <= x) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

// Squares mod 64 land in few residue classes; cheap reject before isqrt.
const SQUARE_MOD_64: u64 = {
    let mut mask = 0u64;
    let mut i = 0u64;
    while i < 64 {
        mask |= 1 << ((i * i) % 64);
        i += 1;
    }
    mask
};

/// Returns the non-negative square root when `x` is a perfect square.
/// Negative inputs are never squares.
pub fn is_perfect_square(x: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let u = x as u128;
    if SQUARE_MOD_64 & (1 << (u % 64)) == 0 {
        return None;
    }
    let r = isqrt(u);
    (r * r == u).then_some(r as i128)
}

/// An exact height cutoff `X`.
///
/// A curve `y^2 = x^3 + Ax + B` has height at most `X` iff `4|A|^3 <= X` and
/// `27B^2 <= X`; both comparisons stay in integers. The derived coefficient
/// bounds are the exact integer inversions of those inequalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightBound {
    x: BigUint,
}

impl HeightBound {
    pub fn new(x: BigUint) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::ZeroHeightBound);
        }
        Ok(HeightBound { x })
    }

    pub fn from_u128(x: u128) -> Result<Self> {
        Self::new(BigUint::from(x))
    }

    /// `10^exp`, the shape of every table row.
    pub fn pow10(exp: u32) -> Self {
        HeightBound {
            x: BigUint::from(10u32).pow(exp),
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.x
    }

    /// Largest `t >= 0` with `4t^3 <= X`; equivalently `|A| <= a_bound()`
    /// iff `4|A|^3 <= X`.
    pub fn a_bound(&self) -> BigUint {
        integer_nth_root(&(&self.x >> 2u32), 3).expect("degree 3")
    }

    /// Largest `t >= 0` with `27t^2 <= X`; equivalently `|B| <= b_bound()`
    /// iff `27B^2 <= X`.
    pub fn b_bound(&self) -> BigUint {
        integer_nth_root(&(&self.x / 27u32), 2).expect("degree 2")
    }

    pub fn a_bound_u128(&self) -> Option<u128> {
        u128::try_from(self.a_bound()).ok()
    }

    pub fn b_bound_u128(&self) -> Option<u128> {
        u128::try_from(self.b_bound()).ok()
    }

    /// Exact test: does `y^2 = x^3 + ax + b` have height at most `X`?
    pub fn admits(&self, a: i128, b: i128) -> bool {
        let abs_a = BigUint::from(a.unsigned_abs());
        let abs_b = BigUint::from(b.unsigned_abs());
        (&abs_a * &abs_a * &abs_a) << 2u32 <= self.x && &abs_b * &abs_b * 27u32 <= self.x
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.x.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl From<u64> for HeightBound {
    fn from(x: u64) -> Self {
        HeightBound::from_u128(x as u128).expect("nonzero height")
    }
}

/// Parses a height bound given as plain decimal ("4096"), caret power
/// ("10^30"), or scientific notation with integer mantissa ("25e9").
/// Anything non-integral is rejected.
pub fn parse_height_spec(s: &str) -> Result<HeightBound> {
    fn digits(s: &str) -> Result<BigUint> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
            return Err(Error::BadHeightSpec(format!(
                "'{s}' is not a non-negative integer (heights must be exact integers)"
            )));
        }
        Ok(s.parse().expect("digit string"))
    }
    fn small_exp(s: &str, whole: &str) -> Result<u32> {
        s.trim().parse().map_err(|_| {
            Error::BadHeightSpec(format!(
                "exponent in '{whole}' is not a small non-negative integer"
            ))
        })
    }
    let t = s.trim();
    let value = if let Some((base, exp)) = t.split_once('^') {
        digits(base)?.pow(small_exp(exp, t)?)
    } else if let Some((mant, exp)) = t.split_once(['e', 'E']) {
        digits(mant)? * BigUint::from(10u32).pow(small_exp(exp, t)?)
    } else {
        digits(t)?
    };
    HeightBound::new(value)
}

impl std::fmt::Display for HeightBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    // Brute force by trial factorization, the independent oracle for μ.
    fn mobius_brute(n: u64) -> i8 {
        let mut m = n;
        let mut k = 0;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                k += 1;
            }
            p += 1;
        }
        if m > 1 {
            k += 1;
        }
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn squarefree_brute(n: u64) -> bool {
        mobius_brute(n) != 0
    }

    #[test]
    fn sieve_rejects_zero_limit() {
        assert_eq!(build_sieves(0).unwrap_err(), Error::ZeroSieveLimit);
    }

    #[test]
    fn mobius_first_ten() {
        let t = build_sieves(10).unwrap();
        let got: Vec<i8> = (1..=10).map(|n| t.mobius(n)).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        assert_eq!(t.mobius(1), 1);
        assert_eq!(t.mobius(4), 0);
    }

    #[test]
    fn mobius_matches_brute_force() {
        let t = build_sieves(3000).unwrap();
        for n in 1..=3000 {
            assert_eq!(t.mobius(n), mobius_brute(n), "mu({n})");
        }
    }

    #[test]
    fn mobius_multiplicative_on_coprime_samples() {
        let t = build_sieves(100_000).unwrap();
        for a in [2u64, 3, 5, 9, 14, 55, 97, 120, 243] {
            for b in [7u64, 11, 13, 25, 81, 99, 101] {
                if gcd(a, b) == 1 {
                    assert_eq!(t.mobius(a * b), t.mobius(a) * t.mobius(b));
                }
            }
        }
    }

    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }

    #[test]
    fn spf_is_prime_divisor() {
        let t = build_sieves(10_000).unwrap();
        for n in 2..=10_000u64 {
            let p = t.smallest_prime_factor(n);
            assert_eq!(n % p, 0);
            // p prime: its own spf is itself.
            assert_eq!(t.smallest_prime_factor(p), p);
            if p * p > n {
                // n must then be prime.
                assert_eq!(p, n);
            }
        }
    }

    #[test]
    fn square_prime_divisors_examples() {
        let t = build_sieves(10_000).unwrap();
        assert_eq!(t.square_prime_divisors(1), Vec::<u64>::new());
        assert_eq!(t.square_prime_divisors(12), vec![2]);
        assert_eq!(t.square_prime_divisors(360), vec![2, 3]);
        assert_eq!(t.square_prime_divisors(9900), vec![2, 3, 5]);
        assert_eq!(t.square_prime_divisors(30), Vec::<u64>::new());
    }

    #[test]
    fn squarefree_count_small() {
        let t = SieveTables::for_squarefree_counts_up_to(100).unwrap();
        assert_eq!(t.squarefree_count(0), 0);
        assert_eq!(t.squarefree_count(1), 1);
        // 1,2,3,5,6,7,10
        assert_eq!(t.squarefree_count(10), 7);
    }

    #[test]
    fn squarefree_count_matches_bitmask_sieve_at_1e6() {
        // Oracle: mark every multiple of p^2 up to 1e6.
        let n = 1_000_000usize;
        let mut free = vec![true; n + 1];
        let mut d = 2usize;
        while d * d <= n {
            let mut m = d * d;
            while m <= n {
                free[m] = false;
                m += d * d;
            }
            d += 1;
        }
        let expected = (1..=n).filter(|&k| free[k]).count() as u64;
        let t = SieveTables::for_squarefree_counts_up_to(n as u64).unwrap();
        assert_eq!(t.squarefree_count(n as u64), expected);
    }

    #[test]
    fn squarefree_count_matches_brute_force_prefix() {
        let t = SieveTables::for_squarefree_counts_up_to(2000).unwrap();
        let mut count = 0;
        for x in 1..=2000u64 {
            if squarefree_brute(x) {
                count += 1;
            }
            assert_eq!(t.squarefree_count(x), count, "Q({x})");
        }
    }

    #[test]
    fn squarefree_div3_examples() {
        let t = SieveTables::for_squarefree_counts_up_to(100).unwrap();
        assert_eq!(t.squarefree_count_div3(2), 0);
        // 3, 6, 15, 21, 30
        assert_eq!(t.squarefree_count_div3(30), 5);
    }

    #[test]
    fn squarefree_div3_matches_brute_force_prefix() {
        let t = SieveTables::for_squarefree_counts_up_to(3000).unwrap();
        let mut count = 0;
        for x in 1..=3000u64 {
            if x % 3 == 0 && squarefree_brute(x) {
                count += 1;
            }
            assert_eq!(t.squarefree_count_div3(x), count, "Q3({x})");
        }
    }

    #[test]
    fn squarefree_partition_identity_at_1e4() {
        // Q3(x) + #{n <= x squarefree, 3 not dividing n} = Q(x).
        let x = 10_000u64;
        let t = SieveTables::for_squarefree_counts_up_to(x).unwrap();
        let not_div3 = (1..=x).filter(|&n| n % 3 != 0 && squarefree_brute(n)).count() as u64;
        assert_eq!(t.squarefree_count_div3(x) + not_div3, t.squarefree_count(x));
    }

    #[test]
    fn nth_root_examples() {
        let r = |x: u128, n: u32| {
            u128::try_from(integer_nth_root(&BigUint::from(x), n).unwrap()).unwrap()
        };
        assert_eq!(r(26, 3), 2);
        assert_eq!(r(27, 3), 3);
        assert_eq!(r(0, 5), 0);
        assert_eq!(r(1, 7), 1);
        let big = BigUint::from(10u32).pow(60);
        assert_eq!(
            integer_nth_root(&big, 6).unwrap(),
            BigUint::from(10u64.pow(10))
        );
        assert_eq!(integer_nth_root(&big, 0), Err(Error::ZeroRootDegree));
        assert_eq!(integer_nth_root_u128(26, 3), Ok(2));
        assert_eq!(integer_nth_root_u128(27, 3), Ok(3));
        assert_eq!(integer_nth_root_u128(0, 2), Ok(0));
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(1), 1);
        assert_eq!(isqrt(2), 1);
        assert_eq!(isqrt(3), 1);
        assert_eq!(isqrt(4), 2);
        assert_eq!(isqrt(u128::MAX), (1u128 << 64) - 1);
        assert_eq!(ceil_sqrt(0), 0);
        assert_eq!(ceil_sqrt(1), 1);
        assert_eq!(ceil_sqrt(2), 2);
        assert_eq!(ceil_sqrt(4), 2);
        assert_eq!(ceil_sqrt(5), 3);
    }

    #[test]
    fn perfect_square_examples() {
        assert_eq!(is_perfect_square(3600), Some(60));
        assert_eq!(is_perfect_square(-1296), None);
        assert_eq!(is_perfect_square(2), None);
        assert_eq!(is_perfect_square(0), Some(0));
        assert_eq!(is_perfect_square(1), Some(1));
        for x in 0..2000i128 {
            let expect = {
                let r = isqrt(x as u128) as i128;
                (r * r == x).then_some(r)
            };
            assert_eq!(is_perfect_square(x), expect, "x = {x}");
        }
    }

    #[test]
    fn height_bound_thresholds() {
        let h = HeightBound::from_u128(4096).unwrap();
        assert_eq!(u64::try_from(h.a_bound()).unwrap(), 10); // 4*10^3 = 4000 <= 4096 < 4*11^3
        assert_eq!(u64::try_from(h.b_bound()).unwrap(), 12); // 27*144 = 3888 <= 4096 < 27*169
        assert!(h.admits(10, 12));
        assert!(!h.admits(11, 0));
        assert!(!h.admits(0, 13));
        assert_eq!(HeightBound::new(BigUint::zero()), Err(Error::ZeroHeightBound));

        // (height <= X) iff (|A| <= a_bound and |B| <= b_bound), sampled.
        let h = HeightBound::from_u128(987_654_321).unwrap();
        let ab = h.a_bound_u128().unwrap() as i128;
        let bb = h.b_bound_u128().unwrap() as i128;
        for a in [-ab - 1, -ab, -1, 0, 1, ab, ab + 1] {
            for b in [-bb - 1, -bb, 0, bb, bb + 1] {
                let exact = 4 * a.unsigned_abs().pow(3) <= 987_654_321
                    && 27 * b.unsigned_abs().pow(2) <= 987_654_321;
                assert_eq!(h.admits(a, b), exact, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn height_spec_parsing() {
        let p = |s: &str| parse_height_spec(s).unwrap().value().clone();
        assert_eq!(p("1000000"), BigUint::from(1_000_000u64));
        assert_eq!(p("10^30"), BigUint::from(10u32).pow(30));
        assert_eq!(p("1e30"), BigUint::from(10u32).pow(30));
        assert_eq!(p("25e9"), BigUint::from(25_000_000_000u64));
        assert_eq!(p(" 2E3 "), BigUint::from(2000u32));
        for bad in ["", "1.5e3", "-4", "10^-2", "0x10", "ten", "1e", "^3"] {
            assert!(parse_height_spec(bad).is_err(), "'{bad}'");
        }
        assert_eq!(parse_height_spec("0").unwrap_err(), Error::ZeroHeightBound);
    }

    #[test]
    fn odd_mobius_sum_converges_to_euler_factor() {
        // sum_{d odd} mu(d)/d^4 = 1/(zeta(4)(1 - 2^-4)) = 16/(15 zeta(4)).
        let t = build_sieves(100_000).unwrap();
        let mut s = 0.0f64;
        for d in (1..=100_000u64).step_by(2) {
            let mu = t.mobius(d);
            if mu != 0 {
                s += mu as f64 / (d as f64).powi(4);
            }
        }
        let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
        assert!((s - 16.0 / (15.0 * zeta4)).abs() < 1e-8);
    }
}
