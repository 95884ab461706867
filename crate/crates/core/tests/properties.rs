#![allow(clippy::manual_is_multiple_of)]
//! Cross-module invariants and randomized properties.

use fourisog::arithmetic::{
    integer_nth_root, integer_nth_root_u128, HeightBound, SieveTables,
};
use fourisog::census::{
    count_full_scan, count_n1_fast, count_n2, count_r1_region_points, count_r2_lattice,
    r1_membership, ParityClass,
};
use fourisog::constants::{assemble_constants, compute_beta, compute_i_integrals};
use fourisog::curves::{classify_pairs, is_singular, MinimalCurve};

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn nth_root_bracket_on_random_inputs() {
    // 1e4 random (x, n), n <= 8, x <= 10^60: r^n <= x < (r+1)^n.
    let mut rng = StdRng::seed_from_u64(0x4007);
    let ten60 = BigUint::from(10u32).pow(60);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=8u32);
        let bits = rng.random_range(1..=199u32); // 2^199 < 10^60 floor area
        let mut x = BigUint::from(1u32) << bits;
        // Sprinkle random low limbs so x is not a power of two.
        x += BigUint::from(rng.random::<u64>());
        let x = x % &ten60;
        let r = integer_nth_root(&x, n).unwrap();
        assert!(r.pow(n) <= x, "r^n <= x for x={x}, n={n}");
        assert!((r + 1u32).pow(n) > x, "(r+1)^n > x for n={n}");
    }
}

#[test]
fn squarefree_count_brute_force_to_1e5() {
    let t = SieveTables::for_squarefree_counts_up_to(100_000).unwrap();
    let mut q = 0u64;
    let mut q3 = 0u64;
    for x in 1..=100_000u64 {
        if squarefree_by_trial(x) {
            q += 1;
            if x % 3 == 0 {
                q3 += 1;
            }
        }
        assert_eq!(t.squarefree_count(x), q, "Q({x})");
        assert_eq!(t.squarefree_count_div3(x), q3, "Q3({x})");
    }
}

fn squarefree_by_trial(n: u64) -> bool {
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

#[test]
fn classify_cap_holds_on_full_scan_to_1e9() {
    // classify_pairs itself asserts count <= 2; the scan exercises it over
    // every minimal curve of height <= 1e9 (no two-pair curve exists yet:
    // their minimum height is 4 * 1443^3 > 1.2e10).
    let t = count_full_scan(&HeightBound::from(1_000_000_000u64)).unwrap();
    assert_eq!(t.two_pairs, 0);
    assert!(t.at_least_one_pair() > 0);
}

#[test]
fn region_area_constant_matches_lattice_density() {
    // Points of the full region (both signs of a, no exclusions) at
    // X = 10^18, against area 2 * i4 * X^(1/3), within 5%.
    let points = count_r1_region_points(&HeightBound::pow10(18)).unwrap() as f64;
    let [_, _, _, i4] = compute_i_integrals(1e-12).unwrap();
    let ratio = points / 1e6 / (2.0 * i4.value);
    assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn r2_lattice_density_approaches_beta() {
    // Each parity class holds ~ (beta/4) z^(1/4) points; at z = 10^24 the
    // O(z^(1/8)) boundary term sits three orders below the count.
    let beta = compute_beta(1e-12).unwrap().value;
    let z = 1_000_000_000_000_000_000_000_000u128; // 10^24
    let predicted = beta / 4.0 * 1e6;
    for class in ParityClass::ALL {
        let got = count_r2_lattice(z, class, false) as f64;
        assert!(
            (got / predicted - 1.0).abs() < 0.03,
            "{class:?}: {got} vs {predicted}"
        );
    }
    // Coprime variant: density drops by the odd zeta(2) Euler factor,
    // beta/(3 zeta(2)) instead of beta/4.
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    let predicted_coprime = beta / (3.0 * zeta2) * 1e6;
    let got = count_r2_lattice(z, ParityClass::OddEven, true) as f64;
    assert!((got / predicted_coprime - 1.0).abs() < 0.03, "{got} vs {predicted_coprime}");
}

#[cfg(feature = "parallel")]
#[test]
fn counts_independent_of_thread_count() {
    let x = HeightBound::pow10(15);
    let mut outcomes = Vec::new();
    for threads in [1usize, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let (n1, n2, scan) = pool.install(|| {
            (
                count_n1_fast(&x).unwrap().n1.unwrap(),
                count_n2(&x).unwrap().n2.unwrap(),
                count_full_scan(&HeightBound::from(1_000_000u64)).unwrap(),
            )
        });
        outcomes.push((n1, n2, scan.at_least_one_pair(), scan.two_pairs));
    }
    assert!(outcomes.windows(2).all(|w| w[0] == w[1]), "{outcomes:?}");
}

proptest! {
    #[test]
    fn u128_nth_root_bracket(x in any::<u128>(), n in 1u32..=8) {
        let r = integer_nth_root_u128(x, n).unwrap();
        let pow = |b: u128, e: u32| -> Option<u128> {
            let mut acc = 1u128;
            for _ in 0..e { acc = acc.checked_mul(b)?; }
            Some(acc)
        };
        prop_assert!(pow(r, n).is_some_and(|p| p <= x));
        let above = r.checked_add(1).and_then(|r1| pow(r1, n));
        prop_assert!(above.is_none_or(|p| p > x));
    }

    #[test]
    fn classify_agrees_with_brute_force(a in -120i128..=120, b in -400i128..=400) {
        prop_assume!(!is_singular(a, b));
        // Independent oracle: scan every candidate integer root directly.
        let bound = 1 + a.unsigned_abs().max(b.unsigned_abs()) as i128;
        let mut expected = 0;
        for x in -bound..=bound {
            if x * x * x + a * x + b == 0 {
                let t = 3 * x * x + a;
                if t > 0 {
                    let r = (t as f64).sqrt().round() as i128;
                    if r * r == t {
                        expected += 1;
                    }
                }
            }
        }
        let got = classify_pairs(&MinimalCurve::new_unchecked(a, b)).unwrap();
        prop_assert_eq!(got.count(), expected);
        for w in &got.witnesses {
            prop_assert_eq!(w.b0 * w.b0 * w.b0 + a * w.b0 + b, 0);
            prop_assert_eq!(3 * w.b0 * w.b0 + a, w.a * w.a);
            prop_assert!(w.a > 0);
            prop_assert_eq!(w.gamma, 3 * w.b0);
            prop_assert_eq!(w.delta, w.a);
        }
    }

    #[test]
    fn membership_flags_match_definitions(
        a in 0i64..=2_000,
        b in -2_000i64..=2_000,
        x in 1u128..=100_000_000_000u128,
    ) {
        let hx = HeightBound::from_u128(x).unwrap();
        let p = r1_membership(&hx, a, b);
        let (ai, bi) = (a as i128, b as i128);
        let f = (ai * ai - 3 * bi * bi).unsigned_abs();
        let g = (ai * ai * bi - 2 * bi * bi * bi).unsigned_abs();
        // 4|f|^3 <= X and 27 g^2 <= X, evaluated in u256 via BigUint.
        let in_region = BigUint::from(f).pow(3) * 4u32 <= BigUint::from(x)
            && BigUint::from(g).pow(2) * 27u32 <= BigUint::from(x);
        prop_assert_eq!(p.in_region, in_region);
        // Singular iff the image discriminant 4A^3 + 27B^2 vanishes.
        let big_a = ai * ai - 3 * bi * bi;
        let big_b = 2 * bi * bi * bi - ai * ai * bi;
        prop_assert_eq!(p.singular, is_singular(big_a, big_b));
        // Square-excluded iff some prime square divides both.
        let mut excluded = a == 0 && b == 0;
        for l in 2..=46i64 {
            let l2 = l * l;
            if ai % (l2 as i128) == 0 && bi % (l2 as i128) == 0 {
                excluded = true;
            }
        }
        prop_assert_eq!(p.square_excluded, excluded);
    }

    #[test]
    fn n2_monotone_in_x(x in 1u128..=10u128.pow(16), y in 1u128..=10u128.pow(16)) {
        let (lo, hi) = (x.min(y), x.max(y));
        let a = count_n2(&HeightBound::from_u128(lo).unwrap()).unwrap().n2.unwrap();
        let b = count_n2(&HeightBound::from_u128(hi).unwrap()).unwrap().n2.unwrap();
        prop_assert!(a <= b);
    }
}

#[test]
fn constants_report_internal_relations() {
    let r = assemble_constants(1e-10).unwrap();
    // i4 is the exact combination of the computed i1, i2, i3.
    assert_eq!(r.i4.value, r.i1.value + r.i2.value - r.i3.value);
    // c11 = i4 / zeta(4), c12 = -3 alpha2 / zeta(2) - c21, s0 = 16 s0'/(15 zeta4).
    assert!((r.c11.value - r.i4.value / r.zeta4.value).abs() < 1e-15);
    assert!(
        (r.c12.value - (-3.0 * r.alpha2.value / r.zeta2.value - r.c21.value)).abs() < 1e-15
    );
    assert!((r.s0.value - 16.0 * r.s0_prime.value / (15.0 * r.zeta4.value)).abs() < 1e-15);
    let k = 16.0 / (2f64.cbrt() * 27f64.sqrt() * 5.0 * r.zeta2.value * r.zeta4.value);
    assert!((r.c21.value - k * (r.s0_prime.value + 4.0 * r.s1_prime.value)).abs() < 1e-15);
}
