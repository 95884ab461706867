//! Browser bindings for the interactive demo page in `www/`.
//!
//! Three operations, each returning a JSON string so the page needs no
//! generated TypeScript glue:
//!
//! * [`classify_curve`] — pair count, witnesses, and the `(r, v, w)`
//!   parameter of a single curve;
//! * [`region_points`] — the lattice points of the counting region at a
//!   (small) height bound, flagged for plotting;
//! * [`two_pair_family`] — every two-pair curve up to a height bound,
//!   ordered by height.
//!
//! Errors come back as `{"error": "..."}` rather than thrown exceptions.
//!
//! Build with `wasm-pack build crates/wasm --target web --out-dir www/pkg`;
//! the crate also compiles natively so the bindings stay under `cargo test`.

use wasm_bindgen::prelude::*;

use fourisog::arithmetic::{parse_height_spec, HeightBound};
use fourisog::census::{count_n2, enumerate_triples, r1_membership};
use fourisog::curves::{
    classify_pairs, legendre_two_pair_model, param_ab, recover_triple, MinimalCurve,
};
use serde_json::json;

fn err_json(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Classifies `y^2 = x^3 + Ax + B` (coefficients as decimal strings).
#[wasm_bindgen]
pub fn classify_curve(a: &str, b: &str) -> String {
    let (Ok(a), Ok(b)) = (a.trim().parse::<i128>(), b.trim().parse::<i128>()) else {
        return err_json("coefficients must be integers (up to ~38 digits)");
    };
    let curve = match MinimalCurve::new(a, b) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let class = classify_pairs(&curve).expect("validated nonsingular");
    let witnesses: Vec<_> = class
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "b0": w.b0.to_string(),
                "a": w.a.to_string(),
                "gamma": w.gamma.to_string(),
                "delta": w.delta.to_string(),
            })
        })
        .collect();
    let mut out = json!({
        "a": a.to_string(),
        "b": b.to_string(),
        "height": curve.height().to_string(),
        "count": class.count(),
        "witnesses": witnesses,
    });
    if let Some(t) = recover_triple(&curve) {
        let roots = legendre_two_pair_model(&t);
        out["triple"] = json!({
            "r": t.r(), "v": t.v(), "w": t.w(),
            "case": t.case_tag().to_string(),
            "legendre_roots": [roots[0].to_string(), roots[1].to_string(), roots[2].to_string()],
        });
    }
    out.to_string()
}

/// Point classes for the region plot.
const CLASS_COUNTED: u8 = 0;
const CLASS_SINGULAR: u8 = 1;
const CLASS_EXCLUDED: u8 = 2;

/// Lattice points `(a, b)`, `a >= 0`, of the counting region at height
/// bound `x_spec` (capped at 10^10 to keep the payload plottable), each as
/// `[a, b, class]`. The page mirrors `a -> -a` for display; flags are even
/// in `a`.
#[wasm_bindgen]
pub fn region_points(x_spec: &str) -> String {
    let x = match parse_height_spec(x_spec) {
        Ok(x) => x,
        Err(e) => return err_json(e),
    };
    let cap = parse_height_spec("1e10").expect("static spec");
    if x.value() > cap.value() {
        return err_json("region plotting is capped at X = 10^10 (~5000 points)");
    }
    let b_max = {
        // Rows stop where b^2 > c1 + c2/b; scanning up is cheap at this cap.
        let mut b = 0i64;
        while r1_row_nonempty(&x, b + 1) {
            b += 1;
        }
        b
    };
    // In-region points satisfy a^2 <= 3b^2 + c1.
    let a_max = x
        .a_bound_u128()
        .map(|c1| fourisog::arithmetic::isqrt(3 * (b_max as u128).pow(2) + c1) as i64)
        .unwrap_or(0);
    let mut points = Vec::new();
    let mut counted = 0u64;
    for a in 0..=a_max {
        for b in -b_max..=b_max {
            let p = r1_membership(&x, a, b);
            if !p.in_region {
                continue;
            }
            let class = if p.singular {
                CLASS_SINGULAR
            } else if p.square_excluded {
                CLASS_EXCLUDED
            } else {
                counted += 1;
                CLASS_COUNTED
            };
            points.push(json!([a, b, class]));
        }
    }
    let n2 = count_n2(&x).expect("within guard").n2.unwrap();
    json!({
        "x": x.value().to_string(),
        "a_max": a_max,
        "b_max": b_max,
        "points": points,
        "lattice_count": counted,
        "n2": n2,
        "n1": counted - n2,
    })
    .to_string()
}

fn r1_row_nonempty(x: &HeightBound, b: i64) -> bool {
    let (c1, c2) = match (x.a_bound_u128(), x.b_bound_u128()) {
        (Some(c1), Some(c2)) => (c1, c2),
        _ => return false,
    };
    let b = b as u128;
    b * b <= c1 + c2 / b
}

/// Every two-pair curve of height at most `x_spec` (capped at 10^30), as
/// `{r, v, w, case, a, b, height}`, ordered by height.
#[wasm_bindgen]
pub fn two_pair_family(x_spec: &str) -> String {
    let x = match parse_height_spec(x_spec) {
        Ok(x) => x,
        Err(e) => return err_json(e),
    };
    let cap = parse_height_spec("1e30").expect("static spec");
    if x.value() > cap.value() {
        return err_json("family browsing is capped at X = 10^30 (3544 curves)");
    }
    let triples = match enumerate_triples(&x) {
        Ok(t) => t,
        Err(e) => return err_json(e),
    };
    let mut rows: Vec<_> = triples
        .iter()
        .map(|t| {
            let c = param_ab(t);
            (c.height(), t, c)
        })
        .collect();
    rows.sort_by(|p, q| p.0.cmp(&q.0).then(p.1.cmp(q.1)));
    let rows: Vec<_> = rows
        .iter()
        .map(|(h, t, c)| {
            json!({
                "r": t.r(), "v": t.v(), "w": t.w(),
                "case": t.case_tag().to_string(),
                "a": c.a.to_string(),
                "b": c.b.to_string(),
                "height": h.to_string(),
            })
        })
        .collect();
    json!({
        "x": x.value().to_string(),
        "count": rows.len(),
        "curves": rows,
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_round_trip() {
        let v: serde_json::Value =
            serde_json::from_str(&classify_curve("-1443", "-9758")).unwrap();
        assert_eq!(v["count"], 2);
        assert_eq!(v["triple"]["r"], 3);
        assert_eq!(v["triple"]["case"], "(ii)");
        // Roots (0, r, r((1 - tau^2)/(1 + tau^2))^2) with r = 3, tau = 1/2.
        assert_eq!(v["triple"]["legendre_roots"][1], "3");
        assert_eq!(v["triple"]["legendre_roots"][2], "27/25");

        let v: serde_json::Value = serde_json::from_str(&classify_curve("0", "0")).unwrap();
        assert!(v["error"].as_str().unwrap().contains("singular"));

        let v: serde_json::Value = serde_json::from_str(&classify_curve("x", "1")).unwrap();
        assert!(v.get("error").is_some());
    }

    #[test]
    fn region_matches_counts() {
        let v: serde_json::Value = serde_json::from_str(&region_points("4096")).unwrap();
        assert_eq!(v["n1"], 11);
        assert_eq!(v["lattice_count"], 11);
        assert!(v["points"].as_array().unwrap().len() > 11);

        let v: serde_json::Value = serde_json::from_str(&region_points("10^12")).unwrap();
        assert!(v["error"].as_str().unwrap().contains("capped"));
    }

    #[test]
    fn family_lists_first_curves() {
        let v: serde_json::Value = serde_json::from_str(&two_pair_family("2e10")).unwrap();
        assert_eq!(v["count"], 2);
        let curves = v["curves"].as_array().unwrap();
        assert_eq!(curves[0]["height"], "12018741228");
        assert_eq!(curves[0]["a"], "-1443");
    }
}
