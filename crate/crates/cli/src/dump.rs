//! Canonical example tables for cross-implementation testing.

use serde_json::{json, Value};

use qdrh_core::framed::{gamma_coeffs, nabla_coeffs};
use qdrh_core::qarith::{q_binomial, q_integer, Integers, Rationals};
use qdrh_core::semilinear::gamma_multiplier;
use qdrh_core::{SeriesRing, VarKind};

const MAX_N: u64 = 12;

fn coeff_strings<T: ToString>(c: &[T]) -> Vec<String> {
    c.iter().map(ToString::to_string).collect()
}

/// `[n]_q` and `binom(n, k)_q` as coefficient lists in powers of `q`.
pub fn qarith_tables() -> Value {
    let ints: Vec<Value> = (0..=MAX_N)
        .map(|n| json!({"n": n, "q_coeffs": coeff_strings(q_integer(Integers, n).coeffs())}))
        .collect();
    let binoms: Vec<Value> = (0..=MAX_N)
        .flat_map(|n| {
            (0..=n).map(move |k| {
                let b = q_binomial(n, k).expect("k <= n");
                json!({"n": n, "k": k, "q_coeffs": coeff_strings(b.coeffs())})
            })
        })
        .collect();
    json!({"q_integers": ints, "q_binomials": binoms})
}

fn images(v: Vec<(i64, qdrh_core::qarith::Zq)>) -> Vec<Value> {
    v.into_iter()
        .map(|(e, c)| json!({"x_exp": e, "coeff": c.to_string()}))
        .collect()
}

/// `∇_q` and `γ` on monomials `x^e` for the framings `T = x`, `T = x + 1`
/// and `T = x^{±1}`; `γ_a` multipliers `[a]_q/[a]_{q^m}` as series in
/// `q - 1` over `Q` to precision 6.
pub fn framed_tables() -> Value {
    let mut nabla = Vec::new();
    for (kind, shift, range) in [
        (VarKind::Poly, 0, 0..=6),
        (VarKind::Poly, 1, 0..=6),
        (VarKind::Laurent, 0, -3..=6),
    ] {
        for e in range {
            nabla.push(json!({
                "kind": kind, "shift": shift, "exp": e,
                "nabla": images(nabla_coeffs(kind, shift, e)),
                "gamma": images(gamma_coeffs(kind, shift, e, 1)),
            }));
        }
    }
    let s = SeriesRing::new(Rationals, 6).expect("precision 6");
    let mut gamma = Vec::new();
    for m in 0..=6i64 {
        for a in 1..=6i64 {
            let x = gamma_multiplier(&s, a, m).expect("a is invertible over Q");
            gamma.push(json!({"m": m, "a": a, "t_coeffs": coeff_strings(x.coeffs())}));
        }
    }
    json!({"monomials": nabla, "gamma_multipliers": gamma})
}

pub fn dump(domain: &str) -> Result<Value, String> {
    match domain {
        "qarith" => Ok(json!({"qarith": qarith_tables()})),
        "framed" => Ok(json!({"framed": framed_tables()})),
        "all" => Ok(json!({"qarith": qarith_tables(), "framed": framed_tables()})),
        other => Err(format!(
            "unknown dump domain {other:?} (expected qarith, framed or all)"
        )),
    }
}
