//! JSON encodings of exact and approximate values.
//!
//! Elements of `Z[ζ_p]` are coordinate lists in the basis `1, ζ, …,
//! ζ^{p−2}`; elements of `Q(π)` are lists of `[rational, π-power]` pairs;
//! valuations and rationals are strings so that nothing passes through a
//! float.

use num_traits::Zero;
use serde_json::{json, Value};
use weil2::cohomology::{CharPoly, Coeffs, WeightVerdict};
use weil2::numeric::{CycloElem, PiAdicApprox, PiFieldElem, Valuation, Q64};

pub fn q64(x: Q64) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn valuation(v: Valuation) -> String {
    v.to_string()
}

pub fn cyclo(x: &CycloElem) -> Value {
    Value::Array(x.coords().iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn pi_elem(x: &PiFieldElem) -> Value {
    Value::Array(
        x.coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| json!([c.to_string(), k]))
            .collect(),
    )
}

/// `{"value": …, "known_mod_vp": …}`.
pub fn approx(x: &PiAdicApprox) -> Value {
    json!({ "value": pi_elem(x.value()), "known_mod_vp": valuation(x.known_mod()) })
}

pub fn charpoly(cp: &CharPoly) -> Value {
    match &cp.coeffs {
        Coeffs::Exact(c) => json!({
            "q": cp.q,
            "provenance": "oracle-exact",
            "tate_twist": cp.tate_twist,
            "coefficients": c.iter().map(cyclo).collect::<Vec<_>>(),
        }),
        Coeffs::Approx(c) => json!({
            "q": cp.q,
            "provenance": "precision-bounded",
            "tate_twist": cp.tate_twist,
            "known_mod_vp": valuation(cp.known_mod()),
            "coefficients": c.iter().map(approx).collect::<Vec<_>>(),
        }),
    }
}

/// Twelve significant digits.
pub fn decimal(x: f64) -> String {
    format!("{:.11e}", x)
}

/// `|α|²` for a degree-one exact polynomial `1 + c·t`, where `α = −c`.
pub fn exact_squared_modulus(cp: &CharPoly) -> Option<String> {
    match &cp.coeffs {
        Coeffs::Exact(c) if c.len() == 2 => c[1].norm_squared().as_integer().map(|n| n.to_string()),
        _ => None,
    }
}

pub fn weight(v: &WeightVerdict, cp: &CharPoly) -> Value {
    json!({
        "pass": v.pass,
        "worst_relative_deviation": decimal(v.worst_deviation),
        "moduli": v.moduli.iter().map(|m| decimal(*m)).collect::<Vec<_>>(),
        "squared_modulus_exact": exact_squared_modulus(cp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use weil2::numeric::PiField;

    #[test]
    fn pi_pairs_skip_zero_coordinates() {
        let f = PiField::new(3).unwrap();
        let x = &f.from_int(2) + &f.pi();
        assert_eq!(pi_elem(&x), json!([["2", 0], ["1", 1]]));
        assert_eq!(q64(Q64::new(3, 6)), "1/2");
        assert_eq!(decimal(3f64.sqrt()), "1.73205080757e0");
    }

    #[test]
    fn gauss_modulus_is_exact() {
        let c = CycloElem::from_coords(3, vec![1.into(), 2.into()]).unwrap();
        let cp = CharPoly::exact(3, vec![CycloElem::from_int(3, 1), c.clone()]);
        assert_eq!(exact_squared_modulus(&cp).as_deref(), Some("3"));
        assert_eq!(cyclo(&c), json!(["1", "2"]));
    }
}
