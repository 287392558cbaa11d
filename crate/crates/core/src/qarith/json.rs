//! JSON encoding of exact coefficients, polynomials and series.
//!
//! Values are objects `{"ring": <descriptor>, "coeffs": ["1", "-2", ...]}`
//! with coefficients as decimal strings, lowest degree first.

use serde_json::{json, Value};

use super::poly::QPolynomial;
use super::ring::{CoeffRing, CoeffRingSpec};
use super::series::QSeries;
use crate::error::{Error, Result};

pub fn coeffs_to_json<R: CoeffRing>(ring: &R, c: &[R::Elem]) -> Value {
    json!({
        "ring": ring.spec(),
        "coeffs": c.iter().map(|x| ring.format(x)).collect::<Vec<_>>(),
    })
}

/// Reads the ring descriptor of an encoded value.
pub fn ring_of(v: &Value) -> Result<CoeffRingSpec> {
    let spec: CoeffRingSpec = serde_json::from_value(v.get("ring").cloned().unwrap_or(Value::Null))
        .map_err(|e| Error::Parse(format!("ring descriptor: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

fn coeffs_of<R: CoeffRing>(ring: &R, v: &Value) -> Result<Vec<R::Elem>> {
    let spec = ring_of(v)?;
    if spec != ring.spec() {
        return Err(Error::Parse(format!(
            "expected coefficients in {}, found {:?}",
            ring.name(),
            spec
        )));
    }
    let arr = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"coeffs\" array".into()))?;
    arr.iter()
        .map(|x| match x {
            Value::String(s) => ring.parse_elem(s),
            Value::Number(n) => ring.parse_elem(&n.to_string()),
            _ => Err(Error::Parse(format!("bad coefficient {x}"))),
        })
        .collect()
}

pub fn poly_from_json<R: CoeffRing>(ring: &R, v: &Value) -> Result<QPolynomial<R>> {
    Ok(QPolynomial::new(ring.clone(), coeffs_of(ring, v)?))
}

/// Decodes a series; its precision is the length of the coefficient list.
pub fn series_from_json<R: CoeffRing>(ring: &R, v: &Value) -> Result<QSeries<R>> {
    let c = coeffs_of(ring, v)?;
    let n = c.len();
    if n == 0 {
        return Err(Error::Parse("a series needs precision at least 1".into()));
    }
    Ok(QSeries::from_t_coeffs(ring.clone(), n, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::poly::q_integer;
    use crate::qarith::ring::{Integers, ZMod};

    #[test]
    fn roundtrip() {
        let r = ZMod::new(3, 2).unwrap();
        let s = QSeries::from_poly(&q_integer(r, 4), 3);
        let v = s.to_json();
        assert_eq!(v["ring"], json!({"kind": "zmod", "p": 3, "M": 2}));
        assert_eq!(v["coeffs"], json!(["4", "6", "4"]));
        assert_eq!(series_from_json(&r, &v).unwrap(), s);
        assert!(series_from_json(&Integers, &v).is_err());
        let p = q_integer(Integers, 3);
        assert_eq!(poly_from_json(&Integers, &p.to_json()).unwrap(), p);
    }
}
