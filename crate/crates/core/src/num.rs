//! Integer and rational helpers plus their JSON rendering.
//!
//! Integers serialize as JSON numbers while they fit in an `i64` and as
//! decimal strings beyond that. Rationals serialize as bare integers when
//! the denominator is one and as `"p/q"` strings otherwise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use std::fmt;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn ints(vs: &[i64]) -> Vec<BigInt> {
    vs.iter().map(|&v| BigInt::from(v)).collect()
}

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| ints(r)).collect()
}

/// Non-negative gcd of all entries; zero for an empty or all-zero slice.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: IntMatrix = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn rational_to_json(q: &BigRational) -> serde_json::Value {
    if q.denom().is_one() {
        int_to_json(q.numer())
    } else {
        serde_json::Value::String(render_rational(q))
    }
}

pub fn int_to_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::String(v.to_string()),
    }
}

/// Sign of the first nonzero entry, or zero.
pub fn leading_sign(values: &[BigInt]) -> i32 {
    values
        .iter()
        .find(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .unwrap_or(0)
}

pub mod json_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    struct IntVisitor;

    impl<'de> Visitor<'de> for IntVisitor {
        type Value = BigInt;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an integer or a decimal integer string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(BigInt::from(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(BigInt::from(v))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            v.parse()
                .map_err(|_| E::custom(format!("not an integer: {v:?}")))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

pub mod json_int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&int_to_json(x))?;
        }
        seq.end()
    }
}

pub mod json_int_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for row in m {
            let row: Vec<serde_json::Value> = row.iter().map(int_to_json).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = int_matrix(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(determinant(&m), int(4));
        let m = int_matrix(&[&[0, 0, -1], &[0, 2, 0], &[-1, 0, 0]]);
        assert_eq!(determinant(&m), int(-2));
        let m = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&m), int(-1));
        let m = int_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&m), int(0));
    }

    #[test]
    fn rational_rendering() {
        let q = BigRational::new(int(6), int(-4));
        assert_eq!(render_rational(&q), "-3/2");
        assert_eq!(render_rational(&BigRational::from_integer(int(120))), "120");
        assert_eq!(parse_rational("-3/2"), Some(q));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn big_values_serialize_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(
            int_to_json(&big),
            serde_json::json!("123456789012345678901234567890")
        );
        assert_eq!(int_to_json(&int(-7)), serde_json::json!(-7));
    }
}
