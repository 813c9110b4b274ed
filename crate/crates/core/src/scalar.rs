//! Exact rational scalars and their `p/q` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn half() -> Scalar {
    frac(1, 2)
}

/// Parses `p/q` or `p`. Decimal notation is rejected so that no value ever
/// passes through a float.
pub fn parse(text: &str) -> Result<Scalar> {
    let text = text.trim();
    if text.contains('.') || text.contains('e') || text.contains('E') {
        return Err(Error::Parse(format!(
            "`{text}` looks like a decimal; write exact rationals such as 1/2"
        )));
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in `{text}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in `{text}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Scalar::new(num, den))
}

/// Always `p/q`, including integers (`1/1`, `0/1`).
pub fn format(value: &Scalar) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Short form for human-readable reports: integers without `/1`.
pub fn display(value: &Scalar) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format(value)
    }
}

/// Decimal approximation for reports only; never fed back into computation.
pub fn to_f64(value: &Scalar) -> f64 {
    let num: f64 = value.numer().to_string().parse().unwrap_or(f64::NAN);
    let den: f64 = value.denom().to_string().parse().unwrap_or(f64::NAN);
    num / den
}

pub fn is_positive(value: &Scalar) -> bool {
    value.is_positive()
}

pub fn is_one(value: &Scalar) -> bool {
    value.is_one()
}

/// Serde adapter writing a scalar as a `p/q` string.
pub mod serde_scalar {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_opt_scalar {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_str(&format(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Scalar>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse(&t).map_err(serde::de::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("1/2").unwrap(), half());
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(parse("2/-4").unwrap(), frac(-1, 2));
        assert_eq!(format(&frac(6, 4)), "3/2");
        assert_eq!(format(&int(0)), "0/1");
        assert_eq!(display(&int(4)), "4");
    }

    #[test]
    fn rejects_decimals_and_zero_denominators() {
        assert!(matches!(parse("0.5"), Err(Error::Parse(_))));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let v = frac(10, -4);
        assert_eq!(v.numer(), &BigInt::from(-5));
        assert_eq!(v.denom(), &BigInt::from(2));
    }
}
