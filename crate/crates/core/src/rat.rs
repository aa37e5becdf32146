//! Exact rational numbers and their string/JSON encoding.
//!
//! Values are encoded as decimal-free rational strings: `"5"`, `"-7/2"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// The scalar type used everywhere: an arbitrary-precision rational.
pub type Rat = BigRational;

/// Integer-valued rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

/// `max` on owned rationals.
pub fn max(a: Rat, b: Rat) -> Rat {
    if a >= b {
        a
    } else {
        b
    }
}

/// Renders `3`, `-3`, `5/2`, ... (never a decimal point).
pub fn to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the output of [`to_string`]; also accepts plain integers.
pub fn parse(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let mk_err = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| mk_err())?;
            let d: BigInt = d.trim().parse().map_err(|_| mk_err())?;
            if d.is_zero() {
                return Err(mk_err());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| mk_err())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Maximum of `|v|` over a collection, at least `floor`.
pub fn max_abs<'a, I: IntoIterator<Item = &'a Rat>>(values: I, floor: Rat) -> Rat {
    let mut m = floor;
    for v in values {
        let a = v.abs();
        if a > m {
            m = a;
        }
    }
    m
}

/// Serde adapter: rationals as decimal-free strings.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in ["0", "17", "-4", "5/2", "-9/7"] {
            let r = parse(s).unwrap();
            assert_eq!(to_string(&r), s);
        }
        // Non-canonical inputs normalize.
        assert_eq!(to_string(&parse("4/2").unwrap()), "2");
        assert_eq!(to_string(&parse("3/-6").unwrap()), "-1/2");
        assert!(parse("1/0").is_err());
        assert!(parse("a").is_err());
    }
}
