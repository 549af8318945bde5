//! Exact rationals for bound arithmetic.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub type Rational = Ratio<i64>;

pub fn int(v: usize) -> Rational {
    Rational::from_integer(v as i64)
}

pub fn frac(num: usize, den: usize) -> Rational {
    Rational::new(num as i64, den as i64)
}

/// Renders as `p/q`, keeping `/1` for integers.
pub fn to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `{num, den}` JSON representation.
#[derive(Serialize, Deserialize)]
struct Pair {
    num: i64,
    den: i64,
}

pub mod pair {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Pair {
            num: *r.numer(),
            den: *r.denom(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let p = Pair::deserialize(d)?;
        if p.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(p.num, p.den))
    }
}
