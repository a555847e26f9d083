//! Serde adapters: integers as decimal strings, rationals as `{"num", "den"}` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub mod big_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl From<&BigRational> for RationalRepr {
    fn from(q: &BigRational) -> Self {
        Self {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

fn parse_repr<E: serde::de::Error>(r: RationalRepr) -> Result<BigRational, E> {
    let num: BigInt = r.num.parse().map_err(E::custom)?;
    let den: BigInt = r.den.parse().map_err(E::custom)?;
    if den == BigInt::from(0) {
        return Err(E::custom("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr::from(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        parse_repr(RationalRepr::deserialize(d)?)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<RationalRepr> = v.iter().map(RationalRepr::from).collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<RationalRepr>::deserialize(d)?
            .into_iter()
            .map(parse_repr)
            .collect()
    }
}
