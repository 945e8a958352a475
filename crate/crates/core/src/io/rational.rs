//! Rationals in documents: integers as JSON numbers, others as `"a/b"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Int(i64),
    Text(String),
}

/// A rational carried through documents by this module's encoding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Value(#[serde(with = "self")] pub BigRational);

pub fn parse(text: &str) -> Option<BigRational> {
    let t = text.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).ok()?;
            let b = BigInt::from_str(b.trim()).ok()?;
            (b != BigInt::from(0)).then(|| BigRational::new(a, b))
        }
        None => BigInt::from_str(t).ok().map(BigRational::from_integer),
    }
}

pub fn format(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    match (r.denom().is_one(), r.numer().to_i64()) {
        (true, Some(n)) => n.serialize(s),
        _ => format(r).serialize(s),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    match Raw::deserialize(d)? {
        Raw::Int(n) => Ok(BigRational::from_integer(n.into())),
        Raw::Text(t) => parse(&t).ok_or_else(|| de::Error::custom(format!("not a rational: {t:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let r = parse("-6/4").unwrap();
        assert_eq!(format(&r), "-3/2");
        assert_eq!(format(&parse("7").unwrap()), "7");
        assert!(parse("1/0").is_none());
    }
}
