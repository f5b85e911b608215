//! Serde adapter writing rationals as strings such as `"3"` or `"-1/10"`.

use serde::{de::Error, Deserialize, Deserializer, Serializer};

use crate::scalar::{parse_rational, render_rational, Rational};

pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&render_rational(q))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }
    match Repr::deserialize(d)? {
        Repr::Int(n) => Ok(crate::scalar::int(n)),
        Repr::Text(t) => parse_rational(&t).ok_or_else(|| D::Error::custom(format!("bad rational '{t}'"))),
    }
}
