//! Serde helpers: big integers as JSON numbers when they fit in 64 bits,
//! decimal strings otherwise.

use rug::Integer;
use serde::{Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Signed(i64),
    Unsigned(u64),
    Text(String),
}

fn from_repr<E: serde::de::Error>(repr: Repr) -> Result<Integer, E> {
    match repr {
        Repr::Signed(v) => Ok(Integer::from(v)),
        Repr::Unsigned(v) => Ok(Integer::from(v)),
        Repr::Text(s) => s
            .trim()
            .parse()
            .map_err(|_| E::custom(format!("invalid integer {s:?}"))),
    }
}

pub fn serialize<S: Serializer>(value: &Integer, s: S) -> Result<S::Ok, S::Error> {
    if let Some(v) = value.to_i64() {
        s.serialize_i64(v)
    } else if let Some(v) = value.to_u64() {
        s.serialize_u64(v)
    } else {
        s.serialize_str(&value.to_string())
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
    from_repr(Repr::deserialize(d)?)
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    struct Item<'a>(&'a Integer);

    impl serde::Serialize for Item<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            super::serialize(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(values: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&Item(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(from_repr)
            .collect()
    }
}
