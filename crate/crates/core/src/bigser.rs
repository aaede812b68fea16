//! Serde adapters: big integers are written as JSON numbers when they fit in
//! 64 bits and as decimal strings otherwise. Both forms are accepted on input.

use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;
use std::fmt;
use std::str::FromStr;

struct NumOrStr<T>(std::marker::PhantomData<T>);

impl<'de, T: FromStr> Visitor<'de> for NumOrStr<T> {
    type Value = T;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<T, E> {
        self.visit_str(&v.to_string())
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<T, E> {
        self.visit_str(&v.to_string())
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<T, E> {
        T::from_str(v).map_err(|_| E::custom(format!("invalid integer {v:?}")))
    }
}

pub mod int {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(NumOrStr(std::marker::PhantomData))
    }
}

pub mod uint {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match x.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        d.deserialize_any(NumOrStr(std::marker::PhantomData))
    }
}

/// Maps whose values are `BigUint`.
pub mod uint_map {
    use super::*;
    use num_bigint::BigUint;
    use serde::de::MapAccess;
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Serialize};
    use std::collections::BTreeMap;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::uint")] BigUint);

    pub fn serialize<K, S>(m: &BTreeMap<K, BigUint>, s: S) -> Result<S::Ok, S::Error>
    where
        K: Serialize,
        S: Serializer,
    {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            map.serialize_entry(k, &Wrap(v.clone()))?;
        }
        map.end()
    }

    pub fn deserialize<'de, K, D>(d: D) -> Result<BTreeMap<K, BigUint>, D::Error>
    where
        K: Deserialize<'de> + Ord,
        D: Deserializer<'de>,
    {
        struct V<K>(std::marker::PhantomData<K>);
        impl<'de, K: Deserialize<'de> + Ord> Visitor<'de> for V<K> {
            type Value = BTreeMap<K, BigUint>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an exponent map")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<Self::Value, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((k, Wrap(v))) = a.next_entry::<K, Wrap>()? {
                    out.insert(k, v);
                }
                Ok(out)
            }
        }
        d.deserialize_map(V(std::marker::PhantomData))
    }
}
