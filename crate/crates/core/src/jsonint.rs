//! Serde adapters for arbitrary-precision integers and rationals.
//!
//! Integers whose magnitude fits in 53 bits are written as JSON numbers;
//! anything larger is written as a decimal string so that consumers parsing
//! numbers into doubles do not silently lose digits. Both forms are accepted
//! on input.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const SAFE: i64 = 1 << 53;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Wire {
    Num(i64),
    Text(String),
}

fn to_wire(x: &BigInt) -> Wire {
    match x.to_i64() {
        Some(v) if v.abs() < SAFE => Wire::Num(v),
        _ => Wire::Text(x.to_string()),
    }
}

fn from_wire<E: serde::de::Error>(w: Wire) -> Result<BigInt, E> {
    match w {
        Wire::Num(v) => Ok(BigInt::from(v)),
        Wire::Text(s) => BigInt::from_str(&s).map_err(E::custom),
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_wire(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_wire(Wire::deserialize(d)?)
    }
}

pub mod biguint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        to_wire(&BigInt::from(x.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let v: BigInt = from_wire(Wire::deserialize(d)?)?;
        v.to_biguint()
            .ok_or_else(|| D::Error::custom(format!("expected a nonnegative integer, got {v}")))
    }
}

pub mod bigint_map {
    use super::*;

    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, BigInt>, s: S) -> Result<S::Ok, S::Error> {
        let wire: BTreeMap<u32, Wire> = m.iter().map(|(&k, v)| (k, to_wire(v))).collect();
        wire.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<u32, BigInt>, D::Error> {
        let wire = BTreeMap::<u32, Wire>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in wire {
            let v: BigInt = from_wire(v)?;
            if v != BigInt::default() {
                out.insert(k, v);
            }
        }
        Ok(out)
    }
}

pub mod biguint_map {
    use super::*;

    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, BigUint>, s: S) -> Result<S::Ok, S::Error> {
        let wire: BTreeMap<u32, Wire> = m
            .iter()
            .map(|(&k, v)| (k, to_wire(&BigInt::from(v.clone()))))
            .collect();
        wire.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<u32, BigUint>, D::Error> {
        let wire = BTreeMap::<u32, Wire>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in wire {
            let v: BigInt = from_wire(v)?;
            let v = v
                .to_biguint()
                .ok_or_else(|| D::Error::custom("negative multiplicity"))?;
            if v != BigUint::default() {
                out.insert(k, v);
            }
        }
        Ok(out)
    }
}

/// Rationals travel as `"p/q"` strings, or `"p"` when integral.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        BigRational::from_str(&text).map_err(D::Error::custom)
    }
}
