//! The system signature: sphere dimension, sign and degeneracy coefficients,
//! and the number of critical orbits.
//!
//! Everything downstream depends only on the four counts in
//! [`DerivedCounts`] together with `N` and the orbit count.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of disjoint critical orbits carried by the trivial family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orbits {
    One,
    Two,
}

impl Orbits {
    pub fn count(self) -> u8 {
        match self {
            Orbits::One => 1,
            Orbits::Two => 2,
        }
    }

    /// Largest number of orbit intersections a continuum can have at one level.
    pub fn max_alpha(self) -> u8 {
        self.count()
    }

    pub fn from_count(count: i64) -> Result<Self> {
        match count {
            1 => Ok(Orbits::One),
            2 => Ok(Orbits::Two),
            other => Err(Error::InvariantViolation(format!(
                "orbits must be 1 or 2, got {other}"
            ))),
        }
    }
}

impl Serialize for Orbits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.count())
    }
}

impl<'de> Deserialize<'de> for Orbits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = i64::deserialize(d)?;
        Orbits::from_count(n).map_err(serde::de::Error::custom)
    }
}

/// Counts of coordinates by (sign, degeneracy):
/// `n_minus = #{a_i = -1, b_i = 1}`, `n_plus = #{a_i = 1, b_i = 1}`,
/// `n_minus0 = #{a_i = -1, b_i = 0}`, `n_plus0 = #{a_i = 1, b_i = 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DerivedCounts {
    pub n_minus: u32,
    pub n_plus: u32,
    pub n_minus0: u32,
    pub n_plus0: u32,
}

impl DerivedCounts {
    pub fn total(&self) -> u32 {
        self.n_minus + self.n_plus + self.n_minus0 + self.n_plus0
    }

    /// True when `n_- * n_+ = 0`.
    pub fn is_cooperative(&self) -> bool {
        self.n_minus == 0 || self.n_plus == 0
    }

    pub fn same_parity(&self) -> bool {
        self.n_minus % 2 == self.n_plus % 2
    }
}

/// Validated system signature.
///
/// Construct with [`SystemSpec::new`], [`SystemSpec::from_counts`] or
/// [`parse_spec`]; every constructor enforces the invariants, so holders of
/// a `SystemSpec` never need to re-check them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SystemSpec {
    sphere_dim: u32,
    a: Vec<i8>,
    b: Vec<u8>,
    orbits: Orbits,
    counts: DerivedCounts,
}

impl SystemSpec {
    pub fn new(sphere_dim: u32, a: Vec<i8>, b: Vec<u8>, orbits: Orbits) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::MalformedInput(format!(
                "a has {} entries but b has {}",
                a.len(),
                b.len()
            )));
        }
        if sphere_dim < 3 {
            return Err(Error::InvariantViolation(format!(
                "N must be at least 3, got {sphere_dim}"
            )));
        }
        if let Some(bad) = a.iter().find(|&&x| x != -1 && x != 1) {
            return Err(Error::InvariantViolation(format!(
                "a_i must be -1 or 1, got {bad}"
            )));
        }
        if let Some(bad) = b.iter().find(|&&x| x > 1) {
            return Err(Error::InvariantViolation(format!(
                "b_i must be 0 or 1, got {bad}"
            )));
        }
        let counts = derive_counts_raw(&a, &b);
        if counts.n_minus + counts.n_plus == 0 {
            return Err(Error::InvariantViolation(
                "n_- + n_+ must be positive (no nondegenerate coordinate)".into(),
            ));
        }
        Ok(SystemSpec {
            sphere_dim,
            a,
            b,
            orbits,
            counts,
        })
    }

    /// Builds the canonical signature with the given counts, coordinates
    /// ordered as `(-1,1)`, `(1,1)`, `(-1,0)`, `(1,0)`.
    pub fn from_counts(sphere_dim: u32, counts: DerivedCounts, orbits: Orbits) -> Result<Self> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (n, sign, deg) in [
            (counts.n_minus, -1, 1),
            (counts.n_plus, 1, 1),
            (counts.n_minus0, -1, 0),
            (counts.n_plus0, 1, 0),
        ] {
            for _ in 0..n {
                a.push(sign);
                b.push(deg);
            }
        }
        SystemSpec::new(sphere_dim, a, b, orbits)
    }

    pub fn sphere_dim(&self) -> u32 {
        self.sphere_dim
    }

    /// Number of equations `p`.
    pub fn equations(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[i8] {
        &self.a
    }

    pub fn b(&self) -> &[u8] {
        &self.b
    }

    pub fn orbits(&self) -> Orbits {
        self.orbits
    }

    pub fn counts(&self) -> DerivedCounts {
        self.counts
    }

    pub fn with_orbits(&self, orbits: Orbits) -> SystemSpec {
        SystemSpec {
            orbits,
            ..self.clone()
        }
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.counts;
        write!(
            f,
            "N={} p={} orbits={} (n-={}, n+={}, n-0={}, n+0={})",
            self.sphere_dim,
            self.equations(),
            self.orbits.count(),
            c.n_minus,
            c.n_plus,
            c.n_minus0,
            c.n_plus0
        )
    }
}

/// Wire form of a system signature, before validation.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(rename = "N")]
    sphere_dim: i64,
    a: Vec<i64>,
    b: Vec<i64>,
    orbits: i64,
}

impl RawSpec {
    fn validate(self) -> Result<SystemSpec> {
        if self.a.len() != self.b.len() {
            return Err(Error::MalformedInput(format!(
                "a has {} entries but b has {}",
                self.a.len(),
                self.b.len()
            )));
        }
        let sphere_dim = u32::try_from(self.sphere_dim)
            .ok()
            .filter(|&n| n >= 3)
            .ok_or_else(|| {
                Error::InvariantViolation(format!("N must be at least 3, got {}", self.sphere_dim))
            })?;
        let a = self
            .a
            .iter()
            .map(|&x| match x {
                -1 => Ok(-1),
                1 => Ok(1),
                _ => Err(Error::InvariantViolation(format!(
                    "a_i must be -1 or 1, got {x}"
                ))),
            })
            .collect::<Result<Vec<i8>>>()?;
        let b = self
            .b
            .iter()
            .map(|&x| match x {
                0 => Ok(0),
                1 => Ok(1),
                _ => Err(Error::InvariantViolation(format!(
                    "b_i must be 0 or 1, got {x}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        SystemSpec::new(sphere_dim, a, b, Orbits::from_count(self.orbits)?)
    }
}

impl Serialize for SystemSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSpec {
            sphere_dim: i64::from(self.sphere_dim),
            a: self.a.iter().map(|&x| i64::from(x)).collect(),
            b: self.b.iter().map(|&x| i64::from(x)).collect(),
            orbits: i64::from(self.orbits.count()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SystemSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RawSpec::deserialize(d)?
            .validate()
            .map_err(serde::de::Error::custom)
    }
}

/// Parses a JSON document `{"N": .., "a": [..], "b": [..], "orbits": 1|2}`.
///
/// Shape problems (missing fields, wrong types, arity mismatch) are reported
/// as [`Error::MalformedInput`]; out-of-range values as
/// [`Error::InvariantViolation`].
pub fn parse_spec(document: &str) -> Result<SystemSpec> {
    let raw: RawSpec =
        serde_json::from_str(document).map_err(|e| Error::MalformedInput(e.to_string()))?;
    raw.validate()
}

pub fn derive_counts(spec: &SystemSpec) -> DerivedCounts {
    spec.counts
}

fn derive_counts_raw(a: &[i8], b: &[u8]) -> DerivedCounts {
    let mut counts = DerivedCounts::default();
    for (&sign, &deg) in a.iter().zip(b) {
        match (sign, deg) {
            (-1, 1) => counts.n_minus += 1,
            (1, 1) => counts.n_plus += 1,
            (-1, 0) => counts.n_minus0 += 1,
            _ => counts.n_plus0 += 1,
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(a: &[i8], b: &[u8]) -> (u32, u32, u32, u32) {
        let c = derive_counts_raw(a, b);
        (c.n_minus, c.n_plus, c.n_minus0, c.n_plus0)
    }

    #[test]
    fn parses_single_coefficient() {
        let spec = parse_spec(r#"{"N":3,"a":[-1],"b":[1],"orbits":1}"#).unwrap();
        assert_eq!(
            spec.counts(),
            DerivedCounts {
                n_minus: 1,
                ..Default::default()
            }
        );
        assert_eq!(spec.orbits(), Orbits::One);
    }

    #[test]
    fn parses_two_orbit_mixed() {
        let spec = parse_spec(r#"{"N":4,"a":[-1,1,1],"b":[1,1,0],"orbits":2}"#).unwrap();
        let c = spec.counts();
        assert_eq!((c.n_minus, c.n_plus, c.n_minus0, c.n_plus0), (1, 1, 0, 1));
    }

    #[test]
    fn rejects_fully_degenerate() {
        let err = parse_spec(r#"{"N":3,"a":[1],"b":[0],"orbits":1}"#).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)), "{err}");
    }

    #[test]
    fn rejection_kinds() {
        let malformed = [
            r#"{"N":3,"a":[-1],"orbits":1}"#,
            r#"{"N":3,"a":[-1,1],"b":[1],"orbits":1}"#,
            r#"{"N":"three","a":[-1],"b":[1],"orbits":1}"#,
            r#"[1,2,3]"#,
        ];
        for doc in malformed {
            assert!(
                matches!(parse_spec(doc), Err(Error::MalformedInput(_))),
                "{doc}"
            );
        }
        let violating = [
            r#"{"N":2,"a":[-1],"b":[1],"orbits":1}"#,
            r#"{"N":3,"a":[0],"b":[1],"orbits":1}"#,
            r#"{"N":3,"a":[-1],"b":[2],"orbits":1}"#,
            r#"{"N":3,"a":[-1],"b":[1],"orbits":3}"#,
            r#"{"N":3,"a":[],"b":[],"orbits":1}"#,
        ];
        for doc in violating {
            assert!(
                matches!(parse_spec(doc), Err(Error::InvariantViolation(_))),
                "{doc}"
            );
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(counts(&[-1, -1], &[1, 1]), (2, 0, 0, 0));
        assert_eq!(counts(&[-1, 1, -1, 1], &[1, 1, 0, 0]), (1, 1, 1, 1));
        assert_eq!(counts(&[1, 1, 1], &[1, 1, 1]), (0, 3, 0, 0));
    }

    #[test]
    fn json_round_trip() {
        let spec = parse_spec(r#"{"N":5,"a":[1,-1,1],"b":[1,1,0],"orbits":2}"#).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"N":5,"a":[1,-1,1],"b":[1,1,0],"orbits":2}"#);
        let back: SystemSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn from_counts_matches() {
        let c = DerivedCounts {
            n_minus: 2,
            n_plus: 1,
            n_minus0: 1,
            n_plus0: 0,
        };
        let spec = SystemSpec::from_counts(4, c, Orbits::Two).unwrap();
        assert_eq!(spec.counts(), c);
        assert_eq!(spec.equations(), 4);
    }
}
