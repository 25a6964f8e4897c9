//! Laplace–Beltrami eigenvalues `β_m = m(m + N - 2)`, the spectrum of the
//! linearised operator along the trivial family, and the set `Λ` of levels
//! where that spectrum degenerates.
//!
//! For each harmonic degree `m` the linearisation has (at most) four
//! eigenvalues, one per coordinate family:
//!
//! | family            | eigenvalue              | blocks   |
//! |-------------------|-------------------------|----------|
//! | `a=-1, b=1`       | `(β_m - λ)/(1 + β_m)`   | `n_-`    |
//! | `a= 1, b=1`       | `(-β_m - λ)/(1 + β_m)`  | `n_+`    |
//! | `a=-1, b=0`       | `β_m/(1 + β_m)`         | `n_-^0`  |
//! | `a= 1, b=0`       | `-β_m/(1 + β_m)`        | `n_+^0`  |
//!
//! each block being a copy of `H^N_m`. All arithmetic is exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jsonint;
use crate::rep::{dim_harmonic, harmonic_decomp, rep_sum, RepDecomposition};
use crate::system::SystemSpec;

/// A candidate bifurcation level: `+β_m`, `-β_m` (`m ≥ 1`) or `0`.
///
/// Ordering follows the numeric value, which does not depend on `N`
/// because `β_m` is increasing in `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Zero,
    PlusBeta(u32),
    MinusBeta(u32),
}

impl Level {
    /// Harmonic degree `m` of the level (`0` for the zero level).
    pub fn index(self) -> u32 {
        match self {
            Level::Zero => 0,
            Level::PlusBeta(m) | Level::MinusBeta(m) => m,
        }
    }

    pub fn value(self, sphere_dim: u32) -> BigInt {
        match self {
            Level::Zero => BigInt::zero(),
            Level::PlusBeta(m) => beta(sphere_dim, m),
            Level::MinusBeta(m) => -beta(sphere_dim, m),
        }
    }

    pub fn value_rational(self, sphere_dim: u32) -> BigRational {
        BigRational::from_integer(self.value(sphere_dim))
    }

    fn sort_key(self) -> i64 {
        match self {
            Level::Zero => 0,
            Level::PlusBeta(m) => i64::from(m),
            Level::MinusBeta(m) => -i64::from(m),
        }
    }

    /// Signed index: `+m`, `-m` or `0`.
    pub fn signed_index(self) -> i64 {
        self.sort_key()
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Zero => f.write_str("0"),
            Level::PlusBeta(m) => write!(f, "+{m}"),
            Level::MinusBeta(m) => write!(f, "-{m}"),
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    /// Accepts `"+m"`, `"-m"`, `"m"` and `"0"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::MalformedInput(format!("level must look like +m, -m or 0, got {s:?}"));
        let (neg, digits) = match s.as_bytes().first() {
            Some(b'+') => (false, &s[1..]),
            Some(b'-') => (true, &s[1..]),
            _ => (false, s),
        };
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let m: u32 = digits.parse().map_err(|_| bad())?;
        Ok(match (m, neg) {
            (0, _) => Level::Zero,
            (m, false) => Level::PlusBeta(m),
            (m, true) => Level::MinusBeta(m),
        })
    }
}

impl Serialize for Level {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// `β_m = m(m + N - 2)`.
pub fn beta(sphere_dim: u32, m: u32) -> BigInt {
    BigInt::from(m) * BigInt::from(m + sphere_dim - 2)
}

/// Which coordinate family an eigenvalue comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `a = -1, b = 1`: `(β_m - λ)/(1 + β_m)`.
    Minus,
    /// `a = 1, b = 1`: `(-β_m - λ)/(1 + β_m)`.
    Plus,
    /// `a = -1, b = 0`: `β_m/(1 + β_m)`.
    MinusDegenerate,
    /// `a = 1, b = 0`: `-β_m/(1 + β_m)`.
    PlusDegenerate,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Minus,
        Family::Plus,
        Family::MinusDegenerate,
        Family::PlusDegenerate,
    ];

    pub fn blocks(self, spec: &SystemSpec) -> u32 {
        let c = spec.counts();
        match self {
            Family::Minus => c.n_minus,
            Family::Plus => c.n_plus,
            Family::MinusDegenerate => c.n_minus0,
            Family::PlusDegenerate => c.n_plus0,
        }
    }

    /// Numerator of the eigenvalue; the denominator `1 + β` is always positive.
    fn numerator(self, beta: &BigInt, lambda: &BigRational) -> BigRational {
        let b = BigRational::from_integer(beta.clone());
        match self {
            Family::Minus => b - lambda,
            Family::Plus => -b - lambda,
            Family::MinusDegenerate => b,
            Family::PlusDegenerate => -b,
        }
    }

    pub fn eigenvalue(self, beta: &BigInt, lambda: &BigRational) -> BigRational {
        let denom = BigRational::from_integer(beta + 1);
        self.numerator(beta, lambda) / denom
    }

    /// Whether the eigenvalue is negative for every `λ` in a small open
    /// interval on the given side of `level` (no explicit `ε` is needed:
    /// the numerator is `c - λ` or constant).
    pub fn negative_near(self, beta: &BigInt, level: &BigRational, side: Side) -> bool {
        let c = match self {
            Family::Minus => BigRational::from_integer(beta.clone()),
            Family::Plus => BigRational::from_integer(-beta),
            Family::MinusDegenerate => return false,
            Family::PlusDegenerate => return beta.is_positive(),
        };
        match side {
            Side::Above => c <= *level,
            Side::Below => c < *level,
        }
    }
}

/// Side of a level on which the linearisation is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Below,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Origin {
    pub family: Family,
    pub m: u32,
}

/// One distinct eigenvalue with its multiplicity, in two readings: the count
/// of coordinate blocks and the real dimension (blocks times `dim H^N_m`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    #[serde(with = "jsonint::rational")]
    pub eigenvalue: BigRational,
    pub block_mult: u32,
    #[serde(with = "jsonint::biguint")]
    pub total_dim: BigUint,
    pub origins: Vec<Origin>,
}

/// Spectrum of the linearisation at parameter `lambda`, truncated to
/// harmonic degrees `m ≤ m_max`. Equal eigenvalues from different families
/// or degrees are merged; their origins are all kept. Sorted ascending.
pub fn spectrum_at(spec: &SystemSpec, lambda: &BigRational, m_max: u32) -> Vec<SpectrumEntry> {
    let n = spec.sphere_dim();
    let mut merged: BTreeMap<BigRational, SpectrumEntry> = BTreeMap::new();
    for m in 0..=m_max {
        let b = beta(n, m);
        let dim = dim_harmonic(n, m);
        for family in Family::ALL {
            let blocks = family.blocks(spec);
            if blocks == 0 {
                continue;
            }
            let ev = family.eigenvalue(&b, lambda);
            let entry = merged.entry(ev.clone()).or_insert_with(|| SpectrumEntry {
                eigenvalue: ev,
                block_mult: 0,
                total_dim: BigUint::zero(),
                origins: Vec::new(),
            });
            entry.block_mult += blocks;
            entry.total_dim += &dim * blocks;
            entry.origins.push(Origin { family, m });
        }
    }
    merged.into_values().collect()
}

/// Levels of `Λ` with `|value| ≤ β_{m_max}`, ascending.
pub fn lambda_set(spec: &SystemSpec, m_max: u32) -> Vec<Level> {
    let c = spec.counts();
    let mut out = Vec::new();
    if c.n_plus > 0 {
        out.extend((1..=m_max).rev().map(Level::MinusBeta));
    }
    if c.n_minus > 0 || c.n_plus > 0 {
        out.push(Level::Zero);
    }
    if c.n_minus > 0 {
        out.extend((1..=m_max).map(Level::PlusBeta));
    }
    out
}

/// Whether `level` belongs to `Λ` for this system.
pub fn in_lambda(spec: &SystemSpec, level: Level) -> bool {
    let c = spec.counts();
    match level {
        Level::Zero => c.n_minus + c.n_plus > 0,
        Level::PlusBeta(m) => m > 0 && c.n_minus > 0,
        Level::MinusBeta(m) => m > 0 && c.n_plus > 0,
    }
}

/// Smallest harmonic degree `m` with `β_m > |λ|`; no family can vanish at
/// `λ` beyond it.
fn degree_bound(sphere_dim: u32, lambda: &BigRational) -> u32 {
    let target = lambda.abs();
    let mut m = 0;
    while BigRational::from_integer(beta(sphere_dim, m)) <= target {
        m += 1;
    }
    m
}

/// Dimension of the kernel of the linearisation at `lambda` in excess of the
/// orbit directions (the constants in the `b_i = 0` coordinates). Positive
/// exactly on `Λ`.
pub fn kernel_dim_excess(spec: &SystemSpec, lambda: &BigRational) -> BigInt {
    let m_max = degree_bound(spec.sphere_dim(), lambda);
    let kernel = spectrum_at(spec, lambda, m_max)
        .into_iter()
        .find(|e| e.eigenvalue.is_zero())
        .map(|e| e.total_dim)
        .unwrap_or_default();
    let c = spec.counts();
    BigInt::from(kernel) - BigInt::from(c.n_minus0 + c.n_plus0)
}

fn blocks_where(
    spec: &SystemSpec,
    truncation: u32,
    mut negative: impl FnMut(Family, &BigInt) -> bool,
) -> RepDecomposition {
    let n = spec.sphere_dim();
    let mut out = RepDecomposition::empty();
    for k in 0..=truncation {
        let b = beta(n, k);
        let copies: u32 = Family::ALL
            .iter()
            .filter(|&&f| negative(f, &b))
            .map(|&f| f.blocks(spec))
            .sum();
        if copies > 0 {
            out = rep_sum(&out, &harmonic_decomp(n, k).scaled(copies));
        }
    }
    out
}

/// SO(2)-representation spanned by the negative eigenspace of the
/// linearisation, restricted to degrees `k ≤ truncation`, just above or just
/// below `level`.
pub fn negative_space_near(
    spec: &SystemSpec,
    level: &BigRational,
    side: Side,
    truncation: u32,
) -> RepDecomposition {
    blocks_where(spec, truncation, |f, b| f.negative_near(b, level, side))
}

/// Negative eigenspace at an exact parameter value `lambda` (strict sign
/// test on the rational eigenvalues).
pub fn negative_space_at(spec: &SystemSpec, lambda: &BigRational, truncation: u32) -> RepDecomposition {
    blocks_where(spec, truncation, |f, b| f.eigenvalue(b, lambda).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{DerivedCounts, Orbits};

    fn spec(n: u32, n_minus: u32, n_plus: u32, n_minus0: u32, n_plus0: u32) -> SystemSpec {
        SystemSpec::from_counts(
            n,
            DerivedCounts {
                n_minus,
                n_plus,
                n_minus0,
                n_plus0,
            },
            Orbits::One,
        )
        .unwrap()
    }

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    fn values(levels: &[Level], n: u32) -> Vec<i64> {
        levels
            .iter()
            .map(|l| i64::try_from(l.value(n)).unwrap())
            .collect()
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(3, 0), BigInt::zero());
        assert_eq!(
            (1..=3).map(|m| beta(3, m)).collect::<Vec<_>>(),
            [2, 6, 12].map(BigInt::from)
        );
        assert_eq!(beta(5, 2), BigInt::from(10));
    }

    #[test]
    fn level_parsing() {
        assert_eq!("+2".parse::<Level>().unwrap(), Level::PlusBeta(2));
        assert_eq!("3".parse::<Level>().unwrap(), Level::PlusBeta(3));
        assert_eq!("-4".parse::<Level>().unwrap(), Level::MinusBeta(4));
        assert_eq!("0".parse::<Level>().unwrap(), Level::Zero);
        assert_eq!("-0".parse::<Level>().unwrap(), Level::Zero);
        for bad in ["", "+", "x", "2.5", "--1", "+-1"] {
            assert!(bad.parse::<Level>().is_err(), "{bad}");
        }
        assert_eq!(Level::MinusBeta(7).to_string(), "-7");
    }

    #[test]
    fn lambda_three_cases() {
        assert_eq!(values(&lambda_set(&spec(3, 1, 0, 0, 0), 2), 3), [0, 2, 6]);
        assert_eq!(values(&lambda_set(&spec(3, 0, 2, 0, 0), 2), 3), [-6, -2, 0]);
        assert_eq!(values(&lambda_set(&spec(3, 1, 1, 0, 0), 1), 3), [-2, 0, 2]);
    }

    #[test]
    fn spectrum_examples() {
        let s = spec(3, 1, 0, 0, 0);
        let entries = spectrum_at(&s, &q(6), 2);
        let zero = entries.iter().find(|e| e.eigenvalue.is_zero()).unwrap();
        assert_eq!(zero.block_mult, 1);
        assert_eq!(zero.total_dim, BigUint::from(5u32));
        assert_eq!(
            zero.origins,
            [Origin {
                family: Family::Minus,
                m: 2
            }]
        );

        let s = spec(4, 0, 1, 0, 1);
        let entries = spectrum_at(&s, &q(-3), 0);
        assert!(entries.iter().any(|e| e
            .origins
            .contains(&Origin {
                family: Family::PlusDegenerate,
                m: 0
            })
            && e.eigenvalue.is_zero()));

        let s = spec(3, 0, 1, 0, 0);
        let entries = spectrum_at(&s, &q(-2), 1);
        let zero = entries.iter().find(|e| e.eigenvalue.is_zero()).unwrap();
        assert_eq!(
            zero.origins,
            [Origin {
                family: Family::Plus,
                m: 1
            }]
        );
        assert_eq!(zero.block_mult, 1);
    }

    #[test]
    fn kernel_excess_examples() {
        let s = spec(3, 1, 0, 0, 0);
        assert_eq!(kernel_dim_excess(&s, &q(2)), BigInt::from(3));
        assert_eq!(kernel_dim_excess(&s, &q(1)), BigInt::zero());
        let s = spec(3, 1, 1, 0, 0);
        assert_eq!(kernel_dim_excess(&s, &q(0)), BigInt::from(2));
        // degenerate coordinates contribute orbit directions only
        let s = spec(4, 1, 0, 2, 1);
        assert_eq!(kernel_dim_excess(&s, &q(0)), BigInt::from(1));
        assert_eq!(kernel_dim_excess(&s, &q(-3)), BigInt::zero());
    }

    #[test]
    fn excess_positive_exactly_on_lambda() {
        for n in 3..=5 {
            for (nm, np) in [(1, 0), (0, 1), (2, 1), (1, 3)] {
                for (d0, d1) in [(0, 0), (1, 1)] {
                    let s = spec(n, nm, np, d0, d1);
                    let lam = lambda_set(&s, 5);
                    let top = i64::try_from(beta(n, 5)).unwrap();
                    for v in -top..=top {
                        let inside = lam.iter().any(|l| l.value(n) == BigInt::from(v));
                        assert_eq!(
                            kernel_dim_excess(&s, &q(v)).is_positive(),
                            inside,
                            "{s} λ={v}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sign_rule_matches_rational_evaluation() {
        for n in [3, 4, 6] {
            for m in 0..=6 {
                let b = beta(n, m);
                for lam in -60..=60 {
                    let l = q(lam);
                    let bq = BigRational::from_integer(b.clone());
                    assert_eq!(Family::Minus.eigenvalue(&b, &l).is_negative(), bq < l);
                    assert_eq!(Family::Plus.eigenvalue(&b, &l).is_negative(), bq > -l.clone());
                    assert!(!Family::MinusDegenerate.eigenvalue(&b, &l).is_negative());
                    assert!(!Family::PlusDegenerate.eigenvalue(&b, &l).is_positive());
                }
            }
        }
    }

    #[test]
    fn sides_agree_with_nearby_points() {
        // gaps between consecutive levels are at least N - 1 >= 2, so ±1/2 stays
        // inside the flanking open intervals
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        for n in 3..=5 {
            let s = spec(n, 2, 1, 1, 1);
            for level in lambda_set(&s, 4) {
                let v = level.value_rational(n);
                for trunc in [5, 7] {
                    assert_eq!(
                        negative_space_near(&s, &v, Side::Above, trunc),
                        negative_space_at(&s, &(&v + &half), trunc)
                    );
                    assert_eq!(
                        negative_space_near(&s, &v, Side::Below, trunc),
                        negative_space_at(&s, &(&v - &half), trunc)
                    );
                }
            }
        }
    }

    #[test]
    fn beta_strictly_increasing() {
        for n in 3..=8 {
            for m in 0..20 {
                assert!(beta(n, m) < beta(n, m + 1));
            }
        }
    }
}
