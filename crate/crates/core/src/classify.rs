//! Continuum verdicts and the bounded-continuum obstruction.
//!
//! A bounded continuum meets the trivial family at finitely many levels and
//! the bifurcation indices at those meetings must add up to `Θ`. An
//! [`IntersectionPattern`] records how many orbits are met at each level;
//! [`search_bounded_patterns`] finds every pattern up to a given harmonic
//! index whose index sum vanishes. When that list is empty, no continuum
//! starting at those levels can be bounded.
//!
//! The search exploits triangularity: `BIF(±β_l)` has no `Z_j` component
//! for `j > l`, so once all levels `≥ j` are assigned the `Z_j` coordinate
//! of the running sum is final and any nonzero value prunes the branch.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::EulerElement;
use crate::index::bif;
use crate::rep::{dim_cumulative, is_odd};
use crate::spectrum::{in_lambda, Level};
use crate::system::{DerivedCounts, Orbits, SystemSpec};

/// Numbers of orbits met at each level: `alpha0` at level `0`, and
/// `alpha[+l]`, `alpha[-l]` at `±β_l`. Zero entries are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntersectionPattern {
    pub alpha0: u8,
    pub alpha: BTreeMap<i32, u8>,
    pub orbits: Orbits,
}

impl IntersectionPattern {
    pub fn new(alpha0: u8, alpha: impl IntoIterator<Item = (i32, u8)>, orbits: Orbits) -> Self {
        IntersectionPattern {
            alpha0,
            alpha: alpha
                .into_iter()
                .filter(|&(l, a)| a > 0 && l != 0)
                .collect(),
            orbits,
        }
    }

    pub fn at(&self, signed: i32) -> u8 {
        self.alpha.get(&signed).copied().unwrap_or(0)
    }

    /// `(α_l, α_{-l})`.
    pub fn pair(&self, l: u32) -> (u8, u8) {
        let l = l as i32;
        (self.at(l), self.at(-l))
    }

    /// Largest `l` with `α_l + α_{-l} > 0`.
    pub fn mu(&self) -> Option<u32> {
        self.alpha.keys().map(|l| l.unsigned_abs()).max()
    }

    /// Levels with a nonzero entry, as `(level, α)`.
    pub fn levels(&self) -> impl Iterator<Item = (Level, u8)> + '_ {
        let nonzero = (self.alpha0 > 0).then_some((Level::Zero, self.alpha0));
        nonzero.into_iter().chain(self.alpha.iter().map(|(&l, &a)| {
            let level = if l > 0 {
                Level::PlusBeta(l as u32)
            } else {
                Level::MinusBeta(l.unsigned_abs())
            };
            (level, a)
        }))
    }

    /// Checks the range of every entry and that only levels of `Λ` occur.
    pub fn validate(&self, spec: &SystemSpec) -> Result<()> {
        let max = self.orbits.max_alpha();
        for (level, a) in self.levels() {
            if a > max {
                return Err(Error::InvariantViolation(format!(
                    "pattern entry {a} at level {level} exceeds the orbit count {max}"
                )));
            }
            if !in_lambda(spec, level) {
                return Err(Error::InvariantViolation(format!(
                    "pattern meets level {level}, which is not in Λ"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for IntersectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0:{}", self.alpha0)?;
        for (l, a) in &self.alpha {
            write!(f, " {l:+}:{a}")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    /// Every continuum bifurcating at the level is unbounded.
    Unbounded,
    /// The level is outside `Λ`; no bifurcation happens there.
    NoBifurcation,
    /// The index is `Θ`, so the degree gives no information.
    IndexVanishes,
    /// Of the four continua starting at `±β_m` from either orbit, at least
    /// one is unbounded; bounded ones obey the attached constraint.
    AtLeastOneOfFourUnbounded,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::Unbounded => "unbounded",
            Conclusion::NoBifurcation => "no bifurcation",
            Conclusion::IndexVanishes => "index vanishes (undecided)",
            Conclusion::AtLeastOneOfFourUnbounded => "at least one of four continua unbounded",
        })
    }
}

/// Arithmetic regime of `(n_-, n_+)` that governs the two-orbit verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SameParity,
    /// Different parity, and neither count is twice the other.
    Unbalanced,
    /// `n_+` odd and `n_- = 2 n_+`.
    MinusDoublesPlus,
    /// `n_-` odd and `n_+ = 2 n_-`.
    PlusDoublesMinus,
}

impl Regime {
    pub fn of(counts: DerivedCounts) -> Regime {
        let (nm, np) = (counts.n_minus, counts.n_plus);
        if counts.same_parity() {
            Regime::SameParity
        } else if np % 2 == 1 && nm == 2 * np {
            Regime::MinusDoublesPlus
        } else if nm % 2 == 1 && np == 2 * nm {
            Regime::PlusDoublesMinus
        } else {
            Regime::Unbalanced
        }
    }

    pub fn constraint(self) -> Option<StructureConstraint> {
        match self {
            Regime::MinusDoublesPlus => Some(StructureConstraint::MinusDoublesPlus),
            Regime::PlusDoublesMinus => Some(StructureConstraint::PlusDoublesMinus),
            _ => None,
        }
    }
}

/// Per-level shapes a bounded two-orbit continuum can take in the doubled
/// regimes, as pairs `(α_l, α_{-l})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureConstraint {
    MinusDoublesPlus,
    PlusDoublesMinus,
}

impl StructureConstraint {
    pub fn allowed_pairs(self) -> [(u8, u8); 2] {
        match self {
            StructureConstraint::MinusDoublesPlus => [(1, 2), (2, 0)],
            StructureConstraint::PlusDoublesMinus => [(2, 1), (0, 2)],
        }
    }

    pub fn admits(self, pattern: &IntersectionPattern) -> bool {
        let top = pattern.mu().unwrap_or(0);
        (1..=top).all(|l| {
            let p = pattern.pair(l);
            p == (0, 0) || self.allowed_pairs().contains(&p)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub level: Level,
    pub orbits: Orbits,
    pub conclusion: Conclusion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<StructureConstraint>,
    pub citations: Vec<String>,
}

/// Tags naming the results a verdict rests on.
pub mod cite {
    pub const NECESSARY_CONDITION: &str = "levels:necessary-condition";
    pub const ZERO_INDEX: &str = "index:zero-level-parity";
    pub const ONE_ORBIT_NONZERO: &str = "one-orbit:nonzero-level-unbounded";
    pub const ONE_ORBIT_ZERO: &str = "one-orbit:zero-level-unbounded";
    pub const TWO_ORBIT_NONZERO: &str = "two-orbit:parity-or-ratio-unbounded";
    pub const TWO_ORBIT_FOUR: &str = "two-orbit:one-of-four-unbounded";
    pub const TWO_ORBIT_ZERO: &str = "two-orbit:zero-level-unbounded";
    pub const COOPERATIVE: &str = "cooperative:all-unbounded";
    pub const NONZERO_INDEX: &str = "index:nonzero-top-coordinate";
}

pub fn verdict(spec: &SystemSpec, level: Level) -> Verdict {
    let counts = spec.counts();
    let orbits = spec.orbits();
    let mut citations = Vec::new();
    let mut constraint = None;
    let conclusion = if !in_lambda(spec, level) {
        citations.push(cite::NECESSARY_CONDITION);
        Conclusion::NoBifurcation
    } else if level == Level::Zero {
        citations.push(cite::ZERO_INDEX);
        if counts.same_parity() {
            Conclusion::IndexVanishes
        } else {
            citations.push(match orbits {
                Orbits::One => cite::ONE_ORBIT_ZERO,
                Orbits::Two => cite::TWO_ORBIT_ZERO,
            });
            Conclusion::Unbounded
        }
    } else {
        citations.push(cite::NONZERO_INDEX);
        match orbits {
            Orbits::One => {
                citations.push(cite::ONE_ORBIT_NONZERO);
                Conclusion::Unbounded
            }
            Orbits::Two => match Regime::of(counts).constraint() {
                None => {
                    citations.push(if counts.is_cooperative() {
                        cite::COOPERATIVE
                    } else {
                        cite::TWO_ORBIT_NONZERO
                    });
                    Conclusion::Unbounded
                }
                Some(c) => {
                    citations.push(cite::TWO_ORBIT_FOUR);
                    constraint = Some(c);
                    Conclusion::AtLeastOneOfFourUnbounded
                }
            },
        }
    };
    Verdict {
        level,
        orbits,
        conclusion,
        constraint,
        citations: citations.into_iter().map(String::from).collect(),
    }
}

/// Bifurcation indices at `0` and `±β_l`, `1 ≤ l ≤ mu_max`. Levels outside
/// `Λ` are absent. Entries can be overwritten, which is how the search is
/// tested against corrupted input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BifTable {
    mu_max: u32,
    entries: BTreeMap<Level, EulerElement>,
}

impl BifTable {
    pub fn compute(spec: &SystemSpec, mu_max: u32) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let levels = std::iter::once(Level::Zero)
            .chain((1..=mu_max).flat_map(|l| [Level::PlusBeta(l), Level::MinusBeta(l)]));
        for level in levels {
            if in_lambda(spec, level) {
                entries.insert(level, bif(spec, level)?.value);
            }
        }
        Ok(BifTable { mu_max, entries })
    }

    pub fn mu_max(&self) -> u32 {
        self.mu_max
    }

    pub fn get(&self, level: Level) -> Option<&EulerElement> {
        self.entries.get(&level)
    }

    pub fn set(&mut self, level: Level, value: EulerElement) {
        self.entries.insert(level, value);
    }

    fn value_or_zero(&self, level: Level) -> EulerElement {
        self.get(level).cloned().unwrap_or_default()
    }
}

/// `α₀·BIF(0) + Σ_l (α_l·BIF(β_l) + α_{-l}·BIF(-β_l))` using `table`.
pub fn theta_sum_with(table: &BifTable, pattern: &IntersectionPattern) -> EulerElement {
    pattern
        .levels()
        .map(|(level, a)| table.value_or_zero(level).scale(&BigInt::from(a)))
        .sum()
}

pub fn theta_sum(spec: &SystemSpec, pattern: &IntersectionPattern) -> Result<EulerElement> {
    pattern.validate(spec)?;
    let table = BifTable::compute(spec, pattern.mu().unwrap_or(0))?;
    Ok(theta_sum_with(&table, pattern))
}

fn alpha_range(present: bool, orbits: Orbits) -> std::ops::RangeInclusive<u8> {
    if present {
        0..=orbits.max_alpha()
    } else {
        0..=0
    }
}

/// Every nonzero pattern with `μ ≤ mu_max` whose index sum is `Θ`, sorted.
pub fn search_bounded_patterns(
    spec: &SystemSpec,
    orbits: Orbits,
    mu_max: u32,
) -> Result<Vec<IntersectionPattern>> {
    let table = BifTable::compute(spec, mu_max)?;
    Ok(search_with_table(&table, orbits))
}

struct Search<'a> {
    table: &'a BifTable,
    orbits: Orbits,
    zero: EulerElement,
    chosen: Vec<(i32, u8)>,
    found: Vec<IntersectionPattern>,
}

impl Search<'_> {
    fn descend(&mut self, l: u32, acc: EulerElement) {
        if l == 0 {
            self.close(acc);
            return;
        }
        let plus = self.table.get(Level::PlusBeta(l)).cloned();
        let minus = self.table.get(Level::MinusBeta(l)).cloned();
        for ap in alpha_range(plus.is_some(), self.orbits) {
            for am in alpha_range(minus.is_some(), self.orbits) {
                let mut next = acc.clone();
                if let Some(p) = &plus {
                    next = &next + &p.scale(&BigInt::from(ap));
                }
                if let Some(m) = &minus {
                    next = &next + &m.scale(&BigInt::from(am));
                }
                if !next.z(l).is_zero() {
                    continue;
                }
                let depth = self.chosen.len();
                self.chosen.push((l as i32, ap));
                self.chosen.push((-(l as i32), am));
                self.descend(l - 1, next);
                self.chosen.truncate(depth);
            }
        }
    }

    fn close(&mut self, acc: EulerElement) {
        if self.chosen.iter().all(|&(_, a)| a == 0) {
            return;
        }
        let alpha0_values = if self.zero.is_zero() {
            0..=0
        } else {
            0..=self.orbits.max_alpha()
        };
        for a0 in alpha0_values {
            let total = &acc + &self.zero.scale(&BigInt::from(a0));
            if total.is_zero() {
                self.found.push(IntersectionPattern::new(
                    a0,
                    self.chosen.iter().copied(),
                    self.orbits,
                ));
            }
        }
    }
}

/// Pruned backtracking search over a precomputed table.
pub fn search_with_table(table: &BifTable, orbits: Orbits) -> Vec<IntersectionPattern> {
    let mut search = Search {
        table,
        orbits,
        zero: table.value_or_zero(Level::Zero),
        chosen: Vec::new(),
        found: Vec::new(),
    };
    search.descend(table.mu_max(), EulerElement::zero());
    let mut found = search.found;
    found.sort();
    found
}

/// Enumerates every pattern and keeps those with vanishing sum. Exponential;
/// meant as a reference for small `mu_max`.
pub fn search_naive(table: &BifTable, orbits: Orbits) -> Vec<IntersectionPattern> {
    let mut slots: Vec<(i32, u8)> = Vec::new();
    for l in 1..=table.mu_max() {
        for (signed, level) in [(l as i32, Level::PlusBeta(l)), (-(l as i32), Level::MinusBeta(l))] {
            if table.get(level).is_some() {
                slots.push((signed, orbits.max_alpha()));
            }
        }
    }
    let zero_trivial = table.value_or_zero(Level::Zero).is_zero();
    let a0_max = if zero_trivial { 0 } else { orbits.max_alpha() };
    let base = u64::from(orbits.max_alpha()) + 1;
    let total = base.pow(slots.len() as u32);
    let mut found = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let alpha: Vec<(i32, u8)> = slots
            .iter()
            .map(|&(signed, _)| {
                let a = (rest % base) as u8;
                rest /= base;
                (signed, a)
            })
            .collect();
        if alpha.iter().all(|&(_, a)| a == 0) {
            continue;
        }
        for a0 in 0..=a0_max {
            let pattern = IntersectionPattern::new(a0, alpha.iter().copied(), orbits);
            if theta_sum_with(table, &pattern).is_zero() {
                found.push(pattern);
            }
        }
    }
    found.sort();
    found
}

/// Outcome of [`verify_theorems`] for one system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub orbits: Orbits,
    pub regime: Regime,
    pub mu_max: u32,
    pub patterns: Vec<IntersectionPattern>,
    pub checks: Vec<String>,
}

fn fail(theorem: &str, pattern: &IntersectionPattern, why: &str) -> Error {
    Error::AssertionFailure {
        theorem: theorem.to_string(),
        detail: format!("pattern {pattern} {why}"),
    }
}

/// Runs the bounded-pattern search for the system's orbit count and checks
/// the outcome against the unboundedness results.
pub fn verify_theorems(spec: &SystemSpec, mu_max: u32) -> Result<TheoremCheck> {
    let table = BifTable::compute(spec, mu_max)?;
    verify_with_table(spec, &table)
}

/// [`verify_theorems`] over a caller-supplied table.
pub fn verify_with_table(spec: &SystemSpec, table: &BifTable) -> Result<TheoremCheck> {
    let orbits = spec.orbits();
    let counts = spec.counts();
    let regime = Regime::of(counts);
    let patterns = search_with_table(table, orbits);
    let mut checks = Vec::new();

    match (orbits, regime.constraint()) {
        (Orbits::One, _) => {
            if let Some(p) = patterns.first() {
                return Err(fail(cite::ONE_ORBIT_NONZERO, p, "closes with index sum Θ"));
            }
            checks.push(cite::ONE_ORBIT_NONZERO);
            if counts.is_cooperative() {
                checks.push(cite::COOPERATIVE);
            }
        }
        (Orbits::Two, None) => {
            if let Some(p) = patterns.first() {
                return Err(fail(cite::TWO_ORBIT_NONZERO, p, "closes with index sum Θ"));
            }
            checks.push(if counts.is_cooperative() {
                cite::COOPERATIVE
            } else {
                cite::TWO_ORBIT_NONZERO
            });
        }
        (Orbits::Two, Some(constraint)) => {
            let n = spec.sphere_dim();
            for p in &patterns {
                if !constraint.admits(p) {
                    return Err(fail(cite::TWO_ORBIT_FOUR, p, "has a forbidden level pair"));
                }
                let mu = p.mu().expect("search returns nonzero patterns");
                if !is_odd(&dim_cumulative(n, mu)) {
                    return Err(fail(cite::TWO_ORBIT_FOUR, p, "has dim V(μ) even"));
                }
            }
            checks.push(cite::TWO_ORBIT_FOUR);
        }
    }

    if !counts.same_parity() {
        if let Some(p) = patterns.iter().find(|p| p.alpha0 > 0) {
            let theorem = match orbits {
                Orbits::One => cite::ONE_ORBIT_ZERO,
                Orbits::Two => cite::TWO_ORBIT_ZERO,
            };
            return Err(fail(theorem, p, "returns to level 0 although BIF(0) ≠ Θ"));
        }
        checks.push(match orbits {
            Orbits::One => cite::ONE_ORBIT_ZERO,
            Orbits::Two => cite::TWO_ORBIT_ZERO,
        });
    }

    Ok(TheoremCheck {
        orbits,
        regime,
        mu_max: table.mu_max(),
        patterns,
        checks: checks.into_iter().map(String::from).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u32, n_minus: u32, n_plus: u32, orbits: Orbits) -> SystemSpec {
        SystemSpec::from_counts(
            n,
            DerivedCounts {
                n_minus,
                n_plus,
                ..Default::default()
            },
            orbits,
        )
        .unwrap()
    }

    #[test]
    fn verdict_examples() {
        let v = verdict(&spec(3, 1, 1, Orbits::Two), Level::PlusBeta(3));
        assert_eq!(v.conclusion, Conclusion::Unbounded);
        let v = verdict(&spec(4, 2, 1, Orbits::Two), Level::MinusBeta(2));
        assert_eq!(v.conclusion, Conclusion::AtLeastOneOfFourUnbounded);
        assert_eq!(v.constraint, Some(StructureConstraint::MinusDoublesPlus));
        let v = verdict(&spec(3, 1, 0, Orbits::One), Level::MinusBeta(4));
        assert_eq!(v.conclusion, Conclusion::NoBifurcation);
        let v = verdict(&spec(3, 2, 2, Orbits::One), Level::Zero);
        assert_eq!(v.conclusion, Conclusion::IndexVanishes);
        let v = verdict(&spec(3, 2, 1, Orbits::Two), Level::Zero);
        assert_eq!(v.conclusion, Conclusion::Unbounded);
    }

    #[test]
    fn regimes() {
        let r = |nm, np| {
            Regime::of(DerivedCounts {
                n_minus: nm,
                n_plus: np,
                ..Default::default()
            })
        };
        assert_eq!(r(2, 1), Regime::MinusDoublesPlus);
        assert_eq!(r(1, 2), Regime::PlusDoublesMinus);
        assert_eq!(r(6, 3), Regime::MinusDoublesPlus);
        assert_eq!(r(3, 1), Regime::SameParity);
        assert_eq!(r(1, 0), Regime::Unbalanced);
        assert_eq!(r(4, 1), Regime::Unbalanced);
        assert_eq!(r(2, 0), Regime::SameParity);
    }

    #[test]
    fn theta_sum_examples() {
        let s = spec(3, 1, 0, Orbits::One);
        let empty = IntersectionPattern::new(0, [], Orbits::One);
        assert!(theta_sum(&s, &empty).unwrap().is_zero());
        let p = IntersectionPattern::new(0, [(1, 1)], Orbits::One);
        assert_eq!(
            theta_sum(&s, &p).unwrap(),
            EulerElement::new(2, [(1u32, -1)])
        );
        let bad = IntersectionPattern::new(0, [(-1, 1)], Orbits::One);
        assert!(matches!(theta_sum(&s, &bad), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn searches_from_examples() {
        assert!(search_bounded_patterns(&spec(3, 1, 0, Orbits::One), Orbits::One, 4)
            .unwrap()
            .is_empty());
        assert!(search_bounded_patterns(&spec(3, 1, 1, Orbits::Two), Orbits::Two, 4)
            .unwrap()
            .is_empty());
        let found = search_bounded_patterns(&spec(3, 2, 1, Orbits::Two), Orbits::Two, 4).unwrap();
        for p in &found {
            assert!(StructureConstraint::MinusDoublesPlus.admits(p), "{p}");
        }
    }

    #[test]
    fn pruned_matches_naive() {
        for (n, nm, np) in [(3, 1, 0), (3, 2, 1), (4, 1, 2), (3, 1, 1), (5, 0, 3)] {
            for orbits in [Orbits::One, Orbits::Two] {
                let table = BifTable::compute(&spec(n, nm, np, orbits), 3).unwrap();
                assert_eq!(
                    search_with_table(&table, orbits),
                    search_naive(&table, orbits),
                    "N={n} n-={nm} n+={np} {orbits:?}"
                );
            }
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let s = spec(3, 1, 1, Orbits::Two);
        let mut table = BifTable::compute(&s, 3).unwrap();
        assert!(verify_with_table(&s, &table).is_ok());
        let plus = table.get(Level::PlusBeta(2)).unwrap().clone();
        table.set(Level::MinusBeta(2), -plus);
        let err = verify_with_table(&s, &table).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn pattern_display_and_mu() {
        let p = IntersectionPattern::new(1, [(2, 1), (-2, 2), (1, 0)], Orbits::Two);
        assert_eq!(p.to_string(), "[0:1 -2:2 +2:1]");
        assert_eq!(p.mu(), Some(2));
        assert_eq!(p.pair(2), (1, 2));
        assert_eq!(p.pair(1), (0, 0));
    }
}
