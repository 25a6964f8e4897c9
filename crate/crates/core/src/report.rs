//! Report assembly and rendering for the command-line front end.
//!
//! A [`Report`] is plain data: building it runs the computations, and
//! [`render_text`] / [`render_json`] only format it. Every collection is
//! ordered, so identical input gives byte-identical output.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{verdict, verify_theorems, TheoremCheck, Verdict};
use crate::error::{Error, Result};
use crate::euler::EulerElement;
use crate::index::{all_routes, check_routes, BifurcationIndex};
use crate::jsonint;
use crate::rep::{cumulative_decomp, dim_cumulative, dim_harmonic, harmonic_decomp, RepDecomposition};
use crate::selftest::{self, Grid, SelftestSummary};
use crate::spectrum::{kernel_dim_excess, lambda_set, spectrum_at, Level, SpectrumEntry};
use crate::system::{DerivedCounts, SystemSpec};

pub const TOOL: &str = "bifsphere";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Decompose,
    Spectrum,
    Levels,
    Bif,
    Classify,
    Search,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::Spectrum => "spectrum",
            Command::Levels => "levels",
            Command::Bif => "bif",
            Command::Classify => "classify",
            Command::Search => "search",
            Command::Selftest => "selftest",
        }
    }

    pub fn needs_spec(self) -> bool {
        self != Command::Selftest
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub m_max: u32,
    pub mu_max: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<Level>,
    /// Evaluation point for `spectrum`, as `p/q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters {
            m_max: 6,
            mu_max: 6,
            level: None,
            lambda: None,
            grid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub m: u32,
    #[serde(with = "jsonint::biguint")]
    pub dim_harmonic: BigUint,
    #[serde(with = "jsonint::biguint")]
    pub dim_cumulative: BigUint,
    pub harmonic: RepDecomposition,
    pub cumulative: RepDecomposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRow {
    pub level: Level,
    #[serde(with = "jsonint::bigint")]
    pub value: BigInt,
    #[serde(with = "jsonint::bigint")]
    pub kernel_excess: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumSnapshot {
    #[serde(with = "jsonint::rational")]
    pub lambda: BigRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<Level>,
    #[serde(with = "jsonint::bigint")]
    pub kernel_excess: BigInt,
    pub entries: Vec<SpectrumEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRow {
    pub level: Level,
    pub value: EulerElement,
    pub routes: Vec<BifurcationIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub input_digest: String,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SystemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<DerivedCounts>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decomposition: Vec<DecompositionRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spectra: Vec<SpectrumSnapshot>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<IndexRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<TheoremCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selftest: Option<SelftestSummary>,
}

impl Report {
    /// True unless a selftest ran and found failures.
    pub fn passed(&self) -> bool {
        self.selftest.as_ref().is_none_or(SelftestSummary::passed)
    }
}

/// SHA-256 over the canonical JSON of the command, system and parameters.
pub fn input_digest(command: Command, spec: Option<&SystemSpec>, params: &Parameters) -> String {
    let canonical = serde_json::to_string(&(command, spec, params)).expect("plain data serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn parse_lambda(text: &str) -> Result<BigRational> {
    BigRational::from_str(text.trim())
        .map_err(|_| Error::MalformedInput(format!("lambda must look like p/q, got {text:?}")))
}

fn level_rows(spec: &SystemSpec, m_max: u32) -> Vec<LevelRow> {
    let n = spec.sphere_dim();
    lambda_set(spec, m_max)
        .into_iter()
        .map(|level| LevelRow {
            level,
            value: level.value(n),
            kernel_excess: kernel_dim_excess(spec, &level.value_rational(n)),
        })
        .collect()
}

fn snapshot(spec: &SystemSpec, lambda: BigRational, level: Option<Level>, m_max: u32) -> SpectrumSnapshot {
    SpectrumSnapshot {
        kernel_excess: kernel_dim_excess(spec, &lambda),
        entries: spectrum_at(spec, &lambda, m_max),
        lambda,
        level,
    }
}

fn index_row(spec: &SystemSpec, level: Level) -> Result<IndexRow> {
    let routes = all_routes(spec, level)?;
    check_routes(level, &routes)?;
    Ok(IndexRow {
        level,
        value: routes[0].value.clone(),
        routes,
    })
}

fn candidate_levels(m_max: u32) -> Vec<Level> {
    let mut out: Vec<Level> = (1..=m_max).rev().map(Level::MinusBeta).collect();
    out.push(Level::Zero);
    out.extend((1..=m_max).map(Level::PlusBeta));
    out
}

pub fn build(command: Command, spec: Option<&SystemSpec>, params: &Parameters) -> Result<Report> {
    let mut report = Report {
        tool: TOOL.to_string(),
        version: VERSION.to_string(),
        command,
        input_digest: input_digest(command, spec, params),
        parameters: params.clone(),
        spec: spec.cloned(),
        counts: spec.map(SystemSpec::counts),
        decomposition: Vec::new(),
        levels: Vec::new(),
        spectra: Vec::new(),
        indices: Vec::new(),
        verdicts: Vec::new(),
        search: None,
        selftest: None,
    };
    let m_max = params.m_max;

    if command == Command::Selftest {
        let grid = params.grid.unwrap_or(Grid::Small);
        report.selftest = Some(selftest::run(grid, params.mu_max));
        return Ok(report);
    }
    let spec = spec.ok_or_else(|| {
        Error::MalformedInput(format!("{} needs a system (--spec PATH)", command.name()))
    })?;
    let n = spec.sphere_dim();

    match command {
        Command::Decompose => {
            report.decomposition = (0..=m_max)
                .map(|m| DecompositionRow {
                    m,
                    dim_harmonic: dim_harmonic(n, m),
                    dim_cumulative: dim_cumulative(n, m),
                    harmonic: harmonic_decomp(n, m),
                    cumulative: cumulative_decomp(n, m),
                })
                .collect();
        }
        Command::Spectrum => {
            if let Some(text) = &params.lambda {
                report.spectra.push(snapshot(spec, parse_lambda(text)?, None, m_max));
            } else if let Some(level) = params.level {
                report
                    .spectra
                    .push(snapshot(spec, level.value_rational(n), Some(level), m_max));
            } else {
                for level in lambda_set(spec, m_max) {
                    report
                        .spectra
                        .push(snapshot(spec, level.value_rational(n), Some(level), m_max));
                }
            }
        }
        Command::Levels => report.levels = level_rows(spec, m_max),
        Command::Bif => {
            let levels = match params.level {
                Some(level) => vec![level],
                None => lambda_set(spec, m_max),
            };
            for level in levels {
                report.indices.push(index_row(spec, level)?);
            }
        }
        Command::Classify => {
            report.levels = level_rows(spec, m_max);
            for level in lambda_set(spec, m_max) {
                report
                    .spectra
                    .push(snapshot(spec, level.value_rational(n), Some(level), m_max));
                report.indices.push(index_row(spec, level)?);
            }
            report.verdicts = candidate_levels(m_max)
                .into_iter()
                .map(|level| verdict(spec, level))
                .collect();
            report.search = Some(verify_theorems(spec, params.mu_max)?);
        }
        Command::Search => report.search = Some(verify_theorems(spec, params.mu_max)?),
        Command::Selftest => unreachable!("handled above"),
    }
    Ok(report)
}

pub fn render_json(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {}  {}  input sha256:{}",
        report.tool,
        report.version,
        report.command.name(),
        report.input_digest
    );
    if let Some(spec) = &report.spec {
        let _ = writeln!(out, "system: {spec}");
    }

    if !report.decomposition.is_empty() {
        let _ = writeln!(out, "\nharmonic decomposition (rotation:multiplicity)");
        for row in &report.decomposition {
            let _ = writeln!(
                out,
                "  m={:<3} dim H={:<8} dim V={:<8} H={}  V={}",
                row.m, row.dim_harmonic, row.dim_cumulative, row.harmonic, row.cumulative
            );
        }
    }

    if !report.levels.is_empty() {
        let _ = writeln!(out, "\nbifurcation levels");
        let _ = writeln!(out, "  {:<6} {:>8} {:>14}", "level", "value", "kernel excess");
        for row in &report.levels {
            let _ = writeln!(
                out,
                "  {:<6} {:>8} {:>14}",
                row.level.to_string(),
                row.value,
                row.kernel_excess
            );
        }
    }

    for snap in &report.spectra {
        let at = match snap.level {
            Some(level) => format!("level {level} (λ = {})", snap.lambda),
            None => format!("λ = {}", snap.lambda),
        };
        let _ = writeln!(out, "\nspectrum at {at}, kernel excess {}", snap.kernel_excess);
        for entry in &snap.entries {
            let origins: Vec<String> = entry
                .origins
                .iter()
                .map(|o| format!("{:?}@{}", o.family, o.m))
                .collect();
            let _ = writeln!(
                out,
                "  {:>12}  blocks={:<3} dim={:<8} {}",
                entry.eigenvalue.to_string(),
                entry.block_mult,
                entry.total_dim,
                origins.join(" ")
            );
        }
    }

    if !report.indices.is_empty() {
        let _ = writeln!(out, "\nbifurcation indices");
        for row in &report.indices {
            let names: Vec<String> = row.routes.iter().map(|r| r.route.to_string()).collect();
            let _ = writeln!(out, "  {:<4} {}", row.level.to_string(), row.value);
            let _ = writeln!(out, "       agreed by {}", names.join(", "));
        }
    }

    if !report.verdicts.is_empty() {
        let _ = writeln!(out, "\nverdicts");
        for v in &report.verdicts {
            let constraint = match v.constraint {
                Some(c) => {
                    let pairs: Vec<String> = c
                        .allowed_pairs()
                        .iter()
                        .map(|(p, m)| format!("({p},{m})"))
                        .collect();
                    format!("; bounded ones use only {}", pairs.join(" or "))
                }
                None => String::new(),
            };
            let _ = writeln!(
                out,
                "  {:<4} {}{}  [{}]",
                v.level.to_string(),
                v.conclusion,
                constraint,
                v.citations.join(", ")
            );
        }
    }

    if let Some(search) = &report.search {
        let _ = writeln!(
            out,
            "\nbounded-pattern search (orbits={}, mu_max={}, regime {:?}): {} pattern(s)",
            search.orbits.count(),
            search.mu_max,
            search.regime,
            search.patterns.len()
        );
        for p in &search.patterns {
            let _ = writeln!(out, "  {p}");
        }
        let _ = writeln!(out, "  confirmed: {}", search.checks.join(", "));
    }

    if let Some(summary) = &report.selftest {
        let _ = writeln!(
            out,
            "\nselftest grid={:?} mu_max={}",
            summary.grid, summary.mu_max
        );
        for check in &summary.checks {
            let status = if check.passed() { "ok" } else { "FAILED" };
            let _ = writeln!(
                out,
                "  {:<20} {:>7} cases  {}",
                check.name, check.cases, status
            );
            for example in &check.examples {
                let _ = writeln!(out, "    {example}");
            }
        }
        let _ = writeln!(
            out,
            "{}",
            if summary.passed() { "all checks passed" } else { "selftest FAILED" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{parse_spec, Orbits};

    fn spec() -> SystemSpec {
        parse_spec(r#"{"N": 3, "a": [-1, 1], "b": [1, 1], "orbits": 2}"#).unwrap()
    }

    #[test]
    fn classify_round_trips() {
        let params = Parameters {
            m_max: 3,
            mu_max: 3,
            ..Default::default()
        };
        let report = build(Command::Classify, Some(&spec()), &params).unwrap();
        let text = render_json(&report);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(render_json(&back), text);
        assert_eq!(report.verdicts.len(), 7);
    }

    #[test]
    fn digest_depends_on_input() {
        let params = Parameters::default();
        let s = spec();
        let a = input_digest(Command::Classify, Some(&s), &params);
        assert_eq!(a, input_digest(Command::Classify, Some(&s), &params));
        assert_ne!(a, input_digest(Command::Bif, Some(&s), &params));
        let one = s.with_orbits(Orbits::One);
        assert_ne!(a, input_digest(Command::Classify, Some(&one), &params));
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn missing_direction_surfaces() {
        let s = parse_spec(r#"{"N": 3, "a": [1], "b": [1], "orbits": 1}"#).unwrap();
        let params = Parameters {
            level: Some(Level::PlusBeta(2)),
            ..Default::default()
        };
        let err = build(Command::Bif, Some(&s), &params).unwrap_err();
        assert!(matches!(err, Error::MissingDirection { .. }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn text_mentions_sections() {
        let params = Parameters {
            m_max: 2,
            mu_max: 2,
            ..Default::default()
        };
        let text = render_text(&build(Command::Classify, Some(&spec()), &params).unwrap());
        for needle in ["bifurcation levels", "bifurcation indices", "verdicts", "bounded-pattern search"] {
            assert!(text.contains(needle), "{needle}");
        }
    }
}
