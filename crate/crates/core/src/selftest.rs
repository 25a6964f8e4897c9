//! Grid-wide consistency checks run by `bifsphere selftest`.
//!
//! Each check walks a grid of systems or a seeded random sample and compares
//! two independent computations. Failures are collected, not raised, so one
//! run reports every broken invariant.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{search_naive, search_with_table, verify_theorems, BifTable};
use crate::degree::deg_neg_id;
use crate::error::Result;
use crate::euler::EulerElement;
use crate::index::{bif_closed, bif_general, bif_ring, top_coordinate};
use crate::rep::{
    cumulative_decomp, dim_cumulative, dim_harmonic, harmonic_decomp, harmonic_multiplicity,
    oracle_enumerate, rep_sum, sign_pow, RepDecomposition,
};
use crate::spectrum::{beta, in_lambda, kernel_dim_excess, lambda_set, Level};
use crate::system::{DerivedCounts, Orbits, SystemSpec};

const SEED: u64 = 0x5eed_b1f5;
const MAX_REPORTED: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    Small,
    Full,
}

impl Grid {
    pub fn sphere_dims(self) -> std::ops::RangeInclusive<u32> {
        match self {
            Grid::Small => 3..=5,
            Grid::Full => 3..=6,
        }
    }

    pub fn max_count(self) -> u32 {
        match self {
            Grid::Small => 3,
            Grid::Full => 4,
        }
    }

    pub fn max_degenerate(self) -> u32 {
        match self {
            Grid::Small => 1,
            Grid::Full => 2,
        }
    }

    pub fn m_max(self) -> u32 {
        match self {
            Grid::Small => 8,
            Grid::Full => 10,
        }
    }

    /// Every system of the grid with the given orbit count.
    pub fn specs(self, orbits: Orbits) -> Vec<SystemSpec> {
        let mut out = Vec::new();
        for n in self.sphere_dims() {
            for n_minus in 0..=self.max_count() {
                for n_plus in 0..=self.max_count() {
                    if n_minus + n_plus == 0 {
                        continue;
                    }
                    for n_minus0 in 0..=self.max_degenerate() {
                        for n_plus0 in 0..=self.max_degenerate() {
                            let counts = DerivedCounts {
                                n_minus,
                                n_plus,
                                n_minus0,
                                n_plus0,
                            };
                            out.push(
                                SystemSpec::from_counts(n, counts, orbits)
                                    .expect("grid counts are valid"),
                            );
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    /// The first few failing cases.
    pub examples: Vec<String>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            cases: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_REPORTED {
                self.examples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestSummary {
    pub grid: Grid,
    pub mu_max: u32,
    pub checks: Vec<CheckResult>,
}

impl SelftestSummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

pub fn run(grid: Grid, mu_max: u32) -> SelftestSummary {
    let checks = vec![
        check_representations(grid),
        check_ring_axioms(),
        check_degree_products(),
        check_routes(grid),
        check_coordinates(grid),
        check_lambda(grid),
        check_theorems(grid, mu_max),
        check_search_oracle(grid),
    ];
    SelftestSummary {
        grid,
        mu_max,
        checks,
    }
}

fn check_representations(grid: Grid) -> CheckResult {
    let mut c = CheckResult::new("representations");
    for n in grid.sphere_dims() {
        for m in 0..=grid.m_max() {
            let h = harmonic_decomp(n, m);
            c.record(h == oracle_enumerate(n, m), || {
                format!("N={n} m={m}: closed form differs from enumeration")
            });
            let k = |j| harmonic_multiplicity(n, m, j).expect("j <= m");
            c.record(k(m).is_one(), || format!("N={n} m={m}: k^m_m != 1"));
            if m > 0 {
                c.record(k(m - 1) == BigUint::from(n - 2), || {
                    format!("N={n} m={m}: k^m_(m-1) != N-2")
                });
                let prev = cumulative_decomp(n, m - 1);
                let cur = cumulative_decomp(n, m);
                c.record(cur == rep_sum(&prev, &h), || {
                    format!("N={n} m={m}: r^m != r^(m-1) + k^m")
                });
            }
            c.record(sign_pow(&k(0)) == sign_pow(&dim_harmonic(n, m)), || {
                format!("N={n} m={m}: parity of k^m_0 differs from dim H")
            });
            c.record(
                sign_pow(&cumulative_decomp(n, m).mult(0)) == sign_pow(&dim_cumulative(n, m)),
                || format!("N={n} m={m}: parity of r^m_0 differs from dim V"),
            );
        }
    }
    c
}

pub fn random_element(rng: &mut impl Rng, max_support: u32, bound: i64) -> EulerElement {
    let so2 = rng.gen_range(-bound..=bound);
    let mut z = Vec::new();
    for l in 1..=max_support {
        if rng.gen_bool(0.5) {
            z.push((l, rng.gen_range(-bound..=bound)));
        }
    }
    EulerElement::new(so2, z)
}

/// `x^n ⋆ (y^n - 𝕀)` expanded coordinatewise.
pub fn power_difference_expanded(x: &EulerElement, y: &EulerElement, n: u32) -> EulerElement {
    let a = x.so2();
    let b = y.so2();
    let a_n = a.pow(n);
    let b_n = b.pow(n);
    let a_n1 = a.pow(n - 1);
    let b_n1 = b.pow(n - 1);
    let so2 = &a_n * (&b_n - 1);
    let top = x.max_z().max(y.max_z()).unwrap_or(0);
    let z = (1..=top).map(|l| {
        let xl = x.z(l);
        let yl = y.z(l);
        let inner = &xl * &b_n - &xl + a * &b_n1 * &yl;
        (l, BigInt::from(n) * &a_n1 * inner)
    });
    EulerElement::new(so2, z)
}

fn check_ring_axioms() -> CheckResult {
    let mut c = CheckResult::new("euler-ring");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let unit = EulerElement::unit();
    for _ in 0..200 {
        let x = random_element(&mut rng, 10, 50);
        let y = random_element(&mut rng, 10, 50);
        let w = random_element(&mut rng, 10, 50);
        c.record(x.star(&y) == y.star(&x), || format!("{x} ⋆ {y} not commutative"));
        c.record(x.star(&y).star(&w) == x.star(&y.star(&w)), || {
            format!("{x}, {y}, {w} not associative")
        });
        c.record(x.star(&(&y + &w)) == &x.star(&y) + &x.star(&w), || {
            format!("{x}, {y}, {w} not distributive")
        });
        c.record(unit.star(&x) == x, || format!("unit not neutral on {x}"));
        let n = rng.gen_range(1..=5u32);
        let direct = x.pow(i64::from(n)).expect("n >= 0").star(&(&y.pow(i64::from(n)).expect("n >= 0") - &unit));
        c.record(direct == power_difference_expanded(&x, &y, n), || {
            format!("power difference fails for {x}, {y}, n={n}")
        });
        let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let u = EulerElement::new(sign, x.z_iter().map(|(l, v)| (l, v.clone())));
        let inv = u.inverse().expect("unit");
        c.record(u.star(&inv) == unit, || format!("{u} ⋆ inverse != 𝕀"));
        let a = rng.gen_range(-4..=4i64);
        let b = rng.gen_range(-4..=4i64);
        c.record(
            u.pow(a).expect("unit").star(&u.pow(b).expect("unit")) == u.pow(a + b).expect("unit"),
            || format!("{u}^{a} ⋆ {u}^{b} != {u}^{}", a + b),
        );
    }
    c
}

fn check_degree_products() -> CheckResult {
    let mut c = CheckResult::new("degree-product");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let random_rep = |rng: &mut ChaCha8Rng| {
        RepDecomposition::from_pairs((0..6u32).map(|m| (m, rng.gen_range(0..=4u32))))
    };
    for _ in 0..100 {
        let x = random_rep(&mut rng);
        let y = random_rep(&mut rng);
        c.record(
            deg_neg_id(&rep_sum(&x, &y)) == deg_neg_id(&x).star(&deg_neg_id(&y)),
            || format!("product formula fails for {x} ⊕ {y}"),
        );
    }
    c
}

fn check_routes(grid: Grid) -> CheckResult {
    let mut c = CheckResult::new("index-routes");
    for spec in grid.specs(Orbits::One) {
        for level in lambda_set(&spec, grid.m_max()) {
            let ring = bif_ring(&spec, level).map(|b| b.value);
            let closed = bif_closed(&spec, level).map(|b| b.value);
            c.record(ring.is_ok() && ring == closed, || {
                format!("{spec} at {level}: ring {ring:?} vs closed {closed:?}")
            });
            let m = level.index();
            for n in m + 1..=m + 4 {
                let general = bif_general(&spec, level, n).map(|b| b.value);
                c.record(ring == general, || {
                    format!("{spec} at {level}: ring {ring:?} vs general(n={n}) {general:?}")
                });
            }
        }
    }
    c
}

fn check_coordinates(grid: Grid) -> CheckResult {
    let mut c = CheckResult::new("index-coordinates");
    for spec in grid.specs(Orbits::One) {
        for level in lambda_set(&spec, grid.m_max()) {
            let value = match bif_ring(&spec, level) {
                Ok(b) => b.value,
                Err(e) => {
                    c.record(false, || format!("{spec} at {level}: {e}"));
                    continue;
                }
            };
            if level == Level::Zero {
                let vanishes = spec.counts().same_parity();
                c.record(value.is_zero() == vanishes, || {
                    format!("{spec}: BIF(0) = {value}")
                });
                continue;
            }
            let m = level.index();
            c.record(value.z(m) == top_coordinate(&spec, level), || {
                format!("{spec} at {level}: top coordinate of {value}")
            });
            c.record(value.max_z().is_none_or(|top| top <= m), || {
                format!("{spec} at {level}: {value} has coordinates above {m}")
            });
            c.record(!value.is_zero(), || format!("{spec} at {level}: index vanishes"));
        }
    }
    c
}

fn check_lambda(grid: Grid) -> CheckResult {
    let mut c = CheckResult::new("lambda");
    for spec in grid.specs(Orbits::One) {
        let n = spec.sphere_dim();
        let mut candidates = vec![Level::Zero];
        for m in 1..=grid.m_max() {
            candidates.push(Level::PlusBeta(m));
            candidates.push(Level::MinusBeta(m));
        }
        let listed = lambda_set(&spec, grid.m_max());
        for level in candidates {
            let excess = kernel_dim_excess(&spec, &level.value_rational(n));
            let member = listed.contains(&level);
            c.record(member == in_lambda(&spec, level), || {
                format!("{spec}: {level} listed={member}")
            });
            c.record(member == (excess > BigInt::zero()), || {
                format!("{spec}: {level} listed={member} kernel excess {excess}")
            });
        }
        // between consecutive levels nothing degenerates
        for m in 0..grid.m_max() {
            let mid = BigRational::new(beta(n, m) + beta(n, m + 1), BigInt::from(2));
            for lambda in [mid.clone(), -mid] {
                let excess = kernel_dim_excess(&spec, &lambda);
                c.record(excess.is_zero(), || {
                    format!("{spec}: kernel excess {excess} at {lambda}")
                });
            }
        }
    }
    c
}

fn check_theorems(grid: Grid, mu_max: u32) -> CheckResult {
    let mut c = CheckResult::new("theorem-search");
    for orbits in [Orbits::One, Orbits::Two] {
        for spec in grid.specs(orbits) {
            let outcome = verify_theorems(&spec, mu_max);
            c.record(outcome.is_ok(), || match outcome {
                Err(e) => format!("{spec}: {e}"),
                Ok(_) => unreachable!(),
            });
        }
    }
    c
}

fn check_search_oracle(grid: Grid) -> CheckResult {
    let mut c = CheckResult::new("search-oracle");
    for orbits in [Orbits::One, Orbits::Two] {
        for spec in grid.specs(orbits) {
            let counts = spec.counts();
            if counts.n_minus0 + counts.n_plus0 > 0 {
                continue;
            }
            let outcome: Result<bool> =
                BifTable::compute(&spec, 3).map(|t| search_with_table(&t, orbits) == search_naive(&t, orbits));
            c.record(matches!(outcome, Ok(true)), || {
                format!("{spec}: pruned search differs from enumeration ({outcome:?})")
            });
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes() {
        let summary = run(Grid::Small, 4);
        for check in &summary.checks {
            assert!(check.passed(), "{check:?}");
            assert!(check.cases > 0, "{}", check.name);
        }
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(Grid::Small.specs(Orbits::One).len(), 3 * 15 * 4);
        assert_eq!(Grid::Full.specs(Orbits::Two).len(), 4 * 24 * 9);
    }
}
