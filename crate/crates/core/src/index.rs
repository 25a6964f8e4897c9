//! Bifurcation indices `BIF(λ₀) ∈ U(SO(2))` at the levels of `Λ`.
//!
//! Three independent routes compute the same element:
//!
//! * [`bif_ring`] evaluates the factorised product of degrees of `-Id`
//!   in the Euler ring,
//! * [`bif_closed`] evaluates coordinate formulas in terms of the
//!   multiplicity tables `k^m_l`, `r^m_l`,
//! * [`bif_general`] assembles the negative eigenspace of the linearisation
//!   on both sides of the level at a finite truncation `n` and takes the
//!   difference of the normalised degrees.
//!
//! [`bif`] runs all of them and reports a [`Error::RouteMismatch`] if they
//! ever disagree.
//!
//! The `SO(2)`-coordinate of `BIF(+β_m)` is taken with sign
//! `(-1)^{n_- dim V(m-1)}`, which is what the product expands to. The
//! variant with `(-1)^{n_- dim V(m)}` differs by `(-1)^{n_- dim H^N_m}` and
//! is available as [`closed_so2_with_vm_exponent`] for comparison; it
//! disagrees with the other routes whenever `n_- dim H^N_m` is odd.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::degree::deg_neg_id;
use crate::error::{Error, Result};
use crate::euler::EulerElement;
use crate::rep::{
    cumulative_decomp, dim_cumulative, dim_harmonic, harmonic_decomp, harmonic_multiplicity,
    rep_sub, sign_pow,
};
use crate::spectrum::{negative_space_near, Level, Side};
use crate::system::SystemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "truncation", rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    RingProduct,
    GeneralDegree(u32),
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::ClosedForm => f.write_str("closed-form"),
            Route::RingProduct => f.write_str("ring-product"),
            Route::GeneralDegree(n) => write!(f, "general-degree(n={n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BifurcationIndex {
    pub level: Level,
    pub value: EulerElement,
    pub route: Route,
}

/// Rejects levels outside `Λ`, naming the missing coordinate family.
pub fn check_level(spec: &SystemSpec, level: Level) -> Result<()> {
    let c = spec.counts();
    match level {
        Level::PlusBeta(0) | Level::MinusBeta(0) => {
            Err(Error::LevelNotInLambda(format!("{level:?}")))
        }
        Level::PlusBeta(_) if c.n_minus == 0 => Err(Error::MissingDirection {
            level: level.to_string(),
            count: "n_-",
        }),
        Level::MinusBeta(_) if c.n_plus == 0 => Err(Error::MissingDirection {
            level: level.to_string(),
            count: "n_+",
        }),
        _ => Ok(()),
    }
}

fn sign(exp_odd: bool) -> i32 {
    if exp_odd {
        -1
    } else {
        1
    }
}

/// `((-1)^{n_-} - (-1)^{n_+}) · 𝕀`.
fn zero_level_index(spec: &SystemSpec) -> EulerElement {
    let c = spec.counts();
    let v = sign(c.n_minus % 2 == 1) - sign(c.n_plus % 2 == 1);
    EulerElement::new(v, std::iter::empty::<(u32, i32)>())
}

pub fn bif_ring(spec: &SystemSpec, level: Level) -> Result<BifurcationIndex> {
    check_level(spec, level)?;
    let n = spec.sphere_dim();
    let c = spec.counts();
    let unit = EulerElement::unit();
    let value = match level {
        Level::Zero => zero_level_index(spec),
        Level::PlusBeta(m) => {
            let e = i64::from(c.n_minus);
            let below = deg_neg_id(&cumulative_decomp(n, m - 1)).pow(e)?;
            let jump = &deg_neg_id(&harmonic_decomp(n, m)).pow(e)? - &unit;
            below.star(&jump)
        }
        Level::MinusBeta(m) => {
            let e = i64::from(c.n_plus);
            let through = deg_neg_id(&cumulative_decomp(n, m)).pow(-e)?;
            let jump = &deg_neg_id(&harmonic_decomp(n, m)).pow(e)? - &unit;
            through.star(&jump)
        }
    };
    Ok(BifurcationIndex {
        level,
        value,
        route: Route::RingProduct,
    })
}

fn count_for(spec: &SystemSpec, level: Level) -> u32 {
    match level {
        Level::PlusBeta(_) => spec.counts().n_minus,
        Level::MinusBeta(_) => spec.counts().n_plus,
        Level::Zero => 0,
    }
}

fn parity_sign(count: u32, dim: &BigUint) -> i32 {
    sign_pow(&(dim * count))
}

pub fn bif_closed(spec: &SystemSpec, level: Level) -> Result<BifurcationIndex> {
    check_level(spec, level)?;
    let value = match level {
        Level::Zero => zero_level_index(spec),
        Level::PlusBeta(m) | Level::MinusBeta(m) => {
            let n = spec.sphere_dim();
            let count = count_for(spec, level);
            let s_vm = parity_sign(count, &dim_cumulative(n, m));
            let s_hm = parity_sign(count, &dim_harmonic(n, m));
            let s_prev = parity_sign(count, &dim_cumulative(n, m - 1));
            let prev = cumulative_decomp(n, m - 1);
            let z = (1..=m).map(|l| {
                let r = BigInt::from(prev.mult(l));
                let k = BigInt::from(harmonic_multiplicity(n, m, l).expect("l <= m"));
                let inner = &r * s_hm - &r - k;
                (l, inner * count * s_vm)
            });
            let so2 = match level {
                Level::PlusBeta(_) => s_prev * (s_hm - 1),
                _ => s_vm * (s_hm - 1),
            };
            EulerElement::new(so2, z)
        }
    };
    Ok(BifurcationIndex {
        level,
        value,
        route: Route::ClosedForm,
    })
}

/// `SO(2)`-coordinate of `BIF(±β_m)` using the sign `(-1)^{n dim V(m)}` for
/// both signs of the level. Agrees with [`bif_ring`] at `-β_m` but not, in
/// general, at `+β_m`.
pub fn closed_so2_with_vm_exponent(spec: &SystemSpec, level: Level) -> Result<BigInt> {
    check_level(spec, level)?;
    Ok(match level {
        Level::Zero => zero_level_index(spec).so2().clone(),
        Level::PlusBeta(m) | Level::MinusBeta(m) => {
            let n = spec.sphere_dim();
            let count = count_for(spec, level);
            let s_vm = parity_sign(count, &dim_cumulative(n, m));
            let s_hm = parity_sign(count, &dim_harmonic(n, m));
            BigInt::from(s_vm * (s_hm - 1))
        }
    })
}

/// Degree of the unperturbed operator `L` on the truncated space, used to
/// normalise the degrees on either side of the level.
fn reference_degree(spec: &SystemSpec, truncation: u32) -> Result<EulerElement> {
    let n = spec.sphere_dim();
    let c = spec.counts();
    let full = cumulative_decomp(n, truncation);
    let nonconstant = rep_sub(&full, &cumulative_decomp(n, 0))?;
    Ok(deg_neg_id(&full)
        .pow(i64::from(c.n_plus))?
        .star(&deg_neg_id(&nonconstant).pow(i64::from(c.n_plus0))?))
}

/// Normalised degree of the linearisation on one side of `level`.
pub fn side_degree(
    spec: &SystemSpec,
    level: Level,
    side: Side,
    truncation: u32,
) -> Result<EulerElement> {
    let lambda = level.value_rational(spec.sphere_dim());
    let negative = negative_space_near(spec, &lambda, side, truncation);
    Ok(reference_degree(spec, truncation)?
        .inverse()?
        .star(&deg_neg_id(&negative)))
}

pub fn bif_general(spec: &SystemSpec, level: Level, truncation: u32) -> Result<BifurcationIndex> {
    check_level(spec, level)?;
    let m = level.index();
    if truncation <= m {
        return Err(Error::TruncationTooSmall { n: truncation, m });
    }
    let above = side_degree(spec, level, Side::Above, truncation)?;
    let below = side_degree(spec, level, Side::Below, truncation)?;
    Ok(BifurcationIndex {
        level,
        value: &above - &below,
        route: Route::GeneralDegree(truncation),
    })
}

/// Every route applicable at `level`, in a fixed order.
pub fn all_routes(spec: &SystemSpec, level: Level) -> Result<Vec<BifurcationIndex>> {
    let m = level.index();
    let mut out = vec![bif_ring(spec, level)?, bif_closed(spec, level)?];
    for n in [m + 1, m + 2] {
        out.push(bif_general(spec, level, n)?);
    }
    Ok(out)
}

fn agree(routes: &[BifurcationIndex]) -> bool {
    routes.windows(2).all(|w| w[0].value == w[1].value)
}

fn mismatch(level: Level, routes: &[BifurcationIndex]) -> Error {
    Error::RouteMismatch {
        level: level.to_string(),
        routes: routes
            .iter()
            .map(|r| (r.route.to_string(), r.value.clone()))
            .collect(),
    }
}

/// The bifurcation index at `level`, cross-checked across all routes. The
/// ring-product value is returned.
pub fn bif(spec: &SystemSpec, level: Level) -> Result<BifurcationIndex> {
    let routes = all_routes(spec, level)?;
    if !agree(&routes) {
        return Err(mismatch(level, &routes));
    }
    Ok(routes.into_iter().next().expect("ring route present"))
}

/// Checks a precomputed list of route values for agreement.
pub fn check_routes(level: Level, routes: &[BifurcationIndex]) -> Result<()> {
    if agree(routes) {
        Ok(())
    } else {
        Err(mismatch(level, routes))
    }
}

/// `BIF(±β_m)_{Z_m} = n (-1)^{n dim V(m) + 1}` with `n = n_∓`.
pub fn top_coordinate(spec: &SystemSpec, level: Level) -> BigInt {
    let count = count_for(spec, level);
    if count == 0 || level == Level::Zero {
        return BigInt::zero();
    }
    let s = parity_sign(count, &dim_cumulative(spec.sphere_dim(), level.index()));
    BigInt::from(count) * -s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{DerivedCounts, Orbits};

    fn spec(n: u32, n_minus: u32, n_plus: u32) -> SystemSpec {
        SystemSpec::from_counts(
            n,
            DerivedCounts {
                n_minus,
                n_plus,
                ..Default::default()
            },
            Orbits::One,
        )
        .unwrap()
    }

    fn e(so2: i64, z: &[(u32, i64)]) -> EulerElement {
        EulerElement::new(so2, z.iter().copied())
    }

    #[test]
    fn ring_examples() {
        assert_eq!(
            bif_ring(&spec(3, 1, 0), Level::PlusBeta(1)).unwrap().value,
            e(2, &[(1, -1)])
        );
        assert_eq!(
            bif_ring(&spec(3, 0, 1), Level::MinusBeta(1)).unwrap().value,
            e(-2, &[(1, -1)])
        );
        assert_eq!(
            bif_ring(&spec(3, 1, 2), Level::Zero).unwrap().value,
            e(-2, &[])
        );
    }

    #[test]
    fn closed_examples() {
        let s = spec(3, 1, 0);
        let closed = bif_closed(&s, Level::PlusBeta(2)).unwrap().value;
        assert_eq!(closed, e(-2, &[(1, 3), (2, 1)]));
        assert_eq!(closed, bif_ring(&s, Level::PlusBeta(2)).unwrap().value);
        for m in 1..=5 {
            let v = bif_closed(&spec(4, 2, 1), Level::PlusBeta(m)).unwrap().value;
            assert!(v.so2().is_zero());
        }
        // N = 3, n_- = 1: Z_m = (-1)^{(m+1)^2 + 1}
        for m in 1..=6u32 {
            let v = bif_closed(&s, Level::PlusBeta(m)).unwrap().value;
            let expect = if (m + 1) % 2 == 1 { 1 } else { -1 };
            assert_eq!(v.z(m), BigInt::from(expect), "m={m}");
        }
    }

    #[test]
    fn general_examples() {
        let s = spec(3, 1, 0);
        let g3 = bif_general(&s, Level::PlusBeta(1), 3).unwrap().value;
        assert_eq!(g3, e(2, &[(1, -1)]));
        assert_eq!(bif_general(&s, Level::PlusBeta(1), 4).unwrap().value, g3);
        assert_eq!(
            bif_general(&spec(3, 1, 1), Level::Zero, 2).unwrap().value,
            EulerElement::zero()
        );
        assert!(matches!(
            bif_general(&s, Level::PlusBeta(2), 2),
            Err(Error::TruncationTooSmall { n: 2, m: 2 })
        ));
    }

    #[test]
    fn dispatcher() {
        let v = bif(&spec(4, 2, 1), Level::MinusBeta(2)).unwrap();
        // dim V(2) for N = 4 is 1 + 4 + 9 = 14, so Z_2 = 1 * (-1)^{15} = -1
        assert_eq!(v.value.z(2), BigInt::from(-1));
        assert_eq!(v.route, Route::RingProduct);
        assert!(matches!(
            bif(&spec(3, 0, 1), Level::PlusBeta(2)),
            Err(Error::MissingDirection { count: "n_-", .. })
        ));
        assert!(matches!(
            bif(&spec(3, 1, 0), Level::PlusBeta(0)),
            Err(Error::LevelNotInLambda(_))
        ));
    }

    #[test]
    fn vm_exponent_variant_disagrees_when_expected() {
        // N = 3, n_- = 1: dim H_m is odd, so the two SO(2) signs differ
        let s = spec(3, 1, 0);
        for m in 1..=4 {
            let level = Level::PlusBeta(m);
            let ring = bif_ring(&s, level).unwrap().value;
            let variant = closed_so2_with_vm_exponent(&s, level).unwrap();
            assert_eq!(variant, -ring.so2().clone());
            assert!(!variant.is_zero());
        }
        // at -β_m both readings coincide
        let s = spec(3, 0, 1);
        for m in 1..=4 {
            let level = Level::MinusBeta(m);
            assert_eq!(
                &closed_so2_with_vm_exponent(&s, level).unwrap(),
                bif_ring(&s, level).unwrap().value.so2()
            );
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let level = Level::PlusBeta(1);
        let good = bif_ring(&spec(3, 1, 0), level).unwrap();
        let mut bad = good.clone();
        bad.value = e(0, &[]);
        bad.route = Route::ClosedForm;
        let err = check_routes(level, &[good, bad]).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("ring-product"));
    }
}
