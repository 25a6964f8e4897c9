//! Finite-dimensional orthogonal SO(2)-representations as multiplicity maps,
//! and the decompositions of the spherical-harmonic spaces `H^N_m` and their
//! cumulative sums `V(m) = H^N_0 ⊕ … ⊕ H^N_m`.
//!
//! A representation is stored as `rotation number -> multiplicity`. Entry `0`
//! counts trivial lines; entry `m ≥ 1` counts copies of the two-dimensional
//! irreducible on which a rotation by `φ` acts as rotation by `mφ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jsonint;

/// Multiset of SO(2)-irreducibles. Zero multiplicities are never stored, so
/// derived equality is equality of representations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepDecomposition {
    #[serde(with = "jsonint::biguint_map")]
    mult: BTreeMap<u32, BigUint>,
}

impl RepDecomposition {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, T>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (u32, T)>,
        T: Into<BigUint>,
    {
        let mut rep = Self::empty();
        for (m, k) in pairs {
            rep.add_copies(m, &k.into());
        }
        rep
    }

    /// Multiplicity of rotation number `m` (zero when absent).
    pub fn mult(&self, m: u32) -> BigUint {
        self.mult.get(&m).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigUint)> {
        self.mult.iter().map(|(&m, k)| (m, k))
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn max_rotation(&self) -> Option<u32> {
        self.mult.keys().next_back().copied()
    }

    /// Real dimension: trivial lines count once, every other irreducible twice.
    pub fn total_dim(&self) -> BigUint {
        self.iter()
            .map(|(m, k)| if m == 0 { k.clone() } else { k * 2u32 })
            .sum()
    }

    /// Direct sum of `n` copies.
    pub fn scaled(&self, n: u32) -> Self {
        if n == 0 {
            return Self::empty();
        }
        RepDecomposition {
            mult: self.iter().map(|(m, k)| (m, k * n)).collect(),
        }
    }

    fn add_copies(&mut self, m: u32, k: &BigUint) {
        if k.is_zero() {
            return;
        }
        *self.mult.entry(m).or_default() += k;
    }
}

impl fmt::Display for RepDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (m, k)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}:{k}")?;
        }
        f.write_str("}")
    }
}

/// Direct sum `x ⊕ y`.
pub fn rep_sum(x: &RepDecomposition, y: &RepDecomposition) -> RepDecomposition {
    let mut out = x.clone();
    for (m, k) in y.iter() {
        out.add_copies(m, k);
    }
    out
}

/// Complement `x ⊖ y`; requires `y` to be a subrepresentation of `x`.
pub fn rep_sub(x: &RepDecomposition, y: &RepDecomposition) -> Result<RepDecomposition> {
    let mut out = x.clone();
    for (m, k) in y.iter() {
        let have = out.mult(m);
        if &have < k {
            return Err(Error::NegativeMultiplicity(format!(
                "cannot remove {k} copies of rotation number {m} from {have} in {x} ⊖ {y}"
            )));
        }
        let left = have - k;
        if left.is_zero() {
            out.mult.remove(&m);
        } else {
            out.mult.insert(m, left);
        }
    }
    Ok(out)
}

fn check_dim(sphere_dim: u32) {
    assert!(sphere_dim >= 3, "sphere dimension N must be at least 3");
}

/// `k^m_j = C(m + N - 3 - j, N - 3)`: the number of copies of rotation number
/// `j` inside `H^N_m`.
pub fn harmonic_multiplicity(sphere_dim: u32, m: u32, j: u32) -> Result<BigUint> {
    if sphere_dim < 3 {
        return Err(Error::DomainError(format!(
            "N must be at least 3, got {sphere_dim}"
        )));
    }
    if j > m {
        return Err(Error::DomainError(format!(
            "rotation number j = {j} exceeds degree m = {m}"
        )));
    }
    let top = BigUint::from(m - j + sphere_dim - 3);
    Ok(num_integer::binomial(top, BigUint::from(sphere_dim - 3)))
}

/// SO(2)-decomposition of `H^N_m`.
pub fn harmonic_decomp(sphere_dim: u32, m: u32) -> RepDecomposition {
    check_dim(sphere_dim);
    let mut rep = RepDecomposition::empty();
    for j in 0..=m {
        let k = harmonic_multiplicity(sphere_dim, m, j).expect("j within range");
        rep.add_copies(j, &k);
    }
    rep
}

/// SO(2)-decomposition of `V(m)`. The multiplicity of rotation number `l` is
/// `r^m_l = k^l_l + k^{l+1}_l + … + k^m_l` (zero for `l > m`).
pub fn cumulative_decomp(sphere_dim: u32, m: u32) -> RepDecomposition {
    check_dim(sphere_dim);
    let mut rep = RepDecomposition::empty();
    for l in 0..=m {
        let r: BigUint = (l..=m)
            .map(|k| harmonic_multiplicity(sphere_dim, k, l).expect("l <= k"))
            .sum();
        rep.add_copies(l, &r);
    }
    rep
}

/// Brute-force decomposition of `H^N_m` by listing the Gelfand–Tsetlin style
/// basis labels: weakly decreasing sequences `m = m_0 ≥ m_1 ≥ … ≥ m_{N-2} ≥ 0`.
/// A label ending in `j` spans one copy of rotation number `j` (a single
/// trivial line when `j = 0`).
///
/// Exponential in `N`; meant as an oracle at small sizes.
pub fn oracle_enumerate(sphere_dim: u32, m: u32) -> RepDecomposition {
    check_dim(sphere_dim);
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    // Free positions m_1 … m_{N-2}.
    let free = (sphere_dim - 2) as usize;
    let mut seq = vec![0u32; free];
    enumerate_tails(m, 0, &mut seq, &mut |tail| {
        let last = tail.last().copied().unwrap_or(m);
        *counts.entry(last).or_default() += 1;
    });
    RepDecomposition::from_pairs(counts)
}

fn enumerate_tails(bound: u32, pos: usize, seq: &mut [u32], visit: &mut impl FnMut(&[u32])) {
    if pos == seq.len() {
        visit(seq);
        return;
    }
    for v in 0..=bound {
        seq[pos] = v;
        enumerate_tails(v, pos + 1, seq, visit);
    }
}

/// `dim H^N_m`.
pub fn dim_harmonic(sphere_dim: u32, m: u32) -> BigUint {
    harmonic_decomp(sphere_dim, m).total_dim()
}

/// `dim V(m)`.
pub fn dim_cumulative(sphere_dim: u32, m: u32) -> BigUint {
    cumulative_decomp(sphere_dim, m).total_dim()
}

pub(crate) fn is_odd(x: &BigUint) -> bool {
    x.bit(0)
}

/// `(-1)^x` for a natural number `x`.
pub(crate) fn sign_pow(x: &BigUint) -> i32 {
    if is_odd(x) {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(pairs: &[(u32, u32)]) -> RepDecomposition {
        RepDecomposition::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn multiplicity_edges() {
        for n in 3..=8 {
            for m in 1..=9 {
                assert_eq!(harmonic_multiplicity(n, m, m).unwrap(), BigUint::from(1u32));
                assert_eq!(
                    harmonic_multiplicity(n, m, m - 1).unwrap(),
                    BigUint::from(n - 2)
                );
            }
        }
        for j in 0..=7 {
            assert_eq!(harmonic_multiplicity(3, 7, j).unwrap(), BigUint::from(1u32));
        }
        assert!(matches!(
            harmonic_multiplicity(4, 2, 3),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn harmonic_examples() {
        let h32 = harmonic_decomp(3, 2);
        assert_eq!(h32, rep(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(h32.total_dim(), BigUint::from(5u32));
        for n in 3..=7 {
            assert_eq!(harmonic_decomp(n, 0), rep(&[(0, 1)]));
        }
        let h43 = harmonic_decomp(4, 3);
        assert_eq!(h43, rep(&[(0, 4), (1, 3), (2, 2), (3, 1)]));
        assert_eq!(h43.total_dim(), BigUint::from(16u32));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_enumerate(3, 1), rep(&[(0, 1), (1, 1)]));
        assert_eq!(oracle_enumerate(5, 0), rep(&[(0, 1)]));
        assert_eq!(oracle_enumerate(4, 2), rep(&[(0, 3), (1, 2), (2, 1)]));
    }

    #[test]
    fn oracle_agrees_small() {
        for n in 3..=6 {
            for m in 0..=8 {
                assert_eq!(harmonic_decomp(n, m), oracle_enumerate(n, m), "N={n} m={m}");
            }
        }
    }

    #[test]
    fn cumulative_examples() {
        assert_eq!(cumulative_decomp(3, 1), rep(&[(0, 2), (1, 1)]));
        assert_eq!(cumulative_decomp(3, 1).total_dim(), BigUint::from(4u32));
        assert_eq!(cumulative_decomp(6, 0), rep(&[(0, 1)]));
        let v32 = cumulative_decomp(3, 2);
        assert_eq!(v32, rep(&[(0, 3), (1, 2), (2, 1)]));
        assert_eq!(v32.total_dim(), BigUint::from(9u32));
        assert_eq!(
            rep_sum(&harmonic_decomp(3, 0), &harmonic_decomp(3, 1)),
            cumulative_decomp(3, 1)
        );
    }

    #[test]
    fn dimension_closed_form() {
        // dim H^N_m = C(m+N-1, N-1) - C(m+N-3, N-1)
        for n in 3..=7u32 {
            for m in 0..=10u32 {
                let big = num_integer::binomial(BigUint::from(m + n - 1), BigUint::from(n - 1));
                let small = if m >= 2 {
                    num_integer::binomial(BigUint::from(m + n - 3), BigUint::from(n - 1))
                } else {
                    BigUint::zero()
                };
                assert_eq!(dim_harmonic(n, m), big - small, "N={n} m={m}");
            }
        }
        for m in 0..=10u32 {
            assert_eq!(dim_harmonic(3, m), BigUint::from(2 * m + 1));
            assert_eq!(dim_cumulative(3, m), BigUint::from((m + 1) * (m + 1)));
        }
    }

    #[test]
    fn subtraction() {
        let d = rep_sub(&cumulative_decomp(3, 2), &cumulative_decomp(3, 0)).unwrap();
        assert_eq!(d, rep(&[(0, 2), (1, 2), (2, 1)]));
        let x = harmonic_decomp(5, 3);
        assert!(rep_sub(&x, &x).unwrap().is_empty());
        assert!(matches!(
            rep_sub(&rep(&[(0, 1)]), &rep(&[(1, 1)])),
            Err(Error::NegativeMultiplicity(_))
        ));
    }

    #[test]
    fn sum_identity_and_canonical_form() {
        let x = rep(&[(0, 1)]);
        assert_eq!(rep_sum(&x, &rep(&[(1, 2)])), rep(&[(0, 1), (1, 2)]));
        assert_eq!(rep_sum(&x, &RepDecomposition::empty()), x);
        assert_eq!(rep(&[(3, 0), (1, 1)]), rep(&[(1, 1)]));
        assert_eq!(x.scaled(0), RepDecomposition::empty());
    }
}
