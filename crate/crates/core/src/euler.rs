//! The Euler ring `U(SO(2))`.
//!
//! As an abelian group `U(SO(2))` is free on the orbit types
//! `SO(2), Z_1, Z_2, …`, so an element is a tuple
//! `(α_SO(2), α_Z1, α_Z2, …)` with finitely many nonzero entries. The product
//! only couples each `Z_l` coordinate with the `SO(2)` coordinate:
//!
//! ```text
//! (α₀, α_l) ⋆ (β₀, β_l) = (α₀β₀, α₀β_l + α_lβ₀)
//! ```
//!
//! so the ring is the square-zero extension `Z ⊕ M` where `M` is the free
//! module on the `Z_l`. An element is a unit exactly when `α₀ = ±1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jsonint;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EulerElement {
    #[serde(with = "jsonint::bigint")]
    so2: BigInt,
    #[serde(with = "jsonint::bigint_map")]
    z: BTreeMap<u32, BigInt>,
}

impl EulerElement {
    pub fn new<I, T>(so2: impl Into<BigInt>, z: I) -> Self
    where
        I: IntoIterator<Item = (u32, T)>,
        T: Into<BigInt>,
    {
        let mut out = EulerElement {
            so2: so2.into(),
            z: BTreeMap::new(),
        };
        for (l, v) in z {
            assert!(l >= 1, "Z_l coordinates are indexed from l = 1");
            out.add_z(l, v.into());
        }
        out
    }

    /// The unit `𝕀 = (1, 0, 0, …)`.
    pub fn unit() -> Self {
        EulerElement {
            so2: BigInt::one(),
            z: BTreeMap::new(),
        }
    }

    /// The zero `Θ`.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn so2(&self) -> &BigInt {
        &self.so2
    }

    /// The `Z_l` coordinate (zero when absent).
    pub fn z(&self, l: u32) -> BigInt {
        self.z.get(&l).cloned().unwrap_or_default()
    }

    /// Nonzero `Z_l` coordinates in increasing `l`.
    pub fn z_iter(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.z.iter().map(|(&l, v)| (l, v))
    }

    pub fn is_zero(&self) -> bool {
        self.so2.is_zero() && self.z.is_empty()
    }

    pub fn max_z(&self) -> Option<u32> {
        self.z.keys().next_back().copied()
    }

    fn add_z(&mut self, l: u32, v: BigInt) {
        if v.is_zero() {
            return;
        }
        let slot = self.z.entry(l).or_default();
        *slot += v;
        if slot.is_zero() {
            self.z.remove(&l);
        }
    }

    /// Multiplication by an integer.
    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        EulerElement {
            so2: &self.so2 * k,
            z: self.z.iter().map(|(&l, v)| (l, v * k)).collect(),
        }
    }

    /// The ring product `⋆`.
    pub fn star(&self, other: &Self) -> Self {
        let mut out = EulerElement {
            so2: &self.so2 * &other.so2,
            z: BTreeMap::new(),
        };
        for (&l, v) in &other.z {
            out.add_z(l, &self.so2 * v);
        }
        for (&l, v) in &self.z {
            out.add_z(l, v * &other.so2);
        }
        out
    }

    pub fn is_invertible(&self) -> bool {
        self.so2.abs().is_one()
    }

    /// `(α₀, α_Z1, α_Z2, …)⁻¹ = (α₀, -α_Z1, -α_Z2, …)` for `α₀ = ±1`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible(self.clone()));
        }
        Ok(EulerElement {
            so2: self.so2.clone(),
            z: self.z.iter().map(|(&l, v)| (l, -v)).collect(),
        })
    }

    /// `x^n` by repeated squaring; negative exponents require a unit.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = Self::unit();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.star(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.star(&sq);
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for EulerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.so2)?;
        if !self.z.is_empty() {
            f.write_str(", {")?;
            for (i, (l, v)) in self.z.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "Z{l}:{v}")?;
            }
            f.write_str("}")?;
        }
        f.write_str(")")
    }
}

impl Add for &EulerElement {
    type Output = EulerElement;

    fn add(self, rhs: &EulerElement) -> EulerElement {
        let mut out = self.clone();
        out.so2 += &rhs.so2;
        for (&l, v) in &rhs.z {
            out.add_z(l, v.clone());
        }
        out
    }
}

impl Add for EulerElement {
    type Output = EulerElement;

    fn add(self, rhs: EulerElement) -> EulerElement {
        &self + &rhs
    }
}

impl Neg for &EulerElement {
    type Output = EulerElement;

    fn neg(self) -> EulerElement {
        EulerElement {
            so2: -&self.so2,
            z: self.z.iter().map(|(&l, v)| (l, -v)).collect(),
        }
    }
}

impl Neg for EulerElement {
    type Output = EulerElement;

    fn neg(self) -> EulerElement {
        -&self
    }
}

impl Sub for &EulerElement {
    type Output = EulerElement;

    fn sub(self, rhs: &EulerElement) -> EulerElement {
        self + &(-rhs)
    }
}

impl Sub for EulerElement {
    type Output = EulerElement;

    fn sub(self, rhs: EulerElement) -> EulerElement {
        &self - &rhs
    }
}

impl Mul for &EulerElement {
    type Output = EulerElement;

    fn mul(self, rhs: &EulerElement) -> EulerElement {
        self.star(rhs)
    }
}

impl Mul for EulerElement {
    type Output = EulerElement;

    fn mul(self, rhs: EulerElement) -> EulerElement {
        self.star(&rhs)
    }
}

impl std::iter::Sum for EulerElement {
    fn sum<I: Iterator<Item = EulerElement>>(iter: I) -> Self {
        iter.fold(EulerElement::zero(), |acc, x| &acc + &x)
    }
}
