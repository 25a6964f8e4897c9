//! Equivariant gradient degrees of `±Id` on unit balls of SO(2)-representations.
//!
//! For `V ≈ R[k_0, 0] ⊕ R[k_1, 1] ⊕ … ⊕ R[k_r, r]` the degree of `-Id` on the
//! open unit ball is
//!
//! ```text
//! SO(2)-coordinate: (-1)^{k_0}
//! Z_i-coordinate:   (-1)^{k_0 + 1} · k_i      (i ≥ 1)
//! ```
//!
//! and it vanishes on every other orbit type. The degree of `Id` is always
//! the unit. Degrees of direct sums multiply (product formula), which is how
//! the index computations assemble larger blocks.

use num_bigint::BigInt;

use crate::euler::EulerElement;
use crate::rep::{is_odd, RepDecomposition};

/// Degree of `-Id` on the unit ball of `rep`.
pub fn deg_neg_id(rep: &RepDecomposition) -> EulerElement {
    let trivial_odd = is_odd(&rep.mult(0));
    let so2 = if trivial_odd { -1 } else { 1 };
    let z = rep.iter().filter(|&(m, _)| m > 0).map(|(m, k)| {
        let k = BigInt::from(k.clone());
        (m, if trivial_odd { k } else { -k })
    });
    EulerElement::new(so2, z)
}

/// Degree of `Id` on the unit ball of any representation.
pub fn deg_identity(_rep: &RepDecomposition) -> EulerElement {
    EulerElement::unit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{cumulative_decomp, harmonic_decomp, rep_sum};

    fn rep(pairs: &[(u32, u32)]) -> RepDecomposition {
        RepDecomposition::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn examples() {
        assert_eq!(deg_neg_id(&RepDecomposition::empty()), EulerElement::unit());
        assert_eq!(
            deg_neg_id(&rep(&[(0, 2), (5, 3)])),
            EulerElement::new(1, [(5u32, -3)])
        );
        let h31 = harmonic_decomp(3, 1);
        let expect = EulerElement::new(-1, [(1u32, 1)]);
        assert_eq!(deg_neg_id(&h31), expect);
        assert_eq!(
            deg_neg_id(&rep(&[(0, 1)])).star(&deg_neg_id(&rep(&[(1, 1)]))),
            expect
        );
    }

    #[test]
    fn identity_is_unit() {
        assert_eq!(deg_identity(&RepDecomposition::empty()), EulerElement::unit());
        assert_eq!(deg_identity(&rep(&[(0, 7)])), EulerElement::unit());
        assert_eq!(deg_identity(&cumulative_decomp(4, 3)), EulerElement::unit());
    }

    #[test]
    fn product_formula_exhaustive_small() {
        // every pair of representations supported on {0,1,2} with multiplicities <= 2
        let mut reps = Vec::new();
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                for c in 0..=2u32 {
                    reps.push(rep(&[(0, a), (1, b), (2, c)]));
                }
            }
        }
        for x in &reps {
            for y in &reps {
                assert_eq!(
                    deg_neg_id(&rep_sum(x, y)),
                    deg_neg_id(x).star(&deg_neg_id(y)),
                    "{x} ⊕ {y}"
                );
            }
        }
    }

    #[test]
    fn powers_are_scaled_reps() {
        let x = cumulative_decomp(5, 3);
        for n in 0..=5u32 {
            assert_eq!(
                deg_neg_id(&x).pow(i64::from(n)).unwrap(),
                deg_neg_id(&x.scaled(n))
            );
        }
    }
}
