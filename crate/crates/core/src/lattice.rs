//! Rank of sublattices of `Z^3`.
//!
//! The rank of the lattice spanned by integer vectors equals the rank of the
//! generator matrix over the rationals, so it is decided with exact
//! fraction-free arithmetic: nonvanishing 2x2 and 3x3 minors in `i128`, with a
//! Bareiss elimination over big integers when a minor would overflow.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

pub type IntVec3 = [i128; 3];

/// Rank (0..=3) of the sublattice of `Z^3` generated by `gens`.
pub fn lattice_rank(gens: &[IntVec3]) -> usize {
    minor_rank(gens).unwrap_or_else(|| bareiss_rank(gens))
}

fn cross(a: &IntVec3, b: &IntVec3) -> Option<IntVec3> {
    let c0 = a[1].checked_mul(b[2])?.checked_sub(a[2].checked_mul(b[1])?)?;
    let c1 = a[2].checked_mul(b[0])?.checked_sub(a[0].checked_mul(b[2])?)?;
    let c2 = a[0].checked_mul(b[1])?.checked_sub(a[1].checked_mul(b[0])?)?;
    Some([c0, c1, c2])
}

fn dot(a: &IntVec3, b: &IntVec3) -> Option<i128> {
    a[0].checked_mul(b[0])?.checked_add(a[1].checked_mul(b[1])?)?.checked_add(a[2].checked_mul(b[2])?)
}

/// `None` on overflow.
fn minor_rank(gens: &[IntVec3]) -> Option<usize> {
    let mut rest = gens.iter();
    let first = match rest.by_ref().find(|v| **v != [0, 0, 0]) {
        Some(v) => v,
        None => return Some(0),
    };
    let mut normal = None;
    for v in rest.by_ref() {
        let c = cross(first, v)?;
        if c != [0, 0, 0] {
            normal = Some(c);
            break;
        }
    }
    let normal = match normal {
        Some(n) => n,
        None => return Some(1),
    };
    for v in rest {
        if dot(&normal, v)? != 0 {
            return Some(3);
        }
    }
    Some(2)
}

/// Fraction-free (Bareiss) elimination over arbitrary precision integers.
pub fn bareiss_rank(gens: &[IntVec3]) -> usize {
    let mut rows: Vec<[BigInt; 3]> =
        gens.iter().map(|v| [BigInt::from(v[0]), BigInt::from(v[1]), BigInt::from(v[2])]).collect();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..3 {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            let factor = rows[r][col].clone();
            for c in col..3 {
                let v = (&pivot * &rows[r][c] - &factor * &rows[rank][c]) / &prev;
                rows[r][c] = v;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(lattice_rank(&[]), 0);
        assert_eq!(lattice_rank(&[[0, 0, 0]]), 0);
        // [[2,0,0],[3,0,0]] row-reduces to a single nonzero row
        assert_eq!(lattice_rank(&[[2, 0, 0], [3, 0, 0]]), 1);
        assert_eq!(lattice_rank(&[[1, 0, 0], [0, 1, 0], [1, 1, 0]]), 2);
        assert_eq!(lattice_rank(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]), 3);
    }

    #[test]
    fn huge_entries_fall_back_to_bigint() {
        let big = i128::MAX / 4;
        let gens = vec![[big, 1, 0], [big, 0, 1], [0, big, big]];
        assert!(minor_rank(&gens).is_none());
        assert_eq!(lattice_rank(&gens), bareiss_rank(&gens));
        assert_eq!(lattice_rank(&[[big, 0, 0], [2 * (big / 2), 0, 0]]), 1);
    }

    proptest! {
        #[test]
        fn minors_agree_with_bareiss(gens in proptest::collection::vec(
            proptest::array::uniform3(-4i128..=4), 0..6))
        {
            prop_assert_eq!(minor_rank(&gens).unwrap(), bareiss_rank(&gens));
        }
    }
}
