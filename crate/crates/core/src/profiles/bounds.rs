use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Profile, ProfileError};
use crate::geometry::NormTag;

/// Candidates ranked last by at least one ranking.
pub fn last_place_candidates(prof: &Profile) -> BTreeSet<usize> {
    prof.rankings().filter_map(|r| r.last()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LastPlaceReport {
    pub norm: NormTag,
    pub dimension: usize,
    pub last_place: BTreeSet<usize>,
    pub bound: BigUint,
    pub pass: bool,
}

/// Checks the last-place count against `2^d` (l1) or `2d` (linf).
///
/// A failure certifies that the profile has no representation in dimension `d`.
pub fn check_last_place_bound(prof: &Profile, norm: NormTag, d: usize) -> Result<LastPlaceReport, ProfileError> {
    let bound = match norm {
        NormTag::L1 => BigUint::one() << d,
        NormTag::Linf => BigUint::from(2 * d),
        NormTag::L2 => return Err(ProfileError::UnsupportedNorm),
    };
    let last_place = last_place_candidates(prof);
    let pass = BigUint::from(last_place.len()) <= bound;
    Ok(LastPlaceReport { norm, dimension: d, last_place, bound, pass })
}

/// Unsigned Stirling number of the first kind `[n, k]`.
pub fn stirling_first_unsigned(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for (j, slot) in next.iter_mut().enumerate().skip(1) {
            let carried = row.get(j).map_or_else(BigUint::zero, |v| v * BigUint::from(i - 1));
            *slot = &row[j - 1] + carried;
        }
        row = next;
    }
    row[k].clone()
}

/// Maximum number of distinct rankings of `m` candidates realizable in `R^d` under l2.
pub fn bennett_max_size(m: usize, d: usize) -> Result<BigUint, ProfileError> {
    if d == 0 || d > m {
        return Err(ProfileError::InvalidDimension { m, d });
    }
    Ok((m - d..=m).map(|k| stirling_first_unsigned(m, k)).sum())
}

/// Closed-form planar l2 maximum: `m(3m-10)(m-1)(m+1)/24 + m(m-1) + 1`.
pub fn l2_planar_max_size(m: usize) -> BigUint {
    let m = BigInt::from(m);
    let one = BigInt::one();
    let product: BigInt = &m * (BigInt::from(3) * &m - BigInt::from(10)) * (&m - &one) * (&m + &one);
    let (quotient, remainder) = product.div_rem(&BigInt::from(24));
    assert!(remainder.is_zero(), "numerator is always divisible by 24");
    let total: BigInt = quotient + &m * (&m - &one) + one;
    total.to_biguint().expect("value is positive for every m")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeBoundReport {
    pub size: usize,
    /// `None` when no bound is known for this arity and norm.
    pub bound: Option<BigUint>,
    pub violation: bool,
}

/// Compares a profile's size with the known planar maxima.
pub fn size_bound_report(prof: &Profile, norm: NormTag) -> SizeBoundReport {
    let bound = match (prof.m(), norm) {
        (4, NormTag::L1 | NormTag::Linf) => Some(BigUint::from(19u32)),
        (_, NormTag::L2) if prof.m() >= 1 => Some(l2_planar_max_size(prof.m())),
        _ => None,
    };
    let violation = bound.as_ref().is_some_and(|b| BigUint::from(prof.len()) > *b);
    SizeBoundReport { size: prof.len(), bound, violation }
}
