use itertools::Itertools;

use super::canonical::{canonical, CanonicalId};
use super::{Profile, ProfileError};

/// Largest candidate count accepted by the exhaustive permutation search.
pub const MAX_ISOMORPHISM_ARITY: usize = 8;

/// Searches for `sigma` with `p` relabelled by `sigma` contained in `q`.
///
/// `sigma[c]` is the new name of candidate `c`.
pub fn find_isomorphic_subprofile(p: &Profile, q: &Profile) -> Result<Option<Vec<usize>>, ProfileError> {
    if p.m() != q.m() {
        return Err(ProfileError::SizeMismatch(p.m(), q.m()));
    }
    let m = p.m();
    if m > MAX_ISOMORPHISM_ARITY {
        return Err(ProfileError::ComplexityGuard(m));
    }
    if p.len() > q.len() {
        return Ok(None);
    }
    Ok((0..m).permutations(m).find(|sigma| p.rankings().all(|r| q.contains(&r.relabel(sigma)))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L2Verdict {
    pub euclidean: bool,
    /// The maximal profile that contains a relabelled copy, and the relabelling.
    pub witness: Option<(CanonicalId, Vec<usize>)>,
}

/// Decides planar l2 realizability of a four-candidate profile.
pub fn recognize_l2_four(prof: &Profile) -> Result<L2Verdict, ProfileError> {
    if prof.m() != 4 {
        return Err(ProfileError::WrongArity(prof.m()));
    }
    for id in CanonicalId::L2 {
        if let Some(sigma) = find_isomorphic_subprofile(prof, canonical(id))? {
            return Ok(L2Verdict { euclidean: true, witness: Some((id, sigma)) });
        }
    }
    Ok(L2Verdict { euclidean: false, witness: None })
}
