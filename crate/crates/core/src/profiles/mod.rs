//! Strict rankings, preference profiles and the rankings induced by planar embeddings.

mod bounds;
mod canonical;
mod recognize;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::geometry::{distance_key, NormTag, Point2, Rational};

pub use bounds::{
    bennett_max_size, check_last_place_bound, l2_planar_max_size, last_place_candidates, size_bound_report,
    stirling_first_unsigned, LastPlaceReport, SizeBoundReport,
};
pub use canonical::{canonical, CanonicalId};
pub use recognize::{find_isomorphic_subprofile, recognize_l2_four, L2Verdict, MAX_ISOMORPHISM_ARITY};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("point is equidistant from candidates {0} and {1}")]
    Tie(usize, usize),
    #[error("voter {voter} is equidistant from candidates {first} and {second}")]
    VoterTie { voter: usize, first: usize, second: usize },
    #[error("{0:?} is not a permutation of 0..{1}")]
    InvalidRanking(Vec<usize>, usize),
    #[error("embedding has no candidates")]
    EmptyEmbedding,
    #[error("two candidates share a position")]
    DuplicateCandidates,
    #[error("profiles are over {0} and {1} candidates")]
    SizeMismatch(usize, usize),
    #[error("permutation search refused for {0} candidates (limit {MAX_ISOMORPHISM_ARITY})")]
    ComplexityGuard(usize),
    #[error("expected 4 candidates, got {0}")]
    WrongArity(usize),
    #[error("the last-place bound is only stated for l1 and linf")]
    UnsupportedNorm,
    #[error("dimension {d} is outside 1..={m}")]
    InvalidDimension { m: usize, d: usize },
}

/// A strict ranking of candidates `0..m`, best first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self, ProfileError> {
        let m = order.len();
        let mut seen = vec![false; m];
        for &c in &order {
            if c >= m || std::mem::replace(&mut seen[c], true) {
                return Err(ProfileError::InvalidRanking(order, m));
            }
        }
        Ok(Ranking(order))
    }

    /// Builds a ranking from 1-based labels such as `(4, 3, 1, 2)`.
    pub fn from_one_based(labels: &[usize]) -> Result<Self, ProfileError> {
        if labels.contains(&0) {
            return Err(ProfileError::InvalidRanking(labels.to_vec(), labels.len()));
        }
        Ranking::new(labels.iter().map(|c| c - 1).collect())
    }

    pub fn identity(m: usize) -> Self {
        Ranking((0..m).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn reversed(&self) -> Self {
        Ranking(self.0.iter().rev().copied().collect())
    }

    /// Renames every candidate `c` to `sigma[c]`.
    pub fn relabel(&self, sigma: &[usize]) -> Self {
        Ranking(self.0.iter().map(|&c| sigma[c]).collect())
    }

    /// Position of candidate `c` (0 = best).
    pub fn position(&self, c: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == c)
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.0.iter().map(|c| format!("c{}", c + 1)).collect();
        write!(f, "{}", labels.join(" > "))
    }
}

/// A set of distinct strict rankings over `m` candidates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    m: usize,
    rankings: BTreeSet<Ranking>,
}

impl Profile {
    pub fn empty(m: usize) -> Self {
        Profile { m, rankings: BTreeSet::new() }
    }

    pub fn new(m: usize, rankings: impl IntoIterator<Item = Ranking>) -> Result<Self, ProfileError> {
        let mut profile = Profile::empty(m);
        for r in rankings {
            profile.insert(r)?;
        }
        Ok(profile)
    }

    /// Returns `true` if the ranking was not already present.
    pub fn insert(&mut self, r: Ranking) -> Result<bool, ProfileError> {
        if r.m() != self.m {
            return Err(ProfileError::SizeMismatch(self.m, r.m()));
        }
        Ok(self.rankings.insert(r))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.rankings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rankings.is_empty()
    }

    pub fn contains(&self, r: &Ranking) -> bool {
        self.rankings.contains(r)
    }

    pub fn rankings(&self) -> impl Iterator<Item = &Ranking> {
        self.rankings.iter()
    }

    pub fn is_subprofile_of(&self, other: &Profile) -> bool {
        self.m == other.m && self.rankings.is_subset(&other.rankings)
    }

    pub fn relabel(&self, sigma: &[usize]) -> Profile {
        Profile { m: self.m, rankings: self.rankings.iter().map(|r| r.relabel(sigma)).collect() }
    }

    /// Number of times each candidate is ranked first.
    pub fn first_place_census(&self) -> Vec<usize> {
        let mut census = vec![0; self.m];
        for c in self.rankings.iter().filter_map(Ranking::first) {
            census[c] += 1;
        }
        census
    }
}

/// Candidate positions in the plane; index `i` is candidate `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding2 {
    positions: Vec<Point2>,
}

impl Embedding2 {
    pub fn new(positions: Vec<Point2>) -> Result<Self, ProfileError> {
        if positions.is_empty() {
            return Err(ProfileError::EmptyEmbedding);
        }
        if positions.iter().collect::<BTreeSet<_>>().len() != positions.len() {
            return Err(ProfileError::DuplicateCandidates);
        }
        Ok(Embedding2 { positions })
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self, ProfileError> {
        Embedding2::new(coords.iter().map(|&(x, y)| Point2::int(x, y)).collect())
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn m(&self) -> usize {
        self.positions.len()
    }
}

/// Sorts candidate indices by their keys, failing on the first equal pair.
pub(crate) fn rank_by_keys(keys: &[Rational]) -> Result<Ranking, ProfileError> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
    for w in order.windows(2) {
        if keys[w[0]] == keys[w[1]] {
            return Err(ProfileError::Tie(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Ok(Ranking(order))
}

/// The ranking of a voter at `p`: candidates by strictly increasing distance.
pub fn ranking_at(emb: &Embedding2, norm: NormTag, p: &Point2) -> Result<Ranking, ProfileError> {
    let keys: Vec<Rational> = emb.positions.iter().map(|c| distance_key(norm, p, c)).collect();
    rank_by_keys(&keys)
}

/// The deduplicated profile of a set of voters.
pub fn profile_of(emb: &Embedding2, norm: NormTag, voters: &[Point2]) -> Result<Profile, ProfileError> {
    let mut profile = Profile::empty(emb.m());
    for (voter, p) in voters.iter().enumerate() {
        let r = ranking_at(emb, norm, p).map_err(|e| match e {
            ProfileError::Tie(first, second) => ProfileError::VoterTie { voter, first, second },
            other => other,
        })?;
        profile.insert(r)?;
    }
    Ok(profile)
}
