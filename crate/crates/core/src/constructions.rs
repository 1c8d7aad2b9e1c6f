//! Extremal embeddings: a planar l1 family with quartic cell growth, and the d-dimensional
//! families in which every candidate is ranked last by someone.

use num_traits::{One, Signed, Zero};

pub use crate::geometry::rotate45;
use crate::geometry::{
    classify_bisector_l1, detect_degeneracies, perturb_generic, rat, NormTag, Orientation, Point2, Rational,
};
use crate::profiles::{rank_by_keys, Embedding2, Profile, ProfileError, Ranking};

/// A point of `R^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointD {
    pub coords: Vec<Rational>,
}

impl PointD {
    pub fn new(coords: Vec<Rational>) -> Self {
        PointD { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn from_point2(p: &Point2) -> Self {
        PointD { coords: vec![p.x.clone(), p.y.clone()] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingD {
    pub d: usize,
    pub candidates: Vec<PointD>,
    pub voters: Vec<PointD>,
}

/// Distance key in `R^d`: squared for l2, exact otherwise.
pub fn distance_key_d(norm: NormTag, p: &PointD, q: &PointD) -> Rational {
    let diffs = p.coords.iter().zip(&q.coords).map(|(a, b)| (a - b).abs());
    match norm {
        NormTag::L1 => diffs.sum(),
        NormTag::L2 => diffs.map(|t| &t * &t).sum(),
        NormTag::Linf => diffs.max().unwrap_or_else(Rational::zero),
    }
}

pub fn ranking_at_d(emb: &EmbeddingD, norm: NormTag, p: &PointD) -> Result<Ranking, ProfileError> {
    let keys: Vec<Rational> = emb.candidates.iter().map(|c| distance_key_d(norm, p, c)).collect();
    rank_by_keys(&keys)
}

/// The profile of the embedding's own voters.
pub fn voter_profile_d(emb: &EmbeddingD, norm: NormTag) -> Result<Profile, ProfileError> {
    let mut profile = Profile::empty(emb.candidates.len());
    for (voter, v) in emb.voters.iter().enumerate() {
        let r = ranking_at_d(emb, norm, v).map_err(|e| match e {
            ProfileError::Tie(first, second) => ProfileError::VoterTie { voter, first, second },
            other => other,
        })?;
        profile.insert(r)?;
    }
    Ok(profile)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HVCounts {
    pub h: usize,
    pub v: usize,
}

impl HVCounts {
    /// Cells guaranteed by the crossings of every horizontal with every vertical bisector.
    pub fn cell_lower_bound(self) -> usize {
        (self.h + 1) * (self.v + 1)
    }
}

/// Horizontal/vertical bisector counts after placing `m` candidates of the quartic family.
pub fn hv_counts(m: usize) -> HVCounts {
    let mut counts = HVCounts { h: 0, v: 0 };
    for k in 2..=m {
        if k % 2 == 0 {
            counts.h += k - 1;
        } else {
            counts.v += k - 1;
        }
    }
    counts
}

/// Unperturbed positions of the quartic family. Candidate `k` (1-based) makes horizontal
/// bisectors with all earlier candidates when `k` is even, vertical ones when odd.
pub fn theta_m4_positions(m: usize) -> Vec<Point2> {
    let mut pts = vec![Point2::int(0, 0), Point2::int(1, 2)];
    let two = Rational::from_integer(2.into());
    let half = rat(1, 2);
    for k in 3..=m {
        let max_x = pts.iter().map(|p| &p.x).max().cloned().expect("non-empty");
        let min_x = pts.iter().map(|p| &p.x).min().cloned().expect("non-empty");
        let max_y = pts.iter().map(|p| &p.y).max().cloned().expect("non-empty");
        let min_y = pts.iter().map(|p| &p.y).min().cloned().expect("non-empty");
        let next = if k % 2 == 0 {
            Point2::new((&max_x + &min_x) * &half, &max_y + (&max_x - &min_x) * &two)
        } else {
            Point2::new(&max_x + (&max_y - &min_y) * &two, (&max_y + &min_y) * &half)
        };
        pts.push(next);
    }
    pts.truncate(m.max(1));
    pts
}

/// The quartic family, nudged into general position when the raw positions are degenerate.
pub fn theta_m4_embedding(m: usize) -> Result<Embedding2, ProfileError> {
    let raw = theta_m4_positions(m);
    let report = detect_degeneracies(NormTag::L1, &raw, None).map_err(|_| ProfileError::DuplicateCandidates)?;
    let positions = if report.is_empty() {
        raw
    } else {
        perturb_generic(NormTag::L1, &raw, None).map_err(|_| ProfileError::DuplicateCandidates)?
    };
    Embedding2::new(positions)
}

/// Whether every bisector `H(c_k, c_i)`, `i < k`, has the orientation the family prescribes.
pub fn theta_orientations_hold(emb: &Embedding2) -> bool {
    let p = emb.positions();
    (1..p.len()).all(|k| {
        // Index k is candidate k + 1.
        let want = if (k + 1) % 2 == 0 { Orientation::Horizontal } else { Orientation::Vertical };
        (0..k).all(|i| classify_bisector_l1(&p[k], &p[i]).ok().and_then(|kind| kind.orientation()) == Some(want))
    })
}

fn tie_break(i: usize) -> Rational {
    rat(1, 100 * (i as i64 + 3))
}

fn unit(d: usize, i: usize, value: Rational) -> Vec<Rational> {
    let mut coords = vec![Rational::zero(); d];
    coords[i] = value;
    coords
}

/// `2d` linf candidates at `-(1+e_i) e_i` and `(1+e_i) e_i`, with one voter at each unit
/// point `-e_i`, `e_i`. Voter coordinates off their own axis are shifted by `e_j / 10`
/// so that no voter is equidistant from two candidates.
pub fn linf_last_place_embedding(d: usize) -> EmbeddingD {
    let mut candidates = Vec::with_capacity(2 * d);
    let mut voters = Vec::with_capacity(2 * d);
    for i in 0..d {
        let scaled = Rational::one() + tie_break(i);
        for sign in [-Rational::one(), Rational::one()] {
            candidates.push(PointD::new(unit(d, i, &scaled * &sign)));
            let mut v: Vec<Rational> = (0..d).map(|j| tie_break(j) * rat(1, 10)).collect();
            v[i] = sign;
            voters.push(PointD::new(v));
        }
    }
    EmbeddingD { d, candidates, voters }
}

/// `2^d` l1 candidates at the cube vertices `u`, each shifted on the first coordinate by
/// its own small amount, with a voter at every `-u`.
pub fn l1_last_place_embedding(d: usize) -> EmbeddingD {
    let count = 1usize << d;
    let mut candidates = Vec::with_capacity(count);
    let mut voters = Vec::with_capacity(count);
    for k in 0..count {
        let u: Vec<Rational> =
            (0..d).map(|i| if (k >> i) & 1 == 1 { Rational::one() } else { -Rational::one() }).collect();
        voters.push(PointD::new(u.iter().map(|c| -c).collect()));
        let mut c = u;
        c[0] += tie_break(k);
        candidates.push(PointD::new(c));
    }
    EmbeddingD { d, candidates, voters }
}
