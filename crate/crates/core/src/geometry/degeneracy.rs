use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::bisector::{build_bisector, Bisector};
use super::intersect::{intersect, IntersectionResult};
use super::point::{distance_key, rat, rotate45, unrotate45, NormTag, Point2, Rational};
use super::GeometryError;

pub type Pair = (usize, usize);

/// A bisector together with the candidate pair it separates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledBisector {
    pub pair: Pair,
    pub bisector: Bisector,
}

/// Bisectors of every candidate pair `(i, j)`, `i < j`, in lexicographic order.
pub fn all_bisectors(norm: NormTag, positions: &[Point2]) -> Result<Vec<LabeledBisector>, GeometryError> {
    let mut out = Vec::with_capacity(positions.len() * positions.len().saturating_sub(1) / 2);
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let bisector =
                build_bisector(norm, &positions[i], &positions[j]).map_err(|_| GeometryError::DuplicateCandidates)?;
            out.push(LabeledBisector { pair: (i, j), bisector });
        }
    }
    Ok(out)
}

/// Intersections of every pair of non-degenerate bisectors, keyed by bisector indices.
pub fn pairwise_intersections(bisectors: &[LabeledBisector]) -> Result<Vec<(Pair, IntersectionResult)>, GeometryError> {
    let index_pairs: Vec<(usize, usize)> = (0..bisectors.len())
        .flat_map(|a| (a + 1..bisectors.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| !bisectors[a].bisector.is_degenerate() && !bisectors[b].bisector.is_degenerate())
        .collect();
    index_pairs
        .into_par_iter()
        .map(|(a, b)| intersect(&bisectors[a].bisector, &bisectors[b].bisector).map(|r| ((a, b), r)))
        .collect()
}

/// Every way an embedding fails to be generic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegeneracyReport {
    /// Pairs with `dx = dy` (l1 frame).
    pub square_pairs: BTreeSet<Pair>,
    /// Pairs with `dx = 0` or `dy = 0` (l1 frame).
    pub axis_pairs: BTreeSet<Pair>,
    /// Bisector pairs sharing a piece of positive length.
    pub infinite_pairs: BTreeSet<(Pair, Pair)>,
    /// Points lying on four or more bisectors, with the pairs of those bisectors.
    pub fat_points: Vec<(Point2, BTreeSet<Pair>)>,
    /// `(voter index, candidate pair)` with equal distances.
    pub voter_ties: BTreeSet<(usize, Pair)>,
}

impl DegeneracyReport {
    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn total(&self) -> usize {
        self.square_pairs.len()
            + self.axis_pairs.len()
            + self.infinite_pairs.len()
            + self.fat_points.len()
            + self.voter_ties.len()
    }
}

fn check_distinct(positions: &[Point2]) -> Result<(), GeometryError> {
    let unique: BTreeSet<&Point2> = positions.iter().collect();
    if unique.len() != positions.len() {
        return Err(GeometryError::DuplicateCandidates);
    }
    Ok(())
}

/// Lists every degeneracy of an embedding (and optional voters) under `norm`.
///
/// Square and axis pairs only matter for the polyline norms; for linf they are evaluated
/// in the l1 frame obtained by undoing the 45 degree map.
pub fn detect_degeneracies(
    norm: NormTag,
    positions: &[Point2],
    voters: Option<&[Point2]>,
) -> Result<DegeneracyReport, GeometryError> {
    check_distinct(positions)?;
    let mut report = DegeneracyReport::default();
    if norm != NormTag::L2 {
        let frame: Vec<Point2> = match norm {
            NormTag::Linf => positions.iter().map(unrotate45).collect(),
            _ => positions.to_vec(),
        };
        for i in 0..frame.len() {
            for j in i + 1..frame.len() {
                let dx = (&frame[i].x - &frame[j].x).abs();
                let dy = (&frame[i].y - &frame[j].y).abs();
                if dx.is_zero() || dy.is_zero() {
                    report.axis_pairs.insert((i, j));
                } else if dx == dy {
                    report.square_pairs.insert((i, j));
                }
            }
        }
    }

    let bisectors = all_bisectors(norm, positions)?;
    let mut incidence: BTreeMap<Point2, BTreeSet<Pair>> = BTreeMap::new();
    for ((a, b), result) in pairwise_intersections(&bisectors)? {
        let (pa, pb) = (bisectors[a].pair, bisectors[b].pair);
        if let IntersectionResult::Infinite(_) = result {
            report.infinite_pairs.insert((pa, pb));
            continue;
        }
        for p in result.points() {
            let entry = incidence.entry(p).or_default();
            entry.insert(pa);
            entry.insert(pb);
        }
    }
    report.fat_points = incidence.into_iter().filter(|(_, pairs)| pairs.len() >= 4).collect();

    if let Some(voters) = voters {
        for (v, point) in voters.iter().enumerate() {
            let keys: Vec<Rational> = positions.iter().map(|c| distance_key(norm, point, c)).collect();
            for i in 0..keys.len() {
                for j in i + 1..keys.len() {
                    if keys[i] == keys[j] {
                        report.voter_ties.insert((v, (i, j)));
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

fn positive_min(values: impl Iterator<Item = Rational>) -> Option<Rational> {
    values.filter(|v| v.is_positive()).min()
}

/// Half the smallest of the gap budgets that keep bisector types and voter rankings intact.
fn nudge_budget(norm: NormTag, positions: &[Point2], voters: &[Point2]) -> Result<Rational, GeometryError> {
    let n = positions.len();
    let pairs = || (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)));
    let dx = |(i, j): Pair| (&positions[i].x - &positions[j].x).abs();
    let dy = |(i, j): Pair| (&positions[i].y - &positions[j].y).abs();
    let mut budgets = vec![
        positive_min(pairs().map(dx)),
        positive_min(pairs().map(dy)),
        positive_min(pairs().map(|p| (dx(p) - dy(p)).abs())),
    ];
    for v in voters {
        let keys: Vec<Rational> = positions.iter().map(|c| distance_key(norm, v, c)).collect();
        let gap = positive_min(pairs().map(|(i, j)| (&keys[i] - &keys[j]).abs()));
        if gap.is_none() && n >= 2 {
            return Err(GeometryError::NoStrictGap);
        }
        budgets.push(gap);
    }
    let smallest = budgets.into_iter().flatten().min().unwrap_or_else(Rational::one);
    Ok(smallest * rat(1, 2))
}

/// Sign pattern of every voter's pairwise comparisons.
fn comparison_signs(norm: NormTag, positions: &[Point2], voters: &[Point2]) -> Vec<Vec<i8>> {
    voters
        .iter()
        .map(|v| {
            let keys: Vec<Rational> = positions.iter().map(|c| distance_key(norm, v, c)).collect();
            let mut signs = Vec::new();
            for i in 0..keys.len() {
                for j in i + 1..keys.len() {
                    signs.push(match keys[i].cmp(&keys[j]) {
                        std::cmp::Ordering::Less => -1,
                        std::cmp::Ordering::Equal => 0,
                        std::cmp::Ordering::Greater => 1,
                    });
                }
            }
            signs
        })
        .collect()
}

fn strict_preserved(before: &[Vec<i8>], after: &[Vec<i8>]) -> bool {
    before.iter().zip(after).all(|(b, a)| b.iter().zip(a).all(|(&sb, &sa)| sb == 0 || sb == sa))
}

/// Candidate moves for the first offending item, preferred move first.
fn moves_for(report: &DegeneracyReport, positions: &[Point2]) -> Vec<(usize, Axis)> {
    let pair_moves = |(i, j): Pair, first: Axis| {
        let second = if first == Axis::X { Axis::Y } else { Axis::X };
        vec![(i, first), (i, second), (j, first), (j, second)]
    };
    if let Some(&p) = report.square_pairs.iter().next() {
        return pair_moves(p, Axis::X);
    }
    if let Some(&(i, j)) = report.axis_pairs.iter().next() {
        let first = if positions[i].x == positions[j].x { Axis::X } else { Axis::Y };
        return pair_moves((i, j), first);
    }
    if let Some(&(p, q)) = report.infinite_pairs.iter().next() {
        let mut moves = pair_moves(p, Axis::X);
        moves.extend(pair_moves(q, Axis::X));
        return moves;
    }
    if let Some((_, pairs)) = report.fat_points.first() {
        let involved: BTreeSet<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
        return involved.into_iter().flat_map(|c| [(c, Axis::X), (c, Axis::Y)]).collect();
    }
    if let Some(&(_, p)) = report.voter_ties.iter().next() {
        return pair_moves(p, Axis::X);
    }
    Vec::new()
}

const MAX_ROUNDS: usize = 500;
const MAX_HALVINGS: usize = 48;

/// Moves candidates by tiny single-coordinate nudges until the embedding is generic.
///
/// Every voter comparison that was strict before stays strict with the same sign; voter
/// ties are repaired. For linf the work happens in the l1 frame.
pub fn perturb_generic(
    norm: NormTag,
    positions: &[Point2],
    voters: Option<&[Point2]>,
) -> Result<Vec<Point2>, GeometryError> {
    check_distinct(positions)?;
    let voters = voters.unwrap_or(&[]);
    if norm == NormTag::Linf {
        let frame: Vec<Point2> = positions.iter().map(unrotate45).collect();
        let frame_voters: Vec<Point2> = voters.iter().map(unrotate45).collect();
        let moved = perturb_generic(NormTag::L1, &frame, Some(&frame_voters))?;
        return Ok(moved.iter().map(rotate45).collect());
    }
    let with_voters = Some(voters);
    let original_signs = comparison_signs(norm, positions, voters);
    let mut current = positions.to_vec();
    let mut report = detect_degeneracies(norm, &current, with_voters)?;
    for _ in 0..MAX_ROUNDS {
        if report.is_empty() {
            return Ok(current);
        }
        let budget = nudge_budget(norm, &current, voters)?;
        let mut progressed = false;
        'moves: for (cand, axis) in moves_for(&report, &current) {
            let mut eps = budget.clone();
            for _ in 0..MAX_HALVINGS {
                let mut trial = current.clone();
                match axis {
                    Axis::X => trial[cand].x += &eps,
                    Axis::Y => trial[cand].y += &eps,
                }
                eps *= rat(1, 2);
                let signs = comparison_signs(norm, &trial, voters);
                if !strict_preserved(&original_signs, &signs) {
                    continue;
                }
                let trial_report = detect_degeneracies(norm, &trial, with_voters)?;
                if trial_report.total() < report.total() {
                    current = trial;
                    report = trial_report;
                    progressed = true;
                    break 'moves;
                }
            }
        }
        if !progressed {
            return Err(GeometryError::PerturbationStalled);
        }
    }
    if report.is_empty() {
        Ok(current)
    } else {
        Err(GeometryError::PerturbationStalled)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point::int;

    fn p(x: i64, y: i64) -> Point2 {
        Point2::int(x, y)
    }

    fn max_l1_four() -> Vec<Point2> {
        vec![p(0, 8), p(10, 10), p(4, 1), p(8, 3)]
    }

    #[test]
    fn maximal_l1_embedding_is_generic() {
        let report = detect_degeneracies(NormTag::L1, &max_l1_four(), None).unwrap();
        assert!(report.is_empty(), "{report:?}");
    }

    #[test]
    fn generic_oracle_over_pairs() {
        // Exhaustive pairwise oracle: no dx = dy, dx = 0 or dy = 0 among the six pairs.
        let pts = max_l1_four();
        for i in 0..4 {
            for j in i + 1..4 {
                let dx = (&pts[i].x - &pts[j].x).abs();
                let dy = (&pts[i].y - &pts[j].y).abs();
                assert!(!dx.is_zero() && !dy.is_zero() && dx != dy);
            }
        }
    }

    #[test]
    fn square_pair_is_reported() {
        let report = detect_degeneracies(NormTag::L1, &[p(0, 0), p(2, 2), p(7, 3)], None).unwrap();
        assert!(report.square_pairs.contains(&(0, 1)));
        // Squares are harmless for l2.
        let report = detect_degeneracies(NormTag::L2, &[p(0, 0), p(2, 2), p(7, 3)], None).unwrap();
        assert!(report.square_pairs.is_empty());
    }

    #[test]
    fn duplicates_rejected() {
        assert_eq!(
            detect_degeneracies(NormTag::L1, &[p(1, 1), p(1, 1)], None),
            Err(GeometryError::DuplicateCandidates)
        );
    }

    #[test]
    fn cocircular_four_points_are_fat_in_l2() {
        let report = detect_degeneracies(NormTag::L2, &[p(1, 0), p(0, 1), p(-1, 0), p(0, -1)], None).unwrap();
        assert_eq!(report.fat_points.len(), 1);
        assert_eq!(report.fat_points[0].0, p(0, 0));
    }

    #[test]
    fn voter_ties_are_reported() {
        let report = detect_degeneracies(NormTag::L1, &[p(0, 0), p(2, 0)], Some(&[p(1, 5), p(0, 1)])).unwrap();
        assert_eq!(report.voter_ties, BTreeSet::from([(0, (0, 1))]));
    }

    #[test]
    fn generic_input_is_fixed_point() {
        let out = perturb_generic(NormTag::L1, &max_l1_four(), None).unwrap();
        assert_eq!(out, max_l1_four());
    }

    #[test]
    fn square_pair_is_repaired_and_voter_kept() {
        let cands = [p(0, 0), p(2, 2)];
        let voter = p(0, 1);
        let out = perturb_generic(NormTag::L1, &cands, Some(std::slice::from_ref(&voter))).unwrap();
        let report = detect_degeneracies(NormTag::L1, &out, Some(std::slice::from_ref(&voter))).unwrap();
        assert!(report.is_empty());
        assert!(distance_key(NormTag::L1, &voter, &out[0]) < distance_key(NormTag::L1, &voter, &out[1]));
        // Lowest index moves, x first.
        assert_eq!(out[1], cands[1]);
        assert_eq!(out[0].y, int(0));
    }

    #[test]
    fn voter_tie_is_repaired() {
        let cands = [p(0, 0), p(2, 2), p(9, 4)];
        let voter = p(0, 3);
        let out = perturb_generic(NormTag::L1, &cands, Some(std::slice::from_ref(&voter))).unwrap();
        assert!(detect_degeneracies(NormTag::L1, &out, Some(&[voter])).unwrap().is_empty());
    }

    #[test]
    fn voter_without_any_strict_gap() {
        assert_eq!(
            perturb_generic(NormTag::L1, &[p(0, 0), p(2, 2)], Some(&[p(0, 2)])),
            Err(GeometryError::NoStrictGap)
        );
    }

    #[test]
    fn perturbation_keeps_every_strict_comparison() {
        let cands = [p(0, 0), p(4, 0), p(4, 4), p(1, 7)];
        let voters = [p(1, 1), p(3, 5), p(-2, 6), p(7, 2)];
        for norm in NormTag::ALL {
            let before = comparison_signs(norm, &cands, &voters);
            let out = perturb_generic(norm, &cands, Some(&voters)).unwrap();
            assert!(detect_degeneracies(norm, &out, Some(&voters)).unwrap().is_empty(), "{norm}");
            let after = comparison_signs(norm, &out, &voters);
            assert!(strict_preserved(&before, &after));
        }
    }
}
