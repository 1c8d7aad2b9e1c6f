//! Cells of the bisector arrangement of a planar embedding, and the vertex/edge counts of
//! its intersection graph.
//!
//! Every cell touches at least one bisector along a piece of positive length, and at an
//! interior point of such a piece exactly one candidate pair is tied. Resolving that tie
//! both ways gives the rankings on the two sides, so walking all sub-pieces (bisectors cut
//! at vertices and breakpoints) yields every realizable ranking exactly. Witness points are
//! then found by stepping off the sub-piece midpoint along the normal. Unbounded cells are
//! read off a large square around all critical points.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{
    all_bisectors, detect_degeneracies, distance_key, intersect, intersect_pieces, pairwise_intersections, rat,
    Bisector, DegeneracyReport, GeometryError, IntersectionResult, LabeledBisector, NormTag, Pair, Piece, PieceHit,
    Point2, Rational,
};
use crate::profiles::{ranking_at, Embedding2, Profile, ProfileError, Ranking};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("embedding is not generic: {0:?}")]
    DegenerateEmbedding(Box<DegeneracyReport>),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("no witness found next to {0}")]
    WitnessNotFound(Box<Point2>),
    #[error("expected exactly 4 candidates, got {0}")]
    WrongArity(usize),
}

/// Vertices along one bisector, in path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Traversal {
    pub pair: Pair,
    pub vertices: Vec<Point2>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSet {
    pub bisectors: Vec<LabeledBisector>,
    /// Intersection points with the candidate pairs of every bisector through them.
    pub vertices: BTreeMap<Point2, BTreeSet<Pair>>,
    pub breakpoints: BTreeSet<Point2>,
    pub traversals: Vec<Traversal>,
}

impl CriticalSet {
    /// Number of vertices lying on exactly `k` bisectors.
    pub fn count_with_multiplicity(&self, k: usize) -> usize {
        self.vertices.values().filter(|pairs| pairs.len() == k).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub ranking: Ranking,
    pub witness: Point2,
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementGraph {
    pub m: usize,
    pub n_v: usize,
    pub n_e: usize,
    /// Connected components of the vertex/edge graph.
    pub components: usize,
    pub unbounded_cells: usize,
    pub cells: Vec<Cell>,
}

impl ArrangementGraph {
    pub fn n_z(&self) -> usize {
        self.cells.len()
    }
}

fn require_generic(emb: &Embedding2, norm: NormTag) -> Result<(), ArrangementError> {
    let report = detect_degeneracies(norm, emb.positions(), None)?;
    if report.is_empty() {
        Ok(())
    } else {
        Err(ArrangementError::DegenerateEmbedding(Box::new(report)))
    }
}

/// Sort key of a point along a bisector's path: piece index, then signed parameter. The
/// first piece of a three-piece path is a ray walked towards its origin.
fn path_key(pieces: &[Piece], p: &Point2) -> Option<(usize, Rational)> {
    pieces.iter().enumerate().find_map(|(k, piece)| {
        let t = piece.param_of(p).filter(|t| piece.in_range(t))?;
        Some(if k == 0 && pieces.len() > 1 { (k, -t) } else { (k, t) })
    })
}

pub fn critical_points(emb: &Embedding2, norm: NormTag) -> Result<CriticalSet, ArrangementError> {
    require_generic(emb, norm)?;
    let bisectors = all_bisectors(norm, emb.positions())?;
    let mut vertices: BTreeMap<Point2, BTreeSet<Pair>> = BTreeMap::new();
    let mut on_bisector: Vec<BTreeSet<Point2>> = vec![BTreeSet::new(); bisectors.len()];
    for ((a, b), result) in pairwise_intersections(&bisectors)? {
        for p in result.points() {
            let entry = vertices.entry(p.clone()).or_default();
            entry.insert(bisectors[a].pair);
            entry.insert(bisectors[b].pair);
            on_bisector[a].insert(p.clone());
            on_bisector[b].insert(p);
        }
    }
    let breakpoints = bisectors.iter().flat_map(|lb| lb.bisector.breakpoints()).collect();
    let traversals = bisectors
        .iter()
        .zip(on_bisector)
        .map(|(lb, points)| {
            let pieces = lb.bisector.pieces();
            let mut keyed: Vec<((usize, Rational), Point2)> =
                points.into_iter().map(|p| (path_key(&pieces, &p).expect("vertex lies on its bisector"), p)).collect();
            keyed.sort();
            Traversal { pair: lb.pair, vertices: keyed.into_iter().map(|(_, p)| p).collect() }
        })
        .collect();
    Ok(CriticalSet { bisectors, vertices, breakpoints, traversals })
}

/// A quarter of the smallest positive gap between critical coordinates.
fn epsilon(points: &[&Point2]) -> Rational {
    let gap = |coords: BTreeSet<&Rational>| {
        let coords: Vec<&Rational> = coords.into_iter().collect();
        coords.windows(2).map(|w| w[1] - w[0]).min()
    };
    let gx = gap(points.iter().map(|p| &p.x).collect());
    let gy = gap(points.iter().map(|p| &p.y).collect());
    [gx, gy].into_iter().flatten().min().map_or_else(Rational::one, |g| g * rat(1, 4))
}

/// Axis-aligned square `[x0, x0 + 2R] x [y0, y0 + 2R]` enclosing every critical point.
struct Perimeter {
    x0: Rational,
    y0: Rational,
    side: Rational,
}

impl Perimeter {
    fn around(points: &[&Point2]) -> Self {
        let min_x = points.iter().map(|p| &p.x).min().cloned().unwrap_or_default();
        let max_x = points.iter().map(|p| &p.x).max().cloned().unwrap_or_default();
        let min_y = points.iter().map(|p| &p.y).min().cloned().unwrap_or_default();
        let max_y = points.iter().map(|p| &p.y).max().cloned().unwrap_or_default();
        let spread = (&max_x - &min_x).max(&max_y - &min_y);
        let radius = spread * Rational::from_integer(3.into()) + Rational::one();
        let half = rat(1, 2);
        let cx = (&min_x + &max_x) * &half;
        let cy = (&min_y + &max_y) * &half;
        Perimeter { x0: cx - &radius, y0: cy - &radius, side: radius * Rational::from_integer(2.into()) }
    }

    fn corners(&self) -> [Point2; 4] {
        let x1 = &self.x0 + &self.side;
        let y1 = &self.y0 + &self.side;
        [
            Point2::new(self.x0.clone(), self.y0.clone()),
            Point2::new(x1.clone(), self.y0.clone()),
            Point2::new(x1, y1.clone()),
            Point2::new(self.x0.clone(), y1),
        ]
    }

    fn edges(&self) -> Vec<Piece> {
        let c = self.corners();
        (0..4).map(|k| Piece::Segment { a: c[k].clone(), b: c[(k + 1) % 4].clone() }).collect()
    }

    /// Counter-clockwise arc length from the lower-left corner.
    fn param(&self, p: &Point2) -> Rational {
        let s = &self.side;
        let x1 = &self.x0 + s;
        let y1 = &self.y0 + s;
        if p.y == self.y0 {
            &p.x - &self.x0
        } else if p.x == x1 {
            s + (&p.y - &self.y0)
        } else if p.y == y1 {
            s * Rational::from_integer(2.into()) + (&x1 - &p.x)
        } else {
            s * Rational::from_integer(3.into()) + (&y1 - &p.y)
        }
    }

    fn point_at(&self, t: &Rational) -> Point2 {
        let s = &self.side;
        let four = s * Rational::from_integer(4.into());
        let mut t = t.clone();
        while t >= four {
            t -= &four;
        }
        let edge = (&t / s).floor();
        let offset = &t - &edge * s;
        let c = self.corners();
        let k = if edge.is_zero() {
            0
        } else if edge.is_one() {
            1
        } else if edge == Rational::from_integer(2.into()) {
            2
        } else {
            3
        };
        let dir = &c[(k + 1) % 4] - &c[k];
        &c[k] + &(&dir * &(offset / s))
    }
}

/// Interior probe of every sub-piece of a bisector: the probe point and the piece direction.
fn sub_piece_probes(bisector: &Bisector, splits: &BTreeSet<Point2>) -> Vec<(Point2, Point2)> {
    let mut probes = Vec::new();
    for piece in bisector.pieces() {
        let mut ts: Vec<Rational> =
            splits.iter().filter_map(|p| piece.param_of(p).filter(|t| piece.in_range(t))).collect();
        ts.sort();
        ts.dedup();
        let (lo, hi) = piece.range();
        let mut params = Vec::new();
        match (ts.first(), ts.last()) {
            (Some(first), Some(last)) => {
                if lo.is_none() {
                    params.push(first - Rational::one());
                }
                params.extend(ts.windows(2).map(|w| (&w[0] + &w[1]) * rat(1, 2)));
                if hi.is_none() {
                    params.push(last + Rational::one());
                }
            }
            _ => params.push(lo.unwrap_or_default()),
        }
        let dir = piece.direction();
        probes.extend(params.iter().map(|t| (piece.at(t), dir.clone())));
    }
    probes
}

/// The two rankings on either side of a point tied only between `i` and `j`.
fn tie_resolutions(emb: &Embedding2, norm: NormTag, p: &Point2, (i, j): Pair) -> [Ranking; 2] {
    let keys: Vec<Rational> = emb.positions().iter().map(|c| distance_key(norm, p, c)).collect();
    debug_assert_eq!(keys[i], keys[j]);
    let resolve = |first: usize| {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then_with(|| (a != first).cmp(&(b != first))));
        Ranking::new(order).expect("sorted indices form a permutation")
    };
    [resolve(i), resolve(j)]
}

/// Steps off `p` along `±normal` until the ranking on that side equals `target`.
fn witness_near(
    emb: &Embedding2,
    norm: NormTag,
    p: &Point2,
    normal: &Point2,
    target: &Ranking,
    eps: &Rational,
) -> Result<Point2, ArrangementError> {
    let scale = normal.x.abs() + normal.y.abs();
    let mut delta = eps / scale;
    for _ in 0..256 {
        for sign in [Rational::one(), -Rational::one()] {
            let q = p + &(normal * &(&delta * &sign));
            if ranking_at(emb, norm, &q).as_ref() == Ok(target) {
                return Ok(q);
            }
        }
        delta *= rat(1, 2);
    }
    Err(ArrangementError::WitnessNotFound(Box::new(p.clone())))
}

struct Analysis {
    critical: CriticalSet,
    cells: Vec<Cell>,
    unbounded_cells: usize,
}

fn analyze(emb: &Embedding2, norm: NormTag) -> Result<Analysis, ArrangementError> {
    let critical = critical_points(emb, norm)?;
    let mut anchors: Vec<&Point2> = critical.vertices.keys().chain(critical.breakpoints.iter()).collect();
    anchors.extend(emb.positions());
    let eps = epsilon(&anchors);
    let perimeter = Perimeter::around(&anchors);

    // Unbounded cells: arcs of the perimeter between consecutive bisector crossings.
    let edges = perimeter.edges();
    let mut crossings: Vec<Rational> = critical
        .bisectors
        .iter()
        .flat_map(|lb| lb.bisector.pieces())
        .filter(|piece| piece.range().1.is_none() || piece.range().0.is_none())
        .flat_map(|piece| {
            edges.iter().filter_map(move |e| match intersect_pieces(&piece, e) {
                PieceHit::Point(x) => Some(x),
                _ => None,
            })
        })
        .collect::<BTreeSet<Point2>>()
        .iter()
        .map(|x| perimeter.param(x))
        .collect();
    crossings.sort();
    crossings.dedup();
    let arc_midpoints: Vec<Point2> = if crossings.is_empty() {
        vec![perimeter.point_at(&Rational::zero())]
    } else {
        let full = &perimeter.side * Rational::from_integer(4.into());
        (0..crossings.len())
            .map(|k| {
                let a = &crossings[k];
                let b = if k + 1 < crossings.len() { crossings[k + 1].clone() } else { &crossings[0] + &full };
                perimeter.point_at(&((a + b) * rat(1, 2)))
            })
            .collect()
    };
    let unbounded: BTreeSet<Ranking> =
        arc_midpoints.iter().map(|p| ranking_at(emb, norm, p)).collect::<Result<_, _>>()?;

    // Bounded and unbounded cells alike border some sub-piece.
    let probes: Vec<(Point2, Point2, Pair)> = critical
        .bisectors
        .par_iter()
        .zip(critical.traversals.par_iter())
        .flat_map_iter(|(lb, trav)| {
            let mut splits: BTreeSet<Point2> = trav.vertices.iter().cloned().collect();
            splits.extend(lb.bisector.breakpoints());
            sub_piece_probes(&lb.bisector, &splits).into_iter().map(move |(p, d)| (p, d, lb.pair))
        })
        .collect();
    let found: Vec<(Ranking, usize)> = probes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, (p, _, pair))| tie_resolutions(emb, norm, p, *pair).into_iter().map(move |r| (r, k)))
        .collect();
    let mut first_probe: BTreeMap<Ranking, usize> = BTreeMap::new();
    for (r, k) in found {
        first_probe.entry(r).and_modify(|e| *e = (*e).min(k)).or_insert(k);
    }

    let mut cells: Vec<Cell> = if emb.m() == 1 {
        vec![Cell { ranking: Ranking::identity(1), witness: emb.positions()[0].clone(), bounded: false }]
    } else {
        first_probe
            .into_par_iter()
            .map(|(ranking, k)| {
                let (p, dir, _) = &probes[k];
                let witness = witness_near(emb, norm, p, &dir.perp(), &ranking, &eps)?;
                let bounded = !unbounded.contains(&ranking);
                Ok(Cell { ranking, witness, bounded })
            })
            .collect::<Result<_, ArrangementError>>()?
    };
    cells.sort();
    let unbounded_cells = arc_midpoints.len();
    Ok(Analysis { critical, cells, unbounded_cells })
}

/// Every realizable ranking of a generic embedding, each with a witness point.
pub fn enumerate_cells(emb: &Embedding2, norm: NormTag) -> Result<Vec<Cell>, ArrangementError> {
    Ok(analyze(emb, norm)?.cells)
}

/// The profile formed by all realizable rankings.
pub fn cells_profile(m: usize, cells: &[Cell]) -> Profile {
    Profile::new(m, cells.iter().map(|c| c.ranking.clone())).expect("cell rankings cover all candidates")
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut x = x;
    while parent[x] != root {
        let next = parent[x];
        parent[x] = root;
        x = next;
    }
    root
}

pub fn build_graph(emb: &Embedding2, norm: NormTag) -> Result<ArrangementGraph, ArrangementError> {
    let Analysis { critical, cells, unbounded_cells } = analyze(emb, norm)?;
    let index: BTreeMap<&Point2, usize> = critical.vertices.keys().enumerate().map(|(k, p)| (p, k)).collect();
    let mut parent: Vec<usize> = (0..index.len()).collect();
    let mut n_e = 0;
    for trav in &critical.traversals {
        for w in trav.vertices.windows(2) {
            n_e += 1;
            let (a, b) = (find(&mut parent, index[&w[0]]), find(&mut parent, index[&w[1]]));
            parent[a] = b;
        }
    }
    let components = (0..index.len()).filter(|&k| find(&mut parent, k) == k).count();
    Ok(ArrangementGraph { m: emb.m(), n_v: index.len(), n_e, components, unbounded_cells, cells })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub n_v: usize,
    pub n_e: usize,
    pub n_z: usize,
    pub components: usize,
    pub unbounded_cells: usize,
    /// `n_e - n_v + components + unbounded_cells`.
    pub bound: i64,
    pub inequality_holds: bool,
    /// For four candidates: `n_v <= 8` and `n_z <= 19`.
    pub four_candidate_checks: Option<(bool, bool)>,
    pub pass: bool,
}

/// Checks the cell count against the face count of the intersection graph.
///
/// A planar graph with `C` components has `n_e - n_v + C` bounded faces; each bounded
/// cell lies in one of them and every other cell reaches the perimeter.
pub fn euler_audit(g: &ArrangementGraph) -> EulerReport {
    let as_i64 = |n: usize| i64::try_from(n).expect("count fits in i64");
    let bound = as_i64(g.n_e) - as_i64(g.n_v) + as_i64(g.components) + as_i64(g.unbounded_cells);
    let inequality_holds = as_i64(g.n_z()) <= bound;
    let four_candidate_checks = (g.m == 4).then(|| (g.n_v <= 8, g.n_z() <= 19));
    let pass = inequality_holds && four_candidate_checks.is_none_or(|(a, b)| a && b);
    EulerReport {
        n_v: g.n_v,
        n_e: g.n_e,
        n_z: g.n_z(),
        components: g.components,
        unbounded_cells: g.unbounded_cells,
        bound,
        inequality_holds,
        four_candidate_checks,
        pass,
    }
}

/// At most one of the three disjoint bisector pairs of a four-candidate embedding meets twice.
pub fn check_prop6(emb: &Embedding2, norm: NormTag) -> Result<bool, ArrangementError> {
    if emb.m() != 4 {
        return Err(ArrangementError::WrongArity(emb.m()));
    }
    require_generic(emb, norm)?;
    let doubles = count_double_pairs(emb, norm)?;
    Ok(doubles <= 1)
}

/// How many of the three disjoint bisector pairs meet in two points.
pub fn count_double_pairs(emb: &Embedding2, norm: NormTag) -> Result<usize, ArrangementError> {
    let p = emb.positions();
    let b = |i: usize, j: usize| crate::geometry::build_bisector(norm, &p[i], &p[j]);
    let mut doubles = 0;
    for ((a, bb), (c, d)) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))] {
        if let IntersectionResult::Two(..) = intersect(&b(a, bb)?, &b(c, d)?)? {
            doubles += 1;
        }
    }
    Ok(doubles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{canonical, recognize_l2_four, CanonicalId};

    fn emb(coords: &[(i64, i64)]) -> Embedding2 {
        Embedding2::from_ints(coords).unwrap()
    }

    fn max_l1_four() -> Embedding2 {
        emb(&[(0, 8), (10, 10), (4, 1), (8, 3)])
    }

    fn nine_vertex() -> Embedding2 {
        emb(&[(4, 1), (1, 6), (6, 8), (8, 2)])
    }

    #[test]
    fn nine_vertex_case() {
        let cs = critical_points(&nine_vertex(), NormTag::L1).unwrap();
        assert_eq!(cs.vertices.len(), 7);
        assert_eq!(cs.count_with_multiplicity(3), 4);
        assert_eq!(cs.count_with_multiplicity(2), 3);
    }

    #[test]
    fn two_candidates_have_no_vertices() {
        let cs = critical_points(&emb(&[(0, 0), (3, 1)]), NormTag::L1).unwrap();
        assert!(cs.vertices.is_empty());
        let g = build_graph(&emb(&[(0, 0), (2, 1)]), NormTag::L2).unwrap();
        assert_eq!((g.n_v, g.n_e, g.unbounded_cells, g.n_z()), (0, 0, 2, 2));
        assert!(euler_audit(&g).pass);
    }

    #[test]
    fn three_candidate_vertex() {
        let cs = critical_points(&emb(&[(3, 3), (8, 6), (6, 2)]), NormTag::L1).unwrap();
        let pairs = &cs.vertices[&Point2::int(5, 5)];
        assert_eq!(pairs.len(), 3);
    }

    #[test]
    fn complete_three_candidate_profiles() {
        for norm in [NormTag::L2, NormTag::L1] {
            let cells = enumerate_cells(&emb(&[(3, 3), (8, 6), (6, 2)]), norm).unwrap();
            assert_eq!(cells.len(), 6, "{norm}");
        }
    }

    #[test]
    fn l1_maximum() {
        let cells = enumerate_cells(&max_l1_four(), NormTag::L1).unwrap();
        assert_eq!(cells_profile(4, &cells), *canonical(CanonicalId::P0));
        for c in &cells {
            assert_eq!(ranking_at(&max_l1_four(), NormTag::L1, &c.witness).unwrap(), c.ranking);
        }
    }

    #[test]
    fn l2_maximum() {
        let cells = enumerate_cells(&emb(&[(1, 5), (4, 2), (6, 8), (9, 3)]), NormTag::L2).unwrap();
        assert_eq!(cells.len(), 18);
        assert!(recognize_l2_four(&cells_profile(4, &cells)).unwrap().euclidean);
    }

    #[test]
    fn graph_counts() {
        let g = build_graph(&nine_vertex(), NormTag::L1).unwrap();
        assert_eq!((g.n_v, g.n_e), (7, 12));
        let report = euler_audit(&g);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.bound, 18);

        let g = build_graph(&max_l1_four(), NormTag::L1).unwrap();
        assert_eq!((g.n_v, g.n_e, g.n_z()), (8, 14, 19));
        let report = euler_audit(&g);
        assert_eq!(report.bound, 19);
        assert!(report.pass);
    }

    #[test]
    fn single_double_pair() {
        assert!(check_prop6(&nine_vertex(), NormTag::L1).unwrap());
        assert_eq!(count_double_pairs(&nine_vertex(), NormTag::L1).unwrap(), 1);
        assert!(check_prop6(&max_l1_four(), NormTag::L1).unwrap());
        assert!(check_prop6(&emb(&[(1, 5), (4, 2), (6, 8), (9, 3)]), NormTag::L2).unwrap());
    }

    #[test]
    fn degenerate_input_rejected() {
        let err = enumerate_cells(&emb(&[(0, 0), (2, 2), (5, 1)]), NormTag::L1).unwrap_err();
        assert!(matches!(err, ArrangementError::DegenerateEmbedding(_)));
    }

    #[test]
    fn single_candidate() {
        let cells = enumerate_cells(&emb(&[(1, 1)]), NormTag::L1).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(!cells[0].bounded);
    }

    #[test]
    fn linf_matches_rotated_l1() {
        let base = [(0, 8), (10, 10), (4, 1), (8, 3)];
        let rotated: Vec<Point2> = base.iter().map(|&(x, y)| crate::geometry::rotate45(&Point2::int(x, y))).collect();
        let cells = enumerate_cells(&Embedding2::new(rotated).unwrap(), NormTag::Linf).unwrap();
        assert_eq!(cells_profile(4, &cells), *canonical(CanonicalId::P0));
    }
}
