use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::bisector::{build_bisector, classify_bisector_l1, Bisector, BisectorKind, Orientation, Piece};
use super::point::{distance_key, rotate45, unrotate45, NormTag, Point2, Rational};
use super::GeometryError;

/// A collinear overlap of positive length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Overlap {
    Segment { a: Point2, b: Point2 },
    Ray { origin: Point2, dir: Point2 },
    Line { point: Point2, dir: Point2 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionResult {
    Empty,
    One(Point2),
    /// Two distinct points in lexicographic order.
    Two(Point2, Point2),
    Infinite(Overlap),
}

impl IntersectionResult {
    pub fn points(&self) -> Vec<Point2> {
        match self {
            IntersectionResult::Empty | IntersectionResult::Infinite(_) => Vec::new(),
            IntersectionResult::One(p) => vec![p.clone()],
            IntersectionResult::Two(p, q) => vec![p.clone(), q.clone()],
        }
    }

    pub fn count(&self) -> Option<usize> {
        match self {
            IntersectionResult::Infinite(_) => None,
            other => Some(other.points().len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceHit {
    None,
    Point(Point2),
    Overlap(Overlap),
}

type Bound = Option<Rational>;

/// Exact intersection of two straight pieces.
pub fn intersect_pieces(p: &Piece, q: &Piece) -> PieceHit {
    let (o1, d1) = (p.origin(), p.direction());
    let (o2, d2) = (q.origin(), q.direction());
    let w = o2 - o1;
    let cross = d1.cross(&d2);
    if !cross.is_zero() {
        let t = w.cross(&d2) / &cross;
        let s = w.cross(&d1) / &cross;
        return if p.in_range(&t) && q.in_range(&s) { PieceHit::Point(p.at(&t)) } else { PieceHit::None };
    }
    if !w.cross(&d1).is_zero() {
        return PieceHit::None;
    }
    // Collinear: express q's range in p's parameter, t = t0 + k s.
    let norm = d1.dot(&d1);
    let t0 = w.dot(&d1) / &norm;
    let k = d2.dot(&d1) / &norm;
    let (slo, shi) = q.range();
    let map = |s: &Bound| s.as_ref().map(|s| &t0 + &k * s);
    let (qlo, qhi): (Bound, Bound) = if k.is_positive() { (map(&slo), map(&shi)) } else { (map(&shi), map(&slo)) };
    let (plo, phi) = p.range();
    let lo = max_lower(plo, qlo);
    let hi = min_upper(phi, qhi);
    match (&lo, &hi) {
        (Some(l), Some(h)) if l > h => PieceHit::None,
        (Some(l), Some(h)) if l == h => PieceHit::Point(p.at(l)),
        (Some(l), Some(h)) => PieceHit::Overlap(Overlap::Segment { a: p.at(l), b: p.at(h) }),
        (Some(l), None) => PieceHit::Overlap(Overlap::Ray { origin: p.at(l), dir: d1 }),
        (None, Some(h)) => PieceHit::Overlap(Overlap::Ray { origin: p.at(h), dir: -&d1 }),
        (None, None) => PieceHit::Overlap(Overlap::Line { point: o1.clone(), dir: d1 }),
    }
}

fn max_lower(a: Bound, b: Bound) -> Bound {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn min_upper(a: Bound, b: Bound) -> Bound {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Exact intersection of two bisectors built from distinct candidate pairs.
///
/// Quadrant bisectors are rejected; more than two isolated points (possible only when
/// bisectors of different norms are mixed) is reported as an error.
pub fn intersect(b1: &Bisector, b2: &Bisector) -> Result<IntersectionResult, GeometryError> {
    if b1.is_degenerate() || b2.is_degenerate() {
        return Err(GeometryError::DegenerateBisector);
    }
    // Two linf bisectors are intersected in the l1 frame, which keeps pieces axis aligned.
    if let (Bisector::Rotated(i1), Bisector::Rotated(i2)) = (b1, b2) {
        return Ok(match intersect(i1, i2)? {
            IntersectionResult::Empty => IntersectionResult::Empty,
            IntersectionResult::One(p) => IntersectionResult::One(rotate45(&p)),
            IntersectionResult::Two(p, q) => two(rotate45(&p), rotate45(&q)),
            IntersectionResult::Infinite(o) => IntersectionResult::Infinite(rotate_overlap(&o)),
        });
    }
    let mut points = BTreeSet::new();
    for p in b1.pieces() {
        for q in b2.pieces() {
            match intersect_pieces(&p, &q) {
                PieceHit::None => {}
                PieceHit::Point(x) => {
                    points.insert(x);
                }
                PieceHit::Overlap(o) => return Ok(IntersectionResult::Infinite(o)),
            }
        }
    }
    let mut it = points.into_iter();
    Ok(match (it.next(), it.next(), it.next()) {
        (None, _, _) => IntersectionResult::Empty,
        (Some(p), None, _) => IntersectionResult::One(p),
        (Some(p), Some(q), None) => IntersectionResult::Two(p, q),
        (Some(_), Some(_), Some(_)) => return Err(GeometryError::TooManyIntersections),
    })
}

fn two(p: Point2, q: Point2) -> IntersectionResult {
    if p < q {
        IntersectionResult::Two(p, q)
    } else {
        IntersectionResult::Two(q, p)
    }
}

fn rotate_overlap(o: &Overlap) -> Overlap {
    match o {
        Overlap::Segment { a, b } => Overlap::Segment { a: rotate45(a), b: rotate45(b) },
        Overlap::Ray { origin, dir } => Overlap::Ray { origin: rotate45(origin), dir: rotate45(dir) },
        Overlap::Line { point, dir } => Overlap::Line { point: rotate45(point), dir: rotate45(dir) },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TripleIntersection {
    Empty,
    One(Point2),
}

/// The point equidistant from three candidates, if any.
///
/// Under l1 the three bisectors meet exactly when their orientations are mixed; the common
/// point is found by intersecting one vertical and one horizontal bisector and is checked
/// against all three distances.
pub fn triple_intersection(
    c1: &Point2,
    c2: &Point2,
    c3: &Point2,
    norm: NormTag,
) -> Result<TripleIntersection, GeometryError> {
    if c1 == c2 || c1 == c3 || c2 == c3 {
        return Err(GeometryError::IdenticalCandidates);
    }
    match norm {
        NormTag::L2 => Ok(circumcenter(c1, c2, c3).map_or(TripleIntersection::Empty, TripleIntersection::One)),
        NormTag::Linf => {
            let inner = triple_intersection(&unrotate45(c1), &unrotate45(c2), &unrotate45(c3), NormTag::L1)?;
            Ok(match inner {
                TripleIntersection::One(p) => TripleIntersection::One(rotate45(&p)),
                TripleIntersection::Empty => TripleIntersection::Empty,
            })
        }
        NormTag::L1 => {
            let pairs = [(c1, c2), (c1, c3), (c2, c3)];
            let mut vertical = None;
            let mut horizontal = None;
            for (a, b) in pairs {
                let orientation = match classify_bisector_l1(a, b)? {
                    BisectorKind::QuadrantDegenerate => return Err(GeometryError::DegenerateInput),
                    // x = const when the pair shares y, y = const when it shares x.
                    BisectorKind::AxisAligned if a.y == b.y => Orientation::Vertical,
                    BisectorKind::AxisAligned => Orientation::Horizontal,
                    kind => kind.orientation().expect("generic kinds have an orientation"),
                };
                match orientation {
                    Orientation::Vertical => vertical = vertical.or(Some((a, b))),
                    Orientation::Horizontal => horizontal = horizontal.or(Some((a, b))),
                }
            }
            let (Some(v), Some(h)) = (vertical, horizontal) else {
                return Ok(TripleIntersection::Empty);
            };
            let bv = build_bisector(NormTag::L1, v.0, v.1)?;
            let bh = build_bisector(NormTag::L1, h.0, h.1)?;
            let hits = intersect(&bv, &bh)?.points();
            let equidistant = |p: &Point2| {
                let d = distance_key(NormTag::L1, p, c1);
                distance_key(NormTag::L1, p, c2) == d && distance_key(NormTag::L1, p, c3) == d
            };
            Ok(hits.into_iter().find(equidistant).map_or(TripleIntersection::Empty, TripleIntersection::One))
        }
    }
}

fn circumcenter(c1: &Point2, c2: &Point2, c3: &Point2) -> Option<Point2> {
    let b = c2 - c1;
    let c = c3 - c1;
    let det = b.cross(&c) * Rational::from_integer(2.into());
    if det.is_zero() {
        return None;
    }
    let bb = b.dot(&b);
    let cc = c.dot(&c);
    let ux = (&c.y * &bb - &b.y * &cc) / &det;
    let uy = (&b.x * &cc - &c.x * &bb) / &det;
    Some(c1 + &Point2::new(ux, uy))
}
