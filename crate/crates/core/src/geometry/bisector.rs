use std::fmt;

use num_traits::{One, Signed, Zero};

use super::point::{distance_key, format_rational, int, rat, rotate45, unrotate45, NormTag, Point2, Rational};
use super::GeometryError;

/// Shape class of an l1 bisector.
///
/// The four generic kinds are two parallel half-lines joined by a segment of slope -1 (`Minus`)
/// or +1 (`Plus`). Vertical kinds have `dx > dy`, horizontal kinds `dy > dx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BisectorKind {
    VMinus,
    VPlus,
    HMinus,
    HPlus,
    /// `dx = 0` or `dy = 0`: the bisector is the l2 perpendicular bisector.
    AxisAligned,
    /// `dx = dy > 0`: the bisector contains two closed quadrants.
    QuadrantDegenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Vertical,
    Horizontal,
}

impl BisectorKind {
    pub fn orientation(self) -> Option<Orientation> {
        match self {
            BisectorKind::VMinus | BisectorKind::VPlus => Some(Orientation::Vertical),
            BisectorKind::HMinus | BisectorKind::HPlus => Some(Orientation::Horizontal),
            _ => None,
        }
    }

    pub fn is_generic(self) -> bool {
        self.orientation().is_some()
    }

    pub fn label(self) -> &'static str {
        match self {
            BisectorKind::VMinus => "V-",
            BisectorKind::VPlus => "V+",
            BisectorKind::HMinus => "H-",
            BisectorKind::HPlus => "H+",
            BisectorKind::AxisAligned => "axis-aligned",
            BisectorKind::QuadrantDegenerate => "quadrant-degenerate",
        }
    }
}

impl fmt::Display for BisectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies the l1 bisector of two distinct points.
pub fn classify_bisector_l1(c1: &Point2, c2: &Point2) -> Result<BisectorKind, GeometryError> {
    if c1 == c2 {
        return Err(GeometryError::IdenticalCandidates);
    }
    let dx = &c2.x - &c1.x;
    let dy = &c2.y - &c1.y;
    if dx.is_zero() || dy.is_zero() {
        return Ok(BisectorKind::AxisAligned);
    }
    let (adx, ady) = (dx.abs(), dy.abs());
    if adx == ady {
        return Ok(BisectorKind::QuadrantDegenerate);
    }
    // Orders agree when the point further right is also higher.
    let agree = dx.is_positive() == dy.is_positive();
    Ok(match (adx > ady, agree) {
        (true, true) => BisectorKind::VMinus,
        (true, false) => BisectorKind::VPlus,
        (false, true) => BisectorKind::HMinus,
        (false, false) => BisectorKind::HPlus,
    })
}

/// A straight piece of a bisector: `origin + t * dir` for `t` in the piece's range.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    Line { point: Point2, dir: Point2 },
    Ray { origin: Point2, dir: Point2 },
    Segment { a: Point2, b: Point2 },
}

impl Piece {
    pub fn origin(&self) -> &Point2 {
        match self {
            Piece::Line { point, .. } => point,
            Piece::Ray { origin, .. } => origin,
            Piece::Segment { a, .. } => a,
        }
    }

    pub fn direction(&self) -> Point2 {
        match self {
            Piece::Line { dir, .. } | Piece::Ray { dir, .. } => dir.clone(),
            Piece::Segment { a, b } => b - a,
        }
    }

    /// Parameter range as `(lower, upper)`; `None` is unbounded.
    pub fn range(&self) -> (Option<Rational>, Option<Rational>) {
        match self {
            Piece::Line { .. } => (None, None),
            Piece::Ray { .. } => (Some(Rational::zero()), None),
            Piece::Segment { .. } => (Some(Rational::zero()), Some(Rational::one())),
        }
    }

    pub fn at(&self, t: &Rational) -> Point2 {
        self.origin() + &(&self.direction() * t)
    }

    /// Parameter of `p` if `p` lies on the supporting line, regardless of the range.
    pub fn param_of(&self, p: &Point2) -> Option<Rational> {
        let d = self.direction();
        let w = p - self.origin();
        if !w.cross(&d).is_zero() {
            return None;
        }
        Some(w.dot(&d) / d.dot(&d))
    }

    pub fn in_range(&self, t: &Rational) -> bool {
        let (lo, hi) = self.range();
        lo.is_none_or(|lo| *t >= lo) && hi.is_none_or(|hi| *t <= hi)
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.param_of(p).is_some_and(|t| self.in_range(&t))
    }

    fn map(&self, f: impl Fn(&Point2) -> Point2) -> Piece {
        // Linear maps fix the origin, so directions transform like points.
        match self {
            Piece::Line { point, dir } => Piece::Line { point: f(point), dir: f(dir) },
            Piece::Ray { origin, dir } => Piece::Ray { origin: f(origin), dir: f(dir) },
            Piece::Segment { a, b } => Piece::Segment { a: f(a), b: f(b) },
        }
    }
}

/// The locus of points equidistant from two candidates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bisector {
    /// `a x + b y = c`, normalised so the first non-zero of `(a, b)` is 1.
    Line { a: Rational, b: Rational, c: Rational },
    /// Generic l1 bisector. Vertical kinds carry half-lines going down from `seg_lo` and up
    /// from `seg_hi`; horizontal kinds carry half-lines going left from `seg_lo` and right
    /// from `seg_hi`.
    PolyL1 { kind: BisectorKind, seg_lo: Point2, seg_hi: Point2 },
    /// `dx = dy`: the two free corners of the square spanned by the candidates, `m1` being
    /// the one with the smaller x.
    Quadrant { m1: Point2, m2: Point2 },
    /// An linf bisector, stored as the l1 bisector of the pre-images under the 45 degree map.
    Rotated(Box<Bisector>),
}

fn line_through(a: Rational, b: Rational, c: Rational) -> Bisector {
    let lead = if a.is_zero() { b.clone() } else { a.clone() };
    Bisector::Line { a: a / &lead, b: b / &lead, c: c / &lead }
}

fn perpendicular_bisector(c1: &Point2, c2: &Point2) -> Bisector {
    let a = (&c2.x - &c1.x) * int(2);
    let b = (&c2.y - &c1.y) * int(2);
    let c = &c2.x * &c2.x + &c2.y * &c2.y - &c1.x * &c1.x - &c1.y * &c1.y;
    line_through(a, b, c)
}

fn poly_l1(kind: BisectorKind, c1: &Point2, c2: &Point2) -> Bisector {
    let half = rat(1, 2);
    match kind.orientation() {
        Some(Orientation::Vertical) => {
            let (c1, c2) = if c1.x < c2.x { (c1, c2) } else { (c2, c1) };
            // With x1 < x2, on the segment 2x = x1 + x2 + |y - y2| - |y - y1|.
            let x_at = |y: &Rational| (&c1.x + &c2.x + (y - &c2.y).abs() - (y - &c1.y).abs()) * &half;
            let (ylo, yhi) = if c1.y < c2.y { (&c1.y, &c2.y) } else { (&c2.y, &c1.y) };
            Bisector::PolyL1 {
                kind,
                seg_lo: Point2::new(x_at(ylo), ylo.clone()),
                seg_hi: Point2::new(x_at(yhi), yhi.clone()),
            }
        }
        Some(Orientation::Horizontal) => {
            let (c1, c2) = if c1.y < c2.y { (c1, c2) } else { (c2, c1) };
            let y_at = |x: &Rational| (&c1.y + &c2.y + (x - &c2.x).abs() - (x - &c1.x).abs()) * &half;
            let (xlo, xhi) = if c1.x < c2.x { (&c1.x, &c2.x) } else { (&c2.x, &c1.x) };
            Bisector::PolyL1 {
                kind,
                seg_lo: Point2::new(xlo.clone(), y_at(xlo)),
                seg_hi: Point2::new(xhi.clone(), y_at(xhi)),
            }
        }
        None => unreachable!("poly_l1 called with a degenerate kind"),
    }
}

/// Builds the bisector of two distinct candidates under `norm`.
///
/// A `Quadrant` result means the pair is degenerate; callers that need a generic
/// arrangement must perturb first.
pub fn build_bisector(norm: NormTag, c1: &Point2, c2: &Point2) -> Result<Bisector, GeometryError> {
    if c1 == c2 {
        return Err(GeometryError::IdenticalCandidates);
    }
    Ok(match norm {
        NormTag::L2 => perpendicular_bisector(c1, c2),
        NormTag::L1 => match classify_bisector_l1(c1, c2)? {
            BisectorKind::AxisAligned => perpendicular_bisector(c1, c2),
            BisectorKind::QuadrantDegenerate => {
                let (p, q) = (Point2::new(c1.x.clone(), c2.y.clone()), Point2::new(c2.x.clone(), c1.y.clone()));
                let (m1, m2) = if p.x < q.x { (p, q) } else { (q, p) };
                Bisector::Quadrant { m1, m2 }
            }
            kind => poly_l1(kind, c1, c2),
        },
        NormTag::Linf => {
            let inner = build_bisector(NormTag::L1, &unrotate45(c1), &unrotate45(c2))?;
            Bisector::Rotated(Box::new(inner))
        }
    })
}

impl Bisector {
    /// Shape class; for linf bisectors this is the class in the rotated frame.
    pub fn kind(&self) -> BisectorKind {
        match self {
            Bisector::Line { .. } => BisectorKind::AxisAligned,
            Bisector::PolyL1 { kind, .. } => *kind,
            Bisector::Quadrant { .. } => BisectorKind::QuadrantDegenerate,
            Bisector::Rotated(inner) => inner.kind(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        match self {
            Bisector::Quadrant { .. } => true,
            Bisector::Rotated(inner) => inner.is_degenerate(),
            _ => false,
        }
    }

    /// The one-dimensional pieces of the bisector.
    ///
    /// Empty for quadrant bisectors, whose two-dimensional parts cannot be listed this way.
    pub fn pieces(&self) -> Vec<Piece> {
        match self {
            Bisector::Line { a, b, c } => {
                let point = if a.is_zero() {
                    Point2::new(Rational::zero(), c / b)
                } else {
                    Point2::new(c / a, Rational::zero())
                };
                vec![Piece::Line { point, dir: Point2::new(-b.clone(), a.clone()) }]
            }
            Bisector::PolyL1 { kind, seg_lo, seg_hi } => {
                let (down, up) = match kind.orientation() {
                    Some(Orientation::Vertical) => (Point2::int(0, -1), Point2::int(0, 1)),
                    _ => (Point2::int(-1, 0), Point2::int(1, 0)),
                };
                vec![
                    Piece::Ray { origin: seg_lo.clone(), dir: down },
                    Piece::Segment { a: seg_lo.clone(), b: seg_hi.clone() },
                    Piece::Ray { origin: seg_hi.clone(), dir: up },
                ]
            }
            Bisector::Quadrant { .. } => Vec::new(),
            Bisector::Rotated(inner) => inner.pieces().iter().map(|p| p.map(rotate45)).collect(),
        }
    }

    /// Segment endpoints where the bisector changes direction.
    pub fn breakpoints(&self) -> Vec<Point2> {
        match self {
            Bisector::Line { .. } => Vec::new(),
            Bisector::PolyL1 { seg_lo, seg_hi, .. } => vec![seg_lo.clone(), seg_hi.clone()],
            Bisector::Quadrant { m1, m2 } => vec![m1.clone(), m2.clone()],
            Bisector::Rotated(inner) => inner.breakpoints().iter().map(rotate45).collect(),
        }
    }

    /// Human-readable summary such as `x=1` or `V- [7,3]-[4,6]`.
    pub fn describe(&self) -> String {
        match self {
            Bisector::Line { a, b, c } => {
                let term = |k: &Rational, v: &str| {
                    if k.is_one() {
                        v.to_string()
                    } else {
                        format!("{}{}", format_rational(k), v)
                    }
                };
                match (a.is_zero(), b.is_zero()) {
                    (false, true) => format!("{}={}", term(a, "x"), format_rational(c)),
                    (true, false) => format!("{}={}", term(b, "y"), format_rational(c)),
                    _ => {
                        let sign = if b.is_negative() { "-" } else { "+" };
                        format!("{}{}{}={}", term(a, "x"), sign, term(&b.abs(), "y"), format_rational(c))
                    }
                }
            }
            Bisector::PolyL1 { kind, seg_lo, seg_hi } => format!("{kind} {seg_lo}-{seg_hi}"),
            Bisector::Quadrant { m1, m2 } => format!("quadrant-degenerate {m1}-{m2}"),
            Bisector::Rotated(inner) => format!("rotated[{}]", inner.describe()),
        }
    }
}

fn in_quadrant(corner: &Point2, other: &Point2, p: &Point2) -> bool {
    // The closed quadrant at `corner` pointing away from `other` on both axes.
    let x_ok = if corner.x < other.x { p.x <= corner.x } else { p.x >= corner.x };
    let y_ok = if corner.y < other.y { p.y <= corner.y } else { p.y >= corner.y };
    x_ok && y_ok
}

/// Exact membership of `p` in the bisector, tested piece by piece.
pub fn on_bisector(b: &Bisector, p: &Point2) -> bool {
    match b {
        Bisector::Quadrant { m1, m2 } => {
            let segment = Piece::Segment { a: m1.clone(), b: m2.clone() };
            segment.contains(p) || in_quadrant(m1, m2, p) || in_quadrant(m2, m1, p)
        }
        Bisector::Rotated(inner) => on_bisector(inner, &unrotate45(p)),
        _ => b.pieces().iter().any(|piece| piece.contains(p)),
    }
}

/// Distance shared by both candidates at the segment endpoints, `(dx + dy) / 2`.
pub fn endpoint_radius(c1: &Point2, c2: &Point2) -> Rational {
    distance_key(NormTag::L1, c1, c2) * rat(1, 2)
}
