//! Exact bisector geometry in the plane under the l1, l2 and linf norms.
//!
//! Every coordinate is a [`Rational`]; l2 comparisons use squared distances, and linf
//! bisectors are l1 bisectors carried through the map `(x, y) -> (x - y, x + y)`.

mod bisector;
mod degeneracy;
mod intersect;
mod parallelogram;
mod point;

pub use bisector::{
    build_bisector, classify_bisector_l1, endpoint_radius, on_bisector, Bisector, BisectorKind, Orientation, Piece,
};
pub use degeneracy::{
    all_bisectors, detect_degeneracies, pairwise_intersections, perturb_generic, DegeneracyReport, LabeledBisector,
    Pair,
};
pub use intersect::{
    intersect, intersect_pieces, triple_intersection, IntersectionResult, Overlap, PieceHit, TripleIntersection,
};
pub use parallelogram::{parallelogram, Parallelogram};
pub use point::{
    distance_key, format_rational, int, parse_rational, rat, rotate45, side, to_f64, unrotate45, NormTag, Point2,
    Rational, Side,
};

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("the two candidates occupy the same position")]
    IdenticalCandidates,
    #[error("two candidates share a position")]
    DuplicateCandidates,
    #[error("a candidate pair has a degenerate l1 bisector (dx = dy, dx = 0 or dy = 0)")]
    DegenerateInput,
    #[error("quadrant bisectors cannot be intersected; perturb the embedding first")]
    DegenerateBisector,
    #[error("the two points lie on a common diagonal")]
    DegenerateDiagonal,
    #[error("bisectors meet in more than two isolated points")]
    TooManyIntersections,
    #[error("a voter is equidistant from every candidate pair")]
    NoStrictGap,
    #[error("perturbation made no progress")]
    PerturbationStalled,
    #[error("cannot parse `{0}`")]
    Parse(String),
}
