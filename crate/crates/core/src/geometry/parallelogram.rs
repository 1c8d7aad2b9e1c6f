use num_traits::Zero;

use super::point::{rat, Point2, Rational};
use super::GeometryError;

/// The parallelogram bounded by the slope +1 and slope -1 diagonals through two points.
///
/// Vertices in cyclic order are `ci, a, cj, b`, where `a` lies on the +1 diagonal through
/// `ci` and the -1 diagonal through `cj`, and `b` the other way round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parallelogram {
    pub ci: Point2,
    pub a: Point2,
    pub cj: Point2,
    pub b: Point2,
}

pub fn parallelogram(ci: &Point2, cj: &Point2) -> Result<Parallelogram, GeometryError> {
    if ci == cj {
        return Err(GeometryError::IdenticalCandidates);
    }
    let dx = &cj.x - &ci.x;
    let dy = &cj.y - &ci.y;
    if (&dx - &dy).is_zero() || (&dx + &dy).is_zero() {
        return Err(GeometryError::DegenerateDiagonal);
    }
    let half = rat(1, 2);
    let a = Point2::new((&ci.x - &ci.y + &cj.x + &cj.y) * &half, (-&ci.x + &ci.y + &cj.x + &cj.y) * &half);
    let b = Point2::new((&ci.x + &ci.y + &cj.x - &cj.y) * &half, (&ci.x + &ci.y - &cj.x + &cj.y) * &half);
    Ok(Parallelogram { ci: ci.clone(), a, cj: cj.clone(), b })
}

fn strictly_between(v: &Rational, e1: &Rational, e2: &Rational) -> bool {
    (e1 < v && v < e2) || (e2 < v && v < e1)
}

impl Parallelogram {
    /// Strict interior test: `x - y` and `x + y` must both lie strictly between their
    /// values at the two defining points.
    pub fn contains(&self, p: &Point2) -> bool {
        let u = |q: &Point2| &q.x - &q.y;
        let v = |q: &Point2| &q.x + &q.y;
        strictly_between(&u(p), &u(&self.ci), &u(&self.cj)) && strictly_between(&v(p), &v(&self.ci), &v(&self.cj))
    }

    pub fn vertices(&self) -> [&Point2; 4] {
        [&self.ci, &self.a, &self.cj, &self.b]
    }
}
