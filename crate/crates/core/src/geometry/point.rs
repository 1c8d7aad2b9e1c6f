use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::GeometryError;

/// Exact rational scalar used for every coordinate and distance.
pub type Rational = BigRational;

/// Builds the rational `num/den`.
///
/// Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"5.5"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, GeometryError> {
    let text = text.trim();
    let bad = || GeometryError::Parse(text.to_string());
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole_val = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_val = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = whole_val.abs() * &scale + frac_val;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, scale));
    }
    BigInt::from_str(text).map(Rational::from_integer).map_err(|_| bad())
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Lossy conversion used for drawing only.
pub fn to_f64(value: &Rational) -> f64 {
    let num: f64 = value.numer().to_string().parse().unwrap_or(f64::NAN);
    let den: f64 = value.denom().to_string().parse().unwrap_or(f64::NAN);
    num / den
}

/// An exact point of the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    /// Point with integer coordinates.
    pub fn int(x: i64, y: i64) -> Self {
        Point2::new(int(x), int(y))
    }

    /// Point from `(num, den)` pairs.
    pub fn rat(x: (i64, i64), y: (i64, i64)) -> Self {
        Point2::new(rat(x.0, x.1), rat(y.0, y.1))
    }

    pub fn origin() -> Self {
        Point2::int(0, 0)
    }

    /// Parses `"x,y"` where each coordinate is accepted by [`parse_rational`].
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let (x, y) = text.split_once(',').ok_or_else(|| GeometryError::Parse(text.to_string()))?;
        Ok(Point2::new(parse_rational(x)?, parse_rational(y)?))
    }

    pub fn scale(&self, k: &Rational) -> Point2 {
        Point2::new(&self.x * k, &self.y * k)
    }

    pub fn cross(&self, other: &Point2) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Point2) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(&self) -> Point2 {
        Point2::new(-self.y.clone(), self.x.clone())
    }

    pub fn midpoint(&self, other: &Point2) -> Point2 {
        let half = rat(1, 2);
        Point2::new((&self.x + &other.x) * &half, (&self.y + &other.y) * &half)
    }

    pub fn l1_norm(&self) -> Rational {
        self.x.abs() + self.y.abs()
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

impl Add for &Point2 {
    type Output = Point2;
    fn add(self, rhs: &Point2) -> Point2 {
        Point2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &Point2 {
    type Output = Point2;
    fn sub(self, rhs: &Point2) -> Point2 {
        Point2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x.clone(), -self.y.clone())
    }
}

impl Mul<&Rational> for &Point2 {
    type Output = Point2;
    fn mul(self, k: &Rational) -> Point2 {
        self.scale(k)
    }
}

/// The three norms under which preferences are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormTag {
    L1,
    L2,
    Linf,
}

impl NormTag {
    pub const ALL: [NormTag; 3] = [NormTag::L1, NormTag::L2, NormTag::Linf];

    pub fn name(self) -> &'static str {
        match self {
            NormTag::L1 => "l1",
            NormTag::L2 => "l2",
            NormTag::Linf => "linf",
        }
    }
}

impl FromStr for NormTag {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "manhattan" => Ok(NormTag::L1),
            "l2" | "euclidean" => Ok(NormTag::L2),
            "linf" | "l_inf" | "chebyshev" => Ok(NormTag::Linf),
            _ => Err(GeometryError::Parse(s.to_string())),
        }
    }
}

impl fmt::Display for NormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Distance surrogate that orders points exactly like the true distance of `norm`.
///
/// For `L2` this is the squared Euclidean distance, which keeps every comparison rational.
pub fn distance_key(norm: NormTag, p: &Point2, q: &Point2) -> Rational {
    let dx = (&p.x - &q.x).abs();
    let dy = (&p.y - &q.y).abs();
    match norm {
        NormTag::L1 => dx + dy,
        NormTag::L2 => &dx * &dx + &dy * &dy,
        NormTag::Linf => dx.max(dy),
    }
}

/// Which candidate a point prefers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    CloserToFirst,
    CloserToSecond,
    OnBoundary,
}

pub fn side(norm: NormTag, c1: &Point2, c2: &Point2, p: &Point2) -> Result<Side, GeometryError> {
    if c1 == c2 {
        return Err(GeometryError::IdenticalCandidates);
    }
    let diff = distance_key(norm, p, c2) - distance_key(norm, p, c1);
    Ok(if diff.is_positive() {
        Side::CloserToFirst
    } else if diff.is_negative() {
        Side::CloserToSecond
    } else {
        Side::OnBoundary
    })
}

/// The 45 degree map `(x, y) -> (x - y, x + y)` carrying l1 distances onto linf distances.
pub fn rotate45(p: &Point2) -> Point2 {
    Point2::new(&p.x - &p.y, &p.x + &p.y)
}

/// Inverse of [`rotate45`].
pub fn unrotate45(p: &Point2) -> Point2 {
    let half = rat(1, 2);
    Point2::new((&p.x + &p.y) * &half, (&p.y - &p.x) * &half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_keys() {
        let key = distance_key(NormTag::L1, &Point2::rat((11, 2), (8, 1)), &Point2::int(0, 8));
        assert_eq!(key, rat(11, 2));
        let p = Point2::int(3, -7);
        assert_eq!(distance_key(NormTag::L2, &p, &p), int(0));
        assert_eq!(distance_key(NormTag::Linf, &Point2::origin(), &Point2::int(3, -4)), int(4));
        assert_eq!(distance_key(NormTag::L2, &Point2::origin(), &Point2::int(3, -4)), int(25));
    }

    #[test]
    fn side_examples() {
        let s = side(NormTag::L1, &Point2::int(3, 3), &Point2::int(8, 6), &Point2::int(2, 8)).unwrap();
        assert_eq!(s, Side::CloserToFirst);
        for norm in NormTag::ALL {
            let s = side(norm, &Point2::int(0, 0), &Point2::int(2, 0), &Point2::int(1, 5)).unwrap();
            assert_eq!(s, Side::OnBoundary);
        }
        let s = side(NormTag::L1, &Point2::int(0, 8), &Point2::int(10, 10), &Point2::rat((11, 2), (8, 1))).unwrap();
        assert_eq!(s, Side::CloserToFirst);
        assert_eq!(
            side(NormTag::L2, &Point2::int(1, 1), &Point2::int(1, 1), &Point2::origin()),
            Err(GeometryError::IdenticalCandidates)
        );
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotate45(&Point2::int(1, 0)), Point2::int(1, 1));
        assert_eq!(rotate45(&Point2::int(3, 4)), Point2::int(-1, 7));
        assert_eq!(rotate45(&Point2::origin()), Point2::origin());
        let p = Point2::rat((7, 3), (-5, 2));
        assert_eq!(unrotate45(&rotate45(&p)), p);
        let o = Point2::origin();
        assert_eq!(distance_key(NormTag::L1, &p, &o), distance_key(NormTag::Linf, &rotate45(&p), &o));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("5.5").unwrap(), rat(11, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 12 ").unwrap(), int(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(Point2::parse("3,3").unwrap(), Point2::int(3, 3));
        assert!(Point2::parse("3").is_err());
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
    }
}
