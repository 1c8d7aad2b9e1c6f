//! JSON documents for profiles and embeddings. Candidate indices are 0-based; coordinates
//! are exact rationals written as integers or `"p/q"` strings.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use prefgeom::constructions::{EmbeddingD, PointD};
use prefgeom::geometry::{format_rational, parse_rational, Point2, Rational};
use prefgeom::profiles::{Embedding2, Profile, Ranking};

use crate::CliError;

/// One exact coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Int(i64),
    Text(String),
}

impl Coord {
    pub fn from_rational(r: &Rational) -> Coord {
        match r.is_integer().then(|| r.to_integer().to_i64()).flatten() {
            Some(n) => Coord::Int(n),
            None => Coord::Text(format_rational(r)),
        }
    }

    pub fn to_rational(&self) -> Result<Rational, CliError> {
        match self {
            Coord::Int(n) => Ok(Rational::from_integer((*n).into())),
            Coord::Text(s) => parse_rational(s).map_err(|e| CliError::Parse(e.to_string())),
        }
    }
}

pub fn point_coords(p: &Point2) -> Vec<Coord> {
    vec![Coord::from_rational(&p.x), Coord::from_rational(&p.y)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub m: usize,
    pub rankings: Vec<Vec<usize>>,
}

impl ProfileDocument {
    pub fn from_profile(p: &Profile) -> Self {
        ProfileDocument { m: p.m(), rankings: p.rankings().map(|r| r.order().to_vec()).collect() }
    }

    pub fn to_profile(&self) -> Result<Profile, CliError> {
        let rankings = self
            .rankings
            .iter()
            .map(|r| {
                if r.len() != self.m {
                    return Err(CliError::Parse(format!("ranking {r:?} does not cover {} candidates", self.m)));
                }
                Ranking::new(r.clone()).map_err(|e| CliError::Parse(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Profile::new(self.m, rankings).map_err(|e| CliError::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingDocument {
    pub dimension: usize,
    pub positions: Vec<Vec<Coord>>,
    /// Optional voter positions, kept exactly like candidate positions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voters: Option<Vec<Vec<Coord>>>,
}

fn parse_points(dimension: usize, rows: &[Vec<Coord>]) -> Result<Vec<Vec<Rational>>, CliError> {
    rows.iter()
        .map(|row| {
            if row.len() != dimension {
                return Err(CliError::Parse(format!("expected {dimension} coordinates, got {}", row.len())));
            }
            row.iter().map(Coord::to_rational).collect()
        })
        .collect()
}

fn to_point2(coords: Vec<Rational>) -> Point2 {
    let mut it = coords.into_iter();
    Point2::new(it.next().expect("two coordinates"), it.next().expect("two coordinates"))
}

impl EmbeddingDocument {
    pub fn from_points(positions: &[Point2], voters: Option<&[Point2]>) -> Self {
        EmbeddingDocument {
            dimension: 2,
            positions: positions.iter().map(point_coords).collect(),
            voters: voters.map(|vs| vs.iter().map(point_coords).collect()),
        }
    }

    pub fn from_embedding_d(emb: &EmbeddingD) -> Self {
        let rows = |pts: &[PointD]| -> Vec<Vec<Coord>> {
            pts.iter().map(|p| p.coords.iter().map(Coord::from_rational).collect()).collect()
        };
        EmbeddingDocument { dimension: emb.d, positions: rows(&emb.candidates), voters: Some(rows(&emb.voters)) }
    }

    /// Candidate and voter points of a planar document.
    pub fn planar(&self) -> Result<(Embedding2, Vec<Point2>), CliError> {
        if self.dimension != 2 {
            return Err(CliError::Parse(format!("expected a planar embedding, got dimension {}", self.dimension)));
        }
        let positions: Vec<Point2> = parse_points(2, &self.positions)?.into_iter().map(to_point2).collect();
        let voters: Vec<Point2> = match &self.voters {
            Some(rows) => parse_points(2, rows)?.into_iter().map(to_point2).collect(),
            None => Vec::new(),
        };
        let emb = Embedding2::new(positions).map_err(|e| match e {
            prefgeom::profiles::ProfileError::DuplicateCandidates => CliError::IdenticalCandidates,
            other => CliError::Parse(other.to_string()),
        })?;
        Ok((emb, voters))
    }

    pub fn embedding_d(&self) -> Result<EmbeddingD, CliError> {
        let to_d = |rows: Vec<Vec<Rational>>| rows.into_iter().map(PointD::new).collect::<Vec<_>>();
        let candidates = to_d(parse_points(self.dimension, &self.positions)?);
        let voters = match &self.voters {
            Some(rows) => to_d(parse_points(self.dimension, rows)?),
            None => Vec::new(),
        };
        Ok(EmbeddingD { d: self.dimension, candidates, voters })
    }
}
