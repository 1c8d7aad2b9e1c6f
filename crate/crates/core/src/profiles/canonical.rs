use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use super::{Profile, Ranking};

/// The four maximal profiles on four candidates: `P0` is the 19-ranking l1 profile,
/// `P1`..`P3` the three 18-ranking l2 profiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonicalId {
    P0,
    P1,
    P2,
    P3,
}

impl CanonicalId {
    pub const ALL: [CanonicalId; 4] = [CanonicalId::P0, CanonicalId::P1, CanonicalId::P2, CanonicalId::P3];
    pub const L2: [CanonicalId; 3] = [CanonicalId::P1, CanonicalId::P2, CanonicalId::P3];

    pub fn name(self) -> &'static str {
        match self {
            CanonicalId::P0 => "P0",
            CanonicalId::P1 => "P1",
            CanonicalId::P2 => "P2",
            CanonicalId::P3 => "P3",
        }
    }
}

impl fmt::Display for CanonicalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CanonicalId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "p0" => Ok(CanonicalId::P0),
            "p1" => Ok(CanonicalId::P1),
            "p2" => Ok(CanonicalId::P2),
            "p3" => Ok(CanonicalId::P3),
            _ => Err(format!("unknown profile `{s}` (expected p0, p1, p2 or p3)")),
        }
    }
}

// Column matrices, one string per rank position; column k is the k-th ranking (1-based labels).
const P0_ROWS: [&str; 4] = ["1111112222333444444", "2233441144144112233", "3424233413412231312", "4342324331221323121"];
const P1_ROWS: [&str; 4] = ["111222222333444444", "224113344224112233", "342341413142231312", "433434131411323121"];
const P2_ROWS: [&str; 4] = ["111111223333334444", "223344131122441133", "342423312414122312", "434232444241213221"];
const P3_ROWS: [&str; 4] = ["111122222233334444", "223411334412241223", "342234141321422132", "434343413144113311"];

fn from_columns(rows: &[&str; 4]) -> Profile {
    let digits: Vec<Vec<usize>> = rows.iter().map(|row| row.bytes().map(|b| usize::from(b - b'0')).collect()).collect();
    let columns = digits[0].len();
    let rankings = (0..columns).map(|k| {
        let labels: Vec<usize> = digits.iter().map(|row| row[k]).collect();
        Ranking::from_one_based(&labels).expect("canonical column is a permutation")
    });
    Profile::new(4, rankings).expect("canonical rankings have four candidates")
}

/// The verbatim canonical profile.
pub fn canonical(id: CanonicalId) -> &'static Profile {
    static CELLS: [OnceLock<Profile>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let (cell, rows) = match id {
        CanonicalId::P0 => (&CELLS[0], &P0_ROWS),
        CanonicalId::P1 => (&CELLS[1], &P1_ROWS),
        CanonicalId::P2 => (&CELLS[2], &P2_ROWS),
        CanonicalId::P3 => (&CELLS[3], &P3_ROWS),
    };
    cell.get_or_init(|| from_columns(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn sizes() {
        assert_eq!(canonical(CanonicalId::P0).len(), 19);
        for id in CanonicalId::L2 {
            assert_eq!(canonical(id).len(), 18, "{id}");
        }
    }

    #[test]
    fn first_columns() {
        for id in CanonicalId::ALL {
            assert_eq!(canonical(id).rankings().next(), Some(&Ranking::identity(4)), "{id}");
        }
    }

    #[test]
    fn first_place_census() {
        assert_eq!(canonical(CanonicalId::P1).first_place_census(), vec![3, 6, 3, 6]);
        assert_eq!(canonical(CanonicalId::P2).first_place_census(), vec![6, 2, 6, 4]);
    }

    #[test]
    fn p0_last_row() {
        let last: Vec<usize> = P0_ROWS[3].bytes().map(|b| usize::from(b - b'0')).collect();
        assert_eq!(last, vec![4, 3, 4, 2, 3, 2, 4, 3, 3, 1, 2, 2, 1, 3, 2, 3, 1, 2, 1]);
    }

    #[test]
    fn p1_is_p2_reversed() {
        let reversed: BTreeSet<Ranking> = canonical(CanonicalId::P2).rankings().map(Ranking::reversed).collect();
        let p1: BTreeSet<Ranking> = canonical(CanonicalId::P1).rankings().cloned().collect();
        assert_eq!(reversed, p1);
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("p2".parse::<CanonicalId>(), Ok(CanonicalId::P2));
        assert!("p4".parse::<CanonicalId>().is_err());
    }
}
