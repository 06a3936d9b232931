//! The twelve homogeneous families and their quadrant rule tables.
//!
//! Families 0..=5 are proper: each is assembled from the recursively built
//! original Hilbert curve (family 0). Families 6..=11 are improper: they are
//! assembled from a family-5 block and reverse at least one quadrant.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Dihedral, QuadrantRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Family(u8);

impl Family {
    pub const COUNT: usize = 12;
    pub const HILBERT: Family = Family(0);
    pub const MOORE: Family = Family(1);
    /// The building block of the improper families.
    pub const IMPROPER_BLOCK: Family = Family(5);

    pub fn new(k: u32) -> Result<Self> {
        if k < Self::COUNT as u32 {
            Ok(Family(k as u8))
        } else {
            Err(Error::FamilyOutOfRange(k))
        }
    }

    pub fn all() -> impl Iterator<Item = Family> + Clone {
        (0..Self::COUNT as u8).map(Family)
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    pub fn is_proper(self) -> bool {
        self.0 <= 5
    }

    /// The family whose order-(n-1) curve is mapped into the quadrants.
    pub fn building_block(self) -> Family {
        if self.is_proper() {
            Self::HILBERT
        } else {
            Self::IMPROPER_BLOCK
        }
    }
}

impl TryFrom<u32> for Family {
    type Error = Error;

    fn try_from(k: u32) -> Result<Self> {
        Family::new(k)
    }
}

impl From<Family> for u32 {
    fn from(f: Family) -> u32 {
        u32::from(f.0)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub rules: [QuadrantRule; 4],
}

impl FamilySpec {
    pub fn proper(&self) -> bool {
        self.family.is_proper()
    }

    /// Checks the structural invariants: rule `i` lands in quadrant `i`,
    /// and only improper families reverse quadrants.
    pub fn validate(&self) -> Result<()> {
        for (i, rule) in self.rules.iter().enumerate() {
            match rule.target_quadrant() {
                Some(q) if q == i => {}
                Some(q) => {
                    return Err(Error::InvalidRule {
                        quadrant: i,
                        reason: format!("maps into quadrant {q}"),
                    })
                }
                None => {
                    return Err(Error::InvalidRule {
                        quadrant: i,
                        reason: "image is not a quadrant".into(),
                    })
                }
            }
        }
        let any_reversed = self.rules.iter().any(|r| r.reversed);
        if self.proper() == any_reversed {
            return Err(Error::InvalidRule {
                quadrant: 0,
                reason: format!(
                    "family {} is {} but reversal flags say otherwise",
                    self.family,
                    if self.proper() { "proper" } else { "improper" }
                ),
            });
        }
        Ok(())
    }
}

use Dihedral as D;

const fn q(m: Dihedral, t: [u8; 2]) -> QuadrantRule {
    QuadrantRule::new(m, t)
}

const fn qr(m: Dihedral, t: [u8; 2]) -> QuadrantRule {
    QuadrantRule::reversed(m, t)
}

const fn spec(k: u8, rules: [QuadrantRule; 4]) -> FamilySpec {
    FamilySpec {
        family: Family(k),
        rules,
    }
}

/// Quadrant rule tables, transcribed matrix by matrix.
pub const STANDARD_SPECS: [FamilySpec; 12] = [
    spec(
        0,
        [
            q(D::TRANSPOSE, [0, 0]),
            q(D::IDENTITY, [0, 1]),
            q(D::IDENTITY, [1, 1]),
            q(D::ANTI_TRANSPOSE, [2, 1]),
        ],
    ),
    spec(
        1,
        [
            q(D::ROT90, [1, 0]),
            q(D::ROT90, [1, 1]),
            q(D::ROT270, [1, 2]),
            q(D::ROT270, [1, 1]),
        ],
    ),
    spec(
        2,
        [
            q(D::ROT180, [1, 1]),
            q(D::IDENTITY, [0, 1]),
            q(D::IDENTITY, [1, 1]),
            q(D::ROT180, [2, 1]),
        ],
    ),
    spec(
        3,
        [
            q(D::MIRROR_HORIZONTAL, [0, 1]),
            q(D::ROT90, [1, 1]),
            q(D::ROT270, [1, 2]),
            q(D::MIRROR_HORIZONTAL, [1, 1]),
        ],
    ),
    spec(
        4,
        [
            q(D::TRANSPOSE, [0, 0]),
            q(D::IDENTITY, [0, 1]),
            q(D::IDENTITY, [1, 1]),
            q(D::ROT180, [2, 1]),
        ],
    ),
    spec(
        5,
        [
            q(D::MIRROR_HORIZONTAL, [0, 1]),
            q(D::ROT90, [1, 1]),
            q(D::ROT270, [1, 2]),
            q(D::ROT270, [1, 1]),
        ],
    ),
    spec(
        6,
        [
            q(D::ROT180, [1, 1]),
            qr(D::MIRROR_VERTICAL, [1, 1]),
            q(D::IDENTITY, [1, 1]),
            qr(D::MIRROR_HORIZONTAL, [1, 1]),
        ],
    ),
    spec(
        7,
        [
            q(D::ROT180, [1, 1]),
            qr(D::MIRROR_VERTICAL, [1, 1]),
            q(D::IDENTITY, [1, 1]),
            q(D::ANTI_TRANSPOSE, [2, 1]),
        ],
    ),
    spec(
        8,
        [
            qr(D::ROT270, [0, 1]),
            qr(D::MIRROR_VERTICAL, [1, 1]),
            q(D::IDENTITY, [1, 1]),
            q(D::ANTI_TRANSPOSE, [2, 1]),
        ],
    ),
    spec(
        9,
        [
            qr(D::ANTI_TRANSPOSE, [1, 1]),
            q(D::ROT90, [1, 1]),
            qr(D::TRANSPOSE, [1, 1]),
            q(D::ROT270, [1, 1]),
        ],
    ),
    spec(
        10,
        [
            q(D::MIRROR_HORIZONTAL, [0, 1]),
            q(D::ROT90, [1, 1]),
            qr(D::TRANSPOSE, [1, 1]),
            qr(D::ROT180, [2, 1]),
        ],
    ),
    spec(
        11,
        [
            q(D::MIRROR_HORIZONTAL, [0, 1]),
            q(D::ROT90, [1, 1]),
            qr(D::TRANSPOSE, [1, 1]),
            q(D::ROT270, [1, 1]),
        ],
    ),
];

/// A complete set of twelve family specs. The standard table is the default;
/// alternative tables can be loaded to check them with the same machinery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<FamilySpec>", into = "Vec<FamilySpec>")]
pub struct FamilyTable {
    specs: Vec<FamilySpec>,
}

impl Default for FamilyTable {
    fn default() -> Self {
        Self::standard()
    }
}

impl FamilyTable {
    pub fn standard() -> Self {
        FamilyTable {
            specs: STANDARD_SPECS.to_vec(),
        }
    }

    /// Shared instance of the standard table.
    pub fn standard_ref() -> &'static FamilyTable {
        static TABLE: OnceLock<FamilyTable> = OnceLock::new();
        TABLE.get_or_init(FamilyTable::standard)
    }

    /// Builds a table from twelve specs listed in family order. Only the
    /// shape is checked here; per-spec invariants are checked by
    /// [`FamilySpec::validate`] when the table is used.
    pub fn from_specs(specs: Vec<FamilySpec>) -> Result<Self> {
        if specs.len() != Family::COUNT {
            return Err(Error::InvalidRule {
                quadrant: 0,
                reason: format!(
                    "expected {} family specs, got {}",
                    Family::COUNT,
                    specs.len()
                ),
            });
        }
        for (i, s) in specs.iter().enumerate() {
            if s.family.index() != i {
                return Err(Error::InvalidRule {
                    quadrant: 0,
                    reason: format!("spec at position {i} is for family {}", s.family),
                });
            }
        }
        Ok(FamilyTable { specs })
    }

    pub fn spec(&self, family: Family) -> &FamilySpec {
        &self.specs[family.index()]
    }

    pub fn specs(&self) -> &[FamilySpec] {
        &self.specs
    }

    pub fn spec_mut(&mut self, family: Family) -> &mut FamilySpec {
        &mut self.specs[family.index()]
    }
}

impl TryFrom<Vec<FamilySpec>> for FamilyTable {
    type Error = Error;

    fn try_from(specs: Vec<FamilySpec>) -> Result<Self> {
        FamilyTable::from_specs(specs)
    }
}

impl From<FamilyTable> for Vec<FamilySpec> {
    fn from(t: FamilyTable) -> Self {
        t.specs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_range() {
        assert!(Family::new(11).is_ok());
        assert_eq!(Family::new(12), Err(Error::FamilyOutOfRange(12)));
        assert_eq!(Family::all().count(), 12);
        assert_eq!(
            Family::new(7).unwrap().building_block(),
            Family::IMPROPER_BLOCK
        );
        assert_eq!(Family::new(3).unwrap().building_block(), Family::HILBERT);
    }

    #[test]
    fn standard_specs_are_well_formed() {
        for s in &STANDARD_SPECS {
            s.validate().unwrap();
            for r in &s.rules {
                assert_eq!(r.matrix.determinant().abs(), 1);
            }
        }
    }

    // Each row: matrix entries row-major, translation, reversal flag, read
    // off the displayed tables independently of the named constants above.
    #[rustfmt::skip]
    type RawRule = ([i8; 4], [u8; 2], bool);
    const FIXTURE: [[RawRule; 4]; 12] = [
        [
            ([0, 1, 1, 0], [0, 0], false),
            ([1, 0, 0, 1], [0, 1], false),
            ([1, 0, 0, 1], [1, 1], false),
            ([0, -1, -1, 0], [2, 1], false),
        ],
        [
            ([0, -1, 1, 0], [1, 0], false),
            ([0, -1, 1, 0], [1, 1], false),
            ([0, 1, -1, 0], [1, 2], false),
            ([0, 1, -1, 0], [1, 1], false),
        ],
        [
            ([-1, 0, 0, -1], [1, 1], false),
            ([1, 0, 0, 1], [0, 1], false),
            ([1, 0, 0, 1], [1, 1], false),
            ([-1, 0, 0, -1], [2, 1], false),
        ],
        [
            ([1, 0, 0, -1], [0, 1], false),
            ([0, -1, 1, 0], [1, 1], false),
            ([0, 1, -1, 0], [1, 2], false),
            ([1, 0, 0, -1], [1, 1], false),
        ],
        [
            ([0, 1, 1, 0], [0, 0], false),
            ([1, 0, 0, 1], [0, 1], false),
            ([1, 0, 0, 1], [1, 1], false),
            ([-1, 0, 0, -1], [2, 1], false),
        ],
        [
            ([1, 0, 0, -1], [0, 1], false),
            ([0, -1, 1, 0], [1, 1], false),
            ([0, 1, -1, 0], [1, 2], false),
            ([0, 1, -1, 0], [1, 1], false),
        ],
        [
            ([-1, 0, 0, -1], [1, 1], false),
            ([-1, 0, 0, 1], [1, 1], true),
            ([1, 0, 0, 1], [1, 1], false),
            ([1, 0, 0, -1], [1, 1], true),
        ],
        [
            ([-1, 0, 0, -1], [1, 1], false),
            ([-1, 0, 0, 1], [1, 1], true),
            ([1, 0, 0, 1], [1, 1], false),
            ([0, -1, -1, 0], [2, 1], false),
        ],
        [
            ([0, 1, -1, 0], [0, 1], true),
            ([-1, 0, 0, 1], [1, 1], true),
            ([1, 0, 0, 1], [1, 1], false),
            ([0, -1, -1, 0], [2, 1], false),
        ],
        [
            ([0, -1, -1, 0], [1, 1], true),
            ([0, -1, 1, 0], [1, 1], false),
            ([0, 1, 1, 0], [1, 1], true),
            ([0, 1, -1, 0], [1, 1], false),
        ],
        [
            ([1, 0, 0, -1], [0, 1], false),
            ([0, -1, 1, 0], [1, 1], false),
            ([0, 1, 1, 0], [1, 1], true),
            ([-1, 0, 0, -1], [2, 1], true),
        ],
        [
            ([1, 0, 0, -1], [0, 1], false),
            ([0, -1, 1, 0], [1, 1], false),
            ([0, 1, 1, 0], [1, 1], true),
            ([0, 1, -1, 0], [1, 1], false),
        ],
    ];

    #[test]
    fn tables_match_transcription_fixture() {
        for (k, rows) in FIXTURE.iter().enumerate() {
            let s = &STANDARD_SPECS[k];
            assert_eq!(s.family.index(), k);
            for (i, (m, t, rev)) in rows.iter().enumerate() {
                let rule = s.rules[i];
                assert_eq!(
                    rule.matrix.matrix(),
                    [[m[0], m[1]], [m[2], m[3]]],
                    "family {k} quadrant {i}"
                );
                assert_eq!(rule.translation, *t, "family {k} quadrant {i}");
                assert_eq!(rule.reversed, *rev, "family {k} quadrant {i}");
            }
        }
    }

    #[test]
    fn improper_specs_reverse_something() {
        for s in &STANDARD_SPECS {
            assert_eq!(s.proper(), s.rules.iter().all(|r| !r.reversed));
        }
    }

    #[test]
    fn table_round_trips_through_json() {
        let t = FamilyTable::standard();
        let json = serde_json::to_string(&t).unwrap();
        let back: FamilyTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Family>("12").is_err());
    }

    #[test]
    fn validate_catches_wrong_quadrant() {
        let mut s = STANDARD_SPECS[0];
        s.rules.swap(1, 2);
        assert!(matches!(
            s.validate(),
            Err(Error::InvalidRule { quadrant: 1, .. })
        ));
    }
}
