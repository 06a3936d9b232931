//! Checks for the Hilbert conditions, closure, mirror symmetry and
//! agreement between the two generation engines.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::family::{Family, FamilyTable};
use crate::generator::generate_with;
use crate::geometry::{Cell, Curve};
use crate::tag::{path_to_word, word_for, word_to_path};

/// Families whose entry and exit cells are adjacent.
pub const CLOSED_FAMILIES: [u32; 4] = [1, 2, 6, 9];

/// Families symmetric under the mirror in the vertical centre line.
pub const MIRROR_FAMILIES: [u32; 8] = [0, 1, 2, 3, 6, 8, 9, 10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Construction,
    Condition1,
    Condition2,
    SpaceFilling,
    Closure,
    MirrorSymmetry,
    CrossValidation,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Construction => "construction",
            Check::Condition1 => "condition-1",
            Check::Condition2 => "condition-2",
            Check::SpaceFilling => "space-filling",
            Check::Closure => "closure",
            Check::MirrorSymmetry => "mirror-symmetry",
            Check::CrossValidation => "cross-validation",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub family: Option<Family>,
    pub order: u32,
    pub check: Check,
    pub passed: bool,
    /// First offending index, where the check has one.
    pub first_violation: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Report {
    fn new(c: &Curve, check: Check, first_violation: Option<usize>) -> Self {
        Report {
            family: c.family(),
            order: c.order(),
            check,
            passed: first_violation.is_none(),
            first_violation,
            detail: None,
        }
    }

    fn failed(family: Family, order: u32, check: Check, detail: String) -> Self {
        Report {
            family: Some(family),
            order,
            check,
            passed: false,
            first_violation: None,
            detail: Some(detail),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Consecutive cells share an edge.
pub fn check_hilbert_condition_1(c: &Curve) -> Report {
    Report::new(c, Check::Condition1, c.first_gap())
}

/// Cells `4j..4j+3` of `fine` all lie in the 2×2 block refining cell `j` of
/// `coarse`.
pub fn check_hilbert_condition_2(fine: &Curve, coarse: &Curve) -> Result<Report> {
    if fine.order() != coarse.order() + 1 {
        return Err(Error::OrderMismatch(fine.order(), coarse.order() + 1));
    }
    let violation = fine
        .cells()
        .chunks_exact(4)
        .zip(coarse.cells())
        .position(|(group, parent)| {
            group
                .iter()
                .any(|c| c.col / 2 != parent.col || c.row / 2 != parent.row)
        });
    Ok(Report::new(fine, Check::Condition2, violation))
}

/// All cells distinct; together with the fixed length this is coverage.
pub fn check_space_filling(c: &Curve) -> Report {
    Report::new(c, Check::SpaceFilling, c.first_repeat())
}

pub fn check_closed(c: &Curve) -> bool {
    c.entry().is_adjacent(c.exit())
}

/// Mirroring in the vertical centre line gives the same sequence or the
/// same sequence reversed.
pub fn check_mirror_symmetric(c: &Curve) -> bool {
    let last = c.side() - 1;
    let mirror = |cell: &Cell| Cell::new(last - cell.col, cell.row);
    let cells = c.cells();
    cells.iter().map(mirror).eq(cells.iter().copied())
        || cells.iter().map(mirror).eq(cells.iter().rev().copied())
}

/// Both engines produce the same word, and walking the word from the
/// geometric entry reproduces the geometric curve.
pub fn cross_validate(family: Family, order: u32) -> Report {
    cross_validate_with(FamilyTable::standard_ref(), family, order)
}

pub fn cross_validate_with(table: &FamilyTable, family: Family, order: u32) -> Report {
    let curve = match generate_with(table, family, order) {
        Ok(c) => c,
        Err(e) => return Report::failed(family, order, Check::CrossValidation, e.to_string()),
    };
    cross_validate_curve(&curve, family)
}

fn cross_validate_curve(curve: &Curve, family: Family) -> Report {
    let order = curve.order();
    let fail = |detail: String| Report::failed(family, order, Check::CrossValidation, detail);
    let rewritten = match word_for(family, order) {
        Ok(w) => w,
        Err(e) => return fail(e.to_string()),
    };
    let read = match path_to_word(curve) {
        Ok(w) => w,
        Err(e) => return fail(format!("geometric curve has no word: {e}")),
    };
    if let Some(i) = read
        .as_bytes()
        .iter()
        .zip(rewritten.as_bytes())
        .position(|(a, b)| a != b)
    {
        return Report::new(curve, Check::CrossValidation, Some(i)).with_detail("words differ");
    }
    match word_to_path(&rewritten, curve.entry(), order) {
        Ok(walked) if walked.cells() == curve.cells() => {
            Report::new(curve, Check::CrossValidation, None)
        }
        Ok(walked) => {
            let i = walked
                .cells()
                .iter()
                .zip(curve.cells())
                .position(|(a, b)| a != b);
            Report::new(curve, Check::CrossValidation, i.or(Some(0)))
                .with_detail("walked path differs")
        }
        Err(e) => fail(format!("rewritten word does not walk: {e}")),
    }
}

/// The full check suite for one family at one order.
pub fn verify_family(table: &FamilyTable, family: Family, order: u32) -> Vec<Report> {
    let curve = match generate_with(table, family, order) {
        Ok(c) => c,
        Err(e) => {
            return vec![Report::failed(
                family,
                order,
                Check::Construction,
                e.to_string(),
            )]
        }
    };
    let mut reports = vec![
        check_hilbert_condition_1(&curve),
        check_space_filling(&curve),
    ];
    if order >= 2 {
        let coarse = generate_with(table, family, order - 1)
            .and_then(|coarse| check_hilbert_condition_2(&curve, &coarse));
        reports.push(match coarse {
            Ok(r) => r,
            Err(e) => Report::failed(family, order, Check::Condition2, e.to_string()),
        });
        // Every family shares the single order-1 curve, so the membership
        // claims only make sense from order 2 on.
        let closed = check_closed(&curve);
        let expect_closed = CLOSED_FAMILIES.contains(&u32::from(family));
        reports.push(
            Report {
                passed: closed == expect_closed,
                ..Report::new(&curve, Check::Closure, None)
            }
            .with_detail(format!("closed={closed} expected={expect_closed}")),
        );
        let mirrored = check_mirror_symmetric(&curve);
        let expect_mirror = MIRROR_FAMILIES.contains(&u32::from(family));
        reports.push(
            Report {
                passed: mirrored == expect_mirror,
                ..Report::new(&curve, Check::MirrorSymmetry, None)
            }
            .with_detail(format!("mirror={mirrored} expected={expect_mirror}")),
        );
    }
    reports.push(cross_validate_curve(&curve, family));
    reports
}

/// Runs [`verify_family`] over every (family, order) pair. Report order is
/// family-major, then order, regardless of strategy.
pub fn verify_grid(
    table: &FamilyTable,
    families: &[Family],
    orders: std::ops::RangeInclusive<u32>,
    strategy: Strategy,
) -> Vec<Report> {
    let jobs: Vec<(Family, u32)> = families
        .iter()
        .flat_map(|&f| orders.clone().map(move |n| (f, n)))
        .collect();
    strategy
        .map(&jobs, |&(f, n)| verify_family(table, f, n))
        .into_iter()
        .flatten()
        .collect()
}

pub fn all_passed(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{base_curve, generate};

    fn fam(k: u32) -> Family {
        Family::new(k).unwrap()
    }

    #[test]
    fn condition_1_examples() {
        assert!(check_hilbert_condition_1(&generate(fam(0), 4).unwrap()).passed);
        let diag = Curve::new(
            1,
            [(0, 0), (1, 1), (0, 1), (1, 0)]
                .map(|(a, b)| Cell::new(a, b))
                .to_vec(),
        )
        .unwrap();
        let r = check_hilbert_condition_1(&diag);
        assert!(!r.passed);
        assert_eq!(r.first_violation, Some(0));
    }

    #[test]
    fn condition_2_examples() {
        let fine = generate(fam(0), 3).unwrap();
        let coarse = generate(fam(0), 2).unwrap();
        assert!(check_hilbert_condition_2(&fine, &coarse).unwrap().passed);

        let moore = generate(fam(1), 3).unwrap();
        let r = check_hilbert_condition_2(&moore, &coarse).unwrap();
        assert!(!r.passed);
        // Moore starts at (3,0), whose parent (1,0) is not Hilbert's first cell.
        assert_eq!(r.first_violation, Some(0));

        let mut shifted = fine.cells().to_vec();
        shifted.rotate_left(1);
        let shifted = Curve::new(3, shifted).unwrap();
        assert!(!check_hilbert_condition_2(&shifted, &coarse).unwrap().passed);

        assert!(check_hilbert_condition_2(&fine, &fine).is_err());
    }

    #[test]
    fn closure_examples() {
        for k in [1, 2, 6, 9] {
            assert!(check_closed(&generate(fam(k), 3).unwrap()), "family {k}");
        }
        let h = generate(fam(0), 3).unwrap();
        assert_eq!((h.entry(), h.exit()), (Cell::new(0, 0), Cell::new(7, 0)));
        assert!(!check_closed(&h));
        assert!(check_closed(&base_curve()));
    }

    #[test]
    fn mirror_examples() {
        for k in Family::all() {
            let c = generate(k, 3).unwrap();
            assert_eq!(
                check_mirror_symmetric(&c),
                MIRROR_FAMILIES.contains(&u32::from(k)),
                "family {k}"
            );
        }
        assert!(check_mirror_symmetric(&base_curve()));
    }

    #[test]
    fn cross_validation_examples() {
        assert!(cross_validate(fam(0), 2).passed);
        for k in Family::all() {
            assert!(cross_validate(k, 1).passed);
        }
    }

    #[test]
    fn full_suite_small_orders() {
        let reports = verify_grid(
            &FamilyTable::standard(),
            &Family::all().collect::<Vec<_>>(),
            1..=5,
            Strategy::default(),
        );
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut table = FamilyTable::standard();
        // Swap translation of quadrant 3 of the Moore table for Hilbert's.
        table.spec_mut(fam(1)).rules[3].translation = [2, 1];
        let reports = verify_family(&table, fam(1), 3);
        assert!(!all_passed(&reports));
    }
}
