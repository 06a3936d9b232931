//! The geometric engine: quadrant-by-quadrant affine assembly.

use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec, FamilyTable};
use crate::geometry::{Cell, Curve};

/// Largest order [`generate`] will materialise.
pub const MAX_ORDER: u32 = 14;

/// Which specs build a family at each level, from the top down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lineage {
    pub outer: Family,
    /// Present exactly for improper families.
    pub middle: Option<Family>,
    pub inner: Family,
}

impl Lineage {
    pub fn of(family: Family) -> Lineage {
        Lineage {
            outer: family,
            middle: (!family.is_proper()).then_some(Family::IMPROPER_BLOCK),
            inner: Family::HILBERT,
        }
    }

    /// The family whose rules apply at `level` (0 = outermost) of an
    /// order-`order` curve. The last level, `order - 1`, is the order-1
    /// base curve and has no rule.
    pub fn family_at(&self, level: u32) -> Family {
        match (level, self.middle) {
            (0, _) => self.outer,
            (1, Some(m)) => m,
            _ => self.inner,
        }
    }
}

/// The unique order-1 curve: entry lower-left, exit lower-right.
pub fn base_curve() -> Curve {
    Curve::from_parts(None, 1, BASE_CELLS.to_vec())
}

pub(crate) const BASE_CELLS: [Cell; 4] = [
    Cell::new(0, 0),
    Cell::new(0, 1),
    Cell::new(1, 1),
    Cell::new(1, 0),
];

/// Maps `block` into each quadrant through the spec's rules, reversing the
/// quadrants flagged for reversion, and joins the four pieces. The joins are
/// checked, not assumed.
pub fn assemble_quadrants(spec: &FamilySpec, block: &Curve) -> Result<Curve> {
    spec.validate()?;
    let order = block.order();
    let mut cells = Vec::with_capacity(4 * block.len());
    for (q, rule) in spec.rules.iter().enumerate() {
        let start = cells.len();
        for &c in block.cells() {
            cells.push(rule.map_cell(c, order)?);
        }
        if rule.reversed {
            cells[start..].reverse();
        }
        if q > 0 && !cells[start - 1].is_adjacent(cells[start]) {
            return Err(Error::BrokenConnectivity { from: q - 1, to: q });
        }
    }
    let curve = Curve::from_parts(Some(spec.family), order + 1, cells);
    if let Some(i) = curve.first_gap() {
        return Err(Error::BrokenConnectivity {
            from: i / block.len(),
            to: (i + 1) / block.len(),
        });
    }
    Ok(curve)
}

/// The order-`order` curve of `family` under the standard tables.
pub fn generate(family: Family, order: u32) -> Result<Curve> {
    generate_with(FamilyTable::standard_ref(), family, order)
}

/// Like [`generate`], over an arbitrary family table.
pub fn generate_with(table: &FamilyTable, family: Family, order: u32) -> Result<Curve> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::OrderOutOfRange(order, 1, MAX_ORDER));
    }
    if order == 1 {
        return Ok(base_curve().with_family(family));
    }
    let lineage = Lineage::of(family);
    // Fold the inner Hilbert block up from order 1, innermost level first.
    let mut block = base_curve();
    for level in (1..order - 1).rev() {
        let f = lineage.family_at(level);
        block = assemble_quadrants(table.spec(f), &block)?;
    }
    assemble_quadrants(table.spec(family), &block)
}
