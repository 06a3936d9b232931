//! Exact integer geometry on the grid of an order-n curve.
//!
//! Affine quadrant maps scale by one half and translate by half-units, so
//! every computation runs on the doubled lattice where the centre of cell
//! `(c, r)` sits at `(2c + 1, 2r + 1)`. Images of cell centres stay on odd
//! coordinates and nothing ever needs a fraction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;

/// Number of cells in an order-`order` curve.
pub fn cell_count(order: u32) -> usize {
    1usize << (2 * order)
}

/// Side length of the order-`order` grid.
pub fn grid_side(order: u32) -> u32 {
    1u32 << order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub col: u32,
    pub row: u32,
}

impl Cell {
    pub const fn new(col: u32, row: u32) -> Self {
        Cell { col, row }
    }

    /// True when the two cells share an edge.
    pub fn is_adjacent(self, other: Cell) -> bool {
        self.col.abs_diff(other.col) + self.row.abs_diff(other.row) == 1
    }

    pub fn in_grid(self, order: u32) -> bool {
        let side = grid_side(order);
        self.col < side && self.row < side
    }

    /// Centre of the cell on the doubled lattice.
    pub fn center(self) -> LatticePoint {
        LatticePoint {
            x: 2 * i64::from(self.col) + 1,
            y: 2 * i64::from(self.row) + 1,
        }
    }

    /// Quadrant of the order-`order` grid holding this cell, numbered
    /// clockwise from the lower left: 0 = lower-left, 1 = upper-left,
    /// 2 = upper-right, 3 = lower-right.
    pub fn quadrant(self, order: u32) -> usize {
        let half = grid_side(order) / 2;
        match (self.col >= half, self.row >= half) {
            (false, false) => 0,
            (false, true) => 1,
            (true, true) => 2,
            (true, false) => 3,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.col, self.row)
    }
}

/// A point of the doubled lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    /// The cell whose centre this is, if the point is a cell centre.
    pub fn to_cell(self) -> Option<Cell> {
        if self.x < 0 || self.y < 0 || self.x % 2 != 1 || self.y % 2 != 1 {
            return None;
        }
        Some(Cell::new(
            u32::try_from((self.x - 1) / 2).ok()?,
            u32::try_from((self.y - 1) / 2).ok()?,
        ))
    }
}

/// One of the eight symmetries of the square, as an orthogonal matrix with
/// entries in {-1, 0, 1}. Matrices act on column vectors `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[[i8; 2]; 2]", into = "[[i8; 2]; 2]")]
pub struct Dihedral([[i8; 2]; 2]);

impl Dihedral {
    pub const IDENTITY: Dihedral = Dihedral([[1, 0], [0, 1]]);
    /// Quarter turn counter-clockwise.
    pub const ROT90: Dihedral = Dihedral([[0, -1], [1, 0]]);
    pub const ROT180: Dihedral = Dihedral([[-1, 0], [0, -1]]);
    pub const ROT270: Dihedral = Dihedral([[0, 1], [-1, 0]]);
    /// Mirror in a vertical line: `x ↦ -x`.
    pub const MIRROR_VERTICAL: Dihedral = Dihedral([[-1, 0], [0, 1]]);
    /// Mirror in a horizontal line: `y ↦ -y`.
    pub const MIRROR_HORIZONTAL: Dihedral = Dihedral([[1, 0], [0, -1]]);
    /// Mirror in the main diagonal: `(x, y) ↦ (y, x)`.
    pub const TRANSPOSE: Dihedral = Dihedral([[0, 1], [1, 0]]);
    /// Mirror in the anti-diagonal: `(x, y) ↦ (-y, -x)`.
    pub const ANTI_TRANSPOSE: Dihedral = Dihedral([[0, -1], [-1, 0]]);

    pub const ALL: [Dihedral; 8] = [
        Self::IDENTITY,
        Self::ROT90,
        Self::ROT180,
        Self::ROT270,
        Self::MIRROR_VERTICAL,
        Self::MIRROR_HORIZONTAL,
        Self::TRANSPOSE,
        Self::ANTI_TRANSPOSE,
    ];

    /// Accepts any orthogonal matrix with entries in {-1, 0, 1}.
    pub fn from_matrix(m: [[i8; 2]; 2]) -> Option<Self> {
        let d = Dihedral(m);
        if m.iter().flatten().any(|v| !(-1..=1).contains(v)) {
            return None;
        }
        (d.transpose().compose(d) == Self::IDENTITY).then_some(d)
    }

    pub fn matrix(self) -> [[i8; 2]; 2] {
        self.0
    }

    pub fn determinant(self) -> i8 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn transpose(self) -> Self {
        let [[a, b], [c, d]] = self.0;
        Dihedral([[a, c], [b, d]])
    }

    /// The inverse of an orthogonal matrix is its transpose.
    pub fn inverse(self) -> Self {
        self.transpose()
    }

    /// Matrix product `self · other`: apply `other` first.
    pub fn compose(self, other: Dihedral) -> Dihedral {
        let a = self.0;
        let b = other.0;
        let mut m = [[0i8; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Dihedral(m)
    }

    pub fn apply(self, x: i64, y: i64) -> (i64, i64) {
        let [[a, b], [c, d]] = self.0;
        (
            i64::from(a) * x + i64::from(b) * y,
            i64::from(c) * x + i64::from(d) * y,
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::IDENTITY => "identity",
            Self::ROT90 => "rot90",
            Self::ROT180 => "rot180",
            Self::ROT270 => "rot270",
            Self::MIRROR_VERTICAL => "mirror-vertical",
            Self::MIRROR_HORIZONTAL => "mirror-horizontal",
            Self::TRANSPOSE => "transpose",
            _ => "anti-transpose",
        }
    }
}

impl TryFrom<[[i8; 2]; 2]> for Dihedral {
    type Error = String;

    fn try_from(m: [[i8; 2]; 2]) -> std::result::Result<Self, String> {
        Dihedral::from_matrix(m).ok_or_else(|| format!("{m:?} is not a signed permutation matrix"))
    }
}

impl From<Dihedral> for [[i8; 2]; 2] {
    fn from(d: Dihedral) -> Self {
        d.0
    }
}

/// An affine quadrant map `p ↦ ½·matrix·p + ½·translation` of the unit
/// square, optionally followed by reversal of the mapped sub-curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadrantRule {
    pub matrix: Dihedral,
    pub translation: [u8; 2],
    #[serde(default)]
    pub reversed: bool,
}

impl QuadrantRule {
    pub const fn new(matrix: Dihedral, translation: [u8; 2]) -> Self {
        QuadrantRule {
            matrix,
            translation,
            reversed: false,
        }
    }

    pub const fn reversed(matrix: Dihedral, translation: [u8; 2]) -> Self {
        QuadrantRule {
            matrix,
            translation,
            reversed: true,
        }
    }

    /// The quadrant the image of the unit square lands in, or `None` when
    /// the image is not one of the four quadrants.
    pub fn target_quadrant(&self) -> Option<usize> {
        // Centre of the image in quarter units: M·(1, 1) + 2t.
        let (mx, my) = self.matrix.apply(1, 1);
        let cx = mx + 2 * i64::from(self.translation[0]);
        let cy = my + 2 * i64::from(self.translation[1]);
        match (cx, cy) {
            (1, 1) => Some(0),
            (1, 3) => Some(1),
            (3, 3) => Some(2),
            (3, 1) => Some(3),
            _ => None,
        }
    }

    /// Maps a point of the order-`order` doubled lattice (side `2^(order+1)`)
    /// into the order-`order + 1` doubled lattice.
    pub fn apply_to_point(&self, p: LatticePoint, order: u32) -> Result<LatticePoint> {
        let side = 2i64 << order;
        let (x, y) = self.matrix.apply(p.x, p.y);
        let image = LatticePoint {
            x: x + i64::from(self.translation[0]) * side,
            y: y + i64::from(self.translation[1]) * side,
        };
        let bound = 2 * side;
        if !(0..=bound).contains(&image.x) || !(0..=bound).contains(&image.y) {
            return Err(Error::InvalidRule {
                quadrant: self.target_quadrant().unwrap_or(usize::MAX),
                reason: format!("image ({}, {}) leaves the unit square", image.x, image.y),
            });
        }
        Ok(image)
    }

    /// Image of an order-`order` cell in the order-`order + 1` grid.
    pub fn map_cell(&self, cell: Cell, order: u32) -> Result<Cell> {
        let image = self.apply_to_point(cell.center(), order)?;
        image.to_cell().ok_or_else(|| Error::InvalidRule {
            quadrant: self.target_quadrant().unwrap_or(usize::MAX),
            reason: "image is not a cell centre".into(),
        })
    }

    /// Pre-image of an order-`order + 1` cell lying in this rule's quadrant.
    pub fn unmap_cell(&self, cell: Cell, order: u32) -> Result<Cell> {
        let side = 2i64 << order;
        let p = cell.center();
        let (x, y) = self.matrix.inverse().apply(
            p.x - i64::from(self.translation[0]) * side,
            p.y - i64::from(self.translation[1]) * side,
        );
        LatticePoint { x, y }
            .to_cell()
            .filter(|c| c.in_grid(order))
            .ok_or(Error::CellOutOfGrid {
                cell,
                order: order + 1,
            })
    }
}

/// An element of the 16-element equivalence group: a symmetry of the square
/// about the grid centre, optionally combined with traversal reversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetryOp {
    pub dihedral: Dihedral,
    pub reversal: bool,
}

impl SymmetryOp {
    pub const IDENTITY: SymmetryOp = SymmetryOp {
        dihedral: Dihedral::IDENTITY,
        reversal: false,
    };

    pub const fn new(dihedral: Dihedral, reversal: bool) -> Self {
        SymmetryOp { dihedral, reversal }
    }

    pub fn all() -> [SymmetryOp; 16] {
        let mut ops = [Self::IDENTITY; 16];
        for (i, d) in Dihedral::ALL.iter().enumerate() {
            ops[2 * i] = SymmetryOp::new(*d, false);
            ops[2 * i + 1] = SymmetryOp::new(*d, true);
        }
        ops
    }

    /// `self ∘ first`: apply `first`, then `self`. Reversal commutes with
    /// every point symmetry, so the flags simply combine.
    pub fn compose(self, first: SymmetryOp) -> SymmetryOp {
        SymmetryOp {
            dihedral: self.dihedral.compose(first.dihedral),
            reversal: self.reversal ^ first.reversal,
        }
    }

    pub fn inverse(self) -> SymmetryOp {
        SymmetryOp {
            dihedral: self.dihedral.inverse(),
            reversal: self.reversal,
        }
    }

    /// Applies the point symmetry to a cell of the order-`order` grid, about
    /// the grid centre.
    pub fn apply_to_cell(self, cell: Cell, order: u32) -> Cell {
        let side = i64::from(grid_side(order));
        let p = cell.center();
        let (x, y) = self.dihedral.apply(p.x - side, p.y - side);
        LatticePoint {
            x: x + side,
            y: y + side,
        }
        .to_cell()
        .expect("dihedral image of a cell centre is a cell centre")
    }
}

impl fmt::Display for SymmetryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dihedral.name())?;
        if self.reversal {
            f.write_str("+reversal")?;
        }
        Ok(())
    }
}

/// The cells visited by an order-n curve approximation, in visiting order.
/// Position in the sequence is the interval index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    family: Option<Family>,
    order: u32,
    cells: Vec<Cell>,
}

impl Curve {
    /// Wraps a cell sequence after checking its length and that every cell
    /// lies in the grid. Adjacency and coverage are left to the verifier so
    /// that broken sequences can still be inspected.
    pub fn new(order: u32, cells: Vec<Cell>) -> Result<Self> {
        if order == 0 || order > 31 {
            return Err(Error::OrderOutOfRange(order, 1, 31));
        }
        let expected = cell_count(order);
        if cells.len() != expected {
            return Err(Error::CellCount {
                order,
                expected,
                actual: cells.len(),
            });
        }
        if let Some(&cell) = cells.iter().find(|c| !c.in_grid(order)) {
            return Err(Error::CellOutOfGrid { cell, order });
        }
        Ok(Curve {
            family: None,
            order,
            cells,
        })
    }

    pub(crate) fn from_parts(family: Option<Family>, order: u32, cells: Vec<Cell>) -> Self {
        debug_assert_eq!(cells.len(), cell_count(order));
        Curve {
            family,
            order,
            cells,
        }
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn side(&self) -> u32 {
        grid_side(self.order)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<Cell> {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn entry(&self) -> Cell {
        self.cells[0]
    }

    pub fn exit(&self) -> Cell {
        self.cells[self.cells.len() - 1]
    }

    /// Index `i` of the first pair `(cells[i], cells[i + 1])` that does not
    /// share an edge.
    pub fn first_gap(&self) -> Option<usize> {
        self.cells.windows(2).position(|w| !w[0].is_adjacent(w[1]))
    }

    /// Index of the first cell that repeats an earlier one. Since the length
    /// is exactly `4^n`, no repeats means every cell is covered.
    pub fn first_repeat(&self) -> Option<usize> {
        let side = self.side() as usize;
        let mut seen = vec![false; self.cells.len()];
        self.cells.iter().position(|c| {
            let slot = c.row as usize * side + c.col as usize;
            std::mem::replace(&mut seen[slot], true)
        })
    }

    /// Edge-connected, non-repeating and covering the grid.
    pub fn is_valid(&self) -> bool {
        self.first_gap().is_none() && self.first_repeat().is_none()
    }
}

/// The same cells visited back to front.
pub fn reverse_curve(c: &Curve) -> Curve {
    let mut cells = c.cells.clone();
    cells.reverse();
    Curve::from_parts(c.family, c.order, cells)
}

/// Applies a symmetry about the grid centre, then reverses the visiting
/// order if the op carries a reversal.
pub fn transform_curve(op: SymmetryOp, c: &Curve) -> Curve {
    let mut cells: Vec<Cell> = c
        .cells
        .iter()
        .map(|&cell| op.apply_to_cell(cell, c.order))
        .collect();
    if op.reversal {
        cells.reverse();
    }
    Curve::from_parts(c.family, c.order, cells)
}

/// Returns a witness op mapping `a` onto `b` cell for cell, if any.
pub fn curves_equivalent(a: &Curve, b: &Curve) -> Result<Option<SymmetryOp>> {
    if a.order != b.order {
        return Err(Error::OrderMismatch(a.order, b.order));
    }
    let n = a.order;
    let last = a.cells.len() - 1;
    Ok(SymmetryOp::all().into_iter().find(|op| {
        a.cells.iter().enumerate().all(|(i, &cell)| {
            let j = if op.reversal { last - i } else { i };
            op.apply_to_cell(cell, n) == b.cells[j]
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> Curve {
        Curve::new(
            1,
            vec![
                Cell::new(0, 0),
                Cell::new(0, 1),
                Cell::new(1, 1),
                Cell::new(1, 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn all_dihedral_elements_are_orthogonal() {
        for d in Dihedral::ALL {
            assert_eq!(d.transpose().compose(d), Dihedral::IDENTITY);
            assert_eq!(d.determinant().abs(), 1);
            assert_eq!(Dihedral::from_matrix(d.matrix()), Some(d));
        }
        assert_eq!(Dihedral::from_matrix([[1, 1], [0, 1]]), None);
        assert_eq!(Dihedral::from_matrix([[2, 0], [0, 1]]), None);
    }

    #[test]
    fn hilbert_first_rule_maps_entry_centre_to_origin_cell() {
        // (0.25, 0.25) on the order-1 grid is the doubled point (1, 1).
        let rule = QuadrantRule::new(Dihedral::TRANSPOSE, [0, 0]);
        let image = rule.apply_to_point(LatticePoint { x: 1, y: 1 }, 1).unwrap();
        // (0.125, 0.125) in the order-2 doubled lattice of side 8.
        assert_eq!(image, LatticePoint { x: 1, y: 1 });
        assert_eq!(image.to_cell(), Some(Cell::new(0, 0)));
    }

    #[test]
    fn identity_rule_without_translation_keeps_shape_in_quadrant_zero() {
        let rule = QuadrantRule::new(Dihedral::IDENTITY, [0, 0]);
        for &c in h1().cells() {
            assert_eq!(rule.map_cell(c, 1).unwrap(), c);
        }
        assert_eq!(rule.target_quadrant(), Some(0));
    }

    #[test]
    fn moore_first_rule_maps_entry_to_cell_one_zero() {
        let rule = QuadrantRule::new(Dihedral::ROT90, [1, 0]);
        let image = rule.apply_to_point(LatticePoint { x: 1, y: 1 }, 1).unwrap();
        // (0.375, 0.125) × 8 = (3, 1).
        assert_eq!(image, LatticePoint { x: 3, y: 1 });
        assert_eq!(image.to_cell(), Some(Cell::new(1, 0)));
    }

    #[test]
    fn rule_leaving_the_square_is_rejected() {
        let rule = QuadrantRule::new(Dihedral::ROT180, [0, 0]);
        assert_eq!(rule.target_quadrant(), None);
        assert!(matches!(
            rule.apply_to_point(LatticePoint { x: 1, y: 1 }, 1),
            Err(Error::InvalidRule { .. })
        ));
    }

    #[test]
    fn unmap_inverts_map() {
        let rule = QuadrantRule::new(Dihedral::ANTI_TRANSPOSE, [2, 1]);
        for col in 0..4 {
            for row in 0..4 {
                let c = Cell::new(col, row);
                let image = rule.map_cell(c, 2).unwrap();
                assert_eq!(image.quadrant(3), 3);
                assert_eq!(rule.unmap_cell(image, 2).unwrap(), c);
            }
        }
    }

    #[test]
    fn reverse_h1() {
        let r = reverse_curve(&h1());
        let expected = [(1, 0), (1, 1), (0, 1), (0, 0)].map(|(c, r)| Cell::new(c, r));
        assert_eq!(r.cells(), expected);
        assert_eq!(reverse_curve(&r), h1());
    }

    #[test]
    fn half_turn_of_h1() {
        let op = SymmetryOp::new(Dihedral::ROT180, false);
        let t = transform_curve(op, &h1());
        let expected = [(1, 1), (1, 0), (0, 0), (0, 1)].map(|(c, r)| Cell::new(c, r));
        assert_eq!(t.cells(), expected);
    }

    #[test]
    fn symmetry_group_is_closed_with_inverses() {
        let ops = SymmetryOp::all();
        for a in ops {
            assert!(ops.contains(&a.inverse()));
            assert_eq!(a.compose(a.inverse()), SymmetryOp::IDENTITY);
            for b in ops {
                assert!(ops.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn equivalence_needs_equal_orders() {
        let c2 = Curve::new(2, vec![Cell::new(0, 0); 16]).unwrap();
        assert_eq!(
            curves_equivalent(&h1(), &c2),
            Err(Error::OrderMismatch(1, 2))
        );
    }

    #[test]
    fn curve_construction_checks_length_and_bounds() {
        assert!(matches!(
            Curve::new(1, vec![Cell::new(0, 0)]),
            Err(Error::CellCount { .. })
        ));
        assert!(matches!(
            Curve::new(1, vec![Cell::new(2, 0); 4]),
            Err(Error::CellOutOfGrid { .. })
        ));
    }

    #[test]
    fn gaps_and_repeats_are_located() {
        let diag = Curve::new(
            1,
            vec![
                Cell::new(0, 0),
                Cell::new(1, 1),
                Cell::new(0, 1),
                Cell::new(1, 0),
            ],
        )
        .unwrap();
        assert_eq!(diag.first_gap(), Some(0));
        assert_eq!(diag.first_repeat(), None);
        let rep = Curve::new(
            1,
            vec![
                Cell::new(0, 0),
                Cell::new(0, 1),
                Cell::new(0, 0),
                Cell::new(1, 0),
            ],
        )
        .unwrap();
        assert_eq!(rep.first_repeat(), Some(2));
        assert!(h1().is_valid());
    }
}
