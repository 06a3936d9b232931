//! Completeness of the twelve homogeneous families, two ways: boundary
//! vector diagrams quotiented by the symmetry group, and an exhaustive
//! search over every symmetry image of a building block in every quadrant.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::family::Family;
use crate::generator::generate;
use crate::geometry::{grid_side, transform_curve, Cell, Curve, SymmetryOp};
use crate::tag::{path_to_word, Word};

/// Block order at which diagrams are drawn. Orders 1 (proper only), 2 and 3
/// all give the same counts.
pub const REFERENCE_BLOCK_ORDER: u32 = 2;

/// Orders [`brute_force_census`] accepts.
pub const CENSUS_ORDERS: std::ops::RangeInclusive<u32> = 2..=3;

/// Pair labellings found in the literature for the same diagrams. Labels
/// depend on drawing order, so these are reported next to the computed
/// pairs rather than asserted.
pub const REFERENCE_PAIRINGS: [(Block, &[&str]); 3] = [
    (Block::Proper, &["1b-3b", "2b-4b"]),
    (Block::Proper, &["1a-3b", "2b-4b"]),
    (Block::Improper, &["1b-2b", "3b-4b"]),
];

/// The building curve placed in each quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    /// Hilbert's curve: entry and exit at adjacent corners.
    Proper,
    /// Family 5: entry at a corner, exit at the middle of an edge.
    Improper,
}

impl Block {
    pub const BOTH: [Block; 2] = [Block::Proper, Block::Improper];

    pub fn family(self) -> Family {
        match self {
            Block::Proper => Family::HILBERT,
            Block::Improper => Family::IMPROPER_BLOCK,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Block::Proper => "proper",
            Block::Improper => "improper",
        }
    }

    pub fn curve(self, order: u32) -> Result<Curve> {
        generate(self.family(), order)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Nearest of a quadrant's corners, edge midpoints and centre, in half
/// units from the quadrant's lower-left corner (each coordinate 0, 1 or 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Anchor {
    pub x: u8,
    pub y: u8,
}

impl Anchor {
    pub fn is_corner(self) -> bool {
        self.x != 1 && self.y != 1
    }

    pub fn name(self) -> &'static str {
        const NAMES: [[&str; 3]; 3] = [["SW", "W", "NW"], ["S", "C", "N"], ["SE", "E", "NE"]];
        NAMES[self.x as usize][self.y as usize]
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a quadrant's piece of curve starts and ends, as cells of the whole
/// diagram's grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BVector {
    pub entry: Cell,
    pub exit: Cell,
}

impl BVector {
    fn mapped(self, op: SymmetryOp, order: u32) -> BVector {
        let (entry, exit) = (
            op.apply_to_cell(self.entry, order),
            op.apply_to_cell(self.exit, order),
        );
        if op.reversal {
            BVector {
                entry: exit,
                exit: entry,
            }
        } else {
            BVector { entry, exit }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BVectorDiagram {
    pub block: Block,
    pub block_order: u32,
    /// Indexed by quadrant; exit of `i` is edge-adjacent to entry of `i + 1`.
    pub vectors: [BVector; 4],
    /// `<first-quadrant orientation 1..4><last-quadrant choice a|b>`.
    pub label: String,
}

impl BVectorDiagram {
    /// Order of the grid the vectors live in.
    pub fn order(&self) -> u32 {
        self.block_order + 1
    }

    pub fn is_continuous(&self) -> bool {
        self.vectors
            .windows(2)
            .all(|w| w[0].exit.is_adjacent(w[1].entry))
    }

    /// Entry and exit anchors of each quadrant's vector.
    pub fn anchors(&self) -> [(Anchor, Anchor); 4] {
        let side = grid_side(self.block_order);
        let snap = |c: Cell| {
            // Nearest of 0, side, 2·side on the doubled scale; ties go to
            // the corner.
            let half = |v: u32| {
                let local = 2 * (v % side) + 1;
                let to_mid = local.abs_diff(side);
                if local.min(2 * side - local) <= to_mid {
                    if local < side {
                        0
                    } else {
                        2
                    }
                } else {
                    1
                }
            };
            Anchor {
                x: half(c.col),
                y: half(c.row),
            }
        };
        self.vectors.map(|v| (snap(v.entry), snap(v.exit)))
    }

    /// The lexicographically least image of the vector sequence under the
    /// symmetry group. A reversal runs the quadrants backwards.
    pub fn canonical_key(&self) -> [BVector; 4] {
        let order = self.order();
        SymmetryOp::all()
            .into_iter()
            .map(|op| {
                let mut v = self.vectors.map(|b| b.mapped(op, order));
                if op.reversal {
                    v.reverse();
                }
                v
            })
            .min()
            .expect("the group is not empty")
    }
}

/// Distinct images of `block` under the 16 ops, sorted by cells.
fn block_images(block: &Curve) -> Vec<Curve> {
    let set: BTreeSet<Vec<Cell>> = SymmetryOp::all()
        .into_iter()
        .map(|op| transform_curve(op, block).into_cells())
        .collect();
    set.into_iter()
        .map(|cells| Curve::from_parts(None, block.order(), cells))
        .collect()
}

fn quadrant_offset(q: usize, side: u32) -> (u32, u32) {
    const OFFSETS: [(u32, u32); 4] = [(0, 0), (0, 1), (1, 1), (1, 0)];
    (OFFSETS[q].0 * side, OFFSETS[q].1 * side)
}

fn place(cell: Cell, q: usize, side: u32) -> Cell {
    let (dx, dy) = quadrant_offset(q, side);
    Cell::new(cell.col + dx, cell.row + dy)
}

pub fn enumerate_diagrams(block: Block) -> Result<Vec<BVectorDiagram>> {
    enumerate_diagrams_at(block, REFERENCE_BLOCK_ORDER)
}

/// Every continuous choice of block endpoints, one per quadrant, starting
/// in quadrant 0 and ending in quadrant 3.
pub fn enumerate_diagrams_at(block: Block, block_order: u32) -> Result<Vec<BVectorDiagram>> {
    let curve = block.curve(block_order)?;
    let endpoints: BTreeSet<(Cell, Cell)> = block_images(&curve)
        .iter()
        .map(|c| (c.entry(), c.exit()))
        .collect();
    let side = grid_side(block_order);
    let in_quadrant = |q: usize| -> Vec<BVector> {
        endpoints
            .iter()
            .map(|&(a, b)| BVector {
                entry: place(a, q, side),
                exit: place(b, q, side),
            })
            .collect()
    };
    let quads: Vec<Vec<BVector>> = (0..4).map(in_quadrant).collect();

    let mut found: Vec<[BVector; 4]> = Vec::new();
    for &a in &quads[0] {
        for &b in quads[1].iter().filter(|b| a.exit.is_adjacent(b.entry)) {
            for &c in quads[2].iter().filter(|c| b.exit.is_adjacent(c.entry)) {
                for &d in quads[3].iter().filter(|d| c.exit.is_adjacent(d.entry)) {
                    found.push([a, b, c, d]);
                }
            }
        }
    }
    Ok(label_diagrams(block, block_order, found))
}

fn label_diagrams(block: Block, block_order: u32, found: Vec<[BVector; 4]>) -> Vec<BVectorDiagram> {
    let firsts: Vec<BVector> = found
        .iter()
        .map(|v| v[0])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut seen: BTreeMap<BVector, u8> = BTreeMap::new();
    found
        .into_iter()
        .map(|vectors| {
            let orientation = firsts.iter().position(|&f| f == vectors[0]).unwrap_or(0) + 1;
            let choice = seen.entry(vectors[0]).or_insert(0);
            let label = format!("{orientation}{}", char::from(b'a' + *choice));
            *choice += 1;
            BVectorDiagram {
                block,
                block_order,
                vectors,
                label,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramQuotient {
    /// Member labels per class, classes ordered by first member.
    pub classes: Vec<Vec<String>>,
}

impl DiagramQuotient {
    /// Classes holding two diagrams: mirror images of each other.
    pub fn enantiomorphic_pairs(&self) -> Vec<(String, String)> {
        self.classes
            .iter()
            .filter(|c| c.len() == 2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect()
    }
}

pub fn quotient_diagrams(diagrams: &[BVectorDiagram]) -> DiagramQuotient {
    let mut by_key: BTreeMap<[BVector; 4], Vec<usize>> = BTreeMap::new();
    for (i, d) in diagrams.iter().enumerate() {
        by_key.entry(d.canonical_key()).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = by_key.into_values().collect();
    classes.sort();
    DiagramQuotient {
        classes: classes
            .into_iter()
            .map(|c| c.into_iter().map(|i| diagrams[i].label.clone()).collect())
            .collect(),
    }
}

/// Builds the curve a diagram describes: each quadrant gets the block image
/// with that quadrant's endpoints.
pub fn realize_diagram(diagram: &BVectorDiagram) -> Result<Curve> {
    let block = diagram.block.curve(diagram.block_order)?;
    let images = block_images(&block);
    let side = grid_side(diagram.block_order);
    let mut cells = Vec::with_capacity(4 * block.len());
    for (q, v) in diagram.vectors.iter().enumerate() {
        let image = images
            .iter()
            .find(|c| place(c.entry(), q, side) == v.entry && place(c.exit(), q, side) == v.exit)
            .ok_or_else(|| Error::InvalidRule {
                quadrant: q,
                reason: "no block image has these endpoints".into(),
            })?;
        cells.extend(image.cells().iter().map(|&c| place(c, q, side)));
    }
    Curve::new(diagram.order(), cells)
}

/// The least word over the 16 images of `curve`. Equal for two valid curves
/// exactly when they are equivalent.
pub fn canonical_form(curve: &Curve) -> Result<Word> {
    SymmetryOp::all()
        .into_iter()
        .map(|op| path_to_word(&transform_curve(op, curve)))
        .min_by(|a, b| match (a, b) {
            (Ok(a), Ok(b)) => a.cmp(b),
            (Err(_), _) => std::cmp::Ordering::Less,
            (_, Err(_)) => std::cmp::Ordering::Greater,
        })
        .expect("the group is not empty")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusClass {
    pub canonical: Word,
    #[serde(skip)]
    pub representative: Curve,
    /// Valid assemblies that fell in this class.
    pub assemblies: u64,
    /// Blocks whose search reached this class.
    pub blocks: Vec<Block>,
    /// Standard families equivalent to this class at the same order.
    pub families: Vec<Family>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub order: u32,
    pub blocks: Vec<Block>,
    pub assemblies_tried: u64,
    pub valid_assemblies: u64,
    pub classes: Vec<CensusClass>,
}

impl Census {
    /// Every class matches exactly one family and no family is matched
    /// twice.
    pub fn is_bijective_with_families(&self) -> bool {
        let matched: BTreeSet<Family> = self
            .classes
            .iter()
            .flat_map(|c| c.families.clone())
            .collect();
        self.classes.iter().all(|c| c.families.len() == 1) && matched.len() == self.classes.len()
    }
}

fn check_census_order(order: u32) -> Result<()> {
    if CENSUS_ORDERS.contains(&order) {
        Ok(())
    } else {
        Err(Error::CensusTooLarge(order))
    }
}

/// Tries all 16⁴ ways of putting a symmetry image of the order-`order − 1`
/// block in each quadrant, keeps the valid curves and groups them by
/// [`canonical_form`].
pub fn brute_force_census(order: u32, block: Block, strategy: Strategy) -> Result<Census> {
    check_census_order(order)?;
    let mut census = search(order, block, strategy)?;
    attach_families(&mut census)?;
    Ok(census)
}

/// Both blocks searched and their classes merged.
pub fn pooled_census(order: u32, strategy: Strategy) -> Result<Census> {
    check_census_order(order)?;
    let parts = Block::BOTH
        .iter()
        .map(|&b| search(order, b, strategy))
        .collect::<Result<Vec<_>>>()?;
    let mut merged: BTreeMap<Word, CensusClass> = BTreeMap::new();
    for class in parts.iter().flat_map(|p| p.classes.iter()) {
        match merged.get_mut(&class.canonical) {
            Some(c) => {
                c.assemblies += class.assemblies;
                c.blocks.extend(&class.blocks);
            }
            None => {
                merged.insert(class.canonical.clone(), class.clone());
            }
        }
    }
    let mut census = Census {
        order,
        blocks: Block::BOTH.to_vec(),
        assemblies_tried: parts.iter().map(|p| p.assemblies_tried).sum(),
        valid_assemblies: parts.iter().map(|p| p.valid_assemblies).sum(),
        classes: merged.into_values().collect(),
    };
    attach_families(&mut census)?;
    Ok(census)
}

fn search(order: u32, block: Block, strategy: Strategy) -> Result<Census> {
    let piece = block.curve(order - 1)?;
    let ops = SymmetryOp::all();
    let images: Vec<Curve> = ops.iter().map(|&op| transform_curve(op, &piece)).collect();
    let side = piece.side();

    // One job per first-quadrant op; each returns its valid assemblies.
    let jobs: Vec<usize> = (0..ops.len()).collect();
    let found: Vec<Result<Vec<(Word, Curve)>>> = strategy.map(&jobs, |&first| {
        let mut out = Vec::new();
        let mut cells = Vec::with_capacity(4 * piece.len());
        for second in 0..ops.len() {
            for third in 0..ops.len() {
                for fourth in 0..ops.len() {
                    cells.clear();
                    let mut joined = true;
                    for (q, &i) in [first, second, third, fourth].iter().enumerate() {
                        let start = cells.len();
                        cells.extend(images[i].cells().iter().map(|&c| place(c, q, side)));
                        if q > 0 && !cells[start - 1].is_adjacent(cells[start]) {
                            joined = false;
                            break;
                        }
                    }
                    if !joined {
                        continue;
                    }
                    let curve = Curve::from_parts(None, order, cells.clone());
                    if curve.is_valid() {
                        out.push((canonical_form(&curve)?, curve));
                    }
                }
            }
        }
        Ok(out)
    });

    let mut classes: BTreeMap<Word, CensusClass> = BTreeMap::new();
    let mut valid = 0u64;
    for (word, curve) in found
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
    {
        valid += 1;
        classes
            .entry(word.clone())
            .or_insert_with(|| CensusClass {
                canonical: word,
                representative: curve,
                assemblies: 0,
                blocks: vec![block],
                families: Vec::new(),
            })
            .assemblies += 1;
    }
    Ok(Census {
        order,
        blocks: vec![block],
        assemblies_tried: (ops.len() as u64).pow(4),
        valid_assemblies: valid,
        classes: classes.into_values().collect(),
    })
}

fn attach_families(census: &mut Census) -> Result<()> {
    let forms = Family::all()
        .map(|k| Ok((k, canonical_form(&generate(k, census.order)?)?)))
        .collect::<Result<Vec<_>>>()?;
    for class in &mut census.classes {
        class.families = forms
            .iter()
            .filter(|(_, w)| *w == class.canonical)
            .map(|(k, _)| *k)
            .collect();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curves_equivalent;

    #[test]
    fn eight_diagrams_per_block() {
        for block in Block::BOTH {
            let ds = enumerate_diagrams(block).unwrap();
            assert_eq!(ds.len(), 8, "{block}");
            assert!(ds.iter().all(BVectorDiagram::is_continuous));
            let labels: BTreeSet<&str> = ds.iter().map(|d| d.label.as_str()).collect();
            assert_eq!(labels.len(), 8);
        }
    }

    #[test]
    fn six_classes_per_block() {
        for block in Block::BOTH {
            let q = quotient_diagrams(&enumerate_diagrams(block).unwrap());
            assert_eq!(q.classes.len(), 6, "{block}");
            assert_eq!(q.enantiomorphic_pairs().len(), 2);
        }
    }

    #[test]
    fn counts_do_not_depend_on_block_order() {
        for (block, order) in [(Block::Proper, 1), (Block::Proper, 3), (Block::Improper, 3)] {
            let ds = enumerate_diagrams_at(block, order).unwrap();
            assert_eq!(ds.len(), 8);
            assert_eq!(quotient_diagrams(&ds).classes.len(), 6);
        }
    }

    #[test]
    fn computed_pairs() {
        let pairs = |b| quotient_diagrams(&enumerate_diagrams(b).unwrap()).enantiomorphic_pairs();
        let s = |a: &str, b: &str| (a.to_string(), b.to_string());
        assert_eq!(pairs(Block::Proper), vec![s("1a", "4b"), s("2a", "3b")]);
        assert_eq!(pairs(Block::Improper), vec![s("1a", "4b"), s("2a", "3b")]);
    }

    #[test]
    fn anchor_shapes() {
        for d in enumerate_diagrams(Block::Proper).unwrap() {
            for (a, b) in d.anchors() {
                assert!(a.is_corner() && b.is_corner(), "{}", d.label);
            }
        }
        let improper = enumerate_diagrams(Block::Improper).unwrap();
        // The improper block runs between two edge midpoints, so anchors
        // alone cannot tell its mirror images apart.
        assert!(improper.iter().all(|d| d
            .anchors()
            .iter()
            .all(|(a, b)| !a.is_corner() && !b.is_corner())));
        assert_eq!(improper[0].anchors(), improper[2].anchors());
        assert_ne!(improper[0].vectors, improper[2].vectors);
    }

    #[test]
    fn realized_diagrams_match_curve_classes() {
        for block in Block::BOTH {
            let ds = enumerate_diagrams(block).unwrap();
            let q = quotient_diagrams(&ds);
            let forms: BTreeSet<Word> = ds
                .iter()
                .map(|d| canonical_form(&realize_diagram(d).unwrap()).unwrap())
                .collect();
            assert_eq!(forms.len(), q.classes.len());
            let census =
                brute_force_census(REFERENCE_BLOCK_ORDER + 1, block, Strategy::default()).unwrap();
            let census_forms: BTreeSet<Word> =
                census.classes.iter().map(|c| c.canonical.clone()).collect();
            assert_eq!(forms, census_forms, "{block}");
        }
    }

    #[test]
    fn canonical_form_separates_equivalence() {
        let h = generate(Family::HILBERT, 3).unwrap();
        let op = SymmetryOp::all()[5];
        let t = transform_curve(op, &h);
        assert_eq!(canonical_form(&h).unwrap(), canonical_form(&t).unwrap());
        let m = generate(Family::MOORE, 3).unwrap();
        assert_ne!(canonical_form(&h).unwrap(), canonical_form(&m).unwrap());
        assert!(curves_equivalent(&h, &m).unwrap().is_none());
    }

    #[test]
    fn order_three_census_is_the_twelve_families() {
        let c = pooled_census(3, Strategy::default()).unwrap();
        assert_eq!(c.classes.len(), 12);
        assert!(c.is_bijective_with_families());
        assert_eq!(c.assemblies_tried, 2 * 16u64.pow(4));
    }

    #[test]
    fn order_two_blocks_coincide() {
        let p = brute_force_census(2, Block::Proper, Strategy::default()).unwrap();
        let i = brute_force_census(2, Block::Improper, Strategy::default()).unwrap();
        assert_eq!(p.classes.len(), 6);
        assert_eq!(
            p.classes,
            i.classes
                .iter()
                .map(|c| CensusClass {
                    blocks: vec![Block::Proper],
                    ..c.clone()
                })
                .collect::<Vec<_>>()
        );
        assert_eq!(
            pooled_census(2, Strategy::default()).unwrap().classes.len(),
            6
        );
    }

    #[test]
    fn strategies_agree() {
        let a = brute_force_census(3, Block::Improper, Strategy::Sequential).unwrap();
        let b = brute_force_census(3, Block::Improper, Strategy::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn census_order_guard() {
        assert_eq!(
            brute_force_census(4, Block::Proper, Strategy::default()),
            Err(Error::CensusTooLarge(4))
        );
        assert!(brute_force_census(1, Block::Proper, Strategy::default()).is_err());
    }
}
