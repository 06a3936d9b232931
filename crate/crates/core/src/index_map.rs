//! Index ↔ cell conversion by base-4 digit descent through a family's
//! lineage, and locality metrics built on it.
//!
//! Digit `j` (most significant first) of an index picks the quadrant at
//! level `j`. When the quadrants chosen so far carry an odd number of
//! reversals, the block below is traversed backwards, so the next digit is
//! complemented (`d ↦ 3 - d`) before it picks a quadrant.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::family::{Family, FamilyTable};
use crate::generator::{generate, Lineage, BASE_CELLS};
use crate::geometry::{cell_count, Cell};

/// Largest order whose indices fit in a `u64`.
pub const MAX_INDEX_ORDER: u32 = 31;

fn check_order(order: u32) -> Result<()> {
    if (1..=MAX_INDEX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::OrderOutOfRange(order, 1, MAX_INDEX_ORDER))
    }
}

/// The cell at position `index` of the order-`order` curve of `family`.
pub fn index_to_cell(family: Family, order: u32, index: u64) -> Result<Cell> {
    check_order(order)?;
    if index >> (2 * order) != 0 {
        return Err(Error::IndexOutOfRange { index, order });
    }
    let table = FamilyTable::standard_ref();
    let lineage = Lineage::of(family);
    let levels = order as usize;
    let mut quadrants = [0usize; MAX_INDEX_ORDER as usize];
    let mut flipped = false;
    for (level, q) in quadrants.iter_mut().enumerate().take(levels) {
        let digit = ((index >> (2 * (levels - 1 - level))) & 3) as usize;
        *q = if flipped { 3 - digit } else { digit };
        if level + 1 < levels {
            flipped ^= table.spec(lineage.family_at(level as u32)).rules[*q].reversed;
        }
    }
    let mut cell = BASE_CELLS[quadrants[levels - 1]];
    for level in (0..levels - 1).rev() {
        let rule = table.spec(lineage.family_at(level as u32)).rules[quadrants[level]];
        cell = rule.map_cell(cell, (levels - 1 - level) as u32)?;
    }
    Ok(cell)
}

/// Inverse of [`index_to_cell`]: descends quadrant by quadrant, undoing each
/// rule with the transpose of its matrix.
pub fn cell_to_index(family: Family, order: u32, cell: Cell) -> Result<u64> {
    check_order(order)?;
    if !cell.in_grid(order) {
        return Err(Error::CellOutOfGrid { cell, order });
    }
    let table = FamilyTable::standard_ref();
    let lineage = Lineage::of(family);
    let mut index = 0u64;
    let mut flipped = false;
    let mut current = cell;
    for level in 0..order - 1 {
        let block_order = order - 1 - level;
        let q = current.quadrant(block_order + 1);
        let rule = table.spec(lineage.family_at(level)).rules[q];
        let digit = if flipped { 3 - q } else { q };
        index = (index << 2) | digit as u64;
        current = rule.unmap_cell(current, block_order)?;
        flipped ^= rule.reversed;
    }
    let q = BASE_CELLS
        .iter()
        .position(|&c| c == current)
        .expect("an order-1 cell is one of the four base cells");
    let digit = if flipped { 3 - q } else { q };
    Ok((index << 2) | digit as u64)
}

/// Batch form of [`index_to_cell`], results in input order.
pub fn indices_to_cells(
    family: Family,
    order: u32,
    indices: &[u64],
    strategy: Strategy,
) -> Result<Vec<Cell>> {
    strategy
        .map(indices, |&i| index_to_cell(family, order, i))
        .into_iter()
        .collect()
}

/// Batch form of [`cell_to_index`].
pub fn cells_to_indices(
    family: Family,
    order: u32,
    cells: &[Cell],
    strategy: Strategy,
) -> Result<Vec<u64>> {
    strategy
        .map(cells, |&c| cell_to_index(family, order, c))
        .into_iter()
        .collect()
}

/// A non-negative rational kept exact until it is printed. Serialises as
/// `{"num", "den", "value"}` with `value` rounded to six places.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den > 0, "zero denominator");
        Ratio { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Decimal rendering rounded half-up to `places` digits.
    pub fn to_fixed(self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let scaled = (self.num * scale * 2 + self.den) / (self.den * 2);
        let int = scaled / scale;
        let frac = scaled % scale;
        format!("{int}.{frac:0width$}", width = places as usize)
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Ratio", 3)?;
        st.serialize_field("num", &(self.num as u64))?;
        st.serialize_field("den", &(self.den as u64))?;
        st.serialize_field("value", &self.to_fixed(6))?;
        st.end()
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_fixed(6))
    }
}

/// Statistics of `|cell(i) - cell(i + lag)|² / lag` over index pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LagStats {
    pub lag: u64,
    pub pairs: u64,
    pub worst: Ratio,
    pub mean: Ratio,
}

/// How the locality figures are defined; carried in every report.
pub const LOCALITY_DEFINITION: &str = "artifact-defined: squared Euclidean cell distance divided by \
index distance, worst and mean over index pairs at each lag; jumps are lag-1 pairs that do not share an edge";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalityReport {
    pub family: Family,
    pub order: u32,
    pub definition: &'static str,
    pub exhaustive: bool,
    pub lags: Vec<LagStats>,
    pub jumps: u64,
}

/// Orders up to this one are measured over every index pair.
pub const EXHAUSTIVE_LOCALITY_ORDER: u32 = 6;
/// Pairs drawn per lag above [`EXHAUSTIVE_LOCALITY_ORDER`].
pub const LOCALITY_SAMPLES: u64 = 100_000;
const LOCALITY_SEED: u64 = 0x4869_6c62_6572_7421;

/// Lags 1, 2, 4, … up to `4^⌊n/2⌋`.
pub fn locality_lags(order: u32) -> Vec<u64> {
    (0..=2 * (order / 2)).map(|e| 1u64 << e).collect()
}

fn squared_distance(a: Cell, b: Cell) -> u128 {
    let dx = u128::from(a.col.abs_diff(b.col));
    let dy = u128::from(a.row.abs_diff(b.row));
    dx * dx + dy * dy
}

#[derive(Default)]
struct Accumulator {
    pairs: u64,
    max: u128,
    sum: u128,
    jumps: u64,
}

impl Accumulator {
    fn add(&mut self, a: Cell, b: Cell) {
        let d = squared_distance(a, b);
        self.pairs += 1;
        self.sum += d;
        self.max = self.max.max(d);
        if d != 1 {
            self.jumps += 1;
        }
    }

    fn stats(&self, lag: u64) -> LagStats {
        let lag = u128::from(lag);
        LagStats {
            lag: lag as u64,
            pairs: self.pairs,
            worst: Ratio::new(self.max, lag),
            mean: Ratio::new(self.sum, lag * u128::from(self.pairs.max(1))),
        }
    }
}

pub fn locality_report(family: Family, order: u32) -> Result<LocalityReport> {
    locality_report_with(family, order, Strategy::default())
}

/// Exhaustive over the materialised curve up to order 6, fixed-seed sampling
/// through [`index_to_cell`] above.
pub fn locality_report_with(
    family: Family,
    order: u32,
    strategy: Strategy,
) -> Result<LocalityReport> {
    check_order(order)?;
    let lags = locality_lags(order);
    let exhaustive = order <= EXHAUSTIVE_LOCALITY_ORDER;
    let accs: Vec<Accumulator> = if exhaustive {
        let curve = generate(family, order)?;
        let cells = curve.cells();
        strategy.map(&lags, |&lag| {
            let mut acc = Accumulator::default();
            for (a, b) in cells.iter().zip(&cells[lag as usize..]) {
                acc.add(*a, *b);
            }
            acc
        })
    } else {
        let total = 1u64 << (2 * order);
        strategy
            .map(&lags, |&lag| -> Result<Accumulator> {
                let mut rng = ChaCha8Rng::seed_from_u64(LOCALITY_SEED ^ lag);
                let mut acc = Accumulator::default();
                for _ in 0..LOCALITY_SAMPLES {
                    let i = rng.gen_range(0..total - lag);
                    acc.add(
                        index_to_cell(family, order, i)?,
                        index_to_cell(family, order, i + lag)?,
                    );
                }
                Ok(acc)
            })
            .into_iter()
            .collect::<Result<_>>()?
    };
    let jumps = accs.first().map_or(0, |a| a.jumps);
    Ok(LocalityReport {
        family,
        order,
        definition: LOCALITY_DEFINITION,
        exhaustive,
        lags: lags.iter().zip(&accs).map(|(&l, a)| a.stats(l)).collect(),
        jumps,
    })
}

/// Every index of an order-`order` curve, for exhaustive sweeps.
pub fn all_indices(order: u32) -> std::ops::Range<u64> {
    0..cell_count(order) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(k: u32) -> Family {
        Family::new(k).unwrap()
    }

    #[test]
    fn order_one_reads_the_base_curve() {
        assert_eq!(index_to_cell(fam(0), 1, 0).unwrap(), Cell::new(0, 0));
        assert_eq!(index_to_cell(fam(0), 1, 3).unwrap(), Cell::new(1, 0));
        assert_eq!(cell_to_index(fam(0), 1, Cell::new(1, 0)).unwrap(), 3);
    }

    #[test]
    fn walked_word_examples() {
        // Five strokes r,u,l,u,u from (0,0) reach (0,3).
        assert_eq!(index_to_cell(fam(0), 2, 5).unwrap(), Cell::new(0, 3));
        assert_eq!(cell_to_index(fam(0), 2, Cell::new(0, 3)).unwrap(), 5);
        assert_eq!(cell_to_index(fam(1), 2, Cell::new(1, 0)).unwrap(), 0);
    }

    #[test]
    fn range_errors() {
        assert_eq!(
            index_to_cell(fam(0), 2, 16),
            Err(Error::IndexOutOfRange {
                index: 16,
                order: 2
            })
        );
        assert!(matches!(
            cell_to_index(fam(0), 2, Cell::new(4, 0)),
            Err(Error::CellOutOfGrid { .. })
        ));
        assert!(index_to_cell(fam(0), 32, 0).is_err());
        assert!(index_to_cell(fam(0), 0, 0).is_err());
    }

    #[test]
    fn top_order_does_not_overflow() {
        let last = (1u64 << 62) - 1;
        for k in Family::all() {
            let c = index_to_cell(k, MAX_INDEX_ORDER, last).unwrap();
            assert_eq!(cell_to_index(k, MAX_INDEX_ORDER, c).unwrap(), last);
        }
    }

    #[test]
    fn ratio_rendering() {
        assert_eq!(Ratio::new(1, 3).to_fixed(6), "0.333333");
        assert_eq!(Ratio::new(2, 3).to_fixed(6), "0.666667");
        assert_eq!(Ratio::new(5, 1).to_string(), "5.000000");
        assert!(Ratio::new(1, 2) < Ratio::new(2, 3));
    }

    #[test]
    fn lags_follow_the_order() {
        assert_eq!(locality_lags(1), vec![1]);
        assert_eq!(locality_lags(2), vec![1, 2, 4]);
        assert_eq!(locality_lags(5), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn lag_one_is_unit_for_valid_curves() {
        for k in Family::all() {
            let r = locality_report(k, 4).unwrap();
            assert_eq!(r.jumps, 0);
            assert_eq!(r.lags[0].worst, Ratio::new(1, 1));
            assert_eq!(r.lags[0].mean.to_fixed(6), "1.000000");
            assert!(r.exhaustive);
        }
    }

    #[test]
    fn sampled_report_is_deterministic() {
        let a = locality_report_with(fam(2), 8, Strategy::Sequential).unwrap();
        let b = locality_report_with(fam(2), 8, Strategy::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(!a.exhaustive);
        assert_eq!(a.jumps, 0);
        assert_eq!(a.lags[0].pairs, LOCALITY_SAMPLES);
    }
}
