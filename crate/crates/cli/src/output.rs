//! Serialised forms written by the commands.

use serde::Serialize;

use hilbert_atlas::enumerate::{Census, DiagramQuotient};
use hilbert_atlas::index_map::LocalityReport;
use hilbert_atlas::verify::Report;
use hilbert_atlas::{Cell, Curve};

pub const SCHEMA: &str = "hilbert-atlas/1";

fn pair(c: Cell) -> [u32; 2] {
    [c.col, c.row]
}

#[derive(Serialize)]
pub struct CurveJson {
    schema: &'static str,
    family: Option<u32>,
    order: u32,
    entry: [u32; 2],
    exit: [u32; 2],
    cells: Vec<[u32; 2]>,
}

impl From<&Curve> for CurveJson {
    fn from(c: &Curve) -> Self {
        CurveJson {
            schema: SCHEMA,
            family: c.family().map(u32::from),
            order: c.order(),
            entry: pair(c.entry()),
            exit: pair(c.exit()),
            cells: c.cells().iter().map(|&c| pair(c)).collect(),
        }
    }
}

pub fn csv(c: &Curve) -> String {
    let mut out = String::with_capacity(c.len() * 8);
    for cell in c.cells() {
        out.push_str(&format!("{},{}\n", cell.col, cell.row));
    }
    out
}

#[derive(Serialize)]
pub struct VerifyJson<'a> {
    pub schema: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub reports: &'a [Report],
}

#[derive(Serialize)]
pub struct BlockSummary {
    pub block: String,
    pub diagrams: usize,
    pub classes: usize,
    pub quotient: DiagramQuotient,
    pub pairs: Vec<String>,
    pub reference_pairings: Vec<Vec<String>>,
    pub pairing_matches_reference: bool,
}

#[derive(Serialize)]
pub struct CensusJson {
    pub schema: &'static str,
    pub blocks: Vec<BlockSummary>,
    pub brute_force: Census,
    pub expected_classes: usize,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct LocalityJson<'a> {
    pub schema: &'static str,
    #[serde(flatten)]
    pub report: &'a LocalityReport,
}
