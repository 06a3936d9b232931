//! Curves as words over the stroke alphabet {u, d, r, l}, and the tag system
//! that rewrites the order-n word of a building block into the order-(n+1)
//! word of each family.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::geometry::{cell_count, Cell, Curve};

/// One unit pen stroke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Up,
    Down,
    Right,
    Left,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::Up, Move::Down, Move::Right, Move::Left];

    pub fn letter(self) -> u8 {
        match self {
            Move::Up => b'u',
            Move::Down => b'd',
            Move::Right => b'r',
            Move::Left => b'l',
        }
    }

    pub fn from_letter(b: u8) -> Result<Move> {
        match b {
            b'u' => Ok(Move::Up),
            b'd' => Ok(Move::Down),
            b'r' => Ok(Move::Right),
            b'l' => Ok(Move::Left),
            other => Err(Error::InvalidLetter(char::from(other))),
        }
    }

    pub fn opposite(self) -> Move {
        match self {
            Move::Up => Move::Down,
            Move::Down => Move::Up,
            Move::Right => Move::Left,
            Move::Left => Move::Right,
        }
    }

    pub fn delta(self) -> (i64, i64) {
        match self {
            Move::Up => (0, 1),
            Move::Down => (0, -1),
            Move::Right => (1, 0),
            Move::Left => (-1, 0),
        }
    }

    /// The stroke from `a` to an edge-adjacent `b`.
    pub fn between(a: Cell, b: Cell) -> Option<Move> {
        match (
            i64::from(b.col) - i64::from(a.col),
            i64::from(b.row) - i64::from(a.row),
        ) {
            (0, 1) => Some(Move::Up),
            (0, -1) => Some(Move::Down),
            (1, 0) => Some(Move::Right),
            (-1, 0) => Some(Move::Left),
            _ => None,
        }
    }
}

/// A finite sequence of strokes, stored as ASCII letters. Byte order makes
/// the derived `Ord` lexicographic with `d < l < r < u`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn with_capacity(n: usize) -> Self {
        Word(Vec::with_capacity(n))
    }

    pub fn from_moves(moves: impl IntoIterator<Item = Move>) -> Self {
        Word(moves.into_iter().map(Move::letter).collect())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        // Only the four ASCII letters are ever stored.
        std::str::from_utf8(&self.0).expect("words are ASCII")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn moves(&self) -> impl DoubleEndedIterator<Item = Move> + '_ {
        self.0
            .iter()
            .map(|&b| Move::from_letter(b).expect("words hold valid letters"))
    }

    pub fn push(&mut self, m: Move) {
        self.0.push(m.letter());
    }

    fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// The same strokes in back-to-front order, letters unchanged.
    pub fn reversed_order(&self) -> Word {
        let mut bytes = self.0.clone();
        bytes.reverse();
        Word(bytes)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.bytes()
            .map(Move::from_letter)
            .collect::<Result<Vec<_>>>()
            .map(Word::from_moves)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Letterwise bijections of the alphabet used by the recurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Morphism {
    Identity,
    O,
    A,
    G,
    X,
    F,
    M,
    Y,
}

impl Morphism {
    pub const ALL: [Morphism; 8] = [
        Morphism::Identity,
        Morphism::O,
        Morphism::A,
        Morphism::G,
        Morphism::X,
        Morphism::F,
        Morphism::M,
        Morphism::Y,
    ];

    /// Images of (u, r, d, l).
    fn table(self) -> [Move; 4] {
        use Move::*;
        match self {
            Morphism::Identity => [Up, Right, Down, Left],
            Morphism::O => [Right, Up, Left, Down],
            Morphism::A => [Left, Down, Right, Up],
            Morphism::G => [Left, Up, Right, Down],
            Morphism::X => [Right, Down, Left, Up],
            Morphism::F => [Down, Left, Up, Right],
            Morphism::M => [Down, Right, Up, Left],
            Morphism::Y => [Up, Left, Down, Right],
        }
    }

    pub fn apply(self, m: Move) -> Move {
        let t = self.table();
        match m {
            Move::Up => t[0],
            Move::Right => t[1],
            Move::Down => t[2],
            Move::Left => t[3],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Morphism::Identity => "id",
            Morphism::O => "o",
            Morphism::A => "a",
            Morphism::G => "g",
            Morphism::X => "x",
            Morphism::F => "f",
            Morphism::M => "m",
            Morphism::Y => "y",
        }
    }
}

pub fn apply_morphism(m: Morphism, w: &Word) -> Word {
    Word::from_moves(w.moves().map(|mv| m.apply(mv)))
}

/// Retraces a walk from its exit back to its entry: strokes in reverse
/// order, each replaced by its opposite.
pub fn reversion_word(w: &Word) -> Word {
    Word::from_moves(w.moves().rev().map(Move::opposite))
}

/// One block of a recurrence: the building-block word under a morphism,
/// read back to front when `overlined`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub morphism: Morphism,
    pub overlined: bool,
}

const fn t(morphism: Morphism) -> Term {
    Term {
        morphism,
        overlined: false,
    }
}

const fn bar(morphism: Morphism) -> Term {
    Term {
        morphism,
        overlined: true,
    }
}

/// Connector strokes between the four blocks.
pub const CONNECTORS: [Move; 3] = [Move::Up, Move::Right, Move::Down];

use Morphism::{Identity as I, A, F, G, M, O, X, Y};

/// The four terms of each family's recurrence.
pub const RECURRENCES: [[Term; 4]; 12] = [
    [t(O), t(I), t(I), t(A)],
    [t(G), t(G), t(X), t(X)],
    [t(F), t(I), t(I), t(F)],
    [t(M), t(G), t(X), t(M)],
    [t(O), t(I), t(I), t(F)],
    [t(M), t(G), t(X), t(X)],
    [t(F), bar(M), t(I), bar(Y)],
    [t(F), bar(M), t(I), t(A)],
    [bar(G), bar(M), t(I), t(A)],
    [bar(O), t(G), bar(A), t(X)],
    [t(M), t(G), bar(A), bar(I)],
    [t(M), t(G), bar(A), t(X)],
];

impl Term {
    /// An overlined block reads the morphism image back to front. The
    /// letterwise inversion a geometric reversion also needs is already
    /// carried by the morphism in the table, so this equals
    /// `reversion_word(apply_morphism(F ∘ morphism, w))`.
    pub fn render(self, w: &Word) -> Word {
        let image = apply_morphism(self.morphism, w);
        if self.overlined {
            image.reversed_order()
        } else {
            image
        }
    }
}

/// One rewriting step of family `family`'s recurrence. `block` must be the
/// order-n word of the family's building block.
pub fn expand(family: Family, block: &Word) -> Word {
    let terms = &RECURRENCES[family.index()];
    let mut out = Word::with_capacity(4 * block.len() + 3);
    for (i, term) in terms.iter().enumerate() {
        out.extend_from(&term.render(block));
        if let Some(&c) = CONNECTORS.get(i) {
            out.push(c);
        }
    }
    out
}

/// The word of the only order-1 curve.
pub fn base_word() -> Word {
    Word::from_moves([Move::Up, Move::Right, Move::Down])
}

/// Largest order whose word fits comfortably in memory.
pub const MAX_WORD_ORDER: u32 = 15;

/// The word of the order-`order` curve of `family`, built purely by
/// rewriting.
pub fn word_for(family: Family, order: u32) -> Result<Word> {
    if !(1..=MAX_WORD_ORDER).contains(&order) {
        return Err(Error::OrderOutOfRange(order, 1, MAX_WORD_ORDER));
    }
    Ok(match order {
        1 => base_word(),
        _ if family.is_proper() => expand(family, &hilbert_word(order - 1)),
        _ => expand(family, &word_for(Family::IMPROPER_BLOCK, order - 1)?),
    })
}

fn hilbert_word(order: u32) -> Word {
    (1..order).fold(base_word(), |w, _| expand(Family::HILBERT, &w))
}

/// Walks `w` from `entry` on the order-`order` grid.
pub fn word_to_path(w: &Word, entry: Cell, order: u32) -> Result<Curve> {
    let expected = cell_count(order) - 1;
    if w.len() != expected {
        return Err(Error::WordLength {
            order,
            expected,
            actual: w.len(),
        });
    }
    let side = i64::from(crate::geometry::grid_side(order));
    if !entry.in_grid(order) {
        return Err(Error::CellOutOfGrid { cell: entry, order });
    }
    let mut seen = vec![false; cell_count(order)];
    let slot = |c: Cell| c.row as usize * side as usize + c.col as usize;
    seen[slot(entry)] = true;
    let mut cells = Vec::with_capacity(expected + 1);
    cells.push(entry);
    let (mut x, mut y) = (i64::from(entry.col), i64::from(entry.row));
    for (step, mv) in w.moves().enumerate() {
        let (dx, dy) = mv.delta();
        x += dx;
        y += dy;
        if !(0..side).contains(&x) || !(0..side).contains(&y) {
            return Err(Error::WalkOutOfBounds(step));
        }
        let cell = Cell::new(x as u32, y as u32);
        if std::mem::replace(&mut seen[slot(cell)], true) {
            return Err(Error::SelfIntersection(step));
        }
        cells.push(cell);
    }
    Curve::new(order, cells)
}

/// Reads the strokes between consecutive cells. Fails at the first pair
/// that is not edge-adjacent.
pub fn path_to_word(c: &Curve) -> Result<Word> {
    let mut w = Word::with_capacity(c.len().saturating_sub(1));
    for (i, pair) in c.cells().windows(2).enumerate() {
        w.push(Move::between(pair[0], pair[1]).ok_or(Error::WalkOutOfBounds(i))?);
    }
    Ok(w)
}
