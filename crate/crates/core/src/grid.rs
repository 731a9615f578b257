//! Square grids of black and white cells, the substitution product that
//! builds mixed labyrinth sets, and the plain-text pattern format.
//!
//! Coordinates are Cartesian: `row == 0` is the bottom row. The text format
//! lists rows top first; [`read_pattern`] and [`write_pattern`] own that flip.

use std::fmt;
use std::str::FromStr;

use crate::error::{LabyError, Result};

/// Default cap on the width of any materialized grid.
pub const DEFAULT_MAX_WIDTH: u64 = 1 << 16;

/// Environment variable that overrides [`DEFAULT_MAX_WIDTH`] in [`Limits::from_env`].
pub const MAX_WIDTH_ENV: &str = "LABY_MAX_WIDTH";

/// Address of a square: column `col` counted from the left, row `row`
/// counted from the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellAddr {
    pub col: usize,
    pub row: usize,
}

impl CellAddr {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }

    /// Manhattan distance; 1 means the squares share a side.
    pub fn manhattan(self, other: CellAddr) -> usize {
        self.col.abs_diff(other.col) + self.row.abs_diff(other.row)
    }
}

impl fmt::Display for CellAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.col, self.row)
    }
}

/// Resource limits for materialized grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_width: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

impl Limits {
    /// Reads `LABY_MAX_WIDTH`, falling back to the default when unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(MAX_WIDTH_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&w| w >= 1)
            .map(|max_width| Self { max_width })
            .unwrap_or_default()
    }

    pub fn check(&self, width: u64) -> Result<()> {
        if width > self.max_width {
            return Err(LabyError::TooLarge {
                width,
                cap: self.max_width,
            });
        }
        Ok(())
    }
}

/// An `m`-pattern: an `m x m` grid of cells with at least one white cell.
///
/// Rows are stored as packed `u64` words; bits past `width` in the last word
/// of a row are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    width: usize,
    stride: usize,
    bits: Vec<u64>,
}

fn words_for(width: usize) -> usize {
    width.div_ceil(64)
}

impl Pattern {
    /// All-black grid. Only for internal construction; callers must make sure
    /// the result ends up nonempty.
    pub(crate) fn blank(width: usize) -> Self {
        let stride = words_for(width);
        Self {
            width,
            stride,
            bits: vec![0; stride * width],
        }
    }

    /// Builds a pattern whose white cells are exactly `white_cells`.
    pub fn new(width: usize, white_cells: impl IntoIterator<Item = CellAddr>) -> Result<Self> {
        if width == 0 {
            return Err(LabyError::BadParameter("width must be at least 1".into()));
        }
        let mut p = Self::blank(width);
        for c in white_cells {
            if c.col >= width || c.row >= width {
                return Err(LabyError::BadAddress {
                    col: c.col,
                    row: c.row,
                    width,
                });
            }
            p.set(c, true);
        }
        p.ensure_nonempty()?;
        Ok(p)
    }

    pub fn from_fn(width: usize, mut white: impl FnMut(CellAddr) -> bool) -> Result<Self> {
        if width == 0 {
            return Err(LabyError::BadParameter("width must be at least 1".into()));
        }
        let mut p = Self::blank(width);
        for row in 0..width {
            for col in 0..width {
                let c = CellAddr::new(col, row);
                if white(c) {
                    p.set(c, true);
                }
            }
        }
        p.ensure_nonempty()?;
        Ok(p)
    }

    /// The all-white 1-pattern, identity for [`compose`].
    pub fn unit() -> Self {
        let mut p = Self::blank(1);
        p.set(CellAddr::new(0, 0), true);
        p
    }

    pub(crate) fn ensure_nonempty(&self) -> Result<()> {
        if self.bits.iter().all(|&w| w == 0) {
            return Err(LabyError::EmptyPattern);
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, c: CellAddr) -> bool {
        c.col < self.width && c.row < self.width
    }

    /// Whether `c` is white. Out-of-range addresses read as black.
    #[inline]
    pub fn is_white(&self, c: CellAddr) -> bool {
        if !self.contains(c) {
            return false;
        }
        let w = self.bits[c.row * self.stride + c.col / 64];
        (w >> (c.col % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, c: CellAddr, white: bool) {
        let idx = c.row * self.stride + c.col / 64;
        let mask = 1u64 << (c.col % 64);
        if white {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    /// Copy of this pattern with one cell recoloured.
    pub fn with_cell(&self, c: CellAddr, white: bool) -> Result<Self> {
        if !self.contains(c) {
            return Err(LabyError::BadAddress {
                col: c.col,
                row: c.row,
                width: self.width,
            });
        }
        let mut p = self.clone();
        p.set(c, white);
        p.ensure_nonempty()?;
        Ok(p)
    }

    /// Packed words of one row (bit `i` of the row is column `i`).
    pub fn row_words(&self, row: usize) -> &[u64] {
        &self.bits[row * self.stride..(row + 1) * self.stride]
    }

    pub fn white_count(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn black_count(&self) -> u64 {
        (self.width as u64).pow(2) - self.white_count()
    }

    /// White cells in row-major order, bottom row first.
    pub fn whites(&self) -> impl Iterator<Item = CellAddr> + '_ {
        (0..self.width).flat_map(move |row| {
            self.row_words(row)
                .iter()
                .enumerate()
                .flat_map(move |(wi, &word)| BitIter(word).map(move |b| CellAddr::new(wi * 64 + b, row)))
        })
    }

    /// White side-neighbours of `c`.
    pub fn white_neighbors(&self, c: CellAddr) -> impl Iterator<Item = CellAddr> + '_ {
        let m = self.width;
        let cand = [
            (c.col + 1 < m).then(|| CellAddr::new(c.col + 1, c.row)),
            (c.col > 0).then(|| CellAddr::new(c.col - 1, c.row)),
            (c.row + 1 < m).then(|| CellAddr::new(c.col, c.row + 1)),
            (c.row > 0).then(|| CellAddr::new(c.col, c.row - 1)),
        ];
        cand.into_iter().flatten().filter(move |&n| self.is_white(n))
    }

    /// Dense index for per-cell side tables.
    #[inline]
    pub fn index(&self, c: CellAddr) -> usize {
        c.row * self.width + c.col
    }

    #[inline]
    pub fn addr(&self, index: usize) -> CellAddr {
        CellAddr::new(index % self.width, index / self.width)
    }

    /// Every white cell of `self` is white in `other` (same width required).
    pub fn is_subset_of(&self, other: &Pattern) -> bool {
        self.width == other.width && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Left-right mirror image.
    pub fn mirrored(&self) -> Pattern {
        let m = self.width;
        let mut p = Self::blank(m);
        for c in self.whites() {
            p.set(CellAddr::new(m - 1 - c.col, c.row), true);
        }
        p
    }

    /// Quarter turn counterclockwise about the grid centre.
    pub fn rotated_ccw(&self) -> Pattern {
        let m = self.width;
        let mut p = Self::blank(m);
        for c in self.whites() {
            p.set(CellAddr::new(m - 1 - c.row, c.col), true);
        }
        p
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern(\n{})", write_pattern(self))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_pattern(self))
    }
}

impl FromStr for Pattern {
    type Err = LabyError;

    fn from_str(s: &str) -> Result<Self> {
        read_pattern(s)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Builds a pattern from its white cells.
pub fn make_pattern(width: usize, white_cells: impl IntoIterator<Item = CellAddr>) -> Result<Pattern> {
    Pattern::new(width, white_cells)
}

/// ORs `len` bits of `src` into `dst` starting at bit `offset`.
fn or_bits_at(dst: &mut [u64], offset: usize, src: &[u64]) {
    let shift = offset % 64;
    let base = offset / 64;
    for (i, &word) in src.iter().enumerate() {
        if word == 0 {
            continue;
        }
        let at = base + i;
        dst[at] |= word << shift;
        if shift != 0 && at + 1 < dst.len() {
            dst[at + 1] |= word >> (64 - shift);
        }
    }
}

/// Substitutes `inner` into every white cell of `outer`; black cells of
/// `outer` become black blocks.
pub fn compose(outer: &Pattern, inner: &Pattern) -> Result<Pattern> {
    compose_with(outer, inner, &Limits::default())
}

pub fn compose_with(outer: &Pattern, inner: &Pattern, limits: &Limits) -> Result<Pattern> {
    let wi = inner.width;
    let width = (outer.width as u64).checked_mul(wi as u64).ok_or(LabyError::TooLarge {
        width: u64::MAX,
        cap: limits.max_width,
    })?;
    limits.check(width)?;
    let width = width as usize;
    let mut out = Pattern::blank(width);
    let stride = out.stride;
    for (row, dst) in out.bits.chunks_exact_mut(stride).enumerate() {
        let (jo, ji) = (row / wi, row % wi);
        let src = inner.row_words(ji);
        if src.iter().all(|&w| w == 0) {
            continue;
        }
        for (wo, &word) in outer.row_words(jo).iter().enumerate() {
            for b in BitIter(word) {
                or_bits_at(dst, (wo * 64 + b) * wi, src);
            }
        }
    }
    Ok(out)
}

/// A mixed labyrinth set (or any composed set) of level `level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    pub level: usize,
    pub pattern: Pattern,
    pub widths: Vec<usize>,
}

impl LevelSet {
    pub fn width(&self) -> usize {
        self.pattern.width()
    }
}

/// Left fold of [`compose`] over `patterns`.
pub fn compose_sequence(patterns: &[Pattern]) -> Result<LevelSet> {
    compose_sequence_with(patterns, &Limits::default())
}

pub fn compose_sequence_with(patterns: &[Pattern], limits: &Limits) -> Result<LevelSet> {
    let (first, rest) = patterns
        .split_first()
        .ok_or_else(|| LabyError::BadParameter("empty pattern sequence".into()))?;
    limits.check(first.width() as u64)?;
    let mut acc = first.clone();
    for p in rest {
        acc = compose_with(&acc, p, limits)?;
    }
    Ok(LevelSet {
        level: patterns.len(),
        pattern: acc,
        widths: patterns.iter().map(Pattern::width).collect(),
    })
}

/// Serializes to the text format: width line, then rows top first,
/// `.` white and `#` black, each line newline-terminated.
pub fn write_pattern(p: &Pattern) -> String {
    let m = p.width();
    let mut s = String::with_capacity((m + 1) * m + 8);
    s.push_str(&m.to_string());
    s.push('\n');
    for row in (0..m).rev() {
        for col in 0..m {
            s.push(if p.is_white(CellAddr::new(col, row)) { '.' } else { '#' });
        }
        s.push('\n');
    }
    s
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> LabyError {
    LabyError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parses the text format. Line and column numbers in errors are 1-based.
pub fn read_pattern(text: &str) -> Result<Pattern> {
    let body = text.strip_suffix('\n').ok_or_else(|| {
        let line = text.split('\n').count();
        parse_err(
            line,
            text.rsplit('\n').next().map_or(0, str::len) + 1,
            "missing final newline",
        )
    })?;
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or("");
    if header.is_empty() {
        return Err(parse_err(1, 1, "expected decimal width"));
    }
    if let Some((i, ch)) = header.char_indices().find(|(_, ch)| !ch.is_ascii_digit()) {
        return Err(parse_err(1, i + 1, format!("unexpected character {ch:?} in width")));
    }
    let width: usize = header.parse().map_err(|_| parse_err(1, 1, "width out of range"))?;
    if width == 0 {
        return Err(parse_err(1, 1, "width must be at least 1"));
    }
    let mut p = Pattern::blank(width);
    let mut rows = 0;
    for (t, line) in lines.enumerate() {
        let line_no = t + 2;
        if t >= width {
            return Err(parse_err(line_no, 1, format!("expected {width} rows, found more")));
        }
        let mut n = 0;
        for (i, ch) in line.chars().enumerate() {
            if i >= width {
                return Err(parse_err(line_no, i + 1, format!("row length exceeds width {width}")));
            }
            match ch {
                '.' => p.set(CellAddr::new(i, width - 1 - t), true),
                '#' => {}
                _ => return Err(parse_err(line_no, i + 1, format!("unexpected character {ch:?}"))),
            }
            n += 1;
        }
        if n < width {
            return Err(parse_err(
                line_no,
                n + 1,
                format!("row length {n} is shorter than width {width}"),
            ));
        }
        rows += 1;
    }
    if rows < width {
        return Err(parse_err(rows + 2, 1, format!("expected {width} rows, found {rows}")));
    }
    p.ensure_nonempty()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cross3() -> Pattern {
        let cells = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)].map(|(c, r)| CellAddr::new(c, r));
        make_pattern(3, cells).unwrap()
    }

    #[test]
    fn trivial_pattern() {
        let p = make_pattern(1, [CellAddr::new(0, 0)]).unwrap();
        assert_eq!(p, Pattern::unit());
        assert_eq!(p.white_count(), 1);
    }

    #[test]
    fn cross_has_five_whites_and_black_corners() {
        let p = cross3();
        assert_eq!(p.white_count(), 5);
        for c in [(0, 0), (2, 0), (0, 2), (2, 2)] {
            assert!(!p.is_white(CellAddr::new(c.0, c.1)));
        }
    }

    #[test]
    fn empty_and_out_of_range_rejected() {
        assert_eq!(make_pattern(3, []), Err(LabyError::EmptyPattern));
        assert!(matches!(
            make_pattern(3, [CellAddr::new(3, 0)]),
            Err(LabyError::BadAddress {
                col: 3,
                row: 0,
                width: 3
            })
        ));
    }

    #[test]
    fn compose_with_unit_is_identity() {
        let p = cross3();
        assert_eq!(compose(&p, &Pattern::unit()).unwrap(), p);
        assert_eq!(compose(&Pattern::unit(), &p).unwrap(), p);
    }

    #[test]
    fn cross_squared_is_plus_shaped() {
        let ls = compose_sequence(&[cross3(), cross3()]).unwrap();
        assert_eq!(ls.level, 2);
        assert_eq!(ls.widths, vec![3, 3]);
        let p = &ls.pattern;
        assert_eq!(p.width(), 9);
        // Brute force: a cell is white iff both digit pairs are on the cross.
        let on = |c: usize, r: usize| c == 1 || r == 1;
        for row in 0..9 {
            for col in 0..9 {
                let expect = on(col / 3, row / 3) && on(col % 3, row % 3);
                assert_eq!(p.is_white(CellAddr::new(col, row)), expect, "({col},{row})");
            }
        }
        assert_eq!(p.white_count(), 25);
    }

    #[test]
    fn compose_respects_cap() {
        let big = Pattern::from_fn(300, |_| true).unwrap();
        let err = compose_with(&big, &big, &Limits { max_width: 1000 }).unwrap_err();
        assert_eq!(
            err,
            LabyError::TooLarge {
                width: 90_000,
                cap: 1000
            }
        );
    }

    #[test]
    fn compose_crosses_word_boundaries() {
        // inner width 70 spans two words per row; outer copies land at odd offsets.
        let inner = Pattern::from_fn(70, |c| (c.col * 7 + c.row * 3) % 5 != 0).unwrap();
        let outer = Pattern::from_fn(3, |c| c.col != 1 || c.row == 2).unwrap();
        let p = compose(&outer, &inner).unwrap();
        for row in 0..210 {
            for col in 0..210 {
                let expect = outer.is_white(CellAddr::new(col / 70, row / 70))
                    && inner.is_white(CellAddr::new(col % 70, row % 70));
                assert_eq!(p.is_white(CellAddr::new(col, row)), expect);
            }
        }
    }

    #[test]
    fn read_uses_top_first_rows() {
        let p = read_pattern("3\n.#.\n...\n.#.\n").unwrap();
        assert!(!p.is_white(CellAddr::new(1, 2)));
        assert!(!p.is_white(CellAddr::new(1, 0)));
        assert_eq!(p.white_count(), 7);
    }

    #[test]
    fn read_reports_row_length() {
        let err = read_pattern("3\n.#.\n....\n.#.\n").unwrap_err();
        assert!(matches!(err, LabyError::Parse { line: 3, col: 4, .. }), "{err:?}");
        let err = read_pattern("3\n.#.\n..\n.#.\n").unwrap_err();
        assert!(matches!(err, LabyError::Parse { line: 3, col: 3, .. }), "{err:?}");
    }

    #[test]
    fn read_rejects_malformed() {
        for bad in [
            "3\n.#.\n...\n.#.",        // no final newline
            "3\n.#.\n...\n",           // missing row
            "3\n.#.\n...\n.#.\n...\n", // extra row
            "3 \n.#.\n...\n.#.\n",     // stray whitespace
            "3\n.#.\n.x.\n.#.\n",      // bad char
            "3\r\n.#.\n...\n.#.\n",
            "\n",
            "0\n",
        ] {
            assert!(matches!(read_pattern(bad), Err(LabyError::Parse { .. })), "{bad:?}");
        }
        assert_eq!(read_pattern("2\n##\n##\n"), Err(LabyError::EmptyPattern));
    }

    #[test]
    fn rotation_and_mirror() {
        let p = read_pattern("3\n.##\n.##\n..#\n").unwrap();
        assert_eq!(write_pattern(&p.rotated_ccw()), "3\n###\n##.\n...\n");
        assert_eq!(write_pattern(&p.mirrored()), "3\n##.\n##.\n#..\n");
        let r4 = p.rotated_ccw().rotated_ccw().rotated_ccw().rotated_ccw();
        assert_eq!(r4, p);
    }

    fn arb_pattern(max_w: usize) -> impl Strategy<Value = Pattern> {
        (1..=max_w).prop_flat_map(|w| {
            proptest::collection::vec(any::<bool>(), w * w).prop_filter_map("nonempty", move |cells| {
                Pattern::from_fn(w, |c| cells[c.row * w + c.col]).ok()
            })
        })
    }

    proptest! {
        #[test]
        fn compose_is_associative(a in arb_pattern(4), b in arb_pattern(4), c in arb_pattern(4)) {
            let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn white_count_multiplies(a in arb_pattern(6), b in arb_pattern(6)) {
            let p = compose(&a, &b).unwrap();
            prop_assert_eq!(p.white_count(), a.white_count() * b.white_count());
            prop_assert_eq!(p.width(), a.width() * b.width());
        }

        #[test]
        fn text_round_trip(p in arb_pattern(9)) {
            let s = write_pattern(&p);
            prop_assert_eq!(read_pattern(&s).unwrap(), p);
            prop_assert_eq!(write_pattern(&read_pattern(&s).unwrap()), s);
        }
    }
}
