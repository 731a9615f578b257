//! The labyrinth properties (tree, exits, corner), blockedness, and the core
//! of a labyrinth pattern.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{LabyError, Result};
use crate::grid::{CellAddr, Pattern};
use crate::paths::walk_tree;

/// Read-only view of the pattern graph: white squares joined when they share a side.
#[derive(Debug, Clone, Copy)]
pub struct PatternGraph<'a> {
    pattern: &'a Pattern,
}

pub fn adjacency(p: &Pattern) -> PatternGraph<'_> {
    PatternGraph { pattern: p }
}

impl<'a> PatternGraph<'a> {
    pub fn pattern(&self) -> &'a Pattern {
        self.pattern
    }

    pub fn vertex_count(&self) -> u64 {
        self.pattern.white_count()
    }

    /// Counted with word operations: horizontal edges are `row & (row >> 1)`,
    /// vertical edges are `row_j & row_{j+1}`.
    pub fn edge_count(&self) -> u64 {
        let p = self.pattern;
        let m = p.width();
        let mut edges = 0u64;
        for row in 0..m {
            let words = p.row_words(row);
            for (i, &w) in words.iter().enumerate() {
                let carry = words.get(i + 1).map_or(0, |&n| n << 63);
                edges += u64::from((w & ((w >> 1) | carry)).count_ones());
            }
            if row + 1 < m {
                edges += words
                    .iter()
                    .zip(p.row_words(row + 1))
                    .map(|(a, b)| u64::from((a & b).count_ones()))
                    .sum::<u64>();
            }
        }
        edges
    }

    pub fn neighbors(&self, c: CellAddr) -> impl Iterator<Item = CellAddr> + 'a {
        self.pattern.white_neighbors(c)
    }

    pub fn degree(&self, c: CellAddr) -> usize {
        self.neighbors(c).count()
    }

    /// Each undirected edge once, as (lower-left, upper-right) pairs.
    pub fn edges(&self) -> impl Iterator<Item = (CellAddr, CellAddr)> + 'a {
        let p = self.pattern;
        p.whites().flat_map(move |c| {
            [CellAddr::new(c.col + 1, c.row), CellAddr::new(c.col, c.row + 1)]
                .into_iter()
                .filter(move |&n| p.is_white(n))
                .map(move |n| (c, n))
        })
    }

    /// Number of white cells reachable from the first white cell.
    fn reachable_from_first(&self) -> u64 {
        let p = self.pattern;
        let Some(start) = p.whites().next() else {
            return 0;
        };
        let mut seen = vec![false; p.width() * p.width()];
        let mut queue = VecDeque::from([start]);
        seen[p.index(start)] = true;
        let mut count = 0u64;
        while let Some(c) = queue.pop_front() {
            count += 1;
            for n in p.white_neighbors(c) {
                let i = p.index(n);
                if !seen[i] {
                    seen[i] = true;
                    queue.push_back(n);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.reachable_from_first() == self.vertex_count()
    }
}

/// True iff the pattern graph is connected and has `|V| - 1` edges.
pub fn check_tree(p: &Pattern) -> bool {
    let g = adjacency(p);
    let v = g.vertex_count();
    v > 0 && g.edge_count() == v - 1 && g.is_connected()
}

/// One of the four exits of a labyrinth pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exit {
    Top,
    Bottom,
    Left,
    Right,
}

impl Exit {
    pub const ALL: [Exit; 4] = [Exit::Top, Exit::Bottom, Exit::Left, Exit::Right];

    pub fn name(self) -> &'static str {
        match self {
            Exit::Top => "top",
            Exit::Bottom => "bottom",
            Exit::Left => "left",
            Exit::Right => "right",
        }
    }
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Exit {
    type Err = LabyError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top" => Ok(Exit::Top),
            "bottom" => Ok(Exit::Bottom),
            "left" => Ok(Exit::Left),
            "right" => Ok(Exit::Right),
            _ => Err(LabyError::BadParameter(format!("unknown exit {s:?}"))),
        }
    }
}

/// All exit pairs of a pattern: columns holding a vertical pair and rows
/// holding a horizontal pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitPairs {
    pub vertical: Vec<usize>,
    pub horizontal: Vec<usize>,
}

impl ExitPairs {
    pub fn is_unique(&self) -> bool {
        self.vertical.len() == 1 && self.horizontal.len() == 1
    }
}

pub fn find_exits(p: &Pattern) -> ExitPairs {
    let m = p.width();
    let top = p.row_words(m - 1);
    let bottom = p.row_words(0);
    let vertical = (0..m)
        .filter(|&col| {
            let (w, b) = (col / 64, col % 64);
            (top[w] & bottom[w]) >> b & 1 == 1
        })
        .collect();
    let horizontal = (0..m)
        .filter(|&row| p.is_white(CellAddr::new(0, row)) && p.is_white(CellAddr::new(m - 1, row)))
        .collect();
    ExitPairs { vertical, horizontal }
}

/// The four exit squares of a pattern with unique exit pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExitSet {
    pub top: CellAddr,
    pub bottom: CellAddr,
    pub left: CellAddr,
    pub right: CellAddr,
}

impl ExitSet {
    pub fn from_lines(width: usize, exit_col: usize, exit_row: usize) -> Self {
        Self {
            top: CellAddr::new(exit_col, width - 1),
            bottom: CellAddr::new(exit_col, 0),
            left: CellAddr::new(0, exit_row),
            right: CellAddr::new(width - 1, exit_row),
        }
    }

    pub fn get(&self, e: Exit) -> CellAddr {
        match e {
            Exit::Top => self.top,
            Exit::Bottom => self.bottom,
            Exit::Left => self.left,
            Exit::Right => self.right,
        }
    }

    pub fn exit_col(&self) -> usize {
        self.top.col
    }

    pub fn exit_row(&self) -> usize {
        self.left.row
    }

    pub fn cells(&self) -> [CellAddr; 4] {
        Exit::ALL.map(|e| self.get(e))
    }
}

/// Exit squares, or `MissingExits` unless there is exactly one pair per direction.
pub fn exit_set(p: &Pattern) -> Result<ExitSet> {
    let pairs = find_exits(p);
    if !pairs.is_unique() {
        return Err(LabyError::MissingExits {
            vertical: pairs.vertical.len(),
            horizontal: pairs.horizontal.len(),
        });
    }
    Ok(ExitSet::from_lines(p.width(), pairs.vertical[0], pairs.horizontal[0]))
}

/// No two white squares at diagonally opposite corners.
pub fn check_corner(p: &Pattern) -> bool {
    let m = p.width() - 1;
    let w = |c, r| p.is_white(CellAddr::new(c, r));
    !(w(0, 0) && w(m, m)) && !(w(0, m) && w(m, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Blockedness {
    pub h_blocked: bool,
    pub v_blocked: bool,
    /// Black cells in the row of the horizontal exit pair.
    pub h_black: usize,
    /// Black cells in the column of the vertical exit pair.
    pub v_black: usize,
}

pub fn check_blocked(p: &Pattern) -> Result<Blockedness> {
    let exits = exit_set(p)?;
    let m = p.width();
    let h_black = (0..m)
        .filter(|&c| !p.is_white(CellAddr::new(c, exits.exit_row())))
        .count();
    let v_black = (0..m)
        .filter(|&r| !p.is_white(CellAddr::new(exits.exit_col(), r)))
        .count();
    Ok(Blockedness {
        h_blocked: h_black > 0,
        v_blocked: v_black > 0,
        h_black,
        v_black,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Width,
    Tree,
    Exits,
    Corner,
}

/// A failed check, optionally pinned to a cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub check: Check,
    pub at: Option<CellAddr>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.at {
            Some(c) => write!(f, "{:?} at {}: {}", self.check, c, self.message),
            None => write!(f, "{:?}: {}", self.check, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub width: usize,
    pub is_tree: bool,
    pub vertical_pairs: usize,
    pub horizontal_pairs: usize,
    pub corner_ok: bool,
    pub h_blocked: bool,
    pub v_blocked: bool,
    pub exits: Option<ExitSet>,
    pub failures: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_labyrinth(&self) -> bool {
        self.is_tree && self.vertical_pairs == 1 && self.horizontal_pairs == 1 && self.corner_ok && self.width >= 3
    }

    /// Human-readable report, one fact per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let yn = |b: bool| if b { "yes" } else { "no" };
        s.push_str(&format!("width: {}\n", self.width));
        s.push_str(&format!("labyrinth: {}\n", yn(self.is_labyrinth())));
        s.push_str(&format!("tree: {}\n", yn(self.is_tree)));
        s.push_str(&format!("vertical exit pairs: {}\n", self.vertical_pairs));
        s.push_str(&format!("horizontal exit pairs: {}\n", self.horizontal_pairs));
        s.push_str(&format!("corner property: {}\n", yn(self.corner_ok)));
        if let Some(e) = self.exits {
            s.push_str(&format!("exit column: {}\nexit row: {}\n", e.exit_col(), e.exit_row()));
            s.push_str(&format!("horizontally blocked: {}\n", yn(self.h_blocked)));
            s.push_str(&format!("vertically blocked: {}\n", yn(self.v_blocked)));
        }
        for d in &self.failures {
            s.push_str(&format!("failure: {d}\n"));
        }
        s
    }

    /// `key=value` lines with the keys tree, v_pairs, h_pairs, corner,
    /// h_blocked, v_blocked, exit_col, exit_row (missing exits print `none`).
    pub fn to_kv(&self) -> String {
        let opt = |v: Option<usize>| v.map_or_else(|| "none".to_string(), |v| v.to_string());
        format!(
            "tree={}\nv_pairs={}\nh_pairs={}\ncorner={}\nh_blocked={}\nv_blocked={}\nexit_col={}\nexit_row={}\n",
            self.is_tree,
            self.vertical_pairs,
            self.horizontal_pairs,
            self.corner_ok,
            self.h_blocked,
            self.v_blocked,
            opt(self.exits.map(|e| e.exit_col())),
            opt(self.exits.map(|e| e.exit_row())),
        )
    }
}

/// A white cell that is unreachable from the first white cell, or one that
/// sits on a cycle.
fn locate_tree_failure(p: &Pattern) -> Option<(CellAddr, &'static str)> {
    let m = p.width();
    let start = p.whites().next()?;
    let mut seen = vec![false; m * m];
    seen[p.index(start)] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for n in p.white_neighbors(c) {
            if !std::mem::replace(&mut seen[p.index(n)], true) {
                queue.push_back(n);
            }
        }
    }
    if let Some(c) = p.whites().find(|&c| !seen[p.index(c)]) {
        return Some((c, "not connected to the rest of the pattern"));
    }
    // Strip leaves; whatever survives lies on or between cycles.
    let mut degree: Vec<u8> = vec![0; m * m];
    let mut leaves = Vec::new();
    for c in p.whites() {
        let d = p.white_neighbors(c).count() as u8;
        degree[p.index(c)] = d;
        if d <= 1 {
            leaves.push(c);
        }
    }
    let mut removed = vec![false; m * m];
    while let Some(c) = leaves.pop() {
        removed[p.index(c)] = true;
        for n in p.white_neighbors(c) {
            let i = p.index(n);
            if !removed[i] {
                degree[i] -= 1;
                if degree[i] == 1 {
                    leaves.push(n);
                }
            }
        }
    }
    p.whites()
        .find(|&c| !removed[p.index(c)])
        .map(|c| (c, "lies on a cycle"))
}

pub fn validate(p: &Pattern) -> ValidationReport {
    let m = p.width();
    let mut failures = Vec::new();
    if m < 3 {
        failures.push(Diagnostic {
            check: Check::Width,
            at: None,
            message: format!("width {m} is below 3"),
        });
    }
    let is_tree = check_tree(p);
    if !is_tree {
        let (at, message) = match locate_tree_failure(p) {
            Some((c, msg)) => (Some(c), msg.to_string()),
            None => (None, "graph is not a tree".to_string()),
        };
        failures.push(Diagnostic {
            check: Check::Tree,
            at,
            message,
        });
    }
    let pairs = find_exits(p);
    if pairs.vertical.len() != 1 {
        failures.push(Diagnostic {
            check: Check::Exits,
            at: pairs.vertical.get(1).map(|&c| CellAddr::new(c, m - 1)),
            message: format!(
                "{} vertical exit pairs in columns {:?}",
                pairs.vertical.len(),
                pairs.vertical
            ),
        });
    }
    if pairs.horizontal.len() != 1 {
        failures.push(Diagnostic {
            check: Check::Exits,
            at: pairs.horizontal.get(1).map(|&r| CellAddr::new(0, r)),
            message: format!(
                "{} horizontal exit pairs in rows {:?}",
                pairs.horizontal.len(),
                pairs.horizontal
            ),
        });
    }
    let corner_ok = check_corner(p);
    if !corner_ok {
        let at = if p.is_white(CellAddr::new(0, 0)) && p.is_white(CellAddr::new(m - 1, m - 1)) {
            CellAddr::new(0, 0)
        } else {
            CellAddr::new(0, m - 1)
        };
        failures.push(Diagnostic {
            check: Check::Corner,
            at: Some(at),
            message: "white squares at diagonally opposite corners".into(),
        });
    }
    let (exits, blocked) = match exit_set(p) {
        Ok(e) => (Some(e), check_blocked(p).ok()),
        Err(_) => (None, None),
    };
    ValidationReport {
        width: m,
        is_tree,
        vertical_pairs: pairs.vertical.len(),
        horizontal_pairs: pairs.horizontal.len(),
        corner_ok,
        h_blocked: blocked.is_some_and(|b| b.h_blocked),
        v_blocked: blocked.is_some_and(|b| b.v_blocked),
        exits,
        failures,
    }
}

/// The minimal labyrinth sub-pattern: the union of the six exit-to-exit
/// paths of the tree.
pub fn core(p: &Pattern) -> Result<Pattern> {
    let report = validate(p);
    if !report.is_labyrinth() {
        return Err(LabyError::NotLabyrinth);
    }
    let exits = report.exits.expect("labyrinth has exits").cells();
    let mut out = Pattern::blank(p.width());
    for (i, &a) in exits.iter().enumerate() {
        for &b in &exits[i + 1..] {
            for c in walk_tree(p, a, b).expect("tree is connected") {
                out.set(c, true);
            }
        }
    }
    Ok(out)
}
