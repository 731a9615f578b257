//! Paths in pattern graphs: the unique tree path between two squares, the six
//! exit-to-exit lengths, and the nested per-level paths that approximate an
//! arc between two exits of the limit set.
//!
//! Lengths are vertex counts (number of white squares on the path).

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{LabyError, Result};
use crate::grid::{compose_with, CellAddr, Limits, Pattern};
use crate::props::{check_tree, exit_set, validate, Exit, ExitSet};

/// Simple path of white squares, both endpoints included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePath {
    pub squares: Vec<CellAddr>,
}

impl TreePath {
    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn first(&self) -> Option<CellAddr> {
        self.squares.first().copied()
    }

    pub fn last(&self) -> Option<CellAddr> {
        self.squares.last().copied()
    }

    /// Consecutive squares share a side and no square repeats.
    pub fn is_simple_walk(&self) -> bool {
        let steps_ok = self.squares.windows(2).all(|w| w[0].manhattan(w[1]) == 1);
        let mut sorted = self.squares.clone();
        sorted.sort_unstable();
        sorted.dedup();
        steps_ok && sorted.len() == self.squares.len()
    }
}

// Parent links for the DFS walk: 0 = unvisited, 5 = root.
const DIR_STEPS: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const UNSEEN: u8 = 0;
const ROOT: u8 = 5;

fn step(c: CellAddr, d: usize) -> CellAddr {
    let (dx, dy) = DIR_STEPS[d];
    CellAddr::new(c.col.wrapping_add_signed(dx), c.row.wrapping_add_signed(dy))
}

/// Depth-first walk from `from` until `to` is reached; the parent chain is the
/// path. On a tree this is the unique path. No precondition checks.
pub(crate) fn walk_tree(p: &Pattern, from: CellAddr, to: CellAddr) -> Option<Vec<CellAddr>> {
    let mut parent = vec![UNSEEN; p.width() * p.width()];
    parent[p.index(from)] = ROOT;
    let mut stack = vec![from];
    let mut found = from == to;
    while let Some(c) = stack.pop() {
        if found {
            break;
        }
        for d in 0..4 {
            let n = step(c, d);
            if !p.is_white(n) {
                continue;
            }
            let slot = &mut parent[p.index(n)];
            if *slot == UNSEEN {
                // store the direction that leads back to c
                *slot = (d ^ 1) as u8 + 1;
                if n == to {
                    found = true;
                    break;
                }
                stack.push(n);
            }
        }
    }
    if !found {
        return None;
    }
    let mut path = vec![to];
    let mut c = to;
    while parent[p.index(c)] != ROOT {
        c = step(c, usize::from(parent[p.index(c)] - 1));
        path.push(c);
    }
    path.reverse();
    Some(path)
}

/// The unique path between two white squares of a tree pattern.
pub fn tree_path(p: &Pattern, from: CellAddr, to: CellAddr) -> Result<TreePath> {
    for c in [from, to] {
        if !p.is_white(c) {
            return Err(LabyError::NotWhite(c));
        }
    }
    if !check_tree(p) {
        return Err(LabyError::NotTree);
    }
    let squares = walk_tree(p, from, to).ok_or(LabyError::Unreachable(from, to))?;
    Ok(TreePath { squares })
}

/// Breadth-first shortest-path vertex count. Independent of [`tree_path`];
/// on a tree both agree.
pub fn bfs_oracle(p: &Pattern, from: CellAddr, to: CellAddr) -> Result<usize> {
    for c in [from, to] {
        if !p.is_white(c) {
            return Err(LabyError::NotWhite(c));
        }
    }
    let mut dist = vec![u32::MAX; p.width() * p.width()];
    dist[p.index(from)] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(c) = queue.pop_front() {
        let d = dist[p.index(c)];
        if c == to {
            return Ok(d as usize + 1);
        }
        for n in p.white_neighbors(c) {
            let slot = &mut dist[p.index(n)];
            if *slot == u32::MAX {
                *slot = d + 1;
                queue.push_back(n);
            }
        }
    }
    Err(LabyError::Unreachable(from, to))
}

/// The six unordered pairs of distinct exits, in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExitPair {
    TopBottom,
    LeftRight,
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl ExitPair {
    pub const ALL: [ExitPair; 6] = [
        ExitPair::TopBottom,
        ExitPair::LeftRight,
        ExitPair::TopLeft,
        ExitPair::TopRight,
        ExitPair::BottomLeft,
        ExitPair::BottomRight,
    ];

    pub fn exits(self) -> (Exit, Exit) {
        match self {
            ExitPair::TopBottom => (Exit::Top, Exit::Bottom),
            ExitPair::LeftRight => (Exit::Left, Exit::Right),
            ExitPair::TopLeft => (Exit::Top, Exit::Left),
            ExitPair::TopRight => (Exit::Top, Exit::Right),
            ExitPair::BottomLeft => (Exit::Bottom, Exit::Left),
            ExitPair::BottomRight => (Exit::Bottom, Exit::Right),
        }
    }

    /// `TB`, `LR`, `TL`, `TR`, `BL` or `BR`.
    pub fn label(self) -> &'static str {
        ["TB", "LR", "TL", "TR", "BL", "BR"][self.index()]
    }

    /// `None` when `a == b`.
    pub fn of(a: Exit, b: Exit) -> Option<ExitPair> {
        ExitPair::ALL.into_iter().find(|p| {
            let (x, y) = p.exits();
            (x, y) == (a, b) || (y, x) == (a, b)
        })
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Vertex counts of the six exit-to-exit paths, in [`ExitPair::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExitPathLengths {
    pub tb: usize,
    pub lr: usize,
    pub tl: usize,
    pub tr: usize,
    pub bl: usize,
    pub br: usize,
}

impl ExitPathLengths {
    pub fn as_array(&self) -> [usize; 6] {
        [self.tb, self.lr, self.tl, self.tr, self.bl, self.br]
    }

    pub fn get(&self, pair: ExitPair) -> usize {
        self.as_array()[pair.index()]
    }

    /// The common value when all six agree.
    pub fn common(&self) -> Option<usize> {
        let a = self.as_array();
        a.iter().all(|&x| x == a[0]).then_some(a[0])
    }
}

fn labyrinth_exits(p: &Pattern) -> Result<ExitSet> {
    let report = validate(p);
    if !report.is_labyrinth() {
        return Err(LabyError::NotLabyrinth);
    }
    Ok(report.exits.expect("labyrinth has exits"))
}

pub fn exit_path_lengths(p: &Pattern) -> Result<ExitPathLengths> {
    let exits = labyrinth_exits(p)?;
    let len = |pair: ExitPair| {
        let (a, b) = pair.exits();
        walk_tree(p, exits.get(a), exits.get(b)).map_or(0, |v| v.len())
    };
    Ok(ExitPathLengths {
        tb: len(ExitPair::TopBottom),
        lr: len(ExitPair::LeftRight),
        tl: len(ExitPair::TopLeft),
        tr: len(ExitPair::TopRight),
        bl: len(ExitPair::BottomLeft),
        br: len(ExitPair::BottomRight),
    })
}

/// Squares on one arm of the snake cross pattern `A_k`, central square excluded.
pub fn arm_square_count(k: u64) -> Result<u64> {
    if k < 1 {
        return Err(LabyError::BadParameter("k must be at least 1".into()));
    }
    Ok(2 * k * k + 2 * k + 3)
}

/// Per-level exit-to-exit paths of a composed sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcApproximation {
    pub from: Exit,
    pub to: Exit,
    pub levels: Vec<TreePath>,
    /// `m(n)` for each level.
    pub widths: Vec<usize>,
}

impl ArcApproximation {
    /// Squares of level `n + 1` that do not lie inside a level-`n` path square,
    /// as `(level index, square)`.
    pub fn nesting_violations(&self) -> Vec<(usize, CellAddr)> {
        let mut out = Vec::new();
        for n in 1..self.levels.len() {
            let scale = self.widths[n] / self.widths[n - 1];
            let mut coarse: Vec<CellAddr> = self.levels[n - 1].squares.clone();
            coarse.sort_unstable();
            for &c in &self.levels[n].squares {
                let parent = CellAddr::new(c.col / scale, c.row / scale);
                if coarse.binary_search(&parent).is_err() {
                    out.push((n, c));
                }
            }
        }
        out
    }

    pub fn is_nested(&self) -> bool {
        self.nesting_violations().is_empty()
    }
}

fn check_inputs(patterns: &[Pattern], from: Exit, to: Exit) -> Result<Vec<ExitSet>> {
    if patterns.is_empty() {
        return Err(LabyError::BadParameter("empty pattern sequence".into()));
    }
    if from == to {
        return Err(LabyError::BadParameter("exits must differ".into()));
    }
    patterns.iter().map(labyrinth_exits).collect()
}

/// Materializes each level and extracts the exit-to-exit tree path.
pub fn arc_approximation(patterns: &[Pattern], from: Exit, to: Exit) -> Result<ArcApproximation> {
    arc_approximation_with(patterns, from, to, &Limits::default())
}

pub fn arc_approximation_with(patterns: &[Pattern], from: Exit, to: Exit, limits: &Limits) -> Result<ArcApproximation> {
    check_inputs(patterns, from, to)?;
    limits.check(patterns[0].width() as u64)?;
    let mut levels = Vec::with_capacity(patterns.len());
    let mut widths = Vec::with_capacity(patterns.len());
    let mut acc = patterns[0].clone();
    for (n, p) in patterns.iter().enumerate() {
        if n > 0 {
            acc = compose_with(&acc, p, limits)?;
        }
        let exits = exit_set(&acc)?;
        let squares = walk_tree(&acc, exits.get(from), exits.get(to))
            .ok_or(LabyError::Unreachable(exits.get(from), exits.get(to)))?;
        levels.push(TreePath { squares });
        widths.push(acc.width());
    }
    Ok(ArcApproximation {
        from,
        to,
        levels,
        widths,
    })
}

/// Side of `c` facing its path neighbour `n`.
fn side_towards(c: CellAddr, n: CellAddr) -> Exit {
    if n.row > c.row {
        Exit::Top
    } else if n.row < c.row {
        Exit::Bottom
    } else if n.col < c.col {
        Exit::Left
    } else {
        Exit::Right
    }
}

/// (entry side, exit side) for each square of a path running from exit `from` to exit `to`.
fn square_sides(path: &[CellAddr], from: Exit, to: Exit) -> Vec<(Exit, Exit)> {
    let n = path.len();
    (0..n)
        .map(|i| {
            let entry = if i == 0 {
                from
            } else {
                side_towards(path[i], path[i - 1])
            };
            let exit = if i + 1 == n {
                to
            } else {
                side_towards(path[i], path[i + 1])
            };
            (entry, exit)
        })
        .collect()
}

/// Inner through-paths of one pattern, indexed by exit pair.
struct ThroughPaths {
    width: usize,
    paths: [Vec<CellAddr>; 6],
}

impl ThroughPaths {
    fn new(p: &Pattern, exits: &ExitSet) -> Self {
        let paths = ExitPair::ALL.map(|pair| {
            let (a, b) = pair.exits();
            walk_tree(p, exits.get(a), exits.get(b)).expect("labyrinth is connected")
        });
        Self {
            width: p.width(),
            paths,
        }
    }

    /// Path from side `a` to side `b`, oriented.
    fn oriented(&self, a: Exit, b: Exit) -> impl Iterator<Item = CellAddr> + '_ {
        let pair = ExitPair::of(a, b).expect("entry and exit sides differ");
        let path = &self.paths[pair.index()];
        let forward = pair.exits().0 == a;
        let n = path.len();
        (0..n).map(move |i| if forward { path[i] } else { path[n - 1 - i] })
    }
}

/// Refines a level path by replacing each square with the inner pattern's
/// through-path between the square's entry and exit sides.
fn substitute(coarse: &[CellAddr], from: Exit, to: Exit, inner: &ThroughPaths) -> Vec<CellAddr> {
    let w = inner.width;
    let mut fine = Vec::new();
    for (&c, (a, b)) in coarse.iter().zip(square_sides(coarse, from, to)) {
        fine.extend(
            inner
                .oriented(a, b)
                .map(|s| CellAddr::new(c.col * w + s.col, c.row * w + s.row)),
        );
    }
    fine
}

/// Same levels as [`arc_approximation`], built by substituting through-paths
/// instead of searching materialized grids. Only the paths are stored, so
/// this is not bound by the width cap.
pub fn arc_by_substitution(patterns: &[Pattern], from: Exit, to: Exit) -> Result<ArcApproximation> {
    let exits = check_inputs(patterns, from, to)?;
    let mut levels: Vec<TreePath> = Vec::with_capacity(patterns.len());
    let mut widths = Vec::with_capacity(patterns.len());
    let mut width = 1usize;
    for (p, e) in patterns.iter().zip(&exits) {
        width = width.checked_mul(p.width()).ok_or(LabyError::TooLarge {
            width: u64::MAX,
            cap: usize::MAX as u64,
        })?;
        let through = ThroughPaths::new(p, e);
        let squares = match levels.last() {
            None => through.oriented(from, to).collect(),
            Some(prev) => substitute(&prev.squares, from, to, &through),
        };
        levels.push(TreePath { squares });
        widths.push(width);
    }
    Ok(ArcApproximation {
        from,
        to,
        levels,
        widths,
    })
}

/// Exact exit-to-exit path length at the last level, via counts of squares by
/// their (entry, exit) pair. Nothing is materialized, so any depth works.
pub fn exit_path_length_by_substitution(patterns: &[Pattern], from: Exit, to: Exit) -> Result<BigUint> {
    let exits = check_inputs(patterns, from, to)?;
    // transfer[t][u]: squares of type u on the inner path of type t
    let transfer = |p: &Pattern, e: &ExitSet| -> [[u64; 6]; 6] {
        let through = ThroughPaths::new(p, e);
        ExitPair::ALL.map(|pair| {
            let (a, b) = pair.exits();
            let path: Vec<CellAddr> = through.oriented(a, b).collect();
            let mut row = [0u64; 6];
            for (x, y) in square_sides(&path, a, b) {
                row[ExitPair::of(x, y).expect("distinct sides").index()] += 1;
            }
            row
        })
    };
    let start = ExitPair::of(from, to).expect("distinct exits");
    let mut counts: [BigUint; 6] = Default::default();
    counts[start.index()] = BigUint::one();
    for (p, e) in patterns.iter().zip(&exits) {
        let t = transfer(p, e);
        let mut next: [BigUint; 6] = Default::default();
        for (from_type, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (to_type, &k) in t[from_type].iter().enumerate() {
                if k > 0 {
                    next[to_type] += c * k;
                }
            }
        }
        counts = next;
    }
    Ok(counts.iter().sum())
}
