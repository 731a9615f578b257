//! Deterministic SVG output for patterns, exit paths and nested arcs.
//!
//! Black cells are drawn as one `rect` each over a white background, in
//! row-major order from the top row down. Image row 0 is pattern row
//! `width - 1`.

use std::fmt::Write as _;

use crate::error::{LabyError, Result};
use crate::grid::{CellAddr, Pattern};
use crate::paths::{ArcApproximation, TreePath};
use crate::props::{core, exit_set, Exit};

/// Largest pattern width drawn cell by cell.
pub const MAX_RENDER_WIDTH: u64 = 2048;
/// Largest image side in pixels.
pub const MAX_SIDE_PX: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    pub white: String,
    pub black: String,
    pub path: String,
    /// Top, bottom, left, right.
    pub arms: [String; 4],
    pub exits: String,
    pub center: String,
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            white: "#ffffff".into(),
            black: "#000000".into(),
            path: "#d62728".into(),
            arms: ["#1f77b4".into(), "#2ca02c".into(), "#ff7f0e".into(), "#9467bd".into()],
            exits: "#e6c300".into(),
            center: "#8c564b".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub cell_px: u32,
    pub palette: Palette,
    pub overlay: Option<TreePath>,
    pub grid_lines: bool,
    /// Colour the four arms, the exits and the centre of the core.
    pub arms: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            cell_px: 8,
            palette: Palette::default(),
            overlay: None,
            grid_lines: false,
            arms: false,
        }
    }
}

fn side_px(width: usize, spec: &RenderSpec) -> Result<u64> {
    if spec.cell_px == 0 {
        return Err(LabyError::BadParameter("cell_px must be at least 1".into()));
    }
    let side = width as u64 * u64::from(spec.cell_px);
    if side > MAX_SIDE_PX {
        return Err(LabyError::TooLarge {
            width: side,
            cap: MAX_SIDE_PX,
        });
    }
    Ok(side)
}

fn header(out: &mut String, side: u64, white: &str) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" \
         viewBox=\"0 0 {side} {side}\" shape-rendering=\"crispEdges\">"
    );
    let _ = writeln!(out, "<rect width=\"{side}\" height=\"{side}\" fill=\"{white}\"/>");
}

/// Grid of `width` squares, each `px` pixels wide.
#[derive(Clone, Copy)]
struct Canvas {
    width: usize,
    px: u64,
}

/// Emits the cells in row-major top-down order.
fn cells_group(out: &mut String, id: &str, fill: &str, extra: &str, canvas: Canvas, cells: &[CellAddr]) {
    let Canvas { width, px: s } = canvas;
    let mut sorted = cells.to_vec();
    sorted.sort_unstable_by_key(|c| (std::cmp::Reverse(c.row), c.col));
    sorted.dedup();
    let _ = writeln!(out, "<g id=\"{id}\" fill=\"{fill}\"{extra}>");
    for c in sorted {
        let x = c.col as u64 * s;
        let y = (width - 1 - c.row) as u64 * s;
        let _ = writeln!(out, "<rect x=\"{x}\" y=\"{y}\" width=\"{s}\" height=\"{s}\"/>");
    }
    out.push_str("</g>\n");
}

fn grid(out: &mut String, width: usize, px: u64) {
    let side = width as u64 * px;
    let mut d = String::new();
    for i in 0..=width as u64 {
        let _ = write!(d, "M{0} 0V{side}M0 {0}H{side}", i * px);
    }
    let _ = writeln!(
        out,
        "<path d=\"{d}\" stroke=\"#808080\" stroke-width=\"1\" fill=\"none\"/>"
    );
}

/// Cells of the four arms, the exits and the centre of a labyrinth pattern.
///
/// An arm runs from the cell next to its exit up to the first core square
/// with three or more core neighbours; the centre is every core square on no
/// arm and not an exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArmCells {
    /// Top, bottom, left, right.
    pub arms: [Vec<CellAddr>; 4],
    pub exits: Vec<CellAddr>,
    pub center: Vec<CellAddr>,
}

pub fn arm_cells(p: &Pattern) -> Result<ArmCells> {
    let c = core(p)?;
    let ex = exit_set(p)?;
    let degree = |a: CellAddr| c.white_neighbors(a).count();
    let exits: Vec<CellAddr> = {
        let mut v = ex.cells().to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut arms: [Vec<CellAddr>; 4] = Default::default();
    for (slot, side) in [Exit::Top, Exit::Bottom, Exit::Left, Exit::Right]
        .into_iter()
        .enumerate()
    {
        let start = ex.get(side);
        let mut prev = start;
        let mut next: Vec<CellAddr> = c.white_neighbors(start).collect();
        while let [cur] = next[..] {
            if degree(cur) >= 3 || exits.contains(&cur) {
                break;
            }
            arms[slot].push(cur);
            next = c.white_neighbors(cur).filter(|&n| n != prev).collect();
            prev = cur;
        }
    }
    let mut on_arm: Vec<CellAddr> = arms.iter().flatten().copied().collect();
    on_arm.sort_unstable();
    let center = c
        .whites()
        .filter(|a| on_arm.binary_search(a).is_err() && !exits.contains(a))
        .collect();
    Ok(ArmCells { arms, exits, center })
}

/// SVG of a pattern: black cells over white, then optional arm colouring,
/// path overlay and grid lines.
pub fn render_pattern(p: &Pattern, spec: &RenderSpec) -> Result<String> {
    let w = p.width();
    if w as u64 > MAX_RENDER_WIDTH {
        return Err(LabyError::TooLarge {
            width: w as u64,
            cap: MAX_RENDER_WIDTH,
        });
    }
    let side = side_px(w, spec)?;
    let px = u64::from(spec.cell_px);
    let canvas = Canvas { width: w, px };
    let pal = &spec.palette;
    let mut out = String::new();
    header(&mut out, side, &pal.white);
    let blacks: Vec<CellAddr> = (0..w)
        .rev()
        .flat_map(|row| (0..w).map(move |col| CellAddr::new(col, row)))
        .filter(|&c| !p.is_white(c))
        .collect();
    cells_group(&mut out, "black", &pal.black, "", canvas, &blacks);
    if spec.arms {
        let a = arm_cells(p)?;
        for (i, name) in ["arm-top", "arm-bottom", "arm-left", "arm-right"].iter().enumerate() {
            cells_group(&mut out, name, &pal.arms[i], "", canvas, &a.arms[i]);
        }
        cells_group(&mut out, "exits", &pal.exits, "", canvas, &a.exits);
        cells_group(&mut out, "center", &pal.center, "", canvas, &a.center);
    }
    if let Some(path) = &spec.overlay {
        if let Some(c) = path.squares.iter().find(|c| !p.contains(**c)) {
            return Err(LabyError::BadAddress {
                col: c.col,
                row: c.row,
                width: w,
            });
        }
        cells_group(&mut out, "path", &pal.path, "", canvas, &path.squares);
    }
    if spec.grid_lines {
        grid(&mut out, w, px);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Opacity of level `n` (0-based): halves with each level.
pub fn level_opacity(n: usize) -> f64 {
    0.8 / f64::from(1u32 << n.min(20))
}

/// SVG of nested exit paths: level `n` is drawn at the scale of its own
/// squares, coarsest first, with opacity decreasing in `n`.
pub fn render_arc(arc: &ArcApproximation, spec: &RenderSpec) -> Result<String> {
    let w = *arc
        .widths
        .last()
        .ok_or_else(|| LabyError::BadParameter("arc has no levels".into()))?;
    let side = side_px(w, spec)?;
    let px = u64::from(spec.cell_px);
    let mut out = String::new();
    header(&mut out, side, &spec.palette.white);
    for (n, (path, &lw)) in arc.levels.iter().zip(&arc.widths).enumerate() {
        let scale = (w / lw) as u64;
        let extra = format!(" fill-opacity=\"{}\"", level_opacity(n));
        let canvas = Canvas {
            width: lw,
            px: px * scale,
        };
        cells_group(
            &mut out,
            &format!("level-{}", n + 1),
            &spec.palette.path,
            &extra,
            canvas,
            &path.squares,
        );
    }
    if spec.grid_lines {
        grid(&mut out, arc.widths[0], px * (w / arc.widths[0]) as u64);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// `(x, y, size)` of every rect inside the group with the given id.
pub fn group_rects(svg: &str, id: &str) -> Vec<(u64, u64, u64)> {
    let open = format!("<g id=\"{id}\"");
    let mut inside = false;
    let mut out = Vec::new();
    for line in svg.lines() {
        if line.starts_with(&open) {
            inside = true;
        } else if inside && line == "</g>" {
            break;
        } else if inside {
            let attr = |name: &str| -> Option<u64> {
                let key = format!("{name}=\"");
                let rest = &line[line.find(&key)? + key.len()..];
                rest[..rest.find('"')?].parse().ok()
            };
            if let (Some(x), Some(y), Some(s)) = (attr("x"), attr("y"), attr("width")) {
                out.push((x, y, s));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{plain_cross, snake_cross, SnakeSpec};
    use crate::paths::{arc_approximation, tree_path};

    #[test]
    fn plain_cross_image() {
        let p = plain_cross(1).unwrap();
        let spec = RenderSpec {
            cell_px: 10,
            ..Default::default()
        };
        let svg = render_pattern(&p, &spec).unwrap();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"30\" height=\"30\""));
        assert_eq!(
            group_rects(&svg, "black"),
            vec![(0, 0, 10), (20, 0, 10), (0, 20, 10), (20, 20, 10)]
        );
    }

    #[test]
    fn top_row_is_drawn_first() {
        let p: Pattern = "3\n...\n###\n###\n".parse().unwrap();
        let svg = render_pattern(
            &p,
            &RenderSpec {
                cell_px: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let rects = group_rects(&svg, "black");
        assert_eq!(rects[0], (0, 1, 1));
        assert_eq!(rects.len(), 6);
    }

    #[test]
    fn black_parity_and_determinism() {
        for k in 1..=4 {
            let p = snake_cross(SnakeSpec::right(k)).unwrap();
            let spec = RenderSpec::default();
            let a = render_pattern(&p, &spec).unwrap();
            assert_eq!(group_rects(&a, "black").len() as u64, p.black_count());
            assert_eq!(a, render_pattern(&p, &spec).unwrap());
        }
    }

    #[test]
    fn snake_arms() {
        for k in 1..=4u32 {
            let p = snake_cross(SnakeSpec::right(k)).unwrap();
            let a = arm_cells(&p).unwrap();
            let arm = (2 * k * k + 2 * k + 2) as usize;
            assert!(a.arms.iter().all(|v| v.len() == arm), "k = {k}");
            assert_eq!(a.exits.len(), 4);
            assert_eq!(a.center, vec![SnakeSpec::right(k).center()]);
        }
        let c = arm_cells(&plain_cross(2).unwrap()).unwrap();
        assert!(c.arms.iter().all(|v| v.len() == 1));
    }

    #[test]
    fn overlay_is_drawn() {
        let p = snake_cross(SnakeSpec::right(1)).unwrap();
        let e = exit_set(&p).unwrap();
        let path = tree_path(&p, e.top, e.bottom).unwrap();
        let spec = RenderSpec {
            overlay: Some(path),
            ..Default::default()
        };
        let svg = render_pattern(&p, &spec).unwrap();
        assert_eq!(group_rects(&svg, "path").len(), 15);
        let plain = render_pattern(&p, &RenderSpec::default()).unwrap();
        assert!(!plain.contains("id=\"path\""));
    }

    #[test]
    fn arc_layers_nest() {
        let seq = [
            snake_cross(SnakeSpec::right(1)).unwrap(),
            snake_cross(SnakeSpec::right(2)).unwrap(),
        ];
        let arc = arc_approximation(&seq, Exit::Top, Exit::Bottom).unwrap();
        let svg = render_arc(
            &arc,
            &RenderSpec {
                cell_px: 2,
                ..Default::default()
            },
        )
        .unwrap();
        let coarse = group_rects(&svg, "level-1");
        let fine = group_rects(&svg, "level-2");
        assert_eq!((coarse.len(), fine.len()), (15, 465));
        for &(x, y, s) in &fine {
            assert!(coarse
                .iter()
                .any(|&(cx, cy, cs)| cx <= x && x + s <= cx + cs && cy <= y && y + s <= cy + cs));
        }
        assert!(svg.contains("id=\"level-1\" fill=\"#d62728\" fill-opacity=\"0.8\""));
        assert!(svg.contains("fill-opacity=\"0.4\""));
    }

    #[test]
    fn caps() {
        let p = snake_cross(SnakeSpec::right(1)).unwrap();
        let spec = RenderSpec {
            cell_px: 1 << 14,
            ..Default::default()
        };
        assert!(matches!(render_pattern(&p, &spec), Err(LabyError::TooLarge { .. })));
        let zero = RenderSpec {
            cell_px: 0,
            ..Default::default()
        };
        assert!(matches!(render_pattern(&p, &zero), Err(LabyError::BadParameter(_))));
    }
}
