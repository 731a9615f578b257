//! Browser bindings for the static demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain function so the same code paths
//! run in native tests.

use std::fmt::Write as _;

use wasm_bindgen::prelude::*;

use laby_core::dimension::{fmt_sig, target_dimension};
use laby_core::paths::{arc_approximation, tree_path};
use laby_core::props::exit_set;
use laby_core::render::{render_arc, render_pattern, RenderSpec};
use laby_core::{plain_cross, snake_cross, Exit, Pattern, SnakeSpec};

/// Patterns wider than this are not drawn in the page.
const MAX_DEMO_WIDTH: usize = 400;

fn family(kind: &str, k: u32, left: bool) -> Result<Pattern, String> {
    let p = match kind {
        "snake" => snake_cross(if left { SnakeSpec::left(k) } else { SnakeSpec::right(k) }),
        "cross" => plain_cross(k),
        other => return Err(format!("unknown pattern family {other:?}")),
    };
    p.map_err(|e| e.to_string())
}

fn exit_pair(a: &str, b: &str) -> Result<(Exit, Exit), String> {
    let parse = |s: &str| s.parse::<Exit>().map_err(|e| e.to_string());
    Ok((parse(a)?, parse(b)?))
}

fn cell_px_for(width: usize) -> u32 {
    (480 / width).clamp(1, 32) as u32
}

/// SVG of one family member, optionally with coloured arms and an exit path.
pub fn pattern_svg_impl(kind: &str, k: u32, left: bool, arms: bool, path: &str) -> Result<String, String> {
    let p = family(kind, k, left)?;
    if p.width() > MAX_DEMO_WIDTH {
        return Err(format!("width {} is too large for the page", p.width()));
    }
    let overlay = match path.split_once(':') {
        None if path.is_empty() => None,
        None => return Err(format!("path must look like top:bottom, got {path:?}")),
        Some((a, b)) => {
            let (a, b) = exit_pair(a, b)?;
            let e = exit_set(&p).map_err(|e| e.to_string())?;
            Some(tree_path(&p, e.get(a), e.get(b)).map_err(|e| e.to_string())?)
        }
    };
    let spec = RenderSpec {
        cell_px: cell_px_for(p.width()),
        arms,
        overlay,
        ..Default::default()
    };
    render_pattern(&p, &spec).map_err(|e| e.to_string())
}

/// SVG of the nested exit paths through the snake sequence `A_1, ..., A_levels`.
pub fn arc_svg_impl(levels: u32, from: &str, to: &str) -> Result<String, String> {
    if !(1..=3).contains(&levels) {
        return Err("levels must be 1, 2 or 3".into());
    }
    let (a, b) = exit_pair(from, to)?;
    let seq: Vec<Pattern> = (1..=levels)
        .map(|k| snake_cross(SnakeSpec::right(k)).unwrap())
        .collect();
    let arc = arc_approximation(&seq, a, b).map_err(|e| e.to_string())?;
    let width = *arc.widths.last().unwrap();
    let spec = RenderSpec {
        cell_px: cell_px_for(width),
        ..Default::default()
    };
    render_arc(&arc, &spec).map_err(|e| e.to_string())
}

/// Schedule and trace for a target dimension, as JSON.
pub fn target_json_impl(delta: f64, tol: f64, max_terms: u32) -> Result<String, String> {
    let s = target_dimension(delta, tol, max_terms.min(120) as usize).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"delta\":{},\"kind\":\"{:?}\",\"converged\":{},\"estimate\":{},\"rows\":[",
        fmt_sig(delta),
        s.kind,
        s.converged,
        fmt_sig(s.final_estimate())
    );
    for (i, (row, t)) in s.trace.iter().zip(&s.terms).enumerate() {
        if i > 0 {
            out.push(',');
        }
        // p and q can exceed 2^53, so they travel as strings
        let _ = write!(
            out,
            "{{\"term\":{},\"k\":{},\"p\":\"{}\",\"q\":\"{}\",\"r\":{},\"estimate\":{}}}",
            row.term,
            t.k,
            t.p,
            t.q,
            fmt_sig(row.r),
            fmt_sig(row.estimate)
        );
    }
    out.push_str("],\"notes\":[");
    for (i, n) in s.notes.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "\"{}\"", n.replace('\\', "\\\\").replace('"', "\\\""));
    }
    out.push_str("]}");
    Ok(out)
}

#[wasm_bindgen]
pub fn pattern_svg(kind: &str, k: u32, left: bool, arms: bool, path: &str) -> Result<String, JsValue> {
    pattern_svg_impl(kind, k, left, arms, path).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn arc_svg(levels: u32, from: &str, to: &str) -> Result<String, JsValue> {
    arc_svg_impl(levels, from, to).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn target_json(delta: f64, tol: f64, max_terms: u32) -> Result<String, JsValue> {
    target_json_impl(delta, tol, max_terms).map_err(|e| JsValue::from_str(&e))
}
