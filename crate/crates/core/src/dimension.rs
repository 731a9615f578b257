//! Box-counting dimension of exit arcs: per-pattern dimension quotients,
//! finite-level estimates, and pattern schedules that hit a prescribed
//! dimension in `[1, 2]`.
//!
//! Pattern index `k >= 1` is the snake cross `A_k` (width `4k + 7`, exit path
//! `4k^2 + 4k + 7`); index `0` is the width-3 plain cross (width 3, path 3).
//! Every count here is a closed form carried in log space; exact products are
//! available as big integers.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{LabyError, Result};
use crate::generators::{plain_cross, snake_cross, SnakeSpec};
use crate::grid::{compose_sequence_with, Limits, Pattern};

/// Width of pattern `k` (3 for the plain cross at `k = 0`).
pub fn family_width(k: u64) -> u128 {
    if k == 0 {
        3
    } else {
        4 * u128::from(k) + 7
    }
}

/// Exit-to-exit path count of pattern `k`.
pub fn family_path_count(k: u64) -> u128 {
    if k == 0 {
        3
    } else {
        let k = u128::from(k);
        4 * k * k + 4 * k + 7
    }
}

fn ln_u128(x: u128) -> f64 {
    (x as f64).ln()
}

pub fn family_log_width(k: u64) -> f64 {
    ln_u128(family_width(k))
}

pub fn family_log_count(k: u64) -> f64 {
    ln_u128(family_path_count(k))
}

fn quotient(k: u64) -> f64 {
    if k == 0 {
        1.0
    } else {
        family_log_count(k) / family_log_width(k)
    }
}

/// `d_0 = 1`, `d_k = log(4k^2 + 4k + 7) / log(4k + 7)`.
pub fn dim_quotient(k: i64) -> Result<f64> {
    if k < 0 {
        return Err(LabyError::BadParameter(format!("k = {k} is negative")));
    }
    Ok(quotient(k as u64))
}

/// `sum log counts / sum log widths` over one level prefix.
pub fn level_estimate(widths: &[u64], counts: &[u64]) -> Result<f64> {
    if widths.len() != counts.len() {
        return Err(LabyError::LengthMismatch {
            left: widths.len(),
            right: counts.len(),
        });
    }
    if widths.is_empty() {
        return Err(LabyError::BadParameter("no levels".into()));
    }
    if let Some(w) = widths.iter().find(|&&w| w < 3) {
        return Err(LabyError::BadParameter(format!("width {w} is below 3")));
    }
    if counts.contains(&0) {
        return Err(LabyError::BadParameter("path counts must be positive".into()));
    }
    let num: f64 = counts.iter().map(|&c| (c as f64).ln()).sum();
    let den: f64 = widths.iter().map(|&w| (w as f64).ln()).sum();
    Ok(num / den)
}

/// Estimates `log D(L_n) / log m(n)` of the pure snake sequence for
/// `n = 1..=levels`.
pub fn snake_level_estimates(levels: usize) -> Vec<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    (1..=levels as u64)
        .map(|k| {
            num += family_log_count(k);
            den += family_log_width(k);
            num / den
        })
        .collect()
}

/// `D(L_n) = prod (4k^2 + 4k + 7)`, exact.
pub fn snake_path_count_exact(levels: usize) -> BigUint {
    (1..=levels as u64).fold(BigUint::one(), |acc, k| acc * family_path_count(k))
}

/// `m(n) = prod (4k + 7)`, exact.
pub fn snake_width_exact(levels: usize) -> BigUint {
    (1..=levels as u64).fold(BigUint::one(), |acc, k| acc * family_width(k))
}

/// `log(D(L_n) / m(n))` for `n = 1..=levels`: the log of the Euclidean length
/// of the level-`n` exit path in the unit square.
pub fn snake_log_length_proxy(levels: usize) -> Vec<f64> {
    let mut acc = 0.0;
    (1..=levels as u64)
        .map(|k| {
            acc += family_log_count(k) - family_log_width(k);
            acc
        })
        .collect()
}

/// Partial sums of `1 / m_k` for the snake widths.
pub fn snake_reciprocal_width_sums(levels: usize) -> Vec<f64> {
    let mut acc = 0.0;
    (1..=levels as u64)
        .map(|k| {
            acc += 1.0 / family_width(k) as f64;
            acc
        })
        .collect()
}

/// One term of a rational schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalTerm {
    pub p: u128,
    pub q: u128,
    /// `(p a + q c) / (p b + q d)`
    pub r: f64,
    /// `|p / q - t|`
    pub eps: f64,
}

/// Side from which `p_j / q_j` approaches `t = (c - alpha d) / (alpha b - a)`.
///
/// `r` is decreasing in `p / q` (because `a/b < c/d`), so approaching `t`
/// from below makes `r_j` fall to `alpha` and approaching from above makes it
/// rise to `alpha`. Either way `|r_j - alpha|` is nonincreasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approach {
    /// `q_j = 2^(j + j0)`, `p_j = floor(t q_j)`, `j0` the least offset with `p_1 >= 1`.
    FromBelow,
    /// `q_j = 2^j`, `p_j = ceil(t q_j)`.
    FromAbove,
}

const MAX_DYADIC_EXP: usize = 120;

/// Integer pairs `(p_j, q_j)` converging to `t` by dyadic truncation, which
/// keeps `p_j / q_j` monotone (it may repeat).
pub fn rational_schedule(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    alpha: f64,
    n_terms: usize,
    approach: Approach,
) -> Result<Vec<RationalTerm>> {
    if ![a, b, c, d, alpha].iter().all(|v| v.is_finite()) || a <= 0.0 || b <= 0.0 || c <= 0.0 || d <= 0.0 {
        return Err(LabyError::PreconditionViolated(
            "a, b, c, d must be positive and finite".into(),
        ));
    }
    if a / b >= alpha || alpha >= c / d {
        return Err(LabyError::PreconditionViolated(format!(
            "need a/b < alpha < c/d, got {} < {alpha} < {}",
            a / b,
            c / d
        )));
    }
    let t = (c - alpha * d) / (alpha * b - a);
    if !(t.is_finite() && t > 0.0) {
        return Err(LabyError::PreconditionViolated(format!(
            "target ratio {t} is not positive"
        )));
    }
    let j0 = match approach {
        Approach::FromAbove => 0,
        Approach::FromBelow => (0..MAX_DYADIC_EXP)
            .find(|&j0| t * 2f64.powi(j0 as i32 + 1) >= 1.0)
            .unwrap_or(MAX_DYADIC_EXP),
    };
    if n_terms + j0 > MAX_DYADIC_EXP {
        return Err(LabyError::BadParameter(format!(
            "{n_terms} terms need denominators beyond 2^{MAX_DYADIC_EXP}"
        )));
    }
    // r(x) = a/b + k / (x b + d) with k > 0; every step is monotone under
    // rounding, so the computed trace is monotone too.
    let base = a / b;
    let k = c - base * d;
    let mut out = Vec::with_capacity(n_terms);
    for j in 1..=n_terms {
        let e = j + j0;
        let q_f = 2f64.powi(e as i32);
        let p_f = match approach {
            Approach::FromBelow => (t * q_f).floor(),
            Approach::FromAbove => (t * q_f).ceil(),
        };
        if p_f >= 2f64.powi(127) {
            return Err(LabyError::BadParameter(format!("p_{j} overflows")));
        }
        let (p, q) = (p_f as u128, 1u128 << e);
        let x = p_f / q_f;
        let r = base + k / (x * b + d);
        // the exact value is on one side of alpha; absorb last-ulp rounding
        let r = match approach {
            Approach::FromBelow => r.max(alpha),
            Approach::FromAbove => r.min(alpha),
        };
        out.push(RationalTerm {
            p,
            q,
            r,
            eps: (x - t).abs(),
        });
    }
    Ok(out)
}

/// `p` copies of pattern `k` followed by `q` copies of pattern `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleTerm {
    pub k: u64,
    pub p: u128,
    pub q: u128,
}

impl ScheduleTerm {
    pub fn log_width(&self) -> f64 {
        self.p as f64 * family_log_width(self.k) + self.q as f64 * family_log_width(self.k + 1)
    }

    pub fn log_count(&self) -> f64 {
        self.p as f64 * family_log_count(self.k) + self.q as f64 * family_log_count(self.k + 1)
    }

    /// Dimension quotient of the composed pattern this term stands for.
    pub fn ratio(&self) -> f64 {
        self.log_count() / self.log_width()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    /// Constant width-3 plain cross.
    PlainCross,
    /// `A_1, A_2, A_3, ...`
    PureSnake,
    /// Constant `A_k`.
    SelfSimilar(u64),
    /// Composed patterns of `A_k` and `A_{k+1}`.
    Bracketed(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub term: usize,
    pub r: f64,
    /// Estimate over the prefix ending at this term.
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub delta: f64,
    pub kind: ScheduleKind,
    /// `k` with `d_k <= delta <= d_{k+1}`.
    pub interval: u64,
    pub terms: Vec<ScheduleTerm>,
    pub trace: Vec<TraceRow>,
    pub tol: f64,
    pub converged: bool,
    pub notes: Vec<String>,
}

impl Schedule {
    pub fn final_estimate(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.estimate)
    }
}

/// Trace of an arbitrary schedule: per-term ratio and running estimate.
pub fn schedule_trace(terms: &[ScheduleTerm]) -> Vec<TraceRow> {
    let (mut num, mut den) = (0.0, 0.0);
    let mut uniform = true;
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            uniform &= *t == terms[0];
            num += t.log_count();
            den += t.log_width();
            // a constant prefix has the term ratio as its exact estimate
            let estimate = if uniform { t.ratio() } else { num / den };
            TraceRow {
                term: i + 1,
                r: t.ratio(),
                estimate,
            }
        })
        .collect()
}

/// Smallest and largest running estimate over the second half of a trace:
/// finite stand-ins for the lower and upper limits of the estimate.
pub fn tail_extremes(trace: &[TraceRow]) -> (f64, f64) {
    trace[trace.len() / 2..]
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| {
            (lo.min(t.estimate), hi.max(t.estimate))
        })
}

/// Estimate of a schedule with its first `skip` terms dropped.
pub fn schedule_estimate_from(terms: &[ScheduleTerm], skip: usize) -> f64 {
    let rest = &terms[skip.min(terms.len())..];
    let num: f64 = rest.iter().map(ScheduleTerm::log_count).sum();
    let den: f64 = rest.iter().map(ScheduleTerm::log_width).sum();
    num / den
}

/// Largest `k` for which bracketing by `A_k`, `A_{k+1}` is representable.
pub const MAX_INTERVAL: u64 = 1 << 62;

/// Largest `k` with `d_k <= delta`.
fn locate_interval(delta: f64) -> Result<u64> {
    if quotient(1) > delta {
        return Ok(0);
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while quotient(hi) <= delta {
        lo = hi;
        if hi >= MAX_INTERVAL {
            return Err(LabyError::PreconditionViolated(format!(
                "delta = {delta} exceeds d_k for every representable k (d_max = {})",
                quotient(MAX_INTERVAL)
            )));
        }
        hi = hi.saturating_mul(2).min(MAX_INTERVAL);
    }
    // d(lo) <= delta < d(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if quotient(mid) <= delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// A schedule whose level estimate approaches `delta`.
pub fn target_dimension(delta: f64, tol: f64, max_terms: usize) -> Result<Schedule> {
    if !(1.0..=2.0).contains(&delta) {
        return Err(LabyError::BadParameter(format!("delta = {delta} is outside [1, 2]")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(LabyError::BadParameter(format!("tol = {tol} must be positive")));
    }
    if max_terms == 0 {
        return Err(LabyError::BadParameter("max_terms must be at least 1".into()));
    }
    let mut notes = Vec::new();
    let (kind, interval, terms, trace) = if delta == 1.0 {
        let terms = vec![ScheduleTerm { k: 0, p: 1, q: 0 }; max_terms];
        let trace = schedule_trace(&terms);
        (ScheduleKind::PlainCross, 0, terms, trace)
    } else if delta == 2.0 {
        let terms: Vec<_> = (1..=max_terms as u64).map(|k| ScheduleTerm { k, p: 1, q: 0 }).collect();
        let trace = schedule_trace(&terms);
        notes.push("pure snake sequence: estimates increase to 2 only in the limit".into());
        (ScheduleKind::PureSnake, u64::MAX, terms, trace)
    } else {
        let k = locate_interval(delta)?;
        if quotient(k) == delta {
            let terms = vec![ScheduleTerm { k, p: 1, q: 0 }; max_terms];
            let trace = schedule_trace(&terms);
            (ScheduleKind::SelfSimilar(k), k, terms, trace)
        } else {
            let (a, b) = (family_log_count(k), family_log_width(k));
            let (c, d) = (family_log_count(k + 1), family_log_width(k + 1));
            let pairs = rational_schedule(a, b, c, d, delta, max_terms, Approach::FromAbove)?;
            let terms: Vec<_> = pairs.iter().map(|t| ScheduleTerm { k, p: t.p, q: t.q }).collect();
            let mut trace = schedule_trace(&terms);
            for (row, t) in trace.iter_mut().zip(&pairs) {
                row.r = t.r;
            }
            notes.push("p_j/q_j approaches its limit from above, so r_j is nondecreasing (it may repeat)".into());
            (ScheduleKind::Bracketed(k), k, terms, trace)
        }
    };
    let last = trace.last().map_or(f64::NAN, |t| t.estimate);
    let converged = (last - delta).abs() <= tol;
    if !converged {
        notes.push(format!(
            "estimate {} after {max_terms} terms is not within {tol} of {delta}",
            fmt_sig(last)
        ));
    }
    Ok(Schedule {
        delta,
        kind,
        interval,
        terms,
        trace,
        tol,
        converged,
        notes,
    })
}

/// The composed labyrinth pattern for one schedule term, materialized.
pub fn star_pattern(k: u32, p: u32, q: u32) -> Result<Pattern> {
    star_pattern_with(k, p, q, &Limits::default())
}

pub fn star_pattern_with(k: u32, p: u32, q: u32, limits: &Limits) -> Result<Pattern> {
    if k < 1 || p + q == 0 {
        return Err(LabyError::BadParameter("need k >= 1 and p + q >= 1".into()));
    }
    let width = (0..p)
        .map(|_| family_width(u64::from(k)))
        .chain((0..q).map(|_| family_width(u64::from(k) + 1)))
        .try_fold(1u128, |acc, w| {
            acc.checked_mul(w).filter(|&v| v <= u128::from(limits.max_width))
        })
        .ok_or(LabyError::TooLarge {
            width: u64::MAX,
            cap: limits.max_width,
        })?;
    limits.check(width as u64)?;
    let lower = snake_cross(SnakeSpec::right(k))?;
    let upper = snake_cross(SnakeSpec::right(k + 1))?;
    let seq: Vec<Pattern> = std::iter::repeat_n(lower, p as usize)
        .chain(std::iter::repeat_n(upper, q as usize))
        .collect();
    Ok(compose_sequence_with(&seq, limits)?.pattern)
}

/// Exit path count of `star_pattern(k, p, q)`, exact.
pub fn star_path_count(k: u64, p: u32, q: u32) -> BigUint {
    BigUint::from(family_path_count(k)).pow(p) * BigUint::from(family_path_count(k + 1)).pow(q)
}

/// Materializes the plain cross used as pattern index 0.
pub fn family_pattern(k: u32) -> Result<Pattern> {
    if k == 0 {
        plain_cross(1)
    } else {
        snake_cross(SnakeSpec::right(k))
    }
}

/// Formats like `%.12g`: 12 significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One `k p q` line per term.
pub fn write_schedule(terms: &[ScheduleTerm]) -> String {
    let mut s = String::new();
    for t in terms {
        let _ = writeln!(s, "{} {} {}", t.k, t.p, t.q);
    }
    s
}

pub fn read_schedule(text: &str) -> Result<Vec<ScheduleTerm>> {
    let mut terms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(LabyError::Parse {
                line: line_no,
                col: 1,
                msg: format!("expected `k p q`, found {} fields", fields.len()),
            });
        }
        let bad = |f: &str| LabyError::Parse {
            line: line_no,
            col: line.find(f).map_or(1, |c| c + 1),
            msg: format!("not a non-negative integer: {f:?}"),
        };
        let k: u64 = fields[0].parse().map_err(|_| bad(fields[0]))?;
        let p: u128 = fields[1].parse().map_err(|_| bad(fields[1]))?;
        let q: u128 = fields[2].parse().map_err(|_| bad(fields[2]))?;
        if p + q == 0 {
            return Err(LabyError::Parse {
                line: line_no,
                col: 1,
                msg: "p + q must be positive".into(),
            });
        }
        terms.push(ScheduleTerm { k, p, q });
    }
    if terms.is_empty() {
        return Err(LabyError::Parse {
            line: 1,
            col: 1,
            msg: "schedule has no terms".into(),
        });
    }
    Ok(terms)
}

/// `term r_j estimate` table.
pub fn format_trace(trace: &[TraceRow]) -> String {
    let mut s = String::from("term r_j estimate\n");
    for row in trace {
        let _ = writeln!(s, "{} {} {}", row.term, fmt_sig(row.r), fmt_sig(row.estimate));
    }
    s
}
