//! `laby`: generate, check, compose and render labyrinth patterns, and build
//! dimension schedules.
//!
//! Exit codes: 0 success, 1 validation failed, 2 usage or parse error,
//! 3 resource cap exceeded.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use laby_core::dimension::{self, fmt_sig};
use laby_core::paths::{bfs_oracle, exit_path_length_by_substitution, tree_path, ExitPair};
use laby_core::render::{render_pattern, RenderSpec};
use laby_core::{
    core, plain_cross, read_pattern, snake_cross, validate, write_pattern, Exit, LabyError, Limits, Pattern, SnakeSpec,
};

#[derive(Parser)]
#[command(
    name = "laby",
    version,
    about = "Labyrinth patterns, exit arcs and dimension schedules"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a pattern family member
    #[command(subcommand)]
    Gen(Gen),
    /// Check the labyrinth properties of a pattern (exit 1 if it fails)
    Validate {
        /// Pattern file; standard input when omitted
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Kv)]
        format: ReportFormat,
    },
    /// Compose patterns left to right into one level set
    Compose {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exit-to-exit path through the composition of the given patterns
    Path {
        #[arg(long)]
        from: Exit,
        #[arg(long)]
        to: Exit,
        #[arg(long, required = true, num_args = 1..)]
        pattern: Vec<PathBuf>,
        /// Also list the squares, one `col row` per line
        #[arg(long)]
        squares: bool,
    },
    /// Cross-check all six exit path lengths with an independent search
    Oracle {
        #[arg(long, required = true, num_args = 1..)]
        pattern: Vec<PathBuf>,
    },
    /// Dimension quotients, estimates and target schedules
    #[command(subcommand)]
    Dim(Dim),
    /// Union of the paths between the four exits
    Core {
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a pattern as SVG
    Render(RenderArgs),
}

#[derive(Subcommand)]
enum Gen {
    /// Snake cross pattern of width 4k + 7
    Snake {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        left: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plain cross of width 2k + 1
    Cross {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Dim {
    /// d_k for the snake family (d_0 = 1)
    Quotient {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// Trace of a `k p q` schedule file
    Estimate {
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Schedule whose level estimate approaches delta
    Target {
        /// Target dimension in [1, 2]
        #[arg(long)]
        delta: f64,
        /// Accepted distance of the final estimate from delta
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Number of schedule terms
        #[arg(long, default_value_t = 64)]
        max_terms: usize,
        /// Schedule file; standard output when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trace table; standard error when omitted
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overlay the path between two exits, e.g. `top:bottom`
    #[arg(long)]
    path: Option<String>,
    /// Colour the arms, exits and centre
    #[arg(long)]
    arms: bool,
    #[arg(long, default_value_t = 8)]
    cell_px: u32,
    #[arg(long)]
    grid: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Kv,
    Text,
}

fn read_text(path: Option<&Path>) -> anyhow::Result<String> {
    let mut s = String::new();
    match path {
        None => {
            std::io::stdin()
                .read_to_string(&mut s)
                .context("reading standard input")?;
        }
        Some(p) if p == Path::new("-") => {
            std::io::stdin()
                .read_to_string(&mut s)
                .context("reading standard input")?;
        }
        Some(p) => {
            s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
    }
    Ok(s)
}

fn load(path: Option<&Path>) -> anyhow::Result<Pattern> {
    let text = read_text(path)?;
    let name = path.map_or("<stdin>".into(), |p| p.display().to_string());
    let p = read_pattern(&text).with_context(|| format!("parsing {name}"))?;
    Limits::from_env().check(p.width() as u64)?;
    Ok(p)
}

fn load_all(paths: &[PathBuf]) -> anyhow::Result<Vec<Pattern>> {
    paths.iter().map(|p| load(Some(p))).collect()
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn compose_all(patterns: &[Pattern]) -> anyhow::Result<Pattern> {
    Ok(laby_core::grid::compose_sequence_with(patterns, &Limits::from_env())?.pattern)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen(Gen::Snake { k, left, out }) => {
            let spec = if left { SnakeSpec::left(k) } else { SnakeSpec::right(k) };
            Limits::from_env().check(spec.width() as u64)?;
            emit(out.as_deref(), &write_pattern(&snake_cross(spec)?))?;
        }
        Cmd::Gen(Gen::Cross { k, out }) => {
            Limits::from_env().check(2 * u64::from(k) + 1)?;
            emit(out.as_deref(), &write_pattern(&plain_cross(k)?))?;
        }
        Cmd::Validate { input, format } => {
            let p = load(input.as_deref())?;
            let report = validate(&p);
            let text = match format {
                ReportFormat::Kv => format!("is_labyrinth={}\n{}", report.is_labyrinth(), report.to_kv()),
                ReportFormat::Text => report.to_text(),
            };
            emit(None, &text)?;
            if !report.is_labyrinth() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Compose { inputs, out } => {
            let patterns = load_all(&inputs)?;
            emit(out.as_deref(), &write_pattern(&compose_all(&patterns)?))?;
        }
        Cmd::Path {
            from,
            to,
            pattern,
            squares,
        } => {
            let patterns = load_all(&pattern)?;
            match compose_all(&patterns) {
                Ok(p) => {
                    let exits = laby_core::props::exit_set(&p)?;
                    let path = tree_path(&p, exits.get(from), exits.get(to))?;
                    let mut text = format!("length {}\n", path.len());
                    if squares {
                        for c in &path.squares {
                            text.push_str(&format!("{} {}\n", c.col, c.row));
                        }
                    }
                    emit(None, &text)?;
                }
                Err(e) if !squares && matches!(e.downcast_ref(), Some(LabyError::TooLarge { .. })) => {
                    // the length alone needs no grid
                    let n = exit_path_length_by_substitution(&patterns, from, to)?;
                    emit(None, &format!("length {n}\n"))?;
                }
                Err(e) => return Err(e),
            }
        }
        Cmd::Oracle { pattern } => {
            let patterns = load_all(&pattern)?;
            let p = compose_all(&patterns)?;
            let exits = laby_core::props::exit_set(&p)?;
            let mut text = String::from("pair tree bfs substitution\n");
            let mut ok = true;
            for pair in ExitPair::ALL {
                let (a, b) = pair.exits();
                let tree = tree_path(&p, exits.get(a), exits.get(b))?.len();
                let bfs = bfs_oracle(&p, exits.get(a), exits.get(b))?;
                let subst = exit_path_length_by_substitution(&patterns, a, b)?;
                ok &= tree == bfs && subst == tree.into();
                text.push_str(&format!("{} {tree} {bfs} {subst}\n", pair.label()));
            }
            text.push_str(if ok { "agree\n" } else { "DISAGREE\n" });
            emit(None, &text)?;
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Dim(Dim::Quotient { k }) => {
            emit(None, &format!("{}\n", fmt_sig(dimension::dim_quotient(k)?)))?;
        }
        Cmd::Dim(Dim::Estimate { schedule }) => {
            let terms = dimension::read_schedule(&read_text(Some(&schedule))?)
                .with_context(|| format!("parsing {}", schedule.display()))?;
            let trace = dimension::schedule_trace(&terms);
            let (lo, hi) = dimension::tail_extremes(&trace);
            let mut text = dimension::format_trace(&trace);
            text.push_str(&format!("tail_min {}\ntail_max {}\n", fmt_sig(lo), fmt_sig(hi)));
            emit(None, &text)?;
        }
        Cmd::Dim(Dim::Target {
            delta,
            tol,
            max_terms,
            out,
            trace,
        }) => {
            let s = dimension::target_dimension(delta, tol, max_terms)?;
            emit(out.as_deref(), &dimension::write_schedule(&s.terms))?;
            let table = dimension::format_trace(&s.trace);
            match trace {
                Some(path) => emit(Some(&path), &table)?,
                None => eprint!("{table}"),
            }
            for note in &s.notes {
                eprintln!("note: {note}");
            }
            if !s.converged {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Core { input, out } => {
            let p = load(input.as_deref())?;
            emit(out.as_deref(), &write_pattern(&core(&p)?))?;
        }
        Cmd::Render(args) => {
            let p = load(args.input.as_deref())?;
            let overlay = match &args.path {
                None => None,
                Some(spec) => {
                    let Some((a, b)) = spec.split_once(':') else {
                        bail!(LabyError::BadParameter(format!("--path expects FROM:TO, got {spec:?}")));
                    };
                    let (a, b): (Exit, Exit) = (a.parse()?, b.parse()?);
                    let exits = laby_core::props::exit_set(&p)?;
                    Some(tree_path(&p, exits.get(a), exits.get(b))?)
                }
            };
            let spec = RenderSpec {
                cell_px: args.cell_px,
                overlay,
                grid_lines: args.grid,
                arms: args.arms,
                ..RenderSpec::default()
            };
            emit(args.out.as_deref(), &render_pattern(&p, &spec)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<LabyError>() {
        Some(LabyError::TooLarge { .. }) => 3,
        Some(
            LabyError::NotLabyrinth
            | LabyError::NotTree
            | LabyError::MissingExits { .. }
            | LabyError::NotWhite(_)
            | LabyError::Unreachable(..),
        ) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
