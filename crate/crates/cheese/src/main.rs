//! Command-line front end: build, verify, probe and render cheeses.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 precision exhausted. Failures print a machine-readable category to
//! stderr; `--json-out` writes the full report as JSON.

use cheese::bounds::{cauchy_bound, star_check, BoundQuery};
use cheese::certificates::{find_certificate, validate_certificate};
use cheese::geometry::QPoint;
use cheese::jensen::{circle_points, default_slack, lp_search, TestFamily};
use cheese::num::{format_rational, parse_rational, q, q_to_f64, QComplex, Q};
use cheese::schedule::{build_cheese, verify_schedule, CheeseDescription, Truncation};
use cheese::{io, Error};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cheese", version, about = "Swiss cheese construction and verification kit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BuildProfile {
    /// Number of stages M
    #[arg(long, default_value_t = 2)]
    stages: u32,
    /// Disc systems materialized per stage
    #[arg(long, default_value_t = 8)]
    systems: usize,
    /// Discs materialized per system
    #[arg(long, default_value_t = 16)]
    discs: usize,
    /// Root-bracket precision exponent t
    #[arg(long, default_value_t = 32)]
    precision: u32,
    /// Seed recorded in provenance and used for sampling diagnostics
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run the staged construction and emit a CheeseFileV1 document
    Build {
        #[command(flatten)]
        profile: BuildProfile,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run every exact invariant check on a document
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Certified upper bound for |f^(k)(z)| / ||f|| at a point
    Bounds {
        /// Cheese document; the empty cheese when omitted
        #[arg(long)]
        input: Option<PathBuf>,
        /// Point as `x,y` with exact rational coordinates
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 32)]
        precision: u32,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Point-of-continuity certificate separating z from w
    Certify {
        #[arg(long)]
        z: String,
        #[arg(long)]
        w: String,
        /// Enumeration height budget
        #[arg(long, default_value_t = 64)]
        max_height: i64,
        /// Optionally also check z against a cheese document
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// LP search for Jensen-type measures on a circle grid around x
    ProbeJensen {
        /// Cheese document; the undeleted disc when omitted
        #[arg(long)]
        input: Option<PathBuf>,
        /// Base point as `x,y`
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 16)]
        grid_size: usize,
        #[arg(long, default_value_t = 8)]
        family_size: usize,
        /// Grid circle radius (exact rational)
        #[arg(long, default_value = "1/4")]
        radius: String,
        #[arg(long, default_value_t = 48)]
        precision: u32,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Render a document as SVG
    Render {
        #[arg(long)]
        input: PathBuf,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 800)]
        width: u32,
        /// Suppress the interval I
        #[arg(long)]
        no_interval: bool,
        /// Capsule level to draw (omit for none)
        #[arg(long)]
        capsule: Option<u32>,
    },
    /// Print the certified per-block lower sums of the divergence condition
    StarCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 32)]
        precision: u32,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let category = match &e {
                Error::PrecisionExhausted(_) => "precision-exhausted",
                Error::InvalidInput(_) | Error::InvalidQuery(_) => "usage",
                Error::NoCertificate(_) => "not-found",
                Error::MalformedDocument(_) => "malformed-document",
                Error::UnsupportedVersion(_) => "unsupported-version",
                Error::InvariantViolation(_) => "invariant-violation",
                Error::InfeasibleGrid(_) => "infeasible-grid",
                Error::PoleAtPoint => "pole-at-point",
                Error::PoleProximity => "pole-proximity",
                Error::GridTouchesUnion(_) => "grid-touches-union",
                Error::PoleOnSupport(_) => "pole-on-support",
                Error::Io(_) => "io",
            };
            eprintln!("{}", json!({ "error": category, "detail": e.to_string() }));
            match e {
                Error::PrecisionExhausted(_) => ExitCode::from(3),
                Error::InvalidInput(_) | Error::InvalidQuery(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_point(s: &str) -> Result<QPoint, Error> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidInput(format!("point {s:?} is not `x,y`")))?;
    let px = parse_rational(x).map_err(Error::InvalidInput)?;
    let py = parse_rational(y).map_err(Error::InvalidInput)?;
    Ok(QPoint::new(px, py))
}

fn load_or_empty(path: &Option<PathBuf>, precision: u32) -> Result<CheeseDescription, Error> {
    match path {
        Some(p) => io::load(p),
        None => Ok(CheeseDescription::empty(precision, 0)),
    }
}

fn write_json(path: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), Error> {
    if let Some(p) = path {
        let mut text = serde_json::to_string_pretty(value)
            .expect("json serialization cannot fail");
        text.push('\n');
        std::fs::write(p, text)?;
    }
    Ok(())
}

fn emit_text(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Build { profile, out } => {
            let cheese = build_cheese(
                profile.stages,
                &Truncation {
                    systems_per_stage: profile.systems,
                    discs_per_system: profile.discs,
                },
                profile.precision,
                profile.seed,
            )?;
            emit_text(&out, &io::emit(&cheese))?;
            if out.is_some() {
                println!(
                    "built {} stages, {} deletions, bound table to N = {}",
                    cheese.stages.len(),
                    cheese.deletions.len(),
                    cheese.bound_table.entries.len()
                );
            }
            Ok(0)
        }
        Command::Verify { input, json_out } => {
            let cheese = io::load(&input)?;
            let report = verify_schedule(&cheese);
            print!("{report}");
            write_json(&json_out, &serde_json::to_value(&report).unwrap())?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Bounds {
            input,
            z,
            k,
            precision,
            json_out,
        } => {
            let cheese = load_or_empty(&input, precision)?;
            let z = parse_point(&z)?;
            let b = cauchy_bound(
                &cheese,
                &BoundQuery {
                    z,
                    k,
                    root_precision: precision,
                },
            )?;
            println!(
                "{} (~ {:.6e}), {} terms, precision 2^-{}",
                format_rational(&b.value_upper),
                q_to_f64(&b.value_upper),
                b.terms,
                b.precision_used
            );
            write_json(
                &json_out,
                &json!({
                    "bound": format_rational(&b.value_upper),
                    "bound_f64": q_to_f64(&b.value_upper),
                    "terms": b.terms,
                    "precision_used": b.precision_used,
                    "k": k,
                }),
            )?;
            Ok(0)
        }
        Command::Certify {
            z,
            w,
            max_height,
            input,
            json_out,
        } => {
            let zp = parse_point(&z)?;
            let wp = parse_point(&w)?;
            let cert = match find_certificate(&zp, &wp, max_height) {
                Ok(c) => c,
                Err(Error::NoCertificate(detail)) => {
                    println!("NotFound: {detail}");
                    write_json(&json_out, &json!({ "result": "not-found", "detail": detail }))?;
                    return Ok(1);
                }
                Err(e) => return Err(e),
            };
            let cheese = match &input {
                Some(p) => Some(io::load(p)?),
                None => None,
            };
            let report = validate_certificate(&cert, cheese.as_ref());
            println!(
                "stage {}: disc center ({}, {}), radius {}, index {} in the \
                 z-containing subsequence",
                cert.stage,
                format_rational(&cert.disc.center.x),
                format_rational(&cert.disc.center.y),
                format_rational(&cert.disc.radius),
                cert.enumeration_index
            );
            print!("{report}");
            write_json(
                &json_out,
                &json!({
                    "stage": cert.stage,
                    "center_x": format_rational(&cert.disc.center.x),
                    "center_y": format_rational(&cert.disc.center.y),
                    "radius": format_rational(&cert.disc.radius),
                    "enumeration_index": cert.enumeration_index,
                    "checks": serde_json::to_value(&report).unwrap(),
                }),
            )?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::ProbeJensen {
            input,
            x,
            grid_size,
            family_size,
            radius,
            precision,
            json_out,
        } => {
            let cheese = load_or_empty(&input, precision)?;
            let xp = parse_point(&x)?;
            let r = parse_rational(&radius).map_err(Error::InvalidInput)?;
            if grid_size < 1 || family_size < 1 {
                return Err(Error::InvalidInput("grid and family sizes must be >= 1".into()));
            }
            let mut grid = vec![xp.clone()];
            if grid_size > 1 {
                grid.extend(circle_points(&xp, &r, grid_size - 1));
            }
            let family = default_family(&cheese, &xp, family_size);
            let slack = default_slack(precision);
            let result = lp_search(&xp, &grid, &family, precision, &slack)?;
            println!(
                "max off-base mass {} (~ {:.3e})",
                format_rational(&result.max_off_mass),
                q_to_f64(&result.max_off_mass)
            );
            println!("{}", result.evidence);
            for (p, w) in result.measure.points.iter().zip(&result.measure.weights) {
                if !w.eq(&Q::from_integer(0.into())) {
                    println!(
                        "  weight {} at ({}, {})",
                        format_rational(w),
                        format_rational(&p.x),
                        format_rational(&p.y)
                    );
                }
            }
            write_json(
                &json_out,
                &json!({
                    "max_off_mass": format_rational(&result.max_off_mass),
                    "max_off_mass_f64": q_to_f64(&result.max_off_mass),
                    "evidence": result.evidence,
                    "weights": result
                        .measure
                        .weights
                        .iter()
                        .map(format_rational)
                        .collect::<Vec<_>>(),
                }),
            )?;
            Ok(0)
        }
        Command::Render {
            input,
            out,
            width,
            no_interval,
            capsule,
        } => {
            let cheese = io::load(&input)?;
            let svg = io::render_svg(
                &cheese,
                &io::RenderOptions {
                    width_px: width,
                    show_interval: !no_interval,
                    capsule_level: capsule,
                },
            );
            emit_text(&out, &svg)?;
            Ok(0)
        }
        Command::StarCheck {
            input,
            precision,
            json_out,
        } => {
            let cheese = io::load(&input)?;
            let checks = star_check(&cheese.bound_table, precision);
            let mut all = true;
            for c in &checks {
                all &= c.pass;
                println!(
                    "block {} ({}, {}]: lower sum {} (~ {:.6}) {}",
                    c.block,
                    c.start,
                    c.end,
                    format_rational(&c.lower_sum),
                    c.lower_sum_f64,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
            write_json(
                &json_out,
                &json!(checks
                    .iter()
                    .map(|c| json!({
                        "block": c.block,
                        "start": c.start,
                        "end": c.end,
                        "lower_sum": format_rational(&c.lower_sum),
                        "lower_sum_f64": c.lower_sum_f64,
                        "pass": c.pass,
                    }))
                    .collect::<Vec<_>>()),
            )?;
            Ok(if all { 0 } else { 1 })
        }
    }
}

/// Probe family: simple poles in the first deletions (when a cheese is
/// supplied) topped up with linear functions `z - a` on a fixed small grid
/// of values with `|a| <= 1/2`, skipping `a = x`.
fn default_family(cheese: &CheeseDescription, x: &QPoint, size: usize) -> TestFamily {
    let pole_count = size.min(cheese.deletions.len());
    let family = TestFamily::poles_from(cheese, pole_count);
    let candidates = [
        q(1, 4),
        q(-1, 4),
        q(1, 2),
        q(-1, 2),
        q(1, 3),
        q(-1, 3),
        q(1, 5),
        q(-1, 5),
        q(2, 5),
        q(-2, 5),
        q(3, 8),
        q(-3, 8),
    ];
    let mut linears = Vec::new();
    let mut i = 0;
    while family.functions.len() + linears.len() < size {
        let (re, im) = (
            candidates[i % candidates.len()].clone(),
            if i / candidates.len() % 2 == 1 {
                candidates[(i + 3) % candidates.len()].clone()
            } else {
                Q::from_integer(0.into())
            },
        );
        i += 1;
        if re == x.x && im == x.y {
            continue;
        }
        linears.push(QComplex::new(re, im));
        if i > 4 * candidates.len() {
            break;
        }
    }
    family.extend(TestFamily::linear(&linears))
}
