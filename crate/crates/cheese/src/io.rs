//! On-disk formats: the versioned JSON cheese document and an SVG rendering.
//!
//! Rationals travel as `{"num", "den"}` decimal strings in lowest terms with
//! positive denominators; the parser rejects anything else. Loading re-runs
//! the full schedule verification, so a parsed document is a verified one.

use crate::geometry::{QDisc, QPoint};
use crate::num::{q_to_f64, Q};
use crate::schedule::{
    verify_schedule, BoundTable, CheeseDescription, Deletion, StageParams,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RatStr {
    num: String,
    den: String,
}

impl RatStr {
    fn from_q(x: &Q) -> Self {
        RatStr {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }

    fn to_q(&self) -> Result<Q> {
        let num: BigInt = self
            .num
            .parse()
            .map_err(|_| Error::MalformedDocument(format!("bad numerator {:?}", self.num)))?;
        let den: BigInt = self
            .den
            .parse()
            .map_err(|_| Error::MalformedDocument(format!("bad denominator {:?}", self.den)))?;
        if !den.is_positive() {
            return Err(Error::InvariantViolation(format!(
                "denominator {:?} not positive",
                self.den
            )));
        }
        if num.gcd(&den) != BigInt::one() {
            return Err(Error::InvariantViolation(format!(
                "fraction {}/{} not in lowest terms",
                self.num, self.den
            )));
        }
        Ok(Q::new(num, den))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscV1 {
    center_x: RatStr,
    center_y: RatStr,
    radius: RatStr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StageV1 {
    m: u32,
    delta: RatStr,
    epsilon: RatStr,
    block_end: usize,
    systems: usize,
    discs_per_system: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeletionV1 {
    stage: u32,
    parent_index: usize,
    center_x: RatStr,
    center_y: RatStr,
    radius: RatStr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundTableV1 {
    entries: Vec<RatStr>,
    block_boundaries: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceV1 {
    tool_version: String,
    stages: u32,
    root_precision: u32,
    seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheeseFileV1 {
    format_version: u32,
    outer: DiscV1,
    stages: Vec<StageV1>,
    deletions: Vec<DeletionV1>,
    bound_table: BoundTableV1,
    provenance: ProvenanceV1,
}

/// Serialize a cheese to the canonical pretty-printed document. The output
/// is byte-deterministic for a given cheese.
pub fn emit(c: &CheeseDescription) -> String {
    let file = CheeseFileV1 {
        format_version: FORMAT_VERSION,
        outer: DiscV1 {
            center_x: RatStr::from_q(&c.outer.center.x),
            center_y: RatStr::from_q(&c.outer.center.y),
            radius: RatStr::from_q(&c.outer.radius),
        },
        stages: c
            .stages
            .iter()
            .map(|s| StageV1 {
                m: s.m,
                delta: RatStr::from_q(&s.delta),
                epsilon: RatStr::from_q(&s.epsilon),
                block_end: s.block_end,
                systems: s.systems,
                discs_per_system: s.discs_per_system,
            })
            .collect(),
        deletions: c
            .deletions
            .iter()
            .map(|d| DeletionV1 {
                stage: d.stage,
                parent_index: d.parent_index,
                center_x: RatStr::from_q(&d.disc.center.x),
                center_y: RatStr::from_q(&d.disc.center.y),
                radius: RatStr::from_q(&d.disc.radius),
            })
            .collect(),
        bound_table: BoundTableV1 {
            entries: c.bound_table.entries.iter().map(RatStr::from_q).collect(),
            block_boundaries: c.bound_table.block_boundaries.clone(),
        },
        provenance: ProvenanceV1 {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            stages: c.stages.len() as u32,
            root_precision: c.root_precision,
            seed: c.seed,
        },
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
    s.push('\n');
    s
}

/// Parse and fully re-verify a document.
pub fn parse(text: &str) -> Result<CheeseDescription> {
    let file: CheeseFileV1 = serde_json::from_str(text)
        .map_err(|e| Error::MalformedDocument(e.to_string()))?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(file.format_version));
    }
    let outer = QDisc::closed(
        QPoint::new(file.outer.center_x.to_q()?, file.outer.center_y.to_q()?),
        file.outer.radius.to_q()?,
    );
    let mut stages = Vec::with_capacity(file.stages.len());
    for s in &file.stages {
        stages.push(StageParams {
            m: s.m,
            delta: s.delta.to_q()?,
            epsilon: s.epsilon.to_q()?,
            block_end: s.block_end,
            systems: s.systems,
            discs_per_system: s.discs_per_system,
        });
    }
    let mut deletions = Vec::with_capacity(file.deletions.len());
    for d in &file.deletions {
        let radius = d.radius.to_q()?;
        if !radius.is_positive() {
            return Err(Error::MalformedDocument("non-positive radius".into()));
        }
        deletions.push(Deletion {
            stage: d.stage,
            parent_index: d.parent_index,
            disc: QDisc::open(
                QPoint::new(d.center_x.to_q()?, d.center_y.to_q()?),
                radius,
            ),
        });
    }
    let mut entries = Vec::with_capacity(file.bound_table.entries.len());
    for e in &file.bound_table.entries {
        entries.push(e.to_q()?);
    }
    let cheese = CheeseDescription {
        outer,
        stages,
        deletions,
        bound_table: BoundTable {
            entries,
            block_boundaries: file.bound_table.block_boundaries.clone(),
        },
        root_precision: file.provenance.root_precision,
        seed: file.provenance.seed,
    };
    if file.provenance.stages as usize != cheese.stages.len() {
        return Err(Error::MalformedDocument(
            "provenance stage count disagrees with the stage list".into(),
        ));
    }
    let report = verify_schedule(&cheese);
    if !report.all_passed() {
        let names: Vec<&str> = report.failures().iter().map(|f| f.name.as_str()).collect();
        return Err(Error::InvariantViolation(names.join(", ")));
    }
    Ok(cheese)
}

pub fn save(c: &CheeseDescription, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, emit(c))?;
    Ok(())
}

pub fn load(path: &std::path::Path) -> Result<CheeseDescription> {
    let text = std::fs::read_to_string(path)?;
    parse(&text)
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    pub width_px: u32,
    pub show_interval: bool,
    /// Draw the capsule `K_n` for this level, if any.
    pub capsule_level: Option<u32>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width_px: 800,
            show_interval: true,
            capsule_level: Some(1),
        }
    }
}

const STAGE_COLORS: [&str; 6] = [
    "#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085",
];

/// Render the cheese as a standalone SVG. Mathematical y points up, so the
/// vertical axis is flipped into screen coordinates.
pub fn render_svg(c: &CheeseDescription, opts: &RenderOptions) -> String {
    let w = opts.width_px as f64;
    let half = 1.1f64;
    let scale = w / (2.0 * half);
    let px = |x: f64| (x + half) * scale;
    let py = |y: f64| (half - y) * scale;
    let pr = |r: f64| r * scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{w}\" \
         viewBox=\"0 0 {w} {w}\">"
    );
    let _ = writeln!(s, "  <rect width=\"{w}\" height=\"{w}\" fill=\"white\"/>");
    let (ox, oy) = c.outer.center.to_f64();
    let _ = writeln!(
        s,
        "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1.5\"/>",
        px(ox),
        py(oy),
        pr(q_to_f64(&c.outer.radius))
    );
    if let Some(level) = opts.capsule_level {
        let d = 1.0 / (level as f64 + 2.0);
        let x0 = px(-0.5 - d);
        let y0 = py(d);
        let _ = writeln!(
            s,
            "  <rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" \
             rx=\"{:.3}\" ry=\"{:.3}\" fill=\"none\" stroke=\"#888888\" \
             stroke-width=\"1\" stroke-dasharray=\"6 4\"/>",
            x0,
            y0,
            pr(1.0 + 2.0 * d),
            pr(2.0 * d),
            pr(d),
            pr(d)
        );
    }
    if opts.show_interval {
        let _ = writeln!(
            s,
            "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" \
             stroke=\"black\" stroke-width=\"3\"/>",
            px(-0.5),
            py(0.0),
            px(0.5),
            py(0.0)
        );
    }
    for d in &c.deletions {
        let color = STAGE_COLORS[(d.stage as usize - 1) % STAGE_COLORS.len()];
        let (cx, cy) = d.disc.center.to_f64();
        let _ = writeln!(
            s,
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"{color}\" \
             fill-opacity=\"0.6\" stroke=\"{color}\" stroke-width=\"0.5\"/>",
            px(cx),
            py(cy),
            pr(q_to_f64(&d.disc.radius)).max(0.4)
        );
    }
    s.push_str("</svg>\n");
    s
}
