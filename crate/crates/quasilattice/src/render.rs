//! Point-set export/import (CSV and JSON) and SVG rendering of physical and
//! window space, including a forward-iterated attractor approximation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{ConjugateIfs, IfsSpec};
use crate::pipeline::{PatternSet, PointRecord, SeedMode};
use crate::ring::FieldDescriptor;

/// Default iteration depth for attractor clouds; for five maps this yields
/// 5^8 = 390625 points per seed and contraction t^8 ~ 0.021, visually
/// converged.
pub const DEFAULT_ATTRACTOR_DEPTH: u32 = 8;

/// Maximum cloud size before `BudgetExceeded`.
pub const DEFAULT_CLOUD_BUDGET: u64 = 10_000_000;

/// Region of the physical plane to draw.
#[derive(Debug, Clone, PartialEq)]
pub enum Viewport {
    /// All points with |x| <= rho.
    Radius(f64),
    /// Axis-aligned box x1min..x1max by x2min..x2max.
    Box {
        x1: (f64, f64),
        x2: (f64, f64),
    },
}

impl Viewport {
    fn validate(&self) -> Result<()> {
        match self {
            Viewport::Radius(r) if *r > 0.0 => Ok(()),
            Viewport::Radius(r) => Err(Error::Format(format!(
                "viewport radius must be positive, got {r}"
            ))),
            Viewport::Box { x1, x2 } => {
                if x1.0 < x1.1 && x2.0 < x2.1 {
                    Ok(())
                } else {
                    Err(Error::Format(
                        "viewport box must have min < max on both axes".into(),
                    ))
                }
            }
        }
    }

    fn contains(&self, p: Complex64) -> bool {
        match self {
            Viewport::Radius(r) => p.norm() <= *r,
            Viewport::Box { x1, x2 } => {
                p.re >= x1.0 && p.re <= x1.1 && p.im >= x2.0 && p.im <= x2.1
            }
        }
    }

    /// Drawing bounds (x1min, x1max, x2min, x2max).
    fn frame(&self) -> (f64, f64, f64, f64) {
        match self {
            Viewport::Radius(r) => (-r, *r, -r, *r),
            Viewport::Box { x1, x2 } => (x1.0, x1.1, x2.0, x2.1),
        }
    }
}

/// Marker radius (in physical units) and fill color for one decoration class.
#[derive(Debug, Clone, PartialEq)]
pub struct DecorClass {
    pub radius: f64,
    pub color: String,
}

/// Which layers to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layers {
    pub points: bool,
    pub core_highlight: bool,
    pub cyclic_highlight: bool,
    pub window_points: bool,
    pub attractor: bool,
}

impl Default for Layers {
    fn default() -> Self {
        Layers {
            points: true,
            core_highlight: false,
            cyclic_highlight: false,
            window_points: false,
            attractor: false,
        }
    }
}

/// Complete drawing instructions for [`render_svg`].
#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub viewport: Viewport,
    /// Marker per predecessor count; must cover every value 1..=m.
    pub decoration: BTreeMap<u32, DecorClass>,
    pub layers: Layers,
}

impl RenderSpec {
    /// A spec drawing all points within radius rho with the default palette.
    pub fn for_pattern(pattern: &PatternSet) -> RenderSpec {
        RenderSpec {
            viewport: Viewport::Radius(pattern.rho()),
            decoration: default_decoration(pattern.ifs().map_count()),
            layers: Layers::default(),
        }
    }
}

/// The default four-class palette: predecessor counts 1-2, 3, 4..m-1, and m
/// get increasing marker radii and at most four colors.
pub fn default_decoration(m: usize) -> BTreeMap<u32, DecorClass> {
    let class = |radius: f64, color: &str| DecorClass {
        radius,
        color: color.to_string(),
    };
    let mut map = BTreeMap::new();
    for p in 1..=m as u32 {
        let c = if p == m as u32 {
            class(0.18, "#c0392b")
        } else if p <= 2 {
            class(0.08, "#4a6fa5")
        } else if p == 3 {
            class(0.11, "#3f9e6e")
        } else {
            class(0.14, "#d08a2e")
        };
        map.insert(p, c);
    }
    map
}

/// A forward-iterated approximation of a contracting system's attractor.
#[derive(Debug, Clone)]
pub struct AttractorCloud {
    /// Internal plane the cloud lives in.
    pub plane: usize,
    pub depth: u32,
    pub points: Vec<Complex64>,
}

/// Apply all depth-fold compositions of the contracting maps to the seeds.
///
/// With no explicit seeds, the fixed points of the maps are used, so every
/// cloud point lies exactly on the attractor. The cloud has
/// seeds * m^depth points and converges to the attractor in Hausdorff
/// distance at the contraction rate.
pub fn attractor_approx(
    conj: &ConjugateIfs,
    depth: u32,
    seeds: Option<&[Complex64]>,
) -> Result<AttractorCloud> {
    let m = conj.map_count() as u64;
    let default_seeds: Vec<Complex64>;
    let seeds = match seeds {
        Some(s) => s,
        None => {
            default_seeds = (0..conj.map_count())
                .map(|k| conj.fixed_point_value(k))
                .collect();
            &default_seeds
        }
    };
    let mut total = seeds.len() as u64;
    for _ in 0..depth {
        total = total.saturating_mul(m);
        if total > DEFAULT_CLOUD_BUDGET {
            return Err(Error::BudgetExceeded {
                points: total,
                budget: DEFAULT_CLOUD_BUDGET,
            });
        }
    }
    let mut points = seeds.to_vec();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(points.len() * conj.map_count());
        for k in 0..conj.map_count() {
            for &p in &points {
                next.push(conj.apply_point(k, p));
            }
        }
        points = next;
    }
    Ok(AttractorCloud {
        plane: conj.plane(),
        depth,
        points,
    })
}

fn sorted_records(pattern: &PatternSet) -> Vec<&PointRecord> {
    let mut recs: Vec<&PointRecord> = pattern.points().iter().collect();
    recs.sort_by(|a, b| a.elem.coords().cmp(b.elem.coords()));
    recs
}

/// Export format for [`export_points`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

#[derive(Serialize, Deserialize)]
struct ExportMeta {
    field: FieldDescriptor,
    beta: Vec<i64>,
    translations: Vec<Vec<i64>>,
    rho: f64,
    seed_mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seeds: Option<Vec<Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
struct ExportPoint {
    coords: Vec<i64>,
    phys: [f64; 2],
    internal: Vec<[f64; 2]>,
    pred_count: u32,
    is_cyclic: bool,
    is_core: bool,
}

#[derive(Serialize, Deserialize)]
struct ExportDoc {
    meta: ExportMeta,
    points: Vec<ExportPoint>,
}

fn export_meta(pattern: &PatternSet) -> ExportMeta {
    let ifs = pattern.ifs();
    let (seed_mode, seeds) = match pattern.seed_mode() {
        SeedMode::AllCycles => ("all_cycles".to_string(), None),
        SeedMode::Seeds(list) => (
            "seeds".to_string(),
            Some(list.iter().map(|x| x.coords().to_vec()).collect()),
        ),
    };
    ExportMeta {
        field: ifs.field().descriptor().clone(),
        beta: ifs.beta().coords().to_vec(),
        translations: ifs
            .translations()
            .iter()
            .map(|z| z.coords().to_vec())
            .collect(),
        rho: pattern.rho(),
        seed_mode,
        seeds,
    }
}

/// Serialize a pattern, one record per point in lexicographic coordinate
/// order: integer coordinates, physical position, internal positions,
/// predecessor count, and the cyclic/core flags.
///
/// CSV carries the records only; JSON wraps them with a `meta` object that
/// fully describes the generating system, so [`import_json`] can reconstruct
/// the pattern without further context.
pub fn export_points(pattern: &PatternSet, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Csv => export_csv(pattern),
        ExportFormat::Json => export_json(pattern),
    }
}

fn export_csv(pattern: &PatternSet) -> Result<String> {
    let field = pattern.ifs().field();
    let d = field.degree();
    let planes = field.internal_planes();
    let mut out = String::new();
    for i in 0..d {
        write!(out, "c{i},").unwrap();
    }
    out.push_str("x1,x2,");
    for j in 0..planes {
        write!(out, "int{j}_x1,int{j}_x2,").unwrap();
    }
    out.push_str("pred_count,is_cyclic,is_core\n");
    for rec in sorted_records(pattern) {
        for c in rec.elem.coords() {
            write!(out, "{c},").unwrap();
        }
        write!(out, "{},{},", fmt_f64(rec.phys.re), fmt_f64(rec.phys.im)).unwrap();
        for j in 0..planes {
            let w = rec.elem.internal(j);
            write!(out, "{},{},", fmt_f64(w.re), fmt_f64(w.im)).unwrap();
        }
        writeln!(
            out,
            "{},{},{}",
            rec.pred_count, rec.is_cyclic, rec.is_core
        )
        .unwrap();
    }
    Ok(out)
}

/// Full-precision float formatting that survives a parse round-trip.
fn fmt_f64(v: f64) -> String {
    format!("{v:.17}")
}

fn export_json(pattern: &PatternSet) -> Result<String> {
    let field = pattern.ifs().field();
    let planes = field.internal_planes();
    let points = sorted_records(pattern)
        .into_iter()
        .map(|rec| ExportPoint {
            coords: rec.elem.coords().to_vec(),
            phys: [rec.phys.re, rec.phys.im],
            internal: (0..planes)
                .map(|j| {
                    let w = rec.elem.internal(j);
                    [w.re, w.im]
                })
                .collect(),
            pred_count: rec.pred_count,
            is_cyclic: rec.is_cyclic,
            is_core: rec.is_core,
        })
        .collect();
    let doc = ExportDoc {
        meta: export_meta(pattern),
        points,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Format(e.to_string()))
}

/// Rebuild a pattern from CSV produced by [`export_points`]. CSV carries no
/// system description, so the generating system and cutoff radius must be
/// supplied; the rebuilt pattern is tagged [`SeedMode::AllCycles`].
pub fn import_csv(text: &str, ifs: &Arc<IfsSpec>, rho: f64) -> Result<PatternSet> {
    let d = ifs.field().degree();
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty CSV document".into()))?;
    let expected_cols = d + 2 + 2 * ifs.field().internal_planes() + 3;
    if header.split(',').count() != expected_cols {
        return Err(Error::Format(format!(
            "CSV header has {} columns, expected {expected_cols}",
            header.split(',').count()
        )));
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != expected_cols {
            return Err(Error::Format(format!(
                "CSV line {}: {} columns, expected {expected_cols}",
                lineno + 2,
                cols.len()
            )));
        }
        let mut coords = Vec::with_capacity(d);
        for c in &cols[..d] {
            coords.push(
                c.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Format(format!("CSV line {}: {e}", lineno + 2)))?,
            );
        }
        let elem = ifs.field().from_coords(&coords)?;
        let parse_flag = |s: &str| -> Result<bool> {
            s.trim()
                .parse::<bool>()
                .map_err(|e| Error::Format(format!("CSV line {}: {e}", lineno + 2)))
        };
        let pred_count = cols[expected_cols - 3]
            .trim()
            .parse::<u32>()
            .map_err(|e| Error::Format(format!("CSV line {}: {e}", lineno + 2)))?;
        let phys = elem.physical();
        records.push(PointRecord {
            elem,
            phys,
            pred_count,
            is_cyclic: parse_flag(cols[expected_cols - 2])?,
            is_core: parse_flag(cols[expected_cols - 1])?,
        });
    }
    PatternSet::from_parts(Arc::clone(ifs), rho, SeedMode::AllCycles, records)
}

/// Rebuild a pattern from self-describing JSON produced by [`export_points`].
pub fn import_json(text: &str) -> Result<PatternSet> {
    let doc: ExportDoc =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let field = crate::ring::FieldSpec::from_descriptor(&doc.meta.field)?;
    let beta = field.from_coords(&doc.meta.beta)?;
    let translations = doc
        .meta
        .translations
        .iter()
        .map(|c| field.from_coords(c))
        .collect::<Result<Vec<_>>>()?;
    let ifs = crate::ifs::make_ifs(&field, beta, translations)?;
    let seed_mode = match doc.meta.seed_mode.as_str() {
        "all_cycles" => SeedMode::AllCycles,
        "seeds" => {
            let seeds = doc
                .meta
                .seeds
                .as_ref()
                .ok_or_else(|| Error::Format("seed_mode \"seeds\" without seeds".into()))?
                .iter()
                .map(|c| field.from_coords(c))
                .collect::<Result<Vec<_>>>()?;
            SeedMode::Seeds(seeds)
        }
        other => {
            return Err(Error::Format(format!("unknown seed_mode {other:?}")));
        }
    };
    let mut records = Vec::with_capacity(doc.points.len());
    for p in &doc.points {
        let elem = field.from_coords(&p.coords)?;
        let phys = elem.physical();
        records.push(PointRecord {
            elem,
            phys,
            pred_count: p.pred_count,
            is_cyclic: p.is_cyclic,
            is_core: p.is_core,
        });
    }
    PatternSet::from_parts(ifs, doc.meta.rho, seed_mode, records)
}

fn fmt3(v: f64) -> String {
    format!("{v:.3}")
}

/// Draw the pattern as an SVG 1.1 document: one circle per point in the
/// viewport, radius and color per the decoration map, y-axis flipped to
/// mathematical orientation. Optional layers add highlight rings around core
/// or cyclic points and a window panel showing the internal-plane images of
/// all pattern points over an attractor cloud.
pub fn render_svg(pattern: &PatternSet, spec: &RenderSpec) -> Result<String> {
    spec.viewport.validate()?;
    let m = pattern.ifs().map_count() as u32;
    for p in 1..=m {
        if !spec.decoration.contains_key(&p) {
            return Err(Error::Format(format!(
                "decoration map lacks an entry for predecessor count {p}"
            )));
        }
    }

    const SCALE: f64 = 20.0;
    let (x1min, x1max, x2min, x2max) = spec.viewport.frame();
    let width = (x1max - x1min) * SCALE;
    let height = (x2max - x2min) * SCALE;
    // Window panel goes to the right of the physical frame when requested.
    let window_panel = spec.layers.window_points || spec.layers.attractor;
    let panel_gap = if window_panel { 0.05 * width.max(1.0) } else { 0.0 };
    let panel_width = if window_panel { height } else { 0.0 };
    let total_width = width + panel_gap + panel_width;

    // Physical coordinates map as (x, y) -> ((x - x1min), (x2max - y)) * SCALE.
    let px = |x: f64| fmt3((x - x1min) * SCALE);
    let py = |y: f64| fmt3((x2max - y) * SCALE);

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = fmt3(total_width),
        h = fmt3(height)
    )
    .unwrap();
    writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
        fmt3(width),
        fmt3(height)
    )
    .unwrap();

    if spec.layers.points || spec.layers.core_highlight || spec.layers.cyclic_highlight {
        writeln!(out, "  <g id=\"points\">").unwrap();
        for rec in sorted_records(pattern) {
            if !spec.viewport.contains(rec.phys) {
                continue;
            }
            let decor = &spec.decoration[&rec.pred_count.clamp(1, m)];
            if spec.layers.points {
                writeln!(
                    out,
                    "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
                    px(rec.phys.re),
                    py(rec.phys.im),
                    fmt3(decor.radius * SCALE),
                    decor.color
                )
                .unwrap();
            }
            let highlight = (spec.layers.core_highlight && rec.is_core)
                || (spec.layers.cyclic_highlight && rec.is_cyclic);
            if highlight {
                let stroke = if spec.layers.cyclic_highlight && rec.is_cyclic {
                    "#222222"
                } else {
                    "#888888"
                };
                writeln!(
                    out,
                    "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" \
                     stroke=\"{stroke}\" stroke-width=\"1\"/>",
                    px(rec.phys.re),
                    py(rec.phys.im),
                    fmt3((decor.radius + 0.06) * SCALE),
                )
                .unwrap();
            }
        }
        writeln!(out, "  </g>").unwrap();
    }

    if window_panel {
        // The window panel is a square panel showing internal plane 0,
        // scaled so the attractor bound fits.
        let ifs = pattern.ifs();
        let bounds = crate::ifs::compute_bounds(ifs);
        let c_att = bounds.c_internal.first().copied().unwrap_or(1.0);
        let extent = c_att * 1.1;
        let wscale = panel_width / (2.0 * extent);
        let ox = width + panel_gap;
        let wx = |x: f64| fmt3(ox + (x + extent) * wscale);
        let wy = |y: f64| fmt3((extent - y) * wscale);
        writeln!(
            out,
            "  <rect x=\"{}\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#f7f7f7\"/>",
            fmt3(ox),
            fmt3(panel_width),
            fmt3(height)
        )
        .unwrap();
        if spec.layers.attractor {
            let conj = ifs.conjugate_ifs(0)?;
            let depth = suggested_attractor_depth(ifs.map_count());
            let cloud = attractor_approx(&conj, depth, None)?;
            writeln!(out, "  <g id=\"attractor\" fill=\"#c9c9c9\">").unwrap();
            for p in &cloud.points {
                writeln!(
                    out,
                    "    <circle cx=\"{}\" cy=\"{}\" r=\"0.5\"/>",
                    wx(p.re),
                    wy(p.im)
                )
                .unwrap();
            }
            writeln!(out, "  </g>").unwrap();
        }
        if spec.layers.window_points {
            writeln!(out, "  <g id=\"window-points\" fill=\"#1f4e89\">").unwrap();
            for rec in sorted_records(pattern) {
                let w = rec.elem.internal(0);
                writeln!(
                    out,
                    "    <circle cx=\"{}\" cy=\"{}\" r=\"1.2\"/>",
                    wx(w.re),
                    wy(w.im)
                )
                .unwrap();
            }
            writeln!(out, "  </g>").unwrap();
        }
    }

    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

/// Depth giving a dense but drawable default cloud. The default seeding
/// starts from all m fixed points, so the cloud holds m^(depth+1) points;
/// this picks the largest depth keeping that within 60000 markers.
pub fn suggested_attractor_depth(m: usize) -> u32 {
    let mut depth = 0u32;
    let mut total = m.max(1) as u64;
    while total.saturating_mul(m as u64) <= 60_000 {
        total *= m as u64;
        depth += 1;
    }
    depth
}
