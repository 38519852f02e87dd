//! Job configuration: a small `key = value` document describing the field,
//! the expanding system, the window variant, and run parameters.
//!
//! Statements are separated by newlines or semicolons; `#` starts a comment.
//! Recognized keys:
//!
//! ```text
//! field   = cyclotomic(5) | complex_pisot(c0, c1, ..., 1)
//! beta    = <scalar expression>
//! maps    = <set expression>
//! window  = compact | seeds          (default compact)
//! seeds   = <set expression>         (required iff window = seeds)
//! rho     = <positive float>
//! N       = <positive integer>       (optional: skip the stabilization search)
//! out     = <output stem>            (optional)
//! format  = csv | json               (default csv)
//! lattice_budget = <integer>         (optional)
//! point_budget   = <integer>         (optional)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use quasilattice::ifs::{make_ifs, IfsSpec};
use quasilattice::pipeline::{
    BuildOptions, WindowVariant, DEFAULT_LATTICE_BUDGET, DEFAULT_POINT_BUDGET,
};
use quasilattice::render::ExportFormat;
use quasilattice::ring::{FieldDescriptor, FieldSpec};

use crate::errors::{CliError, Result};
use crate::expr::{parse_ring_expr, parse_set_expr, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    Compact,
    Seeds,
}

/// A parsed and validated job description. Expressions are kept as written,
/// so a config can be emitted and re-parsed without loss.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub field: FieldDescriptor,
    pub beta: String,
    pub maps: String,
    pub window: WindowKind,
    pub seeds: Option<String>,
    pub rho: f64,
    pub n_override: Option<u32>,
    pub out: Option<String>,
    pub format: ExportFormat,
    pub lattice_budget: u64,
    pub point_budget: u64,
}

/// A config instantiated into exact objects, ready for the pipeline.
pub struct Job {
    pub ifs: Arc<IfsSpec>,
    pub variant: WindowVariant,
    pub rho: f64,
    pub options: BuildOptions,
}

impl JobConfig {
    /// Instantiate the expressions against the field and validate the system.
    pub fn instantiate(&self) -> Result<Job> {
        let field = FieldSpec::from_descriptor(&self.field)?;
        let origin = Span { line: 1, col: 1 };
        let beta = parse_ring_expr(&self.beta, &field, origin)?;
        let maps = parse_set_expr(&self.maps, &field, origin)?;
        let ifs = make_ifs(&field, beta, maps)?;
        let variant = match self.window {
            WindowKind::Compact => WindowVariant::Compact,
            WindowKind::Seeds => {
                let text = self.seeds.as_ref().expect("validated at parse time");
                WindowVariant::Seeds(parse_set_expr(text, &field, origin)?)
            }
        };
        Ok(Job {
            ifs,
            variant,
            rho: self.rho,
            options: BuildOptions {
                n_override: self.n_override,
                lattice_budget: self.lattice_budget,
                point_budget: self.point_budget,
                ..BuildOptions::default()
            },
        })
    }

    /// Render the config as a document that [`parse_config`] accepts;
    /// parsing it back yields an identical `JobConfig`.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        match &self.field {
            FieldDescriptor::Cyclotomic { n } => {
                writeln!(out, "field = cyclotomic({n})").unwrap();
            }
            FieldDescriptor::ComplexPisot { min_poly } => {
                let coeffs: Vec<String> = min_poly.iter().map(i64::to_string).collect();
                writeln!(out, "field = complex_pisot({})", coeffs.join(", ")).unwrap();
            }
        }
        writeln!(out, "beta = {}", self.beta).unwrap();
        writeln!(out, "maps = {}", self.maps).unwrap();
        let window = match self.window {
            WindowKind::Compact => "compact",
            WindowKind::Seeds => "seeds",
        };
        writeln!(out, "window = {window}").unwrap();
        if let Some(seeds) = &self.seeds {
            writeln!(out, "seeds = {seeds}").unwrap();
        }
        writeln!(out, "rho = {}", self.rho).unwrap();
        if let Some(n) = self.n_override {
            writeln!(out, "N = {n}").unwrap();
        }
        if let Some(stem) = &self.out {
            writeln!(out, "out = {stem}").unwrap();
        }
        if self.format != ExportFormat::Csv {
            writeln!(out, "format = json").unwrap();
        }
        if self.lattice_budget != DEFAULT_LATTICE_BUDGET {
            writeln!(out, "lattice_budget = {}", self.lattice_budget).unwrap();
        }
        if self.point_budget != DEFAULT_POINT_BUDGET {
            writeln!(out, "point_budget = {}", self.point_budget).unwrap();
        }
        out
    }
}

/// One `key = value` statement with the position of its value.
struct Statement<'a> {
    key: &'a str,
    key_span: Span,
    value: &'a str,
    value_span: Span,
}

fn split_statements(text: &str) -> Result<Vec<Statement<'_>>> {
    let mut statements = Vec::new();
    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let without_comment = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let mut col_base = 1;
        for piece in without_comment.split(';') {
            let trimmed = piece.trim();
            if !trimmed.is_empty() {
                let eq = piece.find('=').ok_or_else(|| {
                    CliError::parse(
                        line_no,
                        col_base + (piece.len() - piece.trim_start().len()),
                        "expected 'key = value'",
                    )
                })?;
                let key_part = &piece[..eq];
                let value_part = &piece[eq + 1..];
                let key = key_part.trim();
                if key.is_empty() {
                    return Err(CliError::parse(line_no, col_base + eq, "missing key before '='"));
                }
                let value = value_part.trim();
                if value.is_empty() {
                    return Err(CliError::parse(
                        line_no,
                        col_base + eq + 1,
                        format!("missing value for key {key:?}"),
                    ));
                }
                let key_col = col_base + (key_part.len() - key_part.trim_start().len());
                let value_col =
                    col_base + eq + 1 + (value_part.len() - value_part.trim_start().len());
                statements.push(Statement {
                    key,
                    key_span: Span {
                        line: line_no,
                        col: key_col,
                    },
                    value,
                    value_span: Span {
                        line: line_no,
                        col: value_col,
                    },
                });
            }
            col_base += piece.len() + 1;
        }
    }
    Ok(statements)
}

fn parse_field_descriptor(value: &str, span: Span) -> Result<FieldDescriptor> {
    let fail = |msg: String| CliError::parse(span.line, span.col, msg);
    let open = value
        .find('(')
        .ok_or_else(|| fail("expected cyclotomic(n) or complex_pisot(c0, ..., 1)".into()))?;
    if !value.ends_with(')') {
        return Err(fail("missing closing ')' in field descriptor".into()));
    }
    let name = value[..open].trim();
    let args = &value[open + 1..value.len() - 1];
    match name {
        "cyclotomic" => {
            let n: u32 = args
                .trim()
                .parse()
                .map_err(|e| fail(format!("bad cyclotomic order: {e}")))?;
            Ok(FieldDescriptor::Cyclotomic { n })
        }
        "complex_pisot" => {
            let coeffs: Vec<i64> = args
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<i64>()
                        .map_err(|e| fail(format!("bad coefficient {:?}: {e}", c.trim())))
                })
                .collect::<Result<_>>()?;
            Ok(FieldDescriptor::ComplexPisot { min_poly: coeffs })
        }
        other => Err(fail(format!(
            "unknown field kind {other:?} (expected cyclotomic or complex_pisot)"
        ))),
    }
}

/// Parse and validate a config document. Validation instantiates the field
/// and system once, so NotPisot/NotAUnit problems surface here with the
/// source position of the offending expression.
pub fn parse_config(text: &str) -> Result<JobConfig> {
    let statements = split_statements(text)?;
    let mut seen: HashMap<&str, Span> = HashMap::new();
    let mut field: Option<(FieldDescriptor, Span)> = None;
    let mut beta: Option<(String, Span)> = None;
    let mut maps: Option<(String, Span)> = None;
    let mut window: Option<(WindowKind, Span)> = None;
    let mut seeds: Option<(String, Span)> = None;
    let mut rho: Option<f64> = None;
    let mut n_override: Option<u32> = None;
    let mut out: Option<String> = None;
    let mut format = ExportFormat::Csv;
    let mut lattice_budget = DEFAULT_LATTICE_BUDGET;
    let mut point_budget = DEFAULT_POINT_BUDGET;

    for st in &statements {
        if let Some(prev) = seen.insert(st.key, st.key_span) {
            return Err(CliError::parse(
                st.key_span.line,
                st.key_span.col,
                format!(
                    "duplicate key {:?} (first given at line {}, column {})",
                    st.key, prev.line, prev.col
                ),
            ));
        }
        let vfail = |msg: String| CliError::parse(st.value_span.line, st.value_span.col, msg);
        match st.key {
            "field" => field = Some((parse_field_descriptor(st.value, st.value_span)?, st.value_span)),
            "beta" => beta = Some((st.value.to_string(), st.value_span)),
            "maps" => maps = Some((st.value.to_string(), st.value_span)),
            "window" => {
                let kind = match st.value {
                    "compact" => WindowKind::Compact,
                    "seeds" => WindowKind::Seeds,
                    other => {
                        return Err(vfail(format!(
                            "unknown window {other:?} (expected compact or seeds)"
                        )));
                    }
                };
                window = Some((kind, st.value_span));
            }
            "seeds" => seeds = Some((st.value.to_string(), st.value_span)),
            "rho" => {
                let v: f64 = st
                    .value
                    .parse()
                    .map_err(|e| vfail(format!("bad rho: {e}")))?;
                if !(v > 0.0 && v.is_finite()) {
                    return Err(vfail(format!("rho must be a positive number, got {v}")));
                }
                rho = Some(v);
            }
            "N" => {
                let v: u32 = st
                    .value
                    .parse()
                    .map_err(|e| vfail(format!("bad N: {e}")))?;
                if v == 0 {
                    return Err(vfail("N must be at least 1".into()));
                }
                n_override = Some(v);
            }
            "out" => out = Some(st.value.to_string()),
            "format" => {
                format = match st.value {
                    "csv" => ExportFormat::Csv,
                    "json" => ExportFormat::Json,
                    other => {
                        return Err(vfail(format!(
                            "unknown format {other:?} (expected csv or json)"
                        )));
                    }
                };
            }
            "lattice_budget" => {
                lattice_budget = st
                    .value
                    .parse()
                    .map_err(|e| vfail(format!("bad lattice_budget: {e}")))?;
            }
            "point_budget" => {
                point_budget = st
                    .value
                    .parse()
                    .map_err(|e| vfail(format!("bad point_budget: {e}")))?;
            }
            other => {
                return Err(CliError::parse(
                    st.key_span.line,
                    st.key_span.col,
                    format!("unknown key {other:?}"),
                ));
            }
        }
    }

    let missing = |key: &str| CliError::parse(1, 1, format!("missing required key {key:?}"));
    let (field, _) = field.ok_or_else(|| missing("field"))?;
    let (beta, beta_span) = beta.ok_or_else(|| missing("beta"))?;
    let (maps, maps_span) = maps.ok_or_else(|| missing("maps"))?;
    let window_kind = window.map_or(WindowKind::Compact, |(k, _)| k);
    let rho = rho.ok_or_else(|| missing("rho"))?;
    if window_kind == WindowKind::Seeds && seeds.is_none() {
        return Err(CliError::parse(
            1,
            1,
            "window = seeds requires a seeds = ... statement",
        ));
    }
    if let (WindowKind::Compact, Some((_, span))) = (window_kind, &seeds) {
        return Err(CliError::parse(
            span.line,
            span.col,
            "seeds are only meaningful with window = seeds",
        ));
    }

    let config = JobConfig {
        field,
        beta,
        maps,
        window: window_kind,
        seeds: seeds.map(|(s, _)| s),
        rho,
        n_override,
        out,
        format,
        lattice_budget,
        point_budget,
    };

    // Validate the expressions and the system once, with positions restored.
    let field_spec = FieldSpec::from_descriptor(&config.field)?;
    let beta_elem = parse_ring_expr(&config.beta, &field_spec, beta_span)?;
    let map_elems = parse_set_expr(&config.maps, &field_spec, maps_span)?;
    make_ifs(&field_spec, beta_elem, map_elems)?;
    if let Some(text) = &config.seeds {
        let span = seen.get("seeds").copied().unwrap_or(Span { line: 1, col: 1 });
        parse_set_expr(text, &field_spec, span)?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "\
field = cyclotomic(5)
beta = 1 + z^1 + z^4
maps = roots_of_unity(5)
window = compact
rho = 30
";

    #[test]
    fn parses_the_basic_document() {
        let cfg = parse_config(BASIC).unwrap();
        assert_eq!(cfg.field, FieldDescriptor::Cyclotomic { n: 5 });
        assert_eq!(cfg.beta, "1 + z^1 + z^4");
        assert_eq!(cfg.window, WindowKind::Compact);
        assert_eq!(cfg.rho, 30.0);
        let job = cfg.instantiate().unwrap();
        assert_eq!(job.ifs.map_count(), 5);
    }

    #[test]
    fn semicolons_and_comments_are_accepted() {
        let cfg = parse_config(
            "field=cyclotomic(5); beta=1+z^1+z^4 # golden ratio\nmaps=roots_of_unity(5); rho=10",
        )
        .unwrap();
        assert_eq!(cfg.rho, 10.0);
        assert_eq!(cfg.beta, "1+z^1+z^4");
    }

    #[test]
    fn emit_round_trips() {
        let cfg = parse_config(BASIC).unwrap();
        let emitted = cfg.emit();
        let back = parse_config(&emitted).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn seeds_window_round_trips() {
        let text = "\
field = cyclotomic(5)
beta = (1 + z^1 + z^4)^2
maps = roots_of_unity(10) + {0}
window = seeds
seeds = {0}
rho = 50
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.window, WindowKind::Seeds);
        let back = parse_config(&cfg.emit()).unwrap();
        assert_eq!(cfg, back);
        let job = cfg.instantiate().unwrap();
        assert!(matches!(job.variant, WindowVariant::Seeds(ref s) if s.len() == 1));
    }

    #[test]
    fn non_pisot_beta_is_a_validation_error() {
        let err = parse_config(
            "field = cyclotomic(5)\nbeta = z^1\nmaps = roots_of_unity(5)\nrho = 10",
        )
        .unwrap_err();
        match err {
            CliError::Lib(quasilattice::Error::NotPisot(_)) => {}
            other => panic!("expected NotPisot, got {other:?}"),
        }
        assert_eq!(
            parse_config("field = cyclotomic(5)\nbeta = z^1\nmaps = roots_of_unity(5)\nrho = 10")
                .unwrap_err()
                .exit_code(),
            3
        );
    }

    #[test]
    fn expression_errors_carry_document_positions() {
        let err = parse_config(
            "field = cyclotomic(5)\nbeta = 1 + q\nmaps = roots_of_unity(5)\nrho = 10",
        )
        .unwrap_err();
        match err {
            CliError::Parse { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 12);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_unknown_keys_are_rejected() {
        assert!(parse_config("field = cyclotomic(5)\nfield = cyclotomic(8)").is_err());
        let err = parse_config("rho = 1\nshape = round").unwrap_err();
        match err {
            CliError::Parse { line: 2, col: 1, msg } => assert!(msg.contains("shape")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_required_keys_are_reported() {
        let err = parse_config("field = cyclotomic(5)\nrho = 1").unwrap_err();
        match err {
            CliError::Parse { msg, .. } => assert!(msg.contains("beta")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn seeds_without_seeds_window_is_rejected() {
        let text = "\
field = cyclotomic(5)
beta = 1 + z^1 + z^4
maps = roots_of_unity(5)
seeds = {0}
rho = 10
";
        assert!(parse_config(text).is_err());
    }
}
