//! Renderings of command results: a versioned JSON record, CSV tables and
//! plain text.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use steklov_core::{
    BoxCandidate, BoxSpectrum, BoxSweepRow, Family, RectClass, RectSpectrum, RectSweepRow,
};

use crate::verify::{ConvergenceRow, DtnOracleResult, ResidualReport};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// The single JSON object emitted per invocation.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Vec<Note>,
}

/// Per-family remark: a family without a solution, a skipped check, a
/// failed sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Note {
    pub family: String,
    pub message: String,
}

impl OutputRecord {
    pub fn new(command: &str, inputs: Value, results: Value, diagnostics: Vec<Note>) -> Self {
        OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            results,
            diagnostics,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}

/// A CSV table with a mandatory header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

/// 17 significant digits; empty for non-finite values.
pub fn csv_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

fn opt_number(x: Option<f64>) -> String {
    x.map(csv_number).unwrap_or_default()
}

/// Seven decimals, `-` for non-finite values.
fn human(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.7}")
    } else {
        "-".to_string()
    }
}

fn join_families(families: &[Family]) -> String {
    families
        .iter()
        .map(Family::label)
        .collect::<Vec<_>>()
        .join("; ")
}

fn join_classes(classes: &[RectClass]) -> String {
    classes
        .iter()
        .map(|c| c.tag())
        .collect::<Vec<_>>()
        .join(";")
}

fn family_kind(f: &Family) -> &'static str {
    match f {
        Family::Constant => "constant",
        Family::Separated(_) => "separated",
        Family::Linear(_) => "linear",
        Family::Xyz => "xyz",
    }
}

/// Rectangle spectrum on the normalised domain; `scale` is half the longer
/// side of the rectangle that was asked for.
pub fn rect_results(s: &RectSpectrum, scale: f64) -> Value {
    let candidates: Vec<Value> = s
        .candidates
        .iter()
        .map(|c| {
            json!({
                "class": c.class.tag(),
                "eigenfunction": c.class.formula(),
                "nu": c.nu,
                "sigma": c.sigma,
                "residual": c.residual,
                "in_eigenspace": s.eigenspace.contains(&c.class),
            })
        })
        .collect();
    json!({
        "a": s.a,
        "scale": scale,
        "perimeter": 4.0 * (1.0 + s.a),
        "candidates": candidates,
        "sigma1": s.sigma1,
        "sigma1_unscaled": s.sigma1 / scale,
        "eigenspace": s.eigenspace.iter().map(|c| c.tag()).collect::<Vec<_>>(),
        "multiplicity": s.multiplicity(),
        "invariant": s.invariant,
    })
}

pub fn rect_table(s: &RectSpectrum) -> Table {
    let mut t = Table::new(&[
        "row",
        "class",
        "nu",
        "sigma",
        "residual",
        "in_eigenspace",
        "invariant",
    ]);
    for c in &s.candidates {
        t.push(vec![
            "candidate".into(),
            c.class.tag().into(),
            csv_number(c.nu),
            csv_number(c.sigma),
            csv_number(c.residual),
            s.eigenspace.contains(&c.class).to_string(),
            String::new(),
        ]);
    }
    t.push(vec![
        "summary".into(),
        join_classes(&s.eigenspace),
        String::new(),
        csv_number(s.sigma1),
        String::new(),
        String::new(),
        csv_number(s.invariant),
    ]);
    t
}

pub fn rect_human(s: &RectSpectrum, scale: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "rectangle [-1,1]x[-a,a], a = {}", human(s.a));
    if scale != 1.0 {
        let _ = writeln!(
            out,
            "scale {} (eigenvalues of the given rectangle are sigma/scale)",
            human(scale)
        );
    }
    let _ = writeln!(
        out,
        "{:<7} {:<22} {:>12} {:>12}",
        "class", "eigenfunction", "nu", "sigma"
    );
    for c in &s.candidates {
        let mark = if s.eigenspace.contains(&c.class) {
            " *"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "{:<7} {:<22} {:>12} {:>12}{mark}",
            c.class.tag(),
            c.class.formula(),
            human(c.nu),
            human(c.sigma)
        );
    }
    let _ = writeln!(
        out,
        "sigma1 = {} (multiplicity {}: {})",
        human(s.sigma1),
        s.multiplicity(),
        join_classes(&s.eigenspace)
    );
    let _ = writeln!(out, "invariant sigma1*perimeter = {}", human(s.invariant));
    out
}

fn box_candidate_json(c: &BoxCandidate, in_eigenspace: bool) -> Value {
    json!({
        "family": c.family.label(),
        "kind": family_kind(&c.family),
        "parity": c.family.parity().to_string(),
        "lambda1": c.lambda1,
        "lambda2": c.lambda2,
        "mu": c.mu,
        "sigma": c.sigma,
        "residuals": c.residuals,
        "max_residual": c.max_residual(),
        "in_eigenspace": in_eigenspace,
    })
}

pub fn box_results(s: &BoxSpectrum) -> Value {
    let candidates: Vec<Value> = s
        .candidates
        .iter()
        .map(|c| box_candidate_json(c, s.eigenspace.contains(&c.family)))
        .collect();
    json!({
        "dims": s.dims.half_lengths(),
        "surface_area": s.dims.surface_area(),
        "candidates": candidates,
        "sigma1": s.sigma1,
        "eigenspace": s.eigenspace.iter().map(Family::label).collect::<Vec<_>>(),
        "multiplicity": s.multiplicity(),
        "invariant": s.invariant,
    })
}

pub fn box_notes(s: &BoxSpectrum) -> Vec<Note> {
    s.diagnostics
        .iter()
        .map(|d| Note {
            family: d.family.label(),
            message: d.message.clone(),
        })
        .collect()
}

pub fn box_table(s: &BoxSpectrum) -> Table {
    let mut t = Table::new(&[
        "row",
        "family",
        "parity",
        "lambda1",
        "lambda2",
        "mu",
        "sigma",
        "max_residual",
        "in_eigenspace",
        "invariant",
    ]);
    for c in &s.candidates {
        t.push(vec![
            "candidate".into(),
            c.family.label(),
            c.family.parity().to_string(),
            csv_number(c.lambda1),
            csv_number(c.lambda2),
            csv_number(c.mu),
            csv_number(c.sigma),
            csv_number(c.max_residual()),
            s.eigenspace.contains(&c.family).to_string(),
            String::new(),
        ]);
    }
    t.push(vec![
        "summary".into(),
        join_families(&s.eigenspace),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        csv_number(s.sigma1),
        String::new(),
        String::new(),
        csv_number(s.invariant),
    ]);
    t
}

pub fn box_human(s: &BoxSpectrum) -> String {
    let [a, b, c] = s.dims.half_lengths();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "box [-a,a]x[-b,b]x[-c,c], (a, b, c) = ({}, {}, {})",
        human(a),
        human(b),
        human(c)
    );
    let _ = writeln!(
        out,
        "{:<36} {:>6} {:>12} {:>12} {:>12} {:>12}",
        "family", "parity", "lambda1", "lambda2", "mu", "sigma"
    );
    let mut order: Vec<&BoxCandidate> = s.candidates.iter().collect();
    order.sort_by(|p, q| p.sigma.total_cmp(&q.sigma));
    for cand in order {
        let mark = if s.eigenspace.contains(&cand.family) {
            " *"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "{:<36} {:>6} {:>12} {:>12} {:>12} {:>12}{mark}",
            cand.family.label(),
            cand.family.parity().to_string(),
            human(cand.lambda1),
            human(cand.lambda2),
            human(cand.mu),
            human(cand.sigma)
        );
    }
    for d in &s.diagnostics {
        let _ = writeln!(out, "note: {}: {}", d.family, d.message);
    }
    let _ = writeln!(
        out,
        "sigma1 = {} (multiplicity {}: {})",
        human(s.sigma1),
        s.multiplicity(),
        join_families(&s.eigenspace)
    );
    let _ = writeln!(out, "invariant sigma1*sqrt(area) = {}", human(s.invariant));
    out
}

pub fn rect_sweep_results(rows: &[RectSweepRow]) -> Value {
    let rows_json: Vec<Value> = rows
        .iter()
        .map(|r| match &r.outcome {
            Ok(s) => {
                let per_class: serde_json::Map<String, Value> = RectClass::SEPARATED
                    .iter()
                    .map(|&c| (c.tag().to_string(), json!(s.candidate(c).map(|x| x.sigma))))
                    .collect();
                json!({
                    "a": r.a,
                    "sigma1": s.sigma1,
                    "invariant": s.invariant,
                    "attaining_family": join_classes(&s.eigenspace),
                    "candidates": per_class,
                    "error": null,
                })
            }
            Err(e) => json!({
                "a": r.a,
                "sigma1": null,
                "invariant": null,
                "attaining_family": null,
                "candidates": null,
                "error": e.to_string(),
            }),
        })
        .collect();
    let invariants: Vec<f64> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|s| s.invariant))
        .collect();
    json!({
        "rows": rows_json,
        "invariant_increasing": invariants.windows(2).all(|w| w[1] > w[0]),
    })
}

pub fn rect_sweep_table(rows: &[RectSweepRow]) -> Table {
    let mut header = vec!["a", "sigma1", "invariant", "attaining_family"];
    let class_cols: Vec<String> = RectClass::SEPARATED
        .iter()
        .map(|c| format!("sigma_{}", c.tag()))
        .collect();
    header.extend(class_cols.iter().map(String::as_str));
    header.push("diagnostics");
    let mut t = Table::new(&header);
    for r in rows {
        let mut row = vec![csv_number(r.a)];
        match &r.outcome {
            Ok(s) => {
                row.push(csv_number(s.sigma1));
                row.push(csv_number(s.invariant));
                row.push(join_classes(&s.eigenspace));
                row.extend(
                    RectClass::SEPARATED
                        .iter()
                        .map(|&c| opt_number(s.candidate(c).map(|x| x.sigma))),
                );
                row.push(String::new());
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(
                    String::new(),
                    3 + RectClass::SEPARATED.len(),
                ));
                row.push(e.to_string());
            }
        }
        t.push(row);
    }
    t
}

pub fn rect_sweep_human(rows: &[RectSweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>10} {:>12} {:>12}  attaining",
        "a", "sigma1", "invariant"
    );
    for r in rows {
        match &r.outcome {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "{:>10} {:>12} {:>12}  {}",
                    human(r.a),
                    human(s.sigma1),
                    human(s.invariant),
                    join_classes(&s.eigenspace)
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{:>10}  error: {e}", human(r.a));
            }
        }
    }
    out
}

/// Count of rows whose `σ₁` is attained by the long-axis family, and the
/// number of rows that solved.
pub fn long_axis_observation(rows: &[BoxSweepRow]) -> (usize, usize) {
    let seen: Vec<bool> = rows
        .iter()
        .filter_map(BoxSweepRow::long_axis_family_attains)
        .collect();
    (seen.iter().filter(|&&b| b).count(), seen.len())
}

pub fn box_sweep_results(rows: &[BoxSweepRow]) -> Value {
    let rows_json: Vec<Value> = rows
        .iter()
        .map(|r| match &r.outcome {
            Ok(s) => json!({
                "a": r.a,
                "b": r.b,
                "sigma1": s.sigma1,
                "invariant": s.invariant,
                "attaining_family": join_families(&s.eigenspace),
                "long_axis_family": r.long_axis_family_attains(),
                "error": null,
            }),
            Err(e) => json!({
                "a": r.a,
                "b": r.b,
                "sigma1": null,
                "invariant": null,
                "attaining_family": null,
                "long_axis_family": null,
                "error": e.to_string(),
            }),
        })
        .collect();
    let (hits, solved) = long_axis_observation(rows);
    json!({
        "rows": rows_json,
        "long_axis_family": {
            "family": steklov_core::LONG_AXIS_FAMILY.to_string(),
            "observed": hits,
            "rows": solved,
            "rate": if solved > 0 { hits as f64 / solved as f64 } else { f64::NAN },
        },
    })
}

pub fn box_sweep_table(rows: &[BoxSweepRow]) -> Table {
    let mut t = Table::new(&[
        "a",
        "b",
        "sigma1",
        "invariant",
        "attaining_family",
        "diagnostics",
    ]);
    for r in rows {
        let row = match &r.outcome {
            Ok(s) => vec![
                csv_number(r.a),
                csv_number(r.b),
                csv_number(s.sigma1),
                csv_number(s.invariant),
                join_families(&s.eigenspace),
                String::new(),
            ],
            Err(e) => vec![
                csv_number(r.a),
                csv_number(r.b),
                String::new(),
                String::new(),
                String::new(),
                e.to_string(),
            ],
        };
        t.push(row);
    }
    t
}

pub fn box_sweep_human(rows: &[BoxSweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>10} {:>10} {:>12} {:>12}  attaining",
        "a", "b", "sigma1", "invariant"
    );
    for r in rows {
        match &r.outcome {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "{:>10} {:>10} {:>12} {:>12}  {}",
                    human(r.a),
                    human(r.b),
                    human(s.sigma1),
                    human(s.invariant),
                    join_families(&s.eigenspace)
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{:>10} {:>10}  error: {e}", human(r.a), human(r.b));
            }
        }
    }
    let (hits, solved) = long_axis_observation(rows);
    let _ = writeln!(
        out,
        "sigma1 attained by {}: {hits}/{solved}",
        steklov_core::LONG_AXIS_FAMILY
    );
    out
}

/// Residual report of one candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateCheck {
    pub candidate: String,
    pub sigma: f64,
    #[serde(flatten)]
    pub report: ResidualReport,
    pub worst: f64,
    pub pass: bool,
}

/// Oracle comparison of `verify rect`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub grid_n: usize,
    /// Half-height of the mesh, which may differ from the requested one.
    pub a_meshed: f64,
    pub sigma1_fd: f64,
    /// Closed-form `σ₁` of the meshed rectangle.
    pub sigma1: f64,
    pub difference: f64,
    pub gate: f64,
    pub pass: bool,
    pub eigenvalues: Vec<f64>,
    pub convergence: Vec<ConvergenceRow>,
}

impl OracleCheck {
    pub fn new(
        fd: DtnOracleResult,
        sigma1: f64,
        gate: f64,
        convergence: Vec<ConvergenceRow>,
    ) -> Self {
        let difference = (fd.sigma1_fd - sigma1).abs();
        OracleCheck {
            grid_n: fd.grid_n,
            a_meshed: fd.a,
            sigma1_fd: fd.sigma1_fd,
            sigma1,
            difference,
            gate,
            pass: difference < gate,
            eigenvalues: fd.eigenvalues,
            convergence,
        }
    }
}

pub fn verify_results(
    target: Value,
    gate: f64,
    density: usize,
    tampered: bool,
    checks: &[CandidateCheck],
    oracle: Option<&OracleCheck>,
) -> Value {
    json!({
        "target": target,
        "gate": gate,
        "density": density,
        "tampered": tampered,
        "checks": checks,
        "oracle": oracle,
        "passed": verify_passed(checks, oracle),
    })
}

pub fn verify_passed(checks: &[CandidateCheck], oracle: Option<&OracleCheck>) -> bool {
    checks.iter().all(|c| c.pass) && oracle.is_none_or(|o| o.pass)
}

pub fn verify_table(checks: &[CandidateCheck], oracle: Option<&OracleCheck>) -> Table {
    let mut t = Table::new(&[
        "check",
        "subject",
        "sigma",
        "interior_residual",
        "boundary_residual",
        "rayleigh_gap",
        "reference",
        "difference",
        "pass",
    ]);
    for c in checks {
        t.push(vec![
            "residual".into(),
            c.candidate.clone(),
            csv_number(c.sigma),
            csv_number(c.report.interior_residual),
            csv_number(c.report.boundary_residual),
            csv_number(c.report.rayleigh_gap),
            String::new(),
            String::new(),
            c.pass.to_string(),
        ]);
    }
    if let Some(o) = oracle {
        t.push(vec![
            "oracle".into(),
            format!("fd grid {}", o.grid_n),
            csv_number(o.sigma1_fd),
            String::new(),
            String::new(),
            String::new(),
            csv_number(o.sigma1),
            csv_number(o.difference),
            o.pass.to_string(),
        ]);
    }
    t
}

pub fn verify_human(checks: &[CandidateCheck], oracle: Option<&OracleCheck>, gate: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<36} {:>12} {:>10} {:>10} {:>10}  gate {gate:e}",
        "candidate", "sigma", "interior", "boundary", "rayleigh"
    );
    for c in checks {
        let _ = writeln!(
            out,
            "{:<36} {:>12} {:>10.2e} {:>10.2e} {:>10.2e}  {}",
            c.candidate,
            human(c.sigma),
            c.report.interior_residual,
            c.report.boundary_residual,
            c.report.rayleigh_gap,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    if let Some(o) = oracle {
        let _ = writeln!(
            out,
            "fd oracle grid {} (a = {}): sigma1_fd = {}, closed form {}, |diff| = {:.2e} (gate {}) {}",
            o.grid_n,
            human(o.a_meshed),
            human(o.sigma1_fd),
            human(o.sigma1),
            o.difference,
            o.gate,
            if o.pass { "pass" } else { "FAIL" }
        );
        for row in &o.convergence {
            let order = row
                .order
                .map(|p| format!("{p:.3}"))
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "  grid {:>4}: sigma1_fd = {}, error {:.3e}, order {order}",
                row.grid_n,
                human(row.sigma1_fd),
                row.error
            );
        }
    }
    let _ = writeln!(
        out,
        "{}",
        if verify_passed(checks, oracle) {
            "all gates pass"
        } else {
            "gate failure"
        }
    );
    out
}
