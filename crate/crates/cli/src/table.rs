//! Row evaluation and deterministic CSV output.

use std::io::Write;

use rayon::prelude::*;
use rice_ie::bounds::{self, bracket};
use rice_ie::ie::{self, EvalPoint};
use rice_ie::Error;

use crate::grid::{Column, FigureId, SweepSpec, SWEEP_ROUTES};

/// Header of sweep files.
pub const SWEEP_HEADER: [&str; 15] = [
    "k",
    "x",
    "oracle",
    "eq1",
    "eq2",
    "eq3",
    "eq4",
    "eq5",
    "eq6",
    "upper",
    "lower",
    "eps_ar_upper",
    "eps_ar_lower",
    "disagreement",
    "status",
];

/// Everything computed at one grid point. Absent values are `None` and
/// print as empty cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub k: f64,
    pub x: f64,
    pub oracle: Option<f64>,
    /// Values of the six routes in [`SWEEP_ROUTES`] order.
    pub routes: [Option<f64>; 6],
    pub upper: Option<f64>,
    pub lower: Option<f64>,
    pub eps_ar_upper: Option<f64>,
    pub eps_ar_lower: Option<f64>,
    pub disagreement: Option<f64>,
    /// `ok`, or `;`-separated flags such as `invalid-domain:eq5`.
    pub status: String,
}

impl Row {
    fn blank(k: f64, x: f64) -> Self {
        Row {
            k,
            x,
            oracle: None,
            routes: [None; 6],
            upper: None,
            lower: None,
            eps_ar_upper: None,
            eps_ar_lower: None,
            disagreement: None,
            status: String::new(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn cell(&self, column: Column) -> String {
        match column {
            Column::K => num(self.k),
            Column::X => num(self.x),
            Column::Oracle => opt(self.oracle),
            Column::Upper => opt(self.upper),
            Column::Lower => opt(self.lower),
            Column::EpsArLower => opt(self.eps_ar_lower),
            Column::Status => self.status.clone(),
        }
    }

    fn sweep_cells(&self) -> Vec<String> {
        let mut cells = vec![num(self.k), num(self.x), opt(self.oracle)];
        cells.extend(self.routes.iter().map(|v| opt(*v)));
        cells.extend([
            opt(self.upper),
            opt(self.lower),
            opt(self.eps_ar_upper),
            opt(self.eps_ar_lower),
            opt(self.disagreement),
            self.status.clone(),
        ]);
        cells
    }
}

/// Fixed 17-significant-digit scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn flags_to_status(flags: Vec<String>) -> String {
    if flags.is_empty() {
        "ok".to_string()
    } else {
        flags.join(";")
    }
}

/// Reference value and both bounds, with their relative errors.
fn fill_bounds(row: &mut Row, p: &EvalPoint, oracle_tol: f64, flags: &mut Vec<String>) {
    match bounds::oracle(p, oracle_tol) {
        Ok(r) => row.oracle = Some(r.value),
        Err(Error::Domain(_)) => flags.push("invalid-domain:oracle".into()),
        Err(_) => flags.push("nonconverged:oracle".into()),
    }
    let b = bracket(p);
    row.upper = Some(b.upper);
    row.lower = b.lower_valid.then_some(b.lower);
    if !b.lower_valid {
        flags.push("invalid-domain:lower".into());
    }
    if let Some(o) = row.oracle.filter(|o| *o > 0.0) {
        row.eps_ar_upper = row.upper.map(|u| (o - u).abs() / o);
        row.eps_ar_lower = row.lower.map(|l| (o - l).abs() / o);
    }
}

/// One sweep row: reference, requested routes, bounds and metrics.
pub fn sweep_row(spec: &SweepSpec, k: f64, x: f64) -> Row {
    let mut row = Row::blank(k, x);
    let p = match EvalPoint::new(k, x) {
        Ok(p) => p,
        Err(_) => {
            row.status = "invalid-domain:point".into();
            return row;
        }
    };
    let mut flags = Vec::new();
    fill_bounds(&mut row, &p, spec.oracle_tol, &mut flags);
    for (slot, method) in row.routes.iter_mut().zip(SWEEP_ROUTES) {
        if !spec.methods.contains(&method) {
            continue;
        }
        match ie::evaluate(method, &p, spec.oracle_tol, spec.max_terms) {
            Ok(r) if r.converged && r.value.is_finite() => *slot = Some(r.value),
            Ok(_) => flags.push(format!("nonconverged:{method}")),
            Err(Error::Domain(_)) => flags.push(format!("invalid-domain:{method}")),
            Err(_) => flags.push(format!("nonconverged:{method}")),
        }
    }
    let values: Vec<f64> = row.routes.iter().flatten().copied().collect();
    if let (Some(o), true) = (row.oracle.filter(|o| *o > 0.0), values.len() >= 2) {
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        row.disagreement = Some((hi - lo) / o);
    }
    row.status = flags_to_status(flags);
    row
}

/// One figure row: reference and bounds only.
pub fn figure_row(k: f64, x: f64, oracle_tol: f64) -> Row {
    let mut row = Row::blank(k, x);
    let p = EvalPoint::new(k, x).expect("figure grids lie in the domain");
    let mut flags = Vec::new();
    fill_bounds(&mut row, &p, oracle_tol, &mut flags);
    row.status = flags_to_status(flags);
    row
}

/// Evaluates all points in parallel and returns rows sorted by `(k, x)`.
pub fn evaluate_points(points: &[(f64, f64)], row: impl Fn(f64, f64) -> Row + Sync) -> Vec<Row> {
    let mut rows: Vec<Row> = points.par_iter().map(|&(k, x)| row(k, x)).collect();
    rows.sort_by(|a, b| a.k.total_cmp(&b.k).then(a.x.total_cmp(&b.x)));
    rows
}

pub fn sweep_rows(spec: &SweepSpec) -> Vec<Row> {
    evaluate_points(&spec.points(), |k, x| sweep_row(spec, k, x))
}

pub fn figure_rows(fig: FigureId, oracle_tol: f64) -> Vec<Row> {
    evaluate_points(&fig.points(), |k, x| figure_row(k, x, oracle_tol))
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_sweep_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        w.write_record(row.sweep_cells())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_figure_csv<W: Write>(fig: FigureId, rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(fig.columns().iter().map(|c| c.name()))?;
    for row in rows {
        w.write_record(fig.columns().iter().map(|c| row.cell(*c)))?;
    }
    w.flush()?;
    Ok(())
}
