//! Parameter grids: user sweeps and the fixed figure grids.

use std::fmt;
use std::str::FromStr;

use rice_ie::{Error, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            other => Err(Error::Domain(format!("unknown spacing '{other}'"))),
        }
    }
}

/// `n` points from `lo` to `hi` inclusive.
pub fn spaced(lo: f64, hi: f64, n: usize, spacing: Spacing) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = match spacing {
        Spacing::Linear => (lo, hi),
        Spacing::Log => (lo.ln(), hi.ln()),
    };
    (0..n)
        .map(|i| {
            // endpoints exactly as given
            if i == 0 {
                return lo;
            }
            if i == n - 1 {
                return hi;
            }
            let t = a + (b - a) * i as f64 / (n - 1) as f64;
            match spacing {
                Spacing::Linear => t,
                Spacing::Log => t.exp(),
            }
        })
        .collect()
}

/// The routes that have a column in sweep output.
pub const SWEEP_ROUTES: [Method; 6] = [
    Method::Eq1Quad,
    Method::Eq2Quad,
    Method::SeriesEq3,
    Method::SeriesEq4,
    Method::MarcumEq5,
    Method::MarcumEq6,
];

/// A Cartesian `(k, x)` grid with the routes to evaluate on it.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub k_values: Vec<f64>,
    pub x_values: Vec<f64>,
    /// How the value lists were generated; recorded for reporting only.
    pub spacing: Spacing,
    pub methods: Vec<Method>,
    pub oracle_tol: f64,
    pub max_terms: usize,
}

impl SweepSpec {
    pub fn new(
        k_values: Vec<f64>,
        x_values: Vec<f64>,
        spacing: Spacing,
        methods: Vec<Method>,
        oracle_tol: f64,
        max_terms: usize,
    ) -> Result<Self, Error> {
        if k_values.is_empty() || x_values.is_empty() {
            return Err(Error::Domain("k and x lists must be non-empty".into()));
        }
        if let Some(k) = k_values.iter().find(|k| !(0.0..=1.0).contains(*k)) {
            return Err(Error::Domain(format!("k must lie in [0, 1], got {k}")));
        }
        if let Some(x) = x_values.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
            return Err(Error::Domain(format!("x must be finite and nonnegative, got {x}")));
        }
        if spacing == Spacing::Log && x_values.iter().chain(&k_values).any(|v| *v <= 0.0) {
            return Err(Error::Domain("log spacing needs strictly positive values".into()));
        }
        if let Some(m) = methods.iter().find(|m| !SWEEP_ROUTES.contains(m)) {
            return Err(Error::Domain(format!("method '{m}' has no sweep column")));
        }
        if !(oracle_tol > 0.0) {
            return Err(Error::Domain(format!("oracle tolerance must be positive, got {oracle_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::Domain("max terms must be positive".into()));
        }
        Ok(SweepSpec {
            k_values,
            x_values,
            spacing,
            methods,
            oracle_tol,
            max_terms,
        })
    }

    /// The 9×9 grid used for route agreement.
    pub fn default_grid(oracle_tol: f64, max_terms: usize) -> Self {
        SweepSpec {
            k_values: (1..=9).map(|i| i as f64 / 10.0).collect(),
            x_values: vec![0.5, 1.0, 2.0, 5.0, 7.0, 10.0, 20.0, 40.0, 80.0],
            spacing: Spacing::Linear,
            methods: SWEEP_ROUTES.to_vec(),
            oracle_tol,
            max_terms,
        }
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.k_values
            .iter()
            .flat_map(|&k| self.x_values.iter().map(move |&x| (k, x)))
            .collect()
    }
}

/// The four figure data sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    /// Both bounds against `x` at `k = 0.5`.
    Fig3,
    /// Both bounds against `k` at `x = 7`.
    Fig4,
    /// The lower bound against `k` at `x = 40`.
    Fig5,
    /// Relative error of the lower bound against `k` at `x = 80`.
    Fig6,
}

/// Output columns of a figure file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    K,
    X,
    Oracle,
    Upper,
    Lower,
    EpsArLower,
    Status,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::K => "k",
            Column::X => "x",
            Column::Oracle => "oracle",
            Column::Upper => "upper",
            Column::Lower => "lower",
            Column::EpsArLower => "eps_ar_lower",
            Column::Status => "status",
        }
    }
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig3, FigureId::Fig4, FigureId::Fig5, FigureId::Fig6];

    pub fn number(self) -> u8 {
        match self {
            FigureId::Fig3 => 3,
            FigureId::Fig4 => 4,
            FigureId::Fig5 => 5,
            FigureId::Fig6 => 6,
        }
    }

    pub fn from_number(n: u8) -> Result<Self, Error> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.number() == n)
            .ok_or_else(|| Error::Domain(format!("unknown figure {n}; expected 3, 4, 5 or 6")))
    }

    /// The `(k, x)` points in output order.
    pub fn points(self) -> Vec<(f64, f64)> {
        match self {
            FigureId::Fig3 => spaced(0.1, 20.0, 200, Spacing::Log)
                .into_iter()
                .map(|x| (0.5, x))
                .collect(),
            FigureId::Fig4 => k_sweep(7.0),
            FigureId::Fig5 => k_sweep(40.0),
            FigureId::Fig6 => k_sweep(80.0),
        }
    }

    pub fn columns(self) -> &'static [Column] {
        use Column::*;
        match self {
            FigureId::Fig3 | FigureId::Fig4 => &[K, X, Oracle, Upper, Lower, Status],
            FigureId::Fig5 => &[K, X, Oracle, Lower, Status],
            FigureId::Fig6 => &[K, X, EpsArLower, Status],
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fig{}", self.number())
    }
}

/// `k = 0.02, 0.03, …, 0.98` at fixed `x`, built from integer hundredths.
fn k_sweep(x: f64) -> Vec<(f64, f64)> {
    (2..=98).map(|i| (i as f64 / 100.0, x)).collect()
}
