//! Shared inputs for the benchmarks in `benches/`.

use rice_ie::EvalPoint;

/// Points spanning the small-`x`, moderate and large-`x` regimes.
pub const POINTS: [(f64, f64); 4] = [(0.3, 0.5), (0.5, 7.0), (0.8, 25.0), (0.5, 80.0)];

pub fn points() -> Vec<EvalPoint> {
    POINTS
        .iter()
        .map(|&(k, x)| EvalPoint::new(k, x).expect("benchmark points lie in the domain"))
        .collect()
}

pub fn label(p: &EvalPoint) -> String {
    format!("k={},x={}", p.k(), p.x())
}
