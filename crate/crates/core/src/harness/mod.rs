//! Scan orchestration: exponent scans, peak finding, the verification suite,
//! record output and configuration.

pub mod acceptance;
mod config;
mod output;
mod scans;

use serde::Serialize;

use crate::error::{Error, Result};

pub use config::{Config, CACHE_ENV_VAR};
pub use output::{format_float, write_csv, write_json, write_svg, OutputFormat};
pub use scans::{
    find_peak_height, scan_expsum, scan_lemma21, scan_subconvexity, scan_supnorm, PeakHeight, SupnormGrid,
};

/// Kind of scan that produced a record; fixes the column layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    Supnorm,
    Lemma21,
    Subconv,
    Expsum,
}

impl ScanKind {
    /// Input columns, in output order.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            ScanKind::Supnorm => &["t", "x", "y"],
            ScanKind::Lemma21 => &["D", "delta", "h"],
            ScanKind::Subconv => &["D", "t", "char"],
            ScanKind::Expsum => &["a", "b", "t", "X1", "X2"],
        }
    }

    /// Name of the input used as abscissa in log-log plots.
    pub fn x_field(self) -> &'static str {
        match self {
            ScanKind::Supnorm | ScanKind::Subconv | ScanKind::Expsum => "t",
            ScanKind::Lemma21 => "D",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScanKind::Supnorm => "supnorm",
            ScanKind::Lemma21 => "lemma21",
            ScanKind::Subconv => "subconv",
            ScanKind::Expsum => "expsum",
        }
    }
}

/// One scan output: `inputs` follow `scan_kind.columns()`, `ratio = value / envelope(inputs)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub scan_kind: ScanKind,
    pub inputs: Vec<f64>,
    pub value: f64,
    pub ratio: f64,
}

impl ScanRecord {
    pub fn new(scan_kind: ScanKind, inputs: Vec<f64>, value: f64) -> Self {
        debug_assert_eq!(inputs.len(), scan_kind.columns().len());
        let ratio = value / envelope(scan_kind, &inputs);
        ScanRecord { scan_kind, inputs, value, ratio }
    }

    pub fn input(&self, name: &str) -> Option<f64> {
        self.scan_kind.columns().iter().position(|c| *c == name).map(|i| self.inputs[i])
    }
}

/// Predicted growth the ratio is taken against.
///
/// * supnorm: (1 + t)^{1/3} (values are already divided by y^{1/2})
/// * lemma21: |D|^{max(delta, 1)/2}
/// * subconv: |D|^{1/4} (1 + |t|)^{1/3} for L-values (char >= 0) and
///   |D|^{1/2} (1 + |t|)^{2/3} for the second moment (char = -1)
/// * expsum: Q_+(X)^{1/2} t^{1/3}
pub fn envelope(kind: ScanKind, inputs: &[f64]) -> f64 {
    match kind {
        ScanKind::Supnorm => (1.0 + inputs[0].abs()).cbrt(),
        ScanKind::Lemma21 => inputs[0].abs().powf(inputs[1].max(1.0) / 2.0),
        ScanKind::Subconv => {
            let (d, t, ch) = (inputs[0].abs(), inputs[1].abs(), inputs[2]);
            if ch < 0.0 {
                d.sqrt() * (1.0 + t).powf(2.0 / 3.0)
            } else {
                d.powf(0.25) * (1.0 + t).cbrt()
            }
        }
        ScanKind::Expsum => {
            let (a, b, t, x1, x2) = (inputs[0], inputs[1], inputs[2], inputs[3], inputs[4]);
            (a * x1 * x1 + 2.0 * b * x1 * x2 + x2 * x2).sqrt() * t.abs().cbrt()
        }
    }
}

/// Least-squares line through (log x, log y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Minimum number of points for a reported fit.
pub const MIN_FIT_POINTS: usize = 8;

pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::Domain(format!("a fit needs at least {MIN_FIT_POINTS} points, got {}", points.len())));
    }
    if let Some(p) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::Domain(format!("fit points must be positive, got {p:?}")));
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ExponentFit { slope, intercept, r_squared, n_points: points.len() })
}

/// Runs `f` on a pool with `workers` threads (0 = rayon default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// `n` points from `lo` to `hi` in geometric progression.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo * (ratio * i as f64).exp() }).collect()
}
