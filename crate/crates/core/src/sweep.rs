//! Parameter sweeps over Tau spectra: accuracy of the full spectrum, the
//! conditioning of competing formulations, and reality versus `γ`.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::orthopoly::{GegenbauerIndex, Parity};
use crate::spectra::{
    exact_spectrum, pencil_spectrum, tau_spectrum_with_tol, BoundaryCondition, Spectrum,
    DEFAULT_TOL_REAL,
};
use crate::tau_operator::{build_diff_pencil, PencilVariant};

/// Relative error below which a computed eigenvalue counts as accurate.
pub const ACCURACY_THRESHOLD: f64 = 1e-8;

/// `|Im λ| > STRONG_PAIR_TOL · |λ|` marks a clearly complex eigenvalue.
pub const STRONG_PAIR_TOL: f64 = 1e-3;

/// Least-squares fit of `log10 y = slope · log10 x + intercept`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub label: String,
    pub slope: f64,
    pub intercept: f64,
    /// Two-sided 95% interval for the slope from the t distribution.
    pub ci_low: f64,
    pub ci_high: f64,
    pub points: usize,
    /// Smallest `x` included in the fit.
    pub x_min: f64,
}

/// One row per grid point; `grid[i]` and `values[i]` line up with
/// `grid_columns` and `value_columns`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub name: String,
    pub grid_columns: Vec<String>,
    pub value_columns: Vec<String>,
    pub grid: Vec<Vec<Value>>,
    pub values: Vec<Vec<Value>>,
    pub fits: Vec<SlopeFit>,
    pub summary: Map<String, Value>,
}

impl SweepResult {
    fn new(name: &str, grid_columns: &[&str], value_columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            grid_columns: grid_columns.iter().map(|s| s.to_string()).collect(),
            value_columns: value_columns.iter().map(|s| s.to_string()).collect(),
            grid: Vec::new(),
            values: Vec::new(),
            fits: Vec::new(),
            summary: Map::new(),
        }
    }

    fn push(&mut self, grid: Vec<Value>, values: Vec<Value>) {
        debug_assert_eq!(grid.len(), self.grid_columns.len());
        debug_assert_eq!(values.len(), self.value_columns.len());
        self.grid.push(grid);
        self.values.push(values);
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Column names, grid first.
    pub fn header(&self) -> Vec<String> {
        self.grid_columns
            .iter()
            .chain(&self.value_columns)
            .cloned()
            .collect()
    }

    /// Rows with grid cells followed by value cells.
    pub fn rows(&self) -> impl Iterator<Item = Vec<&Value>> {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(g, v)| g.iter().chain(v).collect())
    }

    /// Cells of a named column, grid or value.
    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        if let Some(i) = self.grid_columns.iter().position(|c| c == name) {
            return Some(self.grid.iter().map(|r| &r[i]).collect());
        }
        let i = self.value_columns.iter().position(|c| c == name)?;
        Some(self.values.iter().map(|r| &r[i]).collect())
    }

    /// Numeric column; non-numbers become NaN.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        self.column(name).map(|c| {
            c.into_iter()
                .map(|v| v.as_f64().unwrap_or(f64::NAN))
                .collect()
        })
    }

    pub fn fit(&self, label: &str) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.label == label)
    }
}

fn num(x: f64) -> Value {
    // serde_json has no NaN/inf; those become null
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Runs `f` over `items` on scoped worker threads and returns results in
/// input order.
fn par_map<I: Sync, O: Send>(items: &[I], f: impl Fn(&I) -> O + Sync) -> Vec<O> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(items.len());
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<O>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                out.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_inner()
        .unwrap()
        .into_iter()
        .map(|o| o.unwrap())
        .collect()
}

/// Ordinary least squares on `(log10 x, log10 y)`.
pub fn loglog_fit(label: &str, xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::TooSmall {
            what: "points in a slope fit",
            got: n,
            min: 3,
        });
    }
    if xs.iter().chain(ys).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::NonFinite("log-log fit input"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.log10()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log10()).collect();
    let mx = lx.iter().sum::<f64>() / n as f64;
    let my = ly.iter().sum::<f64>() / n as f64;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let se = (ssr / (n - 2) as f64 / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, (n - 2) as f64)
        .map_err(|_| Error::NonFinite("t distribution"))?
        .inverse_cdf(0.975);
    Ok(SlopeFit {
        label: label.to_string(),
        slope,
        intercept,
        ci_low: slope - t * se,
        ci_high: slope + t * se,
        points: n,
        x_min: xs.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

/// Per-mode relative error of the `m`-mode Dirichlet spectrum, pairing the
/// k-th smallest `|λ|` with the k-th exact eigenvalue.
pub fn spectrum_error_report(
    m: usize,
    idx: GegenbauerIndex,
    parity: Parity,
) -> Result<SweepResult> {
    let spec = tau_spectrum_with_tol(
        m,
        idx,
        parity,
        BoundaryCondition::Dirichlet,
        DEFAULT_TOL_REAL,
    )?;
    let exact = exact_spectrum(spec.len(), parity);
    Ok(error_report_from(&spec, &exact, idx, parity))
}

/// Error report for an already computed spectrum against `exact`, paired by
/// rank. A zero exact eigenvalue is compared in absolute terms.
pub fn error_report_from(
    spec: &Spectrum,
    exact: &[f64],
    idx: GegenbauerIndex,
    parity: Parity,
) -> SweepResult {
    let mut out = SweepResult::new(
        "spectrum-error",
        &["k"],
        &["lambda_re", "lambda_im", "lambda_exact", "rel_err"],
    );
    let mut below = 0usize;
    for (k, (l, e)) in spec.eigenvalues.iter().zip(exact).enumerate() {
        let diff = (l - Complex64::new(*e, 0.0)).norm();
        let rel = if *e == 0.0 { diff } else { diff / e.abs() };
        if rel < ACCURACY_THRESHOLD {
            below += 1;
        }
        out.push(
            vec![Value::from(k + 1)],
            vec![num(l.re), num(l.im), num(*e), num(rel)],
        );
    }
    let s = &mut out.summary;
    s.insert("m".into(), Value::from(spec.len()));
    s.insert("gamma".into(), num(idx.gamma()));
    s.insert("parity".into(), Value::from(parity.to_string()));
    s.insert("threshold".into(), num(ACCURACY_THRESHOLD));
    s.insert("accurate".into(), Value::from(below));
    s.insert(
        "fraction_below".into(),
        num(below as f64 / spec.len().max(1) as f64),
    );
    s.insert("max_modulus".into(), num(spec.max_modulus()));
    s.insert("non_real".into(), Value::from(spec.non_real_count()));
    out
}

/// Eigenvalue nearest `-π²/4` for the even-mode formulation `variant`.
pub fn first_even_eigenvalue(
    m: usize,
    idx: GegenbauerIndex,
    variant: PencilVariant,
) -> Result<Complex64> {
    let spec = match variant {
        PencilVariant::Integration => tau_spectrum_with_tol(
            m,
            idx,
            Parity::Even,
            BoundaryCondition::Dirichlet,
            DEFAULT_TOL_REAL,
        )?,
        _ => pencil_spectrum(&build_diff_pencil(m, idx, variant)?)?,
    };
    let target = Complex64::new(-PI * PI / 4.0, 0.0);
    spec.eigenvalues
        .iter()
        .copied()
        .filter(|l| l.is_finite())
        .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
        .ok_or(Error::NonFinite("spectrum"))
}

/// Points from the smallest error onward, where truncation error is spent
/// and roundoff growth dominates. Zero errors carry no slope information
/// and are skipped.
pub fn roundoff_tail(ms: &[f64], errs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let start = errs
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0.0)
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map_or(errs.len(), |(i, _)| i);
    ms[start..]
        .iter()
        .zip(&errs[start..])
        .filter(|(_, e)| **e > 0.0)
        .map(|(m, e)| (*m, *e))
        .unzip()
}

/// Relative error of the first even eigenvalue against `-π²/4` for each
/// variant and mode count, with a log-log slope fit over the roundoff tail
/// of each differentiation variant.
pub fn conditioning_sweep(
    idx: GegenbauerIndex,
    m_grid: &[usize],
    variants: &[PencilVariant],
) -> Result<SweepResult> {
    if m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnknownTag {
            kind: "m grid (must be strictly ascending)",
            value: format!("{m_grid:?}"),
        });
    }
    let tasks: Vec<(PencilVariant, usize)> = variants
        .iter()
        .flat_map(|v| m_grid.iter().map(move |m| (*v, *m)))
        .collect();
    let results = par_map(&tasks, |(v, m)| first_even_eigenvalue(*m, idx, *v));
    let exact = -PI * PI / 4.0;
    let mut out = SweepResult::new(
        "conditioning",
        &["variant", "m"],
        &["lambda_re", "lambda_im", "rel_err"],
    );
    for ((v, m), r) in tasks.iter().zip(results) {
        let l = r?;
        let rel = (l - Complex64::new(exact, 0.0)).norm() / exact.abs();
        out.push(
            vec![Value::from(v.tag()), Value::from(*m)],
            vec![num(l.re), num(l.im), num(rel)],
        );
    }
    for v in variants {
        let rows: Vec<usize> = (0..tasks.len()).filter(|i| tasks[*i].0 == *v).collect();
        let ms: Vec<f64> = rows.iter().map(|i| tasks[*i].1 as f64).collect();
        let errs: Vec<f64> = rows
            .iter()
            .map(|i| out.values[*i][2].as_f64().unwrap_or(f64::NAN))
            .collect();
        let max_err = errs.iter().copied().fold(0.0, f64::max);
        out.summary
            .insert(format!("{}_max_rel_err", v.tag()), num(max_err));
        if matches!(
            v,
            PencilVariant::DiffElimLast | PencilVariant::DiffElimFirst
        ) {
            let (tm, te) = roundoff_tail(&ms, &errs);
            if let Ok(fit) = loglog_fit(v.tag(), &tm, &te) {
                out.fits.push(fit);
            }
        }
    }
    out.summary.insert("gamma".into(), num(idx.gamma()));
    out.summary.insert("lambda_exact".into(), num(exact));
    Ok(out)
}

/// Non-real eigenvalue counts of the `m`-mode Dirichlet matrix across `γ`.
pub fn gamma_scan(
    m: usize,
    gamma_grid: &[f64],
    parity: Parity,
    tol_real: f64,
) -> Result<SweepResult> {
    let idxs = gamma_grid
        .iter()
        .map(|g| GegenbauerIndex::new(*g))
        .collect::<Result<Vec<_>>>()?;
    let spectra = par_map(&idxs, |idx| {
        tau_spectrum_with_tol(m, *idx, parity, BoundaryCondition::Dirichlet, tol_real)
    });
    let mut out = SweepResult::new(
        "gamma-scan",
        &["gamma"],
        &["non_real", "strong_pairs", "max_rel_imag", "max_modulus"],
    );
    let mut last_real: Option<f64> = None;
    let mut first_complex: Option<f64> = None;
    for (g, spec) in gamma_grid.iter().zip(spectra) {
        let spec = spec?;
        let strong = strong_pair_count(&spec);
        let rel_imag = spec
            .eigenvalues
            .iter()
            .map(|l| l.im.abs() / l.norm())
            .fold(0.0, f64::max);
        if spec.non_real_count() == 0 {
            if first_complex.is_none() {
                last_real = Some(*g);
            }
        } else if first_complex.is_none() {
            first_complex = Some(*g);
        }
        out.push(
            vec![num(*g)],
            vec![
                Value::from(spec.non_real_count()),
                Value::from(strong),
                num(rel_imag),
                num(spec.max_modulus()),
            ],
        );
    }
    let s = &mut out.summary;
    s.insert("m".into(), Value::from(m));
    s.insert("parity".into(), Value::from(parity.to_string()));
    s.insert("tol_real".into(), num(tol_real));
    s.insert(
        "last_all_real_gamma".into(),
        last_real.map_or(Value::Null, num),
    );
    s.insert(
        "first_complex_gamma".into(),
        first_complex.map_or(Value::Null, num),
    );
    Ok(out)
}

/// Conjugate pairs with `|Im λ| > STRONG_PAIR_TOL · |λ|`.
pub fn strong_pair_count(spec: &Spectrum) -> usize {
    spec.eigenvalues
        .iter()
        .filter(|l| l.im > STRONG_PAIR_TOL * l.norm())
        .count()
}
