//! The four exponent scans and the peak-height search.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{log_spaced, ScanKind, ScanRecord};
use crate::eisenstein::{eisenstein, fourier_row, scattering_phi, FourierRow, MIN_REDUCED_HEIGHT};
use crate::epstein::{exp_sum, GramMatrix, Sign, MAX_EXP_SUM_POINTS};
use crate::error::{Error, Result};
use crate::lfunctions::{lk_hecke_all, second_moment};
use crate::modgroup::{invariant_height, HalfPlanePoint};
use crate::numerics::quad::GaussLegendre;
use crate::quadforms::{
    class_group, enumerate_reduced, fundamental_discriminants, fundamental_unit, geodesic_cycle, load_or_build,
    ClassGroupData, Discriminant,
};

fn group_for(d: Discriminant, cache: Option<&Path>) -> Result<ClassGroupData> {
    match cache {
        Some(dir) => Ok(load_or_build(d, dir)?.0),
        None => class_group(d),
    }
}

/// Parameters of [`scan_supnorm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupnormGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub y_max: f64,
    /// 1 gives spacing min(0.02, 1/(4t)); larger values refine proportionally.
    pub grid_density: f64,
}

/// Heights of the rows searched at spectral parameter t: uniform spacing h
/// up to y = 2, then spacing h y / 2.
fn supnorm_rows(t: f64, y_max: f64, density: f64) -> Vec<f64> {
    let h = (0.02f64).min(1.0 / (4.0 * t)) / density;
    let mut rows = Vec::new();
    let mut y = MIN_REDUCED_HEIGHT + 1e-6;
    while y < y_max {
        rows.push(y);
        y += h * (y / 2.0).max(1.0);
    }
    rows.push(y_max);
    rows
}

/// max over x on the row of |E| / sqrt(y); E(-x + iy) = E(x + iy), so x in [0, 1/2].
fn row_max(row: &FourierRow, h: f64, x_lo: f64, x_hi: f64) -> (f64, f64) {
    let n = (((x_hi - x_lo) / h).ceil() as usize).max(1);
    let scale = row.y.sqrt();
    (0..=n)
        .map(|i| {
            let x = (x_lo + (x_hi - x_lo) * i as f64 / n as f64).min(x_hi);
            (row.value_at(x).norm() / scale, x)
        })
        .fold((f64::NEG_INFINITY, 0.0), |best, c| if c.0 > best.0 { c } else { best })
}

fn x_range(y: f64) -> (f64, f64) {
    if y >= 1.0 {
        (0.0, 0.5)
    } else {
        ((1.0 - y * y).max(0.0).sqrt().min(0.5), 0.5)
    }
}

/// Golden-section maximization of a unimodal-near-the-top function on [lo, hi].
fn golden_max(mut f: impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64, iters: usize) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    for _ in 0..iters {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b)?;
        }
    }
    Ok(if fa >= fb { (a, fa) } else { (b, fb) })
}

/// sup of |E(z, 1/2 + it)| / y^{1/2} over the fundamental domain below y_max,
/// one record per t (inputs t, x, y with (x, y) the maximizer).
///
/// A grid search is followed by a local golden-section refinement of the
/// three best rows.
pub fn scan_supnorm(grid: SupnormGrid, tol: f64) -> Result<Vec<ScanRecord>> {
    let SupnormGrid { t_min, t_max, t_steps, y_max, grid_density } = grid;
    if !(1.0 <= t_min && t_min < t_max && t_max <= 500.0) {
        return Err(Error::Range(format!("supnorm scan needs 1 <= t_min < t_max <= 500, got [{t_min}, {t_max}]")));
    }
    if t_steps < 2 || !(y_max > 1.0) || !(grid_density > 0.0) {
        return Err(Error::Domain("supnorm scan needs t_steps >= 2, y_max > 1, grid_density > 0".into()));
    }
    log_spaced(t_min, t_max, t_steps).into_iter().map(|t| supnorm_at(t, y_max, grid_density, tol)).collect()
}

fn supnorm_at(t: f64, y_max: f64, density: f64, tol: f64) -> Result<ScanRecord> {
    let s = Complex64::new(0.5, t);
    let h = (0.02f64).min(1.0 / (4.0 * t)) / density;
    let rows = supnorm_rows(t, y_max, density);
    let maxima: Vec<(f64, f64, f64)> = rows
        .par_iter()
        .map(|&y| {
            let row = fourier_row(y, s, tol)?;
            let (lo, hi) = x_range(y);
            let (v, x) = row_max(&row, h, lo, hi);
            Ok((v, x, y))
        })
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..maxima.len()).collect();
    order.sort_by(|&i, &j| maxima[j].0.total_cmp(&maxima[i].0).then(i.cmp(&j)));
    let mut best = maxima[order[0]];
    for &i in order.iter().take(3) {
        let (_, x0, _) = maxima[i];
        let y_lo = if i > 0 { rows[i - 1] } else { rows[i] };
        let y_hi = if i + 1 < rows.len() { rows[i + 1] } else { rows[i] };
        if y_hi <= y_lo {
            continue;
        }
        let local = |y: f64| -> Result<(f64, f64)> {
            let row = fourier_row(y, s, tol)?;
            let (lo, hi) = x_range(y);
            let (a, b) = ((x0 - h).max(lo), (x0 + h).min(hi));
            if a > b {
                return Ok((f64::NEG_INFINITY, x0));
            }
            let (v, x) = row_max(&row, h / 10.0, a, b);
            let (xr, vr) = golden_max(|x| Ok(row.value_at(x).norm() / y.sqrt()), (x - h / 10.0).max(a), (x + h / 10.0).min(b), 30)?;
            Ok(if vr > v { (vr, xr) } else { (v, x) })
        };
        let (y_star, _) = golden_max(|y| Ok(local(y)?.0), y_lo, y_hi, 25)?;
        let (v, x) = local(y_star)?;
        if v > best.0 {
            best = (v, x, y_star);
        }
    }
    Ok(ScanRecord::new(ScanKind::Supnorm, vec![t, best.1, best.2], best.0))
}

fn check_lemma21_range(d_min: i64, d_max: i64) -> Result<()> {
    let negative = -1_000_000 <= d_min && d_min < d_max && d_max <= -3;
    let positive = 2 <= d_min && d_min < d_max && d_max <= 1_000_000;
    if negative || positive {
        Ok(())
    } else {
        Err(Error::Range(format!("lemma21 range [{d_min}, {d_max}] must lie in [-1e6, -3] or [2, 1e6]")))
    }
}

/// sum over classes of y(z_A)^delta (D < 0) or of int_{C_A} y(z)^delta |dz|/y (D > 0),
/// one record per fundamental D in [d_min, d_max].
pub fn scan_lemma21(d_min: i64, d_max: i64, delta: f64, cache: Option<&Path>) -> Result<Vec<ScanRecord>> {
    check_lemma21_range(d_min, d_max)?;
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    fundamental_discriminants(d_min, d_max)
        .par_iter()
        .map(|&d| {
            let (sum, h) = if d.is_negative() {
                let forms = enumerate_reduced(d)?;
                let root = (d.abs() as f64).sqrt();
                (forms.iter().map(|f| (root / (2.0 * f.a as f64)).powf(delta)).sum::<f64>(), forms.len())
            } else {
                let g = group_for(d, cache)?;
                let mut total = 0.0;
                for f in &g.reduced_forms {
                    total += cycle_height_integral(f, delta)?;
                }
                (total, g.h)
            };
            Ok(ScanRecord::new(ScanKind::Lemma21, vec![d.value() as f64, delta, h as f64], sum))
        })
        .collect()
}

/// int y(z)^delta over arc length 2 log(eps) of the geodesic of `f` (y = invariant height).
fn cycle_height_integral(f: &crate::quadforms::QuadraticForm, delta: f64) -> Result<f64> {
    let cycle = geodesic_cycle(f)?;
    let length = 2.0 * fundamental_unit(Discriminant::new(f.disc())?)?.unit_log;
    // the integrand is only piecewise smooth (kinks where the reduction
    // changes), so use many low-order panels
    let rule = GaussLegendre::new(4);
    let panels = ((length * 200.0).ceil() as usize).max(64);
    let mut failure = None;
    let v = rule.composite(
        &mut |u| {
            let (x, y) = cycle.point(u);
            match HalfPlanePoint::new(x, y).and_then(invariant_height) {
                Ok(h) => Complex64::new(h.powf(delta), 0.0),
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        -0.5 * length,
        0.5 * length,
        panels,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(v.re),
    }
}

/// Relative agreement required between the two second-moment routes.
pub const SECOND_MOMENT_TOL: f64 = 1e-8;

/// |L_K(1/2 + it, chi)| for every character (char = k) and, for D < 0, the
/// second moment sum_chi |L|^2 (char = -1), for every D and t.
pub fn scan_subconvexity(d_list: &[i64], t_list: &[f64], tol: f64, cache: Option<&Path>) -> Result<Vec<ScanRecord>> {
    if let Some(t) = t_list.iter().find(|t| t.abs() < 0.5) {
        return Err(Error::Range(format!("t = {t} is too close to 0")));
    }
    let discs: Vec<Discriminant> = d_list.iter().map(|&d| Discriminant::fundamental(d)).collect::<Result<_>>()?;
    let jobs: Vec<(Discriminant, f64)> = discs.iter().flat_map(|&d| t_list.iter().map(move |&t| (d, t))).collect();
    let groups: Vec<ClassGroupData> = discs.iter().map(|&d| group_for(d, cache)).collect::<Result<_>>()?;
    let per_job: Vec<Vec<ScanRecord>> = jobs
        .par_iter()
        .enumerate()
        .map(|(j, &(d, t))| {
            let g = &groups[j / t_list.len()];
            let s = Complex64::new(0.5, t);
            let values = lk_hecke_all(g, s, tol)?;
            let dv = d.value() as f64;
            let mut out: Vec<ScanRecord> = values
                .iter()
                .enumerate()
                .map(|(k, v)| ScanRecord::new(ScanKind::Subconv, vec![dv, t, k as f64], v.norm()))
                .collect();
            if d.is_negative() {
                let (orth, direct) = second_moment(g, t, tol)?;
                if (orth - direct).abs() > SECOND_MOMENT_TOL * orth.max(1e-300) {
                    return Err(Error::Accuracy(format!("second moment routes disagree at D={d}, t={t}: {orth} vs {direct}")));
                }
                out.push(ScanRecord::new(ScanKind::Subconv, vec![dv, t, -1.0], direct));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_job.into_iter().flatten().collect())
}

/// Upper limit of Q_+(X) for the sampled boxes, as a multiple of a^{1/2} |t|.
pub const EXPSUM_RANGE_FACTOR: f64 = 4.0;

/// Dyadic boxes [X1, 2 X1] x [X2, 2 X2] with X1 = t^{1/3} 2^i, X2 = t^{1/3} a^{1/2} 2^j
/// and Q_+(X) <= 4 a^{1/2} t.
pub fn expsum_boxes(z: &GramMatrix, t: f64) -> Vec<(f64, f64)> {
    let base1 = t.abs().cbrt();
    let base2 = base1 * z.a.sqrt();
    let limit = EXPSUM_RANGE_FACTOR * z.a.sqrt() * t.abs();
    let mut boxes = Vec::new();
    for i in 0.. {
        let x1 = base1 * 2f64.powi(i);
        if z.eval(x1, base2) > limit {
            break;
        }
        for j in 0.. {
            let x2 = base2 * 2f64.powi(j);
            if z.eval(x1, x2) > limit {
                break;
            }
            boxes.push((x1, x2));
        }
    }
    boxes
}

/// |exp_sum| / (Q_+(X)^{1/2} t^{1/3}) over the admissible dyadic boxes of every (a, b, t).
pub fn scan_expsum(a_list: &[f64], b_list: &[f64], t_list: &[f64]) -> Result<Vec<ScanRecord>> {
    if let Some(t) = t_list.iter().find(|t| **t == 0.0 || !t.is_finite()) {
        return Err(Error::Range(format!("exponential sums need t != 0, got {t}")));
    }
    let mut jobs = Vec::new();
    let mut points = 0f64;
    for &a in a_list {
        for &b in b_list {
            let z = GramMatrix::new(a, b)?;
            for &t in t_list {
                for (x1, x2) in expsum_boxes(&z, t) {
                    points += (x1.floor() + 1.0) * (x2.floor() + 1.0);
                    jobs.push((z, t, x1, x2));
                }
            }
        }
    }
    if points > MAX_EXP_SUM_POINTS as f64 {
        return Err(Error::Resource(format!("scan needs ~{points:.3e} lattice points, cap is {MAX_EXP_SUM_POINTS}")));
    }
    jobs.par_iter()
        .map(|&(z, t, x1, x2)| {
            let v = exp_sum(&z, t, (x1, 2.0 * x1), (x2, 2.0 * x2), Sign::Plus)?;
            Ok(ScanRecord::new(ScanKind::Expsum, vec![z.a, z.b, t, x1, x2], v.norm()))
        })
        .collect()
}

/// Height where the constant term of E(iy, 1/2 + it) peaks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakHeight {
    pub y: f64,
    /// |E(iy, 1/2 + it)| / y^{1/2}
    pub e_ratio: f64,
    /// |1 + phi y^{-2it} - 2|
    pub phase_defect: f64,
    /// |E(iy, s) - y^s - phi y^{1-s}|
    pub residual: f64,
}

/// Smallest y >= y_min with arg phi(1/2 + it) - 2t log y = 0 (mod 2 pi), where
/// y^{-1/2}(y^s + phi y^{1-s}) = y^{it}(1 + phi y^{-2it}) has modulus 2.
pub fn find_peak_height(t: f64, y_min: f64) -> Result<PeakHeight> {
    if !(t >= 10.0 && y_min >= 5.0) {
        return Err(Error::Domain(format!("peak search needs t >= 10 and y_min >= 5, got t={t}, y_min={y_min}")));
    }
    let s = Complex64::new(0.5, t);
    let phi = scattering_phi(s)?;
    let theta = phi.arg();
    let k = ((2.0 * t * y_min.ln() - theta) / (2.0 * PI)).ceil();
    let y = ((theta + 2.0 * PI * k) / (2.0 * t)).exp().max(y_min);
    let ln_y = y.ln();
    let phase_defect = (1.0 + phi * (Complex64::new(0.0, -2.0 * t) * ln_y).exp() - 2.0).norm();
    let row = fourier_row(y, s, 1e-14)?;
    let value = row.value_at(0.0);
    let e = eisenstein(HalfPlanePoint::new(0.0, y)?, s, 1e-14)?.value;
    debug_assert!((e - value).norm() <= 1e-9 * value.norm());
    // at x = 0 every cosine is 1; summing the coefficients avoids cancelling
    // against the constant term
    let oscillating: Complex64 = row.coefficients.iter().sum();
    let residual = oscillating.norm() + row.tail_bound;
    Ok(PeakHeight { y, e_ratio: value.norm() / y.sqrt(), phase_defect, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_properties() {
        let p = find_peak_height(50.0, 10.0).unwrap();
        assert!(p.y >= 10.0 && p.phase_defect <= 1e-8);
        assert!(p.e_ratio >= 1.9);
        let q = find_peak_height(50.0, p.y * 1.000_001).unwrap();
        assert!((q.y / p.y - (PI / 50.0).exp()).abs() < 1e-9);
    }

    #[test]
    fn lemma21_small_cases() {
        let r = scan_lemma21(-4, -3, 1.0, None).unwrap();
        assert_eq!(r.len(), 2);
        let d4 = r.iter().find(|r| r.inputs[0] == -4.0).unwrap();
        assert!((d4.value - 1.0).abs() < 1e-15);
        let r = scan_lemma21(-23, -22, 0.5, None).unwrap();
        let want = (23f64.sqrt() / 2.0).sqrt() + 2.0 * (23f64.sqrt() / 4.0).sqrt();
        assert!((r[0].value - want).abs() < 1e-14);
        assert!(scan_lemma21(-10, 5, 0.5, None).is_err());
    }

    #[test]
    fn expsum_box_admissibility() {
        let z = GramMatrix::new(16.0, 0.5).unwrap();
        let boxes = expsum_boxes(&z, 1e4);
        assert!(!boxes.is_empty());
        for (x1, x2) in boxes {
            assert!(x1 >= 1e4f64.cbrt() - 1e-9 && x2 >= 4.0 * 1e4f64.cbrt() - 1e-9);
            assert!(z.eval(x1, x2) <= 4.0 * 4.0 * 1e4);
        }
        assert!(matches!(scan_expsum(&[1.0], &[0.0], &[0.0]), Err(Error::Range(_))));
    }
}
