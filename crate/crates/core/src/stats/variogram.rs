use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodata::PointSet3D;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariogramKind {
    Spherical,
    Exponential,
    Gaussian,
    /// Pure nugget: γ(h) = sill for every h > 0.
    Nugget,
}

impl FromStr for VariogramKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spherical" => Ok(VariogramKind::Spherical),
            "exponential" => Ok(VariogramKind::Exponential),
            "gaussian" => Ok(VariogramKind::Gaussian),
            "nugget" => Ok(VariogramKind::Nugget),
            _ => Err(Error::Parameter(format!("unknown variogram model '{s}'"))),
        }
    }
}

impl fmt::Display for VariogramKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VariogramKind::Spherical => "spherical",
            VariogramKind::Exponential => "exponential",
            VariogramKind::Gaussian => "gaussian",
            VariogramKind::Nugget => "nugget",
        })
    }
}

/// Isotropic theoretical semivariogram.
///
/// Exponential and gaussian use the practical-range form: they reach 95% of
/// the partial sill at `range`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariogramModel<T> {
    pub kind: VariogramKind,
    pub nugget: T,
    pub sill: T,
    pub range: T,
}

impl<T: Real> VariogramModel<T> {
    pub fn new(kind: VariogramKind, nugget: T, sill: T, range: T) -> Result<Self> {
        if !(nugget >= T::zero()) || !nugget.is_finite() {
            return Err(Error::Parameter(format!("nugget must be >= 0, got {nugget}")));
        }
        if !(sill >= nugget) || !sill.is_finite() {
            return Err(Error::Parameter(format!("sill ({sill}) must be >= nugget ({nugget})")));
        }
        if !(range > T::zero()) || !range.is_finite() {
            return Err(Error::Parameter(format!("range must be > 0, got {range}")));
        }
        Ok(VariogramModel {
            kind,
            nugget,
            sill,
            range,
        })
    }

    /// Discontinuity at the origin; the whole sill for a pure-nugget model.
    pub fn effective_nugget(&self) -> T {
        match self.kind {
            VariogramKind::Nugget => self.sill,
            _ => self.nugget,
        }
    }

    /// Normalized structure function in [0, 1] for h > 0.
    fn shape(&self, h: T) -> T {
        let three = T::lit(3.0);
        let r = h / self.range;
        match self.kind {
            VariogramKind::Spherical => {
                if r >= T::one() {
                    T::one()
                } else {
                    T::lit(1.5) * r - T::lit(0.5) * r * r * r
                }
            }
            VariogramKind::Exponential => T::one() - (-three * r).exp(),
            VariogramKind::Gaussian => T::one() - (-three * r * r).exp(),
            VariogramKind::Nugget => T::one(),
        }
    }

    /// γ(h); γ(0) = 0.
    pub fn gamma(&self, h: T) -> T {
        if h <= T::zero() {
            return T::zero();
        }
        match self.kind {
            VariogramKind::Nugget => self.sill,
            _ => self.nugget + (self.sill - self.nugget) * self.shape(h),
        }
    }
}

/// One distance class of the empirical semivariogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagBin<T> {
    pub lag_center: T,
    /// `None` for bins without pairs.
    pub gamma: Option<T>,
    pub pair_count: usize,
}

/// Classical (Matheron) estimator γ̂(h) = Σ (zᵢ − zⱼ)² / (2 N_h) over
/// `n_lags` equal-width classes on (0, `max_lag`].
pub fn empirical_semivariogram<T: Real>(
    points: &PointSet3D<T>,
    attr: &str,
    n_lags: usize,
    max_lag: T,
) -> Result<Vec<LagBin<T>>> {
    if !(max_lag > T::zero()) || !max_lag.is_finite() {
        return Err(Error::Parameter(format!("max_lag must be > 0, got {max_lag}")));
    }
    if n_lags == 0 {
        return Err(Error::Parameter("number of lags must be positive".into()));
    }
    if points.len() < 2 {
        return Err(Error::Empty("semivariogram needs at least 2 points"));
    }
    let values = points.attribute(attr)?;
    let width = max_lag / T::from_count(n_lags);
    let mut sums = vec![T::zero(); n_lags];
    let mut counts = vec![0usize; n_lags];
    let (xs, ys) = (points.xs(), points.ys());
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (dx, dy) = (xs[i] - xs[j], ys[i] - ys[j]);
            let d = (dx * dx + dy * dy).sqrt();
            if d > max_lag || d <= T::zero() {
                continue;
            }
            // Class k covers (k·w, (k+1)·w].
            let k = ((d / width).ceil().to_usize().unwrap_or(1).max(1) - 1).min(n_lags - 1);
            let diff = values[i] - values[j];
            sums[k] += diff * diff;
            counts[k] += 1;
        }
    }
    let half = T::lit(0.5);
    Ok((0..n_lags)
        .map(|k| LagBin {
            lag_center: (T::from_count(k) + half) * width,
            gamma: (counts[k] > 0).then(|| sums[k] / (T::lit(2.0) * T::from_count(counts[k]))),
            pair_count: counts[k],
        })
        .collect())
}

/// Fits `kind` to the empirical bins by least squares weighted with pair
/// counts.
///
/// For a fixed range the model is linear in (nugget, partial sill), which is
/// solved in closed form under non-negativity; the range is found by a
/// log-spaced scan refined with golden-section search. `variance` is the
/// sample variance, used as the sill when no bin has pairs.
pub fn fit_variogram<T: Real>(
    bins: &[LagBin<T>],
    kind: VariogramKind,
    max_lag: T,
    variance: T,
) -> Result<VariogramModel<T>> {
    let data: Vec<(T, T, T)> = bins
        .iter()
        .filter_map(|b| b.gamma.map(|g| (b.lag_center, g, T::from_count(b.pair_count))))
        .collect();
    let init_range = max_lag * T::lit(0.5);
    let first = data.first().map_or(T::zero(), |d| d.1);
    let init_sill = variance.max(first);
    if data.is_empty() {
        return VariogramModel::new(kind, T::zero(), variance.max(T::zero()), init_range);
    }

    if kind == VariogramKind::Nugget {
        let wsum: T = data.iter().map(|d| d.2).sum();
        let sill = data.iter().map(|d| d.2 * d.1).sum::<T>() / wsum;
        return VariogramModel::new(kind, T::zero(), sill.max(T::zero()), init_range);
    }

    let objective = |range: T| -> (T, T, T) {
        let probe = VariogramModel {
            kind,
            nugget: T::zero(),
            sill: T::one(),
            range,
        };
        let (c0, c1) = solve_linear_part(&data, |h| probe.shape(h));
        let sse = data
            .iter()
            .map(|&(h, g, w)| {
                let e = g - c0 - c1 * probe.shape(h);
                w * e * e
            })
            .sum();
        (sse, c0, c1)
    };

    let lo = (max_lag * T::lit(0.01)).ln();
    let hi = (max_lag * T::lit(2.0)).ln();
    let steps = 80;
    let mut best = (init_range, objective(init_range));
    let mut best_step = None;
    for s in 0..=steps {
        let r = (lo + (hi - lo) * T::from_count(s) / T::from_count(steps)).exp();
        let o = objective(r);
        if o.0 < best.1 .0 {
            best = (r, o);
            best_step = Some(s);
        }
    }
    if let Some(s) = best_step {
        let step = (hi - lo) / T::from_count(steps);
        let (mut a, mut b) = (lo + step * T::from_count(s.saturating_sub(1)), lo + step * T::from_count((s + 1).min(steps)));
        let phi = T::lit(0.618_033_988_749_894_8);
        for _ in 0..60 {
            let m1 = b - phi * (b - a);
            let m2 = a + phi * (b - a);
            if objective(m1.exp()).0 < objective(m2.exp()).0 {
                b = m2;
            } else {
                a = m1;
            }
        }
        let r = ((a + b) * T::lit(0.5)).exp();
        let o = objective(r);
        if o.0 < best.1 .0 {
            best = (r, o);
        }
    }
    let (range, (_, c0, c1)) = best;
    let fitted = VariogramModel::new(kind, c0, c0 + c1, range);
    // A degenerate fit (all-zero bins) falls back to the initial guess.
    match fitted {
        Ok(m) if m.sill > T::zero() => Ok(m),
        _ => VariogramModel::new(kind, first.min(init_sill), init_sill, init_range),
    }
}

/// Minimizes Σ w (g − c0 − c1 f(h))² subject to c0, c1 ≥ 0.
fn solve_linear_part<T: Real>(data: &[(T, T, T)], f: impl Fn(T) -> T) -> (T, T) {
    let (mut sw, mut sf, mut sff, mut sg, mut sfg) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for &(h, g, w) in data {
        let fh = f(h);
        sw += w;
        sf += w * fh;
        sff += w * fh * fh;
        sg += w * g;
        sfg += w * fh * g;
    }
    let sse = |c0: T, c1: T| {
        data.iter()
            .map(|&(h, g, w)| {
                let e = g - c0 - c1 * f(h);
                w * e * e
            })
            .sum::<T>()
    };
    let mut candidates = Vec::with_capacity(3);
    let det = sw * sff - sf * sf;
    if det.abs() > T::epsilon() * sw * sff {
        let c0 = (sg * sff - sf * sfg) / det;
        let c1 = (sw * sfg - sf * sg) / det;
        if c0 >= T::zero() && c1 >= T::zero() {
            candidates.push((c0, c1));
        }
    }
    if sff > T::zero() {
        candidates.push((T::zero(), (sfg / sff).max(T::zero())));
    }
    candidates.push(((sg / sw).max(T::zero()), T::zero()));
    candidates
        .into_iter()
        .map(|(c0, c1)| (sse(c0, c1), c0, c1))
        .min_by(|a, b| crate::scalar::total_cmp(a.0, b.0))
        .map(|(_, c0, c1)| (c0, c1))
        .expect("at least one candidate")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: &[f64]) -> PointSet3D<f64> {
        let pts: Vec<[f64; 3]> = values.iter().enumerate().map(|(i, &v)| [i as f64, 0.0, v]).collect();
        PointSet3D::from_xyz(&pts).unwrap()
    }

    #[test]
    fn single_pair() {
        let bins = empirical_semivariogram(&line(&[3.0, 7.0]), "z", 1, 1.0).unwrap();
        assert_eq!(bins[0].gamma, Some(8.0));
        assert_eq!(bins[0].pair_count, 1);
        assert_eq!(bins[0].lag_center, 0.5);
    }

    #[test]
    fn constant_field_is_zero() {
        let bins = empirical_semivariogram(&line(&[2.0; 6]), "z", 3, 3.0).unwrap();
        assert!(bins.iter().all(|b| b.gamma == Some(0.0)));
    }

    #[test]
    fn alternating_line_first_lag() {
        let bins = empirical_semivariogram(&line(&[0.0, 1.0, 0.0, 1.0]), "z", 3, 3.0).unwrap();
        assert_eq!(bins[0].pair_count, 3);
        assert_eq!(bins[0].gamma, Some(0.5));
        assert_eq!(bins[1].gamma, Some(0.0));
        assert_eq!(bins[2].gamma, Some(0.5));
    }

    #[test]
    fn empty_bins_are_marked() {
        let bins = empirical_semivariogram(&line(&[0.0, 1.0]), "z", 4, 4.0).unwrap();
        assert_eq!(bins[1].pair_count, 0);
        assert_eq!(bins[1].gamma, None);
    }

    #[test]
    fn bad_max_lag() {
        assert!(empirical_semivariogram(&line(&[0.0, 1.0]), "z", 4, 0.0).is_err());
    }

    #[test]
    fn model_shapes() {
        let s: VariogramModel<f64> = VariogramModel::new(VariogramKind::Spherical, 0.5, 2.0, 10.0).unwrap();
        assert_eq!(s.gamma(0.0), 0.0);
        assert_eq!(s.gamma(10.0), 2.0);
        assert_eq!(s.gamma(50.0), 2.0);
        assert!((s.gamma(5.0) - (0.5 + 1.5 * 0.6875)).abs() < 1e-15);
        let e = VariogramModel::new(VariogramKind::Exponential, 0.0, 1.0, 3.0).unwrap();
        assert!((e.gamma(3.0) - (1.0 - (-3.0f64).exp())).abs() < 1e-15);
        let n = VariogramModel::new(VariogramKind::Nugget, 0.0, 1.0, 1.0).unwrap();
        assert_eq!((n.gamma(0.0), n.gamma(1e-6)), (0.0, 1.0));
    }

    #[test]
    fn invalid_models() {
        assert!(VariogramModel::new(VariogramKind::Spherical, 2.0, 1.0, 1.0).is_err());
        assert!(VariogramModel::new(VariogramKind::Spherical, 0.0, 1.0, 0.0).is_err());
        assert!(VariogramModel::new(VariogramKind::Spherical, -0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn fit_recovers_planted_spherical() {
        let truth = VariogramModel::new(VariogramKind::Spherical, 0.2, 1.2, 6.0).unwrap();
        let bins: Vec<LagBin<f64>> = (0..12)
            .map(|k| {
                let h = 0.5 + k as f64;
                LagBin { lag_center: h, gamma: Some(truth.gamma(h)), pair_count: 10 + k }
            })
            .collect();
        let fit = fit_variogram(&bins, VariogramKind::Spherical, 12.0, 1.0).unwrap();
        assert!((fit.nugget - 0.2).abs() < 1e-6, "{fit:?}");
        assert!((fit.sill - 1.2).abs() < 1e-6, "{fit:?}");
        assert!((fit.range - 6.0).abs() < 1e-4, "{fit:?}");
    }
}
