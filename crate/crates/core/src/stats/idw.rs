use crate::error::{Error, Result};
use crate::geodata::PointSet3D;
use crate::scalar::{total_cmp, Real};

/// Distance below which a query coincides with a sample.
pub const EXACT_HIT_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbors {
    All,
    Nearest(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdwParams<T> {
    pub power: T,
    pub neighbors: Neighbors,
}

impl<T: Real> Default for IdwParams<T> {
    fn default() -> Self {
        IdwParams {
            power: T::lit(2.0),
            neighbors: Neighbors::All,
        }
    }
}

impl<T: Real> IdwParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.power > T::zero()) || !self.power.is_finite() {
            return Err(Error::Parameter(format!("IDW power must be > 0, got {}", self.power)));
        }
        if self.neighbors == Neighbors::Nearest(0) {
            return Err(Error::Parameter("IDW neighbour count must be positive".into()));
        }
        Ok(())
    }
}

/// Inverse-distance-weighted mean of `attr` at `query`, weights 1/dᵖ over
/// planimetric distance.
///
/// Samples are visited in (distance, x, y) order so the result does not
/// depend on the input order of the points.
pub fn idw_interpolate<T: Real>(
    points: &PointSet3D<T>,
    attr: &str,
    query: (T, T),
    params: &IdwParams<T>,
) -> Result<T> {
    params.validate()?;
    if points.is_empty() {
        return Err(Error::Empty("IDW needs at least one sample"));
    }
    let values = points.attribute(attr)?;
    let mut samples: Vec<(T, T, T, T)> = (0..points.len())
        .map(|i| {
            let (dx, dy) = (points.xs()[i] - query.0, points.ys()[i] - query.1);
            ((dx * dx + dy * dy).sqrt(), points.xs()[i], points.ys()[i], values[i])
        })
        .collect();
    samples.sort_by(|a, b| {
        total_cmp(a.0, b.0)
            .then(total_cmp(a.1, b.1))
            .then(total_cmp(a.2, b.2))
    });
    if samples[0].0 < T::lit(EXACT_HIT_DISTANCE) {
        return Ok(samples[0].3);
    }
    let k = match params.neighbors {
        Neighbors::All => samples.len(),
        Neighbors::Nearest(k) => k.min(samples.len()),
    };
    let used = &samples[..k];
    let (mut num, mut den) = (T::zero(), T::zero());
    let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
    // Weights relative to the nearest sample: (d₀/d)ᵖ is 1 for every
    // equidistant sample, so ties average exactly.
    let nearest = used[0].0;
    for &(d, _, _, v) in used {
        let w = (nearest / d).powf(params.power);
        num += w * v;
        den += w;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    // A convex combination; clamping only removes last-bit rounding overshoot.
    Ok((num / den).max(lo).min(hi))
}
