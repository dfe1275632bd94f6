use crate::error::{Error, Result};
use crate::geodata::PointSet3D;
use crate::linalg::{Lu, Matrix};
use crate::scalar::Real;
use crate::stats::idw::EXACT_HIT_DISTANCE;
use crate::stats::variogram::VariogramModel;

#[derive(Debug, Clone, PartialEq)]
pub struct KrigingResult<T> {
    pub estimate: T,
    pub variance: T,
    /// One weight per sample, in point-set order.
    pub weights: Vec<T>,
}

/// Ordinary Kriging over all samples with the system factorized once.
///
/// Solves `[Γ 1; 1ᵀ 0] [w; μ] = [γ₀; 1]` per query, with Γᵢⱼ = γ(dᵢⱼ) and
/// γ₀ᵢ = γ(dᵢ,query) on planimetric distances.
#[derive(Debug, Clone)]
pub struct OrdinaryKriging<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    values: Vec<T>,
    model: VariogramModel<T>,
    lu: Lu<T>,
}

impl<T: Real> OrdinaryKriging<T> {
    pub fn new(points: &PointSet3D<T>, attr: &str, model: VariogramModel<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("Kriging needs samples"));
        }
        if points.len() < 2 {
            return Err(Error::Empty("Kriging needs at least 2 samples"));
        }
        let values = points.attribute(attr)?.to_vec();
        let n = points.len();
        let (xs, ys) = (points.xs().to_vec(), points.ys().to_vec());
        let mut a = Matrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                let g = if i == j {
                    T::zero()
                } else {
                    model.gamma(planar(xs[i], ys[i], xs[j], ys[j]))
                };
                a.set(i, j, g);
            }
            a.set(i, n, T::one());
            a.set(n, i, T::one());
        }
        let lu = Lu::factor(&a)?;
        Ok(OrdinaryKriging {
            xs,
            ys,
            values,
            model,
            lu,
        })
    }

    pub fn model(&self) -> &VariogramModel<T> {
        &self.model
    }

    pub fn predict(&self, x: T, y: T) -> KrigingResult<T> {
        let n = self.values.len();
        let dist: Vec<T> = (0..n).map(|i| planar(self.xs[i], self.ys[i], x, y)).collect();
        if let Some(hit) = exact_hit(&dist) {
            let mut weights = vec![T::zero(); n];
            weights[hit] = T::one();
            return KrigingResult {
                estimate: self.values[hit],
                variance: self.model.effective_nugget(),
                weights,
            };
        }
        let mut rhs: Vec<T> = dist.iter().map(|&d| self.model.gamma(d)).collect();
        rhs.push(T::one());
        let sol = self.lu.solve(&rhs);
        let (weights, mu) = (sol[..n].to_vec(), sol[n]);
        let estimate = weights.iter().zip(&self.values).map(|(&w, &z)| w * z).sum();
        let variance: T = weights.iter().zip(&rhs).map(|(&w, &g)| w * g).sum::<T>() + mu;
        KrigingResult {
            estimate,
            variance: variance.max(T::zero()),
            weights,
        }
    }
}

fn planar<T: Real>(x0: T, y0: T, x1: T, y1: T) -> T {
    let (dx, dy) = (x0 - x1, y0 - y1);
    (dx * dx + dy * dy).sqrt()
}

fn exact_hit<T: Real>(dist: &[T]) -> Option<usize> {
    let tol = T::lit(EXACT_HIT_DISTANCE);
    dist.iter()
        .enumerate()
        .filter(|(_, &d)| d < tol)
        .min_by(|a, b| crate::scalar::total_cmp(*a.1, *b.1))
        .map(|(i, _)| i)
}

/// Ordinary Kriging estimate of `attr` at `query`.
pub fn krige<T: Real>(
    points: &PointSet3D<T>,
    attr: &str,
    variogram: &VariogramModel<T>,
    query: (T, T),
) -> Result<KrigingResult<T>> {
    Ok(OrdinaryKriging::new(points, attr, *variogram)?.predict(query.0, query.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::variogram::VariogramKind;

    fn square(values: [f64; 4]) -> PointSet3D<f64> {
        let c = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        let pts: Vec<[f64; 3]> = c.iter().zip(values).map(|(p, v)| [p[0], p[1], v]).collect();
        PointSet3D::from_xyz(&pts).unwrap()
    }

    #[test]
    fn pure_nugget_gives_sample_mean() {
        let m = VariogramModel::new(VariogramKind::Nugget, 0.0, 1.0, 1.0).unwrap();
        let r = krige(&square([1.0, 2.0, 3.0, 6.0]), "z", &m, (0.3, 0.8)).unwrap();
        for w in &r.weights {
            assert!((w - 0.25).abs() < 1e-12);
        }
        assert!((r.estimate - 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_hit_with_zero_nugget() {
        let m = VariogramModel::new(VariogramKind::Spherical, 0.0, 1.0, 2.0).unwrap();
        let r = krige(&square([1.0, 2.0, 3.0, 6.0]), "z", &m, (1.0, 0.0)).unwrap();
        assert_eq!((r.estimate, r.variance), (2.0, 0.0));
    }

    #[test]
    fn weights_sum_to_one() {
        let m = VariogramModel::new(VariogramKind::Exponential, 0.1, 1.0, 1.5).unwrap();
        let r = krige(&square([1.0, 2.0, 3.0, 6.0]), "z", &m, (2.5, -0.7)).unwrap();
        let s: f64 = r.weights.iter().sum();
        assert!((s - 1.0).abs() < 1e-9);
        assert!(r.variance > 0.0);
    }

    #[test]
    fn too_few_samples() {
        let m = VariogramModel::new(VariogramKind::Spherical, 0.0, 1.0, 2.0).unwrap();
        let one = PointSet3D::from_xyz(&[[0.0, 0.0, 1.0]]).unwrap();
        assert!(krige(&one, "z", &m, (1.0, 1.0)).is_err());
    }
}
