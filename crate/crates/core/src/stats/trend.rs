use crate::error::{Error, Result};
use crate::geodata::PointSet3D;
use crate::linalg::{least_squares, Matrix};
use crate::scalar::Real;

pub const MAX_TREND_DEGREE: usize = 3;

/// Exponents `(i, j)` of the monomials xⁱyʲ with i + j ≤ `degree`, ordered by
/// total degree and then by descending power of x.
pub fn monomial_exponents(degree: usize) -> Vec<(usize, usize)> {
    (0..=degree)
        .flat_map(|d| (0..=d).rev().map(move |i| (i, d - i)))
        .collect()
}

pub fn coefficient_count(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

fn monomial_index(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + (d - i)
}

/// Affine map (x, y) ↦ ((x − cx)/scale, (y − cy)/scale) placing the data's
/// bounding box inside [−1, 1]².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinateFrame<T> {
    pub cx: T,
    pub cy: T,
    pub scale: T,
}

impl<T: Real> CoordinateFrame<T> {
    pub fn identity() -> Self {
        CoordinateFrame {
            cx: T::zero(),
            cy: T::zero(),
            scale: T::one(),
        }
    }

    pub fn apply(&self, x: T, y: T) -> (T, T) {
        ((x - self.cx) / self.scale, (y - self.cy) / self.scale)
    }
}

/// Least-squares polynomial trend surface.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendSurfaceModel<T> {
    pub degree: usize,
    /// Coefficients of xⁱyʲ in world coordinates, in [`monomial_exponents`] order.
    pub coefficients: Vec<T>,
    /// Frame the system was solved in.
    pub frame: CoordinateFrame<T>,
    /// Coefficients of uⁱvʲ in `frame` coordinates; used for evaluation.
    pub frame_coefficients: Vec<T>,
    pub r_squared: T,
    pub residual_rms: T,
}

impl<T: Real> TrendSurfaceModel<T> {
    /// Wraps known world-frame coefficients. Fit statistics are set to a
    /// perfect fit since there is no data behind them.
    pub fn from_coefficients(degree: usize, coefficients: Vec<T>) -> Result<Self> {
        check_degree(degree)?;
        if coefficients.len() != coefficient_count(degree) {
            return Err(Error::Parameter(format!(
                "degree {degree} needs {} coefficients, got {}",
                coefficient_count(degree),
                coefficients.len()
            )));
        }
        Ok(TrendSurfaceModel {
            degree,
            frame_coefficients: coefficients.clone(),
            coefficients,
            frame: CoordinateFrame::identity(),
            r_squared: T::one(),
            residual_rms: T::zero(),
        })
    }

    pub fn evaluate(&self, x: T, y: T) -> T {
        let (u, v) = self.frame.apply(x, y);
        eval_monomials(self.degree, &self.frame_coefficients, u, v)
    }

    /// World-frame monomial values at (x, y), i.e. one design-matrix row.
    pub fn design_row(&self, x: T, y: T) -> Vec<T> {
        monomial_row(self.degree, x, y)
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if !(1..=MAX_TREND_DEGREE).contains(&degree) {
        return Err(Error::Parameter(format!(
            "trend degree must be in 1..={MAX_TREND_DEGREE}, got {degree}"
        )));
    }
    Ok(())
}

fn monomial_row<T: Real>(degree: usize, x: T, y: T) -> Vec<T> {
    monomial_exponents(degree)
        .into_iter()
        .map(|(i, j)| x.powi(i as i32) * y.powi(j as i32))
        .collect()
}

fn eval_monomials<T: Real>(degree: usize, coeffs: &[T], x: T, y: T) -> T {
    monomial_row(degree, x, y)
        .into_iter()
        .zip(coeffs)
        .map(|(m, &c)| m * c)
        .sum()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Re-expresses frame coefficients as world-frame coefficients by expanding
/// ((x − cx)/s)ⁱ ((y − cy)/s)ʲ binomially.
fn to_world<T: Real>(degree: usize, frame: &CoordinateFrame<T>, coeffs: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); coeffs.len()];
    for ((i, j), &a) in monomial_exponents(degree).into_iter().zip(coeffs) {
        let a = a / frame.scale.powi((i + j) as i32);
        for k in 0..=i {
            let xk = T::from_count(binomial(i, k)) * (-frame.cx).powi((i - k) as i32);
            for l in 0..=j {
                let yl = T::from_count(binomial(j, l)) * (-frame.cy).powi((j - l) as i32);
                out[monomial_index(k, l)] += a * xk * yl;
            }
        }
    }
    out
}

/// Fits Σ cᵢⱼ xⁱyʲ (i + j ≤ `degree`) to the points' z by least squares.
///
/// Coordinates are centred and scaled into [−1, 1]² and the system is solved
/// by Householder QR. `r_squared` is 1 whenever SS_res ≤ 1e−12·max(1, SS_tot).
pub fn fit_trend_surface<T: Real>(points: &PointSet3D<T>, degree: usize) -> Result<TrendSurfaceModel<T>> {
    check_degree(degree)?;
    let ncoef = coefficient_count(degree);
    let n = points.len();
    if n < ncoef {
        return Err(Error::Underdetermined {
            needed: ncoef,
            available: n,
        });
    }
    let (x0, y0, x1, y1) = points.bounds().expect("non-empty");
    let half = T::lit(0.5);
    let scale = ((x1 - x0).max(y1 - y0)) * half;
    if !(scale > T::zero()) {
        return Err(Error::RankDeficient);
    }
    let frame = CoordinateFrame {
        cx: (x0 + x1) * half,
        cy: (y0 + y1) * half,
        scale,
    };

    let mut design = Matrix::zeros(n, ncoef);
    for r in 0..n {
        let (u, v) = frame.apply(points.xs()[r], points.ys()[r]);
        for (c, m) in monomial_row(degree, u, v).into_iter().enumerate() {
            design.set(r, c, m);
        }
    }
    let zs = points.zs();
    let frame_coefficients = least_squares(&design, zs)?;

    let fitted = design.mul_vec(&frame_coefficients);
    let ss_res: T = zs.iter().zip(&fitted).map(|(&z, &f)| (z - f) * (z - f)).sum();
    let mean = zs.iter().copied().sum::<T>() / T::from_count(n);
    let ss_tot: T = zs.iter().map(|&z| (z - mean) * (z - mean)).sum();
    let r_squared = if ss_res <= T::lit(1e-12) * ss_tot.max(T::one()) {
        T::one()
    } else {
        (T::one() - ss_res / ss_tot).max(T::zero()).min(T::one())
    };

    Ok(TrendSurfaceModel {
        degree,
        coefficients: to_world(degree, &frame, &frame_coefficients),
        frame,
        frame_coefficients,
        r_squared,
        residual_rms: (ss_res / T::from_count(n)).sqrt(),
    })
}

pub fn evaluate_trend_surface<T: Real>(model: &TrendSurfaceModel<T>, x: T, y: T) -> T {
    model.evaluate(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order() {
        assert_eq!(monomial_exponents(1), [(0, 0), (1, 0), (0, 1)]);
        assert_eq!(
            monomial_exponents(3),
            [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)]
        );
        for (k, (i, j)) in monomial_exponents(3).into_iter().enumerate() {
            assert_eq!(monomial_index(i, j), k);
        }
        assert_eq!(coefficient_count(3), 10);
    }

    #[test]
    fn plane_reproduced_exactly() {
        let pts: Vec<[f64; 3]> = (0..10)
            .map(|k| {
                let (x, y) = ((k % 4) as f64 * 1.3 + 10.0, (k / 4) as f64 * 0.7 - 3.0 + 0.01 * k as f64);
                [x, y, 1.0 + 2.0 * x + 3.0 * y]
            })
            .collect();
        let m = fit_trend_surface(&PointSet3D::from_xyz(&pts).unwrap(), 1).unwrap();
        for (c, want) in m.coefficients.iter().zip([1.0, 2.0, 3.0]) {
            assert!((c - want).abs() < 1e-10, "{:?}", m.coefficients);
        }
        assert_eq!(m.r_squared, 1.0);
    }

    #[test]
    fn evaluation_examples() {
        let m = TrendSurfaceModel::from_coefficients(1, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(evaluate_trend_surface(&m, 0.0, 0.0), 1.0);
        assert_eq!(evaluate_trend_surface(&m, 1.0, 1.0), 6.0);
    }

    #[test]
    fn underdetermined_and_rank_deficient() {
        let pts = [[0.0, 0.0, 1.0], [1.0, 0.0, 2.0], [0.0, 1.0, 3.0]];
        let p = PointSet3D::from_xyz(&pts).unwrap();
        let err = fit_trend_surface(&p, 3).unwrap_err();
        assert!(err.to_string().contains("underdetermined"), "{err}");

        let line: Vec<[f64; 3]> = (0..6).map(|k| [k as f64, 2.0 * k as f64, 1.0]).collect();
        let err = fit_trend_surface(&PointSet3D::from_xyz(&line).unwrap(), 1).unwrap_err();
        assert!(matches!(err, Error::RankDeficient), "{err}");
    }

    #[test]
    fn degree_out_of_range() {
        let pts: Vec<[f64; 3]> = (0..20).map(|k| [k as f64, (k * k) as f64, 0.0]).collect();
        assert!(matches!(fit_trend_surface(&PointSet3D::from_xyz(&pts).unwrap(), 4), Err(Error::Parameter(_))));
    }

    #[test]
    fn noisy_fit_has_fractional_r_squared() {
        let pts: Vec<[f64; 3]> = (0..25)
            .map(|k| {
                let (x, y) = ((k % 5) as f64, (k / 5) as f64);
                [x, y, x - y + if k % 2 == 0 { 0.3 } else { -0.3 }]
            })
            .collect();
        let m = fit_trend_surface(&PointSet3D::from_xyz(&pts).unwrap(), 1).unwrap();
        assert!(m.r_squared > 0.9 && m.r_squared < 1.0, "{}", m.r_squared);
        assert!(m.residual_rms > 0.0);
    }
}
