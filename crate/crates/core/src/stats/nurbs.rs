use crate::error::{Error, Result};
use crate::geodata::PointSet3D;
use crate::linalg::{least_squares, Matrix};
use crate::scalar::Real;

pub const SPLINE_DEGREE: usize = 3;

/// Ridge weight on the control values in the least-squares fit.
pub const RIDGE_LAMBDA: f64 = 1e-8;

/// Clamped uniform knot vector over `[a, b]` for `n_ctrl` control points:
/// `degree + 1` copies of each end and evenly spaced interior knots.
pub fn clamped_uniform_knots<T: Real>(a: T, b: T, n_ctrl: usize, degree: usize) -> Vec<T> {
    let spans = n_ctrl - degree;
    let mut knots = Vec::with_capacity(n_ctrl + degree + 1);
    knots.extend(std::iter::repeat_n(a, degree + 1));
    for k in 1..spans {
        knots.push(a + (b - a) * T::from_count(k) / T::from_count(spans));
    }
    knots.extend(std::iter::repeat_n(b, degree + 1));
    knots
}

/// Index of the knot span containing `u`; the parameter's upper end maps to
/// the last non-empty span.
pub fn find_span<T: Real>(knots: &[T], degree: usize, n_ctrl: usize, u: T) -> usize {
    let n = n_ctrl - 1;
    if u >= knots[n + 1] {
        return n;
    }
    if u <= knots[degree] {
        return degree;
    }
    let (mut lo, mut hi) = (degree, n + 1);
    let mut mid = (lo + hi) / 2;
    while u < knots[mid] || u >= knots[mid + 1] {
        if u < knots[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
        mid = (lo + hi) / 2;
    }
    mid
}

/// The `degree + 1` non-zero B-spline basis values at `u` (Cox–de Boor),
/// belonging to control indices `span − degree ..= span`.
pub fn basis_functions<T: Real>(knots: &[T], degree: usize, span: usize, u: T) -> Vec<T> {
    let mut n = vec![T::zero(); degree + 1];
    let mut left = vec![T::zero(); degree + 1];
    let mut right = vec![T::zero(); degree + 1];
    n[0] = T::one();
    for j in 1..=degree {
        left[j] = u - knots[span + 1 - j];
        right[j] = knots[span + j] - u;
        let mut saved = T::zero();
        for r in 0..j {
            let temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    n
}

/// de Boor's algorithm on homogeneous (w·z, w) control values.
fn de_boor<T: Real>(knots: &[T], degree: usize, span: usize, u: T, ctrl: &mut [(T, T)]) -> (T, T) {
    for r in 1..=degree {
        for j in (r..=degree).rev() {
            let i = span - degree + j;
            let denom = knots[i + degree + 1 - r] - knots[i];
            let alpha = if denom > T::zero() { (u - knots[i]) / denom } else { T::zero() };
            let (a, b) = (ctrl[j - 1], ctrl[j]);
            ctrl[j] = (
                (T::one() - alpha) * a.0 + alpha * b.0,
                (T::one() - alpha) * a.1 + alpha * b.1,
            );
        }
    }
    ctrl[degree]
}

/// Bicubic NURBS surface z = S(x, y) over the data's bounding rectangle.
///
/// `control` and `weights` are `nu × nv`, row-major with the first index
/// running along x.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineSurfaceModel<T> {
    pub degree_u: usize,
    pub degree_v: usize,
    pub nu: usize,
    pub nv: usize,
    pub control: Vec<T>,
    pub weights: Vec<T>,
    pub knots_u: Vec<T>,
    pub knots_v: Vec<T>,
    pub residual_rms: T,
}

impl<T: Real> SplineSurfaceModel<T> {
    pub fn control_value(&self, i: usize, j: usize) -> T {
        self.control[i * self.nv + j]
    }

    /// `(xmin, xmax, ymin, ymax)`.
    pub fn domain(&self) -> (T, T, T, T) {
        (
            self.knots_u[0],
            *self.knots_u.last().unwrap(),
            self.knots_v[0],
            *self.knots_v.last().unwrap(),
        )
    }

    fn check_domain(&self, x: T, y: T) -> Result<()> {
        let (x0, x1, y0, y1) = self.domain();
        if !(x >= x0 && x <= x1 && y >= y0 && y <= y1) {
            return Err(Error::OutsideDomain {
                x: x.as_f64(),
                y: y.as_f64(),
            });
        }
        Ok(())
    }

    /// Rational de Boor evaluation.
    pub fn evaluate(&self, x: T, y: T) -> Result<T> {
        self.check_domain(x, y)?;
        let (p, q) = (self.degree_u, self.degree_v);
        let su = find_span(&self.knots_u, p, self.nu, x);
        let sv = find_span(&self.knots_v, q, self.nv, y);
        let mut column: Vec<(T, T)> = (0..=p)
            .map(|a| {
                let i = su - p + a;
                let mut row: Vec<(T, T)> = (0..=q)
                    .map(|b| {
                        let k = i * self.nv + sv - q + b;
                        (self.weights[k] * self.control[k], self.weights[k])
                    })
                    .collect();
                de_boor(&self.knots_v, q, sv, y, &mut row)
            })
            .collect();
        let (wz, w) = de_boor(&self.knots_u, p, su, x, &mut column);
        Ok(wz / w)
    }

    /// Σᵢⱼ Nᵢ(x)·Mⱼ(y); equals 1 inside the domain.
    pub fn basis_sum(&self, x: T, y: T) -> Result<T> {
        self.check_domain(x, y)?;
        let su = find_span(&self.knots_u, self.degree_u, self.nu, x);
        let sv = find_span(&self.knots_v, self.degree_v, self.nv, y);
        let bu = basis_functions(&self.knots_u, self.degree_u, su, x);
        let bv = basis_functions(&self.knots_v, self.degree_v, sv, y);
        Ok(bu.iter().map(|&a| bv.iter().map(|&b| a * b).sum::<T>()).sum())
    }
}

/// Least-squares bicubic fit with `nu × nv` control values and unit weights.
pub fn fit_nurbs_surface<T: Real>(points: &PointSet3D<T>, nu: usize, nv: usize) -> Result<SplineSurfaceModel<T>> {
    let p = SPLINE_DEGREE;
    if nu <= p || nv <= p {
        return Err(Error::Parameter(format!(
            "control net must be at least {0}x{0}, got {nu}x{nv}",
            p + 1
        )));
    }
    let ncoef = nu * nv;
    if points.len() < ncoef {
        return Err(Error::Underdetermined {
            needed: ncoef,
            available: points.len(),
        });
    }
    let (x0, y0, x1, y1) = points.bounds().expect("non-empty");
    if !(x1 > x0 && y1 > y0) {
        return Err(Error::Invalid("degenerate bounding rectangle".into()));
    }
    let knots_u = clamped_uniform_knots(x0, x1, nu, p);
    let knots_v = clamped_uniform_knots(y0, y1, nv, p);

    let n = points.len();
    let mut a = Matrix::zeros(n + ncoef, ncoef);
    let mut b = vec![T::zero(); n + ncoef];
    for r in 0..n {
        let (x, y) = (points.xs()[r], points.ys()[r]);
        let su = find_span(&knots_u, p, nu, x);
        let sv = find_span(&knots_v, p, nv, y);
        let bu = basis_functions(&knots_u, p, su, x);
        let bv = basis_functions(&knots_v, p, sv, y);
        for (ia, &na) in bu.iter().enumerate() {
            for (ib, &nb) in bv.iter().enumerate() {
                a.set(r, (su - p + ia) * nv + (sv - p + ib), na * nb);
            }
        }
        b[r] = points.zs()[r];
    }
    let ridge = T::lit(RIDGE_LAMBDA).sqrt();
    for k in 0..ncoef {
        a.set(n + k, k, ridge);
    }
    let control = least_squares(&a, &b)?;

    let model = SplineSurfaceModel {
        degree_u: p,
        degree_v: p,
        nu,
        nv,
        weights: vec![T::one(); ncoef],
        control,
        knots_u,
        knots_v,
        residual_rms: T::zero(),
    };
    let ss: T = (0..n)
        .map(|r| {
            let e = points.zs()[r] - model.evaluate(points.xs()[r], points.ys()[r]).expect("sample inside domain");
            e * e
        })
        .sum();
    Ok(SplineSurfaceModel {
        residual_rms: (ss / T::from_count(n)).sqrt(),
        ..model
    })
}

pub fn evaluate_spline<T: Real>(model: &SplineSurfaceModel<T>, x: T, y: T) -> Result<T> {
    model.evaluate(x, y)
}
