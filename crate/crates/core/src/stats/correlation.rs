use crate::error::{Error, Result};
use crate::geodata::PointSet3D;
use crate::scalar::Real;

/// Pearson correlation between every pair of the named attributes.
///
/// Symmetric with a unit diagonal; entries are clamped to [−1, 1].
pub fn correlation_matrix<T: Real>(points: &PointSet3D<T>, attrs: &[&str]) -> Result<Vec<Vec<T>>> {
    if points.len() < 2 {
        return Err(Error::Empty("correlation needs at least 2 points"));
    }
    let n = T::from_count(points.len());
    let mut centered = Vec::with_capacity(attrs.len());
    let mut zero_var = Vec::new();
    for &name in attrs {
        let col = points.attribute(name)?;
        let mean = col.iter().copied().sum::<T>() / n;
        let dev: Vec<T> = col.iter().map(|&v| v - mean).collect();
        let ss: T = dev.iter().map(|&d| d * d).sum();
        if !(ss > T::zero()) {
            zero_var.push(name.to_string());
        }
        centered.push((dev, ss));
    }
    if !zero_var.is_empty() {
        zero_var.dedup();
        return Err(Error::ZeroVariance(zero_var));
    }

    let k = attrs.len();
    let mut out = vec![vec![T::one(); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let (a, na) = &centered[i];
            let (b, nb) = &centered[j];
            let cov: T = a.iter().zip(b).map(|(&u, &v)| u * v).sum();
            let r = (cov / (*na * *nb).sqrt()).max(-T::one()).min(T::one());
            out[i][j] = r;
            out[j][i] = r;
        }
    }
    Ok(out)
}
