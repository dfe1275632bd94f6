use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geodata::Network3D;
use crate::network::connectivity::component_labels;
use crate::scalar::Real;

/// Graph measures of a network with m lines, n nodes and p sub-graphs.
///
/// Ratios are carried exactly; the `f64` accessors convert on demand.
/// Percentages are in percent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkIndices {
    pub m: i64,
    pub n: i64,
    pub p_subgraphs: i64,
    /// m − n + p.
    pub k_loops: i64,
    pub beta: Ratio<i64>,
    /// ((k/2 − (n − 1)) / (n(n − 1)/2)) × 100, evaluated as written.
    pub alpha_paper: Ratio<i64>,
    /// k / (n(n − 1)/2 − (n − 1)) × 100; `None` for n = 2 where the maximum
    /// loop count is 0.
    pub alpha_standard: Option<Ratio<i64>>,
    /// m / (n(n − 1)/2) × 100.
    pub gamma: Ratio<i64>,
}

impl NetworkIndices {
    /// Computes the indices from the raw counts.
    pub fn from_counts(m: i64, n: i64, p_subgraphs: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("network indices need at least 2 nodes, got {n}")));
        }
        let k = m - n + p_subgraphs;
        let max_lines = n * (n - 1) / 2;
        let hundred = Ratio::from_integer(100);
        let alpha_paper = (Ratio::new(k, 2) - Ratio::from_integer(n - 1)) / Ratio::from_integer(max_lines) * hundred;
        let max_loops = max_lines - (n - 1);
        let alpha_standard = (max_loops != 0).then(|| Ratio::new(k, max_loops) * hundred);
        Ok(NetworkIndices {
            m,
            n,
            p_subgraphs,
            k_loops: k,
            beta: Ratio::new(m, n),
            alpha_paper,
            alpha_standard,
            gamma: Ratio::new(m, max_lines) * hundred,
        })
    }

    pub fn beta_f64(&self) -> f64 {
        ratio_f64(self.beta)
    }

    pub fn alpha_paper_f64(&self) -> f64 {
        ratio_f64(self.alpha_paper)
    }

    pub fn alpha_standard_f64(&self) -> Option<f64> {
        self.alpha_standard.map(ratio_f64)
    }

    pub fn gamma_f64(&self) -> f64 {
        ratio_f64(self.gamma)
    }
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    r.to_f64().expect("finite ratio")
}

pub fn measure_indices<T: Real>(net: &Network3D<T>) -> Result<NetworkIndices> {
    let (_, components) = component_labels(net);
    NetworkIndices::from_counts(net.edge_count() as i64, net.node_count() as i64, components as i64)
}
