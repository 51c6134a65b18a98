//! JSON mesh dump.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "iteration": 6,
//!   "strata": [
//!     { "lower": [0.0, 0.0], "upper": [0.25, 0.25], "n": 12, "sigma2_bar": 0.0, "depth": 0 }
//!   ]
//! }
//! ```
//!
//! `iteration` is the stop level of the run. Coordinates are the stratum
//! box `[lower, upper)`, `n` its sample count, `sigma2_bar` the biased
//! sample variance of the integrand on it (`null` if never sampled) and
//! `depth` the number of bisections since the initial grid.

use serde::{Deserialize, Serialize};

use crate::adaptive::RunReport;
use crate::error::Result;
use crate::geometry::HyperRect;
use crate::mesh::{Mesh, Stratum};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumDump {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub n: usize,
    pub sigma2_bar: Option<f64>,
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshDump {
    pub dim: usize,
    pub iteration: usize,
    pub strata: Vec<StratumDump>,
}

impl MeshDump {
    pub fn from_mesh<T: Scalar>(mesh: &Mesh<T>, iteration: usize) -> Self {
        let strata = mesh
            .strata()
            .iter()
            .map(|s| StratumDump {
                lower: s.rect.lower().iter().map(|v| v.as_f64()).collect(),
                upper: s.rect.upper().iter().map(|v| v.as_f64()).collect(),
                n: s.n,
                sigma2_bar: s.moments.map(|m| m.sigma2_bar.as_f64()),
                depth: s.depth,
            })
            .collect();
        Self {
            dim: mesh.dim(),
            iteration,
            strata,
        }
    }

    pub fn from_report<T: Scalar>(report: &RunReport<T>) -> Self {
        Self::from_mesh(&report.mesh_final, report.stop_level)
    }

    /// Rebuild the geometry, validating every box. Moments are not restored.
    pub fn to_mesh(&self) -> Result<Mesh<f64>> {
        let strata = self
            .strata
            .iter()
            .map(|s| {
                let rect = HyperRect::new(s.lower.clone(), s.upper.clone())?;
                Ok(Stratum {
                    rect,
                    n: s.n,
                    depth: s.depth,
                    moments: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Mesh::from_strata(self.dim, strata)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mesh dump serializes")
    }
}
