//! State-file ingestion: JSON with a row-major `matrix` of [re, im] pairs.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QkdError, Result};
use crate::qcore::{CMatrix, DensityMatrix};

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let dim = rho.dim();
        let matrix = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let z = rho.mat()[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        StateFile {
            dim: Some(dim),
            matrix,
        }
    }
}

/// Parse and validate a density matrix from a JSON state file.
pub fn parse_state_file(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QkdError::Parse(format!("{}: {}", path.display(), e)))?;
    parse_state_str(&text)
}

pub fn parse_state_str(text: &str) -> Result<DensityMatrix> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| QkdError::Parse(e.to_string()))?;
    let dim = file.matrix.len();
    if let Some(declared) = file.dim {
        if declared != dim {
            return Err(QkdError::Parse(format!(
                "declared dim {} does not match matrix rows {}",
                declared, dim
            )));
        }
    }
    let rows: Vec<Vec<Complex64>> = file
        .matrix
        .iter()
        .map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    let mat = CMatrix::from_rows(&rows)?;
    DensityMatrix::new(mat)
}
