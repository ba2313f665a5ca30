use num_complex::Complex64;

use crate::error::{QkdError, Result};
use crate::qcore::eig::eig_hermitian;
use crate::qcore::matrix::{CMatrix, Ket};

const VALIDATION_TOL: f64 = 1e-9;

/// Validated Hermitian, PSD, trace-one operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let defect = mat.hermiticity_defect();
        if defect > VALIDATION_TOL {
            return Err(QkdError::validation("hermiticity", defect));
        }
        let trace_defect = (mat.trace().re - 1.0).abs().max(mat.trace().im.abs());
        if trace_defect > VALIDATION_TOL {
            return Err(QkdError::validation("trace", trace_defect));
        }
        let (vals, _) = eig_hermitian(&mat)?;
        if let Some(&min) = vals.first() {
            if min < -VALIDATION_TOL {
                return Err(QkdError::validation("positivity", min.abs()));
            }
        }
        Ok(DensityMatrix { mat })
    }

    pub fn pure(psi: &Ket) -> Self {
        DensityMatrix { mat: psi.outer() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: CMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    /// ρ ⊗ |0⟩⟨0| on the ancilla-extended space.
    pub fn extend_with_ancilla(&self) -> Result<DensityMatrix> {
        let zero = Ket::basis(2, 0).outer();
        let mat = super::matrix::tensor(&self.mat, &zero)?;
        Ok(DensityMatrix { mat })
    }
}

/// Validated Hermitian idempotent operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    mat: CMatrix,
    rank: usize,
}

impl Projector {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let defect = mat.hermiticity_defect();
        if defect > VALIDATION_TOL {
            return Err(QkdError::validation("hermiticity", defect));
        }
        let idem = mat.matmul(&mat).sub(&mat).frobenius_norm();
        if idem > VALIDATION_TOL {
            return Err(QkdError::validation("idempotence", idem));
        }
        let rank = mat.trace().re.round();
        if rank < 0.0 {
            return Err(QkdError::validation("rank", rank));
        }
        Ok(Projector {
            mat,
            rank: rank as usize,
        })
    }

    pub fn onto(psi: &Ket) -> Self {
        Projector {
            mat: psi.outer(),
            rank: 1,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projector {
            mat: CMatrix::identity(dim),
            rank: dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    /// 𝟙 − Π
    pub fn complement(&self) -> Projector {
        Projector {
            mat: CMatrix::identity(self.dim()).sub(&self.mat),
            rank: self.dim() - self.rank,
        }
    }

    pub fn idempotence_defect(&self) -> f64 {
        self.mat.matmul(&self.mat).sub(&self.mat).frobenius_norm()
    }
}

/// cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩
pub fn bloch_state(theta: f64, phi: f64) -> Ket {
    let half = theta / 2.0;
    let amplitudes = vec![
        Complex64::new(half.cos(), 0.0),
        Complex64::from_polar(half.sin(), phi),
    ];
    Ket::normalized(amplitudes).expect("bloch state is normalized")
}

/// Tetrahedral SIC projectors anchored at |0⟩, azimuths 0, 2π/3, 4π/3.
pub fn sic_qubit() -> Vec<Projector> {
    let tilt = (-1.0f64 / 3.0).acos();
    let mut out = vec![Projector::onto(&bloch_state(0.0, 0.0))];
    for k in 0..3 {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        out.push(Projector::onto(&bloch_state(tilt, phi)));
    }
    out
}

/// Zero the off-diagonal entries of ρ in the given orthonormal basis.
pub fn dephase(rho: &DensityMatrix, basis: &[Ket]) -> Result<DensityMatrix> {
    let dim = rho.dim();
    check_orthonormal_basis(basis, dim)?;
    let mut acc = CMatrix::zeros(dim);
    for b in basis {
        let proj = b.outer();
        let weight = proj.matmul(rho.mat()).trace();
        acc = acc.add(&proj.scale(weight));
    }
    DensityMatrix::new(acc)
}

pub fn check_orthonormal_basis(basis: &[Ket], dim: usize) -> Result<()> {
    if basis.len() != dim {
        return Err(QkdError::Dimension(format!(
            "basis size {} does not span dimension {}",
            basis.len(),
            dim
        )));
    }
    let mut completeness = CMatrix::zeros(dim);
    for b in basis {
        if b.dim() != dim {
            return Err(QkdError::Dimension("basis ket dimension mismatch".into()));
        }
        completeness = completeness.add(&b.outer());
    }
    let defect = completeness.sub(&CMatrix::identity(dim)).frobenius_norm();
    if defect > VALIDATION_TOL {
        return Err(QkdError::validation("basis completeness", defect));
    }
    Ok(())
}

pub fn computational_basis(dim: usize) -> Vec<Ket> {
    (0..dim).map(|i| Ket::basis(dim, i)).collect()
}
