//! Resource witnesses: geometric (supporting hyperplane at the closest
//! classical state), PPT-based for two-qubit entanglement, or user-supplied.
//! Witnesses are extended with an ancilla qubit and rescaled so every
//! eigenvalue magnitude lies in (0, 1/4].

use crate::error::{QkdError, Result};
use crate::qcore::{eig_hermitian, tensor, CMatrix, DensityMatrix, Ket};
use crate::resources::{closest_classical, partial_transpose, ClassicalSetModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSource {
    Geometric,
    Ppt,
    User,
}

impl std::fmt::Display for WitnessSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessSource::Geometric => write!(f, "geometric"),
            WitnessSource::Ppt => write!(f, "ppt"),
            WitnessSource::User => write!(f, "user"),
        }
    }
}

/// Hermitian operator with Tr[Wρ] < 0 on the target state and
/// Tr[Wσ] ≥ 0 on the classical set.
#[derive(Debug, Clone)]
pub struct Witness {
    w: CMatrix,
    source: WitnessSource,
    model: Option<ClassicalSetModel>,
}

impl Witness {
    pub fn user(w: CMatrix) -> Result<Self> {
        let defect = w.hermiticity_defect();
        if defect > 1e-9 {
            return Err(QkdError::validation("hermiticity", defect));
        }
        Ok(Witness {
            w,
            source: WitnessSource::User,
            model: None,
        })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.w
    }

    pub fn source(&self) -> WitnessSource {
        self.source
    }

    pub fn model(&self) -> Option<&ClassicalSetModel> {
        self.model.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        self.w.matmul(rho.mat()).trace().re
    }
}

/// W scaled and embedded as s·(W ⊗ |0⟩⟨0|) on the extended space.
#[derive(Debug, Clone)]
pub struct ExtendedWitness {
    wprime: CMatrix,
    scale: f64,
    base: Witness,
}

impl ExtendedWitness {
    pub fn wprime(&self) -> &CMatrix {
        &self.wprime
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn base(&self) -> &Witness {
        &self.base
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn dim(&self) -> usize {
        self.wprime.dim()
    }

    /// Spectrum of s·W with eigenvectors, kernel filtered out.
    /// Every returned magnitude lies in (0, 1/4] by construction.
    pub fn scaled_spectrum(&self) -> Result<Vec<(f64, Ket)>> {
        let scaled = self.base.w.scale_re(self.scale);
        let (vals, vecs) = eig_hermitian(&scaled)?;
        Ok(vals
            .into_iter()
            .zip(vecs)
            .filter(|(lam, _)| lam.abs() > 1e-12)
            .collect())
    }
}

/// Corollary-1 witness W = (σ₀ − ρ − Tr[σ₀(σ₀−ρ)]𝟙)/‖ρ − σ₀‖_F.
pub fn geometric_witness(rho: &DensityMatrix, model: &ClassicalSetModel) -> Result<Witness> {
    let (sigma0, dist) = closest_classical(rho, model)?;
    if dist <= 1e-9 {
        return Err(QkdError::DegenerateInput(format!(
            "state is classical (distance {:.3e}): geometric witness undefined",
            dist
        )));
    }
    let diff = sigma0.mat().sub(rho.mat());
    let offset = sigma0.mat().matmul(&diff).trace().re;
    let id = CMatrix::identity(rho.dim());
    let w = diff.sub(&id.scale_re(offset)).scale_re(1.0 / dist);
    Ok(Witness {
        w,
        source: WitnessSource::Geometric,
        model: Some(model.clone()),
    })
}

/// Entanglement witness W = (|η⟩⟨η|)^Γ from the most-negative eigenvector η
/// of the partial transpose.
pub fn ppt_entanglement_witness(rho: &DensityMatrix) -> Result<Witness> {
    let pt = partial_transpose(rho.mat())?;
    let (vals, vecs) = eig_hermitian(&pt)?;
    if vals[0] >= -1e-9 {
        return Err(QkdError::NotDetected(format!(
            "state is PPT (minimum partial-transpose eigenvalue {:.3e})",
            vals[0]
        )));
    }
    let w = partial_transpose(&vecs[0].outer())?;
    Ok(Witness {
        w,
        source: WitnessSource::Ppt,
        model: Some(ClassicalSetModel::SeparableTwoQubitSampled),
    })
}

/// Embed W as s·(W ⊗ |0⟩⟨0|) with s = min(1, 1/(4·λ_max)).
pub fn extend_and_scale(witness: &Witness) -> Result<ExtendedWitness> {
    let (vals, _) = eig_hermitian(&witness.w)?;
    let lambda_max = vals.iter().map(|l| l.abs()).fold(0.0, f64::max);
    if lambda_max < 1e-12 {
        return Err(QkdError::DegenerateInput("zero witness".into()));
    }
    let scale = (1.0 / (4.0 * lambda_max)).min(1.0);
    let zero = Ket::basis(2, 0).outer();
    let wprime = tensor(&witness.w.scale_re(scale), &zero)?;
    Ok(ExtendedWitness {
        wprime,
        scale,
        base: witness.clone(),
    })
}
