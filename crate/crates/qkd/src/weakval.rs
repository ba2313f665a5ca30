//! Weak values, the conical decomposition of the extended witness
//! expectation, and anomalous-weak-value detection.

use num_complex::Complex64;

use crate::error::{QkdError, Result};
use crate::qcore::{CMatrix, DensityMatrix, Ket, Projector};
use crate::witness::ExtendedWitness;

const POST_SELECTION_FLOOR: f64 = 1e-12;

/// Post-selected expectation Tr[π₁ A ρ]/Tr[π₁ ρ].
pub fn weak_value(pre: &Projector, obs: &CMatrix, rho_ext: &DensityMatrix) -> Result<Complex64> {
    let denom = pre.mat().matmul(rho_ext.mat()).trace().re;
    if denom <= POST_SELECTION_FLOOR {
        return Err(QkdError::UndefinedWeakValue(denom));
    }
    let numer = pre.mat().matmul(obs).matmul(rho_ext.mat()).trace();
    Ok(numer / denom)
}

/// Which spectral part of the witness a term comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    PositiveEigenvalue,
    NegativeEigenvalue,
}

/// One term k(j)·⟨(π₂(j))_w⟩^{π₁(j)} of the conical combination.
#[derive(Debug, Clone)]
pub struct WeakValueTerm {
    pub kind: TermKind,
    /// Conical coefficient k(j) ≥ 0.
    pub coefficient: f64,
    pub pre_selection: Projector,
    pub observable: Projector,
    /// None when the post-selection probability vanishes.
    pub value: Option<Complex64>,
    pub p_param: f64,
}

impl WeakValueTerm {
    pub fn is_defined(&self) -> bool {
        self.value.is_some()
    }
}

/// The full decomposition Σ_j k(j)·⟨(π₂(j))_w⟩ = Tr[wprime·ρ⊗|0⟩⟨0|].
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub terms: Vec<WeakValueTerm>,
    pub p_param: f64,
    /// True when at least one term is undefined (vanishing post-selection
    /// probability). Undefined terms carry coefficient zero, so the weighted
    /// sum still reproduces the witness expectation.
    pub partial: bool,
}

impl Decomposition {
    /// Σ_j k(j)·Re(value_j) over the defined terms.
    pub fn weighted_sum(&self) -> f64 {
        self.terms
            .iter()
            .filter_map(|t| t.value.map(|v| t.coefficient * v.re))
            .sum()
    }
}

/// ⟨0|ψ₁⟩⟨ψ₁|ψ₂⟩⟨ψ₂|0⟩ evaluated from the kets; equals
/// (1 − p − √(p(1−p)))/2 for admissible p.
pub fn projector_sandwich_coefficient(p: f64) -> f64 {
    let zero = Ket::basis(2, 0);
    let psi1 = ancilla_psi1();
    let psi2 = ancilla_psi2(p);
    (zero.inner(&psi1) * psi1.inner(&psi2) * psi2.inner(&zero)).re
}

/// Normalization c = 2/(√(p(1−p)) − 1 + p) with c·sandwich = −1.
pub fn negative_term_normalization(p: f64) -> f64 {
    2.0 / ((p * (1.0 - p)).sqrt() - 1.0 + p)
}

fn ancilla_psi1() -> Ket {
    let s = 1.0 / 2f64.sqrt();
    Ket::new(vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]).expect("normalized")
}

fn ancilla_psi2(p: f64) -> Ket {
    Ket::new(vec![
        Complex64::new((1.0 - p).sqrt(), 0.0),
        Complex64::new(p.sqrt(), 0.0),
    ])
    .expect("normalized")
}

/// Decompose the extended-witness expectation into a conical combination of
/// weak values. Positive eigenvalues give eigenstate terms with weak value 1;
/// negative eigenvalues give the anomalous candidates.
pub fn conical_decomposition(
    ew: &ExtendedWitness,
    rho: &DensityMatrix,
    p: f64,
) -> Result<Decomposition> {
    if !(0.5..1.0).contains(&p) || p == 0.5 {
        return Err(QkdError::Dimension(format!(
            "mixing parameter p = {} outside (1/2, 1)",
            p
        )));
    }
    if rho.dim() != ew.base_dim() {
        return Err(QkdError::Dimension(format!(
            "state dimension {} does not match witness dimension {}",
            rho.dim(),
            ew.base_dim()
        )));
    }
    let rho_ext = rho.extend_with_ancilla()?;
    let ancilla_zero = Ket::basis(2, 0);
    let c = negative_term_normalization(p);
    let mut terms = Vec::new();
    let mut partial = false;
    for (lam, k) in ew.scaled_spectrum()? {
        let occupation = k.outer().matmul(rho.mat()).trace().re;
        if lam > 0.0 {
            let k0 = k.tensor(&ancilla_zero)?;
            let proj = Projector::onto(&k0);
            let value = match weak_value(&proj, proj.mat(), &rho_ext) {
                Ok(v) => Some(v),
                Err(QkdError::UndefinedWeakValue(_)) => {
                    partial = true;
                    None
                }
                Err(e) => return Err(e),
            };
            terms.push(WeakValueTerm {
                kind: TermKind::PositiveEigenvalue,
                coefficient: lam * occupation.max(0.0),
                pre_selection: proj.clone(),
                observable: proj,
                value,
                p_param: p,
            });
        } else {
            let b = -lam;
            let pre = Projector::onto(&k.tensor(&ancilla_psi1())?);
            let obs = Projector::onto(&k.tensor(&ancilla_psi2(p))?);
            let post_prob = pre.mat().matmul(rho_ext.mat()).trace().re;
            let value = match weak_value(&pre, obs.mat(), &rho_ext) {
                Ok(v) => Some(v),
                Err(QkdError::UndefinedWeakValue(_)) => {
                    partial = true;
                    None
                }
                Err(e) => return Err(e),
            };
            terms.push(WeakValueTerm {
                kind: TermKind::NegativeEigenvalue,
                coefficient: b * c * post_prob.max(0.0),
                pre_selection: pre,
                observable: obs,
                value,
                p_param: p,
            });
        }
    }
    Ok(Decomposition {
        terms,
        p_param: p,
        partial,
    })
}

/// Anomaly flags for projector weak values: Re outside [0, 1] by more
/// than tol.
#[derive(Debug, Clone)]
pub struct AnomalyReport {
    pub flags: Vec<bool>,
    pub min_re: f64,
}

impl AnomalyReport {
    pub fn any(&self) -> bool {
        self.flags.iter().any(|f| *f)
    }
}

pub fn detect_anomalous(terms: &[WeakValueTerm], tol: f64) -> AnomalyReport {
    let mut flags = Vec::with_capacity(terms.len());
    let mut min_re = f64::INFINITY;
    for term in terms {
        match term.value {
            Some(v) => {
                min_re = min_re.min(v.re);
                flags.push(v.re < -tol || v.re > 1.0 + tol);
            }
            None => flags.push(false),
        }
    }
    if !min_re.is_finite() {
        min_re = 0.0;
    }
    AnomalyReport { flags, min_re }
}
