//! Kirkwood-Dirac type quasiprobability distributions over projector chains:
//! evaluation, negativity, marginals, the informationally complete
//! distribution, and SIC linear-inversion tomography.

use num_complex::Complex64;

use crate::chain::ProjectorChain;
use crate::error::{QkdError, Result};
use crate::qcore::{eig_hermitian, sic_qubit, tensor, CMatrix, DensityMatrix, Projector};
use crate::resources::ClassicalSetModel;
use crate::witness::{extend_and_scale, geometric_witness, Witness};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest enumerable slot count (2^L outcomes).
pub const MAX_SLOTS: usize = 20;

/// Real-valued quasiprobability over L-bit outcome strings.
///
/// Outcome index encodes the string MSB-first: bit of slot 0 is the most
/// significant. Values follow the Margenau-Hill real-part convention.
#[derive(Debug, Clone)]
pub struct QuasiDistribution {
    num_slots: usize,
    values: Vec<f64>,
    scale: f64,
    labels: Vec<String>,
}

impl QuasiDistribution {
    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn outcome_string(&self, index: usize) -> String {
        index_to_bits(index, self.num_slots)
    }

    pub fn value(&self, bits: &str) -> Option<f64> {
        bits_to_index(bits, self.num_slots).map(|i| self.values[i])
    }

    /// Quasiprobability of the all-zeros event.
    pub fn all_zeros(&self) -> f64 {
        self.values[0]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// CSV export: header `outcome,value`, 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "outcome,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{:.16e}", self.outcome_string(i), v)?;
        }
        Ok(())
    }
}

fn index_to_bits(index: usize, len: usize) -> String {
    (0..len)
        .map(|slot| {
            if index >> (len - 1 - slot) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

fn bits_to_index(bits: &str, len: usize) -> Option<usize> {
    if bits.len() != len {
        return None;
    }
    let mut index = 0usize;
    for c in bits.chars() {
        index <<= 1;
        match c {
            '0' => {}
            '1' => index |= 1,
            _ => return None,
        }
    }
    Some(index)
}

fn outcome_value(slots: &[Projector], rho_ext: &CMatrix, index: usize) -> f64 {
    let len = slots.len();
    let mut acc: Option<CMatrix> = None;
    for (slot, p) in slots.iter().enumerate() {
        let bit = index >> (len - 1 - slot) & 1;
        let factor = if bit == 0 {
            p.mat().clone()
        } else {
            p.complement().mat().clone()
        };
        acc = Some(match acc {
            None => factor,
            Some(m) => m.matmul(&factor),
        });
    }
    let product = acc.expect("at least one slot");
    product.matmul(rho_ext).trace().re
}

fn evaluate_values_seq(slots: &[Projector], rho_ext: &CMatrix) -> Vec<f64> {
    let total = 1usize << slots.len();
    (0..total).map(|i| outcome_value(slots, rho_ext, i)).collect()
}

#[cfg(feature = "parallel")]
fn evaluate_values(slots: &[Projector], rho_ext: &CMatrix) -> Vec<f64> {
    let total = 1usize << slots.len();
    (0..total)
        .into_par_iter()
        .map(|i| outcome_value(slots, rho_ext, i))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_values(slots: &[Projector], rho_ext: &CMatrix) -> Vec<f64> {
    evaluate_values_seq(slots, rho_ext)
}

fn evaluate_slots(
    slots: &[Projector],
    labels: Vec<String>,
    rho_ext: &DensityMatrix,
    scale: f64,
    sequential: bool,
) -> Result<QuasiDistribution> {
    if slots.is_empty() || slots.len() > MAX_SLOTS {
        return Err(QkdError::Dimension(format!(
            "slot count {} outside 1..={}",
            slots.len(),
            MAX_SLOTS
        )));
    }
    for p in slots {
        if p.dim() != rho_ext.dim() {
            return Err(QkdError::Dimension(format!(
                "slot dimension {} does not match state dimension {}",
                p.dim(),
                rho_ext.dim()
            )));
        }
    }
    let values = if sequential {
        evaluate_values_seq(slots, rho_ext.mat())
    } else {
        evaluate_values(slots, rho_ext.mat())
    };
    Ok(QuasiDistribution {
        num_slots: slots.len(),
        values,
        scale,
        labels,
    })
}

/// Evaluate the distribution of a projector chain on an extended state.
pub fn evaluate_distribution(
    chain: &ProjectorChain,
    rho_ext: &DensityMatrix,
) -> Result<QuasiDistribution> {
    evaluate_slots(
        chain.projectors(),
        chain.labels(),
        rho_ext,
        chain.scale(),
        false,
    )
}

/// Sequential evaluation path, kept callable for benchmarking.
pub fn evaluate_distribution_seq(
    chain: &ProjectorChain,
    rho_ext: &DensityMatrix,
) -> Result<QuasiDistribution> {
    evaluate_slots(
        chain.projectors(),
        chain.labels(),
        rho_ext,
        chain.scale(),
        true,
    )
}

/// Σ |min(P, 0)| over all outcomes.
pub fn total_negativity(dist: &QuasiDistribution) -> f64 {
    dist.values().iter().filter(|v| **v < 0.0).map(|v| -v).sum()
}

/// Sum over all outcome strings consistent with the partial assignment.
pub fn marginal(dist: &QuasiDistribution, assignment: &[(usize, u8)]) -> Result<f64> {
    let len = dist.num_slots();
    for (slot, bit) in assignment {
        if *slot >= len || *bit > 1 {
            return Err(QkdError::Dimension(format!(
                "invalid assignment slot {} bit {}",
                slot, bit
            )));
        }
    }
    let mut sum = 0.0;
    for (index, v) in dist.values().iter().enumerate() {
        let consistent = assignment
            .iter()
            .all(|(slot, bit)| (index >> (len - 1 - slot) & 1) as u8 == *bit);
        if consistent {
            sum += v;
        }
    }
    Ok(sum)
}

/// The Theorem-3 aggregation: SIC marginals, the witness event, and the
/// remainder outcome.
#[derive(Debug, Clone)]
pub struct InfoCompleteDistribution {
    /// Aggregated values P(y = 0), …, P(y = d+2); d = 3 for a qubit.
    pub py: Vec<f64>,
    /// The informationally complete marginals Tr[Q_k ρ].
    pub sic_marginals: Vec<f64>,
    /// P(y = d+1): negative only for resourceful ρ.
    pub witness_event: f64,
    /// Witness scale s carried from the extension.
    pub scale: f64,
    /// The full underlying 2^9-outcome distribution.
    pub distribution: QuasiDistribution,
}

/// Build the informationally complete distribution with the geometric witness.
pub fn infocomplete_distribution(
    rho: &DensityMatrix,
    model: &ClassicalSetModel,
) -> Result<InfoCompleteDistribution> {
    let witness = geometric_witness(rho, model)?;
    infocomplete_with_witness(rho, &witness)
}

/// Same aggregation with a caller-supplied witness (reference witness for
/// classical inputs).
pub fn infocomplete_with_witness(
    rho: &DensityMatrix,
    witness: &Witness,
) -> Result<InfoCompleteDistribution> {
    if rho.dim() != 2 || witness.dim() != 2 {
        return Err(QkdError::Dimension(
            "informationally complete distribution is implemented for qubits".into(),
        ));
    }
    let ew = extend_and_scale(witness)?;
    let chain = crate::chain::assemble_chain(&ew)?;
    let ancilla_id = CMatrix::identity(2);
    let mut slots: Vec<Projector> = Vec::with_capacity(9);
    let mut labels: Vec<String> = Vec::with_capacity(9);
    for (k, q) in sic_qubit().iter().enumerate() {
        slots.push(Projector::new(tensor(q.mat(), &ancilla_id)?)?);
        labels.push(format!("Q{}", k));
    }
    slots.extend_from_slice(chain.projectors());
    labels.extend(chain.labels());
    let rho_ext = rho.extend_with_ancilla()?;
    let dist = evaluate_slots(&slots, labels, &rho_ext, ew.scale(), false)?;

    let d = 3usize;
    let mut py = Vec::with_capacity(d + 3);
    let mut sic_marginals = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let m = marginal(&dist, &[(k, 0)])?;
        sic_marginals.push(m);
        py.push(m);
    }
    let witness_assignment: Vec<(usize, u8)> = (d + 1..d + 6).map(|slot| (slot, 0)).collect();
    let witness_event = marginal(&dist, &witness_assignment)?;
    py.push(witness_event);
    let partial: f64 = py.iter().sum();
    py.push(1.0 - partial);

    Ok(InfoCompleteDistribution {
        py,
        sic_marginals,
        witness_event,
        scale: ew.scale(),
        distribution: dist,
    })
}

/// Tetrahedron Bloch directions matching [`sic_qubit`].
fn sic_directions() -> [[f64; 3]; 4] {
    let cos_t = -1.0 / 3.0;
    let sin_t = (8.0f64).sqrt() / 3.0;
    let mut dirs = [[0.0, 0.0, 1.0]; 4];
    for (k, dir) in dirs.iter_mut().enumerate().skip(1) {
        let phi = 2.0 * std::f64::consts::PI * (k - 1) as f64 / 3.0;
        *dir = [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
    }
    dirs
}

/// Linear inversion of the four SIC marginals Tr[Q_k ρ] back to a state.
pub fn reconstruct_state(marginals: &[f64]) -> Result<DensityMatrix> {
    if marginals.len() != 4 {
        return Err(QkdError::Reconstruction(format!(
            "expected 4 marginals, got {}",
            marginals.len()
        )));
    }
    let dirs = sic_directions();
    // Tr[Q_k ρ] = (Tr ρ + n_k·r)/2 and Σ_k n_k n_kᵀ = (4/3)·𝟙
    let trace: f64 = marginals.iter().sum::<f64>() / 2.0;
    let mut r = [0.0f64; 3];
    for (m, n) in marginals.iter().zip(&dirs) {
        let residue = 2.0 * m - trace;
        for (ri, ni) in r.iter_mut().zip(n) {
            *ri += 0.75 * residue * ni;
        }
    }
    let mut mat = CMatrix::zeros(2);
    mat[(0, 0)] = Complex64::new((trace + r[2]) / 2.0, 0.0);
    mat[(1, 1)] = Complex64::new((trace - r[2]) / 2.0, 0.0);
    mat[(0, 1)] = Complex64::new(r[0] / 2.0, -r[1] / 2.0);
    mat[(1, 0)] = Complex64::new(r[0] / 2.0, r[1] / 2.0);

    if (trace - 1.0).abs() > 1e-6 {
        return Err(QkdError::Reconstruction(format!(
            "marginals imply trace {:.6}, not a state",
            trace
        )));
    }
    let (vals, vecs) = eig_hermitian(&mat)?;
    if vals[0] < -1e-6 {
        return Err(QkdError::Reconstruction(format!(
            "reconstruction not PSD (minimum eigenvalue {:.3e})",
            vals[0]
        )));
    }
    match DensityMatrix::new(mat) {
        Ok(rho) => Ok(rho),
        Err(_) => {
            // clip slightly negative eigenvalues and renormalize
            let mut acc = CMatrix::zeros(2);
            let clipped: Vec<f64> = vals.iter().map(|l| l.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            if total < 1e-12 {
                return Err(QkdError::Reconstruction("zero reconstruction".into()));
            }
            for (lam, k) in clipped.iter().zip(&vecs) {
                acc = acc.add(&k.outer().scale_re(lam / total));
            }
            DensityMatrix::new(acc)
                .map_err(|e| QkdError::Reconstruction(format!("invalid reconstruction: {}", e)))
        }
    }
}

/// SIC marginals Tr[Q_k ρ] computed directly; the tomography forward map.
pub fn sic_marginals_of(rho: &DensityMatrix) -> Result<Vec<f64>> {
    if rho.dim() != 2 {
        return Err(QkdError::Dimension(
            "SIC marginals are implemented for qubits".into(),
        ));
    }
    Ok(sic_qubit()
        .iter()
        .map(|q| q.mat().matmul(rho.mat()).trace().re)
        .collect())
}
