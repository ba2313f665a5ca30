//! Pipeline orchestration and structured-text report emission.

use std::fmt::Write as _;

use crate::chain::{assemble_chain, verify_chain};
use crate::error::Result;
use crate::qcore::{eig_hermitian, frobenius_distance, DensityMatrix};
use crate::quasiprob::{
    evaluate_distribution, reconstruct_state, sic_marginals_of, total_negativity,
    QuasiDistribution,
};
use crate::resources::ClassicalSetModel;
use crate::weakval::{conical_decomposition, detect_anomalous, Decomposition, TermKind};
use crate::witness::{
    extend_and_scale, geometric_witness, ppt_entanglement_witness, Witness, WitnessSource,
};

/// Everything the CLI prints about one pipeline run.
#[derive(Debug)]
pub struct AnalysisReport {
    pub input_digest: String,
    pub input_dim: usize,
    pub model: String,
    pub witness_source: WitnessSource,
    pub witness_spectrum: Vec<f64>,
    pub scale: f64,
    pub chain_slots: usize,
    pub chain_residual: f64,
    pub witness_event: f64,
    pub total_negativity: f64,
    pub distance_estimate: f64,
    pub p_param: f64,
    pub decomposition: Decomposition,
    pub anomaly_flags: Vec<bool>,
    pub min_weak_re: f64,
    pub tomography_error: Option<f64>,
    pub distribution: QuasiDistribution,
}

/// FNV-1a over the bit patterns of the matrix entries.
pub fn digest(rho: &DensityMatrix) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut mix = |x: f64| {
        for b in x.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for z in rho.mat().entries() {
        mix(z.re);
        mix(z.im);
    }
    format!("{:016x}", h)
}

/// Run witness → chain → distribution → weak values for a state and witness.
pub fn analyze_with_witness(
    rho: &DensityMatrix,
    witness: &Witness,
    model_name: &str,
    p: f64,
    tol: f64,
    with_tomography: bool,
) -> Result<AnalysisReport> {
    let ew = extend_and_scale(witness)?;
    let chain = assemble_chain(&ew)?;
    let verification = verify_chain(&chain, &ew)?;
    let rho_ext = rho.extend_with_ancilla()?;
    let dist = evaluate_distribution(&chain, &rho_ext)?;
    let witness_event = dist.all_zeros();
    let negativity = total_negativity(&dist);
    let decomposition = conical_decomposition(&ew, rho, p)?;
    let anomaly = detect_anomalous(&decomposition.terms, tol);
    let (vals, _) = eig_hermitian(witness.mat())?;

    let tomography_error = if with_tomography && rho.dim() == 2 {
        let back = reconstruct_state(&sic_marginals_of(rho)?)?;
        Some(frobenius_distance(back.mat(), rho.mat())?)
    } else {
        None
    };

    Ok(AnalysisReport {
        input_digest: digest(rho),
        input_dim: rho.dim(),
        model: model_name.to_string(),
        witness_source: witness.source(),
        witness_spectrum: vals,
        scale: ew.scale(),
        chain_slots: chain.len(),
        chain_residual: verification.residual,
        witness_event,
        total_negativity: negativity,
        distance_estimate: -witness_event / ew.scale(),
        p_param: p,
        decomposition,
        anomaly_flags: anomaly.flags,
        min_weak_re: anomaly.min_re,
        tomography_error,
        distribution: dist,
    })
}

/// Analyze under a classical-set model, picking the witness source from the
/// model kind.
pub fn analyze(
    rho: &DensityMatrix,
    model: &ClassicalSetModel,
    p: f64,
    tol: f64,
    with_tomography: bool,
) -> Result<AnalysisReport> {
    let witness = match model {
        ClassicalSetModel::SeparableTwoQubitSampled => ppt_entanglement_witness(rho)?,
        _ => geometric_witness(rho, model)?,
    };
    analyze_with_witness(rho, &witness, model.name(), p, tol, with_tomography)
}

impl AnalysisReport {
    /// Structured text with a stable key order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "input.digest: {}", self.input_digest);
        let _ = writeln!(out, "input.dim: {}", self.input_dim);
        let _ = writeln!(out, "model: {}", self.model);
        let _ = writeln!(out, "witness.source: {}", self.witness_source);
        let spectrum = self
            .witness_spectrum
            .iter()
            .map(|l| format!("{:.12}", l))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(out, "witness.spectrum: [{}]", spectrum);
        let _ = writeln!(out, "witness.scale: {:.12}", self.scale);
        let _ = writeln!(out, "chain.slots: {}", self.chain_slots);
        let _ = writeln!(out, "chain.residual: {:.3e}", self.chain_residual);
        let _ = writeln!(out, "distribution.witness_event: {:.12}", self.witness_event);
        let _ = writeln!(
            out,
            "distribution.total_negativity: {:.12}",
            self.total_negativity
        );
        let _ = writeln!(
            out,
            "distribution.distance_estimate: {:.12}",
            self.distance_estimate
        );
        let _ = writeln!(out, "weakvalues.p: {}", self.p_param);
        let _ = writeln!(
            out,
            "weakvalues.partial: {}",
            if self.decomposition.partial { "yes" } else { "no" }
        );
        for (i, (term, anomalous)) in self
            .decomposition
            .terms
            .iter()
            .zip(&self.anomaly_flags)
            .enumerate()
        {
            let kind = match term.kind {
                TermKind::PositiveEigenvalue => "+",
                TermKind::NegativeEigenvalue => "-",
            };
            let value = match term.value {
                Some(v) => format!("{:.12}{:+.12}i", v.re, v.im),
                None => "undefined".to_string(),
            };
            let _ = writeln!(
                out,
                "weakvalues.term[{}]: kind={} coeff={:.12} value={} anomalous={}",
                i, kind, term.coefficient, value, anomalous
            );
        }
        let _ = writeln!(out, "weakvalues.min_re: {:.12}", self.min_weak_re);
        match self.tomography_error {
            Some(e) => {
                let _ = writeln!(out, "tomography.round_trip_error: {:.3e}", e);
            }
            None => {
                let _ = writeln!(out, "tomography.round_trip_error: n/a");
            }
        }
        out
    }
}
