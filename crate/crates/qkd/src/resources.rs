//! Classical-state set models: membership tests, closest-classical-state
//! solvers, and seeded samplers.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{QkdError, Result};
use crate::qcore::{
    computational_basis, dephase, eig_hermitian, frobenius_distance, CMatrix, DensityMatrix, Ket,
};

/// A concrete model of the classical set C.
#[derive(Debug, Clone)]
pub enum ClassicalSetModel {
    /// Qubit states on the z-axis of the Bloch sphere.
    QubitZAxis,
    /// States diagonal in the given orthonormal basis.
    Incoherent(Vec<Ket>),
    /// Two-qubit separable states; membership via the exact PPT criterion,
    /// no closest-state solver.
    SeparableTwoQubitSampled,
}

impl ClassicalSetModel {
    pub fn incoherent_computational(dim: usize) -> Self {
        ClassicalSetModel::Incoherent(computational_basis(dim))
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            ClassicalSetModel::QubitZAxis => Some(2),
            ClassicalSetModel::Incoherent(basis) => Some(basis.len()),
            ClassicalSetModel::SeparableTwoQubitSampled => Some(4),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassicalSetModel::QubitZAxis => "qubit-z-axis",
            ClassicalSetModel::Incoherent(_) => "incoherent",
            ClassicalSetModel::SeparableTwoQubitSampled => "separable-2qubit-sampled",
        }
    }

    fn check_dim(&self, rho: &DensityMatrix) -> Result<()> {
        if let Some(d) = self.dim() {
            if rho.dim() != d {
                return Err(QkdError::Dimension(format!(
                    "state dimension {} does not match model {} (dimension {})",
                    rho.dim(),
                    self.name(),
                    d
                )));
            }
        }
        Ok(())
    }
}

/// Closest state in C under the Frobenius norm, with the distance.
///
/// Both analytic models project entrywise: the dephased state is optimal and
/// the distance is the norm of the discarded off-diagonal part.
pub fn closest_classical(
    rho: &DensityMatrix,
    model: &ClassicalSetModel,
) -> Result<(DensityMatrix, f64)> {
    model.check_dim(rho)?;
    let basis = match model {
        ClassicalSetModel::QubitZAxis => computational_basis(2),
        ClassicalSetModel::Incoherent(basis) => basis.clone(),
        ClassicalSetModel::SeparableTwoQubitSampled => {
            return Err(QkdError::UnsupportedModel(
                "no exact closest-separable-state solver; use the PPT witness path".into(),
            ))
        }
    };
    let sigma0 = dephase(rho, &basis)?;
    let dist = frobenius_distance(rho.mat(), sigma0.mat())?;
    Ok((sigma0, dist))
}

/// Decision form of ρ ∈ C.
pub fn is_classical(rho: &DensityMatrix, model: &ClassicalSetModel, tol: f64) -> Result<bool> {
    model.check_dim(rho)?;
    match model {
        ClassicalSetModel::SeparableTwoQubitSampled => {
            let (vals, _) = eig_hermitian(&partial_transpose(rho.mat())?)?;
            Ok(vals[0] >= -tol)
        }
        _ => {
            let (_, dist) = closest_classical(rho, model)?;
            Ok(dist <= tol)
        }
    }
}

/// Partial transpose over the second qubit of a two-qubit operator.
pub fn partial_transpose(m: &CMatrix) -> Result<CMatrix> {
    if m.dim() != 4 {
        return Err(QkdError::Dimension(format!(
            "partial transpose expects dimension 4, got {}",
            m.dim()
        )));
    }
    let mut out = CMatrix::zeros(4);
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    out[(2 * i1 + i2, 2 * j1 + j2)] = m[(2 * i1 + j2, 2 * j1 + i2)];
                }
            }
        }
    }
    Ok(out)
}

/// Draw n states from the model; deterministic for a fixed seed.
pub fn sample_classical(
    model: &ClassicalSetModel,
    n: usize,
    seed: u64,
) -> Result<Vec<DensityMatrix>> {
    if n == 0 {
        return Err(QkdError::Dimension("sample count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(sample_one(model, &mut rng)?);
    }
    Ok(out)
}

fn sample_one(model: &ClassicalSetModel, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    match model {
        ClassicalSetModel::QubitZAxis => {
            let r: f64 = rng.random_range(-1.0..=1.0);
            let mat = CMatrix::from_real_rows(&[
                vec![(1.0 + r) / 2.0, 0.0],
                vec![0.0, (1.0 - r) / 2.0],
            ])?;
            DensityMatrix::new(mat)
        }
        ClassicalSetModel::Incoherent(basis) => {
            let dim = basis.len();
            let mut weights: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..1.0)).collect();
            let total: f64 = weights.iter().sum();
            if total < 1e-12 {
                weights = vec![1.0; dim];
            }
            let total: f64 = weights.iter().sum();
            let mut mat = CMatrix::zeros(dim);
            for (w, b) in weights.iter().zip(basis) {
                mat = mat.add(&b.outer().scale_re(w / total));
            }
            DensityMatrix::new(mat)
        }
        ClassicalSetModel::SeparableTwoQubitSampled => {
            let terms = rng.random_range(1..=4usize);
            let mut weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.0..1.0)).collect();
            let total: f64 = weights.iter().sum();
            if total < 1e-12 {
                weights = vec![1.0; terms];
            }
            let total: f64 = weights.iter().sum();
            let mut mat = CMatrix::zeros(4);
            for w in &weights {
                let a = haar_random_ket(2, rng);
                let b = haar_random_ket(2, rng);
                let product = a.tensor(&b)?;
                mat = mat.add(&product.outer().scale_re(w / total));
            }
            DensityMatrix::new(mat)
        }
    }
}

/// Haar-random ket via normalized complex Gaussian amplitudes.
pub fn haar_random_ket(dim: usize, rng: &mut ChaCha8Rng) -> Ket {
    loop {
        let amplitudes: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        if let Ok(k) = Ket::normalized(amplitudes) {
            return k;
        }
    }
}

/// Random full-rank density matrix ρ = GG†/Tr[GG†].
pub fn random_density(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut g = CMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            g[(i, j)] = Complex64::new(re, im);
        }
    }
    let gg = g.matmul(&g.dagger());
    let trace = gg.trace().re;
    DensityMatrix::new(gg.scale_re(1.0 / trace)).expect("GG†/Tr is a valid state")
}
