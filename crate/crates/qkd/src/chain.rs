//! Factorization of an extended witness into an ordered chain of genuine
//! projectors. Positive eigenvalues take a three-factor block, negative
//! eigenvalues a five-factor block; blocks for distinct eigenvectors live on
//! orthogonal subspaces and are summed slot by slot.

use num_complex::Complex64;

use crate::error::{QkdError, Result};
use crate::qcore::{CMatrix, Ket, Projector};
use crate::witness::ExtendedWitness;

const BAND_SLACK: f64 = 1e-12;
const CONSTRUCTION_TOL: f64 = 1e-9;

/// Ordered projector list realizing wprime = Π₀Π₃Π₂Π₁Π₀.
#[derive(Debug, Clone)]
pub struct ProjectorChain {
    projectors: Vec<Projector>,
    dim: usize,
    scale: f64,
}

impl ProjectorChain {
    /// Projectors in evaluation order {Π₀, Π₃, Π₂, Π₁, Π₀}.
    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Slot labels in evaluation order.
    pub fn labels(&self) -> Vec<String> {
        vec!["P0".into(), "P3".into(), "P2".into(), "P1".into(), "P0".into()]
    }

    /// Ordered product of the chain.
    pub fn product(&self) -> CMatrix {
        let mut acc = self.projectors[0].mat().clone();
        for p in &self.projectors[1..] {
            acc = acc.matmul(p.mat());
        }
        acc
    }
}

fn check_band(value: f64, name: &str) -> Result<()> {
    if value <= 0.0 || value > 0.25 + BAND_SLACK {
        return Err(QkdError::Dimension(format!(
            "{} = {} outside the admissible band (0, 1/4]",
            name, value
        )));
    }
    Ok(())
}

fn extended_pair(k: &Ket) -> Result<(Ket, Ket)> {
    let k0 = k.tensor(&Ket::basis(2, 0))?;
    let k1 = k.tensor(&Ket::basis(2, 1))?;
    Ok((k0, k1))
}

/// Block for eigenvalue +a: Π₊₀ Π₊₁ Π₊₀ = a·|k0⟩⟨k0|.
pub fn positive_block(a: f64, k: &Ket) -> Result<(Projector, Projector)> {
    check_band(a, "positive eigenvalue")?;
    let (k0, k1) = extended_pair(k)?;
    let phi = Ket::superpose(
        Complex64::new(a.sqrt(), 0.0),
        &k0,
        Complex64::new((1.0 - a).sqrt(), 0.0),
        &k1,
    )?;
    Ok((Projector::onto(&k0), Projector::onto(&phi)))
}

/// Block for eigenvalue −b: Π₋₀ Π₋₃ Π₋₂ Π₋₁ Π₋₀ = −b·|k0⟩⟨k0|,
/// with λ = (1 − √(1−4b))/2.
pub fn negative_block(b: f64, k: &Ket) -> Result<(Projector, Projector, Projector, Projector)> {
    check_band(b, "negative eigenvalue magnitude")?;
    let lambda = (1.0 - (1.0 - 4.0 * b.min(0.25)).max(0.0).sqrt()) / 2.0;
    let (k0, k1) = extended_pair(k)?;
    let c_lam = Complex64::new(lambda.sqrt(), 0.0);
    let c_rest = Complex64::new((1.0 - lambda).sqrt(), 0.0);
    let psi1 = Ket::superpose(c_rest, &k1, -c_lam, &k0)?;
    let psi2 = k1.clone();
    let psi3 = Ket::superpose(c_rest, &k1, c_lam, &k0)?;
    Ok((
        Projector::onto(&k0),
        Projector::onto(&psi1),
        Projector::onto(&psi2),
        Projector::onto(&psi3),
    ))
}

/// Assemble the 5-slot chain {Π₀, Π₃, Π₂, Π₁, Π₀} realizing wprime.
///
/// Positive blocks contribute Π₊₁ to all three middle slots (idempotence
/// collapses the repeats); negative blocks contribute Π₋₁, Π₋₂, Π₋₃.
pub fn assemble_chain(ew: &ExtendedWitness) -> Result<ProjectorChain> {
    let spectrum = ew.scaled_spectrum()?;
    if spectrum.is_empty() {
        return Err(QkdError::DegenerateInput(
            "witness spectrum is entirely zero".into(),
        ));
    }
    let dim = ew.dim();
    let mut slot0 = CMatrix::zeros(dim);
    let mut middle = [CMatrix::zeros(dim), CMatrix::zeros(dim), CMatrix::zeros(dim)];
    for (lam, k) in &spectrum {
        if *lam > 0.0 {
            let (p0, p1) = positive_block(*lam, k)?;
            slot0 = slot0.add(p0.mat());
            for slot in middle.iter_mut() {
                *slot = slot.add(p1.mat());
            }
        } else {
            let (m0, m1, m2, m3) = negative_block(-lam, k)?;
            slot0 = slot0.add(m0.mat());
            middle[0] = middle[0].add(m1.mat());
            middle[1] = middle[1].add(m2.mat());
            middle[2] = middle[2].add(m3.mat());
        }
    }
    let pi0 = Projector::new(slot0)?;
    let [m1, m2, m3] = middle;
    let pi1 = Projector::new(m1)?;
    let pi2 = Projector::new(m2)?;
    let pi3 = Projector::new(m3)?;
    let chain = ProjectorChain {
        projectors: vec![pi0.clone(), pi3, pi2, pi1, pi0],
        dim,
        scale: ew.scale(),
    };
    let residual = chain_residual(&chain, ew.wprime());
    if residual > CONSTRUCTION_TOL {
        return Err(QkdError::validation("chain product identity", residual));
    }
    Ok(chain)
}

/// ‖Π₀Π₃Π₂Π₁Π₀ − wprime‖_F for the assembled chain.
pub fn chain_residual(chain: &ProjectorChain, wprime: &CMatrix) -> f64 {
    chain.product().sub(wprime).frobenius_norm()
}

/// Residual of an arbitrary ordered matrix product against a target.
pub fn raw_chain_residual(mats: &[CMatrix], target: &CMatrix) -> f64 {
    let mut acc = mats[0].clone();
    for m in &mats[1..] {
        acc = acc.matmul(m);
    }
    acc.sub(target).frobenius_norm()
}

/// Verification report for a chain against its extended witness.
#[derive(Debug, Clone, Copy)]
pub struct ChainVerification {
    pub residual: f64,
    pub max_idempotence_defect: f64,
    pub max_hermiticity_defect: f64,
}

/// Recompute the product identity and re-validate every projector.
pub fn verify_chain(chain: &ProjectorChain, ew: &ExtendedWitness) -> Result<ChainVerification> {
    if chain.dim() != ew.dim() {
        return Err(QkdError::Dimension(format!(
            "chain dimension {} vs witness dimension {}",
            chain.dim(),
            ew.dim()
        )));
    }
    let residual = chain_residual(chain, ew.wprime());
    let max_idempotence_defect = chain
        .projectors()
        .iter()
        .map(|p| p.idempotence_defect())
        .fold(0.0, f64::max);
    let max_hermiticity_defect = chain
        .projectors()
        .iter()
        .map(|p| p.mat().hermiticity_defect())
        .fold(0.0, f64::max);
    Ok(ChainVerification {
        residual,
        max_idempotence_defect,
        max_hermiticity_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{frobenius_distance, tensor};
    use crate::resources::random_density;
    use crate::witness::{extend_and_scale, Witness};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn minus_ket() -> Ket {
        Ket::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ])
        .unwrap()
    }

    fn plus_ket() -> Ket {
        Ket::normalized(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap()
    }

    fn sigma_x() -> CMatrix {
        CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                m[(i, j)] = Complex64::new(re, im);
            }
        }
        m.add(&m.dagger()).scale_re(0.5)
    }

    #[test]
    fn positive_block_qubit_example() {
        // a = 1/4, k₊ = |−⟩: |φ⟩ = ½|−0⟩ + (√3/2)|−1⟩
        let (p0, p1) = positive_block(0.25, &minus_ket()).unwrap();
        let k0 = minus_ket().tensor(&Ket::basis(2, 0)).unwrap();
        let k1 = minus_ket().tensor(&Ket::basis(2, 1)).unwrap();
        let phi = Ket::superpose(
            Complex64::new(0.5, 0.0),
            &k0,
            Complex64::new(3f64.sqrt() / 2.0, 0.0),
            &k1,
        )
        .unwrap();
        assert!(frobenius_distance(p1.mat(), &phi.outer()).unwrap() < 1e-13);
        let product = p0.mat().matmul(p1.mat()).matmul(p0.mat());
        assert!(frobenius_distance(&product, &k0.outer().scale_re(0.25)).unwrap() < 1e-13);
        assert!((product.trace().re - 0.25).abs() < 1e-13);
    }

    #[test]
    fn positive_block_small_eigenvalue() {
        let k = Ket::basis(2, 0);
        let (p0, p1) = positive_block(1.0 / 16.0, &k).unwrap();
        let k0 = k.tensor(&Ket::basis(2, 0)).unwrap();
        let product = p0.mat().matmul(p1.mat()).matmul(p0.mat());
        assert!(
            frobenius_distance(&product, &k0.outer().scale_re(1.0 / 16.0)).unwrap() < 1e-13
        );
    }

    #[test]
    fn positive_block_band_check() {
        assert!(positive_block(0.3, &Ket::basis(2, 0)).is_err());
        assert!(positive_block(0.0, &Ket::basis(2, 0)).is_err());
    }

    #[test]
    fn negative_block_lambda_values() {
        // b = 1/4 → λ = 1/2; b = 3/16 → λ = 1/4
        let lam = |b: f64| (1.0 - (1.0 - 4.0 * b).sqrt()) / 2.0;
        assert!((lam(0.25) - 0.5).abs() < 1e-15);
        assert!((lam(3.0 / 16.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn negative_block_qubit_example() {
        // b = 1/4, k₋ = |+⟩: Π₋₂ = |+⟩⟨+|⊗|1⟩⟨1| and product = −¼|+0⟩⟨+0|
        let (m0, m1, m2, m3) = negative_block(0.25, &plus_ket()).unwrap();
        let k1 = plus_ket().tensor(&Ket::basis(2, 1)).unwrap();
        assert!(frobenius_distance(m2.mat(), &k1.outer()).unwrap() < 1e-13);
        let k0 = plus_ket().tensor(&Ket::basis(2, 0)).unwrap();
        let product = m0
            .mat()
            .matmul(m3.mat())
            .matmul(m2.mat())
            .matmul(m1.mat())
            .matmul(m0.mat());
        assert!(frobenius_distance(&product, &k0.outer().scale_re(-0.25)).unwrap() < 1e-13);
    }

    #[test]
    fn qubit_example_chain() {
        // W = −σₓ → W′ = −¼σₓ⊗|0⟩⟨0|, Π₀ = 𝟙⊗|0⟩⟨0|
        let w = Witness::user(sigma_x().scale_re(-1.0)).unwrap();
        let ew = extend_and_scale(&w).unwrap();
        let chain = assemble_chain(&ew).unwrap();
        let pi0_expect = tensor(&CMatrix::identity(2), &Ket::basis(2, 0).outer()).unwrap();
        assert!(frobenius_distance(chain.projectors()[0].mat(), &pi0_expect).unwrap() < 1e-12);
        let v = verify_chain(&chain, &ew).unwrap();
        assert!(v.residual <= 1e-12);
        assert!(v.max_idempotence_defect <= 1e-10);
    }

    #[test]
    fn purely_positive_witness() {
        let w = Witness::user(Ket::basis(2, 0).outer().scale_re(0.25)).unwrap();
        let ew = extend_and_scale(&w).unwrap();
        let chain = assemble_chain(&ew).unwrap();
        // middle slots all equal the single Π₊₁
        for i in 1..4 {
            assert!(
                frobenius_distance(chain.projectors()[1].mat(), chain.projectors()[i].mat())
                    .unwrap()
                    < 1e-13
            );
        }
        assert!(verify_chain(&chain, &ew).unwrap().residual <= 1e-10);
    }

    #[test]
    fn perturbed_chain_has_large_residual() {
        let w = Witness::user(sigma_x().scale_re(-1.0)).unwrap();
        let ew = extend_and_scale(&w).unwrap();
        let chain = assemble_chain(&ew).unwrap();
        let mut mats: Vec<CMatrix> = chain.projectors().iter().map(|p| p.mat().clone()).collect();
        mats[1][(0, 0)] += Complex64::new(1e-3, 0.0);
        assert!(raw_chain_residual(&mats, ew.wprime()) > 1e-4);
    }

    #[test]
    fn random_witness_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for dim in 2..=6 {
            let w = Witness::user(random_hermitian(dim, &mut rng)).unwrap();
            let ew = extend_and_scale(&w).unwrap();
            let chain = assemble_chain(&ew).unwrap();
            let v = verify_chain(&chain, &ew).unwrap();
            assert!(v.residual <= 1e-9, "dim {}: residual {}", dim, v.residual);
            assert!(v.max_idempotence_defect <= 1e-10);
        }
    }

    #[test]
    fn sign_recovery_against_witness_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = Witness::user(random_hermitian(3, &mut rng)).unwrap();
        let ew = extend_and_scale(&w).unwrap();
        let chain = assemble_chain(&ew).unwrap();
        for _ in 0..20 {
            let rho = random_density(3, &mut rng);
            let rho_ext = rho.extend_with_ancilla().unwrap();
            let lhs = chain.product().matmul(rho_ext.mat()).trace().re;
            let rhs = ew.scale() * w.expectation(&rho);
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn cross_block_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = Witness::user(random_hermitian(4, &mut rng)).unwrap();
        let ew = extend_and_scale(&w).unwrap();
        let spectrum = ew.scaled_spectrum().unwrap();
        let blocks: Vec<CMatrix> = spectrum
            .iter()
            .map(|(lam, k)| {
                if *lam > 0.0 {
                    positive_block(*lam, k).unwrap().1.mat().clone()
                } else {
                    negative_block(-lam, k).unwrap().1.mat().clone()
                }
            })
            .collect();
        for i in 0..blocks.len() {
            for j in 0..blocks.len() {
                if i != j {
                    assert!(blocks[i].matmul(&blocks[j]).frobenius_norm() < 1e-10);
                }
            }
        }
    }
}
