//! Acceptance suite: one test per criterion, each printing a pass line.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use qkd::chain::{assemble_chain, verify_chain};
use qkd::qcore::{
    bloch_state, frobenius_distance, tensor, CMatrix, DensityMatrix, Ket,
};
use qkd::quasiprob::{
    evaluate_distribution, infocomplete_with_witness, reconstruct_state, sic_marginals_of,
    total_negativity,
};
use qkd::resources::{
    closest_classical, is_classical, random_density, sample_classical, ClassicalSetModel,
};
use qkd::weakval::{
    conical_decomposition, detect_anomalous, negative_term_normalization,
    projector_sandwich_coefficient,
};
use qkd::witness::{extend_and_scale, geometric_witness, ppt_entanglement_witness, Witness};

fn plus_state() -> DensityMatrix {
    DensityMatrix::pure(&bloch_state(std::f64::consts::FRAC_PI_2, 0.0))
}

fn bell_phi_plus() -> DensityMatrix {
    let amp = 1.0 / 2f64.sqrt();
    DensityMatrix::pure(
        &Ket::new(vec![
            Complex64::new(amp, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(amp, 0.0),
        ])
        .unwrap(),
    )
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

/// Random qubit state bounded away from the z-axis.
fn random_resourceful_qubit(rng: &mut ChaCha8Rng) -> DensityMatrix {
    loop {
        let rho = random_density(2, rng);
        if let Ok((_, dist)) = closest_classical(&rho, &ClassicalSetModel::QubitZAxis) {
            if dist > 1e-3 {
                return rho;
            }
        }
    }
}

#[test]
fn criterion_1_qubit_example_regression() {
    let rho = plus_state();
    let witness = geometric_witness(&rho, &ClassicalSetModel::QubitZAxis).unwrap();
    let ew = extend_and_scale(&witness).unwrap();

    // W′₊ = ¼|−⟩⟨−|⊗|0⟩⟨0|
    let s = 1.0 / 2f64.sqrt();
    let minus = Ket::new(vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]).unwrap();
    let wplus_expect = tensor(&minus.outer().scale_re(0.25), &Ket::basis(2, 0).outer()).unwrap();
    let spectrum = ew.scaled_spectrum().unwrap();
    let (a, kplus) = spectrum.last().unwrap();
    let wplus = tensor(&kplus.outer().scale_re(*a), &Ket::basis(2, 0).outer()).unwrap();
    assert!(frobenius_distance(&wplus, &wplus_expect).unwrap() < 1e-10);

    let chain = assemble_chain(&ew).unwrap();
    let verification = verify_chain(&chain, &ew).unwrap();
    assert!(verification.residual <= 1e-10);

    let rho_ext = rho.extend_with_ancilla().unwrap();
    let dist = evaluate_distribution(&chain, &rho_ext).unwrap();
    assert!((dist.all_zeros() + 0.25).abs() <= 1e-9);

    let frobenius = 1.0 / 2f64.sqrt();
    let contribution = -dist.all_zeros();
    assert!((contribution - ew.scale() * frobenius).abs() <= 1e-9);
    assert!((contribution - 0.25).abs() <= 1e-9);
    println!("ACCEPTANCE 1: PASS (qubit example regression)");
}

#[test]
fn criterion_2_chain_factorization_property() {
    let seed = 20240824;
    println!("criterion 2 seed: {}", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = 0;
    while count < 200 {
        let dim = 2 + (count % 5);
        let h = random_hermitian(dim, &mut rng);
        let witness = Witness::user(h).unwrap();
        let ew = extend_and_scale(&witness).unwrap();
        let chain = assemble_chain(&ew).unwrap();
        let v = verify_chain(&chain, &ew).unwrap();
        assert!(v.residual <= 1e-9, "residual {} at dim {}", v.residual, dim);
        assert!(v.max_idempotence_defect <= 1e-10);
        assert!(v.max_hermiticity_defect <= 1e-10);
        count += 1;
    }
    println!("ACCEPTANCE 2: PASS (chain factorization over {} witnesses)", count);
}

#[test]
fn criterion_3_normalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // suite-1 style distribution
    let witness = geometric_witness(&plus_state(), &ClassicalSetModel::QubitZAxis).unwrap();
    let ew = extend_and_scale(&witness).unwrap();
    let chain = assemble_chain(&ew).unwrap();
    let d = evaluate_distribution(&chain, &plus_state().extend_with_ancilla().unwrap()).unwrap();
    assert!((d.sum() - 1.0).abs() <= 1e-10);
    // suite-2 style random chains
    for i in 0..50 {
        let dim = 2 + (i % 5);
        let witness = Witness::user(random_hermitian(dim, &mut rng)).unwrap();
        let ew = extend_and_scale(&witness).unwrap();
        let chain = assemble_chain(&ew).unwrap();
        let rho = random_density(dim, &mut rng);
        let d = evaluate_distribution(&chain, &rho.extend_with_ancilla().unwrap()).unwrap();
        assert!((d.sum() - 1.0).abs() <= 1e-10, "sum {} at dim {}", d.sum(), dim);
    }
    // demo-style: bell chain and infocomplete aggregation
    let bell = bell_phi_plus();
    let w = ppt_entanglement_witness(&bell).unwrap();
    let ew = extend_and_scale(&w).unwrap();
    let chain = assemble_chain(&ew).unwrap();
    let d = evaluate_distribution(&chain, &bell.extend_with_ancilla().unwrap()).unwrap();
    assert!((d.sum() - 1.0).abs() <= 1e-10);
    let agg = infocomplete_with_witness(&plus_state(), &witness_for_plus()).unwrap();
    assert!((agg.distribution.sum() - 1.0).abs() <= 1e-10);
    assert!((agg.py.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
    println!("ACCEPTANCE 3: PASS (normalization)");
}

fn witness_for_plus() -> Witness {
    geometric_witness(&plus_state(), &ClassicalSetModel::QubitZAxis).unwrap()
}

#[test]
fn criterion_4_classical_positivity() {
    // qubit-z-axis model, witness from |+⟩⟨+|
    let ew = extend_and_scale(&witness_for_plus()).unwrap();
    let chain = assemble_chain(&ew).unwrap();
    for sigma in sample_classical(&ClassicalSetModel::QubitZAxis, 500, 41).unwrap() {
        let d = evaluate_distribution(&chain, &sigma.extend_with_ancilla().unwrap()).unwrap();
        assert!(d.all_zeros() >= -1e-10);
    }
    // incoherent model on dim 3, witness from a coherent state
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let model = ClassicalSetModel::incoherent_computational(3);
    let rho = loop {
        let candidate = random_density(3, &mut rng);
        if !is_classical(&candidate, &model, 1e-3).unwrap() {
            break candidate;
        }
    };
    let witness = geometric_witness(&rho, &model).unwrap();
    let ew = extend_and_scale(&witness).unwrap();
    let chain = assemble_chain(&ew).unwrap();
    for sigma in sample_classical(&model, 500, 42).unwrap() {
        let d = evaluate_distribution(&chain, &sigma.extend_with_ancilla().unwrap()).unwrap();
        assert!(d.all_zeros() >= -1e-10);
    }
    println!("ACCEPTANCE 4: PASS (classical positivity, 500 samples per analytic model)");
}

#[test]
fn criterion_5_negativity_distance_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let rho = random_resourceful_qubit(&mut rng);
        let (_, dist) = closest_classical(&rho, &ClassicalSetModel::QubitZAxis).unwrap();
        let witness = geometric_witness(&rho, &ClassicalSetModel::QubitZAxis).unwrap();
        let ew = extend_and_scale(&witness).unwrap();
        let chain = assemble_chain(&ew).unwrap();
        let d = evaluate_distribution(&chain, &rho.extend_with_ancilla().unwrap()).unwrap();
        assert!(
            (d.all_zeros() + ew.scale() * dist).abs() <= 1e-9,
            "event {} vs -s*dist {}",
            d.all_zeros(),
            -ew.scale() * dist
        );
    }
    println!("ACCEPTANCE 5: PASS (negativity equals scaled distance, 200 states)");
}

#[test]
fn criterion_6_weak_value_decomposition() {
    // Eq. (12) scalar identity
    for p in [0.6f64, 0.75, 0.9] {
        let expect = (1.0 - p - (p * (1.0 - p)).sqrt()) / 2.0;
        assert!((projector_sandwich_coefficient(p) - expect).abs() <= 1e-12);
        assert!((negative_term_normalization(p) * expect + 1.0).abs() <= 1e-12);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    // geometric witness source on qubits
    for _ in 0..200 {
        let rho = random_resourceful_qubit(&mut rng);
        let witness = geometric_witness(&rho, &ClassicalSetModel::QubitZAxis).unwrap();
        let ew = extend_and_scale(&witness).unwrap();
        let dec = conical_decomposition(&ew, &rho, 0.75).unwrap();
        let expect = ew.scale() * witness.expectation(&rho);
        assert!((dec.weighted_sum() - expect).abs() <= 1e-9);
        assert!(expect < 0.0);
        let report = detect_anomalous(&dec.terms, 1e-9);
        let has_negative_flagged = dec
            .terms
            .iter()
            .zip(&report.flags)
            .any(|(t, f)| *f && t.value.map(|v| v.re < 0.0).unwrap_or(false));
        assert!(has_negative_flagged);
    }
    // PPT witness source on entangled two-qubit states
    let mut count = 0;
    while count < 200 {
        let psi = qkd::resources::haar_random_ket(4, &mut rng);
        let rho = DensityMatrix::pure(&psi);
        let witness = match ppt_entanglement_witness(&rho) {
            Ok(w) => w,
            Err(_) => continue,
        };
        let ew = extend_and_scale(&witness).unwrap();
        let dec = conical_decomposition(&ew, &rho, 0.75).unwrap();
        let expect = ew.scale() * witness.expectation(&rho);
        assert!((dec.weighted_sum() - expect).abs() <= 1e-9);
        let report = detect_anomalous(&dec.terms, 1e-9);
        let has_negative_flagged = dec
            .terms
            .iter()
            .zip(&report.flags)
            .any(|(t, f)| *f && t.value.map(|v| v.re < 0.0).unwrap_or(false));
        assert!(has_negative_flagged);
        count += 1;
    }
    println!("ACCEPTANCE 6: PASS (weak-value decomposition, both witness sources)");
}

#[test]
fn criterion_7_informational_completeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let rho = random_density(2, &mut rng);
        let marginals = sic_marginals_of(&rho).unwrap();
        let back = reconstruct_state(&marginals).unwrap();
        assert!(frobenius_distance(back.mat(), rho.mat()).unwrap() <= 1e-9);
    }
    // aggregated vs standalone witness event
    let witness = witness_for_plus();
    let ew = extend_and_scale(&witness).unwrap();
    let chain = assemble_chain(&ew).unwrap();
    for _ in 0..25 {
        let rho = random_density(2, &mut rng);
        let agg = infocomplete_with_witness(&rho, &witness).unwrap();
        for m in &agg.sic_marginals {
            assert!(*m >= -1e-10);
        }
        let standalone =
            evaluate_distribution(&chain, &rho.extend_with_ancilla().unwrap()).unwrap();
        assert!((agg.witness_event - standalone.all_zeros()).abs() <= 1e-10);
    }
    println!("ACCEPTANCE 7: PASS (informational completeness and tomography)");
}

#[test]
fn criterion_8_entanglement_demo() {
    let bell = bell_phi_plus();
    let witness = ppt_entanglement_witness(&bell).unwrap();
    let ew = extend_and_scale(&witness).unwrap();
    let chain = assemble_chain(&ew).unwrap();
    let d = evaluate_distribution(&chain, &bell.extend_with_ancilla().unwrap()).unwrap();
    assert!((d.all_zeros() - ew.scale() * (-0.5)).abs() <= 1e-9);
    assert!(d.all_zeros() < 0.0);
    assert!(total_negativity(&d) > 0.0);
    for sigma in sample_classical(&ClassicalSetModel::SeparableTwoQubitSampled, 200, 8).unwrap() {
        let ds = evaluate_distribution(&chain, &sigma.extend_with_ancilla().unwrap()).unwrap();
        assert!(ds.all_zeros() >= -1e-10);
    }
    println!("ACCEPTANCE 8: PASS (entanglement demo, 200 separable samples)");
}

#[test]
fn criterion_9_reference_value_reconciliation() {
    let witness = witness_for_plus();
    let ew = extend_and_scale(&witness).unwrap();
    let dec = conical_decomposition(&ew, &plus_state(), 0.75).unwrap();
    let neg = dec
        .terms
        .iter()
        .find(|t| t.kind == qkd::weakval::TermKind::NegativeEigenvalue)
        .unwrap();
    let oracle = neg.value.unwrap().re;
    assert!((oracle - (1.0 - 3f64.sqrt()) / 4.0).abs() <= 1e-12);
    assert!(oracle < 0.0);
    let report = detect_anomalous(&dec.terms, 1e-9);
    assert!(report.any());
    // the reference value keeps the same sign and anomaly classification
    let reference = (1.0 - 3f64.sqrt()) / (2.0 * 2f64.sqrt());
    assert!(reference < 0.0);
    assert!((reference + 0.2588).abs() < 1e-4);
    println!("ACCEPTANCE 9: PASS (reference weak value reconciliation)");
}
