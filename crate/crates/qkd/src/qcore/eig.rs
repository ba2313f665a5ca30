use num_complex::Complex64;

use crate::error::{QkdError, Result};
use crate::qcore::matrix::{CMatrix, Ket};

const HERMITICITY_TOL: f64 = 1e-9;
const OFFDIAG_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvalues are returned ascending; ties are broken by lexicographic
/// comparison of the phase-fixed eigenvector amplitudes (real part first,
/// then imaginary part) so chain construction is reproducible.
pub fn eig_hermitian(h: &CMatrix) -> Result<(Vec<f64>, Vec<Ket>)> {
    let defect = h.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(QkdError::validation("hermiticity", defect));
    }
    let n = h.dim();

    // Symmetrize so rotations see an exactly Hermitian matrix.
    let mut a = h.add(&h.dagger()).scale_re(0.5);
    let mut v = CMatrix::identity(n);
    let scale = 1.0 + a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= OFFDIAG_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let z = a[(p, q)];
                if z.norm() <= OFFDIAG_TOL * scale {
                    continue;
                }
                let (u_pp, u_qp, u_pq, u_qq) = block_rotation(a[(p, p)].re, a[(q, q)].re, z);
                apply_rotation(&mut a, &mut v, p, q, u_pp, u_qp, u_pq, u_qq);
            }
        }
    }

    let mut pairs: Vec<(f64, Ket)> = (0..n)
        .map(|j| {
            let mut col: Vec<Complex64> = (0..n).map(|i| v[(i, j)]).collect();
            phase_fix(&mut col);
            (a[(j, j)].re, Ket::normalized(col).expect("unitary column"))
        })
        .collect();

    pairs.sort_by(|(la, ka), (lb, kb)| {
        if (la - lb).abs() > 1e-10 {
            la.partial_cmp(lb).unwrap()
        } else {
            lex_cmp(ka, kb)
        }
    });

    Ok(pairs.into_iter().unzip())
}

/// Eigenvectors of the Hermitian 2x2 block [[a, z], [conj(z), b]].
fn block_rotation(
    a: f64,
    b: f64,
    z: Complex64,
) -> (Complex64, Complex64, Complex64, Complex64) {
    let half_sum = 0.5 * (a + b);
    let half_diff = 0.5 * (a - b);
    let disc = (half_diff * half_diff + z.norm_sqr()).sqrt();
    let mu1 = half_sum - disc;
    // Eigenvector for mu1 is (z, mu1 - a); pick the better-conditioned form.
    let (alpha, beta) = if (mu1 - a).abs() >= (mu1 - b).abs() {
        (z, Complex64::new(mu1 - a, 0.0))
    } else {
        (Complex64::new(mu1 - b, 0.0), z.conj())
    };
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    let v1 = (alpha / norm, beta / norm);
    let v2 = (-v1.1.conj(), v1.0.conj());
    (v1.0, v1.1, v2.0, v2.1)
}

#[allow(clippy::too_many_arguments)]
fn apply_rotation(
    a: &mut CMatrix,
    v: &mut CMatrix,
    p: usize,
    q: usize,
    u_pp: Complex64,
    u_qp: Complex64,
    u_pq: Complex64,
    u_qq: Complex64,
) {
    let n = a.dim();
    // A <- A U on columns p, q
    for i in 0..n {
        let (x, y) = (a[(i, p)], a[(i, q)]);
        a[(i, p)] = x * u_pp + y * u_qp;
        a[(i, q)] = x * u_pq + y * u_qq;
    }
    // A <- U† A on rows p, q
    for j in 0..n {
        let (x, y) = (a[(p, j)], a[(q, j)]);
        a[(p, j)] = u_pp.conj() * x + u_qp.conj() * y;
        a[(q, j)] = u_pq.conj() * x + u_qq.conj() * y;
    }
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;
    for i in 0..n {
        let (x, y) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = x * u_pp + y * u_qp;
        v[(i, q)] = x * u_pq + y * u_qq;
    }
}

/// Rotate the global phase so the first significant amplitude is real positive.
fn phase_fix(col: &mut [Complex64]) {
    if let Some(z) = col.iter().find(|z| z.norm() > 1e-8) {
        let phase = z / z.norm();
        let correction = phase.conj();
        for amp in col.iter_mut() {
            *amp *= correction;
        }
    }
}

fn lex_cmp(a: &Ket, b: &Ket) -> std::cmp::Ordering {
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
        match x.re.partial_cmp(&y.re).unwrap() {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
        match x.im.partial_cmp(&y.im).unwrap() {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::frobenius_distance;
    use proptest::prelude::*;

    fn sigma_x() -> CMatrix {
        CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    fn reconstruct(vals: &[f64], vecs: &[Ket]) -> CMatrix {
        let n = vecs[0].dim();
        let mut acc = CMatrix::zeros(n);
        for (lam, k) in vals.iter().zip(vecs) {
            acc = acc.add(&k.outer().scale_re(*lam));
        }
        acc
    }

    #[test]
    fn sigma_x_spectrum() {
        let (vals, vecs) = eig_hermitian(&sigma_x()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        // |−⟩ then |+⟩, phase-fixed with positive leading amplitude
        let s = 1.0 / 2f64.sqrt();
        assert!((vecs[0].amplitudes()[0].re - s).abs() < 1e-12);
        assert!((vecs[0].amplitudes()[1].re + s).abs() < 1e-12);
        assert!((vecs[1].amplitudes()[0].re - s).abs() < 1e-12);
        assert!((vecs[1].amplitudes()[1].re - s).abs() < 1e-12);
    }

    #[test]
    fn diagonal_spectrum() {
        let d = CMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ])
        .unwrap();
        let (vals, vecs) = eig_hermitian(&d).unwrap();
        assert_eq!(vals.len(), 3);
        for (i, lam) in vals.iter().enumerate() {
            assert!((lam - (i as f64 + 1.0)).abs() < 1e-13);
            assert!((vecs[i].amplitudes()[i].re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn minus_sigma_x_roles() {
        // W = −σₓ: k₊ = |−⟩ with a = 1, k₋ = |+⟩ with b = 1
        let w = sigma_x().scale_re(-1.0);
        let (vals, vecs) = eig_hermitian(&w).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        let s = 1.0 / 2f64.sqrt();
        // ascending: −1 belongs to |+⟩, +1 to |−⟩
        assert!((vecs[0].amplitudes()[1].re - s).abs() < 1e-12);
        assert!((vecs[1].amplitudes()[1].re + s).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = CMatrix::zeros(2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        assert!(eig_hermitian(&m).is_err());
    }

    proptest! {
        #[test]
        fn reconstruction_random_hermitian(dim in 1usize..=8, seed in 0u64..1000) {
            use rand::SeedableRng;
            use rand_distr::{Distribution, StandardNormal};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut m = CMatrix::zeros(dim);
            for i in 0..dim {
                for j in 0..dim {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    m[(i, j)] = Complex64::new(re, im);
                }
            }
            let h = m.add(&m.dagger()).scale_re(0.5);
            let (vals, vecs) = eig_hermitian(&h).unwrap();
            let rec = reconstruct(&vals, &vecs);
            prop_assert!(frobenius_distance(&rec, &h).unwrap() <= 1e-10);
            // orthonormality
            for i in 0..dim {
                for j in 0..dim {
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((vecs[i].inner(&vecs[j]).norm() - want).abs() <= 1e-10);
                }
            }
        }
    }
}
