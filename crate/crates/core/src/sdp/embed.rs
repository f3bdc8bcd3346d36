//! Complex Hermitian ↔ real symmetric embedding.
//!
//! `H ↦ [[Re H, −Im H], [Im H, Re H]]` is a real-linear map onto symmetric
//! matrices of twice the size. It preserves positive semidefiniteness, doubles
//! every eigenvalue's multiplicity, and satisfies
//! `⟨embed(C), embed(X)⟩ = 2 tr[C X]`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::operator::{CMatrix, HermitianOperator};

/// Embeds a complex matrix after checking that it is Hermitian.
pub fn embed_hermitian(h: &CMatrix) -> Result<DMatrix<f64>> {
    let h = HermitianOperator::new(h.clone())?;
    Ok(embed(&h))
}

pub fn embed(h: &HermitianOperator) -> DMatrix<f64> {
    let m = h.matrix();
    let n = m.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Recovers the Hermitian operator from a (possibly unstructured) symmetric
/// `2n × 2n` matrix by projecting onto the embedded subspace.
pub fn unembed(x: &DMatrix<f64>) -> HermitianOperator {
    let n = x.nrows() / 2;
    let mat = CMatrix::from_fn(n, n, |i, j| {
        let re = 0.5 * (x[(i, j)] + x[(i + n, j + n)]);
        let im = 0.5 * (x[(i + n, j)] - x[(i, j + n)]);
        Complex64::new(re, im)
    });
    HermitianOperator::hermitian_part(&mat)
}

/// Orthonormal (Hilbert–Schmidt) basis of `n × n` Hermitian matrices:
/// diagonal units, then `(E_jk + E_kj)/√2` and `i(E_jk − E_kj)/√2` for `j < k`.
pub fn hermitian_basis(n: usize) -> Vec<HermitianOperator> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        out.push(HermitianOperator::basis_projector(n, j));
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let mut sym = CMatrix::zeros(n, n);
            sym[(j, k)] = Complex64::new(r, 0.0);
            sym[(k, j)] = Complex64::new(r, 0.0);
            out.push(HermitianOperator::from_hermitian_unchecked(sym));
            let mut anti = CMatrix::zeros(n, n);
            anti[(j, k)] = Complex64::new(0.0, -r);
            anti[(k, j)] = Complex64::new(0.0, r);
            out.push(HermitianOperator::from_hermitian_unchecked(anti));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_eigs(m: &DMatrix<f64>) -> Vec<f64> {
        let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn identity_embeds_to_identity() {
        let e = embed(&HermitianOperator::identity(3));
        assert_eq!(e, DMatrix::identity(6, 6));
    }

    #[test]
    fn eigenvalues_double() {
        let h = HermitianOperator::from_real(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]))
            .unwrap();
        let eigs = sorted_eigs(&embed(&h));
        let expect = [-1.0, -1.0, 1.0, 1.0];
        for (a, b) in eigs.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_one_complex_projector_embeds_to_rank_two() {
        let xi = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 9.0);
        let s = 1.0 / 3f64.sqrt();
        let v = crate::operator::CVector::from_vec(vec![
            xi * s,
            Complex64::new(s, 0.0),
            xi.conj() * s,
        ]);
        let e = embed(&HermitianOperator::outer(&v));
        let eigs = sorted_eigs(&e);
        assert!(eigs[0] > -1e-12);
        let rank = eigs.iter().filter(|&&x| x > 1e-9).count();
        assert_eq!(rank, 2);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(embed_hermitian(&m).is_err());
    }

    #[test]
    fn unembed_inverts_embed_and_pairing_doubles_trace() {
        let basis = hermitian_basis(3);
        assert_eq!(basis.len(), 9);
        let a = &(&basis[3] + &basis[4].scale(0.3)) + &basis[1].scale(-2.0);
        let b = &basis[8].scale(1.7) + &basis[0];
        assert!(unembed(&embed(&a)).max_abs_diff(&a) < 1e-15);
        let pairing = embed(&a).dot(&embed(&b));
        assert!((pairing - 2.0 * a.inner(&b)).abs() < 1e-13);
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((x.inner(y) - expect).abs() < 1e-14);
            }
        }
    }
}
