//! Small dense complex-matrix helpers shared by the physics modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Assembles `[[a, b], [c, d]]` from four equal-size square blocks.
pub fn blocks(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(b);
    out.view_mut((n, 0), (n, n)).copy_from(c);
    out.view_mut((n, n), (n, n)).copy_from(d);
    out
}

/// `m ⊗ [[s00, s01], [s10, s11]]` in block form: each 2x2 entry scales a copy
/// of `m`.
pub fn block_scale(m: &CMatrix, s: [[f64; 2]; 2]) -> CMatrix {
    blocks(
        &(m * c(s[0][0])),
        &(m * c(s[0][1])),
        &(m * c(s[1][0])),
        &(m * c(s[1][1])),
    )
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

/// Largest entry of `m - m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `exp(-i t H)` for Hermitian `H` via its spectral decomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| (-I * t * l).exp()));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_layout() {
        let one = identity(1);
        let m = block_scale(&one, [[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(m[(0, 1)], c(2.0));
        assert_eq!(m[(1, 0)], c(3.0));
    }

    #[test]
    fn expm_of_pauli_x() {
        let sx = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let u = expm_hermitian(&sx, std::f64::consts::FRAC_PI_2);
        // exp(-i pi/2 sx) = -i sx
        assert!(max_abs(&(u - sx * -I)) < 1e-14);
    }
}
