//! Spin-j representation matrices, the π rotation about the y axis, helicity
//! spinors, and scalar functions of `p·S` as matrices.
//!
//! Basis order is fixed to descending `S₃` eigenvalue: index `k` carries
//! `m = j - k`. Half-integers are stored doubled (`two_j`, `sigma_two`).

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, expm_hermitian, CMatrix, CVector, I};
use crate::ratfunc::RationalFunc2;

/// Spin-j matrices `S₁, S₂, S₃` of dimension `2j + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinRep {
    pub two_j: u32,
    pub s: [CMatrix; 3],
}

impl SpinRep {
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// `n·S` for an arbitrary (not necessarily unit) vector.
    pub fn dot(&self, n: &Vector3<f64>) -> CMatrix {
        &self.s[0] * c(n.x) + &self.s[1] * c(n.y) + &self.s[2] * c(n.z)
    }

    /// Allowed helicities `2σ ∈ {2j, 2j-2, …, -2j}` in basis order.
    pub fn helicities(&self) -> impl Iterator<Item = i32> {
        let two_j = self.two_j as i32;
        (0..=two_j).map(move |k| two_j - 2 * k)
    }
}

pub fn spin_matrices(two_j: u32) -> SpinRep {
    let n = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut raise = CMatrix::zeros(n, n);
    let mut s3 = CMatrix::zeros(n, n);
    for k in 0..n {
        let m = j - k as f64;
        s3[(k, k)] = c(m);
        // S+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits at index k-1
        if k > 0 {
            raise[(k - 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let lower = raise.adjoint();
    let s1 = (&raise + &lower) * c(0.5);
    let s2 = (&raise - &lower) * Complex64::new(0.0, -0.5);
    SpinRep {
        two_j,
        s: [s1, s2, s3],
    }
}

/// `[R₂]_{m'm} = (-1)^{j+m} δ_{m',-m}`.
///
/// This equals `(-1)^{2j} exp(-iπS₂)`, i.e. the rotation by π about `y` up to
/// the overall sign that differs for half-odd `j`.
pub fn r2_matrix(two_j: u32) -> CMatrix {
    let n = two_j as usize + 1;
    let mut r = CMatrix::zeros(n, n);
    for k in 0..n {
        // m = j - k, so j + m = two_j - k and -m sits at index two_j - k
        let sign = if (two_j as usize - k).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        r[(n - 1 - k, k)] = c(sign);
    }
    r
}

/// `exp(-iπS₂)` computed from the spectral decomposition of `S₂`.
pub fn r2_exponential(rep: &SpinRep) -> CMatrix {
    expm_hermitian(&rep.s[1], std::f64::consts::PI)
}

/// Rotation `exp(-iφS₃) exp(-iθS₂)` taking `ẑ` to the direction with polar
/// angles `(θ, φ)`.
pub fn rotation(rep: &SpinRep, theta: f64, phi: f64) -> CMatrix {
    let z_phase = CMatrix::from_diagonal(&rep.s[2].diagonal().map(|m| (-I * phi * m).exp()));
    z_phase * expm_hermitian(&rep.s[1], theta)
}

fn polar_angles(n: &Vector3<f64>) -> (f64, f64) {
    let theta = n.z.clamp(-1.0, 1.0).acos();
    let phi = if n.x == 0.0 && n.y == 0.0 {
        0.0
    } else {
        n.y.atan2(n.x)
    };
    (theta, phi)
}

/// Unit spinor with `(n̂·S) ξ = σ ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HelicitySpinor {
    pub sigma_two: i32,
    pub direction: Vector3<f64>,
    pub components: CVector,
}

impl HelicitySpinor {
    pub fn sigma(&self) -> f64 {
        self.sigma_two as f64 / 2.0
    }
}

pub fn check_helicity(two_j: u32, sigma_two: i32) -> Result<()> {
    let ok = sigma_two.unsigned_abs() <= two_j && (two_j as i32 - sigma_two) % 2 == 0;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidHelicity { two_j, sigma_two })
    }
}

pub fn helicity_spinor(
    rep: &SpinRep,
    sigma_two: i32,
    direction: &Vector3<f64>,
) -> Result<HelicitySpinor> {
    check_helicity(rep.two_j, sigma_two)?;
    let norm = direction.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroDirection);
    }
    let n = direction / norm;
    let (theta, phi) = polar_angles(&n);
    let k = ((rep.two_j as i32 - sigma_two) / 2) as usize;
    let components = rotation(rep, theta, phi).column(k).into_owned();
    Ok(HelicitySpinor {
        sigma_two,
        direction: n,
        components,
    })
}

/// `f(p²·I, p·S)` built from the spectral decomposition of `p·S`.
///
/// At `p = 0` the helicity basis is undefined and the `S₃` eigenbasis is used
/// instead; every eigenvalue of `p·S` is zero there.
pub fn scalar_func_of_pdots(f: &RationalFunc2, p: &Vector3<f64>, rep: &SpinRep) -> Result<CMatrix> {
    let n = rep.dim();
    let pmag = p.norm();
    let x = c(pmag * pmag);
    let mut out = CMatrix::zeros(n, n);
    for sigma_two in rep.helicities() {
        let y = c(pmag * sigma_two as f64 / 2.0);
        let value = f.evaluate(x, y)?;
        let xi = if pmag == 0.0 {
            let mut e = CVector::zeros(n);
            e[((rep.two_j as i32 - sigma_two) / 2) as usize] = c(1.0);
            e
        } else {
            helicity_spinor(rep, sigma_two, p)?.components
        };
        out += &xi * xi.adjoint() * value;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{conj, identity, max_abs};
    use crate::ratfunc::{parse_expr, Params};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
        a * b - b * a
    }

    fn random_direction(rng: &mut ChaCha8Rng) -> Vector3<f64> {
        loop {
            let v = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n = v.norm();
            if n > 0.1 && n <= 1.0 {
                return v / n;
            }
        }
    }

    #[test]
    fn spin_half_is_half_pauli() {
        let rep = spin_matrices(1);
        let h = c(0.5);
        let sx = CMatrix::from_row_slice(2, 2, &[c(0.0), h, h, c(0.0)]);
        let sy = CMatrix::from_row_slice(2, 2, &[c(0.0), -I * 0.5, I * 0.5, c(0.0)]);
        let sz = CMatrix::from_row_slice(2, 2, &[h, c(0.0), c(0.0), -h]);
        assert!(max_abs(&(&rep.s[0] - sx)) < 1e-15);
        assert!(max_abs(&(&rep.s[1] - sy)) < 1e-15);
        assert!(max_abs(&(&rep.s[2] - sz)) < 1e-15);
    }

    #[test]
    fn spin_zero_is_trivial() {
        let rep = spin_matrices(0);
        for s in &rep.s {
            assert_eq!(s, &CMatrix::zeros(1, 1));
        }
    }

    #[test]
    fn spin_one_s3_and_casimir() {
        let rep = spin_matrices(2);
        assert_eq!(
            rep.s[2].diagonal().map(|z| z.re).as_slice(),
            &[1.0, 0.0, -1.0]
        );
        let cas = rep
            .s
            .iter()
            .fold(CMatrix::zeros(3, 3), |acc, s| acc + s * s);
        assert!(max_abs(&(cas - identity(3) * c(2.0))) < 1e-12);
    }

    #[test]
    fn algebra_for_many_spins() {
        for two_j in 0..=8 {
            let rep = spin_matrices(two_j);
            let j = rep.j();
            let [s1, s2, s3] = &rep.s;
            assert!(max_abs(&(commutator(s1, s2) - s3 * I)) < 1e-12);
            assert!(max_abs(&(commutator(s2, s3) - s1 * I)) < 1e-12);
            assert!(max_abs(&(commutator(s3, s1) - s2 * I)) < 1e-12);
            let cas = s1 * s1 + s2 * s2 + s3 * s3;
            assert!(max_abs(&(cas - identity(rep.dim()) * c(j * (j + 1.0)))) < 1e-12);
            for k in 0..rep.dim() {
                assert_eq!(s3[(k, k)], c(j - k as f64));
            }
        }
    }

    #[test]
    fn r2_spin_half_entrywise() {
        let r = r2_matrix(1);
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-1.0), c(0.0)]);
        assert_eq!(r, expected);
        assert_eq!(&r * &r, -identity(2));
        assert_eq!(r2_matrix(0), identity(1));
    }

    #[test]
    fn r2_square_and_exponential() {
        for two_j in 0..=8u32 {
            let rep = spin_matrices(two_j);
            let r = r2_matrix(two_j);
            let parity = if two_j % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(&r * &r, identity(rep.dim()) * c(parity));
            let expo = r2_exponential(&rep);
            assert!(max_abs(&(&r - expo * c(parity))) < 1e-10, "2j = {two_j}");
        }
    }

    #[test]
    fn r2_reverses_conjugated_spin() {
        for two_j in 0..=8u32 {
            let rep = spin_matrices(two_j);
            let r = r2_matrix(two_j);
            let r_inv = r.adjoint();
            for s in &rep.s {
                let lhs = &r * conj(s) * &r_inv;
                assert!(max_abs(&(lhs + s)) < 1e-10);
            }
        }
    }

    #[test]
    fn helicity_along_z_is_basis_vector() {
        let rep = spin_matrices(3);
        for (k, sigma_two) in rep.helicities().enumerate() {
            let xi = helicity_spinor(&rep, sigma_two, &Vector3::z()).unwrap();
            for i in 0..rep.dim() {
                let expected = if i == k { 1.0 } else { 0.0 };
                assert!((xi.components[i] - c(expected)).norm() < 1e-14);
            }
        }
    }

    /// Oracle: diagonalize S₁ for spin 1/2 directly.
    #[test]
    fn helicity_along_x_matches_s1_eigenvector() {
        let rep = spin_matrices(1);
        let eig = rep.s[0].clone().symmetric_eigen();
        let k = eig
            .eigenvalues
            .iter()
            .position(|&l| (l - 0.5).abs() < 1e-12)
            .unwrap();
        let oracle = eig.eigenvectors.column(k).into_owned();
        let xi = helicity_spinor(&rep, 1, &Vector3::x()).unwrap();
        let overlap = (oracle.adjoint() * &xi.components)[(0, 0)].norm();
        assert!((overlap - 1.0).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((xi.components[0] - c(s)).norm() < 1e-14);
        assert!((xi.components[1] - c(s)).norm() < 1e-14);
    }

    #[test]
    fn helicity_residual_random_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for two_j in [1u32, 2, 3, 4] {
            let rep = spin_matrices(two_j);
            for _ in 0..50 {
                let n = random_direction(&mut rng);
                let ns = rep.dot(&n);
                for sigma_two in rep.helicities() {
                    let xi = helicity_spinor(&rep, sigma_two, &n).unwrap();
                    let res = &ns * &xi.components - &xi.components * c(xi.sigma());
                    assert!(res.norm() < 1e-10);
                    assert!((xi.components.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn helicity_errors() {
        let rep = spin_matrices(2);
        assert_eq!(
            helicity_spinor(&rep, 1, &Vector3::z()),
            Err(Error::InvalidHelicity {
                two_j: 2,
                sigma_two: 1
            })
        );
        assert_eq!(
            helicity_spinor(&rep, 0, &Vector3::zeros()),
            Err(Error::ZeroDirection)
        );
    }

    fn f(text: &str) -> RationalFunc2 {
        parse_expr(text, &Params::new()).unwrap()
    }

    #[test]
    fn scalar_function_examples() {
        let rep = spin_matrices(1);
        let m = scalar_func_of_pdots(&f("2*y"), &Vector3::new(0.0, 0.0, 3.0), &rep).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(3.0), c(0.0), c(0.0), c(-3.0)]);
        assert!(max_abs(&(&m - expected)) < 1e-13);
        // direct route: p·σ = 2 p·S
        let p = Vector3::new(0.3, -1.2, 0.7);
        let spectral = scalar_func_of_pdots(&f("2*y"), &p, &rep).unwrap();
        assert!(max_abs(&(spectral - rep.dot(&p) * c(2.0))) < 1e-13);

        for two_j in 0..=4 {
            let rep = spin_matrices(two_j);
            let m = scalar_func_of_pdots(&f("7/3"), &p, &rep).unwrap();
            assert!(max_abs(&(m - identity(rep.dim()) * c(7.0 / 3.0))) < 1e-13);
            let m = scalar_func_of_pdots(&f("x + 1"), &Vector3::new(0.0, 0.0, 2.0), &rep).unwrap();
            assert!(max_abs(&(m - identity(rep.dim()) * c(5.0))) < 1e-13);
        }
    }

    #[test]
    fn scalar_function_at_zero_momentum() {
        let rep = spin_matrices(2);
        let m = scalar_func_of_pdots(&f("x + y + 2"), &Vector3::zeros(), &rep).unwrap();
        assert!(max_abs(&(m - identity(3) * c(2.0))) < 1e-15);
    }

    #[test]
    fn scalar_function_pole() {
        let rep = spin_matrices(2);
        // y = 0 for sigma = 0
        let err = scalar_func_of_pdots(&f("1/y"), &Vector3::new(0.0, 1.0, 0.0), &rep);
        assert!(matches!(err, Err(Error::Pole { .. })));
    }

    proptest! {
        /// Polynomial in p·S computed by matrix products equals the spectral
        /// route, and rotating p commutes with conjugation by the rotation.
        #[test]
        fn spectral_route_is_basis_independent(two_j in 0u32..=4, px in -2.0..2.0f64,
                                               py in -2.0..2.0f64, pz in -2.0..2.0f64,
                                               theta in 0.0..3.1f64, phi in -3.1..3.1f64) {
            let rep = spin_matrices(two_j);
            let p = Vector3::new(px, py, pz);
            prop_assume!(p.norm() > 1e-3);
            let func = f("x*y - 2*y^2 + 3/4");
            let spectral = scalar_func_of_pdots(&func, &p, &rep).unwrap();
            let ps = rep.dot(&p);
            let direct = &ps * &ps * c(-2.0) + &ps * c(p.norm_squared())
                + identity(rep.dim()) * c(0.75);
            prop_assert!(max_abs(&(&spectral - direct)) < 1e-9);

            let rot = nalgebra::Rotation3::from_axis_angle(&Vector3::z_axis(), phi)
                * nalgebra::Rotation3::from_axis_angle(&Vector3::y_axis(), theta);
            let d = rotation(&rep, theta, phi);
            let rotated = scalar_func_of_pdots(&func, &(rot * p), &rep).unwrap();
            let conjugated = &d * spectral * d.adjoint();
            prop_assert!(max_abs(&(rotated - conjugated)) < 1e-9);
        }
    }
}
