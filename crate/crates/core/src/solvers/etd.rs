//! Exponential integrator coefficients `exp(A)`, `phi1(A)`, `phi2(A)` with
//! `phi1(A) = A^-1 (e^A - I)` and `phi2(A) = A^-2 (e^A - I - A)`.

use nalgebra::{Matrix2, Matrix6};

/// Scalar `(e^z, phi1(z), phi2(z))`; Taylor series near zero.
pub fn scalar_phi(z: f64) -> (f64, f64, f64) {
    if z.abs() < 0.1 {
        let mut phi1 = 0.0;
        let mut phi2 = 0.0;
        // term_k = z^k / (k + 2)!
        let mut term1 = 1.0;
        let mut term2 = 0.5;
        for k in 0..16 {
            phi1 += term1;
            phi2 += term2;
            term1 *= z / (k as f64 + 2.0);
            term2 *= z / (k as f64 + 3.0);
        }
        (z.exp(), phi1, phi2)
    } else {
        let e = z.exp();
        (e, (e - 1.0) / z, (e - 1.0 - z) / (z * z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixPhi {
    pub e: Matrix2<f64>,
    pub phi1: Matrix2<f64>,
    pub phi2: Matrix2<f64>,
}

/// `exp`, `phi1`, `phi2` of a 2x2 matrix, read off the exponential of the
/// block matrix `[[A, I, 0], [0, 0, I], [0, 0, 0]]`.
pub fn matrix_phi(a: &Matrix2<f64>) -> MatrixPhi {
    let mut big = Matrix6::<f64>::zeros();
    big.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    big.fixed_view_mut::<2, 2>(0, 2).copy_from(&Matrix2::identity());
    big.fixed_view_mut::<2, 2>(2, 4).copy_from(&Matrix2::identity());
    let ex = big.exp();
    MatrixPhi {
        e: ex.fixed_view::<2, 2>(0, 0).into_owned(),
        phi1: ex.fixed_view::<2, 2>(0, 2).into_owned(),
        phi2: ex.fixed_view::<2, 2>(0, 4).into_owned(),
    }
}

/// Per mode generator of `(a, v)`: `[[0, -|xi|/eps], [|xi|/eps, -nu |xi|^2]]`.
pub fn acoustic_generator(xi_norm: f64, eps: f64, nu: f64) -> Matrix2<f64> {
    let w = xi_norm / eps;
    Matrix2::new(0.0, -w, w, -nu * xi_norm * xi_norm)
}
