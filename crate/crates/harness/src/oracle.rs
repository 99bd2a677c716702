use num_complex::Complex64;

use machlimit_core::lp_spectral::{SpectralField, VectorField};
use machlimit_core::operators::{
    acoustic_velocity, gradient_from_acoustic, heat_propagate, helmholtz_p, LameParams,
};
use machlimit_core::Result;

/// `exp(t [[0, -w], [w, -c]])` from the eigenvalues `-c/2 +- sqrt(c^2/4 - w^2)`.
pub fn damped_rotation(w: f64, c: f64, t: f64) -> [[f64; 2]; 2] {
    let tau = -0.5 * c;
    let delta = Complex64::new(0.25 * c * c - w * w, 0.0).sqrt();
    let x = delta * t;
    let cosh = x.cosh().re;
    let sinhc = if x.norm() < 1e-8 {
        t
    } else {
        (x.sinh() / delta).re
    };
    let e = (tau * t).exp();
    [
        [e * (cosh - tau * sinhc), -e * w * sinhc],
        [e * w * sinhc, e * (cosh + (-c - tau) * sinhc)],
    ]
}

/// The linearized flow from `(a0, u0)` to time `t`: each mode of
/// `(a, |grad|^{-1} div Qu)` by [`damped_rotation`] with `w = |xi|/eps`,
/// `c = (2mu + lambda)|xi|^2`, and `Pu` by the heat flow with `mu`.
pub fn linear_propagate(
    a0: &SpectralField,
    u0: &VectorField,
    t: f64,
    eps: f64,
    lame: &LameParams,
) -> Result<(SpectralField, VectorField)> {
    let dom = a0.domain().clone();
    let v0 = acoustic_velocity(u0);
    let nu = lame.nu();
    let mut a = a0.clone();
    let mut v = v0.clone();
    {
        let (ca, cv) = (a.coeffs_mut(), v.coeffs_mut());
        for idx in 1..dom.len() {
            let k = dom.xi_norm(idx);
            let m = damped_rotation(k / eps, nu * k * k, t);
            let (x, y) = (ca[idx], cv[idx]);
            ca[idx] = x * m[0][0] + y * m[0][1];
            cv[idx] = x * m[1][0] + y * m[1][1];
        }
    }
    let pu = helmholtz_p(u0).map(|c| heat_propagate(c, t, lame.mu).expect("t >= 0"));
    let mut u = &pu + &gradient_from_acoustic(&v);
    let mean = u0.mean();
    for (comp, m) in u.comps_mut().iter_mut().zip(mean) {
        comp.coeffs_mut()[0] = Complex64::new(m, 0.0);
    }
    Ok((a, u))
}
