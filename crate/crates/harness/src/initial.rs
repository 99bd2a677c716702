use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use machlimit_core::lp_spectral::{Domain, SpectralField, VectorField};
use machlimit_core::operators::helmholtz_p;

use crate::config::{InitSpec, Preparation};
use crate::error::{HarnessError, HarnessResult};

/// `(a0, u0)` on `domain`. Random data depends only on `seed`, never on the
/// Mach number, so every member of a sweep starts from the same state.
pub fn gen_initial_data(spec: &InitSpec, domain: &Arc<Domain>, seed: u64) -> HarnessResult<(SpectralField, VectorField)> {
    let d = domain.d();
    match *spec {
        InitSpec::RandomBand {
            k_min,
            k_max,
            slope,
            amplitude,
            preparation,
        } => {
            if !(k_min >= 1.0) || !(k_max >= k_min) {
                return Err(HarnessError::Config(format!("band [{k_min}, {k_max}] must satisfy 1 <= k_min <= k_max")));
            }
            if k_max > domain.grid().dealias_cutoff() as f64 {
                return Err(HarnessError::Config(format!(
                    "k_max = {k_max} exceeds the dealiasing radius {}",
                    domain.grid().dealias_cutoff()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = SpectralField::random_band(domain, &mut rng, k_min, k_max, slope);
            let comps = (0..d)
                .map(|_| SpectralField::random_band(domain, &mut rng, k_min, k_max, slope))
                .collect();
            let mut u = VectorField::from_components(comps)?;
            let a = match preparation {
                Preparation::Well => {
                    u = helmholtz_p(&u);
                    SpectralField::zeros(domain)
                }
                Preparation::Ill => normalized(&a, amplitude),
            };
            let umax = u.max_magnitude();
            if umax == 0.0 {
                return Err(HarnessError::Config(format!("band [{k_min}, {k_max}] holds no modes")));
            }
            Ok((a, u.scale(amplitude / umax)))
        }
        InitSpec::TaylorGreen { amplitude } => {
            if d < 2 {
                return Err(HarnessError::Config("taylor_green needs d >= 2".into()));
            }
            let k = domain.grid().wavenumber_unit();
            let a = SpectralField::zeros(domain);
            let u1 = SpectralField::from_fn(domain, |x| {
                let z = if d == 3 { (k * x[2]).cos() } else { 1.0 };
                amplitude * (k * x[0]).sin() * (k * x[1]).cos() * z
            });
            let u2 = SpectralField::from_fn(domain, |x| {
                let z = if d == 3 { (k * x[2]).cos() } else { 1.0 };
                -amplitude * (k * x[0]).cos() * (k * x[1]).sin() * z
            });
            let mut comps = vec![u1, u2];
            if d == 3 {
                comps.push(SpectralField::zeros(domain));
            }
            Ok((a, VectorField::from_components(comps)?))
        }
        InitSpec::RemarkExample { m, amplitude } => {
            if d != 3 {
                return Err(HarnessError::Config(format!("remark_example needs d = 3, got {d}")));
            }
            let unit = domain.grid().wavenumber_unit();
            let km = (m / unit).round();
            if !(km >= 1.0) || (km * unit - m).abs() > 1e-9 * m.abs().max(1.0) {
                return Err(HarnessError::Config(format!(
                    "m = {m} is not a positive multiple of the wavenumber unit {unit}"
                )));
            }
            let km = km as i64;
            if km > domain.grid().dealias_cutoff() {
                return Err(HarnessError::Config(format!(
                    "m = {m} lies beyond the dealiasing radius {}",
                    domain.grid().dealias_cutoff() as f64 * unit
                )));
            }
            // phi = cos(k x1) + cos(k x2) at the lowest mode k, so
            // (-d2 phi, d1 phi) = k (sin(k x2), -sin(k x1)).
            let c = amplitude * 0.25;
            let u1 = SpectralField::from_modes(
                domain,
                &[([0, 1, km], Complex64::new(-c, 0.0)), ([0, 1, -km], Complex64::new(c, 0.0))],
            )?;
            let u2 = SpectralField::from_modes(
                domain,
                &[([1, 0, km], Complex64::new(c, 0.0)), ([1, 0, -km], Complex64::new(-c, 0.0))],
            )?;
            let u = VectorField::from_components(vec![u1, u2, SpectralField::zeros(domain)])?;
            Ok((SpectralField::zeros(domain), u))
        }
    }
}

fn normalized(f: &SpectralField, amplitude: f64) -> SpectralField {
    let m = f.to_physical().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        f.clone()
    } else {
        f.scale(amplitude / m)
    }
}
