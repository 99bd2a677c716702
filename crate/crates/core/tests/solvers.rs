use machlimit_core::operators::{
    acoustic_propagate, acoustic_velocity, gradient_from_acoustic, heat_propagate, helmholtz_p, helmholtz_q,
    lame_apply, LameParams,
};
use machlimit_core::solvers::{
    matrix_phi, nonlinearity, run, CompressibleParams, CompressibleSolver, CompressibleState, IncompressibleSolver,
    IncompressibleState, PressureLaw, StepPlan, SamplePolicy,
};
use machlimit_core::{Domain, Error, Grid, SpectralField, VectorField};
use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

fn domain(n: usize, l: f64) -> Arc<Domain> {
    Domain::new(Grid::new(2, n, l).unwrap()).unwrap()
}

fn random_state(dom: &Arc<Domain>, seed: u64, kmax: f64, amp: f64) -> CompressibleState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = SpectralField::random_band(dom, &mut rng, 1.0, kmax, 1.0).scale(amp);
    let u = VectorField::from_components(
        (0..2)
            .map(|_| SpectralField::random_band(dom, &mut rng, 1.0, kmax, 1.0).scale(amp))
            .collect(),
    )
    .unwrap();
    CompressibleState::new(a, u).unwrap()
}

fn params(eps: f64) -> CompressibleParams {
    CompressibleParams::new(eps, LameParams::new(0.6, -0.2).unwrap(), PressureLaw::gamma_law(1.4).unwrap())
}

/// `exp(M t)` for `M = [[0, -w], [w, -c]]` from its eigenvalues.
fn closed_form_exp(w: f64, c: f64, t: f64) -> Matrix2<f64> {
    let s = -0.5 * c;
    let delta = Complex64::new(0.25 * c * c - w * w, 0.0).sqrt();
    let (ch, sh) = if delta.norm() * t < 1e-8 {
        (Complex64::new(s * t, 0.0).exp(), Complex64::new(t * (s * t).exp(), 0.0))
    } else {
        let ep = ((s + delta) * t).exp();
        let em = ((s - delta) * t).exp();
        ((ep + em) * 0.5, (ep - em) / (delta * 2.0))
    };
    let (ch, sh) = (ch.re, sh.re);
    Matrix2::new(ch + sh * (0.0 - s), -w * sh, w * sh, ch + sh * (-c - s))
}

#[test]
fn augmented_exponential_matches_eigen_formula() {
    for &(w, c) in &[(3.0, 0.5), (0.2, 5.0), (1.0, 2.0), (40.0, 0.0)] {
        let m = Matrix2::new(0.0, -w, w, -c);
        let phi = matrix_phi(&(m * 0.3));
        let exact = closed_form_exp(w, c, 0.3);
        assert!((phi.e - exact).abs().max() < 1e-12, "{w} {c}");
        let a = m * 0.3;
        let inv = a.try_inverse().unwrap();
        let phi1 = inv * (exact - Matrix2::identity());
        let phi2 = inv * inv * (exact - Matrix2::identity() - a);
        assert!((phi.phi1 - phi1).abs().max() < 1e-11);
        assert!((phi.phi2 - phi2).abs().max() < 1e-10);
    }
}

#[test]
fn linear_flow_matches_per_mode_exponential() {
    let dom = domain(32, 2.0 * PI);
    let state = random_state(&dom, 4, 14.0, 1.0);
    for &eps in &[1.0, 0.1, 0.01] {
        let p = params(eps).linear();
        let nu = p.lame.nu();
        let mu = p.lame.mu;
        let solver = CompressibleSolver::new(&dom, p, 0.01).unwrap();
        let out = run(&solver, state.clone(), 100, 100, |_| Ok(())).unwrap();
        let v0 = acoustic_velocity(&state.u);
        let pu0 = helmholtz_p(&state.u);
        let mut a_ref = state.a.clone();
        let mut v_ref = v0.clone();
        let mut pu_ref = pu0.clone();
        for idx in 1..dom.len() {
            let r = dom.xi_norm(idx);
            let e = closed_form_exp(r / eps, nu * r * r, 1.0);
            let (a, v) = (state.a.coeffs()[idx], v0.coeffs()[idx]);
            a_ref.coeffs_mut()[idx] = a * e[(0, 0)] + v * e[(0, 1)];
            v_ref.coeffs_mut()[idx] = a * e[(1, 0)] + v * e[(1, 1)];
            let damp = (-mu * r * r).exp();
            for c in pu_ref.comps_mut() {
                c.coeffs_mut()[idx] *= damp;
            }
        }
        let u_ref = &pu_ref + &gradient_from_acoustic(&v_ref);
        assert!(out.a.max_coeff_diff(&a_ref) < 1e-8, "eps {eps}: {}", out.a.max_coeff_diff(&a_ref));
        assert!(out.u.max_coeff_diff(&u_ref) < 1e-8, "eps {eps}: {}", out.u.max_coeff_diff(&u_ref));
        assert!((out.t - 1.0).abs() < 1e-12);
    }
}

#[test]
fn inviscid_linear_flow_is_acoustic_rotation() {
    let dom = domain(32, 2.0 * PI);
    let state = random_state(&dom, 5, 14.0, 1.0);
    let eps = 0.1;
    let p = CompressibleParams::new(eps, LameParams::inviscid(), PressureLaw::gamma_law(1.4).unwrap()).linear();
    let solver = CompressibleSolver::new(&dom, p, 0.01).unwrap();
    let v0 = acoustic_velocity(&state.u);
    let mut worst: f64 = 0.0;
    run(&solver, state.clone(), 100, 10, |s| {
        let (a, v) = acoustic_propagate(&state.a, &v0, s.t / eps).unwrap();
        worst = worst.max(s.a.max_coeff_diff(&a));
        worst = worst.max(acoustic_velocity(&s.u).max_coeff_diff(&v));
        worst = worst.max(helmholtz_p(&s.u).max_coeff_diff(&helmholtz_p(&state.u)));
        Ok(())
    })
    .unwrap();
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn solenoidal_part_decouples_as_heat_flow() {
    let dom = domain(32, 2.0 * PI);
    let state = random_state(&dom, 6, 14.0, 1.0);
    let p = params(0.05).linear();
    let mu = p.lame.mu;
    let solver = CompressibleSolver::new(&dom, p, 0.02).unwrap();
    let out = run(&solver, state.clone(), 50, 50, |_| Ok(())).unwrap();
    let pu = helmholtz_p(&state.u);
    let expect = VectorField::from_components(
        pu.comps().iter().map(|c| heat_propagate(c, 1.0, mu).unwrap()).collect(),
    )
    .unwrap();
    assert!(helmholtz_p(&out.u).max_coeff_diff(&expect) < 1e-10);
    assert_eq!(out.u.mean(), state.u.mean());
}

#[test]
fn zero_data_stays_zero() {
    let dom = domain(16, 2.0 * PI);
    let state = CompressibleState::new(SpectralField::zeros(&dom), VectorField::zeros(&dom)).unwrap();
    let solver = CompressibleSolver::new(&dom, params(0.1), 0.01).unwrap();
    let out = run(&solver, state, 20, 5, |_| Ok(())).unwrap();
    assert!(out.a.is_zero() && out.u.max_coeff() == 0.0);
}

#[test]
fn nonlinearity_of_solenoidal_flow_is_convection() {
    let dom = domain(32, 2.0 * PI);
    let s = random_state(&dom, 7, 6.0, 1.0);
    let w = helmholtz_p(&s.u);
    let state = CompressibleState::new(SpectralField::zeros(&dom), w.clone()).unwrap();
    let (f, g) = nonlinearity(&state, &params(0.1)).unwrap();
    assert!(f.max_coeff() < 1e-15);
    let conv: Vec<SpectralField> = (0..2)
        .map(|i| {
            let mut acc = SpectralField::zeros(&dom);
            for j in 0..2 {
                acc += &w.comp(j).product(&w.comp(i).partial(j)).unwrap();
            }
            -&acc
        })
        .collect();
    let conv = VectorField::from_components(conv).unwrap();
    assert!(g.max_coeff_diff(&conv) < 1e-13);
}

#[test]
fn single_mode_nonlinearity_matches_trigonometric_products() {
    let dom = domain(32, 2.0 * PI);
    let a = SpectralField::from_fn(&dom, |x| 0.5 * x[0].cos());
    let u0 = SpectralField::from_fn(&dom, |x| (2.0 * x[0]).sin());
    let u = VectorField::from_components(vec![u0, SpectralField::zeros(&dom)]).unwrap();
    let state = CompressibleState::new(a, u).unwrap();
    let (f, _) = nonlinearity(&state, &params(0.1)).unwrap();
    // a u = 0.25 (sin 3x + sin x), so -d/dx(a u) = -0.25 (3 cos 3x + cos x).
    let expect = SpectralField::from_fn(&dom, |x| -0.25 * (3.0 * (3.0 * x[0]).cos() + x[0].cos()));
    assert!(f.max_coeff_diff(&expect) < 1e-15);
}

fn rk4_reference(state: &CompressibleState, p: &CompressibleParams, dt: f64, steps: usize) -> CompressibleState {
    let rhs = |s: &CompressibleState| {
        let (f, g) = nonlinearity(s, p).unwrap();
        let da = &f - &s.u.divergence().scale(1.0 / p.eps);
        let lu = lame_apply(&s.u, &p.lame);
        let grad = s.a.gradient().scale(1.0 / p.eps);
        let du = &(&lu - &grad) + &g;
        (da, du)
    };
    let shift = |s: &CompressibleState, h: f64, k: &(SpectralField, VectorField)| {
        let mut a = s.a.clone();
        a.axpy(h, &k.0);
        let mut u = s.u.clone();
        u.axpy(h, &k.1);
        CompressibleState { a, u, t: s.t + h }
    };
    let mut s = state.clone();
    for _ in 0..steps {
        let k1 = rhs(&s);
        let k2 = rhs(&shift(&s, 0.5 * dt, &k1));
        let k3 = rhs(&shift(&s, 0.5 * dt, &k2));
        let k4 = rhs(&shift(&s, dt, &k3));
        let mut a = s.a.clone();
        let mut u = s.u.clone();
        for (w, k) in [(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)] {
            a.axpy(w * dt / 6.0, &k.0);
            u.axpy(w * dt / 6.0, &k.1);
        }
        s = CompressibleState { a, u, t: s.t + dt };
    }
    s
}

#[test]
fn second_order_against_rk4_reference() {
    let dom = domain(16, 2.0 * PI);
    let state = random_state(&dom, 8, 4.0, 0.05);
    assert!(state.min_density(0.5) > 0.5);
    let p = params(0.5);
    let t_end = 0.2;
    let reference = rk4_reference(&state, &p, t_end / 400.0, 400);
    let err = |steps: usize| {
        let solver = CompressibleSolver::new(&dom, p.clone(), t_end / steps as f64).unwrap();
        let out = run(&solver, state.clone(), steps, steps, |_| Ok(())).unwrap();
        out.a.max_coeff_diff(&reference.a).max(out.u.max_coeff_diff(&reference.u))
    };
    let e1 = err(10);
    let e2 = err(20);
    let e3 = err(40);
    let order1 = (e1 / e2).log2();
    let order2 = (e2 / e3).log2();
    assert!(order1 > 1.7 && order1 < 2.5, "{e1} {e2} {order1}");
    assert!(order2 > 1.7 && order2 < 2.5, "{e2} {e3} {order2}");
}

#[test]
fn density_mean_is_conserved() {
    let dom = domain(32, 2.0 * PI);
    let mut state = random_state(&dom, 9, 8.0, 0.5);
    state.a.coeffs_mut()[0] = Complex64::new(0.1, 0.0);
    let p = params(0.2);
    let dt = p.default_dt(&state);
    let solver = CompressibleSolver::new(&dom, p, dt).unwrap();
    let m0 = state.a.mean();
    let mut drift: f64 = 0.0;
    let out = run(&solver, state, 100, 10, |s| {
        drift = drift.max((s.a.mean() - m0).abs());
        Ok(())
    })
    .unwrap();
    assert!(drift <= 1e-12 * out.t.max(1.0), "{drift}");
}

#[test]
fn dilated_problem_reproduces_dilated_solution() {
    let lam = 2.0;
    let dom = domain(32, 2.0 * PI);
    let small = domain(32, PI);
    let state = random_state(&dom, 10, 8.0, 0.4);
    let p = params(0.2);
    let dt = 0.004;
    let solver = CompressibleSolver::new(&dom, p.clone(), dt).unwrap();
    let out = run(&solver, state.clone(), 50, 50, |_| Ok(())).unwrap();

    let lift = |f: &SpectralField| SpectralField::from_coeffs(&small, f.coeffs().to_vec()).unwrap().scale(lam);
    let dil = CompressibleState::new(
        lift(&state.a),
        VectorField::from_components(state.u.comps().iter().map(lift).collect()).unwrap(),
    )
    .unwrap();
    let mut pd = p.clone();
    pd.eps /= lam;
    let solver = CompressibleSolver::new(&small, pd, dt / (lam * lam)).unwrap();
    let dout = run(&solver, dil, 50, 50, |_| Ok(())).unwrap();
    let scale = out.a.max_coeff().max(out.u.max_coeff());
    let da = lift(&out.a).max_coeff_diff(&dout.a);
    let du = VectorField::from_components(out.u.comps().iter().map(lift).collect())
        .unwrap()
        .max_coeff_diff(&dout.u);
    assert!(da.max(du) < 1e-12 * scale, "{da} {du}");
}

#[test]
fn runs_are_bitwise_reproducible() {
    let dom = domain(32, 2.0 * PI);
    let state = random_state(&dom, 11, 8.0, 0.5);
    let solver = CompressibleSolver::new(&dom, params(0.1), 0.002).unwrap();
    let a = run(&solver, state.clone(), 30, 30, |_| Ok(())).unwrap();
    let b = run(&solver, state, 30, 30, |_| Ok(())).unwrap();
    assert_eq!(a.a.coeffs(), b.a.coeffs());
    for (x, y) in a.u.comps().iter().zip(b.u.comps()) {
        assert_eq!(x.coeffs(), y.coeffs());
    }
}

#[test]
fn oversized_step_is_rejected() {
    let dom = domain(32, 2.0 * PI);
    let state = random_state(&dom, 12, 8.0, 2.0);
    let solver = CompressibleSolver::new(&dom, params(0.1), 1.0).unwrap();
    assert!(matches!(solver.step(&state), Err(Error::ReduceDt(_))));
}

#[test]
fn taylor_green_is_reproduced() {
    let dom = domain(64, 2.0 * PI);
    let mu = 0.1;
    let tg = |t: f64| {
        let d = (-2.0 * mu * t).exp();
        VectorField::from_components(vec![
            SpectralField::from_fn(&dom, |x| d * x[0].sin() * x[1].cos()),
            SpectralField::from_fn(&dom, |x| -d * x[0].cos() * x[1].sin()),
        ])
        .unwrap()
    };
    let init = IncompressibleState::new(tg(0.0));
    assert!(machlimit_core::solvers::convection(&init.w).unwrap().max_coeff() < 1e-15);
    let solver = IncompressibleSolver::new(&dom, mu, 0.01).unwrap();
    let mut err: f64 = 0.0;
    let mut div: f64 = 0.0;
    let mut energy = f64::INFINITY;
    run(&solver, init, 100, 1, |s| {
        err = err.max(s.w.max_coeff_diff(&tg(s.t)));
        div = div.max(s.w.divergence().max_coeff());
        let e = s.w.l2_norm();
        assert!(e <= energy * (1.0 + 1e-14));
        energy = e;
        Ok(())
    })
    .unwrap();
    assert!(err < 1e-8, "{err}");
    assert!(div < 1e-10);
}

#[test]
fn incompressible_energy_decays_for_random_data() {
    let dom = domain(32, 2.0 * PI);
    let s = random_state(&dom, 13, 6.0, 0.5);
    let init = IncompressibleState::new(s.u);
    assert!(helmholtz_q(&init.w).max_coeff() < 1e-15);
    let solver = IncompressibleSolver::new(&dom, 0.05, 0.005).unwrap();
    let mut last = f64::INFINITY;
    run(&solver, init, 40, 1, |s| {
        let e = s.w.l2_norm();
        assert!(e <= last * (1.0 + 1e-12));
        last = e;
        Ok(())
    })
    .unwrap();
}

#[test]
fn step_plan_honours_sampling_interval() {
    let plan = StepPlan::new(1.0, 0.03, SamplePolicy::Interval(0.1)).unwrap();
    assert_eq!(plan.stride, 4);
    assert_eq!(plan.steps, 40);
    assert!((plan.dt - 0.025).abs() < 1e-15);
    assert!(StepPlan::new(1.0, 0.03, SamplePolicy::Interval(0.3)).is_err());
    let plan = StepPlan::new(1.0, 0.3, SamplePolicy::Stride(2)).unwrap();
    assert_eq!(plan.steps, 4);
}
