use std::f64::consts::PI;

use alphastab::arnold::{build_regularization_example, DomainSpec};
use alphastab::domain::*;
use alphastab::evolve::*;
use alphastab::modal::{assemble_modal, solve_modal};
use alphastab::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cos_channel(n: usize) -> SteadyShearState<f64> {
    let g = Grid1D::chebyshev(0.0, 2.0 * PI, n).unwrap();
    build_steady_shear(ShearSource::FromV(Profile1D::from_descriptor(&g, Descriptor::cos(1.0))), 0.1, 0.0).unwrap()
}

fn couette(n: usize) -> SteadyShearState<f64> {
    let g = Grid1D::chebyshev(0.0, 1.0, n).unwrap();
    build_steady_shear(ShearSource::FromU(Profile1D::from_descriptor(&g, Descriptor::Polynomial(vec![0.0, 1.0]))), 0.1, 0.0).unwrap()
}

fn random_q(m: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

#[test]
fn zero_perturbation_stays_zero() {
    let ch = LinearChannel::new(&cos_channel(48), 0.5, 48).unwrap();
    let s0 = ch.state_from_q(vec![Complex64::default(); 46], 0.0).unwrap();
    let (s, hist) = ch.run(&s0, ch.cfl_limit(), 5.0).unwrap();
    assert!(s.q.iter().all(|z| *z == Complex64::default()));
    assert!(hist.iter().all(|&(_, n)| n == 0.0));
}

#[test]
fn eigenfunction_grows_at_the_modal_rate() {
    let (k, n) = (0.5, 96);
    let steady = cos_channel(n);
    let spectrum = solve_modal(&assemble_modal(&steady, k, n).unwrap()).unwrap();
    let lead = spectrum.leading().unwrap();
    let sigma = k * lead.c.im;
    assert!(sigma > 0.1);
    let ch = LinearChannel::new(&steady, k, n).unwrap();
    let s0 = ch.state_from_phi(lead.phi.values(), 0.0).unwrap();
    let m = measure_growth_rate(&ch, &s0, ch.cfl_limit(), 3.0 / sigma).unwrap();
    assert!((m.rate - sigma).abs() < 0.02 * sigma, "{} vs {sigma}", m.rate);
}

#[test]
fn random_perturbation_selects_the_unstable_mode() {
    let (k, n) = (0.5, 96);
    let steady = cos_channel(n);
    let sigma = k * solve_modal(&assemble_modal(&steady, k, n).unwrap()).unwrap().leading().unwrap().c.im;
    let ch = LinearChannel::new(&steady, k, n).unwrap();
    let s0 = ch.state_from_q(random_q(n - 2, 3), 0.0).unwrap();
    let m = measure_growth_rate(&ch, &s0, ch.cfl_limit(), 10.0 / sigma).unwrap();
    assert!((m.rate - sigma).abs() < 0.02 * sigma, "{} vs {sigma}", m.rate);
}

#[test]
fn couette_perturbations_do_not_grow() {
    let ch = LinearChannel::new(&couette(64), 1.0, 64).unwrap();
    for seed in 0..3 {
        let s0 = ch.state_from_q(random_q(62, seed), 0.0).unwrap();
        let (_, hist) = ch.run(&s0, ch.cfl_limit(), 50.0).unwrap();
        let n0 = hist[0].1;
        let sup = hist.iter().map(|&(_, n)| n / n0).fold(0.0, f64::max);
        assert!(sup <= 10.0, "{sup}");
    }
}

#[test]
fn linear_step_respects_cfl() {
    let ch = LinearChannel::new(&cos_channel(48), 0.5, 48).unwrap();
    assert!((ch.cfl_limit() - 1.0).abs() < 1e-6);
    let s0 = ch.state_from_q(random_q(46, 1), 0.0).unwrap();
    assert!(matches!(ch.step(&s0, 1.5), Err(Error::CflViolation { .. })));
    assert!(matches!(ch.step(&s0, -0.1), Err(Error::CflViolation { .. })));
}

#[test]
fn free_function_matches_stepper() {
    let steady = cos_channel(48);
    let ch = LinearChannel::new(&steady, 0.5, 48).unwrap();
    let s0 = ch.state_from_q(random_q(46, 2), 0.0).unwrap();
    let a = ch.step(&s0, 0.3).unwrap();
    let b = step_linear_channel(&s0, &steady, 0.3).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.phi.len(), 48);
    assert_eq!(a.phi[0], Complex64::default());
}

fn torus_random(n: usize, alpha: f64, seed: u64, wmax: f64) -> TorusState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let st = TorusState::random(TorusGrid::square(n).unwrap(), alpha, 4, &mut rng).unwrap();
    let m = st.omega().iter().fold(0.0f64, |a, w| a.max(w.abs()));
    st.scaled(wmax / m)
}

#[test]
fn spectral_roundtrip_is_exact() {
    let st = torus_random(32, 0.3, 1, 1.0);
    let back = torus_state_from_streamfunction(*st.grid(), &st.phi_hat(), 0.3).unwrap();
    let scale = st.omega_hat().iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (a, b) in st.omega_hat().iter().zip(back.omega_hat()) {
        assert!((a - b).norm() <= 1e-13 * scale);
    }
}

#[test]
fn parallel_flow_is_a_fixed_point() {
    let g = TorusGrid::square(32).unwrap();
    let st = TorusState::from_streamfunction_fn(g, 0.2, |_, y| y.sin() + 0.5 * (3.0 * y).cos()).unwrap();
    let dt = 0.4 * torus_cfl_limit(&st) / TORUS_CFL;
    let one = step_torus_nonlinear(&st, dt).unwrap();
    let scale = st.omega().iter().fold(0.0f64, |a, w| a.max(w.abs()));
    let diff = |s: &TorusState| s.omega().iter().zip(st.omega()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(diff(&one) <= 1e-12 * scale);
    let mut stepper = TorusStepper::new(g, 0.2);
    let mut s = st.clone();
    for _ in 0..1000 {
        s = stepper.step(&s, dt).unwrap();
    }
    assert!(diff(&s) <= 1e-10);
}

/// Largest relative excursion of each invariant over the run.
fn drifts(run: &TorusRun) -> [f64; 5] {
    let a = run.ledger[0];
    let max_dev = |f: &dyn Fn(&InvariantLedger) -> f64, scale: f64| run.ledger.iter().map(|r| (f(r) - f(&a)).abs()).fold(0.0, f64::max) / scale;
    let w = run.state.omega();
    let l1 = w.iter().map(|x| x.abs()).sum::<f64>() / w.len() as f64 * run.state.grid().area();
    let sin_l1 = w.iter().map(|x| x.sin().abs()).sum::<f64>() / w.len() as f64 * run.state.grid().area();
    let [u1, _] = run.state.unfiltered_velocity_hat();
    let u_scale = (u1.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt() / w.len() as f64 * run.state.grid().area();
    [
        max_dev(&|r| r.h, a.h),
        max_dev(&|r| r.enstrophy, a.enstrophy),
        max_dev(&|r| r.omega_int, l1),
        max_dev(&|r| r.casimir, sin_l1),
        max_dev(&|r| r.mx, u_scale),
    ]
}

#[test]
fn invariants_are_conserved_and_converge() {
    let st = torus_random(64, 0.25, 7, 0.25);
    let opts = TorusRunOptions { t_end: 10.0, ..TorusRunOptions::default() };
    let coarse = evolve_torus(&st, None, &opts).unwrap();
    assert!(coarse.failure.is_none());
    let fine = evolve_torus(&st, None, &TorusRunOptions { dt: Some(coarse.dt / 2.0), ..opts }).unwrap();
    let (dc, df) = (drifts(&coarse), drifts(&fine));
    for i in 0..5 {
        assert!(dc[i] <= 1e-6, "{i}: {}", dc[i]);
        assert!(df[i] <= 1e-12 || dc[i] >= 8.0 * df[i], "{i}: {} -> {}", dc[i], df[i]);
    }
    assert!(dc[4] <= 1e-10);
}

#[test]
fn classical_euler_conserves_energy_and_enstrophy() {
    let st = torus_random(32, 0.0, 3, 0.25);
    let run = evolve_torus(&st, None, &TorusRunOptions { t_end: 5.0, ..TorusRunOptions::default() }).unwrap();
    let d = drifts(&run);
    assert!(d[0] <= 1e-7 && d[1] <= 1e-7, "{d:?}");
}

#[test]
fn energy_matches_direct_quadrature() {
    let g = TorusGrid::square(32).unwrap();
    for alpha in [0.0, 0.3, 1.0] {
        let st = TorusState::from_streamfunction_fn(g, alpha, |_, y| y.sin()).unwrap();
        let inv = compute_invariants(&st, None, &Casimir::Sin, 0.0);
        let exact = 0.5 * (1.0 + alpha * alpha) * (2.0 * PI).powi(2) * 0.5;
        // direct: 1/2 sum v . u dA with v = cos y, u = (1 + a^2) cos y sampled
        let direct: f64 = (0..g.ny).map(|iy| (1.0 + alpha * alpha) * g.y(iy).cos().powi(2)).sum::<f64>() * g.nx as f64 * g.dx() * g.dy() * 0.5;
        assert!((inv.h - exact).abs() < 1e-10 && (direct - exact).abs() < 1e-10);
        assert!(inv.mx.abs() < 1e-14);
    }
}

#[test]
fn zero_field_has_zero_invariants() {
    let st = TorusState::zero(TorusGrid::square(16).unwrap(), 0.5);
    let inv = compute_invariants(&st, Some(&st), &Casimir::Polynomial { coefficients: vec![0.0, 1.0, 1.0] }, 0.0);
    assert_eq!((inv.h, inv.hc, inv.omega_int, inv.enstrophy, inv.casimir, inv.mx), (0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
    assert_eq!(inv.stability_norm, Some(0.0));
}

#[test]
fn quadratic_casimir_equals_enstrophy() {
    let st = torus_random(32, 0.2, 5, 1.0);
    let inv = compute_invariants(&st, None, &Casimir::Polynomial { coefficients: vec![0.0, 0.0, 1.0] }, 0.0);
    assert!((inv.casimir - inv.enstrophy).abs() < 1e-12 * inv.enstrophy);
}

#[test]
fn casimir_descriptors() {
    assert!(Casimir::Polynomial { coefficients: vec![0.0; 6] }.validate().is_err());
    let t = Casimir::Tabulated { omega: vec![0.0, 1.0, 2.0], values: vec![0.0, 1.0, 4.0] };
    t.validate().unwrap();
    assert_eq!(t.eval(0.5), 0.5);
    assert_eq!(t.eval(1.5), 2.5);
    assert_eq!(t.eval(3.0), 7.0);
    assert!(Casimir::Tabulated { omega: vec![1.0, 0.0], values: vec![0.0, 0.0] }.validate().is_err());
}

#[test]
fn stepper_rejects_large_steps() {
    let st = torus_random(16, 0.2, 1, 1.0);
    let limit = torus_cfl_limit(&st);
    assert!(matches!(step_torus_nonlinear(&st, 2.0 * limit), Err(Error::CflViolation { .. })));
    let opts = TorusRunOptions { dt: Some(2.0 * limit), ..TorusRunOptions::default() };
    assert!(matches!(evolve_torus(&st, None, &opts), Err(Error::CflViolation { .. })));
}

#[test]
fn overflow_aborts_the_run() {
    let st = torus_random(16, 0.2, 1, 1.0).scaled(1e155);
    let dt = 0.4 * torus_cfl_limit(&st) / TORUS_CFL;
    let run = evolve_torus(&st, None, &TorusRunOptions { t_end: 10.0 * dt, ..TorusRunOptions::default() }).unwrap();
    assert!(matches!(run.failure, Some(Error::NonFinite { .. })), "{:?}", run.failure);
    assert_eq!(run.steps, 0);
    assert_eq!(run.ledger.len(), 1);
}

#[test]
fn experiment_without_perturbation() {
    let st = TorusState::from_streamfunction_fn(TorusGrid::square(16).unwrap(), 0.2, |_, y| y.sin()).unwrap();
    let r = stability_norm_experiment(&st, 0.0, 1.0, 1, None).unwrap();
    assert_eq!(r.label, ExperimentLabel::NoPerturbation);
    assert_eq!(r.ratios, vec![1.0]);
}

#[test]
fn sinusoidal_experiment_is_exploratory() {
    let st = TorusState::from_streamfunction_fn(TorusGrid::square(32).unwrap(), 0.2, |_, y| (2.0 * y).sin()).unwrap();
    let r = stability_norm_experiment(&st, 0.01, 2.0, 1, Some(10.0)).unwrap();
    assert_eq!(r.label, ExperimentLabel::Exploratory);
    assert_eq!(r.within_bound, None);
    assert!(r.failure.is_none());
    assert!(r.ratios.len() > 2 && r.ratios.iter().all(|x| x.is_finite()));
    assert!((r.ratios[0] - 1.0).abs() < 1e-12);
}

#[test]
fn arnold_stable_channel_keeps_the_norm_bounded() {
    let spec = DomainSpec::ChannelInterval { a1: 0.0, a2: PI, lx: 2.0 * PI };
    let steady = build_regularization_example(0.5, &spec, 48).unwrap();
    let ch = LinearChannel::new(&steady, 1.0, 48).unwrap();
    let r = linear_stability_norm_experiment(&ch, &spec, 1.0, 50.0, 4, Some(10.0)).unwrap();
    assert_eq!(r.label, ExperimentLabel::Verified);
    assert_eq!(r.within_bound, Some(true), "sup ratio {}", r.sup_ratio);
}
