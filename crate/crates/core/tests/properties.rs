use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_relative_eq;
use magnetomech::budget::{freq_noise_heating, gas_damping, position_noise_heating};
use magnetomech::coupling::{
    eta, flux_derivative, lc_coupling, qubit_splitting, LCParams, PickupCoil, QubitParams,
};
use magnetomech::cooling::{heating_cooling_coeffs, phonon_trajectory, steady_phonons};
use magnetomech::frames::{
    build_hmm, build_jc_effective, dressed_rates, effective_frame, DriveParams,
};
use magnetomech::lindblad::operators::{hermiticity_error, on_oscillator, on_qubit, sigma_minus, sigma_z};
use magnetomech::lindblad::{
    evolve, fock_operators, uniform_times, Channel, CMatrix, DensityMatrix, LindbladModel,
    StepControl,
};
use magnetomech::superposition::{
    branch_overlap, collapse_revival_times, gaussian_protocol, superposition_size,
    translation_operator, ProtocolParams,
};
use magnetomech::trap::{
    max_radius, quadrupole_field, trap_frequency, MaterialProperties, SphereSpec, TrapGeometry,
};
use nalgebra::{DVector, Vector3};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn lead() -> MaterialProperties {
    MaterialProperties::lead()
}

proptest! {
    #[test]
    fn trap_frequency_scaling(l in 1e-6f64..1e-3, i in 0.1f64..100.0, k in 0.2f64..5.0) {
        let w = trap_frequency(&TrapGeometry::new(l, i).unwrap(), &lead()).unwrap();
        let wi = trap_frequency(&TrapGeometry::new(l, k * i).unwrap(), &lead()).unwrap();
        let wl = trap_frequency(&TrapGeometry::new(k * l, i).unwrap(), &lead()).unwrap();
        assert_relative_eq!(wi, k * w, max_relative = 1e-12);
        assert_relative_eq!(wl, w / (k * k), max_relative = 1e-12);
    }

    #[test]
    fn max_radius_times_frequency_is_material_constant(l in 1e-6f64..1e-3, i in 0.1f64..100.0) {
        let mat = lead();
        let w = trap_frequency(&TrapGeometry::new(l, i).unwrap(), &mat).unwrap();
        let product = max_radius(w, &mat) * w;
        let expected = 0.98 * mat.critical_field / (magnetomech::constants::MU_0 * mat.density).sqrt();
        assert_relative_eq!(product, expected, max_relative = 1e-12);
    }

    #[test]
    fn field_is_divergence_free(
        x in -0.3f64..0.3, y in -0.3f64..0.3, z in -0.3f64..0.3,
    ) {
        let geom = TrapGeometry::new(1e-3, 5.0).unwrap();
        let l = geom.coil_radius;
        let p = Vector3::new(x, y, z) * l;
        let h = 1e-5 * l;
        let mut div = 0.0;
        for axis in 0..3 {
            let mut e = Vector3::zeros();
            e[axis] = h;
            let plus = quadrupole_field(&(p + e), &geom).unwrap()[axis];
            let minus = quadrupole_field(&(p - e), &geom).unwrap()[axis];
            div += (plus - minus) / (2.0 * h);
        }
        // compare with the field gradient scale B / l at that point
        let scale = geom.current * magnetomech::constants::MU_0 / (l * l);
        prop_assert!(div.abs() < 1e-6 * scale, "div = {div:e}, scale = {scale:e}");
    }

    #[test]
    fn field_is_odd_under_reflection(x in -0.4f64..0.4, y in -0.4f64..0.4, z in -0.4f64..0.4) {
        let geom = TrapGeometry::new(2e-4, 3.0).unwrap();
        let p = Vector3::new(x, y, z) * geom.coil_radius;
        let b = quadrupole_field(&p, &geom).unwrap();
        let b_reflected = quadrupole_field(&-p, &geom).unwrap();
        prop_assert!((b + b_reflected).norm() <= 1e-12 * b.norm().max(1e-300));
    }

    #[test]
    fn eta_scales_as_radius_to_three_halves(r_um in 0.5f64..5.0, k in 0.5f64..2.0) {
        let geom = TrapGeometry::new(25e-6, 10.0).unwrap();
        let w = trap_frequency(&geom, &lead()).unwrap();
        let pickup = PickupCoil::new(10e-6, 5e-6).unwrap();
        let eta_of = |r: f64| {
            let sphere = SphereSpec::new(r, lead()).unwrap();
            let x_zp = magnetomech::coupling::zero_point_motion(sphere.mass(), w);
            eta(x_zp, flux_derivative(&geom, &pickup, &sphere).unwrap())
        };
        let r = r_um * 1e-6;
        assert_relative_eq!(eta_of(k * r), eta_of(r) * k.powf(1.5), max_relative = 1e-12);
    }

    #[test]
    fn lc_to_qubit_ratio_is_independent_of_mechanics(e in 1e-9f64..1e-5, nu in 1e9f64..1e12) {
        let lc = LCParams::new(1e-9, 1e-12).unwrap();
        let qubit = QubitParams::new(nu, 1e9, 1e9, 1e-6, 1e-6).unwrap();
        let g_lc = lc_coupling(&lc, e).g_lc;
        let g0 = magnetomech::coupling::qubit_coupling(&qubit, e);
        assert_relative_eq!(g_lc / g0, lc_coupling(&lc, 1.0).epsilon_lc / nu, max_relative = 1e-12);
    }

    #[test]
    fn mixing_angle_is_scale_invariant(eps in -1e10f64..1e10, delta in 1e6f64..1e10, k in 1e-3f64..1e3) {
        let a = QubitParams::new(1.0, delta, eps, 1.0, 1.0).unwrap();
        let b = QubitParams::new(1.0, k * delta, k * eps, 1.0, 1.0).unwrap();
        assert_relative_eq!(qubit_splitting(&a).1, qubit_splitting(&b).1, max_relative = 1e-12);
    }

    #[test]
    fn dressed_rate_difference_is_exact(g0 in 0.0f64..10.0, gphi in 0.0f64..10.0, beta in 0.0f64..PI) {
        let r = dressed_rates(g0, gphi, beta);
        let scale = g0 + gphi;
        prop_assert!((r.down - r.up - 2.0 * g0 * beta.cos()).abs() <= 1e-13 * scale.max(1.0));
        prop_assert!(r.up >= 0.0 && r.down >= 0.0 && r.dephasing >= 0.0);
    }

    #[test]
    fn frame_invariants(
        eps in -1e9f64..1e9, delta in 1e6f64..1e9,
        amp in 0.0f64..1e9, det in -1e9f64..1e9, g0 in 0.0f64..1e6,
    ) {
        let qubit = QubitParams::new(1.0, delta, eps, 1e-6, 1e-6).unwrap();
        let (ws, _) = qubit_splitting(&qubit);
        let freq = (ws + det).abs().max(1.0);
        let drive = DriveParams::new(amp, freq).unwrap();
        let f = effective_frame(&qubit, &drive, 1e5, g0);
        prop_assert!(f.g_tilde.abs() <= g0 * (1.0 + 1e-15));
        let expected = f.detuning.hypot(f.dressed_drive);
        prop_assert!((f.dressed_splitting - expected).abs() <= 1e-12 * expected.max(1.0));
    }

    #[test]
    fn hamiltonians_are_well_formed(eps in -5.0f64..5.0, delta in 0.0f64..5.0, g in 0.0f64..2.0, n in 2usize..8) {
        prop_assert!(hermiticity_error(&build_hmm(1.0, eps, delta, g, n)) < 1e-14);
        let jc = build_jc_effective(g, n);
        let excitations = on_oscillator(&fock_operators(n).number)
            + on_qubit(&magnetomech::lindblad::operators::excited_projector(), n);
        let comm = &jc * &excitations - &excitations * &jc;
        prop_assert!(comm.camax() < 1e-13);
    }

    #[test]
    fn cooling_iff_positive_cos_beta(
        g0 in 0.01f64..10.0, gphi in 0.0f64..10.0, beta in 0.01f64..(PI - 0.01), g in 1e-4f64..1.0,
    ) {
        let r = dressed_rates(g0, gphi, beta);
        let (ap, am) = heating_cooling_coeffs(g, &r).unwrap();
        prop_assert_eq!(am >= ap, beta.cos() >= 0.0);
        prop_assert_eq!(r.down >= r.up, beta.cos() >= 0.0);
    }

    #[test]
    fn steady_occupation_independent_of_coupling(
        g0 in 0.01f64..10.0, gphi in 0.0f64..10.0, beta in 0.05f64..(FRAC_PI_2 - 0.05),
        g in 1e-4f64..1.0, k in 0.1f64..10.0,
    ) {
        let r = dressed_rates(g0, gphi, beta);
        let n_of = |g: f64| {
            let (ap, am) = heating_cooling_coeffs(g, &r).unwrap();
            steady_phonons(ap, am - ap, 0.0).unwrap()
        };
        let expected = r.up / (r.down - r.up);
        assert_relative_eq!(n_of(g), expected, max_relative = 1e-10);
        assert_relative_eq!(n_of(k * g), expected, max_relative = 1e-10);
    }

    #[test]
    fn phonon_trajectory_satisfies_rate_equation(
        ap in 0.0f64..1.0, rate in 0.01f64..1.0, ext in 0.0f64..1.0, n0 in 0.1f64..10.0,
    ) {
        let h = 1e-5 / rate;
        let times: Vec<f64> = (0..20).map(|k| 0.25 * k as f64 / rate + h).collect();
        let shifted = |d: f64| times.iter().map(|t| t + d).collect::<Vec<_>>();
        let n = phonon_trajectory(n0, ap, rate, ext, &times).unwrap();
        let scale = n0.max((ap + ext) / rate);
        let up = phonon_trajectory(n0, ap, rate, ext, &shifted(h)).unwrap();
        let down = phonon_trajectory(n0, ap, rate, ext, &shifted(-h)).unwrap();
        for k in 0..times.len() {
            let dn = (up[k] - down[k]) / (2.0 * h);
            let residual = dn + rate * n[k] - ap - ext;
            prop_assert!(residual.abs() < 1e-9 * rate * scale, "residual {residual:e}");
        }
    }

    #[test]
    fn budget_rates_are_homogeneous(k in 0.1f64..10.0, w in 1e3f64..1e6, s in 1e-14f64..1e-8, x in 1e-15f64..1e-12) {
        assert_relative_eq!(freq_noise_heating(k * w, s), k * k * freq_noise_heating(w, s), max_relative = 1e-12);
        assert_relative_eq!(freq_noise_heating(w, k * s), k * freq_noise_heating(w, s), max_relative = 1e-12);
        assert_relative_eq!(
            position_noise_heating(w, k * k * s, k * x),
            position_noise_heating(w, s, x),
            max_relative = 1e-12
        );
        let (g1, q1) = gas_damping(1e-8, 4.2, 6.6e-27, 2e-6, 11_360.0, w);
        let (g2, q2) = gas_damping(k * 1e-8, 4.2, 6.6e-27, k * 2e-6, 11_360.0, w);
        assert_relative_eq!(g1, g2, max_relative = 1e-12);
        assert_relative_eq!(q1, q2, max_relative = 1e-12);
        let (g3, _) = gas_damping(1e-8, k * k * 4.2, 6.6e-27, 2e-6, k * 11_360.0, w);
        assert_relative_eq!(g3, g1 / (k * k), max_relative = 1e-12);
    }

    #[test]
    fn oracle_overlap_matches_closed_form(chi in 0.0f64..0.5, s in 0.1f64..2.0) {
        let (t_star, _) = collapse_revival_times(1.0);
        let p = ProtocolParams::new(chi / 2.0, 1.0, s, vec![t_star]).unwrap();
        let tr = gaussian_protocol(&p);
        let expected = branch_overlap(superposition_size(chi, 1.0), s);
        prop_assert!((tr.overlap[0] - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn oracle_purity_is_reflection_symmetric_and_periodic(chi in 0.0f64..0.5, s in 0.1f64..1.0, u in 0.0f64..1.0) {
        let (t_star, t_rev) = collapse_revival_times(1.0);
        let t = u * t_star;
        let p = ProtocolParams::new(chi / 2.0, 1.0, s, vec![t, t_rev - t, t + t_rev, t_star]).unwrap();
        let tr = gaussian_protocol(&p);
        prop_assert!((tr.purity[0] - tr.purity[1]).abs() < 1e-12);
        prop_assert!((tr.purity[0] - tr.purity[2]).abs() < 1e-12);
        // purity loss is largest where the branches are farthest apart
        prop_assert!(tr.purity[3] <= tr.purity[0] + 1e-15);
        prop_assert!(tr.purity.iter().all(|&v| (0.5..=1.0 + 1e-15).contains(&v)));
    }

    #[test]
    fn translation_defect_stays_near_the_top_levels(a in -0.3f64..0.3, n in 20usize..36) {
        let t = translation_operator(a, n);
        let x = fock_operators(n).position;
        let residual = t.adjoint() * &x * &t - &x - CMatrix::identity(n, n) * C64::new(a, 0.0);
        let low = residual.view((0, 0), (n / 2, n / 2)).camax();
        prop_assert!(low < 1e-6, "lower-half residual {low:e}");
    }
}

fn random_hermitian(seed: &[f64], d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    let mut k = 0;
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = C64::new(seed[k % seed.len()], seed[(k + 7) % seed.len()]);
            k += 1;
        }
    }
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_preserves_state_invariants(
        seed in prop::collection::vec(-1.0f64..1.0, 16..32),
        psi in prop::collection::vec(-1.0f64..1.0, 8),
        gamma in 0.0f64..2.0, gphi in 0.0f64..2.0, kappa in 0.0f64..0.5,
    ) {
        let n = 4;
        let d = 2 * n;
        let h = random_hermitian(&seed, d);
        let b = fock_operators(n);
        let channels = vec![
            Channel::new(gamma, on_qubit(&sigma_minus(), n)).unwrap(),
            Channel::dephasing(gphi, &on_qubit(&sigma_z(), n)).unwrap(),
            Channel::new(kappa, on_oscillator(&b.annihilation)).unwrap(),
        ];
        let model = LindbladModel::new(h, channels, n).unwrap();
        let mut v = DVector::from_iterator(d, psi.iter().map(|&x| C64::new(x, 0.5 * x)));
        // keep the top levels empty so the truncation guard is not the subject here
        for q in 0..2 {
            v[q * n + n - 1] = C64::new(0.0, 0.0);
            v[q * n + n - 2] = C64::new(0.0, 0.0);
        }
        prop_assume!(v.norm() > 1e-3);
        let rho0 = DensityMatrix::pure(&v.normalize(), n).unwrap();
        let traj = evolve(&model, &rho0, &uniform_times(1.0, 5), &StepControl::default()).unwrap();
        let diag = traj.diagnostics;
        prop_assert!(diag.max_trace_error < 1e-9);
        prop_assert!(diag.max_hermiticity_error < 1e-10);
        prop_assert!(diag.min_eigenvalue >= -1e-8);
    }
}
