//! Subcommand bodies. Each returns its tables in memory; writing is separate.

use magnetomech::budget::{budget_report, DecoherenceBudget};
use magnetomech::constants::angular_to_hz;
use magnetomech::cooling::{beta_sweep, phonon_trajectory, AdiabaticScenario, CoolingResult};
use magnetomech::coupling::DerivedCouplings;
use magnetomech::frames::{effective_frame, resolve_resonance, DriveParams, EffectiveFrame, RwaCheck};
use magnetomech::lindblad::operators::{excited_projector, on_oscillator, on_qubit};
use magnetomech::lindblad::{
    evolve, expectation, fock_operators, partial_trace_qubit, uniform_times, RunDiagnostics,
};
use magnetomech::superposition::{
    branch_overlap, coherence_window, collapse_revival_times, gaussian_protocol, me_protocol,
    required_squeezing, superposition_size, ProtocolParams,
};
use magnetomech::trap::{
    check_meissner_validity, max_radius, trap_frequency, transverse_frequency, MeissnerValidity,
    ValidityFlag,
};

use crate::config::{DriveSpec, Scenario};
use crate::error::{CliError, InModule};
use crate::report::{Report, Table};

/// Everything derived from geometry, circuits and drive.
#[derive(Debug, Clone)]
pub struct Derived {
    pub trap_frequency: f64,
    pub transverse_frequency: f64,
    pub max_radius: f64,
    pub mass: f64,
    pub couplings: DerivedCouplings,
    pub meissner: MeissnerValidity,
    pub pickup: ValidityFlag,
    pub drive: Option<(DriveParams, EffectiveFrame)>,
}

impl Derived {
    pub fn compute(s: &Scenario) -> Result<Self, CliError> {
        let w = trap_frequency(&s.trap, &s.sphere.material).in_module("trap")?;
        let couplings = DerivedCouplings::compute(&s.sphere, &s.trap, &s.pickup, &s.qubit, s.lc.as_ref(), w)
            .in_module("coupling")?;
        let drive = match s.drive {
            None => None,
            Some(spec) => {
                let params = match spec {
                    DriveSpec::Explicit(d) => d,
                    DriveSpec::TargetBeta(beta) => resolve_resonance(&s.qubit, w, beta).in_module("frames")?,
                };
                Some((params, effective_frame(&s.qubit, &params, w, couplings.g0)))
            }
        };
        Ok(Self {
            trap_frequency: w,
            transverse_frequency: transverse_frequency(w),
            max_radius: max_radius(w, &s.sphere.material),
            mass: s.sphere.mass(),
            couplings,
            meissner: check_meissner_validity(&s.sphere, &s.trap, w),
            pickup: s.pickup.validity(&s.sphere),
            drive,
        })
    }

    fn frame(&self, command: &str) -> Result<&EffectiveFrame, CliError> {
        self.drive
            .as_ref()
            .map(|(_, f)| f)
            .ok_or_else(|| CliError::Validation(vec![format!("drive: section required by `{command}`")]))
    }

    fn hard_flags(&self) -> Vec<ValidityFlag> {
        let mut flags = self.meissner.flags().to_vec();
        flags.push(self.pickup);
        flags
    }

    fn budget(&self, s: &Scenario) -> Option<DecoherenceBudget> {
        s.noise_spectra(self.couplings.zero_point_motion).map(|n| {
            budget_report(
                &n,
                self.trap_frequency,
                s.sphere.radius,
                s.sphere.material.density,
                self.couplings.zero_point_motion,
            )
        })
    }
}

fn rwa_row(table: &mut Table, name: &str, check: &RwaCheck) {
    table.push(vec![
        name.into(),
        "soft".into(),
        (check.status.as_str() != "fail").into(),
        check.ratio.into(),
        check.status.as_str().into(),
    ]);
}

fn time_grid(s: &Scenario, natural: f64) -> Vec<f64> {
    uniform_times(s.duration.unwrap_or(natural), s.samples)
}

pub fn design(s: &Scenario) -> Result<Report, CliError> {
    let d = Derived::compute(s)?;
    let c = &d.couplings;
    let q = &s.qubit;
    let mut t = Table::quantities("design");
    t.quantity("omega_t", d.trap_frequency, "rad/s");
    t.quantity("omega_t_over_2pi", angular_to_hz(d.trap_frequency), "Hz");
    t.quantity("omega_perp", d.transverse_frequency, "rad/s");
    t.quantity("r_max", d.max_radius, "m");
    t.quantity("mass", d.mass, "kg");
    t.quantity("x_zp", c.zero_point_motion, "m");
    t.quantity("flux_derivative", c.flux_derivative, "Wb/m");
    t.quantity("eta", c.eta, "1");
    t.quantity("g0", c.g0, "rad/s");
    t.quantity("g0_over_2pi", angular_to_hz(c.g0), "Hz");
    if let Some(lc) = &c.lc {
        t.quantity("omega_lc", lc.omega_lc, "rad/s");
        t.quantity("epsilon_lc", lc.epsilon_lc, "rad/s");
        t.quantity("g_lc", lc.g_lc, "rad/s");
        t.quantity("g_lc_over_2pi", angular_to_hz(lc.g_lc), "Hz");
        t.quantity("g_lc_over_g0", lc.g_lc / c.g0, "1");
    }
    t.quantity("omega_s", c.splitting, "rad/s");
    t.quantity("omega_s_over_2pi", angular_to_hz(c.splitting), "Hz");
    t.quantity("alpha", c.alpha, "rad");
    t.quantity("gamma0", q.gamma0, "1/s");
    t.quantity("gamma0_over_2pi", angular_to_hz(q.gamma0), "Hz");
    t.quantity("gamma_phi", q.gamma_phi, "1/s");
    t.quantity("gamma_phi_over_gamma0", q.gamma_phi / q.gamma0, "1");
    if let Some((drive, f)) = &d.drive {
        t.quantity("drive_amplitude", drive.amplitude, "rad/s");
        t.quantity("drive_frequency", drive.frequency, "rad/s");
        t.quantity("beta", f.beta, "rad");
        t.quantity("dressed_splitting", f.dressed_splitting, "rad/s");
        t.quantity("g_tilde", f.g_tilde, "rad/s");
    }

    let mut flags = Table::new("design_flags", &["flag", "kind", "passed", "value", "status"]);
    let mut failed = Vec::new();
    for flag in d.hard_flags() {
        flags.push(vec![
            flag.name.into(),
            "hard".into(),
            flag.passed.into(),
            flag.margin.into(),
            (if flag.passed { "pass" } else { "fail" }).into(),
        ]);
        if !flag.passed {
            failed.push(flag.name.to_string());
        }
    }
    if let Some((_, f)) = &d.drive {
        rwa_row(&mut flags, "drive_frame_rwa", &f.rwa.drive_frame);
        rwa_row(&mut flags, "dressed_frame_rwa", &f.rwa.dressed_frame);
    }
    let summary = vec![
        format!("omega_t/2pi = {:.4e} Hz, R_max = {:.4e} m", angular_to_hz(d.trap_frequency), d.max_radius),
        format!("eta = {:.4e}, g0/2pi = {:.4e} Hz", c.eta, angular_to_hz(c.g0)),
        format!(
            "Gamma0/2pi = {:.4e} Hz, Gamma_phi/Gamma0 = {:.4}",
            angular_to_hz(q.gamma0),
            q.gamma_phi / q.gamma0
        ),
    ];
    Ok(Report {
        tables: vec![t, flags],
        summary,
        failed_flags: failed,
    })
}

pub fn cool(s: &Scenario) -> Result<Report, CliError> {
    let d = Derived::compute(s)?;
    let frame = d.frame("cool")?;
    let q = &s.qubit;
    let budget = d.budget(s);
    let gamma_ext = budget.as_ref().map_or(0.0, |b| b.gamma_ext);
    let res = CoolingResult::compute(frame, d.couplings.g0, q.gamma0, gamma_ext).in_module("cooling")?;
    let n_ss = magnetomech::cooling::steady_phonons(res.a_plus, res.rate, gamma_ext).in_module("cooling")?;
    let mut t = Table::quantities("cool_summary");
    t.quantity("beta", frame.beta, "rad");
    t.quantity("g_tilde", frame.g_tilde, "rad/s");
    t.quantity("gamma_dephasing_dressed", frame.rates.dephasing, "1/s");
    t.quantity("gamma_up", frame.rates.up, "1/s");
    t.quantity("gamma_down", frame.rates.down, "1/s");
    t.quantity("a_plus", res.a_plus, "1/s");
    t.quantity("a_minus", res.a_minus, "1/s");
    t.quantity("cooling_rate", res.rate, "1/s");
    t.quantity("gamma_ext", gamma_ext, "1/s");
    t.quantity("n_ss", n_ss, "1");
    t.quantity("n_ss_without_ext", res.a_plus / res.rate, "1");
    if let Some(b) = &budget {
        let hz_ext = b.gamma_omega_hz_reading + b.gamma_x_hz_reading;
        t.quantity("gamma_ext_hz_reading", hz_ext, "1/s");
        t.quantity("n_ss_hz_reading", (res.a_plus + hz_ext) / res.rate, "1");
    }
    t.quantity("rate_over_caption_norm", res.rate / res.caption_norm, "1");
    t.quantity("rate_over_constant_norm", res.rate / res.constant_norm, "1");

    let times = time_grid(s, 5.0 / res.rate);
    let n = phonon_trajectory(s.initial_fock as f64, res.a_plus, res.rate, gamma_ext, &times)
        .in_module("cooling")?;
    let mut traj = Table::new("cool_trajectory", &["time_s", "n_phonon"]);
    for (time, v) in times.iter().zip(&n) {
        traj.push(vec![(*time).into(), (*v).into()]);
    }
    let summary = vec![
        format!("beta = {:.4} rad, g_tilde/2pi = {:.4e} Hz", frame.beta, angular_to_hz(frame.g_tilde)),
        format!("cooling rate = {:.4e} 1/s, n_ss = {:.4e} (Gamma_ext = {:.4e} 1/s)", res.rate, n_ss, gamma_ext),
    ];
    Ok(Report {
        tables: vec![t, traj],
        summary,
        failed_flags: Vec::new(),
    })
}

pub fn sweep_beta(s: &Scenario) -> Result<Report, CliError> {
    let d = Derived::compute(s)?;
    let rows = beta_sweep(
        s.qubit.gamma0,
        &s.dephasing_ratios,
        &s.betas,
        d.couplings.g0,
        d.couplings.alpha,
    )
    .in_module("cooling")?;
    let mut t = Table::new(
        "sweep_beta",
        &[
            "beta_rad",
            "dephasing_ratio",
            "n_ss",
            "rate_1_per_s",
            "rate_over_caption_norm",
            "rate_over_constant_norm",
        ],
    );
    for r in &rows {
        t.push(vec![
            r.beta.into(),
            r.dephasing_ratio.into(),
            r.n_ss.into(),
            r.rate.into(),
            r.rate_over_caption_norm.into(),
            r.rate_over_constant_norm.into(),
        ]);
    }
    let summary = vec![format!(
        "{} points over {} dephasing ratios",
        rows.len(),
        s.dephasing_ratios.len()
    )];
    Ok(Report {
        tables: vec![t],
        summary,
        failed_flags: Vec::new(),
    })
}

pub fn superpose(s: &Scenario) -> Result<Report, CliError> {
    let d = Derived::compute(s)?;
    let w = d.trap_frequency;
    let g = d.couplings.g0 * d.couplings.alpha.cos();
    let (t_star, t_rev) = collapse_revival_times(w);
    let times = time_grid(s, t_rev);
    let mut params = ProtocolParams::new(g, w, s.squeeze_ratio, times.clone()).in_module("superposition")?;
    if s.protocol_dissipation {
        params = params.with_qubit_times(Some(s.qubit.t1), Some(s.qubit.t2));
    }
    let oracle = gaussian_protocol(&params);
    let run = me_protocol(&params, s.fock_dim, &s.step_control).in_module("superposition")?;

    let mut t = Table::new(
        "superpose",
        &[
            "time_s",
            "purity_oracle",
            "overlap_oracle",
            "purity_me",
            "overlap_me",
            "mean_up_xzp",
            "mean_down_xzp",
        ],
    );
    for k in 0..times.len() {
        t.push(vec![
            times[k].into(),
            oracle.purity[k].into(),
            oracle.overlap[k].into(),
            run.trace.purity[k].into(),
            run.trace.overlap[k].into(),
            run.trace.mean_up[k].into(),
            run.trace.mean_down[k].into(),
        ]);
    }
    let x_zp = d.couplings.zero_point_motion;
    let l_s = superposition_size(params.chi, x_zp);
    let squeeze = required_squeezing(params.chi, (-1.0f64).exp()).in_module("superposition")?;
    let window = coherence_window(w, s.qubit.t2);
    let mut sum = Table::quantities("superpose_summary");
    sum.quantity("chi", params.chi, "1");
    sum.quantity("coupling", g, "rad/s");
    sum.quantity("t_star", t_star, "s");
    sum.quantity("superposition_size", l_s, "m");
    sum.quantity("overlap_at_t_star", branch_overlap(l_s, s.squeeze_ratio * x_zp), "1");
    sum.quantity("width_ratio", s.squeeze_ratio, "1");
    sum.quantity("boundary_width_ratio", squeeze.boundary_width_ratio, "1");
    sum.quantity("coherence_ratio_t2_over_2t_star", window.ratio, "1");
    push_diagnostics(&mut sum, &run.diagnostics);
    let summary = vec![
        format!("chi = {:.4e}, l_s = {:.4e} m, t* = {:.4e} s", params.chi, l_s, t_star),
        format!(
            "T2/(2t*) = {:.3} ({}); 8 sigma^2 < l_s^2 needs sigma/x_zp < {:.4e}",
            window.ratio,
            window.status.as_str(),
            squeeze.boundary_width_ratio
        ),
    ];
    Ok(Report {
        tables: vec![t, sum],
        summary,
        failed_flags: Vec::new(),
    })
}

pub fn budget(s: &Scenario) -> Result<Report, CliError> {
    let d = Derived::compute(s)?;
    let b = d
        .budget(s)
        .ok_or_else(|| CliError::Validation(vec!["noise: section required by `budget`".into()]))?;
    let mut t = Table::quantities("budget");
    t.quantity("gamma_air", b.gamma_air, "1/s");
    t.quantity("q_air", b.q_air, "1");
    t.quantity("gamma_omega", b.gamma_omega, "1/s");
    t.quantity("gamma_omega_hz_reading", b.gamma_omega_hz_reading, "1/s");
    t.quantity("gamma_x", b.gamma_x, "1/s");
    t.quantity("gamma_x_hz_reading", b.gamma_x_hz_reading, "1/s");
    t.quantity("gamma_ext", b.gamma_ext, "1/s");
    let mut notes = Table::new("budget_notes", &["note"]);
    for n in &b.notes {
        notes.push(vec![(*n).into()]);
    }
    let summary = vec![
        format!("Q_air = {:.4e}", b.q_air),
        format!(
            "Gamma_omega = {:.4e} 1/s (Hz reading {:.4e}), Gamma_x = {:.4e} 1/s (Hz reading {:.4e})",
            b.gamma_omega, b.gamma_omega_hz_reading, b.gamma_x, b.gamma_x_hz_reading
        ),
    ];
    Ok(Report {
        tables: vec![t, notes],
        summary,
        failed_flags: Vec::new(),
    })
}

/// Dressed-frame exchange model from Fock level `initial_fock`, qubit in its
/// dressed stationary mixture. External heating is not part of this model.
pub fn evolve_cmd(s: &Scenario) -> Result<Report, CliError> {
    let d = Derived::compute(s)?;
    let frame = d.frame("evolve")?;
    let scenario = AdiabaticScenario {
        gamma0: s.qubit.gamma0,
        gamma_phi: s.qubit.gamma_phi,
        beta: frame.beta,
        g_tilde: frame.g_tilde,
        fock_dim: s.fock_dim,
    };
    let (_, rate) = scenario.analytic().in_module("cooling")?;
    let natural = if rate > 0.0 {
        5.0 / rate
    } else if s.duration.is_none() {
        return Err(CliError::Validation(vec![
            "simulation.time_grid.duration_us: required when the cooling rate vanishes".into(),
        ]));
    } else {
        0.0
    };
    let times = time_grid(s, natural);
    let model = scenario.model().in_module("lindblad")?;
    let rho0 = scenario.initial_state(s.initial_fock).in_module("lindblad")?;
    let traj = evolve(&model, &rho0, &times, &s.step_control).in_module("lindblad")?;
    let num = on_oscillator(&fock_operators(s.fock_dim).number);
    let up = on_qubit(&excited_projector(), s.fock_dim);
    let mut t = Table::new("evolve", &["time_s", "n_phonon", "p_excited", "qubit_purity"]);
    for (time, state) in traj.times.iter().zip(&traj.states) {
        t.push(vec![
            (*time).into(),
            expectation(state, &num).in_module("lindblad")?.re.into(),
            expectation(state, &up).in_module("lindblad")?.re.into(),
            partial_trace_qubit(state).purity.into(),
        ]);
    }
    let mut diag = Table::quantities("evolve_diagnostics");
    push_diagnostics(&mut diag, &traj.diagnostics);
    let summary = vec![format!(
        "{} samples, {} RK4 steps of {:.4e} s, max trace error {:.2e}",
        times.len(),
        traj.diagnostics.steps,
        traj.diagnostics.step,
        traj.diagnostics.max_trace_error
    )];
    Ok(Report {
        tables: vec![t, diag],
        summary,
        failed_flags: Vec::new(),
    })
}

fn push_diagnostics(t: &mut Table, d: &RunDiagnostics) {
    t.quantity("max_trace_error", d.max_trace_error, "1");
    t.quantity("max_hermiticity_error", d.max_hermiticity_error, "1");
    t.quantity("min_eigenvalue", d.min_eigenvalue, "1");
    t.quantity("max_top_fock_population", d.max_top_fock_population, "1");
    t.quantity("rk4_steps", d.steps as f64, "1");
    t.quantity("rk4_step", d.step, "s");
}
