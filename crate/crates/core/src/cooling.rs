//! Sideband cooling through the dressed qubit: heating/cooling coefficients,
//! steady occupation, β sweeps, and master-equation cross-checks of the
//! adiabatic elimination.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frames::{build_jc_effective, dressed_rates, DressedRates, EffectiveFrame};
use crate::lindblad::operators::{on_oscillator, on_qubit, sigma_minus, sigma_plus, sigma_z, CMatrix};
use crate::lindblad::{
    evolve, expectation, fock_operators, steady_state, Channel, DensityMatrix, LindbladModel,
    StepControl, Trajectory, TRUNCATION_TOLERANCE,
};

/// The adiabatic cross-check requires `g̃ <= ADIABATIC_LIMIT * (2Γ*φ + Γ↑ + Γ↓)`.
pub const ADIABATIC_LIMIT: f64 = 0.05;

/// Default dephasing ratios `Γφ/Γ0` of the β sweep.
pub const DEFAULT_DEPHASING_RATIOS: [f64; 3] = [0.0, 0.1, 1.0];

/// `A± = 2g̃²/(2Γ*φ + Γ↑ + Γ↓) · (1 ∓ (Γ↓ - Γ↑)/(Γ↓ + Γ↑))`, returned as `(A+, A-)`.
pub fn heating_cooling_coeffs(g_tilde: f64, rates: &DressedRates) -> Result<(f64, f64)> {
    let sum = rates.down + rates.up;
    if !(sum > 0.0) {
        return Err(Error::UndefinedRatio);
    }
    let prefactor = 2.0 * g_tilde * g_tilde / rates.total();
    let asymmetry = (rates.down - rates.up) / sum;
    Ok((prefactor * (1.0 - asymmetry), prefactor * (1.0 + asymmetry)))
}

/// Net cooling rate `Γ = A- - A+`.
pub fn cooling_rate(a_plus: f64, a_minus: f64) -> f64 {
    a_minus - a_plus
}

/// `⟨n⟩_ss = (A+ + Γ_ext) / Γ`.
pub fn steady_phonons(a_plus: f64, rate: f64, gamma_ext: f64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::NoCooling { rate });
    }
    Ok((a_plus + gamma_ext) / rate)
}

/// Solution of `d⟨n⟩/dt = -Γ⟨n⟩ + A+ + Γ_ext` from `n0` at each of `times`.
pub fn phonon_trajectory(n0: f64, a_plus: f64, rate: f64, gamma_ext: f64, times: &[f64]) -> Result<Vec<f64>> {
    let n_ss = steady_phonons(a_plus, rate, gamma_ext)?;
    Ok(times
        .iter()
        .map(|t| n_ss + (n0 - n_ss) * (-rate * t).exp())
        .collect())
}

/// Cooling figures of merit for one dressed frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingResult {
    pub a_plus: f64,
    pub a_minus: f64,
    pub rate: f64,
    pub gamma_ext: f64,
    /// `None` in the heating regime.
    pub n_ss: Option<f64>,
    /// `g̃² cos²α / Γ0`.
    pub caption_norm: f64,
    /// `(g0 cos α)² / Γ0`, independent of β.
    pub constant_norm: f64,
}

impl CoolingResult {
    pub fn compute(frame: &EffectiveFrame, g0: f64, gamma0: f64, gamma_ext: f64) -> Result<Self> {
        let (a_plus, a_minus) = heating_cooling_coeffs(frame.g_tilde, &frame.rates)?;
        let rate = cooling_rate(a_plus, a_minus);
        let cos_alpha = frame.alpha.cos();
        Ok(Self {
            a_plus,
            a_minus,
            rate,
            gamma_ext,
            n_ss: steady_phonons(a_plus, rate, gamma_ext).ok(),
            caption_norm: frame.g_tilde.powi(2) * cos_alpha * cos_alpha / gamma0,
            constant_norm: (g0 * cos_alpha).powi(2) / gamma0,
        })
    }
}

/// One point of the β sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub dephasing_ratio: f64,
    /// Steady occupation with `Γ_ext = 0`.
    pub n_ss: f64,
    pub rate: f64,
    /// `Γ / (g̃² cos²α / Γ0)` with the β-dependent `g̃`.
    pub rate_over_caption_norm: f64,
    /// `Γ / ((g0 cos α)² / Γ0)`.
    pub rate_over_constant_norm: f64,
}

/// Evaluate cooling over a β grid for several `Γφ/Γ0`. Rows come back sorted
/// by β, then by ratio, regardless of evaluation order.
pub fn beta_sweep(
    gamma0: f64,
    dephasing_ratios: &[f64],
    betas: &[f64],
    g0: f64,
    alpha: f64,
) -> Result<Vec<SweepRow>> {
    if let Some(&bad) = betas
        .iter()
        .find(|b| !(**b > 0.0 && **b < std::f64::consts::FRAC_PI_2))
    {
        return Err(Error::InvalidParameter {
            name: "beta grid",
            value: bad,
            reason: "sweep angles must lie in (0, pi/2)",
        });
    }
    let cos_alpha = alpha.cos();
    let constant_norm = (g0 * cos_alpha).powi(2) / gamma0;
    let points: Vec<(f64, f64)> = betas
        .iter()
        .flat_map(|&b| dephasing_ratios.iter().map(move |&r| (b, r)))
        .collect();
    let mut rows = points
        .into_par_iter()
        .map(|(beta, ratio)| {
            let rates = dressed_rates(gamma0, ratio * gamma0, beta);
            let g_tilde = g0 * cos_alpha * beta.sin();
            let (a_plus, a_minus) = heating_cooling_coeffs(g_tilde, &rates)?;
            let rate = cooling_rate(a_plus, a_minus);
            let caption_norm = g_tilde * g_tilde * cos_alpha * cos_alpha / gamma0;
            Ok(SweepRow {
                beta,
                dephasing_ratio: ratio,
                // the A± prefactor cancels, so this stays finite when g̃ -> 0
                n_ss: rates.up / (rates.down - rates.up),
                rate,
                rate_over_caption_norm: rate / caption_norm,
                rate_over_constant_norm: rate / constant_norm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        a.beta
            .total_cmp(&b.beta)
            .then(a.dephasing_ratio.total_cmp(&b.dephasing_ratio))
    });
    Ok(rows)
}

/// Dressed-frame cooling scenario for master-equation runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticScenario {
    pub gamma0: f64,
    pub gamma_phi: f64,
    pub beta: f64,
    pub g_tilde: f64,
    pub fock_dim: usize,
}

impl AdiabaticScenario {
    pub fn rates(&self) -> DressedRates {
        dressed_rates(self.gamma0, self.gamma_phi, self.beta)
    }

    /// Effective exchange Hamiltonian with the dressed qubit dissipators.
    pub fn model(&self) -> Result<LindbladModel> {
        let n = self.fock_dim;
        let rates = self.rates();
        LindbladModel::new(
            build_jc_effective(self.g_tilde, n),
            vec![
                Channel::new(rates.down, on_qubit(&sigma_minus(), n))?,
                Channel::new(rates.up, on_qubit(&sigma_plus(), n))?,
                Channel::dephasing(rates.dephasing, &on_qubit(&sigma_z(), n))?,
            ],
            n,
        )
    }

    /// Analytic `(A+, Γ)`.
    pub fn analytic(&self) -> Result<(f64, f64)> {
        let (a_plus, a_minus) = heating_cooling_coeffs(self.g_tilde, &self.rates())?;
        Ok((a_plus, cooling_rate(a_plus, a_minus)))
    }

    /// Qubit in its dressed-frame stationary mixture, oscillator in Fock `level`.
    pub fn initial_state(&self, level: usize) -> Result<DensityMatrix> {
        let rates = self.rates();
        let p_up = rates.up / (rates.up + rates.down);
        let mut qubit = CMatrix::zeros(2, 2);
        qubit[(0, 0)] = C64::new(p_up, 0.0);
        qubit[(1, 1)] = C64::new(1.0 - p_up, 0.0);
        let mut osc = CMatrix::zeros(self.fock_dim, self.fock_dim);
        if level >= self.fock_dim {
            return Err(Error::DimensionMismatch {
                expected: self.fock_dim,
                found: level,
            });
        }
        osc[(level, level)] = C64::new(1.0, 0.0);
        DensityMatrix::product(&qubit, &osc)
    }

    fn number_operator(&self) -> CMatrix {
        on_oscillator(&fock_operators(self.fock_dim).number)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    /// Both predictions computed.
    Conclusive,
    /// The steady state leaks into the top Fock levels.
    Inconclusive,
    /// `g̃ = 0`: the oscillator is decoupled and neither side predicts cooling.
    Decoupled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticCheck {
    pub status: CheckStatus,
    pub analytic_n: Option<f64>,
    pub master_equation_n: Option<f64>,
    pub relative_deviation: f64,
    pub top_fock_population: f64,
    pub residual: f64,
    /// Population relaxation rate of the exchange model.
    pub master_equation_rate: Option<f64>,
    /// `|Γ_ME - Γ| / Γ`.
    pub rate_deviation: f64,
}

/// Compare the steady-state occupation of the full exchange model with the
/// adiabatic prediction `(A+)/Γ` (no external heating).
pub fn validate_adiabatic_elimination(scenario: &AdiabaticScenario) -> Result<AdiabaticCheck> {
    let rates = scenario.rates();
    let limit = ADIABATIC_LIMIT * rates.total();
    if scenario.g_tilde.abs() > limit {
        return Err(Error::OutsideAdiabaticRegime {
            coupling: scenario.g_tilde,
            limit,
        });
    }
    if scenario.g_tilde == 0.0 {
        return Ok(AdiabaticCheck {
            status: CheckStatus::Decoupled,
            analytic_n: None,
            master_equation_n: None,
            relative_deviation: 0.0,
            top_fock_population: 0.0,
            residual: 0.0,
            master_equation_rate: None,
            rate_deviation: 0.0,
        });
    }
    let (a_plus, rate) = scenario.analytic()?;
    let analytic = steady_phonons(a_plus, rate, 0.0)?;
    let ss = steady_state(&scenario.model()?)?;
    let me_n = expectation(&ss.state, &scenario.number_operator())?.re;
    let top = ss.state.top_fock_population();
    let me_rate = relaxation_rate(scenario, rate)?;
    Ok(AdiabaticCheck {
        status: if top < TRUNCATION_TOLERANCE {
            CheckStatus::Conclusive
        } else {
            CheckStatus::Inconclusive
        },
        analytic_n: Some(analytic),
        master_equation_n: Some(me_n),
        relative_deviation: (me_n - analytic).abs() / analytic,
        top_fock_population: top,
        residual: ss.residual,
        master_equation_rate: Some(me_rate),
        rate_deviation: (me_rate - rate).abs() / rate,
    })
}

/// Decay rate of the Liouvillian eigenmode closest to `-near`, searched in the
/// excitation-diagonal sector (elements `|a⟩⟨b|` with equal excitation number),
/// which holds the phonon-population modes.
pub fn relaxation_rate(scenario: &AdiabaticScenario, near: f64) -> Result<f64> {
    let model = scenario.model()?;
    let n = scenario.fock_dim;
    let d = 2 * n;
    // q = 0 is |↑⟩
    let excitation = |idx: usize| idx % n + usize::from(idx < n);
    let sector: Vec<usize> = (0..d * d)
        .filter(|&v| excitation(v % d) == excitation(v / d))
        .collect();
    let gen = model.generator();
    let zero = C64::new(0.0, 0.0);
    let mut basis = vec![zero; d * d];
    let mut column = vec![zero; d * d];
    let mut scratch = vec![zero; d * d];
    let mut block = faer::Mat::<C64>::zeros(sector.len(), sector.len());
    for (c, &v) in sector.iter().enumerate() {
        basis[v] = C64::new(1.0, 0.0);
        gen.apply(&basis, &mut column, &mut scratch);
        basis[v] = zero;
        for (r, &w) in sector.iter().enumerate() {
            block[(r, c)] = column[w];
        }
    }
    let eigen = block.eigenvalues().map_err(|_| Error::EigenSolver)?;
    let closest = eigen
        .iter()
        .min_by(|a, b| (a.re + near).abs().total_cmp(&(b.re + near).abs()))
        .map(|z| -z.re)
        .unwrap_or(0.0);
    Ok(closest)
}

/// Master-equation cooling run from Fock level `n0`; returns the trajectory
/// and `⟨n⟩` at each sample.
pub fn master_equation_cooling(
    scenario: &AdiabaticScenario,
    n0: usize,
    times: &[f64],
    control: &StepControl,
) -> Result<(Trajectory, Vec<f64>)> {
    let model = scenario.model()?;
    let rho0 = scenario.initial_state(n0)?;
    let traj = evolve(&model, &rho0, times, control)?;
    let num = scenario.number_operator();
    let n = traj
        .states
        .iter()
        .map(|s| expectation(s, &num).map(|z| z.re))
        .collect::<Result<Vec<_>>>()?;
    Ok((traj, n))
}

/// Least-squares rate of `n_ss + (n0 - n_ss) e^{-Γ t}` through the samples,
/// with `n0` and `n_ss` held fixed. Searches `Γ` on a log scale inside
/// `[lo, hi]` (golden section).
pub fn fit_cooling_rate(times: &[f64], n: &[f64], n0: f64, n_ss: f64, lo: f64, hi: f64) -> f64 {
    let cost = |log_rate: f64| -> f64 {
        let rate = log_rate.exp();
        times
            .iter()
            .zip(n)
            .map(|(t, v)| (n_ss + (n0 - n_ss) * (-rate * t).exp() - v).powi(2))
            .sum()
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (cost(c), cost(d));
    while (b - a).abs() > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = cost(d);
        }
    }
    (0.5 * (a + b)).exp()
}
