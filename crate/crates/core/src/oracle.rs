//! Independent time-domain verification path.
//!
//! Integrates dR/dt = M(t)R − Σ(t) with a classical fixed-step fourth-order
//! Runge–Kutta scheme to the quasi-steady state and projects out Fourier
//! harmonics of the probe coherence by trapezoid quadrature over whole beat
//! periods. Shares the generator with the rest of the crate but none of the
//! hierarchy algebra.

use std::f64::consts::TAU;

use crate::model::{build_liouvillian, idx, CVec, C64};
use crate::{DensityVector, Error, LiouvillianParts, Result, SystemParams};

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationConfig {
    /// Fixed integration step, in inverse reference-rate units.
    pub dt: f64,
    /// Time integrated before any harmonic extraction. The slowest printed
    /// rate (γ₄₁ = 0.01) relaxes on a ~100 scale, so the default is generous.
    pub transient_time: f64,
    /// Number of beat periods 2π/|Δ| averaged over.
    pub extraction_periods: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            transient_time: 2000.0,
            extraction_periods: 4,
        }
    }
}

impl IntegrationConfig {
    /// The step must resolve the fastest coherent dynamics:
    /// dt·max(|Δ_p| + Ω_c, |Δ|) ≤ 0.05.
    pub fn validate(&self, params: &SystemParams) -> Result<&Self> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter {
                field: "dt",
                value: self.dt,
                reason: "must be positive and finite",
            });
        }
        if !(self.transient_time > 0.0) {
            return Err(Error::InvalidParameter {
                field: "transient_time",
                value: self.transient_time,
                reason: "must be positive",
            });
        }
        if self.extraction_periods < 1 {
            return Err(Error::InvalidParameter {
                field: "extraction_periods",
                value: self.extraction_periods as f64,
                reason: "need at least one period",
            });
        }
        let rate = (params.delta_p.abs() + params.omega_c).max(params.delta_beat().abs());
        if self.dt * rate > 0.05 {
            return Err(Error::StepSizeTooLarge {
                dt: self.dt,
                rate,
                limit: 0.05,
            });
        }
        Ok(self)
    }
}

/// Fixed-step RK4 integrator over the affine generator.
pub struct Integrator {
    parts: LiouvillianParts,
    omega_s2: f64,
    phi: f64,
    pub t: f64,
    state: CVec,
    k1: CVec,
    k2: CVec,
    k3: CVec,
    k4: CVec,
    stage: CVec,
    scratch: CVec,
}

impl Integrator {
    pub fn new(params: &SystemParams, initial: DensityVector) -> Self {
        let parts = build_liouvillian(params);
        let z = CVec::zeros(crate::DIM);
        Self {
            parts,
            omega_s2: params.omega_s2,
            phi: params.phi,
            t: 0.0,
            state: initial.0,
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            stage: z.clone(),
            scratch: z,
        }
    }

    pub fn state(&self) -> DensityVector {
        DensityVector(self.state.clone())
    }

    pub fn rho21(&self) -> C64 {
        self.state[idx::RHO21]
    }

    pub fn step(&mut self, dt: f64) {
        let one = C64::from(1.0);
        let half = C64::from(dt / 2.0);
        let full = C64::from(dt);
        let (w, p, t) = (self.omega_s2, self.phi, self.t);

        self.parts
            .deriv_into(&self.state, w, p, t, &mut self.k1, &mut self.scratch);

        self.stage.copy_from(&self.state);
        self.stage.axpy(half, &self.k1, one);
        self.parts
            .deriv_into(&self.stage, w, p, t + dt / 2.0, &mut self.k2, &mut self.scratch);

        self.stage.copy_from(&self.state);
        self.stage.axpy(half, &self.k2, one);
        self.parts
            .deriv_into(&self.stage, w, p, t + dt / 2.0, &mut self.k3, &mut self.scratch);

        self.stage.copy_from(&self.state);
        self.stage.axpy(full, &self.k3, one);
        self.parts
            .deriv_into(&self.stage, w, p, t + dt, &mut self.k4, &mut self.scratch);

        let sixth = C64::from(dt / 6.0);
        let third = C64::from(dt / 3.0);
        self.state.axpy(sixth, &self.k1, one);
        self.state.axpy(third, &self.k2, one);
        self.state.axpy(third, &self.k3, one);
        self.state.axpy(sixth, &self.k4, one);
        self.t += dt;
    }

    /// Advances by `n` steps of size `dt`, checking for blow-up.
    pub fn run(&mut self, n: usize, dt: f64) -> Result<()> {
        for k in 0..n {
            self.step(dt);
            if k % 1024 == 0 && !self.state.iter().all(|c| c.re.is_finite() && c.im.is_finite())
            {
                return Err(Error::Divergence { t: self.t });
            }
        }
        if self.state.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::Divergence { t: self.t })
        }
    }
}

/// Integrates from `initial` and returns the state at each requested time.
/// Sample times must be non-decreasing.
pub fn integrate(
    params: &SystemParams,
    config: &IntegrationConfig,
    initial: DensityVector,
    sample_times: &[f64],
) -> Result<Vec<DensityVector>> {
    params.validate()?;
    config.validate(params)?;
    let mut integ = Integrator::new(params, initial);
    let mut out = Vec::with_capacity(sample_times.len());
    for &target in sample_times {
        if target > integ.t {
            let n = ((target - integ.t) / config.dt).round().max(1.0) as usize;
            let dt = (target - integ.t) / n as f64;
            integ.run(n, dt)?;
        }
        out.push(integ.state());
    }
    Ok(out)
}

/// Trapezoid projection (1/T)∫ y(t)·e^{+im(Δt+φ)} dt of uniformly sampled
/// values over a window spanning an integer number of beat periods (any
/// window if m = 0).
pub fn extract_harmonic(
    samples: &[(f64, C64)],
    m: i32,
    delta_beat: f64,
    phi: f64,
) -> Result<C64> {
    assert!(samples.len() >= 2, "need at least two samples");
    let t0 = samples[0].0;
    let t1 = samples[samples.len() - 1].0;
    let window = t1 - t0;
    if m != 0 {
        let period = TAU / delta_beat.abs();
        let cycles = window / period;
        if (cycles - cycles.round()).abs() > 1e-9 * cycles.max(1.0) {
            return Err(Error::WindowMismatch { window, period });
        }
    }
    let mut acc = C64::from(0.0);
    for pair in samples.windows(2) {
        let (ta, ya) = pair[0];
        let (tb, yb) = pair[1];
        let fa = ya * (C64::i() * (m as f64) * (delta_beat * ta + phi)).exp();
        let fb = yb * (C64::i() * (m as f64) * (delta_beat * tb + phi)).exp();
        acc += (fa + fb) * C64::from((tb - ta) / 2.0);
    }
    Ok(acc / C64::from(window))
}

/// The m = 0 harmonic of the quasi-steady ρ₂₁, summing all orders of Ω_{s2}.
pub fn steady_rho21_harmonic(
    params: &SystemParams,
    config: &IntegrationConfig,
) -> Result<C64> {
    params.validate()?;
    config.validate(params)?;
    let mut integ = Integrator::new(params, DensityVector::ground());

    let n_transient = (config.transient_time / config.dt).ceil() as usize;
    integ.run(n_transient, config.dt)?;

    let delta = params.delta_beat();
    // Degenerate sidebands have no beat period; fall back to a fixed window.
    let window = if delta != 0.0 && params.omega_s2 != 0.0 {
        config.extraction_periods as f64 * TAU / delta.abs()
    } else {
        100.0
    };
    let n = (window / config.dt).ceil().max(8.0) as usize;
    let dt = window / n as f64;
    let mut samples = Vec::with_capacity(n + 1);
    samples.push((integ.t, integ.rho21()));
    for _ in 0..n {
        integ.step(dt);
        samples.push((integ.t, integ.rho21()));
    }
    if !integ.state.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::Divergence { t: integ.t });
    }
    extract_harmonic(&samples, 0, delta, params.phi)
}

/// Time-domain susceptibility: the oracle analogue of the hierarchy result,
/// summing all orders of Ω_{s2}. `chi_scale` must match the scale used for
/// the hierarchy side (see `spectra::chi_scale`).
pub fn oracle_susceptibility(
    params: &SystemParams,
    config: &IntegrationConfig,
    chi_scale: f64,
) -> Result<C64> {
    let harmonic = steady_rho21_harmonic(params, config)?;
    Ok(harmonic * C64::from(chi_scale))
}
