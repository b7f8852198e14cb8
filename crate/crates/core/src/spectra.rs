//! Probe susceptibility, detuning sweeps, group index, and spectral
//! feature location.
//!
//! Only the zero harmonics oscillate at the probe frequency, so the
//! susceptibility collects the ρ₂₁ components of R₀⁽⁰⁾, R₂⁽⁰⁾ and R₄⁽⁰⁾
//! weighted by powers of Ω_{s2}. The prefactor 2Nd₁₂/ε₀E_p is taken as 1 at
//! the reference probe amplitude; since E_p ∝ Ω_p, it scales as
//! `omega_p_reference / omega_p` away from the reference, making χ
//! independent of the probe strength in the weak-probe regime.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::floquet::{solve_hierarchy, SolverConfig};
use crate::model::{build_liouvillian, C64};
use crate::{Error, Result, SystemParams};

#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilitySample {
    pub delta_p: f64,
    /// χ′, dispersion.
    pub chi_re: f64,
    /// χ″, absorption (negative = gain).
    pub chi_im: f64,
    /// Group index; absent at sweep endpoints and next to invalid points.
    pub n_g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub delta_p_min: f64,
    pub delta_p_max: f64,
    pub num_points: usize,
    /// Optical carrier frequency ω_p entering the group index, in
    /// reference-rate units. Illustrative; only the sign of ∂χ′/∂Δ_p is
    /// carrier-independent.
    pub omega_p_carrier: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            delta_p_min: -6.0,
            delta_p_max: 6.0,
            num_points: 2401,
            omega_p_carrier: 1000.0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<&Self> {
        if self.num_points < 3 {
            return Err(Error::GridTooSmall {
                needed: 3,
                got: self.num_points,
            });
        }
        if !(self.delta_p_min < self.delta_p_max) {
            return Err(Error::InvalidParameter {
                field: "delta_p_min",
                value: self.delta_p_min,
                reason: "grid bounds must satisfy min < max",
            });
        }
        if !(self.omega_p_carrier > 0.0) {
            return Err(Error::InvalidParameter {
                field: "omega_p_carrier",
                value: self.omega_p_carrier,
                reason: "must be positive",
            });
        }
        Ok(self)
    }

    pub fn step(&self) -> f64 {
        (self.delta_p_max - self.delta_p_min) / (self.num_points - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.num_points)
            .map(|k| self.delta_p_min + h * k as f64)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub params: SystemParams,
    pub spec: SweepSpec,
    /// One entry per grid point; `Err` marks a point where the solver failed.
    pub samples: Vec<std::result::Result<SusceptibilitySample, String>>,
}

impl SweepResult {
    pub fn valid_samples(&self) -> impl Iterator<Item = &SusceptibilitySample> {
        self.samples.iter().filter_map(|s| s.as_ref().ok())
    }

    pub fn invalid_count(&self) -> usize {
        self.samples.iter().filter(|s| s.is_err()).count()
    }
}

/// Overall scale applied to the ρ₂₁ harmonic sum: the prefactor, corrected
/// by `omega_p_reference / omega_p` for its 1/E_p content.
pub fn chi_scale(params: &SystemParams, config: &SolverConfig) -> f64 {
    if params.omega_p > 0.0 {
        config.chi_prefactor * config.omega_p_reference / params.omega_p
    } else {
        config.chi_prefactor
    }
}

/// Weak-probe susceptibility at a single parameter point: the scaled sum of
/// the zero-harmonic ρ₂₁ coefficients weighted by powers of Ω_{s2}.
pub fn susceptibility(params: &SystemParams, config: &SolverConfig) -> Result<C64> {
    params.validate()?;
    let parts = build_liouvillian(params);
    let sol = solve_hierarchy(&parts, config)?;
    let mut sum = C64::from(0.0);
    for n in [0usize, 2, 4] {
        if let Some(coeff) = sol.get(n, 0) {
            sum += coeff.rho21() * C64::from(params.omega_s2.powi(n as i32));
        }
    }
    Ok(sum * C64::from(chi_scale(params, config)))
}

/// n_g = 1 + 2πχ′ + 2πω_p ∂χ′/∂Δ_p on a uniform three-point stencil
/// centered at `at`.
pub fn group_index(samples: &[(f64, f64)], at: usize, omega_p_carrier: f64) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::GridTooSmall {
            needed: 3,
            got: samples.len(),
        });
    }
    assert!(at > 0 && at + 1 < samples.len(), "stencil needs interior point");
    let h_left = samples[at].0 - samples[at - 1].0;
    let h_right = samples[at + 1].0 - samples[at].0;
    if (h_left - h_right).abs() > 1e-9 * h_left.abs().max(h_right.abs()) {
        return Err(Error::NonUniformGrid {
            expected: h_left,
            found: h_right,
        });
    }
    let chi_re = samples[at].1;
    let slope = (samples[at + 1].1 - samples[at - 1].1) / (h_left + h_right);
    Ok(1.0 + TAU * chi_re + TAU * omega_p_carrier * slope)
}

/// Evaluates the susceptibility on the detuning grid, varying only Δ_p, and
/// fills the group index at interior points with valid neighbors. Failed
/// points are recorded, not fatal.
pub fn sweep(
    params: &SystemParams,
    spec: &SweepSpec,
    config: &SolverConfig,
) -> Result<SweepResult> {
    params.validate()?;
    spec.validate()?;
    let grid = spec.grid();
    let chis: Vec<std::result::Result<C64, String>> = grid
        .par_iter()
        .map(|&delta_p| {
            let point = SystemParams {
                delta_p,
                ..params.clone()
            };
            susceptibility(&point, config).map_err(|e| e.to_string())
        })
        .collect();

    let mut samples: Vec<std::result::Result<SusceptibilitySample, String>> = grid
        .iter()
        .zip(&chis)
        .map(|(&delta_p, chi)| match chi {
            Ok(c) => Ok(SusceptibilitySample {
                delta_p,
                chi_re: c.re,
                chi_im: c.im,
                n_g: None,
            }),
            Err(e) => Err(e.clone()),
        })
        .collect();

    let h = spec.step();
    for k in 1..grid.len() - 1 {
        let (left, right) = match (&chis[k - 1], &chis[k + 1]) {
            (Ok(l), Ok(r)) => (l.re, r.re),
            _ => continue,
        };
        if let Ok(sample) = &mut samples[k] {
            let slope = (right - left) / (2.0 * h);
            sample.n_g =
                Some(1.0 + TAU * sample.chi_re + TAU * spec.omega_p_carrier * slope);
        }
    }

    Ok(SweepResult {
        params: params.clone(),
        spec: spec.clone(),
        samples,
    })
}

/// A strict local extremum of χ″.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremum {
    pub delta_p: f64,
    pub height: f64,
    /// Sign of ∂χ′/∂Δ_p at the extremum (−1, 0, +1).
    pub dispersion_slope_sign: i8,
}

#[derive(Debug, Clone, Default)]
pub struct FeatureReport {
    pub maxima: Vec<Extremum>,
    pub minima: Vec<Extremum>,
    /// Sign of ∂χ′/∂Δ_p midway between the two features of χ″ closest to the
    /// grid center, when at least two exist.
    pub mid_slope_sign: Option<i8>,
}

impl FeatureReport {
    /// Maxima ordered by height, tallest first.
    pub fn maxima_by_height(&self) -> Vec<&Extremum> {
        let mut v: Vec<&Extremum> = self.maxima.iter().collect();
        v.sort_by(|a, b| b.height.total_cmp(&a.height));
        v
    }
}

/// Locates local maxima/minima of χ″ (strict against both neighbors;
/// plateaus report the leftmost point) and slope signs of χ′.
pub fn find_features(result: &SweepResult) -> FeatureReport {
    let pts: Vec<&SusceptibilitySample> = result.valid_samples().collect();
    let mut report = FeatureReport::default();
    if pts.len() < 3 {
        return report;
    }
    let h = result.spec.step();
    let slope_sign = |k: usize| -> i8 {
        let lo = k.saturating_sub(1);
        let hi = (k + 1).min(pts.len() - 1);
        let s = (pts[hi].chi_re - pts[lo].chi_re) / ((hi - lo) as f64 * h);
        if s > 0.0 {
            1
        } else if s < 0.0 {
            -1
        } else {
            0
        }
    };
    let mut extrema_ix: Vec<(usize, bool)> = Vec::new();
    let mut k = 1;
    while k + 1 < pts.len() {
        let y = pts[k].chi_im;
        // Plateau handling: extend right over exact ties, require strict
        // inequality on both flanks, report the leftmost plateau point.
        let mut j = k;
        while j + 1 < pts.len() && pts[j + 1].chi_im == y {
            j += 1;
        }
        if j + 1 < pts.len() {
            let left = pts[k - 1].chi_im;
            let right = pts[j + 1].chi_im;
            if y > left && y > right {
                extrema_ix.push((k, true));
            } else if y < left && y < right {
                extrema_ix.push((k, false));
            }
        }
        k = j + 1;
    }
    for &(ix, is_max) in &extrema_ix {
        let e = Extremum {
            delta_p: pts[ix].delta_p,
            height: pts[ix].chi_im,
            dispersion_slope_sign: slope_sign(ix),
        };
        if is_max {
            report.maxima.push(e);
        } else {
            report.minima.push(e);
        }
    }
    // Inner pair: the two extrema of χ″ nearest the grid center.
    if extrema_ix.len() >= 2 {
        let center = (result.spec.delta_p_min + result.spec.delta_p_max) / 2.0;
        let mut by_distance: Vec<usize> = extrema_ix.iter().map(|&(ix, _)| ix).collect();
        by_distance.sort_by(|&a, &b| {
            (pts[a].delta_p - center)
                .abs()
                .total_cmp(&(pts[b].delta_p - center).abs())
        });
        let (a, b) = (by_distance[0], by_distance[1]);
        let mid_delta = (pts[a].delta_p + pts[b].delta_p) / 2.0;
        let mid_ix = pts
            .iter()
            .enumerate()
            .min_by(|(_, p), (_, q)| {
                (p.delta_p - mid_delta)
                    .abs()
                    .total_cmp(&(q.delta_p - mid_delta).abs())
            })
            .map(|(ix, _)| ix)
            .unwrap();
        report.mid_slope_sign = Some(slope_sign(mid_ix.clamp(1, pts.len() - 2)));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::SolverConfig;

    fn perturbed_params() -> SystemParams {
        SystemParams {
            omega_p: 0.01,
            omega_c: 4.0,
            omega_s1: 0.2,
            omega_s2: 0.2,
            delta_s1: 0.2,
            delta_s2: -0.2,
            gamma_21: 0.14,
            gamma_32: 0.79,
            gamma_34: 1.0,
            gamma_41: 0.01,
            ..SystemParams::default()
        }
    }

    #[test]
    fn chi_reduces_to_zeroth_order_without_perturbation() {
        let params = SystemParams {
            omega_s1: 0.0,
            omega_s2: 0.0,
            ..perturbed_params()
        };
        let cfg = SolverConfig::default();
        let chi = susceptibility(&params, &cfg).unwrap();
        let parts = build_liouvillian(&params);
        let r0 = crate::floquet::solve_zeroth(&parts).unwrap();
        // At the reference probe amplitude the scale is exactly 1.
        assert_eq!(chi, r0.rho21());
    }

    #[test]
    fn group_index_constant_dispersion() {
        let samples: Vec<(f64, f64)> = (0..5).map(|k| (k as f64 * 0.1, 0.3)).collect();
        let ng = group_index(&samples, 2, 1000.0).unwrap();
        assert!((ng - (1.0 + TAU * 0.3)).abs() < 1e-12);
    }

    #[test]
    fn group_index_exact_on_affine_dispersion() {
        let a = -0.7;
        let samples: Vec<(f64, f64)> = (0..7)
            .map(|k| {
                let x = -0.3 + k as f64 * 0.1;
                (x, a * x)
            })
            .collect();
        let omega = 1000.0;
        let ng = group_index(&samples, 3, omega).unwrap();
        let expect = 1.0 + TAU * samples[3].1 + TAU * omega * a;
        assert!((ng - expect).abs() < 1e-9 * expect.abs());
    }

    #[test]
    fn group_index_rejects_non_uniform_grid() {
        let samples = vec![(0.0, 0.1), (0.1, 0.2), (0.3, 0.3)];
        assert!(matches!(
            group_index(&samples, 1, 1000.0),
            Err(Error::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn sweep_matches_pointwise_calls() {
        let params = perturbed_params();
        let spec = SweepSpec {
            delta_p_min: -1.0,
            delta_p_max: 1.0,
            num_points: 21,
            omega_p_carrier: 1000.0,
        };
        let cfg = SolverConfig::default();
        let result = sweep(&params, &spec, &cfg).unwrap();
        for (k, &delta_p) in spec.grid().iter().enumerate() {
            let point = SystemParams {
                delta_p,
                ..params.clone()
            };
            let chi = susceptibility(&point, &cfg).unwrap();
            let sample = result.samples[k].as_ref().unwrap();
            assert_eq!(sample.chi_re, chi.re);
            assert_eq!(sample.chi_im, chi.im);
        }
    }

    #[test]
    fn sweep_endpoints_have_no_group_index() {
        let result = sweep(
            &perturbed_params(),
            &SweepSpec {
                delta_p_min: -1.0,
                delta_p_max: 1.0,
                num_points: 11,
                omega_p_carrier: 1000.0,
            },
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(result.samples[0].as_ref().unwrap().n_g.is_none());
        assert!(result.samples[10].as_ref().unwrap().n_g.is_none());
        for k in 1..10 {
            assert!(result.samples[k].as_ref().unwrap().n_g.is_some());
        }
    }

    #[test]
    fn flat_spectrum_has_no_features() {
        let params = SystemParams::default(); // everything off → χ ≡ 0
        let result = sweep(
            &SystemParams {
                gamma_21: 0.14,
                gamma_32: 0.79,
                gamma_34: 1.0,
                gamma_41: 0.01,
                ..params
            },
            &SweepSpec {
                delta_p_min: -1.0,
                delta_p_max: 1.0,
                num_points: 11,
                omega_p_carrier: 1000.0,
            },
            &SolverConfig::default(),
        )
        .unwrap();
        let report = find_features(&result);
        assert!(report.maxima.is_empty());
        assert!(report.minima.is_empty());
        assert!(report.mid_slope_sign.is_none());
    }

    #[test]
    fn invalid_spec_rejected() {
        let bad = SweepSpec {
            delta_p_min: 1.0,
            delta_p_max: -1.0,
            num_points: 11,
            omega_p_carrier: 1000.0,
        };
        assert!(bad.validate().is_err());
        let tiny = SweepSpec {
            num_points: 2,
            ..SweepSpec::default()
        };
        assert!(tiny.validate().is_err());
    }
}
