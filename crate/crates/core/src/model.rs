//! Domain types and the affine Liouvillian decomposition.
//!
//! The density matrix of the four-level system, with ρ₃₃ eliminated through
//! the trace condition, is stacked into a 15-component vector R obeying
//!
//! ```text
//! ∂R/∂t + Σ(t) = M(t) R
//! ```
//!
//! where both M and Σ split into a static part and a pair of counter-rotating
//! parts oscillating at the beat frequency Δ of the two perturbing fields:
//!
//! ```text
//! M(t) = M₀ + M₊ Ω_{s2} e^{−i(Δt+φ)} + M₋ Ω_{s2} e^{+i(Δt+φ)}
//! ```
//!
//! The harmonic pieces stored here carry neither the Ω_{s2} factor nor the
//! phase; those are applied by the solver and by [`reassemble_generator`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Dimension of the stacked density vector (16 elements minus eliminated ρ₃₃).
pub const DIM: usize = 15;

/// Element order of the stacked vector:
/// (ρ₁₁, ρ₁₂, ρ₁₃, ρ₁₄, ρ₂₁, ρ₂₂, ρ₂₃, ρ₂₄, ρ₃₁, ρ₃₂, ρ₃₄, ρ₄₁, ρ₄₂, ρ₄₃, ρ₄₄).
pub mod idx {
    pub const RHO11: usize = 0;
    pub const RHO12: usize = 1;
    pub const RHO13: usize = 2;
    pub const RHO14: usize = 3;
    pub const RHO21: usize = 4;
    pub const RHO22: usize = 5;
    pub const RHO23: usize = 6;
    pub const RHO24: usize = 7;
    pub const RHO31: usize = 8;
    pub const RHO32: usize = 9;
    pub const RHO34: usize = 10;
    pub const RHO41: usize = 11;
    pub const RHO42: usize = 12;
    pub const RHO43: usize = 13;
    pub const RHO44: usize = 14;

    /// Index of ρ_ji given the index of ρ_ij.
    pub const TRANSPOSE: [usize; 15] = [0, 4, 8, 11, 1, 5, 9, 12, 2, 6, 13, 3, 7, 10, 14];
}

/// Sign convention for the beat frequency Δ of the two perturbing fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaConvention {
    /// Δ = Δ_{s2} − Δ_{s1} (default).
    #[default]
    S2MinusS1,
    /// Δ = Δ_{s1} − Δ_{s2}, kept as a switch for sensitivity experiments.
    S1MinusS2,
}

/// Physical parameters, dimensionless in units of a reference decay rate.
/// Rabi frequencies are real and non-negative; all relative phase of the two
/// perturbing fields is carried by `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub omega_p: f64,
    pub omega_c: f64,
    pub omega_s1: f64,
    pub omega_s2: f64,
    pub delta_p: f64,
    pub delta_c: f64,
    pub delta_s1: f64,
    pub delta_s2: f64,
    pub gamma_21: f64,
    pub gamma_32: f64,
    pub gamma_34: f64,
    pub gamma_41: f64,
    pub r: f64,
    pub phi: f64,
    pub delta_convention: DeltaConvention,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            omega_p: 0.0,
            omega_c: 0.0,
            omega_s1: 0.0,
            omega_s2: 0.0,
            delta_p: 0.0,
            delta_c: 0.0,
            delta_s1: 0.0,
            delta_s2: 0.0,
            gamma_21: 0.0,
            gamma_32: 0.0,
            gamma_34: 0.0,
            gamma_41: 0.0,
            r: 0.0,
            phi: 0.0,
            delta_convention: DeltaConvention::default(),
        }
    }
}

impl SystemParams {
    /// Beat frequency Δ between the two perturbing fields; the single source
    /// of residual time dependence in the equations of motion.
    pub fn delta_beat(&self) -> f64 {
        match self.delta_convention {
            DeltaConvention::S2MinusS1 => self.delta_s2 - self.delta_s1,
            DeltaConvention::S1MinusS2 => self.delta_s1 - self.delta_s2,
        }
    }

    /// Checks that all fields are finite and that rates and Rabi magnitudes
    /// are non-negative; reports the first violated field.
    pub fn validate(&self) -> Result<&Self> {
        let nonneg = [
            ("omega_p", self.omega_p),
            ("omega_c", self.omega_c),
            ("omega_s1", self.omega_s1),
            ("omega_s2", self.omega_s2),
            ("gamma_21", self.gamma_21),
            ("gamma_32", self.gamma_32),
            ("gamma_34", self.gamma_34),
            ("gamma_41", self.gamma_41),
            ("r", self.r),
        ];
        for (field, value) in nonneg {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    field,
                    value,
                    reason: "non-finite value",
                });
            }
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    field,
                    value,
                    reason: "negative rate",
                });
            }
        }
        let finite = [
            ("delta_p", self.delta_p),
            ("delta_c", self.delta_c),
            ("delta_s1", self.delta_s1),
            ("delta_s2", self.delta_s2),
            ("phi", self.phi),
        ];
        for (field, value) in finite {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    field,
                    value,
                    reason: "non-finite value",
                });
            }
        }
        Ok(self)
    }
}

/// The 15-component stacked density vector R.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityVector(pub CVec);

impl DensityVector {
    pub fn zeros() -> Self {
        Self(CVec::zeros(DIM))
    }

    pub fn from_fn(f: impl Fn(usize) -> C64) -> Self {
        Self(CVec::from_fn(DIM, |i, _| f(i)))
    }

    /// Ground state ρ₁₁ = 1.
    pub fn ground() -> Self {
        let mut v = Self::zeros();
        v.0[idx::RHO11] = C64::new(1.0, 0.0);
        v
    }

    /// Probe coherence ρ₂₁, the component entering the susceptibility.
    pub fn rho21(&self) -> C64 {
        self.0[idx::RHO21]
    }

    /// Trace of the reconstructed 4×4 density matrix; pinned to 1 whenever
    /// ρ₃₃ comes from the trace condition, so this is 1 identically for any
    /// vector paired with [`reconstruct_rho33`].
    pub fn trace(&self) -> C64 {
        self.0[idx::RHO11] + self.0[idx::RHO22] + self.0[idx::RHO44] + reconstruct_rho33(self)
    }

    /// Largest deviation from ρ_ij = conj(ρ_ji) over all element pairs.
    pub fn hermiticity_defect(&self) -> f64 {
        (0..DIM)
            .map(|i| (self.0[i] - self.0[idx::TRANSPOSE[i]].conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// Eliminated population: ρ₃₃ = 1 − ρ₁₁ − ρ₂₂ − ρ₄₄.
pub fn reconstruct_rho33(r: &DensityVector) -> C64 {
    C64::new(1.0, 0.0) - r.0[idx::RHO11] - r.0[idx::RHO22] - r.0[idx::RHO44]
}

/// Harmonic decomposition of the generator. `m_plus`/`sigma_plus` multiply
/// Ω_{s2}·e^{−i(Δt+φ)} and `m_minus`/`sigma_minus` multiply
/// Ω_{s2}·e^{+i(Δt+φ)}; neither carries the Ω_{s2} factor or the phase.
#[derive(Debug, Clone)]
pub struct LiouvillianParts {
    pub m0: CMat,
    pub m_plus: CMat,
    pub m_minus: CMat,
    pub sigma0: CVec,
    pub sigma_plus: CVec,
    pub sigma_minus: CVec,
    pub delta_beat: f64,
}

/// Harmonic slot a coefficient lands in.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Harm {
    /// Static.
    Zero,
    /// Multiplies Ω_{s2} e^{−i(Δt+φ)}.
    Plus,
    /// Multiplies Ω_{s2} e^{+i(Δt+φ)}.
    Minus,
}

struct Builder {
    m: [CMat; 3],
    s: [CVec; 3],
}

impl Builder {
    fn new() -> Self {
        Self {
            m: [
                CMat::zeros(DIM, DIM),
                CMat::zeros(DIM, DIM),
                CMat::zeros(DIM, DIM),
            ],
            s: [CVec::zeros(DIM), CVec::zeros(DIM), CVec::zeros(DIM)],
        }
    }

    fn slot(h: Harm) -> usize {
        match h {
            Harm::Zero => 0,
            Harm::Plus => 1,
            Harm::Minus => 2,
        }
    }

    /// Adds `coeff · ρ(col)` to the right-hand side of row `row`.
    fn coef(&mut self, row: usize, col: usize, h: Harm, coeff: C64) {
        self.m[Self::slot(h)][(row, col)] += coeff;
    }

    /// Adds `coeff · ρ₃₃` to row `row`, expanding through the trace
    /// condition: ρ₃₃ = 1 − ρ₁₁ − ρ₂₂ − ρ₄₄. The constant lands in Σ with
    /// the opposite sign (Σ sits on the left of ∂R/∂t + Σ = MR).
    fn rho33(&mut self, row: usize, h: Harm, coeff: C64) {
        let k = Self::slot(h);
        self.s[k][row] -= coeff;
        for col in [idx::RHO11, idx::RHO22, idx::RHO44] {
            self.m[k][(row, col)] -= coeff;
        }
    }

    /// Fills the row for ρ_ji by conjugating the already-built row for ρ_ij:
    /// every coefficient is conjugated, column indices transpose, and the two
    /// rotating harmonics swap (conjugation maps e^{−i(Δt+φ)} to e^{+i(Δt+φ)}).
    fn conjugate_row(&mut self, printed: usize) {
        let target = idx::TRANSPOSE[printed];
        let swap = [0usize, 2, 1];
        for (k, &ks) in swap.iter().enumerate() {
            for col in 0..DIM {
                self.m[k][(target, idx::TRANSPOSE[col])] = self.m[ks][(printed, col)].conj();
            }
            self.s[k][target] = self.s[ks][printed].conj();
        }
    }
}

/// Builds the harmonic decomposition of the generator from the equations of
/// motion. The six coherence rows without a printed equation (ρ₁₂, ρ₁₃, ρ₁₄,
/// ρ₂₃, ρ₂₄, ρ₄₃) are obtained by conjugating their printed partners.
pub fn build_liouvillian(params: &SystemParams) -> LiouvillianParts {
    use idx::*;
    let i = C64::i();
    let op = C64::from(params.omega_p);
    let oc = C64::from(params.omega_c);
    let os1 = C64::from(params.omega_s1);
    let g21 = params.gamma_21;
    let g32 = params.gamma_32;
    let g34 = params.gamma_34;
    let g41 = params.gamma_41;
    let r = params.r;
    let dp = params.delta_p;
    let dc = params.delta_c;
    let ds1 = params.delta_s1;

    let mut b = Builder::new();

    // ρ̇₁₁ = γ₂₁ρ₂₂ + r(ρ₂₂ − ρ₁₁) + iΩ_pρ₂₁ − iΩ_pρ₁₂ + γ₄₁ρ₄₄
    b.coef(RHO11, RHO11, Harm::Zero, C64::from(-r));
    b.coef(RHO11, RHO22, Harm::Zero, C64::from(g21 + r));
    b.coef(RHO11, RHO21, Harm::Zero, i * op);
    b.coef(RHO11, RHO12, Harm::Zero, -i * op);
    b.coef(RHO11, RHO44, Harm::Zero, C64::from(g41));

    // ρ̇₂₂ = γ₃₂ρ₃₃ − γ₂₁ρ₂₂ + r(ρ₁₁ − ρ₂₂) + iΩ_pρ₁₂ + iΩ_cρ₃₂ − iΩ_cρ₂₃ − iΩ_pρ₂₁
    b.rho33(RHO22, Harm::Zero, C64::from(g32));
    b.coef(RHO22, RHO22, Harm::Zero, C64::from(-g21 - r));
    b.coef(RHO22, RHO11, Harm::Zero, C64::from(r));
    b.coef(RHO22, RHO12, Harm::Zero, i * op);
    b.coef(RHO22, RHO32, Harm::Zero, i * oc);
    b.coef(RHO22, RHO23, Harm::Zero, -i * oc);
    b.coef(RHO22, RHO21, Harm::Zero, -i * op);

    // ρ̇₄₄ = γ₃₄ρ₃₃ + i(Ω_{s1} + Ω_{s2}e^{+i(Δt+φ)})ρ₃₄
    //        − i(Ω_{s1} + Ω_{s2}e^{−i(Δt+φ)})ρ₄₃ − γ₄₁ρ₄₄
    b.rho33(RHO44, Harm::Zero, C64::from(g34));
    b.coef(RHO44, RHO34, Harm::Zero, i * os1);
    b.coef(RHO44, RHO34, Harm::Minus, i);
    b.coef(RHO44, RHO43, Harm::Zero, -i * os1);
    b.coef(RHO44, RHO43, Harm::Plus, -i);
    b.coef(RHO44, RHO44, Harm::Zero, C64::from(-g41));

    // ρ̇₂₁ = iΔ_pρ₂₁ + iΩ_p(ρ₁₁ − ρ₂₂) + iΩ_cρ₃₁ − ½(γ₂₁ + 2r)ρ₂₁
    b.coef(RHO21, RHO21, Harm::Zero, i * dp - C64::from((g21 + 2.0 * r) / 2.0));
    b.coef(RHO21, RHO11, Harm::Zero, i * op);
    b.coef(RHO21, RHO22, Harm::Zero, -i * op);
    b.coef(RHO21, RHO31, Harm::Zero, i * oc);

    // ρ̇₃₁ = i(Δ_p + Δ_c)ρ₃₁ + i(Ω_{s1} + Ω_{s2}e^{−i(Δt+φ)})ρ₄₁ + iΩ_cρ₂₁
    //        − iΩ_pρ₃₂ − ½(γ₃₄ + γ₃₂ + r)ρ₃₁
    b.coef(
        RHO31,
        RHO31,
        Harm::Zero,
        i * (dp + dc) - C64::from((g34 + g32 + r) / 2.0),
    );
    b.coef(RHO31, RHO41, Harm::Zero, i * os1);
    b.coef(RHO31, RHO41, Harm::Plus, i);
    b.coef(RHO31, RHO21, Harm::Zero, i * oc);
    b.coef(RHO31, RHO32, Harm::Zero, -i * op);

    // ρ̇₃₂ = iΔ_cρ₃₂ + iΩ_c(ρ₂₂ − ρ₃₃) + i(Ω_{s1} + Ω_{s2}e^{−i(Δt+φ)})ρ₄₂
    //        − iΩ_pρ₃₁ − ½(γ₃₄ + γ₃₂ + γ₂₁ + r)ρ₃₂
    b.coef(
        RHO32,
        RHO32,
        Harm::Zero,
        i * dc - C64::from((g34 + g32 + g21 + r) / 2.0),
    );
    b.coef(RHO32, RHO22, Harm::Zero, i * oc);
    b.rho33(RHO32, Harm::Zero, -i * oc);
    b.coef(RHO32, RHO42, Harm::Zero, i * os1);
    b.coef(RHO32, RHO42, Harm::Plus, i);
    b.coef(RHO32, RHO31, Harm::Zero, -i * op);

    // ρ̇₃₄ = iΔ_{s1}ρ₃₄ + iΩ_cρ₂₄ + i(Ω_{s1} + Ω_{s2}e^{−i(Δt+φ)})(ρ₄₄ − ρ₃₃)
    //        − ½(γ₃₄ + γ₃₂ + γ₄₁)ρ₃₄
    b.coef(
        RHO34,
        RHO34,
        Harm::Zero,
        i * ds1 - C64::from((g34 + g32 + g41) / 2.0),
    );
    b.coef(RHO34, RHO24, Harm::Zero, i * oc);
    b.coef(RHO34, RHO44, Harm::Zero, i * os1);
    b.coef(RHO34, RHO44, Harm::Plus, i);
    b.rho33(RHO34, Harm::Zero, -i * os1);
    b.rho33(RHO34, Harm::Plus, -i);

    // ρ̇₄₁ = i(Δ_p + Δ_c − Δ_{s1})ρ₄₁ + i(Ω_{s1} + Ω_{s2}e^{+i(Δt+φ)})ρ₃₁
    //        − iΩ_pρ₄₂ − ½(γ₄₁ + r)ρ₄₁
    b.coef(
        RHO41,
        RHO41,
        Harm::Zero,
        i * (dp + dc - ds1) - C64::from((g41 + r) / 2.0),
    );
    b.coef(RHO41, RHO31, Harm::Zero, i * os1);
    b.coef(RHO41, RHO31, Harm::Minus, i);
    b.coef(RHO41, RHO42, Harm::Zero, -i * op);

    // ρ̇₄₂ = i(Δ_c − Δ_{s1})ρ₄₂ + i(Ω_{s1} + Ω_{s2}e^{+i(Δt+φ)})ρ₃₂ − iΩ_cρ₄₃
    //        − iΩ_pρ₄₁ − ½(γ₂₁ + γ₄₁ + r)ρ₄₂
    b.coef(
        RHO42,
        RHO42,
        Harm::Zero,
        i * (dc - ds1) - C64::from((g21 + g41 + r) / 2.0),
    );
    b.coef(RHO42, RHO32, Harm::Zero, i * os1);
    b.coef(RHO42, RHO32, Harm::Minus, i);
    b.coef(RHO42, RHO43, Harm::Zero, -i * oc);
    b.coef(RHO42, RHO41, Harm::Zero, -i * op);

    // Unprinted partners ρ₁₂, ρ₁₃, ρ₂₃, ρ₄₃, ρ₁₄, ρ₂₄.
    for printed in [RHO21, RHO31, RHO32, RHO34, RHO41, RHO42] {
        b.conjugate_row(printed);
    }

    let [m0, m_plus, m_minus] = b.m;
    let [sigma0, sigma_plus, sigma_minus] = b.s;
    LiouvillianParts {
        m0,
        m_plus,
        m_minus,
        sigma0,
        sigma_plus,
        sigma_minus,
        delta_beat: params.delta_beat(),
    }
}

/// Phase factor e^{−i(Δt+φ)} multiplying the `plus` harmonic pieces.
pub fn beat_phase(delta_beat: f64, phi: f64, t: f64) -> C64 {
    (-C64::i() * (delta_beat * t + phi)).exp()
}

/// Reassembles M(t) and Σ(t) from the harmonic pieces.
pub fn reassemble_generator(
    parts: &LiouvillianParts,
    omega_s2: f64,
    phi: f64,
    t: f64,
) -> (CMat, CVec) {
    let p = beat_phase(parts.delta_beat, phi, t) * omega_s2;
    let q = p.conj();
    let m = &parts.m0 + &parts.m_plus * p + &parts.m_minus * q;
    let s = &parts.sigma0 + &parts.sigma_plus * p + &parts.sigma_minus * q;
    (m, s)
}

impl LiouvillianParts {
    /// dR/dt = M(t)R − Σ(t), written into `out` without allocating.
    /// `scratch` is clobbered.
    pub fn deriv_into(
        &self,
        state: &CVec,
        omega_s2: f64,
        phi: f64,
        t: f64,
        out: &mut CVec,
        scratch: &mut CVec,
    ) {
        let one = C64::new(1.0, 0.0);
        self.m0.mul_to(state, out);
        *out -= &self.sigma0;
        if omega_s2 != 0.0 {
            let p = beat_phase(self.delta_beat, phi, t) * omega_s2;
            self.m_plus.mul_to(state, scratch);
            *scratch -= &self.sigma_plus;
            out.axpy(p, scratch, one);
            self.m_minus.mul_to(state, scratch);
            *scratch -= &self.sigma_minus;
            out.axpy(p.conj(), scratch, one);
        }
    }
}
