//! Two qubits, each coupled to its own amplitude-damping reservoir.
//!
//! Two independent routes to ρ(t):
//! * [`analytic_evolve`]: the exact product channel for zero-temperature
//!   reservoirs, written out entrywise in the computational basis;
//! * [`integrate`]: fixed-step RK4 on the master equation, valid for any
//!   thermal occupation and used as the numerical oracle for the former.
//!
//! Both work in the interaction picture, so the free qubit Hamiltonian does
//! not appear.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::matkit::{kron, ComplexMatrix};
use crate::states::{DensityMatrix, StateError};

/// Default RK4 step.
pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid damping profile: {0}")]
    InvalidProfile(String),
    #[error("evolution time must be finite and non-negative, got {0}")]
    NegativeTime(f64),
    #[error("integration step must be finite and positive, got {0}")]
    InvalidStep(f64),
    #[error("checkpoint times must be ascending")]
    UnsortedTimes,
    #[error("integrated state failed validation (step too large?): {0}")]
    ValidationFailure(StateError),
}

/// Damping rates γ₁, γ₂ (1/time) and thermal occupations n̄₁, n̄₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampingProfile {
    pub gamma1: f64,
    pub gamma2: f64,
    pub nbar1: f64,
    pub nbar2: f64,
}

impl DampingProfile {
    pub fn new(gamma1: f64, gamma2: f64, nbar1: f64, nbar2: f64) -> Result<Self, DynamicsError> {
        for (name, v) in [
            ("gamma1", gamma1),
            ("gamma2", gamma2),
            ("nbar1", nbar1),
            ("nbar2", nbar2),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(DynamicsError::InvalidProfile(format!(
                    "{name} = {v} must be finite and non-negative"
                )));
            }
        }
        Ok(Self {
            gamma1,
            gamma2,
            nbar1,
            nbar2,
        })
    }

    /// Zero-temperature reservoirs.
    pub fn quiet(gamma1: f64, gamma2: f64) -> Result<Self, DynamicsError> {
        Self::new(gamma1, gamma2, 0.0, 0.0)
    }

    pub fn is_quiet(&self) -> bool {
        self.nbar1 == 0.0 && self.nbar2 == 0.0
    }
}

/// Survival factors g_k = exp(−γ_k t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelFactors {
    pub g1: f64,
    pub g2: f64,
}

impl ChannelFactors {
    pub const IDENTITY: ChannelFactors = ChannelFactors { g1: 1.0, g2: 1.0 };

    /// Composition of two channels: factors multiply.
    pub fn then(self, other: ChannelFactors) -> ChannelFactors {
        ChannelFactors {
            g1: self.g1 * other.g1,
            g2: self.g2 * other.g2,
        }
    }
}

pub fn channel_factors(profile: &DampingProfile, t: f64) -> Result<ChannelFactors, DynamicsError> {
    check_time(t)?;
    Ok(ChannelFactors {
        g1: (-profile.gamma1 * t).exp(),
        g2: (-profile.gamma2 * t).exp(),
    })
}

fn check_time(t: f64) -> Result<(), DynamicsError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(DynamicsError::NegativeTime(t))
    }
}

/// Exact zero-temperature evolution of an arbitrary initial state.
///
/// Populations flow towards |00⟩; a coherence between |i,k⟩ and |j,l⟩ picks
/// up √g for every qubit slot where the two labels differ. Single-qubit
/// coherences of ρ(0) on the excited partner (ρ₃₂, ρ₃₁) feed the ρ₁₀, ρ₂₀
/// coherences as that partner decays.
pub fn analytic_evolve(rho0: &DensityMatrix, factors: ChannelFactors) -> DensityMatrix {
    let ChannelFactors { g1, g2 } = factors;
    let r = |i: usize, j: usize| rho0.get(i, j);
    let (s1, s2) = (g1.sqrt(), g2.sqrt());
    let s12 = (g1 * g2).sqrt();

    let f1 = (r(3, 2) * (1.0 - g1) + r(1, 0)) * s2;
    let f2 = (r(3, 1) * (1.0 - g2) + r(2, 0)) * s1;
    let h1 = (r(3, 3) * (1.0 - g1) + r(1, 1)) * g2;
    let h2 = (r(3, 3) * (1.0 - g2) + r(2, 2)) * g1;
    let h33 = r(3, 3) * (g1 * g2);
    let h00 =
        r(0, 0) + r(1, 1) * (1.0 - g2) + r(2, 2) * (1.0 - g1) + r(3, 3) * ((1.0 - g1) * (1.0 - g2));

    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = h00;
    m[(1, 1)] = h1;
    m[(2, 2)] = h2;
    m[(3, 3)] = h33;
    m[(1, 0)] = f1;
    m[(0, 1)] = f1.conj();
    m[(2, 0)] = f2;
    m[(0, 2)] = f2.conj();
    for (i, j, k) in [(0, 3, s12), (1, 2, s12), (1, 3, s1 * g2), (2, 3, g1 * s2)] {
        m[(i, j)] = r(i, j) * k;
        m[(j, i)] = r(j, i) * k;
    }
    DensityMatrix::assume_valid(m)
}

fn lowering_ops() -> [ComplexMatrix; 2] {
    let lower = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let id = ComplexMatrix::identity(2);
    [kron(&lower, &id), kron(&id, &lower)]
}

/// Dissipator applied to any 4×4 operator (not necessarily a state).
fn dissipator(rho: &ComplexMatrix, profile: &DampingProfile) -> ComplexMatrix {
    let ops = lowering_ops();
    let rates = [
        (profile.gamma1, profile.nbar1),
        (profile.gamma2, profile.nbar2),
    ];
    let mut out = ComplexMatrix::zeros(4, 4);
    for (a, (gamma, nbar)) in ops.iter().zip(rates) {
        if gamma == 0.0 {
            continue;
        }
        let ad = a.adjoint();
        let a_ad = a * &ad;
        let ad_a = &ad * a;
        let absorb = &(&(&ad * rho) * a).scale(2.0) - &(&(&a_ad * rho) + &(rho * &a_ad));
        let emit = &(&(a * rho) * &ad).scale(2.0) - &(&(&ad_a * rho) + &(rho * &ad_a));
        let term = &absorb.scale(nbar) + &emit.scale(nbar + 1.0);
        out = &out + &term.scale(gamma / 2.0);
    }
    out
}

/// Right-hand side dρ/dt of the master equation (interaction picture).
pub fn lindblad_rhs(rho: &DensityMatrix, profile: &DampingProfile) -> ComplexMatrix {
    dissipator(rho.matrix(), profile)
}

/// The master-equation generator as a sparse map on row-major vec(ρ).
#[derive(Debug, Clone)]
struct Generator {
    terms: Vec<(usize, usize, f64)>,
}

impl Generator {
    fn new(profile: &DampingProfile) -> Self {
        let mut terms = Vec::new();
        for src in 0..16 {
            let mut basis = ComplexMatrix::zeros(4, 4);
            basis[(src / 4, src % 4)] = Complex64::new(1.0, 0.0);
            let image = dissipator(&basis, profile);
            for dst in 0..16 {
                let v = image[(dst / 4, dst % 4)];
                debug_assert!(v.im == 0.0, "amplitude damping generator is real");
                if v.re != 0.0 {
                    terms.push((dst, src, v.re));
                }
            }
        }
        Self { terms }
    }

    #[inline]
    fn apply(&self, x: &[Complex64; 16]) -> [Complex64; 16] {
        let mut y = [Complex64::new(0.0, 0.0); 16];
        for &(dst, src, w) in &self.terms {
            y[dst] += x[src] * w;
        }
        y
    }

    fn rk4_step(&self, x: &mut [Complex64; 16], h: f64) {
        let axpy = |a: &[Complex64; 16], k: &[Complex64; 16], s: f64| -> [Complex64; 16] {
            std::array::from_fn(|i| a[i] + k[i] * s)
        };
        let k1 = self.apply(x);
        let k2 = self.apply(&axpy(x, &k1, h / 2.0));
        let k3 = self.apply(&axpy(x, &k2, h / 2.0));
        let k4 = self.apply(&axpy(x, &k3, h));
        for i in 0..16 {
            x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        hermitize(x);
    }

    fn advance(&self, x: &mut [Complex64; 16], span: f64, dt: f64) {
        if span <= 0.0 {
            return;
        }
        let ratio = span / dt;
        let mut full = ratio.floor();
        if ratio - full > 1.0 - 1e-9 {
            full += 1.0;
        }
        for _ in 0..full as u64 {
            self.rk4_step(x, dt);
        }
        let rest = span - full * dt;
        if rest > 1e-12 * dt {
            self.rk4_step(x, rest);
        }
    }
}

fn hermitize(x: &mut [Complex64; 16]) {
    for i in 0..4 {
        x[5 * i].im = 0.0;
        for j in (i + 1)..4 {
            let avg = (x[4 * i + j] + x[4 * j + i].conj()) * 0.5;
            x[4 * i + j] = avg;
            x[4 * j + i] = avg.conj();
        }
    }
}

fn to_vec(rho: &DensityMatrix) -> [Complex64; 16] {
    std::array::from_fn(|k| rho.get(k / 4, k % 4))
}

fn from_vec(x: &[Complex64; 16]) -> Result<DensityMatrix, DynamicsError> {
    let m = ComplexMatrix::from_fn(4, 4, |r, c| x[4 * r + c]);
    DensityMatrix::validate(m).map_err(DynamicsError::ValidationFailure)
}

/// Classical RK4 on the master equation from 0 to `t`, fixed step `dt`
/// with a shortened final step.
pub fn integrate(
    rho0: &DensityMatrix,
    profile: &DampingProfile,
    t: f64,
    dt: f64,
) -> Result<DensityMatrix, DynamicsError> {
    integrate_checkpoints(rho0, profile, &[t], dt).map(|mut v| v.remove(0))
}

/// Integrates once along an ascending list of times and returns the state at
/// each. Every segment between checkpoints is stepped exactly like a fresh
/// call to [`integrate`] over that span.
pub fn integrate_checkpoints(
    rho0: &DensityMatrix,
    profile: &DampingProfile,
    times: &[f64],
    dt: f64,
) -> Result<Vec<DensityMatrix>, DynamicsError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(DynamicsError::InvalidStep(dt));
    }
    for &t in times {
        check_time(t)?;
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(DynamicsError::UnsortedTimes);
    }
    let generator = Generator::new(profile);
    let mut x = to_vec(rho0);
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        generator.advance(&mut x, t - now, dt);
        now = t;
        out.push(from_vec(&x)?);
    }
    Ok(out)
}
