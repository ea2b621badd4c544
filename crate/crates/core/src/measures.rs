//! Bell-violation degree and entanglement measures of two-qubit states.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::matkit::{hermitian_eigen, hermitian_eigenvalues, ComplexMatrix};
use crate::numfmt::sig17;
use crate::states::{hs_decompose, DensityMatrix};
use crate::tolerance::RANGE_SLACK;
use crate::Error;

/// The scalars this crate tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Measure {
    /// Bell-inequality-violation degree B.
    Biv,
    /// Wootters concurrence C.
    Concurrence,
    /// Negativity N.
    Negativity,
    /// Entanglement of formation.
    Formation,
    /// log₂(N + 1).
    LogNegativity,
}

impl Measure {
    pub fn symbol(self) -> &'static str {
        match self {
            Measure::Biv => "B",
            Measure::Concurrence => "C",
            Measure::Negativity => "N",
            Measure::Formation => "EF",
            Measure::LogNegativity => "LN",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "b" | "biv" => Ok(Measure::Biv),
            "c" | "concurrence" => Ok(Measure::Concurrence),
            "n" | "negativity" => Ok(Measure::Negativity),
            "ef" | "formation" => Ok(Measure::Formation),
            "ln" | "logn" | "log-negativity" => Ok(Measure::LogNegativity),
            other => Err(format!("unknown measure {other:?}")),
        }
    }
}

/// All measures of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureSet {
    /// Horodecki parameter M(ρ) ∈ [0, 2].
    pub m: f64,
    pub b: f64,
    pub c: f64,
    pub ef: f64,
    pub n: f64,
    pub logn: f64,
}

impl MeasureSet {
    pub const CSV_HEADER: &'static str = "t,m,b,c,ef,n,logn";

    pub fn get(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Biv => self.b,
            Measure::Concurrence => self.c,
            Measure::Negativity => self.n,
            Measure::Formation => self.ef,
            Measure::LogNegativity => self.logn,
        }
    }

    pub fn csv_row(&self, t: f64) -> String {
        format!("{},{}", sig17(t), self.csv_values())
    }

    /// The six measure columns without the time column.
    pub fn csv_values(&self) -> String {
        [self.m, self.b, self.c, self.ef, self.n, self.logn]
            .iter()
            .map(|&x| sig17(x))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Eigenvalues of a unit-trace state at or below this count as zero when
/// forming √ρ for the concurrence.
pub const RANK_FLOOR: f64 = 1e-14;

fn clamp_unit(x: f64, hi: f64) -> f64 {
    if x > hi && x <= hi + RANGE_SLACK {
        hi
    } else if x < 0.0 {
        0.0
    } else {
        x
    }
}

/// Sum of the two largest eigenvalues of TᵀT, T the Pauli correlation matrix.
pub fn horodecki_m(rho: &DensityMatrix) -> Result<f64, Error> {
    let t = hs_decompose(rho)?.correlation_matrix();
    let u = &t.transpose() * &t;
    let ev = hermitian_eigenvalues(&u)?;
    Ok(clamp_unit(ev[1] + ev[2], 2.0))
}

pub fn biv_from_m(m: f64) -> f64 {
    (m - 1.0).max(0.0).sqrt()
}

pub fn biv_degree(rho: &DensityMatrix) -> Result<f64, Error> {
    horodecki_m(rho).map(biv_from_m)
}

/// ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    // σ_y⊗σ_y is real and anti-diagonal with signs (−1, 1, 1, −1).
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    ComplexMatrix::from_fn(4, 4, |r, c| {
        rho[(3 - r, 3 - c)].conj() * (SIGN[r] * SIGN[c])
    })
}

/// Wootters λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄: square roots of the eigenvalues of ρρ̃.
///
/// They are the singular values of √ρ (σ_y⊗σ_y) √ρ*, read off here as the
/// non-negative half of the spectrum of the Hermitian dilation
/// [[0, A], [A†, 0]]. That keeps near-zero λ accurate to round-off instead of
/// the square root of round-off.
pub fn wootters_lambdas(rho: &DensityMatrix) -> Result<[f64; 4], Error> {
    // Eigenvalues of ρ at round-off level are treated as exact zeros: their
    // square roots (~1e-8) would otherwise leak into the small λ.
    let root = hermitian_eigen(rho.matrix())?
        .reconstruct_with(|l| if l > RANK_FLOOR { l.sqrt() } else { 0.0 })
        .hermitian_part();
    let a = &root * &apply_yy(&root.conj());
    let dilation = ComplexMatrix::from_fn(8, 8, |r, c| match (r < 4, c < 4) {
        (true, false) => a[(r, c - 4)],
        (false, true) => a[(c, r - 4)].conj(),
        _ => Complex64::new(0.0, 0.0),
    });
    let ev = hermitian_eigenvalues(&dilation)?;
    Ok([
        ev[7].max(0.0),
        ev[6].max(0.0),
        ev[5].max(0.0),
        ev[4].max(0.0),
    ])
}

// (σ_y⊗σ_y) · m
fn apply_yy(m: &ComplexMatrix) -> ComplexMatrix {
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    ComplexMatrix::from_fn(4, 4, |r, c| m[(3 - r, c)] * SIGN[r])
}

/// λ₁ − λ₂ − λ₃ − λ₄ before flooring at zero.
pub fn concurrence_signed(rho: &DensityMatrix) -> Result<f64, Error> {
    let l = wootters_lambdas(rho)?;
    Ok(l[0] - l[1] - l[2] - l[3])
}

pub fn concurrence(rho: &DensityMatrix) -> Result<f64, Error> {
    concurrence_signed(rho).map(concurrence_from_signed)
}

pub fn concurrence_from_signed(x: f64) -> f64 {
    clamp_unit(x, 1.0)
}

/// H(x) = −x log₂x − (1−x) log₂(1−x) with H(0) = H(1) = 0.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    term(x) + term(1.0 - x)
}

pub fn formation_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    clamp_unit(binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt())), 1.0)
}

pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64, Error> {
    concurrence(rho).map(formation_from_concurrence)
}

/// Transpose over qubit 1: (2i+k, 2j+l) ↦ (2j+k, 2i+l).
pub fn partial_transpose(rho: &DensityMatrix) -> ComplexMatrix {
    let m = rho.matrix();
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let (j, k) = (r / 2, r % 2);
        let (i, l) = (c / 2, c % 2);
        m[(2 * i + k, 2 * j + l)]
    })
}

/// −2 × the smallest eigenvalue of the partial transpose (may be negative).
pub fn negativity_signed(rho: &DensityMatrix) -> Result<f64, Error> {
    let ev = hermitian_eigenvalues(&partial_transpose(rho))?;
    Ok(-2.0 * ev[0])
}

pub fn negativity(rho: &DensityMatrix) -> Result<f64, Error> {
    Ok(negativity_from_spectrum(&hermitian_eigenvalues(
        &partial_transpose(rho),
    )?))
}

/// N from the partial-transpose spectrum.
pub fn negativity_from_spectrum(ev: &[f64]) -> f64 {
    let neg: f64 = ev.iter().filter(|&&l| l < 0.0).sum();
    clamp_unit(-2.0 * neg, 1.0)
}

/// Signed witnesses and floored values of B, C and N (in that order) from a
/// single pass over the state.
pub fn bcn_sample(rho: &DensityMatrix) -> Result<([f64; 3], [f64; 3]), Error> {
    let m = horodecki_m(rho)?;
    let c = concurrence_signed(rho)?;
    let pt = hermitian_eigenvalues(&partial_transpose(rho))?;
    Ok((
        [m - 1.0, c, -2.0 * pt[0]],
        [
            biv_from_m(m),
            concurrence_from_signed(c),
            negativity_from_spectrum(&pt),
        ],
    ))
}

pub fn log_negativity_from(n: f64) -> f64 {
    clamp_unit((n + 1.0).log2(), 1.0)
}

pub fn log_negativity(rho: &DensityMatrix) -> Result<f64, Error> {
    negativity(rho).map(log_negativity_from)
}

pub fn measure_all(rho: &DensityMatrix) -> Result<MeasureSet, Error> {
    let m = horodecki_m(rho)?;
    let c = concurrence(rho)?;
    let n = negativity(rho)?;
    Ok(MeasureSet {
        m,
        b: biv_from_m(m),
        c,
        ef: formation_from_concurrence(c),
        n,
        logn: log_negativity_from(n),
    })
}

/// The (floored) value of one measure.
pub fn evaluate(rho: &DensityMatrix, measure: Measure) -> Result<f64, Error> {
    match measure {
        Measure::Biv => biv_degree(rho),
        Measure::Concurrence => concurrence(rho),
        Measure::Negativity => negativity(rho),
        Measure::Formation => entanglement_of_formation(rho),
        Measure::LogNegativity => log_negativity(rho),
    }
}

/// Signed quantity whose positive part is the measure; sign changes locate
/// sudden-death points without fighting the max{0, ·} kink.
pub fn signed_witness(rho: &DensityMatrix, measure: Measure) -> Result<f64, Error> {
    match measure {
        Measure::Biv => horodecki_m(rho).map(|m| m - 1.0),
        Measure::Concurrence | Measure::Formation => concurrence_signed(rho),
        Measure::Negativity | Measure::LogNegativity => negativity_signed(rho),
    }
}
