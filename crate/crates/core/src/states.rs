//! Two-qubit states: basis conventions, Bell states, the Werner families and
//! the Hilbert–Schmidt (Pauli) decomposition.
//!
//! Basis index `2i + k` labels |i, k⟩ with qubit 1 in the high slot, so the
//! ordering is |00⟩, |01⟩, |10⟩, |11⟩.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matkit::{hermitian_eigenvalues, kron, pauli, ComplexMatrix, MatError};
use crate::tolerance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("density matrix must be 4x4, got {0}x{1}")]
    WrongDims(usize, usize),
    #[error("not Hermitian: max |rho - rho†| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace} (expected 1)")]
    TraceNotOne { trace: f64 },
    #[error("not positive semidefinite: eigenvalue {eigenvalue:.6e}")]
    NotPsd { eigenvalue: f64 },
    #[error("mixing parameter p = {0} outside [0, 1]")]
    InvalidMixing(f64),
    #[error("validation failure: {0}")]
    ValidationFailure(String),
    #[error("unknown state family {0:?} (expected X, Y or Z)")]
    UnknownFamily(String),
    #[error("malformed density-matrix JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// Which maximally entangled state a Werner family is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// (|00⟩ + |11⟩)/√2
    X,
    /// Singlet (|01⟩ − |10⟩)/√2
    Y,
    /// ½(|00⟩ + |01⟩ + |10⟩ − |11⟩)
    Z,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::X, Family::Y, Family::Z];

    pub fn ket(self) -> [Complex64; 4] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let r = |x: f64| Complex64::new(x, 0.0);
        match self {
            Family::X => [r(s), z, z, r(s)],
            Family::Y => [z, r(s), r(-s), z],
            Family::Z => [r(0.5), r(0.5), r(0.5), r(-0.5)],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::X => "X",
            Family::Y => "Y",
            Family::Z => "Z",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "X" | "x" => Ok(Family::X),
            "Y" | "y" => Ok(Family::Y),
            "Z" | "z" => Ok(Family::Z),
            other => Err(StateError::UnknownFamily(other.to_string())),
        }
    }
}

/// Werner family plus mixing weight p ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WernerSpec {
    family: Family,
    p: f64,
}

impl WernerSpec {
    pub fn new(family: Family, p: f64) -> Result<Self, StateError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(StateError::InvalidMixing(p));
        }
        Ok(Self { family, p })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// A certified two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity against the current
    /// validation tolerance.
    pub fn validate(mat: ComplexMatrix) -> Result<Self, StateError> {
        Self::validate_with(mat, tolerance::validation())
    }

    pub fn validate_with(mat: ComplexMatrix, tol: f64) -> Result<Self, StateError> {
        if mat.dims() != (4, 4) {
            return Err(StateError::WrongDims(mat.rows(), mat.cols()));
        }
        if !mat.is_finite() {
            return Err(MatError::NonFinite.into());
        }
        let deviation = mat.hermitian_deviation();
        if deviation > tol {
            return Err(StateError::NotHermitian { deviation });
        }
        let trace = mat.trace();
        if (trace - 1.0).norm() > tol {
            return Err(StateError::TraceNotOne { trace: trace.re });
        }
        let lowest = hermitian_eigenvalues(&mat.hermitian_part())?[0];
        if lowest < -tol {
            return Err(StateError::NotPsd { eigenvalue: lowest });
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix known to be a valid state by construction (e.g. the
    /// image of a valid state under a CPTP map).
    pub(crate) fn assume_valid(mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.dims(), (4, 4));
        Self { mat }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            mat: ComplexMatrix::identity(4).scale(0.25),
        }
    }

    /// |v⟩⟨v| for a normalized 4-vector.
    pub fn pure(amplitudes: &[Complex64; 4]) -> Result<Self, StateError> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 0.0 {
            return Err(StateError::ValidationFailure("zero state vector".into()));
        }
        let v: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
        Self::validate(ComplexMatrix::outer(&v))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.mat[(r, c)]
    }

    pub fn to_json_value(&self) -> DensityMatrixJson {
        DensityMatrixJson::from_matrix(&self.mat)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, StateError> {
        let raw: DensityMatrixJson =
            serde_json::from_str(text).map_err(|e| StateError::Json(e.to_string()))?;
        Self::validate(raw.to_matrix()?)
    }
}

/// On-disk layout `{"dims": [4,4], "re": [[..]], "im": [[..]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dims: [usize; 2],
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DensityMatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let (rows, cols) = m.dims();
        let grab = |f: fn(&Complex64) -> f64| {
            (0..rows)
                .map(|r| (0..cols).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            dims: [rows, cols],
            re: grab(|z| z.re),
            im: grab(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, StateError> {
        let [rows, cols] = self.dims;
        let shape_ok = |t: &Vec<Vec<f64>>| t.len() == rows && t.iter().all(|row| row.len() == cols);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(StateError::Json(format!(
                "\"re\"/\"im\" do not match dims {rows}x{cols}"
            )));
        }
        let data = (0..rows * cols)
            .map(|k| Complex64::new(self.re[k / cols][k % cols], self.im[k / cols][k % cols]))
            .collect();
        Ok(ComplexMatrix::from_vec(rows, cols, data)?)
    }
}

/// Rank-one projector onto the named Bell state.
pub fn bell_state(family: Family) -> DensityMatrix {
    DensityMatrix {
        mat: ComplexMatrix::outer(&family.ket()),
    }
}

/// p |ψ⟩⟨ψ| + (1 − p)/4 I.
pub fn werner(spec: WernerSpec) -> DensityMatrix {
    let p = spec.p();
    let projector = ComplexMatrix::outer(&spec.family().ket());
    let mixed = ComplexMatrix::identity(4).scale((1.0 - p) / 4.0);
    DensityMatrix {
        mat: &projector.scale(p) + &mixed,
    }
}

/// Bloch vectors and correlation matrix of a two-qubit state:
/// ρ = ¼(I⊗I + r·σ⊗I + I⊗s·σ + Σ t_nm σ_n⊗σ_m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HilbertSchmidtDecomp {
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub t: [[f64; 3]; 3],
}

struct PauliTables {
    local1: [ComplexMatrix; 3],
    local2: [ComplexMatrix; 3],
    pairs: [[ComplexMatrix; 3]; 3],
}

fn pauli_tables() -> &'static PauliTables {
    static TABLES: OnceLock<PauliTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let p = pauli();
        let id = ComplexMatrix::identity(2);
        PauliTables {
            local1: std::array::from_fn(|n| kron(&p[n], &id)),
            local2: std::array::from_fn(|m| kron(&id, &p[m])),
            pairs: std::array::from_fn(|n| std::array::from_fn(|m| kron(&p[n], &p[m]))),
        }
    })
}

// Tr(ρ P) without forming the product.
fn expectation(rho: &ComplexMatrix, op: &ComplexMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += rho[(i, j)] * op[(j, i)];
        }
    }
    acc
}

fn real_expectation(rho: &ComplexMatrix, op: &ComplexMatrix) -> Result<f64, StateError> {
    let z = expectation(rho, op);
    if z.im.abs() > tolerance::IMAG_REJECT_TOL {
        return Err(StateError::ValidationFailure(format!(
            "Pauli expectation has imaginary residue {:.3e}",
            z.im
        )));
    }
    Ok(z.re)
}

pub fn hs_decompose(rho: &DensityMatrix) -> Result<HilbertSchmidtDecomp, StateError> {
    let tables = pauli_tables();
    let m = &rho.mat;
    let mut out = HilbertSchmidtDecomp {
        r: [0.0; 3],
        s: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for n in 0..3 {
        out.r[n] = real_expectation(m, &tables.local1[n])?;
        out.s[n] = real_expectation(m, &tables.local2[n])?;
        for k in 0..3 {
            out.t[n][k] = real_expectation(m, &tables.pairs[n][k])?;
        }
    }
    Ok(out)
}

impl HilbertSchmidtDecomp {
    /// Rebuilds the 4×4 matrix from the Pauli coefficients.
    pub fn reassemble(&self) -> ComplexMatrix {
        let tables = pauli_tables();
        let mut acc = ComplexMatrix::identity(4);
        for n in 0..3 {
            acc = &acc + &tables.local1[n].scale(self.r[n]);
            acc = &acc + &tables.local2[n].scale(self.s[n]);
            for k in 0..3 {
                acc = &acc + &tables.pairs[n][k].scale(self.t[n][k]);
            }
        }
        acc.scale(0.25)
    }

    pub fn correlation_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(3, 3, |n, m| Complex64::new(self.t[n][m], 0.0))
    }
}
