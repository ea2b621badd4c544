//! Analytic decay laws of the damped Werner families.
//!
//! Every function takes the Werner mixing `p` and the survival factors
//! `g_k = exp(−γ_k t)`. The `*_signed` variants return the expression before
//! the final `max{0, ·}`, which is what root finders want. Square-root
//! arguments that dip below zero by at most [`SQRT_ARG_CLAMP`] are treated
//! as zero.
//!
//! Family Z is only covered for `p = 1` or a single damped qubit; elsewhere
//! the generic pipeline is the reference.

use thiserror::Error;

use crate::measures::Measure;
use crate::states::Family;
use crate::tolerance::SQRT_ARG_CLAMP;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("invalid closed-form input: {0}")]
    InvalidInput(String),
    #[error("no closed form for family {family} at p = {p}, g1 = {g1}, g2 = {g2}")]
    Unsupported {
        family: Family,
        p: f64,
        g1: f64,
        g2: f64,
    },
    #[error("expansion outside its domain: {0}")]
    OutOfDomain(String),
}

/// Family, mixing parameter and survival factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInputs {
    pub family: Family,
    pub p: f64,
    pub g1: f64,
    pub g2: f64,
}

impl ClosedFormInputs {
    pub fn new(family: Family, p: f64, g1: f64, g2: f64) -> Result<Self, ClosedFormError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ClosedFormError::InvalidInput(format!(
                "p = {p} outside [0, 1]"
            )));
        }
        for (name, g) in [("g1", g1), ("g2", g2)] {
            if !(g > 0.0 && g <= 1.0) {
                return Err(ClosedFormError::InvalidInput(format!(
                    "{name} = {g} outside (0, 1]"
                )));
            }
        }
        Ok(Self { family, p, g1, g2 })
    }

    fn unsupported(&self) -> ClosedFormError {
        ClosedFormError::Unsupported {
            family: self.family,
            p: self.p,
            g1: self.g1,
            g2: self.g2,
        }
    }
}

fn root(x: f64) -> f64 {
    debug_assert!(x >= -SQRT_ARG_CLAMP || x.is_nan(), "sqrt argument {x}");
    if x < 0.0 {
        0.0
    } else {
        x.sqrt()
    }
}

fn floor(x: f64) -> f64 {
    x.max(0.0)
}

// ---------------------------------------------------------------- BIV degree

/// B of the undamped Werner state: max{0, 2p² − 1}^{1/2}.
pub fn biv_initial(p: f64) -> f64 {
    root(floor(2.0 * p * p - 1.0))
}

/// M − 1 for the X and Y families.
pub fn biv_xy_signed(p: f64, g1: f64, g2: f64) -> f64 {
    2.0 * p * p * g1 * g2 - 1.0
}

/// B for the X and Y families.
pub fn biv_xy(p: f64, g1: f64, g2: f64) -> f64 {
    root(floor(biv_xy_signed(p, g1, g2)))
}

/// M − 1 for the Z family.
pub fn biv_z_signed(p: f64, g1: f64, g2: f64) -> f64 {
    let pp = p * p;
    let v = (1.0 - g1).powi(2) * (1.0 - g2).powi(2) + pp * g1 * g2 * (g1 + g2);
    let disc = v * v - 4.0 * pp * pp * (g1 * g2).powi(3);
    pp * g1 * g2 + 0.5 * (v + root(disc)) - 1.0
}

/// B for the Z family.
pub fn biv_z(p: f64, g1: f64, g2: f64) -> f64 {
    root(floor(biv_z_signed(p, g1, g2)))
}

/// B when only the first qubit is damped, any family.
pub fn biv_one_sided(p: f64, g1: f64) -> f64 {
    root(floor(2.0 * p * p * g1 - 1.0))
}

// ----------------------------------------------------- undamped entanglement

/// C = N of the undamped Werner state.
pub fn entanglement_initial(p: f64) -> f64 {
    floor(0.5 * (3.0 * p - 1.0))
}

// ------------------------------------------------------------------ family X

pub fn concurrence_x_signed(p: f64, g1: f64, g2: f64) -> f64 {
    let q = 1.0 + p;
    0.5 * (g1 * g2).sqrt() * (2.0 * p - root((2.0 - q * g1) * (2.0 - q * g2)))
}

pub fn concurrence_x(p: f64, g1: f64, g2: f64) -> f64 {
    floor(concurrence_x_signed(p, g1, g2))
}

pub fn negativity_x_signed(p: f64, g1: f64, g2: f64) -> f64 {
    let inner = (g1 - g2).powi(2) + 4.0 * p * p * g1 * g2;
    0.5 * (-g1 - g2 + (1.0 + p) * g1 * g2 + root(inner))
}

pub fn negativity_x(p: f64, g1: f64, g2: f64) -> f64 {
    floor(negativity_x_signed(p, g1, g2))
}

/// Common value of C and N for family X with equal damping factors.
pub fn entanglement_x_equal(p: f64, g: f64) -> f64 {
    floor(0.5 * g * ((1.0 + p) * g - 2.0 * (1.0 - p)))
}

pub fn concurrence_x_bell(g1: f64, g2: f64) -> f64 {
    (g1 * g2).sqrt() * (1.0 - root((1.0 - g1) * (1.0 - g2)))
}

pub fn negativity_x_bell(g1: f64, g2: f64) -> f64 {
    g1 * g2
}

// ------------------------------------------------------------------ family Y

pub fn concurrence_y_signed(p: f64, g1: f64, g2: f64) -> f64 {
    let inner = (2.0 - g1) * (2.0 - g2) - p * g1 * g2;
    0.5 * (g1 * g2).sqrt() * (2.0 * p - root(1.0 - p) * root(inner))
}

pub fn concurrence_y(p: f64, g1: f64, g2: f64) -> f64 {
    floor(concurrence_y_signed(p, g1, g2))
}

pub fn negativity_y_signed(p: f64, g1: f64, g2: f64) -> f64 {
    let inner = (2.0 - g1 - g2).powi(2) + 4.0 * p * p * g1 * g2;
    0.5 * (-2.0 + g1 + g2 - (1.0 - p) * g1 * g2 + root(inner))
}

pub fn negativity_y(p: f64, g1: f64, g2: f64) -> f64 {
    floor(negativity_y_signed(p, g1, g2))
}

/// Family-Y concurrence for equal damping factors.
pub fn concurrence_y_equal(p: f64, g: f64) -> f64 {
    let r = 1.0 - p;
    floor(g * (p - root(r * (1.0 - g) + 0.25 * r * r * g * g)))
}

/// Family-Y negativity for equal damping factors.
pub fn negativity_y_equal(p: f64, g: f64) -> f64 {
    let r = 1.0 - p;
    floor(root((1.0 - g).powi(2) + p * p * g * g) - 0.5 * r * g * g - (1.0 - g))
}

pub fn concurrence_y_bell(g1: f64, g2: f64) -> f64 {
    (g1 * g2).sqrt()
}

pub fn negativity_y_bell(g1: f64, g2: f64) -> f64 {
    0.5 * (root((2.0 - g1 - g2).powi(2) + 4.0 * g1 * g2) + g1 + g2 - 2.0)
}

// ------------------------------------------------------------------ family Z

pub fn concurrence_z_bell(g1: f64, g2: f64) -> f64 {
    (g1 * g2).sqrt() * (1.0 - 0.5 * root((1.0 - g1) * (1.0 - g2)))
}

/// Family-Z concurrence at p = 1 with equal damping factors.
pub fn concurrence_z_bell_equal(g: f64) -> f64 {
    0.5 * g * (1.0 + g)
}

pub fn negativity_z_bell(g1: f64, g2: f64) -> f64 {
    let big_g = 0.5 * (g1 + g2);
    let inner = g1 * g2 * (5.0 + g1 * g2 - 2.0 * big_g) + 4.0 * (1.0 - big_g).powi(2);
    floor(0.5 * root(inner) + big_g - 1.0)
}

// -------------------------------------------------- one damped qubit, any family

pub fn concurrence_one_sided_signed(p: f64, g1: f64) -> f64 {
    0.5 * g1.sqrt() * (2.0 * p - root((1.0 - p) * (2.0 - (1.0 + p) * g1)))
}

pub fn concurrence_one_sided(p: f64, g1: f64) -> f64 {
    floor(concurrence_one_sided_signed(p, g1))
}

pub fn negativity_one_sided_signed(p: f64, g1: f64) -> f64 {
    0.5 * (p * g1 + root((1.0 - g1).powi(2) + 4.0 * p * p * g1) - 1.0)
}

pub fn negativity_one_sided(p: f64, g1: f64) -> f64 {
    floor(negativity_one_sided_signed(p, g1))
}

pub fn concurrence_bell_one_sided(g1: f64) -> f64 {
    g1.sqrt()
}

pub fn negativity_bell_one_sided(g1: f64) -> f64 {
    g1
}

// --------------------------------------------------------------- dispatchers

/// B for any family.
pub fn biv_closed(input: ClosedFormInputs) -> f64 {
    let ClosedFormInputs { family, p, g1, g2 } = input;
    match family {
        Family::X | Family::Y => biv_xy(p, g1, g2),
        Family::Z => biv_z(p, g1, g2),
    }
}

/// Z-family states are symmetric under qubit exchange, so "one damped qubit"
/// may be either slot. Returns the surviving factor.
fn z_single_factor(input: &ClosedFormInputs) -> Option<f64> {
    if input.g2 == 1.0 {
        Some(input.g1)
    } else if input.g1 == 1.0 {
        Some(input.g2)
    } else {
        None
    }
}

pub fn concurrence_closed(input: ClosedFormInputs) -> Result<f64, ClosedFormError> {
    let ClosedFormInputs { family, p, g1, g2 } = input;
    Ok(match family {
        Family::X => concurrence_x(p, g1, g2),
        Family::Y => concurrence_y(p, g1, g2),
        Family::Z => match z_single_factor(&input) {
            Some(g) => concurrence_one_sided(p, g),
            None if p == 1.0 => concurrence_z_bell(g1, g2),
            None => return Err(input.unsupported()),
        },
    })
}

pub fn negativity_closed(input: ClosedFormInputs) -> Result<f64, ClosedFormError> {
    let ClosedFormInputs { family, p, g1, g2 } = input;
    Ok(match family {
        Family::X => negativity_x(p, g1, g2),
        Family::Y => negativity_y(p, g1, g2),
        Family::Z => match z_single_factor(&input) {
            Some(g) => negativity_one_sided(p, g),
            None if p == 1.0 => negativity_z_bell(g1, g2),
            None => return Err(input.unsupported()),
        },
    })
}

// --------------------------------------------------------- short-time terms

/// Taylor coefficients around t = 0: value ≈ constant + linear·t + quadratic·t².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortTimeExpansion {
    pub constant: f64,
    pub linear: f64,
    pub quadratic: Option<f64>,
}

impl ShortTimeExpansion {
    pub fn eval(&self, t: f64) -> f64 {
        self.constant + self.linear * t + self.quadratic.unwrap_or(0.0) * t * t
    }
}

/// Weight of the √(γ₁γ₂) term in the linear decay of C at p = 1.
pub fn concurrence_cross_factor(family: Family) -> f64 {
    match family {
        Family::X => 2.0,
        Family::Y => 0.0,
        Family::Z => 1.0,
    }
}

/// Weight of the γ₁γ₂ term in the quadratic coefficient of N at p = 1.
pub fn negativity_cross_factor(family: Family) -> f64 {
    match family {
        Family::X => 2.0,
        Family::Y => 1.0,
        Family::Z => 1.25,
    }
}

pub fn shorttime_coeffs(
    family: Family,
    measure: Measure,
    p: f64,
    gamma1: f64,
    gamma2: f64,
) -> Result<ShortTimeExpansion, ClosedFormError> {
    if !(gamma1 >= 0.0 && gamma2 >= 0.0 && gamma1.is_finite() && gamma2.is_finite()) {
        return Err(ClosedFormError::InvalidInput(format!(
            "rates ({gamma1}, {gamma2}) must be finite and non-negative"
        )));
    }
    let sum = gamma1 + gamma2;
    match measure {
        Measure::Biv => {
            if !(p > std::f64::consts::FRAC_1_SQRT_2 && p <= 1.0) {
                return Err(ClosedFormError::OutOfDomain(format!(
                    "B expansion needs 1/√2 < p ≤ 1, got {p}"
                )));
            }
            let q = (2.0 * p * p - 1.0).sqrt();
            let rate = match family {
                Family::X | Family::Y => sum,
                Family::Z => (5.0 * sum - (gamma1 - gamma2).abs()) / 4.0,
            };
            Ok(ShortTimeExpansion {
                constant: q,
                linear: -rate * p * p / q,
                quadratic: None,
            })
        }
        Measure::Concurrence | Measure::Negativity if p != 1.0 => {
            Err(ClosedFormError::OutOfDomain(format!(
                "{measure} expansion is only known at p = 1, got {p}"
            )))
        }
        Measure::Concurrence => Ok(ShortTimeExpansion {
            constant: 1.0,
            linear: -0.5 * (sum + concurrence_cross_factor(family) * (gamma1 * gamma2).sqrt()),
            quadratic: None,
        }),
        Measure::Negativity => Ok(ShortTimeExpansion {
            constant: 1.0,
            linear: -sum,
            quadratic: Some(
                0.5 * (gamma1 * gamma1
                    + negativity_cross_factor(family) * gamma1 * gamma2
                    + gamma2 * gamma2),
            ),
        }),
        other => Err(ClosedFormError::OutOfDomain(format!(
            "no short-time expansion for {other}"
        ))),
    }
}
