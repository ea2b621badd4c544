//! The invariant suite run by `werner validate`.
//!
//! Each check produces a residual and compares it with a fixed tolerance.
//! Random inputs come from fixed seeds, so runs are reproducible.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{self, EventSearch, Span};
use crate::closedform::{self, ClosedFormInputs};
use crate::dynamics::{
    analytic_evolve, channel_factors, integrate, ChannelFactors, DampingProfile,
};
use crate::matkit::{hermitian_eigen, hermitian_eigenvalues, kron, psd_sqrt, ComplexMatrix};
use crate::measures::{self, Measure};
use crate::random;
use crate::states::{bell_state, hs_decompose, werner, DensityMatrix, Family, WernerSpec};
use crate::Error;

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

struct Check {
    name: &'static str,
    tolerance: f64,
    run: fn() -> Result<f64, Error>,
}

const RANDOM_STATES: usize = 200;

const CHECKS: &[Check] = &[
    Check {
        name: "matkit.kron_associativity",
        tolerance: 1e-13,
        run: kron_associativity,
    },
    Check {
        name: "matkit.eigen_reconstruction",
        tolerance: 1e-12,
        run: eigen_reconstruction,
    },
    Check {
        name: "matkit.psd_sqrt_square",
        tolerance: 1e-12,
        run: psd_sqrt_square,
    },
    Check {
        name: "states.werner_psd",
        tolerance: 1e-12,
        run: werner_psd,
    },
    Check {
        name: "states.pauli_roundtrip",
        tolerance: 1e-12,
        run: pauli_roundtrip,
    },
    Check {
        name: "states.z_is_local_rotation_of_x",
        tolerance: 1e-14,
        run: z_from_x,
    },
    Check {
        name: "dynamics.semigroup",
        tolerance: 1e-13,
        run: semigroup,
    },
    Check {
        name: "dynamics.channel_preserves_states",
        tolerance: 0.0,
        run: channel_preserves_states,
    },
    Check {
        name: "dynamics.oracle_equivalence",
        tolerance: 1e-8,
        run: oracle_equivalence,
    },
    Check {
        name: "dynamics.rk4_order",
        tolerance: 4.0,
        run: rk4_order,
    },
    Check {
        name: "measures.single_negative_eigenvalue",
        tolerance: 0.0,
        run: single_negative_eigenvalue,
    },
    Check {
        name: "measures.pure_state_coincidence",
        tolerance: 1e-9,
        run: pure_state_coincidence,
    },
    Check {
        name: "measures.local_unitary_invariance",
        tolerance: 1e-10,
        run: local_unitary_invariance,
    },
    Check {
        name: "measures.werner_thresholds",
        tolerance: 0.0,
        run: werner_thresholds,
    },
    Check {
        name: "measures.concurrence_charpoly",
        tolerance: 1e-8,
        run: concurrence_charpoly,
    },
    Check {
        name: "closedform.pipeline_equivalence",
        tolerance: 1e-10,
        run: pipeline_equivalence,
    },
    Check {
        name: "closedform.orderings",
        tolerance: 1e-12,
        run: orderings,
    },
    Check {
        name: "closedform.one_sided_degeneracy",
        tolerance: 1e-12,
        run: one_sided_degeneracy,
    },
    Check {
        name: "closedform.x_equal_rates",
        tolerance: 1e-12,
        run: x_equal_rates,
    },
    Check {
        name: "closedform.shorttime_slopes",
        tolerance: 1e-4,
        run: shorttime_slopes,
    },
    Check {
        name: "analysis.event_residuals",
        tolerance: 1e-9,
        run: event_residuals,
    },
    Check {
        name: "analysis.event_brackets",
        tolerance: 1e-8,
        run: event_brackets,
    },
    Check {
        name: "analysis.ordering_coverage",
        tolerance: 0.0,
        run: ordering_coverage,
    },
    Check {
        name: "analysis.refinement_stability",
        tolerance: 0.0,
        run: refinement_stability,
    },
];

/// Names of all checks, in execution order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

/// Runs the checks in order. With `fail_fast`, stops after the first
/// failure. An evaluation error counts as a failure with infinite residual.
pub fn run(fail_fast: bool, mut on_result: impl FnMut(&CheckOutcome)) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for check in CHECKS {
        let residual = (check.run)().unwrap_or(f64::INFINITY);
        let outcome = CheckOutcome {
            name: check.name,
            passed: residual <= check.tolerance,
            residual,
            tolerance: check.tolerance,
        };
        on_result(&outcome);
        let failed = !outcome.passed;
        out.push(outcome);
        if failed && fail_fast {
            break;
        }
    }
    out
}

fn quiet(g1: f64, g2: f64) -> DampingProfile {
    DampingProfile::quiet(g1, g2).expect("valid rates")
}

fn wspec(f: Family, p: f64) -> Result<DensityMatrix, Error> {
    Ok(werner(WernerSpec::new(f, p)?))
}

fn random_matrix(rng: &mut random::StateRng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| random::gaussian_complex(rng))
}

fn kron_associativity() -> Result<f64, Error> {
    let mut rng = random::seeded(1);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (a, b, c) = (
            random_matrix(&mut rng, 2),
            random_matrix(&mut rng, 2),
            random_matrix(&mut rng, 2),
        );
        let l = kron(&kron(&a, &b), &c);
        let r = kron(&a, &kron(&b, &c));
        worst = worst.max(l.max_abs_diff(&r));
    }
    Ok(worst)
}

fn eigen_reconstruction() -> Result<f64, Error> {
    let mut rng = random::seeded(2);
    let mut worst: f64 = 0.0;
    for n in [2, 3, 4, 8] {
        for _ in 0..10 {
            let h = random_matrix(&mut rng, n).hermitian_part();
            let eig = hermitian_eigen(&h)?;
            worst = worst.max(eig.reconstruct_with(|x| x).max_abs_diff(&h) / h.max_abs());
            let tr: f64 = eig.eigenvalues.iter().sum();
            worst = worst.max((tr - h.trace().re).abs());
        }
    }
    Ok(worst)
}

fn psd_sqrt_square() -> Result<f64, Error> {
    let mut rng = random::seeded(3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let rho = random::mixed_state(&mut rng);
        let s = psd_sqrt(rho.matrix())?;
        worst = worst.max((&s * &s).max_abs_diff(rho.matrix()));
    }
    Ok(worst)
}

fn werner_psd() -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for f in Family::ALL {
        for k in 0..=100 {
            let rho = wspec(f, k as f64 / 100.0)?;
            let min = hermitian_eigenvalues(rho.matrix())?[0];
            worst = worst.max(-min).max((rho.matrix().trace().re - 1.0).abs());
        }
    }
    Ok(worst)
}

fn pauli_roundtrip() -> Result<f64, Error> {
    let mut rng = random::seeded(4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let rho = random::mixed_state(&mut rng);
        worst = worst.max(hs_decompose(&rho)?.reassemble().max_abs_diff(rho.matrix()));
    }
    Ok(worst)
}

fn z_from_x() -> Result<f64, Error> {
    let h = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]])
        .scale(std::f64::consts::FRAC_1_SQRT_2);
    let u = kron(&ComplexMatrix::identity(2), &h);
    let x = bell_state(Family::X);
    let rotated = &(&u * x.matrix()) * &u.adjoint();
    Ok(rotated.max_abs_diff(bell_state(Family::Z).matrix()))
}

fn semigroup() -> Result<f64, Error> {
    let mut rng = random::seeded(5);
    let profile = quiet(0.13, 0.31);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let rho = random::mixed_state(&mut rng);
        let (s, t) = (0.7, 2.9);
        let two_step = analytic_evolve(
            &analytic_evolve(&rho, channel_factors(&profile, s)?),
            channel_factors(&profile, t)?,
        );
        let one_step = analytic_evolve(&rho, channel_factors(&profile, s + t)?);
        worst = worst.max(two_step.matrix().max_abs_diff(one_step.matrix()));
    }
    Ok(worst)
}

/// Count of channel outputs that fail density-matrix validation.
fn channel_preserves_states() -> Result<f64, Error> {
    let mut rng = random::seeded(6);
    let mut failures = 0;
    for _ in 0..RANDOM_STATES {
        let rho = random::mixed_state(&mut rng);
        for g in [0.01, 0.3, 0.9] {
            let out = analytic_evolve(
                &rho,
                ChannelFactors {
                    g1: g,
                    g2: 1.0 - 0.5 * g,
                },
            );
            if DensityMatrix::validate(out.into_matrix()).is_err() {
                failures += 1;
            }
        }
    }
    Ok(failures as f64)
}

fn oracle_equivalence() -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for f in Family::ALL {
        for p in [0.5, 1.0] {
            for (g1, g2) in [(0.1, 0.1), (0.05, 0.2)] {
                let profile = quiet(g1, g2);
                let rho = wspec(f, p)?;
                let exact = analytic_evolve(&rho, channel_factors(&profile, 5.0)?);
                let rk4 = integrate(&rho, &profile, 5.0, 1e-3)?;
                worst = worst.max(exact.matrix().max_abs_diff(rk4.matrix()));
            }
        }
    }
    Ok(worst)
}

/// |e(dt)/e(dt/2) − 16|; fourth order means a ratio near 16.
fn rk4_order() -> Result<f64, Error> {
    let profile = quiet(0.2, 0.15);
    let rho = random::mixed_state_of_rank(&mut random::seeded(7), 4);
    let exact = analytic_evolve(&rho, channel_factors(&profile, 10.0)?);
    let err = |dt: f64| -> Result<f64, Error> {
        Ok(integrate(&rho, &profile, 10.0, dt)?
            .matrix()
            .max_abs_diff(exact.matrix()))
    };
    Ok((err(0.5)? / err(0.25)? - 16.0).abs())
}

fn single_negative_eigenvalue() -> Result<f64, Error> {
    let mut rng = random::seeded(8);
    let mut violations = 0;
    for _ in 0..RANDOM_STATES {
        let rho = random::mixed_state(&mut rng);
        let ev = hermitian_eigenvalues(&measures::partial_transpose(&rho))?;
        if ev.iter().filter(|&&x| x < -1e-12).count() > 1 {
            violations += 1;
        }
    }
    Ok(violations as f64)
}

fn pure_state_coincidence() -> Result<f64, Error> {
    let mut rng = random::seeded(9);
    let mut worst: f64 = 0.0;
    for _ in 0..RANDOM_STATES {
        let m = measures::measure_all(&random::pure_state(&mut rng))?;
        worst = worst.max((m.b - m.c).abs()).max((m.n - m.c).abs());
    }
    Ok(worst)
}

fn local_unitary_invariance() -> Result<f64, Error> {
    let mut rng = random::seeded(10);
    let mut worst: f64 = 0.0;
    for _ in 0..RANDOM_STATES {
        let rho = random::mixed_state(&mut rng);
        let u = random::local_unitary(&mut rng);
        let a = measures::measure_all(&rho)?;
        let b = measures::measure_all(&random::conjugate(&rho, &u))?;
        for (x, y) in [(a.b, b.b), (a.c, b.c), (a.n, b.n), (a.ef, b.ef)] {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}

/// Count of grid points where positivity disagrees with the thresholds.
fn werner_thresholds() -> Result<f64, Error> {
    let b_edge = std::f64::consts::FRAC_1_SQRT_2;
    let e_edge = 1.0 / 3.0;
    let mut ps: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
    ps.extend([b_edge - 2e-9, b_edge + 2e-9, e_edge - 2e-9, e_edge + 2e-9]);
    let mut bad = 0;
    for f in Family::ALL {
        for &p in &ps {
            let m = measures::measure_all(&wspec(f, p)?)?;
            for (value, edge) in [(m.b, b_edge), (m.c, e_edge), (m.n, e_edge)] {
                if (p > edge + 1e-9 && value <= 0.0) || (p < edge - 1e-9 && value > 0.0) {
                    bad += 1;
                }
            }
        }
    }
    Ok(bad as f64)
}

/// Roots of the monic polynomial with coefficients `c` (highest first,
/// leading 1 omitted) by Durand–Kerner iteration.
fn polynomial_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len();
    let eval = |z: Complex64| {
        c.iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &k| acc * z + k)
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| {
                    acc * (roots[i] - roots[j])
                });
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-16 {
            break;
        }
    }
    roots
}

/// Eigenvalues of a 4×4 matrix from its characteristic polynomial
/// (Faddeev–LeVerrier coefficients).
pub fn charpoly_eigenvalues(m: &ComplexMatrix) -> Vec<Complex64> {
    let n = m.rows();
    let id = ComplexMatrix::identity(n);
    let mut coeffs = Vec::with_capacity(n);
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = -mk.trace() / k as f64;
        coeffs.push(ck);
        mk = m * &(&mk + &id.scale_complex(ck));
    }
    polynomial_roots(&coeffs)
}

fn concurrence_charpoly() -> Result<f64, Error> {
    let mut rng = random::seeded(11);
    let mut worst: f64 = 0.0;
    for _ in 0..RANDOM_STATES {
        let rho = random::mixed_state_of_rank(&mut rng, 4);
        let product = rho.matrix() * &measures::spin_flip(rho.matrix());
        let mut oracle: Vec<f64> = charpoly_eigenvalues(&product)
            .iter()
            .map(|z| z.re.max(0.0).sqrt())
            .collect();
        oracle.sort_by(|a, b| b.total_cmp(a));
        let ours = measures::wootters_lambdas(&rho)?;
        for (a, b) in ours.iter().zip(&oracle) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

const GRID_P: [f64; 6] = [
    0.0,
    0.34,
    0.5,
    std::f64::consts::FRAC_1_SQRT_2 + 0.01,
    0.8,
    1.0,
];
const GRID_T: [f64; 7] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
const GRID_RATES: [(f64, f64); 3] = [(0.1, 0.1), (0.1, 0.0), (0.05, 0.2)];

/// Largest |closed form − pipeline| over the reference grid.
pub fn pipeline_equivalence() -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for f in Family::ALL {
        for p in GRID_P {
            let rho0 = wspec(f, p)?;
            for (gm1, gm2) in GRID_RATES {
                for t in GRID_T {
                    let factors = channel_factors(&quiet(gm1, gm2), t)?;
                    let m = measures::measure_all(&analytic_evolve(&rho0, factors))?;
                    let input = ClosedFormInputs::new(f, p, factors.g1, factors.g2)?;
                    worst = worst.max((closedform::biv_closed(input) - m.b).abs());
                    if let Ok(c) = closedform::concurrence_closed(input) {
                        worst = worst.max((c - m.c).abs());
                    }
                    if let Ok(n) = closedform::negativity_closed(input) {
                        worst = worst.max((n - m.n).abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// Largest violation of B_X = B_Y ≥ B_Z (all rates) and, at p = 1,
/// C_Y ≥ C_Z ≥ C_X and, at short times, N_X ≥ N_Z ≥ N_Y.
fn orderings() -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for (gm1, gm2) in GRID_RATES {
        let profile = quiet(gm1, gm2);
        for p in [0.75, 0.8, 1.0] {
            for k in 0..=100 {
                let t = 0.2 * k as f64;
                let ms = family_measures(p, &profile, t)?;
                let [x, y, z] = ms;
                worst = worst.max((x.b - y.b).abs()).max(z.b - x.b);
                if p == 1.0 {
                    worst = worst.max(z.c - y.c).max(x.c - z.c);
                }
            }
        }
    }
    let profile = quiet(0.1, 0.1);
    for k in 0..=100 {
        let [x, y, z] = family_measures(1.0, &profile, 0.005 * k as f64)?;
        worst = worst.max(z.n - x.n).max(y.n - z.n);
    }
    Ok(worst)
}

fn family_measures(
    p: f64,
    profile: &DampingProfile,
    t: f64,
) -> Result<[measures::MeasureSet; 3], Error> {
    let factors = channel_factors(profile, t)?;
    let at = |f: Family| -> Result<measures::MeasureSet, Error> {
        measures::measure_all(&analytic_evolve(&wspec(f, p)?, factors))
    };
    Ok([at(Family::X)?, at(Family::Y)?, at(Family::Z)?])
}

fn one_sided_degeneracy() -> Result<f64, Error> {
    let profile = quiet(0.1, 0.0);
    let mut worst: f64 = 0.0;
    for p in [0.5, 0.8, 1.0] {
        for t in GRID_T {
            let [x, y, z] = family_measures(p, &profile, t)?;
            for m in [Measure::Biv, Measure::Concurrence, Measure::Negativity] {
                worst = worst
                    .max((x.get(m) - y.get(m)).abs())
                    .max((x.get(m) - z.get(m)).abs());
            }
            if p == 1.0 {
                let g1 = (-0.1 * t).exp();
                worst = worst.max((x.c - g1.sqrt()).abs()).max((x.n - g1).abs());
            }
        }
    }
    Ok(worst)
}

fn x_equal_rates() -> Result<f64, Error> {
    let profile = quiet(0.1, 0.1);
    let mut worst: f64 = 0.0;
    for p in GRID_P {
        for t in GRID_T {
            let [x, _, _] = family_measures(p, &profile, t)?;
            worst = worst.max((x.c - x.n).abs());
        }
    }
    Ok(worst)
}

/// Relative error between central-difference slopes of the pipeline at
/// t = 1e-4 and the short-time coefficients.
fn shorttime_slopes() -> Result<f64, Error> {
    let (t, h) = (1e-4, 1e-6);
    let mut worst: f64 = 0.0;
    for f in Family::ALL {
        for (gm1, gm2) in GRID_RATES {
            let profile = quiet(gm1, gm2);
            for (measure, p) in [
                (Measure::Biv, 0.8),
                (Measure::Concurrence, 1.0),
                (Measure::Negativity, 1.0),
            ] {
                let rho0 = wspec(f, p)?;
                let at = |s: f64| -> Result<f64, Error> {
                    measures::evaluate(
                        &analytic_evolve(&rho0, channel_factors(&profile, s)?),
                        measure,
                    )
                };
                let slope = (at(t + h)? - at(t - h)?) / (2.0 * h);
                let coeffs = closedform::shorttime_coeffs(f, measure, p, gm1, gm2)?;
                let expect = coeffs.linear + 2.0 * coeffs.quadratic.unwrap_or(0.0) * t;
                worst = worst.max(((slope - expect) / expect).abs());
            }
        }
    }
    Ok(worst)
}

fn table_search() -> EventSearch {
    EventSearch::new(100.0)
}

fn reference_events() -> Result<Vec<analysis::CrossingEvent>, Error> {
    let profile = quiet(0.1, 0.1);
    let mut events = analysis::ordering_table(0.8, profile, &table_search())?.events;
    for (f, m) in [
        (Family::X, Measure::Biv),
        (Family::X, Measure::Negativity),
        (Family::Z, Measure::Concurrence),
    ] {
        let outcome = analysis::vanish_time(
            WernerSpec::new(f, 0.8)?,
            m,
            profile,
            &EventSearch::new(50.0),
        )?;
        if let analysis::VanishOutcome::At(e) = outcome {
            events.push(e);
        }
    }
    Ok(events)
}

/// Largest |difference| at the reported time over the reference events.
fn event_residuals() -> Result<f64, Error> {
    Ok(reference_events()?
        .iter()
        .fold(0.0, |w, e| w.max(e.residual)))
}

fn event_brackets() -> Result<f64, Error> {
    Ok(reference_events()?
        .iter()
        .fold(0.0, |w, e| w.max(e.bracket.1 - e.bracket.0)))
}

/// Count of gaps or overlaps in the reference ordering table.
fn ordering_coverage() -> Result<f64, Error> {
    let table = analysis::ordering_table(0.8, quiet(0.1, 0.1), &table_search())?;
    let mut problems = 0;
    let mut cursor = 0.0;
    for row in &table.rows {
        match row.span {
            Span::Interval(a, b) => {
                if a != cursor || b <= a {
                    problems += 1;
                }
                cursor = b;
            }
            Span::Instant(t) => {
                if t != cursor {
                    problems += 1;
                }
            }
        }
    }
    if cursor != table.tmax {
        problems += 1;
    }
    Ok(problems as f64)
}

/// Difference in event count between the default step and a 10× finer one.
fn refinement_stability() -> Result<f64, Error> {
    let profile = quiet(0.1, 0.1);
    let coarse = analysis::ordering_table(0.8, profile, &table_search())?;
    let fine = analysis::ordering_table(0.8, profile, &table_search().with_step(0.001))?;
    Ok((coarse.events.len() as f64 - fine.events.len() as f64).abs())
}
