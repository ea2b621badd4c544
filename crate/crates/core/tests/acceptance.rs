//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use werner_core::analysis::{self, EventSearch, Span, WitnessPattern};
use werner_core::closedform as cf;
use werner_core::dynamics::{
    analytic_evolve, channel_factors, integrate, integrate_checkpoints, DampingProfile,
};
use werner_core::matkit::{hermitian_eigenvalues, ComplexMatrix};
use werner_core::measures::{self, Measure, MeasureSet};
use werner_core::random;
use werner_core::states::{werner, DensityMatrix, Family, WernerSpec};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn quiet(g1: f64, g2: f64) -> DampingProfile {
    DampingProfile::quiet(g1, g2).unwrap()
}

fn state(f: Family, p: f64) -> DensityMatrix {
    werner(WernerSpec::new(f, p).unwrap())
}

fn measures_at(f: Family, p: f64, profile: &DampingProfile, t: f64) -> MeasureSet {
    let rho = analytic_evolve(&state(f, p), channel_factors(profile, t).unwrap());
    measures::measure_all(&rho).unwrap()
}

fn grid(tmax: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| tmax * k as f64 / (n - 1) as f64).collect()
}

// ---------------------------------------------------------------- oracles

/// Bisection on a closed-form difference, independent of the event code.
fn closed_form_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let s = f(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvalues of a 4×4 matrix via power sums and Newton's identities,
/// then Aberth–Durand–Kerner root finding.
fn charpoly_roots(m: &ComplexMatrix) -> Vec<Complex64> {
    let n = 4;
    let mut power = m.clone();
    let mut sums = Vec::new();
    for _ in 0..n {
        sums.push(power.trace());
        power = &power * m;
    }
    // e_k from Newton's identities; char poly z⁴ − e1 z³ + e2 z² − e3 z + e4.
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += e[k - i] * sums[i - 1] * sign;
        }
        e.push(acc / k as f64);
    }
    let coeffs: Vec<Complex64> = (1..=n)
        .map(|k| if k % 2 == 1 { -e[k] } else { e[k] })
        .collect();
    let poly = |z: Complex64| {
        coeffs
            .iter()
            .fold(Complex64::new(1.0, 0.0), |a, &c| a * z + c)
    };
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5, 0.3 + k as f64 * 1.4))
        .collect();
    for _ in 0..1000 {
        for i in 0..n {
            let d = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |a, j| a * (roots[i] - roots[j]));
            let step = poly(roots[i]) / d;
            roots[i] -= step;
        }
    }
    roots
}

// --------------------------------------------------------------- criteria

const REFERENCE_T: [f64; 3] = [7.4745, 9.1613, 9.5209];
const TABLE_I: [&str; 7] = [
    "N_X > N_Z > N_Y",
    "N_X > N_Y = N_Z",
    "N_X > N_Y > N_Z",
    "N_X = N_Y > N_Z",
    "N_Y > N_X > N_Z",
    "N_Y > N_X = N_Z",
    "N_Y > N_Z > N_X",
];

fn table_one() -> Verdict {
    let table = analysis::ordering_table(0.8, quiet(0.1, 0.1), &EventSearch::new(100.0)).unwrap();
    let find = |a: &str, b: &str| -> Option<f64> {
        table
            .events
            .iter()
            .find(|e| {
                let pair = (
                    e.lhs.state.as_str(),
                    e.rhs.as_ref().map(|r| r.state.as_str()),
                );
                pair == (a, Some(b)) || pair == (b, Some(a))
            })
            .map(|e| e.time)
    };
    let found = [find("Y", "Z"), find("X", "Y"), find("X", "Z")];
    let mut ok = table.events.len() == 3;
    let mut detail = Vec::new();
    for (k, (t, reference)) in found.iter().zip(REFERENCE_T).enumerate() {
        match t {
            Some(t) => {
                let good = (t - reference).abs() <= 5e-4;
                ok &= good;
                detail.push(format!(
                    "t{}={t:.6} (reference {reference}, |Δ|={:.1e})",
                    k + 1,
                    (t - reference).abs()
                ));
            }
            None => {
                ok = false;
                detail.push(format!("t{} missing", k + 1));
            }
        }
    }
    // Exact X/Y crossing from the closed forms, for the record.
    let g = |t: f64| (-0.1 * t).exp();
    let t2_closed = closed_form_root(
        |t| cf::negativity_x(0.8, g(t), g(t)) - cf::negativity_y(0.8, g(t), g(t)),
        8.0,
        10.0,
    );
    detail.push(format!("closed-form t2={t2_closed:.6}"));

    let labels: Vec<String> = table
        .rows
        .iter()
        .map(|r| r.ranking.label(Measure::Negativity))
        .collect();
    let shapes_ok = table.rows.len() == 7
        && table
            .rows
            .iter()
            .enumerate()
            .all(|(i, r)| matches!(r.span, Span::Interval(..)) == (i % 2 == 0));
    let rows_ok = shapes_ok && labels.iter().map(String::as_str).eq(TABLE_I);
    ok &= rows_ok;
    detail.push(format!("rows {}", if rows_ok { "match" } else { "differ" }));
    if !rows_ok {
        detail.push(format!("{labels:?}"));
    }
    verdict(ok, detail.join("; "))
}

fn initial_values() -> Verdict {
    let mut worst_ce: f64 = 0.0;
    let mut worst_b: f64 = 0.0;
    for f in Family::ALL {
        let m = measures::measure_all(&state(f, 0.8)).unwrap();
        worst_ce = worst_ce.max((m.c - 0.7).abs()).max((m.n - 0.7).abs());
        worst_b = worst_b.max((m.b - 0.5291503).abs());
    }
    verdict(
        worst_ce <= 1e-12 && worst_b <= 1e-6,
        format!("max|C,N−0.7|={worst_ce:.1e}, max|B−0.5291503|={worst_b:.1e}"),
    )
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

/// Every closed form that applies at this point, with its name.
fn applicable_forms(
    f: Family,
    p: f64,
    g1: f64,
    g2: f64,
    t0: bool,
) -> Vec<(&'static str, Measure, f64)> {
    use Measure::{Biv as B, Concurrence as C, Negativity as N};
    let mut v = Vec::new();
    match f {
        Family::X | Family::Y => v.push(("B_XY", B, cf::biv_xy(p, g1, g2))),
        Family::Z => v.push(("B_Z", B, cf::biv_z(p, g1, g2))),
    }
    if t0 {
        v.push(("B_0", B, cf::biv_initial(p)));
        v.push(("C_0", C, cf::entanglement_initial(p)));
        v.push(("N_0", N, cf::entanglement_initial(p)));
    }
    let equal = g1 == g2;
    match f {
        Family::X => {
            v.push(("C_X", C, cf::concurrence_x(p, g1, g2)));
            v.push(("N_X", N, cf::negativity_x(p, g1, g2)));
            if equal {
                v.push(("C_X=", C, cf::entanglement_x_equal(p, g1)));
                v.push(("N_X=", N, cf::entanglement_x_equal(p, g1)));
            }
            if p == 1.0 {
                v.push(("C_X1", C, cf::concurrence_x_bell(g1, g2)));
                v.push(("N_X1", N, cf::negativity_x_bell(g1, g2)));
            }
        }
        Family::Y => {
            v.push(("C_Y", C, cf::concurrence_y(p, g1, g2)));
            v.push(("N_Y", N, cf::negativity_y(p, g1, g2)));
            if equal {
                v.push(("C_Y=", C, cf::concurrence_y_equal(p, g1)));
                v.push(("N_Y=", N, cf::negativity_y_equal(p, g1)));
            }
            if p == 1.0 {
                v.push(("C_Y1", C, cf::concurrence_y_bell(g1, g2)));
                v.push(("N_Y1", N, cf::negativity_y_bell(g1, g2)));
            }
        }
        Family::Z => {
            if p == 1.0 {
                v.push(("C_Z1", C, cf::concurrence_z_bell(g1, g2)));
                v.push(("N_Z1", N, cf::negativity_z_bell(g1, g2)));
                if equal {
                    v.push(("C_Z1=", C, cf::concurrence_z_bell_equal(g1)));
                }
            }
        }
    }
    if g2 == 1.0 {
        v.push(("B_1s", B, cf::biv_one_sided(p, g1)));
        v.push(("C_1s", C, cf::concurrence_one_sided(p, g1)));
        v.push(("N_1s", N, cf::negativity_one_sided(p, g1)));
        if p == 1.0 {
            v.push(("C_1s1", C, cf::concurrence_bell_one_sided(g1)));
            v.push(("N_1s1", N, cf::negativity_bell_one_sided(g1)));
        }
    }
    v
}

fn closed_form_equivalence() -> Verdict {
    let mut worst = (0.0, String::new());
    let mut count = 0;
    for f in Family::ALL {
        for p in GRID_P {
            for (gm1, gm2) in GRID_RATES {
                for t in GRID_T {
                    let factors = channel_factors(&quiet(gm1, gm2), t).unwrap();
                    let m = measures::measure_all(&analytic_evolve(&state(f, p), factors)).unwrap();
                    for (name, measure, value) in
                        applicable_forms(f, p, factors.g1, factors.g2, t == 0.0)
                    {
                        count += 1;
                        let d = (value - m.get(measure)).abs();
                        if d > worst.0 {
                            worst = (d, format!("{name} at {f} p={p} γ=({gm1},{gm2}) t={t}"));
                        }
                    }
                }
            }
        }
    }
    verdict(
        worst.0 <= 1e-10,
        format!(
            "{count} comparisons, max deviation {:.1e} ({})",
            worst.0, worst.1
        ),
    )
}

fn oracle_equivalence() -> Verdict {
    let times = [1.0, 5.0, 10.0, 20.0];
    let mut worst: f64 = 0.0;
    for f in Family::ALL {
        for p in [0.0, 0.5, 0.8, 1.0] {
            for (gm1, gm2) in GRID_RATES {
                let profile = quiet(gm1, gm2);
                let rho = state(f, p);
                let rk4 = integrate_checkpoints(&rho, &profile, &times, 1e-3).unwrap();
                for (t, r) in times.iter().zip(&rk4) {
                    let exact = analytic_evolve(&rho, channel_factors(&profile, *t).unwrap());
                    worst = worst.max(exact.matrix().max_abs_diff(r.matrix()));
                }
            }
        }
    }
    verdict(worst <= 1e-8, format!("max entry deviation {worst:.2e}"))
}

fn ordering_inequalities() -> Verdict {
    let slack = 1e-12;
    let mut worst_b: f64 = 0.0;
    for (gm1, gm2) in GRID_RATES {
        let profile = quiet(gm1, gm2);
        for p in [0.75, 0.8, 1.0] {
            for t in grid(20.0, 400) {
                let [x, y, z] = Family::ALL.map(|f| measures_at(f, p, &profile, t));
                worst_b = worst_b.max((x.b - y.b).abs()).max(z.b - x.b);
            }
        }
    }
    let profile = quiet(0.1, 0.1);
    let (mut worst_c, mut worst_n): (f64, f64) = (0.0, 0.0);
    for t in grid(0.5, 400) {
        let [x, y, z] = Family::ALL.map(|f| measures_at(f, 1.0, &profile, t));
        worst_c = worst_c.max(z.c - y.c).max(x.c - z.c);
        worst_n = worst_n.max(z.n - x.n).max(y.n - z.n);
    }
    let ok = worst_b <= slack && worst_c <= slack && worst_n <= slack;
    verdict(
        ok,
        format!("violations: B {worst_b:.1e}, C {worst_c:.1e}, N {worst_n:.1e}"),
    )
}

fn short_time_slopes() -> Verdict {
    // Coefficients as printed, evaluated here without the library.
    let f_c = |f: Family| match f {
        Family::X => 2.0,
        Family::Y => 0.0,
        Family::Z => 1.0,
    };
    let f_n = |f: Family| match f {
        Family::X => 2.0,
        Family::Y => 1.0,
        Family::Z => 1.25,
    };
    let (t, h) = (1e-4, 1e-6);
    let mut worst: f64 = 0.0;
    let mut at_worst = String::new();
    for f in Family::ALL {
        for (g1, g2) in [(0.1, 0.1), (0.05, 0.2), (0.1, 0.0)] {
            let profile = quiet(g1, g2);
            let q = (2.0 * 0.64 - 1.0f64).sqrt();
            let b_rate = match f {
                Family::Z => (5.0 * (g1 + g2) - (g1 - g2).abs()) / 4.0,
                _ => g1 + g2,
            };
            let expected = [
                (Measure::Biv, 0.8, -b_rate * 0.64 / q),
                (
                    Measure::Concurrence,
                    1.0,
                    -0.5 * (g1 + g2 + f_c(f) * (g1 * g2).sqrt()),
                ),
                (
                    Measure::Negativity,
                    1.0,
                    -(g1 + g2) + (g1 * g1 + f_n(f) * g1 * g2 + g2 * g2) * t,
                ),
            ];
            for (measure, p, slope) in expected {
                let curve = |s: f64| measures_at(f, p, &profile, s).get(measure);
                let fd = (curve(t + h) - curve(t - h)) / (2.0 * h);
                let lib = cf::shorttime_coeffs(f, measure, p, g1, g2).unwrap();
                let lib_slope = lib.linear + 2.0 * lib.quadratic.unwrap_or(0.0) * t;
                for rel in [
                    ((fd - slope) / slope).abs(),
                    ((lib_slope - slope) / slope).abs(),
                ] {
                    if rel > worst {
                        worst = rel;
                        at_worst = format!("{measure}_{f} γ=({g1},{g2})");
                    }
                }
            }
        }
    }
    verdict(
        worst <= 1e-4,
        format!("max relative deviation {worst:.1e} ({at_worst})"),
    )
}

fn single_reservoir() -> Verdict {
    let profile = quiet(0.1, 0.0);
    let (mut spread, mut bell): (f64, f64) = (0.0, 0.0);
    for p in [0.5, 0.8, 1.0] {
        for t in grid(20.0, 400) {
            let [x, y, z] = Family::ALL.map(|f| measures_at(f, p, &profile, t));
            for m in [Measure::Biv, Measure::Concurrence, Measure::Negativity] {
                spread = spread
                    .max((x.get(m) - y.get(m)).abs())
                    .max((x.get(m) - z.get(m)).abs());
            }
            if p == 1.0 {
                let g1 = (-0.1 * t).exp();
                for s in [x, y, z] {
                    bell = bell.max((s.c - g1.sqrt()).abs()).max((s.n - g1).abs());
                }
            }
        }
    }
    verdict(
        spread <= 1e-12 && bell <= 1e-12,
        format!("family spread {spread:.1e}, |C−√g1|,|N−g1| {bell:.1e}"),
    )
}

fn relativity_witnesses() -> Verdict {
    let profile = quiet(0.1, 0.1);
    let a = analysis::relativity_witness(1.0, profile, 0.3).unwrap();
    let t2 = analysis::crossing_times(
        Family::X,
        Family::Y,
        Measure::Negativity,
        0.8,
        profile,
        &EventSearch::new(20.0),
    )
    .unwrap()
    .first()
    .map(|e| e.time)
    .unwrap_or(f64::NAN);
    let c = analysis::relativity_witness(0.8, profile, t2).unwrap();
    let ok = a.pattern == Some(WitnessPattern::OppositeOrder)
        && a.summary() == "B_X = B_Y, C_X < C_Y, N_X > N_Y"
        && c.pattern == Some(WitnessPattern::EqualNegativity)
        && c.summary() == "B_X = B_Y, C_X < C_Y, N_X = N_Y";
    verdict(
        ok,
        format!(
            "t=0.3: ({}) {}; t2={t2:.6}: ({}) {}",
            letter(a.pattern),
            a.summary(),
            letter(c.pattern),
            c.summary()
        ),
    )
}

fn letter(p: Option<WitnessPattern>) -> char {
    p.map(WitnessPattern::letter).unwrap_or('-')
}

fn property_suites() -> Verdict {
    let n = 1000;
    let mut rng = random::seeded(2024);
    let mut multi_negative = 0;
    let mut lu: f64 = 0.0;
    let mut charpoly: f64 = 0.0;
    for k in 0..n {
        let rho = random::mixed_state(&mut rng);
        let pt = hermitian_eigenvalues(&measures::partial_transpose(&rho)).unwrap();
        if pt.iter().filter(|&&x| x < -1e-12).count() > 1 {
            multi_negative += 1;
        }
        let u = random::local_unitary(&mut rng);
        let a = measures::measure_all(&rho).unwrap();
        let b = measures::measure_all(&random::conjugate(&rho, &u)).unwrap();
        for (x, y) in [
            (a.b, b.b),
            (a.c, b.c),
            (a.ef, b.ef),
            (a.n, b.n),
            (a.logn, b.logn),
        ] {
            lu = lu.max((x - y).abs());
        }
        if k % 4 == 0 {
            let full = random::mixed_state_of_rank(&mut rng, 4);
            let product = full.matrix() * &measures::spin_flip(full.matrix());
            let mut oracle: Vec<f64> = charpoly_roots(&product)
                .iter()
                .map(|z| z.re.max(0.0).sqrt())
                .collect();
            oracle.sort_by(|x, y| y.total_cmp(x));
            let ours = measures::wootters_lambdas(&full).unwrap();
            for (x, y) in ours.iter().zip(&oracle) {
                charpoly = charpoly.max((x - y).abs());
            }
        }
    }
    let mut pure: f64 = 0.0;
    for _ in 0..n {
        let m = measures::measure_all(&random::pure_state(&mut rng)).unwrap();
        pure = pure.max((m.b - m.c).abs()).max((m.n - m.c).abs());
    }
    let profile = quiet(0.2, 0.15);
    let rho = random::mixed_state_of_rank(&mut rng, 4);
    let exact = analytic_evolve(&rho, channel_factors(&profile, 10.0).unwrap());
    let err = |dt: f64| {
        integrate(&rho, &profile, 10.0, dt)
            .unwrap()
            .matrix()
            .max_abs_diff(exact.matrix())
    };
    let factor = err(0.5) / err(0.25);

    let ok = multi_negative == 0
        && pure < 1e-9
        && lu < 1e-10
        && (12.0..=20.0).contains(&factor)
        && charpoly <= 1e-8;
    verdict(
        ok,
        format!(
            "PT multi-negative {multi_negative}/{n}, pure |B−C|,|N−C| {pure:.1e}, LU {lu:.1e}, RK4 factor {factor:.2}, λ vs char-poly {charpoly:.1e}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "reference crossing times",
            table_one,
            Some(Duration::from_secs(5)),
        ),
        ("t=0 Werner values", initial_values, None),
        (
            "closed form vs pipeline",
            closed_form_equivalence,
            Some(Duration::from_secs(10)),
        ),
        (
            "RK4 oracle vs exact channel",
            oracle_equivalence,
            Some(Duration::from_secs(60)),
        ),
        ("ordering inequalities", ordering_inequalities, None),
        ("short-time slopes", short_time_slopes, None),
        ("single-reservoir degeneracy", single_reservoir, None),
        ("relativity witnesses", relativity_witnesses, None),
        ("property suites", property_suites, None),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let passed = v.passed && in_time;
        if !passed {
            failures += 1;
        }
        let budget_note = budget
            .map(|b| format!(" / {}s budget", b.as_secs()))
            .unwrap_or_default();
        println!(
            "{} criterion {}: {name} [{:.2}s{budget_note}] {}",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            v.detail
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
