use werner_core::analysis::{
    self, crossing_times, ordering_table, relativity_witness, scan, EventKind, EventSearch,
    Evolver, InitialState, Route, ScanOptions, Span, WitnessPattern,
};
use werner_core::dynamics::DampingProfile;
use werner_core::measures::{self, Measure};
use werner_core::states::{Family, WernerSpec};
use werner_core::Execution;

fn quiet(g1: f64, g2: f64) -> DampingProfile {
    DampingProfile::quiet(g1, g2).unwrap()
}

fn spec(f: Family, p: f64) -> WernerSpec {
    WernerSpec::new(f, p).unwrap()
}

#[test]
fn pairwise_negativity_crossings_near_table_values() {
    let search = EventSearch::new(20.0);
    let profile = quiet(0.1, 0.1);
    for (a, b, expect) in [
        (Family::Y, Family::Z, 7.4745),
        (Family::X, Family::Y, 9.1629),
        (Family::X, Family::Z, 9.5209),
    ] {
        let events = crossing_times(a, b, Measure::Negativity, 0.8, profile, &search).unwrap();
        assert_eq!(events.len(), 1, "{a}/{b}: {events:?}");
        let e = &events[0];
        assert_eq!(e.kind, EventKind::Cross);
        assert!((e.time - expect).abs() < 5e-4, "{a}/{b} at {}", e.time);
        assert!(e.bracket.1 - e.bracket.0 <= 1e-8);
        assert!(e.residual <= 1e-9);
    }
}

#[test]
fn event_times_reevaluate_to_equal_values() {
    let profile = quiet(0.1, 0.1);
    let table = ordering_table(0.8, profile, &EventSearch::new(100.0)).unwrap();
    let ev = Evolver::auto(profile);
    for e in &table.events {
        let value = |label: &str| {
            let f: Family = label.parse().unwrap();
            let rho = ev
                .state_at(&werner_core::states::werner(spec(f, 0.8)), e.time)
                .unwrap();
            measures::negativity(&rho).unwrap()
        };
        let rhs = e.rhs.as_ref().unwrap();
        assert!(
            (value(&e.lhs.state) - value(&rhs.state)).abs() <= 1e-9,
            "{e:?}"
        );
    }
}

#[test]
fn single_reservoir_ordering_is_one_tie() {
    let table = ordering_table(0.8, quiet(0.1, 0.0), &EventSearch::new(30.0)).unwrap();
    assert!(table.events.is_empty());
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.rows[0].span, Span::Interval(0.0, 30.0));
    assert!(table.rows[0].ranking.all_equal());
}

#[test]
fn short_time_ordering_at_p1() {
    let table = ordering_table(1.0, quiet(0.1, 0.1), &EventSearch::new(0.5)).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(
        table.rows[0].ranking.label(Measure::Negativity),
        "N_X > N_Z > N_Y"
    );
}

#[test]
fn late_time_witness_is_same_order() {
    let r = relativity_witness(0.8, quiet(0.1, 0.1), 20.0).unwrap();
    assert_eq!(r.pattern, Some(WitnessPattern::SameOrder));
    assert!(r.y.n > r.x.n && r.y.c > r.x.c);
}

#[test]
fn one_sided_scan_columns_coincide() {
    let specs: Vec<_> = Family::ALL.iter().map(|&f| spec(f, 0.8)).collect();
    let table = analysis::scan_werner(&specs, quiet(0.1, 0.0), 20.0, 101).unwrap();
    for k in 0..table.times.len() {
        let x = table.rows[0].measures[k];
        for other in &table.rows[1..] {
            let o = other.measures[k];
            for m in [
                Measure::Biv,
                Measure::Concurrence,
                Measure::Negativity,
                Measure::Formation,
            ] {
                assert!((x.get(m) - o.get(m)).abs() < 1e-12);
            }
        }
    }
    // Sudden death of B is shared by all three families.
    let b_deaths: Vec<_> = table
        .events
        .iter()
        .filter(|e| e.kind == EventKind::Vanish && e.lhs.measure == Measure::Biv)
        .collect();
    assert_eq!(b_deaths.len(), 3);
    for e in b_deaths {
        assert!((e.time - 1.28f64.ln() / 0.1).abs() < 1e-9);
    }
}

#[test]
fn thermal_scan_uses_integrator() {
    let hot = DampingProfile::new(0.1, 0.1, 0.3, 0.0).unwrap();
    let ev = Evolver::auto(hot);
    assert!(matches!(ev.route(), Route::Integrator { .. }));
    let states = [InitialState::werner(spec(Family::X, 1.0))];
    let opts = ScanOptions {
        event_step: None,
        ..ScanOptions::default()
    };
    let table = scan(&states, &ev, 2.0, 5, &opts).unwrap();
    let quiet_table =
        analysis::scan_werner(&[spec(Family::X, 1.0)], quiet(0.1, 0.1), 2.0, 5).unwrap();
    // Thermal excitation destroys entanglement faster than the quiet bath.
    let last = table.rows[0].measures[4];
    assert!(last.n < quiet_table.rows[0].measures[4].n);
}

#[test]
fn oracle_column_is_small() {
    let states = [InitialState::werner(spec(Family::Z, 0.9))];
    let opts = ScanOptions {
        oracle_dt: Some(1e-3),
        event_step: None,
        exec: Execution::Sequential,
    };
    let table = scan(&states, &Evolver::auto(quiet(0.05, 0.2)), 10.0, 11, &opts).unwrap();
    let dev = table.rows[0].oracle_deviation.as_ref().unwrap();
    assert!(dev.iter().all(|&d| d < 1e-8));
    let csv = table.to_csv();
    assert!(csv.lines().next().unwrap().ends_with(",oracle_dev"));
    // The oracle needs the exact channel as its reference.
    let hot = DampingProfile::new(0.1, 0.1, 0.3, 0.0).unwrap();
    assert!(scan(&states, &Evolver::auto(hot), 1.0, 3, &opts).is_err());
}

#[test]
fn events_serialize_with_labels() {
    let events = crossing_times(
        Family::Y,
        Family::Z,
        Measure::Negativity,
        0.8,
        quiet(0.1, 0.1),
        &EventSearch::new(10.0),
    )
    .unwrap();
    let json = serde_json::to_value(&events).unwrap();
    assert_eq!(json[0]["kind"], "cross");
    assert_eq!(json[0]["lhs"], "N_Y");
    assert_eq!(json[0]["rhs"], "N_Z");
    assert_eq!(json[0]["description"], "N_Y = N_Z");
}

#[test]
fn finer_event_step_finds_same_events() {
    let profile = quiet(0.1, 0.1);
    let coarse = ordering_table(0.8, profile, &EventSearch::new(100.0)).unwrap();
    let fine = ordering_table(0.8, profile, &EventSearch::new(100.0).with_step(0.001)).unwrap();
    assert_eq!(coarse.events.len(), fine.events.len());
    for (a, b) in coarse.events.iter().zip(&fine.events) {
        assert!((a.time - b.time).abs() < 1e-9);
    }
}
