//! Time scans, sudden-death times, pairwise crossings and negativity
//! orderings.
//!
//! Curves are always produced by the generic pipeline: evolve the initial
//! state (exact channel for quiet reservoirs, RK4 otherwise), then apply the
//! measure. Events are located by a sign-change scan on a fixed grid
//! followed by bisection. Grid evaluation may run in parallel; event
//! detection itself walks the assembled grid sequentially, so results do not
//! depend on the worker count.

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::dynamics::{self, analytic_evolve, channel_factors, DampingProfile, DEFAULT_DT};
use crate::measures::{self, Measure, MeasureSet};
use crate::numfmt::sig17;
use crate::par::{self, Execution};
use crate::states::{werner, DensityMatrix, Family, WernerSpec};
use crate::Error;

/// Default spacing of the sign-change scan.
pub const DEFAULT_EVENT_STEP: f64 = 0.01;
/// Final bracket width of every bisection.
pub const BISECTION_TOL: f64 = 1e-10;
/// Differences at or below this are "no sign" during the scan, so curves
/// that coincide up to round-off never produce crossings.
pub const SCAN_TIE_TOL: f64 = 1e-11;
/// Values closer than this share a rank in orderings and witness reports.
pub const ORDER_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("{0} requires a quiet (n̄ = 0) reservoir profile")]
    NotQuiet(&'static str),
    #[error("{curve} is not positive at t = 0 (value {value})")]
    NotPositiveAtStart { curve: String, value: f64 },
    #[error("nothing to scan")]
    NoStates,
}

// ------------------------------------------------------------------ routing

/// How states are propagated in time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Route {
    /// Exact zero-temperature channel.
    Analytic,
    /// RK4 on the master equation.
    Integrator { dt: f64 },
}

impl Route {
    /// The exact channel for quiet reservoirs unless the oracle is forced.
    pub fn for_profile(profile: &DampingProfile, force_oracle: bool, dt: Option<f64>) -> Route {
        if profile.is_quiet() && !force_oracle {
            Route::Analytic
        } else {
            Route::Integrator {
                dt: dt.unwrap_or(DEFAULT_DT),
            }
        }
    }
}

/// A damping profile paired with a propagation route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evolver {
    profile: DampingProfile,
    route: Route,
}

impl Evolver {
    pub fn new(profile: DampingProfile, route: Route) -> Result<Self, Error> {
        if route == Route::Analytic && !profile.is_quiet() {
            return Err(AnalysisError::NotQuiet("the exact channel").into());
        }
        if let Route::Integrator { dt } = route {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(dynamics::DynamicsError::InvalidStep(dt).into());
            }
        }
        Ok(Self { profile, route })
    }

    /// Default routing for `profile`.
    pub fn auto(profile: DampingProfile) -> Self {
        Self {
            profile,
            route: Route::for_profile(&profile, false, None),
        }
    }

    pub fn profile(&self) -> &DampingProfile {
        &self.profile
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn state_at(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix, Error> {
        match self.route {
            Route::Analytic => Ok(analytic_evolve(rho0, channel_factors(&self.profile, t)?)),
            Route::Integrator { dt } => Ok(dynamics::integrate(rho0, &self.profile, t, dt)?),
        }
    }

    /// States on an ascending grid. The integrator walks one trajectory
    /// through all checkpoints.
    pub fn states_on(
        &self,
        rho0: &DensityMatrix,
        times: &[f64],
        exec: Execution,
    ) -> Result<Vec<DensityMatrix>, Error> {
        match self.route {
            Route::Analytic => par::try_map(exec, times, |&t| self.state_at(rho0, t)),
            Route::Integrator { dt } => Ok(dynamics::integrate_checkpoints(
                rho0,
                &self.profile,
                times,
                dt,
            )?),
        }
    }

    fn require_quiet(&self, what: &'static str) -> Result<(), Error> {
        if self.profile.is_quiet() {
            Ok(())
        } else {
            Err(AnalysisError::NotQuiet(what).into())
        }
    }
}

// ------------------------------------------------------------ initial states

/// An initial state with the label used in tables and event names.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    pub label: String,
    pub werner: Option<WernerSpec>,
    pub rho: DensityMatrix,
}

impl InitialState {
    pub fn werner(spec: WernerSpec) -> Self {
        Self {
            label: spec.family().label().to_string(),
            werner: Some(spec),
            rho: werner(spec),
        }
    }

    pub fn custom(label: impl Into<String>, rho: DensityMatrix) -> Self {
        Self {
            label: label.into(),
            werner: None,
            rho,
        }
    }
}

// ------------------------------------------------------------------ events

/// A measure of a labelled state, printed as e.g. `N_X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub state: String,
    pub measure: Measure,
}

impl Curve {
    pub fn new(state: impl Into<String>, measure: Measure) -> Self {
        Self {
            state: state.into(),
            measure,
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.measure, self.state)
    }
}

impl Serialize for Curve {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// A measure reaches zero.
    Vanish,
    /// Two curves exchange order.
    Cross,
}

/// A located vanishing or crossing time.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingEvent {
    pub kind: EventKind,
    pub lhs: Curve,
    pub rhs: Option<Curve>,
    pub time: f64,
    pub bracket: (f64, f64),
    /// |lhs − rhs| (or |lhs| for a vanish) re-evaluated at `time`.
    pub residual: f64,
}

impl CrossingEvent {
    pub fn description(&self) -> String {
        match (&self.kind, &self.rhs) {
            (EventKind::Cross, Some(rhs)) => format!("{} = {}", self.lhs, rhs),
            _ => format!("{} = 0", self.lhs),
        }
    }
}

impl Serialize for CrossingEvent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CrossingEvent", 7)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.serialize_field("description", &self.description())?;
        st.serialize_field("time", &self.time)?;
        st.serialize_field("bracket", &[self.bracket.0, self.bracket.1])?;
        st.serialize_field("residual", &self.residual)?;
        st.end()
    }
}

/// Result of a sudden-death search.
#[derive(Debug, Clone, PartialEq)]
pub enum VanishOutcome {
    At(CrossingEvent),
    /// Still positive at the search horizon.
    Never {
        horizon: f64,
    },
}

impl VanishOutcome {
    pub fn time(&self) -> Option<f64> {
        match self {
            VanishOutcome::At(e) => Some(e.time),
            VanishOutcome::Never { .. } => None,
        }
    }
}

/// Grid and scheduling for event searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventSearch {
    pub tmax: f64,
    pub step: f64,
    pub exec: Execution,
}

impl EventSearch {
    pub fn new(tmax: f64) -> Self {
        Self {
            tmax,
            step: DEFAULT_EVENT_STEP,
            exec: Execution::default(),
        }
    }

    pub fn with_step(self, step: f64) -> Self {
        Self { step, ..self }
    }

    pub fn with_exec(self, exec: Execution) -> Self {
        Self { exec, ..self }
    }

    /// 0, step, 2·step, …, ending exactly at tmax.
    pub fn grid(&self) -> Result<Vec<f64>, Error> {
        if !(self.tmax.is_finite() && self.tmax > 0.0) {
            return Err(AnalysisError::InvalidGrid(format!(
                "tmax = {} must be positive",
                self.tmax
            ))
            .into());
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(AnalysisError::InvalidGrid(format!(
                "step = {} must be positive",
                self.step
            ))
            .into());
        }
        let n = (self.tmax / self.step).ceil() as usize;
        let mut times: Vec<f64> = (0..n).map(|k| k as f64 * self.step).collect();
        times.retain(|&t| t < self.tmax);
        times.push(self.tmax);
        Ok(times)
    }
}

fn sign(x: f64, tie: f64) -> i8 {
    if x > tie {
        1
    } else if x < -tie {
        -1
    } else {
        0
    }
}

/// Brackets (indices) where the sampled function changes strict sign,
/// skipping runs of ties. Index 0 (t = 0) is ignored.
pub fn sign_change_brackets(values: &[f64], tie: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut last: Option<(usize, i8)> = None;
    for (k, &v) in values.iter().enumerate().skip(1) {
        let s = sign(v, tie);
        if s == 0 {
            continue;
        }
        if let Some((j, prev)) = last {
            if prev != s {
                out.push((j, k));
            }
        }
        last = Some((k, s));
    }
    out
}

/// Shrinks [lo, hi] to width ≤ [`BISECTION_TOL`], keeping `lo` on the side
/// where `f` has sign `side`.
fn bisect<F>(mut lo: f64, mut hi: f64, side: i8, f: F) -> Result<(f64, f64), Error>
where
    F: Fn(f64) -> Result<f64, Error>,
{
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sign(f(mid)?, 0.0) == side {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

fn witness_on(
    evolver: &Evolver,
    state: &InitialState,
    measure: Measure,
    times: &[f64],
    exec: Execution,
) -> Result<Vec<f64>, Error> {
    let states = evolver.states_on(&state.rho, times, exec)?;
    par::try_map(exec, &states, |rho| measures::signed_witness(rho, measure))
}

fn values_on(
    evolver: &Evolver,
    state: &InitialState,
    measure: Measure,
    times: &[f64],
    exec: Execution,
) -> Result<Vec<f64>, Error> {
    let states = evolver.states_on(&state.rho, times, exec)?;
    par::try_map(exec, &states, |rho| measures::evaluate(rho, measure))
}

fn value_at(
    evolver: &Evolver,
    state: &InitialState,
    measure: Measure,
    t: f64,
) -> Result<f64, Error> {
    measures::evaluate(&evolver.state_at(&state.rho, t)?, measure)
}

/// First time `measure` of `state` reaches zero.
pub fn vanish_time_of(
    state: &InitialState,
    measure: Measure,
    evolver: &Evolver,
    search: &EventSearch,
) -> Result<VanishOutcome, Error> {
    let times = search.grid()?;
    let w = witness_on(evolver, state, measure, &times, search.exec)?;
    vanish_from_samples(state, measure, evolver, &times, &w)
}

fn vanish_from_samples(
    state: &InitialState,
    measure: Measure,
    evolver: &Evolver,
    times: &[f64],
    witness: &[f64],
) -> Result<VanishOutcome, Error> {
    let curve = Curve::new(state.label.clone(), measure);
    if witness[0] <= 0.0 {
        return Err(AnalysisError::NotPositiveAtStart {
            curve: curve.to_string(),
            value: witness[0],
        }
        .into());
    }
    let Some(k) = witness.iter().position(|&w| w <= 0.0) else {
        return Ok(VanishOutcome::Never {
            horizon: *times.last().expect("non-empty grid"),
        });
    };
    let f = |t: f64| measures::signed_witness(&evolver.state_at(&state.rho, t)?, measure);
    let (lo, hi) = bisect(times[k - 1], times[k], 1, f)?;
    // `hi` is on the dead side, so the floored measure is exactly zero there.
    let residual = value_at(evolver, state, measure, hi)?.abs();
    Ok(VanishOutcome::At(CrossingEvent {
        kind: EventKind::Vanish,
        lhs: curve,
        rhs: None,
        time: hi,
        bracket: (lo, hi),
        residual,
    }))
}

/// First vanishing time of a measure of a Werner-family state.
pub fn vanish_time(
    spec: WernerSpec,
    measure: Measure,
    profile: DampingProfile,
    search: &EventSearch,
) -> Result<VanishOutcome, Error> {
    vanish_time_of(
        &InitialState::werner(spec),
        measure,
        &Evolver::auto(profile),
        search,
    )
}

fn crossings_from_samples(
    lhs: &InitialState,
    rhs: &InitialState,
    measure: Measure,
    evolver: &Evolver,
    times: &[f64],
    a: &[f64],
    b: &[f64],
) -> Result<Vec<CrossingEvent>, Error> {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let f = |t: f64| Ok(value_at(evolver, lhs, measure, t)? - value_at(evolver, rhs, measure, t)?);
    let mut events = Vec::new();
    for (i, j) in sign_change_brackets(&diff, SCAN_TIE_TOL) {
        let (lo, hi) = bisect(times[i], times[j], sign(diff[i], SCAN_TIE_TOL), f)?;
        let time = 0.5 * (lo + hi);
        events.push(CrossingEvent {
            kind: EventKind::Cross,
            lhs: Curve::new(lhs.label.clone(), measure),
            rhs: Some(Curve::new(rhs.label.clone(), measure)),
            time,
            bracket: (lo, hi),
            residual: f(time)?.abs(),
        });
    }
    Ok(events)
}

/// All times in (0, tmax] where `measure` of `lhs` and `rhs` exchange order.
pub fn crossing_times_of(
    lhs: &InitialState,
    rhs: &InitialState,
    measure: Measure,
    evolver: &Evolver,
    search: &EventSearch,
) -> Result<Vec<CrossingEvent>, Error> {
    let times = search.grid()?;
    let a = values_on(evolver, lhs, measure, &times, search.exec)?;
    let b = values_on(evolver, rhs, measure, &times, search.exec)?;
    crossings_from_samples(lhs, rhs, measure, evolver, &times, &a, &b)
}

/// Crossings between two Werner families with the same mixing `p`.
pub fn crossing_times(
    lhs: Family,
    rhs: Family,
    measure: Measure,
    p: f64,
    profile: DampingProfile,
    search: &EventSearch,
) -> Result<Vec<CrossingEvent>, Error> {
    let a = InitialState::werner(WernerSpec::new(lhs, p)?);
    let b = InitialState::werner(WernerSpec::new(rhs, p)?);
    crossing_times_of(&a, &b, measure, &Evolver::auto(profile), search)
}

// -------------------------------------------------------------------- scans

/// One initial state's measures along the scan grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSeries {
    pub state: String,
    pub p: Option<f64>,
    pub measures: Vec<MeasureSet>,
    /// Max entry deviation between the exact channel and the RK4 oracle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_deviation: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub times: Vec<f64>,
    pub rows: Vec<ScanSeries>,
    pub events: Vec<CrossingEvent>,
}

impl ScanTable {
    pub const CSV_HEADER: &'static str = "t,family,p,m,b,c,ef,n,logn";

    fn has_oracle(&self) -> bool {
        self.rows.iter().any(|r| r.oracle_deviation.is_some())
    }

    /// One line per (time, state), 17 significant digits.
    pub fn to_csv(&self) -> String {
        let oracle = self.has_oracle();
        let mut out = String::from(Self::CSV_HEADER);
        if oracle {
            out.push_str(",oracle_dev");
        }
        out.push('\n');
        for (k, &t) in self.times.iter().enumerate() {
            for row in &self.rows {
                let p = row.p.map(sig17).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{}",
                    sig17(t),
                    row.state,
                    p,
                    row.measures[k].csv_values()
                ));
                if oracle {
                    let dev = row.oracle_deviation.as_ref().map(|d| sig17(d[k]));
                    out.push(',');
                    out.push_str(&dev.unwrap_or_default());
                }
                out.push('\n');
            }
        }
        out
    }

    /// `measure(lhs) − measure(rhs)` along the grid, e.g. ΔN relative to Y.
    pub fn difference(&self, lhs: &str, rhs: &str, measure: Measure) -> Option<Vec<f64>> {
        let find = |label: &str| self.rows.iter().find(|r| r.state == label);
        let (a, b) = (find(lhs)?, find(rhs)?);
        Some(
            a.measures
                .iter()
                .zip(&b.measures)
                .map(|(x, y)| x.get(measure) - y.get(measure))
                .collect(),
        )
    }
}

/// Options for [`scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub exec: Execution,
    /// Also run the RK4 oracle (this step) and record its deviation.
    pub oracle_dt: Option<f64>,
    /// Locate vanishing times and crossings on a grid of this spacing.
    pub event_step: Option<f64>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            exec: Execution::default(),
            oracle_dt: None,
            event_step: Some(DEFAULT_EVENT_STEP),
        }
    }
}

/// Uniform grid of `steps` points on [0, tmax].
pub fn uniform_grid(tmax: f64, steps: usize) -> Result<Vec<f64>, Error> {
    if steps < 2 {
        return Err(AnalysisError::InvalidGrid(format!("steps = {steps}, need at least 2")).into());
    }
    if !(tmax.is_finite() && tmax > 0.0) {
        return Err(AnalysisError::InvalidGrid(format!("tmax = {tmax} must be positive")).into());
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k + 1 == steps {
                tmax
            } else {
                tmax * k as f64 / last
            }
        })
        .collect())
}

const EVENT_MEASURES: [Measure; 3] = [Measure::Biv, Measure::Concurrence, Measure::Negativity];

/// The exact channel parallelises over time points; RK4 trajectories are
/// inherently sequential, so those parallelise over initial states.
fn split_exec(evolver: &Evolver, exec: Execution) -> (Execution, Execution) {
    match evolver.route() {
        Route::Analytic => (Execution::Sequential, exec),
        Route::Integrator { .. } => (exec, Execution::Sequential),
    }
}

/// Measures of every state on a uniform grid, plus the events between them.
pub fn scan(
    states: &[InitialState],
    evolver: &Evolver,
    tmax: f64,
    steps: usize,
    options: &ScanOptions,
) -> Result<ScanTable, Error> {
    if states.is_empty() {
        return Err(AnalysisError::NoStates.into());
    }
    let times = uniform_grid(tmax, steps)?;
    let exec = options.exec;
    let oracle = match options.oracle_dt {
        Some(dt) => {
            evolver.require_quiet("oracle comparison")?;
            Some(Evolver::new(*evolver.profile(), Route::Integrator { dt })?)
        }
        None => None,
    };

    let (outer, inner) = split_exec(evolver, exec);
    let per_state = par::try_map(outer, states, |s| -> Result<ScanSeries, Error> {
        let rhos = evolver.states_on(&s.rho, &times, inner)?;
        let measures = par::try_map(inner, &rhos, measures::measure_all)?;
        let oracle_deviation = match &oracle {
            Some(o) => {
                let reference = o.states_on(&s.rho, &times, inner)?;
                Some(
                    rhos.iter()
                        .zip(&reference)
                        .map(|(a, b)| a.matrix().max_abs_diff(b.matrix()))
                        .collect(),
                )
            }
            None => None,
        };
        Ok(ScanSeries {
            state: s.label.clone(),
            p: s.werner.map(|w| w.p()),
            measures,
            oracle_deviation,
        })
    })?;

    let events = match options.event_step {
        Some(step) => find_events(states, evolver, &EventSearch { tmax, step, exec })?,
        None => Vec::new(),
    };
    Ok(ScanTable {
        times,
        rows: per_state,
        events,
    })
}

/// Werner-family convenience wrapper around [`scan`].
pub fn scan_werner(
    specs: &[WernerSpec],
    profile: DampingProfile,
    tmax: f64,
    steps: usize,
) -> Result<ScanTable, Error> {
    let states: Vec<_> = specs.iter().copied().map(InitialState::werner).collect();
    scan(
        &states,
        &Evolver::auto(profile),
        tmax,
        steps,
        &ScanOptions::default(),
    )
}

/// Vanishing times of B, C, N for each state, and C, N crossings for each
/// pair, sorted by time.
pub fn find_events(
    states: &[InitialState],
    evolver: &Evolver,
    search: &EventSearch,
) -> Result<Vec<CrossingEvent>, Error> {
    let times = search.grid()?;
    let (outer, inner) = split_exec(evolver, search.exec);
    // samples[state][measure] = (signed witnesses, floored values) on the grid.
    type Samples = Vec<(Vec<f64>, Vec<f64>)>;
    let samples = par::try_map(outer, states, |s| -> Result<Samples, Error> {
        let rhos = evolver.states_on(&s.rho, &times, inner)?;
        let bcn = par::try_map(inner, &rhos, measures::bcn_sample)?;
        Ok((0..EVENT_MEASURES.len())
            .map(|i| bcn.iter().map(|(w, v)| (w[i], v[i])).unzip())
            .collect())
    })?;

    let mut events = Vec::new();
    for (s, per_measure) in states.iter().zip(&samples) {
        for (&m, (w, _)) in EVENT_MEASURES.iter().zip(per_measure) {
            if w[0] <= 0.0 {
                continue;
            }
            if let VanishOutcome::At(e) = vanish_from_samples(s, m, evolver, &times, w)? {
                events.push(e);
            }
        }
    }
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            for (mi, &m) in EVENT_MEASURES.iter().enumerate().skip(1) {
                let a = &samples[i][mi].1;
                let b = &samples[j][mi].1;
                events.extend(crossings_from_samples(
                    &states[i], &states[j], m, evolver, &times, a, b,
                )?);
            }
        }
    }
    events.sort_by(|x, y| x.time.total_cmp(&y.time));
    Ok(events)
}

// ---------------------------------------------------------------- orderings

/// Families grouped by equal value, groups in descending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking(pub Vec<Vec<Family>>);

impl Ranking {
    pub fn of(values: [(Family, f64); 3], tie: f64) -> Ranking {
        let mut sorted = values;
        sorted.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut groups: Vec<Vec<Family>> = Vec::new();
        let mut anchor = f64::NAN;
        for (f, v) in sorted {
            match groups.last_mut() {
                Some(g) if (anchor - v).abs() <= tie => g.push(f),
                _ => {
                    groups.push(vec![f]);
                    anchor = v;
                }
            }
        }
        for g in &mut groups {
            g.sort();
        }
        Ranking(groups)
    }

    pub fn all_equal(&self) -> bool {
        self.0.len() == 1
    }

    pub fn label(&self, measure: Measure) -> String {
        self.0
            .iter()
            .map(|g| {
                g.iter()
                    .map(|f| format!("{measure}_{f}"))
                    .collect::<Vec<_>>()
                    .join(" = ")
            })
            .collect::<Vec<_>>()
            .join(" > ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Span {
    /// Open interval (from, to).
    Interval(f64, f64),
    /// A single event time.
    Instant(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingRow {
    pub span: Span,
    pub ranking: Ranking,
}

impl Serialize for OrderingRow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OrderingRow", 3)?;
        match self.span {
            Span::Interval(a, b) => {
                st.serialize_field("from", &a)?;
                st.serialize_field("to", &b)?;
            }
            Span::Instant(t) => {
                st.serialize_field("at", &t)?;
            }
        }
        st.serialize_field("ordering", &self.ranking.label(Measure::Negativity))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingTable {
    pub p: f64,
    pub profile: DampingProfile,
    pub tmax: f64,
    pub events: Vec<CrossingEvent>,
    pub rows: Vec<OrderingRow>,
}

/// Partitions (0, tmax) by the pairwise negativity crossings of the three
/// families and ranks them on each piece and at each crossing.
pub fn ordering_table(
    p: f64,
    profile: DampingProfile,
    search: &EventSearch,
) -> Result<OrderingTable, Error> {
    let evolver = Evolver::auto(profile);
    evolver.require_quiet("the ordering table")?;
    let states: Vec<InitialState> = Family::ALL
        .iter()
        .map(|&f| WernerSpec::new(f, p).map(InitialState::werner))
        .collect::<Result<_, _>>()?;
    let times = search.grid()?;
    let n = states
        .iter()
        .map(|s| values_on(&evolver, s, Measure::Negativity, &times, search.exec))
        .collect::<Result<Vec<_>, _>>()?;

    let mut events = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        events.extend(crossings_from_samples(
            &states[i],
            &states[j],
            Measure::Negativity,
            &evolver,
            &times,
            &n[i],
            &n[j],
        )?);
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time));

    // Simultaneous crossings (all three curves meeting) become one instant.
    let mut cuts: Vec<f64> = Vec::new();
    for e in &events {
        match cuts.last() {
            Some(&c) if (e.time - c).abs() <= 1e-8 => {}
            _ => cuts.push(e.time),
        }
    }
    let cuts: Vec<f64> = cuts.into_iter().filter(|&t| t < search.tmax).collect();

    let rank_at = |t: f64| -> Result<Ranking, Error> {
        let mut v = [(Family::X, 0.0); 3];
        for (slot, s) in v.iter_mut().zip(&states) {
            *slot = (
                s.werner.expect("werner").family(),
                value_at(&evolver, s, Measure::Negativity, t)?,
            );
        }
        Ok(Ranking::of(v, ORDER_TIE_TOL))
    };

    let mut rows = Vec::new();
    let mut from = 0.0;
    for &c in cuts.iter().chain(std::iter::once(&search.tmax)) {
        rows.push(OrderingRow {
            span: Span::Interval(from, c),
            ranking: rank_at(0.5 * (from + c))?,
        });
        if c < search.tmax {
            rows.push(OrderingRow {
                span: Span::Instant(c),
                ranking: rank_at(c)?,
            });
        }
        from = c;
    }
    Ok(OrderingTable {
        p,
        profile,
        tmax: search.tmax,
        events,
        rows,
    })
}

// --------------------------------------------------------- witness patterns

/// Ways in which X and Y states with equal Bell violation can be ranked
/// differently by concurrence and negativity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessPattern {
    /// C and N rank the two states oppositely.
    OppositeOrder,
    /// C and N rank the two states the same way.
    SameOrder,
    /// Equal negativity but different concurrence.
    EqualNegativity,
}

impl WitnessPattern {
    pub fn letter(self) -> char {
        match self {
            WitnessPattern::OppositeOrder => 'a',
            WitnessPattern::SameOrder => 'b',
            WitnessPattern::EqualNegativity => 'c',
        }
    }

    /// Classifies two measure sets; `None` if B differs or no pattern fits.
    pub fn classify(x: &MeasureSet, y: &MeasureSet, tie: f64) -> Option<WitnessPattern> {
        if (x.b - y.b).abs() > tie {
            return None;
        }
        let dc = sign(x.c - y.c, tie);
        let dn = sign(x.n - y.n, tie);
        match (dc, dn) {
            (0, _) => None,
            (_, 0) => Some(WitnessPattern::EqualNegativity),
            _ if dc == dn => Some(WitnessPattern::SameOrder),
            _ => Some(WitnessPattern::OppositeOrder),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub p: f64,
    pub t: f64,
    pub x: MeasureSet,
    pub y: MeasureSet,
    pub pattern: Option<WitnessPattern>,
}

impl WitnessReport {
    /// Human-readable summary, e.g. `B_X = B_Y, C_X < C_Y, N_X > N_Y`.
    pub fn summary(&self) -> String {
        let rel = |a: f64, b: f64| match sign(a - b, ORDER_TIE_TOL) {
            1 => ">",
            -1 => "<",
            _ => "=",
        };
        format!(
            "B_X {} B_Y, C_X {} C_Y, N_X {} N_Y",
            rel(self.x.b, self.y.b),
            rel(self.x.c, self.y.c),
            rel(self.x.n, self.y.n)
        )
    }
}

/// Compares the evolved X and Y Werner states at time `t`.
pub fn relativity_witness(p: f64, profile: DampingProfile, t: f64) -> Result<WitnessReport, Error> {
    let evolver = Evolver::auto(profile);
    evolver.require_quiet("the relativity witness")?;
    let at = |f: Family| -> Result<MeasureSet, Error> {
        let rho0 = werner(WernerSpec::new(f, p)?);
        measures::measure_all(&evolver.state_at(&rho0, t)?)
    };
    let (x, y) = (at(Family::X)?, at(Family::Y)?);
    Ok(WitnessReport {
        p,
        t,
        x,
        y,
        pattern: WitnessPattern::classify(&x, &y, ORDER_TIE_TOL),
    })
}
