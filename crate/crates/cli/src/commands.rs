//! One function per subcommand, each producing the artifact text.

use serde::Serialize;
use serde_json::{json, Value};
use werner_core::analysis::{
    find_events, ordering_table, scan, EventSearch, Evolver, InitialState, Route, ScanOptions, Span,
};
use werner_core::numfmt::sig17;
use werner_core::{measures, selfcheck, CrossingEvent, DampingProfile, MeasureSet};

use crate::args::{Command, Format};
use crate::config::{RunConfig, StateSource};
use crate::error::CliError;

/// Text to emit, plus the failure to report once it has been written.
pub struct Artifact {
    pub body: Body,
    pub failure: Option<CliError>,
}

pub enum Body {
    Json(Value),
    Text(String),
}

impl Artifact {
    fn json(value: impl Serialize) -> Result<Self, CliError> {
        let value = serde_json::to_value(value)
            .map_err(|e| CliError::Validation(format!("unserializable result: {e}")))?;
        Ok(Self {
            body: Body::Json(value),
            failure: None,
        })
    }

    fn text(text: String) -> Self {
        Self {
            body: Body::Text(text),
            failure: None,
        }
    }

    /// Final bytes, optionally preceded by the configuration echo.
    pub fn render(self, echo: Option<Value>) -> String {
        let mut out = match (self.body, echo) {
            (Body::Json(v), Some(config)) => pretty(&json!({"config": config, "result": v})),
            (Body::Json(v), None) => pretty(&v),
            (Body::Text(t), Some(config)) => format!("# config: {config}\n{t}"),
            (Body::Text(t), None) => t,
        };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        out
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn initial_states(source: &StateSource) -> Vec<InitialState> {
    match source {
        StateSource::None => Vec::new(),
        StateSource::Families(specs) => specs.iter().copied().map(InitialState::werner).collect(),
        StateSource::File { rho, .. } => vec![InitialState::custom("custom", rho.clone())],
    }
}

fn evolver(cfg: &RunConfig) -> Result<Evolver, CliError> {
    Ok(Evolver::new(cfg.profile, cfg.route)?)
}

fn oracle(profile: DampingProfile, dt: f64) -> Result<Evolver, CliError> {
    Ok(Evolver::new(profile, Route::Integrator { dt })?)
}

pub fn run(cfg: &RunConfig) -> Result<Artifact, CliError> {
    match cfg.command {
        Command::Evolve => evolve(cfg),
        Command::Measure => measure(cfg),
        Command::Scan => scan_cmd(cfg),
        Command::Crossings => crossings(cfg),
        Command::Ordering => ordering(cfg),
        Command::Validate => validate(cfg),
    }
}

fn single_state(cfg: &RunConfig) -> InitialState {
    initial_states(&cfg.source)
        .pop()
        .expect("config guarantees one state")
}

fn evolve(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let s = single_state(cfg);
    let rho = evolver(cfg)?.state_at(&s.rho, cfg.t)?;
    match cfg.oracle_dt {
        None => Artifact::json(rho.to_json_value()),
        Some(dt) => {
            let reference = oracle(cfg.profile, dt)?.state_at(&s.rho, cfg.t)?;
            Artifact::json(json!({
                "state": rho.to_json_value(),
                "oracle": reference.to_json_value(),
                "oracle_dev": rho.matrix().max_abs_diff(reference.matrix()),
            }))
        }
    }
}

#[derive(Serialize)]
struct MeasureReport {
    t: f64,
    state: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    measures: MeasureSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_dev: Option<f64>,
}

fn measure(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let s = single_state(cfg);
    let rho = evolver(cfg)?.state_at(&s.rho, cfg.t)?;
    let set = measures::measure_all(&rho)?;
    let oracle_dev = match cfg.oracle_dt {
        Some(dt) => {
            let reference = oracle(cfg.profile, dt)?.state_at(&s.rho, cfg.t)?;
            Some(rho.matrix().max_abs_diff(reference.matrix()))
        }
        None => None,
    };
    if cfg.format == Some(Format::Json) {
        return Artifact::json(MeasureReport {
            t: cfg.t,
            state: s.label,
            p: s.werner.map(|w| w.p()),
            measures: set,
            oracle_dev,
        });
    }
    let mut text = String::from(MeasureSet::CSV_HEADER);
    if oracle_dev.is_some() {
        text.push_str(",oracle_dev");
    }
    text.push('\n');
    text.push_str(&set.csv_row(cfg.t));
    if let Some(d) = oracle_dev {
        text.push(',');
        text.push_str(&sig17(d));
    }
    text.push('\n');
    Ok(Artifact::text(text))
}

fn scan_cmd(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let json = cfg.format == Some(Format::Json);
    let options = ScanOptions {
        oracle_dt: cfg.oracle_dt,
        // Events only appear in the JSON form.
        event_step: json.then_some(cfg.event_step),
        ..ScanOptions::default()
    };
    let table = scan(
        &initial_states(&cfg.source),
        &evolver(cfg)?,
        cfg.tmax,
        cfg.steps,
        &options,
    )?;
    if json {
        Artifact::json(&table)
    } else {
        Ok(Artifact::text(table.to_csv()))
    }
}

fn events_csv(events: &[CrossingEvent]) -> String {
    let mut out = String::from("kind,lhs,rhs,time,bracket_lo,bracket_hi,residual\n");
    for e in events {
        let kind = serde_json::to_value(e.kind).expect("kind");
        let rhs = e.rhs.as_ref().map(|c| c.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            kind.as_str().unwrap_or_default(),
            e.lhs,
            rhs,
            sig17(e.time),
            sig17(e.bracket.0),
            sig17(e.bracket.1),
            sig17(e.residual)
        ));
    }
    out
}

fn crossings(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let states = initial_states(&cfg.source);
    let search = EventSearch::new(cfg.tmax).with_step(cfg.event_step);
    let mut events = find_events(&states, &evolver(cfg)?, &search)?;
    if let Some(m) = cfg.measure {
        events.retain(|e| e.lhs.measure == m);
    }
    if cfg.format == Some(Format::Csv) {
        return Ok(Artifact::text(events_csv(&events)));
    }
    Artifact::json(json!({
        "states": states.iter().map(|s| s.label.as_str()).collect::<Vec<_>>(),
        "profile": cfg.profile,
        "tmax": cfg.tmax,
        "events": events,
    }))
}

fn ordering(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let p = cfg.p.expect("config guarantees --p");
    let search = EventSearch::new(cfg.tmax).with_step(cfg.event_step);
    let table = ordering_table(p, cfg.profile, &search)?;
    if cfg.format != Some(Format::Csv) {
        return Artifact::json(&table);
    }
    let mut out = String::from("from,to,at,ordering\n");
    for row in &table.rows {
        let (from, to, at) = match row.span {
            Span::Interval(a, b) => (sig17(a), sig17(b), String::new()),
            Span::Instant(t) => (String::new(), String::new(), sig17(t)),
        };
        let label = row.ranking.label(werner_core::Measure::Negativity);
        out.push_str(&format!("{from},{to},{at},{label}\n"));
    }
    Ok(Artifact::text(out))
}

fn validate(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let outcomes = selfcheck::run(true, |_| {});
    let failed = outcomes.iter().find(|o| !o.passed).map(|o| {
        CliError::Validation(format!(
            "{} residual {:e} exceeds tolerance {:e}",
            o.name, o.residual, o.tolerance
        ))
    });
    let mut artifact = match cfg.format {
        Some(Format::Json) => Artifact::json(&outcomes)?,
        Some(Format::Csv) => {
            let mut out = String::from("check,passed,residual,tolerance\n");
            for o in &outcomes {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    o.name,
                    o.passed,
                    sig17(o.residual),
                    sig17(o.tolerance)
                ));
            }
            Artifact::text(out)
        }
        None => {
            let mut out = String::new();
            for o in &outcomes {
                out.push_str(&format!(
                    "{} {:<40} residual {:.3e}  tolerance {:.1e}\n",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.residual,
                    o.tolerance
                ));
            }
            let total = selfcheck::check_names().len();
            let passed = outcomes.iter().filter(|o| o.passed).count();
            out.push_str(&format!("{passed}/{total} checks passed\n"));
            Artifact::text(out)
        }
    };
    artifact.failure = failed;
    Ok(artifact)
}
