//! Turns parsed flags into a checked [`RunConfig`].

use std::path::PathBuf;
use std::{env, fs};

use serde_json::{json, Value};
use werner_core::analysis::{Route, DEFAULT_EVENT_STEP};
use werner_core::dynamics::DEFAULT_DT;
use werner_core::{tolerance, DampingProfile, DensityMatrix, Family, Measure, WernerSpec};

use crate::args::{Command, Format, Options};
use crate::error::CliError;

/// Where the initial state(s) come from.
#[derive(Debug, Clone)]
pub enum StateSource {
    None,
    Families(Vec<WernerSpec>),
    File { path: PathBuf, rho: DensityMatrix },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub source: StateSource,
    /// Mixing parameter for `ordering`, which always uses all three families.
    pub p: Option<f64>,
    pub profile: DampingProfile,
    pub route: Route,
    /// Integrator step used by `--both`.
    pub oracle_dt: Option<f64>,
    pub t: f64,
    pub tmax: f64,
    pub steps: usize,
    pub event_step: f64,
    pub measure: Option<Measure>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub echo_config: bool,
}

fn finite_nonneg(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(format!(
            "--{name} = {v} must be finite and non-negative"
        )))
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(format!("--{name} = {v} must be positive")))
    }
}

/// Applies `WERNER_TOL` when set.
pub fn apply_env_tolerance() -> Result<(), CliError> {
    let Ok(raw) = env::var("WERNER_TOL") else {
        return Ok(());
    };
    let tol: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("WERNER_TOL = {raw:?} is not a number")))?;
    if !tolerance::set_validation(tol) {
        return Err(CliError::config(format!(
            "WERNER_TOL = {tol} must be positive"
        )));
    }
    Ok(())
}

fn state_source(o: &Options) -> Result<StateSource, CliError> {
    let families = !o.state.is_empty();
    if families && o.state_file.is_some() {
        return Err(CliError::config(
            "--state and --state-file are mutually exclusive",
        ));
    }
    if let Some(path) = &o.state_file {
        if o.p.is_some() {
            return Err(CliError::config("--p applies to --state, not --state-file"));
        }
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let rho = DensityMatrix::from_json(&text)?;
        return Ok(StateSource::File {
            path: path.clone(),
            rho,
        });
    }
    if !families {
        return Ok(StateSource::None);
    }
    let p = o.p.ok_or_else(|| CliError::config("--state needs --p"))?;
    let mut specs = Vec::new();
    for label in &o.state {
        let family: Family = label.parse()?;
        if specs.iter().any(|s: &WernerSpec| s.family() == family) {
            return Err(CliError::config(format!("--state lists {family} twice")));
        }
        specs.push(WernerSpec::new(family, p)?);
    }
    Ok(StateSource::Families(specs))
}

impl RunConfig {
    pub fn from_options(command: Command, o: &Options) -> Result<Self, CliError> {
        let source = state_source(o)?;
        let state_count = match &source {
            StateSource::None => 0,
            StateSource::Families(v) => v.len(),
            StateSource::File { .. } => 1,
        };
        match command {
            Command::Evolve | Command::Measure if state_count != 1 => {
                return Err(CliError::config(format!(
                    "{} needs exactly one state (--state F --p P, or --state-file)",
                    command.name()
                )));
            }
            Command::Scan | Command::Crossings if state_count == 0 => {
                return Err(CliError::config(format!(
                    "{} needs --state (with --p) or --state-file",
                    command.name()
                )));
            }
            Command::Ordering if state_count != 0 => {
                return Err(CliError::config(
                    "ordering always compares X, Y and Z; pass only --p",
                ));
            }
            Command::Validate if state_count != 0 || o.p.is_some() => {
                return Err(CliError::config("validate takes no state"));
            }
            _ => {}
        }
        let p = match command {
            Command::Ordering => {
                let p = o.p.ok_or_else(|| CliError::config("ordering needs --p"))?;
                WernerSpec::new(Family::X, p)?;
                Some(p)
            }
            _ => None,
        };

        let profile = DampingProfile::new(o.gamma1, o.gamma2, o.nbar1, o.nbar2)?;
        if o.oracle && o.both {
            return Err(CliError::config(
                "--both already runs the oracle; drop --oracle",
            ));
        }
        if o.both && !profile.is_quiet() {
            return Err(CliError::config(
                "--both compares against the exact channel, which needs nbar1 = nbar2 = 0",
            ));
        }
        if o.both && !matches!(command, Command::Evolve | Command::Measure | Command::Scan) {
            return Err(CliError::config(format!(
                "--both does not apply to {}",
                command.name()
            )));
        }
        if o.oracle && command == Command::Ordering {
            return Err(CliError::config(
                "ordering uses the exact channel; drop --oracle",
            ));
        }
        let dt = o.dt.map(|dt| positive("dt", dt)).transpose()?;
        if dt.is_some() && profile.is_quiet() && !o.oracle && !o.both {
            return Err(CliError::config(
                "--dt only applies to the integrator (nbar > 0, --oracle or --both)",
            ));
        }
        let route = Route::for_profile(&profile, o.oracle, dt);
        let oracle_dt = o.both.then(|| dt.unwrap_or(DEFAULT_DT));

        let t = match o.t {
            Some(t) if matches!(command, Command::Evolve | Command::Measure) => {
                finite_nonneg("t", t)?
            }
            Some(_) => {
                return Err(CliError::config(format!(
                    "--t applies to evolve and measure; {} uses --tmax",
                    command.name()
                )))
            }
            None => 0.0,
        };
        let tmax = positive("tmax", o.tmax)?;
        let event_step = positive("event-step", o.event_step.unwrap_or(DEFAULT_EVENT_STEP))?;

        let measure = match &o.measure {
            None => None,
            Some(_) if command != Command::Crossings => {
                return Err(CliError::config("--measure applies to crossings only"));
            }
            Some(s) => {
                let m: Measure = s.parse().map_err(CliError::Config)?;
                if !matches!(m, Measure::Biv | Measure::Concurrence | Measure::Negativity) {
                    return Err(CliError::config("events are tracked for b, c and n only"));
                }
                Some(m)
            }
        };
        if command == Command::Evolve && o.format == Some(Format::Csv) {
            return Err(CliError::config("evolve emits JSON only"));
        }

        Ok(Self {
            command,
            source,
            p,
            profile,
            route,
            oracle_dt,
            t,
            tmax,
            steps: o.steps,
            event_step,
            measure,
            format: o.format,
            output: o.output.clone(),
            echo_config: o.echo_config,
        })
    }

    /// Resolved settings, for the optional reproducibility header. Paths
    /// are echoed as given.
    pub fn echo(&self) -> Value {
        let state = match &self.source {
            StateSource::None => Value::Null,
            StateSource::Families(specs) => json!(specs
                .iter()
                .map(|s| json!({"family": s.family(), "p": s.p()}))
                .collect::<Vec<_>>()),
            StateSource::File { path, .. } => json!({"file": path.display().to_string()}),
        };
        let mut v = json!({
            "command": self.command.name(),
            "state": state,
            "profile": self.profile,
            "route": self.route,
            "tolerance": tolerance::validation(),
        });
        let obj = v.as_object_mut().expect("object");
        if let Some(p) = self.p {
            obj.insert("p".into(), json!(p));
        }
        if let Some(dt) = self.oracle_dt {
            obj.insert("oracle_dt".into(), json!(dt));
        }
        match self.command {
            Command::Evolve | Command::Measure => {
                obj.insert("t".into(), json!(self.t));
            }
            Command::Scan => {
                obj.insert("tmax".into(), json!(self.tmax));
                obj.insert("steps".into(), json!(self.steps));
            }
            Command::Crossings | Command::Ordering => {
                obj.insert("tmax".into(), json!(self.tmax));
                obj.insert("event_step".into(), json!(self.event_step));
            }
            Command::Validate => {}
        }
        if let Some(m) = self.measure {
            obj.insert("measure".into(), json!(m));
        }
        v
    }
}
