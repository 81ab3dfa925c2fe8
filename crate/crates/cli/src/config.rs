//! Experiment configuration files.
//!
//! A config is a TOML document with the keys below; unknown keys are
//! rejected and every error is reported with its line and column.
//!
//! ```toml
//! model = "rect2d"              # rect2d | cuboid3d | triangle2d
//! p = 0.3                       # planar models
//! # p1 = 0.3, p2 = 0.3, p3 = 0.4 for cuboid3d (must sum to 1)
//! nucleation = "uniform"        # uniform | beta (then `beta = <shape>`)
//! scheduler = "largest-width-first"
//! # dt = 0.1 for geometric-step, rate = 1.0 for constant-rate
//! stop = { fragments = 100000 } # or { time = 5.0 } or { generations = 21 }
//! realizations = 20
//! seed = 1
//! ```

use std::ops::Range;
use std::path::Path;

use frag_core::engine::{Model, RunConfig, Scheduler, StopRule};
use frag_core::random::{DirectionLaw, NucleationLaw};
use serde::Deserialize;
use toml::Spanned;

use crate::error::{CliError, Result};

pub const SCHEDULERS: &[&str] = &[
    "largest-area-first",
    "largest-width-first",
    "constant-rate",
    "discrete-generations",
    "geometric-step",
];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: Spanned<String>,
    p: Option<Spanned<f64>>,
    p1: Option<Spanned<f64>>,
    p2: Option<Spanned<f64>>,
    p3: Option<Spanned<f64>>,
    nucleation: Option<Spanned<String>>,
    beta: Option<Spanned<f64>>,
    scheduler: Spanned<String>,
    dt: Option<Spanned<f64>>,
    rate: Option<Spanned<f64>>,
    stop: Spanned<RawStop>,
    realizations: Option<Spanned<u64>>,
    seed: Option<Spanned<u64>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum RawStop {
    Fragments(usize),
    Time(f64),
    Generations(u32),
}

/// A validated experiment: one run template plus ensemble size and seed.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub model: Model,
    pub direction: DirectionLaw,
    pub nucleation: NucleationLaw,
    pub scheduler: Scheduler,
    pub stop: StopRule,
    pub realizations: u64,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Engine configuration of realization `index`.
    pub fn run_config(&self, index: u64) -> RunConfig {
        RunConfig::new(self.model, self.direction, self.scheduler, self.stop)
            .with_nucleation(self.nucleation)
            .with_seed(self.seed, index)
    }

    /// Canonical TOML text; parsing it gives back the same config.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        let model = match self.model {
            Model::Rect2D => "rect2d",
            Model::Cuboid3D => "cuboid3d",
            Model::Triangle2D => "triangle2d",
        };
        s += &format!("model = \"{model}\"\n");
        match self.direction {
            DirectionLaw::Planar { p } => s += &format!("p = {}\n", real(p)),
            DirectionLaw::Spatial { weights } => {
                for (k, w) in weights.iter().enumerate() {
                    s += &format!("p{} = {}\n", k + 1, real(*w));
                }
            }
        }
        match self.nucleation {
            NucleationLaw::Uniform => s += "nucleation = \"uniform\"\n",
            NucleationLaw::Beta { shape } => {
                s += &format!("nucleation = \"beta\"\nbeta = {}\n", real(shape))
            }
        }
        let name = scheduler_name(&self.scheduler);
        s += &format!("scheduler = \"{name}\"\n");
        match self.scheduler {
            Scheduler::ConstantRate { rate } => s += &format!("rate = {}\n", real(rate)),
            Scheduler::GeometricStep { dt } => s += &format!("dt = {}\n", real(dt)),
            _ => {}
        }
        s += &match self.stop {
            StopRule::FragmentCount(n) => format!("stop = {{ fragments = {n} }}\n"),
            StopRule::TimeThreshold(t) => format!("stop = {{ time = {} }}\n", real(t)),
            StopRule::GenerationCount(g) => format!("stop = {{ generations = {g} }}\n"),
        };
        s += &format!("realizations = {}\nseed = {}\n", self.realizations, self.seed);
        s
    }
}

pub fn scheduler_name(s: &Scheduler) -> &'static str {
    match s {
        Scheduler::LargestAreaFirst => SCHEDULERS[0],
        Scheduler::LargestWidthFirst => SCHEDULERS[1],
        Scheduler::ConstantRate { .. } => SCHEDULERS[2],
        Scheduler::DiscreteGenerations => SCHEDULERS[3],
        Scheduler::GeometricStep { .. } => SCHEDULERS[4],
    }
}

// shortest round-trip form; always a valid TOML float
fn real(x: f64) -> String {
    format!("{x:?}")
}

struct Diag<'a> {
    path: &'a str,
    text: &'a str,
}

impl Diag<'_> {
    fn at(&self, span: Range<usize>, message: impl Into<String>) -> CliError {
        let before = &self.text[..span.start.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |k| k + 1) + 1;
        CliError::Config {
            path: self.path.to_string(),
            line,
            column,
            message: message.into(),
        }
    }
}

/// Parse and validate config text; `origin` names the source in messages.
pub fn parse_config(text: &str, origin: &str) -> Result<ExperimentConfig> {
    let diag = Diag { path: origin, text };
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        diag.at(span, e.message().trim_end().to_string())
    })?;

    let model_span = raw.model.span();
    let model = match raw.model.get_ref().as_str() {
        "rect2d" => Model::Rect2D,
        "cuboid3d" => Model::Cuboid3D,
        "triangle2d" => Model::Triangle2D,
        other => {
            return Err(diag.at(
                model_span,
                format!("unknown model {other:?}; expected rect2d, cuboid3d or triangle2d"),
            ))
        }
    };

    let unexpected = |field: &Option<Spanned<f64>>, key: &str, why: &str| match field {
        Some(v) => Err(diag.at(v.span(), format!("key `{key}` is not used {why}"))),
        None => Ok(()),
    };

    let direction = match model {
        Model::Rect2D | Model::Triangle2D => {
            for (f, k) in [(&raw.p1, "p1"), (&raw.p2, "p2"), (&raw.p3, "p3")] {
                unexpected(f, k, "by planar models; use `p`")?;
            }
            let p = raw
                .p
                .as_ref()
                .ok_or_else(|| diag.at(model_span.clone(), "planar models need `p`"))?;
            let v = *p.get_ref();
            if !(0.0..=1.0).contains(&v) {
                return Err(diag.at(p.span(), format!("p must lie in [0, 1], got {v}")));
            }
            DirectionLaw::Planar { p: v }
        }
        Model::Cuboid3D => {
            unexpected(&raw.p, "p", "by cuboid3d; use `p1`, `p2`, `p3`")?;
            let mut weights = [1.0 / 3.0; 3];
            let given = [&raw.p1, &raw.p2, &raw.p3];
            let count = given.iter().filter(|g| g.is_some()).count();
            if count != 0 && count != 3 {
                return Err(diag.at(model_span, "give all of `p1`, `p2`, `p3` or none of them"));
            }
            if count == 3 {
                for (k, g) in given.iter().enumerate() {
                    let g = g.as_ref().expect("all given");
                    let v = *g.get_ref();
                    if !(v >= 0.0) {
                        return Err(diag.at(g.span(), format!("p{} must be nonnegative", k + 1)));
                    }
                    weights[k] = v;
                }
                let sum: f64 = weights.iter().sum();
                if (sum - 1.0).abs() > 1e-9 {
                    let span = raw.p1.as_ref().expect("given").span();
                    return Err(diag.at(span, format!("p1 + p2 + p3 must equal 1, got {sum}")));
                }
            }
            DirectionLaw::Spatial { weights }
        }
    };

    let nucleation = match raw.nucleation.as_ref().map(|n| (n.get_ref().as_str(), n.span())) {
        None | Some(("uniform", _)) => {
            unexpected(&raw.beta, "beta", "with uniform nucleation")?;
            NucleationLaw::Uniform
        }
        Some(("beta", span)) => {
            let b = raw
                .beta
                .as_ref()
                .ok_or_else(|| diag.at(span, "beta nucleation needs `beta`"))?;
            let shape = *b.get_ref();
            if !(shape > 0.0 && shape.is_finite()) {
                return Err(diag.at(b.span(), format!("beta must be positive, got {shape}")));
            }
            NucleationLaw::Beta { shape }
        }
        Some((other, span)) => {
            return Err(diag.at(span, format!("unknown nucleation {other:?}; expected uniform or beta")))
        }
    };

    let sched_span = raw.scheduler.span();
    let scheduler = match raw.scheduler.get_ref().as_str() {
        "largest-area-first" => Scheduler::LargestAreaFirst,
        "largest-width-first" => Scheduler::LargestWidthFirst,
        "discrete-generations" => Scheduler::DiscreteGenerations,
        "constant-rate" => {
            let r = raw
                .rate
                .as_ref()
                .ok_or_else(|| diag.at(sched_span.clone(), "constant-rate needs `rate`"))?;
            let rate = *r.get_ref();
            if !(rate > 0.0 && rate.is_finite()) {
                return Err(diag.at(r.span(), format!("rate must be positive, got {rate}")));
            }
            Scheduler::ConstantRate { rate }
        }
        "geometric-step" => {
            let d = raw
                .dt
                .as_ref()
                .ok_or_else(|| diag.at(sched_span.clone(), "geometric-step needs `dt`"))?;
            let dt = *d.get_ref();
            if !(dt > 0.0 && dt <= 1.0) {
                return Err(diag.at(d.span(), format!("dt must lie in (0, 1], got {dt}")));
            }
            Scheduler::GeometricStep { dt }
        }
        other => {
            return Err(diag.at(
                sched_span,
                format!("unknown scheduler {other:?}; expected one of {}", SCHEDULERS.join(", ")),
            ))
        }
    };
    if !matches!(scheduler, Scheduler::ConstantRate { .. }) {
        unexpected(&raw.rate, "rate", "by this scheduler")?;
    }
    if !matches!(scheduler, Scheduler::GeometricStep { .. }) {
        unexpected(&raw.dt, "dt", "by this scheduler")?;
    }
    let stop_span = raw.stop.span();
    let stop = match raw.stop.into_inner() {
        RawStop::Fragments(n) => StopRule::FragmentCount(n),
        RawStop::Time(t) if t > 0.0 && t.is_finite() => StopRule::TimeThreshold(t),
        RawStop::Time(t) => return Err(diag.at(stop_span, format!("stop time must be positive, got {t}"))),
        RawStop::Generations(g) => StopRule::GenerationCount(g),
    };

    let realizations = match raw.realizations {
        Some(r) if *r.get_ref() == 0 => return Err(diag.at(r.span(), "realizations must be at least 1")),
        Some(r) => r.into_inner(),
        None => 1,
    };

    let cfg = ExperimentConfig {
        model,
        direction,
        nucleation,
        scheduler,
        stop,
        realizations,
        seed: raw.seed.map_or(0, Spanned::into_inner),
    };
    cfg.run_config(0)
        .validate()
        .map_err(|e| diag.at(0..0, e.to_string()))?;
    Ok(cfg)
}

/// Load a config file, or the config recorded in a run manifest
/// (`*.json`).
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::MissingArtifact(path.to_path_buf()),
        _ => CliError::io(path)(e),
    })?;
    let origin = path.display().to_string();
    if path.extension().is_some_and(|e| e == "json") {
        let manifest: crate::manifest::Manifest = serde_json::from_str(&text)
            .map_err(|e| CliError::malformed(path, e.to_string()))?;
        return parse_config(&manifest.config, &format!("{origin} (embedded config)"));
    }
    parse_config(&text, &origin)
}
