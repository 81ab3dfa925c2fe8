//! Predicted versus fitted tail exponents across direction biases.

use frag_core::engine::{Model, Scheduler, StopRule};
use frag_core::random::{DirectionLaw, NucleationLaw};
use serde::{Deserialize, Serialize};

use crate::analysis::{fit_ensemble, predicted_density_exponent, FitSummary};
use crate::config::ExperimentConfig;
use crate::ensemble::Ensemble;
use crate::error::{CliError, Result};

pub const PLANAR_P: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.43];
pub const FULL_REALIZATIONS: f64 = 50.0;
pub const FULL_FRAGMENTS: f64 = 3e5;
const MIN_REALIZATIONS: u64 = 2;
const MIN_FRAGMENTS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Case {
    pub name: String,
    pub config: ExperimentConfig,
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub case: String,
    pub dimension: u8,
    pub p: f64,
    pub predicted: f64,
    pub computed_mean: f64,
    pub computed_std: f64,
    pub realizations: u64,
    pub fragments: usize,
}

/// The five planar cases plus the unbiased cube, sized by `scale`.
pub fn table1_cases(scale: f64) -> Result<Vec<Table1Case>> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(CliError::Usage(format!("scale must lie in (0, 1], got {scale}")));
    }
    let realizations = ((FULL_REALIZATIONS * scale).round() as u64).max(MIN_REALIZATIONS);
    let fragments = ((FULL_FRAGMENTS * scale).round() as usize).max(MIN_FRAGMENTS);
    let base = |model, direction, seed| ExperimentConfig {
        model,
        direction,
        nucleation: NucleationLaw::Uniform,
        scheduler: Scheduler::LargestWidthFirst,
        stop: StopRule::FragmentCount(fragments),
        realizations,
        seed,
    };
    let mut cases: Vec<Table1Case> = PLANAR_P
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let config = base(Model::Rect2D, DirectionLaw::Planar { p }, k as u64 + 1);
            Table1Case {
                name: format!("2d-p{p}"),
                predicted: predicted_density_exponent(&config).expect("p < 1/2"),
                config,
            }
        })
        .collect();
    let config = base(Model::Cuboid3D, DirectionLaw::unbiased_3d(), PLANAR_P.len() as u64 + 1);
    cases.push(Table1Case {
        name: "3d-p1/3".into(),
        predicted: predicted_density_exponent(&config).expect("unbiased cube"),
        config,
    });
    Ok(cases)
}

pub fn run_case(case: &Table1Case, ens: &Ensemble) -> Result<Table1Row> {
    let fits = fit_ensemble(&case.config, ens)?;
    let summary = FitSummary::of(&fits, Some(case.predicted))?;
    let (dimension, p) = match case.config.direction {
        DirectionLaw::Planar { p } => (2, p),
        DirectionLaw::Spatial { weights } => (3, weights[2]),
    };
    let fragments = match case.config.stop {
        StopRule::FragmentCount(n) => n,
        _ => unreachable!("table cases stop on fragment count"),
    };
    Ok(Table1Row {
        case: case.name.clone(),
        dimension,
        p,
        predicted: case.predicted,
        computed_mean: summary.mean_exponent,
        computed_std: summary.std_exponent,
        realizations: case.config.realizations,
        fragments,
    })
}
