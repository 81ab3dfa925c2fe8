//! The four subcommands, as library functions over paths.

use std::path::{Path, PathBuf};

use frag_core::engine::Model;
use frag_core::geometry::{Fragment2D, Orientation};
use frag_core::random::mix_seed;
use frag_core::stats::build_histogram;
use frag_core::theory::curves::{tabulate, Axis, Curve};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    finish_histograms, fit_sizes, guard_tail, predicted_density_exponent, reference_for, tail_orientation,
    FitRecord, FitSummary, HistogramValues, Reference,
};
use crate::config::{load_config, parse_config, ExperimentConfig};
use crate::ensemble::Ensemble;
use crate::error::{CliError, Result};
use crate::io::{
    create_dir, fragments_header, next_record, open_csv, parse_field, real, sha256_bytes, sha256_file,
    write_fragments, write_interfaces, CsvOut, CURVE_SCHEMA, FRAGMENTS_SCHEMA, HISTOGRAM_HEADER,
    HISTOGRAM_SCHEMA, INTERFACES_HEADER, INTERFACES_SCHEMA, TABLE_HEADER, TABLE_SCHEMA,
};
use crate::manifest::{read_json, write_json, Artifact, Manifest, RealizationRecord, MANIFEST_SCHEMA, TOOL, TOOL_VERSION};
use crate::table1::{run_case, table1_cases, Table1Row};

pub const INTERFACES_FILE: &str = "interfaces.csv";
pub const FRAGMENTS_FILE: &str = "fragments.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const HISTOGRAM_FILE: &str = "histogram.csv";
pub const HISTOGRAM_META_FILE: &str = "histogram.json";
pub const FIT_FILE: &str = "fit.json";
pub const CURVE_FILE: &str = "curve.csv";
pub const TABLE_FILE: &str = "table.csv";

fn artifact(dir: &Path, name: &str, rows: u64) -> Result<Artifact> {
    Ok(Artifact {
        path: name.to_string(),
        sha256: sha256_file(&dir.join(name))?,
        rows,
    })
}

/// Simulate the ensemble described by `config_path` (a config file or a
/// previous manifest) into `out`.
pub fn cmd_run(config_path: &Path, out: &Path, parallelism: usize) -> Result<Manifest> {
    let cfg = load_config(config_path)?;
    run_experiment(&cfg, out, parallelism)
}

pub fn run_experiment(cfg: &ExperimentConfig, out: &Path, parallelism: usize) -> Result<Manifest> {
    let ens = Ensemble::new(parallelism)?;
    create_dir(out)?;
    let mut interfaces = CsvOut::create(&out.join(INTERFACES_FILE), INTERFACES_SCHEMA, INTERFACES_HEADER)?;
    let header = match cfg.model {
        Model::Cuboid3D => crate::io::FRAGMENTS_3D_HEADER,
        _ => crate::io::FRAGMENTS_2D_HEADER,
    };
    let mut fragments = CsvOut::create(&out.join(FRAGMENTS_FILE), FRAGMENTS_SCHEMA, header)?;
    let mut records = Vec::with_capacity(cfg.realizations as usize);
    ens.run(cfg, |i, run| {
        debug_assert_eq!(fragments_header(&run.population), header);
        write_interfaces(&mut interfaces, i, &run)?;
        write_fragments(&mut fragments, i, &run.population)?;
        records.push(RealizationRecord {
            index: i,
            seed: mix_seed(cfg.seed, i),
            clock: run.clock,
            events: run.events,
            fragments: run.population.len() as u64,
            interfaces: run.interfaces.len() as u64,
        });
        log::info!("realization {i}: {} fragments, clock {}", run.population.len(), run.clock);
        Ok(())
    })?;
    let n_int = interfaces.finish()?;
    let n_frag = fragments.finish()?;
    let config = cfg.to_toml();
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA.into(),
        tool: TOOL.into(),
        tool_version: TOOL_VERSION.into(),
        config_sha256: sha256_bytes(config.as_bytes()),
        config,
        master_seed: cfg.seed,
        realization_count: cfg.realizations,
        realizations: records,
        artifacts: vec![
            artifact(out, INTERFACES_FILE, n_int)?,
            artifact(out, FRAGMENTS_FILE, n_frag)?,
        ],
    };
    write_json(&out.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}

/// Manifest and config of a run directory.
pub fn load_run(run_dir: &Path) -> Result<(Manifest, ExperimentConfig)> {
    let path = run_dir.join(MANIFEST_FILE);
    let manifest: Manifest = read_json(&path)?;
    if manifest.schema != MANIFEST_SCHEMA {
        return Err(CliError::malformed(&path, format!("unsupported schema {:?}", manifest.schema)));
    }
    let cfg = parse_config(&manifest.config, &format!("{} (embedded config)", path.display()))?;
    if manifest.realizations.len() as u64 != cfg.realizations {
        return Err(CliError::malformed(&path, "realization records do not match the config"));
    }
    Ok((manifest, cfg))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HistogramOptions {
    pub bin_width: f64,
    pub shift: bool,
    pub values: HistogramValues,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramMeta {
    pub schema: String,
    pub values: HistogramValues,
    pub bin_width: f64,
    pub shift: bool,
    pub realizations: usize,
    pub time_mean: f64,
    pub reference: Reference,
    pub peak_x: f64,
    pub peak_y: f64,
    pub peak_value: f64,
    /// Mean count of the peak bin before normalization.
    pub peak_count: f64,
    pub mean_fragments: f64,
}

/// Averaged, peak-normalized log-coordinate histogram of a rectangle run.
pub fn cmd_analyze_histogram(run_dir: &Path, out: &Path, opts: HistogramOptions) -> Result<HistogramMeta> {
    let (manifest, cfg) = load_run(run_dir)?;
    if cfg.model != Model::Rect2D {
        return Err(CliError::Refused("histogram mode needs a rect2d run".into()));
    }
    if !(opts.bin_width > 0.0 && opts.bin_width.is_finite()) {
        return Err(CliError::Usage(format!("bin width must be positive, got {}", opts.bin_width)));
    }
    let path = run_dir.join(FRAGMENTS_FILE);
    let mut reader = open_csv(&path, FRAGMENTS_SCHEMA)?;
    let headers = reader.headers().map_err(|e| CliError::malformed(&path, e.to_string()))?.clone();
    if headers != *crate::io::FRAGMENTS_2D_HEADER {
        return Err(CliError::malformed(&path, format!("unexpected header {headers:?}")));
    }
    let mut hists = Vec::with_capacity(manifest.realizations.len());
    let mut rec = csv::StringRecord::new();
    let mut current: Vec<Fragment2D> = Vec::new();
    let mut pending = next_record(&path, &mut reader, &mut rec)?;
    for r in &manifest.realizations {
        current.clear();
        while pending && parse_field::<u64>(&path, &rec, 0)? == r.index {
            current.push(Fragment2D::new(parse_field(&path, &rec, 1)?, parse_field(&path, &rec, 2)?));
            pending = next_record(&path, &mut reader, &mut rec)?;
        }
        if current.len() as u64 != r.fragments {
            return Err(CliError::malformed(
                &path,
                format!("realization {} has {} rows, manifest says {}", r.index, current.len(), r.fragments),
            ));
        }
        hists.push(build_histogram(&current, r.clock, opts.bin_width)?);
    }
    if pending {
        return Err(CliError::malformed(&path, "rows beyond the manifest's realizations"));
    }
    let time_mean = manifest.realizations.iter().map(|r| r.clock).sum::<f64>() / hists.len() as f64;
    let reference = reference_for(&cfg);
    let res = finish_histograms(&hists, time_mean, opts.values, reference, opts.shift)?;

    create_dir(out)?;
    let mut w = CsvOut::with_comments(
        &out.join(HISTOGRAM_FILE),
        HISTOGRAM_SCHEMA,
        &[format!("bin_width: {}", real(opts.bin_width))],
        HISTOGRAM_HEADER,
    )?;
    for b in res.values.bins() {
        w.row([real(b.x_lo), real(b.y_lo), real(b.value)])?;
    }
    w.finish()?;
    let top = res.values.argmax().expect("nonempty");
    let (peak_x, peak_y) = top.center(opts.bin_width);
    let meta = HistogramMeta {
        schema: "histogram-meta/v1".into(),
        values: opts.values,
        bin_width: opts.bin_width,
        shift: opts.shift,
        realizations: res.realizations,
        time_mean,
        reference,
        peak_x,
        peak_y,
        peak_value: top.value,
        peak_count: res.counts.get(top.i, top.j),
        mean_fragments: res.counts.n_total,
    };
    write_json(&out.join(HISTOGRAM_META_FILE), &meta)?;
    Ok(meta)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema: String,
    pub orientation: String,
    pub fits: Vec<FitRecord>,
    pub summary: FitSummary,
}

/// Per-realization power-law fits of the tail interface sizes.
pub fn cmd_analyze_powerlaw(run_dir: &Path, out: &Path, parallelism: usize) -> Result<FitReport> {
    let (manifest, cfg) = load_run(run_dir)?;
    guard_tail(&cfg)?;
    let orientation = tail_orientation(cfg.model);
    let sizes = read_interface_sizes(&run_dir.join(INTERFACES_FILE), &manifest, orientation)?;
    let ens = Ensemble::new(parallelism)?;
    let fits = ens.map(sizes.len() as u64, |k| fit_sizes(manifest.realizations[k as usize].index, &sizes[k as usize]))?;
    let report = FitReport {
        schema: "fit/v1".into(),
        orientation: orientation.as_str().into(),
        summary: FitSummary::of(&fits, predicted_density_exponent(&cfg))?,
        fits,
    };
    create_dir(out)?;
    write_json(&out.join(FIT_FILE), &report)?;
    Ok(report)
}

fn read_interface_sizes(path: &Path, manifest: &Manifest, orientation: Orientation) -> Result<Vec<Vec<f64>>> {
    let mut reader = open_csv(path, INTERFACES_SCHEMA)?;
    let headers = reader.headers().map_err(|e| CliError::malformed(path, e.to_string()))?.clone();
    if headers != *INTERFACES_HEADER {
        return Err(CliError::malformed(path, format!("unexpected header {headers:?}")));
    }
    let mut out = Vec::with_capacity(manifest.realizations.len());
    let mut rec = csv::StringRecord::new();
    let mut pending = next_record(path, &mut reader, &mut rec)?;
    for r in &manifest.realizations {
        let mut sizes = Vec::new();
        let mut rows = 0u64;
        while pending && parse_field::<u64>(path, &rec, 0)? == r.index {
            rows += 1;
            let o: Orientation = parse_field(path, &rec, 2)?;
            if o == orientation {
                sizes.push(parse_field(path, &rec, 3)?);
            }
            pending = next_record(path, &mut reader, &mut rec)?;
        }
        if rows != r.interfaces {
            return Err(CliError::malformed(
                path,
                format!("realization {} has {rows} rows, manifest says {}", r.index, r.interfaces),
            ));
        }
        out.push(sizes);
    }
    if pending {
        return Err(CliError::malformed(path, "rows beyond the manifest's realizations"));
    }
    Ok(out)
}

/// Tabulate a named theory function; `grids` maps each variable to its axis.
pub fn cmd_theory(function: &str, params: &[(String, f64)], grids: &[(String, Axis)], out: &Path) -> Result<PathBuf> {
    let curve = Curve::from_name(function, |k| params.iter().find(|(n, _)| n == k).map(|(_, v)| *v))?;
    let vars = curve.variables();
    for (name, _) in grids {
        if !vars.contains(&name.as_str()) {
            return Err(CliError::Usage(format!("{function} has no variable {name}; variables: {}", vars.join(", "))));
        }
    }
    let axes = vars
        .iter()
        .map(|v| {
            grids
                .iter()
                .find(|(n, _)| n == v)
                .map(|(_, a)| *a)
                .ok_or_else(|| CliError::Usage(format!("missing --grid for variable {v}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let points = tabulate(&curve, &axes)?;
    create_dir(out)?;
    let path = out.join(CURVE_FILE);
    let mut header: Vec<&str> = vars.to_vec();
    header.push("value");
    let described: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut w = CsvOut::with_comments(
        &path,
        CURVE_SCHEMA,
        &[format!("function: {function}"), format!("params: {}", described.join(" "))],
        &header,
    )?;
    for pt in points {
        let mut row: Vec<String> = pt.coords.iter().map(|x| real(*x)).collect();
        row.push(pt.value.map_or(String::new(), |v| real(v.to_f64())));
        w.row(row)?;
    }
    w.finish()?;
    Ok(path)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Manifest {
    pub schema: String,
    pub tool: String,
    pub tool_version: String,
    pub scale: f64,
    pub cases: Vec<Table1CaseRecord>,
    pub artifacts: Vec<Artifact>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1CaseRecord {
    pub case: String,
    pub config: String,
    pub config_sha256: String,
}

pub fn cmd_reproduce_table1(out: &Path, scale: f64, parallelism: usize) -> Result<Vec<Table1Row>> {
    let cases = table1_cases(scale)?;
    let ens = Ensemble::new(parallelism)?;
    create_dir(out)?;
    let mut rows = Vec::with_capacity(cases.len());
    for case in &cases {
        log::info!("table case {}", case.name);
        rows.push(run_case(case, &ens)?);
    }
    let mut w = CsvOut::create(&out.join(TABLE_FILE), TABLE_SCHEMA, TABLE_HEADER)?;
    for r in &rows {
        w.row([
            r.case.clone(),
            r.dimension.to_string(),
            real(r.p),
            real(r.predicted),
            real(r.computed_mean),
            real(r.computed_std),
            r.realizations.to_string(),
            r.fragments.to_string(),
        ])?;
    }
    let n = w.finish()?;
    let manifest = Table1Manifest {
        schema: "table1-manifest/v1".into(),
        tool: TOOL.into(),
        tool_version: TOOL_VERSION.into(),
        scale,
        cases: cases
            .iter()
            .map(|c| {
                let config = c.config.to_toml();
                Table1CaseRecord {
                    case: c.name.clone(),
                    config_sha256: sha256_bytes(config.as_bytes()),
                    config,
                }
            })
            .collect(),
        artifacts: vec![artifact(out, TABLE_FILE, n)?],
    };
    write_json(&out.join(MANIFEST_FILE), &manifest)?;
    Ok(rows)
}
