//! Versioned CSV artifacts.
//!
//! Every file starts with a `# schema: <name>/v<k>` line followed by a
//! header row. Reals are written with 17 significant digits so that they
//! read back bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use frag_core::engine::{FragmentationRun, Fragments};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const INTERFACES_SCHEMA: &str = "interfaces/v1";
pub const FRAGMENTS_SCHEMA: &str = "fragments/v1";
pub const HISTOGRAM_SCHEMA: &str = "histogram/v1";
pub const CURVE_SCHEMA: &str = "curve/v1";
pub const TABLE_SCHEMA: &str = "table1/v1";

pub const INTERFACES_HEADER: &[&str] = &["realization", "seq", "orientation", "size", "birth_time"];
pub const FRAGMENTS_2D_HEADER: &[&str] = &["realization", "a", "b", "birth_time", "generation"];
pub const FRAGMENTS_3D_HEADER: &[&str] = &["realization", "a", "b", "c", "birth_time", "generation"];
pub const HISTOGRAM_HEADER: &[&str] = &["x_lo", "y_lo", "value"];
pub const TABLE_HEADER: &[&str] = &[
    "case",
    "dimension",
    "p",
    "predicted",
    "computed_mean",
    "computed_std",
    "realizations",
    "fragments",
];

/// Real number with 17 significant digits.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))
}

/// CSV writer that emits the schema line and header on creation.
pub struct CsvOut {
    path: PathBuf,
    inner: csv::Writer<BufWriter<File>>,
    rows: u64,
}

impl CsvOut {
    pub fn create(path: &Path, schema: &str, header: &[&str]) -> Result<Self> {
        Self::with_comments(path, schema, &[], header)
    }

    /// Like [`CsvOut::create`], with extra `# ` comment lines after the
    /// schema line.
    pub fn with_comments(path: &Path, schema: &str, comments: &[String], header: &[&str]) -> Result<Self> {
        let file = File::create(path).map_err(CliError::io(path))?;
        let mut buf = BufWriter::new(file);
        writeln!(buf, "# schema: {schema}").map_err(CliError::io(path))?;
        for c in comments {
            writeln!(buf, "# {c}").map_err(CliError::io(path))?;
        }
        let mut inner = csv::WriterBuilder::new().from_writer(buf);
        inner.write_record(header).map_err(|e| csv_error(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            inner,
            rows: 0,
        })
    }

    pub fn row<I, T>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.rows += 1;
        self.inner.write_record(fields).map_err(|e| csv_error(&self.path, e))
    }

    /// Flush and return the number of data rows written.
    pub fn finish(mut self) -> Result<u64> {
        self.inner.flush().map_err(CliError::io(&self.path))?;
        Ok(self.rows)
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => CliError::malformed(path, format!("{other:?}")),
    }
}

/// Open an artifact, check its schema line and return a reader positioned
/// at the header.
pub fn open_csv(path: &Path, schema: &str) -> Result<csv::Reader<BufReader<File>>> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::MissingArtifact(path.to_path_buf()),
        _ => CliError::io(path)(e),
    })?;
    let mut buf = BufReader::new(file);
    let mut first = String::new();
    buf.read_line(&mut first).map_err(CliError::io(path))?;
    let want = format!("# schema: {schema}");
    if first.trim_end() != want {
        return Err(CliError::malformed(
            path,
            format!("expected {want:?}, found {:?}", first.trim_end()),
        ));
    }
    Ok(csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(buf))
}

pub fn parse_field<T: std::str::FromStr>(path: &Path, rec: &csv::StringRecord, k: usize) -> Result<T> {
    let s = rec
        .get(k)
        .ok_or_else(|| CliError::malformed(path, format!("row {:?} has no column {k}", rec.position().map(|p| p.line()))))?;
    s.parse()
        .map_err(|_| CliError::malformed(path, format!("cannot parse {s:?} in column {k}")))
}

pub fn next_record(path: &Path, reader: &mut csv::Reader<BufReader<File>>, rec: &mut csv::StringRecord) -> Result<bool> {
    reader.read_record(rec).map_err(|e| csv_error(path, e))
}

/// Lowercase hex SHA-256 of a file.
pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = File::open(path).map_err(CliError::io(path))?;
    let mut hasher = Sha256::new();
    let mut chunk = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut chunk).map_err(CliError::io(path))?;
        if n == 0 {
            break;
        }
        hasher.update(&chunk[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

pub fn sha256_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_interfaces(out: &mut CsvOut, realization: u64, run: &FragmentationRun) -> Result<()> {
    let r = realization.to_string();
    for (seq, i) in run.interfaces.iter().enumerate() {
        out.row([
            r.as_str(),
            &seq.to_string(),
            i.orientation.as_str(),
            &real(i.size),
            &real(i.birth_time),
        ])?;
    }
    Ok(())
}

pub fn fragments_header(pop: &Fragments) -> &'static [&'static str] {
    match pop {
        Fragments::Cuboid(_) => FRAGMENTS_3D_HEADER,
        _ => FRAGMENTS_2D_HEADER,
    }
}

pub fn write_fragments(out: &mut CsvOut, realization: u64, pop: &Fragments) -> Result<()> {
    let r = realization.to_string();
    match pop {
        Fragments::Rect(v) => v.iter().try_for_each(|f| {
            out.row([r.clone(), real(f.a), real(f.b), real(f.birth_time), f.generation.to_string()])
        }),
        Fragments::Triangle(v) => v.iter().try_for_each(|f| {
            out.row([r.clone(), real(f.a), real(f.b), real(f.birth_time), f.generation.to_string()])
        }),
        Fragments::Cuboid(v) => v.iter().try_for_each(|f| {
            out.row([
                r.clone(),
                real(f.a),
                real(f.b),
                real(f.c),
                real(f.birth_time),
                f.generation.to_string(),
            ])
        }),
    }
}
