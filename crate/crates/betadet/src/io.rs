//! Output files. Every file starts with a [`Header`] carrying the schema
//! name and version, the seed and the full run configuration: as a
//! `# {json}` comment line in CSV, as the `header` field in JSON.

use crate::error::{CliError, CliResult};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub schema: String,
    pub schema_version: u32,
    pub rng: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
}

impl Header {
    pub fn new<C: Serialize>(schema: &str, seed: Option<u64>, config: &C) -> CliResult<Self> {
        Ok(Self {
            tool: "betadet".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema: schema.into(),
            schema_version: SCHEMA_VERSION,
            rng: betadet_core::sampler::RngStream::ALGORITHM.into(),
            seed,
            config: serde_json::to_value(config)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<R, S = ()> {
    pub header: Header,
    pub records: Vec<R>,
    #[serde(default)]
    pub summary: S,
}

pub fn open_output(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

pub fn write_csv<R: Serialize, W: Write>(mut w: W, header: &Header, rows: &[R]) -> CliResult<()> {
    writeln!(w, "# {}", serde_json::to_string(header)?)?;
    let mut cw = csv::Writer::from_writer(w);
    for r in rows {
        cw.serialize(r)?;
    }
    cw.flush()?;
    Ok(())
}

pub fn write_json<R: Serialize, S: Serialize, W: Write>(mut w: W, doc: &Document<R, S>) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Reads a CSV file written by [`write_csv`].
pub fn read_csv<R: DeserializeOwned, In: Read>(input: In) -> CliResult<(Header, Vec<R>)> {
    let mut br = BufReader::new(input);
    let mut first = String::new();
    br.read_line(&mut first)?;
    let json = first
        .strip_prefix("# ")
        .ok_or_else(|| CliError::Usage("csv file lacks the '# {header}' line".into()))?;
    let header: Header = serde_json::from_str(json.trim_end())?;
    let mut rdr = csv::Reader::from_reader(br);
    let rows = rdr.deserialize().collect::<Result<Vec<R>, _>>()?;
    Ok((header, rows))
}

pub fn read_json<R: DeserializeOwned, S: DeserializeOwned + Default, In: Read>(input: In) -> CliResult<Document<R, S>> {
    Ok(serde_json::from_reader(BufReader::new(input))?)
}
