//! One CSV row per sweep cell.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use qpl_core::haar::NoiseFamily;
use serde::{Deserialize, Serialize};

use crate::config::Ensemble;
use crate::error::{CliError, Result};

pub const HEADER: [&str; 12] = [
    "ensemble",
    "noise_family",
    "n",
    "k",
    "d",
    "p",
    "quantity",
    "value",
    "stderr",
    "samples",
    "master_seed",
    "code_version",
];

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

const VALUE_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// Coherent information per logical qubit.
    #[serde(rename = "Ic_per_k")]
    IcPerK,
    /// Log-average purity per logical qubit.
    #[serde(rename = "Ip_per_k")]
    IpPerK,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::IcPerK => "Ic_per_k",
            Quantity::IpPerK => "Ip_per_k",
        }
    }

    pub fn for_ensemble(e: Ensemble) -> Self {
        match e {
            Ensemble::Clifford2d => Quantity::IcPerK,
            Ensemble::HaarAllToAll => Quantity::IpPerK,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Ic_per_k" => Ok(Quantity::IcPerK),
            "Ip_per_k" => Ok(Quantity::IpPerK),
            _ => Err(format!("unknown quantity '{s}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub ensemble: Ensemble,
    pub noise_family: NoiseFamily,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub p: f64,
    pub quantity: Quantity,
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub master_seed: u64,
    pub code_version: String,
}

/// Identity of a record for de-duplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RecordKey {
    pub ensemble: Ensemble,
    pub noise_family: NoiseFamily,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub p_bits: u64,
    pub master_seed: u64,
}

impl ResultRecord {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            ensemble: self.ensemble,
            noise_family: self.noise_family,
            n: self.n,
            k: self.k,
            d: self.d,
            p_bits: self.p.to_bits(),
            master_seed: self.master_seed,
        }
    }

    pub fn check(&self) -> Result<(), String> {
        if !self.value.is_finite() || self.value.abs() > 1.0 + VALUE_SLACK {
            return Err(format!("value {} outside [-1, 1]", self.value));
        }
        if !self.stderr.is_finite() || self.stderr < 0.0 {
            return Err(format!("stderr {} is not a non-negative number", self.stderr));
        }
        if self.ensemble == Ensemble::HaarAllToAll && self.stderr != 0.0 {
            return Err(format!("haar records are exact but stderr = {}", self.stderr));
        }
        if self.quantity != Quantity::for_ensemble(self.ensemble) {
            return Err(format!("quantity {} does not belong to {}", self.quantity, self.ensemble));
        }
        if self.k == 0 || self.k > self.n {
            return Err(format!("k = {} with n = {}", self.k, self.n));
        }
        Ok(())
    }

    fn fields(&self) -> [String; 12] {
        [
            self.ensemble.to_string(),
            self.noise_family.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.d.to_string(),
            // shortest representation that parses back to the same value
            self.p.to_string(),
            self.quantity.to_string(),
            format!("{:.16e}", self.value),
            format!("{:.16e}", self.stderr),
            self.samples.to_string(),
            self.master_seed.to_string(),
            self.code_version.clone(),
        ]
    }

    fn from_fields(row: &csv::StringRecord) -> Result<Self, String> {
        if row.len() != HEADER.len() {
            return Err(format!("expected {} fields, got {}", HEADER.len(), row.len()));
        }
        fn parse<T: FromStr>(row: &csv::StringRecord, i: usize) -> Result<T, String> {
            row[i].parse().map_err(|_| format!("{}: cannot parse '{}'", HEADER[i], &row[i]))
        }
        Ok(Self {
            ensemble: parse(row, 0)?,
            noise_family: parse(row, 1)?,
            n: parse(row, 2)?,
            k: parse(row, 3)?,
            d: parse(row, 4)?,
            p: parse(row, 5)?,
            quantity: parse(row, 6)?,
            value: parse(row, 7)?,
            stderr: parse(row, 8)?,
            samples: parse(row, 9)?,
            master_seed: parse(row, 10)?,
            code_version: row[11].to_string(),
        })
    }
}

/// Output order: `(n, d, p)`.
pub fn output_order(a: &ResultRecord, b: &ResultRecord) -> Ordering {
    (a.n, a.d).cmp(&(b.n, b.d)).then(a.p.total_cmp(&b.p))
}

pub(crate) fn write_row<W: Write>(w: &mut csv::Writer<W>, r: &ResultRecord) -> csv::Result<()> {
    w.write_record(r.fields())
}

pub(crate) fn csv_writer<W: Write>(inner: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(inner)
}

/// Serializes records, header first, in the order given.
pub fn write_records<W: Write>(inner: W, records: &[ResultRecord]) -> csv::Result<()> {
    let mut w = csv_writer(inner);
    w.write_record(HEADER)?;
    for r in records {
        write_row(&mut w, r)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses records, checking the header, every record invariant and
/// uniqueness. `origin` only labels errors.
pub fn read_records<R: Read>(inner: R, origin: &Path) -> Result<Vec<ResultRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(inner);
    let header = rdr.headers().map_err(|e| CliError::records(origin, e.to_string()))?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CliError::records(
            origin,
            format!("unexpected header '{}'", header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in rdr.records().enumerate() {
        // line 1 is the header
        let line = i + 2;
        let row = row.map_err(|e| CliError::records(origin, format!("line {line}: {e}")))?;
        let rec = ResultRecord::from_fields(&row).map_err(|e| CliError::records(origin, format!("line {line}: {e}")))?;
        rec.check().map_err(|e| CliError::records(origin, format!("line {line}: {e}")))?;
        if !seen.insert(rec.key()) {
            return Err(CliError::records(origin, format!("line {line}: duplicate record")));
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn read_records_file(path: &Path) -> Result<Vec<ResultRecord>> {
    let f = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_records(std::io::BufReader::new(f), path)
}
