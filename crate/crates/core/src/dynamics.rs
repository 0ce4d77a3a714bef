//! Per-sample, per-epoch prediction logs and their on-disk formats.
//!
//! A [`DynamicsLog`] is a dense `n × t_max` grid of [`EpochRecord`]s. Two
//! serializations are supported:
//!
//! * `DYNL v1` binary, little-endian, columnar (see [`write_binary`]).
//! * CSV with header `sample_id,epoch,p_target,p_runner_up,el2n,entropy,correct`.
//!
//! Epochs are 1-indexed everywhere in the public API.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Slack allowed on probability bounds.
pub const PROB_SLACK: f32 = 1e-6;

pub const MAGIC: [u8; 4] = *b"DYNL";
pub const VERSION: u16 = 1;
/// Bytes before the first column: magic, version, flags, n, t_max.
pub const HEADER_LEN: usize = 4 + 2 + 1 + 8 + 8;

const FLAG_LABELS: u8 = 0b01;
const FLAG_NOISE: u8 = 0b10;

pub const CSV_HEADER: [&str; 7] = [
    "sample_id",
    "epoch",
    "p_target",
    "p_runner_up",
    "el2n",
    "entropy",
    "correct",
];

/// Summary of one sample's prediction at one epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    /// Probability assigned to the (observed) label.
    pub p_target: f32,
    /// Largest probability among the other classes.
    pub p_runner_up: f32,
    /// L2 norm of `softmax - onehot(label)`.
    pub el2n: f32,
    /// Entropy of the full prediction vector, in nats.
    pub entropy: f32,
    /// Whether the argmax prediction equals the label.
    pub correct: bool,
}

impl EpochRecord {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |p: f32| p.is_finite() && (-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p);
        if !in_unit(self.p_target) || !in_unit(self.p_runner_up) {
            return Err(Error::Validation(format!(
                "probabilities out of [0, 1]: p_target={}, p_runner_up={}",
                self.p_target, self.p_runner_up
            )));
        }
        if self.p_target as f64 + self.p_runner_up as f64 > 1.0 + PROB_SLACK as f64 {
            return Err(Error::Validation(format!(
                "p_target + p_runner_up exceeds 1: {} + {}",
                self.p_target, self.p_runner_up
            )));
        }
        if !(self.el2n.is_finite() && self.el2n >= 0.0) {
            return Err(Error::Validation(format!(
                "el2n must be non-negative, got {}",
                self.el2n
            )));
        }
        if !(self.entropy.is_finite() && self.entropy >= 0.0) {
            return Err(Error::Validation(format!(
                "entropy must be non-negative, got {}",
                self.entropy
            )));
        }
        Ok(())
    }
}

/// Dense training-dynamics log. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsLog {
    n: usize,
    t_max: usize,
    // sample-major: records[i * t_max + (epoch - 1)]
    records: Vec<EpochRecord>,
    labels: Option<Vec<u32>>,
    noise_flags: Option<Vec<bool>>,
}

impl DynamicsLog {
    /// Builds a log from sample-major records (`records[i * t_max + e]`, `e` 0-based).
    pub fn new(
        n: usize,
        t_max: usize,
        records: Vec<EpochRecord>,
        labels: Option<Vec<u32>>,
        noise_flags: Option<Vec<bool>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation(
                "log must contain at least one sample".into(),
            ));
        }
        if t_max == 0 {
            return Err(Error::Validation(
                "log must contain at least one epoch".into(),
            ));
        }
        let cells = n
            .checked_mul(t_max)
            .ok_or_else(|| Error::Validation("n * t_max overflows".into()))?;
        if records.len() != cells {
            return Err(Error::IncompleteLog(format!(
                "expected {cells} records for {n} samples x {t_max} epochs, got {}",
                records.len()
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::Validation(format!(
                    "labels has length {}, expected {n}",
                    labels.len()
                )));
            }
        }
        if let Some(flags) = &noise_flags {
            if flags.len() != n {
                return Err(Error::Validation(format!(
                    "noise_flags has length {}, expected {n}",
                    flags.len()
                )));
            }
        }
        for (idx, rec) in records.iter().enumerate() {
            rec.validate().map_err(|e| match e {
                Error::Validation(msg) => Error::Validation(format!(
                    "sample {} epoch {}: {msg}",
                    idx / t_max,
                    idx % t_max + 1
                )),
                other => other,
            })?;
        }
        Ok(Self {
            n,
            t_max,
            records,
            labels,
            noise_flags,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// Record of `sample` at 1-indexed `epoch`.
    pub fn record(&self, sample: usize, epoch: usize) -> &EpochRecord {
        assert!(
            epoch >= 1 && epoch <= self.t_max,
            "epoch {epoch} out of 1..={}",
            self.t_max
        );
        &self.records[sample * self.t_max + epoch - 1]
    }

    /// All epochs of one sample, in epoch order.
    pub fn sample(&self, sample: usize) -> &[EpochRecord] {
        &self.records[sample * self.t_max..(sample + 1) * self.t_max]
    }

    pub fn records(&self) -> &[EpochRecord] {
        &self.records
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    /// Injected-noise ground truth. Evaluation only; no score reads it.
    pub fn noise_flags(&self) -> Option<&[bool]> {
        self.noise_flags.as_deref()
    }

    /// `p_target` of one sample over epochs `1..=t`, widened to f64.
    pub fn p_target_series(&self, sample: usize, t: usize) -> Vec<f64> {
        self.sample(sample)[..t]
            .iter()
            .map(|r| r.p_target as f64)
            .collect()
    }

    /// Copy restricted to epochs `1..=t`.
    pub fn slice_epochs(&self, t: usize) -> Result<DynamicsLog> {
        if t == 0 || t > self.t_max {
            return Err(Error::Range(format!(
                "epoch slice {t} outside 1..={}",
                self.t_max
            )));
        }
        let records = (0..self.n)
            .flat_map(|i| self.sample(i)[..t].iter().copied())
            .collect();
        Ok(DynamicsLog {
            n: self.n,
            t_max: t,
            records,
            labels: self.labels.clone(),
            noise_flags: self.noise_flags.clone(),
        })
    }
}

/// On-disk representation of a [`DynamicsLog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogFormat {
    Binary,
    Csv,
}

impl LogFormat {
    /// `.csv` means CSV; anything else is treated as binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => LogFormat::Csv,
            _ => LogFormat::Binary,
        }
    }
}

impl FromStr for LogFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "binary" | "bin" | "dynl" => Ok(LogFormat::Binary),
            "csv" => Ok(LogFormat::Csv),
            other => Err(Error::Validation(format!("unknown log format '{other}'"))),
        }
    }
}

pub fn read_log(path: impl AsRef<Path>, format: LogFormat) -> Result<DynamicsLog> {
    let file = File::open(path.as_ref())?;
    let mut reader = BufReader::new(file);
    match format {
        LogFormat::Binary => read_binary(&mut reader),
        LogFormat::Csv => read_csv(reader),
    }
}

pub fn write_log(log: &DynamicsLog, path: impl AsRef<Path>, format: LogFormat) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut writer = BufWriter::new(file);
    match format {
        LogFormat::Binary => write_binary(log, &mut writer)?,
        LogFormat::Csv => write_csv(log, &mut writer)?,
    }
    writer.flush()?;
    Ok(())
}

/// Exact size in bytes of the binary encoding.
pub fn binary_size(n: usize, t_max: usize, labels: bool, noise_flags: bool) -> usize {
    let cells = n * t_max;
    HEADER_LEN
        + 4 * 4 * cells
        + cells.div_ceil(8)
        + if labels { 4 * n } else { 0 }
        + if noise_flags { n.div_ceil(8) } else { 0 }
}

fn pack_bits(bits: impl ExactSizeIterator<Item = bool>) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, b) in bits.enumerate() {
        if b {
            out[i / 8] |= 1 << (i % 8);
        }
    }
    out
}

fn unpack_bits(bytes: &[u8], len: usize) -> Vec<bool> {
    (0..len)
        .map(|i| bytes[i / 8] & (1 << (i % 8)) != 0)
        .collect()
}

/// Writes `DYNL v1`. Columns are epoch-major (column-major over the
/// `n × t_max` grid): element `(i, e)` sits at position `(e - 1) * n + i`.
pub fn write_binary<W: Write>(log: &DynamicsLog, w: &mut W) -> Result<()> {
    let mut flags = 0u8;
    if log.labels.is_some() {
        flags |= FLAG_LABELS;
    }
    if log.noise_flags.is_some() {
        flags |= FLAG_NOISE;
    }
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[flags])?;
    w.write_all(&(log.n as u64).to_le_bytes())?;
    w.write_all(&(log.t_max as u64).to_le_bytes())?;

    let column_order =
        || (0..log.t_max).flat_map(move |e| (0..log.n).map(move |i| log.record(i, e + 1)));
    let fields: [fn(&EpochRecord) -> f32; 4] =
        [|r| r.p_target, |r| r.p_runner_up, |r| r.el2n, |r| r.entropy];
    for field in fields {
        let mut buf = Vec::with_capacity(4 * log.n * log.t_max);
        for rec in column_order() {
            buf.extend_from_slice(&field(rec).to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    let correct: Vec<bool> = column_order().map(|r| r.correct).collect();
    w.write_all(&pack_bits(correct.into_iter()))?;

    if let Some(labels) = &log.labels {
        let mut buf = Vec::with_capacity(4 * labels.len());
        for l in labels {
            buf.extend_from_slice(&l.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    if let Some(flags) = &log.noise_flags {
        w.write_all(&pack_bits(flags.iter().copied()))?;
    }
    Ok(())
}

fn read_exact_or<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => {
            Error::IncompleteLog(format!("file truncated in {what}"))
        }
        _ => Error::Io(e),
    })
}

pub fn read_binary<R: Read>(r: &mut R) -> Result<DynamicsLog> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("file shorter than DYNL header".into()),
        _ => Error::Io(e),
    })?;
    if header[0..4] != MAGIC {
        return Err(Error::Format(format!(
            "bad magic bytes {:02x?}",
            &header[0..4]
        )));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported DYNL version {version}")));
    }
    let flags = header[6];
    if flags & !(FLAG_LABELS | FLAG_NOISE) != 0 {
        return Err(Error::Format(format!("unknown flag bits {flags:#04x}")));
    }
    let n = u64::from_le_bytes(header[7..15].try_into().unwrap());
    let t_max = u64::from_le_bytes(header[15..23].try_into().unwrap());
    let (n, t_max) = match (usize::try_from(n), usize::try_from(t_max)) {
        (Ok(n), Ok(t)) if n > 0 && t > 0 => (n, t),
        _ => {
            return Err(Error::Format(format!(
                "invalid dimensions n={n}, t_max={t_max}"
            )))
        }
    };
    let cells = n
        .checked_mul(t_max)
        .filter(|c| c.checked_mul(16).is_some())
        .ok_or_else(|| Error::Format(format!("dimensions overflow: n={n}, t_max={t_max}")))?;

    let mut columns = Vec::with_capacity(4);
    let mut buf = vec![0u8; 4 * cells];
    for name in ["p_target", "p_runner_up", "el2n", "entropy"] {
        read_exact_or(r, &mut buf, name)?;
        let col: Vec<f32> = buf
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        columns.push(col);
    }
    let mut bits = vec![0u8; cells.div_ceil(8)];
    read_exact_or(r, &mut bits, "correct")?;
    let correct = unpack_bits(&bits, cells);

    let labels = if flags & FLAG_LABELS != 0 {
        let mut buf = vec![0u8; 4 * n];
        read_exact_or(r, &mut buf, "labels")?;
        Some(
            buf.chunks_exact(4)
                .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        )
    } else {
        None
    };
    let noise_flags = if flags & FLAG_NOISE != 0 {
        let mut buf = vec![0u8; n.div_ceil(8)];
        read_exact_or(r, &mut buf, "noise_flags")?;
        Some(unpack_bits(&buf, n))
    } else {
        None
    };
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after DYNL payload".into()));
    }

    let mut records = Vec::with_capacity(cells);
    for i in 0..n {
        for e in 0..t_max {
            let k = e * n + i;
            records.push(EpochRecord {
                p_target: columns[0][k],
                p_runner_up: columns[1][k],
                el2n: columns[2][k],
                entropy: columns[3][k],
                correct: correct[k],
            });
        }
    }
    DynamicsLog::new(n, t_max, records, labels, noise_flags)
}

/// CSV carries the record grid only; labels and noise flags are not part of it.
pub fn write_csv<W: Write>(log: &DynamicsLog, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    for i in 0..log.n {
        for (e, rec) in log.sample(i).iter().enumerate() {
            wtr.write_record(&[
                i.to_string(),
                (e + 1).to_string(),
                rec.p_target.to_string(),
                rec.p_runner_up.to_string(),
                rec.el2n.to_string(),
                rec.entropy.to_string(),
                u8::from(rec.correct).to_string(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

fn parse_field<T: FromStr>(s: &str, name: &str, line: u64) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Format(format!("line {line}: cannot parse {name} from '{s}'")))
}

fn parse_bool(s: &str, line: u64) -> Result<bool> {
    match s.trim() {
        "1" | "true" | "True" | "TRUE" => Ok(true),
        "0" | "false" | "False" | "FALSE" => Ok(false),
        other => Err(Error::Format(format!(
            "line {line}: cannot parse correct from '{other}'"
        ))),
    }
}

/// Reads the CSV form. Rows may come in any order; every `(sample, epoch)`
/// cell must appear exactly once.
pub fn read_csv<R: Read>(r: R) -> Result<DynamicsLog> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = rdr.headers()?.clone();
    if header.len() != CSV_HEADER.len() || header.iter().zip(CSV_HEADER).any(|(a, b)| a.trim() != b)
    {
        return Err(Error::Format(format!(
            "expected header '{}', got '{}'",
            CSV_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut cells: Vec<(usize, usize, EpochRecord)> = Vec::new();
    let mut n = 0usize;
    let mut t_max = 0usize;
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let sample: usize = parse_field(&row[0], "sample_id", line)?;
        let epoch: usize = parse_field(&row[1], "epoch", line)?;
        if epoch == 0 {
            return Err(Error::Format(format!("line {line}: epochs are 1-indexed")));
        }
        let rec = EpochRecord {
            p_target: parse_field(&row[2], "p_target", line)?,
            p_runner_up: parse_field(&row[3], "p_runner_up", line)?,
            el2n: parse_field(&row[4], "el2n", line)?,
            entropy: parse_field(&row[5], "entropy", line)?,
            correct: parse_bool(&row[6], line)?,
        };
        n = n.max(sample + 1);
        t_max = t_max.max(epoch);
        cells.push((sample, epoch, rec));
    }
    if cells.is_empty() {
        return Err(Error::Validation("CSV log has no rows".into()));
    }
    let total = n
        .checked_mul(t_max)
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    let mut grid: Vec<Option<EpochRecord>> = vec![None; total];
    for (sample, epoch, rec) in cells {
        let slot = &mut grid[sample * t_max + epoch - 1];
        if slot.is_some() {
            return Err(Error::Format(format!(
                "duplicate row for sample {sample}, epoch {epoch}"
            )));
        }
        *slot = Some(rec);
    }
    let mut records = Vec::with_capacity(total);
    for (k, cell) in grid.into_iter().enumerate() {
        match cell {
            Some(rec) => records.push(rec),
            None => {
                return Err(Error::IncompleteLog(format!(
                    "missing row for sample {}, epoch {}",
                    k / t_max,
                    k % t_max + 1
                )))
            }
        }
    }
    DynamicsLog::new(n, t_max, records, None, None)
}
