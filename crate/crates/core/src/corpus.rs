//! In-memory corpus of delivery records with per-player indices.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;
use sha2::{Digest, Sha256};

use crate::record::{DeliveryRecord, RawContext, RecordError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("corpus contains no valid records")]
    EmptyCorpus,
}

/// Positions of a player's deliveries, by role.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlayerPositions {
    pub batting: Vec<usize>,
    pub bowling: Vec<usize>,
}

/// A line that failed to load, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub line: usize,
    pub reason: RecordError,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub accepted: usize,
    pub rejected: Vec<Rejection>,
}

/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    records: Vec<DeliveryRecord>,
    player_index: BTreeMap<String, PlayerPositions>,
    date_range: (NaiveDate, NaiveDate),
}

impl Corpus {
    pub fn new(records: Vec<DeliveryRecord>) -> Result<Self, CorpusError> {
        let first = records.first().ok_or(CorpusError::EmptyCorpus)?.date;
        let mut date_range = (first, first);
        let mut player_index: BTreeMap<String, PlayerPositions> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            date_range.0 = date_range.0.min(r.date);
            date_range.1 = date_range.1.max(r.date);
            player_index.entry(r.batsman.clone()).or_default().batting.push(i);
            player_index.entry(r.bowler.clone()).or_default().bowling.push(i);
        }
        Ok(Corpus {
            records,
            player_index,
            date_range,
        })
    }

    pub fn records(&self) -> &[DeliveryRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn date_range(&self) -> (NaiveDate, NaiveDate) {
        self.date_range
    }

    pub fn player_index(&self) -> &BTreeMap<String, PlayerPositions> {
        &self.player_index
    }

    pub fn player(&self, id: &str) -> Option<&PlayerPositions> {
        self.player_index.get(id)
    }

    pub fn contains_player(&self, id: &str) -> bool {
        self.player_index.contains_key(id)
    }

    /// Serialize in corpus file format, one record per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the serialized corpus, lowercase hex.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for r in &self.records {
            hasher.update(r.to_line().as_bytes());
            hasher.update(b"\n");
        }
        hex_lower(&hasher.finalize())
    }
}

pub(crate) fn hex_lower(bytes: &[u8]) -> String {
    use core::fmt::Write;
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Parse corpus file contents. Blank lines and lines starting with `#`
/// are skipped; invalid lines are reported, not fatal.
pub fn parse_corpus(text: &str) -> Result<(Corpus, LoadReport), CorpusError> {
    load_lines(text, DeliveryRecord::from_line)
}

/// Import raw commentary strings, one per line, sharing the given match
/// context.
pub fn import_raw(text: &str, ctx: &RawContext) -> Result<(Corpus, LoadReport), CorpusError> {
    load_lines(text, |line| DeliveryRecord::from_commentary(line, ctx))
}

fn load_lines(
    text: &str,
    parse: impl Fn(&str) -> Result<DeliveryRecord, RecordError>,
) -> Result<(Corpus, LoadReport), CorpusError> {
    let mut records = Vec::new();
    let mut report = LoadReport::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        match parse(line) {
            Ok(r) => records.push(r),
            Err(reason) => report.rejected.push(Rejection { line: i + 1, reason }),
        }
    }
    report.accepted = records.len();
    Ok((Corpus::new(records)?, report))
}
