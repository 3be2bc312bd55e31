//! Delivery records, the commentary header parser and the line codec used
//! by corpus files.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use chrono::NaiveDate;

/// Result of one delivery. Extras are not outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    /// Runs off the bat, 0 through 6.
    Runs(u8),
    Out,
}

impl Outcome {
    pub fn runs(r: u8) -> Option<Self> {
        (r <= 6).then_some(Outcome::Runs(r))
    }

    /// All eight outcomes in canonical order.
    pub fn all() -> impl Iterator<Item = Outcome> {
        (0..=6).map(Outcome::Runs).chain(core::iter::once(Outcome::Out))
    }

    /// Parse the outcome token of a commentary header
    /// ("no run", "1 run", "2 runs", "FOUR", "SIX", "OUT").
    pub fn from_header_token(token: &str) -> Option<Self> {
        let t = token.trim().to_ascii_lowercase();
        match t.as_str() {
            "out" => return Some(Outcome::Out),
            "no run" | "no runs" => return Some(Outcome::Runs(0)),
            "four" => return Some(Outcome::Runs(4)),
            "six" => return Some(Outcome::Runs(6)),
            _ => {}
        }
        let (num, unit) = t.split_once(' ')?;
        if unit != "run" && unit != "runs" {
            return None;
        }
        let r: u8 = num.parse().ok()?;
        Outcome::runs(r)
    }

    /// The token a commentary header would carry for this outcome.
    pub fn header_token(self) -> String {
        match self {
            Outcome::Out => "OUT".to_owned(),
            Outcome::Runs(0) => "no run".to_owned(),
            Outcome::Runs(1) => "1 run".to_owned(),
            Outcome::Runs(4) => "FOUR".to_owned(),
            Outcome::Runs(6) => "SIX".to_owned(),
            Outcome::Runs(r) => format!("{r} runs"),
        }
    }
}

/// Compact form used in corpus files: `0`..`6` or `out`.
impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Runs(r) => write!(f, "{r}"),
            Outcome::Out => f.write_str("out"),
        }
    }
}

impl FromStr for Outcome {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "out" {
            return Ok(Outcome::Out);
        }
        let r: u8 = s.parse().map_err(|_| ())?;
        Outcome::runs(r).ok_or(())
    }
}

/// One ball of commentary.
#[derive(Debug, Clone, PartialEq)]
pub struct DeliveryRecord {
    pub match_id: String,
    pub date: NaiveDate,
    pub innings: u8,
    pub day: Option<u8>,
    pub session: Option<u8>,
    pub over: u32,
    pub ball_in_over: u32,
    pub bowler: String,
    pub batsman: String,
    pub outcome: Outcome,
    pub dismissal_kind: Option<String>,
    pub speed_kph: Option<f64>,
    /// Unstructured commentary (everything after the header).
    pub text: String,
    pub short_text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecordError {
    #[error("expected 14 tab-separated fields, found {0}")]
    FieldCount(usize),
    #[error("field `{field}` is not valid: {value:?}")]
    BadField { field: &'static str, value: String },
    #[error("record violates invariant: {0}")]
    Invariant(&'static str),
    #[error(transparent)]
    Header(#[from] HeaderError),
}

impl DeliveryRecord {
    pub const FIELD_COUNT: usize = 14;

    pub fn validate(&self) -> Result<(), RecordError> {
        if self.innings == 0 {
            return Err(RecordError::Invariant("innings must be positive"));
        }
        if self.day == Some(0) || self.session == Some(0) {
            return Err(RecordError::Invariant("day and session must be positive"));
        }
        if self.ball_in_over == 0 {
            return Err(RecordError::Invariant("ball_in_over must be at least 1"));
        }
        if self.bowler.trim().is_empty() || self.batsman.trim().is_empty() {
            return Err(RecordError::Invariant("player identifiers must be non-empty"));
        }
        if self.bowler == self.batsman {
            return Err(RecordError::Invariant("bowler and batsman must differ"));
        }
        if self.text.trim().is_empty() {
            return Err(RecordError::Invariant("commentary text must be non-empty"));
        }
        if let Some(s) = self.speed_kph {
            if !s.is_finite() || s < 0.0 {
                return Err(RecordError::Invariant("speed must be a non-negative number"));
            }
        }
        Ok(())
    }

    /// Serialize to one corpus line (no trailing newline).
    pub fn to_line(&self) -> String {
        let opt_u8 = |v: Option<u8>| v.map(|d| d.to_string()).unwrap_or_default();
        let fields: [String; Self::FIELD_COUNT] = [
            escape(&self.match_id),
            self.date.format("%Y-%m-%d").to_string(),
            self.innings.to_string(),
            opt_u8(self.day),
            opt_u8(self.session),
            self.over.to_string(),
            self.ball_in_over.to_string(),
            escape(&self.bowler),
            escape(&self.batsman),
            self.outcome.to_string(),
            self.dismissal_kind.as_deref().map(escape).unwrap_or_default(),
            self.speed_kph.map(|s| s.to_string()).unwrap_or_default(),
            self.short_text.as_deref().map(escape).unwrap_or_default(),
            escape(&self.text),
        ];
        fields.join("\t")
    }

    /// Parse one corpus line and check record invariants.
    pub fn from_line(line: &str) -> Result<Self, RecordError> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != Self::FIELD_COUNT {
            return Err(RecordError::FieldCount(fields.len()));
        }
        fn bad(field: &'static str, value: &str) -> RecordError {
            RecordError::BadField {
                field,
                value: value.to_owned(),
            }
        }
        fn num<T: FromStr>(field: &'static str, value: &str) -> Result<T, RecordError> {
            value.parse().map_err(|_| bad(field, value))
        }
        fn opt_num<T: FromStr>(field: &'static str, value: &str) -> Result<Option<T>, RecordError> {
            if value.is_empty() {
                Ok(None)
            } else {
                num(field, value).map(Some)
            }
        }
        let opt_text = |v: &str| (!v.is_empty()).then(|| unescape(v));

        let record = DeliveryRecord {
            match_id: unescape(fields[0]),
            date: NaiveDate::parse_from_str(fields[1], "%Y-%m-%d").map_err(|_| bad("date", fields[1]))?,
            innings: num("innings", fields[2])?,
            day: opt_num("day", fields[3])?,
            session: opt_num("session", fields[4])?,
            over: num("over", fields[5])?,
            ball_in_over: num("ball_in_over", fields[6])?,
            bowler: unescape(fields[7]),
            batsman: unescape(fields[8]),
            outcome: fields[9].parse().map_err(|_| bad("outcome", fields[9]))?,
            dismissal_kind: opt_text(fields[10]),
            speed_kph: opt_num("speed_kph", fields[11])?,
            short_text: opt_text(fields[12]),
            text: unescape(fields[13]),
        };
        record.validate()?;
        Ok(record)
    }

    /// Reconstruct the commentary line this record would have been scraped as.
    pub fn to_commentary(&self) -> String {
        let header = StructuredHeader {
            over: self.over,
            ball_in_over: self.ball_in_over,
            bowler: self.bowler.clone(),
            batsman: self.batsman.clone(),
            outcome: self.outcome,
            speed_kph: self.speed_kph,
        };
        header.render(&self.text)
    }
}

/// Context a raw commentary line lacks and the importer supplies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawContext {
    pub match_id: String,
    pub date: NaiveDate,
    pub innings: u8,
}

impl DeliveryRecord {
    /// Build a record from one raw commentary string such as
    /// `"3.2, Finn to Sehwag, FOUR, short of a length, ..."`.
    pub fn from_commentary(line: &str, ctx: &RawContext) -> Result<Self, RecordError> {
        let (header, remainder) = parse_structured(line)?;
        let record = DeliveryRecord {
            match_id: ctx.match_id.clone(),
            date: ctx.date,
            innings: ctx.innings,
            day: None,
            session: None,
            over: header.over,
            ball_in_over: header.ball_in_over,
            bowler: header.bowler,
            batsman: header.batsman,
            outcome: header.outcome,
            dismissal_kind: None,
            speed_kph: header.speed_kph,
            text: remainder.to_owned(),
            short_text: None,
        };
        record.validate()?;
        Ok(record)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Header fields recognized at the start of a commentary line.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredHeader {
    pub over: u32,
    pub ball_in_over: u32,
    pub bowler: String,
    pub batsman: String,
    pub outcome: Outcome,
    pub speed_kph: Option<f64>,
}

impl StructuredHeader {
    /// Render as `<over>.<ball>, <bowler> to <batsman>, <outcome>, [<speed> kph, ]<remainder>`.
    pub fn render(&self, remainder: &str) -> String {
        let mut s = format!(
            "{}.{}, {} to {}, {}",
            self.over,
            self.ball_in_over,
            self.bowler,
            self.batsman,
            self.outcome.header_token()
        );
        if let Some(speed) = self.speed_kph {
            s.push_str(&format!(", {speed} kph"));
        }
        if !remainder.is_empty() {
            s.push_str(", ");
            s.push_str(remainder);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeaderErrorKind {
    MissingDelimiter,
    BadOverNumber,
    BadBallNumber,
    MissingPlayers,
    UnrecognizedOutcome,
}

impl HeaderErrorKind {
    fn describe(self) -> &'static str {
        match self {
            HeaderErrorKind::MissingDelimiter => "missing delimiter",
            HeaderErrorKind::BadOverNumber => "non-numeric over",
            HeaderErrorKind::BadBallNumber => "non-numeric or zero ball number",
            HeaderErrorKind::MissingPlayers => "expected `<bowler> to <batsman>`",
            HeaderErrorKind::UnrecognizedOutcome => "unrecognized outcome token",
        }
    }
}

/// Malformed commentary header; `position` is a byte offset into the line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed header at byte {position}: {}", kind.describe())]
pub struct HeaderError {
    pub kind: HeaderErrorKind,
    pub position: usize,
}

fn header_err(kind: HeaderErrorKind, position: usize) -> HeaderError {
    HeaderError { kind, position }
}

/// Splits `s` at the first comma, returning the segment and the offset
/// just past the comma.
fn next_segment(s: &str, from: usize) -> Option<(&str, usize)> {
    let rest = &s[from..];
    rest.find(',').map(|i| (&rest[..i], from + i + 1))
}

fn parse_speed(segment: &str) -> Option<f64> {
    let num = segment.trim().strip_suffix("kph")?.trim_end();
    if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit() || b == b'.') {
        return None;
    }
    num.parse().ok()
}

/// Split a commentary line into its structured header and the unstructured
/// remainder.
pub fn parse_structured(line: &str) -> Result<(StructuredHeader, &str), HeaderError> {
    use HeaderErrorKind::*;

    let (ball_id, after_ball) =
        next_segment(line, 0).ok_or_else(|| header_err(MissingDelimiter, line.len()))?;
    let ball_id_trimmed = ball_id.trim();
    let start = ball_id.len() - ball_id.trim_start().len();
    let (over_s, ball_s) = ball_id_trimmed
        .split_once('.')
        .ok_or_else(|| header_err(MissingDelimiter, start))?;
    let is_num = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !is_num(over_s) {
        return Err(header_err(BadOverNumber, start));
    }
    let over: u32 = over_s.parse().map_err(|_| header_err(BadOverNumber, start))?;
    let ball_pos = start + over_s.len() + 1;
    if !is_num(ball_s) {
        return Err(header_err(BadBallNumber, ball_pos));
    }
    let ball_in_over: u32 = ball_s.parse().map_err(|_| header_err(BadBallNumber, ball_pos))?;
    if ball_in_over == 0 {
        return Err(header_err(BadBallNumber, ball_pos));
    }

    let (players, after_players) =
        next_segment(line, after_ball).ok_or_else(|| header_err(MissingDelimiter, line.len()))?;
    let (bowler, batsman) = players
        .split_once(" to ")
        .map(|(a, b)| (a.trim(), b.trim()))
        .filter(|(a, b)| !a.is_empty() && !b.is_empty())
        .ok_or_else(|| header_err(MissingPlayers, after_ball))?;

    let (outcome_s, mut rest_at) = match next_segment(line, after_players) {
        Some(seg) => seg,
        None => (&line[after_players..], line.len()),
    };
    let outcome = Outcome::from_header_token(outcome_s)
        .ok_or_else(|| header_err(UnrecognizedOutcome, after_players))?;

    let mut speed_kph = None;
    let speed_seg = match next_segment(line, rest_at) {
        Some((seg, next)) => Some((seg, next)),
        None if rest_at < line.len() => Some((&line[rest_at..], line.len())),
        None => None,
    };
    if let Some((seg, next)) = speed_seg {
        if let Some(speed) = parse_speed(seg) {
            speed_kph = Some(speed);
            rest_at = next;
        }
    }

    let remainder = line[rest_at..].trim();
    Ok((
        StructuredHeader {
            over,
            ball_in_over,
            bowler: bowler.to_owned(),
            batsman: batsman.to_owned(),
            outcome,
            speed_kph,
        },
        remainder,
    ))
}
