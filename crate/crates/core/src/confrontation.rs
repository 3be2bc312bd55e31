//! Delivery selection by filter tuple and confrontation matrix construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;
use core::str::FromStr;

use chrono::NaiveDate;
use sha2::{Digest, Sha256};

use crate::corpus::{hex_lower, Corpus};
use crate::feature::{BattingFeature, BowlingFeature, Feature};
use crate::lexicon::FeatureLexicon;
use crate::record::DeliveryRecord;
use crate::table::ContingencyTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnalysisType {
    Batting,
    Bowling,
}

impl AnalysisType {
    pub fn label(self) -> &'static str {
        match self {
            AnalysisType::Batting => "batting",
            AnalysisType::Bowling => "bowling",
        }
    }
}

impl fmt::Display for AnalysisType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AnalysisType {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bat" | "batting" => Ok(AnalysisType::Batting),
            "bowl" | "bowling" => Ok(AnalysisType::Bowling),
            _ => Err(FilterError::Invalid("analysis type must be bat or bowl")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BowlerClass {
    Fast,
    Spin,
}

impl BowlerClass {
    pub fn label(self) -> &'static str {
        match self {
            BowlerClass::Fast => "fast",
            BowlerClass::Spin => "spin",
        }
    }
}

impl FromStr for BowlerClass {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fast" => Ok(BowlerClass::Fast),
            "spin" => Ok(BowlerClass::Spin),
            _ => Err(FilterError::Invalid("bowler class must be fast or spin")),
        }
    }
}

/// Bowler classification, read from `player<TAB>fast|spin` lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Roster {
    classes: BTreeMap<String, BowlerClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("roster line {line}: expected `player<TAB>fast|spin`")]
pub struct RosterError {
    pub line: usize,
}

impl Roster {
    pub fn parse(text: &str) -> Result<Self, RosterError> {
        let mut classes = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (player, class) = line
                .split_once('\t')
                .filter(|(p, _)| !p.is_empty())
                .ok_or(RosterError { line: i + 1 })?;
            let class = class.trim().parse().map_err(|_| RosterError { line: i + 1 })?;
            classes.insert(player.to_string(), class);
        }
        Ok(Roster { classes })
    }

    pub fn insert(&mut self, player: impl Into<String>, class: BowlerClass) {
        self.classes.insert(player.into(), class);
    }

    pub fn class_of(&self, player: &str) -> Option<BowlerClass> {
        self.classes.get(player).copied()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Which opponents a selection keeps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Opponents {
    All,
    Players(BTreeSet<String>),
    Class(BowlerClass),
}

impl fmt::Display for Opponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Opponents::All => f.write_str("all"),
            Opponents::Class(c) => f.write_str(c.label()),
            Opponents::Players(set) => {
                let names: Vec<&str> = set.iter().map(String::as_str).collect();
                f.write_str(&names.join(","))
            }
        }
    }
}

/// `all`, `fast`, `spin`, or a comma-separated list of player identifiers.
impl FromStr for Opponents {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "" => Err(FilterError::Invalid("opponents must not be empty")),
            "all" => Ok(Opponents::All),
            "fast" => Ok(Opponents::Class(BowlerClass::Fast)),
            "spin" => Ok(Opponents::Class(BowlerClass::Spin)),
            list => {
                let set: BTreeSet<String> = list
                    .split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(String::from)
                    .collect();
                if set.is_empty() {
                    return Err(FilterError::Invalid("opponents must not be empty"));
                }
                Ok(Opponents::Players(set))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeWindow {
    Career,
    /// Inclusive on both ends.
    Range { from: NaiveDate, to: NaiveDate },
}

impl TimeWindow {
    pub fn contains(&self, date: NaiveDate) -> bool {
        match *self {
            TimeWindow::Career => true,
            TimeWindow::Range { from, to } => from <= date && date <= to,
        }
    }

    /// Build from optional bounds; a missing bound is open.
    pub fn from_bounds(from: Option<NaiveDate>, to: Option<NaiveDate>) -> Self {
        match (from, to) {
            (None, None) => TimeWindow::Career,
            (f, t) => TimeWindow::Range {
                from: f.unwrap_or(NaiveDate::MIN),
                to: t.unwrap_or(NaiveDate::MAX),
            },
        }
    }
}

impl fmt::Display for TimeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeWindow::Career => f.write_str("career"),
            TimeWindow::Range { from, to } => write!(f, "{from}..{to}"),
        }
    }
}

/// Finer-grained time predicates over the match position fields. Records
/// lacking `day` or `session` never match a predicate on that field.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SlotFilter {
    pub innings: Option<RangeInclusive<u8>>,
    pub day: Option<RangeInclusive<u8>>,
    pub session: Option<RangeInclusive<u8>>,
    pub over: Option<RangeInclusive<u32>>,
}

impl SlotFilter {
    pub fn is_unrestricted(&self) -> bool {
        self.innings.is_none() && self.day.is_none() && self.session.is_none() && self.over.is_none()
    }

    pub fn matches(&self, r: &DeliveryRecord) -> bool {
        fn opt(range: &Option<RangeInclusive<u8>>, v: Option<u8>) -> bool {
            match range {
                None => true,
                Some(range) => v.is_some_and(|v| range.contains(&v)),
            }
        }
        self.innings.as_ref().is_none_or(|g| g.contains(&r.innings))
            && opt(&self.day, r.day)
            && opt(&self.session, r.session)
            && self.over.as_ref().is_none_or(|g| g.contains(&r.over))
    }
}

/// ⟨player, opponents, time, type⟩ selector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FilterTuple {
    pub player: String,
    pub opponents: Opponents,
    pub window: TimeWindow,
    pub analysis_type: AnalysisType,
    pub slots: SlotFilter,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FilterError {
    #[error("invalid filter: {0}")]
    Invalid(&'static str),
    #[error("filter selected no deliveries")]
    EmptySelection,
}

impl FilterTuple {
    pub fn new(player: impl Into<String>, analysis_type: AnalysisType) -> Self {
        FilterTuple {
            player: player.into(),
            opponents: Opponents::All,
            window: TimeWindow::Career,
            analysis_type,
            slots: SlotFilter::default(),
        }
    }

    pub fn with_opponents(mut self, opponents: Opponents) -> Self {
        self.opponents = opponents;
        self
    }

    pub fn with_window(mut self, window: TimeWindow) -> Self {
        self.window = window;
        self
    }

    pub fn validate(&self) -> Result<(), FilterError> {
        if self.player.trim().is_empty() {
            return Err(FilterError::Invalid("player must not be empty"));
        }
        if let TimeWindow::Range { from, to } = self.window {
            if from > to {
                return Err(FilterError::Invalid("date range is reversed"));
            }
        }
        if matches!(self.opponents, Opponents::Class(_)) && self.analysis_type == AnalysisType::Bowling {
            return Err(FilterError::Invalid(
                "bowler-class opponents apply to batting analysis only",
            ));
        }
        Ok(())
    }

    /// Bowling columns of the matrix this filter produces.
    pub fn columns(&self) -> Vec<BowlingFeature> {
        let class = matches!(self.opponents, Opponents::Class(_));
        BowlingFeature::ALL
            .iter()
            .copied()
            .filter(|f| !(class && f.is_class_dependent()))
            .collect()
    }

    fn accepts(&self, r: &DeliveryRecord, roster: &Roster, uncovered: &mut BTreeSet<String>) -> Option<bool> {
        let opponent = match self.analysis_type {
            AnalysisType::Batting => &r.bowler,
            AnalysisType::Bowling => &r.batsman,
        };
        if !self.window.contains(r.date) || !self.slots.matches(r) {
            return Some(false);
        }
        match &self.opponents {
            Opponents::All => Some(true),
            Opponents::Players(set) => Some(set.contains(opponent)),
            Opponents::Class(class) => match roster.class_of(opponent) {
                Some(c) => Some(c == *class),
                None => {
                    uncovered.insert(opponent.clone());
                    None
                }
            },
        }
    }
}

impl fmt::Display for FilterTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}, {}, {}, {}>",
            self.player, self.opponents, self.window, self.analysis_type
        )
    }
}

/// Deliveries kept by a filter, in corpus order.
#[derive(Debug, Clone)]
pub struct Selection<'a> {
    pub records: Vec<&'a DeliveryRecord>,
    /// Records skipped because the opponent is missing from the roster.
    pub uncovered_records: usize,
    pub uncovered_opponents: BTreeSet<String>,
}

/// Select the deliveries a filter tuple describes.
pub fn filter_deliveries<'a>(
    corpus: &'a Corpus,
    filter: &FilterTuple,
    roster: &Roster,
) -> Result<Selection<'a>, FilterError> {
    filter.validate()?;
    let positions: &[usize] = match corpus.player(&filter.player) {
        None => &[],
        Some(p) => match filter.analysis_type {
            AnalysisType::Batting => &p.batting,
            AnalysisType::Bowling => &p.bowling,
        },
    };
    let mut selection = Selection {
        records: Vec::new(),
        uncovered_records: 0,
        uncovered_opponents: BTreeSet::new(),
    };
    for &pos in positions {
        let r = &corpus.records()[pos];
        match filter.accepts(r, roster, &mut selection.uncovered_opponents) {
            Some(true) => selection.records.push(r),
            Some(false) => {}
            None => selection.uncovered_records += 1,
        }
    }
    if selection.records.is_empty() {
        return Err(FilterError::EmptySelection);
    }
    Ok(selection)
}

/// Where a confrontation matrix came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub filter: Option<FilterTuple>,
    pub corpus_digest: Option<String>,
}

/// Co-occurrence counts of batting features (rows) against bowling
/// features (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfrontationMatrix {
    pub table: ContingencyTable<BattingFeature, BowlingFeature>,
    pub provenance: Provenance,
}

/// Per-build accounting of which records fed the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildReport {
    pub records: usize,
    pub contributing: usize,
    /// Records with no (kept) bowling feature; they add nothing.
    pub dropped: usize,
}

impl BuildReport {
    pub fn drop_rate(&self) -> f64 {
        if self.records == 0 {
            0.0
        } else {
            self.dropped as f64 / self.records as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum CmError {
    #[error("no delivery produced a (batting, bowling) feature pair")]
    AllZeroMatrix,
}

impl ConfrontationMatrix {
    pub fn empty(columns: Vec<BowlingFeature>) -> Self {
        ConfrontationMatrix {
            table: ContingencyTable::zeros(BattingFeature::ALL.to_vec(), columns),
            provenance: Provenance::default(),
        }
    }

    pub fn n(&self) -> u64 {
        self.table.total()
    }

    pub fn count(&self, bat: BattingFeature, bowl: BowlingFeature) -> Option<u64> {
        let i = self.table.rows().iter().position(|&r| r == bat)?;
        let j = self.table.cols().iter().position(|&c| c == bowl)?;
        Some(self.table.get(i, j))
    }

    /// Add one delivery's feature sets: every (bat, bowl) pair gets +1.
    /// Returns the number of cells incremented.
    pub fn accumulate(
        &mut self,
        bat: impl Iterator<Item = BattingFeature> + Clone,
        bowl: impl Iterator<Item = BowlingFeature>,
    ) -> usize {
        let mut col_of = [usize::MAX; 12];
        for (j, c) in self.table.cols().iter().enumerate() {
            col_of[c.index()] = j;
        }
        let mut row_of = [usize::MAX; 19];
        for (i, r) in self.table.rows().iter().enumerate() {
            row_of[r.index()] = i;
        }
        let mut added = 0;
        for b in bowl {
            let j = col_of[b.index()];
            if j == usize::MAX {
                continue;
            }
            for a in bat.clone() {
                let i = row_of[a.index()];
                if i != usize::MAX {
                    self.table.increment(i, j);
                    added += 1;
                }
            }
        }
        added
    }

    /// Hex SHA-256 of the text export.
    pub fn digest(&self) -> String {
        hex_lower(&Sha256::digest(self.to_text().as_bytes()))
    }
}

/// Build the confrontation matrix of a record subset.
pub fn build_cm(
    records: &[&DeliveryRecord],
    lexicon: &FeatureLexicon,
    filter: &FilterTuple,
) -> Result<(ConfrontationMatrix, BuildReport), CmError> {
    let mut cm = ConfrontationMatrix::empty(filter.columns());
    cm.provenance.filter = Some(filter.clone());
    let mut report = BuildReport {
        records: records.len(),
        ..BuildReport::default()
    };
    for r in records {
        let (bat, bowl) = lexicon.features_of(&r.text, r.outcome);
        if cm.accumulate(bat.iter(), bowl.iter()) > 0 {
            report.contributing += 1;
        } else {
            report.dropped += 1;
        }
    }
    if cm.n() == 0 {
        return Err(CmError::AllZeroMatrix);
    }
    Ok((cm, report))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CmParseError {
    #[error("missing header row of bowling features")]
    MissingHeader,
    #[error("line {line}: unknown feature {label:?}")]
    UnknownFeature { line: usize, label: String },
    #[error("line {line}: expected {expected} counts")]
    WrongWidth { line: usize, expected: usize },
    #[error("line {line}: invalid count {value:?}")]
    BadCount { line: usize, value: String },
    #[error("line {line}: bad provenance value for {key}")]
    BadProvenance { line: usize, key: String },
    #[error("declared n = {declared} but counts sum to {actual}")]
    TotalMismatch { declared: u64, actual: u64 },
}

impl ConfrontationMatrix {
    /// Labeled text export: `#` provenance lines, a header row of bowling
    /// features, then one line of counts per batting feature.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(f) = &self.provenance.filter {
            out.push_str(&format!("# player: {}\n", f.player));
            out.push_str(&format!("# type: {}\n", f.analysis_type));
            out.push_str(&format!("# opponents: {}\n", f.opponents));
            out.push_str(&format!("# window: {}\n", f.window));
        }
        if let Some(d) = &self.provenance.corpus_digest {
            out.push_str(&format!("# corpus: {d}\n"));
        }
        out.push_str(&format!("# n: {}\n", self.n()));
        out.push_str("feature");
        for c in self.table.cols() {
            out.push('\t');
            out.push_str(c.label());
        }
        out.push('\n');
        for (i, r) in self.table.rows().iter().enumerate() {
            out.push_str(r.label());
            for v in self.table.row(i) {
                out.push('\t');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CmParseError> {
        let mut meta: BTreeMap<String, (usize, String)> = BTreeMap::new();
        let mut header: Option<Vec<BowlingFeature>> = None;
        let mut rows = Vec::new();
        let mut counts = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((k, v)) = comment.split_once(':') {
                    meta.insert(k.trim().to_string(), (line_no, v.trim().to_string()));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let mut cells = line.split('\t');
            let first = cells.next().unwrap_or_default();
            match &header {
                None => {
                    let cols = cells
                        .map(|c| {
                            BowlingFeature::from_label(c).ok_or_else(|| CmParseError::UnknownFeature {
                                line: line_no,
                                label: c.to_string(),
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    header = Some(cols);
                }
                Some(cols) => {
                    let row = BattingFeature::from_label(first).ok_or_else(|| {
                        CmParseError::UnknownFeature {
                            line: line_no,
                            label: first.to_string(),
                        }
                    })?;
                    let values = cells
                        .map(|c| {
                            c.trim().parse::<u64>().map_err(|_| CmParseError::BadCount {
                                line: line_no,
                                value: c.to_string(),
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    if values.len() != cols.len() {
                        return Err(CmParseError::WrongWidth {
                            line: line_no,
                            expected: cols.len(),
                        });
                    }
                    rows.push(row);
                    counts.extend(values);
                }
            }
        }
        let cols = header.ok_or(CmParseError::MissingHeader)?;
        let table = ContingencyTable::new(rows, cols, counts).expect("shape checked per row");
        let provenance = parse_provenance(&meta)?;
        let cm = ConfrontationMatrix { table, provenance };
        if let Some((line, n)) = meta.get("n") {
            let declared: u64 = n.parse().map_err(|_| CmParseError::BadProvenance {
                line: *line,
                key: "n".into(),
            })?;
            if declared != cm.n() {
                return Err(CmParseError::TotalMismatch {
                    declared,
                    actual: cm.n(),
                });
            }
        }
        Ok(cm)
    }
}

fn parse_provenance(meta: &BTreeMap<String, (usize, String)>) -> Result<Provenance, CmParseError> {
    let bad = |key: &str| {
        let line = meta.get(key).map(|(l, _)| *l).unwrap_or(0);
        CmParseError::BadProvenance {
            line,
            key: key.to_string(),
        }
    };
    let filter = match meta.get("player") {
        None => None,
        Some((_, player)) => {
            let analysis_type = meta
                .get("type")
                .ok_or_else(|| bad("type"))?
                .1
                .parse()
                .map_err(|_| bad("type"))?;
            let opponents = match meta.get("opponents") {
                None => Opponents::All,
                Some((_, v)) => v.parse().map_err(|_| bad("opponents"))?,
            };
            let window = match meta.get("window").map(|(_, v)| v.as_str()) {
                None | Some("career") => TimeWindow::Career,
                Some(v) => {
                    let (a, b) = v.split_once("..").ok_or_else(|| bad("window"))?;
                    let parse = |s: &str| NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| bad("window"));
                    TimeWindow::Range {
                        from: parse(a)?,
                        to: parse(b)?,
                    }
                }
            };
            Some(FilterTuple {
                player: player.clone(),
                opponents,
                window,
                analysis_type,
                slots: SlotFilter::default(),
            })
        }
    };
    Ok(Provenance {
        filter,
        corpus_digest: meta.get("corpus").map(|(_, v)| v.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature::BatSet;
    use crate::feature::BowlSet;
    use crate::record::Outcome;
    use alloc::vec;

    #[test]
    fn single_cell() {
        let mut cm = ConfrontationMatrix::empty(BowlingFeature::ALL.to_vec());
        let bat: BatSet = [BattingFeature::Attacked].into_iter().collect();
        let bowl: BowlSet = [BowlingFeature::Short].into_iter().collect();
        cm.accumulate(bat.iter(), bowl.iter());
        assert_eq!(cm.n(), 1);
        assert_eq!(cm.count(BattingFeature::Attacked, BowlingFeature::Short), Some(1));
    }

    #[test]
    fn cartesian_product() {
        let mut cm = ConfrontationMatrix::empty(BowlingFeature::ALL.to_vec());
        let bat: BatSet = [BattingFeature::Out, BattingFeature::Beaten].into_iter().collect();
        let bowl: BowlSet = [BowlingFeature::Good, BowlingFeature::Swing].into_iter().collect();
        assert_eq!(cm.accumulate(bat.iter(), bowl.iter()), 4);
        assert_eq!(cm.n(), 4);
        for a in bat.iter() {
            for b in bowl.iter() {
                assert_eq!(cm.count(a, b), Some(1));
            }
        }
    }

    #[test]
    fn class_filter_drops_four_columns() {
        let f = FilterTuple::new("X", AnalysisType::Batting).with_opponents(Opponents::Class(BowlerClass::Spin));
        let cols = f.columns();
        assert_eq!(cols.len(), 8);
        assert!(!cols.contains(&BowlingFeature::Swing));
        assert_eq!(FilterTuple::new("X", AnalysisType::Batting).columns().len(), 12);
    }

    #[test]
    fn filter_validation() {
        let f = FilterTuple::new("X", AnalysisType::Bowling).with_opponents(Opponents::Class(BowlerClass::Fast));
        assert!(matches!(f.validate(), Err(FilterError::Invalid(_))));
        let d = |m| NaiveDate::from_ymd_opt(2018, m, 1).unwrap();
        let f = FilterTuple::new("X", AnalysisType::Batting).with_window(TimeWindow::Range { from: d(5), to: d(2) });
        assert!(f.validate().is_err());
        assert!(FilterTuple::new(" ", AnalysisType::Batting).validate().is_err());
    }

    #[test]
    fn opponents_parse_and_display() {
        assert_eq!("all".parse::<Opponents>(), Ok(Opponents::All));
        assert_eq!("fast".parse::<Opponents>(), Ok(Opponents::Class(BowlerClass::Fast)));
        let o: Opponents = "Broad, Anderson".parse().unwrap();
        assert_eq!(o.to_string(), "Anderson,Broad");
        assert!(" , ".parse::<Opponents>().is_err());
    }

    #[test]
    fn roster_parse() {
        let r = Roster::parse("# classes\nAnderson\tfast\nLyon\tspin\n").unwrap();
        assert_eq!(r.class_of("Lyon"), Some(BowlerClass::Spin));
        assert_eq!(r.class_of("Nobody"), None);
        assert_eq!(Roster::parse("Anderson\tmedium\n"), Err(RosterError { line: 1 }));
    }

    fn rec(bowler: &str, batsman: &str, date: (i32, u32, u32), text: &str) -> DeliveryRecord {
        DeliveryRecord {
            match_id: "m".into(),
            date: NaiveDate::from_ymd_opt(date.0, date.1, date.2).unwrap(),
            innings: 1,
            day: Some(1),
            session: Some(2),
            over: 10,
            ball_in_over: 1,
            bowler: bowler.into(),
            batsman: batsman.into(),
            outcome: Outcome::Runs(0),
            dismissal_kind: None,
            speed_kph: None,
            text: text.into(),
            short_text: None,
        }
    }

    #[test]
    fn bowling_selection_counts_only_bowled_balls() {
        let corpus = Corpus::new(vec![
            rec("X", "A", (2018, 1, 1), "t"),
            rec("X", "B", (2018, 1, 1), "t"),
            rec("A", "X", (2018, 1, 1), "t"),
            rec("B", "X", (2018, 1, 1), "t"),
            rec("A", "X", (2018, 1, 1), "t"),
            rec("B", "X", (2018, 1, 1), "t"),
            rec("A", "X", (2018, 1, 1), "t"),
        ])
        .unwrap();
        let sel = filter_deliveries(&corpus, &FilterTuple::new("X", AnalysisType::Bowling), &Roster::default()).unwrap();
        assert_eq!(sel.records.len(), 2);
        let sel = filter_deliveries(&corpus, &FilterTuple::new("X", AnalysisType::Batting), &Roster::default()).unwrap();
        assert_eq!(sel.records.len(), 5);
        assert_eq!(
            filter_deliveries(&corpus, &FilterTuple::new("nobody", AnalysisType::Batting), &Roster::default())
                .unwrap_err(),
            FilterError::EmptySelection
        );
    }

    #[test]
    fn uncovered_opponents_are_reported() {
        let corpus = Corpus::new(vec![
            rec("Fasty", "X", (2018, 1, 1), "t"),
            rec("Spinny", "X", (2018, 1, 1), "t"),
            rec("Mystery", "X", (2018, 1, 1), "t"),
        ])
        .unwrap();
        let mut roster = Roster::default();
        roster.insert("Fasty", BowlerClass::Fast);
        roster.insert("Spinny", BowlerClass::Spin);
        let f = FilterTuple::new("X", AnalysisType::Batting).with_opponents(Opponents::Class(BowlerClass::Fast));
        let sel = filter_deliveries(&corpus, &f, &roster).unwrap();
        assert_eq!(sel.records.len(), 1);
        assert_eq!(sel.uncovered_records, 1);
        assert!(sel.uncovered_opponents.contains("Mystery"));
    }

    #[test]
    fn slot_filter() {
        let mut r = rec("A", "X", (2018, 1, 1), "t");
        let mut slots = SlotFilter {
            session: Some(2..=3),
            ..SlotFilter::default()
        };
        assert!(slots.matches(&r));
        r.session = None;
        assert!(!slots.matches(&r));
        slots.session = None;
        slots.over = Some(0..=9);
        assert!(!slots.matches(&r));
    }

    #[test]
    fn all_zero_matrix() {
        let lexicon = FeatureLexicon::parse("bowl\tshort\tshort\n").unwrap();
        let r = rec("A", "X", (2018, 1, 1), "nothing relevant here");
        let f = FilterTuple::new("X", AnalysisType::Batting);
        assert_eq!(build_cm(&[&r], &lexicon, &f).unwrap_err(), CmError::AllZeroMatrix);
        let r2 = rec("A", "X", (2018, 1, 1), "short and wide");
        let (cm, report) = build_cm(&[&r, &r2], &lexicon, &f).unwrap();
        assert_eq!(cm.n(), 1);
        assert_eq!(report, BuildReport { records: 2, contributing: 1, dropped: 1 });
    }

    #[test]
    fn text_round_trip() {
        let mut cm = ConfrontationMatrix::empty(
            FilterTuple::new("X", AnalysisType::Batting)
                .with_opponents(Opponents::Class(BowlerClass::Fast))
                .columns(),
        );
        cm.accumulate([BattingFeature::Run0, BattingFeature::Defended].into_iter(), [BowlingFeature::Good].into_iter());
        cm.provenance = Provenance {
            filter: Some(
                FilterTuple::new("Steve Smith", AnalysisType::Batting)
                    .with_opponents(Opponents::Class(BowlerClass::Fast))
                    .with_window(TimeWindow::Range {
                        from: NaiveDate::from_ymd_opt(2017, 1, 1).unwrap(),
                        to: NaiveDate::from_ymd_opt(2018, 12, 31).unwrap(),
                    }),
            ),
            corpus_digest: Some("abc123".into()),
        };
        let text = cm.to_text();
        assert!(text.contains("# n: 2\n"));
        let back = ConfrontationMatrix::from_text(&text).unwrap();
        assert_eq!(back, cm);
        let tampered = text.replace("# n: 2", "# n: 3");
        assert!(matches!(
            ConfrontationMatrix::from_text(&tampered),
            Err(CmParseError::TotalMismatch { declared: 3, actual: 2 })
        ));
    }
}
