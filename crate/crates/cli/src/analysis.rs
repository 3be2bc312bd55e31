//! The analysis code path shared by the CLI and the HTTP service.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use cricket_rules_core::confrontation::Selection;
use cricket_rules_core::rules::{BiplotData, PointSide, RulePair};
use cricket_rules_core::validation::{
    self, top_pairs, Commonality, ProcrustesError, RulePairSet, ValidationError, ValidationOptions,
};
use cricket_rules_core::{
    biplot, build_cm, correspondence_analysis, filter_deliveries, mine_other_rules, mine_rules, AnalysisType,
    CaError, Category, CmError, ConfrontationMatrix, Corpus, Feature, FeatureCa,
    FeatureLexicon, FilterError, FilterTuple, Opponents, Roster, Rule, RuleError, RuleKind, TimeWindow,
};
use serde_json::{json, Map, Value};

use crate::json::{date_or_null, num};

pub const DEFAULT_TOP_K: usize = 3;

/// Corpus, lexicon and roster loaded once and shared read-only.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub corpus: Corpus,
    pub corpus_digest: String,
    pub lexicon: FeatureLexicon,
    pub roster: Roster,
}

impl Dataset {
    pub fn new(corpus: Corpus, lexicon: FeatureLexicon, roster: Roster) -> Self {
        let corpus_digest = corpus.digest();
        Dataset {
            corpus,
            corpus_digest,
            lexicon,
            roster,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("invalid request: {0}")]
    InvalidFilter(String),
    #[error("unknown player {0:?}")]
    UnknownPlayer(String),
    #[error("the filter selected no deliveries")]
    EmptySelection,
    #[error("no delivery produced a batting/bowling feature pair")]
    AllZeroMatrix,
    #[error("the confrontation matrix is empty")]
    DegenerateMatrix,
    #[error("the confrontation matrix has no usable dimension (rows and columns are independent)")]
    RankZero,
    #[error("holdout split leaves the {side} side empty ({train} train, {test} test)")]
    EmptySide {
        side: &'static str,
        train: usize,
        test: usize,
    },
    #[error("biplot comparison failed: {0}")]
    Procrustes(ProcrustesError),
}

impl AnalysisError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::InvalidFilter(_) => "INVALID_FILTER",
            AnalysisError::UnknownPlayer(_) => "UNKNOWN_PLAYER",
            AnalysisError::EmptySelection => "EMPTY_SELECTION",
            AnalysisError::AllZeroMatrix => "ALL_ZERO_MATRIX",
            AnalysisError::DegenerateMatrix => "DEGENERATE_MATRIX",
            AnalysisError::RankZero => "RANK_ZERO",
            AnalysisError::EmptySide { .. } => "EMPTY_SIDE",
            AnalysisError::Procrustes(_) => "PROCRUSTES_FAILED",
        }
    }

    pub fn http_status(&self) -> u16 {
        match self {
            AnalysisError::InvalidFilter(_) => 400,
            AnalysisError::UnknownPlayer(_) => 404,
            _ => 422,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AnalysisError::InvalidFilter(_) => 4,
            AnalysisError::EmptySelection => 6,
            AnalysisError::AllZeroMatrix => 7,
            AnalysisError::DegenerateMatrix | AnalysisError::RankZero => 8,
            AnalysisError::EmptySide { .. } => 9,
            AnalysisError::UnknownPlayer(_) => 10,
            AnalysisError::Procrustes(_) => 12,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code(), "message": self.to_string() } })
    }
}

impl From<FilterError> for AnalysisError {
    fn from(e: FilterError) -> Self {
        match e {
            FilterError::Invalid(msg) => AnalysisError::InvalidFilter(msg.to_string()),
            FilterError::EmptySelection => AnalysisError::EmptySelection,
        }
    }
}

impl From<CmError> for AnalysisError {
    fn from(e: CmError) -> Self {
        match e {
            CmError::AllZeroMatrix => AnalysisError::AllZeroMatrix,
        }
    }
}

impl From<CaError> for AnalysisError {
    fn from(e: CaError) -> Self {
        match e {
            CaError::DegenerateMatrix => AnalysisError::DegenerateMatrix,
            CaError::RankZero => AnalysisError::RankZero,
        }
    }
}

impl From<ValidationError> for AnalysisError {
    fn from(e: ValidationError) -> Self {
        match e {
            ValidationError::Filter(f) => f.into(),
            ValidationError::EmptySide { side, train, test } => AnalysisError::EmptySide {
                side: side.label(),
                train,
                test,
            },
            ValidationError::Matrix { source, .. } => source.into(),
            ValidationError::Analysis { source, .. } => source.into(),
            ValidationError::Procrustes(p) => AnalysisError::Procrustes(p),
        }
    }
}

/// Filter tuple plus reporting options.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRequest {
    pub player: String,
    pub analysis_type: AnalysisType,
    pub opponents: Opponents,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    pub categories: Vec<Category>,
    pub top_k: usize,
}

impl AnalysisRequest {
    pub fn new(player: impl Into<String>, analysis_type: AnalysisType) -> Self {
        AnalysisRequest {
            player: player.into(),
            analysis_type,
            opponents: Opponents::All,
            from: None,
            to: None,
            categories: Category::ALL.to_vec(),
            top_k: DEFAULT_TOP_K,
        }
    }

    pub fn filter(&self) -> FilterTuple {
        let window = if self.from.is_none() && self.to.is_none() {
            TimeWindow::Career
        } else {
            TimeWindow::from_bounds(self.from, self.to)
        };
        FilterTuple::new(self.player.clone(), self.analysis_type)
            .with_opponents(self.opponents.clone())
            .with_window(window)
    }

    /// Build a request from HTTP query parameters.
    pub fn from_query(q: &BTreeMap<String, String>) -> Result<Self, AnalysisError> {
        let bad = |m: String| AnalysisError::InvalidFilter(m);
        let player = q
            .get("player")
            .filter(|p| !p.trim().is_empty())
            .ok_or_else(|| bad("missing `player` parameter".into()))?;
        let analysis_type = match q.get("type") {
            Some(t) => t.parse().map_err(|_| bad(format!("unknown analysis type {t:?}")))?,
            None => AnalysisType::Batting,
        };
        let mut req = AnalysisRequest::new(player.clone(), analysis_type);
        if let Some(o) = q.get("opponents") {
            req.opponents = o.parse().map_err(|_| bad(format!("invalid opponents {o:?}")))?;
        }
        req.from = q.get("from").map(|d| parse_date(d)).transpose()?;
        req.to = q.get("to").map(|d| parse_date(d)).transpose()?;
        if let Some(c) = q.get("categories") {
            req.categories = parse_categories(c)?;
        }
        if let Some(k) = q.get("top_k") {
            req.top_k = k
                .parse()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| bad(format!("top_k must be a positive integer, got {k:?}")))?;
        }
        Ok(req)
    }
}

pub fn parse_date(s: &str) -> Result<NaiveDate, AnalysisError> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|_| AnalysisError::InvalidFilter(format!("expected an ISO date (YYYY-MM-DD), got {s:?}")))
}

/// Comma-separated category labels; `all` selects every category.
pub fn parse_categories(s: &str) -> Result<Vec<Category>, AnalysisError> {
    if s.trim() == "all" {
        return Ok(Category::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let c: Category = part
            .parse()
            .map_err(|_| AnalysisError::InvalidFilter(format!("unknown category {part:?}")))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err(AnalysisError::InvalidFilter("no categories requested".into()));
    }
    out.sort();
    Ok(out)
}

/// Everything computed for one filter.
#[derive(Debug, Clone)]
pub struct Analysis<'a> {
    pub filter: FilterTuple,
    pub selection: Selection<'a>,
    pub cm: ConfrontationMatrix,
    pub dropped_records: usize,
    pub contributing: usize,
    pub ca: FeatureCa,
    pub rules: RulePair,
    pub others: Vec<Rule>,
}

impl Analysis<'_> {
    pub fn all_rules(&self) -> Vec<Rule> {
        let mut out: Vec<Rule> = [&self.rules.strength, &self.rules.weakness]
            .into_iter()
            .filter_map(|r| r.as_ref().ok().cloned())
            .collect();
        out.extend(self.others.iter().cloned());
        out
    }
}

fn check_player(ds: &Dataset, req: &AnalysisRequest) -> Result<FilterTuple, AnalysisError> {
    let filter = req.filter();
    filter.validate()?;
    if req.top_k == 0 {
        return Err(AnalysisError::InvalidFilter("top-k must be at least 1".into()));
    }
    if !ds.corpus.contains_player(&req.player) {
        return Err(AnalysisError::UnknownPlayer(req.player.clone()));
    }
    Ok(filter)
}

pub fn run_analysis<'a>(ds: &'a Dataset, req: &AnalysisRequest) -> Result<Analysis<'a>, AnalysisError> {
    let filter = check_player(ds, req)?;
    let selection = filter_deliveries(&ds.corpus, &filter, &ds.roster)?;
    let (mut cm, report) = build_cm(&selection.records, &ds.lexicon, &filter)?;
    cm.provenance.corpus_digest = Some(ds.corpus_digest.clone());
    let ca = correspondence_analysis(&cm.table)?;
    let rules = mine_rules(&ca, filter.analysis_type);
    let others = mine_other_rules(&ca, filter.analysis_type);
    Ok(Analysis {
        filter,
        selection,
        cm,
        dropped_records: report.dropped,
        contributing: report.contributing,
        ca,
        rules,
        others,
    })
}

fn filter_json(req: &AnalysisRequest) -> Value {
    json!({
        "player": req.player,
        "type": req.analysis_type.label(),
        "opponents": req.opponents.to_string(),
        "from": date_or_null(req.from),
        "to": date_or_null(req.to),
    })
}

pub fn rule_json(rule: &Rule, player: &str, k: usize) -> Value {
    json!({
        "kind": rule.kind.label(),
        "anchor": rule.anchor.label(),
        "category": rule.category.label(),
        "ranked": rule.ranked.iter().map(|s| json!({ "feature": s.feature.label(), "score": num(s.score) })).collect::<Vec<_>>(),
        "top": rule.top(k).map(|f| f.label()).collect::<Vec<_>>(),
        "sentence": rule.sentence(player, k),
    })
}

fn rule_or_error(r: &Result<Rule, RuleError>, player: &str, k: usize) -> Value {
    match r {
        Ok(rule) => rule_json(rule, player, k),
        Err(RuleError::AnchorUnobserved(anchor)) => json!({
            "error": { "code": "ANCHOR_UNOBSERVED", "anchor": anchor.label() }
        }),
    }
}

pub fn biplot_json(b: &BiplotData) -> Value {
    let points: Vec<Value> = b
        .points
        .iter()
        .map(|p| {
            json!({
                "label": p.label,
                "side": match p.side { PointSide::Row => "row", PointSide::Column => "column" },
                "category": p.category.map(|c| c.label()),
                "x": num(p.x),
                "y": num(p.y),
                "mass": num(p.mass),
            })
        })
        .collect();
    json!({ "category": b.category.label(), "points": points })
}

fn labels<F: Feature>(fs: &[F]) -> Vec<&'static str> {
    fs.iter().map(|f| f.label()).collect()
}

/// The analysis response document.
pub fn analysis_json(ds: &Dataset, req: &AnalysisRequest, a: &Analysis<'_>) -> Value {
    let table = &a.cm.table;
    let counts: Vec<Vec<u64>> = (0..table.n_rows()).map(|i| table.row(i).to_vec()).collect();
    let records = a.selection.records.len();
    let mut biplots = Map::new();
    for &c in &req.categories {
        biplots.insert(c.label().to_string(), biplot_json(&biplot(&a.ca, c)));
    }
    json!({
        "provenance": {
            "filter": filter_json(req),
            "corpus_digest": ds.corpus_digest,
            "cm_digest": a.cm.digest(),
            "n": a.cm.n(),
            "records": records,
            "contributing_records": a.contributing,
            "dropped_records": a.dropped_records,
            "drop_rate": num(a.dropped_records as f64 / records as f64),
            "uncovered_records": a.selection.uncovered_records,
            "uncovered_opponents": a.selection.uncovered_opponents.iter().collect::<Vec<_>>(),
            "dropped_features": {
                "batting": labels(&a.ca.dropped_rows),
                "bowling": labels(&a.ca.dropped_cols),
            },
        },
        "cm": {
            "rows": labels(table.rows()),
            "columns": labels(table.cols()),
            "counts": counts,
        },
        "ca": {
            "rank": a.ca.rank(),
            "low_rank": a.ca.is_low_rank(),
            "inertia": num(a.ca.inertia),
            "chi_square": num(a.ca.inertia * a.ca.n as f64),
            "singular_values": a.ca.singular_values.iter().map(|&s| num(s)).collect::<Vec<_>>(),
        },
        "rules": {
            "top_k": req.top_k,
            "strength": rule_or_error(&a.rules.strength, &req.player, req.top_k),
            "weakness": rule_or_error(&a.rules.weakness, &req.player, req.top_k),
            "others": a.others.iter().map(|r| rule_json(r, &req.player, req.top_k)).collect::<Vec<_>>(),
        },
        "biplots": biplots,
    })
}

/// Run the full analysis and return its JSON document.
pub fn analyze(ds: &Dataset, req: &AnalysisRequest) -> Result<Value, AnalysisError> {
    let a = run_analysis(ds, req)?;
    Ok(analysis_json(ds, req, &a))
}

fn commonality_json(c: &Commonality) -> Value {
    let mut m = Map::new();
    for (kind, v) in &c.per_kind {
        m.insert(kind.label().to_string(), v.map_or(Value::Null, num));
    }
    m.insert("overall".into(), c.overall.map_or(Value::Null, num));
    Value::Object(m)
}

/// Date-based holdout validation report.
pub fn validate(ds: &Dataset, req: &AnalysisRequest, opts: &ValidationOptions) -> Result<Value, AnalysisError> {
    let filter = check_player(ds, req)?;
    let out = validation::validate(&ds.corpus, &ds.lexicon, &filter, &ds.roster, opts)?;
    let rules = |rs: &[Rule]| rs.iter().map(|r| rule_json(r, &req.player, opts.top_k)).collect::<Vec<_>>();
    Ok(json!({
        "filter": filter_json(req),
        "corpus_digest": ds.corpus_digest,
        "cutoff": out.cutoff.to_string(),
        "train_count": out.train_count,
        "test_count": out.test_count,
        "procrustes_delta": num(out.procrustes_delta),
        "procrustes_category": opts.category.label(),
        "compared_points": out.compared_points,
        "top_k": opts.top_k,
        "include_other": opts.include_other,
        "commonality_pct": commonality_json(&out.commonality),
        "train": { "rules": rules(&out.train.rules), "biplot": biplot_json(&out.train.biplot) },
        "test": { "rules": rules(&out.test.rules), "biplot": biplot_json(&out.test.biplot) },
    }))
}

fn pairs_json(set: &RulePairSet) -> Vec<Value> {
    set.iter()
        .map(|(a, b)| json!({ "anchor": a.label(), "feature": b.label() }))
        .collect()
}

/// Compare mined rules with a human-authored reference set: the share of
/// reference pairs found among the top-`k` pairs of every mined rule.
pub fn compare_rules(ds: &Dataset, req: &AnalysisRequest, reference: &RulePairSet) -> Result<Value, AnalysisError> {
    let a = run_analysis(ds, req)?;
    let mined = top_pairs(&a.all_rules(), req.top_k);
    let matched: RulePairSet = reference.intersection(&mined).copied().collect();
    let missing: RulePairSet = reference.difference(&mined).copied().collect();
    let kinds: Vec<(RuleKind, RulePairSet)> = [RuleKind::Strength, RuleKind::Weakness, RuleKind::Other]
        .into_iter()
        .map(|k| {
            let set = reference
                .iter()
                .filter(|(anchor, _)| cricket_rules_core::rules::kind_of(*anchor, req.analysis_type) == k)
                .copied()
                .collect();
            (k, set)
        })
        .collect();
    let mut per_kind = Map::new();
    for (k, set) in &kinds {
        if !set.is_empty() {
            per_kind.insert(k.label().into(), validation::pair_overlap(&mined, set).map_or(Value::Null, num));
        }
    }
    Ok(json!({
        "filter": filter_json(req),
        "corpus_digest": ds.corpus_digest,
        "top_k": req.top_k,
        "reference_pairs": reference.len(),
        "matched": pairs_json(&matched),
        "missing": pairs_json(&missing),
        "commonality_pct": {
            "per_kind": per_kind,
            "overall": validation::pair_overlap(&mined, reference).map_or(Value::Null, num),
        },
    }))
}

/// Players with their delivery counts per role, sorted by identifier.
pub fn players_json(ds: &Dataset) -> Value {
    let players: Vec<Value> = ds
        .corpus
        .player_index()
        .iter()
        .map(|(p, pos)| json!({ "player": p, "batting": pos.batting.len(), "bowling": pos.bowling.len() }))
        .collect();
    json!({ "players": players })
}
