//! Date-based holdout validation: compare the biplots and rules mined from
//! a player's earlier deliveries with those from the most recent year.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

use chrono::{Months, NaiveDate};

use crate::ca::{correspondence_analysis, CaError};
use crate::confrontation::{build_cm, filter_deliveries, CmError, FilterError, FilterTuple, Roster};
use crate::corpus::Corpus;
use crate::feature::{BattingFeature, BowlingFeature, Category, Feature};
use crate::lexicon::FeatureLexicon;
use crate::linalg::{svd, Matrix};
use crate::record::DeliveryRecord;
use crate::rules::{biplot, mine_other_rules, mine_rules, BiplotData, FeatureCa, Rule, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoldoutSide {
    Train,
    Test,
}

impl HoldoutSide {
    pub fn label(self) -> &'static str {
        match self {
            HoldoutSide::Train => "train",
            HoldoutSide::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("holdout split leaves the {} side empty ({train} train, {test} test)", side.label())]
    EmptySide {
        side: HoldoutSide,
        train: usize,
        test: usize,
    },
    #[error("{} side: {source}", side.label())]
    Matrix { side: HoldoutSide, source: CmError },
    #[error("{} side: {source}", side.label())]
    Analysis { side: HoldoutSide, source: CaError },
    #[error(transparent)]
    Procrustes(#[from] ProcrustesError),
}

/// Records split at a cutoff date: train is strictly before it.
#[derive(Debug, Clone)]
pub struct Holdout<'a> {
    pub cutoff: NaiveDate,
    pub train: Vec<&'a DeliveryRecord>,
    pub test: Vec<&'a DeliveryRecord>,
}

/// Default cutoff: one year before the latest date. 29 February maps to
/// 28 February.
pub fn default_cutoff(latest: NaiveDate) -> NaiveDate {
    latest.checked_sub_months(Months::new(12)).unwrap_or(NaiveDate::MIN)
}

pub fn split_at<'a>(records: &[&'a DeliveryRecord], cutoff: NaiveDate) -> Result<Holdout<'a>, ValidationError> {
    let (train, test): (Vec<_>, Vec<_>) = records.iter().copied().partition(|r| r.date < cutoff);
    let side = if train.is_empty() {
        Some(HoldoutSide::Train)
    } else if test.is_empty() {
        Some(HoldoutSide::Test)
    } else {
        None
    };
    if let Some(side) = side {
        return Err(ValidationError::EmptySide {
            side,
            train: train.len(),
            test: test.len(),
        });
    }
    Ok(Holdout { cutoff, train, test })
}

/// Filter the corpus, then split at `cutoff` (or the default cutoff).
pub fn holdout_split<'a>(
    corpus: &'a Corpus,
    filter: &FilterTuple,
    roster: &Roster,
    cutoff: Option<NaiveDate>,
) -> Result<Holdout<'a>, ValidationError> {
    let selection = filter_deliveries(corpus, filter, roster)?;
    let cutoff = match cutoff {
        Some(c) => c,
        None => {
            let latest = selection.records.iter().map(|r| r.date).max().expect("selection is non-empty");
            default_cutoff(latest)
        }
    };
    split_at(&selection.records, cutoff)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ProcrustesError {
    #[error("configurations have different labels or point counts")]
    LabelMismatch,
    #[error("at least two points are required")]
    TooFewPoints,
    #[error("reference configuration has all points coincident")]
    DegenerateConfiguration,
}

/// Labeled 2-D point configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub labels: Vec<&'static str>,
    pub points: Vec<[f64; 2]>,
}

impl Configuration {
    pub fn from_biplot(b: &BiplotData) -> Self {
        Configuration {
            labels: b.points.iter().map(|p| p.label).collect(),
            points: b.points.iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    /// Keep only the given labels, in their order of appearance here.
    pub fn restricted_to(&self, keep: &BTreeSet<&str>) -> Self {
        let (labels, points) = self
            .labels
            .iter()
            .zip(&self.points)
            .filter(|(l, _)| keep.contains(*l))
            .map(|(l, p)| (*l, *p))
            .unzip();
        Configuration { labels, points }
    }
}

/// Similarity transform superimposing `b` onto `a`:
/// `fitted_i = scale * rotation * b_i + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcrustesFit {
    pub delta2: f64,
    pub scale: f64,
    pub rotation: [[f64; 2]; 2],
    pub translation: [f64; 2],
}

impl ProcrustesFit {
    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let r = &self.rotation;
        [
            self.scale * (r[0][0] * p[0] + r[0][1] * p[1]) + self.translation[0],
            self.scale * (r[1][0] * p[0] + r[1][1] * p[1]) + self.translation[1],
        ]
    }
}

fn centroid(points: &[[f64; 2]]) -> [f64; 2] {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
    [sx / n, sy / n]
}

/// Least-squares superimposition of `b` onto the reference `a` with
/// translation, uniform scaling, rotation and reflection.
pub fn procrustes_fit(a: &Configuration, b: &Configuration) -> Result<ProcrustesFit, ProcrustesError> {
    if a.labels != b.labels || a.points.len() != b.points.len() {
        return Err(ProcrustesError::LabelMismatch);
    }
    if a.points.len() < 2 {
        return Err(ProcrustesError::TooFewPoints);
    }
    let (ca, cb) = (centroid(&a.points), centroid(&b.points));
    let ac: Vec<[f64; 2]> = a.points.iter().map(|p| [p[0] - ca[0], p[1] - ca[1]]).collect();
    let bc: Vec<[f64; 2]> = b.points.iter().map(|p| [p[0] - cb[0], p[1] - cb[1]]).collect();
    let ss_a: f64 = ac.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum();
    let ss_b: f64 = bc.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum();
    if ss_a <= 0.0 {
        return Err(ProcrustesError::DegenerateConfiguration);
    }
    if a.points == b.points {
        return Ok(ProcrustesFit {
            delta2: 0.0,
            scale: 1.0,
            rotation: [[1.0, 0.0], [0.0, 1.0]],
            translation: [0.0, 0.0],
        });
    }
    if ss_b <= 0.0 {
        return Ok(ProcrustesFit {
            delta2: 1.0,
            scale: 0.0,
            rotation: [[1.0, 0.0], [0.0, 1.0]],
            translation: ca,
        });
    }

    // Cross-product M = Σ a_i b_iᵀ; with M = U S Vᵀ the optimal rotation is U Vᵀ.
    let mut m = Matrix::zeros(2, 2);
    for (p, q) in ac.iter().zip(&bc) {
        for r in 0..2 {
            for c in 0..2 {
                m[(r, c)] += p[r] * q[c];
            }
        }
    }
    let mut dec = svd(&m);
    // Complete U when M is rank-deficient; the null direction adds nothing
    // to the trace, so any orthonormal completion is optimal.
    if dec.singular_values[0] == 0.0 {
        dec.u = Matrix::identity(2);
    } else if dec.singular_values[1] == 0.0 {
        let (x, y) = (dec.u[(0, 0)], dec.u[(1, 0)]);
        dec.u = Matrix::from_row_major(2, 2, alloc::vec![x, -y, y, x]);
    }
    let rot = dec.u.matmul(&dec.v.transpose());
    let trace: f64 = dec.singular_values.iter().sum();
    let scale = trace / ss_b;
    let rotation = [[rot[(0, 0)], rot[(0, 1)]], [rot[(1, 0)], rot[(1, 1)]]];
    let rb = [
        rotation[0][0] * cb[0] + rotation[0][1] * cb[1],
        rotation[1][0] * cb[0] + rotation[1][1] * cb[1],
    ];
    let delta2 = (1.0 - trace * trace / (ss_a * ss_b)).clamp(0.0, 1.0);
    Ok(ProcrustesFit {
        delta2,
        scale,
        rotation,
        translation: [ca[0] - scale * rb[0], ca[1] - scale * rb[1]],
    })
}

/// Minimized sum of squared residuals after superimposing `b` onto `a`,
/// divided by the total sum of squares of `a` about its centroid.
pub fn procrustes(a: &Configuration, b: &Configuration) -> Result<f64, ProcrustesError> {
    procrustes_fit(a, b).map(|f| f.delta2)
}

pub type RulePairSet = BTreeSet<(BattingFeature, BowlingFeature)>;

/// Top-`k` (anchor, bowling feature) pairs of every rule given.
pub fn top_pairs<'a>(rules: impl IntoIterator<Item = &'a Rule>, k: usize) -> RulePairSet {
    rules
        .into_iter()
        .flat_map(|r| r.top(k).map(move |f| (r.anchor, f)))
        .collect()
}

/// Percentage of the reference pairs also present in `candidate`;
/// `None` when the reference set is empty.
pub fn pair_overlap(candidate: &RulePairSet, reference: &RulePairSet) -> Option<f64> {
    if reference.is_empty() {
        return None;
    }
    let common = reference.intersection(candidate).count();
    Some(100.0 * common as f64 / reference.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Commonality {
    pub per_kind: BTreeMap<RuleKind, Option<f64>>,
    pub overall: Option<f64>,
}

/// Commonality percentage of train against test rules: for each rule kind
/// present, the share of the test side's top-`k` pairs also found on the
/// train side; `overall` pools every kind.
pub fn rule_overlap(train: &[Rule], test: &[Rule], k: usize) -> Commonality {
    let k = k.max(1);
    let kinds: BTreeSet<RuleKind> = train.iter().chain(test).map(|r| r.kind).collect();
    let mut out = Commonality::default();
    for kind in kinds {
        let a = top_pairs(train.iter().filter(|r| r.kind == kind), k);
        let b = top_pairs(test.iter().filter(|r| r.kind == kind), k);
        out.per_kind.insert(kind, pair_overlap(&a, &b));
    }
    out.overall = pair_overlap(&top_pairs(train, k), &top_pairs(test, k));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairFileError {
    #[error("line {line}: expected `anchor<TAB>bowling-feature`")]
    Malformed { line: usize },
    #[error("line {line}: unknown feature {label:?}")]
    UnknownFeature { line: usize, label: alloc::string::String },
}

/// Parse a human-authored rule file: one `anchor<TAB>bowling-feature` pair
/// per line, `#` comments allowed.
pub fn parse_rule_pairs(text: &str) -> Result<RulePairSet, PairFileError> {
    let mut set = RulePairSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (a, b) = line.split_once('\t').ok_or(PairFileError::Malformed { line: line_no })?;
        let unknown = |l: &str| PairFileError::UnknownFeature {
            line: line_no,
            label: l.to_string(),
        };
        let anchor = BattingFeature::from_label(a.trim()).ok_or_else(|| unknown(a))?;
        let bowl = BowlingFeature::from_label(b.trim()).ok_or_else(|| unknown(b))?;
        set.insert((anchor, bowl));
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    pub cutoff: Option<NaiveDate>,
    pub top_k: usize,
    /// Biplot compared with Procrustes.
    pub category: Category,
    /// Compare other rules as well as strength and weakness.
    pub include_other: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            cutoff: None,
            top_k: 3,
            category: Category::Response,
            include_other: false,
        }
    }
}

/// Everything mined from one side of the split.
#[derive(Debug, Clone)]
pub struct SideAnalysis {
    pub ca: FeatureCa,
    pub rules: Vec<Rule>,
    pub biplot: BiplotData,
}

#[derive(Debug, Clone)]
pub struct ValidationOutcome {
    pub cutoff: NaiveDate,
    pub train_count: usize,
    pub test_count: usize,
    pub procrustes_delta: f64,
    /// Labels shared by both biplots, in the order compared.
    pub compared_points: Vec<&'static str>,
    pub commonality: Commonality,
    pub train: SideAnalysis,
    pub test: SideAnalysis,
}

fn analyze_side(
    records: &[&DeliveryRecord],
    lexicon: &FeatureLexicon,
    filter: &FilterTuple,
    side: HoldoutSide,
    opts: &ValidationOptions,
) -> Result<SideAnalysis, ValidationError> {
    let (cm, _) = build_cm(records, lexicon, filter).map_err(|source| ValidationError::Matrix { side, source })?;
    let ca = correspondence_analysis(&cm.table).map_err(|source| ValidationError::Analysis { side, source })?;
    let pair = mine_rules(&ca, filter.analysis_type);
    let mut rules: Vec<Rule> = [pair.strength, pair.weakness].into_iter().filter_map(Result::ok).collect();
    if opts.include_other {
        rules.extend(mine_other_rules(&ca, filter.analysis_type));
    }
    let biplot = biplot(&ca, opts.category);
    Ok(SideAnalysis { ca, rules, biplot })
}

/// Split, analyse both sides, and compare them.
pub fn validate(
    corpus: &Corpus,
    lexicon: &FeatureLexicon,
    filter: &FilterTuple,
    roster: &Roster,
    opts: &ValidationOptions,
) -> Result<ValidationOutcome, ValidationError> {
    let holdout = holdout_split(corpus, filter, roster, opts.cutoff)?;
    let train = analyze_side(&holdout.train, lexicon, filter, HoldoutSide::Train, opts)?;
    let test = analyze_side(&holdout.test, lexicon, filter, HoldoutSide::Test, opts)?;

    let a = Configuration::from_biplot(&train.biplot);
    let b = Configuration::from_biplot(&test.biplot);
    let shared: BTreeSet<&str> = a
        .labels
        .iter()
        .copied()
        .filter(|l| b.labels.contains(l))
        .collect();
    let (a, b) = (a.restricted_to(&shared), b.restricted_to(&shared));
    let procrustes_delta = procrustes(&a, &b)?;

    let commonality = rule_overlap(&train.rules, &test.rules, opts.top_k);
    Ok(ValidationOutcome {
        cutoff: holdout.cutoff,
        train_count: holdout.train.len(),
        test_count: holdout.test.len(),
        procrustes_delta,
        compared_points: a.labels,
        commonality,
        train,
        test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confrontation::AnalysisType;
    use crate::record::Outcome;
    use crate::rules::Scored;
    use alloc::vec;

    fn cfg(points: &[[f64; 2]]) -> Configuration {
        const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
        Configuration {
            labels: NAMES[..points.len()].to_vec(),
            points: points.to_vec(),
        }
    }

    #[test]
    fn identical_is_exactly_zero() {
        let a = cfg(&[[0.1, 0.2], [0.5, -0.3], [-1.0, 0.7]]);
        assert_eq!(procrustes(&a, &a), Ok(0.0));
    }

    #[test]
    fn similarity_transform_removed() {
        let a = cfg(&[[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [1.5, 1.0]]);
        let (s, th, t) = (2.0f64, 0.7f64, [3.0, -1.0]);
        let (c, sn) = (libm::cos(th), libm::sin(th));
        let b = cfg(
            &a.points
                .iter()
                .map(|p| [s * (c * p[0] - sn * p[1]) + t[0], s * (sn * p[0] + c * p[1]) + t[1]])
                .collect::<Vec<_>>(),
        );
        let fit = procrustes_fit(&a, &b).unwrap();
        assert!(fit.delta2 < 1e-12);
        for (p, q) in a.points.iter().zip(&b.points) {
            let f = fit.apply(*q);
            assert!((f[0] - p[0]).abs() < 1e-12 && (f[1] - p[1]).abs() < 1e-12);
        }
        // Reflection is allowed too.
        let mirrored = cfg(&a.points.iter().map(|p| [-p[0], p[1]]).collect::<Vec<_>>());
        assert!(procrustes(&a, &mirrored).unwrap() < 1e-12);
    }

    #[test]
    fn errors() {
        let a = cfg(&[[0.0, 0.0], [1.0, 1.0]]);
        let mut b = a.clone();
        b.labels[1] = "z";
        assert_eq!(procrustes(&a, &b), Err(ProcrustesError::LabelMismatch));
        let flat = cfg(&[[1.0, 1.0], [1.0, 1.0]]);
        assert_eq!(procrustes(&flat, &a), Err(ProcrustesError::DegenerateConfiguration));
        assert_eq!(procrustes(&cfg(&[[1.0, 1.0]]), &cfg(&[[0.0, 1.0]])), Err(ProcrustesError::TooFewPoints));
        // A collapsed target explains nothing.
        assert_eq!(procrustes(&a, &flat), Ok(1.0));
    }

    #[test]
    fn unrelated_configurations_score_high() {
        let a = cfg(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]);
        let b = cfg(&[[1.0, 0.0], [-1.0, 0.0], [0.0, -1.0], [0.0, 1.0]]);
        let d = procrustes(&a, &b).unwrap();
        assert!((0.0..=1.0).contains(&d));
        assert!(procrustes(&b, &a).unwrap() - d < 1e-12);
    }

    fn rule(kind: RuleKind, anchor: BattingFeature, feats: &[BowlingFeature]) -> Rule {
        Rule {
            kind,
            analysis_type: AnalysisType::Batting,
            anchor,
            category: anchor.category(),
            ranked: feats
                .iter()
                .enumerate()
                .map(|(i, &feature)| Scored {
                    feature,
                    score: -(i as f64),
                })
                .collect(),
        }
    }

    #[test]
    fn overlap_cases() {
        use BowlingFeature::*;
        let s = rule(RuleKind::Strength, BattingFeature::Attacked, &[Short, Slow, Middle, Good]);
        let w = rule(RuleKind::Weakness, BattingFeature::Beaten, &[Swing, MoveOut, MoveIn, Full]);
        let rules = vec![s.clone(), w.clone()];
        let cp = rule_overlap(&rules, &rules, 3);
        assert_eq!(cp.overall, Some(100.0));
        assert_eq!(cp.per_kind[&RuleKind::Strength], Some(100.0));

        let s2 = rule(RuleKind::Strength, BattingFeature::Attacked, &[Good, Full, Off, Short]);
        let w2 = rule(RuleKind::Weakness, BattingFeature::Beaten, &[Leg, Spin, Fast, Swing]);
        assert_eq!(rule_overlap(&rules, &[s2, w2], 3).overall, Some(0.0));

        // Two of three strength pairs shared, weakness identical.
        let s3 = rule(RuleKind::Strength, BattingFeature::Attacked, &[Slow, Short, Off]);
        let cp = rule_overlap(&rules, &[s3, w.clone()], 3);
        assert!((cp.per_kind[&RuleKind::Strength].unwrap() - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(cp.per_kind[&RuleKind::Weakness], Some(100.0));
        assert!((cp.overall.unwrap() - 500.0 / 6.0).abs() < 1e-12);

        // Missing test anchor: nothing to compare for that kind.
        let cp = rule_overlap(&rules, &[w], 3);
        assert_eq!(cp.per_kind[&RuleKind::Strength], None);
        assert_eq!(cp.overall, Some(100.0));
    }

    #[test]
    fn rule_pair_file() {
        let set = parse_rule_pairs("# expert\nattacked\tshort\nbeaten\tmove-out\n\n").unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&(BattingFeature::Beaten, BowlingFeature::MoveOut)));
        assert_eq!(parse_rule_pairs("attacked short"), Err(PairFileError::Malformed { line: 1 }));
        assert!(parse_rule_pairs("attacked\tbouncer").is_err());
    }

    fn dated(y: i32, m: u32, d: u32) -> DeliveryRecord {
        DeliveryRecord {
            match_id: "m".into(),
            date: NaiveDate::from_ymd_opt(y, m, d).unwrap(),
            innings: 1,
            day: None,
            session: None,
            over: 1,
            ball_in_over: 1,
            bowler: "B".into(),
            batsman: "X".into(),
            outcome: Outcome::Runs(0),
            dismissal_kind: None,
            speed_kph: None,
            text: "t".into(),
            short_text: None,
        }
    }

    #[test]
    fn split_counts() {
        let recs: Vec<DeliveryRecord> = (1..=10).map(|m| dated(2018, m, 15)).collect();
        let refs: Vec<&DeliveryRecord> = recs.iter().collect();
        let h = split_at(&refs, NaiveDate::from_ymd_opt(2018, 8, 1).unwrap()).unwrap();
        assert_eq!((h.train.len(), h.test.len()), (7, 3));
        let all_before = split_at(&refs, NaiveDate::from_ymd_opt(2019, 1, 1).unwrap());
        assert!(matches!(all_before, Err(ValidationError::EmptySide { side: HoldoutSide::Test, .. })));
    }

    #[test]
    fn default_cutoff_is_one_year_back() {
        let d = default_cutoff(NaiveDate::from_ymd_opt(2020, 2, 29).unwrap());
        assert_eq!(d, NaiveDate::from_ymd_opt(2019, 2, 28).unwrap());
    }
}
