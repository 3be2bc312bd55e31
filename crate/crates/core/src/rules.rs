//! Strength, weakness and other rules from a correspondence analysis, plus
//! the biplot projections used to display them.
//!
//! A rule pairs one anchor batting feature with the bowling features ranked
//! by the inner product of the anchor's 2-D row coordinates with each
//! bowling feature's 2-D column coordinates.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::ca::CaResult;
use crate::confrontation::AnalysisType;
use crate::feature::{BattingFeature, BowlingFeature, Category, Feature};

/// CA over a confrontation matrix.
pub type FeatureCa = CaResult<BattingFeature, BowlingFeature>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    Strength,
    Weakness,
    Other,
}

impl RuleKind {
    pub fn label(self) -> &'static str {
        match self {
            RuleKind::Strength => "strength",
            RuleKind::Weakness => "weakness",
            RuleKind::Other => "other",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Anchor batting feature for a rule kind.
///
/// | analysis | strength | weakness |
/// |----------|----------|----------|
/// | batting  | attacked | beaten   |
/// | bowling  | beaten   | attacked |
pub fn anchor_for(kind: RuleKind, analysis: AnalysisType) -> Option<BattingFeature> {
    use AnalysisType::*;
    use BattingFeature::{Attacked, Beaten};
    match (kind, analysis) {
        (RuleKind::Strength, Batting) | (RuleKind::Weakness, Bowling) => Some(Attacked),
        (RuleKind::Weakness, Batting) | (RuleKind::Strength, Bowling) => Some(Beaten),
        (RuleKind::Other, _) => None,
    }
}

/// Kind of the rule anchored at `anchor`.
pub fn kind_of(anchor: BattingFeature, analysis: AnalysisType) -> RuleKind {
    [RuleKind::Strength, RuleKind::Weakness]
        .into_iter()
        .find(|&k| anchor_for(k, analysis) == Some(anchor))
        .unwrap_or(RuleKind::Other)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scored {
    pub feature: BowlingFeature,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub kind: RuleKind,
    pub analysis_type: AnalysisType,
    pub anchor: BattingFeature,
    pub category: Category,
    /// Descending by score; ties in canonical bowling order.
    pub ranked: Vec<Scored>,
}

impl Rule {
    pub fn top(&self, k: usize) -> impl Iterator<Item = BowlingFeature> + '_ {
        self.ranked.iter().take(k).map(|s| s.feature)
    }

    /// One-line reading of the rule's top `k` bowling features.
    pub fn sentence(&self, player: &str, k: usize) -> String {
        let features: Vec<&str> = self.top(k).map(|f| f.label()).collect();
        let list = features.join(", ");
        match self.analysis_type {
            AnalysisType::Batting => format!("{player} {} {list} deliveries", verb(self.anchor)),
            AnalysisType::Bowling => {
                format!("batsmen {} {list} deliveries from {player}", verb_plural(self.anchor))
            }
        }
    }
}

fn verb(anchor: BattingFeature) -> String {
    use BattingFeature::*;
    match anchor {
        Attacked => "attacks".into(),
        Beaten => "is beaten by".into(),
        Defended => "defends".into(),
        Out => "gets out to".into(),
        FrontFoot => "plays on the front foot to".into(),
        BackFoot => "plays on the back foot to".into(),
        f if f.is_outcome() => format!("scores {} off", f.label()),
        f => format!("plays towards {} off", f.label()),
    }
}

fn verb_plural(anchor: BattingFeature) -> String {
    use BattingFeature::*;
    match anchor {
        Attacked => "attack".into(),
        Beaten => "are beaten by".into(),
        Defended => "defend".into(),
        Out => "get out to".into(),
        FrontFoot => "play on the front foot to".into(),
        BackFoot => "play on the back foot to".into(),
        f if f.is_outcome() => format!("score {} off", f.label()),
        f => format!("play towards {} off", f.label()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("anchor feature `{0}` was not observed")]
    AnchorUnobserved(BattingFeature),
}

fn by_score_desc(a: &Scored, b: &Scored) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then(a.feature.index().cmp(&b.feature.index()))
}

/// Rank every retained bowling feature against one anchor row.
pub fn rank_against(ca: &FeatureCa, anchor: BattingFeature) -> Result<Vec<Scored>, RuleError> {
    let i = ca.row_index(anchor).ok_or(RuleError::AnchorUnobserved(anchor))?;
    let [fx, fy] = ca.row_2d(i);
    let mut ranked: Vec<Scored> = ca
        .cols
        .iter()
        .enumerate()
        .map(|(j, &feature)| {
            let [gx, gy] = ca.col_2d(j);
            Scored {
                feature,
                score: fx * gx + fy * gy,
            }
        })
        .collect();
    ranked.sort_by(by_score_desc);
    Ok(ranked)
}

pub fn mine_rule(ca: &FeatureCa, analysis: AnalysisType, anchor: BattingFeature) -> Result<Rule, RuleError> {
    Ok(Rule {
        kind: kind_of(anchor, analysis),
        analysis_type: analysis,
        anchor,
        category: anchor.category(),
        ranked: rank_against(ca, anchor)?,
    })
}

/// Strength and weakness rules; an unobserved anchor yields an error in
/// its slot.
#[derive(Debug, Clone, PartialEq)]
pub struct RulePair {
    pub strength: Result<Rule, RuleError>,
    pub weakness: Result<Rule, RuleError>,
}

pub fn mine_rules(ca: &FeatureCa, analysis: AnalysisType) -> RulePair {
    let mine = |kind| mine_rule(ca, analysis, anchor_for(kind, analysis).expect("kind has an anchor"));
    RulePair {
        strength: mine(RuleKind::Strength),
        weakness: mine(RuleKind::Weakness),
    }
}

/// One rule per observed batting feature other than attacked and beaten,
/// in canonical order.
pub fn mine_other_rules(ca: &FeatureCa, analysis: AnalysisType) -> Vec<Rule> {
    BattingFeature::ALL
        .iter()
        .copied()
        .filter(|f| !matches!(f, BattingFeature::Attacked | BattingFeature::Beaten))
        .filter_map(|f| mine_rule(ca, analysis, f).ok())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSide {
    Row,
    Column,
}

impl PointSide {
    pub fn label(self) -> &'static str {
        match self {
            PointSide::Row => "row",
            PointSide::Column => "column",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiplotPoint {
    pub label: &'static str,
    pub side: PointSide,
    /// Category of a batting point; `None` for bowling points.
    pub category: Option<Category>,
    pub x: f64,
    pub y: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiplotData {
    pub category: Category,
    /// Batting rows of the category first, then every bowling column.
    pub points: Vec<BiplotPoint>,
}

impl BiplotData {
    pub fn rows(&self) -> impl Iterator<Item = &BiplotPoint> {
        self.points.iter().filter(|p| p.side == PointSide::Row)
    }

    pub fn columns(&self) -> impl Iterator<Item = &BiplotPoint> {
        self.points.iter().filter(|p| p.side == PointSide::Column)
    }
}

/// Select the category's batting rows and all bowling columns from the
/// full-table analysis.
pub fn biplot(ca: &FeatureCa, category: Category) -> BiplotData {
    let mut points = Vec::new();
    for f in category.members() {
        if let Some(i) = ca.row_index(f) {
            let [x, y] = ca.row_2d(i);
            points.push(BiplotPoint {
                label: f.label(),
                side: PointSide::Row,
                category: Some(category),
                x,
                y,
                mass: ca.row_masses[i],
            });
        }
    }
    for (j, f) in ca.cols.iter().enumerate() {
        let [x, y] = ca.col_2d(j);
        points.push(BiplotPoint {
            label: f.label(),
            side: PointSide::Column,
            category: None,
            x,
            y,
            mass: ca.col_masses[j],
        });
    }
    BiplotData { category, points }
}
