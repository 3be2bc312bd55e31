//! Mining batting and bowling strength and weakness rules from
//! ball-by-ball cricket commentary.
//!
//! Commentary lines are parsed into [`DeliveryRecord`]s, mapped to batting
//! and bowling features through a [`FeatureLexicon`], aggregated into a
//! [`ConfrontationMatrix`], reduced by [`correspondence_analysis`], and
//! ranked into [`Rule`]s by inner products in the two-dimensional
//! correspondence space.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ca;
pub mod confrontation;
pub mod corpus;
pub mod feature;
pub mod lexicon;
pub mod linalg;
pub mod record;
pub mod rules;
pub mod table;
pub mod validation;

pub use ca::{correspondence_analysis, CaError, CaResult};
pub use confrontation::{
    build_cm, filter_deliveries, AnalysisType, BowlerClass, BuildReport, CmError, ConfrontationMatrix,
    FilterError, FilterTuple, Opponents, Roster, SlotFilter, TimeWindow,
};
pub use corpus::{import_raw, parse_corpus, Corpus, CorpusError, LoadReport};
pub use feature::{BatSet, BattingFeature, BowlSet, BowlingFeature, Category, Feature, FeatureSet};
pub use lexicon::{extract_ngrams, normalize_tokens, FeatureLexicon, LexiconError};
pub use record::{DeliveryRecord, Outcome, RawContext, RecordError};
pub use rules::{biplot, mine_other_rules, mine_rule, mine_rules, BiplotData, FeatureCa, Rule, RuleError, RuleKind};
pub use table::ContingencyTable;
pub use validation::{procrustes, rule_overlap, validate, Commonality, ValidationError, ValidationOptions, ValidationOutcome};
