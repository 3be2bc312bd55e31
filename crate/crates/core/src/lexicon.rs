//! Feature definitions: which unigrams and bigrams signal which batting and
//! bowling features, and the text preprocessing that produces those n-grams.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::feature::{BatSet, BattingFeature, BowlSet, BowlingFeature, Feature};
use crate::record::Outcome;

/// Lowercase, strip punctuation (keeping hyphens between word characters)
/// and split on whitespace. Stop words are kept on purpose: "off", "out",
/// "full" and friends are cricket vocabulary.
pub fn normalize_tokens(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut token = String::new();
        for (i, &c) in chars.iter().enumerate() {
            if c.is_alphanumeric() {
                token.extend(c.to_lowercase());
            } else if c == '-' {
                let before = i > 0 && chars[i - 1].is_alphanumeric();
                let after = chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
                if before && after {
                    token.push('-');
                }
            }
        }
        if !token.is_empty() {
            tokens.push(token);
        }
    }
    tokens
}

/// All unigrams plus all adjacent pairs joined by a single space.
pub fn extract_ngrams<S: AsRef<str>>(tokens: &[S]) -> BTreeSet<String> {
    let mut grams: BTreeSet<String> = tokens.iter().map(|t| t.as_ref().to_string()).collect();
    for pair in tokens.windows(2) {
        let mut g = String::with_capacity(pair[0].as_ref().len() + pair[1].as_ref().len() + 1);
        g.push_str(pair[0].as_ref());
        g.push(' ');
        g.push_str(pair[1].as_ref());
        grams.insert(g);
    }
    grams
}

/// Which side of the confrontation a lexicon entry describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Bat,
    Bowl,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Bat => "bat",
            Side::Bowl => "bowl",
        }
    }
}

/// Feature definitions for both sides, indexed by n-gram.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureLexicon {
    index: BTreeMap<String, (BatSet, BowlSet)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("line {line}: {problem}")]
    InvalidEntry { line: usize, problem: LintProblem },
}

/// One issue found in a lexicon file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LintProblem {
    MalformedLine,
    UnknownSide(String),
    UnknownFeature(String),
    NotNormalized { ngram: String, expected: String },
    TooManyTokens(String),
    Duplicate { first_line: usize },
}

impl fmt::Display for LintProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LintProblem::MalformedLine => f.write_str("expected `side<TAB>feature<TAB>ngram`"),
            LintProblem::UnknownSide(s) => write!(f, "unknown side {s:?} (expected bat or bowl)"),
            LintProblem::UnknownFeature(s) => write!(f, "unknown feature {s:?}"),
            LintProblem::NotNormalized { ngram, expected } => {
                write!(f, "n-gram {ngram:?} is not normalized (expected {expected:?})")
            }
            LintProblem::TooManyTokens(s) => write!(f, "n-gram {s:?} must have 1 or 2 tokens"),
            LintProblem::Duplicate { first_line } => {
                write!(f, "duplicate of line {first_line}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintIssue {
    pub line: usize,
    pub problem: LintProblem,
}

/// A parsed, validated entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Entry {
    Bat(BattingFeature),
    Bowl(BowlingFeature),
}

fn parse_entry(line: &str) -> Result<(Entry, &str), LintProblem> {
    let mut parts = line.split('\t');
    let (Some(side), Some(feature), Some(ngram), None) =
        (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(LintProblem::MalformedLine);
    };
    let entry = match side {
        "bat" => BattingFeature::from_label(feature).map(Entry::Bat),
        "bowl" => BowlingFeature::from_label(feature).map(Entry::Bowl),
        other => return Err(LintProblem::UnknownSide(other.to_string())),
    }
    .ok_or_else(|| LintProblem::UnknownFeature(feature.to_string()))?;
    let tokens = normalize_tokens(ngram);
    let expected = tokens.join(" ");
    if tokens.is_empty() || tokens.len() > 2 {
        return Err(LintProblem::TooManyTokens(ngram.to_string()));
    }
    if expected != ngram {
        return Err(LintProblem::NotNormalized {
            ngram: ngram.to_string(),
            expected,
        });
    }
    Ok((entry, ngram))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        (!line.trim().is_empty() && !line.starts_with('#')).then_some((i + 1, line))
    })
}

/// Report every problem in a lexicon file: unknown feature names,
/// non-normalized n-grams and duplicate lines.
pub fn lint(text: &str) -> Vec<LintIssue> {
    let mut issues = Vec::new();
    let mut seen: BTreeMap<(Entry, &str), usize> = BTreeMap::new();
    for (line, content) in content_lines(text) {
        match parse_entry(content) {
            Ok(key) => {
                if let Some(&first_line) = seen.get(&key) {
                    issues.push(LintIssue {
                        line,
                        problem: LintProblem::Duplicate { first_line },
                    });
                } else {
                    seen.insert(key, line);
                }
            }
            Err(problem) => issues.push(LintIssue { line, problem }),
        }
    }
    issues
}

impl FeatureLexicon {
    /// Parse a lexicon file (`side<TAB>feature<TAB>ngram` per line, `#`
    /// comments). Duplicates are tolerated; any other problem is an error.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lexicon = FeatureLexicon::default();
        for (line, content) in content_lines(text) {
            let (entry, ngram) =
                parse_entry(content).map_err(|problem| LexiconError::InvalidEntry { line, problem })?;
            lexicon.insert(entry, ngram);
        }
        Ok(lexicon)
    }

    /// Insert one already-normalized n-gram.
    pub fn insert(&mut self, entry: Entry, ngram: &str) {
        let slot = self.index.entry(ngram.to_string()).or_default();
        match entry {
            Entry::Bat(f) => slot.0.insert(f),
            Entry::Bowl(f) => slot.1.insert(f),
        }
    }

    pub fn len(&self) -> usize {
        self.index
            .values()
            .map(|(bat, bowl)| bat.len() + bowl.len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// The n-gram set defining one batting feature.
    pub fn batting_definition(&self, feature: BattingFeature) -> BTreeSet<&str> {
        self.index
            .iter()
            .filter(|(_, (bat, _))| bat.contains(feature))
            .map(|(g, _)| g.as_str())
            .collect()
    }

    /// The n-gram set defining one bowling feature.
    pub fn bowling_definition(&self, feature: BowlingFeature) -> BTreeSet<&str> {
        self.index
            .iter()
            .filter(|(_, (_, bowl))| bowl.contains(feature))
            .map(|(g, _)| g.as_str())
            .collect()
    }

    /// Serialize back to file form, sorted by side, feature, n-gram.
    pub fn to_text(&self) -> String {
        let mut lines: BTreeSet<(Entry, &str)> = BTreeSet::new();
        for (g, (bat, bowl)) in &self.index {
            lines.extend(bat.iter().map(|f| (Entry::Bat(f), g.as_str())));
            lines.extend(bowl.iter().map(|f| (Entry::Bowl(f), g.as_str())));
        }
        let mut out = String::new();
        for (entry, g) in lines {
            let (side, label) = match entry {
                Entry::Bat(f) => (Side::Bat, f.label()),
                Entry::Bowl(f) => (Side::Bowl, f.label()),
            };
            out.push_str(side.label());
            out.push('\t');
            out.push_str(label);
            out.push('\t');
            out.push_str(g);
            out.push('\n');
        }
        out
    }

    /// Feature sets for one delivery: the outcome's batting feature plus
    /// every feature whose definition intersects `ngrams`.
    pub fn map_features<S: AsRef<str>>(
        &self,
        ngrams: impl IntoIterator<Item = S>,
        outcome: Outcome,
    ) -> (BatSet, BowlSet) {
        let mut bat = BatSet::empty();
        let mut bowl = BowlSet::empty();
        bat.insert(BattingFeature::from_outcome(outcome));
        for g in ngrams {
            if let Some((b, w)) = self.index.get(g.as_ref()) {
                bat.union_with(*b);
                bowl.union_with(*w);
            }
        }
        (bat, bowl)
    }

    /// Normalize, extract n-grams and map in one step.
    pub fn features_of(&self, text: &str, outcome: Outcome) -> (BatSet, BowlSet) {
        let tokens = normalize_tokens(text);
        self.map_features(extract_ngrams(&tokens), outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize_tokens("Short ball, Paine pulls - straight!"),
            ["short", "ball", "paine", "pulls", "straight"]
        );
        assert!(normalize_tokens("").is_empty());
        assert_eq!(normalize_tokens("MOVE-IN"), ["move-in"]);
        assert_eq!(normalize_tokens("-- off-stump -leg- a-"), ["off-stump", "leg", "a"]);
        assert_eq!(normalize_tokens("world of... well, pain!"), ["world", "of", "well", "pain"]);
    }

    #[test]
    fn ngram_examples() {
        let g = extract_ngrams(&["short", "ball"]);
        assert_eq!(g, ["ball", "short", "short ball"].iter().map(|s| s.to_string()).collect());
        assert!(extract_ngrams::<&str>(&[]).is_empty());
        let g = extract_ngrams(&["swings", "in", "from", "outside", "off"]);
        assert!(g.contains("swings in"));
        assert!(g.contains("outside off"));
        assert_eq!(g.len(), 5 + 4);
        let dup = extract_ngrams(&["off", "off", "off"]);
        assert_eq!(dup.len(), 2);
    }

    fn small() -> FeatureLexicon {
        FeatureLexicon::parse(
            "# test lexicon\n\
             bat\tattacked\tpunch\n\
             bat\tbeaten\toutside edge\n\
             bowl\tgood\tgood length\n\
             bowl\tshort\tshort\n\
             bat\tsquare leg\tshort leg\n",
        )
        .unwrap()
    }

    #[test]
    fn map_outcome_only() {
        let (bat, bowl) = small().map_features(Vec::<String>::new(), Outcome::Out);
        assert_eq!(bat.iter().collect::<Vec<_>>(), [BattingFeature::Out]);
        assert!(bowl.is_empty());
    }

    #[test]
    fn map_with_ngrams() {
        let lex = small();
        let (bat, _) = lex.features_of("stands tall and punches... no, punch it", Outcome::Runs(4));
        assert!(bat.contains(BattingFeature::Run4) && bat.contains(BattingFeature::Attacked));

        let (bat, bowl) = lex.features_of("good length, catches the outside edge", Outcome::Runs(1));
        assert!(bat.contains(BattingFeature::Run1) && bat.contains(BattingFeature::Beaten));
        assert!(bowl.contains(BowlingFeature::Good));
    }

    #[test]
    fn bigram_does_not_suppress_unigram() {
        let (bat, bowl) = small().features_of("taken at short leg", Outcome::Out);
        assert!(bat.contains(BattingFeature::SquareLeg));
        assert!(bowl.contains(BowlingFeature::Short));
    }

    #[test]
    fn lint_reports_each_problem() {
        let text = "bat\tattacked\tpunch\n\
                    bat\tattacked\tpunch\n\
                    bat\tsmashed\tpunch\n\
                    bowl\tgood\tGood Length\n\
                    bowl\tgood\ta good length\n\
                    side\tgood\tx\n\
                    no tabs here\n";
        let issues = lint(text);
        let problems: Vec<_> = issues.iter().map(|i| (i.line, i.problem.clone())).collect();
        assert_eq!(
            problems,
            vec![
                (2, LintProblem::Duplicate { first_line: 1 }),
                (3, LintProblem::UnknownFeature("smashed".into())),
                (
                    4,
                    LintProblem::NotNormalized {
                        ngram: "Good Length".into(),
                        expected: "good length".into()
                    }
                ),
                (5, LintProblem::TooManyTokens("a good length".into())),
                (6, LintProblem::UnknownSide("side".into())),
                (7, LintProblem::MalformedLine),
            ]
        );
        assert!(FeatureLexicon::parse(text).is_err());
    }

    #[test]
    fn text_round_trip() {
        let lex = small();
        assert_eq!(FeatureLexicon::parse(&lex.to_text()).unwrap(), lex);
        assert_eq!(lex.len(), 5);
        assert_eq!(
            lex.bowling_definition(BowlingFeature::Short).into_iter().collect::<Vec<_>>(),
            ["short"]
        );
    }
}
