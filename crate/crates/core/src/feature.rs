//! The closed batting and bowling feature vocabularies.
//!
//! Both enumerations carry a canonical ordering (their declaration order)
//! which doubles as the row/column index of a confrontation matrix.

use core::fmt;
use core::marker::PhantomData;
use core::str::FromStr;

use crate::record::Outcome;

/// Common surface shared by [`BattingFeature`] and [`BowlingFeature`].
pub trait Feature: Copy + Ord + fmt::Debug + 'static {
    /// Every value in canonical order.
    const ALL: &'static [Self];

    fn index(self) -> usize;

    fn label(self) -> &'static str;

    fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    fn from_label(label: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|f| f.label() == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BattingFeature {
    Run0,
    Run1,
    Run2,
    Run3,
    Run4,
    Run5,
    Run6,
    Out,
    Beaten,
    Defended,
    Attacked,
    FrontFoot,
    BackFoot,
    ThirdMan,
    SquareOff,
    LongOff,
    LongOn,
    SquareLeg,
    FineLeg,
}

impl BattingFeature {
    /// The batting feature an outcome maps onto.
    pub fn from_outcome(outcome: Outcome) -> Self {
        match outcome {
            Outcome::Out => BattingFeature::Out,
            Outcome::Runs(r) => match r {
                0 => BattingFeature::Run0,
                1 => BattingFeature::Run1,
                2 => BattingFeature::Run2,
                3 => BattingFeature::Run3,
                4 => BattingFeature::Run4,
                5 => BattingFeature::Run5,
                _ => BattingFeature::Run6,
            },
        }
    }

    pub fn is_outcome(self) -> bool {
        self.index() <= BattingFeature::Out.index()
    }

    pub fn category(self) -> Category {
        use BattingFeature::*;
        match self {
            Attacked | Beaten | Defended => Category::Response,
            Run0 | Run1 | Run2 | Run3 | Run4 | Run5 | Run6 | Out => Category::Outcome,
            FrontFoot | BackFoot => Category::Footwork,
            ThirdMan | SquareOff | LongOff | LongOn | SquareLeg | FineLeg => Category::ShotArea,
        }
    }
}

impl Feature for BattingFeature {
    const ALL: &'static [Self] = &[
        BattingFeature::Run0,
        BattingFeature::Run1,
        BattingFeature::Run2,
        BattingFeature::Run3,
        BattingFeature::Run4,
        BattingFeature::Run5,
        BattingFeature::Run6,
        BattingFeature::Out,
        BattingFeature::Beaten,
        BattingFeature::Defended,
        BattingFeature::Attacked,
        BattingFeature::FrontFoot,
        BattingFeature::BackFoot,
        BattingFeature::ThirdMan,
        BattingFeature::SquareOff,
        BattingFeature::LongOff,
        BattingFeature::LongOn,
        BattingFeature::SquareLeg,
        BattingFeature::FineLeg,
    ];

    fn index(self) -> usize {
        self as usize
    }

    fn label(self) -> &'static str {
        use BattingFeature::*;
        match self {
            Run0 => "0 run",
            Run1 => "1 run",
            Run2 => "2 run",
            Run3 => "3 run",
            Run4 => "4 run",
            Run5 => "5 run",
            Run6 => "6 run",
            Out => "out",
            Beaten => "beaten",
            Defended => "defended",
            Attacked => "attacked",
            FrontFoot => "front foot",
            BackFoot => "back foot",
            ThirdMan => "third man",
            SquareOff => "square off",
            LongOff => "long off",
            LongOn => "long on",
            SquareLeg => "square leg",
            FineLeg => "fine leg",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BowlingFeature {
    Good,
    Short,
    Full,
    Off,
    Leg,
    Middle,
    Spin,
    Swing,
    Fast,
    Slow,
    MoveIn,
    MoveOut,
}

impl BowlingFeature {
    /// Columns removed from a confrontation matrix when the opponents are
    /// restricted to one bowler class.
    pub const CLASS_DEPENDENT: [BowlingFeature; 4] = [
        BowlingFeature::Spin,
        BowlingFeature::Swing,
        BowlingFeature::Fast,
        BowlingFeature::Slow,
    ];

    pub fn is_class_dependent(self) -> bool {
        Self::CLASS_DEPENDENT.contains(&self)
    }
}

impl Feature for BowlingFeature {
    const ALL: &'static [Self] = &[
        BowlingFeature::Good,
        BowlingFeature::Short,
        BowlingFeature::Full,
        BowlingFeature::Off,
        BowlingFeature::Leg,
        BowlingFeature::Middle,
        BowlingFeature::Spin,
        BowlingFeature::Swing,
        BowlingFeature::Fast,
        BowlingFeature::Slow,
        BowlingFeature::MoveIn,
        BowlingFeature::MoveOut,
    ];

    fn index(self) -> usize {
        self as usize
    }

    fn label(self) -> &'static str {
        use BowlingFeature::*;
        match self {
            Good => "good",
            Short => "short",
            Full => "full",
            Off => "off",
            Leg => "leg",
            Middle => "middle",
            Spin => "spin",
            Swing => "swing",
            Fast => "fast",
            Slow => "slow",
            MoveIn => "move-in",
            MoveOut => "move-out",
        }
    }
}

macro_rules! display_and_parse {
    ($ty:ty, $what:literal) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }

        impl FromStr for $ty {
            type Err = UnknownFeature;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                <$ty as Feature>::from_label(s).ok_or(UnknownFeature { kind: $what })
            }
        }
    };
}

display_and_parse!(BattingFeature, "batting");
display_and_parse!(BowlingFeature, "bowling");

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} feature")]
pub struct UnknownFeature {
    pub kind: &'static str,
}

/// Partition of the batting features used for "other" rules and biplots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Response,
    Outcome,
    Footwork,
    ShotArea,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Response,
        Category::Outcome,
        Category::Footwork,
        Category::ShotArea,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Category::Response => "response",
            Category::Outcome => "outcome",
            Category::Footwork => "footwork",
            Category::ShotArea => "shot-area",
        }
    }

    /// Batting features belonging to this category, in canonical order.
    pub fn members(self) -> impl Iterator<Item = BattingFeature> {
        BattingFeature::ALL
            .iter()
            .copied()
            .filter(move |f| f.category() == self)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Category {
    type Err = UnknownFeature;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "response" => Ok(Category::Response),
            "outcome" => Ok(Category::Outcome),
            "footwork" => Ok(Category::Footwork),
            "shot-area" | "shot_area" | "shotarea" => Ok(Category::ShotArea),
            _ => Err(UnknownFeature { kind: "category" }),
        }
    }
}

/// A set of features backed by a bitmask over the canonical index.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeatureSet<F> {
    bits: u32,
    _marker: PhantomData<F>,
}

impl<F: Feature> FeatureSet<F> {
    pub const fn empty() -> Self {
        FeatureSet {
            bits: 0,
            _marker: PhantomData,
        }
    }

    pub fn insert(&mut self, feature: F) {
        self.bits |= 1 << feature.index();
    }

    pub fn contains(&self, feature: F) -> bool {
        self.bits & (1 << feature.index()) != 0
    }

    pub fn union_with(&mut self, other: Self) {
        self.bits |= other.bits;
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = F> + Clone + '_ {
        F::ALL.iter().copied().filter(move |f| self.contains(*f))
    }
}

impl<F: Feature> Default for FeatureSet<F> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<F: Feature> FromIterator<F> for FeatureSet<F> {
    fn from_iter<T: IntoIterator<Item = F>>(iter: T) -> Self {
        let mut set = Self::empty();
        for f in iter {
            set.insert(f);
        }
        set
    }
}

impl<F: Feature> fmt::Debug for FeatureSet<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub type BatSet = FeatureSet<BattingFeature>;
pub type BowlSet = FeatureSet<BowlingFeature>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_sizes() {
        assert_eq!(BattingFeature::ALL.len(), 19);
        assert_eq!(BowlingFeature::ALL.len(), 12);
    }

    #[test]
    fn canonical_index_matches_position() {
        for (i, f) in BattingFeature::ALL.iter().enumerate() {
            assert_eq!(f.index(), i);
            assert_eq!(BattingFeature::from_label(f.label()), Some(*f));
        }
        for (i, f) in BowlingFeature::ALL.iter().enumerate() {
            assert_eq!(f.index(), i);
            assert_eq!(f.label().parse::<BowlingFeature>(), Ok(*f));
        }
    }

    #[test]
    fn category_partition() {
        let total: usize = Category::ALL.iter().map(|c| c.members().count()).sum();
        assert_eq!(total, 19);
        assert_eq!(Category::Response.members().count(), 3);
        assert_eq!(Category::Outcome.members().count(), 8);
        assert_eq!(Category::Footwork.members().count(), 2);
        assert_eq!(Category::ShotArea.members().count(), 6);
    }

    #[test]
    fn set_ops() {
        let mut s = BowlSet::empty();
        s.insert(BowlingFeature::MoveOut);
        s.insert(BowlingFeature::Good);
        s.insert(BowlingFeature::Good);
        assert_eq!(s.len(), 2);
        let v: alloc::vec::Vec<_> = s.iter().collect();
        assert_eq!(v, [BowlingFeature::Good, BowlingFeature::MoveOut]);
    }
}
