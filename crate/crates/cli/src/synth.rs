//! Seeded synthetic commentary with known feature co-occurrence statistics.
//!
//! Each batsman has affinities that raise the odds of attacking or being
//! beaten by particular bowling features; the resulting rules are known in
//! advance, which makes the generator useful for end-to-end checks. Texts
//! are built only from phrases of the shipped lexicon, so the features a
//! text maps to are exactly the ones the generator chose to mention.

use chrono::{Days, NaiveDate};
use cricket_rules_core::{BattingFeature, BowlerClass, BowlingFeature, DeliveryRecord, Outcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use BowlingFeature as W;

#[derive(Debug, Clone)]
pub struct BatsmanProfile {
    pub name: &'static str,
    /// Log-odds boost for attacking a delivery carrying the feature.
    pub attacks: &'static [(BowlingFeature, f64)],
    /// Log-odds boost for being beaten by it.
    pub beaten_by: &'static [(BowlingFeature, f64)],
}

#[derive(Debug, Clone)]
pub struct BowlerProfile {
    pub name: &'static str,
    pub class: BowlerClass,
    pub pace: &'static [(BowlingFeature, f64)],
    pub length: &'static [(BowlingFeature, f64)],
    pub line: &'static [(BowlingFeature, f64)],
    /// Weights for no movement, move-in, move-out.
    pub movement: [f64; 3],
}

pub const BATSMEN: &[BatsmanProfile] = &[
    BatsmanProfile {
        name: "Smith",
        attacks: &[(W::Slow, 1.5), (W::Short, 1.2), (W::Middle, 1.0)],
        beaten_by: &[(W::Swing, 1.5), (W::MoveOut, 1.2), (W::MoveIn, 1.0)],
    },
    BatsmanProfile {
        name: "Warner",
        attacks: &[(W::Short, 1.3), (W::Full, 1.0), (W::Off, 0.8)],
        beaten_by: &[(W::Spin, 1.2), (W::MoveOut, 1.0), (W::Good, 0.8)],
    },
    BatsmanProfile {
        name: "Root",
        attacks: &[(W::Spin, 1.0), (W::Leg, 1.0), (W::Full, 0.8)],
        beaten_by: &[(W::Short, 1.2), (W::Fast, 1.0), (W::MoveIn, 0.8)],
    },
    BatsmanProfile {
        name: "Kohli",
        attacks: &[(W::Full, 1.3), (W::Off, 1.0), (W::Fast, 0.6)],
        beaten_by: &[(W::MoveOut, 1.4), (W::Swing, 1.0), (W::Good, 0.6)],
    },
];

pub const BOWLERS: &[BowlerProfile] = &[
    BowlerProfile {
        name: "Anderson",
        class: BowlerClass::Fast,
        pace: &[(W::Fast, 0.3), (W::Swing, 0.6), (W::Slow, 0.1)],
        length: &[(W::Good, 0.55), (W::Short, 0.15), (W::Full, 0.3)],
        line: &[(W::Off, 0.6), (W::Middle, 0.25), (W::Leg, 0.15)],
        movement: [0.3, 0.3, 0.4],
    },
    BowlerProfile {
        name: "Broad",
        class: BowlerClass::Fast,
        pace: &[(W::Fast, 0.6), (W::Swing, 0.3), (W::Slow, 0.1)],
        length: &[(W::Good, 0.45), (W::Short, 0.35), (W::Full, 0.2)],
        line: &[(W::Off, 0.5), (W::Middle, 0.3), (W::Leg, 0.2)],
        movement: [0.5, 0.3, 0.2],
    },
    BowlerProfile {
        name: "Rabada",
        class: BowlerClass::Fast,
        pace: &[(W::Fast, 0.7), (W::Swing, 0.25), (W::Slow, 0.05)],
        length: &[(W::Good, 0.45), (W::Short, 0.3), (W::Full, 0.25)],
        line: &[(W::Off, 0.5), (W::Middle, 0.35), (W::Leg, 0.15)],
        movement: [0.4, 0.35, 0.25],
    },
    BowlerProfile {
        name: "Lyon",
        class: BowlerClass::Spin,
        pace: &[(W::Spin, 0.8), (W::Slow, 0.2)],
        length: &[(W::Good, 0.45), (W::Short, 0.15), (W::Full, 0.4)],
        line: &[(W::Off, 0.55), (W::Middle, 0.3), (W::Leg, 0.15)],
        movement: [0.6, 0.2, 0.2],
    },
    BowlerProfile {
        name: "Ashwin",
        class: BowlerClass::Spin,
        pace: &[(W::Spin, 0.7), (W::Slow, 0.3)],
        length: &[(W::Good, 0.5), (W::Short, 0.1), (W::Full, 0.4)],
        line: &[(W::Off, 0.4), (W::Middle, 0.35), (W::Leg, 0.25)],
        movement: [0.5, 0.3, 0.2],
    },
];

fn bowling_phrases(f: BowlingFeature) -> &'static [&'static str] {
    match f {
        W::Good => &["good length", "length ball", "nagging", "probing"],
        W::Short => &["short ball", "bouncer", "short of a length", "banged in"],
        W::Full => &["full", "yorker", "half-volley", "pitched up"],
        W::Off => &["outside off", "off stump", "fourth stump", "wide outside"],
        W::Leg => &["leg stump", "on the pads", "down leg", "drifting down"],
        W::Middle => &["middle stump", "straight one", "middle"],
        W::Spin => &["spins", "turns sharply", "flighted", "googly"],
        W::Swing => &["swings", "late swing", "swinging"],
        W::Fast => &["quick", "raw pace", "express"],
        W::Slow => &["slower ball", "loopy", "slower one"],
        W::MoveIn => &["angling in", "nips back", "jags in", "tails in"],
        W::MoveOut => &["moves away", "nips away", "shapes away", "straightens"],
    }
}

fn batting_phrases(f: BattingFeature) -> &'static [&'static str] {
    use BattingFeature as B;
    match f {
        B::Attacked => &["punches it", "drives", "pulls", "flicks", "lofted", "hammered"],
        B::Beaten => &["beaten", "outside edge", "plays and misses", "edged", "false shot"],
        B::Defended => &["defends", "blocks", "dead bat", "solid defence"],
        B::FrontFoot => &["on the front foot", "gets forward", "lunges"],
        B::BackFoot => &["on the back foot", "rocks back", "goes back"],
        B::ThirdMan => &["towards third man", "past gully"],
        B::SquareOff => &["through point", "to the covers", "past cover point"],
        B::LongOff => &["towards long off", "down to mid off"],
        B::LongOn => &["towards long on", "to mid on"],
        B::SquareLeg => &["through midwicket", "to square leg"],
        B::FineLeg => &["towards fine leg", "down to fine leg"],
        _ => &[],
    }
}

const FILLERS: &[&str] = &["", "lovely cricket", "the crowd enjoys that", "a tidy over so far", "what a contest"];

fn pick<T: Copy>(rng: &mut ChaCha8Rng, weighted: &[(T, f64)]) -> T {
    let total: f64 = weighted.iter().map(|w| w.1).sum();
    let mut x = rng.random::<f64>() * total;
    for &(v, w) in weighted {
        if x < w {
            return v;
        }
        x -= w;
    }
    weighted[weighted.len() - 1].0
}

fn one<'a>(rng: &mut ChaCha8Rng, options: &[&'a str]) -> &'a str {
    options[rng.random_range(0..options.len())]
}

/// What the generator intends a delivery to say.
#[derive(Debug, Clone, PartialEq)]
pub struct Delivery {
    pub bowling: Vec<BowlingFeature>,
    /// Mentioned bowling features (a subset of `bowling`).
    pub mentioned: Vec<BowlingFeature>,
    pub batting: Vec<BattingFeature>,
    pub outcome: Outcome,
    pub text: String,
}

fn affinity(list: &[(BowlingFeature, f64)], features: &[BowlingFeature]) -> f64 {
    list.iter().filter(|(f, _)| features.contains(f)).map(|(_, w)| w).sum()
}

pub fn delivery(rng: &mut ChaCha8Rng, bat: &BatsmanProfile, bowl: &BowlerProfile) -> Delivery {
    use BattingFeature as B;
    let mut bowling = vec![pick(rng, bowl.length), pick(rng, bowl.line), pick(rng, bowl.pace)];
    match pick(rng, &[(0, bowl.movement[0]), (1, bowl.movement[1]), (2, bowl.movement[2])]) {
        1 => bowling.push(W::MoveIn),
        2 => bowling.push(W::MoveOut),
        _ => {}
    }

    let w_attack = affinity(bat.attacks, &bowling).exp();
    let w_beaten = 0.5 * affinity(bat.beaten_by, &bowling).exp();
    let response = pick(rng, &[(B::Attacked, w_attack), (B::Beaten, w_beaten), (B::Defended, 1.2)]);
    let outcome = match response {
        B::Attacked => pick(
            rng,
            &[
                (Outcome::Runs(4), 0.35),
                (Outcome::Runs(1), 0.25),
                (Outcome::Runs(2), 0.1),
                (Outcome::Runs(6), 0.1),
                (Outcome::Runs(0), 0.15),
                (Outcome::Runs(3), 0.05),
            ],
        ),
        B::Beaten => pick(rng, &[(Outcome::Runs(0), 0.85), (Outcome::Out, 0.15)]),
        _ => pick(rng, &[(Outcome::Runs(0), 0.85), (Outcome::Runs(1), 0.15)]),
    };

    let mut batting = vec![response];
    if rng.random_bool(0.6) {
        let back = if bowling.contains(&W::Short) {
            0.75
        } else if bowling.contains(&W::Full) {
            0.2
        } else {
            0.5
        };
        batting.push(if rng.random_bool(back) { B::BackFoot } else { B::FrontFoot });
    }
    if matches!(outcome, Outcome::Runs(r) if r > 0) && rng.random_bool(0.7) {
        let areas: &[(BattingFeature, f64)] = if bowling.contains(&W::Off) {
            &[(B::ThirdMan, 0.3), (B::SquareOff, 0.4), (B::LongOff, 0.3)]
        } else if bowling.contains(&W::Leg) {
            &[(B::SquareLeg, 0.4), (B::FineLeg, 0.35), (B::LongOn, 0.25)]
        } else {
            &[(B::LongOn, 0.35), (B::LongOff, 0.35), (B::SquareLeg, 0.3)]
        };
        batting.push(pick(rng, areas));
    }

    let mut mentioned: Vec<BowlingFeature> = bowling.iter().copied().filter(|_| rng.random_bool(0.85)).collect();
    if mentioned.is_empty() {
        mentioned.push(bowling[0]);
    }
    let mut parts: Vec<&str> = mentioned.iter().map(|&f| one(rng, bowling_phrases(f))).collect();
    parts.extend(batting.iter().map(|&f| one(rng, batting_phrases(f))));
    let filler = one(rng, FILLERS);
    if !filler.is_empty() {
        parts.push(filler);
    }
    let mut text = parts.join(", ");
    text.push('.');
    if let Some(first) = text.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    Delivery {
        bowling,
        mentioned,
        batting,
        outcome,
        text,
    }
}

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub seed: u64,
    pub batsmen: Vec<&'static str>,
    /// Inclusive date range of each epoch.
    pub epochs: Vec<(NaiveDate, NaiveDate)>,
    /// Deliveries per batsman per epoch.
    pub per_epoch: usize,
}

impl SynthConfig {
    /// Three seasons of history followed by one final year; the final
    /// year falls entirely after the default holdout cutoff.
    pub fn two_epoch(seed: u64, per_epoch: usize) -> Self {
        let d = |y, m, d| NaiveDate::from_ymd_opt(y, m, d).expect("valid date");
        SynthConfig {
            seed,
            batsmen: BATSMEN.iter().map(|b| b.name).collect(),
            epochs: vec![(d(2015, 1, 1), d(2017, 12, 30)), (d(2018, 1, 1), d(2018, 12, 31))],
            per_epoch,
        }
    }
}

/// Generate records sorted by date, batsman, then ball.
pub fn generate(cfg: &SynthConfig) -> Vec<DeliveryRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut records = Vec::new();
    for (e, &(start, end)) in cfg.epochs.iter().enumerate() {
        let span = (end - start).num_days().max(0) as u64;
        for name in &cfg.batsmen {
            let bat = BATSMEN.iter().find(|b| b.name == *name).expect("known batsman");
            for i in 0..cfg.per_epoch {
                let offset = if cfg.per_epoch > 1 {
                    i as u64 * span / (cfg.per_epoch as u64 - 1)
                } else {
                    0
                };
                let date = start + Days::new(offset);
                let bowl = &BOWLERS[rng.random_range(0..BOWLERS.len())];
                let d = delivery(&mut rng, bat, bowl);
                let speed = match bowl.class {
                    BowlerClass::Fast => Some(rng.random_range(128..=152) as f64),
                    BowlerClass::Spin => None,
                };
                let dismissal_kind = (d.outcome == Outcome::Out)
                    .then(|| ["caught", "bowled", "lbw"][rng.random_range(0..3)].to_string());
                records.push(DeliveryRecord {
                    match_id: format!("e{}-{}-{}", e + 1, date.format("%Y%m%d"), name.to_lowercase()),
                    date,
                    innings: 1 + (i / 240 % 2) as u8,
                    day: None,
                    session: None,
                    over: (i / 6 % 90) as u32,
                    ball_in_over: (i % 6) as u32 + 1,
                    bowler: bowl.name.to_string(),
                    batsman: name.to_string(),
                    outcome: d.outcome,
                    dismissal_kind,
                    speed_kph: speed,
                    text: d.text,
                    short_text: None,
                });
            }
        }
    }
    records.sort_by(|a, b| (a.date, &a.batsman).cmp(&(b.date, &b.batsman)));
    records
}

/// Roster text (`player<TAB>class`) for every synthetic bowler.
pub fn roster_text() -> String {
    BOWLERS.iter().map(|b| format!("{}\t{}\n", b.name, b.class.label())).collect()
}
