//! Exact evolution of the payoff distribution under games A, B and
//! flashing schedules of the two.

use std::fmt;
use std::str::FromStr;

use crate::analysis::{BiasOffset, GameAParams, GameBParams};
use crate::error::{Error, Result};

/// Probability weights over a contiguous window of integer payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffDistribution {
    offset: i64,
    weights: Vec<f64>,
    time: u64,
}

impl PayoffDistribution {
    /// Builds a distribution from raw weights. Weights must be finite and
    /// nonnegative and sum to 1 within 1e-12.
    pub fn from_weights(offset: i64, weights: Vec<f64>, time: u64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty window".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidDistribution(format!("weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(Self {
            offset,
            weights,
            time,
        })
    }

    pub(crate) fn from_raw(offset: i64, weights: Vec<f64>, time: u64) -> Self {
        Self {
            offset,
            weights,
            time,
        }
    }

    pub fn delta(x0: i64) -> Self {
        Self::from_raw(x0, vec![1.0], 0)
    }

    /// Payoff of the first window cell.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// Inclusive payoff range covered by the window.
    pub fn window(&self) -> (i64, i64) {
        (self.offset, self.offset + self.weights.len() as i64 - 1)
    }

    /// `p(x)`, zero outside the window.
    pub fn prob(&self, x: i64) -> f64 {
        let i = x - self.offset;
        if i < 0 {
            return 0.0;
        }
        self.weights.get(i as usize).copied().unwrap_or(0.0)
    }

    /// `(x, p(x))` over the window in ascending `x`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| (self.offset + i as i64, w))
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Each side of the origin is summed outward, so a mirror-symmetric
    /// distribution has a mean of exactly zero.
    pub fn expected_payoff(&self) -> f64 {
        let (lo, hi) = self.window();
        let up: f64 = (lo.max(1)..=hi).map(|x| x as f64 * self.prob(x)).sum();
        let down: f64 = ((-hi).max(1)..=-lo).map(|x| x as f64 * self.prob(-x)).sum();
        up - down
    }

    pub fn variance(&self) -> f64 {
        let mean = self.expected_payoff();
        // Centred second pass; Σx²p - mean² cancels badly once the mean drifts.
        self.iter()
            .map(|(x, p)| {
                let d = x as f64 - mean;
                d * d * p
            })
            .sum()
    }
}

pub fn delta_init(x0: i64) -> PayoffDistribution {
    PayoffDistribution::delta(x0)
}

pub fn expected_payoff(dist: &PayoffDistribution) -> f64 {
    dist.expected_payoff()
}

pub fn variance(dist: &PayoffDistribution) -> f64 {
    dist.variance()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameLabel {
    A,
    B,
}

impl GameLabel {
    pub fn as_char(self) -> char {
        match self {
            GameLabel::A => 'A',
            GameLabel::B => 'B',
        }
    }
}

impl TryFrom<char> for GameLabel {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'A' | 'a' => Ok(GameLabel::A),
            'B' | 'b' => Ok(GameLabel::B),
            other => Err(Error::UnknownLabel(other)),
        }
    }
}

/// A nonempty word over {A, B} applied cyclically, one letter per play.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlashSchedule {
    word: Vec<GameLabel>,
}

impl FlashSchedule {
    pub fn new(word: Vec<GameLabel>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptySchedule);
        }
        Ok(Self { word })
    }

    pub fn word(&self) -> &[GameLabel] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Game used for play number `k` (zero-based).
    pub fn label_at(&self, k: u64) -> GameLabel {
        self.word[(k % self.word.len() as u64) as usize]
    }
}

impl FromStr for FlashSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let word = s
            .trim()
            .chars()
            .map(GameLabel::try_from)
            .collect::<Result<Vec<_>>>()?;
        Self::new(word)
    }
}

impl fmt::Display for FlashSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.word {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// The coins of both games.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameSuite {
    pub a: GameAParams,
    pub b: GameBParams,
}

impl GameSuite {
    pub fn new(a: GameAParams, b: GameBParams) -> Self {
        Self { a, b }
    }

    /// `pa = 1/2 - ε`, `p0 = 1/10 - ε`, `p1 = 3/4 - ε`.
    pub fn with_bias(epsilon: f64) -> Result<Self> {
        let bias = BiasOffset::new(epsilon);
        Ok(Self {
            a: bias.game_a()?,
            b: bias.game_b()?,
        })
    }

    #[inline]
    pub fn heads(&self, label: GameLabel, x: i64) -> f64 {
        match label {
            GameLabel::A => self.a.pa(),
            GameLabel::B => self.b.heads_at(x),
        }
    }
}

/// One play: the coin is chosen from the payoff before the flip, heads
/// moves `x → x + 1`, tails `x → x - 1`.
pub fn step(dist: &PayoffDistribution, suite: &GameSuite, label: GameLabel) -> PayoffDistribution {
    let n = dist.weights.len();
    let mut next = vec![0.0; n + 2];
    for (i, &m) in dist.weights.iter().enumerate() {
        if m == 0.0 {
            continue;
        }
        let x = dist.offset + i as i64;
        let up = suite.heads(label, x) * m;
        next[i + 2] += up;
        next[i] += m - up;
    }
    PayoffDistribution::from_raw(dist.offset - 1, next, dist.time + 1)
}

/// `(time, ⟨x⟩)` pairs.
pub type Series = Vec<(u64, f64)>;

/// Applies `t` plays cycling through `sched`, starting from its first
/// letter. The series holds `t + 1` points starting at the initial time.
pub fn evolve(
    dist0: &PayoffDistribution,
    suite: &GameSuite,
    sched: &FlashSchedule,
    t: u64,
) -> (PayoffDistribution, Series) {
    let mut series = Vec::with_capacity(t as usize + 1);
    let mut dist = dist0.clone();
    series.push((dist.time, dist.expected_payoff()));
    for k in 0..t {
        dist = step(&dist, suite, sched.label_at(k));
        series.push((dist.time, dist.expected_payoff()));
    }
    (dist, series)
}

/// Three-time filter `(p(t-1) + 2 p(t) + p(t+1)) / 4` that removes the
/// even/odd alternation of single-step lattice dynamics.
pub fn parity_smooth(
    prev: &PayoffDistribution,
    cur: &PayoffDistribution,
    next: &PayoffDistribution,
) -> Result<PayoffDistribution> {
    if cur.time != prev.time + 1 || next.time != cur.time + 1 {
        return Err(Error::NonConsecutive(prev.time, cur.time, next.time));
    }
    let lo = prev.window().0.min(cur.window().0).min(next.window().0);
    let hi = prev.window().1.max(cur.window().1).max(next.window().1);
    let weights = (lo..=hi)
        .map(|x| 0.25 * (prev.prob(x) + 2.0 * cur.prob(x) + next.prob(x)))
        .collect();
    Ok(PayoffDistribution::from_raw(lo, weights, cur.time))
}
