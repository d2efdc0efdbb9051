//! Probabilistic lattice gas: a particle carrying a direction bit, scattered
//! stochastically and then advected one site along its direction.

use crate::classical::PayoffDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Left => -1,
            Direction::Right => 1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

/// Probability of keeping the current direction, keyed by that direction.
///
/// The symmetric form is the usual correlated walk; unequal values give a
/// walk whose rules are not reflection symmetric, i.e. a biased one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterProb {
    keep_left: f64,
    keep_right: f64,
}

impl ScatterProb {
    pub fn symmetric(p: f64) -> Result<Self> {
        Self::asymmetric(p, p)
    }

    pub fn asymmetric(keep_left: f64, keep_right: f64) -> Result<Self> {
        for (name, value) in [("keep_left", keep_left), ("keep_right", keep_right)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Probability { name, value });
            }
        }
        Ok(Self {
            keep_left,
            keep_right,
        })
    }

    pub fn keep(&self, dir: Direction) -> f64 {
        match dir {
            Direction::Left => self.keep_left,
            Direction::Right => self.keep_right,
        }
    }
}

/// Probabilities over `(site, direction)`; the two directions are stored
/// as parallel lanes over the same site window.
#[derive(Debug, Clone, PartialEq)]
pub struct LgaDensity {
    offset: i64,
    left: Vec<f64>,
    right: Vec<f64>,
    time: u64,
}

impl LgaDensity {
    pub fn delta(x: i64, dir: Direction) -> Self {
        let (l, r) = match dir {
            Direction::Left => (1.0, 0.0),
            Direction::Right => (0.0, 1.0),
        };
        Self {
            offset: x,
            left: vec![l],
            right: vec![r],
            time: 0,
        }
    }

    /// Half the mass in each direction at site `x`.
    pub fn symmetric(x: i64) -> Self {
        Self {
            offset: x,
            left: vec![0.5],
            right: vec![0.5],
            time: 0,
        }
    }

    pub fn from_lanes(offset: i64, left: Vec<f64>, right: Vec<f64>, time: u64) -> Result<Self> {
        if left.len() != right.len() || left.is_empty() {
            return Err(Error::InvalidDistribution("lane lengths differ or are empty".into()));
        }
        if left.iter().chain(&right).any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution("negative or non-finite weight".into()));
        }
        let total: f64 = left.iter().chain(&right).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(Self {
            offset,
            left,
            right,
            time,
        })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn get(&self, x: i64, dir: Direction) -> f64 {
        let i = x - self.offset;
        if i < 0 {
            return 0.0;
        }
        let lane = match dir {
            Direction::Left => &self.left,
            Direction::Right => &self.right,
        };
        lane.get(i as usize).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.left.iter().chain(&self.right).sum()
    }

    /// Image under `(x, α) → (-x, -α)`.
    pub fn reflected(&self) -> Self {
        let mut left = self.right.clone();
        let mut right = self.left.clone();
        left.reverse();
        right.reverse();
        Self {
            offset: -(self.offset + self.len() as i64 - 1),
            left,
            right,
            time: self.time,
        }
    }
}

/// Scatter (keep with `p`, reverse with `1 - p`), then advect along the
/// new direction.
pub fn crw_step(state: &LgaDensity, sp: &ScatterProb) -> LgaDensity {
    let n = state.len();
    let mut left = vec![0.0; n + 2];
    let mut right = vec![0.0; n + 2];
    let (kl, kr) = (sp.keep(Direction::Left), sp.keep(Direction::Right));
    // New window starts one site lower: old index i is new index i + 1.
    for i in 0..n {
        let ml = state.left[i];
        if ml != 0.0 {
            let keep = kl * ml;
            left[i] += keep;
            right[i + 2] += ml - keep;
        }
        let mr = state.right[i];
        if mr != 0.0 {
            let keep = kr * mr;
            right[i + 2] += keep;
            left[i] += mr - keep;
        }
    }
    LgaDensity {
        offset: state.offset - 1,
        left,
        right,
        time: state.time + 1,
    }
}

pub fn crw_evolve(state0: &LgaDensity, sp: &ScatterProb, t: u64) -> LgaDensity {
    (0..t).fold(state0.clone(), |s, _| crw_step(&s, sp))
}

/// Site marginal, summing the two directions.
pub fn site_marginal(state: &LgaDensity) -> PayoffDistribution {
    let weights = state
        .left
        .iter()
        .zip(&state.right)
        .map(|(l, r)| l + r)
        .collect();
    PayoffDistribution::from_raw(state.offset, weights, state.time)
}

/// Mean and variance of the site marginal.
pub fn crw_moments(state: &LgaDensity) -> (f64, f64) {
    let m = site_marginal(state);
    (m.expected_payoff(), m.variance())
}
