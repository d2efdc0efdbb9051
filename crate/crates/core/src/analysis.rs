//! Closed-form analysis of games A and B.
//!
//! Game B is a Markov chain on the payoff residue `x mod 3`. Its transition
//! matrix, stationary vector and long-run payoff rate are computed here,
//! together with the fairness condition and the piecewise-linear ratchet
//! potential that game B corresponds to.

use crate::error::{Error, Result};

/// Canonical residue of `x` modulo 3, always in `{0, 1, 2}`.
#[inline]
pub fn residue3(x: i64) -> usize {
    x.rem_euclid(3) as usize
}

fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Probability { name, value })
    }
}

/// Coin A: heads with probability `pa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameAParams {
    pa: f64,
}

impl GameAParams {
    pub fn new(pa: f64) -> Result<Self> {
        Ok(Self {
            pa: check_probability("pa", pa)?,
        })
    }

    pub fn pa(&self) -> f64 {
        self.pa
    }

    /// Expected payoff per play, `2 pa - 1`.
    pub fn drift(&self) -> f64 {
        2.0 * self.pa - 1.0
    }
}

/// Coins B0 (used when `x ≡ 0 mod 3`) and B1 (otherwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameBParams {
    p0: f64,
    p1: f64,
}

impl GameBParams {
    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        Ok(Self {
            p0: check_probability("p0", p0)?,
            p1: check_probability("p1", p1)?,
        })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    /// Heads probability of the coin game B flips at payoff `x`.
    #[inline]
    pub fn heads_at(&self, x: i64) -> f64 {
        if residue3(x) == 0 {
            self.p0
        } else {
            self.p1
        }
    }
}

/// Uniform subtraction applied to fair-game probabilities to make them losing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasOffset {
    pub epsilon: f64,
}

impl BiasOffset {
    pub fn new(epsilon: f64) -> Self {
        Self { epsilon }
    }

    pub fn apply(&self, p: f64) -> f64 {
        p - self.epsilon
    }

    /// Game A at `1/2 - ε`.
    pub fn game_a(&self) -> Result<GameAParams> {
        GameAParams::new(self.apply(0.5))
    }

    /// Game B at `(1/10 - ε, 3/4 - ε)`.
    pub fn game_b(&self) -> Result<GameBParams> {
        GameBParams::new(self.apply(0.1), self.apply(0.75))
    }
}

/// Column-stochastic 3×3 matrix on residues; `entries[i][j]` is the
/// probability of moving to residue `i` from residue `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix3 {
    entries: [[f64; 3]; 3],
}

impl TransitionMatrix3 {
    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.entries
    }

    pub fn get(&self, to: usize, from: usize) -> f64 {
        self.entries[to][from]
    }

    pub fn column(&self, from: usize) -> [f64; 3] {
        [
            self.entries[0][from],
            self.entries[1][from],
            self.entries[2][from],
        ]
    }

    pub fn apply(&self, v: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, row) in self.entries.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }
}

/// Stationary distribution over residues 0, 1, 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumVector {
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
}

impl EquilibriumVector {
    pub fn as_array(&self) -> [f64; 3] {
        [self.v0, self.v1, self.v2]
    }
}

pub fn build_transition_matrix(params: GameBParams) -> TransitionMatrix3 {
    let GameBParams { p0, p1 } = params;
    TransitionMatrix3 {
        entries: [
            [0.0, 1.0 - p1, p1],
            [p0, 0.0, 1.0 - p1],
            [1.0 - p0, p1, 0.0],
        ],
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

const SINGULAR_TOL: f64 = 1e-12;

/// Solves `(T - I) v = 0` with the last equation replaced by `Σ v = 1`.
pub fn stationary_distribution(t: &TransitionMatrix3) -> Result<EquilibriumVector> {
    let e = t.entries();
    let mut a = [[0.0; 3]; 3];
    for i in 0..2 {
        for j in 0..3 {
            a[i][j] = e[i][j] - if i == j { 1.0 } else { 0.0 };
        }
    }
    a[2] = [1.0, 1.0, 1.0];
    let rhs = [0.0, 0.0, 1.0];

    let det = det3(&a);
    if det.abs() < SINGULAR_TOL {
        return Err(Error::SingularChain { det });
    }
    // Cramer's rule; the system is tiny and well conditioned away from det = 0.
    let mut v = [0.0; 3];
    for (k, vk) in v.iter_mut().enumerate() {
        let mut ak = a;
        for i in 0..3 {
            ak[i][k] = rhs[i];
        }
        *vk = det3(&ak) / det;
    }
    Ok(EquilibriumVector {
        v0: v[0],
        v1: v[1],
        v2: v[2],
    })
}

/// Long-run expected payoff per play of game B,
/// `(2p0 - 1) v0 + (2p1 - 1)(v1 + v2)`.
pub fn long_run_rate_b(params: GameBParams) -> Result<f64> {
    let v = stationary_distribution(&build_transition_matrix(params))?;
    Ok((2.0 * params.p0 - 1.0) * v.v0 + (2.0 * params.p1 - 1.0) * (v.v1 + v.v2))
}

/// Determinant of the matrix whose singularity characterises a fair game B.
pub fn fairness_determinant(params: GameBParams) -> f64 {
    let GameBParams { p0, p1 } = params;
    det3(&[
        [-1.0, 1.0 - p1, p1],
        [p0, -1.0, 1.0 - p1],
        [2.0 * p0 - 1.0, 2.0 * p1 - 1.0, 2.0 * p1 - 1.0],
    ])
}

/// The `p0` that makes game B fair for the given `p1`.
pub fn fair_p0_of_p1(p1: f64) -> Result<f64> {
    check_probability("p1", p1)?;
    // 1 - 2p + 2p² has negative discriminant, so never zero.
    let p0 = (1.0 - 2.0 * p1 + p1 * p1) / (1.0 - 2.0 * p1 + 2.0 * p1 * p1);
    if (0.0..=1.0).contains(&p0) {
        Ok(p0)
    } else {
        Err(Error::NoFairGame { p1, p0 })
    }
}

/// Half-width `b` of the steep segment around each multiple of 3 that
/// makes the game-B potential continuous.
pub fn ratchet_break_b(params: GameBParams) -> Result<f64> {
    let GameBParams { p0, p1 } = params;
    if p0 >= 0.5 {
        return Err(Error::RatchetPrecondition("p0 < 1/2"));
    }
    if p1 <= 0.5 {
        return Err(Error::RatchetPrecondition("p1 > 1/2"));
    }
    if p1 >= 1.0 {
        return Err(Error::RatchetPrecondition("p1 < 1"));
    }
    if p1 >= (3.0 - 4.0 * p0) / 2.0 {
        return Err(Error::RatchetPrecondition("p1 < (3 - 4 p0) / 2"));
    }
    Ok(3.0 * (2.0 * p1 - 1.0) / (4.0 * (p1 - p0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialKind {
    Linear,
    /// 3-periodic piecewise-linear part built from a fair game B.
    Ratchet { fair: GameBParams, b: f64 },
}

/// Classical potential `V(x)`: a linear part `-slope_a · x` plus, for the
/// ratchet kind, the continuous periodic part anchored at `V(0) = 0`.
///
/// `scale` is a display factor only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPotential {
    pub kind: PotentialKind,
    pub slope_a: f64,
    pub scale: f64,
}

impl ClassicalPotential {
    pub const PERIOD: i64 = 3;

    /// `V_A(x) ∝ -(2pa - 1) x`.
    pub fn linear(a: GameAParams) -> Self {
        Self {
            kind: PotentialKind::Linear,
            slope_a: a.drift(),
            scale: 1.0,
        }
    }

    /// Fair-game ratchet plus the linear tilt `slope_a` (`2pa - 1` of the
    /// bias that was subtracted from the fair probabilities).
    pub fn ratchet(fair: GameBParams, slope_a: f64) -> Result<Self> {
        let b = ratchet_break_b(fair)?;
        Self::ratchet_with_break(fair, b, slope_a)
    }

    pub fn ratchet_with_break(fair: GameBParams, b: f64, slope_a: f64) -> Result<Self> {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::Breakpoint(b));
        }
        Ok(Self {
            kind: PotentialKind::Ratchet { fair, b },
            slope_a,
            scale: 1.0,
        })
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    /// Periodic part alone (zero for the linear kind).
    pub fn periodic_part(&self, x: f64) -> f64 {
        match self.kind {
            PotentialKind::Linear => 0.0,
            PotentialKind::Ratchet { fair, b } => {
                let inner = -(2.0 * fair.p0() - 1.0);
                let outer = -(2.0 * fair.p1() - 1.0);
                let period = Self::PERIOD as f64;
                let u = x - period * (x / period).round();
                if u.abs() <= b {
                    inner * u
                } else if u > b {
                    inner * b + outer * (u - b)
                } else {
                    -inner * b + outer * (u + b)
                }
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.periodic_part(x) - self.slope_a * x) * self.scale
    }
}

pub fn eval_classical_potential(pot: &ClassicalPotential, x: f64) -> f64 {
    pot.eval(x)
}
