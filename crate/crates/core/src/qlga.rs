//! Single-particle quantum lattice gas.
//!
//! A timestep is a unitary scatter that mixes the two directions at each
//! site, an advection that moves each direction lane one site along its
//! direction, and a site-dependent phase `e^{-iV(x)}`. The scatter and
//! advection order is fixed; where the phase sits is a [`PhaseOrder`].

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::analysis::residue3;
use crate::classical::{GameLabel, PayoffDistribution, Series};
use crate::crw::Direction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterAngle {
    pub theta: f64,
}

impl ScatterAngle {
    pub fn new(theta: f64) -> Self {
        Self { theta }
    }

    /// `θ = π/4`: every scattering amplitude has the same magnitude.
    pub fn unbiased() -> Self {
        Self::new(PI / 4.0)
    }
}

/// `(cos θ, i sin θ)`: the diagonal and off-diagonal entries of the
/// symmetric 2×2 scattering matrix.
pub fn scatter_coefficients(angle: ScatterAngle) -> (Complex64, Complex64) {
    let (s, c) = angle.theta.sin_cos();
    (Complex64::new(c, 0.0), Complex64::new(0.0, s))
}

/// Where the phase multiplication sits inside one timestep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseOrder {
    /// Phase, scatter, advect.
    Pre,
    /// Scatter, phase, advect.
    Mid,
    /// Scatter, advect, phase at the destination site.
    Post,
}

impl PhaseOrder {
    pub const ALL: [PhaseOrder; 3] = [PhaseOrder::Post, PhaseOrder::Pre, PhaseOrder::Mid];

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseOrder::Pre => "pre",
            PhaseOrder::Mid => "mid",
            PhaseOrder::Post => "post",
        }
    }
}

impl fmt::Display for PhaseOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhaseOrder {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pre" => Ok(PhaseOrder::Pre),
            "mid" => Ok(PhaseOrder::Mid),
            "post" => Ok(PhaseOrder::Post),
            other => Err(format!("unknown phase order {other:?} (expected pre, mid or post)")),
        }
    }
}

/// Relative phase of the two amplitudes in the symmetric initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitPhase {
    /// `(|0,-1⟩ + |0,+1⟩)/√2`.
    InPhase,
    /// `(|0,-1⟩ - |0,+1⟩)/√2`.
    AntiPhase,
}

impl InitPhase {
    pub const ALL: [InitPhase; 2] = [InitPhase::InPhase, InitPhase::AntiPhase];

    pub fn as_str(self) -> &'static str {
        match self {
            InitPhase::InPhase => "in-phase",
            InitPhase::AntiPhase => "anti-phase",
        }
    }
}

impl fmt::Display for InitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InitPhase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "in-phase" => Ok(InitPhase::InPhase),
            "anti-phase" => Ok(InitPhase::AntiPhase),
            other => Err(format!("unknown initial phase {other:?}")),
        }
    }
}

/// Potential entering the step as the phase `e^{-iV(x)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QPotential {
    Zero,
    Constant(f64),
    /// `V(x) = slope · x`.
    Linear { slope: f64 },
    /// `V(x) = level · (1 - (x mod 3)/2) + slope · x`.
    Ratchet { level: f64, slope: f64 },
}

impl QPotential {
    pub const DEFAULT_SLOPE: f64 = 2.0 * PI / 5000.0;
    pub const DEFAULT_LEVEL: f64 = PI / 3.0;

    /// `V_A(x) = 2π x / 5000`.
    pub fn linear_a() -> Self {
        QPotential::Linear {
            slope: Self::DEFAULT_SLOPE,
        }
    }

    /// `V_B(x) = (π/3)(1 - (x mod 3)/2) + V_A(x)`.
    pub fn ratchet_b() -> Self {
        QPotential::Ratchet {
            level: Self::DEFAULT_LEVEL,
            slope: Self::DEFAULT_SLOPE,
        }
    }

    #[inline]
    pub fn eval(&self, x: i64) -> f64 {
        match *self {
            QPotential::Zero => 0.0,
            QPotential::Constant(c) => c,
            QPotential::Linear { slope } => slope * x as f64,
            QPotential::Ratchet { level, slope } => {
                level * (1.0 - 0.5 * residue3(x) as f64) + slope * x as f64
            }
        }
    }

    #[inline]
    pub fn phase(&self, x: i64) -> Complex64 {
        Complex64::from_polar(1.0, -self.eval(x))
    }

    /// Adds a constant to the potential.
    pub fn shifted(&self, c: f64) -> ShiftedPotential {
        ShiftedPotential { base: *self, shift: c }
    }
}

/// A potential plus a constant; only the global phase differs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedPotential {
    base: QPotential,
    shift: f64,
}

impl ShiftedPotential {
    pub fn eval(&self, x: i64) -> f64 {
        self.base.eval(x) + self.shift
    }
}

/// Cyclic word of potentials, one per timestep. `start` is the word index
/// used on the first step.
#[derive(Debug, Clone, PartialEq)]
pub struct QSchedule {
    word: Vec<QPotential>,
    start: usize,
}

impl QSchedule {
    pub fn new(word: Vec<QPotential>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptySchedule);
        }
        Ok(Self { word, start: 0 })
    }

    pub fn constant(pot: QPotential) -> Self {
        Self {
            word: vec![pot],
            start: 0,
        }
    }

    /// Maps a word over {A, B} onto the two potentials.
    pub fn from_labels(labels: &str, a: QPotential, b: QPotential) -> Result<Self> {
        let word = labels
            .trim()
            .chars()
            .map(|c| {
                GameLabel::try_from(c).map(|l| match l {
                    GameLabel::A => a,
                    GameLabel::B => b,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(word)
    }

    pub fn with_start(mut self, start: usize) -> Self {
        self.start = start % self.word.len();
        self
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn word(&self) -> &[QPotential] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    fn index_at(&self, k: u64) -> usize {
        ((k + self.start as u64) % self.word.len() as u64) as usize
    }

    pub fn potential_at(&self, k: u64) -> &QPotential {
        &self.word[self.index_at(k)]
    }
}

/// Amplitudes over `(site, direction)`, one lane per direction.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    offset: i64,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
    time: u64,
}

impl QState {
    pub fn delta(x: i64, dir: Direction) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let (l, r) = match dir {
            Direction::Left => (one, zero),
            Direction::Right => (zero, one),
        };
        Self {
            offset: x,
            left: vec![l],
            right: vec![r],
            time: 0,
        }
    }

    /// Equal-weight superposition of both directions at the origin.
    pub fn symmetric_init(phase: InitPhase) -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let r = match phase {
            InitPhase::InPhase => a,
            InitPhase::AntiPhase => -a,
        };
        Self {
            offset: 0,
            left: vec![a],
            right: vec![r],
            time: 0,
        }
    }

    pub fn from_lanes(
        offset: i64,
        left: Vec<Complex64>,
        right: Vec<Complex64>,
        time: u64,
    ) -> Result<Self> {
        if left.len() != right.len() || left.is_empty() {
            return Err(Error::InvalidDistribution("lane lengths differ or are empty".into()));
        }
        let s = Self {
            offset,
            left,
            right,
            time,
        };
        let n = s.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("norm² {n}")));
        }
        Ok(s)
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

    pub fn window(&self) -> (i64, i64) {
        (self.offset, self.offset + self.len() as i64 - 1)
    }

    pub fn amplitude(&self, x: i64, dir: Direction) -> Complex64 {
        let i = x - self.offset;
        let lane = match dir {
            Direction::Left => &self.left,
            Direction::Right => &self.right,
        };
        if i < 0 {
            return Complex64::new(0.0, 0.0);
        }
        lane.get(i as usize).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.left.iter().chain(&self.right).map(|a| a.norm_sqr()).sum()
    }
}

/// `(|0,-1⟩ + |0,+1⟩)/√2` with both amplitudes real and positive.
pub fn standard_init() -> QState {
    QState::symmetric_init(InitPhase::InPhase)
}

pub fn born_marginal(state: &QState) -> PayoffDistribution {
    let weights = state
        .left
        .iter()
        .zip(&state.right)
        .map(|(l, r)| l.norm_sqr() + r.norm_sqr())
        .collect();
    PayoffDistribution::from_raw(state.offset, weights, state.time)
}

pub fn q_expected_payoff(state: &QState) -> f64 {
    state
        .left
        .iter()
        .zip(&state.right)
        .enumerate()
        .map(|(i, (l, r))| (state.offset + i as i64) as f64 * (l.norm_sqr() + r.norm_sqr()))
        .sum()
}

/// Scatter angle plus phase placement: everything that defines the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qlga {
    pub angle: ScatterAngle,
    pub order: PhaseOrder,
}

impl Qlga {
    pub fn new(angle: ScatterAngle, order: PhaseOrder) -> Self {
        Self { angle, order }
    }

    /// One timestep with phases supplied per site.
    fn step_with<F>(&self, state: &QState, phase: F) -> QState
    where
        F: Fn(i64) -> Complex64,
    {
        let (c, s) = scatter_coefficients(self.angle);
        let n = state.len();
        let mut left = vec![Complex64::default(); n + 2];
        let mut right = vec![Complex64::default(); n + 2];
        // Site x = offset + i lands at new index i (x - 1) on the left lane
        // and i + 2 (x + 1) on the right lane.
        for i in 0..n {
            let x = state.offset + i as i64;
            let (mut l, mut r) = (state.left[i], state.right[i]);
            if self.order == PhaseOrder::Pre {
                let ph = phase(x);
                l *= ph;
                r *= ph;
            }
            let mut nl = c * l + s * r;
            let mut nr = s * l + c * r;
            if self.order == PhaseOrder::Mid {
                let ph = phase(x);
                nl *= ph;
                nr *= ph;
            }
            left[i] = nl;
            right[i + 2] = nr;
        }
        let offset = state.offset - 1;
        if self.order == PhaseOrder::Post {
            for (i, (l, r)) in left.iter_mut().zip(right.iter_mut()).enumerate() {
                let ph = phase(offset + i as i64);
                *l *= ph;
                *r *= ph;
            }
        }
        QState {
            offset,
            left,
            right,
            time: state.time + 1,
        }
    }

    pub fn step(&self, state: &QState, pot: &QPotential) -> QState {
        self.step_with(state, |x| pot.phase(x))
    }

    pub fn step_shifted(&self, state: &QState, pot: &ShiftedPotential) -> QState {
        self.step_with(state, |x| Complex64::from_polar(1.0, -pot.eval(x)))
    }

    /// `t` steps cycling through `sched`. The series holds `t + 1` points.
    pub fn evolve(&self, state0: &QState, sched: &QSchedule, t: u64) -> (QState, Series) {
        // Phase tables over the final window, one per word letter.
        let lo = state0.offset - t as i64 - 1;
        let hi = state0.offset + state0.len() as i64 + t as i64;
        let tables: Vec<Vec<Complex64>> = sched
            .word()
            .iter()
            .map(|pot| (lo..=hi).map(|x| pot.phase(x)).collect())
            .collect();

        let mut series = Vec::with_capacity(t as usize + 1);
        let mut state = state0.clone();
        series.push((state.time, q_expected_payoff(&state)));
        for k in 0..t {
            let table = &tables[sched.index_at(k)];
            state = self.step_with(&state, |x| table[(x - lo) as usize]);
            series.push((state.time, q_expected_payoff(&state)));
        }
        (state, series)
    }
}

/// One step with the phase applied last, at the post-advection site.
pub fn qstep(state: &QState, angle: ScatterAngle, pot: &QPotential) -> QState {
    Qlga::new(angle, PhaseOrder::Post).step(state, pot)
}

pub fn q_evolve(state0: &QState, angle: ScatterAngle, sched: &QSchedule, t: u64) -> (QState, Series) {
    Qlga::new(angle, PhaseOrder::Post).evolve(state0, sched, t)
}

/// Least-squares fit of `y(t) ≈ A (cos(b t) - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineFit {
    pub amplitude: f64,
    pub frequency: f64,
    pub rms_residual: f64,
}

fn fit_amplitude(series: &[(u64, f64)], b: f64) -> (f64, f64) {
    let (mut gy, mut gg) = (0.0, 0.0);
    for &(t, y) in series {
        let g = (b * t as f64).cos() - 1.0;
        gy += g * y;
        gg += g * g;
    }
    let a = if gg > 0.0 { gy / gg } else { 0.0 };
    let sse: f64 = series
        .iter()
        .map(|&(t, y)| {
            let r = y - a * ((b * t as f64).cos() - 1.0);
            r * r
        })
        .sum();
    (a, sse)
}

/// Grid search over `b` followed by golden-section refinement; `A` is
/// solved in closed form for each candidate `b`.
pub fn fit_cosine_growth(series: &[(u64, f64)]) -> Option<CosineFit> {
    let t_max = series.iter().map(|p| p.0).max()? as f64;
    if series.len() < 3 || t_max <= 0.0 {
        return None;
    }
    let (b_lo, b_hi) = (0.1 * PI / t_max, 8.0 * PI / t_max);
    const GRID: usize = 2000;
    let h = (b_hi - b_lo) / GRID as f64;
    let best = (0..=GRID)
        .map(|k| b_lo + h * k as f64)
        .map(|b| (b, fit_amplitude(series, b).1))
        .min_by(|x, y| x.1.total_cmp(&y.1))?
        .0;

    let (mut lo, mut hi) = ((best - h).max(b_lo * 0.5), best + h);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let m1 = hi - ratio * (hi - lo);
        let m2 = lo + ratio * (hi - lo);
        if fit_amplitude(series, m1).1 < fit_amplitude(series, m2).1 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let b = 0.5 * (lo + hi);
    let (a, sse) = fit_amplitude(series, b);
    Some(CosineFit {
        amplitude: a,
        frequency: b,
        rms_residual: (sse / series.len() as f64).sqrt(),
    })
}
