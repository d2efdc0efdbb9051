//! Search over quantum step conventions for the (A-, B-, BAAAA+) pattern.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use parrondo::classical::Series;
use parrondo::qlga::{InitPhase, PhaseOrder, QPotential, QSchedule, QState, Qlga, ScatterAngle};

pub const CALIBRATION_STEPS: u64 = 100;
pub const FLASHING_WORD: &str = "BAAAA";
/// Letters of the flashing word, hence the distinct entry offsets.
pub const MAX_START: usize = FLASHING_WORD.len();

/// Step convention for the quantum presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumConfig {
    pub order: PhaseOrder,
    pub init: InitPhase,
    pub start: usize,
}

impl Default for QuantumConfig {
    fn default() -> Self {
        Self {
            order: PhaseOrder::Post,
            init: InitPhase::InPhase,
            start: 0,
        }
    }
}

impl fmt::Display for QuantumConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "phase_order={} init_phase={} schedule_start={}",
            self.order, self.init, self.start
        )
    }
}

/// The three quantum games.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantumGame {
    A,
    B,
    Flashing,
}

impl QuantumGame {
    pub const ALL: [QuantumGame; 3] = [QuantumGame::A, QuantumGame::B, QuantumGame::Flashing];

    pub fn name(self) -> &'static str {
        match self {
            QuantumGame::A => "A",
            QuantumGame::B => "B",
            QuantumGame::Flashing => FLASHING_WORD,
        }
    }

    pub fn schedule(self, start: usize) -> QSchedule {
        let (a, b) = (QPotential::linear_a(), QPotential::ratchet_b());
        match self {
            QuantumGame::A => QSchedule::constant(a),
            QuantumGame::B => QSchedule::constant(b),
            QuantumGame::Flashing => QSchedule::from_labels(FLASHING_WORD, a, b)
                .expect("fixed word is valid")
                .with_start(start),
        }
    }
}

pub fn run_quantum(game: QuantumGame, cfg: QuantumConfig, theta: f64, steps: u64) -> (QState, Series) {
    let q = Qlga::new(ScatterAngle::new(theta), cfg.order);
    q.evolve(&QState::symmetric_init(cfg.init), &game.schedule(cfg.start), steps)
}

/// Restricts the search; `None` leaves a dimension free.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchSpace {
    pub order: Option<PhaseOrder>,
    pub init: Option<InitPhase>,
    pub start: Option<usize>,
}

impl SearchSpace {
    /// Candidates in preference order: the default convention first.
    pub fn candidates(&self) -> Vec<QuantumConfig> {
        let mut out = Vec::new();
        for init in InitPhase::ALL {
            if self.init.is_some_and(|i| i != init) {
                continue;
            }
            for start in 0..MAX_START {
                if self.start.is_some_and(|s| s != start) {
                    continue;
                }
                for order in PhaseOrder::ALL {
                    if self.order.is_some_and(|o| o != order) {
                        continue;
                    }
                    out.push(QuantumConfig { order, init, start });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub config: QuantumConfig,
    /// `<x>` at the calibration time for A, B and the flashing word.
    pub values: [f64; 3],
}

impl Candidate {
    pub fn signs(&self) -> String {
        self.values
            .iter()
            .map(|v| if *v > 0.0 { '+' } else if *v < 0.0 { '-' } else { '0' })
            .collect()
    }

    pub fn matches(&self) -> bool {
        self.values[0] < 0.0 && self.values[1] < 0.0 && self.values[2] > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub theta: f64,
    pub steps: u64,
    pub candidates: Vec<Candidate>,
    pub selected: Option<QuantumConfig>,
}

impl CalibrationReport {
    /// The selected convention, or the first candidate searched when none matches.
    pub fn resolved(&self) -> QuantumConfig {
        self.selected
            .or_else(|| self.candidates.first().map(|c| c.config))
            .unwrap_or_default()
    }
}

pub fn calibrate(space: SearchSpace, theta: f64) -> CalibrationReport {
    let candidates: Vec<Candidate> = space
        .candidates()
        .into_iter()
        .map(|config| {
            let values = QuantumGame::ALL.map(|g| {
                let (_, series) = run_quantum(g, config, theta, CALIBRATION_STEPS);
                series.last().expect("series is never empty").1
            });
            Candidate { config, values }
        })
        .collect();
    let selected = candidates.iter().find(|c| c.matches()).map(|c| c.config);
    CalibrationReport {
        theta,
        steps: CALIBRATION_STEPS,
        candidates,
        selected,
    }
}

pub fn calibrate_default(space: SearchSpace) -> CalibrationReport {
    calibrate(space, FRAC_PI_4)
}

impl fmt::Display for CalibrationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "quantum calibration: theta = {}, t = {}, target signs (A, B, {FLASHING_WORD}) = (-, -, +)",
            self.theta, self.steps
        )?;
        writeln!(
            f,
            "{:<11} {:>5} {:<5} {:>12} {:>12} {:>12} {:<5} match",
            "init_phase", "start", "order", "<x>_A", "<x>_B", "<x>_BAAAA", "signs"
        )?;
        for c in &self.candidates {
            writeln!(
                f,
                "{:<11} {:>5} {:<5} {:>12.6} {:>12.6} {:>12.6} {:<5} {}",
                c.config.init.as_str(),
                c.config.start,
                c.config.order.as_str(),
                c.values[0],
                c.values[1],
                c.values[2],
                c.signs(),
                if c.matches() { "yes" } else { "no" }
            )?;
        }
        let n = self.candidates.iter().filter(|c| c.matches()).count();
        writeln!(f, "matching candidates: {n} of {}", self.candidates.len())?;
        match self.selected {
            Some(cfg) => writeln!(f, "selected: {cfg}"),
            None => writeln!(
                f,
                "selected: none reproduces the pattern; falling back to {}",
                self.resolved()
            ),
        }
    }
}
