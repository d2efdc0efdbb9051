//! Named experiments and their output tables.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use parrondo::analysis::{ClassicalPotential, GameBParams};
use parrondo::classical::{delta_init, parity_smooth, step, FlashSchedule, GameSuite};
use parrondo::crw::{crw_evolve, site_marginal, LgaDensity, ScatterProb};
use parrondo::montecarlo::{estimate_expected_payoff, RunConfig, RNG_NAME};
use parrondo::qlga::{born_marginal, fit_cosine_growth, PhaseOrder, QPotential};

use crate::calibrate::{calibrate, run_quantum, QuantumConfig, QuantumGame, SearchSpace};
use crate::error::CliError;
use crate::params::Params;
use crate::table::OutputTable;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioPreset {
    Figure1,
    Figure2,
    Figure3,
    Figure4,
    Figure6,
    Figure7,
    Figure8,
    Figure9,
    Figure10,
    CrwDemo,
}

impl ScenarioPreset {
    pub const ALL: [ScenarioPreset; 10] = [
        ScenarioPreset::Figure1,
        ScenarioPreset::Figure2,
        ScenarioPreset::Figure3,
        ScenarioPreset::Figure4,
        ScenarioPreset::Figure6,
        ScenarioPreset::Figure7,
        ScenarioPreset::Figure8,
        ScenarioPreset::Figure9,
        ScenarioPreset::Figure10,
        ScenarioPreset::CrwDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioPreset::Figure1 => "figure1",
            ScenarioPreset::Figure2 => "figure2",
            ScenarioPreset::Figure3 => "figure3",
            ScenarioPreset::Figure4 => "figure4",
            ScenarioPreset::Figure6 => "figure6",
            ScenarioPreset::Figure7 => "figure7",
            ScenarioPreset::Figure8 => "figure8",
            ScenarioPreset::Figure9 => "figure9",
            ScenarioPreset::Figure10 => "figure10",
            ScenarioPreset::CrwDemo => "crw-demo",
        }
    }

    pub fn is_quantum(self) -> bool {
        matches!(
            self,
            ScenarioPreset::Figure6
                | ScenarioPreset::Figure7
                | ScenarioPreset::Figure8
                | ScenarioPreset::Figure9
                | ScenarioPreset::Figure10
        )
    }

    pub fn default_steps(self) -> u64 {
        match self {
            ScenarioPreset::Figure10 => 5000,
            _ => 100,
        }
    }
}

impl fmt::Display for ScenarioPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioPreset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
                CliError::Usage(format!("unknown preset {s:?} (known: {})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub params: Params,
    pub seed: u64,
    pub phase_order: Option<PhaseOrder>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            params: Params::default(),
            seed: DEFAULT_SEED,
            phase_order: None,
        }
    }
}

impl RunOptions {
    /// A command line that reproduces this run, config-file values included.
    pub fn command(&self, preset: ScenarioPreset) -> String {
        let mut cmd = format!("parrondo run --preset {preset} --seed {}", self.seed);
        if let Some(o) = self.phase_order {
            cmd.push_str(&format!(" --phase-order {o}"));
        }
        for (k, v) in &self.params.applied {
            cmd.push_str(&format!(" --set {k}={v}"));
        }
        cmd
    }
}

/// One output file: `series` names it within the preset.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedTable {
    pub series: String,
    pub table: OutputTable,
}

impl NamedTable {
    pub fn file_name(&self) -> String {
        let preset = self.table.get_meta("preset").unwrap_or("table");
        format!("{preset}_{}.csv", self.series)
    }
}

/// Quantum convention in effect for a run and how it was chosen.
struct QuantumChoice {
    config: QuantumConfig,
    calibrated: bool,
}

fn quantum_choice(opts: &RunOptions, theta: f64) -> QuantumChoice {
    let space = SearchSpace {
        order: opts.phase_order,
        init: opts.params.init_phase,
        start: opts.params.schedule_start,
    };
    let report = calibrate(space, theta);
    QuantumChoice {
        config: report.resolved(),
        calibrated: report.selected.is_some(),
    }
}

struct Context<'a> {
    preset: ScenarioPreset,
    opts: &'a RunOptions,
    steps: u64,
    quantum: Option<QuantumChoice>,
}

impl Context<'_> {
    /// Run-identifying metadata first, then whatever the table already carries.
    fn table(&self, series: &str, mut table: OutputTable, smoothing: &str) -> NamedTable {
        let p = &self.opts.params;
        let specific = std::mem::take(&mut table.metadata);
        let mut t = table
            .meta("preset", self.preset)
            .meta("series", series)
            .meta("version", VERSION)
            .meta("command", self.opts.command(self.preset))
            .meta("overrides", p.overrides_string())
            .meta("seed", self.opts.seed);
        t = match &self.quantum {
            Some(q) => t
                .meta("phase_order", q.config.order)
                .meta("init_phase", q.config.init)
                .meta("schedule_start", q.config.start)
                .meta("calibrated", q.calibrated),
            None => t.meta("phase_order", "n/a"),
        };
        t = t.meta("smoothing", smoothing).meta("rng", RNG_NAME).meta("param.steps", self.steps);
        if self.preset.is_quantum() {
            t = t
                .meta("param.theta", p.theta.unwrap_or(FRAC_PI_4))
                .meta("param.potential_slope", QPotential::DEFAULT_SLOPE)
                .meta("param.potential_level", QPotential::DEFAULT_LEVEL);
        } else if self.preset == ScenarioPreset::CrwDemo {
            t = t.meta("param.crw_p", p.crw_p.unwrap_or(CRW_DEFAULT_P));
        } else if let Ok(s) = p.suite() {
            t = t
                .meta("param.epsilon", p.epsilon())
                .meta("param.pa", s.a.pa())
                .meta("param.p0", s.b.p0())
                .meta("param.p1", s.b.p1());
        }
        t.metadata.extend(specific);
        NamedTable {
            series: series.to_string(),
            table: t,
        }
    }
}

pub const CRW_DEFAULT_P: f64 = 0.75;
const RAW: &str = "none (raw values)";
const SMOOTHED: &str = "probability_smoothed = (p(t-1) + 2 p(t) + p(t+1)) / 4";
const QUANTUM_RAW: &str = "none (raw Born-rule values; no smoothing applied to quantum output)";

pub fn run_preset(preset: ScenarioPreset, opts: &RunOptions) -> Result<Vec<NamedTable>, CliError> {
    let steps = opts.params.steps_or(preset.default_steps());
    let theta = opts.params.theta.unwrap_or(FRAC_PI_4);
    if !theta.is_finite() {
        return Err(CliError::Validation(format!("theta={theta}: must be finite")));
    }
    if let Some(p) = opts.params.crw_p {
        ScatterProb::symmetric(p)?;
    }
    if !preset.is_quantum() && preset != ScenarioPreset::CrwDemo {
        opts.params.suite()?;
    }
    let ctx = Context {
        preset,
        opts,
        steps,
        quantum: preset.is_quantum().then(|| quantum_choice(opts, theta)),
    };
    match preset {
        ScenarioPreset::Figure1 => figure1(&ctx),
        ScenarioPreset::Figure2 => classical_distribution(&ctx, "A", PotentialChoice::Linear),
        ScenarioPreset::Figure3 => classical_distribution(&ctx, "B", PotentialChoice::Ratchet),
        ScenarioPreset::Figure4 => classical_distribution(&ctx, "AABB", PotentialChoice::Ratchet),
        ScenarioPreset::Figure6 | ScenarioPreset::Figure10 => quantum_series(&ctx, theta),
        ScenarioPreset::Figure7 => quantum_distribution(&ctx, theta, QuantumGame::A),
        ScenarioPreset::Figure8 => quantum_distribution(&ctx, theta, QuantumGame::B),
        ScenarioPreset::Figure9 => quantum_distribution(&ctx, theta, QuantumGame::Flashing),
        ScenarioPreset::CrwDemo => crw_demo(&ctx),
    }
}

/// Writes each table to `<dir>/<preset>_<series>.csv`, creating `dir` if needed.
pub fn write_tables(dir: &Path, tables: &[NamedTable]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    tables
        .iter()
        .map(|t| {
            let path = dir.join(t.file_name());
            t.table.write_file(&path)?;
            Ok(path)
        })
        .collect()
}

fn figure1(ctx: &Context) -> Result<Vec<NamedTable>, CliError> {
    let p = &ctx.opts.params;
    let suite = p.suite()?;
    let mut out = Vec::new();
    for word in ["A", "B", "AABB"] {
        let sched: FlashSchedule = word.parse()?;
        let (_, series) = parrondo::classical::evolve(&delta_init(0), &suite, &sched, ctx.steps);
        let mut t = OutputTable::timeseries(&series);
        if let Some(runs) = p.mc_runs.filter(|&r| r > 0) {
            let cfg = RunConfig::new(ctx.opts.seed, runs, ctx.steps, suite, sched)?;
            let st = estimate_expected_payoff(&cfg);
            let exact = series.last().expect("non-empty").1;
            t = t
                .meta("mc_runs", runs)
                .meta("mc_mean", st.mean)
                .meta("mc_std_error", st.std_error)
                .meta("mc_minus_exact", st.mean - exact);
        }
        out.push(ctx.table(word, t, RAW));
    }
    Ok(out)
}

enum PotentialChoice {
    Linear,
    Ratchet,
}

fn classical_potential(suite: &GameSuite, eps: f64, choice: PotentialChoice) -> Result<ClassicalPotential, CliError> {
    match choice {
        PotentialChoice::Linear => Ok(ClassicalPotential::linear(suite.a)),
        PotentialChoice::Ratchet => {
            // Periodic shape from the unbiased coins; the bias tilts it.
            let fair = GameBParams::new(suite.b.p0() + eps, suite.b.p1() + eps)?;
            Ok(ClassicalPotential::ratchet(fair, suite.a.drift())?)
        }
    }
}

fn classical_distribution(ctx: &Context, word: &str, choice: PotentialChoice) -> Result<Vec<NamedTable>, CliError> {
    if ctx.steps == 0 {
        return Err(CliError::Validation("steps must be at least 1 for smoothed distributions".into()));
    }
    let p = &ctx.opts.params;
    let suite = p.suite()?;
    let pot = classical_potential(&suite, p.epsilon(), choice)?;
    let sched: FlashSchedule = word.parse()?;
    let mut d = delta_init(0);
    let mut trail = Vec::with_capacity(3);
    for k in 0..=ctx.steps {
        d = step(&d, &suite, sched.label_at(k));
        if k + 2 >= ctx.steps {
            trail.push(d.clone());
        }
    }
    // trail holds t-1, t, t+1 (t-1 may be the initial delta when t = 1).
    if trail.len() < 3 {
        trail.insert(0, delta_init(0));
    }
    let (prev, cur, next) = (&trail[0], &trail[1], &trail[2]);
    let smooth = parity_smooth(prev, cur, next)?;
    let (lo, hi) = smooth.window();
    let rows = (lo..=hi)
        .map(|x| vec![x as f64, cur.prob(x), smooth.prob(x), pot.eval(x as f64)])
        .collect();
    let table = OutputTable::distribution(&["probability", "probability_smoothed", "V"], rows)
        .meta("time", ctx.steps)
        .meta("schedule", word)
        .meta("expected_payoff", cur.expected_payoff());
    Ok(vec![ctx.table(word, table, SMOOTHED)])
}

fn quantum_series(ctx: &Context, theta: f64) -> Result<Vec<NamedTable>, CliError> {
    let cfg = ctx.quantum.as_ref().expect("quantum preset").config;
    let mut out = Vec::new();
    for game in QuantumGame::ALL {
        let (_, series) = run_quantum(game, cfg, theta, ctx.steps);
        let max_abs = series.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        let mut t = OutputTable::timeseries(&series).meta("max_abs_expected_payoff", max_abs);
        if ctx.preset == ScenarioPreset::Figure10 {
            // Early-time growth: first quarter of the run.
            let early = &series[..=(series.len() / 4).max(2).min(series.len() - 1)];
            if let Some(fit) = fit_cosine_growth(early) {
                t = t
                    .meta("fit_model", "A (cos(b t) - 1)")
                    .meta("fit_t_max", early.last().expect("non-empty").0)
                    .meta("fit_amplitude", fit.amplitude)
                    .meta("fit_frequency", fit.frequency)
                    .meta("fit_rms_residual", fit.rms_residual);
            }
        }
        out.push(ctx.table(game.name(), t, QUANTUM_RAW));
    }
    Ok(out)
}

fn quantum_distribution(ctx: &Context, theta: f64, game: QuantumGame) -> Result<Vec<NamedTable>, CliError> {
    let cfg = ctx.quantum.as_ref().expect("quantum preset").config;
    let (state, _) = run_quantum(game, cfg, theta, ctx.steps);
    let m = born_marginal(&state);
    let (lo, hi) = m.window();
    let pot = match game {
        QuantumGame::A => Some(QPotential::linear_a()),
        QuantumGame::B => Some(QPotential::ratchet_b()),
        QuantumGame::Flashing => None,
    };
    let rows = (lo..=hi)
        .map(|x| {
            let mut r = vec![x as f64, m.prob(x)];
            if let Some(v) = pot {
                r.push(v.eval(x));
            }
            r
        })
        .collect();
    let cols: &[&str] = if pot.is_some() { &["probability", "V"] } else { &["probability"] };
    let table = OutputTable::distribution(cols, rows)
        .meta("time", ctx.steps)
        .meta("schedule", game.name())
        .meta("expected_payoff", m.expected_payoff());
    Ok(vec![ctx.table(game.name(), table, QUANTUM_RAW)])
}

fn crw_demo(ctx: &Context) -> Result<Vec<NamedTable>, CliError> {
    let p = ctx.opts.params.crw_p.unwrap_or(CRW_DEFAULT_P);
    let sp = ScatterProb::symmetric(p)?;
    let s = crw_evolve(&LgaDensity::symmetric(0), &sp, ctx.steps);
    let m = site_marginal(&s);
    let (lo, hi) = m.window();
    let rows = (lo..=hi).map(|x| vec![x as f64, m.prob(x)]).collect();
    let table = OutputTable::distribution(&["probability"], rows)
        .meta("time", ctx.steps)
        .meta("expected_payoff", m.expected_payoff())
        .meta("variance", m.variance());
    Ok(vec![ctx.table("marginal", table, RAW)])
}
