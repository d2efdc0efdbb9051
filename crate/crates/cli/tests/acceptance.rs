//! Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use parrondo::analysis::{
    build_transition_matrix, fair_p0_of_p1, long_run_rate_b, stationary_distribution, GameAParams,
    GameBParams,
};
use parrondo::classical::{delta_init, evolve, parity_smooth, step, FlashSchedule, GameSuite};
use parrondo::crw::{crw_step, site_marginal, LgaDensity, ScatterProb};
use parrondo::montecarlo::{estimate_expected_payoff, RunConfig};
use parrondo::qlga::{InitPhase, PhaseOrder, QState, Qlga, ScatterAngle};
use parrondo_cli::calibrate::{calibrate_default, run_quantum, QuantumGame, SearchSpace};
use parrondo_cli::table::OutputTable;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn suite(eps: f64) -> GameSuite {
    GameSuite::with_bias(eps).expect("valid bias")
}

fn final_mean(word: &str, s: &GameSuite, t: u64) -> f64 {
    let sched: FlashSchedule = word.parse().expect("valid word");
    evolve(&delta_init(0), s, &sched, t).0.expected_payoff()
}

fn fairness_identity() -> Outcome {
    let p0 = fair_p0_of_p1(0.75).unwrap();
    let rate = long_run_rate_b(GameBParams::new(0.1, 0.75).unwrap()).unwrap();
    outcome(
        (p0 - 0.1).abs() <= 1e-15 && rate.abs() <= 1e-12,
        format!("fair p0(0.75) = {p0:e}, rate(0.1, 0.75) = {rate:e}"),
    )
}

fn stationary_oracle() -> Outcome {
    let t = build_transition_matrix(GameBParams::new(0.1, 0.75).unwrap());
    let v = stationary_distribution(&t).unwrap().as_array();
    // Independent oracle: lazy power iteration on the raw column-stochastic rule.
    let (p0, p1) = (0.1, 0.75);
    let mut w = [1.0 / 3.0; 3];
    for _ in 0..20_000 {
        let next = [
            (1.0 - p1) * w[1] + p1 * w[2],
            p0 * w[0] + (1.0 - p1) * w[2],
            (1.0 - p0) * w[0] + p1 * w[1],
        ];
        w = [0, 1, 2].map(|i| 0.5 * (w[i] + next[i]));
    }
    let exact = [5.0 / 13.0, 2.0 / 13.0, 6.0 / 13.0];
    let err_exact = (0..3).map(|i| (v[i] - exact[i]).abs()).fold(0.0, f64::max);
    let err_oracle = (0..3).map(|i| (v[i] - w[i]).abs()).fold(0.0, f64::max);
    outcome(
        err_exact <= 1e-10 && err_oracle <= 1e-10,
        format!("max err vs (5,2,6)/13 = {err_exact:e}, vs power iteration = {err_oracle:e}"),
    )
}

fn game_a_closed_form() -> Outcome {
    let s = GameSuite::new(GameAParams::new(0.495).unwrap(), GameBParams::new(0.1, 0.75).unwrap());
    let (_, series) = evolve(&delta_init(0), &s, &"A".parse().unwrap(), 1000);
    let worst = [1u64, 10, 100, 1000]
        .iter()
        .map(|&t| (series[t as usize].1 - t as f64 * -0.01).abs())
        .fold(0.0, f64::max);
    outcome(worst <= 1e-9, format!("max |<x>(t) + 0.01 t| over t in {{1,10,100,1000}} = {worst:e}"))
}

fn classical_parrondo() -> Outcome {
    let s = suite(0.005);
    let (a, b, aabb) = (final_mean("A", &s, 100), final_mean("B", &s, 100), final_mean("AABB", &s, 100));
    let signs = a < 0.0 && b < 0.0 && aabb > 0.0;
    let target = (b - -0.871).abs() <= 0.05;
    let slope = final_mean("B", &s, 101) - b;
    let rate = long_run_rate_b(s.b).unwrap();
    outcome(
        signs && target,
        format!(
            "<x>(100): A = {a:.6}, B = {b:.6}, AABB = {aabb:.6}; signs {}; B target -0.871 +/- 0.05 {} \
             (per-play slope at t=100 = {slope:.7}, stationary rate = {rate:.7})",
            if signs { "ok" } else { "wrong" },
            if target { "met" } else { "missed" },
        ),
    )
}

fn conservation_suite() -> Outcome {
    let mut problems = Vec::new();
    let s = suite(0.005);
    for word in ["A", "B", "AABB"] {
        let sched: FlashSchedule = word.parse().unwrap();
        let mut trail = vec![delta_init(0)];
        let mut d = delta_init(0);
        for k in 0..5000u64 {
            d = step(&d, &s, sched.label_at(k));
            let t = d.time() as i64;
            if k < 300 {
                trail.push(d.clone());
            }
            if (d.total_mass() - 1.0).abs() > 1e-12 {
                problems.push(format!("classical {word} mass at t={t}"));
                break;
            }
            if k % 500 == 0 || k == 4999 {
                let (lo, hi) = d.window();
                let leak = (lo..=hi).any(|x| (x.abs() > t || (x + t).rem_euclid(2) == 1) && d.prob(x) != 0.0);
                if leak {
                    problems.push(format!("classical {word} lightcone/parity at t={t}"));
                }
            }
        }
        for w in trail.windows(3) {
            let sm = parity_smooth(&w[0], &w[1], &w[2]).unwrap();
            if (sm.total_mass() - 1.0).abs() > 1e-12 {
                problems.push(format!("smoothing mass {word} at t={}", w[1].time()));
                break;
            }
        }
    }
    let mut worst_norm = 0.0f64;
    for order in PhaseOrder::ALL {
        let q = Qlga::new(ScatterAngle::unbiased(), order);
        for game in QuantumGame::ALL {
            let sched = game.schedule(1);
            let (state, _) = q.evolve(&QState::symmetric_init(InitPhase::AntiPhase), &sched, 5000);
            worst_norm = worst_norm.max((state.norm_sqr() - 1.0).abs());
            if state.window() != (-5000, 5000) {
                problems.push(format!("quantum {order} {} window {:?}", game.name(), state.window()));
            }
        }
    }
    if worst_norm > 1e-12 {
        problems.push(format!("quantum norm drift {worst_norm:e}"));
    }
    let detail = if problems.is_empty() {
        format!("5000 steps: classical mass, lightcone, parity and smoothing exact; quantum max |norm - 1| = {worst_norm:e}")
    } else {
        problems.join("; ")
    };
    outcome(problems.is_empty(), detail)
}

fn crw_binomial() -> Outcome {
    let sp = ScatterProb::symmetric(0.5).unwrap();
    let mut s = LgaDensity::symmetric(0);
    let mut worst = 0.0f64;
    for t in 1..=200u64 {
        s = crw_step(&s, &sp);
        let m = site_marginal(&s);
        let mut p = 0.5f64.powi(t as i32);
        for k in 0..=t {
            let x = 2 * k as i64 - t as i64;
            worst = worst.max((m.prob(x) - p).abs());
            p *= (t - k) as f64 / (k + 1) as f64;
        }
        // Off-lattice sites must be empty.
        let (lo, hi) = m.window();
        for x in lo..=hi {
            if (x + t as i64).rem_euclid(2) == 1 || x.unsigned_abs() > t {
                worst = worst.max(m.prob(x));
            }
        }
    }
    outcome(worst <= 1e-12, format!("max |P(x,t) - binomial| over t <= 200 = {worst:e}"))
}

fn monte_carlo() -> Outcome {
    let s = suite(0.005);
    let mut pass = true;
    let mut parts = Vec::new();
    for word in ["A", "B", "AABB"] {
        let exact = final_mean(word, &s, 100);
        let cfg = RunConfig::new(42, 50_000, 100, s, word.parse().unwrap()).unwrap();
        let st = estimate_expected_payoff(&cfg);
        let z = (st.mean - exact) / st.std_error;
        pass &= z.abs() <= 4.0;
        parts.push(format!("{word}: mc {:.4} vs exact {exact:.4} ({z:+.2} SE)", st.mean));
    }
    outcome(pass, parts.join(", "))
}

fn quantum_parrondo() -> Outcome {
    let report = calibrate_default(SearchSpace::default());
    let Some(sel) = report.selected else {
        return outcome(false, "no candidate convention reproduces (-, -, +)");
    };
    let values = report.candidates.iter().find(|c| c.config == sel).unwrap().values;
    let s = suite(0.005);
    let classical = [final_mean("A", &s, 100), final_mean("B", &s, 100), final_mean("AABB", &s, 100)];
    let ratios: Vec<f64> = (0..3).map(|i| values[i].abs() / classical[i].abs()).collect();
    let ratios_ok = ratios.iter().all(|r| (0.2..=5.0).contains(r));
    let n = report.candidates.iter().filter(|c| c.matches()).count();
    outcome(
        ratios_ok,
        format!(
            "selected {sel} ({n} of {} candidates match); <x>(100) = ({:.3}, {:.3}, {:.3}); \
             |quantum/classical| for A/A, B/B, BAAAA/AABB = ({:.2}, {:.2}, {:.2})",
            report.candidates.len(),
            values[0],
            values[1],
            values[2],
            ratios[0],
            ratios[1],
            ratios[2]
        ),
    )
}

fn long_time_boundedness() -> Outcome {
    let report = calibrate_default(SearchSpace::default());
    let cfg = report.resolved();
    let theta = std::f64::consts::FRAC_PI_4;
    let mut max_all = 0.0f64;
    let mut flashing = Vec::new();
    for game in QuantumGame::ALL {
        let (_, series) = run_quantum(game, cfg, theta, 5000);
        max_all = series.iter().fold(max_all, |m, p| m.max(p.1.abs()));
        if game == QuantumGame::Flashing {
            flashing = series;
        }
    }
    let values: Vec<f64> = flashing.iter().map(|p| p.1).collect();
    let rises = values.windows(2).any(|w| w[1] > w[0]);
    let falls = values.windows(2).any(|w| w[1] < w[0]);
    let (peak_t, peak) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(t, v)| (t, v.abs()))
        .unwrap();
    let start = values[0];
    let ret = values[peak_t..]
        .iter()
        .position(|v| (v - start).abs() <= 0.1 * peak)
        .map(|i| peak_t + i);
    outcome(
        max_all <= 1000.0 && rises && falls && ret.is_some(),
        format!(
            "max |<x>| over 3 games = {max_all:.2}; BAAAA peak {peak:.2} at t={peak_t}, \
             non-monotone = {}, first return within 10% at t = {}",
            rises && falls,
            ret.map_or("none".into(), |t| t.to_string())
        ),
    )
}

fn cli_determinism() -> Outcome {
    let run = |dir: &Path, preset: &str| -> Result<Vec<String>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_parrondo"))
            .args(["run", "--preset", preset, "--out", dir.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .map(|p| std::fs::read_to_string(p).map_err(|e| e.to_string()))
            .collect()
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut files = 0;
    for preset in ["figure1", "figure3", "figure6", "figure8", "crw-demo"] {
        let (ta, tb) = match (run(a.path(), preset), run(b.path(), preset)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => return outcome(false, format!("{preset}: {e}")),
        };
        for (x, y) in ta.iter().zip(&tb) {
            files += 1;
            if OutputTable::data_section(x) != OutputTable::data_section(y) {
                return outcome(false, format!("{preset}: data sections differ"));
            }
            match OutputTable::parse(x) {
                Ok(t) if t.to_csv_string() == *x => {}
                Ok(_) => return outcome(false, format!("{preset}: re-serialised file differs")),
                Err(e) => return outcome(false, format!("{preset}: parse error {e}")),
            }
        }
    }
    outcome(true, format!("{files} files: identical data sections on rerun, exact round trip"))
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let checks: [(&str, Duration, Check); 10] = [
        ("fairness identity", Duration::from_millis(1), fairness_identity),
        ("stationary oracle", Duration::from_millis(1), stationary_oracle),
        ("game A closed form", Duration::from_secs(1), game_a_closed_form),
        ("classical Parrondo effect", Duration::from_secs(1), classical_parrondo),
        ("conservation and invariants", Duration::from_secs(120), conservation_suite),
        ("correlated walk at p = 1/2", Duration::from_secs(1), crw_binomial),
        ("Monte Carlo cross-validation", Duration::from_secs(30), monte_carlo),
        ("quantum Parrondo effect", Duration::from_secs(5), quantum_parrondo),
        ("long-time boundedness", Duration::from_secs(60), long_time_boundedness),
        ("CLI determinism and round trip", Duration::from_secs(120), cli_determinism),
    ];
    let mut failed = 0;
    for (name, budget, check) in checks {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = o.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "[{}] {name}: {} [{:.3} s, budget {} s{}]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs_f64(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
