//! Markov-chain report for one game-B coin pair.

use std::fmt;

use parrondo::analysis::{
    build_transition_matrix, fair_p0_of_p1, fairness_determinant, long_run_rate_b,
    ratchet_break_b, stationary_distribution, EquilibriumVector, GameBParams, TransitionMatrix3,
};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub params: GameBParams,
    pub matrix: TransitionMatrix3,
    pub stationary: EquilibriumVector,
    pub rate: f64,
    pub determinant: f64,
    /// Err holds the reason no fair p0 exists.
    pub fair_p0: Result<f64, String>,
    /// Err holds the violated precondition.
    pub breakpoint: Result<f64, String>,
}

pub fn analyze(p0: f64, p1: f64) -> Result<AnalysisReport, CliError> {
    let params = GameBParams::new(p0, p1)?;
    let matrix = build_transition_matrix(params);
    let stationary = stationary_distribution(&matrix)?;
    Ok(AnalysisReport {
        params,
        matrix,
        stationary,
        rate: long_run_rate_b(params)?,
        determinant: fairness_determinant(params),
        fair_p0: fair_p0_of_p1(p1).map_err(|e| e.to_string()),
        breakpoint: ratchet_break_b(params).map_err(|e| e.to_string()),
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "game B: p0 = {}, p1 = {}", self.params.p0(), self.params.p1())?;
        writeln!(f, "transition matrix T[to][from] over x mod 3:")?;
        for row in self.matrix.entries() {
            writeln!(f, "  {:>10.6} {:>10.6} {:>10.6}", row[0], row[1], row[2])?;
        }
        let v = self.stationary.as_array();
        writeln!(f, "stationary vector: ({}, {}, {})", v[0], v[1], v[2])?;
        writeln!(f, "long-run rate: {}", self.rate)?;
        writeln!(f, "fairness determinant: {}", self.determinant)?;
        match &self.fair_p0 {
            Ok(p) => writeln!(f, "fair p0 for p1 = {}: {p}", self.params.p1())?,
            Err(e) => writeln!(f, "fair p0 for p1 = {}: none ({e})", self.params.p1())?,
        }
        match &self.breakpoint {
            Ok(b) => writeln!(f, "ratchet breakpoint b: {b}"),
            Err(e) => writeln!(f, "ratchet breakpoint b: not defined ({e})"),
        }
    }
}
