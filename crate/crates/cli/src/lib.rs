//! Command-line front end: figure presets, quantum calibration and Markov analysis.

pub mod analyze;
pub mod calibrate;
pub mod error;
pub mod params;
pub mod presets;
pub mod table;
