use serde::{Deserialize, Serialize};

use crate::error::{OimError, Result};

/// Best-known cuts for the G-set, with the oscillator machine's reference
/// results over 200 trials.
pub const GSET_TARGETS_CSV: &str = include_str!("../../data/gset_targets.csv");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GsetTarget {
    pub name: String,
    pub best_known: f64,
    pub oim_best: f64,
    pub oim_n_max: usize,
    pub oim_n_0999: usize,
}

/// Parses `name,best_known,oim_best,oim_n_max,oim_n_0999` rows after a
/// header line.
pub fn parse_targets(text: &str) -> Result<Vec<GsetTarget>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = |what: &str| OimError::format(Some(lineno + 1), format!("bad {what}"));
        if f.len() != 5 {
            return Err(bad("column count"));
        }
        out.push(GsetTarget {
            name: f[0].to_string(),
            best_known: f[1].parse().map_err(|_| bad("best_known"))?,
            oim_best: f[2].parse().map_err(|_| bad("oim_best"))?,
            oim_n_max: f[3].parse().map_err(|_| bad("oim_n_max"))?,
            oim_n_0999: f[4].parse().map_err(|_| bad("oim_n_0999"))?,
        });
    }
    Ok(out)
}

pub fn gset_targets() -> Vec<GsetTarget> {
    parse_targets(GSET_TARGETS_CSV).expect("shipped table parses")
}

pub fn gset_target(name: &str) -> Option<GsetTarget> {
    gset_targets().into_iter().find(|t| t.name.eq_ignore_ascii_case(name))
}
