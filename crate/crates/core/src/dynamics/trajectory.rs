use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{OimError, Result};
use crate::schedule::Controls;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub phi: Vec<f64>,
    pub controls: Controls,
    pub energy: Option<f64>,
}

/// Recorded samples of one run, in strictly increasing time.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        if let Some(k) = samples.windows(2).position(|w| !(w[1].t > w[0].t)) {
            return Err(OimError::invalid(format!("sample times not increasing at sample {}", k + 1)));
        }
        if let Some(first) = samples.first() {
            if let Some(k) = samples.iter().position(|s| s.phi.len() != first.phi.len()) {
                return Err(OimError::Dimension { expected: first.phi.len(), got: samples[k].phi.len() });
            }
        }
        Ok(Trajectory { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Number of oscillators, 0 for an empty trajectory.
    pub fn n(&self) -> usize {
        self.samples.first().map_or(0, |s| s.phi.len())
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// CSV with header `t,phi_0,…,phi_{n-1},K,Ks,Kn,E`. Numbers use 17
    /// significant digits (`{:.16e}`); `E` is empty when not recorded.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut line = String::from("t");
        for i in 0..self.n() {
            write!(line, ",phi_{i}").unwrap();
        }
        line.push_str(",K,Ks,Kn,E\n");
        out.write_all(line.as_bytes())?;
        for s in &self.samples {
            line.clear();
            write!(line, "{:.16e}", s.t).unwrap();
            for p in &s.phi {
                write!(line, ",{p:.16e}").unwrap();
            }
            write!(line, ",{:.16e},{:.16e},{:.16e},", s.controls.k, s.controls.ks, s.controls.kn).unwrap();
            if let Some(e) = s.energy {
                write!(line, "{e:.16e}").unwrap();
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trajectory serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: Trajectory = serde_json::from_str(text).map_err(|e| OimError::format(Some(e.line()), e.to_string()))?;
        Trajectory::new(t.samples)
    }
}
