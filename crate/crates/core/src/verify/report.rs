use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "counterexample")]
    Counterexample,
    #[serde(rename = "inconclusive-budget")]
    InconclusiveBudget,
}

impl Verdict {
    /// The worse of two verdicts: counterexample beats inconclusive beats verified.
    pub fn worst(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Counterexample, _) | (_, Counterexample) => Counterexample,
            (InconclusiveBudget, _) | (_, InconclusiveBudget) => InconclusiveBudget,
            _ => Verified,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Counterexample => "counterexample",
            Verdict::InconclusiveBudget => "inconclusive-budget",
        })
    }
}

/// A reproducible failing instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub schema: u32,
    pub suite: String,
    pub verdict: Verdict,
    pub trials: u64,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<ProbeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl ProbeReport {
    pub fn new(suite: impl Into<String>, verdict: Verdict) -> Self {
        ProbeReport {
            schema: SCHEMA_VERSION,
            suite: suite.into(),
            verdict,
            trials: 0,
            seed: 0,
            params: BTreeMap::new(),
            witness: None,
            chain: None,
            dimension: None,
            notes: Vec::new(),
            parts: Vec::new(),
            runtime_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = Some(start.elapsed().as_millis() as u64);
        self
    }

    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    /// Drops wall-clock fields so identical inputs serialize identically.
    pub fn without_timing(mut self) -> Self {
        self.runtime_ms = None;
        self.parts = self.parts.into_iter().map(Self::without_timing).collect();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.suite, self.verdict)?;
        if self.trials > 0 {
            write!(f, " ({} trials, seed {})", self.trials, self.seed)?;
        }
        if let Some(d) = self.dimension {
            write!(f, " [dimension {d}]")?;
        }
        if let Some(ms) = self.runtime_ms {
            write!(f, " in {ms} ms")?;
        }
        for (k, v) in &self.params {
            write!(f, "\n  {k} = {v}")?;
        }
        if let Some(w) = &self.witness {
            write!(
                f,
                "\n  witness: {}\n    expected: {}\n    got:      {}",
                w.inputs, w.expected, w.got
            )?;
        }
        if let Some(chain) = &self.chain {
            for step in chain {
                write!(f, "\n  | {step}")?;
            }
        }
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        for part in &self.parts {
            let text = part.to_string().replace('\n', "\n  ");
            write!(f, "\n  - {text}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = ProbeReport::new("theta", Verdict::InconclusiveBudget)
            .trials(3)
            .seed(7)
            .param("mu", "1/2");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["verdict"], "inconclusive-budget");
        assert_eq!(v["params"]["mu"], "1/2");
        assert!(v.get("runtime_ms").is_none());
        assert!(v.get("witness").is_none());
    }

    #[test]
    fn worst_verdict() {
        use Verdict::*;
        assert_eq!(Verified.worst(InconclusiveBudget), InconclusiveBudget);
        assert_eq!(InconclusiveBudget.worst(Counterexample), Counterexample);
        assert_eq!(Verified.worst(Verified), Verified);
    }
}
