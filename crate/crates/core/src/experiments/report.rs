use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::instance::{check_instance, Instance};

/// A failed instance together with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub instance: Instance,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub description: String,
    /// Enumeration universe or sampling scheme.
    pub universe: String,
    pub seed: Option<u64>,
    /// Outside the proved range: violations are reported, not failed.
    pub exploratory: bool,
    pub instances: usize,
    pub failures: Vec<Failure>,
    pub violations: Vec<Failure>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
}

impl VerificationReport {
    pub fn new(theorem: &str, description: &str, universe: &str) -> Self {
        VerificationReport {
            theorem: theorem.into(),
            description: description.into(),
            universe: universe.into(),
            seed: None,
            exploratory: false,
            instances: 0,
            failures: Vec::new(),
            violations: Vec::new(),
            notes: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn exploratory(mut self, yes: bool) -> Self {
        self.exploratory = yes;
        self
    }

    /// Checks every instance in parallel and merges in input order. With
    /// `keep_notes` each outcome's summary is appended to `notes`.
    pub fn run(mut self, instances: Vec<Instance>, keep_notes: bool) -> Self {
        let start = Instant::now();
        let outcomes: Vec<_> = instances.par_iter().map(check_instance).collect();
        self.instances += instances.len();
        for (inst, out) in instances.into_iter().zip(outcomes) {
            match out {
                Ok(summary) => {
                    if keep_notes {
                        self.notes.push(summary);
                    }
                }
                Err(detail) => {
                    if keep_notes {
                        self.notes.push(format!("FAILED: {detail}"));
                    }
                    let f = Failure { instance: inst, detail };
                    if self.exploratory {
                        self.violations.push(f);
                    } else {
                        self.failures.push(f);
                    }
                }
            }
        }
        let ms = start.elapsed().as_secs_f64() * 1e3;
        self.wall_time_ms = Some(self.wall_time_ms.unwrap_or(0.0) + ms);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    /// Records a failure found outside instance checking.
    pub fn fail(&mut self, instance: Instance, detail: impl Into<String>) {
        let f = Failure {
            instance,
            detail: detail.into(),
        };
        if self.exploratory {
            self.violations.push(f);
        } else {
            self.failures.push(f);
        }
    }
}

/// Re-runs a failure record in isolation; `true` when it still fails.
pub fn replay(f: &Failure) -> bool {
    check_instance(&f.instance).is_err()
}
