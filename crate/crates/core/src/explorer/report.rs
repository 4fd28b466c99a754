//! The property harness: checks a metatheorem on every seed of a range,
//! in parallel, and reports one JSON line per seed in seed order.

use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use super::{check_subject_reduction, find_terminating_trace, generate, reachable, CounterExample, GenConfig};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    SubjectReduction,
    Progress,
    WeakTermination,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::SubjectReduction => "subject_reduction",
            Property::Progress => "progress",
            Property::WeakTermination => "weak_termination",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seeds: Range<u64>,
    pub max_depth: usize,
    /// Progress is checked on every state reachable within this many steps.
    pub progress_steps: usize,
    /// The termination search may expand this many states per node of the
    /// starting derivation.
    pub budget_factor: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seeds: 0..10_000, max_depth: 6, progress_steps: 5, budget_factor: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportLine {
    pub seed: u64,
    pub property: Property,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterExample>,
}

impl ReportLine {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

fn check(cfg: &SuiteConfig, property: Property, seed: u64) -> Result<(), CounterExample> {
    let d = generate(&GenConfig::new(seed, cfg.max_depth));
    match property {
        Property::SubjectReduction => check_subject_reduction(&d),
        Property::Progress => {
            let r = reachable(&d, cfg.progress_steps).map_err(|e| CounterExample::from_lts(&d, e))?;
            match r.stuck() {
                Some(s) => Err(CounterExample::at(s, "stuck: not terminated and no transition is enabled")),
                None => Ok(()),
            }
        }
        Property::WeakTermination => {
            let budget = cfg.budget_factor * d.size();
            find_terminating_trace(&d, budget).map(|_| ()).map_err(|e| CounterExample::at(&d, e.to_string()))
        }
    }
}

/// Runs `property` on every seed of `cfg.seeds`; the result is in seed
/// order whatever the scheduling.
pub fn run_suite(cfg: &SuiteConfig, property: Property) -> Vec<ReportLine> {
    let seeds: Vec<u64> = cfg.seeds.clone().collect();
    seeds
        .par_iter()
        .map(|&seed| {
            let counterexample = check(cfg, property, seed).err();
            ReportLine { seed, property, verdict: if counterexample.is_none() { "ok" } else { "fail" }, counterexample }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_is_ordered_and_deterministic() {
        let cfg = SuiteConfig { seeds: 0..40, ..SuiteConfig::default() };
        for p in [Property::SubjectReduction, Property::Progress, Property::WeakTermination] {
            let a = run_suite(&cfg, p);
            let b = run_suite(&cfg, p);
            assert_eq!(a, b);
            assert!(a.windows(2).all(|w| w[0].seed < w[1].seed));
            for line in &a {
                assert!(line.ok(), "{}", line.to_json());
            }
        }
    }

    #[test]
    fn json_line_shape() {
        let line = ReportLine { seed: 3, property: Property::Progress, verdict: "ok", counterexample: None };
        assert_eq!(line.to_json(), r#"{"seed":3,"property":"progress","verdict":"ok"}"#);
    }
}
