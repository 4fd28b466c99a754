//! State-space exploration and the metatheory checks: subject reduction,
//! progress and weak termination over generated derivations, and the
//! independence of provable hypersequents over a bounded enumeration.

mod enumerate;
mod generate;
mod report;

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use serde::Serialize;
use serde_json::{json, Value};

pub use enumerate::{enumerate, enumerate_with, EnumBounds, Enumeration};
pub use generate::{generate, GenConfig};
pub use report::{run_suite, Property, ReportLine, SuiteConfig};

use crate::lts::{self, Label, LtsError, SosRule, State, Transition};
use crate::syntax::Process;
use crate::types::{hs_equal, Proposition};
use crate::typing::{hypersequent_json, validate};

/// A run of the transition system.
#[derive(Clone, Debug)]
pub struct Trace {
    pub start: State,
    pub steps: Vec<(Label, State)>,
}

impl Trace {
    pub fn last(&self) -> &State {
        self.steps.last().map(|(_, s)| s).unwrap_or(&self.start)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `{start, steps: [{label, process, type}]}`
    pub fn to_json(&self) -> Value {
        json!({
            "start": {
                "process": self.start.process().to_string(),
                "type": hypersequent_json(self.start.hypersequent()),
            },
            "steps": self.steps.iter().map(|(l, s)| json!({
                "label": l.to_string(),
                "process": s.process().to_string(),
                "type": hypersequent_json(s.hypersequent()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// A state (and possibly a transition) violating a checked property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterExample {
    pub process: String,
    #[serde(rename = "type")]
    pub hypersequent: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub reason: String,
}

impl CounterExample {
    fn at(s: &State, reason: impl Into<String>) -> Self {
        CounterExample {
            process: s.process().to_string(),
            hypersequent: s.hypersequent().to_string(),
            label: None,
            target: None,
            reason: reason.into(),
        }
    }

    fn on(t: &Transition, reason: impl Into<String>) -> Self {
        CounterExample {
            label: Some(t.label.to_string()),
            target: Some(format!("{} |- {}", t.target.process(), t.target.hypersequent())),
            ..CounterExample::at(&t.source, reason)
        }
    }

    fn from_lts(s: &State, e: LtsError) -> Self {
        CounterExample::at(s, e.to_string())
    }
}

/// The witness used when exploration fires a type input.
pub fn default_witness() -> Proposition {
    Proposition::One
}

/// The successors explored from a state: all transitions, followed by the
/// type inputs fired with [`default_witness`].
pub fn successors(s: &State) -> Result<Vec<Transition>, LtsError> {
    let mut ts = lts::transitions(s)?;
    for (x, _) in lts::type_inputs(s) {
        ts.push(lts::recv_type_step(s, &x, &default_witness())?);
    }
    Ok(ts)
}

/// Ok iff the process is terminated or some transition (including a type
/// input) is enabled.
pub fn check_progress(s: &State) -> Result<(), CounterExample> {
    if s.process().is_terminated() {
        return Ok(());
    }
    let ts = lts::transitions(s).map_err(|e| CounterExample::from_lts(s, e))?;
    if ts.is_empty() && lts::type_inputs(s).is_empty() {
        return Err(CounterExample::at(s, "stuck: not terminated and no transition is enabled"));
    }
    Ok(())
}

/// Silent transitions preserve the hypersequent exactly; observable ones
/// lead to valid states with a different hypersequent.
pub fn check_subject_reduction(s: &State) -> Result<(), CounterExample> {
    let ts = successors(s).map_err(|e| CounterExample::from_lts(s, e))?;
    for t in &ts {
        let v = validate(&t.target);
        if !v.ok {
            return Err(CounterExample::on(t, format!("target does not validate: {}", v.diagnostics.join("; "))));
        }
        let same = hs_equal(t.source.hypersequent(), t.target.hypersequent());
        match (t.label == Label::Tau, same) {
            (true, false) => return Err(CounterExample::on(t, "silent transition changed the type")),
            (false, true) => return Err(CounterExample::on(t, "observable transition preserved the type")),
            _ => {}
        }
    }
    Ok(())
}

/// The result of [`reachable`].
#[derive(Clone, Debug)]
pub struct Reachable {
    /// Distinct states up to α, in breadth-first order; the start is first.
    pub states: Vec<State>,
    /// Number of transitions leaving each state, including those leading
    /// past the exploration bound.
    pub out_degree: Vec<usize>,
    /// `(from, label, to)` indices into `states`.
    pub edges: Vec<(usize, Label, usize)>,
    /// Whether some state beyond the bounds was left unexplored.
    pub truncated: bool,
}

impl Reachable {
    /// The graph in DOT syntax: nodes are α-normal process texts, edges
    /// carry label texts.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lts {\n");
        for (i, s) in self.states.iter().enumerate() {
            out.push_str(&format!("  n{i} [label={:?}];\n", s.process().canonical().to_string()));
        }
        for (a, l, b) in &self.edges {
            out.push_str(&format!("  n{a} -> n{b} [label={:?}];\n", l.to_string()));
        }
        out.push_str("}\n");
        out
    }

    /// The first state that is neither terminated nor able to move.
    pub fn stuck(&self) -> Option<&State> {
        self.states.iter().zip(&self.out_degree).find(|(s, &n)| n == 0 && !s.process().is_terminated()).map(|(s, _)| s)
    }
}

/// Breadth-first closure under [`successors`], up to `max_steps`
/// transitions from the start, identifying α-equivalent states. Each
/// distinct state is typed once.
pub fn reachable(s: &State, max_steps: usize) -> Result<Reachable, LtsError> {
    reachable_bounded(s, max_steps, usize::MAX)
}

/// As [`reachable`], additionally keeping at most `max_states` states.
pub fn reachable_bounded(s: &State, max_steps: usize, max_states: usize) -> Result<Reachable, LtsError> {
    let witness = default_witness();
    let mut index: HashMap<Process, usize> = HashMap::default();
    let mut states = vec![s.clone()];
    let mut depth = vec![0];
    let mut out_degree = Vec::new();
    index.insert(s.process().canonical(), 0);
    let mut edges = Vec::new();
    let mut truncated = false;
    let mut i = 0;
    while i < states.len() {
        let raw = lts::raw_transitions(&states[i], Some(&witness));
        out_degree.push(raw.len());
        for t in raw {
            let key = t.target.canonical();
            let j = match index.get(&key) {
                Some(&j) => j,
                None if depth[i] >= max_steps || states.len() >= max_states => {
                    truncated = true;
                    continue;
                }
                None => {
                    let target = lts::type_target(&states[i], &t.label, &t.target)?;
                    let j = states.len();
                    index.insert(key, j);
                    states.push(target);
                    depth.push(depth[i] + 1);
                    j
                }
            };
            edges.push((i, t.label, j));
        }
        i += 1;
    }
    Ok(Reachable { states, out_degree, edges, truncated })
}

/// Search outcome when no terminating trace was found.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("no terminating trace found within {0} expansions")]
    Exhausted(usize),
    #[error("{0}")]
    Lts(String),
}

/// Orders successors for the termination search: disposals first, then
/// other silent steps, then other actions, and duplications last.
fn priority(t: &Transition) -> u8 {
    fn kind(l: &Label) -> u8 {
        match l {
            Label::DispReq { .. } | Label::DispAcc { .. } => 0,
            Label::SpawnReq { .. } | Label::SpawnAcc { .. } => 3,
            Label::Sync(a, b) => kind(a).max(kind(b)),
            _ => 2,
        }
    }
    match &t.label {
        Label::Tau if t.rules.contains(&SosRule::CutWeaken) => 0,
        Label::Tau if t.rules.contains(&SosRule::CutContract) => 3,
        Label::Tau => 1,
        l => kind(l),
    }
}

/// Depth-first search for a trace ending in a terminated process,
/// expanding at most `budget` states and never revisiting a state up to α.
pub fn find_terminating_trace(s: &State, budget: usize) -> Result<Trace, SearchError> {
    let mut visited = HashSet::default();
    let mut expansions = 0;
    let mut path = Vec::new();
    if dfs(s, budget, &mut expansions, &mut visited, &mut path)? {
        Ok(Trace { start: s.clone(), steps: path })
    } else {
        Err(SearchError::Exhausted(budget))
    }
}

fn dfs(
    s: &State,
    budget: usize,
    expansions: &mut usize,
    visited: &mut HashSet<Process>,
    path: &mut Vec<(Label, State)>,
) -> Result<bool, SearchError> {
    if s.process().is_terminated() {
        return Ok(true);
    }
    if !visited.insert(s.process().canonical()) || *expansions >= budget {
        return Ok(false);
    }
    *expansions += 1;
    let mut ts = successors(s).map_err(|e| SearchError::Lts(e.to_string()))?;
    ts.sort_by_key(priority);
    for t in ts {
        path.push((t.label, t.target));
        let (_, next) = path.last().expect("pushed");
        let next = next.clone();
        if dfs(&next, budget, expansions, visited, path)? {
            return Ok(true);
        }
        path.pop();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;
    use crate::typing::infer;

    fn state(src: &str) -> State {
        infer(&parse_process(src).unwrap()).unwrap()
    }

    #[test]
    fn progress_examples() {
        assert!(check_progress(&state("0 | 0")).is_ok());
        assert!(check_progress(&state("close x")).is_ok());
        assert!(check_progress(&state("x(type X).x(w).link [X] w x")).is_ok());
    }

    #[test]
    fn subject_reduction_examples() {
        assert!(check_subject_reduction(&state("new (x,y){ close x | wait y.0 }")).is_ok());
        assert!(check_subject_reduction(&state("wait x.0")).is_ok());
        assert!(check_subject_reduction(&state("!x(y).close y")).is_ok());
    }

    #[test]
    fn reachable_examples() {
        let r = reachable(&state("0"), 10).unwrap();
        assert_eq!(r.states.len(), 1);
        assert!(!r.truncated);
        let r = reachable(&state("new (x,y){ close x | wait y.0 }"), 10).unwrap();
        assert_eq!(r.states.len(), 2);
        assert_eq!(r.states[1].process().to_string(), "0 | 0");
        assert!(!r.truncated);
        let r = reachable(&state("!x(y).close y"), 2).unwrap();
        assert!(r.truncated);
        let r = reachable_bounded(&state("!x(y).close y | wait z.0"), usize::MAX, 3).unwrap();
        assert_eq!(r.states.len(), 3);
        assert!(r.truncated);
    }

    #[test]
    fn reachable_states_are_pairwise_distinct() {
        let r = reachable(&state("!x(y).close y | wait z.0"), 3).unwrap();
        for (i, a) in r.states.iter().enumerate() {
            for b in &r.states[i + 1..] {
                assert!(!a.process().alpha_eq(b.process()));
            }
        }
    }

    #[test]
    fn dot_output() {
        let r = reachable(&state("new (x,y){ close x | wait y.0 }"), 10).unwrap();
        let dot = r.to_dot();
        assert!(dot.contains("n0 -> n1 [label=\"tau\"]"));
        assert!(dot.contains("[label=\"0 | 0\"]"));
    }

    #[test]
    fn terminating_traces() {
        let t = find_terminating_trace(&state("0"), 1).unwrap();
        assert!(t.is_empty());
        let t = find_terminating_trace(&state("!x(y).close y"), 10).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.steps[0].0.to_string(), "!x(-:1)");
        assert_eq!(t.last().process().to_string(), "0");
        let t = find_terminating_trace(&state("new (x,y){ close x | wait y.0 }"), 10).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.steps[0].0, Label::Tau);
        let j = t.to_json();
        assert_eq!(j["steps"][0]["process"], "0 | 0");
        assert_eq!(j["steps"][0]["type"], json!([]));
    }

    #[test]
    fn exhausted_budget() {
        let err = find_terminating_trace(&state("close x | close y"), 1).unwrap_err();
        assert_eq!(err, SearchError::Exhausted(1));
    }
}
