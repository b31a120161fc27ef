//! The solve-and-post loop and its companions: the forward pass that posts
//! one dominance nogood per solution until exhaustion, the backward pass
//! that removes solutions strictly dominated by later ones, a brute-force
//! full-solution oracle, and the three set-property checkers (complete,
//! domination-free, equivalence-free).
//!
//! The oracle's enumeration order is a function of the search
//! configuration, so the forward *sequence* differs across configurations;
//! the final set's equivalence-class family does not (for the
//! preorder-lawful relations).

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dominance::{self, DominanceError, DominanceSpec, NogoodMode};
use crate::engine::{self, EngineError, SearchConfig};
use crate::ir::{Instance, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DriverError {
    #[error("engine error: {0}")]
    Engine(#[from] EngineError),
    #[error("dominance error: {0}")]
    Dominance(#[from] DominanceError),
    #[error("run was truncated by a limit; completeness not established")]
    Truncated,
    #[error("solution limit {0} exceeded during enumeration")]
    LimitExceeded(usize),
}

/// Which limit cut a run short.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    Solutions,
    Nodes,
}

/// Counters for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub oracle_calls: u64,
    pub nodes: u64,
    pub millis: u64,
}

/// Outcome of the forward loop: the oracle's solution sequence in order,
/// the final set once a backward pass ran, and run statistics.
#[derive(Debug, Clone)]
pub struct CdpRun {
    pub instance: Instance,
    pub mode: NogoodMode,
    pub config: SearchConfig,
    pub forward_solutions: Vec<Valuation>,
    pub final_set: Option<Vec<Valuation>>,
    pub stats: RunStats,
    pub truncated: Option<Truncation>,
    pub nogoods_posted: u64,
}

/// Optional caps on the forward loop.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunLimits {
    pub max_solutions: Option<u64>,
}

/// The forward loop: repeatedly ask the oracle for a solution, record it,
/// and post the dominance nogood instantiated at it. The recorded sequence
/// is a complete set; in equivalence-free mode it is also equivalence-free.
pub fn solve_forward(
    instance: &Instance,
    spec: &DominanceSpec,
    mode: NogoodMode,
    config: &SearchConfig,
) -> Result<CdpRun, DriverError> {
    solve_forward_limited(instance, spec, mode, config, RunLimits::default())
}

/// [`solve_forward`] with explicit limits; a truncated run is flagged and
/// makes no completeness claim.
pub fn solve_forward_limited(
    instance: &Instance,
    spec: &DominanceSpec,
    mode: NogoodMode,
    config: &SearchConfig,
    limits: RunLimits,
) -> Result<CdpRun, DriverError> {
    let start = Instant::now();
    let mut state = engine::post(instance)?;
    let mut forward = Vec::new();
    let mut truncated = None;
    let mut nogoods_posted = 0u64;
    let mut oracle_calls = 0u64;
    loop {
        if let Some(max) = limits.max_solutions {
            if forward.len() as u64 >= max {
                truncated = Some(Truncation::Solutions);
                break;
            }
        }
        oracle_calls += 1;
        let sol = match state.next_solution(config) {
            Ok(s) => s,
            Err(EngineError::NodeLimit) => {
                truncated = Some(Truncation::Nodes);
                break;
            }
            Err(e) => return Err(e.into()),
        };
        let Some(sol) = sol else { break };
        let nogood = dominance::compile_nogood_mode(spec, &sol, mode)?;
        forward.push(sol);
        engine::add_constraint(&mut state, instance, &nogood)?;
        nogoods_posted += 1;
    }
    Ok(CdpRun {
        instance: instance.clone(),
        mode,
        config: config.clone(),
        forward_solutions: forward,
        final_set: None,
        stats: RunStats {
            oracle_calls,
            nodes: state.nodes(),
            millis: start.elapsed().as_millis() as u64,
        },
        truncated,
        nogoods_posted,
    })
}

/// The backward pass: sweep the forward sequence from last to first and
/// drop any solution strictly dominated by a later one. Strict domination
/// is decided through the nogood: in an equivalence-free forward chain a
/// later solution's nogood evaluating false at an earlier solution is
/// exactly strict domination (the earlier one cannot dominate back, having
/// posted its own nogood first).
///
/// Built-in preorders only need comparisons against *kept* solutions;
/// CP-net and custom specs (transitivity not established) compare against
/// every later solution.
pub fn backward_pass(run: &CdpRun, spec: &DominanceSpec) -> Result<Vec<Valuation>, DriverError> {
    if run.truncated.is_some() {
        return Err(DriverError::Truncated);
    }
    let sols = &run.forward_solutions;
    let compare_all_later = spec.is_cpnet() || spec.is_custom();
    let n = sols.len();
    let mut keep = vec![true; n];
    for x in (0..n).rev() {
        for y in (x + 1)..n {
            if !compare_all_later && !keep[y] {
                continue;
            }
            if !dominance::eval_nogood(spec, &sols[y], &sols[x])? {
                keep[x] = false;
                break;
            }
        }
    }
    Ok(sols
        .iter()
        .zip(keep.iter())
        .filter(|(_, &k)| k)
        .map(|(s, _)| s.clone())
        .collect())
}

/// Runs the forward loop and the backward pass in one call, recording the
/// final set on the returned run.
pub fn solve(
    instance: &Instance,
    spec: &DominanceSpec,
    mode: NogoodMode,
    config: &SearchConfig,
) -> Result<CdpRun, DriverError> {
    let mut run = solve_forward(instance, spec, mode, config)?;
    let final_set = backward_pass(&run, spec)?;
    run.final_set = Some(final_set);
    Ok(run)
}

/// Brute-force full solution: enumerate every CSP solution (erroring above
/// `limit`) and keep exactly those not strictly dominated by any other,
/// independent of the incremental solve path. Requires a relation-bearing
/// (non-custom) spec.
pub fn brute_force_full_solution(
    instance: &Instance,
    spec: &DominanceSpec,
    limit: usize,
) -> Result<Vec<Valuation>, DriverError> {
    if spec.is_custom() {
        return Err(DominanceError::CustomUnsupported.into());
    }
    let all = enumerate(instance, limit)?;
    let mut out = Vec::new();
    for x in &all {
        let mut dominated = false;
        for y in &all {
            if dominance::strictly_dominates(spec, y, x)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            out.push(x.clone());
        }
    }
    Ok(out)
}

fn enumerate(instance: &Instance, limit: usize) -> Result<Vec<Valuation>, DriverError> {
    match engine::enumerate_all(instance, limit) {
        Ok(v) => Ok(v),
        Err(EngineError::SolutionLimit) => Err(DriverError::LimitExceeded(limit)),
        Err(e) => Err(e.into()),
    }
}

/// Every solution of the instance is dominated by or equivalent to some
/// member of `set`.
pub fn check_complete(
    set: &[Valuation],
    instance: &Instance,
    spec: &DominanceSpec,
    limit: usize,
) -> Result<bool, DriverError> {
    let all = enumerate(instance, limit)?;
    for x in &all {
        let mut covered = false;
        for y in set {
            if dominance::leq(spec, y, x)? {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No member of `set` is strictly dominated by another member.
pub fn check_domination_free(set: &[Valuation], spec: &DominanceSpec) -> Result<bool, DriverError> {
    for x in set {
        for y in set {
            if dominance::strictly_dominates(spec, y, x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// No two distinct members of `set` are equivalent.
pub fn check_equivalence_free(
    set: &[Valuation],
    spec: &DominanceSpec,
) -> Result<bool, DriverError> {
    for (i, x) in set.iter().enumerate() {
        for y in &set[i + 1..] {
            if dominance::sim(spec, x, y)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Groups a set into equivalence classes under the spec's relation; each
/// class is sorted and the family is sorted, so equal families compare
/// equal structurally.
pub fn equivalence_classes(
    set: &[Valuation],
    spec: &DominanceSpec,
) -> Result<Vec<Vec<Valuation>>, DriverError> {
    let mut classes: Vec<Vec<Valuation>> = Vec::new();
    for x in set {
        let mut placed = false;
        for class in &mut classes {
            if dominance::sim(spec, &class[0], x)? {
                class.push(x.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![x.clone()]);
        }
    }
    for class in &mut classes {
        class.sort();
    }
    classes.sort();
    Ok(classes)
}

/// Property verdicts; `None` means the property was not evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Properties {
    pub complete: Option<bool>,
    pub domination_free: Option<bool>,
    pub equivalence_free: Option<bool>,
}

/// Serializable run report shared with the command-line interface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub solutions: Vec<BTreeMap<String, i64>>,
    pub final_set: Vec<BTreeMap<String, i64>>,
    pub properties: Properties,
    pub stats: RunStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated: Option<Truncation>,
}

/// Renders a valuation as a name-to-value map in sorted key order.
pub fn valuation_map(instance: &Instance, v: &Valuation) -> BTreeMap<String, i64> {
    instance
        .vars
        .iter()
        .map(|decl| (decl.name.clone(), v.value(decl.id).unwrap_or(0)))
        .collect()
}

/// Reads a valuation back from a report map.
pub fn valuation_from_map(instance: &Instance, map: &BTreeMap<String, i64>) -> Option<Valuation> {
    let mut values = Vec::with_capacity(instance.vars.len());
    for decl in &instance.vars {
        values.push(*map.get(&decl.name)?);
    }
    Some(Valuation::from_values(values))
}

impl CdpRun {
    /// Builds the serializable report for this run.
    pub fn report(&self, properties: Properties) -> RunReport {
        RunReport {
            solutions: self
                .forward_solutions
                .iter()
                .map(|s| valuation_map(&self.instance, s))
                .collect(),
            final_set: self
                .final_set
                .as_deref()
                .unwrap_or(&[])
                .iter()
                .map(|s| valuation_map(&self.instance, s))
                .collect(),
            properties,
            stats: self.stats,
            truncated: self.truncated,
        }
    }
}
