//! Finite-domain CSP oracle: propagation plus depth-first backtracking
//! search returning solutions one at a time, with constraints added
//! incrementally between solutions.
//!
//! The search is chronological (no learning) and deterministic. A constraint
//! posted mid-search is enforced on the whole remaining tree: it joins the
//! propagator set, so every node reached after the post re-checks it, and
//! the search backtracks out of any prefix it kills.

mod prop;

use thiserror::Error;

use crate::ir::{Expr, Instance, Valuation, VarId};

use prop::{Node, Outcome};

/// Current domain of one variable: a sorted set of values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ValueSet {
    values: Vec<i64>,
}

impl ValueSet {
    fn from_sorted(values: Vec<i64>) -> ValueSet {
        debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
        ValueSet { values }
    }

    pub(crate) fn min(&self) -> i64 {
        self.values[0]
    }

    pub(crate) fn max(&self) -> i64 {
        *self.values.last().unwrap()
    }

    pub(crate) fn len(&self) -> usize {
        self.values.len()
    }

    pub(crate) fn is_fixed(&self) -> bool {
        self.values.len() == 1
    }

    pub(crate) fn contains(&self, v: i64) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.iter().copied()
    }

    /// Keeps values `<= bound`; false iff the set became empty.
    pub(crate) fn remove_above(&mut self, bound: i64) -> bool {
        self.values.retain(|&v| v <= bound);
        !self.values.is_empty()
    }

    pub(crate) fn remove_below(&mut self, bound: i64) -> bool {
        self.values.retain(|&v| v >= bound);
        !self.values.is_empty()
    }

    pub(crate) fn remove_value(&mut self, v: i64) -> bool {
        if let Ok(i) = self.values.binary_search(&v) {
            self.values.remove(i);
        }
        !self.values.is_empty()
    }

    fn assign(&mut self, v: i64) {
        debug_assert!(self.contains(v));
        self.values.clear();
        self.values.push(v);
    }
}

/// Variable selection strategy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum VarOrder {
    #[default]
    InputOrder,
    /// Smallest current domain, ties broken by declaration order.
    FirstFail,
    /// The listed variables first (in order), remaining ones in input order.
    Explicit(Vec<VarId>),
}

/// Value ordering strategy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum ValOrder {
    #[default]
    MinFirst,
    MaxFirst,
    /// Per-variable preferred value sequences; unlisted values follow in
    /// ascending order.
    PreferredFirst(Vec<(VarId, Vec<i64>)>),
}

/// Search configuration for [`SolverState::next_solution`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchConfig {
    pub var_order: VarOrder,
    pub val_order: ValOrder,
    /// Cumulative cap on decisions over the lifetime of the state.
    pub node_limit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("ill-typed constraint: {0}")]
    IllTyped(String),
    #[error("sol() reference in a posted constraint")]
    SolInConstraint,
    #[error("node limit exceeded")]
    NodeLimit,
    #[error("solution limit exceeded")]
    SolutionLimit,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("explicit variable order repeats a variable")]
    BadVarOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SearchStatus {
    Fresh,
    AtSolution,
    RootFailed,
    Done,
}

struct Level {
    trail_mark: usize,
    var: usize,
    values: Vec<i64>,
    next: usize,
}

/// Solver state over one instance: current domains, posted propagators,
/// a chronological trail, and the decision stack of the ongoing search.
pub struct SolverState {
    n_vars: usize,
    domains: Vec<ValueSet>,
    props: Vec<Node>,
    trail: Vec<(usize, ValueSet)>,
    saved_mark: Vec<usize>, // last level (1-based) that saved this var; 0 = none
    levels: Vec<Level>,
    status: SearchStatus,
    nodes: u64,
    solutions: u64,
}

impl SolverState {
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn solutions(&self) -> u64 {
        self.solutions
    }

    /// True iff initial propagation already proved unsatisfiability.
    pub fn is_failed(&self) -> bool {
        self.status == SearchStatus::RootFailed
    }

    fn save(
        trail: &mut Vec<(usize, ValueSet)>,
        saved_mark: &mut [usize],
        level: usize,
        var: usize,
        d: &ValueSet,
    ) {
        // one snapshot per variable per level is enough
        if saved_mark[var] != level {
            saved_mark[var] = level;
            trail.push((var, d.clone()));
        }
    }

    fn propagate(&mut self) -> bool {
        let level = self.levels.len();
        loop {
            let mut changed = false;
            for p in &self.props {
                let trail = &mut self.trail;
                let marks = &mut self.saved_mark;
                let mut save = |var: usize, d: &ValueSet| {
                    Self::save(trail, marks, level, var, d);
                };
                match p.enforce(&mut self.domains, &mut save) {
                    Outcome::Failed => return false,
                    Outcome::Changed => changed = true,
                    Outcome::Fixpoint => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn all_fixed(&self) -> bool {
        self.domains.iter().all(|d| d.is_fixed())
    }

    fn extract(&self) -> Valuation {
        Valuation::from_values(self.domains.iter().map(|d| d.min()).collect())
    }

    fn pick_var(&self, config: &SearchConfig) -> Option<usize> {
        match &config.var_order {
            VarOrder::InputOrder => (0..self.n_vars).find(|&i| !self.domains[i].is_fixed()),
            VarOrder::FirstFail => (0..self.n_vars)
                .filter(|&i| !self.domains[i].is_fixed())
                .min_by_key(|&i| (self.domains[i].len(), i)),
            VarOrder::Explicit(order) => order
                .iter()
                .map(|v| v.0)
                .find(|&i| !self.domains[i].is_fixed())
                .or_else(|| (0..self.n_vars).find(|&i| !self.domains[i].is_fixed())),
        }
    }

    fn order_values(&self, var: usize, config: &SearchConfig) -> Vec<i64> {
        let d = &self.domains[var];
        match &config.val_order {
            ValOrder::MinFirst => d.iter().collect(),
            ValOrder::MaxFirst => {
                let mut v: Vec<i64> = d.iter().collect();
                v.reverse();
                v
            }
            ValOrder::PreferredFirst(table) => {
                let mut out = Vec::with_capacity(d.len());
                if let Some((_, prefs)) = table.iter().find(|(v, _)| v.0 == var) {
                    for &p in prefs {
                        if d.contains(p) && !out.contains(&p) {
                            out.push(p);
                        }
                    }
                }
                for v in d.iter() {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
                out
            }
        }
    }

    fn restore_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (var, dom) = self.trail.pop().unwrap();
            self.domains[var] = dom;
            self.saved_mark[var] = usize::MAX; // stale; any level may re-save
        }
    }

    /// Advances the top decision to its next value, popping exhausted
    /// levels. Returns false when the whole tree is exhausted.
    fn backtrack_next(&mut self, config: &SearchConfig) -> Result<bool, EngineError> {
        loop {
            let Some(top) = self.levels.last() else {
                return Ok(false);
            };
            let mark = top.trail_mark;
            self.restore_to(mark);
            let level = self.levels.len();
            let top = self.levels.last_mut().unwrap();
            top.next += 1;
            if top.next < top.values.len() {
                let var = top.var;
                let value = top.values[top.next];
                let trail = &mut self.trail;
                let marks = &mut self.saved_mark;
                Self::save(trail, marks, level, var, &self.domains[var]);
                self.domains[var].assign(value);
                self.nodes += 1;
                if let Some(limit) = config.node_limit {
                    if self.nodes > limit {
                        return Err(EngineError::NodeLimit);
                    }
                }
                return Ok(true);
            }
            self.levels.pop();
        }
    }

    /// Descends from the current node until a solution or exhaustion.
    /// Assumes the current node has not been propagated yet.
    fn search(&mut self, config: &SearchConfig) -> Result<Option<Valuation>, EngineError> {
        loop {
            if !self.propagate() {
                if !self.backtrack_next(config)? {
                    self.status = SearchStatus::Done;
                    return Ok(None);
                }
                continue;
            }
            if self.all_fixed() {
                self.status = SearchStatus::AtSolution;
                self.solutions += 1;
                return Ok(Some(self.extract()));
            }
            let var = self.pick_var(config).expect("unfixed variable exists");
            let values = self.order_values(var, config);
            let level = self.levels.len() + 1;
            self.levels.push(Level {
                trail_mark: self.trail.len(),
                var,
                values,
                next: 0,
            });
            let value = self.levels.last().unwrap().values[0];
            let trail = &mut self.trail;
            let marks = &mut self.saved_mark;
            Self::save(trail, marks, level, var, &self.domains[var]);
            self.domains[var].assign(value);
            self.nodes += 1;
            if let Some(limit) = config.node_limit {
                if self.nodes > limit {
                    return Err(EngineError::NodeLimit);
                }
            }
        }
    }

    /// Returns the next solution, distinct from every previously returned
    /// one, resuming from where the last one was found; `None` once the
    /// tree is exhausted.
    pub fn next_solution(
        &mut self,
        config: &SearchConfig,
    ) -> Result<Option<Valuation>, EngineError> {
        if let VarOrder::Explicit(order) = &config.var_order {
            let mut seen = vec![false; self.n_vars];
            for v in order {
                if v.0 >= self.n_vars || seen[v.0] {
                    return Err(EngineError::BadVarOrder);
                }
                seen[v.0] = true;
            }
        }
        match self.status {
            SearchStatus::RootFailed | SearchStatus::Done => Ok(None),
            SearchStatus::Fresh => self.search(config),
            SearchStatus::AtSolution => {
                if !self.backtrack_next(config)? {
                    self.status = SearchStatus::Done;
                    return Ok(None);
                }
                self.search(config)
            }
        }
    }
}

/// Compiles all constraints of `instance` into propagators and runs initial
/// propagation to fixpoint (or failure).
pub fn post(instance: &Instance) -> Result<SolverState, EngineError> {
    instance
        .validate()
        .map_err(|e| EngineError::InvalidInstance(e.to_string()))?;
    let n = instance.vars.len();
    let domains: Vec<ValueSet> = instance
        .vars
        .iter()
        .map(|v| ValueSet::from_sorted(v.domain.values()))
        .collect();
    let mut props = Vec::with_capacity(instance.constraints.len());
    for c in &instance.constraints {
        props.push(prop::compile(c, instance)?);
    }
    let mut state = SolverState {
        n_vars: n,
        domains,
        props,
        trail: Vec::new(),
        saved_mark: vec![usize::MAX; n],
        levels: Vec::new(),
        status: SearchStatus::Fresh,
        nodes: 0,
        solutions: 0,
    };
    if !state.propagate() {
        state.status = SearchStatus::RootFailed;
    }
    // root prunings are permanent
    state.trail.clear();
    for m in &mut state.saved_mark {
        *m = usize::MAX;
    }
    Ok(state)
}

/// Compiles `c` against `instance` and adds it to a running state. The new
/// constraint holds on the entire remaining search; the resumed search
/// re-checks it along the active path and backtracks as needed.
///
/// Must be called between `next_solution` calls, never concurrently with
/// one, and `c` may not contain sol() references.
pub fn add_constraint(
    state: &mut SolverState,
    instance: &Instance,
    c: &Expr,
) -> Result<(), EngineError> {
    let node = prop::compile(c, instance)?;
    state.props.push(node);
    if state.status == SearchStatus::Fresh && state.levels.is_empty() {
        // not yet searching: propagate at the root, permanently
        if !state.propagate() {
            state.status = SearchStatus::RootFailed;
        }
        state.trail.clear();
        for m in &mut state.saved_mark {
            *m = usize::MAX;
        }
    }
    Ok(())
}

/// Enumerates every solution of `instance` in the configured DFS order,
/// erroring if more than `limit` exist.
pub fn enumerate_all(instance: &Instance, limit: usize) -> Result<Vec<Valuation>, EngineError> {
    enumerate_with(instance, &SearchConfig::default(), limit)
}

/// [`enumerate_all`] under an explicit search configuration.
pub fn enumerate_with(
    instance: &Instance,
    config: &SearchConfig,
    limit: usize,
) -> Result<Vec<Valuation>, EngineError> {
    let mut state = post(instance)?;
    let mut out = Vec::new();
    while let Some(sol) = state.next_solution(config)? {
        if out.len() == limit {
            return Err(EngineError::SolutionLimit);
        }
        out.push(sol);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{check, CmpOp, Domain};

    fn cmp(op: CmpOp, l: Expr, r: Expr) -> Expr {
        Expr::cmp(op, l, r)
    }

    fn x() -> Expr {
        Expr::var(VarId(0))
    }

    fn y() -> Expr {
        Expr::var(VarId(1))
    }

    #[test]
    fn post_prunes_bounds() {
        let inst = Instance::from_domains(
            vec![("x", Domain::IntRange { low: 1, high: 10 })],
            vec![cmp(CmpOp::Lt, x(), Expr::Int(4))],
        );
        let state = post(&inst).unwrap();
        assert_eq!(state.domains[0].iter().collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn post_detects_root_failure() {
        let inst = Instance::from_domains(
            vec![("x", Domain::IntRange { low: 1, high: 2 })],
            vec![Expr::and(
                cmp(CmpOp::Eq, x(), Expr::Int(1)),
                cmp(CmpOp::Eq, x(), Expr::Int(2)),
            )],
        );
        let state = post(&inst).unwrap();
        assert!(state.is_failed());
    }

    #[test]
    fn post_keeps_supported_bounds() {
        // x + y >= 2 over 0..2 squares: no bounds pruning possible,
        // e.g. x=0 is still supported by y=2.
        let inst = Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 0, high: 2 }),
                ("y", Domain::IntRange { low: 0, high: 2 }),
            ],
            vec![cmp(CmpOp::Ge, Expr::add(x(), y()), Expr::Int(2))],
        );
        let state = post(&inst).unwrap();
        assert_eq!(state.domains[0].iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(state.domains[1].iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn enumeration_order_min_first() {
        let inst =
            Instance::from_domains(vec![("x", Domain::IntRange { low: 1, high: 3 })], vec![]);
        let mut state = post(&inst).unwrap();
        let config = SearchConfig::default();
        let mut seen = Vec::new();
        while let Some(s) = state.next_solution(&config).unwrap() {
            seen.push(s.value(VarId(0)).unwrap());
        }
        assert_eq!(seen, vec![1, 2, 3]);
        assert_eq!(state.next_solution(&config).unwrap(), None);
    }

    #[test]
    fn clause_propagation_shapes_first_solution() {
        // x1 \/ x2 under input-order/min-first: branch x1=0 forces x2=1.
        let inst = Instance::from_domains(
            vec![("x1", Domain::Bool), ("x2", Domain::Bool)],
            vec![Expr::or(
                cmp(CmpOp::Eq, x(), Expr::Int(1)),
                cmp(CmpOp::Eq, y(), Expr::Int(1)),
            )],
        );
        let mut state = post(&inst).unwrap();
        let first = state
            .next_solution(&SearchConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(first.values(), &[0, 1]);
    }

    #[test]
    fn add_constraint_after_solution_closes_search() {
        let inst =
            Instance::from_domains(vec![("x", Domain::IntRange { low: 1, high: 3 })], vec![]);
        let mut state = post(&inst).unwrap();
        let config = SearchConfig::default();
        let s = state.next_solution(&config).unwrap().unwrap();
        assert_eq!(s.value(VarId(0)), Some(1));
        add_constraint(&mut state, &inst, &cmp(CmpOp::Lt, x(), Expr::Int(2))).unwrap();
        assert_eq!(state.next_solution(&config).unwrap(), None);
    }

    #[test]
    fn strictly_improving_chain() {
        // posting f(V) < f(S) after each solution yields decreasing values
        let inst =
            Instance::from_domains(vec![("x", Domain::IntRange { low: 1, high: 5 })], vec![]);
        let mut state = post(&inst).unwrap();
        let config = SearchConfig {
            val_order: ValOrder::MaxFirst,
            ..SearchConfig::default()
        };
        let mut prev = None;
        while let Some(s) = state.next_solution(&config).unwrap() {
            let v = s.value(VarId(0)).unwrap();
            if let Some(p) = prev {
                assert!(v < p);
            }
            prev = Some(v);
            add_constraint(&mut state, &inst, &cmp(CmpOp::Lt, x(), Expr::Int(v))).unwrap();
        }
        assert_eq!(prev, Some(1));
    }

    #[test]
    fn enumerate_all_counts() {
        let inst = Instance::from_domains(
            vec![("x1", Domain::Bool), ("x2", Domain::Bool)],
            vec![Expr::or(
                cmp(CmpOp::Eq, x(), Expr::Int(1)),
                cmp(CmpOp::Eq, y(), Expr::Int(1)),
            )],
        );
        assert_eq!(enumerate_all(&inst, 100).unwrap().len(), 3);
    }

    #[test]
    fn enumerate_all_empty_when_unsat() {
        let inst = Instance::from_domains(
            vec![("x", Domain::Bool)],
            vec![cmp(CmpOp::Gt, x(), Expr::Int(5))],
        );
        assert!(enumerate_all(&inst, 10).unwrap().is_empty());
    }

    #[test]
    fn enumerate_all_pairs_below() {
        let inst = Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 1, high: 3 }),
                ("y", Domain::IntRange { low: 1, high: 3 }),
            ],
            vec![cmp(CmpOp::Lt, x(), y())],
        );
        let sols = enumerate_all(&inst, 100).unwrap();
        let pairs: Vec<(i64, i64)> = sols
            .iter()
            .map(|s| (s.value(VarId(0)).unwrap(), s.value(VarId(1)).unwrap()))
            .collect();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn enumerate_all_respects_limit() {
        let inst =
            Instance::from_domains(vec![("x", Domain::IntRange { low: 1, high: 9 })], vec![]);
        assert_eq!(enumerate_all(&inst, 4), Err(EngineError::SolutionLimit));
    }

    #[test]
    fn zero_variable_instance_yields_empty_valuation_once() {
        let inst = Instance::new(vec![], vec![]);
        let mut state = post(&inst).unwrap();
        let config = SearchConfig::default();
        let s = state.next_solution(&config).unwrap().unwrap();
        assert!(s.is_empty());
        assert_eq!(state.next_solution(&config).unwrap(), None);
    }

    #[test]
    fn node_limit_reported_distinctly() {
        let inst = Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 1, high: 9 }),
                ("y", Domain::IntRange { low: 1, high: 9 }),
            ],
            vec![],
        );
        let mut state = post(&inst).unwrap();
        let config = SearchConfig {
            node_limit: Some(3),
            ..SearchConfig::default()
        };
        let mut err = None;
        for _ in 0..100 {
            match state.next_solution(&config) {
                Ok(Some(_)) => continue,
                Ok(None) => break,
                Err(e) => {
                    err = Some(e);
                    break;
                }
            }
        }
        assert_eq!(err, Some(EngineError::NodeLimit));
    }

    #[test]
    fn solutions_satisfy_check() {
        let inst = Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 0, high: 3 }),
                ("y", Domain::IntRange { low: 0, high: 3 }),
                ("b", Domain::Bool),
            ],
            vec![
                cmp(CmpOp::Le, Expr::add(x(), Expr::mul(2, y())), Expr::Int(5)),
                Expr::implies(
                    cmp(CmpOp::Eq, Expr::var(VarId(2)), Expr::Int(1)),
                    cmp(CmpOp::Gt, x(), y()),
                ),
            ],
        );
        for s in enumerate_all(&inst, 1000).unwrap() {
            assert!(check(&inst, &s).unwrap());
        }
    }

    /// Oracle equivalence on a brute-force filter of the full product space.
    #[test]
    fn enumeration_matches_product_space_filter() {
        let inst = Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 0, high: 2 }),
                (
                    "y",
                    Domain::IntSet {
                        values: vec![1, 3, 4],
                    },
                ),
                ("b", Domain::Bool),
            ],
            vec![
                cmp(CmpOp::Ne, x(), y()),
                Expr::or(
                    cmp(CmpOp::Eq, Expr::var(VarId(2)), Expr::Int(0)),
                    cmp(CmpOp::Ge, Expr::add(x(), y()), Expr::Int(4)),
                ),
            ],
        );
        let mut expected = Vec::new();
        for xv in 0..=2 {
            for yv in [1, 3, 4] {
                for bv in 0..=1 {
                    let v = Valuation::from_values(vec![xv, yv, bv]);
                    if check(&inst, &v).unwrap() {
                        expected.push(v);
                    }
                }
            }
        }
        let mut got = enumerate_all(&inst, 1000).unwrap();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    /// Interleaving add_constraint with next_solution yields exactly the
    /// not-yet-seen solutions of the final constraint set.
    #[test]
    fn incremental_matches_restart() {
        let inst = Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 0, high: 3 }),
                ("y", Domain::IntRange { low: 0, high: 3 }),
            ],
            vec![cmp(CmpOp::Ge, Expr::add(x(), y()), Expr::Int(2))],
        );
        let extra = cmp(CmpOp::Lt, x(), Expr::Int(2));
        let config = SearchConfig::default();

        let mut state = post(&inst).unwrap();
        let mut incremental = Vec::new();
        let mut first_two = 0;
        while let Some(s) = state.next_solution(&config).unwrap() {
            incremental.push(s.clone());
            first_two += 1;
            if first_two == 2 {
                add_constraint(&mut state, &inst, &extra).unwrap();
            }
        }

        // restart-from-scratch reference: the first two solutions of the
        // original instance, then the unseen solutions of the tightened one
        let base = enumerate_all(&inst, 100).unwrap();
        let mut tightened_inst = inst.clone();
        tightened_inst.constraints.push(extra);
        let tightened = enumerate_all(&tightened_inst, 100).unwrap();
        let mut expected: Vec<Valuation> = base[..2].to_vec();
        for s in tightened {
            if !expected.contains(&s) {
                expected.push(s);
            }
        }
        assert_eq!(incremental, expected);
    }

    /// Every pruned value is genuinely unsupported: forcing it makes the
    /// instance unsatisfiable.
    #[test]
    fn pruning_never_removes_supported_values() {
        let inst = Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 0, high: 4 }),
                ("y", Domain::IntRange { low: 0, high: 4 }),
            ],
            vec![
                cmp(CmpOp::Le, Expr::add(x(), y()), Expr::Int(3)),
                cmp(CmpOp::Lt, y(), Expr::Int(2)),
            ],
        );
        let state = post(&inst).unwrap();
        for (i, decl) in inst.vars.iter().enumerate() {
            for v in decl.domain.values() {
                if !state.domains[i].contains(v) {
                    let mut forced = inst.clone();
                    forced
                        .constraints
                        .push(cmp(CmpOp::Eq, Expr::var(VarId(i)), Expr::Int(v)));
                    assert!(enumerate_all(&forced, 100).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn first_fail_breaks_ties_by_declaration_order() {
        let inst = Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 0, high: 2 }),
                ("y", Domain::Bool),
                ("z", Domain::Bool),
            ],
            vec![],
        );
        let state = post(&inst).unwrap();
        let config = SearchConfig {
            var_order: VarOrder::FirstFail,
            ..SearchConfig::default()
        };
        assert_eq!(state.pick_var(&config), Some(1));
    }
}
