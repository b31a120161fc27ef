//! Compiled constraint forms and their propagation.
//!
//! Every constraint is normalized to negation normal form over linear
//! comparison atoms. A single recursive propagator then serves all shapes:
//! linear comparisons get bounds propagation, disjunctions propagate their
//! last open branch (clause style), and implications wake once their guard
//! is entailed. `bool2int` of a nested formula becomes an indicator term
//! with 0/1 bounds refined by the formula's entailment status.

use crate::ir::{self, CmpOp, Expr, Instance, VarId};

use super::{EngineError, ValueSet};

/// Entailment status of a boolean node under current domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Status {
    True,
    False,
    Unknown,
}

/// Result of running one propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Outcome {
    Fixpoint,
    Changed,
    Failed,
}

/// A boolean constraint tree in negation normal form.
#[derive(Debug, Clone)]
pub(super) enum Node {
    Const(bool),
    Cmp(LinCmp),
    And(Vec<Node>),
    Or(Vec<Node>),
}

/// `lin ⋈ 0` with the operator restricted to `Le`, `Lt`, `Eq`, `Ne`
/// (the remaining comparisons are normalized away by negating `lin`).
#[derive(Debug, Clone)]
pub(super) struct LinCmp {
    pub op: CmpOp,
    pub lin: Lin,
}

#[derive(Debug, Clone)]
pub(super) struct Lin {
    pub terms: Vec<Term>,
    pub constant: i64,
}

#[derive(Debug, Clone)]
pub(super) enum Term {
    Var {
        coef: i64,
        var: VarId,
    },
    /// `coef * bool2int(node)`.
    Ind {
        coef: i64,
        node: Box<Node>,
    },
}

impl Lin {
    fn negated(mut self) -> Lin {
        for t in &mut self.terms {
            match t {
                Term::Var { coef, .. } => *coef = -*coef,
                Term::Ind { coef, .. } => *coef = -*coef,
            }
        }
        self.constant = -self.constant;
        self
    }

    fn bounds(&self, domains: &[ValueSet]) -> (i128, i128) {
        let mut lo = self.constant as i128;
        let mut hi = self.constant as i128;
        for t in &self.terms {
            match t {
                Term::Var { coef, var } => {
                    let d = &domains[var.0];
                    let (a, b) = (d.min() as i128, d.max() as i128);
                    let c = *coef as i128;
                    if c >= 0 {
                        lo += c * a;
                        hi += c * b;
                    } else {
                        lo += c * b;
                        hi += c * a;
                    }
                }
                Term::Ind { coef, node } => {
                    let c = *coef as i128;
                    let (a, b) = match node.status(domains) {
                        Status::True => (1, 1),
                        Status::False => (0, 0),
                        Status::Unknown => (0, 1),
                    };
                    if c >= 0 {
                        lo += c * a;
                        hi += c * b;
                    } else {
                        lo += c * b;
                        hi += c * a;
                    }
                }
            }
        }
        (lo, hi)
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) == (b < 0)) {
        q + 1
    } else {
        q
    }
}

fn clamp_i64(x: i128) -> i64 {
    x.clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

impl Node {
    pub(super) fn status(&self, domains: &[ValueSet]) -> Status {
        match self {
            Node::Const(true) => Status::True,
            Node::Const(false) => Status::False,
            Node::Cmp(c) => c.status(domains),
            Node::And(children) => {
                let mut all_true = true;
                for ch in children {
                    match ch.status(domains) {
                        Status::False => return Status::False,
                        Status::Unknown => all_true = false,
                        Status::True => {}
                    }
                }
                if all_true {
                    Status::True
                } else {
                    Status::Unknown
                }
            }
            Node::Or(children) => {
                let mut all_false = true;
                for ch in children {
                    match ch.status(domains) {
                        Status::True => return Status::True,
                        Status::Unknown => all_false = false,
                        Status::False => {}
                    }
                }
                if all_false {
                    Status::False
                } else {
                    Status::Unknown
                }
            }
        }
    }

    /// Enforces the node: prunes domains so the constraint can still hold,
    /// failing when it cannot.
    pub(super) fn enforce(
        &self,
        domains: &mut [ValueSet],
        save: &mut impl FnMut(usize, &ValueSet),
    ) -> Outcome {
        match self {
            Node::Const(true) => Outcome::Fixpoint,
            Node::Const(false) => Outcome::Failed,
            Node::Cmp(c) => c.enforce(domains, save),
            Node::And(children) => {
                let mut changed = false;
                for ch in children {
                    match ch.enforce(domains, save) {
                        Outcome::Failed => return Outcome::Failed,
                        Outcome::Changed => changed = true,
                        Outcome::Fixpoint => {}
                    }
                }
                if changed {
                    Outcome::Changed
                } else {
                    Outcome::Fixpoint
                }
            }
            Node::Or(children) => {
                let mut open = None;
                for ch in children {
                    match ch.status(domains) {
                        Status::True => return Outcome::Fixpoint,
                        Status::False => {}
                        Status::Unknown => {
                            if open.is_some() {
                                // two open branches: nothing to propagate yet
                                return Outcome::Fixpoint;
                            }
                            open = Some(ch);
                        }
                    }
                }
                match open {
                    None => Outcome::Failed,
                    Some(ch) => ch.enforce(domains, save),
                }
            }
        }
    }
}

impl LinCmp {
    fn status(&self, domains: &[ValueSet]) -> Status {
        let (lo, hi) = self.lin.bounds(domains);
        match self.op {
            CmpOp::Le => {
                if hi <= 0 {
                    Status::True
                } else if lo > 0 {
                    Status::False
                } else {
                    Status::Unknown
                }
            }
            CmpOp::Lt => {
                if hi < 0 {
                    Status::True
                } else if lo >= 0 {
                    Status::False
                } else {
                    Status::Unknown
                }
            }
            CmpOp::Eq => {
                if lo == 0 && hi == 0 {
                    Status::True
                } else if lo > 0 || hi < 0 {
                    Status::False
                } else {
                    Status::Unknown
                }
            }
            CmpOp::Ne => {
                if lo == 0 && hi == 0 {
                    Status::False
                } else if lo > 0 || hi < 0 {
                    Status::True
                } else {
                    Status::Unknown
                }
            }
            _ => unreachable!("normalized comparison"),
        }
    }

    fn enforce(
        &self,
        domains: &mut [ValueSet],
        save: &mut impl FnMut(usize, &ValueSet),
    ) -> Outcome {
        match self.op {
            CmpOp::Le => enforce_le(&self.lin, 0, domains, save),
            CmpOp::Lt => enforce_le(&self.lin, -1, domains, save),
            CmpOp::Eq => {
                let a = enforce_le(&self.lin, 0, domains, save);
                if a == Outcome::Failed {
                    return Outcome::Failed;
                }
                let b = enforce_le(&self.lin.clone().negated(), 0, domains, save);
                match (a, b) {
                    (_, Outcome::Failed) => Outcome::Failed,
                    (Outcome::Changed, _) | (_, Outcome::Changed) => Outcome::Changed,
                    _ => Outcome::Fixpoint,
                }
            }
            CmpOp::Ne => enforce_ne(&self.lin, domains, save),
            _ => unreachable!("normalized comparison"),
        }
    }
}

/// Enforces `lin <= slack` by tightening each variable term's bound against
/// the minimal contribution of the remaining terms.
fn enforce_le(
    lin: &Lin,
    slack: i128,
    domains: &mut [ValueSet],
    save: &mut impl FnMut(usize, &ValueSet),
) -> Outcome {
    let (lo, _) = lin.bounds(domains);
    if lo > slack {
        return Outcome::Failed;
    }
    let mut changed = false;
    for t in &lin.terms {
        let (coef, var) = match t {
            Term::Var { coef, var } => (*coef as i128, *var),
            Term::Ind { .. } => continue,
        };
        if coef == 0 {
            continue;
        }
        let d = &domains[var.0];
        let term_min = if coef > 0 {
            coef * d.min() as i128
        } else {
            coef * d.max() as i128
        };
        let rest_min = lo - term_min;
        let budget = slack - rest_min; // coef * x <= budget
        if coef > 0 {
            let ub = clamp_i64(div_floor(budget, coef));
            if ub < d.max() {
                save(var.0, d);
                if !domains[var.0].remove_above(ub) {
                    return Outcome::Failed;
                }
                changed = true;
            }
        } else {
            let lb = clamp_i64(div_ceil(budget, coef));
            if lb > d.min() {
                save(var.0, d);
                if !domains[var.0].remove_below(lb) {
                    return Outcome::Failed;
                }
                changed = true;
            }
        }
    }
    if changed {
        Outcome::Changed
    } else {
        Outcome::Fixpoint
    }
}

/// Enforces `lin != 0`: once a single variable term is left open and every
/// indicator is decided, the unique violating value is removed.
fn enforce_ne(
    lin: &Lin,
    domains: &mut [ValueSet],
    save: &mut impl FnMut(usize, &ValueSet),
) -> Outcome {
    let mut fixed_sum = lin.constant as i128;
    let mut open: Option<(i128, VarId)> = None;
    for t in &lin.terms {
        match t {
            Term::Var { coef, var } => {
                let d = &domains[var.0];
                if d.is_fixed() {
                    fixed_sum += *coef as i128 * d.min() as i128;
                } else if open.is_some() {
                    return Outcome::Fixpoint;
                } else {
                    open = Some((*coef as i128, *var));
                }
            }
            Term::Ind { coef, node } => match node.status(domains) {
                Status::True => fixed_sum += *coef as i128,
                Status::False => {}
                Status::Unknown => return Outcome::Fixpoint,
            },
        }
    }
    match open {
        None => {
            if fixed_sum == 0 {
                Outcome::Failed
            } else {
                Outcome::Fixpoint
            }
        }
        Some((coef, var)) => {
            // coef * x + fixed_sum != 0
            if coef == 0 {
                return if fixed_sum == 0 {
                    Outcome::Failed
                } else {
                    Outcome::Fixpoint
                };
            }
            if (-fixed_sum) % coef != 0 {
                return Outcome::Fixpoint;
            }
            let bad = -fixed_sum / coef;
            if bad < i64::MIN as i128 || bad > i64::MAX as i128 {
                return Outcome::Fixpoint;
            }
            let bad = bad as i64;
            let d = &domains[var.0];
            if !d.contains(bad) {
                return Outcome::Fixpoint;
            }
            save(var.0, d);
            if !domains[var.0].remove_value(bad) {
                return Outcome::Failed;
            }
            Outcome::Changed
        }
    }
}

/// Compiles a constraint expression into a propagatable NNF tree.
///
/// The expression is expanded first (comprehensions unrolled, array
/// accesses resolved), so any well-typed sol-free constraint is accepted.
pub(super) fn compile(expr: &Expr, instance: &Instance) -> Result<Node, EngineError> {
    if expr.has_sol() {
        return Err(EngineError::SolInConstraint);
    }
    match ir::typecheck(expr, instance) {
        Ok(ir::Ty::Bool) => {}
        Ok(ir::Ty::Int) => return Err(EngineError::IllTyped("constraint is integer-typed".into())),
        Err(e) => return Err(EngineError::IllTyped(e.to_string())),
    }
    let expanded = ir::expand(expr).map_err(|e| EngineError::IllTyped(e.to_string()))?;
    Ok(to_node(&expanded, false))
}

/// Builds NNF: `negate` pushes an enclosing negation down to the atoms.
fn to_node(expr: &Expr, negate: bool) -> Node {
    match expr {
        Expr::Bool(b) => Node::Const(*b != negate),
        Expr::Not(e) => to_node(e, !negate),
        Expr::And(a, b) => {
            let (x, y) = (to_node(a, negate), to_node(b, negate));
            if negate {
                Node::Or(flatten_or(vec![x, y]))
            } else {
                Node::And(flatten_and(vec![x, y]))
            }
        }
        Expr::Or(a, b) => {
            let (x, y) = (to_node(a, negate), to_node(b, negate));
            if negate {
                Node::And(flatten_and(vec![x, y]))
            } else {
                Node::Or(flatten_or(vec![x, y]))
            }
        }
        Expr::Implies(a, b) => {
            // a -> b  ==  !a \/ b
            let (x, y) = (to_node(a, !negate), to_node(b, negate));
            if negate {
                Node::And(flatten_and(vec![x, y]))
            } else {
                Node::Or(flatten_or(vec![x, y]))
            }
        }
        Expr::Cmp(op, a, b) => {
            let op = if negate { op.negate() } else { *op };
            let mut lin = Lin {
                terms: Vec::new(),
                constant: 0,
            };
            lin_collect(a, 1, &mut lin);
            lin_collect(b, -1, &mut lin);
            let (op, lin) = match op {
                CmpOp::Le => (CmpOp::Le, lin),
                CmpOp::Lt => (CmpOp::Lt, lin),
                CmpOp::Ge => (CmpOp::Le, lin.negated()),
                CmpOp::Gt => (CmpOp::Lt, lin.negated()),
                CmpOp::Eq => (CmpOp::Eq, lin),
                CmpOp::Ne => (CmpOp::Ne, lin),
            };
            Node::Cmp(LinCmp { op, lin })
        }
        // remaining boolean forms cannot appear after expansion
        _ => unreachable!("expanded boolean expression"),
    }
}

fn flatten_and(nodes: Vec<Node>) -> Vec<Node> {
    let mut out = Vec::new();
    for n in nodes {
        match n {
            Node::And(children) => out.extend(children),
            other => out.push(other),
        }
    }
    out
}

fn flatten_or(nodes: Vec<Node>) -> Vec<Node> {
    let mut out = Vec::new();
    for n in nodes {
        match n {
            Node::Or(children) => out.extend(children),
            other => out.push(other),
        }
    }
    out
}

/// Collects `sign * expr` into a linear form.
fn lin_collect(expr: &Expr, sign: i64, lin: &mut Lin) {
    match expr {
        Expr::Int(i) => lin.constant = lin.constant.saturating_add(sign.saturating_mul(*i)),
        Expr::Var(v) => lin.terms.push(Term::Var {
            coef: sign,
            var: *v,
        }),
        Expr::Add(a, b) => {
            lin_collect(a, sign, lin);
            lin_collect(b, sign, lin);
        }
        Expr::Sub(a, b) => {
            lin_collect(a, sign, lin);
            lin_collect(b, -sign, lin);
        }
        Expr::Neg(e) => lin_collect(e, -sign, lin),
        Expr::MulConst(c, e) => lin_collect(e, sign.saturating_mul(*c), lin),
        Expr::BoolToInt(e) => lin.terms.push(Term::Ind {
            coef: sign,
            node: Box::new(to_node(e, false)),
        }),
        // integer-typed leaves after expansion are covered above
        _ => unreachable!("expanded integer expression"),
    }
}
