//! Language-neutral intermediate representation shared by every other module:
//! CSP instances, the expression tree used for constraints and dominance
//! nogoods, and total valuations.

mod eval;
mod json;

pub use eval::{check, evaluate, expand, typecheck, Ty, Value};
pub use json::{instance_from_json, instance_to_json, valuation_from_json, valuation_to_json};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a variable within its [`Instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub usize);

/// The set of values a variable may take.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// Booleans are plain 0/1 integers.
    Bool,
    IntRange {
        low: i64,
        high: i64,
    },
    IntSet {
        values: Vec<i64>,
    },
}

impl Domain {
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            Domain::Bool => Ok(()),
            Domain::IntRange { low, high } => {
                if low > high {
                    Err(ModelError::EmptyDomain)
                } else {
                    Ok(())
                }
            }
            Domain::IntSet { values } => {
                if values.is_empty() {
                    return Err(ModelError::EmptyDomain);
                }
                if values.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(ModelError::UnsortedDomain);
                }
                Ok(())
            }
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        match self {
            Domain::Bool => v == 0 || v == 1,
            Domain::IntRange { low, high } => *low <= v && v <= *high,
            Domain::IntSet { values } => values.binary_search(&v).is_ok(),
        }
    }

    pub fn values(&self) -> Vec<i64> {
        match self {
            Domain::Bool => vec![0, 1],
            Domain::IntRange { low, high } => (*low..=*high).collect(),
            Domain::IntSet { values } => values.clone(),
        }
    }

    pub fn size(&self) -> u64 {
        match self {
            Domain::Bool => 2,
            Domain::IntRange { low, high } => (high - low + 1) as u64,
            Domain::IntSet { values } => values.len() as u64,
        }
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, Domain::Bool)
    }
}

/// A declared variable: identifier, unique name, finite domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub id: VarId,
    pub name: String,
    pub domain: Domain,
}

/// Comparison operators over integer expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn apply(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }

    /// The operator computing the negated comparison.
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Gt => CmpOp::Le,
        }
    }
}

/// Expression tree shared by constraints, objectives, and dominance-nogood
/// templates. Variables are integer-valued (booleans are 0/1 domains);
/// comparisons produce booleans, logic connectives combine booleans.
///
/// `Sol` references the value of a variable in a previously found solution
/// and may appear only in dominance-nogood templates. Comprehension bounds
/// are compile-time constants; `Idx` refers to the named binder of the
/// innermost enclosing comprehension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Var(VarId),
    Sol(Box<Expr>),
    /// Access into a flattened array: selects `vars[index - low]`.
    Element {
        vars: Vec<VarId>,
        low: i64,
        index: Box<Expr>,
    },
    Idx(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    MulConst(i64, Box<Expr>),
    Neg(Box<Expr>),
    Sum {
        binder: String,
        low: i64,
        high: i64,
        body: Box<Expr>,
    },
    BoolToInt(Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Exists {
        binder: String,
        low: i64,
        high: i64,
        body: Box<Expr>,
    },
    Forall {
        binder: String,
        low: i64,
        high: i64,
        body: Box<Expr>,
    },
}

#[allow(clippy::should_implement_trait)] // static builders, not operators
impl Expr {
    pub fn var(id: VarId) -> Expr {
        Expr::Var(id)
    }

    pub fn cmp(op: CmpOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Cmp(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: Expr, rhs: Expr) -> Expr {
        Expr::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn implies(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn add(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Add(Box::new(lhs), Box::new(rhs))
    }

    pub fn sub(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(lhs), Box::new(rhs))
    }

    pub fn mul(c: i64, e: Expr) -> Expr {
        Expr::MulConst(c, Box::new(e))
    }

    pub fn sol(id: VarId) -> Expr {
        Expr::Sol(Box::new(Expr::Var(id)))
    }

    /// Disjunction of a sequence; `false` when empty.
    pub fn any(mut es: Vec<Expr>) -> Expr {
        match es.len() {
            0 => Expr::Bool(false),
            1 => es.pop().unwrap(),
            _ => {
                let mut it = es.into_iter().rev();
                let mut acc = it.next().unwrap();
                for e in it {
                    acc = Expr::or(e, acc);
                }
                acc
            }
        }
    }

    /// Conjunction of a sequence; `true` when empty.
    pub fn all(mut es: Vec<Expr>) -> Expr {
        match es.len() {
            0 => Expr::Bool(true),
            1 => es.pop().unwrap(),
            _ => {
                let mut it = es.into_iter().rev();
                let mut acc = it.next().unwrap();
                for e in it {
                    acc = Expr::and(e, acc);
                }
                acc
            }
        }
    }

    /// True iff the expression contains a `Sol` node.
    pub fn has_sol(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if matches!(e, Expr::Sol(_)) {
                found = true;
            }
        });
        found
    }

    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) | Expr::Idx(_) => {}
            Expr::Sol(e)
            | Expr::MulConst(_, e)
            | Expr::Neg(e)
            | Expr::BoolToInt(e)
            | Expr::Not(e) => e.visit(f),
            Expr::Element { index, .. } => index.visit(f),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Cmp(_, a, b)
            | Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Sum { body, .. } | Expr::Exists { body, .. } | Expr::Forall { body, .. } => {
                body.visit(f)
            }
        }
    }
}

/// Optional problem annotations carried alongside the raw constraint set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objectives: Option<Vec<Expr>>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self.weights.is_none() && self.objectives.is_none()
    }
}

/// A CSP: variables with finite domains plus boolean constraint expressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub vars: Vec<VarDecl>,
    pub constraints: Vec<Expr>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

impl Instance {
    pub fn new(vars: Vec<VarDecl>, constraints: Vec<Expr>) -> Instance {
        Instance {
            vars,
            constraints,
            metadata: Metadata::default(),
        }
    }

    /// Builds variables from `(name, domain)` pairs, assigning ids in order.
    pub fn from_domains(doms: Vec<(&str, Domain)>, constraints: Vec<Expr>) -> Instance {
        let vars = doms
            .into_iter()
            .enumerate()
            .map(|(i, (name, domain))| VarDecl {
                id: VarId(i),
                name: name.to_string(),
                domain,
            })
            .collect();
        Instance::new(vars, constraints)
    }

    pub fn var_by_name(&self, name: &str) -> Option<&VarDecl> {
        self.vars.iter().find(|v| v.name == name)
    }

    /// Checks all structural invariants: consistent ids, unique names,
    /// non-empty domains, and boolean sol-free constraints.
    pub fn validate(&self) -> Result<(), ModelError> {
        for (i, v) in self.vars.iter().enumerate() {
            if v.id.0 != i {
                return Err(ModelError::BadVarId {
                    name: v.name.clone(),
                });
            }
            v.domain.validate()?;
            if self.vars[..i].iter().any(|u| u.name == v.name) {
                return Err(ModelError::DuplicateName {
                    name: v.name.clone(),
                });
            }
        }
        for c in &self.constraints {
            if c.has_sol() {
                return Err(ModelError::SolInConstraint);
            }
            match typecheck(c, self) {
                Ok(Ty::Bool) => {}
                Ok(Ty::Int) => return Err(ModelError::NonBooleanConstraint),
                Err(e) => return Err(ModelError::IllTyped(e)),
            }
        }
        Ok(())
    }

    /// Product of domain sizes, saturating.
    pub fn space_size(&self) -> u64 {
        self.vars
            .iter()
            .fold(1u64, |acc, v| acc.saturating_mul(v.domain.size()))
    }
}

/// A total assignment of every declared variable to a value in its domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation {
    values: Vec<i64>,
}

impl Valuation {
    /// Wraps values indexed by `VarId` after validating totality and
    /// domain membership.
    pub fn new(instance: &Instance, values: Vec<i64>) -> Result<Valuation, ModelError> {
        if values.len() != instance.vars.len() {
            return Err(ModelError::PartialValuation);
        }
        for (v, &x) in instance.vars.iter().zip(values.iter()) {
            if !v.domain.contains(x) {
                return Err(ModelError::ValueOutsideDomain {
                    name: v.name.clone(),
                    value: x,
                });
            }
        }
        Ok(Valuation { values })
    }

    /// Wraps values without validation; callers guarantee totality.
    pub fn from_values(values: Vec<i64>) -> Valuation {
        Valuation { values }
    }

    pub fn value(&self, id: VarId) -> Option<i64> {
        self.values.get(id.0).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// Errors raised by IR construction and validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("domain is empty")]
    EmptyDomain,
    #[error("integer-set domain must be sorted ascending and duplicate-free")]
    UnsortedDomain,
    #[error("variable `{name}` has an id inconsistent with its position")]
    BadVarId { name: String },
    #[error("duplicate variable name `{name}`")]
    DuplicateName { name: String },
    #[error("sol() reference inside a plain constraint")]
    SolInConstraint,
    #[error("constraint is not boolean-typed")]
    NonBooleanConstraint,
    #[error("ill-typed constraint: {0}")]
    IllTyped(eval::EvalError),
    #[error("valuation does not cover every declared variable")]
    PartialValuation,
    #[error("value {value} outside the domain of `{name}`")]
    ValueOutsideDomain { name: String, value: i64 },
}

pub use eval::EvalError;
