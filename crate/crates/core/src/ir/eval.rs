//! Expression evaluation, type checking, and comprehension expansion.
//!
//! Evaluation is deterministic and pure: identical `(expr, point, sol)`
//! triples always produce identical values. All arithmetic is checked;
//! overflow is reported instead of wrapping so that weights and objectives
//! stay exact.

use thiserror::Error;

use super::{Expr, Instance, ModelError, Valuation, VarId};

/// Result of evaluating an expression: integer or boolean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

impl Value {
    pub fn as_int(self) -> Result<i64, EvalError> {
        match self {
            Value::Int(i) => Ok(i),
            Value::Bool(_) => Err(EvalError::TypeMismatch {
                expected: "int",
                found: "bool",
            }),
        }
    }

    pub fn as_bool(self) -> Result<bool, EvalError> {
        match self {
            Value::Bool(b) => Ok(b),
            Value::Int(_) => Err(EvalError::TypeMismatch {
                expected: "bool",
                found: "int",
            }),
        }
    }
}

/// Static type of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ty {
    Int,
    Bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unresolved variable reference #{0}")]
    UnresolvedVar(usize),
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("sol() used without a solution binding")]
    MissingSolBinding,
    #[error("sol() must wrap a variable reference")]
    SolNotVar,
    #[error("unbound comprehension index `{0}`")]
    UnboundIndex(String),
    #[error("array index {index} outside {low}..{high}")]
    IndexOutOfRange { index: i64, low: i64, high: i64 },
    #[error("integer overflow during evaluation")]
    Overflow,
    #[error("valuation is not total")]
    Partial,
}

struct Env<'a> {
    point: &'a Valuation,
    sol: Option<&'a Valuation>,
    binders: Vec<(String, i64)>,
}

impl<'a> Env<'a> {
    fn binder(&self, name: &str) -> Result<i64, EvalError> {
        self.binders
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| EvalError::UnboundIndex(name.to_string()))
    }

    fn read(&self, id: VarId) -> Result<i64, EvalError> {
        self.point.value(id).ok_or(EvalError::UnresolvedVar(id.0))
    }

    fn read_sol(&self, id: VarId) -> Result<i64, EvalError> {
        let sol = self.sol.ok_or(EvalError::MissingSolBinding)?;
        sol.value(id).ok_or(EvalError::UnresolvedVar(id.0))
    }
}

fn checked_add(a: i64, b: i64) -> Result<i64, EvalError> {
    a.checked_add(b).ok_or(EvalError::Overflow)
}

fn checked_sub(a: i64, b: i64) -> Result<i64, EvalError> {
    a.checked_sub(b).ok_or(EvalError::Overflow)
}

fn checked_mul(a: i64, b: i64) -> Result<i64, EvalError> {
    a.checked_mul(b).ok_or(EvalError::Overflow)
}

/// Resolves an expression in variable-reference position to a concrete id.
fn resolve_var(e: &Expr, env: &Env) -> Result<VarId, EvalError> {
    match e {
        Expr::Var(id) => Ok(*id),
        Expr::Element { vars, low, index } => {
            let idx = eval_in(index, env)?.as_int()?;
            let high = *low + vars.len() as i64 - 1;
            if idx < *low || idx > high {
                return Err(EvalError::IndexOutOfRange {
                    index: idx,
                    low: *low,
                    high,
                });
            }
            Ok(vars[(idx - *low) as usize])
        }
        _ => Err(EvalError::SolNotVar),
    }
}

fn eval_in(expr: &Expr, env: &Env) -> Result<Value, EvalError> {
    match expr {
        Expr::Int(i) => Ok(Value::Int(*i)),
        Expr::Bool(b) => Ok(Value::Bool(*b)),
        Expr::Var(id) => Ok(Value::Int(env.read(*id)?)),
        Expr::Sol(inner) => {
            let id = resolve_var(inner, env)?;
            Ok(Value::Int(env.read_sol(id)?))
        }
        Expr::Element { .. } => {
            let id = resolve_var(expr, env)?;
            Ok(Value::Int(env.read(id)?))
        }
        Expr::Idx(name) => Ok(Value::Int(env.binder(name)?)),
        Expr::Add(a, b) => {
            let x = eval_in(a, env)?.as_int()?;
            let y = eval_in(b, env)?.as_int()?;
            Ok(Value::Int(checked_add(x, y)?))
        }
        Expr::Sub(a, b) => {
            let x = eval_in(a, env)?.as_int()?;
            let y = eval_in(b, env)?.as_int()?;
            Ok(Value::Int(checked_sub(x, y)?))
        }
        Expr::MulConst(c, e) => {
            let x = eval_in(e, env)?.as_int()?;
            Ok(Value::Int(checked_mul(*c, x)?))
        }
        Expr::Neg(e) => {
            let x = eval_in(e, env)?.as_int()?;
            Ok(Value::Int(checked_sub(0, x)?))
        }
        Expr::BoolToInt(e) => {
            let b = eval_in(e, env)?.as_bool()?;
            Ok(Value::Int(if b { 1 } else { 0 }))
        }
        Expr::Cmp(op, a, b) => {
            let x = eval_in(a, env)?.as_int()?;
            let y = eval_in(b, env)?.as_int()?;
            Ok(Value::Bool(op.apply(x, y)))
        }
        Expr::And(a, b) => {
            let x = eval_in(a, env)?.as_bool()?;
            let y = eval_in(b, env)?.as_bool()?;
            Ok(Value::Bool(x && y))
        }
        Expr::Or(a, b) => {
            let x = eval_in(a, env)?.as_bool()?;
            let y = eval_in(b, env)?.as_bool()?;
            Ok(Value::Bool(x || y))
        }
        Expr::Not(e) => Ok(Value::Bool(!eval_in(e, env)?.as_bool()?)),
        Expr::Implies(a, b) => {
            let x = eval_in(a, env)?.as_bool()?;
            let y = eval_in(b, env)?.as_bool()?;
            Ok(Value::Bool(!x || y))
        }
        Expr::Sum {
            binder,
            low,
            high,
            body,
        } => {
            let mut acc = 0i64;
            for i in *low..=*high {
                let env2 = Env {
                    point: env.point,
                    sol: env.sol,
                    binders: {
                        let mut b = env.binders.clone();
                        b.push((binder.clone(), i));
                        b
                    },
                };
                acc = checked_add(acc, eval_in(body, &env2)?.as_int()?)?;
            }
            Ok(Value::Int(acc))
        }
        Expr::Exists {
            binder,
            low,
            high,
            body,
        } => {
            for i in *low..=*high {
                let env2 = Env {
                    point: env.point,
                    sol: env.sol,
                    binders: {
                        let mut b = env.binders.clone();
                        b.push((binder.clone(), i));
                        b
                    },
                };
                if eval_in(body, &env2)?.as_bool()? {
                    return Ok(Value::Bool(true));
                }
            }
            Ok(Value::Bool(false))
        }
        Expr::Forall {
            binder,
            low,
            high,
            body,
        } => {
            for i in *low..=*high {
                let env2 = Env {
                    point: env.point,
                    sol: env.sol,
                    binders: {
                        let mut b = env.binders.clone();
                        b.push((binder.clone(), i));
                        b
                    },
                };
                if !eval_in(body, &env2)?.as_bool()? {
                    return Ok(Value::Bool(false));
                }
            }
            Ok(Value::Bool(true))
        }
    }
}

/// Evaluates `expr` reading variables from `point` and `sol()` references
/// from `sol`. `sol` must be supplied iff the expression contains `Sol`.
pub fn evaluate(
    expr: &Expr,
    point: &Valuation,
    sol: Option<&Valuation>,
) -> Result<Value, EvalError> {
    let env = Env {
        point,
        sol,
        binders: Vec::new(),
    };
    eval_in(expr, &env)
}

/// True iff every constraint of `instance` holds at `point`.
pub fn check(instance: &Instance, point: &Valuation) -> Result<bool, EvalError> {
    if point.len() != instance.vars.len() {
        return Err(EvalError::Partial);
    }
    for c in &instance.constraints {
        if !evaluate(c, point, None)?.as_bool()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Unrolls comprehensions and resolves array accesses, leaving only core
/// nodes (literals, var/sol refs, arithmetic, comparisons, connectives).
/// Comprehension bounds must already be constants, so the result is an
/// equivalent closed expression suitable for propagator compilation.
pub fn expand(expr: &Expr) -> Result<Expr, EvalError> {
    expand_in(expr, &mut Vec::new())
}

fn expand_in(expr: &Expr, binders: &mut Vec<(String, i64)>) -> Result<Expr, EvalError> {
    Ok(match expr {
        Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) => expr.clone(),
        Expr::Idx(name) => {
            let v = binders
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| EvalError::UnboundIndex(name.clone()))?;
            Expr::Int(v)
        }
        Expr::Sol(inner) => {
            let inner = expand_in(inner, binders)?;
            match inner {
                Expr::Var(id) => Expr::sol(id),
                _ => return Err(EvalError::SolNotVar),
            }
        }
        Expr::Element { vars, low, index } => {
            let idx = match expand_in(index, binders)? {
                Expr::Int(i) => i,
                _ => {
                    return Err(EvalError::TypeMismatch {
                        expected: "constant index",
                        found: "non-constant expression",
                    })
                }
            };
            let high = *low + vars.len() as i64 - 1;
            if idx < *low || idx > high {
                return Err(EvalError::IndexOutOfRange {
                    index: idx,
                    low: *low,
                    high,
                });
            }
            Expr::Var(vars[(idx - *low) as usize])
        }
        Expr::Add(a, b) => fold_add(expand_in(a, binders)?, expand_in(b, binders)?)?,
        Expr::Sub(a, b) => {
            let (x, y) = (expand_in(a, binders)?, expand_in(b, binders)?);
            match (&x, &y) {
                (Expr::Int(p), Expr::Int(q)) => {
                    Expr::Int(p.checked_sub(*q).ok_or(EvalError::Overflow)?)
                }
                _ => Expr::sub(x, y),
            }
        }
        Expr::MulConst(c, e) => {
            let e = expand_in(e, binders)?;
            match e {
                Expr::Int(i) => Expr::Int(c.checked_mul(i).ok_or(EvalError::Overflow)?),
                e => Expr::mul(*c, e),
            }
        }
        Expr::Neg(e) => {
            let e = expand_in(e, binders)?;
            match e {
                Expr::Int(i) => Expr::Int(i.checked_neg().ok_or(EvalError::Overflow)?),
                e => Expr::Neg(Box::new(e)),
            }
        }
        Expr::BoolToInt(e) => Expr::BoolToInt(Box::new(expand_in(e, binders)?)),
        Expr::Cmp(op, a, b) => Expr::cmp(*op, expand_in(a, binders)?, expand_in(b, binders)?),
        Expr::And(a, b) => Expr::and(expand_in(a, binders)?, expand_in(b, binders)?),
        Expr::Or(a, b) => Expr::or(expand_in(a, binders)?, expand_in(b, binders)?),
        Expr::Not(e) => Expr::not(expand_in(e, binders)?),
        Expr::Implies(a, b) => Expr::implies(expand_in(a, binders)?, expand_in(b, binders)?),
        Expr::Sum {
            binder,
            low,
            high,
            body,
        } => {
            let mut parts = Vec::new();
            for i in *low..=*high {
                binders.push((binder.clone(), i));
                parts.push(expand_in(body, binders)?);
                binders.pop();
            }
            match parts.len() {
                0 => Expr::Int(0),
                _ => {
                    let mut it = parts.into_iter();
                    let mut acc = it.next().unwrap();
                    for p in it {
                        acc = fold_add(acc, p)?;
                    }
                    acc
                }
            }
        }
        Expr::Exists {
            binder,
            low,
            high,
            body,
        } => {
            let mut parts = Vec::new();
            for i in *low..=*high {
                binders.push((binder.clone(), i));
                parts.push(expand_in(body, binders)?);
                binders.pop();
            }
            Expr::any(parts)
        }
        Expr::Forall {
            binder,
            low,
            high,
            body,
        } => {
            let mut parts = Vec::new();
            for i in *low..=*high {
                binders.push((binder.clone(), i));
                parts.push(expand_in(body, binders)?);
                binders.pop();
            }
            Expr::all(parts)
        }
    })
}

fn fold_add(a: Expr, b: Expr) -> Result<Expr, EvalError> {
    Ok(match (&a, &b) {
        (Expr::Int(p), Expr::Int(q)) => Expr::Int(p.checked_add(*q).ok_or(EvalError::Overflow)?),
        _ => Expr::add(a, b),
    })
}

/// Infers the type of `expr` against `instance`, rejecting mixed operands.
pub fn typecheck(expr: &Expr, instance: &Instance) -> Result<Ty, EvalError> {
    typecheck_in(expr, instance, &mut Vec::new())
}

fn typecheck_in(
    expr: &Expr,
    instance: &Instance,
    binders: &mut Vec<String>,
) -> Result<Ty, EvalError> {
    let want_int = |e: &Expr, inst: &Instance, b: &mut Vec<String>| -> Result<(), EvalError> {
        match typecheck_in(e, inst, b)? {
            Ty::Int => Ok(()),
            Ty::Bool => Err(EvalError::TypeMismatch {
                expected: "int",
                found: "bool",
            }),
        }
    };
    let want_bool = |e: &Expr, inst: &Instance, b: &mut Vec<String>| -> Result<(), EvalError> {
        match typecheck_in(e, inst, b)? {
            Ty::Bool => Ok(()),
            Ty::Int => Err(EvalError::TypeMismatch {
                expected: "bool",
                found: "int",
            }),
        }
    };
    match expr {
        Expr::Int(_) => Ok(Ty::Int),
        Expr::Bool(_) => Ok(Ty::Bool),
        Expr::Var(id) => {
            if id.0 >= instance.vars.len() {
                return Err(EvalError::UnresolvedVar(id.0));
            }
            Ok(Ty::Int)
        }
        Expr::Sol(inner) => match inner.as_ref() {
            Expr::Var(id) => {
                if id.0 >= instance.vars.len() {
                    return Err(EvalError::UnresolvedVar(id.0));
                }
                Ok(Ty::Int)
            }
            Expr::Element { vars, index, .. } => {
                for v in vars {
                    if v.0 >= instance.vars.len() {
                        return Err(EvalError::UnresolvedVar(v.0));
                    }
                }
                want_int(index, instance, binders)?;
                Ok(Ty::Int)
            }
            _ => Err(EvalError::SolNotVar),
        },
        Expr::Element { vars, index, .. } => {
            for v in vars {
                if v.0 >= instance.vars.len() {
                    return Err(EvalError::UnresolvedVar(v.0));
                }
            }
            want_int(index, instance, binders)?;
            Ok(Ty::Int)
        }
        Expr::Idx(name) => {
            if binders.iter().any(|b| b == name) {
                Ok(Ty::Int)
            } else {
                Err(EvalError::UnboundIndex(name.clone()))
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            want_int(a, instance, binders)?;
            want_int(b, instance, binders)?;
            Ok(Ty::Int)
        }
        Expr::MulConst(_, e) | Expr::Neg(e) => {
            want_int(e, instance, binders)?;
            Ok(Ty::Int)
        }
        Expr::BoolToInt(e) => {
            want_bool(e, instance, binders)?;
            Ok(Ty::Int)
        }
        Expr::Cmp(_, a, b) => {
            want_int(a, instance, binders)?;
            want_int(b, instance, binders)?;
            Ok(Ty::Bool)
        }
        Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) => {
            want_bool(a, instance, binders)?;
            want_bool(b, instance, binders)?;
            Ok(Ty::Bool)
        }
        Expr::Not(e) => {
            want_bool(e, instance, binders)?;
            Ok(Ty::Bool)
        }
        Expr::Sum { binder, body, .. } => {
            binders.push(binder.clone());
            let r = want_int(body, instance, binders);
            binders.pop();
            r?;
            Ok(Ty::Int)
        }
        Expr::Exists { binder, body, .. } | Expr::Forall { binder, body, .. } => {
            binders.push(binder.clone());
            let r = want_bool(body, instance, binders);
            binders.pop();
            r?;
            Ok(Ty::Bool)
        }
    }
}

impl From<EvalError> for ModelError {
    fn from(e: EvalError) -> ModelError {
        ModelError::IllTyped(e)
    }
}
