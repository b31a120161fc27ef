//! Dominance relations over CSP solutions and their compilation to
//! dominance nogoods.
//!
//! A dominance relation is a preorder over solutions; smaller is better.
//! After each solution `S`, the solve loop posts a nogood over the problem
//! variables `V`: in equivalence-free mode the nogood is `!(S <= V)`, in
//! with-equivalence mode `!(S <= V) \/ V <= S` (equivalently: `V` is not
//! strictly dominated by `S`). Nogoods are instantiated with `S`'s values,
//! so they are ordinary sol-free constraints.

use thiserror::Error;

use crate::cpnet::{self, CpNet, CpNetError};
use crate::ir::{evaluate, CmpOp, EvalError, Expr, Instance, Valuation, VarId};

/// Whether posted nogoods also exclude solutions equivalent to `S`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NogoodMode {
    /// `!(S <= V)`: one representative per equivalence class survives.
    #[default]
    EquivalenceFree,
    /// `!(S <= V) \/ V <= S`: equivalent solutions remain admissible.
    WithEquivalence,
}

/// The built-in dominance families plus user-supplied nogood templates.
#[derive(Debug, Clone)]
pub enum DominanceKind {
    /// `X <= Y  iff  f(X) <= f(Y)` (minimization).
    TotalOrder { objective: Expr },
    /// Lexicographic minimization of the objective sequence.
    Lex { objectives: Vec<Expr> },
    /// Componentwise minimization: `X <= Y iff forall i: f_i(X) <= f_i(Y)`.
    Pareto { objectives: Vec<Expr> },
    /// Over boolean variables: zeros preferred, subsets dominate supersets.
    SubsetMin { vars: Vec<VarId> },
    /// Over boolean variables: ones preferred, supersets dominate subsets.
    SubsetMax { vars: Vec<VarId> },
    /// Local dominance in a CP-net mapped onto instance variables.
    CpNet { net: CpNet, map: Vec<VarId> },
    /// A sol-bearing nogood template; supports only nogood evaluation.
    Custom { template: Expr },
}

/// A dominance relation paired with its nogood mode.
#[derive(Debug, Clone)]
pub struct DominanceSpec {
    pub kind: DominanceKind,
    pub mode: NogoodMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DominanceError {
    #[error("custom dominance specs support only nogood evaluation")]
    CustomUnsupported,
    #[error("objective list must be non-empty")]
    NoObjectives,
    #[error("objective contains a sol() reference")]
    SolInObjective,
    #[error("subset dominance requires boolean variables")]
    NonBooleanSubsetVar,
    #[error("custom template must contain a sol() reference")]
    TemplateWithoutSol,
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("cp-net error: {0}")]
    CpNet(#[from] CpNetError),
}

impl DominanceSpec {
    pub fn total_order(objective: Expr, mode: NogoodMode) -> Result<Self, DominanceError> {
        check_objectives(std::slice::from_ref(&objective))?;
        Ok(DominanceSpec {
            kind: DominanceKind::TotalOrder { objective },
            mode,
        })
    }

    pub fn lex(objectives: Vec<Expr>, mode: NogoodMode) -> Result<Self, DominanceError> {
        check_objectives(&objectives)?;
        Ok(DominanceSpec {
            kind: DominanceKind::Lex { objectives },
            mode,
        })
    }

    pub fn pareto(objectives: Vec<Expr>, mode: NogoodMode) -> Result<Self, DominanceError> {
        check_objectives(&objectives)?;
        Ok(DominanceSpec {
            kind: DominanceKind::Pareto { objectives },
            mode,
        })
    }

    pub fn subset_min(
        vars: Vec<VarId>,
        instance: &Instance,
        mode: NogoodMode,
    ) -> Result<Self, DominanceError> {
        check_subset_vars(&vars, instance)?;
        Ok(DominanceSpec {
            kind: DominanceKind::SubsetMin { vars },
            mode,
        })
    }

    pub fn subset_max(
        vars: Vec<VarId>,
        instance: &Instance,
        mode: NogoodMode,
    ) -> Result<Self, DominanceError> {
        check_subset_vars(&vars, instance)?;
        Ok(DominanceSpec {
            kind: DominanceKind::SubsetMax { vars },
            mode,
        })
    }

    pub fn cpnet(
        net: CpNet,
        instance: &Instance,
        mode: NogoodMode,
    ) -> Result<Self, DominanceError> {
        cpnet::validate(&net)?;
        let map = net.map_to(instance)?;
        Ok(DominanceSpec {
            kind: DominanceKind::CpNet { net, map },
            mode,
        })
    }

    pub fn custom(template: Expr, mode: NogoodMode) -> Result<Self, DominanceError> {
        if !template.has_sol() {
            return Err(DominanceError::TemplateWithoutSol);
        }
        Ok(DominanceSpec {
            kind: DominanceKind::Custom { template },
            mode,
        })
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.kind, DominanceKind::Custom { .. })
    }

    pub fn is_cpnet(&self) -> bool {
        matches!(self.kind, DominanceKind::CpNet { .. })
    }
}

fn check_objectives(objectives: &[Expr]) -> Result<(), DominanceError> {
    if objectives.is_empty() {
        return Err(DominanceError::NoObjectives);
    }
    if objectives.iter().any(Expr::has_sol) {
        return Err(DominanceError::SolInObjective);
    }
    Ok(())
}

fn check_subset_vars(vars: &[VarId], instance: &Instance) -> Result<(), DominanceError> {
    if vars.is_empty() {
        return Err(DominanceError::NoObjectives);
    }
    for v in vars {
        let decl = instance
            .vars
            .get(v.0)
            .ok_or(DominanceError::NonBooleanSubsetVar)?;
        if !decl.domain.is_bool() {
            return Err(DominanceError::NonBooleanSubsetVar);
        }
    }
    Ok(())
}

fn objective_value(objective: &Expr, x: &Valuation) -> Result<i64, DominanceError> {
    Ok(evaluate(objective, x, None)?.as_int()?)
}

fn subset_values(v: VarId, x: &Valuation, y: &Valuation) -> Result<(i64, i64), DominanceError> {
    let a = x.value(v).ok_or(DominanceError::Eval(EvalError::Partial))?;
    let b = y.value(v).ok_or(DominanceError::Eval(EvalError::Partial))?;
    Ok((a, b))
}

/// `X <= Y` under the spec's preorder. Custom specs are rejected: the
/// language extension specifies nogoods, not relations.
pub fn leq(spec: &DominanceSpec, x: &Valuation, y: &Valuation) -> Result<bool, DominanceError> {
    match &spec.kind {
        DominanceKind::TotalOrder { objective } => {
            Ok(objective_value(objective, x)? <= objective_value(objective, y)?)
        }
        DominanceKind::Lex { objectives } => {
            for f in objectives {
                let (a, b) = (objective_value(f, x)?, objective_value(f, y)?);
                if a < b {
                    return Ok(true);
                }
                if a > b {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        DominanceKind::Pareto { objectives } => {
            for f in objectives {
                if objective_value(f, x)? > objective_value(f, y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        DominanceKind::SubsetMin { vars } => {
            for v in vars {
                let (a, b) = subset_values(*v, x, y)?;
                if a > b {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        DominanceKind::SubsetMax { vars } => {
            for v in vars {
                let (a, b) = subset_values(*v, x, y)?;
                if a < b {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        DominanceKind::CpNet { net, map } => {
            // X <= Y  iff  X locally dominates Y or X = Y; the quantifier is
            // vacuously true on equal valuations, so one call covers both.
            Ok(cpnet::local_dominates(net, map, x, y)?)
        }
        DominanceKind::Custom { .. } => Err(DominanceError::CustomUnsupported),
    }
}

/// Equivalence: `X <= Y` and `Y <= X`.
pub fn sim(spec: &DominanceSpec, x: &Valuation, y: &Valuation) -> Result<bool, DominanceError> {
    Ok(leq(spec, x, y)? && leq(spec, y, x)?)
}

/// Strict dominance: `X <= Y` and not `X ~ Y`.
pub fn strictly_dominates(
    spec: &DominanceSpec,
    x: &Valuation,
    y: &Valuation,
) -> Result<bool, DominanceError> {
    Ok(leq(spec, x, y)? && !leq(spec, y, x)?)
}

/// Instantiates the spec's dominance nogood at solution `s`, yielding a
/// sol-free constraint. Trivially false disjuncts are dropped at
/// instantiation time; the semantics is unchanged since `s` is fixed.
pub fn compile_nogood(spec: &DominanceSpec, s: &Valuation) -> Result<Expr, DominanceError> {
    compile_nogood_mode(spec, s, spec.mode)
}

/// [`compile_nogood`] under an explicit mode.
pub fn compile_nogood_mode(
    spec: &DominanceSpec,
    s: &Valuation,
    mode: NogoodMode,
) -> Result<Expr, DominanceError> {
    let strict = compile_exclude_dominated(spec, s)?;
    match mode {
        NogoodMode::EquivalenceFree => Ok(strict),
        NogoodMode::WithEquivalence => {
            let readmit = compile_readmit_equivalent(spec, s)?;
            Ok(match readmit {
                Some(r) => Expr::or(strict, r),
                None => strict,
            })
        }
    }
}

/// The equivalence-free nogood `!(S <= V)` per family.
fn compile_exclude_dominated(spec: &DominanceSpec, s: &Valuation) -> Result<Expr, DominanceError> {
    match &spec.kind {
        DominanceKind::TotalOrder { objective } => {
            let c = objective_value(objective, s)?;
            Ok(Expr::cmp(CmpOp::Lt, objective.clone(), Expr::Int(c)))
        }
        DominanceKind::Lex { objectives } => {
            // f1(V) < f1(S) \/ (f1(V) = f1(S) /\ (f2(V) < f2(S) \/ ...))
            let consts: Vec<i64> = objectives
                .iter()
                .map(|f| objective_value(f, s))
                .collect::<Result<_, _>>()?;
            Ok(lex_chain(objectives, &consts, CmpOp::Lt))
        }
        DominanceKind::Pareto { objectives } => {
            let mut parts = Vec::with_capacity(objectives.len());
            for f in objectives {
                let c = objective_value(f, s)?;
                parts.push(Expr::cmp(CmpOp::Lt, f.clone(), Expr::Int(c)));
            }
            Ok(Expr::any(parts))
        }
        DominanceKind::SubsetMin { vars } => {
            // exists v: S(v) > V(v); only positions with S(v)=1 can fire
            let parts = vars
                .iter()
                .filter(|v| s.value(**v) == Some(1))
                .map(|v| Expr::cmp(CmpOp::Eq, Expr::var(*v), Expr::Int(0)))
                .collect();
            Ok(Expr::any(parts))
        }
        DominanceKind::SubsetMax { vars } => {
            // exists c: S(B_c) < V(B_c); only positions with S(B_c)=0 fire
            let parts = vars
                .iter()
                .filter(|v| s.value(**v) == Some(0))
                .map(|v| Expr::cmp(CmpOp::Eq, Expr::var(*v), Expr::Int(1)))
                .collect();
            Ok(Expr::any(parts))
        }
        DominanceKind::CpNet { net, map } => Ok(cpnet::compile_local_nogood(net, map, s)?),
        DominanceKind::Custom { template } => Ok(instantiate_template(template, s)?),
    }
}

/// The `V <= S` disjunct added in with-equivalence mode, already simplified
/// at `s`; `None` when the family needs no extra disjunct.
fn compile_readmit_equivalent(
    spec: &DominanceSpec,
    s: &Valuation,
) -> Result<Option<Expr>, DominanceError> {
    match &spec.kind {
        DominanceKind::TotalOrder { objective } => {
            // strict \/ V <= S collapses to f(V) <= f(S)
            let c = objective_value(objective, s)?;
            Ok(Some(Expr::cmp(CmpOp::Le, objective.clone(), Expr::Int(c))))
        }
        DominanceKind::Lex { objectives } => {
            let consts: Vec<i64> = objectives
                .iter()
                .map(|f| objective_value(f, s))
                .collect::<Result<_, _>>()?;
            Ok(Some(lex_chain(objectives, &consts, CmpOp::Le)))
        }
        DominanceKind::Pareto { objectives } => {
            let mut parts = Vec::with_capacity(objectives.len());
            for f in objectives {
                let c = objective_value(f, s)?;
                parts.push(Expr::cmp(CmpOp::Le, f.clone(), Expr::Int(c)));
            }
            Ok(Some(Expr::all(parts)))
        }
        DominanceKind::SubsetMin { vars } => {
            // forall v: V(v) <= S(v); positions with S(v)=1 are trivial
            let parts = vars
                .iter()
                .filter(|v| s.value(**v) == Some(0))
                .map(|v| Expr::cmp(CmpOp::Eq, Expr::var(*v), Expr::Int(0)))
                .collect();
            Ok(Some(Expr::all(parts)))
        }
        DominanceKind::SubsetMax { vars } => {
            let parts = vars
                .iter()
                .filter(|v| s.value(**v) == Some(1))
                .map(|v| Expr::cmp(CmpOp::Eq, Expr::var(*v), Expr::Int(1)))
                .collect();
            Ok(Some(Expr::all(parts)))
        }
        DominanceKind::CpNet { net, map } => {
            // distinct valuations are never equivalent, so only V = S
            let sv: Vec<Expr> = net
                .vars
                .iter()
                .zip(map.iter())
                .map(|(_, id)| {
                    Expr::cmp(
                        CmpOp::Eq,
                        Expr::var(*id),
                        Expr::Int(s.value(*id).unwrap_or(0)),
                    )
                })
                .collect();
            Ok(Some(Expr::all(sv)))
        }
        // custom templates already carry the user's chosen semantics
        DominanceKind::Custom { .. } => Ok(None),
    }
}

/// Builds the nested lexicographic nogood; `last_op` is `Lt` for the
/// equivalence-free form and `Le` for the with-equivalence form.
fn lex_chain(objectives: &[Expr], consts: &[i64], last_op: CmpOp) -> Expr {
    let n = objectives.len();
    let mut acc = Expr::cmp(last_op, objectives[n - 1].clone(), Expr::Int(consts[n - 1]));
    for i in (0..n - 1).rev() {
        let lt = Expr::cmp(CmpOp::Lt, objectives[i].clone(), Expr::Int(consts[i]));
        let eq = Expr::cmp(CmpOp::Eq, objectives[i].clone(), Expr::Int(consts[i]));
        acc = Expr::or(lt, Expr::and(eq, acc));
    }
    acc
}

/// Substitutes every `sol()` reference in `template` with the value it takes
/// in `s`, after expanding comprehensions so indices are concrete.
pub fn instantiate_template(template: &Expr, s: &Valuation) -> Result<Expr, EvalError> {
    let expanded = crate::ir::expand(template)?;
    substitute_sol(&expanded, s)
}

fn substitute_sol(e: &Expr, s: &Valuation) -> Result<Expr, EvalError> {
    Ok(match e {
        Expr::Sol(inner) => match inner.as_ref() {
            Expr::Var(id) => Expr::Int(s.value(*id).ok_or(EvalError::UnresolvedVar(id.0))?),
            _ => return Err(EvalError::SolNotVar),
        },
        Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) | Expr::Idx(_) => e.clone(),
        Expr::Element { vars, low, index } => Expr::Element {
            vars: vars.clone(),
            low: *low,
            index: Box::new(substitute_sol(index, s)?),
        },
        Expr::Add(a, b) => Expr::add(substitute_sol(a, s)?, substitute_sol(b, s)?),
        Expr::Sub(a, b) => Expr::sub(substitute_sol(a, s)?, substitute_sol(b, s)?),
        Expr::MulConst(c, x) => Expr::mul(*c, substitute_sol(x, s)?),
        Expr::Neg(x) => Expr::Neg(Box::new(substitute_sol(x, s)?)),
        Expr::BoolToInt(x) => Expr::BoolToInt(Box::new(substitute_sol(x, s)?)),
        Expr::Cmp(op, a, b) => Expr::cmp(*op, substitute_sol(a, s)?, substitute_sol(b, s)?),
        Expr::And(a, b) => Expr::and(substitute_sol(a, s)?, substitute_sol(b, s)?),
        Expr::Or(a, b) => Expr::or(substitute_sol(a, s)?, substitute_sol(b, s)?),
        Expr::Not(x) => Expr::not(substitute_sol(x, s)?),
        Expr::Implies(a, b) => Expr::implies(substitute_sol(a, s)?, substitute_sol(b, s)?),
        Expr::Sum {
            binder,
            low,
            high,
            body,
        } => Expr::Sum {
            binder: binder.clone(),
            low: *low,
            high: *high,
            body: Box::new(substitute_sol(body, s)?),
        },
        Expr::Exists {
            binder,
            low,
            high,
            body,
        } => Expr::Exists {
            binder: binder.clone(),
            low: *low,
            high: *high,
            body: Box::new(substitute_sol(body, s)?),
        },
        Expr::Forall {
            binder,
            low,
            high,
            body,
        } => Expr::Forall {
            binder: binder.clone(),
            low: *low,
            high: *high,
            body: Box::new(substitute_sol(body, s)?),
        },
    })
}

/// Evaluates the instantiated nogood of `s` at `point` without building the
/// expression: `!(S <= point)` in equivalence-free mode, `!(S strictly
/// dominates point)` in with-equivalence mode. Custom templates are
/// evaluated directly with `s` as the sol binding.
pub fn eval_nogood(
    spec: &DominanceSpec,
    s: &Valuation,
    point: &Valuation,
) -> Result<bool, DominanceError> {
    match &spec.kind {
        DominanceKind::Custom { template } => Ok(evaluate(template, point, Some(s))?.as_bool()?),
        _ => match spec.mode {
            NogoodMode::EquivalenceFree => Ok(!leq(spec, s, point)?),
            NogoodMode::WithEquivalence => Ok(!strictly_dominates(spec, s, point)?),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Domain, Instance};

    fn xy_instance() -> Instance {
        Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 0, high: 3 }),
                ("y", Domain::IntRange { low: 0, high: 3 }),
            ],
            vec![],
        )
    }

    fn val(values: &[i64]) -> Valuation {
        Valuation::from_values(values.to_vec())
    }

    fn pareto_xy() -> DominanceSpec {
        DominanceSpec::pareto(
            vec![Expr::var(VarId(0)), Expr::var(VarId(1))],
            NogoodMode::EquivalenceFree,
        )
        .unwrap()
    }

    #[test]
    fn pareto_componentwise() {
        let spec = pareto_xy();
        assert!(leq(&spec, &val(&[1, 1]), &val(&[1, 2])).unwrap());
        // incomparable pair
        assert!(!leq(&spec, &val(&[1, 2]), &val(&[2, 1])).unwrap());
        assert!(!leq(&spec, &val(&[2, 1]), &val(&[1, 2])).unwrap());
    }

    #[test]
    fn subset_min_prefers_fewer_ones() {
        let inst = Instance::from_domains(vec![("x1", Domain::Bool), ("x2", Domain::Bool)], vec![]);
        let spec =
            DominanceSpec::subset_min(vec![VarId(0), VarId(1)], &inst, NogoodMode::EquivalenceFree)
                .unwrap();
        assert!(leq(&spec, &val(&[0, 1]), &val(&[1, 1])).unwrap());
        assert!(!leq(&spec, &val(&[1, 1]), &val(&[0, 1])).unwrap());
    }

    #[test]
    fn total_order_equal_objective_is_equivalent() {
        let spec =
            DominanceSpec::total_order(Expr::var(VarId(0)), NogoodMode::EquivalenceFree).unwrap();
        assert!(sim(&spec, &val(&[3, 0]), &val(&[3, 2])).unwrap());
    }

    #[test]
    fn pareto_strict_dominance() {
        let spec = pareto_xy();
        assert!(strictly_dominates(&spec, &val(&[1, 1]), &val(&[1, 2])).unwrap());
        assert!(!strictly_dominates(&spec, &val(&[1, 1]), &val(&[1, 1])).unwrap());
    }

    #[test]
    fn cpnet_distinct_never_equivalent() {
        let net = cpnet::chain_example();
        let inst = net.to_instance();
        let spec = DominanceSpec::cpnet(net, &inst, NogoodMode::EquivalenceFree).unwrap();
        for a in 0..2i64 {
            for b in 0..3i64 {
                let o = val(&[a, b, 0]);
                let o2 = val(&[1 - a, b, 0]);
                assert!(!sim(&spec, &o, &o2).unwrap());
                assert!(sim(&spec, &o, &o).unwrap());
            }
        }
    }

    #[test]
    fn total_order_nogood_requires_strict_improvement() {
        let spec =
            DominanceSpec::total_order(Expr::var(VarId(0)), NogoodMode::EquivalenceFree).unwrap();
        let ng = compile_nogood(&spec, &val(&[5, 0])).unwrap();
        assert_eq!(ng, Expr::cmp(CmpOp::Lt, Expr::var(VarId(0)), Expr::Int(5)));
    }

    #[test]
    fn subset_min_nogood_drops_zero_positions() {
        let inst = Instance::from_domains(
            vec![
                ("x1", Domain::Bool),
                ("x2", Domain::Bool),
                ("x3", Domain::Bool),
            ],
            vec![],
        );
        let spec = DominanceSpec::subset_min(
            vec![VarId(0), VarId(1), VarId(2)],
            &inst,
            NogoodMode::EquivalenceFree,
        )
        .unwrap();
        let ng = compile_nogood(&spec, &val(&[1, 0, 1])).unwrap();
        let x1_zero = Expr::cmp(CmpOp::Eq, Expr::var(VarId(0)), Expr::Int(0));
        let x3_zero = Expr::cmp(CmpOp::Eq, Expr::var(VarId(2)), Expr::Int(0));
        assert_eq!(ng, Expr::or(x1_zero, x3_zero));
    }

    #[test]
    fn pareto_nogood_is_disjunction_of_strict_improvements() {
        let spec = pareto_xy();
        let ng = compile_nogood(&spec, &val(&[2, 3])).unwrap();
        assert_eq!(
            ng,
            Expr::or(
                Expr::cmp(CmpOp::Lt, Expr::var(VarId(0)), Expr::Int(2)),
                Expr::cmp(CmpOp::Lt, Expr::var(VarId(1)), Expr::Int(3)),
            )
        );
    }

    #[test]
    fn eval_nogood_total_order() {
        let spec =
            DominanceSpec::total_order(Expr::var(VarId(0)), NogoodMode::EquivalenceFree).unwrap();
        let s = val(&[5, 0]);
        assert!(eval_nogood(&spec, &s, &val(&[4, 0])).unwrap());
        // equivalent point excluded in equivalence-free mode
        assert!(!eval_nogood(&spec, &s, &val(&[5, 1])).unwrap());

        let with_eq =
            DominanceSpec::total_order(Expr::var(VarId(0)), NogoodMode::WithEquivalence).unwrap();
        assert!(eval_nogood(&with_eq, &s, &val(&[5, 1])).unwrap());
        assert!(!eval_nogood(&with_eq, &s, &val(&[6, 0])).unwrap());
    }

    #[test]
    fn eval_nogood_custom_mcs_template() {
        // exists(i in 1..3)(sol(B[i]) < B[i]) with S(B)=110, P(B)=101:
        // index 3 fires since S(B_3)=0 < 1=P(B_3).
        let vars = vec![VarId(0), VarId(1), VarId(2)];
        let elem = |i: Expr| Expr::Element {
            vars: vars.clone(),
            low: 1,
            index: Box::new(i),
        };
        let template = Expr::Exists {
            binder: "i".into(),
            low: 1,
            high: 3,
            body: Box::new(Expr::cmp(
                CmpOp::Lt,
                Expr::Sol(Box::new(elem(Expr::Idx("i".into())))),
                elem(Expr::Idx("i".into())),
            )),
        };
        let spec = DominanceSpec::custom(template, NogoodMode::EquivalenceFree).unwrap();
        let s = val(&[1, 1, 0]);
        assert!(eval_nogood(&spec, &s, &val(&[1, 0, 1])).unwrap());
        assert!(!eval_nogood(&spec, &s, &val(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn custom_spec_rejects_relation_queries() {
        let template = Expr::cmp(CmpOp::Lt, Expr::var(VarId(0)), Expr::sol(VarId(0)));
        let spec = DominanceSpec::custom(template, NogoodMode::EquivalenceFree).unwrap();
        assert_eq!(
            leq(&spec, &val(&[0, 0]), &val(&[1, 1])),
            Err(DominanceError::CustomUnsupported)
        );
    }

    #[test]
    fn lex_single_objective_equals_total_order() {
        let inst = xy_instance();
        let lex_spec =
            DominanceSpec::lex(vec![Expr::var(VarId(0))], NogoodMode::EquivalenceFree).unwrap();
        let tot_spec =
            DominanceSpec::total_order(Expr::var(VarId(0)), NogoodMode::EquivalenceFree).unwrap();
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    for d in 0..=3 {
                        let x = val(&[a, b]);
                        let y = val(&[c, d]);
                        assert_eq!(
                            leq(&lex_spec, &x, &y).unwrap(),
                            leq(&tot_spec, &x, &y).unwrap()
                        );
                    }
                }
            }
        }
        let _ = inst;
    }

    #[test]
    fn pareto_single_objective_equals_total_order() {
        let p =
            DominanceSpec::pareto(vec![Expr::var(VarId(1))], NogoodMode::EquivalenceFree).unwrap();
        let t =
            DominanceSpec::total_order(Expr::var(VarId(1)), NogoodMode::EquivalenceFree).unwrap();
        for a in 0..=3 {
            for b in 0..=3 {
                let x = val(&[0, a]);
                let y = val(&[0, b]);
                assert_eq!(leq(&p, &x, &y).unwrap(), leq(&t, &x, &y).unwrap());
            }
        }
    }

    /// Nogood/relation coherence over an exhaustive small square, both modes.
    #[test]
    fn nogood_matches_relation_exhaustively() {
        let inst = xy_instance();
        let all: Vec<Valuation> = (0..=3)
            .flat_map(|a| (0..=3).map(move |b| val(&[a, b])))
            .collect();
        let lin = Expr::add(Expr::var(VarId(0)), Expr::mul(2, Expr::var(VarId(1))));
        let specs = vec![
            DominanceSpec::total_order(lin.clone(), NogoodMode::EquivalenceFree).unwrap(),
            DominanceSpec::lex(
                vec![Expr::var(VarId(0)), Expr::var(VarId(1))],
                NogoodMode::EquivalenceFree,
            )
            .unwrap(),
            DominanceSpec::pareto(
                vec![Expr::var(VarId(0)), Expr::var(VarId(1))],
                NogoodMode::EquivalenceFree,
            )
            .unwrap(),
        ];
        for spec in specs {
            for mode in [NogoodMode::EquivalenceFree, NogoodMode::WithEquivalence] {
                for s in &all {
                    let ng = compile_nogood_mode(&spec, s, mode).unwrap();
                    for p in &all {
                        let got = evaluate(&ng, p, None).unwrap().as_bool().unwrap();
                        let want = match mode {
                            NogoodMode::EquivalenceFree => !leq(&spec, s, p).unwrap(),
                            NogoodMode::WithEquivalence => {
                                !strictly_dominates(&spec, s, p).unwrap()
                            }
                        };
                        assert_eq!(got, want, "spec={spec:?} mode={mode:?} s={s:?} p={p:?}");
                    }
                }
            }
        }
        let _ = inst;
    }

    /// Preorder laws for the built-in relations (cpnet excluded: its
    /// transitivity is unverified and checked separately by the suites).
    #[test]
    fn preorder_laws_hold() {
        let inst = Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 0, high: 2 }),
                ("b1", Domain::Bool),
                ("b2", Domain::Bool),
            ],
            vec![],
        );
        let all: Vec<Valuation> = (0..=2)
            .flat_map(|a| (0..=1).flat_map(move |b| (0..=1).map(move |c| val(&[a, b, c]))))
            .collect();
        let specs = vec![
            DominanceSpec::total_order(Expr::var(VarId(0)), NogoodMode::EquivalenceFree).unwrap(),
            DominanceSpec::lex(
                vec![Expr::var(VarId(0)), Expr::var(VarId(1))],
                NogoodMode::EquivalenceFree,
            )
            .unwrap(),
            DominanceSpec::pareto(
                vec![Expr::var(VarId(0)), Expr::var(VarId(1))],
                NogoodMode::EquivalenceFree,
            )
            .unwrap(),
            DominanceSpec::subset_min(vec![VarId(1), VarId(2)], &inst, NogoodMode::EquivalenceFree)
                .unwrap(),
            DominanceSpec::subset_max(vec![VarId(1), VarId(2)], &inst, NogoodMode::EquivalenceFree)
                .unwrap(),
        ];
        for spec in &specs {
            for x in &all {
                assert!(leq(spec, x, x).unwrap(), "reflexivity");
                for y in &all {
                    for z in &all {
                        if leq(spec, x, y).unwrap() && leq(spec, y, z).unwrap() {
                            assert!(leq(spec, x, z).unwrap(), "transitivity");
                        }
                    }
                }
            }
        }
    }
}
