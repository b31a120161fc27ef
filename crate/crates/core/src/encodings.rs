//! Problem-to-CDP transforms: weighted MaxCSP reification, maximally
//! satisfiable subset / minimal correction subset construction, and
//! frequent/closed/maximal itemset mining models.
//!
//! The MaxCSP and MSS transforms share the same reification: each soft
//! constraint `c` gets a fresh boolean `B_c` and only the forward half
//! `B_c -> c` is posted. MaxCSP then maximizes the weighted sum of the
//! `B_c`, which is a total order; MSS enumeration is subset-max over them.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::dominance::{DominanceError, DominanceSpec, NogoodMode};
use crate::ir::{CmpOp, Domain, Expr, Instance, VarDecl, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("weighted constraint index {0} out of range")]
    BadConstraintIndex(usize),
    #[error("soft constraint index {0} out of range")]
    BadSoftIndex(usize),
    #[error("mss vectors must share one length")]
    RaggedMssVectors,
    #[error("transaction {0} mentions an item outside the item list")]
    BadTransaction(usize),
    #[error("frequency threshold must be at least 1")]
    BadThreshold,
    #[error("dominance error: {0}")]
    Dominance(#[from] DominanceError),
}

/// A base instance with integer weights attached to (a subset of) its
/// constraints; unweighted constraints stay hard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedInstance {
    pub base: Instance,
    /// `(constraint index, weight)` pairs, ascending by index.
    pub weights: Vec<(usize, i64)>,
}

impl WeightedInstance {
    pub fn new(base: Instance, weights: Vec<(usize, i64)>) -> Result<Self, EncodingError> {
        for &(i, _) in &weights {
            if i >= base.constraints.len() {
                return Err(EncodingError::BadConstraintIndex(i));
            }
        }
        let mut w = weights;
        w.sort_by_key(|&(i, _)| i);
        Ok(WeightedInstance { base, weights: w })
    }
}

/// Output of [`reify_maxcsp`]: the reified instance, the reified weight
/// expression `sum g(c) * B_c`, the ids of the fresh booleans, and the
/// total-order spec maximizing the weight.
#[derive(Debug, Clone)]
pub struct MaxCspModel {
    pub instance: Instance,
    pub weight_expr: Expr,
    pub soft_bools: Vec<VarId>,
    pub spec: DominanceSpec,
}

/// Replaces each weighted constraint `c` by `B_c -> c` with a fresh boolean
/// `B_c`, and pairs the result with the total order that maximizes
/// `sum g(c) * B_c` (encoded as minimizing its negation: smaller is better).
pub fn reify_maxcsp(w: &WeightedInstance) -> Result<MaxCspModel, EncodingError> {
    let (instance, soft_bools) = reify(
        &w.base,
        &w.weights.iter().map(|&(i, _)| i).collect::<Vec<_>>(),
    )?;
    let mut terms = Vec::with_capacity(w.weights.len());
    for (&(_, g), b) in w.weights.iter().zip(soft_bools.iter()) {
        terms.push(Expr::mul(g, Expr::var(*b)));
    }
    let weight_expr = sum_expr(terms);
    let spec = DominanceSpec::total_order(
        Expr::Neg(Box::new(weight_expr.clone())),
        NogoodMode::EquivalenceFree,
    )?;
    let mut instance = instance;
    instance.metadata.weights = Some(w.weights.iter().map(|&(_, g)| g).collect());
    Ok(MaxCspModel {
        instance,
        weight_expr,
        soft_bools,
        spec,
    })
}

/// Output of [`mss_transform`]: reified instance, the soft booleans, and
/// the subset-max spec over them.
#[derive(Debug, Clone)]
pub struct MssModel {
    pub instance: Instance,
    pub soft_bools: Vec<VarId>,
    pub spec: DominanceSpec,
}

/// Reifies the `soft` constraints of `instance` and returns the subset-max
/// CDP whose solutions' maximal boolean vectors are the maximally
/// satisfiable subsets.
pub fn mss_transform(instance: &Instance, soft: &[usize]) -> Result<MssModel, EncodingError> {
    for &i in soft {
        if i >= instance.constraints.len() {
            return Err(EncodingError::BadSoftIndex(i));
        }
    }
    let (reified, soft_bools) = reify(instance, soft)?;
    let spec =
        DominanceSpec::subset_max(soft_bools.clone(), &reified, NogoodMode::EquivalenceFree)?;
    Ok(MssModel {
        instance: reified,
        soft_bools,
        spec,
    })
}

fn reify(base: &Instance, soft: &[usize]) -> Result<(Instance, Vec<VarId>), EncodingError> {
    let soft_set: BTreeSet<usize> = soft.iter().copied().collect();
    let mut vars = base.vars.clone();
    let mut soft_bools = Vec::with_capacity(soft_set.len());
    for k in 0..soft_set.len() {
        let id = VarId(vars.len());
        vars.push(VarDecl {
            id,
            name: format!("B[{}]", k + 1),
            domain: Domain::Bool,
        });
        soft_bools.push(id);
    }
    let mut constraints = Vec::with_capacity(base.constraints.len());
    let mut next_bool = soft_bools.iter();
    for (i, c) in base.constraints.iter().enumerate() {
        if soft_set.contains(&i) {
            let b = *next_bool.next().expect("one boolean per soft constraint");
            constraints.push(Expr::implies(
                Expr::cmp(CmpOp::Eq, Expr::var(b), Expr::Int(1)),
                c.clone(),
            ));
        } else {
            constraints.push(c.clone());
        }
    }
    Ok((Instance::new(vars, constraints), soft_bools))
}

fn sum_expr(terms: Vec<Expr>) -> Expr {
    match terms.len() {
        0 => Expr::Int(0),
        _ => {
            let mut it = terms.into_iter();
            let mut acc = it.next().unwrap();
            for t in it {
                acc = Expr::add(acc, t);
            }
            acc
        }
    }
}

/// Complements each maximal-satisfiable-subset vector into the index set of
/// its minimal correction subset.
pub fn mcs_from_mss(mss_set: &[Vec<bool>]) -> Result<Vec<BTreeSet<usize>>, EncodingError> {
    if let Some(first) = mss_set.first() {
        if mss_set.iter().any(|v| v.len() != first.len()) {
            return Err(EncodingError::RaggedMssVectors);
        }
    }
    Ok(mss_set
        .iter()
        .map(|mss| {
            mss.iter()
                .enumerate()
                .filter(|(_, &in_mss)| !in_mss)
                .map(|(i, _)| i)
                .collect()
        })
        .collect())
}

/// A transaction database over named items with a minimum frequency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionDb {
    pub items: Vec<String>,
    /// Each transaction is a set of indices into `items`.
    pub transactions: Vec<BTreeSet<usize>>,
    pub threshold: u64,
}

impl TransactionDb {
    pub fn new(
        items: Vec<String>,
        transactions: Vec<BTreeSet<usize>>,
        threshold: u64,
    ) -> Result<Self, EncodingError> {
        if threshold < 1 {
            return Err(EncodingError::BadThreshold);
        }
        for (t, tx) in transactions.iter().enumerate() {
            if tx.iter().any(|&i| i >= items.len()) {
                return Err(EncodingError::BadTransaction(t));
            }
        }
        Ok(TransactionDb {
            items,
            transactions,
            threshold,
        })
    }

    /// Parses the text format: one transaction per line, whitespace
    /// separated item tokens; items are collected in order of first
    /// appearance. Empty lines are skipped.
    pub fn parse(text: &str, threshold: u64) -> Result<Self, EncodingError> {
        let mut items: Vec<String> = Vec::new();
        let mut transactions = Vec::new();
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let mut tx = BTreeSet::new();
            for tok in line.split_whitespace() {
                let idx = match items.iter().position(|i| i == tok) {
                    Some(i) => i,
                    None => {
                        items.push(tok.to_string());
                        items.len() - 1
                    }
                };
                tx.insert(idx);
            }
            transactions.push(tx);
        }
        TransactionDb::new(items, transactions, threshold)
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        for tx in &self.transactions {
            let toks: Vec<&str> = tx.iter().map(|&i| self.items[i].as_str()).collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
        out
    }

    /// Number of transactions containing `itemset` (given as item indices).
    pub fn frequency(&self, itemset: &BTreeSet<usize>) -> u64 {
        self.transactions
            .iter()
            .filter(|tx| itemset.is_subset(tx))
            .count() as u64
    }
}

/// Which pattern family an itemset model enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemsetKind {
    Frequent,
    Closed,
    Maximal,
}

/// Output of [`itemset_model`]: booleans `I_i` per item and `T_t` per
/// transaction (coverage fully channeled in both directions), the frequency
/// constraint, and the dominance spec of the requested family (`None` for
/// plain frequent enumeration).
#[derive(Debug, Clone)]
pub struct ItemsetModel {
    pub instance: Instance,
    pub item_bools: Vec<VarId>,
    pub transaction_bools: Vec<VarId>,
    pub spec: Option<DominanceSpec>,
}

/// Builds the CSP whose solutions are the frequent itemsets of `db`:
/// `T_t = 1` iff the selected itemset is a subset of transaction `t`, and
/// `sum T_t >= threshold`. Maximal patterns use subset-max dominance over
/// the item booleans; closed patterns use the custom nogood that excludes
/// subpatterns of equal frequency.
pub fn itemset_model(db: &TransactionDb, kind: ItemsetKind) -> Result<ItemsetModel, EncodingError> {
    let n_items = db.items.len();
    let n_tx = db.transactions.len();
    let mut vars = Vec::with_capacity(n_items + n_tx);
    for name in &db.items {
        vars.push(VarDecl {
            id: VarId(vars.len()),
            name: format!("I[{name}]"),
            domain: Domain::Bool,
        });
    }
    let item_bools: Vec<VarId> = (0..n_items).map(VarId).collect();
    let mut transaction_bools = Vec::with_capacity(n_tx);
    for t in 0..n_tx {
        let id = VarId(vars.len());
        vars.push(VarDecl {
            id,
            name: format!("T[{}]", t + 1),
            domain: Domain::Bool,
        });
        transaction_bools.push(id);
    }

    let mut constraints = Vec::new();
    for (t, tx) in db.transactions.iter().enumerate() {
        let t_is_one = Expr::cmp(CmpOp::Eq, Expr::var(transaction_bools[t]), Expr::Int(1));
        // items outside the transaction must be deselected for coverage
        let outside: Vec<Expr> = (0..n_items)
            .filter(|i| !tx.contains(i))
            .map(|i| Expr::cmp(CmpOp::Eq, Expr::var(item_bools[i]), Expr::Int(0)))
            .collect();
        let covered = Expr::all(outside);
        constraints.push(Expr::implies(t_is_one.clone(), covered.clone()));
        constraints.push(Expr::implies(covered, t_is_one));
    }
    let count = sum_expr(
        transaction_bools
            .iter()
            .map(|t| Expr::var(*t))
            .collect::<Vec<_>>(),
    );
    constraints.push(Expr::cmp(CmpOp::Ge, count, Expr::Int(db.threshold as i64)));

    let instance = Instance::new(vars, constraints);
    let spec = match kind {
        ItemsetKind::Frequent => None,
        ItemsetKind::Maximal => Some(DominanceSpec::subset_max(
            item_bools.clone(),
            &instance,
            NogoodMode::EquivalenceFree,
        )?),
        ItemsetKind::Closed => Some(DominanceSpec::custom(
            closed_template(&item_bools, &transaction_bools),
            NogoodMode::EquivalenceFree,
        )?),
    };
    Ok(ItemsetModel {
        instance,
        item_bools,
        transaction_bools,
        spec,
    })
}

/// The closed-pattern nogood `!(S ⊒ V /\ freq(S) = freq(V))`: some selected
/// item must leave the previous pattern, or the frequency must differ.
fn closed_template(items: &[VarId], txs: &[VarId]) -> Expr {
    let grows = Expr::any(
        items
            .iter()
            .map(|i| Expr::cmp(CmpOp::Gt, Expr::var(*i), Expr::sol(*i)))
            .collect(),
    );
    let freq = sum_expr(txs.iter().map(|t| Expr::var(*t)).collect::<Vec<_>>());
    let sol_freq = sum_expr(txs.iter().map(|t| Expr::sol(*t)).collect::<Vec<_>>());
    let freq_differs = Expr::cmp(CmpOp::Ne, freq, sol_freq);
    Expr::or(grows, freq_differs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::{eval_nogood, leq};
    use crate::ir::{check, evaluate, Valuation};

    /// Brute-force MaxCSP optimum: maximize over B given V.
    fn brute_max_weight(w: &WeightedInstance) -> i64 {
        let mut best = i64::MIN;
        let mut stack = vec![vec![]];
        while let Some(partial) = stack.pop() {
            if partial.len() == w.base.vars.len() {
                let v = Valuation::from_values(partial);
                let mut total = 0;
                let mut hard_ok = true;
                let weighted: BTreeSet<usize> = w.weights.iter().map(|&(i, _)| i).collect();
                for (i, c) in w.base.constraints.iter().enumerate() {
                    let sat = evaluate(c, &v, None).unwrap().as_bool().unwrap();
                    if weighted.contains(&i) {
                        if sat {
                            total += w.weights.iter().find(|&&(j, _)| j == i).unwrap().1;
                        }
                    } else if !sat {
                        hard_ok = false;
                        break;
                    }
                }
                if hard_ok {
                    best = best.max(total);
                }
                continue;
            }
            for val in w.base.vars[partial.len()].domain.values() {
                let mut p = partial.clone();
                p.push(val);
                stack.push(p);
            }
        }
        best
    }

    fn pairwise_unsat_weighted() -> WeightedInstance {
        // c1: x1 + x2 >= 1, c2: x1 = 0, c3: x2 = 0 -- pairwise satisfiable,
        // jointly unsatisfiable
        let base = Instance::from_domains(
            vec![("x1", Domain::Bool), ("x2", Domain::Bool)],
            vec![
                Expr::cmp(
                    CmpOp::Ge,
                    Expr::add(Expr::var(VarId(0)), Expr::var(VarId(1))),
                    Expr::Int(1),
                ),
                Expr::cmp(CmpOp::Eq, Expr::var(VarId(0)), Expr::Int(0)),
                Expr::cmp(CmpOp::Eq, Expr::var(VarId(1)), Expr::Int(0)),
            ],
        );
        WeightedInstance::new(base, vec![(0, 1), (1, 1), (2, 1)]).unwrap()
    }

    #[test]
    fn maxcsp_optimum_two_of_three() {
        let w = pairwise_unsat_weighted();
        assert_eq!(brute_max_weight(&w), 2);
        let model = reify_maxcsp(&w).unwrap();
        // solve by scanning all reified solutions for the best weight
        let best = crate::engine::enumerate_all(&model.instance, 10_000)
            .unwrap()
            .into_iter()
            .map(|s| {
                evaluate(&model.weight_expr, &s, None)
                    .unwrap()
                    .as_int()
                    .unwrap()
            })
            .max()
            .unwrap();
        assert_eq!(best, 2);
    }

    #[test]
    fn maxcsp_all_satisfiable_reaches_total_weight() {
        let base = Instance::from_domains(
            vec![("x", Domain::IntRange { low: 0, high: 3 })],
            vec![
                Expr::cmp(CmpOp::Ge, Expr::var(VarId(0)), Expr::Int(1)),
                Expr::cmp(CmpOp::Le, Expr::var(VarId(0)), Expr::Int(2)),
            ],
        );
        let w = WeightedInstance::new(base, vec![(0, 3), (1, 4)]).unwrap();
        assert_eq!(brute_max_weight(&w), 7);
        let model = reify_maxcsp(&w).unwrap();
        let best = crate::engine::enumerate_all(&model.instance, 10_000)
            .unwrap()
            .into_iter()
            .map(|s| {
                evaluate(&model.weight_expr, &s, None)
                    .unwrap()
                    .as_int()
                    .unwrap()
            })
            .max()
            .unwrap();
        assert_eq!(best, 7);
    }

    #[test]
    fn maxcsp_empty_soft_set() {
        let base = Instance::from_domains(vec![("x", Domain::Bool)], vec![]);
        let w = WeightedInstance::new(base, vec![]).unwrap();
        let model = reify_maxcsp(&w).unwrap();
        assert_eq!(model.weight_expr, Expr::Int(0));
        // single equivalence class: every pair of solutions is equivalent
        let sols = crate::engine::enumerate_all(&model.instance, 10).unwrap();
        for a in &sols {
            for b in &sols {
                assert!(leq(&model.spec, a, b).unwrap());
            }
        }
    }

    #[test]
    fn maxcsp_weight_order_prefers_heavier() {
        let w = pairwise_unsat_weighted();
        let model = reify_maxcsp(&w).unwrap();
        // (x1,x2,B1,B2,B3): weight 2 solution dominates weight 1 solution
        let heavy = Valuation::from_values(vec![1, 0, 1, 0, 1]);
        let light = Valuation::from_values(vec![1, 0, 1, 0, 0]);
        assert!(leq(&model.spec, &heavy, &light).unwrap());
        assert!(!leq(&model.spec, &light, &heavy).unwrap());
    }

    #[test]
    fn reify_preserves_base_solutions() {
        let w = pairwise_unsat_weighted();
        let model = reify_maxcsp(&w).unwrap();
        // forcing all B_c = 1 leaves exactly the fully-hard base solutions
        let mut forced = model.instance.clone();
        for b in &model.soft_bools {
            forced
                .constraints
                .push(Expr::cmp(CmpOp::Eq, Expr::var(*b), Expr::Int(1)));
        }
        assert!(crate::engine::enumerate_all(&forced, 100)
            .unwrap()
            .is_empty());

        // and on a satisfiable base the projections match
        let base = Instance::from_domains(
            vec![("x", Domain::IntRange { low: 0, high: 2 })],
            vec![Expr::cmp(CmpOp::Ge, Expr::var(VarId(0)), Expr::Int(1))],
        );
        let w2 = WeightedInstance::new(base.clone(), vec![(0, 1)]).unwrap();
        let m2 = reify_maxcsp(&w2).unwrap();
        let mut forced = m2.instance.clone();
        for b in &m2.soft_bools {
            forced
                .constraints
                .push(Expr::cmp(CmpOp::Eq, Expr::var(*b), Expr::Int(1)));
        }
        let projected: Vec<Vec<i64>> = crate::engine::enumerate_all(&forced, 100)
            .unwrap()
            .iter()
            .map(|s| s.values()[..base.vars.len()].to_vec())
            .collect();
        let base_sols: Vec<Vec<i64>> = crate::engine::enumerate_all(&base, 100)
            .unwrap()
            .iter()
            .map(|s| s.values().to_vec())
            .collect();
        assert_eq!(projected, base_sols);
    }

    /// Worked MSS example: x in {1,2}, soft c1: x=1, c2: x=2, c3: x>=1.
    fn worked_mss() -> (Instance, Vec<usize>) {
        let inst = Instance::from_domains(
            vec![("x", Domain::IntRange { low: 1, high: 2 })],
            vec![
                Expr::cmp(CmpOp::Eq, Expr::var(VarId(0)), Expr::Int(1)),
                Expr::cmp(CmpOp::Eq, Expr::var(VarId(0)), Expr::Int(2)),
                Expr::cmp(CmpOp::Ge, Expr::var(VarId(0)), Expr::Int(1)),
            ],
        );
        (inst, vec![0, 1, 2])
    }

    /// Enumerates maximal satisfiable B-sets by brute force.
    fn brute_mss(inst: &Instance, soft: &[usize]) -> Vec<Vec<bool>> {
        let n = soft.len();
        let mut satisfiable = Vec::new();
        for mask in 0..(1u32 << n) {
            let mut sub = inst.clone();
            sub.constraints = inst
                .constraints
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    !soft.contains(i)
                        || mask & (1 << soft.iter().position(|s| s == i).unwrap()) != 0
                })
                .map(|(_, c)| c.clone())
                .collect();
            if !crate::engine::enumerate_all(&sub, 10_000)
                .unwrap()
                .is_empty()
            {
                satisfiable.push(mask);
            }
        }
        satisfiable
            .iter()
            .filter(|&&m| !satisfiable.iter().any(|&m2| m2 != m && m2 & m == m))
            .map(|&m| (0..n).map(|i| m & (1 << i) != 0).collect())
            .collect()
    }

    #[test]
    fn worked_mss_family() {
        let (inst, soft) = worked_mss();
        let mut family = brute_mss(&inst, &soft);
        family.sort();
        // {c1,c3} and {c2,c3}
        assert_eq!(
            family,
            vec![vec![true, false, true], vec![false, true, true]]
                .into_iter()
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn mss_transform_shape() {
        let (inst, soft) = worked_mss();
        let model = mss_transform(&inst, &soft).unwrap();
        assert_eq!(model.soft_bools.len(), 3);
        assert_eq!(model.instance.vars.len(), 4);
        // reified solutions satisfy the half-reification
        for s in crate::engine::enumerate_all(&model.instance, 1000).unwrap() {
            assert!(check(&model.instance, &s).unwrap());
        }
    }

    #[test]
    fn all_satisfiable_soft_set_has_single_full_mss() {
        let inst = Instance::from_domains(
            vec![("x", Domain::IntRange { low: 0, high: 2 })],
            vec![
                Expr::cmp(CmpOp::Ge, Expr::var(VarId(0)), Expr::Int(1)),
                Expr::cmp(CmpOp::Le, Expr::var(VarId(0)), Expr::Int(2)),
            ],
        );
        let family = brute_mss(&inst, &[0, 1]);
        assert_eq!(family, vec![vec![true, true]]);
    }

    #[test]
    fn unsatisfiable_soft_constraint_in_no_mss() {
        let inst = Instance::from_domains(
            vec![("x", Domain::Bool)],
            vec![Expr::cmp(CmpOp::Gt, Expr::var(VarId(0)), Expr::Int(5))],
        );
        let family = brute_mss(&inst, &[0]);
        assert_eq!(family, vec![vec![false]]);
    }

    #[test]
    fn mcs_complements() {
        let mss = vec![vec![true, false, true], vec![false, true, true]];
        let mcs = mcs_from_mss(&mss).unwrap();
        assert_eq!(mcs[0], BTreeSet::from([1]));
        assert_eq!(mcs[1], BTreeSet::from([0]));
        // full set -> empty complement, empty -> full
        assert_eq!(
            mcs_from_mss(&[vec![true, true]]).unwrap(),
            vec![BTreeSet::new()]
        );
        assert_eq!(
            mcs_from_mss(&[vec![false, false]]).unwrap(),
            vec![BTreeSet::from([0, 1])]
        );
    }

    /// The worked database: t1={a,b}, t2={a,b,c}, t3={b}, threshold 2.
    fn worked_db() -> TransactionDb {
        TransactionDb::parse("a b\na b c\nb\n", 2).unwrap()
    }

    /// All frequent itemsets by scanning the powerset against the raw db.
    fn brute_frequent(db: &TransactionDb) -> Vec<BTreeSet<usize>> {
        let n = db.items.len();
        (0..(1u32 << n))
            .map(|mask| {
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .collect::<BTreeSet<usize>>()
            })
            .filter(|s| db.frequency(s) >= db.threshold)
            .collect()
    }

    #[test]
    fn worked_db_frequent_sets() {
        let db = worked_db();
        let frequent = brute_frequent(&db);
        let a = db.items.iter().position(|i| i == "a").unwrap();
        let b = db.items.iter().position(|i| i == "b").unwrap();
        let expect: Vec<BTreeSet<usize>> = vec![
            BTreeSet::new(),
            BTreeSet::from([a]),
            BTreeSet::from([b]),
            BTreeSet::from([a, b]),
        ];
        assert_eq!(
            frequent.iter().collect::<BTreeSet<_>>(),
            expect.iter().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn itemset_model_solutions_are_frequent_sets() {
        let db = worked_db();
        let model = itemset_model(&db, ItemsetKind::Frequent).unwrap();
        assert!(model.spec.is_none());
        let sols = crate::engine::enumerate_all(&model.instance, 10_000).unwrap();
        let got: BTreeSet<BTreeSet<usize>> = sols
            .iter()
            .map(|s| {
                model
                    .item_bools
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| s.value(**v) == Some(1))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let expect: BTreeSet<BTreeSet<usize>> = brute_frequent(&db).into_iter().collect();
        assert_eq!(got, expect);
        // full channeling: one solution per frequent itemset
        assert_eq!(sols.len(), expect.len());
    }

    #[test]
    fn frequency_channeling_is_exact() {
        let db = worked_db();
        let model = itemset_model(&db, ItemsetKind::Frequent).unwrap();
        for s in crate::engine::enumerate_all(&model.instance, 10_000).unwrap() {
            let itemset: BTreeSet<usize> = model
                .item_bools
                .iter()
                .enumerate()
                .filter(|(_, v)| s.value(**v) == Some(1))
                .map(|(i, _)| i)
                .collect();
            let count: i64 = model
                .transaction_bools
                .iter()
                .map(|t| s.value(*t).unwrap())
                .sum();
            assert_eq!(count as u64, db.frequency(&itemset));
        }
    }

    #[test]
    fn closed_template_excludes_equal_frequency_subpatterns() {
        let db = worked_db();
        let model = itemset_model(&db, ItemsetKind::Closed).unwrap();
        let spec = model.spec.as_ref().unwrap();
        let sols = crate::engine::enumerate_all(&model.instance, 10_000).unwrap();
        // find the {b} and {a,b} solutions and the empty set solution
        let find = |want: &BTreeSet<usize>| {
            sols.iter()
                .find(|s| {
                    let set: BTreeSet<usize> = model
                        .item_bools
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| s.value(**v) == Some(1))
                        .map(|(i, _)| i)
                        .collect();
                    &set == want
                })
                .unwrap()
                .clone()
        };
        let a = db.items.iter().position(|i| i == "a").unwrap();
        let b = db.items.iter().position(|i| i == "b").unwrap();
        let empty = find(&BTreeSet::new());
        let just_b = find(&BTreeSet::from([b]));
        let ab = find(&BTreeSet::from([a, b]));
        // {b} dominates {} (superset, same frequency 3): nogood false at {}
        assert!(!eval_nogood(spec, &just_b, &empty).unwrap());
        // {a,b} does not dominate {b} (frequency differs: 2 vs 3)
        assert!(eval_nogood(spec, &ab, &just_b).unwrap());
    }

    #[test]
    fn db_text_round_trip() {
        let db = worked_db();
        let text = db.write();
        let back = TransactionDb::parse(&text, db.threshold).unwrap();
        assert_eq!(db, back);
    }

    #[test]
    fn threshold_zero_rejected() {
        assert_eq!(
            TransactionDb::parse("a b\n", 0),
            Err(EncodingError::BadThreshold)
        );
    }
}
