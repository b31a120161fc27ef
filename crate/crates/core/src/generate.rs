//! Seeded instance generators: random CSPs for the property suites, the
//! weighted MaxCSP family, bi-objective traveling-salesman instances with
//! an independent tour-enumeration oracle, random transaction databases,
//! and dominance specs to pair with them. Everything is deterministic in
//! its seed.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cpnet::{CpNet, CpVar};
use crate::dominance::{DominanceSpec, NogoodMode};
use crate::dsl::{
    self, AstExpr, BinOp, CompKind, DomAst, ExprKind, Item, ModelAst, RangeAst, SolveKind,
};
use crate::encodings::{TransactionDb, WeightedInstance};
use crate::ir::{CmpOp, Domain, Expr, Instance, VarId};

/// A random mixed boolean/integer instance. The first two variables are
/// always boolean so subset dominance always has a carrier; integer
/// domains are `0..k` with `k+1 <= max_dom_size`.
pub fn random_instance(n_vars: usize, max_dom_size: i64, n_cons: usize, seed: u64) -> Instance {
    assert!(n_vars >= 2);
    assert!(max_dom_size >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37).wrapping_add(17));
    let mut doms = Vec::with_capacity(n_vars);
    for i in 0..n_vars {
        let bool_var = i < 2 || rng.gen_bool(0.4);
        if bool_var {
            doms.push(Domain::Bool);
        } else {
            let high = rng.gen_range(1..max_dom_size);
            doms.push(Domain::IntRange { low: 0, high });
        }
    }
    let names: Vec<String> = (0..n_vars).map(|i| format!("x{}", i + 1)).collect();
    let vars = names
        .iter()
        .zip(doms.iter())
        .map(|(n, d)| (n.as_str(), d.clone()))
        .collect();
    let mut constraints = Vec::with_capacity(n_cons);
    for _ in 0..n_cons {
        constraints.push(random_constraint(&doms, &mut rng));
    }
    Instance::from_domains(vars, constraints)
}

fn pick_distinct(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k.min(n) {
        let i = rng.gen_range(0..pool.len());
        out.push(pool.swap_remove(i));
    }
    out
}

fn random_linear(doms: &[Domain], rng: &mut ChaCha8Rng) -> (Expr, i64, i64) {
    let k = rng.gen_range(2..=3.min(doms.len()));
    let vars = pick_distinct(rng, doms.len(), k);
    let mut expr: Option<Expr> = None;
    let (mut lo, mut hi) = (0i64, 0i64);
    for v in vars {
        let coef = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
        let term = if coef == 1 {
            Expr::var(VarId(v))
        } else {
            Expr::mul(coef, Expr::var(VarId(v)))
        };
        let (dlo, dhi) = match &doms[v] {
            Domain::Bool => (0, 1),
            Domain::IntRange { low, high } => (*low, *high),
            Domain::IntSet { values } => (values[0], *values.last().unwrap()),
        };
        if coef >= 0 {
            lo += coef * dlo;
            hi += coef * dhi;
        } else {
            lo += coef * dhi;
            hi += coef * dlo;
        }
        expr = Some(match expr {
            None => term,
            Some(e) => Expr::add(e, term),
        });
    }
    (expr.unwrap(), lo, hi)
}

fn random_constraint(doms: &[Domain], rng: &mut ChaCha8Rng) -> Expr {
    match rng.gen_range(0..3) {
        0 => {
            // linear comparison with a realizable bound
            let (lin, lo, hi) = random_linear(doms, rng);
            let rhs = rng.gen_range(lo..=hi);
            let op = [CmpOp::Le, CmpOp::Ge, CmpOp::Ne][rng.gen_range(0..3)];
            Expr::cmp(op, lin, Expr::Int(rhs))
        }
        1 => {
            // clause over value literals
            let k = rng.gen_range(2..=3.min(doms.len()));
            let vars = pick_distinct(rng, doms.len(), k);
            let lits = vars
                .into_iter()
                .map(|v| {
                    let val = random_value(&doms[v], rng);
                    let op = if rng.gen_bool(0.5) {
                        CmpOp::Eq
                    } else {
                        CmpOp::Ne
                    };
                    Expr::cmp(op, Expr::var(VarId(v)), Expr::Int(val))
                })
                .collect();
            Expr::any(lits)
        }
        _ => {
            // guarded linear comparison
            let g = rng.gen_range(0..doms.len());
            let gval = random_value(&doms[g], rng);
            let (lin, lo, hi) = random_linear(doms, rng);
            let rhs = rng.gen_range(lo..=hi);
            Expr::implies(
                Expr::cmp(CmpOp::Eq, Expr::var(VarId(g)), Expr::Int(gval)),
                Expr::cmp(CmpOp::Le, lin, Expr::Int(rhs)),
            )
        }
    }
}

fn random_value(dom: &Domain, rng: &mut ChaCha8Rng) -> i64 {
    let values = dom.values();
    values[rng.gen_range(0..values.len())]
}

/// A random linear objective over the instance's variables.
pub fn random_objective(instance: &Instance, rng: &mut ChaCha8Rng) -> Expr {
    let doms: Vec<Domain> = instance.vars.iter().map(|v| v.domain.clone()).collect();
    random_linear(&doms, rng).0
}

/// The dominance families exercised by the property suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecFamily {
    TotalOrder,
    Lex,
    Pareto,
    SubsetMin,
    SubsetMax,
    CpNet,
}

impl SpecFamily {
    pub const ALL: [SpecFamily; 6] = [
        SpecFamily::TotalOrder,
        SpecFamily::Lex,
        SpecFamily::Pareto,
        SpecFamily::SubsetMin,
        SpecFamily::SubsetMax,
        SpecFamily::CpNet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecFamily::TotalOrder => "total-order",
            SpecFamily::Lex => "lex",
            SpecFamily::Pareto => "pareto",
            SpecFamily::SubsetMin => "subset-min",
            SpecFamily::SubsetMax => "subset-max",
            SpecFamily::CpNet => "cpnet",
        }
    }
}

/// A random spec of the given family over `instance`'s variables.
pub fn random_spec(
    family: SpecFamily,
    instance: &Instance,
    mode: NogoodMode,
    seed: u64,
) -> DominanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x5851).wrapping_add(99));
    match family {
        SpecFamily::TotalOrder => {
            DominanceSpec::total_order(random_objective(instance, &mut rng), mode).unwrap()
        }
        SpecFamily::Lex => {
            let k = rng.gen_range(2..=3);
            let objectives = (0..k)
                .map(|_| random_objective(instance, &mut rng))
                .collect();
            DominanceSpec::lex(objectives, mode).unwrap()
        }
        SpecFamily::Pareto => {
            let k = rng.gen_range(2..=3);
            let objectives = (0..k)
                .map(|_| random_objective(instance, &mut rng))
                .collect();
            DominanceSpec::pareto(objectives, mode).unwrap()
        }
        SpecFamily::SubsetMin | SpecFamily::SubsetMax => {
            let bools: Vec<VarId> = instance
                .vars
                .iter()
                .filter(|v| v.domain.is_bool())
                .map(|v| v.id)
                .collect();
            if family == SpecFamily::SubsetMin {
                DominanceSpec::subset_min(bools, instance, mode).unwrap()
            } else {
                DominanceSpec::subset_max(bools, instance, mode).unwrap()
            }
        }
        SpecFamily::CpNet => {
            let net = random_net_for(instance, 2, seed ^ 0xabcd);
            DominanceSpec::cpnet(net, instance, mode).unwrap()
        }
    }
}

/// A random CP-net whose variables mirror `instance` (domains must be
/// `0..k` shaped, which [`random_instance`] guarantees).
pub fn random_net_for(instance: &Instance, max_parents: usize, seed: u64) -> CpNet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545).wrapping_add(7));
    let n = instance.vars.len();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let mut position = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }
    let sizes: Vec<usize> = instance
        .vars
        .iter()
        .map(|v| v.domain.size() as usize)
        .collect();
    let vars = (0..n)
        .map(|i| {
            let earlier: Vec<usize> = (0..n).filter(|&j| position[j] < position[i]).collect();
            let k = rng.gen_range(0..=max_parents.min(earlier.len()));
            let mut parents = Vec::new();
            let mut pool = earlier;
            for _ in 0..k {
                let idx = rng.gen_range(0..pool.len());
                parents.push(pool.swap_remove(idx));
            }
            parents.sort_unstable();
            let row_count: usize = parents.iter().map(|&p| sizes[p]).product();
            let rows = (0..row_count)
                .map(|_| {
                    let mut row: Vec<i64> = (0..sizes[i] as i64).collect();
                    for a in (1..row.len()).rev() {
                        let b = rng.gen_range(0..=a);
                        row.swap(a, b);
                    }
                    row
                })
                .collect();
            CpVar {
                name: instance.vars[i].name.clone(),
                domain_size: sizes[i],
                parents,
                rows,
            }
        })
        .collect();
    CpNet { vars }
}

/// Random boolean CSP made of disjunctive clauses (3 literals each).
pub fn random_clause_instance(n_vars: usize, n_clauses: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x70a1).wrapping_add(3));
    let vars: Vec<(String, Domain)> = (0..n_vars)
        .map(|i| (format!("x{}", i + 1), Domain::Bool))
        .collect();
    let constraints = (0..n_clauses)
        .map(|_| {
            let picked = pick_distinct(&mut rng, n_vars, 3);
            Expr::any(
                picked
                    .into_iter()
                    .map(|v| {
                        let val = i64::from(rng.gen_bool(0.5));
                        Expr::cmp(CmpOp::Eq, Expr::var(VarId(v)), Expr::Int(val))
                    })
                    .collect(),
            )
        })
        .collect();
    Instance::from_domains(
        vars.iter().map(|(n, d)| (n.as_str(), d.clone())).collect(),
        constraints,
    )
}

/// A random weighted MaxCSP family member, kept as a surface-syntax model
/// so the same source yields both the programmatic weighted instance and
/// the reified `.cdp` file.
#[derive(Debug, Clone)]
pub struct MaxCspGen {
    /// Declarations plus the soft constraints (all constraints are soft).
    pub base: ModelAst,
    pub weights: Vec<i64>,
}

pub fn random_maxcsp(n_vars: usize, n_cons: usize, seed: u64) -> MaxCspGen {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0xc0de).wrapping_add(5));
    let mut items = Vec::new();
    let mut highs = Vec::with_capacity(n_vars);
    for i in 0..n_vars {
        let high = rng.gen_range(1..=3i64);
        highs.push(high);
        items.push(Item::Var {
            name: format!("x{}", i + 1),
            dom: DomAst::Range(AstExpr::int(0), AstExpr::int(high)),
            pos: Default::default(),
        });
    }
    let mut weights = Vec::with_capacity(n_cons);
    for _ in 0..n_cons {
        let k = rng.gen_range(2..=3.min(n_vars));
        let vars = pick_distinct(&mut rng, n_vars, k);
        let mut lin: Option<AstExpr> = None;
        let (mut lo, mut hi) = (0i64, 0i64);
        for v in &vars {
            let coef = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
            let name = format!("x{}", v + 1);
            let term = if coef == 1 {
                AstExpr::ident(&name)
            } else {
                AstExpr::bin(BinOp::Mul, AstExpr::int(coef), AstExpr::ident(&name))
            };
            if coef >= 0 {
                hi += coef * highs[*v];
            } else {
                lo += coef * highs[*v];
            }
            lin = Some(match lin {
                None => term,
                Some(e) => AstExpr::bin(BinOp::Add, e, term),
            });
        }
        let rhs = rng.gen_range(lo..=hi);
        let op = [BinOp::Le, BinOp::Ge, BinOp::Eq][rng.gen_range(0..3)];
        items.push(Item::Constraint(AstExpr::bin(
            op,
            lin.unwrap(),
            AstExpr::int(rhs),
        )));
        weights.push(rng.gen_range(1..=9i64));
    }
    MaxCspGen {
        base: ModelAst { items },
        weights,
    }
}

impl MaxCspGen {
    /// Lowers the base model and attaches the weights to every constraint.
    pub fn weighted(&self) -> WeightedInstance {
        let lowered = dsl::lower(&self.base).expect("generated model lowers");
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (i, w))
            .collect();
        WeightedInstance::new(lowered.instance, weights).expect("weights align")
    }

    /// The reified surface model: fresh booleans `B[i]`, half-reified soft
    /// constraints, and a strictly-increasing weighted-sum nogood.
    pub fn reified_model(&self) -> ModelAst {
        let m = self.weights.len();
        let mut items = Vec::new();
        items.push(Item::Array {
            name: "B".into(),
            index_low: AstExpr::int(1),
            index_high: AstExpr::int(m as i64),
            dom: DomAst::Bool,
            pos: Default::default(),
        });
        let mut cons_idx = 0usize;
        for item in &self.base.items {
            match item {
                Item::Constraint(c) => {
                    cons_idx += 1;
                    items.push(Item::Constraint(AstExpr::bin(
                        BinOp::Implies,
                        AstExpr::index("B", AstExpr::int(cons_idx as i64)),
                        c.clone(),
                    )));
                }
                other => items.push(other.clone()),
            }
        }
        let weight_of = |wrap: &dyn Fn(AstExpr) -> AstExpr| {
            let terms: Vec<AstExpr> = self
                .weights
                .iter()
                .enumerate()
                .map(|(i, &w)| {
                    let b = AstExpr::index("B", AstExpr::int(i as i64 + 1));
                    AstExpr::bin(BinOp::Mul, AstExpr::int(w), wrap(b))
                })
                .collect();
            AstExpr::chain(BinOp::Add, terms)
        };
        items.push(Item::DominanceNogood {
            expr: AstExpr::bin(BinOp::Gt, weight_of(&|b| b), weight_of(&AstExpr::sol)),
            with_equivalence: false,
            pos: Default::default(),
        });
        items.push(Item::Solve {
            kind: SolveKind::DominanceSearch,
            pos: Default::default(),
        });
        ModelAst { items }
    }
}

/// A bi-objective traveling-salesman instance: two symmetric cost matrices
/// over `n` cities.
#[derive(Debug, Clone)]
pub struct BiObjTsp {
    pub n: usize,
    pub cost1: Vec<Vec<i64>>,
    pub cost2: Vec<Vec<i64>>,
}

#[allow(clippy::needless_range_loop)] // symmetric two-sided assignment
pub fn biobj_tsp(n: usize, seed: u64) -> BiObjTsp {
    assert!(n >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x7357).wrapping_add(11));
    let mat = |rng: &mut ChaCha8Rng| {
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let c = rng.gen_range(1..=20i64);
                m[i][j] = c;
                m[j][i] = c;
            }
        }
        m
    };
    let cost1 = mat(&mut rng);
    let cost2 = mat(&mut rng);
    BiObjTsp { n, cost1, cost2 }
}

impl BiObjTsp {
    fn max_cost(&self, which: usize) -> i64 {
        let m = if which == 0 { &self.cost1 } else { &self.cost2 };
        let max_edge = m
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0);
        max_edge * self.n as i64
    }

    /// The successor/position model: `next[i]` is the city visited after
    /// `i`, edge indicators channel the successor choices, positions `u`
    /// eliminate subtours, and two cost variables carry the objectives.
    pub fn model_ast(&self) -> ModelAst {
        let n = self.n as i64;
        let mut items = Vec::new();
        let pos = Default::default();
        items.push(Item::Par {
            name: "n".into(),
            value: n,
            pos,
        });
        items.push(Item::Array {
            name: "next".into(),
            index_low: AstExpr::int(1),
            index_high: AstExpr::int(n),
            dom: DomAst::Range(AstExpr::int(1), AstExpr::int(n)),
            pos,
        });
        items.push(Item::Array {
            name: "E".into(),
            index_low: AstExpr::int(1),
            index_high: AstExpr::int(n * n),
            dom: DomAst::Bool,
            pos,
        });
        items.push(Item::Array {
            name: "u".into(),
            index_low: AstExpr::int(1),
            index_high: AstExpr::int(n),
            dom: DomAst::Range(AstExpr::int(1), AstExpr::int(n)),
            pos,
        });
        items.push(Item::Var {
            name: "cost1".into(),
            dom: DomAst::Range(AstExpr::int(0), AstExpr::int(self.max_cost(0))),
            pos,
        });
        items.push(Item::Var {
            name: "cost2".into(),
            dom: DomAst::Range(AstExpr::int(0), AstExpr::int(self.max_cost(1))),
            pos,
        });
        let next_at = |i: i64| AstExpr::index("next", AstExpr::int(i));
        let e_at = |i: i64, j: i64| AstExpr::index("E", AstExpr::int((i - 1) * n + j));
        for i in 1..=n {
            items.push(Item::Constraint(AstExpr::bin(
                BinOp::Ne,
                next_at(i),
                AstExpr::int(i),
            )));
        }
        for i in 1..=n {
            for j in (i + 1)..=n {
                items.push(Item::Constraint(AstExpr::bin(
                    BinOp::Ne,
                    next_at(i),
                    next_at(j),
                )));
            }
        }
        // channel: E[(i-1)*n + j] = 1 <-> next[i] = j
        for i in 1..=n {
            for j in 1..=n {
                let sel = AstExpr::bin(BinOp::Eq, next_at(i), AstExpr::int(j));
                items.push(Item::Constraint(AstExpr::bin(
                    BinOp::Implies,
                    e_at(i, j),
                    sel.clone(),
                )));
                items.push(Item::Constraint(AstExpr::bin(
                    BinOp::Implies,
                    sel,
                    e_at(i, j),
                )));
            }
        }
        // positions: city 1 opens the tour, successors increment
        items.push(Item::Constraint(AstExpr::bin(
            BinOp::Eq,
            AstExpr::index("u", AstExpr::int(1)),
            AstExpr::int(1),
        )));
        for i in 1..=n {
            for j in 2..=n {
                if i == j {
                    continue;
                }
                items.push(Item::Constraint(AstExpr::bin(
                    BinOp::Implies,
                    AstExpr::bin(BinOp::Eq, next_at(i), AstExpr::int(j)),
                    AstExpr::bin(
                        BinOp::Eq,
                        AstExpr::index("u", AstExpr::int(j)),
                        AstExpr::bin(
                            BinOp::Add,
                            AstExpr::index("u", AstExpr::int(i)),
                            AstExpr::int(1),
                        ),
                    ),
                )));
            }
        }
        for (name, mat) in [("cost1", &self.cost1), ("cost2", &self.cost2)] {
            let mut terms = Vec::new();
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    let c = mat[(i - 1) as usize][(j - 1) as usize];
                    terms.push(AstExpr::bin(BinOp::Mul, AstExpr::int(c), e_at(i, j)));
                }
            }
            items.push(Item::Constraint(AstExpr::bin(
                BinOp::Eq,
                AstExpr::ident(name),
                AstExpr::chain(BinOp::Add, terms),
            )));
        }
        items.push(Item::DominanceNogood {
            expr: AstExpr::bin(
                BinOp::Or,
                AstExpr::bin(
                    BinOp::Lt,
                    AstExpr::ident("cost1"),
                    AstExpr::sol(AstExpr::ident("cost1")),
                ),
                AstExpr::bin(
                    BinOp::Lt,
                    AstExpr::ident("cost2"),
                    AstExpr::sol(AstExpr::ident("cost2")),
                ),
            ),
            with_equivalence: false,
            pos,
        });
        items.push(Item::Solve {
            kind: SolveKind::DominanceSearch,
            pos,
        });
        ModelAst { items }
    }

    /// Lowers the model and pairs it with the built-in pareto spec over the
    /// two cost variables. Returns `(instance, spec, cost1, cost2)`.
    pub fn build(&self) -> (Instance, DominanceSpec, VarId, VarId) {
        let lowered = dsl::lower(&self.model_ast()).expect("generated model lowers");
        let c1 = lowered.instance.var_by_name("cost1").unwrap().id;
        let c2 = lowered.instance.var_by_name("cost2").unwrap().id;
        let spec = DominanceSpec::pareto(
            vec![Expr::var(c1), Expr::var(c2)],
            NogoodMode::EquivalenceFree,
        )
        .unwrap();
        (lowered.instance, spec, c1, c2)
    }

    pub fn tour_costs(&self, tour: &[usize]) -> (i64, i64) {
        let mut a = 0;
        let mut b = 0;
        for w in 0..tour.len() {
            let from = tour[w];
            let to = tour[(w + 1) % tour.len()];
            a += self.cost1[from][to];
            b += self.cost2[from][to];
        }
        (a, b)
    }

    /// The Pareto frontier computed by enumerating every tour directly on
    /// the cost matrices; independent of the CSP engine.
    pub fn frontier_by_tour_enumeration(&self) -> BTreeSet<(i64, i64)> {
        let mut costs: Vec<(i64, i64)> = Vec::new();
        let mut rest: Vec<usize> = (1..self.n).collect();
        permute(&mut rest, 0, &mut |perm| {
            let mut tour = Vec::with_capacity(self.n);
            tour.push(0);
            tour.extend_from_slice(perm);
            costs.push(self.tour_costs(&tour));
        });
        costs
            .iter()
            .filter(|&&(a, b)| {
                !costs
                    .iter()
                    .any(|&(c, d)| (c <= a && d <= b) && (c < a || d < b))
            })
            .copied()
            .collect()
    }
}

fn permute(values: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == values.len() {
        visit(values);
        return;
    }
    for i in at..values.len() {
        values.swap(at, i);
        permute(values, at + 1, visit);
        values.swap(at, i);
    }
}

/// A random transaction database over single-letter item names.
pub fn random_db(
    n_items: usize,
    n_transactions: usize,
    threshold: u64,
    seed: u64,
) -> TransactionDb {
    assert!(n_items <= 26);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0xdb).wrapping_add(29));
    let items: Vec<String> = (0..n_items)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    let transactions = (0..n_transactions)
        .map(|_| {
            (0..n_items)
                .filter(|_| rng.gen_bool(0.5))
                .collect::<BTreeSet<usize>>()
        })
        .collect();
    TransactionDb::new(items, transactions, threshold).expect("valid db")
}

/// The itemset model as a surface-syntax file: item and coverage booleans,
/// channeling, the frequency bound, and the family's nogood when it is
/// expressible as a template (maximal and closed; frequent has none).
pub fn itemset_model_ast(db: &TransactionDb, kind: crate::encodings::ItemsetKind) -> ModelAst {
    use crate::encodings::ItemsetKind;
    let n = db.items.len() as i64;
    let t = db.transactions.len() as i64;
    let pos = Default::default();
    let mut items = vec![
        Item::Array {
            name: "I".into(),
            index_low: AstExpr::int(1),
            index_high: AstExpr::int(n),
            dom: DomAst::Bool,
            pos,
        },
        Item::Array {
            name: "T".into(),
            index_low: AstExpr::int(1),
            index_high: AstExpr::int(t),
            dom: DomAst::Bool,
            pos,
        },
    ];
    let i_at = |i: i64| AstExpr::index("I", AstExpr::int(i));
    let t_at = |k: i64| AstExpr::index("T", AstExpr::int(k));
    for (k, tx) in db.transactions.iter().enumerate() {
        let outside: Vec<AstExpr> = (0..db.items.len())
            .filter(|i| !tx.contains(i))
            .map(|i| AstExpr::bin(BinOp::Eq, i_at(i as i64 + 1), AstExpr::int(0)))
            .collect();
        let covered = match outside.len() {
            0 => AstExpr::new(ExprKind::Bool(true)),
            _ => AstExpr::chain(BinOp::And, outside),
        };
        items.push(Item::Constraint(AstExpr::bin(
            BinOp::Implies,
            t_at(k as i64 + 1),
            covered.clone(),
        )));
        items.push(Item::Constraint(AstExpr::bin(
            BinOp::Implies,
            covered,
            t_at(k as i64 + 1),
        )));
    }
    let count = AstExpr::new(ExprKind::Comp {
        kind: CompKind::Sum,
        binder: "k".into(),
        range: RangeAst::IndexSet("T".into(), pos),
        body: Box::new(AstExpr::index("T", AstExpr::ident("k"))),
    });
    items.push(Item::Constraint(AstExpr::bin(
        BinOp::Ge,
        count,
        AstExpr::int(db.threshold as i64),
    )));
    match kind {
        ItemsetKind::Frequent => {}
        ItemsetKind::Maximal => {
            // some previously deselected item must join the pattern
            items.push(Item::DominanceNogood {
                expr: AstExpr::new(ExprKind::Comp {
                    kind: CompKind::Exists,
                    binder: "i".into(),
                    range: RangeAst::IndexSet("I".into(), pos),
                    body: Box::new(AstExpr::bin(
                        BinOp::Lt,
                        AstExpr::sol(AstExpr::index("I", AstExpr::ident("i"))),
                        AstExpr::index("I", AstExpr::ident("i")),
                    )),
                }),
                with_equivalence: false,
                pos,
            });
        }
        ItemsetKind::Closed => {
            let grows = AstExpr::new(ExprKind::Comp {
                kind: CompKind::Exists,
                binder: "i".into(),
                range: RangeAst::IndexSet("I".into(), pos),
                body: Box::new(AstExpr::bin(
                    BinOp::Gt,
                    AstExpr::index("I", AstExpr::ident("i")),
                    AstExpr::sol(AstExpr::index("I", AstExpr::ident("i"))),
                )),
            });
            let freq = AstExpr::new(ExprKind::Comp {
                kind: CompKind::Sum,
                binder: "k".into(),
                range: RangeAst::IndexSet("T".into(), pos),
                body: Box::new(AstExpr::index("T", AstExpr::ident("k"))),
            });
            let sol_freq = AstExpr::new(ExprKind::Comp {
                kind: CompKind::Sum,
                binder: "k".into(),
                range: RangeAst::IndexSet("T".into(), pos),
                body: Box::new(AstExpr::sol(AstExpr::index("T", AstExpr::ident("k")))),
            });
            items.push(Item::DominanceNogood {
                expr: AstExpr::bin(BinOp::Or, grows, AstExpr::bin(BinOp::Ne, freq, sol_freq)),
                with_equivalence: false,
                pos,
            });
        }
    }
    items.push(Item::Solve {
        kind: SolveKind::DominanceSearch,
        pos,
    });
    ModelAst { items }
}

/// The photo-problem position model as surface syntax (one position
/// variable per person, pairwise distinct); the preference net travels
/// separately in the CP-net text format.
pub fn photo_model_ast(net: &CpNet) -> ModelAst {
    let n = net.vars.len();
    let pos = Default::default();
    let mut items = Vec::new();
    for v in &net.vars {
        items.push(Item::Var {
            name: v.name.clone(),
            dom: DomAst::Range(AstExpr::int(0), AstExpr::int(v.domain_size as i64 - 1)),
            pos,
        });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            items.push(Item::Constraint(AstExpr::bin(
                BinOp::Ne,
                AstExpr::ident(&net.vars[i].name),
                AstExpr::ident(&net.vars[j].name),
            )));
        }
    }
    items.push(Item::Solve {
        kind: SolveKind::DominanceSearch,
        pos,
    });
    ModelAst { items }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver;
    use crate::engine::SearchConfig;
    use crate::ir::check;

    #[test]
    fn random_instance_deterministic_and_valid() {
        for seed in 0..20 {
            let a = random_instance(6, 4, 4, seed);
            let b = random_instance(6, 4, 4, seed);
            assert_eq!(a, b);
            a.validate().unwrap();
        }
    }

    #[test]
    fn random_specs_construct_for_all_families() {
        let inst = random_instance(5, 3, 3, 7);
        for family in SpecFamily::ALL {
            let spec = random_spec(family, &inst, NogoodMode::EquivalenceFree, 7);
            drop(spec);
        }
    }

    #[test]
    fn maxcsp_reified_model_round_trips() {
        let gen = random_maxcsp(4, 5, 3);
        let text = dsl::print_model(&gen.reified_model());
        let lowered = dsl::lower(&dsl::parse(&text).unwrap()).unwrap();
        // base vars + soft booleans
        assert_eq!(lowered.instance.vars.len(), 4 + 5);
        assert!(lowered.nogood_template.unwrap().has_sol());
    }

    #[test]
    fn tsp_model_produces_valid_tours() {
        let tsp = biobj_tsp(4, 1);
        let (inst, _, c1, c2) = tsp.build();
        let sols = crate::engine::enumerate_all(&inst, 100_000).unwrap();
        // (n-1)! distinct tours of 4 cities
        assert_eq!(sols.len(), 6);
        for s in &sols {
            assert!(check(&inst, s).unwrap());
            // costs match a direct tour walk
            let mut tour = vec![0usize];
            for _ in 1..tsp.n {
                let cur = *tour.last().unwrap();
                let nxt = s
                    .value(inst.var_by_name(&format!("next[{}]", cur + 1)).unwrap().id)
                    .unwrap() as usize
                    - 1;
                tour.push(nxt);
            }
            let (a, b) = tsp.tour_costs(&tour);
            assert_eq!(s.value(c1).unwrap(), a);
            assert_eq!(s.value(c2).unwrap(), b);
        }
    }

    #[test]
    fn tsp_frontier_matches_cdp_solve() {
        let tsp = biobj_tsp(4, 2);
        let (inst, spec, c1, c2) = tsp.build();
        let run = driver::solve(
            &inst,
            &spec,
            NogoodMode::EquivalenceFree,
            &SearchConfig::default(),
        )
        .unwrap();
        let got: BTreeSet<(i64, i64)> = run
            .final_set
            .unwrap()
            .iter()
            .map(|s| (s.value(c1).unwrap(), s.value(c2).unwrap()))
            .collect();
        assert_eq!(got, tsp.frontier_by_tour_enumeration());
    }

    #[test]
    fn generators_are_seed_deterministic() {
        assert_eq!(biobj_tsp(5, 9).cost1, biobj_tsp(5, 9).cost1);
        assert_eq!(random_db(4, 6, 2, 1), random_db(4, 6, 2, 1));
        let a = random_maxcsp(5, 6, 42);
        let b = random_maxcsp(5, 6, 42);
        assert_eq!(
            dsl::print_model(&a.reified_model()),
            dsl::print_model(&b.reified_model())
        );
    }

    #[test]
    fn itemset_model_ast_matches_programmatic() {
        use crate::encodings::{itemset_model, ItemsetKind};
        let db = TransactionDb::parse("a b\na b c\nb\n", 2).unwrap();
        let ast = itemset_model_ast(&db, ItemsetKind::Frequent);
        let lowered = dsl::lower(&ast).unwrap();
        let programmatic = itemset_model(&db, ItemsetKind::Frequent).unwrap();
        let a = crate::engine::enumerate_all(&lowered.instance, 10_000)
            .unwrap()
            .len();
        let b = crate::engine::enumerate_all(&programmatic.instance, 10_000)
            .unwrap()
            .len();
        assert_eq!(a, b);
    }
}
