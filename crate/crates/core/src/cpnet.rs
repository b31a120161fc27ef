//! Conditional preference networks: the data model, local dominance, its
//! compilation to dominance nogoods, a brute-force traditional-dominance
//! oracle for tiny nets, and seeded generators (including the photo-style
//! family where preferences follow distance to the parents).
//!
//! A CP-net is an acyclic graph of variables; each variable carries one CPT
//! row per complete parent assignment, and each row is a strict total order
//! (a permutation) over the variable's domain, most preferred first.
//!
//! Local dominance: `o` locally dominates `o'` iff for every variable whose
//! parents agree between `o` and `o'` but whose own value differs, the
//! active CPT row prefers `o`'s value. The relation is cheap to evaluate
//! (linear in the number of CPTs) and is a necessary condition for the
//! expensive flip-sequence dominance.

use std::collections::{HashMap, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ir::{CmpOp, Domain, Expr, Instance, Valuation, VarId};

/// One CP-net variable: a name, a domain size (values are `0..size`), an
/// ordered parent list, and one preference row per parent assignment in
/// lexicographic parent-assignment order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpVar {
    pub name: String,
    pub domain_size: usize,
    pub parents: Vec<usize>,
    /// `rows[rank]` is a permutation of `0..domain_size`, most preferred
    /// first, where `rank` ranks the parent assignment lexicographically.
    pub rows: Vec<Vec<i64>>,
}

/// An acyclic network of conditional preference tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpNet {
    pub vars: Vec<CpVar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CpNetError {
    #[error("parent graph has a cycle")]
    Cycle,
    #[error("variable `{var}`: expected {expected} CPT rows, found {found}")]
    RowCount {
        var: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{var}`: CPT row is not a permutation of its domain")]
    NotPermutation { var: String },
    #[error("variable `{var}`: parent index out of range")]
    BadParent { var: String },
    #[error("variable `{var}`: empty domain")]
    EmptyDomain { var: String },
    #[error("valuation does not assign every net variable")]
    Incomplete,
    #[error("outcome space larger than the configured limit of {limit}")]
    OutcomeSpace { limit: u64 },
    #[error("net variable `{name}` missing from the instance or domain mismatch")]
    Unmapped { name: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl CpNet {
    pub fn outcome_count(&self) -> u64 {
        self.vars
            .iter()
            .fold(1u64, |acc, v| acc.saturating_mul(v.domain_size as u64))
    }

    /// Rank of a parent assignment for `var` under the current valuation,
    /// treating parent values as mixed-radix digits.
    fn row_rank(&self, var: usize, values: &[i64]) -> usize {
        let mut rank = 0usize;
        for &p in &self.vars[var].parents {
            rank = rank * self.vars[p].domain_size + values[p] as usize;
        }
        rank
    }

    fn row_for(&self, var: usize, values: &[i64]) -> &[i64] {
        &self.vars[var].rows[self.row_rank(var, values)]
    }

    /// Position of `value` in the row: smaller is more preferred.
    fn pref_position(row: &[i64], value: i64) -> usize {
        row.iter().position(|&v| v == value).expect("value in row")
    }

    /// Builds an unconstrained instance whose variables mirror the net.
    pub fn to_instance(&self) -> Instance {
        Instance::from_domains(
            self.vars
                .iter()
                .map(|v| {
                    (
                        v.name.as_str(),
                        Domain::IntRange {
                            low: 0,
                            high: v.domain_size as i64 - 1,
                        },
                    )
                })
                .collect(),
            vec![],
        )
    }

    /// Resolves each net variable to a variable of `instance` by name,
    /// requiring the domain to be exactly `0..size`.
    pub fn map_to(&self, instance: &Instance) -> Result<Vec<VarId>, CpNetError> {
        self.vars
            .iter()
            .map(|v| {
                let decl = instance
                    .var_by_name(&v.name)
                    .ok_or_else(|| CpNetError::Unmapped {
                        name: v.name.clone(),
                    })?;
                let want: Vec<i64> = (0..v.domain_size as i64).collect();
                if decl.domain.values() != want {
                    return Err(CpNetError::Unmapped {
                        name: v.name.clone(),
                    });
                }
                Ok(decl.id)
            })
            .collect()
    }
}

/// Checks all structural invariants: acyclicity, one permutation row per
/// complete parent assignment, and at least one root.
pub fn validate(net: &CpNet) -> Result<(), CpNetError> {
    let n = net.vars.len();
    for v in &net.vars {
        if v.domain_size == 0 {
            return Err(CpNetError::EmptyDomain {
                var: v.name.clone(),
            });
        }
        if v.parents.iter().any(|&p| p >= n) {
            return Err(CpNetError::BadParent {
                var: v.name.clone(),
            });
        }
        let expected: usize = v.parents.iter().map(|&p| net.vars[p].domain_size).product();
        if v.rows.len() != expected {
            return Err(CpNetError::RowCount {
                var: v.name.clone(),
                expected,
                found: v.rows.len(),
            });
        }
        for row in &v.rows {
            let mut seen = vec![false; v.domain_size];
            if row.len() != v.domain_size {
                return Err(CpNetError::NotPermutation {
                    var: v.name.clone(),
                });
            }
            for &x in row {
                if x < 0 || x as usize >= v.domain_size || seen[x as usize] {
                    return Err(CpNetError::NotPermutation {
                        var: v.name.clone(),
                    });
                }
                seen[x as usize] = true;
            }
        }
    }
    // Kahn's algorithm over parent edges
    let mut indeg: Vec<usize> = net.vars.iter().map(|v| v.parents.len()).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    if n > 0 && queue.is_empty() {
        return Err(CpNetError::Cycle);
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, v) in net.vars.iter().enumerate() {
        for &p in &v.parents {
            children[p].push(i);
        }
    }
    let mut seen = 0;
    while let Some(i) = queue.pop_front() {
        seen += 1;
        for &c in &children[i] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                queue.push_back(c);
            }
        }
    }
    if seen != n {
        return Err(CpNetError::Cycle);
    }
    Ok(())
}

fn values_of(net: &CpNet, map: &[VarId], o: &Valuation) -> Result<Vec<i64>, CpNetError> {
    net.vars
        .iter()
        .zip(map.iter())
        .map(|(_, id)| o.value(*id).ok_or(CpNetError::Incomplete))
        .collect()
}

/// Local dominance, evaluated verbatim: for every variable whose parents
/// agree and whose value differs, the active row must prefer `o`. The
/// quantifier is vacuously true when `o == o_prime`; callers wanting the
/// strict relation combine it with inequality.
pub fn local_dominates(
    net: &CpNet,
    map: &[VarId],
    o: &Valuation,
    o_prime: &Valuation,
) -> Result<bool, CpNetError> {
    let a = values_of(net, map, o)?;
    let b = values_of(net, map, o_prime)?;
    for (i, _) in net.vars.iter().enumerate() {
        let parents_equal = net.vars[i].parents.iter().all(|&p| a[p] == b[p]);
        if parents_equal && a[i] != b[i] {
            let row = net.row_for(i, &a);
            if CpNet::pref_position(row, a[i]) > CpNet::pref_position(row, b[i]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Counts, over an exhaustive scan of distinct outcome pairs, those with no
/// active CPT at all (both dominance directions then hold vacuously).
/// Surfaced as a diagnostic; acyclicity makes such pairs impossible, since
/// the topologically first differing variable always has equal parents.
pub fn vacuous_pair_count(net: &CpNet, limit: u64) -> Result<u64, CpNetError> {
    if net.outcome_count() > limit {
        return Err(CpNetError::OutcomeSpace { limit });
    }
    let outcomes = all_outcomes(net);
    let mut count = 0;
    for a in &outcomes {
        for b in &outcomes {
            if a == b {
                continue;
            }
            let any_active = net
                .vars
                .iter()
                .enumerate()
                .any(|(i, v)| v.parents.iter().all(|&p| a[p] == b[p]) && a[i] != b[i]);
            if !any_active {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Compiles the dominance nogood for solution `S`: some variable with
/// parents pinned to `S`'s parent values must take a value the active row
/// strictly prefers to `S`'s. Because `S` is fixed, at most one CPT entry
/// per variable survives, and entries whose preferred set is empty drop out.
pub fn compile_local_nogood(net: &CpNet, map: &[VarId], s: &Valuation) -> Result<Expr, CpNetError> {
    let sv = values_of(net, map, s)?;
    let mut disjuncts = Vec::new();
    for (i, var) in net.vars.iter().enumerate() {
        let row = net.row_for(i, &sv);
        let s_pos = CpNet::pref_position(row, sv[i]);
        let better: Vec<i64> = row[..s_pos].to_vec();
        if better.is_empty() {
            continue;
        }
        let mut conj = Vec::new();
        for &p in &var.parents {
            conj.push(Expr::cmp(CmpOp::Eq, Expr::var(map[p]), Expr::Int(sv[p])));
        }
        conj.push(Expr::cmp(CmpOp::Ne, Expr::var(map[i]), Expr::Int(sv[i])));
        conj.push(Expr::any(
            better
                .iter()
                .map(|&b| Expr::cmp(CmpOp::Eq, Expr::var(map[i]), Expr::Int(b)))
                .collect(),
        ));
        disjuncts.push(Expr::all(conj));
    }
    Ok(Expr::any(disjuncts))
}

fn all_outcomes(net: &CpNet) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for v in &net.vars {
        let mut next = Vec::with_capacity(out.len() * v.domain_size);
        for prefix in &out {
            for val in 0..v.domain_size as i64 {
                let mut o = prefix.clone();
                o.push(val);
                next.push(o);
            }
        }
        out = next;
    }
    out
}

fn outcome_rank(net: &CpNet, values: &[i64]) -> usize {
    let mut rank = 0usize;
    for (i, v) in net.vars.iter().enumerate() {
        rank = rank * v.domain_size + values[i] as usize;
    }
    rank
}

/// Traditional (preference-ranking) dominance via its operational
/// equivalent: `o` dominates `o_prime` iff a sequence of single-variable
/// improving flips leads from `o_prime` to `o`. Strict: an empty sequence
/// does not count. Brute force, bounded by `limit` outcomes.
pub fn trad_dominates(
    net: &CpNet,
    map: &[VarId],
    o: &Valuation,
    o_prime: &Valuation,
    limit: u64,
) -> Result<bool, CpNetError> {
    if net.outcome_count() > limit {
        return Err(CpNetError::OutcomeSpace { limit });
    }
    let target = values_of(net, map, o)?;
    let start = values_of(net, map, o_prime)?;
    if target == start {
        return Ok(false);
    }
    let total = net.outcome_count() as usize;
    let mut visited = vec![false; total];
    let mut queue = VecDeque::new();
    visited[outcome_rank(net, &start)] = true;
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        for i in 0..net.vars.len() {
            let row = net.row_for(i, &cur);
            let cur_pos = CpNet::pref_position(row, cur[i]);
            for &better in &row[..cur_pos] {
                let mut next = cur.clone();
                next[i] = better;
                if next == target {
                    return Ok(true);
                }
                let r = outcome_rank(net, &next);
                if !visited[r] {
                    visited[r] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(false)
}

/// The default outcome-space cap for [`trad_dominates`].
pub const TRAD_OUTCOME_LIMIT: u64 = 4096;

/// A seeded random binary CP-net: parents drawn among earlier variables of a
/// shuffled order (at most `max_parents` each), rows random permutations.
/// Deterministic in the seed.
pub fn random_net(n_vars: usize, max_parents: usize, seed: u64) -> CpNet {
    assert!(n_vars >= 1, "need at least one variable");
    assert!(max_parents < n_vars, "max_parents must be below n_vars");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let mut order: Vec<usize> = (0..n_vars).collect();
    for i in (1..n_vars).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let mut position = vec![0usize; n_vars];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }
    let mut vars = Vec::with_capacity(n_vars);
    for i in 0..n_vars {
        let earlier: Vec<usize> = (0..n_vars).filter(|&j| position[j] < position[i]).collect();
        let k = rng.gen_range(0..=max_parents.min(earlier.len()));
        let mut parents = Vec::new();
        let mut pool = earlier;
        for _ in 0..k {
            let idx = rng.gen_range(0..pool.len());
            parents.push(pool.swap_remove(idx));
        }
        parents.sort_unstable();
        let row_count = 1usize << parents.len();
        let mut rows = Vec::with_capacity(row_count);
        for _ in 0..row_count {
            let mut row = vec![0i64, 1];
            if rng.gen_bool(0.5) {
                row.swap(0, 1);
            }
            rows.push(row);
        }
        vars.push(CpVar {
            name: format!("v{i}"),
            domain_size: 2,
            parents,
            rows,
        });
    }
    CpNet { vars }
}

/// Photo-style net: `n` people, positions `0..n`, each person preferring
/// positions by smaller average distance to their parents' positions (ties
/// to the smaller position; roots prefer positions in ascending order).
pub fn photo_net(n_people: usize, max_parents: usize, seed: u64) -> CpNet {
    assert!(n_people >= 1);
    assert!(max_parents < n_people);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51ed2701);
    let n = n_people;
    let mut vars = Vec::with_capacity(n);
    for i in 0..n {
        // parents drawn among earlier people keeps the graph acyclic
        let earlier: Vec<usize> = (0..i).collect();
        let k = rng.gen_range(0..=max_parents.min(earlier.len()));
        let mut parents = Vec::new();
        let mut pool = earlier;
        for _ in 0..k {
            let idx = rng.gen_range(0..pool.len());
            parents.push(pool.swap_remove(idx));
        }
        parents.sort_unstable();
        let row_count = (0..parents.len()).fold(1usize, |acc, _| acc * n);
        let mut rows = Vec::with_capacity(row_count);
        for rank in 0..row_count {
            // decode the parent assignment from its lexicographic rank
            let mut assignment = vec![0i64; parents.len()];
            let mut r = rank;
            for j in (0..parents.len()).rev() {
                assignment[j] = (r % n) as i64;
                r /= n;
            }
            let mut row: Vec<i64> = (0..n as i64).collect();
            if !assignment.is_empty() {
                let sum: i64 = assignment.iter().sum();
                // compare n*|pos - avg| without leaving integers
                let key = |pos: i64| ((pos * parents.len() as i64) - sum).abs();
                row.sort_by_key(|&pos| (key(pos), pos));
            }
            rows.push(row);
        }
        vars.push(CpVar {
            name: format!("pos{i}"),
            domain_size: n,
            parents,
            rows,
        });
    }
    CpNet { vars }
}

/// The position model accompanying [`photo_net`]: one position variable per
/// person and pairwise difference constraints.
pub fn photo_instance(net: &CpNet) -> Instance {
    let mut inst = net.to_instance();
    let n = inst.vars.len();
    for i in 0..n {
        for j in (i + 1)..n {
            inst.constraints.push(Expr::cmp(
                CmpOp::Ne,
                Expr::var(VarId(i)),
                Expr::var(VarId(j)),
            ));
        }
    }
    inst
}

/// Serializes a net in the canonical text format:
///
/// ```text
/// cpnet <n>
/// var <name> <domain_size>
/// parents [name ...]
/// row <v0> <v1> ...
/// ```
///
/// Rows appear in lexicographic parent-assignment order, each row a
/// permutation of the domain values, most preferred first.
pub fn write_text(net: &CpNet) -> String {
    let mut out = String::new();
    out.push_str(&format!("cpnet {}\n", net.vars.len()));
    for v in &net.vars {
        out.push_str(&format!("var {} {}\n", v.name, v.domain_size));
        out.push_str("parents");
        for &p in &v.parents {
            out.push(' ');
            out.push_str(&net.vars[p].name);
        }
        out.push('\n');
        for row in &v.rows {
            out.push_str("row");
            for &x in row {
                out.push_str(&format!(" {x}"));
            }
            out.push('\n');
        }
    }
    out
}

/// Parses the text format of [`write_text`] and validates the result.
pub fn parse_text(text: &str) -> Result<CpNet, CpNetError> {
    let err = |line: usize, message: &str| CpNetError::Parse {
        line,
        message: message.to_string(),
    };
    let mut lines = text.lines().enumerate().peekable();
    let (ln, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("cpnet") {
        return Err(err(ln + 1, "expected `cpnet <n>` header"));
    }
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err(ln + 1, "expected variable count"))?;
    if parts.next().is_some() {
        return Err(err(ln + 1, "trailing tokens after header"));
    }

    struct RawVar {
        name: String,
        domain_size: usize,
        parent_names: Vec<String>,
        rows: Vec<Vec<i64>>,
    }
    let mut raws: Vec<RawVar> = Vec::with_capacity(n);
    while let Some((ln, line)) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        if parts.next() != Some("var") {
            return Err(err(ln + 1, "expected `var <name> <domain_size>`"));
        }
        let name = parts
            .next()
            .ok_or_else(|| err(ln + 1, "missing variable name"))?
            .to_string();
        let domain_size: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(ln + 1, "missing domain size"))?;
        let (pln, pline) = lines
            .next()
            .ok_or_else(|| err(ln + 2, "expected `parents` line"))?;
        let mut pparts = pline.split_whitespace();
        if pparts.next() != Some("parents") {
            return Err(err(pln + 1, "expected `parents` line"));
        }
        let parent_names: Vec<String> = pparts.map(str::to_string).collect();
        let mut rows = Vec::new();
        while matches!(lines.peek(), Some((_, l)) if l.split_whitespace().next() == Some("row")) {
            let (rln, rline) = lines.next().unwrap();
            let row: Result<Vec<i64>, _> = rline
                .split_whitespace()
                .skip(1)
                .map(|s| s.parse::<i64>())
                .collect();
            rows.push(row.map_err(|_| err(rln + 1, "row values must be integers"))?);
        }
        raws.push(RawVar {
            name,
            domain_size,
            parent_names,
            rows,
        });
    }
    if raws.len() != n {
        return Err(err(
            text.lines().count(),
            &format!("expected {n} variables, found {}", raws.len()),
        ));
    }
    let index: HashMap<String, usize> = raws
        .iter()
        .enumerate()
        .map(|(i, r)| (r.name.clone(), i))
        .collect();
    let vars = raws
        .iter()
        .map(|r| {
            let parents = r
                .parent_names
                .iter()
                .map(|p| {
                    index
                        .get(p)
                        .copied()
                        .ok_or_else(|| err(1, &format!("unknown parent `{p}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CpVar {
                name: r.name.clone(),
                domain_size: r.domain_size,
                parents,
                rows: r.rows.clone(),
            })
        })
        .collect::<Result<Vec<_>, CpNetError>>()?;
    let net = CpNet { vars };
    validate(&net)?;
    Ok(net)
}

/// The three-variable example net used throughout the tests: a chain
/// `V1 -> V2 -> V3` with domains {0,1}, {0,1,2}, {0,1,2}.
pub fn chain_example() -> CpNet {
    CpNet {
        vars: vec![
            CpVar {
                name: "V1".into(),
                domain_size: 2,
                parents: vec![],
                rows: vec![vec![1, 0]],
            },
            CpVar {
                name: "V2".into(),
                domain_size: 3,
                parents: vec![0],
                rows: vec![vec![1, 0, 2], vec![2, 1, 0]],
            },
            CpVar {
                name: "V3".into(),
                domain_size: 3,
                parents: vec![1],
                rows: vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 2, 0]],
            },
        ],
    }
}
