//! Backtracking search over the free variables with interval propagation.
//!
//! Systems produced from SSA programs are functional: once the inputs are
//! fixed, every other variable follows by forward evaluation. The solver
//! therefore branches only on free variables (inputs, tied pairs merged) and
//! evaluates all definitions over intervals at every node. An interval
//! evaluation yields `None` only when every completion of the current partial
//! assignment makes the constraint fail, which is what makes pruning sound.
//! With every free variable fixed, the intervals collapse to points and the
//! propagation is exact evaluation.
//!
//! Depth-first order alone can get stuck: when the first input values make
//! the two sides agree whatever the remaining inputs are, the whole subtree
//! below them is enumerated in vain. Every so many fruitless nodes the search
//! therefore spends a short burst on seeded random complete assignments,
//! accepting one only if it satisfies the system with every loop flag false.
//! The depth-first search still covers everything, so completeness is kept.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_assignment, Constraint, ConstraintSystem, Solution, SolveOutcome, VarDomain};
use crate::lang::{BinOp, Expr, UnOp, Value, VariableEnvironment};
use crate::ssa::default_value;

#[derive(Debug, Clone)]
enum CExpr {
    Int(i64),
    Bool(bool),
    Var(usize),
    Bin(BinOp, Box<CExpr>, Box<CExpr>),
    Neg(Box<CExpr>),
    Not(Box<CExpr>),
}

#[derive(Debug, Clone)]
enum DefKind {
    Eq { expr: CExpr, active: Option<CExpr>, default: Value },
    Phi { guard: CExpr, then_var: usize, else_var: usize },
}

#[derive(Debug, Clone)]
struct Def {
    var: usize,
    kind: DefKind,
}

#[derive(Debug, Clone)]
enum Check {
    /// A definition that could not be used functionally.
    Holds(Def),
    Require(CExpr),
    Equal(usize, usize),
    Flag(usize, bool),
    Differs(Vec<(usize, usize)>),
}

#[derive(Debug, Clone)]
struct BlockGroup {
    vars: Vec<usize>,
    tuples: HashSet<Vec<Value>>,
}

/// Possible values of a variable over all non-failing completions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Abs {
    Int(i128, i128),
    /// `(may be false, may be true)`
    Bool(bool, bool),
}

impl Abs {
    fn point(v: Value) -> Abs {
        match v {
            Value::Int(x) => Abs::Int(x as i128, x as i128),
            Value::Bool(b) => Abs::Bool(!b, b),
        }
    }

    fn of_domain(d: &VarDomain) -> Abs {
        match d {
            VarDomain::Int { min, max } => Abs::Int(*min as i128, *max as i128),
            VarDomain::Bool => Abs::Bool(true, true),
        }
    }

    fn as_point(self) -> Option<Value> {
        match self {
            Abs::Int(lo, hi) if lo == hi => Some(Value::Int(lo as i64)),
            Abs::Bool(f, t) if f != t => Some(Value::Bool(t)),
            _ => None,
        }
    }

    fn join(self, other: Abs) -> Abs {
        match (self, other) {
            (Abs::Int(a, b), Abs::Int(c, d)) => Abs::Int(a.min(c), b.max(d)),
            (Abs::Bool(a, b), Abs::Bool(c, d)) => Abs::Bool(a || c, b || d),
            _ => self,
        }
    }

    fn meet(self, other: Abs) -> Option<Abs> {
        match (self, other) {
            (Abs::Int(a, b), Abs::Int(c, d)) => {
                let (lo, hi) = (a.max(c), b.min(d));
                (lo <= hi).then_some(Abs::Int(lo, hi))
            }
            (Abs::Bool(a, b), Abs::Bool(c, d)) => {
                let (f, t) = (a && c, b && d);
                (f || t).then_some(Abs::Bool(f, t))
            }
            _ => None,
        }
    }

    fn may(self, value: bool) -> bool {
        match self {
            Abs::Bool(f, t) => {
                if value {
                    t
                } else {
                    f
                }
            }
            Abs::Int(..) => false,
        }
    }
}

#[derive(Debug, Clone)]
struct Compiled {
    names: Vec<String>,
    /// Representative of every variable (tied inputs share one).
    rep: Vec<usize>,
    /// Domain of each representative.
    doms: Vec<VarDomain>,
    /// Search order.
    free: Vec<usize>,
    defs: Vec<Def>,
    checks: Vec<Check>,
    blocks: Vec<BlockGroup>,
    amin: i128,
    amax: i128,
}

struct Compiler<'a> {
    index: HashMap<&'a str, usize>,
    rep: Vec<usize>,
}

impl Compiler<'_> {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.rep[r] != r {
            r = self.rep[r];
        }
        self.rep[i] = r;
        r
    }

    fn var(&mut self, name: &str) -> usize {
        let i = self.index[name];
        self.find(i)
    }

    fn expr(&mut self, e: &Expr) -> CExpr {
        match e {
            Expr::Int(v) => CExpr::Int(*v),
            Expr::Bool(b) => CExpr::Bool(*b),
            Expr::Var(n) => CExpr::Var(self.var(n)),
            Expr::Binary(op, l, r) => CExpr::Bin(*op, Box::new(self.expr(l)), Box::new(self.expr(r))),
            Expr::Unary(UnOp::Neg, x) => CExpr::Neg(Box::new(self.expr(x))),
            Expr::Unary(UnOp::Not, x) => CExpr::Not(Box::new(self.expr(x))),
        }
    }
}

fn reads(kind: &DefKind, out: &mut Vec<usize>) {
    fn walk(e: &CExpr, out: &mut Vec<usize>) {
        match e {
            CExpr::Var(i) => out.push(*i),
            CExpr::Bin(_, l, r) => {
                walk(l, out);
                walk(r, out);
            }
            CExpr::Neg(x) | CExpr::Not(x) => walk(x, out),
            CExpr::Int(_) | CExpr::Bool(_) => {}
        }
    }
    match kind {
        DefKind::Eq { expr, active, .. } => {
            walk(expr, out);
            if let Some(a) = active {
                walk(a, out);
            }
        }
        DefKind::Phi { guard, then_var, else_var } => {
            walk(guard, out);
            out.push(*then_var);
            out.push(*else_var);
        }
    }
}

fn compile(cs: &ConstraintSystem) -> Compiled {
    let names: Vec<String> = cs.vars.keys().cloned().collect();
    let mut doms: Vec<VarDomain> = cs.vars.values().copied().collect();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let n = names.len();
    let mut c = Compiler { index, rep: (0..n).collect() };
    let defined = super::defined_vars(cs);

    // Merge tied free variables; domains intersect.
    let mut empty_domain = false;
    for con in &cs.constraints {
        if let Constraint::InputTie { var, var_m } = con {
            if defined.contains(var.as_str()) || defined.contains(var_m.as_str()) {
                continue;
            }
            let (a, b) = (c.var(var), c.var(var_m));
            if a != b {
                c.rep[b] = a;
                match Abs::of_domain(&doms[a]).meet(Abs::of_domain(&doms[b])) {
                    Some(Abs::Int(lo, hi)) => doms[a] = VarDomain::Int { min: lo as i64, max: hi as i64 },
                    Some(Abs::Bool(..)) => {}
                    None => empty_domain = true,
                }
            }
        }
    }

    let mut checks = Vec::new();
    let mut candidates: Vec<Def> = Vec::new();
    let mut seen_def: HashSet<usize> = HashSet::new();
    for con in &cs.constraints {
        match con {
            Constraint::Eq { var, expr, active } => {
                let default = default_value(cs.vars[var].ty(), &cs.arith);
                let kind = DefKind::Eq { expr: c.expr(expr), active: active.as_ref().map(|a| c.expr(a)), default };
                let def = Def { var: c.var(var), kind };
                if seen_def.insert(def.var) {
                    candidates.push(def);
                } else {
                    checks.push(Check::Holds(def));
                }
            }
            Constraint::PhiEq { var, guard, then_var, else_var } => {
                let kind = DefKind::Phi { guard: c.expr(guard), then_var: c.var(then_var), else_var: c.var(else_var) };
                let def = Def { var: c.var(var), kind };
                if seen_def.insert(def.var) {
                    candidates.push(def);
                } else {
                    checks.push(Check::Holds(def));
                }
            }
            Constraint::InputTie { var, var_m } => {
                let (a, b) = (c.var(var), c.var(var_m));
                if a != b {
                    checks.push(Check::Equal(a, b));
                }
            }
            Constraint::OutputDiffers { pairs } => {
                checks.push(Check::Differs(pairs.iter().map(|(a, b)| (c.var(a), c.var(b))).collect()))
            }
            Constraint::FlagValue { var, value } => checks.push(Check::Flag(c.var(var), *value)),
            Constraint::Require { expr } => checks.push(Check::Require(c.expr(expr))),
            Constraint::Blocking { .. } => {}
        }
    }
    if empty_domain {
        checks.push(Check::Require(CExpr::Bool(false)));
    }

    // Topological order of the definitions; a definition caught in a cycle
    // is demoted to a check and its variable becomes free.
    let by_var: HashMap<usize, usize> = candidates.iter().enumerate().map(|(i, d)| (d.var, i)).collect();
    let mut state = vec![0u8; candidates.len()]; // 0 new, 1 in progress, 2 done
    let mut order: Vec<usize> = Vec::new();
    let mut demoted: HashSet<usize> = HashSet::new();
    fn visit(
        i: usize,
        cands: &[Def],
        by_var: &HashMap<usize, usize>,
        state: &mut [u8],
        order: &mut Vec<usize>,
        demoted: &mut HashSet<usize>,
    ) {
        state[i] = 1;
        let mut deps = Vec::new();
        reads(&cands[i].kind, &mut deps);
        for v in deps {
            if let Some(&j) = by_var.get(&v) {
                match state[j] {
                    0 => visit(j, cands, by_var, state, order, demoted),
                    1 => {
                        demoted.insert(j);
                    }
                    _ => {}
                }
            }
        }
        state[i] = 2;
        order.push(i);
    }
    for i in 0..candidates.len() {
        if state[i] == 0 {
            visit(i, &candidates, &by_var, &mut state, &mut order, &mut demoted);
        }
    }
    let mut defs = Vec::new();
    let mut def_vars = HashSet::new();
    for i in order {
        if demoted.contains(&i) {
            checks.push(Check::Holds(candidates[i].clone()));
        } else {
            def_vars.insert(candidates[i].var);
            defs.push(candidates[i].clone());
        }
    }

    let mut free = Vec::new();
    let mut in_free = HashSet::new();
    let preferred: Vec<usize> = cs.input_vars.iter().filter(|v| cs.vars.contains_key(*v)).map(|v| c.var(v)).collect();
    for r in preferred.into_iter().chain((0..n).map(|i| c.find(i))) {
        if !def_vars.contains(&r) && in_free.insert(r) {
            free.push(r);
        }
    }
    let rep: Vec<usize> = (0..n).map(|i| c.find(i)).collect();

    let mut compiled = Compiled {
        names,
        rep,
        doms,
        free,
        defs,
        checks,
        blocks: Vec::new(),
        amin: cs.arith.int_min as i128,
        amax: cs.arith.int_max as i128,
    };
    for con in &cs.constraints {
        if let Constraint::Blocking { forbidden } = con {
            compiled.add_block(forbidden);
        }
    }
    compiled
}

impl Compiled {
    fn add_block(&mut self, forbidden: &VariableEnvironment) {
        let index: HashMap<&str, usize> = self.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut entries: Vec<(usize, Value)> = Vec::new();
        for (name, v) in forbidden.iter() {
            // An unknown variable can never take the forbidden value.
            let Some(&i) = index.get(name) else { return };
            let r = self.rep[i];
            match entries.iter().find(|(x, _)| *x == r) {
                Some((_, w)) if *w != v => return,
                Some(_) => {}
                None => entries.push((r, v)),
            }
        }
        entries.sort_by_key(|(r, _)| *r);
        let vars: Vec<usize> = entries.iter().map(|(r, _)| *r).collect();
        let tuple: Vec<Value> = entries.into_iter().map(|(_, v)| v).collect();
        match self.blocks.iter_mut().find(|g| g.vars == vars) {
            Some(g) => {
                g.tuples.insert(tuple);
            }
            None => self.blocks.push(BlockGroup { vars, tuples: HashSet::from([tuple]) }),
        }
    }

    fn range(&self, lo: i128, hi: i128) -> Option<Abs> {
        let (lo, hi) = (lo.max(self.amin), hi.min(self.amax));
        (lo <= hi).then_some(Abs::Int(lo, hi))
    }

    fn eval(&self, e: &CExpr, vals: &[Abs]) -> Option<Abs> {
        match e {
            CExpr::Int(v) => self.range(*v as i128, *v as i128),
            CExpr::Bool(b) => Some(Abs::point(Value::Bool(*b))),
            CExpr::Var(i) => Some(vals[*i]),
            CExpr::Neg(x) => match self.eval(x, vals)? {
                Abs::Int(lo, hi) => self.range(-hi, -lo),
                Abs::Bool(..) => None,
            },
            CExpr::Not(x) => match self.eval(x, vals)? {
                Abs::Bool(f, t) => Some(Abs::Bool(t, f)),
                Abs::Int(..) => None,
            },
            CExpr::Bin(BinOp::And, l, r) => {
                let Abs::Bool(lf, lt) = self.eval(l, vals)? else { return None };
                if !lt {
                    return Some(Abs::Bool(true, false));
                }
                match self.eval(r, vals) {
                    Some(Abs::Bool(rf, rt)) => Some(Abs::Bool(lf || rf, rt)),
                    _ if lf => Some(Abs::Bool(true, false)),
                    _ => None,
                }
            }
            CExpr::Bin(BinOp::Or, l, r) => {
                let Abs::Bool(lf, lt) = self.eval(l, vals)? else { return None };
                if !lf {
                    return Some(Abs::Bool(false, true));
                }
                match self.eval(r, vals) {
                    Some(Abs::Bool(rf, rt)) => Some(Abs::Bool(rf, lt || rt)),
                    _ if lt => Some(Abs::Bool(false, true)),
                    _ => None,
                }
            }
            CExpr::Bin(op, l, r) => {
                let l = self.eval(l, vals)?;
                let r = self.eval(r, vals)?;
                self.binary(*op, l, r)
            }
        }
    }

    fn binary(&self, op: BinOp, l: Abs, r: Abs) -> Option<Abs> {
        let b = |f: bool, t: bool| Some(Abs::Bool(f, t));
        match (l, r) {
            (Abs::Bool(lf, lt), Abs::Bool(rf, rt)) => {
                let same = (lf && rf) || (lt && rt);
                let differ = (lf && rt) || (lt && rf);
                match op {
                    BinOp::Eq => b(differ, same),
                    BinOp::Ne => b(same, differ),
                    _ => None,
                }
            }
            (Abs::Int(a, c), Abs::Int(x, y)) => match op {
                BinOp::Add => self.range(a + x, c + y),
                BinOp::Sub => self.range(a - y, c - x),
                BinOp::Mul => {
                    let p = [a * x, a * y, c * x, c * y];
                    self.range(*p.iter().min()?, *p.iter().max()?)
                }
                BinOp::Div | BinOp::Rem => self.division(op, (a, c), (x, y)),
                BinOp::Lt => b(c >= x, a < y),
                BinOp::Le => b(c > x, a <= y),
                BinOp::Gt => b(a <= y, c > x),
                BinOp::Ge => b(a < y, c >= x),
                BinOp::Eq => b(!(a == c && x == y && a == x), a <= y && x <= c),
                BinOp::Ne => b(a <= y && x <= c, !(a == c && x == y && a == x)),
                BinOp::And | BinOp::Or => None,
            },
            _ => None,
        }
    }

    fn division(&self, op: BinOp, (a, c): (i128, i128), (x, y): (i128, i128)) -> Option<Abs> {
        let mut parts = Vec::new();
        if x <= -1 {
            parts.push((x, y.min(-1)));
        }
        if y >= 1 {
            parts.push((x.max(1), y));
        }
        if parts.is_empty() {
            return None;
        }
        if a == c && x == y {
            let v = if op == BinOp::Div { a / x } else { a % x };
            return self.range(v, v);
        }
        if op == BinOp::Div {
            let mut lo = i128::MAX;
            let mut hi = i128::MIN;
            for (p, q) in parts {
                for n in [a, c] {
                    for d in [p, q] {
                        lo = lo.min(n / d);
                        hi = hi.max(n / d);
                    }
                }
            }
            self.range(lo, hi)
        } else {
            let m = parts.iter().map(|(p, q)| p.abs().max(q.abs())).max()? - 1;
            let lo = if a >= 0 { 0 } else { a.max(-m) };
            let hi = if c <= 0 { 0 } else { c.min(m) };
            self.range(lo, hi)
        }
    }

    fn def_value(&self, def: &Def, vals: &[Abs]) -> Option<Abs> {
        let dom = Abs::of_domain(&self.doms[def.var]);
        let v = match &def.kind {
            DefKind::Eq { expr, active: None, .. } => self.eval(expr, vals)?,
            DefKind::Eq { expr, active: Some(g), default } => {
                let Abs::Bool(gf, gt) = self.eval(g, vals)? else { return None };
                let default = Abs::point(*default);
                match (gf, gt) {
                    (true, false) => default,
                    (false, true) => self.eval(expr, vals)?,
                    _ => match self.eval(expr, vals).and_then(|e| e.meet(dom)) {
                        Some(e) => e.join(default),
                        None => default,
                    },
                }
            }
            DefKind::Phi { guard, then_var, else_var } => {
                let Abs::Bool(gf, gt) = self.eval(guard, vals)? else { return None };
                match (gf, gt) {
                    (true, false) => vals[*else_var],
                    (false, true) => vals[*then_var],
                    _ => vals[*then_var].join(vals[*else_var]),
                }
            }
        };
        v.meet(dom)
    }

    /// Interval state under the current partial assignment, or `None` if no
    /// completion can satisfy the system.
    fn propagate(&self, assigned: &[Option<Value>]) -> Option<Vec<Abs>> {
        let mut vals: Vec<Abs> = self.doms.iter().map(Abs::of_domain).collect();
        for (level, &r) in self.free.iter().enumerate() {
            if let Some(v) = assigned[level] {
                vals[r] = Abs::point(v);
            }
        }
        for def in &self.defs {
            vals[def.var] = self.def_value(def, &vals)?;
        }
        for check in &self.checks {
            let ok = match check {
                Check::Holds(def) => self.def_value(def, &vals).and_then(|d| d.meet(vals[def.var])).is_some(),
                Check::Require(e) => self.eval(e, &vals).is_some_and(|v| v.may(true)),
                Check::Equal(a, b) => vals[*a].meet(vals[*b]).is_some(),
                Check::Flag(v, b) => vals[*v].may(*b),
                Check::Differs(pairs) => pairs
                    .iter()
                    .any(|(a, b)| !matches!((vals[*a].as_point(), vals[*b].as_point()), (Some(x), Some(y)) if x == y)),
            };
            if !ok {
                return None;
            }
        }
        for g in &self.blocks {
            let tuple: Option<Vec<Value>> = g.vars.iter().map(|&v| vals[v].as_point()).collect();
            if tuple.is_some_and(|t| g.tuples.contains(&t)) {
                return None;
            }
        }
        Some(vals)
    }

    fn value_at(&self, level: usize, k: u128) -> Value {
        match self.doms[self.free[level]] {
            VarDomain::Int { min, .. } => Value::Int((min as i128 + k as i128) as i64),
            VarDomain::Bool => Value::Bool(k == 1),
        }
    }

    fn random_value(&self, level: usize, rng: &mut ChaCha8Rng) -> Value {
        match self.doms[self.free[level]] {
            VarDomain::Int { min, max } => Value::Int(rng.gen_range(min..=max)),
            VarDomain::Bool => Value::Bool(rng.gen()),
        }
    }

    fn assignment(&self, vals: &[Abs]) -> Option<VariableEnvironment> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| Some((n.clone(), vals[self.rep[i]].as_point()?)))
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().collect())
    }
}

/// Resumable search over one system. Calling [`Solver::next_solution`] again
/// after [`Solver::block`] continues where the previous call stopped, which
/// has the same sat/unsat answer as solving the extended system from scratch:
/// every leaf already visited was either rejected or is now blocked.
#[derive(Debug, Clone)]
pub struct Solver {
    system: ConstraintSystem,
    compiled: Compiled,
    assigned: Vec<Option<Value>>,
    cursor: Vec<u128>,
    level: usize,
    started: bool,
    done: bool,
    nodes: u64,
    flags: Vec<usize>,
    rng: ChaCha8Rng,
}

/// Depth-first nodes between two probe bursts, and probes per burst.
const PROBE_INTERVAL: u64 = 1 << 14;
const PROBE_BURST: usize = 512;
const PROBE_SEED: u64 = 0x6d75_7464_6966_6621;

impl Solver {
    pub fn new(system: &ConstraintSystem) -> Self {
        let compiled = compile(system);
        let n = compiled.free.len();
        Solver {
            system: system.clone(),
            assigned: vec![None; n],
            cursor: vec![0; n],
            level: 0,
            started: false,
            done: false,
            nodes: 0,
            flags: system.flag_vars.iter().filter_map(|f| compiled.names.iter().position(|n| n == f)).collect(),
            rng: ChaCha8Rng::seed_from_u64(PROBE_SEED),
            compiled,
        }
    }

    /// The system including every blocking constraint added so far.
    pub fn system(&self) -> &ConstraintSystem {
        &self.system
    }

    /// Search nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn block(&mut self, forbidden: VariableEnvironment) {
        self.compiled.add_block(&forbidden);
        self.system.block(forbidden);
    }

    fn candidate(&self, vals: &[Abs]) -> Option<Solution> {
        let assignment = self.compiled.assignment(vals)?;
        let verdict = check_assignment(&self.system, &assignment);
        debug_assert!(verdict.is_ok(), "solver produced a rejected assignment: {verdict:?}");
        verdict.ok().map(|_| Solution { assignment })
    }

    /// One burst of random complete assignments; only flag-free solutions count.
    fn probe(&mut self, deadline: Option<Instant>) -> Option<Solution> {
        let n = self.compiled.free.len();
        let mut point = vec![None; n];
        for _ in 0..PROBE_BURST {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return None;
            }
            for (level, slot) in point.iter_mut().enumerate() {
                *slot = Some(self.compiled.random_value(level, &mut self.rng));
            }
            let Some(vals) = self.compiled.propagate(&point) else { continue };
            let rep = &self.compiled.rep;
            if self.flags.iter().any(|&f| vals[rep[f]].as_point() != Some(Value::Bool(false))) {
                continue;
            }
            if let Some(solution) = self.candidate(&vals) {
                return Some(solution);
            }
        }
        None
    }

    pub fn next_solution(&mut self, deadline: Option<Instant>) -> SolveOutcome {
        if self.done {
            return SolveOutcome::Unsat;
        }
        let n = self.compiled.free.len();
        if !self.started {
            self.started = true;
            let root = self.compiled.propagate(&self.assigned);
            match root {
                None => {
                    self.done = true;
                    return SolveOutcome::Unsat;
                }
                Some(vals) if n == 0 => {
                    self.done = true;
                    return self.candidate(&vals).map_or(SolveOutcome::Unsat, SolveOutcome::Solution);
                }
                Some(_) => {}
            }
        }
        loop {
            self.nodes += 1;
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return SolveOutcome::Timeout;
            }
            if self.nodes.is_multiple_of(PROBE_INTERVAL) {
                if let Some(solution) = self.probe(deadline) {
                    return SolveOutcome::Solution(solution);
                }
            }
            let d = self.level;
            let size = self.compiled.doms[self.compiled.free[d]].size();
            if self.cursor[d] >= size {
                self.cursor[d] = 0;
                self.assigned[d] = None;
                if d == 0 {
                    self.done = true;
                    return SolveOutcome::Unsat;
                }
                self.level -= 1;
                continue;
            }
            self.assigned[d] = Some(self.compiled.value_at(d, self.cursor[d]));
            self.cursor[d] += 1;
            let Some(vals) = self.compiled.propagate(&self.assigned) else { continue };
            if d + 1 < n {
                self.level += 1;
            } else if let Some(solution) = self.candidate(&vals) {
                return SolveOutcome::Solution(solution);
            }
        }
    }
}

/// Finds one solution of `cs`, or proves there is none, before `deadline`.
pub fn solve(cs: &ConstraintSystem, deadline: Option<Instant>) -> SolveOutcome {
    Solver::new(cs).next_solution(deadline)
}
