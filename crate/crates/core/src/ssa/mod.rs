//! Static single assignment form of loop-free programs.
//!
//! Each variable `x` becomes a series `x_0, x_1, ...`; inputs start at
//! version 0 and every definition bumps the version. Conditionals disappear:
//! the statements of a branch are hoisted to the top level and merged with
//! `Phi(C, x_then, x_else)`, where `C` is the full path condition of the branch.
//!
//! Inside a branch, pending definitions are merged right before each nested
//! conditional and at the end of the branch. For `mult` at depth 1 this
//! yields exactly
//!
//! ```text
//! bool loop_4_1 = false;
//! int i_1 = 0;
//! int res_1 = 0;
//! res_2 = res_1 + b_0;
//! i_2 = i_1 + 1;
//! res_3 = Phi((i_1 < a_0), res_2, res_1);
//! i_3 = Phi((i_1 < a_0), i_2, i_1);
//! loop_4_2 = true;
//! loop_4_3 = Phi(((i_1 < a_0) and (i_2 < a_0)), loop_4_2, loop_4_1);
//! ```
//!
//! Every hoisted assignment also records its path condition (`active`). An
//! assignment whose path is not taken yields a type default instead of being
//! evaluated, so a division on an untaken branch cannot fail.

mod printer;

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::domain::DomainConfig;
use crate::lang::eval::{eval_expr, EvalFault};
use crate::lang::{Expr, Param, Stmt, StmtKind, Type, Value, VariableEnvironment};
use crate::unroll::LoopFreeProgram;

/// Suffix marking the mutant's copy of every variable.
pub const MUTANT_SUFFIX: &str = "_M";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SsaRhs {
    Expr(Expr),
    Phi { guard: Expr, then_value: String, else_value: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SsaAssignment {
    pub target: String,
    /// Source variable this version belongs to.
    pub base: String,
    pub ty: Type,
    /// Came from a declaration; printed with its type.
    pub decl: bool,
    /// Path condition under which the source statement executes; `None` at top level.
    pub active: Option<Expr>,
    pub rhs: SsaRhs,
}

impl SsaAssignment {
    pub fn is_phi(&self) -> bool {
        matches!(self.rhs, SsaRhs::Phi { .. })
    }

    /// Every SSA variable read by this assignment, guards included.
    pub fn for_each_read<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        if let Some(g) = &self.active {
            g.for_each_var(f);
        }
        match &self.rhs {
            SsaRhs::Expr(e) => e.for_each_var(f),
            SsaRhs::Phi { guard, then_value, else_value } => {
                guard.for_each_var(f);
                f(then_value);
                f(else_value);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsaProgram {
    pub name: String,
    /// Source-level parameters (base names).
    pub inputs: Vec<Param>,
    pub outputs: Vec<Param>,
    /// Source-level loop flags (base names).
    pub loop_flags: Vec<String>,
    pub assignments: Vec<SsaAssignment>,
    pub input_versions: BTreeMap<String, String>,
    pub final_versions: BTreeMap<String, String>,
}

impl SsaProgram {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// `(base, final SSA name)` of every output.
    pub fn output_versions(&self) -> impl Iterator<Item = (&str, &str)> {
        self.outputs.iter().map(|p| (p.name.as_str(), self.final_versions[&p.name].as_str()))
    }

    /// `(base, final SSA name)` of every loop flag.
    pub fn flag_versions(&self) -> impl Iterator<Item = (&str, &str)> {
        self.loop_flags.iter().map(|f| (f.as_str(), self.final_versions[f].as_str()))
    }

    /// Output values keyed by base name, read from an evaluation.
    pub fn outputs_of(&self, values: &VariableEnvironment) -> VariableEnvironment {
        self.output_versions().filter_map(|(b, v)| Some((b, values.get(v)?))).collect()
    }

    /// Flag values keyed by base name, read from an evaluation.
    pub fn flags_of(&self, values: &VariableEnvironment) -> VariableEnvironment {
        self.flag_versions().filter_map(|(b, v)| Some((b, values.get(v)?))).collect()
    }

    /// Type of every SSA variable, version-0 inputs included.
    pub fn var_types(&self) -> BTreeMap<String, Type> {
        let mut types: BTreeMap<String, Type> =
            self.inputs.iter().map(|p| (self.input_versions[&p.name].clone(), p.ty)).collect();
        for a in &self.assignments {
            types.insert(a.target.clone(), a.ty);
        }
        types
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsaError {
    #[error("`{0}` is used before it is defined")]
    UseBeforeDef(String),
    #[error("program still contains a loop at line {0}")]
    ContainsLoop(u32),
}

fn version(base: &str, n: u32) -> String {
    format!("{base}_{n}")
}

struct Builder<'a> {
    lfp: &'a LoopFreeProgram,
    counters: HashMap<String, u32>,
    types: HashMap<String, Type>,
    /// Merged, branch-independent version of every variable.
    merged: BTreeMap<String, String>,
    out: Vec<SsaAssignment>,
}

type View = BTreeMap<String, String>;

impl Builder<'_> {
    fn is_param(&self, name: &str) -> bool {
        self.lfp.program.input(name).is_some() || self.lfp.program.output(name).is_some()
    }

    fn fresh(&mut self, base: &str, ty: Type) -> String {
        let n = self.counters.entry(base.to_string()).or_insert(0);
        *n += 1;
        let name = version(base, *n);
        self.types.insert(name.clone(), ty);
        name
    }

    fn rename(&self, e: &Expr, view: &View) -> Result<Expr, SsaError> {
        let mut missing = None;
        e.for_each_var(&mut |v| {
            if !view.contains_key(v) && missing.is_none() {
                missing = Some(v.to_string());
            }
        });
        match missing {
            Some(v) => Err(SsaError::UseBeforeDef(v)),
            None => Ok(e.map_vars(&|v| view[v].clone())),
        }
    }

    /// Type of the variable `base` as seen from `view`.
    fn base_type(&self, base: &str, view: &View) -> Result<Type, SsaError> {
        if let Some(v) = view.get(base) {
            return Ok(self.types[v]);
        }
        self.lfp.program.output(base).map(|p| p.ty).ok_or_else(|| SsaError::UseBeforeDef(base.to_string()))
    }

    fn define(&mut self, stmt: &Stmt, view: &mut View, active: Option<&Expr>) -> Result<String, SsaError> {
        let (base, ty, decl, expr) = match &stmt.kind {
            StmtKind::Decl { name, ty, init } => (name, *ty, true, init),
            StmtKind::Assign { target, value } => (target, self.base_type(target, view)?, false, value),
            _ => unreachable!("define is only called on assignments"),
        };
        let rhs = self.rename(expr, view)?;
        let target = self.fresh(base, ty);
        self.out.push(SsaAssignment {
            target: target.clone(),
            base: base.clone(),
            ty,
            decl,
            active: active.cloned(),
            rhs: SsaRhs::Expr(rhs),
        });
        view.insert(base.clone(), target);
        Ok(base.clone())
    }

    fn phi(&mut self, base: &str, guard: &Expr, then_value: String, else_value: String) {
        let ty = self.types[&then_value];
        let target = self.fresh(base, ty);
        self.out.push(SsaAssignment {
            target: target.clone(),
            base: base.to_string(),
            ty,
            decl: false,
            active: None,
            rhs: SsaRhs::Phi { guard: guard.clone(), then_value, else_value },
        });
        self.merged.insert(base.to_string(), target);
    }

    fn top_level(&mut self, stmts: &[Stmt]) -> Result<(), SsaError> {
        for stmt in stmts {
            match &stmt.kind {
                StmtKind::Decl { .. } | StmtKind::Assign { .. } => {
                    let mut view = std::mem::take(&mut self.merged);
                    let r = self.define(stmt, &mut view, None);
                    self.merged = view;
                    r?;
                }
                StmtKind::If { cond, then_branch, else_branch } => {
                    let cond = self.rename(cond, &self.merged)?;
                    if straight(then_branch) && straight(else_branch) {
                        self.flat_if(&cond, then_branch, else_branch)?;
                    } else {
                        let entry = self.merged.clone();
                        self.branch(then_branch, &cond, &entry)?;
                        self.branch(else_branch, &Expr::logical_not(cond), &entry)?;
                    }
                }
                StmtKind::While { .. } => return Err(SsaError::ContainsLoop(stmt.pos.line)),
            }
        }
        Ok(())
    }

    /// A top-level conditional with straight-line branches: one Phi per
    /// variable selecting between the two branch versions.
    fn flat_if(&mut self, cond: &Expr, then_branch: &[Stmt], else_branch: &[Stmt]) -> Result<(), SsaError> {
        let entry = self.merged.clone();
        let not_cond = Expr::logical_not(cond.clone());
        let mut order: Vec<String> = Vec::new();
        let mut views = Vec::new();
        for (stmts, guard) in [(then_branch, cond), (else_branch, &not_cond)] {
            let mut view = entry.clone();
            for stmt in stmts {
                let base = self.define(stmt, &mut view, Some(guard))?;
                if !order.contains(&base) {
                    order.push(base);
                }
            }
            views.push(view);
        }
        for base in order {
            if !entry.contains_key(&base) && !self.is_param(&base) {
                continue;
            }
            match (views[0].get(&base).cloned(), views[1].get(&base).cloned()) {
                (Some(t), Some(e)) if t != e => self.phi(&base, cond, t, e),
                (Some(v), _) | (_, Some(v)) => {
                    self.merged.insert(base, v);
                }
                (None, None) => {}
            }
        }
        Ok(())
    }

    /// Hoists a branch executed under `guard`, whose reads start from `entry`.
    fn branch(&mut self, stmts: &[Stmt], guard: &Expr, entry: &View) -> Result<(), SsaError> {
        let mut view = entry.clone();
        let mut pending: Vec<String> = Vec::new();
        for stmt in stmts {
            match &stmt.kind {
                StmtKind::Decl { .. } | StmtKind::Assign { .. } => {
                    let base = self.define(stmt, &mut view, Some(guard))?;
                    if !pending.contains(&base) {
                        pending.push(base);
                    }
                }
                StmtKind::If { cond, then_branch, else_branch } => {
                    self.flush(&mut pending, &view, guard, entry);
                    let cond = self.rename(cond, &view)?;
                    let before = self.merged.clone();
                    self.branch(then_branch, &Expr::and(guard.clone(), cond.clone()), &view)?;
                    self.branch(else_branch, &Expr::and(guard.clone(), Expr::logical_not(cond)), &view)?;
                    for (base, v) in &self.merged {
                        if before.get(base) != Some(v) {
                            view.insert(base.clone(), v.clone());
                        }
                    }
                }
                StmtKind::While { .. } => return Err(SsaError::ContainsLoop(stmt.pos.line)),
            }
        }
        self.flush(&mut pending, &view, guard, entry);
        Ok(())
    }

    /// Publishes the branch versions of `pending` into the merged state.
    fn flush(&mut self, pending: &mut Vec<String>, view: &View, guard: &Expr, entry: &View) {
        for base in pending.drain(..) {
            let local = view[&base].clone();
            let visible = entry.contains_key(&base) || self.is_param(&base);
            match self.merged.get(&base).cloned() {
                Some(outer) if visible => self.phi(&base, guard, local, outer),
                _ => {
                    self.merged.insert(base, local);
                }
            }
        }
    }
}

fn straight(stmts: &[Stmt]) -> bool {
    stmts.iter().all(|s| matches!(s.kind, StmtKind::Decl { .. } | StmtKind::Assign { .. }))
}

/// Converts a loop-free program to SSA form.
pub fn to_ssa(lfp: &LoopFreeProgram) -> Result<SsaProgram, SsaError> {
    let program = &lfp.program;
    let mut b =
        Builder { lfp, counters: HashMap::new(), types: HashMap::new(), merged: BTreeMap::new(), out: Vec::new() };
    let mut input_versions = BTreeMap::new();
    for p in &program.inputs {
        let v0 = version(&p.name, 0);
        b.counters.insert(p.name.clone(), 0);
        b.types.insert(v0.clone(), p.ty);
        b.merged.insert(p.name.clone(), v0.clone());
        input_versions.insert(p.name.clone(), v0);
    }
    b.top_level(&program.body)?;
    for name in program.outputs.iter().map(|p| &p.name).chain(&lfp.loop_flags) {
        if !b.merged.contains_key(name) {
            return Err(SsaError::UseBeforeDef(name.clone()));
        }
    }
    Ok(SsaProgram {
        name: program.name.clone(),
        inputs: program.inputs.clone(),
        outputs: program.outputs.clone(),
        loop_flags: lfp.loop_flags.clone(),
        assignments: b.out,
        input_versions,
        final_versions: b.merged,
    })
}

/// Appends [`MUTANT_SUFFIX`] to every SSA variable; base names are unchanged.
pub fn rename_for_mutant(s: &SsaProgram) -> SsaProgram {
    let r = |v: &str| format!("{v}{MUTANT_SUFFIX}");
    let rename_expr = |e: &Expr| e.map_vars(&r);
    SsaProgram {
        name: s.name.clone(),
        inputs: s.inputs.clone(),
        outputs: s.outputs.clone(),
        loop_flags: s.loop_flags.clone(),
        assignments: s
            .assignments
            .iter()
            .map(|a| SsaAssignment {
                target: r(&a.target),
                base: a.base.clone(),
                ty: a.ty,
                decl: a.decl,
                active: a.active.as_ref().map(rename_expr),
                rhs: match &a.rhs {
                    SsaRhs::Expr(e) => SsaRhs::Expr(rename_expr(e)),
                    SsaRhs::Phi { guard, then_value, else_value } => {
                        SsaRhs::Phi { guard: rename_expr(guard), then_value: r(then_value), else_value: r(else_value) }
                    }
                },
            })
            .collect(),
        input_versions: s.input_versions.iter().map(|(k, v)| (k.clone(), r(v))).collect(),
        final_versions: s.final_versions.iter().map(|(k, v)| (k.clone(), r(v))).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsaEvalError {
    #[error("input `{0}` is not bound")]
    MissingInput(String),
    #[error("computing `{target}`: {fault}")]
    Fault { target: String, fault: EvalFault },
}

/// Evaluates `s` on `input`, keyed either by base name (`a`) or by version-0
/// name (`a_0`). Returns the value of every SSA variable.
pub fn eval_ssa(
    s: &SsaProgram,
    input: &VariableEnvironment,
    domain: &DomainConfig,
) -> Result<VariableEnvironment, SsaEvalError> {
    let mut values: HashMap<&str, Value> = HashMap::new();
    for p in &s.inputs {
        let v0 = &s.input_versions[&p.name];
        let value =
            input.get(v0).or_else(|| input.get(&p.name)).ok_or_else(|| SsaEvalError::MissingInput(p.name.clone()))?;
        values.insert(v0, value);
    }
    for a in &s.assignments {
        let lookup = |name: &str| values.get(name).copied();
        let fail = |fault| SsaEvalError::Fault { target: a.target.clone(), fault };
        let taken = match &a.active {
            None => true,
            Some(g) => eval_expr(g, &lookup, domain).map_err(fail)?.as_bool().ok_or(fail(EvalFault::IllTyped))?,
        };
        let value = if !taken {
            default_value(a.ty, domain)
        } else {
            match &a.rhs {
                SsaRhs::Expr(e) => eval_expr(e, &lookup, domain).map_err(fail)?,
                SsaRhs::Phi { guard, then_value, else_value } => {
                    let c =
                        eval_expr(guard, &lookup, domain).map_err(fail)?.as_bool().ok_or(fail(EvalFault::IllTyped))?;
                    let pick = if c { then_value } else { else_value };
                    lookup(pick).ok_or_else(|| fail(EvalFault::Unbound(pick.clone())))?
                }
            }
        };
        values.insert(&a.target, value);
    }
    Ok(values.into_iter().collect())
}

/// Value of a variable whose defining statement is not executed.
pub fn default_value(ty: Type, domain: &DomainConfig) -> Value {
    match ty {
        Type::Int => Value::Int(domain.default_int()),
        Type::Bool => Value::Bool(false),
    }
}

/// Checks the single-assignment and define-before-use invariants.
pub fn validate(s: &SsaProgram) -> Result<(), String> {
    let mut defined: HashSet<&str> = s.input_versions.values().map(String::as_str).collect();
    for a in &s.assignments {
        let mut bad = None;
        a.for_each_read(&mut |v| {
            if !defined.contains(v) && bad.is_none() {
                bad = Some(v.to_string());
            }
        });
        if let Some(v) = bad {
            return Err(format!("`{}` reads undefined `{v}`", a.target));
        }
        if !defined.insert(&a.target) {
            return Err(format!("`{}` is assigned twice", a.target));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
