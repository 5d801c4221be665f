//! Finite-domain constraint systems over SSA variables.
//!
//! An SSA program becomes one equation per assignment. Two such systems (the
//! program and its `_M`-renamed mutant) are joined by tying their inputs
//! together and requiring that some output pair differs.

mod smtlib;
mod solver;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use smtlib::export_smtlib;
pub use solver::{solve, Solver};

use crate::domain::DomainConfig;
use crate::lang::eval::eval_expr;
use crate::lang::printer::write_expr;
use crate::lang::{Expr, Type, Value, VariableEnvironment};
use crate::ssa::{default_value, SsaProgram, SsaRhs, MUTANT_SUFFIX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum VarDomain {
    Int { min: i64, max: i64 },
    Bool,
}

impl VarDomain {
    pub fn contains(&self, v: Value) -> bool {
        match (self, v) {
            (VarDomain::Int { min, max }, Value::Int(x)) => *min <= x && x <= *max,
            (VarDomain::Bool, Value::Bool(_)) => true,
            _ => false,
        }
    }

    pub fn ty(&self) -> Type {
        match self {
            VarDomain::Int { .. } => Type::Int,
            VarDomain::Bool => Type::Bool,
        }
    }

    pub fn size(&self) -> u128 {
        match self {
            VarDomain::Int { min, max } => (*max as i128 - *min as i128 + 1).max(0) as u128,
            VarDomain::Bool => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// `var = expr` when `active` holds (or is absent), else `var` takes the type default.
    Eq {
        var: String,
        expr: Expr,
        active: Option<Expr>,
    },
    /// `var = guard ? then_var : else_var`.
    PhiEq {
        var: String,
        guard: Expr,
        then_var: String,
        else_var: String,
    },
    /// `var = var_m` for a program input and its mutant copy.
    InputTie {
        var: String,
        var_m: String,
    },
    /// At least one pair takes different values.
    OutputDiffers {
        pairs: Vec<(String, String)>,
    },
    /// Not every listed variable takes its listed value.
    Blocking {
        forbidden: VariableEnvironment,
    },
    FlagValue {
        var: String,
        value: bool,
    },
    /// A boolean expression that must evaluate to `true`.
    Require {
        expr: Expr,
    },
}

impl Constraint {
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Constraint::Eq { var, expr, active } => {
                f(var);
                expr.for_each_var(f);
                if let Some(a) = active {
                    a.for_each_var(f);
                }
            }
            Constraint::PhiEq { var, guard, then_var, else_var } => {
                f(var);
                guard.for_each_var(f);
                f(then_var);
                f(else_var);
            }
            Constraint::InputTie { var, var_m } => {
                f(var);
                f(var_m);
            }
            Constraint::OutputDiffers { pairs } => {
                for (a, b) in pairs {
                    f(a);
                    f(b);
                }
            }
            Constraint::Blocking { forbidden } => forbidden.names().for_each(f),
            Constraint::FlagValue { var, .. } => f(var),
            Constraint::Require { expr } => expr.for_each_var(f),
        }
    }
}

/// Fig.-1(d)-style rendering; activation conditions are not shown.
impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Eq { var, expr, .. } => {
                write!(f, "{var} = ")?;
                write_expr(f, expr, false)
            }
            Constraint::PhiEq { var, guard, then_var, else_var } => {
                write!(f, "{var} = Phi(")?;
                write_expr(f, guard, true)?;
                write!(f, ", {then_var}, {else_var})")
            }
            Constraint::InputTie { var, var_m } => write!(f, "{var} = {var_m}"),
            Constraint::OutputDiffers { pairs } => {
                let parts: Vec<String> = pairs.iter().map(|(a, b)| format!("{a} != {b}")).collect();
                f.write_str(&parts.join(" or "))
            }
            Constraint::Blocking { forbidden } => {
                let parts: Vec<String> = forbidden.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                write!(f, "not ({})", parts.join(" and "))
            }
            Constraint::FlagValue { var, value } => write!(f, "{var} = {value}"),
            Constraint::Require { expr } => write_expr(f, expr, false),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub vars: BTreeMap<String, VarDomain>,
    pub constraints: Vec<Constraint>,
    /// Range every intermediate integer must stay in.
    pub arith: DomainConfig,
    /// The program's free inputs, in parameter order.
    pub input_vars: Vec<String>,
    /// `(base name, final SSA variable)` of each output of an encoded program.
    pub outputs: Vec<(String, String)>,
    /// `(program, mutant)` output pairs of a joint system.
    pub output_pairs: Vec<(String, String)>,
    pub flag_vars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("joint system needs at least one output pair")]
    NoOutputs,
    #[error("variable `{0}` is not declared")]
    Undeclared(String),
    #[error("variable `{0}` is declared by both systems")]
    Clash(String),
    #[error("mutant variable `{0}` lacks the `{MUTANT_SUFFIX}` suffix")]
    NotRenamed(String),
}

impl ConstraintSystem {
    /// An empty system whose integer arithmetic is bounded by `arith`.
    pub fn new(arith: DomainConfig) -> Self {
        ConstraintSystem {
            vars: BTreeMap::new(),
            constraints: Vec::new(),
            arith,
            input_vars: Vec::new(),
            outputs: Vec::new(),
            output_pairs: Vec::new(),
            flag_vars: Vec::new(),
        }
    }

    pub fn int_var(&mut self, name: impl Into<String>, min: i64, max: i64) -> &mut Self {
        self.vars.insert(name.into(), VarDomain::Int { min, max });
        self
    }

    pub fn bool_var(&mut self, name: impl Into<String>) -> &mut Self {
        self.vars.insert(name.into(), VarDomain::Bool);
        self
    }

    pub fn add(&mut self, c: Constraint) -> &mut Self {
        self.constraints.push(c);
        self
    }

    /// Forbids the exact tuple `forbidden` from all future solutions.
    pub fn block(&mut self, forbidden: VariableEnvironment) -> &mut Self {
        self.add(Constraint::Blocking { forbidden })
    }

    /// Every referenced variable must be declared.
    pub fn validate(&self) -> Result<(), SystemError> {
        let mut missing = None;
        for c in &self.constraints {
            c.for_each_var(&mut |v| {
                if missing.is_none() && !self.vars.contains_key(v) {
                    missing = Some(v.to_string());
                }
            });
        }
        match missing {
            Some(v) => Err(SystemError::Undeclared(v)),
            None => Ok(()),
        }
    }

    fn domain_for(&self, ty: Type) -> VarDomain {
        match ty {
            Type::Int => VarDomain::Int { min: self.arith.int_min, max: self.arith.int_max },
            Type::Bool => VarDomain::Bool,
        }
    }

    /// Counts constraints of the given shape; handy for summaries.
    pub fn equation_count(&self) -> usize {
        self.constraints.iter().filter(|c| matches!(c, Constraint::Eq { .. } | Constraint::PhiEq { .. })).count()
    }

    /// Restricts `assignment` to the program inputs.
    pub fn input_projection(&self, assignment: &VariableEnvironment) -> VariableEnvironment {
        self.input_vars.iter().filter_map(|v| Some((v.clone(), assignment.get(v)?))).collect()
    }

    /// JSON dump for debugging; expressions are rendered as text.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "arith": { "min": self.arith.int_min, "max": self.arith.int_max },
            "vars": self.vars,
            "constraints": self.constraints.iter().map(constraint_json).collect::<Vec<_>>(),
            "input_vars": self.input_vars,
            "outputs": self.outputs,
            "output_pairs": self.output_pairs,
            "flag_vars": self.flag_vars,
        })
    }
}

fn constraint_json(c: &Constraint) -> serde_json::Value {
    let kind = match c {
        Constraint::Eq { .. } => "eq",
        Constraint::PhiEq { .. } => "phi",
        Constraint::InputTie { .. } => "input_tie",
        Constraint::OutputDiffers { .. } => "output_differs",
        Constraint::Blocking { .. } => "blocking",
        Constraint::FlagValue { .. } => "flag_value",
        Constraint::Require { .. } => "require",
    };
    let mut obj = serde_json::json!({ "kind": kind, "text": c.to_string() });
    if let Constraint::Eq { active: Some(a), .. } = c {
        obj["active"] = serde_json::Value::String(a.to_string());
    }
    obj
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            writeln!(f, "{c};")?;
        }
        Ok(())
    }
}

/// One equation per SSA assignment; the version-0 inputs stay free.
pub fn encode(s: &SsaProgram, domain: &DomainConfig) -> ConstraintSystem {
    let mut cs = ConstraintSystem::new(*domain);
    for p in &s.inputs {
        let v0 = s.input_versions[&p.name].clone();
        cs.vars.insert(v0.clone(), cs.domain_for(p.ty));
        cs.input_vars.push(v0);
    }
    for a in &s.assignments {
        cs.vars.insert(a.target.clone(), cs.domain_for(a.ty));
        cs.constraints.push(match &a.rhs {
            SsaRhs::Expr(e) => Constraint::Eq { var: a.target.clone(), expr: e.clone(), active: a.active.clone() },
            SsaRhs::Phi { guard, then_value, else_value } => Constraint::PhiEq {
                var: a.target.clone(),
                guard: guard.clone(),
                then_var: then_value.clone(),
                else_var: else_value.clone(),
            },
        });
    }
    cs.outputs = s.output_versions().map(|(b, v)| (b.to_string(), v.to_string())).collect();
    cs.flag_vars = s.flag_versions().map(|(_, v)| v.to_string()).collect();
    cs
}

/// Joins a program system with its mutant's, tying `inputs` and requiring
/// some pair of `output_pairs` to differ.
pub fn build_joint_system(
    con_p: &ConstraintSystem,
    con_m: &ConstraintSystem,
    inputs: &[(String, String)],
    output_pairs: &[(String, String)],
) -> Result<ConstraintSystem, SystemError> {
    if output_pairs.is_empty() {
        return Err(SystemError::NoOutputs);
    }
    if let Some(v) = con_m.vars.keys().find(|v| !v.ends_with(MUTANT_SUFFIX)) {
        return Err(SystemError::NotRenamed(v.clone()));
    }
    let mut cs = con_p.clone();
    for (name, dom) in &con_m.vars {
        if cs.vars.insert(name.clone(), *dom).is_some() {
            return Err(SystemError::Clash(name.clone()));
        }
    }
    cs.constraints.extend(con_m.constraints.iter().cloned());
    for (x, x_m) in inputs {
        cs.constraints.push(Constraint::InputTie { var: x.clone(), var_m: x_m.clone() });
    }
    cs.constraints.push(Constraint::OutputDiffers { pairs: output_pairs.to_vec() });
    cs.output_pairs = output_pairs.to_vec();
    cs.flag_vars.extend(con_m.flag_vars.iter().cloned());
    cs.validate()?;
    Ok(cs)
}

/// Joins the encodings of a program and its (already renamed) mutant,
/// pairing inputs and outputs by source name.
pub fn join_programs(p: &SsaProgram, m: &SsaProgram, domain: &DomainConfig) -> Result<ConstraintSystem, SystemError> {
    let con_p = encode(p, domain);
    let con_m = encode(m, domain);
    let inputs: Vec<(String, String)> =
        p.input_versions.iter().map(|(b, v)| (v.clone(), m.input_versions[b].clone())).collect();
    let pairs: Vec<(String, String)> =
        p.output_versions().filter_map(|(b, v)| Some((v.to_string(), m.final_versions.get(b)?.clone()))).collect();
    build_joint_system(&con_p, &con_m, &inputs, &pairs)
}

/// A satisfying assignment to every variable of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub assignment: VariableEnvironment,
}

impl Solution {
    pub fn get(&self, var: &str) -> Option<Value> {
        self.assignment.get(var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Solution),
    Unsat,
    Timeout,
}

/// Independent, name-based verification of a full assignment.
pub fn check_assignment(cs: &ConstraintSystem, assignment: &VariableEnvironment) -> Result<(), String> {
    for (name, dom) in &cs.vars {
        match assignment.get(name) {
            Some(v) if dom.contains(v) => {}
            Some(v) => return Err(format!("`{name}` = {v} lies outside its domain")),
            None => return Err(format!("`{name}` is unassigned")),
        }
    }
    let lookup = |n: &str| assignment.get(n);
    let eval = |e: &Expr| eval_expr(e, &lookup, &cs.arith).ok();
    let holds = |c: &Constraint| -> bool {
        match c {
            Constraint::Eq { var, expr, active } => {
                let taken = match active {
                    None => Some(true),
                    Some(g) => eval(g).and_then(Value::as_bool),
                };
                match taken {
                    Some(true) => eval(expr) == lookup(var),
                    Some(false) => {
                        let ty = cs.vars[var].ty();
                        lookup(var) == Some(default_value(ty, &cs.arith))
                    }
                    None => false,
                }
            }
            Constraint::PhiEq { var, guard, then_var, else_var } => match eval(guard).and_then(Value::as_bool) {
                Some(true) => lookup(var) == lookup(then_var),
                Some(false) => lookup(var) == lookup(else_var),
                None => false,
            },
            Constraint::InputTie { var, var_m } => lookup(var) == lookup(var_m),
            Constraint::OutputDiffers { pairs } => pairs.iter().any(|(a, b)| lookup(a) != lookup(b)),
            Constraint::Blocking { forbidden } => forbidden.iter().any(|(k, v)| lookup(k) != Some(v)),
            Constraint::FlagValue { var, value } => lookup(var) == Some(Value::Bool(*value)),
            Constraint::Require { expr } => eval(expr) == Some(Value::Bool(true)),
        }
    };
    for c in &cs.constraints {
        if !holds(c) {
            return Err(format!("violated: {c}"));
        }
    }
    Ok(())
}

/// Variables that some `Eq`/`PhiEq` defines.
pub(crate) fn defined_vars(cs: &ConstraintSystem) -> BTreeSet<&str> {
    cs.constraints
        .iter()
        .filter_map(|c| match c {
            Constraint::Eq { var, .. } | Constraint::PhiEq { var, .. } => Some(var.as_str()),
            _ => None,
        })
        .collect()
}
