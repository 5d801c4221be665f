//! First-order mutant generation.
//!
//! Every mutant differs from its base program in exactly one expression node:
//! an operator swapped for another of its family, a unary operator inserted
//! or removed, a constant perturbed, or (optionally) a variable reference
//! replaced. Candidates that do not pass the static checks are dropped.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::check::expr_type;
use crate::lang::{check_program, BinOp, Expr, Program, Stmt, StmtKind, Type, UnOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum OperatorClass {
    /// Arithmetic operator replacement.
    AOR,
    /// Relational operator replacement.
    ROR,
    /// Logical connective replacement.
    COR,
    /// Unary operator insertion.
    UOI,
    /// Unary operator deletion.
    UOD,
    /// Constant replacement.
    CRP,
    /// Variable replacement; never enabled by default.
    VRP,
    /// A hand-written mutant.
    Manual,
}

impl OperatorClass {
    pub const DEFAULT: [OperatorClass; 6] = [
        OperatorClass::AOR,
        OperatorClass::ROR,
        OperatorClass::COR,
        OperatorClass::UOI,
        OperatorClass::UOD,
        OperatorClass::CRP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorClass::AOR => "AOR",
            OperatorClass::ROR => "ROR",
            OperatorClass::COR => "COR",
            OperatorClass::UOI => "UOI",
            OperatorClass::UOD => "UOD",
            OperatorClass::CRP => "CRP",
            OperatorClass::VRP => "VRP",
            OperatorClass::Manual => "MANUAL",
        }
    }
}

impl fmt::Display for OperatorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "AOR" => OperatorClass::AOR,
            "ROR" => OperatorClass::ROR,
            "COR" => OperatorClass::COR,
            "UOI" => OperatorClass::UOI,
            "UOD" => OperatorClass::UOD,
            "CRP" => OperatorClass::CRP,
            "VRP" => OperatorClass::VRP,
            other => return Err(format!("unknown operator class `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathStep {
    /// Statement of the program body or of a loop body.
    Body(usize),
    Then(usize),
    Else(usize),
    /// Initializer of a declaration.
    Init,
    /// Right-hand side of an assignment.
    Value,
    /// Condition of `if` / `while`.
    Cond,
    Lhs,
    Rhs,
    Operand,
}

/// Location of one expression node, e.g. `body[2].body[1].value.rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AstPath(pub Vec<PathStep>);

impl AstPath {
    fn with(&self, step: PathStep) -> AstPath {
        let mut steps = self.0.clone();
        steps.push(step);
        AstPath(steps)
    }
}

impl fmt::Display for AstPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            match step {
                PathStep::Body(n) => write!(f, "body[{n}]")?,
                PathStep::Then(n) => write!(f, "then[{n}]")?,
                PathStep::Else(n) => write!(f, "else[{n}]")?,
                PathStep::Init => f.write_str("init")?,
                PathStep::Value => f.write_str("value")?,
                PathStep::Cond => f.write_str("cond")?,
                PathStep::Lhs => f.write_str("lhs")?,
                PathStep::Rhs => f.write_str("rhs")?,
                PathStep::Operand => f.write_str("operand")?,
            }
        }
        Ok(())
    }
}

impl FromStr for AstPath {
    type Err = MutationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MutationError::InvalidLocation(s.to_string());
        let mut steps = Vec::new();
        for part in s.split('.') {
            let step = match part {
                "init" => PathStep::Init,
                "value" => PathStep::Value,
                "cond" => PathStep::Cond,
                "lhs" => PathStep::Lhs,
                "rhs" => PathStep::Rhs,
                "operand" => PathStep::Operand,
                _ => {
                    let (name, rest) = part.split_once('[').ok_or_else(bad)?;
                    let n: usize = rest.strip_suffix(']').ok_or_else(bad)?.parse().map_err(|_| bad())?;
                    match name {
                        "body" => PathStep::Body(n),
                        "then" => PathStep::Then(n),
                        "else" => PathStep::Else(n),
                        _ => return Err(bad()),
                    }
                }
            };
            steps.push(step);
        }
        Ok(AstPath(steps))
    }
}

/// What to do at the mutated node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MutationOp {
    ReplaceBinary(BinOp),
    /// Replace a constant by another literal.
    ReplaceConst(Expr),
    InsertUnary(UnOp),
    DeleteUnary,
    ReplaceVar(String),
    /// Replace the whole node.
    ReplaceExpr(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("no expression at `{0}`")]
    InvalidLocation(String),
    #[error("mutated program is rejected: {0}")]
    IllTypedMutation(String),
    #[error("the replacement leaves the program unchanged")]
    NotAMutation,
    #[error("programs differ in more than one place")]
    NotSinglePoint,
}

fn stmt_of<'a>(stmts: &'a [Stmt], steps: &[PathStep]) -> Option<(&'a Stmt, usize)> {
    let mut list = stmts;
    let mut i = 0;
    let mut current = None;
    while i < steps.len() {
        let n = match (steps[i], current.map(|s: &Stmt| &s.kind)) {
            (PathStep::Body(n), None) => n,
            (PathStep::Body(n), Some(StmtKind::While { body, .. })) => {
                list = body;
                n
            }
            (PathStep::Then(n), Some(StmtKind::If { then_branch, .. })) => {
                list = then_branch;
                n
            }
            (PathStep::Else(n), Some(StmtKind::If { else_branch, .. })) => {
                list = else_branch;
                n
            }
            _ => break,
        };
        current = Some(list.get(n)?);
        i += 1;
    }
    current.map(|s| (s, i))
}

fn expr_at<'a>(program: &'a Program, path: &AstPath) -> Option<&'a Expr> {
    let (stmt, used) = stmt_of(&program.body, &path.0)?;
    let rest = &path.0[used..];
    let mut e = match (rest.first()?, &stmt.kind) {
        (PathStep::Init, StmtKind::Decl { init, .. }) => init,
        (PathStep::Value, StmtKind::Assign { value, .. }) => value,
        (PathStep::Cond, StmtKind::If { cond, .. } | StmtKind::While { cond, .. }) => cond,
        _ => return None,
    };
    for step in &rest[1..] {
        e = match (step, e) {
            (PathStep::Lhs, Expr::Binary(_, l, _)) => l,
            (PathStep::Rhs, Expr::Binary(_, _, r)) => r,
            (PathStep::Operand, Expr::Unary(_, x)) => x,
            _ => return None,
        };
    }
    Some(e)
}

fn replace_in_expr(e: &Expr, steps: &[PathStep], new: &Expr) -> Option<Expr> {
    let Some((first, rest)) = steps.split_first() else { return Some(new.clone()) };
    Some(match (first, e) {
        (PathStep::Lhs, Expr::Binary(op, l, r)) => {
            Expr::Binary(*op, Box::new(replace_in_expr(l, rest, new)?), r.clone())
        }
        (PathStep::Rhs, Expr::Binary(op, l, r)) => {
            Expr::Binary(*op, l.clone(), Box::new(replace_in_expr(r, rest, new)?))
        }
        (PathStep::Operand, Expr::Unary(op, x)) => Expr::Unary(*op, Box::new(replace_in_expr(x, rest, new)?)),
        _ => return None,
    })
}

fn replace_in_stmts(stmts: &[Stmt], steps: &[PathStep], new: &Expr, top: bool) -> Option<Vec<Stmt>> {
    let (first, rest) = steps.split_first()?;
    let n = match first {
        PathStep::Body(n) if top => *n,
        _ => return None,
    };
    let mut out = stmts.to_vec();
    let stmt = out.get_mut(n)?;
    replace_in_stmt(stmt, rest, new)?;
    Some(out)
}

fn replace_in_stmt(stmt: &mut Stmt, steps: &[PathStep], new: &Expr) -> Option<()> {
    let (first, rest) = steps.split_first()?;
    match (first, &mut stmt.kind) {
        (PathStep::Init, StmtKind::Decl { init, .. }) => *init = replace_in_expr(init, rest, new)?,
        (PathStep::Value, StmtKind::Assign { value, .. }) => *value = replace_in_expr(value, rest, new)?,
        (PathStep::Cond, StmtKind::If { cond, .. } | StmtKind::While { cond, .. }) => {
            *cond = replace_in_expr(cond, rest, new)?
        }
        (PathStep::Body(n), StmtKind::While { body, .. })
        | (PathStep::Then(n), StmtKind::If { then_branch: body, .. })
        | (PathStep::Else(n), StmtKind::If { else_branch: body, .. }) => {
            replace_in_stmt(body.get_mut(*n)?, rest, new)?;
        }
        _ => return None,
    }
    Some(())
}

/// Applies one mutation at `location`; the result must pass the static checks.
pub fn apply_mutation(program: &Program, location: &AstPath, op: &MutationOp) -> Result<Program, MutationError> {
    let invalid = || MutationError::InvalidLocation(location.to_string());
    let node = expr_at(program, location).ok_or_else(invalid)?;
    let new = match (op, node) {
        (MutationOp::ReplaceBinary(new_op), Expr::Binary(_, l, r)) => Expr::Binary(*new_op, l.clone(), r.clone()),
        (MutationOp::ReplaceConst(c @ (Expr::Int(_) | Expr::Bool(_))), Expr::Int(_) | Expr::Bool(_)) => c.clone(),
        (MutationOp::InsertUnary(u), e) => Expr::unary(*u, e.clone()),
        (MutationOp::DeleteUnary, Expr::Unary(_, x)) => (**x).clone(),
        (MutationOp::ReplaceVar(v), Expr::Var(_)) => Expr::var(v.clone()),
        (MutationOp::ReplaceExpr(e), _) => e.clone(),
        _ => return Err(invalid()),
    };
    if &new == node {
        return Err(MutationError::NotAMutation);
    }
    let body = replace_in_stmts(&program.body, &location.0, &new, true).ok_or_else(invalid)?;
    let mutated = Program { body, ..program.clone() };
    check_program(&mutated).map_err(|e| MutationError::IllTypedMutation(e.to_string()))?;
    Ok(mutated)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutant {
    pub id: String,
    pub base: Program,
    pub location: AstPath,
    pub operator_class: OperatorClass,
    pub original: Expr,
    pub mutated: Expr,
    pub program: Program,
}

/// Serializable summary of a mutant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutantRecord {
    pub id: String,
    pub operator_class: OperatorClass,
    pub location: String,
    pub line: u32,
    pub original: String,
    pub mutated: String,
}

impl Mutant {
    /// Source line of the statement holding the mutated node.
    pub fn line(&self) -> u32 {
        stmt_of(&self.base.body, &self.location.0).map_or(0, |(s, _)| s.pos.line)
    }

    pub fn record(&self) -> MutantRecord {
        MutantRecord {
            id: self.id.clone(),
            operator_class: self.operator_class,
            location: self.location.to_string(),
            line: self.line(),
            original: self.original.to_string(),
            mutated: self.mutated.to_string(),
        }
    }

    /// Wraps a hand-written variant of `base`, locating the single changed node.
    pub fn from_programs(id: impl Into<String>, base: &Program, program: &Program) -> Result<Mutant, MutationError> {
        if base == program {
            return Err(MutationError::NotAMutation);
        }
        if base.name != program.name || base.inputs != program.inputs || base.outputs != program.outputs {
            return Err(MutationError::NotSinglePoint);
        }
        let location = diff_stmts(&base.body, &program.body, &AstPath::default(), PathStep::Body)?;
        check_program(program).map_err(|e| MutationError::IllTypedMutation(e.to_string()))?;
        let original = expr_at(base, &location).cloned().ok_or(MutationError::NotSinglePoint)?;
        let mutated = expr_at(program, &location).cloned().ok_or(MutationError::NotSinglePoint)?;
        Ok(Mutant {
            id: id.into(),
            base: base.clone(),
            location,
            operator_class: OperatorClass::Manual,
            original,
            mutated,
            program: program.clone(),
        })
    }
}

fn diff_stmts(a: &[Stmt], b: &[Stmt], at: &AstPath, step: fn(usize) -> PathStep) -> Result<AstPath, MutationError> {
    if a.len() != b.len() {
        return Err(MutationError::NotSinglePoint);
    }
    let mut found = None;
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        if x != y {
            if found.is_some() {
                return Err(MutationError::NotSinglePoint);
            }
            found = Some(diff_stmt(x, y, &at.with(step(i)))?);
        }
    }
    found.ok_or(MutationError::NotAMutation)
}

fn diff_stmt(a: &Stmt, b: &Stmt, at: &AstPath) -> Result<AstPath, MutationError> {
    use StmtKind::*;
    match (&a.kind, &b.kind) {
        (Decl { name: n1, ty: t1, init: e1 }, Decl { name: n2, ty: t2, init: e2 }) if n1 == n2 && t1 == t2 => {
            Ok(diff_expr(e1, e2, at.with(PathStep::Init)))
        }
        (Assign { target: t1, value: e1 }, Assign { target: t2, value: e2 }) if t1 == t2 => {
            Ok(diff_expr(e1, e2, at.with(PathStep::Value)))
        }
        (If { cond: c1, then_branch: t1, else_branch: f1 }, If { cond: c2, then_branch: t2, else_branch: f2 }) => {
            match (c1 != c2, t1 != t2, f1 != f2) {
                (true, false, false) => Ok(diff_expr(c1, c2, at.with(PathStep::Cond))),
                (false, true, false) => diff_stmts(t1, t2, at, PathStep::Then),
                (false, false, true) => diff_stmts(f1, f2, at, PathStep::Else),
                _ => Err(MutationError::NotSinglePoint),
            }
        }
        (While { cond: c1, body: b1 }, While { cond: c2, body: b2 }) => match (c1 != c2, b1 != b2) {
            (true, false) => Ok(diff_expr(c1, c2, at.with(PathStep::Cond))),
            (false, true) => diff_stmts(b1, b2, at, PathStep::Body),
            _ => Err(MutationError::NotSinglePoint),
        },
        _ => Err(MutationError::NotSinglePoint),
    }
}

/// Deepest node containing every difference between `a` and `b`.
fn diff_expr(a: &Expr, b: &Expr, at: AstPath) -> AstPath {
    match (a, b) {
        (Expr::Binary(o1, l1, r1), Expr::Binary(o2, l2, r2)) if o1 == o2 => match (l1 != l2, r1 != r2) {
            (true, false) => diff_expr(l1, l2, at.with(PathStep::Lhs)),
            (false, true) => diff_expr(r1, r2, at.with(PathStep::Rhs)),
            _ => at,
        },
        (Expr::Unary(u1, x1), Expr::Unary(u2, x2)) if u1 == u2 => diff_expr(x1, x2, at.with(PathStep::Operand)),
        _ => at,
    }
}

struct Site<'a> {
    path: AstPath,
    expr: &'a Expr,
    /// Operator of the enclosing unary node, if any.
    under: Option<UnOp>,
}

fn collect_sites<'a>(stmts: &'a [Stmt], at: &AstPath, step: fn(usize) -> PathStep, out: &mut Vec<Site<'a>>) {
    for (i, s) in stmts.iter().enumerate() {
        let here = at.with(step(i));
        match &s.kind {
            StmtKind::Decl { init, .. } => collect_expr(init, here.with(PathStep::Init), None, out),
            StmtKind::Assign { value, .. } => collect_expr(value, here.with(PathStep::Value), None, out),
            StmtKind::If { cond, then_branch, else_branch } => {
                collect_expr(cond, here.with(PathStep::Cond), None, out);
                collect_sites(then_branch, &here, PathStep::Then, out);
                collect_sites(else_branch, &here, PathStep::Else, out);
            }
            StmtKind::While { cond, body } => {
                collect_expr(cond, here.with(PathStep::Cond), None, out);
                collect_sites(body, &here, PathStep::Body, out);
            }
        }
    }
}

fn collect_expr<'a>(e: &'a Expr, at: AstPath, under: Option<UnOp>, out: &mut Vec<Site<'a>>) {
    out.push(Site { path: at.clone(), expr: e, under });
    match e {
        Expr::Binary(_, l, r) => {
            collect_expr(l, at.with(PathStep::Lhs), None, out);
            collect_expr(r, at.with(PathStep::Rhs), None, out);
        }
        Expr::Unary(u, x) => collect_expr(x, at.with(PathStep::Operand), Some(*u), out),
        _ => {}
    }
}

fn variables(program: &Program) -> Vec<(String, Type)> {
    fn walk(stmts: &[Stmt], out: &mut Vec<(String, Type)>) {
        for s in stmts {
            match &s.kind {
                StmtKind::Decl { name, ty, .. } => out.push((name.clone(), *ty)),
                StmtKind::If { then_branch, else_branch, .. } => {
                    walk(then_branch, out);
                    walk(else_branch, out);
                }
                StmtKind::While { body, .. } => walk(body, out),
                StmtKind::Assign { .. } => {}
            }
        }
    }
    let mut out: Vec<(String, Type)> =
        program.inputs.iter().chain(&program.outputs).map(|p| (p.name.clone(), p.ty)).collect();
    walk(&program.body, &mut out);
    let mut seen = HashSet::new();
    out.retain(|(n, _)| seen.insert(n.clone()));
    out
}

/// Candidate mutations at one node, in operator-table order.
fn candidates(program: &Program, site: &Site, vars: &[(String, Type)]) -> Vec<(OperatorClass, MutationOp)> {
    let e = site.expr;
    let mut out = Vec::new();
    if let Expr::Binary(op, ..) = e {
        let (class, family): (OperatorClass, &[BinOp]) = if op.is_arithmetic() {
            (OperatorClass::AOR, &BinOp::ARITHMETIC)
        } else if op.is_relational() {
            (OperatorClass::ROR, &BinOp::RELATIONAL)
        } else {
            (OperatorClass::COR, &BinOp::LOGICAL)
        };
        for alt in family.iter().filter(|o| *o != op) {
            out.push((class, MutationOp::ReplaceBinary(*alt)));
        }
    }
    // No insertion on constants, on unary nodes, or directly below the same operator.
    let insert = match (expr_type(program, e), e) {
        (_, Expr::Int(_) | Expr::Bool(_) | Expr::Unary(..)) => None,
        (Some(Type::Int), _) => Some(UnOp::Neg),
        (Some(Type::Bool), _) => Some(UnOp::Not),
        (None, _) => None,
    };
    if let Some(u) = insert.filter(|u| site.under != Some(*u)) {
        out.push((OperatorClass::UOI, MutationOp::InsertUnary(u)));
    }
    if let Expr::Unary(..) = e {
        out.push((OperatorClass::UOD, MutationOp::DeleteUnary));
    }
    match e {
        Expr::Int(c) => {
            let mut seen = vec![*c];
            for alt in [c.checked_add(1), c.checked_sub(1), Some(0), Some(1), c.checked_neg()].into_iter().flatten() {
                if !seen.contains(&alt) {
                    seen.push(alt);
                    out.push((OperatorClass::CRP, MutationOp::ReplaceConst(Expr::Int(alt))));
                }
            }
        }
        Expr::Bool(b) => out.push((OperatorClass::CRP, MutationOp::ReplaceConst(Expr::Bool(!b)))),
        Expr::Var(x) => {
            let ty = vars.iter().find(|(n, _)| n == x).map(|(_, t)| *t);
            for (n, t) in vars {
                if n != x && Some(*t) == ty {
                    out.push((OperatorClass::VRP, MutationOp::ReplaceVar(n.clone())));
                }
            }
        }
        _ => {}
    }
    out
}

/// All distinct, well-typed single-point mutants of `program` under `enabled`,
/// in AST pre-order and then operator-table order.
pub fn generate_mutants(program: &Program, enabled: &[OperatorClass]) -> Vec<Mutant> {
    let mut sites = Vec::new();
    collect_sites(&program.body, &AstPath::default(), PathStep::Body, &mut sites);
    let vars = variables(program);
    let mut seen: HashSet<Program> = HashSet::from([program.clone()]);
    let mut out = Vec::new();
    for site in sites {
        for (class, op) in candidates(program, &site, &vars) {
            if !enabled.contains(&class) {
                continue;
            }
            let Ok(mutated) = apply_mutation(program, &site.path, &op) else { continue };
            if !seen.insert(mutated.clone()) {
                continue;
            }
            let new_node = expr_at(&mutated, &site.path).cloned().unwrap_or(Expr::Bool(false));
            out.push(Mutant {
                id: format!("{}-{:03}", program.name, out.len() + 1),
                base: program.clone(),
                location: site.path.clone(),
                operator_class: class,
                original: site.expr.clone(),
                mutated: new_node,
                program: mutated,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, pretty_print};

    const MULT: &str = "program mult(input int a, input int b, output int res) {
  int i = 0;
  int res = 0;
  while (i < a) {
    res = res + b;
    i = i + 1;
  }
}
";

    fn mult() -> Program {
        parse(MULT).unwrap()
    }

    #[test]
    fn paths_round_trip() {
        let p: AstPath = "body[2].body[1].value.rhs".parse().unwrap();
        assert_eq!(p.to_string(), "body[2].body[1].value.rhs");
        assert_eq!(expr_at(&mult(), &p), Some(&Expr::Int(1)));
        assert!("body[x]".parse::<AstPath>().is_err());
    }

    #[test]
    fn running_example_mutant() {
        let loc: AstPath = "body[2].body[1].value.rhs".parse().unwrap();
        let m = apply_mutation(&mult(), &loc, &MutationOp::ReplaceConst(Expr::Int(2))).unwrap();
        assert_eq!(pretty_print(&m), pretty_print(&parse(&MULT.replace("i + 1", "i + 2")).unwrap()));
        assert_eq!(
            apply_mutation(&mult(), &loc, &MutationOp::ReplaceConst(Expr::Int(1))),
            Err(MutationError::NotAMutation)
        );
        let cond: AstPath = "body[2].cond".parse().unwrap();
        assert!(matches!(
            apply_mutation(&mult(), &cond, &MutationOp::ReplaceBinary(BinOp::And)),
            Err(MutationError::IllTypedMutation(_))
        ));
        assert!(matches!(
            apply_mutation(&mult(), &"body[9].cond".parse().unwrap(), &MutationOp::DeleteUnary),
            Err(MutationError::InvalidLocation(_))
        ));
    }

    #[test]
    fn aor_on_increment() {
        let ms = generate_mutants(&mult(), &[OperatorClass::AOR]);
        let texts: Vec<String> = ms.iter().map(|m| pretty_print(&m.program)).collect();
        assert!(texts.iter().any(|t| t.contains("i = i - 1;")));
        assert!(texts.iter().any(|t| t.contains("i = i * 1;")));
        assert_eq!(ms.len(), 8);
    }

    #[test]
    fn ror_on_loop_condition() {
        let ms = generate_mutants(&mult(), &[OperatorClass::ROR]);
        assert_eq!(ms.len(), 5);
        let ops: Vec<String> = ms.iter().map(|m| m.mutated.to_string()).collect();
        assert_eq!(ops, ["i <= a", "i > a", "i >= a", "i == a", "i != a"]);
        assert_eq!(ms[0].line(), 4);
        assert_eq!(ms[0].id, "mult-001");
    }

    #[test]
    fn nothing_to_mutate() {
        let p = parse("program t(input int a, output int r) { r = a; }").unwrap();
        let all = [OperatorClass::AOR, OperatorClass::ROR, OperatorClass::COR, OperatorClass::UOD, OperatorClass::CRP];
        assert!(generate_mutants(&p, &all).is_empty());
        assert_eq!(generate_mutants(&p, &[OperatorClass::UOI]).len(), 1);
    }

    #[test]
    fn crp_values() {
        let p = parse("program t(input int a, output int r) { r = a + 1; }").unwrap();
        let ms = generate_mutants(&p, &[OperatorClass::CRP]);
        let got: Vec<String> = ms.iter().map(|m| m.mutated.to_string()).collect();
        assert_eq!(got, ["2", "0", "-1"]);
        let p = parse("program t(input int a, output int r) { r = a * 3; }").unwrap();
        let got: Vec<String> =
            generate_mutants(&p, &[OperatorClass::CRP]).iter().map(|m| m.mutated.to_string()).collect();
        assert_eq!(got, ["4", "2", "0", "1", "-3"]);
    }

    #[test]
    fn unary_insertion_and_deletion() {
        let p = parse("program t(input int a, input bool f, output bool r) { r = not f and (-a < 0); }").unwrap();
        let ms = generate_mutants(&p, &[OperatorClass::UOI, OperatorClass::UOD]);
        let got: Vec<String> = ms.iter().map(|m| format!("{} {}", m.operator_class, m.mutated)).collect();
        assert_eq!(got, ["UOI not ((not f) and (-a < 0))", "UOD f", "UOI not (-a < 0)", "UOD a"]);
        for m in &ms {
            assert_eq!(parse(&pretty_print(&m.program)).unwrap(), m.program);
        }
    }

    #[test]
    fn every_mutant_is_single_point_and_reparses() {
        let mut classes = OperatorClass::DEFAULT.to_vec();
        classes.push(OperatorClass::VRP);
        let ms = generate_mutants(&mult(), &classes);
        assert!(ms.iter().any(|m| m.operator_class == OperatorClass::VRP));
        let mut ids = HashSet::new();
        for m in &ms {
            assert!(ids.insert(m.id.clone()));
            assert_eq!(parse(&pretty_print(&m.program)).unwrap(), m.program);
            let back = Mutant::from_programs("x", &m.base, &m.program).unwrap();
            assert!(
                back.location.0.starts_with(&m.location.0) || m.location.0.starts_with(&back.location.0),
                "{} vs {}",
                back.location,
                m.location
            );
            assert_ne!(m.program, m.base);
        }
    }

    #[test]
    fn manual_mutant_location() {
        let m = parse(&MULT.replace("i + 1", "i + 2")).unwrap();
        let mutant = Mutant::from_programs("mult-manual", &mult(), &m).unwrap();
        assert_eq!(mutant.location.to_string(), "body[2].body[1].value.rhs");
        assert_eq!(mutant.operator_class, OperatorClass::Manual);
        let two = parse(&MULT.replace("i + 1", "i + 2").replace("res + b", "res - b")).unwrap();
        assert_eq!(Mutant::from_programs("x", &mult(), &two), Err(MutationError::NotSinglePoint));
    }
}
