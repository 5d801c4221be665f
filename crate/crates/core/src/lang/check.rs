//! Static checks: typing, scoping and definite assignment.

use std::collections::{HashMap, HashSet};

use super::ast::{Expr, Pos, Program, Stmt, StmtKind, Type};
use super::error::FrontendError;

/// Names of the form `loop_<digits>` belong to loop-overflow flags.
pub fn is_reserved(name: &str) -> bool {
    name.strip_prefix("loop_")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit() || b == b'_'))
}

struct Checker<'p> {
    program: &'p Program,
    scopes: Vec<HashMap<String, Type>>,
}

impl<'p> Checker<'p> {
    fn lookup(&self, name: &str) -> Option<Type> {
        if let Some(p) = self.program.input(name).or_else(|| self.program.output(name)) {
            return Some(p.ty);
        }
        self.scopes.iter().rev().find_map(|s| s.get(name).copied())
    }

    fn block(&mut self, stmts: &[Stmt], assigned: &mut HashSet<String>) -> Result<(), FrontendError> {
        self.scopes.push(HashMap::new());
        for stmt in stmts {
            self.stmt(stmt, assigned)?;
        }
        self.scopes.pop();
        Ok(())
    }

    fn stmt(&mut self, stmt: &Stmt, assigned: &mut HashSet<String>) -> Result<(), FrontendError> {
        let pos = stmt.pos;
        match &stmt.kind {
            StmtKind::Decl { name, ty, init } => {
                if is_reserved(name) {
                    return Err(FrontendError::ReservedName { name: name.clone(), line: pos.line, col: pos.col });
                }
                let found = self.expr(init, assigned, pos)?;
                expect(*ty, found, pos, || format!("initializer of `{name}`"))?;
                if let Some(out) = self.program.output(name) {
                    expect(out.ty, *ty, pos, || format!("declaration of output `{name}`"))?;
                } else if self.lookup(name).is_some() {
                    return Err(FrontendError::Redeclared { name: name.clone(), line: pos.line, col: pos.col });
                } else {
                    self.scopes.last_mut().expect("scope").insert(name.clone(), *ty);
                }
                assigned.insert(name.clone());
            }
            StmtKind::Assign { target, value } => {
                let Some(ty) = self.lookup(target) else {
                    return Err(FrontendError::UndeclaredVariable {
                        name: target.clone(),
                        line: pos.line,
                        col: pos.col,
                    });
                };
                let found = self.expr(value, assigned, pos)?;
                expect(ty, found, pos, || format!("assignment to `{target}`"))?;
                assigned.insert(target.clone());
            }
            StmtKind::If { cond, then_branch, else_branch } => {
                let found = self.expr(cond, assigned, pos)?;
                expect(Type::Bool, found, pos, || "condition of `if`".to_string())?;
                if then_branch.is_empty() && else_branch.is_empty() {
                    return Err(FrontendError::Unsupported {
                        construct: "conditional with empty branches".to_string(),
                        line: pos.line,
                        col: pos.col,
                    });
                }
                let mut then_assigned = assigned.clone();
                self.block(then_branch, &mut then_assigned)?;
                let mut else_assigned = assigned.clone();
                self.block(else_branch, &mut else_assigned)?;
                *assigned = then_assigned.intersection(&else_assigned).cloned().collect();
            }
            StmtKind::While { cond, body } => {
                let found = self.expr(cond, assigned, pos)?;
                expect(Type::Bool, found, pos, || "condition of `while`".to_string())?;
                let mut body_assigned = assigned.clone();
                self.block(body, &mut body_assigned)?;
            }
        }
        Ok(())
    }

    fn expr(&self, e: &Expr, assigned: &HashSet<String>, pos: Pos) -> Result<Type, FrontendError> {
        match e {
            Expr::Int(_) => Ok(Type::Int),
            Expr::Bool(_) => Ok(Type::Bool),
            Expr::Var(name) => {
                let Some(ty) = self.lookup(name) else {
                    return Err(FrontendError::UndeclaredVariable { name: name.clone(), line: pos.line, col: pos.col });
                };
                if !assigned.contains(name) {
                    return Err(FrontendError::UseBeforeAssignment {
                        name: name.clone(),
                        line: pos.line,
                        col: pos.col,
                    });
                }
                Ok(ty)
            }
            Expr::Binary(op, lhs, rhs) => {
                let (operand, result) = op.signature();
                let l = self.expr(lhs, assigned, pos)?;
                expect(operand, l, pos, || format!("left operand of `{op}`"))?;
                let r = self.expr(rhs, assigned, pos)?;
                expect(operand, r, pos, || format!("right operand of `{op}`"))?;
                Ok(result)
            }
            Expr::Unary(op, operand) => {
                let t = self.expr(operand, assigned, pos)?;
                expect(op.operand_type(), t, pos, || format!("operand of `{}`", op.symbol()))?;
                Ok(op.operand_type())
            }
        }
    }
}

fn expect(expected: Type, found: Type, pos: Pos, context: impl FnOnce() -> String) -> Result<(), FrontendError> {
    if expected == found {
        Ok(())
    } else {
        Err(FrontendError::Type { line: pos.line, col: pos.col, context: context(), expected, found })
    }
}

/// Checks every static invariant of a program.
pub fn check_program(program: &Program) -> Result<(), FrontendError> {
    let mut seen = HashSet::new();
    for param in program.inputs.iter().chain(&program.outputs) {
        if is_reserved(&param.name) {
            return Err(FrontendError::ReservedName { name: param.name.clone(), line: 1, col: 1 });
        }
        if !seen.insert(param.name.as_str()) {
            return Err(FrontendError::Redeclared { name: param.name.clone(), line: 1, col: 1 });
        }
    }
    let mut checker = Checker { program, scopes: Vec::new() };
    let mut assigned: HashSet<String> = program.inputs.iter().map(|p| p.name.clone()).collect();
    checker.block(&program.body, &mut assigned)?;
    for out in &program.outputs {
        if !assigned.contains(&out.name) {
            return Err(FrontendError::OutputNotAssigned { name: out.name.clone() });
        }
    }
    Ok(())
}

/// Type of `e` under the program's declarations, ignoring assignment state.
///
/// Locals are resolved by name anywhere in the body.
pub fn expr_type(program: &Program, e: &Expr) -> Option<Type> {
    fn locals(stmts: &[Stmt], out: &mut HashMap<String, Type>) {
        for s in stmts {
            match &s.kind {
                StmtKind::Decl { name, ty, .. } => {
                    out.insert(name.clone(), *ty);
                }
                StmtKind::If { then_branch, else_branch, .. } => {
                    locals(then_branch, out);
                    locals(else_branch, out);
                }
                StmtKind::While { body, .. } => locals(body, out),
                StmtKind::Assign { .. } => {}
            }
        }
    }
    let mut types: HashMap<String, Type> = HashMap::new();
    locals(&program.body, &mut types);
    for p in program.inputs.iter().chain(&program.outputs) {
        types.insert(p.name.clone(), p.ty);
    }
    infer(e, &types)
}

fn infer(e: &Expr, types: &HashMap<String, Type>) -> Option<Type> {
    match e {
        Expr::Int(_) => Some(Type::Int),
        Expr::Bool(_) => Some(Type::Bool),
        Expr::Var(name) => types.get(name).copied(),
        Expr::Binary(op, lhs, rhs) => {
            let (operand, result) = op.signature();
            (infer(lhs, types)? == operand && infer(rhs, types)? == operand).then_some(result)
        }
        Expr::Unary(op, operand) => (infer(operand, types)? == op.operand_type()).then_some(op.operand_type()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_unchecked;

    fn check(src: &str) -> Result<(), FrontendError> {
        check_program(&parse_unchecked(src).unwrap())
    }

    #[test]
    fn accepts_mult() {
        check(
            "program mult(input int a, input int b, output int res) {
               int i = 0; int res = 0;
               while (i < a) { res = res + b; i = i + 1; }
             }",
        )
        .unwrap();
    }

    #[test]
    fn type_errors() {
        let err = check("program t(input int a, output int r) { r = a < 1; }").unwrap_err();
        assert!(matches!(err, FrontendError::Type { expected: Type::Int, found: Type::Bool, .. }), "{err}");
        let err = check("program t(input int a, output int r) { if (a) { r = 1; } else { r = 2; } }").unwrap_err();
        assert!(matches!(err, FrontendError::Type { expected: Type::Bool, found: Type::Int, .. }), "{err}");
        let err = check("program t(input int a, output bool r) { r = a and true; }").unwrap_err();
        assert!(matches!(err, FrontendError::Type { .. }), "{err}");
    }

    #[test]
    fn undeclared_and_unassigned() {
        let err = check("program t(input int a, output int r) { r = z; }").unwrap_err();
        assert!(matches!(err, FrontendError::UndeclaredVariable { ref name, .. } if name == "z"));
        let err = check("program t(input int a, output int r) { r = r + 1; }").unwrap_err();
        assert!(matches!(err, FrontendError::UseBeforeAssignment { ref name, .. } if name == "r"));
        let err = check("program t(input int a, output int r) { if (a > 0) { r = 1; } }").unwrap_err();
        assert_eq!(err, FrontendError::OutputNotAssigned { name: "r".into() });
        let err = check("program t(input int a, output int r) { while (a > 0) { r = 1; a = a - 1; } }").unwrap_err();
        assert_eq!(err, FrontendError::OutputNotAssigned { name: "r".into() });
    }

    #[test]
    fn block_scoping() {
        check("program t(input int a, output int r) { if (a > 0) { int t = 1; r = t; } else { int t = 2; r = t; } }")
            .unwrap();
        let err =
            check("program t(input int a, output int r) { if (a > 0) { int t = 1; } else { int t = 1; } r = t; }")
                .unwrap_err();
        assert!(matches!(err, FrontendError::UndeclaredVariable { .. }));
        let err = check("program t(input int a, output int r) { int a = 1; r = a; }").unwrap_err();
        assert!(matches!(err, FrontendError::Redeclared { .. }));
    }

    #[test]
    fn reserved_and_empty_conditionals() {
        let err = check("program t(input int a, output int r) { int loop_3 = 1; r = loop_3; }").unwrap_err();
        assert!(matches!(err, FrontendError::ReservedName { .. }));
        let err = check("program t(input int a, output int r) { r = 1; if (a > 0) { } }").unwrap_err();
        assert!(matches!(err, FrontendError::Unsupported { .. }));
        assert!(is_reserved("loop_12"));
        assert!(!is_reserved("loop_"));
        assert!(!is_reserved("loopy"));
    }
}
