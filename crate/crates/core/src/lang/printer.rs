//! Canonical pretty-printer.
//!
//! Binary operations are parenthesized everywhere except at the root of a
//! statement's expression, so the output never depends on precedence rules.

use std::fmt::{self, Write};

use super::ast::{Expr, Program, Stmt, StmtKind, UnOp};

const INDENT: &str = "  ";

/// Writes `e` in canonical form; `nested` adds parentheses around a binary root.
pub fn write_expr(out: &mut impl Write, e: &Expr, nested: bool) -> fmt::Result {
    match e {
        Expr::Int(v) => write!(out, "{v}"),
        Expr::Bool(b) => write!(out, "{b}"),
        Expr::Var(name) => out.write_str(name),
        Expr::Binary(op, lhs, rhs) => {
            if nested {
                out.write_char('(')?;
            }
            write_expr(out, lhs, true)?;
            write!(out, " {} ", op.symbol())?;
            write_expr(out, rhs, true)?;
            if nested {
                out.write_char(')')?;
            }
            Ok(())
        }
        Expr::Unary(UnOp::Neg, operand) => {
            out.write_char('-')?;
            match operand.as_ref() {
                // `-(3)` keeps the negation distinct from the literal `-3`.
                Expr::Int(_) | Expr::Unary(..) => {
                    out.write_char('(')?;
                    write_expr(out, operand, false)?;
                    out.write_char(')')
                }
                _ => write_expr(out, operand, true),
            }
        }
        // `not` binds looser than comparisons, so it needs parentheses as an operand.
        Expr::Unary(UnOp::Not, operand) => {
            if nested {
                out.write_char('(')?;
            }
            out.write_str("not ")?;
            write_expr(out, operand, true)?;
            if nested {
                out.write_char(')')?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, false)
    }
}

pub fn write_stmts(out: &mut impl Write, stmts: &[Stmt], depth: usize) -> fmt::Result {
    for stmt in stmts {
        write_stmt(out, stmt, depth)?;
    }
    Ok(())
}

fn write_stmt(out: &mut impl Write, stmt: &Stmt, depth: usize) -> fmt::Result {
    let pad = INDENT.repeat(depth);
    match &stmt.kind {
        StmtKind::Decl { name, ty, init } => writeln!(out, "{pad}{ty} {name} = {init};"),
        StmtKind::Assign { target, value } => writeln!(out, "{pad}{target} = {value};"),
        StmtKind::If { cond, then_branch, else_branch } => {
            writeln!(out, "{pad}if ({cond}) {{")?;
            write_stmts(out, then_branch, depth + 1)?;
            if else_branch.is_empty() {
                writeln!(out, "{pad}}}")
            } else {
                writeln!(out, "{pad}}} else {{")?;
                write_stmts(out, else_branch, depth + 1)?;
                writeln!(out, "{pad}}}")
            }
        }
        StmtKind::While { cond, body } => {
            writeln!(out, "{pad}while ({cond}) {{")?;
            write_stmts(out, body, depth + 1)?;
            writeln!(out, "{pad}}}")
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_stmt(f, self, 0)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .inputs
            .iter()
            .map(|p| format!("input {} {}", p.ty, p.name))
            .chain(self.outputs.iter().map(|p| format!("output {} {}", p.ty, p.name)))
            .collect();
        writeln!(f, "program {}({}) {{", self.name, params.join(", "))?;
        write_stmts(f, &self.body, 1)?;
        writeln!(f, "}}")
    }
}

/// Canonical source text of a program.
pub fn pretty_print(program: &Program) -> String {
    program.to_string()
}
