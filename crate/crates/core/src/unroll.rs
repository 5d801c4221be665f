//! Loop elimination by bounded unrolling.
//!
//! Every `while (c) { B }` becomes `U(nd)` where
//! `U(k) = if (c) { B; U(k-1) }` and `U(0) = if (c) { loop_i = true; }`.
//! The flag `loop_i` therefore ends `true` exactly when some entry into the
//! loop would have needed more than `nd` iterations.

use std::collections::HashMap;

use thiserror::Error;

use crate::lang::{Expr, Pos, Program, Stmt, StmtKind, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnrollError {
    #[error("nesting depth must be at least 1")]
    ZeroDepth,
}

/// A program without `while` statements plus one overflow flag per removed loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopFreeProgram {
    /// Same header as the source program; the body starts with the flag declarations.
    pub program: Program,
    pub loop_flags: Vec<String>,
    pub nd: u32,
}

impl LoopFreeProgram {
    pub fn body(&self) -> &[Stmt] {
        &self.program.body
    }
}

/// Flag names for every loop of `body`, in pre-order.
fn name_loops(body: &[Stmt]) -> Vec<String> {
    fn walk(stmts: &[Stmt], lines: &mut Vec<u32>) {
        for s in stmts {
            match &s.kind {
                StmtKind::If { then_branch, else_branch, .. } => {
                    walk(then_branch, lines);
                    walk(else_branch, lines);
                }
                StmtKind::While { body, .. } => {
                    lines.push(s.pos.line);
                    walk(body, lines);
                }
                _ => {}
            }
        }
    }
    let mut lines = Vec::new();
    walk(body, &mut lines);
    let mut seen: HashMap<u32, usize> = HashMap::new();
    lines
        .into_iter()
        .map(|line| {
            let n = seen.entry(line).or_insert(0);
            *n += 1;
            if *n == 1 {
                format!("loop_{line}")
            } else {
                format!("loop_{line}_{n}")
            }
        })
        .collect()
}

struct Expander<'a> {
    nd: u32,
    flags: &'a [String],
    next: usize,
}

impl Expander<'_> {
    fn block(&mut self, stmts: &[Stmt]) -> Vec<Stmt> {
        stmts.iter().map(|s| self.stmt(s)).collect()
    }

    fn stmt(&mut self, stmt: &Stmt) -> Stmt {
        match &stmt.kind {
            StmtKind::If { cond, then_branch, else_branch } => Stmt::new(
                stmt.pos,
                StmtKind::If {
                    cond: cond.clone(),
                    then_branch: self.block(then_branch),
                    else_branch: self.block(else_branch),
                },
            ),
            StmtKind::While { cond, body } => {
                let flag = self.flags[self.next].clone();
                self.next += 1;
                let body = self.block(body);
                unfold(stmt.pos, cond, &body, &flag, self.nd)
            }
            _ => stmt.clone(),
        }
    }
}

fn unfold(pos: Pos, cond: &Expr, body: &[Stmt], flag: &str, k: u32) -> Stmt {
    let then_branch = if k == 0 {
        vec![Stmt::new(pos, StmtKind::Assign { target: flag.to_string(), value: Expr::Bool(true) })]
    } else {
        let mut b = body.to_vec();
        b.push(unfold(pos, cond, body, flag, k - 1));
        b
    };
    Stmt::new(pos, StmtKind::If { cond: cond.clone(), then_branch, else_branch: Vec::new() })
}

/// Replaces every loop of `program` by nested conditionals of depth `nd`.
pub fn eliminate_loops(program: &Program, nd: u32) -> Result<LoopFreeProgram, UnrollError> {
    if nd == 0 {
        return Err(UnrollError::ZeroDepth);
    }
    let flags = name_loops(&program.body);
    let mut expander = Expander { nd, flags: &flags, next: 0 };
    let mut body: Vec<Stmt> = flags.iter().map(|f| Stmt::decl(f.clone(), Type::Bool, Expr::Bool(false))).collect();
    body.extend(expander.block(&program.body));
    Ok(LoopFreeProgram { program: Program { body, ..program.clone() }, loop_flags: flags, nd })
}

/// Loop flags in declaration order.
pub fn flag_variables(lfp: &LoopFreeProgram) -> &[String] {
    &lfp.loop_flags
}
