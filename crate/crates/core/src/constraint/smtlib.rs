//! SMT-LIB 2 export over bounded integers.
//!
//! Each constraint becomes one assertion that also carries the side
//! conditions of its expressions (no intermediate leaves the integer range,
//! no divisor is zero), placed under the same short-circuit context in which
//! the evaluator would meet them. Division and remainder truncate toward zero.

use std::fmt::Write;

use super::{Constraint, ConstraintSystem, VarDomain};
use crate::lang::{BinOp, Expr, UnOp, Value};
use crate::ssa::default_value;

const PRELUDE: &str = "\
(define-fun tdiv ((a Int) (b Int)) Int
  (ite (>= a 0)
    (ite (> b 0) (div a b) (- (div a (- b))))
    (ite (> b 0) (- (div (- a) b)) (div (- a) (- b)))))
(define-fun trem ((a Int) (b Int)) Int (- a (* b (tdiv a b))))
";

const RESERVED: &[&str] = &["div", "mod", "abs", "ite", "tdiv", "trem", "distinct", "let", "not", "or", "xor"];

fn sym(name: &str) -> String {
    if RESERVED.contains(&name) {
        format!("|{name}|")
    } else {
        name.to_string()
    }
}

fn int(v: i128) -> String {
    if v < 0 {
        format!("(- {})", -v)
    } else {
        v.to_string()
    }
}

fn value(v: Value) -> String {
    match v {
        Value::Int(x) => int(x as i128),
        Value::Bool(b) => b.to_string(),
    }
}

fn conj(parts: Vec<String>) -> String {
    match parts.len() {
        0 => "true".to_string(),
        1 => parts.into_iter().next().unwrap_or_default(),
        _ => format!("(and {})", parts.join(" ")),
    }
}

struct Emitter {
    min: i128,
    max: i128,
}

impl Emitter {
    fn in_range(&self, term: &str) -> String {
        format!("(<= {} {term} {})", int(self.min), int(self.max))
    }

    fn term(&self, e: &Expr) -> String {
        match e {
            Expr::Int(v) => int(*v as i128),
            Expr::Bool(b) => b.to_string(),
            Expr::Var(n) => sym(n),
            Expr::Unary(UnOp::Neg, x) => format!("(- {})", self.term(x)),
            Expr::Unary(UnOp::Not, x) => format!("(not {})", self.term(x)),
            Expr::Binary(op, l, r) => {
                let (l, r) = (self.term(l), self.term(r));
                let f = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "tdiv",
                    BinOp::Rem => "trem",
                    BinOp::Lt => "<",
                    BinOp::Le => "<=",
                    BinOp::Gt => ">",
                    BinOp::Ge => ">=",
                    BinOp::Eq => "=",
                    BinOp::Ne => "distinct",
                    BinOp::And => "and",
                    BinOp::Or => "or",
                };
                format!("({f} {l} {r})")
            }
        }
    }

    /// Conditions under which evaluating `e` does not fail.
    fn defined(&self, e: &Expr) -> Vec<String> {
        match e {
            Expr::Int(v) => {
                if (self.min..=self.max).contains(&(*v as i128)) {
                    Vec::new()
                } else {
                    vec!["false".to_string()]
                }
            }
            Expr::Bool(_) | Expr::Var(_) => Vec::new(),
            Expr::Unary(UnOp::Not, x) => self.defined(x),
            Expr::Unary(UnOp::Neg, x) => {
                let mut d = self.defined(x);
                d.push(self.in_range(&self.term(e)));
                d
            }
            Expr::Binary(BinOp::And, l, r) | Expr::Binary(BinOp::Or, l, r) => {
                let mut d = self.defined(l);
                let rd = self.defined(r);
                if !rd.is_empty() {
                    let lt = self.term(l);
                    let guard = if matches!(e, Expr::Binary(BinOp::And, ..)) { format!("(not {lt})") } else { lt };
                    d.push(format!("(or {guard} {})", conj(rd)));
                }
                d
            }
            Expr::Binary(op, l, r) => {
                let mut d = self.defined(l);
                d.extend(self.defined(r));
                if matches!(op, BinOp::Div | BinOp::Rem) {
                    d.push(format!("(not (= {} 0))", self.term(r)));
                }
                if op.is_arithmetic() {
                    d.push(self.in_range(&self.term(e)));
                }
                d
            }
        }
    }

    fn assertion(&self, cs: &ConstraintSystem, c: &Constraint) -> String {
        match c {
            Constraint::Eq { var, expr, active: None } => {
                let mut parts = self.defined(expr);
                parts.push(format!("(= {} {})", sym(var), self.term(expr)));
                conj(parts)
            }
            Constraint::Eq { var, expr, active: Some(g) } => {
                let default = value(default_value(cs.vars[var].ty(), &cs.arith));
                let g_term = self.term(g);
                let mut parts = self.defined(g);
                parts.push(format!("(= {} (ite {g_term} {} {default}))", sym(var), self.term(expr)));
                let d = self.defined(expr);
                if !d.is_empty() {
                    parts.push(format!("(=> {g_term} {})", conj(d)));
                }
                conj(parts)
            }
            Constraint::PhiEq { var, guard, then_var, else_var } => {
                let mut parts = self.defined(guard);
                parts.push(format!("(= {} (ite {} {} {}))", sym(var), self.term(guard), sym(then_var), sym(else_var)));
                conj(parts)
            }
            Constraint::InputTie { var, var_m } => format!("(= {} {})", sym(var), sym(var_m)),
            Constraint::OutputDiffers { pairs } => {
                let parts: Vec<String> =
                    pairs.iter().map(|(a, b)| format!("(distinct {} {})", sym(a), sym(b))).collect();
                match parts.len() {
                    0 => "false".to_string(),
                    1 => parts[0].clone(),
                    _ => format!("(or {})", parts.join(" ")),
                }
            }
            Constraint::Blocking { forbidden } => {
                let parts: Vec<String> =
                    forbidden.iter().map(|(k, v)| format!("(= {} {})", sym(k), value(v))).collect();
                format!("(not {})", conj(parts))
            }
            Constraint::FlagValue { var, value } => format!("(= {} {value})", sym(var)),
            Constraint::Require { expr } => {
                let mut parts = self.defined(expr);
                parts.push(self.term(expr));
                conj(parts)
            }
        }
    }
}

/// Deterministic SMT-LIB 2 text with the same satisfiability as `cs`.
pub fn export_smtlib(cs: &ConstraintSystem) -> String {
    let em = Emitter { min: cs.arith.int_min as i128, max: cs.arith.int_max as i128 };
    let mut out = String::new();
    let _ = writeln!(out, "; {} variables, {} constraints", cs.vars.len(), cs.constraints.len());
    out.push_str("(set-logic QF_NIA)\n");
    if !cs.constraints.is_empty() {
        out.push_str(PRELUDE);
    }
    for (name, dom) in &cs.vars {
        match dom {
            VarDomain::Int { min, max } => {
                let _ = writeln!(out, "(declare-const {} Int)", sym(name));
                let _ = writeln!(out, "(assert (<= {} {} {}))", int(*min as i128), sym(name), int(*max as i128));
            }
            VarDomain::Bool => {
                let _ = writeln!(out, "(declare-const {} Bool)", sym(name));
            }
        }
    }
    for c in &cs.constraints {
        let _ = writeln!(out, "; {c}");
        let _ = writeln!(out, "(assert {})", em.assertion(cs, c));
    }
    out.push_str("(check-sat)\n");
    out
}
