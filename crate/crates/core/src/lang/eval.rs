//! Checked expression evaluation shared by every execution engine.
//!
//! `and` / `or` short-circuit. Every integer produced, literals included,
//! must lie inside the domain. Division truncates toward zero.

use thiserror::Error;

use super::ast::{BinOp, Expr, UnOp};
use super::env::Value;
use crate::domain::DomainConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalFault {
    #[error("value {0} leaves the integer domain")]
    Overflow(i128),
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable `{0}` has no value")]
    Unbound(String),
    #[error("operand has the wrong type")]
    IllTyped,
}

pub fn eval_expr(e: &Expr, lookup: &impl Fn(&str) -> Option<Value>, domain: &DomainConfig) -> Result<Value, EvalFault> {
    match e {
        Expr::Int(v) => in_domain(*v as i128, domain).map(Value::Int),
        Expr::Bool(b) => Ok(Value::Bool(*b)),
        Expr::Var(name) => lookup(name).ok_or_else(|| EvalFault::Unbound(name.clone())),
        Expr::Unary(UnOp::Neg, operand) => {
            let v = int(eval_expr(operand, lookup, domain)?)?;
            in_domain(-(v as i128), domain).map(Value::Int)
        }
        Expr::Unary(UnOp::Not, operand) => Ok(Value::Bool(!boolean(eval_expr(operand, lookup, domain)?)?)),
        Expr::Binary(BinOp::And, lhs, rhs) => {
            if !boolean(eval_expr(lhs, lookup, domain)?)? {
                return Ok(Value::Bool(false));
            }
            Ok(Value::Bool(boolean(eval_expr(rhs, lookup, domain)?)?))
        }
        Expr::Binary(BinOp::Or, lhs, rhs) => {
            if boolean(eval_expr(lhs, lookup, domain)?)? {
                return Ok(Value::Bool(true));
            }
            Ok(Value::Bool(boolean(eval_expr(rhs, lookup, domain)?)?))
        }
        Expr::Binary(op, lhs, rhs) => {
            let l = eval_expr(lhs, lookup, domain)?;
            let r = eval_expr(rhs, lookup, domain)?;
            match (op, l, r) {
                (BinOp::Eq, l, r) => Ok(Value::Bool(same_type(l, r)? && l == r)),
                (BinOp::Ne, l, r) => Ok(Value::Bool(same_type(l, r)? && l != r)),
                (_, Value::Int(a), Value::Int(b)) => apply_int(*op, a, b, domain),
                _ => Err(EvalFault::IllTyped),
            }
        }
    }
}

fn same_type(l: Value, r: Value) -> Result<bool, EvalFault> {
    if l.ty() == r.ty() {
        Ok(true)
    } else {
        Err(EvalFault::IllTyped)
    }
}

fn int(v: Value) -> Result<i64, EvalFault> {
    v.as_int().ok_or(EvalFault::IllTyped)
}

fn boolean(v: Value) -> Result<bool, EvalFault> {
    v.as_bool().ok_or(EvalFault::IllTyped)
}

fn in_domain(v: i128, domain: &DomainConfig) -> Result<i64, EvalFault> {
    if (domain.int_min as i128) <= v && v <= domain.int_max as i128 {
        Ok(v as i64)
    } else {
        Err(EvalFault::Overflow(v))
    }
}

/// Integer binary operation with domain checking; `a` and `b` are already in domain.
pub fn apply_int(op: BinOp, a: i64, b: i64, domain: &DomainConfig) -> Result<Value, EvalFault> {
    let (a, b) = (a as i128, b as i128);
    let v = match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a.checked_mul(b).ok_or(EvalFault::Overflow(i128::MAX))?,
        BinOp::Div | BinOp::Rem if b == 0 => return Err(EvalFault::DivisionByZero),
        BinOp::Div => a / b,
        BinOp::Rem => a % b,
        BinOp::Lt => return Ok(Value::Bool(a < b)),
        BinOp::Le => return Ok(Value::Bool(a <= b)),
        BinOp::Gt => return Ok(Value::Bool(a > b)),
        BinOp::Ge => return Ok(Value::Bool(a >= b)),
        BinOp::Eq => return Ok(Value::Bool(a == b)),
        BinOp::Ne => return Ok(Value::Bool(a != b)),
        BinOp::And | BinOp::Or => return Err(EvalFault::IllTyped),
    };
    in_domain(v, domain).map(Value::Int)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(e: &Expr) -> Result<Value, EvalFault> {
        eval_expr(e, &|_| None, &DomainConfig::range(-8, 7).unwrap())
    }

    #[test]
    fn truncating_division() {
        let d = |a, b| eval(&Expr::binary(BinOp::Div, Expr::Int(a), Expr::Int(b)));
        let r = |a, b| eval(&Expr::binary(BinOp::Rem, Expr::Int(a), Expr::Int(b)));
        assert_eq!(d(-7, 2), Ok(Value::Int(-3)));
        assert_eq!(r(-7, 2), Ok(Value::Int(-1)));
        assert_eq!(r(7, -2), Ok(Value::Int(1)));
        assert_eq!(d(1, 0), Err(EvalFault::DivisionByZero));
        assert_eq!(d(-8, -1), Err(EvalFault::Overflow(8)));
    }

    #[test]
    fn overflow_is_reported_for_every_intermediate() {
        let e = Expr::binary(BinOp::Sub, Expr::binary(BinOp::Add, Expr::Int(5), Expr::Int(5)), Expr::Int(6));
        assert_eq!(eval(&e), Err(EvalFault::Overflow(10)));
        assert_eq!(eval(&Expr::Int(9)), Err(EvalFault::Overflow(9)));
        assert_eq!(eval(&Expr::unary(UnOp::Neg, Expr::Int(-8))), Err(EvalFault::Overflow(8)));
    }

    #[test]
    fn connectives_short_circuit() {
        let boom = Expr::binary(BinOp::Eq, Expr::binary(BinOp::Div, Expr::Int(1), Expr::Int(0)), Expr::Int(0));
        assert_eq!(eval(&Expr::and(Expr::Bool(false), boom.clone())), Ok(Value::Bool(false)));
        assert_eq!(eval(&Expr::binary(BinOp::Or, Expr::Bool(true), boom.clone())), Ok(Value::Bool(true)));
        assert_eq!(eval(&Expr::and(Expr::Bool(true), boom)), Err(EvalFault::DivisionByZero));
    }
}
