//! Tree-walking interpreter.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::ast::{Program, Stmt, StmtKind, Type};
use super::env::{TestCase, TestOutcome, Value, VariableEnvironment};
use super::eval::{eval_expr, EvalFault};
use crate::domain::DomainConfig;

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("no termination within {0} statement executions")]
    NonTermination(u64),
    #[error("line {line}: value {value} leaves the integer domain")]
    DomainOverflow { line: u32, value: i128 },
    #[error("line {line}: division by zero")]
    DivisionByZero { line: u32 },
    #[error("line {line}: `{name}` read before assignment")]
    Uninitialized { line: u32, name: String },
    #[error("line {line}: ill-typed operation")]
    IllTyped { line: u32 },
    #[error("input `{0}` is not bound")]
    MissingInput(String),
    #[error("`{0}` is not a declared input")]
    UnknownInput(String),
    #[error("input `{name}` expects a value of type {expected}")]
    InputType { name: String, expected: Type },
    #[error("input `{name}` = {value} lies outside the integer domain")]
    InputOutOfDomain { name: String, value: i64 },
}

impl ExecError {
    fn at(fault: EvalFault, line: u32) -> ExecError {
        match fault {
            EvalFault::Overflow(value) => ExecError::DomainOverflow { line, value },
            EvalFault::DivisionByZero => ExecError::DivisionByZero { line },
            EvalFault::Unbound(name) => ExecError::Uninitialized { line, name },
            EvalFault::IllTyped => ExecError::IllTyped { line },
        }
    }
}

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    /// Final values of every variable that was ever assigned.
    pub env: VariableEnvironment,
    /// Final values of the declared outputs.
    pub outputs: VariableEnvironment,
    /// Per loop (keyed by source line and column): the largest number of
    /// body executions observed for any single entry into the loop.
    pub loop_iterations: BTreeMap<(u32, u32), u64>,
    pub steps: u64,
}

impl Execution {
    pub fn max_iterations(&self) -> u64 {
        self.loop_iterations.values().copied().max().unwrap_or(0)
    }
}

struct Machine<'a> {
    domain: &'a DomainConfig,
    vars: HashMap<String, Value>,
    steps: u64,
    max_steps: u64,
    loops: BTreeMap<(u32, u32), u64>,
}

impl Machine<'_> {
    fn tick(&mut self) -> Result<(), ExecError> {
        self.steps += 1;
        if self.steps > self.max_steps {
            Err(ExecError::NonTermination(self.max_steps))
        } else {
            Ok(())
        }
    }

    fn eval(&self, e: &super::ast::Expr, line: u32) -> Result<Value, ExecError> {
        eval_expr(e, &|name| self.vars.get(name).copied(), self.domain).map_err(|f| ExecError::at(f, line))
    }

    fn cond(&self, e: &super::ast::Expr, line: u32) -> Result<bool, ExecError> {
        self.eval(e, line)?.as_bool().ok_or(ExecError::IllTyped { line })
    }

    fn block(&mut self, stmts: &[Stmt]) -> Result<(), ExecError> {
        for stmt in stmts {
            self.stmt(stmt)?;
        }
        Ok(())
    }

    fn stmt(&mut self, stmt: &Stmt) -> Result<(), ExecError> {
        self.tick()?;
        let line = stmt.pos.line;
        match &stmt.kind {
            StmtKind::Decl { name, init, .. } => {
                let v = self.eval(init, line)?;
                self.vars.insert(name.clone(), v);
            }
            StmtKind::Assign { target, value } => {
                let v = self.eval(value, line)?;
                self.vars.insert(target.clone(), v);
            }
            StmtKind::If { cond, then_branch, else_branch } => {
                if self.cond(cond, line)? {
                    self.block(then_branch)?;
                } else {
                    self.block(else_branch)?;
                }
            }
            StmtKind::While { cond, body } => {
                let key = (stmt.pos.line, stmt.pos.col);
                let mut iterations = 0u64;
                while self.cond(cond, line)? {
                    iterations += 1;
                    self.block(body)?;
                    self.tick()?;
                }
                let slot = self.loops.entry(key).or_insert(0);
                *slot = (*slot).max(iterations);
            }
        }
        Ok(())
    }
}

fn bind_inputs(
    program: &Program,
    input: &VariableEnvironment,
    domain: &DomainConfig,
) -> Result<HashMap<String, Value>, ExecError> {
    if let Some(extra) = input.names().find(|n| program.input(n).is_none()) {
        return Err(ExecError::UnknownInput(extra.to_string()));
    }
    let mut vars = HashMap::new();
    for param in &program.inputs {
        let value = input.get(&param.name).ok_or_else(|| ExecError::MissingInput(param.name.clone()))?;
        if value.ty() != param.ty {
            return Err(ExecError::InputType { name: param.name.clone(), expected: param.ty });
        }
        if let Value::Int(v) = value {
            if !domain.contains(v) {
                return Err(ExecError::InputOutOfDomain { name: param.name.clone(), value: v });
            }
        }
        vars.insert(param.name.clone(), value);
    }
    Ok(vars)
}

/// Runs `program` on `input`, reporting the full final state.
pub fn run(
    program: &Program,
    input: &VariableEnvironment,
    domain: &DomainConfig,
    max_steps: u64,
) -> Result<Execution, ExecError> {
    let vars = bind_inputs(program, input, domain)?;
    let mut m = Machine { domain, vars, steps: 0, max_steps, loops: BTreeMap::new() };
    m.block(&program.body)?;
    let mut outputs = VariableEnvironment::new();
    for out in &program.outputs {
        let v = m
            .vars
            .get(&out.name)
            .copied()
            .ok_or_else(|| ExecError::Uninitialized { line: 0, name: out.name.clone() })?;
        outputs.insert(out.name.clone(), v);
    }
    let env = m.vars.iter().map(|(k, v)| (k.clone(), *v)).collect();
    Ok(Execution { env, outputs, loop_iterations: m.loops, steps: m.steps })
}

/// Runs `program` and returns its output environment.
pub fn interpret(
    program: &Program,
    input: &VariableEnvironment,
    domain: &DomainConfig,
    max_steps: u64,
) -> Result<VariableEnvironment, ExecError> {
    run(program, input, domain, max_steps).map(|e| e.outputs)
}

/// A test case passes when the run completes and agrees with every expected binding.
pub fn classify_test(program: &Program, tc: &TestCase, domain: &DomainConfig, max_steps: u64) -> TestOutcome {
    match interpret(program, &tc.input, domain, max_steps) {
        Ok(out) if tc.expected.iter().all(|(k, v)| out.get(k) == Some(v)) => TestOutcome::Passing,
        _ => TestOutcome::Failing,
    }
}
