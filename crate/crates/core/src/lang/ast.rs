//! Abstract syntax of the mini-language.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

/// Static type of a variable or expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Type {
    Int,
    Bool,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Int => f.write_str("int"),
            Type::Bool => f.write_str("bool"),
        }
    }
}

/// Source position of a statement.
///
/// Positions never take part in structural equality or hashing: two programs
/// that differ only in layout compare equal.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub fn new(line: u32, col: u32) -> Self {
        Pos { line, col }
    }
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

impl Hash for Pos {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub const ARITHMETIC: [BinOp; 5] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Rem];
    pub const RELATIONAL: [BinOp; 6] = [BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne];
    pub const LOGICAL: [BinOp; 2] = [BinOp::And, BinOp::Or];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "and",
            BinOp::Or => "or",
        }
    }

    pub fn is_arithmetic(self) -> bool {
        Self::ARITHMETIC.contains(&self)
    }

    pub fn is_relational(self) -> bool {
        Self::RELATIONAL.contains(&self)
    }

    pub fn is_logical(self) -> bool {
        Self::LOGICAL.contains(&self)
    }

    /// Operand type and result type.
    pub fn signature(self) -> (Type, Type) {
        if self.is_arithmetic() {
            (Type::Int, Type::Int)
        } else if self.is_relational() {
            (Type::Int, Type::Bool)
        } else {
            (Type::Bool, Type::Bool)
        }
    }
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnOp {
    Neg,
    Not,
}

impl UnOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnOp::Neg => "-",
            UnOp::Not => "not",
        }
    }

    pub fn operand_type(self) -> Type {
        match self {
            UnOp::Neg => Type::Int,
            UnOp::Not => Type::Bool,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Var(String),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Unary(UnOp, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn unary(op: UnOp, operand: Expr) -> Expr {
        Expr::Unary(op, Box::new(operand))
    }

    pub fn and(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::And, lhs, rhs)
    }

    pub fn logical_not(operand: Expr) -> Expr {
        Expr::unary(UnOp::Not, operand)
    }

    /// Calls `f` on every variable name read by this expression.
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Int(_) | Expr::Bool(_) => {}
            Expr::Var(name) => f(name),
            Expr::Binary(_, lhs, rhs) => {
                lhs.for_each_var(f);
                rhs.for_each_var(f);
            }
            Expr::Unary(_, operand) => operand.for_each_var(f),
        }
    }

    /// Returns a copy with every variable name passed through `f`.
    pub fn map_vars(&self, f: &impl Fn(&str) -> String) -> Expr {
        match self {
            Expr::Int(_) | Expr::Bool(_) => self.clone(),
            Expr::Var(name) => Expr::Var(f(name)),
            Expr::Binary(op, lhs, rhs) => Expr::binary(*op, lhs.map_vars(f), rhs.map_vars(f)),
            Expr::Unary(op, operand) => Expr::unary(*op, operand.map_vars(f)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stmt {
    pub pos: Pos,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StmtKind {
    Decl { name: String, ty: Type, init: Expr },
    Assign { target: String, value: Expr },
    If { cond: Expr, then_branch: Vec<Stmt>, else_branch: Vec<Stmt> },
    While { cond: Expr, body: Vec<Stmt> },
}

impl Stmt {
    pub fn new(pos: Pos, kind: StmtKind) -> Stmt {
        Stmt { pos, kind }
    }

    pub fn decl(name: impl Into<String>, ty: Type, init: Expr) -> Stmt {
        Stmt::new(Pos::default(), StmtKind::Decl { name: name.into(), ty, init })
    }

    pub fn assign(target: impl Into<String>, value: Expr) -> Stmt {
        Stmt::new(Pos::default(), StmtKind::Assign { target: target.into(), value })
    }

    pub fn if_else(cond: Expr, then_branch: Vec<Stmt>, else_branch: Vec<Stmt>) -> Stmt {
        Stmt::new(Pos::default(), StmtKind::If { cond, then_branch, else_branch })
    }

    pub fn while_loop(cond: Expr, body: Vec<Stmt>) -> Stmt {
        Stmt::new(Pos::default(), StmtKind::While { cond, body })
    }
}

/// A declared input or output of a program.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub ty: Type,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Program {
    pub name: String,
    pub inputs: Vec<Param>,
    pub outputs: Vec<Param>,
    pub body: Vec<Stmt>,
}

impl Program {
    pub fn input(&self, name: &str) -> Option<&Param> {
        self.inputs.iter().find(|p| p.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&Param> {
        self.outputs.iter().find(|p| p.name == name)
    }

    /// Number of `while` statements, nested ones included.
    pub fn loop_count(&self) -> usize {
        fn count(stmts: &[Stmt]) -> usize {
            stmts
                .iter()
                .map(|s| match &s.kind {
                    StmtKind::If { then_branch, else_branch, .. } => count(then_branch) + count(else_branch),
                    StmtKind::While { body, .. } => 1 + count(body),
                    _ => 0,
                })
                .sum()
        }
        count(&self.body)
    }
}
