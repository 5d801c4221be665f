//! Lexer and recursive-descent parser for `.mlang` sources.
//!
//! The parser only builds syntax; [`super::check`] enforces typing and
//! definite assignment afterwards.

use super::ast::{BinOp, Expr, Param, Pos, Program, Stmt, StmtKind, Type, UnOp};
use super::error::FrontendError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

const SYMBOLS: [&str; 20] =
    ["<=", ">=", "==", "!=", "(", ")", "{", "}", ";", ",", "=", "+", "-", "*", "/", "%", "<", ">", "&&", "||"];

const UNSUPPORTED_KEYWORDS: [(&str, &str); 9] = [
    ("for", "for loop"),
    ("do", "do-while loop"),
    ("break", "break statement"),
    ("continue", "continue statement"),
    ("return", "return statement"),
    ("fn", "procedure definition"),
    ("function", "procedure definition"),
    ("class", "class definition"),
    ("new", "object construction"),
];

fn lex(src: &str) -> Result<Vec<Token>, FrontendError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos::new(line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if chars.get(i) == Some(&'.') {
                return Err(unsupported("floating-point literal", pos));
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<i64>().map_err(|_| FrontendError::Syntax {
                line,
                col,
                message: format!("integer literal `{text}` is too large"),
            })?;
            col += (i - start) as u32;
            out.push(Token { tok: Tok::Int(value), pos });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += (i - start) as u32;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            continue;
        }
        let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        if let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            i += sym.len();
            col += sym.len() as u32;
            out.push(Token { tok: Tok::Sym(sym), pos });
            continue;
        }
        return Err(match c {
            '[' | ']' => unsupported("array", pos),
            '"' | '\'' => unsupported("string literal", pos),
            '.' => unsupported("member access", pos),
            '!' => syntax(pos, "use `not` for boolean negation"),
            _ => syntax(pos, format!("unexpected character `{c}`")),
        });
    }
    out.push(Token { tok: Tok::Eof, pos: Pos::new(line, col) });
    Ok(out)
}

fn syntax(pos: Pos, message: impl Into<String>) -> FrontendError {
    FrontendError::Syntax { line: pos.line, col: pos.col, message: message.into() }
}

fn unsupported(construct: &str, pos: Pos) -> FrontendError {
    FrontendError::Unsupported { construct: construct.to_string(), line: pos.line, col: pos.col }
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, FrontendError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.tokens[(self.at + 1).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == kw)
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{s}`, found {}", Self::describe(self.peek()))))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{kw}`, found {}", Self::describe(self.peek()))))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) if !is_keyword(&name) => {
                self.bump();
                Ok(name)
            }
            other => Err(syntax(pos, format!("expected identifier, found {}", Self::describe(&other)))),
        }
    }

    fn ty(&mut self) -> PResult<Type> {
        let pos = self.pos();
        if self.is_kw("int") {
            self.bump();
            Ok(Type::Int)
        } else if self.is_kw("bool") {
            self.bump();
            Ok(Type::Bool)
        } else {
            Err(syntax(pos, format!("expected `int` or `bool`, found {}", Self::describe(self.peek()))))
        }
    }

    fn program(&mut self) -> PResult<Program> {
        self.expect_kw("program")?;
        let name = self.ident()?;
        self.expect_sym("(")?;
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        if !self.is_sym(")") {
            loop {
                let pos = self.pos();
                let is_input = if self.is_kw("input") {
                    true
                } else if self.is_kw("output") {
                    false
                } else {
                    return Err(syntax(pos, "expected `input` or `output`"));
                };
                self.bump();
                let ty = self.ty()?;
                let pname = self.ident()?;
                let param = Param { name: pname, ty };
                if is_input {
                    inputs.push(param);
                } else {
                    outputs.push(param);
                }
                if self.is_sym(",") {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        let body = self.block()?;
        if *self.peek() != Tok::Eof {
            return Err(syntax(self.pos(), "expected end of input after program"));
        }
        Ok(Program { name, inputs, outputs, body })
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect_sym("{")?;
        let mut stmts = Vec::new();
        while !self.is_sym("}") {
            if *self.peek() == Tok::Eof {
                return Err(syntax(self.pos(), "unterminated block"));
            }
            stmts.push(self.stmt()?);
        }
        self.bump();
        Ok(stmts)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        if let Tok::Ident(word) = self.peek().clone() {
            if let Some((_, what)) = UNSUPPORTED_KEYWORDS.iter().find(|(k, _)| *k == word) {
                return Err(unsupported(what, pos));
            }
            match word.as_str() {
                "int" | "bool" => {
                    let ty = self.ty()?;
                    let name = self.ident()?;
                    self.expect_sym("=")?;
                    let init = self.expr()?;
                    self.expect_sym(";")?;
                    return Ok(Stmt::new(pos, StmtKind::Decl { name, ty, init }));
                }
                "if" => return self.if_stmt(),
                "while" => {
                    self.bump();
                    self.expect_sym("(")?;
                    let cond = self.expr()?;
                    self.expect_sym(")")?;
                    let body = self.block()?;
                    return Ok(Stmt::new(pos, StmtKind::While { cond, body }));
                }
                _ if !is_keyword(&word) => {
                    if matches!(self.peek2(), Tok::Sym("(")) {
                        return Err(unsupported("procedure call", pos));
                    }
                    let target = self.ident()?;
                    self.expect_sym("=")?;
                    let value = self.expr()?;
                    self.expect_sym(";")?;
                    return Ok(Stmt::new(pos, StmtKind::Assign { target, value }));
                }
                _ => {}
            }
        }
        Err(syntax(pos, format!("expected statement, found {}", Self::describe(self.peek()))))
    }

    fn if_stmt(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        self.expect_kw("if")?;
        self.expect_sym("(")?;
        let cond = self.expr()?;
        self.expect_sym(")")?;
        let then_branch = self.block()?;
        let else_branch = if self.is_kw("else") {
            self.bump();
            if self.is_kw("if") {
                vec![self.if_stmt()?]
            } else {
                self.block()?
            }
        } else {
            Vec::new()
        };
        Ok(Stmt::new(pos, StmtKind::If { cond, then_branch, else_branch }))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.and_expr()?;
        while self.is_kw("or") {
            self.bump();
            let rhs = self.and_expr()?;
            lhs = Expr::binary(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.not_expr()?;
        while self.is_kw("and") {
            self.bump();
            let rhs = self.not_expr()?;
            lhs = Expr::binary(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> PResult<Expr> {
        if self.is_kw("not") {
            self.bump();
            let operand = self.not_expr()?;
            return Ok(Expr::unary(UnOp::Not, operand));
        }
        self.cmp_expr()
    }

    fn cmp_expr(&mut self) -> PResult<Expr> {
        let lhs = self.add_expr()?;
        let op = match self.peek() {
            Tok::Sym("<") => BinOp::Lt,
            Tok::Sym("<=") => BinOp::Le,
            Tok::Sym(">") => BinOp::Gt,
            Tok::Sym(">=") => BinOp::Ge,
            Tok::Sym("==") => BinOp::Eq,
            Tok::Sym("!=") => BinOp::Ne,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.add_expr()?;
        if matches!(self.peek(), Tok::Sym("<" | "<=" | ">" | ">=" | "==" | "!=")) {
            return Err(syntax(self.pos(), "comparison operators do not chain; add parentheses"));
        }
        Ok(Expr::binary(op, lhs, rhs))
    }

    fn add_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Sym("+") => BinOp::Add,
                Tok::Sym("-") => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.mul_expr()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn mul_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym("*") => BinOp::Mul,
                Tok::Sym("/") => BinOp::Div,
                Tok::Sym("%") => BinOp::Rem,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.is_sym("-") {
            self.bump();
            // `-` directly followed by a literal is a negative literal.
            if let Tok::Int(v) = *self.peek() {
                self.bump();
                return Ok(Expr::Int(-v));
            }
            let operand = self.unary()?;
            return Ok(Expr::unary(UnOp::Neg, operand));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Sym("&&") | Tok::Sym("||") => Err(syntax(pos, "use `and` / `or` for boolean connectives")),
            Tok::Ident(word) => match word.as_str() {
                "true" => {
                    self.bump();
                    Ok(Expr::Bool(true))
                }
                "false" => {
                    self.bump();
                    Ok(Expr::Bool(false))
                }
                _ if is_keyword(&word) => Err(syntax(pos, format!("unexpected keyword `{word}`"))),
                _ => {
                    self.bump();
                    if self.is_sym("(") {
                        return Err(unsupported("procedure call", pos));
                    }
                    Ok(Expr::Var(word))
                }
            },
            other => Err(syntax(pos, format!("expected expression, found {}", Self::describe(&other)))),
        }
    }
}

const KEYWORDS: [&str; 14] =
    ["program", "input", "output", "int", "bool", "if", "else", "while", "true", "false", "and", "or", "not", "Phi"];

pub(crate) fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word) || UNSUPPORTED_KEYWORDS.iter().any(|(k, _)| *k == word)
}

/// Parses source text into an unchecked program.
pub fn parse_unchecked(source: &str) -> Result<Program, FrontendError> {
    let tokens = lex(source)?;
    let mut parser = Parser { tokens, at: 0 };
    parser.program()
}
