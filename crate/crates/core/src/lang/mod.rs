//! The sequential mini-language: syntax, checking, printing and execution.

pub mod ast;
pub mod check;
mod env;
mod error;
pub mod eval;
mod interp;
mod parser;
pub mod printer;

pub use ast::{BinOp, Expr, Param, Pos, Program, Stmt, StmtKind, Type, UnOp};
pub use check::check_program;
pub use env::{TestCase, TestOutcome, Value, VariableEnvironment};
pub use error::FrontendError;
pub use interp::{classify_test, interpret, run, ExecError, Execution, DEFAULT_MAX_STEPS};
pub use parser::parse_unchecked;
pub use printer::pretty_print;

/// Parses and checks a program.
pub fn parse(source: &str) -> Result<Program, FrontendError> {
    let program = parse_unchecked(source)?;
    check_program(&program)?;
    Ok(program)
}

/// Lines of code: non-blank lines that are not pure `//` comments.
pub fn count_loc(source: &str) -> usize {
    source.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with("//")).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loc_skips_blanks_and_comments() {
        assert_eq!(count_loc("// header\nprogram t() {\n\n  // note\n  x = 1; // trailing\n}\n"), 3);
    }

    #[test]
    fn minimal_program() {
        let p = parse("program one(input int a, output int r) { r = 7; }").unwrap();
        assert_eq!(p.body.len(), 1);
        assert!(matches!(p.body[0].kind, StmtKind::Assign { .. }));
    }
}
