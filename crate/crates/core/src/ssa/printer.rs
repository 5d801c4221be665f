use std::fmt;

use super::{SsaAssignment, SsaProgram, SsaRhs};
use crate::lang::printer::write_expr;

impl fmt::Display for SsaAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.decl {
            write!(f, "{} ", self.ty)?;
        }
        write!(f, "{} = ", self.target)?;
        match &self.rhs {
            SsaRhs::Expr(e) => write_expr(f, e, false)?,
            SsaRhs::Phi { guard, then_value, else_value } => {
                f.write_str("Phi(")?;
                write_expr(f, guard, true)?;
                write!(f, ", {then_value}, {else_value})")?;
            }
        }
        f.write_str(";")
    }
}

/// One assignment per line, path conditions omitted.
impl fmt::Display for SsaProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.assignments {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}
