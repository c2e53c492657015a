//! Command-line front end: an expression language for functions of `x` and a
//! runner mapping one request onto one library call.

pub mod expr;
pub mod run;

pub use expr::{eval_expr, parse_expr, to_function, Bindings, EvalError, Expr, SyntaxError};
pub use run::{run_cli, CliOutput, CliRequest, Command};
