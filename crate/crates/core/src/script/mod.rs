//! The condlogic scripting language: declarations of atoms, events and
//! conditionals, assessments, and queries over them.

mod ast;
mod parse;
mod run;

pub use ast::{render_expr, render_term, CondTerm, Expr, Item, Joint, Query, Script, Statement};
pub use parse::{parse, parse_term, ParseError};
pub use run::{lower_term, run, Diagnostic, Engine, QueryError, QueryRecord, Report, RunOptions, SCHEMA_VERSION};
