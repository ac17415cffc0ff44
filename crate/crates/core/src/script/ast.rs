//! The script model and its canonical text form.

use std::fmt::Write;

use crate::entailment::WeakMode;
use crate::rational::{self, Rational};
use crate::trivalent::ValidityMode;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    True,
    False,
    Name(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

/// `consequent given antecedent`, or a bare expression or name.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CondTerm {
    pub consequent: Expr,
    pub antecedent: Option<Expr>,
}

impl CondTerm {
    pub fn bare(e: Expr) -> CondTerm {
        CondTerm { consequent: e, antecedent: None }
    }
}

/// A conditional with an optional inline value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Item {
    pub term: CondTerm,
    pub value: Option<Rational>,
}

/// `x_S` for the 1-based member indices in `members`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Joint {
    pub members: Vec<usize>,
    pub value: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Query {
    Coherent(Vec<Item>),
    Extend { items: Vec<Item>, target: CondTerm },
    PConsistent(Vec<Item>),
    PEntails { items: Vec<Item>, conclusion: CondTerm },
    Valid { mode: ValidityMode, items: Vec<Item>, conclusion: CondTerm },
    Pdt { items: Vec<Item>, antecedent: CondTerm, consequent: CondTerm },
    PdtWeak { mode: WeakMode, items: Vec<Item>, antecedent: Expr, consequent: Expr, hstar: Expr },
    Gie { items: Vec<Item>, conclusion: CondTerm },
    Classify { items: Vec<Item>, conclusion: CondTerm },
    ConjTable { items: Vec<Item>, joint: Vec<Joint> },
    IteratedPrevision { consequent: Item, items: Vec<Item>, joint: Vec<Joint> },
    Frechet(Vec<Rational>),
    Biconditional(Rational, Rational),
}

impl Query {
    pub fn keyword(&self) -> &'static str {
        match self {
            Query::Coherent(_) => "coherent",
            Query::Extend { .. } => "extend",
            Query::PConsistent(_) => "pconsistent",
            Query::PEntails { .. } => "pentails",
            Query::Valid { .. } => "valid",
            Query::Pdt { .. } => "pdt",
            Query::PdtWeak { .. } => "pdt-weak",
            Query::Gie { .. } => "gie",
            Query::Classify { .. } => "classify",
            Query::ConjTable { .. } => "conj-table",
            Query::IteratedPrevision { .. } => "iterated-prevision",
            Query::Frechet(_) => "frechet",
            Query::Biconditional(..) => "biconditional",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Statement {
    Atoms(Vec<String>),
    Event { name: String, expr: Expr },
    Cond { name: String, consequent: Expr, antecedent: Expr },
    Assess { term: CondTerm, value: Rational },
    Query(Query),
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Script {
    pub statements: Vec<Statement>,
}

impl Script {
    pub fn queries(&self) -> impl Iterator<Item = &Query> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Query(q) => Some(q),
            _ => None,
        })
    }

    /// One statement per line, in a form the parser reads back to the same model.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.statements {
            render_statement(s, &mut out);
            out.push('\n');
        }
        out
    }
}

pub fn render_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr_into(e, 0, &mut out);
    out
}

fn expr_into(e: &Expr, ctx: u8, out: &mut String) {
    let prec = match e {
        Expr::Or(..) => 1,
        Expr::And(..) => 2,
        _ => 3,
    };
    if prec < ctx {
        out.push('(');
    }
    match e {
        Expr::True => out.push('T'),
        Expr::False => out.push('F'),
        Expr::Name(n) => out.push_str(n),
        Expr::Not(a) => {
            out.push('~');
            expr_into(a, 3, out);
        }
        Expr::And(a, b) => {
            expr_into(a, 2, out);
            out.push_str(" & ");
            expr_into(b, 3, out);
        }
        Expr::Or(a, b) => {
            expr_into(a, 1, out);
            out.push_str(" | ");
            expr_into(b, 2, out);
        }
    }
    if prec < ctx {
        out.push(')');
    }
}

pub fn render_term(t: &CondTerm) -> String {
    match &t.antecedent {
        Some(h) => format!("({} given {})", render_expr(&t.consequent), render_expr(h)),
        None => render_expr(&t.consequent),
    }
}

fn render_item(i: &Item) -> String {
    match &i.value {
        Some(v) => format!("{} = {}", render_term(&i.term), rational::render(v)),
        None => render_term(&i.term),
    }
}

fn render_items(items: &[Item]) -> String {
    let parts: Vec<String> = items.iter().map(render_item).collect();
    format!("{{ {} }}", parts.join(", "))
}

fn render_joint(joint: &[Joint]) -> String {
    let parts: Vec<String> = joint
        .iter()
        .map(|j| {
            let idx: Vec<String> = j.members.iter().map(|m| m.to_string()).collect();
            format!("{} = {}", idx.join(" "), rational::render(&j.value))
        })
        .collect();
    format!("{{ {} }}", parts.join(", "))
}

fn render_statement(s: &Statement, out: &mut String) {
    match s {
        Statement::Atoms(names) => {
            let _ = write!(out, "atoms {}", names.join(" "));
        }
        Statement::Event { name, expr } => {
            let _ = write!(out, "event {name} := {}", render_expr(expr));
        }
        Statement::Cond { name, consequent, antecedent } => {
            let _ = write!(out, "cond {name} := {} given {}", render_expr(consequent), render_expr(antecedent));
        }
        Statement::Assess { term, value } => {
            let _ = write!(out, "assess {} = {}", render_term(term), rational::render(value));
        }
        Statement::Query(q) => {
            let _ = write!(out, "query {} ", q.keyword());
            render_query(q, out);
        }
    }
}

fn render_query(q: &Query, out: &mut String) {
    let _ = query_into(q, out);
}

fn query_into(q: &Query, out: &mut String) -> std::fmt::Result {
    match q {
        Query::Coherent(items) | Query::PConsistent(items) => write!(out, "{}", render_items(items)),
        Query::Extend { items, target } => write!(out, "{} target {}", render_items(items), render_term(target)),
        Query::PEntails { items, conclusion }
        | Query::Gie { items, conclusion }
        | Query::Classify { items, conclusion } => {
            write!(out, "{} => {}", render_items(items), render_term(conclusion))
        }
        Query::Valid { mode, items, conclusion } => {
            write!(out, "{} {} => {}", mode.keyword(), render_items(items), render_term(conclusion))
        }
        Query::Pdt { items, antecedent, consequent } => {
            write!(out, "{} if {} then {}", render_items(items), render_term(antecedent), render_term(consequent))
        }
        Query::PdtWeak { mode, items, antecedent, consequent, hstar } => write!(
            out,
            "{} {} if {} then {} hstar {}",
            match mode {
                WeakMode::Asymmetric => "asym",
                WeakMode::Symmetric => "sym",
            },
            render_items(items),
            paren(antecedent),
            paren(consequent),
            paren(hstar)
        ),
        Query::ConjTable { items, joint } => {
            write!(out, "{}", render_items(items))?;
            if joint.is_empty() {
                Ok(())
            } else {
                write!(out, " with {}", render_joint(joint))
            }
        }
        Query::IteratedPrevision { consequent, items, joint } => {
            write!(out, "{} given {}", render_item(consequent), render_items(items))?;
            if joint.is_empty() {
                Ok(())
            } else {
                write!(out, " with {}", render_joint(joint))
            }
        }
        Query::Frechet(xs) => {
            let parts: Vec<String> = xs.iter().map(rational::render).collect();
            write!(out, "{{ {} }}", parts.join(", "))
        }
        Query::Biconditional(x, y) => write!(out, "{} {}", rational::render(x), rational::render(y)),
    }
}

/// Wraps an expression so a following keyword cannot be mistaken for part of it.
fn paren(e: &Expr) -> String {
    match e {
        Expr::True | Expr::False | Expr::Name(_) => render_expr(e),
        _ => format!("({})", render_expr(e)),
    }
}
