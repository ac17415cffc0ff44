//! Lexer and recursive-descent parser for condlogic scripts.

use std::collections::HashMap;

use thiserror::Error;

use super::ast::{CondTerm, Expr, Item, Joint, Query, Script, Statement};
use crate::entailment::WeakMode;
use crate::rational::{self, Rational};
use crate::trivalent::ValidityMode;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// What would have been accepted at this point; empty for non-syntax errors.
    pub expected: Vec<String>,
}

const RESERVED: &[&str] =
    &["atoms", "event", "cond", "assess", "query", "given", "target", "if", "then", "hstar", "with", "T", "F"];

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Number(String),
    Not,
    And,
    Or,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eq,
    Define,
    Arrow,
    Star,
    Newline,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Define => "`:=`".into(),
            Tok::Arrow => "`=>`".into(),
            Tok::Star => "`*`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |tok: Tok, out: &mut Vec<Spanned>| out.push(Spanned { tok, line: l0, column: c0 });
        if c == '\n' {
            if depth == 0 {
                push(Tok::Newline, &mut out);
            }
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric()
                    || chars[i] == '_'
                    || (chars[i] == '-' && chars.get(i + 1).is_some_and(|n| n.is_ascii_alphabetic())))
            {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            push(Tok::Ident(word), &mut out);
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit())) {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            push(Tok::Number(word), &mut out);
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, width) = match (c, two.as_str()) {
            (_, ":=") => (Tok::Define, 2),
            (_, "=>") => (Tok::Arrow, 2),
            ('~' | '¬', _) => (Tok::Not, 1),
            ('&' | '∧', _) => (Tok::And, 1),
            ('|' | '∨', _) => (Tok::Or, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            ('=', _) => (Tok::Eq, 1),
            ('*', _) => (Tok::Star, 1),
            _ => {
                return Err(ParseError {
                    line,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                    expected: Vec::new(),
                })
            }
        };
        match tok {
            Tok::LParen | Tok::LBrace => depth += 1,
            Tok::RParen | Tok::RBrace => depth = depth.saturating_sub(1),
            _ => {}
        }
        push(tok, &mut out);
        i += width;
        col += width;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
enum Kind {
    Atom,
    Event,
    Cond,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: HashMap<String, Kind>,
}

type PResult<T> = Result<T, ParseError>;

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError { line: s.line, column: s.column, message, expected: Vec::new() }
    }

    fn unexpected(&self, expected: Vec<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            message: format!("expected {}, found {}", expected.join(" or "), s.tok.describe()),
            expected,
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec![format!("`{kw}`")]))
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec![tok.describe()]))
        }
    }

    fn new_name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if RESERVED.contains(&s.as_str()) => {
                Err(self.error_here(format!("`{s}` is a reserved word and cannot be used as a name")))
            }
            Tok::Ident(s) if self.scope.contains_key(&s) => Err(self.error_here(format!("`{s}` is already declared"))),
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(names(&["name"]))),
        }
    }

    fn script(&mut self) -> PResult<Script> {
        let mut statements = Vec::new();
        loop {
            while *self.peek() == Tok::Newline {
                self.bump();
            }
            if *self.peek() == Tok::Eof {
                return Ok(Script { statements });
            }
            statements.push(self.statement()?);
            match self.peek() {
                Tok::Newline | Tok::Eof => {}
                _ => return Err(self.unexpected(names(&["end of line"]))),
            }
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let word = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.unexpected(names(&["`atoms`", "`event`", "`cond`", "`assess`", "`query`"]))),
        };
        match word.as_str() {
            "atoms" => {
                self.bump();
                let mut list = vec![self.new_name()?];
                self.scope.insert(list[0].clone(), Kind::Atom);
                while let Tok::Ident(_) = self.peek() {
                    let n = self.new_name()?;
                    self.scope.insert(n.clone(), Kind::Atom);
                    list.push(n);
                }
                Ok(Statement::Atoms(list))
            }
            "event" => {
                self.bump();
                let name = self.new_name()?;
                self.expect(Tok::Define)?;
                let expr = self.expr()?;
                self.scope.insert(name.clone(), Kind::Event);
                Ok(Statement::Event { name, expr })
            }
            "cond" => {
                self.bump();
                let name = self.new_name()?;
                self.expect(Tok::Define)?;
                let consequent = self.expr()?;
                self.keyword("given")?;
                let antecedent = self.expr()?;
                self.scope.insert(name.clone(), Kind::Cond);
                Ok(Statement::Cond { name, consequent, antecedent })
            }
            "assess" => {
                self.bump();
                let term = self.cond_term()?;
                self.expect(Tok::Eq)?;
                let value = self.value()?;
                Ok(Statement::Assess { term, value })
            }
            "query" => {
                self.bump();
                Ok(Statement::Query(self.query()?))
            }
            _ => Err(self.unexpected(names(&["`atoms`", "`event`", "`cond`", "`assess`", "`query`"]))),
        }
    }

    fn query(&mut self) -> PResult<Query> {
        const KINDS: &[&str] = &[
            "coherent",
            "extend",
            "pconsistent",
            "pentails",
            "valid",
            "pdt",
            "pdt-weak",
            "gie",
            "classify",
            "conj-table",
            "iterated-prevision",
            "frechet",
            "biconditional",
        ];
        let kind = match self.peek() {
            Tok::Ident(s) if KINDS.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.unexpected(KINDS.iter().map(|k| format!("`{k}`")).collect())),
        };
        self.bump();
        Ok(match kind.as_str() {
            "coherent" => Query::Coherent(self.items()?),
            "pconsistent" => Query::PConsistent(self.items()?),
            "extend" => {
                let items = self.items()?;
                self.keyword("target")?;
                Query::Extend { items, target: self.cond_term()? }
            }
            "pentails" | "gie" | "classify" => {
                let items = self.items()?;
                self.expect(Tok::Arrow)?;
                let conclusion = self.cond_term()?;
                match kind.as_str() {
                    "pentails" => Query::PEntails { items, conclusion },
                    "gie" => Query::Gie { items, conclusion },
                    _ => Query::Classify { items, conclusion },
                }
            }
            "valid" => {
                let mode = self.mode()?;
                let items = self.items()?;
                self.expect(Tok::Arrow)?;
                Query::Valid { mode, items, conclusion: self.cond_term()? }
            }
            "pdt" => {
                let items = self.items()?;
                self.keyword("if")?;
                let antecedent = self.cond_term()?;
                self.keyword("then")?;
                Query::Pdt { items, antecedent, consequent: self.cond_term()? }
            }
            "pdt-weak" => {
                let mode = match self.peek() {
                    Tok::Ident(s) if s == "asym" => WeakMode::Asymmetric,
                    Tok::Ident(s) if s == "sym" => WeakMode::Symmetric,
                    _ => return Err(self.unexpected(names(&["`asym`", "`sym`"]))),
                };
                self.bump();
                let items = self.items()?;
                self.keyword("if")?;
                let antecedent = self.expr()?;
                self.keyword("then")?;
                let consequent = self.expr()?;
                self.keyword("hstar")?;
                Query::PdtWeak { mode, items, antecedent, consequent, hstar: self.expr()? }
            }
            "conj-table" => {
                let items = self.items()?;
                let joint = self.joint(items.len())?;
                Query::ConjTable { items, joint }
            }
            "iterated-prevision" => {
                let consequent = self.item()?;
                self.keyword("given")?;
                let items = self.items()?;
                let joint = self.joint(items.len() + 1)?;
                Query::IteratedPrevision { consequent, items, joint }
            }
            "frechet" => {
                self.expect(Tok::LBrace)?;
                let mut xs = vec![self.value()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    xs.push(self.value()?);
                }
                self.expect(Tok::RBrace)?;
                Query::Frechet(xs)
            }
            _ => {
                let x = self.value()?;
                Query::Biconditional(x, self.value()?)
            }
        })
    }

    fn mode(&mut self) -> PResult<ValidityMode> {
        let expected = names(&["`SS`", "`TT`", "`SSTT`", "`SSTT*`"]);
        let mut word = match self.peek() {
            Tok::Ident(s) if ["SS", "TT", "SSTT"].contains(&s.as_str()) => s.clone(),
            _ => return Err(self.unexpected(expected)),
        };
        self.bump();
        if word == "SSTT" && *self.peek() == Tok::Star {
            self.bump();
            word.push('*');
        }
        word.parse().map_err(|_| self.unexpected(expected))
    }

    fn items(&mut self) -> PResult<Vec<Item>> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        if *self.peek() == Tok::RBrace {
            self.bump();
            return Ok(items);
        }
        loop {
            items.push(self.item()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBrace => {
                    self.bump();
                    return Ok(items);
                }
                _ => return Err(self.unexpected(names(&["`,`", "`}`", "`=`"]))),
            }
        }
    }

    fn item(&mut self) -> PResult<Item> {
        let term = self.cond_term()?;
        let value = if *self.peek() == Tok::Eq {
            self.bump();
            Some(self.value()?)
        } else {
            None
        };
        Ok(Item { term, value })
    }

    /// Optional `with { i j .. = r, .. }`; indices are 1-based and at most `n`.
    fn joint(&mut self, n: usize) -> PResult<Vec<Joint>> {
        if !self.is_keyword("with") {
            return Ok(Vec::new());
        }
        self.bump();
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            let mut members = Vec::new();
            while let Tok::Number(s) = self.peek().clone() {
                let idx: usize = match s.parse() {
                    Ok(i) if (1..=n).contains(&i) => i,
                    _ => return Err(self.error_here(format!("member index `{s}` is not in 1..={n}"))),
                };
                if members.contains(&idx) {
                    return Err(self.error_here(format!("member index {idx} repeated")));
                }
                members.push(idx);
                self.bump();
            }
            if members.len() < 2 {
                return Err(self.unexpected(names(&["member index"])));
            }
            self.expect(Tok::Eq)?;
            let value = self.value()?;
            out.push(Joint { members, value });
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBrace => {
                    self.bump();
                    return Ok(out);
                }
                _ => return Err(self.unexpected(names(&["`,`", "`}`"]))),
            }
        }
    }

    fn value(&mut self) -> PResult<Rational> {
        let Tok::Number(s) = self.peek().clone() else {
            return Err(self.unexpected(names(&["rational number"])));
        };
        let q = rational::parse(&s).map_err(|e| self.error_here(e.to_string()))?;
        if !rational::in_unit(&q) {
            return Err(self.error_here(format!("value {s} is outside [0, 1]")));
        }
        self.bump();
        Ok(q)
    }

    fn cond_term(&mut self) -> PResult<CondTerm> {
        if *self.peek() == Tok::LParen {
            let save = self.pos;
            self.bump();
            if let Ok(e) = self.expr() {
                if self.is_keyword("given") {
                    self.bump();
                    let h = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return Ok(CondTerm { consequent: e, antecedent: Some(h) });
                }
            }
            self.pos = save;
        }
        if let Tok::Ident(s) = self.peek() {
            if self.scope.get(s) == Some(&Kind::Cond) {
                let name = s.clone();
                self.bump();
                return Ok(CondTerm::bare(Expr::Name(name)));
            }
        }
        let e = self.expr()?;
        if self.is_keyword("given") && *self.peek_at(1) != Tok::LBrace {
            self.bump();
            let h = self.expr()?;
            return Ok(CondTerm { consequent: e, antecedent: Some(h) });
        }
        Ok(CondTerm::bare(e))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Expr::Or(Box::new(lhs), Box::new(self.conj()?));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Expr::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "T" => {
                self.bump();
                Ok(Expr::True)
            }
            Tok::Ident(s) if s == "F" => {
                self.bump();
                Ok(Expr::False)
            }
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => match self.scope.get(&s) {
                Some(Kind::Atom | Kind::Event) => {
                    self.bump();
                    Ok(Expr::Name(s))
                }
                Some(Kind::Cond) => {
                    Err(self.error_here(format!("conditional `{s}` cannot appear inside an event expression")))
                }
                None => Err(self.error_here(format!("undefined name `{s}`"))),
            },
            _ => Err(self.unexpected(names(&["`~`", "`(`", "`T`", "`F`", "name"]))),
        }
    }
}

pub fn parse(src: &str) -> Result<Script, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0, scope: HashMap::new() }.script()
}

/// A single `E given H` or bare event over the atoms `atoms`.
pub fn parse_term(atoms: &[String], src: &str) -> Result<CondTerm, ParseError> {
    let toks: Vec<Spanned> = lex(src)?.into_iter().filter(|t| t.tok != Tok::Newline).collect();
    let scope = atoms.iter().map(|a| (a.clone(), Kind::Atom)).collect();
    let mut p = Parser { toks, pos: 0, scope };
    let term = p.cond_term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(names(&["end of input"])));
    }
    Ok(term)
}
