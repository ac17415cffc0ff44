//! Propositional events over a finite universe, conditional events, and the
//! trivalent operators on them.

use std::collections::HashMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trivalent::TrivalentValue;

pub const MAX_ATOMS: usize = 20;

// ---------------------------------------------------------------------------
// World sets
// ---------------------------------------------------------------------------

/// A set of worlds as a dense bitset over `0..len`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WorldSet {
    len: usize,
    words: Vec<u64>,
}

impl WorldSet {
    pub fn empty(len: usize) -> Self {
        WorldSet { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = WorldSet { len, words: vec![u64::MAX; len.div_ceil(64)] };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn complement(&self) -> WorldSet {
        let mut s = WorldSet { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    pub fn minus(&self, other: &WorldSet) -> WorldSet {
        self.zip(other, |a, b| a & !b)
    }

    fn zip(&self, other: &WorldSet, f: impl Fn(u64, u64) -> u64) -> WorldSet {
        debug_assert_eq!(self.len, other.len);
        WorldSet { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| f(*a, *b)).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

impl BitAnd for &WorldSet {
    type Output = WorldSet;
    fn bitand(self, rhs: &WorldSet) -> WorldSet {
        self.zip(rhs, |a, b| a & b)
    }
}

impl BitOr for &WorldSet {
    type Output = WorldSet;
    fn bitor(self, rhs: &WorldSet) -> WorldSet {
        self.zip(rhs, |a, b| a | b)
    }
}

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

/// A propositional formula over atom indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Event {
    True,
    False,
    Atom(usize),
    Not(Box<Event>),
    And(Box<Event>, Box<Event>),
    Or(Box<Event>, Box<Event>),
}

impl Event {
    pub fn atom(i: usize) -> Event {
        Event::Atom(i)
    }

    pub fn and(self, other: Event) -> Event {
        Event::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Event) -> Event {
        Event::Or(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> Event {
        Event::Not(Box::new(self))
    }

    /// Conjunction of all items; `True` when empty.
    pub fn all<I: IntoIterator<Item = Event>>(items: I) -> Event {
        items.into_iter().reduce(Event::and).unwrap_or(Event::True)
    }

    /// Disjunction of all items; `False` when empty.
    pub fn any<I: IntoIterator<Item = Event>>(items: I) -> Event {
        items.into_iter().reduce(Event::or).unwrap_or(Event::False)
    }

    pub fn max_atom(&self) -> Option<usize> {
        match self {
            Event::True | Event::False => None,
            Event::Atom(i) => Some(*i),
            Event::Not(e) => e.max_atom(),
            Event::And(a, b) | Event::Or(a, b) => a.max_atom().max(b.max_atom()),
        }
    }

    pub fn eval(&self, w: World) -> bool {
        match self {
            Event::True => true,
            Event::False => false,
            Event::Atom(i) => w.value(*i),
            Event::Not(e) => !e.eval(w),
            Event::And(a, b) => a.eval(w) && b.eval(w),
            Event::Or(a, b) => a.eval(w) || b.eval(w),
        }
    }
}

impl BitAnd for Event {
    type Output = Event;
    fn bitand(self, rhs: Event) -> Event {
        self.and(rhs)
    }
}

impl BitOr for Event {
    type Output = Event;
    fn bitor(self, rhs: Event) -> Event {
        self.or(rhs)
    }
}

impl Not for Event {
    type Output = Event;
    fn not(self) -> Event {
        self.negate()
    }
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_NOT: u8 = 3;

/// Renders with `~ & |`; right-nested chains keep their parentheses so the
/// left-associative parser reproduces the same tree.
pub fn render_event(e: &Event, names: &dyn Fn(usize) -> String) -> String {
    let mut out = String::new();
    render_into(e, names, 0, &mut out);
    out
}

fn render_into(e: &Event, names: &dyn Fn(usize) -> String, ctx: u8, out: &mut String) {
    let prec = match e {
        Event::Or(..) => PREC_OR,
        Event::And(..) => PREC_AND,
        _ => PREC_NOT,
    };
    let paren = prec < ctx;
    if paren {
        out.push('(');
    }
    match e {
        Event::True => out.push('T'),
        Event::False => out.push('F'),
        Event::Atom(i) => out.push_str(&names(*i)),
        Event::Not(inner) => {
            out.push('~');
            render_into(inner, names, PREC_NOT, out);
        }
        Event::And(a, b) => {
            render_into(a, names, PREC_AND, out);
            out.push_str(" & ");
            render_into(b, names, PREC_NOT, out);
        }
        Event::Or(a, b) => {
            render_into(a, names, PREC_OR, out);
            out.push_str(" | ");
            render_into(b, names, PREC_AND, out);
        }
    }
    if paren {
        out.push(')');
    }
}

// ---------------------------------------------------------------------------
// Universe and worlds
// ---------------------------------------------------------------------------

/// A total truth assignment; atom 0 is the most significant bit of `index`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct World {
    index: u32,
    arity: u8,
}

impl World {
    pub fn new(index: u32, arity: usize) -> World {
        World { index, arity: arity as u8 }
    }

    pub fn index(&self) -> usize {
        self.index as usize
    }

    pub fn value(&self, atom: usize) -> bool {
        debug_assert!(atom < self.arity as usize);
        self.index >> (self.arity as usize - 1 - atom) & 1 == 1
    }
}

/// The declared atoms. World `i` assigns atom `k` the bit `n-1-k` of `i`, so
/// worlds enumerate lexicographically in declaration order.
#[derive(Clone, Debug)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, usize>,
    atom_tables: Vec<WorldSet>,
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Universe>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Universe::with_limit(names, MAX_ATOMS)
    }

    pub fn with_limit<I, S>(names: I, limit: usize) -> Result<Universe>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let limit = limit.min(MAX_ATOMS);
        if names.len() > limit {
            return Err(Error::TooManyAtoms { count: names.len(), limit });
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateAtom(n.clone()));
            }
        }
        let n = names.len();
        let size = 1usize << n;
        let atom_tables = (0..n)
            .map(|k| {
                let mut s = WorldSet::empty(size);
                for w in 0..size {
                    if w >> (n - 1 - k) & 1 == 1 {
                        s.insert(w);
                    }
                }
                s
            })
            .collect();
        Ok(Universe { names, index, atom_tables })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn world_count(&self) -> usize {
        1 << self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn atom(&self, name: &str) -> Result<Event> {
        self.index.get(name).map(|i| Event::Atom(*i)).ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    pub fn world(&self, index: usize) -> World {
        World::new(index as u32, self.len())
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> + '_ {
        (0..self.world_count()).map(|i| self.world(i))
    }

    pub fn check_event(&self, e: &Event) -> Result<()> {
        match e.max_atom() {
            Some(i) if i >= self.len() => Err(Error::AtomOutOfRange(i)),
            _ => Ok(()),
        }
    }

    /// The set of worlds where `e` holds.
    pub fn table(&self, e: &Event) -> WorldSet {
        let size = self.world_count();
        match e {
            Event::True => WorldSet::full(size),
            Event::False => WorldSet::empty(size),
            Event::Atom(i) => self.atom_tables[*i].clone(),
            Event::Not(a) => self.table(a).complement(),
            Event::And(a, b) => &self.table(a) & &self.table(b),
            Event::Or(a, b) => &self.table(a) | &self.table(b),
        }
    }

    pub fn is_satisfiable(&self, e: &Event) -> bool {
        !self.table(e).is_empty()
    }

    pub fn implies(&self, a: &Event, b: &Event) -> bool {
        self.table(a).is_subset(&self.table(b))
    }

    pub fn equivalent(&self, a: &Event, b: &Event) -> bool {
        self.table(a) == self.table(b)
    }

    pub fn render(&self, e: &Event) -> String {
        render_event(e, &|i| self.names[i].clone())
    }

    pub fn render_world(&self, w: World) -> String {
        let parts: Vec<String> =
            (0..self.len()).map(|i| format!("{}={}", self.names[i], u8::from(w.value(i)))).collect();
        parts.join(" ")
    }

    /// Builds `consequent | antecedent` after checking the antecedent is possible.
    pub fn cond(&self, consequent: Event, antecedent: Event) -> Result<ConditionalEvent> {
        self.check_event(&consequent)?;
        self.check_event(&antecedent)?;
        if !self.is_satisfiable(&antecedent) {
            return Err(Error::ImpossibleAntecedent(self.render(&antecedent)));
        }
        Ok(ConditionalEvent { consequent, antecedent })
    }

    pub fn unconditional(&self, e: Event) -> Result<ConditionalEvent> {
        self.cond(e, Event::True)
    }

    pub fn cond_tables(&self, c: &ConditionalEvent) -> CondTables {
        let ante = self.table(&c.antecedent);
        let cons = self.table(&c.consequent);
        CondTables { truth: &cons & &ante, falsity: ante.minus(&cons) }
    }

    pub fn eval_cond(&self, c: &ConditionalEvent, w: World) -> TrivalentValue {
        if !c.antecedent.eval(w) {
            TrivalentValue::Void
        } else if c.consequent.eval(w) {
            TrivalentValue::True
        } else {
            TrivalentValue::False
        }
    }

    /// Same trivalent value in every world.
    pub fn cond_equivalent(&self, a: &ConditionalEvent, b: &ConditionalEvent) -> bool {
        self.cond_tables(a) == self.cond_tables(b)
    }

    pub fn render_cond(&self, c: &ConditionalEvent) -> String {
        if c.antecedent == Event::True {
            self.render(&c.consequent)
        } else {
            format!("({} given {})", self.render(&c.consequent), self.render(&c.antecedent))
        }
    }
}

// ---------------------------------------------------------------------------
// Conditional events
// ---------------------------------------------------------------------------

/// `E|H`: true on `EH`, false on `¬E H`, void on `¬H`. Constructed through
/// [`Universe::cond`], which rejects impossible antecedents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ConditionalEvent {
    consequent: Event,
    antecedent: Event,
}

impl ConditionalEvent {
    pub fn consequent(&self) -> &Event {
        &self.consequent
    }

    pub fn antecedent(&self) -> &Event {
        &self.antecedent
    }

    /// `E H`, the event on which the conditional is true.
    pub fn truth_event(&self) -> Event {
        self.consequent.clone() & self.antecedent.clone()
    }

    /// `¬E H`, the event on which the conditional is false.
    pub fn falsity_event(&self) -> Event {
        !self.consequent.clone() & self.antecedent.clone()
    }

    /// `¬E|H`.
    pub fn negate(&self) -> ConditionalEvent {
        ConditionalEvent { consequent: !self.consequent.clone(), antecedent: self.antecedent.clone() }
    }
}

/// The truth and falsity regions of a conditional; the rest is void.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CondTables {
    pub truth: WorldSet,
    pub falsity: WorldSet,
}

impl CondTables {
    pub fn antecedent(&self) -> WorldSet {
        &self.truth | &self.falsity
    }
}

/// Goodman–Nguyen inclusion: `E1H1 ⊆ E2H2` and `¬E2H2 ⊆ ¬E1H1`.
pub fn gn_implies(u: &Universe, c1: &ConditionalEvent, c2: &ConditionalEvent) -> bool {
    let t1 = u.cond_tables(c1);
    let t2 = u.cond_tables(c2);
    t1.truth.is_subset(&t2.truth) && t2.falsity.is_subset(&t1.falsity)
}

/// `⋀(¬Hi ∨ EiHi) | ⋁Hi`.
pub fn quasi_conjunction(fam: &[ConditionalEvent]) -> Result<ConditionalEvent> {
    if fam.is_empty() {
        return Err(Error::Argument("quasi conjunction of an empty family".into()));
    }
    let consequent =
        Event::all(fam.iter().map(|c| !c.antecedent.clone() | (c.consequent.clone() & c.antecedent.clone())));
    let antecedent = Event::any(fam.iter().map(|c| c.antecedent.clone()));
    Ok(ConditionalEvent { consequent, antecedent })
}

/// Result of a trivalent operator whose antecedent may come out impossible.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TriEvent {
    Defined(ConditionalEvent),
    /// `∅|∅`, or more generally a consequent over an impossible antecedent.
    Undefined {
        consequent: Event,
        antecedent: Event,
    },
}

impl TriEvent {
    pub fn defined(&self) -> Option<&ConditionalEvent> {
        match self {
            TriEvent::Defined(c) => Some(c),
            TriEvent::Undefined { .. } => None,
        }
    }

    fn build(u: &Universe, consequent: Event, antecedent: Event) -> TriEvent {
        if u.is_satisfiable(&antecedent) {
            TriEvent::Defined(ConditionalEvent { consequent, antecedent })
        } else {
            TriEvent::Undefined { consequent, antecedent }
        }
    }
}

/// Trivalent conjunction: `⋀EiHi | (⋀EiHi ∨ ⋁¬EiHi)`.
pub fn df_conjunction(u: &Universe, fam: &[ConditionalEvent]) -> Result<TriEvent> {
    if fam.is_empty() {
        return Err(Error::Argument("conjunction of an empty family".into()));
    }
    let all_true = Event::all(fam.iter().map(ConditionalEvent::truth_event));
    let some_false = Event::any(fam.iter().map(ConditionalEvent::falsity_event));
    Ok(TriEvent::build(u, all_true.clone(), all_true | some_false))
}

/// Trivalent iterated conditional: `(B|K) | (A|H) = B | AHK`.
pub fn df_iterated(u: &Universe, consequent: &ConditionalEvent, antecedent: &ConditionalEvent) -> TriEvent {
    let ante = antecedent.truth_event() & consequent.antecedent.clone();
    TriEvent::build(u, consequent.consequent.clone(), ante)
}

pub fn negate(c: &ConditionalEvent) -> ConditionalEvent {
    c.negate()
}

/// Material implication `¬A ∨ B` between events.
pub fn implies(a: Event, b: Event) -> Event {
    !a | b
}

impl fmt::Display for TrivalentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TrivalentValue::True => "T",
            TrivalentValue::False => "F",
            TrivalentValue::Void => "V",
        };
        f.write_str(s)
    }
}
