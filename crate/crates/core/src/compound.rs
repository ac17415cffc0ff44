//! Conjunctions and iterated conditionals as conditional random quantities.
//!
//! A conjunction of `n` conditionals takes value 1 where all are true, 0
//! where any is false, and `x_S` where exactly the members of `S` are void.
//! Previsions `x_S` are inputs keyed by the bitmask of `S`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::coherence::{check_coherence, constituents, extension_interval, Assessment, Constituent, Mark};
use crate::error::{Error, Result};
use crate::logic::{gn_implies, ConditionalEvent, Event, Universe, WorldSet};
use crate::rational::{self, Interval, Rational};

pub const MAX_FAMILY: usize = 24;

pub fn mask_of<I: IntoIterator<Item = usize>>(members: I) -> u32 {
    members.into_iter().fold(0, |m, i| m | 1 << i)
}

fn render_mask(mask: u32) -> String {
    let parts: Vec<String> = (0..32).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Previsions `x_S` keyed by the bitmask of `S` (bit `i` is member `i`).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Previsions(BTreeMap<u32, Rational>);

impl Previsions {
    pub fn new() -> Previsions {
        Previsions::default()
    }

    pub fn from_marginals(xs: &[Rational]) -> Previsions {
        let mut p = Previsions::new();
        for (i, x) in xs.iter().enumerate() {
            p.set(1 << i, x.clone());
        }
        p
    }

    pub fn with(mut self, mask: u32, q: Rational) -> Previsions {
        self.set(mask, q);
        self
    }

    pub fn set(&mut self, mask: u32, q: Rational) {
        self.0.insert(mask, q);
    }

    pub fn get(&self, mask: u32) -> Option<&Rational> {
        self.0.get(&mask)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.0.iter().map(|(m, q)| (*m, q))
    }

    /// Entries whose mask lies inside `within`, renumbered onto its members.
    pub fn restrict(&self, within: &[usize]) -> Previsions {
        let outer = mask_of(within.iter().copied());
        let mut out = Previsions::new();
        for (m, q) in self.iter() {
            if m & !outer == 0 {
                let inner = mask_of(within.iter().enumerate().filter(|(_, i)| m >> **i & 1 == 1).map(|(k, _)| k));
                out.set(inner, q.clone());
            }
        }
        out
    }
}

/// Probability distribution over the worlds of a universe.
#[derive(Clone, PartialEq, Debug)]
pub struct WorldDist {
    probs: Vec<Rational>,
}

impl WorldDist {
    pub fn new(u: &Universe, probs: Vec<Rational>) -> Result<WorldDist> {
        if probs.len() != u.world_count() {
            return Err(Error::Argument(format!("{} world weights for {} worlds", probs.len(), u.world_count())));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::Argument("negative world weight".into()));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::Argument(format!("world weights sum to {}", rational::render(&total))));
        }
        Ok(WorldDist { probs })
    }

    pub fn uniform(u: &Universe) -> WorldDist {
        let n = u.world_count();
        WorldDist { probs: vec![rational::ratio(1, n as i64); n] }
    }

    pub fn prob(&self, s: &WorldSet) -> Rational {
        s.iter().map(|w| &self.probs[w]).sum()
    }

    pub fn prob_event(&self, u: &Universe, e: &Event) -> Rational {
        self.prob(&u.table(e))
    }

    pub fn weight(&self, world: usize) -> &Rational {
        &self.probs[world]
    }

    /// `P(E|H)`, failing when `P(H) = 0`.
    pub fn cond_prob(&self, u: &Universe, c: &ConditionalEvent) -> Result<Rational> {
        let h = self.prob_event(u, c.antecedent());
        if h.is_zero() {
            return Err(Error::ZeroConditioning(u.render(c.antecedent())));
        }
        Ok(self.prob_event(u, &c.truth_event()) / h)
    }
}

pub fn frechet_bounds(xs: &[Rational]) -> Interval {
    let n = Rational::from_integer(xs.len().into());
    let sum: Rational = xs.iter().sum();
    let lo = (sum - n + Rational::one()).max(Rational::zero());
    let hi = xs.iter().min().cloned().unwrap_or_else(Rational::one);
    Interval { lo, hi }
}

fn void_mask(pattern: &[Mark]) -> u32 {
    mask_of(pattern.iter().enumerate().filter(|(_, m)| **m == Mark::Void).map(|(i, _)| i))
}

fn conjunction_value(pattern: &[Mark], prev: &Previsions) -> Result<Rational> {
    if pattern.contains(&Mark::False) {
        return Ok(Rational::zero());
    }
    let s = void_mask(pattern);
    if s == 0 {
        return Ok(Rational::one());
    }
    prev.get(s).cloned().ok_or_else(|| Error::Argument(format!("missing prevision x_S for S = {}", render_mask(s))))
}

/// The conjunction of a family as a random quantity over its constituents.
#[derive(Clone, PartialEq, Debug)]
pub struct ValueTable {
    family: Vec<ConditionalEvent>,
    previsions: Previsions,
    constituents: Vec<Constituent>,
    values: Vec<Rational>,
}

impl ValueTable {
    pub fn family(&self) -> &[ConditionalEvent] {
        &self.family
    }

    pub fn previsions(&self) -> &Previsions {
        &self.previsions
    }

    /// `x_{1..n}`.
    pub fn prevision(&self) -> &Rational {
        self.previsions.get(full_mask(self.family.len())).expect("validated at construction")
    }

    pub fn constituents(&self) -> &[Constituent] {
        &self.constituents
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Constituent, &Rational)> {
        self.constituents.iter().zip(&self.values)
    }

    pub fn value_at(&self, pattern: &[Mark]) -> Result<Rational> {
        conjunction_value(pattern, &self.previsions)
    }

    /// `Σ value · P(worlds)` over the constituents inside `⋁Hi`, divided by `P(⋁Hi)`.
    pub fn expectation(&self, dist: &WorldDist) -> Result<Rational> {
        let mut num = Rational::zero();
        let mut den = Rational::zero();
        for (c, v) in self.rows() {
            if c.is_all_void() {
                continue;
            }
            let p: Rational = c.worlds.iter().map(|w| dist.weight(w.index())).sum();
            num += v * &p;
            den += p;
        }
        if den.is_zero() {
            return Err(Error::ZeroConditioning("disjunction of the antecedents".into()));
        }
        Ok(num / den)
    }
}

fn full_mask(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

fn validate_previsions(u: &Universe, fam: &[ConditionalEvent], prev: &Previsions, need_full: bool) -> Result<()> {
    let n = fam.len();
    if n == 0 {
        return Err(Error::Argument("conjunction of an empty family".into()));
    }
    if n > MAX_FAMILY {
        return Err(Error::Unsupported(format!("conjunction of {n} conditionals (limit {MAX_FAMILY})")));
    }
    let full = full_mask(n);
    for (m, q) in prev.iter() {
        if m == 0 || m & !full != 0 {
            return Err(Error::Argument(format!("prevision key {m} does not name a subfamily")));
        }
        rational::check_unit(q)?;
    }
    for (i, c) in fam.iter().enumerate() {
        let x = prev.get(1 << i).ok_or_else(|| Error::Argument(format!("missing marginal x_{}", i + 1)))?;
        let single = Assessment::new(vec![(c.clone(), x.clone())])?;
        if !check_coherence(u, &single)?.coherent {
            return Err(Error::Constraint(format!(
                "P({}) = {} is not coherent",
                u.render_cond(c),
                rational::render(x)
            )));
        }
    }
    if need_full && prev.get(full).is_none() {
        return Err(Error::Argument(format!("missing prevision x_S for S = {}", render_mask(full))));
    }
    for (m, q) in prev.iter() {
        if m.count_ones() < 2 {
            continue;
        }
        let marg: Vec<Rational> =
            (0..n).filter(|i| m >> i & 1 == 1).map(|i| prev.get(1 << i).unwrap().clone()).collect();
        let fb = frechet_bounds(&marg);
        if !fb.contains(q) {
            return Err(Error::Constraint(format!(
                "x_S = {} for S = {} lies outside the Fréchet bounds {}",
                rational::render(q),
                render_mask(m),
                fb
            )));
        }
        for (sub, qs) in prev.iter() {
            if sub != m && sub & !m == 0 && q > qs {
                return Err(Error::Constraint(format!(
                    "x_S = {} for S = {} exceeds x_S = {} for its subfamily {}",
                    rational::render(q),
                    render_mask(m),
                    rational::render(qs),
                    render_mask(sub)
                )));
            }
        }
    }
    Ok(())
}

pub fn conjunction_table(u: &Universe, fam: &[ConditionalEvent], prev: &Previsions) -> Result<ValueTable> {
    validate_previsions(u, fam, prev, true)?;
    let cons = constituents(u, fam)?;
    let values = cons.iter().map(|c| conjunction_value(&c.pattern, prev)).collect::<Result<Vec<_>>>()?;
    Ok(ValueTable { family: fam.to_vec(), previsions: prev.clone(), constituents: cons, values })
}

/// `x_{1..n}` as the expectation of the table given `⋁Hi`, from the strict
/// sub-previsions and a world distribution.
pub fn conjunction_prevision(
    u: &Universe,
    fam: &[ConditionalEvent],
    prev: &Previsions,
    dist: &WorldDist,
) -> Result<Rational> {
    validate_previsions(u, fam, prev, false)?;
    let cons = constituents(u, fam)?;
    let mut num = Rational::zero();
    let mut den = Rational::zero();
    for c in cons.iter().filter(|c| !c.is_all_void()) {
        let p: Rational = c.worlds.iter().map(|w| dist.weight(w.index())).sum();
        if p.is_zero() {
            continue;
        }
        num += conjunction_value(&c.pattern, prev)? * &p;
        den += p;
    }
    if den.is_zero() {
        return Err(Error::ZeroConditioning("disjunction of the antecedents".into()));
    }
    Ok(num / den)
}

/// Builds the table with `x_{1..n}` computed from `dist`.
pub fn conjunction_table_from_dist(
    u: &Universe,
    fam: &[ConditionalEvent],
    prev: &Previsions,
    dist: &WorldDist,
) -> Result<ValueTable> {
    let z = conjunction_prevision(u, fam, prev, dist)?;
    conjunction_table(u, fam, &prev.clone().with(full_mask(fam.len()), z))
}

/// `z = [P(AHBK) + x·P(¬H BK) + y·P(AH ¬K)] / P(H ∨ K)`.
pub fn conjunction_prevision_pair(
    u: &Universe,
    c1: &ConditionalEvent,
    c2: &ConditionalEvent,
    x: &Rational,
    y: &Rational,
    dist: &WorldDist,
) -> Result<Rational> {
    let (a, h) = (c1.consequent().clone(), c1.antecedent().clone());
    let (b, k) = (c2.consequent().clone(), c2.antecedent().clone());
    let hk = dist.prob_event(u, &(h.clone() | k.clone()));
    if hk.is_zero() {
        return Err(Error::ZeroConditioning(format!("{} | {}", u.render(&h), u.render(&k))));
    }
    let both = dist.prob_event(u, &(a.clone() & h.clone() & b.clone() & k.clone()));
    let second_only = dist.prob_event(u, &(!h.clone() & b & k.clone()));
    let first_only = dist.prob_event(u, &(a & h & !k));
    Ok((both + x * second_only + y * first_only) / hk)
}

/// `AHBK | (H ∨ K)` when `AH¬K` and `¬HBK` are both impossible.
pub fn reduce_pair_special(u: &Universe, c1: &ConditionalEvent, c2: &ConditionalEvent) -> Option<ConditionalEvent> {
    let (a, h) = (c1.consequent().clone(), c1.antecedent().clone());
    let (b, k) = (c2.consequent().clone(), c2.antecedent().clone());
    let ahnk = a.clone() & h.clone() & !k.clone();
    let nhbk = !h.clone() & b.clone() & k.clone();
    if u.is_satisfiable(&ahnk) || u.is_satisfiable(&nhbk) {
        return None;
    }
    u.cond(a & h.clone() & b & k.clone(), h | k).ok()
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ConjunctionRule {
    /// The first conditional is pointwise below the second.
    FirstBelowSecond,
    SecondBelowFirst,
    /// The pair reduces to a single conditional event.
    Reduction,
    /// No closed form; only the Fréchet bounds apply.
    Frechet,
}

impl ConjunctionRule {
    pub fn describe(self) -> &'static str {
        match self {
            ConjunctionRule::FirstBelowSecond => "first conditional below second",
            ConjunctionRule::SecondBelowFirst => "second conditional below first",
            ConjunctionRule::Reduction => "reduces to a conditional event",
            ConjunctionRule::Frechet => "Fréchet bounds only",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairConjunction {
    pub interval: Interval,
    pub rule: ConjunctionRule,
}

/// `c1 ≤ c2` as random quantities whatever the void values.
fn below(u: &Universe, c1: &ConditionalEvent, c2: &ConditionalEvent) -> bool {
    gn_implies(u, c1, c2) || !u.is_satisfiable(&c1.truth_event()) || u.implies(c2.antecedent(), c2.consequent())
}

/// The coherent prevision of `c1 ∧ c2` from `x = P(c1)` and `y = P(c2)` alone.
pub fn conjunction_prevision_closed_form(
    u: &Universe,
    c1: &ConditionalEvent,
    c2: &ConditionalEvent,
    x: &Rational,
    y: &Rational,
) -> Result<PairConjunction> {
    let base = Assessment::new(vec![(c1.clone(), x.clone()), (c2.clone(), y.clone())])?;
    if !check_coherence(u, &base)?.coherent {
        return Err(Error::Constraint(format!(
            "the assessment ({}, {}) on the pair is not coherent",
            rational::render(x),
            rational::render(y)
        )));
    }
    let fb = frechet_bounds(&[x.clone(), y.clone()]);
    let (interval, rule) = if below(u, c1, c2) {
        (Interval::point(x.clone()), ConjunctionRule::FirstBelowSecond)
    } else if below(u, c2, c1) {
        (Interval::point(y.clone()), ConjunctionRule::SecondBelowFirst)
    } else if let Some(c) = reduce_pair_special(u, c1, c2) {
        (extension_interval(u, &base, &c)?, ConjunctionRule::Reduction)
    } else {
        (fb.clone(), ConjunctionRule::Frechet)
    };
    if !fb.contains(&interval.lo) || !fb.contains(&interval.hi) {
        return Err(Error::Internal(format!("conjunction prevision {interval} escapes the Fréchet bounds {fb}")));
    }
    Ok(PairConjunction { interval, rule })
}

/// Prevision of an iterated conditional: a point when the antecedent has
/// positive prevision, otherwise the coherent interval.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Mu {
    Point(Rational),
    Interval(Interval),
}

impl Mu {
    pub fn point(&self) -> Option<&Rational> {
        match self {
            Mu::Point(q) => Some(q),
            Mu::Interval(_) => None,
        }
    }

    pub fn interval(&self) -> Interval {
        match self {
            Mu::Point(q) => Interval::point(q.clone()),
            Mu::Interval(i) => i.clone(),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct IteratedRow {
    /// Marks over the antecedent family followed by the consequent.
    pub pattern: Vec<Mark>,
    pub first_world: usize,
    pub conjunction: Rational,
    pub antecedent: Rational,
}

/// `cons | 𝒞(ante)` with values `𝒞(ante ∪ {cons}) + μ(1 − 𝒞(ante))`.
#[derive(Clone, PartialEq, Debug)]
pub struct IteratedTable {
    consequent: ConditionalEvent,
    antecedent: ValueTable,
    conjunction: ValueTable,
    mu: Mu,
    rows: Vec<IteratedRow>,
}

impl IteratedTable {
    pub fn consequent(&self) -> &ConditionalEvent {
        &self.consequent
    }

    pub fn antecedent(&self) -> &ValueTable {
        &self.antecedent
    }

    pub fn conjunction(&self) -> &ValueTable {
        &self.conjunction
    }

    pub fn mu(&self) -> &Mu {
        &self.mu
    }

    pub fn rows(&self) -> &[IteratedRow] {
        &self.rows
    }

    pub fn value_with(&self, row: &IteratedRow, mu: &Rational) -> Rational {
        &row.conjunction + mu * (Rational::one() - &row.antecedent)
    }

    /// Row values; `None` when μ is only known as an interval.
    pub fn values(&self) -> Option<Vec<Rational>> {
        let mu = self.mu.point()?;
        Some(self.rows.iter().map(|r| self.value_with(r, mu)).collect())
    }

    /// Expectation of the table under `dist`, over all worlds.
    pub fn expectation(&self, u: &Universe, dist: &WorldDist) -> Option<Rational> {
        let mu = self.mu.point()?;
        let fam: Vec<ConditionalEvent> = self.conjunction.family().to_vec();
        let cons = constituents(u, &fam).ok()?;
        let mut total = Rational::zero();
        for c in &cons {
            let row = self.rows.iter().find(|r| r.pattern == c.pattern)?;
            let p: Rational = c.worlds.iter().map(|w| dist.weight(w.index())).sum();
            total += self.value_with(row, mu) * p;
        }
        Some(total)
    }
}

/// `prev` covers the antecedent family (bits `0..n`) and the consequent (bit `n`).
pub fn iterated_table(
    u: &Universe,
    cons: &ConditionalEvent,
    ante: &[ConditionalEvent],
    prev: &Previsions,
) -> Result<IteratedTable> {
    let n = ante.len();
    let ante_idx: Vec<usize> = (0..n).collect();
    let antecedent = conjunction_table(u, ante, &prev.restrict(&ante_idx))?;
    if antecedent.values().iter().all(Zero::is_zero) {
        return Err(Error::Precondition("the antecedent conjunction is identically 0".into()));
    }
    let mut fam = ante.to_vec();
    fam.push(cons.clone());
    let conjunction = conjunction_table(u, &fam, prev)?;
    let mut rows = Vec::with_capacity(conjunction.constituents().len());
    for (c, v) in conjunction.rows() {
        rows.push(IteratedRow {
            pattern: c.pattern.clone(),
            first_world: c.worlds[0].index(),
            conjunction: v.clone(),
            antecedent: antecedent.value_at(&c.pattern[..n])?,
        });
    }
    let x = antecedent.prevision().clone();
    let z = conjunction.prevision().clone();
    let mu = if x.is_positive() {
        Mu::Point(z / x)
    } else {
        let ratios: Vec<Rational> =
            rows.iter().filter(|r| r.antecedent.is_positive()).map(|r| &r.conjunction / &r.antecedent).collect();
        let lo = ratios.iter().min().cloned().expect("the antecedent table is not identically 0");
        let hi = ratios.iter().max().cloned().expect("the antecedent table is not identically 0");
        Mu::Interval(Interval::new(lo, hi))
    };
    Ok(IteratedTable { consequent: cons.clone(), antecedent, conjunction, mu, rows })
}

/// The same iterated conditional with its consequent negated; the conjunction
/// previsions become `x_{S∖c} − x_S` on sets containing the consequent.
pub fn negated_iterated_table(u: &Universe, t: &IteratedTable) -> Result<IteratedTable> {
    let n = t.antecedent.family().len();
    let c = 1u32 << n;
    let src = t.conjunction.previsions();
    let mut prev = Previsions::new();
    for (m, q) in src.iter() {
        if m & c == 0 {
            prev.set(m, q.clone());
        } else if m == c {
            prev.set(m, Rational::one() - q);
        } else {
            let rest = src
                .get(m & !c)
                .ok_or_else(|| Error::Argument(format!("negation needs x_S for S = {}", render_mask(m & !c))))?;
            prev.set(m, rest - q);
        }
    }
    iterated_table(u, &t.consequent.negate(), t.antecedent.family(), &prev)
}

/// Checks `(¬B|K)|𝒞 = 1 − (B|K)|𝒞` constituent-wise and `μ + ν = 1`.
pub fn iterated_negation_check(u: &Universe, t: &IteratedTable) -> Result<bool> {
    let neg = negated_iterated_table(u, t)?;
    let by_world: BTreeMap<usize, &IteratedRow> = neg.rows.iter().map(|r| (r.first_world, r)).collect();
    let one = Rational::one();
    match (t.mu.point(), neg.mu.point()) {
        (Some(mu), Some(nu)) => {
            if mu + nu != one {
                return Ok(false);
            }
            for r in &t.rows {
                let Some(nr) = by_world.get(&r.first_world) else { return Ok(false) };
                if t.value_with(r, mu) + neg.value_with(nr, nu) != one {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (None, None) => {
            for r in &t.rows {
                let Some(nr) = by_world.get(&r.first_world) else { return Ok(false) };
                if &r.conjunction + &nr.conjunction != r.antecedent {
                    return Ok(false);
                }
            }
            let (a, b) = (t.mu.interval(), neg.mu.interval());
            Ok(a.lo.clone() + &b.hi == one && a.hi.clone() + &b.lo == one)
        }
        _ => Ok(false),
    }
}

/// `z = xy/(x+y−xy)` (0 when `x = y = 0`) and `μ = x + y − z` for the
/// biconditional `(A|B) ∧ (B|A)` and its companion.
pub fn biconditional_values(x: &Rational, y: &Rational) -> (Rational, Rational) {
    let s = x + y;
    let z = if s.is_zero() { Rational::zero() } else { x * y / (&s - x * y) };
    let mu = s - &z;
    (z, mu)
}

/// Checks `(A|H)∧(B|K) + (A|H)∧(¬B|K) = A|H` constituent-wise for
/// `z + η = x`.
#[allow(clippy::too_many_arguments)]
pub fn decomposition_check(
    u: &Universe,
    c1: &ConditionalEvent,
    c2: &ConditionalEvent,
    x: &Rational,
    y: &Rational,
    z: &Rational,
    eta: &Rational,
) -> Result<bool> {
    if z + eta != *x {
        return Err(Error::Constraint(format!(
            "z + η = x fails: {} + {} ≠ {}",
            rational::render(z),
            rational::render(eta),
            rational::render(x)
        )));
    }
    let pos = conjunction_table(
        u,
        &[c1.clone(), c2.clone()],
        &Previsions::from_marginals(&[x.clone(), y.clone()]).with(3, z.clone()),
    )?;
    let neg = conjunction_table(
        u,
        &[c1.clone(), c2.negate()],
        &Previsions::from_marginals(&[x.clone(), Rational::one() - y]).with(3, eta.clone()),
    )?;
    let single = conjunction_table(u, std::slice::from_ref(c1), &Previsions::from_marginals(std::slice::from_ref(x)))?;
    let by_world: BTreeMap<usize, &Rational> = neg.rows().map(|(c, v)| (c.worlds[0].index(), v)).collect();
    for (c, v) in pos.rows() {
        let Some(nv) = by_world.get(&c.worlds[0].index()) else { return Ok(false) };
        if v + *nv != single.value_at(&c.pattern[..1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `𝒞(fam2) ≤ 𝒞(fam1)` on every constituent of `fam2`, where `fam1`
/// is the subfamily at indices `sub`.
pub fn monotonicity_check(u: &Universe, fam2: &[ConditionalEvent], sub: &[usize], prev: &Previsions) -> Result<bool> {
    if sub.is_empty() || sub.iter().any(|&i| i >= fam2.len()) {
        return Err(Error::Argument("subfamily indices must be a nonempty subset of the family".into()));
    }
    let big = conjunction_table(u, fam2, prev)?;
    let fam1: Vec<ConditionalEvent> = sub.iter().map(|&i| fam2[i].clone()).collect();
    let small = conjunction_table(u, &fam1, &prev.restrict(sub))?;
    for (c, v) in big.rows() {
        let proj: Vec<Mark> = sub.iter().map(|&i| c.pattern[i]).collect();
        if *v > small.value_at(&proj)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `c1 ∨ c2 = c1 + c2 − c1 ∧ c2`, per constituent of the pair.
pub fn disjunction_table(
    u: &Universe,
    c1: &ConditionalEvent,
    c2: &ConditionalEvent,
    x: &Rational,
    y: &Rational,
    z: &Rational,
) -> Result<Vec<(Vec<Mark>, Rational)>> {
    let conj = conjunction_table(
        u,
        &[c1.clone(), c2.clone()],
        &Previsions::from_marginals(&[x.clone(), y.clone()]).with(3, z.clone()),
    )?;
    let indicator = |m: Mark, p: &Rational| match m {
        Mark::True => Rational::one(),
        Mark::False => Rational::zero(),
        Mark::Void => p.clone(),
    };
    Ok(conj
        .rows()
        .map(|(c, v)| (c.pattern.clone(), indicator(c.pattern[0], x) + indicator(c.pattern[1], y) - v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn at(i: usize) -> Event {
        Event::atom(i)
    }

    #[test]
    fn frechet_examples() {
        assert_eq!(frechet_bounds(&[int(1), int(1), int(1)]), Interval::point(int(1)));
        assert_eq!(frechet_bounds(&[ratio(1, 2), ratio(1, 2)]), Interval::new(int(0), ratio(1, 2)));
        assert_eq!(frechet_bounds(&vec![ratio(9, 10); 3]), Interval::new(ratio(7, 10), ratio(9, 10)));
    }

    #[test]
    fn pair_table_has_five_value_classes() {
        let u = Universe::new(["A", "H", "B", "K"]).unwrap();
        let fam = [u.cond(at(0), at(1)).unwrap(), u.cond(at(2), at(3)).unwrap()];
        let (x, y, z) = (ratio(1, 2), ratio(1, 3), ratio(1, 5));
        let t = conjunction_table(&u, &fam, &Previsions::from_marginals(&[x.clone(), y.clone()]).with(3, z.clone()))
            .unwrap();
        let classes: std::collections::BTreeSet<Rational> = t.values().iter().cloned().collect();
        let expected: std::collections::BTreeSet<Rational> = [int(1), int(0), x, y, z].into_iter().collect();
        assert_eq!(classes, expected);
        assert_eq!(t.constituents().len(), 9);
    }

    #[test]
    fn a_given_a_and_not_a_given_not_a_is_one() {
        let u = Universe::new(["A"]).unwrap();
        let fam = [u.cond(at(0), at(0)).unwrap(), u.cond(!at(0), !at(0)).unwrap()];
        let t = conjunction_table(&u, &fam, &Previsions::from_marginals(&[int(1), int(1)]).with(3, int(1))).unwrap();
        assert!(t.values().iter().all(|v| v.is_one()));
    }

    #[test]
    fn frechet_violation_rejected() {
        let u = Universe::new(["A", "B"]).unwrap();
        let fam = [u.unconditional(at(0)).unwrap(), u.unconditional(at(1)).unwrap()];
        let p = Previsions::from_marginals(&[ratio(1, 2), ratio(1, 2)]).with(3, ratio(3, 4));
        assert!(matches!(conjunction_table(&u, &fam, &p), Err(Error::Constraint(_))));
    }

    #[test]
    fn pair_formula_on_independent_atoms() {
        let u = Universe::new(["A", "H", "B", "K"]).unwrap();
        let fam = [u.cond(at(0), at(1)).unwrap(), u.cond(at(2), at(3)).unwrap()];
        let d = WorldDist::uniform(&u);
        let z = conjunction_prevision_pair(&u, &fam[0], &fam[1], &ratio(1, 2), &ratio(1, 2), &d).unwrap();
        assert_eq!(z, ratio(1, 4));
        let brute =
            conjunction_prevision(&u, &fam, &Previsions::from_marginals(&[ratio(1, 2), ratio(1, 2)]), &d).unwrap();
        assert_eq!(brute, z);
    }

    #[test]
    fn reductions() {
        let u = Universe::new(["A", "B"]).unwrap();
        let (a, b) = (at(0), at(1));
        let r = reduce_pair_special(
            &u,
            &u.cond(b.clone(), a.clone()).unwrap(),
            &u.cond(a.clone(), a.clone() | b.clone()).unwrap(),
        )
        .unwrap();
        assert!(u.cond_equivalent(&r, &u.cond(a.clone() & b.clone(), a.clone() | b.clone()).unwrap()));
        let r = reduce_pair_special(&u, &u.cond(a.clone(), b.clone()).unwrap(), &u.cond(b.clone(), a.clone()).unwrap())
            .unwrap();
        assert!(u.cond_equivalent(&r, &u.cond(a.clone() & b.clone(), a | b).unwrap()));
        let u = Universe::new(["A", "H", "B", "K"]).unwrap();
        assert!(reduce_pair_special(&u, &u.cond(at(0), at(1)).unwrap(), &u.cond(at(2), at(3)).unwrap()).is_none());
    }

    #[test]
    fn biconditional_closed_forms() {
        assert_eq!(biconditional_values(&int(1), &int(1)), (int(1), int(1)));
        assert_eq!(biconditional_values(&int(0), &int(0)), (int(0), int(0)));
        assert_eq!(biconditional_values(&ratio(1, 2), &ratio(1, 2)), (ratio(1, 3), ratio(2, 3)));
    }

    #[test]
    fn poker_or_to_if() {
        let u = Universe::new(["A", "B"]).unwrap();
        let (a, b) = (at(0), at(1));
        let ante = u.unconditional(a.clone() | b.clone()).unwrap();
        let cons = u.cond(b, !a).unwrap();
        let (x, y) = (ratio(616, 663), ratio(1, 17));
        let pc = conjunction_prevision_closed_form(&u, &ante, &cons, &x, &y).unwrap();
        assert_eq!(pc.rule, ConjunctionRule::SecondBelowFirst);
        let prev = Previsions::from_marginals(&[x.clone(), y.clone()]).with(3, pc.interval.lo.clone());
        let t = iterated_table(&u, &cons, &[ante], &prev).unwrap();
        assert_eq!(t.mu(), &Mu::Point(ratio(39, 616)));
        assert_eq!(t.mu().point().unwrap() * &x, y);
        assert!(iterated_negation_check(&u, &t).unwrap());
    }

    #[test]
    fn zero_antecedent_gives_interval() {
        let u = Universe::new(["A", "H"]).unwrap();
        let (a, h) = (at(0), at(1));
        let ante = u.cond(a, h.clone()).unwrap();
        let cons = u.unconditional(h).unwrap();
        let prev = Previsions::from_marginals(&[int(0), ratio(1, 3)]).with(3, int(0));
        let t = iterated_table(&u, &cons, &[ante], &prev).unwrap();
        assert_eq!(t.mu(), &Mu::Interval(Interval::point(int(1))));
        assert!(iterated_negation_check(&u, &t).unwrap());
    }

    #[test]
    fn identically_zero_antecedent_rejected() {
        let u = Universe::new(["A"]).unwrap();
        let ante = u.cond(!at(0), at(0)).unwrap();
        let cons = u.unconditional(at(0)).unwrap();
        let prev = Previsions::from_marginals(&[int(0), ratio(1, 2)]).with(3, int(0));
        assert!(matches!(iterated_table(&u, &cons, &[ante], &prev), Err(Error::Precondition(_))));
    }

    #[test]
    fn decomposition() {
        let u = Universe::new(["A", "B", "H"]).unwrap();
        let (a, b, h) = (at(0), at(1), at(2));
        let c1 = u.cond(a.clone(), h.clone()).unwrap();
        let c2 = u.cond(b.clone(), h.clone()).unwrap();
        let d = WorldDist::uniform(&u);
        let x = d.cond_prob(&u, &c1).unwrap();
        let y = d.cond_prob(&u, &c2).unwrap();
        let z = d.cond_prob(&u, &u.cond(a.clone() & b.clone(), h.clone()).unwrap()).unwrap();
        let eta = d.cond_prob(&u, &u.cond(a & !b, h).unwrap()).unwrap();
        assert!(decomposition_check(&u, &c1, &c2, &x, &y, &z, &eta).unwrap());
        assert!(decomposition_check(&u, &c1, &c2, &int(1), &int(1), &int(1), &int(0)).unwrap());
        let r = decomposition_check(&u, &c1, &c2, &ratio(1, 2), &ratio(1, 2), &ratio(1, 4), &ratio(1, 8));
        assert!(matches!(r, Err(Error::Constraint(_))));
    }

    #[test]
    fn monotonicity() {
        let u = Universe::new(["A", "H", "B", "K"]).unwrap();
        let fam = [u.cond(at(0), at(1)).unwrap(), u.cond(at(2), at(3)).unwrap()];
        let p = Previsions::from_marginals(&[ratio(1, 2), ratio(2, 3)]).with(3, ratio(1, 3));
        assert!(monotonicity_check(&u, &fam, &[0], &p).unwrap());
        assert!(monotonicity_check(&u, &fam, &[0, 1], &p).unwrap());
        let ones = Previsions::from_marginals(&[int(1), int(1)]).with(3, int(1));
        assert!(monotonicity_check(&u, &fam, &[1], &ones).unwrap());
    }

    #[test]
    fn disjunction_inclusion_exclusion() {
        let u = Universe::new(["A", "H", "B", "K"]).unwrap();
        let (c1, c2) = (u.cond(at(0), at(1)).unwrap(), u.cond(at(2), at(3)).unwrap());
        let rows = disjunction_table(&u, &c1, &c2, &ratio(1, 2), &ratio(1, 3), &ratio(1, 5)).unwrap();
        for (pat, v) in rows {
            let expected = match (pat[0], pat[1]) {
                (Mark::True, _) | (_, Mark::True) => int(1),
                (Mark::False, Mark::False) => int(0),
                (Mark::False, Mark::Void) => ratio(1, 3),
                (Mark::Void, Mark::False) => ratio(1, 2),
                (Mark::Void, Mark::Void) => ratio(1, 2) + ratio(1, 3) - ratio(1, 5),
            };
            assert_eq!(v, expected, "{pat:?}");
        }
    }
}
