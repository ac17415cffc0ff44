//! Helpers shared by the integration suites: an independent coherence oracle
//! built on Fourier–Motzkin elimination, event constructors, and random
//! instance generators.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng as StdRng;

use condlogic::coherence::Mark;
use condlogic::compound::WorldDist;
use condlogic::logic::{ConditionalEvent, Event, Universe};
use condlogic::rational::{int, ratio, Rational};

pub fn universe(names: &[&str]) -> Universe {
    Universe::new(names.iter().copied()).unwrap()
}

pub fn atom(u: &Universe, name: &str) -> Event {
    u.atom(name).unwrap()
}

pub fn cond(u: &Universe, e: Event, h: Event) -> ConditionalEvent {
    u.cond(e, h).unwrap()
}

pub fn event(u: &Universe, e: Event) -> ConditionalEvent {
    u.unconditional(e).unwrap()
}

/// The event true exactly on the worlds whose bit is set in `table`.
pub fn event_from_table(arity: usize, table: u64) -> Event {
    let minterms = (0..1usize << arity).filter(|w| table >> w & 1 == 1).map(|w| {
        Event::all((0..arity).map(|i| {
            let on = w >> (arity - 1 - i) & 1 == 1;
            if on {
                Event::atom(i)
            } else {
                !Event::atom(i)
            }
        }))
    });
    Event::any(minterms)
}

/// Distinct trivalent patterns over the family, the all-void one included,
/// computed world by world from the raw formulas.
pub fn patterns(u: &Universe, fam: &[ConditionalEvent]) -> Vec<Vec<Mark>> {
    let mut set = BTreeSet::new();
    for w in u.worlds() {
        let p: Vec<Mark> = fam
            .iter()
            .map(|c| {
                if !c.antecedent().eval(w) {
                    Mark::Void
                } else if c.consequent().eval(w) {
                    Mark::True
                } else {
                    Mark::False
                }
            })
            .collect();
        set.insert(p);
    }
    set.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Fourier–Motzkin
// ---------------------------------------------------------------------------

/// `a·x + b ≥ 0`, or `> 0` when strict.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Ineq {
    a: Vec<Rational>,
    b: Rational,
    strict: bool,
}

impl Ineq {
    fn normalized(mut self) -> Ineq {
        let scale = self.a.iter().find(|v| !v.is_zero()).map(|v| v.abs());
        if let Some(s) = scale {
            for v in self.a.iter_mut() {
                *v /= &s;
            }
            self.b /= &s;
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    fn constant_holds(&self) -> bool {
        if self.strict {
            self.b.is_positive()
        } else {
            !self.b.is_negative()
        }
    }
}

/// Whether some real `x` satisfies every equality `a·x = b` and inequality.
fn fm_feasible(n: usize, mut eqs: Vec<(Vec<Rational>, Rational)>, ineqs: Vec<Ineq>) -> bool {
    let mut ineqs = ineqs;
    while let Some((a, b)) = eqs.pop() {
        let Some(j) = (0..n).find(|&j| !a[j].is_zero()) else {
            if b.is_zero() {
                continue;
            }
            return false;
        };
        let aj = a[j].clone();
        for (c, d) in eqs.iter_mut() {
            if c[j].is_zero() {
                continue;
            }
            let f = &c[j] / &aj;
            for k in 0..n {
                c[k] -= &f * &a[k];
            }
            *d -= &f * &b;
        }
        for r in ineqs.iter_mut() {
            if r.a[j].is_zero() {
                continue;
            }
            let f = &r.a[j] / &aj;
            for (rk, ak) in r.a.iter_mut().zip(&a) {
                *rk -= &f * ak;
            }
            r.b += &f * &b;
        }
    }

    let mut set: BTreeSet<Ineq> = BTreeSet::new();
    for r in ineqs {
        if r.is_constant() {
            if !r.constant_holds() {
                return false;
            }
        } else {
            set.insert(r.normalized());
        }
    }
    loop {
        let Some(j) = (0..n).filter(|&j| set.iter().any(|r| !r.a[j].is_zero())).min_by_key(|&j| {
            let pos = set.iter().filter(|r| r.a[j].is_positive()).count();
            let neg = set.iter().filter(|r| r.a[j].is_negative()).count();
            pos * neg
        }) else {
            return true;
        };
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), BTreeSet::new());
        for r in set {
            if r.a[j].is_positive() {
                pos.push(r);
            } else if r.a[j].is_negative() {
                neg.push(r);
            } else {
                rest.insert(r);
            }
        }
        for p in &pos {
            for m in &neg {
                let (fp, fm) = (-&m.a[j], p.a[j].clone());
                let a: Vec<Rational> = p.a.iter().zip(&m.a).map(|(x, y)| &fp * x + &fm * y).collect();
                let r = Ineq { a, b: &fp * &p.b + &fm * &m.b, strict: p.strict || m.strict };
                if r.is_constant() {
                    if !r.constant_holds() {
                        return false;
                    }
                } else {
                    rest.insert(r.normalized());
                }
            }
        }
        set = rest;
    }
}

fn projected(patterns: &[Vec<Mark>], members: &[usize]) -> Vec<Vec<Mark>> {
    let set: BTreeSet<Vec<Mark>> = patterns
        .iter()
        .map(|p| members.iter().map(|&i| p[i]).collect::<Vec<_>>())
        .filter(|p| p.iter().any(|m| *m != Mark::Void))
        .collect();
    set.into_iter().collect()
}

/// Mixture weights `λ ≥ 0`, `Σλ = 1`, reproducing the values of `members`,
/// optionally with positive mass on the antecedent of member `positive`.
fn layer_feasible(vars: &[Vec<Mark>], values: &[Rational], positive: Option<usize>) -> bool {
    let m = vars.len();
    let mut eqs = vec![(vec![Rational::one(); m], Rational::one())];
    for (k, p) in values.iter().enumerate() {
        let row = vars
            .iter()
            .map(|v| match v[k] {
                Mark::True => Rational::one() - p,
                Mark::False => -p.clone(),
                Mark::Void => Rational::zero(),
            })
            .collect();
        eqs.push((row, Rational::zero()));
    }
    let mut ineqs: Vec<Ineq> = (0..m)
        .map(|h| {
            let mut a = vec![Rational::zero(); m];
            a[h] = Rational::one();
            Ineq { a, b: Rational::zero(), strict: false }
        })
        .collect();
    if let Some(k) = positive {
        let a = vars.iter().map(|v| if v[k] != Mark::Void { Rational::one() } else { Rational::zero() }).collect();
        ineqs.push(Ineq { a, b: Rational::zero(), strict: true });
    }
    fm_feasible(m, eqs, ineqs)
}

/// Coherence by the convex-hull condition with recursion on the members
/// whose antecedents must carry zero mass.
pub fn fm_coherent(patterns: &[Vec<Mark>], values: &[Rational]) -> bool {
    let mut members: Vec<usize> = (0..values.len()).collect();
    while !members.is_empty() {
        let vars = projected(patterns, &members);
        let vals: Vec<Rational> = members.iter().map(|&i| values[i].clone()).collect();
        if !layer_feasible(&vars, &vals, None) {
            return false;
        }
        let zero: Vec<usize> =
            (0..members.len()).filter(|&k| !layer_feasible(&vars, &vals, Some(k))).map(|k| members[k]).collect();
        assert!(zero.len() < members.len(), "some member always carries mass");
        members = zero;
    }
    true
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

pub const GRID: [(i64, i64); 7] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)];

pub fn grid_value(rng: &mut StdRng) -> Rational {
    let (n, d) = GRID[rng.gen_range(0..GRID.len())];
    ratio(n, d)
}

/// Random event over `arity` atoms; nonempty when `nonempty` is set.
pub fn random_event(rng: &mut StdRng, arity: usize, nonempty: bool) -> Event {
    let worlds = 1u64 << arity;
    let full = if worlds == 64 { u64::MAX } else { (1u64 << worlds) - 1 };
    loop {
        let t = rng.gen::<u64>() & full;
        if !nonempty || t != 0 {
            return event_from_table(arity, t);
        }
    }
}

pub fn random_cond(rng: &mut StdRng, u: &Universe) -> ConditionalEvent {
    let h = random_event(rng, u.len(), true);
    let e = random_event(rng, u.len(), false);
    u.cond(e, h).unwrap()
}

/// Random distribution with small integer weights; some worlds get 0.
pub fn random_dist(rng: &mut StdRng, u: &Universe, zero_chance: f64) -> WorldDist {
    loop {
        let w: Vec<i64> =
            (0..u.world_count()).map(|_| if rng.gen_bool(zero_chance) { 0 } else { rng.gen_range(1..=6) }).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return WorldDist::new(u, w.iter().map(|&x| ratio(x, total)).collect()).unwrap();
        }
    }
}

pub fn half() -> Rational {
    ratio(1, 2)
}

pub fn one() -> Rational {
    int(1)
}

pub fn zero() -> Rational {
    int(0)
}

// ---------------------------------------------------------------------------
// Exhaustive domains up to symmetry
// ---------------------------------------------------------------------------

/// A conditional event as its truth and falsity world masks.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Tri {
    pub truth: u64,
    pub falsity: u64,
}

impl Tri {
    pub fn to_cond(self, u: &Universe) -> ConditionalEvent {
        let e = event_from_table(u.len(), self.truth);
        let h = event_from_table(u.len(), self.truth | self.falsity);
        u.cond(e, h).unwrap()
    }
}

pub fn tri_of(u: &Universe, c: &ConditionalEvent) -> Tri {
    let (mut truth, mut falsity) = (0, 0);
    for w in u.worlds() {
        if c.antecedent().eval(w) {
            if c.consequent().eval(w) {
                truth |= 1 << w.index();
            } else {
                falsity |= 1 << w.index();
            }
        }
    }
    Tri { truth, falsity }
}

/// Every conditional event over `arity` atoms, one per trivalent table.
pub fn all_conditionals(arity: usize) -> Vec<Tri> {
    let worlds = 1usize << arity;
    let mut out = Vec::new();
    for code in 1..3u64.pow(worlds as u32) {
        let (mut c, mut t, mut f) = (code, 0u64, 0u64);
        for w in 0..worlds {
            match c % 3 {
                1 => t |= 1 << w,
                2 => f |= 1 << w,
                _ => {}
            }
            c /= 3;
        }
        if t | f != 0 {
            out.push(Tri { truth: t, falsity: f });
        }
    }
    out
}

fn literal_table(arity: usize, atom: usize, positive: bool) -> u64 {
    (0..1u64 << arity).filter(|w| (w >> (arity - 1 - atom) & 1 == 1) == positive).fold(0, |m, w| m | 1 << w)
}

/// `E|H` with `E` a literal and `H` either `T`, a literal, or a conjunction
/// or disjunction of two literals on distinct atoms; one per trivalent table.
pub fn literal_fragment(arity: usize) -> Vec<Tri> {
    let full = (1u64 << (1 << arity)) - 1;
    let lits: Vec<u64> =
        (0..arity).flat_map(|a| [literal_table(arity, a, true), literal_table(arity, a, false)]).collect();
    let mut antecedents = vec![full];
    antecedents.extend(&lits);
    for a in 0..arity {
        for b in a + 1..arity {
            for pa in [true, false] {
                for pb in [true, false] {
                    let (x, y) = (literal_table(arity, a, pa), literal_table(arity, b, pb));
                    antecedents.push(x & y);
                    antecedents.push(x | y);
                }
            }
        }
    }
    let mut set = BTreeSet::new();
    for &h in &antecedents {
        for &e in &lits {
            set.insert(Tri { truth: e & h, falsity: !e & h });
        }
    }
    set.into_iter().collect()
}

/// World maps for every atom permutation combined with every polarity flip.
pub fn symmetries(arity: usize) -> Vec<Vec<usize>> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let worlds = 1usize << arity;
    let mut out = Vec::new();
    for p in perms(arity) {
        for flips in 0..worlds {
            let map = (0..worlds)
                .map(|w| {
                    (0..arity).fold(0, |acc, i| {
                        let bit = (w >> (arity - 1 - i) & 1) ^ (flips >> i & 1);
                        acc | bit << (arity - 1 - p[i])
                    })
                })
                .collect();
            out.push(map);
        }
    }
    out
}

fn permute_mask(map: &[usize], m: u64) -> u64 {
    map.iter().enumerate().filter(|(w, _)| m >> w & 1 == 1).fold(0, |acc, (_, &v)| acc | 1 << v)
}

pub fn apply(map: &[usize], t: Tri) -> Tri {
    Tri { truth: permute_mask(map, t.truth), falsity: permute_mask(map, t.falsity) }
}

/// Index sets of `size` distinct pool members, one per symmetry orbit.
/// The pool must be closed under the symmetries.
pub fn canonical_families(pool: &[Tri], size: usize, syms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let index: std::collections::HashMap<Tri, usize> = pool.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let images: Vec<Vec<usize>> = syms.iter().map(|g| pool.iter().map(|t| index[&apply(g, *t)]).collect()).collect();
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..size).collect();
    if size > pool.len() {
        return out;
    }
    loop {
        let minimal = images.iter().all(|img| {
            let mut mapped: Vec<usize> = combo.iter().map(|&i| img[i]).collect();
            mapped.sort_unstable();
            mapped >= combo
        });
        if minimal {
            out.push(combo.clone());
        }
        let mut k = size;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if combo[k] < pool.len() - size + k {
                combo[k] += 1;
                for j in k + 1..size {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}
