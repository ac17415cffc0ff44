//! Coherence of conditional probability assessments by the geometric method:
//! the assessment must be a convex combination of the constituent points,
//! layer by layer over the conditionals whose antecedents get zero mass.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{ConditionalEvent, Universe, World};
use crate::lp::{self, LpOutcome};
use crate::rational::{self, Interval, Rational};

/// Families larger than this have more than 2^16 sub-layers to scan when
/// extending, which is refused.
pub const MAX_EXTENSION_BASE: usize = 16;

/// Mark of one conditional inside a constituent; the order lists true, false,
/// then void.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Mark {
    True,
    False,
    Void,
}

impl Mark {
    pub fn symbol(self) -> char {
        match self {
            Mark::True => 'T',
            Mark::False => 'F',
            Mark::Void => 'V',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Constituent {
    pub pattern: Vec<Mark>,
    pub worlds: Vec<World>,
}

impl Constituent {
    /// The constituent `⋀¬Hi` lying outside every antecedent.
    pub fn is_all_void(&self) -> bool {
        self.pattern.iter().all(|m| *m == Mark::Void)
    }

    pub fn pattern_string(&self) -> String {
        self.pattern.iter().map(|m| m.symbol()).collect()
    }
}

/// Satisfiable mark patterns of `fam`, sorted by pattern, with their worlds.
pub fn constituents(u: &Universe, fam: &[ConditionalEvent]) -> Result<Vec<Constituent>> {
    if fam.is_empty() {
        return Err(Error::Argument("constituents of an empty family".into()));
    }
    let tables: Vec<_> = fam.iter().map(|c| u.cond_tables(c)).collect();
    let mut groups: HashMap<Vec<Mark>, Vec<World>> = HashMap::new();
    let mut buf = vec![Mark::Void; fam.len()];
    for w in 0..u.world_count() {
        for (m, t) in buf.iter_mut().zip(&tables) {
            *m = if t.truth.contains(w) {
                Mark::True
            } else if t.falsity.contains(w) {
                Mark::False
            } else {
                Mark::Void
            };
        }
        match groups.get_mut(buf.as_slice()) {
            Some(ws) => ws.push(u.world(w)),
            None => {
                groups.insert(buf.clone(), vec![u.world(w)]);
            }
        }
    }
    let mut out: Vec<Constituent> =
        groups.into_iter().map(|(pattern, worlds)| Constituent { pattern, worlds }).collect();
    out.sort_by(|a, b| a.pattern.cmp(&b.pattern));
    Ok(out)
}

/// Ordered conditional events with exact values in `[0, 1]`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Assessment {
    entries: Vec<(ConditionalEvent, Rational)>,
}

impl Assessment {
    pub fn new(entries: Vec<(ConditionalEvent, Rational)>) -> Result<Assessment> {
        for (_, p) in &entries {
            rational::check_unit(p)?;
        }
        Ok(Assessment { entries })
    }

    pub fn from_parts(fam: &[ConditionalEvent], values: &[Rational]) -> Result<Assessment> {
        if fam.len() != values.len() {
            return Err(Error::Argument(format!("{} conditionals but {} values", fam.len(), values.len())));
        }
        Assessment::new(fam.iter().cloned().zip(values.iter().cloned()).collect())
    }

    pub fn push(&mut self, c: ConditionalEvent, p: Rational) -> Result<()> {
        rational::check_unit(&p)?;
        self.entries.push((c, p));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(ConditionalEvent, Rational)] {
        &self.entries
    }

    pub fn family(&self) -> Vec<ConditionalEvent> {
        self.entries.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn values(&self) -> Vec<Rational> {
        self.entries.iter().map(|(_, p)| p.clone()).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Point {
    pub coords: Vec<Rational>,
}

fn point_of(pattern: &[Mark], values: &[Rational]) -> Point {
    let coords = pattern
        .iter()
        .zip(values)
        .map(|(m, p)| match m {
            Mark::True => Rational::one(),
            Mark::False => Rational::zero(),
            Mark::Void => p.clone(),
        })
        .collect();
    Point { coords }
}

/// One point per constituent inside `⋁Hi`.
pub fn build_points(u: &Universe, a: &Assessment) -> Result<Vec<Point>> {
    let values = a.values();
    Ok(constituents(u, &a.family())?
        .iter()
        .filter(|c| !c.is_all_void())
        .map(|c| point_of(&c.pattern, &values))
        .collect())
}

/// A feasible mixture for the conditionals in `members`: `Σ λh Qh = P`
/// restricted to those coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LayerCertificate {
    pub members: Vec<usize>,
    pub points: Vec<Point>,
    pub weights: Vec<Rational>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Infeasibility {
    pub layer: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoherenceVerdict {
    pub coherent: bool,
    /// Feasible layers in order; for an incoherent verdict, those before the failure.
    pub layers: Vec<LayerCertificate>,
    pub failure: Option<Infeasibility>,
}

impl CoherenceVerdict {
    /// Re-checks every layer's mixture against the assessed values.
    pub fn replay(&self, values: &[Rational]) -> bool {
        self.layers.iter().all(|layer| {
            let nonneg = layer.weights.iter().all(|w| !w.is_negative());
            let total: Rational = layer.weights.iter().sum();
            let exact = layer.members.iter().enumerate().all(|(k, &i)| {
                let s: Rational = layer.points.iter().zip(&layer.weights).map(|(q, w)| &q.coords[k] * w).sum();
                s == values[i]
            });
            nonneg && total.is_one() && exact
        })
    }
}

fn project(patterns: &[Vec<Mark>], members: &[usize]) -> Vec<Vec<Mark>> {
    let set: BTreeSet<Vec<Mark>> = patterns
        .iter()
        .map(|p| members.iter().map(|&i| p[i]).collect::<Vec<Mark>>())
        .filter(|p| p.iter().any(|m| *m != Mark::Void))
        .collect();
    set.into_iter().collect()
}

fn equation_row(vars: &[Vec<Mark>], k: usize, p: &Rational) -> Vec<Rational> {
    vars.iter()
        .map(|v| match v[k] {
            Mark::True => Rational::one() - p,
            Mark::False => -p.clone(),
            Mark::Void => Rational::zero(),
        })
        .collect()
}

fn mass_on(vars: &[Vec<Mark>], k: usize, x: &[Rational]) -> Rational {
    vars.iter().zip(x).filter(|(v, _)| v[k] != Mark::Void).map(|(_, l)| l.clone()).sum()
}

/// Coherence from distinct constituent patterns and the assessed values.
pub fn check_patterns(patterns: &[Vec<Mark>], values: &[Rational]) -> CoherenceVerdict {
    let mut members: Vec<usize> = (0..values.len()).collect();
    let mut layers = Vec::new();
    while !members.is_empty() {
        let vars = project(patterns, &members);
        let pv: Vec<Rational> = members.iter().map(|&i| values[i].clone()).collect();
        let mut a: Vec<Vec<Rational>> = (0..members.len()).map(|k| equation_row(&vars, k, &pv[k])).collect();
        a.push(vec![Rational::one(); vars.len()]);
        let mut b = vec![Rational::zero(); members.len()];
        b.push(Rational::one());

        let Some(sol) = lp::feasible_point(&a, &b) else {
            let layer = layers.len();
            return CoherenceVerdict { coherent: false, layers, failure: Some(Infeasibility { layer, members }) };
        };

        let mut positive: Vec<bool> = (0..members.len()).map(|k| mass_on(&vars, k, &sol).is_positive()).collect();
        for k in 0..members.len() {
            if positive[k] {
                continue;
            }
            let c: Vec<Rational> =
                vars.iter().map(|v| if v[k] != Mark::Void { Rational::one() } else { Rational::zero() }).collect();
            if let LpOutcome::Optimal { value, solution } = lp::maximize(&a, &b, &c) {
                if value.is_positive() {
                    for (j, pos) in positive.iter_mut().enumerate() {
                        *pos = *pos || mass_on(&vars, j, &solution).is_positive();
                    }
                }
            }
        }
        let points = vars.iter().map(|v| point_of(v, &pv)).collect();
        let next: Vec<usize> = members.iter().zip(&positive).filter(|(_, p)| !**p).map(|(i, _)| *i).collect();
        layers.push(LayerCertificate { members, points, weights: sol });
        members = next;
    }
    CoherenceVerdict { coherent: true, layers, failure: None }
}

pub fn check_coherence(u: &Universe, a: &Assessment) -> Result<CoherenceVerdict> {
    if a.is_empty() {
        return Ok(CoherenceVerdict { coherent: true, layers: Vec::new(), failure: None });
    }
    let patterns: Vec<Vec<Mark>> = constituents(u, &a.family())?.into_iter().map(|c| c.pattern).collect();
    Ok(check_patterns(&patterns, &a.values()))
}

/// The closed interval of values `z` for which `a ∪ {target ↦ z}` is coherent.
///
/// Candidate endpoints are the extreme target ratios `Σ_{EH} λ / Σ_H λ` on each
/// sub-layer of the base family; the smallest and largest candidates that
/// pass a full coherence check are returned.
pub fn extension_interval(u: &Universe, a: &Assessment, target: &ConditionalEvent) -> Result<Interval> {
    let n = a.len();
    if n > MAX_EXTENSION_BASE {
        return Err(Error::Unsupported(format!(
            "extension over {n} assessed conditionals (limit {MAX_EXTENSION_BASE})"
        )));
    }
    if !check_coherence(u, a)?.coherent {
        return Err(Error::Precondition("the base assessment is not coherent".into()));
    }
    let mut fam = a.family();
    fam.push(target.clone());
    let patterns: Vec<Vec<Mark>> = constituents(u, &fam)?.into_iter().map(|c| c.pattern).collect();
    let values = a.values();
    extension_from_patterns(&patterns, &values)
}

/// Extension interval where the target is the last column of `patterns`.
pub fn extension_from_patterns(patterns: &[Vec<Mark>], values: &[Rational]) -> Result<Interval> {
    let n = values.len();
    let mut candidates: BTreeSet<Rational> = BTreeSet::new();
    for mask in 0u32..(1u32 << n) {
        let mut members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        members.push(n);
        let vars = project(patterns, &members);
        let t = members.len() - 1;
        let mut a: Vec<Vec<Rational>> = (0..t).map(|k| equation_row(&vars, k, &values[members[k]])).collect();
        a.push(vars.iter().map(|v| if v[t] != Mark::Void { Rational::one() } else { Rational::zero() }).collect());
        let mut b = vec![Rational::zero(); t];
        b.push(Rational::one());
        let c: Vec<Rational> =
            vars.iter().map(|v| if v[t] == Mark::True { Rational::one() } else { Rational::zero() }).collect();
        for outcome in [lp::minimize(&a, &b, &c), lp::maximize(&a, &b, &c)] {
            if let LpOutcome::Optimal { value, .. } = outcome {
                candidates.insert(value);
            }
        }
    }
    let passes = |z: &Rational| {
        let mut vals = values.to_vec();
        vals.push(z.clone());
        check_patterns(patterns, &vals).coherent
    };
    let lo = candidates.iter().find(|z| passes(z)).cloned();
    let hi = candidates.iter().rev().find(|z| passes(z)).cloned();
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok(Interval::new(lo, hi)),
        _ => Err(Error::Internal(format!(
            "none of {} candidate endpoints is coherent; candidate enumeration is incomplete here",
            candidates.len()
        ))),
    }
}
