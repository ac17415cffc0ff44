//! Evaluates a parsed script and collects one record per query.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::ast::{render_term, CondTerm, Expr, Item, Joint, Query, Script, Statement};
use crate::coherence::{check_coherence, extension_interval, Assessment, CoherenceVerdict};
use crate::compound::{
    biconditional_values, conjunction_prevision_closed_form, conjunction_table, frechet_bounds, iterated_table,
    mask_of, Mu, Previsions, ValueTable,
};
use crate::entailment::{Conclusion, EntailmentWitness, GieStatus, PdtReport, Reasoner, WeakMode};
use crate::error::{Error, Result};
use crate::logic::{ConditionalEvent, Event, Universe, MAX_ATOMS};
use crate::rational::{self, Interval, Rational};
use crate::trivalent::{check_validity, JeffreyParams};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub max_atoms: usize,
    /// Confirm every p-entailment verdict by the incoherence check as well.
    pub cross_oracle: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { max_atoms: MAX_ATOMS, cross_oracle: true }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Engine {
    pub name: String,
    pub version: String,
    pub max_atoms: usize,
    pub cross_oracle: bool,
    /// `d1..d4` of the Jeffrey conditional used by trivalent evaluation.
    pub jeffrey: Vec<String>,
}

/// A statement that could not be applied; later queries that depend on it fail.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Diagnostic {
    pub statement: usize,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct QueryError {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct QueryRecord {
    /// 1-based position among the script's queries.
    pub index: usize,
    pub kind: String,
    pub source: String,
    pub summary: String,
    pub result: Value,
    pub error: Option<QueryError>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub engine: Engine,
    pub diagnostics: Vec<Diagnostic>,
    pub queries: Vec<QueryRecord>,
}

impl Report {
    pub fn has_errors(&self) -> bool {
        !self.diagnostics.is_empty() || self.queries.iter().any(|q| q.error.is_some())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            out.push_str(&format!("! statement {}: {}\n", d.statement, d.message));
        }
        for q in &self.queries {
            out.push_str(&format!("[{}] {}: {}\n", q.index, q.kind, q.summary));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn q(r: &Rational) -> Value {
    Value::String(rational::render(r))
}

fn qs(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(q).collect())
}

fn interval_json(i: &Interval) -> Value {
    json!({ "lo": q(&i.lo), "hi": q(&i.hi) })
}

fn render_interval(i: &Interval) -> String {
    format!("[{}, {}]", rational::render(&i.lo), rational::render(&i.hi))
}

fn render_tuple(rs: &[Rational]) -> String {
    let parts: Vec<String> = rs.iter().map(rational::render).collect();
    format!("({})", parts.join(", "))
}

fn one_based(members: &[usize]) -> Vec<usize> {
    members.iter().map(|m| m + 1).collect()
}

/// Resolves a parsed term against the atoms of `u`.
pub fn lower_term(u: &Universe, t: &CondTerm) -> Result<ConditionalEvent> {
    let env = Env { universe: Some(u.clone()), atoms: u.names().to_vec(), ..Env::default() };
    env.cond(t)
}

#[derive(Default)]
struct Env {
    universe: Option<Universe>,
    atoms: Vec<String>,
    events: HashMap<String, Event>,
    conds: HashMap<String, ConditionalEvent>,
    /// Names whose definitions failed, with the reason.
    broken: HashMap<String, String>,
    assessed: Vec<(ConditionalEvent, Rational)>,
}

impl Env {
    fn universe(&self) -> Result<&Universe> {
        self.universe.as_ref().ok_or_else(|| Error::Precondition("no usable `atoms` declaration".into()))
    }

    fn event(&self, e: &Expr) -> Result<Event> {
        Ok(match e {
            Expr::True => Event::True,
            Expr::False => Event::False,
            Expr::Name(n) => {
                if let Some(ev) = self.events.get(n) {
                    ev.clone()
                } else if let Some(why) = self.broken.get(n) {
                    return Err(Error::Precondition(format!("`{n}` is unavailable: {why}")));
                } else {
                    self.universe()?.atom(n)?
                }
            }
            Expr::Not(a) => !self.event(a)?,
            Expr::And(a, b) => self.event(a)? & self.event(b)?,
            Expr::Or(a, b) => self.event(a)? | self.event(b)?,
        })
    }

    fn cond(&self, t: &CondTerm) -> Result<ConditionalEvent> {
        let u = self.universe()?;
        match (&t.consequent, &t.antecedent) {
            (e, Some(h)) => u.cond(self.event(e)?, self.event(h)?),
            (Expr::Name(n), None) if self.conds.contains_key(n) => Ok(self.conds[n].clone()),
            (Expr::Name(n), None) if self.broken.contains_key(n) => {
                Err(Error::Precondition(format!("`{n}` is unavailable: {}", self.broken[n])))
            }
            (e, None) => u.unconditional(self.event(e)?),
        }
    }

    fn value_of(&self, c: &ConditionalEvent, inline: &Option<Rational>) -> Result<Rational> {
        if let Some(v) = inline {
            return Ok(v.clone());
        }
        let u = self.universe()?;
        self.assessed
            .iter()
            .rev()
            .find(|(d, _)| u.cond_equivalent(c, d))
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::Argument(format!("no value assessed for {}", u.render_cond(c))))
    }

    fn family(&self, items: &[Item]) -> Result<Vec<ConditionalEvent>> {
        items.iter().map(|i| self.cond(&i.term)).collect()
    }

    fn valued(&self, items: &[Item]) -> Result<(Vec<ConditionalEvent>, Vec<Rational>)> {
        let fam = self.family(items)?;
        let vals = fam.iter().zip(items).map(|(c, i)| self.value_of(c, &i.value)).collect::<Result<Vec<_>>>()?;
        Ok((fam, vals))
    }

    fn statement(&mut self, s: &Statement, opts: &RunOptions) -> Result<()> {
        match s {
            Statement::Atoms(names) => {
                let mut all = self.atoms.clone();
                all.extend(names.iter().cloned());
                let u = Universe::with_limit(all.clone(), opts.max_atoms);
                self.atoms = all;
                match u {
                    Ok(u) => {
                        self.universe = Some(u);
                        Ok(())
                    }
                    Err(e) => {
                        self.universe = None;
                        Err(e)
                    }
                }
            }
            Statement::Event { name, expr } => match self.event(expr) {
                Ok(e) => {
                    self.events.insert(name.clone(), e);
                    Ok(())
                }
                Err(e) => {
                    self.broken.insert(name.clone(), e.to_string());
                    Err(e)
                }
            },
            Statement::Cond { name, consequent, antecedent } => {
                let term = CondTerm { consequent: consequent.clone(), antecedent: Some(antecedent.clone()) };
                match self.cond(&term) {
                    Ok(c) => {
                        self.conds.insert(name.clone(), c);
                        Ok(())
                    }
                    Err(e) => {
                        self.broken.insert(name.clone(), e.to_string());
                        Err(e)
                    }
                }
            }
            Statement::Assess { term, value } => {
                let c = self.cond(term)?;
                self.assessed.push((c, value.clone()));
                Ok(())
            }
            Statement::Query(_) => Ok(()),
        }
    }
}

pub fn run(script: &Script, opts: &RunOptions) -> Report {
    let mut env = Env::default();
    let mut diagnostics = Vec::new();
    let mut queries = Vec::new();
    for (i, s) in script.statements.iter().enumerate() {
        if let Statement::Query(query) = s {
            let index = queries.len() + 1;
            let source = super::ast::Script { statements: vec![s.clone()] }.render().trim_end().to_string();
            let record = match evaluate(&env, query, opts) {
                Ok((summary, result)) => {
                    QueryRecord { index, kind: query.keyword().into(), source, summary, result, error: None }
                }
                Err(e) => QueryRecord {
                    index,
                    kind: query.keyword().into(),
                    source,
                    summary: format!("ERROR ({}): {e}", e.kind()),
                    result: Value::Null,
                    error: Some(QueryError { kind: e.kind().into(), message: e.to_string() }),
                },
            };
            queries.push(record);
        } else if let Err(e) = env.statement(s, opts) {
            diagnostics.push(Diagnostic { statement: i + 1, kind: e.kind().into(), message: e.to_string() });
        }
    }
    Report {
        schema_version: SCHEMA_VERSION,
        engine: Engine {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            max_atoms: opts.max_atoms,
            cross_oracle: opts.cross_oracle,
            jeffrey: JeffreyParams::default().get().iter().map(|d| rational::render(&d.numeric())).collect(),
        },
        diagnostics,
        queries,
    }
}

fn certificate_json(v: &CoherenceVerdict) -> Value {
    json!({
        "coherent": v.coherent,
        "layers": v.layers.iter().map(|l| json!({
            "members": one_based(&l.members),
            "points": l.points.iter().map(|p| qs(&p.coords)).collect::<Vec<_>>(),
            "weights": qs(&l.weights),
        })).collect::<Vec<_>>(),
        "failure": v.failure.as_ref().map(|f| json!({ "layer": f.layer + 1, "members": one_based(&f.members) })),
    })
}

fn certificate_text(v: &CoherenceVerdict) -> String {
    if v.coherent {
        if v.layers.len() == 1 {
            format!("COHERENT (certificate: λ = {})", render_tuple(&v.layers[0].weights))
        } else {
            let parts: Vec<String> = v
                .layers
                .iter()
                .enumerate()
                .map(|(k, l)| format!("layer {} λ = {}", k + 1, render_tuple(&l.weights)))
                .collect();
            format!("COHERENT (certificate: {})", parts.join("; "))
        }
    } else {
        let f = v.failure.as_ref().expect("incoherent verdicts carry a failure");
        let members: Vec<String> = one_based(&f.members).iter().map(|m| format!("#{m}")).collect();
        format!("INCOHERENT (no mixture at layer {} over {})", f.layer + 1, members.join(", "))
    }
}

fn witness_json(u: &Universe, w: &EntailmentWitness) -> Value {
    let _ = u;
    match w {
        EntailmentWitness::AntecedentImpliesConsequent => json!({ "kind": "antecedent-implies-consequent" }),
        EntailmentWitness::QuasiConjunction(idx) => json!({ "kind": "quasi-conjunction", "members": one_based(idx) }),
        EntailmentWitness::Countermodel { values, certificate } => json!({
            "kind": "countermodel",
            "values": qs(values),
            "certificate": certificate_json(certificate),
        }),
    }
}

fn conclusion_text(u: &Universe, c: &Conclusion) -> String {
    match c {
        Conclusion::Entails(c) => u.render_cond(c),
        Conclusion::IteratedIsOne { consequent, antecedent } => {
            format!("P({} given {}) = 1", u.render_cond(consequent), u.render_cond(antecedent))
        }
    }
}

fn pdt_output(u: &Universe, r: &PdtReport) -> Result<(String, Value)> {
    if r.equivalence == Some(false) {
        return Err(Error::Internal("the equivalent forms of the premise condition disagree".into()));
    }
    let concl: Vec<String> = r.conclusions.iter().map(|c| conclusion_text(u, c)).collect();
    let summary = match r.failing() {
        None => format!("ESTABLISHED (Γ ⇒p {})", concl.join(", ")),
        Some(h) => format!("NOT ESTABLISHED (fails: {})", h.name),
    };
    let value = json!({
        "established": r.established(),
        "hypotheses": r.hypotheses.iter().map(|h| json!({ "name": h.name, "holds": h.holds })).collect::<Vec<_>>(),
        "conclusions": concl,
        "equivalence": r.equivalence,
    });
    Ok((summary, value))
}

fn table_json(t: &ValueTable) -> Value {
    Value::Array(
        t.rows()
            .map(|(c, v)| {
                json!({
                    "pattern": c.pattern_string(),
                    "value": q(v),
                    "worlds": c.worlds.iter().map(|w| w.index()).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn previsions(marginals: &[Rational], joint: &[Joint]) -> Previsions {
    let mut prev = Previsions::from_marginals(marginals);
    for j in joint {
        prev.set(mask_of(j.members.iter().map(|m| m - 1)), j.value.clone());
    }
    prev
}

fn evaluate(env: &Env, query: &Query, opts: &RunOptions) -> Result<(String, Value)> {
    if let Query::Frechet(xs) = query {
        let i = frechet_bounds(xs);
        return Ok((format!("FRECHET {}", render_interval(&i)), interval_json(&i)));
    }
    if let Query::Biconditional(x, y) = query {
        let (z, mu) = biconditional_values(x, y);
        let summary = format!("conjunction {}, companion prevision {}", rational::render(&z), rational::render(&mu));
        return Ok((summary, json!({ "conjunction": q(&z), "mu": q(&mu) })));
    }
    let u = env.universe()?;
    let reasoner = Reasoner::new(u).with_cross_oracle(opts.cross_oracle);
    match query {
        Query::Coherent(items) => {
            let (fam, vals) = env.valued(items)?;
            let v = check_coherence(u, &Assessment::from_parts(&fam, &vals)?)?;
            if !v.replay(&vals) {
                return Err(Error::Internal("the coherence certificate does not replay".into()));
            }
            Ok((certificate_text(&v), certificate_json(&v)))
        }
        Query::Extend { items, target } => {
            let (fam, vals) = env.valued(items)?;
            let i = extension_interval(u, &Assessment::from_parts(&fam, &vals)?, &env.cond(target)?)?;
            Ok((format!("EXTENSION {}", render_interval(&i)), interval_json(&i)))
        }
        Query::PConsistent(items) => {
            let ok = reasoner.p_consistent(&env.family(items)?)?;
            let summary = if ok { "P-CONSISTENT" } else { "NOT P-CONSISTENT" };
            Ok((summary.into(), json!({ "pconsistent": ok })))
        }
        Query::PEntails { items, conclusion } => {
            let fam = env.family(items)?;
            let concl = env.cond(conclusion)?;
            let v = reasoner.p_entails(&fam, &concl)?;
            let summary = match &v.witness {
                EntailmentWitness::AntecedentImpliesConsequent => {
                    "ENTAILED (the conclusion's antecedent implies its consequent)".to_string()
                }
                EntailmentWitness::QuasiConjunction(idx) => {
                    let m: Vec<String> = one_based(idx).iter().map(|i| format!("#{i}")).collect();
                    format!("ENTAILED (quasi conjunction of {} implies the conclusion)", m.join(", "))
                }
                EntailmentWitness::Countermodel { values, .. } => {
                    format!("NOT ENTAILED (countermodel: {})", render_tuple(values))
                }
            };
            Ok((summary, json!({ "entails": v.entails, "witness": witness_json(u, &v.witness) })))
        }
        Query::Valid { mode, items, conclusion } => {
            let fam = env.family(items)?;
            let v = check_validity(u, *mode, &fam, &env.cond(conclusion)?)?;
            let summary = match v.witness {
                None => "VALID".to_string(),
                Some(w) => format!("INVALID (witness: {})", u.render_world(w)),
            };
            let value = json!({
                "valid": v.valid,
                "mode": mode.keyword(),
                "witness": v.witness.map(|w| json!({ "world": w.index(), "assignment": u.render_world(w) })),
            });
            Ok((summary, value))
        }
        Query::Pdt { items, antecedent, consequent } => {
            let gamma = env.family(items)?;
            let plain = |t: &CondTerm| {
                t.antecedent.is_none() && !matches!(&t.consequent, Expr::Name(n) if env.conds.contains_key(n))
            };
            let report = if plain(antecedent) && plain(consequent) {
                reasoner.deduction_theorem(
                    &gamma,
                    &env.event(&antecedent.consequent)?,
                    &env.event(&consequent.consequent)?,
                )?
            } else {
                reasoner.deduction_theorem_generalized(&gamma, &env.cond(antecedent)?, &env.cond(consequent)?)?
            };
            pdt_output(u, &report)
        }
        Query::PdtWeak { mode, items, antecedent, consequent, hstar } => {
            let report = reasoner.weak_deduction(
                &env.family(items)?,
                &env.event(antecedent)?,
                &env.event(consequent)?,
                &env.event(hstar)?,
                *mode,
            )?;
            let (summary, mut value) = pdt_output(u, &report)?;
            value["mode"] = json!(match mode {
                WeakMode::Asymmetric => "asym",
                WeakMode::Symmetric => "sym",
            });
            Ok((summary, value))
        }
        Query::Gie { items, conclusion } => {
            let fam = env.family(items)?;
            let concl = env.cond(conclusion)?;
            let r = reasoner.general_import_export(&fam, &concl)?;
            match &r.status {
                GieStatus::Satisfied => Ok((
                    "SATISFIED (both sides 1)".into(),
                    json!({ "satisfied": true, "entails": r.entails, "consistent_with_antecedent": r.consistent_with_antecedent }),
                )),
                GieStatus::NotEstablished { reason, left_prevision, right_is_one } => {
                    let ante: Vec<String> = fam.iter().map(|c| u.render_cond(c)).collect();
                    let ante = match ante.as_slice() {
                        [one] if one.starts_with('(') => one.clone(),
                        [one] => format!("({one})"),
                        _ => format!("{{{}}}", ante.join(", ")),
                    };
                    let mut summary = format!("NOT ESTABLISHED ({} given {ante} ≠ 1: {reason}", u.render_cond(&concl));
                    if let Some(mu) = left_prevision {
                        summary.push_str(&format!("; left side {} at the countermodel", rational::render(mu)));
                    }
                    if *right_is_one {
                        summary.push_str("; right side identically 1");
                    }
                    summary.push(')');
                    Ok((
                        summary,
                        json!({
                            "satisfied": false,
                            "entails": r.entails,
                            "consistent_with_antecedent": r.consistent_with_antecedent,
                            "reason": reason,
                            "left_prevision": left_prevision.as_ref().map(q),
                            "right_is_one": right_is_one,
                        }),
                    ))
                }
            }
        }
        Query::Classify { items, conclusion } => {
            let label = reasoner.classify_case(&env.family(items)?, &env.cond(conclusion)?)?;
            Ok((format!("CASE {label}"), json!({ "case": label.label() })))
        }
        Query::ConjTable { items, joint } => {
            let (fam, vals) = env.valued(items)?;
            let mut prev = previsions(&vals, joint);
            let mut rule = None;
            let full = mask_of(0..fam.len());
            if fam.len() == 2 && prev.get(full).is_none() {
                let pc = conjunction_prevision_closed_form(u, &fam[0], &fam[1], &vals[0], &vals[1])?;
                if !pc.interval.is_point() {
                    let summary = format!(
                        "PREVISION in {} ({}; supply `with {{ 1 2 = z }}` for a table)",
                        render_interval(&pc.interval),
                        pc.rule.describe()
                    );
                    return Ok((
                        summary,
                        json!({ "interval": interval_json(&pc.interval), "rule": pc.rule.describe() }),
                    ));
                }
                prev.set(full, pc.interval.lo.clone());
                rule = Some(pc.rule.describe());
            }
            let t = conjunction_table(u, &fam, &prev)?;
            let mut summary =
                format!("PREVISION {} over {} constituents", rational::render(t.prevision()), t.rows().count());
            if let Some(r) = rule {
                summary.push_str(&format!(" ({r})"));
            }
            Ok((summary, json!({ "prevision": q(t.prevision()), "rule": rule, "rows": table_json(&t) })))
        }
        Query::IteratedPrevision { consequent, items, joint } => {
            let (ante, mut vals) = env.valued(items)?;
            let cons = env.cond(&consequent.term)?;
            vals.push(env.value_of(&cons, &consequent.value)?);
            let n = ante.len();
            let mut prev = previsions(&vals, joint);
            let full = mask_of(0..=n);
            let mut rule = None;
            if n == 1 && prev.get(full).is_none() {
                let pc = conjunction_prevision_closed_form(u, &ante[0], &cons, &vals[0], &vals[1])?;
                if !pc.interval.is_point() {
                    let x = &vals[0];
                    if x == &Rational::from_integer(0.into()) {
                        return Err(Error::Argument(format!(
                            "the joint prevision of {} and its antecedent is only bounded by {}; supply it with `with {{ 1 2 = z }}`",
                            render_term(&consequent.term),
                            render_interval(&pc.interval)
                        )));
                    }
                    let mu = Interval::new(&pc.interval.lo / x, &pc.interval.hi / x);
                    let summary = format!(
                        "μ in {} ({}; supply `with {{ 1 2 = z }}` for a point)",
                        render_interval(&mu),
                        pc.rule.describe()
                    );
                    return Ok((summary, json!({ "mu": interval_json(&mu), "rule": pc.rule.describe() })));
                }
                prev.set(full, pc.interval.lo.clone());
                rule = Some(pc.rule.describe());
            }
            let t = iterated_table(u, &cons, &ante, &prev)?;
            let x = t.antecedent().prevision().clone();
            let z = t.conjunction().prevision().clone();
            let (mu_text, mu_json) = match t.mu() {
                Mu::Point(m) => (format!("μ = {}", rational::render(m)), q(m)),
                Mu::Interval(i) => (format!("μ in {}", render_interval(i)), interval_json(i)),
            };
            let mut summary = format!(
                "{mu_text} (antecedent prevision {}, conjunction {}",
                rational::render(&x),
                rational::render(&z)
            );
            if let Some(r) = rule {
                summary.push_str(&format!("; {r}"));
            }
            summary.push(')');
            let rows: Vec<Value> = t
                .rows()
                .iter()
                .map(|r| {
                    let value = t.mu().point().map(|m| q(&t.value_with(r, m)));
                    json!({
                        "pattern": r.pattern.iter().map(|m| m.symbol()).collect::<String>(),
                        "conjunction": q(&r.conjunction),
                        "antecedent": q(&r.antecedent),
                        "value": value,
                    })
                })
                .collect();
            Ok((
                summary,
                json!({ "mu": mu_json, "antecedent": q(&x), "conjunction": q(&z), "rule": rule, "rows": rows }),
            ))
        }
        Query::Frechet(_) | Query::Biconditional(..) => unreachable!("handled above"),
    }
}
