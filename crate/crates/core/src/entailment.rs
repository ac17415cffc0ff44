//! p-consistency, p-entailment, the deduction theorems, the General
//! Import-Export principle and the case taxonomy for `F` against `E|H`.

use std::fmt;

use num_traits::{One, Zero};

use crate::coherence::{check_coherence, extension_interval, Assessment, CoherenceVerdict};
use crate::compound::{iterated_table, Previsions};
use crate::error::{Error, Result};
use crate::logic::{gn_implies, quasi_conjunction, ConditionalEvent, Event, Universe};
use crate::rational::Rational;

/// Largest premise set for the quasi-conjunction subset search.
pub const MAX_PREMISES: usize = 20;

#[derive(Clone, PartialEq, Debug)]
pub enum EntailmentWitness {
    /// The conclusion's antecedent implies its consequent.
    AntecedentImpliesConsequent,
    /// Indices of a premise subset whose quasi conjunction implies the conclusion.
    QuasiConjunction(Vec<usize>),
    /// Premises at 1 and the conclusion at the lower end of its coherent
    /// extension, below 1.
    Countermodel { values: Vec<Rational>, certificate: CoherenceVerdict },
}

#[derive(Clone, PartialEq, Debug)]
pub struct EntailmentVerdict {
    pub entails: bool,
    pub witness: EntailmentWitness,
}

/// Search for `H ⊆ E` or a subset `S` with `QC(S) ⊆ E|H`.
pub fn entails_by_quasi_conjunction(
    u: &Universe,
    fam: &[ConditionalEvent],
    concl: &ConditionalEvent,
) -> Result<Option<EntailmentWitness>> {
    if u.implies(concl.antecedent(), concl.consequent()) {
        return Ok(Some(EntailmentWitness::AntecedentImpliesConsequent));
    }
    if fam.len() > MAX_PREMISES {
        return Err(Error::Unsupported(format!("{} premises (limit {MAX_PREMISES})", fam.len())));
    }
    for mask in 1u32..(1u32 << fam.len()) {
        let idx: Vec<usize> = (0..fam.len()).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<ConditionalEvent> = idx.iter().map(|&i| fam[i].clone()).collect();
        if gn_implies(u, &quasi_conjunction(&sub)?, concl) {
            return Ok(Some(EntailmentWitness::QuasiConjunction(idx)));
        }
    }
    Ok(None)
}

/// Whether premises at 1 with the conclusion at 0 is incoherent.
pub fn entails_by_incoherence(u: &Universe, fam: &[ConditionalEvent], concl: &ConditionalEvent) -> Result<bool> {
    let mut a = Assessment::from_parts(fam, &vec![Rational::one(); fam.len()])?;
    a.push(concl.clone(), Rational::zero())?;
    Ok(!check_coherence(u, &a)?.coherent)
}

pub fn p_consistent(u: &Universe, fam: &[ConditionalEvent]) -> Result<bool> {
    let a = Assessment::from_parts(fam, &vec![Rational::one(); fam.len()])?;
    Ok(check_coherence(u, &a)?.coherent)
}

/// A named hypothesis of a deduction theorem and whether it holds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Conclusion {
    Entails(ConditionalEvent),
    /// The iterated conditional `consequent | antecedent` has prevision 1.
    IteratedIsOne {
        consequent: ConditionalEvent,
        antecedent: ConditionalEvent,
    },
}

#[derive(Clone, PartialEq, Debug)]
pub struct PdtReport {
    /// Evaluated in order; evaluation stops at the first failure.
    pub hypotheses: Vec<Hypothesis>,
    pub conclusions: Vec<Conclusion>,
    /// Whether the equivalent forms of the premise condition agreed, when checked.
    pub equivalence: Option<bool>,
}

impl PdtReport {
    pub fn established(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    pub fn failing(&self) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| !h.holds)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum WeakMode {
    Asymmetric,
    Symmetric,
}

#[derive(Clone, PartialEq, Debug)]
pub enum GieStatus {
    /// `(E|H)|𝒞(F) = E|(H ∧ 𝒞(F)) = 1`.
    Satisfied,
    NotEstablished {
        reason: String,
        /// Prevision of `(E|H)|𝒞(F)` with every premise at 1 and the conclusion
        /// at its lowest coherent value.
        left_prevision: Option<Rational>,
        /// Set when `E|(H ∧ F)` is identically 1 because the premises are events.
        right_is_one: bool,
    },
}

#[derive(Clone, PartialEq, Debug)]
pub struct GieReport {
    pub entails: bool,
    pub consistent_with_antecedent: bool,
    pub status: GieStatus,
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum CaseLabel {
    A1,
    A2,
    B1,
    B2,
    B3,
}

impl CaseLabel {
    pub fn label(self) -> &'static str {
        match self {
            CaseLabel::A1 => "a.1",
            CaseLabel::A2 => "a.2",
            CaseLabel::B1 => "b.1",
            CaseLabel::B2 => "b.2",
            CaseLabel::B3 => "b.3",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Entailment queries over one universe.
#[derive(Clone, Debug)]
pub struct Reasoner<'u> {
    u: &'u Universe,
    cross_oracle: bool,
}

impl<'u> Reasoner<'u> {
    /// The incoherence cross-check is on by default.
    pub fn new(u: &'u Universe) -> Reasoner<'u> {
        Reasoner { u, cross_oracle: true }
    }

    pub fn with_cross_oracle(mut self, on: bool) -> Reasoner<'u> {
        self.cross_oracle = on;
        self
    }

    pub fn universe(&self) -> &'u Universe {
        self.u
    }

    pub fn p_consistent(&self, fam: &[ConditionalEvent]) -> Result<bool> {
        p_consistent(self.u, fam)
    }

    fn event(&self, e: &Event) -> Result<ConditionalEvent> {
        self.u.unconditional(e.clone())
    }

    fn render(&self, c: &ConditionalEvent) -> String {
        self.u.render_cond(c)
    }

    pub fn p_entails(&self, fam: &[ConditionalEvent], concl: &ConditionalEvent) -> Result<EntailmentVerdict> {
        if !self.p_consistent(fam)? {
            return Err(Error::Precondition("the premises are not p-consistent".into()));
        }
        let primary = entails_by_quasi_conjunction(self.u, fam, concl)?;
        if self.cross_oracle {
            let dual = entails_by_incoherence(self.u, fam, concl)?;
            if dual != primary.is_some() {
                return Err(Error::Internal(format!(
                    "quasi-conjunction test says {} but the zero-conclusion coherence test says {} for {}",
                    primary.is_some(),
                    dual,
                    self.render(concl)
                )));
            }
        }
        if let Some(w) = primary {
            return Ok(EntailmentVerdict { entails: true, witness: w });
        }
        let mut base = Assessment::from_parts(fam, &vec![Rational::one(); fam.len()])?;
        let lo = extension_interval(self.u, &base, concl)?.lo;
        if lo.is_one() {
            return Err(Error::Internal(format!(
                "no quasi-conjunction witness, yet {} is forced to 1",
                self.render(concl)
            )));
        }
        base.push(concl.clone(), lo)?;
        let certificate = check_coherence(self.u, &base)?;
        Ok(EntailmentVerdict {
            entails: false,
            witness: EntailmentWitness::Countermodel { values: base.values(), certificate },
        })
    }

    /// Re-verifies the condition a witness names.
    pub fn replay(
        &self,
        fam: &[ConditionalEvent],
        concl: &ConditionalEvent,
        verdict: &EntailmentVerdict,
    ) -> Result<bool> {
        Ok(match &verdict.witness {
            EntailmentWitness::AntecedentImpliesConsequent => {
                verdict.entails && self.u.implies(concl.antecedent(), concl.consequent())
            }
            EntailmentWitness::QuasiConjunction(idx) => {
                let sub: Vec<ConditionalEvent> = idx.iter().map(|&i| fam[i].clone()).collect();
                verdict.entails && !sub.is_empty() && gn_implies(self.u, &quasi_conjunction(&sub)?, concl)
            }
            EntailmentWitness::Countermodel { values, certificate } => {
                let mut all = fam.to_vec();
                all.push(concl.clone());
                let n = fam.len();
                !verdict.entails
                    && values.len() == n + 1
                    && values[..n].iter().all(|v| v.is_one())
                    && values[n] < Rational::one()
                    && certificate.coherent
                    && certificate.replay(values)
                    && check_coherence(self.u, &Assessment::from_parts(&all, values)?)?.coherent
            }
        })
    }

    fn entails(&self, fam: &[ConditionalEvent], concl: &ConditionalEvent) -> Result<bool> {
        Ok(self.p_entails(fam, concl)?.entails)
    }

    /// When `Γ ⇒p B|A`: if `Γ ∪ {A}` is p-consistent then `Γ ∪ {A} ⇒p B`.
    /// `None` when `Γ ∪ {A}` is not p-consistent.
    pub fn converse_check(&self, gamma: &[ConditionalEvent], a: &Event, b: &Event) -> Result<Option<bool>> {
        let b_given_a = self.u.cond(b.clone(), a.clone())?;
        if !self.entails(gamma, &b_given_a)? {
            return Err(Error::Precondition(format!("Γ does not p-entail {}", self.render(&b_given_a))));
        }
        let mut ext = gamma.to_vec();
        ext.push(self.event(a)?);
        if !self.p_consistent(&ext)? {
            return Ok(None);
        }
        Ok(Some(self.entails(&ext, &self.event(b)?)?))
    }

    fn nonempty(&self, e: &Event, what: &str) -> Result<()> {
        if self.u.is_satisfiable(e) {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{what} is impossible")))
        }
    }

    /// Hypotheses `Γ ∪ {A}` p-consistent, `Γ ⇒p A`, `Γ ∪ {A} ⇒p B`; conclusions
    /// `B|A`, `A|B` and `AB|(A ∨ B)`.
    pub fn deduction_theorem(&self, gamma: &[ConditionalEvent], a: &Event, b: &Event) -> Result<PdtReport> {
        self.nonempty(a, "A")?;
        self.nonempty(b, "B")?;
        let (ca, cb) = (self.event(a)?, self.event(b)?);
        let mut ext = gamma.to_vec();
        ext.push(ca.clone());
        let names = [
            format!("Γ ∪ {{{}}} is p-consistent", self.render(&ca)),
            format!("Γ ⇒p {}", self.render(&ca)),
            format!("Γ ∪ {{{}}} ⇒p {}", self.render(&ca), self.render(&cb)),
        ];
        let mut report = PdtReport { hypotheses: Vec::new(), conclusions: Vec::new(), equivalence: None };
        let checks: [&dyn Fn() -> Result<bool>; 3] =
            [&|| self.p_consistent(&ext), &|| self.entails(gamma, &ca), &|| self.entails(&ext, &cb)];
        for (name, check) in names.into_iter().zip(checks) {
            let holds = check()?;
            report.hypotheses.push(Hypothesis { name, holds });
            if !holds {
                break;
            }
        }
        if report.hypotheses.first().is_some_and(|h| h.holds) {
            let first = report.established();
            let ab = self.event(&(a.clone() & b.clone()))?;
            let second = self.entails(gamma, &ab)?;
            let third = self.entails(gamma, &ca)? && self.entails(gamma, &cb)?;
            report.equivalence = Some(first == second && second == third);
        }
        if report.established() {
            let targets = [
                self.u.cond(b.clone(), a.clone())?,
                self.u.cond(a.clone(), b.clone())?,
                self.u.cond(a.clone() & b.clone(), a.clone() | b.clone())?,
            ];
            for t in targets {
                if !self.entails(gamma, &t)? {
                    return Err(Error::Internal(format!(
                        "hypotheses hold but Γ does not p-entail {}",
                        self.render(&t)
                    )));
                }
                report.conclusions.push(Conclusion::Entails(t));
            }
        }
        Ok(report)
    }

    /// Prevision of `outer | inner` when both have probability 1.
    fn iterated_prevision_at_one(&self, outer: &ConditionalEvent, inner: &ConditionalEvent) -> Result<Rational> {
        let prev = Previsions::from_marginals(&[Rational::one(), Rational::one()]).with(3, Rational::one());
        let t = iterated_table(self.u, outer, std::slice::from_ref(inner), &prev)?;
        t.mu().point().cloned().ok_or_else(|| Error::Internal("iterated prevision is not a point".into()))
    }

    /// The conditional-event version: conclusions are the iterated
    /// conditionals `(B|K)|(A|H)` and `(A|H)|(B|K)` at prevision 1.
    pub fn deduction_theorem_generalized(
        &self,
        gamma: &[ConditionalEvent],
        ah: &ConditionalEvent,
        bk: &ConditionalEvent,
    ) -> Result<PdtReport> {
        self.nonempty(&ah.truth_event(), "AH")?;
        self.nonempty(&bk.truth_event(), "BK")?;
        let mut ext = gamma.to_vec();
        ext.push(ah.clone());
        let names = [
            format!("Γ ∪ {{{}}} is p-consistent", self.render(ah)),
            format!("Γ ⇒p {}", self.render(ah)),
            format!("Γ ∪ {{{}}} ⇒p {}", self.render(ah), self.render(bk)),
        ];
        let mut report = PdtReport { hypotheses: Vec::new(), conclusions: Vec::new(), equivalence: None };
        let checks: [&dyn Fn() -> Result<bool>; 3] =
            [&|| self.p_consistent(&ext), &|| self.entails(gamma, ah), &|| self.entails(&ext, bk)];
        for (name, check) in names.into_iter().zip(checks) {
            let holds = check()?;
            report.hypotheses.push(Hypothesis { name, holds });
            if !holds {
                break;
            }
        }
        if report.hypotheses.first().is_some_and(|h| h.holds) {
            let first = report.established();
            let third = self.entails(gamma, ah)? && self.entails(gamma, bk)?;
            report.equivalence = Some(first == third);
        }
        if report.established() {
            for (outer, inner) in [(bk, ah), (ah, bk)] {
                let mu = self.iterated_prevision_at_one(outer, inner)?;
                if !mu.is_one() {
                    return Err(Error::Internal("iterated prevision at unit premises differs from 1".into()));
                }
                report
                    .conclusions
                    .push(Conclusion::IteratedIsOne { consequent: outer.clone(), antecedent: inner.clone() });
            }
        }
        Ok(report)
    }

    /// Weak forms with `K = A ∨ H*` (asymmetric, concluding `B|A`) or
    /// `K = A ∨ B ∨ H*` (symmetric, concluding `B|A` and `A|B`).
    pub fn weak_deduction(
        &self,
        gamma: &[ConditionalEvent],
        a: &Event,
        b: &Event,
        hstar: &Event,
        mode: WeakMode,
    ) -> Result<PdtReport> {
        self.nonempty(a, "A")?;
        self.nonempty(b, "B")?;
        let k = match mode {
            WeakMode::Asymmetric => a.clone() | hstar.clone(),
            WeakMode::Symmetric => a.clone() | b.clone() | hstar.clone(),
        };
        let ak = self.u.cond(a.clone(), k.clone())?;
        let bk = self.u.cond(b.clone(), k)?;
        let mut ext = gamma.to_vec();
        ext.push(ak.clone());
        let names = [
            format!("Γ ∪ {{{}}} is p-consistent", self.render(&ak)),
            format!("Γ ⇒p {}", self.render(&ak)),
            format!("Γ ∪ {{{}}} ⇒p {}", self.render(&ak), self.render(&bk)),
        ];
        let mut report = PdtReport { hypotheses: Vec::new(), conclusions: Vec::new(), equivalence: None };
        let checks: [&dyn Fn() -> Result<bool>; 3] =
            [&|| self.p_consistent(&ext), &|| self.entails(gamma, &ak), &|| self.entails(&ext, &bk)];
        for (name, check) in names.into_iter().zip(checks) {
            let holds = check()?;
            report.hypotheses.push(Hypothesis { name, holds });
            if !holds {
                break;
            }
        }
        if report.established() {
            let mut targets = vec![self.u.cond(b.clone(), a.clone())?];
            if mode == WeakMode::Symmetric {
                targets.push(self.u.cond(a.clone(), b.clone())?);
            }
            for t in targets {
                if !self.entails(gamma, &t)? {
                    return Err(Error::Internal(format!(
                        "hypotheses hold but Γ does not p-entail {}",
                        self.render(&t)
                    )));
                }
                report.conclusions.push(Conclusion::Entails(t));
            }
        }
        Ok(report)
    }

    pub fn general_import_export(&self, fam: &[ConditionalEvent], concl: &ConditionalEvent) -> Result<GieReport> {
        let verdict = self.p_entails(fam, concl)?;
        let mut ext = fam.to_vec();
        ext.push(self.event(concl.antecedent())?);
        let consistent = self.p_consistent(&ext)?;
        if verdict.entails && consistent {
            return Ok(GieReport { entails: true, consistent_with_antecedent: true, status: GieStatus::Satisfied });
        }
        let (reason, left) = if let EntailmentWitness::Countermodel { values, .. } = &verdict.witness {
            let y = values.last().cloned().expect("countermodel covers the conclusion");
            let n = fam.len();
            let mut prev = Previsions::new();
            for mask in 1u32..(1u32 << (n + 1)) {
                prev.set(mask, if mask >> n & 1 == 1 { y.clone() } else { Rational::one() });
            }
            let mu = iterated_table(self.u, concl, fam, &prev)?.mu().point().cloned();
            ("the premises do not p-entail the conclusion".to_string(), mu)
        } else {
            ("the premises with the conclusion's antecedent are not p-consistent".to_string(), None)
        };
        let events_only = fam.iter().all(|c| *c.antecedent() == Event::True);
        let right_is_one = events_only && {
            let f = Event::all(fam.iter().map(|c| c.consequent().clone()));
            self.u.implies(&(concl.antecedent().clone() & f), concl.consequent())
        };
        Ok(GieReport {
            entails: verdict.entails,
            consistent_with_antecedent: consistent,
            status: GieStatus::NotEstablished { reason, left_prevision: left, right_is_one },
        })
    }

    pub fn classify_case(&self, fam: &[ConditionalEvent], concl: &ConditionalEvent) -> Result<CaseLabel> {
        if !self.p_consistent(fam)? {
            return Err(Error::Precondition("the family is not p-consistent".into()));
        }
        let first = self.entails(fam, concl)?;
        let mut ext = fam.to_vec();
        ext.push(self.event(concl.antecedent())?);
        if !self.p_consistent(&ext)? {
            return Ok(if first { CaseLabel::A2 } else { CaseLabel::A1 });
        }
        let second = self.entails(&ext, &self.event(concl.consequent())?)?;
        match (first, second) {
            (false, false) => Ok(CaseLabel::B1),
            (false, true) => Ok(CaseLabel::B2),
            (true, true) => Ok(CaseLabel::B3),
            (true, false) => Err(Error::Internal(
                "F p-entails E|H with F ∪ {H} p-consistent, yet F ∪ {H} does not p-entail E".into(),
            )),
        }
    }
}
