//! Kleene strong connectives, the parametric Jeffrey conditional, and
//! validity of trivalent inferences under four semantic modes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{ConditionalEvent, Universe, World};
use crate::rational::{half, int, Rational};

/// Ordered `False < Void < True`, read numerically as 0, 1/2, 1.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum TrivalentValue {
    False,
    Void,
    True,
}

impl TrivalentValue {
    pub fn numeric(self) -> Rational {
        match self {
            TrivalentValue::False => int(0),
            TrivalentValue::Void => half(),
            TrivalentValue::True => int(1),
        }
    }

    pub fn from_numeric(q: &Rational) -> Option<TrivalentValue> {
        [TrivalentValue::False, TrivalentValue::Void, TrivalentValue::True].into_iter().find(|v| v.numeric() == *q)
    }

    pub fn and(self, other: TrivalentValue) -> TrivalentValue {
        self.min(other)
    }

    pub fn or(self, other: TrivalentValue) -> TrivalentValue {
        self.max(other)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> TrivalentValue {
        match self {
            TrivalentValue::False => TrivalentValue::True,
            TrivalentValue::Void => TrivalentValue::Void,
            TrivalentValue::True => TrivalentValue::False,
        }
    }

    /// S-true: value 1.
    pub fn s_true(self) -> bool {
        self == TrivalentValue::True
    }

    /// T-true: value at least 1/2.
    pub fn t_true(self) -> bool {
        self != TrivalentValue::False
    }
}

/// The four free cells `d1..d4` of the Jeffrey conditional table, each 1 or 1/2.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct JeffreyParams {
    d: [TrivalentValue; 4],
}

impl Default for JeffreyParams {
    fn default() -> Self {
        JeffreyParams { d: [TrivalentValue::Void; 4] }
    }
}

impl JeffreyParams {
    pub fn new(d: [TrivalentValue; 4]) -> Result<JeffreyParams> {
        if d.contains(&TrivalentValue::False) {
            return Err(Error::Argument("Jeffrey parameters must be 1 or 1/2".into()));
        }
        Ok(JeffreyParams { d })
    }

    pub fn get(&self) -> [TrivalentValue; 4] {
        self.d
    }
}

/// Jeffrey conditional `B|A` with antecedent value `a` and consequent value `b`.
pub fn jeffrey_cond(a: TrivalentValue, b: TrivalentValue, p: &JeffreyParams) -> TrivalentValue {
    use TrivalentValue::*;
    match (a, b) {
        (True, True) => True,
        (True, Void) => p.d[0],
        (True, False) => False,
        (Void, True) => p.d[1],
        (Void, Void) => p.d[2],
        (Void, False) => False,
        (False, True) => Void,
        (False, Void) => p.d[3],
        (False, False) => Void,
    }
}

/// Compound trivalent formulas built from conditional events.
#[derive(Clone, PartialEq, Debug)]
pub enum TriFormula {
    Cond(ConditionalEvent),
    Not(Box<TriFormula>),
    And(Box<TriFormula>, Box<TriFormula>),
    Or(Box<TriFormula>, Box<TriFormula>),
    /// `consequent | antecedent` under the Jeffrey table.
    Jeffrey {
        consequent: Box<TriFormula>,
        antecedent: Box<TriFormula>,
    },
}

impl TriFormula {
    pub fn eval(&self, u: &Universe, w: World, p: &JeffreyParams) -> TrivalentValue {
        match self {
            TriFormula::Cond(c) => u.eval_cond(c, w),
            TriFormula::Not(f) => f.eval(u, w, p).not(),
            TriFormula::And(a, b) => a.eval(u, w, p).and(b.eval(u, w, p)),
            TriFormula::Or(a, b) => a.eval(u, w, p).or(b.eval(u, w, p)),
            TriFormula::Jeffrey { consequent, antecedent } => {
                jeffrey_cond(antecedent.eval(u, w, p), consequent.eval(u, w, p), p)
            }
        }
    }
}

impl From<ConditionalEvent> for TriFormula {
    fn from(c: ConditionalEvent) -> Self {
        TriFormula::Cond(c)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ValidityMode {
    /// S-truth preserved.
    SS,
    /// T-truth preserved.
    TT,
    /// Both of the above.
    SsTt,
    /// Some premise S-true with the rest void forces an S-true conclusion, and
    /// a false conclusion forces some false premise.
    SsTtStar,
}

impl ValidityMode {
    pub fn keyword(self) -> &'static str {
        match self {
            ValidityMode::SS => "SS",
            ValidityMode::TT => "TT",
            ValidityMode::SsTt => "SSTT",
            ValidityMode::SsTtStar => "SSTT*",
        }
    }
}

impl fmt::Display for ValidityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for ValidityMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SS" => Ok(ValidityMode::SS),
            "TT" => Ok(ValidityMode::TT),
            "SSTT" => Ok(ValidityMode::SsTt),
            "SSTT*" => Ok(ValidityMode::SsTtStar),
            _ => Err(Error::Argument(format!("unknown validity mode `{s}`"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub valid: bool,
    /// First violating world in enumeration order.
    pub witness: Option<World>,
}

fn violates(mode: ValidityMode, premises: &[TrivalentValue], conclusion: TrivalentValue) -> bool {
    let ss = premises.iter().all(|v| v.s_true()) && !conclusion.s_true();
    let tt = premises.iter().all(|v| v.t_true()) && !conclusion.t_true();
    match mode {
        ValidityMode::SS => ss,
        ValidityMode::TT => tt,
        ValidityMode::SsTt => ss || tt,
        ValidityMode::SsTtStar => {
            let some_true = premises.iter().any(|v| v.s_true());
            let rest_void = premises.iter().all(|v| *v != TrivalentValue::False);
            let first = some_true && rest_void && !conclusion.s_true();
            let second = conclusion == TrivalentValue::False && !premises.contains(&TrivalentValue::False);
            first || second
        }
    }
}

pub fn check_validity_formulas(
    u: &Universe,
    mode: ValidityMode,
    premises: &[TriFormula],
    conclusion: &TriFormula,
    params: &JeffreyParams,
) -> Result<Verdict> {
    if premises.is_empty() && mode == ValidityMode::SsTtStar {
        return Err(Error::Argument(format!("{mode} validity needs at least one premise")));
    }
    let mut values = Vec::with_capacity(premises.len());
    for w in u.worlds() {
        values.clear();
        values.extend(premises.iter().map(|f| f.eval(u, w, params)));
        if violates(mode, &values, conclusion.eval(u, w, params)) {
            return Ok(Verdict { valid: false, witness: Some(w) });
        }
    }
    Ok(Verdict { valid: true, witness: None })
}

pub fn check_validity(
    u: &Universe,
    mode: ValidityMode,
    premises: &[ConditionalEvent],
    conclusion: &ConditionalEvent,
) -> Result<Verdict> {
    let prem: Vec<TriFormula> = premises.iter().cloned().map(TriFormula::Cond).collect();
    check_validity_formulas(u, mode, &prem, &TriFormula::Cond(conclusion.clone()), &JeffreyParams::default())
}
