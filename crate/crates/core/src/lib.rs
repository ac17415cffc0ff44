//! Reasoning with conditional events: trivalent logics, coherence of
//! conditional probability assessments, compound and iterated conditionals,
//! and probabilistic entailment, all in exact rational arithmetic.

pub mod coherence;
pub mod compound;
pub mod entailment;
pub mod error;
pub mod logic;
pub mod lp;
pub mod rational;
pub mod script;
pub mod trivalent;

pub use coherence::{check_coherence, constituents, extension_interval, Assessment, CoherenceVerdict, Mark};
pub use compound::{iterated_table, IteratedTable, Mu, Previsions, ValueTable, WorldDist};
pub use entailment::{CaseLabel, EntailmentVerdict, EntailmentWitness, Reasoner};
pub use error::{Error, Result};
pub use logic::{gn_implies, quasi_conjunction, ConditionalEvent, Event, Universe, World};
pub use rational::{Interval, Rational};
pub use trivalent::{check_validity, TrivalentValue, ValidityMode, Verdict};
