//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use condlogic::coherence::{check_coherence, extension_interval, Assessment};
use condlogic::compound::{
    biconditional_values, conjunction_prevision, conjunction_prevision_closed_form, iterated_table, Mu, Previsions,
    WorldDist,
};
use condlogic::entailment::{entails_by_incoherence, entails_by_quasi_conjunction, p_consistent, GieStatus, Reasoner};
use condlogic::logic::{ConditionalEvent, Event, Universe};
use condlogic::rational::{int, ratio, Interval, Rational};
use condlogic::trivalent::{check_validity, ValidityMode};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// A, B, C in that order.
fn abc() -> (Universe, Event, Event, Event) {
    let u = universe(&["A", "B", "C"]);
    let (a, b, c) = (atom(&u, "A"), atom(&u, "B"), atom(&u, "C"));
    (u, a, b, c)
}

fn poker() -> Outcome {
    let start = Instant::now();
    let u = universe(&["A", "B"]);
    let (a, b) = (atom(&u, "A"), atom(&u, "B"));
    let ante = event(&u, a.clone() | b.clone());
    let cons = cond(&u, b, !a);
    let (x, y) = (ratio(616, 663), ratio(1, 17));
    let pair = conjunction_prevision_closed_form(&u, &ante, &cons, &x, &y).unwrap();
    let prev = Previsions::from_marginals(&[x, y]).with(3, pair.interval.lo.clone());
    let t = iterated_table(&u, &cons, &[ante], &prev).unwrap();
    let elapsed = start.elapsed();
    let mu = t.mu().point().cloned();
    outcome(
        mu == Some(ratio(39, 616)) && pair.interval.is_point() && elapsed < Duration::from_secs(1),
        format!("mu = {:?}, {elapsed:.2?}", mu.map(|m| m.to_string())),
    )
}

fn system_p() -> Outcome {
    let (u, a, b, c) = abc();
    let r = Reasoner::new(&u);
    let rules: Vec<(&str, Vec<ConditionalEvent>, ConditionalEvent, bool)> = vec![
        (
            "CM",
            vec![cond(&u, c.clone(), a.clone()), cond(&u, b.clone(), a.clone())],
            cond(&u, c.clone(), a.clone() & b.clone()),
            true,
        ),
        (
            "Cut",
            vec![cond(&u, c.clone(), a.clone() & b.clone()), cond(&u, b.clone(), a.clone())],
            cond(&u, c.clone(), a.clone()),
            true,
        ),
        (
            "Or",
            vec![cond(&u, c.clone(), a.clone()), cond(&u, c.clone(), b.clone())],
            cond(&u, c.clone(), a.clone() | b.clone()),
            true,
        ),
        (
            "transitivity",
            vec![cond(&u, c.clone(), b.clone()), cond(&u, b.clone(), a.clone())],
            cond(&u, c.clone(), a.clone()),
            false,
        ),
        ("monotonicity", vec![cond(&u, c.clone(), a.clone())], cond(&u, c.clone(), a.clone() & b.clone()), false),
        ("contraposition", vec![cond(&u, c.clone(), a.clone())], cond(&u, !a.clone(), !c.clone()), false),
        ("or-to-if", vec![event(&u, a.clone() | c.clone())], cond(&u, c.clone(), !a.clone()), false),
    ];
    let mut matched = 0;
    let mut slowest = Duration::ZERO;
    let mut misses = Vec::new();
    for (name, fam, concl, expected) in &rules {
        let start = Instant::now();
        let v = r.p_entails(fam, concl).unwrap();
        let dt = start.elapsed();
        slowest = slowest.max(dt);
        if v.entails == *expected && r.replay(fam, concl, &v).unwrap() && dt < Duration::from_secs(1) {
            matched += 1;
        } else {
            misses.push(*name);
        }
    }
    outcome(matched == rules.len(), format!("{matched}/{} match, slowest {slowest:.2?} {misses:?}", rules.len()))
}

struct SweepStats {
    families: usize,
    skipped: usize,
    instances: usize,
    entailed: usize,
    disagreements: usize,
}

fn sweep(u: &Universe, pool: &[Tri], sizes: &[usize]) -> SweepStats {
    let syms = symmetries(u.len());
    let conds: Vec<ConditionalEvent> = pool.iter().map(|t| t.to_cond(u)).collect();
    let mut s = SweepStats { families: 0, skipped: 0, instances: 0, entailed: 0, disagreements: 0 };
    for &size in sizes {
        for fam_idx in canonical_families(pool, size, &syms) {
            s.families += 1;
            let fam: Vec<ConditionalEvent> = fam_idx.iter().map(|&i| conds[i].clone()).collect();
            if !p_consistent(u, &fam).unwrap() {
                s.skipped += 1;
                continue;
            }
            for concl in &conds {
                let qc = entails_by_quasi_conjunction(u, &fam, concl).unwrap().is_some();
                let inc = entails_by_incoherence(u, &fam, concl).unwrap();
                s.instances += 1;
                s.entailed += usize::from(qc);
                if qc != inc {
                    s.disagreements += 1;
                    if s.disagreements <= 3 {
                        eprintln!(
                            "  disagreement: {:?} => {} (qc {qc}, incoherence {inc})",
                            fam.iter().map(|c| u.render_cond(c)).collect::<Vec<_>>(),
                            u.render_cond(concl)
                        );
                    }
                }
            }
        }
    }
    s
}

fn dual_characterization() -> Outcome {
    let start = Instant::now();
    let u2 = universe(&["A", "B"]);
    let full2 = sweep(&u2, &all_conditionals(2), &[1, 2, 3]);
    let u4 = universe(&["A", "B", "C", "D"]);
    let frag4 = sweep(&u4, &literal_fragment(4), &[1, 2]);
    let elapsed = start.elapsed();
    let instances = full2.instances + frag4.instances;
    let disagreements = full2.disagreements + frag4.disagreements;
    outcome(
        disagreements == 0 && elapsed < Duration::from_secs(600),
        format!(
            "{instances} instances ({} + {} entailed), {disagreements} disagreements; \
             2 atoms: {} families ({} not p-consistent), 4 atoms: {} families ({} not p-consistent); {elapsed:.1?}",
            full2.entailed, frag4.entailed, full2.families, full2.skipped, frag4.families, frag4.skipped
        ),
    )
}

fn random_values(rng: &mut ChaCha8Rng, u: &Universe, fam: &[ConditionalEvent]) -> Vec<Rational> {
    match rng.gen_range(0..3) {
        0 => fam.iter().map(|_| grid_value(rng)).collect(),
        1 => {
            let d = random_dist(rng, u, 0.3);
            fam.iter().map(|c| d.cond_prob(u, c).unwrap_or_else(|_| grid_value(rng))).collect()
        }
        _ => fam.iter().map(|_| if rng.gen_bool(0.5) { one() } else { zero() }).collect(),
    }
}

fn fm_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    let (mut n, mut coherent, mut disagreements) = (0, 0, 0);
    let start = Instant::now();
    while n < 1000 {
        let arity = rng.gen_range(2..=3);
        let u = universe(&["A", "B", "C"][..arity]);
        let k = rng.gen_range(1..=3);
        let fam: Vec<ConditionalEvent> = (0..k).map(|_| random_cond(&mut rng, &u)).collect();
        let pats = patterns(&u, &fam);
        if pats.len() > 8 {
            continue;
        }
        let vals = random_values(&mut rng, &u, &fam);
        let lp = check_coherence(&u, &Assessment::from_parts(&fam, &vals).unwrap()).unwrap();
        let fm = fm_coherent(&pats, &vals);
        n += 1;
        coherent += usize::from(fm);
        if lp.coherent != fm || (lp.coherent && !lp.replay(&vals)) {
            disagreements += 1;
        }
    }
    outcome(
        disagreements == 0,
        format!("{n} instances, {coherent} coherent, {disagreements} disagreements, {:.2?}", start.elapsed()),
    )
}

/// All `x_S` for the family from `dist`, building up by subset size.
fn previsions_from(u: &Universe, fam: &[ConditionalEvent], dist: &WorldDist) -> Option<Previsions> {
    let n = fam.len();
    let mut prev = Previsions::new();
    let mut masks: Vec<u32> = (1..1u32 << n).collect();
    masks.sort_by_key(|m| m.count_ones());
    for m in masks {
        let idx: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
        let sub: Vec<ConditionalEvent> = idx.iter().map(|&i| fam[i].clone()).collect();
        let q = if idx.len() == 1 {
            dist.cond_prob(u, &sub[0]).ok()?
        } else {
            conjunction_prevision(u, &sub, &prev.restrict(&idx), dist).ok()?
        };
        prev.set(m, q);
    }
    Some(prev)
}

fn closed_forms() -> Outcome {
    let bic = [
        ((int(1), int(1)), (int(1), int(1))),
        ((int(0), int(0)), (int(0), int(0))),
        ((ratio(1, 2), ratio(1, 2)), (ratio(1, 3), ratio(2, 3))),
    ];
    let bic_ok = bic.iter().all(|((x, y), want)| biconditional_values(x, y) == *want);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let (mut n, mut bad) = (0, 0);
    while n < 1000 {
        let u = universe(&["A", "B", "C"]);
        let k = rng.gen_range(1..=2);
        let mut fam: Vec<ConditionalEvent> = (0..=k).map(|_| random_cond(&mut rng, &u)).collect();
        let dist = random_dist(&mut rng, &u, 0.2);
        let Some(prev) = previsions_from(&u, &fam, &dist) else { continue };
        let cons = fam.pop().unwrap();
        let Ok(t) = iterated_table(&u, &cons, &fam, &prev) else { continue };
        let x = t.antecedent().prevision().clone();
        if x.is_zero() {
            continue;
        }
        n += 1;
        let z = t.conjunction().prevision().clone();
        let ok = match t.mu() {
            Mu::Point(mu) => mu * &x == z && t.expectation(&u, &dist).as_ref() == Some(mu),
            Mu::Interval(_) => false,
        };
        bad += usize::from(!ok);
    }
    outcome(
        bic_ok && bad == 0,
        format!(
            "biconditional triples {}, z = mu x on {n} instances, {bad} failures",
            if bic_ok { "ok" } else { "wrong" }
        ),
    )
}

fn trivalent_separations() -> Outcome {
    let (u, a, b, c) = abc();
    let r = Reasoner::new(&u);
    let trans = [cond(&u, c.clone(), b.clone()), cond(&u, b.clone(), a.clone())];
    let trans_c = cond(&u, c.clone(), a.clone());
    let t1 = check_validity(&u, ValidityMode::SsTt, &trans, &trans_c).unwrap().valid;
    let t2 = !r.p_entails(&trans, &trans_c).unwrap().entails;

    let oti = [event(&u, a.clone() | b.clone())];
    let oti_c = cond(&u, b.clone(), !a.clone());
    let o1 = check_validity(&u, ValidityMode::TT, &oti, &oti_c).unwrap().valid;
    let o2 = !r.p_entails(&oti, &oti_c).unwrap().entails;

    let ca = [cond(&u, c.clone(), a.clone())];
    let ac = event(&u, a.clone() & c.clone());
    let p1 = !r.p_entails(&ca, &ac).unwrap().entails;
    let ext = extension_interval(&u, &Assessment::from_parts(&ca, &[one()]).unwrap(), &ac).unwrap();
    let p2 = ext == Interval::new(zero(), one());
    let all = [t1, t2, o1, o2, p1, p2];
    outcome(all.iter().all(|v| *v), format!("verdicts {all:?}, extension of A & C = [{}, {}]", ext.lo, ext.hi))
}

fn import_export_failures() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE4);
    let u = universe(&["A", "H"]);
    let (a, h) = (atom(&u, "A"), atom(&u, "H"));
    let ah = cond(&u, a.clone(), h.clone());
    let hh = event(&u, h.clone());

    // H|(A|H): prevision P(H) whenever P(A|H) > 0.
    let mut hh_runs = 0;
    let mut hh_bad = 0;
    while hh_runs < 200 {
        let dist = random_dist(&mut rng, &u, 0.2);
        let Some(prev) = previsions_from(&u, &[ah.clone(), hh.clone()], &dist) else { continue };
        if prev.get(1).unwrap().is_zero() {
            continue;
        }
        hh_runs += 1;
        let t = iterated_table(&u, &hh, std::slice::from_ref(&ah), &prev).unwrap();
        if t.mu().point() != Some(&dist.prob_event(&u, &h)) {
            hh_bad += 1;
        }
    }

    // A|(A|A) is the indicator of A.
    let aa = cond(&u, a.clone(), a.clone());
    let a_ev = event(&u, a.clone());
    let mut indicator_ok = true;
    for p in GRID.iter().map(|&(n, d)| ratio(n, d)) {
        let z = conjunction_prevision_closed_form(&u, &aa, &a_ev, &one(), &p).unwrap().interval;
        let prev = Previsions::from_marginals(&[one(), p.clone()]).with(3, z.lo.clone());
        let t = iterated_table(&u, &a_ev, std::slice::from_ref(&aa), &prev).unwrap();
        let values = t.values().unwrap();
        for (row, v) in t.rows().iter().zip(&values) {
            let on_a = u.world(row.first_world).value(0);
            indicator_ok &= *v == if on_a { one() } else { zero() };
        }
    }

    // (B|~A)|(A | B) is not constantly 1 when y < 1.
    let u2 = universe(&["A", "B"]);
    let (a2, b2) = (atom(&u2, "A"), atom(&u2, "B"));
    let ante = event(&u2, a2.clone() | b2.clone());
    let cons = cond(&u2, b2, !a2);
    let mut oti_cases = 0;
    let mut oti_ok = true;
    for x in GRID.iter().map(|&(n, d)| ratio(n, d)).filter(|x| !x.is_zero()) {
        for y in GRID.iter().map(|&(n, d)| ratio(n, d)) {
            let Ok(pair) = conjunction_prevision_closed_form(&u2, &ante, &cons, &x, &y) else { continue };
            let prev = Previsions::from_marginals(&[x.clone(), y.clone()]).with(3, pair.interval.lo.clone());
            let t = iterated_table(&u2, &cons, std::slice::from_ref(&ante), &prev).unwrap();
            let constant_one = t.values().unwrap().iter().all(One::is_one);
            oti_cases += 1;
            oti_ok &= constant_one == y.is_one();
        }
    }
    outcome(
        hh_bad == 0 && indicator_ok && oti_ok && oti_cases > 0,
        format!(
            "H|(A|H) = P(H) on {hh_runs} distributions ({hh_bad} failures); A|(A|A) = A: {indicator_ok}; \
             (B|~A)|(A | B) on {oti_cases} coherent (x, y): {oti_ok}"
        ),
    )
}

fn gie_suite() -> Outcome {
    let (u, a, b, c) = abc();
    let r = Reasoner::new(&u);
    let satisfied = [
        (
            vec![cond(&u, c.clone(), a.clone()), cond(&u, b.clone(), a.clone())],
            cond(&u, c.clone(), a.clone() & b.clone()),
        ),
        (
            vec![cond(&u, c.clone(), a.clone() & b.clone()), cond(&u, b.clone(), a.clone())],
            cond(&u, c.clone(), a.clone()),
        ),
        (
            vec![cond(&u, c.clone(), a.clone()), cond(&u, c.clone(), b.clone())],
            cond(&u, c.clone(), a.clone() | b.clone()),
        ),
    ];
    let mut ok = satisfied.iter().all(|(f, e)| r.general_import_export(f, e).unwrap().status == GieStatus::Satisfied);
    let oti = r.general_import_export(&[event(&u, a.clone() | b.clone())], &cond(&u, b.clone(), !a.clone())).unwrap();
    let oti_ok = matches!(oti.status, GieStatus::NotEstablished { right_is_one: true, .. });
    ok &= oti_ok;
    outcome(ok, format!("CM, Cut, Or satisfied; or-to-if not established: {oti_ok}"))
}

fn corpus(started: Instant) -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut scripts: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cl"))
        .collect();
    scripts.sort();
    let mut mismatches = Vec::new();
    for s in &scripts {
        let out = Command::new(env!("CARGO_BIN_EXE_condlogic")).arg(s).output().unwrap();
        let golden = std::fs::read_to_string(s.with_extension("out")).unwrap_or_default();
        if String::from_utf8_lossy(&out.stdout) != golden {
            mismatches.push(s.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    let total = started.elapsed();
    outcome(
        mismatches.is_empty() && !scripts.is_empty() && total < Duration::from_secs(900),
        format!("{} scripts, mismatches {mismatches:?}; acceptance wall clock {total:.1?}", scripts.len()),
    )
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let started = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("poker or-to-if prevision", Box::new(poker)),
        ("System P verdicts", Box::new(system_p)),
        ("dual characterization sweep", Box::new(dual_characterization)),
        ("simplex vs Fourier-Motzkin coherence", Box::new(fm_agreement)),
        ("closed forms and z = mu x", Box::new(closed_forms)),
        ("trivalent separations", Box::new(trivalent_separations)),
        ("import-export failures", Box::new(import_export_failures)),
        ("general import-export suite", Box::new(gie_suite)),
        ("CLI corpus", Box::new(move || corpus(started))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!("{tag} criterion {}: {name} ({}) [{:.2?}]", i + 1, o.detail, t.elapsed());
    }
    println!("acceptance: {}/{} passed in {:.1?}", criteria.len() - failed, criteria.len(), started.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
