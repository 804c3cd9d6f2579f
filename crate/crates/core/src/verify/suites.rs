//! Verification suites over the arrangement families. Cases run in parallel
//! and are reported in a fixed order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    abelianization, normalize_presentation, presentation_to_text, same_by_names, tietze_introduce, ConsequenceStatus,
    FreeProduct, GeneratorLabel, Presentation, Simplifier, Word,
};
use crate::geometry::{build_family, compute_events, FamilyTag};
use crate::sweep::{
    circle_pencil, drop_meridian, outer_pencil, outer_pencil_one_tangent, outer_pencil_raw, run_sweep, simplify_sweep,
    tangent_family, three_tangents, two_tangents, ChainVariant, Reference, SimplifyLevel, SweepOptions, SweepResult,
};

use super::coset::{max_cosets_from_env, todd_coxeter};
use super::groups::{count_homs_finite, FiniteGroup};
use super::invariants::{invariants_report, Depth};
use super::low_index::low_index_subgroups;
use super::redundancy::{closing_presentation, replay_redundancy, verify_kappa_redundancy};
use super::transport::check_trace_invariants;
use super::witness::{modular_witness, s3_composite_is_hom, verify_big_witness};
use super::VerifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Theorems,
    Corollaries,
    Invariants,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        Some(match s {
            "theorems" => Suite::Theorems,
            "corollaries" => Suite::Corollaries,
            "invariants" => Suite::Invariants,
            "all" => Suite::All,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Theorems => "theorems",
            Suite::Corollaries => "corollaries",
            Suite::Invariants => "invariants",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Pass,
    Fail,
    /// A search bound was hit; not a mathematical failure.
    Resource,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub status: CaseStatus,
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn failures(&self) -> Vec<&CaseReport> {
        self.cases.iter().filter(|c| c.status == CaseStatus::Fail).collect()
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status == CaseStatus::Pass)
    }

    pub fn has_resource_limits(&self) -> bool {
        self.cases.iter().any(|c| c.status == CaseStatus::Resource)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.cases {
            let tag = match c.status {
                CaseStatus::Pass => "PASS",
                CaseStatus::Fail => "FAIL",
                CaseStatus::Resource => "RESOURCE",
            };
            s.push_str(&format!("{tag} {}\n", c.name));
            if c.status != CaseStatus::Pass {
                s.push_str(&format!("     {}\n", c.details));
            }
        }
        let pass = self.cases.iter().filter(|c| c.status == CaseStatus::Pass).count();
        s.push_str(&format!("{}: {pass}/{} passed\n", self.suite, self.cases.len()));
        s
    }
}

type CaseResult = Result<(bool, Value), VerifyError>;
type Job = Box<dyn Fn() -> CaseResult + Send + Sync>;

fn job<F: Fn() -> CaseResult + Send + Sync + 'static>(name: String, f: F) -> (String, Job) {
    (name, Box::new(f))
}

fn run_jobs(suite: &str, jobs: Vec<(String, Job)>) -> SuiteReport {
    let cases = jobs
        .par_iter()
        .map(|(name, f)| {
            let (status, details) = match f() {
                Ok((true, d)) => (CaseStatus::Pass, d),
                Ok((false, d)) => (CaseStatus::Fail, d),
                Err(e @ (VerifyError::Exhausted { .. } | VerifyError::ResourceLimit { .. })) => {
                    (CaseStatus::Resource, json!(e.to_string()))
                }
                Err(e) => (CaseStatus::Fail, json!(e.to_string())),
            };
            CaseReport { name: name.clone(), status, details }
        })
        .collect();
    SuiteReport { suite: suite.to_owned(), cases }
}

fn sweep(f: FamilyTag, n: usize, opts: SweepOptions) -> Result<SweepResult, VerifyError> {
    Ok(run_sweep(&build_family(f, n, None)?, opts)?)
}

fn text(p: &Presentation) -> Value {
    json!(presentation_to_text(&normalize_presentation(p)))
}

/// Sweep with both option sets; transport invariants and determinism.
fn sweep_checks(f: FamilyTag, n: usize) -> Result<(bool, Value), VerifyError> {
    let arr = build_family(f, n, None)?;
    let events = compute_events(&arr)?;
    let mut violations = Vec::new();
    for opts in [SweepOptions::default(), SweepOptions { ignore_last_fiber: false, half_twist: true }] {
        let r = run_sweep(&arr, opts)?;
        violations.extend(check_trace_invariants(&events, &r, opts.half_twist));
        let again = run_sweep(&arr, opts)?;
        if again.trace_json() != r.trace_json() {
            violations.push(super::transport::TransportViolation {
                event: "*".into(),
                check: "determinism".into(),
                detail: "repeated sweep differs".into(),
            });
        }
    }
    Ok((violations.is_empty(), json!({ "events": events.len(), "violations": violations })))
}

fn matches_reference(p: &Presentation, r: &Reference) -> (bool, Value) {
    let ok = same_by_names(p, &r.presentation);
    (ok, json!({ "computed": text(p), "expected": text(&r.presentation) }))
}

/// Computed presentations against the closed forms, with transport checks.
pub fn theorem_suite(n_max: usize) -> SuiteReport {
    let mut jobs = Vec::new();
    for n in 1..=n_max {
        jobs.push(job(format!("A{n}: sweep equals tangent-line presentation"), move || {
            let s = sweep(FamilyTag::A, n, SweepOptions::default())?.merged()?;
            Ok(matches_reference(&s.finish(), &tangent_family(n, ChainVariant::Forward)))
        }));
    }
    for n in 0..=n_max {
        jobs.push(job(format!("B{n}: sweep equals six-relation presentation"), move || {
            let s = sweep(FamilyTag::B, n, SweepOptions::default())?.merged()?;
            Ok(matches_reference(&s.finish(), &outer_pencil_raw(n)))
        }));
        jobs.push(job(format!("B{n}: scripted presentation and meridian of T2"), move || {
            let r = sweep(FamilyTag::B, n, SweepOptions::default())?;
            let s = simplify_sweep(FamilyTag::B, n, &r, SimplifyLevel::Scripted)?;
            let reference = outer_pencil(n);
            let (ok, mut d) = matches_reference(&s.finish(), &reference);
            let want = meridian_text(&reference, "T2");
            let got = s.meridian_text().into_iter().find(|(c, _)| c == "T2").map(|(_, w)| w);
            d["meridian_T2"] = json!(got);
            Ok((ok && got == want, d))
        }));
    }
    for n in 1..=n_max {
        jobs.push(job(format!("C{n}: scripted presentation and trivial closing relator"), move || {
            let r = sweep(FamilyTag::C, n, SweepOptions::default())?;
            let s = simplify_sweep(FamilyTag::C, n, &r, SimplifyLevel::Scripted)?;
            let (ok, mut d) = matches_reference(&s.finish(), &circle_pencil(n));
            let full = sweep(FamilyTag::C, n, SweepOptions { ignore_last_fiber: false, half_twist: true })?;
            let close = full.trace.records.last().map(|r| r.emitted.clone()).unwrap_or_default();
            let trivial = !close.is_empty() && close.iter().all(|e| e.word.is_empty());
            d["closing_relators"] = json!(close.len());
            Ok((ok && trivial, d))
        }));
    }
    for f in [FamilyTag::A, FamilyTag::B, FamilyTag::C] {
        let lo = usize::from(f != FamilyTag::B);
        for n in lo..=n_max {
            jobs.push(job(format!("{}{n}: transport invariants and determinism", f.as_str()), move || sweep_checks(f, n)));
        }
    }
    run_jobs("theorems", jobs)
}

fn meridian_text(r: &Reference, component: &str) -> Option<String> {
    let names = r.presentation.names();
    r.meridians.iter().find(|m| m.component == component).map(|m| crate::algebra::word_to_text(&m.word, &names))
}

fn scripted(f: FamilyTag, n: usize) -> Result<Simplifier, VerifyError> {
    let r = sweep(f, n, SweepOptions::default())?;
    Ok(simplify_sweep(f, n, &r, SimplifyLevel::Scripted)?)
}

fn consequence_summary(s: &Simplifier) -> Value {
    let items: Vec<Value> = s
        .log()
        .iter()
        .filter_map(|r| {
            r.consequence.as_ref().map(|c| {
                let status = match c {
                    ConsequenceStatus::Confirmed { .. } => "confirmed".to_owned(),
                    ConsequenceStatus::UnconfirmedAtDepth { explored } => format!("unconfirmed-at-depth ({explored} states)"),
                };
                json!({ "step": r.step, "status": status })
            })
        })
        .collect();
    json!(items)
}

fn same_invariants(p: &Presentation, q: &Presentation, index_max: usize) -> Result<bool, VerifyError> {
    let d = Depth::new(index_max);
    Ok(invariants_report(p, &d)? == invariants_report(q, &d)?)
}

/// Largest line count with built-in family parameters.
const MAX_DEFAULT_LINES: usize = 5;

/// Elimination schedules for the corollaries, the free-product witness, and
/// the isomorphisms between pencil families.
pub fn corollary_suite(n_max: usize, index_max: usize) -> SuiteReport {
    let mut jobs = Vec::new();
    jobs.push(job("(a) one tangent line gives the integers".into(), || {
        let s = scripted(FamilyTag::A, 1)?;
        let p = s.finish();
        let ok = p.gen_count() == 1 && p.relators().is_empty();
        Ok((ok, json!({ "computed": text(&p), "steps": consequence_summary(&s) })))
    }));
    jobs.push(job("(b) two tangent lines and the meridian of T2".into(), || {
        let s = scripted(FamilyTag::A, 2)?;
        let reference = two_tangents();
        let (ok, mut d) = matches_reference(&s.finish(), &reference);
        let got = s.meridian_text().into_iter().find(|(c, _)| c == "T2").map(|(_, w)| w);
        d["meridian_T2"] = json!(got);
        Ok((ok && got == meridian_text(&reference, "T2"), d))
    }));
    jobs.push(job("(c) three tangent lines".into(), move || {
        let s = scripted(FamilyTag::A, 3)?;
        let reference = three_tangents();
        let (ok, mut d) = matches_reference(&s.finish(), &reference);
        d["steps"] = consequence_summary(&s);
        let raw = sweep(FamilyTag::A, 3, SweepOptions::default())?.projective();
        let inv = same_invariants(raw.presentation(), &reference.presentation, index_max)?;
        d["invariants_agree"] = json!(inv);
        Ok((ok && inv, d))
    }));
    jobs.push(job("(b') two tangent lines map onto Z/2 * Z/3".into(), || {
        let fp = FreeProduct::default();
        let p = two_tangents().presentation;
        let k = fp.mul(&fp.inverse(&fp.b()), &fp.a());
        let h = modular_witness(&p, &[("t", fp.b()), ("k", k)]);
        let r = verify_big_witness(&p, &h);
        let s3 = s3_composite_is_hom(&p, &h) && count_homs_finite(&p, &FiniteGroup::symmetric(3)) > 0;
        Ok((r.accepted && s3, json!(r)))
    }));
    jobs.push(job("B0 and A2 have the same invariants".into(), move || {
        let b0 = scripted(FamilyTag::B, 0)?.finish();
        let ok = same_invariants(&b0, &two_tangents().presentation, index_max)?;
        Ok((ok, json!({ "B0": text(&b0) })))
    }));
    for n in 0..=n_max {
        jobs.push(job(format!("(d) B'{n}: quotient of B{n} by its first tangent"), move || {
            let reference = outer_pencil_one_tangent(n);
            let quotient = drop_meridian(&outer_pencil(n), "T1", "t", &[])?.finish();
            let (ok_q, mut d) = matches_reference(&quotient, &reference);
            let computed = scripted(FamilyTag::Bprime, n)?.finish();
            d["sweep"] = text(&computed);
            let ok_sweep = same_by_names(&computed, &reference.presentation);
            let inv = same_invariants(&quotient, &reference.presentation, index_max)?;
            d["invariants_agree"] = json!(inv);
            Ok((ok_q && ok_sweep && inv, d))
        }));
        if n + 1 > MAX_DEFAULT_LINES {
            continue;
        }
        jobs.push(job(format!("(e) B''{} equals B'{n}", n + 1), move || {
            let computed = scripted(FamilyTag::Bprimeprime, n + 1)?.finish();
            let reference = outer_pencil_one_tangent(n);
            let (ok, mut d) = matches_reference(&computed, &reference);
            let inv = same_invariants(&computed, &reference.presentation, index_max)?;
            d["invariants_agree"] = json!(inv);
            Ok((ok && inv, d))
        }));
    }
    for n in 1..=n_max {
        jobs.push(job(format!("(f) C{n} equals B'{n}"), move || {
            let c = scripted(FamilyTag::C, n)?.finish();
            let bprime = outer_pencil_one_tangent(n).presentation;
            let ok = same_by_names(&c, &bprime);
            let inv = same_invariants(&c, &bprime, index_max)?;
            Ok((ok && inv, json!({ "C": text(&c), "invariants_agree": inv })))
        }));
        if n < MAX_DEFAULT_LINES {
            jobs.push(job(format!("(f) C{n} equals C'{}", n + 1), move || {
                let c = scripted(FamilyTag::C, n)?.finish();
                let cprime = scripted(FamilyTag::Cprime, n + 1)?.finish();
                let inv = same_invariants(&c, &cprime, index_max)?;
                Ok((same_by_names(&c, &cprime) && inv, json!({ "C": text(&c), "C'": text(&cprime), "invariants_agree": inv })))
            }));
        }
    }
    run_jobs("corollaries", jobs)
}

/// Random Tietze moves that preserve the group.
fn tietze_move(p: &Presentation, rng: &mut ChaCha8Rng, fresh: &mut usize) -> Presentation {
    let g = p.gen_count();
    let random_word = |rng: &mut ChaCha8Rng, len: usize| {
        Word::from_runs((0..len).map(|_| (rng.gen_range(0..g), if rng.gen_bool(0.5) { 1 } else { -1 })))
    };
    let rels = p.relators().to_vec();
    match rng.gen_range(0..5) {
        0 => {
            let len = rng.gen_range(1..=3);
            let w = random_word(rng, len);
            *fresh += 1;
            tietze_introduce(p, GeneratorLabel::plain(format!("x{fresh}")), &w).expect("fresh name")
        }
        1 if !rels.is_empty() => {
            // conjugate of a product of two relators
            let (a, b) = (&rels[rng.gen_range(0..rels.len())], &rels[rng.gen_range(0..rels.len())]);
            let u = random_word(rng, 2);
            let v = Word::conjugate(&(a * &b.inverse()), &u);
            let mut q = p.clone();
            let _ = q.add_relator(v);
            q
        }
        2 if !rels.is_empty() => {
            let i = rng.gen_range(0..rels.len());
            let rots = rels[i].run_rotations();
            let r = rots.choose(rng).cloned().unwrap_or_else(|| rels[i].clone()).inverse();
            let mut out = rels.clone();
            out[i] = r;
            Presentation::new(p.generators().to_vec(), out).expect("same generators")
        }
        3 => {
            let mut perm: Vec<usize> = (0..g).collect();
            perm.shuffle(rng);
            let gens = perm.iter().map(|&i| p.generators()[i].clone()).collect();
            let pos = |old: usize| perm.iter().position(|&x| x == old).expect("permutation");
            Presentation::new(gens, rels.iter().map(|r| r.map_gens(pos)).collect()).expect("permuted names")
        }
        _ => {
            let mut s = Simplifier::unlabeled(p.clone());
            match s.greedy() {
                Ok(()) => s.finish(),
                Err(_) => p.clone(),
            }
        }
    }
}

const FUZZ_ROUNDS: usize = 50;

fn fuzz(name: &'static str, p: Presentation, seed: u64, index_max: usize) -> CaseResult {
    let d = Depth::new(index_max);
    let base = invariants_report(&p, &d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = p.clone();
    let mut fresh = 0;
    for round in 0..FUZZ_ROUNDS {
        cur = tietze_move(&cur, &mut rng, &mut fresh);
        if cur.total_length() > 4 * p.total_length() + 40 {
            cur = p.clone();
        }
        if invariants_report(&cur, &d)? != base {
            return Ok((false, json!({ "presentation": name, "round": round, "at": text(&cur) })));
        }
    }
    Ok((true, json!({ "presentation": name, "rounds": FUZZ_ROUNDS, "report": base })))
}

fn sigma(k: usize) -> u128 {
    (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| d as u128).sum()
}

/// Oracle checks for the engines, redundancy derivations and Tietze fuzzing.
pub fn invariants_suite(n_max: usize, index_max: usize) -> SuiteReport {
    let mut jobs = Vec::new();
    for n in 1..=n_max {
        jobs.push(job(format!("A{n}: abelianization is free of rank {n}"), move || {
            let r = sweep(FamilyTag::A, n, SweepOptions::default())?;
            let ab = abelianization(r.projective().presentation());
            Ok((ab.free_rank == n && ab.torsion.is_empty(), json!(ab)))
        }));
    }
    jobs.push(job("low-index counts for Z and Z^2".into(), || {
        let z = crate::algebra::parse_presentation("< a | >").expect("literal");
        let z2 = crate::algebra::parse_presentation("< a, b | a*b*a^-1*b^-1 >").expect("literal");
        let cz = low_index_subgroups(&z, 6)?.counts;
        let cz2 = low_index_subgroups(&z2, 6)?.counts;
        let ok = cz == vec![1; 6] && cz2 == (1..=6).map(sigma).collect::<Vec<_>>();
        Ok((ok, json!({ "Z": cz, "Z^2": cz2 })))
    }));
    jobs.push(job("homomorphisms Z^2 -> S3".into(), || {
        let z2 = crate::algebra::parse_presentation("< a, b | a*b*a^-1*b^-1 >").expect("literal");
        let c = count_homs_finite(&z2, &FiniteGroup::symmetric(3));
        Ok((c == 18, json!(c)))
    }));
    jobs.push(job("coset enumeration indices".into(), || {
        let bound = max_cosets_from_env();
        let mut got = Vec::new();
        for (p, sub, want) in [
            ("< a | a^5 >", vec![], 5usize),
            ("< a, b | a^2, b^3, a*b*a*b >", vec!["b"], 2),
            ("< k, l | k*l*k^-1*l^-1 >", vec!["k^2", "l"], 2),
        ] {
            let p = crate::algebra::parse_presentation(p).expect("literal");
            let sub: Vec<Word> =
                sub.iter().map(|s| crate::algebra::parse_word(s, &p.names()).expect("literal")).collect();
            let t = todd_coxeter(&p, &sub, bound)?;
            got.push((t.index(), want, t.is_valid_for(&p)));
        }
        Ok((got.iter().all(|&(i, w, v)| i == w && v), json!(got)))
    }));
    for n in 2..=n_max.max(2) {
        jobs.push(job(format!("A{n}: closing circle relator is redundant"), move || {
            let (p, labels) = closing_presentation(n)?;
            let rep = verify_kappa_redundancy(&p, &labels, Some(&Depth::new(index_max)))?;
            let close = labels.iter().position(|l| l == "branch-close").expect("closing relator present");
            let replay = replay_redundancy(&p.relators()[close], &rep.steps, &p, &labels);
            Ok((rep.passed() && replay, json!(rep)))
        }));
    }
    let fuzz_inputs: Vec<(&'static str, Presentation)> = vec![
        ("two tangents", two_tangents().presentation),
        ("three tangents", three_tangents().presentation),
        ("outer pencil 1", outer_pencil(1).presentation),
        ("circle pencil 2", circle_pencil(2).presentation),
    ];
    for (i, (name, p)) in fuzz_inputs.into_iter().enumerate() {
        let p = p.clone();
        jobs.push(job(format!("Tietze fuzz: {name}"), move || fuzz(name, p.clone(), 0x5eed + i as u64, index_max.min(4))));
    }
    run_jobs("invariants", jobs)
}

/// Runs one suite, or all of them under the name `all`.
pub fn run_suite(suite: Suite, n_max: usize, index_max: usize) -> SuiteReport {
    match suite {
        Suite::Theorems => theorem_suite(n_max),
        Suite::Corollaries => corollary_suite(n_max, index_max),
        Suite::Invariants => invariants_suite(n_max, index_max),
        Suite::All => {
            let mut cases = Vec::new();
            for s in [Suite::Theorems, Suite::Corollaries, Suite::Invariants] {
                cases.extend(run_suite(s, n_max, index_max).cases);
            }
            SuiteReport { suite: "all".into(), cases }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for s in [Suite::Theorems, Suite::Corollaries, Suite::Invariants] {
            let r = run_suite(s, 2, 3);
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn report_json_shape() {
        let r = SuiteReport {
            suite: "x".into(),
            cases: vec![CaseReport { name: "c".into(), status: CaseStatus::Resource, details: json!(null) }],
        };
        assert_eq!(r.to_json(), json!({ "suite": "x", "cases": [{ "name": "c", "status": "resource", "details": null }] }));
    }
}
