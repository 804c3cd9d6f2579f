//! Van Kampen sweep over a real arrangement: fiber bases, relators emitted
//! at singular fibers, basis transport, and local groups.

mod reference;
mod scripts;

pub use reference::{
    circle_pencil, outer_pencil, outer_pencil_one_tangent, outer_pencil_raw, tangent_family, three_tangents,
    two_tangents, ChainVariant, Reference,
};
pub use scripts::{drop_meridian, scripted_schedule, simplify_sweep, SimplifyLevel};

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{
    word_to_text, GeneratorLabel, Meridian, Presentation, Simplifier, SimplifyError, Word,
};
use crate::geometry::{
    compute_events, BranchSide, BranchTag, Event, EventKind, FamilyTag, GeometryError, StrandTable, Arrangement,
    CONIC,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SweepError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Simplify(#[from] SimplifyError),
    #[error("unsupported transport across {0}: enable the half-twist rule")]
    UnsupportedTransport(String),
    #[error("sweep must start with the circle's opening branch, found {0}")]
    NoOpeningBranch(String),
    #[error("basis and fiber disagree after {0}")]
    BasisMismatch(String),
    #[error("no scripted schedule for {0}")]
    NoScript(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Skip relators of the final singular fiber.
    pub ignore_last_fiber: bool,
    /// Allow transport across multiple points by the reversal rule.
    pub half_twist: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { ignore_last_fiber: true, half_twist: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisEntry {
    pub word: Word,
    pub component: String,
    pub branch: BranchTag,
}

/// Words attached to the strands of a regular fiber, bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberBasis {
    pub entries: Vec<BasisEntry>,
}

impl FiberBasis {
    pub fn words(&self) -> Vec<&Word> {
        self.entries.iter().map(|e| &e.word).collect()
    }

    /// Top-to-bottom product of all entries.
    pub fn descending_product(&self) -> Word {
        Word::descending_product(self.entries.iter().map(|e| &e.word))
    }

    fn matches(&self, table: &StrandTable) -> bool {
        self.entries.len() == table.strands.len()
            && self.entries.iter().zip(&table.strands).all(|(e, s)| e.component == s.component && e.branch == s.branch)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmittedRelator {
    pub label: String,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventRecord {
    pub label: String,
    pub strands: Vec<usize>,
    pub components: Vec<String>,
    /// `None` when an earlier transport was unavailable.
    pub basis_before: Option<FiberBasis>,
    pub emitted: Vec<EmittedRelator>,
    pub basis_after: Option<FiberBasis>,
    pub ignored: bool,
    pub relator_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepTrace {
    pub initial: FiberBasis,
    pub records: Vec<EventRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalGroup {
    pub label: String,
    pub components: Vec<String>,
    pub generators: Vec<Word>,
}

pub type LocalGroupTable = Vec<LocalGroup>;

/// Raw sweep output: affine presentation with labeled relators.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub presentation: Presentation,
    pub labels: Vec<String>,
    pub trace: SweepTrace,
    pub local_groups: LocalGroupTable,
    /// Initial basis after the opening branch identification.
    pub identified: FiberBasis,
    pub meridians: Vec<Meridian>,
}

fn line_name(family: FamilyTag, component: &str) -> String {
    match (family, component) {
        (FamilyTag::B | FamilyTag::Bprime | FamilyTag::Bprimeprime, "T1") => "t".into(),
        (FamilyTag::B | FamilyTag::Bprime | FamilyTag::Bprimeprime, "T2") => "s".into(),
        (FamilyTag::C | FamilyTag::Cprime, "T") => "t".into(),
        _ => component.to_lowercase(),
    }
}

fn circle_name(family: FamilyTag) -> &'static str {
    if family == FamilyTag::A {
        "k1"
    } else {
        "k"
    }
}

struct State {
    gens: Vec<GeneratorLabel>,
    rels: Vec<EmittedRelator>,
    abbreviations: usize,
}

impl State {
    fn fresh(&mut self, base: &str, component: Option<&str>, strand: Option<usize>) -> usize {
        let taken = |n: &str, gens: &[GeneratorLabel]| gens.iter().any(|g| g.name == n);
        let mut name = base.to_owned();
        let mut i = 2;
        while taken(&name, &self.gens) {
            name = format!("{base}_{i}");
            i += 1;
        }
        self.gens.push(GeneratorLabel { name, component: component.map(str::to_owned), strand });
        self.gens.len() - 1
    }

    fn emit(&mut self, label: String, word: Word) -> EmittedRelator {
        let mut label = label;
        if self.rels.iter().any(|r| r.label == label) {
            let mut i = 2;
            while self.rels.iter().any(|r| r.label == format!("{label}#{i}")) {
                i += 1;
            }
            label = format!("{label}#{i}");
        }
        let r = EmittedRelator { label, word };
        self.rels.push(r.clone());
        r
    }
}

fn kind_tag(ev: &Event) -> String {
    match &ev.kind {
        EventKind::Branch(BranchSide::Opening) => "branch-open".into(),
        EventKind::Branch(BranchSide::Closing) => "branch-close".into(),
        EventKind::Node => format!("node:{}", ev.components.join("*")),
        EventKind::Tangency => {
            let line = ev.components.iter().find(|c| c.as_str() != CONIC).cloned().unwrap_or_default();
            format!("tangency:{line}")
        }
        EventKind::MultiplePoint { .. } => "multiple".into(),
        EventKind::Composite(_) => "composite".into(),
    }
}

/// Non-ignored strand offsets of a multiple point.
fn active_offsets(ev: &Event) -> Vec<usize> {
    let ignored = match ev.kind {
        EventKind::MultiplePoint { ignored, .. } => ignored,
        _ => None,
    };
    (0..ev.strands.len()).filter(|i| Some(*i) != ignored).collect()
}

/// Relators of one local event over the entries at its strands.
pub fn emit_relations(ev: &Event, basis: &FiberBasis) -> Vec<(String, Word)> {
    let w = |off: usize| basis.entries[ev.strands[off]].word.clone();
    let tag = kind_tag(ev);
    match &ev.kind {
        EventKind::Branch(_) => vec![(tag, &w(0) * &w(1).inverse())],
        EventKind::Node => vec![(tag, Word::commutator(&w(0), &w(1)))],
        EventKind::Tangency => {
            let (a, b) = (w(0), w(1));
            let ab = &a * &b;
            let ba = &b * &a;
            vec![(tag, &ab.pow(2) * &ba.pow(-2))]
        }
        EventKind::MultiplePoint { .. } => {
            let act = active_offsets(ev);
            let product = Word::descending_product(act.iter().map(|&o| &basis.entries[ev.strands[o]].word));
            act.iter()
                .map(|&o| (format!("multiple:{}", ev.components[o]), Word::commutator(&product, &w(o))))
                .collect()
        }
        EventKind::Composite(subs) => subs.iter().flat_map(|s| emit_relations(s, basis)).collect(),
    }
}

/// Basis on the right of a local event.
pub fn transport_basis(ev: &Event, basis: &FiberBasis, half_twist: bool) -> Result<FiberBasis, SweepError> {
    let mut out = basis.clone();
    transport_in_place(ev, basis, &mut out, half_twist)?;
    Ok(out)
}

fn transport_in_place(ev: &Event, before: &FiberBasis, out: &mut FiberBasis, half_twist: bool) -> Result<(), SweepError> {
    let s = &ev.strands;
    match &ev.kind {
        EventKind::Branch(BranchSide::Opening) => {}
        EventKind::Branch(BranchSide::Closing) => {
            out.entries.remove(s[1]);
            out.entries.remove(s[0]);
        }
        EventKind::Node => out.entries.swap(s[0], s[1]),
        EventKind::MultiplePoint { k: 2, ignored: None } => out.entries.swap(s[0], s[1]),
        EventKind::Tangency => {
            let a = before.entries[s[0]].word.clone();
            let b = before.entries[s[1]].word.clone();
            out.entries[s[0]].word = Word::conjugate(&a, &b);
            out.entries[s[1]].word = Word::conjugate(&b, &a.inverse());
        }
        EventKind::MultiplePoint { .. } => {
            if !half_twist {
                return Err(SweepError::UnsupportedTransport(ev.label()));
            }
            let act = active_offsets(ev);
            let olds: Vec<&BasisEntry> = act.iter().map(|&o| &before.entries[s[o]]).collect();
            let mut prefix = Word::empty();
            let mut twisted = Vec::with_capacity(olds.len());
            for e in &olds {
                twisted.push(BasisEntry {
                    word: Word::conjugate(&e.word, &prefix.inverse()),
                    component: e.component.clone(),
                    branch: e.branch,
                });
                prefix = &e.word * &prefix;
            }
            twisted.reverse();
            let span: Vec<BasisEntry> = s.iter().map(|&p| before.entries[p].clone()).collect();
            let fixed: Vec<BasisEntry> =
                (0..s.len()).filter(|o| !act.contains(o)).map(|o| span[o].clone()).collect();
            // place by the right fiber's component order
            let mut pool_twisted = twisted.into_iter();
            let mut pool_fixed = fixed.into_iter();
            for &p in s {
                let st = &ev.right.strands[p];
                let is_fixed = st.component == CONIC && matches!(ev.kind, EventKind::MultiplePoint { ignored: Some(_), .. });
                out.entries[p] = if is_fixed {
                    pool_fixed.next().ok_or_else(|| SweepError::BasisMismatch(ev.label()))?
                } else {
                    pool_twisted.next().ok_or_else(|| SweepError::BasisMismatch(ev.label()))?
                };
            }
        }
        EventKind::Composite(subs) => {
            // subtract in descending order so that removals keep lower indices valid
            let mut order: Vec<&Event> = subs.iter().collect();
            order.sort_by_key(|e| std::cmp::Reverse(e.strands[0]));
            for sub in order {
                transport_in_place(sub, before, out, half_twist)?;
            }
        }
    }
    Ok(())
}

fn is_single_letter(w: &Word) -> bool {
    w.runs().len() == 1 && w.runs()[0].1 == 1
}

/// Replaces a conjugated circle entry entering a tangency by a fresh
/// generator with a defining relator.
fn abbreviate(ev: &Event, basis: &mut FiberBasis, st: &mut State) {
    for sub in ev.locals() {
        if sub.kind != EventKind::Tangency {
            continue;
        }
        for &p in &sub.strands {
            if basis.entries[p].component != CONIC || is_single_letter(&basis.entries[p].word) {
                continue;
            }
            st.abbreviations += 1;
            let base = format!("k{}", st.abbreviations + 1);
            let g = st.fresh(&base, Some(CONIC), Some(p));
            let def = basis.entries[p].word.clone();
            let name = st.gens[g].name.clone();
            st.emit(format!("define:{name}"), &Word::gen(g) * &def.inverse());
            basis.entries[p].word = Word::gen(g);
        }
    }
}

fn basis_text(b: &FiberBasis, names: &[&str]) -> Vec<String> {
    b.entries.iter().map(|e| word_to_text(&e.word, names)).collect()
}

/// Runs the sweep left to right.
pub fn run_sweep(arr: &Arrangement, opts: SweepOptions) -> Result<SweepResult, SweepError> {
    let events = compute_events(arr)?;
    let first = events.first().ok_or_else(|| SweepError::NoOpeningBranch("no events".into()))?;
    if first.kind != EventKind::Branch(BranchSide::Opening) {
        return Err(SweepError::NoOpeningBranch(first.label()));
    }
    let mut st = State { gens: Vec::new(), rels: Vec::new(), abbreviations: 0 };
    let mut entries = Vec::new();
    let cname = circle_name(arr.family);
    for (p, s) in first.right.strands.iter().enumerate() {
        let base = match s.branch {
            BranchTag::LowerCircle => cname.to_owned(),
            BranchTag::UpperCircle => format!("{cname}'"),
            BranchTag::Line => line_name(arr.family, &s.component),
        };
        let g = st.fresh(&base, Some(&s.component), Some(p));
        entries.push(BasisEntry { word: Word::gen(g), component: s.component.clone(), branch: s.branch });
    }
    let initial = FiberBasis { entries };
    let meridians = first_meridians(&initial, &st.gens);

    let mut basis: Result<FiberBasis, SweepError> = Ok(initial.clone());
    let mut identified = initial.clone();
    let mut records = Vec::new();
    let mut locals = Vec::new();
    let last = events.len() - 1;
    for (i, ev) in events.iter().enumerate() {
        let ignored = opts.ignore_last_fiber && i == last;
        let mut before = match &basis {
            Ok(b) => Some(b.clone()),
            Err(e) if !ignored => return Err(e.clone()),
            Err(_) => None,
        };
        let mut emitted = Vec::new();
        if let Some(b) = before.as_mut() {
            if !ignored {
                abbreviate(ev, b, &mut st);
                for (label, w) in emit_relations(ev, b) {
                    emitted.push(st.emit(label, w));
                }
            }
            for sub in ev.locals() {
                let gens = if matches!(sub.kind, EventKind::MultiplePoint { .. }) {
                    active_offsets(sub).iter().map(|&o| b.entries[sub.strands[o]].word.clone()).collect()
                } else {
                    sub.strands.iter().map(|&p| b.entries[p].word.clone()).collect()
                };
                locals.push(LocalGroup { label: sub.label(), components: sub.components.clone(), generators: gens });
            }
            if i == 0 {
                // identify the upper circle entry with the lower one
                let (lo, hi) = (ev.strands[0], ev.strands[1]);
                b.entries[hi].word = b.entries[lo].word.clone();
                identified = b.clone();
            }
        }
        let after = if i == last {
            None
        } else {
            match &before {
                Some(b) => {
                    let t = transport_basis(ev, b, opts.half_twist).and_then(|t| {
                        let table = events[i + 1].left.as_ref().expect("non-initial event has a left fiber");
                        if t.matches(table) {
                            Ok(t)
                        } else {
                            Err(SweepError::BasisMismatch(ev.label()))
                        }
                    });
                    basis = t.clone();
                    t.ok()
                }
                None => None,
            }
        };
        records.push(EventRecord {
            label: ev.label(),
            strands: ev.strands.clone(),
            components: ev.components.clone(),
            basis_before: before,
            emitted,
            basis_after: after,
            ignored,
            relator_count: st.rels.len(),
        });
    }
    let presentation = Presentation::new(st.gens.clone(), st.rels.iter().map(|r| r.word.clone()).collect())
        .expect("sweep generators are distinct");
    Ok(SweepResult {
        labels: st.rels.iter().map(|r| r.label.clone()).collect(),
        presentation,
        trace: SweepTrace { initial, records },
        local_groups: locals,
        identified,
        meridians,
    })
}

fn first_meridians(initial: &FiberBasis, gens: &[GeneratorLabel]) -> Vec<Meridian> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for e in &initial.entries {
        if seen.insert(e.component.clone(), ()).is_none() {
            out.push(Meridian { component: e.component.clone(), word: e.word.clone() });
        }
    }
    debug_assert!(out.iter().all(|m| m.word.max_gen().is_some_and(|g| g < gens.len())));
    out
}

/// Appends the descending product of the identified initial basis.
pub fn add_projective_relation(p: &Presentation, labels: &[String], identified: &FiberBasis) -> (Presentation, Vec<String>) {
    let mut q = p.clone();
    q.add_relator(identified.descending_product()).expect("basis words use existing generators");
    let mut l = labels.to_vec();
    l.push("projective".into());
    (q, l)
}

impl SweepResult {
    /// Sweep relators plus the projective relator, as a simplifier.
    pub fn projective(&self) -> Simplifier {
        let (p, l) = add_projective_relation(&self.presentation, &self.labels, &self.identified);
        Simplifier::new(p, l, self.meridians.clone())
    }

    /// Projective presentation with the second circle generator eliminated
    /// through the opening branch relator.
    pub fn merged(&self) -> Result<Simplifier, SweepError> {
        let mut s = self.projective();
        merge_circle_generators(&mut s)?;
        Ok(s)
    }

    pub fn trace_json(&self) -> serde_json::Value {
        let names = self.presentation.names();
        let basis = |b: &Option<FiberBasis>| b.as_ref().map(|b| basis_text(b, &names));
        let records: Vec<serde_json::Value> = self
            .trace
            .records
            .iter()
            .map(|r| {
                let rels_so_far: Vec<String> = self.presentation.relators()[..r.relator_count]
                    .iter()
                    .map(|w| word_to_text(w, &names))
                    .collect();
                serde_json::json!({
                    "event": r.label,
                    "strands": r.strands,
                    "components": r.components,
                    "ignored": r.ignored,
                    "basis_before": basis(&r.basis_before),
                    "emitted": r.emitted.iter().map(|e| serde_json::json!({"label": e.label, "word": word_to_text(&e.word, &names)})).collect::<Vec<_>>(),
                    "basis_after": basis(&r.basis_after),
                    "relators": rels_so_far,
                })
            })
            .collect();
        serde_json::json!({
            "generators": self.presentation.generators().iter().map(|g| serde_json::json!({"name": g.name, "component": g.component})).collect::<Vec<_>>(),
            "initial_basis": basis_text(&self.trace.initial, &names),
            "events": records,
        })
    }
}

/// Eliminates the upper circle generator by the opening branch relator.
pub fn merge_circle_generators(s: &mut Simplifier) -> Result<(), SweepError> {
    let Some(upper) = s
        .presentation()
        .generators()
        .iter()
        .find(|g| g.component.as_deref() == Some(CONIC) && g.name.ends_with('\''))
        .map(|g| g.name.clone())
    else {
        return Ok(());
    };
    s.apply(&crate::algebra::Step::Eliminate { gen: upper, by: crate::algebra::RelRef::label("branch-open") })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{normalize_presentation, presentation_to_text};
    use crate::geometry::build_family;

    fn sweep(f: FamilyTag, n: usize) -> SweepResult {
        run_sweep(&build_family(f, n, None).unwrap(), SweepOptions::default()).unwrap()
    }

    fn text(r: &SweepResult) -> Vec<String> {
        let names = r.presentation.names();
        r.presentation.relators().iter().map(|w| word_to_text(w, &names)).collect()
    }

    #[test]
    fn initial_bases() {
        let names = |r: &SweepResult| basis_text(&r.trace.initial, &r.presentation.names());
        assert_eq!(names(&sweep(FamilyTag::A, 2)), ["k1", "k1'", "t1", "t2"]);
        assert_eq!(names(&sweep(FamilyTag::B, 1)), ["t", "k", "k'", "l1", "s"]);
        assert_eq!(names(&sweep(FamilyTag::C, 1)), ["k", "k'", "l1", "t"]);
    }

    #[test]
    fn a1_relators() {
        let r = sweep(FamilyTag::A, 1);
        assert_eq!(text(&r), ["k1*k1'^-1", "k1*t1*k1*t1*k1^-1*t1^-1*k1^-1*t1^-1"]);
        assert_eq!(r.labels, ["branch-open", "tangency:T1"]);
        assert!(r.trace.records.last().unwrap().ignored);
    }

    #[test]
    fn a_tangency_transport() {
        let r = sweep(FamilyTag::A, 2);
        let names = r.presentation.names();
        let after = r.trace.records[1].basis_after.as_ref().unwrap();
        assert_eq!(basis_text(after, &names), ["k1", "t1*k1*t1^-1", "k1^-1*t1*k1", "t2"]);
    }

    #[test]
    fn b1_relators() {
        let r = sweep(FamilyTag::B, 1);
        assert_eq!(
            r.labels,
            ["branch-open", "node:Q*L1", "tangency:T1", "tangency:T2", "node:L1*Q", "branch-close"]
        );
        let t = text(&r);
        assert_eq!(t[5], "t^-1*k*t*s*k^-1*s^-1");
        assert_eq!(t[4], "l1*s*k*s^-1*l1^-1*s*k^-1*s^-1");
    }

    #[test]
    fn c1_relators_and_trivial_close() {
        let r = sweep(FamilyTag::C, 1);
        assert_eq!(r.labels, ["branch-open", "node:Q*L1", "multiple:L1", "multiple:T"]);
        let full = run_sweep(
            &build_family(FamilyTag::C, 2, None).unwrap(),
            SweepOptions { ignore_last_fiber: false, half_twist: true },
        )
        .unwrap();
        let close = full.trace.records.last().unwrap();
        assert_eq!(close.emitted.len(), 1);
        assert!(close.emitted[0].word.is_empty());
    }

    #[test]
    fn missing_half_twist_is_reported() {
        let arr = build_family(FamilyTag::C, 2, None).unwrap();
        let err = run_sweep(&arr, SweepOptions { ignore_last_fiber: false, half_twist: false }).unwrap_err();
        assert!(matches!(err, SweepError::UnsupportedTransport(_)));
    }

    #[test]
    fn merged_a2() {
        let r = sweep(FamilyTag::A, 2);
        let s = r.merged().unwrap();
        let p = normalize_presentation(&s.finish());
        assert_eq!(p.names(), ["k1", "t1", "t2", "k2"]);
        assert_eq!(p.relators().len(), 5, "{}", presentation_to_text(&p));
    }

    #[test]
    fn deterministic() {
        let a = sweep(FamilyTag::B, 3);
        let b = sweep(FamilyTag::B, 3);
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.presentation, b.presentation);
    }
}
