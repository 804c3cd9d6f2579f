//! Per-event checks on sweep traces: transported bases are conjugate
//! permutations of the old ones, relators stay local, and the product of the
//! affected entries is preserved in the local group.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{find_consequence, Presentation, SearchLimits, Word};
use crate::geometry::{BranchSide, Event, EventKind, CONIC};
use crate::sweep::{emit_relations, transport_basis, BasisEntry, EventRecord, FiberBasis, SweepError, SweepResult};

use super::groups::{all_homs, FiniteGroup};

/// Largest local generator count for the exhaustive S3/S4 comparison.
const HOM_CHECK_MAX_GENS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportViolation {
    pub event: String,
    pub check: String,
    pub detail: String,
}

fn violation(ev: &str, check: &str, detail: String) -> TransportViolation {
    TransportViolation { event: ev.to_owned(), check: check.to_owned(), detail }
}

fn gens_of(w: &Word) -> BTreeSet<usize> {
    w.runs().iter().map(|&(g, _)| g).collect()
}

fn classes(b: &FiberBasis) -> Vec<Word> {
    let mut v: Vec<Word> = b.entries.iter().map(|e| e.word.canonical_cyclic()).collect();
    v.sort();
    v
}

fn is_closing(ev: &Event) -> bool {
    ev.locals().iter().any(|l| l.kind == EventKind::Branch(BranchSide::Closing))
}

/// Checks on the recorded words of one event. The opening branch records
/// its basis after the circle entries are identified, so its emitted
/// relator is checked against `initial` instead.
pub fn check_event_invariants(
    ev: &Event,
    rec: &EventRecord,
    initial: &FiberBasis,
    half_twist: bool,
) -> Vec<TransportViolation> {
    let mut out = Vec::new();
    let Some(recorded) = &rec.basis_before else {
        return out;
    };
    let opening = ev.left.is_none();
    let before = if opening { initial } else { recorded };
    let strand_gens: BTreeSet<usize> =
        ev.locals().iter().flat_map(|l| l.strands.iter()).flat_map(|&p| gens_of(&before.entries[p].word)).collect();
    for r in rec.emitted.iter().filter(|r| !r.label.starts_with("define:")) {
        if !gens_of(&r.word).is_subset(&strand_gens) {
            out.push(violation(&rec.label, "locality", format!("{} uses generators off the event's strands", r.label)));
        }
    }
    if let Some(after) = rec.basis_after.as_ref().filter(|_| !opening) {
        let (b, a) = (classes(before), classes(after));
        let ok = if is_closing(ev) {
            let mut rest = b.clone();
            a.iter().all(|w| rest.iter().position(|x| x == w).map(|i| rest.remove(i)).is_some())
        } else {
            a == b
        };
        if !ok {
            out.push(violation(&rec.label, "conjugacy", "entries after are not conjugates of a permutation of entries before".into()));
        }
    }
    if let Some(left) = &ev.left {
        let abstract_basis = FiberBasis {
            entries: left
                .strands
                .iter()
                .enumerate()
                .map(|(p, s)| BasisEntry { word: Word::gen(p), component: s.component.clone(), branch: s.branch })
                .collect(),
        };
        for local in ev.locals() {
            out.extend(check_local_product(local, &abstract_basis, half_twist, &rec.label));
        }
    }
    out
}

/// Product of the entries at a local event's strands, before and after, in
/// the group presented by the strand generators and the emitted relators.
fn check_local_product(local: &Event, basis: &FiberBasis, half_twist: bool, label: &str) -> Vec<TransportViolation> {
    if !matches!(local.kind, EventKind::Node | EventKind::Tangency | EventKind::MultiplePoint { .. }) {
        return vec![];
    }
    let after = match transport_basis(local, basis, half_twist) {
        Ok(a) => a,
        Err(SweepError::UnsupportedTransport(_)) => return vec![],
        Err(e) => return vec![violation(label, "transport", e.to_string())],
    };
    // a circle strand left out of a multiple point only changes position
    let (active_before, active_after): (Vec<usize>, Vec<usize>) = match local.kind {
        EventKind::MultiplePoint { ignored: Some(o), .. } => (
            local.strands.iter().enumerate().filter(|&(i, _)| i != o).map(|(_, &p)| p).collect(),
            local.strands.iter().copied().filter(|&p| local.right.strands[p].component != CONIC).collect(),
        ),
        _ => (local.strands.clone(), local.strands.clone()),
    };
    let prod = |b: &FiberBasis, at: &[usize]| Word::descending_product(at.iter().map(|&p| &b.entries[p].word));
    let diff = &prod(basis, &active_before) * &prod(&after, &active_after).inverse();
    if diff.is_empty() {
        return vec![];
    }
    let rels: Vec<Word> = emit_relations(local, basis).into_iter().map(|(_, w)| w).collect();
    let mut out = Vec::new();
    let local_gens: Vec<usize> = local.strands.clone();
    if local_gens.iter().any(|&g| diff.exponent_sum(g) != 0) {
        out.push(violation(label, "abelian-product", "exponent sums of the products differ".into()));
    }
    if !find_consequence(&diff, &rels, SearchLimits::default()).is_confirmed() {
        out.push(violation(label, "product", "product change not derived from the local relators".into()));
    }
    if local_gens.len() <= HOM_CHECK_MAX_GENS {
        let renumber = |w: &Word| w.map_gens(|g| local_gens.iter().position(|&x| x == g).expect("local generator"));
        let names: Vec<String> = (0..local_gens.len()).map(|i| format!("x{i}")).collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let p = Presentation::with_names(&name_refs, rels.iter().map(renumber).collect()).expect("distinct names");
        let d = renumber(&diff);
        for g in [FiniteGroup::symmetric(3), FiniteGroup::symmetric(4)] {
            if all_homs(&p, &g).iter().any(|h| g.eval(&d, h) != 0) {
                out.push(violation(label, "finite-product", format!("products differ under a map to {}", g.name)));
            }
        }
    }
    out
}

/// All per-event checks for a sweep and its event list.
pub fn check_trace_invariants(events: &[Event], result: &SweepResult, half_twist: bool) -> Vec<TransportViolation> {
    events
        .iter()
        .zip(&result.trace.records)
        .flat_map(|(ev, rec)| check_event_invariants(ev, rec, &result.trace.initial, half_twist))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_family, compute_events, FamilyTag};
    use crate::sweep::{run_sweep, SweepOptions};

    #[test]
    fn families_satisfy_transport_invariants() {
        for (f, n) in [(FamilyTag::A, 3), (FamilyTag::B, 2), (FamilyTag::C, 2), (FamilyTag::A, 5)] {
            let arr = build_family(f, n, None).unwrap();
            let events = compute_events(&arr).unwrap();
            let opts = SweepOptions { ignore_last_fiber: false, half_twist: true };
            let r = run_sweep(&arr, opts).unwrap();
            let v = check_trace_invariants(&events, &r, true);
            assert!(v.is_empty(), "{f:?} {n}: {v:?}");
        }
    }

    #[test]
    fn tampered_record_is_caught() {
        let arr = build_family(FamilyTag::A, 2, None).unwrap();
        let events = compute_events(&arr).unwrap();
        let mut r = run_sweep(&arr, SweepOptions::default()).unwrap();
        let rec = r.trace.records.iter_mut().find(|r| r.label.starts_with("Tangency")).unwrap();
        let after = rec.basis_after.as_mut().unwrap();
        after.entries[0].word = &after.entries[0].word * &after.entries[0].word;
        assert!(!check_trace_invariants(&events, &r, false).is_empty());
    }
}
