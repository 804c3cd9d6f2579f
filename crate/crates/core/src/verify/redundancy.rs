//! Explicit derivation showing that the circle closing relator of the
//! tangent-line family follows from the chain and the projective relator.

use serde::Serialize;

use crate::algebra::{solve_for, word_to_text, Presentation, Word};
use crate::geometry::{build_family, FamilyTag};
use crate::sweep::{run_sweep, SweepOptions};

use super::invariants::{invariants_report, Depth};
use super::VerifyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RewriteKind {
    /// Replace every occurrence of `gen` by `by`.
    Substitute { gen: usize, by: Word },
    /// Replace occurrences of `pattern` (and its inverse) by `replacement`.
    Subword { pattern: Word, replacement: Word },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedundancyStep {
    pub description: String,
    /// Relator label that justifies the rewrite.
    pub relator: String,
    pub rewrite: RewriteKind,
    pub result: Word,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedundancyReport {
    pub target: String,
    pub steps: Vec<RedundancyStep>,
    /// `None` when the invariant comparison was not requested.
    pub invariants_agree: Option<bool>,
}

impl RedundancyReport {
    pub fn passed(&self) -> bool {
        self.steps.last().is_some_and(|s| s.result.is_empty()) && self.invariants_agree != Some(false)
    }
}

fn apply(w: &Word, r: &RewriteKind) -> Word {
    match r {
        RewriteKind::Substitute { gen, by } => w.substitute(|g| if g == *gen { by.clone() } else { Word::gen(g) }),
        RewriteKind::Subword { pattern, replacement } => {
            let (w, _) = w.replace_subword(pattern, replacement);
            w.replace_subword(&pattern.inverse(), &replacement.inverse()).0
        }
    }
}

/// Word whose triviality justifies a rewrite.
fn justification(r: &RewriteKind) -> Word {
    match r {
        RewriteKind::Substitute { gen, by } => &Word::gen(*gen) * &by.inverse(),
        RewriteKind::Subword { pattern, replacement } => pattern * &replacement.inverse(),
    }
}

/// Replays a derivation from `target`: each rewrite must be justified by a
/// cyclic conjugate of the named relator or its inverse, each recorded word
/// must be the free reduction of the rewrite, and the last word must be empty.
pub fn replay_redundancy(target: &Word, steps: &[RedundancyStep], p: &Presentation, labels: &[String]) -> bool {
    let mut w = target.clone();
    for s in steps {
        let Some(i) = labels.iter().position(|l| *l == s.relator) else {
            return false;
        };
        let rel = p.relators()[i].canonical_cyclic();
        let j = justification(&s.rewrite).canonical_cyclic();
        if j != rel {
            return false;
        }
        w = apply(&w, &s.rewrite);
        if w != s.result {
            return false;
        }
    }
    w.is_empty()
}

/// Derives the `branch-close` relator from the `define:` chain and the
/// `projective` relator; optionally compares invariants of `p` with and
/// without it.
pub fn verify_kappa_redundancy(
    p: &Presentation,
    labels: &[String],
    depth: Option<&Depth>,
) -> Result<RedundancyReport, VerifyError> {
    let names = p.names();
    let find = |l: &str| labels.iter().position(|x| x == l);
    let close = find("branch-close").ok_or_else(|| VerifyError::DerivationFailed { stuck: "no branch-close relator".into() })?;
    let target = p.relators()[close].clone();
    let mut w = target.clone();
    let mut steps = Vec::new();
    let push = |steps: &mut Vec<RedundancyStep>, w: &mut Word, description: String, relator: &str, rewrite: RewriteKind| {
        *w = apply(w, &rewrite);
        steps.push(RedundancyStep { description, relator: relator.to_owned(), rewrite, result: w.clone(), text: word_to_text(w, &names) });
    };
    // expand the chain from the top down
    let mut defs: Vec<(usize, usize)> = labels
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.strip_prefix("define:").and_then(|g| p.index_of(g)).map(|g| (g, i)))
        .collect();
    defs.sort_by_key(|&(g, _)| std::cmp::Reverse(g));
    for (g, i) in defs {
        if !w.contains_gen(g) {
            continue;
        }
        let by = solve_for(&p.relators()[i], g).ok_or_else(|| VerifyError::DerivationFailed { stuck: word_to_text(&w, &names) })?;
        let desc = format!("expand {} = {}", names[g], word_to_text(&by, &names));
        push(&mut steps, &mut w, desc, &labels[i], RewriteKind::Substitute { gen: g, by });
    }
    // the projective relator reads (line product) * k^2
    let proj = find("projective").ok_or_else(|| VerifyError::DerivationFailed { stuck: word_to_text(&w, &names) })?;
    let r = &p.relators()[proj];
    let circle = p.generators().iter().position(|g| g.component.as_deref() == Some(crate::geometry::CONIC));
    let split = r.runs().iter().position(|&(g, _)| Some(g) == circle).unwrap_or(r.runs().len());
    let pattern = Word::from_runs(r.runs()[..split].iter().copied());
    let replacement = Word::from_runs(r.runs()[split..].iter().copied()).inverse();
    if !pattern.is_empty() {
        let desc = format!("replace {} by {}", word_to_text(&pattern, &names), word_to_text(&replacement, &names));
        push(&mut steps, &mut w, desc, "projective", RewriteKind::Subword { pattern, replacement });
    }
    if !w.is_empty() {
        return Err(VerifyError::DerivationFailed { stuck: word_to_text(&w, &names) });
    }
    let invariants_agree = match depth {
        Some(d) => {
            let mut without = p.clone();
            without.remove_relator(close);
            Some(invariants_report(p, d)? == invariants_report(&without, d)?)
        }
        None => None,
    };
    Ok(RedundancyReport { target: word_to_text(&target, &names), steps, invariants_agree })
}

/// Sweep of the tangent-line family with the closing fiber kept, plus the
/// projective relator.
pub fn closing_presentation(n: usize) -> Result<(Presentation, Vec<String>), VerifyError> {
    let arr = build_family(FamilyTag::A, n, None)?;
    let r = run_sweep(&arr, SweepOptions { ignore_last_fiber: false, half_twist: false })?;
    let s = r.projective();
    Ok((s.presentation().clone(), s.labels().to_vec()))
}
