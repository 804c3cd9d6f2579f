//! Elimination schedules that turn raw sweep output into the closed forms.

use super::{merge_circle_generators, Reference, SweepError, SweepResult};
use crate::algebra::{word_to_text, RelRef, Simplifier, Step};
use crate::geometry::FamilyTag;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplifyLevel {
    /// Sweep relators plus the projective relator.
    None,
    /// The fixed per-family schedule.
    Scripted,
    /// Greedy length-reducing eliminations.
    Full,
}

fn elim(gen: &str, by: &str) -> Step {
    Step::Eliminate { gen: gen.into(), by: RelRef::label(by) }
}

fn drop(label: &str) -> Step {
    Step::DropConsequence { relator: RelRef::label(label) }
}

fn rename(from: &str, to: &str) -> Step {
    Step::Rename { from: from.into(), to: to.into() }
}

/// Schedule for a merged sweep presentation: eliminations first, then every
/// relator outside the kept set is dropped as a consequence, then renames.
pub fn scripted_schedule(family: FamilyTag, n: usize, labels: &[String]) -> Result<Vec<Step>, SweepError> {
    let mut pre = Vec::new();
    let mut post = Vec::new();
    let node_in = |l: &str, upto: usize| (1..=upto).any(|i| l == format!("node:Q*L{i}"));
    let keep: Box<dyn Fn(&str) -> bool> = match family {
        FamilyTag::A => match n {
            1 => {
                pre.push(elim("t1", "projective"));
                post.push(rename("k1", "k"));
                Box::new(|l: &str| l == "tangency:T1")
            }
            2 => {
                pre.extend([elim("k2", "define:k2"), elim("t2", "projective")]);
                post.extend([rename("k1", "k"), rename("t1", "t")]);
                Box::new(|l: &str| l == "tangency:T1")
            }
            3 => {
                pre.extend([elim("k2", "define:k2"), elim("k3", "define:k3"), elim("t2", "projective")]);
                post.extend([
                    Step::Introduce { name: "t".into(), definition: "k1^-1*t1*k1".into() },
                    elim("t1", "def:t"),
                    rename("k1", "k"),
                    rename("t3", "s"),
                ]);
                Box::new(|l: &str| matches!(l, "tangency:T1" | "tangency:T3" | "node:T1*T3"))
            }
            _ => Box::new(|l: &str| l != "branch-close"),
        },
        FamilyTag::B => {
            pre.extend([
                Step::Rewrite { from: "s*k*s^-1".into(), to: "t^-1*k*t".into(), by: RelRef::label("branch-close") },
                elim("s", "projective"),
            ]);
            Box::new(move |l: &str| {
                l == "tangency:T1" || node_in(l, n) || (1..=n).any(|i| l == format!("node:L{i}*Q"))
            })
        }
        FamilyTag::Bprime => {
            pre.push(elim("s", "projective"));
            Box::new(move |l: &str| node_in(l, n))
        }
        FamilyTag::C => {
            pre.push(elim("t", "projective"));
            Box::new(move |l: &str| node_in(l, n))
        }
        FamilyTag::Bprimeprime | FamilyTag::Cprime if n >= 1 => {
            pre.push(elim(&format!("l{n}"), "projective"));
            Box::new(move |l: &str| node_in(l, n - 1))
        }
        _ => return Err(SweepError::NoScript(format!("{} with n = {n}", family.as_str()))),
    };
    let eliminated_by: Vec<&str> = pre
        .iter()
        .chain(post.iter())
        .filter_map(|s| match s {
            Step::Eliminate { by: RelRef::Label(l), .. } => Some(l.as_str()),
            _ => None,
        })
        .collect();
    let mut steps = pre.clone();
    for l in labels {
        if !keep(l) && !eliminated_by.contains(&l.as_str()) && l != "branch-open" {
            steps.push(drop(l));
        }
    }
    steps.extend(post);
    Ok(steps)
}

/// Applies a simplification level to sweep output.
pub fn simplify_sweep(family: FamilyTag, n: usize, result: &SweepResult, level: SimplifyLevel) -> Result<Simplifier, SweepError> {
    match level {
        SimplifyLevel::None => Ok(result.projective()),
        SimplifyLevel::Scripted => {
            let mut s = result.projective();
            merge_circle_generators(&mut s)?;
            let steps = scripted_schedule(family, n, s.labels())?;
            s.run(&steps)?;
            Ok(s)
        }
        SimplifyLevel::Full => {
            let mut s = result.projective();
            merge_circle_generators(&mut s)?;
            s.greedy()?;
            Ok(s)
        }
    }
}

/// Sets the meridian of `component` to 1 in a reference presentation and
/// eliminates `gen` with it; the relators that still mention the old
/// generator's image are dropped as consequences when `drop_labels` says so.
pub fn drop_meridian(reference: &Reference, component: &str, gen: &str, drop_labels: &[&str]) -> Result<Simplifier, SweepError> {
    let mut s = Simplifier::unlabeled(reference.presentation.clone());
    let names = reference.presentation.names();
    let m = reference
        .meridians
        .iter()
        .find(|m| m.component == component)
        .ok_or_else(|| SweepError::NoScript(format!("no meridian for {component}")))?;
    let mut steps = vec![
        Step::AddRelator { label: format!("trivial:{component}"), word: word_to_text(&m.word, &names) },
        elim(gen, &format!("trivial:{component}")),
    ];
    steps.extend(drop_labels.iter().map(|l| drop(l)));
    s.run(&steps)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::algebra::{normalize_presentation, presentation_to_text, same_by_names};
    use crate::geometry::build_family;

    fn scripted(f: FamilyTag, n: usize) -> Simplifier {
        let r = run_sweep(&build_family(f, n, None).unwrap(), SweepOptions::default()).unwrap();
        simplify_sweep(f, n, &r, SimplifyLevel::Scripted).unwrap()
    }

    #[test]
    fn two_tangents_script() {
        let s = scripted(FamilyTag::A, 2);
        let p = s.finish();
        assert!(same_by_names(&p, &two_tangents().presentation), "{}", presentation_to_text(&p));
        let t2 = s.meridian_text().into_iter().find(|(c, _)| c == "T2").unwrap();
        assert_eq!(t2.1, "k^-2*t^-1");
    }

    #[test]
    fn three_tangents_script() {
        let s = scripted(FamilyTag::A, 3);
        let p = normalize_presentation(&s.finish());
        assert!(same_by_names(&p, &three_tangents().presentation), "{}", presentation_to_text(&p));
    }

    #[test]
    fn pencil_scripts() {
        for n in 0..=3 {
            let p = scripted(FamilyTag::B, n).finish();
            assert!(same_by_names(&p, &outer_pencil(n).presentation), "n={n}: {}", presentation_to_text(&p));
        }
        for n in 1..=3 {
            let p = scripted(FamilyTag::C, n).finish();
            assert!(same_by_names(&p, &circle_pencil(n).presentation), "{}", presentation_to_text(&p));
        }
    }

    #[test]
    fn removing_a_meridian() {
        let s = drop_meridian(&circle_pencil(3), "T", "l3", &["r2"]).unwrap();
        assert!(same_by_names(&s.finish(), &circle_pencil(2).presentation));
        assert!(s.log()[2].consequence.as_ref().unwrap().is_confirmed());
    }
}
