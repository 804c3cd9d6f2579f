//! Surjections onto `Z/2 * Z/3` given by explicit generator images.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::algebra::{word_to_text, FreeProduct, FreeProductElement, Gen, Presentation, Word};

use super::groups::FiniteGroup;

/// Longest word searched for preimages of the factor generators.
pub const PREIMAGE_SEARCH_LENGTH: usize = 6;

/// Words in the presentation's generators mapping to `a` and to `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCertificate {
    pub maps_to_a: String,
    pub maps_to_b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub accepted: bool,
    /// Relators whose image is not the identity, as text.
    pub surviving_relators: Vec<String>,
    pub certificate: Option<WitnessCertificate>,
}

/// Images by generator name; unnamed generators go to the identity.
pub fn modular_witness(p: &Presentation, images: &[(&str, FreeProductElement)]) -> Vec<FreeProductElement> {
    let mut out = vec![FreeProductElement::identity(); p.gen_count()];
    for (name, e) in images {
        if let Some(g) = p.index_of(name) {
            out[g] = e.clone();
        }
    }
    out
}

fn search_preimages(fp: &FreeProduct, assignment: &[FreeProductElement]) -> (Option<Word>, Option<Word>) {
    let steps: Vec<(Gen, bool, FreeProductElement)> = assignment
        .iter()
        .enumerate()
        .flat_map(|(g, e)| [(g, true, e.clone()), (g, false, fp.inverse(e))])
        .collect();
    let (a, b) = (fp.a(), fp.b());
    let mut seen: HashMap<FreeProductElement, Vec<(Gen, bool)>> = HashMap::new();
    let mut queue = VecDeque::from([(FreeProductElement::identity(), Vec::new())]);
    seen.insert(FreeProductElement::identity(), Vec::new());
    while let Some((x, w)) = queue.pop_front() {
        if seen.contains_key(&a) && seen.contains_key(&b) {
            break;
        }
        if w.len() == PREIMAGE_SEARCH_LENGTH {
            continue;
        }
        for (g, pos, img) in &steps {
            let y = fp.mul(&x, img);
            if !seen.contains_key(&y) {
                let mut v = w.clone();
                v.push((*g, *pos));
                seen.insert(y.clone(), v.clone());
                queue.push_back((y, v));
            }
        }
    }
    let word = |e: &FreeProductElement| seen.get(e).map(|l| Word::from_letters(l.iter().copied()));
    (word(&a), word(&b))
}

/// Accepts iff every relator dies in `Z/2 * Z/3` and both factor generators
/// have preimages of length at most [`PREIMAGE_SEARCH_LENGTH`].
pub fn verify_big_witness(p: &Presentation, assignment: &[FreeProductElement]) -> WitnessReport {
    assert_eq!(assignment.len(), p.gen_count(), "one image per generator");
    let fp = FreeProduct::default();
    let names = p.names();
    let surviving_relators: Vec<String> = p
        .relators()
        .iter()
        .filter(|r| !fp.reduce(r, assignment).is_identity())
        .map(|r| word_to_text(r, &names))
        .collect();
    let certificate = match search_preimages(&fp, assignment) {
        (Some(wa), Some(wb)) => {
            Some(WitnessCertificate { maps_to_a: word_to_text(&wa, &names), maps_to_b: word_to_text(&wb, &names) })
        }
        _ => None,
    };
    WitnessReport { accepted: surviving_relators.is_empty() && certificate.is_some(), surviving_relators, certificate }
}

/// Pushes an assignment through `Z/2 * Z/3 -> S3` (a to a transposition, b
/// to a 3-cycle) and reports whether the result is a homomorphism.
pub fn s3_composite_is_hom(p: &Presentation, assignment: &[FreeProductElement]) -> bool {
    use crate::algebra::Factor;
    let s3 = FiniteGroup::from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]);
    // closure lists the identity first, then the generators in order
    let (swap, cycle) = (1u16, 2u16);
    let images: Vec<u16> = assignment
        .iter()
        .map(|e| {
            e.syllables().iter().fold(0u16, |acc, &(f, k)| {
                let base = if f == Factor::First { swap } else { cycle };
                (0..k).fold(acc, |x, _| s3.mul(x, base))
            })
        })
        .collect();
    p.relators().iter().all(|r| s3.eval(r, &images) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_presentation;
    use crate::sweep::{tangent_family, two_tangents, ChainVariant};

    fn modular() -> (FreeProduct, FreeProductElement, FreeProductElement) {
        let fp = FreeProduct::default();
        (fp, fp.a(), fp.b())
    }

    #[test]
    fn second_tangent_group_maps_onto_modular_group() {
        let (fp, a, b) = modular();
        let p = two_tangents().presentation;
        let h = modular_witness(&p, &[("t", b.clone()), ("k", fp.mul(&fp.inverse(&b), &a))]);
        let r = verify_big_witness(&p, &h);
        assert!(r.accepted, "{r:?}");
        assert!(s3_composite_is_hom(&p, &h));
    }

    #[test]
    fn trivial_assignment_is_not_onto() {
        let p = two_tangents().presentation;
        let h = vec![FreeProductElement::identity(); 2];
        let r = verify_big_witness(&p, &h);
        assert!(r.surviving_relators.is_empty());
        assert!(!r.accepted);
    }

    #[test]
    fn surviving_relator_is_reported() {
        let (_, a, b) = modular();
        let p = parse_presentation("< x, y | x*y*x^-1*y^-1 >").unwrap();
        let r = verify_big_witness(&p, &[a, b]);
        assert_eq!(r.surviving_relators.len(), 1);
        assert!(!r.accepted);
    }

    #[test]
    fn three_tangents_through_a_quotient() {
        // kill t1: k2 = k1, k3 = t2 k1 t2^-1, t3 = k1^-2 t2^-1
        let (fp, a, b) = modular();
        let k = fp.mul(&fp.inverse(&b), &a);
        let t = b.clone();
        let k3 = fp.mul(&fp.mul(&t, &k), &fp.inverse(&t));
        let t3 = fp.inverse(&fp.mul(&t, &fp.pow(&k, 2)));
        let p = tangent_family(3, ChainVariant::Forward).presentation;
        let h = modular_witness(&p, &[("k1", k.clone()), ("k2", k), ("k3", k3), ("t2", t), ("t3", t3)]);
        let r = verify_big_witness(&p, &h);
        assert!(r.accepted, "{r:?}");
        assert!(s3_composite_is_hom(&p, &h));
    }
}
