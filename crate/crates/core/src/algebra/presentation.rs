use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::word::{Gen, Word};
use super::AlgebraError;

/// Name and meridian metadata of a generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorLabel {
    pub name: String,
    /// Arrangement component this generator is a meridian of, if any.
    pub component: Option<String>,
    /// Fiber strand the generator was created on, for sweep output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strand: Option<usize>,
}

impl GeneratorLabel {
    pub fn new(name: impl Into<String>, component: Option<&str>) -> Self {
        GeneratorLabel {
            name: name.into(),
            component: component.map(str::to_owned),
            strand: None,
        }
    }

    pub fn plain(name: impl Into<String>) -> Self {
        GeneratorLabel::new(name, None)
    }
}

/// A finite presentation `< generators | relators >`.
///
/// Relators are kept freely and cyclically reduced. Empty relators are
/// allowed (they arise from substitutions) and are dropped by
/// [`normalize_presentation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: Vec<GeneratorLabel>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<GeneratorLabel>, relators: Vec<Word>) -> Result<Self, AlgebraError> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(AlgebraError::DuplicateName(g.name.clone()));
            }
        }
        let n = generators.len();
        for (i, r) in relators.iter().enumerate() {
            if let Some(m) = r.max_gen() {
                if m >= n {
                    return Err(AlgebraError::GeneratorOutOfRange { relator: i, gen: m, count: n });
                }
            }
        }
        Ok(Presentation {
            generators,
            relators: relators.iter().map(Word::cyclic_core).collect(),
        })
    }

    /// Presentation whose generators carry only names.
    pub fn with_names(names: &[&str], relators: Vec<Word>) -> Result<Self, AlgebraError> {
        Presentation::new(names.iter().map(|n| GeneratorLabel::plain(*n)).collect(), relators)
    }

    pub fn generators(&self) -> &[GeneratorLabel] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, name: &str) -> Option<Gen> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.generators[g].name
    }

    /// Total relator length.
    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn add_relator(&mut self, w: Word) -> Result<(), AlgebraError> {
        if let Some(m) = w.max_gen() {
            if m >= self.generators.len() {
                return Err(AlgebraError::GeneratorOutOfRange {
                    relator: self.relators.len(),
                    gen: m,
                    count: self.generators.len(),
                });
            }
        }
        self.relators.push(w.cyclic_core());
        Ok(())
    }

    pub fn remove_relator(&mut self, idx: usize) -> Word {
        self.relators.remove(idx)
    }

    pub fn set_label(&mut self, g: Gen, label: GeneratorLabel) -> Result<(), AlgebraError> {
        if self.generators.iter().enumerate().any(|(i, l)| i != g && l.name == label.name) {
            return Err(AlgebraError::DuplicateName(label.name));
        }
        self.generators[g] = label;
        Ok(())
    }

    pub fn rename(&mut self, from: &str, to: &str) -> Result<(), AlgebraError> {
        let g = self.index_of(from).ok_or_else(|| AlgebraError::UnknownGenerator(from.to_owned()))?;
        let mut label = self.generators[g].clone();
        label.name = to.to_owned();
        self.set_label(g, label)
    }

    /// Index of the first relator equal to `w` up to rotation and inversion.
    pub fn find_relator(&self, w: &Word) -> Option<usize> {
        let key = w.canonical_cyclic();
        self.relators.iter().position(|r| r.canonical_cyclic() == key)
    }

    /// Re-expresses the presentation over the generator order of `names`,
    /// which must be a permutation of this presentation's names.
    pub fn reorder_like(&self, names: &[&str]) -> Result<Presentation, AlgebraError> {
        if names.len() != self.generators.len() {
            return Err(AlgebraError::GeneratorMismatch);
        }
        let mut map = vec![usize::MAX; self.generators.len()];
        let mut gens = Vec::with_capacity(names.len());
        for (new, name) in names.iter().enumerate() {
            let old = self.index_of(name).ok_or_else(|| AlgebraError::UnknownGenerator((*name).to_owned()))?;
            map[old] = new;
            gens.push(self.generators[old].clone());
        }
        let relators = self.relators.iter().map(|r| r.map_gens(|g| map[g])).collect();
        Presentation::new(gens, relators)
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }
}

/// Solves the relator `rel` for generator `gen`. The relator must contain
/// `gen` exactly once with exponent `+-1`. Returns `w` with `gen = w`.
pub fn solve_for(rel: &Word, gen: Gen) -> Option<Word> {
    let core = rel.cyclic_core();
    let occurrences: Vec<usize> = core
        .runs()
        .iter()
        .enumerate()
        .filter(|(_, (g, _))| *g == gen)
        .map(|(i, _)| i)
        .collect();
    if occurrences.len() != 1 {
        return None;
    }
    let i = occurrences[0];
    let e = core.runs()[i].1;
    if e.abs() != 1 {
        return None;
    }
    // rotate so that gen^e is first: gen^e * rest = 1
    let runs = core.runs();
    let rest = Word::from_runs(runs[i + 1..].iter().chain(runs[..i].iter()).copied());
    Some(if e == 1 { rest.inverse() } else { rest })
}

/// Removes `gen` using relator `rel_idx`. Returns the new presentation and
/// the solved expression of `gen` over the *new* generator indices.
pub fn tietze_eliminate_solved(
    p: &Presentation,
    gen: Gen,
    rel_idx: usize,
) -> Result<(Presentation, Word), AlgebraError> {
    let rel = p.relators.get(rel_idx).ok_or(AlgebraError::RelatorOutOfRange(rel_idx))?;
    if gen >= p.gen_count() {
        return Err(AlgebraError::GeneratorOutOfRange { relator: rel_idx, gen, count: p.gen_count() });
    }
    let solution = solve_for(rel, gen).ok_or_else(|| AlgebraError::NotEliminable {
        generator: p.generators[gen].name.clone(),
        relator: rel_idx,
    })?;
    let shift = |g: Gen| if g > gen { g - 1 } else { g };
    let image = |g: Gen| if g == gen { solution.clone() } else { Word::gen(g) };
    let relators = p
        .relators
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != rel_idx)
        .map(|(_, r)| r.substitute(image).map_gens(shift))
        .collect();
    let mut generators = p.generators.clone();
    generators.remove(gen);
    let solved = solution.map_gens(shift);
    Ok((Presentation::new(generators, relators)?, solved))
}

pub fn tietze_eliminate(p: &Presentation, gen: Gen, rel_idx: usize) -> Result<Presentation, AlgebraError> {
    tietze_eliminate_solved(p, gen, rel_idx).map(|(q, _)| q)
}

/// Adds generator `label` with defining relator `label * definition^-1`.
pub fn tietze_introduce(
    p: &Presentation,
    label: GeneratorLabel,
    definition: &Word,
) -> Result<Presentation, AlgebraError> {
    if p.index_of(&label.name).is_some() {
        return Err(AlgebraError::DuplicateName(label.name));
    }
    if let Some(m) = definition.max_gen() {
        if m >= p.gen_count() {
            return Err(AlgebraError::GeneratorOutOfRange { relator: p.relators.len(), gen: m, count: p.gen_count() });
        }
    }
    let g = p.gen_count();
    let mut generators = p.generators.clone();
    generators.push(label);
    let mut relators = p.relators.clone();
    relators.push(&Word::gen(g) * &definition.inverse());
    Presentation::new(generators, relators)
}

/// Quotient by the normal closure of generator `g`: the generator is
/// removed and every occurrence deleted.
pub fn kill_generator(p: &Presentation, g: Gen) -> Result<Presentation, AlgebraError> {
    let mut q = p.clone();
    q.add_relator(Word::gen(g))?;
    let idx = q.relators.len() - 1;
    tietze_eliminate(&q, g, idx)
}

/// Canonical form: reduced relators, each replaced by the least of its
/// rotations and their inverses, sorted, deduplicated, empties dropped.
pub fn normalize_presentation(p: &Presentation) -> Presentation {
    let set: BTreeSet<Word> = p
        .relators
        .iter()
        .map(Word::canonical_cyclic)
        .filter(|w| !w.is_empty())
        .collect();
    Presentation {
        generators: p.generators.clone(),
        relators: set.into_iter().collect(),
    }
}

/// Normalized relator multisets agree after matching generators by name.
pub fn same_by_names(a: &Presentation, b: &Presentation) -> bool {
    let names = b.names();
    match a.reorder_like(&names) {
        Ok(a2) => normalize_presentation(&a2).relators == normalize_presentation(b).relators,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(runs: &[(Gen, i64)]) -> Word {
        Word::from_runs(runs.iter().copied())
    }

    // generators: k = 0, t = 1
    fn tangency(a: Gen, b: Gen) -> Word {
        let (x, y) = (Word::gen(a), Word::gen(b));
        &(&x * &y).pow(2) * &(&y * &x).pow(-2)
    }

    #[test]
    fn eliminate_tau_from_projective() {
        let p = Presentation::with_names(&["k", "t"], vec![tangency(0, 1), w(&[(1, 1), (0, 2)])]).unwrap();
        let (q, sol) = tietze_eliminate_solved(&p, 1, 1).unwrap();
        assert_eq!(q.names(), vec!["k"]);
        assert_eq!(sol, Word::power_of(0, -2));
        assert!(normalize_presentation(&q).relators().is_empty());
    }

    #[test]
    fn eliminate_duplicate_generator() {
        let p = Presentation::with_names(&["a", "b"], vec![w(&[(0, 1), (1, -1)])]).unwrap();
        let q = tietze_eliminate(&p, 1, 0).unwrap();
        assert_eq!(q.names(), vec!["a"]);
        assert!(normalize_presentation(&q).relators().is_empty());
    }

    #[test]
    fn not_eliminable() {
        let p = Presentation::with_names(&["a", "b"], vec![tangency(0, 1)]).unwrap();
        assert!(matches!(tietze_eliminate(&p, 1, 0), Err(AlgebraError::NotEliminable { .. })));
    }

    #[test]
    fn introduce_then_eliminate_renames() {
        let p = Presentation::with_names(&["a"], vec![]).unwrap();
        let q = tietze_introduce(&p, GeneratorLabel::plain("g"), &Word::gen(0)).unwrap();
        let r = tietze_eliminate(&q, 0, 0).unwrap();
        assert_eq!(r.names(), vec!["g"]);
        assert!(normalize_presentation(&r).relators().is_empty());
        assert!(matches!(
            tietze_introduce(&p, GeneratorLabel::plain("a"), &Word::empty()),
            Err(AlgebraError::DuplicateName(_))
        ));
    }

    #[test]
    fn alpha_beta_change_of_generators() {
        // <t, k | (tk)^2 (kt)^-2>, alpha := t k, beta := t
        let (t, k) = (0, 1);
        let p = Presentation::with_names(&["t", "k"], vec![tangency(t, k)]).unwrap();
        let p = tietze_introduce(&p, GeneratorLabel::plain("alpha"), &w(&[(t, 1), (k, 1)])).unwrap();
        let p = tietze_introduce(&p, GeneratorLabel::plain("beta"), &Word::gen(t)).unwrap();
        // eliminate t using beta's definition (relator 2), then k using alpha's
        let bi = p.find_relator(&w(&[(3, 1), (t, -1)])).unwrap();
        let p = tietze_eliminate(&p, t, bi).unwrap();
        let k = p.index_of("k").unwrap();
        let ai = (0..p.relators().len()).find(|&i| solve_for(&p.relators()[i], k).is_some() && p.relators()[i].len() == 3).unwrap();
        let p = tietze_eliminate(&p, k, ai).unwrap();
        assert_eq!(p.names(), vec!["alpha", "beta"]);
        let expected = Presentation::with_names(
            &["alpha", "beta"],
            vec![Word::commutator(&Word::power_of(0, 2), &Word::gen(1))],
        )
        .unwrap();
        assert!(same_by_names(&p, &expected));
    }

    #[test]
    fn normalization_identifies_inverse_rotation() {
        let a = Presentation::with_names(&["k", "t"], vec![tangency(0, 1)]).unwrap();
        let b = Presentation::with_names(&["k", "t"], vec![tangency(1, 0)]).unwrap();
        assert_eq!(normalize_presentation(&a), normalize_presentation(&b));
    }

    #[test]
    fn normalization_drops_empty_and_duplicates() {
        let c = Word::commutator(&Word::gen(0), &Word::gen(1));
        let p = Presentation::with_names(&["a", "b"], vec![c.clone(), Word::empty(), c.inverse(), c]).unwrap();
        let q = normalize_presentation(&p);
        assert_eq!(q.relators().len(), 1);
        assert_eq!(q.relators()[0], w(&[(0, 1), (1, 1), (0, -1), (1, -1)]));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(Presentation::with_names(&["a"], vec![Word::gen(1)]).is_err());
        assert!(Presentation::with_names(&["a", "a"], vec![]).is_err());
    }
}
