//! Words in a free group, stored as runs of `(generator, exponent)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

/// Index of a generator inside a presentation.
pub type Gen = usize;

/// A freely reduced word over generators `0..n`.
///
/// Letters are kept as runs, so `(ab)^2` is four runs and `a^5` is one.
/// Adjacent runs always have distinct generators and every exponent is
/// nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    runs: Vec<(Gen, i64)>,
}

impl Word {
    pub fn empty() -> Self {
        Word { runs: Vec::new() }
    }

    /// Single generator `g`.
    pub fn gen(g: Gen) -> Self {
        Word { runs: vec![(g, 1)] }
    }

    /// `g^e`, empty when `e == 0`.
    pub fn power_of(g: Gen, e: i64) -> Self {
        if e == 0 {
            Word::empty()
        } else {
            Word { runs: vec![(g, e)] }
        }
    }

    /// Builds the freely reduced word from arbitrary runs.
    pub fn from_runs<I: IntoIterator<Item = (Gen, i64)>>(runs: I) -> Self {
        let mut w = Word::empty();
        for (g, e) in runs {
            w.push_run(g, e);
        }
        w
    }

    /// Builds a word from signed single letters, `+g` / `-g` encoded as
    /// `(g, true)` / `(g, false)`.
    pub fn from_letters<I: IntoIterator<Item = (Gen, bool)>>(letters: I) -> Self {
        Word::from_runs(letters.into_iter().map(|(g, pos)| (g, if pos { 1 } else { -1 })))
    }

    fn push_run(&mut self, g: Gen, e: i64) {
        if e == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((h, f)) if *h == g => {
                *f += e;
                if *f == 0 {
                    self.runs.pop();
                }
            }
            _ => self.runs.push((g, e)),
        }
    }

    pub fn runs(&self) -> &[(Gen, i64)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of letters, counting `a^3` as three.
    pub fn len(&self) -> usize {
        self.runs.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    /// Expanded letter sequence.
    pub fn letters(&self) -> Vec<(Gen, bool)> {
        let mut out = Vec::with_capacity(self.len());
        for &(g, e) in &self.runs {
            for _ in 0..e.unsigned_abs() {
                out.push((g, e > 0));
            }
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word {
            runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Exponent sum of generator `g`.
    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.runs.iter().filter(|(h, _)| *h == g).map(|(_, e)| e).sum()
    }

    pub fn contains_gen(&self, g: Gen) -> bool {
        self.runs.iter().any(|(h, _)| *h == g)
    }

    pub fn max_gen(&self) -> Option<Gen> {
        self.runs.iter().map(|(g, _)| *g).max()
    }

    /// Replaces every generator by a word. `image(g)` is called once per run.
    pub fn substitute<F: Fn(Gen) -> Word>(&self, image: F) -> Word {
        let mut out = Word::empty();
        for &(g, e) in &self.runs {
            out = &out * &image(g).pow(e);
        }
        out
    }

    /// Renumbers generators; `map(g)` must be defined for every letter.
    pub fn map_gens<F: Fn(Gen) -> Gen>(&self, map: F) -> Word {
        Word::from_runs(self.runs.iter().map(|&(g, e)| (map(g), e)))
    }

    /// `b a b^-1`.
    pub fn conjugate(a: &Word, b: &Word) -> Word {
        &(b * a) * &b.inverse()
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        &(&(a * b) * &a.inverse()) * &b.inverse()
    }

    /// `g_m ... g_1` for the list `[g_1, ..., g_m]`.
    pub fn descending_product<'a, I>(items: I) -> Word
    where
        I: IntoIterator<Item = &'a Word>,
        I::IntoIter: DoubleEndedIterator,
    {
        items.into_iter().rev().fold(Word::empty(), |acc, w| &acc * w)
    }

    /// Splits `self = u c u^-1` with `c` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut runs = self.runs.clone();
        let mut conj: Vec<(Gen, i64)> = Vec::new();
        loop {
            if runs.len() < 2 {
                break;
            }
            let (g0, e0) = runs[0];
            let last = runs.len() - 1;
            let (g1, e1) = runs[last];
            if g0 != g1 {
                break;
            }
            // u = g^e0 moved out, the tail absorbs the rest of the first run.
            runs.remove(0);
            let last = runs.len() - 1;
            let merged = e1 + e0;
            if merged == 0 {
                runs.pop();
            } else {
                runs[last].1 = merged;
            }
            conj.push((g0, e0));
        }
        (Word { runs }, Word::from_runs(conj))
    }

    /// Cyclically reduced core, dropping the conjugator.
    pub fn cyclic_core(&self) -> Word {
        self.cyclic_reduce().0
    }

    /// Rotations at run boundaries. For a cyclically reduced word with at
    /// least two runs each rotation is again cyclically reduced.
    pub fn run_rotations(&self) -> Vec<Word> {
        let n = self.runs.len();
        if n <= 1 {
            return vec![self.clone()];
        }
        (0..n)
            .map(|i| {
                let mut runs = self.runs[i..].to_vec();
                runs.extend_from_slice(&self.runs[..i]);
                Word { runs }
            })
            .collect()
    }

    /// Whether `self` and `other` are conjugate in the free group.
    pub fn is_conjugate_to(&self, other: &Word) -> bool {
        let a = self.cyclic_core();
        let b = other.cyclic_core();
        if a.len() != b.len() {
            return false;
        }
        let la = a.letters();
        let lb = b.letters();
        if la.is_empty() {
            return true;
        }
        (0..la.len()).any(|s| (0..la.len()).all(|i| la[(i + s) % la.len()] == lb[i]))
    }

    /// Cyclic-and-inverse canonical representative, see [`letter_key`].
    pub fn canonical_cyclic(&self) -> Word {
        let core = self.cyclic_core();
        let inv = core.inverse();
        core.run_rotations()
            .into_iter()
            .chain(inv.run_rotations())
            .min()
            .unwrap_or_default()
    }

    /// Replaces non-overlapping occurrences (left to right) of `pattern`
    /// by `replacement` in the letter sequence, then reduces.
    pub fn replace_subword(&self, pattern: &Word, replacement: &Word) -> (Word, usize) {
        let pat = pattern.letters();
        if pat.is_empty() {
            return (self.clone(), 0);
        }
        let letters = self.letters();
        let mut out = Word::empty();
        let mut i = 0;
        let mut count = 0;
        while i < letters.len() {
            if i + pat.len() <= letters.len() && letters[i..i + pat.len()] == pat[..] {
                out = &out * replacement;
                i += pat.len();
                count += 1;
            } else {
                let (g, p) = letters[i];
                out.push_run(g, if p { 1 } else { -1 });
                i += 1;
            }
        }
        (out, count)
    }
}

/// Sort key for a single run: generator, then positive before negative,
/// then magnitude.
fn letter_key(&(g, e): &(Gen, i64)) -> (Gen, u8, u64) {
    (g, if e > 0 { 0 } else { 1 }, e.unsigned_abs())
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.runs
                .iter()
                .map(letter_key)
                .cmp(other.runs.iter().map(letter_key))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        let mut out = self.clone();
        for &(g, e) in &rhs.runs {
            out.push_run(g, e);
        }
        out
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl fmt::Display for Word {
    /// Index-based rendering (`x0^2*x1^-1`); use [`crate::algebra::format`]
    /// for named output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{g}")?;
            } else {
                write!(f, "x{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Kinds accepted by [`word_build`].
#[derive(Clone, Debug)]
pub enum WordBuild<'a> {
    Conjugate(&'a Word, &'a Word),
    Commutator(&'a Word, &'a Word),
    DescendingProduct(&'a [Word]),
    Inverse(&'a Word),
    Concat(&'a [Word]),
}

pub fn word_build(kind: WordBuild<'_>) -> Word {
    match kind {
        WordBuild::Conjugate(a, b) => Word::conjugate(a, b),
        WordBuild::Commutator(a, b) => Word::commutator(a, b),
        WordBuild::DescendingProduct(ws) => Word::descending_product(ws.iter()),
        WordBuild::Inverse(w) => w.inverse(),
        WordBuild::Concat(ws) => ws.iter().fold(Word::empty(), |acc, w| &acc * w),
    }
}

/// Free reduction of an arbitrary run list.
pub fn free_reduce(runs: &[(Gen, i64)]) -> Word {
    Word::from_runs(runs.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Gen = 0;
    const B: Gen = 1;

    fn w(runs: &[(Gen, i64)]) -> Word {
        Word::from_runs(runs.iter().copied())
    }

    #[test]
    fn cancellation() {
        assert!(free_reduce(&[(A, 1), (A, -1)]).is_empty());
        assert_eq!(free_reduce(&[(A, 1), (B, 1), (B, -1), (A, 1)]), Word::power_of(A, 2));
    }

    #[test]
    fn tangency_relator_is_reduced() {
        // (kt)^2 (tk)^-2 with k = 0, t = 1
        let k = Word::gen(A);
        let t = Word::gen(B);
        let r = &(&k * &t).pow(2) * &(&t * &k).pow(-2);
        assert_eq!(r.len(), 8);
        assert_eq!(
            r,
            w(&[(A, 1), (B, 1), (A, 1), (B, 1), (A, -1), (B, -1), (A, -1), (B, -1)])
        );
    }

    #[test]
    fn cyclic_reduction() {
        let (core, u) = w(&[(A, 1), (B, 1), (A, -1)]).cyclic_reduce();
        assert_eq!(core, Word::gen(B));
        assert_eq!(u, Word::gen(A));
        let (core, u) = Word::empty().cyclic_reduce();
        assert!(core.is_empty() && u.is_empty());
        // k2^-1 t1 k1 t1^-1 with k1 = 0, k2 = 2, t1 = 1
        let r = w(&[(2, -1), (1, 1), (0, 1), (1, -1)]);
        let (core, u) = r.cyclic_reduce();
        assert_eq!(core, r);
        assert!(u.is_empty());
    }

    #[test]
    fn cyclic_reduce_reconstructs() {
        let x = w(&[(A, 2), (B, 1), (A, 1), (B, -1), (A, -3)]);
        let (core, u) = x.cyclic_reduce();
        assert_eq!(&(&u * &core) * &u.inverse(), x);
    }

    #[test]
    fn builders() {
        let a = Word::gen(A);
        let b = Word::gen(B);
        assert_eq!(word_build(WordBuild::Commutator(&a, &b)), w(&[(A, 1), (B, 1), (A, -1), (B, -1)]));
        let (k1, t1) = (Word::gen(0), Word::gen(1));
        let basis = [k1.clone(), k1.clone(), t1.clone()];
        assert_eq!(word_build(WordBuild::DescendingProduct(&basis)), w(&[(1, 1), (0, 2)]));
        assert_eq!(word_build(WordBuild::Conjugate(&k1, &t1)), w(&[(1, 1), (0, 1), (1, -1)]));
        assert_eq!(word_build(WordBuild::Inverse(&a)), Word::power_of(A, -1));
        assert_eq!(word_build(WordBuild::Concat(&[a.clone(), a])), Word::power_of(A, 2));
    }

    #[test]
    fn conjugacy_check() {
        let x = w(&[(A, 1), (B, 2)]);
        let y = w(&[(B, 1), (A, 1), (B, 1)]);
        assert!(x.is_conjugate_to(&y));
        assert!(!x.is_conjugate_to(&x.inverse()));
    }

    #[test]
    fn replace() {
        let x = w(&[(A, 1), (B, 1), (A, 1), (B, 1)]);
        let (y, n) = x.replace_subword(&w(&[(A, 1), (B, 1)]), &Word::gen(2));
        assert_eq!(n, 2);
        assert_eq!(y, Word::power_of(2, 2));
    }
}
