//! Normal forms in a free product of two finite cyclic groups.

use serde::{Deserialize, Serialize};

use super::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Factor {
    First,
    Second,
}

/// Alternating syllables `(factor, exponent)` with `0 < exponent < order`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeProductElement {
    syllables: Vec<(Factor, u32)>,
}

/// `Z/p * Z/q`; the default is the modular group `Z/2 * Z/3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeProduct {
    pub orders: (u32, u32),
}

impl Default for FreeProduct {
    fn default() -> Self {
        FreeProduct { orders: (2, 3) }
    }
}

impl FreeProductElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn syllables(&self) -> &[(Factor, u32)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }
}

impl FreeProduct {
    fn order(&self, f: Factor) -> u32 {
        match f {
            Factor::First => self.orders.0,
            Factor::Second => self.orders.1,
        }
    }

    /// Generator of the first factor (`a`).
    pub fn a(&self) -> FreeProductElement {
        self.syllable(Factor::First, 1)
    }

    /// Generator of the second factor (`b`).
    pub fn b(&self) -> FreeProductElement {
        self.syllable(Factor::Second, 1)
    }

    pub fn syllable(&self, f: Factor, e: i64) -> FreeProductElement {
        let mut x = FreeProductElement::identity();
        self.push(&mut x, f, e);
        x
    }

    fn push(&self, x: &mut FreeProductElement, f: Factor, e: i64) {
        let ord = self.order(f) as i64;
        let e = e.rem_euclid(ord) as u32;
        if e == 0 {
            return;
        }
        match x.syllables.last_mut() {
            Some((g, c)) if *g == f => {
                let s = (*c + e) % ord as u32;
                if s == 0 {
                    x.syllables.pop();
                } else {
                    *c = s;
                }
            }
            _ => x.syllables.push((f, e)),
        }
    }

    pub fn mul(&self, x: &FreeProductElement, y: &FreeProductElement) -> FreeProductElement {
        let mut out = x.clone();
        for &(f, e) in &y.syllables {
            self.push(&mut out, f, e as i64);
        }
        out
    }

    pub fn inverse(&self, x: &FreeProductElement) -> FreeProductElement {
        let mut out = FreeProductElement::identity();
        for &(f, e) in x.syllables.iter().rev() {
            self.push(&mut out, f, -(e as i64));
        }
        out
    }

    pub fn pow(&self, x: &FreeProductElement, k: i64) -> FreeProductElement {
        let base = if k < 0 { self.inverse(x) } else { x.clone() };
        let mut out = FreeProductElement::identity();
        for _ in 0..k.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        out
    }

    /// Image of `w` under the homomorphism sending generator `g` to
    /// `assignment[g]`, in alternating normal form.
    pub fn reduce(&self, w: &Word, assignment: &[FreeProductElement]) -> FreeProductElement {
        w.runs().iter().fold(FreeProductElement::identity(), |acc, &(g, e)| {
            self.mul(&acc, &self.pow(&assignment[g], e))
        })
    }
}

pub fn free_product_reduce(w: &Word, orders: (u32, u32), assignment: &[FreeProductElement]) -> FreeProductElement {
    FreeProduct { orders }.reduce(w, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_of_alpha_squared_dies() {
        let m = FreeProduct::default();
        let w = Word::commutator(&Word::power_of(0, 2), &Word::gen(1));
        assert!(m.reduce(&w, &[m.a(), m.b()]).is_identity());
    }

    #[test]
    fn alternating_product_is_nontrivial() {
        let m = FreeProduct::default();
        let w = &Word::gen(0) * &Word::gen(1);
        let x = m.reduce(&w, &[m.a(), m.b()]);
        assert_eq!(x.syllables(), &[(Factor::First, 1), (Factor::Second, 1)]);
    }

    #[test]
    fn tangency_relator_under_witness() {
        // t -> b, k -> b^-1 a
        let m = FreeProduct::default();
        let (t, k) = (Word::gen(0), Word::gen(1));
        let r = &(&t * &k).pow(2) * &(&k * &t).pow(-2);
        let kimg = m.mul(&m.inverse(&m.b()), &m.a());
        assert!(m.reduce(&r, &[m.b(), kimg]).is_identity());
    }

    #[test]
    fn inverse_and_orders() {
        let m = FreeProduct::default();
        let x = m.mul(&m.a(), &m.pow(&m.b(), 2));
        assert!(m.mul(&x, &m.inverse(&x)).is_identity());
        assert!(m.pow(&m.b(), 3).is_identity());
        assert_eq!(m.pow(&m.b(), -1).syllables(), &[(Factor::Second, 2)]);
    }
}
