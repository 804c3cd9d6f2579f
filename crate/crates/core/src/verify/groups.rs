//! Small finite groups by multiplication table, and homomorphism counting
//! from finitely presented groups into them.

use std::collections::HashMap;

use crate::algebra::{Gen, Presentation, Word};

use super::VerifyError;

/// A finite group with elements `0..order`, `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
}

impl FiniteGroup {
    /// Closes a set of permutations of `0..degree` under composition.
    pub fn from_permutations(name: &str, degree: usize, gens: &[Vec<usize>]) -> FiniteGroup {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                // (x * g)(j) = g(x(j)): apply x first
                let prod: Vec<usize> = elems[i].iter().map(|&j| g[j]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0u16; n * n];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                let prod: Vec<usize> = pa.iter().map(|&j| pb[j]).collect();
                table[a * n + b] = index[&prod] as u16;
            }
        }
        FiniteGroup::from_raw(name, n, table)
    }

    fn from_raw(name: &str, order: usize, table: Vec<u16>) -> FiniteGroup {
        let inverses = (0..order)
            .map(|a| (0..order).find(|&b| table[a * order + b] == 0).expect("group has inverses") as u16)
            .collect();
        FiniteGroup { name: name.to_owned(), order, table, inverses }
    }

    /// Validates a multiplication table (identity `0`, associativity, inverses).
    pub fn from_table(name: &str, rows: &[Vec<usize>]) -> Result<FiniteGroup, VerifyError> {
        let n = rows.len();
        let bad = |m: &str| VerifyError::InvalidGroup(format!("{name}: {m}"));
        if n == 0 || rows.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(bad("table must be square with entries in range"));
        }
        if (0..n).any(|a| rows[0][a] != a || rows[a][0] != a) {
            return Err(bad("element 0 must be the identity"));
        }
        for a in 0..n {
            if !(0..n).any(|b| rows[a][b] == 0) {
                return Err(bad("missing inverse"));
            }
            for b in 0..n {
                for c in 0..n {
                    if rows[rows[a][b]][c] != rows[a][rows[b][c]] {
                        return Err(bad("not associative"));
                    }
                }
            }
        }
        let table = rows.iter().flatten().map(|&x| x as u16).collect();
        Ok(FiniteGroup::from_raw(name, n, table))
    }

    pub fn symmetric(n: usize) -> FiniteGroup {
        let name = format!("S{n}");
        if n <= 1 {
            return FiniteGroup::from_permutations(&name, 1, &[]);
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::from_permutations(&name, n, &[swap, cycle])
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::from_permutations(&format!("Z{n}"), n, &[cycle])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u16) -> u16 {
        self.inverses[a as usize]
    }

    fn pow(&self, a: u16, e: i64) -> u16 {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut r = 0;
        for _ in 0..e.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    pub fn eval(&self, w: &Word, images: &[u16]) -> u16 {
        w.runs().iter().fold(0, |acc, &(g, e)| self.mul(acc, self.pow(images[g], e)))
    }

    /// `(representative, class size)` for each conjugacy class.
    pub fn classes(&self) -> Vec<(u16, usize)> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for a in 0..self.order as u16 {
            if seen[a as usize] {
                continue;
            }
            let mut size = 0;
            for g in 0..self.order as u16 {
                let c = self.mul(self.mul(g, a), self.inv(g));
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    size += 1;
                }
            }
            out.push((a, size));
        }
        out
    }
}

struct Problem<'a> {
    group: &'a FiniteGroup,
    rels: Vec<(Word, u64)>,
    gens: usize,
}

impl Problem<'_> {
    fn components(&self, unassigned: u64) -> Vec<u64> {
        let mut left = unassigned;
        let mut comps = Vec::new();
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            loop {
                let mut grown = comp;
                for (_, mask) in &self.rels {
                    if mask & comp != 0 {
                        grown |= mask & unassigned;
                    }
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            comps.push(comp);
            left &= !comp;
        }
        comps
    }

    fn pick(&self, comp: u64, assigned: u64) -> Gen {
        let mut best = (0usize, 0usize, 0usize);
        let mut best_gen = comp.trailing_zeros() as usize;
        for g in 0..self.gens {
            if comp & (1 << g) == 0 {
                continue;
            }
            let after = assigned | (1 << g);
            let closed = self.rels.iter().filter(|(_, m)| m & (1 << g) != 0 && m & !after == 0).count();
            let touching = self.rels.iter().filter(|(_, m)| m & (1 << g) != 0 && m & assigned != 0).count();
            let degree = self.rels.iter().filter(|(_, m)| m & (1 << g) != 0).count();
            if (closed, touching, degree) > best {
                best = (closed, touching, degree);
                best_gen = g;
            }
        }
        best_gen
    }

    fn count(&self, images: &mut [u16], assigned: u64, comp: u64, fresh: bool) -> u128 {
        if comp == 0 {
            return 1;
        }
        let comps = self.components(comp);
        if comps.len() > 1 {
            let mut total = 1u128;
            for c in comps {
                total *= self.count(images, assigned, c, fresh);
                if total == 0 {
                    break;
                }
            }
            return total;
        }
        let g = self.pick(comp, assigned);
        let after = assigned | (1 << g);
        let checks: Vec<&Word> = self
            .rels
            .iter()
            .filter(|(_, m)| m & (1 << g) != 0 && m & !after == 0)
            .map(|(w, _)| w)
            .collect();
        let candidates: Vec<(u16, usize)> = if fresh {
            self.group.classes()
        } else {
            (0..self.group.order() as u16).map(|v| (v, 1)).collect()
        };
        let mut total = 0u128;
        for (v, weight) in candidates {
            images[g] = v;
            if checks.iter().all(|w| self.group.eval(w, images) == 0) {
                total += weight as u128 * self.count(images, after, comp & !(1 << g), false);
            }
        }
        total
    }
}

/// Number of homomorphisms from the presented group into `group`.
pub fn count_homs_finite(p: &Presentation, group: &FiniteGroup) -> u128 {
    assert!(p.gen_count() <= 64, "at most 64 generators");
    let rels = p
        .relators()
        .iter()
        .map(|r| r.cyclic_core())
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mask = r.runs().iter().fold(0u64, |m, &(g, _)| m | (1 << g));
            (r, mask)
        })
        .collect();
    let prob = Problem { group, rels, gens: p.gen_count() };
    let all = if p.gen_count() == 64 { u64::MAX } else { (1u64 << p.gen_count()) - 1 };
    let mut images = vec![0u16; p.gen_count()];
    prob.count(&mut images, 0, all, true)
}

/// All homomorphisms, as generator image lists; only for small searches.
pub fn all_homs(p: &Presentation, group: &FiniteGroup) -> Vec<Vec<u16>> {
    let n = p.gen_count();
    let mut out = Vec::new();
    let mut images = vec![0u16; n];
    fn rec(p: &Presentation, g: &FiniteGroup, i: usize, images: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i == images.len() {
            if p.relators().iter().all(|r| g.eval(r, images) == 0) {
                out.push(images.clone());
            }
            return;
        }
        for v in 0..g.order() as u16 {
            images[i] = v;
            rec(p, g, i + 1, images, out);
        }
    }
    rec(p, group, 0, &mut images, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_presentation;

    #[test]
    fn group_orders() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::symmetric(5).order(), 120);
        assert_eq!(FiniteGroup::cyclic(7).order(), 7);
        let classes = FiniteGroup::symmetric(4).classes();
        assert_eq!(classes.len(), 5);
        assert_eq!(classes.iter().map(|c| c.1).sum::<usize>(), 24);
    }

    #[test]
    fn counts_match_brute_force() {
        let s3 = FiniteGroup::symmetric(3);
        let s4 = FiniteGroup::symmetric(4);
        let z2 = parse_presentation("< a, b | a*b*a^-1*b^-1 >").unwrap();
        assert_eq!(count_homs_finite(&z2, &s3), 18);
        let z = parse_presentation("< a | >").unwrap();
        assert_eq!(count_homs_finite(&z, &s4), 24);
        let two = parse_presentation("< t, k | t*k*t*k*t^-1*k^-1*t^-1*k^-1 >").unwrap();
        let brute = (0..6u16)
            .flat_map(|t| (0..6u16).map(move |k| (t, k)))
            .filter(|&(t, k)| {
                let tk = s3.mul(t, k);
                let kt = s3.mul(k, t);
                s3.mul(tk, tk) == s3.mul(kt, kt)
            })
            .count() as u128;
        assert_eq!(count_homs_finite(&two, &s3), brute);
        assert_eq!(all_homs(&two, &s3).len() as u128, brute);
        for p in [&z2, &two] {
            assert_eq!(count_homs_finite(p, &s4), all_homs(p, &s4).len() as u128);
        }
    }

    #[test]
    fn table_validation() {
        let z2 = vec![vec![0, 1], vec![1, 0]];
        assert!(FiniteGroup::from_table("Z2", &z2).is_ok());
        assert!(FiniteGroup::from_table("bad", &[vec![0, 1], vec![1, 1]]).is_err());
    }
}
