//! HLT coset enumeration with coincidence processing.

use crate::algebra::{Presentation, Word};

use super::VerifyError;

const NONE: usize = usize::MAX;

/// Default bound on the number of coset definitions.
pub const DEFAULT_MAX_COSETS: usize = 100_000;

/// The bound from `VK_MAX_COSETS`, else the default.
pub fn max_cosets_from_env() -> usize {
    std::env::var("VK_MAX_COSETS").ok().and_then(|v| v.parse().ok()).filter(|&v| v >= 1).unwrap_or(DEFAULT_MAX_COSETS)
}

/// Columns `2g` (generator `g`) and `2g+1` (its inverse).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub generators: usize,
    pub rows: Vec<Vec<Option<usize>>>,
    pub complete: bool,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    /// Image of coset `c` under a word, if defined along the way.
    pub fn act(&self, c: usize, w: &Word) -> Option<usize> {
        let mut c = c;
        for (g, pos) in w.letters() {
            c = self.rows[c][col(g, pos)]?;
        }
        Some(c)
    }

    /// Complete, every relator closes from every coset, and transitive.
    pub fn is_valid_for(&self, p: &Presentation) -> bool {
        if !self.complete || self.rows.iter().any(|r| r.len() != 2 * self.generators || r.iter().any(Option::is_none)) {
            return false;
        }
        for c in 0..self.index() {
            for x in 0..2 * self.generators {
                let d = self.rows[c][x].expect("complete");
                if self.rows[d][x ^ 1] != Some(c) {
                    return false;
                }
            }
            if p.relators().iter().any(|r| self.act(c, r) != Some(c)) {
                return false;
            }
        }
        let mut seen = vec![false; self.index()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for d in self.rows[c].iter().flatten() {
                if !seen[*d] {
                    seen[*d] = true;
                    stack.push(*d);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn col(g: usize, positive: bool) -> usize {
    2 * g + usize::from(!positive)
}

fn columns(w: &Word) -> Vec<usize> {
    w.letters().into_iter().map(|(g, p)| col(g, p)).collect()
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    max: usize,
}

impl Enumerator {
    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), VerifyError> {
        if self.table.len() >= self.max {
            return Err(VerifyError::Exhausted { bound: self.max });
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                self.table[f][x ^ 1] = NONE;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t, &mut queue);
                } else if self.table[f1][x ^ 1] != NONE {
                    let t = self.table[f1][x ^ 1];
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][x ^ 1] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), VerifyError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][w[j as usize] ^ 1] != NONE {
                b = self.table[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup`.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable, VerifyError> {
    let cols = 2 * p.gen_count();
    let mut e = Enumerator { cols, table: vec![vec![NONE; cols]], parent: vec![0], max: max_cosets.max(1) };
    let rels: Vec<Vec<usize>> = p.relators().iter().map(|r| columns(&r.cyclic_core())).collect();
    for h in subgroup {
        e.scan_and_fill(0, &columns(h))?;
    }
    let mut c = 0;
    while c < e.table.len() {
        for r in &rels {
            if !e.alive(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        for x in 0..cols {
            if e.alive(c) && e.table[c][x] == NONE {
                e.define(c, x)?;
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.alive(c)).collect();
    let mut number = vec![NONE; e.table.len()];
    for (i, &c) in live.iter().enumerate() {
        number[c] = i;
    }
    let rows: Vec<Vec<Option<usize>>> = live
        .iter()
        .map(|&c| {
            (0..cols)
                .map(|x| {
                    let d = e.table[c][x];
                    (d != NONE).then(|| number[e.rep(d)])
                })
                .collect()
        })
        .collect();
    let complete = rows.iter().all(|r| r.iter().all(Option::is_some));
    Ok(CosetTable { generators: p.gen_count(), rows, complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_presentation, parse_word};

    fn index(p: &str, sub: &[&str]) -> usize {
        let p = parse_presentation(p).unwrap();
        let sub: Vec<Word> = sub.iter().map(|s| parse_word(s, &p.names()).unwrap()).collect();
        let t = todd_coxeter(&p, &sub, DEFAULT_MAX_COSETS).unwrap();
        assert!(t.is_valid_for(&p));
        t.index()
    }

    #[test]
    fn small_indices() {
        assert_eq!(index("< a | a^5 >", &[]), 5);
        assert_eq!(index("< a, b | a^2, b^3, a*b*a*b >", &["b"]), 2);
        assert_eq!(index("< a, b | a^2, b^3, a*b*a*b >", &[]), 6);
        assert_eq!(index("< k, l | k*l*k^-1*l^-1 >", &["k^2", "l"]), 2);
        // the (2,3,5) triangle group has order 60
        assert_eq!(index("< a, b | a^2, b^3, a*b*a*b*a*b*a*b*a*b >", &[]), 60);
    }

    #[test]
    fn bound_is_reported() {
        let p = parse_presentation("< a, b | >").unwrap();
        assert_eq!(todd_coxeter(&p, &[], 50), Err(VerifyError::Exhausted { bound: 50 }));
    }
}
