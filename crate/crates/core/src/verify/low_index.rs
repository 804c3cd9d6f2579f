//! Subgroups of small index by backtracking over standardized coset tables.

use serde::Serialize;

use crate::algebra::Presentation;

use super::VerifyError;

const NONE: usize = usize::MAX;

/// `counts[k - 1]` is the number of subgroups of index exactly `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupCountReport {
    pub counts: Vec<u128>,
}

/// Node budget for [`low_index_subgroups`].
pub const DEFAULT_NODE_BUDGET: usize = 5_000_000;

struct Search {
    cols: usize,
    max_index: usize,
    rels: Vec<Vec<usize>>,
    counts: Vec<u128>,
    nodes: usize,
    budget: usize,
}

type Table = Vec<Vec<usize>>;

impl Search {
    /// Fills forced entries; false on a contradiction.
    fn propagate(&self, t: &mut Table) -> bool {
        loop {
            let mut changed = false;
            for c in 0..t.len() {
                for r in &self.rels {
                    let (mut f, mut i) = (c, 0usize);
                    while i < r.len() && t[f][r[i]] != NONE {
                        f = t[f][r[i]];
                        i += 1;
                    }
                    if i == r.len() {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    let (mut b, mut j) = (c, r.len());
                    while j > i && t[b][r[j - 1] ^ 1] != NONE {
                        b = t[b][r[j - 1] ^ 1];
                        j -= 1;
                    }
                    if j == i + 1 {
                        let x = r[i];
                        if t[f][x] != NONE || t[b][x ^ 1] != NONE {
                            return false;
                        }
                        t[f][x] = b;
                        t[b][x ^ 1] = f;
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&mut self, t: Table) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let slot = (0..t.len()).flat_map(|c| (0..self.cols).map(move |x| (c, x))).find(|&(c, x)| t[c][x] == NONE);
        let Some((c, x)) = slot else {
            self.counts[t.len() - 1] += 1;
            return true;
        };
        let n = t.len();
        for d in 0..=n {
            if d == n && n == self.max_index {
                break;
            }
            let mut next = t.clone();
            if d == n {
                next.push(vec![NONE; self.cols]);
            }
            if next[d][x ^ 1] != NONE {
                continue;
            }
            next[c][x] = d;
            next[d][x ^ 1] = c;
            if self.propagate(&mut next) && !self.run(next) {
                return false;
            }
        }
        true
    }
}

/// Exact subgroup counts for indices `1..=max_index`.
pub fn low_index_subgroups(p: &Presentation, max_index: usize) -> Result<SubgroupCountReport, VerifyError> {
    low_index_with_budget(p, max_index, DEFAULT_NODE_BUDGET)
}

pub fn low_index_with_budget(p: &Presentation, max_index: usize, budget: usize) -> Result<SubgroupCountReport, VerifyError> {
    let cols = 2 * p.gen_count();
    let rels = p
        .relators()
        .iter()
        .map(|r| r.cyclic_core().letters().into_iter().map(|(g, pos)| 2 * g + usize::from(!pos)).collect())
        .filter(|r: &Vec<usize>| !r.is_empty())
        .collect();
    let mut s = Search { cols, max_index, rels, counts: vec![0; max_index], nodes: 0, budget };
    if max_index == 0 {
        return Ok(SubgroupCountReport { counts: vec![] });
    }
    if cols == 0 {
        s.counts[0] = 1;
        return Ok(SubgroupCountReport { counts: s.counts });
    }
    let mut root = vec![vec![NONE; cols]];
    if !s.propagate(&mut root) {
        return Ok(SubgroupCountReport { counts: s.counts });
    }
    if s.run(root) {
        Ok(SubgroupCountReport { counts: s.counts })
    } else {
        Err(VerifyError::ResourceLimit { partial: s.counts })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_presentation;

    fn counts(p: &str, k: usize) -> Vec<u128> {
        low_index_subgroups(&parse_presentation(p).unwrap(), k).unwrap().counts
    }

    #[test]
    fn integers_and_lattice() {
        assert_eq!(counts("< a | >", 6), vec![1; 6]);
        assert_eq!(counts("< a, b | a*b*a^-1*b^-1 >", 6), vec![1, 3, 4, 7, 6, 12]);
    }

    #[test]
    fn finite_groups() {
        // S3: one subgroup of index 1, 2 and 6, three of index 3
        assert_eq!(counts("< a, b | a^2, b^3, a*b*a*b >", 6), vec![1, 1, 3, 0, 0, 1]);
        // free group of rank 2: 1, 3, 13
        assert_eq!(counts("< a, b | >", 3), vec![1, 3, 13]);
    }

    #[test]
    fn budget() {
        let p = parse_presentation("< a, b, c | >").unwrap();
        assert!(matches!(low_index_with_budget(&p, 5, 100), Err(VerifyError::ResourceLimit { .. })));
    }
}
