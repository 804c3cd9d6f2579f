//! Smith normal form over the integers and abelianization.

use serde::{Deserialize, Serialize};

use super::presentation::Presentation;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntegerMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: i128) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += c * v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: i128) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += c * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)];
        }
    }

    /// Exponent-sum matrix of a presentation: one row per relator.
    pub fn exponent_sums(p: &Presentation) -> IntegerMatrix {
        let n = p.gen_count();
        let mut m = IntegerMatrix::zeros(p.relators().len(), n);
        for (i, r) in p.relators().iter().enumerate() {
            for &(g, e) in r.runs() {
                m[(i, g)] += e as i128;
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

/// `left * m * right = diag(diagonal)` with unimodular `left`, `right`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
    /// The diagonal matrix itself, same shape as the input.
    pub reduced: IntegerMatrix,
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = IntegerMatrix::identity(rows);
    let mut right = IntegerMatrix::identity(cols);
    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        // pivot: smallest nonzero |entry| in the trailing block
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                let v = a[(i, j)].abs();
                if v != 0 && pivot.is_none_or(|(_, _, best)| v < best) {
                    pivot = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        let mut done = true;
        for i in t + 1..rows {
            let q = a[(i, t)] / a[(t, t)];
            if q != 0 {
                a.add_row(i, t, -q);
                left.add_row(i, t, -q);
            }
            if a[(i, t)] != 0 {
                done = false;
            }
        }
        for j in t + 1..cols {
            let q = a[(t, j)] / a[(t, t)];
            if q != 0 {
                a.add_col(j, t, -q);
                right.add_col(j, t, -q);
            }
            if a[(t, j)] != 0 {
                done = false;
            }
        }
        if !done {
            // remainders are smaller than the pivot; pick again
            continue;
        }
        // divisibility of the trailing block
        let d = a[(t, t)];
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[(i, j)] % d != 0));
        if let Some(i) = bad {
            a.add_row(t, i, 1);
            left.add_row(t, i, 1);
            continue;
        }
        if d < 0 {
            a.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    let diagonal = (0..steps).map(|i| a[(i, i)]).collect();
    SmithForm { diagonal, left, right, reduced: a }
}

/// Invariant factors of an abelianized group: `Z/d_1 x ... x Z/d_k x Z^r`
/// with `1 < d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub struct AbelianInvariants {
    pub torsion: Vec<u128>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// Torsion coefficients followed by one `0` per free factor.
    pub fn factors(&self) -> Vec<u128> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat_n(0, self.free_rank));
        v
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let n = p.gen_count();
    let m = IntegerMatrix::exponent_sums(p);
    let snf = smith_normal_form(&m);
    let nonzero: Vec<u128> = snf.diagonal.iter().filter(|d| **d != 0).map(|d| d.unsigned_abs()).collect();
    AbelianInvariants {
        torsion: nonzero.iter().copied().filter(|d| *d != 1).collect(),
        free_rank: n - nonzero.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Word;

    fn det(m: &IntegerMatrix) -> i128 {
        // fraction-free Bareiss
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 0 {
            return 1;
        }
        let mut a = m.clone();
        let mut sign = 1;
        let mut prev = 1;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                let Some(s) = (k + 1..n).find(|&i| a[(i, k)] != 0) else { return 0 };
                a.swap_rows(k, s);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[(i, j)] = (a[(i, j)] * a[(k, k)] - a[(i, k)] * a[(k, j)]) / prev;
                }
            }
            prev = a[(k, k)];
        }
        sign * a[(n - 1, n - 1)]
    }

    fn check(m: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.left.mul(m).mul(&s.right), s.reduced);
        assert_eq!(det(&s.left).abs(), 1);
        assert_eq!(det(&s.right).abs(), 1);
        for i in 0..s.reduced.rows() {
            for j in 0..s.reduced.cols() {
                if i != j {
                    assert_eq!(s.reduced[(i, j)], 0);
                }
            }
        }
        let nz: Vec<i128> = s.diagonal.iter().copied().filter(|d| *d != 0).collect();
        for w in nz.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn small_cases() {
        assert_eq!(check(&IntegerMatrix::identity(2)).diagonal, vec![1, 1]);
        assert_eq!(check(&IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]])).diagonal, vec![1, 6]);
        assert_eq!(check(&IntegerMatrix::from_rows(&[vec![1, 1, 2]])).diagonal, vec![1]);
        assert_eq!(check(&IntegerMatrix::from_rows(&[vec![4, 6], vec![6, 9]])).diagonal, vec![1, 0]);
        check(&IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
    }

    #[test]
    fn abelianizations() {
        let free = Presentation::with_names(&["a", "b"], vec![]).unwrap();
        assert_eq!(abelianization(&free), AbelianInvariants { torsion: vec![], free_rank: 2 });
        let (t, k) = (Word::gen(0), Word::gen(1));
        let eq2 = Presentation::with_names(&["t", "k"], vec![&(&t * &k).pow(2) * &(&k * &t).pow(-2)]).unwrap();
        assert_eq!(abelianization(&eq2).free_rank, 2);
        let cyc = Presentation::with_names(&["a", "b"], vec![Word::power_of(0, 4), Word::power_of(1, 6)]).unwrap();
        assert_eq!(abelianization(&cyc).torsion, vec![2, 12]);
        assert_eq!(abelianization(&cyc).factors(), vec![2, 12]);
    }
}
