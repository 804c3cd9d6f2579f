//! Isomorphism invariants used to compare presentations.

use serde::Serialize;

use crate::algebra::{abelianization, AbelianInvariants, Presentation, Simplifier};

use super::groups::{count_homs_finite, FiniteGroup};
use super::low_index::{low_index_subgroups, SubgroupCountReport};
use super::VerifyError;

/// Largest index handled through homomorphism counts into symmetric groups.
const HALL_MAX: usize = 6;

#[derive(Clone, Debug)]
pub struct Depth {
    pub index_max: usize,
    pub hom_targets: Vec<FiniteGroup>,
}

impl Depth {
    /// Subgroups up to `index_max`, homomorphisms into S3 and S4.
    pub fn new(index_max: usize) -> Depth {
        Depth { index_max, hom_targets: vec![FiniteGroup::symmetric(3), FiniteGroup::symmetric(4)] }
    }
}

impl Default for Depth {
    fn default() -> Self {
        Depth::new(5)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomCountReport {
    pub counts: Vec<(String, u128)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsReport {
    pub abelianization: AbelianInvariants,
    pub subgroups: SubgroupCountReport,
    pub homs: HomCountReport,
}

fn binomial(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Subgroup counts from `|Hom(G, S_m)|`: with `h_0 = 1`, the transitive
/// counts obey `t_m = h_m - sum_{k<m} C(m-1, k-1) t_k h_{m-k}` and
/// `a_m = t_m / (m-1)!`.
pub fn subgroup_counts_via_homs(p: &Presentation, max_index: usize) -> SubgroupCountReport {
    let mut h = vec![1i128];
    for m in 1..=max_index {
        h.push(count_homs_finite(p, &FiniteGroup::symmetric(m)) as i128);
    }
    let mut t = vec![0i128; max_index + 1];
    let mut counts = Vec::with_capacity(max_index);
    let mut fact = 1i128;
    for m in 1..=max_index {
        let sum: i128 = (1..m).map(|k| binomial(m - 1, k - 1) * t[k] * h[m - k]).sum();
        t[m] = h[m] - sum;
        if m > 1 {
            fact *= (m - 1) as i128;
        }
        debug_assert_eq!(t[m] % fact, 0);
        counts.push((t[m] / fact) as u128);
    }
    SubgroupCountReport { counts }
}

/// Abelianization, subgroup counts and homomorphism counts, computed on a
/// greedily shortened copy of `p`.
pub fn invariants_report(p: &Presentation, depth: &Depth) -> Result<InvariantsReport, VerifyError> {
    let mut s = Simplifier::unlabeled(p.clone());
    s.greedy()?;
    let q = s.finish();
    let subgroups = if depth.index_max <= HALL_MAX {
        subgroup_counts_via_homs(&q, depth.index_max)
    } else {
        low_index_subgroups(&q, depth.index_max)?
    };
    let homs = HomCountReport {
        counts: depth.hom_targets.iter().map(|g| (g.name.clone(), count_homs_finite(&q, g))).collect(),
    };
    Ok(InvariantsReport { abelianization: abelianization(&q), subgroups, homs })
}
