//! Partitions, partition tuples and tangent characters at fixed points.

use crate::algebra::{Character, Weight};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row length `λ_i` (0 past the last row).
    pub fn row(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let w = self.row(0);
        Partition { parts: (0..w).map(|j| self.parts.iter().filter(|&&p| p > j).count()).collect() }
    }

    /// Boxes `(i, j)` with row `i` and column `j < λ_i`, 0-indexed.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
    }

    /// All partitions of `n` in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Ordered `r`-tuple of partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionTuple {
    pub parts: Vec<Partition>,
}

impl PartitionTuple {
    pub fn new(parts: Vec<Partition>) -> Self {
        assert!(!parts.is_empty(), "tuple length must be at least 1");
        PartitionTuple { parts }
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|p| p.size()).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.size()).collect()
    }
}

impl std::fmt::Display for PartitionTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", s.join(" "))
    }
}

/// Every ordered `r`-tuple of partitions of total size `n`, each once.
pub fn enumerate_tuples(r: usize, n: usize) -> Vec<PartitionTuple> {
    assert!(r >= 1);
    let tables: Vec<Vec<Partition>> = (0..=n).map(Partition::all).collect();
    let mut out = Vec::new();
    fn rec(r: usize, left: usize, tables: &[Vec<Partition>], cur: &mut Vec<Partition>, out: &mut Vec<PartitionTuple>) {
        if cur.len() + 1 == r {
            for p in &tables[left] {
                cur.push(p.clone());
                out.push(PartitionTuple { parts: cur.clone() });
                cur.pop();
            }
            return;
        }
        for k in 0..=left {
            for p in &tables[k] {
                cur.push(p.clone());
                rec(r, left - k, tables, cur, out);
                cur.pop();
            }
        }
    }
    rec(r, n, &tables, &mut Vec::new(), &mut out);
    out
}

/// `Q_λ = Σ t₁^i t₂^j` over boxes.
pub fn box_character(lambda: &Partition, r: usize) -> Character {
    Character::from_terms(lambda.boxes().map(|(i, j)| (Weight::t_monomial(r, i as i64, j as i64), 1)))
}

/// Sparse Laurent polynomial in `t₁, t₂` used for the Q-form expansion.
type TPoly = HashMap<(i64, i64), i64>;

fn tpoly_boxes(lambda: &Partition, sign: i64) -> TPoly {
    let mut p = TPoly::new();
    for (i, j) in lambda.boxes() {
        *p.entry((sign * i as i64, sign * j as i64)).or_insert(0) += 1;
    }
    p
}

fn tpoly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    let mut p = TPoly::new();
    for (&(x, y), &m) in a {
        for (&(u, v), &n) in b {
            *p.entry((x + u, y + v)).or_insert(0) += m * n;
        }
    }
    p
}

/// Pair character as `(t₁-exp, t₂-exp, multiplicity)` triples, sorted.
///
/// `N_{λμ} = Q_μ + Q̄_λ t₁⁻¹t₂⁻¹ − Q̄_λ Q_μ (1−t₁)(1−t₂) t₁⁻¹t₂⁻¹`.
pub fn pair_terms(lambda: &Partition, mu: &Partition) -> Vec<(i64, i64, i64)> {
    let qmu = tpoly_boxes(mu, 1);
    let qbar = tpoly_boxes(lambda, -1);
    let mut acc = TPoly::new();
    for (&k, &m) in &qmu {
        *acc.entry(k).or_insert(0) += m;
    }
    for (&(x, y), &m) in &qbar {
        *acc.entry((x - 1, y - 1)).or_insert(0) += m;
    }
    // (1−t₁)(1−t₂)t₁⁻¹t₂⁻¹ = t₁⁻¹t₂⁻¹ − t₂⁻¹ − t₁⁻¹ + 1
    let kernel: TPoly = [((-1, -1), 1), ((0, -1), -1), ((-1, 0), -1), ((0, 0), 1)].into_iter().collect();
    for (k, m) in tpoly_mul(&tpoly_mul(&qbar, &qmu), &kernel) {
        *acc.entry(k).or_insert(0) -= m;
    }
    let mut out: Vec<(i64, i64, i64)> = acc.into_iter().filter(|&(_, m)| m != 0).map(|((x, y), m)| (x, y, m)).collect();
    out.sort_unstable();
    out
}

type PairMemo = RwLock<HashMap<(Partition, Partition), Arc<Vec<(i64, i64, i64)>>>>;

fn pair_memo() -> &'static PairMemo {
    static MEMO: OnceLock<PairMemo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized [`pair_terms`]; safe under concurrent use.
pub fn pair_terms_cached(lambda: &Partition, mu: &Partition) -> Arc<Vec<(i64, i64, i64)>> {
    let key = (lambda.clone(), mu.clone());
    if let Some(v) = pair_memo().read().unwrap().get(&key) {
        return v.clone();
    }
    let v = Arc::new(pair_terms(lambda, mu));
    pair_memo().write().unwrap().insert(key, v.clone());
    v
}

pub fn pair_character(lambda: &Partition, mu: &Partition, r: usize) -> Character {
    Character::from_terms(pair_terms_cached(lambda, mu).iter().map(|&(x, y, m)| (Weight::t_monomial(r, x, y), m)))
}

/// One term `t₁^x t₂^y · e_j/e_i` of multiplicity `mult` in a tangent character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TangentTerm {
    pub x: i64,
    pub y: i64,
    pub i: usize,
    pub j: usize,
    pub mult: i64,
}

/// Flattened `Σ_{i,j} (e_j/e_i) N_{λ_i λ_j}`.
pub fn tangent_terms(p: &PartitionTuple) -> Vec<TangentTerm> {
    let r = p.rank();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            for &(x, y, mult) in pair_terms_cached(&p.parts[i], &p.parts[j]).iter() {
                out.push(TangentTerm { x, y, i, j, mult });
            }
        }
    }
    out
}

pub fn tangent_weight(r: usize, t: &TangentTerm) -> Weight {
    let mut w = Weight::e_ratio(r, t.i, t.j);
    w.t = [t.x, t.y];
    w
}

pub fn tangent_character(r: usize, p: &PartitionTuple) -> Character {
    assert_eq!(p.rank(), r);
    Character::from_terms(tangent_terms(p).iter().map(|t| (tangent_weight(r, t), t.mult)))
}

/// Arm `λ_i − j − 1` of box `(i, j)` relative to `λ`; may be negative.
pub fn arm(lambda: &Partition, i: usize, j: usize) -> i64 {
    lambda.row(i) as i64 - j as i64 - 1
}

/// Leg `λ'_j − i − 1` of box `(i, j)` relative to `λ`; may be negative.
pub fn leg(lambda: &Partition, i: usize, j: usize) -> i64 {
    let lt = lambda.transpose();
    lt.row(j) as i64 - i as i64 - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_counts() {
        assert_eq!(enumerate_tuples(1, 0).len(), 1);
        assert_eq!(enumerate_tuples(2, 2).len(), 5);
        assert_eq!(enumerate_tuples(3, 4).len(), 51);
    }

    #[test]
    fn box_examples() {
        let l = Partition::new(vec![2, 1]);
        let c = box_character(&l, 1);
        assert_eq!(c.len(), 3);
        assert_eq!(c.multiplicity(&Weight::t_monomial(1, 1, 0)), 1);
        assert_eq!(c.multiplicity(&Weight::t_monomial(1, 0, 1)), 1);
    }

    #[test]
    fn pair_examples() {
        let e = Partition::empty();
        let b = Partition::new(vec![1]);
        assert!(pair_character(&e, &e, 1).is_empty());
        assert_eq!(pair_terms(&b, &b), vec![(-1, 0, 1), (0, -1, 1)]);
        assert_eq!(pair_terms(&b, &e), vec![(-1, -1, 1)]);
        assert_eq!(pair_terms(&e, &b), vec![(0, 0, 1)]);
    }

    #[test]
    fn tangent_r2_box() {
        let p = PartitionTuple::new(vec![Partition::new(vec![1]), Partition::empty()]);
        let c = tangent_character(2, &p);
        assert_eq!(c.rank(), 4);
        let mut w = Weight::e_ratio(2, 0, 1);
        w.t = [-1, -1];
        assert_eq!(c.multiplicity(&w), 1);
        assert_eq!(c.multiplicity(&Weight::e_ratio(2, 1, 0)), 1);
    }
}
