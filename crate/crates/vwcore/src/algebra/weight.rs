use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

/// Monomial `t₁^a t₂^b e₀^{c₀}⋯e_{r−1}^{c_{r−1}} Y^d` for a fixed rank.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Weight {
    pub t: [i64; 2],
    pub e: Vec<i64>,
    pub y: i64,
}

impl Weight {
    pub fn trivial(r: usize) -> Self {
        Weight { t: [0, 0], e: vec![0; r], y: 0 }
    }

    pub fn t_monomial(r: usize, a: i64, b: i64) -> Self {
        Weight { t: [a, b], e: vec![0; r], y: 0 }
    }

    /// `e_j / e_i`.
    pub fn e_ratio(r: usize, i: usize, j: usize) -> Self {
        let mut w = Self::trivial(r);
        w.e[j] += 1;
        w.e[i] -= 1;
        w
    }

    pub fn y_power(r: usize, k: i64) -> Self {
        Weight { t: [0, 0], e: vec![0; r], y: k }
    }

    pub fn rank(&self) -> usize {
        self.e.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.t == [0, 0] && self.y == 0 && self.e.iter().all(|&c| c == 0)
    }

    pub fn mul(&self, o: &Weight) -> Weight {
        assert_eq!(self.e.len(), o.e.len(), "rank mismatch");
        Weight {
            t: [self.t[0] + o.t[0], self.t[1] + o.t[1]],
            e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect(),
            y: self.y + o.y,
        }
    }

    pub fn inv(&self) -> Weight {
        Weight { t: [-self.t[0], -self.t[1]], e: self.e.iter().map(|c| -c).collect(), y: -self.y }
    }

    pub fn pow(&self, k: i64) -> Weight {
        Weight {
            t: [self.t[0] * k, self.t[1] * k],
            e: self.e.iter().map(|c| c * k).collect(),
            y: self.y * k,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (k, name) in [(self.t[0], "t1"), (self.t[1], "t2")] {
            if k != 0 {
                parts.push(if k == 1 { name.to_string() } else { format!("{}^{}", name, k) });
            }
        }
        for (i, &k) in self.e.iter().enumerate() {
            if k != 0 {
                parts.push(if k == 1 { format!("e{}", i) } else { format!("e{}^{}", i, k) });
            }
        }
        if self.y != 0 {
            parts.push(if self.y == 1 { "Y".to_string() } else { format!("Y^{}", self.y) });
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Finite ℤ-combination of weights (a virtual T-character).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Character {
    terms: BTreeMap<Weight, i64>,
}

impl Character {
    pub fn zero() -> Self {
        Character { terms: BTreeMap::new() }
    }

    pub fn from_weight(w: Weight) -> Self {
        let mut c = Self::zero();
        c.add_term(w, 1);
        c
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(it: I) -> Self {
        let mut c = Self::zero();
        for (w, m) in it {
            c.add_term(w, m);
        }
        c
    }

    pub fn add_term(&mut self, w: Weight, m: i64) {
        if m == 0 {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += m;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(m);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, i64)> + '_ {
        self.terms.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn multiplicity(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&m| m > 0)
    }

    pub fn add(&self, o: &Character) -> Character {
        let mut c = self.clone();
        for (w, m) in o.terms() {
            c.add_term(w.clone(), m);
        }
        c
    }

    pub fn neg(&self) -> Character {
        Character { terms: self.terms.iter().map(|(w, &m)| (w.clone(), -m)).collect() }
    }

    pub fn sub(&self, o: &Character) -> Character {
        self.add(&o.neg())
    }

    /// Termwise inversion of weights.
    pub fn dual(&self) -> Character {
        Character { terms: self.terms.iter().map(|(w, &m)| (w.inv(), m)).collect() }
    }

    pub fn mul(&self, o: &Character) -> Character {
        let mut c = Self::zero();
        for (a, m) in self.terms() {
            for (b, n) in o.terms() {
                c.add_term(a.mul(b), m * n);
            }
        }
        c
    }

    pub fn twist(&self, w: &Weight) -> Character {
        Character { terms: self.terms.iter().map(|(v, &m)| (v.mul(w), m)).collect() }
    }

    pub fn contains_trivial(&self) -> bool {
        self.terms.keys().any(|w| w.is_trivial())
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, &m)| if m == 1 { w.to_string() } else { format!("{}*{}", m, w) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
