//! Eta products, weak Jacobi and cusp forms, lattice theta functions and
//! quantum numbers. The variable `Y` stands for `y^{1/2}`.

use crate::algebra::cyclofrac::cyclotomic;
use crate::algebra::{rat, rint, QSeries, Rat, Ring, YFraction, YPoly};
use crate::report::{Divergence, VerificationReport};
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;

pub type YSeries = QSeries<YFraction>;

fn order(n: usize) -> Option<Rat> {
    Some(rint(n as i64))
}

/// `Π_{n≥1} Π_f (1 − Y^{b_f} q^{a_f n})^{e_f}` through `q^N`.
pub fn euler_product(factors: &[(i64, i64, i64)], n: usize) -> YSeries {
    let mut acc = YSeries::one(order(n));
    for &(a, b, e) in factors {
        assert!(a > 0);
        let mut k = 1;
        while a * k <= n as i64 {
            let f = YSeries::from_terms(
                [(rint(0), YFraction::one()), (rint(a * k), YFraction::y_pow(b).neg())],
                order(n),
            );
            let p = if e >= 0 { f.pow_u(e as u32) } else { f.inverse().expect("unit constant term").pow_u((-e) as u32) };
            acc = acc.mul(&p);
            k += 1;
        }
    }
    acc
}

pub fn eta_bar(n: usize) -> YSeries {
    euler_product(&[(1, 0, 1)], n)
}

/// `η^k = q^{k/24} η̄^k`.
pub fn eta_pow(k: i64, n: usize) -> YSeries {
    euler_product(&[(1, 0, k)], n).shift(&rat(k, 24))
}

pub fn delta(n: usize) -> YSeries {
    euler_product(&[(1, 0, 24)], n.saturating_sub(1)).shift(&rint(1))
}

pub fn delta_sqrt(n: usize) -> YSeries {
    euler_product(&[(1, 0, 12)], n).shift(&rat(1, 2)).truncate(&rint(n as i64))
}

fn y_minus_inv() -> YFraction {
    YFraction::from_poly(YPoly::from_terms([(1, rint(1)), (-1, rint(-1))]))
}

pub fn phi_m21(n: usize) -> YSeries {
    let s = y_minus_inv();
    euler_product(&[(1, 2, 2), (1, -2, 2), (1, 0, -4)], n).mul_coeff(&s.mul(&s))
}

pub fn phi_m21_sqrt(n: usize) -> YSeries {
    euler_product(&[(1, 2, 1), (1, -2, 1), (1, 0, -2)], n).mul_coeff(&y_minus_inv())
}

/// `[n]_y = Σ_j Y^{n−1−2j}`.
pub fn quantum_number(n: i64) -> YPoly {
    assert!(n >= 0);
    YPoly::from_terms((0..n).map(|j| (n - 1 - 2 * j, rint(1))))
}

pub fn quantum_binom(n: i64, m: i64) -> YPoly {
    assert!(0 <= m && m <= n);
    let mut num = YPoly::one();
    let mut den = YPoly::one();
    for k in 0..m {
        num = num.mul(&quantum_number(n - k));
        den = den.mul(&quantum_number(k + 1));
    }
    num.div_exact(&den).expect("quantum binomial division is exact")
}

/// Cartan matrix of `A_ρ` and its inverse `min(i,j) − ij/(ρ+1)`.
pub struct LatticeData {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<Rat>>,
    pub glue: Vec<Rat>,
}

impl LatticeData {
    pub fn a(rho: usize) -> Self {
        let r = rho as i64 + 1;
        let gram = (0..rho)
            .map(|i| (0..rho).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
            .collect();
        let inverse = (1..=rho as i64)
            .map(|i| (1..=rho as i64).map(|j| rint(i.min(j)) - rat(i * j, r)).collect())
            .collect();
        let glue = (1..=rho as i64).map(|k| rat(r - k, r)).collect();
        LatticeData { rank: rho, gram, inverse, glue }
    }

    pub fn norm(&self, x: &[Rat]) -> Rat {
        let mut s = rint(0);
        for i in 0..self.rank {
            for j in 0..self.rank {
                if self.gram[i][j] != 0 {
                    s += &x[i] * &x[j] * rint(self.gram[i][j]);
                }
            }
        }
        s
    }

    pub fn dual_apply(&self, v: &[i64]) -> Vec<Rat> {
        (0..self.rank).map(|i| (0..self.rank).map(|j| &self.inverse[i][j] * rint(v[j])).fold(rint(0), |a, b| a + b)).collect()
    }
}

/// Integer points of the box `Π [lo_k, hi_k]`.
fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for k in 0..lo.len() {
        let mut next = Vec::new();
        for p in &out {
            for v in lo[k]..=hi[k] {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn isqrt_ceil(x: i64) -> i64 {
    let mut s = (x as f64).sqrt() as i64;
    while s * s < x {
        s += 1;
    }
    s
}

/// `Θ_{A_{r−1},ℓ}` through `q^N`; `1` for `r = 1`.
pub fn theta_lattice(r: usize, ell: i64, n: usize) -> YSeries {
    assert!(r >= 1);
    if r == 1 {
        return YSeries::one(order(n));
    }
    let lat = LatticeData::a(r - 1);
    let rho = lat.rank;
    let center: Vec<Rat> = lat.glue.iter().map(|g| g * rint(ell)).collect();
    // ⟨x,Mx⟩ = x₁² + Σ (x_i − x_{i+1})² + x_ρ², so x_k² ≤ 2kQ ≤ 2ρN.
    let rad = isqrt_ceil(2 * rho as i64 * n as i64) + 1;
    let lo: Vec<i64> = center.iter().map(|c| c.floor().to_integer().to_i64().unwrap() - rad).collect();
    let hi: Vec<i64> = center.iter().map(|c| c.ceil().to_integer().to_i64().unwrap() + rad).collect();
    let cap = rint(n as i64);
    let mut terms: BTreeMap<Rat, BTreeMap<i64, i64>> = BTreeMap::new();
    for v in box_points(&lo, &hi) {
        let x: Vec<Rat> = v.iter().zip(&center).map(|(a, c)| rint(*a) - c).collect();
        let e = lat.norm(&x) / rint(2);
        if e > cap {
            continue;
        }
        let ysum: Rat = x.iter().fold(rint(0), |a, b| a + b) * rint(2);
        assert!(ysum.is_integer());
        *terms.entry(e).or_default().entry(ysum.to_integer().to_i64().unwrap()).or_insert(0) += 1;
    }
    YSeries::from_terms(
        terms.into_iter().map(|(e, c)| (e, YFraction::from_poly(YPoly::from_terms(c.into_iter().map(|(k, m)| (k, rint(m))))))),
        order(n),
    )
}

// ---------------------------------------------------------------------------
// Cyclotomic coefficients.

/// Element of `ℚ(ε_r)` in the power basis `1, ε, …, ε^{φ(r)−1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CyclotomicNumber {
    pub r: u32,
    pub coeffs: Vec<Rat>,
}

impl CyclotomicNumber {
    fn degree(r: u32) -> usize {
        cyclotomic(r).len() - 1
    }

    pub fn zero(r: u32) -> Self {
        CyclotomicNumber { r, coeffs: vec![rint(0); Self::degree(r)] }
    }

    pub fn from_rational(r: u32, c: &Rat) -> Self {
        let mut z = Self::zero(r);
        z.coeffs[0] = c.clone();
        z
    }

    /// `c·ε^k` reduced modulo `Φ_r`.
    pub fn eps_power(r: u32, k: i64, c: &Rat) -> Self {
        let k = k.mod_floor(&(r as i64)) as usize;
        let phi = cyclotomic(r);
        let d = Self::degree(r);
        let mut v = vec![rint(0); k.max(d - 1) + 1];
        v[k] = c.clone();
        // Φ_r is monic, so long division stays integral.
        for top in (d..v.len()).rev() {
            let lead = v[top].clone();
            if lead.is_zero() {
                continue;
            }
            for (i, p) in phi.iter().enumerate() {
                let idx = top - d + i;
                v[idx] -= &lead * Rat::from_integer(p.clone());
            }
        }
        v.truncate(d);
        CyclotomicNumber { r, coeffs: v }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.r, o.r);
        CyclotomicNumber { r: self.r, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        CyclotomicNumber { r: self.r, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }
}

impl std::fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> =
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| format!("({})e{}^{}", c, self.r, k)).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Series `Σ q^a Y^b c_{a,b}` with `c ∈ ℚ(ε_r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CycSeries {
    pub r: u32,
    pub order: Rat,
    pub terms: BTreeMap<(Rat, i64), CyclotomicNumber>,
}

impl CycSeries {
    pub fn zero(r: u32, order: Rat) -> Self {
        CycSeries { r, order, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, e: Rat, k: i64, c: CyclotomicNumber) {
        if e > self.order {
            return;
        }
        let key = (e, k);
        let v = match self.terms.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    /// `ε^k · f` for a series with Laurent-polynomial coefficients.
    pub fn from_series(r: u32, f: &YSeries, eps: i64) -> Option<Self> {
        let mut out = CycSeries::zero(r, f.order()?.clone());
        for (e, c) in f.terms() {
            for (k, v) in c.as_poly()?.terms() {
                out.add_term(e.clone(), k, CyclotomicNumber::eps_power(r, eps, v));
            }
        }
        Some(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = CycSeries::zero(self.r, self.order.clone().min(o.order.clone()));
        for ((e, k), c) in self.terms.iter().chain(o.terms.iter()) {
            out.add_term(e.clone(), *k, c.clone());
        }
        out
    }

    /// Product with a Laurent-polynomial-coefficient series.
    pub fn mul_series(&self, f: &YSeries) -> Option<Self> {
        let fo = f.order()?.clone();
        let vs = self.terms.keys().next().map(|(e, _)| e.clone());
        let vf = f.valuation().cloned();
        let mut o = self.order.clone().min(fo.clone());
        if let Some(v) = &vs {
            o = o.min(v + &fo);
        }
        if let Some(v) = &vf {
            o = o.min(v + &self.order);
        }
        let mut out = CycSeries::zero(self.r, o);
        for ((e1, k1), c1) in &self.terms {
            for (e2, c2) in f.terms() {
                let e = e1 + e2;
                if e > out.order {
                    continue;
                }
                for (k2, v) in c2.as_poly()?.terms() {
                    out.add_term(e.clone(), k1 + k2, c1.scale(v));
                }
            }
        }
        Some(out)
    }

    pub fn first_difference(&self, o: &Self) -> Option<(Rat, i64, String)> {
        let cap = self.order.clone().min(o.order.clone());
        let neg = CycSeries { r: o.r, order: o.order.clone(), terms: o.terms.iter().map(|(k, c)| (k.clone(), c.scale(&rint(-1)))).collect() };
        let d = self.add(&neg);
        d.terms.iter().find(|((e, _), _)| *e <= cap).map(|((e, k), c)| (e.clone(), *k, c.to_string()))
    }
}

/// `Θ_{A_{r−1}^∨,ℓ}` through `q^N`.
pub fn theta_lattice_dual(r: usize, ell: i64, n: usize) -> CycSeries {
    assert!(r >= 2);
    let lat = LatticeData::a(r - 1);
    let rho = lat.rank;
    // M⁻¹ has smallest eigenvalue > 1/4, so ½⟨v,M⁻¹v⟩ ≤ N forces |v_k|² ≤ 8N.
    let rad = isqrt_ceil(8 * n as i64);
    let lo = vec![-rad; rho];
    let hi = vec![rad; rho];
    let cap = rint(n as i64);
    let mut out = CycSeries::zero(r as u32, cap.clone());
    for v in box_points(&lo, &hi) {
        let w = lat.dual_apply(&v);
        let e: Rat = v.iter().zip(&w).map(|(a, b)| rint(*a) * b).fold(rint(0), |a, b| a + b) / rint(2);
        if e > cap {
            continue;
        }
        let phase = &w[0] * rint(ell * r as i64);
        assert!(phase.is_integer());
        let ysum = w.iter().fold(rint(0), |a, b| a + b) * rint(2);
        assert!(ysum.is_integer());
        out.add_term(
            e,
            ysum.to_integer().to_i64().unwrap(),
            CyclotomicNumber::eps_power(r as u32, phase.to_integer().to_i64().unwrap(), &rint(1)),
        );
    }
    out
}

/// `Σ_ℓ ε_r^{kℓ} Θ_{A_{r−1},ℓ} = Θ_{A_{r−1}^∨,k}` through `q^N`, for every `k`.
pub fn verify_theta_dft(r: usize, n: usize) -> VerificationReport {
    let mut rep = VerificationReport::new("theta-dft", &[("r", r.to_string()), ("N", n.to_string())]);
    let thetas: Vec<YSeries> = (0..r as i64).map(|l| theta_lattice(r, l, n)).collect();
    for k in 0..r as i64 {
        let mut lhs = CycSeries::zero(r as u32, rint(n as i64));
        for (l, t) in thetas.iter().enumerate() {
            lhs = lhs.add(&CycSeries::from_series(r as u32, t, k * l as i64).unwrap());
        }
        let rhs = theta_lattice_dual(r, k, n);
        let d = lhs.first_difference(&rhs).map(|(e, y, c)| Divergence { q_exponent: e.to_string(), difference: format!("Y^{} * {}", y, c) });
        rep.push(format!("k={}", k), d);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ys(terms: &[(Rat, &[(i64, i64)])], n: usize) -> YSeries {
        YSeries::from_terms(
            terms.iter().map(|(e, c)| (e.clone(), YFraction::from_poly(YPoly::from_terms(c.iter().map(|&(k, m)| (k, rint(m))))))),
            order(n),
        )
    }

    #[test]
    fn eta_and_delta() {
        let e = eta_bar(5);
        assert!(e.agrees_with(&ys(&[(rint(0), &[(0, 1)]), (rint(1), &[(0, -1)]), (rint(2), &[(0, -1)]), (rint(5), &[(0, 1)])], 5)));
        let d = delta(4);
        assert!(d.agrees_with(&ys(&[(rint(1), &[(0, 1)]), (rint(2), &[(0, -24)]), (rint(3), &[(0, 252)]), (rint(4), &[(0, -1472)])], 4)));
    }

    #[test]
    fn square_roots() {
        for n in 0..=8 {
            let d = delta_sqrt(n);
            assert!(d.mul(&d).agrees_with(&delta(n)));
            let p = phi_m21_sqrt(n);
            assert!(p.mul(&p).agrees_with(&phi_m21(n)));
        }
        let c = phi_m21(3).coeff(&rint(0)).unwrap();
        assert_eq!(c, y_minus_inv().mul(&y_minus_inv()));
    }

    #[test]
    fn quantum() {
        assert_eq!(quantum_number(1), YPoly::one());
        assert_eq!(quantum_number(2), YPoly::from_terms([(1, rint(1)), (-1, rint(1))]));
        assert_eq!(quantum_binom(2, 1), quantum_number(2));
        assert_eq!(quantum_binom(3, 1), YPoly::from_terms([(2, rint(1)), (0, rint(1)), (-2, rint(1))]));
        let s = YPoly::from_terms([(1, rint(1)), (-1, rint(-1))]);
        for n in 0..=10 {
            assert_eq!(quantum_number(n).mul(&s), YPoly::from_terms([(n, rint(1)), (-n, rint(-1))]));
        }
    }

    #[test]
    fn theta_examples() {
        let t = theta_lattice(2, 0, 4);
        assert!(t.agrees_with(&ys(&[(rint(0), &[(0, 1)]), (rint(1), &[(2, 1), (-2, 1)]), (rint(4), &[(4, 1), (-4, 1)])], 4)));
        let t = theta_lattice(2, 1, 3);
        assert!(t.agrees_with(&ys(&[(rat(1, 4), &[(1, 1), (-1, 1)]), (rat(9, 4), &[(3, 1), (-3, 1)])], 3)));
        let t = theta_lattice(3, 0, 1);
        assert!(t.agrees_with(&ys(&[(rint(0), &[(0, 1)]), (rint(1), &[(2, 2), (-2, 2), (4, 1), (-4, 1)])], 1)));
    }

    #[test]
    fn theta_periodicity_and_reflection() {
        for r in 2..=3usize {
            for l in 0..r as i64 {
                let t = theta_lattice(r, l, 3);
                assert!(t.agrees_with(&theta_lattice(r, l + r as i64, 3)));
                assert!(t.agrees_with(&theta_lattice(r, -l, 3)));
                assert!(t.terms().all(|(_, c)| c.invert_y() == *c));
            }
        }
    }

    #[test]
    fn dft() {
        assert!(verify_theta_dft(2, 4).pass);
        assert!(verify_theta_dft(3, 2).pass);
        assert!(verify_theta_dft(4, 1).pass);
    }

    #[test]
    fn eps_reduction() {
        // ε₃² = −1 − ε₃
        let z = CyclotomicNumber::eps_power(3, 2, &rint(1));
        assert_eq!(z.coeffs, vec![rint(-1), rint(-1)]);
        assert_eq!(CyclotomicNumber::eps_power(2, 1, &rint(1)).coeffs, vec![rint(-1)]);
        assert_eq!(CyclotomicNumber::eps_power(3, 3, &rint(1)).coeffs, vec![rint(1), rint(0)]);
    }
}
