//! Universal series `Ā, B̄, Ē_i, Ē_ij` from toric configurations, their
//! normalized forms `A, B, C_ij, C_I`, and the relations they satisfy.
//!
//! Every configuration contributes one linear equation per q-order between
//! `log G_{S,a}` and the logs of the unknowns. The system is overdetermined
//! and solved exactly; any nonzero residual is a hard error.

use crate::algebra::{rat, rint, Rat, Ring, YFraction, YPoly};
use crate::error::{Error, Result};
use crate::linalg;
use crate::modular::{
    delta_sqrt, eta_bar, eta_pow, euler_product, phi_m21_sqrt, quantum_binom, quantum_number, theta_lattice, theta_lattice_dual,
    CycSeries, YSeries,
};
use crate::report::{compare_series, Divergence, VerificationReport};
use crate::toric::{surface_g_series, Divisor, ToricSurface};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Configuration {
    pub label: String,
    pub surface: ToricSurface,
    pub classes: Vec<Divisor>,
    /// `(χ, K², {a_i·K}, {a_i·a_j}_{i≤j})`.
    pub invariants: Vec<Rat>,
}

impl Configuration {
    pub fn new(label: impl Into<String>, surface: ToricSurface, classes: Vec<Divisor>) -> Result<Self> {
        for a in &classes {
            surface.check_divisor(a)?;
        }
        let invariants = invariant_vector(&surface, &classes);
        Ok(Configuration { label: label.into(), surface, classes, invariants })
    }
}

/// Index pairs `(i, j)` with `1 ≤ i ≤ j ≤ r−1`, lexicographic.
pub fn pairs(r: usize) -> Vec<(usize, usize)> {
    (1..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect()
}

pub fn unknown_count(r: usize) -> usize {
    2 + (r - 1) + pairs(r).len()
}

pub fn invariant_vector(s: &ToricSurface, classes: &[Divisor]) -> Vec<Rat> {
    let k = s.canonical_class();
    let mut v = vec![rint(1), rint(s.k_squared())];
    v.extend(classes.iter().map(|a| rint(s.intersection(a, &k))));
    let r = classes.len() + 1;
    v.extend(pairs(r).into_iter().map(|(i, j)| rint(s.intersection(&classes[i - 1], &classes[j - 1]))));
    v
}

/// ℙ² with `a_i = d_i·H` over `d ∈ {−2..2}^{r−1}`, then ℙ¹×ℙ¹ (trivial and
/// with one fiber class) and F₁.
pub fn build_configurations(r: usize) -> Result<Vec<Configuration>> {
    if r < 2 {
        return Err(Error::Unsupported(format!("rank {} has no universal C-series", r)));
    }
    let p2 = ToricSurface::p2();
    let h = Divisor::ray(3, 0);
    let mut grid: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 1..r {
        grid = grid.into_iter().flat_map(|g| (-2..=2).map(move |d| [g.clone(), vec![d]].concat())).collect();
    }
    let mut out = Vec::new();
    for d in grid {
        let classes = d.iter().map(|&x| h.scaled(x)).collect();
        out.push(Configuration::new(format!("P2 d={:?}", d), p2.clone(), classes)?);
    }
    let q = ToricSurface::p1xp1();
    out.push(Configuration::new("P1xP1", q.clone(), vec![Divisor::zero(4); r - 1])?);
    let mut fiber = vec![Divisor::zero(4); r - 1];
    fiber[0] = Divisor::ray(4, 0);
    out.push(Configuration::new("P1xP1 a1=F", q, fiber)?);
    out.push(Configuration::new("F1", ToricSurface::hirzebruch(1), vec![Divisor::zero(4); r - 1])?);
    check_span(r, &out)?;
    Ok(out)
}

pub fn check_span(r: usize, configs: &[Configuration]) -> Result<()> {
    let m: Vec<Vec<Rat>> = configs.iter().map(|c| c.invariants.clone()).collect();
    let needed = unknown_count(r);
    let rank = linalg::rank(&m);
    if rank < needed {
        return Err(Error::SpanDeficient { rank, needed });
    }
    Ok(())
}

pub fn configuration_digest(configs: &[Configuration]) -> String {
    let mut h = Sha256::new();
    for c in configs {
        h.update(format!("{}|{:?}|{:?};", c.label, c.surface.rays(), c.classes));
    }
    hex::encode(h.finalize())
}

/// Extracted constant-term-1 series through `q^N`.
#[derive(Clone, Debug)]
pub struct UniversalSeries {
    pub r: usize,
    pub order: usize,
    pub a_bar: YSeries,
    pub b_bar: YSeries,
    /// `Ē_i` at index `i − 1`.
    pub e: Vec<YSeries>,
    pub e_pair: BTreeMap<(usize, usize), YSeries>,
    pub configurations: usize,
    pub digest: String,
}

fn ypoly(p: YPoly) -> YFraction {
    YFraction::from_poly(p)
}

fn pow_int(f: &YSeries, k: i64) -> Result<YSeries> {
    f.pow(&rint(k))
}

impl UniversalSeries {
    pub fn e_i(&self, i: usize) -> &YSeries {
        &self.e[i - 1]
    }

    pub fn e_ij(&self, i: usize, j: usize) -> &YSeries {
        &self.e_pair[&(i.min(j), i.max(j))]
    }

    /// `C̄_ii = Ē_i Ē_ii`, `C̄_ij = Ē_ij`.
    pub fn c_bar(&self, i: usize, j: usize) -> YSeries {
        if i == j {
            self.e_i(i).mul(self.e_ij(i, i))
        } else {
            self.e_ij(i, j).clone()
        }
    }

    pub fn a(&self) -> YSeries {
        let r = self.r as i64;
        let ym = YPoly::from_terms([(1, rint(1)), (-1, rint(-1))]);
        let sign = if r % 2 == 1 { YPoly::one() } else { YPoly::one().neg() };
        let c = YFraction::new(sign, quantum_number(r).mul(&ym));
        self.a_bar.shift(&rat(-r, 2)).mul_coeff(&c)
    }

    pub fn b(&self) -> YSeries {
        self.b_bar.shift(&rat(self.r as i64, 24))
    }

    pub fn c(&self, i: usize, j: usize) -> YSeries {
        let (i, j) = (i.min(j), i.max(j));
        let r = self.r as i64;
        let (ii, jj) = (i as i64, j as i64);
        if i == j {
            let c = YFraction::new(YPoly::one(), quantum_binom(r, ii));
            self.c_bar(i, i).shift(&rat(-ii * (r - ii), 2 * r)).mul_coeff(&c)
        } else {
            let c = YFraction::new(quantum_number(jj).mul(&quantum_number(r - ii)), quantum_number(jj - ii).mul(&quantum_number(r)));
            self.c_bar(i, j).shift(&rat(-ii * (r - jj), r)).mul_coeff(&c)
        }
    }

    /// `C_I = B Π_{i≤j ∈ I} C_ij`.
    pub fn c_subset(&self, subset: &[usize]) -> YSeries {
        let mut acc = self.b();
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a..] {
                acc = acc.mul(&self.c(i, j));
            }
        }
        acc
    }

    /// `Ā^χ B̄^{K²} Π Ē_i^{a_iK} Π Ē_ij^{a_ia_j}` for a configuration.
    pub fn predict(&self, c: &Configuration) -> Result<YSeries> {
        let v = &c.invariants;
        let int = |x: &Rat| x.to_integer().to_i64().expect("small invariant");
        let mut acc = pow_int(&self.a_bar, int(&v[0]))?.mul(&pow_int(&self.b_bar, int(&v[1]))?);
        for i in 1..self.r {
            acc = acc.mul(&pow_int(self.e_i(i), int(&v[1 + i]))?);
        }
        for (k, (i, j)) in pairs(self.r).into_iter().enumerate() {
            acc = acc.mul(&pow_int(self.e_ij(i, j), int(&v[self.r + 1 + k]))?);
        }
        Ok(acc)
    }

    /// Named constant-term-1 series, for export.
    pub fn named(&self) -> Vec<(String, &YSeries)> {
        let mut out = vec![("Abar".to_string(), &self.a_bar), ("Bbar".to_string(), &self.b_bar)];
        for (k, e) in self.e.iter().enumerate() {
            out.push((format!("Ebar{}", k + 1), e));
        }
        for ((i, j), e) in &self.e_pair {
            out.push((format!("Ebar{}{}", i, j), e));
        }
        out
    }

    pub fn export(&self) -> ExportedSeries {
        ExportedSeries {
            r: self.r,
            order: self.order,
            configurations: self.configurations,
            configuration_digest: self.digest.clone(),
            series: self
                .named()
                .into_iter()
                .map(|(n, s)| (n, s.terms().map(|(e, c)| (e.to_string(), c.to_string())).collect()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportedSeries {
    pub r: usize,
    pub order: usize,
    pub configurations: usize,
    pub configuration_digest: String,
    /// name → list of (q-exponent, coefficient).
    pub series: BTreeMap<String, Vec<(String, String)>>,
}

pub fn extract(r: usize, n: usize) -> Result<UniversalSeries> {
    extract_with(r, n, &build_configurations(r)?)
}

pub fn extract_with(r: usize, n: usize, configs: &[Configuration]) -> Result<UniversalSeries> {
    check_span(r, configs)?;
    let logs: Vec<YSeries> = configs
        .par_iter()
        .map(|c| surface_g_series(&c.surface, &c.classes, r, n)?.log())
        .collect::<Result<_>>()?;
    let m: Vec<Vec<Rat>> = configs.iter().map(|c| c.invariants.clone()).collect();
    let sol = linalg::solve(&m, logs)?;
    // Truncated series: zero means no terms through the known order.
    if let Some(bad) = sol.residual.iter().find(|c| !c.is_empty()) {
        return Err(Error::ResidualNonzero(format!("first nonzero residual entry: {}", series_head(bad))));
    }
    let mut x = sol.x.into_iter().map(|l| l.exp());
    let a_bar = x.next().unwrap()?;
    let b_bar = x.next().unwrap()?;
    let e = (1..r).map(|_| x.next().unwrap()).collect::<Result<Vec<_>>>()?;
    let mut e_pair = BTreeMap::new();
    for p in pairs(r) {
        e_pair.insert(p, x.next().unwrap()?);
    }
    Ok(UniversalSeries { r, order: n, a_bar, b_bar, e, e_pair, configurations: configs.len(), digest: configuration_digest(configs) })
}

fn series_head(s: &YSeries) -> String {
    s.leading().map_or("0".into(), |(e, c)| format!("q^{}: {}", e, c))
}

fn cap(s: &YSeries, n: usize) -> YSeries {
    s.truncate(&rint(n as i64))
}

/// Order check shared by the relation reports: both sides must be known
/// through `q^N`.
fn compare_through(rep: &mut VerificationReport, label: String, lhs: &YSeries, rhs: &YSeries, n: usize) {
    let need = rint(n as i64);
    let known = |s: &YSeries| s.order().map_or(true, |o| *o >= need);
    if !known(lhs) || !known(rhs) {
        rep.push(label, Some(Divergence { q_exponent: n.to_string(), difference: "series not known through the requested order".into() }));
        return;
    }
    compare_series(rep, label, &cap(lhs, n), &cap(rhs, n));
}

/// `Ā = Π (1−q^{rn})^{−10} (1−y^r q^{rn})^{−1} (1−y^{−r} q^{rn})^{−1}`, and
/// the assembled `A` against `(−1)^{r−1} (φ₋₂,₁(q^r,y^r) Δ(q^r))^{−1/2}`.
pub fn verify_a_closed_form(u: &UniversalSeries, n: usize) -> Result<VerificationReport> {
    let r = u.r as i64;
    let mut rep = VerificationReport::new("a-formula", &[("r", r.to_string()), ("N", n.to_string())]);
    let closed = euler_product(&[(r, 0, -10), (r, 2 * r, -1), (r, -2 * r, -1)], n);
    compare_through(&mut rep, "Abar product form".into(), &u.a_bar, &closed, n);
    // The square roots are taken at q and y, then q ↦ q^r, Y ↦ Y^r.
    let m = n / u.r + 1;
    let root = phi_m21_sqrt(m).mul(&delta_sqrt(m));
    let root = root.substitute_power(&rint(r)).map(|c| ypoly(c.as_poly().expect("polynomial coefficients").substitute_power(r)));
    let mut a = root.inverse()?;
    if r % 2 == 0 {
        a = a.neg();
    }
    compare_through(&mut rep, "A against the Jacobi form".into(), &u.a().shift(&rat(r, 2)), &a.shift(&rat(r, 2)), n);
    Ok(rep)
}

/// `Ē_{r−i} = Ē_i` and `Ē_{r−j,r−i} = Ē_ij`.
pub fn verify_symmetry_relations(u: &UniversalSeries, n: usize) -> VerificationReport {
    let r = u.r;
    let mut rep = VerificationReport::new("symmetry-relations", &[("r", r.to_string()), ("N", n.to_string())]);
    for i in 1..r {
        compare_through(&mut rep, format!("E{} = E{}", r - i, i), u.e_i(r - i), u.e_i(i), n);
    }
    for (i, j) in pairs(r) {
        compare_through(&mut rep, format!("E{}{} = E{}{}", r - j, r - i, i, j), u.e_ij(r - j, r - i), u.e_ij(i, j), n);
    }
    rep
}

/// Subsets of `[r−1]`, each sorted, in binary-counter order.
pub fn subsets(r: usize) -> Vec<Vec<usize>> {
    (0u32..1 << (r - 1)).map(|mask| (1..r).filter(|&i| mask & (1 << (i - 1)) != 0).collect()).collect()
}

/// `Σ_{‖I‖ ≡ k} C_I^{-1}` for every residue `k` mod `r`.
pub fn congruence_sums(u: &UniversalSeries) -> Result<Vec<YSeries>> {
    let r = u.r;
    let mut sums: Vec<Option<YSeries>> = vec![None; r];
    for s in subsets(r) {
        let k = s.iter().sum::<usize>() % r;
        let inv = u.c_subset(&s).inverse()?;
        sums[k] = Some(match sums[k].take() {
            Some(acc) => acc.add(&inv),
            None => inv,
        });
    }
    Ok(sums.into_iter().map(|s| s.unwrap_or_else(YSeries::exact_zero)).collect())
}

/// Blow-up relations in the congruence form for `ℓ ≤ ⌊r/2⌋` through
/// `q^{n}`, and in the `ε_r` form through `q^{n_eps}`.
pub fn verify_blowup_relations(u: &UniversalSeries, n: usize, n_eps: usize) -> Result<VerificationReport> {
    let r = u.r;
    let mut rep = VerificationReport::new("blowup-relations", &[("r", r.to_string()), ("N", n.to_string()), ("N_eps", n_eps.to_string())]);
    let sums = congruence_sums(u)?;
    let eta_inv = eta_pow(r as i64, n + 1).inverse()?;
    for ell in 0..=r / 2 {
        let rhs = theta_lattice(r, ell as i64, n + 1).mul(&eta_inv);
        compare_through(&mut rep, format!("congruence l={}", ell), &sums[ell], &rhs, n);
    }
    let eta_inv = eta_pow(r as i64, n_eps + 1).inverse()?;
    let cap_eps = rint(n_eps as i64);
    for ell in 0..=r / 2 {
        let mut lhs = CycSeries::zero(r as u32, cap_eps.clone());
        let mut poly = true;
        for (k, s) in sums.iter().enumerate() {
            match CycSeries::from_series(r as u32, &cap(s, n_eps), (ell * k) as i64) {
                Some(c) => lhs = lhs.add(&c),
                None => poly = false,
            }
        }
        let label = format!("eps-form l={}", ell);
        if !poly {
            rep.push(label, Some(Divergence { q_exponent: "-".into(), difference: "congruence sum has non-polynomial coefficients".into() }));
            continue;
        }
        let rhs = theta_lattice_dual(r, ell as i64, n_eps + 1).mul_series(&eta_inv).expect("polynomial coefficients");
        let mut rhs_cut = CycSeries::zero(r as u32, cap_eps.clone());
        for ((e, k), c) in &rhs.terms {
            rhs_cut.add_term(e.clone(), *k, c.clone());
        }
        let d = if rhs.order < cap_eps || lhs.order < cap_eps {
            Some(Divergence { q_exponent: n_eps.to_string(), difference: "series not known through the requested order".into() })
        } else {
            lhs.first_difference(&rhs_cut).map(|(e, k, c)| Divergence { q_exponent: e.to_string(), difference: format!("Y^{} * {}", k, c) })
        };
        rep.push(label, d);
    }
    Ok(rep)
}

/// Rank-2 closed forms `B̄ = η̄²/Θ_{A₁,0}` and `C̄₁₁ = [2]_y q^{1/4} Θ_{A₁,0}/Θ_{A₁,1}`.
pub fn verify_rank2_closed_forms(u: &UniversalSeries, n: usize) -> Result<VerificationReport> {
    assert_eq!(u.r, 2);
    let mut rep = VerificationReport::new("rank2-closed-forms", &[("N", n.to_string())]);
    let t0 = theta_lattice(2, 0, n + 1);
    let t1 = theta_lattice(2, 1, n + 1);
    let b = eta_bar(n + 1).pow_u(2).mul(&t0.inverse()?);
    compare_through(&mut rep, "Bbar".into(), &u.b_bar, &b, n);
    let c = t0.mul(&t1.inverse()?).shift(&rat(1, 4)).mul_coeff(&ypoly(quantum_number(2)));
    compare_through(&mut rep, "C11bar".into(), &u.c_bar(1, 1), &c, n);
    Ok(rep)
}

/// Universality residual: every configuration reproduced by the extracted
/// series, reported per configuration.
pub fn verify_universality(u: &UniversalSeries, configs: &[Configuration], n: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("universality", &[("r", u.r.to_string()), ("N", n.to_string())]);
    let gs: Vec<YSeries> = configs.par_iter().map(|c| surface_g_series(&c.surface, &c.classes, u.r, n)).collect::<Result<_>>()?;
    for (c, g) in configs.iter().zip(gs) {
        compare_through(&mut rep, c.label.clone(), &u.predict(c)?, &g, n);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank2_span() {
        let c = build_configurations(2).unwrap();
        assert_eq!(unknown_count(2), 4);
        assert_eq!(c[2].invariants, vec![rint(1), rint(9), rint(0), rint(0)]);
        assert_eq!(c[5].invariants, vec![rint(1), rint(8), rint(0), rint(0)]);
        let subset = [c[2].clone(), c[3].clone(), c[4].clone(), c[5].clone()];
        assert!(check_span(2, &subset).is_ok());
        assert!(matches!(check_span(2, &subset[..3]), Err(Error::SpanDeficient { rank: 3, needed: 4 })));
        let dup = [c[2].clone(), c[2].clone(), c[3].clone()];
        assert_eq!(linalg::rank(&dup.iter().map(|c| c.invariants.clone()).collect::<Vec<_>>()), 2);
    }

    #[test]
    fn rank3_span() {
        assert_eq!(unknown_count(3), 7);
        assert!(build_configurations(3).is_ok());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(3), vec![vec![], vec![1], vec![2], vec![1, 2]]);
    }

    #[test]
    fn constant_terms_are_one() {
        let u = extract(2, 1).unwrap();
        for (_, s) in u.named() {
            assert_eq!(s.coeff(&rint(0)), Some(YFraction::one()));
        }
        assert!(u.c_subset(&[]).agrees_with(&u.b()));
    }
}
