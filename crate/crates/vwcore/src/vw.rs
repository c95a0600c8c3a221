//! Vertical Vafa–Witten partition function of a surface from Seiberg–Witten
//! data and the universal series:
//!
//! `Z/(y^{1/2} − y^{−1/2})^χ = A^χ B^{K²} Σ_a δ_{c₁, Σ i·a_i} Π SW(a_i) Π_{i≤j} C_ij^{a_i a_j}`.
//!
//! Each tuple is assembled as `Υ_{S,a} q^{σ(a)} Ā^χ B̄^{K²} Π Ē_i^{a_i²} Π Ē_ij^{a_ia_j}`
//! so only constant-term-1 series are raised to powers.

use crate::algebra::{rat, rint, QSeries, Rat, Ring, YFraction, YPoly};
use crate::error::{Error, Result};
use crate::modular::{delta_sqrt, euler_product, eta_bar, phi_m21_sqrt, quantum_binom, quantum_number, theta_lattice, YSeries};
use crate::report::{compare_series, Divergence, VerificationReport};
use crate::universal::{pairs, UniversalSeries};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwClass {
    pub name: String,
    pub vector: Vec<i64>,
    pub sw: i64,
}

/// Surface description. Coordinates are with respect to an integral basis of
/// `H²(S,ℤ)`; `b1` and `torsion`, when present, must be trivial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceInput {
    pub chi: i64,
    #[serde(rename = "K2")]
    pub k2: i64,
    pub gram: Vec<Vec<i64>>,
    #[serde(rename = "K")]
    pub k: Vec<i64>,
    pub classes: Vec<SwClass>,
    pub c1: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<Vec<i64>>,
}

impl SurfaceInput {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: SurfaceInput = serde_json::from_str(text).map_err(|e| Error::Parse(format!("surface file: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                acc += a[i] * g * b[j];
            }
        }
        acc
    }

    /// All problems at once, one per line.
    pub fn validate(&self) -> Result<()> {
        let b = self.rank();
        let mut errs = Vec::new();
        if self.b1.is_some_and(|x| x != 0) {
            errs.push("b1 must be 0 (H_1(S,Z) = 0 is required)".to_string());
        }
        if self.torsion.as_ref().is_some_and(|t| t.iter().any(|&x| x != 1)) {
            errs.push("torsion in H^2(S,Z) is not supported".to_string());
        }
        for (i, row) in self.gram.iter().enumerate() {
            if row.len() != b {
                errs.push(format!("gram row {i} has length {}, expected {b}", row.len()));
            }
        }
        let square = errs.is_empty() || self.gram.iter().all(|r| r.len() == b);
        if square {
            for i in 0..b {
                for j in 0..i {
                    if self.gram[i][j] != self.gram[j][i] {
                        errs.push(format!("gram is not symmetric at ({i},{j})"));
                    }
                }
            }
        }
        let mut check_len = |what: &str, v: &[i64]| {
            if v.len() != b {
                errs.push(format!("{what} has length {}, expected {b}", v.len()));
                false
            } else {
                true
            }
        };
        let k_ok = check_len("K", &self.k);
        check_len("c1", &self.c1);
        let class_ok: Vec<bool> = self.classes.iter().map(|c| check_len(&format!("class {}", c.name), &c.vector)).collect();
        if square && k_ok {
            let kk = self.pairing(&self.k, &self.k);
            if kk != self.k2 {
                errs.push(format!("K.K = {kk} but K2 = {}", self.k2));
            }
            for (c, ok) in self.classes.iter().zip(class_ok) {
                if !ok {
                    continue;
                }
                let (aa, ak) = (self.pairing(&c.vector, &c.vector), self.pairing(&c.vector, &self.k));
                if aa != ak {
                    errs.push(format!("class {}: a.a = {aa} but a.K = {ak}", c.name));
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSurface(errs.join("\n")))
        }
    }
}

/// `1` iff `a ≡ b` coordinate-wise mod `r`.
pub fn delta_check(a: &[i64], b: &[i64], r: usize) -> i64 {
    let r = r as i64;
    a.iter().zip(b).all(|(x, y)| (x - y).rem_euclid(r) == 0) as i64
}

/// `−Σ_{i<j} i(r−j)/r a_ia_j − Σ_i i(r−i)/(2r) a_i²` from the matrix of
/// pairings `g[i−1][j−1] = a_i·a_j`.
pub fn q_form(g: &[Vec<i64>], r: usize) -> Rat {
    let r = r as i64;
    let mut acc = rint(0);
    for i in 1..r {
        acc -= rat(i * (r - i) * g[i as usize - 1][i as usize - 1], 2 * r);
        for j in i + 1..r {
            acc -= rat(i * (r - j) * g[i as usize - 1][j as usize - 1], r);
        }
    }
    acc
}

fn yfrac(p: YPoly) -> YFraction {
    YFraction::from_poly(p)
}

fn fpow(f: &YFraction, k: i64) -> YFraction {
    use crate::algebra::Field;
    f.pow_i(k).expect("nonzero quantum number")
}

/// `((−1)^{r−1}/([r]_y(y^{1/2}−y^{−1/2})))^χ Π binom(r,i)_y^{−a_i²} Π_{i<j} ([j][r−i]/([j−i][r]))^{a_ia_j}`.
pub fn upsilon_surface(g: &[Vec<i64>], r: usize, chi: i64) -> YFraction {
    let r = r as i64;
    let ym = YPoly::from_terms([(1, rint(1)), (-1, rint(-1))]);
    let mut base = YFraction::new(YPoly::one(), quantum_number(r).mul(&ym));
    if r % 2 == 0 {
        base = base.neg();
    }
    let mut acc = fpow(&base, chi);
    for i in 1..r {
        let iu = i as usize - 1;
        acc = acc.mul(&fpow(&yfrac(quantum_binom(r, i)), -g[iu][iu]));
        for j in i + 1..r {
            let f = YFraction::new(quantum_number(j).mul(&quantum_number(r - i)), quantum_number(j - i).mul(&quantum_number(r)));
            acc = acc.mul(&fpow(&f, g[iu][j as usize - 1]));
        }
    }
    acc
}

/// One admissible tuple of class indices with its data.
#[derive(Clone, Debug)]
pub struct TupleTerm {
    pub indices: Vec<usize>,
    pub gram: Vec<Vec<i64>>,
    pub sw: i64,
    /// `q`-shift `−rχ/2 + rK²/24 + Q(a)`.
    pub sigma: Rat,
}

/// Ordered `(r−1)`-tuples passing the divisibility filter with nonzero SW
/// product.
pub fn admissible_tuples(s: &SurfaceInput, r: usize) -> Vec<TupleTerm> {
    let m = s.classes.len();
    let len = r - 1;
    if m == 0 && len > 0 {
        return Vec::new();
    }
    let count = m.pow(len as u32);
    let mut out = Vec::new();
    for mut code in 0..count {
        let mut idx = Vec::with_capacity(len);
        for _ in 0..len {
            idx.push(code % m);
            code /= m;
        }
        let vecs: Vec<&[i64]> = idx.iter().map(|&k| s.classes[k].vector.as_slice()).collect();
        let mut sum = vec![0i64; s.rank()];
        for (i, v) in vecs.iter().enumerate() {
            for (t, x) in sum.iter_mut().zip(v.iter()) {
                *t += (i as i64 + 1) * x;
            }
        }
        if delta_check(&s.c1, &sum, r) == 0 {
            continue;
        }
        let sw: i64 = idx.iter().map(|&k| s.classes[k].sw).product();
        if sw == 0 {
            continue;
        }
        let gram: Vec<Vec<i64>> = vecs.iter().map(|a| vecs.iter().map(|b| s.pairing(a, b)).collect()).collect();
        let ri = r as i64;
        let sigma = rat(-ri * s.chi, 2) + rat(ri * s.k2, 24) + q_form(&gram, r);
        out.push(TupleTerm { indices: idx, gram, sw, sigma });
    }
    out
}

/// Order of the universal series needed for the output through `q^N`.
pub fn required_series_order(s: &SurfaceInput, r: usize, n: usize) -> usize {
    admissible_tuples(s, r)
        .iter()
        .map(|t| (rint(n as i64) - &t.sigma).ceil().to_integer())
        .max()
        .map_or(0, |m| m.try_into().unwrap_or(0usize))
}

fn int_pow(f: &YSeries, k: i64) -> Result<YSeries> {
    f.pow(&rint(k))
}

/// Truncated at `q^N`; `SeriesOrderInsufficient` if some tuple's product is
/// not known that far.
pub fn vertical_partition_function(s: &SurfaceInput, r: usize, n: usize, u: &UniversalSeries) -> Result<YSeries> {
    s.validate()?;
    if u.r != r {
        return Err(Error::Unsupported(format!("series are for rank {}, not {r}", u.r)));
    }
    let cap = rint(n as i64);
    let terms = admissible_tuples(s, r);
    let base = int_pow(&u.a_bar, s.chi)?.mul(&int_pow(&u.b_bar, s.k2)?);
    let parts: Vec<YSeries> = terms
        .par_iter()
        .map(|t| {
            let mut acc = base.clone();
            for i in 1..r {
                acc = acc.mul(&int_pow(u.e_i(i), t.gram[i - 1][i - 1])?);
            }
            for (i, j) in pairs(r) {
                acc = acc.mul(&int_pow(u.e_ij(i, j), t.gram[i - 1][j - 1])?);
            }
            let acc = acc.shift(&t.sigma);
            let have = acc.order().cloned().unwrap_or_else(|| cap.clone());
            if have < cap {
                return Err(Error::SeriesOrderInsufficient(format!(
                    "tuple {:?} known through q^{have}, need q^{n}; extract to order {}",
                    t.indices,
                    required_series_order(s, r, n)
                )));
            }
            let c = upsilon_surface(&t.gram, r, s.chi).scale_int(t.sw);
            Ok(acc.truncate(&cap).mul_coeff(&c))
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(YSeries::zero_to(cap.clone()), |a, b| a.add(&b)))
}

/// Extracts the universal series at the order the surface needs, then
/// assembles.
pub fn vertical_partition_function_auto(s: &SurfaceInput, r: usize, n: usize) -> Result<YSeries> {
    let m = required_series_order(s, r, n);
    let u = crate::universal::extract(r, m.max(1))?;
    vertical_partition_function(s, r, n, &u)
}

/// Rank-2 universal series from closed forms through `q^N`:
/// `Ā` as an eta-type product, `B̄ = η̄²/Θ₀`, `C̄₁₁ = [2]_y q^{1/4}Θ₀/Θ₁`.
/// Only `C̄₁₁ = Ē₁Ē₁₁` enters a surface sum (since `a² = aK`), so it is
/// stored in `Ē₁` with `Ē₁₁ = 1`.
pub fn rank2_closed_form_series(n: usize) -> Result<UniversalSeries> {
    let a_bar = euler_product(&[(2, 0, -10), (2, 4, -1), (2, -4, -1)], n);
    let t0 = theta_lattice(2, 0, n + 1);
    let t1 = theta_lattice(2, 1, n + 1);
    let b_bar = eta_bar(n + 1).pow_u(2).mul(&t0.inverse()?).truncate(&rint(n as i64));
    let c11 = t0.mul(&t1.inverse()?).shift(&rat(1, 4)).mul_coeff(&yfrac(quantum_number(2))).truncate(&rint(n as i64));
    let mut e_pair = BTreeMap::new();
    e_pair.insert((1, 1), YSeries::one(Some(rint(n as i64))));
    Ok(UniversalSeries { r: 2, order: n, a_bar, b_bar, e: vec![c11], e_pair, configurations: 0, digest: "closed-form".into() })
}

fn closed_pieces(p: usize) -> Result<(YSeries, YSeries, YSeries)> {
    // A = −(φ₋₂,₁(q²,y²) Δ(q²))^{−1/2}; square roots at (q, y), then doubled.
    let root = phi_m21_sqrt(p).mul(&delta_sqrt(p));
    let root = root.substitute_power(&rint(2)).map(|c| yfrac(c.as_poly().expect("polynomial coefficients").substitute_power(2)));
    let a = root.inverse()?.neg();
    // B = η²/Θ₀, C₁₁ = Θ₀/Θ₁.
    let t0 = theta_lattice(2, 0, p);
    let t1 = theta_lattice(2, 1, p);
    let b = eta_bar(p).pow_u(2).shift(&rat(1, 12)).mul(&t0.inverse()?);
    let c = t0.mul(&t1.inverse()?);
    Ok((a, b, c))
}

fn signed_pow(f: &YSeries, k: i64) -> Result<YSeries> {
    Ok(if k >= 0 { f.pow_u(k as u32) } else { f.inverse()?.pow_u((-k) as u32) })
}

/// `A^χ B^{K²}(δ_{c₁,0} + δ_{c₁,K}(−1)^χ C₁₁^{K²})` multiplied out from the
/// closed forms, through `q^N`. Assumes the class list is `{0, K}` (or `{0}`
/// when `K = 0`).
pub fn rank2_corollary_closed(s: &SurfaceInput, n: usize) -> Result<YSeries> {
    let shift = s.chi.unsigned_abs() as usize + (s.k2.unsigned_abs() as usize) / 3 + 2;
    let (a, b, c) = closed_pieces(n + shift)?;
    let pref = signed_pow(&a, s.chi)?.mul(&signed_pow(&b, s.k2)?);
    let zero = vec![0; s.rank()];
    let mut bracket = YSeries::exact_zero();
    if delta_check(&s.c1, &zero, 2) == 1 {
        bracket = bracket.add(&YSeries::one(None));
    }
    if s.k.iter().any(|&x| x != 0) && delta_check(&s.c1, &s.k, 2) == 1 {
        let sign = if s.chi % 2 == 0 { 1 } else { -1 };
        bracket = bracket.add(&signed_pow(&c, s.k2)?.mul_coeff(&YFraction::from_i64(sign)));
    }
    let z = pref.mul(&bracket);
    let cap = rint(n as i64);
    if z.order().is_some_and(|o| *o < cap) {
        return Err(Error::SeriesOrderInsufficient(format!("closed-form product known through q^{}", z.order().unwrap())));
    }
    Ok(z.truncate(&cap))
}

/// The minimal-type surface `{0 (SW 1), K (SW (−1)^χ)}` with rank-1 lattice
/// `⟨g⟩` and `K = k` times the generator.
pub fn minimal_surface(chi: i64, g: i64, k: i64, c1: i64) -> SurfaceInput {
    let sign = if chi % 2 == 0 { 1 } else { -1 };
    let mut classes = vec![SwClass { name: "0".into(), vector: vec![0], sw: 1 }];
    if k != 0 {
        classes.push(SwClass { name: "K".into(), vector: vec![k], sw: sign });
    }
    SurfaceInput { chi, k2: g * k * k, gram: vec![vec![g]], k: vec![k], classes, c1: vec![c1], b1: None, torsion: None }
}

/// Assembler with the closed-form rank-2 series against the corollary
/// multiplied out independently.
pub fn verify_rank2_corollary(surfaces: &[(String, SurfaceInput)], n: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("rank2-corollary", &[("N", n.to_string())]);
    for (label, s) in surfaces {
        let m = required_series_order(s, 2, n);
        let u = rank2_closed_form_series(m)?;
        let z = vertical_partition_function(s, 2, n, &u)?;
        let closed = rank2_corollary_closed(s, n)?;
        if z.order() != closed.order() {
            rep.push(label.clone(), Some(Divergence { q_exponent: n.to_string(), difference: "orders differ".into() }));
        } else {
            compare_series(&mut rep, label.clone(), &z, &closed);
        }
    }
    Ok(rep)
}

/// Surfaces used by the rank-2 corollary check.
pub fn corollary_surfaces() -> Vec<(String, SurfaceInput)> {
    vec![
        ("K3-like, c1=0".into(), minimal_surface(2, -2, 0, 0)),
        ("quintic-like, c1=0".into(), minimal_surface(5, 5, 1, 0)),
        ("quintic-like, c1=K".into(), minimal_surface(5, 5, 1, 1)),
        ("even K, c1=0".into(), minimal_surface(2, 2, 2, 0)),
        ("even K, c1=1".into(), minimal_surface(2, 2, 2, 1)),
        ("odd chi even K, c1=0".into(), minimal_surface(3, 2, 2, 0)),
    ]
}

pub fn y_inverted(s: &QSeries<YFraction>) -> QSeries<YFraction> {
    s.map(|c| c.invert_y())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        assert_eq!(delta_check(&[3, 1], &[3, 1], 5), 1);
        assert_eq!(delta_check(&[2, 0], &[0, 0], 2), 1);
        assert_eq!(delta_check(&[1, 0], &[0, 0], 2), 0);
        assert_eq!(delta_check(&[-1], &[1], 2), 1);
    }

    #[test]
    fn q_form_examples() {
        assert_eq!(q_form(&[vec![0, 0], vec![0, 0]], 3), rint(0));
        assert_eq!(q_form(&[vec![-1]], 2), rat(1, 4));
        assert_eq!(q_form(&[vec![0, 1], vec![1, 0]], 3), rat(-1, 3));
    }

    #[test]
    fn upsilon_examples() {
        let ym = YPoly::from_terms([(2, rint(1)), (-2, rint(-1))]);
        assert_eq!(upsilon_surface(&[vec![0]], 2, 1), YFraction::new(YPoly::one().neg(), ym));
        assert_eq!(upsilon_surface(&[vec![0, 0], vec![0, 0]], 3, 0), YFraction::one());
        assert_eq!(upsilon_surface(&[vec![-1]], 2, 0), yfrac(quantum_number(2)));
    }

    #[test]
    fn validation_lists_every_problem() {
        let mut s = minimal_surface(5, 5, 1, 0);
        s.k2 = 4;
        s.classes.push(SwClass { name: "bad".into(), vector: vec![2], sw: 1 });
        s.b1 = Some(2);
        let Err(Error::InvalidSurface(msg)) = s.validate() else { panic!("expected InvalidSurface") };
        assert_eq!(msg.lines().count(), 3, "{msg}");
        assert!(msg.contains("K2") && msg.contains("class bad") && msg.contains("b1"));
    }

    #[test]
    fn json_round_trip() {
        let s = minimal_surface(5, 5, 1, 1);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"K2\":5"));
        assert_eq!(SurfaceInput::from_json(&text).unwrap(), s);
    }

    #[test]
    fn empty_class_list_gives_zero() {
        let mut s = minimal_surface(5, 5, 1, 0);
        s.classes.clear();
        let u = rank2_closed_form_series(2).unwrap();
        assert!(vertical_partition_function(&s, 2, 1, &u).unwrap().is_empty());
    }

    #[test]
    fn delta_filter_selects_classes() {
        let s = minimal_surface(5, 5, 1, 0);
        let t = admissible_tuples(&s, 2);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].indices, vec![0]);
        let s = minimal_surface(2, 2, 2, 0);
        assert_eq!(admissible_tuples(&s, 2).len(), 2);
    }

    #[test]
    fn insufficient_order_is_reported() {
        let s = minimal_surface(5, 5, 1, 1);
        let u = rank2_closed_form_series(2).unwrap();
        assert!(matches!(vertical_partition_function(&s, 2, 3, &u), Err(Error::SeriesOrderInsufficient(_))));
    }
}
