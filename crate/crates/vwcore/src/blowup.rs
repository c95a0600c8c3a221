//! Framed sheaves on the blown-up plane at `e_i = y^{-i}`: the correction
//! character `S_ℓ⃗`, its weight `Υ°_ℓ⃗`, and the blow-up identity for the
//! Nekrasov series.

use crate::algebra::{rat, rint, Character, CycloFrac, FramingImage, Rat, Ring, SubstitutionSpec, Weight, YFraction, YPoly};
use crate::error::Result;
use crate::modular::{eta_bar, quantum_binom, quantum_number, theta_lattice};
use crate::nekrasov::{chi_y_series, nekrasov_series_memo, NekrasovSeries, USeries};
use crate::report::{Divergence, VerificationReport};
use crate::toric::{with_direction, Vec2};
use num_traits::ToPrimitive;
use rayon::prelude::*;

/// `D_ℓ⃗ = (1/2r) Σ_{i<j} (ℓ_i − ℓ_j)²`.
pub fn d_ell(l: &[i64]) -> Rat {
    let r = l.len() as i64;
    let mut s = 0;
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            s += (l[i] - l[j]).pow(2);
        }
    }
    rat(s, 2 * r)
}

/// `ε_i = ℓ_{i−1} − ℓ_i` for `i = 1..r−1`.
pub fn epsilons(l: &[i64]) -> Vec<i64> {
    (1..l.len()).map(|i| l[i - 1] - l[i]).collect()
}

/// Correction character `Σ_{i,j} (e_j/e_i) X_{ij}`, with `t` exponents in
/// the same (dual) convention as the tangent characters.
pub fn s_character(l: &[i64]) -> Character {
    let r = l.len();
    let mut c = Character::zero();
    for i in 0..r {
        for j in 0..r {
            let d = l[i] - l[j];
            let base = Weight::e_ratio(r, i, j);
            if d > 0 {
                for m in 0..d {
                    for n in 0..d - m {
                        let mut w = base.clone();
                        w.t = [m, n];
                        c.add_term(w, 1);
                    }
                }
            } else if d < -1 {
                for m in 0..=(-d - 2) {
                    for n in 0..=(-d - 2 - m) {
                        let mut w = base.clone();
                        w.t = [-m - 1, -n - 1];
                        c.add_term(w, 1);
                    }
                }
            }
        }
    }
    c
}

fn ypoly(p: YPoly) -> YFraction {
    YFraction::from_poly(p)
}

/// `Υ°_ℓ⃗` at `t = 1`, `e_i = y^{-i}`, from the product over `ε`.
pub fn upsilon_closed_form(l: &[i64]) -> YFraction {
    let r = l.len() as i64;
    let eps = epsilons(l);
    if eps.iter().any(|&e| e != 0 && e != 1) {
        return YFraction::zero();
    }
    let mut acc = YFraction::one();
    for (k, &e) in eps.iter().enumerate() {
        if e == 1 {
            acc = acc.mul(&ypoly(quantum_binom(r, k as i64 + 1)));
        }
    }
    for (a, &ea) in eps.iter().enumerate() {
        for (b, &eb) in eps.iter().enumerate().skip(a + 1) {
            if ea * eb == 1 {
                let (i, j) = (a as i64 + 1, b as i64 + 1);
                let num = quantum_number(j).mul(&quantum_number(r - i));
                let den = quantum_number(j - i).mul(&quantum_number(r));
                acc = acc.mul(&YFraction::new(den, num));
            }
        }
    }
    acc
}

/// Standard framing `e_i ↦ Y^{-2i}` along `alpha`.
fn standard_spec(r: usize, alpha: Vec2) -> SubstitutionSpec {
    SubstitutionSpec::raw(alpha, (0..r).map(|i| FramingImage { s: 0, y: -2 * i as i64 }).collect())
}

/// `Υ°_ℓ⃗` as a series in `u` along `alpha`, exact on `[0, hi]`.
pub fn upsilon_series(l: &[i64], alpha: Vec2, hi: i64) -> Result<USeries> {
    let s = s_character(l);
    chi_y_series(s.terms(), &standard_spec(l.len(), alpha), (0, hi))
}

/// `Υ°_ℓ⃗` at `t = 1` by direct substitution into the weight product.
pub fn upsilon_direct(l: &[i64]) -> Result<YFraction> {
    with_direction(l.len(), |alpha| {
        let s = upsilon_series(l, alpha, 0)?;
        Ok(s.coeff(0).unwrap().to_yfraction())
    })
}

/// Vectors with `Σℓ_i = ℓ` and `D_ℓ⃗ ≤ N`, lexicographic.
pub fn enumerate_ell_vectors(r: usize, ell: i64, n: usize) -> Vec<Vec<i64>> {
    let cap = rint(n as i64);
    // |ℓ_i − ℓ_j|² ≤ 2rN bounds every entry around ℓ/r.
    let b = ((2 * r * n) as f64).sqrt().ceil() as i64 + 1;
    let c = ell.div_euclid(r as i64);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(r: usize, ell: i64, lo: i64, hi: i64, cap: &Rat, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() + 1 == r {
            let last = ell - cur.iter().sum::<i64>();
            cur.push(last);
            if d_ell(cur) <= *cap {
                out.push(cur.clone());
            }
            cur.pop();
            return;
        }
        for v in lo..=hi {
            cur.push(v);
            rec(r, ell, lo, hi, cap, cur, out);
            cur.pop();
        }
    }
    rec(r, ell, c - b, c + b + 1, &cap, &mut cur, &mut out);
    out
}

/// Blow-up chart substitutions for `L_i = O(ℓ_i C)`.
pub fn blowup_chart_specs(l: &[i64], alpha: Vec2) -> [SubstitutionSpec; 2] {
    let r = l.len();
    // chart 1: (t₁, t₁⁻¹t₂), O(C) ↦ t₁⁻¹; chart 2: (t₁t₂⁻¹, t₂), O(C) ↦ t₂⁻¹
    let f1 = (0..r).map(|i| FramingImage { s: -l[i] * alpha[0], y: -2 * i as i64 }).collect();
    let f2 = (0..r).map(|i| FramingImage { s: -l[i] * alpha[1], y: -2 * i as i64 }).collect();
    [
        SubstitutionSpec::raw([alpha[0], alpha[1] - alpha[0]], f1),
        SubstitutionSpec::raw([alpha[0] - alpha[1], alpha[1]], f2),
    ]
}

/// `Σ_{ℓ⃗} q^{D_ℓ⃗} Υ°_ℓ⃗ G₁ G₂` through `q^N` as series in `u` along `alpha`.
pub fn blowup_series_along(r: usize, ell: i64, n: usize, alpha: Vec2) -> Result<NekrasovSeries> {
    let cap = rint(n as i64);
    let vectors = enumerate_ell_vectors(r, ell, n);
    let parts: Vec<NekrasovSeries> = vectors
        .par_iter()
        .map(|l| -> Result<NekrasovSeries> {
            let d = d_ell(l);
            let m = (&cap - &d).floor().to_integer().to_usize().unwrap();
            let ups = upsilon_series(l, alpha, 2 * n as i64 + 2)?;
            let [s1, s2] = blowup_chart_specs(l, alpha);
            let g1 = nekrasov_series_memo(r, m, &s1)?;
            let g2 = nekrasov_series_memo(r, m, &s2)?;
            let g = g1.mul(&g2).mul_coeff(&ups);
            Ok(g.shift(&d).truncate(&cap))
        })
        .collect::<Result<_>>()?;
    let mut acc = NekrasovSeries::new(Some(cap));
    for p in parts {
        acc = acc.add(&p);
    }
    Ok(acc)
}

/// `Θ_{A_{r−1},ℓ}/η̄^r · Σ qⁿ χ̂(M(r,n))|_{e_i=y^{-i}}` along `alpha`.
pub fn klt_rhs_along(r: usize, ell: i64, n: usize, alpha: Vec2) -> Result<NekrasovSeries> {
    let th = theta_lattice(r, ell, n).mul(&eta_bar(n).inverse()?.pow_u(r as u32));
    let lifted: NekrasovSeries = th.map(|c| USeries::constant(CycloFrac::from_yfraction(c).expect("Laurent polynomial coefficient"), crate::algebra::EXACT));
    let nek = nekrasov_series_memo(r, n, &standard_spec(r, alpha))?;
    Ok(lifted.mul(&nek))
}

fn compare_u_series(rep: &mut VerificationReport, lhs: &NekrasovSeries, rhs: &NekrasovSeries, n: usize) {
    let mut exps: Vec<Rat> = lhs.terms().map(|(e, _)| e.clone()).chain(rhs.terms().map(|(e, _)| e.clone())).collect();
    exps.sort();
    exps.dedup();
    for e in exps {
        if e > rint(n as i64) {
            continue;
        }
        let a = lhs.coeff(&e).unwrap_or_else(USeries::zero);
        let b = rhs.coeff(&e).unwrap_or_else(USeries::zero);
        let hi = a.hi().min(b.hi());
        let label = format!("q^{} on u^[..{}]", e, hi);
        if hi < 0 {
            rep.push(label, Some(Divergence { q_exponent: e.to_string(), difference: "u^0 outside the common window".into() }));
            continue;
        }
        let d = a.agrees_with(&b).map(|k| Divergence {
            q_exponent: e.to_string(),
            difference: format!("u^{}: {}", k, a.coeff(k).unwrap_or_else(CycloFrac::zero).sub(&b.coeff(k).unwrap_or_else(CycloFrac::zero))),
        });
        rep.push(label, d);
    }
}

/// Blow-up identity at `e_i = y^{-i}`, compared coefficientwise in `u` on
/// the full common window.
pub fn verify_klt(r: usize, ell: i64, n: usize) -> Result<VerificationReport> {
    with_direction(r, |alpha| {
        let lhs = blowup_series_along(r, ell, n, alpha)?;
        let rhs = klt_rhs_along(r, ell, n, alpha)?;
        let mut rep = VerificationReport::new(
            "klt",
            &[("r", r.to_string()), ("ell", ell.to_string()), ("N", n.to_string()), ("direction", format!("{:?}", alpha))],
        );
        compare_u_series(&mut rep, &lhs, &rhs, n);
        Ok(rep)
    })
}

/// Closed form against direct substitution for every `ℓ⃗ ∈ [lo, hi]^r`.
pub fn verify_upsilon_closed_form(r: usize, lo: i64, hi: i64) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("upsilon-closed-form", &[("r", r.to_string()), ("range", format!("[{}, {}]", lo, hi))]);
    let mut vectors = vec![Vec::new()];
    for _ in 0..r {
        vectors = vectors.into_iter().flat_map(|v: Vec<i64>| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    let results: Vec<(Vec<i64>, YFraction, YFraction, i64)> = vectors
        .par_iter()
        .map(|l| Ok((l.clone(), upsilon_closed_form(l), upsilon_direct(l)?, s_character(l).rank())))
        .collect::<Result<_>>()?;
    for (l, a, b, rank) in results {
        let d2 = d_ell(&l) * rint(2 * r as i64);
        rep.push_bool(format!("rank {:?}", l), d2 == rint(rank), || Divergence {
            q_exponent: "-".into(),
            difference: format!("rank {} vs 2rD {}", rank, d2),
        });
        rep.push_bool(format!("{:?}", l), a == b, || Divergence { q_exponent: "-".into(), difference: a.sub(&b).to_string() });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_examples() {
        assert!(s_character(&[0, 0]).is_empty());
        let c = s_character(&[1, 0]);
        assert_eq!(c.rank(), 1);
        assert_eq!(c.multiplicity(&Weight::e_ratio(2, 0, 1)), 1);
        let c = s_character(&[0, 1]);
        assert_eq!(c.multiplicity(&Weight::e_ratio(2, 1, 0)), 1);
        assert_eq!(s_character(&[2, -1, 0]).rank(), (d_ell(&[2, -1, 0]) * rint(6)).to_integer().to_i64().unwrap());
    }

    #[test]
    fn upsilon_examples() {
        assert_eq!(upsilon_closed_form(&[0, 0]), YFraction::one());
        assert_eq!(upsilon_closed_form(&[1, 0]), ypoly(quantum_number(2)));
        assert_eq!(upsilon_direct(&[1, 0]).unwrap(), ypoly(quantum_number(2)));
        assert!(upsilon_closed_form(&[0, 1]).is_zero());
        assert!(upsilon_direct(&[0, 1]).unwrap().is_zero());
    }

    #[test]
    fn ell_enumeration() {
        let v = enumerate_ell_vectors(2, 0, 1);
        assert_eq!(v, vec![vec![-1, 1], vec![0, 0], vec![1, -1]]);
        let v = enumerate_ell_vectors(2, 1, 1);
        assert!(v.contains(&vec![1, 0]) && v.contains(&vec![0, 1]));
        assert!(v.iter().all(|l| d_ell(l) <= rint(1)));
    }

    #[test]
    fn klt_rank_one() {
        assert!(verify_klt(1, 0, 2).unwrap().pass);
    }
}
