//! Chart-level G-series straight from the vertical fixed-point class, as an
//! independent check on the Nekrasov substitution route.
//!
//! At a fixed point with tangent character `V₁ = Σ_{ij} (L_j y^{-j}/L_i y^{-i}) N_{λ_iλ_j}`
//! the summand is `det(Ω₀)^{1/2}/Λ₋₁(Ω₀)` with `Ω₀ = V₁^∨ − y^{-1}V₁` and
//! the square root `det(y^{-1/2}V₁)^{-1}`, which gives
//! `y^{rn} Π_{w∈V₁} (w^{-1} − y^{-1})/(1 − w^{-1})`.
//! Pair characters come from the arm/leg formula, not the box-sum identity
//! used by the engine.

use crate::algebra::{rint, FramingImage, EXACT, QSeries, Ring, SubstitutionSpec, ULaurentSeries, YFraction};
use crate::error::{Error, Result};
use crate::nekrasov::nekrasov_series;
use crate::partitions::{arm, enumerate_tuples, leg, pair_terms, Partition, PartitionTuple};
use crate::report::{Divergence, VerificationReport};
use crate::toric::{with_direction, Vec2};
use rayon::prelude::*;
use std::collections::BTreeMap;

pub type YUSeries = ULaurentSeries<YFraction>;
pub type DirectSeries = QSeries<YUSeries>;

/// `N_{λμ} = Σ_{s∈λ} t₁^{l_μ(s)} t₂^{−a_λ(s)−1} + Σ_{s∈μ} t₁^{−l_λ(s)−1} t₂^{a_μ(s)}`
/// as sorted `(t₁-exp, t₂-exp, multiplicity)` triples.
pub fn arm_leg_pair(lambda: &Partition, mu: &Partition) -> Vec<(i64, i64, i64)> {
    let mut acc: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for (i, j) in lambda.boxes() {
        *acc.entry((leg(mu, i, j), -arm(lambda, i, j) - 1)).or_insert(0) += 1;
    }
    for (i, j) in mu.boxes() {
        *acc.entry((-leg(lambda, i, j) - 1, arm(mu, i, j))).or_insert(0) += 1;
    }
    acc.into_iter().filter(|&(_, m)| m != 0).map(|((a, b), m)| (a, b, m)).collect()
}

/// Chart data: torus characters of the two coordinate weights and of each `L_i`.
#[derive(Clone, Debug)]
pub struct ChartData {
    pub weights: (Vec2, Vec2),
    pub l_chars: Vec<Vec2>,
}

impl ChartData {
    pub fn rank(&self) -> usize {
        self.l_chars.len()
    }

    /// The matching substitution for the Nekrasov route.
    pub fn spec(&self, alpha: Vec2) -> SubstitutionSpec {
        let dot = |m: Vec2| alpha[0] * m[0] + alpha[1] * m[1];
        let framing = self.l_chars.iter().enumerate().map(|(i, &l)| FramingImage { s: dot(l), y: -2 * i as i64 }).collect();
        SubstitutionSpec::raw([dot(self.weights.0), dot(self.weights.1)], framing)
    }
}

/// `V₁` at a fixed point as `(torus character, Y-exponent, multiplicity)`.
fn v1_terms(chart: &ChartData, p: &PartitionTuple) -> Vec<(Vec2, i64, i64)> {
    let (m1, m2) = chart.weights;
    let r = p.rank();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let (li, lj) = (chart.l_chars[i], chart.l_chars[j]);
            for (a, b, mult) in arm_leg_pair(&p.parts[i], &p.parts[j]) {
                let c = [a * m1[0] + b * m2[0] + lj[0] - li[0], a * m1[1] + b * m2[1] + lj[1] - li[1]];
                out.push((c, -2 * (j as i64 - i as i64), mult));
            }
        }
    }
    out
}

/// `V₁` rebuilt from the box-sum pair characters (which involve
/// cancellation) must be a sum of torus weights with positive multiplicities,
/// of rank `2r|n|` with `ℂ*`-fixed part of rank `2|n|`.
pub fn positivity_holds(chart: &ChartData, p: &PartitionTuple) -> bool {
    let (m1, m2) = chart.weights;
    let r = p.rank();
    let mut acc: BTreeMap<(Vec2, i64), i64> = BTreeMap::new();
    for i in 0..r {
        for j in 0..r {
            let (li, lj) = (chart.l_chars[i], chart.l_chars[j]);
            for (a, b, mult) in pair_terms(&p.parts[i], &p.parts[j]) {
                let c = [a * m1[0] + b * m2[0] + lj[0] - li[0], a * m1[1] + b * m2[1] + lj[1] - li[1]];
                *acc.entry((c, -2 * (j as i64 - i as i64))).or_insert(0) += mult;
            }
        }
    }
    let n = p.size() as i64;
    let total: i64 = acc.values().sum();
    let fixed: i64 = acc.iter().filter(|((_, m), _)| *m == 0).map(|(_, v)| v).sum();
    acc.values().all(|&v| v >= 0) && total == 2 * r as i64 * n && fixed == 2 * n
}

fn y_pow(k: i64) -> YFraction {
    YFraction::y_pow(k)
}

/// `(1+u)^{−k} Y^{−m}` on `[0, hi]`.
fn inverse_weight(k: i64, m: i64, hi: i64) -> YUSeries {
    let y = y_pow(-m);
    YUSeries::binomial(-k, hi).map(|c| c.mul(&y))
}

/// Fixed-point summand, exact on `[lo, hi]` of the `u`-window, along `alpha`.
pub fn direct_contribution(chart: &ChartData, p: &PartitionTuple, alpha: Vec2, hi: i64) -> Result<YUSeries> {
    let terms = v1_terms(chart, p);
    let dot = |c: Vec2| alpha[0] * c[0] + alpha[1] * c[1];
    let mut poles = 0;
    for &(c, m, mult) in &terms {
        let k = dot(c);
        if k == 0 && m == 2 {
            return Ok(YUSeries::exact_zero());
        }
        if k == 0 && m == 0 {
            let what = if c == [0, 0] { "weight is trivial" } else { "direction is orthogonal to a weight" };
            return Err(Error::SpecializedWeightTrivial(format!("{} ({:?})", what, c)));
        }
        if m == 0 {
            poles += mult;
        }
    }
    let h = hi + 2 * poles + 2;
    let n = p.size() as i64;
    let r = p.rank() as i64;
    let mut num = YUSeries::constant(y_pow(2 * r * n), EXACT);
    let mut den = YUSeries::one();
    for &(c, m, mult) in &terms {
        let w_inv = inverse_weight(dot(c), m, h);
        let top = w_inv.sub(&YUSeries::constant(y_pow(-2), h));
        let bottom = YUSeries::constant(YFraction::one(), h).sub(&w_inv);
        for _ in 0..mult {
            num = num.mul(&top);
            den = den.mul(&bottom);
        }
    }
    Ok(num.mul(&den.inverse()?).truncate(hi))
}

/// `Σ_{|n|≤N} q^{|n|} Σ_p` summand, with the `q^n` coefficient exact on
/// `u^{≤2(N−n)}`.
pub fn vertical_g_series_direct(chart: &ChartData, n_max: usize, alpha: Vec2) -> Result<DirectSeries> {
    let r = chart.rank();
    let mut out = DirectSeries::new(Some(rint(n_max as i64)));
    out.add_term(rint(0), YUSeries::one());
    for n in 1..=n_max {
        let hi = 2 * (n_max - n) as i64;
        let sum = enumerate_tuples(r, n)
            .par_iter()
            .map(|p| direct_contribution(chart, p, alpha, hi))
            .try_reduce(|| YUSeries::new(-2 * n as i64, hi, Vec::new()), |a, b| Ok(a.add(&b)))?;
        out.add_term(rint(n as i64), sum);
    }
    Ok(out)
}

fn compare_u(rep: &mut VerificationReport, label: &str, lhs: &DirectSeries, rhs: &DirectSeries) {
    for e in 0..=lhs.order().map_or(0, |o| o.to_integer().try_into().unwrap_or(0)) {
        let e = rint(e);
        let a = lhs.coeff(&e).unwrap_or_else(YUSeries::zero);
        let b = rhs.coeff(&e).unwrap_or_else(YUSeries::zero);
        let d = a.agrees_with(&b).map(|k| Divergence {
            q_exponent: e.to_string(),
            difference: format!("u^{}: {}", k, a.coeff(k).unwrap_or_else(YFraction::zero).sub(&b.coeff(k).unwrap_or_else(YFraction::zero))),
        });
        rep.push(format!("{} q^{}", label, e), d);
    }
}

/// The three chart choices used for route equality at rank `r`.
pub fn route_charts(r: usize) -> Vec<(String, ChartData)> {
    let trivial = ChartData { weights: ([1, 0], [0, 1]), l_chars: vec![[0, 0]; r] };
    let shifted = ChartData { weights: ([-1, -1], [1, 0]), l_chars: (0..r as i64).map(|i| [-i, 0]).collect() };
    let mixed = ChartData { weights: ([0, 1], [-1, -1]), l_chars: (0..r as i64).map(|i| [i * (i % 2 * 2 - 1), -i]).collect() };
    vec![("trivial L".into(), trivial), ("L_i = t1^-i".into(), shifted), ("mixed L".into(), mixed)]
}

/// Direct route against the Nekrasov route, plus per-fixed-point positivity.
pub fn verify_route_equality(r: usize, n: usize) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("route-equality", &[("r", r.to_string()), ("N", n.to_string())]);
    for (label, chart) in route_charts(r) {
        let (direct, nek) = with_direction(r, |alpha| {
            let d = vertical_g_series_direct(&chart, n, alpha)?;
            let k = nekrasov_series(r, n, &chart.spec(alpha))?;
            Ok((d, k.map(|s| s.map(|c| c.to_yfraction()))))
        })?;
        compare_u(&mut rep, &label, &direct, &nek);
        let positive = (1..=n).all(|m| enumerate_tuples(r, m).iter().all(|p| positivity_holds(&chart, p)));
        rep.push_bool(format!("{} positivity", label), positive, || Divergence { q_exponent: "-".into(), difference: "block character not effective".into() });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::pair_terms;

    #[test]
    fn box_pair() {
        let b = Partition::new(vec![1]);
        assert_eq!(arm_leg_pair(&b, &b), vec![(-1, 0, 1), (0, -1, 1)]);
    }

    #[test]
    fn arm_leg_matches_box_sums() {
        for a in 0..=3 {
            for b in 0..=3 {
                for l in Partition::all(a) {
                    for m in Partition::all(b) {
                        assert_eq!(arm_leg_pair(&l, &m), pair_terms(&l, &m), "{:?} {:?}", l, m);
                    }
                }
            }
        }
    }

    #[test]
    fn rank_one_constant_term() {
        let chart = ChartData { weights: ([1, 0], [0, 1]), l_chars: vec![[0, 0]] };
        let s = vertical_g_series_direct(&chart, 2, [1, 3]).unwrap();
        assert!(s.coeff(&rint(0)).unwrap().agrees_with(&YUSeries::one()).is_none());
    }
}
