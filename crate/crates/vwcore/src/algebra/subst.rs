use super::ring::Ring;
use super::ulaurent::ULaurentSeries;
use super::weight::Weight;
use super::yfrac::YFraction;
use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Image of one framing parameter: `e_i ↦ s^s · Y^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FramingImage {
    pub s: i64,
    pub y: i64,
}

/// Specialization `t_i ↦ s^{α_i}`, `e_i ↦ s^{m_i} Y^{c_i}`.
///
/// `c_i` is the Y-exponent, so `y^k` corresponds to `c_i = 2k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubstitutionSpec {
    pub alpha: [i64; 2],
    pub framing: Vec<FramingImage>,
}

impl SubstitutionSpec {
    /// Checked constructor. `(α₁, α₂)` must be a nonzero coprime pair.
    pub fn new(alpha: [i64; 2], framing: Vec<FramingImage>) -> Result<Self> {
        if alpha == [0, 0] {
            return Err(Error::InvalidSubstitution("direction (0,0)".into()));
        }
        if alpha[0].gcd(&alpha[1]) != 1 {
            return Err(Error::InvalidSubstitution(format!(
                "direction ({}, {}) is not coprime",
                alpha[0], alpha[1]
            )));
        }
        Ok(SubstitutionSpec { alpha, framing })
    }

    /// Unchecked constructor for derived directions (chart pullbacks need not
    /// be primitive).
    pub fn raw(alpha: [i64; 2], framing: Vec<FramingImage>) -> Self {
        assert!(alpha != [0, 0]);
        SubstitutionSpec { alpha, framing }
    }

    /// `e_i ↦ y^{-i}` with no s-dependence.
    pub fn standard(r: usize, alpha: [i64; 2]) -> Self {
        let framing = (0..r).map(|i| FramingImage { s: 0, y: -2 * i as i64 }).collect();
        SubstitutionSpec { alpha, framing }
    }

    pub fn rank(&self) -> usize {
        self.framing.len()
    }

    /// Default direction `(1, r+2)` and its deterministic resamples.
    pub fn direction_candidate(r: usize, attempt: usize) -> [i64; 2] {
        // Primitive, with slope (r+1+i) + 1/(i+1) strictly increasing in i.
        let i = attempt as i64;
        [i + 1, (i + 1) * (r as i64 + 1 + i) + 1]
    }
}

/// Image of `w` as `(s-exponent, Y-exponent)`.
pub fn weight_eval(w: &Weight, spec: &SubstitutionSpec) -> (i64, i64) {
    assert_eq!(w.rank(), spec.rank(), "rank mismatch");
    let mut a = spec.alpha[0] * w.t[0] + spec.alpha[1] * w.t[1];
    let mut b = w.y;
    for (k, f) in w.e.iter().zip(&spec.framing) {
        a += k * f.s;
        b += k * f.y;
    }
    (a, b)
}

/// Expansion of `1 − (1+u)^{-a} Y^{-b}` on `[lo, hi]`.
pub fn one_minus_inverse_weight_series(
    w: &Weight,
    spec: &SubstitutionSpec,
    window: (i64, i64),
) -> Result<ULaurentSeries<YFraction>> {
    let (a, b) = weight_eval(w, spec);
    if a == 0 && b == 0 {
        return Err(Error::SpecializedWeightTrivial(w.to_string()));
    }
    let (lo, hi) = window;
    let y = YFraction::y_pow(-b);
    let bin: ULaurentSeries<YFraction> = ULaurentSeries::binomial(-a, hi.max(0));
    let c: Vec<YFraction> = bin
        .stored()
        .map(|(k, c)| {
            let t = c.mul(&y).neg();
            if k == 0 {
                t.add(&YFraction::one())
            } else {
                t
            }
        })
        .collect();
    let s = ULaurentSeries::new(0, hi, c);
    Ok(if lo < 0 { s.with_lo(lo) } else { s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn direction_candidates_are_distinct_and_primitive() {
        for r in 1..=4 {
            let c: Vec<[i64; 2]> = (0..16).map(|a| SubstitutionSpec::direction_candidate(r, a)).collect();
            assert_eq!(c[0], [1, r as i64 + 2]);
            for (k, a) in c.iter().enumerate() {
                assert_eq!(a[0].gcd(&a[1]), 1);
                for b in &c[..k] {
                    assert_ne!(a[0] * b[1], a[1] * b[0], "parallel candidates for r={}", r);
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        let spec = SubstitutionSpec::standard(1, [1, 2]);
        assert_eq!(weight_eval(&Weight::t_monomial(1, 1, -1), &spec), (-1, 0));
        let spec = SubstitutionSpec::standard(2, [1, 2]);
        assert_eq!(weight_eval(&Weight::e_ratio(2, 0, 1), &spec), (0, -2));
    }

    #[test]
    fn one_minus_inverse() {
        let spec = SubstitutionSpec::standard(1, [1, 1]);
        let s = one_minus_inverse_weight_series(&Weight::t_monomial(1, 1, 0), &spec, (0, 2)).unwrap();
        let q = |n: i64| YFraction::from_rational(&BigRational::from_integer(n.into()));
        assert_eq!(s.coeff(0), Some(q(0)));
        assert_eq!(s.coeff(1), Some(q(1)));
        assert_eq!(s.coeff(2), Some(q(-1)));
        assert_eq!(s.coeff(3), None);
        let s = one_minus_inverse_weight_series(&Weight::t_monomial(1, 2, 0), &spec, (0, 1)).unwrap();
        assert_eq!(s.coeff(1), Some(q(2)));
        let e = one_minus_inverse_weight_series(&Weight::trivial(1), &spec, (0, 1));
        assert!(matches!(e, Err(Error::SpecializedWeightTrivial(_))));
    }
}
