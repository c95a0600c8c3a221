use super::ring::{Field, Ring};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;


/// Sentinel for "known to all orders".
pub const EXACT: i64 = 1 << 60;

fn sat(x: i64) -> i64 {
    x.min(EXACT)
}

/// Truncated Laurent series in `u = s − 1`.
///
/// Coefficients of `u^k` for `k < lo` are known to vanish, coefficients on
/// `[lo, hi]` are exact, and nothing is known above `hi`. `coeffs[k]` is the
/// coefficient of `u^{lo+k}`; entries past the end of `coeffs` inside the
/// window are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ULaurentSeries<C> {
    lo: i64,
    hi: i64,
    coeffs: Vec<C>,
}

impl<C: Ring> ULaurentSeries<C> {
    pub fn new(lo: i64, hi: i64, mut coeffs: Vec<C>) -> Self {
        if lo >= EXACT {
            return Self::exact_zero();
        }
        let hi = sat(hi);
        if hi < lo {
            coeffs.clear();
        } else if hi < EXACT {
            coeffs.truncate((hi - lo + 1) as usize);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ULaurentSeries { lo, hi, coeffs }
    }

    pub fn exact_zero() -> Self {
        ULaurentSeries { lo: EXACT, hi: EXACT, coeffs: Vec::new() }
    }

    pub fn exact_polynomial(lo: i64, coeffs: Vec<C>) -> Self {
        Self::new(lo, EXACT, coeffs)
    }

    pub fn constant(c: C, hi: i64) -> Self {
        Self::new(0, hi, vec![c])
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Coefficient of `u^k`; `None` above the window.
    pub fn coeff(&self, k: i64) -> Option<C> {
        if k > self.hi {
            return None;
        }
        if k < self.lo {
            return Some(C::zero());
        }
        Some(self.coeffs.get((k - self.lo) as usize).cloned().unwrap_or_else(C::zero))
    }

    pub fn stored(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs.iter().enumerate().map(move |(k, c)| (self.lo + k as i64, c))
    }

    pub fn truncate(&self, hi: i64) -> Self {
        Self::new(self.lo, self.hi.min(hi), self.coeffs.clone())
    }

    /// Declares a lower (weaker) valuation bound `lo ≤ self.lo`.
    pub fn with_lo(&self, lo: i64) -> Self {
        if self.lo >= EXACT {
            return Self::new(lo, self.hi, Vec::new());
        }
        assert!(lo <= self.lo);
        let mut c = vec![C::zero(); (self.lo - lo) as usize];
        c.extend(self.coeffs.iter().cloned());
        Self::new(lo, self.hi, c)
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.lo >= EXACT {
            return self.clone();
        }
        Self::new(self.lo + k, sat(self.hi + k), self.coeffs.clone())
    }

    pub fn map<D: Ring, F: Fn(&C) -> D>(&self, f: F) -> ULaurentSeries<D> {
        ULaurentSeries::new(self.lo, self.hi, self.coeffs.iter().map(f).collect())
    }

    /// True when every coefficient of a negative power inside the window
    /// vanishes.
    pub fn principal_part_vanishes(&self) -> bool {
        self.stored().all(|(k, c)| k >= 0 || c.is_zero())
    }

    /// First nonzero coefficient index inside the window.
    pub fn valuation(&self) -> Option<i64> {
        self.stored().find(|(_, c)| !c.is_zero()).map(|(k, _)| k)
    }

    /// Coefficientwise equality on the common window.
    pub fn agrees_with(&self, other: &Self) -> Option<i64>
    where
        C: PartialEq,
    {
        let lo = self.lo.min(other.lo);
        let hi = self.hi.min(other.hi);
        let top = hi.min(lo + (self.coeffs.len() + other.coeffs.len()) as i64 + (self.lo - lo).abs() + (other.lo - lo).abs());
        for k in lo..=top {
            let a = self.coeff(k).unwrap();
            let b = other.coeff(k).unwrap();
            if a != b {
                return Some(k);
            }
        }
        None
    }

    /// `(1+u)^a` truncated to `[0, hi]`.
    pub fn binomial(a: i64, hi: i64) -> Self {
        let a_big = BigRational::from_integer(BigInt::from(a));
        let mut c = Vec::new();
        let mut cur = BigRational::one();
        let top = if a >= 0 { hi.min(a) } else { hi };
        for k in 0..=top.max(0) {
            if k > 0 {
                cur = cur * (&a_big - BigRational::from_integer(BigInt::from(k - 1)))
                    / BigRational::from_integer(BigInt::from(k));
            }
            c.push(C::from_rational(&cur));
        }
        if hi < 0 {
            c.clear();
        }
        Self::new(0, hi, c)
    }
}

impl<C: Field> ULaurentSeries<C> {
    /// Inverse, starting from the first nonzero coefficient in the window.
    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::NotInvertible("series vanishes on its window".into()))?;
        if self.hi >= EXACT && self.coeffs.len() as i64 == v - self.lo + 1 {
            // monomial
            let c = self.coeff(v).unwrap().inv().ok_or(Error::NotInvertible("leading coefficient".into()))?;
            return Ok(Self::new(-v, EXACT, vec![c]));
        }
        let rel = self.hi - v;
        let lead = self.coeff(v).unwrap();
        let li = lead.inv().ok_or(Error::NotInvertible("leading coefficient".into()))?;
        let f: Vec<C> = (0..=rel).map(|k| self.coeff(v + k).unwrap().mul(&li)).collect();
        let mut g: Vec<C> = vec![C::one()];
        for k in 1..=rel as usize {
            let mut acc = C::zero();
            for j in 1..=k {
                if !f[j].is_zero() {
                    acc = acc.add(&f[j].mul(&g[k - j]));
                }
            }
            g.push(acc.neg());
        }
        let g: Vec<C> = g.iter().map(|c| c.mul(&li)).collect();
        Ok(Self::new(-v, -v + rel, g))
    }
}

impl<C: Ring> Ring for ULaurentSeries<C> {
    fn zero() -> Self {
        Self::exact_zero()
    }
    fn one() -> Self {
        Self::new(0, EXACT, vec![C::one()])
    }
    fn is_zero(&self) -> bool {
        self.lo >= EXACT || (self.hi >= EXACT && self.coeffs.iter().all(|c| c.is_zero()))
    }
    fn add(&self, other: &Self) -> Self {
        if self.lo >= EXACT {
            return other.truncate(self.hi);
        }
        if other.lo >= EXACT {
            return self.truncate(other.hi);
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi.min(other.hi);
        let top = (self.lo + self.coeffs.len() as i64).max(other.lo + other.coeffs.len() as i64) - 1;
        let top = top.min(hi);
        let mut c: Vec<C> = Vec::with_capacity((top - lo + 1).max(0) as usize);
        for k in lo..=top {
            let a = self.coeffs.get((k - self.lo) as usize).filter(|_| k >= self.lo);
            let b = other.coeffs.get((k - other.lo) as usize).filter(|_| k >= other.lo);
            c.push(match (a, b) {
                (Some(x), Some(y)) => x.add(y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => C::zero(),
            });
        }
        Self::new(lo, hi, c)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.lo >= EXACT || other.lo >= EXACT {
            return Self::exact_zero();
        }
        let lo = self.lo + other.lo;
        let hi = sat(self.lo + other.hi).min(sat(other.lo + self.hi));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(lo, hi, Vec::new());
        }
        let top = (lo + (self.coeffs.len() + other.coeffs.len()) as i64 - 2).min(hi);
        let n = (top - lo + 1).max(0) as usize;
        let mut c = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= n {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(lo, hi, c)
    }
    fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }
    fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::exact_zero();
        }
        self.map(|x| x.scale(c))
    }
    fn from_rational(c: &BigRational) -> Self {
        Self::new(0, EXACT, vec![C::from_rational(c)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational as Q;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn product_window_contract() {
        let f = ULaurentSeries::new(-2, 3, vec![q(1), q(2), q(3)]);
        let g = ULaurentSeries::new(1, 2, vec![q(5)]);
        let p = f.mul(&g);
        assert_eq!(p.window(), (-1, 0));
        assert_eq!(p.coeff(-1), Some(q(5)));
        assert_eq!(p.coeff(0), Some(q(10)));
        assert_eq!(p.coeff(1), None);
    }

    #[test]
    fn inverse_roundtrip() {
        // u − u² + u³ on [1,4] inverts to u^{-1}(1 + u + ...)
        let f = ULaurentSeries::new(1, 4, vec![q(1), q(-1), q(1), q(-1)]);
        let g = f.inverse().unwrap();
        assert_eq!(g.window(), (-1, 2));
        let p = f.mul(&g);
        assert_eq!(p.coeff(0), Some(q(1)));
        assert_eq!(p.coeff(1), Some(q(0)));
        assert_eq!(p.coeff(2), Some(q(0)));
    }

    #[test]
    fn binomial_series() {
        let b: ULaurentSeries<Q> = ULaurentSeries::binomial(-2, 3);
        assert_eq!(b.coeff(1), Some(q(-2)));
        assert_eq!(b.coeff(2), Some(q(3)));
        assert_eq!(b.coeff(3), Some(q(-4)));
    }
}
