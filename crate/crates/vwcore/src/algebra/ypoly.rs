use super::intpoly::{self, IntPoly};
use super::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

/// Laurent polynomial in Y over ℚ: `Σ coeffs[k]·Y^(lo+k)`.
///
/// Canonical: `coeffs` has nonzero first and last entries; the zero
/// polynomial has empty `coeffs` and `lo == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct YPoly {
    lo: i64,
    coeffs: Vec<BigRational>,
}

impl YPoly {
    pub fn new(lo: i64, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        YPoly { lo: lo + lead as i64, coeffs }
    }

    pub fn monomial(c: BigRational, k: i64) -> Self {
        Self::new(k, vec![c])
    }

    pub fn y_pow(k: i64) -> Self {
        Self::monomial(BigRational::one(), k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> Self {
        let terms: Vec<(i64, BigRational)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (k, c) in terms {
            coeffs[(k - lo) as usize] += c;
        }
        Self::new(lo, coeffs)
    }

    pub fn from_int(lo: i64, p: &[BigInt]) -> Self {
        Self::new(lo, p.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn low(&self) -> i64 {
        self.lo
    }

    /// Highest exponent; `None` for zero.
    pub fn high(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lo + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        if k < self.lo {
            return BigRational::zero();
        }
        self.coeffs
            .get((k - self.lo) as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.lo + k as i64, c))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty() || (self.lo == 0 && self.coeffs.len() == 1)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.coeffs.is_empty() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        YPoly { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    /// Y ↦ Y^{-1}.
    pub fn invert_y(&self) -> Self {
        match self.high() {
            None => self.clone(),
            Some(h) => {
                let mut c = self.coeffs.clone();
                c.reverse();
                YPoly { lo: -h, coeffs: c }
            }
        }
    }

    /// Y ↦ Y^k for k ≠ 0.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0);
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c.clone())))
    }

    pub fn eval(&self, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * y + c;
        }
        let p = pow_rational(y, self.lo);
        acc * p
    }

    /// `self = scale · Y^lo · p` with `p` primitive in ℤ[Y], positive leading
    /// coefficient and nonzero constant term.
    pub fn to_int_parts(&self) -> (BigRational, i64, IntPoly) {
        if self.coeffs.is_empty() {
            return (BigRational::zero(), 0, Vec::new());
        }
        let mut l = BigInt::from(1);
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: IntPoly = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let (cnt, prim) = intpoly::primitive(&ints);
        (BigRational::new(cnt, l), self.lo, prim)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn lowest_coeff(&self) -> Option<&BigRational> {
        self.coeffs.first()
    }

    pub fn dense(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Exact division of Laurent polynomials; `None` if not exact.
    pub fn div_exact(&self, d: &YPoly) -> Option<YPoly> {
        assert!(!d.coeffs.is_empty());
        if self.coeffs.is_empty() {
            return Some(Self::zero());
        }
        let (ca, la, pa) = self.to_int_parts();
        let (cd, ld, pd) = d.to_int_parts();
        let q = intpoly::div_exact(&pa, &pd)?;
        Some(YPoly::from_int(la - ld, &q).scale(&(ca / cd)))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_y()
    }
}

pub fn pow_rational(y: &BigRational, k: i64) -> BigRational {
    let base = if k < 0 { y.recip() } else { y.clone() };
    let mut e = k.unsigned_abs();
    let mut b = base;
    let mut acc = BigRational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

impl Ring for YPoly {
    fn zero() -> Self {
        YPoly { lo: 0, coeffs: Vec::new() }
    }
    fn one() -> Self {
        YPoly { lo: 0, coeffs: vec![BigRational::one()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.high().unwrap().max(other.high().unwrap());
        let mut c = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (k, x) in self.coeffs.iter().enumerate() {
            c[(self.lo - lo) as usize + k] += x;
        }
        for (k, x) in other.coeffs.iter().enumerate() {
            c[(other.lo - lo) as usize + k] += x;
        }
        Self::new(lo, c)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        Self::new(self.lo + other.lo, c)
    }
    fn neg(&self) -> Self {
        YPoly { lo: self.lo, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
    fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        YPoly { lo: self.lo, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
    fn from_rational(c: &BigRational) -> Self {
        Self::monomial(c.clone(), 0)
    }
}

impl std::fmt::Display for YPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = a.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{}", a)?,
                (_, true) => write!(f, "Y^{}", k)?,
                (_, false) => write!(f, "{}*Y^{}", a, k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn arithmetic_and_display() {
        let a = YPoly::from_terms([(-1, r(1)), (1, r(1))]);
        let b = YPoly::from_terms([(-1, r(1)), (1, r(-1))]);
        let p = a.mul(&b);
        assert_eq!(p, YPoly::from_terms([(-2, r(1)), (2, r(-1))]));
        assert_eq!(format!("{}", p), "Y^-2 - Y^2");
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert!(a.is_symmetric());
        assert!(!b.is_symmetric());
    }
}
