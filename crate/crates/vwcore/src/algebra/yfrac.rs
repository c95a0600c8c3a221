use super::intpoly;
use super::ring::{Field, Ring};
use super::ypoly::YPoly;
use num_rational::BigRational;


/// Element of ℚ(Y) in lowest terms.
///
/// The denominator is an ordinary polynomial with constant term 1; every
/// power of Y lives in the (Laurent) numerator. With this normalization two
/// equal fractions are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct YFraction {
    num: YPoly,
    den: YPoly,
}

impl YFraction {
    pub fn new(num: YPoly, den: YPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (cn, ln, pn) = num.to_int_parts();
        let (cd, ld, pd) = den.to_int_parts();
        let g = intpoly::gcd(&pn, &pd);
        let (pn, pd) = if g.len() > 1 {
            (
                intpoly::div_exact(&pn, &g).expect("gcd divides"),
                intpoly::div_exact(&pd, &g).expect("gcd divides"),
            )
        } else {
            (pn, pd)
        };
        Self::from_reduced(YPoly::from_int(ln - ld, &pn).scale(&cn), YPoly::from_int(0, &pd).scale(&cd))
    }

    /// Builds a fraction whose numerator and denominator are already coprime;
    /// only the Y-power and constant-term normalizations are applied.
    pub fn from_reduced(num: YPoly, den: YPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let shift = den.low();
        let den = den.shift(-shift);
        let num = num.shift(-shift);
        let c0 = den.lowest_coeff().unwrap().clone();
        let inv = c0.recip();
        YFraction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: YPoly) -> Self {
        YFraction { num: p, den: YPoly::one() }
    }

    pub fn y_pow(k: i64) -> Self {
        Self::from_poly(YPoly::y_pow(k))
    }

    pub fn from_i64(k: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(k.into()))
    }

    pub fn numer(&self) -> &YPoly {
        &self.num
    }

    pub fn denom(&self) -> &YPoly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<&YPoly> {
        if self.is_poly() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn invert_y(&self) -> Self {
        Self::new(self.num.invert_y(), self.den.invert_y())
    }

    /// Value at a rational Y; `None` if the denominator vanishes there.
    pub fn eval(&self, y: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(y);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(y) / d)
        }
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_poly() {
            self.num.constant_value()
        } else {
            None
        }
    }
}

impl Ring for YFraction {
    fn zero() -> Self {
        YFraction { num: YPoly::zero(), den: YPoly::one() }
    }
    fn one() -> Self {
        YFraction { num: YPoly::one(), den: YPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.is_poly() {
                return YFraction { num: self.num.add(&other.num), den: self.den.clone() };
            }
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn mul(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::zero();
        }
        if self.is_poly() && other.is_poly() {
            return YFraction { num: self.num.mul(&other.num), den: YPoly::one() };
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg(&self) -> Self {
        YFraction { num: self.num.neg(), den: self.den.clone() }
    }
    fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        YFraction { num: self.num.scale(c), den: self.den.clone() }
    }
    fn from_rational(c: &BigRational) -> Self {
        Self::from_poly(YPoly::from_rational(c))
    }
}

impl Field for YFraction {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }
}

impl std::fmt::Display for YFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<YPoly> for YFraction {
    fn from(p: YPoly) -> Self {
        Self::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn reduction_is_canonical() {
        // (Y²−1)/(2Y−2) = (Y+1)/2
        let num = YPoly::from_terms([(0, r(-1)), (2, r(1))]);
        let den = YPoly::from_terms([(0, r(-2)), (1, r(2))]);
        let f = YFraction::new(num, den);
        let expect = YFraction::from_poly(YPoly::from_terms([(0, r(1)), (1, r(1))]).scale(&BigRational::new(1.into(), 2.into())));
        assert_eq!(f, expect);
        // Y/(Y+Y²) = 1/(1+Y)
        let g = YFraction::new(YPoly::y_pow(1), YPoly::from_terms([(1, r(1)), (2, r(1))]));
        assert_eq!(g.denom(), &YPoly::from_terms([(0, r(1)), (1, r(1))]));
        assert_eq!(g.numer(), &YPoly::one());
    }
}
