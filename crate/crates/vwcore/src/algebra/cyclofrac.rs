//! Elements of ℚ(Y) whose denominators are products of cyclotomic
//! polynomials.
//!
//! Every denominator met while expanding fixed-point products in `u` is a
//! product of factors `1 − Y^b`, so this representation keeps series
//! arithmetic gcd-free: multiplication adds exponents, addition takes the
//! exponent-wise maximum.

use super::intpoly::{self, IntPoly};
use super::ring::Ring;
use super::yfrac::YFraction;
use super::ypoly::YPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::OnceLock;

const TABLE_SIZE: usize = 256;

fn mobius(mut n: u32) -> i32 {
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

fn y_pow_minus_one(d: usize) -> IntPoly {
    let mut p = vec![BigInt::zero(); d + 1];
    p[0] = BigInt::from(-1);
    p[d] = BigInt::one();
    p
}

fn build_cyclotomic(n: u32) -> IntPoly {
    let mut num = intpoly::one();
    let mut den = intpoly::one();
    for d in 1..=n {
        if n % d == 0 {
            match mobius(n / d) {
                1 => num = intpoly::mul(&num, &y_pow_minus_one(d as usize)),
                -1 => den = intpoly::mul(&den, &y_pow_minus_one(d as usize)),
                _ => {}
            }
        }
    }
    intpoly::div_exact(&num, &den).expect("cyclotomic quotient is exact")
}

/// Φ_n(Y) for 1 ≤ n < 256.
pub fn cyclotomic(n: u32) -> &'static IntPoly {
    static TABLE: OnceLock<Vec<IntPoly>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut v = vec![Vec::new()];
        for k in 1..TABLE_SIZE as u32 {
            v.push(build_cyclotomic(k));
        }
        v
    });
    assert!((n as usize) < TABLE_SIZE && n >= 1, "cyclotomic index {} out of range", n);
    &t[n as usize]
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `Y^lo · num(Y) / (den · Π Φ_d(Y)^e)`.
#[derive(Clone, Debug)]
pub struct CycloFrac {
    lo: i64,
    num: IntPoly,
    den: BigInt,
    phi: Vec<(u32, u32)>,
}

impl CycloFrac {
    fn raw(lo: i64, num: IntPoly, den: BigInt, phi: Vec<(u32, u32)>) -> Self {
        let mut c = CycloFrac { lo, num, den, phi };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        intpoly::trim(&mut self.num);
        let lead = self.num.iter().take_while(|c| c.is_zero()).count();
        if lead == self.num.len() {
            *self = Self::zero();
            return;
        }
        if lead > 0 {
            self.num.drain(..lead);
            self.lo += lead as i64;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        let g = intpoly::content(&self.num).gcd(&self.den);
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c /= &g;
            }
            self.den /= &g;
        }
        self.phi.retain(|&(_, e)| e > 0);
    }

    pub fn from_int_poly(lo: i64, p: IntPoly) -> Self {
        Self::raw(lo, p, BigInt::one(), Vec::new())
    }

    /// `c · Y^k · Π Φ_d^{f_d}` for signed exponents `f_d`.
    pub fn from_factored(c: &BigRational, k: i64, phi: &[(u32, i64)]) -> Self {
        if Zero::is_zero(c) {
            return Self::zero();
        }
        let mut num = vec![c.numer().clone()];
        let mut dphi = Vec::new();
        for &(d, f) in phi {
            if f > 0 {
                for _ in 0..f {
                    num = intpoly::mul(&num, cyclotomic(d));
                }
            } else if f < 0 {
                dphi.push((d, (-f) as u32));
            }
        }
        dphi.sort();
        Self::raw(k, num, c.denom().clone(), merge_add(&dphi, &[]))
    }

    pub fn monomial(c: &BigRational, k: i64) -> Self {
        Self::from_factored(c, k, &[])
    }

    pub fn from_ypoly(p: &YPoly) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        let (c, lo, prim) = p.to_int_parts();
        Self::raw(lo, intpoly::scale(&prim, c.numer()), c.denom().clone(), Vec::new())
    }

    pub fn phi_exponents(&self) -> &[(u32, u32)] {
        &self.phi
    }

    /// Multiplies by Φ_d^k, cancelling against the denominator first.
    pub fn mul_phi(&self, d: u32, k: i64) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        if k < 0 {
            out.phi = merge_add(&out.phi, &[(d, (-k) as u32)]);
            return out;
        }
        let mut rem = k as u32;
        if let Some(entry) = out.phi.iter_mut().find(|(dd, _)| *dd == d) {
            let c = entry.1.min(rem);
            entry.1 -= c;
            rem -= c;
        }
        for _ in 0..rem {
            out.num = intpoly::mul(&out.num, cyclotomic(d));
        }
        out.phi.retain(|&(_, e)| e > 0);
        out
    }

    pub fn shift_y(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        out.lo += k;
        out
    }

    /// Divides out every cyclotomic factor shared by numerator and
    /// denominator. Afterwards the representation is unique.
    pub fn reduce(&mut self) {
        if self.is_zero() {
            return;
        }
        for entry in self.phi.iter_mut() {
            let phi = cyclotomic(entry.0);
            while entry.1 > 0 {
                match intpoly::div_exact(&self.num, phi) {
                    Some(q) => {
                        self.num = q;
                        entry.1 -= 1;
                    }
                    None => break,
                }
            }
        }
        self.phi.retain(|&(_, e)| e > 0);
    }

    pub fn reduced(&self) -> Self {
        let mut c = self.clone();
        c.reduce();
        c
    }

    /// Inverse when the numerator is itself a product of cyclotomic
    /// polynomials (times a monomial); `None` otherwise.
    pub fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let r = self.reduced();
        let mut num = r.num.clone();
        let mut fac: Vec<(u32, u32)> = Vec::new();
        for d in 1..TABLE_SIZE as u32 {
            if num.len() <= 1 {
                break;
            }
            let phi = cyclotomic(d);
            if phi.len() > num.len() {
                continue;
            }
            let mut e = 0;
            while let Some(q) = intpoly::div_exact(&num, phi) {
                num = q;
                e += 1;
            }
            if e > 0 {
                fac.push((d, e));
            }
        }
        if num.len() > 1 {
            return None;
        }
        let c = num[0].clone();
        let mut new_num = vec![r.den.clone()];
        for &(dd, e) in &r.phi {
            for _ in 0..e {
                new_num = intpoly::mul(&new_num, cyclotomic(dd));
            }
        }
        Some(Self::raw(-r.lo, new_num, c, fac))
    }

    pub fn to_yfraction(&self) -> YFraction {
        let r = self.reduced();
        if r.is_zero() {
            return YFraction::zero();
        }
        let mut den = vec![r.den.clone()];
        for &(d, e) in &r.phi {
            for _ in 0..e {
                den = intpoly::mul(&den, cyclotomic(d));
            }
        }
        YFraction::from_reduced(YPoly::from_int(r.lo, &r.num), YPoly::from_int(0, &den))
    }

    /// Exact conversion when the denominator is cyclotomic times a constant.
    pub fn from_yfraction(f: &YFraction) -> Option<Self> {
        let n = Self::from_ypoly(f.numer());
        let d = Self::from_ypoly(f.denom());
        d.try_inv().map(|i| n.mul(&i))
    }

    pub fn eval(&self, y: &BigRational) -> Option<BigRational> {
        let mut d = BigRational::from_integer(self.den.clone());
        for &(dd, e) in &self.phi {
            let v = intpoly::eval_rational(cyclotomic(dd), y);
            for _ in 0..e {
                d *= &v;
            }
        }
        if Zero::is_zero(&d) {
            return None;
        }
        let n = intpoly::eval_rational(&self.num, y) * super::ypoly::pow_rational(y, self.lo);
        Some(n / d)
    }

    pub fn numerator_degree(&self) -> usize {
        self.num.len()
    }

    pub fn parts(&self) -> (i64, &IntPoly, &BigInt, &[(u32, u32)]) {
        (self.lo, &self.num, &self.den, &self.phi)
    }

    pub fn from_parts(lo: i64, num: IntPoly, den: BigInt, mut phi: Vec<(u32, u32)>) -> Self {
        phi.sort();
        Self::raw(lo, num, den, merge_add(&phi, &[]))
    }
}

fn merge_add(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 <= b[j].0);
        let next = if take_a {
            if j < b.len() && a[i].0 == b[j].0 {
                let v = (a[i].0, a[i].1 + b[j].1);
                i += 1;
                j += 1;
                v
            } else {
                i += 1;
                a[i - 1]
            }
        } else {
            j += 1;
            b[j - 1]
        };
        match out.last_mut() {
            Some(l) if l.0 == next.0 => l.1 += next.1,
            _ => out.push(next),
        }
    }
    out.retain(|&(_, e)| e > 0);
    out
}

fn exponent_of(phi: &[(u32, u32)], d: u32) -> u32 {
    phi.iter().find(|(dd, _)| *dd == d).map_or(0, |x| x.1)
}

/// Brings `num / Π Φ^phi` to the larger denominator `Π Φ^target`.
fn lift(num: &IntPoly, phi: &[(u32, u32)], target: &[(u32, u32)]) -> IntPoly {
    let mut out = num.clone();
    for &(d, e) in target {
        let have = exponent_of(phi, d);
        for _ in have..e {
            out = intpoly::mul(&out, cyclotomic(d));
        }
    }
    out
}

impl Ring for CycloFrac {
    fn zero() -> Self {
        CycloFrac { lo: 0, num: Vec::new(), den: BigInt::one(), phi: Vec::new() }
    }
    fn one() -> Self {
        CycloFrac { lo: 0, num: intpoly::one(), den: BigInt::one(), phi: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let target: Vec<(u32, u32)> = {
            let mut t = Vec::new();
            let (mut i, mut j) = (0, 0);
            let (a, b) = (&self.phi, &other.phi);
            while i < a.len() || j < b.len() {
                if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                    t.push(a[i]);
                    i += 1;
                } else if i >= a.len() || b[j].0 < a[i].0 {
                    t.push(b[j]);
                    j += 1;
                } else {
                    t.push((a[i].0, a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
            t
        };
        let na = lift(&self.num, &self.phi, &target);
        let nb = lift(&other.num, &other.phi, &target);
        let l = self.den.lcm(&other.den);
        let na = intpoly::scale(&na, &(&l / &self.den));
        let nb = intpoly::scale(&nb, &(&l / &other.den));
        let lo = self.lo.min(other.lo);
        let sum = intpoly::add_shifted(
            &shift_up(&na, (self.lo - lo) as usize),
            &nb,
            (other.lo - lo) as usize,
        );
        Self::raw(lo, sum, l, target)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let num = intpoly::mul(&self.num, &other.num);
        Self::raw(self.lo + other.lo, num, &self.den * &other.den, merge_add(&self.phi, &other.phi))
    }
    fn neg(&self) -> Self {
        let mut out = self.clone();
        out.num = intpoly::neg(&out.num);
        out
    }
    fn scale(&self, c: &BigRational) -> Self {
        if Zero::is_zero(c) || Ring::is_zero(self) {
            return Self::zero();
        }
        Self::raw(
            self.lo,
            intpoly::scale(&self.num, c.numer()),
            &self.den * c.denom(),
            self.phi.clone(),
        )
    }
    fn from_rational(c: &BigRational) -> Self {
        Self::monomial(c, 0)
    }
}

fn shift_up(p: &IntPoly, k: usize) -> IntPoly {
    if k == 0 {
        return p.clone();
    }
    let mut out = vec![BigInt::zero(); k];
    out.extend_from_slice(p);
    out
}

impl PartialEq for CycloFrac {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl std::fmt::Display for CycloFrac {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = self.reduced();
        let num = YPoly::from_int(r.lo, &r.num);
        if r.den.is_one() && r.phi.is_empty() {
            return write!(f, "{}", num);
        }
        write!(f, "({})/({}", num, r.den)?;
        for (d, e) in &r.phi {
            write!(f, "*C{}^{}", d, e)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_table() {
        assert_eq!(cyclotomic(1), &intpoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), &intpoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(4), &intpoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), &intpoly::from_i64(&[1, -1, 1]));
        for n in 1..40u32 {
            let mut p = intpoly::one();
            for d in divisors(n) {
                p = intpoly::mul(&p, cyclotomic(d));
            }
            assert_eq!(p, y_pow_minus_one(n as usize));
        }
    }

    #[test]
    fn agrees_with_yfraction() {
        // 1/(1−Y²) + Y²/(1−Y⁴)
        let one = <BigRational as One>::one();
        let a = CycloFrac::from_factored(&-one.clone(), 0, &[(1, -1), (2, -1)]);
        let b = CycloFrac::from_factored(&-one.clone(), 2, &[(1, -1), (2, -1), (4, -1)]);
        let s = a.add(&b).to_yfraction();
        let ya = YFraction::new(YPoly::one(), YPoly::from_int(0, &intpoly::from_i64(&[1, 0, -1])));
        let yb = YFraction::new(YPoly::y_pow(2), YPoly::from_int(0, &intpoly::from_i64(&[1, 0, 0, 0, -1])));
        assert_eq!(s, ya.add(&yb));
        let inv = a.try_inv().unwrap();
        assert!(inv.mul(&a).sub(&CycloFrac::one()).is_zero());
    }
}
