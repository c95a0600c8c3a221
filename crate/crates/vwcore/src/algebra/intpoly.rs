//! Dense univariate polynomials over ℤ, stored lowest degree first.
//!
//! These are the raw material for [`YFraction`](super::YFraction) gcds and
//! for the cyclotomic-denominator fractions used in the series engine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntPoly = Vec<BigInt>;

pub fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[BigInt]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

/// `a + b·Y^shift`, both lowest-first.
pub fn add_shifted(a: &[BigInt], b: &[BigInt], shift: usize) -> IntPoly {
    let len = a.len().max(b.len() + shift);
    let mut out: IntPoly = Vec::with_capacity(len);
    out.extend_from_slice(a);
    out.resize(len, BigInt::zero());
    for (j, y) in b.iter().enumerate() {
        out[j + shift] += y;
    }
    trim(&mut out);
    out
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    add_shifted(a, b, 0)
}

pub fn neg(a: &[BigInt]) -> IntPoly {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    add(a, &neg(b))
}

pub fn scale(a: &[BigInt], c: &BigInt) -> IntPoly {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

/// Nonnegative gcd of the coefficients; zero for the zero polynomial.
pub fn content(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Splits `a` into a content with the sign of the leading coefficient and a
/// primitive part with positive leading coefficient.
pub fn primitive(a: &[BigInt]) -> (BigInt, IntPoly) {
    if a.is_empty() {
        return (BigInt::zero(), Vec::new());
    }
    let mut g = content(a);
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    (g.clone(), a.iter().map(|c| c / &g).collect())
}

/// Exact division in ℤ[Y]; `None` when `b` does not divide `a`.
pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    assert!(!b.is_empty(), "division by the zero polynomial");
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let lb = b.last().unwrap();
    let mut rem: IntPoly = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = &rem[k + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (qq, r) = top.div_rem(lb);
        if !r.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= &qq * y;
        }
        q[k] = qq;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

/// Pseudo-remainder of `a` by `b`: lc(b)^k·a mod b.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut r: IntPoly = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, y) in b.iter().enumerate() {
            r[j + shift] -= &lr * y;
        }
        trim(&mut r);
    }
    r
}

/// Primitive gcd with positive leading coefficient (primitive PRS).
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() {
        return primitive(b).1;
    }
    if b.is_empty() {
        return primitive(a).1;
    }
    let (_, mut x) = primitive(a);
    let (_, mut y) = primitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive(&r).1;
    }
    x
}

pub fn eval_rational(p: &[BigInt], y: &num_rational::BigRational) -> num_rational::BigRational {
    let mut acc = num_rational::BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * y + num_rational::BigRational::from_integer(c.clone());
    }
    acc
}

pub fn from_i64(v: &[i64]) -> IntPoly {
    let mut p: IntPoly = v.iter().map(|&c| BigInt::from(c)).collect();
    trim(&mut p);
    p
}

pub fn one() -> IntPoly {
    vec![BigInt::one()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division_and_gcd() {
        let a = from_i64(&[-1, 0, 1]); // Y²−1
        let b = from_i64(&[-1, 1]); // Y−1
        assert_eq!(div_exact(&a, &b), Some(from_i64(&[1, 1])));
        assert_eq!(div_exact(&from_i64(&[1, 0, 1]), &b), None);
        let g = gcd(&mul(&a, &from_i64(&[2, 3])), &mul(&b, &from_i64(&[5, 0, 1])));
        assert_eq!(g, from_i64(&[-1, 1]));
    }
}
