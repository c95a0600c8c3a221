use super::ring::{Field, Ring};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use std::collections::BTreeMap;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Series in q with exact rational exponents.
///
/// Exponents `≤ order` are known; `order == None` means the series is exact
/// (a finite sum).
#[derive(Clone, Debug)]
pub struct QSeries<C> {
    terms: BTreeMap<Rat, C>,
    order: Option<Rat>,
}

fn min_opt(a: Option<Rat>, b: Option<Rat>) -> Option<Rat> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if a < b { a } else { b }),
    }
}

fn add_opt(a: &Option<Rat>, b: &Rat) -> Option<Rat> {
    a.as_ref().map(|a| a + b)
}

impl<C: Ring> QSeries<C> {
    pub fn new(order: Option<Rat>) -> Self {
        QSeries { terms: BTreeMap::new(), order }
    }

    pub fn zero_to(order: Rat) -> Self {
        Self::new(Some(order))
    }

    pub fn exact_zero() -> Self {
        Self::new(None)
    }

    pub fn from_terms<I: IntoIterator<Item = (Rat, C)>>(it: I, order: Option<Rat>) -> Self {
        let mut s = Self::new(order);
        for (e, c) in it {
            s.add_term(e, c);
        }
        s
    }

    pub fn monomial(c: C, e: Rat, order: Option<Rat>) -> Self {
        Self::from_terms([(e, c)], order)
    }

    pub fn one(order: Option<Rat>) -> Self {
        Self::monomial(C::one(), Rat::zero(), order)
    }

    pub fn order(&self) -> Option<&Rat> {
        self.order.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    pub fn add_term(&mut self, e: Rat, c: C) {
        if c.is_zero() {
            return;
        }
        if let Some(o) = &self.order {
            if &e > o {
                return;
            }
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &C)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^e`; `None` past the truncation order.
    pub fn coeff(&self, e: &Rat) -> Option<C> {
        if let Some(o) = &self.order {
            if e > o {
                return None;
            }
        }
        Some(self.terms.get(e).cloned().unwrap_or_else(C::zero))
    }

    pub fn valuation(&self) -> Option<&Rat> {
        self.terms.keys().next()
    }

    pub fn leading(&self) -> Option<(&Rat, &C)> {
        self.terms.iter().next()
    }

    pub fn truncate(&self, order: &Rat) -> Self {
        let o = min_opt(self.order.clone(), Some(order.clone()));
        Self::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c.clone())), o)
    }

    /// Multiplication by `q^σ`.
    pub fn shift(&self, sigma: &Rat) -> Self {
        QSeries {
            terms: self.terms.iter().map(|(e, c)| (e + sigma, c.clone())).collect(),
            order: add_opt(&self.order, sigma),
        }
    }

    /// `q ↦ q^k` for positive rational `k`.
    pub fn substitute_power(&self, k: &Rat) -> Self {
        assert!(k.is_positive());
        QSeries {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
            order: self.order.as_ref().map(|o| o * k),
        }
    }

    pub fn map<D: Ring, F: Fn(&C) -> D>(&self, f: F) -> QSeries<D> {
        QSeries::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), f(c))), self.order.clone())
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Bound on the product order: `min(v_f + o_g, v_g + o_f)`.
    fn product_order(&self, other: &Self) -> Option<Rat> {
        let vf = self.valuation().cloned().or_else(|| self.order.clone());
        let vg = other.valuation().cloned().or_else(|| other.order.clone());
        let a = match (&vf, &other.order) {
            (Some(v), Some(o)) => Some(v + o),
            _ => None,
        };
        let b = match (&vg, &self.order) {
            (Some(v), Some(o)) => Some(v + o),
            _ => None,
        };
        min_opt(a, b)
    }

    /// First exponent at which `self` and `other` differ, up to the common
    /// order.
    pub fn first_difference(&self, other: &Self) -> Option<Rat> {
        let o = min_opt(self.order.clone(), other.order.clone());
        let d = self.sub(other);
        d.terms
            .keys()
            .find(|e| o.as_ref().is_none_or(|o| *e <= o))
            .cloned()
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// Dense view of `self / q^v` on the lattice `(1/L)ℤ`, through relative
    /// order `o − v`. Returns `(v, L, coefficients)`.
    fn dense_normalized(&self) -> Result<(Rat, BigInt, Vec<C>)> {
        let order = self
            .order
            .clone()
            .ok_or_else(|| Error::UnboundedOrder("dense operation needs a finite order".into()))?;
        let v = self.valuation().cloned().ok_or_else(|| Error::NonUnitLeadingTerm("zero series".into()))?;
        let rel = &order - &v;
        let mut l = rel.denom().clone();
        for e in self.terms.keys() {
            l = l.lcm((e - &v).denom());
        }
        let k = (&rel * Rat::from_integer(l.clone())).floor().to_integer().to_usize().unwrap();
        let mut dense = vec![C::zero(); k + 1];
        for (e, c) in &self.terms {
            let idx = ((e - &v) * Rat::from_integer(l.clone())).to_integer().to_usize().unwrap();
            if idx <= k {
                dense[idx] = c.clone();
            }
        }
        Ok((v, l, dense))
    }

    fn from_dense(v: &Rat, l: &BigInt, dense: &[C], order: Rat) -> Self {
        let lr = Rat::from_integer(l.clone());
        Self::from_terms(
            dense
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (v + Rat::from_integer(BigInt::from(k)) / &lr, c.clone())),
            Some(order),
        )
    }

    /// `f^c` for `f = q^v(1 + …)` with unit leading coefficient, returned as
    /// `q^{vc}(1 + …)^c`.
    pub fn pow(&self, c: &Rat) -> Result<Self> {
        let (v, l, f) = self.dense_normalized()?;
        if !f[0].is_one() {
            return Err(Error::NonUnitLeadingTerm("pow needs leading coefficient 1".into()));
        }
        let rel_order = self.order.as_ref().unwrap() - &v;
        let nz: Vec<usize> = (1..f.len()).filter(|&j| !f[j].is_zero()).collect();
        let mut g: Vec<C> = Vec::with_capacity(f.len());
        g.push(C::one());
        let c1 = c + Rat::one();
        for k in 1..f.len() {
            let mut acc = C::zero();
            for &j in &nz {
                if j > k {
                    break;
                }
                if g[k - j].is_zero() {
                    continue;
                }
                let w = &c1 * rint(j as i64) - rint(k as i64);
                if w.is_zero() {
                    continue;
                }
                acc = acc.add(&f[j].mul(&g[k - j]).scale(&w));
            }
            g.push(acc.div_int(k as i64));
        }
        let nv = &v * c;
        Ok(Self::from_dense(&nv, &l, &g, &nv + rel_order))
    }

    pub fn log(&self) -> Result<Self> {
        let (v, l, f) = self.dense_normalized()?;
        if !v.is_zero() || !f[0].is_one() {
            return Err(Error::NonUnitLeadingTerm("log needs leading term 1·q^0".into()));
        }
        let order = self.order.clone().unwrap();
        let nz: Vec<usize> = (1..f.len()).filter(|&j| !f[j].is_zero()).collect();
        let mut g: Vec<C> = vec![C::zero(); f.len()];
        for k in 1..f.len() {
            let mut acc = f[k].scale_int(k as i64);
            for &j in &nz {
                if j >= k {
                    break;
                }
                if g[k - j].is_zero() {
                    continue;
                }
                acc = acc.sub(&f[j].mul(&g[k - j]).scale_int((k - j) as i64));
            }
            g[k] = acc.div_int(k as i64);
        }
        Ok(Self::from_dense(&Rat::zero(), &l, &g, order))
    }

    pub fn exp(&self) -> Result<Self> {
        let order = self
            .order
            .clone()
            .ok_or_else(|| Error::UnboundedOrder("exp needs a finite order".into()))?;
        if self.terms.is_empty() {
            return Ok(Self::one(Some(order)));
        }
        if self.valuation().unwrap() <= &Rat::zero() {
            return Err(Error::NonUnitLeadingTerm("exp needs positive valuation".into()));
        }
        let mut l = order.denom().clone();
        for e in self.terms.keys() {
            l = l.lcm(e.denom());
        }
        let lr = Rat::from_integer(l.clone());
        let k_max = (&order * &lr).floor().to_integer().to_usize().unwrap();
        let mut h = vec![C::zero(); k_max + 1];
        for (e, c) in &self.terms {
            let idx = (e * &lr).to_integer().to_usize().unwrap();
            h[idx] = c.scale_int(idx as i64);
        }
        let nz: Vec<usize> = (1..h.len()).filter(|&j| !h[j].is_zero()).collect();
        let mut g: Vec<C> = Vec::with_capacity(k_max + 1);
        g.push(C::one());
        for k in 1..=k_max {
            let mut acc = C::zero();
            for &j in &nz {
                if j > k {
                    break;
                }
                if !g[k - j].is_zero() {
                    acc = acc.add(&h[j].mul(&g[k - j]));
                }
            }
            g.push(acc.div_int(k as i64));
        }
        Ok(Self::from_dense(&Rat::zero(), &l, &g, order))
    }

    /// Square root of a series with leading term `1·q^{2σ}`.
    pub fn sqrt(&self) -> Result<Self> {
        match self.leading() {
            Some((_, c)) if c.is_one() => self.pow(&rat(1, 2)).map_err(|e| match e {
                Error::NonUnitLeadingTerm(m) => Error::NotASquare(m),
                e => e,
            }),
            _ => Err(Error::NotASquare("leading coefficient is not 1".into())),
        }
    }

    pub fn pow_u(&self, k: u32) -> Self {
        let mut acc = Self::one(None);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl<C: Field> QSeries<C> {
    /// Inverse of a series with arbitrary invertible leading coefficient.
    pub fn inverse(&self) -> Result<Self> {
        let (v, lead) = match self.leading() {
            Some((v, c)) => (v.clone(), c.clone()),
            None => return Err(Error::NotInvertible("zero series".into())),
        };
        let li = lead.inv().ok_or_else(|| Error::NotInvertible("leading coefficient".into()))?;
        if self.is_exact() && self.terms.len() == 1 {
            return Ok(Self::monomial(li, -v, None));
        }
        let normalized = self.mul_coeff(&li);
        Ok(normalized.pow(&rint(-1))?.mul_coeff(&li))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }
}

impl<C: Ring> Ring for QSeries<C> {
    fn zero() -> Self {
        Self::exact_zero()
    }
    fn one() -> Self {
        Self::one(None)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.order.is_none()
    }
    fn add(&self, other: &Self) -> Self {
        let o = min_opt(self.order.clone(), other.order.clone());
        let mut s = Self::new(o);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            s.add_term(e.clone(), c.clone());
        }
        s
    }
    fn mul(&self, other: &Self) -> Self {
        let o = self.product_order(other);
        let mut s = Self::new(o);
        for (e1, c1) in &self.terms {
            if let Some(o) = &s.order {
                if e1 + other.valuation().unwrap_or(o) > *o {
                    break;
                }
            }
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if let Some(o) = &s.order {
                    if &e > o {
                        break;
                    }
                }
                s.add_term(e, c1.mul(c2));
            }
        }
        s
    }
    fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }
    fn scale(&self, c: &Rat) -> Self {
        self.map(|x| x.scale(c))
    }
    fn from_rational(c: &Rat) -> Self {
        Self::monomial(C::from_rational(c), Rat::zero(), None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = QSeries<Rat>;

    fn poly(cs: &[i64], order: i64) -> S {
        S::from_terms(cs.iter().enumerate().map(|(k, &c)| (rint(k as i64), rint(c))), Some(rint(order)))
    }

    #[test]
    fn mercator_and_geometric() {
        let f = poly(&[1, 1], 3);
        let l = f.log().unwrap();
        let expect = S::from_terms([(rint(1), rint(1)), (rint(2), rat(-1, 2)), (rint(3), rat(1, 3))], Some(rint(3)));
        assert!(l.agrees_with(&expect));
        let g = poly(&[1, -1], 3).pow(&rint(-1)).unwrap();
        assert!(g.agrees_with(&poly(&[1, 1, 1, 1], 3)));
        assert!(l.exp().unwrap().agrees_with(&f));
    }

    #[test]
    fn sqrt_of_square() {
        let f = poly(&[1, 2, 1], 5);
        assert!(f.sqrt().unwrap().agrees_with(&poly(&[1, 1], 5)));
        assert!(matches!(poly(&[4, 1], 3).sqrt(), Err(Error::NotASquare(_))));
    }

    #[test]
    fn product_order_rule() {
        let f = S::from_terms([(rat(1, 2), rint(1))], Some(rint(3)));
        let g = S::from_terms([(rint(1), rint(1))], Some(rint(2)));
        assert_eq!(f.mul(&g).order(), Some(&rat(5, 2)));
    }
}
