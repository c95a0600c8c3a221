//! Smooth complete toric surfaces and the chart-product G-series.

use crate::algebra::{rint, FramingImage, QSeries, Ring, SubstitutionSpec, Weight, YFraction};
use crate::error::{Error, Result};
use crate::nekrasov::{nekrasov_series_memo, u0_part, NekrasovSeries};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub type Vec2 = [i64; 2];

fn det(a: Vec2, b: Vec2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Vec2, b: Vec2) -> i64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Fan given by cyclically ordered rays, counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ToricSurface {
    rays: Vec<Vec2>,
}

/// `Σ c_k D_k` with its canonical equivariant lift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Divisor(pub Vec<i64>);

impl Divisor {
    pub fn zero(m: usize) -> Self {
        Divisor(vec![0; m])
    }

    pub fn ray(m: usize, k: usize) -> Self {
        let mut c = vec![0; m];
        c[k] = 1;
        Divisor(c)
    }

    pub fn scaled(&self, d: i64) -> Self {
        Divisor(self.0.iter().map(|c| c * d).collect())
    }

    pub fn add(&self, o: &Divisor) -> Self {
        Divisor(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl ToricSurface {
    pub fn new(rays: Vec<Vec2>) -> Result<Self> {
        let m = rays.len();
        if m < 3 {
            return Err(Error::InvalidFan(format!("{} rays; a complete fan needs at least 3", m)));
        }
        for (k, v) in rays.iter().enumerate() {
            if num_integer::gcd(v[0], v[1]) != 1 {
                return Err(Error::InvalidFan(format!("ray {} = ({}, {}) is not primitive", k, v[0], v[1])));
            }
        }
        let mut angle = 0.0f64;
        for k in 0..m {
            let (a, b) = (rays[k], rays[(k + 1) % m]);
            if det(a, b) != 1 {
                return Err(Error::InvalidFan(format!(
                    "rays {} and {} do not form a positively oriented unimodular basis",
                    k,
                    (k + 1) % m
                )));
            }
            angle += (det(a, b) as f64).atan2(dot(a, b) as f64);
        }
        let turns = angle / std::f64::consts::TAU;
        if (turns - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidFan(format!("rays wind {:.3} times around the origin", turns)));
        }
        Ok(ToricSurface { rays })
    }

    pub fn rays(&self) -> &[Vec2] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn p2() -> Self {
        Self::new(vec![[1, 0], [0, 1], [-1, -1]]).unwrap()
    }

    pub fn p1xp1() -> Self {
        Self::new(vec![[1, 0], [0, 1], [-1, 0], [0, -1]]).unwrap()
    }

    pub fn hirzebruch(a: i64) -> Self {
        Self::new(vec![[1, 0], [0, 1], [-1, a], [0, -1]]).unwrap()
    }

    /// Blow-up at the fixed point of cone `k`.
    pub fn blowup(&self, k: usize) -> Result<Self> {
        let m = self.ray_count();
        if k >= m {
            return Err(Error::InvalidCone(format!("cone {} of {}", k, m)));
        }
        let (a, b) = (self.rays[k], self.rays[(k + 1) % m]);
        let mut rays = self.rays.clone();
        rays.insert(k + 1, [a[0] + b[0], a[1] + b[1]]);
        Self::new(rays)
    }

    fn cone(&self, k: usize) -> Result<(Vec2, Vec2)> {
        let m = self.ray_count();
        if k >= m {
            return Err(Error::InvalidCone(format!("cone {} of {}", k, m)));
        }
        Ok((self.rays[k], self.rays[(k + 1) % m]))
    }

    /// Dual basis `(m₁, m₂)` of the cone `(v_k, v_{k+1})`.
    pub fn chart_weights(&self, k: usize) -> Result<(Vec2, Vec2)> {
        let (a, b) = self.cone(k)?;
        Ok(([b[1], -b[0]], [-a[1], a[0]]))
    }

    /// Fiber character of `O(D)` at the fixed point of cone `k`.
    pub fn chart_character(&self, d: &Divisor, k: usize) -> Result<Vec2> {
        let (m1, m2) = self.chart_weights(k)?;
        let m = self.ray_count();
        let (c1, c2) = (d.0[k], d.0[(k + 1) % m]);
        Ok([-c1 * m1[0] - c2 * m2[0], -c1 * m1[1] - c2 * m2[1]])
    }

    /// `a_k` in `v_{k−1} + v_{k+1} = a_k v_k`.
    fn relation_coefficient(&self, k: usize) -> i64 {
        let m = self.ray_count();
        let (p, v, n) = (self.rays[(k + m - 1) % m], self.rays[k], self.rays[(k + 1) % m]);
        let s = [p[0] + n[0], p[1] + n[1]];
        // s is parallel to v
        if v[0] != 0 {
            s[0] / v[0]
        } else {
            s[1] / v[1]
        }
    }

    pub fn ray_intersection(&self, k: usize, l: usize) -> i64 {
        let m = self.ray_count();
        if k == l {
            -self.relation_coefficient(k)
        } else if (k + 1) % m == l || (l + 1) % m == k {
            1
        } else {
            0
        }
    }

    pub fn intersection(&self, d: &Divisor, e: &Divisor) -> i64 {
        let m = self.ray_count();
        let mut s = 0;
        for k in 0..m {
            if d.0[k] == 0 {
                continue;
            }
            for l in 0..m {
                if e.0[l] != 0 {
                    s += d.0[k] * e.0[l] * self.ray_intersection(k, l);
                }
            }
        }
        s
    }

    pub fn canonical_class(&self) -> Divisor {
        Divisor(vec![-1; self.ray_count()])
    }

    pub fn k_squared(&self) -> i64 {
        let k = self.canonical_class();
        self.intersection(&k, &k)
    }

    pub fn check_divisor(&self, d: &Divisor) -> Result<()> {
        if d.0.len() != self.ray_count() {
            return Err(Error::InvalidFan(format!("divisor has {} coefficients for {} rays", d.0.len(), self.ray_count())));
        }
        Ok(())
    }
}

pub fn weight_of(r: usize, m: Vec2) -> Weight {
    Weight::t_monomial(r, m[0], m[1])
}

/// Substitution for chart `k` along the global direction `alpha`, with
/// framing `e_i ↦ L_i·Y^{-2i}` where `L₀ = 0` and `L_i = L_{i−1} − a_i`.
pub fn chart_spec(s: &ToricSurface, classes: &[Divisor], k: usize, alpha: Vec2) -> Result<SubstitutionSpec> {
    let (m1, m2) = s.chart_weights(k)?;
    let mut l = [0i64, 0];
    let mut framing = vec![FramingImage { s: 0, y: 0 }];
    for (i, a) in classes.iter().enumerate() {
        let c = s.chart_character(a, k)?;
        l = [l[0] - c[0], l[1] - c[1]];
        framing.push(FramingImage { s: dot(alpha, l), y: -2 * (i as i64 + 1) });
    }
    Ok(SubstitutionSpec::raw([dot(alpha, m1), dot(alpha, m2)], framing))
}

/// Maximum number of direction resamples before giving up.
pub const MAX_DIRECTIONS: usize = 16;

/// Runs `f` along resampled directions until no weight specializes to 1.
pub fn with_direction<T>(r: usize, mut f: impl FnMut(Vec2) -> Result<T>) -> Result<T> {
    let mut last = None;
    for attempt in 0..MAX_DIRECTIONS {
        match f(SubstitutionSpec::direction_candidate(r, attempt)) {
            Err(Error::SpecializedWeightTrivial(w)) => last = Some(w),
            other => return other,
        }
    }
    Err(Error::SpecializedWeightTrivial(format!("{} after {} directions", last.unwrap_or_default(), MAX_DIRECTIONS)))
}

/// Product of `factors` followed by the `u⁰` part, with an exact check that
/// every pole cancels.
pub fn chart_product_u0(factors: &[&NekrasovSeries], context: &str) -> Result<QSeries<YFraction>> {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.mul(f);
    }
    u0_part(&acc, context)
}

/// `G_{S,a}` through `q^N` along the direction `alpha`.
pub fn surface_g_series_along(s: &ToricSurface, classes: &[Divisor], r: usize, n: usize, alpha: Vec2) -> Result<QSeries<YFraction>> {
    assert_eq!(classes.len() + 1, r, "need r−1 classes");
    for a in classes {
        s.check_divisor(a)?;
    }
    let charts: Vec<_> = (0..s.ray_count())
        .into_par_iter()
        .map(|k| nekrasov_series_memo(r, n, &chart_spec(s, classes, k, alpha)?))
        .collect::<Result<_>>()?;
    let refs: Vec<&NekrasovSeries> = charts.iter().map(|c| c.as_ref()).collect();
    let g = chart_product_u0(&refs, "surface chart product")?;
    debug_assert_eq!(g.coeff(&rint(0)), Some(YFraction::one()));
    Ok(g)
}

pub fn surface_g_series(s: &ToricSurface, classes: &[Divisor], r: usize, n: usize) -> Result<QSeries<YFraction>> {
    with_direction(r, |alpha| surface_g_series_along(s, classes, r, n, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_weight_examples() {
        let s = ToricSurface::p2();
        assert_eq!(s.chart_weights(0).unwrap(), ([1, 0], [0, 1]));
        assert_eq!(s.chart_weights(1).unwrap(), ([-1, 1], [-1, 0]));
        assert!(matches!(s.chart_weights(3), Err(Error::InvalidCone(_))));
    }

    #[test]
    fn blown_up_plane_charts() {
        // rays (1,0),(1,1),(0,1) with exceptional ray (1,1)
        let (a, c, b) = ([1, 0], [1, 1], [0, 1]);
        let chart = |u: Vec2, v: Vec2| ([v[1], -v[0]], [-u[1], u[0]]);
        assert_eq!(chart(c, b), ([1, 0], [-1, 1]));
        assert_eq!(chart(a, c), ([1, -1], [0, 1]));
    }

    #[test]
    fn intersections() {
        let s = ToricSurface::p2();
        let d = |k| Divisor::ray(3, k);
        assert_eq!(s.intersection(&d(0), &d(1)), 1);
        assert_eq!(s.intersection(&d(0), &d(0)), 1);
        assert_eq!(s.k_squared(), 9);
        assert_eq!(ToricSurface::p1xp1().k_squared(), 8);
        let f1 = ToricSurface::hirzebruch(1);
        assert_eq!(f1.k_squared(), 8);
        let b = f1.blowup(0).unwrap().blowup(2).unwrap();
        assert_eq!(b.k_squared(), 12 - b.ray_count() as i64);
    }

    #[test]
    fn chart_characters() {
        let s = ToricSurface::p2();
        assert_eq!(s.chart_character(&Divisor::zero(3), 0).unwrap(), [0, 0]);
        assert_eq!(s.chart_character(&Divisor::ray(3, 2), 0).unwrap(), [0, 0]);
    }

    #[test]
    fn invalid_fans() {
        assert!(ToricSurface::new(vec![[1, 0], [0, 1]]).is_err());
        assert!(ToricSurface::new(vec![[1, 0], [1, 2], [-1, -1]]).is_err());
        assert!(ToricSurface::new(vec![[2, 0], [0, 1], [-1, -1]]).is_err());
        // winds twice
        let twice = vec![[1, 0], [0, 1], [-1, -1], [1, 0], [0, 1], [-1, -1]];
        assert!(ToricSurface::new(twice).is_err());
    }

    #[test]
    fn trivial_g_series() {
        let g = surface_g_series(&ToricSurface::p2(), &[Divisor::zero(3)], 2, 0).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.coeff(&rint(0)), Some(YFraction::one()));
    }

    fn laurent(g: &QSeries<YFraction>) -> bool {
        g.terms().all(|(_, c)| c.is_poly())
    }

    #[test]
    fn poles_cancel_on_p2() {
        let g = surface_g_series(&ToricSurface::p2(), &[Divisor::zero(3)], 2, 2).unwrap();
        assert!(laurent(&g));
        let h = surface_g_series(&ToricSurface::p2(), &[Divisor::ray(3, 0)], 2, 2).unwrap();
        assert!(laurent(&h));
    }

    #[test]
    fn direction_and_lift_independence() {
        let s = ToricSurface::hirzebruch(1);
        let a = [Divisor(vec![1, 0, -1, 2])];
        let g1 = surface_g_series_along(&s, &a, 2, 2, [1, 4]).unwrap();
        let g2 = surface_g_series_along(&s, &a, 2, 2, [2, 7]).unwrap();
        assert!(g1.agrees_with(&g2));
        // adding a principal divisor changes only the lift
        let principal = Divisor(s.rays().iter().map(|v| v[0] + 2 * v[1]).collect());
        let b = [a[0].add(&principal)];
        let g3 = surface_g_series_along(&s, &b, 2, 2, [1, 4]).unwrap();
        assert!(g1.agrees_with(&g3));
    }
}
