//! Verification reports shared by every identity check.

use crate::algebra::{QSeries, Rat, Ring, YFraction, YPoly};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divergence {
    pub q_exponent: String,
    pub difference: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Vec<(String, String)>,
    pub pass: bool,
    pub divergence: Option<Divergence>,
    /// Sub-checks in evaluation order.
    pub checks: Vec<CheckLine>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub label: String,
    pub pass: bool,
    pub divergence: Option<Divergence>,
}

impl VerificationReport {
    pub fn new(identity: &str, params: &[(&str, String)]) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            pass: true,
            divergence: None,
            checks: Vec::new(),
        }
    }

    /// Records a sub-check; the first failing one sets the report divergence.
    pub fn push(&mut self, label: impl Into<String>, divergence: Option<Divergence>) {
        let pass = divergence.is_none();
        if !pass && self.pass {
            self.pass = false;
            self.divergence = divergence.clone();
        }
        self.checks.push(CheckLine { label: label.into(), pass, divergence });
    }

    pub fn push_bool(&mut self, label: impl Into<String>, ok: bool, detail: impl FnOnce() -> Divergence) {
        self.push(label, if ok { None } else { Some(detail()) });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for c in other.checks {
            let label = format!("{}: {}", other.identity, c.label);
            self.push(label, c.divergence);
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        writeln!(f, "{} [{}]: {}", self.identity, params.join(", "), if self.pass { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            write!(f, "  {} {}", if c.pass { "ok  " } else { "FAIL" }, c.label)?;
            if let Some(d) = &c.divergence {
                write!(f, " (first divergence at q^{}: difference {})", d.q_exponent, d.difference)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// First coefficient where two series differ, up to the smaller order.
pub fn series_divergence<C: Ring + fmt::Display>(lhs: &QSeries<C>, rhs: &QSeries<C>) -> Option<Divergence> {
    let e: Rat = lhs.first_difference(rhs)?;
    let a = lhs.coeff(&e).unwrap_or_else(C::zero);
    let b = rhs.coeff(&e).unwrap_or_else(C::zero);
    Some(Divergence { q_exponent: e.to_string(), difference: a.sub(&b).to_string() })
}

pub fn compare_series(report: &mut VerificationReport, label: impl Into<String>, lhs: &QSeries<YFraction>, rhs: &QSeries<YFraction>) {
    report.push(label, series_divergence(lhs, rhs));
}

/// `Y`-exponent `k` written in `y = Y²`.
fn y_power(k: i64) -> String {
    let e = if k % 2 == 0 { format!("{}", k / 2) } else { format!("({}/2)", k) };
    match k {
        0 => String::new(),
        2 => "y".into(),
        _ => format!("y^{}", e),
    }
}

pub fn format_ypoly_y(p: &YPoly) -> String {
    let mut out = String::new();
    let terms: Vec<(i64, &Rat)> = p.terms().collect();
    for &(k, c) in terms.iter().rev() {
        let neg = c < &Rat::from_integer(0.into());
        let a = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let y = y_power(k);
        let unit = a == Rat::from_integer(1.into());
        match (y.is_empty(), unit) {
            (true, _) => out.push_str(&a.to_string()),
            (false, true) => out.push_str(&y),
            (false, false) => out.push_str(&format!("{}*{}", a, y)),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Coefficient in `y` (half-integer powers written as `y^(k/2)`).
pub fn format_yfraction_y(f: &YFraction) -> String {
    if f.is_poly() {
        format_ypoly_y(f.numer())
    } else {
        format!("({})/({})", format_ypoly_y(f.numer()), format_ypoly_y(f.denom()))
    }
}

/// `c₀ + q(c₁) + q^e(c_e) [through q^N]` with coefficients in `y`.
pub fn format_series(s: &QSeries<YFraction>) -> String {
    let mut parts = Vec::new();
    for (e, c) in s.terms() {
        let body = format_yfraction_y(c);
        let simple = c.as_poly().is_some_and(|p| p.terms().count() == 1);
        let q = if *e == Rat::from_integer(0.into()) {
            String::new()
        } else if *e == Rat::from_integer(1.into()) {
            "q".into()
        } else if e.is_integer() {
            format!("q^{}", e)
        } else {
            format!("q^({})", e)
        };
        parts.push(match (q.is_empty(), simple && body == "1") {
            (true, _) => body,
            (false, true) => q,
            (false, false) => format!("{}({})", q, body),
        });
    }
    let mut out = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
    if let Some(o) = s.order() {
        out.push_str(&format!("  [through q^{}]", if o.is_integer() { o.to_string() } else { format!("({})", o) }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::theta_lattice;

    #[test]
    fn theta_text() {
        assert_eq!(format_series(&theta_lattice(2, 0, 4)), "1 + q(y + y^-1) + q^4(y^2 + y^-2)  [through q^4]");
    }

    #[test]
    fn half_powers() {
        let p = YPoly::from_terms([(1, crate::algebra::rint(2)), (-3, crate::algebra::rint(-1))]);
        assert_eq!(format_ypoly_y(&p), "2*y^(1/2) - y^(-3/2)");
    }
}
