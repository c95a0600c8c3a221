//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! throughout. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;
use vwcore::algebra::rint;
use vwcore::blowup::{verify_klt, verify_upsilon_closed_form};
use vwcore::direct::{arm_leg_pair, verify_route_equality};
use vwcore::modular::verify_theta_dft;
use vwcore::nekrasov::{euler_specialization, pole_checks, verify_framing_inversion, verify_framing_permutation};
use vwcore::partitions::{pair_terms, Partition};
use vwcore::report::VerificationReport;
use vwcore::toric::{surface_g_series, Divisor, ToricSurface};
use vwcore::universal::{
    build_configurations, extract_with, verify_a_closed_form, verify_blowup_relations, verify_rank2_closed_forms,
    verify_symmetry_relations, verify_universality, UniversalSeries,
};
use vwcore::vw::{corollary_surfaces, verify_rank2_corollary};
use vwcore::Result;

const SEED: u64 = 0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_reports(reps: Vec<VerificationReport>) -> Outcome {
    let checks: usize = reps.iter().map(|r| r.checks.len().max(1)).sum();
    match reps.iter().find(|r| !r.pass) {
        None => Outcome { pass: true, detail: format!("{} checks", checks) },
        Some(r) => Outcome { pass: false, detail: format!("{}", r).lines().find(|l| l.contains("FAIL")).unwrap_or("").trim().to_string() },
    }
}

fn framing_symmetry() -> Result<Outcome> {
    let mut comparisons = 0;
    for r in [2, 3] {
        for n in 1..=3 {
            for rep in [verify_framing_permutation(r, n, 25, SEED)?, verify_framing_inversion(r, n, 25, SEED)?] {
                comparisons += rep.comparisons.len();
                if let Some(c) = rep.comparisons.iter().find(|c| !c.pass) {
                    return Ok(Outcome { pass: false, detail: format!("{} r={} n={} trial {}: {} vs {}", rep.identity, r, n, c.trial, c.lhs, c.rhs) });
                }
            }
        }
    }
    Ok(Outcome { pass: true, detail: format!("{} comparisons", comparisons) })
}

fn euler_counts() -> Result<Outcome> {
    let expected = [(2, [2, 5, 10]), (3, [3, 9, 22])];
    for (r, counts) in expected {
        for (k, &c) in counts.iter().enumerate() {
            let v = euler_specialization(r, k + 1, SEED)?;
            if v != rint(c) {
                return Ok(Outcome { pass: false, detail: format!("r={} n={}: {} instead of {}", r, k + 1, v, c) });
            }
        }
    }
    Ok(Outcome { pass: true, detail: "2 5 10 / 3 9 22".into() })
}

fn klt() -> Result<Outcome> {
    let mut reps = Vec::new();
    for r in [2, 3] {
        for ell in [0, 1] {
            reps.push(verify_klt(r, ell, 2)?);
        }
    }
    Ok(from_reports(reps))
}

fn pair_oracle() -> Outcome {
    let mut n = 0;
    for a in 0..=4 {
        for b in 0..=4 {
            for l in Partition::all(a) {
                for m in Partition::all(b) {
                    n += 1;
                    if arm_leg_pair(&l, &m) != pair_terms(&l, &m) {
                        return Outcome { pass: false, detail: format!("{:?} {:?}", l.parts(), m.parts()) };
                    }
                }
            }
        }
    }
    Outcome { pass: true, detail: format!("{} pairs", n) }
}

fn pole_cancellation() -> Result<Outcome> {
    let before = pole_checks();
    let p2 = ToricSurface::p2();
    let surfaces = vec![
        p2.clone(),
        ToricSurface::p1xp1(),
        ToricSurface::hirzebruch(1),
        ToricSurface::hirzebruch(2),
        ToricSurface::hirzebruch(1).blowup(0)?,
    ];
    for s in &surfaces {
        let m = s.ray_count();
        for r in 1..=3usize {
            let classes: Vec<Divisor> = (0..r - 1).map(|k| Divisor::ray(m, k)).collect();
            surface_g_series(s, &classes, r, if r == 3 { 2 } else { 3 })?;
        }
    }
    Ok(Outcome { pass: pole_checks() > before, detail: format!("{} chart products regular at u=0", pole_checks()) })
}

fn run(k: usize, name: &str, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let t = Instant::now();
    let (ok, detail) = match f() {
        Ok(o) => (o.pass, o.detail),
        Err(e) => (false, format!("error: {}", e)),
    };
    println!("criterion {:>2} {}: {} ({}; {:.1}s)", k, if ok { "PASS" } else { "FAIL" }, name, detail, t.elapsed().as_secs_f64());
    ok
}

fn main() -> ExitCode {
    // Extraction failures (span or residual) surface in criteria 4 to 8.
    let t = Instant::now();
    let c2 = build_configurations(2);
    let c3 = build_configurations(3);
    let u2: Result<UniversalSeries> = c2.as_ref().map_err(|e| vwcore::Error::Unsupported(e.to_string())).and_then(|c| extract_with(2, 6, c));
    let u3: Result<UniversalSeries> = c3.as_ref().map_err(|e| vwcore::Error::Unsupported(e.to_string())).and_then(|c| extract_with(3, 4, c));
    eprintln!("universal series extracted in {:.1}s", t.elapsed().as_secs_f64());
    let take = |u: &Result<UniversalSeries>| -> Result<UniversalSeries> { u.as_ref().map(|u| u.clone()).map_err(|e| vwcore::Error::Unsupported(e.to_string())) };

    let mut ok = Vec::new();
    ok.push(run(1, "framing permutation and inversion", framing_symmetry));
    ok.push(run(2, "Y=1 tuple counts", euler_counts));
    ok.push(run(3, "blow-up formula at e_i = y^-i", klt));
    ok.push(run(4, "A-series product form", || {
        Ok(from_reports(vec![verify_a_closed_form(&take(&u2)?, 6)?, verify_a_closed_form(&take(&u3)?, 3)?]))
    }));
    ok.push(run(5, "rank-2 closed forms for Bbar and C11bar", || Ok(from_reports(vec![verify_rank2_closed_forms(&take(&u2)?, 4)?]))));
    ok.push(run(6, "rank-3 symmetry relations", || Ok(from_reports(vec![verify_symmetry_relations(&take(&u3)?, 3)]))));
    ok.push(run(7, "blow-up relations for the universal series", || {
        Ok(from_reports(vec![
            verify_blowup_relations(&take(&u2)?, 3, 2)?,
            verify_blowup_relations(&take(&u3)?, 3, 2)?,
            verify_theta_dft(2, 3),
            verify_theta_dft(3, 3),
        ]))
    }));
    ok.push(run(8, "universality residual", || {
        let (u2, u3) = (take(&u2)?, take(&u3)?);
        let c2 = c2.as_ref().map_err(|e| vwcore::Error::Unsupported(e.to_string()))?;
        let c3 = c3.as_ref().map_err(|e| vwcore::Error::Unsupported(e.to_string()))?;
        Ok(from_reports(vec![verify_universality(&u2, c2, 6)?, verify_universality(&u3, c3, 4)?]))
    }));
    ok.push(run(9, "pole cancellation on chart products", pole_cancellation));
    ok.push(run(10, "Upsilon closed form against the S-ratio", || {
        Ok(from_reports((1..=3).map(|r| verify_upsilon_closed_form(r, -2, 2)).collect::<Result<_>>()?))
    }));
    ok.push(run(11, "pair character box-sum against arm/leg", || Ok(pair_oracle())));
    ok.push(run(12, "direct route against Nekrasov route", || {
        let mut reps = Vec::new();
        for r in 1..=3 {
            for n in 1..=2 {
                reps.push(verify_route_equality(r, n)?);
            }
        }
        Ok(from_reports(reps))
    }));
    ok.push(run(13, "rank-2 corollary assembly", || Ok(from_reports(vec![verify_rank2_corollary(&corollary_surfaces(), 3)?]))));

    let failed = ok.iter().filter(|&&b| !b).count();
    println!("{} of {} criteria pass", ok.len() - failed, ok.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
