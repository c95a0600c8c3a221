//! End-to-end runs of the verification pipelines at small order.

use vwcore::algebra::{Ring, SubstitutionSpec};
use vwcore::blowup::verify_klt;
use vwcore::cache::Cache;
use vwcore::direct::{route_charts, vertical_g_series_direct};
use vwcore::nekrasov::nekrasov_series;
use vwcore::toric::{surface_g_series, Divisor, ToricSurface};
use vwcore::universal::{build_configurations, check_span, extract, verify_universality};
use vwcore::vw::{minimal_surface, rank2_corollary_closed, required_series_order, vertical_partition_function, SurfaceInput};
use vwcore::Error;

#[test]
fn klt_negative_ell_and_rank_one() {
    for (r, ell) in [(1, 0), (1, 1), (2, -1), (2, 2)] {
        let rep = verify_klt(r, ell, 2).unwrap();
        assert!(rep.pass, "{}", rep);
    }
}

#[test]
fn too_few_configurations_are_rejected() {
    let c = build_configurations(2).unwrap();
    assert!(matches!(check_span(2, &c[..2]), Err(Error::SpanDeficient { .. })));
}

#[test]
fn rank2_extraction_reproduces_every_configuration() {
    let u = extract(2, 3).unwrap();
    let rep = verify_universality(&u, &build_configurations(2).unwrap(), 3).unwrap();
    assert!(rep.pass, "{}", rep);
}

#[test]
fn extracted_series_assemble_the_corollary() {
    for s in [minimal_surface(2, -2, 0, 0), minimal_surface(2, 2, 2, 0)] {
        let m = required_series_order(&s, 2, 2);
        let u = extract(2, m).unwrap();
        let z = vertical_partition_function(&s, 2, 2, &u).unwrap();
        assert!(z.first_difference(&rank2_corollary_closed(&s, 2).unwrap()).is_none());
    }
}

#[test]
fn g_series_of_p2_starts_at_one() {
    let s = ToricSurface::p2();
    let g = surface_g_series(&s, &[Divisor::ray(3, 0)], 2, 2).unwrap();
    let (e, c) = g.leading().unwrap();
    assert_eq!(*e, vwcore::algebra::rint(0));
    assert!(c.is_one());
}

#[test]
fn direct_route_rejects_orthogonal_direction() {
    let (_, chart) = route_charts(2).remove(0);
    // (0, 1) kills the coordinate weight t1 of the trivial chart.
    assert!(matches!(vertical_g_series_direct(&chart, 1, [0, 1]), Err(Error::SpecializedWeightTrivial(_))));
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = std::env::temp_dir().join(format!("vwcore-cache-test-{}", std::process::id()));
    let cache = Cache::open(&dir).unwrap();
    let spec = SubstitutionSpec::standard(2, [1, 4]);
    let s = nekrasov_series(2, 2, &spec).unwrap();
    assert!(cache.get(2, 2, &spec).is_none());
    cache.put(2, 2, &spec, &s).unwrap();
    let back = cache.get(2, 2, &spec).unwrap();
    assert_eq!(back.len(), s.len());
    for ((e1, c1), (e2, c2)) in back.terms().zip(s.terms()) {
        assert_eq!(e1, e2);
        assert_eq!(c1, c2);
    }
    for entry in std::fs::read_dir(&dir).unwrap() {
        std::fs::write(entry.unwrap().path(), "garbage").unwrap();
    }
    assert!(cache.get(2, 2, &spec).is_none());
    assert_eq!(cache.stats.snapshot().2, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn surface_json_validation() {
    let good = r#"{"chi": 5, "K2": 5, "gram": [[5]], "K": [1],
        "classes": [{"name": "0", "vector": [0], "sw": 1}, {"name": "K", "vector": [1], "sw": -1}], "c1": [0]}"#;
    let s = SurfaceInput::from_json(good).unwrap();
    assert_eq!(s, minimal_surface(5, 5, 1, 0));
    let bad = r#"{"chi": 1, "K2": 3, "gram": [[1, 0], [1]], "K": [1], "classes": [], "c1": [0], "b1": 2}"#;
    let Err(Error::InvalidSurface(msg)) = SurfaceInput::from_json(bad) else { panic!() };
    assert!(msg.lines().count() >= 3, "{msg}");
    assert!(matches!(SurfaceInput::from_json("{\"chi\": 1}"), Err(Error::Parse(_))));
}
