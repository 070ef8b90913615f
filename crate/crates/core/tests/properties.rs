use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use cheeger_core::cantor::{build_omega_eps, bump_measures, cantor_iterate, omega_eps_measures};
use cheeger_core::geom::{chord_angle_eta, CircularArc};
use cheeger_core::porous::{
    build_omega0, default_sequences, local_perimeter_ratio, porous_measures, validate_constraints, IndexPair,
};
use cheeger_core::raster::{grid_area, grid_perimeter, rasterize, rasterize_predicate};
use cheeger_core::solver::{solve_cheeger, CheegerConfig};
use cheeger_core::verify::{check_arc_min_lemma, check_competitor_gain, run_angle_suite};
use cheeger_core::{Disk, DomainSpec, Point2};

fn index_pair() -> impl Strategy<Value = IndexPair> {
    (1u32..200).prop_flat_map(|j1| (Just(j1), 1..=j1)).prop_map(|(a, b)| IndexPair::new(a, b).unwrap())
}

proptest! {
    #[test]
    fn rank_and_successor_agree(j in index_pair()) {
        prop_assert_eq!(IndexPair::from_rank(j.rank()).unwrap(), j);
        prop_assert_eq!(j.successor().rank(), j.rank() + 1);
        let t = j.theta();
        prop_assert!(t > 0.0 && t < PI / 2.0);
    }

    #[test]
    fn arc_endpoints_round_trip(
        cx in -2.0..2.0f64, cy in -2.0..2.0f64, r in 0.01..3.0f64,
        start in -10.0..10.0f64, sweep in 0.01..6.2f64, ccw in any::<bool>(),
    ) {
        let sweep = if ccw { sweep } else { -sweep };
        let arc = CircularArc::from_sweep(Point2::new(cx, cy), r, start, sweep).unwrap();
        let (p, q) = (arc.start_point(), arc.end_point());
        let a0 = (p - arc.center).angle();
        let a1 = (q - arc.center).angle();
        let again = CircularArc::from_sweep(arc.center, arc.radius, a0, sweep).unwrap();
        prop_assert!(again.start_point().dist(p) < 1e-12);
        prop_assert!(again.end_point().dist(q) < 1e-12);
        let raw = if ccw { a1 - a0 } else { a0 - a1 };
        let rederived = raw.rem_euclid(TAU);
        prop_assert!((rederived - sweep.abs()).abs() < 1e-9 || (rederived - sweep.abs()).abs() > TAU - 1e-9);
    }

    #[test]
    fn chord_angle_matches_sine(r in 0.05..2.0f64, start in 0.0..6.2f64, sweep in 0.05..3.0f64, t in 0.01..1.0f64) {
        let arc = CircularArc::from_sweep(Point2::new(0.3, -0.2), r, start, sweep).unwrap();
        let p0 = arc.start_point();
        let p = arc.point_at(t);
        let eta = chord_angle_eta(&arc, p0, p).unwrap();
        prop_assert!((eta.sin() - p.dist(p0) / (2.0 * r)).abs() <= 1e-10);
    }

    #[test]
    fn cantor_segments_and_gaps_tile(eps in 0.001..0.4f64, depth in 1usize..12) {
        let c = cantor_iterate(eps, depth).unwrap();
        let seg: f64 = c.segments().map(|s| s.length()).sum();
        let gap: f64 = c.gaps().map(|g| 2.0 * g.half_length).sum();
        prop_assert!((seg + gap - 2.0 * eps).abs() < 1e-12);
        // each bump fills its gap and bumps of one level do not touch
        let mut prev: Option<(usize, f64)> = None;
        for g in c.gaps() {
            prop_assert_eq!(c.gap_containing(g.midpoint).map(|h| h.level), Some(g.level));
            if let Some((level, right)) = prev {
                if level == g.level {
                    prop_assert!(g.midpoint - g.half_length > right);
                }
            }
            prev = Some((g.level, g.midpoint + g.half_length));
        }
    }

    #[test]
    fn porous_holes_are_disjoint(eps1 in 0.01..0.249f64, safety in 0.05..=1.0f64) {
        let seq = default_sequences(eps1, safety).unwrap();
        let rep = validate_constraints(&seq, 6).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures());
        let spec = build_omega0(&seq, 6, IndexPair::first()).unwrap();
        let holes = spec.holes();
        for (k, a) in holes.iter().enumerate() {
            prop_assert!(a.center.norm() + a.radius < 1.0);
            for b in &holes[k + 1..] {
                prop_assert!(a.center.dist(b.center) > a.radius + b.radius);
            }
        }
    }

    #[test]
    fn delta_below_eta_bound(eps1 in 0.01..0.249f64, safety in 0.05..=1.0f64) {
        let seq = default_sequences(eps1, safety).unwrap();
        let spec = build_omega0(&seq, 10, IndexPair::first()).unwrap();
        let m = porous_measures(&spec, &seq, 10).unwrap();
        let (s1, _) = seq.tail_sums(0).unwrap();
        let eta = s1.hi;
        prop_assert!(m.delta <= (1.0 + eta) / (1.0 - eta) - 1.0 + 1e-18);
        prop_assert!(m.delta_bound_ok);
    }

    #[test]
    fn local_ratio_bounded_linearly(angle in 0.0..=PI / 2.0, s in 0.0005..0.04f64) {
        let seq = default_sequences(0.2, 1.0).unwrap();
        let spec = build_omega0(&seq, 12, IndexPair::first()).unwrap();
        let y = Point2::polar(1.0, angle);
        let ratio = local_perimeter_ratio(&spec, y, s).unwrap();
        prop_assert!(ratio >= 1.0 && ratio <= 1.0 + 50.0 * s);
    }

    #[test]
    fn competitor_bound_monotone_in_radius(k in 1u64..40, shrink in 0.0..1.0f64, side in any::<bool>()) {
        let seq = default_sequences(0.2, 1.0).unwrap();
        let j = IndexPair::from_rank(k).unwrap();
        let eps = seq.eps(j).unwrap();
        prop_assume!(eps > 1e-6);
        let r0 = seq.radius(j).unwrap();
        let c = seq.center(j).unwrap();
        let run = |r: f64| {
            let t = Point2::polar(1.0, j.theta() + PI / 2.0) * if side { 1.0 } else { -1.0 };
            let (p0, q0) = (c + t * r, c - t * r);
            let (p0, q0) = if p0.norm() >= q0.norm() { (q0, p0) } else { (p0, q0) };
            let eps_seq = cheeger_core::porous::SequenceParams::explicit(vec![eps], vec![r], None).unwrap();
            check_competitor_gain(&eps_seq, IndexPair::first(), p0, q0).unwrap()
        };
        let base = run(r0);
        let smaller = run(r0 * (0.05 + 0.95 * shrink));
        if base.passed {
            prop_assert!(smaller.passed || smaller.skipped.is_some(), "{:?}", smaller);
        }
    }

    #[test]
    fn grid_measures_translate_by_whole_pixels(dx in -20i32..20, dy in -20i32..20) {
        let n = 128;
        let inside = |p: Point2| (p - Point2::new(0.5, 0.5)).norm() < 0.3;
        let base = rasterize_predicate(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), n, inside).unwrap();
        let h = 1.0 / n as f64;
        let off = Point2::new(dx as f64 * h, dy as f64 * h);
        let moved = rasterize_predicate(off, Point2::new(1.0, 1.0) + off, n, |p| inside(p - off)).unwrap();
        prop_assert!((grid_area(&base, 0.5) - grid_area(&moved, 0.5)).abs() < 1e-9);
        prop_assert!((grid_perimeter(&base, 0.5) - grid_perimeter(&moved, 0.5)).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn domain_json_round_trip_is_exact(eps in 0.005..0.04f64, depth in 1usize..20, eps1 in 0.02..0.24f64, jd in 1u32..10) {
        let cantor = build_omega_eps(eps, depth).unwrap();
        let back = DomainSpec::from_json(&cantor.to_json().unwrap()).unwrap();
        let (a, b) = (omega_eps_measures(&cantor).unwrap(), omega_eps_measures(&back).unwrap());
        prop_assert_eq!(a.perimeter, b.perimeter);
        prop_assert_eq!(a.topo_boundary_h1, b.topo_boundary_h1);

        let seq = default_sequences(eps1, 1.0).unwrap();
        let holes = build_omega0(&seq, jd, IndexPair::first()).unwrap();
        let back = DomainSpec::from_json(&holes.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &holes);
        let (a, b) = (porous_measures(&holes, &seq, jd).unwrap(), porous_measures(&back, &seq, jd).unwrap());
        prop_assert_eq!(a.delta_interval, b.delta_interval);
    }

    #[test]
    fn sampled_suites_are_deterministic(seed in any::<u64>()) {
        let a = check_arc_min_lemma(50, seed).unwrap();
        let b = check_arc_min_lemma(50, seed).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let a = run_angle_suite(20, seed).unwrap();
        let b = run_angle_suite(20, seed).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn bump_measures_match_quadrature() {
    for delta in [0.01, 0.05, 0.1, 0.3, 0.5] {
        let (p, a) = bump_measures(delta).unwrap();
        // f(x) = 1 - sqrt(1 - (delta - |x|)^2) on |x| <= delta, midpoint rule, above and below
        let m = 200_000;
        let (mut len, mut area) = (0.0, 0.0);
        let h = 2.0 * delta / m as f64;
        for k in 0..m {
            let x = -delta + (k as f64 + 0.5) * h;
            let u = delta - x.abs();
            let f = 1.0 - (1.0 - u * u).sqrt();
            let slope2 = u * u / (1.0 - u * u);
            area += 2.0 * f * h;
            len += 2.0 * (1.0 + slope2).sqrt() * h;
        }
        assert!((a - area).abs() < 1e-8, "delta {delta}: area {a} vs {area}");
        assert!((p - len).abs() < 1e-8, "delta {delta}: length {p} vs {len}");
    }
}

#[test]
fn cantor_measures_tighten_with_depth() {
    let eps = 0.04;
    let mut prev: Option<(f64, f64, f64, f64)> = None;
    for depth in 1..=20 {
        let m = omega_eps_measures(&build_omega_eps(eps, depth).unwrap()).unwrap();
        let cur = (m.perimeter.lo, m.perimeter.hi, m.area.lo, m.area.hi);
        if let Some((plo, phi, alo, ahi)) = prev {
            assert!(cur.0 >= plo - 1e-15 && cur.1 <= phi + 1e-15, "perimeter at depth {depth}");
            assert!(cur.2 >= alo - 1e-15 && cur.3 <= ahi + 1e-15, "area at depth {depth}");
        }
        prev = Some(cur);
    }
}

#[test]
fn porous_ladder_decreases_to_disk() {
    let seq = default_sequences(0.2, 1.0).unwrap();
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=20u64 {
        let start = IndexPair::from_rank(k).unwrap();
        let spec = build_omega0(&seq, 12, start).unwrap();
        let m = porous_measures(&spec, &seq, 12).unwrap();
        let excess = m.delta_interval.mid();
        assert!(excess > 0.0, "k = {k}");
        assert!(m.perimeter.hi >= TAU && m.area.lo <= PI);
        if let Some((area, p)) = prev {
            assert!(m.area.mid() >= area - 1e-15 && excess < p, "k = {k}: {excess} vs {p}");
        }
        prev = Some((m.area.mid(), excess));
    }
}

#[test]
fn solver_monotone_under_inclusion() {
    let cfg = CheegerConfig::default();
    let outer = rasterize(&DomainSpec::plain_disk(), 128).unwrap();
    let inner_spec =
        DomainSpec::disk_with_holes(Disk::unit(), vec![Disk::new(Point2::new(0.0, 0.0), 0.2).unwrap()]).unwrap();
    let inner = rasterize(&inner_spec, 128).unwrap();
    let ho = solve_cheeger(&outer, &cfg).unwrap().h_estimate;
    let hi = solve_cheeger(&inner, &cfg).unwrap().h_estimate;
    assert!(hi >= ho - 2.0 * cfg.outer_tol, "inner {hi} outer {ho}");
}

#[test]
fn solver_scale_covariant_with_area_bound() {
    let cfg = CheegerConfig::default();
    for lambda in [0.5, 2.0] {
        let spec = DomainSpec::disk_with_holes(Disk::new(Point2::new(0.0, 0.0), lambda).unwrap(), vec![]).unwrap();
        let field = rasterize(&spec, 128).unwrap();
        let r = solve_cheeger(&field, &cfg).unwrap();
        assert!((r.h_estimate * lambda - 2.0).abs() < 0.05, "lambda {lambda}: h {}", r.h_estimate);
        let bound = PI * (2.0 / r.h_estimate).powi(2);
        assert!(r.area >= bound * 0.97, "area {} vs {bound}", r.area);
    }
}
