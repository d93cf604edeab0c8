use std::f64::consts::PI;

use kdist::body::{ChordQuery, ConvexBody, Direction, Polygon};
use kdist::distset::{distance_set, distance_set_all_pairs, Family, Mode, PointSet};
use kdist::fourier::{body_ft, surface_ft, transform, Frequency, Kind, Method};
use kdist::fractal::{
    box_dim, cantor_build, delta_cover, difference_cover, CantorSpec, DioSpec, IntervalUnion,
};
use kdist::scalar::ratio;
use kdist::{Body, Rational};
use proptest::prelude::*;

fn bodies() -> Vec<(&'static str, Body)> {
    vec![
        ("disk", ConvexBody::disk()),
        ("square", ConvexBody::square()),
        ("ellipse", ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap()),
        ("l1", ConvexBody::lp_ball(2, 1.0).unwrap()),
        ("l3", ConvexBody::lp_ball(2, 3.0).unwrap()),
        ("hexagon", ConvexBody::random_symmetric_polygon(3, 7).unwrap()),
        ("radial", ConvexBody::radial((0..64).map(|k| 1.0 + 0.1 * (2.0 * PI * k as f64 / 64.0).cos().powi(2)).collect()).unwrap()),
    ]
}

fn rational_polygon() -> Body {
    let half = [[ratio(1, 1), ratio(-1, 2)], [ratio(1, 1), ratio(1, 3)], [ratio(-1, 4), ratio(1, 1)]];
    ConvexBody::exact_polygon_body(Polygon::from_half(&half).unwrap()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_axioms(x in prop::array::uniform2(-5.0..5.0f64), y in prop::array::uniform2(-5.0..5.0f64), t in -4.0..4.0f64) {
        for (name, b) in bodies() {
            let g = |v: [f64; 2]| b.gauge(&v);
            prop_assert!(close(g([t * x[0], t * x[1]]), t.abs() * g(x), 1e-10), "{name}");
            prop_assert!(g([x[0] + y[0], x[1] + y[1]]) <= g(x) + g(y) + 1e-10, "{name}");
            prop_assert_eq!(g(x), g([-x[0], -x[1]]), "{}", name);
            let n = g(x);
            if n > 1e-6 {
                prop_assert!((g([x[0] / n, x[1] / n]) - 1.0).abs() <= 1e-8, "{name}");
            }
        }
    }

    #[test]
    fn lp_support_is_dual_norm(p in 1.1..6.0f64, theta in 0.0..(2.0 * PI)) {
        let b = ConvexBody::<f64>::lp_ball(2, p).unwrap();
        let dual = p / (p - 1.0);
        let (s, c) = theta.sin_cos();
        let expected = (c.abs().powf(dual) + s.abs().powf(dual)).powf(1.0 / dual);
        prop_assert!(close(b.support(&Direction::from_angle(theta)), expected, 1e-9));
    }

    #[test]
    fn chords_grow_with_depth(theta in 0.0..(2.0 * PI)) {
        for (name, b) in bodies() {
            let half = b.width(&Direction::from_angle(theta)) / 2.0;
            let mut prev = 0.0;
            for k in 1..=40 {
                let eps = half * k as f64 / 40.0;
                let l = b.chord_length(&ChordQuery::new(theta, eps)).unwrap();
                prop_assert!(l >= prev - 1e-10, "{name}: θ = {theta}, ε = {eps}");
                prev = l;
            }
        }
    }

    #[test]
    fn exact_polygon_chords_agree(n in 1i128..64, d in 1i128..64, eps_num in 1i128..50) {
        let body = rational_polygon();
        let exact = body.exact_polygon().unwrap();
        let (nx, ny) = (Rational::from_integer(n), Rational::from_integer(d));
        let eps = Rational::new(eps_num, 100);
        // unnormalised rational direction: the chord scales with |w|
        let lw = exact.chord([nx, ny], eps).map(kdist::body::rational_to_f64);
        let norm = ((n * n + d * d) as f64).sqrt();
        let theta = (d as f64).atan2(n as f64);
        let numeric = body.chord_length(&ChordQuery::new(theta, kdist::body::rational_to_f64(eps) / norm));
        if let (Some(lw), Ok(l)) = (lw, numeric) {
            prop_assert!((lw / norm - l).abs() <= 1e-12, "{lw} {l}");
        }
    }

    #[test]
    fn hermitian_symmetry(r in 0.5..64.0f64, theta in 0.0..(2.0 * PI)) {
        for (name, b) in bodies() {
            let xi = Frequency::planar(r, theta);
            let neg = Frequency::new(xi.coords().iter().map(|v| -v).collect()).unwrap();
            for kind in [Kind::Surface, Kind::Body] {
                let a = transform(&b, &xi, kind, Method::Auto).unwrap();
                let c = transform(&b, &neg, kind, Method::Auto).unwrap();
                prop_assert!((a - c.conj()).norm() <= 1e-8 * (1.0 + a.norm()), "{name}");
            }
        }
    }

    #[test]
    fn polygon_closed_form_matches_quadrature(r in 0.5..128.0f64, theta in 0.0..(2.0 * PI)) {
        for b in [ConvexBody::<f64>::square(), ConvexBody::random_symmetric_polygon(3, 7).unwrap(), rational_polygon()] {
            let xi = Frequency::planar(r, theta);
            for kind in [Kind::Surface, Kind::Body] {
                let closed = transform(&b, &xi, kind, Method::Auto).unwrap();
                let quad = transform(&b, &xi, kind, Method::Quadrature { refine: 1 }).unwrap();
                prop_assert!((closed - quad).norm() <= 1e-8, "{kind:?} R = {r}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn body_transform_scaling(s in 0.25..4.0f64, r in 0.5..32.0f64, theta in 0.0..(2.0 * PI)) {
        for (name, b) in bodies() {
            // general l^p balls have no scaled representation
            let Ok(scaled) = b.scaled(s) else { continue };
            let xi = Frequency::planar(r, theta);
            let lhs = body_ft(&scaled, &xi).unwrap();
            let rhs = body_ft(&b, &Frequency::planar(r * s, theta)).unwrap() * (s * s);
            prop_assert!((lhs - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()), "{name}");
        }
    }

    #[test]
    fn box_transform_is_sinc_product(a in 0.2..3.0f64, b in 0.2..3.0f64, x in -20.0..20.0f64, y in -20.0..20.0f64) {
        let bx = ConvexBody::<f64>::cuboid(vec![a, b]).unwrap();
        let sinc = |h: f64, t: f64| if t == 0.0 { 2.0 * h } else { (2.0 * PI * h * t).sin() / (PI * t) };
        let v = body_ft(&bx, &Frequency::new(vec![x, y]).unwrap()).unwrap();
        prop_assert!((v.re - sinc(a, x) * sinc(b, y)).abs() <= 8.0 * f64::EPSILON * 4.0 * a * b);
        prop_assert_eq!(v.im, 0.0);
    }

    #[test]
    fn isometry_invariance(pts in prop::collection::vec(prop::array::uniform2(-8i32..8), 3..24), angle in 0.0..(2.0 * PI)) {
        let s = PointSet::explicit(pts.iter().map(|p| vec![p[0] as f64, p[1] as f64]).collect()).unwrap();
        prop_assume!(s.len() >= 2);
        let disk = ConvexBody::disk();
        let a = distance_set(&s, &disk, Mode::FloatTol).unwrap();
        let b = distance_set(&s.rotate_all(angle).unwrap(), &disk, Mode::FloatTol).unwrap();
        prop_assert_eq!(a.count(), b.count());
        prop_assert!(a.values.iter().zip(&b.values).all(|(x, y)| (x - y).abs() <= 1e-9 * x.max(1.0)));
    }

    #[test]
    fn scaling_covariance(pts in prop::collection::vec(prop::array::uniform2(-6i32..6), 3..16), num in 1i128..9, den in 1i128..9) {
        let s = PointSet::explicit(pts.iter().map(|p| vec![p[0] as f64, p[1] as f64]).collect()).unwrap();
        prop_assume!(s.len() >= 2);
        let t = Rational::new(num, den);
        for b in [ConvexBody::disk(), ConvexBody::square(), ConvexBody::lp_ball(2, 1.0).unwrap(), rational_polygon()] {
            let a = distance_set(&s, &b, Mode::ExactRational).unwrap().exact.unwrap();
            let c = distance_set(&s.scale_all(t).unwrap(), &b, Mode::ExactRational).unwrap().exact.unwrap();
            let factor = if a.squared { t * t } else { t };
            prop_assert_eq!(a.keys.iter().map(|k| *k * factor).collect::<Vec<_>>(), c.keys);
        }
    }

    #[test]
    fn counts_grow_under_inclusion(pts in prop::collection::vec(prop::array::uniform2(-6i32..6), 2..16), extra in prop::collection::vec(prop::array::uniform2(-6i32..6), 1..6)) {
        let s = PointSet::explicit(pts.iter().map(|p| vec![p[0] as f64, p[1] as f64]).collect()).unwrap();
        let bigger = s.with_points(extra.iter().map(|p| vec![p[0] as f64, p[1] as f64]).collect()).unwrap();
        for (_, b) in bodies() {
            let small = distance_set(&s, &b, Mode::FloatTol).unwrap();
            let large = distance_set(&bigger, &b, Mode::FloatTol).unwrap();
            prop_assert!(small.count() <= large.count());
            prop_assert_eq!(small.pairs(), s.pair_count());
            prop_assert_eq!(large.pairs(), bigger.pair_count());
        }
    }

    #[test]
    fn interval_union_is_exact(raw in prop::collection::vec((0i128..200, 1i128..40), 1..20), raw2 in prop::collection::vec((0i128..200, 1i128..40), 1..20)) {
        let mk = |v: &[(i128, i128)]| IntervalUnion::new(v.iter().map(|(a, l)| (Rational::new(*a, 7), Rational::new(a + l, 7))).collect()).unwrap();
        let (u, v) = (mk(&raw), mk(&raw2));
        let w = u.union(&v);
        prop_assert!(w.contains_union(&u) && w.contains_union(&v));
        prop_assert!(w.total_length() <= u.total_length() + v.total_length());
        prop_assert!(w.total_length() >= u.total_length().max(v.total_length()));
        prop_assert!(w.intervals().windows(2).all(|p| p[0].1 < p[1].0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fast_path_matches_all_pairs(q in 1u64..=64) {
        let s = PointSet::<f64>::lattice(2, q).unwrap();
        let mut list = bodies();
        list.push(("rational polygon", rational_polygon()));
        for (name, b) in list {
            let exact_ok = b.exact_polygon().is_some() || matches!(name, "disk" | "square" | "l1");
            let modes: &[Mode] = if exact_ok { &[Mode::ExactRational, Mode::FloatTol] } else { &[Mode::FloatTol] };
            for &mode in modes {
                // all pairs beyond q = 24 only for the exact keys, which are cheap
                if mode == Mode::FloatTol && q > 24 && name != "square" {
                    continue;
                }
                let fast = distance_set(&s, &b, mode).unwrap();
                let slow = distance_set_all_pairs(&s, &b, mode).unwrap();
                match mode {
                    Mode::ExactRational => prop_assert_eq!(&fast, &slow, "{} q = {}", name, q),
                    Mode::FloatTol => {
                        prop_assert_eq!(fast.count(), slow.count(), "{} q = {}", name, q);
                        prop_assert!(fast.values.iter().zip(&slow.values).all(|(a, b)| (a - b).abs() <= 1e-9 * a));
                        prop_assert_eq!(fast.pairs(), slow.pairs());
                    }
                }
            }
        }
    }

    #[test]
    fn rotated_window_fast_path(q in 1u64..=20, angle in 0.0..(2.0 * PI)) {
        let s = Family::Rotated { angle }.build::<f64>(q).unwrap();
        for (_, b) in bodies() {
            let fast = distance_set(&s, &b, Mode::FloatTol).unwrap();
            let slow = distance_set_all_pairs(&s, &b, Mode::FloatTol).unwrap();
            prop_assert_eq!(fast.count(), slow.count());
            prop_assert_eq!(fast.multiplicities, slow.multiplicities);
        }
    }

    #[test]
    fn lattice_counts_grow_with_q(q in 1u64..40) {
        for (_, b) in bodies() {
            let a = distance_set(&PointSet::<f64>::lattice(2, q).unwrap(), &b, Mode::FloatTol).unwrap();
            let c = distance_set(&PointSet::<f64>::lattice(2, q + 1).unwrap(), &b, Mode::FloatTol).unwrap();
            prop_assert!(a.count() <= c.count());
        }
    }

    #[test]
    fn cantor_nesting_and_identities(m in 2u32..5, n in 1u32..6) {
        let outer = cantor_build(&CantorSpec::new(m, n).unwrap()).unwrap();
        let inner = cantor_build(&CantorSpec::new(m, n + 1).unwrap()).unwrap();
        prop_assert!(outer.contains_union(&inner));
        let base = i128::from(2 * m);
        let c = difference_cover(&CantorSpec::new(m, n).unwrap()).unwrap();
        prop_assert_eq!(c.pre_merge_count, u64::from(2 * m - 1).pow(n));
        let expected = Rational::new(2 * (base - 1).pow(n), base.pow(n));
        prop_assert_eq!(c.pre_merge_length, expected);
        prop_assert_eq!(outer.total_length(), Rational::new(i128::from(m).pow(n), base.pow(n)));
    }

    #[test]
    fn single_interval_box_dimension(a in 0i128..1000, len in 1i128..1000) {
        let lo = Rational::new(a, 1000);
        let hi = Rational::new(a + len, 1000);
        let u = IntervalUnion::new(vec![(lo, hi)]).unwrap();
        let l0 = (1000.0 / len as f64).log2().ceil() as u32;
        let levels: Vec<u32> = (l0 + 8..=l0 + 13).collect();
        let bd = box_dim(&u, &levels).unwrap();
        prop_assert!(bd.estimate >= 1.0 - 0.01, "{}", bd.estimate);
    }

    #[test]
    fn delta_cover_counts_distances(q in 2u64..24, s in 0.5..2.0f64) {
        for (_, b) in bodies() {
            let pts = PointSet::<f64>::lattice(2, q).unwrap();
            let spec = DioSpec::new(pts.clone(), q, s).unwrap();
            let cover = delta_cover(&spec, &b, Mode::FloatTol).unwrap();
            prop_assert_eq!(cover.count, distance_set(&pts, &b, Mode::FloatTol).unwrap().count());
        }
    }
}

#[test]
fn quadrature_converges_under_refinement() {
    let bodies = [
        ConvexBody::<f64>::disk(),
        ConvexBody::square(),
        ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap(),
    ];
    for b in &bodies {
        for r in [16.0, 64.0] {
            let xi = Frequency::planar(r, 0.37);
            let one = transform(b, &xi, Kind::Surface, Method::Quadrature { refine: 1 }).unwrap();
            let two = transform(b, &xi, Kind::Surface, Method::Quadrature { refine: 2 }).unwrap();
            let scale = surface_ft(b, &Frequency::planar(0.0, 0.0)).unwrap().re;
            assert!((one - two).norm() < 1e-7 * scale, "R = {r}: {one} vs {two}");
        }
    }
}
