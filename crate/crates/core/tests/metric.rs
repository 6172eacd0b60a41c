use relmetric::constructions::comb::{channel_point, comb_reference_point};
use relmetric::constructions::{comb_domain, CombSpec};
use relmetric::metric::{
    check_metric_axioms, check_property_circ, check_rho_equals_ambient, check_strict_convexity, distance_matrix, rho,
    values, MetricConfig,
};
use relmetric::{GeomError, PlanarDomain, Point2, Polygon, Segment2, Side, Terminal};

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn t(x: f64, y: f64) -> Terminal {
    Terminal::new(p(x, y))
}

fn square() -> Polygon {
    Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]).unwrap()
}

fn l_shape() -> PlanarDomain {
    PlanarDomain::polygon(Polygon::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(2.0, 1.0), p(1.0, 1.0), p(1.0, 2.0), p(0.0, 2.0)]).unwrap())
        .unwrap()
}

fn slit_square() -> PlanarDomain {
    PlanarDomain::new(square(), vec![], vec![Segment2::new(p(0.5, 0.0), p(0.5, 0.5)).unwrap()]).unwrap()
}

#[test]
fn identity_and_slit_sides() {
    let mc = MetricConfig::default();
    let d = PlanarDomain::polygon(square()).unwrap();
    assert_eq!(rho(&d, t(1.0, 0.3), t(1.0, 0.3), &mc).unwrap().value, 0.0);
    let s = slit_square();
    let l = Terminal::with_hint(p(0.5, 0.25), Some(Side::Left));
    let r = Terminal::with_hint(p(0.5, 0.25), Some(Side::Right));
    let v = rho(&s, l, r, &mc).unwrap();
    assert!((v.value - 0.5).abs() < 1e-9, "{v:?}");
    assert!(v.per_offset.iter().all(|&(d, len)| (len - v.value).abs() <= 2.0 * d + 1e-9));
}

#[test]
fn square_corner_pattern() {
    let d = PlanarDomain::polygon(square()).unwrap();
    let pts = [t(0.0, 0.0), t(1.0, 0.0), t(1.0, 1.0), t(0.0, 1.0)];
    let m = values(&distance_matrix(&d, &pts, &MetricConfig::default()).unwrap());
    for i in 0..4 {
        assert_eq!(m[i][i], 0.0);
        for j in 0..4 {
            let want = match (i + 4 - j) % 4 {
                0 => 0.0,
                2 => 2f64.sqrt(),
                _ => 1.0,
            };
            assert!((m[i][j] - want).abs() < 1e-12);
        }
    }
}

#[test]
fn comb_column_grows_toward_cap() {
    let d = comb_domain(&CombSpec::new(10)).unwrap();
    let mut pts = vec![Terminal::new(comb_reference_point())];
    pts.extend((2..=10).map(|n| Terminal::new(channel_point(n))));
    let m = values(&distance_matrix(&d, &pts, &MetricConfig::default()).unwrap());
    assert!(check_metric_axioms(&m, 1e-6).is_clean());
    for w in m[0][1..].windows(2) {
        assert!(w[1] > w[0], "{:?}", &m[0]);
    }
}

#[test]
fn planted_defect_and_projected_model() {
    let mut m = vec![vec![0.0, 0.1, 0.2], vec![0.1, 0.0, 0.1], vec![0.2, 0.1, 0.0]];
    m[0][2] = 10.0;
    m[2][0] = 10.0;
    assert!(!check_metric_axioms(&m, 1e-6).triangle_violations.is_empty());
    // A, O, D with ρ(A,O) = ρ(O,D) = 1 and ρ(A,D) ≥ 12/5
    let aod = vec![vec![0.0, 1.0, 2.4], vec![1.0, 0.0, 1.0], vec![2.4, 1.0, 0.0]];
    assert!(check_metric_axioms(&aod, 1e-6).triangle_violations.contains(&(0, 1, 2)));
}

#[test]
fn strict_convexity_at_resolution() {
    let mc = MetricConfig::default();
    let g = PlanarDomain::polygon(Polygon::regular(64, 1.0, 0.0)).unwrap();
    let v = g.outer().vertices().to_vec();
    let mids: Vec<Terminal> = (0..64).step_by(4).map(|i| Terminal::new(v[i].lerp(v[(i + 1) % 64], 0.5))).collect();
    let r = check_strict_convexity(&g, &mids, 1e-3, &mc).unwrap();
    assert!(r.strictly_convex, "{:?}", r.witnesses.first());
    assert!(check_property_circ(&g, &mids, 1e-3, &mc).unwrap().strictly_convex);
    // two points of one edge: the geodesic is the edge
    let same = [Terminal::new(v[0].lerp(v[1], 0.2)), Terminal::new(v[0].lerp(v[1], 0.8))];
    assert!(!check_strict_convexity(&g, &same, 1e-4, &mc).unwrap().strictly_convex);
    // around the reflex corner of an L
    let l = l_shape();
    let r = check_property_circ(&l, &[t(2.0, 0.5), t(0.5, 2.0)], 1e-3, &mc).unwrap();
    assert!(!r.strictly_convex);
    assert!(r.witnesses[0].at.dist(p(1.0, 1.0)) < 1e-9);
}

#[test]
fn ambient_discrepancy() {
    let mc = MetricConfig::default();
    let sq = PlanarDomain::polygon(square()).unwrap();
    let pairs = [(t(0.0, 0.0), t(1.0, 1.0)), (t(0.2, 0.9), t(0.7, 0.1))];
    assert!(check_rho_equals_ambient(&sq, &pairs, &mc).unwrap().max_discrepancy <= 1e-9);
    let l = check_rho_equals_ambient(&l_shape(), &[(t(1.5, 0.5), t(0.5, 1.5)), (t(2.0, 1.0), t(1.0, 2.0))], &mc).unwrap();
    // bent at (1,1): 2·√(0.5) against √2 for the first pair, √2 + ... for the second
    assert!(l.max_discrepancy > 0.1);
    let s = check_rho_equals_ambient(&slit_square(), &[(t(0.2, 0.1), t(0.8, 0.1))], &mc).unwrap();
    assert!((s.max_discrepancy - 0.4).abs() < 1e-9);
}

#[test]
fn wall_splitting_domain_rejected() {
    let walled = PlanarDomain::new(square(), vec![], vec![Segment2::new(p(0.5, 0.0), p(0.5, 1.0)).unwrap()]);
    assert!(matches!(walled, Err(GeomError::DisconnectedInterior)));
}
