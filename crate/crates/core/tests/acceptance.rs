//! Acceptance criteria 1-10. Each test prints one `ACn PASS|FAIL` line
//! (visible with `--nocapture`) and then asserts. Tolerances and time
//! limits are pinned below.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relmetric::constructions::family::{confined_length_with, family_members, separating_levels, LengthBoundConfig};
use relmetric::constructions::strips::{default_strip_spirals, star2_constant_holds, STAR2_BOUND};
use relmetric::constructions::comb::{channel_point, comb_reference_point};
use relmetric::constructions::{
    comb_divergence, comb_domain, strips_3d, theorem22_report, verify_length_bound, verify_pigeonhole, verify_star1,
    verify_star2, CombSpec, SegmentFamilySpec,
};
use relmetric::metric::{check_metric_axioms, distance_matrix, extract_geodesic, values, MetricConfig};
use relmetric::random::{random_domain, random_terminals, RandomDomainConfig};
use relmetric::rigidity::{boundary_profile, compare_profiles, euclidean_congruence};
use relmetric::{PlanarDomain, Point2, Polygon, Polyline, Segment2, Terminal, VisibilityGraph};

// pinned tolerances
const LABYRINTH_TARGET: f64 = 10.0;
const FAMILY_THRESHOLD: f64 = 6.0 * 0.99;
const CONTROL_CEILING: f64 = 2.1;
const PROJECTED_TARGET: f64 = 12.0 / 5.0;
const ESCAPE_VALUE: f64 = 4.9282;
const ESCAPE_TOL: f64 = 1e-4;
const COMB_SPREAD: f64 = 0.05;
const AXIOM_TOL: f64 = 1e-6;
const GEODESIC_TOL: f64 = 1e-6;
const ONE_SIDED_TOL: f64 = 1e-9;
const PROFILE_TOL: f64 = 1e-9;
const PERTURBATION: f64 = 1e-3;
const PERTURBED_RESIDUAL: f64 = 1e-4;
const RAY_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-12;
const TRIANGLE_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-9;

// pinned time limits
const AC1_LIMIT: Duration = Duration::from_secs(60);
const AC2_J2_LIMIT: Duration = Duration::from_secs(30);
const AC2_J3_LIMIT: Duration = Duration::from_secs(600);
const AC4_LIMIT: Duration = Duration::from_secs(60);

const RANDOM_DOMAINS: u64 = 20;
const SYNTHETIC_PATHS: u64 = 100;
const ORACLE_INSTANCES: u64 = 1000;

fn verdict(n: usize, pass: bool, detail: String) {
    println!("AC{n} {}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "AC{n} failed: {detail}");
}

#[test]
fn ac01_labyrinth_bound() {
    let t = Instant::now();
    let r = verify_star1(1.0, 1e-3, 20).unwrap();
    let el = t.elapsed();
    let prev = r.previous_length().unwrap_or(0.0);
    let pass = r.length >= LABYRINTH_TARGET && prev < LABYRINTH_TARGET && r.sampling_agrees && el <= AC1_LIMIT;
    verdict(
        1,
        pass,
        format!("M*={} L(M*)={:.6} L(M*-1)={prev:.6} fine={:.6} in {el:.2?}", r.coils, r.length, r.length_fine),
    );
}

#[test]
fn ac02_family_length_bound() {
    let cfg = LengthBoundConfig::default();
    let t = Instant::now();
    let l2 = verify_length_bound(&SegmentFamilySpec::new(2).unwrap(), &cfg).unwrap();
    let t2 = t.elapsed();
    let t = Instant::now();
    let l3 = verify_length_bound(&SegmentFamilySpec::new(3).unwrap(), &cfg).unwrap();
    let t3 = t.elapsed();
    let control = confined_length_with(2, Vec::new(), &cfg).unwrap();
    // first truncation where no level separates A from D
    let l4 = verify_length_bound(&SegmentFamilySpec::new(4).unwrap(), &cfg).unwrap();
    let pass = l2.length >= FAMILY_THRESHOLD
        && l3.length >= l2.length
        && control.length < CONTROL_CEILING
        && l4.length.is_finite()
        && l4.length >= FAMILY_THRESHOLD
        && t2 <= AC2_J2_LIMIT
        && t3 <= AC2_J3_LIMIT;
    verdict(
        2,
        pass,
        format!(
            "L(2)={} ({t2:.2?}) L(3)={} ({t3:.2?}) separating {:?}/{:?}; L(4)={:.6}; control={:.6}",
            l2.length,
            l3.length,
            separating_levels(2, cfg.region_scale),
            separating_levels(3, cfg.region_scale),
            l4.length,
            control.length
        ),
    );
}

#[test]
fn ac03_theorem_chain() {
    let r = theorem22_report(2, &LengthBoundConfig::default()).unwrap();
    let rhs = r.rho_ao + r.rho_od;
    let computed_ok = (r.rho_ao_computed - 1.0).abs() <= 1e-9 && (r.rho_od_computed - 1.0).abs() <= 1e-9;
    let pass = r.projected >= PROJECTED_TARGET
        && PROJECTED_TARGET > rhs
        && (rhs - 2.0).abs() <= 1e-12
        && r.triangle_violated
        && computed_ok
        && (r.escape_constant - ESCAPE_VALUE).abs() <= ESCAPE_TOL
        && r.escape_constant > 4.0;
    verdict(
        3,
        pass,
        format!(
            "(2/5)L(2)={} >= {PROJECTED_TARGET} > {rhs} = rho(A,O)+rho(O,D) [computed {} + {}], escape {:.6}, vacuous={}",
            r.projected, r.rho_ao_computed, r.rho_od_computed, r.escape_constant, r.vacuous
        ),
    );
}

#[test]
fn ac04_comb_divergence() {
    let t = Instant::now();
    let d = comb_divergence(&[4, 8, 16, 32], comb_reference_point(), &MetricConfig::default()).unwrap();
    let el = t.elapsed();
    let spread = d.rows[3].1 - d.rows[0].1;
    let pass = d.strictly_increasing && spread >= COMB_SPREAD && el <= AC4_LIMIT;
    verdict(4, pass, format!("d(N)={:?} spread={spread:.6} in {el:.2?}", d.rows));
}

#[test]
fn ac05_metric_axioms_on_random_domains() {
    let mc = MetricConfig::default();
    let mut violations = 0;
    let mut non_finite = 0;
    for seed in 0..RANDOM_DOMAINS {
        let cfg = RandomDomainConfig {
            vertices: 8 + (seed % 5) as usize,
            with_hole: seed % 3 == 0,
            boundary_slits: 1 + (seed % 2) as usize,
            free_slits: 1,
        };
        let dom = random_domain(seed, &cfg).unwrap();
        assert!(!dom.slits().is_empty());
        let pts = random_terminals(&dom, 12, seed);
        let m = values(&distance_matrix(&dom, &pts, &mc).unwrap());
        let rep = check_metric_axioms(&m, AXIOM_TOL);
        violations += rep.symmetry_violations.len() + rep.triangle_violations.len() + rep.identity_violations.len();
        non_finite += rep.non_finite.len();
    }
    verdict(
        5,
        violations == 0 && non_finite == 0,
        format!("{RANDOM_DOMAINS} domains, 12x12 matrices, {violations} violations, {non_finite} infinite entries"),
    );
}

fn square() -> Polygon {
    Polygon::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)]).unwrap()
}

#[test]
fn ac06_geodesic_identity() {
    let mc = MetricConfig::default();
    let convex = PlanarDomain::polygon(square()).unwrap();
    let slit = PlanarDomain::new(
        square(),
        vec![],
        vec![Segment2::new(Point2::new(0.5, 0.0), Point2::new(0.5, 0.5)).unwrap()],
    )
    .unwrap();
    let comb = comb_domain(&CombSpec::new(8)).unwrap();
    let cases: Vec<(&str, &PlanarDomain, Point2, Point2, f64)> = vec![
        ("convex", &convex, Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), 2f64.sqrt()),
        ("slit", &slit, Point2::new(0.25, 0.25), Point2::new(0.75, 0.25), 0.5f64.sqrt()),
        ("slit", &slit, Point2::new(0.2, 0.1), Point2::new(0.8, 0.1), 1.0),
        ("comb", &comb, channel_point(2), channel_point(5), f64::NAN),
        ("comb", &comb, channel_point(3), channel_point(8), f64::NAN),
    ];
    let mut worst_dev: f64 = 0.0;
    let mut worst_side: f64 = 0.0;
    let mut frozen_ok = true;
    let mut lines = Vec::new();
    for (name, dom, x, y, want) in cases {
        let g = extract_geodesic(dom, Terminal::new(x), Terminal::new(y), &mc).unwrap();
        worst_dev = worst_dev.max(g.max_deviation);
        worst_side = worst_side.max(g.one_sided_excess);
        if want.is_finite() {
            frozen_ok &= (g.length - want).abs() <= 1e-12;
        }
        lines.push(format!("{name}: L={:.6} bends={} dev={:.1e}", g.length, g.path.vertices().len() - 2, g.max_deviation));
    }
    let pass = worst_dev <= GEODESIC_TOL && worst_side <= ONE_SIDED_TOL && frozen_ok;
    verdict(6, pass, format!("{} | max dev {worst_dev:.1e}, one-sided {worst_side:.1e}", lines.join("; ")));
}

#[test]
fn ac07_convex_profiles() {
    let mc = MetricConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    let mut detail = Vec::new();
    for case in 0..4 {
        let poly = if case == 0 { square() } else { common::convex_polygon(&mut rng, 6 + case) };
        let dom = PlanarDomain::polygon(poly.clone()).unwrap();
        let prof = boundary_profile(&dom, 16, &mc).unwrap();
        let eu = prof.euclidean_matrix();
        let gap = (0..16)
            .flat_map(|i| (0..16).map(move |j| (i, j)))
            .map(|(i, j)| (prof.matrix[i][j] - eu[i][j]).abs())
            .fold(0.0, f64::max);
        ok &= gap <= PROFILE_TOL;

        let turn: f64 = rng.gen_range(0.0..6.28);
        let shift = Point2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let rotated = dom.transformed(|p| p.rotated(turn) + shift).unwrap();
        let mirrored = dom.transformed(|p| Point2::new(-p.x, p.y).rotated(turn) + shift).unwrap();
        let mut res = Vec::new();
        for copy in [&rotated, &mirrored] {
            let q = boundary_profile(copy, 16, &mc).unwrap();
            let al = compare_profiles(&prof, &q, PROFILE_TOL).unwrap();
            let cg = euclidean_congruence(&prof, &q, &al, PROFILE_TOL).unwrap();
            ok &= al.residual <= PROFILE_TOL && cg.max_gap <= PROFILE_TOL;
            res.push(al.residual.max(cg.max_gap));
        }

        let bent: Vec<Point2> = poly
            .vertices()
            .iter()
            .map(|&v| v + Point2::polar(PERTURBATION, rng.gen_range(0.0..6.28)))
            .collect();
        let bent = PlanarDomain::polygon(Polygon::new(bent).unwrap()).unwrap();
        let q = boundary_profile(&bent, 16, &mc).unwrap();
        let al = compare_profiles(&prof, &q, PROFILE_TOL).unwrap();
        ok &= al.residual > PERTURBED_RESIDUAL && !al.isometric;
        detail.push(format!("{}-gon: euclid {gap:.1e}, copies {:.1e}/{:.1e}, perturbed {:.2e}", poly.len(), res[0], res[1], al.residual));
    }
    verdict(7, ok, detail.join("; "));
}

#[test]
fn ac08_pigeonhole() {
    let cfg = LengthBoundConfig::default();
    let mut oracle_paths: Vec<(String, usize, Polyline)> = Vec::new();
    let l4 = verify_length_bound(&SegmentFamilySpec::new(4).unwrap(), &cfg).unwrap();
    oracle_paths.push(("family J=4".into(), 4, l4.path.polyline().unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for levels in 2..=3 {
        // the separating level removed, otherwise no path exists
        let members = family_members(&SegmentFamilySpec::new(levels).unwrap()).unwrap();
        let sep = separating_levels(levels, cfg.region_scale);
        let kept: Vec<Segment2> = members.iter().filter(|m| !sep.contains(&m.level)).map(|m| m.segment).collect();
        let r = confined_length_with(levels, kept.clone(), &cfg).unwrap();
        oracle_paths.push((format!("J={levels} without {sep:?}"), levels, r.path.polyline().unwrap()));
        for trial in 0..5 {
            let some: Vec<Segment2> = kept.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            let r = confined_length_with(levels, some, &cfg).unwrap();
            oracle_paths.push((format!("J={levels} subset {trial}"), levels, r.path.polyline().unwrap()));
        }
        let r = confined_length_with(levels, Vec::new(), &cfg).unwrap();
        oracle_paths.push((format!("J={levels} empty"), levels, r.path.polyline().unwrap()));
    }
    let mut failures = Vec::new();
    for (name, levels, path) in &oracle_paths {
        let r = verify_pigeonhole(path, *levels).unwrap();
        if !r.satisfied() {
            failures.push(name.clone());
        }
    }
    for seed in 0..SYNTHETIC_PATHS {
        let levels = 2 + (seed % 3) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let path = Polyline::new(common::synthetic_confined_path(&mut rng, levels)).unwrap();
        let r = verify_pigeonhole(&path, levels).unwrap();
        if !r.satisfied() {
            failures.push(format!("synthetic {seed}"));
        }
    }
    verdict(
        8,
        failures.is_empty(),
        format!("{} oracle paths, {SYNTHETIC_PATHS} synthetic, failures {failures:?}", oracle_paths.len()),
    );
}

#[test]
fn ac09_strips() {
    let mut ok = star2_constant_holds() && 5 * 5 * 3 > 8 * 8;
    let mut detail = Vec::new();
    for levels in 1..=3 {
        let spec = SegmentFamilySpec::new(levels).unwrap();
        let spirals = default_strip_spirals(&spec, 2, 16).unwrap();
        let (data, rep) = strips_3d(&spec, &spirals).unwrap();
        let ratio = data
            .iter()
            .enumerate()
            .map(|(i, s)| verify_star2(&s.trapezium, 1000, i as u64).max_ratio)
            .fold(0.0, f64::max);
        ok &= rep.disjoint()
            && rep.min_distance > 0.0
            && rep.max_ray_residual <= RAY_TOL
            && rep.max_norm_error <= NORM_TOL
            && ratio <= STAR2_BOUND
            && STAR2_BOUND == 2.5;
        detail.push(format!(
            "J={levels}: {} strips, min dist {:.3e}, ray {:.1e}, norm {:.1e}, star2 max {ratio:.4}",
            rep.strip_count, rep.min_distance, rep.max_ray_residual, rep.max_norm_error
        ));
    }
    verdict(9, ok, detail.join("; "));
}

#[test]
fn ac10_oracle_self_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut sym, mut tri, mut mono, mut oracle): (f64, f64, f64, f64) = (0.0, f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0);
    for case in 0..ORACLE_INSTANCES {
        let (mut segs, t) = common::random_instance(&mut rng, 1 + (case % 8) as usize, 3, 1e-3);
        let g = VisibilityGraph::build(&common::scene(&segs, &t)).unwrap();
        let term: Vec<Terminal> = t.iter().map(|&p| Terminal::new(common::pt(p))).collect();
        let sp = |g: &VisibilityGraph, i: usize, j: usize| g.shortest_path(term[i], term[j]).unwrap().length;
        let (ab, ba, bc, ac) = (sp(&g, 0, 1), sp(&g, 1, 0), sp(&g, 1, 2), sp(&g, 0, 2));
        if ab.is_finite() {
            sym = sym.max((ab - ba).abs());
            oracle = oracle.max((ab - common::brute_length(&segs, t[0], t[1])).abs());
        }
        if ab.is_finite() && bc.is_finite() {
            tri = tri.max(ac - ab - bc);
        }
        common::push_segment(&mut rng, &mut segs, &t, 1e-3);
        let g2 = VisibilityGraph::build(&common::scene(&segs, &t)).unwrap();
        let ac2 = sp(&g2, 0, 2);
        if ac.is_finite() {
            mono = mono.max(ac - ac2);
        }
    }
    let pass = sym <= SYMMETRY_TOL && tri <= TRIANGLE_TOL && mono <= ORACLE_TOL && oracle <= ORACLE_TOL;
    verdict(
        10,
        pass,
        format!(
            "{ORACLE_INSTANCES} instances: asymmetry {sym:.1e}, triangle excess {tri:.1e}, monotonicity excess {mono:.1e}, brute-force gap {oracle:.1e}"
        ),
    );
}
