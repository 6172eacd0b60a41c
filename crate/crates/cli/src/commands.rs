use std::path::Path;

use relmetric::constructions::comb::{cap_target, comb_domain, comb_reference_point, comb_segments, CombSpec};
use relmetric::constructions::family::{
    family_scene, floor_radius, point_a, point_d, separating_levels, unconfined_length, verify_length_bound,
    LengthBoundConfig, SegmentFamilySpec,
};
use relmetric::constructions::spiral::{spiral_labyrinth, verify_star1, SpiralSpec};
use relmetric::constructions::strips::{default_strip_spirals, star2_constant_holds, strips_3d, verify_star2};
use relmetric::constructions::theorem::theorem22_report;
use relmetric::constructions::{comb_divergence, family::confined_length_with};
use relmetric::metric::{
    check_metric_axioms, check_property_circ, check_rho_equals_ambient, check_strict_convexity, closure_path,
    distance_matrix, extract_geodesic_on_grid, outer_boundary_samples, rho, values, MetricConfig,
};
use relmetric::random::{random_domain, random_terminals, RandomDomainConfig};
use relmetric::rigidity::{boundary_profile, compare_profiles, convexity_transfer_test, euclidean_congruence, TransferVerdict};
use relmetric::shortest_path::shortest_path_terminals;
use relmetric::{PlanarDomain, Point2, Terminal};

use crate::report::{matrix_csv, num, Report};
use crate::scene::{xy, Generator, SceneFile, StripEntry};
use crate::svg::Figure;
use crate::{CheckArgs, CheckKind, CliError, CompareArgs, DistArgs, GenArgs, GenKind, MatrixArgs, MetricFlags, Outcome, PaperArgs, PaperTarget};

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn config(scene: Option<&SceneFile>, f: &MetricFlags) -> Result<(MetricConfig, usize), CliError> {
    let base = scene.map(|s| s.config.clone()).unwrap_or_default();
    let mut cfg = base.metric();
    if let Some(o) = &f.offsets {
        cfg.offsets = o.clone();
    }
    if let Some(t) = f.tol {
        cfg.tol_metric = t;
    }
    if let Some(e) = &f.extrapolation {
        cfg.extrapolation = e.parse().map_err(CliError::Usage)?;
    }
    cfg.validate()?;
    Ok((cfg, f.m_circle.unwrap_or(base.m_circle)))
}

fn print(r: &Report) {
    print!("{}", r.render());
}

fn domain_figure(f: &mut Figure, d: &PlanarDomain) {
    f.polygon(d.outer().vertices(), "#f4f4f4", "black");
    for h in d.holes() {
        f.polygon(h.vertices(), "#cccccc", "black");
    }
    for s in d.slits() {
        f.polyline(&[s.a, s.b], "black", 1.5);
    }
}

fn scene_figure(s: &SceneFile) -> Result<Figure, CliError> {
    let mut f = Figure::default();
    if s.domain.is_some() {
        domain_figure(&mut f, &s.planar_domain()?);
    }
    if let Some(o) = &s.obstacles {
        let pts: Vec<Point2> = o.boundary.iter().map(|p| Point2::new(p[0], p[1])).collect();
        f.polygon(&pts, "#f4f4f4", "black");
        for seg in &o.segments {
            f.polyline(&[Point2::new(seg[0][0], seg[0][1]), Point2::new(seg[1][0], seg[1][1])], "black", 1.0);
        }
        for p in &o.polygons {
            let v: Vec<Point2> = p.iter().map(|q| Point2::new(q[0], q[1])).collect();
            f.polygon(&v, "#cccccc", "black");
        }
    }
    for st in &s.strips {
        let v: Vec<Point2> = st.trapezium.iter().map(|q| Point2::new(q[0], q[1])).collect();
        f.polygon(&v, "none", "steelblue");
    }
    for (n, p) in &s.points {
        f.point(Point2::new(p[0], p[1]), n.clone(), "crimson");
    }
    Ok(f)
}

pub fn gen(a: &GenArgs) -> Result<Outcome, CliError> {
    let mut scene = SceneFile::default();
    let mut rep = Report::new(format!("gen {:?}", a.kind).to_lowercase());
    match a.kind {
        GenKind::Comb => {
            let spec = match a.cap_width {
                Some(c) => CombSpec { depth: a.depth, cap_width: c },
                None => CombSpec::new(a.depth),
            };
            let d = comb_domain(&spec)?;
            scene.set_domain(&d);
            scene.points.insert("E".into(), xy(comb_reference_point()));
            scene.points.insert("cap".into(), xy(cap_target(&spec)));
            scene.generator = Some(Generator::Comb { depth: spec.depth, cap_width: spec.cap_width });
            let teeth = comb_segments(&spec)?.teeth_count();
            let edges = d.outer().len();
            rep.row("teeth-segments", teeth).row("top-segments", 1).row("cap-segments", edges - teeth - 1).row("boundary-segments", edges);
        }
        GenKind::Family => {
            let spec = SegmentFamilySpec::new(a.levels)?;
            let s = family_scene(&spec, a.scale, true)?;
            scene.set_obstacles(&s);
            scene.points.insert("A".into(), xy(point_a()));
            scene.points.insert("D".into(), xy(point_d()));
            scene.points.insert("O".into(), xy(Point2::ORIGIN));
            scene.generator = Some(Generator::Family { levels: a.levels, scale: a.scale });
            rep.row("obstacle-segments", s.obstacle_segments.len());
        }
        GenKind::Spiral => {
            let spec = SpiralSpec { samples_per_coil: a.samples_per_coil.unwrap_or(64), ..SpiralSpec::new(a.rho0, a.coils, a.pitch) };
            let lab = spiral_labyrinth(&spec)?;
            scene.set_obstacles(&lab.scene);
            scene.points.insert("entrance".into(), xy(lab.start));
            scene.points.insert("exit".into(), xy(lab.goal));
            scene.generator = Some(Generator::Spiral {
                rho0: spec.rho0,
                coils: spec.coils,
                pitch: spec.pitch,
                samples_per_coil: spec.samples_per_coil,
            });
            rep.row("obstacle-segments", lab.scene.obstacle_segments.len());
        }
        GenKind::Strips => {
            let spec = SegmentFamilySpec::new(a.levels)?;
            let spc = a.samples_per_coil.unwrap_or(16);
            let spirals = default_strip_spirals(&spec, a.coils, spc)?;
            let (data, r) = strips_3d(&spec, &spirals)?;
            scene.strips = data
                .iter()
                .map(|d| StripEntry {
                    level: d.level,
                    index: d.index,
                    rho0: d.spiral.rho0,
                    pitch: d.spiral.pitch,
                    trapezium: d.trapezium.vertices.map(xy),
                })
                .collect();
            scene.generator = Some(Generator::Strips { levels: a.levels, coils: a.coils, samples_per_coil: spc });
            rep.row("strips", r.strip_count).row("rulings", r.ruling_count).val("min-distance", r.min_distance);
        }
        GenKind::Random => {
            let cfg = RandomDomainConfig {
                vertices: a.vertices,
                with_hole: a.hole,
                boundary_slits: a.boundary_slits,
                free_slits: a.free_slits,
            };
            let d = random_domain(a.seed, &cfg)?;
            scene.set_domain(&d);
            for (i, t) in random_terminals(&d, a.points, a.seed).into_iter().enumerate() {
                let name = format!("p{i:02}");
                scene.points.insert(name.clone(), xy(t.point));
                if let Some(h) = t.hint {
                    scene.hints.insert(name, h);
                }
            }
            scene.generator = Some(Generator::Random {
                seed: a.seed,
                vertices: cfg.vertices,
                with_hole: cfg.with_hole,
                boundary_slits: cfg.boundary_slits,
                free_slits: cfg.free_slits,
            });
            rep.row("outer-vertices", d.outer().len()).row("slits", d.slits().len());
        }
    }
    if let Some(p) = &a.svg {
        write(p, &scene_figure(&scene)?.render())?;
    }
    let text = scene.to_text();
    match &a.out {
        Some(p) => {
            write(p, &text)?;
            rep.scene_hash = Some(scene.hash());
            print(&rep);
        }
        None => print!("{text}"),
    }
    Ok(Outcome::Pass)
}

pub fn dist(a: &DistArgs) -> Result<Outcome, CliError> {
    let scene = SceneFile::read(&a.scene)?;
    let (cfg, _) = config(Some(&scene), &a.metric)?;
    let (x, y) = (scene.terminal(&a.p)?, scene.terminal(&a.q)?);
    let mut rep = Report::new(format!("dist {} {}", a.p, a.q));
    rep.scene_hash = Some(scene.hash());
    rep.tol("metric", cfg.tol_metric);
    let (value, path) = if scene.domain.is_some() {
        let d = scene.planar_domain()?;
        let r = rho(&d, x, y, &cfg)?;
        rep.val("value", r.value).val("closure", r.closure).row("converged", r.converged);
        rep.table("offsets", &["delta", "length"], r.per_offset.iter().map(|(d, l)| vec![num(*d), num(*l)]).collect());
        let path = if a.svg.is_some() { closure_path(&d, x, y)?.vertices } else { Vec::new() };
        (r.value, path)
    } else {
        let s = scene.obstacle_scene()?;
        let r = shortest_path_terminals(&s, x, y)?;
        rep.val("value", r.length).row("path-vertices", r.vertices.len());
        (r.length, r.vertices)
    };
    if let Some(p) = &a.svg {
        let mut f = scene_figure(&scene)?;
        f.polyline(&path, "royalblue", 2.0);
        write(p, &f.render())?;
    }
    print(&rep);
    Ok(if value.is_infinite() { Outcome::Unreachable } else { Outcome::Pass })
}

fn named_terminals(scene: &SceneFile, names: Option<&Vec<String>>) -> Result<(Vec<String>, Vec<Terminal>), CliError> {
    let names: Vec<String> = match names {
        Some(n) => n.clone(),
        None => scene.points.keys().cloned().collect(),
    };
    let terms = names.iter().map(|n| scene.terminal(n)).collect::<Result<Vec<_>, _>>()?;
    Ok((names, terms))
}

fn scene_matrix(scene: &SceneFile, terms: &[Terminal], cfg: &MetricConfig) -> Result<Vec<Vec<f64>>, CliError> {
    if scene.domain.is_some() {
        return Ok(values(&distance_matrix(&scene.planar_domain()?, terms, cfg)?));
    }
    let s = scene.obstacle_scene()?;
    let n = terms.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let l = shortest_path_terminals(&s, terms[i], terms[j])?.length;
            m[i][j] = l;
            m[j][i] = l;
        }
    }
    Ok(m)
}

pub fn matrix(a: &MatrixArgs) -> Result<Outcome, CliError> {
    let scene = SceneFile::read(&a.scene)?;
    let (cfg, _) = config(Some(&scene), &a.metric)?;
    let (names, terms) = named_terminals(&scene, a.points.as_ref())?;
    let m = scene_matrix(&scene, &terms, &cfg)?;
    let csv = matrix_csv(&names, &m)?;
    match &a.csv {
        Some(p) => write(p, &csv)?,
        None => print!("{csv}"),
    }
    let any_inf = m.iter().flatten().any(|v| v.is_infinite());
    Ok(if any_inf { Outcome::Unreachable } else { Outcome::Pass })
}

fn outer_terminals(d: &PlanarDomain, m: usize) -> Vec<Terminal> {
    outer_boundary_samples(d, m).into_iter().map(Terminal::new).collect()
}

pub fn check(a: &CheckArgs) -> Result<Outcome, CliError> {
    let scene = SceneFile::read(&a.scene)?;
    let (cfg, _) = config(Some(&scene), &a.metric)?;
    let d = scene.planar_domain()?;
    let mut rep = Report::new(format!("check {:?}", a.check).to_lowercase());
    rep.scene_hash = Some(scene.hash());
    rep.tol("metric", cfg.tol_metric);
    let (names, terms) = if scene.points.is_empty() {
        let t = outer_terminals(&d, a.m);
        ((0..t.len()).map(|i| format!("s{i:02}")).collect(), t)
    } else {
        named_terminals(&scene, None)?
    };
    let mut fig = if a.svg.is_some() { Some(scene_figure(&scene)?) } else { None };
    let pass = match a.check {
        CheckKind::Metric => {
            let m = values(&distance_matrix(&d, &terms, &cfg)?);
            let r = check_metric_axioms(&m, cfg.tol_metric);
            rep.row("points", names.len())
                .row("symmetry-violations", r.symmetry_violations.len())
                .row("triangle-violations", r.triangle_violations.len())
                .row("identity-violations", r.identity_violations.len())
                .row("non-finite", r.non_finite.len());
            if let Some((i, j, k)) = r.triangle_violations.first() {
                rep.row("first-triangle-violation", format!("{} {} {}", names[*i], names[*j], names[*k]));
            }
            if let Some(p) = &a.csv {
                write(p, &matrix_csv(&names, &m)?)?;
            }
            r.is_clean()
        }
        CheckKind::Geodesic => {
            let pick = |o: &Option<String>, k: usize| -> Result<Terminal, CliError> {
                match o {
                    Some(n) => scene.terminal(n),
                    None => terms.get(k).copied().ok_or_else(|| CliError::Usage("geodesic check needs two points".into())),
                }
            };
            let (x, y) = (pick(&a.p, 0)?, pick(&a.q, 1)?);
            let g = extract_geodesic_on_grid(&d, x, y, &cfg, a.grid)?;
            rep.val("length", g.length)
                .row("grid-points", g.grid.len())
                .val("max-deviation", g.max_deviation)
                .val("one-sided-excess", g.one_sided_excess)
                .val("subpath-excess", g.subpath_excess);
            if let Some(f) = fig.as_mut() {
                f.polyline(g.path.vertices(), "royalblue", 2.0);
            }
            g.max_deviation <= cfg.tol_metric && g.one_sided_excess <= 1e-9
        }
        CheckKind::Convexity | CheckKind::Circ => {
            let s = outer_terminals(&d, a.m);
            let r = if matches!(a.check, CheckKind::Convexity) {
                check_strict_convexity(&d, &s, a.eta, &cfg)?
            } else {
                check_property_circ(&d, &s, a.eta, &cfg)?
            };
            rep.row("samples", r.samples).val("eta", r.eta).row("pairs-checked", r.pairs_checked).row("witnesses", r.witnesses.len());
            if let Some(w) = r.witnesses.first() {
                rep.row("witness", format!("samples {} {} touch the boundary at {} (clearance {})", w.i, w.j, w.at, num(w.clearance)));
                if let Some(f) = fig.as_mut() {
                    f.point(w.at, "witness", "orange");
                }
            }
            r.strictly_convex
        }
        CheckKind::Ambient => {
            let pairs: Vec<(Terminal, Terminal)> =
                (0..terms.len()).flat_map(|i| (i + 1..terms.len()).map(move |j| (i, j))).map(|(i, j)| (terms[i], terms[j])).collect();
            let r = check_rho_equals_ambient(&d, &pairs, &cfg)?;
            rep.row("pairs", pairs.len()).val("max-discrepancy", r.max_discrepancy);
            r.max_discrepancy <= cfg.tol_metric
        }
    };
    if let (Some(p), Some(f)) = (&a.svg, &fig) {
        write(p, &f.render())?;
    }
    rep.verdict(pass);
    print(&rep);
    Ok(if pass { Outcome::Pass } else { Outcome::Violation })
}

fn rows_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?).expect("utf-8"))
}

pub fn paper(a: &PaperArgs) -> Result<Outcome, CliError> {
    let (cfg, m_circle) = config(None, &a.metric)?;
    let lb_cfg = LengthBoundConfig { m_circle, ..LengthBoundConfig::default() };
    let mut rep = Report::new(format!("paper {:?}", a.target).to_lowercase());
    let mut table: Option<(Vec<&str>, Vec<Vec<String>>)> = None;
    let mut fig: Option<Figure> = None;
    let pass = match a.target {
        PaperTarget::Star1 => {
            rep.val("rho0", a.rho0).val("pitch", a.pitch).tol("sampling-agreement", relmetric::constructions::spiral::SAMPLING_AGREEMENT);
            let r = verify_star1(a.rho0, a.pitch, a.max_coils)?;
            rep.row("coils", r.coils).val("length", r.length).val("length-doubled-sampling", r.length_fine);
            if let Some(p) = r.previous_length() {
                rep.val("length-previous", p);
            }
            rep.row("sampling-agrees", r.sampling_agrees);
            table = Some((vec!["coils", "length"], r.lengths.iter().map(|(m, l)| vec![m.to_string(), num(*l)]).collect()));
            r.sampling_agrees && r.length >= 10.0 && r.previous_length().is_none_or(|p| p < 10.0)
        }
        PaperTarget::Bound6 => {
            let spec = SegmentFamilySpec::new(a.levels)?;
            let lb = verify_length_bound(&spec, &lb_cfg)?;
            let control = confined_length_with(a.levels, Vec::new(), &lb_cfg)?;
            let dive = if a.levels <= 3 { Some(unconfined_length(&spec, lb_cfg.region_scale)?.length) } else { None };
            rep.row("levels", a.levels)
                .val("floor-radius", lb.floor_radius)
                .row("m-circle", m_circle)
                .val("chord-error", lb.chord_error)
                .val("length", lb.length)
                .val("threshold", lb.threshold)
                .val("control-without-segments", control.length);
            if let Some(l) = dive {
                rep.val("unconfined-length", l);
            }
            let sep = separating_levels(a.levels, lb_cfg.region_scale);
            if lb.length.is_infinite() {
                rep.row("separating-levels", format!("{sep:?}"));
                rep.row("note", "A and D are separated inside the confined region; the bound holds trivially");
            }
            if a.svg.is_some() {
                let s = family_scene(&spec, lb_cfg.region_scale, true)?;
                let mut sf = SceneFile::default();
                sf.set_obstacles(&s);
                let mut f = scene_figure(&sf)?;
                let floor = relmetric::shortest_path::circumscribed_floor(floor_radius(a.levels), m_circle, &[0.0, std::f64::consts::FRAC_PI_6]).0;
                f.polygon(floor.vertices(), "#ffe0e0", "firebrick");
                f.polyline(&lb.path.vertices, "royalblue", 2.0);
                fig = Some(f);
            }
            lb.passes
        }
        PaperTarget::Thm22 => {
            let r = theorem22_report(a.levels, &lb_cfg)?;
            rep.row("levels", r.levels)
                .val("length", r.length)
                .val("projected", r.projected)
                .val("projected-target", r.projected_target)
                .val("rho(A,O)", r.rho_ao)
                .val("rho(O,D)", r.rho_od)
                .val("rho(A,O)-computed", r.rho_ao_computed)
                .val("rho(O,D)-computed", r.rho_od_computed)
                .val("escape-constant", r.escape_constant);
            if r.vacuous {
                rep.row("separating-levels", format!("{:?}", r.separating_levels));
            }
            rep.row(
                "chain",
                format!("{}*2/5 = {} >= {} > {} = rho(A,O)+rho(O,D)", num(r.length), num(r.projected), num(r.projected_target), num(r.triangle_rhs)),
            );
            r.triangle_violated && r.escape_constant > 4.0
        }
        PaperTarget::Comb => {
            let r = comb_divergence(&a.depths, comb_reference_point(), &cfg)?;
            rep.row("strictly-increasing", r.strictly_increasing).val("min-increment", r.min_increment);
            table = Some((vec!["depth", "distance"], r.rows.iter().map(|(n, d)| vec![n.to_string(), num(*d)]).collect()));
            r.strictly_increasing
        }
        PaperTarget::Star2 | PaperTarget::Strips => {
            let spec = SegmentFamilySpec::new(a.levels)?;
            let spirals = default_strip_spirals(&spec, a.coils, a.samples_per_coil)?;
            let (data, r) = strips_3d(&spec, &spirals)?;
            if matches!(a.target, PaperTarget::Strips) {
                rep.row("strips", r.strip_count)
                    .row("rulings", r.ruling_count)
                    .val("min-distance", r.min_distance)
                    .val("min-cone-bound", r.min_cone_bound)
                    .val("max-ray-residual", r.max_ray_residual)
                    .val("max-norm-error", r.max_norm_error)
                    .val("max-trapezium-excess", r.max_trapezium_excess);
                r.disjoint() && r.max_ray_residual <= 1e-9 && r.max_norm_error <= 1e-12 && r.max_trapezium_excess <= 1e-12
            } else {
                let mut rows = Vec::new();
                let mut worst = 0.0f64;
                for (i, s) in data.iter().enumerate() {
                    let st = verify_star2(&s.trapezium, a.samples, a.seed.wrapping_add(i as u64));
                    worst = worst.max(st.max_ratio);
                    rows.push(vec![s.level.to_string(), s.index.to_string(), num(st.max_ratio)]);
                }
                rep.row("trapeziums", data.len())
                    .row("samples-each", a.samples.max(1000))
                    .val("max-ratio", worst)
                    .val("bound", relmetric::constructions::strips::STAR2_BOUND)
                    .row("sqrt3/4 > 2/5", star2_constant_holds());
                table = Some((vec!["level", "index", "max-ratio"], rows));
                worst <= relmetric::constructions::strips::STAR2_BOUND && star2_constant_holds()
            }
        }
    };
    if let Some((h, rows)) = table {
        if let Some(p) = &a.csv {
            write(p, &rows_csv(&h, &rows)?)?;
        }
        rep.table("table", &h, rows);
    }
    if let (Some(p), Some(f)) = (&a.svg, &fig) {
        write(p, &f.render())?;
    }
    rep.verdict(pass);
    print(&rep);
    Ok(if pass { Outcome::Pass } else { Outcome::Violation })
}

pub fn compare(a: &CompareArgs) -> Result<Outcome, CliError> {
    let sa = SceneFile::read(&a.a)?;
    let sb = SceneFile::read(&a.b)?;
    let (cfg, _) = config(Some(&sa), &a.metric)?;
    let tol = a.metric.tol.unwrap_or(1e-9);
    let (da, db) = (sa.planar_domain()?, sb.planar_domain()?);
    let pa = boundary_profile(&da, a.m, &cfg)?;
    let pb = boundary_profile(&db, a.m, &cfg)?;
    let al = compare_profiles(&pa, &pb, tol)?;
    let mut rep = Report::new("compare");
    rep.tol("alignment", tol);
    rep.row("samples", a.m)
        .val("gap-spread-a", pa.gap_spread)
        .val("gap-spread-b", pb.gap_spread)
        .row("shift", al.shift)
        .row("reflected", al.reflected)
        .val("residual", al.residual)
        .row("isometric", al.isometric);
    if al.isometric {
        let c = euclidean_congruence(&pa, &pb, &al, tol)?;
        rep.row("congruent", c.congruent).val("euclidean-gap", c.max_gap);
    }
    let mut outcome = Outcome::Pass;
    if a.transfer {
        let t = convexity_transfer_test(&da, &db, a.m, a.eta, &cfg, tol)?;
        let v = match &t.verdict {
            TransferVerdict::Confirmed => "confirmed".to_string(),
            TransferVerdict::NotApplicable(why) => format!("not applicable ({why})"),
            TransferVerdict::ResolutionArtifact => "second domain fails only at this resolution".to_string(),
            TransferVerdict::FalsificationCandidate => {
                outcome = Outcome::Violation;
                "falsification candidate".to_string()
            }
        };
        rep.row("first-strictly-convex", t.first_convex).row("transfer", v);
    }
    if let Some(p) = &a.csv {
        let names: Vec<String> = (0..a.m).map(|i| format!("s{i:02}")).collect();
        write(p, &matrix_csv(&names, &pa.matrix)?)?;
    }
    if let Some(p) = &a.svg {
        let mut f = Figure::default();
        domain_figure(&mut f, &da);
        domain_figure(&mut f, &db);
        for i in 0..a.m {
            f.point(pa.samples[i], format!("{i}"), "crimson");
            f.point(pb.samples[al.map(i, a.m)], format!("{i}'"), "royalblue");
        }
        write(p, &f.render())?;
    }
    print(&rep);
    Ok(outcome)
}
