//! One function per subcommand. Each returns an [`Output`] that `main`
//! writes to stdout or to files.

use std::f64::consts::{PI, TAU};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use onecircle::filling::HexagonRegion;
use onecircle::moduli::hexagonal_omega;
use onecircle::packing::{
    build_affine_packing_with, build_euclidean_packing, validate_packing, CircleKind,
};
use onecircle::parse::{parse_complex, parse_schedule, parse_slopes};
use onecircle::{level_point, Complex64, DehnFilling, Extended, LevelSpec, ModuliSolver, RegionId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{CommandConfig, Format};
use crate::error::CliError;
use crate::output::{Field, Table};
use crate::sampling::strip_sample;
use crate::svg::Svg;

/// Tolerance of the hexagon membership test.
pub const HEXAGON_TOL: f64 = 1e-9;
/// Edge-approach target for traced boundary points.
pub const EDGE_APPROACH: f64 = 0.05;
/// Upper level of the `dehnspace` scatter.
pub const SCATTER_MAX_LEVEL: f64 = 0.999;

const LOCI_SCHEDULE: &str = "lin:0.02:0.98:49";
const TRACE_SCHEDULE: &str = "tail:2..8";
const DEGENERATION_SCHEDULE: &str = "tail:1..8";
const TRACE_SLOPES: &str = "0.25,0.75";
const LOCUS_SLOPES: [&str; 6] = ["-1", "0", "1/2", "1", "2", "inf"];

#[derive(Debug, Clone)]
pub struct Output {
    pub table: Option<Table>,
    /// Secondary tables, written as `PREFIX-name.csv`.
    pub extras: Vec<(&'static str, Table)>,
    pub svg: Option<String>,
    pub default_format: Format,
    /// Human-readable lines for stderr.
    pub summary: Vec<String>,
    /// Set when the command produced output but must exit with a failure.
    pub failure: Option<CliError>,
}

impl Output {
    fn new(default_format: Format) -> Self {
        Output {
            table: None,
            extras: Vec::new(),
            svg: None,
            default_format,
            summary: Vec::new(),
            failure: None,
        }
    }

    fn render(&self, table: &Table, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => table.to_csv(),
            Format::Json => Ok(table.to_json()),
            Format::Svg => unreachable!(),
        }
    }

    /// Writes to `cfg.out` (all artifacts, or only `cfg.format`) or else the
    /// selected format to `stdout`. Returns the files written.
    pub fn emit(
        &self,
        cfg: &CommandConfig,
        stdout: &mut dyn Write,
    ) -> Result<Vec<PathBuf>, CliError> {
        let missing = |f: Format| CliError::Usage(format!("this command has no {f:?} output"));
        let Some(prefix) = &cfg.out else {
            let format = cfg.format.unwrap_or(self.default_format);
            let text = match format {
                Format::Svg => self.svg.clone().ok_or(missing(format))?,
                _ => self.render(self.table.as_ref().ok_or(missing(format))?, format)?,
            };
            stdout.write_all(text.as_bytes())?;
            return Ok(Vec::new());
        };
        let path = |suffix: &str| {
            let mut s: OsString = prefix.as_os_str().to_owned();
            s.push(suffix);
            PathBuf::from(s)
        };
        let formats = match cfg.format {
            Some(f) => vec![f],
            None => {
                let mut v = Vec::new();
                if self.table.is_some() {
                    v.push(Format::Csv);
                }
                if self.svg.is_some() {
                    v.push(Format::Svg);
                }
                v
            }
        };
        let mut written = Vec::new();
        for format in formats {
            let mut files: Vec<(PathBuf, String)> = Vec::new();
            match format {
                Format::Svg => files.push((path(".svg"), self.svg.clone().ok_or(missing(format))?)),
                _ => {
                    let ext = if format == Format::Csv { "csv" } else { "json" };
                    let table = self.table.as_ref().ok_or(missing(format))?;
                    files.push((path(&format!(".{ext}")), self.render(table, format)?));
                    for (name, t) in &self.extras {
                        files.push((path(&format!("-{name}.{ext}")), self.render(t, format)?));
                    }
                }
            }
            for (p, text) in files {
                std::fs::write(&p, text)
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                written.push(p);
            }
        }
        Ok(written)
    }
}

fn solver(cfg: &CommandConfig) -> ModuliSolver {
    ModuliSolver::new(cfg.solver_config())
}

fn opt_field(t: Option<Extended>) -> Field {
    t.map(Field::from).unwrap_or(Field::Null)
}

const MODULI_HEADER: [&str; 10] = [
    "c_re", "c_im", "omega_re", "omega_im", "s", "region", "mu", "lambda", "t", "residual",
];

fn moduli_row(solver: &ModuliSolver, c: Complex64) -> Result<Vec<Field>, CliError> {
    if c == Complex64::new(0.0, 0.0) {
        let w = hexagonal_omega();
        return Ok(vec![
            Field::Num(0.0),
            Field::Num(0.0),
            Field::Num(w.re),
            Field::Num(w.im),
            Field::Num(0.0),
            Field::Text(RegionId::Origin.to_string()),
            Field::Num(f64::INFINITY),
            Field::Num(f64::INFINITY),
            Field::Null,
            Field::Num(0.0),
        ]);
    }
    let point = solver.solve_parallelogram(c)?;
    let region = solver.classify(c)?;
    let fill = DehnFilling::filling_of(&point);
    Ok(vec![
        Field::Num(c.re),
        Field::Num(c.im),
        Field::Num(point.omega().re),
        Field::Num(point.omega().im),
        Field::Num(point.s()),
        Field::Text(region.to_string()),
        fill.mu.into(),
        fill.lambda.into(),
        opt_field(fill.t),
        Field::Num(point.residual()),
    ])
}

/// `--c` for one record, or the configured grid of cell centres over
/// `[-re_max, re_max] x (-pi, pi)`.
pub fn moduli(cfg: &CommandConfig, c: Option<&str>) -> Result<Output, CliError> {
    let solver = solver(cfg);
    let mut table = Table::new(&MODULI_HEADER);
    match (c, cfg.grid) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either --c or --grid, not both".into(),
        )),
        (None, None) => Err(CliError::Usage("moduli needs --c or --grid".into())),
        (Some(text), None) => {
            table.push(moduli_row(&solver, parse_complex(text)?)?);
            let mut out = Output::new(Format::Json);
            out.table = Some(table);
            Ok(out)
        }
        (None, Some((nx, ny))) => {
            let mut out = Output::new(Format::Csv);
            let mut failed = 0usize;
            let mut regions = std::collections::BTreeSet::new();
            for j in 0..ny {
                let y = -PI + (j as f64 + 0.5) * TAU / ny as f64;
                for i in 0..nx {
                    let x = -cfg.re_max + (i as f64 + 0.5) * 2.0 * cfg.re_max / nx as f64;
                    match moduli_row(&solver, Complex64::new(x, y)) {
                        Ok(row) => {
                            if let Field::Text(r) = &row[5] {
                                regions.insert(r.clone());
                            }
                            table.push(row);
                        }
                        Err(_) => failed += 1,
                    }
                }
            }
            out.summary.push(format!(
                "{} grid points, {} regions/loci hit, {} skipped",
                table.rows.len(),
                regions.len(),
                failed
            ));
            out.table = Some(table);
            Ok(out)
        }
    }
}

fn schedule(cfg: &CommandConfig, default: &str) -> Result<Vec<f64>, CliError> {
    match &cfg.schedule {
        Some(s) => Ok(s.clone()),
        None => Ok(parse_schedule(default)?),
    }
}

fn xy(z: Complex64) -> (f64, f64) {
    (z.re, z.im)
}

/// The twelve special points per level, and the loci figure.
pub fn loci(cfg: &CommandConfig) -> Result<Output, CliError> {
    let solver = solver(cfg);
    let levels = schedule(cfg, LOCI_SCHEDULE)?;
    let mut header = vec!["s".to_string()];
    for j in 1..=12 {
        header.push(format!("p{j}_re"));
        header.push(format!("p{j}_im"));
    }
    let mut table = Table::with_header(header);
    let mut tracks: Vec<Vec<(f64, f64)>> = vec![vec![(0.0, 0.0)]; 12];
    let mut mid_points = None;
    let mut sorted = levels.clone();
    sorted.sort_by(f64::total_cmp);
    let s_mid = sorted[sorted.len() / 2];
    for &s in &levels {
        let level = LevelSpec::new(s)?;
        let pts = solver.special_points(level)?;
        let mut row = vec![Field::Num(s)];
        for p in pts {
            row.push(Field::Num(p.re));
            row.push(Field::Num(p.im));
        }
        table.push(row);
        if s == s_mid {
            mid_points = Some((level, pts));
        }
    }
    // polylines follow increasing level so each starts at the origin
    for &s in &sorted {
        let pts = solver.special_points(LevelSpec::new(s)?)?;
        for (track, p) in tracks.iter_mut().zip(pts) {
            track.push(xy(p));
        }
    }

    let mut svg = Svg::new();
    let palette = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    ];
    let x_ext = tracks
        .iter()
        .flatten()
        .map(|p| p.0.abs())
        .fold(1.0, f64::max);
    for y in [-PI, PI] {
        svg.line((-x_ext, y), (x_ext, y), r##"stroke="#999999""##);
    }
    for (j, track) in tracks.iter().enumerate() {
        let color = palette[j % 6];
        svg.polyline(
            track,
            &format!(r#"stroke="{color}" class="locus l{}""#, j + 1),
        );
        let &(x, y) = track.last().expect("non-empty");
        svg.text(
            x,
            y,
            &format!("l{} t={}", j + 1, LOCUS_SLOPES[j % 6]),
            &format!(r#"fill="{color}""#),
        );
    }
    if let Some((level, pts)) = mid_points {
        for k in 0..12 {
            let a = pts[k].arg();
            let d = (pts[(k + 1) % 12].arg() - a).rem_euclid(TAU);
            let z = level_point(level, a + d / 2.0)?;
            svg.text(z.re, z.im, &format!("C{}", k + 1), r#"fill="black""#);
        }
    }
    svg.meta("levels", levels.len().to_string());
    svg.meta(
        "slopes",
        "l1,l7: t=-1; l2,l8: t=0; l3,l9: t=1/2; l4,l10: t=1; l5,l11: t=2; l6,l12: t=inf",
    );

    let mut out = Output::new(Format::Csv);
    out.table = Some(table);
    out.svg = Some(svg.render("Loci of the twelve special points"));
    Ok(out)
}

/// Nearest approach of `points` to each hexagon edge: `(distance, mu, lambda)`.
pub fn edge_approach(points: &[(f64, f64)]) -> [(f64, f64, f64); 6] {
    std::array::from_fn(|i| {
        points
            .iter()
            .map(|&(mu, lambda)| (HexagonRegion.distance_to_edge(i, mu, lambda), mu, lambda))
            .fold((f64::INFINITY, f64::NAN, f64::NAN), |a, b| {
                if b.0 < a.0 {
                    b
                } else {
                    a
                }
            })
    })
}

/// Filling coefficients of the `t`-traces and their five rotations.
pub fn rotated_traces(
    filling: &DehnFilling,
    slopes: &[Extended],
    levels: &[f64],
) -> Result<Vec<(Extended, i64, onecircle::filling::TracePoint)>, CliError> {
    let mut out = Vec::new();
    for &t in slopes {
        for tp in filling.boundary_trace(t, levels)? {
            let mut c = tp.point.c();
            for k in 0..6 {
                let point = filling.solver().solve_parallelogram(c)?;
                out.push((
                    t,
                    k,
                    onecircle::filling::TracePoint {
                        s: tp.s,
                        theta: c.arg(),
                        point,
                        filling: DehnFilling::filling_of(&point),
                    },
                ));
                c = filling.solver().rotate6(c)?;
            }
        }
    }
    Ok(out)
}

const DEHN_HEADER: [&str; 11] = [
    "kind",
    "t_target",
    "rotation",
    "c_re",
    "c_im",
    "s",
    "mu",
    "lambda",
    "t",
    "gauge",
    "in_hexagon",
];

/// Random samples of the filling map plus rotated boundary traces.
pub fn dehnspace(cfg: &CommandConfig, slopes: Option<&str>) -> Result<Output, CliError> {
    let filling = DehnFilling::new(solver(cfg));
    let levels = schedule(cfg, TRACE_SCHEDULE)?;
    let slopes = parse_slopes(slopes.unwrap_or(TRACE_SLOPES))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let hex = HexagonRegion;
    let mut table = Table::new(&DEHN_HEADER);
    let (mut inside, mut outside, mut skipped) = (0usize, 0usize, 0usize);
    let mut min_gauge = f64::INFINITY;
    let mut scatter = Vec::new();
    for _ in 0..cfg.samples {
        let c = strip_sample(&mut rng, 0.0, SCATTER_MAX_LEVEL);
        let Ok(point) = filling.solver().solve_parallelogram(c) else {
            skipped += 1;
            continue;
        };
        let fd = DehnFilling::filling_of(&point);
        let Some((mu, lambda)) = fd.finite_pair() else {
            skipped += 1;
            continue;
        };
        let gauge = hex.gauge(mu, lambda);
        let ok = hex.contains_with_tolerance(mu, lambda, HEXAGON_TOL);
        if ok {
            inside += 1;
        } else {
            outside += 1;
        }
        min_gauge = min_gauge.min(gauge);
        scatter.push((mu, lambda, ok));
        table.push(vec![
            Field::Text("sample".into()),
            Field::Null,
            Field::Null,
            Field::Num(c.re),
            Field::Num(c.im),
            Field::Num(point.s()),
            Field::Num(mu),
            Field::Num(lambda),
            opt_field(fd.t),
            Field::Num(gauge),
            Field::Bool(ok),
        ]);
    }

    let traces = rotated_traces(&filling, &slopes, &levels)?;
    let mut trace_pts = Vec::new();
    for (t, k, tp) in &traces {
        let Some((mu, lambda)) = tp.filling.finite_pair() else {
            continue;
        };
        trace_pts.push((mu, lambda));
        table.push(vec![
            Field::Text("trace".into()),
            (*t).into(),
            Field::Int(*k),
            Field::Num(tp.point.c().re),
            Field::Num(tp.point.c().im),
            Field::Num(tp.s),
            Field::Num(mu),
            Field::Num(lambda),
            opt_field(tp.filling.t),
            Field::Num(hex.gauge(mu, lambda)),
            Field::Bool(hex.contains_with_tolerance(mu, lambda, HEXAGON_TOL)),
        ]);
    }
    let approach = edge_approach(&trace_pts);
    let mut edges = Table::new(&[
        "edge",
        "description",
        "min_distance",
        "mu",
        "lambda",
        "within_tolerance",
    ]);
    let names = HexagonRegion::edge_names();
    for (i, &(d, mu, lambda)) in approach.iter().enumerate() {
        edges.push(vec![
            Field::Int(i as i64 + 1),
            Field::Text(names[i].into()),
            Field::Num(d),
            Field::Num(mu),
            Field::Num(lambda),
            Field::Bool(d < EDGE_APPROACH),
        ]);
    }

    let mut out = Output::new(Format::Csv);
    out.summary.push(format!(
        "{} samples: {inside} inside the hexagon, {outside} outside, {skipped} skipped; min gauge {}",
        cfg.samples,
        crate::output::num(min_gauge)
    ));
    for (i, &(d, _, _)) in approach.iter().enumerate() {
        out.summary.push(format!(
            "edge {} ({}): min distance {}",
            i + 1,
            names[i],
            crate::output::num(d)
        ));
    }

    let mut svg = Svg::new();
    const R: f64 = 8.0;
    svg.line((-R, 0.0), (R, 0.0), r##"stroke="#444444""##);
    svg.line((0.0, -R), (0.0, R), r##"stroke="#444444""##);
    svg.text(R, 0.2, "μ", r#"fill="black""#);
    svg.text(0.2, R, "λ", r#"fill="black""#);
    let mut clipped = 0usize;
    for &(mu, lambda, ok) in &scatter {
        if mu.abs() > R || lambda.abs() > R {
            clipped += 1;
            continue;
        }
        let color = if ok { "#1f77b4" } else { "#9e9e9e" };
        svg.dot(mu, lambda, &format!(r#"fill="{color}""#));
    }
    for &(mu, lambda) in &trace_pts {
        if mu.abs() <= R && lambda.abs() <= R {
            svg.dot(mu, lambda, r##"fill="#d62728""##);
        }
    }
    svg.polygon(&HexagonRegion::VERTICES, r#"fill="none" stroke="black""#);
    for &(x, y) in &HexagonRegion::VERTICES {
        svg.text(x, y, &format!("({x},{y})"), r#"fill="black""#);
    }
    let vertices: Vec<String> = HexagonRegion::VERTICES
        .iter()
        .map(|(x, y)| format!("({x},{y})"))
        .collect();
    svg.meta("hexagon_vertices", vertices.join(" "));
    svg.meta("hexagon_edges", names.join("; "));
    svg.meta("samples", cfg.samples.to_string());
    svg.meta("inside", inside.to_string());
    svg.meta("outside", outside.to_string());
    svg.meta("clipped", clipped.to_string());
    let summary: Vec<String> = approach.iter().map(|a| crate::output::num(a.0)).collect();
    svg.meta("edge_min_distance", summary.join(" "));

    out.table = Some(table);
    out.extras.push(("edges", edges));
    out.svg = Some(svg.render("Dehn filling space"));
    Ok(out)
}

/// `(p + q) pi` along slopes in `[0, 1]`, `|p| pi` beyond 1 and `|q| pi`
/// below 0.
pub fn cone_angle_limit(p: i64, q: i64) -> f64 {
    let (pf, qf) = (p as f64, q as f64);
    if p + q == 0 {
        return pf.abs() * PI;
    }
    let t = pf / (pf + qf);
    if (0.0..=1.0).contains(&t) {
        (pf + qf).abs() * PI
    } else if t > 1.0 {
        pf.abs() * PI
    } else {
        qf.abs() * PI
    }
}

/// Cone angle and singular-locus length along the slope `p / (p + q)`.
pub fn degenerate(cfg: &CommandConfig, p: i64, q: i64) -> Result<Output, CliError> {
    let filling = DehnFilling::new(solver(cfg));
    let levels = schedule(cfg, DEGENERATION_SCHEDULE)?;
    let rows = filling.degeneration(p, q, &levels)?;
    let limit = cone_angle_limit(p, q);
    let mut table = Table::new(&[
        "s",
        "c_re",
        "c_im",
        "t",
        "angle",
        "angle_limit",
        "angle_gap",
        "length",
        "angle_converging",
        "length_increasing",
    ]);
    let mut prev: Option<(f64, f64)> = None;
    for (tp, cone) in &rows {
        let gap = (cone.angle - limit).abs();
        let (conv, incr) = match prev {
            Some((g, l)) => (Field::Bool(gap < g), Field::Bool(cone.length > l)),
            None => (Field::Null, Field::Null),
        };
        table.push(vec![
            Field::Num(tp.s),
            Field::Num(tp.point.c().re),
            Field::Num(tp.point.c().im),
            opt_field(tp.filling.t),
            Field::Num(cone.angle),
            Field::Num(limit),
            Field::Num(gap),
            Field::Num(cone.length),
            conv,
            incr,
        ]);
        prev = Some((gap, cone.length));
    }
    let mut out = Output::new(Format::Csv);
    if let Some((tp, cone)) = rows.last() {
        out.summary.push(format!(
            "({p},{q}) at s = {}: angle {} (limit {}), length {}",
            crate::output::num(tp.s),
            crate::output::num(cone.angle),
            crate::output::num(limit),
            crate::output::num(cone.length)
        ));
    }
    out.table = Some(table);
    Ok(out)
}

/// The developed packing of `c` (euclidean for `c = 0`) and its duals.
pub fn packing(cfg: &CommandConfig, c: &str) -> Result<Output, CliError> {
    let c = parse_complex(c)?;
    let spec = if c == Complex64::new(0.0, 0.0) {
        build_euclidean_packing(&cfg.window)?
    } else {
        build_affine_packing_with(&solver(cfg), c, &cfg.window)?
    };
    let report = validate_packing(&spec);
    let valid = report.within(cfg.validation_tol);

    let mut table = Table::new(&["kind", "m", "n", "center_re", "center_im", "radius"]);
    let mut svg = Svg::new();
    for circle in spec.circles.iter().chain(&spec.duals) {
        let (kind, style) = match circle.kind {
            CircleKind::Packing => ("packing", r#"fill="none" stroke="black" class="packing""#),
            CircleKind::Dual(onecircle::packing::Interstice::Lower) => (
                "dual_lower",
                r##"fill="none" stroke="#d62728" class="dual""##,
            ),
            CircleKind::Dual(onecircle::packing::Interstice::Upper) => (
                "dual_upper",
                r##"fill="none" stroke="#d62728" class="dual""##,
            ),
        };
        table.push(vec![
            Field::Text(kind.into()),
            Field::Int(circle.label.0),
            Field::Int(circle.label.1),
            Field::Num(circle.center.re),
            Field::Num(circle.center.im),
            Field::Num(circle.radius),
        ]);
        svg.circle(circle.center.re, circle.center.im, circle.radius, style);
    }
    let num = crate::output::num;
    svg.meta("c", onecircle::parse::format_complex(spec.c));
    svg.meta("omega", onecircle::parse::format_complex(spec.omega));
    svg.meta("s", num(spec.s));
    svg.meta("kappa", num(spec.kappa));
    svg.meta("window", format!("{:?},{:?}", spec.window.m, spec.window.n));
    svg.meta("max_tangency_residual", num(report.max_tangency_residual));
    svg.meta(
        "max_orthogonality_residual",
        num(report.max_orthogonality_residual),
    );
    svg.meta(
        "local_overlap_violations",
        report.local_overlap_violations.to_string(),
    );
    svg.meta("tangency_pairs", report.tangency_pairs.to_string());
    svg.meta("orthogonal_pairs", report.orthogonal_pairs.to_string());
    svg.meta("tolerance", num(cfg.validation_tol));
    svg.meta("valid", valid.to_string());

    let mut out = Output::new(Format::Svg);
    let line = format!(
        "tangency {}, orthogonality {}, overlaps {}",
        num(report.max_tangency_residual),
        num(report.max_orthogonality_residual),
        report.local_overlap_violations
    );
    if !valid {
        out.failure = Some(CliError::Validation(format!(
            "{line} (tolerance {})",
            num(cfg.validation_tol)
        )));
    }
    out.summary.push(line);
    out.table = Some(table);
    out.svg = Some(svg.render("Developed circle packing"));
    Ok(out)
}
