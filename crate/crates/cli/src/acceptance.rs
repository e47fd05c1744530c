//! The acceptance suite. `onecircle selftest` runs all of it; the `selftest` test
//! target runs one criterion per test.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use onecircle::filling::HexagonRegion;
use onecircle::moduli::hexagonal_omega;
use onecircle::packing::{build_affine_packing, build_euclidean_packing, validate_packing};
use onecircle::parse::parse_schedule;
use onecircle::{
    f_value, level_point, Complex64, DehnFilling, Extended, LevelSpec, ModuliSolver, Window,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commands::{
    cone_angle_limit, edge_approach, rotated_traces, EDGE_APPROACH, HEXAGON_TOL,
};
use crate::sampling::strip_sample;

pub const CRITERIA: usize = 11;
/// Wall-clock budget of the whole suite.
pub const SUITE_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    /// Scale every packing radius by this factor before validating.
    pub kappa_fault: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub measured: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:>2}] {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.measured,
            self.elapsed.as_secs_f64()
        )
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "parallelogram residual",
        2 => "hexagonal limit",
        3 => "fiber symmetry",
        4 => "order-6 symmetry",
        5 => "slope on the loci",
        6 => "slope monotonicity",
        7 => "boundary limit",
        8 => "hexagon containment",
        9 => "degeneration",
        10 => "packing validity",
        11 => "self-test",
        _ => "unknown",
    }
}

fn e(x: f64) -> String {
    format!("{x:.3e}")
}

fn rng(id: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + id as u64)
}

type Check = (bool, String);

fn residual() -> Check {
    let start = Instant::now();
    let solver = ModuliSolver::default();
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..1000 {
        let c = strip_sample(&mut rng, 0.05, 0.95);
        match solver.solve_parallelogram(c) {
            Ok(p) => {
                let (s, w) = (f_value(c), p.omega());
                worst = worst
                    .max((f_value(c * w) - s).abs())
                    .max((f_value(c * (w - 1.0)) - s).abs());
            }
            Err(_) => failures += 1,
        }
    }
    let t = start.elapsed().as_secs_f64();
    (
        failures == 0 && worst < 1e-9 && t < 10.0,
        format!(
            "max residual {} over 1000 samples, {failures} failures, solve time {t:.2} s (< 10 s)",
            e(worst)
        ),
    )
}

fn hexagonal_limit() -> Check {
    let solver = ModuliSolver::default();
    let w0 = hexagonal_omega();
    let mut worst3 = 0.0f64;
    let mut shrinking = 0;
    for k in 0..36 {
        let dir = Complex64::from_polar(1.0, k as f64 * 2.0 * PI / 36.0);
        let err = |r: f64| {
            solver
                .solve_parallelogram(dir * r)
                .map(|p| (p.omega() - w0).norm())
        };
        match (err(1e-3), err(1e-4)) {
            (Ok(a), Ok(b)) => {
                worst3 = worst3.max(a);
                if b < a {
                    shrinking += 1;
                }
            }
            _ => worst3 = f64::INFINITY,
        }
    }
    (
        worst3 < 1e-2 && shrinking == 36,
        format!(
            "max |omega - omega0| {} at |c| = 1e-3; error smaller at 1e-4 on {shrinking}/36 rays",
            e(worst3)
        ),
    )
}

fn fiber_symmetry() -> Check {
    let solver = ModuliSolver::default();
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let c = strip_sample(&mut rng, 0.05, 0.95);
        worst = match (
            solver.solve_parallelogram(c),
            solver.solve_parallelogram(-c),
        ) {
            (Ok(a), Ok(b)) => worst.max((a.omega() - b.omega()).norm()),
            _ => f64::INFINITY,
        };
    }
    (
        worst < 1e-9,
        format!("max |omega(-c) - omega(c)| {} over 100 samples", e(worst)),
    )
}

fn order_six() -> Check {
    let solver = ModuliSolver::default();
    let mut rng = rng(4);
    let (mut six, mut three) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let c = strip_sample(&mut rng, 0.05, 0.95);
        let mut z = c;
        for k in 1..=6 {
            z = match solver.rotate6(z) {
                Ok(v) => v,
                Err(err) => return (false, format!("rotate6 failed at {z}: {err}")),
            };
            if k == 3 {
                three = three.max((z + c).norm() / c.norm());
            }
        }
        six = six.max((z - c).norm() / c.norm());
    }
    (
        six < 1e-6 && three < 1e-6,
        format!(
            "max relative error {} after six rotations, {} against -c after three",
            e(six),
            e(three)
        ),
    )
}

fn slope_on_loci() -> Check {
    let filling = DehnFilling::default();
    let want = [-1.0, 0.0, 0.5, 1.0, 2.0];
    let mut worst = 0.0f64;
    let mut infinite = 0;
    let mut bad = Vec::new();
    for k in 1..=9 {
        let s = k as f64 / 10.0;
        let pts = match filling
            .solver()
            .special_points(LevelSpec::new(s).expect("level"))
        {
            Ok(p) => p,
            Err(err) => {
                bad.push(format!("s={s}: {err}"));
                continue;
            }
        };
        for (j, &target) in want.iter().enumerate() {
            match filling.slope_t(pts[j]) {
                Ok(Extended::Finite(t)) => worst = worst.max((t - target).abs()),
                _ => bad.push(format!("T(p{}) at s={s}", j + 1)),
            }
        }
        match filling.slope_t(pts[5]) {
            Ok(Extended::Infinite) => infinite += 1,
            other => bad.push(format!("T(p6) at s={s} = {other:?}")),
        }
    }
    (
        worst < 1e-8 && infinite == 9 && bad.is_empty(),
        format!(
            "max |T(p_i) - t_i| {} for p1..p5; T(p6) infinite at {infinite}/9 levels{}",
            e(worst),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; problems: {}", bad.join(", "))
            }
        ),
    )
}

fn slope_monotonicity() -> Check {
    let filling = DehnFilling::default();
    let level = LevelSpec::new(0.5).expect("level");
    let mut values = Vec::with_capacity(720);
    for k in 0..720 {
        let th = k as f64 * 2.0 * PI / 720.0;
        let t = level_point(level, th).and_then(|c| filling.slope_t(c));
        match t {
            Ok(v) => values.push(v),
            Err(err) => return (false, format!("sample {k}: {err}")),
        }
    }
    let (mut rises, mut crossings, mut violations) = (0, 0, 0);
    for k in 0..720 {
        let (a, b) = (values[k], values[(k + 1) % 720]);
        match (a, b) {
            (Extended::Finite(x), Extended::Finite(y)) if y > x => rises += 1,
            // across the gap T runs off to +inf and returns from -inf
            (Extended::Finite(x), Extended::Finite(y)) if x > 2.0 && y < -1.0 => crossings += 1,
            (Extended::Infinite, _) | (_, Extended::Infinite) => crossings += 1,
            _ => violations += 1,
        }
    }
    (
        violations == 0 && crossings == 2,
        format!("{rises} increasing steps, {crossings} gap crossings, {violations} violations over 720 samples"),
    )
}

fn boundary_limit() -> Check {
    let filling = DehnFilling::default();
    let levels = parse_schedule("tail:2..8").expect("schedule");
    let trace = match filling.boundary_trace(Extended::Finite(0.75), &levels) {
        Ok(t) => t,
        Err(err) => return (false, err.to_string()),
    };
    let mut gaps = Vec::new();
    let mut ims = Vec::new();
    for tp in &trace {
        let Some((mu, lambda)) = tp.filling.finite_pair() else {
            return (false, format!("infinite coefficients at s = {}", tp.s));
        };
        gaps.push(((mu + lambda - 2.0).abs(), mu, lambda));
        ims.push(tp.point.c1().im);
    }
    let decreasing = gaps.windows(2).all(|w| w[1].0 < w[0].0);
    let rising = ims.windows(2).all(|w| w[1] > w[0] && w[1] < PI);
    let &(g, mu, lambda) = gaps.last().expect("trace");
    let dist = ((mu - 1.5).powi(2) + (lambda - 0.5).powi(2)).sqrt();
    let pi_gap = PI - ims.last().expect("trace");
    (
        decreasing && g < 0.1 && dist < 0.1 && rising,
        format!(
            "|mu+lambda-2| {} at k=8 (strictly decreasing: {decreasing}); |(mu,lambda)-(1.5,0.5)| {}; pi - Im(c omega) {} (monotone: {rising})",
            e(g),
            e(dist),
            e(pi_gap)
        ),
    )
}

fn hexagon_containment() -> Check {
    let filling = DehnFilling::default();
    let hex = HexagonRegion;
    let mut rng = rng(8);
    let (mut inside, mut failures) = (0usize, 0usize);
    let (mut min_gauge, mut max_gauge) = (f64::INFINITY, 0.0f64);
    for _ in 0..10_000 {
        let c = strip_sample(&mut rng, 0.0, 0.999);
        let Some((mu, lambda)) = filling
            .solver()
            .solve_parallelogram(c)
            .ok()
            .and_then(|p| DehnFilling::filling_of(&p).finite_pair())
        else {
            failures += 1;
            continue;
        };
        let g = hex.gauge(mu, lambda);
        min_gauge = min_gauge.min(g);
        max_gauge = max_gauge.max(g);
        if hex.contains_with_tolerance(mu, lambda, HEXAGON_TOL) {
            inside += 1;
        }
    }
    let levels = parse_schedule("tail:2..8").expect("schedule");
    let slopes = [Extended::Finite(0.25), Extended::Finite(0.75)];
    let approach = match rotated_traces(&filling, &slopes, &levels) {
        Ok(traces) => {
            let pts: Vec<(f64, f64)> = traces
                .iter()
                .filter_map(|(_, _, tp)| tp.filling.finite_pair())
                .collect();
            edge_approach(&pts).map(|a| a.0)
        }
        Err(_) => [f64::INFINITY; 6],
    };
    let worst_edge = approach.iter().cloned().fold(0.0, f64::max);
    let contained = inside == 10_000 && failures == 0;
    let approached = worst_edge < EDGE_APPROACH;
    (
        contained && approached,
        format!(
            "{inside}/10000 samples inside the closed hexagon ({failures} failures), gauge range [{}, {}]; \
             traced points reach every edge within {} (< 0.05: {approached})",
            e(min_gauge),
            e(max_gauge),
            e(worst_edge)
        ),
    )
}

fn degeneration() -> Check {
    let filling = DehnFilling::default();
    let levels = parse_schedule("tail:2..8").expect("schedule");
    let rows = match filling.degeneration(1, 1, &levels) {
        Ok(r) => r,
        Err(err) => return (false, err.to_string()),
    };
    let limit = cone_angle_limit(1, 1);
    let gaps: Vec<f64> = rows.iter().map(|(_, c)| (c.angle - limit).abs()).collect();
    let lengths: Vec<f64> = rows.iter().map(|(_, c)| c.length).collect();
    let converging = gaps.windows(2).all(|w| w[1] < w[0]);
    let increasing = lengths.windows(2).all(|w| w[1] > w[0]);
    let (g, l) = (*gaps.last().expect("rows"), *lengths.last().expect("rows"));
    (
        g < 0.1 && converging && l > 10.0 && increasing,
        format!(
            "|angle - 2pi| {} at s = 1-1e-8 (monotone: {converging}); length {l:.4} (increasing: {increasing})",
            e(g)
        ),
    )
}

fn packing_validity(opts: &Options) -> Check {
    let window = Window::symmetric(3);
    let scale = opts.kappa_fault.unwrap_or(1.0);
    let affine = build_affine_packing(Complex64::new(0.0, 2.0 * PI / 3.0), &window);
    let euclid = build_euclidean_packing(&window);
    let (Ok(affine), Ok(euclid)) = (affine, euclid) else {
        return (false, "packing construction failed".into());
    };
    let (affine, euclid) = (
        affine.with_radius_scale(scale),
        euclid.with_radius_scale(scale),
    );
    let ra = validate_packing(&affine);
    let re = validate_packing(&euclid);
    let want = 1.0 / (2.0 * 3f64.sqrt());
    let dual_err = euclid
        .duals
        .iter()
        .map(|d| (d.radius - want).abs())
        .fold(0.0, f64::max);
    (
        ra.within(1e-9) && re.within(1e-9) && dual_err <= 1e-12,
        format!(
            "affine: tangency {}, orthogonality {}, overlaps {}; euclidean: tangency {}, orthogonality {}, overlaps {}, dual radius error {}",
            e(ra.max_tangency_residual),
            e(ra.max_orthogonality_residual),
            ra.local_overlap_violations,
            e(re.max_tangency_residual),
            e(re.max_orthogonality_residual),
            re.local_overlap_violations,
            e(dual_err)
        ),
    )
}

/// Criteria 1 to 10; the self-test criterion is judged over a whole run.
pub fn run(id: usize, opts: &Options) -> Outcome {
    let start = Instant::now();
    let (passed, measured) = match id {
        1 => residual(),
        2 => hexagonal_limit(),
        3 => fiber_symmetry(),
        4 => order_six(),
        5 => slope_on_loci(),
        6 => slope_monotonicity(),
        7 => boundary_limit(),
        8 => hexagon_containment(),
        9 => degeneration(),
        10 => packing_validity(opts),
        _ => (false, format!("no criterion {id}")),
    };
    Outcome {
        id,
        title: title(id),
        passed,
        measured,
        elapsed: start.elapsed(),
    }
}

/// All criteria in order, calling `report` as each finishes. The last one
/// passes iff every other passed within [`SUITE_BUDGET`].
pub fn run_all(opts: &Options, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    let start = Instant::now();
    let mut out = Vec::with_capacity(CRITERIA);
    for id in 1..CRITERIA {
        let o = run(id, opts);
        report(&o);
        out.push(o);
    }
    let elapsed = start.elapsed();
    let failed = out.iter().filter(|o| !o.passed).count();
    let last = Outcome {
        id: CRITERIA,
        title: title(CRITERIA),
        passed: failed == 0 && elapsed < SUITE_BUDGET,
        measured: format!(
            "{failed} of {} criteria failed; suite time {:.2} s (< 60 s)",
            CRITERIA - 1,
            elapsed.as_secs_f64()
        ),
        elapsed,
    };
    report(&last);
    out.push(last);
    out
}
