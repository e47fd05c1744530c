//! The moduli space of one-circle packings, identified with the punctured
//! strip `0 < |c|, |Im c| < pi`.
//!
//! A nonzero `c` on the level curve `L_s` determines two further points
//! `c1 = c omega` and `c2 = c (omega - 1)` of `L_s` such that `0, c, c1, c2` is
//! a parallelogram and `c, c1, c2` run counterclockwise. They are found as the
//! intersections of `L_s` with its translate `L_s + c`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::levelset::{
    f_value, imaginary_axis_radius, level_point, real_axis_radius, LevelSpec, MAX_LEVEL,
};
use crate::ComplexValue;

/// `e^{i pi / 3}`, the Teichmüller parameter of the hexagonal torus.
pub fn hexagonal_omega() -> ComplexValue {
    Complex64::from_polar(1.0, PI / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Samples of the polar angle scanned for intersections of `L_s` and `L_s + c`.
    pub theta_samples: usize,
    /// Number of grid doublings tried when the scan does not see exactly two roots.
    pub max_refinements: u32,
    /// Bound on `|f(c1) - f(c)|` and `|f(c2) - f(c)|`.
    pub residual_tolerance: f64,
    /// Angular tolerance (radians) under which a point is classified onto a locus.
    pub locus_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            theta_samples: 720,
            max_refinements: 5,
            residual_tolerance: 1e-9,
            locus_tolerance: 1e-9,
        }
    }
}

/// A solved point of the moduli space. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuliPoint {
    c: ComplexValue,
    c2: ComplexValue,
    s: f64,
}

impl ModuliPoint {
    pub fn c(&self) -> ComplexValue {
        self.c
    }

    /// `c omega`, stored as `c + c2` so the parallelogram closes exactly.
    pub fn c1(&self) -> ComplexValue {
        self.c + self.c2
    }

    /// `c (omega - 1)`.
    pub fn c2(&self) -> ComplexValue {
        self.c2
    }

    /// The Teichmüller parameter `omega = c1 / c`.
    pub fn omega(&self) -> ComplexValue {
        self.c1() / self.c
    }

    /// The common level `f(c)`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// `max(|f(c1) - s|, |f(c2) - s|)`.
    pub fn residual(&self) -> f64 {
        (f_value(self.c1()) - self.s)
            .abs()
            .max((f_value(self.c2()) - self.s).abs())
    }
}

/// Region of the strip cut out by the twelve loci.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionId {
    Origin,
    /// `l_j`, the trace of the special point `p_j`; `1..=12`.
    Locus(u8),
    /// `C_k`, the open sector between `l_k` and `l_{k+1}`; `1..=12`.
    Region(u8),
}

fn wrap12(k: i64) -> u8 {
    ((k - 1).rem_euclid(12) + 1) as u8
}

impl RegionId {
    /// The image under `k` applications of the order-6 rotation `c -> c omega`.
    pub fn rotated(self, k: i64) -> RegionId {
        match self {
            RegionId::Origin => RegionId::Origin,
            RegionId::Locus(j) => RegionId::Locus(wrap12(j as i64 + 2 * k)),
            RegionId::Region(j) => RegionId::Region(wrap12(j as i64 + 2 * k)),
        }
    }

    /// The image under complex conjugation.
    pub fn conjugated(self) -> RegionId {
        match self {
            RegionId::Origin => RegionId::Origin,
            RegionId::Locus(j) => RegionId::Locus(wrap12(2 - j as i64)),
            RegionId::Region(j) => RegionId::Region(wrap12(1 - j as i64)),
        }
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionId::Origin => write!(f, "ORIGIN"),
            RegionId::Locus(j) => write!(f, "l{j}"),
            RegionId::Region(k) => write!(f, "C{k}"),
        }
    }
}

impl FromStr for RegionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("region id {s:?}"));
        if s == "ORIGIN" {
            return Ok(RegionId::Origin);
        }
        let (tag, num) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let j: u8 = num.parse().map_err(|_| bad())?;
        if !(1..=12).contains(&j) {
            return Err(bad());
        }
        match tag {
            "l" => Ok(RegionId::Locus(j)),
            "C" => Ok(RegionId::Region(j)),
            _ => Err(bad()),
        }
    }
}

fn check_strip(c: ComplexValue) -> Result<()> {
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite parameter {c}")));
    }
    if c.im.abs() >= PI {
        return Err(Error::Domain(format!(
            "|Im c| = {} is not below pi",
            c.im.abs()
        )));
    }
    Ok(())
}

/// `-c`, the other affine parameter over the same conformal torus.
pub fn fiber_partner(c: ComplexValue) -> Result<ComplexValue> {
    if c == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("c = 0 has no fiber partner".into()));
    }
    Ok(-c)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ModuliSolver {
    config: SolverConfig,
}

impl ModuliSolver {
    pub fn new(config: SolverConfig) -> Self {
        ModuliSolver { config }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// Solve the parallelogram condition for `c`.
    ///
    /// Scans `h(theta) = f(x(theta) - c) - s`, `x(theta)` the point of `L_s` at
    /// angle `theta`, for sign changes, bisects each one, and keeps the root
    /// lying counterclockwise of `c`. `h < 0` exactly on the arc of `L_s`
    /// inside `L_s + c`; the grid starts opposite `c` so that arc never wraps.
    pub fn solve_parallelogram(&self, c: ComplexValue) -> Result<ModuliPoint> {
        check_strip(c)?;
        if c == Complex64::new(0.0, 0.0) {
            return Err(Error::CompleteStructure);
        }
        let s = f_value(c);
        let level = LevelSpec::new(s)?;
        if s >= MAX_LEVEL {
            return Err(Error::LevelOutOfRange(s));
        }
        let h = |theta: f64| -> Result<(f64, ComplexValue)> {
            let x = level_point(level, theta)?;
            Ok((f_value(x - c) - s, x))
        };

        let start = c.arg() + PI;
        let mut n = self.config.theta_samples.max(8);
        let mut last_dump = Vec::new();
        for _ in 0..=self.config.max_refinements {
            let step = TAU / n as f64;
            let mut brackets = Vec::with_capacity(2);
            let mut prev = (start, h(start)?.0);
            let mut dump = Vec::with_capacity(n + 1);
            dump.push(prev);
            for k in 1..=n {
                let theta = start + step * k as f64;
                let g = h(theta)?.0;
                if (prev.1 < 0.0) != (g < 0.0) {
                    brackets.push((prev.0, theta));
                }
                prev = (theta, g);
                dump.push(prev);
            }
            if brackets.len() == 2 {
                let roots = brackets
                    .iter()
                    .map(|&(a, b)| bisect_angle(&h, a, b))
                    .collect::<Result<Vec<_>>>()?;
                let c1 = roots
                    .into_iter()
                    .find(|x| (x * c.conj()).im > 0.0)
                    .ok_or_else(|| {
                        Error::Numeric(format!("no counterclockwise intersection for c = {c}"))
                    })?;
                let point = ModuliPoint { c, c2: c1 - c, s };
                self.check_point(&point)?;
                return Ok(point);
            }
            last_dump = dump;
            n *= 2;
        }
        let sign_changes = last_dump
            .windows(2)
            .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
            .count();
        Err(Error::Numeric(format!(
            "expected 2 intersections of L_s and L_s + c for c = {c} (s = {s}), found {sign_changes} \
             on a {}-point grid; theta/h samples: {}",
            last_dump.len() - 1,
            dump_summary(&last_dump)
        )))
    }

    fn check_point(&self, p: &ModuliPoint) -> Result<()> {
        let residual = p.residual();
        if residual.is_nan() || residual >= self.config.residual_tolerance {
            return Err(Error::Numeric(format!(
                "parallelogram residual {residual:e} exceeds {:e} at c = {}",
                self.config.residual_tolerance, p.c
            )));
        }
        if p.omega().im <= 0.0 || p.c1().im.abs() >= PI || p.c2.im.abs() >= PI {
            return Err(Error::Numeric(format!(
                "inconsistent parallelogram at c = {}: c1 = {}, c2 = {}",
                p.c,
                p.c1(),
                p.c2
            )));
        }
        Ok(())
    }

    /// `c omega`: the shift `(0, c, c omega, c(omega - 1)) -> (0, c omega, c(omega - 1), -c)`.
    /// Six applications return `c`.
    pub fn rotate6(&self, c: ComplexValue) -> Result<ComplexValue> {
        Ok(self.solve_parallelogram(c)?.c1())
    }

    /// The twelve special points `p_1..p_12` of `L_s`, counterclockwise from
    /// the positive real axis.
    pub fn special_points(&self, level: LevelSpec) -> Result<[ComplexValue; 12]> {
        let s = level.regular()?;
        let p1 = Complex64::new(real_axis_radius(s), 0.0);
        let p4 = Complex64::new(0.0, imaginary_axis_radius(s));
        let from_p1 = self.solve_parallelogram(p1)?;
        let from_p10 = self.solve_parallelogram(-p4)?;
        let (p3, p5) = (from_p1.c1(), from_p1.c2());
        let (p12, p2) = (from_p10.c1(), from_p10.c2());
        Ok([p1, p2, p3, p4, p5, -p12, -p1, -p2, -p3, -p4, -p5, p12])
    }

    /// `p_j` on `L_s`, `j` in `1..=12`.
    pub fn locus_point(&self, j: usize, level: LevelSpec) -> Result<ComplexValue> {
        if !(1..=12).contains(&j) {
            return Err(Error::InvalidArgument(format!(
                "locus index {j} not in 1..=12"
            )));
        }
        Ok(self.special_points(level)?[j - 1])
    }

    /// Classify `c` against the loci through the angular position of `c` on
    /// its own level curve.
    pub fn classify(&self, c: ComplexValue) -> Result<RegionId> {
        check_strip(c)?;
        if c == Complex64::new(0.0, 0.0) {
            return Ok(RegionId::Origin);
        }
        let level = LevelSpec::of(c)?;
        let angles = self.special_points(level)?.map(angle);
        let phi = angle(c);
        let tol = self.config.locus_tolerance;
        for (j, &a) in angles.iter().enumerate() {
            let d = (phi - a).abs();
            if d.min(TAU - d) <= tol {
                return Ok(RegionId::Locus(j as u8 + 1));
            }
        }
        let k = angles.iter().rposition(|&a| a < phi).unwrap_or(11);
        Ok(RegionId::Region(k as u8 + 1))
    }
}

/// Polar angle in `[0, 2 pi)`.
fn angle(z: ComplexValue) -> f64 {
    let a = z.im.atan2(z.re).rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

fn bisect_angle<H>(h: &H, a: f64, b: f64) -> Result<ComplexValue>
where
    H: Fn(f64) -> Result<(f64, ComplexValue)>,
{
    let (mut lo, mut hi) = (a, b);
    let (mut glo, mut xlo) = h(lo)?;
    let (mut ghi, mut xhi) = h(hi)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (g, x) = h(mid)?;
        if (g < 0.0) == (glo < 0.0) {
            (lo, glo, xlo) = (mid, g, x);
        } else {
            (hi, ghi, xhi) = (mid, g, x);
        }
    }
    Ok(if glo.abs() <= ghi.abs() { xlo } else { xhi })
}

fn dump_summary(dump: &[(f64, f64)]) -> String {
    let stride = (dump.len() / 24).max(1);
    dump.iter()
        .step_by(stride)
        .map(|(t, g)| format!("({t:.4}, {g:.3e})"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// [`ModuliSolver::solve_parallelogram`] with the default configuration.
pub fn solve_parallelogram(c: ComplexValue) -> Result<ModuliPoint> {
    ModuliSolver::default().solve_parallelogram(c)
}

pub fn rotate6(c: ComplexValue) -> Result<ComplexValue> {
    ModuliSolver::default().rotate6(c)
}

pub fn special_points(level: LevelSpec) -> Result<[ComplexValue; 12]> {
    ModuliSolver::default().special_points(level)
}

pub fn locus_point(j: usize, level: LevelSpec) -> Result<ComplexValue> {
    ModuliSolver::default().locus_point(j, level)
}

pub fn classify(c: ComplexValue) -> Result<RegionId> {
    ModuliSolver::default().classify(c)
}
