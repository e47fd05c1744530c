//! Dehn filling coefficients `(mu, lambda)` with `mu c + lambda c omega = 2 pi i`,
//! the slope-like invariant `T = mu / (mu + lambda)`, cone data of degenerating
//! fillings, and the hexagon bounding the filling space.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::levelset::{level_point, LevelSpec, MAX_LEVEL};
use crate::moduli::{ModuliPoint, ModuliSolver};
use crate::ComplexValue;

/// `|Re(c omega) - Re(c)|` below this fraction of `|c| + |c omega|` is the gap
/// `t = infinity`.
pub const GAP_TOLERANCE: f64 = 1e-11;

/// A real number or the point at infinity of `R ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinite)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

impl From<f64> for Extended {
    fn from(x: f64) -> Self {
        Extended::Finite(x)
    }
}

/// Which side of `mu c + lambda c omega = +-2 pi i` a coefficient pair solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    PlusTwoPiI,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FillingData {
    pub mu: Extended,
    pub lambda: Extended,
    /// `mu / (mu + lambda)`; `None` at the complete structure `c = 0`.
    pub t: Option<Extended>,
    pub branch: Branch,
}

impl FillingData {
    fn complete() -> Self {
        FillingData {
            mu: Extended::Infinite,
            lambda: Extended::Infinite,
            t: None,
            branch: Branch::PlusTwoPiI,
        }
    }

    pub fn finite_pair(&self) -> Option<(f64, f64)> {
        Some((self.mu.finite()?, self.lambda.finite()?))
    }

    /// The equally valid `-2 pi i` solution `(-mu, -lambda)`.
    pub fn negated_pair(&self) -> Option<(f64, f64)> {
        self.finite_pair().map(|(m, l)| (-m, -l))
    }
}

fn slope_from(c: ComplexValue, cw: ComplexValue) -> Extended {
    let den = cw.re - c.re;
    if den.abs() <= GAP_TOLERANCE * (c.norm() + cw.norm()) {
        Extended::Infinite
    } else {
        Extended::Finite(cw.re / den)
    }
}

fn coefficients_from(c: ComplexValue, cw: ComplexValue) -> (f64, f64) {
    // [Re c, Re cw; Im c, Im cw] (mu, lambda)^T = (0, 2 pi)^T; det = |c|^2 Im(omega) > 0
    let det = c.re * cw.im - cw.re * c.im;
    (-TAU * cw.re / det, TAU * c.re / det)
}

/// Cone angle and singular-locus length along the `alpha^p beta^q` filling curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeData {
    pub p: i64,
    pub q: i64,
    /// `|Im(p c + q c omega)|`.
    pub angle: f64,
    /// `|Re(r c + s c omega)|` with `p s - q r = 1`.
    pub length: f64,
    /// The dual curve `(r, s)` used for `length`.
    pub dual: (i64, i64),
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// `(r, s)` with `p s - q r = 1` and the smallest nonnegative `s`.
///
/// For `q = 0` (so `p = +-1`) `s = p` is forced and `r = 0` is returned.
pub fn dual_curve(p: i64, q: i64) -> Result<(i64, i64)> {
    let (g, x, y) = ext_gcd(p, q);
    if g != 1 {
        return Err(Error::InvalidArgument(format!(
            "(p, q) = ({p}, {q}) is not a coprime pair"
        )));
    }
    // p x + q y = 1  =>  s = x, r = -y; shift by (r, s) += k (p, q)
    let (mut r, mut s) = (-y, x);
    if q != 0 {
        let target = s.rem_euclid(q.abs());
        let k = (target - s) / q;
        r += k * p;
        s = target;
    } else {
        r = 0;
    }
    Ok((r, s))
}

/// The closed hexagon `{|mu| <= 2, |lambda| <= 2, |mu + lambda| <= 2}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HexagonRegion;

impl HexagonRegion {
    /// Vertices in the order the six boundary edges are traversed.
    pub const VERTICES: [(f64, f64); 6] = [
        (0.0, 2.0),
        (2.0, 0.0),
        (2.0, -2.0),
        (0.0, -2.0),
        (-2.0, 0.0),
        (-2.0, 2.0),
    ];

    /// The boundary edges:
    /// `mu + lambda = 2`, `mu = 2`, `lambda = -2`, `mu + lambda = -2`, `mu = -2`, `lambda = 2`.
    pub fn edges() -> [((f64, f64), (f64, f64)); 6] {
        let v = Self::VERTICES;
        std::array::from_fn(|i| (v[i], v[(i + 1) % 6]))
    }

    pub fn edge_names() -> [&'static str; 6] {
        [
            "mu+lambda=2, mu>=0, lambda>=0",
            "mu=2, -2<=lambda<=0",
            "lambda=-2, 0<=mu<=2",
            "mu+lambda=-2, mu<=0, lambda<=0",
            "mu=-2, 0<=lambda<=2",
            "lambda=2, -2<=mu<=0",
        ]
    }

    pub fn contains(&self, mu: f64, lambda: f64) -> bool {
        self.contains_with_tolerance(mu, lambda, 0.0)
    }

    pub fn contains_with_tolerance(&self, mu: f64, lambda: f64, tol: f64) -> bool {
        self.gauge(mu, lambda) <= 1.0 + tol / 2.0
    }

    /// `max(|mu|, |lambda|, |mu + lambda|) / 2`: 1 on the boundary, below 1 inside.
    pub fn gauge(&self, mu: f64, lambda: f64) -> f64 {
        mu.abs().max(lambda.abs()).max((mu + lambda).abs()) / 2.0
    }

    /// Euclidean distance from `(mu, lambda)` to boundary edge `i`.
    pub fn distance_to_edge(&self, i: usize, mu: f64, lambda: f64) -> f64 {
        let ((ax, ay), (bx, by)) = Self::edges()[i];
        let (dx, dy) = (bx - ax, by - ay);
        let u = (((mu - ax) * dx + (lambda - ay) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
        ((mu - ax - u * dx).powi(2) + (lambda - ay - u * dy).powi(2)).sqrt()
    }
}

/// True iff `|mu| <= 2`, `|lambda| <= 2` and `|mu + lambda| <= 2`.
pub fn hexagon_contains(mu: f64, lambda: f64) -> bool {
    HexagonRegion.contains(mu, lambda)
}

/// The action of the order-6 rotation `c -> c omega` on filling coefficients.
pub fn rotate_coefficients(mu: f64, lambda: f64) -> (f64, f64) {
    (mu + lambda, -mu)
}

/// One sample of a traced level set of `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub s: f64,
    pub theta: f64,
    pub point: ModuliPoint,
    pub filling: FillingData,
}

/// Filling computations on top of a [`ModuliSolver`].
#[derive(Debug, Clone, Copy, Default)]
pub struct DehnFilling {
    solver: ModuliSolver,
}

impl DehnFilling {
    pub fn new(solver: ModuliSolver) -> Self {
        DehnFilling { solver }
    }

    pub fn solver(&self) -> &ModuliSolver {
        &self.solver
    }

    /// Coefficients on the `+2 pi i` branch; `(inf, inf)` at `c = 0`.
    pub fn filling_coefficients(&self, c: ComplexValue) -> Result<FillingData> {
        if c.im.abs() >= PI || !c.im.is_finite() {
            return Err(Error::Domain(format!(
                "|Im c| = {} is not below pi",
                c.im.abs()
            )));
        }
        if c == Complex64::new(0.0, 0.0) {
            return Ok(FillingData::complete());
        }
        let point = self.solver.solve_parallelogram(c)?;
        Ok(Self::filling_of(&point))
    }

    /// Coefficients of an already solved point.
    pub fn filling_of(point: &ModuliPoint) -> FillingData {
        let (c, cw) = (point.c(), point.c1());
        let (mu, lambda) = coefficients_from(c, cw);
        FillingData {
            mu: mu.into(),
            lambda: lambda.into(),
            t: Some(slope_from(c, cw)),
            branch: Branch::PlusTwoPiI,
        }
    }

    /// `T(c) = Re(c omega) / (Re(c omega) - Re(c))`, infinite on the gap.
    pub fn slope_t(&self, c: ComplexValue) -> Result<Extended> {
        if c == Complex64::new(0.0, 0.0) {
            return Err(Error::CompleteStructure);
        }
        let point = self.solver.solve_parallelogram(c)?;
        Ok(slope_from(point.c(), point.c1()))
    }

    pub fn cone_data(&self, c: ComplexValue, p: i64, q: i64) -> Result<ConeData> {
        let (r, s) = dual_curve(p, q)?;
        if c == Complex64::new(0.0, 0.0) {
            return Err(Error::CompleteStructure);
        }
        let point = self.solver.solve_parallelogram(c)?;
        Ok(Self::cone_of(&point, p, q, (r, s)))
    }

    fn cone_of(point: &ModuliPoint, p: i64, q: i64, (r, s): (i64, i64)) -> ConeData {
        let (c, cw) = (point.c(), point.c1());
        ConeData {
            p,
            q,
            angle: (p as f64 * c + q as f64 * cw).im.abs(),
            length: (r as f64 * c + s as f64 * cw).re.abs(),
            dual: (r, s),
        }
    }

    /// The point of `L_s` on the closed upper arc from `l_1` to `l_7` where
    /// `T = t`.
    pub fn t_level_point(&self, t: Extended, level: LevelSpec) -> Result<ComplexValue> {
        Ok(self.t_level_seeded(t, level, None)?.0)
    }

    /// [`Self::t_level_point`] returning the angle too, with the bisection
    /// localized around `seed` when one is given.
    pub fn t_level_seeded(
        &self,
        t: Extended,
        level: LevelSpec,
        seed: Option<f64>,
    ) -> Result<(ComplexValue, f64)> {
        if let Extended::Finite(x) = t {
            if !x.is_finite() {
                return Err(Error::InvalidArgument(format!("t = {x}")));
            }
        }
        let pts = self.solver.special_points(level)?;
        let theta = |j: usize| pts[j - 1].arg();
        // T at l_1..l_6, increasing counterclockwise; the arc (l_6, l_7) carries t < -1.
        let (lo, hi, above_at_hi) = match t {
            Extended::Infinite => return Ok((pts[5], theta(6))),
            Extended::Finite(x) => {
                let known = [-1.0, 0.0, 0.5, 1.0, 2.0];
                if let Some(j) = known.iter().position(|&k| k == x) {
                    return Ok((pts[j], theta(j + 1)));
                }
                match x {
                    x if x < -1.0 => (theta(6), PI, false),
                    x if x < 0.0 => (0.0, theta(2), false),
                    x if x < 0.5 => (theta(2), theta(3), false),
                    x if x < 1.0 => (theta(3), theta(4), false),
                    x if x < 2.0 => (theta(4), theta(5), false),
                    _ => (theta(5), theta(6), true),
                }
            }
        };
        let target = t.finite().unwrap_or_default();
        // g(theta) > 0 iff T(theta) lies past t; an infinite T sits at the gap
        // end of the bracket.
        let above = |th: f64| -> Result<bool> {
            let c = level_point(level, th)?;
            let point = self.solver.solve_parallelogram(c)?;
            Ok(match slope_from(point.c(), point.c1()) {
                Extended::Finite(v) => v > target,
                Extended::Infinite => {
                    if above_at_hi {
                        true
                    } else {
                        th - lo > hi - th
                    }
                }
            })
        };

        let (mut a, mut b) = (lo, hi);
        if let Some(seed) = seed.filter(|&x| x > lo && x < hi) {
            let mut width = 1e-4 * (hi - lo);
            loop {
                let (na, nb) = ((seed - width).max(lo), (seed + width).min(hi));
                let left_ok = na == lo || !above(na)?;
                let right_ok = nb == hi || above(nb)?;
                if left_ok && right_ok {
                    (a, b) = (na, nb);
                    break;
                }
                if na == lo && nb == hi {
                    break;
                }
                width *= 8.0;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if above(mid)? {
                b = mid;
            } else {
                a = mid;
            }
        }
        let th = 0.5 * (a + b);
        let c = level_point(level, th)?;
        let point = self.solver.solve_parallelogram(c)?;
        if let (Extended::Finite(want), Extended::Finite(got)) = (t, slope_from(c, point.c1())) {
            let scale = 1.0 + want.abs();
            if (got - want).abs() > 1e-6 * scale {
                return Err(Error::Numeric(format!(
                    "t-level bisection did not converge: T = {got}, wanted {want} at s = {}",
                    level.value()
                )));
            }
        }
        Ok((c, th))
    }

    /// Continue the level set `T = t` over increasing levels, each solve seeded
    /// by the previous angle.
    pub fn boundary_trace(&self, t: Extended, s_list: &[f64]) -> Result<Vec<TracePoint>> {
        if s_list
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidArgument(
                "s schedule must be strictly increasing".into(),
            ));
        }
        let mut seed = None;
        let mut out = Vec::with_capacity(s_list.len());
        for &s in s_list {
            if s >= MAX_LEVEL {
                return Err(Error::LevelOutOfRange(s));
            }
            let level = LevelSpec::new(s)?;
            let (c, theta) = self.t_level_seeded(t, level, seed)?;
            let point = self.solver.solve_parallelogram(c)?;
            out.push(TracePoint {
                s,
                theta,
                point,
                filling: Self::filling_of(&point),
            });
            seed = Some(theta);
        }
        Ok(out)
    }

    /// Cone data along the level set `T = p / (p + q)`.
    pub fn degeneration(
        &self,
        p: i64,
        q: i64,
        s_list: &[f64],
    ) -> Result<Vec<(TracePoint, ConeData)>> {
        let dual = dual_curve(p, q)?;
        let t = if p + q == 0 {
            Extended::Infinite
        } else {
            Extended::Finite(p as f64 / (p + q) as f64)
        };
        Ok(self
            .boundary_trace(t, s_list)?
            .into_iter()
            .map(|tp| {
                let cone = Self::cone_of(&tp.point, p, q, dual);
                (tp, cone)
            })
            .collect())
    }
}

pub fn filling_coefficients(c: ComplexValue) -> Result<FillingData> {
    DehnFilling::default().filling_coefficients(c)
}

pub fn slope_t(c: ComplexValue) -> Result<Extended> {
    DehnFilling::default().slope_t(c)
}

pub fn cone_data(c: ComplexValue, p: i64, q: i64) -> Result<ConeData> {
    DehnFilling::default().cone_data(c, p, q)
}

pub fn t_level_point(t: Extended, level: LevelSpec) -> Result<ComplexValue> {
    DehnFilling::default().t_level_point(t, level)
}

pub fn boundary_trace(t: Extended, s_list: &[f64]) -> Result<Vec<TracePoint>> {
    DehnFilling::default().boundary_trace(t, s_list)
}
