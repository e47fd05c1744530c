//! Developed one-circle packings.
//!
//! For a moduli point `(omega, c)` the packing on the universal cover of
//! `C \ {0}` is the orbit of the base circle `C_0` (center 1, radius `kappa`)
//! under the holonomy similarities `z -> e^c z`, `z -> e^{c omega} z`: circle
//! `(m, n)` has center `e^{m c + n c omega}` and radius `kappa |center|`.
//! At `c = 0` it is the hexagonal packing by circles of radius 1/2.

use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moduli::{hexagonal_omega, ModuliSolver};
use crate::ComplexValue;

/// Largest `|Re(m c + n c omega)|` allowed in a window.
pub const MAX_EXPONENT: f64 = 300.0;

pub type Label = (i64, i64);

/// Lattice index ranges of the developed circles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub m: RangeInclusive<i64>,
    pub n: RangeInclusive<i64>,
}

impl Window {
    pub fn symmetric(k: i64) -> Self {
        Window {
            m: -k..=k,
            n: -k..=k,
        }
    }

    pub fn contains(&self, (m, n): Label) -> bool {
        self.m.contains(&m) && self.n.contains(&n)
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.m
            .clone()
            .flat_map(move |m| self.n.clone().map(move |n| (m, n)))
    }

    fn corners(&self) -> [Label; 4] {
        let (m0, m1, n0, n1) = (
            *self.m.start(),
            *self.m.end(),
            *self.n.start(),
            *self.n.end(),
        );
        [(m0, n0), (m0, n1), (m1, n0), (m1, n1)]
    }
}

/// Which of the two interstices attached to label `(m, n)` a dual circle fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interstice {
    /// `{(m, n), (m + 1, n), (m, n + 1)}`
    Lower,
    /// `{(m + 1, n), (m, n + 1), (m + 1, n + 1)}`
    Upper,
}

impl Interstice {
    pub fn vertices(self, (m, n): Label) -> [Label; 3] {
        match self {
            Interstice::Lower => [(m, n), (m + 1, n), (m, n + 1)],
            Interstice::Upper => [(m + 1, n), (m, n + 1), (m + 1, n + 1)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleKind {
    Packing,
    Dual(Interstice),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleSpec {
    pub center: ComplexValue,
    pub radius: f64,
    pub label: Label,
    pub kind: CircleKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Holonomy {
    /// `z -> alpha z`, `z -> beta z`, fixing 0.
    Similarity {
        alpha: ComplexValue,
        beta: ComplexValue,
    },
    /// `z -> z + alpha`, `z -> z + beta` (euclidean torus).
    Translation {
        alpha: ComplexValue,
        beta: ComplexValue,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackingSpec {
    pub c: ComplexValue,
    pub omega: ComplexValue,
    pub s: f64,
    /// Common ratio `radius / |center|`; 0 for the euclidean packing.
    pub kappa: f64,
    pub holonomy: Holonomy,
    pub window: Window,
    pub circles: Vec<CircleSpec>,
    pub duals: Vec<CircleSpec>,
    pub adjacency: Vec<(Label, Label)>,
}

impl PackingSpec {
    pub fn circle(&self, label: Label) -> Option<&CircleSpec> {
        let w = &self.window;
        if !w.contains(label) {
            return None;
        }
        let rows = (w.n.end() - w.n.start() + 1) as usize;
        let idx = (label.0 - w.m.start()) as usize * rows + (label.1 - w.n.start()) as usize;
        self.circles.get(idx)
    }

    /// Copy with every packing radius scaled by `factor`; duals are kept.
    pub fn with_radius_scale(&self, factor: f64) -> PackingSpec {
        let mut out = self.clone();
        out.kappa *= factor;
        for circle in &mut out.circles {
            circle.radius *= factor;
        }
        out
    }
}

/// The six neighbours of `(m, n)` in the hexagonal nerve.
pub fn neighbors((m, n): Label) -> [Label; 6] {
    [
        (m + 1, n),
        (m - 1, n),
        (m, n + 1),
        (m, n - 1),
        (m - 1, n + 1),
        (m + 1, n - 1),
    ]
}

fn adjacency(window: &Window) -> Vec<(Label, Label)> {
    let mut edges = Vec::new();
    for (m, n) in window.labels() {
        for other in [(m + 1, n), (m, n + 1), (m - 1, n + 1)] {
            if window.contains(other) {
                edges.push(((m, n), other));
            }
        }
    }
    edges
}

/// `kappa = sqrt(1 - (1 - s)^2)`, the radius of the base circle when the
/// neighbours `e^c`, `e^{c omega}`, `e^{c (omega - 1)}` are tangent to it.
pub fn kappa(s: f64) -> f64 {
    (s * (2.0 - s)).sqrt()
}

/// The affine packing of `c != 0` over `window`.
pub fn build_affine_packing(c: ComplexValue, window: &Window) -> Result<PackingSpec> {
    build_affine_packing_with(&ModuliSolver::default(), c, window)
}

pub fn build_affine_packing_with(
    solver: &ModuliSolver,
    c: ComplexValue,
    window: &Window,
) -> Result<PackingSpec> {
    if window.m.is_empty() || window.n.is_empty() {
        return Err(Error::InvalidArgument("empty packing window".into()));
    }
    let point = solver.solve_parallelogram(c)?;
    let cw = point.c1();
    for (m, n) in window.corners() {
        let x = m as f64 * c.re + n as f64 * cw.re;
        if x.abs() > MAX_EXPONENT {
            return Err(Error::Window(x));
        }
    }
    let k = kappa(point.s());
    let circles = window
        .labels()
        .map(|(m, n)| {
            let w = m as f64 * c + n as f64 * cw;
            let center = w.exp();
            CircleSpec {
                center,
                radius: k * w.re.exp(),
                label: (m, n),
                kind: CircleKind::Packing,
            }
        })
        .collect();
    let mut spec = PackingSpec {
        c,
        omega: point.omega(),
        s: point.s(),
        kappa: k,
        holonomy: Holonomy::Similarity {
            alpha: c.exp(),
            beta: cw.exp(),
        },
        window: window.clone(),
        circles,
        duals: Vec::new(),
        adjacency: adjacency(window),
    };
    spec.duals = dual_circles(&spec)?;
    Ok(spec)
}

/// The hexagonal packing: radius 1/2 circles centred at `m + n e^{i pi / 3}`.
pub fn build_euclidean_packing(window: &Window) -> Result<PackingSpec> {
    if window.m.is_empty() || window.n.is_empty() {
        return Err(Error::InvalidArgument("empty packing window".into()));
    }
    let omega = hexagonal_omega();
    let circles = window
        .labels()
        .map(|(m, n)| CircleSpec {
            center: m as f64 + n as f64 * omega,
            radius: 0.5,
            label: (m, n),
            kind: CircleKind::Packing,
        })
        .collect();
    let mut spec = PackingSpec {
        c: Complex64::new(0.0, 0.0),
        omega,
        s: 0.0,
        kappa: 0.0,
        holonomy: Holonomy::Translation {
            alpha: Complex64::new(1.0, 0.0),
            beta: omega,
        },
        window: window.clone(),
        circles,
        duals: Vec::new(),
        adjacency: adjacency(window),
    };
    spec.duals = dual_circles(&spec)?;
    Ok(spec)
}

fn tangency_point(a: &CircleSpec, b: &CircleSpec) -> ComplexValue {
    let d = b.center - a.center;
    a.center + d * (a.radius / d.norm())
}

/// Circle through three points, computed relative to the first.
fn circumcircle(p: [ComplexValue; 3]) -> Result<(ComplexValue, f64)> {
    let (b, c) = (p[1] - p[0], p[2] - p[0]);
    let d = 2.0 * (b.re * c.im - b.im * c.re);
    let scale = b.norm_sqr().max(c.norm_sqr());
    if d.abs() <= 1e-14 * scale {
        return Err(Error::Numeric(format!("collinear tangency points {p:?}")));
    }
    let (bb, cc) = (b.norm_sqr(), c.norm_sqr());
    let u = Complex64::new((c.im * bb - b.im * cc) / d, (b.re * cc - c.re * bb) / d);
    Ok((p[0] + u, u.norm()))
}

/// Dual circles through the tangency points of every interstice in the window.
pub fn dual_circles(p: &PackingSpec) -> Result<Vec<CircleSpec>> {
    let mut out = Vec::new();
    for label in p.window.labels() {
        for kind in [Interstice::Lower, Interstice::Upper] {
            let tri = kind.vertices(label);
            let Some(circles) = tri.iter().map(|&l| p.circle(l)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let pts = [
                tangency_point(circles[0], circles[1]),
                tangency_point(circles[1], circles[2]),
                tangency_point(circles[2], circles[0]),
            ];
            let (center, radius) = circumcircle(pts)?;
            out.push(CircleSpec {
                center,
                radius,
                label,
                kind: CircleKind::Dual(kind),
            });
        }
    }
    Ok(out)
}

/// Residuals are relative: tangency `| |z_i - z_j| - (r_i + r_j) | / (r_i + r_j)`,
/// orthogonality `| d^2 - (R^2 + r^2) | / (R^2 + r^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ValidationReport {
    pub max_tangency_residual: f64,
    pub max_orthogonality_residual: f64,
    pub local_overlap_violations: usize,
    pub tangency_pairs: usize,
    pub orthogonal_pairs: usize,
}

impl ValidationReport {
    pub fn within(&self, tol: f64) -> bool {
        self.max_tangency_residual < tol
            && self.max_orthogonality_residual < tol
            && self.local_overlap_violations == 0
    }
}

/// Overlap slack, relative to the radius sum.
const OVERLAP_SLACK: f64 = 1e-9;

/// Whether circles `a` and `b` sit on the same sheet of the log cover of
/// `C \ {0}`. An affine circle's lift spans `2 asin(kappa)` in argument, so
/// lifts can only meet when their centres' arguments differ by less than
/// twice that.
fn same_sheet(p: &PackingSpec, a: Label, b: Label) -> bool {
    match p.holonomy {
        Holonomy::Translation { .. } => true,
        Holonomy::Similarity { .. } => {
            let (dm, dn) = ((b.0 - a.0) as f64, (b.1 - a.1) as f64);
            let dw = dm * p.c + dn * p.c * p.omega;
            dw.im.abs() < 2.0 * p.kappa.min(1.0).asin()
        }
    }
}

/// Local overlaps are counted between lifts to the cover, so circles that
/// only meet after winding once around the origin are not violations.
pub fn validate_packing(p: &PackingSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    for &(a, b) in &p.adjacency {
        let (Some(ca), Some(cb)) = (p.circle(a), p.circle(b)) else {
            continue;
        };
        let sum = ca.radius + cb.radius;
        let r = ((ca.center - cb.center).norm() - sum).abs() / sum;
        report.max_tangency_residual = report.max_tangency_residual.max(r);
        report.tangency_pairs += 1;
    }
    for dual in &p.duals {
        let CircleKind::Dual(kind) = dual.kind else {
            continue;
        };
        for label in kind.vertices(dual.label) {
            let Some(circle) = p.circle(label) else {
                continue;
            };
            let want = dual.radius.powi(2) + circle.radius.powi(2);
            let r = ((dual.center - circle.center).norm_sqr() - want).abs() / want;
            report.max_orthogonality_residual = report.max_orthogonality_residual.max(r);
            report.orthogonal_pairs += 1;
        }
    }
    for a in &p.circles {
        for dm in -2i64..=2 {
            for dn in -2i64..=2 {
                if (dm, dn) == (0, 0) || dm.abs() + dn.abs() > 2 {
                    continue;
                }
                let label = (a.label.0 + dm, a.label.1 + dn);
                // each unordered pair once
                if label <= a.label {
                    continue;
                }
                let Some(b) = p.circle(label) else {
                    continue;
                };
                let sum = a.radius + b.radius;
                if (a.center - b.center).norm() < sum * (1.0 - OVERLAP_SLACK)
                    && same_sheet(p, a.label, label)
                {
                    report.local_overlap_violations += 1;
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::f_value;
    use std::f64::consts::PI;

    fn third_turn() -> ComplexValue {
        Complex64::new(0.0, 2.0 * PI / 3.0)
    }

    #[test]
    fn first_neighbour_at_third_turn() {
        let spec = build_affine_packing(third_turn(), &Window::symmetric(2)).unwrap();
        let c0 = spec.circle((0, 0)).unwrap();
        let c1 = spec.circle((1, 0)).unwrap();
        assert!((c0.center - 1.0).norm() < 1e-15);
        assert!((c1.center - Complex64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-15);
        let half_root3 = 3f64.sqrt() / 2.0;
        assert!((c0.radius - half_root3).abs() < 1e-12 && (c1.radius - half_root3).abs() < 1e-12);
        assert!(((c0.center - c1.center).norm() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kappa_against_direct_tangency() {
        // Oracle: the base circle radius making C_0 tangent to the circle of
        // centre e^c and radius r |e^c|, solved from |e^c - 1| = r (1 + |e^c|).
        for &c in &[
            third_turn(),
            Complex64::new(0.4, 0.9),
            Complex64::new(-1.7, 2.5),
        ] {
            let s = f_value(c);
            let e = c.exp();
            let direct = (e - 1.0).norm() / (1.0 + e.norm());
            assert!((kappa(s) - direct).abs() < 1e-12);
        }
        assert!((kappa(0.5) - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(kappa(1e-12) < 2e-6);
        assert_eq!(kappa(0.0), 0.0);
    }

    #[test]
    fn six_neighbours_of_base_are_tangent() {
        for &c in &[
            third_turn(),
            Complex64::new(0.3, -0.2),
            Complex64::new(2.2, 1.4),
        ] {
            let spec = build_affine_packing(c, &Window::symmetric(1)).unwrap();
            let base = spec.circle((0, 0)).unwrap();
            for l in neighbors((0, 0)) {
                let other = spec.circle(l).unwrap();
                let gap = (base.center - other.center).norm() - (base.radius + other.radius);
                assert!(
                    gap.abs() < 1e-9 * (base.radius + other.radius),
                    "c = {c}, {l:?}: {gap}"
                );
            }
        }
    }

    #[test]
    fn euclidean_packing_geometry() {
        let spec = build_euclidean_packing(&Window::symmetric(3)).unwrap();
        let base = spec.circle((0, 0)).unwrap();
        let tangent = spec
            .circles
            .iter()
            .filter(|c| c.label != (0, 0))
            .filter(|c| ((c.center - base.center).norm() - 1.0).abs() < 1e-12)
            .count();
        assert_eq!(tangent, 6);
        let report = validate_packing(&spec);
        assert!(report.max_tangency_residual < 1e-12);
        assert!(report.max_orthogonality_residual < 1e-12);
        assert_eq!(report.local_overlap_violations, 0);
    }

    #[test]
    fn euclidean_dual_is_incircle() {
        // Oracle: inradius of the unit equilateral centre triangle and its incenter.
        let spec = build_euclidean_packing(&Window::symmetric(1)).unwrap();
        let want = 1.0 / (2.0 * 3f64.sqrt());
        for dual in &spec.duals {
            assert!((dual.radius - want).abs() < 1e-12);
            let CircleKind::Dual(kind) = dual.kind else {
                panic!()
            };
            let verts = kind
                .vertices(dual.label)
                .map(|l| spec.circle(l).unwrap().center);
            let incenter = (verts[0] + verts[1] + verts[2]) / 3.0;
            assert!((dual.center - incenter).norm() < 1e-12);
        }
        // two interstices per label away from the window edge
        let full = spec.duals.iter().filter(|d| d.label == (0, 0)).count();
        assert_eq!(full, 2);
    }

    #[test]
    fn affine_duals_are_orthogonal() {
        let spec = build_affine_packing(third_turn(), &Window::symmetric(3)).unwrap();
        let report = validate_packing(&spec);
        assert!(report.max_tangency_residual < 1e-9, "{report:?}");
        assert!(report.max_orthogonality_residual < 1e-9, "{report:?}");
        assert_eq!(report.local_overlap_violations, 0);
        assert!(report.within(1e-9));
    }

    #[test]
    fn circles_on_other_sheets_are_not_overlaps() {
        // two steps of a slightly-more-than-third turn graze in the plane but
        // lie on different sheets of the cover
        let c = Complex64::new(0.0, 2.0944);
        let spec = build_affine_packing(c, &Window::symmetric(3)).unwrap();
        let (a, b) = (spec.circle((0, 0)).unwrap(), spec.circle((2, 0)).unwrap());
        assert!((a.center - b.center).norm() < a.radius + b.radius);
        assert_eq!(validate_packing(&spec).local_overlap_violations, 0);
    }

    #[test]
    fn swollen_circles_overlap() {
        let spec = build_affine_packing(Complex64::new(0.5, 0.5), &Window::symmetric(2)).unwrap();
        assert_eq!(validate_packing(&spec).local_overlap_violations, 0);
        let report = validate_packing(&spec.with_radius_scale(1.05));
        assert!(report.local_overlap_violations > 0, "{report:?}");
    }

    #[test]
    fn perturbed_radius_is_detected() {
        let spec = build_affine_packing(third_turn(), &Window::symmetric(2)).unwrap();
        let bad = spec.with_radius_scale(1.01);
        let report = validate_packing(&bad);
        assert!(report.max_tangency_residual > 1e-3);
        assert!(!report.within(1e-9));
    }

    #[test]
    fn holonomy_equivariance() {
        let c = Complex64::new(0.35, 1.2);
        let spec = build_affine_packing(c, &Window::symmetric(2)).unwrap();
        let Holonomy::Similarity { alpha, beta } = spec.holonomy else {
            panic!()
        };
        assert!((alpha - c.exp()).norm() < 1e-15);
        for circle in &spec.circles {
            let (m, n) = circle.label;
            if let Some(next) = spec.circle((m + 1, n)) {
                assert!((next.center - alpha * circle.center).norm() <= 1e-12 * next.center.norm());
                assert!((next.radius - alpha.norm() * circle.radius).abs() <= 1e-12 * next.radius);
            }
            if let Some(next) = spec.circle((m, n + 1)) {
                assert!((next.center - beta * circle.center).norm() <= 1e-12 * next.center.norm());
            }
            assert!((circle.radius / circle.center.norm() - spec.kappa).abs() < 1e-12);
        }
    }

    #[test]
    fn fiber_partner_has_reciprocal_multipliers() {
        let c = Complex64::new(0.8, -0.6);
        let a = build_affine_packing(c, &Window::symmetric(1)).unwrap();
        let b = build_affine_packing(-c, &Window::symmetric(1)).unwrap();
        assert!((a.kappa - b.kappa).abs() < 1e-15);
        let (
            Holonomy::Similarity {
                alpha: a1,
                beta: b1,
            },
            Holonomy::Similarity {
                alpha: a2,
                beta: b2,
            },
        ) = (a.holonomy, b.holonomy)
        else {
            panic!()
        };
        assert!((a1 * a2 - 1.0).norm() < 1e-12);
        assert!((b1 * b2 - 1.0).norm() < 1e-9);
    }

    #[test]
    fn small_c_approaches_euclidean_tangency() {
        // Tangency |e^w - 1| = kappa (1 + |e^w|) rescaled by 1/|c| tends to the
        // unit centre distance with radius 1/2 of the hexagonal packing.
        let c = Complex64::new(1e-5, 0.0);
        let spec = build_affine_packing(c, &Window::symmetric(1)).unwrap();
        let scale = c.norm();
        assert!((spec.kappa / scale - 0.5).abs() < 1e-4);
        let base = spec.circle((0, 0)).unwrap();
        for l in neighbors((0, 0)) {
            let d = (spec.circle(l).unwrap().center - base.center).norm() / scale;
            assert!((d - 1.0).abs() < 1e-4, "{l:?}: {d}");
        }
    }

    #[test]
    fn window_guard_and_empty_window() {
        let big = Window {
            m: -400..=400,
            n: 0..=0,
        };
        assert!(matches!(
            build_affine_packing(Complex64::new(1.0, 0.0), &big),
            Err(Error::Window(_))
        ));
        #[allow(clippy::reversed_empty_ranges)]
        let empty = Window { m: 1..=0, n: 0..=0 };
        assert!(build_euclidean_packing(&empty).is_err());
        assert!(build_affine_packing(Complex64::new(0.0, 0.0), &Window::symmetric(1)).is_err());
    }

    #[test]
    fn adjacency_counts() {
        let spec = build_euclidean_packing(&Window::symmetric(2)).unwrap();
        // 5x5 window: 4*5 horizontal + 5*4 vertical + 4*4 diagonal
        assert_eq!(spec.adjacency.len(), 20 + 20 + 16);
        // 2 interstices per unit cell
        assert_eq!(spec.duals.len(), 2 * 16);
    }
}
