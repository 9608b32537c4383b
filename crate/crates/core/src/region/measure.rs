//! Gauss measure `dμ = dx dy / (log 2 · (1 + xy)²)` of regions.

use super::{BilinearConstraint, Region, Relation};
use crate::arith::{frac, SurdValue};
use serde::Serialize;
use std::cmp::Ordering;
use std::f64::consts::LN_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureMethod {
    ClosedForm,
    GaussKronrod,
    Quadtree,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub method: MeasureMethod,
}

/// `μ([x0,x1] × [y0,y1])`.
pub fn rect_measure(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    if x1 <= x0 || y1 <= y0 {
        return 0.0;
    }
    ((x1 * y1).ln_1p() + (x0 * y0).ln_1p() - (x1 * y0).ln_1p() - (x0 * y1).ln_1p()) / LN_2
}

/// Measure to absolute accuracy `tol`: closed form for rectangles, otherwise
/// adaptive Gauss–Kronrod over the `y`-sections between breakpoints.
pub fn measure(region: &Region, tol: f64) -> MeasureEstimate {
    if let Some([x0, x1, y0, y1]) = region.as_rectangle() {
        return MeasureEstimate {
            value: rect_measure(x0, x1, y0, y1),
            error_bound: 1e-15,
            method: MeasureMethod::ClosedForm,
        };
    }
    let constraints: Vec<[f64; 4]> = region.cells().iter().flatten().map(|g| g.approx()).collect();
    let mut breaks = vec![0.0, 1.0];
    for (i, a) in constraints.iter().enumerate() {
        let [c0, c1, c2, c3] = *a;
        push_linear_root(&mut breaks, c2, c3);
        push_linear_root(&mut breaks, c0, c1);
        push_linear_root(&mut breaks, c0 + c2, c1 + c3);
        for b in &constraints[..i] {
            let [d0, d1, d2, d3] = *b;
            // (c0 + c1 x)(d2 + d3 x) − (d0 + d1 x)(c2 + c3 x) = 0
            let q2 = c1 * d3 - d1 * c3;
            let q1 = c0 * d3 + c1 * d2 - d0 * c3 - d1 * c2;
            let q0 = c0 * d2 - d0 * c2;
            push_quadratic_roots(&mut breaks, q2, q1, q0);
        }
    }
    breaks.retain(|t| (0.0..=1.0).contains(t));
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let section = |x: f64| section_mass(region, x);
    let per = tol * LN_2 / (breaks.len().max(2) - 1) as f64;
    let (mut value, mut err) = (0.0, 0.0);
    for w in breaks.windows(2) {
        let (v, e) = adaptive_gk(&section, w[0], w[1], per, 0);
        value += v;
        err += e;
    }
    // the GK difference can round to zero on smooth pieces
    let error_bound = (err / LN_2).max(value.abs() * 4.0 * f64::EPSILON);
    MeasureEstimate { value: value / LN_2, error_bound, method: MeasureMethod::GaussKronrod }
}

fn push_linear_root(out: &mut Vec<f64>, a: f64, b: f64) {
    if b != 0.0 {
        out.push(-a / b);
    }
}

fn push_quadratic_roots(out: &mut Vec<f64>, a: f64, b: f64, c: f64) {
    if a.abs() < 1e-300 {
        push_linear_root(out, c, b);
        return;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return;
    }
    let s = disc.sqrt();
    let q = -0.5 * (b + b.signum() * s);
    out.push(q / a);
    if q != 0.0 {
        out.push(c / q);
    }
}

/// `∫ dy / (1 + xy)²` over the `y`-section of the region at `x`.
fn section_mass(region: &Region, x: f64) -> f64 {
    let mut pieces: Vec<(f64, f64)> = region.cells().iter().filter_map(|cell| cell_section(cell, x)).collect();
    pieces.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    let g = |y: f64| y / (1.0 + x * y);
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (lo, hi) in pieces {
        match cur {
            Some((a, b)) if lo <= b => cur = Some((a, b.max(hi))),
            Some((a, b)) => {
                total += g(b) - g(a);
                cur = Some((lo, hi));
            }
            None => cur = Some((lo, hi)),
        }
    }
    if let Some((a, b)) = cur {
        total += g(b) - g(a);
    }
    total
}

fn cell_section(cell: &[BilinearConstraint], x: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for g in cell {
        let [c0, c1, c2, c3] = g.approx();
        let a = c0 + c1 * x;
        let b = c2 + c3 * x;
        let wants_positive = matches!(g.relation(), Relation::Gt | Relation::Ge);
        if b == 0.0 {
            if (a > 0.0) != wants_positive && a != 0.0 {
                return None;
            }
            continue;
        }
        let t = -a / b;
        if (b > 0.0) == wants_positive {
            lo = lo.max(t);
        } else {
            hi = hi.min(t);
        }
    }
    (lo < hi).then_some((lo, hi))
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adaptive_gk(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
    let (v, e) = gk15(f, a, b);
    if e <= tol.max(1e-17) || depth >= 40 || b - a < 1e-14 {
        return (v, e);
    }
    let m = 0.5 * (a + b);
    let (v1, e1) = adaptive_gk(f, a, m, tol / 2.0, depth + 1);
    let (v2, e2) = adaptive_gk(f, m, b, tol / 2.0, depth + 1);
    (v1 + v2, e1 + e2)
}

/// Certified-sign quadtree bounds `(lower, upper)` on the measure: boxes are
/// classified by the exact signs of each constraint at their four corners.
pub fn measure_bounds(region: &Region, max_depth: u32) -> (f64, f64) {
    let mut lower = 0.0;
    let mut undecided = 0.0;
    let mut stack = vec![(0u64, 0u64, 0u32)];
    while let Some((i, j, d)) = stack.pop() {
        let n = 1u64 << d;
        let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
        let (x0, x1) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
        let (y0, y1) = (j as f64 / n as f64, (j + 1) as f64 / n as f64);
        let mass = rect_measure(x0, x1, y0, y1);
        match box_status(region, &corners, n) {
            Some(true) => lower += mass,
            Some(false) => {}
            None if d >= max_depth => undecided += mass,
            None => {
                for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    stack.push((2 * i + di, 2 * j + dj, d + 1));
                }
            }
        }
    }
    (lower, lower + undecided)
}

fn box_status(region: &Region, corners: &[(u64, u64); 4], n: u64) -> Option<bool> {
    let mut all_out = true;
    for cell in region.cells() {
        let mut inside = true;
        let mut outside = false;
        for g in cell {
            let mut holds = 0;
            for &(i, j) in corners {
                let x = SurdValue::from(frac(i, n));
                let y = frac(j, n);
                let ok = g.sign_at(&x, &y).map(|s| strict_holds(g.relation(), s)).unwrap_or(false);
                holds += ok as u32;
            }
            let mut violated = 0;
            for &(i, j) in corners {
                let x = SurdValue::from(frac(i, n));
                let s = g.sign_at(&x, &frac(j, n)).ok();
                violated += s.is_some_and(|s| strict_holds(g.relation().negate(), s)) as u32;
            }
            if holds < 4 {
                inside = false;
            }
            if violated == 4 {
                outside = true;
            }
        }
        if inside {
            return Some(true);
        }
        if !outside {
            all_out = false;
        }
    }
    all_out.then_some(false)
}

/// The relation holds with the boundary excluded, so it holds on the whole box.
fn strict_holds(rel: Relation, s: Ordering) -> bool {
    match rel {
        Relation::Gt | Relation::Ge => s == Ordering::Greater,
        Relation::Lt | Relation::Le => s == Ordering::Less,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_surd;

    #[test]
    fn unit_square_is_probability() {
        assert!((rect_measure(0.0, 1.0, 0.0, 1.0) - 1.0).abs() < 1e-15);
        let m = measure(&Region::omega(), 1e-12);
        assert!((m.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn jump_two_closed_form() {
        let m = measure(&Region::jump(2).unwrap(), 1e-12);
        assert_eq!(m.method, MeasureMethod::ClosedForm);
        assert!((m.value - 0.5849625007211562).abs() < 1e-14);
    }

    #[test]
    fn legendre_quadrature() {
        for (eps, want) in [("1/2", 0.7213475204444817), ("2/5", 0.5770780163555854), ("1/4", 0.36067376022224085)] {
            let m = measure(&Region::legendre(&parse_surd(eps).unwrap()).unwrap(), 1e-12);
            assert_eq!(m.method, MeasureMethod::GaussKronrod);
            assert!((m.value - want).abs() < 1e-10, "{eps}: {}", m.value);
        }
    }

    #[test]
    fn complement_and_union_add_up() {
        let h = Region::hurwitz();
        let j = Region::jump(3).unwrap();
        let mh = measure(&h, 1e-12).value;
        let mc = measure(&h.complement(), 1e-12).value;
        assert!((mh + mc - 1.0).abs() < 1e-10);
        let mu = measure(&h.union(&j), 1e-12).value;
        let mi = measure(&h.intersect(&j), 1e-12).value;
        let mj = measure(&j, 1e-12).value;
        assert!((mu + mi - mh - mj).abs() < 1e-10);
    }

    #[test]
    fn quadtree_brackets_quadrature() {
        let h = Region::hurwitz();
        let (lo, hi) = measure_bounds(&h, 7);
        let v = measure(&h, 1e-12).value;
        assert!(lo <= v && v <= hi, "{lo} {v} {hi}");
        assert!(hi - lo < 0.1);
    }
}
