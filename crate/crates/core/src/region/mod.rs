//! Subsets of `Ω = [0,1)×[0,1]` cut out by finitely many bilinear
//! inequalities `c0 + c1·x + c2·y + c3·x·y ⋈ 0`.
//!
//! A region is a disjunction of cells; a cell is a conjunction of
//! constraints. Membership is decided exactly when `x` is a surd over a
//! compatible radicand, and by interval reasoning otherwise.

mod cells;
mod dsl;
mod measure;

pub use cells::{
    delta22_min_digit, fibonacci_m_delta, hurwitz_cell, hurwitz_cell_regions, jump_cell_bounds, HurwitzCell,
};
pub use dsl::parse_region;
pub use measure::{measure, measure_bounds, MeasureEstimate, MeasureMethod};

use crate::arith::{frac, frac_to_f64, quad_sign, ratio_to_f64, BigFraction, RatInterval, SurdValue};
use crate::cf::{TailSource, TailValue};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A point `(x_n, y_n)` of the natural extension after `depth` Gauss steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NePoint {
    pub depth: usize,
    pub x: TailValue,
    pub y: BigFraction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    fn holds(self, sign: Ordering) -> bool {
        match self {
            Relation::Lt => sign == Ordering::Less,
            Relation::Le => sign != Ordering::Greater,
            Relation::Gt => sign == Ordering::Greater,
            Relation::Ge => sign != Ordering::Less,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Gt => Relation::Le,
            Relation::Ge => Relation::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }

    pub(crate) fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "<" => Relation::Lt,
            "<=" => Relation::Le,
            ">" => Relation::Gt,
            ">=" => Relation::Ge,
            _ => return None,
        })
    }
}

/// `c0 + c1·x + c2·y + c3·x·y ⋈ 0` with surd coefficients over one radicand.
#[derive(Clone, Debug)]
pub struct BilinearConstraint {
    coeffs: [SurdValue; 4],
    rel: Relation,
    // coefficients scaled by a common denominator: c_i·L = A_i + B_i·√D
    radicand: u64,
    int_a: [BigInt; 4],
    int_b: [BigInt; 4],
    approx: [f64; 4],
}

impl PartialEq for BilinearConstraint {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.rel == other.rel
    }
}

impl BilinearConstraint {
    pub fn new(coeffs: [SurdValue; 4], rel: Relation) -> Result<Self> {
        let mut radicand = 0;
        for c in &coeffs {
            let d = c.radicand();
            if d != 0 {
                if radicand != 0 && radicand != d {
                    return Err(Error::MixedRadicands(radicand, d));
                }
                radicand = d;
            }
        }
        let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.parts().2));
        let mut int_a: [BigInt; 4] = Default::default();
        let mut int_b: [BigInt; 4] = Default::default();
        for (i, c) in coeffs.iter().enumerate() {
            let (a, b, den, _) = c.parts();
            let k = &lcm / den;
            int_a[i] = a * &k;
            int_b[i] = b * &k;
        }
        let approx = [coeffs[0].to_f64(), coeffs[1].to_f64(), coeffs[2].to_f64(), coeffs[3].to_f64()];
        Ok(Self { coeffs, rel, radicand, int_a, int_b, approx })
    }

    /// Constraint with rational coefficients.
    pub fn rational(c: [BigFraction; 4], rel: Relation) -> Self {
        let [a, b, c2, d] = c;
        Self::new(
            [SurdValue::from(a), SurdValue::from(b), SurdValue::from(c2), SurdValue::from(d)],
            rel,
        )
        .expect("rational coefficients never mix radicands")
    }

    pub fn coeffs(&self) -> &[SurdValue; 4] {
        &self.coeffs
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    pub fn negate(&self) -> Self {
        Self { rel: self.rel.negate(), ..self.clone() }
    }

    pub(crate) fn approx(&self) -> [f64; 4] {
        self.approx
    }

    fn depends_on_x(&self) -> bool {
        !(self.coeffs[1].is_zero() && self.coeffs[3].is_zero())
    }

    fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let [c0, c1, c2, c3] = self.approx;
        c0 + c1 * x + c2 * y + c3 * x * y
    }

    fn f64_margin(&self) -> f64 {
        1e-9 * (1.0 + self.approx.iter().map(|c| c.abs()).sum::<f64>())
    }

    /// Exact sign of the bilinear form at `(x, y)`.
    pub fn sign_at(&self, x: &SurdValue, y: &BigFraction) -> Result<Ordering> {
        let (xa, xb, xc, e) = x.parts();
        if let Some(s) = self.float_sign(x.to_f64(), y) {
            return Ok(s);
        }
        self.sign_exact(xa, xb, xc, e, y)
    }

    /// Sign at a rational `x = num/den` (`den > 0`), without reducing the fraction.
    pub fn sign_at_ratio(&self, num: &BigInt, den: &BigInt, y: &BigFraction) -> Ordering {
        if let Some(s) = self.float_sign(ratio_to_f64(num, den), y) {
            return s;
        }
        self.sign_exact(num, &BigInt::zero(), den, 0, y).expect("rational x never mixes radicands")
    }

    fn float_sign(&self, fx: f64, y: &BigFraction) -> Option<Ordering> {
        let fy = frac_to_f64(y);
        if !(fx.is_finite() && fy.is_finite()) {
            return None;
        }
        let v = self.eval_f64(fx, fy);
        if v.abs() > self.f64_margin() {
            Some(if v > 0.0 { Ordering::Greater } else { Ordering::Less })
        } else {
            None
        }
    }

    fn sign_exact(&self, xa: &BigInt, xb: &BigInt, xc: &BigInt, e: u64, y: &BigFraction) -> Result<Ordering> {
        let r = if self.radicand != 0 { self.radicand } else { e };
        if !xb.is_zero() && e != r {
            return Err(Error::MixedRadicands(self.radicand, e));
        }
        let (yu, yv) = (y.numer(), y.denom());
        let zero = BigInt::zero();
        // w_i = monomial_i · xc · yv split into rational and √r parts
        let w: [(BigInt, BigInt); 4] = [
            (xc * yv, zero.clone()),
            (xa * yv, xb * yv),
            (xc * yu, zero.clone()),
            (xa * yu, xb * yu),
        ];
        let mut alpha = BigInt::zero();
        let mut beta = BigInt::zero();
        let rr = BigInt::from(r);
        for (i, (re, im)) in w.iter().enumerate() {
            let (a, b) = (&self.int_a[i], &self.int_b[i]);
            alpha += a * re + b * im * &rr;
            beta += a * im + b * re;
        }
        Ok(quad_sign(&alpha, &beta, r))
    }

    pub fn holds_at(&self, x: &SurdValue, y: &BigFraction) -> Result<bool> {
        Ok(self.rel.holds(self.sign_at(x, y)?))
    }

    /// Truth value for all `x` in an interval, or `None` if it varies or
    /// cannot be certified. The form is affine in `x`, so endpoint signs decide.
    fn holds_on(&self, x: &RatInterval, y: &BigFraction) -> Option<bool> {
        let sl = self.sign_at_ratio(x.lo().numer(), x.lo().denom(), y);
        let sh = self.sign_at_ratio(x.hi().numer(), x.hi().denom(), y);
        let sign = match (sl, sh) {
            (a, b) if a == b => a,
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            _ => return None,
        };
        // an endpoint zero with the other side nonzero: the open interior has that sign
        Some(self.rel.holds(sign))
    }

    fn truth(&self, x: &TailValue, y: &BigFraction) -> Option<bool> {
        if !self.depends_on_x() {
            return self.holds_at(&SurdValue::from_int(0), y).ok();
        }
        match x {
            TailValue::Exact(s) => match self.holds_at(s, y) {
                Ok(v) => Some(v),
                Err(_) => {
                    // incompatible radicands: x never lies on the boundary, so
                    // a fine enough enclosure decides
                    (6..13).find_map(|k| {
                        let (lo, hi) = s.enclosure_bits(1 << k);
                        self.holds_on(&RatInterval::new(lo, hi).ok()?, y)
                    })
                }
            },
            TailValue::Enclosure(i) => self.holds_on(i, y),
        }
    }
}

impl fmt::Display for BilinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.coeffs;
        write!(f, "({a}, {b}, {c}, {d}, {})", self.rel.symbol())
    }
}

/// Which builtin family a region came from; drives cell naming.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    Jump(u64),
    Legendre,
    Hurwitz,
    Custom,
}

/// Union of cells, each an intersection of bilinear constraints, inside `Ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    label: String,
    kind: RegionKind,
    cells: Vec<Vec<BilinearConstraint>>,
}

impl Region {
    pub fn new(label: impl Into<String>, cells: Vec<Vec<BilinearConstraint>>) -> Self {
        Self { label: label.into(), kind: RegionKind::Custom, cells }
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn cells(&self) -> &[Vec<BilinearConstraint>] {
        &self.cells
    }

    pub fn omega() -> Self {
        Self::new("omega", vec![vec![]])
    }

    pub fn empty() -> Self {
        Self::new("empty", vec![])
    }

    /// `[0,1) × [0, 1/b]`, whose induced map keeps digits `≥ b`.
    pub fn jump(b: u64) -> Result<Self> {
        if b < 2 {
            return Err(Error::BadParameter(format!("jump parameter must be >= 2, got {b}")));
        }
        let c = BilinearConstraint::rational([frac(1, b), frac(0, 1), frac(-1, 1), frac(0, 1)], Relation::Ge);
        Ok(Self { kind: RegionKind::Jump(b), ..Self::new(format!("jump({b})"), vec![vec![c]]) })
    }

    /// `{ ε0 + ε0·x·y − y > 0 }`, `0 < ε0 ≤ 1/2`.
    pub fn legendre(eps: &SurdValue) -> Result<Self> {
        if eps.signum() != Ordering::Greater || eps.cmp_fraction(&frac(1, 2)) == Ordering::Greater {
            return Err(Error::BadParameter(format!("legendre parameter must lie in (0, 1/2], got {eps}")));
        }
        let zero = SurdValue::from_int(0);
        let c = BilinearConstraint::new([eps.clone(), zero, SurdValue::from_int(-1), eps.clone()], Relation::Gt)?;
        Ok(Self { kind: RegionKind::Legendre, ..Self::new(format!("legendre({eps})"), vec![vec![c]]) })
    }

    pub fn hurwitz() -> Self {
        let r = Self::legendre(&crate::arith::inv_sqrt5()).expect("1/sqrt(5) is admissible");
        Self { kind: RegionKind::Hurwitz, ..r.with_label("hurwitz") }
    }

    pub fn union(&self, other: &Region) -> Region {
        // A ∪ (B \ A) keeps cells pairwise disjoint
        let mut cells = self.cells.clone();
        cells.extend(other.intersect(&self.complement()).cells);
        Region::new(format!("({} | {})", self.label, other.label), cells)
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                cells.push(c);
            }
        }
        Region::new(format!("({} & {})", self.label, other.label), cells)
    }

    pub fn complement(&self) -> Region {
        let mut acc = Region::omega();
        for cell in &self.cells {
            // ¬(g1 ∧ … ∧ gk) = ¬g1 ∨ (g1 ∧ ¬g2) ∨ … as disjoint pieces
            let mut pieces = Vec::new();
            for (i, g) in cell.iter().enumerate() {
                let mut piece: Vec<_> = cell[..i].to_vec();
                piece.push(g.negate());
                pieces.push(piece);
            }
            acc = acc.intersect(&Region::new("", pieces));
        }
        acc.label = format!("!{}", self.label);
        acc.kind = RegionKind::Custom;
        acc
    }

    fn truth(&self, x: &TailValue, y: &BigFraction) -> Option<bool> {
        let mut undecided = false;
        for cell in &self.cells {
            let mut cell_val = Some(true);
            for g in cell {
                match g.truth(x, y) {
                    Some(true) => {}
                    Some(false) => {
                        cell_val = Some(false);
                        break;
                    }
                    None => cell_val = None,
                }
            }
            match cell_val {
                Some(true) => return Some(true),
                Some(false) => {}
                None => undecided = true,
            }
        }
        if undecided {
            None
        } else {
            Some(false)
        }
    }

    /// Membership of a snapshot; `UndecidableAtBudget` if the enclosure is too wide.
    pub fn contains_point(&self, z: &NePoint) -> Result<bool> {
        self.truth(&z.x, &z.y).ok_or(Error::UndecidableAtBudget)
    }

    /// Membership of `(x_n, y)` for the current tail of `src`, refining as needed.
    pub fn contains(&self, src: &mut TailSource, y: &BigFraction) -> Result<bool> {
        for _ in 0..64 {
            if let Some(v) = self.truth(&src.tail(), y) {
                return Ok(v);
            }
            src.refine().map_err(|e| match e {
                Error::PrecisionExhausted => Error::UndecidableAtBudget,
                e => e,
            })?;
        }
        Err(Error::UndecidableAtBudget)
    }

    /// Membership of an exact point, e.g. for tests and cell examples.
    pub fn contains_exact(&self, x: &SurdValue, y: &BigFraction) -> Result<bool> {
        self.truth(&TailValue::Exact(x.clone()), y).ok_or(Error::UndecidableAtBudget)
    }

    /// Float membership for sampling; not certified near the boundary.
    pub fn contains_f64(&self, x: f64, y: f64) -> bool {
        self.cells.iter().any(|cell| {
            cell.iter().all(|g| {
                let v = g.eval_f64(x, y);
                let s = if v > 0.0 {
                    Ordering::Greater
                } else if v < 0.0 {
                    Ordering::Less
                } else {
                    Ordering::Equal
                };
                g.rel.holds(s)
            })
        })
    }

    /// Rectangle `[x0,x1]×[y0,y1]` if the region is a single axis-aligned cell.
    pub(crate) fn as_rectangle(&self) -> Option<[f64; 4]> {
        let [cell] = self.cells.as_slice() else { return None };
        let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 1.0f64, 0.0f64, 1.0f64);
        for g in cell {
            let [c0, c1, c2, c3] = g.approx;
            if c3 != 0.0 || (c1 != 0.0 && c2 != 0.0) {
                return None;
            }
            let upper = |c: f64| match g.rel {
                Relation::Lt | Relation::Le => c > 0.0,
                Relation::Gt | Relation::Ge => c < 0.0,
            };
            if c1 != 0.0 {
                let t = -c0 / c1;
                if upper(c1) { x1 = x1.min(t) } else { x0 = x0.max(t) }
            } else if c2 != 0.0 {
                let t = -c0 / c2;
                if upper(c2) { y1 = y1.min(t) } else { y0 = y0.max(t) }
            } else if !g.rel.holds(if c0 > 0.0 { Ordering::Greater } else if c0 < 0.0 { Ordering::Less } else { Ordering::Equal }) {
                return Some([0.0, 0.0, 0.0, 0.0]);
            }
        }
        Some([x0.clamp(0.0, 1.0), x1.clamp(0.0, 1.0), y0.clamp(0.0, 1.0), y1.clamp(0.0, 1.0)])
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl std::str::FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_region(s)
    }
}
