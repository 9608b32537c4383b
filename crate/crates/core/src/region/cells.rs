//! Explicit cell decompositions of the Hurwitz and jump regions.

use super::{BilinearConstraint, Region, Relation};
use crate::arith::{inv_sqrt5, parse::parse_surd, BigFraction, IntMatrix2, RatInterval, SurdValue};
use crate::cf::{mobius_surd, TailSource, TailValue};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

/// Cell of the Hurwitz region visited by the orbit, named by the RCF word
/// consumed on the way back: `Δ1 ↔ (a)`, `Δ21 ↔ (1, a)`, `Δ22 ↔ (2, a)`, `Δ3 ↔ (1, 1, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HurwitzCell {
    D1,
    D21,
    D22,
    D3,
}

impl HurwitzCell {
    pub fn m_delta(self, a: &BigInt) -> IntMatrix2 {
        match self {
            HurwitzCell::D1 => IntMatrix2::digit(a.clone()),
            HurwitzCell::D21 => IntMatrix2::new(1, a.clone(), 1, a + 1),
            HurwitzCell::D22 => IntMatrix2::new(1, a.clone(), 2, 2 * a + 1),
            HurwitzCell::D3 => IntMatrix2::new(1, a + 1, 2, 2 * a + 1),
        }
    }

    pub fn word(self, a: &BigInt) -> Vec<BigInt> {
        let one = BigInt::one();
        match self {
            HurwitzCell::D1 => vec![a.clone()],
            HurwitzCell::D21 => vec![one, a.clone()],
            HurwitzCell::D22 => vec![BigInt::from(2), a.clone()],
            HurwitzCell::D3 => vec![one.clone(), one, a.clone()],
        }
    }

    /// Cell whose word matches an induced step's consumed digits.
    pub fn from_word(word: &[BigInt]) -> Option<(Self, BigInt)> {
        let one = BigInt::one();
        let two = BigInt::from(2);
        match word {
            [a] => Some((HurwitzCell::D1, a.clone())),
            [w, a] if *w == one => Some((HurwitzCell::D21, a.clone())),
            [w, a] if *w == two => Some((HurwitzCell::D22, a.clone())),
            [u, v, a] if *u == one && *v == one => Some((HurwitzCell::D3, a.clone())),
            _ => None,
        }
    }

    /// Möbius map `x ↦ t` with `a = ⌊t⌋` on this cell.
    fn digit_map(self) -> IntMatrix2 {
        match self {
            HurwitzCell::D1 => IntMatrix2::new(0, 1, 1, 0),
            HurwitzCell::D21 => IntMatrix2::new(1, 0, -1, 1),
            HurwitzCell::D22 => IntMatrix2::new(1, 0, -2, 1),
            HurwitzCell::D3 => IntMatrix2::new(-1, 1, 2, -1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HurwitzCell::D1 => "Δ1",
            HurwitzCell::D21 => "Δ21",
            HurwitzCell::D22 => "Δ22",
            HurwitzCell::D3 => "Δ3",
        }
    }
}

impl fmt::Display for HurwitzCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn c(s: &str) -> SurdValue {
    parse_surd(s).expect("static coefficient")
}

/// The cut-outs `Δ1`, `Δ21`, `Δ22` in priority order; `Δ3` is what remains of the region.
pub fn hurwitz_cell_regions() -> [(HurwitzCell, Region); 3] {
    let g = |v: [&str; 4], rel| BilinearConstraint::new(v.map(c), rel).expect("same radicand");
    [
        (HurwitzCell::D1, Region::new("Δ1", vec![vec![g(["1", "-sqrt(5)", "0", "1"], Relation::Gt)]])),
        (
            HurwitzCell::D21,
            Region::new("Δ21", vec![vec![g(["1-sqrt(5)", "sqrt(5)", "-sqrt(5)", "sqrt(5)+1"], Relation::Gt)]]),
        ),
        (
            HurwitzCell::D22,
            Region::new(
                "Δ22",
                vec![vec![g(["-1", "sqrt(5)", "0", "-1"], Relation::Ge), g(["1/2", "-1", "0", "0"], Relation::Ge)]],
            ),
        ),
    ]
}

/// Cell and digit of the point `(x_n, y)` of the Hurwitz region.
pub fn hurwitz_cell(src: &mut TailSource, y: &BigFraction) -> Result<(HurwitzCell, BigInt)> {
    if !Region::hurwitz().contains(src, y)? {
        return Err(Error::NotInRegion);
    }
    let mut cell = HurwitzCell::D3;
    for (name, region) in hurwitz_cell_regions() {
        if region.contains(src, y)? {
            cell = name;
            break;
        }
    }
    let map = cell.digit_map();
    for _ in 0..64 {
        match src.tail() {
            TailValue::Exact(x) => return Ok((cell, mobius_surd(&map, &x)?.floor())),
            TailValue::Enclosure(i) => {
                if let Ok(img) = map.apply_interval(&i) {
                    let lo = img.lo().floor().to_integer();
                    let hi = img.hi().numer().div_ceil(img.hi().denom()) - 1;
                    if lo == hi {
                        return Ok((cell, lo));
                    }
                }
                src.refine().map_err(|_| Error::UndecidableAtBudget)?;
            }
        }
    }
    Err(Error::UndecidableAtBudget)
}

/// Smallest `a` for which `Δ22` holds points with digits `(2, a)`.
///
/// Such points have `x ∈ [a/(2a+1), (a+1)/(2a+3))`, and the cell needs
/// `x > 1/√5` (from `√5·x ≥ 1 + xy`), so `a` must satisfy `(a+1)/(2a+3) > 1/√5`.
pub fn delta22_min_digit() -> BigInt {
    let eps = inv_sqrt5();
    let mut a = BigInt::one();
    loop {
        let top = BigFraction::new(&a + 1, 2 * &a + 3);
        if eps.cmp_fraction(&top) == Ordering::Less {
            return a;
        }
        a += 1;
    }
}

fn fib(n: usize) -> (BigInt, BigInt) {
    // (F_{n-1}, F_n) with F_{-1} = 1, F_0 = 0
    let (mut a, mut b) = (BigInt::one(), BigInt::zero());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    (a, b)
}

/// `M_Δ` for the jump(2) cell `Δ_n(a)`: `n` ones followed by `a ≥ 2`.
pub fn fibonacci_m_delta(n: usize, a: &BigInt) -> IntMatrix2 {
    let (f_prev, f_n) = fib(n);
    let f_next = &f_prev + &f_n;
    IntMatrix2::new(f_n.clone(), a * &f_n + &f_prev, f_next.clone(), a * &f_next + &f_n)
}

/// The `x`-range `M_Δ·[0, 1]` of the jump(2) cell `Δ_n(a)`.
pub fn jump_cell_bounds(n: usize, a: &BigInt) -> RatInterval {
    let m = fibonacci_m_delta(n, a);
    let at0 = BigFraction::new(m.p.clone(), m.q.clone());
    let at1 = BigFraction::new(&m.r + &m.p, &m.s + &m.q);
    RatInterval::spanning(at0, at1).expect("unimodular image of [0,1]")
}
