//! Orbits of the natural extension `𝒢(x, y) = (1/x − a, 1/(a + y))`, hitting
//! times of a region and the induced map `𝒢_Δ`.

mod oracle;
mod socf;

pub use oracle::{q_block, socf_digits_oracle};
pub use socf::{
    format_gcf, gcf_convergents, socf_digits, GcfConvergent, GcfDigit, SocfDigits, SocfExpander, SocfRecord,
};

use crate::arith::{BigFraction, IntMatrix2};
use crate::cf::TailSource;
use crate::region::{HurwitzCell, NePoint, Region, RegionKind};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Default bound on Gauss steps spent searching for the next visit.
pub const DEFAULT_CAP: usize = 10_000;

/// `SOCF_CAP` from the environment, else [`DEFAULT_CAP`].
pub fn default_cap() -> usize {
    std::env::var("SOCF_CAP").ok().and_then(|v| v.parse().ok()).filter(|&c| c > 0).unwrap_or(DEFAULT_CAP)
}

/// A natural-extension orbit `z_n = 𝒢ⁿ(x, y0)`.
///
/// `y_n = M_[1,n]ᵀ · y0`; it is kept as a coprime pair and updated by
/// `y ↦ 1/(a + y)` without gcds.
#[derive(Clone, Debug)]
pub struct Orbit {
    src: TailSource,
    y_num: BigInt,
    y_den: BigInt,
}

impl Orbit {
    /// Orbit of `(x, 0)`.
    pub fn new(src: TailSource) -> Self {
        Self { src, y_num: BigInt::zero(), y_den: BigInt::one() }
    }

    /// Orbit of `(x, y0)` for `y0 ∈ [0, 1]`.
    pub fn with_y(src: TailSource, y0: &BigFraction) -> Result<Self> {
        if y0 < &BigFraction::zero() || y0 > &BigFraction::one() {
            return Err(Error::OutOfDomain);
        }
        Ok(Self { src, y_num: y0.numer().clone(), y_den: y0.denom().clone() })
    }

    pub fn source(&self) -> &TailSource {
        &self.src
    }

    pub fn source_mut(&mut self) -> &mut TailSource {
        &mut self.src
    }

    pub fn depth(&self) -> usize {
        self.src.depth()
    }

    pub fn y(&self) -> BigFraction {
        BigFraction::new_raw(self.y_num.clone(), self.y_den.clone())
    }

    pub fn point(&self) -> NePoint {
        NePoint { depth: self.depth(), x: self.src.tail(), y: self.y() }
    }

    /// One step of `𝒢`; returns the digit consumed.
    pub fn ne_step(&mut self) -> Result<BigInt> {
        let a = self.src.next_digit()?;
        let den = &a * &self.y_den + &self.y_num;
        self.y_num = std::mem::replace(&mut self.y_den, den);
        Ok(a)
    }

    pub fn in_region(&mut self, region: &Region) -> Result<bool> {
        let y = self.y();
        region.contains(&mut self.src, &y)
    }

    /// `j(z)`: the first `n ≥ 1` with `𝒢ⁿ(z) ∈ region`, searching at most `cap` steps.
    /// The orbit itself is not advanced.
    pub fn hitting_time(&self, region: &Region, cap: usize) -> Result<usize> {
        let mut probe = self.clone();
        probe.induced_step(region, cap).map(|s| s.j)
    }

    /// Advances to `𝒢_Δ(z)` and reports the matrix `M_Δ(z)` of the excursion.
    pub fn induced_step(&mut self, region: &Region, cap: usize) -> Result<InducedStep> {
        let mut m = IntMatrix2::identity();
        let mut digits = Vec::new();
        for _ in 0..cap.max(1) {
            let a = self.ne_step()?;
            m.push_digit(&a);
            digits.push(a);
            if self.in_region(region)? {
                return Ok(InducedStep { j: digits.len(), m_delta: m, digits, depth: self.depth(), z_next: self.point() });
            }
        }
        Err(Error::NeverHitsWithinCap(cap))
    }
}

/// One application of the induced map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedStep {
    /// Hitting time `j(z)`.
    pub j: usize,
    /// `M_Δ(z) = M_[1,j](x)`, the product of the `j` digit matrices consumed.
    pub m_delta: IntMatrix2,
    /// The consumed RCF digits.
    pub digits: Vec<BigInt>,
    /// RCF depth of `z_next`.
    pub depth: usize,
    pub z_next: NePoint,
}

impl InducedStep {
    /// Name of the visited cell: `Δn(a)` for jump regions (`n` leading
    /// digits below the threshold), `Δ1/Δ21/Δ22/Δ3(a)` for the Hurwitz region.
    pub fn cell_label(&self, kind: RegionKind) -> String {
        let a = self.digits.last().expect("j ≥ 1");
        match kind {
            RegionKind::Hurwitz => match HurwitzCell::from_word(&self.digits) {
                Some((cell, a)) => format!("{cell}({a})"),
                None => format!("Δ?({a})"),
            },
            _ => format!("Δ{}({a})", self.j - 1),
        }
    }
}

/// `j(z)` for a standalone orbit.
pub fn hitting_time(region: &Region, z: &Orbit, cap: usize) -> Result<usize> {
    z.hitting_time(region, cap)
}

/// `𝒢_Δ(z)`, advancing the orbit.
pub fn induced_step(region: &Region, z: &mut Orbit, cap: usize) -> Result<InducedStep> {
    z.induced_step(region, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, parse::parse_surd};
    use crate::constants::PI_MINUS_3;
    use crate::region::fibonacci_m_delta;

    fn surd_orbit(s: &str) -> Orbit {
        Orbit::new(TailSource::from_surd(parse_surd(s).unwrap()).unwrap())
    }

    #[test]
    fn ne_step_examples() {
        let mut z = surd_orbit("sqrt(2)-1");
        assert_eq!(z.ne_step().unwrap(), BigInt::from(2));
        assert_eq!(z.y(), frac(1, 2));
        let mut z = surd_orbit("(sqrt(5)-1)/2");
        z.ne_step().unwrap();
        assert_eq!(z.y(), frac(1, 1));
        let mut z = Orbit::new(TailSource::from_decimal(PI_MINUS_3).unwrap());
        z.ne_step().unwrap();
        assert_eq!(z.y(), frac(1, 7));
    }

    #[test]
    fn hitting_time_examples() {
        let jump = Region::jump(2).unwrap();
        assert_eq!(surd_orbit("sqrt(2)-1").hitting_time(&jump, 10).unwrap(), 1);
        // the tail of 1/φ is all 1s: y_2 = 1/2 sits on the closed edge of the
        // region, after which y_n = F_{n-1}/F_n > 1/2 forever
        let mut z = surd_orbit("(sqrt(5)-1)/2");
        assert_eq!(z.hitting_time(&jump, 10_000).unwrap(), 2);
        z.induced_step(&jump, 10_000).unwrap();
        assert_eq!(z.hitting_time(&jump, 10_000), Err(Error::NeverHitsWithinCap(10_000)));
    }

    #[test]
    fn induced_step_examples() {
        let jump = Region::jump(2).unwrap();
        let mut z = Orbit::new(TailSource::from_decimal(PI_MINUS_3).unwrap());
        let s = z.induced_step(&jump, 100).unwrap();
        assert_eq!(s.m_delta, IntMatrix2::new(0, 1, 1, 7));
        assert_eq!(s.m_delta, fibonacci_m_delta(0, &BigInt::from(7)));
        assert_eq!(s.cell_label(jump.kind()), "Δ0(7)");
        let mut z = surd_orbit("sqrt(2)-1");
        let s = z.induced_step(&jump, 100).unwrap();
        assert_eq!((s.j, s.m_delta), (1, IntMatrix2::digit(2)));
    }

    #[test]
    fn hurwitz_delta3_matrix() {
        // digits 1, 1, 5, …: from (x, 0), y_1 = 1 misses, y_2 = 1/2 misses since
        // x_2 < √5 − 2, and y_3 = 2/11 hits
        let h = Region::hurwitz();
        let mut z = Orbit::new(TailSource::from_digits([1u32, 1, 5, 2, 2, 2, 2, 2, 2, 2]).unwrap());
        let s = z.induced_step(&h, 10).unwrap();
        assert_eq!(s.j, 3);
        assert_eq!(s.m_delta, IntMatrix2::new(1, 6, 2, 11));
        assert_eq!(s.cell_label(h.kind()), "Δ3(5)");
    }
}
