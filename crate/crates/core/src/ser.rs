//! Serde helpers: big integers and fractions are written as decimal strings.

use crate::arith::BigFraction;
use num_bigint::BigInt;
use serde::Serializer;

pub(crate) fn bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn fraction<S: Serializer>(v: &BigFraction, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", v.numer(), v.denom()))
}
