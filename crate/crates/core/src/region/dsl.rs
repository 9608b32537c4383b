//! Text form of regions.
//!
//! ```text
//! omega | empty | hurwitz | jump(B) | legendre(SURD)
//! cells[(c0, c1, c2, c3, REL); (…) | (…)]     ';' joins constraints, '|' joins cells
//! union(R, R) | inter(R, R) | not(R)
//! ```

use super::{BilinearConstraint, Region, Relation};
use crate::arith::parse::parse_surd;
use crate::{Error, Result};

pub fn parse_region(src: &str) -> Result<Region> {
    let s = src.trim();
    let bad = |what: &str| Error::parse(format!("{what} in region {src:?}"));
    match s {
        "omega" => return Ok(Region::omega()),
        "empty" => return Ok(Region::empty()),
        "hurwitz" => return Ok(Region::hurwitz()),
        _ => {}
    }
    if let Some(body) = s.strip_prefix("cells[") {
        let body = body.strip_suffix(']').ok_or_else(|| bad("missing ']'"))?;
        let mut cells = Vec::new();
        for cell in split_top(body, '|') {
            let mut cons = Vec::new();
            for g in split_top(cell, ';') {
                if !g.trim().is_empty() {
                    cons.push(parse_constraint(g)?);
                }
            }
            cells.push(cons);
        }
        return Ok(Region::new(s, cells));
    }
    let (head, args) = call(s).ok_or_else(|| bad("unknown region"))?;
    let args = split_top(args, ',');
    match (head, args.as_slice()) {
        ("jump", [b]) => Region::jump(b.trim().parse().map_err(|_| bad("jump needs an integer"))?),
        ("legendre", [e]) => Region::legendre(&parse_surd(e)?),
        ("union", [a, b]) => Ok(parse_region(a)?.union(&parse_region(b)?)),
        ("inter", [a, b]) => Ok(parse_region(a)?.intersect(&parse_region(b)?)),
        ("not", [a]) => Ok(parse_region(a)?.complement()),
        _ => Err(bad("unknown region or wrong arity")),
    }
}

/// `head(args)` with balanced parentheses.
fn call(s: &str) -> Option<(&str, &str)> {
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    Some((s[..open].trim(), inner))
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_constraint(g: &str) -> Result<BilinearConstraint> {
    let t = g.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::parse(format!("constraint must be parenthesised: {t:?}")))?;
    let parts = split_top(inner, ',');
    let [c0, c1, c2, c3, rel] = parts.as_slice() else {
        return Err(Error::parse(format!("constraint needs 4 coefficients and a relation: {t:?}")));
    };
    let rel = Relation::from_symbol(rel.trim()).ok_or_else(|| Error::parse(format!("bad relation {rel:?}")))?;
    BilinearConstraint::new([parse_surd(c0)?, parse_surd(c1)?, parse_surd(c2)?, parse_surd(c3)?], rel)
}
