//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use socf_core::analytics::{
    borel_window_check, ergodic_stats, legendre_exactness, region_epsilon, region_speed, verify_superoptimal,
};
use socf_core::arith::{frac, inv_sqrt5, parse::parse_surd, BigFraction, SurdValue};
use socf_core::cf::{convergents, TailSource};
use socf_core::constants::PI_MINUS_3;
use socf_core::induce::{gcf_convergents, socf_digits, socf_digits_oracle, Orbit};
use socf_core::region::{delta22_min_digit, hurwitz_cell_regions, measure, parse_region, HurwitzCell, Region};
use std::cmp::Ordering;
use std::time::{Duration, Instant};

const CAP: usize = 10_000;

fn pi() -> TailSource {
    TailSource::from_decimal(PI_MINUS_3).unwrap()
}

fn random_x(i: u64) -> TailSource {
    TailSource::random(0xACCE_0000 + i)
}

fn builtins() -> Vec<Region> {
    vec![
        Region::jump(2).unwrap(),
        Region::jump(3).unwrap(),
        Region::legendre(&SurdValue::from(frac(2, 5))).unwrap(),
        Region::hurwitz(),
    ]
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn golden(region: Region, digits: &str, conv: &[&str], cells: &[&str]) -> Outcome {
    let d = match socf_digits(&region, pi(), 11, CAP) {
        Ok(d) => d,
        Err(e) => return outcome(false, e.to_string()),
    };
    let got_conv: Vec<String> = gcf_convergents(&d.beta0, &d.alpha0, &d.digits, 11)
        .unwrap()
        .iter()
        .map(|c| format!("{}/{}", c.p, c.q))
        .collect();
    let got_cells: Vec<String> = d.steps.iter().map(|s| s.cell_label(region.kind())).collect();
    let ok_digits = digits.is_empty() || d.display() == digits;
    let ok_conv = conv.is_empty() || got_conv == conv;
    let ok_cells = cells.is_empty() || got_cells == cells;
    outcome(
        ok_digits && ok_conv && ok_cells,
        format!("digits {ok_digits}, convergents {ok_conv}, cells {ok_cells}; {}", d.display()),
    )
}

fn criterion1() -> Outcome {
    golden(
        Region::jump(2).unwrap(),
        "[0; 1/7, 1/16, -1/(881/3), (-1/3)/11, -3/5, -1/15, 1/(5/2), (1/2)/5, 2/2, 1/2, 1/3]",
        &[
            "0/1", "1/7", "16/113", "14093/99532", "51669/364913", "244252/1725033", "3612111/25510582",
            "18549059/131002976", "48178703/340262731", "114906465/811528438", "277991633/1963319607",
            "948881364/6701487259",
        ],
        &[],
    )
}

fn criterion2() -> Outcome {
    golden(
        Region::hurwitz(),
        "[0; 1/7, 1/16, -1/294, -1/3, -1/4, -1/5, -1/15, 1/(5/2), (1/2)/5, 2/2, 1/2]",
        &[
            "0/1", "1/7", "16/113", "4703/33215", "14093/99532", "51669/364913", "244252/1725033",
            "3612111/25510582", "18549059/131002976", "48178703/340262731", "114906465/811528438",
            "277991633/1963319607",
        ],
        &[],
    )
}

fn criterion3() -> Outcome {
    let a = golden(
        Region::jump(2).unwrap(),
        "",
        &[],
        &["Δ0(7)", "Δ0(15)", "Δ1(292)", "Δ3(2)", "Δ1(3)", "Δ1(14)", "Δ0(2)", "Δ2(2)", "Δ0(2)", "Δ0(2)", "Δ0(2)", "Δ1(84)"],
    );
    let b = golden(
        Region::hurwitz(),
        "",
        &[],
        &[
            "Δ1(7)", "Δ1(15)", "Δ21(292)", "Δ21(1)", "Δ21(2)", "Δ21(3)", "Δ21(14)", "Δ1(2)", "Δ3(2)", "Δ1(2)", "Δ1(2)",
            "Δ1(2)",
        ],
    );
    outcome(a.pass && b.pass, format!("jump(2) cells {}, hurwitz cells {}", a.pass, b.pass))
}

fn criterion4() -> Outcome {
    let k = 50;
    let mut bad = Vec::new();
    for i in 0..100 {
        for region in builtins() {
            let src = random_x(i);
            let res = (|| -> socf_core::Result<bool> {
                let d = socf_digits(&region, src.clone(), k, CAP)?;
                let hits = d.hit_indices();
                let mut probe = src.clone();
                let o = socf_digits_oracle(&mut probe, &hits, k)?;
                let same = (&o.beta0, &o.alpha0, &o.digits) == (&d.beta0, &d.alpha0, &d.digits);
                let conv = gcf_convergents(&d.beta0, &d.alpha0, &d.digits, k)?;
                let rc = convergents(&mut probe, hits[k])?;
                let seidel = conv.iter().zip(&hits).all(|(c, &h)| {
                    let n = h - 1;
                    if n == 0 {
                        c.p.is_zero() && c.q.is_one()
                    } else {
                        (&c.p, &c.q) == (&rc[n - 1].p, &rc[n - 1].q)
                    }
                });
                Ok(same && seidel)
            })();
            if !matches!(res, Ok(true)) {
                bad.push(format!("x#{i} {}: {res:?}", region.label()));
            }
        }
    }
    outcome(bad.is_empty(), format!("400 expansions to k = {k}, mismatches {bad:?}"))
}

fn criterion5() -> Outcome {
    let mut violations = 0;
    let mut errors = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        for region in builtins() {
            let eps = region_epsilon(&region).unwrap();
            match verify_superoptimal(random_x(i), &region, &eps, region_speed(&region), 50, CAP) {
                Ok(rep) => {
                    violations += rep.violations.len();
                    worst = worst.max(rep.theta_max[1] / eps.to_f64());
                    if let Some(e) = rep.stop_reason {
                        errors.push(format!("x#{i} {}: {e}", region.label()));
                    }
                }
                Err(e) => errors.push(format!("x#{i} {}: {e}", region.label())),
            }
        }
    }
    outcome(
        violations == 0 && errors.is_empty(),
        format!("{violations} violations over 100 x and 4 regions, largest theta/eps {worst:.6}, errors {errors:?}"),
    )
}

fn criterion6() -> Outcome {
    let mut bad = Vec::new();
    for i in 0..25 {
        for e in [frac(1, 2), frac(2, 5), frac(1, 4)] {
            match legendre_exactness(random_x(i), &e, 9, CAP) {
                Ok(r) if r.holds && r.increasing_denominators => {}
                other => bad.push(format!("x#{i} eps0 {e}: {other:?}")),
            }
        }
    }
    outcome(bad.is_empty(), format!("75 pairs, failures {bad:?}"))
}

fn criterion7() -> Outcome {
    let h = Region::hurwitz();
    let (mut steps, mut max_j) = (0usize, 0usize);
    let mut errors = Vec::new();
    for i in 0..100 {
        let mut z = Orbit::new(random_x(1000 + i));
        for _ in 0..1000 {
            match z.induced_step(&h, CAP) {
                Ok(s) => {
                    max_j = max_j.max(s.j);
                    steps += 1;
                }
                Err(e) => {
                    errors.push(format!("x#{i}: {e}"));
                    break;
                }
            }
        }
    }
    // Δ22(a) needs x ∈ [a/(2a+1), (a+1)/(2a+3)) and -1 + √5·x - x·y ≥ 0 with y ≥ 0.
    // The left side increases in x for y < √5, so when (a+1)/(2a+3) ≤ 1/√5 it is
    // negative at the right corner (x, y) = ((a+1)/(2a+3), 0) and hence everywhere.
    let [_, _, (cell, d22)] = hurwitz_cell_regions();
    assert_eq!(cell, HurwitzCell::D22);
    let lead = &d22.cells()[0][0];
    let mut infeasible = Vec::new();
    for a in 1..=4i64 {
        let top = frac(a + 1, 2 * a + 3);
        let below = inv_sqrt5().cmp_fraction(&top) != Ordering::Less;
        let corner = lead.sign_at(&SurdValue::from(top), &BigFraction::zero()).unwrap() == Ordering::Less;
        infeasible.push(below && corner);
    }
    // a = 4 is realised, e.g. by x = 9/20 ∈ [4/9, 5/11)
    let witness = d22.contains_exact(&SurdValue::from(frac(9, 20)), &BigFraction::zero()).unwrap()
        && h.contains_exact(&SurdValue::from(frac(9, 20)), &BigFraction::zero()).unwrap();
    let structure = infeasible == [true, true, true, false] && witness && delta22_min_digit() == BigInt::from(4);
    outcome(
        max_j <= 3 && steps >= 100_000 && errors.is_empty() && structure,
        format!("{steps} induced steps, max j = {max_j}; Δ22(a) empty for a = 1,2,3: {structure}"),
    )
}

fn criterion8() -> Outcome {
    let jump2 = measure(&Region::jump(2).unwrap(), 1e-12).value;
    let d_jump = (jump2 - (1.5f64).ln() / 2f64.ln()).abs();
    let mut d_leg: f64 = 0.0;
    for (n, d) in [(1, 2), (2, 5), (1, 4), (1, 3), (1, 10)] {
        let m = measure(&Region::legendre(&SurdValue::from(frac(n, d))).unwrap(), 1e-12).value;
        d_leg = d_leg.max((m - n as f64 / d as f64 / 2f64.ln()).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tol = 1e-10;
    let mut d_rect: f64 = 0.0;
    for _ in 0..20 {
        let mut pick = || {
            let (a, b): (u32, u32) = (rng.gen_range(0..1000), rng.gen_range(0..1000));
            (a.min(b), a.max(b) + 1)
        };
        let ((x0, x1), (y0, y1)) = (pick(), pick());
        let xm = (x0 + x1) / 2;
        let box_ = |xa: u32, xb: u32| {
            format!(
                "(-{xa}/1001, 1, 0, 0, >=); ({xb}/1001, -1, 0, 0, >=); (-{y0}/1001, 0, 1, 0, >=); ({y1}/1001, 0, -1, 0, >=)"
            )
        };
        let whole = parse_region(&format!("cells[{}]", box_(x0, x1))).unwrap();
        // two cells force the quadrature path
        let split = parse_region(&format!("cells[{} | {}]", box_(x0, xm), box_(xm, x1))).unwrap();
        let closed = measure(&whole, tol);
        let quad = measure(&split, tol);
        assert_ne!(closed.method, quad.method);
        d_rect = d_rect.max((closed.value - quad.value).abs());
    }
    outcome(
        d_jump < 1e-9 && d_leg < 1e-9 && d_rect < tol,
        format!("|jump(2) err| {d_jump:.1e}, max |legendre err| {d_leg:.1e}, max |closed - quadrature| {d_rect:.1e}"),
    )
}

fn criterion9() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for region in [Region::jump(2).unwrap(), Region::hurwitz()] {
        match ergodic_stats(&region, 50, 10_000, 7) {
            Ok(st) => {
                pass &= st.frequency_ok && st.levy_ok;
                parts.push(format!(
                    "{}: freq {:.5} vs {:.5} ({:.2}%), levy {:.5} vs {:.5} ({:.2}%), redraws {}",
                    st.region,
                    st.frequency_mean,
                    st.measure,
                    100.0 * st.frequency_rel_err,
                    st.levy_mean,
                    st.levy_target,
                    100.0 * st.levy_rel_err,
                    st.redraws
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{}: {e}", region.label()));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn criterion10() -> Outcome {
    let mut sources: Vec<(String, TailSource)> = (0..25).map(|i| (format!("x#{i}"), random_x(2000 + i))).collect();
    sources.push(("golden".into(), TailSource::from_surd(parse_surd("(sqrt(5)-1)/2").unwrap()).unwrap()));
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, src) in sources {
        match borel_window_check(src, 50) {
            Ok(r) => {
                worst = worst.max(r.worst_min);
                if !r.holds {
                    bad.push(format!("{name}: windows {:?}", r.violations));
                }
            }
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    outcome(bad.is_empty(), format!("26 inputs, largest window minimum {worst:.12}, failures {bad:?}"))
}

fn main() {
    type Criterion = (usize, &'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 10] = [
        (1, "jump(2) golden expansion of pi - 3", criterion1, Some(Duration::from_secs(1))),
        (2, "hurwitz golden expansion of pi - 3", criterion2, Some(Duration::from_secs(1))),
        (3, "region sequences", criterion3, None),
        (4, "Seidel and oracle equivalence", criterion4, Some(Duration::from_secs(60))),
        (5, "superoptimality clause (i)", criterion5, None),
        (6, "Legendre exactness", criterion6, None),
        (7, "Hurwitz structure", criterion7, None),
        (8, "measures", criterion8, None),
        (9, "statistics", criterion9, Some(Duration::from_secs(300))),
        (10, "Borel windows", criterion10, None),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, run, limit) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        let el = t.elapsed();
        let in_time = limit.is_none_or(|l| el < l);
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget = limit.map(|l| format!(" (limit {:.0} s)", l.as_secs_f64())).unwrap_or_default();
        println!(
            "criterion {n:>2} {}: {name} in {:.2} s{budget}; {}",
            if pass { "PASS" } else { "FAIL" },
            el.as_secs_f64(),
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
