use socf_core::analytics::{entropy_of, levy_target};
use socf_core::arith::{frac, parse::parse_surd, SurdValue};
use socf_core::cf::{convergents, theta, TailSource};
use socf_core::constants::{E_MINUS_2, PI_MINUS_3};
use socf_core::induce::{gcf_convergents, socf_digits, SocfDigits};
use socf_core::region::{measure, Region};

const PI_DIGITS: [u32; 40] = [
    7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2, 1, 84, 2, 1, 1, 15, 3, 13, 1, 4, 2, 6, 6, 99, 1, 2, 2, 6,
    3, 5, 1,
];

const JUMP2_DIGITS: &str = "[0; 1/7, 1/16, -1/(881/3), (-1/3)/11, -3/5, -1/15, 1/(5/2), (1/2)/5, 2/2, 1/2, 1/3]";
const JUMP2_CONV: [&str; 12] = [
    "0/1", "1/7", "16/113", "14093/99532", "51669/364913", "244252/1725033", "3612111/25510582", "18549059/131002976",
    "48178703/340262731", "114906465/811528438", "277991633/1963319607", "948881364/6701487259",
];
const JUMP2_CELLS: [&str; 12] =
    ["Δ0(7)", "Δ0(15)", "Δ1(292)", "Δ3(2)", "Δ1(3)", "Δ1(14)", "Δ0(2)", "Δ2(2)", "Δ0(2)", "Δ0(2)", "Δ0(2)", "Δ1(84)"];

const HURWITZ_DIGITS: &str = "[0; 1/7, 1/16, -1/294, -1/3, -1/4, -1/5, -1/15, 1/(5/2), (1/2)/5, 2/2, 1/2]";
const HURWITZ_CONV: [&str; 12] = [
    "0/1", "1/7", "16/113", "4703/33215", "14093/99532", "51669/364913", "244252/1725033", "3612111/25510582",
    "18549059/131002976", "48178703/340262731", "114906465/811528438", "277991633/1963319607",
];
const HURWITZ_CELLS: [&str; 12] = [
    "Δ1(7)", "Δ1(15)", "Δ21(292)", "Δ21(1)", "Δ21(2)", "Δ21(3)", "Δ21(14)", "Δ1(2)", "Δ3(2)", "Δ1(2)", "Δ1(2)", "Δ1(2)",
];

fn expand(region: &Region, src: TailSource) -> (SocfDigits, Vec<String>, Vec<String>) {
    let d = socf_digits(region, src, 11, 1000).unwrap();
    let conv = gcf_convergents(&d.beta0, &d.alpha0, &d.digits, 11).unwrap();
    let conv = conv.iter().map(|c| format!("{}/{}", c.p, c.q)).collect();
    let cells = d.steps.iter().map(|s| s.cell_label(region.kind())).collect();
    (d, conv, cells)
}

fn pi_sources() -> [TailSource; 2] {
    [TailSource::from_decimal(PI_MINUS_3).unwrap(), TailSource::from_digits(PI_DIGITS).unwrap()]
}

#[test]
fn pi_rcf_digits() {
    let mut src = TailSource::from_decimal(PI_MINUS_3).unwrap();
    src.advance_to(40).unwrap();
    let got: Vec<u32> = src.digits().iter().map(|d| u32::try_from(d).unwrap()).collect();
    assert_eq!(got, PI_DIGITS);
}

#[test]
fn e_rcf_digits() {
    let mut src = TailSource::from_decimal(E_MINUS_2).unwrap();
    src.advance_to(30).unwrap();
    let got: Vec<u32> = src.digits().iter().map(|d| u32::try_from(d).unwrap()).collect();
    let want: Vec<u32> = (1..=10).flat_map(|k| [1, 2 * k, 1]).take(30).collect();
    assert_eq!(got, want);
}

#[test]
fn jump2_pi_expansion() {
    let region = Region::jump(2).unwrap();
    for src in pi_sources() {
        let (d, conv, cells) = expand(&region, src);
        assert_eq!(d.display(), JUMP2_DIGITS);
        assert_eq!(conv, JUMP2_CONV);
        assert_eq!(cells, JUMP2_CELLS);
    }
}

#[test]
fn hurwitz_pi_expansion() {
    let region = Region::hurwitz();
    for src in pi_sources() {
        let (d, conv, cells) = expand(&region, src);
        assert_eq!(d.display(), HURWITZ_DIGITS);
        assert_eq!(conv, HURWITZ_CONV);
        assert_eq!(cells, HURWITZ_CELLS);
    }
}

#[test]
fn theta_of_first_pi_convergent() {
    let mut src = TailSource::from_decimal(PI_MINUS_3).unwrap();
    let t = theta(&mut src, 1, &frac(1, 1u64 << 62)).unwrap().to_f64();
    assert!((t - 0.061959974100131315).abs() < 1e-16, "{t}");
}

#[test]
fn sqrt2_convergents() {
    let mut src = TailSource::from_surd(parse_surd("sqrt(2)-1").unwrap()).unwrap();
    let got: Vec<String> = convergents(&mut src, 5).unwrap().iter().map(|c| format!("{}/{}", c.p, c.q)).collect();
    assert_eq!(got, ["1/2", "2/5", "5/12", "12/29", "29/70"]);
}

#[test]
fn frozen_measures_and_entropies() {
    let jump2 = Region::jump(2).unwrap();
    assert!((measure(&jump2, 1e-12).value - 0.5849625007211562).abs() < 1e-12);
    for (e, want) in [((1, 2), 0.7213475204444817), ((2, 5), 0.5770780163555854), ((1, 4), 0.36067376022224085)] {
        let r = Region::legendre(&SurdValue::from(frac(e.0, e.1))).unwrap();
        assert!((measure(&r, 1e-12).value - want).abs() < 1e-10, "{e:?}");
    }
    let h = Region::hurwitz();
    assert!((measure(&h, 1e-12).value - 0.645192836).abs() < 1e-9);

    assert!((entropy_of(&Region::omega()).unwrap() - 2.373138220831251).abs() < 1e-9);
    assert!((entropy_of(&jump2).unwrap() - 4.056906584448726).abs() < 1e-8);
    let half = Region::legendre(&SurdValue::from(frac(1, 2))).unwrap();
    assert!((entropy_of(&half).unwrap() - 3.289868133696453).abs() < 1e-8);

    assert!((levy_target(measure(&h, 1e-12).value) - 1.8390921959889088).abs() < 1e-8);
    assert!((levy_target(measure(&jump2, 1e-12).value) - 2.0284532922243628).abs() < 1e-8);
}
