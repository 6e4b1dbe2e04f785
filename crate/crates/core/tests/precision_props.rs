use mpqc::{MPReal, Precision};
use proptest::prelude::*;

fn prec(bits: u64) -> Precision {
    Precision::new(bits).unwrap()
}

/// A value `m·2^e` built exactly from integer parts, so the same number can
/// be materialized at any precision.
fn exact(m: i64, e: i32, p: Precision) -> MPReal {
    MPReal::from_i64(m, p).mul_exp2(e)
}

fn rel_diff(a: &MPReal, b: &MPReal) -> MPReal {
    let d = (a - b).abs();
    if b.is_zero() {
        d
    } else {
        &d / &b.abs()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn add_then_subtract_stays_within_rounding(
        bits in 32u64..=512,
        ma in 1i64..i64::MAX,
        ea in -200i32..200,
        mb in i64::MIN + 1..i64::MAX,
        shift in 0i32..300,
    ) {
        let p = prec(bits);
        let a = exact(ma, ea, p);
        // |b| <= |a|: same or smaller binade.
        let b = exact(mb, ea - shift, p);
        prop_assume!(b.abs() <= a.abs());
        let back = &(&(&a + &b) - &b) - &a;
        let bound = &p.tolerance(2) * &a.abs();
        prop_assert!(back.abs() <= bound, "{} > {}", back, bound);
    }

    #[test]
    fn higher_precision_agrees(
        bits in 64u64..=384,
        m in 1i64..(1 << 40),
        e in -30i32..10,
        n in 1i64..(1 << 40),
        f in -30i32..10,
    ) {
        let lo = prec(bits);
        let hi = prec(bits + 64);
        let bound = MPReal::exp2(4 - bits as i32, hi);
        let (xl, yl) = (exact(m, e, lo), exact(n, f, lo));
        let (xh, yh) = (exact(m, e, hi), exact(n, f, hi));
        let pairs = [
            ("add", &xl + &yl, &xh + &yh),
            ("mul", &xl * &yl, &xh * &yh),
            ("div", &xl / &yl, &xh / &yh),
            ("sqrt", xl.sqrt(), xh.sqrt()),
            ("ln", xl.ln(), xh.ln()),
        ];
        for (name, l, h) in pairs {
            let r = rel_diff(&l.with_precision(hi), &h);
            prop_assert!(r <= bound, "{name}: {}", r);
        }
        // Keep exp inside the exponent range.
        let small = MPReal::from_i64(1 << 20, hi);
        if xh <= small {
            let r = rel_diff(&xl.exp().with_precision(hi), &xh.exp());
            prop_assert!(r <= bound, "exp: {}", r);
        }
        // Trig near a zero loses relative accuracy, so compare absolutely on
        // a bounded argument.
        for (name, l, h) in [("sin", xl.sin(), xh.sin()), ("cos", xl.cos(), xh.cos())] {
            let scale = MPReal::one(hi).max(&xh.abs());
            let d = (&l.with_precision(hi) - &h).abs();
            prop_assert!(d <= &bound * &scale, "{name}: {}", d);
        }
    }
}

#[test]
fn print_parse_round_trip() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for i in 0..10_000 {
        let bits = [53u64, 64, 128, 200, 256, 333][i % 6];
        let p = prec(bits);
        let m: i64 = rng.random_range(1..i64::MAX);
        let sign = if rng.random_bool(0.5) { -1 } else { 1 };
        let e: i32 = rng.random_range(-400..400);
        let x = &exact(sign * m, e, p) / &MPReal::from_i64(rng.random_range(1..1_000_000), p);
        let text = x.to_round_trip_string();
        let back = MPReal::parse_with_prec(&text, p).unwrap();
        assert_eq!(back, x, "{bits} bits: {text}");
    }
}

#[test]
fn boltzmann_literal_reprints() {
    let kb = MPReal::parse_with_prec(mpqc::nmr::BOLTZMANN, prec(256)).unwrap();
    assert_eq!(kb.to_sci_string(8), "1.3806504e-23");
    assert_eq!(format!("{kb:.8}"), "1.3806504e-23");
}

#[test]
fn invalid_literals_are_rejected() {
    let p = prec(64);
    for bad in ["", "abc", "1e", "--1", "1.2.3", "0x10", "e5"] {
        assert!(MPReal::parse_with_prec(bad, p).is_err(), "{bad:?}");
    }
    for good in ["1", "-2.5", "+3e-7", ".5", "5.", "1E+10"] {
        assert!(MPReal::parse_with_prec(good, p).is_ok(), "{good:?}");
    }
}
