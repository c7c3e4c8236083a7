//! Property tests for the series kernels and genus constructors.

use proptest::prelude::*;

use genrig::genera::{elliptic_sine, fgl_from_exponent};
use genrig::localization::splitmix64;
use genrig::poly::ParamPoly;
use genrig::rational::ratio;
use genrig::series::multi::TruncSeries;
use genrig::series::univariate::{ExponentSeries, PowerSeries1};
use genrig::symbols::{ParamSet, VarSet};

fn small_rational() -> impl Strategy<Value = genrig::Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

/// Random 3-variable series at the given order: a handful of monomials with
/// small rational coefficients.
fn trunc_series(order: u32) -> impl Strategy<Value = TruncSeries> {
    proptest::collection::vec(((0u8..=2, 0u8..=2, 0u8..=2), small_rational()), 0..8).prop_map(
        move |terms| {
            let vars = VarSet::standard(3);
            let params = ParamSet::empty();
            let x = TruncSeries::variable(&vars, &params, order, 0);
            let y = TruncSeries::variable(&vars, &params, order, 1);
            let z = TruncSeries::variable(&vars, &params, order, 2);
            let mut s = TruncSeries::zero(&vars, &params, order);
            for ((a, b, c), q) in terms {
                if (a + b + c) as u32 > order {
                    continue;
                }
                let mut t =
                    TruncSeries::constant(&vars, &params, order, ParamPoly::constant(&params, q));
                for _ in 0..a {
                    t = &t * &x;
                }
                for _ in 0..b {
                    t = &t * &y;
                }
                for _ in 0..c {
                    t = &t * &z;
                }
                s = &s + &t;
            }
            s
        },
    )
}

fn univariate(order: u32) -> impl Strategy<Value = PowerSeries1> {
    proptest::collection::vec(small_rational(), (order + 1) as usize).prop_map(move |coeffs| {
        let params = ParamSet::empty();
        PowerSeries1::from_coeffs(
            "x",
            &params,
            order,
            coeffs
                .into_iter()
                .map(|q| ParamPoly::constant(&params, q))
                .collect(),
        )
    })
}

fn exponent(order: u32) -> impl Strategy<Value = ExponentSeries> {
    univariate(order).prop_map(move |mut s| {
        s.set_coeff(0, ParamPoly::zero(s.params()));
        s.set_coeff(1, ParamPoly::one(s.params()));
        ExponentSeries::new(s).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mul_is_commutative_and_associative(
        a in trunc_series(6),
        b in trunc_series(6),
        c in trunc_series(6),
    ) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn mul_by_one_is_identity(a in trunc_series(6)) {
        let one = TruncSeries::one(a.vars(), a.params(), a.order());
        prop_assert_eq!(&a * &one, a.clone());
    }

    #[test]
    fn leibniz_rule(a in trunc_series(6), b in trunc_series(6)) {
        let lhs = (&a * &b).derivative(0);
        let rhs = &(&a.derivative(0) * &b.truncated(5)) + &(&a.truncated(5) * &b.derivative(0));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compositional_inverse_round_trips(f in exponent(10)) {
        let h = f.compositional_inverse();
        let fh = f.series().compose(h.series()).unwrap();
        let hf = h.series().compose(f.series()).unwrap();
        let id = PowerSeries1::identity("x", f.params(), 10);
        prop_assert_eq!(fh, id.clone());
        prop_assert_eq!(hf, id);
    }

    #[test]
    fn compose_linear_is_additive(
        f in univariate(6),
        g in univariate(6),
        w in proptest::collection::vec(-3i64..=3, 3),
    ) {
        let vars = VarSet::standard(3);
        let lhs = &TruncSeries::compose_linear(&f, &w, &vars, 6).unwrap()
            + &TruncSeries::compose_linear(&g, &w, &vars, 6).unwrap();
        let rhs = TruncSeries::compose_linear(&(&f + &g), &w, &vars, 6).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn elliptic_sine_is_odd_for_random_parameters(
        d in small_rational(),
        e in small_rational(),
        order in 3u32..=9,
    ) {
        let params = ParamSet::standard();
        let sn = elliptic_sine(
            &ParamPoly::constant(&params, d),
            &ParamPoly::constant(&params, e),
            order,
        );
        prop_assert!(sn.is_odd());
    }

    #[test]
    fn fgl_axioms_for_random_exponents(f in exponent(6)) {
        let fgl = fgl_from_exponent(&f, 6).unwrap();
        prop_assert!(fgl.unit_ok());
        prop_assert!(fgl.symmetric_ok());
        prop_assert!(fgl.associative_ok().unwrap());
    }
}

/// One hundred seeded random unit series invert exactly.
#[test]
fn hundred_random_units_invert_exactly() {
    let params = ParamSet::empty();
    let order = 8u32;
    let mut state = 0xfeed_f00du64;
    for _ in 0..100 {
        let mut s = PowerSeries1::zero("x", &params, order);
        // nonzero rational constant term, random small coefficients above
        let c0 = 1 + (splitmix64(&mut state) % 5) as i64;
        s.set_coeff(0, ParamPoly::int(&params, c0));
        for d in 1..=order {
            let n = (splitmix64(&mut state) % 11) as i64 - 5;
            let den = 1 + (splitmix64(&mut state) % 4) as i64;
            s.set_coeff(d, ParamPoly::constant(&params, ratio(n, den)));
        }
        let inv = s.invert_unit().unwrap();
        assert_eq!(&s * &inv, PowerSeries1::one("x", &params, order));
    }
}
