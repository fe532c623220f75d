use proptest::prelude::*;

use super::*;

fn p(s: &str) -> DiffPoly {
    parse(s).unwrap()
}

#[test]
fn combines_equal_monomials() {
    // a*u4 + u4*a -> 2*a*u4
    let e = p("a*u4 + u4*a");
    assert_eq!(e, p("2*a*u4"));
    assert_eq!(e.num_terms(), 1);
}

#[test]
fn cancellation_gives_empty_polynomial() {
    let e = p("u5 - u5");
    assert!(e.is_zero());
    assert_eq!(e.num_terms(), 0);
}

#[test]
fn round_trips_single_monomial() {
    let e = p("1/2*u6*a^6*ab^-1");
    let (pow, coeff) = e.as_monomial().expect("one term");
    assert_eq!(coeff, &ratio(1, 2));
    assert_eq!(pow.exponent(&Indet::A), 6);
    assert_eq!(pow.exponent(&Indet::Ab), -1);
    assert_eq!(pow.exponent(&Indet::Jet(6)), 1);
    assert_eq!(parse(&e.to_string()).unwrap(), e);
}

#[test]
fn multiplies_inverse_powers_to_one() {
    assert_eq!(&p("a^2") * &p("a^-2"), DiffPoly::one());
}

#[test]
fn difference_of_squares() {
    assert_eq!(&p("u4 + u5") * &p("u4 - u5"), p("u4^2 - u5^2"));
}

#[test]
fn monomial_product() {
    assert_eq!(&p("a^5*u5") * &p("5*a^4*ab"), p("5*a^9*ab*u5"));
}

#[test]
fn coefficient_extraction() {
    let e = p("a^5*u6 + 5*a^4*ab*u5^2");
    assert_eq!(e.coefficient_of(&Indet::Jet(5), 2), p("5*a^4*ab"));
    assert_eq!(p("u7").coefficient_of(&Indet::Jet(7), 1), DiffPoly::one());
    let f = p("a^7*u7 + 14*a^6*ab*u6*u5 + 35*a^5*ab^2*u5^3");
    assert_eq!(f.coefficient_of(&Indet::Jet(7), 1), p("a^7"));
    // the v-free part
    assert_eq!(
        f.coefficient_of(&Indet::Jet(7), 0),
        p("14*a^6*ab*u6*u5 + 35*a^5*ab^2*u5^3")
    );
}

#[test]
fn shift_jet_relabels_orders() {
    assert_eq!(p("u5").shift_jet(-1).unwrap(), p("u4"));
    assert_eq!(
        p("a^5*u6 + 5*a^4*ab*u5^2").shift_jet(-1).unwrap(),
        p("a^5*u5 + 5*a^4*ab*u4^2")
    );
    assert_eq!(p("u3").shift_jet(0).unwrap(), p("u3"));
    assert!(matches!(
        p("u0*u3").shift_jet(-1),
        Err(Error::JetOrderUnderflow { .. })
    ));
}

#[test]
fn rejects_negative_jet_exponents() {
    assert!(parse("u5^-1").is_err());
    assert!(PowerProduct::from_pairs([(Indet::Jet(5), -1)]).is_err());
}

#[test]
fn parse_errors_carry_position() {
    match parse("u4 + ?") {
        Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn parse_accepts_parenthesized_exponents_and_u_alias() {
    assert_eq!(p("a^(-2)"), p("a^-2"));
    assert_eq!(p("u"), DiffPoly::jet(0));
    assert_eq!(p("(u4+u5)^2"), p("u4^2 + 2*u4*u5 + u5^2"));
    assert_eq!(p("4*P^-1*a^-2*ab").to_string(), "4*P^-1*a^-2*ab");
}

#[test]
fn nth_roots() {
    assert_eq!(nth_root_exact(&rat(8), 3), Some(rat(2)));
    assert_eq!(nth_root_exact(&ratio(1, 27), 3), Some(ratio(1, 3)));
    assert_eq!(nth_root_exact(&rat(-32), 5), Some(rat(-2)));
    assert_eq!(nth_root_exact(&rat(2), 2), None);
    assert_eq!(nth_root_exact(&rat(-4), 2), None);
}

#[test]
fn latex_round_trip_on_flow() {
    let e = p("a^7*u7 + 21/2*a^6*ab*u5^2 - 1/2*a^6*ab^-1 + 35/8*P*a^11*u5*u4^2");
    let tex = latex(&e, 3);
    assert_eq!(latex_parse(&tex, 3).unwrap(), e);
}

fn arb_indet() -> impl Strategy<Value = Indet> {
    prop_oneof![
        (0u32..6).prop_map(Indet::Jet),
        Just(Indet::A),
        Just(Indet::Ab),
        Just(Indet::sym("P")),
    ]
}

fn arb_pow() -> impl Strategy<Value = PowerProduct> {
    prop::collection::vec((arb_indet(), 0i32..4), 0..4).prop_map(|pairs| {
        let pairs: Vec<(Indet, i32)> = pairs
            .into_iter()
            .map(|(i, e)| match i {
                Indet::Jet(_) => (i, e),
                other => (other, e - 2),
            })
            .collect();
        PowerProduct::from_pairs(pairs).unwrap()
    })
}

fn arb_poly() -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec((arb_pow(), -6i64..7), 0..5).prop_map(|terms| {
        DiffPoly::from_terms(terms.into_iter().map(|(p, c)| (p, rat(c))))
    })
}

proptest! {
    #[test]
    fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &DiffPoly::one(), a.clone());
        prop_assert_eq!(&a * &DiffPoly::zero(), DiffPoly::zero());
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn canonicalize_is_order_independent(a in arb_poly(), seed in any::<u64>()) {
        let mut terms: Vec<_> = a.terms().to_vec();
        // deterministic shuffle
        let n = terms.len();
        for i in (1..n).rev() {
            let j = (seed as usize).wrapping_mul(i + 1) % (i + 1);
            terms.swap(i, j);
        }
        let rebuilt = DiffPoly::from_terms(terms);
        prop_assert_eq!(rebuilt.clone(), a);
        prop_assert_eq!(DiffPoly::from_terms(rebuilt.terms().to_vec()), rebuilt);
    }

    #[test]
    fn coefficient_decomposition_reconstructs(a in arb_poly(), v in arb_indet()) {
        let lo = a.terms().iter().map(|(p, _)| p.exponent(&v)).min().unwrap_or(0);
        let hi = a.terms().iter().map(|(p, _)| p.exponent(&v)).max().unwrap_or(0);
        let mut sum = DiffPoly::zero();
        for j in lo..=hi {
            let vj = DiffPoly::monomial(
                PowerProduct::from_pairs([(v.clone(), j)]).unwrap(),
                Rat::one(),
            );
            sum = &sum + &(&a.coefficient_of(&v, j) * &vj);
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn text_round_trip(a in arb_poly()) {
        prop_assert_eq!(parse(&a.to_string()).unwrap(), a);
    }
}
