use super::*;
use crate::ring::parse;

fn p(s: &str) -> DiffPoly {
    parse(s).unwrap()
}

fn ctx(family: Family, base: u32) -> JetContext {
    JetContext::new(family, base).unwrap()
}

#[test]
fn seeds_match_published_forms() {
    let s = seed_flow(Family::Kdv, 3).unwrap();
    assert_eq!(s.rhs, p("4*P^-1*a^-2*ab"));
    assert_eq!(s.order, 3);

    let s = seed_flow(Family::Skk, 5).unwrap();
    assert_eq!(s.rhs, p("1/2*a^6*ab^-1"));
    assert_eq!(s.order, 5);

    let s = seed_flow(Family::Skk, 4).unwrap();
    assert_eq!(s.rhs, p("a^5*u5"));

    let s = seed_flow(Family::Skk, 3).unwrap();
    assert_eq!(s.rhs, p("a^5*u5 + 5*a^4*ab*u4^2"));
}

#[test]
fn unsupported_combinations_are_rejected() {
    assert!(matches!(
        seed_flow(Family::Kdv, 4),
        Err(Error::UnsupportedCombination { .. })
    ));
    assert!(matches!(
        seed_flow(Family::Skk, 2),
        Err(Error::UnsupportedCombination { .. })
    ));
}

#[test]
fn operator_tables_leading_entries() {
    let r = recursion_operator(Family::Kdv, 3).unwrap();
    assert_eq!(r.step, 2);
    assert_eq!(r.op.local[&2], p("a^2"));
    assert_eq!(r.op.local[&1], p("-1*a*ab*u4"));
    assert_eq!(r.op.local[&0], p("a*ab*u5 + 3*ab^2*u4^2"));
    assert_eq!(r.op.nonlocal.len(), 1);

    let r = recursion_operator(Family::Skk, 5).unwrap();
    assert_eq!(r.step, 6);
    assert_eq!(r.op.local[&6], p("a^6"));
    assert_eq!(r.op.local[&5], p("3*a^5*ab*u6"));
    assert_eq!(r.op.nonlocal.len(), 2);

    let r = recursion_operator(Family::Skk, 4).unwrap();
    assert_eq!(r.op.local[&5], p("9*a^5*ab*u5"));

    let r = recursion_operator(Family::Skk, 3).unwrap();
    assert_eq!(r.op.local[&5], p("15*a^5*ab*u4"));
}

#[test]
fn recursion_step_generates_published_flows() {
    let c = ctx(Family::Kdv, 3);
    let r = recursion_operator(Family::Kdv, 3).unwrap();
    let f3 = seed_flow(Family::Kdv, 3).unwrap();
    let f5 = apply_recursion(&r, &f3, &c).unwrap();
    assert_eq!(f5.rhs, p("a^5*u5 + 5/2*a^4*ab*u4^2"));
    assert_eq!(f5.order, 5);
    match &f5.provenance {
        Provenance::Generated { from_order, scale } => {
            assert_eq!(*from_order, 3);
            assert_eq!(*scale, crate::ring::rat(1));
        }
        other => panic!("unexpected provenance {other:?}"),
    }
    let f7 = apply_recursion(&r, &f5, &c).unwrap();
    assert_eq!(f7.rhs, tables::listed_flow(Family::Kdv, 3, 7).unwrap());
}

#[test]
fn hierarchy_orders() {
    let flows = generate_hierarchy(Family::Kdv, 3, 9).unwrap();
    let orders: Vec<u32> = flows.iter().map(|f| f.order).collect();
    assert_eq!(orders, vec![3, 5, 7, 9]);

    let flows = generate_hierarchy(Family::Skk, 5, 11).unwrap();
    let orders: Vec<u32> = flows.iter().map(|f| f.order).collect();
    assert_eq!(orders, vec![5, 7, 11]);

    let flows = generate_hierarchy(Family::Skk, 4, 13).unwrap();
    let orders: Vec<u32> = flows.iter().map(|f| f.order).collect();
    assert_eq!(orders, vec![5, 7, 11, 13]);
    assert!(orders.iter().all(|m| m % 3 != 0 && m % 2 == 1));
}

#[test]
fn generated_flows_are_level_homogeneous_and_normalized() {
    for (family, base) in [(Family::Kdv, 3), (Family::Skk, 4)] {
        for f in generate_hierarchy(family, base, 11).unwrap() {
            assert_eq!(
                f.rhs.homogeneous_level(base),
                Some((f.order - base) as i64),
                "{} b={} m={}",
                family.name(),
                base,
                f.order
            );
            if f.order >= 5 && !matches!(f.provenance, Provenance::Seed) {
                let lead = f.rhs.coefficient_of(&Indet::Jet(f.order), 1);
                assert_eq!(
                    lead,
                    DiffPoly::monomial(
                        PowerProduct::from_pairs([(Indet::A, f.order as i32)]).unwrap(),
                        Rat::one()
                    )
                );
            }
        }
    }
}

#[test]
fn commutator_basics() {
    let c = ctx(Family::Skk, 4);
    let f = seed_flow(Family::Skk, 4).unwrap();
    assert!(commutator(&f, &f, &c).unwrap().is_zero());

    // translation flow commutes with any autonomous flow
    let u1 = FlowRecord {
        family: Family::Skk,
        base: 4,
        order: 1,
        rhs: p("u1"),
        provenance: Provenance::Seed,
    };
    assert!(commutator(&u1, &f, &c).unwrap().is_zero());

    let g = second_seed_flow(Family::Skk, 4).unwrap().unwrap();
    assert!(commutator(&f, &g, &c).unwrap().is_zero());

    let other = seed_flow(Family::Skk, 5).unwrap();
    assert!(commutator(&f, &other, &c).is_err());
}

#[test]
fn potentiation_descends_the_bases() {
    let s5 = seed_flow(Family::Skk, 5).unwrap();
    let p4 = potentiate(&s5).unwrap();
    assert_eq!(p4.base, 4);
    assert_eq!(p4.order, 5);
    assert_eq!(p4.rhs, seed_flow(Family::Skk, 4).unwrap().rhs);
    let p3 = potentiate(&p4).unwrap();
    assert_eq!(p3.rhs, seed_flow(Family::Skk, 3).unwrap().rhs);
    assert!(potentiate(&p3).is_err());

    // order-1 translation flow maps to itself
    let u1 = FlowRecord {
        family: Family::Skk,
        base: 4,
        order: 1,
        rhs: p("u1"),
        provenance: Provenance::Seed,
    };
    assert_eq!(potentiate(&u1).unwrap().rhs, p("u1"));
}

#[test]
fn symmetry_flow_reproduces_second_seed() {
    let c = ctx(Family::Skk, 5);
    let s5 = seed_flow(Family::Skk, 5).unwrap();
    let f7 = symmetry_flow(&s5, 7, &c).unwrap();
    assert_eq!(f7.rhs, tables::listed_flow(Family::Skk, 5, 7).unwrap());
    assert!(matches!(
        f7.provenance,
        Provenance::DerivedSymmetry { seed_order: 5 }
    ));
}

#[test]
fn flow_ansatz_shapes() {
    // order 7 over base 4: partitions of 3 -> 3 monomials, no P widening
    let (ansatz, unknowns) = flow_ansatz(Family::Skk, 4, 7, "c").unwrap();
    assert_eq!(unknowns.len(), 3);
    assert_eq!(ansatz.homogeneous_level(4), Some(3));
    // square-root family admits P-shifted coefficients
    let (_, unknowns) = flow_ansatz(Family::Kdv, 3, 7, "c").unwrap();
    assert_eq!(unknowns.len(), 7);
}

mod catalog_io {
    use super::*;
    use crate::hierarchy::catalog;

    fn sample_flows() -> Vec<FlowRecord> {
        vec![
            seed_flow(Family::Skk, 4).unwrap(),
            FlowRecord {
                family: Family::Skk,
                base: 4,
                order: 7,
                rhs: p("a^7*u7 + 14*a^6*ab*u6*u5 + 35*a^5*ab^2*u5^3"),
                provenance: Provenance::Generated {
                    from_order: 5,
                    scale: crate::ring::ratio(3, 2),
                },
            },
        ]
    }

    #[test]
    fn text_round_trip() {
        let flows = sample_flows();
        let text = catalog::write_text_catalog(&flows);
        let back = catalog::read_text_catalog(&text).unwrap();
        assert_eq!(back, flows);
    }

    #[test]
    fn json_round_trip_preserves_checksums() {
        let flows = sample_flows();
        let json = catalog::write_json_catalog(&flows);
        let back = catalog::read_json_catalog(&json).unwrap();
        assert_eq!(back, flows);
        for (a, b) in flows.iter().zip(&back) {
            assert_eq!(catalog::checksum(&a.rhs), catalog::checksum(&b.rhs));
        }
    }

    #[test]
    fn corrupted_checksum_is_rejected() {
        let flows = sample_flows();
        let json = catalog::write_json_catalog(&flows).replace("a^7*u7", "a^6*u7");
        assert!(catalog::read_json_catalog(&json).is_err());
    }

    #[test]
    fn latex_output_reparses_to_the_same_polynomial() {
        for f in sample_flows() {
            let tex = crate::ring::latex(&f.rhs, f.base);
            assert_eq!(crate::ring::latex_parse(&tex, f.base).unwrap(), f.rhs);
        }
    }

    #[test]
    fn deterministic_output() {
        let flows = sample_flows();
        assert_eq!(
            catalog::write_json_catalog(&flows),
            catalog::write_json_catalog(&flows)
        );
        assert_eq!(
            catalog::write_text_catalog(&flows),
            catalog::write_text_catalog(&flows)
        );
    }
}
