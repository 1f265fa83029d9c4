mod common;

use common::{all_derived, base, derived, poly};
use loopcoh::algebra::{check_adem_coherence, check_confluence, poincare_series, GradedBasis};
use loopcoh::io::format_poly;
use loopcoh::loops::{
    compute_square_relation, derive_loop_presentation, derive_sq_table, derive_unchecked, self_check, DeriveError,
    LoopNames, LoopPresentation, Role,
};
use loopcoh::{Generator, Monomial, Poly, Presentation, SqTable};

fn sigma(l: &LoopPresentation, b: &Presentation, s: &str) -> Poly {
    l.sigma(&poly(b, s)).unwrap()
}

fn index(l: &LoopPresentation, name: &str) -> usize {
    l.presentation().generator_index(name).unwrap()
}

fn table_entry(l: &LoopPresentation, name: &str, k: u32) -> Poly {
    l.presentation().action_on_generator(index(l, name), k)
}

fn square(l: &LoopPresentation, b: &Presentation, name: &str) -> Poly {
    compute_square_relation(l, b, index(l, name)).unwrap().tail
}

fn polynomial_x2() -> Presentation {
    Presentation::new("P", vec![Generator::new("x2", 2)], SqTable::new(), vec![]).unwrap()
}

#[test]
fn sigma_examples() {
    let (b, l) = (base("BSpin7"), derived("BSpin7"));
    let p = l.presentation();
    assert_eq!(sigma(&l, &b, "w4*w6"), poly(p, "y3*v6 + v4*y5"));
    for x in ["w4", "w6", "w7", "w8"] {
        assert!(sigma(&l, &b, &format!("{x}^2")).is_zero());
    }
    assert_eq!(sigma(&l, &b, "w7"), poly(p, "y3^2"));
    let (b, l) = (base("BSpin9"), derived("BSpin9"));
    assert_eq!(sigma(&l, &b, "w7*w8"), poly(l.presentation(), "v7*y7 + y3^2*v8"));
    assert_eq!(sigma(&l, &b, "w7*w8*e16"), poly(l.presentation(), "v7*v8*z15 + v7*y7*f16 + y3^2*v8*f16"));
}

#[test]
fn sigma_rejects_bad_input() {
    let (b, l) = (base("BSpin7"), derived("BSpin7"));
    assert_eq!(l.sigma(&b.one()), Err(DeriveError::SigmaDegree));
    assert_eq!(l.sigma(&poly(&b, "w4 + w6")), Err(DeriveError::SigmaDegree));
    let mixed = l.presentation().generator(0);
    assert!(matches!(l.sigma(&mixed), Err(DeriveError::NotBaseElement { .. })));
}

#[test]
fn derived_table_examples() {
    let l = derived("BSpin7");
    let p = l.presentation();
    assert_eq!(table_entry(&l, "y5", 4), poly(p, "y3*v6 + y5*v4"));
    assert!(table_entry(&l, "y3", 1).is_zero());
    assert_eq!(table_entry(&l, "y3", 2), poly(p, "y5"));
    assert_eq!(table_entry(&l, "y5", 1), poly(p, "y3^2"));
    assert!(table_entry(&l, "y5", 2).is_zero());
    assert_eq!(table_entry(&l, "y7", 4), poly(p, "y3*v8 + y7*v4"));
    let l = derived("BSpin9");
    assert_eq!(table_entry(&l, "z15", 8), poly(l.presentation(), "y7*f16 + v8*z15 + v4^2*z15"));
    let l = derived("BF4");
    let p = l.presentation();
    assert_eq!(table_entry(&l, "y15", 8), poly(p, "y23 + v4^2*y15"));
    assert_eq!(table_entry(&l, "y23", 4), poly(p, "y3*v24 + v4*y23"));
    assert_eq!(table_entry(&l, "y23", 8), poly(p, "v4^2*y23"));
    assert_eq!(table_entry(&l, "y23", 16), poly(p, "y15*v24 + v16*y23 + y3*v6^2*v24 + v4*v6^2*y23"));
    let l = derived("BDI4");
    let p = l.presentation();
    assert_eq!(table_entry(&l, "y13", 1), poly(p, "y7^2"));
    assert_eq!(table_entry(&l, "y11", 2), poly(p, "y13"));
    assert_eq!(table_entry(&l, "y7", 4), poly(p, "y11"));
    assert_eq!(table_entry(&l, "y11", 8), poly(p, "y7*v12 + v8*y11"));
    assert_eq!(table_entry(&l, "y13", 8), poly(p, "y7*v14 + v8*y13"));
    assert!(table_entry(&l, "y7", 8).is_zero());
}

#[test]
fn derive_sq_table_is_reproducible() {
    for name in ["BSpin7", "BF4"] {
        let (b, l) = (base(name), derived(name));
        assert_eq!(&derive_sq_table(&b, &l).unwrap(), l.presentation().table());
    }
}

#[test]
fn square_relation_examples() {
    let (b, l) = (base("BSpin7"), derived("BSpin7"));
    let p = l.presentation();
    assert_eq!(square(&l, &b, "y5"), poly(p, "y3^2*v4 + y3*v7"));
    assert_eq!(square(&l, &b, "y7"), poly(p, "y3^2*v8 + y7*v7"));
    let (b, l) = (base("BSpin9"), derived("BSpin9"));
    assert_eq!(square(&l, &b, "z15"), poly(l.presentation(), "v7*v8*z15 + v7*y7*f16 + y3^2*v8*f16"));
    let (b, l) = (base("BF4"), derived("BF4"));
    let p = l.presentation();
    assert_eq!(square(&l, &b, "y15"), poly(p, "v7*y23 + y3^2*v24"));
    assert_eq!(square(&l, &b, "y23"), poly(p, "y3^2*v16*v24 + v7*y15*v24 + v7*v16*y23"));
    let (b, l) = (base("BDI4"), derived("BDI4"));
    let p = l.presentation();
    assert_eq!(square(&l, &b, "y13"), poly(p, "y11*v15 + v12*y7^2"));
    assert_eq!(square(&l, &b, "y11"), poly(p, "v8*y7^2 + y7*v15"));

    let b = polynomial_x2();
    let l = derive_unchecked(&b, &LoopNames::new()).unwrap();
    assert!(square(&l, &b, "y1").is_zero());
}

#[test]
fn relations_agree_with_recomputed_squares() {
    for name in ["BSpin7", "BSpin8", "BSpin9", "BF4", "BDI4"] {
        let (b, l) = (base(name), derived(name));
        let p = l.presentation();
        for (i, role) in l.roles().iter().enumerate() {
            if let Role::Derived(_) = role {
                let r = compute_square_relation(&l, &b, i).unwrap();
                assert_eq!(p.normal_form(&r.lead.clone().into()), p.normal_form(&r.tail), "{name}");
            }
        }
    }
}

#[test]
fn eliminations() {
    let l = derived("BSpin7");
    let p = l.presentation();
    let [e] = l.eliminations() else { panic!("one elimination") };
    assert_eq!((e.generator.name.as_str(), e.source.as_str()), ("y6", "w7"));
    assert_eq!(e.value, poly(p, "y3^2"));
    let lead = Monomial::generator(p.num_generators(), index(&l, "y3"), 4);
    let r = p.relations().iter().find(|r| r.lead == lead).unwrap();
    assert_eq!(r.tail, poly(p, "y3^2*v6 + y5*v7"));

    let l = derived("BDI4");
    let p = l.presentation();
    let [e] = l.eliminations() else { panic!("one elimination") };
    assert_eq!(e.generator, Generator::new("y14", 14));
    assert_eq!(e.value, poly(p, "y7^2"));
    let lead = Monomial::generator(p.num_generators(), index(&l, "y7"), 4);
    let r = p.relations().iter().find(|r| r.lead == lead).unwrap();
    assert_eq!(r.tail, poly(p, "y13*v15 + v14*y7^2"));

    let b = polynomial_x2();
    let l = derive_loop_presentation(&b, &LoopNames::new(), 32).unwrap();
    assert!(l.eliminations().is_empty());
    let p = l.presentation();
    let names: Vec<&str> = p.generators().iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["v2", "y1"]);
    assert_eq!(p.relations().len(), 1);
    assert!(p.relations()[0].tail.is_zero());
    assert!(table_entry(&l, "y1", 1).is_zero());
}

#[test]
fn derive_errors() {
    let l = derived("BSpin7");
    assert_eq!(derive_loop_presentation(l.presentation(), &LoopNames::new(), 16), Err(DeriveError::NotPolynomial(3)));
    let one = Presentation::new("S", vec![Generator::new("t", 1)], SqTable::new(), vec![]).unwrap();
    assert_eq!(derive_unchecked(&one, &LoopNames::new()), Err(DeriveError::DegreeOne("t".into())));
    let mut names = LoopNames::new();
    names.insert("w6", "v4", "y5");
    assert_eq!(derive_unchecked(&base("BSpin7"), &names), Err(DeriveError::NameCollision("v4".into())));

    let text = loopcoh::io::corpus::entry("BSpin7").unwrap().base_text.replace("sq 4 w6 = w4*w6", "sq 4 w6 = 0");
    let corrupted = loopcoh::io::parse_presentation(&text).unwrap();
    assert!(matches!(derive_loop_presentation(&corrupted, &LoopNames::new(), 24), Err(DeriveError::BaseIncoherent(_))));
}

#[test]
fn every_relation_lead_is_a_power_of_one_derived_generator() {
    for l in all_derived() {
        let p = l.presentation();
        let derived: Vec<usize> =
            (0..p.num_generators()).filter(|&i| matches!(l.roles()[i], Role::Derived(_))).collect();
        assert_eq!(p.relations().len(), derived.len(), "{}", p.name());
        for &y in &derived {
            assert_eq!(p.relations().iter().filter(|r| r.lead.exponent(y) > 0).count(), 1);
        }
        for r in p.relations() {
            let support: Vec<usize> = r.lead.support().collect();
            assert_eq!(support.len(), 1);
            assert!(r.lead.exponent(support[0]).is_power_of_two() && r.lead.exponent(support[0]) >= 2);
        }
    }
}

#[test]
fn sigma_commutes_with_squares() {
    for name in ["BSpin7", "BSpin8", "BSpin9", "BF4", "BDI4"] {
        let (b, l) = (base(name), derived(name));
        let p = l.presentation();
        for (i, g) in b.generators().iter().enumerate() {
            let s = l.sigma(&b.generator(i)).unwrap();
            for k in 0..=g.degree + 2 {
                let lhs = p.apply_sq(k, &s).unwrap();
                let rhs = l.sigma(&b.apply_sq(k, &b.generator(i)).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{name}: Sq^{k} sigma({})", g.name);
            }
        }
    }
}

#[test]
fn sigma_is_a_derivation_up_to_degree_20() {
    for name in ["BSpin7", "BSpin8", "BSpin9", "BF4", "BDI4"] {
        let (b, l) = (base(name), derived(name));
        let p = l.presentation();
        let monomials: Vec<Monomial> = GradedBasis::new(&b, 20).iter().skip(1).map(|(_, _, m)| m.clone()).collect();
        for x in &monomials {
            for y in &monomials {
                if b.degree_of(x) + b.degree_of(y) > 20 {
                    continue;
                }
                let (xp, yp): (Poly, Poly) = (x.clone().into(), y.clone().into());
                let lhs = l.sigma(&xp.mul(&yp)).unwrap();
                let rhs = l.sigma(&xp).unwrap().mul(&l.rename(&yp)).add(&l.rename(&xp).mul(&l.sigma(&yp).unwrap()));
                assert_eq!(lhs, p.normal_form(&rhs), "{name}");
            }
        }
    }
}

#[test]
fn poincare_series_matches_the_product_formula() {
    for l in all_derived() {
        assert_eq!(poincare_series(l.presentation(), 40), l.expected_series(40), "{}", l.presentation().name());
    }
}

#[test]
fn outputs_pass_their_self_checks() {
    for l in all_derived() {
        let check = self_check(&l, 64);
        assert!(check.passed(), "{}", l.presentation().name());
    }
    let l = derived("BSpin7");
    assert!(check_adem_coherence(l.presentation(), 64).passed());
    assert!(check_confluence(l.presentation(), 64).passed());
}

#[test]
fn derivation_is_deterministic() {
    let a = derived("BF4");
    let b = derived("BF4");
    assert_eq!(a, b);
    let p = a.presentation();
    let text: Vec<String> = p.relations().iter().map(|r| format_poly(&r.tail, p)).collect();
    let again: Vec<String> = b.presentation().relations().iter().map(|r| format_poly(&r.tail, p)).collect();
    assert_eq!(text, again);
}
