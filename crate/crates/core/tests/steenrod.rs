use loopcoh::steenrod::oracle::{acts_trivially, oracle_apply, OracleError, TPoly};
use loopcoh::steenrod::{adem_pair, binom_mod2, SteenrodError};
use loopcoh::{adem_reduce, multiply, SqMonomial, SteenrodElement};
use proptest::prelude::*;

fn el(s: &str) -> SteenrodElement {
    s.parse().unwrap()
}

fn reduce(s: &str) -> String {
    adem_reduce(&el(s)).to_string()
}

#[test]
fn binomials_mod_two() {
    assert!(binom_mod2(7, 3));
    assert!(!binom_mod2(4, 2));
    for k in 0..50 {
        assert!(binom_mod2(k, 0));
    }
    assert!(!binom_mod2(3, 5));
}

#[test]
fn binomials_match_pascal() {
    let mut row = vec![1u8];
    for m in 0..64u64 {
        for n in 0..=m + 3 {
            let expected = row.get(n as usize).copied().unwrap_or(0) == 1;
            assert_eq!(binom_mod2(m, n), expected, "C({m},{n})");
        }
        let mut next = vec![1u8; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] ^ row[i];
        }
        row = next;
    }
}

#[test]
fn adem_examples() {
    assert_eq!(reduce("Sq2 Sq2"), "Sq3 Sq1");
    assert_eq!(reduce("Sq4 Sq4"), "Sq7 Sq1 + Sq6 Sq2");
    assert_eq!(reduce("Sq7 Sq8"), "Sq15");
    assert_eq!(reduce("Sq1 Sq1"), "0");
    assert_eq!(reduce("1"), "1");
    assert_eq!(reduce("Sq5 Sq2 Sq1"), "Sq5 Sq2 Sq1");
}

// Operator identities used in the loop space computations.
#[test]
fn decompositions_of_single_squares() {
    assert_eq!(reduce("Sq1 Sq2"), "Sq3");
    assert_eq!(reduce("Sq1 Sq4"), "Sq5");
    assert_eq!(reduce("Sq2 Sq4 + Sq5 Sq1"), "Sq6");
    assert_eq!(reduce("Sq1 Sq2 Sq4"), "Sq7");
    assert_eq!(reduce("Sq3 Sq4"), "Sq7");
    assert_eq!(reduce("Sq1 Sq2 Sq8"), "Sq11");
    assert_eq!(reduce("Sq5 Sq8 + Sq11 Sq2"), "Sq13");
    assert_eq!(reduce("Sq7 Sq16"), "Sq23");
}

// Identities that hold on classes killed by Sq1 or Sq2, checked modulo the
// corresponding right factor.
#[test]
fn identities_on_annihilated_classes() {
    // Sq^2 Sq^7 = Sq^9 on a class with Sq^1 u = 0.
    assert_eq!(reduce("Sq2 Sq7 + Sq9"), "Sq8 Sq1");
    // Sq^4 Sq^7 = Sq^11 on a class with Sq^2 u = 0.
    assert_eq!(reduce("Sq4 Sq7 + Sq11"), "Sq9 Sq2");
    // Sq^8 Sq^2 = Sq^4 Sq^6 + Sq^2 Sq^8 on a class with Sq^1 u = 0.
    assert_eq!(reduce("Sq8 Sq2 + Sq4 Sq6 + Sq2 Sq8"), "Sq9 Sq1");
    // Sq^8 Sq^1 = Sq^9 + Sq^2 Sq^7 exactly.
    assert_eq!(reduce("Sq8 Sq1 + Sq9 + Sq2 Sq7"), "0");
    // Sq^4 Sq^4 u = 0 when Sq^1 u = Sq^2 u = 0.
    let r = adem_reduce(&el("Sq4 Sq4"));
    assert!(r.terms().all(|m| matches!(m.exponents().last(), Some(1 | 2))));
}

#[test]
fn adem_pair_coefficients() {
    assert_eq!(adem_pair(2, 2), vec![(3, 1)]);
    assert_eq!(adem_pair(1, 1), vec![]);
    assert_eq!(adem_pair(7, 8), vec![(15, 0)]);
}

#[test]
fn multiply_examples() {
    assert_eq!(multiply(&el("Sq1"), &el("Sq2")).to_string(), "Sq3");
    assert_eq!(multiply(&el("Sq2"), &el("Sq2")).to_string(), "Sq3 Sq1");
    let e = el("Sq5 Sq1 + Sq6");
    assert_eq!(multiply(&SteenrodElement::one(), &e), e);
    assert_eq!(multiply(&e, &SteenrodElement::one()), e);
}

#[test]
fn excess_examples() {
    assert_eq!(SqMonomial::sq(15).excess(), Ok(15));
    assert_eq!(SqMonomial::new(vec![3, 1]).unwrap().excess(), Ok(2));
    assert_eq!(SqMonomial::identity().excess(), Ok(0));
    assert!(matches!(SqMonomial::new(vec![2, 2]).unwrap().excess(), Err(SteenrodError::NotAdmissible(_))));
    assert_eq!(SqMonomial::new(vec![2, 0]), Err(SteenrodError::ZeroExponent));
}

#[test]
fn text_syntax() {
    assert_eq!(el("Sq7 Sq1 + Sq6 Sq2").to_string(), "Sq7 Sq1 + Sq6 Sq2");
    assert_eq!(el("Sq2 + Sq2").to_string(), "0");
    assert_eq!(el("1").to_string(), "1");
    assert!("sq2".parse::<SteenrodElement>().is_err());
    assert!("(Sq2)".parse::<SteenrodElement>().is_err());
    assert!("Sq2 +".parse::<SteenrodElement>().is_err());
    assert!("".parse::<SteenrodElement>().is_err());
    assert_eq!(el("Sq3 Sq1").degree(), Some(4));
    assert_eq!(el("Sq3 + Sq1").degree(), None);
    assert!(!el("Sq3 + Sq1").is_homogeneous());
}

#[test]
fn oracle_examples() {
    let t1 = TPoly::variable(1, 0);
    assert_eq!(oracle_apply(&el("Sq1"), &t1, 10).unwrap(), TPoly::monomial(vec![2]));
    let t12 = TPoly::product_of_variables(2);
    assert_eq!(oracle_apply(&el("Sq2"), &t12, 10).unwrap(), TPoly::monomial(vec![2, 2]));
    assert_eq!(acts_trivially(&el("Sq2 Sq2 + Sq3 Sq1"), 8), Ok(true));
    assert_eq!(acts_trivially(&el("Sq3 Sq1"), 8), Ok(false));
    assert!(matches!(oracle_apply(&el("Sq1"), &t1, 1), Err(OracleError::Truncated { needed: 2, limit: 1 })));
}

/// Applies `e` to `t_1 ... t_d` through the oracle with enough room.
fn on_product(e: &SteenrodElement, d: usize) -> TPoly {
    let top = e.terms().map(SqMonomial::degree).max().unwrap_or(0);
    oracle_apply(e, &TPoly::product_of_variables(d), d as u32 + top).unwrap()
}

#[test]
fn adem_agrees_with_oracle_on_small_pairs() {
    for b in 1..=12u32 {
        for a in 1..2 * b {
            if a + b > 16 {
                break;
            }
            let raw = SteenrodElement::composite(&[a, b]);
            let reduced = adem_reduce(&raw);
            for d in 0..=6 {
                assert_eq!(on_product(&raw, d), on_product(&reduced, d), "Sq{a} Sq{b} on {d} variables");
            }
        }
    }
}

fn element() -> impl Strategy<Value = SteenrodElement> {
    prop::collection::vec(prop::collection::vec(1u32..=32, 0..=5), 0..=3)
        .prop_map(|ms| ms.iter().map(|m| SqMonomial::new(m.clone()).unwrap()).collect())
}

/// Elements of one small degree, for the oracle.
fn small_element(max_degree: u32) -> impl Strategy<Value = SteenrodElement> {
    (1..=max_degree)
        .prop_flat_map(|deg| prop::collection::vec(composition(deg), 1..=3).prop_map(|ms| ms.into_iter().collect()))
}

fn composition(deg: u32) -> impl Strategy<Value = SqMonomial> {
    prop::collection::vec(any::<bool>(), deg as usize - 1).prop_map(move |cuts| {
        let mut parts = Vec::new();
        let mut cur = 1;
        for c in cuts {
            if c {
                parts.push(cur);
                cur = 1;
            } else {
                cur += 1;
            }
        }
        parts.push(cur);
        SqMonomial::new(parts).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_idempotent(e in element()) {
        let r = adem_reduce(&e);
        prop_assert_eq!(adem_reduce(&r), r);
    }

    #[test]
    fn reduction_is_admissible_and_keeps_degree(m in prop::collection::vec(1u32..=32, 0..=5)) {
        let m = SqMonomial::new(m).unwrap();
        let r = adem_reduce(&m.clone().into());
        for t in r.terms() {
            prop_assert!(t.is_admissible());
            prop_assert_eq!(t.degree(), m.degree());
        }
    }

    #[test]
    fn multiplication_is_associative(a in small_element(8), b in small_element(8), c in small_element(8)) {
        prop_assert_eq!(multiply(&multiply(&a, &b), &c), multiply(&a, &multiply(&b, &c)));
        prop_assert_eq!(multiply(&SteenrodElement::one(), &a), adem_reduce(&a));
        prop_assert_eq!(multiply(&a, &SteenrodElement::one()), adem_reduce(&a));
    }

    #[test]
    fn oracle_respects_composition(a in small_element(12), b in small_element(12), d in 0usize..=8) {
        let p = TPoly::product_of_variables(d);
        let limit = d as u32 + 24;
        let inner = oracle_apply(&b, &p, limit).unwrap();
        let lhs = oracle_apply(&multiply(&a, &b), &p, limit).unwrap();
        // `inner` can be zero of no particular degree; the action is linear.
        let rhs = if inner.is_zero() { TPoly::zero(d) } else { oracle_apply(&a, &inner, limit).unwrap() };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn oracle_detects_zero(e in small_element(10)) {
        let deg = e.terms().map(SqMonomial::degree).max().unwrap_or(0);
        let zero = adem_reduce(&e).is_zero();
        prop_assert_eq!(acts_trivially(&e, deg as usize).unwrap(), zero);
    }
}
