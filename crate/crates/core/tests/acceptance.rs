//! Acceptance checks, one PASS/FAIL line each. Run with
//! `cargo test -p loopcoh --test acceptance`.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{all_presentations, base, derived, poly};
use loopcoh::algebra::checks::{check_adem_coherence_with, check_confluence, check_instability_with};
use loopcoh::algebra::{ActionTable, GradedBasis};
use loopcoh::io::{corpus, parse_presentation};
use loopcoh::loops::{compute_square_relation, derive_loop_presentation};
use loopcoh::steenrod::oracle::{oracle_apply, TPoly};
use loopcoh::{adem_reduce, Monomial, Poly, Presentation, SqMonomial, SteenrodElement};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_reproduction() -> Outcome {
    let start = Instant::now();
    for e in &corpus::CORPUS {
        let b = e.base().map_err(|err| format!("{}: {err}", e.base_file))?;
        let l = derive_loop_presentation(b.presentation(), &b.metadata.names, 64)
            .map_err(|err| format!("{}: {err}", e.name))?;
        let golden = e.golden().map_err(|err| format!("{}: {err}", e.golden_file))?;
        let diffs = corpus::compare_golden(&l, &golden);
        ensure(diffs.is_empty(), || format!("{}: {}", e.name, diffs.join("; ")))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:.1?}"))?;
    Ok(format!("5 algebras in {t:.1?}"))
}

fn displayed_identities() -> Outcome {
    let mut count = 0;
    let mut check = |what: &str, got: Poly, want: Poly| {
        count += 1;
        ensure(got == want, || what.to_string())
    };

    let b7 = base("BSpin7");
    let l7 = derived("BSpin7");
    let p = l7.presentation();
    let y = |l: &loopcoh::LoopPresentation, n: &str| l.presentation().generator_index(n).unwrap();
    check("Sq^4 y5", p.action_on_generator(y(&l7, "y5"), 4), poly(p, "y3*v6 + y5*v4"))?;
    let r = compute_square_relation(&l7, &b7, y(&l7, "y5")).map_err(|e| e.to_string())?;
    check("y5^2", r.tail, poly(p, "y3^2*v4 + y3*v7"))?;
    check("y5^2 reduced", p.normal_form(&poly(p, "y5^2")), poly(p, "y3^2*v4 + y3*v7"))?;
    check("sigma(w4 w6)", l7.sigma(&poly(&b7, "w4*w6")).unwrap(), poly(p, "y3*v6 + v4*y5"))?;
    check("Sq^6 w7", b7.apply_sq(6, &poly(&b7, "w7")).unwrap(), poly(&b7, "w6*w7"))?;

    let b9 = base("BSpin9");
    let l9 = derived("BSpin9");
    let p = l9.presentation();
    check("Sq^8 z15", p.action_on_generator(y(&l9, "z15"), 8), poly(p, "y7*f16 + v8*z15 + v4^2*z15"))?;
    let r = compute_square_relation(&l9, &b9, y(&l9, "z15")).map_err(|e| e.to_string())?;
    check("z15^2", r.tail, poly(p, "v7*v8*z15 + v7*y7*f16 + y3^2*v8*f16"))?;
    check("Sq^4 (w4^2 w7)", b9.apply_sq(4, &poly(&b9, "w4^2*w7")).unwrap(), poly(&b9, "w4^3*w7 + w6^2*w7"))?;
    let s = b9.apply_sq(2, &poly(&b9, "w4*w6*w7")).unwrap();
    check("Sq^2 (w4 w6 w7)", s.clone(), poly(&b9, "w6^2*w7"))?;
    check("sigma of that payload", l9.sigma(&s).unwrap(), poly(p, "v6^2*y3^2"))?;
    check("Sq^15 e16", b9.apply_sq(15, &poly(&b9, "e16")).unwrap(), poly(&b9, "w7*w8*e16"))?;

    let bf = base("BF4");
    let lf = derived("BF4");
    let p = lf.presentation();
    check(
        "Sq^16 y23",
        p.action_on_generator(y(&lf, "y23"), 16),
        poly(p, "v24*y15 + v16*y23 + y3*v6^2*v24 + v4*v6^2*y23"),
    )?;
    let r = compute_square_relation(&lf, &bf, y(&lf, "y23")).map_err(|e| e.to_string())?;
    check("y23^2", r.tail, poly(p, "y3^2*v16*v24 + v7*y15*v24 + v7*v16*y23"))?;
    let r = compute_square_relation(&lf, &bf, y(&lf, "y15")).map_err(|e| e.to_string())?;
    check("y15^2", r.tail, poly(p, "v7*y23 + v24*y3^2"))?;
    check("Sq^23 x24", bf.apply_sq(23, &poly(&bf, "x24")).unwrap(), poly(&bf, "x7*x16*x24"))?;

    let bd = base("BDI4");
    let ld = derived("BDI4");
    let p = ld.presentation();
    let r = compute_square_relation(&ld, &bd, y(&ld, "y11")).map_err(|e| e.to_string())?;
    check("y11^2", r.tail, poly(p, "v8*y7^2 + y7*v15"))?;
    let r = compute_square_relation(&ld, &bd, y(&ld, "y13")).map_err(|e| e.to_string())?;
    check("y13^2", r.tail, poly(p, "y11*v15 + v12*y7^2"))?;
    check("y7^4", p.normal_form(&poly(p, "y7^4")), poly(p, "y13*v15 + v14*y7^2"))?;
    check("Sq^11 x12", bd.apply_sq(11, &poly(&bd, "x12")).unwrap(), poly(&bd, "x8*x15"))?;

    let reduce = |s: &str| adem_reduce(&s.parse::<SteenrodElement>().unwrap());
    let el = |s: &str| s.parse::<SteenrodElement>().unwrap();
    let mut algebra = |what: &str, got: SteenrodElement, want: SteenrodElement| {
        count += 1;
        ensure(got == want, || format!("{what}: {got}"))
    };
    algebra("Sq2 Sq2", reduce("Sq2 Sq2"), el("Sq3 Sq1"))?;
    algebra("Sq4 Sq4", reduce("Sq4 Sq4"), el("Sq7 Sq1 + Sq6 Sq2"))?;
    algebra("Sq7 Sq8", reduce("Sq7 Sq8"), el("Sq15"))?;
    algebra("Sq6", reduce("Sq2 Sq4 + Sq5 Sq1"), el("Sq6"))?;
    algebra("Sq13", reduce("Sq5 Sq8 + Sq11 Sq2"), el("Sq13"))?;
    Ok(format!("{count} identities"))
}

fn verify_at(p: &Presentation, bound: u32) -> bool {
    let table = ActionTable::new(p, bound);
    check_adem_coherence_with(&table).passed()
        && check_instability_with(&table).passed()
        && check_confluence(p, bound).passed()
}

fn adem_coherence() -> Outcome {
    let start = Instant::now();
    for p in all_presentations() {
        ensure(verify_at(p, 64), || format!("{} fails at 64", p.name()))?;
    }
    let text = corpus::entry("BSpin7").unwrap().base_text.replace("sq 4 w6 = w4*w6", "sq 4 w6 = 0");
    let corrupted = parse_presentation(&text).map_err(|e| e.to_string())?;
    let report = check_adem_coherence_with(&ActionTable::new(&corrupted, 64));
    let w6 = Monomial::generator(4, 1, 1);
    let found = report
        .violations
        .iter()
        .any(|v| v.monomial == w6 && v.a == 2 && v.b == 4 && v.lhs.is_zero() && v.rhs == poly(&corrupted, "w6^2"));
    ensure(found, || "corrupted fixture: Sq^2 Sq^4 w6 violation not reported".into())?;
    Ok(format!("10 presentations clean, corrupted fixture rejected, {:.1?}", start.elapsed()))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for b in 1..24u32 {
        for a in 1..(2 * b).min(25 - b) {
            let raw = SteenrodElement::composite(&[a, b]);
            let reduced = adem_reduce(&raw);
            for d in 0..=8usize {
                let t = TPoly::product_of_variables(d);
                let limit = d as u32 + a + b;
                let lhs = oracle_apply(&raw, &t, limit).map_err(|e| e.to_string())?;
                let rhs = oracle_apply(&reduced, &t, limit).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("Sq{a} Sq{b} on t1..t{d}"))?;
            }
            ensure(reduced.terms().all(SqMonomial::is_admissible), || format!("Sq{a} Sq{b} not admissible"))?;
            pairs += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:.1?}"))?;
    Ok(format!("{pairs} pairs in {t:.1?}"))
}

fn property_suites() -> Outcome {
    let mut checked = 0usize;
    for p in all_presentations() {
        let basis = GradedBasis::new(p, 20);
        let elements: Vec<(u32, Poly)> = basis.iter().map(|(d, _, m)| (d, Poly::from(m.clone()))).collect();
        for (d, e) in &elements {
            let name = p.name();
            ensure(p.apply_sq(*d, e).unwrap() == p.normal_form(&e.mul(e)), || format!("{name}: top square"))?;
            for k in d + 1..=d + 4 {
                ensure(p.apply_sq(k, e).unwrap().is_zero(), || format!("{name}: Sq^{k} above degree"))?;
            }
            let s1 = p.apply_sq(1, e).unwrap();
            ensure(p.apply_sq(1, &s1).unwrap().is_zero(), || format!("{name}: Sq1 Sq1"))?;
            ensure(p.normal_form(&p.normal_form(e)) == p.normal_form(e), || format!("{name}: normal form"))?;
            checked += 1;
        }
        // Pairwise product laws on the basis.
        for (i, (d1, e)) in elements.iter().enumerate() {
            for (d2, f) in &elements[i..] {
                if d1 + d2 > 20 {
                    continue;
                }
                let ef = p.normal_form(&e.mul(f));
                let total = p.normal_form(&p.total_square(e).mul(&p.total_square(f)));
                ensure(p.total_square(&ef) == total, || format!("{}: total square", p.name()))?;
                let leibniz = p.apply_sq(1, e).unwrap().mul(f).add(&e.mul(&p.apply_sq(1, f).unwrap()));
                ensure(p.apply_sq(1, &ef).unwrap() == p.normal_form(&leibniz), || {
                    format!("{}: Sq1 derivation", p.name())
                })?;
            }
        }
    }
    for name in ["BSpin7", "BSpin8", "BSpin9", "BF4", "BDI4"] {
        let (b, l) = (base(name), derived(name));
        let monomials: Vec<Poly> = GradedBasis::new(&b, 20).iter().skip(1).map(|(_, _, m)| m.clone().into()).collect();
        for x in &monomials {
            for z in &monomials {
                if b.degree_of(x.terms().next().unwrap()) + b.degree_of(z.terms().next().unwrap()) > 20 {
                    continue;
                }
                let lhs = l.sigma(&x.mul(z)).unwrap();
                let rhs = l.sigma(x).unwrap().mul(&l.rename(z)).add(&l.rename(x).mul(&l.sigma(z).unwrap()));
                ensure(lhs == l.presentation().normal_form(&rhs), || format!("{name}: sigma derivation law"))?;
            }
        }
    }
    Ok(format!("{checked} basis elements over 10 presentations"))
}

fn poincare_certification() -> Outcome {
    for l in common::all_derived() {
        let p = l.presentation();
        let got = loopcoh::algebra::poincare_series(p, 40);
        let want = l.expected_series(40);
        if let Some(d) = (0..=40).find(|&d| got[d] != want[d]) {
            return Err(format!("{} degree {d}: {} != {}", p.name(), got[d], want[d]));
        }
    }
    Ok("5 presentations to degree 40".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 6] = [
        ("golden reproduction", golden_reproduction),
        ("displayed identities", displayed_identities),
        ("adem coherence at bound 64", adem_coherence),
        ("oracle equivalence", oracle_equivalence),
        ("property suites to degree 20", property_suites),
        ("poincare certification to degree 40", poincare_certification),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
