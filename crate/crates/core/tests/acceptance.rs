//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test -p gp-core --test acceptance -- --nocapture` to see
//! the per-criterion summary.

mod common;

use std::time::Instant;

use gp_core::certificates::{sequence_certificate, verify_certificate};
use gp_core::engine::{is_identity_in_product, reduce, weight_of_sequence};
use gp_core::fixtures;
use gp_core::isofunctions::{eval_f, g_of, FunctionClass};
use gp_core::thue::{check_almost_confluence, check_huet_criterion, verify_resolution_cases, BoundedUniverse};
use gp_core::words::{alpha, beta};

use common::*;

/// Word-problem soundness and completeness against the 4-element table.
#[test]
fn criterion_1_word_problem_matches_klein_table() {
    let started = Instant::now();
    let (p, oracles) = fixtures::f1();
    let klein = KleinTable::new(&p);
    let letters: Vec<_> = p.all_letters().collect();
    let words = all_letter_words(&letters, 10);
    let mut checked = 0usize;
    for w in &words {
        assert_eq!(
            is_identity_in_product(w, &p, &oracles).unwrap(),
            klein.is_identity(w),
            "disagreement on {}",
            p.render_letters(w)
        );
        checked += 1;
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5s");
    println!(
        "criterion 1 (word problem vs Klein table): PASS ({checked} words, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// Every identity word of small norm admits a complete reduction sequence.
#[test]
fn criterion_2_complete_reduction_for_null_words() {
    let (p1, o1) = fixtures::f1();
    let klein = KleinTable::new(&p1);
    let mut nulls = 0usize;
    for w in all_syllable_words(&p1, 6) {
        if klein.is_identity(&beta(&w)) {
            nulls += 1;
            let seq = reduce(&w, &p1, &o1).unwrap();
            assert!(
                seq.is_some_and(|s| s.is_complete()),
                "no complete sequence for {}",
                p1.render_word(&w)
            );
        }
    }
    let (p3, o3) = fixtures::f3();
    for w in all_syllable_words(&p3, 6) {
        if racg_is_identity(&p3, &beta(&w)) {
            nulls += 1;
            let seq = reduce(&w, &p3, &o3).unwrap();
            assert!(
                seq.is_some_and(|s| s.is_complete()),
                "no complete sequence for {}",
                p3.render_word(&w)
            );
        }
    }
    println!("criterion 2 (complete reduction for null words): PASS ({nulls} null words)");
}

/// Emitted certificates verify and realize the `g(n) + n^2` area bound.
#[test]
fn criterion_3_certificates_meet_the_isoperimetric_bound() {
    let started = Instant::now();
    let (p, oracles) = fixtures::f1();
    let klein = KleinTable::new(&p);
    let f = p.f().clone();
    assert_eq!(f, FunctionClass::Polynomial(2));
    let letters: Vec<_> = p.all_letters().collect();
    let mut certified = 0usize;
    for w in all_letter_words(&letters, 10) {
        if !klein.is_identity(&w) {
            continue;
        }
        let n = w.len() as u64;
        let seq = reduce(&alpha(&p, &w), &p, &oracles)
            .unwrap()
            .expect("null word must reduce");
        let cert = sequence_certificate(&seq, &p, &oracles).unwrap();
        assert!(
            verify_certificate(&cert, &p).unwrap(),
            "certificate fails for {}",
            p.render_letters(&w)
        );
        let weight = weight_of_sequence(&seq, &p, &oracles, &f).unwrap();
        let bound = g_of(&f, n).unwrap() + n * n;
        assert!(
            (cert.items.len() as u64) <= weight && weight <= bound,
            "{} items / weight {weight} exceed bound {bound} for {}",
            cert.items.len(),
            p.render_letters(&w)
        );
        certified += 1;
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30s");
    println!(
        "criterion 3 (certified area within g(n)+n^2): PASS ({certified} certificates, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// Reduction weight stays within `‖W‖² + g(‖W‖)` on both fixtures.
#[test]
fn criterion_4_weight_bound() {
    let mut checked = 0usize;
    for (p, oracles) in [fixtures::f1(), fixtures::f3()] {
        let f = p.f().clone();
        for w in all_syllable_words(&p, 8) {
            let null = racg_is_identity(&p, &beta(&w));
            let seq = reduce(&w, &p, &oracles).unwrap();
            assert_eq!(seq.is_some(), null, "decision mismatch on {}", p.render_word(&w));
            if let Some(seq) = seq {
                let n = w.norm() as u64;
                let weight = weight_of_sequence(&seq, &p, &oracles, &f).unwrap();
                let bound = n * n + g_of(&f, n).unwrap();
                assert!(
                    weight <= bound,
                    "weight {weight} exceeds {bound} for {}",
                    p.render_word(&w)
                );
                checked += 1;
            }
        }
    }
    println!("criterion 4 (weight within norm^2 + g(norm)): PASS ({checked} null words)");
}

/// Every certificate produced for the criterion 2 and 3 populations passes
/// the pure free-group verifier.
#[test]
fn criterion_5_certificate_soundness() {
    let mut verified = 0usize;
    for (p, oracles) in [fixtures::f1(), fixtures::f3()] {
        for w in all_syllable_words(&p, 6) {
            if let Some(seq) = reduce(&w, &p, &oracles).unwrap() {
                let cert = sequence_certificate(&seq, &p, &oracles).unwrap();
                assert!(
                    verify_certificate(&cert, &p).unwrap(),
                    "unsound certificate for {}",
                    p.render_word(&w)
                );
                verified += 1;
            }
        }
    }
    let (p, oracles) = fixtures::f1();
    let letters: Vec<_> = p.all_letters().collect();
    for w in all_letter_words(&letters, 10) {
        if let Some(seq) = reduce(&alpha(&p, &w), &p, &oracles).unwrap() {
            let cert = sequence_certificate(&seq, &p, &oracles).unwrap();
            assert!(
                verify_certificate(&cert, &p).unwrap(),
                "unsound certificate for {}",
                p.render_letters(&w)
            );
            verified += 1;
        }
    }
    println!("criterion 5 (certificate soundness): PASS ({verified} certificates)");
}

/// Bounded almost-confluence, the critical-peak criterion, and the six
/// resolution cases.
#[test]
fn criterion_6_thue_system_checks() {
    let started = Instant::now();
    for (name, fixture) in [
        ("F1", fixtures::f1()),
        ("F2", fixtures::f2()),
        ("F3", fixtures::f3()),
    ] {
        let (p, oracles) = fixture;
        let u = BoundedUniverse::new(&p, &oracles, 6, 2).unwrap();
        let ac = check_almost_confluence(&u, 3);
        assert!(
            ac.is_clean(),
            "{name}: almost-confluence counterexamples {:?}",
            ac.counterexamples
        );
        let huet = check_huet_criterion(&u, 3);
        assert!(
            huet.is_clean(),
            "{name}: critical-peak counterexamples {:?}",
            huet.counterexamples
        );
    }
    let (p, oracles) = fixtures::f1();
    let u = BoundedUniverse::new(&p, &oracles, 7, 2).unwrap();
    let reports = verify_resolution_cases(&u).unwrap();
    assert_eq!(reports.len(), 6);
    for r in &reports {
        assert!(r.instances >= 1, "case {} has no instances", r.case_id);
        assert!(
            r.failures.is_empty(),
            "case {} failures: {:?}",
            r.case_id,
            r.failures
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60s");
    println!(
        "criterion 6 (almost confluence, peaks, resolution cases): PASS ({:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// The dynamic program for `g` is the exact composition maximum and agrees
/// with the closed forms.
#[test]
fn criterion_7_g_function_properties() {
    fn brute_force_g(f: &FunctionClass, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        let mut best = 0;
        for mask in 0u64..(1 << (n - 1)) {
            let mut total = 0u64;
            let mut part = 1u64;
            for gap in 0..n - 1 {
                if mask & (1 << gap) != 0 {
                    total += eval_f(f, part).unwrap();
                    part = 1;
                } else {
                    part += 1;
                }
            }
            total += eval_f(f, part).unwrap();
            best = best.max(total);
        }
        best
    }

    let classes = [
        FunctionClass::Polynomial(2),
        FunctionClass::Polynomial(3),
        FunctionClass::Exponential,
        FunctionClass::Tabulated(vec![3, 4]),
    ];
    for f in &classes {
        for n in 0..=16 {
            assert_eq!(g_of(f, n).unwrap(), brute_force_g(f, n), "class {f}, n={n}");
        }
    }
    assert_eq!(g_of(&FunctionClass::Tabulated(vec![3, 4]), 2).unwrap(), 6);
    for f in [
        FunctionClass::Polynomial(2),
        FunctionClass::Polynomial(3),
        FunctionClass::Exponential,
    ] {
        for n in 1..=40 {
            assert_eq!(g_of(&f, n).unwrap(), eval_f(&f, n).unwrap(), "class {f}, n={n}");
        }
    }
    println!("criterion 7 (g exactness and closed forms): PASS");
}

/// Free products and direct products are the edge cases of the graph
/// construction; the solver matches their dedicated normal-form oracles.
#[test]
fn criterion_8_degenerate_graphs() {
    let (p2, o2) = fixtures::f2();
    let letters: Vec<_> = p2.all_letters().collect();
    let mut checked = 0usize;
    for w in all_letter_words(&letters, 10) {
        assert_eq!(
            is_identity_in_product(&w, &p2, &o2).unwrap(),
            free_product_is_identity(&p2, &w),
            "free-product disagreement on {}",
            p2.render_letters(&w)
        );
        checked += 1;
    }
    let (p1, o1) = fixtures::f1();
    let letters: Vec<_> = p1.all_letters().collect();
    for w in all_letter_words(&letters, 10) {
        assert_eq!(
            is_identity_in_product(&w, &p1, &o1).unwrap(),
            direct_product_is_identity(&p1, &w),
            "direct-product disagreement on {}",
            p1.render_letters(&w)
        );
        checked += 1;
    }
    println!("criterion 8 (free and direct product oracles): PASS ({checked} words)");
}
