use finmono_core::trace_engine::{empirical_moments, trace_field_check};
use finmono_core::{FieldSpec, TraceEngine};

#[test]
fn hasse_bound() {
    for (p, r, d) in [(3u32, 1u32, 4u64), (3, 3, 7), (5, 1, 7), (5, 2, 7), (5, 3, 9), (7, 2, 8), (11, 2, 3)] {
        let field = FieldSpec::build(p, r).unwrap();
        let engine = TraceEngine::new(&field, d).unwrap();
        let bound = (d - 1) as f64 * (field.q() as f64).sqrt() + 1e-9;
        for t in field.elements().skip(1) {
            for (re, im) in engine.trace_f(&t).embeddings() {
                assert!((re * re + im * im).sqrt() <= bound, "q={} D={d} t={:?}", field.q(), t.coeffs());
            }
        }
    }
}

#[test]
fn total_trace_is_minus_q() {
    for (p, r, d) in [(5u32, 1u32, 7u64), (5, 2, 7), (5, 4, 7), (3, 5, 4), (7, 3, 4)] {
        let field = FieldSpec::build(p, r).unwrap();
        let engine = TraceEngine::new(&field, d).unwrap();
        let total = field
            .elements()
            .map(|t| engine.trace_f(&t))
            .reduce(|a, b| &a + &b)
            .unwrap();
        assert!(total.is_rational());
        assert_eq!(total, finmono_core::CycloInt::from_int(p, -(field.q() as i64)));
    }
}

#[test]
fn engine_matches_definition() {
    let field = FieldSpec::build(3, 3).unwrap();
    let engine = TraceEngine::new(&field, 5).unwrap();
    for t in field.elements() {
        let mut counts = vec![0u64; 3];
        for x in field.elements() {
            let y = field.add(&field.pow_u64(&x, 5), &field.mul(&t, &x));
            counts[field.absolute_trace(&y) as usize] += 1;
        }
        let expected = -finmono_core::CycloInt::from_exponent_counts(3, &counts);
        assert_eq!(engine.trace_f(&t), expected);
    }
}

#[test]
fn twisted_values_are_conjugation_stable() {
    // G(t) lies in Q(√5); its conjugate is the twist by the other square root
    let field = FieldSpec::build(5, 2).unwrap();
    let engine = TraceEngine::new(&field, 7).unwrap();
    for t in field.elements() {
        let g = engine.trace_g(&t).unwrap();
        let q = g.to_quadratic().unwrap();
        assert_eq!(engine.trace_g_quadratic(&t).unwrap(), q);
        let conj = q.conj().to_cyclo().unwrap();
        assert_eq!(conj, g.galois(2).unwrap());
    }
}

#[test]
fn trace_field_over_small_fields() {
    for r in 1..=2 {
        let field = FieldSpec::build(5, r).unwrap();
        let rep = trace_field_check(&field, 7).unwrap();
        assert!(rep.all_real);
        assert!(rep.irrational_witness.is_some());
    }
    let f = FieldSpec::build(5, 1).unwrap();
    assert!(trace_field_check(&f, 6).is_err());
}

#[test]
fn empirical_zeroth_moment_is_one() {
    let field = FieldSpec::build(5, 3).unwrap();
    let m = empirical_moments(&field, 7, 2).unwrap();
    assert_eq!(m[0].exact, finmono_core::QuadReal::one(5));
    assert!((m[2].approx - 1.0).abs() < 0.5);
}

#[test]
fn empirical_moments_conjugation_consistent() {
    for r in 1..=3 {
        let field = FieldSpec::build(5, r).unwrap();
        let engine = TraceEngine::new(&field, 7).unwrap();
        let m = empirical_moments(&field, 7, 3).unwrap();
        // the other square root of 5: apply σ_2 to every G(t) before averaging
        let conj_values: Vec<_> = field
            .elements()
            .map(|t| engine.trace_g(&t).unwrap().galois(2).unwrap().to_quadratic().unwrap())
            .collect();
        let mc = finmono_core::trace_engine::EmpiricalMoment::from_values(&conj_values, 5, 3);
        for n in 0..=3 {
            assert_eq!(mc[n].exact, m[n].exact.conj(), "q={} n={n}", field.q());
            assert!((&m[n].exact + &mc[n].exact).is_rational());
        }
    }
}
