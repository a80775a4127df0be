use std::sync::Arc;

use qclock::dsl::{
    self, check_equation, evaluate, infer_profile, negative_controls, paper_corpus, parse, parse_corpus,
    run_paper_suite, DiagramTerm, DslError, EquationCase, Generator, Node,
};
use qclock::{compose, tensor_product, EqualityMode, QuantumClock, Tensor, C64};

fn clock(w: usize) -> QuantumClock {
    QuantumClock::with_omega(w).unwrap()
}

fn close(a: &Tensor, b: &Tensor, tol: f64) -> bool {
    a.sub(b).unwrap().max_norm() <= tol
}

#[test]
fn two_token_program() {
    let t = parse("zmult ; zcomult").unwrap();
    let expected = DiagramTerm::seq(DiagramTerm::gen(Generator::ZMult), DiagramTerm::gen(Generator::ZComult));
    assert_eq!(t, expected);
}

#[test]
fn par_binds_tighter_than_seq() {
    let t = parse("(xmult * id(1)) ; xmult").unwrap();
    let Node::Seq(a, _) = &t.node else { panic!("{t:?}") };
    assert!(matches!(a.node, Node::Par(..)));
    let u = parse("xmult * id(1) ; xmult").unwrap();
    assert_eq!(t, u);
}

#[test]
fn left_associativity() {
    let t = parse("zunit ; zcomult ; zmult").unwrap();
    let Node::Seq(a, b) = &t.node else { panic!() };
    assert!(matches!(a.node, Node::Seq(..)));
    assert_eq!(**b, DiagramTerm::gen(Generator::ZMult));
}

#[test]
fn dagger_of_unit_is_counit() {
    let c = clock(5);
    let a = evaluate(&parse("dag(xunit)").unwrap(), &c, None).unwrap();
    let b = evaluate(&parse("xcounit").unwrap(), &c, None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn syntax_errors_carry_positions() {
    match parse("zmult ;\n  (xmult") {
        Err(DslError::SyntaxError { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    match parse("zmult ; frob") {
        Err(DslError::UnknownGenerator { name, line, col }) => assert_eq!((name.as_str(), line, col), ("frob", 1, 9)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse("id(1.5)"), Err(DslError::SyntaxError { .. })));
    assert!(matches!(parse("scalar(1)"), Err(DslError::SyntaxError { .. })));
    assert!(matches!(parse("zmult zmult"), Err(DslError::SyntaxError { .. })));
}

#[test]
fn profiles() {
    assert_eq!(infer_profile(&parse("zcomult").unwrap(), 4).unwrap(), (vec![4], vec![4, 4]));
    assert_eq!(infer_profile(&parse("zmult ; xcomult").unwrap(), 3).unwrap(), (vec![3, 3], vec![3, 3]));
    match infer_profile(&parse("zmult ; zmult").unwrap(), 3) {
        Err(DslError::ProfileMismatch { line, col, expected, found }) => {
            assert_eq!((line, col), (1, 1));
            assert_eq!((expected, found), (vec![3, 3], vec![3]));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(infer_profile(&parse("sysalg").unwrap(), 3), Err(DslError::UnboundSystem { .. })));
}

#[test]
fn seq_runs_left_operand_first() {
    let c = clock(4);
    let t = c.time_translation(1);
    let s = c.energy_shift(1);
    let term = parse("((tstate(1) * id(1)) ; xmult) ; ((estate(1) * id(1)) ; zmult)").unwrap();
    let got = evaluate(&term, &c, None).unwrap();
    // S ∘ T, not T ∘ S
    assert!(close(&got, &compose(&s, &t).unwrap(), 1e-12));
    assert!(!close(&got, &compose(&t, &s).unwrap(), 1e-6));
}

#[test]
fn quasi_speciality_term() {
    let c = clock(3);
    let got = evaluate(&parse("dag(xmult) ; xmult").unwrap(), &c, None).unwrap();
    let three = Tensor::identity(3).unwrap().scale(C64::new(3.0, 0.0));
    assert!(close(&got, &three, 1e-12));
}

#[test]
fn plane_wave_term() {
    let got = evaluate(&parse("estate(1)").unwrap(), &clock(4), None).unwrap();
    let expected = Tensor::state(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)]).unwrap();
    assert!(close(&got, &expected, 1e-12));
}

#[test]
fn cup_is_comult_of_unit() {
    for w in 1..=8 {
        let c = clock(w);
        let a = evaluate(&parse("cup").unwrap(), &c, None).unwrap();
        let b = evaluate(&parse("zunit ; zcomult").unwrap(), &c, None).unwrap();
        assert!(close(&a, &b, 0.0));
    }
}

#[test]
fn functoriality() {
    let c = clock(3);
    let a = parse("xmult ; antipode").unwrap();
    let b = parse("estate(2) * zcomult").unwrap();
    let ea = evaluate(&a, &c, None).unwrap();
    let eb = evaluate(&b, &c, None).unwrap();
    let par = evaluate(&DiagramTerm::par(a.clone(), b.clone()), &c, None).unwrap();
    assert!(close(&par, &tensor_product(&ea, &eb), 1e-14));
    let dag = evaluate(&DiagramTerm::dag(a.clone()), &c, None).unwrap();
    assert!(close(&dag, &ea.dagger(), 1e-14));
    let s = parse("zcomult ; (antipode * estate(1) * id(1)) ; (xmult * id(1))").unwrap();
    let es = evaluate(&s, &c, None).unwrap();
    let ds = evaluate(&DiagramTerm::dag(s), &c, None).unwrap();
    assert!(close(&ds, &es.dagger(), 1e-12));
}

#[test]
fn corpus_round_trips_through_printer() {
    for case in paper_corpus().into_iter().chain(negative_controls()) {
        for side in [case.parse_lhs().unwrap(), case.parse_rhs().unwrap()] {
            let printed = side.to_string();
            assert_eq!(parse(&printed).unwrap(), side, "{printed}");
        }
    }
}

#[test]
fn printer_keeps_right_nesting() {
    for src in ["zunit ; (zcomult ; zmult)", "id(1) * (swap * cap)", "(zunit ; zcounit) * antipode"] {
        let t = parse(src).unwrap();
        assert_eq!(t.to_string(), src);
        assert_eq!(parse(&t.to_string()).unwrap(), t);
    }
    let scalar = parse("scalar(0.1, -2.5e-3)").unwrap();
    assert_eq!(parse(&scalar.to_string()).unwrap(), scalar);
}

#[test]
fn corpus_names_are_unique_and_anchored() {
    let cases = paper_corpus();
    assert!(cases.len() >= 20);
    let mut names: Vec<_> = cases.iter().map(|c| c.name.clone()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), cases.len());
    assert!(cases.iter().all(|c| !c.anchor.is_empty()));
}

#[test]
fn paper_suite_passes_small_clocks() {
    for w in [1, 2, 6] {
        for (name, report) in run_paper_suite(&clock(w), 1e-10) {
            assert!(report.equal, "ω={w} {name}: {report:?}");
        }
    }
}

#[test]
fn quasi_speciality_scalar_is_omega() {
    let case = paper_corpus().into_iter().find(|c| c.name == "quasi-special-x").unwrap();
    for w in 1..=5 {
        let r = check_equation(&case, &clock(w), None, 1e-10).unwrap();
        assert!((r.lambda.unwrap() - C64::new(w as f64, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn negative_controls_fail() {
    let c = clock(3);
    for case in negative_controls() {
        assert!(!check_equation(&case, &c, None, 1e-10).unwrap().equal, "{}", case.name);
    }
}

#[test]
fn corpus_file_format() {
    let src = "# comment\n#@ label one\na : zunit == zunit # trailing\n\nb : xcomult ; xmult == id(1) [scalar]\n";
    let cases = parse_corpus(src).unwrap();
    assert_eq!(cases.len(), 2);
    assert_eq!(cases[0].anchor, "label one");
    assert_eq!(cases[1].mode, EqualityMode::UpToGlobalScalar);
    match parse_corpus("bad : zmult == (zmult") {
        Err(DslError::SyntaxError { line: 1, col, .. }) => assert!(col > 10),
        other => panic!("{other:?}"),
    }
    assert!(parse_corpus("no equation here").is_err());
}

#[test]
fn mismatched_sides_are_reported() {
    let case = EquationCase::new("m", "zmult", "zcomult", EqualityMode::Strict);
    assert!(matches!(check_equation(&case, &clock(2), None, 1e-10), Err(DslError::ProfileMismatch { .. })));
}

#[test]
fn system_generators_need_binding() {
    let case = EquationCase::new("s", "sysid", "sysid", EqualityMode::Strict);
    assert!(matches!(check_equation(&case, &clock(2), None, 1e-10), Err(DslError::UnboundSystem { .. })));
    let c = clock(3);
    let sys = dsl::default_system(&c);
    assert!(check_equation(&case, &c, Some(&sys), 1e-10).unwrap().equal);
    let alt = "sysdim-id";
    assert_eq!(parse(alt).unwrap(), parse("sysid").unwrap());
    let other = qclock::DynamicalSystem::clock_self_system(Arc::new(clock(2)));
    assert_eq!(check_equation(&case, &c, Some(&other), 1e-10), Err(DslError::ClockMismatch));
}
