//! End-to-end checks of the PEP pipeline: build -> standard form -> solve,
//! against closed-form bounds and against reference optima computed with an
//! independent SDP solver.

use dcapep::bounds::{self, BoundRequest, Theorem};
use dcapep::dca::{run, StopKind, StopRule};
use dcapep::instances::make_tightness_instance;
use dcapep::params::FunctionClassParams;
use dcapep::pep::{
    build, export_sdpa, feasible_point_from_trace, import_sdpa, solve_default, PepKind,
    PepSpec, PepStatus,
};
use nalgebra::DVector;

fn sm(mu: f64, l: f64) -> FunctionClassParams {
    FunctionClassParams::smooth(mu, l).unwrap()
}

fn ns(mu: f64) -> FunctionClassParams {
    FunctionClassParams::nonsmooth(mu).unwrap()
}

#[test]
fn gradient_gap_pep_matches_tightness_value() {
    // worst case of the gap^2 for L1 = 8, L2 = inf, N = 3 is exactly 4
    let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 8.0), ns(0.0), 3, 1.0).unwrap();
    let p = build(&spec).unwrap();
    let sol = solve_default(&p).unwrap();
    assert!(sol.status.converged(), "status = {:?}", sol.status);
    assert!(
        (sol.objective_value - 4.0).abs() < 1e-5,
        "pep value = {}",
        sol.objective_value
    );
}

#[test]
fn gradient_gap_pep_matches_reference_values() {
    // reference optima from an independent conic solver
    let cases = [
        (0.0, 2.0, 0.5, f64::INFINITY, 2, 1.0434782609f64),
        (0.3, 2.0, 0.9, 1.5, 2, 0.6131147541),
        (0.4, 1.0, 0.2, 2.0, 2, 0.4585987261),
        (0.5, 3.0, 0.0, 1.0, 2, 0.4761904762),
    ];
    for (mu1, l1, mu2, l2, n, reference) in cases {
        let p2 = if l2.is_infinite() { ns(mu2) } else { sm(mu2, l2) };
        let spec = PepSpec::new(PepKind::GradientGap, sm(mu1, l1), p2, n, 1.0).unwrap();
        let sol = solve_default(&build(&spec).unwrap()).unwrap();
        assert!(sol.status.converged(), "mu1={mu1} l1={l1}: {:?}", sol.status);
        assert!(
            (sol.objective_value - reference).abs() < 2e-5,
            "mu1={mu1} l1={l1} mu2={mu2} l2={l2}: {} vs {reference}",
            sol.objective_value
        );
    }
}

#[test]
fn model_decrease_pep_matches_reference_values() {
    let cases = [
        (0.0, 2.0, 1.0, f64::INFINITY, 2, 0.3333333333f64),
        (0.5, f64::INFINITY, 0.0, 1.0, 3, 0.25),
        (0.0, f64::INFINITY, 0.0, f64::INFINITY, 4, 0.25),
        (0.2, 3.0, 0.5, f64::INFINITY, 3, 0.2857142857),
        (0.3, 2.0, 0.6, 3.0, 2, 0.3595657),
    ];
    for (mu1, l1, mu2, l2, n, reference) in cases {
        let p1 = if l1.is_infinite() { ns(mu1) } else { sm(mu1, l1) };
        let p2 = if l2.is_infinite() { ns(mu2) } else { sm(mu2, l2) };
        let spec = PepSpec::new(PepKind::ModelDecrease, p1, p2, n, 1.0).unwrap();
        let sol = solve_default(&build(&spec).unwrap()).unwrap();
        assert!(sol.status.converged(), "mu1={mu1} l1={l1}: {:?}", sol.status);
        assert!(
            (sol.objective_value - reference).abs() < 2e-5,
            "mu1={mu1} l1={l1} mu2={mu2} l2={l2}: {} vs {reference}",
            sol.objective_value
        );
    }
}

#[test]
fn one_step_ratio_pep_matches_reference_values() {
    let cases = [
        (0.0, 2.0, 0.0, f64::INFINITY, 1.0, 0.5f64),
        (0.0, 2.0, 0.0, 3.0, 1.0, 0.375),
        (0.2, 2.0, 0.1, 3.0, 1.0, 0.3681213),
    ];
    for (mu1, l1, mu2, l2, eta, reference) in cases {
        let p2 = if l2.is_infinite() { ns(mu2) } else { sm(mu2, l2) };
        let spec = PepSpec::new(PepKind::PlOneStep, sm(mu1, l1), p2, 1, 1.0)
            .unwrap()
            .with_eta(eta)
            .unwrap();
        let sol = solve_default(&build(&spec).unwrap()).unwrap();
        assert!(sol.status.converged(), "l1={l1} l2={l2}: {:?}", sol.status);
        assert!(
            (sol.objective_value - reference).abs() < 2e-5,
            "l1={l1} l2={l2}: {} vs {reference}",
            sol.objective_value
        );
    }
}

#[test]
fn pep_optimum_never_exceeds_closed_form_bound() {
    let grid = [
        (0.0, 1.0, 0.0, f64::INFINITY, 1),
        (0.0, 8.0, 0.4, f64::INFINITY, 2),
        (0.3, 2.0, 0.9, 1.5, 3),
        (0.4, 1.0, 0.2, 2.0, 2),
        (0.5, 3.0, 0.0, 1.0, 4),
        (0.0, f64::INFINITY, 0.3, 1.0, 2),
    ];
    for (mu1, l1, mu2, l2, n) in grid {
        let p1 = if l1.is_infinite() { ns(mu1) } else { sm(mu1, l1) };
        let p2 = if l2.is_infinite() { ns(mu2) } else { sm(mu2, l2) };
        let spec = PepSpec::new(PepKind::GradientGap, p1, p2, n, 1.0).unwrap();
        let sol = solve_default(&build(&spec).unwrap()).unwrap();
        let case_i = p1.l.minus_le(p2.mu, p2.l);
        let thm = if case_i { Theorem::Thm31i } else { Theorem::Thm31ii };
        let bound = bounds::gradient_gap_bound(&BoundRequest::new(thm, p1, p2, n, 1.0).unwrap())
            .unwrap()
            .value;
        assert!(
            sol.objective_value <= bound * bound * (1.0 + 1e-5) + 1e-9,
            "mu1={mu1} l1={l1} mu2={mu2} l2={l2} n={n}: pep {} > bound^2 {}",
            sol.objective_value,
            bound * bound
        );
    }
}

#[test]
fn scale_invariance_in_delta() {
    let base = PepSpec::new(PepKind::GradientGap, sm(0.3, 2.0), sm(0.9, 1.5), 2, 1.0).unwrap();
    let v1 = solve_default(&build(&base).unwrap()).unwrap().objective_value;
    for c in [0.5, 2.0] {
        let spec =
            PepSpec::new(PepKind::GradientGap, sm(0.3, 2.0), sm(0.9, 1.5), 2, c).unwrap();
        let v = solve_default(&build(&spec).unwrap()).unwrap().objective_value;
        assert!(
            (v - c * v1).abs() <= 1e-6 * (1.0 + c * v1),
            "c = {c}: {v} vs {}",
            c * v1
        );
    }
}

#[test]
fn trace_gives_lower_bound_certificate() {
    let inst = make_tightness_instance(8.0, 3).unwrap();
    let rule = StopRule::new(StopKind::GradientGap, 1e-13, 3).unwrap();
    let trace = run(&inst, &DVector::from_vec(vec![4.0]), &rule).unwrap();
    let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 8.0), ns(0.0), 3, 1.0).unwrap();
    let (_, lower) = feasible_point_from_trace(&trace, &spec, inst.f_star()).unwrap();
    let sol = solve_default(&build(&spec).unwrap()).unwrap();
    assert!(lower <= sol.objective_value + 1e-5);
    assert!((lower - sol.objective_value).abs() < 1e-4); // this family is exact
}

#[test]
fn infeasible_delta_detected() {
    // delta row with a negative right-hand side contradicts the lower-bound
    // row at k = 1
    let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 2.0), ns(0.0), 1, 1.0).unwrap();
    let mut p = build(&spec).unwrap();
    let delta_row = p.rows.iter_mut().find(|r| r.label == "delta").unwrap();
    delta_row.rhs = -1.0;
    let sol = solve_default(&p).unwrap();
    assert_eq!(sol.status, PepStatus::Infeasible, "status = {:?}", sol.status);
}

#[test]
fn export_solve_import_solve_agree() {
    let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 8.0), ns(0.0), 2, 1.0).unwrap();
    let p = build(&spec).unwrap();
    let q = import_sdpa(&export_sdpa(&p)).unwrap();
    let a = solve_default(&p).unwrap();
    let b = solve_default(&q).unwrap();
    assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
}

#[test]
fn benign_trace_certificate_stays_strictly_below_optimum() {
    use dcapep::instances::make_quadratic_instance;
    use nalgebra::DMatrix;
    // a quadratic far from the worst case: its feasible point is a strict
    // lower bound on the PEP optimum
    // spectra chosen so that L1 - mu2 <= L2 (the lower-bound rows of the
    // program are valid on this side of the case split)
    let q1 = DMatrix::from_diagonal(&DVector::from_vec(vec![1.5, 2.0]));
    let q2 = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.2]));
    let inst = make_quadratic_instance(
        q1,
        DVector::zeros(2),
        q2,
        DVector::from_vec(vec![1.0, 1.0]),
    )
    .unwrap();
    let x1 = DVector::from_vec(vec![1.0, 1.0]);
    let delta = inst.objective(&x1) - inst.f_star();
    let rule = StopRule::new(StopKind::GradientGap, 1e-300, 2).unwrap();
    let trace = run(&inst, &x1, &rule).unwrap();
    let spec = PepSpec::new(
        PepKind::GradientGap,
        *inst.params1(),
        *inst.params2(),
        2,
        delta,
    )
    .unwrap();
    let (_, lower) = feasible_point_from_trace(&trace, &spec, inst.f_star()).unwrap();
    let sol = solve_default(&build(&spec).unwrap()).unwrap();
    assert!(sol.status.converged());
    assert!(
        lower < sol.objective_value - 1e-3,
        "lower {lower} should sit strictly below optimum {}",
        sol.objective_value
    );
}

#[test]
fn certified_bound_checks_against_solved_peps() {
    use dcapep::certify::{self, CertParams, TheoremCase};
    // exactness family: the certified value meets the optimum with equality
    let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 8.0), ns(0.0), 3, 1.0).unwrap();
    let sol = solve_default(&build(&spec).unwrap()).unwrap();
    let params = CertParams::new(sm(0.0, 8.0), ns(0.0), 3);
    // L2 infinite sits in the L1 - mu2 > L2 case; its certificate requires
    // finite moduli, so check the finite two-sided family instead
    assert!(certify::multipliers_for(TheoremCase::GapCaseII, &params).is_err());
    let _ = sol;

    let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 1.0), sm(0.0, 1.0), 2, 1.0).unwrap();
    let sol = solve_default(&build(&spec).unwrap()).unwrap();
    let params = CertParams::new(sm(0.0, 1.0), sm(0.0, 1.0), 2);
    let cert = certify::multipliers_for(TheoremCase::GapCaseIL1GeL2, &params).unwrap();
    let check = certify::certified_bound_check(&cert, &spec, &sol).unwrap();
    assert!(check.holds);
    // this family is tight, so the certificate bound is met with equality
    assert!((check.pep_value - check.certificate_bound).abs() < 1e-4);
    // solver multipliers line up with the certificate's objective weights
    for (label, solver, paper) in &check.dual_comparison {
        assert!(
            (solver - paper).abs() < 1e-4,
            "{label}: solver {solver} vs certificate {paper}"
        );
    }

    // corrupting the certified bound multiplier flips the verdict
    let mut bad = cert.clone();
    let b = bad.multipliers["B"];
    bad.multipliers.insert("B".into(), -b);
    let check = certify::certified_bound_check(&bad, &spec, &sol).unwrap();
    assert!(!check.holds);
    assert!(!certify::verify_identity(&bad, 50, 1).passed());
}
