//! Whole-pipeline checks: plan a walk circuit for a graph, materialize it,
//! and verify the measured spectral distance against the dense oracle —
//! for both the star-forest compiler and the Pauli-string baseline.

use ctqw_core::generators::{cycle, path, random_bounded_degree};
use ctqw_core::graph::Graph;
use ctqw_core::pauli::synthesize_ctqw_pauli;
use ctqw_core::sim::{
    circuit_unitary, sector_distance, spectral_distance, unitarity_defect, DEFAULT_UNITARY_CAP,
};
use ctqw_core::trotter::{
    compose_circuit, plan_gate_counts, plan_unitary, synthesize_ctqw, walk_reference,
    SegmentMode, SynthesisOptions,
};
use ctqw_core::circuit::CostModel;
use ctqw_core::graph::DEFAULT_DENSE_CAP;

const EPS: f64 = 1e-3;

fn check_star_adaptive(g: &Graph, gamma: f64, t: f64) {
    let opts = SynthesisOptions::default();
    let synth = synthesize_ctqw(g, gamma, t, EPS, 1, SegmentMode::Adaptive, &opts).unwrap();
    let measured = synth.measured_distance.expect("adaptive mode measures");
    assert!(measured <= EPS, "planner reported distance {measured:.3e} > {EPS:.0e}");

    // The materialized circuit realizes exactly the operator the planner
    // measured, and stays unitary.
    let circ = compose_circuit(&synth.plan, &synth.terms);
    let u = circuit_unitary(&circ, DEFAULT_UNITARY_CAP).unwrap();
    let powered = plan_unitary(&synth.plan, &synth.terms, DEFAULT_UNITARY_CAP).unwrap();
    assert!(spectral_distance(&u, &powered) <= 1e-10);
    assert!(unitarity_defect(&u) <= 1e-9);

    let reference = walk_reference(g, gamma, t, DEFAULT_DENSE_CAP).unwrap();
    let from_file_circuit = sector_distance(&u, &reference).unwrap();
    assert!(from_file_circuit <= EPS + 1e-9);

    // The arithmetic gate accounting must agree with the materialized circuit.
    let model = CostModel::default();
    assert_eq!(plan_gate_counts(&synth.plan, &synth.terms, &model), circ.gate_counts(&model));
}

#[test]
fn star_compiler_meets_the_accuracy_target_on_small_graphs() {
    check_star_adaptive(&cycle(8), 1.0, 1.0);
    check_star_adaptive(&path(5), 1.0, 1.0);
    check_star_adaptive(&Graph::new(2, [(0, 1)]).unwrap(), 1.0, 1.0);
    let random = random_bounded_degree(12, 3, 14, 5);
    check_star_adaptive(&random, 0.7, 1.4);
}

#[test]
fn bound_mode_is_never_less_accurate_than_promised() {
    let g = cycle(8);
    let opts = SynthesisOptions::default();
    for eps in [0.1, 0.01] {
        let synth = synthesize_ctqw(&g, 1.0, 1.0, eps, 1, SegmentMode::Bound, &opts).unwrap();
        let u = plan_unitary(&synth.plan, &synth.terms, DEFAULT_UNITARY_CAP).unwrap();
        let reference = walk_reference(&g, 1.0, 1.0, DEFAULT_DENSE_CAP).unwrap();
        let measured = sector_distance(&u, &reference).unwrap();
        assert!(
            measured <= eps,
            "bound mode promised {eps} but measured {measured:.3e} with r={}",
            synth.plan.segments
        );
    }
}

#[test]
fn pauli_baseline_meets_the_accuracy_target() {
    let g = cycle(8);
    let opts = SynthesisOptions::default();
    let synth = synthesize_ctqw_pauli(&g, 1.0, 1.0, EPS, 1, SegmentMode::Adaptive, &opts).unwrap();
    let measured = synth.measured_distance.expect("adaptive mode measures");
    assert!(measured <= EPS);

    let circ = compose_circuit(&synth.plan, &synth.terms);
    let u = circuit_unitary(&circ, DEFAULT_UNITARY_CAP).unwrap();
    let reference = walk_reference(&g, 1.0, 1.0, DEFAULT_DENSE_CAP).unwrap();
    assert!(sector_distance(&u, &reference).unwrap() <= EPS + 1e-9);
}

#[test]
fn both_compilers_approximate_the_same_operator() {
    let g = path(6);
    let opts = SynthesisOptions::default();
    let tight = 1e-5;
    let star = synthesize_ctqw(&g, 1.0, 1.0, tight, 2, SegmentMode::Adaptive, &opts).unwrap();
    let pauli =
        synthesize_ctqw_pauli(&g, 1.0, 1.0, tight, 2, SegmentMode::Adaptive, &opts).unwrap();
    let u_star = plan_unitary(&star.plan, &star.terms, DEFAULT_UNITARY_CAP).unwrap();
    let u_pauli = plan_unitary(&pauli.plan, &pauli.terms, DEFAULT_UNITARY_CAP).unwrap();
    // The star circuit carries an ancilla; compare each against the shared
    // reference instead of against each other.
    let reference = walk_reference(&g, 1.0, 1.0, DEFAULT_DENSE_CAP).unwrap();
    assert!(sector_distance(&u_star, &reference).unwrap() <= tight);
    assert!(sector_distance(&u_pauli, &reference).unwrap() <= tight);
}

#[test]
fn perfect_matchings_compile_exactly_in_one_segment() {
    // A perfect matching lands in a single star forest: one term, so no
    // product-formula error at all.
    let g = Graph::new(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
    let opts = SynthesisOptions::default();
    let synth = synthesize_ctqw(&g, 1.3, 2.1, 1e-9, 1, SegmentMode::Bound, &opts).unwrap();
    assert_eq!(synth.plan.segments, 1);
    let u = plan_unitary(&synth.plan, &synth.terms, DEFAULT_UNITARY_CAP).unwrap();
    let reference = walk_reference(&g, 1.3, 2.1, DEFAULT_DENSE_CAP).unwrap();
    assert!(sector_distance(&u, &reference).unwrap() <= 1e-11);
}
