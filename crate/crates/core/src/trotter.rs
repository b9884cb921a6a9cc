//! Product-formula schedules and segment planning.
//!
//! A Hamiltonian split into `m` terms is approximated over time `t` by `r`
//! identical segments; within a segment the terms are interleaved by a
//! symmetrized (Suzuki) schedule of order `2k`. A schedule is a list of
//! `(term index, fraction)` entries: the term's exponential taken for
//! `fraction * t / r`. Schedules are palindromes, every term's fractions
//! sum to one, and adjacent entries with the same term index are merged —
//! including across segment boundaries, which is why the composed circuit
//! has `r * L - (r - 1)` exponentials rather than `r * L`.
//!
//! Two ways to pick `r` are supported. The analytic route evaluates the
//! standard exponential-count bound for order-`2k` formulas and divides by
//! the segment length. The adaptive route doubles `r` from 1, measuring
//! the true spectral distance against the dense reference each time, and
//! stops as soon as the target is met; it is available whenever the graph
//! is small enough to simulate. A single-term split is reproduced exactly
//! by one segment, so planning short-circuits to `r = 1` when `m <= 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, CostModel, GateCounts};
use crate::decompose::{decompose_to_stars, StarForest};
use crate::graph::{Graph, GraphError, DEFAULT_DENSE_CAP};
use crate::sim::{
    circuit_unitary, exact_evolution, sector_distance, SimError, DEFAULT_UNITARY_CAP,
};
use crate::star::star_forest_evolution;

/// Default cap on the segment count the adaptive search will try.
pub const DEFAULT_SEGMENT_CAP: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq)]
pub enum TrotterError {
    #[error("product-formula order parameter k must be at least 1")]
    InvalidOrder,
    #[error("target accuracy {eps} is out of range (the analytic bound needs 0 < eps <= 1)")]
    EpsilonOutOfRange { eps: f64 },
    #[error(
        "norm-time product {norm_time} too small for the analytic bound: \
         it needs 2 * {m} * 5^(k-1) * norm_time >= 1"
    )]
    EvolutionTooShort { m: usize, norm_time: f64 },
    #[error("no segment count up to {cap} reached the target accuracy (best distance {best})")]
    SegmentCapExceeded { cap: u64, best: f64 },
}

/// Order-`2k` Suzuki schedule for `m` terms, with adjacent same-term
/// entries merged. Entries are `(term index, fraction of the segment)`.
pub fn suzuki_schedule(m: usize, k: usize) -> Result<Vec<(usize, f64)>, TrotterError> {
    if k == 0 {
        return Err(TrotterError::InvalidOrder);
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    if m == 1 {
        return Ok(vec![(0, 1.0)]);
    }
    if k == 1 {
        // Symmetrized splitting: half-steps forward, half-steps backward,
        // with the middle pair already merged into one full step.
        let mut entries: Vec<(usize, f64)> = (0..m - 1).map(|j| (j, 0.5)).collect();
        entries.push((m - 1, 1.0));
        entries.extend((0..m - 1).rev().map(|j| (j, 0.5)));
        return Ok(entries);
    }

    // Recursive construction: two copies at fraction p, one at 1 - 4p, two
    // more at p, where p keeps the order-raising cancellation exact.
    let inner = suzuki_schedule(m, k - 1)?;
    let p = 1.0 / (4.0 - 4f64.powf(1.0 / (2.0 * k as f64 - 1.0)));
    let scales = [p, p, 1.0 - 4.0 * p, p, p];
    let mut entries = Vec::with_capacity(5 * inner.len());
    for scale in scales {
        for &(j, f) in &inner {
            entries.push((j, f * scale));
        }
    }
    Ok(merge_adjacent(entries))
}

fn merge_adjacent(entries: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
    for (j, f) in entries {
        match out.last_mut() {
            Some(&mut (last_j, ref mut last_f)) if last_j == j => *last_f += f,
            _ => out.push((j, f)),
        }
    }
    out
}

/// Upper bound on the exponentials needed for spectral error `eps` when
/// evolving an `m`-term Hamiltonian with an order-`2k` formula:
/// `ceil(2 m^2 5^(2k) (||H|| t) (m ||H|| t / eps)^(1/(2k)))`.
///
/// Valid only for `0 < eps <= 1 <= 2 m 5^(k-1) ||H|| t`; violations error.
pub fn analytic_exponential_bound(
    m: usize,
    k: usize,
    norm_time: f64,
    eps: f64,
) -> Result<u64, TrotterError> {
    if k == 0 {
        return Err(TrotterError::InvalidOrder);
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(TrotterError::EpsilonOutOfRange { eps });
    }
    if !(2.0 * m as f64 * 5f64.powi(k as i32 - 1) * norm_time >= 1.0) {
        return Err(TrotterError::EvolutionTooShort { m, norm_time });
    }
    let mf = m as f64;
    let value = 2.0
        * mf.powi(2)
        * 5f64.powi(2 * k as i32)
        * norm_time
        * (mf * norm_time / eps).powf(1.0 / (2.0 * k as f64));
    Ok(value.ceil() as u64)
}

/// A fully determined product-formula plan: the per-segment schedule plus
/// the segment count and total evolution time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterPlan {
    pub order_k: usize,
    pub num_terms: usize,
    pub segments: u64,
    /// `(term index, fraction of tau)` entries applied left to right.
    pub per_segment: Vec<(usize, f64)>,
    pub total_time: f64,
}

impl TrotterPlan {
    /// Segment duration `t / r`.
    pub fn tau(&self) -> f64 {
        self.total_time / self.segments as f64
    }

    /// Exponentials in the composed circuit after merging the identical
    /// term indices that meet at segment boundaries.
    pub fn merged_exponentials(&self) -> u64 {
        let l = self.per_segment.len() as u64;
        if l == 0 {
            0
        } else {
            self.segments * l - (self.segments - 1)
        }
    }
}

/// A Hamiltonian split whose term evolutions compile to exact circuits.
pub trait HamiltonianTerms {
    fn num_terms(&self) -> usize;
    /// Width of the term circuits (including any ancilla).
    fn circuit_qubits(&self) -> usize;
    /// Exact circuit for `exp(-i H_j time)`.
    fn term_circuit(&self, j: usize, time: f64) -> Circuit;
}

/// Star-forest split of a walk Hamiltonian `gamma * A`: one term per star
/// forest, each compiled exactly with one ancilla on top.
#[derive(Debug, Clone)]
pub struct StarTerms {
    pub forests: Vec<StarForest>,
    pub gamma: f64,
    pub num_working: usize,
}

impl HamiltonianTerms for StarTerms {
    fn num_terms(&self) -> usize {
        self.forests.len()
    }

    fn circuit_qubits(&self) -> usize {
        self.num_working + 1
    }

    fn term_circuit(&self, j: usize, time: f64) -> Circuit {
        star_forest_evolution(&self.forests[j], self.gamma, time, self.num_working)
            .expect("star forests from the decomposition are disjoint and in range")
    }
}

/// The plan's schedule unrolled over all segments, with absolute durations
/// and boundary entries merged.
fn global_entries(plan: &TrotterPlan) -> Vec<(usize, f64)> {
    let tau = plan.tau();
    let mut entries =
        Vec::with_capacity(plan.per_segment.len() * plan.segments as usize);
    for _ in 0..plan.segments {
        for &(j, f) in &plan.per_segment {
            entries.push((j, f * tau));
        }
    }
    merge_adjacent(entries)
}

/// Materializes the full circuit for a plan.
pub fn compose_circuit(plan: &TrotterPlan, terms: &impl HamiltonianTerms) -> Circuit {
    let mut circ = Circuit::new(terms.circuit_qubits());
    for (j, time) in global_entries(plan) {
        circ.append(&terms.term_circuit(j, time))
            .expect("term circuits share the plan's width");
    }
    circ
}

/// Gate totals of [`compose_circuit`] computed arithmetically, without
/// materializing all `r` segments: gate counts do not depend on rotation
/// angles, so the total is `r` copies of one segment minus `r - 1` copies
/// of the first entry (absorbed by boundary merging).
pub fn plan_gate_counts(
    plan: &TrotterPlan,
    terms: &impl HamiltonianTerms,
    model: &CostModel,
) -> GateCounts {
    let per_segment = segment_gate_counts(plan, terms, model);
    if plan.per_segment.is_empty() {
        return per_segment;
    }
    let tau = plan.tau();
    let (j0, f0) = plan.per_segment[0];
    let first = terms.term_circuit(j0, f0 * tau).gate_counts(model);
    per_segment.scaled(plan.segments).minus(&first.scaled(plan.segments - 1))
}

/// Gate totals of a single segment of the plan.
pub fn segment_gate_counts(
    plan: &TrotterPlan,
    terms: &impl HamiltonianTerms,
    model: &CostModel,
) -> GateCounts {
    let tau = plan.tau();
    let mut counts = GateCounts::default();
    for &(j, f) in &plan.per_segment {
        counts.add(&terms.term_circuit(j, f * tau).gate_counts(model));
    }
    counts
}

/// `m^exponent` by repeated squaring.
pub fn matrix_power(m: &DMatrix<Complex64>, exponent: u64) -> DMatrix<Complex64> {
    let mut result = DMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result = &base * result;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// The unitary the composed circuit implements, computed as one segment
/// unitary raised to the `r`-th power. Segment-boundary merging does not
/// change the operator (same-term exponentials add their durations), so
/// this equals the materialized circuit's unitary without building `r`
/// copies of anything.
pub fn plan_unitary(
    plan: &TrotterPlan,
    terms: &impl HamiltonianTerms,
    cap: usize,
) -> Result<DMatrix<Complex64>, SimError> {
    let q = terms.circuit_qubits();
    if q > cap {
        return Err(SimError::UnitaryCapExceeded { num_qubits: q, cap });
    }
    let tau = plan.tau();
    let dim = 1usize << q;
    let mut segment = DMatrix::identity(dim, dim);
    for &(j, f) in &plan.per_segment {
        let u = circuit_unitary(&terms.term_circuit(j, f * tau), cap)?;
        segment = u * segment;
    }
    Ok(matrix_power(&segment, plan.segments))
}

/// Dense reference operator `exp(-i gamma A t)` on the padded qubit space.
pub fn walk_reference(
    g: &Graph,
    gamma: f64,
    t: f64,
    dense_cap: usize,
) -> Result<DMatrix<Complex64>, GraphError> {
    let h = g.padded_adjacency(dense_cap)? * gamma;
    Ok(exact_evolution(&h, t))
}

/// How the segment count is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentMode {
    /// Evaluate the analytic exponential-count bound.
    Bound,
    /// Double `r` until the measured distance meets the target.
    Adaptive,
}

#[derive(Debug, Clone, Copy)]
pub struct SynthesisOptions {
    /// Widest circuit the measurement path will simulate.
    pub unitary_cap: usize,
    /// Largest padded dimension for the dense reference.
    pub dense_cap: usize,
    /// Largest segment count the adaptive search will try.
    pub segment_cap: u64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            unitary_cap: DEFAULT_UNITARY_CAP,
            dense_cap: DEFAULT_DENSE_CAP,
            segment_cap: DEFAULT_SEGMENT_CAP,
        }
    }
}

#[derive(Debug, Error)]
pub enum SynthesizeError {
    #[error(transparent)]
    Trotter(#[from] TrotterError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Doubles the segment count from 1 until the measured spectral distance
/// to `reference` meets `eps`, returning the successful plan and its
/// distance. Shared by every term split that supports measurement.
pub fn adaptive_segments<T: HamiltonianTerms>(
    terms: &T,
    order_k: usize,
    per_segment: &[(usize, f64)],
    total_time: f64,
    eps: f64,
    reference: &DMatrix<Complex64>,
    opts: &SynthesisOptions,
) -> Result<(TrotterPlan, f64), SynthesizeError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(TrotterError::EpsilonOutOfRange { eps }.into());
    }
    let mut segments = 1u64;
    let mut best = f64::INFINITY;
    loop {
        let plan = TrotterPlan {
            order_k,
            num_terms: terms.num_terms(),
            segments,
            per_segment: per_segment.to_vec(),
            total_time,
        };
        let u = plan_unitary(&plan, terms, opts.unitary_cap)?;
        let distance = sector_distance(&u, reference)?;
        if distance <= eps {
            return Ok((plan, distance));
        }
        best = best.min(distance);
        if segments >= opts.segment_cap {
            return Err(TrotterError::SegmentCapExceeded { cap: opts.segment_cap, best }.into());
        }
        segments *= 2;
    }
}

/// A planned walk compilation: the term split plus the segment plan.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub plan: TrotterPlan,
    pub terms: StarTerms,
    /// The norm-time product `|gamma| * d * |t|` the analytic bound used.
    pub norm_time: f64,
    /// Spectral distance measured during adaptive planning, if any.
    pub measured_distance: Option<f64>,
}

/// Plans a circuit approximating `exp(-i gamma A t)` for the graph's
/// adjacency matrix `A`, to spectral accuracy `eps`, using the star-forest
/// decomposition and an order-`2k` schedule.
pub fn synthesize_ctqw(
    g: &Graph,
    gamma: f64,
    t: f64,
    eps: f64,
    k: usize,
    mode: SegmentMode,
    opts: &SynthesisOptions,
) -> Result<Synthesis, SynthesizeError> {
    if k == 0 {
        return Err(TrotterError::InvalidOrder.into());
    }
    let forests = decompose_to_stars(g);
    let m = forests.len();
    let num_working = g.working_qubits();
    let d = g.degree_profile().max_degree;
    let norm_time = gamma.abs() * d as f64 * t.abs();
    let per_segment = suzuki_schedule(m, k)?;
    let terms = StarTerms { forests, gamma, num_working };

    let make_plan = |segments: u64| TrotterPlan {
        order_k: k,
        num_terms: m,
        segments,
        per_segment: per_segment.clone(),
        total_time: t,
    };

    // A single term (or none) is reproduced exactly by one segment.
    // Adaptive mode still measures, so its reports always carry a distance.
    if m <= 1 {
        let plan = make_plan(1);
        let measured_distance = match mode {
            SegmentMode::Bound => None,
            SegmentMode::Adaptive => {
                let reference = walk_reference(g, gamma, t, opts.dense_cap)?;
                let u = plan_unitary(&plan, &terms, opts.unitary_cap)?;
                Some(sector_distance(&u, &reference)?)
            }
        };
        return Ok(Synthesis { plan, terms, norm_time, measured_distance });
    }

    match mode {
        SegmentMode::Bound => {
            // The decomposition never yields more than 6d terms; the
            // analytic treatment requires the norm-time product to be
            // large enough for that worst case as well as for the actual m.
            let six_d = 6 * d;
            if !(2.0 * six_d as f64 * 5f64.powi(k as i32 - 1) * norm_time >= 1.0) {
                return Err(TrotterError::EvolutionTooShort { m: six_d, norm_time }.into());
            }
            let n_exp = analytic_exponential_bound(m, k, norm_time, eps)?;
            let segments = n_exp.div_ceil(per_segment.len() as u64).max(1);
            Ok(Synthesis {
                plan: make_plan(segments),
                terms,
                norm_time,
                measured_distance: None,
            })
        }
        SegmentMode::Adaptive => {
            let reference = walk_reference(g, gamma, t, opts.dense_cap)?;
            let (plan, distance) =
                adaptive_segments(&terms, k, &per_segment, t, eps, &reference, opts)?;
            Ok(Synthesis { plan, terms, norm_time, measured_distance: Some(distance) })
        }
    }
}
