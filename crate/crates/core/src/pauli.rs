//! Baseline compilation through the Pauli basis.
//!
//! Any real symmetric Hamiltonian expands as `H = sum_P c_P P` over tensor
//! products of Pauli letters, with `c_P = Tr(P H) / 2^n`. For a walk
//! Hamiltonian `gamma * A` the expansion is computed directly from the edge
//! list: a string has `X`/`Y` letters exactly on the bits of some XOR mask
//! `mu = u ^ v` of an edge, so only those masks are enumerated, and each
//! trace reduces to a signed sum over the matrix's nonzero entries. Strings
//! with an odd number of `Y` letters always cancel for real symmetric
//! matrices and are skipped outright.
//!
//! Each surviving string exponentiates with the textbook recipe — basis
//! change on its support (`H` for `X`, `RX(pi/2)` for `Y`), a CX parity
//! ladder, one `RZ`, and the mirror image — giving the baseline the product
//! formulas compare against. The all-identity string is a global phase and
//! is never gated; for adjacency Hamiltonians its coefficient is zero
//! anyway because the diagonal vanishes.

use std::collections::BTreeMap;
use std::fmt;

use crate::circuit::{Circuit, Gate, Polarity};
use crate::graph::Graph;
use crate::sim::sector_distance;
use crate::trotter::{
    adaptive_segments, analytic_exponential_bound, plan_unitary, suzuki_schedule, walk_reference,
    HamiltonianTerms, SegmentMode, SynthesisOptions, SynthesizeError, TrotterError, TrotterPlan,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn symbol(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// One Pauli string with its real coefficient. `letters[q]` is the letter
/// on qubit `q`; the display form puts qubit 0 rightmost.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub letters: Vec<PauliLetter>,
    pub coefficient: f64,
}

impl PauliTerm {
    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.letters.len()).filter(|&q| self.letters[q] != PauliLetter::I).collect()
    }

    /// The string alone, qubit 0 rightmost: `[I, X]` displays as `XI`.
    pub fn string_repr(&self) -> String {
        self.letters.iter().rev().map(|l| l.symbol()).collect()
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.string_repr(), self.coefficient)
    }
}

/// Pauli expansion of `gamma * A` for the graph's padded adjacency matrix,
/// in a deterministic order (ascending XOR mask, then `Y`-subset, then
/// `Z`-subset). Zero-coefficient strings are dropped.
pub fn pauli_decompose(g: &Graph, gamma: f64) -> Vec<PauliTerm> {
    let n = g.working_qubits();
    if gamma == 0.0 {
        return Vec::new();
    }

    // Entries of A live only at index pairs (i, i ^ mu) where mu ranges
    // over the XOR masks realized by edges. Group the nonzero columns by
    // mask once; every trace below is a signed sum over one such group.
    let mut columns_by_mask: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (u, v) in g.edges() {
        let mu = u ^ v;
        let cols = columns_by_mask.entry(mu).or_default();
        cols.push(u);
        cols.push(v);
    }

    let dim = (1usize << n) as f64;
    let mut terms = Vec::new();
    for (&mu, cols) in &columns_by_mask {
        let mu_bits: Vec<usize> = (0..n).filter(|&b| mu >> b & 1 == 1).collect();
        let other_bits: Vec<usize> = (0..n).filter(|&b| mu >> b & 1 == 0).collect();

        for y_sel in 0..1usize << mu_bits.len() {
            let y_count = y_sel.count_ones();
            if y_count % 2 == 1 {
                continue; // cancels exactly for real symmetric matrices
            }
            // i^|Y| for even |Y| alternates between +1 and -1.
            let y_sign = if y_count % 4 == 0 { 1.0 } else { -1.0 };
            let y_mask: usize = mu_bits
                .iter()
                .enumerate()
                .filter(|&(idx, _)| y_sel >> idx & 1 == 1)
                .map(|(_, &b)| 1 << b)
                .sum();

            for z_sel in 0..1usize << other_bits.len() {
                let z_mask: usize = other_bits
                    .iter()
                    .enumerate()
                    .filter(|&(idx, _)| z_sel >> idx & 1 == 1)
                    .map(|(_, &b)| 1 << b)
                    .sum();

                let yz = y_mask | z_mask;
                let sum: f64 = cols
                    .iter()
                    .map(|&i| if (i & yz).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
                    .sum();
                let coefficient = gamma * y_sign * sum / dim;
                if coefficient.abs() <= 1e-12 * gamma.abs() {
                    continue;
                }

                let letters = (0..n)
                    .map(|q| {
                        if mu >> q & 1 == 1 {
                            if y_mask >> q & 1 == 1 { PauliLetter::Y } else { PauliLetter::X }
                        } else if z_mask >> q & 1 == 1 {
                            PauliLetter::Z
                        } else {
                            PauliLetter::I
                        }
                    })
                    .collect();
                terms.push(PauliTerm { letters, coefficient });
            }
        }
    }
    terms
}

/// Exact circuit for `exp(-i * coefficient * P * time)`.
///
/// Panics on the all-identity string: that is a global phase, not a gate
/// sequence, and callers must filter it out.
pub fn pauli_exponential(term: &PauliTerm, time: f64) -> Circuit {
    let n = term.letters.len();
    let support = term.support();
    assert!(
        !support.is_empty(),
        "identity string contributes only a global phase and cannot be gated"
    );

    let mut circ = Circuit::new(n);
    let half_pi = std::f64::consts::FRAC_PI_2;

    // Rotate every support qubit into the Z basis.
    for &q in &support {
        match term.letters[q] {
            PauliLetter::X => circ.push(Gate::h(q)).expect("in range"),
            PauliLetter::Y => circ.push(Gate::rx(half_pi, q)).expect("in range"),
            PauliLetter::Z => {}
            PauliLetter::I => unreachable!("support excludes identity letters"),
        }
    }
    // Fold the joint parity onto the last support qubit, rotate, unfold.
    for pair in support.windows(2) {
        circ.push(Gate::x(pair[1]).controlled(pair[0], Polarity::Closed)).expect("in range");
    }
    circ.push(Gate::rz(2.0 * term.coefficient * time, *support.last().expect("nonempty")))
        .expect("in range");
    for pair in support.windows(2).rev() {
        circ.push(Gate::x(pair[1]).controlled(pair[0], Polarity::Closed)).expect("in range");
    }
    for &q in &support {
        match term.letters[q] {
            PauliLetter::X => circ.push(Gate::h(q)).expect("in range"),
            PauliLetter::Y => circ.push(Gate::rx(-half_pi, q)).expect("in range"),
            _ => {}
        }
    }
    circ
}

/// Pauli-string split of a walk Hamiltonian: one term per string, no
/// ancilla.
#[derive(Debug, Clone)]
pub struct PauliTerms {
    pub terms: Vec<PauliTerm>,
    pub num_qubits: usize,
}

impl HamiltonianTerms for PauliTerms {
    fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn circuit_qubits(&self) -> usize {
        self.num_qubits
    }

    fn term_circuit(&self, j: usize, time: f64) -> Circuit {
        pauli_exponential(&self.terms[j], time)
    }
}

/// Text dump of a decomposition: one `<string> <coefficient>` line per
/// term.
pub fn dump_terms(terms: &[PauliTerm]) -> String {
    let mut out = String::new();
    for term in terms {
        out.push_str(&term.to_string());
        out.push('\n');
    }
    out
}

/// A planned walk compilation through the Pauli basis.
#[derive(Debug, Clone)]
pub struct PauliSynthesis {
    pub plan: TrotterPlan,
    pub terms: PauliTerms,
    pub norm_time: f64,
    pub measured_distance: Option<f64>,
}

/// Plans a circuit approximating `exp(-i gamma A t)` with one product-
/// formula term per Pauli string. Same contract as the star-forest
/// synthesizer, minus the ancilla.
pub fn synthesize_ctqw_pauli(
    g: &Graph,
    gamma: f64,
    t: f64,
    eps: f64,
    k: usize,
    mode: SegmentMode,
    opts: &SynthesisOptions,
) -> Result<PauliSynthesis, SynthesizeError> {
    if k == 0 {
        return Err(TrotterError::InvalidOrder.into());
    }
    let strings = pauli_decompose(g, gamma);
    let m = strings.len();
    let num_qubits = g.working_qubits();
    let d = g.degree_profile().max_degree;
    let norm_time = gamma.abs() * d as f64 * t.abs();
    let per_segment = suzuki_schedule(m, k)?;
    let terms = PauliTerms { terms: strings, num_qubits };

    let make_plan = |segments: u64| TrotterPlan {
        order_k: k,
        num_terms: m,
        segments,
        per_segment: per_segment.clone(),
        total_time: t,
    };

    // A single string (or none) is exact in one segment; adaptive mode
    // still measures, so its reports always carry a distance.
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
        return Ok(PauliSynthesis { plan, terms, norm_time, measured_distance });
    }

    match mode {
        SegmentMode::Bound => {
            let n_exp = analytic_exponential_bound(m, k, norm_time, eps)?;
            let segments = n_exp.div_ceil(per_segment.len() as u64).max(1);
            Ok(PauliSynthesis {
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
            Ok(PauliSynthesis { plan, terms, norm_time, measured_distance: Some(distance) })
        }
    }
}
