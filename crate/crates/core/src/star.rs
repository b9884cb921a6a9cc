//! Exact circuits for the evolution generated by a single star.
//!
//! A star with `M` leaves has adjacency spectrum `{+sqrt(M), -sqrt(M), 0}`;
//! the two nontrivial eigenvectors are `(|c> +- |phi>)/sqrt(2)` where `c`
//! is the center and `|phi>` the uniform superposition over leaves. The
//! evolution is therefore a two-phase rotation in a known plane, and we
//! compile it exactly:
//!
//! ```text
//!   U = V . CTRL[q1..q_{n-1} open, anc open] RX(2*gamma*sqrt(M)*t on q0) . V+
//! ```
//!
//! where `V` (built by the eigenbasis machinery below) maps the two states
//! `|0..00, anc=0>` and `|0..01, anc=0>` to `H`-conjugated copies of the
//! eigenvectors. Only those two columns of `V` matter: the central rotation
//! is fully controlled, so it acts as identity outside the plane `V` pins,
//! and the whole construction is exact for *any* unitary completion of the
//! state-preparation block. The open ancilla control on the rotation is
//! what guarantees the ancilla-one sector is untouched.
//!
//! The state-preparation block ([`uniform_sparse_prep`]) builds the uniform
//! superposition over an arbitrary `M`-subset of basis states with
//! `O(M n)` gates by merging pairs of tracked basis states: align the two
//! highest states with CX gates until they differ in a single bit, then
//! fold one into the other with a controlled `R_y` rotation whose controls
//! isolate the pair from the rest of the tracked set.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::circuit::{Circuit, Gate, Polarity};
use crate::decompose::{Star, StarForest};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StarSynthError {
    #[error("vertex {v} does not fit in {num_qubits} working qubits")]
    VertexOutOfRange { v: usize, num_qubits: usize },
    #[error("cannot prepare a superposition over an empty set")]
    EmptyTargets,
    #[error("stars are not vertex-disjoint: vertex {v} appears twice")]
    OverlappingStars { v: usize },
}

/// The nontrivial adjacency eigenvalues of a star: `+-sqrt(M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarSpectrum {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

pub fn star_spectrum(star: &Star) -> StarSpectrum {
    let lambda = (star.num_leaves() as f64).sqrt();
    StarSpectrum { lambda_plus: lambda, lambda_minus: -lambda }
}

/// `X` flips sending `|0..0>` to `|state>`, ascending qubit order.
pub fn basis_flip_circuit(state: usize, num_qubits: usize) -> Circuit {
    let mut circ = Circuit::new(num_qubits);
    for q in 0..num_qubits {
        if state >> q & 1 == 1 {
            circ.push(Gate::x(q)).expect("bit index within width");
        }
    }
    circ
}

/// `R_y(theta)` on one qubit, as the `RZ(pi/2) RX(-theta) RZ(-pi/2)`
/// sandwich, each piece carrying `controls`.
fn push_ry(circ: &mut Circuit, theta: f64, target: usize, controls: &[(usize, Polarity)]) {
    let half_pi = std::f64::consts::FRAC_PI_2;
    for base in [Gate::rz(half_pi, target), Gate::rx(-theta, target), Gate::rz(-half_pi, target)] {
        let mut gate = base;
        for &(q, pol) in controls {
            gate = gate.controlled(q, pol);
        }
        circ.push(gate).expect("rotation qubits validated by caller");
    }
}

/// Smallest-first greedy set of bit positions on which `pivot` differs from
/// every element of `others`. Positions in `forbidden` are never used.
/// Panics if some element equals `pivot` outside the forbidden bit.
fn greedy_distinguishing_bits(
    pivot: usize,
    others: &[usize],
    num_bits: usize,
    forbidden: Option<usize>,
) -> Vec<usize> {
    let mut remaining: Vec<usize> = others.to_vec();
    let mut chosen: Vec<usize> = Vec::new();
    while !remaining.is_empty() {
        let best = (0..num_bits)
            .filter(|&b| Some(b) != forbidden && !chosen.contains(&b))
            .max_by_key(|&b| {
                let covered =
                    remaining.iter().filter(|&&s| (s ^ pivot) >> b & 1 == 1).count();
                (covered, std::cmp::Reverse(b))
            })
            .expect("bit positions available");
        let covered = remaining.iter().any(|&s| (s ^ pivot) >> best & 1 == 1);
        assert!(covered, "cannot distinguish {pivot} from {remaining:?}");
        chosen.push(best);
        remaining.retain(|&s| (s ^ pivot) >> best & 1 == 0);
    }
    chosen.sort_unstable();
    chosen
}

/// Control pattern matching `pivot`'s bits on the given positions.
fn pattern_controls(pivot: usize, bits: &[usize]) -> Vec<(usize, Polarity)> {
    bits.iter()
        .map(|&b| {
            (b, if pivot >> b & 1 == 1 { Polarity::Closed } else { Polarity::Open })
        })
        .collect()
}

/// Circuit on `num_qubits` qubits sending `|0..0>` to the uniform real
/// superposition over `targets`. Gate count is at most `3 * M * n`.
pub fn uniform_sparse_prep(
    targets: &BTreeSet<usize>,
    num_qubits: usize,
) -> Result<Circuit, StarSynthError> {
    if targets.is_empty() {
        return Err(StarSynthError::EmptyTargets);
    }
    let dim = 1usize << num_qubits;
    for &v in targets {
        if v >= dim {
            return Err(StarSynthError::VertexOutOfRange { v, num_qubits });
        }
    }

    if targets.len() == 1 {
        let &only = targets.iter().next().expect("nonempty");
        return Ok(basis_flip_circuit(only, num_qubits));
    }
    if num_qubits == 1 && targets.len() == 2 {
        // |0> and |1>: a single Hadamard.
        let mut circ = Circuit::new(1);
        circ.push(Gate::h(0)).expect("qubit 0 in range");
        return Ok(circ);
    }

    // Build the un-preparation: merge tracked states pairwise down to one
    // survivor, then flip it to |0..0>. The prep is the inverse.
    let mut unprep = Circuit::new(num_qubits);
    let amp = 1.0 / (targets.len() as f64).sqrt();
    let mut tracked: BTreeMap<usize, f64> = targets.iter().map(|&v| (v, amp)).collect();

    while tracked.len() > 1 {
        let (&b, _) = tracked.last_key_value().expect("nonempty");
        let (&a, _) = tracked.range(..b).next_back().expect("two or more states");
        let p = (a ^ b).trailing_zeros() as usize;
        let b_bit = b >> p & 1;

        // Align: relabel b to b' = a XOR 2^p using CX gates keyed on bit p,
        // so the pair differs in bit p alone. Every tracked state sharing
        // b's value of bit p is relabeled along with it.
        let b_prime = a ^ (1 << p);
        let mask = b ^ b_prime;
        if mask != 0 {
            let pol = if b_bit == 1 { Polarity::Closed } else { Polarity::Open };
            for q in 0..num_qubits {
                if mask >> q & 1 == 1 {
                    unprep.push(Gate::x(q).controlled(p, pol)).expect("distinct qubits");
                }
            }
            tracked = tracked
                .into_iter()
                .map(|(s, w)| if s >> p & 1 == b_bit { (s ^ mask, w) } else { (s, w) })
                .collect();
        }

        // Fold b' into a with an R_y on bit p, controlled on a pattern that
        // no other tracked state matches (b' matches automatically: it
        // differs from a only on the rotation target).
        let alpha = tracked[&a];
        let beta = tracked[&b_prime];
        let rest: Vec<usize> =
            tracked.keys().copied().filter(|&s| s != a && s != b_prime).collect();
        let bits = greedy_distinguishing_bits(a, &rest, num_qubits, Some(p));
        let controls = pattern_controls(a, &bits);
        // R_y(theta) sends the pair's amplitudes (alpha, beta) to
        // (hypot, 0); the sign flips with a's bit at p because that bit
        // decides which pair member sits in the rotation's |0> slot.
        let theta = if a >> p & 1 == 0 {
            -2.0 * beta.atan2(alpha)
        } else {
            2.0 * beta.atan2(alpha)
        };
        push_ry(&mut unprep, theta, p, &controls);
        tracked.remove(&b_prime);
        tracked.insert(a, alpha.hypot(beta));
    }

    let (&survivor, &weight) = tracked.first_key_value().expect("one survivor");
    debug_assert!((weight - 1.0).abs() < 1e-9, "merged amplitude must reach 1");
    unprep
        .append(&basis_flip_circuit(survivor, num_qubits))
        .expect("same width");

    Ok(unprep.inverse())
}

/// Copy of `circ` with `(qubit, polarity)` added as an extra control on
/// every gate, widened to `num_qubits`.
fn promoted(circ: &Circuit, num_qubits: usize, qubit: usize, polarity: Polarity) -> Circuit {
    let mut out = Circuit::new(num_qubits);
    for gate in circ.gates() {
        out.push(gate.clone().controlled(qubit, polarity))
            .expect("promotion adds a fresh qubit");
    }
    out
}

/// Everything of the eigenbasis transform except its leading Hadamard:
/// `SWAP(q0, anc)`, the center write-in (ancilla open), the leaf
/// superposition (ancilla closed), the center-pattern toggle, `X(anc)`.
fn eigenbasis_core(star: &Star, num_working: usize) -> Result<Circuit, StarSynthError> {
    let dim = 1usize << num_working;
    for v in star.vertices() {
        if v >= dim {
            return Err(StarSynthError::VertexOutOfRange { v, num_qubits: num_working });
        }
    }
    let anc = num_working;
    let mut circ = Circuit::new(num_working + 1);

    circ.push(Gate::swap(0, anc)).expect("in range");

    let center_flips = basis_flip_circuit(star.center, num_working);
    circ.append(&promoted(&center_flips, num_working + 1, anc, Polarity::Open))
        .expect("same width");

    let leaves: BTreeSet<usize> = star.leaves.iter().copied().collect();
    let prep = uniform_sparse_prep(&leaves, num_working)?;
    circ.append(&promoted(&prep, num_working + 1, anc, Polarity::Closed))
        .expect("same width");

    // Toggle the ancilla exactly on the center: a control pattern over a
    // greedy bit set separating the center from every leaf.
    let leaf_list: Vec<usize> = star.leaves.iter().copied().collect();
    let bits = greedy_distinguishing_bits(star.center, &leaf_list, num_working, None);
    let mut mcx = Gate::x(anc);
    for (q, pol) in pattern_controls(star.center, &bits) {
        mcx = mcx.controlled(q, pol);
    }
    circ.push(mcx).expect("in range");

    circ.push(Gate::x(anc)).expect("in range");
    Ok(circ)
}

/// Transform `W` sending `|0..00, anc=0>` and `|0..01, anc=0>` to the
/// star's two nontrivial eigenvectors (tensored with `anc=0`). Width is
/// `num_working + 1`; the ancilla is the top qubit.
pub fn eigenbasis_transform(star: &Star, num_working: usize) -> Result<Circuit, StarSynthError> {
    let core = eigenbasis_core(star, num_working)?;
    let mut circ = Circuit::new(num_working + 1);
    circ.push(Gate::h(0)).expect("in range");
    circ.append(&core).expect("same width");
    Ok(circ)
}

/// Exact circuit for `exp(-i gamma S t)` on the ancilla-zero sector, where
/// `S` is the star's adjacency matrix; the ancilla-one sector gets exactly
/// the identity. Width is `num_working + 1`.
pub fn star_evolution(
    star: &Star,
    gamma: f64,
    t: f64,
    num_working: usize,
) -> Result<Circuit, StarSynthError> {
    let core = eigenbasis_core(star, num_working)?;
    let anc = num_working;
    let mut circ = core.inverse();

    // The eigenbasis transform's leading Hadamard folds into the central
    // phase gate, turning it into this rotation.
    let alpha = 2.0 * gamma * (star.num_leaves() as f64).sqrt() * t;
    let mut rot = Gate::rx(alpha, 0);
    for q in 1..num_working {
        rot = rot.controlled(q, Polarity::Open);
    }
    rot = rot.controlled(anc, Polarity::Open);
    circ.push(rot).expect("in range");

    circ.append(&core).expect("same width");
    Ok(circ)
}

/// Product of [`star_evolution`] circuits over a star forest. The stars
/// are vertex-disjoint, so their evolutions commute and the product equals
/// the evolution of the whole forest, still exactly.
pub fn star_forest_evolution(
    forest: &StarForest,
    gamma: f64,
    t: f64,
    num_working: usize,
) -> Result<Circuit, StarSynthError> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for star in &forest.stars {
        for v in star.vertices() {
            if !seen.insert(v) {
                return Err(StarSynthError::OverlappingStars { v });
            }
        }
    }
    let mut circ = Circuit::new(num_working + 1);
    for star in &forest.stars {
        circ.append(&star_evolution(star, gamma, t, num_working)?)
            .expect("same width");
    }
    Ok(circ)
}
