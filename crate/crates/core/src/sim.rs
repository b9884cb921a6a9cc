//! Dense simulation and exact reference operators.
//!
//! Everything here is deliberately brute-force: circuits are applied to
//! full state vectors, unitaries are materialized column by column, and the
//! reference evolution comes from a symmetric eigendecomposition. This is
//! the measuring stick the compiled circuits are judged against, so it
//! favors transparency over scale and refuses to build unitaries beyond a
//! configurable qubit cap.
//!
//! Norms are spectral throughout: [`sigma_max`] runs power iteration on
//! `M* M` (never forming the product), and [`sector_distance`] compares a
//! circuit that carries one ancilla against a reference acting on the
//! working qubits alone, charging any amplitude that leaks out of the
//! ancilla-zero sector as error.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{BaseGate, Circuit, Gate, Polarity};
use crate::decompose::Star;

/// Widest circuit [`circuit_unitary`] will materialize by default
/// (`2^12 x 2^12` complex entries, 256 MiB).
pub const DEFAULT_UNITARY_CAP: usize = 12;

/// Relative tolerance for the power-iteration eigenvalue estimate.
const POWER_TOL: f64 = 1e-12;
/// Iteration cap for power iteration; hit only near-degenerate spectra.
const POWER_MAX_ITERS: usize = 20_000;

pub type StateVector = DVector<Complex64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("refusing to materialize a {num_qubits}-qubit unitary (cap is {cap} qubits)")]
    UnitaryCapExceeded { num_qubits: usize, cap: usize },
    #[error(
        "dimension mismatch: circuit unitary is {u_dim}x{u_dim} but reference is \
         {ref_dim}x{ref_dim} (need equal dimensions or exactly one extra qubit)"
    )]
    DimensionMismatch { u_dim: usize, ref_dim: usize },
}

/// `|index>` on `num_qubits` qubits. Qubit 0 is the least significant bit
/// of the basis index.
pub fn basis_state(num_qubits: usize, index: usize) -> StateVector {
    let dim = 1usize << num_qubits;
    assert!(index < dim, "basis index {index} out of range for {num_qubits} qubits");
    let mut v = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    v[index] = Complex64::new(1.0, 0.0);
    v
}

fn control_masks(gate: &Gate) -> (usize, usize) {
    let mut closed = 0usize;
    let mut open = 0usize;
    for &(q, pol) in &gate.controls {
        match pol {
            Polarity::Closed => closed |= 1 << q,
            Polarity::Open => open |= 1 << q,
        }
    }
    (closed, open)
}

/// Applies one gate to raw amplitudes (length must be a power of two
/// covering every qubit the gate touches).
fn apply_gate_slice(state: &mut [Complex64], gate: &Gate) {
    let (closed, open) = control_masks(gate);
    let active = |i: usize| (i & closed) == closed && (i & open) == 0;
    let n = state.len();

    match gate.base {
        BaseGate::X { target } => {
            let b = 1 << target;
            for i in 0..n {
                if i & b == 0 && active(i) {
                    state.swap(i, i | b);
                }
            }
        }
        BaseGate::H { target } => {
            let b = 1 << target;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..n {
                if i & b == 0 && active(i) {
                    let (a0, a1) = (state[i], state[i | b]);
                    state[i] = (a0 + a1) * s;
                    state[i | b] = (a0 - a1) * s;
                }
            }
        }
        BaseGate::Swap { a, b } => {
            let (ba, bb) = (1 << a, 1 << b);
            for i in 0..n {
                if i & ba != 0 && i & bb == 0 && active(i) {
                    state.swap(i, i ^ ba ^ bb);
                }
            }
        }
        BaseGate::Rx { theta, target } => {
            let b = 1 << target;
            let c = (theta / 2.0).cos();
            let ms = Complex64::new(0.0, -(theta / 2.0).sin());
            for i in 0..n {
                if i & b == 0 && active(i) {
                    let (a0, a1) = (state[i], state[i | b]);
                    state[i] = a0 * c + a1 * ms;
                    state[i | b] = a0 * ms + a1 * c;
                }
            }
        }
        BaseGate::Rz { theta, target } => {
            let b = 1 << target;
            let ph0 = Complex64::from_polar(1.0, -theta / 2.0);
            let ph1 = Complex64::from_polar(1.0, theta / 2.0);
            for i in 0..n {
                if active(i) {
                    state[i] *= if i & b == 0 { ph0 } else { ph1 };
                }
            }
        }
    }
}

/// Applies every gate of `circuit` to `state` in order.
pub fn apply_circuit(circuit: &Circuit, state: &mut StateVector) {
    assert_eq!(
        state.len(),
        1usize << circuit.num_qubits(),
        "state dimension does not match circuit width"
    );
    for gate in circuit.gates() {
        apply_gate_slice(state.as_mut_slice(), gate);
    }
}

/// Materializes the full unitary of `circuit` by simulating each basis
/// column, in parallel. Refuses widths above `cap` qubits.
pub fn circuit_unitary(circuit: &Circuit, cap: usize) -> Result<DMatrix<Complex64>, SimError> {
    let q = circuit.num_qubits();
    if q > cap {
        return Err(SimError::UnitaryCapExceeded { num_qubits: q, cap });
    }
    let dim = 1usize << q;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    data.par_chunks_mut(dim).enumerate().for_each(|(col, chunk)| {
        chunk[col] = Complex64::new(1.0, 0.0);
        for gate in circuit.gates() {
            apply_gate_slice(chunk, gate);
        }
    });
    Ok(DMatrix::from_vec(dim, dim, data))
}

/// Eigendecomposition of a real symmetric matrix by the cyclic Jacobi
/// method: returns `(eigenvalues, Q)` with `H = Q diag(lambda) Q^T` and `Q`
/// orthogonal. Jacobi is unconditionally stable on symmetric input and
/// fully deterministic, which makes it the right solver for an oracle:
/// shift-based QR eigensolvers can fail to converge on patterned sparse
/// adjacencies, and an oracle must never be the flaky side of a check.
pub fn jacobi_symmetric_eigen(h: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "eigendecomposition needs a square matrix");
    let mut a = h.clone();
    let mut q = DMatrix::<f64>::identity(n, n);
    if n <= 1 {
        return (a.diagonal(), q);
    }

    let scale = h.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return (a.diagonal(), q);
    }
    let tol = 1e-15 * scale;
    const MAX_SWEEPS: usize = 64;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)] * a[(r, c)])
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apr = a[(p, r)];
                if apr == 0.0 {
                    continue;
                }
                // Symmetric Schur rotation zeroing a[(p, r)] (stable form).
                let tau = (a[(r, r)] - a[(p, p)]) / (2.0 * apr);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // a <- J^T a J and q <- q J for the plane rotation J(p, r).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akr = a[(k, r)];
                    a[(k, p)] = c * akp - s * akr;
                    a[(k, r)] = s * akp + c * akr;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let ark = a[(r, k)];
                    a[(p, k)] = c * apk - s * ark;
                    a[(r, k)] = s * apk + c * ark;
                }
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
    }
    (a.diagonal(), q)
}

/// `exp(-i H t)` for a real symmetric `H`, via eigendecomposition.
pub fn exact_evolution(h: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
    assert_eq!(h.nrows(), h.ncols(), "evolution needs a square matrix");
    assert!(
        (h - h.transpose()).amax() <= 1e-12 * (1.0 + h.amax()),
        "evolution needs a symmetric matrix"
    );
    let (eigenvalues, q) = jacobi_symmetric_eigen(h);
    let v = q.map(|x| Complex64::new(x, 0.0));
    let phases = DVector::from_iterator(
        h.nrows(),
        eigenvalues.iter().map(|&lam| Complex64::from_polar(1.0, -lam * t)),
    );
    &v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

/// Closed-form `exp(-i gamma S t)` for the adjacency matrix `S` of a single
/// star, embedded in `2^num_qubits` dimensions (identity outside the star).
///
/// `S` has rank 2: eigenvalues `+-sqrt(M)` (`M` = leaf count) with
/// eigenvectors `(|center> +- |phi>)/sqrt(2)` where `|phi>` is the uniform
/// superposition over leaves. The evolution is the identity plus rank-2
/// corrections from those two eigenpairs.
pub fn exact_star_evolution(
    star: &Star,
    gamma: f64,
    t: f64,
    num_qubits: usize,
) -> DMatrix<Complex64> {
    let dim = 1usize << num_qubits;
    for v in star.vertices() {
        assert!(v < dim, "star vertex {v} does not fit in {num_qubits} qubits");
    }
    let m = star.num_leaves() as f64;
    let lambda = m.sqrt();

    let mut vp = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    let mut vm = vp.clone();
    let wc = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let wl = Complex64::new(1.0 / (2.0 * m).sqrt(), 0.0);
    vp[star.center] = wc;
    vm[star.center] = wc;
    for &leaf in &star.leaves {
        vp[leaf] = wl;
        vm[leaf] = -wl;
    }

    let cp = Complex64::from_polar(1.0, -gamma * lambda * t) - Complex64::new(1.0, 0.0);
    let cm = Complex64::from_polar(1.0, gamma * lambda * t) - Complex64::new(1.0, 0.0);

    let mut u = DMatrix::identity(dim, dim);
    // Rank-2 update touches only the star's rows and columns.
    for r in star.vertices() {
        for c in star.vertices() {
            u[(r, c)] += cp * vp[r] * vp[c].conj() + cm * vm[r] * vm[c].conj();
        }
    }
    u
}

/// Largest singular value, by power iteration on `M* M` (applied as two
/// mat-vecs per step; the Gram matrix is never formed).
pub fn sigma_max(m: &DMatrix<Complex64>) -> f64 {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let fro2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    if fro2 == 0.0 {
        return 0.0;
    }

    // Deterministic pseudo-random start: orthogonality to the top singular
    // vector has probability zero, and runs are reproducible.
    let mut rng = ChaCha8Rng::seed_from_u64(0x51_6d_a0);
    let mut v = DVector::from_fn(cols, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    v /= Complex64::new(v.norm(), 0.0);

    let mut lambda = 0.0f64;
    for _ in 0..POWER_MAX_ITERS {
        let w = m * &v; // M v
        let new_lambda = w.norm_squared(); // v* M*M v  (Rayleigh quotient)
        let u = m.ad_mul(&w); // M* M v
        let norm = u.norm();
        if norm == 0.0 {
            // v landed exactly in the null space of a nonzero matrix;
            // restart from a fresh direction.
            v = DVector::from_fn(cols, |_, _| {
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            v /= Complex64::new(v.norm(), 0.0);
            lambda = 0.0;
            continue;
        }
        v = u / Complex64::new(norm, 0.0);
        if (new_lambda - lambda).abs() <= POWER_TOL * new_lambda.max(1.0) {
            return new_lambda.sqrt();
        }
        lambda = new_lambda;
    }
    lambda.sqrt()
}

/// Spectral distance `||a - b||` between equally sized matrices.
pub fn spectral_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "spectral distance needs equal shapes");
    sigma_max(&(a - b))
}

/// Spectral norm of a real matrix.
pub fn spectral_norm_real(m: &DMatrix<f64>) -> f64 {
    sigma_max(&m.map(|x| Complex64::new(x, 0.0)))
}

/// How far `u` is from unitary: `||u* u - I||`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let gram = u.ad_mul(u);
    let eye = DMatrix::identity(gram.nrows(), gram.ncols());
    sigma_max(&(gram - eye))
}

/// Spectral distance between a compiled unitary and the reference
/// evolution, restricted to the reference's sector.
///
/// If `u` and `reference` have equal dimension this is plain
/// [`spectral_distance`]. If `u` carries exactly one extra qubit (the
/// ancilla, as the most significant bit), the comparison restricts inputs
/// to the ancilla-zero sector but keeps all output rows, so amplitude that
/// leaks into the ancilla-one sector counts as error rather than hiding.
pub fn sector_distance(
    u: &DMatrix<Complex64>,
    reference: &DMatrix<Complex64>,
) -> Result<f64, SimError> {
    let ud = u.nrows();
    let rd = reference.nrows();
    if ud == rd {
        return Ok(spectral_distance(u, reference));
    }
    if ud != rd * 2 {
        return Err(SimError::DimensionMismatch { u_dim: ud, ref_dim: rd });
    }
    let mut diff = u.columns(0, rd).into_owned();
    for r in 0..rd {
        for c in 0..rd {
            diff[(r, c)] -= reference[(r, c)];
        }
    }
    Ok(sigma_max(&diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    const EPS: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat2(entries: [Complex64; 4]) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &entries)
    }

    #[test]
    fn hadamard_on_zero_gives_plus() {
        let mut circ = Circuit::new(1);
        circ.push(Gate::h(0)).unwrap();
        let mut psi = basis_state(1, 0);
        apply_circuit(&circ, &mut psi);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi[0] - c(s, 0.0)).norm() < EPS);
        assert!((psi[1] - c(s, 0.0)).norm() < EPS);
    }

    #[test]
    fn open_control_fires_on_zero_only() {
        let mut circ = Circuit::new(2);
        circ.push(Gate::x(0).controlled(1, Polarity::Open)).unwrap();
        let mut psi = basis_state(2, 0b00);
        apply_circuit(&circ, &mut psi);
        assert!((psi[0b01] - c(1.0, 0.0)).norm() < EPS);

        let mut psi = basis_state(2, 0b10);
        apply_circuit(&circ, &mut psi);
        assert!((psi[0b10] - c(1.0, 0.0)).norm() < EPS, "control was set; gate must not fire");
    }

    #[test]
    fn closed_control_fires_on_one_only() {
        let mut circ = Circuit::new(2);
        circ.push(Gate::x(0).controlled(1, Polarity::Closed)).unwrap();
        let mut psi = basis_state(2, 0b10);
        apply_circuit(&circ, &mut psi);
        assert!((psi[0b11] - c(1.0, 0.0)).norm() < EPS);
    }

    #[test]
    fn swap_moves_amplitude() {
        let mut circ = Circuit::new(2);
        circ.push(Gate::swap(0, 1)).unwrap();
        let mut psi = basis_state(2, 0b01);
        apply_circuit(&circ, &mut psi);
        assert!((psi[0b10] - c(1.0, 0.0)).norm() < EPS);
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        let mut circ = Circuit::new(1);
        circ.push(Gate::rx(std::f64::consts::PI, 0)).unwrap();
        let u = circuit_unitary(&circ, DEFAULT_UNITARY_CAP).unwrap();
        let want = mat2([c(0.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0)]);
        assert!(spectral_distance(&u, &want) < EPS);
    }

    #[test]
    fn rz_applies_half_angle_phases() {
        let theta = 0.7;
        let mut circ = Circuit::new(1);
        circ.push(Gate::rz(theta, 0)).unwrap();
        let u = circuit_unitary(&circ, DEFAULT_UNITARY_CAP).unwrap();
        let want = mat2([
            Complex64::from_polar(1.0, -theta / 2.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Complex64::from_polar(1.0, theta / 2.0),
        ]);
        assert!(spectral_distance(&u, &want) < EPS);
    }

    #[test]
    fn unitary_cap_is_enforced() {
        let circ = Circuit::new(13);
        let err = circuit_unitary(&circ, 12).unwrap_err();
        assert_eq!(err, SimError::UnitaryCapExceeded { num_qubits: 13, cap: 12 });
    }

    #[test]
    fn circuit_inverse_gives_identity_unitary() {
        let mut circ = Circuit::new(3);
        circ.push(Gate::h(0)).unwrap();
        circ.push(Gate::rx(0.3, 1).controlled(0, Polarity::Closed)).unwrap();
        circ.push(Gate::swap(1, 2).controlled(0, Polarity::Open)).unwrap();
        circ.push(Gate::rz(1.1, 2)).unwrap();
        let mut whole = circ.clone();
        whole.append(&circ.inverse()).unwrap();
        let u = circuit_unitary(&whole, DEFAULT_UNITARY_CAP).unwrap();
        let eye = DMatrix::identity(8, 8);
        assert!(spectral_distance(&u, &eye) < 1e-12);
        assert!(unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn exact_evolution_of_single_edge_is_a_rotation() {
        let gamma = 0.8;
        let t = 1.3;
        let mut h = DMatrix::zeros(2, 2);
        h[(0, 1)] = gamma;
        h[(1, 0)] = gamma;
        let u = exact_evolution(&h, t);
        let (cos, sin) = ((gamma * t).cos(), (gamma * t).sin());
        let want = mat2([c(cos, 0.0), c(0.0, -sin), c(0.0, -sin), c(cos, 0.0)]);
        assert!(spectral_distance(&u, &want) < 1e-12);
    }

    #[test]
    fn star_closed_form_matches_eigendecomposition() {
        // Star with center 2 and leaves {0, 1, 3} inside 2 qubits.
        let star = Star::new(2, [0, 1, 3]).unwrap();
        let gamma = 0.6;
        let t = 0.9;
        let closed = exact_star_evolution(&star, gamma, t, 2);

        let g = Graph::new(4, [(0, 2), (1, 2), (2, 3)]).unwrap();
        let h = g.padded_adjacency(4096).unwrap() * gamma;
        let dense = exact_evolution(&h, t);
        assert!(spectral_distance(&closed, &dense) < 1e-12);
        assert!(unitarity_defect(&closed) < 1e-12);
    }

    #[test]
    fn star_closed_form_is_identity_off_the_star() {
        let star = Star::new(0, [1]).unwrap();
        let u = exact_star_evolution(&star, 1.0, 1.0, 2);
        for r in 2..4 {
            for cidx in 0..4 {
                let want = if r == cidx { 1.0 } else { 0.0 };
                assert!((u[(r, cidx)] - c(want, 0.0)).norm() < EPS);
                assert!((u[(cidx, r)] - c(want, 0.0)).norm() < EPS);
            }
        }
    }

    #[test]
    fn sigma_max_of_x_minus_identity_is_two() {
        let x = mat2([c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let eye = DMatrix::identity(2, 2);
        assert!((spectral_distance(&x, &eye) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn spectral_norm_of_cycle_adjacency_is_two() {
        let edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        let g = Graph::new(8, edges).unwrap();
        let a = g.adjacency_matrix().unwrap().into_matrix();
        assert!((spectral_norm_real(&a) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn jacobi_reconstructs_and_stays_orthogonal() {
        // Deterministic dense symmetric test matrix.
        let n = 12;
        let mut h = DMatrix::<f64>::zeros(n, n);
        for r in 0..n {
            for col in 0..=r {
                let v = ((r * 31 + col * 17 + 7) % 23) as f64 / 11.0 - 1.0;
                h[(r, col)] = v;
                h[(col, r)] = v;
            }
        }
        let (eigenvalues, q) = jacobi_symmetric_eigen(&h);
        let reconstructed = &q * DMatrix::from_diagonal(&eigenvalues) * q.transpose();
        assert!((&reconstructed - &h).amax() <= 1e-12 * h.amax().max(1.0));
        let gram = q.transpose() * &q;
        assert!((gram - DMatrix::<f64>::identity(n, n)).amax() <= 1e-12);
    }

    #[test]
    fn jacobi_finds_the_cycle_spectrum() {
        let edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        let g = Graph::new(8, edges).unwrap();
        let a = g.adjacency_matrix().unwrap().into_matrix();
        let (eigenvalues, _) = jacobi_symmetric_eigen(&a);
        let mut got: Vec<f64> = eigenvalues.iter().copied().collect();
        got.sort_by(f64::total_cmp);
        let mut expected: Vec<f64> =
            (0..8).map(|j| 2.0 * (std::f64::consts::TAU * j as f64 / 8.0).cos()).collect();
        expected.sort_by(f64::total_cmp);
        for (g_val, e_val) in got.iter().zip(&expected) {
            assert!((g_val - e_val).abs() <= 1e-10, "{got:?} vs {expected:?}");
        }
    }

    #[test]
    fn evolution_oracle_survives_patterned_adjacencies() {
        // This star's embedded adjacency makes shift-based QR eigensolvers
        // fail to converge; the oracle must handle it.
        let star = Star::new(12, [1, 9, 11, 13, 14]).unwrap();
        let dim = 16;
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for &leaf in &star.leaves {
            h[(star.center, leaf)] = 1.0;
            h[(leaf, star.center)] = 1.0;
        }
        let gamma = 5.96;
        let u = exact_evolution(&(h.clone() * gamma), 1.0);
        assert!(u.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        assert!(unitarity_defect(&u) <= 1e-12);
        // exp(-iHt) commutes with H.
        let hc = h.map(|x| Complex64::new(gamma * x, 0.0));
        assert!(spectral_distance(&(&hc * &u), &(&u * &hc)) <= 1e-9);
        // And the closed-form star oracle agrees.
        let closed = exact_star_evolution(&star, gamma, 1.0, 4);
        assert!(spectral_distance(&u, &closed) <= 1e-12);
    }

    #[test]
    fn sigma_max_of_zero_matrix_is_zero() {
        let z = DMatrix::from_element(3, 2, c(0.0, 0.0));
        assert_eq!(sigma_max(&z), 0.0);
    }

    #[test]
    fn sector_distance_equal_dims_reduces_to_plain_distance() {
        let x = mat2([c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let eye = DMatrix::identity(2, 2);
        assert!((sector_distance(&x, &eye).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn sector_distance_sees_clean_block_embedding_as_zero() {
        // u = diag(reference, anything) acts as `reference` on the
        // ancilla-zero sector.
        let theta = 0.4f64;
        let reference = mat2([
            c(theta.cos(), 0.0),
            c(0.0, -theta.sin()),
            c(0.0, -theta.sin()),
            c(theta.cos(), 0.0),
        ]);
        let mut u = DMatrix::identity(4, 4);
        for r in 0..2 {
            for col in 0..2 {
                u[(r, col)] = reference[(r, col)];
            }
        }
        assert!(sector_distance(&u, &reference).unwrap() < EPS);
    }

    #[test]
    fn sector_distance_charges_leakage() {
        // u maps |00> to |10> (ancilla flips on): the working sector sees
        // the full amplitude vanish, so the distance must be at least 1.
        let reference = DMatrix::identity(2, 2);
        let mut u = DMatrix::identity(4, 4);
        u[(0, 0)] = c(0.0, 0.0);
        u[(2, 0)] = c(1.0, 0.0);
        u[(2, 2)] = c(0.0, 0.0);
        u[(0, 2)] = c(1.0, 0.0);
        let d = sector_distance(&u, &reference).unwrap();
        assert!(d >= 1.0 - EPS, "leakage distance {d} should not be hidden");
    }

    #[test]
    fn sector_distance_rejects_bad_shapes() {
        let a = DMatrix::identity(8, 8);
        let b = DMatrix::identity(2, 2);
        assert_eq!(
            sector_distance(&a, &b).unwrap_err(),
            SimError::DimensionMismatch { u_dim: 8, ref_dim: 2 }
        );
    }
}
