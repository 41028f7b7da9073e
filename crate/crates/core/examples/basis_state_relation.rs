// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Compares the computational-basis state infidelity with the unitary
//! infidelity on random relative unitaries `W = U†V`.
//!
//! Run with `cargo run --release -p geodesic-core --example basis_state_relation`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use geodesic_core::baselines::{state_infidelity_batch, StateBatch};
use geodesic_core::manifold::{fidelity_with, FidelityKind};
use geodesic_core::pauli::algebra_dim;
use geodesic_core::{LieVector, SuManifold};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    println!("qubits scale  samples  mean(I_basis/I_unitary)  min  max  max|I_basis - I_haar_pred|");
    for qubits in [2usize, 3] {
        let m = SuManifold::new(qubits).unwrap();
        let n = m.dim() as f64;
        let basis = StateBatch::computational_basis(m.dim());
        let id = LieVector::zeros(qubits);
        for scale in [1e-3, 1e-2, 1e-1, 1.0] {
            let mut ratios = Vec::new();
            let mut haar_gap: f64 = 0.0;
            for _ in 0..200 {
                let h = geodesic_core::run::uniform_vector(qubits, scale, &mut rng);
                let w = m.unitary_from_params(&h).unwrap();
                // U = I, so the relative unitary is the target itself.
                let i_basis = state_infidelity_batch(&m, &id, &w, &basis).unwrap();
                let u = m.unitary_from_params(&id).unwrap();
                let i_unitary = 1.0 - fidelity_with(&u, &w, FidelityKind::RealPart).unwrap();
                let tr = w.matrix().trace().norm();
                let i_haar = 1.0 - (tr * tr + n) / (n * (n + 1.0));
                ratios.push(i_basis / i_unitary);
                haar_gap = haar_gap.max((i_basis - i_haar).abs());
            }
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let max = ratios.iter().copied().fold(0.0, f64::max);
            println!(
                "{qubits:>6} {scale:>5} {:>8}  {mean:>22.4} {min:>5.3} {max:>5.3} {haar_gap:>10.3e}  (dim su = {})",
                ratios.len(),
                algebra_dim(qubits)
            );
        }
    }

    // Diagonal relative unitaries are invisible to basis states.
    let m = SuManifold::new(2).unwrap();
    let zz = "ZZ".parse::<geodesic_core::PauliWord>().unwrap().index();
    let w = m.unitary_from_params(&LieVector::basis(2, zz).unwrap().scaled(0.7)).unwrap();
    let i_basis = state_infidelity_batch(&m, &LieVector::zeros(2), &w, &StateBatch::computational_basis(4)).unwrap();
    let i_unitary = 1.0 - fidelity_with(&m.unitary_from_params(&LieVector::zeros(2)).unwrap(), &w, FidelityKind::RealPart).unwrap();
    println!("W = exp(0.7i ZZ): I_basis = {i_basis:.3e}, I_unitary = {i_unitary:.3e}");
}
