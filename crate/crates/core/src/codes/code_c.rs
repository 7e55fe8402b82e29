use num_complex::Complex64;
use rand::Rng;

use super::{check_strictly_increasing, project_to_logical, QuantumCode, SparseState};
use crate::error::{Error, Result};
use crate::qudit::{DensityMatrix, PauliString, QuditSpace, StateVector, PROTOCOL_TOL};

/// The `n = 2m` qubit code stabilised by `X^{⊗n}` and `Z^{⊗n}`.
///
/// Logical basis index `a` has bits `(s₁..s_{m−1}, t₁..t_{m−1})`, most
/// significant first; `s_m` and `t_m` are fixed by even parity. Qubits
/// `2j, 2j+1` (0-based) carry the Bell pair `|s_{j+1}; t_{j+1}⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilizerCodeC {
    n: usize,
}

impl StabilizerCodeC {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::param(format!("code C needs an even number of qubits ≥ 4, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn logical_qubits(&self) -> usize {
        self.n - 2
    }

    /// `(s, t)` label bits of a logical basis index, parity bits appended.
    pub fn labels(&self, logical: usize) -> (Vec<u8>, Vec<u8>) {
        let m = self.n / 2;
        let bit = |i: usize| ((logical >> (2 * (m - 1) - 1 - i)) & 1) as u8;
        let mut s: Vec<u8> = (0..m - 1).map(bit).collect();
        let mut t: Vec<u8> = (m - 1..2 * (m - 1)).map(bit).collect();
        s.push(s.iter().fold(0, |a, b| a ^ b));
        t.push(t.iter().fold(0, |a, b| a ^ b));
        (s, t)
    }

    /// Projector onto the stabilised subspace, `(I + X^n)(I + Z^n)/4`.
    pub fn projector_overlap(&self, psi: &StateVector) -> Result<f64> {
        let (px, post) = psi.project(&PauliString::x_all(self.n), 1)?;
        let Some(post) = post else { return Ok(0.0) };
        let (pz, _) = post.project(&PauliString::z_all(self.n), 1)?;
        Ok(px * pz)
    }

    /// Exact erasure channel: inserts `|0⟩` at `missing`, measures both
    /// stabilisers, corrects the new qubit and averages over outcomes.
    pub fn recover_erasure_channel(&self, rho: &DensityMatrix, missing: usize) -> Result<DensityMatrix> {
        self.check_erased(rho, missing)?;
        let full = rho.insert_ground(missing, 2)?;
        let dim = full.dim();
        let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
        for x_out in [1i8, -1] {
            let (px, after_x) = full.project(&PauliString::x_all(self.n), x_out)?;
            let Some(after_x) = after_x else { continue };
            for z_out in [1i8, -1] {
                let (pz, after_z) = after_x.project(&PauliString::z_all(self.n), z_out)?;
                let Some(after_z) = after_z else { continue };
                let fixed = self.correct(&after_z, missing, x_out, z_out)?;
                for (a, v) in acc.iter_mut().zip(fixed.entries()) {
                    *a += v * (px * pz);
                }
            }
        }
        Ok(DensityMatrix::from_raw(QuditSpace::qubits(self.n), acc))
    }

    fn check_erased(&self, rho: &DensityMatrix, missing: usize) -> Result<()> {
        if missing >= self.n {
            return Err(Error::IndexOutOfRange { index: missing, len: self.n });
        }
        if rho.space() != &QuditSpace::qubits(self.n - 1) {
            return Err(Error::DimensionMismatch { expected: 1 << (self.n - 1), found: rho.dim() });
        }
        Ok(())
    }

    fn correct(&self, rho: &DensityMatrix, missing: usize, x_out: i8, z_out: i8) -> Result<DensityMatrix> {
        let space = QuditSpace::qubits(self.n);
        // Z on the new qubit flips the X^n outcome and X flips the Z^n outcome
        let fix = PauliString::single(space, missing, usize::from(z_out < 0), usize::from(x_out < 0))?;
        rho.conjugate(&fix)
    }
}

impl QuantumCode for StabilizerCodeC {
    fn name(&self) -> String {
        format!("codeC({})", self.n)
    }

    fn logical_space(&self) -> QuditSpace {
        QuditSpace::qubits(self.n - 2)
    }

    fn physical_space(&self) -> QuditSpace {
        QuditSpace::qubits(self.n)
    }

    fn shares(&self) -> usize {
        self.n
    }

    fn threshold(&self) -> usize {
        self.n - 1
    }

    fn forbidden_max(&self) -> usize {
        1
    }

    fn encode_basis(&self, logical: usize) -> SparseState {
        let (s, t) = self.labels(logical);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // each pair contributes |0,t⟩ + (−1)^s |1,1−t⟩
        let mut terms: SparseState = vec![(0, Complex64::new(1.0, 0.0))];
        for (&sk, &tk) in s.iter().zip(&t) {
            let a = tk as usize;
            let b = 2 + (1 - tk as usize);
            let sign = if sk == 1 { -h } else { h };
            terms = terms
                .into_iter()
                .flat_map(|(idx, amp)| [(idx * 4 + a, amp * h), (idx * 4 + b, amp * sign)])
                .collect();
        }
        terms
    }

    fn decode_subset(&self, reduced: &DensityMatrix, subset: &[usize]) -> Result<DensityMatrix> {
        check_strictly_increasing(subset)?;
        if subset.len() == self.n {
            return project_to_logical(self, reduced);
        }
        if subset.len() + 1 != self.n {
            return Err(Error::InsufficientShares { needed: self.n - 1, got: subset.len() });
        }
        let missing = (0..self.n).find(|i| !subset.contains(i)).expect("one index is missing");
        let full = self.recover_erasure_channel(reduced, missing)?;
        project_to_logical(self, &full)
    }
}

pub fn code_c_encode(logical: &StateVector, code: &StabilizerCodeC) -> Result<StateVector> {
    code.encode(logical)
}

/// Erasure recovery with sampled stabiliser outcomes; the output is the
/// pure code state.
pub fn code_c_recover_erasure<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    missing: usize,
    code: &StabilizerCodeC,
    rng: &mut R,
) -> Result<StateVector> {
    code.check_erased(rho, missing)?;
    let mut state = rho.insert_ground(missing, 2)?;
    let mut outcomes = [1i8; 2];
    for (slot, g) in [PauliString::x_all(code.n), PauliString::z_all(code.n)].iter().enumerate() {
        let (p_plus, plus) = state.project(g, 1)?;
        let draw: f64 = rng.gen();
        let (outcome, post) = match (draw < p_plus, plus) {
            (true, Some(post)) => (1, post),
            (_, plus) => match (state.project(g, -1)?.1, plus) {
                (Some(post), _) => (-1, post),
                (None, Some(post)) => (1, post),
                (None, None) => return Err(Error::Recovery("stabiliser projection has no support".into())),
            },
        };
        outcomes[slot] = outcome;
        state = post;
    }
    let fixed = code.correct(&state, missing, outcomes[0], outcomes[1])?;
    fixed
        .as_pure(PROTOCOL_TOL)
        .ok_or_else(|| Error::Recovery("erased state is not consistent with a code state".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{bell_state, fidelity, tensor, trace_distance};
    use rand::SeedableRng;

    fn random_logical(qubits: usize, seed: u64) -> StateVector {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let amps = (0..1 << qubits).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        StateVector::normalized(QuditSpace::qubits(qubits), amps).unwrap()
    }

    #[test]
    fn zero_logical_is_two_phi_plus() {
        let code = StabilizerCodeC::new(4).unwrap();
        let enc = code_c_encode(&StateVector::basis(QuditSpace::qubits(2), 0).unwrap(), &code).unwrap();
        let phi = bell_state(0, 0).unwrap();
        let expected = tensor(&[phi.clone(), phi]).unwrap();
        assert!(enc.overlap(&expected).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn labels_follow_lexicographic_order() {
        let code = StabilizerCodeC::new(6).unwrap();
        // a = 0b01_10: s = (0,1), t = (1,0)
        assert_eq!(code.labels(0b0110), (vec![0, 1, 1], vec![1, 0, 1]));
        let enc = code.encode(&StateVector::basis(QuditSpace::qubits(4), 0b0110).unwrap()).unwrap();
        let expected = tensor(&[bell_state(0, 1).unwrap(), bell_state(1, 0).unwrap(), bell_state(1, 1).unwrap()]).unwrap();
        assert!(enc.overlap(&expected).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn encoded_states_are_stabilised() {
        for n in [4, 6] {
            let code = StabilizerCodeC::new(n).unwrap();
            for a in 0..1 << (n - 2) {
                let enc = code.encode(&StateVector::basis(code.logical_space(), a).unwrap()).unwrap();
                for g in [PauliString::x_all(n), PauliString::z_all(n)] {
                    let moved = enc.apply_pauli(&g).unwrap();
                    assert!(moved.overlap(&enc).unwrap() > 1.0 - 1e-12);
                    assert!((enc.inner(&moved).unwrap().re - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn code_projector_rank() {
        // rank of (I + X^n)(I + Z^n)/4 by summing its diagonal in the computational basis
        for n in [4usize, 6] {
            let dim = 1 << n;
            let space = QuditSpace::qubits(n);
            let mut trace = 0.0;
            let code = StabilizerCodeC::new(n).unwrap();
            for i in 0..dim {
                let e = StateVector::basis(space.clone(), i).unwrap();
                trace += code.projector_overlap(&e).unwrap();
            }
            assert!((trace - (1 << (n - 2)) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn erasure_of_each_qubit_of_phi_phi() {
        let code = StabilizerCodeC::new(4).unwrap();
        let enc = code.encode(&StateVector::basis(code.logical_space(), 0).unwrap()).unwrap();
        for missing in 0..4 {
            let keep: Vec<usize> = (0..4).filter(|&i| i != missing).collect();
            let rho = enc.reduced(&keep).unwrap();
            let exact = code.recover_erasure_channel(&rho, missing).unwrap();
            assert!(fidelity(&enc, &exact).unwrap() > 1.0 - 1e-12);
            for seed in 0..8 {
                let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
                let rec = code_c_recover_erasure(&rho, missing, &code, &mut rng).unwrap();
                assert!(rec.overlap(&enc).unwrap() > 1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn erasure_recovery_on_random_logical_states() {
        for (n, base) in [(4usize, 100u64), (6, 200)] {
            let code = StabilizerCodeC::new(n).unwrap();
            for case in 0..20u64 {
                let logical = random_logical(n - 2, base + case);
                let enc = code.encode(&logical).unwrap();
                let missing = (case as usize) % n;
                let keep: Vec<usize> = (0..n).filter(|&i| i != missing).collect();
                let rho = enc.reduced(&keep).unwrap();
                let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(case);
                let rec = code_c_recover_erasure(&rho, missing, &code, &mut rng).unwrap();
                assert!(rec.overlap(&enc).unwrap() > 1.0 - 1e-9, "n={n} case={case}");
                let decoded = code.reconstruct(&enc, &keep).unwrap();
                assert!(fidelity(&logical, &decoded).unwrap() > 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn intact_state_has_trivial_syndrome() {
        let code = StabilizerCodeC::new(6).unwrap();
        let enc = code.encode(&random_logical(4, 1)).unwrap();
        assert!((code.projector_overlap(&enc).unwrap() - 1.0).abs() < 1e-12);
        let decoded = code.reconstruct(&enc, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(fidelity(&random_logical(4, 1), &decoded).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn single_qubit_is_maximally_mixed() {
        let code = StabilizerCodeC::new(4).unwrap();
        let mm = DensityMatrix::maximally_mixed(QuditSpace::qubits(1));
        for seed in 0..5 {
            let enc = code.encode(&random_logical(2, seed)).unwrap();
            for q in 0..4 {
                assert!(trace_distance(&enc.reduced(&[q]).unwrap(), &mm).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StabilizerCodeC::new(5).is_err());
        assert!(StabilizerCodeC::new(2).is_err());
        let code = StabilizerCodeC::new(4).unwrap();
        let enc = code.encode(&random_logical(2, 0)).unwrap();
        assert!(matches!(code.reconstruct(&enc, &[0, 1]), Err(Error::InsufficientShares { .. })));
    }
}
