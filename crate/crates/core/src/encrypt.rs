//! Classical encryption of quantum states: the qudit one-time pad and the
//! parity-constrained Pauli strings `B_pq` acting on code C.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codes::StabilizerCodeC;
use crate::error::{Error, Result};
use crate::qudit::{generalized_pauli, trace_distance, PauliString, QuditSpace, StateVector};

/// One-time-pad key `(k, l)` for a single `d`-level system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuditKey {
    pub k: usize,
    pub l: usize,
    pub d: usize,
}

impl QuditKey {
    pub fn new(k: usize, l: usize, d: usize) -> Result<Self> {
        if d < 2 || k >= d || l >= d {
            return Err(Error::param(format!("key ({k},{l}) is not in Z_{d} × Z_{d}")));
        }
        Ok(Self { k, l, d })
    }

    pub fn sample<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        Self { k: rng.gen_range(0..d), l: rng.gen_range(0..d), d }
    }

    /// `X^k Z^l`.
    pub fn operator(&self) -> PauliString {
        generalized_pauli(self.d, self.k, self.l).expect("validated key")
    }

    /// The operator placed on subsystem `site` of `space`.
    pub fn operator_on(&self, space: &QuditSpace, site: usize) -> Result<PauliString> {
        if space.dims().get(site) != Some(&self.d) {
            return Err(Error::DimensionMismatch { expected: self.d, found: space.dims().get(site).copied().unwrap_or(0) });
        }
        PauliString::single(space.clone(), site, self.k, self.l)
    }
}

/// `|j⟩ → ω^{jl}|j + k⟩` on a single qudit.
pub fn encrypt_qudit(state: &StateVector, key: &QuditKey) -> Result<StateVector> {
    if state.space().dims() != [key.d] {
        return Err(Error::DimensionMismatch { expected: key.d, found: state.dim() });
    }
    state.apply_pauli(&key.operator())
}

pub fn decrypt_qudit(state: &StateVector, key: &QuditKey) -> Result<StateVector> {
    if state.space().dims() != [key.d] {
        return Err(Error::DimensionMismatch { expected: key.d, found: state.dim() });
    }
    state.apply_pauli(&key.operator().inverse())
}

/// Encrypts subsystem `i` of `state` with `keys[i]`.
pub fn encrypt_qudits(state: &StateVector, keys: &[QuditKey]) -> Result<StateVector> {
    state.apply_pauli(&key_string(state.space(), keys)?)
}

pub fn decrypt_qudits(state: &StateVector, keys: &[QuditKey]) -> Result<StateVector> {
    state.apply_pauli(&key_string(state.space(), keys)?.inverse())
}

/// `⊗ X^{k_i} Z^{l_i}` over `space`.
pub fn key_string(space: &QuditSpace, keys: &[QuditKey]) -> Result<PauliString> {
    if keys.len() != space.len() {
        return Err(Error::DimensionMismatch { expected: space.len(), found: keys.len() });
    }
    for (key, &d) in keys.iter().zip(space.dims()) {
        if key.d != d {
            return Err(Error::DimensionMismatch { expected: d, found: key.d });
        }
    }
    PauliString::new(space.clone(), keys.iter().map(|k| k.k).collect(), keys.iter().map(|k| k.l).collect(), Complex64::new(1.0, 0.0))
}

/// Two even-parity `n`-bit strings: `p` selects Z factors, `q` X factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliKeyPair {
    p: Vec<bool>,
    q: Vec<bool>,
}

impl PauliKeyPair {
    pub fn new(p: Vec<bool>, q: Vec<bool>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
        }
        for (name, bits) in [("p", &p), ("q", &q)] {
            if bits.iter().filter(|&&b| b).count() % 2 != 0 {
                return Err(Error::ParityViolation(format!("{name} has odd weight")));
            }
        }
        Ok(Self { p, q })
    }

    pub fn zero(n: usize) -> Self {
        Self { p: vec![false; n], q: vec![false; n] }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[bool] {
        &self.p
    }

    pub fn q(&self) -> &[bool] {
        &self.q
    }

    /// Componentwise XOR; the product of the two operators up to sign.
    pub fn xor(&self, other: &PauliKeyPair) -> PauliKeyPair {
        let x = |a: &[bool], b: &[bool]| a.iter().zip(b).map(|(u, v)| u ^ v).collect();
        PauliKeyPair { p: x(&self.p, &other.p), q: x(&self.q, &other.q) }
    }

    pub fn flip_p(&self) -> PauliKeyPair {
        PauliKeyPair { p: self.p.iter().map(|b| !b).collect(), q: self.q.clone() }
    }

    pub fn flip_q(&self) -> PauliKeyPair {
        PauliKeyPair { p: self.p.clone(), q: self.q.iter().map(|b| !b).collect() }
    }
}

/// Orbit of a key pair under `p → p̄`, `q → q̄`, named by the member with
/// `p₁ = q₁ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KeyEquivalenceClass {
    pub canonical: PauliKeyPair,
}

pub fn canonical_class(pair: &PauliKeyPair) -> KeyEquivalenceClass {
    let mut c = pair.clone();
    if c.p.first() == Some(&true) {
        c = c.flip_p();
    }
    if c.q.first() == Some(&true) {
        c = c.flip_q();
    }
    KeyEquivalenceClass { canonical: c }
}

/// `B_{p₁q₁} ⊗ … ⊗ B_{pₙqₙ}` with `B₁₁ = ZX`, for arbitrary bit strings.
pub fn bpq_from_bits(p: &[bool], q: &[bool]) -> Result<PauliString> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    let n = p.len();
    // ZX = −XZ on each site where both bits are set
    let both = p.iter().zip(q).filter(|(a, b)| **a && **b).count();
    let phase = Complex64::new(if both % 2 == 1 { -1.0 } else { 1.0 }, 0.0);
    PauliString::new(
        QuditSpace::qubits(n),
        q.iter().map(|&b| usize::from(b)).collect(),
        p.iter().map(|&b| usize::from(b)).collect(),
        phase,
    )
}

pub fn bpq_operator(pair: &PauliKeyPair) -> PauliString {
    bpq_from_bits(&pair.p, &pair.q).expect("pair strings have equal length")
}

/// Applies `B_pq` to a state of code C after checking membership.
pub fn encrypt_code_state(state: &StateVector, pair: &PauliKeyPair, code: &StabilizerCodeC) -> Result<StateVector> {
    if pair.n() != code.n() {
        return Err(Error::DimensionMismatch { expected: code.n(), found: pair.n() });
    }
    let overlap = code.projector_overlap(state)?;
    if (1.0 - overlap) > 1e-10 {
        return Err(Error::NotInCodeSpace(overlap));
    }
    state.apply_pauli(&bpq_operator(pair))
}

fn even_strings(n: usize) -> impl Iterator<Item = Vec<bool>> + Clone {
    (0u64..1 << n).filter(|m| m.count_ones() % 2 == 0).map(move |m| (0..n).map(|i| m >> (n - 1 - i) & 1 == 1).collect())
}

/// Every valid key pair for `n` qubits, `2^{2(n−1)}` of them.
pub fn all_keypairs(n: usize) -> Vec<PauliKeyPair> {
    let strings: Vec<Vec<bool>> = even_strings(n).collect();
    let mut out = Vec::with_capacity(strings.len() * strings.len());
    for p in &strings {
        for q in &strings {
            out.push(PauliKeyPair { p: p.clone(), q: q.clone() });
        }
    }
    out
}

/// Uniform valid pair: `n − 1` free bits per string, the last fixes parity.
pub fn sample_keypair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PauliKeyPair> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::param(format!("key pairs need an even n ≥ 4, got {n}")));
    }
    let mut draw = || {
        let mut bits: Vec<bool> = (0..n - 1).map(|_| rng.gen()).collect();
        bits.push(bits.iter().fold(false, |a, &b| a ^ b));
        bits
    };
    let p = draw();
    let q = draw();
    Ok(PauliKeyPair { p, q })
}

/// Largest trace distance between the reduced state of `B_pq|ψ⟩` on `S`
/// and `B_{p_S q_S}` applied to the reduced state of `|ψ⟩`, over every
/// subset `S`, every valid key pair and every given state.
pub fn reduction_lemma_deviation(states: &[StateVector]) -> Result<f64> {
    let mut worst = 0.0f64;
    for psi in states {
        let n = psi.space().len();
        if psi.space() != &QuditSpace::qubits(n) {
            return Err(Error::param("reduction lemma check needs qubit states"));
        }
        for pair in all_keypairs(n) {
            let full = psi.apply_pauli(&bpq_operator(&pair))?;
            for mask in 1u32..(1 << n) {
                let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let direct = full.reduced(&subset)?;
                let ps: Vec<bool> = subset.iter().map(|&i| pair.p[i]).collect();
                let qs: Vec<bool> = subset.iter().map(|&i| pair.q[i]).collect();
                let local = psi.reduced(&subset)?.conjugate(&bpq_from_bits(&ps, &qs)?)?;
                worst = worst.max(trace_distance(&direct, &local)?);
            }
        }
    }
    Ok(worst)
}
