use num_complex::Complex64;
use rand::Rng;

use super::{DensityMatrix, PauliString, QuditSpace, ALGEBRAIC_TOL, ONE, ZERO};
use crate::error::{Error, Result};

/// Normalized pure state over a [`QuditSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    space: QuditSpace,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validating constructor; the squared norm must be 1 within 1e-12.
    pub fn new(space: QuditSpace, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::DimensionMismatch { expected: space.total_dim(), found: amps.len() });
        }
        let norm = norm_sqr(&amps);
        if (norm - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { space, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(space: QuditSpace, mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::DimensionMismatch { expected: space.total_dim(), found: amps.len() });
        }
        let norm = norm_sqr(&amps).sqrt();
        if norm < 1e-300 {
            return Err(Error::NotNormalized(0.0));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { space, amps })
    }

    pub(crate) fn from_raw(space: QuditSpace, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), space.total_dim());
        Self { space, amps }
    }

    pub fn basis(space: QuditSpace, index: usize) -> Result<Self> {
        let n = space.total_dim();
        if index >= n {
            return Err(Error::IndexOutOfRange { index, len: n });
        }
        let mut amps = vec![ZERO; n];
        amps[index] = ONE;
        Ok(Self { space, amps })
    }

    pub fn space(&self) -> &QuditSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn apply_pauli(&self, g: &PauliString) -> Result<StateVector> {
        if g.space() != &self.space {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: g.space().total_dim() });
        }
        let mut out = vec![ZERO; self.dim()];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let (j, c) = g.map_basis(i);
            out[j] += c * a;
        }
        Ok(StateVector::from_raw(self.space.clone(), out))
    }

    /// Applies a single-qudit Pauli `X^x Z^z` to one subsystem.
    pub fn apply_local(&self, site: usize, x: usize, z: usize) -> Result<StateVector> {
        let g = PauliString::single(self.space.clone(), site, x, z)?;
        self.apply_pauli(&g)
    }

    pub fn density(&self) -> DensityMatrix {
        let n = self.dim();
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            if self.amps[i] == ZERO {
                continue;
            }
            for j in 0..n {
                data[i * n + j] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix::from_raw(self.space.clone(), data)
    }

    /// Reduced state on `keep` (in the given order).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let sub = self.space.select(keep)?;
        let (kept_idx, rest_idx, kd, rd) = self.space.split_indices(keep);
        // M[k][r] = ψ(k, r); ρ = M M†
        let mut m = vec![ZERO; kd * rd];
        for (i, &a) in self.amps.iter().enumerate() {
            m[kept_idx[i] * rd + rest_idx[i]] = a;
        }
        let mut data = vec![ZERO; kd * kd];
        for a in 0..kd {
            let row_a = &m[a * rd..(a + 1) * rd];
            for b in a..kd {
                let row_b = &m[b * rd..(b + 1) * rd];
                let v: Complex64 = row_a.iter().zip(row_b).map(|(x, y)| x * y.conj()).sum();
                data[a * kd + b] = v;
                data[b * kd + a] = v.conj();
            }
        }
        Ok(DensityMatrix::from_raw(sub, data))
    }

    /// Reorders subsystems so that new subsystem `i` is old subsystem `order[i]`.
    pub fn permute_subsystems(&self, order: &[usize]) -> Result<StateVector> {
        if order.len() != self.space.len() {
            return Err(Error::DimensionMismatch { expected: self.space.len(), found: order.len() });
        }
        let new_space = self.space.select(order)?;
        let (new_idx, _, _, _) = self.space.split_indices(order);
        let mut out = vec![ZERO; self.dim()];
        for (i, &a) in self.amps.iter().enumerate() {
            out[new_idx[i]] = a;
        }
        Ok(StateVector::from_raw(new_space, out))
    }

    /// Projection onto the `outcome` (±1) eigenspace of an involutive `g`,
    /// returning the Born probability and the normalized post-state.
    pub fn project(&self, g: &PauliString, outcome: i8) -> Result<(f64, Option<StateVector>)> {
        if !g.is_involutive() {
            return Err(Error::NotInvolutive);
        }
        let gpsi = self.apply_pauli(g)?;
        let sign = if outcome >= 0 { 1.0 } else { -1.0 };
        let proj: Vec<Complex64> =
            self.amps.iter().zip(&gpsi.amps).map(|(a, b)| (a + b * sign) * 0.5).collect();
        let p = norm_sqr(&proj);
        if p < 1e-15 {
            return Ok((p, None));
        }
        let s = p.sqrt();
        let post = proj.into_iter().map(|a| a / s).collect();
        Ok((p, Some(StateVector::from_raw(self.space.clone(), post))))
    }
}

pub(crate) fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// Kronecker product in list order.
pub fn tensor(states: &[StateVector]) -> Result<StateVector> {
    let (first, rest) = states
        .split_first()
        .ok_or_else(|| Error::InvalidSpace("tensor of an empty list".into()))?;
    let mut acc = first.clone();
    for s in rest {
        let mut amps = Vec::with_capacity(acc.dim() * s.dim());
        for a in &acc.amps {
            for b in &s.amps {
                amps.push(a * b);
            }
        }
        acc = StateVector::from_raw(acc.space.concat(&s.space), amps);
    }
    Ok(acc)
}

/// Two-qubit simultaneous eigenstate with `X⊗X = (−1)^s`, `Z⊗Z = (−1)^t`.
///
/// `(0,0) = Φ+`, `(1,0) = Φ−`, `(0,1) = Ψ+`, `(1,1) = Ψ−`.
pub fn bell_state(s: u8, t: u8) -> Result<StateVector> {
    if s > 1 || t > 1 {
        return Err(Error::param(format!("bell_state labels must be bits, got ({s},{t})")));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if s == 1 { -1.0 } else { 1.0 };
    let mut amps = vec![ZERO; 4];
    // (|0,t⟩ + (−1)^s |1,1−t⟩)/√2
    amps[t as usize] = Complex64::new(h, 0.0);
    amps[2 + (1 - t as usize)] = Complex64::new(sign * h, 0.0);
    Ok(StateVector::from_raw(QuditSpace::qubits(2), amps))
}

/// Measures an involutive Pauli observable, sampling the ±1 outcome with
/// Born probabilities.
pub fn stabilizer_measure<R: Rng + ?Sized>(
    state: &StateVector,
    g: &PauliString,
    rng: &mut R,
) -> Result<(i8, StateVector)> {
    let (p_plus, plus) = state.project(g, 1)?;
    let draw: f64 = rng.gen();
    if draw < p_plus {
        if let Some(post) = plus {
            return Ok((1, post));
        }
    }
    match state.project(g, -1)? {
        (_, Some(post)) => Ok((-1, post)),
        (_, None) => Ok((1, plus.expect("one outcome has support"))),
    }
}
