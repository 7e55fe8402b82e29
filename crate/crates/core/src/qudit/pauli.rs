use num_complex::Complex64;

use super::{omega, QuditSpace, ONE, ZERO};
use crate::error::{Error, Result};

/// `phase · ⊗ X^{x_i} Z^{z_i}` over a composite space.
///
/// On a basis state each factor acts as `|j⟩ → ω^{j·z}|j + x mod d⟩`, so a
/// single-site string with `(x, z) = (k, l)` is the qudit one-time-pad
/// operation keyed by `(k, l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    space: QuditSpace,
    x: Vec<usize>,
    z: Vec<usize>,
    phase: Complex64,
}

/// Single-qudit `X^k Z^l`, i.e. `|j⟩ → ω^{jl}|j+k mod d⟩`.
pub fn generalized_pauli(d: usize, k: usize, l: usize) -> Result<PauliString> {
    let space = QuditSpace::new(vec![d])?;
    PauliString::new(space, vec![k], vec![l], ONE)
}

impl PauliString {
    pub fn new(space: QuditSpace, x: Vec<usize>, z: Vec<usize>, phase: Complex64) -> Result<Self> {
        if x.len() != space.len() || z.len() != space.len() {
            return Err(Error::DimensionMismatch { expected: space.len(), found: x.len().max(z.len()) });
        }
        let x = x.iter().zip(space.dims()).map(|(&v, &d)| v % d).collect();
        let z = z.iter().zip(space.dims()).map(|(&v, &d)| v % d).collect();
        Ok(Self { space, x, z, phase })
    }

    pub fn identity(space: QuditSpace) -> Self {
        let n = space.len();
        Self { space, x: vec![0; n], z: vec![0; n], phase: ONE }
    }

    /// `X^{⊗n}` on `n` qubits.
    pub fn x_all(n: usize) -> Self {
        Self { space: QuditSpace::qubits(n), x: vec![1; n], z: vec![0; n], phase: ONE }
    }

    /// `Z^{⊗n}` on `n` qubits.
    pub fn z_all(n: usize) -> Self {
        Self { space: QuditSpace::qubits(n), x: vec![0; n], z: vec![1; n], phase: ONE }
    }

    /// A single-site operator placed at `site` of `space`, identity elsewhere.
    pub fn single(space: QuditSpace, site: usize, x: usize, z: usize) -> Result<Self> {
        space.check_subsystems(&[site])?;
        let mut out = Self::identity(space);
        let d = out.space.dims()[site];
        out.x[site] = x % d;
        out.z[site] = z % d;
        Ok(out)
    }

    pub fn space(&self) -> &QuditSpace {
        &self.space
    }

    pub fn x_powers(&self) -> &[usize] {
        &self.x
    }

    pub fn z_powers(&self) -> &[usize] {
        &self.z
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn with_phase(mut self, phase: Complex64) -> Self {
        self.phase = phase;
        self
    }

    pub fn tensor(&self, other: &PauliString) -> PauliString {
        let mut x = self.x.clone();
        x.extend_from_slice(&other.x);
        let mut z = self.z.clone();
        z.extend_from_slice(&other.z);
        PauliString { space: self.space.concat(&other.space), x, z, phase: self.phase * other.phase }
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &PauliString) -> Result<PauliString> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch { expected: self.space.total_dim(), found: other.space.total_dim() });
        }
        // (X^a Z^b)(X^c Z^e) = ω^{bc} X^{a+c} Z^{b+e}
        let mut phase = self.phase * other.phase;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for (i, &d) in self.space.dims().iter().enumerate() {
            phase *= omega(d, self.z[i] * other.x[i]);
            x.push((self.x[i] + other.x[i]) % d);
            z.push((self.z[i] + other.z[i]) % d);
        }
        Ok(PauliString { space: self.space.clone(), x, z, phase })
    }

    /// Inverse operator (as a Pauli string with adjusted phase).
    pub fn inverse(&self) -> PauliString {
        // (X^a Z^b)^{-1} = Z^{-b} X^{-a} = ω^{ab} X^{-a} Z^{-b}
        let mut phase = self.phase.conj();
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for (i, &d) in self.space.dims().iter().enumerate() {
            phase *= omega(d, self.x[i] * self.z[i]);
            x.push((d - self.x[i]) % d);
            z.push((d - self.z[i]) % d);
        }
        PauliString { space: self.space.clone(), x, z, phase }
    }

    /// `g² = I` exactly (after phase bookkeeping).
    pub fn is_involutive(&self) -> bool {
        let sq = match self.compose(self) {
            Ok(sq) => sq,
            Err(_) => return false,
        };
        sq.x.iter().all(|&v| v == 0) && sq.z.iter().all(|&v| v == 0) && (sq.phase - ONE).norm() < 1e-12
    }

    /// Image of a basis index: `P|i⟩ = coeff · |j⟩`.
    pub fn map_basis(&self, index: usize) -> (usize, Complex64) {
        let dims = self.space.dims();
        let mut rem = index;
        let mut out = 0usize;
        let mut stride = 1usize;
        let mut coeff = self.phase;
        for site in (0..dims.len()).rev() {
            let d = dims[site];
            let j = rem % d;
            rem /= d;
            if self.z[site] != 0 {
                coeff *= omega(d, j * self.z[site]);
            }
            out += ((j + self.x[site]) % d) * stride;
            stride *= d;
        }
        (out, coeff)
    }

    /// Full table of `map_basis` over the space.
    pub fn basis_table(&self) -> Vec<(usize, Complex64)> {
        (0..self.space.total_dim()).map(|i| self.map_basis(i)).collect()
    }

    /// Dense row-major matrix; for tests and small spaces.
    pub fn matrix(&self) -> Vec<Complex64> {
        let n = self.space.total_dim();
        let mut m = vec![ZERO; n * n];
        for i in 0..n {
            let (j, c) = self.map_basis(i);
            m[j * n + i] = c;
        }
        m
    }
}
