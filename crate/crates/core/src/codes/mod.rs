//! Quantum codes that carry the encrypted secret: polynomial threshold and
//! ramp codes over GF(d), and the two-generator qubit stabiliser code C.

mod code_c;
mod polynomial;

pub use code_c::{code_c_encode, code_c_recover_erasure, StabilizerCodeC};
pub use polynomial::{cgl_encode, cgl_reconstruct, ramp_encode, ramp_reconstruct, PolynomialQss, RampQss};

use std::fmt::Debug;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qudit::{DensityMatrix, QuditSpace, StateVector};

/// Sparse image of one logical basis vector.
pub type SparseState = Vec<(usize, Complex64)>;

/// An encoding isometry from a logical space into shares.
///
/// Physical subsystems `0..shares()` go to players in order. Any further
/// subsystems are part of a larger pure code and are discarded by the
/// dealer.
pub trait QuantumCode: Debug + Send + Sync {
    fn name(&self) -> String;
    fn logical_space(&self) -> QuditSpace;
    fn physical_space(&self) -> QuditSpace;
    fn shares(&self) -> usize;
    /// Smallest number of shares that always reconstructs.
    fn threshold(&self) -> usize;
    /// Largest number of shares that never reveals anything.
    fn forbidden_max(&self) -> usize;
    fn encode_basis(&self, logical: usize) -> SparseState;
    /// Recovers the logical state from the reduced state of the strictly
    /// increasing share indices `subset`.
    fn decode_subset(&self, reduced: &DensityMatrix, subset: &[usize]) -> Result<DensityMatrix>;

    fn encode(&self, secret: &StateVector) -> Result<StateVector> {
        let logical = self.logical_space();
        if secret.space() != &logical {
            return Err(Error::DimensionMismatch { expected: logical.total_dim(), found: secret.dim() });
        }
        let physical = self.physical_space();
        let mut amps = vec![Complex64::new(0.0, 0.0); physical.total_dim()];
        for (a, &alpha) in secret.amplitudes().iter().enumerate() {
            if alpha.norm_sqr() == 0.0 {
                continue;
            }
            for (i, v) in self.encode_basis(a) {
                amps[i] += alpha * v;
            }
        }
        StateVector::new(physical, amps)
    }

    /// Reduces `encoded` to `subset` and decodes.
    fn reconstruct(&self, encoded: &StateVector, subset: &[usize]) -> Result<DensityMatrix> {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        self.physical_space().check_subsystems(&sorted)?;
        if let Some(&bad) = sorted.iter().find(|&&s| s >= self.shares()) {
            return Err(Error::IndexOutOfRange { index: bad, len: self.shares() });
        }
        if sorted.len() < self.threshold() {
            return Err(Error::InsufficientShares { needed: self.threshold(), got: sorted.len() });
        }
        let reduced = encoded.reduced(&sorted)?;
        self.decode_subset(&reduced, &sorted)
    }
}

/// Runs a code over larger qudits on a smaller secret: each secret digit
/// `a < d` is encoded as the digit `a` of the inner code's dimension.
#[derive(Debug)]
pub struct EmbeddedCode {
    inner: Box<dyn QuantumCode>,
    logical: QuditSpace,
    /// Inner logical index of each secret basis index.
    embed: Vec<usize>,
}

impl EmbeddedCode {
    pub fn new(inner: Box<dyn QuantumCode>, d: usize) -> Result<Self> {
        let outer = inner.logical_space();
        if outer.dims().iter().any(|&q| q < d) {
            return Err(Error::param(format!("cannot embed dimension {d} into {:?}", outer.dims())));
        }
        let logical = QuditSpace::uniform(d, outer.len())?;
        let embed = (0..logical.total_dim()).map(|a| outer.index(&logical.digits(a))).collect();
        Ok(Self { inner, logical, embed })
    }
}

impl QuantumCode for EmbeddedCode {
    fn name(&self) -> String {
        format!("{} on dimension-{} digits", self.inner.name(), self.logical.dims()[0])
    }

    fn logical_space(&self) -> QuditSpace {
        self.logical.clone()
    }

    fn physical_space(&self) -> QuditSpace {
        self.inner.physical_space()
    }

    fn shares(&self) -> usize {
        self.inner.shares()
    }

    fn threshold(&self) -> usize {
        self.inner.threshold()
    }

    fn forbidden_max(&self) -> usize {
        self.inner.forbidden_max()
    }

    fn encode_basis(&self, logical: usize) -> SparseState {
        self.inner.encode_basis(self.embed[logical])
    }

    fn decode_subset(&self, reduced: &DensityMatrix, subset: &[usize]) -> Result<DensityMatrix> {
        let full = self.inner.decode_subset(reduced, subset)?;
        let ld = self.embed.len();
        let mut out = Vec::with_capacity(ld * ld);
        for &i in &self.embed {
            for &j in &self.embed {
                out.push(full.get(i, j));
            }
        }
        Ok(DensityMatrix::from_raw(self.logical.clone(), out))
    }
}

/// `V† ρ V` for the code's isometry `V`.
pub fn project_to_logical(code: &dyn QuantumCode, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let physical = code.physical_space();
    if rho.space() != &physical {
        return Err(Error::DimensionMismatch { expected: physical.total_dim(), found: rho.dim() });
    }
    let logical = code.logical_space();
    let ld = logical.total_dim();
    let cols: Vec<SparseState> = (0..ld).map(|a| code.encode_basis(a)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); ld * ld];
    for a in 0..ld {
        for b in 0..ld {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(i, va) in &cols[a] {
                for &(j, vb) in &cols[b] {
                    acc += va.conj() * rho.get(i, j) * vb;
                }
            }
            out[a * ld + b] = acc;
        }
    }
    Ok(DensityMatrix::from_raw(logical, out))
}

pub(crate) fn check_strictly_increasing(subset: &[usize]) -> Result<()> {
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPlayers(format!("share indices {subset:?} must be strictly increasing")));
    }
    Ok(())
}
