//! Dense simulation of small composite qudit systems.
//!
//! Subsystem 0 is the leftmost tensor factor and the most significant digit
//! of the mixed-radix basis index. Every module in the crate addresses
//! subsystems with this convention.

mod density;
mod pauli;
mod state;

pub use density::{fidelity, trace_distance, trace_norm_hermitian, DensityMatrix};
pub use pauli::{generalized_pauli, PauliString};
pub use state::{bell_state, stabilizer_measure, tensor, StateVector};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for end-to-end protocol checks.
pub const PROTOCOL_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Primitive `d`-th root of unity raised to `power`.
pub fn omega(d: usize, power: usize) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * ((power % d) as f64) / d as f64;
    Complex64::from_polar(1.0, angle)
}

/// Ordered list of subsystem dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuditSpace {
    dims: Vec<usize>,
}

impl QuditSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSpace(format!("subsystem dimension {d} < 2")));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidSpace("total dimension overflows".into()))?;
        if total > 1 << 26 {
            return Err(Error::InvalidSpace(format!("total dimension {total} too large for dense simulation")));
        }
        Ok(Self { dims })
    }

    /// `count` subsystems of dimension `d`.
    pub fn uniform(d: usize, count: usize) -> Result<Self> {
        Self::new(vec![d; count])
    }

    pub fn qubits(count: usize) -> Self {
        Self { dims: vec![2; count] }
    }

    /// The zero-subsystem space (dimension 1).
    pub fn trivial() -> Self {
        Self { dims: Vec::new() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Per-subsystem strides for mixed-radix indexing.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (i, &d) in self.dims.iter().enumerate().rev() {
            out[i] = index % d;
            index /= d;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&digit, &d)| acc * d + digit % d)
    }

    pub fn concat(&self, other: &QuditSpace) -> QuditSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        QuditSpace { dims }
    }

    /// Checks that `keep` holds distinct valid indices.
    pub fn check_subsystems(&self, keep: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.dims.len()];
        for &k in keep {
            if k >= self.dims.len() {
                return Err(Error::IndexOutOfRange { index: k, len: self.dims.len() });
            }
            if seen[k] {
                return Err(Error::DuplicateIndex(k));
            }
            seen[k] = true;
        }
        Ok(())
    }

    /// Space of the listed subsystems, in the listed order.
    pub fn select(&self, keep: &[usize]) -> Result<QuditSpace> {
        self.check_subsystems(keep)?;
        Ok(QuditSpace { dims: keep.iter().map(|&k| self.dims[k]).collect() })
    }

    /// For every basis index, its index within the kept subsystems (in `keep`
    /// order) and within the remaining subsystems (in natural order).
    pub(crate) fn split_indices(&self, keep: &[usize]) -> (Vec<usize>, Vec<usize>, usize, usize) {
        let rest: Vec<usize> = (0..self.dims.len()).filter(|i| !keep.contains(i)).collect();
        let kept_dim: usize = keep.iter().map(|&k| self.dims[k]).product();
        let rest_dim: usize = rest.iter().map(|&k| self.dims[k]).product();
        let total = self.total_dim();
        let mut kept_idx = Vec::with_capacity(total);
        let mut rest_idx = Vec::with_capacity(total);
        for i in 0..total {
            let digits = self.digits(i);
            kept_idx.push(keep.iter().fold(0, |acc, &k| acc * self.dims[k] + digits[k]));
            rest_idx.push(rest.iter().fold(0, |acc, &k| acc * self.dims[k] + digits[k]));
        }
        (kept_idx, rest_idx, kept_dim, rest_dim)
    }
}
