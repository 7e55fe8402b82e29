use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{PauliString, QuditSpace, StateVector, ALGEBRAIC_TOL, ZERO};
use crate::error::{Error, Result};

/// Row-major density operator over a [`QuditSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: QuditSpace,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian and unit trace within 1e-12,
    /// eigenvalues no lower than -1e-10.
    pub fn new(space: QuditSpace, data: Vec<Complex64>) -> Result<Self> {
        let n = space.total_dim();
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        let rho = Self { space, data };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_raw(space: QuditSpace, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), space.total_dim() * space.total_dim());
        Self { space, data }
    }

    pub fn maximally_mixed(space: QuditSpace) -> Self {
        let n = space.total_dim();
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0 / n as f64, 0.0);
        }
        Self { space, data }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                if (self.data[i * n + j] - self.data[j * n + i].conj()).norm() > ALGEBRAIC_TOL {
                    return Err(Error::InvalidDensity(format!("not Hermitian at ({i},{j})")));
                }
            }
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn space(&self) -> &QuditSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    pub fn trace(&self) -> f64 {
        let n = self.dim();
        (0..n).map(|i| self.data[i * n + i].re).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data, self.dim())
    }

    /// Reduced state on `keep`, ordered as in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let sub = self.space.select(keep)?;
        let (kept_idx, rest_idx, kd, rd) = self.space.split_indices(keep);
        // group full indices by their traced-out component
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); rd];
        for i in 0..self.dim() {
            groups[rest_idx[i]].push((i, kept_idx[i]));
        }
        let n = self.dim();
        let mut out = vec![ZERO; kd * kd];
        for group in &groups {
            for &(i, ki) in group {
                for &(j, kj) in group {
                    out[ki * kd + kj] += self.data[i * n + j];
                }
            }
        }
        Ok(DensityMatrix::from_raw(sub, out))
    }

    /// `g ρ g†`.
    pub fn conjugate(&self, g: &PauliString) -> Result<DensityMatrix> {
        if g.space() != &self.space {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: g.space().total_dim() });
        }
        let table = g.basis_table();
        Ok(self.conjugate_monomial(&table))
    }

    /// Conjugation by a monomial unitary given as `|i⟩ → c_i |π(i)⟩`.
    pub(crate) fn conjugate_monomial(&self, table: &[(usize, Complex64)]) -> DensityMatrix {
        let n = self.dim();
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let (pi, ci) = table[i];
            for j in 0..n {
                let v = self.data[i * n + j];
                if v == ZERO {
                    continue;
                }
                let (pj, cj) = table[j];
                out[pi * n + pj] = ci * v * cj.conj();
            }
        }
        DensityMatrix::from_raw(self.space.clone(), out)
    }

    /// Unnormalized projection `P ρ P` with `P = (I ± g)/2`; returns the
    /// outcome probability and the renormalized state when it has support.
    pub fn project(&self, g: &PauliString, outcome: i8) -> Result<(f64, Option<DensityMatrix>)> {
        if !g.is_involutive() {
            return Err(Error::NotInvolutive);
        }
        if g.space() != &self.space {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: g.space().total_dim() });
        }
        let n = self.dim();
        let sign = if outcome >= 0 { 1.0 } else { -1.0 };
        let table = g.basis_table();
        // P = (I + s g)/2 as a sparse operator: each column i has entries at i and π(i)
        let mut left = vec![ZERO; n * n]; // P ρ
        for i in 0..n {
            let (pi, ci) = table[i];
            for j in 0..n {
                let v = self.data[i * n + j];
                left[i * n + j] += v * 0.5;
                left[pi * n + j] += ci * v * (0.5 * sign);
            }
        }
        let mut out = vec![ZERO; n * n]; // (P ρ) P†
        for i in 0..n {
            for j in 0..n {
                let v = left[i * n + j];
                if v == ZERO {
                    continue;
                }
                let (pj, cj) = table[j];
                out[i * n + j] += v * 0.5;
                out[i * n + pj] += v * cj.conj() * (0.5 * sign);
            }
        }
        let p: f64 = (0..n).map(|i| out[i * n + i].re).sum();
        if p < 1e-15 {
            return Ok((p.max(0.0), None));
        }
        out.iter_mut().for_each(|v| *v /= p);
        Ok((p, Some(DensityMatrix::from_raw(self.space.clone(), out))))
    }

    /// Inserts a fresh subsystem in basis state `|0⟩` at position `at`.
    pub fn insert_ground(&self, at: usize, dim: usize) -> Result<DensityMatrix> {
        if at > self.space.len() {
            return Err(Error::IndexOutOfRange { index: at, len: self.space.len() + 1 });
        }
        let mut dims = self.space.dims().to_vec();
        dims.insert(at, dim);
        let space = QuditSpace::new(dims)?;
        let n_old = self.dim();
        let n = space.total_dim();
        // old index -> new index with digit 0 at `at`
        let map: Vec<usize> = (0..n_old)
            .map(|i| {
                let mut digits = self.space.digits(i);
                digits.insert(at, 0);
                space.index(&digits)
            })
            .collect();
        let mut data = vec![ZERO; n * n];
        for i in 0..n_old {
            for j in 0..n_old {
                data[map[i] * n + map[j]] = self.data[i * n_old + j];
            }
        }
        Ok(DensityMatrix::from_raw(space, data))
    }

    /// Relabels basis states: new index `perm[i]` receives old index `i`.
    pub fn permute_basis(&self, perm: &[usize], space: QuditSpace) -> Result<DensityMatrix> {
        let n = self.dim();
        if perm.len() != n || space.total_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: perm.len() });
        }
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                out[perm[i] * n + perm[j]] = self.data[i * n + j];
            }
        }
        Ok(DensityMatrix::from_raw(space, out))
    }

    /// Pure state whose projector this matrix is, if its purity is 1 within
    /// `tol`. Global phase is fixed by the largest diagonal entry.
    pub fn as_pure(&self, tol: f64) -> Option<StateVector> {
        let n = self.dim();
        let purity: f64 = self.data.iter().map(|v| v.norm_sqr()).sum();
        if (purity - 1.0).abs() > tol {
            return None;
        }
        let (col, diag) = (0..n)
            .map(|i| (i, self.data[i * n + i].re))
            .fold((0, f64::MIN), |best, cur| if cur.1 > best.1 { cur } else { best });
        if diag <= 0.0 {
            return None;
        }
        let s = diag.sqrt();
        let amps = (0..n).map(|i| self.data[i * n + col] / s).collect();
        StateVector::normalized(self.space.clone(), amps).ok()
    }
}

fn hermitian_eigenvalues(data: &[Complex64], n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    // symmetrize to absorb rounding asymmetry before the Hermitian solver
    let m = DMatrix::from_fn(n, n, |i, j| (data[i * n + j] + data[j * n + i].conj()) * 0.5);
    m.symmetric_eigenvalues().iter().copied().collect()
}

/// Trace norm of a Hermitian row-major `n × n` matrix.
pub fn trace_norm_hermitian(data: &[Complex64], n: usize) -> f64 {
    hermitian_eigenvalues(data, n).iter().map(|l| l.abs()).sum()
}

/// `½‖a − b‖₁`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.space != b.space {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let diff: Vec<Complex64> = a.data.iter().zip(&b.data).map(|(x, y)| x - y).collect();
    Ok(0.5 * trace_norm_hermitian(&diff, a.dim()))
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if psi.space() != rho.space() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: psi.dim() });
    }
    let n = rho.dim();
    let amps = psi.amplitudes();
    let mut acc = ZERO;
    for i in 0..n {
        if amps[i] == ZERO {
            continue;
        }
        let mut row = ZERO;
        for j in 0..n {
            row += rho.data[i * n + j] * amps[j];
        }
        acc += amps[i].conj() * row;
    }
    Ok(acc.re.clamp(0.0, 1.0 + ALGEBRAIC_TOL))
}

impl From<&StateVector> for DensityMatrix {
    fn from(psi: &StateVector) -> Self {
        psi.density()
    }
}
