use num_complex::Complex64;

use super::{check_strictly_increasing, QuantumCode, SparseState};
use crate::error::{Error, Result};
use crate::field::{is_prime, PrimeField};
use crate::qudit::{DensityMatrix, QuditSpace, StateVector};

/// `(k, L, n)` ramp code over GF(d).
///
/// The secret fills the `L` highest coefficients of a degree-`(k−1)`
/// polynomial; the `k − L` lower coefficients are uniformly superposed. The
/// pure code has `2k − L` shares, evaluated at the field points
/// `0, 1, …, 2k − L − 1`; players receive the first `n` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RampQss {
    k: usize,
    l: usize,
    n: usize,
    d: usize,
    field: PrimeField,
}

impl RampQss {
    pub fn new(k: usize, l: usize, n: usize, d: usize) -> Result<Self> {
        if !is_prime(d as u64) {
            return Err(Error::NotPrime(d as u64));
        }
        if l == 0 || l > k || k > n {
            return Err(Error::param(format!("ramp code needs 1 ≤ L ≤ k ≤ n (k={k}, L={l}, n={n})")));
        }
        if n + l > 2 * k {
            return Err(Error::param(format!("no-cloning: n ≤ 2k − L (k={k}, L={l}, n={n})")));
        }
        if d < 2 * k - l {
            return Err(Error::param(format!("dimension {d} has fewer than 2k − L = {} field points", 2 * k - l)));
        }
        let field = PrimeField::new(d as u64)?;
        Ok(Self { k, l, n, d, field })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of shares in the underlying pure code.
    pub fn pure_len(&self) -> usize {
        2 * self.k - self.l
    }

    fn eval_all(&self, coeffs: &[u64]) -> usize {
        (0..self.pure_len()).fold(0, |acc, x| acc * self.d + self.field.eval_poly(coeffs, x as u64) as usize)
    }

    /// Linear map from the values at `points` (k of them, in order) to
    /// `(secret coefficients, values at the remaining pure-code points)`.
    fn decoding_matrix(&self, points: &[usize]) -> Result<Vec<Vec<u64>>> {
        let f = self.field;
        let k = self.k;
        let vand: Vec<Vec<u64>> = points.iter().map(|&x| (0..k).map(|i| f.pow(x as u64, i as u64)).collect()).collect();
        // columns of the inverse Vandermonde matrix
        let mut inv = vec![vec![0u64; k]; k];
        for c in 0..k {
            let unit: Vec<u64> = (0..k).map(|r| u64::from(r == c)).collect();
            for (r, v) in f.solve(&vand, &unit)?.into_iter().enumerate() {
                inv[r][c] = v;
            }
        }
        let mut out: Vec<Vec<u64>> = inv[k - self.l..].to_vec();
        for x in (0..self.pure_len()).filter(|x| !points.contains(x)) {
            let row = (0..k)
                .map(|c| (0..k).fold(0, |acc, i| f.add(acc, f.mul(f.pow(x as u64, i as u64), inv[i][c]))))
                .collect();
            out.push(row);
        }
        Ok(out)
    }
}

impl QuantumCode for RampQss {
    fn name(&self) -> String {
        format!("ramp({},{},{};d={})", self.k, self.l, self.n, self.d)
    }

    fn logical_space(&self) -> QuditSpace {
        QuditSpace::uniform(self.d, self.l).expect("validated dimensions")
    }

    fn physical_space(&self) -> QuditSpace {
        QuditSpace::uniform(self.d, self.pure_len()).expect("validated dimensions")
    }

    fn shares(&self) -> usize {
        self.n
    }

    fn threshold(&self) -> usize {
        self.k
    }

    fn forbidden_max(&self) -> usize {
        self.k - self.l
    }

    fn encode_basis(&self, logical: usize) -> SparseState {
        let free = self.k - self.l;
        let count = self.d.pow(free as u32);
        let amp = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
        let secret = self.logical_space().digits(logical);
        (0..count)
            .map(|u| {
                let mut coeffs = Vec::with_capacity(self.k);
                let mut rem = u;
                for _ in 0..free {
                    coeffs.push((rem % self.d) as u64);
                    rem /= self.d;
                }
                coeffs.extend(secret.iter().map(|&s| s as u64));
                (self.eval_all(&coeffs), amp)
            })
            .collect()
    }

    fn decode_subset(&self, reduced: &DensityMatrix, subset: &[usize]) -> Result<DensityMatrix> {
        check_strictly_increasing(subset)?;
        if subset.len() < self.k {
            return Err(Error::InsufficientShares { needed: self.k, got: subset.len() });
        }
        if reduced.space() != &QuditSpace::uniform(self.d, subset.len())? {
            return Err(Error::DimensionMismatch { expected: self.d.pow(subset.len() as u32), found: reduced.dim() });
        }
        let points = &subset[..self.k];
        let first: Vec<usize> = (0..self.k).collect();
        let rho = reduced.partial_trace(&first)?;
        let m = self.decoding_matrix(points)?;
        let space = QuditSpace::uniform(self.d, self.k)?;
        let f = self.field;
        let perm: Vec<usize> = (0..space.total_dim())
            .map(|y| {
                let ys = space.digits(y);
                let z: Vec<usize> = m
                    .iter()
                    .map(|row| row.iter().zip(&ys).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b as u64))) as usize)
                    .collect();
                space.index(&z)
            })
            .collect();
        let moved = rho.permute_basis(&perm, space)?;
        moved.partial_trace(&(0..self.l).collect::<Vec<_>>())
    }
}

/// `(k, n)` threshold code: the `L = 1` ramp code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialQss(RampQss);

impl PolynomialQss {
    pub fn new(k: usize, n: usize, d: usize) -> Result<Self> {
        Ok(Self(RampQss::new(k, 1, n, d)?))
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn d(&self) -> usize {
        self.0.d
    }

    pub fn as_ramp(&self) -> &RampQss {
        &self.0
    }
}

impl QuantumCode for PolynomialQss {
    fn name(&self) -> String {
        format!("cgl({},{};d={})", self.0.k, self.0.n, self.0.d)
    }

    fn logical_space(&self) -> QuditSpace {
        self.0.logical_space()
    }

    fn physical_space(&self) -> QuditSpace {
        self.0.physical_space()
    }

    fn shares(&self) -> usize {
        self.0.shares()
    }

    fn threshold(&self) -> usize {
        self.0.threshold()
    }

    fn forbidden_max(&self) -> usize {
        self.0.forbidden_max()
    }

    fn encode_basis(&self, logical: usize) -> SparseState {
        self.0.encode_basis(logical)
    }

    fn decode_subset(&self, reduced: &DensityMatrix, subset: &[usize]) -> Result<DensityMatrix> {
        self.0.decode_subset(reduced, subset)
    }
}

pub fn cgl_encode(secret: &StateVector, scheme: &PolynomialQss) -> Result<StateVector> {
    scheme.encode(secret)
}

/// Decoded secret from the shares in `subset` (0-based share indices).
pub fn cgl_reconstruct(encoded: &StateVector, subset: &[usize], scheme: &PolynomialQss) -> Result<DensityMatrix> {
    scheme.reconstruct(encoded, subset)
}

pub fn ramp_encode(secret: &StateVector, scheme: &RampQss) -> Result<StateVector> {
    scheme.encode(secret)
}

pub fn ramp_reconstruct(encoded: &StateVector, subset: &[usize], scheme: &RampQss) -> Result<DensityMatrix> {
    scheme.reconstruct(encoded, subset)
}
