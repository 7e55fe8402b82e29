//! Prime-field arithmetic and GF(2) linear algebra.

mod affine;
mod gf2;

pub use affine::{AffineKnowledge, AffineRow, DeterminedFunctional, VariableRole};
pub use gf2::{Gf2Matrix, Gf2Vector, RowReduction};
pub(crate) use gf2::EchelonBasis;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `GF(p)` for a prime `p < 2³²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Smallest prime `≥ n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement { value: value % self.p, field: *self }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.p) * (b % self.p) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Horner evaluation of `Σ coeffs[i] xⁱ`.
    pub fn eval_poly(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Solves `m · v = rhs` for square invertible `m` (row-major).
    pub fn solve(&self, m: &[Vec<u64>], rhs: &[u64]) -> Result<Vec<u64>> {
        let n = m.len();
        if rhs.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: rhs.len() });
        }
        let mut a: Vec<Vec<u64>> = m
            .iter()
            .zip(rhs)
            .map(|(row, &b)| {
                let mut r: Vec<u64> = row.iter().map(|v| v % self.p).collect();
                r.push(b % self.p);
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r][col] != 0)
                .ok_or_else(|| Error::param("singular system over GF(p)"))?;
            a.swap(col, pivot);
            let inv = self.inv(a[col][col])?;
            for v in a[col].iter_mut() {
                *v = self.mul(*v, inv);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in col..=n {
                        let t = self.mul(f, a[col][c]);
                        a[r][c] = self.sub(a[r][c], t);
                    }
                }
            }
        }
        Ok(a.into_iter().map(|r| r[n]).collect())
    }
}

/// Element of a [`PrimeField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    fn same_field(&self, other: &FieldElement) -> Result<PrimeField> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p, other.field.p));
        }
        Ok(self.field)
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(f.elem(f.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(f.elem(f.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(f.elem(f.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.elem(self.field.inv(self.value)?))
    }
}

/// Value at `at` of the unique polynomial of degree `< points.len()` through
/// `points`.
pub fn lagrange_interpolate(points: &[(FieldElement, FieldElement)], at: FieldElement) -> Result<FieldElement> {
    let field = at.field();
    if points.is_empty() {
        return Err(Error::param("interpolation needs at least one point"));
    }
    for (i, (xi, yi)) in points.iter().enumerate() {
        xi.same_field(&at)?;
        yi.same_field(&at)?;
        if points[..i].iter().any(|(xj, _)| xj.value == xi.value) {
            return Err(Error::DuplicatePoint(xi.value));
        }
    }
    let mut acc = 0u64;
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut num = 1u64;
        let mut den = 1u64;
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                num = field.mul(num, field.sub(at.value, xj.value));
                den = field.mul(den, field.sub(xi.value, xj.value));
            }
        }
        let term = field.mul(yi.value, field.mul(num, field.inv(den)?));
        acc = field.add(acc, term);
    }
    Ok(field.elem(acc))
}
