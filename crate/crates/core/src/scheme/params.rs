use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::PROTOCOL_TOL;

fn check_kn(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::param(format!("threshold must satisfy 1 ≤ k ≤ n (k={k}, n={n})")));
    }
    if n >= 2 * k {
        return Err(Error::param(format!("no-cloning: n ≤ 2k−1 (k={k}, n={n})")));
    }
    Ok(())
}

/// Inner `(k_q, n_q)` threshold code: `n_q = 2n − 2k + 1`, `k_q = n_q − (n − k)`.
pub fn hqss_params(k: usize, n: usize) -> Result<(usize, usize)> {
    check_kn(k, n)?;
    let n_q = 2 * n - 2 * k + 1;
    Ok((n_q - (n - k), n_q))
}

/// Inner `(k_qr, L_qr, n_qr)` ramp code: `k_qr = n_qr − (n − k)`,
/// `L_qr = 2k_qr − n_qr`.
pub fn hrqss_params(k: usize, n: usize, n_qr: usize) -> Result<(usize, usize)> {
    check_kn(k, n)?;
    let lo = 2 * n - 2 * k + 1;
    if n_qr < lo || n_qr > n {
        return Err(Error::param(format!("n_qr must satisfy {lo} ≤ n_qr ≤ {n}, got {n_qr}")));
    }
    let k_qr = n_qr - (n - k);
    Ok((k_qr, 2 * k_qr - n_qr))
}

/// Total dealer quantum communication, in qubits, of the single-qudit scheme.
pub fn cost_hqss(k: usize, n: usize, d_s: f64) -> Result<f64> {
    let (_, n_q) = hqss_params(k, n)?;
    Ok(n_q as f64 * log2_secret(d_s)?)
}

/// `log₂ d_s / (1 − 2(n−k)/n_qr)`.
pub fn cost_hrqss(k: usize, n: usize, n_qr: usize, d_s: f64) -> Result<f64> {
    hrqss_params(k, n, n_qr)?;
    Ok(log2_secret(d_s)? / (1.0 - 2.0 * (n - k) as f64 / n_qr as f64))
}

/// `n log₂ d_s / (2k − n)`.
pub fn cost_min(k: usize, n: usize, d_s: f64) -> Result<f64> {
    check_kn(k, n)?;
    Ok(n as f64 * log2_secret(d_s)? / (2 * k - n) as f64)
}

fn log2_secret(d_s: f64) -> Result<f64> {
    if !(d_s >= 2.0) {
        return Err(Error::param(format!("secret dimension must be at least 2, got {d_s}")));
    }
    Ok(d_s.log2())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    /// Strictly above the bound.
    Satisfied,
    /// Equal to the bound within tolerance.
    Saturated,
    Violated,
}

impl BoundStatus {
    pub fn holds(self) -> bool {
        self != BoundStatus::Violated
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundStatus::Satisfied => "satisfied",
            BoundStatus::Saturated => "saturated",
            BoundStatus::Violated => "violated",
        }
    }
}

/// Compares `2 log₂ d_q + log₂ d_c` with `2 log₂ d_s`.
pub fn bound_check(log2_dq: f64, log2_dc: f64, log2_ds: f64) -> BoundStatus {
    let gap = 2.0 * log2_dq + log2_dc - 2.0 * log2_ds;
    if gap.abs() <= PROTOCOL_TOL {
        BoundStatus::Saturated
    } else if gap > 0.0 {
        BoundStatus::Satisfied
    } else {
        BoundStatus::Violated
    }
}

/// One row of the quantum-share sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    pub n_qr: usize,
    pub k_qr: usize,
    pub l_qr: usize,
    pub qubits_per_share: f64,
    pub total_qubits: f64,
    /// Bound status of a player holding a quantum share.
    pub quantum_share: BoundStatus,
    /// Bound status of a purely classical player, if there is one.
    pub classical_share: Option<BoundStatus>,
}

/// Every valid `n_qr` with ideal share sizes: `log₂ d_s / L_qr` qubits per
/// quantum share and a `2 log₂ d_s`-bit classical share.
pub fn cost_table(k: usize, n: usize, d_s: f64) -> Result<Vec<CostRow>> {
    check_kn(k, n)?;
    let ls = log2_secret(d_s)?;
    (2 * n - 2 * k + 1..=n)
        .map(|n_qr| {
            let (k_qr, l_qr) = hrqss_params(k, n, n_qr)?;
            let per = ls / l_qr as f64;
            Ok(CostRow {
                n_qr,
                k_qr,
                l_qr,
                qubits_per_share: per,
                total_qubits: cost_hrqss(k, n, n_qr, d_s)?,
                quantum_share: bound_check(per, 2.0 * ls, ls),
                classical_share: (n_qr < n).then(|| bound_check(0.0, 2.0 * ls, ls)),
            })
        })
        .collect()
}
