//! Hybrid schemes: an encrypted quantum secret spread over quantum shares,
//! with the encryption key spread over classical shares.
//!
//! Every family describes its dealer randomness as independent blocks. A
//! block is one key component together with the classical randomness used
//! to share it, so a deal is a pure function of the secret and one value
//! per draw, and the verifier can enumerate blocks separately.

mod families;
mod params;

pub use families::{CodeOnly, EncryptedCode, N1n, Nn};
pub use params::{
    bound_check, cost_hqss, cost_hrqss, cost_min, cost_table, hqss_params, hrqss_params, BoundStatus, CostRow,
};

use std::fmt::Debug;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classical::check_subset;
use crate::codes::QuantumCode;
use crate::error::{Error, Result};
use crate::qudit::{DensityMatrix, PauliString, QuditSpace, StateVector};

/// Registered family names.
pub const FAMILIES: &[&str] = &["hqss", "hrqss", "nn", "n1n", "cgl", "ramp"];

/// Registered deliberately broken variants, used as negative controls.
pub const SABOTAGES: &[&str] = &["direct-key", "overclaim"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hqss,
    Hrqss,
    Nn,
    N1n,
    Cgl,
    Ramp,
}

impl Family {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "hqss" => Ok(Family::Hqss),
            "hrqss" => Ok(Family::Hrqss),
            "nn" => Ok(Family::Nn),
            "n1n" => Ok(Family::N1n),
            "cgl" => Ok(Family::Cgl),
            "ramp" => Ok(Family::Ramp),
            _ => Err(Error::Unknown { kind: "scheme family", name: name.into() }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Hqss => "hqss",
            Family::Hrqss => "hrqss",
            Family::Nn => "nn",
            Family::N1n => "n1n",
            Family::Cgl => "cgl",
            Family::Ramp => "ramp",
        }
    }
}

/// User-facing parameters naming one scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub family: Family,
    pub k: usize,
    pub n: usize,
    /// Qudit dimension of quantum shares and key digits.
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_qr: Option<usize>,
    /// Secret length of a bare ramp code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rcss: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sabotage: Option<String>,
}

impl SchemeSpec {
    fn base(family: Family, k: usize, n: usize, d: usize) -> Self {
        Self { family, k, n, d, n_qr: None, l: None, rcss: None, sabotage: None }
    }

    pub fn hqss(k: usize, n: usize, d: usize) -> Self {
        Self::base(Family::Hqss, k, n, d)
    }

    pub fn hrqss(k: usize, n: usize, n_qr: usize, d: usize) -> Self {
        Self { n_qr: Some(n_qr), ..Self::base(Family::Hrqss, k, n, d) }
    }

    pub fn nn(n: usize, d: usize) -> Self {
        Self::base(Family::Nn, n, n, d)
    }

    pub fn n1n(n: usize) -> Self {
        Self::base(Family::N1n, n.saturating_sub(1), n, 2)
    }

    pub fn cgl(k: usize, n: usize, d: usize) -> Self {
        Self::base(Family::Cgl, k, n, d)
    }

    pub fn ramp(k: usize, l: usize, n: usize, d: usize) -> Self {
        Self { l: Some(l), ..Self::base(Family::Ramp, k, n, d) }
    }

    pub fn with_rcss(mut self, name: impl Into<String>) -> Self {
        self.rcss = Some(name.into());
        self
    }

    pub fn with_sabotage(mut self, name: impl Into<String>) -> Self {
        self.sabotage = Some(name.into());
        self
    }

    /// Builds the registered family for these parameters.
    pub fn build(&self) -> Result<Box<dyn SchemeFamily>> {
        if let Some(s) = &self.sabotage {
            let ok = match s.as_str() {
                "direct-key" => self.family == Family::N1n,
                "overclaim" => matches!(self.family, Family::Cgl | Family::Ramp),
                _ => return Err(Error::Unknown { kind: "sabotage", name: s.clone() }),
            };
            if !ok {
                return Err(Error::param(format!("sabotage {s} does not apply to {}", self.family.name())));
            }
        }
        if self.rcss.is_some() && self.family != Family::N1n {
            return Err(Error::param("a classical ramp scheme can only be chosen for n1n"));
        }
        Ok(match self.family {
            Family::Hqss | Family::Hrqss => Box::new(EncryptedCode::new(self.clone())?),
            Family::Nn => Box::new(Nn::new(self.clone())?),
            Family::N1n => Box::new(N1n::new(self.clone())?),
            Family::Cgl | Family::Ramp => Box::new(CodeOnly::new(self.clone())?),
        })
    }
}

/// Declared or observed role of a player subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Access {
    Authorized,
    Forbidden,
    Intermediate,
    /// Evidence fell between the thresholds; never matches a declaration.
    Indeterminate,
}

impl Access {
    pub fn name(self) -> &'static str {
        match self {
            Access::Authorized => "authorized",
            Access::Forbidden => "forbidden",
            Access::Intermediate => "intermediate",
            Access::Indeterminate => "indeterminate",
        }
    }
}

/// Declared size of one player's share, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShareSize {
    pub log2_dq: f64,
    pub log2_dc: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerParams {
    pub k: usize,
    pub l: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeDescriptor {
    pub spec: SchemeSpec,
    pub inner: InnerParams,
    pub secret_dims: Vec<usize>,
    pub log2_ds: f64,
    pub shares: Vec<ShareSize>,
    /// Global subsystems held by each player, player 1 first.
    pub quantum: Vec<Vec<usize>>,
    /// Subsystems of a larger pure code kept by the dealer.
    pub discarded: Vec<usize>,
    /// Subsets of at least this size are declared authorized.
    pub threshold: usize,
    /// Subsets of at most this size are declared forbidden.
    pub forbidden_max: usize,
    /// Field of the Shamir-shared key, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key_field: Option<u64>,
}

impl SchemeDescriptor {
    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn players(&self) -> usize {
        self.spec.n
    }

    pub fn declared(&self, subset_len: usize) -> Access {
        if subset_len >= self.threshold {
            Access::Authorized
        } else if subset_len <= self.forbidden_max {
            Access::Forbidden
        } else {
            Access::Intermediate
        }
    }

    /// Bound status of every player's declared share.
    pub fn bound_report(&self) -> Vec<BoundStatus> {
        self.shares.iter().map(|s| bound_check(s.log2_dq, s.log2_dc, self.log2_ds)).collect()
    }

    pub fn label(&self) -> String {
        let s = &self.spec;
        let mut out = match s.family {
            Family::Hrqss => format!("hrqss(k={},n={},nqr={},d={})", s.k, s.n, s.n_qr.unwrap_or(0), s.d),
            Family::Ramp => format!("ramp(k={},L={},n={},d={})", s.k, s.l.unwrap_or(0), s.n, s.d),
            Family::N1n => format!("n1n(n={})", s.n),
            Family::Nn => format!("nn(n={},d={})", s.n, s.d),
            f => format!("{}(k={},n={},d={})", f.name(), s.k, s.n, s.d),
        };
        if let Some(r) = &s.rcss {
            out.push_str(&format!("[{r}]"));
        }
        if let Some(x) = &s.sabotage {
            out.push_str(&format!("[sabotage={x}]"));
        }
        out
    }
}

/// When a block's key acts on the state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyStage {
    /// On the secret, before encoding.
    Logical,
    /// On the encoded global state, as a product of local operators.
    Physical,
}

/// One key component and the classical randomness that shares it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomBlock {
    pub name: String,
    /// `(name, modulus)` of each uniform draw, in order.
    pub draws: Vec<(String, u64)>,
    /// Number of key values; a block's key is in `0..keys`.
    pub keys: usize,
    pub stage: KeyStage,
}

impl RandomBlock {
    pub fn points(&self) -> u128 {
        self.draws.iter().map(|d| d.1 as u128).product()
    }
}

/// What one block's draws produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockOutcome {
    pub key: usize,
    /// Named classical values for every player, player 1 first.
    pub shares: Vec<Vec<(String, u64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawRecord {
    pub name: String,
    pub modulus: u64,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShareBundle {
    pub player: usize,
    pub classical: Vec<(String, u64)>,
    pub quantum: Vec<usize>,
    pub quantum_dims: Vec<usize>,
}

/// Output of a deal. Holds the whole global state; a reconstruction only
/// reads the part belonging to its subset.
#[derive(Clone, Debug)]
pub struct DealtSecret {
    pub descriptor: SchemeDescriptor,
    /// The dealer's input, kept for fidelity checks.
    pub secret: StateVector,
    pub state: StateVector,
    pub bundles: Vec<ShareBundle>,
    pub randomness: Vec<DrawRecord>,
}

impl DealtSecret {
    pub fn bundle(&self, player: usize) -> Result<&ShareBundle> {
        self.bundles
            .get(player.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidPlayers(format!("player {player} not in 1..={}", self.bundles.len())))
    }

    /// Named classical values of `player` whose names start with `prefix`,
    /// with the prefix removed.
    pub fn classical_with_prefix(&self, player: usize, prefix: &str) -> Result<Vec<(String, u64)>> {
        Ok(self
            .bundle(player)?
            .classical
            .iter()
            .filter_map(|(name, v)| name.strip_prefix(prefix).map(|s| (s.to_string(), *v)))
            .collect())
    }

    pub fn classical_value(&self, player: usize, name: &str) -> Result<u64> {
        self.bundle(player)?
            .classical
            .iter()
            .find(|(nm, _)| nm == name)
            .map(|v| v.1)
            .ok_or_else(|| Error::param(format!("player {player} holds no value named {name}")))
    }

    /// Global subsystems held by `subset`, in increasing order.
    pub fn quantum_of(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for &p in subset {
            out.extend_from_slice(&self.bundle(p)?.quantum);
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// Mixed-radix enumeration of every assignment of the given moduli, last
/// position fastest.
pub fn assignments(moduli: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    let total: u128 = moduli.iter().map(|&m| m as u128).product();
    let mut current = vec![0u64; moduli.len()];
    let mut emitted = 0u128;
    std::iter::from_fn(move || {
        if emitted == total {
            return None;
        }
        let out = current.clone();
        emitted += 1;
        for i in (0..moduli.len()).rev() {
            current[i] += 1;
            if current[i] < moduli[i] {
                break;
            }
            current[i] = 0;
        }
        Some(out)
    })
}

/// A registered scheme family with fixed parameters.
pub trait SchemeFamily: Debug + Send + Sync {
    fn descriptor(&self) -> &SchemeDescriptor;
    /// Encoding applied to the (encrypted) secret.
    fn code(&self) -> &dyn QuantumCode;
    fn blocks(&self) -> &[RandomBlock];
    fn block_outcome(&self, block: usize, draws: &[u64]) -> Result<BlockOutcome>;
    /// Operator for key value `key` of `block`, on the logical space for
    /// logical blocks and on the physical space for physical ones.
    fn key_op(&self, block: usize, key: usize) -> Result<PauliString>;
    /// Recovers the secret from the shares of `subset` (1-based players).
    fn reconstruct(&self, dealt: &DealtSecret, subset: &[usize]) -> Result<DensityMatrix>;

    fn secret_space(&self) -> QuditSpace {
        self.code().logical_space()
    }

    fn randomness_points(&self) -> u128 {
        self.blocks().iter().map(RandomBlock::points).product()
    }

    fn draw_moduli(&self) -> Vec<u64> {
        self.blocks().iter().flat_map(|b| b.draws.iter().map(|d| d.1)).collect()
    }

    /// Global state for `secret` under the given key of every block.
    fn quantum_state(&self, secret: &StateVector, keys: &[usize]) -> Result<StateVector> {
        let mut s = secret.clone();
        for (b, block) in self.blocks().iter().enumerate() {
            if block.stage == KeyStage::Logical {
                s = s.apply_pauli(&self.key_op(b, keys[b])?)?;
            }
        }
        let mut enc = self.code().encode(&s)?;
        for (b, block) in self.blocks().iter().enumerate() {
            if block.stage == KeyStage::Physical {
                enc = enc.apply_pauli(&self.key_op(b, keys[b])?)?;
            }
        }
        Ok(enc)
    }

    /// Deals with every draw given explicitly, in block order.
    fn deal_with(&self, secret: &StateVector, draws: &[u64]) -> Result<DealtSecret> {
        let desc = self.descriptor();
        if secret.space() != &self.secret_space() {
            return Err(Error::DimensionMismatch { expected: self.secret_space().total_dim(), found: secret.dim() });
        }
        let expected: usize = self.blocks().iter().map(|b| b.draws.len()).sum();
        if draws.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: draws.len() });
        }
        let n = desc.players();
        let mut classical: Vec<Vec<(String, u64)>> = vec![Vec::new(); n];
        let mut keys = Vec::with_capacity(self.blocks().len());
        let mut record = Vec::with_capacity(draws.len());
        let mut offset = 0;
        for (b, block) in self.blocks().iter().enumerate() {
            let part = &draws[offset..offset + block.draws.len()];
            offset += block.draws.len();
            for ((name, modulus), &value) in block.draws.iter().zip(part) {
                if value >= *modulus {
                    return Err(Error::param(format!("draw {name} = {value} is not below {modulus}")));
                }
                record.push(DrawRecord { name: name.clone(), modulus: *modulus, value });
            }
            let outcome = self.block_outcome(b, part)?;
            for (held, mut extra) in classical.iter_mut().zip(outcome.shares) {
                held.append(&mut extra);
            }
            keys.push(outcome.key);
        }
        let state = self.quantum_state(secret, &keys)?;
        let dims = state.space().dims().to_vec();
        let bundles = classical
            .into_iter()
            .enumerate()
            .map(|(i, c)| ShareBundle {
                player: i + 1,
                classical: c,
                quantum: desc.quantum[i].clone(),
                quantum_dims: desc.quantum[i].iter().map(|&q| dims[q]).collect(),
            })
            .collect();
        Ok(DealtSecret { descriptor: desc.clone(), secret: secret.clone(), state, bundles, randomness: record })
    }

    fn deal(&self, secret: &StateVector, rng: &mut dyn rand::RngCore) -> Result<DealtSecret> {
        let draws: Vec<u64> = self.draw_moduli().into_iter().map(|m| rng.gen_range(0..m)).collect();
        self.deal_with(secret, &draws)
    }
}

/// Sorts `subset`, checks it names players of `dealt`, and returns it.
pub(crate) fn checked_players(dealt: &DealtSecret, subset: &[usize]) -> Result<Vec<usize>> {
    check_subset(subset, dealt.descriptor.players())
}

/// Reconstructs with the family recorded in the dealt descriptor.
pub fn reconstruct(dealt: &DealtSecret, subset: &[usize]) -> Result<DensityMatrix> {
    dealt.descriptor.spec.build()?.reconstruct(dealt, subset)
}

fn deal_family<R: Rng + ?Sized>(spec: SchemeSpec, secret: &StateVector, rng: &mut R) -> Result<DealtSecret> {
    let family = spec.build()?;
    let draws: Vec<u64> = family.draw_moduli().into_iter().map(|m| rng.gen_range(0..m)).collect();
    family.deal_with(secret, &draws)
}

fn single_dim(secret: &StateVector) -> Result<usize> {
    match secret.space().dims() {
        [d] => Ok(*d),
        _ => Err(Error::param("the secret must be a single qudit")),
    }
}

fn uniform_dim(secret: &StateVector) -> Result<usize> {
    let dims = secret.space().dims();
    match dims.first() {
        Some(&d) if dims.iter().all(|&x| x == d) => Ok(d),
        _ => Err(Error::param("the secret must be a register of equal-dimension qudits")),
    }
}

/// `(k,n)` scheme with a single-qudit secret and `2n − 2k + 1` quantum shares.
pub fn deal_hqss<R: Rng + ?Sized>(secret: &StateVector, k: usize, n: usize, rng: &mut R) -> Result<DealtSecret> {
    deal_family(SchemeSpec::hqss(k, n, single_dim(secret)?), secret, rng)
}

/// `(k,n)` scheme whose secret is `L_qr` qudits sent through a ramp code on
/// `n_qr` quantum shares.
pub fn deal_hrqss<R: Rng + ?Sized>(secret: &StateVector, k: usize, n: usize, n_qr: usize, rng: &mut R) -> Result<DealtSecret> {
    deal_family(SchemeSpec::hrqss(k, n, n_qr, uniform_dim(secret)?), secret, rng)
}

/// `(n,n)` scheme: one encrypted qudit per player, keys shared additively.
pub fn deal_nn<R: Rng + ?Sized>(secret: &StateVector, rng: &mut R) -> Result<DealtSecret> {
    deal_family(SchemeSpec::nn(secret.space().len(), uniform_dim(secret)?), secret, rng)
}

/// `(n−1,n)` scheme on code C with Pauli keys shared by a ramp classical
/// scheme, for `n ∈ {4, 6}`.
pub fn deal_n1n<R: Rng + ?Sized>(secret: &StateVector, n: usize, rng: &mut R) -> Result<DealtSecret> {
    deal_family(SchemeSpec::n1n(n), secret, rng)
}

#[cfg(test)]
mod tests;
