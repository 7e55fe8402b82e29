use num_complex::Complex64;

use super::{
    checked_players, hqss_params, hrqss_params, BlockOutcome, DealtSecret, Family, InnerParams, KeyStage,
    RandomBlock, SchemeDescriptor, SchemeFamily, SchemeSpec, ShareSize,
};
use crate::classical::{
    additive_deal_with, additive_reconstruct, rcss_deal_with, rcss_reconstruct, rcss_scheme, shamir_deal_with,
    shamir_reconstruct, RampClassicalScheme,
};
use crate::codes::{check_strictly_increasing, EmbeddedCode, project_to_logical, PolynomialQss, QuantumCode, RampQss, SparseState, StabilizerCodeC};
use crate::encrypt::{bpq_operator, encrypt_code_state, PauliKeyPair};
use crate::error::{Error, Result};
use crate::field::{next_prime, PrimeField};
use crate::qudit::{DensityMatrix, PauliString, QuditSpace, StateVector};

fn per_player_quantum(n: usize, holders: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| if i < holders { vec![i] } else { Vec::new() }).collect()
}

fn insufficient(needed: usize, got: usize) -> Error {
    Error::InsufficientShares { needed, got }
}

/// Smallest prime share dimension that is at least `d` and has `points`
/// field elements.
fn share_dimension(d: usize, points: usize) -> usize {
    next_prime(d.max(points) as u64) as usize
}

fn embedded(code: Box<dyn QuantumCode>, d: usize, dq: usize) -> Result<Box<dyn QuantumCode>> {
    if d == dq {
        Ok(code)
    } else {
        Ok(Box::new(EmbeddedCode::new(code, d)?))
    }
}

/// HQSS and HRQSS: each secret qudit is one-time padded, the padded secret
/// goes through a threshold or ramp code on the first players, and every
/// key digit is Shamir-shared among all players.
#[derive(Debug)]
pub struct EncryptedCode {
    desc: SchemeDescriptor,
    code: Box<dyn QuantumCode>,
    field: PrimeField,
    blocks: Vec<RandomBlock>,
}

impl EncryptedCode {
    pub fn new(spec: SchemeSpec) -> Result<Self> {
        let (k, n, d) = (spec.k, spec.n, spec.d);
        if d < 2 {
            return Err(Error::param(format!("secret dimension must be at least 2, got {d}")));
        }
        let (code, inner): (Box<dyn QuantumCode>, InnerParams) = match spec.family {
            Family::Hqss => {
                if spec.n_qr.is_some() {
                    return Err(Error::param("hqss fixes its quantum share count; use hrqss to choose n_qr"));
                }
                let (k_q, n_q) = hqss_params(k, n)?;
                let dq = share_dimension(d, 2 * k_q - 1);
                (embedded(Box::new(PolynomialQss::new(k_q, n_q, dq)?), d, dq)?, InnerParams { k: k_q, l: 1, n: n_q })
            }
            Family::Hrqss => {
                let n_qr = spec.n_qr.ok_or_else(|| Error::param("hrqss needs n_qr"))?;
                let (k_qr, l_qr) = hrqss_params(k, n, n_qr)?;
                let dq = share_dimension(d, 2 * k_qr - l_qr);
                (embedded(Box::new(RampQss::new(k_qr, l_qr, n_qr, dq)?), d, dq)?, InnerParams { k: k_qr, l: l_qr, n: n_qr })
            }
            other => return Err(Error::param(format!("{} is not a keyed code family", other.name()))),
        };
        let p = next_prime((n as u64 + 1).max(d as u64));
        let field = PrimeField::new(p)?;
        let mut blocks = Vec::new();
        for j in 1..=inner.l {
            for c in ["k", "l"] {
                let name = format!("{c}{j}");
                let mut draws = vec![(name.clone(), d as u64)];
                draws.extend((1..k).map(|i| (format!("{name}.a{i}"), p)));
                blocks.push(RandomBlock { name, draws, keys: d, stage: KeyStage::Logical });
            }
        }
        let log2_d = (d as f64).log2();
        let log2_share = (code.physical_space().dims()[0] as f64).log2();
        let shares = (1..=n)
            .map(|i| ShareSize {
                log2_dq: if i <= inner.n { log2_share } else { 0.0 },
                log2_dc: 2.0 * inner.l as f64 * (p as f64).log2(),
            })
            .collect();
        let physical = code.physical_space().len();
        let desc = SchemeDescriptor {
            spec,
            inner,
            secret_dims: vec![d; inner.l],
            log2_ds: inner.l as f64 * log2_d,
            shares,
            quantum: per_player_quantum(n, inner.n),
            discarded: (inner.n..physical).collect(),
            threshold: k,
            forbidden_max: k - 1,
            key_field: Some(p),
        };
        Ok(Self { desc, code, field, blocks })
    }
}

impl SchemeFamily for EncryptedCode {
    fn descriptor(&self) -> &SchemeDescriptor {
        &self.desc
    }

    fn code(&self) -> &dyn QuantumCode {
        self.code.as_ref()
    }

    fn blocks(&self) -> &[RandomBlock] {
        &self.blocks
    }

    fn block_outcome(&self, block: usize, draws: &[u64]) -> Result<BlockOutcome> {
        let name = &self.blocks[block].name;
        let key = draws[0];
        let set = shamir_deal_with(self.field.elem(key), self.desc.spec.k, self.desc.spec.n, &draws[1..])?;
        let shares = set.shares.into_iter().map(|s| vec![(name.clone(), s[0].1)]).collect();
        Ok(BlockOutcome { key: key as usize, shares })
    }

    fn key_op(&self, block: usize, key: usize) -> Result<PauliString> {
        let (x, z) = if block % 2 == 0 { (key, 0) } else { (0, key) };
        PauliString::single(self.secret_space(), block / 2, x, z)
    }

    fn reconstruct(&self, dealt: &DealtSecret, subset: &[usize]) -> Result<DensityMatrix> {
        let players = checked_players(dealt, subset)?;
        let k = self.desc.spec.k;
        let holders = dealt.quantum_of(&players)?;
        if holders.len() < self.code.threshold() {
            return Err(Error::InsufficientQuantumShares { needed: self.code.threshold(), got: holders.len() });
        }
        if players.len() < k {
            return Err(insufficient(k, players.len()));
        }
        let mut keys = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let points = players
                .iter()
                .map(|&p| Ok((p, dealt.classical_value(p, &block.name)?)))
                .collect::<Result<Vec<_>>>()?;
            keys.push(shamir_reconstruct(self.field, &points, k)?.value() as usize);
        }
        let decoded = self.code.reconstruct(&dealt.state, &holders)?;
        let mut pad = PauliString::identity(self.secret_space());
        for (b, &key) in keys.iter().enumerate() {
            pad = pad.compose(&self.key_op(b, key)?)?;
        }
        decoded.conjugate(&pad.inverse())
    }
}

/// Identity encoding of an `n`-qudit register, one qudit per player.
#[derive(Clone, Debug)]
struct PlainQudits {
    space: QuditSpace,
}

impl QuantumCode for PlainQudits {
    fn name(&self) -> String {
        format!("plain({})", self.space.len())
    }

    fn logical_space(&self) -> QuditSpace {
        self.space.clone()
    }

    fn physical_space(&self) -> QuditSpace {
        self.space.clone()
    }

    fn shares(&self) -> usize {
        self.space.len()
    }

    fn threshold(&self) -> usize {
        self.space.len()
    }

    fn forbidden_max(&self) -> usize {
        0
    }

    fn encode_basis(&self, logical: usize) -> SparseState {
        vec![(logical, Complex64::new(1.0, 0.0))]
    }

    fn decode_subset(&self, reduced: &DensityMatrix, subset: &[usize]) -> Result<DensityMatrix> {
        check_strictly_increasing(subset)?;
        if subset.len() != self.space.len() {
            return Err(insufficient(self.space.len(), subset.len()));
        }
        Ok(reduced.clone())
    }
}

/// `(n,n)` scheme: player `i` receives padded secret qudit `i`; both digits
/// of its key are additively shared among the other `n − 1` players.
#[derive(Debug)]
pub struct Nn {
    desc: SchemeDescriptor,
    code: PlainQudits,
    blocks: Vec<RandomBlock>,
}

impl Nn {
    pub fn new(spec: SchemeSpec) -> Result<Self> {
        let (n, d) = (spec.n, spec.d);
        if n < 2 || d < 2 || spec.k != n {
            return Err(Error::param(format!("nn needs k = n ≥ 2 and d ≥ 2 (k={}, n={n}, d={d})", spec.k)));
        }
        if spec.n_qr.is_some() || spec.l.is_some() {
            return Err(Error::param("nn takes no inner code parameters"));
        }
        let mut blocks = Vec::new();
        for i in 1..=n {
            for c in ["k", "l"] {
                let name = format!("{c}{i}");
                let mut draws = vec![(name.clone(), d as u64)];
                draws.extend((1..n - 1).map(|r| (format!("{name}.r{r}"), d as u64)));
                blocks.push(RandomBlock { name, draws, keys: d, stage: KeyStage::Logical });
            }
        }
        let log2_d = (d as f64).log2();
        let desc = SchemeDescriptor {
            spec,
            inner: InnerParams { k: n, l: n, n },
            secret_dims: vec![d; n],
            log2_ds: n as f64 * log2_d,
            shares: vec![ShareSize { log2_dq: log2_d, log2_dc: 2.0 * (n - 1) as f64 * log2_d }; n],
            quantum: per_player_quantum(n, n),
            discarded: Vec::new(),
            threshold: n,
            forbidden_max: n - 1,
            key_field: None,
        };
        Ok(Self { desc, code: PlainQudits { space: QuditSpace::uniform(d, n)? }, blocks })
    }

    fn others(&self, i: usize) -> impl Iterator<Item = usize> {
        (1..=self.desc.spec.n).filter(move |&j| j != i)
    }
}

impl SchemeFamily for Nn {
    fn descriptor(&self) -> &SchemeDescriptor {
        &self.desc
    }

    fn code(&self) -> &dyn QuantumCode {
        &self.code
    }

    fn blocks(&self) -> &[RandomBlock] {
        &self.blocks
    }

    fn block_outcome(&self, block: usize, draws: &[u64]) -> Result<BlockOutcome> {
        let n = self.desc.spec.n;
        let name = &self.blocks[block].name;
        let owner = block / 2 + 1;
        let set = additive_deal_with(draws[0], self.desc.spec.d as u64, n - 1, &draws[1..])?;
        let mut shares = vec![Vec::new(); n];
        for (j, s) in self.others(owner).zip(set.shares) {
            shares[j - 1].push((name.clone(), s[0].1));
        }
        Ok(BlockOutcome { key: draws[0] as usize, shares })
    }

    fn key_op(&self, block: usize, key: usize) -> Result<PauliString> {
        let (x, z) = if block % 2 == 0 { (key, 0) } else { (0, key) };
        PauliString::single(self.code.space.clone(), block / 2, x, z)
    }

    fn reconstruct(&self, dealt: &DealtSecret, subset: &[usize]) -> Result<DensityMatrix> {
        let players = checked_players(dealt, subset)?;
        let n = self.desc.spec.n;
        if players.len() < n {
            return Err(insufficient(n, players.len()));
        }
        let mut pad = PauliString::identity(self.code.space.clone());
        for (b, block) in self.blocks.iter().enumerate() {
            let owner = b / 2 + 1;
            let shares = self
                .others(owner)
                .enumerate()
                .map(|(m, j)| Ok((m + 1, dealt.classical_value(j, &block.name)?)))
                .collect::<Result<Vec<_>>>()?;
            let key = additive_reconstruct(&shares, n - 1, self.desc.spec.d as u64)?;
            pad = pad.compose(&self.key_op(b, key as usize)?)?;
        }
        dealt.state.density().conjugate(&pad.inverse())
    }
}

/// `(n−1,n)` scheme on code C: the encoded secret is padded by `B_pq`, and
/// `p`, `q` are shared by two independent runs of a ramp classical scheme.
#[derive(Debug)]
pub struct N1n {
    desc: SchemeDescriptor,
    code: StabilizerCodeC,
    rcss: Box<dyn RampClassicalScheme>,
    blocks: Vec<RandomBlock>,
}

impl N1n {
    pub fn default_rcss(n: usize) -> &'static str {
        if n == 4 {
            "rcss4"
        } else {
            "rcss6-fixed"
        }
    }

    pub fn new(spec: SchemeSpec) -> Result<Self> {
        let n = spec.n;
        if n != 4 && n != 6 {
            return Err(Error::param(format!("n1n needs n ∈ {{4, 6}}, got {n}")));
        }
        if spec.k != n - 1 || spec.d != 2 {
            return Err(Error::param("n1n has k = n − 1 and qubit shares"));
        }
        let name = match (&spec.rcss, &spec.sabotage) {
            (Some(_), Some(_)) => return Err(Error::param("choose either a classical scheme or a sabotage")),
            (Some(r), None) => r.clone(),
            (None, Some(_)) => "direct-key".to_string(),
            (None, None) => Self::default_rcss(n).to_string(),
        };
        let rcss = rcss_scheme(&name, n)?;
        let code = StabilizerCodeC::new(n)?;
        let blocks = ["p", "q"]
            .iter()
            .map(|c| {
                let mut draws: Vec<(String, u64)> = (1..n).map(|i| (format!("{c}{i}"), 2)).collect();
                draws.extend(rcss.randomness().into_iter().map(|r| (format!("{c}.{r}"), 2)));
                RandomBlock { name: c.to_string(), draws, keys: 1 << n, stage: KeyStage::Physical }
            })
            .collect();
        let bits_per_player = rcss.player_bits(1).len();
        let desc = SchemeDescriptor {
            spec,
            inner: InnerParams { k: n - 1, l: n - 2, n },
            secret_dims: vec![2; n - 2],
            log2_ds: (n - 2) as f64,
            shares: vec![ShareSize { log2_dq: 1.0, log2_dc: 2.0 * bits_per_player as f64 }; n],
            quantum: per_player_quantum(n, n),
            discarded: Vec::new(),
            threshold: n - 1,
            forbidden_max: n - 2,
            key_field: None,
        };
        Ok(Self { desc, code, rcss, blocks })
    }

    pub fn rcss(&self) -> &dyn RampClassicalScheme {
        self.rcss.as_ref()
    }

    fn key_bits(&self, key: usize) -> Vec<bool> {
        let n = self.code.n();
        (0..n).map(|i| key >> (n - 1 - i) & 1 == 1).collect()
    }

    fn recover_string(&self, dealt: &DealtSecret, players: &[usize], c: &str) -> Result<Vec<bool>> {
        let held = players
            .iter()
            .map(|&p| Ok((p, dealt.classical_with_prefix(p, &format!("{c}."))?)))
            .collect::<Result<Vec<_>>>()?;
        let views: Vec<(usize, &[(String, u64)])> = held.iter().map(|(p, v)| (*p, v.as_slice())).collect();
        rcss_reconstruct(self.rcss.as_ref(), &views)
    }
}

impl SchemeFamily for N1n {
    fn descriptor(&self) -> &SchemeDescriptor {
        &self.desc
    }

    fn code(&self) -> &dyn QuantumCode {
        &self.code
    }

    fn blocks(&self) -> &[RandomBlock] {
        &self.blocks
    }

    fn block_outcome(&self, block: usize, draws: &[u64]) -> Result<BlockOutcome> {
        let n = self.code.n();
        let c = &self.blocks[block].name;
        let mut bits: Vec<bool> = draws[..n - 1].iter().map(|&b| b == 1).collect();
        bits.push(bits.iter().fold(false, |a, &b| a ^ b));
        let r: Vec<bool> = draws[n - 1..].iter().map(|&b| b == 1).collect();
        let set = rcss_deal_with(self.rcss.as_ref(), &bits, &r)?;
        let shares = set
            .shares
            .into_iter()
            .map(|held| held.into_iter().map(|(name, v)| (format!("{c}.{name}"), v)).collect())
            .collect();
        let key = bits.iter().fold(0usize, |acc, &b| acc << 1 | usize::from(b));
        Ok(BlockOutcome { key, shares })
    }

    fn key_op(&self, block: usize, key: usize) -> Result<PauliString> {
        let bits: Vec<usize> = self.key_bits(key).into_iter().map(usize::from).collect();
        let zeros = vec![0; bits.len()];
        let (x, z) = if block == 0 { (zeros, bits) } else { (bits, zeros) };
        PauliString::new(self.code.physical_space(), x, z, Complex64::new(1.0, 0.0))
    }

    fn quantum_state(&self, secret: &StateVector, keys: &[usize]) -> Result<StateVector> {
        let pair = PauliKeyPair::new(self.key_bits(keys[0]), self.key_bits(keys[1]))?;
        encrypt_code_state(&self.code.encode(secret)?, &pair, &self.code)
    }

    fn reconstruct(&self, dealt: &DealtSecret, subset: &[usize]) -> Result<DensityMatrix> {
        let players = checked_players(dealt, subset)?;
        let n = self.code.n();
        if players.len() < n - 1 {
            return Err(insufficient(n - 1, players.len()));
        }
        let p = self.recover_string(dealt, &players, "p")?;
        let q = self.recover_string(dealt, &players, "q")?;
        let pair = PauliKeyPair::new(p, q)?;
        let holders = dealt.quantum_of(&players)?;
        let reduced = dealt.state.reduced(&holders)?;
        let full = if holders.len() == n {
            reduced
        } else {
            let missing = (0..n).find(|i| !holders.contains(i)).expect("one qubit is missing");
            self.code.recover_erasure_channel(&reduced, missing)?
        };
        project_to_logical(&self.code, &full.conjugate(&bpq_operator(&pair))?)
    }
}

/// A bare threshold or ramp code, one share per player and no classical
/// part.
#[derive(Debug)]
pub struct CodeOnly {
    desc: SchemeDescriptor,
    code: Box<dyn QuantumCode>,
}

impl CodeOnly {
    pub fn new(spec: SchemeSpec) -> Result<Self> {
        let (k, n, d) = (spec.k, spec.n, spec.d);
        let (code, l): (Box<dyn QuantumCode>, usize) = match spec.family {
            Family::Cgl => (Box::new(PolynomialQss::new(k, n, d)?), 1),
            Family::Ramp => {
                let l = spec.l.ok_or_else(|| Error::param("ramp needs L"))?;
                (Box::new(RampQss::new(k, l, n, d)?), l)
            }
            other => return Err(Error::param(format!("{} is not a bare code family", other.name()))),
        };
        let forbidden_max = if spec.sabotage.is_some() { code.threshold() - 1 } else { code.forbidden_max() };
        let log2_d = (d as f64).log2();
        let desc = SchemeDescriptor {
            inner: InnerParams { k, l, n },
            secret_dims: vec![d; l],
            log2_ds: l as f64 * log2_d,
            shares: vec![ShareSize { log2_dq: log2_d, log2_dc: 0.0 }; n],
            quantum: per_player_quantum(n, n),
            discarded: (n..code.physical_space().len()).collect(),
            threshold: code.threshold(),
            forbidden_max,
            key_field: None,
            spec,
        };
        Ok(Self { desc, code })
    }
}

impl SchemeFamily for CodeOnly {
    fn descriptor(&self) -> &SchemeDescriptor {
        &self.desc
    }

    fn code(&self) -> &dyn QuantumCode {
        self.code.as_ref()
    }

    fn blocks(&self) -> &[RandomBlock] {
        &[]
    }

    fn block_outcome(&self, block: usize, _draws: &[u64]) -> Result<BlockOutcome> {
        Err(Error::IndexOutOfRange { index: block, len: 0 })
    }

    fn key_op(&self, block: usize, _key: usize) -> Result<PauliString> {
        Err(Error::IndexOutOfRange { index: block, len: 0 })
    }

    fn reconstruct(&self, dealt: &DealtSecret, subset: &[usize]) -> Result<DensityMatrix> {
        let players = checked_players(dealt, subset)?;
        let holders = dealt.quantum_of(&players)?;
        self.code.reconstruct(&dealt.state, &holders)
    }
}
