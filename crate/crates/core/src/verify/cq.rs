use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::classical::check_subset;
use crate::codes::{QuantumCode, StabilizerCodeC};
use crate::encrypt::reduction_lemma_deviation;
use crate::error::{Error, Result};
use crate::qudit::{trace_norm_hermitian, DensityMatrix, QuditSpace, StateVector};
use crate::scheme::{assignments, DealtSecret, KeyStage, SchemeFamily};

/// One classical outcome of a subset with its probability and the
/// conditional state of the subset's quantum shares.
#[derive(Clone, Debug)]
pub struct CqEntry {
    pub label: Vec<u64>,
    pub probability: f64,
    pub state: DensityMatrix,
}

/// A classical-quantum state `Σ_c p_c |c⟩⟨c| ⊗ ρ_c`.
#[derive(Clone, Debug, Default)]
pub struct CqEnsemble {
    pub entries: Vec<CqEntry>,
}

impl CqEnsemble {
    fn weighted(&self) -> BTreeMap<&[u64], (f64, &DensityMatrix)> {
        self.entries.iter().map(|e| (e.label.as_slice(), (e.probability, &e.state))).collect()
    }

    /// Trace distance between the block-diagonal flattenings.
    pub fn trace_distance(&self, other: &CqEnsemble) -> Result<f64> {
        let a = self.weighted();
        let b = other.weighted();
        let mut total = 0.0;
        for (label, &(pa, ra)) in &a {
            match b.get(label) {
                Some(&(pb, rb)) => {
                    if ra.space() != rb.space() {
                        return Err(Error::DimensionMismatch { expected: ra.dim(), found: rb.dim() });
                    }
                    let diff: Vec<Complex64> =
                        ra.entries().iter().zip(rb.entries()).map(|(x, y)| x * pa - y * pb).collect();
                    total += trace_norm_hermitian(&diff, ra.dim());
                }
                None => total += pa,
            }
        }
        total += b.iter().filter(|(l, _)| !a.contains_key(*l)).map(|(_, &(p, _))| p).sum::<f64>();
        Ok(0.5 * total)
    }

    pub fn label_distribution(&self) -> BTreeMap<Vec<u64>, f64> {
        self.entries.iter().map(|e| (e.label.clone(), e.probability)).collect()
    }
}

/// `I(secret; classical label)` in bits for a uniform choice among the
/// given ensembles.
pub fn label_mutual_information(ensembles: &[CqEnsemble]) -> f64 {
    if ensembles.is_empty() {
        return 0.0;
    }
    let entropy = |dist: &BTreeMap<Vec<u64>, f64>| -> f64 {
        dist.values().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
    };
    let dists: Vec<BTreeMap<Vec<u64>, f64>> = ensembles.iter().map(CqEnsemble::label_distribution).collect();
    let m = dists.len() as f64;
    let mut mean: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
    for d in &dists {
        for (l, p) in d {
            *mean.entry(l.clone()).or_default() += p / m;
        }
    }
    (entropy(&mean) - dists.iter().map(entropy).sum::<f64>() / m).max(0.0)
}

/// Which secrets a check runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SecretSet {
    /// Basis states plus `(|a⟩+|a+1⟩)/√2` and `(|a⟩+i|a+1⟩)/√2`.
    Spanning,
    /// Basis states plus both superpositions of every pair, a basis of the
    /// operator space.
    Complete,
}

/// The chosen secrets, `|0⟩` first.
pub fn secret_set(space: &QuditSpace, kind: SecretSet) -> Vec<StateVector> {
    let dim = space.total_dim();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<StateVector> = (0..dim).map(|a| StateVector::basis(space.clone(), a).expect("in range")).collect();
    let pairs: Vec<(usize, usize)> = match kind {
        SecretSet::Spanning => (1..dim).map(|b| (b - 1, b)).collect(),
        SecretSet::Complete => (0..dim).flat_map(|a| (a + 1..dim).map(move |b| (a, b))).collect(),
    };
    for (a, b) in pairs {
        for phase in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[a] = Complex64::new(h, 0.0);
            amps[b] = phase;
            out.push(StateVector::new(space.clone(), amps).expect("normalized"));
        }
    }
    out
}

/// The cq state of `subset` in one dealt instance: its classical values in
/// player order and the reduced state of its quantum shares.
pub fn subset_view(dealt: &DealtSecret, subset: &[usize]) -> Result<CqEnsemble> {
    let players = check_subset(subset, dealt.descriptor.players())?;
    let mut label = Vec::new();
    for &p in &players {
        label.extend(dealt.bundle(p)?.classical.iter().map(|v| v.1));
    }
    let state = dealt.state.reduced(&dealt.quantum_of(&players)?)?;
    Ok(CqEnsemble { entries: vec![CqEntry { label, probability: 1.0, state }] })
}

fn guard(points: u128, limit: u128) -> Result<()> {
    if points > limit {
        return Err(Error::EnumerationGuard { points, limit });
    }
    Ok(())
}

/// Exact ensemble by dealing at every point of the joint randomness.
pub fn naive_ensemble(family: &dyn SchemeFamily, subset: &[usize], secret: &StateVector, limit: u128) -> Result<CqEnsemble> {
    let points = family.randomness_points();
    guard(points, limit)?;
    let moduli = family.draw_moduli();
    let mut acc: BTreeMap<Vec<u64>, (u64, Vec<Complex64>, QuditSpace)> = BTreeMap::new();
    for draws in assignments(&moduli) {
        let dealt = family.deal_with(secret, &draws)?;
        for e in subset_view(&dealt, subset)?.entries {
            let slot = acc
                .entry(e.label)
                .or_insert_with(|| (0, vec![Complex64::new(0.0, 0.0); e.state.dim() * e.state.dim()], e.state.space().clone()));
            slot.0 += 1;
            slot.1.iter_mut().zip(e.state.entries()).for_each(|(a, v)| *a += v);
        }
    }
    let entries = acc
        .into_iter()
        .map(|(label, (count, sum, space))| {
            let data = sum.into_iter().map(|v| v / count as f64).collect();
            Ok(CqEntry { label, probability: count as f64 / points as f64, state: DensityMatrix::new(space, data)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CqEnsemble { entries })
}

/// Per-block outcome table, shared by every subset.
#[derive(Debug)]
pub(crate) struct BlockTable {
    keys: Vec<usize>,
    widths: Vec<usize>,
    offsets: Vec<usize>,
    stride: usize,
    values: Vec<u64>,
}

impl BlockTable {
    pub(crate) fn build(family: &dyn SchemeFamily, block: usize) -> Result<Self> {
        let spec = &family.blocks()[block];
        let moduli: Vec<u64> = spec.draws.iter().map(|d| d.1).collect();
        let mut keys = Vec::new();
        let mut values = Vec::new();
        let mut widths: Option<Vec<usize>> = None;
        for draws in assignments(&moduli) {
            let out = family.block_outcome(block, &draws)?;
            let w: Vec<usize> = out.shares.iter().map(Vec::len).collect();
            match &widths {
                None => widths = Some(w),
                Some(prev) if *prev != w => return Err(Error::param("share layout must not depend on the draws")),
                _ => {}
            }
            keys.push(out.key);
            values.extend(out.shares.into_iter().flatten().map(|v| v.1));
        }
        let widths = widths.unwrap_or_else(|| vec![0; family.descriptor().players()]);
        let offsets = widths.iter().scan(0, |acc, w| { let o = *acc; *acc += w; Some(o) }).collect();
        let stride = widths.iter().sum();
        Ok(Self { keys, widths, offsets, stride, values })
    }

    fn points(&self) -> usize {
        self.keys.len()
    }

    /// Joint distribution of (subset label, key) merged into classes with
    /// proportional key likelihoods. Returns `classes[c][key]`.
    fn classes(&self, players: &[usize], key_count: usize) -> Vec<Vec<f64>> {
        let mut by_label: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
        for (pt, &key) in self.keys.iter().enumerate() {
            let row = &self.values[pt * self.stride..(pt + 1) * self.stride];
            let label: Vec<u64> = players
                .iter()
                .flat_map(|&p| row[self.offsets[p - 1]..self.offsets[p - 1] + self.widths[p - 1]].iter().copied())
                .collect();
            by_label.entry(label).or_insert_with(|| vec![0; key_count])[key] += 1;
        }
        let mut merged: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
        for counts in by_label.into_values() {
            let g = counts.iter().fold(0u64, |a, &b| gcd(a, b));
            let shape: Vec<u64> = counts.iter().map(|c| c / g).collect();
            let slot = merged.entry(shape).or_insert_with(|| vec![0; key_count]);
            slot.iter_mut().zip(&counts).for_each(|(a, c)| *a += c);
        }
        let total = self.points() as f64;
        merged.into_values().map(|c| c.into_iter().map(|v| v as f64 / total).collect()).collect()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Key monomials and class weights of one block, as seen by a subset.
#[derive(Debug)]
struct BlockChannel {
    ops: Vec<Vec<(usize, Complex64)>>,
    classes: Vec<Vec<f64>>,
}

impl BlockChannel {
    fn twirl(&self, class: usize, rho: &DensityMatrix) -> DensityMatrix {
        let n = rho.dim();
        let mut acc = vec![Complex64::new(0.0, 0.0); n * n];
        for (op, &w) in self.ops.iter().zip(&self.classes[class]) {
            if w == 0.0 {
                continue;
            }
            let t = rho.conjugate_monomial(op);
            acc.iter_mut().zip(t.entries()).for_each(|(a, v)| *a += v * w);
        }
        DensityMatrix::from_raw(rho.space().clone(), acc)
    }
}

/// `ρ ↦ Tr_rest(V ρ V†)` for a fixed set of kept physical subsystems.
#[derive(Debug)]
struct EncodeReduce {
    space: QuditSpace,
    /// Per rest index: `(logical a, kept index, amplitude)`.
    groups: Vec<Vec<(usize, usize, Complex64)>>,
}

impl EncodeReduce {
    fn new(code: &dyn QuantumCode, keep: &[usize]) -> Result<Self> {
        let physical = code.physical_space();
        let space = physical.select(keep)?;
        let (kept, rest, _, rd) = physical.split_indices(keep);
        let mut groups = vec![Vec::new(); rd];
        for a in 0..code.logical_space().total_dim() {
            for (i, v) in code.encode_basis(a) {
                groups[rest[i]].push((a, kept[i], v));
            }
        }
        Ok(Self { space, groups })
    }

    fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let kd = self.space.total_dim();
        let mut out = vec![Complex64::new(0.0, 0.0); kd * kd];
        for g in &self.groups {
            for &(a, ki, va) in g {
                for &(b, kj, vb) in g {
                    let x = rho.get(a, b);
                    if x != Complex64::new(0.0, 0.0) {
                        out[ki * kd + kj] += va * x * vb.conj();
                    }
                }
            }
        }
        DensityMatrix::from_raw(self.space.clone(), out)
    }
}

static REDUCTION_CHECK: OnceLock<f64> = OnceLock::new();

/// Largest deviation of the local-key reduction on every subset and key of
/// the 4-qubit code, computed once per process.
pub fn reduction_lemma_check() -> f64 {
    *REDUCTION_CHECK.get_or_init(|| {
        let code = StabilizerCodeC::new(4).expect("valid code");
        let space = code.logical_space();
        let states: Vec<StateVector> = secret_set(&space, SecretSet::Spanning)
            .iter()
            .map(|s| code.encode(s).expect("logical state"))
            .collect();
        reduction_lemma_deviation(&states).unwrap_or(f64::INFINITY)
    })
}

pub const REDUCTION_TOL: f64 = 1e-10;

/// Secret-independent description of a subset's view: block classes plus
/// the map from secret to conditional states.
#[derive(Debug)]
pub struct SubsetChannel {
    logical: Vec<BlockChannel>,
    physical: Vec<BlockChannel>,
    encode: EncodeReduce,
    points: u128,
}

impl SubsetChannel {
    /// Builds the channel of `subset` from shared block tables.
    pub(crate) fn new(family: &dyn SchemeFamily, tables: &[BlockTable], subset: &[usize]) -> Result<Self> {
        let desc = family.descriptor();
        let players = check_subset(subset, desc.players())?;
        let holders: Vec<usize> = {
            let mut h: Vec<usize> = players.iter().flat_map(|&p| desc.quantum[p - 1].iter().copied()).collect();
            h.sort_unstable();
            h
        };
        Self::with_holders(family, tables, &players, &holders)
    }

    pub(crate) fn with_holders(family: &dyn SchemeFamily, tables: &[BlockTable], players: &[usize], holders: &[usize]) -> Result<Self> {
        let mut logical = Vec::new();
        let mut physical = Vec::new();
        let physical_space = family.code().physical_space();
        let mut points = 0u128;
        for (b, (block, table)) in family.blocks().iter().zip(tables).enumerate() {
            points += table.points() as u128;
            let classes = table.classes(players, block.keys);
            match block.stage {
                KeyStage::Logical => {
                    let ops = (0..block.keys).map(|k| Ok(family.key_op(b, k)?.basis_table())).collect::<Result<_>>()?;
                    logical.push(BlockChannel { ops, classes });
                }
                KeyStage::Physical => {
                    if reduction_lemma_check() > REDUCTION_TOL {
                        return Err(Error::ReductionUnverified);
                    }
                    // keys with the same restriction to the holders act identically
                    let mut index: BTreeMap<(Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
                    let mut key_class = Vec::with_capacity(block.keys);
                    for k in 0..block.keys {
                        let op = family.key_op(b, k)?;
                        let x = holders.iter().map(|&h| op.x_powers()[h]).collect();
                        let z = holders.iter().map(|&h| op.z_powers()[h]).collect();
                        let next = index.len();
                        key_class.push(*index.entry((x, z)).or_insert(next));
                    }
                    let sub = physical_space.select(holders)?;
                    let mut ops = vec![Vec::new(); index.len()];
                    for ((x, z), i) in index {
                        let op = crate::qudit::PauliString::new(sub.clone(), x, z, Complex64::new(1.0, 0.0))?;
                        ops[i] = op.basis_table();
                    }
                    let classes = classes
                        .into_iter()
                        .map(|w| {
                            let mut merged = vec![0.0; ops.len()];
                            for (k, p) in w.into_iter().enumerate() {
                                merged[key_class[k]] += p;
                            }
                            merged
                        })
                        .collect();
                    physical.push(BlockChannel { ops, classes });
                }
            }
        }
        let encode = EncodeReduce::new(family.code(), holders)?;
        Ok(Self { logical, physical, encode, points })
    }

    /// Classical enumeration points behind this channel.
    pub fn points(&self) -> u128 {
        self.points
    }

    pub fn class_count(&self) -> usize {
        self.logical.iter().chain(&self.physical).map(|b| b.classes.len()).product()
    }

    /// Exact cq ensemble for `secret`.
    pub fn ensemble(&self, secret: &DensityMatrix) -> CqEnsemble {
        let mut entries = Vec::new();
        let mut label = Vec::new();
        self.walk_logical(0, secret.clone(), &mut label, &mut entries);
        CqEnsemble { entries }
    }

    fn walk_logical(&self, depth: usize, rho: DensityMatrix, label: &mut Vec<u64>, out: &mut Vec<CqEntry>) {
        if depth == self.logical.len() {
            let reduced = self.encode.apply(&rho);
            self.walk_physical(0, reduced, label, out);
            return;
        }
        for c in 0..self.logical[depth].classes.len() {
            label.push(c as u64);
            let next = self.logical[depth].twirl(c, &rho);
            self.walk_logical(depth + 1, next, label, out);
            label.pop();
        }
    }

    fn walk_physical(&self, depth: usize, rho: DensityMatrix, label: &mut Vec<u64>, out: &mut Vec<CqEntry>) {
        if depth == self.physical.len() {
            let p = rho.trace();
            if p > 0.0 {
                let data = rho.entries().iter().map(|v| v / p).collect();
                out.push(CqEntry { label: label.clone(), probability: p, state: DensityMatrix::from_raw(rho.space().clone(), data) });
            }
            return;
        }
        for c in 0..self.physical[depth].classes.len() {
            label.push(c as u64);
            let next = self.physical[depth].twirl(c, &rho);
            self.walk_physical(depth + 1, next, label, out);
            label.pop();
        }
    }
}

/// Builds every block table, refusing when the per-block enumeration
/// exceeds `limit` points in total.
pub(crate) fn block_tables(family: &dyn SchemeFamily, limit: u128) -> Result<Vec<BlockTable>> {
    let points: u128 = family.blocks().iter().map(|b| b.points()).sum();
    guard(points, limit)?;
    (0..family.blocks().len()).map(|b| BlockTable::build(family, b)).collect()
}

/// Exact ensemble of `subset` for `secret` via per-block enumeration.
pub fn factored_ensemble(family: &dyn SchemeFamily, subset: &[usize], secret: &StateVector, limit: u128) -> Result<CqEnsemble> {
    let tables = block_tables(family, limit)?;
    Ok(SubsetChannel::new(family, &tables, subset)?.ensemble(&secret.density()))
}
