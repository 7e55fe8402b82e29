//! Exhaustive verification of access structures.
//!
//! Authorized subsets are checked by running the scheme's own decoder.
//! Every other subset gets the exact classical-quantum state it holds,
//! averaged over every value of every dealer draw, and these states are
//! compared across a set of secrets that spans the secret's operator space.

mod cq;

pub use cq::{
    factored_ensemble, label_mutual_information, naive_ensemble, reduction_lemma_check, secret_set, subset_view,
    CqEnsemble, CqEntry, SecretSet, SubsetChannel, REDUCTION_TOL,
};

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::check_subset;
use crate::error::{Error, Result};
use crate::qudit::{fidelity, PROTOCOL_TOL};
use crate::scheme::{assignments, Access, DealtSecret, SchemeDescriptor, SchemeFamily};
use cq::{block_tables, BlockTable};

/// Largest enumeration the verifier will run.
pub const ENUMERATION_GUARD: u128 = 100_000_000;

/// Trace distance above which a subset counts as leaking, and fidelity
/// deficit above which it counts as unable to reconstruct.
pub const LEAK_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Deal at every point of the joint randomness.
    Naive,
    /// Enumerate each key block separately; physical keys act on the
    /// subset's reduced state.
    Factored,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub tolerance: f64,
    pub route: Route,
    pub forbidden_secrets: SecretSet,
    pub authorized_secrets: SecretSet,
    /// Authorized checks sweep every randomness point up to this many.
    pub exhaustive_limit: u128,
    /// Seeded randomness points per secret beyond the exhaustive limit.
    pub authorized_samples: usize,
    pub seed: u64,
    pub guard: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance: PROTOCOL_TOL,
            route: Route::Factored,
            forbidden_secrets: SecretSet::Complete,
            authorized_secrets: SecretSet::Spanning,
            exhaustive_limit: 256,
            authorized_samples: 16,
            seed: 0,
            guard: ENUMERATION_GUARD,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    /// Largest trace distance between the cq state of `|0⟩` and any other
    /// secret's.
    pub max_trace_distance: Option<f64>,
    /// Smallest decoder fidelity; absent when the decoder refuses.
    pub min_fidelity: Option<f64>,
    /// Mutual information between the secret and the classical label.
    pub classical_mi_bits: Option<f64>,
    /// Leakage of the complementary shares, for purely quantum schemes.
    pub complement_trace_distance: Option<f64>,
    /// Enumeration points behind the cq states.
    pub points: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetClassification {
    pub subset: Vec<usize>,
    pub declared: Access,
    pub observed: Access,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub elapsed_secs: f64,
    pub threads: usize,
    pub forbidden_secrets: usize,
    pub authorized_secrets: usize,
    pub authorized_points: usize,
    pub authorized_exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scheme: SchemeDescriptor,
    pub route: Route,
    pub subsets: Vec<SubsetClassification>,
    pub pass: bool,
    /// No superset of an observed-authorized subset is observed otherwise.
    pub monotone: bool,
    /// No two disjoint subsets are both observed authorized.
    pub no_cloning: bool,
    pub stats: RunStats,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &SubsetClassification> {
        self.subsets.iter().filter(|s| s.observed != s.declared)
    }

    pub fn get(&self, subset: &[usize]) -> Option<&SubsetClassification> {
        self.subsets.iter().find(|s| s.subset == subset)
    }
}

/// Thread pool capped by `HRQSS_THREADS` when it is set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("HRQSS_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Error::param(format!("HRQSS_THREADS must be a positive integer, got {v:?}")))?;
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| Error::param(format!("thread pool: {e}")))
}

/// Randomness points used for authorized checks: all of them when few
/// enough, else a seeded sample.
pub fn authorized_draws(family: &dyn SchemeFamily, opts: &VerifyOptions) -> (Vec<Vec<u64>>, bool) {
    use rand::Rng;
    let moduli = family.draw_moduli();
    if family.randomness_points() <= opts.exhaustive_limit {
        return (assignments(&moduli).collect(), true);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    let draws = (0..opts.authorized_samples).map(|_| moduli.iter().map(|&m| rng.gen_range(0..m)).collect()).collect();
    (draws, false)
}

fn deal_all(family: &dyn SchemeFamily, opts: &VerifyOptions) -> Result<(Vec<DealtSecret>, usize, bool)> {
    let secrets = secret_set(&family.secret_space(), opts.authorized_secrets);
    let (draws, exhaustive) = authorized_draws(family, opts);
    let dealt = secrets
        .par_iter()
        .flat_map_iter(|s| draws.iter().map(move |d| family.deal_with(s, d)))
        .collect::<Result<Vec<_>>>()?;
    Ok((dealt, draws.len(), exhaustive))
}

fn min_fidelity(family: &dyn SchemeFamily, dealt: &[DealtSecret], subset: &[usize]) -> Result<Option<f64>> {
    let mut worst = f64::INFINITY;
    for d in dealt {
        match family.reconstruct(d, subset) {
            Ok(rho) => worst = worst.min(fidelity(&d.secret, &rho)?),
            Err(Error::InsufficientShares { .. } | Error::InsufficientQuantumShares { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(worst))
}

/// Smallest reconstruction fidelity of `subset` over the authorized secret
/// set and randomness points.
pub fn verify_authorized(family: &dyn SchemeFamily, subset: &[usize], opts: &VerifyOptions) -> Result<f64> {
    let subset = check_subset(subset, family.descriptor().players())?;
    let (dealt, _, _) = deal_all(family, opts)?;
    let mut worst = f64::INFINITY;
    for d in &dealt {
        worst = worst.min(fidelity(&d.secret, &family.reconstruct(d, &subset)?)?);
    }
    Ok(worst)
}

/// Leakage of one subset: largest trace distance to the `|0⟩` secret and
/// label mutual information.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Leakage {
    pub max_trace_distance: f64,
    pub classical_mi_bits: f64,
    pub points: u128,
}

struct Context<'a> {
    family: &'a dyn SchemeFamily,
    opts: &'a VerifyOptions,
    tables: Option<Vec<BlockTable>>,
    secrets: Vec<crate::qudit::StateVector>,
}

impl<'a> Context<'a> {
    fn new(family: &'a dyn SchemeFamily, opts: &'a VerifyOptions) -> Result<Self> {
        let tables = match opts.route {
            Route::Factored => Some(block_tables(family, opts.guard)?),
            Route::Naive => None,
        };
        let secrets = secret_set(&family.secret_space(), opts.forbidden_secrets);
        Ok(Self { family, opts, tables, secrets })
    }

    fn summarize(ensembles: &[CqEnsemble], points: u128) -> Result<Leakage> {
        let reference = &ensembles[0];
        let mut worst = 0.0f64;
        for e in &ensembles[1..] {
            worst = worst.max(reference.trace_distance(e)?);
        }
        Ok(Leakage { max_trace_distance: worst, classical_mi_bits: label_mutual_information(ensembles), points })
    }

    fn leakage(&self, subset: &[usize]) -> Result<Leakage> {
        match &self.tables {
            Some(tables) => {
                let channel = SubsetChannel::new(self.family, tables, subset)?;
                let ensembles: Vec<CqEnsemble> = self.secrets.par_iter().map(|s| channel.ensemble(&s.density())).collect();
                Self::summarize(&ensembles, channel.points())
            }
            None => {
                let ensembles = self
                    .secrets
                    .par_iter()
                    .map(|s| naive_ensemble(self.family, subset, s, self.opts.guard))
                    .collect::<Result<Vec<_>>>()?;
                Self::summarize(&ensembles, self.family.randomness_points())
            }
        }
    }

    /// For schemes without classical shares: leakage of every physical
    /// subsystem outside the subset's shares.
    fn complement_leakage(&self, subset: &[usize]) -> Result<Option<f64>> {
        if !self.family.blocks().is_empty() {
            return Ok(None);
        }
        let desc = self.family.descriptor();
        let mine: Vec<usize> = subset.iter().flat_map(|&p| desc.quantum[p - 1].iter().copied()).collect();
        let rest: Vec<usize> = (0..self.family.code().physical_space().len()).filter(|i| !mine.contains(i)).collect();
        let channel = SubsetChannel::with_holders(self.family, &[], &[], &rest)?;
        let ensembles: Vec<CqEnsemble> = self.secrets.par_iter().map(|s| channel.ensemble(&s.density())).collect();
        Ok(Some(Self::summarize(&ensembles, 0)?.max_trace_distance))
    }
}

/// Exact leakage of a subset declared forbidden.
pub fn verify_forbidden(family: &dyn SchemeFamily, subset: &[usize], opts: &VerifyOptions) -> Result<Leakage> {
    check_subset(subset, family.descriptor().players())?;
    Context::new(family, opts)?.leakage(subset)
}

/// Evidence that a subset learns something but cannot reconstruct.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntermediateEvidence {
    pub leakage: Leakage,
    pub min_fidelity: Option<f64>,
    pub complement_trace_distance: Option<f64>,
    pub leaks: bool,
    pub cannot_reconstruct: bool,
}

impl IntermediateEvidence {
    pub fn holds(&self) -> bool {
        self.leaks && self.cannot_reconstruct
    }
}

fn cannot_reconstruct(min_fidelity: Option<f64>, complement: Option<f64>) -> bool {
    // a pure code's shares recover the secret exactly when the rest learn nothing
    match complement {
        Some(c) => c > LEAK_THRESHOLD && min_fidelity.map_or(true, |f| f < 1.0 - LEAK_THRESHOLD),
        None => min_fidelity.map_or(true, |f| f < 1.0 - LEAK_THRESHOLD),
    }
}

pub fn verify_intermediate(family: &dyn SchemeFamily, subset: &[usize], opts: &VerifyOptions) -> Result<IntermediateEvidence> {
    let subset = check_subset(subset, family.descriptor().players())?;
    let ctx = Context::new(family, opts)?;
    let leakage = ctx.leakage(&subset)?;
    let (dealt, _, _) = deal_all(family, opts)?;
    let min_fidelity = min_fidelity(family, &dealt, &subset)?;
    let complement = ctx.complement_leakage(&subset)?;
    Ok(IntermediateEvidence {
        leaks: leakage.max_trace_distance > LEAK_THRESHOLD,
        cannot_reconstruct: cannot_reconstruct(min_fidelity, complement),
        leakage,
        min_fidelity,
        complement_trace_distance: complement,
    })
}

/// All subsets of `1..=n` including the empty one, by size then
/// lexicographically.
pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u64..1 << n).map(|m| (1..=n).filter(|i| m >> (i - 1) & 1 == 1).collect()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn classify(family: &dyn SchemeFamily, ctx: &Context, dealt: &[DealtSecret], subset: &[usize]) -> Result<SubsetClassification> {
    let tol = ctx.opts.tolerance;
    let declared = family.descriptor().declared(subset.len());
    let mut evidence = Evidence { min_fidelity: min_fidelity(family, dealt, subset)?, ..Evidence::default() };
    if evidence.min_fidelity.is_some_and(|f| f >= 1.0 - tol) {
        return Ok(SubsetClassification { subset: subset.to_vec(), declared, observed: Access::Authorized, evidence });
    }
    let leak = ctx.leakage(subset)?;
    evidence.max_trace_distance = Some(leak.max_trace_distance);
    evidence.classical_mi_bits = Some(leak.classical_mi_bits);
    evidence.points = leak.points;
    let observed = if leak.max_trace_distance <= tol && leak.classical_mi_bits <= tol {
        Access::Forbidden
    } else {
        evidence.complement_trace_distance = ctx.complement_leakage(subset)?;
        let leaks = leak.max_trace_distance > LEAK_THRESHOLD || leak.classical_mi_bits > LEAK_THRESHOLD;
        if leaks && cannot_reconstruct(evidence.min_fidelity, evidence.complement_trace_distance) {
            Access::Intermediate
        } else {
            Access::Indeterminate
        }
    };
    Ok(SubsetClassification { subset: subset.to_vec(), declared, observed, evidence })
}

/// Pairs `(S, T)` with `S ⊂ T`, `S` observed authorized and `T` not.
pub fn monotonicity_violations(subsets: &[SubsetClassification]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let auth: Vec<&SubsetClassification> = subsets.iter().filter(|s| s.observed == Access::Authorized).collect();
    let mut out = Vec::new();
    for a in &auth {
        for t in subsets.iter().filter(|t| t.observed != Access::Authorized) {
            if a.subset.iter().all(|p| t.subset.contains(p)) {
                out.push((a.subset.clone(), t.subset.clone()));
            }
        }
    }
    out
}

/// Disjoint pairs of observed-authorized subsets.
pub fn no_cloning_violations(subsets: &[SubsetClassification]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let auth: Vec<&SubsetClassification> = subsets.iter().filter(|s| s.observed == Access::Authorized).collect();
    let mut out = Vec::new();
    for (i, a) in auth.iter().enumerate() {
        for b in &auth[i + 1..] {
            if a.subset.iter().all(|p| !b.subset.contains(p)) {
                out.push((a.subset.clone(), b.subset.clone()));
            }
        }
    }
    out
}

/// Classifies every subset of players and compares with the declaration.
pub fn verify_scheme(family: &dyn SchemeFamily, opts: &VerifyOptions) -> Result<VerificationReport> {
    let n = family.descriptor().players();
    if n > 7 {
        return Err(Error::param(format!("verification covers at most 7 players, got {n}")));
    }
    let pool = thread_pool()?;
    let start = Instant::now();
    let (subsets, stats) = pool.install(|| -> Result<_> {
        let ctx = Context::new(family, opts)?;
        let (dealt, points, exhaustive) = deal_all(family, opts)?;
        let subsets = all_subsets(n)
            .par_iter()
            .map(|s| classify(family, &ctx, &dealt, s))
            .collect::<Result<Vec<_>>>()?;
        let stats = RunStats {
            elapsed_secs: 0.0,
            threads: rayon::current_num_threads(),
            forbidden_secrets: ctx.secrets.len(),
            authorized_secrets: secret_set(&family.secret_space(), opts.authorized_secrets).len(),
            authorized_points: points,
            authorized_exhaustive: exhaustive,
        };
        Ok((subsets, stats))
    })?;
    let pass = subsets.iter().all(|s| s.observed == s.declared);
    Ok(VerificationReport {
        scheme: family.descriptor().clone(),
        route: opts.route,
        monotone: monotonicity_violations(&subsets).is_empty(),
        no_cloning: no_cloning_violations(&subsets).is_empty(),
        pass,
        subsets,
        stats: RunStats { elapsed_secs: start.elapsed().as_secs_f64(), ..stats },
    })
}
