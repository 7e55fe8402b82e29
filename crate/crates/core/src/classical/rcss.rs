use std::collections::HashMap;
use std::fmt::Debug;

use rand::Rng;

use super::{check_subset, ClassicalShareSet};
use crate::error::{Error, Result};
use crate::field::{AffineKnowledge, AffineRow, EchelonBasis, Gf2Vector};

/// Registered ramp classical scheme names.
pub const RCSS_SCHEMES: &[&str] = &["rcss4", "rcss6", "rcss6-fixed", "direct-key"];

/// A linear scheme sharing an even-parity bit string `p₁..pₙ`.
///
/// Every held bit is a GF(2) combination of the secret bits and of uniform
/// dealer bits `r₁..r_m`; rows are laid out as `(p₁..pₙ, r₁..r_m)`.
pub trait RampClassicalScheme: Debug + Send + Sync {
    fn name(&self) -> &'static str;
    fn players(&self) -> usize;
    fn randomness(&self) -> Vec<String>;
    /// Bits held by player `k` (1-based), with their coefficient rows.
    fn player_bits(&self, k: usize) -> Vec<(String, Gf2Vector)>;
}

fn row(n: usize, m: usize, p: &[usize], r: &[usize]) -> Gf2Vector {
    let mut v = Gf2Vector::zeros(n + m);
    for &i in p {
        v.flip(i - 1);
    }
    for &i in r {
        v.flip(n + i - 1);
    }
    v
}

/// Four players; player `k` holds `p_{σ(k)} + z` with σ = (1,4,2,3).
#[derive(Clone, Copy, Debug, Default)]
pub struct Rcss4;

impl Rcss4 {
    pub const SIGMA: [usize; 4] = [1, 4, 2, 3];
}

impl RampClassicalScheme for Rcss4 {
    fn name(&self) -> &'static str {
        "rcss4"
    }

    fn players(&self) -> usize {
        4
    }

    fn randomness(&self) -> Vec<String> {
        vec!["z".into()]
    }

    fn player_bits(&self, k: usize) -> Vec<(String, Gf2Vector)> {
        vec![("b".into(), row(4, 1, &[Self::SIGMA[k - 1]], &[1]))]
    }
}

fn rcss6_x(j: usize) -> Gf2Vector {
    if j < 6 {
        row(6, 11, &[], &[j])
    } else {
        row(6, 11, &[], &[1, 2, 3, 4, 5])
    }
}

fn rcss6_y(j: usize) -> Gf2Vector {
    row(6, 11, &[], &[5 + j])
}

fn rcss6_wrap(k: usize, j: isize) -> usize {
    ((k as isize + j - 1).rem_euclid(6) + 1) as usize
}

fn rcss6_randomness() -> Vec<String> {
    (1..=5).map(|i| format!("x{i}")).chain((1..=6).map(|i| format!("y{i}"))).collect()
}

/// `(x_k, y_k, s_k)` where `s_k = x_{k+1}+x_{k+2}+y_{k+2}+y_{k+3}` plus the
/// two secret bits at the given offsets from `k`.
fn rcss6_bits(k: usize, p_offsets: [isize; 2]) -> Vec<(String, Gf2Vector)> {
    let w = |j| rcss6_wrap(k, j);
    let mut s = rcss6_x(w(1));
    s.xor_assign(&rcss6_x(w(2)));
    s.xor_assign(&rcss6_y(w(2)));
    s.xor_assign(&rcss6_y(w(3)));
    s.xor_assign(&row(6, 11, &[w(p_offsets[0]), w(p_offsets[1])], &[]));
    vec![("x".into(), rcss6_x(k)), ("y".into(), rcss6_y(k)), ("s".into(), s)]
}

/// Six players holding `(x_k, y_k, s_k)` with `Σx = 0` and
/// `s_k = x_{k+1}+x_{k+2}+y_{k+2}+y_{k+3}+p_{k+3}+p_{k−1}` (k even) or
/// `…+p_{k+3}+p_{k−2}` (k odd).
///
/// `x₆` is not drawn: it is `x₁ + … + x₅`, which gives the uniform
/// distribution on the constrained `x`. Randomness is `x₁..x₅, y₁..y₆`.
///
/// Players {2,3,4,6} can combine `s₂+s₃+s₆` into `p₃+p₆` (and likewise
/// {2,4,5,6} and {1,2,4,6} by even rotation), a functional of their own
/// qubits. See [`Rcss6Fixed`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Rcss6;

impl RampClassicalScheme for Rcss6 {
    fn name(&self) -> &'static str {
        "rcss6"
    }

    fn players(&self) -> usize {
        6
    }

    fn randomness(&self) -> Vec<String> {
        rcss6_randomness()
    }

    fn player_bits(&self, k: usize) -> Vec<(String, Gf2Vector)> {
        rcss6_bits(k, if k % 2 == 0 { [3, -1] } else { [3, -2] })
    }
}

/// Same layout as [`Rcss6`] but odd players receive `p_{k+1}+p_{k−1}` in
/// `s_k`. No subset of four or fewer players determines a functional
/// supported on its own indices; every five recover `p` up to complement.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rcss6Fixed;

impl RampClassicalScheme for Rcss6Fixed {
    fn name(&self) -> &'static str {
        "rcss6-fixed"
    }

    fn players(&self) -> usize {
        6
    }

    fn randomness(&self) -> Vec<String> {
        rcss6_randomness()
    }

    fn player_bits(&self, k: usize) -> Vec<(String, Gf2Vector)> {
        rcss6_bits(k, if k % 2 == 0 { [3, -1] } else { [1, -1] })
    }
}

/// Sabotaged scheme: player `k` receives `p_k` in the clear.
#[derive(Clone, Copy, Debug)]
pub struct DirectKey {
    pub n: usize,
}

impl RampClassicalScheme for DirectKey {
    fn name(&self) -> &'static str {
        "direct-key"
    }

    fn players(&self) -> usize {
        self.n
    }

    fn randomness(&self) -> Vec<String> {
        Vec::new()
    }

    fn player_bits(&self, k: usize) -> Vec<(String, Gf2Vector)> {
        vec![("b".into(), row(self.n, 0, &[k], &[]))]
    }
}

/// Looks up a registered scheme for `n` players.
pub fn rcss_scheme(name: &str, n: usize) -> Result<Box<dyn RampClassicalScheme>> {
    match name {
        "rcss4" if n == 4 => Ok(Box::new(Rcss4)),
        "rcss6" if n == 6 => Ok(Box::new(Rcss6)),
        "rcss6-fixed" if n == 6 => Ok(Box::new(Rcss6Fixed)),
        "direct-key" if n >= 2 => Ok(Box::new(DirectKey { n })),
        "rcss4" | "rcss6" | "rcss6-fixed" | "direct-key" => Err(Error::param(format!("scheme {name} does not support {n} players"))),
        _ => Err(Error::Unknown { kind: "classical scheme", name: name.into() }),
    }
}

fn check_parity(p: &[bool], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.len() });
    }
    if p.iter().filter(|&&b| b).count() % 2 != 0 {
        return Err(Error::ParityViolation(format!("secret bits {p:?} have odd weight")));
    }
    Ok(())
}

/// Deals `p` with explicit dealer bits `r`.
pub fn rcss_deal_with(scheme: &dyn RampClassicalScheme, p: &[bool], r: &[bool]) -> Result<ClassicalShareSet> {
    let n = scheme.players();
    check_parity(p, n)?;
    let m = scheme.randomness().len();
    if r.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: r.len() });
    }
    let u = Gf2Vector::from_bits(&p.iter().chain(r).copied().collect::<Vec<_>>());
    let shares = (1..=n)
        .map(|k| {
            scheme
                .player_bits(k)
                .into_iter()
                .map(|(name, coeffs)| (name, u64::from(coeffs.dot(&u))))
                .collect()
        })
        .collect();
    Ok(ClassicalShareSet { scheme: scheme.name().into(), modulus: 2, shares })
}

pub fn rcss_deal<R: Rng + ?Sized>(scheme: &dyn RampClassicalScheme, p: &[bool], rng: &mut R) -> Result<ClassicalShareSet> {
    let r: Vec<bool> = (0..scheme.randomness().len()).map(|_| rng.gen()).collect();
    rcss_deal_with(scheme, p, &r)
}

fn secret_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

/// Linear system for `subset`: its held bits plus the known parity of `p`.
fn knowledge_system(scheme: &dyn RampClassicalScheme, subset: &[usize]) -> Result<AffineKnowledge> {
    let n = scheme.players();
    let subset = check_subset(subset, n)?;
    let mut sys = AffineKnowledge::new(secret_names(n), scheme.randomness());
    for &k in &subset {
        for (name, coeffs) in scheme.player_bits(k) {
            sys.push(AffineRow { label: format!("P{k}.{name}"), coeffs, constant: false })?;
        }
    }
    let parity = Gf2Vector::from_bits(&(0..n + scheme.randomness().len()).map(|i| i < n).collect::<Vec<_>>());
    sys.push(AffineRow { label: "parity".into(), coeffs: parity, constant: false })?;
    Ok(sys)
}

/// Functionals of `p` a subset learns, modulo the publicly known parity.
#[derive(Clone, Debug)]
pub struct RcssKnowledge {
    pub players: usize,
    /// Independent representatives of the quotient by the parity row.
    pub basis: Vec<Gf2Vector>,
    /// Human-readable form of `basis`, e.g. `p4+p5`.
    pub described: Vec<String>,
    system: AffineKnowledge,
}

impl RcssKnowledge {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether `f` (over `p₁..pₙ`) is determined, parity included.
    pub fn determines(&self, f: &Gf2Vector) -> bool {
        self.system.determines(f)
    }

    /// Every nonzero determined functional (parity included).
    pub fn determined_space(&self) -> Vec<Gf2Vector> {
        let gens: Vec<Gf2Vector> = self.system.determined_functionals().into_iter().map(|f| f.target).collect();
        let mut out = Vec::new();
        for mask in 1u64..(1 << gens.len()) {
            let mut v = Gf2Vector::zeros(self.players);
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(g);
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn rcss_knowledge(scheme: &dyn RampClassicalScheme, subset: &[usize]) -> Result<RcssKnowledge> {
    let n = scheme.players();
    let system = knowledge_system(scheme, subset)?;
    let parity = Gf2Vector::from_bits(&vec![true; n]);
    let mut seen = EchelonBasis::default();
    seen.insert(&parity);
    let mut basis = Vec::new();
    // prefer low-weight representatives for readability
    let mut functionals: Vec<Gf2Vector> = system.determined_functionals().into_iter().map(|f| f.target).collect();
    functionals.sort_by_key(|f| (f.weight(), f.ones()));
    for f in functionals {
        if seen.insert(&f) {
            basis.push(f);
        }
    }
    let described = basis.iter().map(|f| system.describe(f)).collect();
    Ok(RcssKnowledge { players: n, basis, described, system })
}

/// Recovers `p` up to complement from the named bits of at least `n − 1`
/// players. The representative returned has `p₁ = 0`.
pub fn rcss_reconstruct(scheme: &dyn RampClassicalScheme, shares: &[(usize, &[(String, u64)])]) -> Result<Vec<bool>> {
    let n = scheme.players();
    let subset: Vec<usize> = shares.iter().map(|s| s.0).collect();
    let knowledge = rcss_knowledge(scheme, &subset)?;
    if knowledge.rank() < n - 2 {
        return Err(Error::InsufficientShares { needed: n - 1, got: shares.len() });
    }
    let system = knowledge_system(scheme, &subset)?;
    let mut sorted: Vec<&(usize, &[(String, u64)])> = shares.iter().collect();
    sorted.sort_by_key(|s| s.0);
    let mut values = Vec::new();
    for (k, held) in sorted {
        for (name, _) in scheme.player_bits(*k) {
            let v = held
                .iter()
                .find(|(nm, _)| *nm == name)
                .ok_or_else(|| Error::param(format!("player {k} share lacks bit {name}")))?;
            values.push(v.1 & 1 == 1);
        }
    }
    values.push(false);
    let sol = system
        .solve(&values)
        .ok_or_else(|| Error::Recovery("classical shares are mutually inconsistent".into()))?;
    let mut p: Vec<bool> = (0..n).map(|i| sol.get(i)).collect();
    if p[0] {
        p.iter_mut().for_each(|b| *b = !*b);
    }
    Ok(p)
}

/// `I(view of subset ; p)` in bits for uniform even-parity `p`, by direct
/// enumeration of every secret and every dealer draw.
pub fn classical_mutual_information(scheme: &dyn RampClassicalScheme, subset: &[usize]) -> Result<f64> {
    let n = scheme.players();
    let subset = check_subset(subset, n)?;
    let m = scheme.randomness().len();
    if n + m > 40 {
        return Err(Error::EnumerationGuard { points: 1u128 << (n + m - 1), limit: 1 << 39 });
    }
    let to_mask = |v: &Gf2Vector, lo: usize, len: usize| (0..len).fold(0u64, |acc, i| acc | (u64::from(v.get(lo + i)) << i));
    let rows: Vec<(u64, u64)> = subset
        .iter()
        .flat_map(|&k| scheme.player_bits(k))
        .map(|(_, v)| (to_mask(&v, 0, n), to_mask(&v, n, m)))
        .collect();
    let secrets: Vec<u64> = (0u64..1 << n).filter(|p| p.count_ones() % 2 == 0).collect();
    let mut joint: HashMap<u64, Vec<u64>> = HashMap::new();
    for (si, &p) in secrets.iter().enumerate() {
        for r in 0u64..1 << m {
            let view = rows
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &(pm, rm))| acc | (u64::from(((p & pm).count_ones() + (r & rm).count_ones()) % 2 == 1) << i));
            joint.entry(view).or_insert_with(|| vec![0; secrets.len()])[si] += 1;
        }
    }
    let total = (secrets.len() as f64) * (1u64 << m) as f64;
    let p_secret = 1.0 / secrets.len() as f64;
    let mut info = 0.0;
    for counts in joint.values() {
        let p_view = counts.iter().sum::<u64>() as f64 / total;
        for &c in counts.iter().filter(|&&c| c > 0) {
            let p_joint = c as f64 / total;
            info += p_joint * (p_joint / (p_view * p_secret)).log2();
        }
    }
    Ok(info.max(0.0))
}
