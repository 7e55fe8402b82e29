//! Classical secret sharing: additive `(n,n)`, Shamir `(k,n)` and the two
//! ramp schemes over GF(2) that distribute Pauli keys.

mod rcss;

pub use rcss::{
    classical_mutual_information, rcss_deal, rcss_deal_with, rcss_knowledge, rcss_reconstruct, rcss_scheme, DirectKey,
    RampClassicalScheme, RcssKnowledge, Rcss4, Rcss6, Rcss6Fixed, RCSS_SCHEMES,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{lagrange_interpolate, FieldElement, PrimeField};

/// Classical shares of every player. `shares[i]` belongs to player `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalShareSet {
    pub scheme: String,
    /// Alphabet size of every value (2 for bits, `d` for digits, `p` for
    /// field elements).
    pub modulus: u64,
    pub shares: Vec<Vec<(String, u64)>>,
}

impl ClassicalShareSet {
    pub fn players(&self) -> usize {
        self.shares.len()
    }

    pub fn player(&self, k: usize) -> Result<&[(String, u64)]> {
        if k == 0 || k > self.shares.len() {
            return Err(Error::InvalidPlayers(format!("player {k} not in 1..={}", self.shares.len())));
        }
        Ok(&self.shares[k - 1])
    }

    /// The single value held by player `k` when every share is one symbol.
    pub fn value(&self, k: usize) -> Result<u64> {
        match self.player(k)? {
            [(_, v)] => Ok(*v),
            other => Err(Error::param(format!("player {k} holds {} values, not one", other.len()))),
        }
    }
}

/// Checks a 1-based player subset against `n` players and returns it sorted.
pub fn check_subset(subset: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    if let Some(&bad) = s.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::InvalidPlayers(format!("player {bad} not in 1..={n}")));
    }
    if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidPlayers(format!("player {} listed twice", w[0])));
    }
    Ok(s)
}

/// Additive sharing with explicit randomness: the first `n − 1` shares are
/// `draws`, the last makes the sum equal `secret`.
pub fn additive_deal_with(secret: u64, d: u64, n: usize, draws: &[u64]) -> Result<ClassicalShareSet> {
    if n == 0 || d < 2 {
        return Err(Error::param(format!("additive sharing needs n ≥ 1 and d ≥ 2 (n={n}, d={d})")));
    }
    if draws.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, found: draws.len() });
    }
    let mut values: Vec<u64> = draws.iter().map(|v| v % d).collect();
    let partial = values.iter().fold(0, |acc, v| (acc + v) % d);
    values.push((secret % d + d - partial) % d);
    Ok(ClassicalShareSet {
        scheme: "additive".into(),
        modulus: d,
        shares: values.into_iter().map(|v| vec![("a".into(), v)]).collect(),
    })
}

pub fn additive_deal<R: Rng + ?Sized>(secret: u64, d: u64, n: usize, rng: &mut R) -> Result<ClassicalShareSet> {
    let draws: Vec<u64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(0..d.max(1))).collect();
    additive_deal_with(secret, d, n, &draws)
}

/// Sum of all `n` shares mod `d`. `shares` are `(player, value)` pairs.
pub fn additive_reconstruct(shares: &[(usize, u64)], n: usize, d: u64) -> Result<u64> {
    let players: Vec<usize> = shares.iter().map(|s| s.0).collect();
    let sorted = check_subset(&players, n)?;
    if let Some(missing) = (1..=n).find(|k| sorted.binary_search(k).is_err()) {
        return Err(Error::MissingShare(missing));
    }
    Ok(shares.iter().fold(0, |acc, &(_, v)| (acc + v % d) % d))
}

/// Shamir sharing with explicit coefficients `a_1..a_{k−1}`; player `j`
/// receives `f(j)` with `f(0) = secret`.
pub fn shamir_deal_with(secret: FieldElement, k: usize, n: usize, coeffs: &[u64]) -> Result<ClassicalShareSet> {
    let field = secret.field();
    let p = field.modulus();
    if k == 0 || k > n {
        return Err(Error::param(format!("Shamir threshold must satisfy 1 ≤ k ≤ n (k={k}, n={n})")));
    }
    if p <= n as u64 {
        return Err(Error::param(format!("field size {p} must exceed the number of players {n}")));
    }
    if coeffs.len() != k - 1 {
        return Err(Error::DimensionMismatch { expected: k - 1, found: coeffs.len() });
    }
    let mut poly = vec![secret.value()];
    poly.extend(coeffs.iter().map(|c| c % p));
    let shares = (1..=n as u64).map(|x| vec![("f".into(), field.eval_poly(&poly, x))]).collect();
    Ok(ClassicalShareSet { scheme: "shamir".into(), modulus: p, shares })
}

pub fn shamir_deal<R: Rng + ?Sized>(secret: FieldElement, k: usize, n: usize, rng: &mut R) -> Result<ClassicalShareSet> {
    let p = secret.field().modulus();
    let coeffs: Vec<u64> = (0..k.saturating_sub(1)).map(|_| rng.gen_range(0..p)).collect();
    shamir_deal_with(secret, k, n, &coeffs)
}

/// Interpolates `f(0)` from at least `k` `(player, value)` pairs.
pub fn shamir_reconstruct(field: PrimeField, shares: &[(usize, u64)], k: usize) -> Result<FieldElement> {
    if shares.len() < k {
        return Err(Error::InsufficientShares { needed: k, got: shares.len() });
    }
    let points: Vec<(FieldElement, FieldElement)> =
        shares[..k].iter().map(|&(x, y)| (field.elem(x as u64), field.elem(y))).collect();
    lagrange_interpolate(&points, field.elem(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::collections::HashMap;

    #[test]
    fn additive_single_player_holds_secret() {
        let s = additive_deal_with(4, 7, 1, &[]).unwrap();
        assert_eq!(s.value(1).unwrap(), 4);
    }

    #[test]
    fn additive_binary_pair_distribution() {
        // enumerate the one free draw
        let outcomes: Vec<(u64, u64)> = (0..2)
            .map(|r| {
                let s = additive_deal_with(1, 2, 2, &[r]).unwrap();
                (s.value(1).unwrap(), s.value(2).unwrap())
            })
            .collect();
        assert_eq!(outcomes, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn additive_sum_relation_and_round_trip() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        for d in 2..=7u64 {
            for n in 1..=7usize {
                for secret in 0..d {
                    let s = additive_deal(secret, d, n, &mut rng).unwrap();
                    let pairs: Vec<(usize, u64)> = (1..=n).map(|k| (k, s.value(k).unwrap())).collect();
                    assert_eq!(pairs.iter().map(|p| p.1).sum::<u64>() % d, secret);
                    assert_eq!(additive_reconstruct(&pairs, n, d).unwrap(), secret);
                }
            }
        }
    }

    #[test]
    fn additive_missing_share() {
        assert_eq!(additive_reconstruct(&[(1, 0), (3, 1)], 3, 2), Err(Error::MissingShare(2)));
    }

    #[test]
    fn shamir_threshold_one_copies_secret() {
        let f = PrimeField::new(7).unwrap();
        let s = shamir_deal_with(f.elem(5), 1, 4, &[]).unwrap();
        assert!((1..=4).all(|k| s.value(k).unwrap() == 5));
    }

    #[test]
    fn shamir_two_of_two_over_gf5_every_slope() {
        let f = PrimeField::new(5).unwrap();
        for slope in 0..5 {
            let s = shamir_deal_with(f.elem(3), 2, 2, &[slope]).unwrap();
            let pairs = [(1, s.value(1).unwrap()), (2, s.value(2).unwrap())];
            assert_eq!(shamir_reconstruct(f, &pairs, 2).unwrap().value(), 3);
        }
    }

    #[test]
    fn shamir_single_share_marginal_is_uniform() {
        let f = PrimeField::new(5).unwrap();
        for player in 1..=3 {
            let mut counts = [0; 5];
            for slope in 0..5 {
                let s = shamir_deal_with(f.elem(2), 2, 3, &[slope]).unwrap();
                counts[s.value(player).unwrap() as usize] += 1;
            }
            assert_eq!(counts, [1; 5]);
        }
    }

    #[test]
    fn shamir_perfectness_exhaustive() {
        // k−1 shares: the count of polynomials yielding each view is the same
        // for every secret
        for p in [3u64, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for n in 2..=5usize.min(p as usize - 1) {
                for k in 2..=n {
                    let viewers: Vec<usize> = (1..k).collect();
                    let mut table: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
                    let total = p.pow(k as u32 - 1);
                    for secret in 0..p {
                        for mut idx in 0..total {
                            let coeffs: Vec<u64> = (0..k - 1)
                                .map(|_| {
                                    let c = idx % p;
                                    idx /= p;
                                    c
                                })
                                .collect();
                            let s = shamir_deal_with(f.elem(secret), k, n, &coeffs).unwrap();
                            let view: Vec<u64> = viewers.iter().map(|&v| s.value(v).unwrap()).collect();
                            table.entry(view).or_insert_with(|| vec![0; p as usize])[secret as usize] += 1;
                        }
                    }
                    for counts in table.values() {
                        assert!(counts.iter().all(|&c| c == counts[0]), "p={p} n={n} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn shamir_errors() {
        let f = PrimeField::new(5).unwrap();
        assert!(shamir_deal_with(f.elem(1), 2, 5, &[1]).is_err());
        assert_eq!(
            shamir_reconstruct(f, &[(1, 2)], 2),
            Err(Error::InsufficientShares { needed: 2, got: 1 })
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn shamir_any_k_shares_interpolate(secret in 0u64..11, k in 1usize..5, extra in 0usize..3, seed in any::<u64>(), pick in any::<u64>()) {
                let n = k + extra;
                let f = PrimeField::new(11).unwrap();
                let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
                let s = shamir_deal(f.elem(secret), k, n, &mut rng).unwrap();
                let mut players: Vec<usize> = (1..=n).collect();
                let mut sel = rand_chacha::ChaCha8Rng::seed_from_u64(pick);
                use rand::seq::SliceRandom;
                players.shuffle(&mut sel);
                let pairs: Vec<(usize, u64)> = players[..k].iter().map(|&j| (j, s.value(j).unwrap())).collect();
                prop_assert_eq!(shamir_reconstruct(f, &pairs, k).unwrap().value(), secret);
            }
        }
    }
}
