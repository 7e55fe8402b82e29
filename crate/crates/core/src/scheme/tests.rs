use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::qudit::fidelity;

fn random_state(space: QuditSpace, seed: u64) -> StateVector {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let amps = (0..space.total_dim())
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    StateVector::normalized(space, amps).unwrap()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..1 << n).map(move |m| (1..=n).filter(|i| m >> (i - 1) & 1 == 1).collect())
}

fn round_trip(spec: SchemeSpec, seeds: std::ops::Range<u64>) {
    let family = spec.build().unwrap();
    let n = family.descriptor().players();
    let t = family.descriptor().threshold;
    for seed in seeds {
        let secret = random_state(family.secret_space(), seed);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let dealt = family.deal(&secret, &mut rng).unwrap();
        for s in subsets(n).filter(|s| s.len() >= t) {
            let rho = family.reconstruct(&dealt, &s).unwrap();
            let f = fidelity(&secret, &rho).unwrap();
            assert!(f > 1.0 - 1e-9, "{} subset {s:?} fidelity {f}", family.descriptor().label());
        }
    }
}

#[test]
fn hqss_parameters() {
    assert_eq!(hqss_params(6, 7).unwrap(), (2, 3));
    assert_eq!(hqss_params(2, 2).unwrap(), (1, 1));
    assert_eq!(hqss_params(2, 3).unwrap(), (2, 3));
    assert_eq!(hqss_params(3, 4).unwrap(), (2, 3));
    let err = hqss_params(3, 6).unwrap_err().to_string();
    assert!(err.contains("no-cloning: n ≤ 2k−1"), "{err}");
    for n in 1..9 {
        for k in (n / 2 + 1)..=n {
            let (k_q, n_q) = hqss_params(k, n).unwrap();
            assert_eq!(n_q, 2 * k_q - 1);
            assert_eq!(n_q - k_q, n - k);
            // at least k − (n − n_q) quantum shares in every authorized set
            assert!(k_q <= k - (n - n_q));
        }
    }
}

#[test]
fn hrqss_parameters() {
    assert_eq!(hrqss_params(6, 7, 7).unwrap(), (6, 5));
    assert_eq!(hrqss_params(6, 7, 3).unwrap(), (2, 1));
    assert_eq!(hrqss_params(4, 4, 4).unwrap(), (4, 4));
    assert!(hrqss_params(6, 7, 2).is_err());
    assert!(hrqss_params(6, 7, 8).is_err());
    for n in 2..9 {
        for k in (n / 2 + 1)..=n {
            let lo = 2 * n - 2 * k + 1;
            assert_eq!(hrqss_params(k, n, lo).unwrap(), (hqss_params(k, n).unwrap().0, 1));
        }
    }
}

#[test]
fn costs() {
    assert!((cost_hqss(6, 7, 2.0).unwrap() - 3.0).abs() < 1e-12);
    assert!((cost_hrqss(6, 7, 7, 2.0).unwrap() - 1.4).abs() < 1e-12);
    assert!((cost_hrqss(6, 7, 3, 2.0).unwrap() - 3.0).abs() < 1e-12);
    for n in 2..9 {
        for k in (n / 2 + 1)..=n {
            for ds in [2.0, 3.0, 16.0] {
                let lo = 2 * n - 2 * k + 1;
                assert!((cost_hrqss(k, n, n, ds).unwrap() - cost_min(k, n, ds).unwrap()).abs() < 1e-12);
                assert!((cost_hrqss(k, n, lo, ds).unwrap() - cost_hqss(k, n, ds).unwrap()).abs() < 1e-12);
                // with k = n the cost is the secret size for every n_qr
                for n_qr in (lo..n).filter(|_| k < n) {
                    assert!(cost_hrqss(k, n, n_qr + 1, ds).unwrap() < cost_hrqss(k, n, n_qr, ds).unwrap());
                }
            }
        }
        // an (n,n) scheme sends exactly the secret
        assert!((cost_min(n, n, 2f64.powi(n as i32)).unwrap() - n as f64).abs() < 1e-12);
    }
    assert!(cost_min(2, 4, 2.0).is_err());
}

#[test]
fn cost_table_rows() {
    let rows = cost_table(6, 7, 2.0).unwrap();
    assert_eq!(rows.iter().map(|r| r.n_qr).collect::<Vec<_>>(), vec![3, 4, 5, 6, 7]);
    assert!((rows[0].total_qubits - 3.0).abs() < 1e-12);
    assert!((rows[4].total_qubits - 1.4).abs() < 1e-12);
    assert!((rows[4].qubits_per_share - 0.2).abs() < 1e-12);
    assert!(rows.iter().all(|r| r.quantum_share.holds()));
    assert_eq!(rows[0].classical_share, Some(BoundStatus::Saturated));
    assert_eq!(rows[4].classical_share, None);
    assert_eq!(cost_table(2, 3, 2.0).unwrap().len(), 1);
}

#[test]
fn bound_examples() {
    for n in [4usize, 6, 8] {
        let s = bound_check(1.0, 2.0 * (n - 3) as f64, (n - 2) as f64);
        assert_eq!(s, BoundStatus::Saturated);
    }
    let d = 3f64.log2();
    for n in 2..6 {
        assert_eq!(bound_check(d, 2.0 * (n - 1) as f64 * d, n as f64 * d), BoundStatus::Saturated);
    }
    assert_eq!(bound_check(1.0, 0.0, 1.0), BoundStatus::Saturated);
    assert_eq!(bound_check(1.0, 1.0, 1.0), BoundStatus::Satisfied);
    assert_eq!(bound_check(0.0, 1.0, 1.0), BoundStatus::Violated);
}

#[test]
fn descriptors_and_bounds() {
    let nn = SchemeSpec::nn(3, 2).build().unwrap();
    assert!(nn.descriptor().bound_report().iter().all(|&b| b == BoundStatus::Saturated));
    for n in [4, 6] {
        let f = SchemeSpec::n1n(n).build().unwrap();
        let d = f.descriptor();
        assert!(d.bound_report().iter().all(|&b| b == BoundStatus::Saturated));
        assert!(d.shares.iter().all(|s| s.log2_dq == 1.0 && s.log2_dc == 2.0 * (n - 3) as f64));
    }
    let bad = SchemeSpec::n1n(6).with_sabotage("direct-key").build().unwrap();
    assert!(bad.descriptor().bound_report().iter().all(|&b| b == BoundStatus::Violated));
    let h = SchemeSpec::hqss(3, 4, 3).build().unwrap();
    let d = h.descriptor();
    assert_eq!(d.key_field, Some(5));
    assert_eq!(d.inner, InnerParams { k: 2, l: 1, n: 3 });
    assert!(d.bound_report().iter().all(|b| b.holds()));
    assert_eq!(d.quantum, vec![vec![0], vec![1], vec![2], vec![]]);
    assert_eq!(d.declared(2), Access::Forbidden);
    assert_eq!(d.declared(3), Access::Authorized);
    let r = SchemeSpec::ramp(3, 2, 4, 5).build().unwrap();
    assert_eq!(r.descriptor().declared(2), Access::Intermediate);
    let over = SchemeSpec::ramp(3, 2, 4, 5).with_sabotage("overclaim").build().unwrap();
    assert_eq!(over.descriptor().declared(2), Access::Forbidden);
}

#[test]
fn invalid_specs() {
    assert!(SchemeSpec::n1n(5).build().is_err());
    assert!(SchemeSpec::hqss(3, 7, 3).build().is_err());
    assert!(SchemeSpec::hqss(3, 4, 1).build().is_err());
    // a composite secret dimension is carried on the next prime
    let h = SchemeSpec::hqss(3, 4, 4).build().unwrap();
    assert_eq!(h.code().physical_space().dims()[0], 5);
    assert!(SchemeSpec::hrqss(6, 7, 8, 11).build().is_err());
    assert!(SchemeSpec::nn(3, 2).with_sabotage("overclaim").build().is_err());
    assert!(SchemeSpec::nn(3, 2).with_rcss("rcss4").build().is_err());
    assert!(SchemeSpec::n1n(4).with_rcss("rcss6").build().is_err());
    assert!(matches!(SchemeSpec::n1n(4).with_sabotage("nope").build(), Err(Error::Unknown { .. })));
    assert_eq!(Family::parse("hrqss").unwrap(), Family::Hrqss);
    assert!(Family::parse("bb84").is_err());
}

#[test]
fn round_trips() {
    round_trip(SchemeSpec::hqss(3, 4, 3), 0..3);
    round_trip(SchemeSpec::hqss(2, 2, 2), 0..3);
    round_trip(SchemeSpec::hqss(2, 3, 3), 0..2);
    round_trip(SchemeSpec::hrqss(3, 4, 4, 5), 0..2);
    round_trip(SchemeSpec::hrqss(3, 4, 3, 3), 0..2);
    round_trip(SchemeSpec::nn(2, 2), 0..3);
    round_trip(SchemeSpec::nn(3, 3), 0..2);
    round_trip(SchemeSpec::n1n(4), 0..4);
    round_trip(SchemeSpec::n1n(6), 0..2);
    round_trip(SchemeSpec::n1n(6).with_rcss("rcss6"), 0..2);
    round_trip(SchemeSpec::cgl(2, 3, 3), 0..2);
    round_trip(SchemeSpec::ramp(3, 2, 4, 5), 0..1);
}

#[test]
fn convenience_deals() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let secret = random_state(QuditSpace::new(vec![3]).unwrap(), 1);
    let dealt = deal_hqss(&secret, 3, 4, &mut rng).unwrap();
    assert!(fidelity(&secret, &reconstruct(&dealt, &[2, 3, 4]).unwrap()).unwrap() > 1.0 - 1e-9);
    assert!(matches!(reconstruct(&dealt, &[1, 2]), Err(Error::InsufficientShares { needed: 3, got: 2 })));

    let secret = random_state(QuditSpace::qubits(2), 2);
    let dealt = deal_n1n(&secret, 4, &mut rng).unwrap();
    assert_eq!(dealt.bundles.len(), 4);
    for b in &dealt.bundles {
        assert_eq!(b.quantum_dims, vec![2]);
        assert_eq!(b.classical.len(), 2);
    }
    assert!(fidelity(&secret, &reconstruct(&dealt, &[1, 3, 4]).unwrap()).unwrap() > 1.0 - 1e-9);
    assert!(deal_n1n(&secret, 6, &mut rng).is_err());

    let secret = random_state(QuditSpace::uniform(2, 3).unwrap(), 3);
    let dealt = deal_nn(&secret, &mut rng).unwrap();
    assert_eq!(dealt.bundles[0].classical.len(), 4);
    assert!(matches!(reconstruct(&dealt, &[1, 2]), Err(Error::InsufficientShares { .. })));

    let secret = random_state(QuditSpace::uniform(5, 2).unwrap(), 4);
    let dealt = deal_hrqss(&secret, 3, 4, 4, &mut rng).unwrap();
    assert!(fidelity(&secret, &reconstruct(&dealt, &[1, 2, 4]).unwrap()).unwrap() > 1.0 - 1e-9);
}

#[test]
fn explicit_draws_replay() {
    let family = SchemeSpec::n1n(6).build().unwrap();
    let secret = random_state(family.secret_space(), 9);
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let a = family.deal(&secret, &mut rng).unwrap();
    let draws: Vec<u64> = a.randomness.iter().map(|r| r.value).collect();
    let b = family.deal_with(&secret, &draws).unwrap();
    assert_eq!(a.state.amplitudes(), b.state.amplitudes());
    assert_eq!(a.bundles, b.bundles);
    assert_eq!(a.randomness.len(), 2 * (5 + 11));
    let mut bad = draws.clone();
    bad[0] = 2;
    assert!(family.deal_with(&secret, &bad).is_err());
    assert!(family.deal_with(&secret, &draws[1..]).is_err());
}

#[test]
fn quantum_subsystems_partition_the_state() {
    for spec in [SchemeSpec::hqss(3, 4, 3), SchemeSpec::nn(3, 2), SchemeSpec::n1n(4), SchemeSpec::hrqss(3, 4, 4, 5)] {
        let d = spec.build().unwrap().descriptor().clone();
        let mut all: Vec<usize> = d.quantum.iter().flatten().chain(&d.discarded).copied().collect();
        all.sort_unstable();
        let len = all.len();
        all.dedup();
        assert_eq!(all.len(), len);
        assert_eq!(all, (0..len).collect::<Vec<_>>());
    }
}

#[test]
fn hqss_quantum_share_minimum() {
    // every authorized set of a (3,4) scheme holds at least k_q = 2 quantum shares
    let family = SchemeSpec::hqss(3, 4, 3).build().unwrap();
    let secret = random_state(family.secret_space(), 1);
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let dealt = family.deal(&secret, &mut rng).unwrap();
    for s in subsets(4).filter(|s| s.len() == 3) {
        assert!(dealt.quantum_of(&s).unwrap().len() >= 2);
    }
}

#[test]
fn assignment_enumeration() {
    let all: Vec<Vec<u64>> = assignments(&[2, 3]).collect();
    assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2]]);
    assert_eq!(assignments(&[]).count(), 1);
    let f = SchemeSpec::n1n(4).build().unwrap();
    assert_eq!(f.randomness_points(), 256);
    let f = SchemeSpec::n1n(6).build().unwrap();
    assert_eq!(f.blocks()[0].points(), 65536);
}

#[test]
fn qubit_secret_rides_on_qutrit_shares() {
    let family = SchemeSpec::hqss(6, 7, 2).build().unwrap();
    let desc = family.descriptor();
    assert_eq!(family.secret_space(), QuditSpace::qubits(1));
    assert_eq!(family.code().physical_space(), QuditSpace::uniform(3, 3).unwrap());
    assert!((desc.shares[0].log2_dq - 3f64.log2()).abs() < 1e-12);
    assert_eq!(desc.shares[6].log2_dq, 0.0);
    let secret = random_state(family.secret_space(), 21);
    let dealt = family.deal(&secret, &mut ChaCha20Rng::seed_from_u64(21)).unwrap();
    for s in [vec![1, 2, 3, 4, 5, 6], vec![2, 3, 4, 5, 6, 7], vec![1, 3, 4, 5, 6, 7]] {
        assert!(fidelity(&secret, &family.reconstruct(&dealt, &s).unwrap()).unwrap() > 1.0 - 1e-9);
    }
    assert!(matches!(family.reconstruct(&dealt, &[1, 2, 3]), Err(Error::InsufficientShares { needed: 6, got: 3 })));
    assert!(matches!(family.reconstruct(&dealt, &[3, 4, 5]), Err(Error::InsufficientQuantumShares { needed: 2, got: 1 })));
}
