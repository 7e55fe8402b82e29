use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use hrqss::codes::{code_c_recover_erasure, QuantumCode, StabilizerCodeC};
use hrqss::encrypt::{bpq_operator, decrypt_qudit, encrypt_code_state, encrypt_qudit, sample_keypair, QuditKey};
use hrqss::qudit::{fidelity, QuditSpace, StateVector};
use hrqss::scheme::{cost_hrqss, cost_min, SchemeSpec};

fn random_state(space: QuditSpace, seed: u64) -> StateVector {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let amps = (0..space.total_dim())
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    StateVector::normalized(space, amps).unwrap()
}

fn specs() -> Vec<SchemeSpec> {
    vec![
        SchemeSpec::hqss(3, 4, 3),
        SchemeSpec::hqss(2, 3, 2),
        SchemeSpec::hrqss(3, 4, 4, 5),
        SchemeSpec::nn(2, 3),
        SchemeSpec::n1n(4),
        SchemeSpec::n1n(6),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn one_time_pad_inverts(d in prop::sample::select(vec![2usize, 3, 5, 7]), k in 0usize..7, l in 0usize..7, seed in any::<u64>()) {
        let key = QuditKey::new(k % d, l % d, d).unwrap();
        let psi = random_state(QuditSpace::new(vec![d]).unwrap(), seed);
        let back = decrypt_qudit(&encrypt_qudit(&psi, &key).unwrap(), &key).unwrap();
        prop_assert!(back.overlap(&psi).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn bpq_products_close_up_to_sign(n in prop::sample::select(vec![4usize, 6]), seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let a = sample_keypair(n, &mut rng).unwrap();
        let b = sample_keypair(n, &mut rng).unwrap();
        let lhs = bpq_operator(&a).compose(&bpq_operator(&b)).unwrap();
        let rhs = bpq_operator(&a.xor(&b));
        prop_assert_eq!(lhs.x_powers(), rhs.x_powers());
        prop_assert_eq!(lhs.z_powers(), rhs.z_powers());
        let ratio = lhs.phase() / rhs.phase();
        prop_assert!((ratio.re.abs() - 1.0).abs() < 1e-12 && ratio.im.abs() < 1e-12);
    }

    #[test]
    fn complemented_keys_encrypt_alike(n in prop::sample::select(vec![4usize, 6]), seed in any::<u64>()) {
        let code = StabilizerCodeC::new(n).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let key = sample_keypair(n, &mut rng).unwrap();
        let enc = code.encode(&random_state(code.logical_space(), seed)).unwrap();
        let base = encrypt_code_state(&enc, &key, &code).unwrap();
        for other in [key.flip_p(), key.flip_q(), key.flip_p().flip_q()] {
            let alt = encrypt_code_state(&enc, &other, &code).unwrap();
            prop_assert!(alt.overlap(&base).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn single_erasures_are_recovered(n in prop::sample::select(vec![4usize, 6]), missing in 0usize..6, seed in any::<u64>()) {
        let missing = missing % n;
        let code = StabilizerCodeC::new(n).unwrap();
        let enc = code.encode(&random_state(code.logical_space(), seed)).unwrap();
        let keep: Vec<usize> = (0..n).filter(|&i| i != missing).collect();
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 1);
        let rec = code_c_recover_erasure(&enc.reduced(&keep).unwrap(), missing, &code, &mut rng).unwrap();
        prop_assert!(rec.overlap(&enc).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn authorized_subsets_recover_the_secret(which in 0usize..6, seed in any::<u64>(), pick in any::<u64>()) {
        let family = specs()[which].build().unwrap();
        let desc = family.descriptor().clone();
        let secret = random_state(family.secret_space(), seed);
        let dealt = family.deal(&secret, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
        // a random authorized subset
        let mut players: Vec<usize> = (1..=desc.players()).collect();
        let mut rng = ChaCha20Rng::seed_from_u64(pick);
        for i in (1..players.len()).rev() {
            players.swap(i, rng.gen_range(0..=i));
        }
        let size = rng.gen_range(desc.threshold..=desc.players());
        let subset = &players[..size];
        let rho = family.reconstruct(&dealt, subset).unwrap();
        prop_assert!(fidelity(&secret, &rho).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn dealing_is_a_function_of_the_seed(which in 0usize..6, seed in any::<u64>()) {
        let family = specs()[which].build().unwrap();
        let secret = random_state(family.secret_space(), seed);
        let a = family.deal(&secret, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
        let b = family.deal(&secret, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a.bundles, b.bundles);
        prop_assert_eq!(a.state.amplitudes(), b.state.amplitudes());
    }

    #[test]
    fn more_quantum_shares_cost_less(k in 2usize..9, gap in 0usize..4, d in 2usize..6) {
        let n = k + gap.min(k - 1);
        let lo = 2 * n - 2 * k + 1;
        let costs: Vec<f64> = (lo..=n).map(|m| cost_hrqss(k, n, m, d as f64).unwrap()).collect();
        if n > k {
            prop_assert!(costs.windows(2).all(|w| w[1] < w[0]));
        }
        prop_assert!((costs.last().unwrap() - cost_min(k, n, d as f64).unwrap()).abs() < 1e-12);
    }
}
