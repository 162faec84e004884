use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eqw::census::{enumerate_dj, CensusReport, EnumOptions};
use eqw::function::BooleanFunction;
use eqw::oracle::{make_simon_instance, simon_canonical_state, simon_measure};
use eqw::separability::{classify, reassemble, try_factor, Bipartition};
use eqw::StateVector;

fn sign_state(n: usize, mask: u64) -> StateVector {
    BooleanFunction::from_mask(n, mask).unwrap().to_state()
}

fn random_function(g: &mut ChaCha8Rng, n: usize) -> BooleanFunction {
    BooleanFunction::new(n, (0..1 << n).map(|_| g.random::<bool>()).collect()).unwrap()
}

#[test]
fn complement_preserves_class_on_random_functions() {
    let mut g = ChaCha8Rng::seed_from_u64(21);
    for i in 0..10_000 {
        let n = 2 + i % 5;
        let f = random_function(&mut g, n);
        let a = classify(&f.to_state()).unwrap();
        let b = classify(&f.complement().to_state()).unwrap();
        assert_eq!(a.q, b.q, "{}", f.to_bit_string());
        assert_eq!(a.factorization.partition(), b.factorization.partition());
    }
}

#[test]
fn finest_factorization_reassembles() {
    let mut g = ChaCha8Rng::seed_from_u64(22);
    for i in 0..2_000 {
        let n = 1 + i % 7;
        let s = random_function(&mut g, n).to_state();
        let fact = classify(&s).unwrap().factorization;
        let back = reassemble(n, fact.blocks()).unwrap();
        assert!(back.is_positive_multiple_of(&s), "n={n}");
    }
}

#[test]
fn blocks_of_a_finest_factorization_are_entangled() {
    let mut g = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..300 {
        let s = random_function(&mut g, 5).to_state();
        for block in classify(&s).unwrap().factorization.blocks() {
            assert_eq!(classify(&block.state).unwrap().q, 1, "{:?}", block.qubits);
        }
    }
}

#[test]
fn census_json_round_trips() {
    let r = enumerate_dj(3, &EnumOptions::default()).unwrap();
    let back: CensusReport = serde_json::from_str(&r.to_json_string()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn measured_simon_states_match_canonical_class() {
    for n in 2..=6usize {
        for r in 1u64..1 << n {
            let want = classify(&simon_canonical_state(n, r).unwrap()).unwrap();
            let inst = make_simon_instance(n, r, r ^ 0xabc).unwrap();
            let m = simon_measure(&inst, 99).unwrap();
            let got = classify(&m.collapsed).unwrap();
            assert_eq!(
                got.factorization.partition(),
                want.factorization.partition(),
                "n={n} r={r:b}"
            );
            assert_eq!(
                m.to_canonical().unwrap(),
                simon_canonical_state(n, r).unwrap()
            );
        }
    }
}

proptest! {
    #[test]
    fn products_factor_along_their_cut(
        a in 0u64..16,
        b in 0u64..256,
    ) {
        let (s1, s2) = (sign_state(2, a), sign_state(3, b));
        let product = s1.tensor(&s2).unwrap();
        let cut = Bipartition::new(5, vec![1, 2]).unwrap();
        let (l, r) = try_factor(&product, &cut).unwrap().expect("a product factors");
        prop_assert!(l.tensor(&r).unwrap().is_positive_multiple_of(&product));
        let q = classify(&product).unwrap().q;
        prop_assert_eq!(q, classify(&s1).unwrap().q + classify(&s2).unwrap().q);
    }

    #[test]
    fn local_flips_preserve_class(mask in any::<u64>(), qubit in 1usize..=6) {
        let s = sign_state(6, mask);
        let flipped = s.apply_local_x(qubit).unwrap();
        prop_assert_eq!(
            classify(&s).unwrap().factorization.partition(),
            classify(&flipped).unwrap().factorization.partition()
        );
    }

    #[test]
    fn global_sign_is_irrelevant(mask in any::<u64>()) {
        let s = sign_state(6, mask);
        prop_assert_eq!(classify(&s).unwrap().q, classify(&s.neg()).unwrap().q);
    }
}
