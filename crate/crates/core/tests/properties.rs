use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shadowlink_core::fec::{crc_append, crc_check, deinterleave, decode, encode, interleave};
use shadowlink_core::protocol::{biased_estimate, compatibility_set, debias_factor};
use shadowlink_core::shadows::{
    basis_code_bits, pack_bases, pack_outcomes, unpack_bases, unpack_outcomes, ShadowBatch,
    ShadowRecord,
};
use shadowlink_core::{BasisString, CodeSpec, Pauli, PauliObservable, StateVector};

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

fn batch() -> impl Strategy<Value = ShadowBatch> {
    (1usize..=12, 1usize..=20).prop_flat_map(|(n, copies)| {
        prop::collection::vec(
            (prop::collection::vec(pauli(), n), prop::collection::vec(0u8..=1, n)),
            copies,
        )
        .prop_map(move |records| {
            let records = records
                .into_iter()
                .map(|(letters, bits)| ShadowRecord { basis: BasisString::new(letters), bits })
                .collect();
            ShadowBatch::new(n, records).unwrap()
        })
    })
}

fn code() -> impl Strategy<Value = CodeSpec> {
    prop_oneof![
        Just(CodeSpec::Uncoded),
        Just(CodeSpec::Hamming74),
        (1u32..=6).prop_map(|h| CodeSpec::Repetition(2 * h + 1)),
    ]
}

proptest! {
    #[test]
    fn stream_packing_roundtrips(batch in batch()) {
        let n = batch.num_qubits();
        let copies = batch.len();
        let bases = pack_bases(&batch);
        let outcomes = pack_outcomes(&batch);
        prop_assert_eq!(bases.len(), basis_code_bits(n) * copies);
        prop_assert_eq!(outcomes.len(), n * copies);
        let rebuilt = ShadowBatch::from_parts(
            n,
            unpack_bases(&bases, n, copies).unwrap(),
            unpack_outcomes(&outcomes, n, copies).unwrap(),
        ).unwrap();
        prop_assert_eq!(rebuilt, batch);
    }

    #[test]
    fn coding_roundtrips(bits in prop::collection::vec(0u8..=1, 0..200), code in code(), seed: u64) {
        let framed = crc_append(&bits);
        prop_assert!(crc_check(&framed));
        let mixed = interleave(&framed, seed);
        let word = encode(&mixed, code);
        prop_assert_eq!(word.len(), code.encoded_len(framed.len()));
        let back = deinterleave(&decode(&word, code, framed.len()).unwrap(), seed);
        prop_assert_eq!(back, framed);
    }

    #[test]
    fn estimator_range(seed: u64, copies in 1usize..200, weight in 1usize..=4, p_err in 0.0f64..0.45) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 5;
        let state = StateVector::haar_random(n, &mut rng).unwrap();
        let batch = shadowlink_core::shadows::acquire(&state, copies, &mut rng).unwrap();
        let obs = PauliObservable::new(n, (0..weight).map(|q| (q, Pauli::Z))).unwrap();
        let bases: Vec<BasisString> = batch.bases().cloned().collect();
        let outcomes: Vec<Vec<u8>> = batch.outcomes().map(<[u8]>::to_vec).collect();
        let compat = compatibility_set(&bases, &obs).unwrap();
        let biased = biased_estimate(&outcomes, &compat, &obs);
        prop_assert!(biased.abs() <= compat.len() as f64 / copies as f64 + 1e-12);
        let a = debias_factor(weight, p_err).unwrap();
        prop_assert!((a * biased).abs() <= a + 1e-9);
    }

    #[test]
    fn haar_states_are_normalized(n in 1usize..=8, seed: u64) {
        let s = StateVector::haar_random_seeded(n, seed).unwrap();
        let norm: f64 = s.probabilities().iter().sum();
        prop_assert!((norm - 1.0).abs() < 1e-10);
    }
}
