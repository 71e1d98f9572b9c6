mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rsd_core::{
    conjugate_hamiltonian, conjugate_pauli, pauli_product, CliffordGate, GateSequence, PauliString,
    QubitHamiltonian,
};

fn words(n: usize) -> Vec<String> {
    (0..1usize << (2 * n))
        .map(|code| {
            (0..n)
                .map(|q| ['I', 'X', 'Y', 'Z'][(code >> (2 * q)) & 3])
                .collect()
        })
        .collect()
}

fn product_matches_dense(a: &str, b: &str) {
    let pa = PauliString::from_letters(a).unwrap();
    let pb = PauliString::from_letters(b).unwrap();
    let prod = pauli_product(&pa, &pb).unwrap();
    let lhs = pauli_string_matrix(&prod.pauli) * prod.phase();
    let rhs = pauli_matrix(a) * pauli_matrix(b);
    assert!(max_abs_diff(&lhs, &rhs) < 1e-12, "{a} * {b}");
}

#[test]
fn product_exhaustive_up_to_two_qubits() {
    for n in 1..=2 {
        for a in words(n) {
            for b in words(n) {
                product_matches_dense(&a, &b);
            }
        }
    }
}

#[test]
fn product_random_three_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        product_matches_dense(&random_letters(&mut rng, 3), &random_letters(&mut rng, 3));
    }
}

#[test]
fn x_times_z_is_minus_i_y() {
    let x = PauliString::from_letters("X").unwrap();
    let z = PauliString::from_letters("Z").unwrap();
    let p = pauli_product(&x, &z).unwrap();
    assert_eq!(p.pauli.to_letters(), "Y");
    assert_eq!(p.phase(), c(0.0, -1.0));
}

#[test]
fn s_twice_negates_x() {
    let seq = GateSequence::new(vec![CliffordGate::S(0), CliffordGate::S(0)]);
    let h = QubitHamiltonian::from_letter_terms(1, &[(1.0, "X")]).unwrap();
    let out = conjugate_hamiltonian(&seq, &h).unwrap();
    assert_eq!(out.terms().len(), 1);
    assert_eq!(out.terms()[0].0.to_letters(), "X");
    assert_eq!(out.terms()[0].1, -1.0);
}

#[test]
fn every_gate_on_every_word_matches_dense() {
    for n in 1..=3 {
        let mut gates: Vec<CliffordGate> = (0..n)
            .flat_map(|q| [CliffordGate::H(q), CliffordGate::S(q)])
            .collect();
        for c in 0..n {
            for t in 0..n {
                if c != t {
                    gates.push(CliffordGate::cnot(c, t));
                }
            }
        }
        for g in &gates {
            let u = gate_matrix(n, g);
            for w in words(n) {
                let p = PauliString::from_letters(&w).unwrap();
                let (out, sign) = conjugate_pauli(g, &p).unwrap();
                let expect = u.adjoint() * pauli_matrix(&w) * &u;
                let got = pauli_string_matrix(&out) * c(sign as f64, 0.0);
                assert!(max_abs_diff(&expect, &got) < 1e-12, "{g} on {w}");
            }
        }
    }
}

#[test]
fn random_sequences_match_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..300 {
        let n = 1 + case % 3;
        let h = random_hamiltonian(&mut rng, n, 1 + case % 7);
        let seq = random_sequence(&mut rng, n, 6);
        let out = conjugate_hamiltonian(&seq, &h).unwrap();
        let expect = conjugate_dense(n, &seq, &hamiltonian_matrix(&h));
        assert!(
            max_abs_diff(&expect, &hamiltonian_matrix(&out)) < 1e-10,
            "case {case}: {seq:?}"
        );
    }
}

#[test]
fn out_of_range_gate_is_rejected() {
    let h = QubitHamiltonian::from_letter_terms(2, &[(1.0, "XX")]).unwrap();
    let seq = GateSequence::new(vec![CliffordGate::H(2)]);
    assert!(conjugate_hamiltonian(&seq, &h).is_err());
    let seq = GateSequence::new(vec![CliffordGate::cnot(1, 1)]);
    assert!(conjugate_hamiltonian(&seq, &h).is_err());
}

fn arb_hamiltonian(n: usize) -> impl Strategy<Value = QubitHamiltonian> {
    prop::collection::vec((-3.0f64..3.0, prop::collection::vec(0usize..4, n)), 0..12).prop_map(
        move |raw| {
            let terms: Vec<(f64, String)> = raw
                .into_iter()
                .map(|(c, l)| (c, l.into_iter().map(|i| ['I', 'X', 'Y', 'Z'][i]).collect()))
                .collect();
            let refs: Vec<(f64, &str)> = terms.iter().map(|(c, s)| (*c, s.as_str())).collect();
            QubitHamiltonian::from_letter_terms(n, &refs).unwrap()
        },
    )
}

fn arb_sequence(n: usize) -> impl Strategy<Value = GateSequence> {
    prop::collection::vec((0usize..3, 0usize..n, 1usize..n), 0..10).prop_map(move |raw| {
        GateSequence::new(
            raw.into_iter()
                .map(|(kind, q, off)| match kind {
                    0 => CliffordGate::H(q),
                    1 => CliffordGate::S(q),
                    _ => CliffordGate::cnot(q, (q + off) % n),
                })
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn inverse_restores_hamiltonian((h, seq) in (2usize..7).prop_flat_map(|n| (arb_hamiltonian(n), arb_sequence(n)))) {
        let fwd = conjugate_hamiltonian(&seq, &h).unwrap();
        let back = conjugate_hamiltonian(&seq.inverse(), &fwd).unwrap();
        prop_assert_eq!(back.terms().len(), h.terms().len());
        for ((p, a), (q, b)) in back.terms().iter().zip(h.terms()) {
            prop_assert_eq!(p, q);
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn term_count_is_conserved((h, seq) in (2usize..7).prop_flat_map(|n| (arb_hamiltonian(n), arb_sequence(n)))) {
        let out = conjugate_hamiltonian(&seq, &h).unwrap();
        prop_assert_eq!(out.len(), h.len());
        let mut a: Vec<f64> = h.terms().iter().map(|t| t.1.abs()).collect();
        let mut b: Vec<f64> = out.terms().iter().map(|t| t.1.abs()).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn gate_log_round_trips(seq in (2usize..7).prop_flat_map(arb_sequence)) {
        prop_assert_eq!(GateSequence::from_log(&seq.to_log()).unwrap(), seq);
    }
}
