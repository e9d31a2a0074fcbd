use proptest::prelude::*;

use securenand::audit::{audit_blindness_emission, server_views};
use securenand::delegation::{evaluate_delegated, evaluate_plain, BooleanCircuit, ClassicalOp};
use securenand::protocol::{Direction, ProtocolVariant};
use securenand::qsim::gates::embed;
use securenand::qsim::{helstrom_probability, measure_observables, trace_distance, GateKind, ObservableBasis};
use securenand::random::{random_density, random_pure_state};
use securenand::rng::SeededRng;
use securenand::{run_protocol, ServerStrategy};

fn gate_kind() -> impl Strategy<Value = GateKind> {
    prop_oneof![
        Just(GateKind::Identity),
        Just(GateKind::PauliX),
        Just(GateKind::PauliY),
        Just(GateKind::PauliZ),
        Just(GateKind::S),
        Just(GateKind::SDagger),
        (0u8..2).prop_map(GateKind::ZPower),
        (0u8..2).prop_map(GateKind::SPower),
        (0u8..2).prop_map(GateKind::SDaggerPower),
    ]
}

fn variant() -> impl Strategy<Value = ProtocolVariant> {
    (0usize..6).prop_map(|i| ProtocolVariant::ALL[i])
}

proptest! {
    #[test]
    fn gates_are_unitary(kind in gate_kind(), n in 1usize..4, t in 0usize..4) {
        let t = t % n;
        prop_assert!(embed(&kind.matrix::<f64>(), t, n).is_unitary(1e-12));
        prop_assert!(kind.matrix::<f32>().is_unitary(1e-6));
    }

    #[test]
    fn born_distributions_are_normalised(seed in any::<u64>(), n in 1usize..5, basis_bits in any::<u8>()) {
        let psi = random_pure_state(&mut SeededRng::new(seed), n);
        let bases: Vec<_> = (0..n).map(|q| ObservableBasis::from_bit(basis_bits >> q)).collect();
        let d = measure_observables(&psi, &bases).unwrap();
        prop_assert!(d.probs().iter().all(|&p| p >= 0.0));
        prop_assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>(), n in 1usize..4, ranks in (1usize..5, 1usize..5, 1usize..5)) {
        let mut rng = SeededRng::new(seed);
        let rho = random_density(&mut rng, n, ranks.0);
        let sigma = random_density(&mut rng, n, ranks.1);
        let tau = random_density(&mut rng, n, ranks.2);
        let d = |x, y| trace_distance(x, y).unwrap();
        prop_assert!((d(&rho, &sigma) - d(&sigma, &rho)).abs() < 1e-12);
        prop_assert!(d(&rho, &tau) <= d(&rho, &sigma) + d(&sigma, &tau) + 1e-12);
        prop_assert!(d(&rho, &rho) < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d(&rho, &sigma)));
        let h = helstrom_probability(&rho, &sigma).unwrap();
        prop_assert!((h - 0.5 * (1.0 + d(&rho, &sigma))).abs() < 1e-12);
    }

    #[test]
    fn honest_runs_decode_nand(v in variant(), a in 0u8..2, b in 0u8..2, seed in any::<u64>()) {
        let t = run_protocol(v, a, b, seed, &ServerStrategy::Honest).unwrap();
        prop_assert_eq!(t.out, 1 ^ (a & b));
        prop_assert!(t.well_formed() && t.decode_holds());
        if v.is_ghz() && !v.is_measuring() {
            let parity = t.server_bits.iter().fold(0, |p, &x| p ^ x);
            let pads = t.r_bits.iter().fold(0, |p, &x| p ^ x);
            prop_assert_eq!(parity, 1 ^ (a & b) ^ pads);
        }
        if v.is_measuring() {
            prop_assert!(t.messages.iter().all(|m| m.direction != Direction::ClientToServer));
        }
    }
}

/// Emits a circuit from raw gate picks; operands index wires defined so far,
/// and the lines can be written in reverse to exercise out-of-order input.
fn circuit_text(inputs: usize, picks: &[(u8, usize, usize)], outs: &[usize], reverse: bool) -> String {
    let mut wires: Vec<String> = (0..inputs).map(|i| format!("x{i}")).collect();
    let mut lines = Vec::new();
    for (k, &(kind, i, j)) in picks.iter().enumerate() {
        let (p, q) = (&wires[i % wires.len()], &wires[j % wires.len()]);
        let body = match kind % 5 {
            0 => format!("NAND {p} {q}"),
            1 => format!("XOR {p} {q}"),
            2 => format!("AND {p} {q}"),
            3 => format!("NOT {p}"),
            _ => format!("CONST {}", i % 2),
        };
        lines.push(format!("w{k} = {body}"));
        wires.push(format!("w{k}"));
    }
    if reverse {
        lines.reverse();
    }
    let outs: Vec<_> = outs.iter().map(|&o| wires[o % wires.len()].clone()).collect();
    format!("in {}\n{}\nout {}\n", wires[..inputs].join(" "), lines.join("\n"), outs.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn delegation_matches_plain_evaluation(
        inputs in 1usize..6,
        picks in prop::collection::vec((any::<u8>(), any::<usize>(), any::<usize>()), 1..10),
        outs in prop::collection::vec(any::<usize>(), 1..4),
        reverse in any::<bool>(),
        v in variant(),
        seed in any::<u64>(),
    ) {
        let text = circuit_text(inputs, &picks, &outs, reverse);
        let c = BooleanCircuit::parse(&text).unwrap();
        let lowered = c.lower();
        prop_assert!(lowered.is_lowered());
        prop_assert_eq!(lowered.lower(), lowered.clone());
        prop_assert_eq!(BooleanCircuit::parse(&c.to_string()).unwrap().to_string(), c.to_string());
        for x in 0..1u64 << inputs {
            let bits: Vec<u8> = (0..inputs).map(|i| ((x >> i) & 1) as u8).collect();
            let plain = evaluate_plain(&c, &bits).unwrap();
            prop_assert_eq!(&evaluate_plain(&lowered, &bits).unwrap(), &plain);
            let t = evaluate_delegated(&lowered, &bits, v, seed ^ x).unwrap();
            prop_assert_eq!(t.outputs(), plain.as_slice());
            prop_assert_eq!(t.runs().len(), lowered.nand_count());
            for op in [ClassicalOp::Nand, ClassicalOp::And, ClassicalOp::Or] {
                prop_assert_eq!(t.count(op), 0);
            }
        }
    }
}

#[test]
fn helstrom_is_one_half_when_blind() {
    for v in ProtocolVariant::ALL {
        if !audit_blindness_emission(v).unwrap().pass {
            continue;
        }
        let views = server_views(v, &ServerStrategy::Honest).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((helstrom_probability(&views[i], &views[j]).unwrap() - 0.5).abs() < 1e-12);
            }
        }
    }
}
