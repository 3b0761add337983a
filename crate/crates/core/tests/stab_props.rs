use proptest::prelude::*;
use qpl_core::seed::{rng_from_seed, TrajectoryRng};
use qpl_core::stab::{CliffordGate, Pauli, PauliString, Sign, StabilizerTableau};
use rand::Rng;

#[derive(Clone, Copy, Debug)]
enum Start {
    Zero,
    Mixed,
    Bell(usize),
}

fn start_state(start: Start, m: usize) -> StabilizerTableau {
    match start {
        Start::Zero => StabilizerTableau::zero_state(m),
        Start::Mixed => StabilizerTableau::maximally_mixed(m),
        Start::Bell(_) if m < 2 => StabilizerTableau::zero_state(m),
        Start::Bell(k) => {
            let k = k.clamp(1, m / 2);
            StabilizerTableau::tensor_init(k, m - 2 * k).unwrap()
        }
    }
}

fn random_pauli(rng: &mut TrajectoryRng, m: usize) -> PauliString {
    let mut p = PauliString::identity(m);
    // sparse operators so that measurements are not almost always random
    for _ in 0..rng.random_range(1..=3) {
        let q = rng.random_range(0..m);
        p.set(q, [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)]);
    }
    p
}

/// Random gates, measurements and erasures; gates only when `allow_erase`
/// is false, so that a pure start stays pure.
fn scramble(t: &mut StabilizerTableau, rng: &mut TrajectoryRng, steps: usize, allow_erase: bool) {
    let m = t.num_qubits();
    for _ in 0..steps {
        let kind = rng.random_range(0..if allow_erase { 4 } else { 2 });
        match kind {
            0 if m >= 2 => {
                let a = rng.random_range(0..m);
                let b = (a + rng.random_range(1..m)) % m;
                t.apply_gate(&CliffordGate::random_two_qubit(rng), &[a, b]).unwrap();
            }
            0 | 1 => {
                let g = if rng.random::<bool>() { CliffordGate::hadamard() } else { CliffordGate::phase() };
                t.apply_gate(&g, &[rng.random_range(0..m)]).unwrap();
            }
            2 => {
                let op = random_pauli(rng, m);
                t.measure_pauli(&op, rng).unwrap();
            }
            _ => t.erase_qubit(rng.random_range(0..m)).unwrap(),
        }
    }
}

fn start_strategy() -> impl Strategy<Value = Start> {
    prop_oneof![Just(Start::Zero), Just(Start::Mixed), (1usize..8).prop_map(Start::Bell)]
}

fn random_subset(rng: &mut TrajectoryRng, m: usize) -> Vec<usize> {
    (0..m).filter(|_| rng.random::<bool>()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 96,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn tableau_stays_valid(m in 1usize..=80, start in start_strategy(), seed: u64, steps in 0usize..120) {
        let mut rng = rng_from_seed(seed);
        let mut t = start_state(start, m);
        scramble(&mut t, &mut rng, steps, true);
        prop_assert!(t.validate().is_ok());
        prop_assert!(t.num_generators() <= m);
        prop_assert_eq!(t.entropy(), m - t.num_generators());
    }

    #[test]
    fn entropy_of_empty_and_full_sets(m in 1usize..=80, start in start_strategy(), seed: u64, steps in 0usize..120) {
        let mut rng = rng_from_seed(seed);
        let mut t = start_state(start, m);
        scramble(&mut t, &mut rng, steps, true);
        let all: Vec<usize> = (0..m).collect();
        prop_assert_eq!(t.subsystem_entropy(&[]).unwrap(), 0);
        prop_assert_eq!(t.subsystem_entropy(&all).unwrap(), m - t.num_generators());
    }

    #[test]
    fn subadditivity_and_bounds(m in 2usize..=80, seed: u64, steps in 0usize..120) {
        let mut rng = rng_from_seed(seed);
        let mut t = start_state(Start::Zero, m);
        scramble(&mut t, &mut rng, steps, true);
        let a = random_subset(&mut rng, m);
        let comp: Vec<usize> = (0..m).filter(|q| !a.contains(q)).collect();
        let s_a = t.subsystem_entropy(&a).unwrap();
        let s_c = t.subsystem_entropy(&comp).unwrap();
        prop_assert!(s_a <= a.len());
        prop_assert!(t.entropy() <= s_a + s_c);
    }

    #[test]
    fn pure_states_have_symmetric_entropy(m in 2usize..=80, start in prop_oneof![Just(Start::Zero), (1usize..8).prop_map(Start::Bell)], seed: u64, steps in 0usize..120) {
        let mut rng = rng_from_seed(seed);
        let mut t = start_state(start, m);
        scramble(&mut t, &mut rng, steps, false);
        prop_assert_eq!(t.num_generators(), m);
        for _ in 0..4 {
            let a = random_subset(&mut rng, m);
            let comp: Vec<usize> = (0..m).filter(|q| !a.contains(q)).collect();
            prop_assert_eq!(t.subsystem_entropy(&a).unwrap(), t.subsystem_entropy(&comp).unwrap());
        }
    }

    #[test]
    fn measuring_a_generator_changes_nothing(m in 1usize..=80, start in start_strategy(), seed: u64, steps in 0usize..120) {
        let mut rng = rng_from_seed(seed);
        let mut t = start_state(start, m);
        scramble(&mut t, &mut rng, steps, true);
        prop_assume!(t.num_generators() > 0);
        let i = rng.random_range(0..t.num_generators());
        let g = t.generators()[i].clone();
        let mut op = g.clone();
        op.set_sign(Sign::Plus);
        let before = t.clone();
        let meas = t.measure_with(&op, || panic!("outcome of a generator must be determined")).unwrap();
        prop_assert!(meas.deterministic);
        prop_assert_eq!(meas.outcome, g.sign());
        prop_assert_eq!(t, before);
    }

    #[test]
    fn erased_qubit_is_maximally_mixed(m in 1usize..=80, start in start_strategy(), seed: u64, steps in 0usize..120) {
        let mut rng = rng_from_seed(seed);
        let mut t = start_state(start, m);
        scramble(&mut t, &mut rng, steps, true);
        let q = rng.random_range(0..m);
        t.erase_qubit(q).unwrap();
        prop_assert!(t.validate().is_ok());
        prop_assert_eq!(t.subsystem_entropy(&[q]).unwrap(), 1);
        // nothing else in the state refers to q
        for g in t.generators() {
            prop_assert_eq!(g.get(q), Pauli::I);
        }
    }
}
