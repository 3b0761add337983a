use std::collections::HashMap;

use qpl_core::seed::rng_from_seed;
use qpl_core::stab::gate::symplectic_form;
use qpl_core::stab::CliffordGate;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// All `(X_0', Z_0', X_1', Z_1')` pattern tuples with the canonical
/// commutation relations.
fn enumerate_sp4() -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for a in 1u8..16 {
        for b in 1u8..16 {
            for c in 1u8..16 {
                for d in 1u8..16 {
                    let ok = symplectic_form(a, b) == 1
                        && symplectic_form(c, d) == 1
                        && symplectic_form(a, c) == 0
                        && symplectic_form(a, d) == 0
                        && symplectic_form(b, c) == 0
                        && symplectic_form(b, d) == 0;
                    if ok {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

fn chi_square_p_value(counts: &[u64], total: u64) -> f64 {
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

#[test]
fn sp4_has_720_elements() {
    assert_eq!(enumerate_sp4().len(), 720);
}

#[test]
fn sampler_is_uniform_over_symplectic_classes_and_signs() {
    let classes = enumerate_sp4();
    let index: HashMap<[u8; 4], usize> = classes.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut sym_counts = vec![0u64; 720];
    let mut full_counts = vec![0u64; 720 * 16];
    let mut rng = rng_from_seed(0x5eed);
    let total = 1_000_000u64;
    for _ in 0..total {
        let g = CliffordGate::random_two_qubit(&mut rng);
        let cls = *index.get(&g.symplectic_columns()).expect("sampled class must be symplectic");
        let signs = g
            .images()
            .iter()
            .enumerate()
            .map(|(i, lp)| (lp.negative as usize) << i)
            .sum::<usize>();
        sym_counts[cls] += 1;
        full_counts[cls * 16 + signs] += 1;
    }
    let p_sym = chi_square_p_value(&sym_counts, total);
    let p_full = chi_square_p_value(&full_counts, total);
    println!("chi-square p-values: symplectic {p_sym:.4}, with signs {p_full:.4}");
    assert!(p_sym > 0.001);
    assert!(p_full > 0.001);
}

#[test]
fn sampled_gates_are_valid_and_invertible() {
    let mut rng = rng_from_seed(9);
    for _ in 0..2000 {
        let g = CliffordGate::random_two_qubit(&mut rng);
        // from_images re-checks the symplectic condition
        assert_eq!(CliffordGate::from_images(g.images()).unwrap(), g);
        let inv = g.inverse();
        for pattern in 1u8..16 {
            let img = g.conjugate_pattern(pattern);
            let back = inv.conjugate_pattern(img.bits);
            assert_eq!(back.bits, pattern);
            assert_eq!(back.negative, img.negative);
        }
    }
}
