#![allow(dead_code)]

use entropic_core::algebra::{from_u_basis, EntropyExpression, UBasisVector};
use entropic_core::dist::JointDistribution;
use entropic_core::rational::{ratio, Coeff};
use entropic_core::subset::{full_mask, SubsetIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coeff(rng: &mut ChaCha8Rng) -> Coeff {
    ratio(rng.random_range(-20..=20), rng.random_range(1..=9))
}

/// Arbitrary expression, not necessarily label-symmetric or in span.
pub fn random_expression(rng: &mut ChaCha8Rng, n: usize) -> EntropyExpression {
    let terms = rng.random_range(0..=12);
    let pairs: Vec<(SubsetIndex, Coeff)> = (0..terms)
        .map(|_| {
            let mask = rng.random_range(0..=full_mask(n));
            (SubsetIndex::from_mask(mask), random_coeff(rng))
        })
        .collect();
    EntropyExpression::from_terms(n, pairs).unwrap()
}

pub fn random_u_vector(rng: &mut ChaCha8Rng, n: usize) -> UBasisVector {
    UBasisVector::new(n, (1..n).map(|_| random_coeff(rng)).collect()).unwrap()
}

/// A random member of the u-span.
pub fn random_in_span(rng: &mut ChaCha8Rng, n: usize) -> EntropyExpression {
    from_u_basis(&random_u_vector(rng, n))
}

/// Random pmf over a random small product alphabet; some states get zero mass.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> JointDistribution {
    let alphabet: Vec<usize> = (0..n).map(|_| rng.random_range(2..=3)).collect();
    random_distribution_on(rng, alphabet)
}

pub fn random_distribution_on(rng: &mut ChaCha8Rng, alphabet: Vec<usize>) -> JointDistribution {
    let total: usize = alphabet.iter().product();
    let mut weights = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let mut state = vec![0u32; alphabet.len()];
        for (i, &size) in alphabet.iter().enumerate().rev() {
            state[i] = (rem % size) as u32;
            rem /= size;
        }
        let w = if rng.random_bool(0.2) {
            0.0
        } else {
            rng.random::<f64>()
        };
        weights.push((state, w));
    }
    // Guarantee positive total mass.
    weights[0].1 += 1e-3;
    JointDistribution::from_weights(alphabet, weights).unwrap()
}

pub fn xor_sources() -> JointDistribution {
    bits3(&[[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]])
}

pub fn copy_sources() -> JointDistribution {
    bits3(&[[0, 0, 0], [1, 1, 1]])
}

fn bits3(states: &[[u32; 3]]) -> JointDistribution {
    JointDistribution::from_weights(vec![2; 3], states.iter().map(|s| (s.to_vec(), 1.0))).unwrap()
}
