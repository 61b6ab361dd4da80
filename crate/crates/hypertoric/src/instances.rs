//! Bundled fixtures and seeded random smooth instances.

use crate::arrangement::{check_generic, fixed_points};
use crate::hypertoric_data::{dualize, load_data, HypertoricData};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIXTURES: [(&str, &str); 3] = [
    ("tp1", include_str!("../fixtures/tp1.json")),
    ("tp2", include_str!("../fixtures/tp2.json")),
    ("tp1xtp1", include_str!("../fixtures/tp1xtp1.json")),
];

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|f| f.0).collect()
}

/// The JSON text of a bundled fixture.
pub fn fixture_source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|f| f.0 == name).map(|f| f.1)
}

pub fn fixture(name: &str) -> Option<HypertoricData> {
    FIXTURES.iter().find(|f| f.0 == name).map(|f| load_data(f.1).expect("bundled fixture is valid"))
}

pub fn fixtures() -> Vec<HypertoricData> {
    FIXTURES.iter().map(|f| load_data(f.1).expect("bundled fixture is valid")).collect()
}

/// Unimodular, generic on both sides of the mirror, with no loops or coloops.
fn acceptable(data: &HypertoricData) -> bool {
    if data.iota.iter().any(|r| r.iter().all(|x| *x == 0)) {
        return false;
    }
    if (0..data.n).any(|i| data.beta.iter().all(|r| r[i] == 0)) {
        return false;
    }
    let ok = |d: &HypertoricData| check_generic(d).is_ok_and(|g| g.generic) && fixed_points(d).is_ok_and(|f| !f.is_empty());
    ok(data) && dualize(data).is_ok_and(|d| ok(&d))
}

/// One random instance with 2 ≤ n ≤ max_n and 1 ≤ k ≤ max_k.
pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, max_k: usize) -> HypertoricData {
    loop {
        let n = rng.gen_range(2..=max_n);
        let k = rng.gen_range(1..=max_k.min(n - 1));
        let iota: Vec<Vec<i64>> = (0..n).map(|_| (0..k).map(|_| rng.gen_range(-1..=1)).collect()).collect();
        let theta: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        let sigma: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        let Ok(data) = HypertoricData::new(iota, k, None, theta, sigma, None) else { continue };
        if acceptable(&data) {
            return data;
        }
    }
}

/// `count` instances from a seed, named by position.
pub fn random_instances(seed: u64, count: usize, max_n: usize, max_k: usize) -> Vec<HypertoricData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let mut d = random_instance(&mut rng, max_n, max_k);
            d.name = Some(format!("random{}-n{}k{}", i, d.n, d.k));
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_and_random() {
        assert_eq!(fixtures().len(), 3);
        let a = random_instances(3, 5, 6, 2);
        let b = random_instances(3, 5, 6, 2);
        assert_eq!(a, b);
        assert!(a.iter().all(|d| d.n <= 6 && d.k <= 2 && acceptable(d)));
    }
}
