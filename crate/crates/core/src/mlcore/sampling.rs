//! Seeded balanced sampling and stratified train/test splitting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Downsample each class to `per_class` items (classes with fewer members
/// keep everything). Returns selected indices into the label slice, in
/// a deterministic seed-driven order.
pub fn balanced_sample(labels: &[u32], per_class: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes: Vec<u32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut selected = Vec::new();
    for class in classes {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect();
        members.shuffle(&mut rng);
        members.truncate(per_class);
        members.sort_unstable();
        selected.extend(members);
    }
    selected
}

/// Stratified shuffle split: within each class, `test_frac` of the items
/// (rounded down, at least 1 when the class has > 1 member) go to the
/// test set. Returns (train_indices, test_indices).
pub fn stratified_split(
    labels: &[u32],
    test_frac: f64,
    seed: u64,
) -> (Vec<usize>, Vec<usize>) {
    assert!((0.0..1.0).contains(&test_frac));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes: Vec<u32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in classes {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect();
        members.shuffle(&mut rng);
        let mut n_test = (members.len() as f64 * test_frac) as usize;
        if n_test == 0 && members.len() > 1 && test_frac > 0.0 {
            n_test = 1;
        }
        test.extend(members.drain(..n_test));
        train.extend(members);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}
