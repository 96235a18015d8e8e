//! Deterministic seeded train/test splitting.

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            seed: 42,
        }
    }
}

/// Shuffle the canonical method order with a seeded Fisher-Yates pass and
/// put the first ⌈fraction·N⌉ methods in the train side.
///
/// The permutation is a pure function of (corpus order, fraction, seed):
/// the generator is ChaCha8 and the swap sequence is fixed here, so splits
/// are stable across platforms and releases.
pub fn split_corpus(corpus: &Corpus, spec: SplitSpec) -> Result<(Corpus, Corpus)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::BadFraction(spec.train_fraction));
    }
    let n = corpus.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }

    let train_size = (spec.train_fraction * n as f64).ceil() as usize;
    if train_size == 0 {
        return Err(Error::EmptySplitSide("train"));
    }
    if train_size >= n {
        return Err(Error::EmptySplitSide("test"));
    }

    let pick = |idx: &[usize]| {
        let mut chosen: Vec<usize> = idx.to_vec();
        chosen.sort_unstable();
        Corpus::new(
            chosen
                .into_iter()
                .map(|i| corpus.methods[i].clone())
                .collect(),
        )
    };
    Ok((pick(&order[..train_size]), pick(&order[train_size..])))
}
