//! Surrogate and synthetic sequences: seeded shuffles, bigram (first-order
//! Markov) text, and i.i.d. draws from a fixed distribution.
//!
//! Every generator is driven by a xoshiro256++ stream seeded through
//! SplitMix64 (`seed_from_u64`), so output depends only on inputs and seed.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::corpus::TokenSequence;
use crate::error::{Error, Result};

pub type SeededRng = Xoshiro256PlusPlus;

pub fn seeded_rng(seed: u64) -> SeededRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Uniformly random permutation of the tokens (Fisher-Yates).
pub fn shuffle(seq: &TokenSequence, seed: u64) -> TokenSequence {
    let mut rng = seeded_rng(seed);
    let mut ids = seq.ids().to_vec();
    for i in (1..ids.len()).rev() {
        let j = rng.random_range(0..=i);
        ids.swap(i, j);
    }
    TokenSequence::from_ids(ids, &seq.vocab_vec()).expect("permutation of a non-empty sequence")
}

/// Samples indices from non-negative integer weights.
#[derive(Debug, Clone)]
struct CountSampler {
    cumulative: Vec<u64>,
}

impl CountSampler {
    fn new(weights: impl IntoIterator<Item = u64>) -> Self {
        let mut acc = 0;
        let cumulative = weights
            .into_iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        CountSampler { cumulative }
    }

    fn total(&self) -> u64 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    fn sample(&self, rng: &mut SeededRng) -> usize {
        let r = rng.random_range(0..self.total());
        self.cumulative.partition_point(|&c| c <= r)
    }
}

/// Maximum-likelihood bigram model: unigram counts plus successor counts.
#[derive(Debug, Clone)]
pub struct BigramModel {
    words: Vec<String>,
    unigram: Vec<u64>,
    unigram_sampler: CountSampler,
    /// Per predecessor: successor IDs (ascending) and their counts.
    successors: Vec<Vec<(u32, u64)>>,
    successor_samplers: Vec<CountSampler>,
}

impl BigramModel {
    pub fn vocab_size(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn id_of(&self, word: &str) -> Option<u32> {
        self.words.iter().position(|w| w == word).map(|i| i as u32)
    }

    pub fn unigram_count(&self, id: u32) -> u64 {
        self.unigram[id as usize]
    }

    /// Observed `(successor, count)` pairs of `id`.
    pub fn successors(&self, id: u32) -> &[(u32, u64)] {
        &self.successors[id as usize]
    }

    /// `P(next | prev)`; zero when the pair was never observed.
    pub fn conditional(&self, prev: u32, next: u32) -> f64 {
        let row = self.successors(prev);
        let total: u64 = row.iter().map(|&(_, c)| c).sum();
        match row.binary_search_by_key(&next, |&(w, _)| w) {
            Ok(i) => row[i].1 as f64 / total as f64,
            Err(_) => 0.0,
        }
    }
}

/// Fits a bigram model from the `N - 1` adjacent pairs of `seq`.
pub fn fit_bigram(seq: &TokenSequence) -> BigramModel {
    let v = seq.vocab_size();
    let ids = seq.ids();
    let mut unigram = vec![0u64; v];
    for &w in ids {
        unigram[w as usize] += 1;
    }
    let mut pairs: Vec<(u32, u32)> = ids.windows(2).map(|p| (p[0], p[1])).collect();
    pairs.sort_unstable();
    let mut successors: Vec<Vec<(u32, u64)>> = vec![Vec::new(); v];
    for (prev, next) in pairs {
        let row = &mut successors[prev as usize];
        match row.last_mut() {
            Some((w, c)) if *w == next => *c += 1,
            _ => row.push((next, 1)),
        }
    }
    let successor_samplers = successors
        .iter()
        .map(|row| CountSampler::new(row.iter().map(|&(_, c)| c)))
        .collect();
    BigramModel {
        words: seq.vocab_vec(),
        unigram_sampler: CountSampler::new(unigram.iter().copied()),
        unigram,
        successors,
        successor_samplers,
    }
}

/// Generates exactly `length` tokens from `model`.
///
/// The first token comes from the unigram distribution; each later token from
/// the successor distribution of its predecessor. A predecessor with no
/// observed successor (it only occurred as the final token) restarts from the
/// unigram distribution.
pub fn generate_bigram(model: &BigramModel, length: usize, seed: u64) -> Result<TokenSequence> {
    if length == 0 {
        return Err(Error::InvalidArgument("length must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut ids = Vec::with_capacity(length);
    let mut prev = model.unigram_sampler.sample(&mut rng);
    ids.push(prev as u32);
    while ids.len() < length {
        let sampler = &model.successor_samplers[prev];
        prev = if sampler.total() == 0 {
            model.unigram_sampler.sample(&mut rng)
        } else {
            model.successors[prev][sampler.sample(&mut rng)].0 as usize
        };
        ids.push(prev as u32);
    }
    TokenSequence::from_ids(ids, &model.words)
}

/// A categorical distribution over words `w0 .. w{V-1}` for i.i.d. sampling.
#[derive(Debug, Clone)]
pub struct IidModel {
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl IidModel {
    /// `probs` must be strictly positive and sum to 1 within 1e-12.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("empty probability vector".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "probabilities must be positive and finite, got {p}"
            )));
        }
        let mut acc = 0.0;
        let cumulative: Vec<f64> = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        if (acc - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {acc}, not 1"
            )));
        }
        Ok(IidModel { probs, cumulative })
    }

    /// Zipf distribution `p_k ∝ k^(-exponent)` over ranks `k = 1..=vocab`.
    pub fn zipf(vocab: usize, exponent: f64) -> Result<Self> {
        if vocab == 0 {
            return Err(Error::InvalidArgument(
                "vocabulary size must be positive".into(),
            ));
        }
        if !exponent.is_finite() || exponent < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "Zipf exponent must be finite and non-negative, got {exponent}"
            )));
        }
        let weights: Vec<f64> = (1..=vocab).map(|k| (k as f64).powf(-exponent)).collect();
        // sum smallest first
        let norm: f64 = weights.iter().rev().sum();
        IidModel::new(weights.into_iter().map(|w| w / norm).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn vocab_size(&self) -> usize {
        self.probs.len()
    }

    /// Surface form used for word `index` in generated sequences.
    pub fn word_name(index: usize) -> String {
        format!("w{index}")
    }

    /// Probability of a generated surface form, if it names a model word.
    pub fn prob_of(&self, word: &str) -> Option<f64> {
        let index: usize = word.strip_prefix('w')?.parse().ok()?;
        self.probs.get(index).copied()
    }

    fn sample(&self, rng: &mut SeededRng) -> usize {
        let u = rng.random::<f64>() * self.cumulative[self.cumulative.len() - 1];
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.probs.len() - 1)
    }
}

/// Draws `length` independent tokens from `model`.
pub fn generate_iid(model: &IidModel, length: usize, seed: u64) -> Result<TokenSequence> {
    if length == 0 {
        return Err(Error::InvalidArgument("length must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    let names: Vec<String> = (0..model.vocab_size()).map(IidModel::word_name).collect();
    let ids = (0..length).map(|_| model.sample(&mut rng) as u32);
    TokenSequence::from_ids(ids, &names)
}
