//! Method-level clone detection over token bags.
//!
//! Similarity is multiset overlap divided by the larger bag size. The
//! index keeps a posting list per token so candidate generation only
//! touches methods sharing at least one token; results are exactly equal
//! to exhaustive comparison (pruning only skips pairs that cannot reach
//! the threshold).

use crate::corpus::{Corpus, MethodDefinition, Mode};
use crate::error::{Error, Result};
use crate::token::{classify, TokenBag, TokenKind};
use serde::{Deserialize, Serialize};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashSet};

/// Detection parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CloneParams {
    /// Similarity threshold in (0, 1].
    pub theta: f64,
    pub mode: Mode,
    /// Methods with fewer tokens than this are neither indexed nor queried.
    pub min_bag_size: usize,
}

impl Default for CloneParams {
    fn default() -> Self {
        CloneParams {
            theta: 0.7,
            mode: Mode::LogAware,
            min_bag_size: 10,
        }
    }
}

impl CloneParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "theta must be in (0, 1], got {}",
                self.theta
            )));
        }
        if self.min_bag_size == 0 {
            return Err(Error::InvalidParam("min_bag_size must be positive".into()));
        }
        Ok(())
    }
}

/// Clone-type band. Near-miss and semantic clones are reported as one band
/// because token similarity cannot separate them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CloneType {
    T1,
    T2,
    T34,
}

/// A canonical clone pair: `left` precedes `right` in corpus order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClonePair {
    pub left: String,
    pub right: String,
    pub similarity: f64,
    pub clone_type: CloneType,
}

/// One query hit: an indexed method and its similarity to the target.
#[derive(Debug, Clone, PartialEq)]
pub struct CloneMatch {
    pub method_id: String,
    pub similarity: f64,
    /// Whether the matched method contains at least one LPS.
    pub logged: bool,
}

/// Multiset overlap similarity: |A ∩ B| / max(|A|, |B|).
///
/// Symmetric, 1 exactly when the bags are equal as multisets. Empty bags
/// are undetectable and rejected.
pub fn similarity(a: &TokenBag, b: &TokenBag) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyBag);
    }
    Ok(a.intersection_size(b) as f64 / a.len().max(b.len()) as f64)
}

/// Inverted index over method token bags, immutable after build.
#[derive(Debug, Clone, Serialize)]
pub struct CloneIndex {
    /// token -> (method position, bag size); positions index `ids`/`bags`.
    postings: BTreeMap<String, Vec<(usize, usize)>>,
    ids: Vec<String>,
    sizes: Vec<usize>,
    logged: Vec<bool>,
    #[serde(skip)]
    bags: Vec<TokenBag>,
    params: CloneParams,
}

impl CloneIndex {
    pub fn params(&self) -> &CloneParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, method_id: &str) -> bool {
        self.ids.iter().any(|id| id == method_id)
    }

    /// Deterministic serialized form (postings and ids only).
    pub fn to_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("index serializes")
    }
}

/// Build the index over every method whose bag (in the configured mode)
/// reaches `min_bag_size`.
pub fn build_index(corpus: &Corpus, params: CloneParams) -> Result<CloneIndex> {
    params.validate()?;
    let mut postings: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
    let mut ids = Vec::new();
    let mut sizes = Vec::new();
    let mut logged = Vec::new();
    let mut bags = Vec::new();
    for method in &corpus.methods {
        let bag = method.bag(params.mode);
        if bag.len() < params.min_bag_size {
            continue;
        }
        let pos = ids.len();
        for token in bag.distinct_tokens() {
            match postings.entry(token.to_string()) {
                Entry::Vacant(v) => {
                    v.insert(vec![(pos, bag.len())]);
                }
                Entry::Occupied(mut o) => o.get_mut().push((pos, bag.len())),
            }
        }
        ids.push(method.method_id.clone());
        sizes.push(bag.len());
        logged.push(method.is_logged());
        bags.push(bag);
    }
    Ok(CloneIndex {
        postings,
        ids,
        sizes,
        logged,
        bags,
        params,
    })
}

/// Find every indexed method with similarity ≥ theta to the target bag,
/// sorted by similarity descending, ties by method id ascending. The target
/// itself (by id) is excluded. A target bag below `min_bag_size` aborts
/// with `BagTooSmall` — the caller's abstain outcome, distinct from an
/// empty result.
pub fn find_clones(
    target_id: &str,
    target_bag: &TokenBag,
    index: &CloneIndex,
) -> Result<Vec<CloneMatch>> {
    if target_bag.len() < index.params.min_bag_size {
        return Err(Error::BagTooSmall {
            size: target_bag.len(),
            min: index.params.min_bag_size,
        });
    }
    let theta = index.params.theta;
    let tlen = target_bag.len();

    let mut candidates: HashSet<usize> = HashSet::new();
    for token in target_bag.distinct_tokens() {
        if let Some(list) = index.postings.get(token) {
            for &(pos, size) in list {
                // Size pruning: |A ∩ B| ≤ min size, so similarity can reach
                // theta only if min / max ≥ theta.
                let (lo, hi) = (tlen.min(size) as f64, tlen.max(size) as f64);
                if lo / hi >= theta {
                    candidates.insert(pos);
                }
            }
        }
    }

    let mut matches = Vec::new();
    for &pos in candidates.iter() {
        if index.ids[pos] == target_id {
            continue;
        }
        let sim = similarity(target_bag, &index.bags[pos])?;
        if sim >= theta {
            matches.push(CloneMatch {
                method_id: index.ids[pos].clone(),
                similarity: sim,
                logged: index.logged[pos],
            });
        }
    }
    matches.sort_by(|a, b| {
        b.similarity
            .partial_cmp(&a.similarity)
            .unwrap()
            .then_with(|| a.method_id.cmp(&b.method_id))
    });
    Ok(matches)
}

/// Classify a pair of methods into a clone-type band.
///
/// T1: identical token sequences (whitespace and comments are already gone
/// from the token stream, string literals are collapsed). T2: identical
/// after mapping identifiers to `ID` and literals to `LIT`. Otherwise T34.
pub fn classify_clone_type(left: &MethodDefinition, right: &MethodDefinition) -> CloneType {
    if left.tokens_full == right.tokens_full {
        return CloneType::T1;
    }
    let normalize = |tokens: &[String]| -> Vec<String> {
        tokens
            .iter()
            .map(|t| match classify(t) {
                TokenKind::Ident => "ID".to_string(),
                TokenKind::Number | TokenKind::Str | TokenKind::Char | TokenKind::Literal => {
                    "LIT".to_string()
                }
                _ => t.clone(),
            })
            .collect()
    };
    if normalize(&left.tokens_full) == normalize(&right.tokens_full) {
        CloneType::T2
    } else {
        CloneType::T34
    }
}

/// All clone pairs of a corpus by exhaustive pairwise comparison. This is
/// the ground truth the indexed path is checked against.
pub fn brute_force_clone_pairs(corpus: &Corpus, params: CloneParams) -> Result<Vec<ClonePair>> {
    params.validate()?;
    let bags: Vec<Option<TokenBag>> = corpus
        .methods
        .iter()
        .map(|m| {
            let bag = m.bag(params.mode);
            (bag.len() >= params.min_bag_size).then_some(bag)
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..corpus.methods.len() {
        let Some(a) = &bags[i] else { continue };
        for (j, slot) in bags.iter().enumerate().skip(i + 1) {
            let Some(b) = slot else { continue };
            let sim = similarity(a, b)?;
            if sim >= params.theta {
                pairs.push(ClonePair {
                    left: corpus.methods[i].method_id.clone(),
                    right: corpus.methods[j].method_id.clone(),
                    similarity: sim,
                    clone_type: classify_clone_type(&corpus.methods[i], &corpus.methods[j]),
                });
            }
        }
    }
    Ok(pairs)
}

/// Detect all pairs via the index: union of per-method queries, in
/// canonical form (left before right in corpus order), sorted by position.
pub fn detect_all_pairs(corpus: &Corpus, params: CloneParams) -> Result<Vec<ClonePair>> {
    let index = build_index(corpus, params)?;
    let positions = corpus.id_positions();
    let mut seen: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for method in &corpus.methods {
        let bag = method.bag(params.mode);
        if bag.len() < params.min_bag_size {
            continue;
        }
        let matches = find_clones(&method.method_id, &bag, &index)?;
        let a = positions[method.method_id.as_str()];
        for m in matches {
            let b = positions[m.method_id.as_str()];
            let key = (a.min(b), a.max(b));
            seen.entry(key).or_insert(m.similarity);
        }
    }
    Ok(seen
        .into_iter()
        .map(|((i, j), sim)| ClonePair {
            left: corpus.methods[i].method_id.clone(),
            right: corpus.methods[j].method_id.clone(),
            similarity: sim,
            clone_type: classify_clone_type(&corpus.methods[i], &corpus.methods[j]),
        })
        .collect())
}
