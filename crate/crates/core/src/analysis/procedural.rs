//! Procedural patterns: how turn complexity evolves through a dialog.
//!
//! Dialogs with extreme turn counts are trimmed, each remaining dialog's turn
//! scores are averaged into a fixed number of baskets, and the basket
//! trajectories are clustered with k-means.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::kmeans::{kmeans, squared_distance, KMeansParams};
use crate::complexity::{turn_complexity, ComplexityConfig};
use crate::corpus::{Corpus, Dialog};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

/// Inclusive turn-count bounds produced by percentile trimming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrimBounds {
    pub min_turns: usize,
    pub max_turns: usize,
}

/// Nearest-rank percentile of sorted values; `pct = 0` gives the minimum.
pub fn nearest_rank(sorted: &[usize], pct: f64) -> usize {
    let n = sorted.len();
    let rank = ((pct / 100.0 * n as f64) - 1e-9).ceil().max(1.0) as usize;
    sorted[rank.min(n) - 1]
}

pub fn turn_percentile_bounds(corpus: &Corpus, low_pct: f64, high_pct: f64) -> Result<TrimBounds> {
    if !(0.0..=100.0).contains(&low_pct) || !(0.0..=100.0).contains(&high_pct) || low_pct > high_pct {
        return Err(Error::invalid(format!(
            "trim percentiles must satisfy 0 <= low <= high <= 100, got {low_pct},{high_pct}"
        )));
    }
    let mut lengths: Vec<usize> = corpus.dialogs().iter().map(Dialog::turn_count).collect();
    lengths.sort_unstable();
    Ok(TrimBounds {
        min_turns: nearest_rank(&lengths, low_pct),
        max_turns: nearest_rank(&lengths, high_pct),
    })
}

pub fn trim_to_bounds(corpus: &Corpus, bounds: TrimBounds) -> Result<Corpus> {
    corpus
        .filter(|d| (bounds.min_turns..=bounds.max_turns).contains(&d.turn_count()))
        .map_err(|_| Error::OverTrimmed)
}

/// Drops dialogs whose turn count lies outside the `[low, high]` percentiles.
pub fn trim_by_turn_percentile(corpus: &Corpus, low_pct: f64, high_pct: f64) -> Result<Corpus> {
    let bounds = turn_percentile_bounds(corpus, low_pct, high_pct)?;
    trim_to_bounds(corpus, bounds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasketProfile {
    pub dialog_id: String,
    pub values: Vec<f64>,
}

/// Mean score per basket; item `i` of `n` goes to basket `floor(i * baskets / n)`.
pub fn basket_means(scores: &[f64], baskets: usize) -> Option<Vec<f64>> {
    let n = scores.len();
    if baskets == 0 || n < baskets {
        return None;
    }
    let mut sums = vec![0.0; baskets];
    let mut counts = vec![0usize; baskets];
    for (i, s) in scores.iter().enumerate() {
        let b = i * baskets / n;
        sums[b] += s;
        counts[b] += 1;
    }
    Some(sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect())
}

pub fn basket_profile(d: &Dialog, lexicon: &Lexicon, config: &ComplexityConfig, n_baskets: usize) -> Result<BasketProfile> {
    let scores: Vec<f64> = d.turns().iter().map(|t| turn_complexity(t, lexicon, config)).collect();
    let values = basket_means(&scores, n_baskets).ok_or_else(|| Error::TooShort {
        dialog: d.id.clone(),
        turns: d.turn_count(),
        baskets: n_baskets,
    })?;
    Ok(BasketProfile {
        dialog_id: d.id.clone(),
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProceduralParams {
    pub n_baskets: usize,
    pub k: usize,
    pub trim_low: f64,
    pub trim_high: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub n_restarts: usize,
}

impl Default for ProceduralParams {
    fn default() -> Self {
        ProceduralParams {
            n_baskets: 5,
            k: 6,
            trim_low: 15.0,
            trim_high: 85.0,
            seed: 0,
            max_iter: 300,
            n_restarts: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub dialog_id: String,
    pub cluster: usize,
}

/// Cluster centroids of basket trajectories for one corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProceduralSignature {
    pub domain: String,
    pub params: ProceduralParams,
    pub trim_bounds: TrimBounds,
    /// Trimmed dialogs still shorter than the basket count.
    pub excluded_short: usize,
    /// Ordered by first-basket value.
    pub centroids: Vec<Vec<f64>>,
    pub assignments: Vec<Assignment>,
    pub inertia: f64,
}

impl ProceduralSignature {
    /// Mean pairwise Euclidean distance between centroids.
    pub fn spread(&self) -> f64 {
        let k = self.centroids.len();
        if k < 2 {
            return 0.0;
        }
        let mut total = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                total += squared_distance(&self.centroids[i], &self.centroids[j]).sqrt();
            }
        }
        total / (k * (k - 1) / 2) as f64
    }

    /// CSV rows `cluster,basket,value`.
    pub fn write_centroid_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["cluster", "basket", "value"])?;
        for (c, centroid) in self.centroids.iter().enumerate() {
            for (b, v) in centroid.iter().enumerate() {
                w.write_record([c.to_string(), b.to_string(), v.to_string()])?;
            }
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Trim, basket and cluster a corpus.
pub fn procedural_signatures(
    corpus: &Corpus,
    lexicon: &Lexicon,
    config: &ComplexityConfig,
    params: &ProceduralParams,
) -> Result<ProceduralSignature> {
    let bounds = turn_percentile_bounds(corpus, params.trim_low, params.trim_high)?;
    let trimmed = trim_to_bounds(corpus, bounds)?;
    let mut profiles = Vec::new();
    let mut excluded_short = 0;
    for d in trimmed.dialogs() {
        match basket_profile(d, lexicon, config, params.n_baskets) {
            Ok(p) => profiles.push(p),
            Err(Error::TooShort { .. }) => excluded_short += 1,
            Err(e) => return Err(e),
        }
    }
    if profiles.len() < params.k {
        return Err(Error::invalid(format!(
            "{} dialogs with at least {} turns remain after trimming; k = {} needs more",
            profiles.len(),
            params.n_baskets,
            params.k
        )));
    }
    let points: Vec<Vec<f64>> = profiles.iter().map(|p| p.values.clone()).collect();
    let fit = kmeans(
        &points,
        &KMeansParams {
            k: params.k,
            seed: params.seed,
            max_iter: params.max_iter,
            n_restarts: params.n_restarts,
        },
    )?;

    let mut order: Vec<usize> = (0..fit.centroids.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&fit.centroids[a], &fit.centroids[b]);
        ca.iter()
            .zip(cb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut rank = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    Ok(ProceduralSignature {
        domain: corpus.domain().to_string(),
        params: *params,
        trim_bounds: bounds,
        excluded_short,
        centroids: order.iter().map(|&i| fit.centroids[i].clone()).collect(),
        assignments: profiles
            .iter()
            .zip(&fit.assignments)
            .map(|(p, &c)| Assignment {
                dialog_id: p.dialog_id.clone(),
                cluster: rank[c],
            })
            .collect(),
        inertia: fit.inertia,
    })
}
