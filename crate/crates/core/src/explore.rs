//! Search for digraphs with dichromatic number at least `t + 1` that contain
//! no strong (or butterfly) minor isomorphic to the bidirected `K_t`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::butterfly::has_butterfly_minor;
use crate::coloring::dichromatic_number;
use crate::digraph::Digraph;
use crate::error::{invalid, Error, Result};
use crate::generate::{bidirected_complete, random_digraph, rng};
use crate::iso::{canonical_code, nonisomorphic_digraphs};
use crate::strong_minor::find_strong_model;

/// Largest order enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinorKind {
    Strong,
    Butterfly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreConfig {
    pub t: usize,
    pub max_n: usize,
    pub seed: u64,
    pub exhaustive: bool,
    /// Random digraphs drawn when not exhaustive.
    pub samples: usize,
    pub minor: MinorKind,
    /// Worker threads; `None` uses the machine's parallelism.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub digraph: Digraph,
    pub dichromatic_number: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreReport {
    pub config: ExploreConfig,
    pub examined: usize,
    /// Examined digraphs with dichromatic number at least `t + 1`.
    pub qualifying: usize,
    /// Qualifying digraphs without the minor, sorted by order then canonical code.
    pub counterexamples: Vec<Candidate>,
}

fn candidates(config: &ExploreConfig) -> Result<Vec<Digraph>> {
    if config.exhaustive {
        if config.max_n > EXHAUSTIVE_LIMIT {
            return Err(Error::TooLarge { n: config.max_n, limit: EXHAUSTIVE_LIMIT });
        }
        let mut all = Vec::new();
        for n in 1..=config.max_n {
            all.extend(nonisomorphic_digraphs(n)?);
        }
        Ok(all)
    } else {
        let low = (config.t + 1).min(config.max_n).max(1);
        Ok((0..config.samples as u64)
            .map(|i| {
                let mut r = rng(config.seed.wrapping_add(i.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
                let n = r.gen_range(low..=config.max_n);
                let p = r.gen_range(0.3..0.95);
                random_digraph(n, p, &mut r)
            })
            .collect())
    }
}

fn evaluate(d: &Digraph, config: &ExploreConfig, clique: &Digraph) -> Result<Option<Candidate>> {
    let (k, _) = dichromatic_number(d)?;
    if k < config.t + 1 {
        return Ok(None);
    }
    let has_minor = match config.minor {
        MinorKind::Strong => find_strong_model(d, clique)?.is_some(),
        MinorKind::Butterfly => has_butterfly_minor(d, clique)?,
    };
    Ok((!has_minor).then(|| Candidate { digraph: d.clone(), dichromatic_number: k }))
}

pub fn explore(config: &ExploreConfig) -> Result<ExploreReport> {
    if config.t == 0 || config.max_n == 0 {
        return invalid("t and max_n must be positive");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let digraphs = candidates(config)?;
    let clique = bidirected_complete(config.t);
    let results: Vec<(bool, Option<Candidate>)> = pool.install(|| {
        digraphs
            .par_iter()
            .map(|d| {
                let qualifying = dichromatic_number(d)?.0 > config.t;
                Ok((qualifying, if qualifying { evaluate(d, config, &clique)? } else { None }))
            })
            .collect::<Result<_>>()
    })?;
    let qualifying = results.iter().filter(|(q, _)| *q).count();
    let mut counterexamples: Vec<Candidate> = results.into_iter().filter_map(|(_, c)| c).collect();
    let key = |c: &Candidate| (c.digraph.n(), canonical_code(&c.digraph).ok());
    counterexamples.sort_by_key(key);
    counterexamples.dedup_by(|a, b| key(a) == key(b));
    log::info!(
        "explored {} digraphs, {} with dichromatic number above {}, {} without the minor",
        digraphs.len(),
        qualifying,
        config.t,
        counterexamples.len()
    );
    Ok(ExploreReport {
        config: config.clone(),
        examined: digraphs.len(),
        qualifying,
        counterexamples,
    })
}
