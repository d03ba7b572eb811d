use std::collections::HashSet;

use clap::ValueEnum;
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Uniform sample of distinct pairs.
    Random,
    /// Endpoints drawn with probability proportional to `rank^-exponent`.
    Powerlaw,
    /// Every upper node joined to every lower node.
    Complete,
}

#[derive(Debug, Clone, Copy)]
pub struct GenSpec {
    pub model: Model,
    pub upper: u64,
    pub lower: u64,
    pub edges: u64,
    pub seed: u64,
    pub exponent: f64,
}

/// Edges as 1-based external id pairs, in generation order.
pub fn generate(spec: &GenSpec) -> Result<Vec<(u64, u64)>, CliError> {
    let pairs = spec
        .upper
        .checked_mul(spec.lower)
        .ok_or_else(|| CliError::Data("node counts overflow".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.model {
        Model::Complete => Ok((1..=spec.upper)
            .flat_map(|u| (1..=spec.lower).map(move |v| (u, v)))
            .collect()),
        Model::Random => {
            if spec.edges > pairs {
                return Err(CliError::Data(format!(
                    "cannot place {} distinct edges among {pairs} pairs",
                    spec.edges
                )));
            }
            let picked = index::sample(&mut rng, pairs as usize, spec.edges as usize);
            Ok(picked
                .into_iter()
                .map(|i| (i as u64 / spec.lower + 1, i as u64 % spec.lower + 1))
                .collect())
        }
        Model::Powerlaw => {
            if spec.edges > pairs / 2 {
                return Err(CliError::Data(format!(
                    "a power-law graph with {} edges needs more than {} node pairs",
                    spec.edges,
                    2 * spec.edges
                )));
            }
            if spec.exponent.is_nan() || spec.exponent < 0.0 {
                return Err(CliError::Data("exponent must be non-negative".into()));
            }
            let weights = |n: u64| {
                WeightedIndex::new((1..=n).map(|r| (r as f64).powf(-spec.exponent)))
                    .map_err(|e| CliError::Data(format!("bad weights: {e}")))
            };
            let (wu, wv) = (weights(spec.upper)?, weights(spec.lower)?);
            let mut seen = HashSet::with_capacity(spec.edges as usize);
            let mut out = Vec::with_capacity(spec.edges as usize);
            let budget = 100 * spec.edges.max(1);
            let mut draws = 0;
            while (out.len() as u64) < spec.edges {
                draws += 1;
                if draws > budget {
                    return Err(CliError::Data(format!(
                        "gave up after {budget} draws with {} of {} edges placed; lower the exponent",
                        out.len(),
                        spec.edges
                    )));
                }
                let e = (wu.sample(&mut rng) as u64 + 1, wv.sample(&mut rng) as u64 + 1);
                if seen.insert(e) {
                    out.push(e);
                }
            }
            Ok(out)
        }
    }
}
