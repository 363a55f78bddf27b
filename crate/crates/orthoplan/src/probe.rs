//! Runtime probe of the L pipeline over generated instances.

use std::time::{Duration, Instant};

use orthoplan_core::pipeline::{run_pipeline, PipelineConfig, PipelineError, Shape};
use serde::Serialize;

use crate::gen::{generate, GenError, GenSpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    pub median_ms: f64,
    /// Median of this row over the previous one.
    pub ratio: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ProbeError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("n={n}, seed={seed}: {source}")]
    Pipeline {
        n: usize,
        seed: u64,
        source: PipelineError,
    },
    #[error("n={n}, seed={seed}: plan failed verification")]
    Verify { n: usize, seed: u64 },
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    let k = xs.len();
    if k == 0 {
        return Duration::ZERO;
    }
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2
    }
}

/// Median pipeline time per size. Generation is not timed; every run must
/// verify.
pub fn scaling_probe(sizes: &[usize], seeds: &[u64]) -> Result<Vec<ProbeRow>, ProbeError> {
    let mut rows: Vec<ProbeRow> = Vec::new();
    for &n in sizes {
        let mut times = Vec::with_capacity(seeds.len());
        for &seed in seeds {
            let g = generate(&GenSpec {
                kind: Shape::L,
                n,
                seed,
            })?;
            let cfg = PipelineConfig::new(Shape::L);
            let start = Instant::now();
            let run = run_pipeline(&g, &cfg).map_err(|source| ProbeError::Pipeline {
                n,
                seed,
                source,
            })?;
            times.push(start.elapsed());
            if !run.report.verdict() {
                return Err(ProbeError::Verify { n, seed });
            }
        }
        let median_ms = median(times).as_secs_f64() * 1e3;
        let ratio = rows.last().map(|p| median_ms / p.median_ms);
        rows.push(ProbeRow {
            n,
            median_ms,
            ratio,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sizes_give_an_empty_table() {
        assert!(scaling_probe(&[], &[1]).unwrap().is_empty());
    }

    #[test]
    fn single_size_has_no_ratio() {
        let rows = scaling_probe(&[30], &[1, 2, 3]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n, 30);
        assert!(rows[0].ratio.is_none());
    }

    #[test]
    fn median_of_even_count() {
        let ms = |x| Duration::from_millis(x);
        assert_eq!(
            median(vec![ms(4), ms(1), ms(3), ms(2)]),
            Duration::from_micros(2500)
        );
    }
}
