use serde::Serialize;

use crate::harness::sweep::SweepResult;

/// Per-`λ` summary of a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValleyRow {
    pub lambda: f64,
    /// `min_t L(λ, t)`; this is the valley depth metric.
    pub min_echo: f64,
    pub mean_echo: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Valley {
    Found {
        lambda_min: f64,
        depth: f64,
    },
    /// Every row reaches the same minimum (e.g. `δ = 0`).
    NoValley,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValleyReport {
    pub valley: Valley,
    /// `λ` of the smallest time-averaged echo; a secondary view of the same
    /// valley, not used for `lambda_min`.
    pub lambda_min_by_mean: Option<f64>,
    pub rows: Vec<ValleyRow>,
}

const FLAT_TOLERANCE: f64 = 1e-12;

/// First occurrence of the minimum: the smallest `λ` on an ascending grid.
fn first_min_by(rows: &[ValleyRow], key: impl Fn(&ValleyRow) -> f64) -> &ValleyRow {
    rows.iter()
        .fold(None::<&ValleyRow>, |best, r| match best {
            Some(b) if key(b) <= key(r) => Some(b),
            _ => Some(r),
        })
        .expect("non-empty sweep")
}

/// Locates the `λ` whose time-minimum of `L` is smallest. Ties go to the
/// smaller `λ`. The sweep should cover at least `λ ∈ [0.8, 1.0]`.
pub fn detect_valley(result: &SweepResult) -> ValleyReport {
    let rows: Vec<ValleyRow> = result
        .lambdas
        .iter()
        .zip(result.rows())
        .map(|(&lambda, row)| ValleyRow {
            lambda,
            min_echo: row.iter().copied().fold(f64::INFINITY, f64::min),
            mean_echo: row.iter().sum::<f64>() / row.len() as f64,
        })
        .collect();

    let lo = rows
        .iter()
        .map(|r| r.min_echo)
        .fold(f64::INFINITY, f64::min);
    let hi = rows
        .iter()
        .map(|r| r.min_echo)
        .fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= FLAT_TOLERANCE {
        return ValleyReport {
            valley: Valley::NoValley,
            lambda_min_by_mean: None,
            rows,
        };
    }
    let best = first_min_by(&rows, |r| r.min_echo);
    let by_mean = first_min_by(&rows, |r| r.mean_echo);
    ValleyReport {
        valley: Valley::Found {
            lambda_min: best.lambda,
            depth: best.min_echo,
        },
        lambda_min_by_mean: Some(by_mean.lambda),
        rows,
    }
}
