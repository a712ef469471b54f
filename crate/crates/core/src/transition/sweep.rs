use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{detectability, partition, PartitionMethod};
use crate::eigen::{leading_eigenpair, SolverConfig};
use crate::error::{Error, Result};
use crate::modularity::{restricted_quadform, CommunityView, ModularityOperator};
use crate::rng;
use crate::sbm::{generate, SbmParams};
use crate::scalar::Real;

use super::theory::{predicted_lambda_over_n, theoretical_threshold};

/// Block-model parameters with the inter-community probability left free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbmBase {
    pub n1: usize,
    pub n2: usize,
    pub p1: f64,
    pub p2: f64,
}

impl SbmBase {
    pub fn with_p(&self, p: f64) -> Result<SbmParams> {
        SbmParams::new(self.n1, self.n2, self.p1, self.p2, p)
    }

    pub fn p_star(&self) -> f64 {
        theoretical_threshold(self.p1, self.p2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig<T> {
    pub base: SbmBase,
    pub p_grid: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub solver: SolverConfig<T>,
    pub method: PartitionMethod,
}

impl<T: Real> SweepConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.p_grid.is_empty() {
            return Err(Error::InvalidParameter("p grid is empty".into()));
        }
        for &p in &self.p_grid {
            self.base.with_p(p)?;
        }
        self.solver.validate()
    }
}

/// `min, min + step, …` up to `max` inclusive. Points are rounded to
/// twelve decimals so `0.05 + 2·0.05` prints as `0.15`.
pub fn linear_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(Error::InvalidParameter("grid bounds must be finite".into()));
    }
    if step <= 0.0 {
        return Err(Error::InvalidParameter("grid step must be positive".into()));
    }
    if min > max {
        return Err(Error::InvalidParameter(
            "grid minimum exceeds maximum".into(),
        ));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| ((min + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Measurements from one sample at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome<T> {
    pub p_index: usize,
    pub trial: usize,
    pub seed: u64,
    pub converged: bool,
    pub iterations: usize,
    pub lambda_over_n: T,
    pub detectability: f64,
    /// `y1ᵀ1` after flipping `y` so that it is nonnegative.
    pub y1_sum: T,
    pub y2_sum: T,
    /// `√(n·n1/n2)·mean(y1)`.
    pub y1_entry_scaled: T,
    /// `√(n·n2/n1)·mean(y2)`.
    pub y2_entry_scaled: T,
    /// `(|y1ᵀB1y1| + |y2ᵀB2y2|)/n`; absent when a block has no edges.
    pub block_quadform_over_n: Option<T>,
}

/// Runs a single cell of a sweep; any cell can be recomputed in isolation.
pub fn run_trial<T: Real>(
    cfg: &SweepConfig<T>,
    p_index: usize,
    trial: usize,
) -> Result<TrialOutcome<T>> {
    let p = cfg.p_grid[p_index];
    let params = cfg.base.with_p(p)?;
    let seed = rng::trial_seed(cfg.master_seed, p_index, trial);
    let sample = generate(&params, seed)?;
    let (n1, n2, n) = (params.n1, params.n2, params.n());

    let op = ModularityOperator::<T>::new(&sample.graph)?;
    let solver = SolverConfig {
        seed: rng::mix(&[cfg.solver.seed, seed]),
        ..cfg.solver.clone()
    };
    let mut eig = leading_eigenpair(&op, &solver)?;

    let mut y1_sum: T = eig.y[..n1].iter().copied().sum();
    if y1_sum < T::zero() {
        eig.y.iter_mut().for_each(|v| *v = -*v);
        y1_sum = -y1_sum;
    }
    let y2_sum: T = eig.y[n1..].iter().copied().sum();

    let pred = partition(&eig.y, cfg.method)?;
    let det = detectability(&pred.labels, &sample.truth)?;

    let (a, b, nn) = (T::of_usize(n1), T::of_usize(n2), T::of_usize(n));
    let y1_entry_scaled = (nn * a / b).sqrt() * y1_sum / a;
    let y2_entry_scaled = (nn * b / a).sqrt() * y2_sum / b;

    let block_one: Vec<usize> = (0..n1).collect();
    let block_two: Vec<usize> = (n1..n).collect();
    let v1 = CommunityView::<T>::new(&sample.graph, &block_one)?;
    let v2 = CommunityView::<T>::new(&sample.graph, &block_two)?;
    let block_quadform_over_n = match (
        restricted_quadform(&sample.graph, &v1, &eig.y[..n1]),
        restricted_quadform(&sample.graph, &v2, &eig.y[n1..]),
    ) {
        (Ok(q1), Ok(q2)) => Some((q1.abs() + q2.abs()) / nn),
        _ => None,
    };

    Ok(TrialOutcome {
        p_index,
        trial,
        seed,
        converged: eig.converged,
        iterations: eig.iterations,
        lambda_over_n: eig.lambda_max / nn,
        detectability: det,
        y1_sum,
        y2_sum,
        y1_entry_scaled,
        y2_entry_scaled,
        block_quadform_over_n,
    })
}

/// Aggregate statistics at one grid point. Non-converged trials are
/// excluded from every mean and counted in `excluded`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord<T> {
    pub p: f64,
    pub trials: usize,
    pub trials_ok: usize,
    pub excluded: usize,
    /// False when every trial failed to converge.
    pub valid: bool,
    pub mean_lambda_over_n: T,
    pub std_lambda_over_n: T,
    pub pred_lambda_over_n: T,
    pub mean_detectability: f64,
    pub std_detectability: f64,
    pub mean_y1_sum: T,
    pub std_y1_sum: T,
    pub mean_y2_sum: T,
    pub std_y2_sum: T,
    pub mean_y1_entry_scaled: T,
    pub std_y1_entry_scaled: T,
    pub mean_y2_entry_scaled: T,
    pub std_y2_entry_scaled: T,
    pub max_block_quadform_over_n: Option<T>,
    pub mean_iterations: f64,
}

/// Mean and sample standard deviation (0 for a single value).
fn mean_std<T: Real>(values: impl Iterator<Item = T> + Clone) -> (T, T) {
    let count = values.clone().count();
    if count == 0 {
        return (T::nan(), T::nan());
    }
    let k = T::of_usize(count);
    let mean = values.clone().sum::<T>() / k;
    if count == 1 {
        return (mean, T::zero());
    }
    let ss: T = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (k - T::one())).sqrt())
}

fn aggregate<T: Real>(
    base: &SbmBase,
    p: f64,
    outcomes: &[TrialOutcome<T>],
) -> Result<SweepRecord<T>> {
    let ok: Vec<&TrialOutcome<T>> = outcomes.iter().filter(|o| o.converged).collect();
    let stat = |f: fn(&TrialOutcome<T>) -> T| mean_std(ok.iter().map(|o| f(o)));
    let (mean_lambda_over_n, std_lambda_over_n) = stat(|o| o.lambda_over_n);
    let (mean_detectability, std_detectability) = mean_std(ok.iter().map(|o| o.detectability));
    let (mean_y1_sum, std_y1_sum) = stat(|o| o.y1_sum);
    let (mean_y2_sum, std_y2_sum) = stat(|o| o.y2_sum);
    let (mean_y1_entry_scaled, std_y1_entry_scaled) = stat(|o| o.y1_entry_scaled);
    let (mean_y2_entry_scaled, std_y2_entry_scaled) = stat(|o| o.y2_entry_scaled);
    let max_block_quadform_over_n = ok
        .iter()
        .map(|o| o.block_quadform_over_n)
        .try_fold(None::<T>, |acc, q| {
            q.map(|q| Some(acc.map_or(q, |a: T| a.max(q))))
        })
        .flatten();
    let mean_iterations = if ok.is_empty() {
        f64::NAN
    } else {
        ok.iter().map(|o| o.iterations as f64).sum::<f64>() / ok.len() as f64
    };
    let c = T::of(base.n1 as f64 / base.n2 as f64);
    Ok(SweepRecord {
        p,
        trials: outcomes.len(),
        trials_ok: ok.len(),
        excluded: outcomes.len() - ok.len(),
        valid: !ok.is_empty(),
        mean_lambda_over_n,
        std_lambda_over_n,
        pred_lambda_over_n: predicted_lambda_over_n(T::of(base.p1), T::of(base.p2), T::of(p), c)?,
        mean_detectability,
        std_detectability,
        mean_y1_sum,
        std_y1_sum,
        mean_y2_sum,
        std_y2_sum,
        mean_y1_entry_scaled,
        std_y1_entry_scaled,
        mean_y2_entry_scaled,
        std_y2_entry_scaled,
        max_block_quadform_over_n,
        mean_iterations,
    })
}

/// Runs every (grid point, trial) cell and aggregates per grid point.
///
/// Cells run in parallel on the current rayon pool; results are merged in
/// grid order, so the output is independent of the worker count.
pub fn run_sweep<T: Real>(cfg: &SweepConfig<T>) -> Result<Vec<SweepRecord<T>>> {
    Ok(run_sweep_detailed(cfg)?.0)
}

/// Per-grid-point records and every per-trial outcome.
pub type DetailedSweep<T> = (Vec<SweepRecord<T>>, Vec<TrialOutcome<T>>);

/// Like [`run_sweep`], also returning every per-trial outcome in
/// `(p_index, trial)` order.
pub fn run_sweep_detailed<T: Real>(cfg: &SweepConfig<T>) -> Result<DetailedSweep<T>> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = (0..cfg.p_grid.len())
        .flat_map(|k| (0..cfg.trials).map(move |t| (k, t)))
        .collect();
    let outcomes = cells
        .par_iter()
        .map(|&(k, t)| run_trial(cfg, k, t))
        .collect::<Result<Vec<_>>>()?;
    let records = outcomes
        .chunks(cfg.trials)
        .zip(&cfg.p_grid)
        .map(|(chunk, &p)| aggregate(&cfg.base, p, chunk))
        .collect::<Result<Vec<_>>>()?;
    Ok((records, outcomes))
}

/// Grid bracket where mean detectability first drops below a level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub lo: f64,
    pub hi: f64,
    /// Linear interpolation of the crossing point inside the bracket.
    pub interpolated: f64,
}

impl Crossing {
    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }
}

/// First adjacent pair of valid records with detectability `≥ level` then
/// `< level`.
pub fn crossing_bracket<T>(records: &[SweepRecord<T>], level: f64) -> Option<Crossing> {
    let valid: Vec<&SweepRecord<T>> = records.iter().filter(|r| r.valid).collect();
    valid.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        (a.mean_detectability >= level && b.mean_detectability < level).then(|| {
            let t = (a.mean_detectability - level) / (a.mean_detectability - b.mean_detectability);
            Crossing {
                lo: a.p,
                hi: b.p,
                interpolated: a.p + t * (b.p - a.p),
            }
        })
    })
}

/// Length of the set of `p` where the piecewise-linear detectability curve
/// lies strictly between `lower` and `upper`.
pub fn intermediate_width<T>(records: &[SweepRecord<T>], lower: f64, upper: f64) -> f64 {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.valid)
        .map(|r| (r.p, r.mean_detectability))
        .collect();
    pts.windows(2)
        .map(|w| {
            let ((pa, fa), (pb, fb)) = (w[0], w[1]);
            let len = pb - pa;
            if fa == fb {
                return if lower < fa && fa < upper { len } else { 0.0 };
            }
            let (lo, hi) = (fa.min(fb), fa.max(fb));
            let overlap = (hi.min(upper) - lo.max(lower)).max(0.0);
            len * overlap / (hi - lo)
        })
        .sum()
}
