use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{mixed_estimate, single_estimate, EstimateError, MotifEstimate, SampleAccumulator};
use crate::canon::{arrcode, CanonError};
use crate::frames::{frame_totals, koef_table, FrameError, FrameKind, FrameSampler, FrameTotals};
use crate::graph::Graph;

pub const DEFAULT_BATCH: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 1;
/// Motifs seen fewer times than this in every experiment do not hold up
/// the accuracy-controlled stop.
pub const MIN_DETECTIONS_FOR_CV: u64 = 5;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("graph has no {0} frames; nothing to sample for {1}-vertex motifs")]
    NoFrames(String, usize),
    #[error("budget of {budget} samples cannot cover {frames} frame experiments")]
    BudgetTooSmall { budget: u64, frames: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusConfig {
    pub size: usize,
    /// Total samples across all frame experiments.
    pub budget: u64,
    pub target_cv: Option<f64>,
    pub seed: u64,
    pub workers: usize,
    pub batch_size: u64,
    /// Share of the budget given to the chain experiment when both
    /// 4-vertex frames are present.
    pub chain_share: f64,
}

impl CensusConfig {
    pub fn new(size: usize, budget: u64) -> Self {
        Self {
            size,
            budget,
            target_cv: None,
            seed: DEFAULT_SEED,
            workers: 1,
            batch_size: DEFAULT_BATCH,
            chain_share: 0.5,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn target_cv(mut self, cv: f64) -> Self {
        self.target_cv = Some(cv);
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<(), CensusError> {
        let bad = |m: &str| Err(CensusError::Config(m.to_string()));
        if !(3..=4).contains(&self.size) {
            return Err(CanonError::UnsupportedSize(self.size).into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if self.batch_size == 0 {
            return bad("batch size must be positive");
        }
        if !(self.chain_share > 0.0 && self.chain_share < 1.0) {
            return bad("chain share must lie strictly between 0 and 1");
        }
        if let Some(cv) = self.target_cv {
            if cv.is_nan() || cv <= 0.0 {
                return bad("target cv must be positive");
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameRun {
    pub kind: FrameKind,
    /// Instances of this frame in the graph.
    pub total: u64,
    pub budget: u64,
    pub experiments: u64,
    pub degenerate: u64,
}

/// One experiment's view of one motif.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameTally {
    pub kind: FrameKind,
    pub koef: u32,
    pub detections: u64,
    pub experiments: u64,
    pub n_hat: f64,
    pub variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MotifReport {
    pub class_id: usize,
    pub canonical_code: u16,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<&'static str>,
    pub n_hat: f64,
    pub variance: f64,
    pub cv: Option<f64>,
    pub lambda: Option<f64>,
    pub tallies: Vec<FrameTally>,
}

impl MotifReport {
    pub fn max_detections(&self) -> u64 {
        self.tallies.iter().map(|t| t.detections).max().unwrap_or(0)
    }

    pub fn tally(&self, kind: FrameKind) -> Option<&FrameTally> {
        self.tallies.iter().find(|t| t.kind == kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Every motif with enough detections reached the target cv.
    TargetCvReached,
    BudgetExhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledCensus {
    pub size: usize,
    pub directed: bool,
    pub config: CensusConfig,
    pub totals: FrameTotals,
    pub frames: Vec<FrameRun>,
    /// Connected classes, ascending class id. Empty when nothing was sampled.
    pub motifs: Vec<MotifReport>,
    pub batches: u64,
    pub stop: StopReason,
    pub elapsed_secs: f64,
}

impl SampledCensus {
    pub fn motif(&self, class_id: usize) -> Option<&MotifReport> {
        self.motifs.iter().find(|m| m.class_id == class_id)
    }

    pub fn experiments(&self) -> u64 {
        self.frames.iter().map(|f| f.experiments).sum()
    }
}

struct Experiment<'g> {
    sampler: FrameSampler<'g>,
    budget: u64,
    acc: SampleAccumulator,
    /// One RNG stream per worker.
    rngs: Vec<ChaCha8Rng>,
}

fn stream(seed: u64, worker: usize, kind: FrameKind) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((worker * FrameKind::ALL.len() + kind.index()) as u64);
    rng
}

/// Frame-sampling motif census.
///
/// Three-vertex motifs come from the fork experiment; four-vertex motifs
/// from the chain and trident experiments, which split the budget by
/// `chain_share` and draw from separate RNG streams so their estimates are
/// independent. Sampling proceeds in batches; after each batch every
/// connected class is re-estimated, and with a `target_cv` the run stops
/// once each motif detected at least [`MIN_DETECTIONS_FOR_CV`] times in
/// some experiment has cv at or below the target.
pub fn run_sampled_census(g: &Graph, config: &CensusConfig) -> Result<SampledCensus, CensusError> {
    let start = Instant::now();
    config.validate()?;
    let size = config.size;
    let table = arrcode(size, g.is_directed())?;
    let koef = koef_table(size, g.is_directed())?;
    let totals = frame_totals(g);
    let kinds = FrameKind::for_size(size);

    let mut report = SampledCensus {
        size,
        directed: g.is_directed(),
        config: config.clone(),
        totals,
        frames: Vec::new(),
        motifs: Vec::new(),
        batches: 0,
        stop: StopReason::BudgetExhausted,
        elapsed_secs: 0.0,
    };

    let present: Vec<FrameKind> = kinds.iter().copied().filter(|&k| totals.get(k) > 0).collect();
    if config.budget == 0 {
        report.frames = kinds
            .iter()
            .map(|&kind| FrameRun {
                kind,
                total: totals.get(kind),
                budget: 0,
                experiments: 0,
                degenerate: 0,
            })
            .collect();
        report.elapsed_secs = start.elapsed().as_secs_f64();
        return Ok(report);
    }
    if present.is_empty() {
        let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
        return Err(CensusError::NoFrames(names.join(" or "), size));
    }
    if config.budget < present.len() as u64 {
        return Err(CensusError::BudgetTooSmall {
            budget: config.budget,
            frames: present.len(),
        });
    }

    let budgets: Vec<u64> = if present.len() == 2 {
        let chain = ((config.budget as f64 * config.chain_share).round() as u64)
            .clamp(1, config.budget - 1);
        present
            .iter()
            .map(|&k| if k == FrameKind::Chain { chain } else { config.budget - chain })
            .collect()
    } else {
        vec![config.budget]
    };

    let n_classes = table.classes().len();
    let mut experiments: Vec<Experiment> = present
        .iter()
        .zip(&budgets)
        .map(|(&kind, &budget)| {
            Ok(Experiment {
                sampler: FrameSampler::new(g, kind)?,
                budget,
                acc: SampleAccumulator::new(kind, n_classes),
                rngs: (0..config.workers).map(|w| stream(config.seed, w, kind)).collect(),
            })
        })
        .collect::<Result<_, FrameError>>()?;

    loop {
        let mut drew = false;
        for exp in experiments.iter_mut() {
            let remaining = exp.budget - exp.acc.n_experiments;
            let share = (config.batch_size * exp.budget).div_ceil(config.budget).max(1);
            let draws = remaining.min(share);
            if draws == 0 {
                continue;
            }
            drew = true;
            let workers = config.workers as u64;
            let sampler = &exp.sampler;
            let parts: Vec<SampleAccumulator> = exp
                .rngs
                .par_iter_mut()
                .enumerate()
                .map(|(w, rng)| {
                    let n = draws / workers + u64::from((w as u64) < draws % workers);
                    let mut acc = SampleAccumulator::new(sampler.kind(), n_classes);
                    for _ in 0..n {
                        acc.record(&sampler.sample(rng), g, table);
                    }
                    acc
                })
                .collect();
            for part in &parts {
                exp.acc.merge(part);
            }
        }
        if !drew {
            break;
        }
        report.batches += 1;
        report.motifs = estimate_all(size, table, &koef, &totals, &experiments)?;
        if let Some(target) = config.target_cv {
            if target_reached(&report.motifs, target) {
                report.stop = StopReason::TargetCvReached;
                break;
            }
        }
    }

    report.frames = kinds
        .iter()
        .map(|&kind| match experiments.iter().find(|e| e.sampler.kind() == kind) {
            Some(e) => FrameRun {
                kind,
                total: totals.get(kind),
                budget: e.budget,
                experiments: e.acc.n_experiments,
                degenerate: e.acc.degenerate(),
            },
            None => FrameRun {
                kind,
                total: 0,
                budget: 0,
                experiments: 0,
                degenerate: 0,
            },
        })
        .collect();
    report.elapsed_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

fn target_reached(motifs: &[MotifReport], target: f64) -> bool {
    let mut qualifying = motifs
        .iter()
        .filter(|m| m.max_detections() >= MIN_DETECTIONS_FOR_CV)
        .peekable();
    qualifying.peek().is_some() && qualifying.all(|m| m.cv.is_some_and(|cv| cv <= target))
}

fn estimate_all(
    size: usize,
    table: &crate::canon::ArrcodeTable,
    koef: &crate::frames::KoefTable,
    totals: &FrameTotals,
    experiments: &[Experiment],
) -> Result<Vec<MotifReport>, CensusError> {
    let mut out = Vec::new();
    for class in table.connected_classes() {
        let id = class.class_id;
        let mut tallies = Vec::new();
        let mut partials: Vec<MotifEstimate> = Vec::new();
        for &kind in FrameKind::for_size(size) {
            let k = koef.get(id, kind);
            if k == 0 {
                continue;
            }
            let (est, detections, n) = match experiments.iter().find(|e| e.sampler.kind() == kind) {
                Some(e) => (
                    single_estimate(&e.acc, totals, koef, id)?,
                    e.acc.detections[id],
                    e.acc.n_experiments,
                ),
                None => (MotifEstimate::absent(id, kind), 0, 0),
            };
            tallies.push(FrameTally {
                kind,
                koef: k,
                detections,
                experiments: n,
                n_hat: est.n_hat,
                variance: est.variance,
            });
            partials.push(est);
        }
        let combined = match partials.as_slice() {
            [only] => only.clone(),
            [a, b] => mixed_estimate(a, b)?,
            _ => unreachable!("every connected class is covered by one or two frames"),
        };
        out.push(MotifReport {
            class_id: id,
            canonical_code: class.canonical_code,
            name: class.name,
            n_hat: combined.n_hat,
            variance: combined.variance,
            cv: combined.cv,
            lambda: combined.lambda,
            tallies,
        });
    }
    Ok(out)
}
