//! Turning frame-sampling tallies into motif-count estimates.
//!
//! A frame experiment that draws `N⁺` uniform instances of a frame with
//! `N_F` instances in the graph, and sees motif `m` on `C` of them,
//! estimates the motif count as `(C / N⁺) · N_F / koef`, where `koef` is the
//! number of frame instances inside one motif instance. Motifs reachable
//! from two frames get two independent estimates, which are combined with
//! the weight minimizing the squared coefficient of variation.

mod run;

use serde::Serialize;
use thiserror::Error;

use crate::canon::ArrcodeTable;
use crate::frames::{FrameKind, FrameSample, FrameTotals, KoefTable};
use crate::graph::Graph;

pub use run::{
    run_sampled_census, CensusConfig, CensusError, FrameRun, FrameTally, MotifReport,
    SampledCensus, StopReason, DEFAULT_BATCH, DEFAULT_SEED, MIN_DETECTIONS_FOR_CV,
};

#[derive(Debug, Error, PartialEq)]
pub enum EstimateError {
    #[error("{kind} frame cannot detect motif class {class_id}")]
    Undetectable { class_id: usize, kind: FrameKind },
    #[error("no {0} experiments have been run")]
    NoExperiments(FrameKind),
    #[error("no information: both estimates are zero")]
    NoInformation,
    #[error("cannot mix estimates of classes {0} and {1}")]
    ClassMismatch(usize, usize),
}

/// Tallies of one frame experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleAccumulator {
    pub frame_kind: FrameKind,
    /// Samples drawn, degenerate chains included.
    pub n_experiments: u64,
    /// Detections per class id.
    pub detections: Vec<u64>,
}

impl SampleAccumulator {
    pub fn new(frame_kind: FrameKind, n_classes: usize) -> Self {
        Self {
            frame_kind,
            n_experiments: 0,
            detections: vec![0; n_classes],
        }
    }

    /// Counts one experiment and, unless the chain is degenerate, the
    /// motif induced on the sampled vertices.
    pub fn record(&mut self, sample: &FrameSample, graph: &Graph, table: &ArrcodeTable) {
        self.n_experiments += 1;
        if !sample.degenerate {
            let code = graph.induced_code_unchecked(sample.vertices());
            self.detections[table.classify_unchecked(code)] += 1;
        }
    }

    pub fn merge(&mut self, other: &SampleAccumulator) {
        debug_assert_eq!(self.frame_kind, other.frame_kind);
        self.n_experiments += other.n_experiments;
        for (a, b) in self.detections.iter_mut().zip(&other.detections) {
            *a += b;
        }
    }

    pub fn detections_total(&self) -> u64 {
        self.detections.iter().sum()
    }

    /// Experiments that detected nothing (degenerate chains).
    pub fn degenerate(&self) -> u64 {
        self.n_experiments - self.detections_total()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MotifEstimate {
    pub class_id: usize,
    pub n_hat: f64,
    pub variance: f64,
    pub cv: Option<f64>,
    /// Weight on the second experiment; set only for mixed estimates.
    pub lambda: Option<f64>,
    pub sources: Vec<FrameKind>,
}

impl MotifEstimate {
    fn new(class_id: usize, n_hat: f64, variance: f64, lambda: Option<f64>, sources: Vec<FrameKind>) -> Self {
        Self {
            class_id,
            n_hat,
            variance,
            cv: coefficient_of_variation(n_hat, variance),
            lambda,
            sources,
        }
    }

    /// The count is known to be zero because the graph has no instance of
    /// `kind`, which every instance of the motif would contain.
    pub fn absent(class_id: usize, kind: FrameKind) -> Self {
        Self::new(class_id, 0.0, 0.0, None, vec![kind])
    }
}

pub fn coefficient_of_variation(n_hat: f64, variance: f64) -> Option<f64> {
    (n_hat > 0.0).then(|| variance.sqrt() / n_hat)
}

/// Estimate from one frame experiment, with the binomial plug-in variance
/// `N_F² / (koef² N⁺²) · C (1 − C/N⁺)`.
pub fn single_estimate(
    acc: &SampleAccumulator,
    totals: &FrameTotals,
    koef: &KoefTable,
    class_id: usize,
) -> Result<MotifEstimate, EstimateError> {
    let kind = acc.frame_kind;
    let k = koef.get(class_id, kind);
    if k == 0 {
        return Err(EstimateError::Undetectable { class_id, kind });
    }
    if acc.n_experiments == 0 {
        return Err(EstimateError::NoExperiments(kind));
    }
    let hits = acc.detections[class_id] as f64;
    let trials = acc.n_experiments as f64;
    let scale = totals.get(kind) as f64 / k as f64;
    let q = hits / trials;
    let n_hat = q * scale;
    let variance = scale * scale / (trials * trials) * hits * (1.0 - q);
    Ok(MotifEstimate::new(class_id, n_hat, variance, None, vec![kind]))
}

/// Squared coefficient of variation of `(1 − λ) n_A + λ n_B` for
/// independent estimates; `None` where the combined mean is zero.
pub fn cv_squared(lambda: f64, n_a: f64, d_a: f64, n_b: f64, d_b: f64) -> Option<f64> {
    let mean = (1.0 - lambda) * n_a + lambda * n_b;
    (mean > 0.0).then(|| ((1.0 - lambda).powi(2) * d_a + lambda.powi(2) * d_b) / (mean * mean))
}

/// Mixing weight on estimate B minimizing [`cv_squared`]:
/// `λ = n_B D_A / (n_A D_B + n_B D_A)`.
///
/// When the denominator vanishes: both variances zero gives `1/2`; an
/// estimate with zero count and zero variance (no detections) gets no
/// weight, since every other λ attains the same minimum.
pub fn optimal_lambda(n_a: f64, d_a: f64, n_b: f64, d_b: f64) -> Result<f64, EstimateError> {
    if n_a == 0.0 && n_b == 0.0 {
        return Err(EstimateError::NoInformation);
    }
    let denom = n_a * d_b + n_b * d_a;
    if denom > 0.0 {
        return Ok((n_b * d_a / denom).clamp(0.0, 1.0));
    }
    Ok(if d_a == 0.0 && d_b == 0.0 {
        0.5
    } else if n_a == 0.0 {
        1.0
    } else {
        0.0
    })
}

/// Combines estimates of one motif from two independent experiments.
pub fn mixed_estimate(a: &MotifEstimate, b: &MotifEstimate) -> Result<MotifEstimate, EstimateError> {
    if a.class_id != b.class_id {
        return Err(EstimateError::ClassMismatch(a.class_id, b.class_id));
    }
    let sources: Vec<FrameKind> = a.sources.iter().chain(&b.sources).copied().collect();
    let lambda = match optimal_lambda(a.n_hat, a.variance, b.n_hat, b.variance) {
        Ok(l) => l,
        Err(EstimateError::NoInformation) => {
            return Ok(MotifEstimate::new(a.class_id, 0.0, 0.0, None, sources));
        }
        Err(e) => return Err(e),
    };
    let n_hat = a.n_hat + lambda * (b.n_hat - a.n_hat);
    let variance = (1.0 - lambda).powi(2) * a.variance + lambda.powi(2) * b.variance;
    Ok(MotifEstimate::new(a.class_id, n_hat, variance, Some(lambda), sources))
}
