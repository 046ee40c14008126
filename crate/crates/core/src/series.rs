//! Per-step trajectory exports and measurement records.

use crate::noise::RecordProvenance;
use crate::scalar::Real;

/// One exported step of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow<T: Real> {
    pub step: usize,
    pub t: T,
    pub q_hat: T,
    pub p_hat: T,
    pub tau_q2: T,
    pub tau_p2: T,
    /// Record increment that produced this row; absent at `t = 0`.
    pub d_y: Option<T>,
    /// Pre-renormalization norm drift of the producing step (grid engine only).
    pub norm_drift: Option<T>,
    /// Gaussianity fit residual, when sampled (grid engine only).
    pub fit_residual: Option<T>,
}

/// Time series of exported steps, including `t = 0`.
#[derive(Debug, Clone, Default)]
pub struct TrajectorySeries<T: Real> {
    pub rows: Vec<SeriesRow<T>>,
}

impl<T: Real> TrajectorySeries<T> {
    pub fn with_capacity(n: usize) -> Self {
        Self { rows: Vec::with_capacity(n) }
    }

    pub fn last(&self) -> Option<&SeriesRow<T>> {
        self.rows.last()
    }
}

/// Time series of record increments `dY` plus provenance.
#[derive(Debug, Clone)]
pub struct MeasurementRecord<T: Real> {
    pub dt: T,
    pub increments: Vec<T>,
    pub provenance: RecordProvenance,
}

impl<T: Real> MeasurementRecord<T> {
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }
}
