//! The noisy linear measurement model `y = a^T x + eps` with a hard cap on
//! total sensing energy `sum ||a||^2`.
//!
//! Recovery code only ever sees a [`Sensor`]; the hidden cluster is held
//! inside [`SensingSession`] and has no accessor.

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::numerics::SeededRandomness;

/// Adaptive measurement access to a hidden signal `x = mu * 1_C`.
pub trait Sensor {
    /// Dimension of the signal.
    fn n(&self) -> usize;
    /// Known activation amplitude `mu`.
    fn amplitude(&self) -> f64;
    /// Known noise standard deviation `sigma`.
    fn noise_std(&self) -> f64;
    fn budget(&self) -> f64;
    fn spent(&self) -> f64;
    fn measurement_count(&self) -> usize;

    fn remaining(&self) -> f64 {
        self.budget() - self.spent()
    }

    /// Observes `a^T x + eps`, debiting `||a||^2`.
    fn measure(&mut self, a: &[f64]) -> Result<f64>;

    /// Observes `amplitude * 1_block^T x + eps`, debiting
    /// `amplitude^2 * |block|`.
    fn measure_block(&mut self, block: &VertexSet, amplitude: f64) -> Result<f64>;
}

#[derive(Debug)]
pub struct SensingSession {
    active: Vec<bool>,
    mu: f64,
    sigma: f64,
    budget: f64,
    spent: f64,
    count: usize,
    rng: SeededRandomness,
}

impl SensingSession {
    pub fn new(
        n: usize,
        cluster: &VertexSet,
        mu: f64,
        sigma: f64,
        budget: f64,
        rng: SeededRandomness,
    ) -> Result<Self> {
        cluster.check_bounds(n)?;
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgument(format!("amplitude must be positive, got {mu}")));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("noise std must be >= 0, got {sigma}")));
        }
        if !(budget >= 0.0 && budget.is_finite()) {
            return Err(Error::InvalidArgument(format!("budget must be >= 0, got {budget}")));
        }
        Ok(SensingSession {
            active: cluster.mask(n),
            mu,
            sigma,
            budget,
            spent: 0.0,
            count: 0,
            rng,
        })
    }

    fn debit(&mut self, cost: f64) -> Result<()> {
        if !cost.is_finite() || self.spent + cost > self.budget {
            return Err(Error::BudgetExceeded {
                requested: cost,
                remaining: self.budget - self.spent,
            });
        }
        self.spent += cost;
        self.count += 1;
        Ok(())
    }

    fn observe(&mut self, signal: f64) -> Result<f64> {
        Ok(signal + self.rng.normal(self.sigma)?)
    }
}

impl Sensor for SensingSession {
    fn n(&self) -> usize {
        self.active.len()
    }

    fn amplitude(&self) -> f64 {
        self.mu
    }

    fn noise_std(&self) -> f64 {
        self.sigma
    }

    fn budget(&self) -> f64 {
        self.budget
    }

    fn spent(&self) -> f64 {
        self.spent
    }

    fn measurement_count(&self) -> usize {
        self.count
    }

    fn measure(&mut self, a: &[f64]) -> Result<f64> {
        if a.len() != self.active.len() {
            return Err(Error::InvalidArgument(format!(
                "sensing vector has length {}, signal has {}",
                a.len(),
                self.active.len()
            )));
        }
        let cost: f64 = a.iter().map(|v| v * v).sum();
        let overlap: f64 = a
            .iter()
            .zip(&self.active)
            .filter(|(_, &on)| on)
            .map(|(v, _)| v)
            .sum();
        self.debit(cost)?;
        self.observe(self.mu * overlap)
    }

    fn measure_block(&mut self, block: &VertexSet, amplitude: f64) -> Result<f64> {
        block.check_bounds(self.active.len())?;
        let cost = amplitude * amplitude * block.len() as f64;
        let overlap = block.iter().filter(|&v| self.active[v]).count();
        self.debit(cost)?;
        self.observe(amplitude * self.mu * overlap as f64)
    }
}

/// Outcome of comparing a sensor's ledger with an independent recount.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LedgerAudit {
    pub reported: f64,
    pub recomputed: f64,
    pub budget: f64,
    /// Largest `spent` seen after any accepted measurement.
    pub max_spent: f64,
    pub measurements: usize,
}

impl LedgerAudit {
    pub fn relative_error(&self) -> f64 {
        let scale = self.recomputed.abs().max(f64::MIN_POSITIVE);
        (self.reported - self.recomputed).abs() / scale
    }

    pub fn within_budget(&self) -> bool {
        self.max_spent <= self.budget
    }

    /// Ledger matches the recount to `tol` relative and never overran.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.within_budget() && (self.reported == self.recomputed || self.relative_error() <= tol)
    }
}

/// Sensor wrapper that recounts every accepted measurement's energy from
/// the explicit dense sensing vector, using compensated summation.
#[derive(Debug)]
pub struct AuditedSensor<S> {
    inner: S,
    sum: f64,
    compensation: f64,
    max_spent: f64,
    accepted: usize,
}

impl<S: Sensor> AuditedSensor<S> {
    pub fn new(inner: S) -> Self {
        AuditedSensor {
            inner,
            sum: 0.0,
            compensation: 0.0,
            max_spent: 0.0,
            accepted: 0,
        }
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }

    pub fn into_inner(self) -> S {
        self.inner
    }

    pub fn audit(&self) -> LedgerAudit {
        LedgerAudit {
            reported: self.inner.spent(),
            recomputed: self.sum + self.compensation,
            budget: self.inner.budget(),
            max_spent: self.max_spent,
            measurements: self.accepted,
        }
    }

    fn record(&mut self, dense: impl Iterator<Item = f64>) {
        for v in dense {
            let term = v * v;
            let t = self.sum + term;
            if self.sum.abs() >= term.abs() {
                self.compensation += (self.sum - t) + term;
            } else {
                self.compensation += (term - t) + self.sum;
            }
            self.sum = t;
        }
        self.accepted += 1;
        self.max_spent = self.max_spent.max(self.inner.spent());
    }
}

impl<S: Sensor> Sensor for AuditedSensor<S> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn amplitude(&self) -> f64 {
        self.inner.amplitude()
    }

    fn noise_std(&self) -> f64 {
        self.inner.noise_std()
    }

    fn budget(&self) -> f64 {
        self.inner.budget()
    }

    fn spent(&self) -> f64 {
        self.inner.spent()
    }

    fn measurement_count(&self) -> usize {
        self.inner.measurement_count()
    }

    fn measure(&mut self, a: &[f64]) -> Result<f64> {
        let y = self.inner.measure(a)?;
        self.record(a.iter().copied());
        Ok(y)
    }

    fn measure_block(&mut self, block: &VertexSet, amplitude: f64) -> Result<f64> {
        let y = self.inner.measure_block(block, amplitude)?;
        let mut dense = vec![0.0; self.inner.n()];
        for v in block.iter() {
            dense[v] = amplitude;
        }
        self.record(dense.into_iter());
        Ok(y)
    }
}
