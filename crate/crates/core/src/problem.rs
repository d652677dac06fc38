//! Advection problem definition.

use crate::error::{Error, Result};
use crate::profile::ProfileDescriptor;
use crate::quadrature;
use serde::{Deserialize, Serialize};

/// Inflow boundary signal b(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SignalDescriptor {
    Zero,
    Constant { value: f64 },
    Sine { omega: f64 },
    /// b(t) = q0(x_left - u t) with periodic extension of the initial
    /// profile, so the exact solution stays the advected initial data.
    FromProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum BoundaryCondition {
    Periodic,
    Dirichlet { signal: SignalDescriptor },
}

/// Scalar advection with fixed positive speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvectionProblem {
    pub speed: f64,
    pub initial: ProfileDescriptor,
    pub boundary: BoundaryCondition,
}

impl AdvectionProblem {
    pub fn new(speed: f64, initial: ProfileDescriptor, boundary: BoundaryCondition) -> Result<Self> {
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::Config(format!(
                "advection speed must be positive, got {speed}"
            )));
        }
        Ok(Self {
            speed,
            initial,
            boundary,
        })
    }

    pub fn periodic(speed: f64, initial: ProfileDescriptor) -> Result<Self> {
        Self::new(speed, initial, BoundaryCondition::Periodic)
    }
}

/// Evaluable boundary signal, possibly tied to the problem's initial data.
pub trait BoundarySignal {
    fn value(&self, t: f64) -> f64;

    /// Mean of the signal over `[t0, t1]` (5-node Gauss–Legendre).
    fn mean(&self, t0: f64, t1: f64) -> f64 {
        quadrature::average(|t| self.value(t), t0, t1)
    }
}

/// Signal resolved against a concrete problem and domain.
pub struct ResolvedSignal {
    descriptor: SignalDescriptor,
    profile: ProfileDescriptor,
    speed: f64,
    x_left: f64,
    period_len: f64,
}

impl ResolvedSignal {
    pub fn new(
        descriptor: SignalDescriptor,
        profile: ProfileDescriptor,
        speed: f64,
        x_left: f64,
        period_len: f64,
    ) -> Self {
        Self {
            descriptor,
            profile,
            speed,
            x_left,
            period_len,
        }
    }
}

impl BoundarySignal for ResolvedSignal {
    fn value(&self, t: f64) -> f64 {
        match &self.descriptor {
            SignalDescriptor::Zero => 0.0,
            SignalDescriptor::Constant { value } => *value,
            SignalDescriptor::Sine { omega } => (omega * t).sin(),
            SignalDescriptor::FromProfile => {
                let mut y = self.x_left - self.speed * t;
                y -= self.period_len * ((y - self.x_left) / self.period_len).floor();
                self.profile.eval(y)
            }
        }
    }
}

impl<F: Fn(f64) -> f64> BoundarySignal for F {
    fn value(&self, t: f64) -> f64 {
        self(t)
    }
}
