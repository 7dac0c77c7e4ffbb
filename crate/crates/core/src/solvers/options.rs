/*
Copyright 2026 The nodeloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::scalar::Scalar;

/// Stopping rule and penalty for the ADMM solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Threshold on both the primal and dual residual, measured on the
    /// internally normalized problem.
    pub tol: f64,
    pub max_iter: usize,
    /// Augmented-Lagrangian penalty.
    pub rho: f64,
}

impl SolverOptions {
    pub fn new(tol: f64, max_iter: usize, rho: f64) -> Result<Self> {
        let o = Self { tol, max_iter, rho };
        o.validate()?;
        Ok(o)
    }

    /// Defaults for [`basis_pursuit`](super::basis_pursuit).
    pub fn basis_pursuit() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 5000,
            rho: 1.0,
        }
    }

    /// Defaults for [`srpca`](super::srpca).
    pub fn srpca() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 1000,
            rho: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(domain(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(domain("max_iter must be at least 1"));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(domain(format!("rho must be positive, got {}", self.rho)));
        }
        Ok(())
    }

    pub(crate) fn tol_as<T: Scalar>(&self) -> T {
        T::lit(self.tol)
    }

    pub(crate) fn rho_as<T: Scalar>(&self) -> T {
        T::lit(self.rho)
    }
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self::basis_pursuit()
    }
}

/// Outcome of an iterative solve. `converged` implies both residuals are at
/// most `tol`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub converged: bool,
}
