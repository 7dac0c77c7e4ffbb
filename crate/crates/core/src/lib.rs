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

//! Robust localization of severely corrupted target nodes from
//! anchor-to-target distances.
//!
//! The pipeline projects trilateration measurements onto the left null
//! space of the augmented anchor matrix `[X 1]`, where only the outlier
//! component survives. Corrupted nodes are the columns that do not vanish
//! under that projection; their positions are recovered by basis pursuit
//! on the projected system followed by a least-squares solve.
//!
//! Every numeric routine is generic over [`Scalar`] (`f32` or `f64`). The
//! experiment harness runs in `f64`; the aliases below name the common
//! instantiations.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod linalg;
pub mod metrics;
pub mod robust;
pub mod scalar;
pub mod scenario;
pub mod solvers;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Matrix64 = linalg::Matrix<f64>;
pub type Matrix32 = linalg::Matrix<f32>;
pub type AnchorSet64 = geometry::AnchorSet<f64>;
pub type AnchorSet32 = geometry::AnchorSet<f32>;
pub type Scenario64 = scenario::Scenario<f64>;
pub type CorruptedData64 = scenario::CorruptedData<f64>;
pub type RobustEstimate64 = robust::RobustEstimate<f64>;
