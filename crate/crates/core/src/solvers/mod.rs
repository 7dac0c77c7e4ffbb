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

//! Convex solvers used by the localization and identification routines.

mod basis_pursuit;
mod group;
mod options;
mod srpca;

pub use basis_pursuit::basis_pursuit;
pub use group::group_min_norm;
pub use options::{SolveReport, SolverOptions};
pub use srpca::{srpca, srpca_traced, Decomposition, LAMBDA_UNIT as SRPCA_LAMBDA_UNIT};
