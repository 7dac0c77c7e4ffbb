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

//! Robust localization, corrupted-node identification and anchor design.

mod design;
mod estimate;
mod identify;

pub use design::{design_low_coherence, designed_anchor_set, harmonic_basis, DESIGN_EXTENT};
pub use estimate::{
    annihilator, estimate_position, outlier_budget, OutlierBudget, RobustEstimate, RobustLocalizer,
};
pub use identify::{
    identify_corrupted, identify_from_distances, identify_with, naive_identify, srpca_identify,
    srpca_identify_reported, top_alpha,
    IdentificationResult, SRPCA_LAMBDAS,
};
