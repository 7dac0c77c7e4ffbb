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

//! Synthetic deployments and distance corruption models.
//!
//! A scenario places anchors at k-means centers of a uniform point cloud,
//! then scatters near targets around the anchors and far targets in boxes
//! well outside them. Corruption acts on the anchor-to-target distance
//! matrix.

use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{squared_distance_matrix, AnchorSet};
use crate::linalg::{kmeans, Matrix};
use crate::scalar::Scalar;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Rect {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x: (x0, x1), y: (y0, y1) }
    }

    fn validate(&self) -> Result<()> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if ok(self.x) && ok(self.y) {
            Ok(())
        } else {
            Err(domain(format!("degenerate box {self:?}")))
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> [f64; 2] {
        [
            rng.random_range(self.x.0..self.x.1),
            rng.random_range(self.y.0..self.y.1),
        ]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        (self.x.0..=self.x.1).contains(&p[0]) && (self.y.0..=self.y.1).contains(&p[1])
    }
}

/// How targets are placed under the separation constraint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Draw the requested number of candidates per zone and drop those too
    /// close to anything already placed. Zones may end up with fewer
    /// targets than requested.
    #[default]
    Thinning,
    /// Keep drawing until each zone holds exactly the requested count.
    Rejection,
}

/// Candidate draws allowed per zone under [`Placement::Rejection`].
pub const MAX_REJECTION_ATTEMPTS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegionSpec {
    pub near_box: Rect,
    pub far_boxes: Vec<Rect>,
    pub min_separation: f64,
    pub near_count: usize,
    pub far_count_per_box: usize,
    /// Size of the uniform cloud (over `near_box`) clustered for anchors.
    pub kmeans_cloud: usize,
    pub placement: Placement,
}

impl Default for RegionSpec {
    fn default() -> Self {
        Self {
            near_box: Rect::new(-400.0, 400.0, -400.0, 400.0),
            far_boxes: vec![
                Rect::new(-1200.0, -1000.0, -600.0, 400.0),
                Rect::new(1200.0, 1400.0, -600.0, 400.0),
            ],
            min_separation: 60.0,
            near_count: 50,
            far_count_per_box: 50,
            kmeans_cloud: 1000,
            placement: Placement::Thinning,
        }
    }
}

impl RegionSpec {
    pub fn validate(&self) -> Result<()> {
        self.near_box.validate()?;
        for b in &self.far_boxes {
            b.validate()?;
        }
        if !(self.min_separation > 0.0 && self.min_separation.is_finite()) {
            return Err(domain(format!(
                "min_separation must be positive, got {}",
                self.min_separation
            )));
        }
        Ok(())
    }
}

/// Anchors plus near and far targets, positions stored as columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario<T> {
    pub anchors: AnchorSet<T>,
    pub near_targets: Matrix<T>,
    pub far_targets: Matrix<T>,
    pub seed: u64,
}

impl<T: Scalar> Scenario<T> {
    /// Near targets followed by far targets. Node indices used elsewhere
    /// refer to the columns of this matrix.
    pub fn targets(&self) -> Matrix<T> {
        self.near_targets
            .hstack(&self.far_targets)
            .expect("both target sets are 2 x n")
    }

    pub fn target_count(&self) -> usize {
        self.near_targets.cols() + self.far_targets.cols()
    }

    /// Node indices of the far targets.
    pub fn far_indices(&self) -> std::ops::Range<usize> {
        self.near_targets.cols()..self.target_count()
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Builds a deployment with `m` anchors. The last k-means center is the
/// central anchor.
pub fn generate_scenario<T: Scalar>(spec: &RegionSpec, m: usize, seed: u64) -> Result<Scenario<T>> {
    spec.validate()?;
    if m < 4 {
        return Err(domain(format!("need at least 4 anchors, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cloud = Matrix::from_fn(2, spec.kmeans_cloud, |_, _| 0.0);
    let mut cloud = cloud;
    for j in 0..spec.kmeans_cloud {
        let p = spec.near_box.sample(&mut rng);
        cloud[(0, j)] = p[0];
        cloud[(1, j)] = p[1];
    }
    let centers = kmeans(&cloud, m, rng.next_u64())?;
    let mut placed: Vec<[f64; 2]> = (0..m).map(|j| [centers[(0, j)], centers[(1, j)]]).collect();

    let near = place_zone(spec, &spec.near_box, spec.near_count, &mut placed, &mut rng, "near")?;
    let mut far = Vec::new();
    for (b, rect) in spec.far_boxes.iter().enumerate() {
        let zone = format!("far box {b}");
        far.extend(place_zone(spec, rect, spec.far_count_per_box, &mut placed, &mut rng, &zone)?);
    }
    let to_matrix = |pts: &[[f64; 2]]| Matrix::from_fn(2, pts.len(), |d, j| T::lit(pts[j][d]));
    Ok(Scenario {
        anchors: AnchorSet::with_last_central(centers.cast())?,
        near_targets: to_matrix(&near),
        far_targets: to_matrix(&far),
        seed,
    })
}

/// `m` anchors at the k-means centers of `cloud` points uniform in
/// `[-extent, extent]^dim`, the last center being central.
pub fn kmeans_anchor_layout<T: Scalar>(
    dim: usize,
    m: usize,
    cloud: usize,
    extent: f64,
    seed: u64,
) -> Result<AnchorSet<T>> {
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(domain(format!("extent must be positive, got {extent}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = Matrix::from_fn(dim, cloud, |_, _| rng.random_range(-extent..extent));
    let centers = kmeans(&pts, m, rng.next_u64())?;
    AnchorSet::with_last_central(centers.cast())
}

fn place_zone(
    spec: &RegionSpec,
    rect: &Rect,
    count: usize,
    placed: &mut Vec<[f64; 2]>,
    rng: &mut ChaCha8Rng,
    zone: &str,
) -> Result<Vec<[f64; 2]>> {
    let sep2 = spec.min_separation * spec.min_separation;
    let clear = |p: [f64; 2], placed: &[[f64; 2]]| {
        placed
            .iter()
            .all(|q| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) >= sep2)
    };
    let start = placed.len();
    let attempts = match spec.placement {
        Placement::Thinning => count,
        Placement::Rejection => MAX_REJECTION_ATTEMPTS,
    };
    let mut used = 0;
    while used < attempts && placed.len() - start < count {
        used += 1;
        let p = rect.sample(rng);
        if clear(p, placed) {
            placed.push(p);
        }
    }
    let got = placed.len() - start;
    let short = match spec.placement {
        Placement::Thinning => count > 0 && got == 0,
        Placement::Rejection => got < count,
    };
    if short {
        return Err(Error::SamplingExhausted {
            zone: zone.to_string(),
            attempts: used,
        });
    }
    Ok(placed[start..].to_vec())
}

/// Parameters of the multiplicative corruption model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorruptionSpec {
    /// Number of heavily corrupted far targets.
    pub alpha: usize,
    /// Corrupted anchor distances per heavily corrupted target.
    pub k: usize,
    /// Relative squared-distance noise applied to every entry.
    pub normal_range: (f64, f64),
    /// Relative noise on the `k` corrupted entries of a corrupted target.
    pub severe_range: (f64, f64),
    pub central_may_corrupt: bool,
}

impl CorruptionSpec {
    /// Exact normal nodes, 20-25% severe corruption.
    pub fn idealized() -> Self {
        Self {
            alpha: 4,
            k: 3,
            normal_range: (0.0, 0.0),
            severe_range: (0.2, 0.25),
            central_may_corrupt: true,
        }
    }

    /// 0-5% noise on every entry, 15-20% severe corruption.
    pub fn realistic() -> Self {
        Self {
            normal_range: (0.0, 0.05),
            severe_range: (0.15, 0.2),
            ..Self::idealized()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.normal_range;
        let (c, d) = self.severe_range;
        if !(0.0 <= a && a <= b && b.is_finite()) {
            return Err(domain(format!("invalid normal range [{a}, {b}]")));
        }
        if !(0.0 <= c && c <= d && d.is_finite()) {
            return Err(domain(format!("invalid severe range [{c}, {d}]")));
        }
        Ok(())
    }
}

impl Default for CorruptionSpec {
    fn default() -> Self {
        Self::idealized()
    }
}

/// How the additive mixture combines its Gaussian and uniform parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixtureMode {
    /// `nu = (1 - beta) g + beta u` with both parts drawn per entry.
    #[default]
    Convex,
    /// `nu = u` with probability `beta`, otherwise `nu = g`.
    Bernoulli,
}

/// Parameters of the additive distance-noise model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdditiveSpec {
    pub beta: f64,
    pub sigma: f64,
    pub a: f64,
    pub b: f64,
    pub mode: MixtureMode,
}

impl Default for AdditiveSpec {
    fn default() -> Self {
        Self {
            beta: 0.75,
            sigma: 0.01,
            a: -100.0,
            b: 100.0,
            mode: MixtureMode::Convex,
        }
    }
}

impl AdditiveSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(domain(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(domain(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if !(self.a <= self.b && self.a.is_finite() && self.b.is_finite()) {
            return Err(domain(format!("invalid uniform range [{}, {}]", self.a, self.b)));
        }
        Ok(())
    }
}

/// Corrupted squared distances with the ground-truth bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorruptedData<T> {
    /// `m x n` squared distances after corruption.
    pub f_tilde: Matrix<T>,
    /// Heavily corrupted nodes, ascending.
    pub truth_corrupted_nodes: Vec<usize>,
    /// Corrupted anchors of each entry of `truth_corrupted_nodes`, ascending.
    pub truth_corrupted_anchors: Vec<Vec<usize>>,
    pub f_clean: Matrix<T>,
}

/// Multiplies every squared distance by `1 + U(a, b)`; for `alpha` random
/// far targets, `k` random anchor entries get `1 + U(c, d)` instead.
pub fn corrupt_multiplicative<T: Scalar>(
    scenario: &Scenario<T>,
    spec: &CorruptionSpec,
    seed: u64,
) -> Result<CorruptedData<T>> {
    spec.validate()?;
    let far = scenario.far_indices();
    let m = scenario.anchors.len();
    if spec.alpha > far.len() {
        return Err(domain(format!(
            "alpha = {} exceeds the {} far targets",
            spec.alpha,
            far.len()
        )));
    }
    let pool: Vec<usize> = if spec.central_may_corrupt {
        (0..m).collect()
    } else {
        scenario.anchors.row_anchors()
    };
    if spec.k > pool.len() {
        return Err(domain(format!("k = {} exceeds the {} eligible anchors", spec.k, pool.len())));
    }
    let f_clean = squared_distance_matrix(&scenario.anchors, &scenario.targets())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = spec.normal_range;
    let (c, d) = spec.severe_range;
    let mut f_tilde = f_clean.clone();
    if b > 0.0 {
        for v in f_tilde.data.iter_mut() {
            *v *= T::lit(1.0 + uniform(&mut rng, a, b));
        }
    }
    let mut nodes: Vec<usize> = sample(&mut rng, far.len(), spec.alpha)
        .into_iter()
        .map(|i| far.start + i)
        .collect();
    nodes.sort_unstable();
    let mut anchors = Vec::with_capacity(nodes.len());
    for &i in &nodes {
        let mut js: Vec<usize> = sample(&mut rng, pool.len(), spec.k)
            .into_iter()
            .map(|t| pool[t])
            .collect();
        js.sort_unstable();
        for &j in &js {
            f_tilde[(j, i)] = f_clean[(j, i)] * T::lit(1.0 + uniform(&mut rng, c, d));
        }
        anchors.push(js);
    }
    Ok(CorruptedData {
        f_tilde,
        truth_corrupted_nodes: nodes,
        truth_corrupted_anchors: anchors,
        f_clean,
    })
}

/// Adds mixture noise to every distance (not squared distance), clamps at
/// zero and squares. Every node is recorded as corrupted on every anchor.
pub fn corrupt_additive_mixture<T: Scalar>(
    scenario: &Scenario<T>,
    spec: &AdditiveSpec,
    seed: u64,
) -> Result<CorruptedData<T>> {
    spec.validate()?;
    let f_clean = squared_distance_matrix(&scenario.anchors, &scenario.targets())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = Normal::new(0.0, spec.sigma).map_err(|e| domain(e.to_string()))?;
    let mut f_tilde = f_clean.clone();
    for v in f_tilde.data.iter_mut() {
        let g = gauss.sample(&mut rng);
        let u = uniform(&mut rng, spec.a, spec.b);
        let nu = match spec.mode {
            MixtureMode::Convex => (1.0 - spec.beta) * g + spec.beta * u,
            MixtureMode::Bernoulli => {
                if rng.random::<f64>() < spec.beta {
                    u
                } else {
                    g
                }
            }
        };
        let dist = (v.as_f64().sqrt() + nu).max(0.0);
        *v = T::lit(dist * dist);
    }
    let n = f_clean.cols();
    let m = f_clean.rows();
    Ok(CorruptedData {
        f_tilde,
        truth_corrupted_nodes: (0..n).collect(),
        truth_corrupted_anchors: vec![(0..m).collect(); n],
        f_clean,
    })
}

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo < hi {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_shape() {
        let s: Scenario<f64> = generate_scenario(&RegionSpec::default(), 9, 7).unwrap();
        assert_eq!(s.anchors.len(), 9);
        assert_eq!(s.anchors.central_index(), 8);
        assert!(s.near_targets.cols() <= 50 && s.near_targets.cols() > 0);
        assert!(s.far_targets.cols() <= 100 && s.far_targets.cols() > 0);
    }

    #[test]
    fn rejection_hits_exact_counts() {
        let spec = RegionSpec {
            placement: Placement::Rejection,
            near_count: 20,
            far_count_per_box: 10,
            ..Default::default()
        };
        let s: Scenario<f64> = generate_scenario(&spec, 6, 1).unwrap();
        assert_eq!(s.near_targets.cols(), 20);
        assert_eq!(s.far_targets.cols(), 20);
    }

    #[test]
    fn zero_noise_is_clean() {
        let s: Scenario<f64> = generate_scenario(&RegionSpec::default(), 6, 3).unwrap();
        let spec = CorruptionSpec {
            severe_range: (0.0, 0.0),
            ..CorruptionSpec::idealized()
        };
        let d = corrupt_multiplicative(&s, &spec, 4).unwrap();
        assert_eq!(d.f_tilde, d.f_clean);
        let add = AdditiveSpec {
            sigma: 0.0,
            a: 0.0,
            b: 0.0,
            ..Default::default()
        };
        let d = corrupt_additive_mixture(&s, &add, 4).unwrap();
        assert!(d.f_tilde.sub(&d.f_clean).unwrap().max_abs() < 1e-6);
    }

    #[test]
    fn invalid_specs() {
        assert!(RegionSpec {
            min_separation: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(CorruptionSpec {
            normal_range: (0.1, 0.0),
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(AdditiveSpec {
            beta: 1.5,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
