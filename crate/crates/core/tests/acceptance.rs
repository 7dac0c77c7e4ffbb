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

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use nodeloc::experiments::*;
use nodeloc::geometry::{assemble_rhs, AnchorSet};
use nodeloc::linalg::{coherence, welch_bound, Matrix};
use nodeloc::robust::*;
use nodeloc::scenario::{corrupt_multiplicative, generate_scenario, kmeans_anchor_layout, RegionSpec};
use nodeloc::solvers::{basis_pursuit, SolverOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Outcome {
    failed: Vec<String>,
}

impl Outcome {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(name.to_string());
        }
    }
}

fn agg(report: &ExperimentReport, method: Method, m: usize) -> &TrialRow {
    report
        .aggregate(method, m)
        .unwrap_or_else(|| panic!("missing aggregate {} m={m}", method.as_str()))
}

const MS: [usize; 4] = [6, 9, 12, 15];

fn criterion_1_2(out: &mut Outcome, exp1: &ExperimentReport, secs: f64) {
    let ours: Vec<f64> = MS.iter().map(|&m| agg(exp1, Method::Ours, m).ia.unwrap()).collect();
    let naive: Vec<f64> = MS.iter().map(|&m| agg(exp1, Method::Naive, m).ia.unwrap()).collect();
    let srpca: Vec<f64> = MS.iter().map(|&m| agg(exp1, Method::Srpca, m).ia.unwrap()).collect();
    let ok = ours.iter().all(|&v| v == 1.0)
        && naive.iter().all(|&v| v < 0.6)
        && srpca.iter().all(|&v| (0.7..=1.0).contains(&v))
        && exp1.failures.is_empty()
        && secs < 300.0;
    out.check(
        "1 exp1 identification",
        ok,
        format!("ours IA {ours:?}, naive IA {naive:?}, srpca IA {srpca:?}, {secs:.1}s"),
    );

    let a = agg(exp1, Method::Ours, 15);
    let (mre, msp) = (a.mre.unwrap(), a.msp.unwrap());
    out.check(
        "2 exp1 exactness at m=15",
        mre <= 1e-8 && msp <= 1e-10,
        format!("MRE {mre:.3e} (<= 1e-8), MSP {msp:.3e} (<= 1e-10)"),
    );
}

fn criterion_3(out: &mut Outcome, exp2: &ExperimentReport) {
    let ia: Vec<f64> = MS.iter().map(|&m| agg(exp2, Method::Ours, m).ia.unwrap()).collect();
    let mre: Vec<f64> = MS.iter().map(|&m| agg(exp2, Method::Ours, m).mre.unwrap()).collect();
    let madr: Vec<f64> = MS.iter().map(|&m| agg(exp2, Method::Ours, m).madr.unwrap()).collect();
    let ok = ia[1..].iter().all(|&v| v >= 0.95)
        && mre.windows(2).all(|w| w[1] < w[0])
        && mre[3] <= 0.10
        && madr[1..].iter().all(|&v| (0.9..=1.1).contains(&v));
    out.check(
        "3 exp2 trends",
        ok,
        format!("IA {ia:?}, MRE {mre:.4?}, MADR {madr:.4?}"),
    );
}

/// Sparsest `s` with `r s = y`, by exhaustive support search.
fn l0_oracle(r: &Matrix<f64>, y: &[f64], max_k: usize) -> Option<Vec<f64>> {
    let n = r.cols();
    let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if ynorm == 0.0 {
        return Some(vec![0.0; n]);
    }
    let rhs = nalgebra::DVector::from_column_slice(y);
    for k in 1..=max_k.min(n) {
        let mut supp: Vec<usize> = (0..k).collect();
        loop {
            let sub = nalgebra::DMatrix::from_fn(r.rows(), k, |i, j| r[(i, supp[j])]);
            if let Ok(x) = sub.clone().svd(true, true).solve(&rhs, 1e-12) {
                if (&sub * &x - &rhs).norm() <= 1e-9 * ynorm {
                    let mut s = vec![0.0; n];
                    for (j, &i) in supp.iter().enumerate() {
                        s[i] = x[j];
                    }
                    return Some(s);
                }
            }
            let mut i = k;
            while i > 0 && supp[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            supp[i - 1] += 1;
            for j in i..k {
                supp[j] = supp[j - 1] + 1;
            }
        }
    }
    None
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_4(out: &mut Outcome) {
    let opts = SolverOptions::basis_pursuit();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut instances, mut passed, mut l0_checked, mut l0_agree) = (0, 0, 0, 0);
    let (mut worst_s, mut worst_q) = (0.0f64, 0.0f64);
    let mut attempt = 0u64;
    while instances < 240 {
        attempt += 1;
        let m = rng.random_range(6..=15);
        let r = if rng.random_bool(0.25) { 3 } else { 2 };
        let anchors: AnchorSet<f64> = if m > r + 2 && rng.random_bool(0.5) {
            let (_, x) = design_low_coherence::<f64>(m, r, attempt).unwrap();
            designed_anchor_set(&x).unwrap()
        } else {
            match kmeans_anchor_layout::<f64>(r, m, 1000, 400.0, attempt) {
                Ok(a) => a,
                Err(_) => continue,
            }
        };
        let Ok(loc) = RobustLocalizer::new(&anchors) else { continue };
        let budget = loc.budget().unwrap();
        if budget.k_max == 0 {
            continue;
        }
        instances += 1;
        let k = rng.random_range(1..=budget.k_max);
        let q: Vec<f64> = (0..r).map(|_| rng.random_range(-1500.0..1500.0)).collect();
        let mut d = anchors.squared_distances_to(&q);
        let rows = loc.system().row_anchors.clone();
        // corrupt k system rows and, half of the time, the central distance
        let mut planted = vec![0.0; rows.len()];
        for i in rand::seq::index::sample(&mut rng, rows.len(), k) {
            let factor = rng.random_range(0.2..0.25);
            planted[i] = -0.5 * factor * d[rows[i]];
            d[rows[i]] *= 1.0 + factor;
        }
        let central = anchors.central_index();
        let c = if rng.random_bool(0.5) {
            let extra = 0.2 * d[central];
            d[central] += extra;
            0.5 * extra
        } else {
            0.0
        };
        let m_tilde = assemble_rhs(loc.system(), &d).unwrap();
        let rbar = loc.annihilator();
        let y = rbar.mul_vec(&m_tilde).unwrap();
        let (s, _) = basis_pursuit(rbar, &y, &opts).unwrap();
        // the central offset is invisible to R and shows up in the estimate
        let err_s = max_diff(&s, &planted);
        let est = loc.estimate(&m_tilde, &opts).unwrap();
        let qn = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        let err_q = max_diff(&est.position, &q) / (1.0 + qn);
        worst_s = worst_s.max(err_s);
        worst_q = worst_q.max(err_q);
        if err_s <= 1e-6 && err_q <= 1e-6 && (est.central_corruption - c).abs() <= 1e-6 * (1.0 + c) {
            passed += 1;
        }
        if rows.len() <= 8 {
            l0_checked += 1;
            if let Some(s0) = l0_oracle(rbar, &y, k) {
                if max_diff(&s, &s0) <= 1e-6 {
                    l0_agree += 1;
                }
            }
        }
    }
    out.check(
        "4 sparse recovery guarantee",
        passed == instances && l0_agree == l0_checked && l0_checked > 0,
        format!(
            "{passed}/{instances} recovered (max |s err| {worst_s:.2e}, max rel position err {worst_q:.2e}), l1 = l0 on {l0_agree}/{l0_checked}"
        ),
    );
}

fn criterion_5(out: &mut Outcome) {
    let region = RegionSpec::default();
    let mut spec = nodeloc::scenario::CorruptionSpec::idealized();
    let (mut instances, mut exact) = (0, 0);
    for seed in 0..120u64 {
        let m = MS[seed as usize % 4];
        spec.alpha = 1 + seed as usize % 6;
        let scenario = generate_scenario::<f64>(&region, m, 50_000 + seed).unwrap();
        let data = corrupt_multiplicative(&scenario, &spec, seed).unwrap();
        let id = identify_from_distances(&scenario.anchors, &data.f_tilde, spec.alpha).unwrap();
        let norms = &id.column_norms;
        let tau = 1e-6 * norms.iter().cloned().fold(0.0, f64::max);
        let support: Vec<usize> = (0..norms.len()).filter(|&i| norms[i] > tau).collect();
        let mut truth = data.truth_corrupted_nodes.clone();
        truth.sort_unstable();
        let mut picked = id.indices.clone();
        picked.sort_unstable();
        instances += 1;
        if support == truth && picked == truth {
            exact += 1;
        }
    }
    out.check(
        "5 exact identification pattern",
        instances >= 100 && exact == instances,
        format!("{exact}/{instances} instances with zero errors"),
    );
}

fn criterion_6(out: &mut Outcome) {
    let (mut count, mut ok) = (0, true);
    let mut worst = 0.0f64;
    for r in [2usize, 3] {
        for m in (r + 3)..=20 {
            for seed in 0..5u64 {
                count += 1;
                let (rbar, _) = design_low_coherence::<f64>(m, r, seed).unwrap();
                let n = m - 1;
                let ones = rbar.mul_vec(&vec![1.0; n]).unwrap();
                let gram = &rbar * &rbar.transpose();
                let proj = &rbar.transpose() * &rbar;
                let mut orth = 0.0f64;
                for i in 0..gram.rows() {
                    for j in 0..gram.cols() {
                        orth = orth.max((gram[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs());
                    }
                }
                let mut obj = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        obj += (proj[(i, j)] - if i == j { 1.0 } else { 0.0 }).powi(2);
                    }
                }
                let ones_err = ones.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let mu = coherence(&rbar).unwrap();
                let welch = welch_bound::<f64>(rbar.rows(), n).unwrap();
                worst = worst.max(ones_err).max(orth).max((obj - (r + 1) as f64).abs());
                ok &= ones_err <= 1e-10 && orth <= 1e-10 && (obj - (r + 1) as f64).abs() <= 1e-9;
                ok &= mu >= welch - 1e-12;
            }
        }
    }
    let study = run_design_study(15, 2, 100, 600).unwrap();
    let wins = study.design.iter().filter(|d| d.mu_designed < d.mu_kmeans).count();
    ok &= study.design.iter().all(|d| d.mu_designed >= d.welch_bound - 1e-12 && d.mu_kmeans >= d.welch_bound - 1e-12);
    out.check(
        "6 designed annihilators",
        ok && wins >= 60,
        format!("{count} designs, worst constraint residual {worst:.2e}; designed beats k-means on coherence in {wins}/100"),
    );
}

fn criterion_7(out: &mut Outcome) {
    let a: Matrix<f64> = Matrix::from_rows(&[
        &[1.0, -1.0, 1.0, -1.0],
        &[-1.0, 1.0, 1.0, -1.0],
        &[1.0, 1.0, -1.0, 1.0],
    ]);
    let b: Matrix<f64> = Matrix::from_rows(&[
        &[1.0, 1.0, 1.0, 1.0],
        &[0.0, 1.0, 1.0, -1.0],
        &[0.0, 1.0, -1.0, 1.0],
    ]);
    let (mu_a, mu_b) = (coherence(&a).unwrap(), coherence(&b).unwrap());
    out.check(
        "7 coherence reference values",
        (mu_a - 1.0).abs() <= 1e-12 && (mu_b - 1.0 / 3f64.sqrt()).abs() <= 1e-12,
        format!("mu = {mu_a:.15}, {mu_b:.15}"),
    );
}

fn json(report: &ExperimentReport) -> String {
    serde_json::to_string_pretty(report).unwrap()
}

fn main() {
    let mut out = Outcome { failed: vec![] };

    let t0 = Instant::now();
    let exp1 = run_experiment(&ExperimentConfig::exp1()).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    criterion_1_2(&mut out, &exp1, secs);

    let exp2 = run_experiment(&ExperimentConfig::exp2()).unwrap();
    criterion_3(&mut out, &exp2);
    criterion_4(&mut out);
    criterion_5(&mut out);
    criterion_6(&mut out);
    criterion_7(&mut out);

    let compare = run_experiment(&ExperimentConfig::baseline_compare()).unwrap();
    let design = run_experiment(&ExperimentConfig::design_study()).unwrap();
    let mut same = json(&exp1) == json(&run_experiment(&ExperimentConfig::exp1()).unwrap());
    same &= json(&exp2) == json(&run_experiment(&ExperimentConfig::exp2()).unwrap());
    same &= json(&compare) == json(&run_experiment(&ExperimentConfig::baseline_compare()).unwrap());
    same &= json(&design) == json(&run_experiment(&ExperimentConfig::design_study()).unwrap());
    out.check(
        "8 determinism",
        same,
        "exp1, exp2, baseline_compare, design_study each run twice".to_string(),
    );

    let mre = agg(&compare, Method::Ours, 15).mre.unwrap();
    let msd = agg(&compare, Method::Ours, 15).msd.unwrap();
    out.check(
        "note additive mixture at m=15",
        mre <= 0.15,
        format!("MRE {mre:.4} (<= 0.15), MSD {msd:.1}"),
    );

    if !out.failed.is_empty() {
        eprintln!("failed: {}", out.failed.join(", "));
        std::process::exit(1);
    }
}
