//! Inverse problems for zero modes and a stochastic search for
//! configurations with many zero-energy eigenvalues.

use std::f64::consts::PI;

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::gamma::gamma_matrix;
use crate::linalg::singular_values;
use crate::zero_modes::classify_zero_energy;
use crate::{distance, Point, C64};

const ZERO_COMPONENT: f64 = 1e-12;

/// Coupling constants making `c` a kernel vector of `Γ₀`.
///
/// `α_j = Σ_{k≠j} c_k / (4π|y_j − y_k| c_j)`; components with `c_j = 0` leave
/// `α_j` free (`None`) provided `Σ_k c_k / (4π|y_j − y_k|) = 0`.
pub fn solve_alpha_for_kernel(centers: &[Point], c: &[f64]) -> Result<Vec<Option<f64>>> {
    if centers.len() != c.len() {
        return Err(Error::InvalidArgument(format!(
            "{} centers but {} kernel components",
            centers.len(),
            c.len()
        )));
    }
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::InvalidArgument("kernel vector must be nonzero".into()));
    }
    (0..c.len())
        .map(|j| {
            let coupling: f64 = (0..c.len())
                .filter(|&k| k != j)
                .map(|k| c[k] / (4.0 * PI * distance(&centers[j], &centers[k])))
                .sum();
            if c[j].abs() <= ZERO_COMPONENT * scale {
                if coupling.abs() > ZERO_COMPONENT * scale {
                    return Err(Error::InconsistentZeroComponent(j, coupling));
                }
                Ok(None)
            } else {
                Ok(Some(coupling / c[j]))
            }
        })
        .collect()
}

/// Off-diagonal `1/(4π|y_j − y_k|)`.
fn green_matrix(centers: &[Point]) -> DMatrix<f64> {
    let n = centers.len();
    DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            0.0
        } else {
            1.0 / (4.0 * PI * distance(&centers[j], &centers[k]))
        }
    })
}

/// `[Γ₀; 𝟙ᵀ/(4π)]`: its kernel is `Ker Γ₀ ∩ Ker Γ₁`.
fn stacked_system(alphas: &[f64], green: &DMatrix<f64>) -> DMatrix<f64> {
    let n = alphas.len();
    DMatrix::from_fn(n + 1, n, |j, k| {
        if j == n {
            1.0 / (4.0 * PI)
        } else if j == k {
            alphas[j]
        } else {
            -green[(j, k)]
        }
    })
}

/// Singular values in ascending order with the matching right singular
/// vectors as columns.
fn ascending_svd(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let vectors = DMatrix::from_fn(v_t.ncols(), order.len(), |r, c| v_t[(order[c], r)]);
    (values, vectors)
}

#[derive(Debug, Clone)]
struct Fit {
    energy: f64,
    alphas: Vec<f64>,
}

const FIT_ITERATIONS: usize = 60;

/// Minimises the sum of the `k` smallest squared singular values of the
/// stacked system over `α`, alternating between the trailing singular
/// subspace `C` and the least-squares `α_j = Σ_m C_jm (GC)_jm / Σ_m C_jm²`.
fn fit_alphas(green: &DMatrix<f64>, k: usize, start: &[f64]) -> Fit {
    let n = start.len();
    let mut alphas = start.to_vec();
    let mut energy = f64::INFINITY;
    for _ in 0..FIT_ITERATIONS {
        let (values, vectors) = ascending_svd(stacked_system(&alphas, green));
        let next: f64 = values[..k].iter().map(|s| s * s).sum();
        let basis = vectors.columns(0, k);
        let image = green * basis;
        for j in 0..n {
            let denom: f64 = basis.row(j).iter().map(|x| x * x).sum();
            if denom > 1e-300 {
                alphas[j] = basis.row(j).dot(&image.row(j)) / denom;
            }
        }
        let converged = energy - next <= 1e-12 * next;
        energy = next;
        if converged {
            break;
        }
    }
    let (values, _) = ascending_svd(stacked_system(&alphas, green));
    Fit { energy: energy.min(values[..k].iter().map(|s| s * s).sum()), alphas }
}

fn default_alphas(green: &DMatrix<f64>) -> Vec<f64> {
    let n = green.nrows();
    (0..n).map(|j| -green.row(j).sum() / (n - 1) as f64).collect()
}

/// Translates the centroid to the origin and rescales so that the minimum
/// pairwise distance is 1.
fn normalize(centers: &mut [Point]) {
    let n = centers.len() as f64;
    let centroid: Point = std::array::from_fn(|i| centers.iter().map(|p| p[i]).sum::<f64>() / n);
    let mut min = f64::INFINITY;
    for j in 0..centers.len() {
        for k in j + 1..centers.len() {
            min = min.min(distance(&centers[j], &centers[k]));
        }
    }
    let scale = if min > 0.0 && min.is_finite() { 1.0 / min } else { 1.0 };
    for p in centers.iter_mut() {
        *p = std::array::from_fn(|i| (p[i] - centroid[i]) * scale);
    }
}

fn diameter(centers: &[Point]) -> f64 {
    let mut d = 0.0f64;
    for j in 0..centers.len() {
        for k in j + 1..centers.len() {
            d = d.max(distance(&centers[j], &centers[k]));
        }
    }
    d
}

fn degenerate(centers: &[Point]) -> bool {
    for j in 0..centers.len() {
        for k in j + 1..centers.len() {
            let d = distance(&centers[j], &centers[k]);
            if d.is_nan() || d <= 1e-9 {
                return true;
            }
        }
    }
    false
}

struct PolishCost {
    n: usize,
    k: usize,
}

impl PolishCost {
    fn centers(&self, flat: &[f64]) -> Vec<Point> {
        let mut centers: Vec<Point> = (0..self.n).map(|j| [flat[3 * j], flat[3 * j + 1], flat[3 * j + 2]]).collect();
        normalize(&mut centers);
        centers
    }

    fn fit(&self, flat: &[f64]) -> Option<(Vec<Point>, Fit)> {
        let centers = self.centers(flat);
        if degenerate(&centers) {
            return None;
        }
        let green = green_matrix(&centers);
        let fit = fit_alphas(&green, self.k, &default_alphas(&green));
        Some((centers, fit))
    }
}

impl CostFunction for PolishCost {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, flat: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(match self.fit(flat) {
            Some((_, fit)) => (fit.energy + 1e-300).ln(),
            None => f64::INFINITY,
        })
    }
}

const POLISH_ROUNDS: usize = 6;
const POLISH_ITERATIONS: u64 = 1500;

/// Nelder–Mead on the flattened coordinates, restarted with a shrinking
/// simplex.
fn polish(centers: &[Point], k: usize) -> Vec<Point> {
    let cost = PolishCost { n: centers.len(), k };
    let mut best: Vec<f64> = centers.iter().flatten().copied().collect();
    let mut best_cost = cost.cost(&best).unwrap_or(f64::INFINITY);
    let mut size = 0.05;
    for _ in 0..POLISH_ROUNDS {
        let mut simplex = vec![best.clone()];
        for i in 0..best.len() {
            let mut p = best.clone();
            p[i] += size;
            simplex.push(p);
        }
        let Ok(solver) = NelderMead::new(simplex).with_sd_tolerance(1e-13) else {
            break;
        };
        let problem = PolishCost { n: cost.n, k };
        let Ok(result) = Executor::new(problem, solver)
            .configure(|s| s.max_iters(POLISH_ITERATIONS))
            .run()
        else {
            break;
        };
        let state = result.state();
        if let Some(p) = &state.best_param {
            if state.best_cost < best_cost {
                best_cost = state.best_cost;
                best = p.clone();
            }
        }
        size *= 0.1;
    }
    cost.centers(&best)
}

/// Outcome of one annealing stage.
#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub target: usize,
    pub energy: f64,
    pub e: usize,
    pub r: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub config: Configuration,
    pub e: usize,
    pub r: usize,
    pub stages: Vec<StageReport>,
}

/// Best configuration of a stage: centers, fitted `α`, classification.
fn classify(centers: &[Point], k: usize) -> Result<(Configuration, usize, usize, f64)> {
    let green = green_matrix(centers);
    let fit = fit_alphas(&green, k, &default_alphas(&green));
    let config = Configuration::new(centers.to_vec(), fit.alphas)?;
    let report = classify_zero_energy(&config, crate::DEFAULT_TOL);
    Ok((config, report.e, report.r, fit.energy))
}

/// Simulated annealing over center positions for configurations with a
/// large zero-eigenvalue multiplicity `e`.
///
/// Targets `k = N−1, …, 2` are attempted in turn from the same random start,
/// each with an equal share of the budget, until one is reached. The
/// objective for target `k` is the sum of the `k` smallest squared singular
/// values of `[Γ₀; 𝟙ᵀ/(4π)]` minimised over `α`. The minimum pairwise
/// distance is renormalised to 1 after every move. Deterministic in `seed`.
pub fn maximize_zero_multiplicity(n: usize, budget: usize, seed: u64) -> Result<SearchOutcome> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 centers, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<Point> = (0..n)
        .map(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
        .collect();
    normalize(&mut centers);

    let (mut best_config, mut best_e, mut best_r, energy) = classify(&centers, 1)?;
    let mut stages = vec![StageReport { target: 1, energy, e: best_e, r: best_r }];
    let targets: Vec<usize> = (2..n).rev().collect();
    let share = if targets.is_empty() { 0 } else { budget / targets.len() };

    for &k in &targets {
        if best_e >= k {
            break;
        }
        let annealed = anneal(&centers, k, share, &mut rng);
        let polished = polish(&annealed, k);
        let (config, e, r, energy) = classify(&polished, k)?;
        stages.push(StageReport { target: k, energy, e, r });
        if e > best_e {
            best_e = e;
            best_r = r;
            best_config = config;
        }
    }
    Ok(SearchOutcome { config: best_config, e: best_e, r: best_r, stages })
}

const COOLING_RANGE: f64 = 1e-8;

fn anneal(start: &[Point], k: usize, iterations: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let n = start.len();
    let mut current = start.to_vec();
    let green = green_matrix(&current);
    let mut fit = fit_alphas(&green, k, &default_alphas(&green));
    let mut best = (current.clone(), fit.energy);
    let t0 = fit.energy.max(1e-12) * 0.1;
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    for it in 0..iterations {
        let progress = it as f64 / iterations.max(1) as f64;
        let temperature = t0 * COOLING_RANGE.powf(progress);
        let step = 0.1 * diameter(&current) * (temperature / t0).sqrt().max(1e-4);
        let j = rng.random_range(0..n);
        let mut proposal = current.clone();
        for coordinate in proposal[j].iter_mut() {
            *coordinate += step * unit.sample(rng);
        }
        normalize(&mut proposal);
        if degenerate(&proposal) {
            continue;
        }
        let g = green_matrix(&proposal);
        let candidate = fit_alphas(&g, k, &fit.alphas);
        let delta = candidate.energy - fit.energy;
        if delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp() {
            current = proposal;
            fit = candidate;
            if fit.energy < best.1 {
                best = (current.clone(), fit.energy);
            }
        }
    }
    best.0
}

/// Smallest singular value of `Γ(z)` over a real grid.
#[derive(Debug, Clone, Serialize)]
pub struct RealAxisScan {
    pub min_singular_value: f64,
    pub location: f64,
    /// `(z, σ_min(Γ(z)))` for every grid point.
    pub samples: Vec<(f64, f64)>,
}

pub fn scan_real_axis(config: &Configuration, z_min: f64, z_max: f64, points: usize) -> Result<RealAxisScan> {
    if !(z_min > 0.0 && z_max > z_min && z_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 0 < z_min < z_max, got [{z_min}, {z_max}]")));
    }
    if points < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 grid points, got {points}")));
    }
    let samples: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let z = z_min + (z_max - z_min) * i as f64 / (points - 1) as f64;
            let sv = singular_values(&gamma_matrix(config, C64::from(z)));
            (z, sv[sv.len() - 1])
        })
        .collect();
    let (location, min_singular_value) = samples
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least two samples");
    Ok(RealAxisScan { min_singular_value, location, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry;

    fn unwrap_all(a: Vec<Option<f64>>) -> Vec<f64> {
        a.into_iter().map(|x| x.unwrap()).collect()
    }

    #[test]
    fn alpha_for_pair_eigenvector() {
        let y = [[0.0; 3], [1.0, 0.0, 0.0]];
        let a = unwrap_all(solve_alpha_for_kernel(&y, &[1.0, -1.0]).unwrap());
        for x in a {
            assert!((x + 1.0 / (4.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn alpha_for_triangle_eigenvector() {
        let y = registry::get("equilateral_triangle", &[1.0]).unwrap().centers;
        let a = unwrap_all(solve_alpha_for_kernel(&y, &[1.0, 1.0, -2.0]).unwrap());
        for x in a {
            assert!((x + 1.0 / (4.0 * PI)).abs() < 1e-14);
        }
    }

    #[test]
    fn alpha_for_pair_resonance() {
        let y = vec![[0.0; 3], [1.0, 0.0, 0.0]];
        let a = unwrap_all(solve_alpha_for_kernel(&y, &[1.0, 1.0]).unwrap());
        for x in &a {
            assert!((x - 1.0 / (4.0 * PI)).abs() < 1e-15);
        }
        let report = classify_zero_energy(&Configuration::new(y, a).unwrap(), 1e-10);
        assert_eq!((report.e, report.r), (0, 1));
    }

    #[test]
    fn zero_components() {
        // Middle of a symmetric collinear triple: Σ c_k/(4πr) cancels.
        let y = [[-1.0, 0.0, 0.0], [0.0; 3], [1.0, 0.0, 0.0]];
        let a = solve_alpha_for_kernel(&y, &[1.0, 0.0, -1.0]).unwrap();
        assert!(a[1].is_none() && a[0].is_some());
        let skew = [[-1.0, 0.0, 0.0], [0.0; 3], [2.0, 0.0, 0.0]];
        assert!(matches!(
            solve_alpha_for_kernel(&skew, &[1.0, 0.0, -1.0]),
            Err(Error::InconsistentZeroComponent(1, _))
        ));
    }

    #[test]
    fn fit_recovers_simplex_couplings() {
        let y = registry::get("tetrahedron", &[1.0]).unwrap().centers;
        let g = green_matrix(&y);
        let fit = fit_alphas(&g, 3, &default_alphas(&g));
        assert!(fit.energy < 1e-28);
        for a in fit.alphas {
            assert!((a + 1.0 / (4.0 * PI)).abs() < 1e-14);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let a = maximize_zero_multiplicity(3, 500, 11).unwrap();
        let b = maximize_zero_multiplicity(3, 500, 11).unwrap();
        assert_eq!(a.config, b.config);
        assert_eq!((a.e, a.r), (b.e, b.r));
    }

    #[test]
    fn search_finds_triangle() {
        let out = maximize_zero_multiplicity(3, 10_000, 1).unwrap();
        assert_eq!(out.e, 2, "{:?}", out.stages);
        assert!(out.e <= 2);
    }

    #[test]
    fn pair_needs_no_search() {
        let out = maximize_zero_multiplicity(2, 100, 0).unwrap();
        assert_eq!(out.e, 1);
        assert!(maximize_zero_multiplicity(1, 100, 0).is_err());
    }

    #[test]
    fn scan_single_resonance() {
        let c = registry::get("single", &[0.0]).unwrap();
        let s = scan_real_axis(&c, 0.01, 10.0, 1000).unwrap();
        assert!((s.min_singular_value - 0.01 / (4.0 * PI)).abs() < 1e-15);
        assert_eq!(s.location, 0.01);
        assert!(scan_real_axis(&c, 0.0, 1.0, 10).is_err());
        assert!(scan_real_axis(&c, 1.0, 2.0, 1).is_err());
    }
}
