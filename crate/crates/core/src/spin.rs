//! Boltzmann spin ensembles and their `u_k` interdependence profiles.
//!
//! Each system draws i.i.d. Gaussian couplings, enumerates all `2^n` spin
//! states exactly, and records `u_1..u_{n-1}`. Three coupling regimes are
//! generated per run: ferromagnetic (mean `+mu`), weak (mean 0) and
//! frustrated (mean `-mu`). PCA over the pooled profiles yields two loading
//! vectors that define the PC1/PC2 metrics.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{from_u_basis, EntropyExpression, UBasisVector};
use crate::dist::{JointDistribution, LogBase};
use crate::error::{Error, Result};
use crate::pca::{pca, PcaResult};
use crate::rational::approximate;

/// Exact enumeration limit.
pub const MAX_SPINS: usize = 12;

/// Identifies the random stream used for couplings; recorded in the manifest.
pub const PRNG_NAME: &str =
    "ChaCha8Rng seeded by splitmix64(seed, condition, system); rand_distr::Normal";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinEnsembleConfig {
    pub n: usize,
    pub beta: f64,
    /// Coupling mean of the ferromagnetic regime; the frustrated regime uses `-mu`.
    pub mu: f64,
    pub sigma2: f64,
    pub systems_per_condition: usize,
    pub seed: u64,
    /// Maximum relative mirror deviation accepted for PC1 (symmetric) and PC2 (skew).
    pub symmetry_tolerance: f64,
    /// Minimum variance share of PC1 + PC2.
    pub variance_threshold: f64,
}

impl Default for SpinEnsembleConfig {
    fn default() -> Self {
        SpinEnsembleConfig {
            n: 8,
            beta: 1.0,
            mu: 5.0,
            sigma2: 2.0,
            systems_per_condition: 10,
            seed: 42,
            symmetry_tolerance: 0.25,
            variance_threshold: 0.9,
        }
    }
}

impl SpinEnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_SPINS {
            return Err(Error::invalid(format!(
                "n={} outside 2..={MAX_SPINS}",
                self.n
            )));
        }
        if !self.sigma2.is_finite() || self.sigma2 < 0.0 {
            return Err(Error::invalid(format!(
                "sigma2={} must be finite and >= 0",
                self.sigma2
            )));
        }
        if !self.beta.is_finite() || !self.mu.is_finite() {
            return Err(Error::invalid("beta and mu must be finite"));
        }
        if self.systems_per_condition == 0 {
            return Err(Error::invalid("systems_per_condition must be at least 1"));
        }
        Ok(())
    }

    pub fn coupling_mean(&self, condition: Condition) -> f64 {
        match condition {
            Condition::Ferromagnetic => self.mu,
            Condition::Weak => 0.0,
            Condition::Frustrated => -self.mu,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Ferromagnetic,
    Weak,
    Frustrated,
}

impl Condition {
    pub const ALL: [Condition; 3] = [
        Condition::Ferromagnetic,
        Condition::Weak,
        Condition::Frustrated,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Ferromagnetic => "ferromagnetic",
            Condition::Weak => "weak",
            Condition::Frustrated => "frustrated",
        }
    }

    fn index(self) -> u64 {
        match self {
            Condition::Ferromagnetic => 0,
            Condition::Weak => 1,
            Condition::Frustrated => 2,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Symmetric coupling matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix {
    n: usize,
    values: Vec<f64>,
}

impl CouplingMatrix {
    /// Builds from the upper triangle, row by row: `J_12, J_13, ..., J_{n-1,n}`.
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != n * (n.saturating_sub(1)) / 2 {
            return Err(Error::DimensionMismatch {
                expected: n * (n.saturating_sub(1)) / 2,
                found: upper.len(),
            });
        }
        let mut values = vec![0.0; n * n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = *it.next().expect("length checked");
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Ok(CouplingMatrix { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `J_ij` with 0-based spin indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn system_seed(seed: u64, condition: Condition, system: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ condition.index()) ^ system as u64)
}

/// Draws the couplings of one system; pairs are consumed in upper-triangle order.
pub fn sample_couplings(
    config: &SpinEnsembleConfig,
    condition: Condition,
    system: usize,
) -> CouplingMatrix {
    let n = config.n;
    let mean = config.coupling_mean(condition);
    let pairs = n * (n - 1) / 2;
    let upper: Vec<f64> = if config.sigma2 == 0.0 {
        vec![mean; pairs]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(system_seed(config.seed, condition, system));
        let normal = Normal::new(mean, config.sigma2.sqrt()).expect("finite, nonnegative std dev");
        (0..pairs).map(|_| normal.sample(&mut rng)).collect()
    };
    CouplingMatrix::from_upper(n, &upper).expect("pair count matches n")
}

/// Energy `-(2 / (n(n-1))) Σ_{i<j} J_ij x_i x_j` of spins encoded as bits (0 ↦ -1, 1 ↦ +1).
pub fn energy(j: &CouplingMatrix, bits: u32) -> f64 {
    let n = j.n();
    let spin = |i: usize| if bits >> i & 1 == 1 { 1.0 } else { -1.0 };
    let mut sum = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            sum += j.get(a, b) * spin(a) * spin(b);
        }
    }
    -2.0 / (n * (n - 1)) as f64 * sum
}

/// Exact Boltzmann distribution `e^{-βH(x)}/Z` over `{-1,+1}^n`, encoded as symbols `{0,1}`.
pub fn boltzmann_distribution(j: &CouplingMatrix, beta: f64) -> Result<JointDistribution> {
    let n = j.n();
    if n == 0 || n > MAX_SPINS {
        return Err(Error::invalid(format!("n={n} outside 1..={MAX_SPINS}")));
    }
    let energies: Vec<f64> = (0u32..1 << n).map(|s| energy(j, s)).collect();
    let lowest = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights = energies.iter().enumerate().map(|(s, &e)| {
        let state: Vec<u32> = (0..n).map(|i| (s as u32 >> i) & 1).collect();
        (state, (-beta * (e - lowest)).exp())
    });
    JointDistribution::from_weights(vec![2; n], weights)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRow {
    pub condition: Condition,
    pub system_id: usize,
    pub u: Vec<f64>,
}

/// `u_k` profiles for every system, ferromagnetic then weak then frustrated.
pub fn run_ensemble(config: &SpinEnsembleConfig) -> Result<Vec<EnsembleRow>> {
    config.validate()?;
    let jobs: Vec<(Condition, usize)> = Condition::ALL
        .iter()
        .flat_map(|&c| (0..config.systems_per_condition).map(move |s| (c, s)))
        .collect();
    jobs.par_iter()
        .map(|&(condition, system_id)| {
            let j = sample_couplings(config, condition, system_id);
            let d = boltzmann_distribution(&j, config.beta)?;
            let u = d.entropy_table(LogBase::Two).u_values()?;
            Ok(EnsembleRow {
                condition,
                system_id,
                u: u.values,
            })
        })
        .collect()
}

/// `Σ_k w_k u_k` with loadings rounded to a 1e-12 rational grid.
pub fn pc_metric(loadings: &[f64]) -> Result<EntropyExpression> {
    let n = loadings.len() + 1;
    let c = loadings.iter().map(|&w| approximate(w, 1e-12)).collect();
    Ok(from_u_basis(&UBasisVector::new(n, c)?))
}

/// `max_k |v_k - v_{n-k}| / max_k |v_k|`: zero for exactly mirror-symmetric vectors.
pub fn symmetry_deviation(v: &[f64]) -> f64 {
    mirror_deviation(v, -1.0)
}

/// `max_k |v_k + v_{n-k}| / max_k |v_k|`: zero for exactly skew vectors.
pub fn skew_deviation(v: &[f64]) -> f64 {
    mirror_deviation(v, 1.0)
}

fn mirror_deviation(v: &[f64], sign: f64) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let m = v.len();
    (0..m)
        .map(|k| (v[k] + sign * v[m - 1 - k]).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Whether two planar point sets admit a strictly separating line.
///
/// A separating direction, if any, lies in an open arc of angles bounded by
/// normals of point-pair differences, so testing the midpoints between
/// consecutive critical angles is exhaustive.
pub fn linearly_separable(a: &[[f64; 2]], b: &[[f64; 2]]) -> bool {
    if a.is_empty() || b.is_empty() {
        return true;
    }
    let pts: Vec<[f64; 2]> = a.iter().chain(b).copied().collect();
    let tau = std::f64::consts::TAU;
    let mut angles = vec![0.0];
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            let normal = dy.atan2(dx) + std::f64::consts::FRAC_PI_2;
            angles.push(normal.rem_euclid(tau));
            angles.push((normal + std::f64::consts::PI).rem_euclid(tau));
        }
    }
    angles.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    angles.dedup();
    let separates = |theta: f64| {
        let (c, s) = (theta.cos(), theta.sin());
        let proj = |p: &[f64; 2]| p[0] * c + p[1] * s;
        let max_a = a.iter().map(proj).fold(f64::NEG_INFINITY, f64::max);
        let min_b = b.iter().map(proj).fold(f64::INFINITY, f64::min);
        max_a < min_b
    };
    (0..angles.len()).any(|i| {
        let next = if i + 1 < angles.len() {
            angles[i + 1]
        } else {
            angles[0] + tau
        };
        separates((angles[i] + next) / 2.0)
    })
}

/// Everything one run produces.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub config: SpinEnsembleConfig,
    pub rows: Vec<EnsembleRow>,
    pub pca: PcaResult,
}

impl ExperimentOutput {
    /// PC scores of the systems in one condition.
    pub fn scores_for(&self, condition: Condition) -> Vec<[f64; 2]> {
        self.rows
            .iter()
            .zip(&self.pca.scores)
            .filter(|(r, _)| r.condition == condition)
            .map(|(_, s)| *s)
            .collect()
    }
}

/// Ensemble followed by PCA of the pooled `u_k` rows.
pub fn run_experiment(config: &SpinEnsembleConfig) -> Result<ExperimentOutput> {
    let rows = run_ensemble(config)?;
    let data: Vec<Vec<f64>> = rows.iter().map(|r| r.u.clone()).collect();
    let pca = pca(&data)?;
    Ok(ExperimentOutput {
        config: config.clone(),
        rows,
        pca,
    })
}

/// Run metadata written next to the CSV outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: SpinEnsembleConfig,
    pub seed: u64,
    pub prng: String,
    pub version: String,
    pub explained_variance: Vec<f64>,
}

pub fn version_string() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)
}

/// Writes `u_profiles.csv`, `loadings.csv`, `scores.csv` and `manifest.json` into `dir`.
pub fn emit_results(out: &ExperimentOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    if out.rows.len() != out.pca.scores.len() {
        return Err(Error::DimensionMismatch {
            expected: out.rows.len(),
            found: out.pca.scores.len(),
        });
    }
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let m = out.config.n - 1;

    let mut profiles = String::from("condition,system_id");
    for k in 1..=m {
        profiles.push_str(&format!(",u{k}"));
    }
    profiles.push('\n');
    for r in &out.rows {
        profiles.push_str(&format!("{},{}", r.condition, r.system_id));
        for v in &r.u {
            profiles.push_str(&format!(",{v}"));
        }
        profiles.push('\n');
    }

    let mut loadings = String::from("k,pc1,pc2\n");
    for k in 0..m {
        loadings.push_str(&format!(
            "{},{},{}\n",
            k + 1,
            out.pca.pc1()[k],
            out.pca.pc2()[k]
        ));
    }

    let mut scores = String::from("condition,system_id,pc1,pc2\n");
    for (r, s) in out.rows.iter().zip(&out.pca.scores) {
        scores.push_str(&format!(
            "{},{},{},{}\n",
            r.condition, r.system_id, s[0], s[1]
        ));
    }

    let manifest = Manifest {
        config: out.config.clone(),
        seed: out.config.seed,
        prng: PRNG_NAME.to_string(),
        version: version_string(),
        explained_variance: out.pca.explained_variance.clone(),
    };
    let manifest = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";

    let files = [
        ("u_profiles.csv", profiles),
        ("loadings.csv", loadings),
        ("scores.csv", scores),
        ("manifest.json", manifest),
    ];
    let mut paths = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        write_file(&path, &contents)?;
        paths.push(path);
    }
    Ok(paths)
}
