//! Parameter-sweep harness: drive the build → eigensolve → fidelity
//! pipeline across a grid of lattice parameters and export the per-point
//! results as CSV files plus a JSON manifest.
//!
//! Grid points are independent and evaluated in parallel; records are
//! always assembled in grid order, so parallel and serial runs of the same
//! sweep write identical files.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cluster::{kmeans, silhouette_score, ClusterError, KmeansParams};
use crate::eigen::{eig_default, EigError, Spectrum};
use crate::ep::{default_nilpotency_tol, ep_report, EpReport};
use crate::fidelity::{
    default_epsilon, feature_vectors, fidelity_matrix, offdiagonal_set, select_references,
    FidelityError,
};
use crate::io::{ensure_dir, fmt_real, write_file, OutputError};
use crate::lattice::{build_hamiltonian, profile_staggered, LatticeError, LatticeSpec};
use crate::real::Real;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep grid must be nonempty and strictly ascending")]
    BadGrid,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("eigensolver failed at grid value {parameter}: {source}")]
    Solver {
        parameter: f64,
        #[source]
        source: EigError,
    },
    #[error("at grid value {parameter}: {source}")]
    Fidelity {
        parameter: f64,
        #[source]
        source: FidelityError,
    },
    #[error("at grid value {parameter}: {source}")]
    Cluster {
        parameter: f64,
        #[source]
        source: ClusterError,
    },
    #[error(transparent)]
    Output(#[from] OutputError),
}

/// Which lattice parameter the grid varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// `γ_n = (-1)^n · γ` with `γ` the grid value.
    GammaStaggered,
    /// `t'_n = g · t_n` with `g` the grid value.
    BackwardScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceStage<T> {
    pub epsilon: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KmeansStage {
    pub k: usize,
    pub seed: u64,
}

/// Optional pipeline stages appended to the unconditional
/// build → eigensolve → fidelity core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct PipelineSpec<T> {
    pub densities: bool,
    pub fidelity_set: bool,
    pub references: Option<ReferenceStage<T>>,
    pub kmeans: Option<KmeansStage>,
    pub ep_report: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec<T> {
    pub base: LatticeSpec<T>,
    pub parameter: SweepParameter,
    /// Strictly ascending grid of parameter values.
    pub grid: Vec<T>,
    pub pipeline: PipelineSpec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KmeansSummary<T> {
    pub k: usize,
    pub seed: u64,
    pub inertia: T,
    pub iterations_run: usize,
    pub assignments: Vec<usize>,
    pub silhouette: Option<T>,
}

/// Everything computed at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord<T> {
    pub parameter: T,
    /// Off-diagonal fidelities in lexicographic `(n, m)` order,
    /// `N(N−1)/2` values.
    pub offdiagonal_fidelities: Vec<T>,
    pub densities: Option<Vec<Vec<T>>>,
    /// 0-based reference indices.
    pub references: Option<Vec<usize>>,
    pub kmeans: Option<KmeansSummary<T>>,
    pub ep: Option<EpReport<T>>,
}

#[derive(Debug, Clone)]
pub struct SweepResult<T> {
    pub spec: SweepSpec<T>,
    pub records: Vec<SweepRecord<T>>,
}

/// Instantiate the lattice at one grid value.
pub fn materialize<T: Real>(
    base: &LatticeSpec<T>,
    parameter: SweepParameter,
    value: T,
) -> LatticeSpec<T> {
    let mut spec = base.clone();
    match parameter {
        SweepParameter::GammaStaggered => {
            spec.gain_loss = profile_staggered(spec.n_sites, value);
        }
        SweepParameter::BackwardScale => {
            spec.backward_hops = spec.forward_hops.iter().map(|&t| t * value).collect();
        }
    }
    spec
}

/// Row `j` is the site density `|ψ_(j),n|²` of sorted eigenstate `j`,
/// normalized so each row sums to one.
pub fn density_table<T: Real>(s: &Spectrum<T>) -> Vec<Vec<T>> {
    s.eigenvectors
        .iter()
        .map(|v| {
            let total: T = v.iter().map(|z| z.norm_sqr()).sum();
            v.iter().map(|z| z.norm_sqr() / total).collect()
        })
        .collect()
}

/// Minimum of the off-diagonal fidelity set per grid point.
pub fn min_fidelity_curve<T: Real>(result: &SweepResult<T>) -> Vec<(T, T)> {
    result
        .records
        .iter()
        .map(|rec| {
            let min = rec
                .offdiagonal_fidelities
                .iter()
                .copied()
                .fold(T::infinity(), |a, b| a.min(b));
            (rec.parameter, min)
        })
        .collect()
}

fn run_point<T: Real>(spec: &SweepSpec<T>, value: T) -> Result<SweepRecord<T>, SweepError> {
    let pf = value.to_f64();
    let lattice = materialize(&spec.base, spec.parameter, value);
    let h = build_hamiltonian(&lattice)?;
    let s = eig_default(&h).map_err(|source| SweepError::Solver {
        parameter: pf,
        source,
    })?;
    let f = fidelity_matrix(&s);

    let offdiagonal_fidelities = offdiagonal_set(&f);
    let densities = spec.pipeline.densities.then(|| density_table(&s));

    let needs_refs = spec.pipeline.references.is_some() || spec.pipeline.kmeans.is_some();
    let references = needs_refs.then(|| {
        let epsilon = spec
            .pipeline
            .references
            .map(|r| r.epsilon)
            .unwrap_or_else(default_epsilon);
        select_references(&f, epsilon)
    });

    let kmeans_summary = match (spec.pipeline.kmeans, &references) {
        (Some(stage), Some(refs)) => {
            let features =
                feature_vectors(&f, refs).map_err(|source| SweepError::Fidelity {
                    parameter: pf,
                    source,
                })?;
            let model = kmeans(&features, stage.k, stage.seed, KmeansParams::default()).map_err(
                |source| SweepError::Cluster {
                    parameter: pf,
                    source,
                },
            )?;
            let silhouette = silhouette_score(&features, &model).ok();
            Some(KmeansSummary {
                k: model.k,
                seed: model.seed,
                inertia: model.inertia,
                iterations_run: model.iterations_run,
                assignments: model.assignments,
                silhouette,
            })
        }
        _ => None,
    };

    let ep = spec
        .pipeline
        .ep_report
        .then(|| ep_report(&h, &s, &f, default_nilpotency_tol()));

    Ok(SweepRecord {
        parameter: value,
        offdiagonal_fidelities,
        densities,
        references,
        kmeans: kmeans_summary,
        ep,
    })
}

/// Evaluate every grid point (in parallel) and collect records in grid
/// order. Eigensolver failures carry the offending grid value.
pub fn run_sweep<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>, SweepError> {
    if spec.grid.is_empty() || spec.grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(SweepError::BadGrid);
    }
    spec.base.validate()?;
    let records: Vec<Result<SweepRecord<T>, SweepError>> = spec
        .grid
        .par_iter()
        .map(|&value| run_point(spec, value))
        .collect();
    let mut out = Vec::with_capacity(records.len());
    for record in records {
        out.push(record?);
    }
    Ok(SweepResult {
        spec: spec.clone(),
        records: out,
    })
}

// ── file output ─────────────────────────────────────────────────────

impl<T: Real + Serialize> SweepResult<T> {
    /// Write one CSV per enabled stage plus `manifest.json` into `dir`.
    /// Returns the file names written.
    pub fn write_csvs(&self, dir: &std::path::Path, force: bool) -> Result<Vec<String>, SweepError> {
        ensure_dir(dir).map_err(SweepError::Output)?;
        let mut files: Vec<String> = Vec::new();
        let mut emit = |name: &str, contents: String| -> Result<(), SweepError> {
            write_file(&dir.join(name), &contents, force).map_err(SweepError::Output)?;
            files.push(name.to_string());
            Ok(())
        };

        if self.spec.pipeline.fidelity_set {
            let n = self.spec.base.n_sites;
            let mut csv = String::from("parameter,n,m,fidelity\n");
            for rec in &self.records {
                let mut idx = 0usize;
                for i in 1..=n {
                    for j in i + 1..=n {
                        csv.push_str(&format!(
                            "{},{},{},{}\n",
                            fmt_real(rec.parameter),
                            i,
                            j,
                            fmt_real(rec.offdiagonal_fidelities[idx])
                        ));
                        idx += 1;
                    }
                }
            }
            emit("fidelity_set.csv", csv)?;

            let mut csv = String::from("parameter,min_fidelity\n");
            for (p, min) in min_fidelity_curve(self) {
                csv.push_str(&format!("{},{}\n", fmt_real(p), fmt_real(min)));
            }
            emit("min_fidelity.csv", csv)?;
        }

        if self.spec.pipeline.densities {
            let mut csv = String::from("parameter,state,site,density\n");
            for rec in &self.records {
                if let Some(table) = &rec.densities {
                    for (j, row) in table.iter().enumerate() {
                        for (n, &d) in row.iter().enumerate() {
                            csv.push_str(&format!(
                                "{},{},{},{}\n",
                                fmt_real(rec.parameter),
                                j + 1,
                                n + 1,
                                fmt_real(d)
                            ));
                        }
                    }
                }
            }
            emit("densities.csv", csv)?;
        }

        if self.spec.pipeline.references.is_some() {
            let mut csv = String::from("parameter,reference\n");
            for rec in &self.records {
                if let Some(refs) = &rec.references {
                    for &r in refs {
                        csv.push_str(&format!("{},{}\n", fmt_real(rec.parameter), r + 1));
                    }
                }
            }
            emit("references.csv", csv)?;
        }

        if self.spec.pipeline.kmeans.is_some() {
            let mut summary = String::from("parameter,k,seed,iterations,inertia,silhouette\n");
            let mut assignments = String::from("parameter,state,cluster\n");
            for rec in &self.records {
                if let Some(km) = &rec.kmeans {
                    summary.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        fmt_real(rec.parameter),
                        km.k,
                        km.seed,
                        km.iterations_run,
                        fmt_real(km.inertia),
                        km.silhouette.map(fmt_real).unwrap_or_default()
                    ));
                    for (state, &cluster) in km.assignments.iter().enumerate() {
                        assignments.push_str(&format!(
                            "{},{},{}\n",
                            fmt_real(rec.parameter),
                            state + 1,
                            cluster
                        ));
                    }
                }
            }
            emit("kmeans_summary.csv", summary)?;
            emit("kmeans_assignments.csv", assignments)?;
        }

        if self.spec.pipeline.ep_report {
            let mut csv =
                String::from("parameter,nilpotency_index,min_eigenvalue_gap,max_pair_fidelity\n");
            for rec in &self.records {
                if let Some(ep) = &rec.ep {
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        fmt_real(rec.parameter),
                        ep.nilpotency_index
                            .map(|m| m.to_string())
                            .unwrap_or_default(),
                        fmt_real(ep.min_eigenvalue_gap),
                        fmt_real(ep.max_pair_fidelity)
                    ));
                }
            }
            emit("ep.csv", csv)?;
        }

        let manifest = serde_json::json!({
            "spec": serde_json::to_value(&self.spec).expect("spec serializes"),
            "created": chrono::Utc::now().to_rfc3339(),
            "version": env!("CARGO_PKG_VERSION"),
            "records": self.records.len(),
            "files": files,
        });
        write_file(
            &dir.join("manifest.json"),
            &format!("{:#}\n", manifest),
            force,
        )
        .map_err(SweepError::Output)?;
        files.push("manifest.json".to_string());
        Ok(files)
    }
}

/// Inclusive range expansion for `start:stop:step` grids.
pub fn expand_range<T: Real>(start: T, stop: T, step: T) -> Result<Vec<T>, SweepError> {
    if !(step > T::zero()) || stop < start {
        return Err(SweepError::BadGrid);
    }
    let count = ((stop - start) / step).to_f64().round() as usize;
    let mut grid: Vec<T> = (0..=count)
        .map(|i| start + step * T::from_f64(i as f64))
        .collect();
    let slack = step * T::from_f64(1e-9);
    grid.retain(|&v| v <= stop + slack);
    if grid.is_empty() {
        return Err(SweepError::BadGrid);
    }
    Ok(grid)
}
