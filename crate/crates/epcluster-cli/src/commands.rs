//! The six pipeline subcommands. Each parses its configuration, runs the
//! corresponding library stages, and writes its artifacts into the output
//! directory (refusing to overwrite without `--force`).

use std::path::Path;

use num_complex::Complex;

use epcluster::cluster::{kmeans, silhouette_score, KmeansParams};
use epcluster::dynamics::{expand, time_trace, WavePacket};
use epcluster::eigen::{eig, default_deflation_tol, Spectrum};
use epcluster::ep::{default_nilpotency_tol, ep_report};
use epcluster::fidelity::{
    default_epsilon, feature_vectors, fidelity_matrix, select_references, FidelityMatrix,
};
use epcluster::io::{ensure_dir, fmt_real, write_file};
use epcluster::lattice::{build_hamiltonian, Hamiltonian, LatticeSpec};
use epcluster::sweep::{run_sweep, PipelineSpec, SweepParameter, SweepSpec};

use crate::config::{expand_grid, GridConfig, InitialPacket, RunConfig};
use crate::{CliError, CommonArgs};

fn solve(
    spec: &LatticeSpec<f64>,
    tol: Option<f64>,
) -> Result<(Hamiltonian<f64>, Spectrum<f64>), CliError> {
    let h = build_hamiltonian(spec)?;
    let s = eig(&h, tol.unwrap_or_else(default_deflation_tol)).map_err(CliError::from)?;
    Ok((h, s))
}

fn densities_csv(s: &Spectrum<f64>) -> String {
    let n = s.dim;
    let mut csv = String::from("state");
    for site in 1..=n {
        csv.push_str(&format!(",site_{site}"));
    }
    csv.push('\n');
    for (j, row) in epcluster::sweep::density_table(s).iter().enumerate() {
        csv.push_str(&(j + 1).to_string());
        for &d in row {
            csv.push(',');
            csv.push_str(&fmt_real(d));
        }
        csv.push('\n');
    }
    csv
}

/// `spectrum`: eigendecomposition + per-state site densities.
pub fn cmd_spectrum(args: &CommonArgs, config: &RunConfig) -> Result<(), CliError> {
    let spec = config.lattice_spec(&args.config)?;
    let (_, s) = solve(&spec, config.tol.or(args.tol))?;
    ensure_dir(&args.out)?;
    write_file(
        &args.out.join("spectrum.json"),
        &format!("{:#}\n", s.to_json()),
        args.force,
    )?;
    write_file(&args.out.join("densities.csv"), &densities_csv(&s), args.force)?;
    Ok(())
}

fn resolve_references(
    config: &RunConfig,
    args: &CommonArgs,
    f: &FidelityMatrix<f64>,
) -> Result<(Vec<usize>, f64), CliError> {
    let epsilon = args
        .epsilon
        .or(config.epsilon)
        .unwrap_or_else(default_epsilon);
    if !(0.0..1.0).contains(&epsilon) {
        return Err(CliError::config(format!(
            "epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    match config.reference_indices(f.dim())? {
        Some(explicit) => Ok((explicit, epsilon)),
        None => Ok((select_references(f, epsilon), epsilon)),
    }
}

/// `fidelity`: pairwise fidelity matrix, reference selection, features.
pub fn cmd_fidelity(args: &CommonArgs, config: &RunConfig) -> Result<(), CliError> {
    let spec = config.lattice_spec(&args.config)?;
    let (_, s) = solve(&spec, config.tol.or(args.tol))?;
    let f = fidelity_matrix(&s);
    let (refs, epsilon) = resolve_references(config, args, &f)?;
    let features = feature_vectors(&f, &refs)?;

    ensure_dir(&args.out)?;
    write_file(&args.out.join("fidelity.csv"), &f.to_csv(), args.force)?;
    write_file(
        &args.out.join("features.csv"),
        &features.to_csv(None),
        args.force,
    )?;
    let references = serde_json::json!({
        "epsilon": epsilon,
        "indices": refs.iter().map(|r| r + 1).collect::<Vec<_>>(),
        "achieved_orthogonality": features.orthogonality_threshold,
    });
    write_file(
        &args.out.join("references.json"),
        &format!("{:#}\n", references),
        args.force,
    )?;
    Ok(())
}

/// `cluster`: k-means over the fidelity feature space.
pub fn cmd_cluster(args: &CommonArgs, config: &RunConfig) -> Result<(), CliError> {
    let k = args
        .k
        .or(config.k)
        .ok_or_else(|| CliError::config("cluster requires --k (or \"k\" in the config)".into()))?;
    let seed = args.seed.or(config.seed).unwrap_or(0);

    let spec = config.lattice_spec(&args.config)?;
    let (_, s) = solve(&spec, config.tol.or(args.tol))?;
    if k > s.dim {
        return Err(CliError::config(format!(
            "k exceeds state count ({k} > {})",
            s.dim
        )));
    }
    let f = fidelity_matrix(&s);
    let (refs, _) = resolve_references(config, args, &f)?;
    let features = feature_vectors(&f, &refs)?;
    let model = kmeans(&features, k, seed, KmeansParams::default())?;
    let silhouette = silhouette_score(&features, &model).ok();

    let mut json = model.to_json();
    json["silhouette"] = silhouette
        .map(serde_json::Value::from)
        .unwrap_or(serde_json::Value::Null);
    json["references"] = refs.iter().map(|r| r + 1).collect::<Vec<_>>().into();

    ensure_dir(&args.out)?;
    write_file(
        &args.out.join("cluster.json"),
        &format!("{:#}\n", json),
        args.force,
    )?;
    write_file(
        &args.out.join("labeled_features.csv"),
        &features.to_csv(Some(("cluster", &model.assignments))),
        args.force,
    )?;
    Ok(())
}

/// `sweep`: run the pipeline over a parameter grid and export stage CSVs.
pub fn cmd_sweep(args: &CommonArgs, config: &RunConfig) -> Result<(), CliError> {
    let base = config.lattice_spec(&args.config)?;
    let parameter = config.parameter.unwrap_or(SweepParameter::GammaStaggered);
    let grid_config = args
        .grid
        .clone()
        .or_else(|| config.grid.clone())
        .ok_or_else(|| CliError::config("sweep requires --grid (or \"grid\" in the config)".into()))?;
    let grid = expand_grid(&grid_config)?;

    let mut pipeline = config.pipeline.unwrap_or(PipelineSpec {
        fidelity_set: true,
        ..Default::default()
    });
    if let Some(stage) = pipeline.kmeans.as_mut() {
        if let Some(k) = args.k {
            stage.k = k;
        }
        if let Some(seed) = args.seed {
            stage.seed = seed;
        }
    }

    let spec = SweepSpec {
        base,
        parameter,
        grid,
        pipeline,
    };
    let result = run_with_workers(args.workers, || run_sweep(&spec))?;
    result.write_csvs(&args.out, args.force)?;
    Ok(())
}

fn run_with_workers<T>(
    workers: Option<usize>,
    job: impl FnOnce() -> Result<T, epcluster::sweep::SweepError> + Send,
) -> Result<T, CliError>
where
    T: Send,
{
    let workers = workers.or_else(|| {
        std::env::var("EPCLUSTER_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    match workers {
        None | Some(0) => job().map_err(CliError::from),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::config(format!("cannot build {n}-worker pool: {e}")))?;
            pool.install(job).map_err(CliError::from)
        }
    }
}

/// `ep`: exceptional-point report (nilpotency, gap, fidelity ceiling,
/// base state). `--tol` sets the nilpotency tolerance.
pub fn cmd_ep(args: &CommonArgs, config: &RunConfig) -> Result<(), CliError> {
    let spec = config.lattice_spec(&args.config)?;
    let (h, s) = solve(&spec, None)?;
    let f = fidelity_matrix(&s);
    let tol = config
        .tol
        .or(args.tol)
        .unwrap_or_else(default_nilpotency_tol);
    if !(tol > 0.0) {
        return Err(CliError::config(format!("tol must be positive, got {tol}")));
    }
    let report = ep_report(&h, &s, &f, tol);
    ensure_dir(&args.out)?;
    write_file(
        &args.out.join("ep.json"),
        &format!("{:#}\n", report.to_json()),
        args.force,
    )?;
    Ok(())
}

fn initial_packet(config: &RunConfig, dim: usize) -> Result<WavePacket<f64>, CliError> {
    match config.initial.as_ref() {
        None => Ok(WavePacket::site(dim, 0)),
        Some(InitialPacket::Site { index }) => {
            if *index == 0 || *index > dim {
                return Err(CliError::config(format!(
                    "initial site {index} out of range 1..={dim}"
                )));
            }
            Ok(WavePacket::site(dim, index - 1))
        }
        Some(InitialPacket::Uniform) => Ok(WavePacket::uniform(dim)),
        Some(InitialPacket::Amplitudes { values }) => {
            if values.len() != dim {
                return Err(CliError::config(format!(
                    "initial amplitudes have length {}, lattice has {dim} sites",
                    values.len()
                )));
            }
            Ok(WavePacket::at_time_zero(
                values.iter().map(|[re, im]| Complex::new(*re, *im)).collect(),
            ))
        }
    }
}

/// `evolve`: expand an initial packet and sample its evolution over a time
/// grid.
pub fn cmd_evolve(args: &CommonArgs, config: &RunConfig) -> Result<(), CliError> {
    let spec = config.lattice_spec(&args.config)?;
    let (_, s) = solve(&spec, config.tol.or(args.tol))?;
    let packet = initial_packet(config, s.dim)?;
    let coefficients = expand(&packet, &s)?;

    let times_config = args
        .grid
        .clone()
        .or_else(|| config.times.clone())
        .ok_or_else(|| {
            CliError::config("evolve requires --grid (or \"times\" in the config)".into())
        })?;
    let times = expand_grid(&times_config)?;
    let fidelity_states: Vec<usize> = if config.track_fidelities.unwrap_or(false) {
        (0..s.dim).collect()
    } else {
        Vec::new()
    };
    let rows = time_trace(&s, &coefficients, &times, &fidelity_states)?;

    let mut csv = String::from("t,norm");
    for site in 1..=s.dim {
        csv.push_str(&format!(",site_{site}"));
    }
    for &j in &fidelity_states {
        csv.push_str(&format!(",fid_{}", j + 1));
    }
    csv.push('\n');
    for row in &rows {
        csv.push_str(&fmt_real(row.time));
        csv.push(',');
        csv.push_str(&fmt_real(row.norm));
        for &d in &row.densities {
            csv.push(',');
            csv.push_str(&fmt_real(d));
        }
        for &f in &row.fidelities {
            csv.push(',');
            csv.push_str(&fmt_real(f));
        }
        csv.push('\n');
    }
    ensure_dir(&args.out)?;
    write_file(&args.out.join("evolution.csv"), &csv, args.force)?;
    Ok(())
}
