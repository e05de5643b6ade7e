use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use curvalign_core::io::{read_curve, write_curve, write_distance_matrix, CurveFormat};
use curvalign_core::*;
use log::{info, warn};
use serde::Serialize;

use crate::args::{
    AlignArgs, Approach, DistanceArgs, ElasticArgs, Format, GenArgs, MatrixArgs, RigidMethod,
};
use crate::Outcome;

/// Environment variable capping the worker threads of `matrix`.
pub const THREADS_ENV: &str = "CURVALIGN_THREADS";

/// Writes the artifact to `out`, or to stdout.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn load(path: &Path) -> Result<Curve> {
    read_curve(path).with_context(|| format!("reading {}", path.display()))
}

/// Centers, scales to unit length and, unless disabled, resamples to `n`.
fn load_pair(first: &Path, second: &Path, n: usize, resample: bool) -> Result<(Curve, Curve)> {
    let c1 = load(first)?.preprocess(n, resample)?;
    let c2 = load(second)?.preprocess(n, resample)?;
    if c1.len() != c2.len() {
        bail!(
            "curves have {} and {} nodes; drop --no-resample to resample both to {n}",
            c1.len(),
            c2.len()
        );
    }
    Ok((c1, c2))
}

pub fn gen(args: &GenArgs) -> Result<Outcome> {
    let family = CurveFamily::by_name(&args.family, args.seed)?;
    let warp = Warp::by_name(&args.warp)?;
    let mut curve = gen_curve(&family, args.n)?;
    if args.shift != 0.0 || args.rotate != 0.0 || !matches!(warp, Warp::Identity) {
        let base = curve.preprocess(args.n, true)?;
        curve = transform_curve(&base, args.shift.rem_euclid(1.0), args.rotate, &warp)?;
    }
    let format = match args.format {
        Some(Format::Csv) => CurveFormat::Csv,
        Some(Format::Json) => CurveFormat::Json,
        Some(Format::Markdown) => bail!("curves are written as csv or json"),
        None => args
            .out
            .as_deref()
            .map(CurveFormat::from_path)
            .unwrap_or(CurveFormat::Csv),
    };
    let mut bytes = Vec::new();
    write_curve(&curve, format, &mut bytes)?;
    emit(args.out.as_deref(), &bytes)?;
    Ok(Outcome::Success)
}

pub fn align(args: &AlignArgs) -> Result<Outcome> {
    let (c1, c2) = load_pair(&args.reference, &args.template, args.n, !args.no_resample)?;
    let result = match args.method {
        RigidMethod::Fft => align_fft(c1.nodes(), c2.nodes())?,
        RigidMethod::Naive => align_naive(c1.nodes(), c2.nodes())?,
    };
    if result.degenerate {
        warn!("correlation matrix is degenerate; the rotation is not unique");
    }
    emit(
        args.out.as_deref(),
        &to_json(&RigidAlignmentRecord::from(&result))?,
    )?;
    Ok(Outcome::Success)
}

fn method(args: &ElasticArgs, resample: bool) -> Result<Method> {
    if args.tol.is_nan() || args.tol < 0.0 {
        bail!("--tol must be non-negative");
    }
    Ok(match args.approach {
        Approach::One => Method::Approach1(Approach1Options::default()),
        Approach::Two => Method::Approach2(Approach2Options {
            max_iters: args.max_iters,
            energy_tol: args.tol,
            rigid: match args.method {
                RigidMethod::Fft => RigidSearch::Fft,
                RigidMethod::Naive => RigidSearch::Naive,
            },
            resample,
            ..Approach2Options::default()
        }),
    })
}

pub fn distance(args: &DistanceArgs) -> Result<Outcome> {
    let resample = !args.no_resample;
    let (c1, c2) = load_pair(&args.first, &args.second, args.elastic.n, resample)?;
    let m = method(&args.elastic, resample)?.distance(&c1, &c2)?;
    if !m.converged {
        warn!(
            "stopped after {} iterations without converging",
            m.iterations
        );
    }
    emit(
        args.out.as_deref(),
        &to_json(&ElasticMatchRecord::from(&m))?,
    )?;
    Ok(Outcome::Success)
}

/// Expands a single directory argument into its curve files, sorted by name.
fn matrix_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    if let [dir] = inputs {
        if dir.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(dir)
                .with_context(|| format!("listing {}", dir.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.is_file()
                        && p.extension().and_then(|e| e.to_str()).is_some_and(|e| {
                            e.eq_ignore_ascii_case("csv") || e.eq_ignore_ascii_case("json")
                        })
                })
                .collect();
            files.sort();
            return Ok(files);
        }
    }
    Ok(inputs.to_vec())
}

fn thread_limit() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => bail!("{THREADS_ENV} must be a positive integer, got `{v}`"),
        },
        Err(_) => Ok(None),
    }
}

#[derive(Serialize)]
struct MatrixDocument<'a> {
    ids: &'a [String],
    /// Failed pairs are `null`.
    values: Vec<Vec<Option<f64>>>,
}

pub fn matrix(args: &MatrixArgs) -> Result<Outcome> {
    let files = matrix_inputs(&args.inputs)?;
    if files.len() < 2 {
        bail!("a distance matrix needs at least two curve files");
    }
    let ids: Vec<String> = files
        .iter()
        .map(|p| {
            p.file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    let curves = files.iter().map(|p| load(p)).collect::<Result<Vec<_>>>()?;
    let method = method(&args.elastic, true)?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = thread_limit()? {
        pool = pool.num_threads(k);
    }
    let pool = pool.build()?;
    let result = pool.install(|| distance_matrix(&curves, &method, args.elastic.n))?;

    for (i, row) in result.seconds.iter().enumerate() {
        for (j, t) in row.iter().enumerate() {
            info!(
                "{} vs {}: {:.6} in {t:.3} s",
                ids[i], ids[j], result.values[i][j]
            );
        }
    }
    for &(i, j, ref e) in &result.failures {
        warn!("{} vs {} failed: {e}", ids[i], ids[j]);
    }

    let bytes = match args.format {
        Format::Csv => {
            let mut bytes = Vec::new();
            write_distance_matrix(&ids, &result.values, &mut bytes)?;
            bytes
        }
        Format::Json => to_json(&MatrixDocument {
            ids: &ids,
            values: result
                .values
                .iter()
                .map(|row| row.iter().map(|v| v.is_finite().then_some(*v)).collect())
                .collect(),
        })?,
        Format::Markdown => bail!("matrices are written as csv or json"),
    };
    emit(args.out.as_deref(), &bytes)?;
    Ok(if result.failures.is_empty() {
        Outcome::Success
    } else {
        Outcome::Partial
    })
}
