use std::fmt::Write as _;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use curvalign_core::synthetic::{recovery_pair, RECOVERY_ANGLE, RECOVERY_SHIFT};
use curvalign_core::*;
use log::info;
use serde::Serialize;

use crate::args::{BenchArgs, Format};
use crate::commands::{emit, to_json};
use crate::Outcome;

/// Shortest span of one timed run; fast calls are repeated to fill it.
const MIN_RUN: Duration = Duration::from_millis(2);

#[derive(Debug, Serialize)]
struct Row {
    n: usize,
    t_naive: f64,
    t_fft: f64,
    speedup: f64,
    error: f64,
}

/// Median seconds per call over `runs` runs, after one warm-up call.
fn median_time<T>(runs: u32, mut f: impl FnMut() -> T) -> f64 {
    std::hint::black_box(f());
    let mut samples: Vec<f64> = (0..runs)
        .map(|_| {
            let start = Instant::now();
            let mut calls = 0u32;
            while calls == 0 || start.elapsed() < MIN_RUN {
                std::hint::black_box(f());
                calls += 1;
            }
            start.elapsed().as_secs_f64() / calls as f64
        })
        .collect();
    samples.sort_by(|a, b| a.total_cmp(b));
    samples[samples.len() / 2]
}

fn measure(family: &CurveFamily, n: usize, runs: u32) -> Result<Row> {
    let (reference, template) = recovery_pair(family, n, RECOVERY_SHIFT, RECOVERY_ANGLE)?;
    let (a, b) = (reference.nodes(), template.nodes());
    let naive = align_naive(a, b)?;
    let fft = align_fft(a, b)?;
    // Both energies come from the trace identity, whose round-off scales
    // with the squared norms rather than with the (tiny) energy itself.
    let norms = (a.iter().chain(b).map(|p| p.norm_sq()).sum::<f64>() / n as f64).max(fft.energy);
    if naive.shift != fft.shift || (naive.energy - fft.energy).abs() > 1e-9 * norms {
        bail!(
            "N={n}: naive and FFT disagree (shift {} vs {}, energy {:e} vs {:e})",
            naive.shift,
            fft.shift,
            naive.energy,
            fft.energy
        );
    }
    let error = mismatch_energy(a, b, fft.shift, fft.rotation)?;
    let t_naive = median_time(runs, || align_naive(a, b));
    let t_fft = median_time(runs, || align_fft(a, b));
    info!("N={n}: naive {t_naive:.3e} s, fft {t_fft:.3e} s");
    Ok(Row {
        n,
        t_naive,
        t_fft,
        speedup: t_naive / t_fft,
        error,
    })
}

fn csv(rows: &[Row]) -> String {
    let mut s = String::from("N,t_naive,t_fft,speedup,error\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{:e},{:e},{:.2},{:e}",
            r.n, r.t_naive, r.t_fft, r.speedup, r.error
        );
    }
    s
}

fn markdown(rows: &[Row]) -> String {
    let mut s =
        String::from("| N | t_naive (s) | t_fft (s) | speedup | error |\n|---|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            s,
            "| {} | {:.3e} | {:.3e} | {:.1}x | {:.2e} |",
            r.n, r.t_naive, r.t_fft, r.speedup, r.error
        );
    }
    s
}

pub fn run(args: &BenchArgs) -> Result<Outcome> {
    let family = CurveFamily::by_name(&args.family, args.seed)?;
    let rows = args
        .sizes
        .0
        .iter()
        .map(|&n| measure(&family, n, args.runs))
        .collect::<Result<Vec<_>>>()?;
    let bytes = match args.format {
        Format::Csv => csv(&rows).into_bytes(),
        Format::Markdown => markdown(&rows).into_bytes(),
        Format::Json => to_json(&rows)?,
    };
    emit(args.out.as_deref(), &bytes)?;
    Ok(Outcome::Success)
}
