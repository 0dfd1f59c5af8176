use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shadowlink_core::harness::{sample_observables, WeightMode};
use shadowlink_core::protocol::{min_copies, run_link};
use shadowlink_core::shadows::{acquire, pack_bases, pack_outcomes};
use shadowlink_core::{ChannelSpec, CodeSpec, StateVector, UepConfig};
use shadowlink_sim::config::SweepKind;
use shadowlink_sim::output::{output_dir, render_svg, write_csv};
use shadowlink_sim::{run_experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "shadowlink", version, about = "Classical-shadow transmission over noisy binary channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file and write <name>.csv and <name>.svg
    Simulate {
        config: PathBuf,
        /// Output directory; defaults to $SHADOWLINK_OUT, then ./results
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Copies sufficient for M weight-w observables to within eps with probability 1 - delta
    Bound {
        #[arg(long)]
        w: usize,
        #[arg(long = "M")]
        m: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        perr: f64,
    },
    /// Trace one small transmission end to end
    Demo {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        copies: usize,
        #[arg(long, default_value_t = 0.001)]
        crossover: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Simulate { config, out } => simulate(config, out),
        Command::Bound { w, m, eps, delta, perr } => {
            println!("{}", min_copies(w, m, eps, delta, perr)?);
            Ok(())
        }
        Command::Demo { n, copies, crossover, seed } => demo(n, copies, crossover, seed),
    }
}

fn simulate(path: PathBuf, out: Option<PathBuf>) -> anyhow::Result<()> {
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let cfg: ExperimentConfig = text.parse()?;
    let rows = run_experiment(&cfg)?;

    let dir = output_dir(out.as_deref());
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv_path = dir.join(format!("{}.csv", cfg.name));
    write_csv(&rows, fs::File::create(&csv_path)?)?;
    let x_label = match cfg.sweep {
        SweepKind::Budget => "payload bits",
        SweepKind::Copies => "copies",
        SweepKind::Crossover => "crossover probability",
        SweepKind::SnrDb => "SNR (dB)",
    };
    let svg_path = dir.join(format!("{}.svg", cfg.name));
    fs::write(&svg_path, render_svg(&rows, x_label, cfg.sweep == SweepKind::Budget))?;

    for r in &rows {
        println!(
            "{:<40} {:>10} B={:<8} N={:<7} P={:.3} [{:.3}, {:.3}] outage={:.3}",
            r.scheme, r.sweep_value, r.bits_actual, r.copies, r.p_succ, r.ci_low, r.ci_high, r.outage_rate
        );
    }
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(())
}

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| char::from(b'0' + b)).collect()
}

fn demo(n: usize, copies: usize, crossover: f64, seed: u64) -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let state = StateVector::haar_random(n, &mut rng)?;
    let observables = sample_observables(n, 4, WeightMode::UpTo(n.min(2)), &mut rng)?;
    let cfg = UepConfig::new(CodeSpec::Uncoded, CodeSpec::Repetition(3), ChannelSpec::bsc(crossover)?)?;
    println!("state: {n} qubits, Haar random (seed {seed})");
    println!("link: outcomes {}, bases {}, crossover {crossover}", cfg.outcome_code, cfg.basis_code);

    let batch = acquire(&state, copies, &mut rng)?;
    for (i, r) in batch.records().iter().take(3).enumerate() {
        println!("record {i}: basis {} outcome {}", r.basis, bits(&r.bits));
    }
    let basis_stream = pack_bases(&batch);
    let outcome_stream = pack_outcomes(&batch);
    println!("basis stream: {} bits, starts {}", basis_stream.len(), bits(&basis_stream[..basis_stream.len().min(32)]));
    println!("outcome stream: {} bits, starts {}", outcome_stream.len(), bits(&outcome_stream[..outcome_stream.len().min(32)]));

    let run = run_link(&batch, &cfg, &observables, &mut rng)?;
    println!(
        "on air: {} outcome + {} basis + {} CRC bits = {}",
        run.budget.outcome_bits,
        run.budget.basis_bits,
        run.budget.crc_bits,
        run.budget.on_air()
    );
    println!("link status: {:?}, residual outcome flip rate {:.3e}", run.transmission.status(), run.transmission.p_err());
    let Some(report) = run.report else {
        println!("no estimates: basis stream failed its CRC");
        return Ok(());
    };
    for (obs, e) in observables.iter().zip(&report.entries) {
        println!(
            "{obs}: estimate {:+.4} truth {:+.4} ({} compatible records, debias x{:.3})",
            e.estimate,
            state.expectation(obs)?,
            e.compat_count,
            e.debias_factor
        );
    }
    Ok(())
}
