//! `modrecon` CLI: coefficient generation, benchmark sweeps, and image
//! upscaling.
//!
//! Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical failure
//! (divergence).

use clap::{Args, Parser, Subcommand};
use modrecon::bench::{self, ImageMethod, Synthetic2DConfig, SyntheticConfig};
use modrecon::error::Error;
use modrecon::io::csv::write_csv;
use modrecon::io::pgm::{read_pgm, write_pgm};
use modrecon::optimizer::format_coeffs;
use modrecon::signals::MetricOptions;
use std::path::PathBuf;
use std::process::ExitCode;

/// Env var holding the default coefficient table path.
const COEFF_TABLE_ENV: &str = "MODRECON_COEFF_TABLE";

#[derive(Parser)]
#[command(
    name = "modrecon",
    about = "Bandlimited reconstruction from interpolated waveforms via optimized cosine-module mixing",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve optimal module coefficients and store them in a lookup table.
    GenCoeffs(GenCoeffsArgs),
    /// Benchmark sweeps producing CSV files.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Image operations.
    #[command(subcommand)]
    Image(ImageCommand),
}

#[derive(Args)]
struct CommonSignalArgs {
    /// Interpolation kernel: sh | linear | hold:<n> | cubic[:a].
    #[arg(long, default_value = "sh")]
    kernel: String,
    /// Sampling period (samples between retained points).
    #[arg(long = "T", default_value_t = 10)]
    period: usize,
    /// Record length in samples.
    #[arg(long = "N", default_value_t = 1000)]
    len: usize,
    /// Band-limit bin of the test signals; defaults to N/(2T) - 1.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Trials to average.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Base seed; trial t uses seed + t.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Fraction of samples trimmed at each end for SNR.
    #[arg(long, default_value_t = 0.05)]
    trim: f64,
}

impl CommonSignalArgs {
    fn to_config(&self) -> Result<SyntheticConfig, Error> {
        let kernel = bench::parse_kernel_spec(&self.kernel, self.period)?;
        if self.len == 0 || !self.len.is_multiple_of(2 * self.period) {
            return Err(Error::InvalidDimension(format!(
                "N = {} must be a positive multiple of 2T = {}",
                self.len,
                2 * self.period
            )));
        }
        let cutoff = self.cutoff.unwrap_or(self.len / (2 * self.period) - 1);
        let metric = MetricOptions::new(self.trim, 255.0, 300.0)?;
        Ok(SyntheticConfig {
            kernel,
            n: self.len,
            trials: self.trials,
            seed_base: self.seed,
            cutoff_bin: cutoff,
            metric,
        })
    }
}

#[derive(Args)]
struct GenCoeffsArgs {
    /// Interpolation kernel: sh | linear | hold:<n> | cubic[:a].
    #[arg(long, default_value = "sh")]
    kernel: String,
    #[arg(long = "T", default_value_t = 10)]
    period: usize,
    #[arg(long = "N", default_value_t = 1000)]
    len: usize,
    /// Number of modules M (at most floor(T/2)).
    #[arg(long, default_value_t = 5)]
    modules: usize,
    /// Highest passband bin of the design system; defaults to N/(2T) - 1.
    #[arg(long)]
    kpass: Option<usize>,
    /// Allow the wider passband row range k = 0..=N/T.
    #[arg(long, default_value_t = false)]
    wide: bool,
    /// Table file; falls back to $MODRECON_COEFF_TABLE.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// SNR vs module count, classical vs optimized banks.
    Modules(BenchModulesArgs),
    /// Output SNR vs input SNR under additive white Gaussian noise.
    Noise(BenchNoiseArgs),
    /// SNR vs iteration count for plain/hybrid/hybrid-optimized loops.
    Iterative(BenchIterativeArgs),
}

#[derive(Args)]
struct BenchModulesArgs {
    #[command(flatten)]
    common: CommonSignalArgs,
    /// Largest module count in the sweep; defaults to floor(T/2).
    #[arg(long)]
    max_modules: Option<usize>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchNoiseArgs {
    #[command(flatten)]
    common: CommonSignalArgs,
    /// Module count used by both banks.
    #[arg(long, default_value_t = 5)]
    modules: usize,
    /// Comma-separated input SNR list in dB.
    #[arg(long, value_delimiter = ',', default_value = "0,10,20,30,40,50")]
    snr: Vec<f64>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchIterativeArgs {
    #[command(flatten)]
    common: CommonSignalArgs,
    /// Module count for the hybrid variants.
    #[arg(long, default_value_t = 1)]
    modules: usize,
    /// Highest iteration in the sweep (rows 0..=iterations).
    #[arg(long, default_value_t = 40)]
    iterations: usize,
    /// Relaxation parameter lambda in (0, 2).
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Run the 2-D variant over square grids of side N (T per axis).
    #[arg(long = "two-d", default_value_t = false)]
    two_d: bool,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ImageCommand {
    /// 2x grayscale upscaling, optionally as a reference round-trip.
    Upscale(ImageUpscaleArgs),
}

#[derive(Args)]
struct ImageUpscaleArgs {
    /// Low-resolution PGM to upscale directly (no PSNR).
    #[arg(
        long,
        conflicts_with = "reference",
        required_unless_present = "reference"
    )]
    input: Option<PathBuf>,
    /// High-resolution reference PGM: decimate by 2, upscale, report PSNR.
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    /// bilinear | bicubic | iterative | hybrid | opt_hybrid.
    #[arg(long)]
    method: String,
    /// Iterations for the iterative family.
    #[arg(long, default_value_t = 2)]
    iterations: usize,
    /// Modules per axis for the hybrid methods (at most 1 for T = 2).
    #[arg(long, default_value_t = 1)]
    modules: usize,
    /// Output PGM path.
    #[arg(long)]
    out: PathBuf,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::MalformedHeader(_) | Error::TruncatedData { .. } => 3,
        Error::Divergence { .. } => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::GenCoeffs(args) => {
            let kernel = bench::parse_kernel_spec(&args.kernel, args.period)?;
            let out = args
                .out
                .or_else(|| std::env::var_os(COEFF_TABLE_ENV).map(PathBuf::from))
                .ok_or_else(|| {
                    Error::InvalidDimension(format!(
                        "no table path: pass --out or set ${COEFF_TABLE_ENV}"
                    ))
                })?;
            let record =
                bench::gen_coeffs(&kernel, args.len, args.modules, args.kpass, args.wide, &out)?;
            println!(
                "kernel={} T={} N={} M={} Kpass={} e={:.3e} c=[{}]",
                record.kernel_id,
                record.period,
                record.len,
                record.modules,
                record.passband_max_bin,
                record.residual_error,
                format_coeffs(&record.coeffs)
            );
            Ok(())
        }
        Command::Bench(BenchCommand::Modules(args)) => {
            let cfg = args.common.to_config()?;
            let max_m = args
                .max_modules
                .unwrap_or_else(|| modrecon::modular::max_modules(cfg.kernel.period()));
            let rows = bench::run_bench_modules(&cfg, max_m)?;
            let (header, data) = bench::modules_rows_to_csv(&rows);
            write_csv(&header, &data, &args.out)?;
            eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
            Ok(())
        }
        Command::Bench(BenchCommand::Noise(args)) => {
            let cfg = args.common.to_config()?;
            let rows = bench::run_bench_noise(&cfg, args.modules, &args.snr)?;
            let (header, data) = bench::noise_rows_to_csv(&rows);
            write_csv(&header, &data, &args.out)?;
            eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
            Ok(())
        }
        Command::Bench(BenchCommand::Iterative(args)) => {
            let rows = if args.two_d {
                let common = &args.common;
                let kernel = bench::parse_kernel_spec(&common.kernel, common.period)?;
                let side = if common.len == 1000 { 64 } else { common.len };
                if side % (2 * common.period) != 0 {
                    return Err(Error::InvalidDimension(format!(
                        "grid side {side} must be a multiple of 2T = {}",
                        2 * common.period
                    )));
                }
                let cutoff = common.cutoff.unwrap_or(side / (2 * common.period) - 1);
                let cfg = Synthetic2DConfig {
                    kernel_rows: kernel.clone(),
                    kernel_cols: kernel,
                    dims: (side, side),
                    trials: common.trials,
                    seed_base: common.seed,
                    cutoffs: (cutoff, cutoff),
                    metric: MetricOptions::new(common.trim, 255.0, 300.0)?,
                };
                bench::run_bench_iterative_2d(
                    &cfg,
                    (args.modules, args.modules),
                    args.iterations,
                    args.lambda,
                )?
            } else {
                let cfg = args.common.to_config()?;
                bench::run_bench_iterative(&cfg, args.modules, args.iterations, args.lambda)?
            };
            let (header, data) = bench::iterative_rows_to_csv(&rows);
            write_csv(&header, &data, &args.out)?;
            eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
            Ok(())
        }
        Command::Image(ImageCommand::Upscale(args)) => {
            let method = ImageMethod::parse(&args.method)?;
            match (&args.input, &args.reference) {
                (_, Some(reference)) => {
                    let image = read_pgm(reference)?;
                    let report =
                        bench::upscale_roundtrip(&image, method, args.iterations, args.modules)?;
                    write_pgm(&report.image, &args.out)?;
                    println!("{},{:.6}", method.name(), report.psnr_db);
                }
                (Some(input), None) => {
                    let image = read_pgm(input)?;
                    let upscaled =
                        bench::upscale_2x(&image, method, args.iterations, args.modules)?;
                    write_pgm(&upscaled, &args.out)?;
                }
                (None, None) => unreachable!("clap enforces input xor reference"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
