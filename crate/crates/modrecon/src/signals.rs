//! Signal containers, bandlimited test-signal generation, DFT lowpass
//! filtering, and quality metrics.
//!
//! Band-limits are expressed as a centered DFT bin index `K_c`: a signal is
//! bandlimited to `K_c` when every centered bin with |k| > K_c is zero. The
//! lowpass keeps bins k and N-k for k <= K_c and always zeroes the Nyquist
//! bin N/2, which keeps filtered signals real and unambiguous at exact
//! Nyquist-rate sampling.

use crate::error::{Error, Result};
use crate::fft;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;

/// A real 1-D signal with a declared band-limit bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D {
    samples: Vec<f64>,
    band_bin: usize,
}

impl Signal1D {
    /// Wraps samples with a declared cutoff bin. Requires even length >= 2
    /// and `band_bin < N/2`. The band content itself is not verified.
    pub fn new(samples: Vec<f64>, band_bin: usize) -> Result<Self> {
        check_len_1d(samples.len())?;
        check_cutoff_1d(band_bin, samples.len())?;
        Ok(Self { samples, band_bin })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn band_bin(&self) -> usize {
        self.band_bin
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Row-major 2-D grid of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Grid {
    pub fn from_data(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// Grid with entries `f(r, c)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut g = Grid::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                g.set(r, c, f(r, c));
            }
        }
        g
    }

    pub fn transpose(&self) -> Grid {
        Grid::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }
}

/// A real 2-D signal with per-axis band-limit bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal2D {
    grid: Grid,
    band_bins: (usize, usize),
}

impl Signal2D {
    pub fn new(grid: Grid, band_bins: (usize, usize)) -> Result<Self> {
        check_len_1d(grid.rows())?;
        check_len_1d(grid.cols())?;
        check_cutoff_1d(band_bins.0, grid.rows())?;
        check_cutoff_1d(band_bins.1, grid.cols())?;
        Ok(Self { grid, band_bins })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn band_bins(&self) -> (usize, usize) {
        self.band_bins
    }

    pub fn into_grid(self) -> Grid {
        self.grid
    }
}

/// Options for the SNR/PSNR metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricOptions {
    /// Fraction of samples ignored at each boundary when computing SNR.
    pub trim_fraction_per_end: f64,
    /// Peak value for PSNR (255 for 8-bit images).
    pub peak_value: f64,
    /// Finite value reported when the error energy is exactly zero.
    pub snr_cap_db: f64,
}

impl MetricOptions {
    pub fn new(trim_fraction_per_end: f64, peak_value: f64, snr_cap_db: f64) -> Result<Self> {
        if !(0.0..=0.45).contains(&trim_fraction_per_end) || !trim_fraction_per_end.is_finite() {
            return Err(Error::InvalidDimension(format!(
                "trim fraction {trim_fraction_per_end} outside [0, 0.45]"
            )));
        }
        if peak_value.is_nan() || peak_value <= 0.0 {
            return Err(Error::InvalidDimension(format!(
                "peak value {peak_value} must be positive"
            )));
        }
        Ok(Self {
            trim_fraction_per_end,
            peak_value,
            snr_cap_db,
        })
    }

    /// 5% trim per end, 8-bit peak, 300 dB cap.
    pub fn default_bench() -> Self {
        Self {
            trim_fraction_per_end: 0.05,
            peak_value: 255.0,
            snr_cap_db: 300.0,
        }
    }
}

impl Default for MetricOptions {
    fn default() -> Self {
        Self::default_bench()
    }
}

fn check_len_1d(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "length {n} must be even and at least 2"
        )));
    }
    Ok(())
}

fn check_cutoff_1d(cutoff: usize, n: usize) -> Result<()> {
    if cutoff >= n / 2 {
        return Err(Error::InvalidDimension(format!(
            "cutoff bin {cutoff} must be below N/2 = {}",
            n / 2
        )));
    }
    Ok(())
}

/// Seeded generator used everywhere randomness is needed; one instance is
/// created per call so operations stay pure.
pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn standard_normal_vec(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = seeded_rng(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// FFT-lowpassed unit-variance white Gaussian noise; deterministic per seed.
pub fn generate_bandlimited_1d(n: usize, cutoff_bin: usize, seed: u64) -> Result<Signal1D> {
    check_len_1d(n)?;
    check_cutoff_1d(cutoff_bin, n)?;
    let white = standard_normal_vec(n, seed);
    let filtered = fft_lowpass_1d(&white, cutoff_bin)?;
    Ok(Signal1D {
        samples: filtered,
        band_bin: cutoff_bin,
    })
}

/// 2-D counterpart of [`generate_bandlimited_1d`]: lowpassed white noise grid.
pub fn generate_bandlimited_2d(
    rows: usize,
    cols: usize,
    cutoffs: (usize, usize),
    seed: u64,
) -> Result<Signal2D> {
    check_len_1d(rows)?;
    check_len_1d(cols)?;
    check_cutoff_1d(cutoffs.0, rows)?;
    check_cutoff_1d(cutoffs.1, cols)?;
    let white = Grid::from_data(rows, cols, standard_normal_vec(rows * cols, seed))?;
    let filtered = fft_lowpass_2d(&white, cutoffs)?;
    Ok(Signal2D {
        grid: filtered,
        band_bins: cutoffs,
    })
}

/// Zeroes every centered DFT bin with |k| > cutoff (including Nyquist),
/// leaving passband bins untouched. Idempotent; passband gain is 1.
pub fn fft_lowpass_1d(x: &[f64], cutoff_bin: usize) -> Result<Vec<f64>> {
    check_len_1d(x.len())?;
    check_cutoff_1d(cutoff_bin, x.len())?;
    let n = x.len();
    let mut spectrum = fft::forward_real(x);
    for (k, v) in spectrum.iter_mut().enumerate() {
        if fft::centered_bin(k, n).unsigned_abs() as usize > cutoff_bin {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    Ok(fft::inverse_to_real(spectrum))
}

/// Separable rectangular lowpass over the 2-D DFT: keeps |k1| <= cutoffs.0,
/// |k2| <= cutoffs.1 and zeroes everything else, Nyquist bins included.
pub fn fft_lowpass_2d(x: &Grid, cutoffs: (usize, usize)) -> Result<Grid> {
    check_len_1d(x.rows())?;
    check_len_1d(x.cols())?;
    check_cutoff_1d(cutoffs.0, x.rows())?;
    check_cutoff_1d(cutoffs.1, x.cols())?;
    let (rows, cols) = x.shape();
    let mut buf: Vec<Complex64> = x.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward_2d(&mut buf, rows, cols);
    for r in 0..rows {
        let kr = fft::centered_bin(r, rows).unsigned_abs() as usize;
        for c in 0..cols {
            let kc = fft::centered_bin(c, cols).unsigned_abs() as usize;
            if kr > cutoffs.0 || kc > cutoffs.1 {
                buf[r * cols + c] = Complex64::new(0.0, 0.0);
            }
        }
    }
    fft::inverse_2d(&mut buf, rows, cols);
    let data = buf.into_iter().map(|c| c.re).collect();
    Grid::from_data(rows, cols, data)
}

fn trimmed_range(n: usize, trim_fraction: f64) -> Result<std::ops::Range<usize>> {
    let skip = (trim_fraction * n as f64).ceil() as usize;
    let start = skip;
    let end = n.saturating_sub(skip);
    if end < start + 2 {
        return Err(Error::EmptyInterior);
    }
    Ok(start..end)
}

/// SNR in dB over the trimmed interior: 10*log10(sum ref^2 / sum (ref-est)^2).
/// Returns `snr_cap_db` when the error sum is exactly zero.
pub fn snr_db(reference: &[f64], estimate: &[f64], opts: &MetricOptions) -> Result<f64> {
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch {
            expected: reference.len(),
            got: estimate.len(),
        });
    }
    let range = trimmed_range(reference.len(), opts.trim_fraction_per_end)?;
    let mut signal = 0.0;
    let mut noise = 0.0;
    for i in range {
        let r = reference[i];
        let d = r - estimate[i];
        signal += r * r;
        noise += d * d;
    }
    if noise == 0.0 {
        return Ok(opts.snr_cap_db);
    }
    Ok(10.0 * (signal / noise).log10())
}

/// SNR over the interior rectangle of a grid, trimming per axis.
pub fn snr_db_2d(reference: &Grid, estimate: &Grid, opts: &MetricOptions) -> Result<f64> {
    if reference.shape() != estimate.shape() {
        return Err(Error::ShapeMismatch {
            expected: reference.shape(),
            got: estimate.shape(),
        });
    }
    let row_range = trimmed_range(reference.rows(), opts.trim_fraction_per_end)?;
    let col_range = trimmed_range(reference.cols(), opts.trim_fraction_per_end)?;
    let mut signal = 0.0;
    let mut noise = 0.0;
    for r in row_range {
        for c in col_range.clone() {
            let v = reference.get(r, c);
            let d = v - estimate.get(r, c);
            signal += v * v;
            noise += d * d;
        }
    }
    if noise == 0.0 {
        return Ok(opts.snr_cap_db);
    }
    Ok(10.0 * (signal / noise).log10())
}

/// PSNR in dB over all samples (no trimming): 10*log10(peak^2 / MSE).
pub fn psnr_db(reference: &[f64], estimate: &[f64], opts: &MetricOptions) -> Result<f64> {
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch {
            expected: reference.len(),
            got: estimate.len(),
        });
    }
    if reference.is_empty() {
        return Err(Error::InvalidDimension("empty input".into()));
    }
    let mse = reference
        .iter()
        .zip(estimate.iter())
        .map(|(r, e)| (r - e) * (r - e))
        .sum::<f64>()
        / reference.len() as f64;
    if mse == 0.0 {
        return Ok(opts.snr_cap_db);
    }
    Ok(10.0 * (opts.peak_value * opts.peak_value / mse).log10())
}

/// Adds seeded white Gaussian noise scaled so the realized (not expected)
/// input SNR equals `target_snr_db` exactly.
pub fn add_awgn(x: &[f64], target_snr_db: f64, seed: u64) -> Result<Vec<f64>> {
    let signal_energy: f64 = x.iter().map(|v| v * v).sum();
    if signal_energy == 0.0 {
        return Err(Error::ZeroEnergyInput);
    }
    let raw = standard_normal_vec(x.len(), seed);
    let raw_energy: f64 = raw.iter().map(|v| v * v).sum();
    let target_energy = signal_energy * 10f64.powf(-target_snr_db / 10.0);
    let scale = (target_energy / raw_energy).sqrt();
    Ok(x.iter()
        .zip(raw.iter())
        .map(|(v, w)| v + scale * w)
        .collect())
}
