//! Interpolation kernels and the circular decimate/interpolate operators.
//!
//! A kernel is an impulse response `h[n]` stored as taps with an integer
//! anchor (the position of tap 0 relative to n = 0) and a period T. All
//! convolution is circular (mod N), which keeps the time-domain and
//! DFT-domain formulations exactly consistent; boundary artifacts of real
//! use are absorbed by the SNR trimming protocol.

use crate::error::{Error, Result};
use crate::signals::{Grid, Signal1D};

/// Built-in kernel families plus free-form taps.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind {
    /// Zero-order hold: each sample held for T points.
    SampleHold,
    /// First-order hold: triangular response, straight lines between samples.
    Linear,
    /// (n+1)-fold self-convolution of the length-T boxcar, normalized by T^n.
    NthOrderHold(u32),
    /// Keys cubic-convolution kernel sampled at integers.
    CubicKeys(f64),
    /// Caller-supplied taps.
    Custom,
}

impl KernelKind {
    /// Stable identifier used in coefficient tables and CLI flags.
    pub fn id(&self) -> String {
        match self {
            KernelKind::SampleHold => "sh".to_string(),
            KernelKind::Linear => "linear".to_string(),
            KernelKind::NthOrderHold(n) => format!("hold:{n}"),
            KernelKind::CubicKeys(a) => format!("cubic:{a}"),
            KernelKind::Custom => "custom".to_string(),
        }
    }
}

/// An interpolation impulse response on a circular index domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    kind: KernelKind,
    taps: Vec<f64>,
    anchor: i64,
    period: usize,
    interpolating: bool,
}

impl Kernel {
    /// Builds one of the built-in kernels for sampling period T.
    pub fn make(kind: KernelKind, period: usize) -> Result<Kernel> {
        if period < 1 {
            return Err(Error::InvalidPeriod(period));
        }
        let t = period as f64;
        let (taps, anchor) = match kind {
            KernelKind::SampleHold => (vec![1.0; period], 0i64),
            KernelKind::Linear => {
                let len = 2 * period - 1;
                let taps = (0..len)
                    .map(|i| {
                        let n = i as i64 - (period as i64 - 1);
                        1.0 - n.abs() as f64 / t
                    })
                    .collect();
                (taps, -(period as i64 - 1))
            }
            KernelKind::NthOrderHold(order) => {
                let mut taps = vec![1.0; period];
                for _ in 0..order {
                    taps = convolve(&taps, &vec![1.0; period]);
                }
                let norm = t.powi(order as i32);
                for v in taps.iter_mut() {
                    *v /= norm;
                }
                // Center on the response centroid; for even tap counts the
                // anchor lands one index left of the half-sample centroid.
                let anchor = -((taps.len() as i64 - 1) / 2);
                (taps, anchor)
            }
            KernelKind::CubicKeys(a) => {
                let support = 4 * period - 1;
                let anchor = -(2 * period as i64 - 1);
                let taps = (0..support)
                    .map(|i| keys_weight((i as i64 + anchor) as f64 / t, a))
                    .collect();
                (taps, anchor)
            }
            KernelKind::Custom => {
                return Err(Error::InvalidDimension(
                    "custom kernels are built with Kernel::custom".into(),
                ))
            }
        };
        let interpolating = lattice_property(&taps, anchor, period);
        Ok(Kernel {
            kind,
            taps,
            anchor,
            period,
            interpolating,
        })
    }

    /// Wraps caller-supplied taps. The interpolating flag records whether
    /// h[iT] = delta_i0 holds; non-interpolating kernels are accepted but
    /// exact-recovery guarantees are not claimed for them.
    pub fn custom(taps: Vec<f64>, anchor: i64, period: usize) -> Result<Kernel> {
        if period < 1 {
            return Err(Error::InvalidPeriod(period));
        }
        if taps.is_empty() {
            return Err(Error::InvalidDimension(
                "kernel needs at least one tap".into(),
            ));
        }
        let interpolating = lattice_property(&taps, anchor, period);
        Ok(Kernel {
            kind: KernelKind::Custom,
            taps,
            anchor,
            period,
            interpolating,
        })
    }

    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// True when h[iT] = delta_i0 at lattice points within the support.
    pub fn is_interpolating(&self) -> bool {
        self.interpolating
    }

    /// Taps placed circularly into an n-point record at positions
    /// (anchor + i) mod n.
    pub fn expand_circular(&self, n: usize) -> Result<Vec<f64>> {
        if self.taps.len() > n {
            return Err(Error::KernelTooLong {
                taps: self.taps.len(),
                len: n,
            });
        }
        let mut h = vec![0.0; n];
        for (i, &tap) in self.taps.iter().enumerate() {
            let pos = (self.anchor + i as i64).rem_euclid(n as i64) as usize;
            h[pos] += tap;
        }
        Ok(h)
    }
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Keys cubic-convolution weight at normalized offset s.
fn keys_weight(s: f64, a: f64) -> f64 {
    let s = s.abs();
    if s < 1.0 {
        ((a + 2.0) * s - (a + 3.0)) * s * s + 1.0
    } else if s < 2.0 {
        a * (((s - 5.0) * s + 8.0) * s - 4.0)
    } else {
        0.0
    }
}

fn lattice_property(taps: &[f64], anchor: i64, period: usize) -> bool {
    for (i, &tap) in taps.iter().enumerate() {
        let pos = anchor + i as i64;
        if pos.rem_euclid(period as i64) == 0 {
            let expected = if pos == 0 { 1.0 } else { 0.0 };
            if (tap - expected).abs() > 1e-12 {
                return false;
            }
        }
    }
    true
}

/// The retained samples x[kT] of a decimated signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSeries {
    values: Vec<f64>,
    period: usize,
    origin_length: usize,
}

impl SampledSeries {
    pub fn new(values: Vec<f64>, period: usize, origin_length: usize) -> Result<Self> {
        if !origin_length.is_multiple_of(period) {
            return Err(Error::IndivisibleLength {
                len: origin_length,
                period,
            });
        }
        if values.len() != origin_length / period {
            return Err(Error::LengthMismatch {
                expected: origin_length / period,
                got: values.len(),
            });
        }
        Ok(Self {
            values,
            period,
            origin_length,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn origin_length(&self) -> usize {
        self.origin_length
    }
}

/// Keeps every T-th sample: values[k] = x[kT].
pub fn decimate(x: &Signal1D, period: usize) -> Result<SampledSeries> {
    decimate_slice(x.samples(), period)
}

/// Slice form of [`decimate`] for intermediate pipeline stages.
pub fn decimate_slice(samples: &[f64], period: usize) -> Result<SampledSeries> {
    if period < 1 {
        return Err(Error::InvalidPeriod(period));
    }
    if !samples.len().is_multiple_of(period) {
        return Err(Error::IndivisibleLength {
            len: samples.len(),
            period,
        });
    }
    let values = samples.iter().step_by(period).copied().collect();
    SampledSeries::new(values, period, samples.len())
}

/// Circular interpolation: s[n] = sum_k y[k] * h[(n - kT) mod N]. For
/// interpolating kernels s[kT] = y[k] exactly.
pub fn interpolate_1d(series: &SampledSeries, kernel: &Kernel) -> Result<Vec<f64>> {
    if kernel.period() != series.period() {
        return Err(Error::PeriodMismatch {
            kernel: kernel.period(),
            series: series.period(),
        });
    }
    let n = series.origin_length();
    if kernel.taps().len() > n {
        return Err(Error::KernelTooLong {
            taps: kernel.taps().len(),
            len: n,
        });
    }
    let mut out = vec![0.0; n];
    let t = series.period() as i64;
    for (k, &v) in series.values().iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let base = k as i64 * t + kernel.anchor();
        for (i, &tap) in kernel.taps().iter().enumerate() {
            let pos = (base + i as i64).rem_euclid(n as i64) as usize;
            out[pos] += v * tap;
        }
    }
    Ok(out)
}

/// Separable 2-D interpolation: axis 0 (rows direction) then axis 1.
/// Order does not matter for separable kernels.
pub fn interpolate_2d(
    series: &Grid,
    kernels: (&Kernel, &Kernel),
    out_shape: (usize, usize),
) -> Result<Grid> {
    let (rows_out, cols_out) = out_shape;
    let t0 = kernels.0.period();
    let t1 = kernels.1.period();
    if rows_out % t0 != 0 {
        return Err(Error::IndivisibleLength {
            len: rows_out,
            period: t0,
        });
    }
    if cols_out % t1 != 0 {
        return Err(Error::IndivisibleLength {
            len: cols_out,
            period: t1,
        });
    }
    if series.rows() != rows_out / t0 || series.cols() != cols_out / t1 {
        return Err(Error::ShapeMismatch {
            expected: (rows_out / t0, cols_out / t1),
            got: series.shape(),
        });
    }

    // Expand along axis 0: each column of the sample grid becomes a column
    // of length rows_out.
    let mut tall = Grid::zeros(rows_out, series.cols());
    for c in 0..series.cols() {
        let column: Vec<f64> = (0..series.rows()).map(|r| series.get(r, c)).collect();
        let s = SampledSeries::new(column, t0, rows_out)?;
        let expanded = interpolate_1d(&s, kernels.0)?;
        for (r, v) in expanded.into_iter().enumerate() {
            tall.set(r, c, v);
        }
    }

    // Expand along axis 1.
    let mut out = Grid::zeros(rows_out, cols_out);
    for r in 0..rows_out {
        let row: Vec<f64> = (0..series.cols()).map(|c| tall.get(r, c)).collect();
        let s = SampledSeries::new(row, t1, cols_out)?;
        let expanded = interpolate_1d(&s, kernels.1)?;
        for (c, v) in expanded.into_iter().enumerate() {
            out.set(r, c, v);
        }
    }
    Ok(out)
}

/// Decimate a grid along both axes: out[r][c] = x[r*T0][c*T1].
pub fn decimate_2d(x: &Grid, periods: (usize, usize)) -> Result<Grid> {
    let (t0, t1) = periods;
    if t0 < 1 || t1 < 1 {
        return Err(Error::InvalidPeriod(t0.min(t1)));
    }
    if !x.rows().is_multiple_of(t0) {
        return Err(Error::IndivisibleLength {
            len: x.rows(),
            period: t0,
        });
    }
    if !x.cols().is_multiple_of(t1) {
        return Err(Error::IndivisibleLength {
            len: x.cols(),
            period: t1,
        });
    }
    Ok(Grid::from_fn(x.rows() / t0, x.cols() / t1, |r, c| {
        x.get(r * t0, c * t1)
    }))
}
