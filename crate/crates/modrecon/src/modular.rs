//! The cosine module bank: mixing an interpolated waveform with
//! 1 + sum_j 2 c_j cos(2 pi j n / T) and lowpass filtering.
//!
//! Mixer values are evaluated from exact integer-argument cosines each call:
//! the argument is reduced as (j*n mod T) in integers first, so the mixer is
//! exactly periodic and exact at lattice points. Requesting more than
//! floor(T/2) modules is a hard error; the extra cosines fold back onto
//! lower modules (see [`aliasing fold`](ModuleBank)) and corrupt them.

use crate::error::{Error, Result};
use crate::signals::{fft_lowpass_1d, fft_lowpass_2d, Grid};

/// Maximum number of distinct modules for sampling period T: floor(T/2).
pub fn max_modules(period: usize) -> usize {
    period / 2
}

/// A 1-D module bank: period T and coefficients c_1..c_M (c_0 is fixed at 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleBank {
    period: usize,
    coeffs: Vec<f64>,
}

impl ModuleBank {
    pub fn new(period: usize, coeffs: Vec<f64>) -> Result<Self> {
        if period < 1 {
            return Err(Error::InvalidPeriod(period));
        }
        let max = max_modules(period);
        if coeffs.len() > max {
            return Err(Error::ModuleCountExceeded {
                modules: coeffs.len(),
                max,
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidDimension(
                "bank coefficients must be finite".into(),
            ));
        }
        Ok(Self { period, coeffs })
    }

    /// Bank with no modules: the mixer is identically 1.
    pub fn identity(period: usize) -> Result<Self> {
        Self::new(period, Vec::new())
    }

    /// The classical bank: c_j = 1 for j = 1..=modules.
    pub fn classical(period: usize, modules: usize) -> Result<Self> {
        Self::new(period, vec![1.0; modules])
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn modules(&self) -> usize {
        self.coeffs.len()
    }

    /// Mixer value 1 + sum_j 2 c_j cos(2 pi j n / T) at integer n.
    pub fn mixer_value(&self, n: usize) -> f64 {
        let t = self.period as u64;
        let base = (n as u64) % t;
        let mut acc = 1.0;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let j = (idx + 1) as u64;
            let m = (j * base) % t;
            let angle = 2.0 * std::f64::consts::PI * m as f64 / t as f64;
            acc += 2.0 * c * angle.cos();
        }
        acc
    }
}

/// The bank whose mixer is exactly T * sum_i delta[n - iT] for even T:
/// c_j = 1 for j < T/2 and c_{T/2} = 1/2.
pub fn impulse_train_bank(period: usize) -> Result<ModuleBank> {
    if period < 2 || !period.is_multiple_of(2) {
        return Err(Error::OddPeriod(period));
    }
    let m = period / 2;
    let mut coeffs = vec![1.0; m];
    coeffs[m - 1] = 0.5;
    ModuleBank::new(period, coeffs)
}

/// Multiplies a signal by the bank mixer. The length must be divisible by T.
pub fn modulate_1d(s: &[f64], bank: &ModuleBank) -> Result<Vec<f64>> {
    if !s.len().is_multiple_of(bank.period()) {
        return Err(Error::IndivisibleLength {
            len: s.len(),
            period: bank.period(),
        });
    }
    // One period of mixer values covers the whole record exactly.
    let mixer: Vec<f64> = (0..bank.period()).map(|n| bank.mixer_value(n)).collect();
    Ok(s.iter()
        .enumerate()
        .map(|(n, &v)| v * mixer[n % bank.period()])
        .collect())
}

fn check_reconstruct_cutoff(n: usize, period: usize, cutoff: usize) -> Result<()> {
    // Strict cutoff*2T < N so shifted replicas cannot fold into the passband.
    if 2 * cutoff * period >= n {
        return Err(Error::CutoffTooWide {
            cutoff,
            limit: n / (2 * period),
        });
    }
    Ok(())
}

/// Modular reconstruction: mix with the bank, then FFT lowpass.
pub fn modular_reconstruct_1d(s: &[f64], bank: &ModuleBank, cutoff_bin: usize) -> Result<Vec<f64>> {
    check_reconstruct_cutoff(s.len(), bank.period(), cutoff_bin)?;
    let mixed = modulate_1d(s, bank)?;
    fft_lowpass_1d(&mixed, cutoff_bin)
}

/// A 2-D lattice module bank: coefficients c_{j1,j2} on the rectangle
/// 0..=M1 x 0..=M2 with c_{0,0} fixed at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleBank2D {
    periods: (usize, usize),
    /// (M1+1) x (M2+1) grid, row-major, entry [0][0] = 1.
    coeffs: Vec<Vec<f64>>,
}

impl ModuleBank2D {
    pub fn new(periods: (usize, usize), coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if periods.0 < 1 || periods.1 < 1 {
            return Err(Error::InvalidPeriod(periods.0.min(periods.1)));
        }
        if coeffs.is_empty() || coeffs[0].is_empty() {
            return Err(Error::InvalidDimension(
                "2-D bank needs the c_{0,0} entry".into(),
            ));
        }
        let m1 = coeffs.len() - 1;
        let m2 = coeffs[0].len() - 1;
        if coeffs.iter().any(|row| row.len() != m2 + 1) {
            return Err(Error::InvalidDimension(
                "ragged 2-D coefficient grid".into(),
            ));
        }
        if m1 > max_modules(periods.0) {
            return Err(Error::ModuleCountExceeded {
                modules: m1,
                max: max_modules(periods.0),
            });
        }
        if m2 > max_modules(periods.1) {
            return Err(Error::ModuleCountExceeded {
                modules: m2,
                max: max_modules(periods.1),
            });
        }
        if coeffs.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidDimension(
                "bank coefficients must be finite".into(),
            ));
        }
        if (coeffs[0][0] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDimension("c_{0,0} must equal 1".into()));
        }
        Ok(Self { periods, coeffs })
    }

    /// Separable bank c_{j1,j2} = a_{j1} * b_{j2} from two 1-D banks.
    pub fn separable(a: &ModuleBank, b: &ModuleBank) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(a.modules() + 1);
        for j1 in 0..=a.modules() {
            let ca = if j1 == 0 { 1.0 } else { a.coeffs()[j1 - 1] };
            let row: Vec<f64> = (0..=b.modules())
                .map(|j2| {
                    let cb = if j2 == 0 { 1.0 } else { b.coeffs()[j2 - 1] };
                    ca * cb
                })
                .collect();
            coeffs.push(row);
        }
        Self::new((a.period(), b.period()), coeffs)
    }

    /// All-ones lattice bank (the classical 2-D method).
    pub fn classical(periods: (usize, usize), modules: (usize, usize)) -> Result<Self> {
        let coeffs = vec![vec![1.0; modules.1 + 1]; modules.0 + 1];
        Self::new(periods, coeffs)
    }

    /// Identity mixer (no modules).
    pub fn identity(periods: (usize, usize)) -> Result<Self> {
        Self::new(periods, vec![vec![1.0]])
    }

    pub fn periods(&self) -> (usize, usize) {
        self.periods
    }

    pub fn modules(&self) -> (usize, usize) {
        (self.coeffs.len() - 1, self.coeffs[0].len() - 1)
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    /// Lattice mixer value at integer position (n1, n2):
    /// 1 + axis cosine terms (weight 2) + cross products (weight 4).
    #[allow(clippy::needless_range_loop)] // j1, j2 are the lattice indices
    pub fn mixer_value(&self, n1: usize, n2: usize) -> f64 {
        let (t1, t2) = self.periods;
        let (m1, m2) = self.modules();
        let cos1: Vec<f64> = (0..=m1).map(|j| exact_cos(j, n1, t1)).collect();
        let cos2: Vec<f64> = (0..=m2).map(|j| exact_cos(j, n2, t2)).collect();
        let mut acc = 1.0;
        for j1 in 1..=m1 {
            acc += 2.0 * self.coeffs[j1][0] * cos1[j1];
        }
        for j2 in 1..=m2 {
            acc += 2.0 * self.coeffs[0][j2] * cos2[j2];
        }
        for j1 in 1..=m1 {
            for j2 in 1..=m2 {
                acc += 4.0 * self.coeffs[j1][j2] * cos1[j1] * cos2[j2];
            }
        }
        acc
    }
}

fn exact_cos(j: usize, n: usize, t: usize) -> f64 {
    let m = (j as u64 * (n as u64 % t as u64)) % t as u64;
    (2.0 * std::f64::consts::PI * m as f64 / t as f64).cos()
}

/// Multiplies a grid by the 2-D lattice mixer.
pub fn modulate_2d(s: &Grid, bank: &ModuleBank2D) -> Result<Grid> {
    let (t1, t2) = bank.periods();
    if !s.rows().is_multiple_of(t1) {
        return Err(Error::IndivisibleLength {
            len: s.rows(),
            period: t1,
        });
    }
    if !s.cols().is_multiple_of(t2) {
        return Err(Error::IndivisibleLength {
            len: s.cols(),
            period: t2,
        });
    }
    let mixer = Grid::from_fn(t1, t2, |r, c| bank.mixer_value(r, c));
    Ok(Grid::from_fn(s.rows(), s.cols(), |r, c| {
        s.get(r, c) * mixer.get(r % t1, c % t2)
    }))
}

/// 2-D modular reconstruction: lattice mix, then rectangular lowpass.
pub fn modular_reconstruct_2d(
    s: &Grid,
    bank: &ModuleBank2D,
    cutoffs: (usize, usize),
) -> Result<Grid> {
    let (t1, t2) = bank.periods();
    check_reconstruct_cutoff(s.rows(), t1, cutoffs.0)?;
    check_reconstruct_cutoff(s.cols(), t2, cutoffs.1)?;
    let mixed = modulate_2d(s, bank)?;
    fft_lowpass_2d(&mixed, cutoffs)
}
