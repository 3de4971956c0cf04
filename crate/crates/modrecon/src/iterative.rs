//! Relaxation recovery: x_{k+1} = x_k + lambda * (y - D(x_k)).
//!
//! `D` is the full distortion chain (decimate, interpolate, mix with the
//! variant's module bank, lowpass) and `y` is the same modular
//! reconstruction applied once to the observed interpolated waveform. When
//! ||I - lambda*D|| < 1 on the band the iterates converge to the unique
//! bandlimited fixed point with D(x) = y; the operator norm depends on the
//! kernel's phase, so convergence at a given lambda is not guaranteed for
//! every kernel/variant combination and a divergence guard aborts runaway
//! iterations instead of returning garbage.

use crate::error::{Error, Result};
use crate::interp::{decimate_2d, decimate_slice, interpolate_1d, interpolate_2d, Kernel};
use crate::modular::{modular_reconstruct_1d, modular_reconstruct_2d, ModuleBank, ModuleBank2D};
use crate::signals::Grid;

/// Which observation/operator pair the loop uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// No modules: D is plain lowpass of the re-interpolated iterate.
    Plain,
    /// Classical all-ones bank inside D and in the observation.
    HybridClassical,
    /// Least-squares-optimized bank inside D and in the observation.
    HybridOptimized,
}

/// Iteration settings. Hybrid variants must carry a bank whose period
/// matches the pipeline's T.
#[derive(Debug, Clone)]
pub struct IterativeConfig {
    pub iterations: usize,
    pub relaxation: f64,
    pub variant: Variant,
    pub bank: Option<ModuleBank>,
}

impl IterativeConfig {
    pub fn new(
        iterations: usize,
        relaxation: f64,
        variant: Variant,
        bank: Option<ModuleBank>,
    ) -> Result<Self> {
        if !(relaxation > 0.0 && relaxation < 2.0) {
            return Err(Error::InvalidDimension(format!(
                "relaxation {relaxation} outside (0, 2)"
            )));
        }
        Ok(Self {
            iterations,
            relaxation,
            variant,
            bank,
        })
    }

    fn resolve_bank(&self, period: usize) -> Result<ModuleBank> {
        match self.variant {
            Variant::Plain => ModuleBank::identity(period),
            Variant::HybridClassical | Variant::HybridOptimized => {
                let bank = self.bank.as_ref().ok_or(Error::MissingBank)?;
                if bank.period() != period {
                    return Err(Error::PeriodMismatch {
                        kernel: period,
                        series: bank.period(),
                    });
                }
                Ok(bank.clone())
            }
        }
    }
}

/// 2-D iteration settings.
#[derive(Debug, Clone)]
pub struct IterativeConfig2D {
    pub iterations: usize,
    pub relaxation: f64,
    pub variant: Variant,
    pub bank: Option<ModuleBank2D>,
}

impl IterativeConfig2D {
    pub fn new(
        iterations: usize,
        relaxation: f64,
        variant: Variant,
        bank: Option<ModuleBank2D>,
    ) -> Result<Self> {
        if !(relaxation > 0.0 && relaxation < 2.0) {
            return Err(Error::InvalidDimension(format!(
                "relaxation {relaxation} outside (0, 2)"
            )));
        }
        Ok(Self {
            iterations,
            relaxation,
            variant,
            bank,
        })
    }

    fn resolve_bank(&self, periods: (usize, usize)) -> Result<ModuleBank2D> {
        match self.variant {
            Variant::Plain => ModuleBank2D::identity(periods),
            Variant::HybridClassical | Variant::HybridOptimized => {
                let bank = self.bank.as_ref().ok_or(Error::MissingBank)?;
                if bank.periods() != periods {
                    return Err(Error::PeriodMismatch {
                        kernel: periods.0,
                        series: bank.periods().0,
                    });
                }
                Ok(bank.clone())
            }
        }
    }
}

/// One application of the distortion chain
/// D(x) = modular_reconstruct(interpolate(decimate(x))).
/// `bank = None` means the plain (mixer = 1) variant.
pub fn distortion_operator(
    x: &[f64],
    kernel: &Kernel,
    bank: Option<&ModuleBank>,
    cutoff_bin: usize,
) -> Result<Vec<f64>> {
    let identity;
    let bank = match bank {
        Some(b) => b,
        None => {
            identity = ModuleBank::identity(kernel.period())?;
            &identity
        }
    };
    let series = decimate_slice(x, kernel.period())?;
    let interpolated = interpolate_1d(&series, kernel)?;
    modular_reconstruct_1d(&interpolated, bank, cutoff_bin)
}

/// 2-D distortion chain with separable kernels.
pub fn distortion_operator_2d(
    x: &Grid,
    kernels: (&Kernel, &Kernel),
    bank: Option<&ModuleBank2D>,
    cutoffs: (usize, usize),
) -> Result<Grid> {
    let periods = (kernels.0.period(), kernels.1.period());
    let identity;
    let bank = match bank {
        Some(b) => b,
        None => {
            identity = ModuleBank2D::identity(periods)?;
            &identity
        }
    };
    let series = decimate_2d(x, periods)?;
    let interpolated = interpolate_2d(&series, kernels, x.shape())?;
    modular_reconstruct_2d(&interpolated, bank, cutoffs)
}

fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

const DIVERGENCE_ENERGY_RATIO: f64 = 1e6;

/// Runs the relaxation loop on an observed interpolated waveform, invoking
/// `on_iterate(k, x_k)` for k = 0..=iterations. Returns the final iterate.
pub fn iterative_reconstruct_with(
    s_observed: &[f64],
    kernel: &Kernel,
    cfg: &IterativeConfig,
    cutoff_bin: usize,
    mut on_iterate: impl FnMut(usize, &[f64]),
) -> Result<Vec<f64>> {
    let bank = cfg.resolve_bank(kernel.period())?;
    let y = modular_reconstruct_1d(s_observed, &bank, cutoff_bin)?;
    let guard = DIVERGENCE_ENERGY_RATIO * energy(s_observed).max(f64::MIN_POSITIVE);
    let lambda = cfg.relaxation;

    let mut x: Vec<f64> = y.iter().map(|v| lambda * v).collect();
    on_iterate(0, &x);
    for k in 1..=cfg.iterations {
        let dx = distortion_operator(&x, kernel, Some(&bank), cutoff_bin)?;
        for ((xi, &yi), &di) in x.iter_mut().zip(y.iter()).zip(dx.iter()) {
            *xi += lambda * (yi - di);
        }
        if energy(&x) > guard {
            return Err(Error::Divergence { iteration: k });
        }
        on_iterate(k, &x);
    }
    Ok(x)
}

/// Final iterate of the relaxation loop.
pub fn iterative_reconstruct(
    s_observed: &[f64],
    kernel: &Kernel,
    cfg: &IterativeConfig,
    cutoff_bin: usize,
) -> Result<Vec<f64>> {
    iterative_reconstruct_with(s_observed, kernel, cfg, cutoff_bin, |_, _| {})
}

/// All iterates x_0..x_iterations.
pub fn iterative_reconstruct_trace(
    s_observed: &[f64],
    kernel: &Kernel,
    cfg: &IterativeConfig,
    cutoff_bin: usize,
) -> Result<Vec<Vec<f64>>> {
    let mut trace = Vec::with_capacity(cfg.iterations + 1);
    iterative_reconstruct_with(s_observed, kernel, cfg, cutoff_bin, |_, x| {
        trace.push(x.to_vec())
    })?;
    Ok(trace)
}

/// 2-D relaxation loop with a per-iterate callback.
pub fn iterative_reconstruct_2d_with(
    s_observed: &Grid,
    kernels: (&Kernel, &Kernel),
    cfg: &IterativeConfig2D,
    cutoffs: (usize, usize),
    mut on_iterate: impl FnMut(usize, &Grid),
) -> Result<Grid> {
    let periods = (kernels.0.period(), kernels.1.period());
    let bank = cfg.resolve_bank(periods)?;
    let y = modular_reconstruct_2d(s_observed, &bank, cutoffs)?;
    let guard = DIVERGENCE_ENERGY_RATIO * energy(s_observed.data()).max(f64::MIN_POSITIVE);
    let lambda = cfg.relaxation;

    let mut x = y.clone();
    for v in x.data_mut() {
        *v *= lambda;
    }
    on_iterate(0, &x);
    for k in 1..=cfg.iterations {
        let dx = distortion_operator_2d(&x, kernels, Some(&bank), cutoffs)?;
        for ((xi, &yi), &di) in x
            .data_mut()
            .iter_mut()
            .zip(y.data().iter())
            .zip(dx.data().iter())
        {
            *xi += lambda * (yi - di);
        }
        if energy(x.data()) > guard {
            return Err(Error::Divergence { iteration: k });
        }
        on_iterate(k, &x);
    }
    Ok(x)
}

/// Final iterate of the 2-D relaxation loop.
pub fn iterative_reconstruct_2d(
    s_observed: &Grid,
    kernels: (&Kernel, &Kernel),
    cfg: &IterativeConfig2D,
    cutoffs: (usize, usize),
) -> Result<Grid> {
    iterative_reconstruct_2d_with(s_observed, kernels, cfg, cutoffs, |_, _| {})
}
