//! Least-squares design of module coefficients.
//!
//! The recovery condition for a bank (c_1..c_M) is that the coefficient-
//! weighted sum of shifted kernel spectra equals 1 across the passband:
//!
//! ```text
//! Hbar(k) + sum_{j=1..M} c_j * [Hbar(k - jN/T) + Hbar(k + jN/T)] = 1
//! ```
//!
//! where `Hbar = H / T` is the kernel DFT normalized by the period. The
//! normalization folds the 1/T factor of the sampled-signal spectrum into H,
//! which makes "sum of replicas = 1" the exact recovery condition and makes
//! the impulse-train bank (1, ..., 1, 1/2) an exact residual-zero point for
//! interpolating kernels at even T.
//!
//! One linear equation per passband bin k = 0..=K_pass, stacked real parts
//! over imaginary parts, gives an overdetermined real system solved by the
//! minimum-norm least-squares solution (SVD with a rank tolerance of
//! 1e-10 times the largest column norm). At j = T/2 the two shifts coincide
//! mod N and the column formula produces the single residue term twice, so
//! the impulse-train coefficient c_{T/2} = 1/2 is exactly representable.

use crate::error::{Error, Result};
use crate::fft;
use crate::interp::Kernel;
use crate::modular::{max_modules, ModuleBank, ModuleBank2D};
use nalgebra::{DMatrix, DVector};
use rustfft::num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

mod table;

pub use table::{
    format_coeff_table, load_coeff_table, parse_coeff_table, save_coeff_table, CoeffKey,
    CoeffRecord, CoeffTable,
};

/// Normalized N-point kernel spectrum Hbar(k) = DFT(h)/T.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpectrum {
    values: Vec<Complex64>,
    period: usize,
}

impl KernelSpectrum {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Places the kernel taps circularly in an n-point record, transforms, and
/// divides by T.
pub fn kernel_spectrum(kernel: &Kernel, n: usize) -> Result<KernelSpectrum> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "record length {n} must be even and at least 2"
        )));
    }
    if !n.is_multiple_of(kernel.period()) {
        return Err(Error::IndivisibleLength {
            len: n,
            period: kernel.period(),
        });
    }
    let h = kernel.expand_circular(n)?;
    let mut values = fft::forward_real(&h);
    let scale = 1.0 / kernel.period() as f64;
    for v in values.iter_mut() {
        *v *= scale;
    }
    Ok(KernelSpectrum {
        values,
        period: kernel.period(),
    })
}

/// The two-shift replica sum of Hbar for module j:
/// Hbar_j(k) = Hbar((k - jN/T) mod N) + Hbar((k + jN/T) mod N).
///
/// Equals DFT(h[n] * 2cos(2 pi j n / T)) / T. For j = 0 both shifts coincide
/// at zero, giving 2*Hbar(k); likewise at j = T/2 (even T) the shifts
/// coincide at N/2 and the sum doubles the single residue term.
pub fn build_hj(spectrum: &KernelSpectrum, j: usize) -> Result<Vec<Complex64>> {
    let t = spectrum.period();
    if j > t / 2 {
        return Err(Error::ShiftOutOfRange {
            shift: j,
            max: t / 2,
        });
    }
    let n = spectrum.len();
    let shift = (j * (n / t)) % n;
    let values = spectrum.values();
    Ok((0..n)
        .map(|k| values[(k + n - shift) % n] + values[(k + shift) % n])
        .collect())
}

/// The stacked passband least-squares system.
///
/// `matrix` is R x M with R = 2*(K_pass+1): real parts of the column samples
/// Hbar_j(0..=K_pass) stacked over imaginary parts. `rhs` holds 1 - Hbar(k)
/// split the same way.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub passband_max_bin: usize,
}

impl DesignSystem {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn modules(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Default passband limit: bins strictly inside the Nyquist band of the
/// sampled signal, K_pass = N/(2T) - 1.
pub fn default_passband_max_bin(n: usize, period: usize) -> usize {
    n / (2 * period) - 1
}

fn assemble_impl(
    kernel: &Kernel,
    n: usize,
    modules: usize,
    passband_max_bin: usize,
    bin_limit: usize,
) -> Result<DesignSystem> {
    let t = kernel.period();
    let max = max_modules(t);
    if modules > max {
        return Err(Error::ModuleCountExceeded { modules, max });
    }
    if passband_max_bin >= bin_limit {
        return Err(Error::PassbandTooWide {
            max_bin: passband_max_bin,
            limit: bin_limit,
        });
    }
    let spectrum = kernel_spectrum(kernel, n)?;
    let k_rows = passband_max_bin + 1;
    let mut matrix = DMatrix::zeros(2 * k_rows, modules);
    for j in 1..=modules {
        let hj = build_hj(&spectrum, j)?;
        for k in 0..k_rows {
            matrix[(k, j - 1)] = hj[k].re;
            matrix[(k_rows + k, j - 1)] = hj[k].im;
        }
    }
    let mut rhs = DVector::zeros(2 * k_rows);
    for k in 0..k_rows {
        rhs[k] = 1.0 - spectrum.values()[k].re;
        rhs[k_rows + k] = -spectrum.values()[k].im;
    }
    Ok(DesignSystem {
        matrix,
        rhs,
        passband_max_bin,
    })
}

/// Builds the passband system with the default bin range K_pass < N/(2T).
pub fn assemble_system_1d(
    kernel: &Kernel,
    n: usize,
    modules: usize,
    passband_max_bin: usize,
) -> Result<DesignSystem> {
    assemble_impl(
        kernel,
        n,
        modules,
        passband_max_bin,
        n / (2 * kernel.period()),
    )
}

/// Variant permitting the wider row range k = 0..=N/T for comparison with
/// designs that optimize over bins the sampled signal cannot occupy.
pub fn assemble_system_1d_wide(
    kernel: &Kernel,
    n: usize,
    modules: usize,
    passband_max_bin: usize,
) -> Result<DesignSystem> {
    assemble_impl(
        kernel,
        n,
        modules,
        passband_max_bin,
        n / kernel.period() + 1,
    )
}

fn min_norm_solve(matrix: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<Vec<f64>> {
    if matrix.ncols() == 0 {
        return Ok(Vec::new());
    }
    let max_col_norm = (0..matrix.ncols())
        .map(|c| matrix.column(c).norm())
        .fold(0.0f64, f64::max);
    if max_col_norm == 0.0 {
        return Err(Error::DegenerateSystem);
    }
    let rank_tol = 1e-10 * max_col_norm;
    let svd = matrix.clone().svd(true, true);
    let solution = svd
        .solve(rhs, rank_tol)
        .map_err(|_| Error::DegenerateSystem)?;
    Ok(solution.iter().copied().collect())
}

/// Minimum-norm least-squares solution of `matrix * c = rhs`. When the
/// normal matrix is nonsingular this equals the pseudo-inverse solution
/// (H^T H)^-1 H^T B; rank-deficient systems fall back to the minimum-norm
/// point instead of failing.
pub fn solve_least_squares(sys: &DesignSystem) -> Result<Vec<f64>> {
    min_norm_solve(&sys.matrix, &sys.rhs)
}

fn residual_impl(matrix: &DMatrix<f64>, rhs: &DVector<f64>, coeffs: &[f64]) -> Result<f64> {
    if coeffs.len() != matrix.ncols() {
        return Err(Error::CoeffLengthMismatch {
            expected: matrix.ncols(),
            got: coeffs.len(),
        });
    }
    let c = DVector::from_column_slice(coeffs);
    let r = matrix * c - rhs;
    Ok(r.norm_squared())
}

/// Squared Euclidean norm of (matrix * c - rhs): the summed squared passband
/// deviation of the coefficient-weighted replica sum from unity.
pub fn residual_error(sys: &DesignSystem, coeffs: &[f64]) -> Result<f64> {
    residual_impl(&sys.matrix, &sys.rhs, coeffs)
}

/// Assemble, solve, and evaluate in one step, producing a persistable record.
pub fn solve_coefficients_1d(
    kernel: &Kernel,
    n: usize,
    modules: usize,
    passband_max_bin: usize,
) -> Result<CoeffRecord> {
    let sys = assemble_system_1d(kernel, n, modules, passband_max_bin)?;
    let coeffs = solve_least_squares(&sys)?;
    let residual = residual_error(&sys, &coeffs)?;
    Ok(CoeffRecord {
        kernel_id: kernel.kind().id(),
        period: kernel.period(),
        len: n,
        modules,
        passband_max_bin,
        residual_error: residual,
        coeffs,
    })
}

/// How the 2-D coefficient grid is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode2D {
    /// One least-squares system over the passband rectangle with all
    /// c_{j1,j2} as unknowns (c_{0,0} fixed at 1).
    Joint,
    /// Solve each axis in 1-D and take c_{j1,j2} = c_{j1} * c_{j2}.
    Separable,
}

/// Result of a 2-D solve: the lattice bank plus the joint-system residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution2D {
    pub bank: ModuleBank2D,
    pub residual_error: f64,
}

struct JointSystem2D {
    matrix: DMatrix<f64>,
    rhs: DVector<f64>,
    modules: (usize, usize),
}

impl JointSystem2D {
    /// Unknown index for lattice position (j1, j2), skipping (0, 0).
    fn unknown_index(&self, j1: usize, j2: usize) -> usize {
        j1 * (self.modules.1 + 1) + j2 - 1
    }

    fn pack(&self, bank_coeffs: &[Vec<f64>]) -> Vec<f64> {
        let mut c = vec![0.0; (self.modules.0 + 1) * (self.modules.1 + 1) - 1];
        for (j1, row) in bank_coeffs.iter().enumerate() {
            for (j2, &v) in row.iter().enumerate() {
                if j1 == 0 && j2 == 0 {
                    continue;
                }
                c[self.unknown_index(j1, j2)] = v;
            }
        }
        c
    }
}

#[allow(clippy::needless_range_loop)] // k and j indices mirror the bin/lattice structure
fn build_joint_system(
    kernels: (&Kernel, &Kernel),
    dims: (usize, usize),
    modules: (usize, usize),
    passbands: (usize, usize),
) -> Result<JointSystem2D> {
    for (kernel, n, m, p) in [
        (kernels.0, dims.0, modules.0, passbands.0),
        (kernels.1, dims.1, modules.1, passbands.1),
    ] {
        let max = max_modules(kernel.period());
        if m > max {
            return Err(Error::ModuleCountExceeded { modules: m, max });
        }
        let limit = n / (2 * kernel.period());
        if p >= limit {
            return Err(Error::PassbandTooWide { max_bin: p, limit });
        }
    }
    let spec1 = kernel_spectrum(kernels.0, dims.0)?;
    let spec2 = kernel_spectrum(kernels.1, dims.1)?;

    // Per-axis factors: E_0 = Hbar (single term), E_j = build_hj for j >= 1.
    // The lattice column for (j1, j2) is E_{j1}(k1) * E_{j2}(k2): the sum
    // over sign combinations (+-j1, +-j2) of the shifted separable spectrum.
    let factors = |spec: &KernelSpectrum, m: usize| -> Result<Vec<Vec<Complex64>>> {
        let mut out = vec![spec.values().to_vec()];
        for j in 1..=m {
            out.push(build_hj(spec, j)?);
        }
        Ok(out)
    };
    let e1 = factors(&spec1, modules.0)?;
    let e2 = factors(&spec2, modules.1)?;

    let unknowns = (modules.0 + 1) * (modules.1 + 1) - 1;
    let bins = (passbands.0 + 1) * (passbands.1 + 1);
    let rows = 2 * bins;
    if unknowns > rows {
        return Err(Error::JointSystemTooLarge { unknowns, rows });
    }

    let mut matrix = DMatrix::zeros(rows, unknowns);
    let mut rhs = DVector::zeros(rows);
    let mut bin = 0;
    for k1 in 0..=passbands.0 {
        for k2 in 0..=passbands.1 {
            let target = Complex64::new(1.0, 0.0) - e1[0][k1] * e2[0][k2];
            rhs[bin] = target.re;
            rhs[bins + bin] = target.im;
            let mut col = 0;
            for j1 in 0..=modules.0 {
                for j2 in 0..=modules.1 {
                    if j1 == 0 && j2 == 0 {
                        continue;
                    }
                    let entry = e1[j1][k1] * e2[j2][k2];
                    matrix[(bin, col)] = entry.re;
                    matrix[(bins + bin, col)] = entry.im;
                    col += 1;
                }
            }
            bin += 1;
        }
    }
    Ok(JointSystem2D {
        matrix,
        rhs,
        modules,
    })
}

/// Solves for a 2-D lattice bank over the passband rectangle. Both modes
/// report the residual of the joint tensor system at the returned grid, so
/// they are directly comparable.
pub fn solve_coefficients_2d(
    kernels: (&Kernel, &Kernel),
    dims: (usize, usize),
    modules: (usize, usize),
    passbands: (usize, usize),
    mode: SolveMode2D,
) -> Result<Solution2D> {
    let joint = build_joint_system(kernels, dims, modules, passbands)?;
    let periods = (kernels.0.period(), kernels.1.period());

    let coeff_grid = match mode {
        SolveMode2D::Joint => {
            let solution = min_norm_solve(&joint.matrix, &joint.rhs)?;
            let mut grid = vec![vec![0.0; modules.1 + 1]; modules.0 + 1];
            grid[0][0] = 1.0;
            for (j1, row) in grid.iter_mut().enumerate() {
                for (j2, slot) in row.iter_mut().enumerate() {
                    if j1 == 0 && j2 == 0 {
                        continue;
                    }
                    *slot = solution[joint.unknown_index(j1, j2)];
                }
            }
            grid
        }
        SolveMode2D::Separable => {
            let a = solve_coefficients_1d(kernels.0, dims.0, modules.0, passbands.0)?;
            let b = solve_coefficients_1d(kernels.1, dims.1, modules.1, passbands.1)?;
            let bank_a = ModuleBank::new(periods.0, a.coeffs)?;
            let bank_b = ModuleBank::new(periods.1, b.coeffs)?;
            ModuleBank2D::separable(&bank_a, &bank_b)?.coeffs().to_vec()
        }
    };

    let packed = joint.pack(&coeff_grid);
    let residual = residual_impl(&joint.matrix, &joint.rhs, &packed)?;
    Ok(Solution2D {
        bank: ModuleBank2D::new(periods, coeff_grid)?,
        residual_error: residual,
    })
}

/// Builds the optimized 1-D bank for a kernel in one call.
pub fn optimized_bank_1d(
    kernel: &Kernel,
    n: usize,
    modules: usize,
    passband_max_bin: usize,
) -> Result<ModuleBank> {
    let record = solve_coefficients_1d(kernel, n, modules, passband_max_bin)?;
    ModuleBank::new(kernel.period(), record.coeffs)
}

/// Pretty form of a coefficient slice for CLI output.
pub fn format_coeffs(coeffs: &[f64]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{c:.6}");
    }
    out
}

/// Convenience: load a table and look up one record.
pub fn lookup_coeffs(path: &Path, key: &CoeffKey) -> Result<CoeffRecord> {
    let table = load_coeff_table(path)?;
    table.find(key).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::KernelKind;
    use crate::signals::seeded_rng;
    use rand::Rng;
    use std::f64::consts::PI;

    fn sh(t: usize) -> Kernel {
        Kernel::make(KernelKind::SampleHold, t).unwrap()
    }

    #[test]
    fn delta_kernel_spectrum_is_flat() {
        let spec = kernel_spectrum(&sh(1), 16).unwrap();
        for v in spec.values() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn sample_hold_t2_spectrum() {
        let spec = kernel_spectrum(&sh(2), 8).unwrap();
        for (k, v) in spec.values().iter().enumerate() {
            let expected =
                (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -PI * k as f64 / 4.0)) / 2.0;
            assert!((v - expected).norm() < 1e-12, "bin {k}");
        }
        assert!((spec.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(spec.values()[4].norm() < 1e-12);
    }

    #[test]
    fn linear_t2_spectrum_is_real_raised_cosine() {
        let kernel = Kernel::make(KernelKind::Linear, 2).unwrap();
        let spec = kernel_spectrum(&kernel, 8).unwrap();
        for (k, v) in spec.values().iter().enumerate() {
            let expected = (1.0 + (PI * k as f64 / 4.0).cos()) / 2.0;
            assert!((v.re - expected).abs() < 1e-12, "bin {k}");
            assert!(v.im.abs() < 1e-12, "bin {k}");
        }
    }

    #[test]
    fn spectrum_rejects_bad_lengths() {
        assert!(matches!(
            kernel_spectrum(&sh(9), 1000),
            Err(Error::IndivisibleLength { .. })
        ));
        assert!(matches!(
            kernel_spectrum(&sh(9), 999),
            Err(Error::InvalidDimension(_))
        ));
        assert!(kernel_spectrum(&sh(9), 990).is_ok());
    }

    #[test]
    fn hj_at_zero_doubles_spectrum() {
        let spec = kernel_spectrum(&sh(4), 32).unwrap();
        let h0 = build_hj(&spec, 0).unwrap();
        for (a, b) in h0.iter().zip(spec.values()) {
            assert!((a - 2.0 * b).norm() < 1e-12);
        }
    }

    #[test]
    fn hj_half_period_shift() {
        // S&H T=2, n=8, j=1: the +-N/2 shifts coincide, giving
        // 2*Hbar(k-4) = 1 - e^{-i pi k / 4}.
        let spec = kernel_spectrum(&sh(2), 8).unwrap();
        let h1 = build_hj(&spec, 1).unwrap();
        for (k, v) in h1.iter().enumerate() {
            let expected =
                Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -PI * k as f64 / 4.0);
            assert!((v - expected).norm() < 1e-12, "bin {k}");
        }
    }

    #[test]
    fn hj_rejects_out_of_range_shift() {
        let spec = kernel_spectrum(&sh(4), 32).unwrap();
        assert!(matches!(
            build_hj(&spec, 3),
            Err(Error::ShiftOutOfRange { shift: 3, max: 2 })
        ));
    }

    #[test]
    fn hj_matches_modulated_kernel_dft() {
        // Cross-check of the two stated forms: shift-sum vs DFT of
        // h[n] * 2cos(2 pi j n / T).
        let n = 48;
        let mut rng = seeded_rng(33);
        let taps: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let kernel = Kernel::custom(taps, -3, 4).unwrap();
        let spec = kernel_spectrum(&kernel, n).unwrap();
        let h = kernel.expand_circular(n).unwrap();
        for j in 0..=2usize {
            let hj = build_hj(&spec, j).unwrap();
            let modulated: Vec<f64> = h
                .iter()
                .enumerate()
                .map(|(i, &v)| v * 2.0 * (2.0 * PI * (j * i % 4) as f64 / 4.0).cos())
                .collect();
            let mut reference = fft::forward_real(&modulated);
            for v in reference.iter_mut() {
                *v /= 4.0;
            }
            let scale = hj.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (a, b) in hj.iter().zip(reference.iter()) {
                assert!((a - b).norm() <= 1e-9 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn assemble_for_delta_kernel() {
        // T=1 admits no modules; the M=0 system is empty with zero rhs.
        assert!(matches!(
            assemble_system_1d(&sh(1), 16, 1, 3),
            Err(Error::ModuleCountExceeded { modules: 1, max: 0 })
        ));
        let sys = assemble_system_1d(&sh(1), 16, 0, 3).unwrap();
        assert_eq!(sys.modules(), 0);
        assert!(sys.rhs.norm() < 1e-12);
    }

    #[test]
    fn assemble_sh_t2_small() {
        let sys = assemble_system_1d(&sh(2), 8, 1, 1).unwrap();
        assert_eq!(sys.rows(), 4);
        assert_eq!(sys.modules(), 1);
        // DC rhs rows are exactly zero because Hbar(0) = 1.
        assert_eq!(sys.rhs[0], 0.0);
        assert_eq!(sys.rhs[2], 0.0);
        // Solver recovers the impulse-train weight 1/2 exactly.
        let c = solve_least_squares(&sys).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-12);
        assert!(residual_error(&sys, &c).unwrap() < 1e-24);
    }

    #[test]
    fn row_count_dominates_unknowns() {
        for m in 0..=5usize {
            let sys = assemble_system_1d(&sh(10), 1000, m, 49).unwrap();
            assert_eq!(sys.rows(), 100);
            assert!(sys.rows() >= sys.modules());
        }
    }

    #[test]
    fn passband_limits() {
        assert!(matches!(
            assemble_system_1d(&sh(10), 1000, 5, 50),
            Err(Error::PassbandTooWide {
                max_bin: 50,
                limit: 50
            })
        ));
        // The wider row range is available explicitly.
        assert!(assemble_system_1d_wide(&sh(10), 1000, 5, 100).is_ok());
        assert!(matches!(
            assemble_system_1d_wide(&sh(10), 1000, 5, 101),
            Err(Error::PassbandTooWide { .. })
        ));
    }

    #[test]
    fn zero_rhs_solves_to_zero() {
        let sys = DesignSystem {
            matrix: DMatrix::from_element(6, 1, 2.0),
            rhs: DVector::zeros(6),
            passband_max_bin: 2,
        };
        let c = solve_least_squares(&sys).unwrap();
        assert_eq!(c, vec![0.0]);
    }

    #[test]
    fn degenerate_system_is_an_error() {
        let sys = DesignSystem {
            matrix: DMatrix::zeros(4, 2),
            rhs: DVector::from_element(4, 1.0),
            passband_max_bin: 1,
        };
        assert!(matches!(
            solve_least_squares(&sys),
            Err(Error::DegenerateSystem)
        ));
    }

    #[test]
    fn duplicate_columns_split_weight() {
        let col = [1.0, 2.0, -1.0, 0.5];
        let mut matrix = DMatrix::zeros(4, 2);
        for (i, &v) in col.iter().enumerate() {
            matrix[(i, 0)] = v;
            matrix[(i, 1)] = v;
        }
        let rhs = DVector::from_column_slice(&col);
        let sys = DesignSystem {
            matrix,
            rhs,
            passband_max_bin: 1,
        };
        let c = solve_least_squares(&sys).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-10);
        assert!((c[1] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn impulse_train_solution_sh_t10() {
        let record = solve_coefficients_1d(&sh(10), 1000, 5, 49).unwrap();
        let expected = [1.0, 1.0, 1.0, 1.0, 0.5];
        for (c, e) in record.coeffs.iter().zip(expected.iter()) {
            assert!((c - e).abs() < 1e-6);
        }
        assert!(record.residual_error <= 1e-12);
    }

    #[test]
    fn impulse_train_solution_linear_t10() {
        let kernel = Kernel::make(KernelKind::Linear, 10).unwrap();
        let record = solve_coefficients_1d(&kernel, 1000, 5, 49).unwrap();
        let expected = [1.0, 1.0, 1.0, 1.0, 0.5];
        for (c, e) in record.coeffs.iter().zip(expected.iter()) {
            assert!((c - e).abs() < 1e-6);
        }
        assert!(record.residual_error <= 1e-12);
    }

    #[test]
    fn odd_period_all_ones_solution() {
        for t in [3usize, 9] {
            let kernel = sh(t);
            let n = t * 110;
            let m = (t - 1) / 2;
            let kpass = default_passband_max_bin(n, t);
            let record = solve_coefficients_1d(&kernel, n, m, kpass).unwrap();
            for c in &record.coeffs {
                assert!((c - 1.0).abs() < 1e-6, "T={t}");
            }
            assert!(record.residual_error <= 1e-10, "T={t}");
        }
    }

    #[test]
    fn exactness_family_even_t() {
        for kind in [
            KernelKind::SampleHold,
            KernelKind::Linear,
            KernelKind::CubicKeys(-0.5),
        ] {
            for t in [2usize, 4, 10] {
                let kernel = Kernel::make(kind.clone(), t).unwrap();
                let n = 40 * t;
                let record =
                    solve_coefficients_1d(&kernel, n, t / 2, default_passband_max_bin(n, t))
                        .unwrap();
                assert!(
                    record.residual_error <= 1e-10,
                    "{} T={t}: e = {}",
                    kernel.kind().id(),
                    record.residual_error
                );
                assert!(
                    (record.coeffs[t / 2 - 1] - 0.5).abs() < 1e-6,
                    "{} T={t}",
                    kernel.kind().id()
                );
            }
        }
    }

    #[test]
    fn residual_optimality_under_perturbation() {
        let kernel = Kernel::make(KernelKind::NthOrderHold(2), 6).unwrap();
        let n = 120;
        let sys = assemble_system_1d(&kernel, n, 3, default_passband_max_bin(n, 6)).unwrap();
        let c = solve_least_squares(&sys).unwrap();
        let base = residual_error(&sys, &c).unwrap();
        let mut rng = seeded_rng(7);
        for _ in 0..100 {
            let perturbed: Vec<f64> = c.iter().map(|v| v + rng.gen_range(-0.5..0.5)).collect();
            let e = residual_error(&sys, &perturbed).unwrap();
            assert!(e >= base - 1e-12);
        }
    }

    #[test]
    fn normal_equation_stationarity() {
        for kind in [KernelKind::SampleHold, KernelKind::CubicKeys(-0.5)] {
            let kernel = Kernel::make(kind, 10).unwrap();
            let sys = assemble_system_1d(&kernel, 1000, 3, 49).unwrap();
            let c = solve_least_squares(&sys).unwrap();
            let cv = DVector::from_column_slice(&c);
            let gradient = sys.matrix.transpose() * (&sys.matrix * cv - &sys.rhs);
            let scale = (sys.matrix.transpose() * &sys.rhs).norm();
            assert!(gradient.norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn optimal_dominates_classical() {
        for kind in [
            KernelKind::SampleHold,
            KernelKind::Linear,
            KernelKind::NthOrderHold(2),
            KernelKind::CubicKeys(-0.5),
        ] {
            for t in [4usize, 10] {
                let kernel = Kernel::make(kind.clone(), t).unwrap();
                let n = 100 * t;
                for m in 1..=max_modules(t) {
                    let sys =
                        assemble_system_1d(&kernel, n, m, default_passband_max_bin(n, t)).unwrap();
                    let c = solve_least_squares(&sys).unwrap();
                    let opt = residual_error(&sys, &c).unwrap();
                    let ones = residual_error(&sys, &vec![1.0; m]).unwrap();
                    assert!(opt <= ones + 1e-12, "{:?} T={t} M={m}", kernel.kind());
                }
            }
        }
    }

    #[test]
    fn classical_error_monotone_in_modules() {
        for kind in [KernelKind::SampleHold, KernelKind::Linear] {
            for t in [4usize, 10] {
                let kernel = Kernel::make(kind.clone(), t).unwrap();
                let n = 100 * t;
                let kpass = default_passband_max_bin(n, t);
                let mut previous = f64::INFINITY;
                for m in 0..=max_modules(t) {
                    let sys = assemble_system_1d(&kernel, n, m, kpass).unwrap();
                    let e = residual_error(&sys, &vec![1.0; m]).unwrap();
                    assert!(e <= previous + 1e-12, "{:?} T={t} M={m}", kernel.kind());
                    previous = e;
                }
            }
        }
    }

    #[test]
    fn classical_strictly_worse_when_optimum_differs() {
        let sys = assemble_system_1d(&sh(10), 1000, 5, 49).unwrap();
        let c = solve_least_squares(&sys).unwrap();
        let opt = residual_error(&sys, &c).unwrap();
        let ones = residual_error(&sys, &[1.0; 5]).unwrap();
        assert!(ones > opt);
        assert!(matches!(
            residual_error(&sys, &[1.0; 4]),
            Err(Error::CoeffLengthMismatch { .. })
        ));
    }

    #[test]
    fn residual_zero_for_flat_spectrum() {
        // h = T * delta has Hbar = 1, so the rhs vanishes and c = 0 is exact.
        let kernel = Kernel::custom(vec![2.0], 0, 2).unwrap();
        let sys = assemble_system_1d(&kernel, 32, 1, 7).unwrap();
        assert!(residual_error(&sys, &[0.0]).unwrap() < 1e-24);
    }

    #[test]
    fn joint_and_separable_agree_at_full_modules() {
        let k1 = sh(4);
        let k2 = sh(4);
        let dims = (64, 64);
        let passbands = (7, 7);
        let joint =
            solve_coefficients_2d((&k1, &k2), dims, (2, 2), passbands, SolveMode2D::Joint).unwrap();
        let separable =
            solve_coefficients_2d((&k1, &k2), dims, (2, 2), passbands, SolveMode2D::Separable)
                .unwrap();
        assert!(joint.residual_error <= 1e-10);
        assert!(separable.residual_error <= 1e-10);
        for (ra, rb) in joint
            .bank
            .coeffs()
            .iter()
            .zip(separable.bank.coeffs().iter())
        {
            for (a, b) in ra.iter().zip(rb.iter()) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn empty_2d_solve_reports_plain_residual() {
        let k1 = sh(4);
        let k2 = sh(2);
        let dims = (32, 16);
        let solution =
            solve_coefficients_2d((&k1, &k2), dims, (0, 0), (3, 3), SolveMode2D::Joint).unwrap();
        let s1 = kernel_spectrum(&k1, 32).unwrap();
        let s2 = kernel_spectrum(&k2, 16).unwrap();
        let mut expected = 0.0;
        for k1b in 0..=3usize {
            for k2b in 0..=3usize {
                let g = s1.values()[k1b] * s2.values()[k2b];
                expected += (Complex64::new(1.0, 0.0) - g).norm_sqr();
            }
        }
        assert!((solution.residual_error - expected).abs() < 1e-12);
    }

    #[test]
    fn flat_2d_spectra_solve_to_zero() {
        let k1 = Kernel::custom(vec![2.0], 0, 2).unwrap();
        let k2 = Kernel::custom(vec![2.0], 0, 2).unwrap();
        let solution =
            solve_coefficients_2d((&k1, &k2), (16, 16), (1, 1), (3, 3), SolveMode2D::Joint)
                .unwrap();
        for (j1, row) in solution.bank.coeffs().iter().enumerate() {
            for (j2, &c) in row.iter().enumerate() {
                if j1 == 0 && j2 == 0 {
                    continue;
                }
                assert!(c.abs() < 1e-10);
            }
        }
        assert!(solution.residual_error < 1e-20);
    }

    #[test]
    fn joint_system_size_guard() {
        let k1 = sh(10);
        let k2 = sh(10);
        // A 1x1 passband rectangle cannot support 35 unknowns.
        let result =
            solve_coefficients_2d((&k1, &k2), (1000, 1000), (5, 5), (0, 0), SolveMode2D::Joint);
        assert!(matches!(result, Err(Error::JointSystemTooLarge { .. })));
    }
}
