//! Test-only oracles kept independent of the implementation paths they check.

use rustfft::num_complex::Complex64;

/// O(N^2) direct DFT, used as an oracle against the FFT-based paths.
pub fn naive_dft(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &v) in x.iter().enumerate() {
                let phase = -2.0 * std::f64::consts::PI * (k * i % n) as f64 / n as f64;
                acc += Complex64::new(v * phase.cos(), v * phase.sin());
            }
            acc
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
