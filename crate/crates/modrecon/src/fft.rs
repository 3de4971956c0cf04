//! Thin wrappers around rustfft for the transform shapes used in this crate.
//!
//! Forward transforms are unnormalized; inverse transforms divide by the
//! length, so `inverse(forward(x)) == x` up to round-off.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place unnormalized forward DFT.
pub fn forward(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(buf.len());
    fft.process(buf);
}

/// In-place inverse DFT normalized by 1/N.
pub fn inverse(buf: &mut [Complex64]) {
    let n = buf.len();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(n);
    fft.process(buf);
    let scale = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Forward DFT of a real sequence.
pub fn forward_real(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    buf
}

/// Real part of the inverse DFT.
pub fn inverse_to_real(mut spectrum: Vec<Complex64>) -> Vec<f64> {
    inverse(&mut spectrum);
    spectrum.into_iter().map(|c| c.re).collect()
}

/// Centered bin index in [-N/2, N/2): bins above N/2 map to negatives.
pub fn centered_bin(k: usize, n: usize) -> i64 {
    let k = k as i64;
    let n = n as i64;
    if 2 * k >= n {
        k - n
    } else {
        k
    }
}

/// In-place forward 2-D DFT of a row-major `rows x cols` buffer.
pub fn forward_2d(buf: &mut [Complex64], rows: usize, cols: usize) {
    transform_2d(buf, rows, cols, false);
}

/// In-place inverse 2-D DFT normalized by 1/(rows*cols).
pub fn inverse_2d(buf: &mut [Complex64], rows: usize, cols: usize) {
    transform_2d(buf, rows, cols, true);
    let scale = 1.0 / (rows * cols) as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

fn transform_2d(buf: &mut [Complex64], rows: usize, cols: usize, inverse: bool) {
    assert_eq!(buf.len(), rows * cols);
    let mut planner = FftPlanner::new();
    let row_fft = if inverse {
        planner.plan_fft_inverse(cols)
    } else {
        planner.plan_fft_forward(cols)
    };
    for row in buf.chunks_exact_mut(cols) {
        row_fft.process(row);
    }

    let col_fft = if inverse {
        planner.plan_fft_inverse(rows)
    } else {
        planner.plan_fft_forward(rows)
    };
    let mut column = vec![Complex64::default(); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = buf[r * cols + c];
        }
        col_fft.process(&mut column);
        for r in 0..rows {
            buf[r * cols + c] = column[r];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_1d() {
        let x = vec![1.0, -2.0, 3.5, 0.25, -1.0, 4.0];
        let spec = forward_real(&x);
        let back = inverse_to_real(spec);
        for (a, b) in x.iter().zip(back.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn roundtrip_2d() {
        let rows = 4;
        let cols = 6;
        let x: Vec<f64> = (0..rows * cols).map(|i| (i as f64).sin()).collect();
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        forward_2d(&mut buf, rows, cols);
        inverse_2d(&mut buf, rows, cols);
        for (a, b) in x.iter().zip(buf.iter()) {
            assert!((a - b.re).abs() < 1e-12);
            assert!(b.im.abs() < 1e-12);
        }
    }

    #[test]
    fn centered_bins() {
        assert_eq!(centered_bin(0, 8), 0);
        assert_eq!(centered_bin(3, 8), 3);
        assert_eq!(centered_bin(4, 8), -4);
        assert_eq!(centered_bin(7, 8), -1);
    }
}
