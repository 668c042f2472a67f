//! Thin wrappers over `rustfft` with operation-local planners.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::real::Real;

/// Unnormalized forward transform, `X_k = sum_n x_n exp(-2 pi i k n / N)`.
pub(crate) fn forward<T: Real>(buf: &mut [Complex<T>]) {
    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_forward(buf.len()).process(buf);
}

/// Unnormalized inverse transform, `x_n = sum_k X_k exp(+2 pi i k n / N)`.
pub(crate) fn inverse<T: Real>(buf: &mut [Complex<T>]) {
    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_inverse(buf.len()).process(buf);
}

/// Signed frequency index of FFT bin `k` for a transform of length `n`.
#[inline]
pub(crate) fn signed_index(k: usize, n: usize) -> isize {
    if k < n / 2 {
        k as isize
    } else {
        k as isize - n as isize
    }
}

/// Reorders FFT output so that frequencies ascend from `-N/2`.
pub(crate) fn shift<T: Copy>(data: &[T]) -> Vec<T> {
    let n = data.len();
    let half = n / 2;
    data[half..].iter().chain(data[..half].iter()).copied().collect()
}
