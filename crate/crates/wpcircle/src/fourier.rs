//! Uniform-grid sampling, Fourier analysis, fractional Sobolev seminorms and
//! harmonic conjugation on the circle.
//!
//! Conventions: samples live at theta_j = 2*pi*j/N with N a power of two, and
//! the analysis transform is a_n = (1/N) sum_j u_j e^{-i n theta_j}, which is
//! exact for trigonometric polynomials of degree < N/2.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::profile::DyadicProfile;
use crate::scalar::{cast, Scalar};

/// Periodic samples u(theta_j) on the uniform grid theta_j = 2*pi*j/N.
#[derive(Clone, Debug)]
pub struct GridFunction<T: Scalar> {
    values: Vec<Complex<T>>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        let n = values.len();
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a power of two >= 8, got {n}"
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sample".into()));
        }
        Ok(GridFunction { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let step = T::TAU() / cast::<T>(n as f64);
        Self::new((0..n).map(|j| f(step * cast(j as f64))).collect())
    }

    pub fn from_real_fn(n: usize, f: impl Fn(T) -> T) -> Result<Self> {
        Self::from_fn(n, |t| Complex::new(f(t), T::zero()))
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    pub fn n_samples(&self) -> usize {
        self.values.len()
    }

    pub fn theta(&self, j: usize) -> T {
        T::TAU() * cast::<T>(j as f64) / cast::<T>(self.values.len() as f64)
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<T> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn is_real(&self, tol: T) -> bool {
        let scale = self
            .values
            .iter()
            .map(|v| v.norm_sqr())
            .fold(T::zero(), T::max)
            .sqrt()
            .max(T::one());
        self.values.iter().all(|v| v.im.abs() <= tol * scale)
    }

    /// Keep every `factor`-th sample (factor a power of two).
    pub fn subsample(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !factor.is_power_of_two() {
            return Err(Error::InvalidArgument("subsample factor must be a power of two".into()));
        }
        Self::new(self.values.iter().step_by(factor).copied().collect())
    }

    pub fn cyclic_shift(&self, k: usize) -> Self {
        let n = self.values.len();
        let values = (0..n).map(|j| self.values[(j + k) % n]).collect();
        GridFunction { values }
    }

    /// Mean of |u|^2 over the grid.
    pub fn mean_square(&self) -> T {
        let sum = self
            .values
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr());
        sum / cast(self.values.len() as f64)
    }
}

/// Fourier coefficients a_n for |n| <= max_mode, stored at index n + max_mode.
#[derive(Clone, Debug)]
pub struct FourierSeries<T: Scalar> {
    max_mode: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> FourierSeries<T> {
    pub fn from_coeffs(max_mode: usize, coeffs: Vec<Complex<T>>) -> Self {
        assert_eq!(coeffs.len(), 2 * max_mode + 1);
        FourierSeries { max_mode, coeffs }
    }

    /// Series with the given analytic coefficients (mode n holds `pos[n]`,
    /// negative modes zero). `pos[0]` is the constant term.
    pub fn from_analytic(pos: &[Complex<T>]) -> Self {
        let k = pos.len() - 1;
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); 2 * k + 1];
        for (n, &c) in pos.iter().enumerate() {
            coeffs[k + n] = c;
        }
        FourierSeries { max_mode: k, coeffs }
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    pub fn coeff(&self, n: i64) -> Complex<T> {
        let k = self.max_mode as i64;
        if n.abs() > k {
            Complex::new(T::zero(), T::zero())
        } else {
            self.coeffs[(n + k) as usize]
        }
    }

    /// Iterate (n, a_n) over all stored modes.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        let k = self.max_mode as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - k, c))
    }

    /// Evaluate the trigonometric polynomial at an arbitrary angle.
    pub fn evaluate(&self, theta: T) -> Complex<T> {
        // Horner in e^{i theta}, then rotate by e^{-i K theta}.
        let e = Complex::from_polar(T::one(), theta);
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * e + c;
        }
        let back = Complex::from_polar(T::one(), -theta * cast::<T>(self.max_mode as f64));
        acc * back
    }

    pub fn evaluate_at(&self, thetas: &[T]) -> Vec<Complex<T>> {
        thetas.iter().map(|&t| self.evaluate(t)).collect()
    }

    /// Total spectral energy sum |a_n|^2.
    pub fn energy(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }
}

pub(crate) fn fft_forward<T: Scalar>(values: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let inv_n = T::one() / cast::<T>(n as f64);
    for v in &mut buf {
        *v = v.scale(inv_n);
    }
    buf
}

pub(crate) fn fft_inverse<T: Scalar>(spectrum: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut buf = spectrum.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}

/// Full normalized spectrum in FFT layout (index i holds mode i for i < N/2,
/// mode i - N for i >= N/2).
pub(crate) fn full_spectrum<T: Scalar>(u: &GridFunction<T>) -> Vec<Complex<T>> {
    fft_forward(u.values())
}

/// Discrete Fourier coefficients a_n, |n| <= max_mode.
pub fn fourier_coefficients<T: Scalar>(
    u: &GridFunction<T>,
    max_mode: usize,
) -> Result<FourierSeries<T>> {
    let n = u.n_samples();
    if max_mode > n / 2 - 1 {
        return Err(Error::InvalidArgument(format!(
            "max_mode {max_mode} exceeds N/2 - 1 = {}",
            n / 2 - 1
        )));
    }
    let spec = full_spectrum(u);
    let k = max_mode;
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); 2 * k + 1];
    for m in 0..=k {
        coeffs[k + m] = spec[m];
        if m > 0 {
            coeffs[k - m] = spec[n - m];
        }
    }
    Ok(FourierSeries { max_mode: k, coeffs })
}

/// Samples of the trigonometric polynomial on the uniform grid of size `n`.
pub fn synthesize<T: Scalar>(series: &FourierSeries<T>, n: usize) -> Result<GridFunction<T>> {
    if series.max_mode > n / 2 - 1 {
        return Err(Error::InvalidArgument(format!(
            "cannot synthesize {} modes on a grid of {n} samples",
            series.max_mode
        )));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut spec = vec![zero; n];
    for (m, c) in series.modes() {
        if m >= 0 {
            spec[m as usize] = c;
        } else {
            spec[(n as i64 + m) as usize] = c;
        }
    }
    GridFunction::new(fft_inverse(&spec))
}

/// Harmonic conjugation: (Hu)_n = -i sgn(n) a_n, (Hu)_0 = 0.
pub fn harmonic_conjugate<T: Scalar>(a: &FourierSeries<T>) -> FourierSeries<T> {
    let coeffs = a
        .modes()
        .map(|(n, c)| {
            if n == 0 {
                Complex::new(T::zero(), T::zero())
            } else if n > 0 {
                Complex::new(c.im, -c.re) // -i * c
            } else {
                Complex::new(-c.im, c.re) // i * c
            }
        })
        .collect();
    FourierSeries { max_mode: a.max_mode, coeffs }
}

/// Termwise derivative: a_n -> i n a_n.
pub fn differentiate<T: Scalar>(a: &FourierSeries<T>) -> FourierSeries<T> {
    let coeffs = a
        .modes()
        .map(|(n, c)| {
            let nn = cast::<T>(n as f64);
            Complex::new(-nn * c.im, nn * c.re)
        })
        .collect();
    FourierSeries { max_mode: a.max_mode, coeffs }
}

/// Fractional Sobolev seminorm (sum over n != 0 of |n|^{2s} |a_n|^2)^{1/2}.
pub fn sobolev_seminorm<T: Scalar>(a: &FourierSeries<T>, s: T) -> T {
    partial_seminorm(a, s, a.max_mode)
}

fn partial_seminorm<T: Scalar>(a: &FourierSeries<T>, s: T, trunc: usize) -> T {
    let two_s = s + s;
    let mut sum = T::zero();
    for (n, c) in a.modes() {
        if n == 0 || n.unsigned_abs() as usize > trunc {
            continue;
        }
        let w = cast::<T>(n.abs() as f64).powf(two_s);
        sum = sum + w * c.norm_sqr();
    }
    sum.sqrt()
}

/// Seminorm partial sums over dyadic truncations 8, 16, ..., max_mode.
pub fn sobolev_profile<T: Scalar>(a: &FourierSeries<T>, s: T) -> DyadicProfile<T> {
    let mut params = Vec::new();
    let mut k = 8usize.min(a.max_mode.max(1));
    while k < a.max_mode {
        params.push(k);
        k *= 2;
    }
    params.push(a.max_mode);
    let values = params.iter().map(|&p| partial_seminorm(a, s, p)).collect();
    DyadicProfile::new(params, values)
}

/// Result of the H^{1/2} double-integral quadrature.
#[derive(Clone, Debug)]
pub struct DoubleIntegralReport<T> {
    /// Raw quadrature of the double integral with the diagonal excluded.
    pub raw: T,
    /// raw / (16 pi^2), directly comparable to sobolev_seminorm(u, 1/2)^2.
    pub normalized: T,
    /// Normalized values on dyadically subsampled grids (coarsest first).
    pub profile: DyadicProfile<T>,
}

fn double_integral_raw<T: Scalar>(values: &[Complex<T>]) -> T {
    let n = values.len();
    let step = T::TAU() / cast::<T>(n as f64);
    let half = cast::<T>(0.5);
    let mut total = T::zero();
    for m in 1..=n / 2 {
        let s = (step * cast::<T>(m as f64) * half).sin();
        let w = T::one() / (s * s);
        let mut sum = T::zero();
        for j in 0..n - m {
            sum = sum + (values[j] - values[j + m]).norm_sqr();
        }
        for j in n - m..n {
            sum = sum + (values[j] - values[j + m - n]).norm_sqr();
        }
        // offsets m and n-m contribute equally; n/2 pairs with itself
        let fac = if m == n / 2 { T::one() } else { cast(2.0) };
        total = total + fac * w * sum;
    }
    total * step * step
}

/// Tensor-product quadrature of the double integral
/// of |u(s)-u(t)|^2 / sin^2((s-t)/2) with the diagonal excluded.
pub fn h_half_double_integral<T: Scalar>(u: &GridFunction<T>) -> DoubleIntegralReport<T> {
    let norm_const = cast::<T>(16.0) * T::PI() * T::PI();
    let mut params = Vec::new();
    let mut values = Vec::new();
    for factor in [4usize, 2, 1] {
        if u.n_samples() / factor < 8 {
            continue;
        }
        let sub = u.subsample(factor).expect("power-of-two subsample");
        params.push(sub.n_samples());
        values.push(double_integral_raw(sub.values()) / norm_const);
    }
    let raw = *values.last().unwrap() * norm_const;
    let normalized = *values.last().unwrap();
    DoubleIntegralReport {
        raw,
        normalized,
        profile: DyadicProfile::new(params, values),
    }
}
