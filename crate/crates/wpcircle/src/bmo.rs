//! Mean-oscillation analysis on the circle: BMO norm estimation, VMO decay
//! profiles, John-Nirenberg tail probes and exponential integrability.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fourier::GridFunction;
use crate::profile::DyadicProfile;
use crate::scalar::{as_f64, cast, Scalar};

/// Mean oscillation (1/|I|) int_I |u - u_I| across dyadic scales.
///
/// `worst_oscillation` takes the maximum over a sliding family of intervals
/// (position stride N/64); `at_zero` evaluates the same statistic on the
/// specific intervals (0, l_k].
#[derive(Clone, Debug)]
pub struct OscillationProfile<T> {
    pub scales: Vec<T>,
    pub worst_oscillation: Vec<T>,
    pub at_zero: Vec<T>,
}

impl<T: Scalar> OscillationProfile<T> {
    /// Estimated BMO norm: max over all scales and positions.
    pub fn bmo_norm(&self) -> T {
        self.worst_oscillation
            .iter()
            .cloned()
            .fold(T::zero(), T::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale,worst_oscillation,at_zero\n");
        for i in 0..self.scales.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                as_f64(self.scales[i]),
                as_f64(self.worst_oscillation[i]),
                as_f64(self.at_zero[i])
            ));
        }
        out
    }
}

/// Oscillation of `vals[start..start+m]` (cyclic) around its own mean, using
/// the prefix sums for the window mean.
fn window_oscillation<T: Scalar>(
    vals: &[Complex<T>],
    prefix: &[Complex<T>],
    start: usize,
    m: usize,
) -> T {
    let n = vals.len();
    let sum = if start + m <= n {
        prefix[start + m] - prefix[start]
    } else {
        prefix[n] - prefix[start] + prefix[start + m - n]
    };
    let mean = sum.scale(T::one() / cast(m as f64));
    let mut acc = T::zero();
    if start + m <= n {
        for v in &vals[start..start + m] {
            acc = acc + (*v - mean).norm();
        }
    } else {
        for v in &vals[start..n] {
            acc = acc + (*v - mean).norm();
        }
        for v in &vals[0..start + m - n] {
            acc = acc + (*v - mean).norm();
        }
    }
    acc / cast(m as f64)
}

/// Mean-oscillation profile over dyadic scales from pi down to `min_scale`.
pub fn bmo_norm_estimate<T: Scalar>(
    u: &GridFunction<T>,
    min_scale: T,
) -> Result<OscillationProfile<T>> {
    let n = u.n_samples();
    let step = T::TAU() / cast::<T>(n as f64);
    if min_scale < cast::<T>(4.0) * step {
        return Err(Error::InvalidArgument(format!(
            "min_scale {} below 4 grid cells ({})",
            as_f64(min_scale),
            as_f64(cast::<T>(4.0) * step)
        )));
    }
    let vals = u.values();
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = Complex::new(T::zero(), T::zero());
    prefix.push(acc);
    for v in vals {
        acc += *v;
        prefix.push(acc);
    }

    let stride = (n / 64).max(1);
    let mut scales = Vec::new();
    let mut worst = Vec::new();
    let mut at_zero = Vec::new();
    let mut m = n / 2; // scale pi
    while m >= 4 {
        let scale = step * cast::<T>(m as f64);
        if scale < min_scale {
            break;
        }
        let mut w = T::zero();
        let mut pos = 0usize;
        while pos < n {
            w = w.max(window_oscillation(vals, &prefix, pos, m));
            pos += stride;
        }
        scales.push(scale);
        worst.push(w);
        // interval (0, l]: samples j = 1..=m
        at_zero.push(window_oscillation(vals, &prefix, 1, m));
        m /= 2;
    }
    Ok(OscillationProfile {
        scales,
        worst_oscillation: worst,
        at_zero,
    })
}

/// The at-zero statistic on the single interval (0, scale].
pub fn at_zero_oscillation<T: Scalar>(u: &GridFunction<T>, scale: T) -> Result<T> {
    let n = u.n_samples();
    let step = T::TAU() / cast::<T>(n as f64);
    let m = (scale / step).floor().to_f64().unwrap_or(0.0) as usize;
    if m < 4 {
        return Err(Error::InvalidArgument(format!(
            "scale {} holds fewer than 4 samples",
            as_f64(scale)
        )));
    }
    let vals = u.values();
    let mut sum = Complex::new(T::zero(), T::zero());
    for v in &vals[1..=m] {
        sum += *v;
    }
    let mean = sum.scale(T::one() / cast(m as f64));
    let mut acc = T::zero();
    for v in &vals[1..=m] {
        acc = acc + (*v - mean).norm();
    }
    Ok(acc / cast(m as f64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VmoVerdict {
    Vanishing,
    Persistent,
    Inconclusive,
}

impl std::fmt::Display for VmoVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VmoVerdict::Vanishing => write!(f, "vanishing"),
            VmoVerdict::Persistent => write!(f, "persistent"),
            VmoVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Three-way VMO verdict from an oscillation profile.
pub fn vmo_verdict<T: Scalar>(p: &OscillationProfile<T>, tol: T) -> Result<VmoVerdict> {
    let w = &p.worst_oscillation;
    if w.len() < 4 {
        return Err(Error::InvalidArgument("profile needs at least 4 scales".into()));
    }
    let last3 = &w[w.len() - 3..];
    let vanishing = *w.last().unwrap() < tol && last3[0] >= last3[1] && last3[1] >= last3[2];
    if vanishing {
        return Ok(VmoVerdict::Vanishing);
    }
    let two = cast::<T>(2.0);
    if last3.iter().all(|&v| v >= two * tol) {
        return Ok(VmoVerdict::Persistent);
    }
    Ok(VmoVerdict::Inconclusive)
}

#[derive(Clone, Debug)]
pub struct JnMoment<T> {
    pub p: T,
    pub value: T,
    /// Value under dyadic subsampling of the interval (divergent moments grow).
    pub profile: DyadicProfile<T>,
    /// John-Nirenberg style bound p*C1/(rate - p) from the fitted constants,
    /// when the fitted rate exceeds p.
    pub bound: Option<T>,
}

/// Empirical John-Nirenberg tail report on one interval.
#[derive(Clone, Debug)]
pub struct JnReport<T> {
    pub lambdas: Vec<T>,
    pub tail_fraction: Vec<T>,
    pub fitted_rate: T,
    pub fitted_amplitude: T,
    pub moments: Vec<JnMoment<T>>,
}

/// Distribution of |u - u_I| on the interval (start, start+length], a fitted
/// exponential decay rate, and exponential moments for the requested powers.
pub fn john_nirenberg_probe<T: Scalar>(
    u: &GridFunction<T>,
    start: T,
    length: T,
    ps: &[T],
) -> Result<JnReport<T>> {
    if start < T::zero() || length <= T::zero() || start + length > T::TAU() {
        return Err(Error::InvalidArgument("interval must lie within [0, 2pi]".into()));
    }
    let n = u.n_samples();
    let step = T::TAU() / cast::<T>(n as f64);
    let j0 = (start / step).floor().to_f64().unwrap() as usize;
    let j1 = ((start + length) / step).floor().to_f64().unwrap() as usize;
    let idx: Vec<usize> = (j0 + 1..=j1.min(n - 1)).collect();
    if idx.len() < 8 {
        return Err(Error::InvalidArgument("interval holds fewer than 8 samples".into()));
    }
    let vals = u.values();
    let m = cast::<T>(idx.len() as f64);
    let mut sum = Complex::new(T::zero(), T::zero());
    for &j in &idx {
        sum += vals[j];
    }
    let mean = sum.scale(T::one() / m);
    let dev: Vec<T> = idx.iter().map(|&j| (vals[j] - mean).norm()).collect();
    let max_dev = dev.iter().cloned().fold(T::zero(), T::max);

    let scale = if max_dev > T::zero() { max_dev } else { T::one() };
    let n_lam = 32usize;
    let lambdas: Vec<T> = (1..=n_lam)
        .map(|i| scale * cast::<T>(i as f64) / cast::<T>(n_lam as f64))
        .collect();
    let tail_fraction: Vec<T> = lambdas
        .iter()
        .map(|&l| {
            let count = dev.iter().filter(|&&d| d >= l).count();
            cast::<T>(count as f64) / m
        })
        .collect();

    // least squares on log of the positive tail entries
    let pts: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(&tail_fraction)
        .filter(|(_, &f)| f > T::zero())
        .map(|(&l, &f)| (as_f64(l), as_f64(f).ln()))
        .collect();
    let (fitted_rate, fitted_amplitude) = if pts.len() >= 2 {
        let np = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
        let intercept = (sy - slope * sx) / np;
        (cast::<T>(-slope), cast::<T>(intercept.exp()))
    } else {
        (T::infinity(), T::zero())
    };

    let mut moments = Vec::new();
    for &p in ps {
        let mut params = Vec::new();
        let mut values = Vec::new();
        for factor in [4usize, 2, 1] {
            let sub: Vec<usize> = idx.iter().copied().filter(|j| j % factor == 0).collect();
            if sub.len() < 4 {
                continue;
            }
            let mm = cast::<T>(sub.len() as f64);
            let mut acc = T::zero();
            for &j in &sub {
                let d = (vals[j] - mean).norm();
                acc = acc + (d.exp() - T::one()).powf(p);
            }
            params.push(sub.len());
            values.push(acc / mm);
        }
        let value = *values.last().unwrap();
        let bound = if fitted_rate > p && fitted_rate.is_finite() {
            Some(p * fitted_amplitude / (fitted_rate - p))
        } else {
            None
        };
        moments.push(JnMoment {
            p,
            value,
            profile: DyadicProfile::new(params, values),
            bound,
        });
    }

    Ok(JnReport {
        lambdas,
        tail_fraction,
        fitted_rate,
        fitted_amplitude,
        moments,
    })
}

/// ((1/2pi) int e^{p u})^{1/p} with a dyadic grid-refinement profile.
pub fn exp_lp_norm<T: Scalar>(u: &GridFunction<T>, p: T) -> Result<(T, DyadicProfile<T>)> {
    if p < T::one() {
        return Err(Error::InvalidArgument("p must be >= 1".into()));
    }
    if !u.is_real(cast(1e-8)) {
        return Err(Error::InvalidArgument("exp_lp_norm requires a real-valued function".into()));
    }
    let mut params = Vec::new();
    let mut values = Vec::new();
    for factor in [4usize, 2, 1] {
        if u.n_samples() / factor < 8 {
            continue;
        }
        let sub = u.subsample(factor)?;
        let m = cast::<T>(sub.n_samples() as f64);
        let mut acc = T::zero();
        for v in sub.values() {
            acc = acc + (p * v.re).exp();
        }
        let val = (acc / m).powf(T::one() / p);
        params.push(sub.n_samples());
        values.push(val);
    }
    let value = *values.last().unwrap();
    if !value.is_finite() {
        return Err(Error::InvalidArgument("exponential moment overflowed".into()));
    }
    Ok((value, DyadicProfile::new(params, values)))
}
