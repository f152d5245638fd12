//! Membership and metric layer: quasisymmetry and symmetric-deviation
//! profiles, the Weil-Petersson class diagnostic, the metrics d and d', and
//! group-continuity probes.

use num_complex::Complex;

use crate::circle::CircleMap;
use crate::error::{Error, Result};
use crate::fourier::{fourier_coefficients, sobolev_profile, sobolev_seminorm, GridFunction};
use crate::profile::{DyadicProfile, Trend, TrendConfig};
use crate::scalar::{as_f64, cast, Scalar};

/// Per-scale statistics over a family of adjacent-arc pairs.
#[derive(Clone, Debug)]
pub struct ScaleProfile<T> {
    pub scales: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> ScaleProfile<T> {
    pub fn max(&self) -> T {
        self.values.iter().cloned().fold(T::zero(), T::max)
    }

    pub fn last(&self) -> T {
        *self.values.last().expect("non-empty profile")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "scales": self.scales.iter().map(|&v| as_f64(v)).collect::<Vec<_>>(),
            "values": self.values.iter().map(|&v| as_f64(v)).collect::<Vec<_>>(),
        })
    }
}

fn arc_profile<T: Scalar>(h: &CircleMap<T>, symmetric: bool) -> ScaleProfile<T> {
    let n = h.n_samples();
    let step = h.grid_step();
    let mut scales = Vec::new();
    let mut values = Vec::new();
    let mut m = n / 2;
    while m >= 4 {
        // at fine scales the stride follows the scale, so arc pairs
        // straddling distinguished points are not missed
        let stride = (n / 64).min(m / 2).max(1);
        let mut worst = T::zero();
        let mut pos = 0i64;
        while (pos as usize) < n {
            let num = h.lift_ext(pos + m as i64) - h.lift_ext(pos);
            let den = h.lift_ext(pos) - h.lift_ext(pos - m as i64);
            let r = num / den;
            let v = if symmetric {
                (r - T::one()).abs().max((T::one() / r - T::one()).abs())
            } else {
                r.max(T::one() / r)
            };
            worst = worst.max(v);
            pos += stride as i64;
        }
        scales.push(step * cast::<T>(m as f64));
        values.push(worst);
        m /= 2;
    }
    ScaleProfile { scales, values }
}

/// Max symmetrized ratio |h(I1)|/|h(I2)| of adjacent equal arcs, per dyadic
/// scale. The overall quasisymmetry constant estimate is the profile max.
pub fn quasisymmetry_profile<T: Scalar>(h: &CircleMap<T>) -> ScaleProfile<T> {
    arc_profile(h, false)
}

/// Per-scale max of |ratio - 1|; symmetric maps decay to 0.
pub fn symmetric_profile<T: Scalar>(h: &CircleMap<T>) -> ScaleProfile<T> {
    arc_profile(h, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    YesTrend,
    NoTrend,
    Inconclusive,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerdictKind::YesTrend => write!(f, "yes-trend"),
            VerdictKind::NoTrend => write!(f, "no-trend"),
            VerdictKind::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MembershipVerdicts {
    pub quasisymmetric: VerdictKind,
    pub symmetric: VerdictKind,
    pub wp_class: VerdictKind,
}

#[derive(Clone, Debug)]
pub struct MembershipReport<T: Scalar> {
    pub qs_profile: ScaleProfile<T>,
    pub symmetric_profile: ScaleProfile<T>,
    /// Dyadic truncation profile of || log h' ||_{H^{1/2}}.
    pub h_half_profile: DyadicProfile<T>,
    pub verdicts: MembershipVerdicts,
    pub degenerate_derivative: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct DiagnosticsConfig {
    pub trend: TrendConfig,
    /// Symmetric verdict needs the deviation to decay below this.
    pub symmetric_tol: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            trend: TrendConfig::default(),
            symmetric_tol: 0.05,
        }
    }
}

fn classify_qs<T: Scalar>(p: &ScaleProfile<T>) -> VerdictKind {
    let v = &p.values;
    if v.len() < 4 {
        return VerdictKind::Inconclusive;
    }
    let coarse_max = v[..v.len() - 3]
        .iter()
        .cloned()
        .fold(T::zero(), T::max)
        .max(T::one());
    let tail_max = v[v.len() - 3..].iter().cloned().fold(T::zero(), T::max);
    if tail_max <= coarse_max * cast(1.5) {
        return VerdictKind::YesTrend;
    }
    let grows = v
        .windows(2)
        .rev()
        .take(4)
        .all(|w| w[1] >= w[0] * cast(1.25));
    if grows {
        VerdictKind::NoTrend
    } else {
        VerdictKind::Inconclusive
    }
}

fn classify_symmetric<T: Scalar>(p: &ScaleProfile<T>, tol: f64) -> VerdictKind {
    let v = &p.values;
    if v.len() < 4 {
        return VerdictKind::Inconclusive;
    }
    if as_f64(p.max()) < 1e-12 {
        return VerdictKind::YesTrend;
    }
    let eps = p.max() * cast(1e-12);
    let decreasing = v.windows(2).rev().take(4).all(|w| w[1] <= w[0] + eps);
    if decreasing && as_f64(*v.last().unwrap()) < tol {
        return VerdictKind::YesTrend;
    }
    let vmax = p.max();
    let last = *v.last().unwrap();
    let third_last = v[v.len() - 3];
    if last >= vmax * cast(0.5) && last >= third_last * cast(0.9) {
        return VerdictKind::NoTrend;
    }
    VerdictKind::Inconclusive
}

/// log h' on the grid through the continuous-lift branch:
/// log phi'(theta_j) + i (phi(theta_j) - theta_j).
fn log_hp_grid<T: Scalar>(h: &CircleMap<T>) -> (GridFunction<T>, bool) {
    let d = h.derivative();
    let periodic = h.periodic_part();
    let vals: Vec<Complex<T>> = d
        .log_phi_prime
        .values()
        .iter()
        .zip(&periodic)
        .map(|(l, &p)| Complex::new(l.re, p))
        .collect();
    (GridFunction::new(vals).expect("finite samples"), d.degenerate)
}

/// Assemble quasisymmetry, symmetric and H^{1/2}(log h') profiles with
/// three-way trend verdicts.
pub fn wp_membership<T: Scalar>(h: &CircleMap<T>, cfg: &DiagnosticsConfig) -> MembershipReport<T> {
    let qs = quasisymmetry_profile(h);
    let sym = symmetric_profile(h);
    let (log_hp, degenerate) = log_hp_grid(h);
    let n = h.n_samples();
    let coeffs = fourier_coefficients(&log_hp, n / 8).expect("K = N/8 is below Nyquist");
    let h_half = sobolev_profile(&coeffs, cast(0.5));
    let wp_class = if degenerate {
        VerdictKind::NoTrend
    } else {
        match h_half.classify(&cfg.trend) {
            Trend::Cauchy => VerdictKind::YesTrend,
            Trend::Divergent => VerdictKind::NoTrend,
            Trend::Inconclusive => VerdictKind::Inconclusive,
        }
    };
    let reason = degenerate.then(|| "phi' vanishes on the grid; log h' leaves every H^s".to_string());
    MembershipReport {
        verdicts: MembershipVerdicts {
            quasisymmetric: classify_qs(&qs),
            symmetric: classify_symmetric(&sym, cfg.symmetric_tol),
            wp_class,
        },
        qs_profile: qs,
        symmetric_profile: sym,
        h_half_profile: h_half,
        degenerate_derivative: degenerate,
        reason,
    }
}

impl<T: Scalar> MembershipReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": 1,
            "qs_profile": self.qs_profile.to_json(),
            "qs_constant": as_f64(self.qs_profile.max()),
            "symmetric_profile": self.symmetric_profile.to_json(),
            "h_half_profile": self.h_half_profile.to_json(),
            "verdicts": {
                "quasisymmetric": self.verdicts.quasisymmetric.to_string(),
                "symmetric": self.verdicts.symmetric.to_string(),
                "wp_class": self.verdicts.wp_class.to_string(),
            },
            "degenerate_derivative": self.degenerate_derivative,
            "reason": self.reason,
        })
    }
}

fn metric_common_grid<T: Scalar>(
    h1: &CircleMap<T>,
    h2: &CircleMap<T>,
) -> Result<(CircleMap<T>, CircleMap<T>)> {
    let n = h1.n_samples().max(h2.n_samples());
    Ok((h1.resample(n)?, h2.resample(n)?))
}

fn metric_profile<T: Scalar>(samples: Vec<Complex<T>>) -> Result<(T, DyadicProfile<T>)> {
    let gf = GridFunction::new(samples)?;
    let n = gf.n_samples();
    let coeffs = fourier_coefficients(&gf, n / 2 - 1)?;
    let value = sobolev_seminorm(&coeffs, cast(0.5));
    Ok((value, sobolev_profile(&coeffs, cast(0.5))))
}

/// d(h1, h2) = || log|h2'| - log|h1'| ||_{H^{1/2}}.
pub fn metric_d<T: Scalar>(
    h1: &CircleMap<T>,
    h2: &CircleMap<T>,
) -> Result<(T, DyadicProfile<T>)> {
    let (a, b) = metric_common_grid(h1, h2)?;
    let da = a.derivative();
    let db = b.derivative();
    if da.degenerate || db.degenerate {
        return Err(Error::DegenerateDerivative("metric undefined: phi' vanishes".into()));
    }
    let samples: Vec<Complex<T>> = da
        .log_phi_prime
        .values()
        .iter()
        .zip(db.log_phi_prime.values())
        .map(|(x, y)| Complex::new(y.re - x.re, T::zero()))
        .collect();
    metric_profile(samples)
}

/// d'(h1, h2) = || log h2' - log h1' ||_{H^{1/2}} with the continuous-lift
/// branch log h' = log phi' + i (phi(theta) - theta).
pub fn metric_d_prime<T: Scalar>(
    h1: &CircleMap<T>,
    h2: &CircleMap<T>,
) -> Result<(T, DyadicProfile<T>)> {
    let (a, b) = metric_common_grid(h1, h2)?;
    let da = a.derivative();
    let db = b.derivative();
    if da.degenerate || db.degenerate {
        return Err(Error::DegenerateDerivative("metric undefined: phi' vanishes".into()));
    }
    let pa = a.periodic_part();
    let pb = b.periodic_part();
    let samples: Vec<Complex<T>> = (0..a.n_samples())
        .map(|j| {
            Complex::new(
                db.log_phi_prime.values()[j].re - da.log_phi_prime.values()[j].re,
                pb[j] - pa[j],
            )
        })
        .collect();
    metric_profile(samples)
}

#[derive(Clone, Debug)]
pub struct LogModulusCrosscheck<T: Scalar> {
    pub log_abs_profile: DyadicProfile<T>,
    pub full_profile: DyadicProfile<T>,
    pub log_abs_trend: Trend,
    pub full_trend: Trend,
    /// H^1 norm of the imaginary part phi(theta) - theta.
    pub imag_h1_norm: T,
    pub verdicts_agree: bool,
}

/// Compare the H^{1/2} behaviour of log|h'| and of the full log h'; the two
/// must agree, with phi - theta controlled in H^1.
pub fn log_modulus_crosscheck<T: Scalar>(
    h: &CircleMap<T>,
    cfg: &DiagnosticsConfig,
) -> Result<LogModulusCrosscheck<T>> {
    let d = h.derivative();
    let n = h.n_samples();
    let k = n / 8;
    let a_abs = fourier_coefficients(&d.log_phi_prime, k)?;
    let (log_hp, _) = log_hp_grid(h);
    let a_full = fourier_coefficients(&log_hp, k)?;
    let imag = GridFunction::from_real(&h.periodic_part())?;
    let a_imag = fourier_coefficients(&imag, k)?;
    let log_abs_profile = sobolev_profile(&a_abs, cast(0.5));
    let full_profile = sobolev_profile(&a_full, cast(0.5));
    let log_abs_trend = log_abs_profile.classify(&cfg.trend);
    let full_trend = full_profile.classify(&cfg.trend);
    Ok(LogModulusCrosscheck {
        log_abs_trend,
        full_trend,
        imag_h1_norm: sobolev_seminorm(&a_imag, T::one()),
        verdicts_agree: log_abs_trend == full_trend,
        log_abs_profile,
        full_profile,
    })
}

/// H^{1/2} truncation profile of (e^{i phi})' = i e^{i phi} phi', the
/// spectral probe for h in H^{3/2}.
pub fn h_three_halves_profile<T: Scalar>(h: &CircleMap<T>) -> Result<DyadicProfile<T>> {
    let d = h.derivative();
    let n = h.n_samples();
    let periodic = h.periodic_part();
    let vals: Vec<Complex<T>> = (0..n)
        .map(|j| {
            let phi = d.phi_prime.theta(j) + periodic[j];
            let e = Complex::from_polar(T::one(), phi);
            Complex::new(T::zero(), T::one()) * e * d.phi_prime.values()[j].re
        })
        .collect();
    let gf = GridFunction::new(vals)?;
    let coeffs = fourier_coefficients(&gf, n / 8)?;
    Ok(sobolev_profile(&coeffs, cast(0.5)))
}

/// H^{1/2} truncation profile of phi' itself, the derivative-side form of
/// the H^{3/2} question for h.
pub fn phi_prime_h_half_profile<T: Scalar>(h: &CircleMap<T>) -> Result<DyadicProfile<T>> {
    let d = h.derivative();
    let coeffs = fourier_coefficients(&d.phi_prime, h.n_samples() / 8)?;
    Ok(sobolev_profile(&coeffs, cast(0.5)))
}

#[derive(Clone, Debug)]
pub struct GroupContinuityReport<T> {
    /// d'(h_n^{-1}, h^{-1}) along the sequence.
    pub d_inverse: Vec<T>,
    /// d'(g o h_n, g o h) along the sequence.
    pub d_compose: Vec<T>,
}

/// Tabulate the two group-operation distances along a sequence h_n -> h.
pub fn group_continuity_probe<T: Scalar>(
    sequence: &[CircleMap<T>],
    h: &CircleMap<T>,
    g: &CircleMap<T>,
) -> Result<GroupContinuityReport<T>> {
    let h_inv = h.invert()?;
    let gh = CircleMap::compose(g, h)?;
    let mut d_inverse = Vec::with_capacity(sequence.len());
    let mut d_compose = Vec::with_capacity(sequence.len());
    for hn in sequence {
        let (di, _) = metric_d_prime(&hn.invert()?, &h_inv)?;
        let (dc, _) = metric_d_prime(&CircleMap::compose(g, hn)?, &gh)?;
        d_inverse.push(di);
        d_compose.push(dc);
    }
    Ok(GroupContinuityReport {
        d_inverse,
        d_compose,
    })
}
