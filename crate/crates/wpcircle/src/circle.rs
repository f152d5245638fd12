//! Sense-preserving circle homeomorphisms through their monotone lifts:
//! construction from closed forms or boundary data, composition, inversion,
//! derivatives, and the map-spec serialization used by the CLI.
//!
//! A map h(e^{i theta}) = e^{i phi(theta)} carries its monotone lift samples
//! phi(theta_j) on the uniform grid, pinned by phi(0) in [0, 2pi); spectral
//! operations go through the periodic part phi - theta.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{differentiate, fft_inverse, full_spectrum, GridFunction};
use crate::gallery;
use crate::scalar::{as_f64, cast, Scalar};

/// Closed-form descriptor of a map, when one exists.
#[derive(Clone, Debug)]
pub enum MapFamily<T: Scalar> {
    Identity,
    Rotation { beta: T },
    Mobius { a: Complex<T>, beta: T },
    /// The integrated log^2-singular derivative family of the counterexample
    /// gallery; `c_alpha` is the normalization making phi(2 pi) = 2 pi.
    Counterexample { alpha: T, c_alpha: T },
    /// phi(theta) = theta - sin(theta), critical at theta = 0.
    SineFlat,
    /// Built from a boundary density e^u; carries log phi' exactly.
    FromU { log_phi_prime: Vec<T> },
    Sampled,
}

/// How derivative samples were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Spectral,
}

/// Samples of phi' and log phi' on the grid.
///
/// At grid nodes where the closed form is singular or vanishes (the
/// counterexample at 0, the sine-flat critical point) the stored sample is
/// evaluated at the half-cell offset pi/N so that grid functions stay finite;
/// `degenerate` records that phi' <= 0 occurred.
#[derive(Clone, Debug)]
pub struct DerivativeData<T: Scalar> {
    pub phi_prime: GridFunction<T>,
    pub log_phi_prime: GridFunction<T>,
    pub provenance: Provenance,
    pub degenerate: bool,
}

#[derive(Clone, Debug)]
pub struct CircleMap<T: Scalar> {
    n: usize,
    /// phi(theta_j), as given (kept verbatim so sampled lifts round-trip
    /// bit-exactly through serialization)
    lift: Vec<T>,
    family: MapFamily<T>,
}

fn tau<T: Scalar>() -> T {
    T::TAU()
}

/// Roundoff allowance at the phi(0) branch boundary, scaled to the working
/// precision (sqrt(eps) absorbs accumulated evaluation error).
fn branch_tol<T: Scalar>() -> T {
    T::epsilon().sqrt() * tau::<T>()
}

/// Shift a lift by the multiple of 2pi that pins phi(0) into [0, 2pi),
/// snapping to the nearest branch when phi(0) sits at a boundary up to
/// roundoff.
fn pin_branch<T: Scalar>(lift: &mut [T]) {
    let t = tau::<T>();
    let kf = (lift[0] / t).floor();
    let kr = (lift[0] / t).round();
    let k = if (lift[0] - kr * t).abs() < branch_tol::<T>() { kr } else { kf };
    if k != T::zero() {
        let shift = k * t;
        for v in lift.iter_mut() {
            *v = *v - shift;
        }
    }
}

fn wrap_angle<T: Scalar>(x: T) -> T {
    let t = tau::<T>();
    let mut r = x % t;
    if r < T::zero() {
        r = r + t;
    }
    if r >= t {
        r = r - t;
    }
    r
}

impl<T: Scalar> CircleMap<T> {
    fn check_grid(n: usize) -> Result<()> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a power of two >= 8, got {n}"
            )));
        }
        Ok(())
    }

    /// Build from lift samples phi(theta_j); validates strict monotonicity,
    /// the periodic lift condition and the phi(0) normalization window.
    pub fn from_lift(lift: Vec<T>, family: MapFamily<T>) -> Result<Self> {
        let n = lift.len();
        Self::check_grid(n)?;
        if lift.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite lift sample".into()));
        }
        // phi(0) pinned to [0, 2pi) up to roundoff at the branch boundary
        if lift[0] < -branch_tol::<T>() || lift[0] >= tau() {
            return Err(Error::InvalidArgument(format!(
                "lift must be pinned with phi(0) in [0, 2pi), got {}",
                as_f64(lift[0])
            )));
        }
        for j in 0..n - 1 {
            if lift[j + 1] <= lift[j] {
                return Err(Error::Monotonicity(format!(
                    "lift not strictly increasing at sample {j}"
                )));
            }
        }
        if lift[0] + tau() <= lift[n - 1] {
            return Err(Error::Monotonicity(
                "periodic lift condition phi(theta + 2pi) = phi(theta) + 2pi violated".into(),
            ));
        }
        Ok(CircleMap { n, lift, family })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::check_grid(n)?;
        let step = tau::<T>() / cast::<T>(n as f64);
        Ok(CircleMap {
            n,
            lift: (0..n).map(|j| step * cast::<T>(j as f64)).collect(),
            family: MapFamily::Identity,
        })
    }

    pub fn rotation(beta: T, n: usize) -> Result<Self> {
        Self::check_grid(n)?;
        let b = wrap_angle(beta);
        let step = tau::<T>() / cast::<T>(n as f64);
        Ok(CircleMap {
            n,
            lift: (0..n).map(|j| step * cast::<T>(j as f64) + b).collect(),
            family: MapFamily::Rotation { beta: b },
        })
    }

    /// Boundary action of the disk automorphism z -> e^{i beta} (z-a)/(1 - conj(a) z).
    pub fn mobius(a: Complex<T>, beta: T, n: usize) -> Result<Self> {
        Self::check_grid(n)?;
        if a.norm() >= T::one() {
            return Err(Error::InvalidArgument("mobius parameter must satisfy |a| < 1".into()));
        }
        let family = MapFamily::Mobius { a, beta };
        let step = tau::<T>() / cast::<T>(n as f64);
        let mut lift = Vec::with_capacity(n);
        for j in 0..n {
            lift.push(mobius_lift_value(a, beta, step * cast::<T>(j as f64)));
        }
        Self::from_lift(lift, family)
    }

    pub fn n_samples(&self) -> usize {
        self.n
    }

    pub fn grid_step(&self) -> T {
        tau::<T>() / cast::<T>(self.n as f64)
    }

    pub fn family(&self) -> &MapFamily<T> {
        &self.family
    }

    /// phi(theta_j) at extended index (phi(theta + 2pi k) = phi(theta) + 2pi k).
    pub fn lift_ext(&self, j: i64) -> T {
        let n = self.n as i64;
        let idx = j.rem_euclid(n) as usize;
        let wrap = j.div_euclid(n);
        self.lift[idx] + tau::<T>() * cast::<T>(wrap as f64)
    }

    /// Lift samples phi(theta_j), j = 0..N-1.
    pub fn lift(&self) -> Vec<T> {
        self.lift.clone()
    }

    /// Periodic part phi(theta_j) - theta_j, the genuinely periodic function
    /// spectral operations are applied to.
    pub fn periodic_part(&self) -> Vec<T> {
        let step = tau::<T>() / cast::<T>(self.n as f64);
        self.lift
            .iter()
            .enumerate()
            .map(|(j, &v)| v - step * cast::<T>(j as f64))
            .collect()
    }

    /// Evaluate the lift at an arbitrary angle, through the closed form when
    /// the descriptor provides one and monotone interpolation otherwise.
    pub fn eval_lift(&self, x: T) -> T {
        let t = tau::<T>();
        let k = (x / t).floor();
        let mut r = x - k * t;
        if r < T::zero() {
            r = T::zero();
        }
        if r >= t {
            r = t - T::epsilon() * t;
        }
        let base = k * t;
        let val = match &self.family {
            MapFamily::Identity => r,
            MapFamily::Rotation { beta } => r + *beta,
            MapFamily::Mobius { a, beta } => mobius_lift_value(*a, *beta, r),
            MapFamily::Counterexample { alpha, c_alpha } => {
                let step = self.grid_step();
                let mut j = (r / step).floor();
                if j < T::zero() {
                    j = T::zero();
                }
                let ju = (j.to_f64().unwrap() as usize).min(self.n - 1);
                let theta_j = step * cast::<T>(ju as f64);
                self.lift_ext(ju as i64)
                    + *c_alpha * gallery::cx_integral(*alpha, theta_j, r)
            }
            MapFamily::SineFlat => r - r.sin(),
            MapFamily::FromU { .. } | MapFamily::Sampled => self.eval_lift_interp(r),
        };
        base + val
    }

    /// Shape-preserving cubic interpolation of the lift (Fritsch-Carlson
    /// limited tangents; degenerates to linear near flat spots).
    fn eval_lift_interp(&self, r: T) -> T {
        let n = self.n;
        let step = self.grid_step();
        let i = (r / step)
            .floor()
            .to_f64()
            .map(|v| v as i64)
            .unwrap_or(0)
            .clamp(0, n as i64 - 1);
        let t_local = (r - step * cast::<T>(i as f64)) / step;
        let ym1 = self.lift_ext(i - 1);
        let y0 = self.lift_ext(i);
        let y1 = self.lift_ext(i + 1);
        let y2 = self.lift_ext(i + 2);
        let s0 = (y0 - ym1) / step;
        let s1 = (y1 - y0) / step;
        let s2 = (y2 - y1) / step;
        let m0 = fc_tangent(s0, s1);
        let m1 = fc_tangent(s1, s2);
        hermite(y0, y1, m0 * step, m1 * step, t_local)
    }

    /// Solve phi(x) = y for x; phi is globally monotone so bisection on the
    /// (closed-form or interpolated) lift converges unconditionally.
    pub fn inverse_lift_value(&self, y: T) -> T {
        let periodic = self.periodic_part();
        let pmin = periodic.iter().cloned().fold(T::infinity(), T::min);
        let pmax = periodic.iter().cloned().fold(T::neg_infinity(), T::max);
        let one = T::one();
        let mut lo = y - pmax - one;
        let mut hi = y - pmin + one;
        while self.eval_lift(lo) > y {
            lo = lo - one;
        }
        while self.eval_lift(hi) < y {
            hi = hi + one;
        }
        for _ in 0..90 {
            let mid = (lo + hi) * cast::<T>(0.5);
            if self.eval_lift(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= cast::<T>(1e-17) * (one + y.abs()) {
                break;
            }
        }
        (lo + hi) * cast::<T>(0.5)
    }

    /// Lift of h o k on the finer of the two grids.
    pub fn compose(h: &Self, k: &Self) -> Result<Self> {
        let n = h.n.max(k.n);
        match (&h.family, &k.family) {
            (MapFamily::Identity, _) => return k.resample(n),
            (_, MapFamily::Identity) => return h.resample(n),
            (MapFamily::Rotation { beta: b1 }, MapFamily::Rotation { beta: b2 }) => {
                return Self::rotation(wrap_angle(*b1 + *b2), n)
            }
            _ => {}
        }
        let step = tau::<T>() / cast::<T>(n as f64);
        let mut lift = Vec::with_capacity(n);
        for j in 0..n {
            let inner = k.eval_lift(step * cast::<T>(j as f64));
            lift.push(h.eval_lift(inner));
        }
        pin_branch(&mut lift);
        Self::from_lift(lift, MapFamily::Sampled)
    }

    /// Lift of the inverse map by monotone root-finding on the lift.
    pub fn invert(&self) -> Result<Self> {
        match &self.family {
            MapFamily::Identity => return Self::identity(self.n),
            MapFamily::Rotation { beta } => return Self::rotation(-*beta, self.n),
            _ => {}
        }
        let n = self.n;
        let step = self.grid_step();
        let mut lift = Vec::with_capacity(n);
        for j in 0..n {
            lift.push(self.inverse_lift_value(step * cast::<T>(j as f64)));
        }
        pin_branch(&mut lift);
        Self::from_lift(lift, MapFamily::Sampled)
    }

    /// Resample onto a grid of `n` samples (exact for closed forms).
    pub fn resample(&self, n: usize) -> Result<Self> {
        if n == self.n {
            return Ok(self.clone());
        }
        Self::check_grid(n)?;
        let family = match &self.family {
            MapFamily::FromU { .. } | MapFamily::Sampled => MapFamily::Sampled,
            f => f.clone(),
        };
        let step = tau::<T>() / cast::<T>(n as f64);
        let lift = (0..n)
            .map(|j| self.eval_lift(step * cast::<T>(j as f64)))
            .collect();
        Self::from_lift(lift, family)
    }

    /// Post-rotate so that h(1) = 1 (phi(0) = 0).
    pub fn normalized(&self) -> Self {
        let shift = self.lift[0];
        if shift == T::zero() {
            return self.clone();
        }
        let family = match &self.family {
            MapFamily::Identity => MapFamily::Identity,
            MapFamily::Rotation { .. } => MapFamily::Identity,
            MapFamily::Mobius { a, beta } => MapFamily::Mobius { a: *a, beta: *beta - shift },
            MapFamily::FromU { log_phi_prime } => MapFamily::FromU {
                log_phi_prime: log_phi_prime.clone(),
            },
            MapFamily::Counterexample { alpha, c_alpha } => MapFamily::Counterexample {
                alpha: *alpha,
                c_alpha: *c_alpha,
            },
            MapFamily::SineFlat => MapFamily::SineFlat,
            MapFamily::Sampled => MapFamily::Sampled,
        };
        let lift = self.lift.iter().map(|&p| p - shift).collect();
        CircleMap {
            n: self.n,
            lift,
            family,
        }
    }

    /// Derivative samples: analytic when a closed form is available, spectral
    /// differentiation of the periodic part otherwise.
    pub fn derivative(&self) -> DerivativeData<T> {
        let n = self.n;
        let step = self.grid_step();
        let half_cell = step * cast::<T>(0.5);
        let theta = |j: usize| step * cast::<T>(j as f64);
        match &self.family {
            MapFamily::Identity | MapFamily::Rotation { .. } => DerivativeData {
                phi_prime: GridFunction::from_real_fn(n, |_| T::one()).unwrap(),
                log_phi_prime: GridFunction::from_real_fn(n, |_| T::zero()).unwrap(),
                provenance: Provenance::Analytic,
                degenerate: false,
            },
            MapFamily::Mobius { a, .. } => {
                let one_m = T::one() - a.norm_sqr();
                let pp: Vec<T> = (0..n)
                    .map(|j| {
                        let w = Complex::new(T::one(), T::zero())
                            - a.conj() * Complex::from_polar(T::one(), theta(j));
                        one_m / w.norm_sqr()
                    })
                    .collect();
                let lp: Vec<T> = pp.iter().map(|&v| v.ln()).collect();
                DerivativeData {
                    phi_prime: GridFunction::from_real(&pp).unwrap(),
                    log_phi_prime: GridFunction::from_real(&lp).unwrap(),
                    provenance: Provenance::Analytic,
                    degenerate: false,
                }
            }
            MapFamily::Counterexample { alpha, c_alpha } => {
                let pp: Vec<T> = (0..n)
                    .map(|j| {
                        let t = if j == 0 { half_cell } else { theta(j) };
                        *c_alpha * gallery::cx_integrand(*alpha, t)
                    })
                    .collect();
                let lp: Vec<T> = pp.iter().map(|&v| v.ln()).collect();
                DerivativeData {
                    phi_prime: GridFunction::from_real(&pp).unwrap(),
                    log_phi_prime: GridFunction::from_real(&lp).unwrap(),
                    provenance: Provenance::Analytic,
                    degenerate: false,
                }
            }
            MapFamily::SineFlat => {
                let pp: Vec<T> = (0..n).map(|j| T::one() - theta(j).cos()).collect();
                let lp: Vec<T> = (0..n)
                    .map(|j| {
                        let t = if j == 0 { half_cell } else { theta(j) };
                        (T::one() - t.cos()).ln()
                    })
                    .collect();
                DerivativeData {
                    phi_prime: GridFunction::from_real(&pp).unwrap(),
                    log_phi_prime: GridFunction::from_real(&lp).unwrap(),
                    provenance: Provenance::Analytic,
                    degenerate: true, // phi'(0) = 0
                }
            }
            MapFamily::FromU { log_phi_prime } => {
                let pp: Vec<T> = log_phi_prime.iter().map(|&v| v.exp()).collect();
                DerivativeData {
                    phi_prime: GridFunction::from_real(&pp).unwrap(),
                    log_phi_prime: GridFunction::from_real(log_phi_prime).unwrap(),
                    provenance: Provenance::Analytic,
                    degenerate: false,
                }
            }
            MapFamily::Sampled => {
                let p = GridFunction::from_real(&self.periodic_part()).unwrap();
                let series = crate::fourier::fourier_coefficients(&p, n / 2 - 1).unwrap();
                let deriv = differentiate(&series);
                let dsamp = crate::fourier::synthesize(&deriv, n).unwrap();
                let mut degenerate = false;
                let pp: Vec<T> = dsamp
                    .values()
                    .iter()
                    .map(|v| {
                        let d = T::one() + v.re;
                        if d <= T::zero() {
                            degenerate = true;
                        }
                        d
                    })
                    .collect();
                let floor = T::min_positive_value().ln() * cast::<T>(0.5);
                let lp: Vec<T> = pp
                    .iter()
                    .map(|&v| if v > T::zero() { v.ln() } else { floor })
                    .collect();
                DerivativeData {
                    phi_prime: GridFunction::from_real(&pp).unwrap(),
                    log_phi_prime: GridFunction::from_real(&lp).unwrap(),
                    provenance: Provenance::Spectral,
                    degenerate,
                }
            }
        }
    }

    pub fn from_spec(spec: &MapSpec) -> Result<Self> {
        let n = spec.grid;
        let p = &spec.params;
        match spec.family.as_str() {
            "identity" => Self::identity(n),
            "rotation" => Self::rotation(cast(p.beta.unwrap_or(0.0)), n),
            "mobius" => {
                let a = p.a.unwrap_or([0.0, 0.0]);
                Self::mobius(
                    Complex::new(cast(a[0]), cast(a[1])),
                    cast(p.beta.unwrap_or(0.0)),
                    n,
                )
            }
            "wp_counterexample" => {
                let alpha = p
                    .alpha
                    .ok_or_else(|| Error::InvalidArgument("wp_counterexample requires alpha".into()))?;
                Ok(gallery::build_counterexample(cast::<T>(alpha), n)?.0)
            }
            "sine_flat" => Ok(gallery::build_sine_flat(n)?),
            "from_u" => {
                let u = p
                    .u_values
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("from_u requires u_values".into()))?;
                if u.len() != n {
                    return Err(Error::InvalidArgument(format!(
                        "u_values length {} does not match grid {n}",
                        u.len()
                    )));
                }
                let vals: Vec<T> = u.iter().map(|&x| cast(x)).collect();
                let gf = GridFunction::from_real(&vals)?;
                from_boundary_density(&gf, p.renormalize.unwrap_or(false))
            }
            "samples" => {
                let lift = p
                    .lift
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("samples requires lift".into()))?;
                if lift.len() != n {
                    return Err(Error::InvalidArgument(format!(
                        "lift length {} does not match grid {n}",
                        lift.len()
                    )));
                }
                Self::from_lift(lift.iter().map(|&x| cast(x)).collect(), MapFamily::Sampled)
            }
            other => Err(Error::InvalidArgument(format!("unknown map family '{other}'"))),
        }
    }

    pub fn to_spec(&self) -> MapSpec {
        let mut params = MapParams::default();
        let family = match &self.family {
            MapFamily::Identity => "identity",
            MapFamily::Rotation { beta } => {
                params.beta = Some(as_f64(*beta));
                "rotation"
            }
            MapFamily::Mobius { a, beta } => {
                params.a = Some([as_f64(a.re), as_f64(a.im)]);
                params.beta = Some(as_f64(*beta));
                "mobius"
            }
            MapFamily::Counterexample { alpha, .. } => {
                params.alpha = Some(as_f64(*alpha));
                "wp_counterexample"
            }
            MapFamily::SineFlat => "sine_flat",
            MapFamily::FromU { log_phi_prime } => {
                params.u_values = Some(log_phi_prime.iter().map(|&v| as_f64(v)).collect());
                params.renormalize = Some(false);
                "from_u"
            }
            MapFamily::Sampled => {
                params.lift = Some(self.lift().iter().map(|&v| as_f64(v)).collect());
                "samples"
            }
        };
        MapSpec {
            family: family.to_string(),
            params,
            grid: self.n,
        }
    }
}

fn mobius_lift_value<T: Scalar>(a: Complex<T>, beta: T, x: T) -> T {
    // phi(x) = beta + x - 2 arg(1 - conj(a) e^{ix}), shifted so phi(0) in [0, 2pi).
    let two = cast::<T>(2.0);
    let w = |t: T| {
        let z = Complex::new(T::one(), T::zero()) - a.conj() * Complex::from_polar(T::one(), t);
        z.im.atan2(z.re)
    };
    let raw0 = beta - two * w(T::zero());
    let offset = -(raw0 / tau::<T>()).floor() * tau::<T>();
    beta + x - two * w(x) + offset
}

fn fc_tangent<T: Scalar>(sl: T, sr: T) -> T {
    if sl * sr <= T::zero() {
        T::zero()
    } else {
        let avg = (sl + sr) * cast::<T>(0.5);
        let lim = cast::<T>(3.0) * sl.min(sr);
        avg.min(lim)
    }
}

fn hermite<T: Scalar>(y0: T, y1: T, d0: T, d1: T, t: T) -> T {
    let one = T::one();
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = cast::<T>(2.0) * t3 - cast::<T>(3.0) * t2 + one;
    let h10 = t3 - cast::<T>(2.0) * t2 + t;
    let h01 = -cast::<T>(2.0) * t3 + cast::<T>(3.0) * t2;
    let h11 = t3 - t2;
    y0 * h00 + d0 * h10 + y1 * h01 + d1 * h11
}

/// Build h with lift phi(theta) = c * integral_0^theta e^u dt, c = 1 unless
/// `renormalize` (then c = 2 pi / integral over the period). log phi' equals
/// u - log c exactly at the samples.
pub fn from_boundary_density<T: Scalar>(
    u: &GridFunction<T>,
    renormalize: bool,
) -> Result<CircleMap<T>> {
    if !u.is_real(cast(1e-10)) {
        return Err(Error::InvalidArgument("boundary density u must be real-valued".into()));
    }
    let n = u.n_samples();
    let expu: Vec<T> = u.values().iter().map(|v| v.re.exp()).collect();
    if expu.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("e^u is not finite on the grid".into()));
    }
    let gf = GridFunction::from_real(&expu)?;
    let spec = full_spectrum(&gf);
    let b0 = spec[0].re;
    if !renormalize {
        let total = tau::<T>() * b0;
        if (total - tau::<T>()).abs() > cast(1e-8) {
            return Err(Error::Precondition(format!(
                "integral of e^u over the period is {} (must be 2pi within 1e-8, or pass renormalize)",
                as_f64(total)
            )));
        }
    }
    let c = T::one() / b0;
    // spectral antiderivative of the trigonometric interpolant of e^u
    let zero = Complex::new(T::zero(), T::zero());
    let mut anti = vec![zero; n];
    for (i, &s) in spec.iter().enumerate() {
        if i == 0 {
            continue;
        }
        let m = if i < n / 2 { i as i64 } else { i as i64 - n as i64 };
        let im_n = Complex::new(T::zero(), cast::<T>(m as f64));
        anti[i] = s / im_n;
    }
    let anti_samples = fft_inverse(&anti);
    let step = tau::<T>() / cast::<T>(n as f64);
    let lnc = c.ln();
    let mut lift = Vec::with_capacity(n);
    for j in 0..n {
        let a_j = b0 * step * cast::<T>(j as f64) + (anti_samples[j].re - anti_samples[0].re);
        lift.push(c * a_j);
    }
    let log_phi_prime: Vec<T> = u.values().iter().map(|v| v.re + lnc).collect();
    CircleMap::from_lift(lift, MapFamily::FromU { log_phi_prime })
}

/// JSON map-spec: `{"family": ..., "params": {...}, "grid": N}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapSpec {
    pub family: String,
    #[serde(default)]
    pub params: MapParams,
    pub grid: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MapParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renormalize: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = std::f64::consts::TAU;

    fn sup_lift_distance(h: &CircleMap<f64>, k: &CircleMap<f64>) -> f64 {
        let n = h.n_samples().max(k.n_samples());
        let hr = h.resample(n).unwrap();
        let kr = k.resample(n).unwrap();
        hr.lift()
            .iter()
            .zip(kr.lift())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_roundtrips() {
        let id = CircleMap::<f64>::identity(64).unwrap();
        let c = CircleMap::compose(&id, &id).unwrap();
        assert!(sup_lift_distance(&c, &id) < 1e-15);
        assert!(sup_lift_distance(&id.invert().unwrap(), &id) < 1e-15);
    }

    #[test]
    fn rotations_compose_exactly() {
        let r1 = CircleMap::<f64>::rotation(0.7, 64).unwrap();
        let r2 = CircleMap::<f64>::rotation(1.1, 64).unwrap();
        let c = CircleMap::compose(&r1, &r2).unwrap();
        match c.family() {
            MapFamily::Rotation { beta } => assert!((beta - 1.8).abs() < 1e-15),
            _ => panic!("expected rotation"),
        }
        let inv = r1.invert().unwrap();
        match inv.family() {
            MapFamily::Rotation { beta } => assert!((beta - (TAU - 0.7)).abs() < 1e-15),
            _ => panic!("expected rotation"),
        }
    }

    #[test]
    fn compose_with_identity_is_identity_on_h() {
        let h = CircleMap::<f64>::mobius(Complex::new(0.3, 0.1), 0.4, 256).unwrap();
        let id = CircleMap::<f64>::identity(256).unwrap();
        let c = CircleMap::compose(&h, &id).unwrap();
        assert!(sup_lift_distance(&c, &h) < 1e-14);
    }

    #[test]
    fn mobius_group_law_roundtrip() {
        // sigma_a followed by its numeric inverse is the identity to grid accuracy
        let h = CircleMap::<f64>::mobius(Complex::new(0.3, 0.0), 0.0, 1 << 12).unwrap();
        let hinv = h.invert().unwrap();
        let c = CircleMap::compose(&h, &hinv).unwrap();
        let id = CircleMap::<f64>::identity(1 << 12).unwrap();
        assert!(sup_lift_distance(&c, &id) < 1e-10);
    }

    #[test]
    fn mobius_inverse_matches_closed_form() {
        // inverse of z -> (z-a)/(1-az) for real a is z -> (z+a)/(1+az)
        let n = 1 << 12;
        let h = CircleMap::<f64>::mobius(Complex::new(0.3, 0.0), 0.0, n).unwrap();
        let hinv = h.invert().unwrap();
        let closed = CircleMap::<f64>::mobius(Complex::new(-0.3, 0.0), 0.0, n).unwrap();
        assert!(sup_lift_distance(&hinv, &closed) < 1e-8);
    }

    #[test]
    fn mobius_derivative_formula() {
        let a = Complex::new(0.25, -0.4);
        let h = CircleMap::<f64>::mobius(a, 0.3, 128).unwrap();
        let d = h.derivative();
        assert_eq!(d.provenance, Provenance::Analytic);
        // finite differences of the lift as an independent check
        let step = 1e-6;
        for j in [0usize, 17, 64, 100] {
            let t = TAU * j as f64 / 128.0;
            let fd = (h.eval_lift(t + step) - h.eval_lift(t - step)) / (2.0 * step);
            assert!(
                (fd - d.phi_prime.values()[j].re).abs() < 1e-7,
                "fd {fd} vs formula {}",
                d.phi_prime.values()[j].re
            );
        }
    }

    #[test]
    fn spectral_derivative_matches_analytic_for_mobius() {
        let a = Complex::new(0.3, 0.1);
        let n = 1 << 12;
        let h = CircleMap::<f64>::mobius(a, 0.0, n).unwrap();
        let sampled = CircleMap::from_lift(h.lift(), MapFamily::Sampled).unwrap();
        let da = h.derivative();
        let ds = sampled.derivative();
        assert_eq!(ds.provenance, Provenance::Spectral);
        let mut worst = 0.0f64;
        for j in 0..n {
            worst = worst.max((da.phi_prime.values()[j].re - ds.phi_prime.values()[j].re).abs());
        }
        assert!(worst < 1e-8, "worst {worst:e}");
    }

    #[test]
    fn sine_flat_derivative_degenerate() {
        let h = gallery::build_sine_flat::<f64>(256).unwrap();
        let d = h.derivative();
        assert!(d.degenerate);
        assert_eq!(d.phi_prime.values()[0].re, 0.0);
        // phi' = 1 - cos theta = 2 sin^2(theta/2)
        for j in 1..256 {
            let t = TAU * j as f64 / 256.0;
            assert!((d.phi_prime.values()[j].re - 2.0 * (t / 2.0).sin().powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn from_boundary_density_zero_is_identity() {
        let u = GridFunction::from_real_fn(64, |_: f64| 0.0).unwrap();
        let h = from_boundary_density(&u, false).unwrap();
        let id = CircleMap::<f64>::identity(64).unwrap();
        assert!(sup_lift_distance(&h, &id) < 1e-14);
    }

    #[test]
    fn from_boundary_density_sine_flat() {
        // u = log(2 sin^2(t/2)) integrates to theta - sin(theta); use the
        // half-cell value at the singular node like the derivative sampler
        let n = 1 << 10;
        let u = GridFunction::from_real_fn(n, |t: f64| {
            let tt = if t == 0.0 { std::f64::consts::PI / n as f64 } else { t };
            (2.0 * (tt / 2.0).sin().powi(2)).ln()
        })
        .unwrap();
        // the singular sample perturbs the quadrature; renormalize absorbs it
        let h = from_boundary_density(&u, true).unwrap();
        let flat = gallery::build_sine_flat::<f64>(n).unwrap();
        // agreement away from the critical point is what the construction can give
        let lift_h = h.lift();
        let lift_f = flat.lift();
        let mut worst = 0.0f64;
        for j in n / 8..n {
            worst = worst.max((lift_h[j] - lift_f[j]).abs());
        }
        assert!(worst < 2e-3, "worst {worst:e}");
    }

    #[test]
    fn from_boundary_density_rejects_bad_total() {
        let u = GridFunction::from_real_fn(64, |_: f64| 0.5).unwrap();
        assert!(from_boundary_density(&u, false).is_err());
        assert!(from_boundary_density(&u, true).is_ok());
    }

    #[test]
    fn boundary_density_roundtrip_log_derivative() {
        // derivative o from_boundary_density returns u minus a constant
        let n = 256;
        let u = GridFunction::from_real_fn(n, |t: f64| 0.4 * t.cos() + 0.1 * (2.0 * t).sin()).unwrap();
        let h = from_boundary_density(&u, true).unwrap();
        let d = h.derivative();
        let diff: Vec<f64> = (0..n)
            .map(|j| d.log_phi_prime.values()[j].re - u.values()[j].re)
            .collect();
        let c0 = diff[0];
        assert!(diff.iter().all(|&x| (x - c0).abs() < 1e-8));
        // exp(log phi') = phi'
        for j in 0..n {
            let rel = (d.log_phi_prime.values()[j].re.exp() - d.phi_prime.values()[j].re).abs()
                / d.phi_prime.values()[j].re;
            assert!(rel < 1e-10);
        }
    }

    #[test]
    fn monotonicity_validation() {
        let mut lift: Vec<f64> = (0..64).map(|j| TAU * j as f64 / 64.0).collect();
        lift[10] = lift[12];
        assert!(matches!(
            CircleMap::from_lift(lift, MapFamily::Sampled),
            Err(Error::Monotonicity(_))
        ));
    }

    #[test]
    fn map_spec_roundtrip_sampled_bit_exact() {
        let h = CircleMap::<f64>::mobius(Complex::new(0.21, 0.13), 0.5, 64).unwrap();
        let sampled = CircleMap::from_lift(h.lift(), MapFamily::Sampled).unwrap();
        let spec = sampled.to_spec();
        let json = serde_json::to_string(&spec).unwrap();
        let back: MapSpec = serde_json::from_str(&json).unwrap();
        let h2 = CircleMap::<f64>::from_spec(&back).unwrap();
        for (a, b) in sampled.lift().iter().zip(h2.lift()) {
            assert_eq!(*a, b, "bit-exact round-trip");
        }
    }

    #[test]
    fn map_spec_families_parse() {
        for json in [
            r#"{"family":"identity","grid":64}"#,
            r#"{"family":"rotation","params":{"beta":0.3},"grid":64}"#,
            r#"{"family":"mobius","params":{"a":[0.3,0.0],"beta":0.1},"grid":64}"#,
            r#"{"family":"sine_flat","grid":64}"#,
        ] {
            let spec: MapSpec = serde_json::from_str(json).unwrap();
            CircleMap::<f64>::from_spec(&spec).unwrap();
        }
        let bad: MapSpec = serde_json::from_str(r#"{"family":"nope","grid":64}"#).unwrap();
        assert!(CircleMap::<f64>::from_spec(&bad).is_err());
    }

    #[test]
    fn closed_form_resampling_consistency() {
        // resampling a closed-form map agrees with the formula
        let h = CircleMap::<f64>::mobius(Complex::new(0.4, 0.2), 1.0, 64).unwrap();
        let fine = h.resample(512).unwrap();
        let direct = CircleMap::<f64>::mobius(Complex::new(0.4, 0.2), 1.0, 512).unwrap();
        assert!(sup_lift_distance(&fine, &direct) < 1e-12);
    }

    #[test]
    fn interpolated_composition_accuracy_scales() {
        // sampled-only path: error monotone in N for a smooth map
        let mut prev = f64::INFINITY;
        for exp in [8usize, 10, 12] {
            let n = 1usize << exp;
            let h = CircleMap::<f64>::mobius(Complex::new(0.5, 0.0), 0.0, n).unwrap();
            let hs = CircleMap::from_lift(h.lift(), MapFamily::Sampled).unwrap();
            let hinv = hs.invert().unwrap();
            let c = CircleMap::compose(&hs, &hinv).unwrap();
            let id = CircleMap::<f64>::identity(n).unwrap();
            let d = sup_lift_distance(&c, &id);
            assert!(d < prev || d < 1e-12, "N={n}: {d:e} vs {prev:e}");
            prev = d;
        }
        assert!(prev < 1e-9, "finest error {prev:e}");
    }
}
