//! Calculus on holomorphic functions through truncated power series: the
//! disk norms, pre-Schwarzian/Schwarzian and the Lambda map, the Grunsky
//! kernel and matrix, the Ahlfors-Weil Beltrami section and the WP norm.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fourier::fft_forward;
use crate::profile::DyadicProfile;
use crate::pullback::{MatrixLabel, OperatorMatrix};
use crate::scalar::{as_f64, cast, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesDomain {
    Disk,
    /// Series in w = 1/z about infinity.
    Exterior,
}

/// Truncated power series: Taylor about 0 on the disk, or about infinity in
/// the variable 1/z for the exterior.
#[derive(Clone, Debug)]
pub struct PowerSeries<T: Scalar> {
    domain: SeriesDomain,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> PowerSeries<T> {
    pub fn new(domain: SeriesDomain, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient list".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(PowerSeries { domain, coeffs })
    }

    pub fn disk(coeffs: Vec<Complex<T>>) -> Result<Self> {
        Self::new(SeriesDomain::Disk, coeffs)
    }

    pub fn exterior(coeffs: Vec<Complex<T>>) -> Result<Self> {
        Self::new(SeriesDomain::Exterior, coeffs)
    }

    pub fn zero(domain: SeriesDomain, truncation: usize) -> Self {
        PowerSeries {
            domain,
            coeffs: vec![Complex::new(T::zero(), T::zero()); truncation + 1],
        }
    }

    pub fn domain(&self) -> SeriesDomain {
        self.domain
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex<T> {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or(Complex::new(T::zero(), T::zero()))
    }

    /// Horner evaluation in the series variable (z on the disk, 1/z outside).
    pub fn evaluate(&self, z: Complex<T>) -> Complex<T> {
        let w = match self.domain {
            SeriesDomain::Disk => z,
            SeriesDomain::Exterior => z.inv(),
        };
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc
    }

    /// Value on the unit circle at angle theta.
    pub fn boundary_value(&self, theta: T) -> Complex<T> {
        self.evaluate(Complex::from_polar(T::one(), theta))
    }

    /// Geometric-extrapolation bound on the truncation tail at radius r
    /// (in the series variable).
    pub fn tail_bound(&self, r: T) -> T {
        let k = self.truncation();
        if k < 8 {
            return T::infinity();
        }
        let hi = self.coeffs[k].norm().max(self.coeffs[k - 1].norm());
        let lo = self.coeffs[k - 4].norm().max(self.coeffs[k - 5].norm());
        if lo == T::zero() {
            return hi * r.powi(k as i32);
        }
        let q = (hi / lo).powf(cast::<T>(0.25)) * r;
        let head = hi * r.powi(k as i32);
        if q < T::one() {
            head / (T::one() - q)
        } else {
            T::infinity()
        }
    }

    /// `{"domain": "disk"|"exterior", "truncation": K, "coefficients": [[re,im],...]}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "domain": match self.domain { SeriesDomain::Disk => "disk", SeriesDomain::Exterior => "exterior" },
            "truncation": self.truncation(),
            "coefficients": self
                .coeffs
                .iter()
                .map(|c| vec![as_f64(c.re), as_f64(c.im)])
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let domain = match v.get("domain").and_then(|d| d.as_str()) {
            Some("disk") => SeriesDomain::Disk,
            Some("exterior") => SeriesDomain::Exterior,
            _ => return Err(Error::InvalidArgument("series domain must be disk or exterior".into())),
        };
        let coeffs = v
            .get("coefficients")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::InvalidArgument("missing coefficients".into()))?
            .iter()
            .map(|pair| {
                let re = pair.get(0).and_then(|x| x.as_f64());
                let im = pair.get(1).and_then(|x| x.as_f64());
                match (re, im) {
                    (Some(re), Some(im)) => Ok(Complex::new(cast::<T>(re), cast::<T>(im))),
                    _ => Err(Error::InvalidArgument("coefficient must be [re, im]".into())),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, coeffs)
    }

    pub fn derivative(&self) -> Result<Self> {
        if self.domain != SeriesDomain::Disk {
            return Err(Error::InvalidArgument(
                "termwise derivative implemented for disk series".into(),
            ));
        }
        let k = self.truncation();
        let mut out = vec![Complex::new(T::zero(), T::zero()); k + 1];
        for n in 1..=k {
            out[n - 1] = self.coeffs[n].scale(cast(n as f64));
        }
        Ok(PowerSeries {
            domain: SeriesDomain::Disk,
            coeffs: out,
        })
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        PowerSeries {
            domain: self.domain,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::InvalidArgument("domain mismatch".into()));
        }
        let k = self.truncation().max(other.truncation());
        let mut out = vec![Complex::new(T::zero(), T::zero()); k + 1];
        for (n, o) in out.iter_mut().enumerate() {
            *o = self.coeff(n) - other.coeff(n);
        }
        Ok(PowerSeries {
            domain: self.domain,
            coeffs: out,
        })
    }

    /// Cauchy product truncated at `trunc`.
    pub fn mul(&self, other: &Self, trunc: usize) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::InvalidArgument("domain mismatch".into()));
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![zero; trunc + 1];
        for i in 0..=self.truncation().min(trunc) {
            let a = self.coeffs[i];
            if a == zero {
                continue;
            }
            for j in 0..=other.truncation().min(trunc - i) {
                out[i + j] += a * other.coeffs[j];
            }
        }
        Ok(PowerSeries {
            domain: self.domain,
            coeffs: out,
        })
    }

    /// exp of the series: b_0 = e^{c_0}, n b_n = sum_{k=1}^{n} k c_k b_{n-k}.
    pub fn exp(&self) -> Result<Self> {
        if self.domain != SeriesDomain::Disk {
            return Err(Error::InvalidArgument("exp implemented for disk series".into()));
        }
        let k = self.truncation();
        let mut out = vec![Complex::new(T::zero(), T::zero()); k + 1];
        out[0] = self.coeffs[0].exp();
        for n in 1..=k {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 1..=n {
                acc += self.coeffs[j].scale(cast(j as f64)) * out[n - j];
            }
            out[n] = acc.scale(T::one() / cast(n as f64));
        }
        Ok(PowerSeries {
            domain: SeriesDomain::Disk,
            coeffs: out,
        })
    }
}

/// N_f = (log f')'.
pub fn pre_schwarzian<T: Scalar>(log_fp: &PowerSeries<T>) -> Result<PowerSeries<T>> {
    log_fp.derivative()
}

/// S_f = N_f' - N_f^2 / 2.
pub fn schwarzian<T: Scalar>(log_fp: &PowerSeries<T>) -> Result<PowerSeries<T>> {
    let k = log_fp.truncation();
    let n = pre_schwarzian(log_fp)?;
    let np = n.derivative()?;
    let n2 = n.mul(&n, k)?;
    np.sub(&n2.scale(Complex::new(cast(0.5), T::zero())))
}

/// Lambda(phi) = phi'' - (phi')^2 / 2; coincides with the Schwarzian of the
/// map whose pre-logarithmic derivative is phi.
pub fn lambda_map<T: Scalar>(phi: &PowerSeries<T>) -> Result<PowerSeries<T>> {
    let k = phi.truncation();
    let d1 = phi.derivative()?;
    let d2 = d1.derivative()?;
    let sq = d1.mul(&d1, k)?;
    d2.sub(&sq.scale(Complex::new(cast(0.5), T::zero())))
}

/// Max of |phi| on the circle of radius r, by padded inverse FFT.
fn circle_max<T: Scalar>(coeffs: &[Complex<T>], r: T) -> T {
    let k = coeffs.len() - 1;
    let m = (4 * (k + 1)).next_power_of_two().max(512);
    let zero = Complex::new(T::zero(), T::zero());
    let mut spec = vec![zero; m];
    let mut rn = T::one();
    for (n, &c) in coeffs.iter().enumerate() {
        spec[n] = c.scale(rn);
        rn = rn * r;
    }
    let vals = crate::fourier::fft_inverse(&spec);
    vals.iter().map(|v| v.norm()).fold(T::zero(), T::max)
}

fn sup_norm_weighted<T: Scalar>(coeffs: &[Complex<T>], weight_power: i32) -> T {
    // sup over the disk of (1-r^2)^weight_power * max_theta |phi(r e^{i theta})|
    let mut best_prev = T::zero();
    let mut nr = 256usize;
    loop {
        let mut best = T::zero();
        for i in 0..nr {
            let r = (cast::<T>(i as f64) + cast(0.5)) / cast(nr as f64);
            let w = (T::one() - r * r).powi(weight_power);
            let v = w * circle_max(coeffs, r);
            best = best.max(v);
        }
        let stable = (best - best_prev).abs() <= cast::<T>(1e-7) * best.max(T::one());
        if stable || nr >= 4096 {
            return best;
        }
        best_prev = best;
        nr *= 2;
    }
}

/// sup (1-|z|^2)^2 |phi(z)|.
pub fn norm_b2<T: Scalar>(phi: &PowerSeries<T>) -> T {
    sup_norm_weighted(phi.coeffs(), 2)
}

/// sup (1-|z|^2) |phi'(z)|.
pub fn norm_bloch<T: Scalar>(phi: &PowerSeries<T>) -> Result<T> {
    Ok(sup_norm_weighted(phi.derivative()?.coeffs(), 1))
}

/// ((1/pi) iint |phi|^2 (1-|z|^2)^2)^{1/2}, by the exact coefficient formula
/// sum |c_n|^2 * 2/((n+1)(n+2)(n+3)).
pub fn norm_script_b<T: Scalar>(phi: &PowerSeries<T>) -> T {
    let mut acc = T::zero();
    for (n, c) in phi.coeffs().iter().enumerate() {
        let nf = cast::<T>(n as f64);
        let w = cast::<T>(2.0)
            / ((nf + T::one()) * (nf + cast(2.0)) * (nf + cast(3.0)));
        acc = acc + c.norm_sqr() * w;
    }
    acc.sqrt()
}

/// ((1/pi) iint |phi'|^2)^{1/2} = (sum n |c_n|^2)^{1/2}; the same coefficient
/// formula holds for exterior series in the variable 1/z.
pub fn norm_ad<T: Scalar>(phi: &PowerSeries<T>) -> T {
    let mut acc = T::zero();
    for (n, c) in phi.coeffs().iter().enumerate() {
        acc = acc + c.norm_sqr() * cast(n as f64);
    }
    acc.sqrt()
}

/// f with f(0) = 0, f'(0) = 1 from its pre-logarithmic derivative log f'.
pub fn reconstruct_f<T: Scalar>(log_fp: &PowerSeries<T>) -> Result<PowerSeries<T>> {
    if log_fp.domain() != SeriesDomain::Disk {
        return Err(Error::InvalidArgument("log f' must be a disk series".into()));
    }
    if log_fp.coeff(0).norm() > cast(1e-12) {
        return Err(Error::InvalidArgument(
            "log f'(0) must vanish for the normalization f'(0) = 1".into(),
        ));
    }
    let fp = log_fp.exp()?;
    let k = log_fp.truncation();
    let mut out = vec![Complex::new(T::zero(), T::zero()); k + 2];
    for n in 0..=k {
        out[n + 1] = fp.coeff(n).scale(T::one() / cast((n + 1) as f64));
    }
    PowerSeries::disk(out)
}

/// Direct evaluation of the Grunsky kernel
/// 1/(zeta-z)^2 - f'(zeta) f'(z) / (f(zeta)-f(z))^2,
/// stable through the divided-difference form of f(zeta)-f(z).
fn kernel_direct<T: Scalar>(
    f: &PowerSeries<T>,
    fp: &PowerSeries<T>,
    zeta: Complex<T>,
    z: Complex<T>,
) -> Complex<T> {
    // F = (f(zeta)-f(z))/(zeta-z) via p_n = (zeta^n - z^n)/(zeta - z)
    let zero = Complex::new(T::zero(), T::zero());
    let mut big_f = zero;
    let mut p = Complex::new(T::one(), T::zero()); // p_1
    let mut zpow = Complex::new(T::one(), T::zero()); // z^{n-1}
    for n in 1..=f.truncation() {
        big_f += f.coeff(n) * p;
        zpow = zpow * z;
        p = p * zeta + zpow;
    }
    let d = zeta - z;
    let num = big_f * big_f - fp.evaluate(zeta) * fp.evaluate(z);
    num / (d * d * big_f * big_f)
}

/// Default extraction circles. Radii below ~0.8 are useless past modest
/// truncations: the coefficient of zeta^m z^n is read against r1^m r2^n, so
/// sampling noise is amplified by (r1 r2)^{-K} (1e16 at K = 32 for 0.5/0.6,
/// a few 1e4 here).
const GRUNSKY_R1: f64 = 0.8;
const GRUNSKY_R2: f64 = 0.9;

/// Double Taylor coefficients v_{mn} of the Grunsky kernel, extracted by
/// double Fourier analysis on the circles |zeta| = r1, |z| = r2.
pub(crate) fn grunsky_double_coeffs<T: Scalar>(
    f_log_fp: &PowerSeries<T>,
    k: usize,
    r1: T,
    r2: T,
) -> Result<Vec<Vec<Complex<T>>>> {
    let f = reconstruct_f(f_log_fp)?;
    let fp = f.derivative()?;
    let m = (4 * (k + 1)).next_power_of_two().max(64);
    let tau = T::TAU();
    // sample kernel(zeta_a, z_b); the circles keep |zeta - z| >= r2 - r1
    let mut rows: Vec<Vec<Complex<T>>> = Vec::with_capacity(m);
    for a in 0..m {
        let zeta = Complex::from_polar(r1, tau * cast::<T>(a as f64) / cast(m as f64));
        let mut row = Vec::with_capacity(m);
        for b in 0..m {
            let z = Complex::from_polar(r2, tau * cast::<T>(b as f64) / cast(m as f64));
            row.push(kernel_direct(&f, &fp, zeta, z));
        }
        rows.push(row);
    }
    // 2-D FFT (rows then columns), each pass normalized by 1/M
    let rows_t: Vec<Vec<Complex<T>>> = rows.iter().map(|r| fft_forward(r)).collect();
    let mut coeffs = vec![vec![Complex::new(T::zero(), T::zero()); k + 1]; k + 1];
    for n in 0..=k {
        let col: Vec<Complex<T>> = (0..m).map(|a| rows_t[a][n]).collect();
        let col_t = fft_forward(&col);
        for mm in 0..=k {
            let scale = T::one() / (r1.powi(mm as i32) * r2.powi(n as i32));
            coeffs[mm][n] = col_t[mm].scale(scale);
        }
    }
    Ok(coeffs)
}

/// Grunsky kernel value; uses the double-series evaluation near the diagonal
/// where the direct difference-quotient form cancels catastrophically.
pub fn grunsky_kernel<T: Scalar>(
    f_log_fp: &PowerSeries<T>,
    zeta: Complex<T>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    if zeta.norm() >= T::one() || z.norm() >= T::one() {
        return Err(Error::InvalidArgument("kernel arguments must lie in the open disk".into()));
    }
    if (zeta - z).norm() >= cast(0.05) {
        let f = reconstruct_f(f_log_fp)?;
        let fp = f.derivative()?;
        Ok(kernel_direct(&f, &fp, zeta, z))
    } else {
        if zeta.norm() > cast(0.75) || z.norm() > cast(0.75) {
            return Err(Error::InvalidArgument(
                "near-diagonal kernel evaluation supported for |z| <= 0.75".into(),
            ));
        }
        let k = f_log_fp.truncation();
        let v = grunsky_double_coeffs(f_log_fp, k, cast(GRUNSKY_R1), cast(GRUNSKY_R2))?;
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut zp = Complex::new(T::one(), T::zero());
        for row in v.iter() {
            let mut acc_row = Complex::new(T::zero(), T::zero());
            for &c in row.iter().rev() {
                acc_row = acc_row * z + c;
            }
            acc += acc_row * zp;
            zp = zp * zeta;
        }
        Ok(acc)
    }
}

/// Grunsky operator matrix in the normalized basis e_n = sqrt(n+1) z^n,
/// with an aliasing indicator from the top coefficient row.
pub struct GrunskyMatrixReport<T: Scalar> {
    pub matrix: OperatorMatrix<T>,
    /// Largest coefficient magnitude on the truncation boundary relative to
    /// the overall largest; values near 1 mean the truncation is too small
    /// (or the extraction radii too close to 1) for this f.
    pub tail_indicator: T,
}

pub fn grunsky_matrix<T: Scalar>(
    f_log_fp: &PowerSeries<T>,
    k: usize,
) -> Result<GrunskyMatrixReport<T>> {
    let v = grunsky_double_coeffs(f_log_fp, k, cast(GRUNSKY_R1), cast(GRUNSKY_R2))?;
    let mut m = OperatorMatrix::zeros(k, k, MatrixLabel::Grunsky);
    let mut overall = T::zero();
    let mut boundary = T::zero();
    for i in 0..k {
        for j in 0..k {
            let w = T::one() / (cast::<T>((i + 1) as f64) * cast::<T>((j + 1) as f64)).sqrt();
            m.set(i, j, v[i][j].scale(w));
            let mag = v[i][j].norm();
            overall = overall.max(mag);
            if i == k - 1 || j == k - 1 {
                boundary = boundary.max(mag);
            }
        }
    }
    let tail_indicator = if overall > T::zero() { boundary / overall } else { T::zero() };
    Ok(GrunskyMatrixReport {
        matrix: m,
        tail_indicator,
    })
}

/// Beltrami coefficient samples on a polar grid over the exterior annulus
/// 1 < rho <= r_outer; shells sit at midpoints so no sample touches |z| = 1.
#[derive(Clone, Debug)]
pub struct BeltramiSample<T: Scalar> {
    r_inner: T,
    r_outer: T,
    n_r: usize,
    n_theta: usize,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> BeltramiSample<T> {
    pub fn from_fn(
        r_inner: T,
        r_outer: T,
        n_r: usize,
        n_theta: usize,
        f: impl Fn(Complex<T>) -> Complex<T>,
    ) -> Result<Self> {
        if r_inner < T::one() || r_outer <= r_inner || n_r < 2 || n_theta < 4 {
            return Err(Error::InvalidArgument("bad polar grid for Beltrami samples".into()));
        }
        let tau = T::TAU();
        let mut values = Vec::with_capacity(n_r * n_theta);
        for i in 0..n_r {
            let rho = r_inner
                + (r_outer - r_inner) * (cast::<T>(i as f64) + cast(0.5)) / cast(n_r as f64);
            for b in 0..n_theta {
                let z = Complex::from_polar(rho, tau * cast::<T>(b as f64) / cast(n_theta as f64));
                let mu = f(z);
                if mu.norm() >= T::one() {
                    return Err(Error::Precondition(format!(
                        "|mu| = {} >= 1 at a sample",
                        as_f64(mu.norm())
                    )));
                }
                values.push(mu);
            }
        }
        Ok(BeltramiSample {
            r_inner,
            r_outer,
            n_r,
            n_theta,
            values,
        })
    }

    pub fn rho(&self, i: usize) -> T {
        self.r_inner
            + (self.r_outer - self.r_inner) * (cast::<T>(i as f64) + cast(0.5))
                / cast(self.n_r as f64)
    }

    pub fn sup_abs(&self) -> T {
        self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }
}

/// The Ahlfors-Weil Beltrami section
/// mu(z) = -(1/2)(|z|^2-1)^2 S_f(1/conj(z)) conj(z)^{-4} on the exterior,
/// with the default smallness threshold 2 (the |mu| < 1 bound).
pub fn ahlfors_weil_mu<T: Scalar>(
    s_f: &PowerSeries<T>,
    r_outer: T,
    n_r: usize,
    n_theta: usize,
) -> Result<BeltramiSample<T>> {
    ahlfors_weil_mu_with(s_f, cast(2.0), r_outer, n_r, n_theta)
}

/// Same section with a caller-chosen bound on ||S_f||_{B_2}; smaller values
/// give users room for their own univalence criterion.
pub fn ahlfors_weil_mu_with<T: Scalar>(
    s_f: &PowerSeries<T>,
    b2_threshold: T,
    r_outer: T,
    n_r: usize,
    n_theta: usize,
) -> Result<BeltramiSample<T>> {
    if s_f.domain() != SeriesDomain::Disk {
        return Err(Error::InvalidArgument("S_f must be a disk series".into()));
    }
    let b2 = norm_b2(s_f);
    if b2 >= b2_threshold {
        return Err(Error::Precondition(format!(
            "norm_b2(S_f) = {} >= threshold {}: the section leaves the admissible ball",
            as_f64(b2),
            as_f64(b2_threshold)
        )));
    }
    let half = cast::<T>(0.5);
    BeltramiSample::from_fn(T::one(), r_outer, n_r, n_theta, |z| {
        let zb = z.conj();
        let w = zb.inv();
        let r2 = z.norm_sqr();
        let fac = (r2 - T::one()) * (r2 - T::one());
        let zb4 = (zb * zb) * (zb * zb);
        -s_f.evaluate(w) * Complex::new(half * fac, T::zero()) / zb4
    })
}

#[derive(Clone, Debug)]
pub struct WpNormReport<T> {
    /// Sample sup of |mu|.
    pub sup: T,
    /// ((1/pi) iint |mu|^2 / (|z|^2-1)^2 dxdy)^{1/2} over the sampled annulus.
    pub integral_part: T,
    /// sup + integral_part.
    pub total: T,
    /// Squared integral under radial coarsening (coarsest first).
    pub profile: DyadicProfile<T>,
}

/// WP norm of a Beltrami sample by polar quadrature.
pub fn wp_norm<T: Scalar>(mu: &BeltramiSample<T>) -> WpNormReport<T> {
    let d_rho = (mu.r_outer - mu.r_inner) / cast(mu.n_r as f64);
    let d_theta = T::TAU() / cast(mu.n_theta as f64);
    let integral_at = |stride: usize| -> T {
        let mut acc = T::zero();
        let mut i = 0;
        while i < mu.n_r {
            let rho = mu.rho(i);
            let denom = (rho * rho - T::one()) * (rho * rho - T::one());
            let mut shell = T::zero();
            for b in 0..mu.n_theta {
                shell = shell + mu.values[i * mu.n_theta + b].norm_sqr();
            }
            acc = acc + shell * rho / denom;
            i += stride;
        }
        acc * d_rho * cast::<T>(stride as f64) * d_theta / T::PI()
    };
    let mut params = Vec::new();
    let mut values = Vec::new();
    for stride in [4usize, 2, 1] {
        if mu.n_r / stride < 2 {
            continue;
        }
        params.push(mu.n_r / stride);
        values.push(integral_at(stride));
    }
    let sq = *values.last().unwrap();
    let sup = mu.sup_abs();
    WpNormReport {
        sup,
        integral_part: sq.sqrt(),
        total: sup + sq.sqrt(),
        profile: DyadicProfile::new(params, values),
    }
}
