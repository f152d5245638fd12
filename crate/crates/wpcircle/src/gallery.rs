//! Closed-form instances: the log^2-singular counterexample family, its
//! auxiliary analytic function, the sine-flat map, the deformation flow field
//! and Mobius welding triples.

use num_complex::Complex;

use crate::circle::{CircleMap, DerivativeData, MapFamily};
use crate::error::{Error, Result};
use crate::fourier::{fourier_coefficients, sobolev_profile, GridFunction};
use crate::holo::{PowerSeries, SeriesDomain};
use crate::profile::DyadicProfile;
use crate::scalar::{as_f64, cast, Scalar};

// 8-point Gauss-Legendre rule on [-1, 1]
const GL8_X: [f64; 4] = [
    0.1834346424956498,
    0.5255324099163290,
    0.7966664774136267,
    0.9602898564975363,
];
const GL8_W: [f64; 4] = [
    0.3626837833783620,
    0.3137066458778873,
    0.2223810344533745,
    0.1012285362903763,
];

fn gauss8<T: Scalar>(f: &impl Fn(T) -> T, a: T, b: T) -> T {
    let mid = (a + b) * cast::<T>(0.5);
    let rad = (b - a) * cast::<T>(0.5);
    let mut acc = T::zero();
    for i in 0..4 {
        let x = cast::<T>(GL8_X[i]) * rad;
        acc = acc + cast::<T>(GL8_W[i]) * (f(mid + x) + f(mid - x));
    }
    acc * rad
}

fn adaptive_gauss<T: Scalar>(f: &impl Fn(T) -> T, a: T, b: T, tol: T, depth: u32) -> T {
    let whole = gauss8(f, a, b);
    let mid = (a + b) * cast::<T>(0.5);
    let left = gauss8(f, a, mid);
    let right = gauss8(f, mid, b);
    if (left + right - whole).abs() <= tol || depth >= 44 {
        left + right
    } else {
        let half_tol = tol * cast::<T>(0.5);
        adaptive_gauss(f, a, mid, half_tol, depth + 1) + adaptive_gauss(f, mid, b, half_tol, depth + 1)
    }
}

/// phi'/c_alpha of the counterexample family:
/// (log alpha - log sin(t/2))^2 + (pi - t)^2 / 4.
pub(crate) fn cx_integrand<T: Scalar>(alpha: T, t: T) -> T {
    let la = alpha.ln();
    let s = (t * cast::<T>(0.5)).sin().ln();
    let d = (T::PI() - t) * cast::<T>(0.5);
    (la - s) * (la - s) + d * d
}

// below this cut the integral uses the closed-form log-series antiderivative
const CX_CUT: f64 = 1e-3;

/// Closed form of int_0^x cx_integrand for x <= CX_CUT, from
/// log sin(t/2) = log(t/2) - t^2/24 - t^4/2880 + O(t^6).
fn cx_asym_integral<T: Scalar>(alpha: T, x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    let a = (cast::<T>(2.0) * alpha).ln(); // A = log(2 alpha)
    let lx = x.ln();
    let b = a - lx;
    let two = cast::<T>(2.0);
    // int (A - log t)^2
    let main = x * (b * b + two * b + two);
    // 2 int (A - log t) t^2/24 dt
    let x3 = x * x * x;
    let t2 = x3 * (b / cast(3.0) + cast(1.0 / 9.0)) / cast(12.0);
    // 2 int (A - log t) t^4/2880 dt + int (t^2/24)^2 dt
    let x5 = x3 * x * x;
    let t4 = x5 * (b / cast(5.0) + cast(1.0 / 25.0)) / cast(1440.0) + x5 / cast(2880.0);
    // int_0^x (pi - t)^2/4 dt = (pi^3 - (pi - x)^3)/12
    let pi = T::PI();
    let tail = (pi * pi * pi - (pi - x) * (pi - x) * (pi - x)) / cast(12.0);
    main + t2 + t4 + tail
}

/// int_a^b cx_integrand on 0 <= a <= b <= pi.
fn cx_left_integral<T: Scalar>(alpha: T, a: T, b: T) -> T {
    let cut = cast::<T>(CX_CUT);
    let f = |t: T| cx_integrand(alpha, t);
    if b <= cut {
        cx_asym_integral(alpha, b) - cx_asym_integral(alpha, a)
    } else if a < cut {
        cx_asym_integral(alpha, cut) - cx_asym_integral(alpha, a)
            + adaptive_gauss(&f, cut, b, cast(1e-13), 0)
    } else {
        adaptive_gauss(&f, a, b, cast(1e-13), 0)
    }
}

/// int_a^b cx_integrand on 0 <= a <= b <= 2 pi; the integrand is symmetric
/// about pi, so everything reduces to the left half.
pub(crate) fn cx_integral<T: Scalar>(alpha: T, a: T, b: T) -> T {
    let pi = T::PI();
    let tau = T::TAU();
    if b <= a {
        return T::zero();
    }
    if b <= pi {
        cx_left_integral(alpha, a, b)
    } else if a >= pi {
        cx_left_integral(alpha, tau - b, tau - a)
    } else {
        cx_left_integral(alpha, a, pi) + cx_left_integral(alpha, tau - b, pi)
    }
}

/// Normalization constant making phi_alpha(2 pi) = 2 pi.
pub fn counterexample_c_alpha<T: Scalar>(alpha: T) -> Result<T> {
    if alpha <= T::one() {
        return Err(Error::InvalidArgument("alpha must exceed 1".into()));
    }
    let total = cast::<T>(2.0) * cx_left_integral(alpha, T::zero(), T::PI());
    Ok(T::TAU() / total)
}

/// The counterexample map at grid size `n`, with its analytic derivative
/// data. The lift is built by cumulative quadrature; cells touching the
/// log^2 singularities at 0 and 2 pi use the series antiderivative.
pub fn build_counterexample<T: Scalar>(
    alpha: T,
    n: usize,
) -> Result<(CircleMap<T>, DerivativeData<T>)> {
    let c = counterexample_c_alpha(alpha)?;
    let step = T::TAU() / cast::<T>(n as f64);
    let mut lift = Vec::with_capacity(n);
    let mut acc = T::zero();
    lift.push(T::zero());
    for j in 0..n - 1 {
        let a = step * cast::<T>(j as f64);
        let b = step * cast::<T>((j + 1) as f64);
        acc = acc + cx_integral(alpha, a, b);
        lift.push(c * acc);
    }
    let map = CircleMap::from_lift(
        lift,
        MapFamily::Counterexample {
            alpha,
            c_alpha: c,
        },
    )?;
    let deriv = map.derivative();
    Ok((map, deriv))
}

#[derive(Clone, Debug)]
pub struct GIntegralReport<T> {
    /// Quadrature of the Dirichlet integral of g over |z-1| < 1 in the polar
    /// frame w = 1 - z.
    pub value: T,
    /// The bound 2 pi / log(2 alpha) it must stay below.
    pub bound: T,
}

/// Dirichlet energy of g(z) = log log (2 alpha / (1-z)) over |z-1| < 1.
/// In the w = 1 - z polar frame this is
/// int_L^inf 2 arctan(pi/x) / x dx with L = log(2 alpha).
pub fn counterexample_g_integral<T: Scalar>(alpha: T) -> Result<GIntegralReport<T>> {
    if alpha <= T::one() {
        return Err(Error::InvalidArgument("alpha must exceed 1".into()));
    }
    let l = (cast::<T>(2.0) * alpha).ln();
    let f = |x: T| cast::<T>(2.0) * (T::PI() / x).atan() / x;
    let x_max = cast::<T>(1e4).max(l * cast(100.0));
    let head = adaptive_gauss(&f, l, x_max, cast(1e-12), 0);
    // tail of 2 arctan(pi/x)/x: 2 pi/x^2 - 2 pi^3/(3 x^4) + ...
    let pi = T::PI();
    let tail = cast::<T>(2.0) * pi / x_max
        - cast::<T>(2.0) * pi * pi * pi / (cast::<T>(9.0) * x_max * x_max * x_max);
    Ok(GIntegralReport {
        value: head + tail,
        bound: T::TAU() / l,
    })
}

/// phi(theta) = theta - sin(theta): infinitely differentiable with a critical
/// point at theta = 0.
pub fn build_sine_flat<T: Scalar>(n: usize) -> Result<CircleMap<T>> {
    let step = T::TAU() / cast::<T>(n as f64);
    let lift = (0..n)
        .map(|j| {
            let t = step * cast::<T>(j as f64);
            t - t.sin()
        })
        .collect();
    CircleMap::from_lift(lift, MapFamily::SineFlat)
}

/// phi(theta) = theta + eps sin(theta) (|eps| < 1), built through the
/// boundary density e^u with u = log(1 + eps cos theta).
pub fn build_sine_perturb<T: Scalar>(eps: T, n: usize) -> Result<CircleMap<T>> {
    if eps.abs() >= T::one() {
        return Err(Error::InvalidArgument("need |eps| < 1 for a diffeomorphism".into()));
    }
    let u = GridFunction::from_real_fn(n, |t: T| (T::one() + eps * t.cos()).ln())?;
    crate::circle::from_boundary_density(&u, false)
}

#[derive(Clone, Debug)]
pub struct FlowField<T: Scalar> {
    /// Samples of F_alpha at the grid points e^{i theta_j}.
    pub field: GridFunction<T>,
    /// Max over samples of the non-tangential fraction of F.
    pub tangential_deviation: T,
    /// Sup change of F when the step is halved (central difference is O(da^2)).
    pub halving_delta: T,
    /// (F_da - F_da/2) / (F_da/2 - F_da/4) sup ratio; ~4 for a second-order stencil.
    pub richardson_ratio: T,
    /// H^{3/2} seminorm profile of the tangential component.
    pub h32_profile: DyadicProfile<T>,
}

/// Vector field F_alpha = (d/d alpha h_alpha) o h_alpha^{-1} by central
/// finite differences in alpha and composition with the inverse lift.
pub fn flow_field<T: Scalar>(alpha: T, d_alpha: T, n: usize) -> Result<FlowField<T>> {
    if alpha <= T::one() {
        return Err(Error::InvalidArgument("alpha must exceed 1".into()));
    }
    if d_alpha <= T::zero() || d_alpha > (alpha - T::one()) * cast(0.25) {
        return Err(Error::InvalidArgument(
            "need 0 < d_alpha << alpha - 1".into(),
        ));
    }
    let (h0, _) = build_counterexample(alpha, n)?;
    let step = T::TAU() / cast::<T>(n as f64);
    let pre_images: Vec<T> = (0..n)
        .map(|j| h0.inverse_lift_value(step * cast::<T>(j as f64)))
        .collect();

    let field_at = |da: T| -> Result<Vec<Complex<T>>> {
        let (hp, _) = build_counterexample(alpha + da, n)?;
        let (hm, _) = build_counterexample(alpha - da, n)?;
        let two_da = cast::<T>(2.0) * da;
        Ok(pre_images
            .iter()
            .map(|&x| {
                let zp = Complex::from_polar(T::one(), hp.eval_lift(x));
                let zm = Complex::from_polar(T::one(), hm.eval_lift(x));
                (zp - zm).scale(T::one() / two_da)
            })
            .collect())
    };

    let f1 = field_at(d_alpha)?;
    let f2 = field_at(d_alpha * cast(0.5))?;
    let f4 = field_at(d_alpha * cast(0.25))?;
    let sup_diff = |a: &[Complex<T>], b: &[Complex<T>]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (*x - *y).norm())
            .fold(T::zero(), T::max)
    };
    let d12 = sup_diff(&f1, &f2);
    let d24 = sup_diff(&f2, &f4);
    if d24 > T::zero() && d12 / d24 < cast(2.0) {
        return Err(Error::StepSize(format!(
            "halving d_alpha shrinks the change by only {}",
            as_f64(d12 / d24)
        )));
    }
    let ratio = if d24 > T::zero() { d12 / d24 } else { cast(4.0) };

    let mut tangential_dev = T::zero();
    let mut tangential = Vec::with_capacity(n);
    for (j, f) in f2.iter().enumerate() {
        let e = Complex::from_polar(T::one(), step * cast::<T>(j as f64));
        let t_dir = Complex::new(-e.im, e.re); // i e^{i theta}
        let comp = (t_dir.conj() * *f).re;
        tangential.push(comp);
        let norm = f.norm();
        if norm > cast(1e-12) {
            let dev = (norm * norm - comp * comp).max(T::zero()).sqrt() / norm;
            tangential_dev = tangential_dev.max(dev);
        }
    }
    let tf = GridFunction::from_real(&tangential)?;
    let coeffs = fourier_coefficients(&tf, n / 8)?;
    let h32_profile = sobolev_profile(&coeffs, cast(1.5));

    Ok(FlowField {
        field: GridFunction::new(f2)?,
        tangential_deviation: tangential_dev,
        halving_delta: d12,
        richardson_ratio: ratio,
        h32_profile,
    })
}

/// A normalized welding triple h = f^{-1} o g built from a Mobius disk
/// automorphism: f(z) = z / (1 - z/p) with p = h(inf), g = f o h affine.
#[derive(Clone, Debug)]
pub struct WeldingTriple<T: Scalar> {
    pub h: CircleMap<T>,
    pub f_log_fp: PowerSeries<T>,
    pub g_log_gp: PowerSeries<T>,
    /// h(inf) = -e^{i beta} / conj(a); infinity encoded as None for a = 0.
    pub pole: Option<Complex<T>>,
}

pub fn mobius_welding_triple<T: Scalar>(
    a: Complex<T>,
    beta: T,
    n: usize,
    k_trunc: usize,
) -> Result<WeldingTriple<T>> {
    if a.norm() >= T::one() {
        return Err(Error::InvalidArgument("need |a| < 1".into()));
    }
    let zero = Complex::new(T::zero(), T::zero());
    if a.norm() < cast(1e-15) {
        // rotation: f = id, g = rotation
        let h = CircleMap::rotation(beta, n)?;
        let f_log_fp = PowerSeries::zero(SeriesDomain::Disk, k_trunc);
        let mut g = vec![zero; k_trunc + 1];
        g[0] = Complex::new(T::zero(), beta);
        let g_log_gp = PowerSeries::exterior(g)?;
        return Ok(WeldingTriple {
            h,
            f_log_fp,
            g_log_gp,
            pole: None,
        });
    }
    let h = CircleMap::mobius(a, beta, n)?;
    let pole = -Complex::from_polar(T::one(), beta) / a.conj();
    // log f' = -2 log(1 - z/p): coefficients 2 / (m p^m)
    let mut fc = vec![zero; k_trunc + 1];
    let inv_p = pole.inv();
    let mut pw = inv_p;
    for m in 1..=k_trunc {
        fc[m] = pw.scale(cast::<T>(2.0) / cast::<T>(m as f64));
        pw = pw * inv_p;
    }
    let f_log_fp = PowerSeries::disk(fc)?;
    // g = f o h is affine, so log g' is the constant pinned by the welding
    // identity at theta = 0
    let d = h.derivative();
    let phi0 = h.lift()[0];
    let log_hp0 = Complex::new(d.log_phi_prime.values()[0].re, phi0);
    let z0 = Complex::from_polar(T::one(), phi0); // h(e^{i 0})
    let const_g = log_hp0 + f_log_fp.evaluate(z0);
    let mut g = vec![zero; k_trunc + 1];
    g[0] = const_g;
    let g_log_gp = PowerSeries::exterior(g)?;
    Ok(WeldingTriple {
        h,
        f_log_fp,
        g_log_gp,
        pole: Some(pole),
    })
}
