//! Complex-argument Bessel and Hankel functions of orders 0 and 1.
//!
//! Three evaluation regimes, chosen by |z|:
//!
//! * |z| <= [`SERIES_RADIUS`]: ascending power series (with the logarithmic
//!   series for Y).
//! * [`SERIES_RADIUS`] < |z| <= [`ASYMPTOTIC_RADIUS`]: Miller backward
//!   recurrence for J_n, normalized with the generating function
//!   e^{∓iz} = Σ (±i)^n J_n(z), and Neumann series for Y_0 and Y_1.
//! * |z| > [`ASYMPTOTIC_RADIUS`]: Hankel's asymptotic expansion truncated at
//!   the smallest term.
//!
//! H^{(1)} with Im z >= [`STEED_MIN_IMAG`] and [`STEED_RADIUS`] <= |z| <=
//! [`ASYMPTOTIC_RADIUS`] is taken from a continued fraction instead of J + iY,
//! which would cancel where H^{(1)} decays.
//!
//! The accepted domain is |z| <= 200, Im z >= -10. Outside it every entry
//! point returns [`Error::Domain`]; no function returns NaN.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const SERIES_RADIUS: f64 = 4.0;
pub const ASYMPTOTIC_RADIUS: f64 = 17.0;
/// Lower radius of the continued-fraction regime for H^{(1)} in the upper half plane.
pub const STEED_RADIUS: f64 = 2.0;
/// Below this imaginary part J + iY loses at most a factor e² and is cheaper.
pub const STEED_MIN_IMAG: f64 = 1.0;
pub const MAX_MODULUS: f64 = 200.0;
pub const MIN_IMAG: f64 = -10.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_SERIES_TERMS: usize = 80;
const MILLER_CAPACITY: usize = 80;
const MAX_STEED_TERMS: usize = 400;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Order of a cylinder function. Only orders 0 and 1 are needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Zero,
    One,
}

impl TryFrom<u32> for Order {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        match n {
            0 => Ok(Order::Zero),
            1 => Ok(Order::One),
            _ => Err(Error::InvalidArgument(format!("unsupported order {n}"))),
        }
    }
}

/// J_0, J_1, Y_0, Y_1 at a common argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cylinder {
    pub j0: Complex64,
    pub j1: Complex64,
    pub y0: Complex64,
    pub y1: Complex64,
}

fn check_domain(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() || z.norm() > MAX_MODULUS || z.im < MIN_IMAG {
        return Err(Error::Domain { z });
    }
    Ok(())
}

fn check_finite(z: Complex64, values: &[Complex64]) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Overflow { z })
    }
}

/// J_0(z) and J_1(z).
pub fn bessel_j01(z: Complex64) -> Result<(Complex64, Complex64)> {
    check_domain(z)?;
    let r = z.norm();
    let (j0, j1) = if r <= SERIES_RADIUS {
        series_j(z)
    } else if r <= ASYMPTOTIC_RADIUS {
        let m = miller(z);
        (m.j0, m.j1)
    } else {
        let a = asymptotic(z);
        (a.j0(), a.j1())
    };
    check_finite(z, &[j0, j1])?;
    Ok((j0, j1))
}

/// J_0, J_1, Y_0, Y_1 at z. Fails at z = 0.
pub fn cylinder(z: Complex64) -> Result<Cylinder> {
    check_domain(z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularArgument);
    }
    let r = z.norm();
    let c = if r <= SERIES_RADIUS {
        series_cylinder(z)
    } else if r <= ASYMPTOTIC_RADIUS {
        miller(z)
    } else {
        let a = asymptotic(z);
        Cylinder { j0: a.j0(), j1: a.j1(), y0: a.y0(), y1: a.y1() }
    };
    check_finite(z, &[c.j0, c.j1, c.y0, c.y1])?;
    Ok(c)
}

/// H_0^{(1)}(z) and H_1^{(1)}(z).
///
/// For Im z ≥ [`STEED_MIN_IMAG`] and [`STEED_RADIUS`] ≤ |z| ≤
/// [`ASYMPTOTIC_RADIUS`] the Hankel functions come from the Steed/Temme
/// continued fraction for K_n(-iz); beyond that the outgoing expansion is
/// summed directly. Both resolve the exponential decay for Im z > 0 without
/// the cancellation of J + iY, which is used everywhere else.
pub fn hankel1_01(z: Complex64) -> Result<(Complex64, Complex64)> {
    check_domain(z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularArgument);
    }
    let r = z.norm();
    let (h0, h1) = if r <= ASYMPTOTIC_RADIUS {
        if r >= STEED_RADIUS && z.im >= STEED_MIN_IMAG {
            steed(z)
        } else {
            let c = if r <= SERIES_RADIUS { series_cylinder(z) } else { miller(z) };
            (c.j0 + I * c.y0, c.j1 + I * c.y1)
        }
    } else {
        let a = asymptotic(z);
        (a.h1_0, a.h1_1)
    };
    check_finite(z, &[h0, h1])?;
    Ok((h0, h1))
}

pub fn bessel_j(order: Order, z: Complex64) -> Result<Complex64> {
    let (j0, j1) = bessel_j01(z)?;
    Ok(match order {
        Order::Zero => j0,
        Order::One => j1,
    })
}

pub fn bessel_y(order: Order, z: Complex64) -> Result<Complex64> {
    let c = cylinder(z)?;
    Ok(match order {
        Order::Zero => c.y0,
        Order::One => c.y1,
    })
}

pub fn hankel1(order: Order, z: Complex64) -> Result<Complex64> {
    let (h0, h1) = hankel1_01(z)?;
    Ok(match order {
        Order::Zero => h0,
        Order::One => h1,
    })
}

/// Derivative of H_n^{(1)}: H_0' = -H_1 and H_1' = H_0 - H_1/z.
pub fn hankel1_prime(order: Order, z: Complex64) -> Result<Complex64> {
    let (h0, h1) = hankel1_01(z)?;
    Ok(match order {
        Order::Zero => -h1,
        Order::One => h0 - h1 / z,
    })
}

/// Derivative of J_n: J_0' = -J_1 and J_1' = J_0 - J_1/z (J_1'(0) = 1/2).
pub fn bessel_j_prime(order: Order, z: Complex64) -> Result<Complex64> {
    let (j0, j1) = bessel_j01(z)?;
    Ok(match order {
        Order::Zero => -j1,
        Order::One if z == Complex64::new(0.0, 0.0) => Complex64::new(0.5, 0.0),
        Order::One => j0 - j1 / z,
    })
}

fn series_j(z: Complex64) -> (Complex64, Complex64) {
    let mq = -(z * z) * 0.25;
    let mut t0 = Complex64::new(1.0, 0.0);
    let mut t1 = Complex64::new(1.0, 0.0);
    let (mut s0, mut s1) = (t0, t1);
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        t0 *= mq / (kf * kf);
        t1 *= mq / (kf * (kf + 1.0));
        s0 += t0;
        s1 += t1;
        if t0.norm() <= 1e-17 * s0.norm() && t1.norm() <= 1e-17 * s1.norm() {
            break;
        }
    }
    (s0, s1 * z * 0.5)
}

fn series_cylinder(z: Complex64) -> Cylinder {
    let half = z * 0.5;
    let mq = -(half * half);
    // t0 = (-q)^k/(k!)^2, t1 = (-q)^k/(k!(k+1)!)
    let mut t0 = Complex64::new(1.0, 0.0);
    let mut t1 = Complex64::new(1.0, 0.0);
    let mut harmonic = 0.0;
    let mut j0 = t0;
    let mut j1 = t1;
    let mut y0_tail = Complex64::new(0.0, 0.0);
    // psi(1) + psi(2) = -2γ + 1
    let mut y1_tail = t1 * (1.0 - 2.0 * EULER_GAMMA);
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        t0 *= mq / (kf * kf);
        t1 *= mq / (kf * (kf + 1.0));
        let h_next = harmonic + 1.0 / kf;
        let h_next2 = h_next + 1.0 / (kf + 1.0);
        j0 += t0;
        j1 += t1;
        y0_tail += t0 * h_next;
        y1_tail += t1 * (h_next + h_next2 - 2.0 * EULER_GAMMA);
        harmonic = h_next;
        if t0.norm() * (1.0 + h_next2) <= 1e-17 * j0.norm()
            && t1.norm() * (1.0 + h_next2) <= 1e-17 * j1.norm()
        {
            break;
        }
    }
    let j1 = j1 * half;
    let log_half = half.ln();
    let y0 = (j0 * (log_half + EULER_GAMMA) - y0_tail) * (2.0 / PI);
    let y1 = -(2.0 / PI) / z + j1 * log_half * (2.0 / PI) - half * y1_tail / PI;
    Cylinder { j0, j1, y0, y1 }
}

fn miller(z: Complex64) -> Cylinder {
    let r = z.norm();
    let start = (((1.2 * r + 40.0) / 2.0).ceil() as usize) * 2;
    debug_assert!(start + 2 <= MILLER_CAPACITY);
    let mut j = [Complex64::new(0.0, 0.0); MILLER_CAPACITY];
    j[start] = Complex64::new(1e-30, 0.0);
    let two_over_z = 2.0 / z;
    for n in (1..=start).rev() {
        j[n - 1] = two_over_z * (n as f64) * j[n] - j[n + 1];
    }
    // e^{-iz} = J_0 + 2 Σ (-i)^n J_n for Im z >= 0; conjugate rotation otherwise
    let upper = z.im >= 0.0;
    let rot = |n: usize| -> Complex64 {
        let p = match n % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        if upper {
            p
        } else {
            p.conj()
        }
    };
    let mut norm_sum = j[0];
    for (n, jn) in j.iter().enumerate().take(start + 1).skip(1) {
        norm_sum += rot(n) * jn * 2.0;
    }
    let target = if upper { (-I * z).exp() } else { (I * z).exp() };
    let scale = target / norm_sum;

    let mut neumann0 = Complex64::new(0.0, 0.0);
    let mut neumann1 = Complex64::new(0.0, 0.0);
    let mut k = 1;
    while 2 * k < start {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        neumann0 += j[2 * k] * (sign / k as f64);
        neumann1 += (j[2 * k - 1] - j[2 * k + 1]) * (sign / k as f64);
        k += 1;
    }
    let j0 = j[0] * scale;
    let j1 = j[1] * scale;
    let log_term = (z * 0.5).ln() + EULER_GAMMA;
    let y0 = (j0 * log_term - neumann0 * scale * 2.0) * (2.0 / PI);
    let y1 = (j1 * log_term - j0 / z + neumann1 * scale) * (2.0 / PI);
    Cylinder { j0, j1, y0, y1 }
}

/// H_0^{(1)}, H_1^{(1)} via H_n(z) = (2/(πi)) (-i)^n K_n(-iz), with K_0, K_1
/// from Steed's evaluation of Temme's continued fraction. Needs Re(-iz) ≥ 0.
fn steed(z: Complex64) -> (Complex64, Complex64) {
    let x = -I * z;
    let one = Complex64::new(1.0, 0.0);
    let a1 = 0.25;
    let mut b = (one + x) * 2.0;
    let mut d = one / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let mut q = Complex64::new(a1, 0.0);
    let mut c = q;
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..MAX_STEED_TERMS {
        a -= 2.0 * (i - 1) as f64;
        c = -c * a / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = one / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < 1e-17 * s.norm() {
            break;
        }
    }
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - a1 * h) / x;
    let pref = -2.0 * I / PI;
    (pref * k0, -pref * I * k1)
}

struct Asymptotic {
    h1_0: Complex64,
    h1_1: Complex64,
    h2_0: Complex64,
    h2_1: Complex64,
}

impl Asymptotic {
    fn j0(&self) -> Complex64 {
        (self.h1_0 + self.h2_0) * 0.5
    }
    fn j1(&self) -> Complex64 {
        (self.h1_1 + self.h2_1) * 0.5
    }
    fn y0(&self) -> Complex64 {
        (self.h1_0 - self.h2_0) / (2.0 * I)
    }
    fn y1(&self) -> Complex64 {
        (self.h1_1 - self.h2_1) / (2.0 * I)
    }
}

/// Σ_k (s/z)^k a_k(ν) truncated at the smallest term, for s = ±i.
fn hankel_tail(nu: f64, z: Complex64, s: Complex64) -> Complex64 {
    let mu4 = 4.0 * nu * nu;
    let w = s / z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..MAX_SERIES_TERMS {
        let odd = (2 * k - 1) as f64;
        let next = term * w * ((mu4 - odd * odd) / (8.0 * k as f64));
        let size = next.norm();
        if size >= last || size == 0.0 {
            break;
        }
        sum += next;
        term = next;
        last = size;
        if size <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Hankel expansions are only used for Re z >= 0; the left half plane is
/// reached by analytic continuation from w = -z.
fn asymptotic(z: Complex64) -> Asymptotic {
    if z.re >= 0.0 {
        return principal_asymptotic(z);
    }
    let a = principal_asymptotic(-z);
    if z.im >= 0.0 {
        // z = w e^{iπ}
        Asymptotic {
            h1_0: -a.h2_0,
            h1_1: a.h2_1,
            h2_0: a.h1_0 + a.h2_0 * 2.0,
            h2_1: -(a.h1_1 + a.h2_1 * 2.0),
        }
    } else {
        // z = w e^{-iπ}
        Asymptotic {
            h1_0: a.h1_0 * 2.0 + a.h2_0,
            h1_1: -(a.h1_1 * 2.0 + a.h2_1),
            h2_0: -a.h1_0,
            h2_1: a.h1_1,
        }
    }
}

fn principal_asymptotic(z: Complex64) -> Asymptotic {
    let pre = (2.0 / (PI * z)).sqrt();
    let chi0 = z - FRAC_PI_4;
    let chi1 = z - FRAC_PI_2 - FRAC_PI_4;
    let out0 = (I * chi0).exp();
    let out1 = (I * chi1).exp();
    let in0 = (-I * chi0).exp();
    let in1 = (-I * chi1).exp();
    Asymptotic {
        h1_0: pre * out0 * hankel_tail(0.0, z, I),
        h1_1: pre * out1 * hankel_tail(1.0, z, I),
        h2_0: pre * in0 * hankel_tail(0.0, z, -I),
        h2_1: pre * in1 * hankel_tail(1.0, z, -I),
    }
}
