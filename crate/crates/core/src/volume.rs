//! Lobachevsky function, complete-orthoscheme volumes, ball volumes and
//! packing/covering densities.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::SchlafliTriple;
use crate::orthoscheme::{circumradius_of, inradius_of, realize};
use crate::scalar::Real;

/// Radicand tolerance for the volume angle `θ`.
pub const RADICAND_EPS: f64 = 1e-14;

const SERIES_TERMS: usize = 40;

/// `ζ(2k) / (k (2k+1))` for `k = 1..=SERIES_TERMS`.
fn series_coefficients() -> &'static [f64; SERIES_TERMS] {
    static COEFFS: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let pi = std::f64::consts::PI;
        std::array::from_fn(|i| {
            let k = (i + 1) as i32;
            let s = 2 * k;
            let zeta = if k == 1 { pi * pi / 6.0 } else { zeta_even(s) };
            zeta / (k as f64 * (s + 1) as f64)
        })
    })
}

/// `ζ(s)` for even `s ≥ 4`: direct sum with an Euler–Maclaurin tail.
fn zeta_even(s: i32) -> f64 {
    const N: usize = 1000;
    let mut sum = 0.0;
    for n in (1..=N).rev() {
        sum += (n as f64).powi(-s);
    }
    let tail = (N as f64 + 0.5).powi(1 - s) / (s - 1) as f64;
    sum + tail
}

/// `Л(x) = −∫₀ˣ log|2 sin t| dt`.
///
/// Reduced to `[−π/2, π/2]` by periodicity, then summed from the power
/// series `x − x log 2|x| + Σ ζ(2k) x^{2k+1} / (k (2k+1) π^{2k})`.
pub fn lobachevsky<T: Real>(x: T) -> T {
    let pi = T::PI();
    let r = x - pi * (x / pi).round();
    if r == T::zero() {
        return T::zero();
    }
    let sign = r.signum();
    let y = r.abs();
    let ratio = y / pi;
    let ratio2 = ratio * ratio;
    let mut pow = y * ratio2;
    let mut tail = T::zero();
    for c in series_coefficients() {
        tail = tail + T::lit(*c) * pow;
        pow = pow * ratio2;
    }
    sign * (y - y * (T::two() * y).ln() + tail)
}

/// `θ ∈ [0, π/2)` with `tan θ = √(cos²α12 − sin²α01 sin²α23) / (cos α01 cos α23)`.
pub fn volume_angle<T: Real>(symbol: SchlafliTriple) -> Result<T> {
    let [a01, a12, a23] = symbol.angles::<T>();
    let radicand = a12.cos().powi(2) - a01.sin().powi(2) * a23.sin().powi(2);
    if radicand < -T::lit(RADICAND_EPS) {
        return Err(Error::InvalidAngles(radicand.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(radicand.max(T::zero()).sqrt().atan2(a01.cos() * a23.cos()))
}

/// Volume of the complete orthoscheme `W_uvw`.
pub fn kellerhals_volume<T: Real>(symbol: SchlafliTriple) -> Result<T> {
    let theta = volume_angle::<T>(symbol)?;
    let [a01, a12, a23] = symbol.angles::<T>();
    let l = lobachevsky::<T>;
    let half_pi = T::FRAC_PI_2();
    let bracket = l(a01 + theta) - l(a01 - theta)
        + l(half_pi + a12 - theta)
        + l(half_pi - a12 - theta)
        + l(a23 + theta)
        - l(a23 - theta)
        + T::two() * l(half_pi - theta);
    Ok(bracket / T::lit(4.0))
}

/// Volume of the cobweb manifold `Cw(2p,2p,2p)`, `4p · Vol(W)`.
pub fn manifold_volume<T: Real>(symbol: SchlafliTriple) -> Result<T> {
    let p = symbol.cobweb_p()?;
    Ok(T::from_u32(4 * p).unwrap() * kellerhals_volume::<T>(symbol)?)
}

/// Volume of a hyperbolic ball of radius `r`, `π (sinh 2r − 2r)`.
pub fn ball_volume<T: Real>(r: T) -> T {
    let two_r = T::two() * r;
    if two_r.abs() < T::lit(1e-3) {
        // Taylor form avoids cancellation: sinh t − t = t³/6 + t⁵/120 + t⁷/5040.
        let t2 = two_r * two_r;
        let t3 = t2 * two_r;
        return T::PI() * t3 * (T::one() / T::lit(6.0) + t2 / T::lit(120.0) + t2 * t2 / T::lit(5040.0));
    }
    T::PI() * (two_r.sinh() - two_r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeReport {
    pub symbol: SchlafliTriple,
    pub theta: f64,
    pub orthoscheme_volume: f64,
    pub manifold_volume: f64,
    pub inradius: f64,
    pub circumradius: f64,
    pub inball_volume: f64,
    pub coverball_volume: f64,
    pub packing_density: f64,
    pub covering_density: f64,
}

/// Volumes and packing/covering densities of the cobweb manifold.
pub fn densities(symbol: SchlafliTriple) -> Result<VolumeReport> {
    let p = symbol.cobweb_p()?;
    let t = realize::<f64>(symbol)?;
    let r = inradius_of(&t)?.value;
    let big_r = circumradius_of(&t)?.value;
    let theta = volume_angle::<f64>(symbol)?;
    let orthoscheme_volume = kellerhals_volume::<f64>(symbol)?;
    let manifold_volume = 4.0 * p as f64 * orthoscheme_volume;
    let inball_volume = ball_volume(r);
    let coverball_volume = ball_volume(big_r);
    Ok(VolumeReport {
        symbol,
        theta,
        orthoscheme_volume,
        manifold_volume,
        inradius: r,
        circumradius: big_r,
        inball_volume,
        coverball_volume,
        packing_density: inball_volume / manifold_volume,
        covering_density: coverball_volume / manifold_volume,
    })
}
