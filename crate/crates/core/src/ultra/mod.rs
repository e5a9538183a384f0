//! Point-supported ultradistributions, their Fourier transform, and the star
//! product computed through Fourier atoms.
//!
//! A phase-space symbol is written `a(q,p) = ∫ e^{u(q·p₁ + p·q₁)} ã(dp₁dq₁)`.
//! Composition of operators twists the product of the two atom lists by
//! `e^{u h q₁ p₂}` before transforming back.

mod distribution;
mod exppoly;
mod json;

pub use distribution::{inverse_fourier_symbol, AtomKey, Ultradistribution};
pub use exppoly::{CharSum, ExpKey, ExpPoly};
pub use json::{AtomJson, ExpPolyJson, ExpTermJson, UltraJson, WeightJson};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalars::{Binarion, Rational};

/// Star product of two phase-space symbols (dimension `2k`, variables
/// `q₁..q_k, p₁..p_k`) at a fixed rational `h`.
pub fn star_distributional(a: &ExpPoly, b: &ExpPoly, h: &Rational) -> Result<ExpPoly> {
    a.ensure_compatible(b)?;
    if !a.dim().is_multiple_of(2) || a.dim() == 0 {
        return Err(Error::InvalidArgument(format!(
            "phase-space symbols need an even positive dimension, got {}",
            a.dim()
        )));
    }
    let k = a.dim() / 2;
    let sigma = a.sigma();
    let u = Binarion::unit(sigma);
    let da = inverse_fourier_symbol(a);
    let db = inverse_fourier_symbol(b);
    let mut out = ExpPoly::zero(2 * k, sigma);
    for (k1, w1) in da.atoms() {
        for (k2, w2) in db.atoms() {
            let total: u32 = k1.order.iter().chain(&k2.order).sum();
            let mut w = w1 * w2;
            if total % 2 == 1 {
                w = -w;
            }
            let mut term =
                ExpPoly::phase_constant(2 * k, &k1.phase + &k2.phase, sigma).scale(&w)?;
            for i in 0..k {
                let factor = twisted_factor(
                    TwistInput {
                        p1: &k1.loc[i],
                        q1: &k1.loc[k + i],
                        n1: k1.order[i],
                        m1: k1.order[k + i],
                        p2: &k2.loc[i],
                        q2: &k2.loc[k + i],
                        n2: k2.order[i],
                        m2: k2.order[k + i],
                    },
                    h,
                    &u,
                )?;
                term = term.mul(&factor.embed(2 * k, &[i, k + i])?)?;
            }
            out = out.add(&term)?;
        }
    }
    Ok(out)
}

struct TwistInput<'a> {
    p1: &'a Rational,
    q1: &'a Rational,
    n1: u32,
    m1: u32,
    p2: &'a Rational,
    q2: &'a Rational,
    n2: u32,
    m2: u32,
}

/// One degree of freedom of the twisted pairing, as a function of `(q, p)`:
///
/// `∂_{p₁}^{n₁} ∂_{q₁}^{m₁} ∂_{p₂}^{n₂} ∂_{q₂}^{m₂}
///  e^{u(q(p₁+p₂) + p(q₁+q₂) + h q₁ p₂)}` at the atom locations.
fn twisted_factor(t: TwistInput<'_>, h: &Rational, u: &Binarion) -> Result<ExpPoly> {
    let sigma = u.sigma();
    // Variables: q, p, s = q₁, t = p₂.
    let var = |i| ExpPoly::variable(4, i, sigma);
    let hr = Binarion::real(h.clone(), sigma);
    let dt_mult = var(0)?.add(&var(2)?.scale(&hr)?)?.scale(u)?;
    let ds_mult = var(1)?.add(&var(3)?.scale(&hr)?)?.scale(u)?;
    let mut poly = ExpPoly::one(4, sigma);
    for _ in 0..t.n2 {
        poly = poly.derivative(3)?.add(&poly.mul(&dt_mult)?)?;
    }
    for _ in 0..t.m1 {
        poly = poly.derivative(2)?.add(&poly.mul(&ds_mult)?)?;
    }
    let poly = poly
        .substitute(2, t.q1)?
        .substitute(3, t.p2)?
        .truncate_dim(2)?;
    let twist = ExpPoly::term(
        2,
        ExpKey {
            freq: vec![t.p2.clone(), t.q1.clone()],
            phase: h * t.q1 * t.p2,
            exps: vec![0, 0],
        },
        Binarion::one(sigma),
    )?;
    let left = ExpPoly::term(
        2,
        ExpKey {
            freq: vec![t.p1.clone(), Rational::zero()],
            phase: Rational::zero(),
            exps: vec![t.n1, 0],
        },
        u.pow(t.n1),
    )?;
    let right = ExpPoly::term(
        2,
        ExpKey {
            freq: vec![Rational::zero(), t.q2.clone()],
            phase: Rational::zero(),
            exps: vec![0, t.m2],
        },
        u.pow(t.m2),
    )?;
    poly.mul(&twist)?.mul(&left)?.mul(&right)
}

/// Growth constants `(C, R)` with `‖f^{(n)}(0)‖ ≤ C Rⁿ` for `n = 0..N`,
/// measured in the positive norm. `C = ‖f(0)‖` (or 1 when that vanishes) and
/// `R` is the smallest rate that covers every order up to `N`.
pub fn paley_wiener_growth(f: &ExpPoly, n: u32) -> Result<(f64, f64)> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: f.dim(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".to_string()));
    }
    let origin = [Rational::zero()];
    let mut norms = Vec::with_capacity(n as usize + 1);
    let mut d = f.clone();
    for _ in 0..=n {
        norms.push(d.evaluate(&origin)?.approx().pos_norm());
        d = d.derivative(0)?;
    }
    let c = if norms[0] > 0.0 { norms[0] } else { 1.0 };
    let r = norms[1..]
        .iter()
        .enumerate()
        .map(|(i, a)| (a / c).powf(1.0 / (i as f64 + 1.0)))
        .fold(0.0, f64::max);
    Ok((c, r))
}

#[cfg(test)]
mod tests;
