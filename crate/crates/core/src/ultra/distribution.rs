use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::exppoly::{CharSum, ExpKey, ExpPoly};
use crate::error::{Error, Result};
use crate::scalars::{Binarion, Rational, Sigma};
use crate::symbols::text::render_coeff;

/// Support point, derivative order and formal phase of one atom
/// `e^{uφ} · δ^{(order)}` at `loc`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomKey {
    pub loc: Vec<Rational>,
    pub order: Vec<u32>,
    pub phase: Rational,
}

impl AtomKey {
    pub fn at(loc: Vec<Rational>, order: Vec<u32>) -> Self {
        AtomKey {
            loc,
            order,
            phase: Rational::zero(),
        }
    }
}

/// Finite combination of derivatives of point masses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ultradistribution {
    dim: usize,
    sigma: Sigma,
    atoms: BTreeMap<AtomKey, Binarion>,
}

impl Ultradistribution {
    pub fn zero(dim: usize, sigma: Sigma) -> Self {
        Ultradistribution {
            dim,
            sigma,
            atoms: BTreeMap::new(),
        }
    }

    pub fn atom(dim: usize, key: AtomKey, weight: Binarion) -> Result<Self> {
        if key.loc.len() != dim || key.order.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: key.loc.len().max(key.order.len()),
            });
        }
        let mut out = Ultradistribution::zero(dim, weight.sigma());
        out.add_atom(key, weight);
        Ok(out)
    }

    /// `δ^{(order)}` at `loc` with unit weight.
    pub fn delta(loc: Vec<Rational>, order: Vec<u32>, sigma: Sigma) -> Result<Self> {
        let dim = loc.len();
        Ultradistribution::atom(dim, AtomKey::at(loc, order), Binarion::one(sigma))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&AtomKey, &Binarion)> {
        self.atoms.iter()
    }

    pub(crate) fn add_atom(&mut self, key: AtomKey, w: Binarion) {
        if w.is_zero() {
            return;
        }
        match self.atoms.get_mut(&key) {
            Some(x) => {
                *x = &*x + &w;
                if x.is_zero() {
                    self.atoms.remove(&key);
                }
            }
            None => {
                self.atoms.insert(key, w);
            }
        }
    }

    pub fn ensure_compatible(&self, other: &Ultradistribution) -> Result<()> {
        self.sigma.ensure(other.sigma)?;
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Ultradistribution) -> Result<Ultradistribution> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        for (k, w) in &other.atoms {
            out.add_atom(k.clone(), w.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Binarion) -> Result<Ultradistribution> {
        self.sigma.ensure(c.sigma())?;
        let mut out = Ultradistribution::zero(self.dim, self.sigma);
        for (k, w) in &self.atoms {
            out.add_atom(k.clone(), w * c);
        }
        Ok(out)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dof: self.dim,
            });
        }
        Ok(())
    }

    /// `∂/∂x_i`, defined by `(∂λ, f) = −(λ, ∂f)`.
    pub fn derivative(&self, i: usize) -> Result<Ultradistribution> {
        self.check_index(i)?;
        let mut out = Ultradistribution::zero(self.dim, self.sigma);
        for (k, w) in &self.atoms {
            let mut key = k.clone();
            key.order[i] += 1;
            out.add_atom(key, w.clone());
        }
        Ok(out)
    }

    /// `x_i · λ`, using `x δ^{(n)}_{x₀} = x₀ δ^{(n)}_{x₀} − n δ^{(n−1)}_{x₀}`.
    pub fn mul_coordinate(&self, i: usize) -> Result<Ultradistribution> {
        self.check_index(i)?;
        let mut out = Ultradistribution::zero(self.dim, self.sigma);
        for (k, w) in &self.atoms {
            out.add_atom(k.clone(), w.scale(&k.loc[i]));
            if k.order[i] > 0 {
                let mut key = k.clone();
                key.order[i] -= 1;
                let n = Rational::from_integer(BigInt::from(k.order[i]));
                out.add_atom(key, (-w).scale(&n));
            }
        }
        Ok(out)
    }

    /// `x^n · λ` for a multi-index `n`.
    pub fn mul_monomial(&self, exps: &[u32]) -> Result<Ultradistribution> {
        if exps.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: exps.len(),
            });
        }
        let mut out = self.clone();
        for (i, n) in exps.iter().enumerate() {
            for _ in 0..*n {
                out = out.mul_coordinate(i)?;
            }
        }
        Ok(out)
    }

    /// `(λ, f) = Σ w e^{uφ} (−1)^{|n|} ∂^n f(x₀)`.
    pub fn pair(&self, f: &ExpPoly) -> Result<CharSum> {
        self.sigma.ensure(f.sigma())?;
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.dim(),
            });
        }
        let mut out = CharSum::zero(self.sigma);
        for (k, w) in &self.atoms {
            let d = f.derivative_multi(&k.order)?;
            let mut v = d.evaluate(&k.loc)?;
            let n: u32 = k.order.iter().sum();
            let w = if n % 2 == 1 { -w } else { w.clone() };
            v = v.mul(&CharSum::term(k.phase.clone(), w));
            out = out.add(&v);
        }
        Ok(out)
    }

    /// `F(λ)(y) = (λ, e^{u⟨y,x⟩})` in closed form: each atom contributes
    /// `w e^{uφ} (−u y)^n e^{u⟨y,x₀⟩}`.
    pub fn fourier(&self) -> ExpPoly {
        let neg_u = -Binarion::unit(self.sigma);
        let mut out = ExpPoly::zero(self.dim, self.sigma);
        for (k, w) in &self.atoms {
            let n: u32 = k.order.iter().sum();
            let key = ExpKey {
                freq: k.loc.clone(),
                phase: k.phase.clone(),
                exps: k.order.clone(),
            };
            out.add_term(key, w * &neg_u.pow(n));
        }
        out
    }

    /// Product measure on the concatenated space.
    pub fn tensor(&self, other: &Ultradistribution) -> Result<Ultradistribution> {
        self.sigma.ensure(other.sigma)?;
        let mut out = Ultradistribution::zero(self.dim + other.dim, self.sigma);
        for (k1, w1) in &self.atoms {
            for (k2, w2) in &other.atoms {
                let key = AtomKey {
                    loc: k1.loc.iter().chain(&k2.loc).cloned().collect(),
                    order: k1.order.iter().chain(&k2.order).copied().collect(),
                    phase: &k1.phase + &k2.phase,
                };
                out.add_atom(key, w1 * w2);
            }
        }
        Ok(out)
    }
}

/// Inverts [`Ultradistribution::fourier`] on exponential polynomials:
/// `c y^n e^{u(⟨r,y⟩+φ)}` comes from the atom at `r` of order `n` with weight
/// `c (−σu)^{|n|}` and phase `φ`.
///
/// For a phase-space symbol in `(q, p)` the atom coordinates are
/// `(p₁, q₁)`, with `p₁` paired against `q` and `q₁` against `p`.
pub fn inverse_fourier_symbol(a: &ExpPoly) -> Ultradistribution {
    let sigma = a.sigma();
    let inv = -Binarion::unit_inverse(sigma);
    let mut out = Ultradistribution::zero(a.dim(), sigma);
    for (k, c) in a.terms() {
        let n: u32 = k.exps.iter().sum();
        let key = AtomKey {
            loc: k.freq.clone(),
            order: k.exps.clone(),
            phase: k.phase.clone(),
        };
        out.add_atom(key, c * &inv.pow(n));
    }
    out
}

impl fmt::Display for Ultradistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        let u = self.sigma.unit_char();
        for (i, (k, w)) in self.atoms.iter().enumerate() {
            let loc: Vec<String> = k.loc.iter().map(|x| x.to_string()).collect();
            let order: Vec<String> = k.order.iter().map(|x| x.to_string()).collect();
            let (neg, coeff) = render_coeff(w, true);
            let sep = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let coeff = if coeff.is_empty() { coeff } else { coeff + "*" };
            write!(
                f,
                "{sep}{coeff}delta[{}]@({})",
                order.join(","),
                loc.join(",")
            )?;
            if !k.phase.is_zero() {
                write!(f, "*exp({u}*{})", k.phase)?;
            }
        }
        Ok(())
    }
}
