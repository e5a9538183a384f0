//! Exponential polynomials `Σ c · y^n · e^{u(⟨ω, y⟩ + φ)}`.
//!
//! Characters `e^{u·r}` at rational `r` are formal generators: multiplying
//! them adds exponents and they are never evaluated inside exact checks.
//! Distinct frequencies and phases are linearly independent over the
//! binarions, so the sparse map below is a canonical form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{to_f64, ApproxBinarion, Binarion, Rational, Sigma};
use crate::symbols::text::render_coeff;
use crate::symbols::{binomial, PolySymbol};

/// Element of the group ring spanned by formal characters `e^{u·r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharSum {
    sigma: Sigma,
    terms: BTreeMap<Rational, Binarion>,
}

impl CharSum {
    pub fn zero(sigma: Sigma) -> Self {
        CharSum {
            sigma,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_binarion(c: Binarion) -> Self {
        CharSum::term(Rational::zero(), c)
    }

    /// `c · e^{u·phase}`.
    pub fn term(phase: Rational, c: Binarion) -> Self {
        let mut out = CharSum::zero(c.sigma());
        out.add_term(phase, c);
        out
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Binarion)> {
        self.terms.iter()
    }

    /// The plain binarion when no nontrivial character is involved.
    pub fn as_binarion(&self) -> Option<Binarion> {
        match self.terms.len() {
            0 => Some(Binarion::zero(self.sigma)),
            1 => self.terms.get(&Rational::zero()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, phase: Rational, c: Binarion) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&phase) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&phase);
                }
            }
            None => {
                self.terms.insert(phase, c);
            }
        }
    }

    pub fn add(&self, other: &CharSum) -> CharSum {
        let mut out = self.clone();
        for (r, c) in &other.terms {
            out.add_term(r.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &CharSum) -> CharSum {
        let mut out = CharSum::zero(self.sigma);
        for (r1, c1) in &self.terms {
            for (r2, c2) in &other.terms {
                out.add_term(r1 + r2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Binarion) -> CharSum {
        let mut out = CharSum::zero(self.sigma);
        for (r, x) in &self.terms {
            out.add_term(r.clone(), x * c);
        }
        out
    }

    /// Floating value with `e^{jr} = cosh r + j sinh r` (or `cos`, `sin`).
    pub fn approx(&self) -> ApproxBinarion {
        self.terms
            .iter()
            .fold(ApproxBinarion::new(0.0, 0.0, self.sigma), |acc, (r, c)| {
                let ch = crate::scalars::character(to_f64(r), self.sigma);
                acc.add(&ch.mul(&c.to_approx()))
            })
    }
}

impl fmt::Display for CharSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let u = self.sigma.unit_char();
        for (i, (phase, c)) in self.terms.iter().enumerate() {
            let has_char = !phase.is_zero();
            let (neg, coeff) = render_coeff(c, has_char);
            let sep = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mut factors = Vec::new();
            if !coeff.is_empty() {
                factors.push(coeff);
            }
            if has_char {
                factors.push(format!("exp({u}*{phase})"));
            }
            write!(f, "{sep}{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Key of one exponential-polynomial term: `y^exps · e^{u(⟨freq, y⟩ + phase)}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpKey {
    pub freq: Vec<Rational>,
    pub phase: Rational,
    pub exps: Vec<u32>,
}

impl ExpKey {
    pub fn polynomial(exps: Vec<u32>) -> Self {
        ExpKey {
            freq: vec![Rational::zero(); exps.len()],
            phase: Rational::zero(),
            exps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpPoly {
    dim: usize,
    sigma: Sigma,
    terms: BTreeMap<ExpKey, Binarion>,
}

impl ExpPoly {
    pub fn zero(dim: usize, sigma: Sigma) -> Self {
        ExpPoly {
            dim,
            sigma,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(dim: usize, key: ExpKey, c: Binarion) -> Result<Self> {
        if key.freq.len() != dim || key.exps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: key.freq.len().max(key.exps.len()),
            });
        }
        let mut out = ExpPoly::zero(dim, c.sigma());
        out.add_term(key, c);
        Ok(out)
    }

    pub fn constant(dim: usize, c: Binarion) -> Self {
        ExpPoly::term(dim, ExpKey::polynomial(vec![0; dim]), c).expect("dims agree")
    }

    pub fn one(dim: usize, sigma: Sigma) -> Self {
        ExpPoly::constant(dim, Binarion::one(sigma))
    }

    /// The coordinate function `y_i`.
    pub fn variable(dim: usize, i: usize, sigma: Sigma) -> Result<Self> {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dof: dim });
        }
        let mut exps = vec![0; dim];
        exps[i] = 1;
        ExpPoly::term(dim, ExpKey::polynomial(exps), Binarion::one(sigma))
    }

    /// The character `y ↦ e^{u⟨freq, y⟩}`.
    pub fn character(freq: Vec<Rational>, sigma: Sigma) -> Self {
        let dim = freq.len();
        let key = ExpKey {
            freq,
            phase: Rational::zero(),
            exps: vec![0; dim],
        };
        ExpPoly::term(dim, key, Binarion::one(sigma)).expect("dims agree")
    }

    /// The constant `e^{u·phase}`.
    pub fn phase_constant(dim: usize, phase: Rational, sigma: Sigma) -> Self {
        let key = ExpKey {
            freq: vec![Rational::zero(); dim],
            phase,
            exps: vec![0; dim],
        };
        ExpPoly::term(dim, key, Binarion::one(sigma)).expect("dims agree")
    }

    /// A polynomial symbol with `h` fixed, as a function of `(q, p)`.
    pub fn from_symbol(a: &PolySymbol, h: &Rational) -> Self {
        let mut out = ExpPoly::zero(2 * a.dof(), a.sigma());
        for (e, c) in a.raw_terms() {
            out.add_term(ExpKey::polynomial(e.clone()), c.eval(h));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpKey, &Binarion)> {
        self.terms.iter()
    }

    /// Largest total polynomial degree among the terms.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.exps.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, key: ExpKey, c: Binarion) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn ensure_compatible(&self, other: &ExpPoly) -> Result<()> {
        self.sigma.ensure(other.sigma)?;
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExpPoly) -> Result<ExpPoly> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> ExpPoly {
        ExpPoly {
            dim: self.dim,
            sigma: self.sigma,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &ExpPoly) -> Result<ExpPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExpPoly) -> Result<ExpPoly> {
        self.ensure_compatible(other)?;
        let mut out = ExpPoly::zero(self.dim, self.sigma);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key = ExpKey {
                    freq: k1.freq.iter().zip(&k2.freq).map(|(a, b)| a + b).collect(),
                    phase: &k1.phase + &k2.phase,
                    exps: k1.exps.iter().zip(&k2.exps).map(|(a, b)| a + b).collect(),
                };
                out.add_term(key, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Binarion) -> Result<ExpPoly> {
        self.sigma.ensure(c.sigma())?;
        let mut out = ExpPoly::zero(self.dim, self.sigma);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        Ok(out)
    }

    pub fn scale_chars(&self, s: &CharSum) -> Result<ExpPoly> {
        self.sigma.ensure(s.sigma())?;
        let mut out = ExpPoly::zero(self.dim, self.sigma);
        for (phase, c) in s.terms() {
            out = out.add(
                &self
                    .mul(&ExpPoly::phase_constant(
                        self.dim,
                        phase.clone(),
                        self.sigma,
                    ))?
                    .scale(c)?,
            )?;
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> ExpPoly {
        (0..n).fold(ExpPoly::one(self.dim, self.sigma), |acc, _| {
            acc.mul(self).expect("same space")
        })
    }

    /// `∂/∂y_i`.
    pub fn derivative(&self, i: usize) -> Result<ExpPoly> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dof: self.dim,
            });
        }
        let u = Binarion::unit(self.sigma);
        let mut out = ExpPoly::zero(self.dim, self.sigma);
        for (k, c) in &self.terms {
            if k.exps[i] > 0 {
                let mut key = k.clone();
                key.exps[i] -= 1;
                let n = Rational::from_integer(BigInt::from(k.exps[i]));
                out.add_term(key, c.scale(&n));
            }
            if !k.freq[i].is_zero() {
                out.add_term(k.clone(), (c * &u).scale(&k.freq[i]));
            }
        }
        Ok(out)
    }

    /// Mixed partial `∂^order`.
    pub fn derivative_multi(&self, order: &[u32]) -> Result<ExpPoly> {
        if order.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: order.len(),
            });
        }
        let mut out = self.clone();
        for (i, n) in order.iter().enumerate() {
            for _ in 0..*n {
                out = out.derivative(i)?;
            }
        }
        Ok(out)
    }

    /// Value at a rational point, with characters kept formal.
    pub fn evaluate(&self, point: &[Rational]) -> Result<CharSum> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut out = CharSum::zero(self.sigma);
        for (k, c) in &self.terms {
            let mut m = Rational::one();
            let mut phase = k.phase.clone();
            for i in 0..self.dim {
                m *= num_traits::pow(point[i].clone(), k.exps[i] as usize);
                phase += &k.freq[i] * &point[i];
            }
            out = out.add(&CharSum::term(phase, c.scale(&m)));
        }
        Ok(out)
    }

    /// Fixes `y_i = value`; the variable stays in the space but no longer
    /// appears.
    pub fn substitute(&self, i: usize, value: &Rational) -> Result<ExpPoly> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dof: self.dim,
            });
        }
        let mut out = ExpPoly::zero(self.dim, self.sigma);
        for (k, c) in &self.terms {
            let mut key = k.clone();
            let m = num_traits::pow(value.clone(), k.exps[i] as usize);
            key.phase += &k.freq[i] * value;
            key.freq[i] = Rational::zero();
            key.exps[i] = 0;
            out.add_term(key, c.scale(&m));
        }
        Ok(out)
    }

    /// Argument shift `f(y) ↦ f(y + offset)`.
    pub fn shift(&self, offset: &[Rational]) -> Result<ExpPoly> {
        if offset.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: offset.len(),
            });
        }
        let mut out = ExpPoly::zero(self.dim, self.sigma);
        for (k, c) in &self.terms {
            // Expand Π (y_i + a_i)^{n_i} binomially.
            let mut partial: Vec<(Vec<u32>, Rational)> = vec![(vec![0; self.dim], Rational::one())];
            for i in 0..self.dim {
                let n = k.exps[i];
                let mut next = Vec::new();
                for (e, w) in &partial {
                    for m in 0..=n {
                        let coeff = Rational::from_integer(binomial(n, m))
                            * num_traits::pow(offset[i].clone(), (n - m) as usize);
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut e2 = e.clone();
                        e2[i] = m;
                        next.push((e2, w * coeff));
                    }
                }
                partial = next;
            }
            let phase: Rational = k.phase.clone()
                + k.freq
                    .iter()
                    .zip(offset)
                    .map(|(f, a)| f * a)
                    .fold(Rational::zero(), |acc, x| acc + x);
            for (e, w) in partial {
                let key = ExpKey {
                    freq: k.freq.clone(),
                    phase: phase.clone(),
                    exps: e,
                };
                out.add_term(key, c.scale(&w));
            }
        }
        Ok(out)
    }

    /// Re-indexes into a space of dimension `dim`, sending variable `i` to
    /// `positions[i]`.
    pub fn embed(&self, dim: usize, positions: &[usize]) -> Result<ExpPoly> {
        if positions.len() != self.dim || positions.iter().any(|p| *p >= dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: positions.len(),
            });
        }
        let mut out = ExpPoly::zero(dim, self.sigma);
        for (k, c) in &self.terms {
            let mut key = ExpKey::polynomial(vec![0; dim]);
            key.phase = k.phase.clone();
            for (i, p) in positions.iter().enumerate() {
                key.exps[*p] += k.exps[i];
                key.freq[*p] += &k.freq[i];
            }
            out.add_term(key, c.clone());
        }
        Ok(out)
    }

    /// Drops trailing variables, which must not occur.
    pub fn truncate_dim(&self, dim: usize) -> Result<ExpPoly> {
        let mut out = ExpPoly::zero(dim, self.sigma);
        for (k, c) in &self.terms {
            if k.exps[dim..].iter().any(|e| *e > 0) || k.freq[dim..].iter().any(|f| !f.is_zero()) {
                return Err(Error::NotRepresentable(
                    "truncated variable still occurs".to_string(),
                ));
            }
            let key = ExpKey {
                freq: k.freq[..dim].to_vec(),
                phase: k.phase.clone(),
                exps: k.exps[..dim].to_vec(),
            };
            out.add_term(key, c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let u = self.sigma.unit_char();
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            let mut arg: Vec<String> = k
                .freq
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(i, w)| {
                    if w.is_one() {
                        format!("y{}", i + 1)
                    } else {
                        format!("{w}*y{}", i + 1)
                    }
                })
                .collect();
            if !k.phase.is_zero() {
                arg.push(k.phase.to_string());
            }
            if !arg.is_empty() {
                factors.push(format!("exp({u}*({}))", arg.join(" + ")));
            }
            for (i, e) in k.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("y{}", i + 1)),
                    _ => factors.push(format!("y{}^{e}", i + 1)),
                }
            }
            let (neg, coeff) = render_coeff(c, !factors.is_empty());
            if !coeff.is_empty() {
                factors.insert(0, coeff);
            }
            let body = factors.join("*");
            out.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            out.push_str(&body);
        }
        write!(f, "{out}")
    }
}
