//! Polynomial phase-space symbols and their star product.
//!
//! A [`PolySymbol`] is a sparse polynomial in `q₁..q_k, p₁..p_k` whose
//! coefficients are polynomials in the Planck parameter `h` (kept formal) over
//! the binarions. Operators are normal ordered (`q` to the left), which makes
//! the star product
//!
//! ```text
//! a ⋆ b = Σ_κ (σuh)^{|κ|} / κ! · ∂_p^κ a · ∂_q^κ b
//! ```
//!
//! The sum terminates for polynomial symbols.

mod json;
pub(crate) mod text;

pub use json::SymbolJson;
pub use text::parse_symbol;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{Binarion, Rational, Sigma};

/// Polynomial in the formal deformation parameter `h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPoly {
    sigma: Sigma,
    coeffs: BTreeMap<u32, Binarion>,
}

impl HPoly {
    pub fn zero(sigma: Sigma) -> Self {
        HPoly {
            sigma,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: Binarion) -> Self {
        HPoly::monomial(0, c)
    }

    pub fn monomial(degree: u32, c: Binarion) -> Self {
        let mut p = HPoly::zero(c.sigma());
        if !c.is_zero() {
            p.coeffs.insert(degree, c);
        }
        p
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: u32) -> Binarion {
        self.coeffs
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| Binarion::zero(self.sigma))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Binarion)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    fn add_term(&mut self, degree: u32, c: Binarion) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&degree) {
            Some(existing) => {
                *existing = &*existing + &c;
                if existing.is_zero() {
                    self.coeffs.remove(&degree);
                }
            }
            None => {
                self.coeffs.insert(degree, c);
            }
        }
    }

    pub fn add(&self, other: &HPoly) -> HPoly {
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.add_term(*d, c.clone());
        }
        out
    }

    pub fn neg(&self) -> HPoly {
        HPoly {
            sigma: self.sigma,
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &HPoly) -> HPoly {
        let mut out = HPoly::zero(self.sigma);
        for (d1, c1) in &self.coeffs {
            for (d2, c2) in &other.coeffs {
                out.add_term(d1 + d2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Binarion) -> HPoly {
        let mut out = HPoly::zero(self.sigma);
        for (d, x) in &self.coeffs {
            out.add_term(*d, x * c);
        }
        out
    }

    /// Multiplies by `h^n`.
    pub fn shift_up(&self, n: u32) -> HPoly {
        HPoly {
            sigma: self.sigma,
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (d + n, c.clone()))
                .collect(),
        }
    }

    /// Divides by `h^n`; fails if some term has lower degree.
    pub fn shift_down(&self, n: u32) -> Result<HPoly> {
        if let Some(low) = self.min_degree() {
            if low < n {
                return Err(Error::NotRepresentable(format!(
                    "h-polynomial with a degree-{low} term is not divisible by h^{n}"
                )));
            }
        }
        Ok(HPoly {
            sigma: self.sigma,
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (d - n, c.clone()))
                .collect(),
        })
    }

    pub fn eval(&self, h: &Rational) -> Binarion {
        let mut acc = Binarion::zero(self.sigma);
        for (d, c) in &self.coeffs {
            acc = &acc + &c.scale(&num_traits::pow(h.clone(), *d as usize));
        }
        acc
    }
}

/// A phase-space coordinate, zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Q(usize),
    P(usize),
}

/// Point `(q, p)` of the `2k`-dimensional phase space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePoint {
    pub q: Vec<Rational>,
    pub p: Vec<Rational>,
}

impl PhasePoint {
    pub fn new(q: Vec<Rational>, p: Vec<Rational>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                found: p.len(),
            });
        }
        Ok(PhasePoint { q, p })
    }

    pub fn dof(&self) -> usize {
        self.q.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolConfig {
    /// Bound on `deg(a) + deg(b)` accepted by the star product.
    pub degree_cap: u32,
}

impl Default for SymbolConfig {
    fn default() -> Self {
        SymbolConfig { degree_cap: 16 }
    }
}

/// Sparse polynomial symbol `Σ c_{αβ}(h) q^α p^β`.
///
/// Monomial keys hold `2k` exponents: the `q` exponents followed by the `p`
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolySymbol {
    dof: usize,
    sigma: Sigma,
    terms: BTreeMap<Vec<u32>, HPoly>,
}

impl PolySymbol {
    pub fn zero(dof: usize, sigma: Sigma) -> Self {
        assert!(dof > 0, "a symbol needs at least one degree of freedom");
        PolySymbol {
            dof,
            sigma,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dof: usize, c: Binarion) -> Self {
        PolySymbol::from_hpoly(dof, HPoly::constant(c))
    }

    pub fn from_hpoly(dof: usize, c: HPoly) -> Self {
        let mut s = PolySymbol::zero(dof, c.sigma());
        s.add_term(vec![0; 2 * dof], c);
        s
    }

    pub fn one(dof: usize, sigma: Sigma) -> Self {
        PolySymbol::constant(dof, Binarion::one(sigma))
    }

    /// The symbol `h`.
    pub fn planck(dof: usize, sigma: Sigma) -> Self {
        PolySymbol::from_hpoly(dof, HPoly::monomial(1, Binarion::one(sigma)))
    }

    pub fn var(dof: usize, var: Var, sigma: Sigma) -> Result<Self> {
        let mut exps = vec![0; 2 * dof];
        exps[Self::slot(dof, var)?] = 1;
        Ok(PolySymbol::monomial(
            dof,
            exps,
            HPoly::constant(Binarion::one(sigma)),
        ))
    }

    pub fn q(dof: usize, index: usize, sigma: Sigma) -> Result<Self> {
        PolySymbol::var(dof, Var::Q(index), sigma)
    }

    pub fn p(dof: usize, index: usize, sigma: Sigma) -> Result<Self> {
        PolySymbol::var(dof, Var::P(index), sigma)
    }

    /// `c · q^α p^β` with `exps = α ++ β`.
    pub fn monomial(dof: usize, exps: Vec<u32>, c: HPoly) -> Self {
        assert_eq!(exps.len(), 2 * dof, "monomial needs 2k exponents");
        let mut s = PolySymbol::zero(dof, c.sigma());
        s.add_term(exps, c);
        s
    }

    fn slot(dof: usize, var: Var) -> Result<usize> {
        match var {
            Var::Q(i) if i < dof => Ok(i),
            Var::P(i) if i < dof => Ok(dof + i),
            Var::Q(i) | Var::P(i) => Err(Error::IndexOutOfRange { index: i, dof }),
        }
    }

    pub fn dof(&self) -> usize {
        self.dof
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

    /// Iterates `(q exponents, p exponents, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u32], &HPoly)> {
        self.terms
            .iter()
            .map(move |(e, c)| (&e[..self.dof], &e[self.dof..], c))
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<Vec<u32>, HPoly> {
        &self.terms
    }

    /// Total degree in `q` and `p` (0 for the zero symbol).
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn h_degree(&self) -> u32 {
        self.terms
            .values()
            .filter_map(HPoly::degree)
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: HPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn ensure_compatible(&self, other: &PolySymbol) -> Result<()> {
        self.sigma.ensure(other.sigma)?;
        if self.dof != other.dof {
            return Err(Error::DimensionMismatch {
                expected: self.dof,
                found: other.dof,
            });
        }
        Ok(())
    }

    /// Re-embeds the symbol into a phase space with more degrees of freedom.
    pub fn with_dof(&self, dof: usize) -> Result<PolySymbol> {
        if dof < self.dof {
            return Err(Error::DimensionMismatch {
                expected: self.dof,
                found: dof,
            });
        }
        let mut out = PolySymbol::zero(dof, self.sigma);
        for (e, c) in &self.terms {
            let mut exps = vec![0; 2 * dof];
            exps[..self.dof].copy_from_slice(&e[..self.dof]);
            exps[dof..dof + self.dof].copy_from_slice(&e[self.dof..]);
            out.add_term(exps, c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> PolySymbol {
        PolySymbol {
            dof: self.dof,
            sigma: self.sigma,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.add(&other.neg())
    }

    /// Pointwise (commutative) product.
    pub fn mul(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.ensure_compatible(other)?;
        let mut out = PolySymbol::zero(self.dof, self.sigma);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Binarion) -> Result<PolySymbol> {
        self.sigma.ensure(c.sigma())?;
        let mut out = PolySymbol::zero(self.dof, self.sigma);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.scale(c));
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> PolySymbol {
        let mut acc = PolySymbol::one(self.dof, self.sigma);
        for _ in 0..n {
            acc = acc.mul(self).expect("same symbol space");
        }
        acc
    }

    pub fn star(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.star_with(other, &SymbolConfig::default())
    }

    /// Normal-ordered star product.
    pub fn star_with(&self, other: &PolySymbol, config: &SymbolConfig) -> Result<PolySymbol> {
        self.ensure_compatible(other)?;
        let degree = self.total_degree() + other.total_degree();
        if degree > config.degree_cap {
            return Err(Error::DegreeCapExceeded {
                degree,
                cap: config.degree_cap,
            });
        }
        let k = self.dof;
        let sigma_u = Binarion::unit_inverse(self.sigma);
        let mut out = PolySymbol::zero(k, self.sigma);
        for (e1, c1) in &self.terms {
            let beta1 = &e1[k..];
            for (e2, c2) in &other.terms {
                let alpha2 = &e2[..k];
                let bound: Vec<u32> = beta1.iter().zip(alpha2).map(|(b, a)| *b.min(a)).collect();
                let base = c1.mul(c2);
                for kappa in MultiIndexIter::new(&bound) {
                    let order: u32 = kappa.iter().sum();
                    let mut weight = BigInt::one();
                    for i in 0..k {
                        weight *= binomial(beta1[i], kappa[i]);
                        weight *= falling_factorial(alpha2[i], kappa[i]);
                    }
                    let mut exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                    for i in 0..k {
                        exps[i] -= kappa[i];
                        exps[k + i] -= kappa[i];
                    }
                    let scalar = sigma_u.pow(order).scale(&Rational::from_integer(weight));
                    out.add_term(exps, base.scale(&scalar).shift_up(order));
                }
            }
        }
        Ok(out)
    }

    /// `a ⋆ b − b ⋆ a`.
    pub fn moyal_bracket(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.moyal_bracket_with(other, &SymbolConfig::default())
    }

    pub fn moyal_bracket_with(
        &self,
        other: &PolySymbol,
        config: &SymbolConfig,
    ) -> Result<PolySymbol> {
        self.star_with(other, config)?
            .sub(&other.star_with(self, config)?)
    }

    /// `{a, b} = Σᵢ ∂_{pᵢ}a ∂_{qᵢ}b − ∂_{qᵢ}a ∂_{pᵢ}b`.
    pub fn poisson_bracket(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.ensure_compatible(other)?;
        let mut out = PolySymbol::zero(self.dof, self.sigma);
        for i in 0..self.dof {
            let left = self
                .differentiate(Var::P(i))?
                .mul(&other.differentiate(Var::Q(i))?)?;
            let right = self
                .differentiate(Var::Q(i))?
                .mul(&other.differentiate(Var::P(i))?)?;
            out = out.add(&left)?.sub(&right)?;
        }
        Ok(out)
    }

    /// `(u/h) · {a, b}_⋆`, an exact polynomial in `h` whose constant term is
    /// the Poisson bracket.
    pub fn scaled_bracket(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.scaled_bracket_with(other, &SymbolConfig::default())
    }

    pub fn scaled_bracket_with(
        &self,
        other: &PolySymbol,
        config: &SymbolConfig,
    ) -> Result<PolySymbol> {
        let bracket = self.moyal_bracket_with(other, config)?;
        let unit = Binarion::unit(self.sigma);
        let mut out = PolySymbol::zero(self.dof, self.sigma);
        for (e, c) in &bracket.terms {
            out.add_term(e.clone(), c.shift_down(1)?.scale(&unit));
        }
        Ok(out)
    }

    /// Coefficient of `hⁿ`, as an `h`-free symbol.
    pub fn h_coefficient(&self, n: u32) -> PolySymbol {
        let mut out = PolySymbol::zero(self.dof, self.sigma);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), HPoly::constant(c.coeff(n)));
        }
        out
    }

    /// The `h → 0` limit for polynomial dependence on `h`.
    pub fn h_constant_term(&self) -> PolySymbol {
        self.h_coefficient(0)
    }

    /// Substitutes a numeric `h`, leaving an `h`-free symbol.
    pub fn at_h(&self, h: &Rational) -> PolySymbol {
        let mut out = PolySymbol::zero(self.dof, self.sigma);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), HPoly::constant(c.eval(h)));
        }
        out
    }

    pub fn differentiate(&self, var: Var) -> Result<PolySymbol> {
        let slot = Self::slot(self.dof, var)?;
        let mut out = PolySymbol::zero(self.dof, self.sigma);
        for (e, c) in &self.terms {
            if e[slot] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[slot] -= 1;
            let factor = Binarion::real(Rational::from_integer(e[slot].into()), self.sigma);
            out.add_term(exps, c.scale(&factor));
        }
        Ok(out)
    }

    pub fn evaluate(&self, pt: &PhasePoint, h: &Rational) -> Result<Binarion> {
        if pt.dof() != self.dof {
            return Err(Error::DimensionMismatch {
                expected: self.dof,
                found: pt.dof(),
            });
        }
        if h < &Rational::zero() {
            return Err(Error::InvalidArgument("h must be nonnegative".to_string()));
        }
        let coords: Vec<&Rational> = pt.q.iter().chain(&pt.p).collect();
        let mut acc = Binarion::zero(self.sigma);
        for (e, c) in &self.terms {
            let mut m = Rational::one();
            for (x, n) in coords.iter().zip(e) {
                m *= num_traits::pow((*x).clone(), *n as usize);
            }
            acc = &acc + &c.eval(h).scale(&m);
        }
        Ok(acc)
    }

    /// Real-valued symbols with no `h` dependence.
    pub fn is_observable(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.terms().all(|(d, x)| d == 0 && x.is_real()))
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `n (n−1) ⋯ (n−k+1)`.
pub(crate) fn falling_factorial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// All multi-indices `κ` with `0 ≤ κᵢ ≤ boundᵢ`.
pub(crate) struct MultiIndexIter {
    bound: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl MultiIndexIter {
    pub(crate) fn new(bound: &[u32]) -> Self {
        MultiIndexIter {
            bound: bound.to_vec(),
            current: Some(vec![0; bound.len()]),
        }
    }
}

impl Iterator for MultiIndexIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = 0;
        loop {
            if i == next.len() {
                self.current = None;
                break;
            }
            if next[i] < self.bound[i] {
                next[i] += 1;
                self.current = Some(next);
                break;
            }
            next[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests;
