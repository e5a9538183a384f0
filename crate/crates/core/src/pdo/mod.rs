//! Pseudo-differential operators acting on exponential-polynomial wave
//! functions.
//!
//! `â(φ)(q) = ∫ a(q,p) e^{upq/h} φ̃(dp)`, so `q̂` multiplies by `q` and
//! `p̂ = (h/u) d/dq = σuh d/dq`. Polynomial symbols act in normal order
//! (`q` to the left). A symbol with Fourier atoms `ã` acts by
//! `â(φ)(q) = ∫ e^{u q p₁} φ(q + h q₁) ã(dp₁dq₁)`.

mod json;

pub use json::{OperatorJson, SymbolSpec, WaveFunctionJson};

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::{Binarion, Rational, Sigma};
use crate::symbols::PolySymbol;
use crate::ultra::{inverse_fourier_symbol, star_distributional, ExpKey, ExpPoly};

/// `φ(q)` as an exponential polynomial in `q₁..q_k` with a fixed `h > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WaveFunction {
    h: Rational,
    psi: ExpPoly,
}

fn check_h(h: &Rational) -> Result<()> {
    if !h.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "h must be positive, got {h}"
        )));
    }
    Ok(())
}

impl WaveFunction {
    pub fn new(psi: ExpPoly, h: Rational) -> Result<Self> {
        check_h(&h)?;
        if psi.dim() == 0 {
            return Err(Error::InvalidArgument(
                "wave functions need k ≥ 1".to_string(),
            ));
        }
        Ok(WaveFunction { h, psi })
    }

    /// `e^{u⟨p₀, q⟩/h}`.
    pub fn plane_wave(p0: &[Rational], h: Rational, sigma: Sigma) -> Result<Self> {
        check_h(&h)?;
        let freq = p0.iter().map(|p| p / &h).collect();
        WaveFunction::new(ExpPoly::character(freq, sigma), h)
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn psi(&self) -> &ExpPoly {
        &self.psi
    }

    pub fn dof(&self) -> usize {
        self.psi.dim()
    }

    pub fn sigma(&self) -> Sigma {
        self.psi.sigma()
    }

    pub fn ensure_compatible(&self, other: &WaveFunction) -> Result<()> {
        self.psi.ensure_compatible(&other.psi)?;
        if self.h != other.h {
            return Err(Error::InvalidArgument(format!(
                "wave functions at different h: {} and {}",
                self.h, other.h
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &WaveFunction) -> Result<WaveFunction> {
        self.ensure_compatible(other)?;
        Ok(self.with_psi(self.psi.add(&other.psi)?))
    }

    pub fn sub(&self, other: &WaveFunction) -> Result<WaveFunction> {
        self.ensure_compatible(other)?;
        Ok(self.with_psi(self.psi.sub(&other.psi)?))
    }

    pub fn scale(&self, c: &Binarion) -> Result<WaveFunction> {
        Ok(self.with_psi(self.psi.scale(c)?))
    }

    pub fn mul(&self, f: &ExpPoly) -> Result<WaveFunction> {
        Ok(self.with_psi(self.psi.mul(f)?))
    }

    pub fn is_zero(&self) -> bool {
        self.psi.is_zero()
    }

    fn with_psi(&self, psi: ExpPoly) -> WaveFunction {
        WaveFunction {
            h: self.h.clone(),
            psi,
        }
    }
}

impl fmt::Display for WaveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (h = {})", self.psi, self.h)
    }
}

/// A polynomial symbol with formal `h`, or an exponential-polynomial symbol
/// in `(q, p)` (dimension `2k`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Poly(PolySymbol),
    Exp(ExpPoly),
}

impl Symbol {
    pub fn sigma(&self) -> Sigma {
        match self {
            Symbol::Poly(a) => a.sigma(),
            Symbol::Exp(a) => a.sigma(),
        }
    }

    pub fn dof(&self) -> usize {
        match self {
            Symbol::Poly(a) => a.dof(),
            Symbol::Exp(a) => a.dim() / 2,
        }
    }

    /// The symbol as a function of `(q, p)` at a fixed `h`.
    pub fn at_h(&self, h: &Rational) -> ExpPoly {
        match self {
            Symbol::Poly(a) => ExpPoly::from_symbol(a, h),
            Symbol::Exp(a) => a.clone(),
        }
    }

    /// Star product; stays polynomial with formal `h` when both factors are.
    pub fn star(&self, other: &Symbol, h: &Rational) -> Result<Symbol> {
        match (self, other) {
            (Symbol::Poly(a), Symbol::Poly(b)) => Ok(Symbol::Poly(a.star(b)?)),
            _ => Ok(Symbol::Exp(star_distributional(
                &self.at_h(h),
                &other.at_h(h),
                h,
            )?)),
        }
    }

    pub fn moyal_bracket(&self, other: &Symbol, h: &Rational) -> Result<Symbol> {
        match (self, other) {
            (Symbol::Poly(a), Symbol::Poly(b)) => Ok(Symbol::Poly(a.moyal_bracket(b)?)),
            _ => {
                let ab = star_distributional(&self.at_h(h), &other.at_h(h), h)?;
                let ba = star_distributional(&other.at_h(h), &self.at_h(h), h)?;
                Ok(Symbol::Exp(ab.sub(&ba)?))
            }
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Poly(a) => write!(f, "{a}"),
            Symbol::Exp(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operator {
    symbol: Symbol,
    h: Rational,
    sigma: Sigma,
}

impl Operator {
    pub fn new(symbol: Symbol, h: Rational) -> Result<Self> {
        check_h(&h)?;
        if let Symbol::Exp(a) = &symbol {
            if a.dim() == 0 || a.dim() % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "phase-space symbols need an even positive dimension, got {}",
                    a.dim()
                )));
            }
        }
        let sigma = symbol.sigma();
        Ok(Operator { symbol, h, sigma })
    }

    pub fn poly(a: PolySymbol, h: Rational) -> Result<Self> {
        Operator::new(Symbol::Poly(a), h)
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    fn check(&self, phi: &WaveFunction) -> Result<()> {
        self.sigma.ensure(phi.sigma())?;
        if self.symbol.dof() != phi.dof() {
            return Err(Error::DimensionMismatch {
                expected: self.symbol.dof(),
                found: phi.dof(),
            });
        }
        if self.h != phi.h {
            return Err(Error::InvalidArgument(format!(
                "operator at h = {} applied to a wave function at h = {}",
                self.h, phi.h
            )));
        }
        Ok(())
    }

    /// `â(φ)`: normal-ordered differential action for polynomial symbols,
    /// shift form for exponential symbols.
    pub fn apply(&self, phi: &WaveFunction) -> Result<WaveFunction> {
        self.check(phi)?;
        match &self.symbol {
            Symbol::Poly(a) => apply_normal_ordered(a, &self.h, phi),
            Symbol::Exp(a) => apply_shift(a, &self.h, phi),
        }
    }

    /// `â(φ)` through the Fourier atoms of the symbol, for any symbol.
    pub fn apply_via_shift(&self, phi: &WaveFunction) -> Result<WaveFunction> {
        self.check(phi)?;
        apply_shift(&self.symbol.at_h(&self.h), &self.h, phi)
    }
}

fn apply_normal_ordered(a: &PolySymbol, h: &Rational, phi: &WaveFunction) -> Result<WaveFunction> {
    let k = a.dof();
    let sigma = a.sigma();
    let p_hat = Binarion::unit_inverse(sigma).scale(h);
    let mut out = ExpPoly::zero(k, sigma);
    for (alpha, beta, c) in a.terms() {
        let mut psi = phi.psi.clone();
        for (i, b) in beta.iter().enumerate() {
            for _ in 0..*b {
                psi = psi.derivative(i)?.scale(&p_hat)?;
            }
        }
        let q_alpha = ExpPoly::term(k, ExpKey::polynomial(alpha.to_vec()), c.eval(h))?;
        out = out.add(&q_alpha.mul(&psi)?)?;
    }
    Ok(phi.with_psi(out))
}

fn apply_shift(a: &ExpPoly, h: &Rational, phi: &WaveFunction) -> Result<WaveFunction> {
    let k = phi.dof();
    let sigma = phi.sigma();
    let u = Binarion::unit(sigma);
    let atoms = inverse_fourier_symbol(a);
    let mut out = ExpPoly::zero(k, sigma);
    for (key, w) in atoms.atoms() {
        let (p1, q1) = key.loc.split_at(k);
        let (n, m) = key.order.split_at(k);
        let total: u32 = key.order.iter().sum();
        let m_total: u32 = m.iter().sum();
        let mut c = w * &u.pow(n.iter().sum());
        c = c.scale(&num_traits::pow(h.clone(), m_total as usize));
        if total % 2 == 1 {
            c = -c;
        }
        let offset: Vec<Rational> = q1.iter().map(|x| x * h).collect();
        let shifted = phi.psi.derivative_multi(m)?.shift(&offset)?;
        let prefactor = ExpPoly::term(
            k,
            ExpKey {
                freq: p1.to_vec(),
                phase: key.phase.clone(),
                exps: n.to_vec(),
            },
            c,
        )?;
        out = out.add(&prefactor.mul(&shifted)?)?;
    }
    Ok(phi.with_psi(out))
}

/// `[â, b̂]φ = â(b̂φ) − b̂(âφ)`.
pub fn commutator(a: &Operator, b: &Operator, phi: &WaveFunction) -> Result<WaveFunction> {
    let ab = a.apply(&b.apply(phi)?)?;
    let ba = b.apply(&a.apply(phi)?)?;
    ab.sub(&ba)
}

/// Outcome of comparing `(a⋆b)^` with `â∘b̂` on one wave function.
#[derive(Clone, Debug, PartialEq)]
pub struct ComposeCheck {
    pub holds: bool,
    pub symbol_side: Option<WaveFunction>,
    pub operator_side: Option<WaveFunction>,
    pub diff: Option<WaveFunction>,
    pub error: Option<String>,
}

/// Checks `apply(a⋆b, φ) = apply(a, apply(b, φ))` exactly at `h`.
pub fn compose_check(a: &Symbol, b: &Symbol, phi: &WaveFunction, h: &Rational) -> ComposeCheck {
    let run = || -> Result<(WaveFunction, WaveFunction)> {
        let ab = Operator::new(a.star(b, h)?, h.clone())?;
        let lhs = ab.apply(phi)?;
        let oa = Operator::new(a.clone(), h.clone())?;
        let ob = Operator::new(b.clone(), h.clone())?;
        let rhs = oa.apply(&ob.apply(phi)?)?;
        Ok((lhs, rhs))
    };
    match run() {
        Ok((lhs, rhs)) => {
            let diff = lhs.sub(&rhs).expect("same space");
            ComposeCheck {
                holds: diff.is_zero(),
                symbol_side: Some(lhs),
                operator_side: Some(rhs),
                diff: Some(diff),
                error: None,
            }
        }
        Err(e) => ComposeCheck {
            holds: false,
            symbol_side: None,
            operator_side: None,
            diff: None,
            error: Some(e.to_string()),
        },
    }
}

/// `a(q, p₀)` at fixed `h` as a function of `q`.
pub fn symbol_at_momentum(a: &Symbol, p0: &[Rational], h: &Rational) -> Result<ExpPoly> {
    let k = a.dof();
    if p0.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: p0.len(),
        });
    }
    let mut f = a.at_h(h);
    for (i, p) in p0.iter().enumerate() {
        f = f.substitute(k + i, p)?;
    }
    f.truncate_dim(k)
}

/// Checks `â e^{up₀q/h} = a(q, p₀) e^{up₀q/h}` exactly.
pub fn eigen_check(a: &Symbol, p0: &[Rational], h: &Rational) -> Result<bool> {
    if h.is_zero() {
        return Err(Error::InvalidArgument("h must be positive".to_string()));
    }
    let phi = WaveFunction::plane_wave(p0, h.clone(), a.sigma())?;
    let lhs = Operator::new(a.clone(), h.clone())?.apply(&phi)?;
    let rhs = phi.mul(&symbol_at_momentum(a, p0, h)?)?;
    Ok(lhs == rhs)
}
