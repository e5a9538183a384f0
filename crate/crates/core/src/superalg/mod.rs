//! Grassmann algebra on `n` generators with binarion coefficients.
//!
//! Monomials `θ^α` are bitmasks (bit `i − 1` for `θᵢ`) in ascending order;
//! reordering a product picks up the sign of the permutation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{parse_rational, Binarion, Rational, Sigma};

/// Largest supported number of generators.
pub const MAX_GENERATORS: u32 = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrassmannG {
    n: u32,
    sigma: Sigma,
    terms: BTreeMap<u64, Binarion>,
}

fn check_n(n: u32) -> Result<()> {
    if n > MAX_GENERATORS {
        return Err(Error::InvalidArgument(format!(
            "at most {MAX_GENERATORS} generators are supported, got {n}"
        )));
    }
    Ok(())
}

/// Sign of `θ^a θ^b` after sorting into ascending order, or `None` when the
/// monomials share a generator.
fn product_sign(a: u64, b: u64) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> j).count_ones();
        rest &= rest - 1;
    }
    Some(inversions % 2 == 1)
}

impl GrassmannG {
    pub fn zero(n: u32, sigma: Sigma) -> Self {
        GrassmannG {
            n,
            sigma,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: u32, c: Binarion) -> Self {
        GrassmannG::monomial(n, 0, c).expect("empty monomial")
    }

    pub fn one(n: u32, sigma: Sigma) -> Self {
        GrassmannG::constant(n, Binarion::one(sigma))
    }

    pub fn monomial(n: u32, mask: u64, c: Binarion) -> Result<Self> {
        check_n(n)?;
        if mask >> n != 0 {
            return Err(Error::IndexOutOfRange {
                index: 64 - mask.leading_zeros() as usize,
                dof: n as usize,
            });
        }
        let mut out = GrassmannG::zero(n, c.sigma());
        out.add_term(mask, c);
        Ok(out)
    }

    /// `θᵢ` for `1 ≤ i ≤ n`.
    pub fn generator(n: u32, i: u32, sigma: Sigma) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange {
                index: i as usize,
                dof: n as usize,
            });
        }
        GrassmannG::monomial(n, 1 << (i - 1), Binarion::one(sigma))
    }

    /// `θ₁θ₂⋯θₙ`.
    pub fn top(n: u32, sigma: Sigma) -> Result<Self> {
        check_n(n)?;
        GrassmannG::monomial(n, (1u64 << n) - 1, Binarion::one(sigma))
    }

    pub fn generators(&self) -> u32 {
        self.n
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Binarion)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    fn add_term(&mut self, mask: u64, c: Binarion) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn ensure_compatible(&self, other: &GrassmannG) -> Result<()> {
        self.sigma.ensure(other.sigma)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n as usize,
                found: other.n as usize,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &GrassmannG) -> Result<GrassmannG> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> GrassmannG {
        GrassmannG {
            n: self.n,
            sigma: self.sigma,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &GrassmannG) -> Result<GrassmannG> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Binarion) -> Result<GrassmannG> {
        self.sigma.ensure(c.sigma())?;
        let mut out = GrassmannG::zero(self.n, self.sigma);
        for (m, x) in &self.terms {
            out.add_term(*m, x * c);
        }
        Ok(out)
    }

    pub fn gproduct(&self, other: &GrassmannG) -> Result<GrassmannG> {
        self.ensure_compatible(other)?;
        let mut out = GrassmannG::zero(self.n, self.sigma);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(negative) = product_sign(*a, *b) {
                    let c = x * y;
                    out.add_term(a | b, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Parity of the monomials present; zero counts as even.
    pub fn parity(&self) -> Parity {
        let odd = self
            .terms
            .keys()
            .filter(|m| m.count_ones() % 2 == 1)
            .count();
        if odd == 0 {
            Parity::Even
        } else if odd == self.terms.len() {
            Parity::Odd
        } else {
            Parity::Mixed
        }
    }

    fn part(&self, odd: bool) -> GrassmannG {
        GrassmannG {
            n: self.n,
            sigma: self.sigma,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (m.count_ones() % 2 == 1) == odd)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn even_part(&self) -> GrassmannG {
        self.part(false)
    }

    pub fn odd_part(&self) -> GrassmannG {
        self.part(true)
    }

    /// `[a, b] = ab − (−1)^{|a||b|} ba` on homogeneous parts, extended
    /// bilinearly.
    pub fn supercommutator(&self, other: &GrassmannG) -> Result<GrassmannG> {
        self.ensure_compatible(other)?;
        let mut out = GrassmannG::zero(self.n, self.sigma);
        for a_odd in [false, true] {
            for b_odd in [false, true] {
                let a = self.part(a_odd);
                let b = other.part(b_odd);
                let ab = a.gproduct(&b)?;
                let ba = b.gproduct(&a)?;
                let term = if a_odd && b_odd {
                    ab.add(&ba)?
                } else {
                    ab.sub(&ba)?
                };
                out = out.add(&term)?;
            }
        }
        Ok(out)
    }
}

/// Result of checking that `θ₁⋯θₙ` kills every odd basis monomial from both
/// sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnihilatorWitness {
    pub n: u32,
    pub witness: String,
    pub nonzero: bool,
    pub odd_monomials_checked: u64,
    pub annihilates: bool,
}

pub fn annihilator_witness(n: u32, sigma: Sigma) -> Result<(GrassmannG, AnnihilatorWitness)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".to_string()));
    }
    if n > 24 {
        return Err(Error::InvalidArgument(
            "exhaustive check limited to n ≤ 24".to_string(),
        ));
    }
    let w = GrassmannG::top(n, sigma)?;
    let mut checked = 0;
    let mut annihilates = true;
    for mask in 0..(1u64 << n) {
        if mask.count_ones() % 2 == 0 {
            continue;
        }
        let lam = GrassmannG::monomial(n, mask, Binarion::one(sigma))?;
        checked += 1;
        if !w.gproduct(&lam)?.is_zero() || !lam.gproduct(&w)?.is_zero() {
            annihilates = false;
        }
    }
    let report = AnnihilatorWitness {
        n,
        witness: w.to_string(),
        nonzero: !w.is_zero(),
        odd_monomials_checked: checked,
        annihilates,
    };
    Ok((w, report))
}

fn render_mask(mask: u64) -> String {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("θ{}", i + 1))
        .collect()
}

/// Returns `(negative, text)` for one term.
fn render_term(mask: u64, c: &Binarion) -> (bool, String) {
    let (negative, coeff) = if c.is_real() {
        (c.re() < &Rational::zero(), c.re().abs().to_string())
    } else {
        (false, format!("({c})"))
    };
    let text = match (mask, coeff.as_str()) {
        (0, _) => coeff,
        (_, "1") => render_mask(mask),
        _ => format!("{coeff}·{}", render_mask(mask)),
    };
    (negative, text)
}

impl fmt::Display for GrassmannG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Graded order: by degree, then ascending generator sets.
        let mut terms: Vec<(&u64, &Binarion)> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (m.count_ones(), m.reverse_bits()));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let (negative, text) = render_term(*m, c);
            match (k, negative) {
                (0, false) => write!(f, "{text}")?,
                (0, true) => write!(f, "-{text}")?,
                (_, false) => write!(f, " + {text}")?,
                (_, true) => write!(f, " - {text}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrassmannTermJson {
    /// 1-based generator indices in ascending order.
    pub mono: Vec<u32>,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

/// `{sigma, n, terms: [{mono, re, im}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrassmannJson {
    pub sigma: Sigma,
    pub n: u32,
    pub terms: Vec<GrassmannTermJson>,
}

impl From<&GrassmannG> for GrassmannJson {
    fn from(g: &GrassmannG) -> Self {
        GrassmannJson {
            sigma: g.sigma,
            n: g.n,
            terms: g
                .terms
                .iter()
                .map(|(m, c)| GrassmannTermJson {
                    mono: (0..64).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect(),
                    re: c.re().to_string(),
                    im: c.im().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&GrassmannJson> for GrassmannG {
    type Error = Error;

    /// Generator lists may be unordered; they are sorted with the
    /// corresponding sign, and repeated generators give zero.
    fn try_from(j: &GrassmannJson) -> Result<Self> {
        check_n(j.n)?;
        let mut out = GrassmannG::zero(j.n, j.sigma);
        for t in &j.terms {
            let c = Binarion::new(parse_rational(&t.re)?, parse_rational(&t.im)?, j.sigma);
            let mut term = GrassmannG::constant(j.n, c);
            for i in &t.mono {
                term = term.gproduct(&GrassmannG::generator(j.n, *i, j.sigma)?)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl GrassmannG {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GrassmannJson::from(self)).expect("grassmann json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: GrassmannJson = serde_json::from_str(text)?;
        GrassmannG::try_from(&j)
    }
}
