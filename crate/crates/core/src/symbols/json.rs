use serde::{Deserialize, Serialize};

use super::{HPoly, PolySymbol};
use crate::error::{Error, Result};
use crate::scalars::{parse_rational, Binarion, Sigma};

/// One `(monomial, h-power)` entry of the term map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub q: Vec<u32>,
    pub p: Vec<u32>,
    #[serde(default)]
    pub h: u32,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

/// JSON form of a [`PolySymbol`]: `{sigma, dof, terms: [{q, p, h, re, im}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolJson {
    pub sigma: Sigma,
    pub dof: usize,
    pub terms: Vec<TermJson>,
}

impl From<&PolySymbol> for SymbolJson {
    fn from(s: &PolySymbol) -> Self {
        let mut terms = Vec::new();
        for (q, p, c) in s.terms() {
            for (d, x) in c.terms() {
                terms.push(TermJson {
                    q: q.to_vec(),
                    p: p.to_vec(),
                    h: d,
                    re: x.re().to_string(),
                    im: x.im().to_string(),
                });
            }
        }
        SymbolJson {
            sigma: s.sigma(),
            dof: s.dof(),
            terms,
        }
    }
}

impl TryFrom<&SymbolJson> for PolySymbol {
    type Error = Error;

    fn try_from(j: &SymbolJson) -> Result<Self> {
        if j.dof == 0 {
            return Err(Error::InvalidArgument("dof must be positive".to_string()));
        }
        let mut out = PolySymbol::zero(j.dof, j.sigma);
        for t in &j.terms {
            for v in [&t.q, &t.p] {
                if v.len() != j.dof {
                    return Err(Error::DimensionMismatch {
                        expected: j.dof,
                        found: v.len(),
                    });
                }
            }
            let c = Binarion::new(parse_rational(&t.re)?, parse_rational(&t.im)?, j.sigma);
            let exps = t.q.iter().chain(&t.p).copied().collect();
            out.add_term(exps, HPoly::monomial(t.h, c));
        }
        Ok(out)
    }
}

impl PolySymbol {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SymbolJson::from(self)).expect("symbol json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: SymbolJson = serde_json::from_str(text)?;
        PolySymbol::try_from(&j)
    }
}
