use serde::{Deserialize, Serialize};

use super::{Operator, Symbol, WaveFunction};
use crate::error::{Error, Result};
use crate::scalars::{parse_rational, Sigma};
use crate::symbols::{parse_symbol, PolySymbol, SymbolJson};
use crate::ultra::{ExpPoly, ExpPolyJson};

/// A symbol given as an expression, a polynomial term map, or an
/// exponential-polynomial term map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolSpec {
    Text(String),
    Poly(SymbolJson),
    Exp(ExpPolyJson),
}

impl SymbolSpec {
    pub fn from_symbol(s: &Symbol) -> Self {
        match s {
            Symbol::Poly(a) => SymbolSpec::Poly(SymbolJson::from(a)),
            Symbol::Exp(a) => SymbolSpec::Exp(ExpPolyJson::from(a)),
        }
    }

    pub fn to_symbol(&self, sigma: Sigma, dof: Option<usize>) -> Result<Symbol> {
        let out = match self {
            SymbolSpec::Text(src) => Symbol::Poly(parse_symbol(src, sigma, dof)?),
            SymbolSpec::Poly(j) => Symbol::Poly(PolySymbol::try_from(j)?),
            SymbolSpec::Exp(j) => Symbol::Exp(ExpPoly::try_from(j)?),
        };
        sigma.ensure(out.sigma())?;
        Ok(out)
    }
}

/// `{symbol, h, sigma}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub symbol: SymbolSpec,
    pub h: String,
    pub sigma: Sigma,
}

/// `{h, psi}` with `psi` an exponential polynomial in `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveFunctionJson {
    pub h: String,
    pub psi: ExpPolyJson,
}

impl From<&Operator> for OperatorJson {
    fn from(op: &Operator) -> Self {
        OperatorJson {
            symbol: SymbolSpec::from_symbol(&op.symbol),
            h: op.h.to_string(),
            sigma: op.sigma,
        }
    }
}

impl TryFrom<&OperatorJson> for Operator {
    type Error = Error;

    fn try_from(j: &OperatorJson) -> Result<Self> {
        Operator::new(j.symbol.to_symbol(j.sigma, None)?, parse_rational(&j.h)?)
    }
}

impl From<&WaveFunction> for WaveFunctionJson {
    fn from(w: &WaveFunction) -> Self {
        WaveFunctionJson {
            h: w.h.to_string(),
            psi: ExpPolyJson::from(&w.psi),
        }
    }
}

impl TryFrom<&WaveFunctionJson> for WaveFunction {
    type Error = Error;

    fn try_from(j: &WaveFunctionJson) -> Result<Self> {
        WaveFunction::new(ExpPoly::try_from(&j.psi)?, parse_rational(&j.h)?)
    }
}

impl Operator {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&OperatorJson::from(self)).expect("operator json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: OperatorJson = serde_json::from_str(text)?;
        Operator::try_from(&j)
    }
}

impl WaveFunction {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&WaveFunctionJson::from(self)).expect("wave function json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: WaveFunctionJson = serde_json::from_str(text)?;
        WaveFunction::try_from(&j)
    }
}
