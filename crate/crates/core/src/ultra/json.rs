use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::distribution::{AtomKey, Ultradistribution};
use super::exppoly::{ExpKey, ExpPoly};
use crate::error::{Error, Result};
use crate::scalars::{parse_rational, Binarion, Rational, Sigma};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightJson {
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

impl WeightJson {
    pub fn from_binarion(c: &Binarion) -> Self {
        WeightJson {
            re: c.re().to_string(),
            im: c.im().to_string(),
        }
    }

    pub fn to_binarion(&self, sigma: Sigma) -> Result<Binarion> {
        Ok(Binarion::new(
            parse_rational(&self.re)?,
            parse_rational(&self.im)?,
            sigma,
        ))
    }
}

fn phase_json(p: &Rational) -> Option<String> {
    if p.is_zero() {
        None
    } else {
        Some(p.to_string())
    }
}

fn parse_phase(p: &Option<String>) -> Result<Rational> {
    match p {
        Some(s) => parse_rational(s),
        None => Ok(Rational::zero()),
    }
}

fn parse_vec(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn check_len(dim: usize, found: usize) -> Result<()> {
    if dim != found {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub loc: Vec<String>,
    pub order: Vec<u32>,
    pub weight: WeightJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<String>,
}

/// `{sigma, dim, atoms: [{loc, order, weight: {re, im}, phase?}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UltraJson {
    pub sigma: Sigma,
    pub dim: usize,
    pub atoms: Vec<AtomJson>,
}

impl From<&Ultradistribution> for UltraJson {
    fn from(d: &Ultradistribution) -> Self {
        UltraJson {
            sigma: d.sigma(),
            dim: d.dim(),
            atoms: d
                .atoms()
                .map(|(k, w)| AtomJson {
                    loc: k.loc.iter().map(|x| x.to_string()).collect(),
                    order: k.order.clone(),
                    weight: WeightJson::from_binarion(w),
                    phase: phase_json(&k.phase),
                })
                .collect(),
        }
    }
}

impl TryFrom<&UltraJson> for Ultradistribution {
    type Error = Error;

    fn try_from(j: &UltraJson) -> Result<Self> {
        let mut out = Ultradistribution::zero(j.dim, j.sigma);
        for a in &j.atoms {
            check_len(j.dim, a.loc.len())?;
            check_len(j.dim, a.order.len())?;
            let key = AtomKey {
                loc: parse_vec(&a.loc)?,
                order: a.order.clone(),
                phase: parse_phase(&a.phase)?,
            };
            out.add_atom(key, a.weight.to_binarion(j.sigma)?);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpTermJson {
    pub exps: Vec<u32>,
    pub freq: Vec<String>,
    pub coeff: WeightJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<String>,
}

/// `{sigma, dim, terms: [{exps, freq, coeff: {re, im}, phase?}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpPolyJson {
    pub sigma: Sigma,
    pub dim: usize,
    pub terms: Vec<ExpTermJson>,
}

impl From<&ExpPoly> for ExpPolyJson {
    fn from(f: &ExpPoly) -> Self {
        ExpPolyJson {
            sigma: f.sigma(),
            dim: f.dim(),
            terms: f
                .terms()
                .map(|(k, c)| ExpTermJson {
                    exps: k.exps.clone(),
                    freq: k.freq.iter().map(|x| x.to_string()).collect(),
                    coeff: WeightJson::from_binarion(c),
                    phase: phase_json(&k.phase),
                })
                .collect(),
        }
    }
}

impl TryFrom<&ExpPolyJson> for ExpPoly {
    type Error = Error;

    fn try_from(j: &ExpPolyJson) -> Result<Self> {
        let mut out = ExpPoly::zero(j.dim, j.sigma);
        for t in &j.terms {
            check_len(j.dim, t.exps.len())?;
            check_len(j.dim, t.freq.len())?;
            let key = ExpKey {
                freq: parse_vec(&t.freq)?,
                phase: parse_phase(&t.phase)?,
                exps: t.exps.clone(),
            };
            out.add_term(key, t.coeff.to_binarion(j.sigma)?);
        }
        Ok(out)
    }
}

impl Ultradistribution {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&UltraJson::from(self)).expect("distribution json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: UltraJson = serde_json::from_str(text)?;
        Ultradistribution::try_from(&j)
    }
}

impl ExpPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ExpPolyJson::from(self)).expect("exppoly json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: ExpPolyJson = serde_json::from_str(text)?;
        ExpPoly::try_from(&j)
    }
}
