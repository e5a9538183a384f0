//! Canonical text form and the expression grammar for symbols.
//!
//! Grammar: rationals, `q`/`p` (or `q<i>`/`p<i>`, 1-based), `h`, the unit `j`
//! or `i` (either letter denotes the unit of the active signature), `+ - * /
//! ^` and parentheses. Division is only by nonzero invertible constants.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{HPoly, PolySymbol};
use crate::error::{Error, Result};
use crate::scalars::{Binarion, Rational, Sigma};

fn var_name(prefix: char, index: usize, dof: usize) -> String {
    if dof == 1 {
        prefix.to_string()
    } else {
        format!("{prefix}{}", index + 1)
    }
}

fn power(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

/// Renders one coefficient; returns `(negative, text)`. `text` is empty for a
/// unit coefficient in front of factors.
pub(crate) fn render_coeff(c: &Binarion, has_factors: bool) -> (bool, String) {
    let u = c.sigma().unit_char();
    let (re, im) = (c.re(), c.im());
    if im.is_zero() {
        let neg = re.is_negative();
        let abs = re.abs();
        if abs.is_one() && has_factors {
            (neg, String::new())
        } else {
            (neg, abs.to_string())
        }
    } else if re.is_zero() {
        let neg = im.is_negative();
        let abs = im.abs();
        if abs.is_one() {
            (neg, u.to_string())
        } else {
            (neg, format!("{abs}*{u}"))
        }
    } else {
        let (sign, abs_im) = if im.is_negative() {
            ('-', -im.clone())
        } else {
            ('+', im.clone())
        };
        let im_text = if abs_im.is_one() {
            u.to_string()
        } else {
            format!("{abs_im}*{u}")
        };
        (false, format!("({re} {sign} {im_text})"))
    }
}

/// Graded lexicographic: higher total degree first, then larger exponent
/// vectors (q before p), then ascending powers of `h`.
fn term_order(a: &(Vec<u32>, u32), b: &(Vec<u32>, u32)) -> Ordering {
    let da: u32 = a.0.iter().sum();
    let db: u32 = b.0.iter().sum();
    db.cmp(&da)
        .then_with(|| b.0.cmp(&a.0))
        .then_with(|| a.1.cmp(&b.1))
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.dof;
        let mut flat: Vec<((Vec<u32>, u32), &Binarion)> = Vec::new();
        for (e, c) in &self.terms {
            for (d, x) in c.terms() {
                flat.push(((e.clone(), d), x));
            }
        }
        if flat.is_empty() {
            return write!(f, "0");
        }
        flat.sort_by(|a, b| term_order(&a.0, &b.0));
        for (n, ((exps, hdeg), c)) in flat.iter().enumerate() {
            let mut factors = Vec::new();
            if *hdeg > 0 {
                factors.push(power("h", *hdeg));
            }
            for i in 0..k {
                if exps[i] > 0 {
                    factors.push(power(&var_name('q', i, k), exps[i]));
                }
            }
            for i in 0..k {
                if exps[k + i] > 0 {
                    factors.push(power(&var_name('p', i, k), exps[k + i]));
                }
            }
            let (neg, coeff) = render_coeff(c, !factors.is_empty());
            let mut body = Vec::new();
            if !coeff.is_empty() {
                body.push(coeff);
            }
            body.extend(factors);
            let body = body.join("*");
            match (n, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", PolySymbol::from_hpoly(1, self.clone()))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Q(usize),
    P(usize),
    H,
    Unit,
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Num(text.parse().expect("digits"))));
            continue;
        }
        match c {
            'q' | 'p' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let index = if start == i {
                    1
                } else {
                    let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
                    text.parse::<usize>()
                        .map_err(|_| Error::parse(pos, "bad variable index"))?
                };
                if index == 0 {
                    return Err(Error::parse(pos, "variable indices start at 1"));
                }
                out.push((
                    pos,
                    if c == 'q' {
                        Tok::Q(index - 1)
                    } else {
                        Tok::P(index - 1)
                    },
                ));
                continue;
            }
            'h' => out.push((pos, Tok::H)),
            'i' | 'j' => out.push((pos, Tok::Unit)),
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => out.push((pos, Tok::Op(c))),
            '·' => out.push((pos, Tok::Op('*'))),
            other => return Err(Error::parse(pos, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    dof: usize,
    sigma: Sigma,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<PolySymbol> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.at += 1;
            let rhs = self.term()?;
            acc = if c == '+' {
                acc.add(&rhs)?
            } else {
                acc.sub(&rhs)?
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PolySymbol> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            let pos = self.pos();
            self.at += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                acc.mul(&rhs)?
            } else {
                let inv = constant_of(&rhs)
                    .ok_or_else(|| Error::parse(pos, "division only by constants"))?
                    .invert()
                    .map_err(|e| Error::parse(pos, e.to_string()))?;
                acc.scale(&inv)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PolySymbol> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.at += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<PolySymbol> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.at += 1;
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.at += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::parse(pos, "exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::parse(pos, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PolySymbol> {
        let pos = self.pos();
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::parse(pos, "unexpected end of input"))?;
        self.at += 1;
        let (k, s) = (self.dof, self.sigma);
        match tok {
            Tok::Num(n) => Ok(PolySymbol::constant(
                k,
                Binarion::real(Rational::from_integer(n), s),
            )),
            Tok::Q(i) => PolySymbol::q(k, i, s),
            Tok::P(i) => PolySymbol::p(k, i, s),
            Tok::H => Ok(PolySymbol::planck(k, s)),
            Tok::Unit => Ok(PolySymbol::constant(k, Binarion::unit(s))),
            Tok::Op('(') => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.at += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::parse(self.pos(), "expected `)`")),
                }
            }
            Tok::Op(c) => Err(Error::parse(pos, format!("unexpected `{c}`"))),
        }
    }
}

fn constant_of(s: &PolySymbol) -> Option<Binarion> {
    match s.terms.len() {
        0 => Some(Binarion::zero(s.sigma)),
        1 => {
            let (e, c) = s.terms.iter().next()?;
            if e.iter().all(|x| *x == 0) && c.degree() == Some(0) {
                Some(c.coeff(0))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Parses an expression; `dof` defaults to the largest variable index used.
pub fn parse_symbol(src: &str, sigma: Sigma, dof: Option<usize>) -> Result<PolySymbol> {
    let toks = tokenize(src)?;
    let used = toks
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::Q(i) | Tok::P(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    let dof = match dof {
        Some(d) if d < used => {
            return Err(Error::IndexOutOfRange {
                index: used - 1,
                dof: d,
            })
        }
        Some(d) => d,
        None => used,
    };
    if toks.is_empty() {
        return Err(Error::parse(0, "empty expression"));
    }
    let mut parser = Parser {
        toks,
        at: 0,
        end: src.len(),
        dof,
        sigma,
    };
    let out = parser.expr()?;
    if parser.at != parser.toks.len() {
        return Err(Error::parse(parser.pos(), "trailing input"));
    }
    Ok(out)
}

impl PolySymbol {
    pub fn parse(src: &str, sigma: Sigma) -> Result<Self> {
        parse_symbol(src, sigma, None)
    }
}
