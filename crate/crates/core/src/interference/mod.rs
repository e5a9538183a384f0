//! Interference terms in the law of total probability for two dichotomous
//! observables.
//!
//! `P(b_j) = Σᵢ P(b_j|aᵢ)P(aᵢ) + 2λ_j √(Πᵢ P(b_j|aᵢ)P(aᵢ))` with
//! `λ = cos θ` (trigonometric) or `λ = ±cosh θ` (hyperbolic).

mod csv_input;

pub use csv_input::{classify_csv, classify_csv_str, CsvRow};

use serde::{Serialize, Serializer};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::{exact_sqrt, from_f64, round_sig, to_f64, Rational, Sigma, FLOAT_TOLERANCE};

/// How probabilities were supplied: exactly, or as floats checked to within
/// [`FLOAT_TOLERANCE`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DichotomousContext {
    pub p_a: [Rational; 2],
    /// `cond[j][i] = P(b = b_j | a = a_i)`.
    pub cond: [[Rational; 2]; 2],
    pub observed: [Rational; 2],
    pub mode: Mode,
}

fn check_unit_interval(name: &str, x: &Rational) -> Result<()> {
    if x.is_negative() || x > &Rational::one() {
        return Err(Error::Validation(format!("{name} = {x} is outside [0, 1]")));
    }
    Ok(())
}

fn check_sum(name: &str, a: &Rational, b: &Rational, mode: Mode) -> Result<()> {
    let s = a + b;
    let ok = match mode {
        Mode::Exact => s.is_one(),
        Mode::Float => (to_f64(&s) - 1.0).abs() <= FLOAT_TOLERANCE,
    };
    if !ok {
        return Err(Error::Validation(format!(
            "{name} sums to {}, not 1",
            to_f64(&s)
        )));
    }
    Ok(())
}

impl DichotomousContext {
    pub fn new(
        p_a: [Rational; 2],
        cond: [[Rational; 2]; 2],
        observed: [Rational; 2],
        mode: Mode,
    ) -> Result<Self> {
        for i in 0..2 {
            check_unit_interval(&format!("P(a{})", i + 1), &p_a[i])?;
            check_unit_interval(&format!("P(b{})", i + 1), &observed[i])?;
            for j in 0..2 {
                check_unit_interval(&format!("P(b{}|a{})", j + 1, i + 1), &cond[j][i])?;
            }
        }
        check_sum("P(a)", &p_a[0], &p_a[1], mode)?;
        check_sum("P(b)", &observed[0], &observed[1], mode)?;
        for i in 0..2 {
            check_sum(&format!("P(b|a{})", i + 1), &cond[0][i], &cond[1][i], mode)?;
        }
        Ok(DichotomousContext {
            p_a,
            cond,
            observed,
            mode,
        })
    }

    /// Exact context from `P(a₁)`, `P(b₁|a₁)`, `P(b₁|a₂)` and `P(b₁)`.
    pub fn from_first_outcome(
        p_a1: Rational,
        b1_given_a1: Rational,
        b1_given_a2: Rational,
        observed_b1: Rational,
    ) -> Result<Self> {
        let one = Rational::one();
        for (name, x) in [
            ("P(a1)", &p_a1),
            ("P(b1|a1)", &b1_given_a1),
            ("P(b1|a2)", &b1_given_a2),
            ("P(b1)", &observed_b1),
        ] {
            check_unit_interval(name, x)?;
        }
        DichotomousContext::new(
            [p_a1.clone(), &one - &p_a1],
            [
                [b1_given_a1.clone(), b1_given_a2.clone()],
                [&one - &b1_given_a1, &one - &b1_given_a2],
            ],
            [observed_b1.clone(), &one - &observed_b1],
            Mode::Exact,
        )
    }

    pub fn classical_part(&self, j: usize) -> Rational {
        &self.cond[j][0] * &self.p_a[0] + &self.cond[j][1] * &self.p_a[1]
    }

    /// `D_j²`.
    pub fn d_squared(&self, j: usize) -> Rational {
        &self.cond[j][0] * &self.p_a[0] * &self.cond[j][1] * &self.p_a[1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Trigonometric,
    Hyperbolic,
    Degenerate,
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_sig(*v)),
        None => s.serialize_none(),
    }
}

fn ser_rat<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_rat<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Admissible `cosh θ` for a hyperbolic interference term at one outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaRange {
    #[serde(serialize_with = "ser_f64")]
    pub cosh_lower: f64,
    #[serde(serialize_with = "ser_f64")]
    pub cosh_upper: f64,
    #[serde(serialize_with = "ser_rat")]
    pub cosh_lower_sq: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub cosh_upper_sq: Rational,
    pub empty: bool,
}

impl ThetaRange {
    fn empty() -> Self {
        ThetaRange {
            cosh_lower: 1.0,
            cosh_upper: 0.0,
            cosh_lower_sq: Rational::one(),
            cosh_upper_sq: Rational::zero(),
            empty: true,
        }
    }

    /// Whether `cosh θ = c` lies in the range, compared through squares.
    pub fn contains_sq(&self, c_sq: &Rational) -> bool {
        !self.empty && c_sq >= &self.cosh_lower_sq && c_sq <= &self.cosh_upper_sq
    }
}

/// Per-outcome bounds on `cosh θ` that keep both observed probabilities in
/// `[0, 1]` and the table normalized: `cosh θ_j ≤ min(c_j, 1 − c_j)/(2D_j)`
/// and `cosh θ_j ≥ max(1, D_other/D_j)`, since the other outcome needs
/// `cosh θ_other = D_j cosh θ_j / D_other ≥ 1`.
pub fn theta_range(p_a: &[Rational; 2], cond: &[[Rational; 2]; 2]) -> [ThetaRange; 2] {
    let one = Rational::one();
    let c: Vec<Rational> = (0..2)
        .map(|j| &cond[j][0] * &p_a[0] + &cond[j][1] * &p_a[1])
        .collect();
    let d2: Vec<Rational> = (0..2)
        .map(|j| &cond[j][0] * &p_a[0] * &cond[j][1] * &p_a[1])
        .collect();
    let range = |j: usize| {
        let other = 1 - j;
        if d2[j].is_zero() || d2[other].is_zero() {
            return ThetaRange::empty();
        }
        let m = std::cmp::min(c[j].clone(), &one - &c[j]);
        let upper_sq = &m * &m / (Rational::from_integer(4.into()) * &d2[j]);
        let lower_sq = std::cmp::max(one.clone(), &d2[other] / &d2[j]);
        ThetaRange {
            cosh_lower: to_f64(&lower_sq).sqrt(),
            cosh_upper: to_f64(&upper_sq).sqrt(),
            empty: lower_sq > upper_sq,
            cosh_lower_sq: lower_sq,
            cosh_upper_sq: upper_sq,
        }
    };
    [range(0), range(1)]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeReport {
    pub outcome: usize,
    #[serde(serialize_with = "ser_rat")]
    pub observed: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub classical_part: Rational,
    /// `(observed − classical)/2 = λ·D`.
    #[serde(serialize_with = "ser_rat")]
    pub interference: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub geometric_mean_sq: Rational,
    #[serde(serialize_with = "ser_f64")]
    pub geometric_mean: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    pub lambda: Option<f64>,
    /// `λ` as a rational when `D²` is a perfect square.
    #[serde(serialize_with = "ser_opt_rat")]
    pub lambda_exact: Option<Rational>,
    pub regime: Regime,
    /// `±1` in the hyperbolic regime.
    pub sign: Option<i8>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub theta: Option<f64>,
    pub theta_range: ThetaRange,
    /// For hyperbolic outcomes: whether `cosh θ` lies in `theta_range`.
    pub admissible: Option<bool>,
}

impl OutcomeReport {
    /// `observed = classical + 2λD`, checked exactly when `λ` is rational.
    pub fn reconstructs(&self) -> bool {
        match &self.lambda_exact {
            Some(l) => {
                let d = exact_sqrt(&self.geometric_mean_sq).expect("perfect square");
                self.observed == &self.classical_part + Rational::from_integer(2.into()) * l * d
            }
            None => {
                self.observed
                    == &self.classical_part + Rational::from_integer(2.into()) * &self.interference
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterferenceReport {
    pub mode: Mode,
    pub outcomes: [OutcomeReport; 2],
    /// `Σ_j λ_j D_j`, zero for a normalized table.
    #[serde(serialize_with = "ser_f64")]
    pub normalization_residual: f64,
    pub normalization_holds: bool,
    /// All interference terms vanish: the classical law holds.
    pub classical: bool,
}

pub fn classify(ctx: &DichotomousContext) -> InterferenceReport {
    let ranges = theta_range(&ctx.p_a, &ctx.cond);
    let two = Rational::from_integer(2.into());
    let outcomes: Vec<OutcomeReport> = (0..2)
        .map(|j| {
            let observed = ctx.observed[j].clone();
            let classical_part = ctx.classical_part(j);
            let interference = (&observed - &classical_part) / &two;
            let d2 = ctx.d_squared(j);
            let range = ranges[j].clone();
            let mut report = OutcomeReport {
                outcome: j + 1,
                geometric_mean: to_f64(&d2).sqrt(),
                observed,
                classical_part,
                interference: interference.clone(),
                geometric_mean_sq: d2.clone(),
                lambda: None,
                lambda_exact: None,
                regime: Regime::Degenerate,
                sign: None,
                theta: None,
                theta_range: range,
                admissible: None,
            };
            if d2.is_zero() {
                return report;
            }
            let i2 = &interference * &interference;
            let lambda_sq = &i2 / &d2;
            let sign = if interference.is_negative() {
                -1.0
            } else {
                1.0
            };
            let lambda = sign * to_f64(&lambda_sq).sqrt();
            report.lambda = Some(lambda);
            report.lambda_exact = exact_sqrt(&d2).map(|d| &interference / d);
            if i2 <= d2 {
                report.regime = Regime::Trigonometric;
                report.theta = Some(lambda.clamp(-1.0, 1.0).acos());
            } else {
                report.regime = Regime::Hyperbolic;
                report.sign = Some(sign as i8);
                report.theta = Some(lambda.abs().acosh());
                report.admissible = Some(report.theta_range.contains_sq(&lambda_sq));
            }
            report
        })
        .collect();
    let residual = to_f64(&(&outcomes[0].interference + &outcomes[1].interference));
    let normalization_holds = match ctx.mode {
        Mode::Exact => residual == 0.0,
        Mode::Float => residual.abs() <= FLOAT_TOLERANCE,
    };
    let classical = outcomes.iter().all(|o| o.interference.is_zero());
    let [o1, o2]: [OutcomeReport; 2] = outcomes.try_into().expect("two outcomes");
    InterferenceReport {
        mode: ctx.mode,
        outcomes: [o1, o2],
        normalization_residual: residual,
        normalization_holds,
        classical,
    }
}

/// `Σᵢ signsᵢ · magnitudesᵢ · e^{u·phasesᵢ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Amplitude2 {
    pub magnitudes: [f64; 2],
    pub phases: [f64; 2],
    pub sigma: Sigma,
    pub signs: [i8; 2],
}

impl Amplitude2 {
    pub fn new(
        magnitudes: [f64; 2],
        phases: [f64; 2],
        sigma: Sigma,
        signs: [i8; 2],
    ) -> Result<Self> {
        if magnitudes.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidArgument(
                "magnitudes must be finite and nonnegative".into(),
            ));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("phases must be finite".into()));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidArgument("signs must be ±1".into()));
        }
        if sigma == Sigma::Complex && signs != [1, 1] {
            return Err(Error::InvalidArgument(
                "signs apply to hyperbolic amplitudes only".into(),
            ));
        }
        Ok(Amplitude2 {
            magnitudes,
            phases,
            sigma,
            signs,
        })
    }

    /// `|z|² = z z̄ = A² + B² + 2 s₁s₂ AB · Re e^{u(ξ₁−ξ₂)}`, which is negative
    /// for some hyperbolic amplitudes.
    pub fn born(&self) -> f64 {
        let [a, b] = self.magnitudes;
        let delta = self.phases[0] - self.phases[1];
        let re = match self.sigma {
            Sigma::Complex => delta.cos(),
            Sigma::Hyperbolic => delta.cosh(),
        };
        let s = f64::from(self.signs[0] * self.signs[1]);
        a * a + b * b + 2.0 * s * a * b * re
    }
}

/// Probability table produced by two amplitudes, one per outcome `b_j`, with
/// `magnitudesᵢ = √(P(aᵢ) P(b_j|aᵢ))`.
pub fn forward(
    amp_b1: &Amplitude2,
    amp_b2: &Amplitude2,
) -> Result<(DichotomousContext, InterferenceReport)> {
    amp_b1.sigma.ensure(amp_b2.sigma)?;
    let amps = [amp_b1, amp_b2];
    let mut observed = [0.0; 2];
    for (j, amp) in amps.iter().enumerate() {
        let p = amp.born();
        if p < -FLOAT_TOLERANCE {
            return Err(Error::InvalidState {
                outcome: j + 1,
                value: p,
                bound: "P(b) >= 0".into(),
            });
        }
        if p > 1.0 + FLOAT_TOLERANCE {
            return Err(Error::InvalidState {
                outcome: j + 1,
                value: p,
                bound: "P(b) <= 1".into(),
            });
        }
        observed[j] = p.clamp(0.0, 1.0);
    }
    let total = observed[0] + observed[1];
    if (total - 1.0).abs() > FLOAT_TOLERANCE {
        return Err(Error::InvalidState {
            outcome: 0,
            value: total,
            bound: "P(b1) + P(b2) = 1".into(),
        });
    }
    let sq = |j: usize, i: usize| amps[j].magnitudes[i] * amps[j].magnitudes[i];
    let p_a = [sq(0, 0) + sq(1, 0), sq(0, 1) + sq(1, 1)];
    if p_a.contains(&0.0) {
        return Err(Error::InvalidState {
            outcome: 0,
            value: 0.0,
            bound: "P(a) > 0".into(),
        });
    }
    let r = |x: f64| from_f64(x);
    let ctx = DichotomousContext::new(
        [r(p_a[0])?, r(p_a[1])?],
        [
            [r(sq(0, 0) / p_a[0])?, r(sq(0, 1) / p_a[1])?],
            [r(sq(1, 0) / p_a[0])?, r(sq(1, 1) / p_a[1])?],
        ],
        [r(observed[0])?, r(observed[1])?],
        Mode::Float,
    )
    .map_err(|e| Error::InvalidState {
        outcome: 0,
        value: total,
        bound: e.to_string(),
    })?;
    let report = classify(&ctx);
    Ok((ctx, report))
}
