//! Deterministic property checks over seeded random inputs.
//!
//! Each criterion draws from its own generator stream, so results depend only
//! on the seed. Reports carry no timings and serialize byte-identically.

use serde::Serialize;

use crate::gen::Gen;
use crate::interference::{classify, forward, DichotomousContext, Regime};
use crate::pdo::{compose_check, eigen_check, Symbol};
use crate::scalars::{int, rat, Binarion, Rational, Sigma};
use crate::superalg::{annihilator_witness, GrassmannG};
use crate::symbols::PolySymbol;
use crate::ultra::{star_distributional, ExpPoly, Ultradistribution};

/// How many failure messages a criterion keeps.
const MAX_MESSAGES: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub failures: u64,
    pub messages: Vec<String>,
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    messages: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.messages.len() < MAX_MESSAGES {
                self.messages.push(describe());
            }
        }
    }

    fn result<T, E: std::fmt::Display>(
        &mut self,
        r: std::result::Result<T, E>,
        what: &str,
    ) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{what}: {e}"));
                None
            }
        }
    }

    fn finish(self, id: u32, name: &str) -> CriterionResult {
        CriterionResult {
            id,
            name: name.to_string(),
            passed: self.failures == 0 && self.cases > 0,
            cases: self.cases,
            failures: self.failures,
            messages: self.messages,
        }
    }
}

fn stream(seed: u64, id: u32) -> Gen {
    Gen::new(seed ^ u64::from(id).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub const CRITERIA: [(u32, &str); 9] = [
    (1, "canonical commutation relation"),
    (2, "classical limit of the scaled Moyal bracket"),
    (3, "star product associativity"),
    (4, "operator composition matches the star product"),
    (5, "polynomial and distributional star products agree"),
    (6, "Fourier identities for point-supported distributions"),
    (7, "plane-wave eigenrelation"),
    (8, "interference round trip and worked examples"),
    (9, "Grassmann supercommutativity and odd annihilators"),
];

pub fn run_criterion(id: u32, seed: u64) -> Option<CriterionResult> {
    let mut g = stream(seed, id);
    let (_, name) = CRITERIA.iter().find(|(i, _)| *i == id)?;
    let tally = match id {
        1 => commutation(),
        2 => classical_limit(&mut g),
        3 => associativity(&mut g),
        4 => composition(&mut g),
        5 => two_path_star(&mut g),
        6 => fourier_identities(&mut g),
        7 => eigenrelation(&mut g),
        8 => interference_round_trip(&mut g),
        9 => grassmann(&mut g),
        _ => return None,
    };
    Some(tally.finish(id, name))
}

fn commutation() -> Tally {
    let mut t = Tally::default();
    for (sigma, expected) in [(Sigma::Hyperbolic, "-h*j"), (Sigma::Complex, "i*h")] {
        let q = PolySymbol::q(1, 0, sigma).expect("q");
        let p = PolySymbol::p(1, 0, sigma).expect("p");
        let want = PolySymbol::parse(expected, sigma).expect("literal");
        if let Some(got) = t.result(q.moyal_bracket(&p), "moyal bracket") {
            t.check(got == want, || {
                format!("σ={sigma}: [q,p] = {got}, expected {want}")
            });
        }
    }
    t
}

fn classical_limit(g: &mut Gen) -> Tally {
    let mut t = Tally::default();
    for sigma in Sigma::BOTH {
        for _ in 0..200 {
            let k = g.range(1, 2) as usize;
            let a = g.poly_symbol(k, sigma, 5, 0, 4);
            let b = g.poly_symbol(k, sigma, 5, 0, 4);
            let (Some(s), Some(pb)) = (
                t.result(a.scaled_bracket(&b), "scaled bracket"),
                t.result(a.poisson_bracket(&b), "poisson bracket"),
            ) else {
                continue;
            };
            t.check(s.h_constant_term() == pb, || format!("a = {a}, b = {b}"));
        }
    }
    t
}

fn associativity(g: &mut Gen) -> Tally {
    let mut t = Tally::default();
    for sigma in Sigma::BOTH {
        for _ in 0..200 {
            let k = g.range(1, 2) as usize;
            let [a, b, c] = [0, 1, 2].map(|_| g.poly_symbol(k, sigma, 4, 1, 4));
            let left = a.star(&b).and_then(|ab| ab.star(&c));
            let right = b.star(&c).and_then(|bc| a.star(&bc));
            if let (Some(l), Some(r)) = (t.result(left, "star"), t.result(right, "star")) {
                t.check(l == r, || format!("a = {a}, b = {b}, c = {c}"));
            }
        }
    }
    t
}

fn h_choice(g: &mut Gen) -> Rational {
    [int(1), rat(1, 3), rat(7, 2)][g.below(3) as usize].clone()
}

fn composition(g: &mut Gen) -> Tally {
    let mut t = Tally::default();
    for sigma in Sigma::BOTH {
        for _ in 0..200 {
            let k = g.range(1, 2) as usize;
            let h = h_choice(g);
            let a = Symbol::Poly(g.poly_symbol(k, sigma, 4, 1, 4));
            let b = Symbol::Poly(g.poly_symbol(k, sigma, 4, 1, 4));
            let phi = g.wave(k, sigma, &h);
            let check = compose_check(&a, &b, &phi, &h);
            t.check(check.holds, || {
                format!(
                    "a = {a}, b = {b}, φ = {phi}: {}",
                    check.error.clone().unwrap_or_default()
                )
            });
        }
    }
    t
}

fn positive_rational(g: &mut Gen) -> Rational {
    rat(i64::from(g.range(1, 9)), i64::from(g.range(1, 5)))
}

fn two_path_star(g: &mut Gen) -> Tally {
    let mut t = Tally::default();
    for sigma in Sigma::BOTH {
        for _ in 0..100 {
            let k = g.range(1, 2) as usize;
            let h = positive_rational(g);
            let a = g.poly_symbol(k, sigma, 4, 1, 4);
            let b = g.poly_symbol(k, sigma, 4, 1, 4);
            let Some(ab) = t.result(a.star(&b), "star") else {
                continue;
            };
            let expected = ExpPoly::from_symbol(&ab, &h);
            let got = star_distributional(
                &ExpPoly::from_symbol(&a, &h),
                &ExpPoly::from_symbol(&b, &h),
                &h,
            );
            if let Some(got) = t.result(got, "distributional star") {
                t.check(got == expected, || format!("a = {a}, b = {b}, h = {h}"));
            }
        }
    }
    t
}

fn fourier_identities(g: &mut Gen) -> Tally {
    let mut t = Tally::default();
    for sigma in Sigma::BOTH {
        let u = Binarion::unit(sigma);
        let neg_uy = ExpPoly::variable(1, 0, sigma)
            .expect("y")
            .scale(&-u.clone())
            .expect("σ");
        for n in 0..=6 {
            let d = Ultradistribution::delta(vec![int(0)], vec![n], sigma).expect("delta");
            t.check(d.fourier() == neg_uy.pow(n), || {
                format!("F(δ^({n})) at σ={sigma}")
            });
        }
        for _ in 0..100 {
            let dim = g.range(1, 2) as usize;
            let lam = g.atoms(dim, sigma, 6, 4);
            let i = g.below(dim as u32) as usize;
            let n = g.range(0, 4);
            let mut exps = vec![0; dim];
            exps[i] = n;
            let mut lhs = lam.fourier();
            let mut d = lam.clone();
            for _ in 0..n {
                lhs = lhs.derivative(i).expect("index");
                d = d.derivative(i).expect("index");
            }
            let rhs = lam
                .mul_monomial(&exps)
                .expect("dims")
                .fourier()
                .scale(&u.pow(n))
                .expect("σ");
            t.check(lhs == rhs, || {
                format!("dⁿF(λ) = uⁿF(xⁿλ) for λ = {lam}, i = {i}, n = {n}")
            });
            let factor = ExpPoly::variable(dim, i, sigma)
                .expect("y")
                .scale(&-u.clone())
                .expect("σ")
                .pow(n);
            let rhs = factor.mul(&lam.fourier()).expect("dims");
            t.check(d.fourier() == rhs, || {
                format!("F(∂ⁿλ) = (−uy)ⁿF(λ) for λ = {lam}, i = {i}, n = {n}")
            });
        }
    }
    t
}

fn eigenrelation(g: &mut Gen) -> Tally {
    let mut t = Tally::default();
    for sigma in Sigma::BOTH {
        for _ in 0..100 {
            let k = g.range(1, 2) as usize;
            let h = h_choice(g);
            let a = Symbol::Poly(g.poly_symbol(k, sigma, 4, 1, 4));
            let p0: Vec<Rational> = (0..k).map(|_| g.rational()).collect();
            if let Some(ok) = t.result(eigen_check(&a, &p0, &h), "eigen check") {
                t.check(ok, || format!("a = {a}, p0 = {p0:?}, h = {h}"));
            }
        }
    }
    t
}

fn interference_round_trip(g: &mut Gen) -> Tally {
    let mut t = Tally::default();
    for sigma in Sigma::BOTH {
        for _ in 0..500 {
            let case = g.amplitudes(sigma);
            let Some((_, r)) = t.result(forward(&case.amps[0], &case.amps[1]), "forward") else {
                continue;
            };
            let mut ok = r.normalization_holds;
            for (j, o) in r.outcomes.iter().enumerate() {
                let lambda = o.lambda.unwrap_or(f64::NAN);
                ok &= o.regime == case.regime;
                ok &= (o.theta.unwrap_or(f64::NAN) - case.theta[j]).abs() < 1e-12;
                ok &= match sigma {
                    Sigma::Complex => lambda.abs() <= 1.0,
                    Sigma::Hyperbolic => lambda.abs() >= 1.0 && o.sign == Some(case.signs[j]),
                };
            }
            t.check(ok, || format!("σ={sigma}: amplitudes {:?}", case.amps));
        }
    }
    let examples: [(Rational, Rational, Rational, Rational, Rational, Regime); 3] = [
        (
            rat(1, 2),
            rat(1, 2),
            rat(1, 2),
            rat(1, 2),
            int(0),
            Regime::Trigonometric,
        ),
        (
            rat(1, 2),
            rat(1, 2),
            rat(1, 2),
            rat(9, 10),
            rat(4, 5),
            Regime::Trigonometric,
        ),
        (
            rat(1, 2),
            rat(9, 10),
            rat(1, 10),
            rat(19, 20),
            rat(3, 2),
            Regime::Hyperbolic,
        ),
    ];
    for (pa, c1, c2, obs, lambda, regime) in examples {
        let Some(ctx) = t.result(
            DichotomousContext::from_first_outcome(pa, c1, c2, obs),
            "worked example",
        ) else {
            continue;
        };
        let r = classify(&ctx);
        let o = &r.outcomes[0];
        t.check(
            o.lambda_exact.as_ref() == Some(&lambda) && o.regime == regime && r.normalization_holds,
            || format!("worked example λ = {lambda}: got {:?}", o.lambda_exact),
        );
    }
    t
}

fn grassmann(g: &mut Gen) -> Tally {
    let mut t = Tally::default();
    for sigma in Sigma::BOTH {
        for _ in 0..200 {
            let n = g.range(1, 6);
            let a = g.grassmann(n, sigma, 6);
            let b = g.grassmann(n, sigma, 6);
            if let Some(c) = t.result(a.supercommutator(&b), "supercommutator") {
                t.check(c.is_zero(), || format!("[{a}, {b}] = {c}"));
            }
            let (oa, ob) = (g.coin(), g.coin());
            let x = g.grassmann_homogeneous(n, sigma, oa, 5);
            let y = g.grassmann_homogeneous(n, sigma, ob, 5);
            let xy = x.gproduct(&y).expect("same algebra");
            let yx = y.gproduct(&x).expect("same algebra");
            let expected = if oa && ob { yx.neg() } else { yx };
            t.check(xy == expected, || format!("x = {x}, y = {y}"));
        }
        for n in 1..=8 {
            if let Some((w, report)) = t.result(annihilator_witness(n, sigma), "witness") {
                let top = GrassmannG::top(n, sigma).expect("n ≤ 8");
                t.check(report.nonzero && report.annihilates && w == top, || {
                    format!("θ1⋯θ{n} fails to annihilate the odd part at σ={sigma}")
                });
            }
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

impl SelftestReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report json")
    }
}

pub fn run_selftest(seed: u64) -> SelftestReport {
    let criteria: Vec<CriterionResult> = CRITERIA
        .iter()
        .filter_map(|(id, _)| run_criterion(*id, seed))
        .collect();
    SelftestReport {
        seed,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}
