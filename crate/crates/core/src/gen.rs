//! Seeded random generators for the property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::interference::{theta_range, Amplitude2, Regime};
use crate::pdo::WaveFunction;
use crate::scalars::{from_f64, rat, Binarion, Rational, Sigma};
use crate::superalg::GrassmannG;
use crate::symbols::{HPoly, PolySymbol};
use crate::ultra::{AtomKey, ExpKey, ExpPoly, Ultradistribution};

/// Two amplitudes with the phase differences and regimes they encode.
#[derive(Clone, Debug)]
pub struct AmplitudeCase {
    pub amps: [Amplitude2; 2],
    pub theta: [f64; 2],
    pub regime: Regime,
    /// Sign of `λ_j` in the hyperbolic regime.
    pub signs: [i8; 2],
}

pub struct Gen {
    rng: ChaCha8Rng,
}

const MIN_PHASE: f64 = 0.05;
const MIN_MAGNITUDE: f64 = 0.1;

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn below(&mut self, n: u32) -> u32 {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: u32, hi: u32) -> u32 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn sigma(&mut self) -> Sigma {
        if self.coin() {
            Sigma::Hyperbolic
        } else {
            Sigma::Complex
        }
    }

    /// `n/d` with `|n| ≤ 6`, `1 ≤ d ≤ 4`.
    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-6..=6);
        let d = self.rng.gen_range(1..=4);
        rat(n, d)
    }

    pub fn binarion(&mut self, sigma: Sigma) -> Binarion {
        Binarion::new(self.rational(), self.rational(), sigma)
    }

    fn exponents(&mut self, len: usize, max_deg: u32) -> Vec<u32> {
        let total = self.range(0, max_deg);
        let mut e = vec![0; len];
        for _ in 0..total {
            e[self.below(len as u32) as usize] += 1;
        }
        e
    }

    /// Up to `max_terms` monomials of total degree `≤ max_deg` with
    /// coefficients of `h`-degree `≤ h_max`.
    pub fn poly_symbol(
        &mut self,
        dof: usize,
        sigma: Sigma,
        max_deg: u32,
        h_max: u32,
        max_terms: u32,
    ) -> PolySymbol {
        let n = self.range(1, max_terms);
        let mut out = PolySymbol::zero(dof, sigma);
        for _ in 0..n {
            let e = self.exponents(2 * dof, max_deg);
            let d = self.range(0, h_max);
            let c = HPoly::monomial(d, self.binarion(sigma));
            out = out
                .add(&PolySymbol::monomial(dof, e, c))
                .expect("same space");
        }
        out
    }

    pub fn exppoly(&mut self, dim: usize, sigma: Sigma, max_deg: u32, max_terms: u32) -> ExpPoly {
        let n = self.range(1, max_terms);
        let mut out = ExpPoly::zero(dim, sigma);
        for _ in 0..n {
            let key = ExpKey {
                freq: (0..dim).map(|_| self.rational()).collect(),
                phase: self.rational(),
                exps: self.exponents(dim, max_deg),
            };
            let c = self.binarion(sigma);
            out = out
                .add(&ExpPoly::term(dim, key, c).expect("dims"))
                .expect("same space");
        }
        out
    }

    pub fn atoms(
        &mut self,
        dim: usize,
        sigma: Sigma,
        max_atoms: u32,
        max_order: u32,
    ) -> Ultradistribution {
        let n = self.range(1, max_atoms);
        let mut out = Ultradistribution::zero(dim, sigma);
        for _ in 0..n {
            let key = AtomKey {
                loc: (0..dim).map(|_| self.rational()).collect(),
                order: (0..dim).map(|_| self.range(0, max_order)).collect(),
                phase: self.rational(),
            };
            let w = self.binarion(sigma);
            out = out
                .add(&Ultradistribution::atom(dim, key, w).expect("dims"))
                .expect("same space");
        }
        out
    }

    /// Sum of polynomial-times-plane-wave terms `c qⁿ e^{u⟨p₀,q⟩/h}`.
    pub fn wave(&mut self, dof: usize, sigma: Sigma, h: &Rational) -> WaveFunction {
        let n = self.range(1, 3);
        let mut psi = ExpPoly::zero(dof, sigma);
        for _ in 0..n {
            let key = ExpKey {
                freq: (0..dof).map(|_| self.rational() / h).collect(),
                phase: Rational::from_integer(0.into()),
                exps: self.exponents(dof, 2),
            };
            let c = self.binarion(sigma);
            psi = psi
                .add(&ExpPoly::term(dof, key, c).expect("dims"))
                .expect("same space");
        }
        WaveFunction::new(psi, h.clone()).expect("positive h")
    }

    pub fn grassmann(&mut self, n: u32, sigma: Sigma, max_terms: u32) -> GrassmannG {
        let terms = self.range(1, max_terms);
        let mut out = GrassmannG::zero(n, sigma);
        for _ in 0..terms {
            let mask = self.rng.gen_range(0..(1u64 << n));
            let c = self.binarion(sigma);
            out = out
                .add(&GrassmannG::monomial(n, mask, c).expect("mask fits"))
                .expect("same algebra");
        }
        out
    }

    /// A homogeneous element: every monomial has the given parity.
    pub fn grassmann_homogeneous(
        &mut self,
        n: u32,
        sigma: Sigma,
        odd: bool,
        max_terms: u32,
    ) -> GrassmannG {
        let terms = self.range(1, max_terms);
        let mut out = GrassmannG::zero(n, sigma);
        for _ in 0..terms {
            let mut mask = self.rng.gen_range(0..(1u64 << n));
            if (mask.count_ones() % 2 == 1) != odd {
                mask ^= 1 << self.below(n);
            }
            let c = self.binarion(sigma);
            out = out
                .add(&GrassmannG::monomial(n, mask, c).expect("mask fits"))
                .expect("same algebra");
        }
        out
    }

    /// Valid amplitudes for both outcomes whose table is normalized, with
    /// magnitudes at least 0.1 and phase differences away from the regime
    /// boundary (`θ ≥ 0.05`, and `θ ≤ π − 0.05` for σ = −1).
    pub fn amplitudes(&mut self, sigma: Sigma) -> AmplitudeCase {
        loop {
            if let Some(case) = self.try_amplitudes(sigma) {
                return case;
            }
        }
    }

    fn try_amplitudes(&mut self, sigma: Sigma) -> Option<AmplitudeCase> {
        let p1 = self.uniform(0.1, 0.9);
        let p_a = [p1, 1.0 - p1];
        let c = [self.uniform(0.1, 0.9), self.uniform(0.1, 0.9)];
        let cond = [[c[0], c[1]], [1.0 - c[0], 1.0 - c[1]]];
        let mag = |j: usize, i: usize| (p_a[i] * cond[j][i]).sqrt();
        let m = [[mag(0, 0), mag(0, 1)], [mag(1, 0), mag(1, 1)]];
        if m.iter().flatten().any(|x| *x < MIN_MAGNITUDE) {
            return None;
        }
        let d = [m[0][0] * m[0][1], m[1][0] * m[1][1]];
        let (theta, amp_signs, lambda_signs, regime) = match sigma {
            Sigma::Complex => {
                let t1 = self.uniform(MIN_PHASE, std::f64::consts::PI - MIN_PHASE);
                let cos2 = -d[0] * t1.cos() / d[1];
                if cos2.abs() > MIN_PHASE.cos() {
                    return None;
                }
                (
                    [t1, cos2.acos()],
                    [[1, 1], [1, 1]],
                    [1, 1],
                    Regime::Trigonometric,
                )
            }
            Sigma::Hyperbolic => {
                let r = |x: f64| from_f64(x).expect("finite");
                let ranges = theta_range(
                    &[r(p_a[0]), r(p_a[1])],
                    &[
                        [r(cond[0][0]), r(cond[0][1])],
                        [r(cond[1][0]), r(cond[1][1])],
                    ],
                );
                let range = &ranges[0];
                if range.empty {
                    return None;
                }
                let lo = range
                    .cosh_lower
                    .max(MIN_PHASE.cosh())
                    .max(MIN_PHASE.cosh() * d[1] / d[0]);
                let hi = range.cosh_upper * (1.0 - 1e-9);
                if lo >= hi {
                    return None;
                }
                let ch1 = self.uniform(lo, hi);
                let ch2 = d[0] * ch1 / d[1];
                let s: i8 = if self.coin() { 1 } else { -1 };
                (
                    [ch1.acosh(), ch2.acosh()],
                    [[1, s], [1, -s]],
                    [s, -s],
                    Regime::Hyperbolic,
                )
            }
        };
        let mut amps = Vec::with_capacity(2);
        for j in 0..2 {
            let xi1 = self.uniform(-1.0, 1.0);
            let delta = if self.coin() { theta[j] } else { -theta[j] };
            amps.push(Amplitude2::new(m[j], [xi1, xi1 - delta], sigma, amp_signs[j]).ok()?);
        }
        // The phase difference actually encoded after rounding.
        let theta = [0, 1].map(|j| (amps[j].phases[0] - amps[j].phases[1]).abs());
        Some(AmplitudeCase {
            amps: [amps[0].clone(), amps[1].clone()],
            theta,
            regime,
            signs: lambda_signs,
        })
    }
}
