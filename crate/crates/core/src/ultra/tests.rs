use super::*;
use crate::scalars::{int, rat, Sigma};
use crate::symbols::{HPoly, PolySymbol};
use proptest::prelude::*;

const H: Sigma = Sigma::Hyperbolic;
const C: Sigma = Sigma::Complex;

fn y(sigma: Sigma) -> ExpPoly {
    ExpPoly::variable(1, 0, sigma).unwrap()
}

fn sym(src: &str, sigma: Sigma) -> ExpPoly {
    ExpPoly::from_symbol(&PolySymbol::parse(src, sigma).unwrap(), &int(0))
}

#[test]
fn pairing_examples() {
    for sigma in Sigma::BOTH {
        let d0 = Ultradistribution::delta(vec![int(0)], vec![0], sigma).unwrap();
        let d1 = d0.derivative(0).unwrap();
        let f = y(sigma)
            .mul(&y(sigma))
            .unwrap()
            .add(&ExpPoly::one(1, sigma))
            .unwrap();
        assert_eq!(
            d0.pair(&f).unwrap(),
            CharSum::from_binarion(Binarion::one(sigma))
        );
        assert!(d1.pair(&y(sigma).pow(2)).unwrap().is_zero());
        assert_eq!(
            d1.pair(&y(sigma)).unwrap(),
            CharSum::from_binarion(Binarion::from_ints(-1, 0, sigma))
        );
    }
}

#[test]
fn fourier_of_delta_derivatives() {
    for sigma in Sigma::BOTH {
        let neg_uy = y(sigma).scale(&-Binarion::unit(sigma)).unwrap();
        for n in 0..=6u32 {
            let d = Ultradistribution::delta(vec![int(0)], vec![n], sigma).unwrap();
            assert_eq!(d.fourier(), neg_uy.pow(n));
        }
        let shifted = Ultradistribution::delta(vec![int(1)], vec![0], sigma).unwrap();
        assert_eq!(shifted.fourier(), ExpPoly::character(vec![int(1)], sigma));
    }
}

#[test]
fn fourier_matches_pairing_with_character() {
    // F(λ)(y₀) = (λ, x ↦ e^{u y₀ x}) at rational y₀.
    for sigma in Sigma::BOTH {
        let mut lam = Ultradistribution::zero(1, sigma);
        for (loc, n, w) in [
            (rat(1, 2), 0, (1, 2)),
            (int(-2), 3, (0, 1)),
            (int(0), 2, (5, -1)),
        ] {
            let key = AtomKey::at(vec![loc], vec![n]);
            lam = lam
                .add(
                    &Ultradistribution::atom(1, key, Binarion::from_ints(w.0, w.1, sigma)).unwrap(),
                )
                .unwrap();
        }
        for y0 in [int(0), rat(3, 2), int(-1)] {
            let lhs = lam.fourier().evaluate(std::slice::from_ref(&y0)).unwrap();
            let rhs = lam.pair(&ExpPoly::character(vec![y0], sigma)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn proposition_one_examples() {
    for sigma in Sigma::BOTH {
        let u = Binarion::unit(sigma);
        let d0 = Ultradistribution::delta(vec![int(0)], vec![0], sigma).unwrap();
        let d1 = d0.derivative(0).unwrap();
        assert_eq!(d1.fourier(), y(sigma).scale(&-u.clone()).unwrap());
        // x·δ′ = −δ.
        let xd1 = d1.mul_monomial(&[1]).unwrap();
        assert_eq!(
            xd1.fourier(),
            ExpPoly::constant(1, Binarion::from_ints(-1, 0, sigma))
        );
        assert_eq!(d0.mul_monomial(&[0]).unwrap(), d0);
    }
}

#[test]
fn inverse_fourier_examples() {
    for sigma in Sigma::BOTH {
        let one = inverse_fourier_symbol(&sym("1", sigma));
        assert_eq!(
            one,
            Ultradistribution::delta(vec![int(0), int(0)], vec![0, 0], sigma).unwrap()
        );
        // q comes from δ′ in the p₁ slot with weight −1/u.
        let q = inverse_fourier_symbol(&sym("q", sigma));
        let expected = Ultradistribution::atom(
            2,
            AtomKey::at(vec![int(0), int(0)], vec![1, 0]),
            -Binarion::unit_inverse(sigma),
        )
        .unwrap();
        assert_eq!(q, expected);
        let ch = ExpPoly::character(vec![int(2), rat(-1, 3)], sigma);
        assert_eq!(
            inverse_fourier_symbol(&ch),
            Ultradistribution::delta(vec![int(2), rat(-1, 3)], vec![0, 0], sigma).unwrap()
        );
    }
}

#[test]
fn distributional_star_examples() {
    for sigma in Sigma::BOTH {
        let h = rat(3, 7);
        let (p, q) = (sym("p", sigma), sym("q", sigma));
        let expected = sym("q*p", sigma)
            .add(&ExpPoly::constant(
                2,
                Binarion::unit_inverse(sigma).scale(&h),
            ))
            .unwrap();
        assert_eq!(star_distributional(&p, &q, &h).unwrap(), expected);
        let b = sym("3*q^2*p - 2*p + 1/2", sigma);
        assert_eq!(
            star_distributional(&ExpPoly::one(2, sigma), &b, &h).unwrap(),
            b
        );

        let (a1, b1, a2, b2) = (int(1), rat(1, 2), int(-3), int(2));
        let c1 = ExpPoly::character(vec![a1.clone(), b1.clone()], sigma);
        let c2 = ExpPoly::character(vec![a2.clone(), b2.clone()], sigma);
        let expected = ExpPoly::character(vec![&a1 + &a2, &b1 + &b2], sigma)
            .mul(&ExpPoly::phase_constant(2, &h * &b1 * &a2, sigma))
            .unwrap();
        assert_eq!(star_distributional(&c1, &c2, &h).unwrap(), expected);
    }
}

#[test]
fn paley_wiener_examples() {
    for sigma in Sigma::BOTH {
        assert_eq!(
            paley_wiener_growth(&ExpPoly::one(1, sigma), 8).unwrap(),
            (1.0, 0.0)
        );
        let (c, r) = paley_wiener_growth(&ExpPoly::character(vec![int(1)], sigma), 8).unwrap();
        assert!((c - 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
        let (c, r) = paley_wiener_growth(&ExpPoly::character(vec![int(3)], sigma), 10).unwrap();
        assert!((c - 1.0).abs() < 1e-12 && (r - 3.0).abs() < 1e-9);
        // (−uy)³ has a single nonzero derivative at 0, of norm 6.
        let cubic = y(sigma).scale(&-Binarion::unit(sigma)).unwrap().pow(3);
        let (c, r) = paley_wiener_growth(&cubic, 5).unwrap();
        assert_eq!(c, 1.0);
        assert!((r - 6f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }
    assert!(paley_wiener_growth(&ExpPoly::one(2, H), 3).is_err());
}

#[test]
fn charsum_approximation() {
    let s = CharSum::term(int(1), Binarion::one(H)).add(&CharSum::term(int(-1), Binarion::one(H)));
    let v = s.approx();
    assert!((v.re - 2.0 * 1f64.cosh()).abs() < 1e-12 && v.im.abs() < 1e-12);
    let s = CharSum::term(int(1), Binarion::one(C));
    let v = s.approx();
    assert!((v.re - 1f64.cos()).abs() < 1e-12 && (v.im - 1f64.sin()).abs() < 1e-12);
}

#[test]
fn exppoly_shift_and_substitute() {
    for sigma in Sigma::BOTH {
        let f = y(sigma)
            .pow(2)
            .mul(&ExpPoly::character(vec![int(2)], sigma))
            .unwrap();
        let g = f.shift(&[int(1)]).unwrap();
        // (y+1)² e^{2u(y+1)}
        let expected = y(sigma)
            .add(&ExpPoly::one(1, sigma))
            .unwrap()
            .pow(2)
            .mul(&ExpPoly::character(vec![int(2)], sigma))
            .unwrap()
            .mul(&ExpPoly::phase_constant(1, int(2), sigma))
            .unwrap();
        assert_eq!(g, expected);
        let at = f.evaluate(&[int(3)]).unwrap();
        let sub = f
            .substitute(0, &int(3))
            .unwrap()
            .evaluate(&[int(0)])
            .unwrap();
        assert_eq!(at, sub);
    }
}

#[test]
fn json_round_trips() {
    let mut lam = Ultradistribution::delta(vec![rat(1, 2), int(0)], vec![2, 1], H).unwrap();
    lam = lam
        .add(
            &Ultradistribution::atom(
                2,
                AtomKey {
                    loc: vec![int(0), int(-1)],
                    order: vec![0, 0],
                    phase: rat(3, 4),
                },
                Binarion::from_ints(2, -5, H),
            )
            .unwrap(),
        )
        .unwrap();
    assert_eq!(Ultradistribution::from_json(&lam.to_json()).unwrap(), lam);
    let f = lam.fourier();
    assert_eq!(ExpPoly::from_json(&f.to_json()).unwrap(), f);
    let parsed = Ultradistribution::from_json(
        r#"{"sigma":1,"dim":1,"atoms":[{"loc":["0"],"order":[1],"weight":{"re":"1"}}]}"#,
    )
    .unwrap();
    assert_eq!(
        parsed,
        Ultradistribution::delta(vec![int(0)], vec![1], H).unwrap()
    );
    assert!(Ultradistribution::from_json(
        r#"{"sigma":1,"dim":2,"atoms":[{"loc":["0"],"order":[1],"weight":{"re":"1"}}]}"#
    )
    .is_err());
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn binarion(sigma: Sigma) -> impl Strategy<Value = Binarion> {
    (small_rational(), small_rational()).prop_map(move |(x, y)| Binarion::new(x, y, sigma))
}

fn sigma() -> impl Strategy<Value = Sigma> {
    prop_oneof![Just(C), Just(H)]
}

fn atoms(dim: usize, sigma: Sigma) -> impl Strategy<Value = Ultradistribution> {
    let atom = (
        prop::collection::vec(small_rational(), dim),
        prop::collection::vec(0u32..=4, dim),
        small_rational(),
        binarion(sigma),
    );
    prop::collection::vec(atom, 0..=6).prop_map(move |list| {
        list.into_iter().fold(
            Ultradistribution::zero(dim, sigma),
            |acc, (loc, order, ph, w)| {
                let key = AtomKey {
                    loc,
                    order,
                    phase: ph,
                };
                acc.add(&Ultradistribution::atom(dim, key, w).unwrap())
                    .unwrap()
            },
        )
    })
}

fn exppoly(dim: usize, sigma: Sigma) -> impl Strategy<Value = ExpPoly> {
    let term = (
        prop::collection::vec(0u32..=3, dim),
        prop::collection::vec(small_rational(), dim),
        small_rational(),
        binarion(sigma),
    );
    prop::collection::vec(term, 0..=5).prop_map(move |list| {
        list.into_iter()
            .fold(ExpPoly::zero(dim, sigma), |acc, (exps, freq, phase, c)| {
                acc.add(&ExpPoly::term(dim, ExpKey { freq, phase, exps }, c).unwrap())
                    .unwrap()
            })
    })
}

fn poly_symbol(dof: usize, sigma: Sigma, max_deg: u32) -> impl Strategy<Value = PolySymbol> {
    let monomial = prop::collection::vec(0..=max_deg, 2 * dof)
        .prop_filter_map("degree bound", move |e| {
            (e.iter().sum::<u32>() <= max_deg).then_some(e)
        });
    prop::collection::vec((monomial, binarion(sigma)), 0..=4).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(PolySymbol::zero(dof, sigma), |acc, (e, c)| {
                acc.add(&PolySymbol::monomial(dof, e, HPoly::constant(c)))
                    .unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn proposition_one_identities(
        (dim, lam, i, n) in (1usize..=2, sigma()).prop_flat_map(|(d, s)| (Just(d), atoms(d, s), 0..d, 0u32..=4))
    ) {
        let sigma = lam.sigma();
        let u = Binarion::unit(sigma);
        // dⁿ/dyⁿ F(λ) = uⁿ F(xⁿ λ)
        let mut lhs = lam.fourier();
        for _ in 0..n {
            lhs = lhs.derivative(i).unwrap();
        }
        let mut exps = vec![0; dim];
        exps[i] = n;
        let rhs = lam.mul_monomial(&exps).unwrap().fourier().scale(&u.pow(n)).unwrap();
        prop_assert_eq!(lhs, rhs);
        // F(∂ⁿλ) = (−u yᵢ)ⁿ F(λ)
        let mut d = lam.clone();
        for _ in 0..n {
            d = d.derivative(i).unwrap();
        }
        let factor = ExpPoly::variable(dim, i, sigma).unwrap().scale(&-u).unwrap().pow(n);
        prop_assert_eq!(d.fourier(), factor.mul(&lam.fourier()).unwrap());
    }

    #[test]
    fn fourier_inverts_on_exppolys(f in (1usize..=3, sigma()).prop_flat_map(|(d, s)| exppoly(d, s))) {
        prop_assert_eq!(inverse_fourier_symbol(&f).fourier(), f);
    }

    #[test]
    fn fourier_agrees_with_pairing(
        (lam, y0) in (1usize..=2, sigma()).prop_flat_map(|(d, s)| (atoms(d, s), prop::collection::vec(small_rational(), d)))
    ) {
        let lhs = lam.fourier().evaluate(&y0).unwrap();
        let rhs = lam.pair(&ExpPoly::character(y0, lam.sigma())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn distributional_star_matches_symbol_star(
        (a, b, h) in (1usize..=2, sigma()).prop_flat_map(|(k, s)| (poly_symbol(k, s, 4), poly_symbol(k, s, 4), small_rational()))
    ) {
        let expected = ExpPoly::from_symbol(&a.star(&b).unwrap(), &h);
        let got = star_distributional(&ExpPoly::from_symbol(&a, &h), &ExpPoly::from_symbol(&b, &h), &h).unwrap();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn character_star_is_associative(
        (chars, h) in sigma().prop_flat_map(|s| {
            (prop::collection::vec((prop::collection::vec(small_rational(), 2), binarion(s)), 3), small_rational())
        })
    ) {
        let c: Vec<ExpPoly> = chars
            .into_iter()
            .map(|(f, w)| ExpPoly::character(f, w.sigma()).scale(&w).unwrap())
            .collect();
        let left = star_distributional(&star_distributional(&c[0], &c[1], &h).unwrap(), &c[2], &h).unwrap();
        let right = star_distributional(&c[0], &star_distributional(&c[1], &c[2], &h).unwrap(), &h).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn mixed_exppoly_star_is_associative(
        (a, b, c, h) in sigma().prop_flat_map(|s| (exppoly(2, s), exppoly(2, s), exppoly(2, s), small_rational()))
    ) {
        let left = star_distributional(&star_distributional(&a, &b, &h).unwrap(), &c, &h).unwrap();
        let right = star_distributional(&a, &star_distributional(&b, &c, &h).unwrap(), &h).unwrap();
        prop_assert_eq!(left, right);
    }
}
