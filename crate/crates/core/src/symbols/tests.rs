use super::*;
use crate::scalars::{int, rat};
use proptest::prelude::*;

const H: Sigma = Sigma::Hyperbolic;
const C: Sigma = Sigma::Complex;

fn s(src: &str, sigma: Sigma) -> PolySymbol {
    PolySymbol::parse(src, sigma).unwrap()
}

fn sk(src: &str, sigma: Sigma, dof: usize) -> PolySymbol {
    parse_symbol(src, sigma, Some(dof)).unwrap()
}

/// `σ·u·h` as a symbol.
fn sigma_u_h(sigma: Sigma) -> PolySymbol {
    PolySymbol::from_hpoly(1, HPoly::monomial(1, Binarion::unit_inverse(sigma)))
}

#[test]
fn star_worked_examples() {
    for sigma in Sigma::BOTH {
        let (q, p) = (s("q", sigma), s("p", sigma));
        assert_eq!(q.star(&p).unwrap(), s("q*p", sigma));
        let expected = s("p*q", sigma).add(&sigma_u_h(sigma)).unwrap();
        assert_eq!(p.star(&q).unwrap(), expected);
        let b = s("3*q^2*p - j*h*p + 1/2", sigma);
        assert_eq!(PolySymbol::one(1, sigma).star(&b).unwrap(), b);
        assert_eq!(b.star(&PolySymbol::one(1, sigma)).unwrap(), b);
    }
    assert_eq!(s("p", H).star(&s("q", H)).unwrap(), s("q*p + j*h", H));
    assert_eq!(s("p", C).star(&s("q", C)).unwrap(), s("q*p - i*h", C));
}

#[test]
fn moyal_worked_examples() {
    for sigma in Sigma::BOTH {
        let (q, p) = (s("q", sigma), s("p", sigma));
        assert_eq!(q.moyal_bracket(&p).unwrap(), sigma_u_h(sigma).neg());
        let a = s("q^2*p + 2*p^3 - q", sigma);
        assert!(a.moyal_bracket(&a).unwrap().is_zero());
        let expected = sigma_u_h(sigma).mul(&s("-2*q", sigma)).unwrap();
        assert_eq!(s("q^2", sigma).moyal_bracket(&p).unwrap(), expected);
    }
    // [q, p] = −hj over G.
    assert_eq!(s("q", H).moyal_bracket(&s("p", H)).unwrap(), s("-h*j", H));
    assert_eq!(s("q", C).moyal_bracket(&s("p", C)).unwrap(), s("i*h", C));
}

#[test]
fn poisson_worked_examples() {
    for sigma in Sigma::BOTH {
        let (q, p) = (s("q", sigma), s("p", sigma));
        assert_eq!(q.poisson_bracket(&p).unwrap(), s("-1", sigma));
        assert_eq!(p.poisson_bracket(&q).unwrap(), s("1", sigma));
        let a = s("q^3*p + 5*p^2", sigma);
        assert!(a.poisson_bracket(&s("7/3", sigma)).unwrap().is_zero());
    }
}

#[test]
fn scaled_bracket_examples() {
    for sigma in Sigma::BOTH {
        let (q, p) = (s("q", sigma), s("p", sigma));
        assert_eq!(q.scaled_bracket(&p).unwrap(), s("-1", sigma));

        let a = s("q^3", sigma);
        let b = s("p^3", sigma);
        let scaled = a.scaled_bracket(&b).unwrap();
        assert_eq!(scaled.h_constant_term(), a.poisson_bracket(&b).unwrap());
        assert_eq!(scaled.h_constant_term(), s("-9*q^2*p^2", sigma));
        // Hand expansion of the κ = 1, 2, 3 terms of p³ ⋆ q³.
        let full = s("-9*q^2*p^2", sigma)
            .sub(&sigma_u_h(sigma).mul(&s("18*q*p", sigma)).unwrap())
            .unwrap()
            .sub(
                &s("6*h^2", sigma)
                    .scale(&Binarion::real(sigma.as_rational(), sigma))
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(scaled, full);

        for (x, y) in [("2*q - p + 3", "q + 5*p"), ("j*q", "p - 1/2*q")] {
            let (x, y) = (s(x, sigma), s(y, sigma));
            assert_eq!(
                x.scaled_bracket(&y).unwrap(),
                x.poisson_bracket(&y).unwrap()
            );
        }
    }
    assert_eq!(
        s("q^3", H).scaled_bracket(&s("p^3", H)).unwrap(),
        s("-9*q^2*p^2 - 18*j*h*q*p - 6*h^2", H)
    );
}

#[test]
fn evaluate_differentiate_observable() {
    let qp = s("q*p", H);
    let pt = PhasePoint::new(vec![int(2)], vec![int(3)]).unwrap();
    for h in [int(0), rat(7, 2)] {
        assert_eq!(qp.evaluate(&pt, &h).unwrap(), Binarion::from_ints(6, 0, H));
    }
    assert!(qp.evaluate(&pt, &int(-1)).is_err());
    let wrong = PhasePoint::new(vec![int(1); 2], vec![int(1); 2]).unwrap();
    assert!(matches!(
        qp.evaluate(&wrong, &int(1)),
        Err(Error::DimensionMismatch { .. })
    ));

    assert!(s("q^2 + p^2", H).is_observable());
    assert!(!s("j*q", H).is_observable());
    assert!(!s("h*q", H).is_observable());

    assert_eq!(
        s("q^2*p", H).differentiate(Var::Q(0)).unwrap(),
        s("2*q*p", H)
    );
    assert_eq!(
        s("q^2*p", H).differentiate(Var::P(1)),
        Err(Error::IndexOutOfRange { index: 1, dof: 1 })
    );
}

#[test]
fn mismatches_and_caps() {
    let a = s("q", H);
    assert!(matches!(
        a.star(&s("q", C)),
        Err(Error::SignatureMismatch { .. })
    ));
    assert!(matches!(
        a.star(&sk("q", H, 2)),
        Err(Error::DimensionMismatch { .. })
    ));
    let big = s("q^9", H);
    assert_eq!(
        big.star(&s("p^8", H)),
        Err(Error::DegreeCapExceeded {
            degree: 17,
            cap: 16
        })
    );
    let cfg = SymbolConfig { degree_cap: 20 };
    assert!(big.star_with(&s("p^8", H), &cfg).is_ok());
}

#[test]
fn canonical_text_form() {
    assert_eq!(s("p", H).star(&s("q", H)).unwrap().to_string(), "q*p + j*h");
    assert_eq!(s("q", C).star(&s("p", C)).unwrap().to_string(), "q*p");
    assert_eq!(s("1", H).star(&s("q^2", H)).unwrap().to_string(), "q^2");
    assert_eq!(s("0", H).to_string(), "0");
    assert_eq!(
        sk("(3/2 + j)*h^2*q1^2*p1 - p2 + 2*j*q2 - 1/3", H, 2).to_string(),
        "(3/2 + j)*h^2*q1^2*p1 + 2*j*q2 - p2 - 1/3"
    );
    assert_eq!(s("-q - i*h", C).to_string(), "-q - i*h");
    assert_eq!(s("(1 - 2*j)*p", H).to_string(), "(1 - 2*j)*p");
}

#[test]
fn parse_errors_carry_positions() {
    match PolySymbol::parse("q + * p", H) {
        Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        PolySymbol::parse("q / p", H),
        Err(Error::Parse { position: 2, .. })
    ));
    assert!(matches!(
        PolySymbol::parse("q^x", H),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(
        PolySymbol::parse("(q", H),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(
        PolySymbol::parse("q0", H),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(
        PolySymbol::parse("x", H),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(PolySymbol::parse("", H), Err(Error::Parse { .. })));
    assert!(matches!(
        PolySymbol::parse("1/(1+j)", H),
        Err(Error::Parse { .. })
    ));
    assert_eq!(
        PolySymbol::parse("q/(1+j)", C).unwrap(),
        s("(1/2 - 1/2*i)*q", C)
    );
}

#[test]
fn json_round_trip() {
    let a = sk("(3/2 + j)*h^2*q1^2*p1 - p2 + 1/3", H, 2);
    let text = a.to_json();
    assert_eq!(PolySymbol::from_json(&text).unwrap(), a);
    assert!(
        PolySymbol::from_json(r#"{"sigma":1,"dof":1,"terms":[{"q":[1,0],"p":[0],"re":"1"}]}"#)
            .is_err()
    );
    assert!(PolySymbol::from_json(r#"{"sigma":2,"dof":1,"terms":[]}"#).is_err());
}

#[test]
fn multi_index_iteration_covers_box() {
    let all: Vec<Vec<u32>> = MultiIndexIter::new(&[1, 2]).collect();
    assert_eq!(all.len(), 6);
    assert!(all.contains(&vec![1, 2]));
    assert_eq!(MultiIndexIter::new(&[]).count(), 1);
    assert_eq!(binomial(5, 2), BigInt::from(10));
    assert_eq!(falling_factorial(5, 2), BigInt::from(20));
}

/// Star product through repeated differentiation, used as an oracle for the
/// closed-form monomial formula.
fn star_by_derivatives(a: &PolySymbol, b: &PolySymbol) -> PolySymbol {
    let k = a.dof();
    let sigma = a.sigma();
    let mut out = PolySymbol::zero(k, sigma);
    let bound: Vec<u32> = (0..k)
        .map(|_| a.total_degree().max(b.total_degree()))
        .collect();
    for kappa in MultiIndexIter::new(&bound) {
        let mut da = a.clone();
        let mut db = b.clone();
        let mut fact = BigInt::one();
        for (i, n) in kappa.iter().enumerate() {
            for m in 0..*n {
                da = da.differentiate(Var::P(i)).unwrap();
                db = db.differentiate(Var::Q(i)).unwrap();
                fact *= BigInt::from(m + 1);
            }
        }
        let order: u32 = kappa.iter().sum();
        let coeff = Binarion::unit_inverse(sigma)
            .pow(order)
            .scale(&Rational::new(BigInt::one(), fact));
        let hk = PolySymbol::from_hpoly(k, HPoly::monomial(order, coeff));
        out = out.add(&da.mul(&db).unwrap().mul(&hk).unwrap()).unwrap();
    }
    out
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn coeff(sigma: Sigma, h_max: u32) -> impl Strategy<Value = HPoly> {
    prop::collection::vec((0..=h_max, small_rational(), small_rational()), 1..=2).prop_map(
        move |parts| {
            parts
                .into_iter()
                .fold(HPoly::zero(sigma), |acc, (d, x, y)| {
                    acc.add(&HPoly::monomial(d, Binarion::new(x, y, sigma)))
                })
        },
    )
}

fn symbol(dof: usize, sigma: Sigma, max_deg: u32, h_max: u32) -> impl Strategy<Value = PolySymbol> {
    let monomial = prop::collection::vec(0..=max_deg, 2 * dof)
        .prop_filter_map("degree bound", move |e| {
            (e.iter().sum::<u32>() <= max_deg).then_some(e)
        });
    prop::collection::vec((monomial, coeff(sigma, h_max)), 0..=4).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(PolySymbol::zero(dof, sigma), |acc, (e, c)| {
                acc.add(&PolySymbol::monomial(dof, e, c)).unwrap()
            })
    })
}

fn space() -> impl Strategy<Value = (usize, Sigma)> {
    (1usize..=2, prop_oneof![Just(C), Just(H)])
}

fn pair(max_deg: u32, h_max: u32) -> impl Strategy<Value = (PolySymbol, PolySymbol)> {
    space().prop_flat_map(move |(k, sg)| {
        (symbol(k, sg, max_deg, h_max), symbol(k, sg, max_deg, h_max))
    })
}

fn triple(max_deg: u32, h_max: u32) -> impl Strategy<Value = (PolySymbol, PolySymbol, PolySymbol)> {
    space().prop_flat_map(move |(k, sg)| {
        (
            symbol(k, sg, max_deg, h_max),
            symbol(k, sg, max_deg, h_max),
            symbol(k, sg, max_deg, h_max),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn star_is_associative((a, b, c) in triple(5, 1)) {
        let left = a.star(&b).unwrap().star(&c).unwrap();
        let right = a.star(&b.star(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn star_matches_derivative_oracle((a, b) in pair(4, 1)) {
        prop_assert_eq!(a.star(&b).unwrap(), star_by_derivatives(&a, &b));
    }

    #[test]
    fn star_is_bilinear((a, b, c) in triple(3, 1), x in small_rational(), y in small_rational()) {
        let sg = a.sigma();
        let z = Binarion::new(x, y, sg);
        let lhs = a.scale(&z).unwrap().add(&b).unwrap().star(&c).unwrap();
        let rhs = a.star(&c).unwrap().scale(&z).unwrap().add(&b.star(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = c.star(&a.add(&b).unwrap()).unwrap();
        let rhs = c.star(&a).unwrap().add(&c.star(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_degree_bound_and_deformation((a, b) in pair(5, 0)) {
        let prod = a.star(&b).unwrap();
        prop_assert!(prod.total_degree() <= a.total_degree() + b.total_degree());
        prop_assert_eq!(prod.h_constant_term(), a.mul(&b).unwrap());
        let bracket = a.moyal_bracket(&b).unwrap();
        prop_assert!(bracket.h_constant_term().is_zero());
        prop_assert!(bracket.at_h(&int(0)).is_zero());
        prop_assert_eq!(b.moyal_bracket(&a).unwrap(), bracket.neg());
    }

    #[test]
    fn classical_limit_is_poisson((a, b) in pair(5, 0)) {
        let scaled = a.scaled_bracket(&b).unwrap();
        prop_assert_eq!(scaled.h_constant_term(), a.poisson_bracket(&b).unwrap());
    }

    #[test]
    fn classical_limit_with_h_dependent_symbols((a, b) in pair(4, 2)) {
        let scaled = a.scaled_bracket(&b).unwrap();
        let classical = a.h_constant_term().poisson_bracket(&b.h_constant_term()).unwrap();
        prop_assert_eq!(scaled.h_constant_term(), classical);
    }

    #[test]
    fn observables_have_real_classical_limit((a, b) in pair(4, 0)) {
        let real_part = |x: &PolySymbol| {
            let mut out = PolySymbol::zero(x.dof(), x.sigma());
            for (e, c) in x.raw_terms() {
                let r = Binarion::real(c.coeff(0).re().clone(), x.sigma());
                out = out.add(&PolySymbol::monomial(x.dof(), e.clone(), HPoly::constant(r))).unwrap();
            }
            out
        };
        let (a, b) = (real_part(&a), real_part(&b));
        prop_assert!(a.is_observable() && b.is_observable());
        prop_assert!(a.scaled_bracket(&b).unwrap().h_constant_term().is_observable());
    }

    #[test]
    fn poisson_jacobi_and_antisymmetry((a, b, c) in triple(4, 0)) {
        let pb = |x: &PolySymbol, y: &PolySymbol| x.poisson_bracket(y).unwrap();
        let sum = pb(&a, &pb(&b, &c))
            .add(&pb(&b, &pb(&c, &a))).unwrap()
            .add(&pb(&c, &pb(&a, &b))).unwrap();
        prop_assert!(sum.is_zero());
        prop_assert_eq!(pb(&a, &b), pb(&b, &a).neg());
        // Leibniz in the second slot.
        let lhs = pb(&a, &b.mul(&c).unwrap());
        let rhs = pb(&a, &b).mul(&c).unwrap().add(&b.mul(&pb(&a, &c)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differentiation_is_a_derivation((a, b) in pair(4, 1), slot in 0usize..4) {
        let k = a.dof();
        let var = if slot % 2 == 0 { Var::Q(slot / 2 % k) } else { Var::P(slot / 2 % k) };
        let lhs = a.mul(&b).unwrap().differentiate(var).unwrap();
        let rhs = a.differentiate(var).unwrap().mul(&b).unwrap()
            .add(&a.mul(&b.differentiate(var).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism((a, b) in pair(3, 1), q in small_rational(), p in small_rational(), h in 0i64..5) {
        let k = a.dof();
        let pt = PhasePoint::new(vec![q; k], vec![p; k]).unwrap();
        let h = int(h);
        let ev = |x: &PolySymbol| x.evaluate(&pt, &h).unwrap();
        prop_assert_eq!(ev(&a.mul(&b).unwrap()), &ev(&a) * &ev(&b));
        prop_assert_eq!(ev(&a.add(&b).unwrap()), &ev(&a) + &ev(&b));
    }

    #[test]
    fn text_and_json_round_trip((a, _b) in pair(4, 2)) {
        let back = parse_symbol(&a.to_string(), a.sigma(), Some(a.dof())).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(PolySymbol::from_json(&a.to_json()).unwrap(), a);
    }
}
