use crossing_core::lie::{self, Automorphism};
use crossing_core::normalform::{
    has_normal_form_shape, normalize, smallest_key, smallest_nonresonant, verify_conjugation, NormalFormResult,
};
use crossing_core::resonance::EigenData;
use crossing_core::{GaussianRational, LaurentPoly, Shape, VectorField, VectorMonomialIndex, ZExp};
use proptest::prelude::*;

type G = GaussianRational;

const D: u32 = 4;
const X_CAP: i32 = 4;

fn eigenvalue() -> impl Strategy<Value = G> {
    prop::sample::select(vec![
        G::from_integer(-1),
        G::ratio(-1, 2),
        G::ratio(1, 2),
        G::from_integer(-2),
        G::i(),
        G::from_parts(-1, 3, 1, 1),
        G::ratio(-1, 3),
        G::from_integer(2),
    ])
}

fn small() -> impl Strategy<Value = G> {
    (-3i64..=3, 1i64..=2).prop_map(|(a, b)| G::ratio(a, b))
}

/// Random `x`-normalized field with triangular constant linear part.
fn field_strategy() -> impl Strategy<Value = (VectorField<G>, EigenData)> {
    (
        prop::collection::vec(eigenvalue(), 2),
        prop::bool::ANY,
        prop::collection::vec((0usize..2, 0u16..=3, 0u16..=3, 0i32..=2, small()), 0..8),
    )
        .prop_map(|(mut mu, repeat, terms)| {
            if repeat {
                mu[1] = mu[0].clone();
            }
            let shape = Shape::new(2, D);
            let mut f = VectorField::semisimple(shape, &mu).unwrap();
            for (j, e1, e2, xe, c) in terms {
                let m = ZExp::new(vec![e1, e2]);
                let deg = m.degree();
                if deg == 0 || deg > D || c == G::from_integer(0) {
                    continue;
                }
                // Keep the constant linear part triangular with μ on the diagonal.
                let linear_constant = deg == 1 && xe == 0;
                if linear_constant && (m.get(j) == 1 || (j == 0 && e2 == 1)) {
                    continue;
                }
                let t = VectorField::z_term(shape, j, m, LaurentPoly::monomial(c, xe));
                f = &f + &t;
            }
            (f, EigenData::new(mu).unwrap())
        })
}

fn capped(x: &VectorField<G>, shape: Shape) -> VectorField<G> {
    VectorField::new(
        x.a().reshape(shape).unwrap(),
        x.b_all().iter().map(|b| b.reshape(shape).unwrap()).collect(),
    )
    .unwrap()
}

fn run(x: &VectorField<G>, eigen: &EigenData) -> NormalFormResult {
    normalize(x, eigen, X_CAP).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn conjugation_certificate((x, eigen) in field_strategy()) {
        let r = run(&x, &eigen);
        let xc = capped(&x, r.normal_field.shape());
        prop_assert!(verify_conjugation(&r.normalizer, &xc, &r.normal_field).unwrap().is_zero());
        prop_assert!(has_normal_form_shape(&r.normal_field, &eigen));
    }

    #[test]
    fn idempotent((x, eigen) in field_strategy()) {
        let r = run(&x, &eigen);
        let again = run(&r.normal_field, &eigen);
        prop_assert_eq!(&again.normal_field, &r.normal_field);
        prop_assert!(again.normalizer.is_identity());
        prop_assert!(again.steps.is_empty());
    }

    #[test]
    fn order_progress((x, eigen) in field_strategy()) {
        let r = run(&x, &eigen);
        let shape = r.normal_field.shape();
        let mut current = capped(&x, shape);
        for step in &r.steps {
            // Each step removes the smallest key (x-valuation, pair) of its
            // degree, lower degrees stay clean, and the key strictly grows.
            let degree = step.index.degree();
            let key = smallest_key(&current, &eigen, degree).unwrap();
            prop_assert_eq!(&key.1, &step.index);
            if let Some(low) = smallest_nonresonant(&current, &eigen) {
                prop_assert!(low.degree() >= degree, "{} left below degree {}", low, degree);
            }
            current = lie::adjoint(&step.generator(shape), &current).unwrap();
            if let Some(next) = smallest_key(&current, &eigen, degree) {
                prop_assert!(next > key, "{:?} not after {:?}", next, key);
            }
        }
        prop_assert!(smallest_nonresonant(&current, &eigen).is_none());
    }

    #[test]
    fn resonant_table_matches_pairing((x, eigen) in field_strategy()) {
        let r = run(&x, &eigen);
        for c in &r.resonant_coeffs {
            let s = eigen.pairing(&c.k);
            prop_assert_eq!(s, G::from_integer(-c.x_exp));
        }
    }

    /// `exp(b(x) z^K L(e_j))` fixes `x∂x + L(μ)` exactly when every
    /// coefficient of `b` satisfies `(i + ⟨μ,K⟩)cᵢ = 0`.
    #[test]
    fn symmetry_coefficient_law(
        mu in prop::collection::vec(eigenvalue(), 2),
        k1 in 0i32..=2, k2 in 0i32..=2, j in 0usize..2,
        coeffs in prop::collection::vec((-3i32..=3, small()), 1..4),
    ) {
        let k = vec![k1, k2];
        prop_assume!(k1 + k2 >= 1 && k1 + k2 <= 3);
        let shape = Shape::new(2, 4);
        let eigen = EigenData::new(mu.clone()).unwrap();
        let b = LaurentPoly::from_terms(coeffs);
        let index = VectorMonomialIndex::new(k.clone(), j).unwrap();
        let y = VectorField::monomial(shape, b.clone(), &index);
        let s = VectorField::semisimple(shape, &mu).unwrap();
        let fixed = lie::pushforward(&lie::exp(&y).unwrap(), &s).unwrap() == s;
        let s_k = eigen.pairing(&k);
        let law = b.terms().all(|(i, _)| &G::from_integer(i as i64) + &s_k == G::from_integer(0));
        prop_assert_eq!(fixed, law);
    }
}

#[test]
fn resonant_example_at_degree_six() {
    let shape = Shape::new(1, 6);
    let mu = vec![G::from_integer(-1)];
    let x = &VectorField::semisimple(shape, &mu).unwrap()
        + &VectorField::z_term(shape, 0, ZExp::new(vec![2]), LaurentPoly::x());
    let r = normalize(&x, &EigenData::new(mu).unwrap(), 6).unwrap();
    assert_eq!(r.normal_field, capped(&x, r.normal_field.shape()));
    assert_eq!(r.normalizer, Automorphism::identity(r.normal_field.shape()));
    let xc = capped(&x, r.normal_field.shape());
    assert!(verify_conjugation(&r.normalizer, &xc, &r.normal_field).unwrap().is_zero());
}

/// `x z₂∂z₁` is resonant for μ = (−1, −2) and carries the `z₁z₂∂z₁`
/// elimination back to the earlier pair `z₂²∂z₁` at a higher power of `x`.
#[test]
fn resonant_linear_term_feeds_earlier_pair() {
    let shape = Shape::new(2, 4);
    let mu = vec![G::from_integer(-1), G::from_integer(-2)];
    let z = |a: u16, b: u16| ZExp::new(vec![a, b]);
    let x = &(&VectorField::semisimple(shape, &mu).unwrap()
        + &VectorField::z_term(shape, 0, z(0, 1), LaurentPoly::x()))
        + &VectorField::z_term(shape, 0, z(1, 1), LaurentPoly::constant(G::from_integer(-1)));
    let eigen = EigenData::new(mu).unwrap();
    let r = normalize(&x, &eigen, X_CAP).unwrap();
    let xc = capped(&x, r.normal_field.shape());
    assert!(verify_conjugation(&r.normalizer, &xc, &r.normal_field).unwrap().is_zero());
    assert!(has_normal_form_shape(&r.normal_field, &eigen));
    assert!(smallest_nonresonant(&r.normal_field, &eigen).is_none());
}

/// Below the diagonal with distinct eigenvalues, `x³z₁∂z₂` is an ordinary
/// resonant term (μ₁ − μ₂ = −3), not a Jordan entry.
#[test]
fn subdiagonal_resonance_between_distinct_eigenvalues() {
    let shape = Shape::new(2, 4);
    let mu = vec![G::from_integer(-1), G::from_integer(2)];
    let z1 = ZExp::new(vec![1, 0]);
    let x = &(&VectorField::semisimple(shape, &mu).unwrap()
        + &VectorField::z_term(shape, 0, z1.clone(), LaurentPoly::x()))
        + &VectorField::z_term(shape, 1, z1.clone(), LaurentPoly::constant(G::from_integer(-1)));
    let eigen = EigenData::new(mu).unwrap();
    let r = normalize(&x, &eigen, X_CAP).unwrap();
    assert!(has_normal_form_shape(&r.normal_field, &eigen));
    assert_eq!(r.normal_field.b(1).coeff(&z1), LaurentPoly::monomial(G::ratio(-1, 6), 3));
    assert_eq!(r.jordan_eps, vec![0, 0]);
}
