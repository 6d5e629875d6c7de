//! Fixed inputs shared by the benchmarks.

use crossing_core::lie::Automorphism;
use crossing_core::resonance::EigenData;
use crossing_core::{GaussianRational, LaurentPoly, Shape, TransverseSeries, VectorField, ZExp};

type G = GaussianRational;

/// `x∂x − z₁∂z₁ + x z₁²∂z₁` at degree cap `d`.
pub fn resonant_example(d: u32) -> VectorField<G> {
    let shape = Shape::new(1, d);
    &VectorField::semisimple(shape, &[G::from_integer(-1)]).unwrap()
        + &VectorField::z_term(shape, 0, ZExp::new(vec![2]), LaurentPoly::x())
}

/// A two-variable field with a dense tail of non-resonant terms.
pub fn dense_field(d: u32) -> (VectorField<G>, EigenData) {
    let mu = vec![G::ratio(-1, 2), G::from_parts(1, 3, 1, 1)];
    let shape = Shape::new(2, d);
    let mut f = VectorField::semisimple(shape, &mu).unwrap();
    for deg in 2..=d {
        for a in 0..=deg {
            let m = ZExp::new(vec![a as u16, (deg - a) as u16]);
            let c = G::ratio(1 + a as i64, deg as i64);
            let b = LaurentPoly::from_terms(vec![(0, c.clone()), (1, -c)]);
            f = &f + &VectorField::z_term(shape, (a % 2) as usize, m, b);
        }
    }
    (f, EigenData::new(mu).unwrap())
}

/// A 1-flat field in two variables.
pub fn flat_field(d: u32) -> VectorField<G> {
    let shape = Shape::new(2, d);
    let z = |a: u16, b: u16| ZExp::new(vec![a, b]);
    let terms = [
        VectorField::z_term(shape, 0, z(2, 0), LaurentPoly::x()),
        VectorField::z_term(shape, 1, z(1, 1), LaurentPoly::monomial(G::ratio(1, 2), -1)),
        VectorField::z_term(shape, 0, z(0, 3), LaurentPoly::constant(G::i())),
        VectorField::x_term(shape, z(1, 0), LaurentPoly::monomial(G::ratio(-1, 3), 1)),
    ];
    terms.iter().fold(VectorField::zero(shape), |acc, t| &acc + t)
}

/// An automorphism with non-trivial linear part.
pub fn automorphism(d: u32) -> Automorphism<G> {
    let shape = Shape::new(2, d);
    let v = |i| TransverseSeries::var(shape, i);
    let sq = TransverseSeries::monomial(shape, ZExp::new(vec![1, 1]), LaurentPoly::x());
    let z1 = &(&v(0).scale(&G::from_integer(2)) + &v(1)) + &sq;
    let z2 = &v(1) + &TransverseSeries::monomial(shape, ZExp::new(vec![3, 0]), LaurentPoly::constant(G::ratio(1, 5)));
    Automorphism::new(TransverseSeries::x(shape), vec![z1, z2]).unwrap()
}
