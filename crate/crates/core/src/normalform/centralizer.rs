use crate::coeff::{GaussianRational, LaurentPoly};
use crate::lie::VectorField;
use crate::resonance::{decide_ntnr, directions, lattice_indices, EigenData};
use crate::series::{Shape, VectorMonomialIndex};

type G = GaussianRational;

/// A monomial `x^l z^K L(e_j)` (or `x∂x` when `index` is `None`) commuting
/// with `x∂x + L(μ)`.
#[derive(Clone, PartialEq, Debug)]
pub struct CentralizerMonomial {
    pub index: Option<VectorMonomialIndex>,
    pub l: i32,
    pub field: VectorField<G>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct CentralizerResult {
    pub basis: Vec<CentralizerMonomial>,
    pub x_window: (i32, i32),
    pub degree: u32,
}

impl CentralizerResult {
    /// First basis element with a negative `x`-exponent.
    pub fn negative(&self) -> Option<&CentralizerMonomial> {
        self.basis.iter().find(|m| m.l < 0)
    }
}

/// The monomial basis of the `x`-normalized centralizer of `x∂x + L(μ)`
/// with `x`-exponents in `x_window` and `z`-degree at most `d`.
///
/// The bracket with the semisimple part is diagonal on monomials, so each
/// candidate is bracketed exactly and kept when the bracket vanishes.
pub fn centralizer_solve(eigen: &EigenData, x_window: (i32, i32), d: u32) -> CentralizerResult {
    let n = eigen.n();
    let shape = Shape::new(n, d.max(1));
    let semisimple = VectorField::semisimple(shape, eigen.mu()).expect("matching dimension");
    let mut basis = vec![CentralizerMonomial {
        index: None,
        l: 1,
        field: VectorField::euler(shape),
    }];
    for k in lattice_indices(n, 0, d as i32 - 1) {
        for j in directions(&k) {
            let index = VectorMonomialIndex::new(k.clone(), j).expect("lattice index");
            for l in x_window.0..=x_window.1 {
                let f = LaurentPoly::monomial(G::from_integer(1), l);
                let field = VectorField::monomial(shape, f, &index);
                if semisimple.bracket(&field).expect("same shape").is_zero() {
                    basis.push(CentralizerMonomial {
                        index: Some(index.clone()),
                        l,
                        field,
                    });
                }
            }
        }
    }
    CentralizerResult {
        basis,
        x_window,
        degree: d,
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Theorem1Check {
    pub ntnr: bool,
    /// `ntnr ⇒ no negative x-exponent in the centralizer`.
    pub holds: bool,
    pub offending: Option<CentralizerMonomial>,
}

/// Truncated check that under no transverse negative resonance the
/// centralizer has no monomial with a negative power of `x`.
pub fn check_theorem1(eigen: &EigenData, x_window: (i32, i32), d: u32) -> Theorem1Check {
    let ntnr = decide_ntnr(eigen).holds;
    let offending = centralizer_solve(eigen, x_window, d).negative().cloned();
    Theorem1Check {
        ntnr,
        holds: !ntnr || offending.is_none(),
        offending,
    }
}
