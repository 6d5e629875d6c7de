//! Elimination of non-resonant terms: the normal form
//! `x∂x + L(μ) + Σ εᵢ z_{i−1}∂_{zᵢ} + Σ c·x^{−⟨μ,K⟩} z^K L(e_j)`, the
//! normalizing automorphism, and the centralizer of the semisimple part.

mod centralizer;

use num_traits::Zero;

use crate::coeff::{GaussianRational, LaurentPoly};
use crate::error::{Error, Result};
use crate::lie::{self, Automorphism, VectorField};
use crate::resonance::{directions, integer_value, lattice_indices, EigenData};
use crate::series::{Shape, VectorMonomialIndex, ZExp};

pub use centralizer::{
    centralizer_solve, check_theorem1, CentralizerMonomial, CentralizerResult, Theorem1Check,
};

type G = GaussianRational;

/// A surviving term `coeff · x^{x_exp} · z^K L(e_j)` with `x_exp = −⟨μ,K⟩`.
#[derive(Clone, PartialEq, Debug)]
pub struct ResonantCoeff {
    pub k: Vec<i32>,
    /// Zero-based direction.
    pub j: usize,
    pub x_exp: i64,
    pub coeff: G,
}

/// One conjugation by `exp(f·z^K L(e_j))`.
#[derive(Clone, PartialEq, Debug)]
pub struct EliminationStep {
    pub index: VectorMonomialIndex,
    /// `⟨μ,K⟩`.
    pub s: G,
    pub f: LaurentPoly<G>,
}

impl EliminationStep {
    pub fn generator(&self, shape: Shape) -> VectorField<G> {
        VectorField::monomial(shape, self.f.clone(), &self.index)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct NormalFormResult {
    pub eigen: EigenData,
    pub normal_field: VectorField<G>,
    pub normalizer: Automorphism<G>,
    pub resonant_coeffs: Vec<ResonantCoeff>,
    /// `εᵢ ∈ {0, 1}`; `ε₀` is always 0.
    pub jordan_eps: Vec<u8>,
    pub steps: Vec<EliminationStep>,
    /// Diagonal rescaling applied after the sweeps to bring the ε-terms to 1.
    pub scaling: Vec<G>,
}

impl NormalFormResult {
    pub fn centralizer(&self, x_window: (i32, i32), d: u32) -> CentralizerResult {
        centralizer_solve(&self.eigen, x_window, d)
    }
}

/// `⟨μ,K⟩` for the pair, exact.
fn pair_s(eigen: &EigenData, k: &[i32]) -> G {
    eigen.pairing(k)
}

/// The coefficient of `z^K L(e_j)` in `X`.
fn pair_coeff(x: &VectorField<G>, index: &VectorMonomialIndex) -> LaurentPoly<G> {
    x.b(index.j()).coeff(&index.component_exp())
}

/// All pairs `(K, j)` with `0 ≤ |K| ≤ d − 1`, in ascending pair order.
pub fn pair_sequence(n: usize, d: u32) -> Vec<VectorMonomialIndex> {
    let mut out = Vec::new();
    for k in lattice_indices(n, 0, d as i32 - 1) {
        for j in directions(&k) {
            out.push(VectorMonomialIndex::new(k.clone(), j).expect("lattice index"));
        }
    }
    out
}

/// The non-resonant part's solution `f` at `idx`, if any.
fn nonresonant_solution(
    x: &VectorField<G>,
    eigen: &EigenData,
    idx: &VectorMonomialIndex,
) -> Option<LaurentPoly<G>> {
    let g = pair_coeff(x, idx);
    if g.is_zero() {
        return None;
    }
    let (f, _) = g.euler_solve(&pair_s(eigen, idx.k()));
    (!f.is_zero()).then_some(f)
}

/// The smallest pair whose coefficient still has a non-resonant part.
pub fn smallest_nonresonant(x: &VectorField<G>, eigen: &EigenData) -> Option<VectorMonomialIndex> {
    pair_sequence(x.n(), x.degree_cap())
        .into_iter()
        .find(|idx| nonresonant_solution(x, eigen, idx).is_some())
}

/// Among pairs with `|K| = degree`, the smallest key `(v, (K, j))` where
/// `v` is the lowest power of `x` in the non-resonant part.
pub fn smallest_key(x: &VectorField<G>, eigen: &EigenData, degree: i32) -> Option<(i32, VectorMonomialIndex)> {
    lattice_indices(x.n(), degree, degree)
        .into_iter()
        .flat_map(|k| {
            directions(&k)
                .into_iter()
                .map(move |j| VectorMonomialIndex::new(k.clone(), j).expect("lattice index"))
        })
        .filter_map(|idx| {
            let f = nonresonant_solution(x, eigen, &idx)?;
            Some((f.min_exp()?, idx))
        })
        .min()
}


fn check_input(x: &VectorField<G>, eigen: &EigenData) -> Result<()> {
    let n = x.n();
    if eigen.n() != n {
        return Err(Error::Usage(format!(
            "{} eigenvalues declared for n = {n}",
            eigen.n()
        )));
    }
    if x.a() != &crate::series::TransverseSeries::x(x.shape()) {
        return Err(Error::Usage("the x-component must be exactly x".into()));
    }
    if !x.b_all().iter().all(|b| b.in_power(1)) {
        return Err(Error::Usage("z-components must vanish at z = 0".into()));
    }
    if !x.b_all().iter().all(|b| b.is_taylor()) {
        return Err(Error::Usage(
            "coefficients must be polynomial in x (no negative exponents)".into(),
        ));
    }
    let lin = x.linear_part();
    for (i, row) in lin.iter().enumerate() {
        for (k, entry) in row.iter().enumerate() {
            let c0 = entry.coeff(0);
            if i == k && c0 != eigen.mu()[i] {
                return Err(Error::Usage(format!(
                    "linear coefficient of z{0} in dz{0} is {c0}, declared eigenvalue {1}",
                    i + 1,
                    eigen.mu()[i]
                )));
            }
            if k > i && !c0.is_zero() {
                return Err(Error::Usage(format!(
                    "constant linear part must be triangular with only z_k∂z_i, k < i (found z{}*dz{})",
                    k + 1,
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

/// Normalizes an `x`-normalized field modulo `𝔪^{d+1}` and `x^{x_cap+1}`.
///
/// The `z`-linear part at `x = 0` must be triangular, with `z_k∂_{zᵢ}`
/// entries only for `k ≤ i` and the declared `μ` on the diagonal.
///
/// Degrees `|K| = 0, 1, …` are cleared in turn, each time at the smallest
/// key `(x-valuation, pair)`. Resonant `x`-dependent linear terms such as
/// `x z₂∂z₁` move a term to an earlier pair at a higher power of `x`, so a
/// plain ascending pair sweep is not enough; the key still strictly grows.
pub fn normalize(x: &VectorField<G>, eigen: &EigenData, x_cap: i32) -> Result<NormalFormResult> {
    if x_cap < 0 {
        return Err(Error::Usage("x cap must be non-negative".into()));
    }
    check_input(x, eigen)?;
    let shape = Shape::new(x.n(), x.degree_cap()).with_x_cap(Some(x_cap));
    let mut current = VectorField::new(
        x.a().reshape(shape)?,
        x.b_all().iter().map(|b| b.reshape(shape)).collect::<Result<_>>()?,
    )?;
    let mut normalizer = Automorphism::identity(shape);
    let mut steps = Vec::new();
    let mut eliminate = |current: &mut VectorField<G>, idx: VectorMonomialIndex, f| -> Result<()> {
        let step = EliminationStep {
            s: pair_s(eigen, idx.k()),
            index: idx,
            f,
        };
        let y = step.generator(shape);
        *current = lie::adjoint(&y, current)?;
        normalizer = lie::exp(&y)?.compose(&normalizer)?;
        steps.push(step);
        Ok(())
    };

    for degree in 0..shape.degree_cap as i32 {
        // Keys strictly increase, so there are at most as many steps as keys.
        let pairs: usize = lattice_indices(shape.n, degree, degree).iter().map(|k| directions(k).len()).sum();
        let budget = (x_cap as usize + 1) * pairs + 1;
        let mut settled = false;
        for _ in 0..budget {
            match smallest_key(&current, eigen, degree) {
                None => {
                    settled = true;
                    break;
                }
                Some((_, idx)) => {
                    let f = nonresonant_solution(&current, eigen, &idx).expect("non-resonant");
                    eliminate(&mut current, idx, f)?;
                }
            }
        }
        if !settled {
            return Err(Error::Precondition(format!(
                "degree {} did not settle within the x cap",
                degree + 1
            )));
        }
    }
    if let Some(idx) = smallest_nonresonant(&current, eigen) {
        return Err(Error::Precondition(format!(
            "non-resonant term at {idx} reappeared after its elimination"
        )));
    }
    let (scaled, scaling_map, scaling, jordan_eps) = jordan_scale(&current, eigen)?;
    let normalizer = scaling_map.compose(&normalizer)?;
    let resonant_coeffs = collect_resonant(&scaled, eigen, &jordan_eps);
    Ok(NormalFormResult {
        eigen: eigen.clone(),
        normal_field: scaled,
        normalizer,
        resonant_coeffs,
        jordan_eps,
        steps,
        scaling,
    })
}

/// Rescales `zᵢ ↦ dᵢ zᵢ` so every non-zero constant `z_{i−1}∂_{zᵢ}` entry
/// becomes 1.
#[allow(clippy::type_complexity)]
fn jordan_scale(
    x: &VectorField<G>,
    eigen: &EigenData,
) -> Result<(VectorField<G>, Automorphism<G>, Vec<G>, Vec<u8>)> {
    let n = x.n();
    let lin = x.linear_part();
    let mut eps = vec![0u8; n];
    let mut d = vec![G::from_integer(1); n];
    for i in 1..n {
        let c = lin[i][i - 1].coeff(0);
        if !c.is_zero() && eigen.mu()[i] == eigen.mu()[i - 1] {
            // The entry of zᵢ ↦ dᵢzᵢ conjugation scales by d_{i−1}/dᵢ.
            eps[i] = 1;
            d[i] = &d[i - 1] * &c;
        }
    }
    if d.iter().all(|v| *v == G::from_integer(1)) {
        return Ok((x.clone(), Automorphism::identity(x.shape()), d, eps));
    }
    let m: Vec<Vec<G>> = (0..n)
        .map(|i| (0..n).map(|k| if i == k { d[i].clone() } else { G::zero() }).collect())
        .collect();
    let phi = Automorphism::linear(x.shape(), &m)?;
    Ok((lie::pushforward(&phi, x)?, phi, d, eps))
}

fn collect_resonant(x: &VectorField<G>, eigen: &EigenData, eps: &[u8]) -> Vec<ResonantCoeff> {
    let mut out = Vec::new();
    for idx in pair_sequence(x.n(), x.degree_cap()) {
        let mut g = pair_coeff(x, &idx);
        let (k, j) = (idx.k(), idx.j());
        if k.iter().all(|&v| v == 0) {
            g = g.sub(&LaurentPoly::constant(eigen.mu()[j].clone()));
        }
        if is_eps_pair(k, j) && eps[j] == 1 {
            g = g.sub(&LaurentPoly::one());
        }
        for (e, c) in g.terms() {
            out.push(ResonantCoeff {
                k: k.to_vec(),
                j,
                x_exp: e as i64,
                coeff: c.clone(),
            });
        }
    }
    out
}

/// `K = e_{j−1} − e_j`, the pair of `z_{j−1}∂_{z_j}`.
fn is_eps_pair(k: &[i32], j: usize) -> bool {
    j > 0
        && k.iter().enumerate().all(|(i, &v)| match i {
            _ if i == j => v == -1,
            _ if i + 1 == j => v == 1,
            _ => v == 0,
        })
}

/// `pushforward(Φ, X) − Y`; the zero field certifies the conjugation at
/// the shared truncation.
pub fn verify_conjugation(
    phi: &Automorphism<G>,
    x: &VectorField<G>,
    y: &VectorField<G>,
) -> Result<VectorField<G>> {
    lie::pushforward(phi, x)?.try_sub(y)
}

/// Largest coefficient of a field by squared modulus, with its location.
pub fn max_coefficient(x: &VectorField<G>) -> Option<(usize, ZExp, i32, G)> {
    let mut best: Option<(usize, ZExp, i32, G)> = None;
    let comps = std::iter::once(x.a()).chain(x.b_all().iter());
    for (c, series) in comps.enumerate() {
        for (m, p) in series.terms() {
            for (e, v) in p.terms() {
                if best.as_ref().is_none_or(|b| v.norm_sqr() > b.3.norm_sqr()) {
                    best = Some((c, m.clone(), e, v.clone()));
                }
            }
        }
    }
    best
}

/// `X = x∂x + Σ` terms `c·x^e z^K L(e_j)` with `e + ⟨μ,K⟩ = 0` only, and
/// every constant `z_{j−1}∂_{z_j}` entry equal to 0 or 1.
pub fn has_normal_form_shape(x: &VectorField<G>, eigen: &EigenData) -> bool {
    if x.a() != &crate::series::TransverseSeries::x(x.shape()) {
        return false;
    }
    (0..x.n()).all(|j| {
        x.b(j).terms().all(|(m, p)| {
            let idx = VectorMonomialIndex::from_component(m, j);
            let s = integer_value(&pair_s(eigen, idx.k()));
            p.terms().all(|(e, c)| {
                let resonant = s.is_some_and(|v| v + e as i64 == 0);
                // Only the constant Jordan entry between equal eigenvalues is scaled to 1.
                let eps_slot = e == 0 && is_eps_pair(idx.k(), j) && eigen.mu()[j] == eigen.mu()[j - 1];
                let eps_ok = !eps_slot || c.is_zero() || *c == G::from_integer(1);
                resonant && eps_ok
            })
        })
    })
}
