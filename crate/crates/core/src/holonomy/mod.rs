//! Numeric holonomy of the separatrix `{z = 0}`: jet transport of the
//! transverse return map over `x = e^{2πiθ}`, pointwise path lifting, and
//! conjugacy checks. Everything here runs in complex floats.

mod integrator;
mod jet;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::lie::{self, Automorphism, VectorField};
use crate::series::{TransverseSeries, ZExp};

pub use integrator::{integrate, IntegrationStats, IntegratorOptions};
pub use jet::{JetSpace, MapJet};

type C = Complex64;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_ESCAPE_RADIUS: f64 = 1e3;

/// A piecewise-linear curve in the logarithmic coordinate `w`, `x = e^w`,
/// so it never meets `x = 0`. Segment `k` is traversed for `t ∈ [k, k+1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    log_vertices: Vec<C>,
    /// `|z|` beyond which a lift is reported as escaping.
    pub escape_radius: f64,
    pub max_steps: usize,
}

impl PathSpec {
    pub fn from_log_vertices(log_vertices: Vec<C>) -> Result<Self> {
        if log_vertices.len() < 2 || log_vertices.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::Usage("a path needs at least two finite vertices".into()));
        }
        Ok(PathSpec {
            log_vertices,
            escape_radius: DEFAULT_ESCAPE_RADIUS,
            max_steps: IntegratorOptions::default().max_steps,
        })
    }

    /// `θ ↦ e^{2πiθ}`, `θ ∈ [0, windings]`; negative windings run clockwise.
    pub fn circle(windings: f64) -> Self {
        Self::from_log_vertices(vec![C::new(0.0, 0.0), C::new(0.0, 2.0 * PI * windings)])
            .expect("two vertices")
    }

    /// `t ↦ x₀·(x₁/x₀)^t` along the ray, `x₀, x₁` of equal argument.
    pub fn radial(x0: C, x1: C) -> Result<Self> {
        if x0 == C::new(0.0, 0.0) || x1 == C::new(0.0, 0.0) {
            return Err(Error::Usage("radial path through x = 0".into()));
        }
        let w0 = x0.ln();
        Self::from_log_vertices(vec![w0, C::new(x1.norm().ln(), w0.im)])
    }

    pub fn log_vertices(&self) -> &[C] {
        &self.log_vertices
    }

    pub fn start(&self) -> C {
        self.log_vertices[0].exp()
    }

    pub fn end(&self) -> C {
        self.log_vertices[self.log_vertices.len() - 1].exp()
    }

    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.log_vertices.reverse();
        out
    }

    pub fn with_escape_radius(mut self, r: f64) -> Self {
        self.escape_radius = r;
        self
    }

    fn segments(&self) -> impl Iterator<Item = (C, C)> + '_ {
        self.log_vertices
            .windows(2)
            .map(|w| (w[0], w[1] - w[0]))
            .filter(|(_, dw)| dw.norm() > 0.0)
    }
}

/// The `z`-components of an `x∂x`-normalized field as complex data:
/// `Bⱼ = Σ_M Σ_e c·x^e z^M`.
type Component = Vec<(ZExp, Vec<(i32, C)>)>;

struct TransverseData {
    n: usize,
    comps: Vec<Component>,
}

impl TransverseData {
    fn new<D: Coeff>(x: &VectorField<D>) -> Result<Self> {
        let shape = x.shape();
        if x.a().map_coeffs(|c| c.to_complex()) != TransverseSeries::x(shape).map_coeffs(|c: &C| *c) {
            return Err(Error::Precondition(
                "holonomy needs an x-component equal to x".into(),
            ));
        }
        if !x.b_all().iter().all(|b| b.in_power(1)) {
            return Err(Error::Precondition(
                "z-components must vanish on the separatrix z = 0".into(),
            ));
        }
        let comps = x
            .b_all()
            .iter()
            .map(|b| {
                b.terms()
                    .map(|(m, p)| (m.clone(), p.terms().map(|(e, c)| (e, c.to_complex())).collect()))
                    .collect()
            })
            .collect();
        Ok(TransverseData { n: shape.n, comps })
    }

    fn coefficient(poly: &[(i32, C)], w: C) -> C {
        poly.iter().map(|&(e, c)| c * (w * e as f64).exp()).sum()
    }

    /// `B(e^w, z)` at a point.
    fn eval_point(&self, w: C, z: &[C], out: &mut [C]) {
        for (o, comp) in out.iter_mut().zip(&self.comps) {
            let mut s = C::new(0.0, 0.0);
            for (m, poly) in comp {
                let mono = (0..self.n).fold(C::new(1.0, 0.0), |acc, i| acc * z[i].powu(m.get(i) as u32));
                s += Self::coefficient(poly, w) * mono;
            }
            *o = s;
        }
    }

    /// `B(e^w, Z)` for a map jet `Z`, flattened.
    fn eval_jet(&self, space: &JetSpace, w: C, flat: &[C], out: &mut [C]) {
        let t = space.len();
        let z: Vec<&[C]> = flat.chunks(t).collect();
        let pw = space.powers(&z);
        out.iter_mut().for_each(|o| *o = C::new(0.0, 0.0));
        for (j, comp) in self.comps.iter().enumerate() {
            let slot = &mut out[j * t..(j + 1) * t];
            for (m, poly) in comp {
                if let Some(k) = space.index_of(m) {
                    let c = Self::coefficient(poly, w);
                    for (o, p) in slot.iter_mut().zip(&pw[k]) {
                        *o += c * p;
                    }
                }
            }
        }
    }
}

/// Transport of a `z`-jet along a path; along segment `w₀ + tΔw` the
/// leaves satisfy `dz/dt = Δw · B(e^w, z)`.
fn transport_jet(
    data: &TransverseData,
    space: &Arc<JetSpace>,
    path: &PathSpec,
    start: &MapJet,
    tol: f64,
) -> Result<(MapJet, IntegrationStats)> {
    let opts = IntegratorOptions {
        max_steps: path.max_steps,
        ..IntegratorOptions::with_tol(tol)
    };
    let mut y = start.to_flat();
    let mut total = IntegrationStats::default();
    for (w0, dw) in path.segments() {
        let rhs = |t: f64, y: &[C], out: &mut [C]| -> Result<()> {
            data.eval_jet(space, w0 + dw * t, y, out);
            out.iter_mut().for_each(|o| *o *= dw);
            Ok(())
        };
        let (next, stats) = integrate(rhs, 0.0, 1.0, &y, &opts)?;
        y = next;
        total.accepted += stats.accepted;
        total.rejected += stats.rejected;
    }
    Ok((MapJet::from_flat(space.clone(), &y), total))
}

/// The return map on the transversal `x = 1`, as a jet of degree `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyJet {
    pub jet: MapJet,
    pub base_point: C,
    pub tol: f64,
    pub stats: IntegrationStats,
}

impl HolonomyJet {
    pub fn n(&self) -> usize {
        self.jet.n()
    }

    pub fn degree(&self) -> u32 {
        self.jet.degree()
    }

    pub fn coeff(&self, j: usize, m: &ZExp) -> C {
        self.jet.coeff(j, m)
    }

    pub fn linear_part(&self) -> Vec<Vec<C>> {
        self.jet.linear_part()
    }
}

/// Holonomy along `θ ↦ e^{2πiθ}`, `θ ∈ [0, 1]`.
pub fn holonomy_jet<D: Coeff>(x: &VectorField<D>, d: u32, tol: f64) -> Result<HolonomyJet> {
    holonomy_jet_along(x, &PathSpec::circle(1.0), d, tol)
}

/// Jet of the leaf transport along a closed or open path based at `x = 1`.
pub fn holonomy_jet_along<D: Coeff>(
    x: &VectorField<D>,
    path: &PathSpec,
    d: u32,
    tol: f64,
) -> Result<HolonomyJet> {
    if d < 1 {
        return Err(Error::Usage("jet degree must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Usage("tolerance must be positive".into()));
    }
    let data = TransverseData::new(x)?;
    let space = JetSpace::new(data.n, d);
    let (jet, stats) = transport_jet(&data, &space, path, &MapJet::identity(space.clone()), tol)?;
    Ok(HolonomyJet {
        jet,
        base_point: path.start(),
        tol,
        stats,
    })
}

/// Lifts `path` through the leaf of `x` passing over `start = (x₀, z₀)`.
/// The `x`-coordinate follows the path exactly.
pub fn path_lift<D: Coeff>(
    x: &VectorField<D>,
    start: (C, &[C]),
    path: &PathSpec,
    tol: f64,
) -> Result<(C, Vec<C>)> {
    let data = TransverseData::new(x)?;
    lift_with(&data, start, path, tol)
}

fn lift_with(data: &TransverseData, start: (C, &[C]), path: &PathSpec, tol: f64) -> Result<(C, Vec<C>)> {
    let (x0, z0) = start;
    if z0.len() != data.n {
        return Err(Error::ShapeMismatch(format!("{} z-coordinates for n = {}", z0.len(), data.n)));
    }
    if (x0 - path.start()).norm() > 1e-9 * x0.norm().max(1.0) {
        return Err(Error::Usage(format!("path starts at {} but the point lies over {x0}", path.start())));
    }
    let opts = IntegratorOptions {
        max_steps: path.max_steps,
        ..IntegratorOptions::with_tol(tol)
    };
    let radius = path.escape_radius;
    let mut y = z0.to_vec();
    for (w0, dw) in path.segments() {
        let rhs = |t: f64, z: &[C], out: &mut [C]| -> Result<()> {
            let norm = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if norm.is_nan() || norm > radius {
                return Err(Error::Escape { t, norm });
            }
            data.eval_point(w0 + dw * t, z, out);
            out.iter_mut().for_each(|o| *o *= dw);
            Ok(())
        };
        y = integrate(rhs, 0.0, 1.0, &y, &opts)?.0;
    }
    Ok((path.end(), y))
}

/// Conjugacy defect of the holonomies of `X` and `Y = pushforward(Ψ, X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyReport {
    /// Largest coefficient of `h_X ∘ ψ − ψ ∘ h_Y` through degree `d`.
    pub residual: f64,
    pub h_x: HolonomyJet,
    pub h_y: HolonomyJet,
    pub psi: MapJet,
}

/// With `Y = pushforward(Ψ, X)` the point map `ψ` of `Ψ` carries leaves
/// of `Y` to leaves of `X`, so `h_X ∘ ψ = ψ ∘ h_Y` on `x = 1`.
pub fn conjugacy_residual<D: Coeff>(
    x: &VectorField<D>,
    psi: &Automorphism<D>,
    d: u32,
    tol: f64,
) -> Result<ConjugacyReport> {
    if !psi.is_x_normalized() {
        return Err(Error::Precondition(format!("{psi} is not x-normalized")));
    }
    let y = lie::pushforward(psi, x)?;
    let (h_x, h_y) = std::thread::scope(|s| {
        let hx = s.spawn(|| holonomy_jet(x, d, tol));
        let hy = holonomy_jet(&y, d, tol);
        (hx.join().expect("holonomy thread"), hy)
    });
    let (h_x, h_y) = (h_x?, h_y?);
    let space = h_x.jet.space().clone();
    let psi_jet = MapJet::from_automorphism(space, psi, C::new(1.0, 0.0));
    let residual = h_x.jet.compose(&psi_jet).max_abs_diff(&psi_jet.compose(&h_y.jet));
    Ok(ConjugacyReport {
        residual,
        h_x,
        h_y,
        psi: psi_jet,
    })
}

/// The curves from `x₀` to `1`: radially to the unit circle, then
/// clockwise to `1` with `extra_windings` additional clockwise turns.
pub fn base_path(x0: C, extra_windings: u32) -> Result<PathSpec> {
    if x0 == C::new(0.0, 0.0) {
        return Err(Error::Usage("base point over x = 0".into()));
    }
    let theta = x0.arg().rem_euclid(2.0 * PI);
    PathSpec::from_log_vertices(vec![
        C::new(x0.norm().ln(), theta),
        C::new(0.0, theta),
        C::new(0.0, -2.0 * PI * extra_windings as f64),
    ])
}

/// Evaluates the map built from a transversal conjugacy `φ`: follow the
/// leaves of `F` from `(x₀, z₀)` to `x = 1`, apply `φ`, and come back
/// along the same curves through the leaves of `G`.
pub fn transport_conjugacy<D: Coeff>(
    f: &VectorField<D>,
    g: &VectorField<D>,
    phi: &MapJet,
    point: (C, &[C]),
    tol: f64,
    extra_windings: u32,
) -> Result<(C, Vec<C>)> {
    let df = TransverseData::new(f)?;
    let dg = TransverseData::new(g)?;
    let path = base_path(point.0, extra_windings)?;
    // Rebase the start exactly on the path so round-off in arg() is harmless.
    let (_, z1) = lift_with(&df, (path.start(), point.1), &path, tol)?;
    let w = phi.eval(&z1);
    let back = path.reversed();
    let (_, z2) = lift_with(&dg, (back.start(), &w), &back, tol)?;
    Ok((point.0, z2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{GaussianRational, LaurentPoly};
    use crate::series::Shape;

    type G = GaussianRational;

    fn resonant_example(d: u32) -> VectorField<G> {
        let shape = Shape::new(1, d);
        &VectorField::semisimple(shape, &[G::from_integer(-1)]).unwrap()
            + &VectorField::z_term(shape, 0, ZExp::new(vec![2]), LaurentPoly::x())
    }

    #[test]
    fn imaginary_linear_holonomy() {
        let x = VectorField::semisimple(Shape::new(1, 2), &[G::i()]).unwrap();
        let h = holonomy_jet(&x, 2, 1e-12).unwrap();
        let c = h.coeff(0, &ZExp::new(vec![1]));
        assert!((c - C::new((-2.0 * PI).exp(), 0.0)).norm() < 1e-10, "{c}");
    }

    #[test]
    fn minus_one_is_identity() {
        let x = VectorField::semisimple(Shape::new(1, 2), &[G::from_integer(-1)]).unwrap();
        let h = holonomy_jet(&x, 2, 1e-12).unwrap();
        assert!((h.coeff(0, &ZExp::new(vec![1])) - C::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn resonant_second_coefficient() {
        let h = holonomy_jet(&resonant_example(3), 2, 1e-12).unwrap();
        let c2 = h.coeff(0, &ZExp::new(vec![2]));
        assert!((c2 - C::new(0.0, 2.0 * PI)).norm() < 1e-9, "{c2}");
    }

    #[test]
    fn radial_lift_scales() {
        let x = VectorField::semisimple(Shape::new(1, 2), &[G::from_integer(1)]).unwrap();
        let e = std::f64::consts::E;
        let path = PathSpec::radial(C::new(1.0, 0.0), C::new(e, 0.0)).unwrap();
        let (x1, z1) = path_lift(&x, (C::new(1.0, 0.0), &[C::new(0.1, 0.0)]), &path, 1e-12).unwrap();
        assert!((x1 - C::new(e, 0.0)).norm() < 1e-12);
        assert!((z1[0] - C::new(0.1 * e, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn escape_reported() {
        // |z| grows by e^{2π} around the circle when μ = −i.
        let x = VectorField::semisimple(Shape::new(1, 2), &[-G::i()]).unwrap();
        let path = PathSpec::circle(1.0).with_escape_radius(1.0);
        let r = path_lift(&x, (C::new(1.0, 0.0), &[C::new(0.01, 0.0)]), &path, 1e-10);
        assert!(matches!(r, Err(Error::Escape { .. })));
    }

    #[test]
    fn base_path_lands_on_one() {
        let p = base_path(C::new(-0.5, 0.5), 1).unwrap();
        assert!((p.end() - C::new(1.0, 0.0)).norm() < 1e-15);
        assert!((p.start() - C::new(-0.5, 0.5)).norm() < 1e-15);
    }
}
