use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::lie::Automorphism;
use crate::series::{TransverseSeries, ZExp};

type C = Complex64;

/// The monomials `z^M`, `1 ≤ |M| ≤ d`, with a product table.
#[derive(Debug)]
pub struct JetSpace {
    n: usize,
    degree: u32,
    monomials: Vec<ZExp>,
    index: HashMap<ZExp, usize>,
    /// For each monomial, the pairs `(a, b)` with `z^a · z^b = z^c`.
    products: Vec<Vec<(usize, usize)>>,
}

impl JetSpace {
    pub fn new(n: usize, degree: u32) -> Arc<Self> {
        let monomials = ZExp::all_up_to(n, 1, degree);
        let index: HashMap<ZExp, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut products = vec![Vec::new(); monomials.len()];
        for (a, ma) in monomials.iter().enumerate() {
            for (b, mb) in monomials.iter().enumerate() {
                if ma.degree() + mb.degree() <= degree {
                    products[index[&ma.add(mb)]].push((a, b));
                }
            }
        }
        Arc::new(JetSpace {
            n,
            degree,
            monomials,
            index,
            products,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[ZExp] {
        &self.monomials
    }

    pub fn index_of(&self, m: &ZExp) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Truncated product of two scalar jets without constant terms.
    pub(crate) fn mul(&self, a: &[C], b: &[C], out: &mut [C]) {
        for (c, pairs) in self.products.iter().enumerate() {
            let mut s = C::new(0.0, 0.0);
            for &(i, k) in pairs {
                s += a[i] * b[k];
            }
            out[c] = s;
        }
    }

    /// `Z^M` for every monomial `M`, given the component jets `Z`.
    pub(crate) fn powers(&self, z: &[&[C]]) -> Vec<Vec<C>> {
        let t = self.len();
        let mut out: Vec<Vec<C>> = Vec::with_capacity(t);
        for m in &self.monomials {
            let mut v = vec![C::new(0.0, 0.0); t];
            if m.degree() == 1 {
                let i = (0..self.n).find(|&i| m.get(i) == 1).expect("unit exponent");
                v.copy_from_slice(z[i]);
            } else {
                let i = (0..self.n).find(|&i| m.get(i) > 0).expect("nonzero exponent");
                let lower = self.index[&m.lower(i).expect("positive entry")];
                self.mul(&out[lower], z[i], &mut v);
            }
            out.push(v);
        }
        out
    }
}

/// A truncated map germ `z ↦ (φ₁(z), …, φₙ(z))` fixing the origin.
#[derive(Clone, Debug)]
pub struct MapJet {
    space: Arc<JetSpace>,
    comps: Vec<Vec<C>>,
}

impl PartialEq for MapJet {
    fn eq(&self, other: &Self) -> bool {
        self.space.n == other.space.n
            && self.space.degree == other.space.degree
            && self.comps == other.comps
    }
}

impl MapJet {
    pub fn zero(space: Arc<JetSpace>) -> Self {
        let comps = vec![vec![C::new(0.0, 0.0); space.len()]; space.n];
        MapJet { space, comps }
    }

    pub fn identity(space: Arc<JetSpace>) -> Self {
        let mut out = Self::zero(space);
        for i in 0..out.space.n {
            let k = out.space.index[&ZExp::unit(out.space.n, i)];
            out.comps[i][k] = C::new(1.0, 0.0);
        }
        out
    }

    /// Component jets from series evaluated at `x = x0`.
    pub fn from_series(space: Arc<JetSpace>, comps: &[TransverseSeries<C>], x0: C) -> Self {
        let mut out = Self::zero(space);
        for (i, s) in comps.iter().enumerate() {
            for (m, v) in s.eval_x(x0) {
                if let Some(k) = out.space.index_of(&m) {
                    out.comps[i][k] += v;
                }
            }
        }
        out
    }

    /// The transverse part of `Ψ` on the fibre `x = x0`.
    pub fn from_automorphism<D: crate::coeff::Coeff>(
        space: Arc<JetSpace>,
        psi: &Automorphism<D>,
        x0: C,
    ) -> Self {
        let comps: Vec<TransverseSeries<C>> =
            psi.img_z_all().iter().map(|s| s.to_complex()).collect();
        Self::from_series(space, &comps, x0)
    }

    pub(crate) fn from_flat(space: Arc<JetSpace>, flat: &[C]) -> Self {
        let t = space.len();
        let comps = flat.chunks(t).map(<[C]>::to_vec).collect();
        MapJet { space, comps }
    }

    pub(crate) fn to_flat(&self) -> Vec<C> {
        self.comps.concat()
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn degree(&self) -> u32 {
        self.space.degree
    }

    pub fn component(&self, i: usize) -> &[C] {
        &self.comps[i]
    }

    pub fn coeff(&self, i: usize, m: &ZExp) -> C {
        self.space
            .index_of(m)
            .map_or(C::new(0.0, 0.0), |k| self.comps[i][k])
    }

    /// Entry `[i][k]` is `∂φᵢ/∂z_k` at the origin.
    pub fn linear_part(&self) -> Vec<Vec<C>> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|k| self.coeff(i, &ZExp::unit(n, k))).collect())
            .collect()
    }

    /// `self ∘ inner`, truncated.
    pub fn compose(&self, inner: &MapJet) -> MapJet {
        let sp = &self.space;
        let z: Vec<&[C]> = inner.comps.iter().map(Vec::as_slice).collect();
        let pw = sp.powers(&z);
        let mut out = MapJet::zero(sp.clone());
        for (i, comp) in self.comps.iter().enumerate() {
            for (m, &c) in comp.iter().enumerate() {
                if c != C::new(0.0, 0.0) {
                    for (o, p) in out.comps[i].iter_mut().zip(&pw[m]) {
                        *o += c * p;
                    }
                }
            }
        }
        out
    }

    /// `φ(z)` at a point.
    pub fn eval(&self, z: &[C]) -> Vec<C> {
        let n = self.n();
        let values: Vec<C> = self
            .space
            .monomials
            .iter()
            .map(|m| (0..n).fold(C::new(1.0, 0.0), |acc, i| acc * z[i].powu(m.get(i) as u32)))
            .collect();
        self.comps
            .iter()
            .map(|comp| comp.iter().zip(&values).map(|(c, v)| c * v).sum())
            .collect()
    }

    /// Largest coefficient modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &MapJet) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).norm()))
            .fold(0.0, f64::max)
    }

    /// `(direction, z-exponent, coefficient)` for every nonzero entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &ZExp, C)> + '_ {
        self.comps.iter().enumerate().flat_map(move |(i, comp)| {
            comp.iter()
                .enumerate()
                .filter(|(_, c)| **c != C::new(0.0, 0.0))
                .map(move |(k, c)| (i, &self.space.monomials[k], *c))
        })
    }
}
