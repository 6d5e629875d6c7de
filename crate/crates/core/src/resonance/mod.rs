//! Resonance arithmetic for the transverse eigenvalues `μ`: enumeration of
//! resonant monomials, the no-transverse-negative-resonance decision and
//! the dimension two and three classifiers.

mod classify;
mod ntnr;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::coeff::GaussianRational;
use crate::error::{Error, Result};
use crate::series::grlex_cmp;

pub use classify::{classify_dim2, classify_dim3, Case3, Class2, Classification3, Witness3};
pub use ntnr::{decide_ntnr, NtnrDecision, EXACT_ARITY_LIMIT};

/// Transverse eigenvalues `μ₁,…,μₙ` (the `x`-direction eigenvalue is 1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EigenData {
    mu: Vec<GaussianRational>,
}

impl EigenData {
    pub fn new(mu: Vec<GaussianRational>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::Usage("at least one transverse eigenvalue is required".into()));
        }
        Ok(EigenData { mu })
    }

    pub fn mu(&self) -> &[GaussianRational] {
        &self.mu
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// `⟨μ, K⟩`.
    pub fn pairing(&self, k: &[i32]) -> GaussianRational {
        pairing(&self.mu, k)
    }
}

pub(crate) fn pairing(mu: &[GaussianRational], k: &[i32]) -> GaussianRational {
    let mut s = GaussianRational::zero();
    for (m, &ki) in mu.iter().zip(k) {
        if ki != 0 {
            s += &(m * &GaussianRational::from_integer(ki as i64));
        }
    }
    s
}

/// The integer value of a Gaussian rational, if it is one and fits.
pub(crate) fn integer_value(v: &GaussianRational) -> Option<i64> {
    v.as_integer().and_then(|b: BigInt| b.to_i64())
}

/// A resonant index `K ∈ 𝓛_{n,1}` with `s = ⟨μ,K⟩ ∈ ℤ_{≤0}`; the surviving
/// monomial carries `x^{x_exp}` with `x_exp = −s`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResonantIndex {
    pub k: Vec<i32>,
    pub s: i64,
    pub x_exp: i64,
}

/// `⟨μ, p⟩ = μ_j + q` with `p ≥ 0`, `|p| ≥ 1`, `q ≥ 1`; equivalently
/// `K = p − e_j ∈ 𝓛_{n,0}` with `⟨μ,K⟩ = q`. `j` is zero-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NegativeResonance {
    pub p: Vec<u32>,
    pub j: usize,
    pub q: i64,
}

impl NegativeResonance {
    pub(crate) fn from_k(k: &[i32], j: usize, q: i64) -> Self {
        let p = k
            .iter()
            .enumerate()
            .map(|(i, &v)| (v + i32::from(i == j)) as u32)
            .collect();
        NegativeResonance { p, j, q }
    }

    /// `K = p − e_j`.
    pub fn k(&self) -> Vec<i32> {
        self.p
            .iter()
            .enumerate()
            .map(|(i, &v)| v as i32 - i32::from(i == self.j))
            .collect()
    }

    pub fn k_degree(&self) -> i32 {
        self.k().iter().sum()
    }

    /// `|K| = 0`, the cases present in the `𝓛_{n,0}` reading but absent
    /// from a reading that requires `|K| ≥ 1`.
    pub fn degree_zero(&self) -> bool {
        self.k_degree() == 0
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResonanceReport {
    pub resonant: Vec<ResonantIndex>,
    pub degree_bound: u32,
    pub negative: Option<NegativeResonance>,
}

impl ResonanceReport {
    pub fn negative_resonance_found(&self) -> bool {
        self.negative.is_some()
    }
}

/// All `K ∈ 𝓛_n` (at most one entry `−1`, the rest `≥ 0`) with
/// `lo ≤ |K| ≤ hi`, in ascending graded-lex order.
pub fn lattice_indices(n: usize, lo: i32, hi: i32) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for deg in lo.max(-1)..=hi {
        if deg >= 0 {
            let mut cur = vec![0i32; n];
            nonneg_with_sum(n, deg, 0, &mut cur, &mut out);
        }
        for neg in 0..n {
            let mut cur = vec![0i32; n];
            let start = out.len();
            nonneg_with_sum_skipping(n, deg + 1, 0, neg, &mut cur, &mut out);
            for k in &mut out[start..] {
                k[neg] = -1;
            }
        }
    }
    out.sort_by(|a, b| grlex_cmp(a, b));
    out
}

fn nonneg_with_sum(n: usize, rem: i32, i: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
    if i == n - 1 {
        cur[i] = rem;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for v in 0..=rem {
        cur[i] = v;
        nonneg_with_sum(n, rem - v, i + 1, cur, out);
    }
    cur[i] = 0;
}

fn nonneg_with_sum_skipping(
    n: usize,
    rem: i32,
    i: usize,
    skip: usize,
    cur: &mut Vec<i32>,
    out: &mut Vec<Vec<i32>>,
) {
    if rem < 0 {
        return;
    }
    if i == n {
        if rem == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if i == skip {
        nonneg_with_sum_skipping(n, rem, i + 1, skip, cur, out);
        return;
    }
    let last_free = (i + 1..n).all(|t| t == skip);
    if last_free {
        cur[i] = rem;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for v in 0..=rem {
        cur[i] = v;
        nonneg_with_sum_skipping(n, rem - v, i + 1, skip, cur, out);
    }
    cur[i] = 0;
}

/// The `j` values admissible for `K`: the index of its `−1` entry, or all
/// directions when `K ≥ 0`.
pub(crate) fn directions(k: &[i32]) -> Vec<usize> {
    match k.iter().position(|&v| v < 0) {
        Some(i) => vec![i],
        None => (0..k.len()).collect(),
    }
}

/// First negative resonance in pair order with `0 ≤ |K| ≤ hi`.
pub(crate) fn first_negative_resonance(mu: &[GaussianRational], hi: i32) -> Option<NegativeResonance> {
    for k in lattice_indices(mu.len(), 0, hi) {
        if let Some(q) = integer_value(&pairing(mu, &k)) {
            if q >= 1 {
                let j = directions(&k)[0];
                return Some(NegativeResonance::from_k(&k, j, q));
            }
        }
    }
    None
}

/// Resonant indices `K ∈ 𝓛_{n,1}`, `|K| ≤ d`, and the first negative
/// resonance with `|K| ≤ d`.
pub fn enumerate_resonances(eigen: &EigenData, d: u32) -> Result<ResonanceReport> {
    if d < 1 {
        return Err(Error::Usage("degree bound must be at least 1".into()));
    }
    let mu = eigen.mu();
    let resonant = lattice_indices(mu.len(), 1, d as i32)
        .into_iter()
        .filter_map(|k| {
            let s = integer_value(&pairing(mu, &k))?;
            (s <= 0).then_some(ResonantIndex { k, s, x_exp: -s })
        })
        .collect();
    Ok(ResonanceReport {
        resonant,
        degree_bound: d,
        negative: first_negative_resonance(mu, d as i32),
    })
}

/// Sign of a rational as an `Ordering` against zero.
pub(crate) fn sign(v: &num_rational::BigRational) -> Ordering {
    if v.is_positive() {
        Ordering::Greater
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}
