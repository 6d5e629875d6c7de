//! Exact decision of the no-transverse-negative-resonance condition.
//!
//! A negative resonance is `K = p − e_j` with `p ≥ 0`, `|p| ≥ 1` and
//! `⟨μ,K⟩ ∈ ℤ_{≥1}`. Writing `μ = α + iβ` this is the integer problem
//! `β·K = 0`, `α·K = q ≥ 1`. Two shapes of `K` occur:
//!
//! * `K ≥ 0`: a rational polyhedral cone question, settled by the extreme
//!   rays of `{K ≥ 0, β·K = 0}` for any `n`;
//! * `K_j = −1`: an affine problem in the other `n − 1` coordinates, solved
//!   exactly here when `n ≤ 3` by reduction to one-parameter progressions.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{first_negative_resonance, sign, EigenData, NegativeResonance};

/// Largest `n` for which the verdict is exact for every input.
pub const EXACT_ARITY_LIMIT: usize = 3;

/// Degree bound of the enumeration fallback used above the exact limit.
const FALLBACK_BOUND: i32 = 12;

/// Witnesses with `|K|` up to this are replaced by the graded-lex smallest
/// one found by enumeration.
const CANONICAL_SEARCH_LIMIT: i32 = 30;

/// Work limit for the residual bounded searches inside the exact procedure.
const SEARCH_BUDGET: u64 = 5_000_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NtnrDecision {
    /// True when no negative resonance exists (or none was found within
    /// `bound` when `exact` is false).
    pub holds: bool,
    pub witness: Option<NegativeResonance>,
    pub exact: bool,
    /// Degree bound of the enumeration, when the verdict relied on one.
    pub bound: Option<u32>,
}

pub fn decide_ntnr(eigen: &EigenData) -> NtnrDecision {
    let mu = eigen.mu();
    let n = mu.len();
    let alpha: Vec<BigRational> = mu.iter().map(|m| m.re().clone()).collect();
    let beta: Vec<BigRational> = mu.iter().map(|m| m.im().clone()).collect();

    let mut unknown = false;
    let mut found = homogeneous(&alpha, &beta);
    if found.is_none() {
        for j in 0..n {
            match affine(&alpha, &beta, j) {
                Search::Found(k) => {
                    found = Some(k);
                    break;
                }
                Search::None => {}
                Search::Unknown => unknown = true,
            }
        }
    }

    if let Some(k) = found {
        let deg: i64 = k.iter().sum();
        let witness = if deg <= CANONICAL_SEARCH_LIMIT as i64 {
            first_negative_resonance(mu, deg as i32)
        } else {
            witness_from(&k, mu)
        };
        return NtnrDecision {
            holds: false,
            witness,
            exact: true,
            bound: None,
        };
    }
    if unknown {
        let witness = first_negative_resonance(mu, FALLBACK_BOUND);
        return NtnrDecision {
            holds: witness.is_none(),
            exact: witness.is_some(),
            witness,
            bound: Some(FALLBACK_BOUND as u32),
        };
    }
    NtnrDecision {
        holds: true,
        witness: None,
        exact: true,
        bound: None,
    }
}

fn witness_from(k: &[i64], mu: &[crate::coeff::GaussianRational]) -> Option<NegativeResonance> {
    let k32: Vec<i32> = k.iter().map(|&v| i32::try_from(v).ok()).collect::<Option<_>>()?;
    let q = super::integer_value(&super::pairing(mu, &k32))?;
    let j = super::directions(&k32)[0];
    Some(NegativeResonance::from_k(&k32, j, q))
}

enum Search {
    Found(Vec<i64>),
    None,
    Unknown,
}

fn lcm_of_denominators<'a>(vals: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    vals.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scaled(v: &BigRational, l: &BigInt) -> BigInt {
    (v * BigRational::from_integer(l.clone())).to_integer()
}

/// `K ≥ 0`, `K ≠ 0`, `β·K = 0`, `α·K ∈ ℤ_{≥1}`.
fn homogeneous(alpha: &[BigRational], beta: &[BigRational]) -> Option<Vec<i64>> {
    let n = alpha.len();
    let mut rays: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        if beta[i].is_zero() {
            let mut r = vec![BigRational::zero(); n];
            r[i] = BigRational::one();
            rays.push(r);
        }
    }
    for i in 0..n {
        for k in 0..n {
            if beta[i].is_positive() && beta[k].is_negative() {
                let mut r = vec![BigRational::zero(); n];
                r[k] = beta[i].clone();
                r[i] = -beta[k].clone();
                rays.push(r);
            }
        }
    }
    for r in rays {
        let l = lcm_of_denominators(&r);
        let mut ints: Vec<BigInt> = r.iter().map(|v| scaled(v, &l)).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        for v in &mut ints {
            *v = &*v / &g;
        }
        let value: BigRational = alpha
            .iter()
            .zip(&ints)
            .map(|(a, k)| a * BigRational::from_integer(k.clone()))
            .fold(BigRational::zero(), |acc, v| acc + v);
        if value.is_positive() {
            let mult = value.denom().clone();
            return ints.iter().map(|k| (k * &mult).to_i64()).collect();
        }
    }
    None
}

/// `K_j = −1`, the remaining coordinates `p ≥ 0` with `|p| ≥ 1`.
fn affine(alpha: &[BigRational], beta: &[BigRational], j: usize) -> Search {
    let n = alpha.len();
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    if others.is_empty() {
        return Search::None;
    }
    if others.len() > EXACT_ARITY_LIMIT - 1 {
        return Search::Unknown;
    }
    let a: Vec<BigRational> = others.iter().map(|&i| alpha[i].clone()).collect();
    let b: Vec<BigRational> = others.iter().map(|&i| beta[i].clone()).collect();
    let solution = if b.iter().all(Zero::is_zero) {
        if !beta[j].is_zero() {
            return Search::None;
        }
        free_congruence(&a, &alpha[j])
    } else if b.len() == 1 {
        single_point(&a[0], &b[0], &alpha[j], &beta[j])
    } else {
        line(&a, &b, &alpha[j], &beta[j])
    };
    match solution {
        Search::Found(p) => {
            let mut k = vec![0i64; n];
            for (idx, &i) in others.iter().enumerate() {
                k[i] = p[idx];
            }
            k[j] = -1;
            Search::Found(k)
        }
        other => other,
    }
}

/// `v = α·p − α_j` is an integer `≥ 1`.
fn good_value(a: &[BigRational], p: &[BigInt], alpha_j: &BigRational) -> bool {
    let v = a
        .iter()
        .zip(p)
        .map(|(x, k)| x * BigRational::from_integer(k.clone()))
        .fold(-alpha_j.clone(), |acc, t| acc + t);
    v.is_integer() && v >= BigRational::one()
}

fn to_found(p: &[BigInt]) -> Search {
    match p.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>() {
        Some(v) => Search::Found(v),
        None => Search::Unknown,
    }
}

/// One free coordinate constrained by `b·p = β_j`.
fn single_point(a: &BigRational, b: &BigRational, alpha_j: &BigRational, beta_j: &BigRational) -> Search {
    let p = beta_j / b;
    if !p.is_integer() || p < BigRational::one() {
        return Search::None;
    }
    let p = [p.to_integer()];
    if good_value(std::slice::from_ref(a), &p, alpha_j) {
        to_found(&p)
    } else {
        Search::None
    }
}

/// Bezout coefficients of a list: `Σ uᵢ vᵢ = gcd(v)`, gcd nonnegative.
fn bezout(vals: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = vec![BigInt::zero(); vals.len()];
    for (i, v) in vals.iter().enumerate() {
        let (g2, s, t) = ext_gcd(&g, v);
        for c in coeffs.iter_mut().take(i) {
            *c = &*c * &s;
        }
        coeffs[i] = t;
        g = g2;
    }
    (g, coeffs)
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// No imaginary constraint: `Σ αᵢ pᵢ − α_j ∈ ℤ_{≥1}` over `p ≥ 0`, `p ≠ 0`.
fn free_congruence(a: &[BigRational], alpha_j: &BigRational) -> Search {
    let l = lcm_of_denominators(a.iter().chain(std::iter::once(alpha_j)));
    let big_a: Vec<BigInt> = a.iter().map(|v| scaled(v, &l)).collect();
    let c = scaled(alpha_j, &l);
    let m = big_a.len();

    if let Some(up) = big_a.iter().position(|v| v.is_positive()) {
        let mut vals = big_a.clone();
        vals.push(l.clone());
        let (g, u) = bezout(&vals);
        if !(&c % &g).is_zero() {
            return Search::None;
        }
        let factor = &c / &g;
        let mut p: Vec<BigInt> = u[..m].iter().map(|ui| (ui * &factor).mod_floor(&l)).collect();
        let value = |p: &[BigInt]| -> BigInt {
            big_a.iter().zip(p).map(|(x, k)| x * k).fold(-c.clone(), |acc, t| acc + t)
        };
        let v = value(&p);
        if v < l {
            // Each step of `l` in p[up] adds big_a[up]·l to the value.
            let step = &big_a[up] * &l;
            let need = (&l - &v + &step - BigInt::one()).div_floor(&step);
            p[up] += &need * &l;
        }
        if p.iter().all(Zero::is_zero) {
            p[up] += &l;
        }
        debug_assert!(good_value(a, &p, alpha_j));
        return to_found(&p);
    }

    // Every coefficient is ≤ 0, so the value is at most −c and bounded
    // ranges suffice.
    let slack = -&c - &l;
    if slack.is_negative() {
        return Search::None;
    }
    let ranges: Vec<BigInt> = big_a
        .iter()
        .map(|x| if x.is_zero() { BigInt::one() } else { &slack / (-x) })
        .collect();
    let total = ranges
        .iter()
        .try_fold(1u64, |acc, r| r.to_u64().and_then(|r| acc.checked_mul(r + 1)));
    match total {
        Some(t) if t <= SEARCH_BUDGET => {}
        _ => return Search::Unknown,
    }
    let mut p: Vec<BigInt> = vec![BigInt::zero(); m];
    loop {
        if !p.iter().all(Zero::is_zero) && good_value(a, &p, alpha_j) {
            return to_found(&p);
        }
        let mut i = 0;
        loop {
            if i == m {
                return Search::None;
            }
            p[i] += 1;
            if p[i] <= ranges[i] {
                break;
            }
            p[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Two coordinates on the line `b₁p₁ + b₂p₂ = β_j`.
fn line(a: &[BigRational], b: &[BigRational], alpha_j: &BigRational, beta_j: &BigRational) -> Search {
    let lb = lcm_of_denominators(b.iter().chain(std::iter::once(beta_j)));
    let (b1, b2, bj) = (scaled(&b[0], &lb), scaled(&b[1], &lb), scaled(beta_j, &lb));
    let (g, x, y) = ext_gcd(&b1, &b2);
    if !(&bj % &g).is_zero() {
        return Search::None;
    }
    let f = &bj / &g;
    let p0 = [x * &f, y * &f];
    let d = [&b2 / &g, -(&b1 / &g)];

    // t-interval keeping p(t) ≥ 0.
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for c in 0..2 {
        match sign_int(&d[c]) {
            Ordering::Greater => {
                let bound = ceil_div(&-&p0[c], &d[c]);
                lo = Some(lo.map_or(bound.clone(), |v| v.max(bound)));
            }
            Ordering::Less => {
                let bound = p0[c].div_floor(&-&d[c]);
                hi = Some(hi.map_or(bound.clone(), |v| v.min(bound)));
            }
            Ordering::Equal => {
                if p0[c].is_negative() {
                    return Search::None;
                }
            }
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return Search::None;
        }
    }

    let dot = |p: &[BigInt]| -> BigRational {
        a.iter()
            .zip(p)
            .map(|(x, k)| x * BigRational::from_integer(k.clone()))
            .fold(BigRational::zero(), |acc, t| acc + t)
    };
    let v0 = dot(&p0) - alpha_j;
    let delta = dot(&d);
    let l = v0.denom().lcm(delta.denom());
    let big_v0 = scaled(&v0, &l);
    let big_d = scaled(&delta, &l);

    // t·D ≡ −V0 (mod L).
    let g2 = big_d.gcd(&l);
    if !(&big_v0 % &g2).is_zero() {
        return Search::None;
    }
    let modulus = &l / &g2;
    let t0 = if modulus.is_one() {
        BigInt::zero()
    } else {
        let (_, inv, _) = ext_gcd(&(&big_d / &g2).mod_floor(&modulus), &modulus);
        ((-&big_v0 / &g2) * inv).mod_floor(&modulus)
    };
    let smallest_at_least = |base: &BigInt| -> BigInt { base + (&t0 - base).mod_floor(&modulus) };
    let largest_at_most = |base: &BigInt| -> BigInt { base - (base - &t0).mod_floor(&modulus) };

    let candidates: Vec<BigInt> = match sign_int(&big_d) {
        Ordering::Greater => match &hi {
            None => {
                let req = ceil_div(&(&l - &big_v0), &big_d);
                let base = lo.clone().map_or(req.clone(), |v| v.max(req));
                let t1 = smallest_at_least(&base);
                vec![t1.clone(), t1 + &modulus]
            }
            Some(h) => {
                let t1 = largest_at_most(h);
                vec![t1.clone(), t1 - &modulus]
            }
        },
        Ordering::Less => match &lo {
            None => {
                let req = (&big_v0 - &l).div_floor(&-&big_d);
                let base = hi.clone().map_or(req.clone(), |v| v.min(req));
                let t1 = largest_at_most(&base);
                vec![t1.clone(), t1 - &modulus]
            }
            Some(lw) => {
                let t1 = smallest_at_least(lw);
                vec![t1.clone(), t1 + &modulus]
            }
        },
        Ordering::Equal => match (&lo, &hi) {
            (Some(lw), _) => {
                let t1 = smallest_at_least(lw);
                vec![t1.clone(), t1 + &modulus]
            }
            (None, Some(h)) => {
                let t1 = largest_at_most(h);
                vec![t1.clone(), t1 - &modulus]
            }
            (None, None) => vec![t0.clone(), &t0 + &modulus],
        },
    };
    for t in candidates {
        if lo.as_ref().is_some_and(|v| &t < v) || hi.as_ref().is_some_and(|v| &t > v) {
            continue;
        }
        let p = [&p0[0] + &t * &d[0], &p0[1] + &t * &d[1]];
        if p.iter().all(Zero::is_zero) {
            continue;
        }
        if good_value(a, &p, alpha_j) {
            return to_found(&p);
        }
    }
    Search::None
}

fn sign_int(v: &BigInt) -> Ordering {
    sign(&BigRational::from_integer(v.clone()))
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}
