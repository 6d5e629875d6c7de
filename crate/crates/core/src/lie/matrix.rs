//! Small dense matrices over Laurent polynomials, used for `z`-linear parts.

use crate::coeff::{Coeff, LaurentPoly};

pub type LaurentMatrix<C> = Vec<Vec<LaurentPoly<C>>>;

pub fn identity<C: Coeff>(n: usize) -> LaurentMatrix<C> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| if i == k { LaurentPoly::one() } else { LaurentPoly::zero() })
                .collect()
        })
        .collect()
}

pub fn is_zero<C: Coeff>(m: &LaurentMatrix<C>) -> bool {
    m.iter().all(|row| row.iter().all(LaurentPoly::is_zero))
}

pub fn is_constant<C: Coeff>(m: &LaurentMatrix<C>) -> bool {
    m.iter().all(|row| row.iter().all(LaurentPoly::is_constant))
}

pub fn mul<C: Coeff>(a: &LaurentMatrix<C>, b: &LaurentMatrix<C>, x_cap: Option<i32>) -> LaurentMatrix<C> {
    let n = a.len();
    let mut out = vec![vec![LaurentPoly::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul_capped(&b[k][j], x_cap));
                }
            }
        }
    }
    out
}

fn constant_part<C: Coeff>(m: &LaurentMatrix<C>) -> Vec<Vec<C>> {
    m.iter().map(|row| row.iter().map(|p| p.coeff(0)).collect()).collect()
}

fn lift<C: Coeff>(m: Vec<Vec<C>>) -> LaurentMatrix<C> {
    m.into_iter()
        .map(|row| row.into_iter().map(LaurentPoly::constant).collect())
        .collect()
}

/// Gauss–Jordan inverse over the coefficient field.
pub fn inverse_scalar<C: Coeff>(m: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut inv: Vec<Vec<C>> = (0..n)
        .map(|i| (0..n).map(|k| if i == k { C::one() } else { C::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inv()?;
        for k in 0..n {
            a[col][k] = a[col][k].clone() * &p;
            inv[col][k] = inv[col][k].clone() * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for k in 0..n {
                let t = f.clone() * &a[col][k];
                a[r][k] -= &t;
                let t = f.clone() * &inv[col][k];
                inv[r][k] -= &t;
            }
        }
    }
    Some(inv)
}

fn determinant<C: Coeff>(m: &LaurentMatrix<C>) -> LaurentPoly<C> {
    let n = m.len();
    match n {
        0 => LaurentPoly::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut det = LaurentPoly::zero();
            for k in 0..n {
                if m[0][k].is_zero() {
                    continue;
                }
                let term = m[0][k].mul(&determinant(&minor(m, 0, k)));
                det = if k % 2 == 0 { det.add(&term) } else { det.sub(&term) };
            }
            det
        }
    }
}

fn minor<C: Coeff>(m: &LaurentMatrix<C>, row: usize, col: usize) -> LaurentMatrix<C> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(k, _)| *k != col)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

/// Inverse of a matrix over Laurent polynomials, when it exists and is
/// computable here.
///
/// Without an `x` cap the determinant must be a unit (a single monomial).
/// With a cap the matrix must be Taylor with invertible value at `x = 0`;
/// the inverse is then the truncated Neumann series.
pub fn inverse<C: Coeff>(m: &LaurentMatrix<C>, x_cap: Option<i32>) -> Option<LaurentMatrix<C>> {
    let n = m.len();
    if is_constant(m) {
        return inverse_scalar(&constant_part(m)).map(lift);
    }
    match x_cap {
        Some(_) => {
            if !m.iter().all(|row| row.iter().all(LaurentPoly::is_taylor)) {
                return None;
            }
            let a0_inv = lift(inverse_scalar(&constant_part(m))?);
            let rest: LaurentMatrix<C> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| p.sub(&LaurentPoly::constant(p.coeff(0))))
                        .collect()
                })
                .collect();
            // -(A0⁻¹ R) has x-order ≥ 1, so its powers die past the cap.
            let step: LaurentMatrix<C> = mul(&a0_inv, &rest, x_cap)
                .into_iter()
                .map(|row| row.iter().map(LaurentPoly::neg).collect())
                .collect();
            let mut power = identity::<C>(n);
            let mut sum = identity::<C>(n);
            loop {
                power = mul(&power, &step, x_cap);
                if is_zero(&power) {
                    break;
                }
                for i in 0..n {
                    for k in 0..n {
                        sum[i][k] = sum[i][k].add(&power[i][k]);
                    }
                }
            }
            Some(mul(&sum, &a0_inv, x_cap))
        }
        None => {
            let det = determinant(m);
            if det.len() != 1 {
                return None;
            }
            let e = det.min_exp()?;
            let c_inv = det.coeff(e).inv()?;
            let unit_inv = LaurentPoly::monomial(c_inv, -e);
            let mut out = vec![vec![LaurentPoly::zero(); n]; n];
            for (i, row) in out.iter_mut().enumerate() {
                for (k, entry) in row.iter_mut().enumerate() {
                    // adj[i][k] = (-1)^{i+k} det(minor(k, i))
                    let cof = determinant(&minor(m, k, i)).mul(&unit_inv);
                    *entry = if (i + k) % 2 == 0 { cof } else { cof.neg() };
                }
            }
            Some(out)
        }
    }
}
