//! Exact linear systems over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Solves `a x = b_k` for every right-hand side `b_k` by fraction-free
/// (Bareiss) elimination on the integer-scaled augmented matrix.
pub fn solve_many(a: &[Vec<Rat>], bs: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n = a.len();
    let k = bs.len();
    if a.iter().any(|row| row.len() != n) || bs.iter().any(|b| b.len() != n) {
        return Err(Error::Internal("linear system with mismatched dimensions".into()));
    }
    // Scale each row by the lcm of its denominators.
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let entries: Vec<&Rat> = a[i].iter().chain(bs.iter().map(|b| &b[i])).collect();
        let l = entries.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        m.push(entries.iter().map(|r| r.numer() * (&l / r.denom())).collect());
    }
    let mut prev = BigInt::one();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).ok_or_else(|| Error::Internal("singular linear system".into()))?;
        m.swap(c, p);
        for r in c + 1..n {
            for j in c + 1..n + k {
                let v = (&m[r][j] * &m[c][c] - &m[r][c] * &m[c][j]) / &prev;
                m[r][j] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    let mut out = vec![vec![Rat::zero(); n]; k];
    for (col, x) in out.iter_mut().enumerate() {
        for i in (0..n).rev() {
            let mut s = Rat::from_integer(m[i][n + col].clone());
            for j in i + 1..n {
                s -= Rat::from_integer(m[i][j].clone()) * &x[j];
            }
            x[i] = s / Rat::from_integer(m[i][i].clone());
        }
    }
    Ok(out)
}

pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    Ok(solve_many(a, &[b.to_vec()])?.pop().unwrap_or_default())
}
