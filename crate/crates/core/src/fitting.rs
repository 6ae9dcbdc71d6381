//! Fitting invariants of relation matrices and the constant-rank
//! projectivity test built on them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{ideal_generated, unit_ideal, zero_ideal, Ideal};
use crate::module::{Matrix, Module};
use crate::ring::FiniteRing;

pub const DEFAULT_MINOR_CAP: usize = 6;

/// `F_0 ⊆ F_1 ⊆ … ⊆ F_m` for an `m × n` presentation. `F_i` is generated by
/// the `(m−i)`-minors, is zero when `m − i > n`, and is the whole ring for
/// `i ≥ m`. `F_{−1}` is taken to be zero.
#[derive(Clone, Debug, Serialize)]
pub struct FittingChain {
    pub rows: usize,
    pub cols: usize,
    ideals: Vec<Ideal>,
    #[serde(skip)]
    zero: Ideal,
}

impl FittingChain {
    pub fn get(&self, i: isize) -> &Ideal {
        if i < 0 {
            &self.zero
        } else {
            let i = (i as usize).min(self.rows);
            &self.ideals[i]
        }
    }

    /// `F_0, …, F_m`.
    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(r: &FiniteRing, m: &[Vec<usize>]) -> usize {
    match m.len() {
        0 => r.one(),
        1 => m[0][0],
        2 => r.sub(r.mul(m[0][0], m[1][1]), r.mul(m[0][1], m[1][0])),
        k => {
            let mut acc = 0;
            for j in 0..k {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<usize>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let term = r.mul(m[0][j], determinant(r, &minor));
                acc = if j % 2 == 0 { r.add(acc, term) } else { r.sub(acc, term) };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `k × k` minors of `a`.
pub fn minors(r: &FiniteRing, a: &Matrix, k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for rows in subsets(a.rows(), k) {
        for cols in subsets(a.cols(), k) {
            let sub: Vec<Vec<usize>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| a.get(i, j)).collect())
                .collect();
            out.push(determinant(r, &sub));
        }
    }
    out
}

pub fn fitting_ideals_of_matrix(r: &FiniteRing, a: &Matrix, minor_cap: usize) -> Result<FittingChain> {
    let m = a.rows();
    let mut ideals = Vec::with_capacity(m + 1);
    for i in 0..m {
        let k = m - i;
        if k > a.cols() {
            ideals.push(zero_ideal(r));
            continue;
        }
        if k > minor_cap {
            return Err(Error::cap("minor size", minor_cap as u128, k as u128));
        }
        ideals.push(ideal_generated(r, &minors(r, a, k)));
    }
    ideals.push(unit_ideal(r));
    for w in ideals.windows(2) {
        if !w[0].is_subset(&w[1]) {
            return Err(Error::Invariant("Fitting ideals do not form an ascending chain".into()));
        }
    }
    Ok(FittingChain {
        rows: m,
        cols: a.cols(),
        ideals,
        zero: zero_ideal(r),
    })
}

pub fn fitting_ideals(m: &Module) -> Result<FittingChain> {
    fitting_ideals_of_matrix(m.ring(), m.relations(), DEFAULT_MINOR_CAP)
}

/// Projective of constant rank `k` iff `F_{k−1} = 0` and `F_k = R`.
pub fn is_projective_constant_rank(m: &Module, k: usize) -> Result<bool> {
    let chain = fitting_ideals(m)?;
    Ok(chain.get(k as isize - 1).is_zero() && chain.get(k as isize).is_whole(m.ring()))
}
