//! Per-group ingredient codes.
//!
//! Two things are needed for every local group: an `[r, a]` MDS generator
//! for the local checks, and an *independent family*: `r` vectors in
//! `F_q^m`, any `s` of which are linearly independent. The family vectors
//! become the numerators of the group's rational functions.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, combinations};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Fq};
use crate::linalg::{self, Matrix, MatrixFq};
use crate::polyring::{self, Poly};

/// Default cap on subsets/codewords enumerated by the oracles.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyRoute {
    Identity,
    Mds,
    Bch,
    Explicit,
}

/// `r` column vectors in `F_q^m`, any `s` of them independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentFamily {
    pub ctx: Arc<FieldCtx>,
    pub m: usize,
    pub r: usize,
    pub s: usize,
    pub columns: Vec<Vec<Fq>>,
    pub route: FamilyRoute,
}

impl IndependentFamily {
    /// The `m × r` matrix whose columns are the family.
    pub fn matrix(&self) -> MatrixFq {
        Matrix::from_columns(self.m, &self.columns).expect("family columns have length m")
    }

    /// Column `j` read as `Σ c_i x^i`.
    pub fn numerator(&self, j: usize) -> Poly {
        Poly::new(self.columns[j].clone())
    }

    /// Appends zero coordinates until the ambient dimension is `m`.
    pub fn padded_to(mut self, m: usize) -> Self {
        if m > self.m {
            for c in &mut self.columns {
                c.resize(m, 0);
            }
            self.m = m;
        }
        self
    }
}

/// Evaluation points `0, 1, α, α², …` (first `count`).
pub fn evaluation_points(ctx: &FieldCtx, count: usize) -> Vec<Fq> {
    let mut pts = Vec::with_capacity(count);
    if count > 0 {
        pts.push(0);
    }
    let mut x = 1;
    while pts.len() < count {
        pts.push(x);
        x = ctx.mul(x, ctx.generator());
    }
    pts
}

/// `a × r` Vandermonde generator of an `[r, a]` MDS code, extended by the
/// column `(0, …, 0, 1)` when `r = q + 1`.
pub fn vandermonde_mds(ctx: &FieldCtx, r: usize, a: usize) -> Result<MatrixFq> {
    let q = ctx.order() as usize;
    if r > q + 1 {
        return Err(Error::InvalidParams(format!("MDS length r={r} exceeds q+1={}", q + 1)));
    }
    if a > r {
        return Err(Error::InvalidParams(format!("MDS dimension a={a} exceeds r={r}")));
    }
    let pts = evaluation_points(ctx, r.min(q));
    let mut cols: Vec<Vec<Fq>> = pts.iter().map(|&x| (0..a).map(|i| ctx.pow(x, i as u64)).collect()).collect();
    if r == q + 1 {
        let mut last = vec![0; a];
        if a > 0 {
            last[a - 1] = 1;
        }
        cols.push(last);
    }
    Matrix::from_columns(a, &cols)
}

pub fn identity_family(ctx: Arc<FieldCtx>, m: usize, r: usize) -> Result<IndependentFamily> {
    if m < r {
        return Err(Error::InvalidParams(format!("identity family needs m={m} >= r={r}")));
    }
    let columns = (0..r)
        .map(|j| {
            let mut c = vec![0; m];
            c[j] = 1;
            c
        })
        .collect();
    Ok(IndependentFamily { ctx, m, r, s: r, columns, route: FamilyRoute::Identity })
}

/// Columns of an `m × r` Vandermonde parity-check matrix; any `m` independent.
pub fn mds_family(ctx: Arc<FieldCtx>, m: usize, r: usize) -> Result<IndependentFamily> {
    if m > r {
        return Err(Error::InvalidParams(format!("MDS family needs m={m} <= r={r}")));
    }
    let mat = vandermonde_mds(&ctx, r, m)?;
    let columns = (0..r).map(|j| mat.column(j)).collect();
    Ok(IndependentFamily { ctx, m, r, s: m, columns, route: FamilyRoute::Mds })
}

pub fn ceil_log2(x: usize) -> usize {
    assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// Redundancy promised for a binary `[r, r−m, ≥ d]` extended-BCH code.
pub fn bch_redundancy(r: usize, d: usize) -> usize {
    (d - 1) / 2 * ceil_log2(r) + 1
}

/// Cyclotomic coset of `i` under multiplication by 2 modulo `n`.
fn cyclotomic_coset(i: usize, n: usize) -> BTreeSet<usize> {
    let mut coset = BTreeSet::new();
    let mut j = i % n;
    while coset.insert(j) {
        j = (j * 2) % n;
    }
    coset
}

/// Binary family from a shortened extended narrow-sense BCH code:
/// any `d − 1` of the `r` columns are independent over `F_2`.
///
/// Generator is `lcm` of the minimal polynomials of `α, …, α^{d−2}` for a
/// primitive `α ∈ F_{2^t}`, `t = ⌈log₂ r⌉`. Column `j < 2^t − 1` of the
/// parity-check matrix is `(x^j mod g, 1)`, the overall-parity column is
/// `(0, …, 0, 1)`, and the highest-index columns are dropped to keep `r`.
/// Rows are zero-padded to the promised redundancy.
pub fn bch_family(r: usize, d: usize) -> Result<IndependentFamily> {
    if r < 2 || d < 2 {
        return Err(Error::InvalidParams(format!("BCH family needs r >= 2 and d >= 2 (r={r}, d={d})")));
    }
    let m = bch_redundancy(r, d);
    if m >= r {
        return Err(Error::InvalidParams(format!(
            "BCH redundancy m={m} is not below r={r}; use the identity family"
        )));
    }
    let t = ceil_log2(r);
    let big = FieldCtx::new(2, t as u32)?;
    let f2 = Arc::new(FieldCtx::new(2, 1)?);
    let n0 = (1usize << t) - 1;
    let alpha = big.generator();

    let mut seen = BTreeSet::new();
    let mut generator = Poly::one();
    for i in 1..=d - 2 {
        let coset = cyclotomic_coset(i, n0);
        let rep = *coset.iter().next().unwrap();
        if !seen.insert(rep) {
            continue;
        }
        // Π (x − α^j) over the coset, computed in F_{2^t}; coefficients land in F_2.
        let mut minpoly = Poly::one();
        for &j in &coset {
            let root = big.pow(alpha, j as u64);
            minpoly = polyring::mul(&big, &minpoly, &Poly::new(vec![root, 1]));
        }
        debug_assert!(minpoly.coeffs().iter().all(|&c| c <= 1));
        generator = polyring::mul(&f2, &generator, &minpoly);
    }

    let deg_g = generator.degree().unwrap_or(0);
    let rows = deg_g + 1;
    let mut columns = Vec::with_capacity(r);
    let mut xj = Poly::one();
    for j in 0..=n0 {
        if columns.len() == r {
            break;
        }
        let mut col = vec![0; rows];
        if j < n0 {
            let residue = polyring::rem(&f2, &xj, &generator)?;
            for (i, slot) in col.iter_mut().take(deg_g).enumerate() {
                *slot = residue.coeff(i);
            }
            xj = polyring::mul(&f2, &xj, &Poly::x());
        }
        col[rows - 1] = 1;
        columns.push(col);
    }
    let fam = IndependentFamily { ctx: f2, m: rows, r, s: d - 1, columns, route: FamilyRoute::Bch };
    Ok(fam.padded_to(m))
}

/// Exhaustive check that every `min(s, r)`-subset of columns has full rank.
pub fn verify_family(fam: &IndependentFamily, cap: u64) -> Result<bool> {
    let s = fam.s.min(fam.r);
    let count = binomial(fam.r, s);
    if count > cap as u128 {
        return Err(Error::CapExceeded { count, cap });
    }
    if s > fam.m {
        return Ok(false);
    }
    let mat = fam.matrix();
    Ok(combinations(fam.r, s).all(|cols| linalg::rank(&*fam.ctx, &mat.select_columns(&cols)) == s))
}

/// Minimum Hamming weight over all nonzero codewords of the row space.
pub fn brute_min_distance(ctx: &FieldCtx, generator: &MatrixFq, cap: u64) -> Result<usize> {
    let k = generator.rows();
    let n = generator.cols();
    let q = ctx.order() as u128;
    let count = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::CapExceeded { count, cap });
    }
    let mut best = usize::MAX;
    let mut msg = vec![0 as Fq; k];
    for _ in 1..count {
        // next message in base-q counting order
        for digit in msg.iter_mut() {
            *digit += 1;
            if *digit == ctx.order() {
                *digit = 0;
            } else {
                break;
            }
        }
        let weight = (0..n)
            .filter(|&c| {
                let mut acc = 0;
                for (i, &mi) in msg.iter().enumerate() {
                    if mi != 0 {
                        acc = ctx.add(acc, ctx.mul(mi, *generator.get(i, c)));
                    }
                }
                acc != 0
            })
            .count();
        best = best.min(weight);
    }
    Ok(if best == usize::MAX { 0 } else { best })
}

/// Generator (rows) of the code whose parity-check matrix is the family.
pub fn nullspace_generator(fam: &IndependentFamily) -> MatrixFq {
    let basis = linalg::nullspace(&*fam.ctx, &fam.matrix());
    if basis.is_empty() {
        return Matrix::filled(0, fam.r, 0);
    }
    Matrix::from_rows(basis).expect("uniform basis length")
}
