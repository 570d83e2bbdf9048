//! Moore matrices `(α_j^{q^k})` over an extension `F_ℓ ⊇ F_q`.
//!
//! A square Moore matrix is invertible exactly when its generators are
//! linearly independent over `F_q`. More generally its rank (with at least
//! as many rows as columns) equals the `F_q`-rank of the generators.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf::{ExtElem, ExtFieldCtx, Fq};
use crate::linalg::{self, Matrix, MatrixExt};

/// `h × w` matrix with entry `(k, j) = elems_j^{q^k}`.
pub fn moore_matrix(ctx: &ExtFieldCtx, elems: &[ExtElem], h: usize) -> Result<MatrixExt> {
    if elems.iter().any(|e| !ctx.contains(e)) {
        return Err(Error::ContextMismatch);
    }
    let mut m = Matrix::filled(h, elems.len(), ctx.zero());
    for (j, e) in elems.iter().enumerate() {
        let mut cur = e.clone();
        for k in 0..h {
            if k > 0 {
                cur = ctx.frobenius(&cur, 1);
            }
            m.set(k, j, cur.clone());
        }
    }
    Ok(m)
}

/// Whether the square Moore matrix on `elems` has nonzero determinant.
pub fn moore_det_nonzero(ctx: &ExtFieldCtx, elems: &[ExtElem]) -> Result<bool> {
    let m = moore_matrix(ctx, elems, elems.len())?;
    Ok(!ctx.is_zero(&linalg::determinant(ctx, &m)?))
}

pub fn moore_determinant(ctx: &ExtFieldCtx, elems: &[ExtElem]) -> Result<ExtElem> {
    let m = moore_matrix(ctx, elems, elems.len())?;
    linalg::determinant(ctx, &m)
}

pub fn moore_rank(ctx: &ExtFieldCtx, elems: &[ExtElem], h: usize) -> Result<usize> {
    Ok(linalg::rank(ctx, &moore_matrix(ctx, elems, h)?))
}

fn scale(ctx: &ExtFieldCtx, c: Fq, a: &ExtElem) -> ExtElem {
    let base = ctx.base();
    let coeffs: Vec<Fq> = a.coeffs().iter().map(|&x| base.mul(c, x)).collect();
    ctx.from_coeffs(&coeffs).expect("scaled element stays in context")
}

/// Number of vectors in `F_q^w` whose last nonzero coordinate is 1.
fn direction_count(q: u32, w: usize) -> u128 {
    let q = q as u128;
    match q.checked_pow(w as u32) {
        Some(t) => (t - 1) / (q - 1),
        None => u128::MAX,
    }
}

/// Calls `visit` with `Σ c_j elems_j` for every direction vector `c`,
/// stopping early when it returns `false`.
fn for_each_direction<F>(ctx: &ExtFieldCtx, elems: &[ExtElem], mut visit: F)
where
    F: FnMut(&ExtElem) -> bool,
{
    let q = ctx.base().order();
    for lead in 0..elems.len() {
        // coordinates before `lead` range over F_q; coordinate `lead` is 1
        let mut digits = vec![0 as Fq; lead];
        loop {
            let mut acc = elems[lead].clone();
            for (j, &c) in digits.iter().enumerate() {
                if c != 0 {
                    acc = ctx.add(&acc, &scale(ctx, c, &elems[j]));
                }
            }
            if !visit(&acc) {
                return;
            }
            let mut i = 0;
            while i < lead {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == lead {
                break;
            }
        }
    }
}

/// Exhaustive `F_q`-independence test: no nonzero combination vanishes.
///
/// Scaling does not change vanishing, so only direction vectors are tried.
pub fn fq_independent(ctx: &ExtFieldCtx, elems: &[ExtElem], cap: u64) -> Result<bool> {
    if elems.iter().any(|e| !ctx.contains(e)) {
        return Err(Error::ContextMismatch);
    }
    let count = direction_count(ctx.base().order(), elems.len());
    if count > cap as u128 {
        return Err(Error::CapExceeded { count, cap });
    }
    let mut independent = true;
    for_each_direction(ctx, elems, |v| {
        independent = !ctx.is_zero(v);
        independent
    });
    Ok(independent)
}

/// Product over direction vectors `c` of `Σ c_j α_j`, which equals the
/// Moore determinant. Only usable at tiny sizes.
pub fn moore_det_product(ctx: &ExtFieldCtx, elems: &[ExtElem], cap: u64) -> Result<ExtElem> {
    if elems.iter().any(|e| !ctx.contains(e)) {
        return Err(Error::ContextMismatch);
    }
    let count = direction_count(ctx.base().order(), elems.len());
    if count > cap as u128 {
        return Err(Error::CapExceeded { count, cap });
    }
    let mut acc = ctx.one();
    for_each_direction(ctx, elems, |v| {
        acc = ctx.mul(&acc, v);
        true
    });
    Ok(acc)
}

/// Rank over `F_q` of the coefficient vectors of `elems`.
pub fn fq_rank(ctx: &ExtFieldCtx, elems: &[ExtElem]) -> usize {
    if elems.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<Fq>> = elems.iter().map(|e| e.coeffs().to_vec()).collect();
    let m = Matrix::from_columns(ctx.degree(), &cols).expect("coefficient vectors have length D");
    linalg::rank(&**ctx.base(), &m)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::gf::FieldCtx;
    use crate::polyring::{self, Poly};

    const CAP: u64 = 1_000_000;

    fn ext(q: u32, d: usize) -> ExtFieldCtx {
        let base = Arc::new(FieldCtx::for_order(q).unwrap());
        let modulus = polyring::find_irreducible(&base, d, &[]).unwrap();
        ExtFieldCtx::new(base, modulus).unwrap()
    }

    fn el(ctx: &ExtFieldCtx, c: &[Fq]) -> ExtElem {
        ctx.from_coeffs(c).unwrap()
    }

    #[test]
    fn f4_examples() {
        let f4 = ext(2, 2);
        let one = el(&f4, &[1, 0]);
        let w = el(&f4, &[0, 1]);
        let m = moore_matrix(&f4, &[one.clone(), w.clone()], 2).unwrap();
        // ω² = ω + 1
        assert_eq!(m.to_rows(), vec![vec![one.clone(), w.clone()], vec![one.clone(), el(&f4, &[1, 1])]]);
        assert_eq!(moore_determinant(&f4, &[one.clone(), w.clone()]).unwrap(), one);
        assert!(moore_det_nonzero(&f4, &[one.clone(), w.clone()]).unwrap());
        assert!(!moore_det_nonzero(&f4, &[one.clone(), one.clone()]).unwrap());
        assert!(fq_independent(&f4, &[one.clone(), w.clone()], CAP).unwrap());
        let w1 = el(&f4, &[1, 1]);
        assert!(!fq_independent(&f4, &[w, w1, one], CAP).unwrap());
    }

    #[test]
    fn trivial_shapes() {
        let f8 = ext(2, 3);
        let one = f8.one();
        assert_eq!(moore_matrix(&f8, &[one.clone()], 1).unwrap().to_rows(), vec![vec![one.clone()]]);
        let m = moore_matrix(&f8, &[f8.zero(), one.clone()], 3).unwrap();
        assert!((0..3).all(|k| f8.is_zero(m.get(k, 0))));
        assert!(fq_independent(&f8, &[el(&f8, &[0, 1, 1])], CAP).unwrap());
        assert!(!fq_independent(&f8, &[f8.zero()], CAP).unwrap());
    }

    #[test]
    fn scalar_multiples_are_dependent() {
        let f16 = ext(4, 2);
        let a = el(&f16, &[2, 3]);
        for c in 1..4 {
            let ca = scale(&f16, c, &a);
            assert!(!moore_det_nonzero(&f16, &[a.clone(), ca]).unwrap());
        }
    }

    #[test]
    fn errors() {
        let f8 = ext(2, 3);
        let f4 = ext(2, 2);
        let foreign = f4.one();
        assert_eq!(moore_matrix(&f8, &[foreign], 1), Err(Error::ContextMismatch));
        let f2_20 = ext(2, 20);
        let elems = vec![f2_20.one(); 20];
        assert!(matches!(fq_independent(&f2_20, &elems, 1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn product_formula_matches_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (q, d) in [(2, 3), (2, 4), (4, 2), (3, 2), (3, 3), (5, 2)] {
            let ctx = ext(q, d);
            for _ in 0..40 {
                let w = rng.gen_range(1..=d);
                let elems: Vec<_> = (0..w).map(|_| ctx.random(&mut rng)).collect();
                assert_eq!(
                    moore_det_product(&ctx, &elems, CAP).unwrap(),
                    moore_determinant(&ctx, &elems).unwrap(),
                    "q={q} d={d} {elems:?}"
                );
            }
        }
    }

    #[test]
    fn determinant_criterion_over_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (q, d) in [(2, 3), (2, 4), (4, 2)] {
            let ctx = ext(q, d);
            for _ in 0..500 {
                let w = rng.gen_range(1..=d);
                let mut elems: Vec<_> = (0..w).map(|_| ctx.random(&mut rng)).collect();
                if w > 1 && rng.gen_bool(0.3) {
                    // force a dependency now and then
                    let c = rng.gen_range(0..q);
                    elems[w - 1] = ctx.add(&elems[0], &scale(&ctx, c, &elems[w - 2]));
                }
                assert_eq!(moore_det_nonzero(&ctx, &elems).unwrap(), fq_independent(&ctx, &elems, CAP).unwrap());
            }
        }
    }

    #[test]
    fn rank_matches_fq_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (q, d) in [(2, 4), (4, 2), (3, 3)] {
            let ctx = ext(q, d);
            for _ in 0..100 {
                let w = rng.gen_range(1..=4);
                let h = rng.gen_range(w..=d.max(w));
                let elems: Vec<_> = (0..w)
                    .map(|_| {
                        // small support so dependencies are common
                        let p = Poly::new((0..2).map(|_| rng.gen_range(0..q)).collect());
                        ctx.from_poly(&p).unwrap()
                    })
                    .collect();
                assert_eq!(moore_rank(&ctx, &elems, h).unwrap(), fq_rank(&ctx, &elems), "q={q} d={d}");
            }
        }
    }
}
