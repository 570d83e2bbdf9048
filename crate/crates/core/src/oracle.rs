//! Brute-force reference routines used to cross-check the fast paths.
//!
//! Nothing here shares code with the routines it checks beyond polynomial
//! division.

use crate::gf::FieldCtx;
use crate::polyring::{self, Poly};

/// Irreducibility by trial division with every monic polynomial of degree
/// `1..=deg/2`.
pub fn is_irreducible_by_trial_division(ctx: &FieldCtx, f: &Poly) -> bool {
    let Some(d) = f.degree() else { return false };
    if d == 0 {
        return false;
    }
    let q = ctx.order() as u64;
    for e in 1..=d / 2 {
        for idx in 0..q.pow(e as u32) {
            let g = Poly::monic_from_index(ctx.order(), e, idx);
            if polyring::rem(ctx, f, &g).map(|r| r.is_zero()).unwrap_or(false) {
                return false;
            }
        }
    }
    true
}

/// Number of monic irreducibles of degree `d`, by enumerating every monic
/// polynomial of that degree.
pub fn count_irreducible_by_trial_division(ctx: &FieldCtx, d: usize) -> u64 {
    let q = ctx.order() as u64;
    (0..q.pow(d as u32))
        .filter(|&i| is_irreducible_by_trial_division(ctx, &Poly::monic_from_index(ctx.order(), d, i)))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_ben_or_on_small_degrees() {
        for q in [2, 3, 4, 5] {
            let ctx = FieldCtx::for_order(q).unwrap();
            for d in 1..=4 {
                for i in 0..(q as u64).pow(d as u32) {
                    let f = Poly::monic_from_index(q, d, i);
                    assert_eq!(
                        is_irreducible_by_trial_division(&ctx, &f),
                        polyring::is_irreducible(&ctx, &f).unwrap(),
                        "{f} over F_{q}"
                    );
                }
            }
        }
    }

    #[test]
    fn small_counts() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(count_irreducible_by_trial_division(&f2, 3), 2);
        assert_eq!(count_irreducible_by_trial_division(&f2, 4), 3);
    }
}
