use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf::{FieldCtx, Fq};
use crate::polyring::{self, Poly};

/// Element of `F_q[x]/(Q)`: exactly `D` coefficients over `F_q`, low-to-high.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem(Vec<Fq>);

impl ExtElem {
    pub fn coeffs(&self) -> &[Fq] {
        &self.0
    }
}

/// The extension `F_ℓ = F_q[x]/(Q)`, `ℓ = q^D`.
pub struct ExtFieldCtx {
    base: Arc<FieldCtx>,
    modulus: Poly,
    degree: usize,
    order: BigUint,
    /// Column `i` holds the coordinates of `(x^i)^q`.
    frobenius: Vec<Vec<Fq>>,
}

impl fmt::Debug for ExtFieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtFieldCtx")
            .field("q", &self.base.order())
            .field("modulus", &self.modulus.to_string())
            .field("degree", &self.degree)
            .finish()
    }
}

impl PartialEq for ExtFieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.modulus == other.modulus
    }
}

impl Eq for ExtFieldCtx {}

impl ExtFieldCtx {
    pub fn new(base: Arc<FieldCtx>, modulus: Poly) -> Result<Self> {
        modulus.check_in(&base)?;
        let degree = modulus.degree().ok_or(Error::ZeroPolynomial)?;
        if degree == 0 {
            return Err(Error::InvalidParams("extension modulus must have degree >= 1".into()));
        }
        if !modulus.is_monic() {
            return Err(Error::NotMonic);
        }
        if !polyring::is_irreducible(&base, &modulus)? {
            return Err(Error::Reducible);
        }
        let order = num_traits::pow(BigUint::from(base.order()), degree);
        let mut ctx = ExtFieldCtx { base, modulus, degree, order, frobenius: Vec::new() };
        ctx.frobenius = ctx.build_frobenius()?;
        Ok(ctx)
    }

    fn build_frobenius(&self) -> Result<Vec<Vec<Fq>>> {
        let xq = polyring::powmod(&self.base, &Poly::x(), BigUint::from(self.base.order()), &self.modulus)?;
        let mut cols = Vec::with_capacity(self.degree);
        let mut cur = Poly::one();
        for _ in 0..self.degree {
            cols.push(self.pad(&cur));
            cur = polyring::mulmod(&self.base, &cur, &xq, &self.modulus)?;
        }
        Ok(cols)
    }

    fn pad(&self, p: &Poly) -> Vec<Fq> {
        (0..self.degree).map(|i| p.coeff(i)).collect()
    }

    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `D = deg Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `ℓ = q^D`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn log2_order(&self) -> f64 {
        self.degree as f64 * (self.base.order() as f64).log2()
    }

    pub fn contains(&self, a: &ExtElem) -> bool {
        a.0.len() == self.degree && a.0.iter().all(|&c| self.base.contains(c))
    }

    fn check(&self, a: &ExtElem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn from_coeffs(&self, coeffs: &[Fq]) -> Result<ExtElem> {
        let e = ExtElem(coeffs.to_vec());
        self.check(&e)?;
        Ok(e)
    }

    /// Residue of `p` modulo `Q`.
    pub fn from_poly(&self, p: &Poly) -> Result<ExtElem> {
        p.check_in(&self.base)?;
        let r = polyring::rem(&self.base, p, &self.modulus)?;
        Ok(ExtElem(self.pad(&r)))
    }

    pub fn to_poly(&self, a: &ExtElem) -> Poly {
        Poly::new(a.0.clone())
    }

    /// Image of a base-field element.
    pub fn embed(&self, c: Fq) -> ExtElem {
        let mut v = vec![0; self.degree];
        v[0] = c;
        ExtElem(v)
    }

    /// `Some(c)` when `a` lies in the embedded base field.
    pub fn as_base(&self, a: &ExtElem) -> Option<Fq> {
        a.0[1..].iter().all(|&c| c == 0).then(|| a.0[0])
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        ExtElem((0..self.degree).map(|_| rng.gen_range(0..self.base.order())).collect())
    }

    /// Canonical integer `Σ c_i q^i`.
    pub fn encode(&self, a: &ExtElem) -> BigUint {
        a.0.iter().rev().fold(BigUint::zero(), |acc, &c| acc * self.base.order() + c)
    }

    pub fn decode(&self, n: &BigUint) -> Result<ExtElem> {
        if n >= &self.order {
            return Err(Error::ContextMismatch);
        }
        let q = BigUint::from(self.base.order());
        let mut rest = n.clone();
        let mut coeffs = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            let digit = (&rest % &q).to_u32().unwrap();
            coeffs.push(digit);
            rest /= &q;
        }
        Ok(ExtElem(coeffs))
    }

    pub fn encode_str(&self, a: &ExtElem) -> String {
        self.encode(a).to_string()
    }

    pub fn decode_str(&self, s: &str) -> Result<ExtElem> {
        let n: BigUint = s.trim().parse().map_err(|e| Error::Parse(format!("element {s:?}: {e}")))?;
        self.decode(&n)
    }

    pub fn try_add(&self, a: &ExtElem, b: &ExtElem) -> Result<ExtElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(Field::add(self, a, b))
    }

    pub fn try_mul(&self, a: &ExtElem, b: &ExtElem) -> Result<ExtElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(Field::mul(self, a, b))
    }

    pub fn try_inv(&self, a: &ExtElem) -> Result<ExtElem> {
        self.check(a)?;
        Field::inv(self, a).ok_or(Error::ZeroInverse)
    }

    /// `a^{q^k}` through the cached matrix of `y ↦ y^q`.
    pub fn frobenius(&self, a: &ExtElem, k: usize) -> ExtElem {
        let mut cur = a.0.clone();
        for _ in 0..k % self.degree {
            let mut next = vec![0; self.degree];
            for (i, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (r, &f) in self.frobenius[i].iter().enumerate() {
                    if f != 0 {
                        next[r] = self.base.add(next[r], self.base.mul(c, f));
                    }
                }
            }
            cur = next;
        }
        ExtElem(cur)
    }

    pub fn pow(&self, a: &ExtElem, e: &BigUint) -> ExtElem {
        let mut acc = self.one();
        let mut base = a.clone();
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = Field::mul(self, &acc, &base);
            }
            base = Field::mul(self, &base, &base);
        }
        acc
    }
}

impl Field for ExtFieldCtx {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtElem(vec![0; self.degree])
    }

    fn one(&self) -> ExtElem {
        self.embed(1)
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.add(x, y)).collect())
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.sub(x, y)).collect())
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|&x| self.base.neg(x)).collect())
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let d = self.degree;
        let f = &*self.base;
        let mut prod = vec![0; 2 * d - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = f.add(prod[i + j], f.mul(x, y));
                }
            }
        }
        let q = self.modulus.coeffs();
        for k in (d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (j, &qj) in q[..d].iter().enumerate() {
                if qj != 0 {
                    prod[k - d + j] = f.sub(prod[k - d + j], f.mul(c, qj));
                }
            }
        }
        prod.truncate(d);
        ExtElem(prod)
    }

    fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        if self.is_zero(a) {
            return None;
        }
        let h = polyring::poly_mod_inverse(&self.base, &self.to_poly(a), &self.modulus).ok()?;
        Some(ExtElem(self.pad(&h)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ext(q: u32, modulus: &str) -> ExtFieldCtx {
        let base = Arc::new(FieldCtx::for_order(q).unwrap());
        ExtFieldCtx::new(base, Poly::parse(modulus).unwrap()).unwrap()
    }

    #[test]
    fn f4_over_f2() {
        let e = ext(2, "1,1,1");
        let x = e.from_coeffs(&[0, 1]).unwrap();
        let x1 = e.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(e.mul(&x, &x), x1);
        assert_eq!(Field::inv(&e, &x), Some(x1.clone()));
        assert_eq!(e.frobenius(&x, 1), x1);
        assert_eq!(e.frobenius(&x, 0), x);
        assert_eq!(e.order(), &BigUint::from(4u32));
    }

    #[test]
    fn rejects_bad_moduli() {
        let base = Arc::new(FieldCtx::new(2, 1).unwrap());
        assert_eq!(ExtFieldCtx::new(base.clone(), Poly::parse("1,0,1").unwrap()).unwrap_err(), Error::Reducible);
        let f3 = Arc::new(FieldCtx::new(3, 1).unwrap());
        assert_eq!(ExtFieldCtx::new(f3, Poly::parse("1,0,2").unwrap()).unwrap_err(), Error::NotMonic);
        assert!(ExtFieldCtx::new(base, Poly::parse("1,1,0,1").unwrap()).is_ok());
    }

    #[test]
    fn f16_over_f4() {
        // x^2 + x + ω with ω = 2
        let e = ext(4, "2,1,1");
        assert_eq!(e.order(), &BigUint::from(16u32));
        // F_4 is fixed, nothing else is.
        let mut fixed = 0;
        for n in 0u32..16 {
            let a = e.decode(&BigUint::from(n)).unwrap();
            if e.frobenius(&a, 1) == a {
                fixed += 1;
                assert!(e.as_base(&a).is_some());
            }
        }
        assert_eq!(fixed, 4);
    }

    #[test]
    fn frobenius_matches_power() {
        let e = ext(3, "1,0,2,1"); // any irreducible cubic over F_3 works here
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = e.random(&mut rng);
            assert_eq!(e.frobenius(&a, 1), e.pow(&a, &BigUint::from(3u32)));
            assert_eq!(e.frobenius(&a, 3), a);
            assert_eq!(e.frobenius(&a, 2), e.frobenius(&e.frobenius(&a, 1), 1));
        }
    }

    #[test]
    fn frobenius_is_a_field_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for e in [ext(2, "1,1,0,1"), ext(2, "1,1,0,0,1"), ext(4, "2,1,1"), ext(5, "2,0,1")] {
            for _ in 0..2_000 {
                let a = e.random(&mut rng);
                let b = e.random(&mut rng);
                assert_eq!(e.frobenius(&e.add(&a, &b), 1), e.add(&e.frobenius(&a, 1), &e.frobenius(&b, 1)));
                assert_eq!(e.frobenius(&e.mul(&a, &b), 1), e.mul(&e.frobenius(&a, 1), &e.frobenius(&b, 1)));
                if e.as_base(&a).is_none() {
                    assert_ne!(e.frobenius(&a, 1), a);
                }
            }
            for c in e.base().elements() {
                let a = e.embed(c);
                assert_eq!(e.frobenius(&a, 1), a);
            }
        }
    }

    #[test]
    fn field_axioms_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for e in [ext(2, "1,1,0,1"), ext(4, "2,1,1"), ext(3, "1,0,2,1")] {
            for _ in 0..10_000 {
                let (a, b, c) = (e.random(&mut rng), e.random(&mut rng), e.random(&mut rng));
                assert_eq!(e.add(&e.add(&a, &b), &c), e.add(&a, &e.add(&b, &c)));
                assert_eq!(e.mul(&a, &e.add(&b, &c)), e.add(&e.mul(&a, &b), &e.mul(&a, &c)));
                if !e.is_zero(&a) {
                    assert_eq!(e.mul(&a, &Field::inv(&e, &a).unwrap()), e.one());
                }
            }
        }
    }

    #[test]
    fn encoding_round_trip_and_errors() {
        let e = ext(4, "2,1,1");
        for n in 0u32..16 {
            let a = e.decode(&BigUint::from(n)).unwrap();
            assert_eq!(e.encode(&a), BigUint::from(n));
            assert_eq!(e.decode_str(&e.encode_str(&a)).unwrap(), a);
        }
        assert!(e.decode(&BigUint::from(16u32)).is_err());
        let foreign = ExtElem(vec![0, 0, 1]);
        assert_eq!(e.try_add(&foreign, &e.one()), Err(Error::ContextMismatch));
        assert_eq!(e.try_inv(&e.zero()), Err(Error::ZeroInverse));
    }
}
