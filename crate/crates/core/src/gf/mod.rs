//! Finite-field tower `F_p ⊆ F_q ⊆ F_ℓ`.
//!
//! [`FieldCtx`] is the base field `F_q = F_p[x]/(f)` with elements encoded as
//! integers `Σ d_i p^i` in `[0, q)`. [`ExtFieldCtx`] layers `F_ℓ = F_q[x]/(Q)`
//! on top, with elements stored as fixed-length coefficient vectors over `F_q`.
//!
//! Both contexts are immutable once built and are shared through `Arc`.

mod ext;

pub use ext::{ExtElem, ExtFieldCtx};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::polyring;

/// Default cap on `q = p^t` for the base field.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// Above this size the base field multiplies by polynomial arithmetic
/// instead of log/antilog tables.
pub const TABLE_LIMIT: u32 = 1 << 16;

/// Canonical base-field element: an integer in `[0, q)`.
pub type Fq = u32;

#[derive(Debug, Clone)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The base field `F_q`, `q = p^t`.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    t: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    tables: Option<LogTables>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.t == other.t && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds `F_{p^t}` with the lexicographically smallest monic irreducible
    /// modulus of degree `t` over `F_p`.
    pub fn new(p: u32, t: u32) -> Result<Self> {
        Self::with_cap(p, t, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u32, t: u32, cap: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if t == 0 {
            return Err(Error::InvalidParams("extension degree t must be >= 1".into()));
        }
        let size = (p as u128).checked_pow(t).unwrap_or(u128::MAX);
        let cap = cap.min(u32::MAX as u64);
        if size > cap as u128 {
            return Err(Error::FieldTooLarge { size, cap });
        }
        let modulus = if t == 1 {
            vec![0, 1]
        } else {
            let prime = Self::prime(p)?;
            polyring::find_irreducible(&prime, t as usize, &[])?.coeffs().to_vec()
        };
        Ok(Self::from_modulus(p, t, modulus))
    }

    /// The prime field `F_p` (modulus `x`).
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p as u64 > DEFAULT_FIELD_CAP {
            return Err(Error::FieldTooLarge { size: p as u128, cap: DEFAULT_FIELD_CAP });
        }
        Ok(Self::from_modulus(p, 1, vec![0, 1]))
    }

    /// Builds `F_q` for a prime power `q`.
    pub fn for_order(q: u32) -> Result<Self> {
        let (p, t) = prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
        Self::new(p as u32, t)
    }

    fn from_modulus(p: u32, t: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(t);
        let mut ctx = FieldCtx { p, t, q, modulus, generator: 1, tables: None };
        ctx.generator = ctx.find_generator();
        if q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus over `F_p`, low-to-high coefficients, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element with the smallest encoding.
    pub fn generator(&self) -> Fq {
        self.generator
    }

    pub fn contains(&self, a: Fq) -> bool {
        a < self.q
    }

    pub fn uses_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elements(&self) -> std::ops::Range<Fq> {
        0..self.q
    }

    pub fn digits(&self, mut a: Fq) -> Vec<u32> {
        let mut d = vec![0; self.t as usize];
        for slot in d.iter_mut() {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    pub fn from_digits(&self, digits: &[u32]) -> Fq {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            return a ^ b;
        }
        if self.t == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.t {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 {
            return a;
        }
        if self.t == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.t {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(tb) => tb.exp[(tb.log[a as usize] + tb.log[b as usize]) as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return None;
        }
        Some(match &self.tables {
            Some(tb) => {
                let l = tb.log[a as usize];
                tb.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
            }
            None => self.pow_slow(a, (self.q - 2) as u64),
        })
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(tb) => {
                let l = (tb.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
                tb.exp[l as usize]
            }
            None => self.pow_slow(a, e),
        }
    }

    /// Polynomial product of the digit vectors reduced by the modulus.
    fn mul_slow(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p as u64;
        if self.t == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let t = self.t as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * t - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (t..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &mj) in self.modulus[..t].iter().enumerate() {
                // subtract c * m_j * x^{k-t+j}
                let sub = (c * mj as u64) % p;
                prod[k - t + j] = (prod[k - t + j] + p - sub) % p;
            }
        }
        let digits: Vec<u32> = prod[..t].iter().map(|&d| d as u32).collect();
        self.from_digits(&digits)
    }

    fn pow_slow(&self, a: Fq, mut e: u64) -> Fq {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> Fq {
        let order = (self.q - 1) as u64;
        if order <= 1 {
            return 1;
        }
        let factors = prime_factors(order);
        (1..self.q)
            .find(|&a| factors.iter().all(|&f| self.pow_slow(a, order / f) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let order = (self.q - 1) as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1;
        for i in 0..order {
            exp[i] = x;
            exp[i + order] = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, self.generator);
        }
        if order == 1 {
            exp[1] = 1;
        }
        LogTables { exp, log }
    }
}

impl Field for FieldCtx {
    type Elem = Fq;

    fn zero(&self) -> Fq {
        0
    }
    fn one(&self) -> Fq {
        1
    }
    fn is_zero(&self, a: &Fq) -> bool {
        *a == 0
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        FieldCtx::add(self, *a, *b)
    }
    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        FieldCtx::sub(self, *a, *b)
    }
    fn neg(&self, a: &Fq) -> Fq {
        FieldCtx::neg(self, *a)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        FieldCtx::mul(self, *a, *b)
    }
    fn inv(&self, a: &Fq) -> Option<Fq> {
        FieldCtx::inv(self, *a)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, t))` with `n = p^t`, `p` prime.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = prime_factors(n)[0];
    let (mut m, mut t) = (n, 0);
    while m % p == 0 {
        m /= p;
        t += 1;
    }
    (m == 1).then_some((p, t))
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_has_modulus_x() {
        let f = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn lex_smallest_moduli() {
        assert_eq!(FieldCtx::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldCtx::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn f4_products() {
        let f = FieldCtx::new(2, 2).unwrap();
        // x = 2, x + 1 = 3
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldCtx::new(2, 21), Err(Error::FieldTooLarge { .. })));
        assert!(FieldCtx::new(2, 0).is_err());
    }

    #[test]
    fn generator_is_primitive() {
        for (p, t) in [(2, 1), (2, 2), (3, 2), (2, 4), (5, 1), (7, 2)] {
            let f = FieldCtx::new(p, t).unwrap();
            let g = f.generator();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..f.order() - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u32, f.order() - 1, "F_{}^{}", p, t);
        }
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = FieldCtx::new(3, 3).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldCtx::new(2, 17).unwrap();
        assert!(!f.uses_tables());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = rng.gen_range(1..f.order());
            let b = rng.gen_range(1..f.order());
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.mul(a, b), f.mul(b, a));
        }
    }

    #[test]
    fn field_axioms_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, t) in [(2, 1), (2, 2), (3, 2), (2, 5), (5, 2), (7, 1)] {
            let f = FieldCtx::new(p, t).unwrap();
            for _ in 0..10_000 {
                let a = rng.gen_range(0..f.order());
                let b = rng.gen_range(0..f.order());
                let c = rng.gen_range(0..f.order());
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
