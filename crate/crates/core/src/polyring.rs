//! Dense univariate polynomials over a base field `F_q`.
//!
//! Polynomial selection is deterministic: candidates of a given degree are
//! visited in increasing order of the integer `Σ c_i q^i` of their
//! coefficient tuple, which orders monic polynomials by their highest
//! differing coefficient first.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Fq};

/// Polynomial with coefficients low-to-high and no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn constant(c: Fq) -> Self {
        Poly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Monic polynomial of degree `d` whose lower coefficients are the base-`q`
    /// digits of `index`.
    pub fn monic_from_index(q: u32, d: usize, mut index: u64) -> Self {
        let mut coeffs = vec![0; d + 1];
        for c in coeffs.iter_mut().take(d) {
            *c = (index % q as u64) as Fq;
            index /= q as u64;
        }
        coeffs[d] = 1;
        Poly { coeffs }
    }

    /// The integer `Σ c_i q^i`; the enumeration key.
    pub fn index(&self, q: u32) -> BigUint {
        self.coeffs.iter().rev().fold(BigUint::zero(), |acc, &c| acc * q + c)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Poly::zero());
        }
        let coeffs = s
            .split(',')
            .map(|t| t.trim().parse::<Fq>().map_err(|e| Error::Parse(format!("polynomial coefficient {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }

    pub fn check_in(&self, ctx: &FieldCtx) -> Result<()> {
        if self.coeffs.iter().all(|&c| ctx.contains(c)) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }
}

/// Comma-separated canonical coefficients, low-to-high (`1,1,0,1` is `1+x+x^3`).
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn add(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|i| ctx.add(a.coeff(i), b.coeff(i))).collect())
}

pub fn sub(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|i| ctx.sub(a.coeff(i), b.coeff(i))).collect())
}

pub fn scale(ctx: &FieldCtx, a: &Poly, c: Fq) -> Poly {
    Poly::new(a.coeffs.iter().map(|&x| ctx.mul(x, c)).collect())
}

pub fn mul(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![0; a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.coeffs.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    Poly::new(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let db = b.degree().ok_or(Error::ZeroPolynomial)?;
    let lead_inv = ctx.inv(b.leading()).expect("nonzero leading coefficient");
    let mut rem = a.coeffs.clone();
    if rem.len() <= db {
        return Ok((Poly::zero(), a.clone()));
    }
    let mut quot = vec![0; rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = ctx.mul(rem[k], lead_inv);
        if c == 0 {
            continue;
        }
        quot[k - db] = c;
        for (j, &bj) in b.coeffs.iter().enumerate() {
            rem[k - db + j] = ctx.sub(rem[k - db + j], ctx.mul(c, bj));
        }
    }
    rem.truncate(db);
    Ok((Poly::new(quot), Poly::new(rem)))
}

pub fn rem(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Result<Poly> {
    divrem(ctx, a, b).map(|(_, r)| r)
}

pub fn make_monic(ctx: &FieldCtx, a: &Poly) -> Poly {
    if a.is_zero() {
        return Poly::zero();
    }
    scale(ctx, a, ctx.inv(a.leading()).unwrap())
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = rem(ctx, &x, &y).expect("divisor nonzero");
        x = y;
        y = r;
    }
    make_monic(ctx, &x)
}

pub fn mulmod(ctx: &FieldCtx, a: &Poly, b: &Poly, m: &Poly) -> Result<Poly> {
    rem(ctx, &mul(ctx, a, b), m)
}

pub fn powmod(ctx: &FieldCtx, a: &Poly, mut e: BigUint, m: &Poly) -> Result<Poly> {
    let mut base = rem(ctx, a, m)?;
    let mut acc = rem(ctx, &Poly::one(), m)?;
    while !e.is_zero() {
        if e.bit(0) {
            acc = mulmod(ctx, &acc, &base, m)?;
        }
        base = mulmod(ctx, &base, &base, m)?;
        e >>= 1;
    }
    Ok(acc)
}

pub fn pow(ctx: &FieldCtx, a: &Poly, e: usize) -> Poly {
    (0..e).fold(Poly::one(), |acc, _| mul(ctx, &acc, a))
}

/// `h` with `f·h ≡ 1 (mod modulus)` and `deg h < deg modulus`.
pub fn poly_mod_inverse(ctx: &FieldCtx, f: &Poly, modulus: &Poly) -> Result<Poly> {
    if modulus.degree().ok_or(Error::ZeroPolynomial)? == 0 {
        return Err(Error::InvalidParams("modulus must have positive degree".into()));
    }
    // Extended Euclid tracking only the coefficient of f.
    let (mut r0, mut r1) = (modulus.clone(), rem(ctx, f, modulus)?);
    let (mut s0, mut s1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (quot, r2) = divrem(ctx, &r0, &r1)?;
        let s2 = sub(ctx, &s0, &mul(ctx, &quot, &s1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if r0.degree() != Some(0) {
        return Err(Error::NotCoprime);
    }
    let c = ctx.inv(r0.leading()).unwrap();
    rem(ctx, &scale(ctx, &s0, c), modulus)
}

/// Ben-Or test: no factor of degree `i ≤ deg/2`, checked via
/// `gcd(x^{q^i} - x, f)`.
pub fn is_irreducible(ctx: &FieldCtx, f: &Poly) -> Result<bool> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    let f = make_monic(ctx, f);
    let x = Poly::x();
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = powmod(ctx, &xp, BigUint::from(ctx.order()), &f)?;
        let g = gcd(ctx, &sub(ctx, &xp, &x), &f);
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`, by
/// Möbius inversion of `Σ_{e|d} e·N_q(e) = q^d`.
pub fn count_irreducible(ctx: &FieldCtx, d: usize) -> BigUint {
    assert!(d >= 1, "degree must be positive");
    let q = BigInt::from(ctx.order());
    let total: BigInt = divisors(d)
        .into_iter()
        .map(|e| BigInt::from(mobius(e)) * num_traits::pow(q.clone(), d / e))
        .sum();
    (total / BigInt::from(d)).to_biguint().expect("count is nonnegative")
}

fn candidate_count(ctx: &FieldCtx, d: usize) -> Result<u64> {
    (ctx.order() as u64)
        .checked_pow(d as u32)
        .ok_or_else(|| Error::InvalidParams(format!("q^{d} is too large to enumerate")))
}

/// Monic irreducibles of degree `d` in enumeration order.
pub fn irreducibles(ctx: &FieldCtx, d: usize) -> Result<impl Iterator<Item = Poly> + '_> {
    let total = candidate_count(ctx, d)?;
    let q = ctx.order();
    Ok((0..total)
        .map(move |i| Poly::monic_from_index(q, d, i))
        .filter(move |p| is_irreducible(ctx, p).unwrap_or(false)))
}

/// Smallest monic irreducible of degree `d` not listed in `exclude`.
pub fn find_irreducible(ctx: &FieldCtx, d: usize, exclude: &[Poly]) -> Result<Poly> {
    if d == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    irreducibles(ctx, d)?
        .find(|p| !exclude.contains(p))
        .ok_or(Error::Exhausted { degree: d })
}

/// `g` pairwise-coprime monic polynomials of degree `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeFamily {
    pub m: usize,
    pub members: Vec<Poly>,
}

impl CoprimeFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_pairwise_coprime(&self, ctx: &FieldCtx) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members[i + 1..].iter().all(|b| gcd(ctx, a, b) == Poly::one())
        })
    }
}

/// Supply of pairwise-coprime degree-`m` members: `Σ_{d|m} N_q(d)`.
pub fn coprime_supply(ctx: &FieldCtx, m: usize) -> BigUint {
    divisors(m).into_iter().map(|d| count_irreducible(ctx, d)).sum()
}

/// Degree-`m` irreducibles first, then `p^{m/d}` for each proper divisor `d`
/// of `m` in decreasing order, each group in enumeration order.
pub fn coprime_family(ctx: &FieldCtx, m: usize, g: usize) -> Result<CoprimeFamily> {
    if m == 0 || g == 0 {
        return Err(Error::InvalidParams("coprime family needs m >= 1 and g >= 1".into()));
    }
    let supply = coprime_supply(ctx, m);
    if supply < BigUint::from(g) {
        return Err(Error::InsufficientCoprime { m, requested: g, available: supply.to_string() });
    }
    let mut members = Vec::with_capacity(g);
    let mut degrees = divisors(m);
    degrees.reverse();
    'outer: for d in degrees {
        for p in irreducibles(ctx, d)? {
            if members.len() == g {
                break 'outer;
            }
            members.push(pow(ctx, &p, m / d));
        }
    }
    Ok(CoprimeFamily { m, members })
}

/// Whether an extra irreducible of degree `deg_q` avoiding the family exists.
pub fn modulus_available(ctx: &FieldCtx, family: &CoprimeFamily, deg_q: usize) -> bool {
    let taken = if deg_q == family.m {
        family.members.iter().filter(|p| is_irreducible(ctx, p).unwrap_or(false)).count()
    } else {
        0
    };
    count_irreducible(ctx, deg_q) > BigUint::from(taken)
}
