//! Parameter planning and assembly of MR LRCs from rational functions.
//!
//! Group `i` gets a denominator `p_i` from a pairwise-coprime family of
//! degree-`m` polynomials and `r` numerators from an independent family.
//! The values `f_ij / p_i mod Q` live in `F_ℓ = F_q[x]/(Q)` and their
//! Frobenius powers fill the heavy rows (parity form) or the whole
//! generator (generator form).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf::{prime_power, ExtElem, ExtFieldCtx, FieldCtx};
use crate::innercodes::{self, bch_redundancy, ceil_log2, FamilyRoute, IndependentFamily};
use crate::linalg::{Matrix, MatrixExt, MatrixFq};
use crate::moore;
use crate::polyring::{self, CoprimeFamily, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeForm {
    Parity,
    Generator,
}

impl fmt::Display for CodeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeForm::Parity => "parity",
            CodeForm::Generator => "generator",
        })
    }
}

impl FromStr for CodeForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parity" => Ok(CodeForm::Parity),
            "generator" => Ok(CodeForm::Generator),
            other => Err(Error::Parse(format!("unknown code form {other:?}"))),
        }
    }
}

/// `(n, r, h, a)` together with the base field order `q` and the
/// denominator degree `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LrcParams {
    pub n: usize,
    pub r: usize,
    pub g: usize,
    pub h: usize,
    pub a: usize,
    pub q: u32,
    pub m: usize,
}

/// Checks the shape of `(n, r, h, a)` and returns the group count.
pub fn check_shape(n: usize, r: usize, h: usize, a: usize) -> Result<usize> {
    if r == 0 || n == 0 {
        return Err(Error::InvalidParams("n and r must be positive".into()));
    }
    if n % r != 0 {
        return Err(Error::InvalidParams(format!("n={n} is not a multiple of r={r}")));
    }
    if a > r {
        return Err(Error::InvalidParams(format!("a={a} exceeds r={r}")));
    }
    let g = n / r;
    if g * a + h >= n {
        return Err(Error::InvalidParams(format!("g*a + h = {} leaves no message symbols", g * a + h)));
    }
    Ok(g)
}

impl LrcParams {
    pub fn new(n: usize, r: usize, h: usize, a: usize, q: u32, m: usize) -> Result<Self> {
        let g = check_shape(n, r, h, a)?;
        if prime_power(q as u64).is_none() {
            return Err(Error::NotPrimePower(q as u64));
        }
        if m == 0 {
            return Err(Error::InvalidParams("m must be positive".into()));
        }
        Ok(LrcParams { n, r, g, h, a, q, m })
    }

    /// Code dimension `n − g·a − h`.
    pub fn k(&self) -> usize {
        self.n - self.g * self.a - self.h
    }

    pub fn redundancy(&self) -> usize {
        self.g * self.a + self.h
    }

    /// How many numerators per group must be independent.
    pub fn strength(&self, form: CodeForm) -> usize {
        match form {
            CodeForm::Parity => (self.h + self.a).min(self.r),
            CodeForm::Generator => self.r - self.a,
        }
    }

    /// `deg Q`: `min{h, g}·m` (parity) or `min{k, g}·m` (generator).
    /// Without heavy parities the parity form uses `Q = x`.
    pub fn field_degree(&self, form: CodeForm) -> usize {
        match form {
            CodeForm::Parity if self.h == 0 => 1,
            CodeForm::Parity => self.h.min(self.g) * self.m,
            CodeForm::Generator => self.k().min(self.g) * self.m,
        }
    }

    pub fn log2_field_size(&self, form: CodeForm) -> f64 {
        self.field_degree(form) as f64 * (self.q as f64).log2()
    }

    /// `q^m ≥ m·g`, enough pairwise-coprime denominators by counting.
    pub fn meets_supply_bound(&self) -> bool {
        pow_at_least(self.q, self.m, self.m as u128 * self.g as u128)
    }
}

fn pow_at_least(q: u32, m: usize, bound: u128) -> bool {
    match (q as u128).checked_pow(m as u32) {
        Some(v) => v >= bound,
        None => true,
    }
}

/// `⌈log_q g + 2·log_q log_q g⌉`, clamped below at 1.
pub fn small_log_term(q: u32, g: usize) -> usize {
    if g <= 1 {
        return 1;
    }
    let lq = (q as f64).ln();
    let l = (g as f64).ln() / lq;
    let v = if l <= 1.0 { l } else { l + 2.0 * l.ln() / lq };
    ((v - 1e-9).ceil() as usize).max(1)
}

/// Smallest `m' ≥ m` with `q^{m'} ≥ m'·g`.
pub fn bump_to_supply(q: u32, mut m: usize, g: usize) -> usize {
    while !pow_at_least(q, m, m as u128 * g as u128) {
        m += 1;
    }
    m
}

/// How the field parameters are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Given or smallest feasible `(q, m)` for the chosen form.
    Manual { q: Option<u32>, m: Option<usize>, form: CodeForm },
    /// Binary generator form, `m = r` when `2^r ≥ n`, else `⌈log₂ n⌉`.
    GenIdentity,
    /// Binary generator form with a BCH family of distance `r − a + 1`.
    GenBch,
    /// Binary parity form for `a = 1`, BCH family of distance `h + 2`.
    ParityBch,
    /// Binary parity form for `a = 1`, identity family (`m ≥ r`).
    ParityBinary,
    /// `q` the smallest power of two above `r`, `m ≥ h + a`.
    ParityMds,
    /// `q = 2^{⌈log₂ r⌉}`, identity family (`m ≥ r`).
    ParityIdentity,
}

impl Route {
    pub const NAMED: [Route; 6] =
        [Route::GenIdentity, Route::GenBch, Route::ParityBch, Route::ParityBinary, Route::ParityMds, Route::ParityIdentity];

    pub fn name(&self) -> &'static str {
        match self {
            Route::Manual { .. } => "manual",
            Route::GenIdentity => "gen-identity",
            Route::GenBch => "gen-bch",
            Route::ParityBch => "parity-bch",
            Route::ParityBinary => "parity-binary",
            Route::ParityMds => "parity-mds",
            Route::ParityIdentity => "parity-identity",
        }
    }

    pub fn form(&self) -> CodeForm {
        match self {
            Route::Manual { form, .. } => *form,
            Route::GenIdentity | Route::GenBch => CodeForm::Generator,
            _ => CodeForm::Parity,
        }
    }

    /// Parses a route name; `q`, `m` and `form` only apply to `manual`.
    pub fn from_name(name: &str, q: Option<u32>, m: Option<usize>, form: CodeForm) -> Result<Route> {
        if name == "manual" {
            return Ok(Route::Manual { q, m, form });
        }
        Route::NAMED
            .into_iter()
            .find(|r| r.name() == name)
            .ok_or_else(|| Error::Parse(format!("unknown route {name:?}")))
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which family construction applies for `(q, m, r, s)`, if any.
pub fn family_route(q: u32, m: usize, r: usize, s: usize) -> Option<FamilyRoute> {
    if m >= r {
        Some(FamilyRoute::Identity)
    } else if r <= q as usize + 1 && s <= m {
        Some(FamilyRoute::Mds)
    } else if q == 2 && r >= 2 && bch_redundancy(r, s + 1) <= m {
        Some(FamilyRoute::Bch)
    } else {
        None
    }
}

/// `r` vectors of `F_q^m`, any `s` independent: identity when `m ≥ r`, else
/// Vandermonde when `r ≤ q + 1` and `s ≤ m`, else binary BCH.
pub fn family_dispatch(ctx: Arc<FieldCtx>, m: usize, r: usize, s: usize) -> Result<IndependentFamily> {
    let q = ctx.order();
    match family_route(q, m, r, s) {
        Some(FamilyRoute::Identity) => innercodes::identity_family(ctx, m, r),
        Some(FamilyRoute::Mds) => innercodes::mds_family(ctx, m, r),
        Some(FamilyRoute::Bch) => Ok(innercodes::bch_family(r, s + 1)?.padded_to(m)),
        _ => Err(Error::NoFamily { q, m, r, s }),
    }
}

/// Local check matrix shared by every group: all-ones for `a = 1`,
/// otherwise an `[r, a]` MDS generator.
pub fn a_block(ctx: &FieldCtx, r: usize, a: usize) -> Result<MatrixFq> {
    match a {
        0 => Ok(Matrix::filled(0, r, 0)),
        1 => Ok(Matrix::filled(1, r, 1)),
        _ => innercodes::vandermonde_mds(ctx, r, a),
    }
}

/// Whether the construction's hypotheses hold for `params`.
///
/// `literal` adds the parity-form requirement `q ≥ r`.
pub fn check_feasible(params: &LrcParams, form: CodeForm, literal: bool) -> Result<()> {
    let LrcParams { r, g, h, a, q, m, .. } = *params;
    if form == CodeForm::Parity {
        if literal && (q as usize) < r {
            return Err(Error::InvalidParams(format!("q={q} is below r={r}")));
        }
        if a >= 2 && r > q as usize + 1 {
            return Err(Error::InvalidParams(format!("no [{r}, {a}] MDS code over F_{q}")));
        }
        if h == 0 {
            return Ok(());
        }
    }
    if !params.meets_supply_bound() {
        return Err(Error::InvalidParams(format!("q^m = {q}^{m} is below m*g = {}", m * g)));
    }
    let s = params.strength(form);
    if family_route(q, m, r, s).is_none() {
        return Err(Error::NoFamily { q, m, r, s });
    }
    let ctx = FieldCtx::for_order(q)?;
    let supply = polyring::coprime_supply(&ctx, m);
    if supply < BigUint::from(g) {
        return Err(Error::InsufficientCoprime { m, requested: g, available: supply.to_string() });
    }
    let deg = params.field_degree(form);
    // irreducible members come first in the coprime family
    let taken = if deg == m { polyring::count_irreducible(&ctx, m).min(BigUint::from(g)) } else { BigUint::from(0u32) };
    if polyring::count_irreducible(&ctx, deg) <= taken {
        return Err(Error::Exhausted { degree: deg });
    }
    Ok(())
}

const MANUAL_EXTRA_M: usize = 64;

fn manual_search(n: usize, r: usize, h: usize, a: usize, q: Option<u32>, m: Option<usize>, form: CodeForm) -> Result<LrcParams> {
    if let (Some(q), Some(m)) = (q, m) {
        let params = LrcParams::new(n, r, h, a, q, m)?;
        check_feasible(&params, form, true)?;
        return Ok(params);
    }
    let g = check_shape(n, r, h, a)?;
    let qs: Vec<u32> = match q {
        Some(q) => vec![q],
        None => {
            let limit = (4 * r + 16).min(1 << 16) as u32;
            (2..=limit).filter(|&v| prime_power(v as u64).is_some()).collect()
        }
    };
    let ms: Vec<usize> = match m {
        Some(m) => vec![m],
        None => (1..=r + ceil_log2(g.max(1)) + MANUAL_EXTRA_M).collect(),
    };
    for &q in &qs {
        for &m in &ms {
            let params = LrcParams::new(n, r, h, a, q, m)?;
            if check_feasible(&params, form, true).is_ok() {
                return Ok(params);
            }
        }
    }
    Err(Error::RouteUnavailable(format!("no feasible (q, m) for ({n}, {r}, {h}, {a}) in {form} form")))
}

/// Chooses `(q, m)` for `(n, r, h, a)` following `route`.
pub fn plan(n: usize, r: usize, h: usize, a: usize, route: &Route) -> Result<LrcParams> {
    let g = check_shape(n, r, h, a)?;
    let (q, m) = match *route {
        Route::Manual { q, m, form } => return manual_search(n, r, h, a, q, m, form),
        Route::GenIdentity => {
            let m = if pow_at_least(2, r, n as u128) { r } else { ceil_log2(n) };
            (2, m)
        }
        Route::GenBch => (2, (r - a) / 2 * ceil_log2(r) + 1),
        Route::ParityBch => {
            if a != 1 || r < h + 2 {
                return Err(Error::RouteUnavailable(format!("{route} needs a = 1 and r >= h + 2")));
            }
            (2, ((h + 1) / 2 * ceil_log2(r) + 1).max(small_log_term(2, g)))
        }
        Route::ParityBinary => {
            if a != 1 {
                return Err(Error::RouteUnavailable(format!("{route} needs a = 1")));
            }
            (2, r.max(small_log_term(2, g)))
        }
        Route::ParityMds => {
            let q = (r + 1).next_power_of_two() as u32;
            (q, (h + a).max(small_log_term(q, g)))
        }
        Route::ParityIdentity => {
            let q = r.next_power_of_two().max(2) as u32;
            (q, r.max(small_log_term(q, g)))
        }
    };
    let params = LrcParams::new(n, r, h, a, q, bump_to_supply(q, m.max(1), g))?;
    check_feasible(&params, route.form(), false)?;
    Ok(params)
}

/// Per-group rational functions `f_ij / p_i` and their values mod `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFunctions {
    pub denominator: Poly,
    pub numerators: Vec<Poly>,
    pub evaluations: Vec<ExtElem>,
}

#[derive(Debug, Clone)]
pub struct MrLrcCode {
    pub params: LrcParams,
    pub form: CodeForm,
    pub route: String,
    pub base: Arc<FieldCtx>,
    pub ext: Arc<ExtFieldCtx>,
    /// `H` (parity form) or `G` (generator form).
    pub matrix: MatrixExt,
    /// Shared local check block; empty for the generator form.
    pub a_block: MatrixFq,
    pub coprime: Option<CoprimeFamily>,
    pub family: Option<IndependentFamily>,
    pub groups: Vec<GroupFunctions>,
}

impl MrLrcCode {
    pub fn field_degree(&self) -> usize {
        self.ext.degree()
    }

    pub fn log2_field_size(&self) -> f64 {
        self.ext.log2_order()
    }

    /// Columns of group `i`.
    pub fn group_columns(&self, i: usize) -> std::ops::Range<usize> {
        i * self.params.r..(i + 1) * self.params.r
    }

    pub fn local_rows(&self) -> usize {
        match self.form {
            CodeForm::Parity => self.params.g * self.params.a,
            CodeForm::Generator => 0,
        }
    }

    pub fn require_form(&self, form: CodeForm) -> Result<()> {
        if self.form == form {
            Ok(())
        } else {
            Err(Error::WrongForm(match form {
                CodeForm::Parity => "parity",
                CodeForm::Generator => "generator",
            }))
        }
    }
}

struct Ingredients {
    base: Arc<FieldCtx>,
    ext: Arc<ExtFieldCtx>,
    coprime: CoprimeFamily,
    family: IndependentFamily,
    groups: Vec<GroupFunctions>,
}

fn ingredients(params: &LrcParams, form: CodeForm) -> Result<Ingredients> {
    let base = Arc::new(FieldCtx::for_order(params.q)?);
    let family = family_dispatch(base.clone(), params.m, params.r, params.strength(form))?;
    let coprime = polyring::coprime_family(&base, params.m, params.g)?;
    let deg = params.field_degree(form);
    let exclude = if deg == params.m { coprime.members.clone() } else { Vec::new() };
    let modulus = polyring::find_irreducible(&base, deg, &exclude)?;
    let ext = Arc::new(ExtFieldCtx::new(base.clone(), modulus)?);
    let mut groups = Vec::with_capacity(params.g);
    for p in &coprime.members {
        let inv = polyring::poly_mod_inverse(&base, p, ext.modulus())?;
        let numerators: Vec<Poly> = (0..params.r).map(|j| family.numerator(j)).collect();
        let evaluations = numerators
            .iter()
            .map(|f| ext.from_poly(&polyring::mulmod(&base, f, &inv, ext.modulus())?))
            .collect::<Result<Vec<_>>>()?;
        groups.push(GroupFunctions { denominator: p.clone(), numerators, evaluations });
    }
    Ok(Ingredients { base, ext, coprime, family, groups })
}

/// Parity-check form: block-diagonal local checks over `h` Moore rows.
pub fn build_parity(params: &LrcParams) -> Result<MrLrcCode> {
    let LrcParams { n, r, g, h, a, .. } = *params;
    check_shape(n, r, h, a)?;
    let (base, ext, coprime, family, groups) = if h == 0 {
        let base = Arc::new(FieldCtx::for_order(params.q)?);
        let ext = Arc::new(ExtFieldCtx::new(base.clone(), Poly::x())?);
        (base, ext, None, None, Vec::new())
    } else {
        let ing = ingredients(params, CodeForm::Parity)?;
        (ing.base, ing.ext, Some(ing.coprime), Some(ing.family), ing.groups)
    };
    let local = a_block(&base, r, a)?;
    let mut matrix = Matrix::filled(g * a + h, n, ext.zero());
    for i in 0..g {
        for row in 0..a {
            for j in 0..r {
                matrix.set(i * a + row, i * r + j, ext.embed(*local.get(row, j)));
            }
        }
    }
    for (i, grp) in groups.iter().enumerate() {
        let block = moore::moore_matrix(&ext, &grp.evaluations, h)?;
        for k in 0..h {
            for j in 0..r {
                matrix.set(g * a + k, i * r + j, block.get(k, j).clone());
            }
        }
    }
    Ok(MrLrcCode {
        params: *params,
        form: CodeForm::Parity,
        route: "direct".into(),
        base,
        ext,
        matrix,
        a_block: local,
        coprime,
        family,
        groups,
    })
}

/// Generator form: `k` Moore rows over every group's values.
pub fn build_generator(params: &LrcParams) -> Result<MrLrcCode> {
    let LrcParams { n, r, h, a, .. } = *params;
    check_shape(n, r, h, a)?;
    let k = params.k();
    let ing = ingredients(params, CodeForm::Generator)?;
    let mut matrix = Matrix::filled(k, n, ing.ext.zero());
    for (i, grp) in ing.groups.iter().enumerate() {
        let block = moore::moore_matrix(&ing.ext, &grp.evaluations, k)?;
        for row in 0..k {
            for j in 0..r {
                matrix.set(row, i * r + j, block.get(row, j).clone());
            }
        }
    }
    Ok(MrLrcCode {
        params: *params,
        form: CodeForm::Generator,
        route: "direct".into(),
        base: ing.base,
        ext: ing.ext,
        matrix,
        a_block: Matrix::filled(0, r, 0),
        coprime: Some(ing.coprime),
        family: Some(ing.family),
        groups: ing.groups,
    })
}

pub fn build(params: &LrcParams, form: CodeForm) -> Result<MrLrcCode> {
    match form {
        CodeForm::Parity => build_parity(params),
        CodeForm::Generator => build_generator(params),
    }
}

/// Plans along `route` and builds the code in the route's form.
pub fn construct(n: usize, r: usize, h: usize, a: usize, route: &Route) -> Result<MrLrcCode> {
    let params = plan(n, r, h, a, route)?;
    let mut code = build(&params, route.form())?;
    code.route = route.name().to_string();
    Ok(code)
}
