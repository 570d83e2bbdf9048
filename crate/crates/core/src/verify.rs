//! MR checks, encoding and erasure decoding.
//!
//! A parity-form code is MR when every choice of `a` columns per group plus
//! `h` further columns is independent. A generator-form code is MR when every
//! `k` columns with at most `r − a` per group are independent. Both checks
//! rank the selections: the `i`-th selection can be rebuilt from `i` alone,
//! so work splits into independent chunks and sampling is uniform.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, unrank_combination};
use crate::construct::{CodeForm, LrcParams, MrLrcCode};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf::ExtElem;
use crate::linalg::{self, Matrix, MatrixExt};

pub const DEFAULT_CAP: u64 = 1_000_000;
pub const CAP_ENV: &str = "MRLRC_CAP";
const CHUNK: u128 = 256;

/// Cap from `MRLRC_CAP`, else [`DEFAULT_CAP`].
pub fn default_cap() -> u64 {
    std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

/// Erased positions, listed per group (0-based within the group).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErasurePattern {
    pub groups: Vec<Vec<usize>>,
}

impl ErasurePattern {
    pub fn new(mut groups: Vec<Vec<usize>>, r: usize) -> Result<Self> {
        for (i, grp) in groups.iter_mut().enumerate() {
            grp.sort_unstable();
            if grp.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedPattern(format!("duplicate index in group {i}")));
            }
            if let Some(&bad) = grp.iter().find(|&&j| j >= r) {
                return Err(Error::MalformedPattern(format!("index {bad} out of range in group {i}")));
            }
        }
        Ok(ErasurePattern { groups })
    }

    pub fn from_positions(positions: &[usize], g: usize, r: usize) -> Result<Self> {
        let mut groups = vec![Vec::new(); g];
        for &p in positions {
            if p >= g * r {
                return Err(Error::MalformedPattern(format!("position {p} out of range")));
            }
            groups[p / r].push(p % r);
        }
        Self::new(groups, r)
    }

    /// Parses `group:index` pairs separated by commas or whitespace.
    pub fn parse(s: &str, g: usize, r: usize) -> Result<Self> {
        let mut groups = vec![Vec::new(); g];
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let (gi, j) = tok
                .split_once(':')
                .ok_or_else(|| Error::MalformedPattern(format!("expected group:index, got {tok:?}")))?;
            let gi: usize = gi.parse().map_err(|_| Error::MalformedPattern(format!("bad group in {tok:?}")))?;
            let j: usize = j.parse().map_err(|_| Error::MalformedPattern(format!("bad index in {tok:?}")))?;
            if gi >= g {
                return Err(Error::MalformedPattern(format!("group {gi} out of range")));
            }
            groups[gi].push(j);
        }
        Self::new(groups, r)
    }

    /// Global sorted positions.
    pub fn positions(&self, r: usize) -> Vec<usize> {
        self.groups.iter().enumerate().flat_map(|(i, grp)| grp.iter().map(move |&j| i * r + j)).collect()
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_pairs(&self) -> String {
        let pairs: Vec<String> =
            self.groups.iter().enumerate().flat_map(|(i, grp)| grp.iter().map(move |j| format!("{i}:{j}"))).collect();
        pairs.join(",")
    }
}

/// Whether the pattern splits into at most `a` per group plus at most `h`.
pub fn admissible(pattern: &ErasurePattern, params: &LrcParams) -> Result<bool> {
    if pattern.groups.len() != params.g {
        return Err(Error::MalformedPattern(format!("{} groups given, {} expected", pattern.groups.len(), params.g)));
    }
    if pattern.groups.iter().flatten().any(|&j| j >= params.r) {
        return Err(Error::MalformedPattern("index out of range".into()));
    }
    let excess: usize = pattern.groups.iter().map(|grp| grp.len().saturating_sub(params.a)).sum();
    Ok(excess <= params.h)
}

/// `a` local erasures per group plus `h` extra ones, group-relative indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalPattern {
    pub local: Vec<Vec<usize>>,
    pub extra: Vec<Vec<usize>>,
}

impl MaximalPattern {
    pub fn to_erasure(&self, r: usize) -> ErasurePattern {
        let groups = self.local.iter().zip(&self.extra).map(|(t, s)| t.iter().chain(s).copied().collect()).collect();
        ErasurePattern::new(groups, r).expect("maximal patterns are well formed")
    }

    /// Columns ordered group by group, local ones first.
    pub fn columns(&self, r: usize) -> Vec<usize> {
        let mut cols = Vec::new();
        for (i, (t, s)) in self.local.iter().zip(&self.extra).enumerate() {
            cols.extend(t.iter().chain(s).map(|&j| i * r + j));
        }
        cols
    }
}

/// Number of maximal parity-form patterns: `C(r,a)^g · C(n − g·a, h)`.
pub fn parity_pattern_count(p: &LrcParams) -> u128 {
    let per = binomial(p.r, p.a);
    let mut total = binomial(p.n - p.g * p.a, p.h);
    for _ in 0..p.g {
        total = total.saturating_mul(per);
    }
    total
}

/// The `index`-th maximal pattern: lexicographic over `(T_1, …, T_g)`, then
/// over the `h`-subsets of the remaining columns.
pub fn unrank_parity_pattern(p: &LrcParams, index: u128) -> MaximalPattern {
    let per = binomial(p.r, p.a);
    let extra_count = binomial(p.n - p.g * p.a, p.h);
    let mut t_index = index / extra_count;
    let s_index = index % extra_count;
    let mut local = vec![Vec::new(); p.g];
    for i in (0..p.g).rev() {
        local[i] = unrank_combination(p.r, p.a, t_index % per);
        t_index /= per;
    }
    let remaining: Vec<usize> =
        (0..p.n).filter(|&c| !local[c / p.r].contains(&(c % p.r))).collect();
    let mut extra = vec![Vec::new(); p.g];
    for k in unrank_combination(remaining.len(), p.h, s_index) {
        let c = remaining[k];
        extra[c / p.r].push(c % p.r);
    }
    MaximalPattern { local, extra }
}

/// Uniform random maximal pattern.
pub fn random_parity_pattern<R: Rng + ?Sized>(p: &LrcParams, rng: &mut R) -> MaximalPattern {
    unrank_parity_pattern(p, rng.gen_range(0..parity_pattern_count(p)))
}

/// Column selections for the generator check, ranked through the per-group
/// counts `(c_1, …, c_g)` (lexicographic) and then per-group subsets.
pub struct GeneratorSelections {
    r: usize,
    weights: Vec<(Vec<usize>, u128)>,
    prefix: Vec<u128>,
}

impl GeneratorSelections {
    pub fn new(p: &LrcParams) -> Self {
        let k = p.k();
        let limit = p.r - p.a;
        let mut weights = Vec::new();
        let mut counts = vec![0usize; p.g];
        compositions(&mut counts, 0, k, limit, &mut |c| {
            let w = c.iter().fold(1u128, |acc, &ci| acc.saturating_mul(binomial(p.r, ci)));
            weights.push((c.to_vec(), w));
        });
        let mut prefix = Vec::with_capacity(weights.len());
        let mut acc = 0u128;
        for (_, w) in &weights {
            acc = acc.saturating_add(*w);
            prefix.push(acc);
        }
        GeneratorSelections { r: p.r, weights, prefix }
    }

    pub fn count(&self) -> u128 {
        self.prefix.last().copied().unwrap_or(0)
    }

    /// Global column indices of the `index`-th selection.
    pub fn unrank(&self, mut index: u128) -> Vec<usize> {
        let slot = self.prefix.partition_point(|&p| p <= index);
        if slot > 0 {
            index -= self.prefix[slot - 1];
        }
        let counts = &self.weights[slot].0;
        let mut cols = Vec::new();
        let mut parts = vec![Vec::new(); counts.len()];
        for i in (0..counts.len()).rev() {
            let c = binomial(self.r, counts[i]);
            parts[i] = unrank_combination(self.r, counts[i], index % c);
            index /= c;
        }
        for (i, part) in parts.iter().enumerate() {
            cols.extend(part.iter().map(|&j| i * self.r + j));
        }
        cols
    }
}

fn compositions(counts: &mut Vec<usize>, at: usize, left: usize, limit: usize, emit: &mut dyn FnMut(&[usize])) {
    if at == counts.len() {
        if left == 0 {
            emit(counts);
        }
        return;
    }
    let room = limit * (counts.len() - at - 1);
    for c in 0..=limit.min(left) {
        if left - c > room {
            continue;
        }
        counts[at] = c;
        compositions(counts, at + 1, left - c, limit, emit);
    }
    counts[at] = 0;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum VerifyMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    pub cap: u64,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    /// How many failing patterns to keep as witnesses.
    pub max_witnesses: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { mode: VerifyMode::Exhaustive, cap: default_cap(), jobs: 0, max_witnesses: 16 }
    }
}

impl VerifyOptions {
    pub fn exhaustive() -> Self {
        Self::default()
    }

    pub fn sampled(count: u64, seed: u64) -> Self {
        VerifyOptions { mode: VerifyMode::Sampled { count, seed }, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: VerifyMode,
    pub patterns_checked: u64,
    pub failure_count: u64,
    /// First failing patterns in enumeration order, truncated.
    pub failures: Vec<ErasurePattern>,
    pub elapsed_secs: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

fn run_checks<F>(total: u128, opts: &VerifyOptions, check: F) -> Result<VerifyReport>
where
    F: Fn(u128) -> Option<ErasurePattern> + Sync,
{
    if total == 0 {
        return Err(Error::EmptyPatternSpace);
    }
    let start = Instant::now();
    let indices: Vec<u128> = match opts.mode {
        VerifyMode::Exhaustive => {
            if total > opts.cap as u128 {
                return Err(Error::CapExceeded { count: total, cap: opts.cap });
            }
            Vec::new()
        }
        VerifyMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| rng.gen_range(0..total)).collect()
        }
    };
    let checked = if indices.is_empty() { total } else { indices.len() as u128 };
    let chunks = checked.div_ceil(CHUNK);
    let work = |chunk: u128| -> (u64, Vec<ErasurePattern>) {
        let lo = chunk * CHUNK;
        let hi = (lo + CHUNK).min(checked);
        let mut count = 0;
        let mut found = Vec::new();
        for i in lo..hi {
            let idx = if indices.is_empty() { i } else { indices[i as usize] };
            if let Some(p) = check(idx) {
                count += 1;
                if found.len() < opts.max_witnesses {
                    found.push(p);
                }
            }
        }
        (count, found)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    let results: Vec<(u64, Vec<ErasurePattern>)> =
        pool.install(|| (0..chunks as u64).into_par_iter().map(|c| work(c as u128)).collect());
    let failure_count = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).take(opts.max_witnesses).collect();
    Ok(VerifyReport {
        mode: opts.mode,
        patterns_checked: checked as u64,
        failure_count,
        failures,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

fn full_column_rank(code: &MrLrcCode, cols: &[usize]) -> bool {
    linalg::rank(&*code.ext, &code.matrix.select_columns(cols)) == cols.len()
}

/// Checks every maximal admissible erasure pattern (or a seeded sample).
pub fn check_mr_parity(code: &MrLrcCode, opts: &VerifyOptions) -> Result<VerifyReport> {
    code.require_form(CodeForm::Parity)?;
    let p = code.params;
    run_checks(parity_pattern_count(&p), opts, |i| {
        let pat = unrank_parity_pattern(&p, i);
        (!full_column_rank(code, &pat.columns(p.r))).then(|| pat.to_erasure(p.r))
    })
}

/// Checks every `k`-column selection with at most `r − a` per group.
/// Failures are reported as the complementary (erased) positions.
pub fn check_mr_generator(code: &MrLrcCode, opts: &VerifyOptions) -> Result<VerifyReport> {
    code.require_form(CodeForm::Generator)?;
    let p = code.params;
    let sel = GeneratorSelections::new(&p);
    run_checks(sel.count(), opts, |i| {
        let cols = sel.unrank(i);
        if full_column_rank(code, &cols) {
            return None;
        }
        let erased: Vec<usize> = (0..p.n).filter(|c| !cols.contains(c)).collect();
        Some(ErasurePattern::from_positions(&erased, p.g, p.r).expect("complement is in range"))
    })
}

pub fn check_mr(code: &MrLrcCode, opts: &VerifyOptions) -> Result<VerifyReport> {
    match code.form {
        CodeForm::Parity => check_mr_parity(code, opts),
        CodeForm::Generator => check_mr_generator(code, opts),
    }
}

/// Systematic-where-possible encoder from the reduced row echelon form of `H`.
pub struct Encoder {
    reduced: MatrixExt,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl Encoder {
    pub fn new(code: &MrLrcCode) -> Result<Self> {
        code.require_form(CodeForm::Parity)?;
        let (reduced, pivots) = linalg::rref(&*code.ext, &code.matrix);
        if pivots.len() != code.matrix.rows() {
            return Err(Error::Singular);
        }
        let free = (0..code.matrix.cols()).filter(|c| !pivots.contains(c)).collect();
        Ok(Encoder { reduced, pivots, free })
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Message symbols land on the free columns; the rest are solved for.
    pub fn encode(&self, code: &MrLrcCode, message: &[ExtElem]) -> Result<Vec<ExtElem>> {
        if message.len() != self.free.len() {
            return Err(Error::Dimension(format!("message has {} symbols, expected {}", message.len(), self.free.len())));
        }
        let ext = &*code.ext;
        if message.iter().any(|m| !ext.contains(m)) {
            return Err(Error::ContextMismatch);
        }
        let mut word = vec![ext.zero(); code.matrix.cols()];
        for (&f, m) in self.free.iter().zip(message) {
            word[f] = m.clone();
        }
        for (row, &p) in self.pivots.iter().enumerate() {
            let mut acc = ext.zero();
            for &f in &self.free {
                acc = ext.add(&acc, &ext.mul(self.reduced.get(row, f), &word[f]));
            }
            word[p] = ext.neg(&acc);
        }
        Ok(word)
    }
}

pub fn encode(code: &MrLrcCode, message: &[ExtElem]) -> Result<Vec<ExtElem>> {
    Encoder::new(code)?.encode(code, message)
}

/// Completes a word with erasures (`None`) so that `H·x = 0`.
pub fn decode_erasures(code: &MrLrcCode, word: &[Option<ExtElem>]) -> Result<Vec<ExtElem>> {
    code.require_form(CodeForm::Parity)?;
    let p = code.params;
    if word.len() != p.n {
        return Err(Error::Dimension(format!("word has {} symbols, expected {}", word.len(), p.n)));
    }
    let ext = &*code.ext;
    let erased: Vec<usize> = (0..p.n).filter(|&i| word[i].is_none()).collect();
    let pattern = ErasurePattern::from_positions(&erased, p.g, p.r)?;
    if !admissible(&pattern, &p)? {
        return Err(Error::NotAdmissible);
    }
    let known: Vec<usize> = (0..p.n).filter(|&i| word[i].is_some()).collect();
    let known_vals: Vec<ExtElem> = known.iter().map(|&i| word[i].clone().unwrap()).collect();
    if known_vals.iter().any(|v| !ext.contains(v)) {
        return Err(Error::ContextMismatch);
    }
    let mut out: Vec<ExtElem> = word.iter().map(|w| w.clone().unwrap_or_else(|| ext.zero())).collect();
    if erased.is_empty() {
        return Ok(out);
    }
    let syndrome = linalg::mul_vec(ext, &code.matrix.select_columns(&known), &known_vals)?;
    let rhs: Vec<ExtElem> = syndrome.iter().map(|s| ext.neg(s)).collect();
    let solution = linalg::solve(ext, &code.matrix.select_columns(&erased), &rhs)?;
    for (&i, v) in erased.iter().zip(solution) {
        out[i] = v;
    }
    Ok(out)
}

/// Both sides of the block reduction for one maximal pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionOutcome {
    /// The `(g·a + h)`-square submatrix has nonzero determinant.
    pub full_nonzero: bool,
    /// The reduced `h × h` matrix `L_i − K_i M_i^{-1} N_i` is invertible.
    pub reduced_nonzero: bool,
    /// Each reduced row is the Frobenius image of the previous one.
    pub reduced_is_moore: bool,
}

/// Computes the full determinant and, separately, the reduced heavy matrix
/// obtained by eliminating the local columns of each group.
pub fn reduction_check(code: &MrLrcCode, pattern: &MaximalPattern) -> Result<ReductionOutcome> {
    code.require_form(CodeForm::Parity)?;
    let p = code.params;
    let ext = &*code.ext;
    let base = &*code.base;
    let full = code.matrix.select_columns(&pattern.columns(p.r));
    let full_nonzero = !ext.is_zero(&linalg::determinant(ext, &full)?);

    let heavy = |row: usize, col: usize| code.matrix.get(p.g * p.a + row, col).clone();
    let mut reduced_cols: Vec<Vec<ExtElem>> = Vec::with_capacity(p.h);
    for i in 0..p.g {
        let t = &pattern.local[i];
        let s = &pattern.extra[i];
        // coefficients of the local columns cancelling the extra ones: M^{-1} N over F_q
        let coeffs = if p.a == 0 {
            Matrix::filled(0, s.len(), 0)
        } else {
            let m = code.a_block.select_columns(t);
            let n = code.a_block.select_columns(s);
            linalg::mul(base, &linalg::inverse(base, &m)?, &n)?
        };
        for (sj, &j) in s.iter().enumerate() {
            let col: Vec<ExtElem> = (0..p.h)
                .map(|row| {
                    let mut acc = heavy(row, i * p.r + j);
                    for (ti, &l) in t.iter().enumerate() {
                        let c = ext.embed(*coeffs.get(ti, sj));
                        acc = ext.sub(&acc, &ext.mul(&heavy(row, i * p.r + l), &c));
                    }
                    acc
                })
                .collect();
            reduced_cols.push(col);
        }
    }
    let reduced = Matrix::from_columns(p.h, &reduced_cols)?;
    let reduced_nonzero = !ext.is_zero(&linalg::determinant(ext, &reduced)?);
    let reduced_is_moore = (1..p.h)
        .all(|k| (0..reduced.cols()).all(|c| reduced.get(k, c) == &ext.frobenius(reduced.get(k - 1, c), 1)));
    Ok(ReductionOutcome { full_nonzero, reduced_nonzero, reduced_is_moore })
}
