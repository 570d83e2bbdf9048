//! The ten acceptance checks, runnable from tests and from `mrlrc selftest`.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{check_comparison_claims, Regime, Verdict};
use crate::construct::{construct, CodeForm, MrLrcCode, Route};
use crate::error::Result;
use crate::field::Field;
use crate::gf::{ExtFieldCtx, FieldCtx};
use crate::innercodes::{self, bch_family, brute_min_distance, nullspace_generator, vandermonde_mds, verify_family};
use crate::linalg;
use crate::moore::{fq_independent, moore_det_nonzero};
use crate::oracle::count_irreducible_by_trial_division;
use crate::polyring::{self, count_irreducible, divisors};
use crate::verify::{
    check_mr_generator, check_mr_parity, decode_erasures, encode, random_parity_pattern, reduction_check,
    VerifyOptions,
};

pub const PARITY_INSTANCES: [(usize, usize, usize, usize); 5] =
    [(8, 4, 2, 1), (9, 3, 2, 1), (8, 4, 1, 2), (12, 4, 2, 1), (12, 3, 3, 1)];
pub const GENERATOR_INSTANCES: [(usize, usize, usize, usize); 2] = [(8, 4, 1, 1), (6, 3, 1, 1)];

const CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_secs: f64,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} criterion {:>2}: {} ({}; {:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed_secs
        )
    }
}

pub const TITLES: [&str; 10] = [
    "exhaustive MR check of parity-form codes",
    "exhaustive MR check of generator-form codes",
    "exact field sizes",
    "Moore determinant vs F_q independence",
    "BCH families and distances",
    "MDS distances",
    "erasure decode round-trip",
    "irreducible counts",
    "block reduction agreement",
    "bound comparison claims",
];

fn manual(n: usize, r: usize, h: usize, a: usize, form: CodeForm) -> Result<MrLrcCode> {
    construct(n, r, h, a, &Route::Manual { q: None, m: None, form })
}

fn exhaustive(jobs: usize) -> VerifyOptions {
    VerifyOptions { cap: CAP, jobs, ..VerifyOptions::exhaustive() }
}

fn mr_parity(jobs: usize) -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut ok = true;
    for (n, r, h, a) in PARITY_INSTANCES {
        let code = manual(n, r, h, a, CodeForm::Parity)?;
        let rep = check_mr_parity(&code, &exhaustive(jobs))?;
        ok &= rep.passed();
        notes.push(format!("({n},{r},{h},{a}) q={} {}/{}", code.params.q, rep.patterns_checked - rep.failure_count, rep.patterns_checked));
    }
    Ok((ok, notes.join(", ")))
}

fn mr_generator(jobs: usize) -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut ok = true;
    for (n, r, h, a) in GENERATOR_INSTANCES {
        let code = manual(n, r, h, a, CodeForm::Generator)?;
        let rep = check_mr_generator(&code, &exhaustive(jobs))?;
        ok &= rep.passed();
        notes.push(format!("({n},{r},{h},{a}) {}/{}", rep.patterns_checked - rep.failure_count, rep.patterns_checked));
    }
    Ok((ok, notes.join(", ")))
}

/// `ℓ = q^{min{h, g}·m}` or `q^{min{k, g}·m}`; locals-only codes use `ℓ = q`.
pub fn expected_field_size(code: &MrLrcCode) -> BigUint {
    let p = code.params;
    let heavy = match code.form {
        CodeForm::Parity => p.h,
        CodeForm::Generator => p.k(),
    };
    let exp = if heavy == 0 { 1 } else { heavy.min(p.g) * p.m };
    BigUint::from(p.q).pow(exp as u32)
}

fn field_sizes() -> Result<(bool, String)> {
    let mut codes = Vec::new();
    for (n, r, h, a) in PARITY_INSTANCES {
        codes.push(manual(n, r, h, a, CodeForm::Parity)?);
    }
    for (n, r, h, a) in GENERATOR_INSTANCES {
        codes.push(manual(n, r, h, a, CodeForm::Generator)?);
    }
    for (route, (n, r, h, a)) in [
        (Route::ParityMds, (8, 4, 2, 1)),
        (Route::ParityIdentity, (16, 4, 3, 1)),
        (Route::ParityBch, (64, 8, 2, 1)),
        (Route::GenIdentity, (16, 2, 1, 1)),
    ] {
        codes.push(construct(n, r, h, a, &route)?);
    }
    let mismatches: Vec<String> = codes
        .iter()
        .filter(|c| c.ext.order() != &expected_field_size(c))
        .map(|c| format!("{:?} {}", c.params, c.form))
        .collect();
    Ok((mismatches.is_empty(), format!("{} instances, mismatches: {:?}", codes.len(), mismatches)))
}

fn ext_ctx(q: u32, d: usize) -> Result<ExtFieldCtx> {
    let base = Arc::new(FieldCtx::for_order(q)?);
    let modulus = polyring::find_irreducible(&base, d, &[])?;
    ExtFieldCtx::new(base, modulus)
}

fn moore_equivalence() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4d6f_6f72);
    let mut agree = 0;
    let mut total = 0;
    let mut dependent = 0;
    for (q, d) in [(2, 3), (2, 4), (4, 2)] {
        let ctx = ext_ctx(q, d)?;
        for _ in 0..500 {
            let w = rng.gen_range(1..=d);
            let mut elems: Vec<_> = (0..w).map(|_| ctx.random(&mut rng)).collect();
            if w > 1 && rng.gen_bool(0.25) {
                elems[w - 1] = ctx.add(&elems[0], &elems[w - 2]);
            }
            let det = moore_det_nonzero(&ctx, &elems)?;
            let oracle = fq_independent(&ctx, &elems, CAP)?;
            total += 1;
            agree += usize::from(det == oracle);
            dependent += usize::from(!oracle);
        }
    }
    Ok((agree == total, format!("{agree}/{total} agree, {dependent} dependent tuples")))
}

fn bch_checks() -> Result<(bool, String)> {
    let mut ok = true;
    let mut checked = 0;
    let mut skipped = Vec::new();
    for r in [4, 8, 16] {
        for d in 2..=6 {
            if innercodes::bch_redundancy(r, d) >= r {
                // identity family territory
                skipped.push(format!("r={r} d={d}"));
                continue;
            }
            let fam = bch_family(r, d)?;
            let gen = nullspace_generator(&fam);
            let dist = brute_min_distance(&fam.ctx, &gen, CAP)?;
            ok &= fam.s == d - 1
                && verify_family(&fam, CAP)?
                && (gen.rows() == 0 || dist >= d)
                && fam.m <= innercodes::bch_redundancy(r, d);
            checked += 1;
        }
    }
    Ok((ok, format!("{checked} (r, d) pairs, not applicable: {}", skipped.join(" "))))
}

/// Minimum distance of the row space of an `a × r` block, enumerating the
/// smaller of the code and its dual (a code is MDS iff its dual is).
fn mds_distance(ctx: &FieldCtx, block: &linalg::Matrix<crate::gf::Fq>) -> Result<usize> {
    let (a, r) = (block.rows(), block.cols());
    if a == r {
        return Ok(if linalg::rank(ctx, block) == r { 1 } else { 0 });
    }
    if (ctx.order() as u128).pow(a as u32) <= CAP as u128 {
        return brute_min_distance(ctx, block, CAP);
    }
    let dual = linalg::Matrix::from_rows(linalg::nullspace(ctx, block))?;
    let dual_dist = brute_min_distance(ctx, &dual, CAP)?;
    Ok(if dual.rows() == r - a && dual_dist == a + 1 { r - a + 1 } else { 0 })
}

fn mds_checks() -> Result<(bool, String)> {
    let mut ok = true;
    let mut checked = 0;
    for q in [2u32, 4, 8] {
        let ctx = FieldCtx::for_order(q)?;
        for r in 1..=q as usize + 1 {
            for a in 1..=r {
                let block = vandermonde_mds(&ctx, r, a)?;
                ok &= mds_distance(&ctx, &block)? == r - a + 1;
                checked += 1;
            }
        }
    }
    Ok((ok, format!("{checked} (q, r, a) triples")))
}

fn decode_round_trip() -> Result<(bool, String)> {
    let code = manual(8, 4, 2, 1, CodeForm::Parity)?;
    let ext = &code.ext;
    let k = code.params.k();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6465_636f);
    let mut failures = 0;
    for _ in 0..1000 {
        let msg: Vec<_> = (0..k).map(|_| ext.random(&mut rng)).collect();
        let word = encode(&code, &msg)?;
        let mut positions = random_parity_pattern(&code.params, &mut rng).columns(code.params.r);
        // sometimes erase fewer than the maximum
        let keep = rng.gen_range(0..=positions.len());
        positions.truncate(keep.max(positions.len() / 2));
        let mut received: Vec<_> = word.iter().cloned().map(Some).collect();
        for &p in &positions {
            received[p] = None;
        }
        match decode_erasures(&code, &received) {
            Ok(back) if back == word => {}
            _ => failures += 1,
        }
    }
    Ok((failures == 0, format!("1000 pairs, {failures} failures")))
}

fn irreducible_counts() -> Result<(bool, String)> {
    let mut ok = true;
    for q in [2u32, 3, 4] {
        let ctx = FieldCtx::for_order(q)?;
        for d in 1..=6 {
            ok &= count_irreducible(&ctx, d) == BigUint::from(count_irreducible_by_trial_division(&ctx, d));
        }
        for m in 1..=8 {
            let sum: BigUint = divisors(m).into_iter().map(|d| count_irreducible(&ctx, d) * d).sum();
            ok &= sum == BigUint::from(q).pow(m as u32);
        }
    }
    Ok((ok, "q in {2,3,4}: brute force d <= 6, divisor identity m <= 8".into()))
}

fn reduction_agreement() -> Result<(bool, String)> {
    let code = manual(8, 4, 2, 1, CodeForm::Parity)?;
    // a degraded copy: group 1 reuses group 0's heavy columns, so some patterns fail
    let mut degraded = code.clone();
    let (g, a, r) = (code.params.g, code.params.a, code.params.r);
    for k in 0..code.params.h {
        for j in 0..r {
            let v = code.matrix.get(g * a + k, j).clone();
            degraded.matrix.set(g * a + k, r + j, v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7265_6475);
    let mut agree = 0;
    let mut singular = 0;
    let mut moore = true;
    for c in [&code, &degraded] {
        for _ in 0..50 {
            let pat = random_parity_pattern(&c.params, &mut rng);
            let out = reduction_check(c, &pat)?;
            agree += usize::from(out.full_nonzero == out.reduced_nonzero);
            singular += usize::from(!out.full_nonzero);
            moore &= out.reduced_is_moore;
        }
    }
    Ok((agree == 100 && moore, format!("{agree}/100 agree ({singular} singular, from the degraded copy)")))
}

fn comparison_claims() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for regime in Regime::ALL {
        let rep = check_comparison_claims(regime);
        let (c, s, x) =
            (rep.count(Verdict::Confirmed), rep.count(Verdict::ConstantSensitive), rep.count(Verdict::Refuted));
        ok &= c >= 20 && x == 0;
        notes.push(format!("{}: {c} confirmed, {s} constant-sensitive, {x} refuted", regime.name()));
    }
    Ok((ok, notes.join("; ")))
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize, jobs: usize) -> CriterionOutcome {
    let start = Instant::now();
    let result = match id {
        1 => mr_parity(jobs),
        2 => mr_generator(jobs),
        3 => field_sizes(),
        4 => moore_equivalence(),
        5 => bch_checks(),
        6 => mds_checks(),
        7 => decode_round_trip(),
        8 => irreducible_counts(),
        9 => reduction_agreement(),
        10 => comparison_claims(),
        _ => panic!("no criterion {id}"),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionOutcome { id, title: TITLES[id - 1], passed, detail, elapsed_secs: start.elapsed().as_secs_f64() }
}

pub fn run_all(jobs: usize) -> Vec<CriterionOutcome> {
    (1..=10).map(|id| run_criterion(id, jobs)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        for id in [3, 4, 6, 8, 10] {
            let out = run_criterion(id, 0);
            assert!(out.passed, "{out}");
        }
    }

    #[test]
    fn display_line() {
        let out = CriterionOutcome { id: 3, title: "x", passed: false, detail: "d".into(), elapsed_secs: 0.5 };
        assert_eq!(out.to_string(), "FAIL criterion  3: x (d; 0.50s)");
    }
}
