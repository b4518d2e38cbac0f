//! Batch drivers over discriminant ranges and conductor spaces: rank
//! frequency counts, minimal discriminants, multiplet counts bounded by the
//! root discriminant, first free conductors, and the irregular conductor
//! survey.
//!
//! Scans are data parallel over discriminants and merged by sorted
//! reduction, so reports are identical across worker counts and runs.

use crate::arith::{self, isqrt, kronecker};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::multiplicity::{
    admissibility, closed_vs_general_on, dihedral_discriminant, general_multiplicity_with,
    multiplicity_with, ConductorSpaces,
};
use crate::quadforms::{
    p_rank_of_forms, reduced_forms, represent_prime, selmer_generator, FieldRecord, Form,
};
use crate::realquad;
use crate::ringspace::{selmer_basis, SelmerBasis, REPRESENT_BOUND};
use num::bigint::BigInt;
use num::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// A census result: parameters, column headers, and stringly rows, ready to
/// diff against transcribed table data.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CensusReport {
    pub kind: String,
    pub params: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CensusReport {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let fmt_row = |cells: &[String]| {
            cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{:>width$}", c, width = widths[i]))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = String::new();
        for (k, v) in &self.params {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&fmt_row(&self.columns));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&fmt_row(row));
            out.push('\n');
        }
        out
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool")
            .install(f)
    }
}

/// All fundamental discriminants d with lo <= d <= hi < 0, ascending |d|.
pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<i64> {
    assert!(lo <= hi && hi < 0, "expected a negative range");
    let n = lo.unsigned_abs() as usize;
    let mut squarefree = vec![true; n + 1];
    let mut q = 2usize;
    while q * q <= n {
        let mut k = q * q;
        while k <= n {
            squarefree[k] = false;
            k += q * q;
        }
        q += 1;
    }
    let mut out = Vec::new();
    for a in (hi.unsigned_abs() as usize).max(3)..=n {
        let d = -(a as i64);
        if d > hi {
            continue;
        }
        let fundamental = if a % 4 == 3 {
            squarefree[a]
        } else if a % 4 == 0 {
            let k = a / 4;
            (k % 4 == 1 || k % 4 == 2) && squarefree[k]
        } else {
            false
        };
        if fundamental {
            out.push(d);
        }
    }
    out
}

/// Per-discriminant (h, rho_p) over a range, cache-aware and parallel.
fn rank_scan(
    p: u32,
    lo: i64,
    hi: i64,
    cache: &Cache,
    workers: usize,
) -> Result<Vec<(i64, u64, u32)>> {
    let ds = fundamental_discriminants(lo, hi);
    let mut known: Vec<(i64, u64, u32)> = Vec::new();
    let mut todo: Vec<i64> = Vec::new();
    for &d in &ds {
        match cache
            .get(d)
            .and_then(|r| r.ranks.get(&p).map(|&v| (r.h, v)))
        {
            Some((h, rho)) => known.push((d, h, rho)),
            None => todo.push(d),
        }
    }
    let progress_every = if todo.len() >= 100_000 {
        todo.len() / 20
    } else {
        usize::MAX
    };
    let done = std::sync::atomic::AtomicUsize::new(0);
    let fresh: Vec<(i64, u64, u32)> = with_pool(workers, || {
        todo.par_iter()
            .map(|&d| {
                let forms = reduced_forms(d).expect("valid discriminant");
                let rho = p_rank_of_forms(&forms, p);
                let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if k % progress_every == 0 {
                    eprintln!("rank scan p = {p}: {k}/{} discriminants", todo.len());
                }
                (d, forms.len() as u64, rho)
            })
            .collect()
    });
    cache.put_all(fresh.iter().map(|&(d, h, rho)| {
        let mut rec = FieldRecord {
            d,
            h,
            elementary_divisors: Vec::new(),
            generator_forms: Vec::new(),
            ranks: Default::default(),
            selmer: Default::default(),
        };
        rec.ranks.insert(p, rho);
        rec
    }))?;
    let mut all = known;
    all.extend(fresh);
    all.sort_unstable_by_key(|&(d, _, _)| std::cmp::Reverse(d));
    Ok(all)
}

fn unramified_count(p: u32, rho: u32) -> u64 {
    let pl = p as u64;
    (pl.pow(rho) - 1) / (pl - 1)
}

/// Frequency of p-class ranks over a discriminant range.
pub fn rank_frequencies(
    p: u32,
    d_min: i64,
    d_max: i64,
    cache: &Cache,
    workers: usize,
) -> Result<CensusReport> {
    arith::validate_odd_prime(p)?;
    if d_min >= d_max || d_max >= 0 {
        return Err(Error::DimensionMismatch(format!(
            "bad scan range [{d_min}, {d_max}]"
        )));
    }
    let scan = rank_scan(p, d_min, d_max, cache, workers)?;
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &(_, _, rho) in &scan {
        *counts.entry(rho).or_insert(0) += 1;
    }
    let mut params = BTreeMap::new();
    params.insert("p".into(), p.to_string());
    params.insert("d_min".into(), d_min.to_string());
    params.insert("d_max".into(), d_max.to_string());
    Ok(CensusReport {
        kind: "rank-frequencies".into(),
        params,
        columns: vec!["rho_p".into(), "m_p_d_1".into(), "count".into()],
        rows: counts
            .iter()
            .map(|(&rho, &n)| {
                vec![
                    rho.to_string(),
                    unramified_count(p, rho).to_string(),
                    n.to_string(),
                ]
            })
            .collect(),
    })
}

/// Fundamental discriminant of least |d| with the given p-class rank.
pub fn minimal_discriminant(
    p: u32,
    rho: u32,
    negative: bool,
    search_bound: i64,
) -> Result<(i64, u64)> {
    arith::validate_odd_prime(p)?;
    if !negative {
        return Err(Error::UnsupportedField { d: 0, p, rho });
    }
    for d in fundamental_discriminants(-search_bound.abs(), -3) {
        let forms = reduced_forms(d)?;
        if p_rank_of_forms(&forms, p) == rho {
            return Ok((d, unramified_count(p, rho)));
        }
    }
    Err(Error::SearchExhausted(format!(
        "no d with {p}-rank {rho} above -{search_bound}"
    )))
}

/// Count of multiplets (d, c) with c^2 |d| < bound, per multiplicity class
/// {1, p-1, p+1}, split into the columns c = 1, c > 1 (rank-zero fields)
/// and, for p = 3, the cyclotomic column d = -3.
pub fn multiplet_census(p: u32, bound: u64, cache: &Cache, workers: usize) -> Result<CensusReport> {
    arith::validate_odd_prime(p)?;
    let pl = p as u64;
    // column c = 1: unramified multiplets over the whole range
    let scan = rank_scan(p, -(bound as i64) + 1, -3, cache, workers)?;
    let mut c1: BTreeMap<u64, u64> = BTreeMap::new();
    for &(_, _, rho) in &scan {
        if rho > 0 {
            *c1.entry(unramified_count(p, rho)).or_insert(0) += 1;
        }
    }
    // column c > 1: rank-zero base fields (d = -3 handled separately for p = 3)
    let primes: Vec<u64> = sieve_primes(isqrt(bound / 3) + 1);
    let rank_zero: Vec<i64> = scan
        .iter()
        .filter(|&&(d, _, rho)| rho == 0 && 4 * d.unsigned_abs() < bound && !(p == 3 && d == -3))
        .map(|&(d, _, _)| d)
        .collect();
    let partials: Vec<(BTreeMap<u64, u64>, u64)> = with_pool(workers, || {
        rank_zero
            .par_iter()
            .map(|&d| count_free_conductors(d, p, bound, &primes))
            .collect()
    });
    let mut cgt1: BTreeMap<u64, u64> = BTreeMap::new();
    let mut field_total = 0u64;
    for (part, fields) in partials {
        field_total += fields;
        for (m, n) in part {
            *cgt1.entry(m).or_insert(0) += n;
        }
    }
    // sanity: the per-class counts must account for every counted field
    let implied: u64 = cgt1.iter().map(|(m, n)| m * n).sum();
    if implied != field_total {
        return Err(Error::Invariant(format!(
            "multiplet classes sum to {implied} fields, scan counted {field_total}"
        )));
    }
    // column d = -3 (p = 3 only)
    let dm3 = if p == 3 && bound > 27 {
        Some(cyclotomic_column(bound)?)
    } else {
        None
    };
    let mut params = BTreeMap::new();
    params.insert("p".into(), p.to_string());
    params.insert("bound".into(), bound.to_string());
    let mut columns = vec!["m".into(), "c_eq_1".into(), "c_gt_1".into()];
    if dm3.is_some() {
        columns.push("d_eq_minus3".into());
    }
    let zero = BTreeMap::new();
    let dm3_map = dm3.as_ref().unwrap_or(&zero);
    let targets = [1u64, pl - 1, pl + 1];
    let rows = targets
        .iter()
        .map(|m| {
            let mut row = vec![
                m.to_string(),
                c1.get(m).copied().unwrap_or(0).to_string(),
                cgt1.get(m).copied().unwrap_or(0).to_string(),
            ];
            if dm3.is_some() {
                row.push(dm3_map.get(m).copied().unwrap_or(0).to_string());
            }
            row
        })
        .collect();
    Ok(CensusReport {
        kind: "multiplets".into(),
        params,
        columns,
        rows,
    })
}

fn sieve_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is_p = vec![true; n + 1];
    let mut out = Vec::new();
    for q in 2..=n {
        if is_p[q] {
            out.push(q as u64);
            let mut k = q * q;
            while k <= n {
                is_p[k] = false;
                k += q;
            }
        }
    }
    out
}

/// Multiplicities of all admissible conductors c > 1 with c^2 |d| < bound
/// over a rank-zero field: every conductor is free, so m depends only on
/// (tau, omega). Returns the per-m counts and the independently summed
/// total of fields.
fn count_free_conductors(d: i64, p: u32, bound: u64, primes: &[u64]) -> (BTreeMap<u64, u64>, u64) {
    let pl = p as u64;
    let abs_d = d.unsigned_abs();
    let cmax2 = (bound - 1) / abs_d; // c^2 <= cmax2
    let admissible: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&q| {
            q != pl && q * q <= cmax2 && {
                let sym = kronecker(d, q);
                sym != 0 && (q % pl) as i64 == (sym as i64).rem_euclid(pl as i64)
            }
        })
        .collect();
    // p-part choices: (p^e, tau increment, irregular flag)
    let p_div_d = d.rem_euclid(pl as i64) == 0;
    let d_mod9 = d.rem_euclid(9);
    let mut ppart: Vec<(u64, usize, bool)> = vec![(1, 0, false)];
    if p_div_d && pl * pl <= cmax2 {
        ppart.push((pl, 1, false));
    }
    if !p_div_d && pl.pow(4) <= cmax2 {
        ppart.push((pl * pl, 1, false));
    }
    if p == 3 && d_mod9 == 6 && 81 <= cmax2 {
        ppart.push((9, 1, true));
    }
    let mut counts = BTreeMap::new();
    let mut samples: Vec<(u64, usize, bool, u64)> = Vec::new();
    let mut field_total = 0u64;
    for &(c0, t0, irregular) in &ppart {
        dfs_conductors(
            d,
            p,
            c0,
            t0,
            irregular,
            0,
            cmax2,
            &admissible,
            &mut counts,
            &mut samples,
            &mut field_total,
        );
    }
    // re-verify a 1% sample of (d, c) pairs against the general divisor sum
    for (c, tau, irregular, m) in samples {
        let profile = admissibility(d, p, c).expect("valid inputs");
        assert!(profile.admissible && profile.tau == tau);
        let spaces = vec![crate::ringspace::RingSpace::full(p, 0); tau];
        let kind = if irregular {
            ConductorSpaces::Irregular {
                space3: crate::ringspace::RingSpace::full(p, 0),
                space9: crate::ringspace::RingSpace::full(p, 0),
                primes: vec![crate::ringspace::RingSpace::full(p, 0); tau - 1],
            }
        } else {
            ConductorSpaces::Regular { spaces }
        };
        let (closed, general) = closed_vs_general_on(0, &kind).expect("engine");
        assert_eq!(closed, m, "closed count drifted at d = {d}, c = {c}");
        assert_eq!(general, m, "divisor sum disagrees at d = {d}, c = {c}");
    }
    (counts, field_total)
}

#[allow(clippy::too_many_arguments)]
fn dfs_conductors(
    d: i64,
    p: u32,
    c: u64,
    tau: usize,
    irregular: bool,
    next: usize,
    cmax2: u64,
    primes: &[u64],
    counts: &mut BTreeMap<u64, u64>,
    samples: &mut Vec<(u64, usize, bool, u64)>,
    field_total: &mut u64,
) {
    if c > 1 {
        let omega = u32::from(irregular);
        let m = (p as u64).pow(omega) * ((p - 1) as u64).pow(tau as u32 - 1);
        *counts.entry(m).or_insert(0) += 1;
        *field_total += m;
        if (d.unsigned_abs() ^ c).wrapping_mul(0x9e3779b97f4a7c15) % 100 == 0 {
            samples.push((c, tau, irregular, m));
        }
    }
    for (i, &q) in primes.iter().enumerate().skip(next) {
        match c.checked_mul(q) {
            Some(cq) if cq * cq <= cmax2 => {
                dfs_conductors(
                    d,
                    p,
                    cq,
                    tau + 1,
                    irregular,
                    i + 1,
                    cmax2,
                    primes,
                    counts,
                    samples,
                    field_total,
                );
            }
            _ => {
                if c.checked_mul(q).is_none() || q * q > cmax2 {
                    break;
                }
            }
        }
    }
}

/// m_3(-3, c) counts for all admissible c > 1 with 3 c^2 < bound.
fn cyclotomic_column(bound: u64) -> Result<BTreeMap<u64, u64>> {
    let basis = selmer_basis(-3, 3)?;
    let cmax2 = (bound - 1) / 3;
    let primes: Vec<u64> = sieve_primes(isqrt(cmax2) + 1)
        .into_iter()
        .filter(|&q| q != 3)
        .collect();
    let mut cs: Vec<u64> = Vec::new();
    for ppart in [1u64, 3, 9] {
        if ppart * ppart <= cmax2 {
            collect_products(ppart, 0, cmax2, &primes, &mut cs);
        }
    }
    cs.retain(|&c| c > 1);
    cs.sort_unstable();
    let mut counts = BTreeMap::new();
    for &c in &cs {
        let profile = admissibility(-3, 3, c)?;
        debug_assert!(profile.admissible);
        let b = multiplicity_with(&profile, 0, 1, Some(&basis))?;
        let general = general_multiplicity_with(&profile, 0, 1, &basis)?;
        if b.m != general {
            return Err(Error::Invariant(format!(
                "closed form {} != divisor sum {general} for c = {c} over d = -3",
                b.m
            )));
        }
        *counts.entry(b.m).or_insert(0) += 1;
    }
    Ok(counts)
}

fn collect_products(c: u64, next: usize, cmax2: u64, primes: &[u64], out: &mut Vec<u64>) {
    out.push(c);
    for (i, &q) in primes.iter().enumerate().skip(next) {
        let cq = match c.checked_mul(q) {
            Some(v) => v,
            None => break,
        };
        if cq * cq > cmax2 {
            break;
        }
        collect_products(cq, i + 1, cmax2, primes, out);
    }
}

/// Congruence filter for a first-occurrence scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Mod8Is(i64),
    Mod9Is(i64),
    Mod3Is(i64),
    KronIs(u64, i32),
}

impl Condition {
    pub fn holds(&self, d: i64) -> bool {
        match *self {
            Condition::Mod8Is(r) => d.rem_euclid(8) == r,
            Condition::Mod9Is(r) => d.rem_euclid(9) == r,
            Condition::Mod3Is(r) => d.rem_euclid(3) == r,
            Condition::KronIs(q, v) => kronecker(d, q) == v,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Condition::Mod8Is(r) => format!("d={r} mod 8"),
            Condition::Mod9Is(r) => format!("d={} mod 9", if r == 6 { -3 } else { r }),
            Condition::Mod3Is(r) => format!("d={} mod 3", if r == 2 { -1 } else { r }),
            Condition::KronIs(q, v) => format!("(d/{q})={v:+}"),
        }
    }
}

/// One row of a first-occurrence table: the first discriminant at which the
/// fixed conductor is free, with a generator witness.
#[derive(Debug, Clone)]
pub struct FirstFreeRow {
    pub d: i64,
    pub condition: Condition,
    pub form: Form,
    pub r: u64,
    pub x: BigInt,
    pub y: BigInt,
    pub c: u64,
    pub d_l: BigInt,
    pub m: u64,
}

/// The canned scan specs reproducing the free-prime-conductor table for
/// rho_3 = 1: conductors 2..13 with their admissibility conditions.
pub const FIRST_FREE_SPECS: [(u64, Condition); 10] = [
    (2, Condition::Mod8Is(5)),
    (3, Condition::Mod9Is(3)),
    (3, Condition::Mod9Is(6)),
    (5, Condition::KronIs(5, -1)),
    (7, Condition::KronIs(7, 1)),
    (9, Condition::Mod3Is(1)),
    (9, Condition::Mod3Is(2)),
    (9, Condition::Mod9Is(6)),
    (11, Condition::KronIs(11, -1)),
    (13, Condition::KronIs(13, 1)),
];

/// Scan discriminants d < -3 descending under the given condition with
/// p-class rank `rho` until the conductor c is free; return the row with a
/// witness whose coordinates certify freeness (c | y or c | x).
pub fn first_free_conductor(
    p: u32,
    c: u64,
    condition: Condition,
    rho: u32,
    d_floor: i64,
) -> Result<FirstFreeRow> {
    arith::validate_odd_prime(p)?;
    for d in fundamental_discriminants(d_floor, -4) {
        if !condition.holds(d) {
            continue;
        }
        let forms = reduced_forms(d)?;
        if p_rank_of_forms(&forms, p) != rho {
            continue;
        }
        let basis = selmer_basis(d, p)?;
        if basis.defect(c)? != 0 {
            continue;
        }
        let (form, r, x, y) = free_witness(&basis, c)?;
        let profile = admissibility(d, p, c)?;
        let b = multiplicity_with(&profile, rho, basis.sigma, Some(&basis))?;
        let general = general_multiplicity_with(&profile, rho, basis.sigma, &basis)?;
        if b.m != general {
            return Err(Error::Invariant(format!(
                "closed form {} != divisor sum {general} at d = {d}, c = {c}",
                b.m
            )));
        }
        let (_, d_l) = dihedral_discriminant(d, p, c);
        return Ok(FirstFreeRow {
            d,
            condition,
            form,
            r,
            x,
            y,
            c,
            d_l,
            m: b.m,
        });
    }
    Err(Error::SearchExhausted(format!(
        "no free conductor {c} for condition {} above {d_floor}",
        condition.label()
    )))
}

/// Witness search: vary represented primes of the canonical order-p form
/// until the norm equation solution satisfies c | y or c | x.
fn free_witness(basis: &SelmerBasis, c: u64) -> Result<(Form, u64, BigInt, BigInt)> {
    let form = match &basis.generators[0] {
        crate::ringspace::Generator::ClassPart { form, .. } => *form,
        _ => {
            return Err(Error::Invariant(
                "witness search requires a class-part generator".into(),
            ))
        }
    };
    let mut exclude = vec![c];
    for _ in 0..60 {
        let rep = represent_prime(&form, basis.p, &exclude, REPRESENT_BOUND)?;
        let alpha = selmer_generator(basis.d, &form, rep.r, basis.p)?;
        let cb = BigInt::from(c);
        if (&alpha.y % &cb).is_zero() || (&alpha.x % &cb).is_zero() {
            return Ok((form, rep.r, alpha.x, alpha.y));
        }
        exclude.push(rep.r);
    }
    Err(Error::SearchExhausted(format!(
        "no boldface witness for c = {c} over d = {}",
        basis.d
    )))
}

pub fn first_free_report(p: u32, d_floor: i64) -> Result<CensusReport> {
    let mut rows = Vec::new();
    for &(c, cond) in FIRST_FREE_SPECS.iter() {
        let row = first_free_conductor(p, c, cond, 1, d_floor)?;
        rows.push(vec![
            row.d.to_string(),
            cond.label(),
            row.form.to_string(),
            row.r.to_string(),
            format!("({},{})", row.x, row.y),
            row.c.to_string(),
            row.d_l.to_string(),
            row.m.to_string(),
        ]);
    }
    let mut params = BTreeMap::new();
    params.insert("p".into(), p.to_string());
    params.insert("rho".into(), "1".into());
    Ok(CensusReport {
        kind: "first-free".into(),
        params,
        columns: vec![
            "d".into(),
            "condition".into(),
            "F".into(),
            "r".into(),
            "(x,y)".into(),
            "c".into(),
            "d_L".into(),
            "m_3".into(),
        ],
        rows,
    })
}

/// Survey of the irregular conductor c = 9 over the listed discriminants:
/// (rho_3, sigma_3, delta_3(3), delta_3(9), m_3(d, 9)). Real rows are
/// cross-checked against the regulator quotient criterion.
pub fn irregular_survey(d_list: &[i64]) -> Result<CensusReport> {
    let mut rows = Vec::new();
    for &d in d_list {
        if d.rem_euclid(9) != 6 || !arith::is_fundamental(d) {
            return Err(Error::NotAdmissible { d, q: 9, p: 3 });
        }
        if d > 0 && !realquad::real_p_rank_is_zero(d, 3)? {
            rows.push(vec![
                d.to_string(),
                "-".into(),
                "-".into(),
                "-".into(),
                "-".into(),
                "-".into(),
                "unsupported".into(),
            ]);
            continue;
        }
        let basis = selmer_basis(d, 3)?;
        let d3 = basis.defect(3)?;
        let d9 = basis.defect(9)?;
        if d > 0 {
            // regulator quotient criterion must agree
            let rqc3 = realquad::rqc_defect(d, 3, 3)? as usize;
            let rqc9 = realquad::rqc_defect(d, 9, 3)? as usize;
            if (d3, d9) != (rqc3, rqc9) {
                return Err(Error::Invariant(format!(
                    "residue defects ({d3},{d9}) != regulator criterion ({rqc3},{rqc9}) for d={d}"
                )));
            }
        }
        let profile = admissibility(d, 3, 9)?;
        let b = multiplicity_with(&profile, basis.rho, basis.sigma, Some(&basis))?;
        let general = general_multiplicity_with(&profile, basis.rho, basis.sigma, &basis)?;
        if b.m != general {
            return Err(Error::Invariant(format!(
                "closed form {} != divisor sum {general} at d = {d}, c = 9",
                b.m
            )));
        }
        let d_l = if b.m > 0 {
            b.d_l.to_string()
        } else {
            "-".into()
        };
        rows.push(vec![
            d.to_string(),
            basis.rho.to_string(),
            basis.sigma.to_string(),
            d3.to_string(),
            d9.to_string(),
            d_l,
            b.m.to_string(),
        ]);
    }
    Ok(CensusReport {
        kind: "irregular".into(),
        params: BTreeMap::new(),
        columns: vec![
            "d".into(),
            "rho_3".into(),
            "sigma_3".into(),
            "delta_3_3".into(),
            "delta_3_9".into(),
            "d_L".into(),
            "m_3".into(),
        ],
        rows,
    })
}
