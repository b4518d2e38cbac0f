//! Prime residue class groups U(O/cO) of quadratic orders, their
//! p-elementary quotients by rational residues and p-th powers, and the
//! projection of Selmer generators into them.
//!
//! Membership in R_c K^p is decided locally: alpha lies in the ring class
//! kernel iff its residue is a rational times a p-th power in (O/cO)*. By
//! the Chinese remainder theorem both the unit group and the rational
//! subgroup split over the prime powers dividing c, so the quotient is a
//! direct product of local quotients, each a small F_p vector space.
//!
//! Per prime power the projection is realized on the p-Sylow subgroup: the
//! endomorphism x -> x^(m') with m' the prime-to-p part of the group order
//! retracts onto the Sylow subgroup and acts on the quotient as the
//! invertible scalar m', so a discrete-log table over the Sylow subgroup
//! (never larger than the p-part of the local group) decides everything.

use crate::arith::{self, kronecker, valuation};
use crate::error::{Error, Result};
use crate::quadforms::QuadInt;
use crate::realquad::ModRing;
use num::bigint::BigInt;
use num::integer::Integer;
use num::ToPrimitive;
use std::collections::{HashMap, HashSet};

/// The counters of the local rank analysis: t and w feed the ring quotient,
/// t-tilde and w-tilde the extra ray directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankCounters {
    pub t: u32,
    pub t_tilde: u32,
    pub w: u32,
    pub w_tilde: u32,
}

/// Counters for the p-rank of U(O/cO)/U(Z/cZ) and its ray refinement.
///
/// t counts primes q != p dividing c with q = (d/q) mod p; w is the
/// contribution of the critical prime p, with the doubled irregular case
/// p = 3, v_3(c) >= 2, d = -3 mod 9.
pub fn rank_counters(d: i64, c: u64, p: u32) -> RankCounters {
    let pl = p as u64;
    let mut t = 0;
    let mut t_tilde = 0;
    let fac = arith::factorize(c);
    for &(q, _) in &fac {
        if q == pl {
            continue;
        }
        let sym = kronecker(d, q);
        if (q % pl) as i64 == (sym as i64).rem_euclid(pl as i64) && sym != 0 {
            t += 1;
        }
        if q % pl == 1 {
            t_tilde += 1;
        }
    }
    let e = fac
        .iter()
        .find(|&&(q, _)| q == pl)
        .map(|&(_, e)| e)
        .unwrap_or(0);
    let p_div_d = d.rem_euclid(pl as i64) == 0;
    let d_mod9 = d.rem_euclid(9);
    let w = if e == 0 || (e == 1 && !p_div_d) {
        0
    } else if e >= 2 && p == 3 && d_mod9 == 6 {
        2
    } else if (e >= 2 && !p_div_d)
        || (e >= 1 && p_div_d && p >= 5)
        || (e >= 1 && p == 3 && d_mod9 == 3)
        || (e == 1 && p == 3 && d_mod9 == 6)
    {
        1
    } else {
        0
    };
    let w_tilde = if e >= 2 { 1 } else { 0 };
    RankCounters {
        t,
        t_tilde,
        w,
        w_tilde,
    }
}

/// Abelian invariants of U(O/q^n O) per decomposition type, following the
/// structure tables for quadratic orders (including the irregular rows for
/// q = 2 inert with d = 5 mod 8 and q = 3 ramified with d = -3 mod 9).
pub fn unit_group_structure(d: i64, q: u64, n: u32) -> Vec<u64> {
    let syms = kronecker(d, q);
    let qn1 = |k: u32| q.pow(k); // q^k
    let mut inv: Vec<u64> = match syms {
        1 => {
            // split: C(q-1) x C(q^{n-1}) squared
            vec![q - 1, qn1(n - 1), q - 1, qn1(n - 1)]
        }
        -1 => {
            if q == 2 && n >= 2 {
                // irregular: C(3) x C(2) x C(2^{n-2}) x C(2^{n-1})
                vec![3, 2, qn1(n - 2), qn1(n - 1)]
            } else {
                vec![q * q - 1, qn1(n - 1), qn1(n - 1)]
            }
        }
        _ => {
            if q == 3 && d.rem_euclid(9) == 6 {
                // irregular ramified: C(2) x C(3) x C(3^{n-1}) x C(3^{n-1})
                vec![2, 3, qn1(n - 1), qn1(n - 1)]
            } else if q == 2 {
                // ramified 2: read the invariants off the actual group
                return brute_force_invariants(d, q, n);
            } else {
                vec![q - 1, qn1(n - 1), qn1(n)]
            }
        }
    };
    inv.retain(|&m| m > 1);
    inv.sort_unstable();
    inv
}

/// Abelian invariants by torsion counting in the enumerated local group
/// (cross-check and the ramified q = 2 fallback).
pub fn brute_force_invariants(d: i64, q: u64, n: u32) -> Vec<u64> {
    let modulus = q.pow(n);
    let ring = ModRing::new(d, modulus);
    let units = enumerate_units(&ring, q);
    let order = units.len() as u64;
    let mut inv: Vec<(u64, Vec<u32>)> = Vec::new();
    for (ell, _) in arith::factorize(order) {
        // v_ell(#A[ell^k]) for increasing k until stable
        let mut logs = vec![0u32];
        let mut power = 1u64;
        loop {
            power *= ell;
            let cnt = units
                .iter()
                .filter(|&&x| ring.pow(x, power) == (1, 0))
                .count() as u64;
            let v = valuation(cnt, ell);
            if v == *logs.last().unwrap() {
                break;
            }
            logs.push(v);
        }
        let mut parts = Vec::new();
        for k in 1..logs.len() {
            let ge_k = (logs[k] - logs[k - 1]) as usize;
            while parts.len() < ge_k {
                parts.push(0u32);
            }
            for p in parts.iter_mut().take(ge_k) {
                *p = k as u32;
            }
        }
        parts.sort_unstable();
        inv.push((ell, parts));
    }
    let slots = inv.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
    let mut divisors = vec![1u64; slots];
    for (ell, parts) in &inv {
        for (i, &e) in parts.iter().enumerate() {
            divisors[slots - parts.len() + i] *= ell.pow(e);
        }
    }
    divisors
}

fn enumerate_units(ring: &ModRing, q: u64) -> Vec<(u64, u64)> {
    let m = ring.modulus;
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if ring.norm((a, b)) % q != 0 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Whether to quotient by rational residues (ring) or not (ray).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientKind {
    Ring,
    Ray,
}

/// One prime-power component of the reduced quotient, with a discrete-log
/// table over its p-Sylow subgroup.
#[derive(Debug, Clone)]
struct LocalQuotient {
    q: u64,
    modulus: u64,
    p: u32,
    ring: ModRing,
    dim: usize,
    cofactor: u64,
    scalar: u64, // (cofactor mod p)^{-1} mod p
    table: HashMap<(u64, u64), Vec<u32>>,
}

const LOCAL_MODULUS_CAP: u64 = 1 << 22;

impl LocalQuotient {
    fn build(d: i64, q: u64, n: u32, p: u32, kind: QuotientKind) -> Result<LocalQuotient> {
        let modulus = q.pow(n);
        if modulus > LOCAL_MODULUS_CAP {
            return Err(Error::ModulusTooLarge(modulus));
        }
        let ring = ModRing::new(d, modulus);
        let order = local_group_order(d, q, n);
        let k = valuation(order, p as u64);
        let pl = p as u64;
        if k == 0 {
            return Ok(LocalQuotient {
                q,
                modulus,
                p,
                ring,
                dim: 0,
                cofactor: 1,
                scalar: 1,
                table: HashMap::new(),
            });
        }
        let cofactor = order / pl.pow(k);
        // generate the p-Sylow subgroup from retracted scan elements
        let sylow_order = pl.pow(k) as usize;
        let mut sylow: HashSet<(u64, u64)> = HashSet::new();
        sylow.insert((1, 0));
        'scan: for b in 0..modulus {
            for a in 0..modulus {
                if ring.norm((a, b)) % q == 0 {
                    continue;
                }
                let y = ring.pow((a, b), cofactor);
                if sylow.contains(&y) {
                    continue;
                }
                // extend the span by the cyclic group generated by y
                let mut ext = HashSet::new();
                let mut pw = (1u64, 0u64);
                loop {
                    for &s in &sylow {
                        ext.insert(ring.mul(s, pw));
                    }
                    pw = ring.mul(pw, y);
                    if pw == (1, 0) {
                        break;
                    }
                }
                sylow = ext;
                if sylow.len() == sylow_order {
                    break 'scan;
                }
            }
        }
        if sylow.len() != sylow_order {
            return Err(Error::Invariant(format!(
                "p-Sylow of U(O/{q}^{n}) has size {} instead of {sylow_order}",
                sylow.len()
            )));
        }
        // subgroup S: p-th powers, plus rational residues for the ring quotient
        let mut sub: HashSet<(u64, u64)> = HashSet::new();
        sub.insert((1, 0));
        let absorb = |gen: (u64, u64), sub: &mut HashSet<(u64, u64)>| {
            if sub.contains(&gen) {
                return;
            }
            let mut ext = HashSet::new();
            let mut pw = (1u64, 0u64);
            loop {
                for &s in sub.iter() {
                    ext.insert(ring.mul(s, pw));
                }
                pw = ring.mul(pw, gen);
                if pw == (1, 0) {
                    break;
                }
            }
            *sub = ext;
        };
        for &y in &sylow {
            absorb(ring.pow(y, pl), &mut sub);
        }
        if kind == QuotientKind::Ring {
            for z in 1..modulus {
                if z % q == 0 {
                    continue;
                }
                absorb(ring.pow((z, 0), cofactor), &mut sub);
            }
        }
        let quotient_order = sylow.len() / sub.len();
        let dim = valuation(quotient_order as u64, pl) as usize;
        debug_assert_eq!(pl.pow(dim as u32) as usize, quotient_order);
        // coordinates: pick basis cosets greedily and fill the dlog table
        let mut table: HashMap<(u64, u64), Vec<u32>> = HashMap::new();
        for &s in &sub {
            table.insert(s, vec![0; dim]);
        }
        let mut filled = 1usize;
        let mut axis = 0usize;
        let members: Vec<(u64, u64)> = {
            let mut v: Vec<_> = sylow.iter().copied().collect();
            v.sort_unstable();
            v
        };
        while axis < dim {
            let e = *members
                .iter()
                .find(|x| !table.contains_key(x))
                .ok_or_else(|| Error::Invariant("sylow table exhausted early".into()))?;
            // multiply every known element by e^j, j = 1..p-1
            let known: Vec<((u64, u64), Vec<u32>)> =
                table.iter().map(|(k, v)| (*k, v.clone())).collect();
            let mut pw = e;
            for j in 1..pl {
                for (x, coords) in &known {
                    let mut c2 = coords.clone();
                    c2[axis] = j as u32;
                    table.insert(ring.mul(*x, pw), c2);
                }
                pw = ring.mul(pw, e);
            }
            filled *= pl as usize;
            axis += 1;
            debug_assert_eq!(table.len(), sub.len() * filled);
        }
        let scalar = mod_inverse(cofactor % pl, pl);
        Ok(LocalQuotient {
            q,
            modulus,
            p,
            ring,
            dim,
            cofactor,
            scalar,
            table,
        })
    }

    fn project(&self, a: u64, b: u64) -> Result<Vec<u32>> {
        if self.dim == 0 {
            if self.ring.norm((a, b)) % self.q == 0 {
                return Err(Error::NotCoprime(self.modulus));
            }
            return Ok(Vec::new());
        }
        if self.ring.norm((a, b)) % self.q == 0 {
            return Err(Error::NotCoprime(self.modulus));
        }
        let y = self.ring.pow((a, b), self.cofactor);
        let raw = self
            .table
            .get(&y)
            .ok_or_else(|| Error::Invariant("element escaped the Sylow table".into()))?;
        Ok(raw
            .iter()
            .map(|&c| (c * self.scalar as u32) % self.p)
            .collect())
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (g, x, _) = arith::extgcd(a as i128, m as i128);
    debug_assert_eq!(g, 1);
    x.rem_euclid(m as i128) as u64
}

fn local_group_order(d: i64, q: u64, n: u32) -> u64 {
    match kronecker(d, q) {
        1 => ((q - 1) * q.pow(n - 1)).pow(2),
        -1 => (q * q - 1) * q.pow(2 * (n - 1)),
        _ => (q - 1) * q.pow(2 * n - 1),
    }
}

/// The p-elementary quotient of U(O/cO)/U(Z/cZ) (or of U(O/cO) for the ray
/// variant) as an explicit F_p-linear projection of dimension t + w
/// (resp. t + t~ + w + w~).
#[derive(Debug)]
pub struct ReducedQuotient {
    pub d: i64,
    pub c: u64,
    pub p: u32,
    pub dim: usize,
    locals: Vec<LocalQuotient>,
}

pub fn reduced_quotient(d: i64, c: u64, p: u32) -> Result<ReducedQuotient> {
    build_quotient(d, c, p, QuotientKind::Ring)
}

pub fn ray_quotient(d: i64, c: u64, p: u32) -> Result<ReducedQuotient> {
    build_quotient(d, c, p, QuotientKind::Ray)
}

fn build_quotient(d: i64, c: u64, p: u32, kind: QuotientKind) -> Result<ReducedQuotient> {
    arith::validate_odd_prime(p)?;
    let mut locals = Vec::new();
    for (q, n) in arith::factorize(c) {
        locals.push(LocalQuotient::build(d, q, n, p, kind)?);
    }
    let dim = locals.iter().map(|l| l.dim).sum();
    let rq = ReducedQuotient {
        d,
        c,
        p,
        dim,
        locals,
    };
    let rc = rank_counters(d, c, p);
    let expect = match kind {
        QuotientKind::Ring => (rc.t + rc.w) as usize,
        QuotientKind::Ray => (rc.t + rc.t_tilde + rc.w + rc.w_tilde) as usize,
    };
    if dim != expect {
        return Err(Error::Invariant(format!(
            "quotient dimension {dim} != predicted {expect} for d={d}, c={c}, p={p}"
        )));
    }
    Ok(rq)
}

impl ReducedQuotient {
    /// Project a residue given on the integral basis {1, (d+sqrt(d))/2}.
    pub fn project_coords(&self, a: &BigInt, b: &BigInt) -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(self.dim);
        for l in &self.locals {
            let m = BigInt::from(l.modulus);
            let ar = a.mod_floor(&m).to_u64().unwrap();
            let br = b.mod_floor(&m).to_u64().unwrap();
            out.extend(l.project(ar, br)?);
        }
        Ok(out)
    }

    /// Image of alpha K^p under the quotient map; the zero vector iff
    /// alpha lies in R_c K^p, i.e. iff its class belongs to V_p(c).
    pub fn project(&self, alpha: &QuadInt) -> Result<Vec<u32>> {
        debug_assert_eq!(alpha.d, self.d);
        let (a, b) = alpha.basis_coords();
        self.project_coords(&a, &b)
    }

    /// Project a rational integer residue.
    pub fn project_rational(&self, n: i64) -> Result<Vec<u32>> {
        self.project_coords(&BigInt::from(n), &BigInt::from(0))
    }
}
