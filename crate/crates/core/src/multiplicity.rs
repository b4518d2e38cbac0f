//! Conductor admissibility and classification, the closed-form multiplicity
//! formulas, the trichotomy decomposition, and the general divisor-sum
//! oracle.
//!
//! Every admissible conductor is counted by m = U * F * R with unramified
//! part U = p^rho, free part F, and restrictive part R. The restrictive
//! factor is one rational function of the position counters: R(v, n_1..n_{p+1})
//! collapses to the codimension-0 and codimension-1 factors when the
//! occupation vector is (0,..) or (v,0,..), so a single dispatch covers all
//! regular cases. Irregular conductors whose critical prime divisor is
//! restrictive degenerate to the regular formulas at the effective counters
//! u+n and v-n with the omega factor dropped.

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};
use crate::quadforms;
use crate::realquad;
use crate::ringspace::{formal_divisors, selmer_basis, RingSpace, SelmerBasis};
use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Signed, ToPrimitive, Zero};

/// Classification of one conductor c over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConductorProfile {
    pub d: i64,
    pub p: u32,
    pub c: u64,
    pub factorization: Factorization,
    /// Exponent of p in c.
    pub e: u32,
    /// Number of prime divisors distinct from p.
    pub t: usize,
    /// Formal divisor count: t, plus one for the p-part when e >= 1.
    pub tau: usize,
    pub admissible: bool,
    pub irregular: bool,
}

/// Admissibility of c over d per the congruence and exponent constraints:
/// c = p^e q_1 ... q_t with distinct primes q_i = (d/q_i) mod p and e drawn
/// from {0,2}, {0,1} or {0,1,2} depending on how p sits in d.
pub fn admissibility(d: i64, p: u32, c: u64) -> Result<ConductorProfile> {
    arith::validate_odd_prime(p)?;
    if !arith::is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    assert!(c >= 1, "conductor must be positive");
    let pl = p as u64;
    let factorization = arith::factorize(c);
    let mut admissible = true;
    let mut e = 0u32;
    let mut t = 0usize;
    for &(q, k) in &factorization {
        if q == pl {
            e = k;
            continue;
        }
        if k > 1 {
            admissible = false;
        }
        let sym = arith::kronecker(d, q);
        if sym == 0 || (q % pl) as i64 != (sym as i64).rem_euclid(pl as i64) {
            admissible = false;
        }
        t += 1;
    }
    let p_div_d = d.rem_euclid(pl as i64) == 0;
    let d_mod9 = d.rem_euclid(9);
    let e_ok = match e {
        0 => true,
        1 => p_div_d,
        2 => !p_div_d || (p == 3 && d_mod9 == 6),
        _ => false,
    };
    if !e_ok {
        admissible = false;
    }
    let irregular = admissible && p == 3 && e == 2 && d_mod9 == 6;
    let tau = t + usize::from(e >= 1);
    Ok(ConductorProfile {
        d,
        p,
        c,
        factorization,
        e,
        t,
        tau,
        admissible,
        irregular,
    })
}

/// Exact rational restrictive factor
/// R(v, n_1..n_{p+1}) = ((p-1)^(v-1) + sum_i (-1)^(v-n_i) (p-1)^(n_i)) / p^2.
///
/// The occupation vector must have p + 1 entries with sum at most v. The
/// value is the codimension-2 factor; by construction it equals the
/// codimension-1 factor at (v, 0, ..) and 1/(p-1) at v = 0.
pub fn restrictive_factor(p: u32, v: usize, occupations: &[usize]) -> Result<Ratio<i128>> {
    if occupations.len() != p as usize + 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected {} occupation numbers, got {}",
            p + 1,
            occupations.len()
        )));
    }
    if occupations.iter().sum::<usize>() > v {
        return Err(Error::DimensionMismatch(format!(
            "occupation numbers sum past v = {v}"
        )));
    }
    let pm1 = (p - 1) as i128;
    let lead = if v == 0 {
        Ratio::new(1, pm1)
    } else {
        Ratio::from_integer(pm1.pow(v as u32 - 1))
    };
    let mut sum = lead;
    for &n in occupations {
        let sign = if (v - n) % 2 == 0 { 1 } else { -1 };
        sum += Ratio::from_integer(sign * pm1.pow(n as u32));
    }
    Ok(sum / Ratio::from_integer((p as i128) * (p as i128)))
}

/// Which closed form produced a multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaKind {
    Inadmissible,
    Unramified,
    Free,
    Restrictive1,
    Restrictive2,
    Degenerate1,
    Degenerate2,
    GeneralSum,
}

impl FormulaKind {
    pub fn label(&self) -> &'static str {
        match self {
            FormulaKind::Inadmissible => "inadmissible",
            FormulaKind::Unramified => "unramified",
            FormulaKind::Free => "free",
            FormulaKind::Restrictive1 => "codim-1",
            FormulaKind::Restrictive2 => "codim-2",
            FormulaKind::Degenerate1 => "degenerate codim-1",
            FormulaKind::Degenerate2 => "degenerate codim-2",
            FormulaKind::GeneralSum => "general divisor sum",
        }
    }
}

/// The full answer record for one (d, p, c).
#[derive(Debug, Clone)]
pub struct MultiplicityBreakdown {
    pub d: i64,
    pub p: u32,
    pub c: u64,
    pub admissible: bool,
    pub irregular: bool,
    pub rho: u32,
    pub sigma: usize,
    pub omega: u8,
    pub tau: usize,
    pub delta: usize,
    /// (delta_3(3), delta_3(9)) when c is irregular.
    pub delta3: Option<(usize, usize)>,
    pub u: usize,
    pub v: usize,
    /// Hyperplane occupation numbers sorted descending (p + 1 entries when
    /// the dispatch used them).
    pub occupations: Vec<usize>,
    /// Occupation of the distinguished hyperplane for degenerate dispatch.
    pub degenerate_n: Option<usize>,
    pub unramified: u64,
    pub free: u64,
    pub restrictive: Ratio<i128>,
    pub formula: FormulaKind,
    pub m: u64,
    pub d_n: BigInt,
    pub d_l: BigInt,
}

/// Dihedral discriminant d_N = c^{2(p-1)} d^p and the degree-p subfield
/// discriminant d_L = (c^2 d)^{(p-1)/2} (= c^2 d for p = 3).
pub fn dihedral_discriminant(d: i64, p: u32, c: u64) -> (BigInt, BigInt) {
    let c = BigInt::from(c);
    let d = BigInt::from(d);
    let d_n = c.pow(2 * (p - 1)) * d.pow(p);
    let d_l = (&c * &c * &d).pow((p - 1) / 2);
    (d_n, d_l)
}

/// Ring-space data of one conductor, ready for the formula engine.
#[derive(Debug, Clone)]
pub enum ConductorSpaces {
    /// Regular: one space per formal divisor (primes, then p^e if e >= 1).
    Regular { spaces: Vec<RingSpace> },
    /// Irregular (p = 3, e = 2, d = -3 mod 9): the spaces at 3 and 9, and
    /// one per prime divisor q != 3.
    Irregular {
        space3: RingSpace,
        space9: RingSpace,
        primes: Vec<RingSpace>,
    },
}

impl ConductorSpaces {
    fn sigma(&self) -> usize {
        match self {
            ConductorSpaces::Regular { spaces } => spaces.first().map_or(0, |s| s.ambient),
            ConductorSpaces::Irregular { space3, .. } => space3.ambient,
        }
    }

    fn p(&self) -> u32 {
        match self {
            ConductorSpaces::Regular { spaces } => spaces.first().map_or(3, |s| s.p),
            ConductorSpaces::Irregular { space3, .. } => space3.p,
        }
    }

    /// All formal divisor spaces (for the irregular case the 9-part last).
    pub fn divisor_spaces(&self) -> Vec<RingSpace> {
        match self {
            ConductorSpaces::Regular { spaces } => spaces.clone(),
            ConductorSpaces::Irregular { space9, primes, .. } => {
                let mut v = primes.clone();
                v.push(space9.clone());
                v
            }
        }
    }
}

pub(crate) struct EngineOut {
    pub m: u64,
    pub omega: u8,
    pub delta: usize,
    pub delta3: Option<(usize, usize)>,
    pub u: usize,
    pub v: usize,
    pub occupations: Vec<usize>,
    pub degenerate_n: Option<usize>,
    pub unramified: u64,
    pub free: u64,
    pub restrictive: Ratio<i128>,
    pub formula: FormulaKind,
}

fn meet_all(p: u32, sigma: usize, spaces: &[RingSpace]) -> Result<RingSpace> {
    let mut acc = RingSpace::full(p, sigma);
    for s in spaces {
        acc = acc.intersect(s)?;
    }
    Ok(acc)
}

/// Closed-form multiplicity from the ring spaces of the formal divisors.
pub(crate) fn closed_multiplicity(rho: u32, kind: &ConductorSpaces) -> Result<EngineOut> {
    let p = kind.p();
    let sigma = kind.sigma();
    match kind {
        ConductorSpaces::Regular { spaces } => regular_dispatch(p, rho, sigma, spaces, 0, None),
        ConductorSpaces::Irregular {
            space3,
            space9,
            primes,
        } => {
            let d33 = space3.codim();
            let d39 = space9.codim();
            let mut spaces = primes.clone();
            spaces.push(space9.clone());
            if d33 == 0 {
                regular_dispatch(p, rho, sigma, &spaces, 1, Some((d33, d39)))
            } else {
                degenerate_dispatch(p, rho, sigma, &spaces, space3, (d33, d39), kind)
            }
        }
    }
}

fn regular_dispatch(
    p: u32,
    rho: u32,
    sigma: usize,
    spaces: &[RingSpace],
    omega: u8,
    delta3: Option<(usize, usize)>,
) -> Result<EngineOut> {
    let tau = spaces.len();
    let limit = meet_all(p, sigma, spaces)?;
    let delta = limit.codim();
    let u = spaces.iter().filter(|s| s.is_full()).count();
    let v = tau - u;
    let slots = p as usize + 1;
    let (ns, formula) = match delta {
        0 => (vec![0usize; slots], FormulaKind::Free),
        1 => {
            let mut ns = vec![0usize; slots];
            ns[0] = v;
            (ns, FormulaKind::Restrictive1)
        }
        2 => {
            let hs = limit.hyperplanes_over()?;
            let mut ns: Vec<usize> = hs
                .iter()
                .map(|h| spaces.iter().filter(|s| *s == h).count())
                .collect();
            if ns.iter().sum::<usize>() != v {
                return Err(Error::Invariant(format!(
                    "occupation numbers {ns:?} do not cover the {v} restrictive divisors"
                )));
            }
            ns.sort_unstable_by(|a, b| b.cmp(a));
            (ns, FormulaKind::Restrictive2)
        }
        _ => {
            // no closed form; caller falls through to the general sum
            let out = general_sum(p, rho, sigma, spaces, None)?;
            return Ok(EngineOut {
                m: out,
                omega,
                delta,
                delta3,
                u,
                v,
                occupations: Vec::new(),
                degenerate_n: None,
                unramified: (p as u64).pow(rho),
                free: 1,
                restrictive: Ratio::one(),
                formula: FormulaKind::GeneralSum,
            });
        }
    };
    let rr = restrictive_factor(p, v, &ns)?;
    let uu = (p as u64).pow(rho);
    let ff = (p as u64).pow(omega as u32) * ((p - 1) as u64).pow(u as u32);
    let m = assemble(uu, ff, &rr)?;
    Ok(EngineOut {
        m,
        omega,
        delta,
        delta3,
        u,
        v,
        occupations: ns,
        degenerate_n: None,
        unramified: uu,
        free: ff,
        restrictive: rr,
        formula,
    })
}

/// Irregular conductor with restrictive critical prime (delta_3(3) = 1):
/// the regular formulas at the effective counters u + n and v - n, with the
/// omega factor dropped.
fn degenerate_dispatch(
    p: u32,
    rho: u32,
    sigma: usize,
    spaces: &[RingSpace],
    hyperplane: &RingSpace,
    delta3: (usize, usize),
    kind: &ConductorSpaces,
) -> Result<EngineOut> {
    debug_assert_eq!(hyperplane.codim(), 1);
    let tau = spaces.len();
    let limit = meet_all(p, sigma, spaces)?.intersect(hyperplane)?;
    let delta = limit.codim();
    let u = spaces.iter().filter(|s| s.is_full()).count();
    let v = tau - u;
    let n = spaces.iter().filter(|s| *s == hyperplane).count();
    let (u_eff, v_eff) = (u + n, v - n);
    let slots = p as usize + 1;
    let formula = match delta {
        1 => {
            if u_eff != tau {
                return Err(Error::Invariant(format!(
                    "degenerate conductor with delta 1 must have u + n = tau, got {u_eff} vs {tau}"
                )));
            }
            FormulaKind::Degenerate1
        }
        2 => FormulaKind::Degenerate2,
        _ => {
            let out = general_sum_irregular(p, rho, sigma, kind)?;
            return Ok(EngineOut {
                m: out,
                omega: 1,
                delta,
                delta3: Some(delta3),
                u,
                v,
                occupations: Vec::new(),
                degenerate_n: Some(n),
                unramified: (p as u64).pow(rho),
                free: 1,
                restrictive: Ratio::one(),
                formula: FormulaKind::GeneralSum,
            });
        }
    };
    let mut ns = vec![0usize; slots];
    ns[0] = v_eff;
    let rr = restrictive_factor(p, v_eff, &ns)?;
    let uu = (p as u64).pow(rho);
    let ff = ((p - 1) as u64).pow(u_eff as u32);
    let m = assemble(uu, ff, &rr)?;
    Ok(EngineOut {
        m,
        omega: 1,
        delta,
        delta3: Some(delta3),
        u,
        v,
        occupations: ns,
        degenerate_n: Some(n),
        unramified: uu,
        free: ff,
        restrictive: rr,
        formula,
    })
}

fn assemble(uu: u64, ff: u64, rr: &Ratio<i128>) -> Result<u64> {
    let total = Ratio::from_integer((uu * ff) as i128) * rr;
    if !total.is_integer() || total.is_negative() {
        return Err(Error::Invariant(format!(
            "multiplicity U*F*R = {total} is not a nonnegative integer"
        )));
    }
    total
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Invariant("multiplicity overflow".into()))
}

/// The alternating divisor sum for a regular conductor: valid for any
/// defect, the independent oracle for every closed form.
fn general_sum(
    p: u32,
    rho: u32,
    sigma: usize,
    spaces: &[RingSpace],
    precomputed_limit: Option<&RingSpace>,
) -> Result<u64> {
    let tau = spaces.len();
    assert!(tau >= 1 && tau <= 20);
    let limit = match precomputed_limit {
        Some(l) => l.clone(),
        None => meet_all(p, sigma, spaces)?,
    };
    let dc = limit.codim() as u32;
    let pi = p as i128;
    // meets over all divisor subsets
    let mut deltas = vec![0u32; 1 << tau];
    let mut meets: Vec<RingSpace> = Vec::with_capacity(1 << tau);
    meets.push(RingSpace::full(p, sigma));
    for mask in 1usize..(1 << tau) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let meet = meets[rest].intersect(&spaces[low])?;
        deltas[mask] = meet.codim() as u32;
        meets.push(meet);
    }
    let mut bracket: i128 = (pi - 1).pow(tau as u32 - 1);
    for mask in 0usize..(1 << tau) {
        let s = mask.count_ones();
        let sign = if (tau as u32 - s) % 2 == 0 { 1 } else { -1 };
        let inner = (pi.pow(dc - deltas[mask]) - 1) / (pi - 1);
        bracket += sign * pi.pow(s) * inner;
    }
    let total = Ratio::new(pi.pow(rho) * bracket, pi.pow(dc));
    if !total.is_integer() || total.is_negative() {
        return Err(Error::Invariant(format!(
            "general sum produced {total}, not a nonnegative integer"
        )));
    }
    Ok(total.to_integer() as u64)
}

/// The alternating divisor sum for an irregular conductor, running over
/// divisors of the prime part and evaluating the defect at both 3 k and
/// 3^2 k.
fn general_sum_irregular(p: u32, rho: u32, sigma: usize, kind: &ConductorSpaces) -> Result<u64> {
    let (space3, space9, primes) = match kind {
        ConductorSpaces::Irregular {
            space3,
            space9,
            primes,
        } => (space3, space9, primes),
        _ => unreachable!(),
    };
    debug_assert_eq!(p, 3);
    let t = primes.len();
    assert!(t <= 20);
    let pi = p as i128;
    let mut meets: Vec<RingSpace> = Vec::with_capacity(1 << t);
    meets.push(RingSpace::full(p, sigma));
    for mask in 1usize..(1 << t) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        meets.push(meets[rest].intersect(&primes[low])?);
    }
    let mut acc: Ratio<i128> = Ratio::zero();
    for (mask, meet) in meets.iter().enumerate() {
        let s = mask.count_ones();
        let sign = if (t as u32 - s) % 2 == 0 { 1 } else { -1 };
        let d9 = meet.intersect(space9)?.codim() as i32;
        let d3 = meet.intersect(space3)?.codim() as i32;
        let term = (power_ratio(pi, 2 - d9) - power_ratio(pi, 1 - d3)) / Ratio::from_integer(2);
        acc += Ratio::from_integer(sign * pi.pow(s)) * term;
    }
    let total = Ratio::from_integer(pi.pow(rho)) * acc;
    if !total.is_integer() || total.is_negative() {
        return Err(Error::Invariant(format!(
            "irregular general sum produced {total}, not a nonnegative integer"
        )));
    }
    Ok(total.to_integer() as u64)
}

fn power_ratio(p: i128, e: i32) -> Ratio<i128> {
    if e >= 0 {
        Ratio::from_integer(p.pow(e as u32))
    } else {
        Ratio::new(1, p.pow((-e) as u32))
    }
}

/// The ring spaces of the formal divisors of an admissible conductor,
/// computed from a Selmer basis.
pub fn conductor_spaces(
    basis: &SelmerBasis,
    profile: &ConductorProfile,
) -> Result<ConductorSpaces> {
    let qs = formal_divisors(profile.c, profile.p);
    if profile.irregular {
        let space3 = basis.ring_space(3)?;
        let space9 = basis.ring_space(9)?;
        let mut primes = Vec::new();
        for &q in &qs {
            if q != 9 {
                primes.push(basis.ring_space(q)?);
            }
        }
        Ok(ConductorSpaces::Irregular {
            space3,
            space9,
            primes,
        })
    } else {
        let spaces = qs
            .iter()
            .map(|&q| basis.ring_space(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConductorSpaces::Regular { spaces })
    }
}

fn inadmissible_breakdown(
    profile: &ConductorProfile,
    rho: u32,
    sigma: usize,
) -> MultiplicityBreakdown {
    let (d_n, d_l) = dihedral_discriminant(profile.d, profile.p, profile.c);
    MultiplicityBreakdown {
        d: profile.d,
        p: profile.p,
        c: profile.c,
        admissible: false,
        irregular: false,
        rho,
        sigma,
        omega: 0,
        tau: profile.tau,
        delta: 0,
        delta3: None,
        u: 0,
        v: 0,
        occupations: Vec::new(),
        degenerate_n: None,
        unramified: 0,
        free: 0,
        restrictive: Ratio::zero(),
        formula: FormulaKind::Inadmissible,
        m: 0,
        d_n,
        d_l,
    }
}

/// Rank data of the base field, cheap enough to compute on demand.
fn field_ranks(d: i64, p: u32) -> Result<(u32, usize)> {
    if d > 0 {
        let h = realquad::real_class_number(d)?;
        if h % p as u64 == 0 {
            return Err(Error::UnsupportedField { d, p, rho: 1 });
        }
        Ok((0, 1))
    } else {
        let rho = quadforms::p_rank(d, p)?;
        let sigma = rho as usize + usize::from(d == -3 && p == 3);
        Ok((rho, sigma))
    }
}

/// Closed-form multiplicity m_p(d, c) with the full breakdown.
pub fn multiplicity(d: i64, p: u32, c: u64) -> Result<MultiplicityBreakdown> {
    let basis_slot;
    let profile = admissibility(d, p, c)?;
    let (rho, sigma) = field_ranks(d, p)?;
    if !profile.admissible {
        return Ok(inadmissible_breakdown(&profile, rho, sigma));
    }
    let basis = if sigma > 0 && c > 1 {
        basis_slot = selmer_basis(d, p)?;
        Some(&basis_slot)
    } else {
        None
    };
    multiplicity_with(&profile, rho, sigma, basis)
}

/// Same, reusing a prepared Selmer basis (for divisor sweeps over one field).
pub fn multiplicity_with(
    profile: &ConductorProfile,
    rho: u32,
    sigma: usize,
    basis: Option<&SelmerBasis>,
) -> Result<MultiplicityBreakdown> {
    let (d, p, c) = (profile.d, profile.p, profile.c);
    if !profile.admissible {
        return Ok(inadmissible_breakdown(profile, rho, sigma));
    }
    let (d_n, d_l) = dihedral_discriminant(d, p, c);
    if c == 1 {
        let pl = p as u64;
        let m = (pl.pow(rho) - 1) / (pl - 1);
        return Ok(MultiplicityBreakdown {
            d,
            p,
            c,
            admissible: true,
            irregular: false,
            rho,
            sigma,
            omega: 0,
            tau: 0,
            delta: 0,
            delta3: None,
            u: 0,
            v: 0,
            occupations: Vec::new(),
            degenerate_n: None,
            unramified: m,
            free: 1,
            restrictive: Ratio::one(),
            formula: FormulaKind::Unramified,
            m,
            d_n,
            d_l,
        });
    }
    let out = if sigma == 0 {
        // every admissible conductor is free; no residue machinery needed
        let omega = u8::from(profile.irregular);
        let uu = (p as u64).pow(rho);
        let ff = (p as u64).pow(omega as u32) * ((p - 1) as u64).pow(profile.tau as u32);
        let rr = Ratio::new(1, (p - 1) as i128);
        let m = assemble(uu, ff, &rr)?;
        EngineOut {
            m,
            omega,
            delta: 0,
            delta3: profile.irregular.then_some((0, 0)),
            u: profile.tau,
            v: 0,
            occupations: vec![0; p as usize + 1],
            degenerate_n: None,
            unramified: uu,
            free: ff,
            restrictive: rr,
            formula: FormulaKind::Free,
        }
    } else {
        let basis = basis
            .ok_or_else(|| Error::Invariant("a Selmer basis is required for sigma > 0".into()))?;
        let spaces = conductor_spaces(basis, profile)?;
        // cross-check the lattice morphism: the meet of the divisor spaces
        // must equal the directly computed space modulo c
        let direct = basis.ring_space(c)?;
        let meet = meet_all(p, sigma, &spaces.divisor_spaces())?;
        if direct != meet {
            return Err(Error::Invariant(format!(
                "V_p({c}) differs from the meet of its divisor spaces over d = {d}"
            )));
        }
        closed_multiplicity(rho, &spaces)?
    };
    Ok(MultiplicityBreakdown {
        d,
        p,
        c,
        admissible: true,
        irregular: profile.irregular,
        rho,
        sigma,
        omega: out.omega,
        tau: profile.tau,
        delta: out.delta,
        delta3: out.delta3,
        u: out.u,
        v: out.v,
        occupations: out.occupations,
        degenerate_n: out.degenerate_n,
        unramified: out.unramified,
        free: out.free,
        restrictive: out.restrictive,
        formula: out.formula,
        m: out.m,
        d_n,
        d_l,
    })
}

/// The full alternating divisor sum, Eq-style, as an independent oracle for
/// the closed forms. Returns plain m.
pub fn general_multiplicity(d: i64, p: u32, c: u64) -> Result<u64> {
    let profile = admissibility(d, p, c)?;
    let (rho, sigma) = field_ranks(d, p)?;
    if !profile.admissible {
        return Ok(0);
    }
    if c == 1 {
        let pl = p as u64;
        return Ok((pl.pow(rho) - 1) / (pl - 1));
    }
    if sigma == 0 {
        // all divisor spaces full: the sum telescopes to the free formula,
        // evaluated directly on zero-dimensional spaces
        let spaces = vec![RingSpace::full(p, 0); profile.tau];
        if profile.irregular {
            let kind = ConductorSpaces::Irregular {
                space3: RingSpace::full(p, 0),
                space9: RingSpace::full(p, 0),
                primes: vec![RingSpace::full(p, 0); profile.t],
            };
            return general_sum_irregular(p, rho, 0, &kind);
        }
        return general_sum(p, rho, 0, &spaces, None);
    }
    let basis = selmer_basis(d, p)?;
    general_multiplicity_with(&profile, rho, sigma, &basis)
}

pub fn general_multiplicity_with(
    profile: &ConductorProfile,
    rho: u32,
    sigma: usize,
    basis: &SelmerBasis,
) -> Result<u64> {
    if !profile.admissible {
        return Ok(0);
    }
    if profile.c == 1 {
        let pl = profile.p as u64;
        return Ok((pl.pow(rho) - 1) / (pl - 1));
    }
    let spaces = conductor_spaces(basis, profile)?;
    match &spaces {
        ConductorSpaces::Regular { spaces } => general_sum(profile.p, rho, sigma, spaces, None),
        ConductorSpaces::Irregular { .. } => general_sum_irregular(profile.p, rho, sigma, &spaces),
    }
}

/// Oracle over synthetic configurations: closed form vs general sum on the
/// same abstract spaces (no field data involved).
pub fn closed_vs_general_on(rho: u32, kind: &ConductorSpaces) -> Result<(u64, u64)> {
    let closed = closed_multiplicity(rho, kind)?;
    let general = match kind {
        ConductorSpaces::Regular { spaces } => {
            general_sum(kind.p(), rho, kind.sigma(), spaces, None)?
        }
        ConductorSpaces::Irregular { .. } => {
            general_sum_irregular(kind.p(), rho, kind.sigma(), kind)?
        }
    };
    Ok((closed.m, general))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_golden() {
        // every prime is 3-admissible over d = -3
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
            assert!(admissibility(-3, 3, q).unwrap().admissible, "q = {q}");
        }
        // over d = 5, p = 5: admissible primes are 5 and q = 1 mod 10
        for q in [2u64, 3, 7, 13, 19, 29] {
            assert!(!admissibility(5, 5, q).unwrap().admissible, "q = {q}");
        }
        for q in [5u64, 11, 31, 41, 61, 71] {
            assert!(admissibility(5, 5, q).unwrap().admissible, "q = {q}");
        }
        let p18 = admissibility(-291, 3, 18).unwrap();
        assert!(p18.admissible && p18.irregular);
        // squares of non-critical primes are out
        assert!(!admissibility(-3, 3, 4).unwrap().admissible);
        // e = 2 requires d = -3 mod 9 when 3 | d
        assert!(!admissibility(-771, 3, 9).unwrap().admissible);
        assert!(admissibility(-687, 3, 9).unwrap().admissible);
    }

    #[test]
    fn restrictive_factor_table() {
        // all 18 tabulated values of the codimension-2 factor for p = 3
        let table: &[(usize, [usize; 4], i128, i128)] = &[
            (0, [0, 0, 0, 0], 1, 2),
            (1, [1, 0, 0, 0], 0, 1),
            (2, [1, 1, 0, 0], 0, 1),
            (2, [2, 0, 0, 0], 1, 1),
            (3, [1, 1, 1, 0], 1, 1),
            (3, [2, 1, 0, 0], 0, 1),
            (3, [3, 0, 0, 0], 1, 1),
            (4, [1, 1, 1, 1], 0, 1),
            (4, [2, 1, 1, 0], 1, 1),
            (4, [2, 2, 0, 0], 2, 1),
            (4, [3, 1, 0, 0], 0, 1),
            (4, [4, 0, 0, 0], 3, 1),
            (5, [2, 1, 1, 1], 2, 1),
            (5, [2, 2, 1, 0], 1, 1),
            (5, [3, 1, 1, 0], 3, 1),
            (5, [3, 2, 0, 0], 2, 1),
            (5, [4, 1, 0, 0], 0, 1),
            (5, [5, 0, 0, 0], 5, 1),
        ];
        for &(v, ns, num, den) in table {
            let r = restrictive_factor(3, v, &ns).unwrap();
            assert_eq!(r, Ratio::new(num, den), "v={v} ns={ns:?}");
        }
    }

    #[test]
    fn multiplicity_golden_small() {
        assert_eq!(multiplicity(-3299, 3, 1).unwrap().m, 4);
        assert_eq!(multiplicity(-47, 5, 1).unwrap().m, 1);
        assert_eq!(multiplicity(-3, 3, 2310).unwrap().m, 5);
        assert_eq!(multiplicity(-291, 3, 18).unwrap().m, 6);
        assert_eq!(multiplicity(-307, 3, 2).unwrap().m, 3);
    }

    #[test]
    fn multiplicity_degenerate_cases() {
        let b = multiplicity(-1371, 3, 18).unwrap();
        assert_eq!(b.m, 6);
        assert_eq!(b.formula, FormulaKind::Degenerate1);
        assert_eq!(b.degenerate_n, Some(2));
        assert_eq!(b.u, 0);
        let b = multiplicity(-3, 3, 9).unwrap();
        assert_eq!(b.m, 1);
    }

    #[test]
    fn multiplicity_codim2() {
        let b = multiplicity(-4027, 3, 90).unwrap();
        assert_eq!(b.m, 9);
        assert_eq!(b.delta, 2);
        assert_eq!(b.occupations, vec![1, 1, 1, 0]);
        let b = multiplicity(-4027, 3, 990).unwrap();
        assert_eq!(b.m, 9);
        assert_eq!(b.occupations, vec![2, 1, 1, 0]);
        assert_eq!(b.d_l, BigInt::from(-3_946_862_700i64));
    }

    #[test]
    fn general_matches_closed_on_divisors_of_990() {
        let basis = selmer_basis(-4027, 3).unwrap();
        for c in [
            1u64, 2, 5, 9, 11, 10, 18, 22, 45, 55, 90, 99, 110, 198, 495, 990,
        ] {
            let profile = admissibility(-4027, 3, c).unwrap();
            let closed = multiplicity_with(&profile, 2, 2, Some(&basis)).unwrap().m;
            let general = general_multiplicity_with(&profile, 2, 2, &basis).unwrap();
            assert_eq!(closed, general, "c = {c}");
        }
    }

    #[test]
    fn irregular_survey_values() {
        assert_eq!(multiplicity(-687, 3, 9).unwrap().m, 0);
        assert_eq!(multiplicity(-8751, 3, 9).unwrap().m, 0);
        assert_eq!(multiplicity(-42591, 3, 9).unwrap().m, 9);
        assert_eq!(multiplicity(24, 3, 9).unwrap().m, 1);
        assert_eq!(multiplicity(69, 3, 9).unwrap().m, 0);
        assert_eq!(multiplicity(717, 3, 9).unwrap().m, 3);
    }

    #[test]
    fn inadmissible_is_structured_zero() {
        let b = multiplicity(-4027, 3, 7).unwrap();
        assert!(!b.admissible);
        assert_eq!(b.m, 0);
        assert_eq!(general_multiplicity(-4027, 3, 7).unwrap(), 0);
    }

    #[test]
    fn dihedral_discriminants() {
        let (_, d_l) = dihedral_discriminant(-307, 3, 2);
        assert_eq!(d_l, BigInt::from(-1228));
        let (d_n, d_l) = dihedral_discriminant(-4027, 3, 990);
        assert_eq!(d_l, BigInt::from(-3_946_862_700i64));
        assert_eq!(
            d_n,
            BigInt::from(990u64).pow(4) * BigInt::from(-4027).pow(3)
        );
        let (_, d_l) = dihedral_discriminant(5, 5, 211);
        assert_eq!(d_l, BigInt::from(222_605u64).pow(2));
    }

    #[test]
    fn binomial_identity_underlying_proofs() {
        // sum_s (-1)^(tau-s) p^s C(N, s) = (-1)^(tau-N) (p-1)^N for N <= tau
        for p in [3i128, 5, 7] {
            for tau in 0..=12u32 {
                for n in 0..=tau {
                    let mut lhs = 0i128;
                    for s in 0..=n {
                        let sign = if (tau - s) % 2 == 0 { 1 } else { -1 };
                        lhs += sign * p.pow(s) * binom(n as i128, s as i128);
                    }
                    let sign = if (tau - n) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(lhs, sign * (p - 1).pow(n));
                }
            }
        }
    }

    fn binom(n: i128, k: i128) -> i128 {
        if k < 0 || k > n {
            return 0;
        }
        let mut acc = 1i128;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }
}
