//! The F_p vector space V_p of nontrivial generators of principal p-th
//! ideal powers, the lattice morphism c -> V_p(c), p-defects, hyperplane
//! bundles, and occupation numbers.
//!
//! Subspaces are kept in reduced row echelon form, so equality of ring
//! spaces is syntactic and the hyperplane occupation counts are exact
//! identity tests.

use crate::arith::{self, kronecker};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::quadforms::{
    self, order_p_forms, represent_prime, selmer_generator, FieldRecord, Form, QuadInt,
};
use crate::realquad;
use crate::residues::{reduced_quotient, ReducedQuotient};
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

/// A subspace of F_p^n in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingSpace {
    pub p: u32,
    pub ambient: usize,
    rows: Vec<Vec<u32>>,
}

impl fmt::Display for RingSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == self.ambient {
            return write!(f, "V");
        }
        if self.dim() == 0 {
            return write!(f, "0");
        }
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        write!(f, "<{}>", rows.join(","))
    }
}

fn rref(p: u32, ambient: usize, mut rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let mut pivot_col = 0;
    let mut rank = 0;
    while pivot_col < ambient && rank < rows.len() {
        if let Some(r) = (rank..rows.len()).find(|&r| rows[r][pivot_col] != 0) {
            rows.swap(rank, r);
            let inv = mod_inv(rows[rank][pivot_col], p);
            for x in rows[rank].iter_mut() {
                *x = (*x * inv) % p;
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[pivot_col] != 0 {
                    let f = row[pivot_col];
                    for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                        *x = (*x + (p - f % p) * pv) % p;
                    }
                }
            }
            rank += 1;
        }
        pivot_col += 1;
    }
    rows.truncate(rank);
    rows.retain(|r| r.iter().any(|&x| x != 0));
    rows.sort();
    rows.reverse(); // descending pivot order = ascending pivot columns
    rows
}

fn mod_inv(a: u32, p: u32) -> u32 {
    arith::pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

impl RingSpace {
    pub fn full(p: u32, ambient: usize) -> RingSpace {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![0u32; ambient];
                r[i] = 1;
                r
            })
            .collect();
        RingSpace { p, ambient, rows }
    }

    pub fn zero(p: u32, ambient: usize) -> RingSpace {
        RingSpace {
            p,
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn from_spanning(p: u32, ambient: usize, rows: Vec<Vec<u32>>) -> RingSpace {
        RingSpace {
            p,
            ambient,
            rows: rref(p, ambient, rows),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Kernel of the linear map F_p^n -> F_p^m given by images of the
    /// standard basis vectors (one image per row of `images`).
    pub fn kernel_of(p: u32, images: &[Vec<u32>]) -> RingSpace {
        let n = images.len();
        let m = images.first().map_or(0, |r| r.len());
        if m == 0 {
            return RingSpace::full(p, n);
        }
        // row-reduce the n x m matrix, tracking the transformation on F_p^n
        let mut mat: Vec<(Vec<u32>, Vec<u32>)> = images
            .iter()
            .enumerate()
            .map(|(i, img)| {
                let mut tag = vec![0u32; n];
                tag[i] = 1;
                (img.clone(), tag)
            })
            .collect();
        let mut rank = 0;
        for col in 0..m {
            if rank == n {
                break;
            }
            if let Some(r) = (rank..n).find(|&r| mat[r].0[col] != 0) {
                mat.swap(rank, r);
                let inv = mod_inv(mat[rank].0[col], p);
                for x in mat[rank].0.iter_mut() {
                    *x = (*x * inv) % p;
                }
                for x in mat[rank].1.iter_mut() {
                    *x = (*x * inv) % p;
                }
                let (prow, ptag) = (mat[rank].0.clone(), mat[rank].1.clone());
                for (r, (row, tag)) in mat.iter_mut().enumerate() {
                    if r != rank && row[col] != 0 {
                        let f = row[col];
                        for (x, &pv) in row.iter_mut().zip(&prow) {
                            *x = (*x + (p - f) * pv) % p;
                        }
                        for (x, &pv) in tag.iter_mut().zip(&ptag) {
                            *x = (*x + (p - f) * pv) % p;
                        }
                    }
                }
                rank += 1;
            }
        }
        let rows: Vec<Vec<u32>> = mat[rank..].iter().map(|(_, tag)| tag.clone()).collect();
        RingSpace::from_spanning(p, n, rows)
    }

    /// Orthogonal complement under the standard bilinear form.
    fn complement(&self) -> RingSpace {
        if self.rows.is_empty() {
            return RingSpace::full(self.p, self.ambient);
        }
        // kernel of x -> (row_i . x): transpose to images of basis vectors
        let images: Vec<Vec<u32>> = (0..self.ambient)
            .map(|j| self.rows.iter().map(|r| r[j]).collect())
            .collect();
        RingSpace::kernel_of(self.p, &images)
    }

    pub fn intersect(&self, other: &RingSpace) -> Result<RingSpace> {
        self.check_compatible(other)?;
        let a = self.complement();
        let b = other.complement();
        let mut rows = a.rows;
        rows.extend(b.rows);
        Ok(RingSpace::from_spanning(self.p, self.ambient, rows).complement())
    }

    pub fn contains(&self, other: &RingSpace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.intersect(other)? == *other)
    }

    fn check_compatible(&self, other: &RingSpace) -> Result<()> {
        if self.p != other.p || self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "({}, F_{}) vs ({}, F_{})",
                self.ambient, self.p, other.ambient, other.p
            )));
        }
        Ok(())
    }

    /// The p + 1 hyperplanes containing a subspace of codimension 2,
    /// in lexicographic order of their echelon bases.
    pub fn hyperplanes_over(&self) -> Result<Vec<RingSpace>> {
        if self.codim() != 2 {
            return Err(Error::WrongCodimension {
                expected: 2,
                got: self.codim(),
            });
        }
        let p = self.p;
        // complete the basis with two independent vectors
        let mut span = self.rows.clone();
        let mut extra: Vec<Vec<u32>> = Vec::new();
        for i in 0..self.ambient {
            if extra.len() == 2 {
                break;
            }
            let mut e = vec![0u32; self.ambient];
            e[i] = 1;
            let mut trial = span.clone();
            trial.push(e.clone());
            if rref(p, self.ambient, trial.clone()).len() > span.len() {
                span = trial;
                extra.push(e);
            }
        }
        debug_assert_eq!(extra.len(), 2);
        let mut out = Vec::with_capacity(p as usize + 1);
        // lines of the quotient plane: (1 : j) for j in 0..p, then (0 : 1)
        for j in 0..=p {
            let (ca, cb) = if j < p { (1, j) } else { (0, 1) };
            let v: Vec<u32> = extra[0]
                .iter()
                .zip(&extra[1])
                .map(|(&x, &y)| (ca * x + cb * y) % p)
                .collect();
            let mut rows = self.rows.clone();
            rows.push(v);
            out.push(RingSpace::from_spanning(p, self.ambient, rows));
        }
        out.sort();
        Ok(out)
    }
}

/// One generator of V_p.
#[derive(Debug, Clone)]
pub enum Generator {
    /// Class part: alpha with alpha O = a^p, derived from an order-p form.
    ClassPart { form: Form, r: u64, alpha: QuadInt },
    /// Fundamental unit of a real field.
    Unit(QuadInt),
    /// Primitive cube root of unity (d = -3, p = 3).
    RootOfUnity(QuadInt),
}

impl Generator {
    pub fn quadint(&self) -> &QuadInt {
        match self {
            Generator::ClassPart { alpha, .. } => alpha,
            Generator::Unit(q) | Generator::RootOfUnity(q) => q,
        }
    }

    fn norm_prime(&self) -> Option<u64> {
        match self {
            Generator::ClassPart { r, .. } => Some(*r),
            _ => None,
        }
    }
}

/// Basis of V_p = C_p x U/U^p for one quadratic field, with enough spare
/// structure to re-derive class generators coprime to any conductor.
pub struct SelmerBasis {
    pub d: i64,
    pub p: u32,
    pub rho: u32,
    pub sigma: usize,
    pub generators: Vec<Generator>,
    /// For sigma = 2 with class rank 2: the products a1 a2 and a1 a2^2
    /// labelling the two mixed hyperplane directions.
    pub derived: Vec<QuadInt>,
    /// Replacement class generators drawn when a stored one shares a prime
    /// with the conductor under test, keyed by generator index.
    alternates: Mutex<HashMap<usize, Vec<(u64, QuadInt)>>>,
    quotients: Mutex<HashMap<u64, std::sync::Arc<ReducedQuotient>>>,
}

impl fmt::Debug for SelmerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelmerBasis")
            .field("d", &self.d)
            .field("p", &self.p)
            .field("rho", &self.rho)
            .field("sigma", &self.sigma)
            .finish()
    }
}

pub const REPRESENT_BOUND: usize = 64;

/// Construct the sigma_p generators of V_p for the field of discriminant d.
///
/// Supported: complex fields with any class rank, the cyclotomic field
/// d = -3, and real fields with rho_p = 0. Real fields with positive
/// p-class rank are rejected.
pub fn selmer_basis(d: i64, p: u32) -> Result<SelmerBasis> {
    selmer_basis_inner(d, p, None)
}

/// Same, but reusing stored generator witnesses from the cache when present
/// and writing freshly derived ones back.
pub fn selmer_basis_cached(d: i64, p: u32, cache: &Cache) -> Result<SelmerBasis> {
    let basis = selmer_basis_inner(d, p, cache.get(d).as_ref())?;
    cache.put(basis.to_record())?;
    Ok(basis)
}

fn selmer_basis_inner(d: i64, p: u32, stored: Option<&FieldRecord>) -> Result<SelmerBasis> {
    arith::validate_odd_prime(p)?;
    if !arith::is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let mut generators = Vec::new();
    let rho;
    if d > 0 {
        let h = realquad::real_class_number(d)?;
        if h % p as u64 == 0 {
            return Err(Error::UnsupportedField { d, p, rho: 1 });
        }
        rho = 0;
        generators.push(Generator::Unit(realquad::fundamental_unit(d)?.eta));
    } else {
        rho = quadforms::p_rank(d, p)?;
        match stored.and_then(|rec| restore_generators(d, p, rho, rec)) {
            Some(gens) => generators = gens,
            None => {
                let forms = independent_order_p_forms(d, p, rho as usize)?;
                for f in forms {
                    let rep = represent_prime(&f, p, &[], REPRESENT_BOUND)?;
                    let alpha = selmer_generator(d, &f, rep.r, p)?;
                    generators.push(Generator::ClassPart {
                        form: f,
                        r: rep.r,
                        alpha,
                    });
                }
            }
        }
        if d == -3 && p == 3 {
            generators.push(Generator::RootOfUnity(QuadInt::zeta()));
        }
    }
    let derived = if generators.len() == 2 {
        let a1 = generators[0].quadint();
        let a2 = generators[1].quadint();
        vec![a1.mul(a2), a1.mul(a2).mul(a2)]
    } else {
        Vec::new()
    };
    Ok(SelmerBasis {
        d,
        p,
        rho,
        sigma: generators.len(),
        generators,
        derived,
        alternates: Mutex::new(HashMap::new()),
        quotients: Mutex::new(HashMap::new()),
    })
}

/// Rebuild class-part generators from stored (x, y, r) witnesses, verifying
/// each norm; any inconsistency falls back to a fresh derivation.
fn restore_generators(d: i64, p: u32, rho: u32, rec: &FieldRecord) -> Option<Vec<Generator>> {
    let witnesses = rec.selmer.get(&p)?;
    if witnesses.len() != rho as usize || rec.generator_forms.len() < rho as usize {
        return None;
    }
    let mut out = Vec::new();
    for ((xs, ys, r), form) in witnesses.iter().zip(&rec.generator_forms) {
        let x: num::bigint::BigInt = xs.parse().ok()?;
        let y: num::bigint::BigInt = ys.parse().ok()?;
        if form.discriminant() != d {
            return None;
        }
        let alpha = QuadInt { x, y, d };
        if alpha.norm() != num::bigint::BigInt::from(*r).pow(p) || !alpha.is_integral() {
            return None;
        }
        out.push(Generator::ClassPart {
            form: *form,
            r: *r,
            alpha,
        });
    }
    Some(out)
}

/// Greedily pick `count` independent order-p forms in selection order.
fn independent_order_p_forms(d: i64, p: u32, count: usize) -> Result<Vec<Form>> {
    let candidates = order_p_forms(d, p)?;
    let mut picked: Vec<Form> = Vec::new();
    let mut span: Vec<Form> = vec![Form::principal(d)];
    for f in candidates {
        if picked.len() == count {
            break;
        }
        if span.contains(&f) {
            continue;
        }
        let mut ext = Vec::new();
        let mut pw = Form::principal(d);
        for _ in 0..p {
            for s in &span {
                ext.push(s.compose(&pw)?);
            }
            pw = pw.compose(&f)?;
        }
        span = ext;
        picked.push(f);
    }
    if picked.len() != count {
        return Err(Error::Invariant(format!(
            "found {} independent order-{p} forms for d = {d}, expected {count}",
            picked.len()
        )));
    }
    Ok(picked)
}

impl SelmerBasis {
    /// Cache record carrying the class-part witnesses (x, y, r) and forms.
    pub fn to_record(&self) -> FieldRecord {
        let mut rec = FieldRecord {
            d: self.d,
            h: 0,
            elementary_divisors: Vec::new(),
            generator_forms: Vec::new(),
            ranks: Default::default(),
            selmer: Default::default(),
        };
        rec.ranks.insert(self.p, self.rho);
        let mut witnesses = Vec::new();
        for g in &self.generators {
            if let Generator::ClassPart { form, r, alpha } = g {
                rec.generator_forms.push(*form);
                witnesses.push((alpha.x.to_string(), alpha.y.to_string(), *r));
            }
        }
        if !witnesses.is_empty() {
            rec.selmer.insert(self.p, witnesses);
        }
        rec
    }

    fn quotient(&self, c: u64) -> Result<std::sync::Arc<ReducedQuotient>> {
        let mut cache = self.quotients.lock().unwrap();
        if let Some(rq) = cache.get(&c) {
            return Ok(rq.clone());
        }
        let rq = std::sync::Arc::new(reduced_quotient(self.d, c, self.p)?);
        cache.insert(c, rq.clone());
        Ok(rq)
    }

    /// Generator images suitable for the modulus c: class generators whose
    /// represented prime divides c are replaced by freshly drawn ones.
    fn generator_for(&self, idx: usize, c: u64) -> Result<QuadInt> {
        let g = &self.generators[idx];
        match g.norm_prime() {
            Some(r) if c % r == 0 => {
                let mut alts = self.alternates.lock().unwrap();
                let list = alts.entry(idx).or_default();
                if let Some((_, alpha)) = list.iter().find(|(r2, _)| c % r2 != 0) {
                    return Ok(alpha.clone());
                }
                let form = match g {
                    Generator::ClassPart { form, .. } => *form,
                    _ => unreachable!(),
                };
                let mut exclude: Vec<u64> = vec![c];
                exclude.extend(list.iter().map(|(r2, _)| *r2));
                exclude.push(r);
                let rep = represent_prime(&form, self.p, &exclude, REPRESENT_BOUND)?;
                let alpha = selmer_generator(self.d, &form, rep.r, self.p)?;
                list.push((rep.r, alpha.clone()));
                Ok(alpha)
            }
            _ => Ok(g.quadint().clone()),
        }
    }

    /// The p-ring space V_p(c): kernel of the projection of the generators
    /// into the reduced quotient modulo c.
    pub fn ring_space(&self, c: u64) -> Result<RingSpace> {
        if c == 1 || self.sigma == 0 {
            return Ok(RingSpace::full(self.p, self.sigma));
        }
        let rq = self.quotient(c)?;
        let mut images = Vec::with_capacity(self.sigma);
        for idx in 0..self.sigma {
            let alpha = self.generator_for(idx, c)?;
            images.push(rq.project(&alpha)?);
        }
        Ok(RingSpace::kernel_of(self.p, &images))
    }

    /// p-defect: codimension of V_p(c) in V_p.
    pub fn defect(&self, c: u64) -> Result<usize> {
        Ok(self.ring_space(c)?.codim())
    }

    /// The formal prime divisors q_1 .. q_tau of an admissible conductor:
    /// the primes q != p, ascending, then p^e when e >= 1.
    pub fn formal_divisors(&self, c: u64) -> Vec<u64> {
        formal_divisors(c, self.p)
    }

    /// Number of length-s divisors of c whose ring space equals t.
    pub fn occupation(&self, c: u64, s: usize, t: &RingSpace) -> Result<usize> {
        let qs = self.formal_divisors(c);
        let spaces: Vec<RingSpace> = qs
            .iter()
            .map(|&q| self.ring_space(q))
            .collect::<Result<_>>()?;
        occupation_of_spaces(self.p, self.sigma, &spaces, s, t)
    }
}

/// Formal prime divisor list of a nearly squarefree conductor: primes
/// q != p ascending, then the full p-part p^e as one entry.
pub fn formal_divisors(c: u64, p: u32) -> Vec<u64> {
    let mut out = Vec::new();
    let mut ppart = 1u64;
    for (q, e) in arith::factorize(c) {
        if q == p as u64 {
            ppart = q.pow(e);
        } else {
            out.push(q);
        }
    }
    if ppart > 1 {
        out.push(ppart);
    }
    out
}

/// Occupation count over an explicit list of per-divisor ring spaces.
pub fn occupation_of_spaces(
    p: u32,
    sigma: usize,
    spaces: &[RingSpace],
    s: usize,
    t: &RingSpace,
) -> Result<usize> {
    let tau = spaces.len();
    if s > tau {
        return Ok(0);
    }
    let mut count = 0;
    for mask in 0u32..(1 << tau) {
        if mask.count_ones() as usize != s {
            continue;
        }
        let mut meet = RingSpace::full(p, sigma);
        for (k, space) in spaces.iter().enumerate() {
            if mask & (1 << k) != 0 {
                meet = meet.intersect(space)?;
            }
        }
        if meet == *t {
            count += 1;
        }
    }
    Ok(count)
}

/// True iff q (a prime, or p^e) is part of some p-admissible conductor
/// over d, per the congruence and exponent constraints.
pub fn divisor_is_admissible(d: i64, q: u64, p: u32) -> bool {
    let pl = p as u64;
    if q == pl || q == pl * pl {
        let e = if q == pl { 1 } else { 2 };
        let p_div_d = d.rem_euclid(pl as i64) == 0;
        let d_mod9 = d.rem_euclid(9);
        return match (p_div_d, e) {
            (false, 2) => true,
            (true, 1) => true,
            (true, 2) => p == 3 && d_mod9 == 6,
            _ => false,
        };
    }
    if !arith::is_prime(q) {
        return false;
    }
    let sym = kronecker(d, q);
    sym != 0 && (q % pl) as i64 == (sym as i64).rem_euclid(pl as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    #[test]
    fn rref_canonical() {
        // 2*(1,2) = (2,1) over F_3: same line, same echelon basis
        let a = RingSpace::from_spanning(3, 2, vec![vec![1, 2]]);
        let b = RingSpace::from_spanning(3, 2, vec![vec![2, 1]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 1);
        let c = RingSpace::from_spanning(3, 2, vec![vec![1, 1], vec![1, 2]]);
        assert_eq!(c, RingSpace::full(3, 2));
        let l = RingSpace::from_spanning(3, 2, vec![vec![2, 2]]);
        assert_eq!(l.basis(), &[vec![1, 1]]);
    }

    #[test]
    fn intersect_and_contains() {
        let p = 3;
        let v = RingSpace::full(p, 2);
        assert_eq!(v.intersect(&v).unwrap(), v);
        let h1 = RingSpace::from_spanning(p, 2, vec![vec![1, 0]]);
        let h2 = RingSpace::from_spanning(p, 2, vec![vec![0, 1]]);
        assert_eq!(h1.intersect(&h2).unwrap(), RingSpace::zero(p, 2));
        assert!(v.contains(&h1).unwrap());
        assert!(!h1.contains(&h2).unwrap());
        assert!(h1.contains(&RingSpace::zero(p, 2)).unwrap());
    }

    #[test]
    fn hyperplane_bundles() {
        let z = RingSpace::zero(3, 2);
        let hs = z.hyperplanes_over().unwrap();
        assert_eq!(hs.len(), 4);
        for h in &hs {
            assert_eq!(h.dim(), 1);
            assert!(h.contains(&z).unwrap());
        }
        let z5 = RingSpace::zero(5, 2);
        assert_eq!(z5.hyperplanes_over().unwrap().len(), 6);
        // codim 2 inside ambient 3
        let t = RingSpace::from_spanning(3, 3, vec![vec![1, 1, 1]]);
        let hs = t.hyperplanes_over().unwrap();
        assert_eq!(hs.len(), 4);
        assert!(hs.iter().all(|h| h.dim() == 2 && h.contains(&t).unwrap()));
        let uniq: std::collections::HashSet<_> = hs.iter().cloned().collect();
        assert_eq!(uniq.len(), 4);
    }

    #[test]
    fn basis_golden() {
        let b = selmer_basis(-3, 3).unwrap();
        assert_eq!((b.sigma, b.rho), (1, 0));
        assert!(matches!(b.generators[0], Generator::RootOfUnity(_)));

        let b = selmer_basis(-307, 3).unwrap();
        assert_eq!((b.sigma, b.rho), (1, 1));
        match &b.generators[0] {
            Generator::ClassPart { form, r, alpha } => {
                assert_eq!(*form, Form::new(7, 1, 11));
                assert_eq!(*r, 7);
                assert_eq!(alpha.x.to_i64(), Some(12));
                assert_eq!(alpha.y.to_i64(), Some(2));
            }
            _ => panic!("expected class generator"),
        }

        let b = selmer_basis(5, 5).unwrap();
        assert_eq!((b.sigma, b.rho), (1, 0));
        assert!(matches!(b.generators[0], Generator::Unit(_)));

        let b = selmer_basis(-4027, 3).unwrap();
        assert_eq!((b.sigma, b.rho), (2, 2));
        assert_eq!(b.derived.len(), 2);
    }

    #[test]
    fn ring_space_golden() {
        let b = selmer_basis(-3, 3).unwrap();
        assert!(b.ring_space(1).unwrap().is_full());
        assert_eq!(b.defect(3).unwrap(), 1);
        assert_eq!(b.defect(17).unwrap(), 0);
        assert_eq!(b.defect(19).unwrap(), 0);
        assert_eq!(b.defect(5).unwrap(), 1);
    }

    #[test]
    fn defect_golden() {
        let b = selmer_basis(-4027, 3).unwrap();
        assert_eq!(b.defect(90).unwrap(), 2);
        let b = selmer_basis(-687, 3).unwrap();
        assert_eq!(b.defect(9).unwrap(), 1);
        assert_eq!(b.defect(3).unwrap(), 0);
        let b = selmer_basis(-8751, 3).unwrap();
        assert_eq!(b.defect(9).unwrap(), 2);
        assert_eq!(b.defect(3).unwrap(), 1);
    }

    #[test]
    fn coprime_intersection_law() {
        let b = selmer_basis(-4027, 3).unwrap();
        let v90 = b.ring_space(90).unwrap();
        let meet = b
            .ring_space(2)
            .unwrap()
            .intersect(&b.ring_space(9).unwrap())
            .unwrap()
            .intersect(&b.ring_space(5).unwrap())
            .unwrap();
        assert_eq!(v90, meet);
    }

    #[test]
    fn figure_labels_over_4027() {
        let b = selmer_basis(-4027, 3).unwrap();
        let v2 = b.ring_space(2).unwrap();
        let v5 = b.ring_space(5).unwrap();
        let v9 = b.ring_space(9).unwrap();
        let v11 = b.ring_space(11).unwrap();
        assert_eq!(v9, v11);
        assert_eq!(v2.dim(), 1);
        assert_eq!(v5.dim(), 1);
        assert_eq!(v9.dim(), 1);
        // three distinct occupied lines out of the four over the limit space
        let occupied: std::collections::HashSet<_> =
            [v2.clone(), v5.clone(), v9.clone()].into_iter().collect();
        assert_eq!(occupied.len(), 3);
        let hs = RingSpace::zero(3, 2).hyperplanes_over().unwrap();
        assert!(occupied.iter().all(|h| hs.contains(h)));
    }

    #[test]
    fn occupation_golden() {
        let b = selmer_basis(-4027, 3).unwrap();
        let z = RingSpace::zero(3, 2);
        let hs = z.hyperplanes_over().unwrap();
        let mut n1: Vec<usize> = hs
            .iter()
            .map(|h| b.occupation(990, 1, h).unwrap())
            .collect();
        n1.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(n1, vec![2, 1, 1, 0]);
        // n_0(V_p) = 1
        let v = RingSpace::full(3, 2);
        assert_eq!(b.occupation(990, 0, &v).unwrap(), 1);
        // u = n_1(V) = 0 over 990
        assert_eq!(b.occupation(990, 1, &v).unwrap(), 0);
    }

    #[test]
    fn generator_regeneration_on_shared_prime() {
        // conductor sharing the represented prime: fresh alpha must be drawn
        let b = selmer_basis(-307, 3).unwrap();
        let r = match &b.generators[0] {
            Generator::ClassPart { r, .. } => *r,
            _ => unreachable!(),
        };
        assert_eq!(r, 7);
        // 7 = 1 mod 3 and (d/7) = +1 so 7 is admissible over -307
        let space = b.ring_space(7).unwrap();
        assert!(space.dim() <= 1);
        // projection of the regenerated generator must be well-defined:
        // recompute and compare against a fresh basis for determinism
        let space2 = b.ring_space(7).unwrap();
        assert_eq!(space, space2);
    }

    #[test]
    fn inadmissible_primes_full_space() {
        let b = selmer_basis(-307, 3).unwrap();
        for q in [5u64, 11, 17, 23, 29] {
            if !divisor_is_admissible(-307, q, 3) {
                assert_eq!(b.defect(q).unwrap(), 0, "q = {q}");
            }
        }
    }

    /// Independence of the basis generators, and nontriviality of each
    /// generator modulo K^p, verified by stacking projections at a set of
    /// probe moduli: no nontrivial exponent combination may die everywhere.
    #[test]
    fn generators_independent_at_probes() {
        for d in [-4027i64, -3299, -307, -687] {
            let b = selmer_basis(d, 3).unwrap();
            let p = 3u32;
            let probes: Vec<u64> = (2u64..60)
                .filter(|&q| crate::arith::is_prime(q) && divisor_is_admissible(d, q, p))
                .take(6)
                .collect();
            let mut stacked: Vec<Vec<u32>> = vec![Vec::new(); b.sigma];
            for &q in &probes {
                let rq = crate::residues::reduced_quotient(d, q, p).unwrap();
                for (i, g) in b.generators.iter().enumerate() {
                    match rq.project(g.quadint()) {
                        Ok(v) => stacked[i].extend(v),
                        Err(_) => stacked[i].extend(vec![u32::MAX]), // skip column
                    }
                }
            }
            // every nonzero exponent vector must survive at some probe
            let sigma = b.sigma;
            let mut exps = vec![0u32; sigma];
            loop {
                // increment base-p counter
                let mut k = 0;
                while k < sigma {
                    exps[k] += 1;
                    if exps[k] < p {
                        break;
                    }
                    exps[k] = 0;
                    k += 1;
                }
                if k == sigma {
                    break;
                }
                let len = stacked[0].len();
                let survives = (0..len).any(|j| {
                    let mut acc = 0u32;
                    for i in 0..sigma {
                        if stacked[i][j] == u32::MAX {
                            return false;
                        }
                        acc = (acc + exps[i] * stacked[i][j]) % p;
                    }
                    acc != 0
                });
                assert!(
                    survives,
                    "combination {exps:?} dies at all probes for d = {d}"
                );
            }
        }
    }

    #[test]
    fn cached_basis_round_trip() {
        let cache = Cache::in_memory();
        let b1 = selmer_basis_cached(-4027, 3, &cache).unwrap();
        let rec = cache.get(-4027).unwrap();
        assert_eq!(rec.selmer.get(&3).map(|w| w.len()), Some(2));
        let b2 = selmer_basis_cached(-4027, 3, &cache).unwrap();
        assert_eq!(b1.sigma, b2.sigma);
        for c in [2u64, 5, 9, 11, 90] {
            assert_eq!(
                b1.ring_space(c).unwrap(),
                b2.ring_space(c).unwrap(),
                "cached basis differs at c = {c}"
            );
        }
    }
}
