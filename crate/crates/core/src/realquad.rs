//! Continued-fraction machinery for real quadratic orders: fundamental
//! units, regulators, unit indices, and the regulator quotient criterion.
//!
//! All decisions are made on exact integers. The index (U : U cap O_c) is
//! the least k with eta^k in the suborder of conductor c, which is a
//! congruence condition mod c on the second coordinate; we therefore power
//! eta in (O/cO) instead of growing exact coefficients. Regulators as logs
//! are carried for display only.

use crate::arith::{self, kronecker, valuation};
use crate::error::{Error, Result};
use crate::quadforms::QuadInt;
use num::bigint::BigInt;
use num::integer::Integer;
use num::ToPrimitive;

/// Fundamental unit eta > 1 of the maximal order, with its regulator.
#[derive(Debug, Clone)]
pub struct UnitData {
    pub d: i64,
    pub eta: QuadInt,
    pub regulator: f64,
    pub norm: i8,
}

/// Default cap for the unit index search.
pub const DEFAULT_INDEX_CAP: u64 = 729; // 3^6

/// Fundamental unit by the continued fraction expansion of the standard
/// quadratic surd of discriminant d.
pub fn fundamental_unit(d: i64) -> Result<UnitData> {
    if d <= 0 || !arith::is_fundamental(d) {
        return Err(Error::ExpectedPositiveFundamental(d));
    }
    let (x, y) = if d % 4 == 0 {
        // expand sqrt(m), m = d/4; fundamental Pell solution
        let m = d / 4;
        let (h, k) = pell_convergent(m);
        (BigInt::from(2) * h, k)
    } else {
        // expand (1 + sqrt(d))/2, purely periodic
        half_integer_unit(d)
    };
    let eta = QuadInt::new(x, y, d);
    let norm = eta.norm();
    let n = if norm == BigInt::from(1) {
        1i8
    } else if norm == BigInt::from(-1) {
        -1i8
    } else {
        return Err(Error::Invariant(format!(
            "continued fraction produced non-unit of norm {norm} for d = {d}"
        )));
    };
    let regulator = {
        let xf = eta.x.to_f64().unwrap_or(f64::MAX);
        let yf = eta.y.to_f64().unwrap_or(f64::MAX);
        ((xf + yf * (d as f64).sqrt()) / 2.0).ln()
    };
    Ok(UnitData {
        d,
        eta,
        regulator,
        norm: n,
    })
}

/// Convergent (h, k) at the period end of sqrt(m): h^2 - m k^2 = +-1.
fn pell_convergent(m: i64) -> (BigInt, BigInt) {
    let a0 = arith::isqrt(m as u64) as i64;
    let (mut p, mut q) = (a0, m - a0 * a0);
    let (mut h2, mut h1) = (BigInt::from(1), BigInt::from(a0));
    let (mut k2, mut k1) = (BigInt::from(0), BigInt::from(1));
    while q != 1 {
        let a = (a0 + p) / q;
        let pn = a * q - p;
        let qn = (m - pn * pn) / q;
        let h = a * &h1 + &h2;
        let k = a * &k1 + &k2;
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
        (p, q) = (pn, qn);
    }
    (h1, k1)
}

/// Unit from the purely periodic expansion of the reduced surd
/// w = (p0 + sqrt(d))/2 with p0 the largest integer <= sqrt(d) of the parity
/// of d: at period length l, eta = k_{l-1} w + k_{l-2}.
fn half_integer_unit(d: i64) -> (BigInt, BigInt) {
    let sq = arith::isqrt(d as u64) as i64;
    let p0 = if sq % 2 == d % 2 { sq } else { sq - 1 };
    let q0 = 2i64;
    let (mut p, mut q) = (p0, q0);
    let (mut k2, mut k1) = (BigInt::from(1), BigInt::from(0));
    loop {
        let a = (p + sq).div_euclid(q);
        let pn = a * q - p;
        let qn = (d - pn * pn) / q;
        let k = a * &k1 + &k2;
        (k2, k1) = (k1, k);
        (p, q) = (pn, qn);
        if (p, q) == (p0, q0) {
            break;
        }
    }
    // eta = k1 * (p0 + sqrt(d))/2 + k2 -> half-coordinates (k1 p0 + 2 k2, k1)
    (&k1 * p0 + BigInt::from(2) * &k2, k1)
}

/// Multiplication in O/cO on the basis {1, w}, w = (d + sqrt(d))/2,
/// where w^2 = d w - (d^2 - d)/4.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ModRing {
    pub modulus: u64,
    d_red: u64,
    e_red: u64,
}

impl ModRing {
    pub fn new(d: i64, modulus: u64) -> ModRing {
        let m = modulus as i128;
        let d_red = (d as i128).rem_euclid(m) as u64;
        let e = ((d as i128) * (d as i128) - d as i128) / 4;
        ModRing {
            modulus,
            d_red,
            e_red: e.rem_euclid(m) as u64,
        }
    }

    pub fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let m = self.modulus as u128;
        let (a1, b1) = (x.0 as u128, x.1 as u128);
        let (a2, b2) = (y.0 as u128, y.1 as u128);
        let bb = (b1 * b2) % m;
        let a = (a1 * a2 % m + (m - (bb * (self.e_red as u128) % m) % m)) % m;
        let b = (a1 * b2 % m + a2 * b1 % m + bb * (self.d_red as u128) % m) % m;
        (a as u64, b as u64)
    }

    pub fn pow(&self, x: (u64, u64), mut e: u64) -> (u64, u64) {
        let mut acc = (1u64 % self.modulus, 0u64);
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Norm of a + b w modulo the ring modulus.
    pub fn norm(&self, x: (u64, u64)) -> u64 {
        let m = self.modulus as u128;
        let (a, b) = (x.0 as u128, x.1 as u128);
        ((a * a % m + a * b % m * (self.d_red as u128) % m + b * b % m * (self.e_red as u128) % m)
            % m) as u64
    }

    pub fn reduce_quadint(&self, q: &QuadInt) -> (u64, u64) {
        let m = BigInt::from(self.modulus);
        let (a, b) = q.basis_coords();
        (
            a.mod_floor(&m).to_u64().unwrap(),
            b.mod_floor(&m).to_u64().unwrap(),
        )
    }
}

/// Minimal k >= 1 with eta^k in the suborder O_c; equals R(c)/R(1) exactly.
pub fn unit_index(d: i64, c: u64, cap: u64) -> Result<u64> {
    if c == 1 {
        return Ok(1);
    }
    let unit = fundamental_unit(d)?;
    unit_index_of(&unit, c, cap)
}

pub fn unit_index_of(unit: &UnitData, c: u64, cap: u64) -> Result<u64> {
    if c == 1 {
        return Ok(1);
    }
    let ring = ModRing::new(unit.d, c);
    let eta = ring.reduce_quadint(&unit.eta);
    let mut pow = eta;
    for k in 1..=cap {
        if pow.1 == 0 {
            return Ok(k);
        }
        pow = ring.mul(pow, eta);
    }
    Err(Error::SearchExhausted(format!(
        "unit index for d = {}, c = {c} exceeds cap {cap}",
        unit.d
    )))
}

/// v_p of the Euler quotient E(q) = phi_K(qO)/phi(q) for an admissible prime
/// conductor q (or the prime power p^2), per the four regular cases plus the
/// irregular case q = 9, d = -3 mod 9 where v_3(E(9)) = 2.
pub fn euler_quotient_valuation(d: i64, q: u64, p: u32) -> Result<u32> {
    arith::validate_odd_prime(p)?;
    let pl = p as u64;
    if q == pl * pl {
        if p == 3 && d.rem_euclid(9) == 6 {
            return Ok(2);
        }
        if kronecker(d, pl) != 0 {
            return Ok(1);
        }
        return Err(Error::NotAdmissible { d, q, p });
    }
    if q == pl {
        if d.rem_euclid(pl as i64) == 0 {
            return Ok(1);
        }
        return Err(Error::NotAdmissible { d, q, p });
    }
    if !arith::is_prime(q) {
        return Err(Error::NotAdmissible { d, q, p });
    }
    let sym = kronecker(d, q);
    let qm = q % pl;
    if sym == 1 && qm == 1 {
        Ok(valuation(q - 1, pl))
    } else if sym == -1 && qm == pl - 1 {
        Ok(valuation(q + 1, pl))
    } else {
        Err(Error::NotAdmissible { d, q, p })
    }
}

/// Regulator quotient criterion for real quadratic K with rho_p = 0:
/// a regular admissible q (prime or p^2) is free iff
/// v_p(R(q)/R(1)) < v_p(E(q)); the irregular q = 9 has delta_3(9) = v_3(index).
pub fn rqc_defect(d: i64, q: u64, p: u32) -> Result<u8> {
    arith::validate_odd_prime(p)?;
    if d <= 0 || !arith::is_fundamental(d) {
        return Err(Error::ExpectedPositiveFundamental(d));
    }
    let h = real_class_number(d)?;
    if h % p as u64 == 0 {
        return Err(Error::UnsupportedField { d, p, rho: 1 });
    }
    let ev = euler_quotient_valuation(d, q, p)?;
    let idx = unit_index(d, q, DEFAULT_INDEX_CAP.max(4 * q))?;
    let vp = valuation(idx, p as u64);
    let irregular = p == 3 && q == 9 && d.rem_euclid(9) == 6;
    if irregular {
        if vp > 1 {
            return Err(Error::Invariant(format!(
                "v_3(R(9)/R(1)) = {vp} out of range for d = {d}"
            )));
        }
        return Ok(vp as u8);
    }
    Ok(if vp < ev { 0 } else { 1 })
}

/// Class number of the real quadratic field of discriminant d > 0 via the
/// closed form h = -sum_a chi(a) log sin(pi a / d) / (2 log eta), rounded
/// from a float evaluation that is far more accurate than the gap to the
/// nearest integer at desk scale.
pub fn real_class_number(d: i64) -> Result<u64> {
    if d <= 0 || !arith::is_fundamental(d) {
        return Err(Error::ExpectedPositiveFundamental(d));
    }
    let unit = fundamental_unit(d)?;
    let mut sum = 0.0f64;
    for a in 1..d as u64 {
        let chi = kronecker(d, a);
        if chi != 0 {
            sum -= chi as f64 * (std::f64::consts::PI * a as f64 / d as f64).sin().ln();
        }
    }
    let h = sum / (2.0 * unit.regulator);
    let rounded = h.round();
    if (h - rounded).abs() > 0.05 || rounded < 0.5 {
        return Err(Error::Invariant(format!(
            "analytic class number {h} for d = {d} did not round cleanly"
        )));
    }
    Ok(rounded as u64)
}

/// Ordinary p-class rank test for real fields: only the rank-zero case is
/// supported downstream, so this reports whether p divides h.
pub fn real_p_rank_is_zero(d: i64, p: u32) -> Result<bool> {
    Ok(real_class_number(d)? % p as u64 != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    #[test]
    fn fundamental_unit_golden() {
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.eta.x, u.eta.y), (BigInt::one(), BigInt::one()));
        assert_eq!(u.norm, -1);

        let u = fundamental_unit(8).unwrap();
        assert_eq!((u.eta.x, u.eta.y), (BigInt::from(2), BigInt::one()));

        let u = fundamental_unit(229).unwrap();
        assert_eq!(u.norm, -1);

        let u = fundamental_unit(24).unwrap();
        assert_eq!((u.eta.x, u.eta.y), (BigInt::from(10), BigInt::from(2)));
        assert_eq!(u.norm, 1);
    }

    #[test]
    fn unit_index_golden() {
        assert_eq!(unit_index(5, 1, 729).unwrap(), 1);
        assert_eq!(unit_index(5, 2, 729).unwrap(), 3);
        assert_eq!(unit_index(37, 2, 729).unwrap(), 1);
        assert_eq!(unit_index(24, 3, 729).unwrap(), 3);
        assert_eq!(unit_index(24, 9, 729).unwrap(), 3);
        assert_eq!(unit_index(69, 3, 729).unwrap(), 1);
        assert_eq!(unit_index(69, 9, 729).unwrap(), 3);
    }

    #[test]
    fn unit_index_by_exact_powering() {
        // definitional cross-check: eta^k in O_c iff c | y, on exact integers
        for (d, c) in [(5i64, 2u64), (5, 3), (24, 3), (24, 9), (69, 9), (37, 2)] {
            let u = fundamental_unit(d).unwrap();
            let idx = unit_index(d, c, 729).unwrap();
            let mut pow = u.eta.clone();
            for k in 1..=idx {
                let in_suborder = (&pow.y % BigInt::from(c)) == BigInt::from(0);
                assert_eq!(in_suborder, k == idx, "d={d} c={c} k={k}");
                pow = pow.mul(&u.eta);
            }
        }
    }

    #[test]
    fn euler_quotient_golden() {
        assert_eq!(euler_quotient_valuation(5, 11, 5).unwrap(), 1);
        assert_eq!(euler_quotient_valuation(37, 2, 3).unwrap(), 1);
        assert_eq!(euler_quotient_valuation(717, 9, 3).unwrap(), 2);
    }

    #[test]
    fn rqc_golden() {
        assert_eq!(rqc_defect(37, 2, 3).unwrap(), 0);
        assert_eq!(rqc_defect(5, 211, 5).unwrap(), 0);
        assert_eq!(rqc_defect(5, 11, 5).unwrap(), 1);
        // irregular rows of the c = 9 survey
        assert_eq!(rqc_defect(717, 9, 3).unwrap(), 0);
        assert_eq!(rqc_defect(24, 9, 3).unwrap(), 1);
        assert_eq!(rqc_defect(69, 9, 3).unwrap(), 1);
    }

    #[test]
    fn index_divisibility_for_coprime_conductors() {
        for (c1, c2) in [(2u64, 3u64), (2, 5), (3, 7), (4, 9)] {
            for d in [5i64, 24, 37, 69, 229] {
                let i1 = unit_index(d, c1, 10_000).unwrap();
                let i2 = unit_index(d, c2, 10_000).unwrap();
                let i12 = unit_index(d, c1 * c2, 100_000).unwrap();
                let l = num::integer::lcm(i1, i2);
                assert_eq!(i12 % l, 0, "d={d} c1={c1} c2={c2}");
            }
        }
    }

    #[test]
    fn real_class_numbers() {
        assert_eq!(real_class_number(5).unwrap(), 1);
        assert_eq!(real_class_number(24).unwrap(), 1);
        assert_eq!(real_class_number(69).unwrap(), 1);
        assert_eq!(real_class_number(229).unwrap(), 3);
        assert_eq!(real_class_number(40).unwrap(), 2);
    }

    #[test]
    fn rqc_rejects_positive_rank() {
        // d = 229 has 3-class rank 1
        assert!(matches!(
            rqc_defect(229, 2, 3),
            Err(Error::UnsupportedField { .. })
        ));
    }
}
