//! Exact truncated power series over Q with p-adic tail certification.
//!
//! A series stores its coefficients for u^0..u^D exactly, plus a single
//! integer `tail_weight` W certifying that every discarded coefficient
//! c_n (n > D) satisfies v_p(c_n) + n >= W. Evaluation at u = p then
//! returns an exact rational together with the certified valuation floor
//! W for the omitted tail. Arithmetic propagates W conservatively, so a
//! result never claims more precision than its inputs justify.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sentinel weights: an empty (certainly zero) tail, and an uncertified one.
pub const W_INF: i64 = i64::MAX / 4;
pub const W_NEG_INF: i64 = i64::MIN / 4;

fn wadd(a: i64, b: i64) -> i64 {
    if a <= W_NEG_INF || b <= W_NEG_INF {
        W_NEG_INF
    } else if a >= W_INF || b >= W_INF {
        W_INF
    } else {
        a + b
    }
}

/// p-adic valuation of a nonzero integer.
fn vp_bigint(x: &BigInt, p: i64) -> i64 {
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation of a rational; W_INF for zero.
pub fn vp(x: &BigRational, p: i64) -> i64 {
    if x.is_zero() {
        W_INF
    } else {
        vp_bigint(x.numer(), p) - vp_bigint(x.denom(), p)
    }
}

pub fn rat_i64(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    pub p: i64,
    /// coeffs[n] is the exact coefficient of u^n, n = 0..=D.
    pub coeffs: Vec<BigRational>,
    /// certified lower bound on v_p(c_n) + n over all n > D
    pub tail_weight: i64,
}

impl TruncSeries {
    pub fn new(p: i64, coeffs: Vec<BigRational>, tail_weight: i64) -> Self {
        assert!(!coeffs.is_empty());
        TruncSeries { p, coeffs, tail_weight }
    }

    /// Truncation of an exactly known polynomial (empty true tail).
    pub fn from_poly(p: i64, mut coeffs: Vec<BigRational>, d: usize) -> Self {
        let mut tail = W_INF;
        while coeffs.len() > d + 1 {
            let n = coeffs.len() - 1;
            let c = coeffs.pop().unwrap();
            tail = tail.min(wadd(vp(&c, p), n as i64));
        }
        coeffs.resize(d + 1, BigRational::zero());
        TruncSeries { p, coeffs, tail_weight: tail }
    }

    pub fn zero(p: i64, d: usize) -> Self {
        TruncSeries { p, coeffs: vec![BigRational::zero(); d + 1], tail_weight: W_INF }
    }

    pub fn one(p: i64, d: usize) -> Self {
        Self::constant(p, BigRational::one(), d)
    }

    pub fn constant(p: i64, c: BigRational, d: usize) -> Self {
        let mut s = Self::zero(p, d);
        s.coeffs[0] = c;
        s
    }

    /// The linear polynomial E(u) = u - p.
    pub fn e_poly(p: i64, d: usize) -> Self {
        Self::from_poly(p, vec![rat_i64(-p), rat_i64(1)], d)
    }

    pub fn trunc_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn weight(&self, n: usize) -> i64 {
        wadd(vp(&self.coeffs[n], self.p), n as i64)
    }

    /// min over ALL n (stored and tail) of v_p(c_n) + n.
    pub fn min_weight(&self) -> i64 {
        let mut m = self.tail_weight;
        for n in 0..self.coeffs.len() {
            m = m.min(self.weight(n));
        }
        m
    }

    /// suffix[k] = certified min of v_p(c_n) + n over n >= k.
    fn suffix_weights(&self) -> Vec<i64> {
        let d = self.trunc_degree();
        let mut out = vec![self.tail_weight; d + 2];
        for n in (0..=d).rev() {
            out[n] = out[n + 1].min(self.weight(n));
        }
        out
    }

    pub fn truncate(&self, d: usize) -> Self {
        if d >= self.trunc_degree() {
            return self.clone();
        }
        let mut tail = self.tail_weight;
        for n in d + 1..self.coeffs.len() {
            tail = tail.min(self.weight(n));
        }
        TruncSeries { p: self.p, coeffs: self.coeffs[..=d].to_vec(), tail_weight: tail }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let d = self.trunc_degree().min(other.trunc_degree());
        let a = self.truncate(d);
        let b = other.truncate(d);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        TruncSeries { p: self.p, coeffs, tail_weight: a.tail_weight.min(b.tail_weight) }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            tail_weight: self.tail_weight,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let w = vp(c, self.p);
        TruncSeries {
            p: self.p,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            tail_weight: wadd(self.tail_weight, w),
        }
    }

    /// Multiply by u^k.
    pub fn shift_u(&self, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncSeries { p: self.p, coeffs, tail_weight: wadd(self.tail_weight, k as i64) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let d = self.trunc_degree().min(other.trunc_degree());
        let mut coeffs = vec![BigRational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        // certified weight of everything discarded (degree > d): stored x
        // stored pairs with i + j > d, plus anything touching a tail
        let sfx2 = other.suffix_weights();
        let s1 = self.min_weight();
        let s2 = other.min_weight();
        let mut tail = wadd(self.tail_weight, s2).min(wadd(s1, other.tail_weight));
        for i in 0..self.coeffs.len() {
            let need = (d as i64 + 1 - i as i64).max(0) as usize;
            let w2 = if need >= sfx2.len() { other.tail_weight } else { sfx2[need] };
            tail = tail.min(wadd(self.weight(i), w2));
        }
        TruncSeries { p: self.p, coeffs, tail_weight: tail }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.p, self.trunc_degree());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// d/du: degree drops by one, tail weights drop by at most one.
    pub fn derivative(&self) -> Self {
        let d = self.trunc_degree();
        let coeffs: Vec<BigRational> = (1..=d)
            .map(|n| &self.coeffs[n] * rat_i64(n as i64))
            .chain(std::iter::once(BigRational::zero()))
            .collect();
        // the stored top coefficient's derivative lands at degree d, which we
        // no longer know exactly only if... we do know it; but the first
        // unknown input term (degree d+1) lands at degree d, so degree d of
        // the result is NOT exact: keep D-1 stored exactly.
        let mut s = TruncSeries {
            p: self.p,
            coeffs,
            tail_weight: wadd(self.tail_weight, -1),
        };
        s.coeffs.truncate(d.max(1));
        s.tail_weight = s.tail_weight.min(wadd(self.weight(d), -1));
        s
    }

    /// Substitute u -> u^k (k >= 1). Exact through degree k*D + k - 1.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let d = self.trunc_degree();
        let mut coeffs = vec![BigRational::zero(); k * d + k];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[k * n] = c.clone();
        }
        // an input tail term at degree n > D lands at kn >= n, so its
        // weight v_p + kn >= v_p + n >= W
        TruncSeries { p: self.p, coeffs, tail_weight: self.tail_weight }
    }

    /// Series inverse of a unit (nonzero constant term). The tail of the
    /// inverse is certified with weight -v_p(a_0) whenever every higher
    /// coefficient satisfies v_p(a_n) + n >= v_p(a_0); otherwise the
    /// inverse is exact where stored but its tail is uncertified.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.trunc_degree();
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Singular);
        }
        let a0inv = a0.recip();
        let mut coeffs = vec![BigRational::zero(); d + 1];
        coeffs[0] = a0inv.clone();
        for n in 1..=d {
            let mut s = BigRational::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &coeffs[n - j];
                }
            }
            coeffs[n] = -(&s * &a0inv);
        }
        let w0 = vp(a0, self.p);
        let mut pos = self.tail_weight;
        for n in 1..=d {
            pos = pos.min(self.weight(n));
        }
        let tail_weight = if pos >= w0 { -w0 } else { W_NEG_INF };
        Ok(TruncSeries { p: self.p, coeffs, tail_weight })
    }

    /// Exact value of the stored part at u = p, plus the certified
    /// valuation floor for the omitted tail.
    pub fn eval_at_p(&self) -> (BigRational, i64) {
        let p = rat_i64(self.p);
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &p + c;
        }
        (acc, self.tail_weight)
    }

    /// All stored coefficients p-integral.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| vp_bigint(c.denom(), self.p) == 0)
    }

    pub fn to_sparse(&self) -> Vec<(usize, BigInt, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n, c.numer().clone(), c.denom().clone()))
            .collect()
    }
}

/// Certified p-adic valuation of d^n f / du^n at u = p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationCertificate {
    pub value: i64,
    /// true: `value` is the exact valuation; false: `value` is only a
    /// certified lower bound (raise D to sharpen)
    pub certified: bool,
    pub d_used: usize,
}

/// Exact v_p(d^n f/du^n |_{u=p}) when the tail cannot interfere at the
/// working truncation; otherwise a certified lower bound.
pub fn valuation_at_p(f: &TruncSeries, n: usize) -> ValuationCertificate {
    let mut g = f.clone();
    for _ in 0..n {
        g = g.derivative();
    }
    let (val, err) = g.eval_at_p();
    let v = vp(&val, f.p);
    if v < err {
        ValuationCertificate { value: v, certified: true, d_used: f.trunc_degree() }
    } else {
        ValuationCertificate { value: err.min(v), certified: false, d_used: f.trunc_degree() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(p: i64, d: usize) -> TruncSeries {
        // 1/(1 - u/p) = sum p^-n u^n
        let one_minus = TruncSeries::from_poly(p, vec![rat_i64(1), -rat_i64(1) / rat_i64(p)], d);
        one_minus.inverse().unwrap()
    }

    #[test]
    fn poly_truncation_weights() {
        // u^5 truncated at D=3: tail term has v_p + n = 5
        let s = TruncSeries::from_poly(
            5,
            vec![rat_i64(0), rat_i64(0), rat_i64(0), rat_i64(0), rat_i64(0), rat_i64(1)],
            3,
        );
        assert!(s.is_zero());
        assert_eq!(s.tail_weight, 5);
    }

    #[test]
    fn mul_exactness() {
        let p = 5;
        let a = TruncSeries::from_poly(p, vec![rat_i64(1), rat_i64(2), rat_i64(3)], 10);
        let b = TruncSeries::from_poly(p, vec![rat_i64(4), rat_i64(5)], 10);
        let ab = a.mul(&b);
        assert_eq!(*ab.coeff(0), rat_i64(4));
        assert_eq!(*ab.coeff(1), rat_i64(13));
        assert_eq!(*ab.coeff(2), rat_i64(22));
        assert_eq!(*ab.coeff(3), rat_i64(15));
        assert_eq!(ab.tail_weight, W_INF);
    }

    #[test]
    fn inverse_of_e_has_weight_minus_one() {
        let p = 5;
        let e = TruncSeries::e_poly(p, 8);
        let inv = e.inverse().unwrap();
        assert_eq!(inv.tail_weight, -1);
        // (u - p)^-1 = -1/p (1 + u/p + u^2/p^2 + ...)
        assert_eq!(*inv.coeff(0), -rat_i64(1) / rat_i64(5));
        assert_eq!(*inv.coeff(2), -rat_i64(1) / rat_i64(125));
        let prod = e.mul(&inv);
        assert_eq!(*prod.coeff(0), rat_i64(1));
        assert!(prod.coeffs[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn geometric_eval_error_floor() {
        let p = 5;
        let g = geom(p, 12);
        // every coefficient has weight 0, so the tail floor is 0
        assert_eq!(g.tail_weight, 0);
        let (val, err) = g.eval_at_p();
        assert_eq!(err, 0);
        // stored part of 1/(1-u/p) at u=p is D+1
        assert_eq!(val, rat_i64(13));
    }

    #[test]
    fn derivative_drops_weight_by_one() {
        let p = 3;
        let g = geom(p, 10);
        let d = g.derivative();
        assert_eq!(d.tail_weight, -1);
        assert_eq!(*d.coeff(0), rat_i64(1) / rat_i64(3));
    }

    #[test]
    fn substitution_spreads_support() {
        let p = 3;
        let s = TruncSeries::from_poly(p, vec![rat_i64(1), rat_i64(2)], 4);
        let t = s.substitute_power(3);
        assert_eq!(t.trunc_degree(), 14);
        assert_eq!(*t.coeff(0), rat_i64(1));
        assert_eq!(*t.coeff(3), rat_i64(2));
        assert!(t.coeff(1).is_zero() && t.coeff(2).is_zero());
    }

    #[test]
    fn valuation_certificate_on_monomial() {
        let p = 5;
        // f = u^2/25: f(p) = 1, v_p = 0; f'(p) = 2p/25, v_p = -1
        let f = TruncSeries::from_poly(
            p,
            vec![rat_i64(0), rat_i64(0), rat_i64(1) / rat_i64(25)],
            6,
        );
        let c0 = valuation_at_p(&f, 0);
        assert!(c0.certified);
        assert_eq!(c0.value, 0);
        let c1 = valuation_at_p(&f, 1);
        assert!(c1.certified);
        assert_eq!(c1.value, -1);
    }

    #[test]
    fn uncertified_tail_flagged() {
        let p = 5;
        let mut g = geom(p, 6);
        g.tail_weight = W_NEG_INF; // simulate a lost certificate
        let c = valuation_at_p(&g, 0);
        assert!(!c.certified);
    }
}
