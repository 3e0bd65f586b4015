//! Laurent polynomials over a prime field F_q and matrices of them:
//! the coefficient arithmetic of loop groups and mod-p monodromy checks.

use crate::error::{Error, Result};

/// The prime field F_q (q prime; values are reduced representatives).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fq {
    pub q: u32,
}

impl Fq {
    pub fn new(q: u32) -> Self {
        assert!(q >= 2 && (2..q).all(|d| d * d > q || q % d != 0), "q must be prime");
        Fq { q }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.q - b % self.q) % self.q
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        (self.q - a % self.q) % self.q
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.q != 0, "division by zero in F_q");
        self.pow(a, self.q - 2)
    }

    pub fn pow(&self, mut a: u32, mut e: u32) -> u32 {
        let mut acc = 1u32;
        a %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Reduce a signed integer.
    pub fn from_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.q as i64) as u32
    }
}

/// Finitely supported Laurent polynomial over F_q; `coeffs[i]` is the
/// coefficient of u^(off + i). Normalized: empty, or nonzero first and
/// last coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    pub off: i64,
    pub coeffs: Vec<u32>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { off: 0, coeffs: Vec::new() }
    }

    pub fn monomial(c: u32, d: i64, f: Fq) -> Self {
        let c = c % f.q;
        if c == 0 {
            Self::zero()
        } else {
            LaurentPoly { off: d, coeffs: vec![c] }
        }
    }

    pub fn one(f: Fq) -> Self {
        Self::monomial(1, 0, f)
    }

    pub fn from_coeffs(off: i64, coeffs: Vec<u32>, f: Fq) -> Self {
        let mut p = LaurentPoly { off, coeffs: coeffs.into_iter().map(|c| c % f.q).collect() };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.off += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.off = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// u-adic valuation; None for 0.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.off)
        }
    }

    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.off + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, d: i64) -> u32 {
        if d < self.off || d >= self.off + self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[(d - self.off) as usize]
        }
    }

    pub fn add(&self, other: &Self, f: Fq) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let off = self.off.min(other.off);
        let hi = self.degree().unwrap().max(other.degree().unwrap());
        let mut coeffs = vec![0u32; (hi - off + 1) as usize];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let d = off + i as i64;
            *c = f.add(self.coeff(d), other.coeff(d));
        }
        Self::from_coeffs(off, coeffs, f)
    }

    pub fn neg(&self, f: Fq) -> Self {
        LaurentPoly { off: self.off, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn sub(&self, other: &Self, f: Fq) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &Self, f: Fq) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(self.off + other.off, coeffs, f)
    }

    pub fn scale(&self, c: u32, f: Fq) -> Self {
        let mut coeffs = self.coeffs.clone();
        for x in coeffs.iter_mut() {
            *x = f.mul(*x, c);
        }
        Self::from_coeffs(self.off, coeffs, f)
    }

    /// Multiply by u^k.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { off: self.off + k, coeffs: self.coeffs.clone() }
    }

    pub fn derivative(&self, f: Fq) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let coeffs: Vec<u32> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f.mul(c, f.from_i64(self.off + i as i64)))
            .collect();
        Self::from_coeffs(self.off - 1, coeffs, f)
    }

    /// Substitute u -> u^k (the u-part of Frobenius when k = p).
    pub fn substitute_power(&self, k: i64, f: Fq) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0u32; (self.coeffs.len() - 1) * k as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c;
        }
        Self::from_coeffs(self.off * k, coeffs, f)
    }

    /// Truncate away all terms of degree >= cut.
    pub fn truncate_above(&self, cut: i64) -> Self {
        let coeffs: Vec<u32> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.off + (i as i64) < cut)
            .map(|(_, &c)| c)
            .collect();
        let mut p = LaurentPoly { off: self.off, coeffs };
        p.normalize();
        p
    }

    /// Inverse of a polynomial with nonzero constant-coefficient at its
    /// valuation, as a series truncated strictly below `prec` (relative to
    /// degree -val): self * result = 1 + O(u^{prec - ...}).
    pub fn inverse_series(&self, prec: usize, f: Fq) -> Self {
        let v = self.valuation().expect("inverse of zero");
        let lead = self.coeffs[0];
        let lead_inv = f.inv(lead);
        // self = lead * u^v * (1 + g), invert the unit part by iteration
        let mut inv = vec![0u32; prec];
        inv[0] = lead_inv;
        for n in 1..prec {
            // sum_{j=1..n} a_j * inv_{n-j} = 0 with a_j the unit-part coeffs
            let mut s = 0u32;
            for j in 1..=n {
                let aj = if j < self.coeffs.len() { self.coeffs[j] } else { 0 };
                s = f.add(s, f.mul(aj, inv[n - j]));
            }
            inv[n] = f.neg(f.mul(s, lead_inv));
        }
        Self::from_coeffs(-v, inv, f)
    }

    pub fn to_string_u(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let d = self.off + i as i64;
            parts.push(match d {
                0 => format!("{c}"),
                1 => {
                    if c == 1 {
                        "u".to_string()
                    } else {
                        format!("{c}*u")
                    }
                }
                _ => {
                    if c == 1 {
                        format!("u^{d}")
                    } else {
                        format!("{c}*u^{d}")
                    }
                }
            });
        }
        parts.join(" + ")
    }
}

/// Square matrix over F_q((u)) with Laurent-polynomial entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopMatrix {
    pub n: usize,
    pub field: Fq,
    /// Row-major entries.
    pub entries: Vec<LaurentPoly>,
}

impl LoopMatrix {
    pub fn new(n: usize, field: Fq, entries: Vec<LaurentPoly>) -> Self {
        assert_eq!(entries.len(), n * n);
        LoopMatrix { n, field, entries }
    }

    pub fn identity(n: usize, field: Fq) -> Self {
        let mut entries = vec![LaurentPoly::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = LaurentPoly::one(field);
        }
        LoopMatrix { n, field, entries }
    }

    /// diag(u^{mu_1}, ..., u^{mu_n}).
    pub fn u_power(mu: &[i64], field: Fq) -> Self {
        let n = mu.len();
        let mut entries = vec![LaurentPoly::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = LaurentPoly::monomial(1, mu[i], field);
        }
        LoopMatrix { n, field, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b, self.field))
            .collect();
        LoopMatrix { n: self.n, field: self.field, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let f = self.field;
        let n = self.n;
        let mut entries = vec![LaurentPoly::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero();
                for k in 0..n {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j), f), f);
                }
                entries[i * n + j] = acc;
            }
        }
        LoopMatrix { n, field: f, entries }
    }

    /// Entrywise substitute u -> u^k (with identity coefficient Frobenius:
    /// q is prime, so x -> x^q is trivial on F_q).
    pub fn substitute_power(&self, k: i64) -> Self {
        LoopMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|e| e.substitute_power(k, self.field)).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        LoopMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|e| e.derivative(self.field)).collect(),
        }
    }

    fn det_of(entries: &[&LaurentPoly], n: usize, f: Fq) -> LaurentPoly {
        if n == 1 {
            return entries[0].clone();
        }
        let mut acc = LaurentPoly::zero();
        for j in 0..n {
            if entries[j].is_zero() {
                continue;
            }
            let minor: Vec<&LaurentPoly> = (1..n)
                .flat_map(|r| (0..n).filter(|&c| c != j).map(move |c| entries[r * n + c]))
                .collect();
            let cof = Self::det_of(&minor, n - 1, f);
            let term = entries[j].mul(&cof, f);
            acc = if j % 2 == 0 { acc.add(&term, f) } else { acc.sub(&term, f) };
        }
        acc
    }

    pub fn det(&self) -> LaurentPoly {
        let refs: Vec<&LaurentPoly> = self.entries.iter().collect();
        Self::det_of(&refs, self.n, self.field)
    }

    /// Minimal u-valuation over all k x k minors, for k = 1..n (the
    /// valuations of the gcds of minors over the DVR F_q[[u]]).
    pub fn minor_valuations(&self) -> Result<Vec<i64>> {
        let n = self.n;
        let f = self.field;
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            let rows = subsets(n, k);
            let cols = subsets(n, k);
            let mut best: Option<i64> = None;
            for r in &rows {
                for c in &cols {
                    let sub: Vec<&LaurentPoly> =
                        r.iter().flat_map(|&i| c.iter().map(move |&j| self.at(i, j))).collect();
                    let d = Self::det_of(&sub, k, f);
                    if let Some(v) = d.valuation() {
                        best = Some(best.map_or(v, |b: i64| b.min(v)));
                    }
                }
            }
            out.push(best.ok_or(Error::Singular)?);
        }
        Ok(out)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const F5: Fq = Fq { q: 5 };

    fn poly(off: i64, cs: &[u32]) -> LaurentPoly {
        LaurentPoly::from_coeffs(off, cs.to_vec(), F5)
    }

    #[test]
    fn field_ops() {
        let f = Fq::new(7);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.from_i64(-1), 6);
    }

    #[test]
    fn poly_arith() {
        let a = poly(-1, &[1, 2]); // u^-1 + 2
        let b = poly(0, &[3, 1]); // 3 + u
        let s = a.add(&b, F5);
        assert_eq!(s, poly(-1, &[1, 0, 1]));
        let p = a.mul(&b, F5);
        // (u^-1 + 2)(3 + u) = 3u^-1 + 1 + 6 + 2u = 3u^-1 + 2 + 2u
        assert_eq!(p, poly(-1, &[3, 2, 2]));
        assert!(a.sub(&a, F5).is_zero());
    }

    #[test]
    fn derivative_and_substitution() {
        let a = poly(-2, &[1, 0, 0, 1, 1]); // u^-2 + u + u^2
        let d = a.derivative(F5);
        // -2u^-3 + 1 + 2u
        assert_eq!(d, poly(-3, &[3, 0, 0, 1, 2]));
        let s = a.substitute_power(5, F5);
        assert_eq!(s.coeff(-10), 1);
        assert_eq!(s.coeff(5), 1);
        assert_eq!(s.coeff(10), 1);
        assert_eq!(s.coeffs.iter().filter(|&&c| c != 0).count(), 3);
    }

    #[test]
    fn inverse_series() {
        let a = poly(1, &[2, 1, 3]); // 2u + u^2 + 3u^3
        let inv = a.inverse_series(12, F5);
        let prod = a.mul(&inv, F5).truncate_above(8);
        assert_eq!(prod, LaurentPoly::one(F5));
    }

    #[test]
    fn det_and_minors() {
        let m = LoopMatrix::u_power(&[2, -1], F5);
        let d = m.det();
        assert_eq!(d, LaurentPoly::monomial(1, 1, F5));
        let v = m.minor_valuations().unwrap();
        assert_eq!(v, vec![-1, 1]);
    }

    #[test]
    fn singular_detected() {
        let z = LoopMatrix::new(
            2,
            F5,
            vec![LaurentPoly::one(F5), LaurentPoly::one(F5), LaurentPoly::one(F5), LaurentPoly::one(F5)],
        );
        assert!(z.minor_valuations().is_err());
    }
}
