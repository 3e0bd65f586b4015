//! Fontaine-Laffaille predicates, minuscule-coweight detection, the
//! lattice-uniqueness certificate, and deformation-dimension comparisons.
//!
//! The minimum-pairing search quotients out central (root-orthogonal)
//! directions of X_*(T) first -- central cocharacters pair to 0 with every
//! root and would make the minimum spuriously 0 -- and then runs over the
//! Hilbert basis of the dominant cone in the quotient lattice, where the
//! pairing against the highest root is strictly positive and linear, so the
//! minimum is attained on a generator.

use crate::error::{Error, Result};
use crate::linalg::{self, rat, Rat};
use crate::rootdatum::{Coweight, MultiCoweight, RootDatum};
use std::cmp::Ordering;

/// The semisimple quotient X_*(T) / (central directions), with a chosen
/// integral section back into X_*(T).
pub struct CentralQuotient<'a> {
    datum: &'a RootDatum,
    /// rank x s matrix whose columns lift the quotient basis.
    section: Vec<Vec<i64>>,
    pub dim: usize,
}

impl<'a> CentralQuotient<'a> {
    pub fn new(datum: &'a RootDatum) -> Self {
        let m: Vec<Vec<i64>> = datum
            .simple_indices
            .iter()
            .map(|&s| datum.roots[s].clone())
            .collect();
        let rank = datum.rank;
        if m.is_empty() {
            return CentralQuotient { datum, section: vec![Vec::new(); rank], dim: 0 };
        }
        let (_u, d, v) = linalg::smith(&m);
        let rows = m.len();
        let mut section = vec![Vec::new(); rank];
        let mut dim = 0;
        for j in 0..rank {
            let dj = if j < rows { d[j][j] } else { 0 };
            if dj != 0 {
                for (r, col) in section.iter_mut().enumerate() {
                    col.push(v[r][j] as i64);
                }
                dim += 1;
            }
        }
        CentralQuotient { datum, section, dim }
    }

    /// Lift quotient coordinates to a coweight of the original datum.
    pub fn lift(&self, q: &[i64]) -> Coweight {
        Coweight(
            self.section
                .iter()
                .map(|row| row.iter().zip(q).map(|(&a, &b)| a * b).sum())
                .collect(),
        )
    }

    fn pair(&self, q: &[i64], alpha: &[i64]) -> i64 {
        let lam = self.lift(q);
        lam.0.iter().zip(alpha).map(|(&a, &b)| a * b).sum()
    }

    fn in_cone(&self, q: &[i64]) -> bool {
        self.datum
            .simple_indices
            .iter()
            .all(|&s| self.pair(q, &self.datum.roots[s]) >= 0)
    }

    /// Primitive generators of the extreme rays of the dominant cone in the
    /// quotient (the cone is simplicial: one ray per simple root).
    pub fn extreme_rays(&self) -> Vec<Vec<i64>> {
        let ns = self.datum.simple_indices.len();
        debug_assert_eq!(ns, self.dim);
        (0..ns)
            .map(|i| {
                let rows: Vec<Vec<Rat>> = (0..ns)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let alpha = &self.datum.roots[self.datum.simple_indices[j]];
                        (0..self.dim)
                            .map(|k| {
                                let mut q = vec![0i64; self.dim];
                                q[k] = 1;
                                rat(self.pair(&q, alpha))
                            })
                            .collect()
                    })
                    .collect();
                let mut r = if rows.is_empty() {
                    vec![1] // one-dimensional quotient, no constraints
                } else {
                    let ker = linalg::kernel_basis(&rows);
                    assert_eq!(ker.len(), 1, "dominant cone is not simplicial");
                    linalg::primitive(&ker[0])
                };
                let alpha_i = &self.datum.roots[self.datum.simple_indices[i]];
                let p = self.pair(&r, alpha_i);
                assert!(p != 0);
                if p < 0 {
                    for x in r.iter_mut() {
                        *x = -*x;
                    }
                }
                r
            })
            .collect()
    }

    /// Hilbert basis of the dominant cone in the quotient lattice, by
    /// Gordan's lemma: candidates are the integer points of the fundamental
    /// zonotope of the extreme rays; irreducible ones form the basis.
    pub fn hilbert_basis(&self) -> Vec<Vec<i64>> {
        if self.dim == 0 {
            return Vec::new();
        }
        let rays = self.extreme_rays();
        let lo: Vec<i64> = (0..self.dim)
            .map(|j| rays.iter().map(|r| r[j].min(0)).sum())
            .collect();
        let hi: Vec<i64> = (0..self.dim)
            .map(|j| rays.iter().map(|r| r[j].max(0)).sum())
            .collect();
        let mut points = Vec::new();
        let mut q = lo.clone();
        'outer: loop {
            if q.iter().any(|&x| x != 0) && self.in_cone(&q) {
                points.push(q.clone());
            }
            let mut i = 0;
            loop {
                if i == self.dim {
                    break 'outer;
                }
                q[i] += 1;
                if q[i] <= hi[i] {
                    break;
                }
                q[i] = lo[i];
                i += 1;
            }
        }
        points
            .iter()
            .filter(|x| {
                !points.iter().any(|y| {
                    y != *x && {
                        let diff: Vec<i64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                        self.in_cone(&diff)
                    }
                })
            })
            .cloned()
            .collect()
    }

    /// max over irreducible components of the pairing with that component's
    /// highest root -- the binding quantity of the uniqueness certificate.
    fn max_component_pairing(&self, q: &[i64]) -> i64 {
        self.datum
            .highest_roots()
            .iter()
            .map(|ah| self.pair(q, ah))
            .max()
            .expect("datum without roots")
    }
}

/// Minimum over nonzero dominant lambda (modulo central directions) of the
/// pairing with the highest root (max over irreducible components).
pub fn min_dominant_pairing(datum: &RootDatum) -> Result<i64> {
    if datum.n_pos == 0 {
        return Err(Error::TorusOnly);
    }
    let q = CentralQuotient::new(datum);
    let m = q
        .hilbert_basis()
        .iter()
        .map(|x| q.max_component_pairing(x))
        .min()
        .expect("empty Hilbert basis for a datum with roots");
    assert!(m > 0);
    Ok(m)
}

/// Brute-force oracle for `min_dominant_pairing`: enumerate dominant,
/// non-central lambda in the box sup-norm <= `bound` of the original lattice.
pub fn min_dominant_pairing_box(datum: &RootDatum, bound: i64) -> Result<i64> {
    if datum.n_pos == 0 {
        return Err(Error::TorusOnly);
    }
    let highest = datum.highest_roots();
    let mut best: Option<i64> = None;
    let rank = datum.rank;
    let mut v = vec![-bound; rank];
    'outer: loop {
        let lam = Coweight(v.clone());
        let central = datum
            .roots
            .iter()
            .all(|r| datum.pairing(&lam, r).unwrap() == 0);
        if !central && datum.is_dominant(&lam) {
            let f = highest
                .iter()
                .map(|ah| datum.pairing(&lam, ah).unwrap())
                .max()
                .unwrap();
            best = Some(best.map_or(f, |b: i64| b.min(f)));
        }
        let mut i = 0;
        loop {
            if i == rank {
                break 'outer;
            }
            v[i] += 1;
            if v[i] <= bound {
                break;
            }
            v[i] = -bound;
            i += 1;
        }
    }
    Ok(best.expect("box too small to contain a non-central dominant coweight"))
}

/// All dominant lambda (mod central directions, within the Hilbert-basis
/// search region) pairing to 1 with the highest root of every component on
/// which lambda is non-central. Empty exactly when every irreducible factor
/// is simply connected in the installed lattice.
pub fn minuscule_coweights(datum: &RootDatum) -> Vec<Coweight> {
    if datum.n_pos == 0 {
        return Vec::new();
    }
    let q = CentralQuotient::new(datum);
    let highest = datum.highest_roots();
    let mut out: Vec<Coweight> = Vec::new();
    for x in q.hilbert_basis() {
        let lam = q.lift(&x);
        let mut ok = true;
        let mut noncentral_somewhere = false;
        for (comp, ah) in highest.iter().enumerate() {
            let noncentral = (0..datum.n_pos)
                .filter(|&i| datum.component_of_root(i) == comp)
                .any(|i| datum.pairing(&lam, &datum.roots[i]).unwrap() != 0);
            if noncentral {
                noncentral_somewhere = true;
                if datum.pairing(&lam, ah).unwrap() != 1 {
                    ok = false;
                }
            }
        }
        if ok && noncentral_somewhere {
            out.push(lam);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone)]
pub struct FLReport {
    pub group: String,
    pub mu: MultiCoweight,
    pub p: i64,
    pub h_mu: i64,
    pub is_fl: bool,
    pub is_strongly_fl: bool,
    /// None for a torus-only datum.
    pub min_pairing_m: Option<i64>,
    pub uniqueness_certificate: bool,
    /// Offending (embedding, root) when the FL predicate fails.
    pub witness: Option<String>,
}

impl FLReport {
    /// Flat machine-readable record.
    pub fn record(&self) -> String {
        format!(
            "schema=1 kind=flreport group={} mu={} p={} h_mu={} fl={} strongly_fl={} min_pairing={} certificate={} witness={}",
            self.group,
            self.mu,
            self.p,
            self.h_mu,
            self.is_fl,
            self.is_strongly_fl,
            self.min_pairing_m.map_or("-".to_string(), |m| m.to_string()),
            self.uniqueness_certificate,
            self.witness.as_deref().unwrap_or("-"),
        )
    }
}

/// FL iff <mu_sigma, alpha> < p-1 for every embedding and root; strongly FL
/// with (p-1)/2. Also evaluates the uniqueness certificate.
pub fn check_fl(datum: &RootDatum, mu: &MultiCoweight, p: i64) -> Result<FLReport> {
    let h = datum.h_mu(mu)?;
    let mut witness = None;
    let mut is_fl = true;
    let mut is_strongly_fl = true;
    for (sigma, c) in mu.0.iter().enumerate() {
        for r in &datum.roots {
            let v = datum.pairing(c, r)?;
            // strict inequalities, exactly as stated; 2v >= p-1 encodes
            // v >= (p-1)/2 without rationals
            if v >= p - 1 {
                is_fl = false;
                if witness.is_none() {
                    witness = Some(format!("sigma={sigma},root={r:?},pairing={v}"));
                }
            }
            if 2 * v >= p - 1 {
                is_strongly_fl = false;
                if witness.is_none() {
                    witness = Some(format!("sigma={sigma},root={r:?},pairing={v}"));
                }
            }
        }
    }
    let min_pairing_m = if datum.n_pos == 0 { None } else { Some(min_dominant_pairing(datum)?) };
    let uniqueness_certificate = match min_pairing_m {
        Some(m) => (p - 1) * m > 2 * h,
        None => true,
    };
    debug_assert!(!is_strongly_fl || is_fl);
    Ok(FLReport {
        group: datum.name.clone(),
        mu: mu.clone(),
        p,
        h_mu: h,
        is_fl,
        is_strongly_fl,
        min_pairing_m,
        uniqueness_certificate,
        witness,
    })
}

/// (p-1) * min_dominant_pairing > 2 h_mu: at most one G-Kisin lattice of
/// type <= mu.
pub fn uniqueness_certificate(datum: &RootDatum, mu: &MultiCoweight, p: i64) -> Result<bool> {
    Ok(check_fl(datum, mu, p)?.uniqueness_certificate)
}

#[derive(Debug, Clone)]
pub struct DimComparison {
    pub dim_mu: usize,
    pub dim_mu_prime: usize,
    pub ordering: Ordering,
    /// dim G + sum_sigma dim P_{mu_sigma} \ G.
    pub deformation_dim_mu: usize,
    pub deformation_dim_mu_prime: usize,
    /// dim P_mu \ G > dim P_mu' \ G: a crystalline lift of the mu'-stratum
    /// with type mu is obstructed.
    pub obstruction: bool,
}

pub fn dimension_comparison(
    datum: &RootDatum,
    mu: &MultiCoweight,
    mu_prime: &MultiCoweight,
) -> Result<DimComparison> {
    if mu.0.len() != mu_prime.0.len() {
        return Err(Error::DimensionMismatch { expected: mu.0.len(), got: mu_prime.0.len() });
    }
    for (a, b) in mu_prime.0.iter().zip(&mu.0) {
        if !datum.bruhat_leq(a, b)? {
            return Err(Error::NotComparable { mu_prime: mu_prime.to_string(), mu: mu.to_string() });
        }
    }
    let dim_mu: usize = mu
        .0
        .iter()
        .map(|c| datum.dim_parabolic_quotient(c))
        .sum::<Result<usize>>()?;
    let dim_mu_prime: usize = mu_prime
        .0
        .iter()
        .map(|c| datum.dim_parabolic_quotient(c))
        .sum::<Result<usize>>()?;
    Ok(DimComparison {
        dim_mu,
        dim_mu_prime,
        ordering: dim_mu.cmp(&dim_mu_prime),
        deformation_dim_mu: datum.dim_group() + dim_mu,
        deformation_dim_mu_prime: datum.dim_group() + dim_mu_prime,
        obstruction: dim_mu > dim_mu_prime,
    })
}

/// Enumerate dominant mu (one lift per central coset) with h_mu <= bound.
/// Used by the exhaustive verification grids.
pub fn dominant_mus_with_h_at_most(datum: &RootDatum, bound: i64) -> Vec<Coweight> {
    let q = CentralQuotient::new(datum);
    if q.dim == 0 {
        return vec![Coweight::zero(datum.rank)];
    }
    let rays = q.extreme_rays();
    // mu = sum t_i r_i with t_i >= 0; every ray has max-component pairing
    // >= 1, so t_i <= bound; box the coordinates accordingly
    let lo: Vec<i64> = (0..q.dim)
        .map(|j| rays.iter().map(|r| (bound * r[j]).min(0)).sum())
        .collect();
    let hi: Vec<i64> = (0..q.dim)
        .map(|j| rays.iter().map(|r| (bound * r[j]).max(0)).sum())
        .collect();
    let mut out = Vec::new();
    let mut v = lo.clone();
    'outer: loop {
        if q.in_cone(&v) {
            let lam = q.lift(&v);
            if datum.h_mu_single(&lam).unwrap() <= bound {
                out.push(lam);
            }
        }
        let mut i = 0;
        loop {
            if i == q.dim {
                break 'outer;
            }
            v[i] += 1;
            if v[i] <= hi[i] {
                break;
            }
            v[i] = lo[i];
            i += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdatum::{self, Coweight};

    fn cw(v: &[i64]) -> Coweight {
        Coweight(v.to_vec())
    }

    fn single(v: &[i64]) -> MultiCoweight {
        MultiCoweight::single(cw(v))
    }

    #[test]
    fn min_pairing_catalog() {
        assert_eq!(min_dominant_pairing(&rootdatum::sl(2).unwrap()).unwrap(), 2);
        assert_eq!(min_dominant_pairing(&rootdatum::pgl(2).unwrap()).unwrap(), 1);
        assert_eq!(min_dominant_pairing(&rootdatum::gl(2).unwrap()).unwrap(), 1);
        assert_eq!(min_dominant_pairing(&rootdatum::gl(3).unwrap()).unwrap(), 1);
        assert_eq!(min_dominant_pairing(&rootdatum::sp(4).unwrap()).unwrap(), 2);
        assert_eq!(min_dominant_pairing(&rootdatum::so(5).unwrap()).unwrap(), 1);
    }

    #[test]
    fn min_pairing_matches_box_oracle() {
        for d in rootdatum::catalog() {
            assert_eq!(
                min_dominant_pairing(&d).unwrap(),
                min_dominant_pairing_box(&d, 4).unwrap(),
                "group {}",
                d.name
            );
        }
    }

    #[test]
    fn minuscule_catalog() {
        assert!(minuscule_coweights(&rootdatum::sl(2).unwrap()).is_empty());
        assert!(minuscule_coweights(&rootdatum::sp(4).unwrap()).is_empty());
        assert!(minuscule_coweights(&rootdatum::sp(6).unwrap()).is_empty());
        assert!(minuscule_coweights(&rootdatum::g2().unwrap()).is_empty());
        assert_eq!(minuscule_coweights(&rootdatum::pgl(2).unwrap()), vec![cw(&[1])]);
        assert!(!minuscule_coweights(&rootdatum::pgl(3).unwrap()).is_empty());
        assert!(!minuscule_coweights(&rootdatum::so(4).unwrap()).is_empty());
        assert!(!minuscule_coweights(&rootdatum::so(6).unwrap()).is_empty());
    }

    #[test]
    fn check_fl_examples() {
        let d = rootdatum::gl(2).unwrap();
        let r = check_fl(&d, &single(&[2, 0]), 5).unwrap();
        assert!(r.is_fl && !r.is_strongly_fl);

        let r0 = check_fl(&d, &single(&[0, 0]), 5).unwrap();
        assert!(r0.is_fl && r0.is_strongly_fl);

        let s = rootdatum::sp(4).unwrap();
        let r = check_fl(&s, &single(&[2, 1]), 5).unwrap();
        assert_eq!(r.h_mu, 4);
        assert!(!r.is_fl);
        assert!(r.witness.is_some());
    }

    #[test]
    fn certificate_examples() {
        let s = rootdatum::sp(4).unwrap();
        assert!(uniqueness_certificate(&s, &single(&[1, 0]), 7).unwrap());
        let p = rootdatum::pgl(2).unwrap();
        // boundary case mu = (p-1)/2 in the PGL2 coweight lattice: h = 2,
        // (p-1) * 1 = 2 h exactly, so the certificate fails
        assert!(!uniqueness_certificate(&p, &single(&[2]), 5).unwrap());
        assert!(uniqueness_certificate(&p, &single(&[0]), 5).unwrap());
    }

    #[test]
    fn dimension_comparison_examples() {
        let d = rootdatum::gl(3).unwrap();
        let c = dimension_comparison(&d, &single(&[2, 1, 0]), &single(&[1, 1, 1])).unwrap();
        assert_eq!(c.dim_mu, 3);
        assert_eq!(c.dim_mu_prime, 0);
        assert!(c.obstruction);

        let eq = dimension_comparison(&d, &single(&[2, 1, 0]), &single(&[2, 1, 0])).unwrap();
        assert_eq!(eq.ordering, Ordering::Equal);
        assert!(!eq.obstruction);

        let g = rootdatum::gl(2).unwrap();
        let c2 = dimension_comparison(&g, &single(&[1, 0]), &single(&[1, 0])).unwrap();
        assert_eq!(c2.deformation_dim_mu, 4 + 1);

        assert!(dimension_comparison(&d, &single(&[1, 1, 1]), &single(&[2, 1, 0])).is_err());
    }

    #[test]
    fn fl_implications_small_grid() {
        // h_mu < (p-1)/2 forces the certificate (min pairing >= 1)
        for d in rootdatum::catalog() {
            for p in [5i64, 7, 11] {
                for mu in dominant_mus_with_h_at_most(&d, (p - 1) / 2 - 1) {
                    let r = check_fl(&d, &MultiCoweight::single(mu.clone()), p).unwrap();
                    assert!(r.uniqueness_certificate, "{} mu={mu} p={p}", d.name);
                }
            }
        }
    }

    #[test]
    fn fl_and_simply_connected_implies_certificate() {
        for d in rootdatum::catalog() {
            if !d.is_simply_connected() {
                continue;
            }
            for p in [5i64, 7] {
                for mu in dominant_mus_with_h_at_most(&d, p - 2) {
                    let r = check_fl(&d, &MultiCoweight::single(mu.clone()), p).unwrap();
                    assert!(r.is_fl);
                    assert!(r.uniqueness_certificate, "{} mu={mu} p={p}", d.name);
                }
            }
        }
    }

    #[test]
    fn enumeration_respects_h_bound() {
        let d = rootdatum::gl(2).unwrap();
        let mus = dominant_mus_with_h_at_most(&d, 2);
        // central coset representatives with h in {0,1,2}
        assert_eq!(mus.len(), 3);
        for mu in &mus {
            assert!(d.is_dominant(mu));
            assert!(d.h_mu_single(mu).unwrap() <= 2);
        }
    }
}
