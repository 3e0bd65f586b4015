//! Loop-group elements over F_q((u)) for GL_n and PGL_n: Cartan
//! decomposition via elementary divisors, shapes, randomized Cartan
//! inequalities, and brute-force Kisin-variety enumeration for n = 2.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::laurent::{Fq, LaurentPoly, LoopMatrix};
use crate::rootdatum::{self, Coweight, MultiCoweight};

/// Which quotient the shape lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeGroup {
    Gl,
    Pgl,
}

impl ShapeGroup {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        if t.starts_with("GL") {
            Ok(ShapeGroup::Gl)
        } else if t.starts_with("PGL") {
            Ok(ShapeGroup::Pgl)
        } else {
            Err(Error::GroupSpec(format!("shape group must be GL(n) or PGL(n), got {s}")))
        }
    }
}

/// The unique dominant (a_1 >= ... >= a_n) with A in K u^(a) K,
/// K = GL_n(F_q[[u]]). Computed exactly from minor valuations: the k-th
/// partial sum a_n + ... + a_{n-k+1} is the minimal valuation over k x k
/// minors, which is invariant under the two-sided K-action.
pub fn elementary_divisors(a: &LoopMatrix) -> Result<Coweight> {
    let deltas = a.minor_valuations()?;
    let n = a.n;
    let mut asc = Vec::with_capacity(n);
    let mut prev = 0i64;
    for (k, &d) in deltas.iter().enumerate() {
        let e = d - prev;
        if k > 0 && e < asc[k - 1] {
            // partial minima of minors always produce an ascending profile
            return Err(Error::Singular);
        }
        asc.push(e);
        prev = d;
    }
    asc.reverse();
    Ok(Coweight(asc))
}

/// Canonical representative of a PGL_n coweight class: shift by the
/// scalar cocharacter so the minimal entry becomes 0.
pub fn pgl_normalize(c: &Coweight) -> Coweight {
    let m = c.0.iter().copied().min().unwrap_or(0);
    Coweight(c.0.iter().map(|&x| x - m).collect())
}

/// Dominance in the PGL_n coweight lattice: classes [a] <= [b] iff some
/// scalar shift of a is GL-dominance-below b. The shift is forced by the
/// coordinate sums (coroots are sum-zero).
pub fn pgl_leq(a: &Coweight, b: &Coweight) -> Result<bool> {
    let n = a.len() as i64;
    if b.len() as i64 != n {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    let sa: i64 = a.0.iter().sum();
    let sb: i64 = b.0.iter().sum();
    if (sb - sa) % n != 0 {
        return Ok(false);
    }
    let d = (sb - sa) / n;
    let shifted = Coweight(a.0.iter().map(|&x| x + d).collect());
    let datum = rootdatum::gl(a.len())?;
    datum.bruhat_leq(&datum.dominant_conjugate(&shifted), &datum.dominant_conjugate(b))
}

/// Componentwise elementary divisors of a per-embedding tuple; PGL
/// shapes are normalized to the canonical class representative.
pub fn shape(cs: &[LoopMatrix], group: ShapeGroup) -> Result<MultiCoweight> {
    let mut out = Vec::with_capacity(cs.len());
    for c in cs {
        let d = elementary_divisors(c)?;
        out.push(match group {
            ShapeGroup::Gl => d,
            ShapeGroup::Pgl => pgl_normalize(&d),
        });
    }
    Ok(MultiCoweight(out))
}

/// Componentwise "type <= mu" in the relevant coweight lattice.
pub fn shape_leq(shape: &MultiCoweight, mu: &MultiCoweight, group: ShapeGroup) -> Result<bool> {
    if shape.0.len() != mu.0.len() {
        return Err(Error::DimensionMismatch { expected: mu.0.len(), got: shape.0.len() });
    }
    for (a, b) in shape.0.iter().zip(mu.0.iter()) {
        let ok = match group {
            ShapeGroup::Gl => {
                let datum = rootdatum::gl(a.len())?;
                datum.bruhat_leq(&datum.dominant_conjugate(a), &datum.dominant_conjugate(b))?
            }
            ShapeGroup::Pgl => pgl_leq(a, b)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random element of GL_n(F_q[[u]]) with polynomial entries of degree
/// <= deg and invertible constant term (so det has u-valuation 0).
pub fn random_k(n: usize, field: Fq, deg: usize, rng: &mut ChaCha8Rng) -> LoopMatrix {
    loop {
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            let coeffs: Vec<u32> = (0..=deg).map(|_| rng.gen_range(0..field.q)).collect();
            entries.push(LaurentPoly::from_coeffs(0, coeffs, field));
        }
        let m = LoopMatrix::new(n, field, entries);
        if m.det().valuation() == Some(0) {
            return m;
        }
    }
}

/// Truncated inverse of an invertible loop matrix via the adjugate and a
/// series inverse of the determinant; entries are exact up to a tail of
/// u-valuation >= (cutoff implied by prec), which is enough to read off
/// minor valuations in bounded regimes.
pub fn approx_inverse(a: &LoopMatrix, prec: usize) -> Result<LoopMatrix> {
    let n = a.n;
    let f = a.field;
    let det = a.det();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let det_inv = det.inverse_series(prec, f);
    let mut entries = vec![LaurentPoly::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            // cofactor of (j, i), transposed into (i, j)
            let sub: Vec<&LaurentPoly> = (0..n)
                .filter(|&r| r != j)
                .flat_map(|r| (0..n).filter(|&c| c != i).map(move |c| a.at(r, c)))
                .collect();
            let mut cof = if n == 1 {
                LaurentPoly::one(f)
            } else {
                LoopMatrix::new(n - 1, f, sub.into_iter().cloned().collect()).det()
            };
            if (i + j) % 2 == 1 {
                cof = cof.neg(f);
            }
            entries[i * n + j] = cof.mul(&det_inv, f);
        }
    }
    Ok(LoopMatrix::new(n, f, entries))
}

/// Statistics from the randomized Cartan-inequality trials.
#[derive(Debug, Clone)]
pub struct CartanStats {
    pub samples: usize,
    pub failures: usize,
    pub shapes_seen: Vec<Coweight>,
}

/// For random K-elements, checks shape(K1 u^lam K2 u^om K3) <= lam + om
/// in dominance; with `nu` present, the three-coset variant
/// shape(... u^nu K4) <= lam + om + nu.
pub fn cartan_product_check(
    q: u32,
    lam: &Coweight,
    om: &Coweight,
    nu: Option<&Coweight>,
    samples: usize,
    seed: u64,
) -> Result<CartanStats> {
    let n = lam.len();
    if om.len() != n || nu.map_or(false, |v| v.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: om.len() });
    }
    let field = Fq::new(q);
    let datum = rootdatum::gl(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut shapes_seen: Vec<Coweight> = Vec::new();
    let mut bound: Vec<i64> = lam.0.iter().zip(&om.0).map(|(a, b)| a + b).collect();
    if let Some(v) = nu {
        for (b, x) in bound.iter_mut().zip(&v.0) {
            *b += x;
        }
    }
    let bound = datum.dominant_conjugate(&Coweight(bound));
    for _ in 0..samples {
        let mut m = random_k(n, field, 2, &mut rng);
        m = m.mul(&LoopMatrix::u_power(&lam.0, field));
        m = m.mul(&random_k(n, field, 2, &mut rng));
        m = m.mul(&LoopMatrix::u_power(&om.0, field));
        m = m.mul(&random_k(n, field, 2, &mut rng));
        if let Some(v) = nu {
            m = m.mul(&LoopMatrix::u_power(&v.0, field));
            m = m.mul(&random_k(n, field, 2, &mut rng));
        }
        let sh = elementary_divisors(&m)?;
        if !datum.bruhat_leq(&sh, &bound)? {
            failures += 1;
        }
        if !shapes_seen.contains(&sh) {
            shapes_seen.push(sh);
        }
    }
    Ok(CartanStats { samples, failures, shapes_seen })
}

/// Hermite-reduced basis data for a rank-2 lattice D over F_q[[u]]:
/// column generators (u^a, f) and (0, u^b) with f reduced mod u^b.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HermiteData {
    pub a: i64,
    pub b: i64,
    pub f: LaurentPoly,
}

impl HermiteData {
    pub fn basis_matrix(&self, field: Fq) -> LoopMatrix {
        LoopMatrix::new(
            2,
            field,
            vec![
                LaurentPoly::monomial(1, self.a, field),
                LaurentPoly::zero(),
                self.f.clone(),
                LaurentPoly::monomial(1, self.b, field),
            ],
        )
    }

    /// Shift the lattice by u^c (the scalar action for PGL classes).
    pub fn shift(&self, c: i64) -> Self {
        HermiteData { a: self.a + c, b: self.b + c, f: self.f.shift(c) }
    }
}

/// Canonical Hermite data of the column span of an invertible 2x2 basis
/// matrix over F_q((u)).
pub fn hermite_canon(basis: &LoopMatrix, prec: usize) -> Result<HermiteData> {
    if basis.n != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: basis.n });
    }
    let f = basis.field;
    let det = basis.det();
    let det_val = det.valuation().ok_or(Error::Singular)?;
    let vals: Vec<Option<i64>> = vec![basis.at(0, 0).valuation(), basis.at(0, 1).valuation()];
    let a = vals.iter().flatten().copied().min().ok_or(Error::Singular)?;
    let b = det_val - a;
    let j = if vals[0] == Some(a) { 0 } else { 1 };
    // the generator with first coordinate exactly u^a is
    // column_j * (B_0j / u^a)^{-1}; its second coordinate mod u^b is f
    let inv = basis.at(0, j).inverse_series(prec, f); // approx B_0j^{-1}
    let fpoly = basis.at(1, j).mul(&inv, f).shift(a).truncate_above(b);
    Ok(HermiteData { a, b, f: fpoly })
}

/// A lattice class: per-embedding Hermite data, in canonical form. For
/// PGL the tuple is additionally normalized by the diagonal u-shift so
/// the first embedding has min(a, b) = 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeClass {
    pub data: Vec<HermiteData>,
    pub group: ShapeGroup,
}

impl LatticeClass {
    pub fn new(data: Vec<HermiteData>, group: ShapeGroup) -> Self {
        let data = match group {
            ShapeGroup::Gl => data,
            ShapeGroup::Pgl => {
                let m = data[0].a.min(data[0].b);
                data.iter().map(|h| h.shift(-m)).collect()
            }
        };
        LatticeClass { data, group }
    }

    pub fn describe(&self) -> String {
        self.data
            .iter()
            .map(|h| format!("[u^{} 0; {} u^{}]", h.a, h.f.to_string_u(), h.b))
            .collect::<Vec<_>>()
            .join(" ; ")
    }
}

/// All lattice classes D with u^k std <= D <= u^{-k} std such that the
/// conjugated Frobenius B^{-1} Cbar phi(B) has shape <= mu, for n = 2.
/// phi substitutes u -> u^p and rotates the embedding index.
pub fn kisin_variety_points(
    cbars: &[LoopMatrix],
    mu: &MultiCoweight,
    group: ShapeGroup,
    k: i64,
    p: i64,
    budget: usize,
) -> Result<Vec<LatticeClass>> {
    if cbars.is_empty() || cbars.iter().any(|c| c.n != 2) {
        return Err(Error::DimensionMismatch { expected: 2, got: cbars.first().map_or(0, |c| c.n) });
    }
    if mu.0.len() != cbars.len() {
        return Err(Error::DimensionMismatch { expected: cbars.len(), got: mu.0.len() });
    }
    if !(0..=2).contains(&k) {
        return Err(Error::Budget(format!("lattice window k={k} exceeds the supported k <= 2")));
    }
    let field = cbars[0].field;
    let nemb = cbars.len();
    let candidates = enumerate_window(field, k);
    let total = candidates.len().checked_pow(nemb as u32).ok_or_else(|| {
        Error::Budget("candidate tuple count overflows".into())
    })?;
    if total > budget {
        return Err(Error::Budget(format!(
            "enumeration of {total} lattice tuples exceeds budget {budget}"
        )));
    }
    let prec = (6 * k + 16) as usize;
    let mut found: Vec<LatticeClass> = Vec::new();
    let mut idx = vec![0usize; nemb];
    loop {
        let tuple: Vec<&HermiteData> = idx.iter().map(|&i| &candidates[i]).collect();
        let mut conj = Vec::with_capacity(nemb);
        let mut ok = true;
        for s in 0..nemb {
            let prev = (s + nemb - 1) % nemb;
            let binv = hermite_inverse(tuple[s], field);
            let bphi = tuple[prev].basis_matrix(field).substitute_power(p);
            let c = binv.mul(&cbars[s]).mul(&bphi);
            if c.det().is_zero() {
                ok = false;
                break;
            }
            conj.push(c);
        }
        if ok {
            let sh = shape(&conj, group)?;
            if shape_leq(&sh, mu, group)? {
                let canon: Vec<HermiteData> = tuple
                    .iter()
                    .map(|h| hermite_canon(&h.basis_matrix(field), prec))
                    .collect::<Result<_>>()?;
                let class = LatticeClass::new(canon, group);
                if !found.contains(&class) {
                    found.push(class);
                }
            }
        }
        // odometer over the per-embedding candidate index
        let mut carry = 0;
        while carry < nemb {
            idx[carry] += 1;
            if idx[carry] < candidates.len() {
                break;
            }
            idx[carry] = 0;
            carry += 1;
        }
        if carry == nemb {
            break;
        }
    }
    Ok(found)
}

/// Exact inverse of a Hermite basis matrix: [[u^-a, 0], [-f u^{-a-b}, u^-b]].
fn hermite_inverse(h: &HermiteData, field: Fq) -> LoopMatrix {
    LoopMatrix::new(
        2,
        field,
        vec![
            LaurentPoly::monomial(1, -h.a, field),
            LaurentPoly::zero(),
            h.f.neg(field).shift(-h.a - h.b),
            LaurentPoly::monomial(1, -h.b, field),
        ],
    )
}

/// All Hermite data (a, b, f) whose lattice D satisfies
/// u^k std <= D <= u^{-k} std: a, b in [-k, k] and f supported on
/// degrees [max(-k, a+b-k), b-1].
fn enumerate_window(field: Fq, k: i64) -> Vec<HermiteData> {
    let mut out = Vec::new();
    for a in -k..=k {
        for b in -k..=k {
            let lo = (a + b - k).max(-k);
            let hi = b; // exclusive
            let span = (hi - lo).max(0) as usize;
            let combos = (field.q as u64).pow(span as u32);
            for code in 0..combos {
                let mut c = code;
                let mut coeffs = vec![0u32; span];
                for x in coeffs.iter_mut() {
                    *x = (c % field.q as u64) as u32;
                    c /= field.q as u64;
                }
                let f = LaurentPoly::from_coeffs(lo, coeffs, field);
                out.push(HermiteData { a, b, f });
            }
        }
    }
    out
}

/// Parsed Frobenius instance: group tag, q, and per-embedding matrices.
#[derive(Debug, Clone)]
pub struct FrobeniusInstance {
    pub group: ShapeGroup,
    pub n: usize,
    pub q: u32,
    pub matrices: Vec<LoopMatrix>,
}

/// Structured-text format, one directive per line:
///   group GL(2) | PGL(2)
///   q 5
///   embeddings 1
///   entry SIGMA ROW COL DEGREE COEFF      (repeatable; additive)
/// Blank lines and '#' comments are skipped.
pub fn frobenius_from_str(text: &str) -> Result<FrobeniusInstance> {
    let mut group = None;
    let mut n = 2usize;
    let mut q = None;
    let mut nemb = None;
    let mut entries: Vec<(usize, usize, usize, i64, i64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let key = it.next().unwrap();
        let rest: Vec<&str> = it.collect();
        let bad = |m: &str| Error::Parse(format!("line {}: {m}", lineno + 1));
        match key {
            "group" => {
                let spec = rest.join(" ");
                group = Some(ShapeGroup::parse(&spec)?);
                if let Some(open) = spec.find('(') {
                    let inner = spec[open + 1..].trim_end_matches(')');
                    n = inner.parse().map_err(|_| bad("bad rank in group spec"))?;
                }
            }
            "q" => {
                q = Some(
                    rest.first()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad("q expects a prime"))?,
                )
            }
            "embeddings" => {
                nemb = Some(
                    rest.first()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad("embeddings expects a count"))?,
                )
            }
            "entry" => {
                if rest.len() != 5 {
                    return Err(bad("entry expects: sigma row col degree coeff"));
                }
                let v: Vec<i64> = rest
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad("entry fields must be integers")))
                    .collect::<Result<_>>()?;
                entries.push((v[0] as usize, v[1] as usize, v[2] as usize, v[3], v[4]));
            }
            other => return Err(bad(&format!("unknown directive '{other}'"))),
        }
    }
    let group = group.ok_or_else(|| Error::Parse("missing 'group' directive".into()))?;
    let q = q.ok_or_else(|| Error::Parse("missing 'q' directive".into()))?;
    let nemb: usize = nemb.unwrap_or(1);
    let field = Fq::new(q);
    let mut matrices = vec![LoopMatrix::new(n, field, vec![LaurentPoly::zero(); n * n]); nemb];
    for (s, r, c, d, coeff) in entries {
        if s >= nemb || r >= n || c >= n {
            return Err(Error::Parse(format!("entry index out of range: sigma={s} row={r} col={c}")));
        }
        let add = LaurentPoly::monomial(field.from_i64(coeff), d, field);
        let cur = matrices[s].at(r, c).add(&add, field);
        matrices[s].set(r, c, cur);
    }
    Ok(FrobeniusInstance { group, n, q, matrices })
}
