//! The acceptance suite: eight self-contained checks shared by the CLI
//! `accept` subcommand and the integration test harness. Each criterion
//! returns a pass/fail verdict plus a short human-readable summary.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::flrange;
use crate::laurent::{Fq, LoopMatrix};
use crate::loopgr::{self, ShapeGroup};
use crate::padic;
use crate::rootdatum::{self, Coweight, IsogenyTag, MultiCoweight};
use crate::schubert;
use crate::series::valuation_at_p;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {}",
            self.index,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }

    pub fn record(&self) -> String {
        format!(
            "schema=1 kind=acceptance index={} name={} pass={} detail={:?}",
            self.index,
            self.name.replace(' ', "_"),
            self.pass,
            self.detail
        )
    }
}

fn finish(index: usize, name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    match body() {
        Ok((pass, detail)) => CriterionResult { index, name, pass, detail },
        Err(e) => CriterionResult { index, name, pass: false, detail: format!("error: {e}") },
    }
}

/// 1. Monodromy-locus smoothness: exhaustive strata dims over the catalog.
pub fn criterion_monodromy_smoothness() -> CriterionResult {
    finish(1, "monodromy smoothness grid", || {
        let mut strata = 0usize;
        let mut groups = 0usize;
        for datum in rootdatum::catalog() {
            for p in [3i64, 5, 7] {
                let z = datum.z_der_order() as i64;
                let gl_exempt = matches!(datum.isogeny_tag, IsogenyTag::GlLike);
                if z % p == 0 && !gl_exempt {
                    continue;
                }
                groups += 1;
                for mu in flrange::dominant_mus_with_h_at_most(&datum, p - 1) {
                    let rep = schubert::verify_nabla_smoothness(&datum, &mu, p)?;
                    if !rep.warnings.is_empty() {
                        return Ok((false, format!("{} p={p} mu={mu}: {:?}", datum.name, rep.warnings)));
                    }
                    for s in &rep.strata {
                        strata += 1;
                        if !s.pass {
                            return Ok((
                                false,
                                format!(
                                    "{} p={p} mu={mu} mu'={}: dim {} != {}",
                                    datum.name, s.mu_prime, s.dim_cut, s.dim_expected
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Ok((true, format!("{strata} strata across {groups} (group,p) grids, all dims match")))
    })
}

/// 2. Valuation lemma for z_0, the phi-images of lambda, and z_i floors,
/// certified at two truncation degrees.
pub fn criterion_valuations() -> CriterionResult {
    finish(2, "z-series valuation lemma", || {
        let mut checks = 0usize;
        for p in [3i64, 5, 7] {
            for d in [60usize, 120] {
                let z0 = padic::z_series(0, p, 2, d)?;
                let expected: Vec<i64> = std::iter::once(0)
                    .chain(std::iter::once(-1))
                    .chain((2..p).map(|n| p - n))
                    .collect();
                for (n, want) in expected.iter().enumerate() {
                    let cert = valuation_at_p(&z0, n);
                    checks += 1;
                    if !cert.certified || cert.value != *want {
                        return Ok((
                            false,
                            format!("p={p} D={d}: v_p(z0^({n})|_p) = {:?}, want {want}", cert),
                        ));
                    }
                }
                for i in [1u32, 2] {
                    let cert = valuation_at_p(&padic::phi_lambda(p, i, d), 0);
                    checks += 1;
                    if !cert.certified || cert.value != 0 {
                        return Ok((false, format!("p={p} D={d}: phi^{i}(lambda)|_p not a unit")));
                    }
                    for h in [1i64, 2, 3] {
                        let z = padic::z_series(i, p, h, d)?;
                        let bound = p.pow(i) - i as i64 * (h - 1) - 1;
                        let cert = valuation_at_p(&z, 0);
                        checks += 1;
                        if cert.value < bound {
                            return Ok((
                                false,
                                format!("p={p} i={i} h={h} D={d}: floor {} < {bound}", cert.value),
                            ));
                        }
                    }
                }
            }
        }
        Ok((true, format!("{checks} valuation certificates, stable at D and 2D")))
    })
}

/// 3. Telescoping identity on seeded random GL_2 Frobenius instances.
pub fn criterion_telescoping() -> CriterionResult {
    finish(3, "telescoping identity", || {
        let p = 5;
        let d = 60;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut compared = 0usize;
        for trial in 0..20 {
            let h = 1 + (trial as i64 % 3);
            let c = padic::random_frobenius(2, p, d, h, &mut rng);
            for step in padic::telescope_check(&c, h, 3)? {
                compared += step.compared_degree + 1;
                if step.mismatches != 0 {
                    return Ok((
                        false,
                        format!("trial {trial} h={h} i={}: {} mismatches", step.i, step.mismatches),
                    ));
                }
            }
        }
        Ok((true, format!("20 instances, i <= 3, {compared} exact coefficient columns agree")))
    })
}

/// 4. L1 integrality on seeded random GL_2/GL_3 instances.
pub fn criterion_l1_integrality() -> CriterionResult {
    finish(4, "L1 integrality", || {
        let p = 5;
        let d = 24;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..100 {
            let n = if trial % 2 == 0 { 2 } else { 3 };
            let h = 1 + (trial as i64 % 3);
            let c = padic::random_frobenius(n, p, d, h, &mut rng);
            if !padic::l1(&c, h)?.is_integral() {
                return Ok((false, format!("trial {trial} (GL_{n}, h={h}): L1 has a pole")));
            }
        }
        Ok((true, "100 random height-bounded instances, no E(u)-poles".into()))
    })
}

/// 5. PGL_2 two-lattice reproduction and the GL_2 uniqueness bound.
pub fn criterion_kisin_lattices() -> CriterionResult {
    finish(5, "Kisin lattice counts", || {
        let f5 = Fq::new(5);
        let mu_pgl = MultiCoweight(vec![Coweight(vec![2, 0])]);
        let pgl = loopgr::kisin_variety_points(
            &[LoopMatrix::u_power(&[2, 0], f5)],
            &mu_pgl,
            ShapeGroup::Pgl,
            1,
            5,
            1_000_000,
        )?;
        if pgl.len() < 2 {
            return Ok((false, format!("PGL_2 window found {} classes, want >= 2", pgl.len())));
        }
        let f7 = Fq::new(7);
        let datum = rootdatum::gl(2)?;
        let mu_gl = MultiCoweight(vec![Coweight(vec![1, 0])]);
        if !flrange::uniqueness_certificate(&datum, &mu_gl, 7)? {
            return Ok((false, "expected the GL_2 mu=(1,0), p=7 certificate to hold".into()));
        }
        let gl = loopgr::kisin_variety_points(
            &[LoopMatrix::u_power(&[1, 0], f7)],
            &mu_gl,
            ShapeGroup::Gl,
            1,
            7,
            5_000_000,
        )?;
        if gl.len() > 1 {
            return Ok((false, format!("GL_2 strongly-FL window found {} classes, want <= 1", gl.len())));
        }
        Ok((true, format!("PGL_2: {} classes (>= 2); GL_2 strongly-FL: {} (<= 1)", pgl.len(), gl.len())))
    })
}

/// 6. Uniqueness-certificate logic over the catalog mu-box, plus the
/// PGL_2 boundary counterexample.
pub fn criterion_certificate_logic() -> CriterionResult {
    finish(6, "uniqueness certificate logic", || {
        let mut checked = 0usize;
        for datum in rootdatum::catalog() {
            for p in [5i64, 7] {
                for mu in flrange::dominant_mus_with_h_at_most(&datum, 2 * (p - 1)) {
                    let rep = flrange::check_fl(&datum, &MultiCoweight::single(mu.clone()), p)?;
                    checked += 1;
                    if rep.is_strongly_fl && !rep.uniqueness_certificate {
                        return Ok((
                            false,
                            format!("{} p={p} mu={mu}: strongly FL without certificate", datum.name),
                        ));
                    }
                    if rep.is_fl && datum.is_simply_connected() && !rep.uniqueness_certificate {
                        return Ok((
                            false,
                            format!("{} p={p} mu={mu}: FL + simply connected without certificate", datum.name),
                        ));
                    }
                }
            }
        }
        for p in [5i64, 7] {
            let pgl2 = rootdatum::pgl(2)?;
            let mu = MultiCoweight(vec![Coweight(vec![(p - 1) / 2])]);
            let rep = flrange::check_fl(&pgl2, &mu, p)?;
            if rep.uniqueness_certificate || !rep.is_fl || rep.is_strongly_fl {
                return Ok((
                    false,
                    format!(
                        "PGL(2) boundary p={p}: fl={} strongly={} cert={}",
                        rep.is_fl, rep.is_strongly_fl, rep.uniqueness_certificate
                    ),
                ));
            }
        }
        Ok((true, format!("{checked} (group,p,mu) cells; boundary counterexample confirmed")))
    })
}

/// 7. Cartan dominance inequalities and divisor invariance, randomized.
pub fn criterion_cartan_random() -> CriterionResult {
    finish(7, "Cartan coset inequalities", || {
        let mut trials = 0usize;
        for (n, q) in [(2usize, 3u32), (2, 5), (3, 3)] {
            let lam = Coweight((0..n as i64).map(|i| i64::from(i == 0)).collect());
            let om = Coweight((0..n).map(|i| if i == n - 1 { -1 } else { 0 }).collect());
            let two = loopgr::cartan_product_check(q, &lam, &lam, None, 500, 1000 + n as u64)?;
            let three =
                loopgr::cartan_product_check(q, &lam, &om, Some(&lam), 500, 2000 + n as u64)?;
            if two.failures + three.failures > 0 {
                return Ok((
                    false,
                    format!("(n={n},q={q}): {}+{} dominance failures", two.failures, three.failures),
                ));
            }
            trials += two.samples + three.samples;
            // divisor invariance under 500 K-dressings of a fixed core
            let field = Fq::new(q);
            let mut rng = ChaCha8Rng::seed_from_u64(3000 + n as u64);
            let mut core: Vec<i64> = vec![0; n];
            core[0] = 2;
            core[n - 1] = -1;
            let want = loopgr::elementary_divisors(&LoopMatrix::u_power(&core, field))?;
            for t in 0..500 {
                let m = loopgr::random_k(n, field, 2, &mut rng)
                    .mul(&LoopMatrix::u_power(&core, field))
                    .mul(&loopgr::random_k(n, field, 2, &mut rng));
                if loopgr::elementary_divisors(&m)? != want {
                    return Ok((false, format!("(n={n},q={q}) trial {t}: divisors not invariant")));
                }
                trials += 1;
            }
        }
        Ok((true, format!("{trials} randomized trials, zero violations")))
    })
}

/// 8. Partial-order axioms and Weyl invariance in rank <= 2 boxes.
pub fn criterion_order_axioms() -> CriterionResult {
    finish(8, "order and Weyl axioms", || {
        let mut checked = 0usize;
        for datum in rootdatum::catalog().into_iter().filter(|d| d.rank <= 2) {
            let bound = 3i64;
            let mut box_pts: Vec<Coweight> = Vec::new();
            let mut idx = vec![-bound; datum.rank];
            loop {
                box_pts.push(Coweight(idx.clone()));
                let mut k = 0;
                while k < datum.rank {
                    idx[k] += 1;
                    if idx[k] <= bound {
                        break;
                    }
                    idx[k] = -bound;
                    k += 1;
                }
                if k == datum.rank {
                    break;
                }
            }
            let weyl = datum.weyl_group();
            for a in &box_pts {
                for w in &weyl {
                    let moved = datum.apply_weyl(w, a);
                    if datum.dominant_conjugate(&moved) != datum.dominant_conjugate(a) {
                        return Ok((false, format!("{}: Weyl invariance fails at {a}", datum.name)));
                    }
                }
                checked += 1;
            }
            // the dominance order is an order on dominant coweights
            let box_pts: Vec<Coweight> =
                box_pts.into_iter().filter(|a| datum.is_dominant(a)).collect();
            for a in &box_pts {
                if !datum.bruhat_leq(a, a)? {
                    return Ok((false, format!("{}: reflexivity fails at {a}", datum.name)));
                }
            }
            let leq: Vec<Vec<bool>> = box_pts
                .iter()
                .map(|a| box_pts.iter().map(|b| datum.bruhat_leq(a, b).unwrap_or(false)).collect())
                .collect();
            for (i, a) in box_pts.iter().enumerate() {
                for (j, b) in box_pts.iter().enumerate() {
                    if leq[i][j] && leq[j][i] && a != b {
                        return Ok((false, format!("{}: antisymmetry fails {a} vs {b}", datum.name)));
                    }
                    if !leq[i][j] {
                        continue;
                    }
                    for k in 0..box_pts.len() {
                        if leq[j][k] && !leq[i][k] {
                            return Ok((
                                false,
                                format!("{}: transitivity fails {a} <= {b} <= {}", datum.name, box_pts[k]),
                            ));
                        }
                    }
                }
            }
        }
        Ok((true, format!("{checked} box points per-group verified with full Weyl orbits")))
    })
}

/// Run the whole suite in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_monodromy_smoothness(),
        criterion_valuations(),
        criterion_telescoping(),
        criterion_l1_integrality(),
        criterion_kisin_lattices(),
        criterion_certificate_logic(),
        criterion_cartan_random(),
        criterion_order_axioms(),
    ]
}
