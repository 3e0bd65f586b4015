//! `flcrys` command line: one verb per artifact, with human tables or
//! line-delimited records (schema=1). Exit codes: 0 all-pass, 1 check
//! failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use flcrys::acceptance;
use flcrys::flrange;
use flcrys::loopgr;
use flcrys::padic;
use flcrys::rootdatum::{self, Coweight, MultiCoweight, RootDatum};
use flcrys::schubert;
use flcrys::series::{valuation_at_p, TruncSeries};
use flcrys::Error;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "flcrys", version, about = "Exact computations around Fontaine-Laffaille smoothness criteria")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
}

#[derive(Args)]
struct OutputOpts {
    /// Output style: human table or machine records
    #[arg(long, value_enum, default_value = "table", global = false)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Root datum summary for a group spec (e.g. "GL(3)", "Sp(4)", "G2")
    GroupInfo {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Fontaine-Laffaille range membership and the uniqueness certificate
    Flcheck {
        #[arg(long)]
        group: String,
        /// coweights per embedding: "a1,a2;b1,b2"
        #[arg(long)]
        mu: String,
        #[arg(long)]
        p: i64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Minuscule coweights modulo center and the minimal dominant pairing
    Minuscule {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Just the uniqueness-certificate verdict
    Certificate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        p: i64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Compare open-cell dimensions for mu' <= mu
    Dimcheck {
        #[arg(long)]
        group: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        mu_prime: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Tangent upper bound V^mu_mu' and its monodromy cut
    SchubertTangent {
        #[arg(long)]
        group: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        mu_prime: String,
        #[arg(long)]
        p: i64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Verify smoothness data for every dominant mu' <= mu (exit 1 on failure)
    NablaSmooth {
        #[arg(long)]
        group: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        p: i64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// The lambda series (or phi^i lambda) as sparse rational triples
    Lambda {
        #[arg(long)]
        p: i64,
        #[arg(long, default_value_t = 30)]
        trunc: usize,
        #[arg(long, default_value_t = 0)]
        phi: u32,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Valuations of z_0 derivatives at u=p, with certificates
    Zvals {
        #[arg(long)]
        p: i64,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        h: i64,
        #[arg(long, default_value_t = 0)]
        i: u32,
        #[arg(long, default_value_t = 60)]
        trunc: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Telescoping identity on seeded random GL_2 instances (exit 1 on mismatch)
    Telescope {
        #[arg(long, default_value_t = 5)]
        p: i64,
        #[arg(long, default_value_t = 2)]
        h: i64,
        #[arg(long, default_value_t = 60)]
        trunc: usize,
        #[arg(long, default_value_t = 3)]
        steps: u32,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 99)]
        seed: u64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Mod-p monodromy condition for a Frobenius instance file (exit 1 on pole)
    ModpMono {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Shape (elementary divisors) of a Frobenius instance file
    Shape {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Randomized Cartan dominance inequality trials (exit 1 on violation)
    CartanTest {
        #[arg(long, default_value_t = 3)]
        q: u32,
        /// dominant coweight, e.g. "1,0"
        #[arg(long)]
        lam: String,
        #[arg(long)]
        om: String,
        /// optional third factor for the three-coset variant
        #[arg(long)]
        nu: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Enumerate Kisin lattices of type <= mu in a window (n = 2 only)
    KisinVariety {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        mu: String,
        #[arg(long, default_value_t = 1)]
        k: i64,
        /// the prime p of the u -> u^p Frobenius twist (defaults to q)
        #[arg(long)]
        p: Option<i64>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run the full acceptance suite (exit 1 unless all 8 criteria pass)
    Accept {
        #[command(flatten)]
        out: OutputOpts,
    },
}

fn parse_coweight(s: &str) -> Result<Coweight, Error> {
    let vals: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
    vals.map(Coweight).map_err(|_| Error::Parse(format!("bad coweight '{s}'")))
}

fn parse_multi(s: &str) -> Result<MultiCoweight, Error> {
    let parts: Result<Vec<Coweight>, _> = s.split(';').map(parse_coweight).collect();
    Ok(MultiCoweight(parts?))
}

fn datum_for(spec: &str) -> Result<RootDatum, Error> {
    rootdatum::build_root_datum(spec)
}

/// PGL(n) coweights may be given in GL(n) coordinates (one entry per
/// basis vector); the class maps to fundamental-coweight coordinates by
/// consecutive differences.
fn adapt_mu(datum: &RootDatum, mu: MultiCoweight) -> Result<MultiCoweight, Error> {
    let mut out = Vec::with_capacity(mu.0.len());
    for c in mu.0 {
        let c = if datum.name.starts_with("PGL(") && c.len() == datum.rank + 1 {
            Coweight(c.0.windows(2).map(|w| w[0] - w[1]).collect())
        } else {
            c
        };
        if c.len() != datum.rank {
            return Err(Error::DimensionMismatch { expected: datum.rank, got: c.len() });
        }
        out.push(c);
    }
    Ok(MultiCoweight(out))
}

fn series_lines(name: &str, s: &TruncSeries, fmt: Format) -> Vec<String> {
    match fmt {
        Format::Records => s
            .to_sparse()
            .iter()
            .map(|(n, num, den)| {
                format!("schema=1 kind=series name={name} degree={n} numer={num} denom={den}")
            })
            .collect(),
        Format::Table => {
            let mut out = vec![format!(
                "{name}: trunc degree {}, tail weight {}",
                s.trunc_degree(),
                s.tail_weight
            )];
            for (n, num, den) in s.to_sparse() {
                out.push(format!("  u^{n}: {num}/{den}"));
            }
            out
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::GroupInfo { group, out } => {
            let d = datum_for(&group)?;
            let weyl = d.weyl_group().len();
            match out.format {
                Format::Records => println!(
                    "schema=1 kind=groupinfo group={} rank={} positive_roots={} weyl_order={} z_der={} simply_connected={} dim={}",
                    d.name, d.rank, d.n_pos, weyl, d.z_der_order(), d.is_simply_connected(), d.dim_group()
                ),
                Format::Table => {
                    println!("group           {}", d.name);
                    println!("rank            {}", d.rank);
                    println!("positive roots  {}", d.n_pos);
                    println!("Weyl order      {weyl}");
                    println!("#Z^der          {}", d.z_der_order());
                    println!("simply conn.    {}", d.is_simply_connected());
                    println!("dim G           {}", d.dim_group());
                }
            }
            Ok(0)
        }
        Cmd::Flcheck { group, mu, p, out } => {
            let d = datum_for(&group)?;
            let mu = adapt_mu(&d, parse_multi(&mu)?)?;
            let rep = flrange::check_fl(&d, &mu, p)?;
            match out.format {
                Format::Records => println!("{}", rep.record()),
                Format::Table => {
                    println!("group {} mu {} p {}", rep.group, rep.mu, rep.p);
                    println!("h_mu               {}", rep.h_mu);
                    println!("fl                 {}", rep.is_fl);
                    println!("strongly_fl        {}", rep.is_strongly_fl);
                    println!(
                        "min pairing m      {}",
                        rep.min_pairing_m.map_or("-".into(), |m| m.to_string())
                    );
                    println!("certificate        {}", rep.uniqueness_certificate);
                    if let Some(w) = &rep.witness {
                        println!("witness            {w}");
                    }
                }
            }
            Ok(0)
        }
        Cmd::Minuscule { group, out } => {
            let d = datum_for(&group)?;
            let minis = flrange::minuscule_coweights(&d);
            let m = if d.n_pos == 0 { None } else { Some(flrange::min_dominant_pairing(&d)?) };
            match out.format {
                Format::Records => {
                    println!(
                        "schema=1 kind=minpairing group={} m={}",
                        d.name,
                        m.map_or("-".into(), |x| x.to_string())
                    );
                    for c in &minis {
                        println!("schema=1 kind=minuscule group={} coweight={c}", d.name);
                    }
                }
                Format::Table => {
                    println!(
                        "group {}: min dominant pairing {}",
                        d.name,
                        m.map_or("-".into(), |x| x.to_string())
                    );
                    if minis.is_empty() {
                        println!("no minuscule coweights modulo center");
                    }
                    for c in &minis {
                        println!("minuscule: {c}");
                    }
                }
            }
            Ok(0)
        }
        Cmd::Certificate { group, mu, p, out } => {
            let d = datum_for(&group)?;
            let mu = adapt_mu(&d, parse_multi(&mu)?)?;
            let cert = flrange::uniqueness_certificate(&d, &mu, p)?;
            match out.format {
                Format::Records => println!(
                    "schema=1 kind=certificate group={} mu={mu} p={p} certificate={cert}",
                    d.name
                ),
                Format::Table => println!("certificate: {cert}"),
            }
            Ok(0)
        }
        Cmd::Dimcheck { group, mu, mu_prime, out } => {
            let d = datum_for(&group)?;
            let mu = adapt_mu(&d, parse_multi(&mu)?)?;
            let mu_prime = adapt_mu(&d, parse_multi(&mu_prime)?)?;
            let cmp = flrange::dimension_comparison(&d, &mu, &mu_prime)?;
            match out.format {
                Format::Records => println!(
                    "schema=1 kind=dimcheck group={} mu={mu} mu_prime={mu_prime} dim_mu={} dim_mu_prime={} deformation_mu={} deformation_mu_prime={} obstruction={}",
                    d.name, cmp.dim_mu, cmp.dim_mu_prime, cmp.deformation_dim_mu,
                    cmp.deformation_dim_mu_prime, cmp.obstruction
                ),
                Format::Table => {
                    println!("dim P_mu\\G       {}", cmp.dim_mu);
                    println!("dim P_mu'\\G      {}", cmp.dim_mu_prime);
                    println!("deformation dims {} vs {}", cmp.deformation_dim_mu, cmp.deformation_dim_mu_prime);
                    println!("obstruction      {}", cmp.obstruction);
                }
            }
            Ok(0)
        }
        Cmd::SchubertTangent { group, mu, mu_prime, p, out } => {
            let d = datum_for(&group)?;
            let mu = adapt_mu(&d, parse_multi(&mu)?)?;
            let mu_prime = adapt_mu(&d, parse_multi(&mu_prime)?)?;
            if mu.0.len() != 1 || mu_prime.0.len() != 1 {
                return Err(Error::Parse("schubert-tangent expects a single embedding".into()));
            }
            let upper = schubert::ts_upper_bound(&d, &mu.0[0], &mu_prime.0[0])?;
            let cut = schubert::monodromy_cut(&d, &upper, &mu_prime.0[0], p)?;
            match out.format {
                Format::Records => println!(
                    "schema=1 kind=tangent group={} mu={mu} mu_prime={mu_prime} p={p} dim_upper={} dim_cut={}",
                    d.name,
                    upper.dim(),
                    cut.dim()
                ),
                Format::Table => {
                    println!("upper bound dim {}", upper.dim());
                    println!("monodromy cut dim {}", cut.dim());
                }
            }
            Ok(0)
        }
        Cmd::NablaSmooth { group, mu, p, out } => {
            let d = datum_for(&group)?;
            let mu = adapt_mu(&d, parse_multi(&mu)?)?;
            if mu.0.len() != 1 {
                return Err(Error::Parse("nabla-smooth expects a single embedding".into()));
            }
            let rep = schubert::verify_nabla_smoothness(&d, &mu.0[0], p)?;
            match out.format {
                Format::Records => {
                    for line in rep.records() {
                        println!("{line}");
                    }
                }
                Format::Table => {
                    for w in &rep.warnings {
                        println!("warning: {w}");
                    }
                    println!("{:<16} {:>8} {:>10} {:>6}", "mu'", "dim cut", "expected", "pass");
                    for s in &rep.strata {
                        println!(
                            "{:<16} {:>8} {:>10} {:>6}",
                            s.mu_prime.to_string(),
                            s.dim_cut,
                            s.dim_expected,
                            s.pass
                        );
                    }
                }
            }
            Ok(if rep.all_pass() { 0 } else { 1 })
        }
        Cmd::Lambda { p, trunc, phi, out } => {
            let s = padic::phi_lambda(p, phi, trunc);
            let name = if phi == 0 { "lambda".to_string() } else { format!("phi^{phi}(lambda)") };
            for line in series_lines(&name, &s, out.format) {
                println!("{line}");
            }
            Ok(0)
        }
        Cmd::Zvals { p, n_max, h, i, trunc, out } => {
            let z = padic::z_series(i, p, h, trunc)?;
            if out.format == Format::Table {
                println!("{:>3} {:>10} {:>10} {:>8}", "n", "v_p", "certified", "D");
            }
            for n in 0..=n_max {
                let cert = valuation_at_p(&z, n);
                match out.format {
                    Format::Records => println!(
                        "schema=1 kind=zval p={p} i={i} h={h} n={n} value={} certified={} d_used={}",
                        cert.value, cert.certified, cert.d_used
                    ),
                    Format::Table => println!(
                        "{n:>3} {:>10} {:>10} {:>8}",
                        cert.value, cert.certified, cert.d_used
                    ),
                }
            }
            Ok(0)
        }
        Cmd::Telescope { p, h, trunc, steps, samples, seed, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bad = 0usize;
            for t in 0..samples {
                let c = padic::random_frobenius(2, p, trunc, h, &mut rng);
                for step in padic::telescope_check(&c, h, steps)? {
                    match out.format {
                        Format::Records => println!(
                            "schema=1 kind=telescope trial={t} i={} compared_degree={} mismatches={}",
                            step.i, step.compared_degree, step.mismatches
                        ),
                        Format::Table => println!(
                            "trial {t} i={}: {} mismatches through degree {}",
                            step.i, step.mismatches, step.compared_degree
                        ),
                    }
                    bad += step.mismatches;
                }
            }
            Ok(if bad == 0 { 0 } else { 1 })
        }
        Cmd::ModpMono { file, out } => {
            let text = std::fs::read_to_string(&file)?;
            let inst = loopgr::frobenius_from_str(&text)?;
            let mut ok = true;
            for (sigma, m) in inst.matrices.iter().enumerate() {
                let rep = padic::modp_monodromy_check(m, 60)?;
                ok &= rep.ok;
                match out.format {
                    Format::Records => {
                        println!("schema=1 kind=modpmono sigma={sigma} ok={}", rep.ok);
                        for (i, j, ord) in &rep.defects {
                            println!(
                                "schema=1 kind=modpdefect sigma={sigma} row={i} col={j} pole_order={ord}"
                            );
                        }
                    }
                    Format::Table => {
                        println!("embedding {sigma}: pole-free = {}", rep.ok);
                        for (i, j, ord) in &rep.defects {
                            println!("  entry ({i},{j}): pole of order {ord}");
                        }
                    }
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Shape { file, out } => {
            let text = std::fs::read_to_string(&file)?;
            let inst = loopgr::frobenius_from_str(&text)?;
            let sh = loopgr::shape(&inst.matrices, inst.group)?;
            match out.format {
                Format::Records => println!("schema=1 kind=shape q={} shape={sh}", inst.q),
                Format::Table => println!("shape: {sh}"),
            }
            Ok(0)
        }
        Cmd::CartanTest { q, lam, om, nu, samples, seed, out } => {
            let lam = parse_coweight(&lam)?;
            let om = parse_coweight(&om)?;
            let nu = nu.map(|s| parse_coweight(&s)).transpose()?;
            let st = loopgr::cartan_product_check(q, &lam, &om, nu.as_ref(), samples, seed)?;
            match out.format {
                Format::Records => println!(
                    "schema=1 kind=cartantest q={q} samples={} failures={} shapes={}",
                    st.samples,
                    st.failures,
                    st.shapes_seen.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("|")
                ),
                Format::Table => {
                    println!("{} samples, {} dominance failures", st.samples, st.failures);
                    for c in &st.shapes_seen {
                        println!("  shape seen: {c}");
                    }
                }
            }
            Ok(if st.failures == 0 { 0 } else { 1 })
        }
        Cmd::KisinVariety { file, mu, k, p, budget, out } => {
            let text = std::fs::read_to_string(&file)?;
            let inst = loopgr::frobenius_from_str(&text)?;
            let mu = parse_multi(&mu)?;
            let p = p.unwrap_or(inst.q as i64);
            let pts = loopgr::kisin_variety_points(&inst.matrices, &mu, inst.group, k, p, budget)?;
            match out.format {
                Format::Records => {
                    println!(
                        "schema=1 kind=kisincount mu={mu} k={k} p={p} classes={} window_only=true",
                        pts.len()
                    );
                    for (i, c) in pts.iter().enumerate() {
                        println!("schema=1 kind=kisinclass index={i} basis={:?}", c.describe());
                    }
                }
                Format::Table => {
                    println!("{} lattice class(es) in the k={k} window (lower bound)", pts.len());
                    for c in &pts {
                        println!("  {}", c.describe());
                    }
                }
            }
            Ok(0)
        }
        Cmd::Accept { out } => {
            let results = acceptance::run_all();
            let mut ok = true;
            for r in &results {
                ok &= r.pass;
                match out.format {
                    Format::Records => println!("{}", r.record()),
                    Format::Table => println!("{}", r.line()),
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let usage = matches!(
                e,
                Error::Parse(_)
                    | Error::GroupSpec(_)
                    | Error::DimensionMismatch { .. }
                    | Error::Io(_)
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
