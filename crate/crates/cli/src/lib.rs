//! Command-line front end: argument model, suite runners and report rendering.
//!
//! Exit codes: 0 when every check passes, 1 on a check failure, 2 on a usage
//! or configuration error.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use qtriple::gns::{self, HalfInt};
use qtriple::isodeform::{self, Grading, Theta, TorusModel};
use qtriple::ncpoly::{Algebra, CanonicalMonomial, Letter, NcPoly, Parity, QParam};
use qtriple::rep::{self, TruncationSpec};
use qtriple::triple::{self, Check, DiracSpec};
use qtriple::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qtriple", version, about = "Unoriented spectral triple over quantum SO(3): normal forms, Haar state, GNS basis, Dirac spectra and θ-twists")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Deformation parameter, 0 < q < 1
    #[arg(long, global = true, default_value_t = 0.5)]
    pub q: f64,
    /// Twice the largest spin l
    #[arg(long, global = true, default_value_t = 3)]
    pub lmax2: i32,
    /// Fock-space truncation N_F
    #[arg(long, global = true, default_value_t = 16)]
    pub fock: usize,
    /// Half-width N_Z of the ℤ band
    #[arg(long, global = true, default_value_t = 8)]
    pub zband: usize,
    /// Interior margin μ
    #[arg(long, global = true, default_value_t = 2)]
    pub margin: usize,
    /// θ as "p/d" (exact mode, d | N) or a decimal
    #[arg(long, global = true, default_value = "1/4")]
    pub theta: String,
    /// Order N of the clock-and-shift model
    #[arg(long, global = true, default_value_t = 4)]
    pub n: usize,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical form of an expression
    Normalize { expr: String },
    /// Haar state of an expression, closed form and truncated
    Haar { expr: String },
    /// Sector Gram matrices of the canonical monomials
    Gram,
    /// Dirac spectrum, oriented and unoriented
    Spectrum,
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Orthonormal GNS basis as JSON
    DumpBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Relations,
    Gns,
    Parity,
    Covering,
    Triple,
    Deform,
}

/// Echoed at the top of every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub q: f64,
    pub lmax2: i32,
    pub fock_dim: usize,
    pub z_band: usize,
    pub margin: usize,
    pub theta: String,
    pub n: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub output_format: Format,
}

impl RunConfig {
    pub fn from_opts(o: &GlobalOpts) -> Result<RunConfig, Error> {
        QParam::new(o.q)?;
        if o.lmax2 < 0 {
            return Err(Error::InvalidLabel(format!("lmax2 must be nonnegative, got {}", o.lmax2)));
        }
        let tolerances = [
            ("relation", 1e-12),
            ("normal_form", 1e-10),
            ("orthonormality", 1e-10),
            ("overlap", 1e-8),
            ("lemma", 1e-13),
            ("commutator_change", 0.05),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Ok(RunConfig {
            q: o.q,
            lmax2: o.lmax2,
            fock_dim: o.fock,
            z_band: o.zband,
            margin: o.margin,
            theta: o.theta.clone(),
            n: o.n,
            seed: o.seed,
            tolerances,
            output_format: o.format,
        })
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    fn algebra(&self) -> Algebra {
        Algebra::new(QParam::new(self.q).expect("validated"))
    }

    fn lmax(&self) -> HalfInt {
        HalfInt::from_twice(self.lmax2)
    }

    fn truncation(&self) -> Result<TruncationSpec, Error> {
        TruncationSpec::new(self.fock_dim, self.z_band, self.margin)
    }
}

/// Rendered report with its exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

/// Errors that stem from the request rather than from a failed check.
pub fn is_config_error(e: &Error) -> bool {
    !matches!(e, Error::SingularGram { .. } | Error::CoveringFailed(_))
}

pub fn run(cli: &Cli) -> Outcome {
    let cfg = match RunConfig::from_opts(&cli.opts) {
        Ok(c) => c,
        Err(e) => return Outcome { text: format!("error: {e}\n"), code: EXIT_CONFIG },
    };
    log::info!("{:?} with seed {}", cli.command, cfg.seed);
    match dispatch(&cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            let code = if is_config_error(&e) { EXIT_CONFIG } else { EXIT_FAIL };
            Outcome { text: format!("error: {e}\n"), code }
        }
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, Error> {
    match cmd {
        Command::Normalize { expr } => cmd_normalize(expr, cfg),
        Command::Haar { expr } => cmd_haar(expr, cfg),
        Command::Gram => cmd_gram(cfg),
        Command::Spectrum => cmd_spectrum(cfg),
        Command::Verify { suite } => cmd_verify(*suite, cfg),
        Command::DumpBasis => cmd_dump_basis(cfg),
    }
}

fn pass(text: String) -> Outcome {
    Outcome { text, code: EXIT_PASS }
}

fn envelope(cfg: &RunConfig, body: Value) -> Value {
    let mut v = json!({ "config": cfg, "seed": cfg.seed });
    if let (Some(dst), Value::Object(src)) = (v.as_object_mut(), body) {
        dst.extend(src);
    }
    v
}

fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// CSV with a commented config header line.
fn to_csv<T: Serialize>(cfg: &RunConfig, rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("serializable row");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf8");
    format!("# config: {}\n{body}", serde_json::to_string(cfg).expect("serializable"))
}

fn cmd_normalize(expr: &str, cfg: &RunConfig) -> Result<Outcome, Error> {
    let alg = cfg.algebra();
    let p = alg.parse(expr)?;
    let parity = match p.parity() {
        Some(Parity::Even) => "even",
        Some(Parity::Odd) => "odd",
        None => "mixed",
    };
    let charges: Vec<(i32, i32)> = {
        let mut c: Vec<(i32, i32)> = p.terms().map(|(m, _)| m.charge()).collect();
        c.dedup();
        c
    };
    let text = match cfg.output_format {
        Format::Json => to_json(&envelope(
            cfg,
            json!({
                "input": expr,
                "canonical": p.ascii(),
                "degree": p.degree(),
                "parity": parity,
                "charges": charges,
                "poly": p.to_json(alg.q()),
            }),
        )),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                input: &'a str,
                canonical: String,
                degree: u32,
                parity: &'a str,
            }
            to_csv(cfg, &[Row { input: expr, canonical: p.ascii(), degree: p.degree(), parity }])
        }
    };
    Ok(pass(text))
}

fn cmd_haar(expr: &str, cfg: &RunConfig) -> Result<Outcome, Error> {
    let alg = cfg.algebra();
    let t = cfg.truncation()?;
    let p = alg.parse(expr)?;
    let exact = gns::haar_exact(&p, alg.q());
    let numeric = gns::haar_numeric(&p, &t, alg.q());
    let row = json!({
        "input": expr,
        "exact_re": exact.re, "exact_im": exact.im,
        "numeric_re": numeric.re, "numeric_im": numeric.im,
        "difference": (exact - numeric).norm(),
    });
    let text = match cfg.output_format {
        Format::Json => to_json(&envelope(cfg, row)),
        Format::Csv => to_csv(cfg, &[row]),
    };
    Ok(pass(text))
}

#[derive(Serialize)]
struct GramRow {
    c1: i32,
    c2: i32,
    depth: usize,
    row: usize,
    col: usize,
    value: f64,
}

fn cmd_gram(cfg: &RunConfig) -> Result<Outcome, Error> {
    let alg = cfg.algebra();
    let mut rows = Vec::new();
    let mut sectors = Vec::new();
    for ((c1, c2), depth) in gns::sectors(cfg.lmax()) {
        let g = gns::sector_gram(&alg, c1, c2, depth);
        for (i, r) in g.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                rows.push(GramRow { c1, c2, depth, row: i, col: j, value: v.re });
            }
        }
        sectors.push(json!({ "c1": c1, "c2": c2, "depth": depth, "gram": g.iter().map(|r| r.iter().map(|v| v.re).collect::<Vec<_>>()).collect::<Vec<_>>() }));
    }
    let text = match cfg.output_format {
        Format::Json => to_json(&envelope(cfg, json!({ "sectors": sectors }))),
        Format::Csv => to_csv(cfg, &rows),
    };
    Ok(pass(text))
}

#[derive(Serialize)]
struct SpectrumCsvRow {
    l2: i32,
    #[serde(rename = "j2-class")]
    j2_class: &'static str,
    eig: i64,
    mult: usize,
    sector: triple::Sector,
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome, Error> {
    let spec = DiracSpec::new(cfg.lmax());
    let text = match cfg.output_format {
        Format::Json => to_json(&envelope(
            cfg,
            json!({ "oriented": spec.spectrum(), "unoriented": spec.unoriented_spectrum(), "table": spec.spectrum_table() }),
        )),
        Format::Csv => {
            let rows: Vec<SpectrumCsvRow> = spec
                .spectrum_table()
                .into_iter()
                .map(|r| SpectrumCsvRow { l2: r.l2, j2_class: r.j_class.as_str(), eig: r.eig, mult: r.mult, sector: r.sector })
                .collect();
            to_csv(cfg, &rows)
        }
    };
    Ok(pass(text))
}

fn cmd_dump_basis(cfg: &RunConfig) -> Result<Outcome, Error> {
    let alg = cfg.algebra();
    let basis = gns::gram_schmidt_basis(&alg, cfg.lmax())?;
    let body = serde_json::to_value(basis.to_json()).expect("serializable");
    Ok(pass(to_json(&envelope(cfg, body))))
}

fn check(name: &str, value: f64, tolerance: f64, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), pass: value <= tolerance, detail: detail.into(), tolerance, value }
}

fn render_checks(cfg: &RunConfig, suite: Suite, checks: Vec<Check>, extra: Value) -> Outcome {
    let ok = checks.iter().all(|c| c.pass);
    let text = match cfg.output_format {
        Format::Json => {
            let mut body = json!({ "suite": suite, "pass": ok, "checks": checks });
            if let (Some(b), Value::Object(e)) = (body.as_object_mut(), extra) {
                b.extend(e);
            }
            to_json(&envelope(cfg, body))
        }
        Format::Csv => to_csv(cfg, &checks),
    };
    Outcome { text, code: if ok { EXIT_PASS } else { EXIT_FAIL } }
}

/// Words checked against the representation by `verify relations`.
pub const NORMAL_FORM_WORDS: usize = 200;
pub const NORMAL_FORM_MAX_LEN: usize = 8;

/// `2·lMax` values of the commutator-norm scan in `verify triple`.
pub const COMMUTATOR_LADDER: [i32; 4] = [3, 4, 5, 6];

fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<Outcome, Error> {
    let alg = cfg.algebra();
    match suite {
        Suite::Relations => {
            let t = cfg.truncation()?;
            let mut checks: Vec<Check> = rep::relation_residuals(&t, alg.q())?
                .into_iter()
                .map(|r| check(&format!("relation {}", r.name), r.residual, cfg.tol("relation"), format!("interior margin {}", r.margin)))
                .collect();
            let wide = TruncationSpec::new(t.fock_dim().max(NORMAL_FORM_MAX_LEN + t.interior_margin() + 4), t.z_band().max(NORMAL_FORM_MAX_LEN + t.interior_margin() + 2), t.interior_margin())?;
            let worst = rep::random_words(cfg.seed, NORMAL_FORM_WORDS, NORMAL_FORM_MAX_LEN)
                .iter()
                .map(|w| rep::normal_form_residual(&alg, w, &wide))
                .fold(0.0, f64::max);
            checks.push(check(
                "normal_form",
                worst,
                cfg.tol("normal_form"),
                format!("{NORMAL_FORM_WORDS} random words of length ≤ {NORMAL_FORM_MAX_LEN}, N_F = {}, N_Z = {}", wide.fock_dim(), wide.z_band()),
            ));
            Ok(render_checks(cfg, suite, checks, json!({})))
        }
        Suite::Gns => {
            let lmax = cfg.lmax();
            let basis = gns::gram_schmidt_basis(&alg, lmax)?;
            let mut checks = vec![check("orthonormality", basis.orthonormality_error(&alg), cfg.tol("orthonormality"), format!("{} vectors", basis.len()))];
            let bad_counts = basis
                .counts_by_l()
                .iter()
                .filter(|(l, n)| **n != ((l.twice() + 1) * (l.twice() + 1)) as usize)
                .count();
            checks.push(check("completeness", bad_counts as f64, 0.0, "vectors per l equal (2l+1)^2"));
            let mut worst: f64 = 0.0;
            for label in basis.labels() {
                let t = gns::t_matrix(&alg, label)?;
                worst = worst.max(1.0 - gns::gns_inner(&alg, &t, &basis.get(&label).expect("label").poly).norm());
            }
            checks.push(check("t_matrix_overlap", worst, cfg.tol("overlap"), "1 - |<t, e>| against Gram-Schmidt"));
            let t = cfg.truncation()?;
            let q = alg.q().value();
            let bound = 10.0 * q.powi(2 * t.fock_dim() as i32);
            let haar = CanonicalMonomial::up_to_degree(6)
                .into_iter()
                .map(|m| {
                    let p = NcPoly::monomial(m);
                    (gns::haar_exact(&p, alg.q()) - gns::haar_numeric(&p, &t, alg.q())).norm()
                })
                .fold(0.0, f64::max);
            checks.push(check("haar_exact_vs_numeric", haar, bound, "monomials of degree ≤ 6, bound 10 q^(2 N_F)"));
            Ok(render_checks(cfg, suite, checks, json!({})))
        }
        Suite::Parity => {
            let basis = gns::gram_schmidt_basis(&alg, cfg.lmax())?;
            let report = triple::check_parity(&basis)?;
            let groups: Vec<Value> = report
                .by_l_and_j()
                .into_iter()
                .map(|(l2, j2, count, ok)| {
                    json!({ "l2": l2, "j2": j2, "labels": count, "parity": if l2 % 2 == 0 { 1 } else { -1 }, "pass": ok })
                })
                .collect();
            let failures = report.entries.iter().filter(|e| !e.pass).count();
            let checks = vec![check("parity", failures as f64, 0.0, format!("z2Act(e) = (-1)^(2l) e on {} vectors", report.entries.len()))];
            Ok(render_checks(cfg, suite, checks, json!({ "labels": groups })))
        }
        Suite::Covering => {
            let cert = triple::certify_covering(&alg, 8)?;
            let mut checks = vec![check(
                "decompositions",
                0.0,
                0.0,
                format!("{} odd and {} even monomials up to degree {}", cert.odd_count(), cert.even_count, cert.max_degree_checked),
            )];
            let mut rng = StdRng::seed_from_u64(cfg.seed);
            let moved = (0..100)
                .filter(|_| {
                    let a = triple::random_poly(&mut rng, 3, None, 3);
                    let b = triple::random_poly(&mut rng, 3, None, 3);
                    let p = triple::hilbert_module_product(&alg, &a, &b);
                    p.z2_act() != p
                })
                .count();
            checks.push(check("module_product_fixed", moved as f64, 0.0, "100 random pairs"));
            Ok(render_checks(cfg, suite, checks, json!({ "generators": ["α", "α*", "β", "β*"] })))
        }
        Suite::Triple => {
            let report = triple::assemble_unoriented_triple(&alg, cfg.lmax(), cfg.seed)?;
            let mut checks = report.checks;
            for g in [Letter::Alpha, Letter::Beta] {
                let scan = triple::commutator_norm_scan(&alg, &NcPoly::generator(g), &COMMUTATOR_LADDER)?;
                let (prev, last) = (scan[scan.len() - 2].1, scan[scan.len() - 1].1);
                let norms: Vec<String> = scan.iter().map(|(l2, v)| format!("{l2}: {v:.6}")).collect();
                checks.push(check(
                    &format!("commutator_{}", g.ascii()),
                    (last - prev).abs() / prev,
                    cfg.tol("commutator_change"),
                    format!("relative change of ||[D, pi({g})]|| over the last step; by lmax2 {}", norms.join(", ")),
                ));
            }
            Ok(render_checks(cfg, suite, checks, json!({ "spectrum": report.spectrum })))
        }
        Suite::Deform => {
            let theta: Theta = cfg.theta.parse()?;
            let model = TorusModel::new(cfg.n, theta)?;
            let tol = if model.is_exact() { cfg.tol("lemma") } else { 1e-12 };
            let table = isodeform::lemma_scan(&model);
            let mut checks = Vec::new();
            for lemma in ["a", "b", "b_right"] {
                let worst = table.iter().filter(|r| r.lemma == lemma).map(|r| r.residual).fold(0.0, f64::max);
                checks.push(check(&format!("lemma_{lemma}"), worst, tol, "max over generator pairs"));
            }
            checks.push(check("associativity", isodeform::associativity_residual(&model), tol, "x*(y*z) = (x*y)*z over generator triples"));
            let d = model.p1() + model.p2();
            checks.extend(isodeform::twisted_triple_check(&model, &d, &Grading::Total)?);
            Ok(render_checks(cfg, suite, checks, json!({ "residuals": table })))
        }
    }
}
