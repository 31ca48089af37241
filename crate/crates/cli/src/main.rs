use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use knotcover::hyperbolic::{
    audit_records, enumerate_short_slopes, normalize_cusp, normalized_threshold, parse_census,
    vcsc_length_bound, AuditConfig, CuspRecord, AUDIT_TSV_HEADER,
};
use knotcover::moser::{
    classify_surgery, find_surgery_slopes, surgery_fibration, SurgeryKind, SurgeryTarget,
};
use knotcover::orbifold::{perm_cover_oracle, table_covers, verify_tables, DEFAULT_BUDGET};
use knotcover::par::Exec;
use knotcover::sfscover::{
    decide_cover_with, fastpath_admits, torus_main_fastpath, CoverCertificate, CoverDecision,
    DecideOptions, Obstruction,
};
use knotcover::{Error, Orbifold2, Slope, TorusKnot};

#[derive(Parser, Debug)]
#[command(name = "knotcover", version, about = "Covers between Dehn surgeries on torus knots")]
struct Cli {
    /// Largest degree handed to the permutation search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Tolerance for ingested volumes.
    #[arg(long, global = true, default_value_t = knotcover::hyperbolic::VOLUME_TOLERANCE)]
    tolerance: f64,
    /// Largest q searched when realizing lens spaces.
    #[arg(long, global = true, default_value_t = 8)]
    qmax: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classify p/q surgery on T(r,s).
    #[command(allow_negative_numbers = true)]
    Classify { r: u64, s: u64, p: i64, q: i64 },
    /// Seifert invariants of p/q surgery on T(r,s).
    #[command(allow_negative_numbers = true)]
    Invariants { r: u64, s: u64, p: i64, q: i64 },
    /// Decide whether p/q surgery covers p'/q' surgery on T(r,s).
    #[command(allow_negative_numbers = true)]
    Cover {
        r: u64,
        s: u64,
        p: i64,
        q: i64,
        p2: i64,
        q2: i64,
        /// Print the certificate or obstruction in full.
        #[arg(long)]
        certificate: bool,
        /// Also evaluate the closed-form criterion.
        #[arg(long)]
        fastpath: bool,
    },
    /// Orbifold covers of a base orbifold in one degree, e.g. `orb-covers 2,3,7 7`.
    OrbCovers { base: String, degree: u64 },
    /// Compare the permutation search against the cover tables.
    VerifyTables {
        max_degree: Option<u64>,
        #[arg(long = "max-degree", conflicts_with = "max_degree")]
        max_degree_flag: Option<u64>,
        /// Only the listed sporadic rows, skipping the grid.
        #[arg(long)]
        targeted: bool,
        /// Also list covers with more than three cone points.
        #[arg(long)]
        verbose: bool,
    },
    /// Slopes on T(r,s) whose surgery is the given `{b;(a,b),...}` or `L(p,q)`.
    #[command(allow_negative_numbers = true)]
    Realize { r: u64, s: u64, target: String },
    /// Short slopes of each record in a census file.
    ShortSlopes {
        file: PathBuf,
        /// Length bound on a cusp of area at least 2√3.
        #[arg(long)]
        k: Option<f64>,
    },
    /// Volume and homology audit of each record in a census file.
    Audit { file: PathBuf },
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
struct Config {
    oracle_degree_budget: u64,
    lens_q_bound: u64,
    volume_tolerance: f64,
    output_format: Format,
}

impl Config {
    fn from_cli(cli: &Cli) -> Result<Config, Failure> {
        if cli.budget == 0 || cli.qmax == 0 {
            return Err(Failure::usage("--budget and --qmax must be positive"));
        }
        if !(cli.tolerance > 0.0) {
            return Err(Failure::usage("--tolerance must be positive"));
        }
        Ok(Config {
            oracle_degree_budget: cli.budget,
            lens_q_bound: cli.qmax,
            volume_tolerance: cli.tolerance,
            output_format: cli.format,
        })
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure { code: 1, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if matches!(e, Error::BudgetExceeded { .. }) { 3 } else { 1 };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn knot_slope(r: u64, s: u64, p: i64, q: i64) -> Result<(TorusKnot, Slope), Failure> {
    if q <= 0 {
        return Err(Failure::usage(format!("q must be positive, got {q}")));
    }
    Ok((TorusKnot::new(r, s)?, Slope::new(p, q)?))
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let cfg = Config::from_cli(cli)?;
    let mut out = String::new();
    match &cli.cmd {
        Cmd::Classify { r, s, p, q } => {
            let (k, slope) = knot_slope(*r, *s, *p, *q)?;
            writeln!(out, "{}", classify_surgery(&k, &slope)?).unwrap();
        }
        Cmd::Invariants { r, s, p, q } => {
            let (k, slope) = knot_slope(*r, *s, *p, *q)?;
            let m = surgery_fibration(&k, &slope)?;
            writeln!(out, "{m}").unwrap();
            writeln!(out, "base {}", m.base_orbifold()).unwrap();
            writeln!(out, "euler {}", m.euler_number()).unwrap();
            writeln!(out, "h1 {}", m.h1_order()).unwrap();
            if let SurgeryKind::Lens(l) = classify_surgery(&k, &slope)?.kind {
                writeln!(out, "lens {l}").unwrap();
            }
        }
        Cmd::Cover { r, s, p, q, p2, q2, certificate, fastpath } => {
            let (k, cover) = knot_slope(*r, *s, *p, *q)?;
            let (_, base) = knot_slope(*r, *s, *p2, *q2)?;
            let opts = DecideOptions { witness_budget: cfg.oracle_degree_budget };
            let decision = decide_cover_with(&k, &cover, &base, opts)?;
            let (nc, nb) = (k.framing_defect(&cover), k.framing_defect(&base));
            match &decision {
                CoverDecision::Covers(c) => {
                    writeln!(
                        out,
                        "COVERS degree {} (fiberwise {} × orbifold {})",
                        c.total_degree, c.fiberwise_degree, c.orbifold_degree
                    )
                    .unwrap();
                    if *certificate {
                        write_certificate(&mut out, c);
                    }
                }
                CoverDecision::NoCover(o) => {
                    let orbifold_level =
                        matches!(o, Obstruction::ChiMismatch | Obstruction::NoOrbifoldCover);
                    if orbifold_level && nc.magnitude() != nb.magnitude() {
                        writeln!(out, "NO (|rsq−p| mismatch)").unwrap();
                    } else {
                        writeln!(out, "NO ({o})").unwrap();
                    }
                    if *certificate {
                        writeln!(out, "obstruction {o:?}").unwrap();
                    }
                }
            }
            if *fastpath {
                if fastpath_admits(&k) {
                    match torus_main_fastpath(&k, &cover, &base)? {
                        Some(d) => writeln!(out, "fastpath degree {d}").unwrap(),
                        None => writeln!(out, "fastpath none").unwrap(),
                    }
                } else {
                    writeln!(out, "fastpath not applicable to {k}").unwrap();
                }
            }
        }
        Cmd::OrbCovers { base, degree } => {
            let base: Orbifold2 = base.parse()?;
            let found = perm_cover_oracle(&base, *degree, cfg.oracle_degree_budget)?;
            let tables = table_covers(&base, *degree);
            for c in &found {
                let rules: Vec<String> = tables
                    .get(&c.cover)
                    .map(|hits| hits.iter().map(|h| h.rule.to_string()).collect())
                    .unwrap_or_default();
                let tag = if rules.is_empty() { "-".to_string() } else { rules.join("; ") };
                match cfg.output_format {
                    Format::Text => writeln!(out, "{} {}  [{tag}]", c.cover, c.witness).unwrap(),
                    Format::Tsv => writeln!(out, "{}\t{}\t{tag}", c.cover, c.witness).unwrap(),
                }
            }
            if found.is_empty() {
                writeln!(out, "no covers of {base} in degree {degree}").unwrap();
            }
        }
        Cmd::VerifyTables { max_degree, max_degree_flag, targeted, verbose } => {
            let Some(max) = max_degree.or(*max_degree_flag) else {
                return Err(Failure::usage("give a maximum degree"));
            };
            if max == 0 {
                return Err(Failure::usage("maximum degree must be positive"));
            }
            let report = verify_tables(max, *targeted, cfg.oracle_degree_budget)?;
            if *verbose {
                writeln!(out, "{report:#}").unwrap();
            } else {
                writeln!(out, "{report}").unwrap();
            }
            return Ok((out, if report.passed() { 0 } else { 1 }));
        }
        Cmd::Realize { r, s, target } => {
            let k = TorusKnot::new(*r, *s)?;
            let target: SurgeryTarget = target.parse()?;
            let found = find_surgery_slopes(&k, &target, cfg.lens_q_bound);
            if found.is_empty() {
                writeln!(out, "not realized on {k}").unwrap();
            }
            for slope in found {
                writeln!(out, "{slope}").unwrap();
            }
        }
        Cmd::ShortSlopes { file, k } => {
            let k = k.unwrap_or_else(vcsc_length_bound);
            if !(k > 0.0) {
                return Err(Failure::usage("--k must be positive"));
            }
            let (records, code) = load_census(file)?;
            for rec in records {
                let cusp = normalize_cusp(rec.cusp_shape)?;
                let short = enumerate_short_slopes(&cusp, normalized_threshold(k))?;
                let slopes: Vec<String> = short.iter().map(|s| s.slope.to_string()).collect();
                match cfg.output_format {
                    Format::Text => writeln!(
                        out,
                        "{}: {} short slopes: {}",
                        rec.knot_name,
                        short.len(),
                        slopes.join(" ")
                    )
                    .unwrap(),
                    Format::Tsv => {
                        for s in &short {
                            writeln!(out, "{}\t{}\t{:.9}", rec.knot_name, s.slope, s.length).unwrap();
                        }
                    }
                }
            }
            return Ok((out, code));
        }
        Cmd::Audit { file } => {
            let (records, mut code) = load_census(file)?;
            let acfg = AuditConfig { volume_tolerance: cfg.volume_tolerance, ..Default::default() };
            if cfg.output_format == Format::Tsv {
                writeln!(out, "{AUDIT_TSV_HEADER}").unwrap();
            }
            for rep in audit_records(&records, &acfg, Exec::default()) {
                let rep = match rep {
                    Ok(r) => r,
                    Err(e) => {
                        eprintln!("warning: {e}");
                        continue;
                    }
                };
                match cfg.output_format {
                    Format::Tsv => {
                        for row in &rep.rows {
                            writeln!(out, "{}", row.tsv()).unwrap();
                        }
                    }
                    Format::Text => {
                        for row in &rep.rows[..rep.rows.len() - 1] {
                            writeln!(
                                out,
                                "{}: base {} cover {}: {}: {}",
                                row.knot, row.base, row.cover, row.status, row.reason
                            )
                            .unwrap();
                        }
                        let last = rep.rows.last().expect("summary row");
                        writeln!(out, "{}: {}: {}", rep.knot, last.status, last.reason).unwrap();
                    }
                }
                if !rep.verified() && code == 0 {
                    code = 1;
                }
            }
            return Ok((out, code));
        }
    }
    Ok((out, 0))
}

fn write_certificate(out: &mut String, c: &CoverCertificate) {
    writeln!(out, "cover orbifold {}", c.cover_orbifold).unwrap();
    writeln!(out, "orbifold degree {}", c.orbifold_degree).unwrap();
    if let Some(sys) = &c.partition_system {
        writeln!(out, "partitions {sys}").unwrap();
    }
    if let Some(w) = &c.perm_witness {
        writeln!(out, "witness {w}").unwrap();
    }
    if let Some(m) = &c.intermediate {
        writeln!(out, "intermediate {m}").unwrap();
    }
    writeln!(out, "fiberwise degree {}", c.fiberwise_degree).unwrap();
}

/// Reads a census file, warning about bad records. Fails with code 2 when
/// no record survives; the returned code is 0 otherwise.
fn load_census(path: &PathBuf) -> Result<(Vec<CuspRecord>, u8), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let mut good = Vec::new();
    let mut bad = 0;
    for rec in parse_census(&text) {
        match rec {
            Ok(r) => good.push(r),
            Err(e) => {
                eprintln!("warning: {}: {e}", path.display());
                bad += 1;
            }
        }
    }
    if good.is_empty() {
        return Err(Failure {
            code: 2,
            message: format!("{}: no valid records ({bad} rejected)", path.display()),
        });
    }
    Ok((good, 0))
}
