//! Command-line front end: every subcommand emits one JSON report on
//! stdout, bulk data (census CSV, modulus tables, function tables) goes to
//! `--out` paths, and exit codes are 0 = pass, 1 = contract or claim
//! failure, 2 = usage error.

mod report;
mod selftest;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use apnforge::census::{
    fiber_census, find_good_mu, langweil_trend, table1_mu, verify_prop_almost, verify_relationni,
};
use apnforge::field::{dump_moduli, make_field, make_field_with_modulus, parse_moduli};
use apnforge::variety::{
    curve_points, fixture_h2, h2_no_low_degree_factor, langweil_threshold, verify_appendix,
    weil_interval, BoundParams,
};
use apnforge::{Fe, FieldCtx};
use report::{ReportBuilder, RunReport, Status};

#[derive(Parser)]
#[command(
    name = "apnforge",
    version,
    about = "Kernel censuses, APN certification, and curve point counts for the trinomial family over GF(2^{3m})"
)]
struct Cli {
    /// Worker threads for the data-parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every sampled (non-exhaustive) check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field-level utilities (canonical modulus table).
    Field {
        /// Emit the modulus table, one `n<TAB>hex` line per degree.
        #[arg(long)]
        dump_moduli: bool,
        /// Write the table to a file instead of embedding it in the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-norm-class kernel-dimension census plus the counting identities.
    Census {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: u32,
        /// CSV output path (`alpha_hex,n0,n1,n2,n3` rows plus TOTAL).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a permutation parameter with norm outside {0, 1}.
    FindMu {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value_t = Strategy::Exhaustive)]
        strategy: Strategy,
    },
    /// Certify the differential uniformity of the candidate family.
    Apn {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: u32,
        /// Parameter mu as hex.
        #[arg(long)]
        mu: String,
        /// Subfield unit v as hex, or `all` to sweep every v.
        #[arg(long, default_value = "all")]
        v: String,
        /// Optional path for the function table of the last swept v.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the resultant pipeline and the plane-section curve.
    Appendix {
        /// Also count curve points over GF(8^k) for k = 1..=curve-k.
        #[arg(long, default_value_t = 0)]
        curve_k: u32,
    },
    /// Explicit point-count threshold for given degree and dimension.
    Bound {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        dim: u32,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Exhaustive,
    Table1,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

/// Field construction honoring APNFORGE_MODULI: entries of the external
/// table override the canonical modulus for their degree.
fn field_for(n: u32) -> anyhow::Result<FieldCtx> {
    if let Ok(path) = std::env::var("APNFORGE_MODULI") {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("APNFORGE_MODULI: cannot read {path}"))?;
        let table = parse_moduli(&text).context("APNFORGE_MODULI: bad table")?;
        if let Some(&(_, modulus)) = table.iter().find(|&&(deg, _)| deg == n) {
            return Ok(make_field_with_modulus(n, modulus)?);
        }
    }
    Ok(make_field(n)?)
}

fn parse_fe(hex: &str, ctx: &FieldCtx) -> anyhow::Result<Fe> {
    let v = u64::from_str_radix(hex.trim_start_matches("0x"), 16)
        .with_context(|| format!("malformed hex `{hex}`"))?;
    if v >= ctx.size() {
        bail!("0x{v:x} is not an element of GF(2^{})", ctx.degree());
    }
    Ok(Fe(v))
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

fn cmd_field(dump: bool, out: Option<PathBuf>) -> anyhow::Result<RunReport> {
    let rb = ReportBuilder::new("field").param("dump_moduli", dump);
    if !dump {
        bail!("nothing to do: pass --dump-moduli");
    }
    let table = dump_moduli(48)?;
    let results = match out {
        Some(path) => {
            std::fs::write(&path, &table)?;
            json!({ "moduli_path": path, "degrees": 48 })
        }
        None => json!({ "moduli": table, "degrees": 48 }),
    };
    Ok(rb.finish(results, Status::Pass))
}

fn cmd_census(m: u32, s: u32, out: Option<PathBuf>) -> anyhow::Result<RunReport> {
    let rb = ReportBuilder::new("census").param("m", m).param("s", s);
    let ctx = field_for(3 * m)?;
    let census = fiber_census(&ctx, m, s)?;
    let almost = verify_prop_almost(&census, ctx.size());
    let relation = verify_relationni(&census);
    let trend = langweil_trend(&census);
    // the per-class identity is a theorem only under gcd(s+m, 3m) = 1;
    // outside that hypothesis it is reported but not asserted
    let relation_asserted = gcd((s + m) as u64, 3 * m as u64) == 1;
    let csv = census.to_csv();
    let csv_path = match out {
        Some(path) => {
            std::fs::write(&path, &csv)?;
            Some(path)
        }
        None => None,
    };
    // the trend envelope tracks the s = 1 curve bound only
    let pass =
        almost.pass && (!relation_asserted || relation.pass) && (s != 1 || trend.envelope_ok);
    let results = json!({
        "classes": census.per_alpha.len(),
        "total": census.total,
        "max_dim": census.max_dim,
        "almost": almost,
        "relation": relation,
        "relation_asserted": relation_asserted,
        "trend": trend,
        "csv_path": csv_path,
    });
    Ok(rb.finish(results, if pass { Status::Pass } else { Status::Fail }))
}

fn cmd_find_mu(m: u32, s: u32, strategy: Strategy) -> anyhow::Result<RunReport> {
    let rb = ReportBuilder::new("find-mu")
        .param("m", m)
        .param("s", s)
        .param(
            "strategy",
            match strategy {
                Strategy::Exhaustive => "exhaustive",
                Strategy::Table1 => "table1",
            },
        );
    let ctx = field_for(3 * m)?;
    match strategy {
        Strategy::Exhaustive => {
            let good = find_good_mu(&ctx, m, s)?;
            Ok(rb.finish(good.to_json(), Status::Pass))
        }
        Strategy::Table1 => match table1_mu(&ctx, m, s)? {
            Some(good) => Ok(rb.finish(good.to_json(), Status::Pass)),
            None => Ok(rb.finish(
                json!({ "matched_row": false, "note": "no Table-1 row covers (m, s); the exhaustive strategy remains available" }),
                Status::Partial,
            )),
        },
    }
}

fn cmd_apn(m: u32, s: u32, mu: &str, v: &str, out: Option<PathBuf>) -> anyhow::Result<RunReport> {
    let rb = ReportBuilder::new("apn")
        .param("m", m)
        .param("s", s)
        .param("mu", mu)
        .param("v", v);
    let ctx = field_for(3 * m)?;
    let mu = parse_fe(mu, &ctx)?;
    if v == "all" {
        let report = apnforge::apn::certify_family(&ctx, m, s, mu, 0)?;
        // --out captures the table of the last swept v
        let table_path = match (&out, report.per_v.last()) {
            (Some(path), Some(&(v_enc, _))) => {
                let table = apnforge::apn::build_candidate(&ctx, m, s, mu, Fe(v_enc))?;
                let mut file = std::fs::File::create(path)?;
                table.write_binary(&mut file)?;
                Some(path.clone())
            }
            _ => None,
        };
        let status = if report.claim_apn {
            Status::Pass
        } else {
            Status::Fail
        };
        return Ok(rb.finish(
            json!({ "family": report, "table_path": table_path }),
            status,
        ));
    }
    let v = parse_fe(v, &ctx)?;
    let table = apnforge::apn::build_candidate(&ctx, m, s, mu, v)?;
    let spectrum = apnforge::apn::diff_uniformity(&table);
    if let Some(path) = &out {
        let mut file = std::fs::File::create(path)?;
        table.write_binary(&mut file)?;
    }
    let norm = ctx.rel_norm(m, mu)?;
    let permutation_ok = apnforge::linpoly::make_f_mu(&ctx, m, s, mu)?.is_permutation();
    let hypotheses_ok = norm != Fe::ONE && permutation_ok && gcd(s as u64, m as u64) == 1;
    let claim = hypotheses_ok && spectrum.is_apn();
    let results = json!({
        "delta": spectrum.max_solutions,
        "histogram": spectrum.histogram,
        "norm_hex": format!("{:x}", norm.0),
        "hypotheses_ok": hypotheses_ok,
        "claim_apn": claim,
        "table_path": out,
    });
    Ok(rb.finish(results, if claim { Status::Pass } else { Status::Fail }))
}

fn cmd_appendix(curve_k: u32, seed: u64) -> anyhow::Result<RunReport> {
    let rb = ReportBuilder::new("appendix").param("curve_k", curve_k);
    let report = verify_appendix(10_000, seed)?;
    let low_degree_free = h2_no_low_degree_factor()?;
    let mut counts = Vec::new();
    if curve_k > 0 {
        let gf8 = make_field(3)?;
        let h2 = fixture_h2(&gf8);
        for k in 1..=curve_k {
            let n = curve_points(&h2, k)?;
            let q = 8u64.pow(k);
            let (lo, hi) = weil_interval(26, q);
            // the interval separates irreducible behavior only once
            // 600 sqrt(q) < q, i.e. k >= 7
            let informative = k >= 7;
            counts.push(json!({
                "k": k,
                "q": q,
                "points": n,
                "weil_interval": [lo, hi],
                "informative": informative,
                "inside": n >= lo && n <= hi,
            }));
        }
    }
    let informative_ok = counts
        .iter()
        .filter(|c| c["informative"] == json!(true))
        .all(|c| c["inside"] == json!(true));
    let pass = report.pass && low_degree_free && informative_ok;
    let results = json!({
        "appendix": report,
        "h2_low_degree_factor_free": low_degree_free,
        "curve_counts": counts,
    });
    Ok(rb.finish(results, if pass { Status::Pass } else { Status::Fail }))
}

fn cmd_bound(d: u64, dim: u32) -> anyhow::Result<RunReport> {
    let rb = ReportBuilder::new("bound").param("d", d).param("dim", dim);
    let report = langweil_threshold(&BoundParams::new(d, dim));
    let m_star = report.m_star;
    // 47 is the reference value for the degree-1248, dimension-3 instance;
    // a neighboring exact result is a documented deviation, not a failure
    let deviation = (d, dim) == (1248, 3) && m_star != Some(47);
    let pass = m_star.is_some() && report.monotone;
    let results = json!({
        "m_star": m_star,
        "m_dominant": report.m_dominant,
        "ceil_d_13_3": report.d_13_3,
        "monotone": report.monotone,
        "documented_deviation_from_47": deviation,
        "rows": report.rows,
    });
    Ok(rb.finish(results, if pass { Status::Pass } else { Status::Fail }))
}

fn cmd_selftest(level: Level, seed: u64) -> anyhow::Result<RunReport> {
    let rb = ReportBuilder::new("selftest").param(
        "level",
        match level {
            Level::Quick => "quick",
            Level::Full => "full",
        },
    );
    let items = selftest::run(level, seed)?;
    let pass = items.iter().all(|i| i.pass);
    Ok(rb.finish(
        json!({ "items": items }),
        if pass { Status::Pass } else { Status::Fail },
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("apnforge: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let seed = cli.seed;
    let outcome = match cli.command {
        Command::Field { dump_moduli, out } => cmd_field(dump_moduli, out),
        Command::Census { m, s, out } => cmd_census(m, s, out),
        Command::FindMu { m, s, strategy } => cmd_find_mu(m, s, strategy),
        Command::Apn { m, s, mu, v, out } => cmd_apn(m, s, &mu, &v, out),
        Command::Appendix { curve_k } => cmd_appendix(curve_k, seed),
        Command::Bound { d, dim } => cmd_bound(d, dim),
        Command::Selftest { level } => cmd_selftest(level, seed),
    };
    match outcome {
        Ok(report) => ExitCode::from(report.emit() as u8),
        Err(e) => {
            if let Some(lib) = e.downcast_ref::<apnforge::Error>() {
                if is_contract_failure(lib) {
                    let mut params = BTreeMap::new();
                    params.insert("error".to_string(), json!(lib.to_string()));
                    let report = RunReport {
                        schema: 1,
                        command: "error".into(),
                        params,
                        results: json!({}),
                        status: Status::Fail,
                        elapsed: 0.0,
                    };
                    return ExitCode::from(report.emit() as u8);
                }
            }
            // malformed values and unsupported parameters are usage errors
            eprintln!("apnforge: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Errors that mean a claimed property failed to hold, as opposed to bad
/// input: these exit 1 with a fail report instead of 2.
fn is_contract_failure(e: &apnforge::Error) -> bool {
    use apnforge::Error::*;
    matches!(
        e,
        QuestionOneNegative { .. }
            | TableOneContractViolated(_)
            | SemilinearityViolated { .. }
            | NonlinearFiber { .. }
            | HypothesisViolated { .. }
    )
}
