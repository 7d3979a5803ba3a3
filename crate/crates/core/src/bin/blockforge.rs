use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use blockforge::catalog::{builtin_catalog, load_catalog, named_group, CatalogFile, INSTANCES};
use blockforge::certificate::{CertKind, CertificateJson};
use blockforge::error::{Error, Result};
use blockforge::groups::{set_max_group_order, DEFAULT_MAX_GROUP_ORDER};
use blockforge::linalg::{set_max_dim, DEFAULT_MAX_DIM};
use blockforge::report::Report;
use blockforge::suites::{certify, run_suite, SuiteSpec, SUITES};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "blockforge",
    version,
    about = "Exact verification of block-theoretic constructions over finite fields"
)]
struct Cli {
    /// Extra group catalog (defaults to $BLOCKFORGE_CATALOG).
    #[arg(long, global = true, env = "BLOCKFORGE_CATALOG")]
    catalog: Option<PathBuf>,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks, recorded in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the matrix dimension cap.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Override the group order cap.
    #[arg(long, global = true)]
    max_order: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List bundled groups and block instances.
    Catalog {
        /// Show a single group.
        #[arg(long)]
        group: Option<String>,
    },
    /// Run a named verification suite.
    Suite(SuiteArgs),
    /// Verify a certificate file.
    Certify { file: PathBuf },
}

#[derive(Args)]
struct SuiteArgs {
    name: String,
    #[arg(long)]
    p: Option<u32>,
    /// Degree of k over GF(p).
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    instance: Option<String>,
    /// G:N pairs separated by commas, or G:Q for brauer-diagram.
    #[arg(long)]
    groups: Option<String>,
    /// Witness complexes: regular, shift, morita, two-term, twist.
    #[arg(long, value_delimiter = ',')]
    witness: Vec<String>,
    /// Certificate to verify (geq-c, geq-b).
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Write the certificate used by geq-c or geq-b to this path.
    #[arg(long)]
    emit_cert: Option<PathBuf>,
    /// Instance for the X≀C3 check of wreath-derived.
    #[arg(long)]
    sigma_instance: Option<String>,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::SchemaError(format!("{}: {e}", path.display())))
}

fn catalog(extra: Option<&CatalogFile>, group: Option<&str>, json: bool) -> Result<()> {
    if let Some(id) = group {
        let g = named_group(id, extra)?;
        let classes = g.conjugacy_classes().len();
        if json {
            let v = serde_json::json!({ "id": id, "order": g.order(), "classes": classes, "group": g.to_json() });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        } else {
            println!("{id}: order {}, classes {classes}", g.order());
        }
        return Ok(());
    }
    let mut cat = builtin_catalog()?;
    if let Some(e) = extra {
        cat.groups.extend(e.groups.iter().cloned());
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&cat).expect("json"));
        return Ok(());
    }
    println!("groups:");
    for e in &cat.groups {
        println!("  {:<8} order {}", e.id, e.group.order);
    }
    println!("instances:");
    for (name, summary) in INSTANCES {
        println!("  {name:<18} {summary}");
    }
    println!("suites: {}", SUITES.join(", "));
    Ok(())
}

fn print_report(r: &Report, json: bool) {
    if json {
        println!("{}", r.to_json());
        return;
    }
    for c in &r.checks {
        match &c.witness {
            Some(w) => println!("FAIL {}: {w}", c.name),
            None => println!("{} {}", if c.ok { "PASS" } else { "FAIL" }, c.name),
        }
    }
    println!("{}: {} (seed {})", r.suite, if r.ok { "pass" } else { "fail" }, r.seed);
}

fn suite(a: SuiteArgs, extra: Option<&CatalogFile>, seed: u64, json: bool) -> Result<bool> {
    let cert = a.cert.as_ref().map(read).transpose()?;
    let spec = SuiteSpec {
        suite: a.name,
        p: a.p,
        m: a.m,
        ell: a.ell,
        n: a.n,
        instance: a.instance,
        groups: a.groups,
        witnesses: a.witness,
        cert,
        sigma_instance: a.sigma_instance,
    };
    if let Some(path) = &a.emit_cert {
        let kind = match spec.suite.as_str() {
            "geq-c" => CertKind::GeqC,
            "geq-b" => CertKind::GeqB,
            _ => return Err(Error::BadParams("--emit-cert applies to geq-c and geq-b".into())),
        };
        let c = match &spec.cert {
            Some(text) => CertificateJson::parse(text)?,
            None => CertificateJson::generate(
                spec.instance.as_deref().ok_or_else(|| Error::BadParams("--emit-cert needs --instance".into()))?,
                spec.ell,
                kind,
            )?,
        };
        std::fs::write(path, c.to_json()).map_err(|e| Error::BadParams(format!("{}: {e}", path.display())))?;
    }
    let r = run_suite(&spec, seed, extra)?;
    print_report(&r, json);
    Ok(r.ok)
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(d) = cli.max_dim {
        if d > DEFAULT_MAX_DIM {
            eprintln!("warning: dimension cap raised from {DEFAULT_MAX_DIM} to {d}");
        }
        set_max_dim(d);
    }
    if let Some(o) = cli.max_order {
        if o > DEFAULT_MAX_GROUP_ORDER {
            eprintln!("warning: group order cap raised from {DEFAULT_MAX_GROUP_ORDER} to {o}");
        }
        set_max_group_order(o);
    }
    let extra = cli.catalog.as_deref().map(load_catalog).transpose()?;
    match cli.command {
        Command::Catalog { group } => catalog(extra.as_ref(), group.as_deref(), cli.json).map(|_| true),
        Command::Suite(a) => suite(a, extra.as_ref(), cli.seed, cli.json),
        Command::Certify { file } => {
            let r = certify(&read(&file)?, cli.seed)?;
            print_report(&r, cli.json);
            Ok(r.ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
