use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use flagsweep::exactnum::format_rational;
use flagsweep::flagvec::{ab_index, cd_index, flag_f, flag_h, reverse_words};
use flagsweep::polytope::{builtin, is_eulerian, polar_dual};
use flagsweep::sweep::{cd_sweep, cd_symmetric, choose_direction};
use flagsweep::toric::{extended_toric, reconstruct_cd, toric_def, toric_from_cd, toric_sweep, toric_symmetric};
use flagsweep::truncpartition::{build_partition, enumerate_chains, verify_partition};
use flagsweep::{CdPoly, Polytope, QVector, SweepDirection, SweepOptions, VRep};

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "flagsweep", version, about = "Flag vectors, cd-index and toric h-vectors of polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Flag f- and h-vectors and the ab-index.
    Flag(Common),
    /// cd-index by the flag route or by a sweep.
    Cdindex {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "flag")]
        method: CdMethod,
    },
    /// Toric h-vector of the boundary.
    Toric {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "def")]
        method: ToricMethod,
    },
    /// Extended toric h-vector, indexed by words starting with d.
    Extended(Common),
    /// Partition of the complete truncation into cd-word blocks.
    Partition(Common),
    /// Runs every cross-check on one polytope.
    Verify(Common),
    /// Dimension, f-vector and sweep order.
    Describe(Common),
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Builtin name (cube:3, polygon:5, pyramid:polygon:4, ...) or a JSON file.
    #[arg(long)]
    input: String,
    /// Sweep direction as comma-separated rationals, e.g. "1,2,4".
    #[arg(long)]
    direction: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Recompute cd-indices of sections by sweeping them too.
    #[arg(long)]
    deep_sweep: bool,
    /// Largest dimension for which partitions are built.
    #[arg(long, default_value_t = 4)]
    max_dim: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum CdMethod {
    Flag,
    Sweep,
    Symmetric,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ToricMethod {
    Def,
    Cd,
    Sweep,
    Symmetric,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::CrossCheck(_) => 3,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn load(input: &str) -> Result<Polytope, CliError> {
    let vrep: VRep = if Path::new(input).is_file() {
        let text = std::fs::read_to_string(input)?;
        serde_json::from_str(&text).map_err(|e| invalid(format!("{input}: {e}")))?
    } else {
        builtin(input).map_err(invalid)?
    };
    let p = Polytope::new(vrep).map_err(invalid)?;
    if !is_eulerian(&p.lattice) {
        return Err(invalid("face lattice is not Eulerian"));
    }
    Ok(p)
}

fn direction(c: &Common, p: &Polytope) -> Result<SweepDirection, CliError> {
    let p0 = c.direction.as_deref().map(str::parse::<QVector>).transpose().map_err(invalid)?;
    choose_direction(p0.as_ref(), &p.vrep).map_err(invalid)
}

fn cd_json(phi: &CdPoly) -> Value {
    phi.to_json()
}

/// A JSON document plus a plain-text rendering of it.
struct Report {
    json: Value,
    table: String,
}

impl Report {
    fn new(mut json: Value, table: String) -> Self {
        if let Value::Object(m) = &mut json {
            m.insert("schema".into(), json!(SCHEMA));
        }
        Report { json, table }
    }
}

fn vertex_label(p: &Polytope, v: usize) -> String {
    p.vertex(v).to_string()
}

fn run_flag(c: &Common) -> Result<Report, CliError> {
    let p = load(&c.input)?;
    let f = flag_f(&p.lattice);
    let h = flag_h(&f);
    let ab = ab_index(&h);
    let mut table = format!("f-vector {:?}\n", p.lattice.f_vector()[1..].to_vec());
    for ((s, fv), (_, hv)) in f.iter().zip(h.iter()) {
        writeln!(table, "S = {:<12} f = {fv:<8} h = {hv}", format!("{:?}", s.elems())).unwrap();
    }
    writeln!(table, "ab-index: {ab}").unwrap();
    let json = json!({
        "dim": p.dim(),
        "f_vector": p.lattice.f_vector()[1..].to_vec(),
        "flag_f": f.to_json(),
        "flag_h": h.to_json(),
        "ab": ab.to_json(),
    });
    Ok(Report::new(json, table))
}

fn run_cdindex(c: &Common, method: CdMethod) -> Result<Report, CliError> {
    let p = load(&c.input)?;
    let flag = cd_index(&p.lattice).map_err(invalid)?;
    let mut table = String::new();
    let mut per_vertex = Vec::new();
    let phi = match method {
        CdMethod::Flag => flag.clone(),
        CdMethod::Sweep => {
            let s = direction(c, &p)?;
            let r = cd_sweep(&p, &s, SweepOptions { deep: c.deep_sweep }).map_err(invalid)?;
            for (v, x) in r.in_order() {
                per_vertex.push(json!({"vertex": v, "point": p.vertex(v), "height": format_rational(s.height(v)), "cd": x.to_json()}));
                writeln!(table, "{:>4} {:<20} {x}", v, vertex_label(&p, v)).unwrap();
            }
            r.total
        }
        CdMethod::Symmetric => {
            let s = direction(c, &p)?;
            let r = cd_symmetric(&p, &s).map_err(|e| CliError::CrossCheck(e.to_string()))?;
            for (v, x) in r.in_order() {
                per_vertex.push(json!({"vertex": v, "point": p.vertex(v), "height": format_rational(s.height(v)), "cd": x.to_json()}));
                writeln!(table, "{:>4} {:<20} {x}", v, vertex_label(&p, v)).unwrap();
            }
            r.total
        }
    };
    if phi != flag {
        return Err(CliError::CrossCheck(format!("{method:?} route gives {phi}, flag route gives {flag}")));
    }
    writeln!(table, "cd-index: {phi}").unwrap();
    let mut json = json!({ "cd": cd_json(&phi) });
    if method != CdMethod::Flag {
        json["per_vertex"] = Value::from(per_vertex);
    }
    Ok(Report::new(json, table))
}

fn run_toric(c: &Common, method: ToricMethod) -> Result<Report, CliError> {
    let p = load(&c.input)?;
    let phi = cd_index(&p.lattice).map_err(invalid)?;
    let mut per_vertex = Vec::new();
    let mut table = String::new();
    // Sweeps produce the vector of the dual, so they run on the polar dual.
    let h = match method {
        ToricMethod::Def => toric_def(&p.lattice),
        ToricMethod::Cd => toric_from_cd(&phi),
        ToricMethod::Sweep => {
            let q = Polytope::new(polar_dual(&p)).map_err(invalid)?;
            let s = direction(c, &q)?;
            let r = toric_sweep(&q, &s).map_err(invalid)?;
            for (v, x) in r.in_order() {
                per_vertex.push(json!({"dual_vertex": v, "point": q.vertex(v), "h": x}));
                writeln!(table, "{:>4} {:<24} {x:?}", v, vertex_label(&q, v)).unwrap();
            }
            r.total
        }
        ToricMethod::Symmetric => {
            let q = Polytope::new(polar_dual(&p)).map_err(invalid)?;
            let s = direction(c, &q)?;
            let r = toric_symmetric(&q, &s).map_err(|e| CliError::CrossCheck(e.to_string()))?;
            for (v, x) in r.in_order() {
                let xs: Vec<String> = x.iter().map(format_rational).collect();
                writeln!(table, "{:>4} {:<24} ({})", v, vertex_label(&q, v), xs.join(",")).unwrap();
                per_vertex.push(json!({"dual_vertex": v, "point": q.vertex(v), "h": xs}));
            }
            r.total
        }
    };
    let reference = toric_def(&p.lattice);
    if h != reference {
        return Err(CliError::CrossCheck(format!("{method:?} route gives {h:?}, definition gives {reference:?}")));
    }
    writeln!(table, "toric h: {h:?}").unwrap();
    let mut json = json!({ "h": h });
    if matches!(method, ToricMethod::Sweep | ToricMethod::Symmetric) {
        json["per_vertex"] = Value::from(per_vertex);
    }
    Ok(Report::new(json, table))
}

fn run_extended(c: &Common) -> Result<Report, CliError> {
    let p = load(&c.input)?;
    let phi = cd_index(&p.lattice).map_err(invalid)?;
    let e = extended_toric(&phi, p.dim());
    let back = reconstruct_cd(&e).map_err(|e| CliError::CrossCheck(e.to_string()))?;
    if back != phi {
        return Err(CliError::CrossCheck(format!("reconstruction gives {back}, expected {phi}")));
    }
    let mut table = String::new();
    for (w, h) in &e.entries {
        writeln!(table, "{:<8} {h:?}", w.to_string()).unwrap();
    }
    Ok(Report::new(json!({ "extended": e.to_json() }), table))
}

fn run_partition(c: &Common) -> Result<Report, CliError> {
    let p = load(&c.input)?;
    if p.dim() > c.max_dim.min(4) {
        return Err(invalid(format!("partition needs dimension <= {}, got {}", c.max_dim.min(4), p.dim())));
    }
    let s = direction(c, &p)?;
    let blocks = build_partition(&p, &s).map_err(|e| CliError::CrossCheck(e.to_string()))?;
    let report = verify_partition(&p.lattice, &blocks, &enumerate_chains(&p.lattice));
    if !report.passed() {
        return Err(CliError::CrossCheck(report.failures.join("; ")));
    }
    let mut table = String::new();
    for b in &blocks {
        writeln!(table, "{:<6} owner {:<3} {} faces", b.word.to_string(), b.owner, b.faces.len()).unwrap();
    }
    let json = json!({
        "direction": s.p(),
        "blocks": blocks.iter().map(|b| b.to_json(&p.lattice)).collect::<Vec<_>>(),
    });
    Ok(Report::new(json, table))
}

fn run_verify(c: &Common) -> Result<Report, CliError> {
    let p = load(&c.input)?;
    let s = direction(c, &p)?;
    let mut checks: Vec<(String, Result<(), String>)> = Vec::new();
    let mut check = |name: &str, r: Result<(), String>| checks.push((name.to_string(), r));
    let agree = |a: &dyn std::fmt::Debug, b: &dyn std::fmt::Debug| {
        let (a, b) = (format!("{a:?}"), format!("{b:?}"));
        if a == b { Ok(()) } else { Err(format!("{a} != {b}")) }
    };

    let phi = cd_index(&p.lattice).map_err(invalid)?;
    let h = flag_h(&flag_f(&p.lattice));
    let d = p.dim();
    check(
        "flag h symmetry",
        h.iter().all(|(x, v)| h.get(x.complement(d)) == v).then_some(()).ok_or_else(|| "asymmetric".into()),
    );
    for deep in [false, true] {
        let name = if deep { "cd deep sweep = flag" } else { "cd sweep = flag" };
        match cd_sweep(&p, &s, SweepOptions { deep }) {
            Ok(r) => check(name, agree(&r.total, &phi)),
            Err(e) => check(name, Err(e.to_string())),
        }
    }
    match cd_symmetric(&p, &s) {
        Ok(r) => check("cd symmetric = flag", agree(&r.total, &phi)),
        Err(e) => check("cd symmetric = flag", Err(e.to_string())),
    }
    let toric = toric_def(&p.lattice);
    check("toric def = toric from cd", agree(&toric, &toric_from_cd(&phi)));
    let dual_h = toric_from_cd(&reverse_words(&phi));
    match toric_sweep(&p, &s) {
        Ok(r) => check("toric sweep = dual toric", agree(&r.total, &dual_h)),
        Err(e) => check("toric sweep = dual toric", Err(e.to_string())),
    }
    match toric_symmetric(&p, &s) {
        Ok(r) => check("toric symmetric = dual toric", agree(&r.total, &dual_h)),
        Err(e) => check("toric symmetric = dual toric", Err(e.to_string())),
    }
    match reconstruct_cd(&extended_toric(&phi, d)) {
        Ok(back) => check("extended toric round trip", agree(&back, &phi)),
        Err(e) => check("extended toric round trip", Err(e.to_string())),
    }
    if d <= c.max_dim.min(4) {
        let r = build_partition(&p, &s).map_err(|e| e.to_string()).and_then(|blocks| {
            let rep = verify_partition(&p.lattice, &blocks, &enumerate_chains(&p.lattice));
            if rep.passed() { Ok(()) } else { Err(rep.failures.join("; ")) }
        });
        check("truncation partition", r);
    }

    let mut table = String::new();
    for (name, r) in &checks {
        match r {
            Ok(()) => writeln!(table, "ok   {name}").unwrap(),
            Err(e) => writeln!(table, "FAIL {name}: {e}").unwrap(),
        }
    }
    let failed: Vec<&String> = checks.iter().filter(|(_, r)| r.is_err()).map(|(n, _)| n).collect();
    if !failed.is_empty() {
        eprint!("{table}");
        return Err(CliError::CrossCheck(format!("{} checks failed", failed.len())));
    }
    let json = json!({
        "ok": true,
        "cd": cd_json(&phi),
        "checks": checks.iter().map(|(n, _)| json!({"name": n, "ok": true})).collect::<Vec<_>>(),
    });
    Ok(Report::new(json, table))
}

fn run_describe(c: &Common) -> Result<Report, CliError> {
    let p = load(&c.input)?;
    let s = direction(c, &p)?;
    let order: Vec<Value> = s
        .order()
        .iter()
        .map(|&v| json!({"vertex": v, "point": p.vertex(v), "height": format_rational(s.height(v))}))
        .collect();
    let mut table = format!("dimension {}\nf-vector {:?}\ndirection {}\n", p.dim(), &p.lattice.f_vector()[1..], s.p());
    for &v in s.order() {
        writeln!(table, "{:>4} {:<24} height {}", v, vertex_label(&p, v), s.height(v)).unwrap();
    }
    let json = json!({
        "dim": p.dim(),
        "n_vertices": p.n_vertices(),
        "f_vector": p.lattice.f_vector()[1..].to_vec(),
        "vertices": p.vrep.vertices,
        "direction": s.p(),
        "order": order,
        "lattice": p.lattice.to_json(),
    });
    Ok(Report::new(json, table))
}

fn run(cli: &Cli) -> Result<(Report, &Common), CliError> {
    Ok(match &cli.command {
        Command::Flag(c) => (run_flag(c)?, c),
        Command::Cdindex { common, method } => (run_cdindex(common, *method)?, common),
        Command::Toric { common, method } => (run_toric(common, *method)?, common),
        Command::Extended(c) => (run_extended(c)?, c),
        Command::Partition(c) => (run_partition(c)?, c),
        Command::Verify(c) => (run_verify(c)?, c),
        Command::Describe(c) => (run_describe(c)?, c),
    })
}

fn emit(report: &Report, c: &Common) -> Result<(), CliError> {
    let text = match c.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("serializable") + "\n",
        Format::Table => report.table.clone(),
    };
    match &c.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(report, c)| emit(&report, c));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
