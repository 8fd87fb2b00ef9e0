use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ftrails::certificate::{bound_value, verify_with_trails};
use ftrails::driver::max_f_matching_with;
use ftrails::engine::{find_trails, EngineOptions, TraceEvent};
use ftrails::expand::expand_all;
use ftrails::io::{emit_certificate, emit_instance, parse_certificate, parse_instance, random_instance, Instance};
use ftrails::{Error, Result};

#[derive(Parser)]
#[command(name = "ftrails", version, about = "Maximum f-matchings of multigraphs by blocking trails")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run phases to a maximum f-matching and verify the final certificate
    Solve {
        path: PathBuf,
        /// Check search invariants while running
        #[arg(long)]
        check: bool,
        /// Print search steps to stderr
        #[arg(long)]
        trace: bool,
        /// Write the certificate to this file
        #[arg(long, value_name = "FILE")]
        cert_out: Option<PathBuf>,
    },
    /// Run one phase from the file's matching and print the trails found
    Block {
        path: PathBuf,
        #[arg(long)]
        check: bool,
    },
    /// Check that a certificate's (I, O) bound equals the file's matching size
    Certify { path: PathBuf, cert: PathBuf },
    /// Print a seeded random instance
    Gen { n: usize, m: usize, fmax: usize, seed: u64 },
}

// exit codes
const OK: u8 = 0;
const INPUT: u8 = 1;
const NOT_PROVEN: u8 = 2;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn join(ids: impl Iterator<Item = usize>) -> String {
    ids.map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn solve(path: &Path, check: bool, trace: bool, cert_out: Option<&Path>) -> Result<u8> {
    let inst = load(path)?;
    let opts = EngineOptions { check, ..Default::default() };
    let mut print = |ev: &TraceEvent| eprintln!("{ev:?}");
    let sink: Option<&mut dyn FnMut(&TraceEvent)> = if trace { Some(&mut print) } else { None };
    let r = max_f_matching_with(&inst.graph, &inst.f, Some(&inst.matching), &opts, sink)?;
    println!("size {}", r.matching.size());
    println!("{}", join(r.matching.edges().map(|e| e.0)));
    println!("phases {}", r.phases);
    if let Some(p) = cert_out {
        fs::write(p, emit_certificate(&r.certificate.certificate))?;
    }
    if r.certificate.ok {
        Ok(OK)
    } else {
        for f in &r.certificate.failures {
            eprintln!("certificate: {f}");
        }
        Ok(NOT_PROVEN)
    }
}

fn block(path: &Path, check: bool) -> Result<u8> {
    let inst = load(path)?;
    let opts = EngineOptions { check, ..Default::default() };
    let r = find_trails(&inst.graph, &inst.f, &inst.matching, &opts)?;
    let trails = expand_all(&inst.graph, &r)?;
    println!("trails {}", trails.len());
    for t in &trails {
        println!("{}", join(t.edges().map(|e| e.0)));
    }
    let report = verify_with_trails(&inst.graph, &inst.f, &r, &trails)?;
    print!("{}", emit_certificate(&report.certificate));
    if report.ok {
        Ok(OK)
    } else {
        for f in &report.failures {
            eprintln!("certificate: {f}");
        }
        Ok(NOT_PROVEN)
    }
}

fn certify(path: &Path, cert: &Path) -> Result<u8> {
    let inst = load(path)?;
    let (i, o) = parse_certificate(&read(cert)?, inst.graph.n())
        .map_err(|e| Error::Input(format!("{}: {e}", cert.display())))?;
    let bound = bound_value(&inst.graph, &inst.f, &i, &o)?;
    let size = inst.matching.size();
    println!("bound {bound}");
    println!("size {size}");
    Ok(if bound == size { OK } else { NOT_PROVEN })
}

fn gen(n: usize, m: usize, fmax: usize, seed: u64) -> Result<u8> {
    print!("{}", emit_instance(&random_instance(n, m, fmax, seed)?));
    Ok(OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Solve { path, check, trace, cert_out } => solve(&path, check, trace, cert_out.as_deref()),
        Cmd::Block { path, check } => block(&path, check),
        Cmd::Certify { path, cert } => certify(&path, &cert),
        Cmd::Gen { n, m, fmax, seed } => gen(n, m, fmax, seed),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Input(_) | Error::Parse { .. } | Error::Io(_) => INPUT,
                _ => NOT_PROVEN,
            })
        }
    }
}
