use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kirbyforge::diagram::{Diagram, Role};
use kirbyforge::error::Error;
use kirbyforge::homology::{
    h1_of_surgery, is_homology_sphere, linking_framing_matrix, smith, RoleFilter,
};
use kirbyforge::oracle::{self, GenConfig};
use kirbyforge::unlink::{self, CheckLevel, UnlinkCertificate};

/// Framed-link surgery diagrams: invariants, unlinking certificates, and the
/// oracle harness.
#[derive(Parser)]
#[command(name = "kirbyforge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the linking-framing matrix, its Smith normal form, first
    /// homology, and the homology-sphere verdict for a diagram file.
    Invariants {
        /// Diagram file ('-' for stdin).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = false)]
        verbose: bool,
    },
    /// Run the unlinking pipeline and write a certificate.
    Unlink {
        /// Diagram file ('-' for stdin).
        #[arg(long)]
        input: PathBuf,
        /// Certificate output path (stdout if omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "level1")]
        check_level: String,
        #[arg(long, default_value_t = false)]
        verbose: bool,
    },
    /// Re-verify a certificate against its origin diagram.
    Verify {
        /// Certificate file.
        #[arg(long)]
        input: PathBuf,
        /// Origin diagram file.
        #[arg(long)]
        origin: PathBuf,
        #[arg(long, default_value_t = false)]
        verbose: bool,
    },
    /// Generate seeded random homology-sphere presentations, unlink and
    /// verify each, and print summary statistics.
    Oracle {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: u32,
        #[arg(long, default_value = "level1")]
        check_level: String,
        #[arg(long, default_value_t = false)]
        verbose: bool,
    },
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn color_enabled() -> bool {
    std::env::var("KIRBYFORGE_COLOR").map(|v| v == "1").unwrap_or(false)
}

fn paint(s: &str, ok: bool) -> String {
    if color_enabled() {
        if ok {
            format!("\x1b[32m{s}\x1b[0m")
        } else {
            format!("\x1b[31m{s}\x1b[0m")
        }
    } else {
        s.to_string()
    }
}

fn cmd_invariants(input: &PathBuf, verbose: bool) -> Result<(), Error> {
    let d = Diagram::parse(&read_input(input)?)?;
    let n_pat = d.components_with_role(Role::Pattern).len();
    let n_sur = d.components_with_role(Role::Surgery).len();
    let n_helpers = d.components().filter(|c| c.role.is_helper()).count();
    println!(
        "components: {} (pattern: {}, surgery: {}, helpers: {})",
        d.components().count(),
        n_pat,
        n_sur,
        n_helpers
    );
    println!("crossings: {}", d.crossings().count());
    println!("genus: {}", d.genus());
    let a = linking_framing_matrix(&d, RoleFilter::Framed)?;
    println!("linking-framing matrix ({}x{}, framed components by id):", a.rows, a.cols);
    print!("{a}");
    let s = smith(&a);
    let factors: Vec<String> = s.invariant_factors().iter().map(|f| f.to_string()).collect();
    println!(
        "smith invariant factors: {}",
        if factors.is_empty() { "none".to_string() } else { factors.join(" ") }
    );
    if verbose {
        println!("snf row witness U:");
        print!("{}", s.u);
        println!("snf column witness V:");
        print!("{}", s.v);
    }
    let h1 = h1_of_surgery(&d)?;
    println!("H1 = {h1}");
    let sphere = is_homology_sphere(&d)?;
    println!("homology sphere: {}", paint(&sphere.to_string(), sphere));
    Ok(())
}

fn cmd_unlink(
    input: &PathBuf,
    output: Option<&PathBuf>,
    level: &str,
    verbose: bool,
) -> Result<ExitCode, Error> {
    let d = Diagram::parse(&read_input(input)?)?;
    let level = CheckLevel::parse(level)?;
    let cert = unlink::unlink(&d, level)?;
    let text = cert.to_text();
    match output {
        Some(p) => std::fs::write(p, &text)?,
        None => print!("{text}"),
    }
    let outcome = unlink::verify_certificate(&cert, &d)?;
    if verbose {
        for (k, v) in &outcome.report {
            println!("# {k} {v}");
        }
    }
    eprintln!(
        "unlink: {} pairs, verification {}",
        cert.pairs.len(),
        paint(if outcome.ok { "pass" } else { "fail" }, outcome.ok)
    );
    Ok(if outcome.ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_verify(input: &PathBuf, origin: &PathBuf, verbose: bool) -> Result<ExitCode, Error> {
    let cert = UnlinkCertificate::parse(&read_input(input)?)?;
    let d = Diagram::parse(&read_input(origin)?)?;
    let outcome = unlink::verify_certificate(&cert, &d)?;
    if verbose {
        for (k, v) in &outcome.report {
            println!("{k} {v}");
        }
    }
    for m in &outcome.mismatches {
        println!("mismatch: {m}");
    }
    println!("verify: {}", paint(if outcome.ok { "pass" } else { "fail" }, outcome.ok));
    Ok(if outcome.ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_oracle(seed: u64, count: u32, level: &str, verbose: bool) -> Result<ExitCode, Error> {
    let level = CheckLevel::parse(level)?;
    let cfg = GenConfig::default();
    let summary = oracle::run(seed, count, level, &cfg);
    if verbose {
        for c in &summary.cases {
            println!(
                "case seed={} pairs={} {}",
                c.seed,
                c.pairs,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
    }
    print!("{}", summary.render(seed, count));
    let ok = summary.passed() == summary.cases.len();
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<ExitCode, Error> = match &cli.command {
        Command::Invariants { input, verbose } => {
            cmd_invariants(input, *verbose).map(|_| ExitCode::SUCCESS)
        }
        Command::Unlink { input, output, check_level, verbose } => {
            cmd_unlink(input, output.as_ref(), check_level, *verbose)
        }
        Command::Verify { input, origin, verbose } => cmd_verify(input, origin, *verbose),
        Command::Oracle { seed, count, check_level, verbose } => {
            cmd_oracle(*seed, *count, check_level, *verbose)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
