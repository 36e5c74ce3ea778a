use clap::{Args, Parser, Subcommand, ValueEnum};

use loopcalc_cli::commands::{self, CommandKind, Config, Format};

/// Exact-arithmetic calculator for Sullivan models of free loop spaces.
#[derive(Parser)]
#[command(name = "loopcalc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Betti numbers of the loop model
    Betti(CommonArgs),
    /// The (degree, weight) cohomology table and the power-map eigenvalue checks
    Hodge(CommonArgs),
    /// Cartan formula, chain-map and weight-shift checks for a cocycle
    #[command(name = "cartan-verify")]
    CartanVerify(CommonArgs),
    /// The loop-homology class of a cocycle with its weight and rotation verdicts
    Gamma1(CommonArgs),
    /// BV axiom suite and theorem-level checks for a finite presentation
    #[command(name = "bv-verify")]
    BvVerify(CommonArgs),
    /// Additive comparison of a BV presentation with the loop model
    Crosscheck(CommonArgs),
    /// Everything above in one document, with the recorded assumptions
    Report(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Presentation file, or builtin:NAME (s2, s3, s5, s7, cp2, cp3)
    #[arg(long)]
    model: String,
    /// Degree cutoff for all tables and checks
    #[arg(long, default_value_t = 12)]
    max_degree: usize,
    /// Label of a cocycle stanza (cartan-verify and gamma1)
    #[arg(long)]
    cocycle: Option<String>,
    /// Scale factor for the power-map eigenvalue checks
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn main() {
    if let Ok(threads) = std::env::var("LOOPCALC_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Cmd::Betti(a) => (CommandKind::Betti, a),
        Cmd::Hodge(a) => (CommandKind::Hodge, a),
        Cmd::CartanVerify(a) => (CommandKind::CartanVerify, a),
        Cmd::Gamma1(a) => (CommandKind::Gamma1, a),
        Cmd::BvVerify(a) => (CommandKind::BvVerify, a),
        Cmd::Crosscheck(a) => (CommandKind::Crosscheck, a),
        Cmd::Report(a) => (CommandKind::Report, a),
    };
    let config = Config {
        command: kind,
        model: args.model.clone(),
        max_degree: args.max_degree,
        cocycle: args.cocycle.clone(),
        k: args.k,
        format: match args.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
    };
    match commands::run(&config) {
        Ok(report) => {
            print!("{}", commands::render(&report, config.format));
            std::process::exit(if report.passed { 0 } else { 1 });
        }
        Err(err) => {
            eprintln!("loopcalc: {}", err);
            std::process::exit(2);
        }
    }
}
