use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mo8_quotients::cli::{Command, ExitStatus, FamilyName, JobSpec, ModelKind, SequenceInput, run};
use mo8_quotients::obstruction::ClaimBudget;
use mo8_quotients::quotient::OrderPolicy;

/// Quotients of MO<8> and certified non-isomorphism with tmf.
#[derive(Parser)]
#[command(name = "mo8q", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for `<command>.json` when --out is not given.
    #[arg(long, global = true, env = "MO8Q_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Print a summary line to stderr; twice also names the output file.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Sub {
    /// Describe a model ring.
    Model(ModelArgs),
    /// Run a quotient tower and emit its report.
    Quotient {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        seq: SeqArgs,
        /// Refuse sequences given out of degree order.
        #[arg(long)]
        strict: bool,
    },
    /// Decide regularity, with a kernel witness on failure.
    Regular {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Check the one-indecomposable-per-degree shape rationally.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Emit a non-isomorphism certificate (or a family report).
    Certify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Re-check a certificate or family report; exit 0 iff sound.
    Verify {
        input: PathBuf,
    },
    /// Run the ideal-membership claim checker.
    Claim {
        #[command(flatten)]
        model: ModelArgs,
        /// Random combinations per cell on top of the basis.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        /// Stop after this many cells (partial report).
        #[arg(long)]
        max_cells: Option<usize>,
        /// Seed for the sampled combinations.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run this many random p-multiple decomposable tails.
        #[arg(long, default_value_t = 0)]
        random_tails: usize,
    },
    /// Regular kernel sequence of a genus onto Q[delta, epsilon].
    DemoMspin {
        #[arg(long = "D", default_value_t = 24)]
        bound: u32,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Prime for the p-local models; omit for the rational model.
    #[arg(long)]
    p: Option<u64>,
    /// Truncation degree.
    #[arg(long = "D")]
    bound: Option<u32>,
    /// Decomposable relation tail: `zero` or an expression.
    #[arg(long)]
    tail: Option<String>,
    /// rational, tmf, local or case1.
    #[arg(long)]
    model: Option<ModelKind>,
    /// Top generator index for the case1 model.
    #[arg(long)]
    index: Option<u32>,
    /// A ring document instead of a built-in model.
    #[arg(long)]
    ring: Option<PathBuf>,
}

#[derive(Args)]
struct SeqArgs {
    /// Comma-separated `expr` or `expr@degree` entries.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["family", "seq_file"])]
    seq: Option<Vec<String>>,
    /// canonical or full.
    #[arg(long, conflicts_with = "seq_file")]
    family: Option<FamilyName>,
    /// JSON array of entries.
    #[arg(long)]
    seq_file: Option<PathBuf>,
}

impl SeqArgs {
    fn input(self) -> SequenceInput {
        match (self.seq, self.family, self.seq_file) {
            (Some(xs), _, _) => SequenceInput::Inline(xs.into_iter().map(|x| x.trim().to_string()).collect()),
            (_, Some(f), _) => SequenceInput::Family(f),
            (_, _, Some(path)) => SequenceInput::File(path),
            _ => SequenceInput::None,
        }
    }
}

fn apply_model(job: &mut JobSpec, m: ModelArgs) {
    job.prime = m.p;
    job.bound = m.bound;
    job.tail = m.tail;
    job.model = m.model;
    job.index = m.index;
    job.ring_file = m.ring;
}

fn job_of(sub: Sub) -> JobSpec {
    match sub {
        Sub::Model(m) => {
            let mut job = JobSpec::new(Command::Model);
            apply_model(&mut job, m);
            job
        }
        Sub::Quotient { model, seq, strict } => {
            let mut job = JobSpec::new(Command::Quotient);
            apply_model(&mut job, model);
            job.sequence = seq.input();
            job.order = if strict { OrderPolicy::Strict } else { OrderPolicy::Sort };
            job
        }
        Sub::Regular { model, seq } => with_seq(Command::Regular, model, seq),
        Sub::Classify { model, seq } => with_seq(Command::Classify, model, seq),
        Sub::Certify { model, seq } => with_seq(Command::Certify, model, seq),
        Sub::Verify { input } => {
            let mut job = JobSpec::new(Command::Verify);
            job.input = Some(input);
            job
        }
        Sub::Claim { model, samples, max_cells, seed, random_tails } => {
            let mut job = JobSpec::new(Command::Claim);
            apply_model(&mut job, model);
            job.budget = ClaimBudget { samples_per_cell: samples, max_cells, seed };
            job.random_tails = random_tails;
            job
        }
        Sub::DemoMspin { bound } => {
            let mut job = JobSpec::new(Command::DemoMspin);
            job.bound = Some(bound);
            job
        }
    }
}

fn with_seq(command: Command, model: ModelArgs, seq: SeqArgs) -> JobSpec {
    let mut job = JobSpec::new(command);
    apply_model(&mut job, model);
    job.sequence = seq.input();
    job
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ExitStatus::Usage.code() as u8 } else { 0 });
        }
    };
    let mut job = job_of(cli.command);
    job.verbosity = cli.verbose;
    let outcome = run(&job);

    let path = cli.out.or_else(|| cli.out_dir.map(|d| d.join(format!("{}.json", job.command.name()))));
    let mut document = outcome.document.clone();
    document.push('\n');
    match &path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &document) {
                eprintln!("mo8q: cannot write {}: {e}", path.display());
                return ExitCode::from(ExitStatus::Failure.code() as u8);
            }
        }
        None => print!("{document}"),
    }
    if cli.verbose > 0 || outcome.status != ExitStatus::Ok {
        eprintln!("{}", outcome.summary);
    }
    if cli.verbose > 1 {
        if let Some(path) = &path {
            eprintln!("wrote {}", path.display());
        }
    }
    ExitCode::from(outcome.status.code() as u8)
}
