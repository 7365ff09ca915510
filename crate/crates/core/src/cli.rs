//! Command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::engine::Policy;
use crate::flooding::{flood_parallel, stable_sort_to_flooding, FloodPlan};
use crate::io::{parse_complex, parse_sequence, parse_stack, write_sequence, write_traces, ParseError};
use crate::sequence::{gradient_vector_field, is_f_sequence, is_flooding, validate_morse, SequenceItem};
use crate::verification::{check_collapse_theorem, collapse_violation, find_closed_path, morse_consistency, CheckLine};

const CHECKS: [&str; 7] = ["morse", "fseq", "flooding", "acyclic", "collapse", "euler", "betti"];

#[derive(Parser, Debug)]
#[command(name = "morseflood", version, about = "Morse sequences and flooding on simplicial stacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a weighted complex file is well formed
    Validate { complex: PathBuf },
    /// Build a flooding sequence for a weighted complex
    Flood {
        complex: PathBuf,
        #[arg(long, default_value = "maximal")]
        scheme: Policy,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the per-level contraction log here
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Reorder an F-sequence into a flooding sequence
    Sort {
        sequence: PathBuf,
        #[arg(long)]
        stack: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run checks on a sequence against a weighted complex
    Verify {
        sequence: PathBuf,
        #[arg(long)]
        stack: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "morse,fseq,flooding,acyclic,collapse,euler,betti")]
        checks: Vec<String>,
    },
    /// Critical counts per dimension and per level
    Stats {
        sequence: PathBuf,
        /// Take levels from this complex instead of `@` annotations
        #[arg(long)]
        stack: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Check,
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(format!("error[{}]: {e}", e.code()))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(format!("error[E_IO]: {e}"))
    }
}

fn open_output<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> io::Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 when a
/// check fails, 2 on bad input.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(Failure::Check) => 1,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            2
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Validate { complex } => {
            let (k, f) = parse_complex(&complex)?;
            let dim = k.dimension().map_or("-".to_string(), |d| d.to_string());
            writeln!(stdout, "ok: {} faces, dimension {dim}, {} levels", k.len(), f.levels().len())?;
        }
        Command::Flood {
            complex,
            scheme,
            jobs,
            output,
            trace,
        } => {
            let f = parse_stack(&complex)?;
            let seq = flood_parallel(&f, scheme, jobs.max(1)).map_err(|e| Failure::Input(format!("error: {e}")))?;
            if let Some(path) = trace {
                let plan = FloodPlan::new(&f).map_err(|e| Failure::Input(format!("error: {e}")))?;
                write_traces(&plan.traces(scheme), BufWriter::new(File::create(path)?))?;
            }
            let mut out = open_output(output.as_deref(), stdout)?;
            write_sequence(&seq, Some(&f), &mut out)?;
            out.flush()?;
        }
        Command::Sort {
            sequence,
            stack,
            output,
        } => {
            let (k, f) = parse_complex(&stack)?;
            let file = parse_sequence(&sequence, Some(&k))?;
            let sorted = stable_sort_to_flooding(&file.sequence, &f).map_err(|e| Failure::Input(format!("error: {e}")))?;
            let mut out = open_output(output.as_deref(), stdout)?;
            write_sequence(&sorted, Some(&f), &mut out)?;
            out.flush()?;
        }
        Command::Verify { sequence, stack, checks } => {
            if let Some(bad) = checks.iter().find(|c| !CHECKS.contains(&c.as_str())) {
                return Err(Failure::Input(format!("error: unknown check `{bad}`")));
            }
            let (k, f) = parse_complex(&stack)?;
            let seq = parse_sequence(&sequence, Some(&k))?.sequence;
            let wanted = |name: &str| checks.iter().any(|c| c == name);
            let mut lines = Vec::new();
            if wanted("morse") {
                let r = validate_morse(&seq, &k);
                lines.push(CheckLine::new("morse", r.is_ok(), r.err().map_or("ok".into(), |e| e.to_string())));
            }
            if wanted("fseq") {
                lines.push(CheckLine::new("fseq", is_f_sequence(&seq, &f), "regular pairs share a level"));
            }
            if wanted("flooding") {
                lines.push(CheckLine::new("flooding", is_flooding(&seq, &f), "levels non-decreasing"));
            }
            if wanted("acyclic") {
                let line = match find_closed_path(&gradient_vector_field(&seq)) {
                    None => CheckLine::new("acyclic", true, "no closed gradient path"),
                    Some(path) => CheckLine::new("acyclic", false, format!("closed path {path}")),
                };
                lines.push(line);
            }
            if wanted("collapse") {
                let line = if check_collapse_theorem(&seq, &f) {
                    CheckLine::new("collapse", true, "every cut is reached by collapses")
                } else {
                    let v = collapse_violation(&seq, &f).expect("failed check has a violation");
                    CheckLine::new("collapse", false, format!("level {} item {}: {}", v.level, v.step, v.reason))
                };
                lines.push(line);
            }
            if wanted("euler") || wanted("betti") {
                let report = morse_consistency(&seq, &k, wanted("betti"));
                lines.extend(report.lines().into_iter().filter(|l| wanted(&l.name)));
            }
            for line in &lines {
                writeln!(stdout, "{line}")?;
            }
            if lines.iter().any(|l| !l.pass) {
                return Err(Failure::Check);
            }
        }
        Command::Stats { sequence, stack } => {
            let (seq, values) = match stack {
                Some(path) => {
                    let (k, f) = parse_complex(&path)?;
                    let seq = parse_sequence(&sequence, Some(&k))?.sequence;
                    let values = seq.items().iter().map(|i| i.value(&f)).collect();
                    (seq, values)
                }
                None => {
                    let file = parse_sequence(&sequence, None)?;
                    (file.sequence, file.values)
                }
            };
            let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
            let mut by_level: BTreeMap<i64, usize> = BTreeMap::new();
            for (item, value) in seq.items().iter().zip(&values) {
                if let SequenceItem::Critical(nu) = item {
                    *by_dim.entry(nu.dim()).or_default() += 1;
                    if let Some(v) = value {
                        *by_level.entry(*v).or_default() += 1;
                    }
                }
            }
            let critical: usize = by_dim.values().sum();
            writeln!(stdout, "items {}", seq.len())?;
            writeln!(stdout, "critical {critical}")?;
            writeln!(stdout, "regular {}", seq.len() - critical)?;
            for (d, c) in &by_dim {
                writeln!(stdout, "critical dim {d} {c}")?;
            }
            for (l, c) in &by_level {
                writeln!(stdout, "critical level {l} {c}")?;
            }
        }
    }
    Ok(())
}
