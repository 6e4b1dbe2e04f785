//! Circuit files, the gnuplot writer and the `mpqc` command line.
//!
//! A circuit file is line oriented:
//!
//! ```text
//! # Bell pair across a bystander
//! qubits 3
//! prec 256
//! rdo_block 0 2
//! H 0
//! CNOT 0 2
//! rdo 0 2
//! ```
//!
//! `qubits`, `prec` and `trunc` must come before the first gate or query.
//! Gates are `H X Y Z S T q`, `CNOT CZ SWAP qa qb`, `TOFFOLI qa qb qc` and
//! `U2 q`, `U4 qa qb`, `U8 qa qb qc` followed by 4, 16 or 64 row-major
//! `re,im` entries. Queries print a reduced density matrix.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::matrix::{parse_complex_token, MPMatrix, Series};
use crate::mps::{default_truncation, format_density, Gate, MPSState};
use crate::nmr::{self, FidOptions, SpinSystemParams};
use crate::precision::{MPReal, Precision};

pub const DEFAULT_PRECISION: u64 = 256;
pub const DEFAULT_DIGITS: usize = 8;

#[derive(Clone, Debug)]
pub enum Instruction {
    Apply(Gate),
    Rdo(Vec<usize>),
    RdoBlock(usize, usize),
}

#[derive(Clone, Debug)]
pub struct CircuitProgram {
    pub qubits: usize,
    pub prec: Precision,
    /// `None` means the precision-derived default.
    pub trunc: Option<MPReal>,
    /// Each instruction with its 1-based source line.
    pub instructions: Vec<(usize, Instruction)>,
}

impl CircuitProgram {
    pub fn gate_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|(_, i)| matches!(i, Instruction::Apply(_)))
            .count()
    }

    pub fn query_count(&self) -> usize {
        self.instructions.len() - self.gate_count()
    }

    pub fn truncation(&self) -> MPReal {
        self.trunc.clone().unwrap_or_else(|| default_truncation(self.prec))
    }
}

/// Settings that take precedence over a file's own directives.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub prec: Option<Precision>,
    pub trunc: Option<String>,
}

pub fn parse_circuit(text: &str) -> Result<CircuitProgram> {
    parse_circuit_with(text, &Overrides::default())
}

pub fn parse_circuit_with(text: &str, overrides: &Overrides) -> Result<CircuitProgram> {
    let mut qubits: Option<usize> = None;
    let mut prec = overrides.prec;
    // The source line is kept so a bad value in the file can be reported.
    let mut trunc_text: Option<(String, Option<usize>)> = overrides.trunc.clone().map(|t| (t, None));
    let mut body_started = false;
    let mut instructions = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| Error::Circuit { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let head = words.next().expect("non-empty line");
        let args: Vec<&str> = words.collect();
        let keyword = head.to_ascii_lowercase();

        match keyword.as_str() {
            "qubits" | "prec" | "trunc" => {
                if body_started {
                    return Err(err(format!("`{keyword}` must precede every gate and query")));
                }
                let [value] = args[..] else {
                    return Err(err(format!("`{keyword}` takes exactly one value")));
                };
                match keyword.as_str() {
                    "qubits" => {
                        if qubits.is_some() {
                            return Err(err("duplicate `qubits` directive".into()));
                        }
                        let n = parse_index(value).map_err(&err)?;
                        if n == 0 {
                            return Err(err("need at least one qubit".into()));
                        }
                        qubits = Some(n);
                    }
                    "prec" => {
                        let bits: u64 = value
                            .parse()
                            .map_err(|_| err(format!("invalid precision `{value}`")))?;
                        let p = Precision::new(bits).map_err(|e| err(e.to_string()))?;
                        if overrides.prec.is_none() {
                            prec = Some(p);
                        }
                    }
                    _ => {
                        if overrides.trunc.is_none() {
                            trunc_text = Some((value.to_string(), Some(line)));
                        }
                    }
                }
            }
            _ => {
                body_started = true;
                let n = qubits.ok_or_else(|| err("`qubits N` must come first".into()))?;
                let p = prec.unwrap_or_else(|| Precision::new(DEFAULT_PRECISION).expect("valid default"));
                let instr = parse_instruction(&keyword, &args, n, p).map_err(|e| match e {
                    Error::Circuit { .. } => e,
                    other => err(other.to_string()),
                })?;
                instructions.push((line, instr));
            }
        }
    }

    let qubits = qubits.ok_or_else(|| Error::Circuit {
        line: text.lines().count().max(1),
        message: "missing `qubits` directive".into(),
    })?;
    let prec = prec.unwrap_or_else(|| Precision::new(DEFAULT_PRECISION).expect("valid default"));
    let trunc = match trunc_text {
        None => None,
        Some((t, line)) => {
            let parsed = MPReal::parse_with_prec(&t, prec).and_then(|v| {
                if v.is_finite() && (v.is_positive() || v.is_zero()) {
                    Ok(v)
                } else {
                    Err(Error::InvalidArgument(format!("truncation threshold `{t}` must be finite and non-negative")))
                }
            });
            match (parsed, line) {
                (Ok(v), _) => Some(v),
                (Err(e), Some(line)) => return Err(Error::Circuit { line, message: e.to_string() }),
                (Err(e), None) => return Err(e),
            }
        }
    };
    Ok(CircuitProgram {
        qubits,
        prec,
        trunc,
        instructions,
    })
}

fn parse_index(tok: &str) -> std::result::Result<usize, String> {
    tok.parse().map_err(|_| format!("invalid qubit index `{tok}`"))
}

fn parse_instruction(keyword: &str, args: &[&str], n: usize, prec: Precision) -> Result<Instruction> {
    let bad = |m: String| Error::InvalidArgument(m);
    let indices = |k: usize| -> Result<Vec<usize>> {
        if args.len() < k {
            return Err(bad(format!("`{keyword}` needs {k} qubit indices")));
        }
        let qs = args[..k]
            .iter()
            .map(|t| parse_index(t).map_err(bad))
            .collect::<Result<Vec<_>>>()?;
        if let Some(q) = qs.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidQubits(format!("qubit {q} out of range for {n} qubits")));
        }
        Ok(qs)
    };
    let exact = |k: usize| -> Result<Vec<usize>> {
        if args.len() != k {
            return Err(bad(format!("`{keyword}` takes {k} qubit indices, got {}", args.len())));
        }
        indices(k)
    };
    let span_ok = |qs: &[usize]| -> Result<()> {
        let lo = qs.iter().min().unwrap();
        let hi = qs.iter().max().unwrap();
        if hi - lo >= 3 {
            return Err(Error::InvalidQubits(format!(
                "targets {qs:?} span more than 3 sites; insert SWAP gates"
            )));
        }
        Ok(())
    };

    let gate = match keyword {
        "h" | "x" | "y" | "z" | "s" | "t" => {
            let q = exact(1)?[0];
            match keyword {
                "h" => Gate::h(q, prec),
                "x" => Gate::x(q, prec),
                "y" => Gate::y(q, prec),
                "z" => Gate::z(q, prec),
                "s" => Gate::s(q, prec),
                _ => Gate::t(q, prec),
            }
        }
        "cnot" | "cz" | "swap" => {
            let q = exact(2)?;
            span_ok(&q)?;
            match keyword {
                "cnot" => Gate::cnot(q[0], q[1], prec)?,
                "cz" => Gate::cz(q[0], q[1], prec)?,
                _ => Gate::swap(q[0], q[1], prec)?,
            }
        }
        "toffoli" => {
            let q = exact(3)?;
            span_ok(&q)?;
            Gate::toffoli(q[0], q[1], q[2], prec)?
        }
        "u2" | "u4" | "u8" => {
            let k = match keyword {
                "u2" => 1,
                "u4" => 2,
                _ => 3,
            };
            let q = indices(k)?;
            span_ok(&q)?;
            let dim = 1usize << k;
            let entries = &args[k..];
            if entries.len() != dim * dim {
                return Err(bad(format!(
                    "`{keyword}` needs {} matrix entries, got {}",
                    dim * dim,
                    entries.len()
                )));
            }
            let values = entries
                .iter()
                .map(|t| parse_complex_token(t, prec))
                .collect::<Result<Vec<_>>>()?;
            Gate::new(MPMatrix::from_vec(dim, dim, values)?, &q)?
        }
        "rdo" => {
            if args.is_empty() {
                return Err(bad("`rdo` needs at least one qubit".into()));
            }
            let qs = indices(args.len())?;
            crate::matrix::validate_subset(&qs, n)?;
            return Ok(Instruction::Rdo(qs));
        }
        "rdo_block" => {
            let q = exact(2)?;
            if q[0] > q[1] {
                return Err(Error::InvalidQubits(format!("empty block {}..{}", q[0], q[1])));
            }
            return Ok(Instruction::RdoBlock(q[0], q[1]));
        }
        _ => return Err(bad(format!("unknown gate or directive `{keyword}`"))),
    };
    Ok(Instruction::Apply(gate))
}

/// Executes the program on a fresh `|0…0⟩`, printing one line per query.
pub fn run_circuit(prog: &CircuitProgram, out: &mut impl Write, digits: usize) -> Result<MPSState> {
    let mut state = MPSState::with_options(prog.qubits, prog.prec, prog.truncation(), None)?;
    for (line, instr) in &prog.instructions {
        let at_line = |e: Error| Error::Circuit {
            line: *line,
            message: e.to_string(),
        };
        match instr {
            Instruction::Apply(g) => state.apply_gate(g).map_err(at_line)?,
            Instruction::Rdo(qs) => {
                let rho = state.rdo(qs).map_err(at_line)?;
                writeln!(out, "{}", format_density(&rho, digits))?;
            }
            Instruction::RdoBlock(a, b) => {
                let rho = state.rdo_block(*a, *b).map_err(at_line)?;
                writeln!(out, "{}", format_density(&rho, digits))?;
            }
        }
    }
    Ok(state)
}

/// Two-column gnuplot data: `k·stride·df` and the real part of sample
/// `k·stride`.
pub fn write_gp_1d(x: &Series, df: &MPReal, stride: usize, out: &mut impl Write, digits: usize) -> Result<()> {
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be at least 1".into()));
    }
    let prec = x.precision().max(df.precision());
    for (k, idx) in (0..x.len()).step_by(stride).enumerate() {
        let f = df * &MPReal::from_i64((k * stride) as i64, prec);
        writeln!(
            out,
            "{} {}",
            f.to_sci_string(digits),
            x.values[idx].re().to_sci_string(digits)
        )?;
    }
    Ok(())
}

pub fn gp_1d_print(x: &Series, df: &MPReal, stride: usize, path: &Path, digits: usize) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = io::BufWriter::new(file);
    write_gp_1d(x, df, stride, &mut w, digits)?;
    w.flush()?;
    Ok(())
}

#[derive(Parser, Debug)]
#[command(name = "mpqc", version, about = "Multiprecision MPS circuit and NMR simulator")]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true)]
    pub prec: Option<u64>,
    /// Relative Schmidt-coefficient truncation threshold [default: 2^(-prec/2)].
    #[arg(long, global = true)]
    pub trunc: Option<String>,
    /// Significant digits in printed numbers.
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS)]
    pub digits: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a circuit file and print its queries.
    Run { file: PathBuf },
    /// Simulate the two-spin FID and write its magnitude spectrum.
    Nmr(NmrArgs),
}

#[derive(Args, Debug)]
pub struct NmrArgs {
    /// Proton precession frequency in Hz.
    #[arg(long, default_value = "4e8")]
    pub w1: String,
    /// Carbon precession frequency in Hz.
    #[arg(long, default_value = "1.25e8")]
    pub w2: String,
    /// J coupling in Hz.
    #[arg(long, default_value = "1.4e5")]
    pub j12: String,
    /// Temperature in kelvin.
    #[arg(long, default_value = "300")]
    pub temp: String,
    /// Sampling interval as a fraction of 1/w1.
    #[arg(long, default_value = nmr::DEFAULT_DT_FACTOR)]
    pub dt_factor: String,
    /// Number of time samples [default: next power of two above 1/(dt·J12)].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output data file.
    #[arg(long, default_value = "example_zp.fid")]
    pub out: PathBuf,
}

/// Parses `args` and executes the command, writing results to `out`.
pub fn execute(cli: &Cli, out: &mut impl Write) -> Result<()> {
    if cli.digits == 0 {
        return Err(Error::InvalidDigits(0));
    }
    crate::precision::set_output_digits(cli.digits)?;
    let prec = cli.prec.map(Precision::new).transpose()?;
    match &cli.command {
        Command::Run { file } => {
            let text = fs::read_to_string(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let overrides = Overrides {
                prec,
                trunc: cli.trunc.clone(),
            };
            let prog = parse_circuit_with(&text, &overrides)?;
            run_circuit(&prog, out, cli.digits)?;
        }
        Command::Nmr(a) => {
            let prec = prec.unwrap_or(Precision::new(DEFAULT_PRECISION)?);
            let params = SpinSystemParams::from_strs(&a.w1, &a.w2, &a.j12, &a.temp, prec)?;
            let opts = FidOptions {
                dt_factor: MPReal::parse_with_prec(&a.dt_factor, prec)?,
                samples: a.samples,
            };
            let run = nmr::run_fid_with(&params, &opts)?;
            gp_1d_print(&run.spectrum, &run.spectrum.step, 1, &a.out, cli.digits)?;
            writeln!(
                out,
                "wrote {} points ({} samples, df = {} Hz) to {}",
                run.spectrum.len(),
                run.samples,
                run.spectrum.step.to_sci_string(cli.digits),
                a.out.display()
            )?;
        }
    }
    Ok(())
}

/// Entry point for the binary; returns the process exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("mpqc: {e}");
            1
        }
    }
}
