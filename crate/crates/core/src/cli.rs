//! The `selfsim` command line.
//!
//! Exit codes: 0 success, 1 degenerate input that was not (or could not be)
//! perturbed, 2 parse or usage error, 3 internal invariant violation.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::exact::{Rational, RingTag, RingValue};
use crate::fastdet::{det_from_factors, perturb, FactoredDeterminant};
use crate::matfile::{parse_defining_file, write_defining_file};
use crate::oracle::{det_fraction_free, minor_scan};
use crate::pascal::{
    binomial_lower, det_pascal2_closed, mu_partition_sums, mu_vector, pascal_defining, thue_morse,
    PascalKind, PascalRing,
};
use crate::selfsim::{dense, inverse_dense, ldu_defining, DefiningMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DEGENERATE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "selfsim",
    version,
    about = "Exact computations with b-self-similar matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PerturbMode {
    Auto,
    Off,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    BinomLift,
    Legendre,
    Lower,
    LowerSigned,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RingArg {
    Q,
    Gf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Determinant of M(n) from the digit statistics of 0..n.
    Det {
        #[arg(long = "def")]
        def: PathBuf,
        #[arg(long)]
        n: u64,
        /// Print the product of powers of d(k) before the value.
        #[arg(long)]
        factored: bool,
        #[arg(long, value_enum, default_value = "auto")]
        perturb: PerturbMode,
    },
    /// LDU factors of the defining matrix.
    Ldu {
        #[arg(long = "def")]
        def: PathBuf,
    },
    /// Exact inverse of M(n).
    Inv {
        #[arg(long = "def")]
        def: PathBuf,
        #[arg(long)]
        n: u64,
    },
    /// A single entry M[s][t].
    Entry {
        #[arg(long = "def")]
        def: PathBuf,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
    },
    /// The n x n matrix M(n).
    Dense {
        #[arg(long = "def")]
        def: PathBuf,
        #[arg(long)]
        n: u64,
    },
    /// Emit a defining matrix file.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Thue-Morse bits and the closed-form mod-2 Pascal determinants.
    ThueMorse {
        /// Verify the recursion and determinant closed forms for n <= N.
        #[arg(long)]
        check: Option<u64>,
        /// Print the first N bits.
        #[arg(long)]
        print: Option<u64>,
    },
    /// The alternating vector mu for base B.
    Mu {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        n: u64,
        /// Verify L(n) mu = e_0 (and the partition sums for odd bases).
        #[arg(long)]
        check: bool,
    },
    /// Determinants of all l x l blocks of consecutive rows and columns.
    ScanMinors {
        #[arg(long = "def")]
        def: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        smax: u64,
        #[arg(long)]
        tmax: u64,
    },
    /// Brute-force references.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Time the fast determinant against the dense oracle.
    Bench {
        #[arg(long = "def")]
        def: PathBuf,
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[arg(long)]
        oracle: bool,
        /// Largest n handed to the dense oracle.
        #[arg(long, default_value_t = 512)]
        oracle_max: u64,
    },
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Pascal triangle modulo p.
    Pascal {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "q")]
        ring: RingArg,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Determinant of the materialized M(n) by fraction-free elimination.
    Det {
        #[arg(long = "def")]
        def: PathBuf,
        #[arg(long)]
        n: u64,
    },
}

/// Failure of a subcommand: exit code plus message for the diagnostic stream.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Degenerate { .. }
            | Error::PerturbationFailed
            | Error::NotDegenerate
            | Error::UnsupportedRing(_) => EXIT_DEGENERATE,
            Error::Parse { .. }
            | Error::Normalization
            | Error::InvalidBase(_)
            | Error::SizeLimit { .. }
            | Error::NotPrime(_)
            | Error::NotOddPrime(_)
            | Error::EvenBase(_)
            | Error::RangeTooLarge { .. }
            | Error::ShapeMismatch(_)
            | Error::RingMismatch(_)
            | Error::NotTriangular
            | Error::SingularDiagonal(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INTERNAL,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Exact value for `det` output: nonzero rationals carry an explicit sign.
pub fn format_signed(v: &RingValue) -> String {
    match v {
        RingValue::Q(q) => format_signed_rational(q),
        other => other.to_string(),
    }
}

fn format_signed_rational(q: &Rational) -> String {
    if q.is_zero() {
        "0".to_string()
    } else if q.is_positive() {
        format!("+{q}")
    } else {
        q.to_string()
    }
}

fn load(path: &PathBuf) -> std::result::Result<DefiningMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_defining_file(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and notices to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Det {
            def,
            n,
            factored,
            perturb,
        } => cmd_det(&load(&def)?, n, factored, perturb, out, err),
        Command::Ldu { def } => cmd_ldu(&load(&def)?, out),
        Command::Inv { def, n } => {
            let inv = inverse_dense(&load(&def)?, n)?;
            write!(out, "{inv}")?;
            Ok(())
        }
        Command::Entry { def, s, t } => {
            writeln!(out, "{}", load(&def)?.entry(s, t))?;
            Ok(())
        }
        Command::Dense { def, n } => {
            write!(out, "{}", dense(&load(&def)?, n)?)?;
            Ok(())
        }
        Command::Gen {
            what: GenCommand::Pascal { p, kind, ring },
        } => {
            let kind = match kind {
                KindArg::BinomLift => PascalKind::BinomLift,
                KindArg::Legendre => PascalKind::Legendre,
                KindArg::Lower => PascalKind::Lower,
                KindArg::LowerSigned => PascalKind::LowerSigned,
            };
            let ring = match ring {
                RingArg::Q => PascalRing::Rational,
                RingArg::Gf => PascalRing::PrimeField,
            };
            write!(
                out,
                "{}",
                write_defining_file(&pascal_defining(p, kind, ring)?)
            )?;
            Ok(())
        }
        Command::ThueMorse { check, print } => cmd_thue_morse(check, print, out),
        Command::Mu { base, n, check } => cmd_mu(base, n, check, out),
        Command::ScanMinors { def, l, smax, tmax } => {
            let m = load(&def)?;
            let report = minor_scan(&m, l, smax, tmax);
            writeln!(
                out,
                "blocks {l}x{l}, s <= {smax}, t <= {tmax}: scanned {}, violations {}",
                report.scanned,
                report.violations.len()
            )?;
            for (s, t, d) in &report.violations {
                writeln!(out, "s={s} t={t} det={d}")?;
            }
            Ok(())
        }
        Command::Oracle {
            what: OracleCommand::Det { def, n },
        } => {
            let d = dense(&load(&def)?, n)?;
            writeln!(out, "{}", format_signed(&det_fraction_free(&d)))?;
            Ok(())
        }
        Command::Bench {
            def,
            n_list,
            oracle,
            oracle_max,
        } => cmd_bench(&load(&def)?, &n_list, oracle, oracle_max, out, err),
    }
}

/// Outcome of the fast determinant path.
enum FastDet {
    Value {
        factored: FactoredDeterminant,
        value: RingValue,
    },
    /// Too large to expand; only the factored form is available.
    Factored(FactoredDeterminant),
    Perturbed {
        factored: FactoredDeterminant,
        value: Rational,
    },
}

fn fast_det(
    m: &DefiningMatrix,
    n: u64,
    mode: PerturbMode,
    err: &mut dyn Write,
) -> std::result::Result<FastDet, Failure> {
    match ldu_defining(m) {
        Ok(f) => {
            let factored = det_from_factors(&f, n)?;
            match factored.expand() {
                Ok(value) => Ok(FastDet::Value { factored, value }),
                Err(Error::BitBudgetExceeded { .. }) => Ok(FastDet::Factored(factored)),
                Err(e) => Err(e.into()),
            }
        }
        Err(Error::Degenerate { k }) => {
            if let PerturbMode::Off = mode {
                return Err(Failure {
                    code: EXIT_DEGENERATE,
                    message: format!(
                        "defining matrix is degenerate: leading minor of size {k} vanishes"
                    ),
                });
            }
            let _ = writeln!(
                err,
                "note: leading minor of size {k} vanishes; evaluating a generic perturbation at t = 0"
            );
            let p = perturb(m)?;
            let d = p.det_at_zero(n)?;
            Ok(FastDet::Perturbed {
                factored: d.factored,
                value: d.value,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_det(
    m: &DefiningMatrix,
    n: u64,
    factored: bool,
    mode: PerturbMode,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    match fast_det(m, n, mode, err)? {
        FastDet::Value { factored: f, value } => {
            if factored {
                writeln!(out, "{f} = {value}")?;
            } else {
                writeln!(out, "{}", format_signed(&value))?;
            }
        }
        FastDet::Factored(f) => {
            let _ = writeln!(
                err,
                "note: expansion needs about {} bits; printing the factored form",
                f.estimated_bits()
            );
            writeln!(out, "{f}")?;
        }
        FastDet::Perturbed { factored: f, value } => {
            if factored {
                writeln!(out, "{f} at t=0 = {value}")?;
            } else {
                writeln!(out, "{}", format_signed_rational(&value))?;
            }
        }
    }
    Ok(())
}

fn cmd_ldu(m: &DefiningMatrix, out: &mut dyn Write) -> CmdResult {
    let f = ldu_defining(m)?;
    writeln!(out, "L:")?;
    write!(out, "{}", f.lower)?;
    let d: Vec<String> = f.d.iter().map(|v| v.to_string()).collect();
    writeln!(out, "d: {}", d.join(" "))?;
    writeln!(out, "U:")?;
    write!(out, "{}", f.upper)?;
    Ok(())
}

fn cmd_thue_morse(check: Option<u64>, print: Option<u64>, out: &mut dyn Write) -> CmdResult {
    if let Some(n) = print {
        let bits: String = (0..n).map(|k| char::from(b'0' + thue_morse(k))).collect();
        writeln!(out, "{bits}")?;
    }
    if let Some(limit) = check {
        let p2 = pascal_defining(2, PascalKind::BinomLift, PascalRing::Rational)?;
        let factors = ldu_defining(&p2)?;
        for k in 0..=limit {
            let s = thue_morse(k);
            if k > 0 {
                let half = thue_morse(k / 2);
                let expected = if k % 2 == 0 { half } else { 1 - half };
                if s != expected {
                    return Err(internal(format!("recursion fails at k = {k}")));
                }
            }
            if s as u32 != k.count_ones() % 2 {
                return Err(internal(format!("parity fails at k = {k}")));
            }
            if k >= 1 {
                let fast = det_from_factors(&factors, k)?.expand()?;
                let closed = RingValue::int(det_pascal2_closed(k) as i64);
                if fast != closed {
                    return Err(internal(format!(
                        "det M({k}) = {fast} but the closed form gives {closed}"
                    )));
                }
            }
        }
        writeln!(
            out,
            "thue-morse: recursion, parity and determinants agree for n <= {limit}"
        )?;
    }
    Ok(())
}

fn cmd_mu(base: u64, n: u64, check: bool, out: &mut dyn Write) -> CmdResult {
    let mu = mu_vector(base, n)?;
    let cells: Vec<String> = mu.entries.iter().map(|v| v.to_string()).collect();
    writeln!(out, "{}", cells.join(" "))?;
    if check {
        let b = usize::try_from(base).map_err(|_| Failure::from(Error::InvalidBase(base)))?;
        let l = dense(&binomial_lower(b)?, n)?;
        let image = l.mul_vec(&mu.as_ring_values())?;
        let ok = image
            .iter()
            .enumerate()
            .all(|(i, v)| if i == 0 { v.is_one() } else { v.is_zero() });
        if !ok {
            return Err(internal("L(n) mu differs from e_0"));
        }
        writeln!(out, "check: L(n) mu = e_0")?;
        if base % 2 == 1 {
            for k in 1..n {
                let (even, odd) = mu_partition_sums(base, k)?;
                let expected = num_bigint::BigUint::from(1u8)
                    << (crate::selfsim::digits(k, base)?.digit_sum() - 1);
                if even != expected || odd != expected {
                    return Err(internal(format!("partition sums fail at n = {k}")));
                }
            }
            writeln!(
                out,
                "check: even and odd partition sums equal 2^(digit sum - 1) for 1 <= n < {n}"
            )?;
        }
    }
    Ok(())
}

fn micros(d: Duration) -> String {
    format!("{:.1}", d.as_secs_f64() * 1e6)
}

fn cmd_bench(
    m: &DefiningMatrix,
    n_list: &[u64],
    with_oracle: bool,
    oracle_max: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    writeln!(
        out,
        "{:>12} {:>14} {:>14} {:>7}",
        "n", "fast_us", "oracle_us", "agree"
    )?;
    let mut notified = false;
    for &n in n_list {
        let mut sink: Vec<u8> = Vec::new();
        let start = Instant::now();
        let fast = fast_det(
            m,
            n,
            PerturbMode::Auto,
            if notified { &mut sink } else { err },
        )?;
        let fast_time = start.elapsed();
        notified = true;
        let fast_value = match &fast {
            FastDet::Value { value, .. } => Some(value.clone()),
            FastDet::Perturbed { value, .. } => Some(RingValue::Q(value.clone())),
            FastDet::Factored(_) => None,
        };
        let (oracle_col, agree_col) = if with_oracle && n <= oracle_max && n >= 1 {
            let start = Instant::now();
            let d = det_fraction_free(&dense(m, n)?);
            let t = start.elapsed();
            let agree = match &fast_value {
                Some(v) if same_value(v, &d) => "yes",
                Some(_) => "NO",
                None => "-",
            };
            if agree == "NO" {
                return Err(internal(format!(
                    "fast and oracle determinants differ at n = {n}"
                )));
            }
            (micros(t), agree)
        } else {
            ("-".to_string(), "-")
        };
        writeln!(
            out,
            "{:>12} {:>14} {:>14} {:>7}",
            n,
            micros(fast_time),
            oracle_col,
            agree_col
        )?;
    }
    Ok(())
}

fn same_value(a: &RingValue, b: &RingValue) -> bool {
    match (a, b) {
        (RingValue::Q(_), RingValue::Qt(f)) | (RingValue::Qt(f), RingValue::Q(_)) => {
            let q = f.as_constant();
            q.map(RingValue::Q).as_ref() == Some(if a.tag() == RingTag::Rational { a } else { b })
        }
        _ => a == b,
    }
}
