use std::path::PathBuf;
use std::process::ExitCode;

use circuits_cli::commands::{
    cmd_check_counts, cmd_enumerate, cmd_gen, cmd_solve, cmd_walk, CliError, GenKind, Method,
    Picker, Subset,
};

const USAGE: &str = "\
circuits: exact circuit enumeration, LP augmentation, and circuit walks

usage:
  circuits enumerate <input.poly> <output.circ> --method naive|standard|model
            [--feasible-at <point.vec>] [--sign-compatible-with <dir.vec>]
            [--threads N]
  circuits solve <input.poly> <objective.vec> <start.vec>
  circuits walk <input.poly> <from.vec> <to.vec> <objective.vec>
            [--picker steepest|gaussian]
  circuits gen --type random --n N --ma MA --mb MB --seed S
            [--magnitude M] <output.poly>
  circuits gen --type dualtp --p P --q Q --seed S <output.poly>
  circuits check-counts <n> <m_B> <seed>

Subset flags need --method model. The --threads flag is accepted for
compatibility; execution is single-threaded and fully deterministic.
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("circuits: {err}");
            if matches!(err, CliError::Usage(_)) {
                eprint!("{USAGE}");
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(args: &[String]) -> Result<i32, CliError> {
    let Some((command, rest)) = args.split_first() else {
        return Err(CliError::Usage("missing subcommand".into()));
    };
    match command.as_str() {
        "enumerate" => enumerate(rest),
        "solve" => solve(rest),
        "walk" => walk(rest),
        "gen" => gen(rest),
        "check-counts" => check_counts(rest),
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            Ok(0)
        }
        other => Err(CliError::Usage(format!("unknown subcommand {other:?}"))),
    }
}

type Flags<'a> = Vec<(&'a str, &'a str)>;

/// Splits argv into positional arguments and `--flag value` pairs.
fn split_flags(args: &[String]) -> Result<(Vec<&str>, Flags<'_>), CliError> {
    let mut positional = Vec::new();
    let mut flags = Vec::new();
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        if let Some(name) = arg.strip_prefix("--") {
            let value = iter
                .next()
                .ok_or_else(|| CliError::Usage(format!("flag --{name} needs a value")))?;
            flags.push((name, value.as_str()));
        } else {
            positional.push(arg.as_str());
        }
    }
    Ok((positional, flags))
}

fn parse_number<T: std::str::FromStr>(value: &str, what: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("bad {what} {value:?}")))
}

fn enumerate(args: &[String]) -> Result<i32, CliError> {
    let (positional, flags) = split_flags(args)?;
    let [input, output] = positional.as_slice() else {
        return Err(CliError::Usage(
            "enumerate needs <input.poly> <output.circ>".into(),
        ));
    };
    let mut method = None;
    let mut subset: Option<Subset> = None;
    let mut threads = 1usize;
    for (name, value) in flags {
        match name {
            "method" => {
                method = Some(match value {
                    "naive" => Method::Naive,
                    "standard" => Method::Standard,
                    "model" => Method::Model,
                    other => {
                        return Err(CliError::FlagConflict(format!("unknown method {other:?}")))
                    }
                });
            }
            "feasible-at" => {
                if subset.is_some() {
                    return Err(CliError::FlagConflict("multiple subset flags".into()));
                }
                subset = Some(Subset::FeasibleAt(PathBuf::from(value)));
            }
            "sign-compatible-with" => {
                if subset.is_some() {
                    return Err(CliError::FlagConflict("multiple subset flags".into()));
                }
                subset = Some(Subset::SignCompatibleWith(PathBuf::from(value)));
            }
            "threads" => {
                threads = parse_number(value, "thread count")?;
                if threads == 0 {
                    return Err(CliError::Usage("--threads must be at least 1".into()));
                }
            }
            other => return Err(CliError::Usage(format!("unknown flag --{other}"))),
        }
    }
    let method = method.ok_or_else(|| CliError::Usage("enumerate needs --method".into()))?;
    cmd_enumerate(
        &PathBuf::from(input),
        &PathBuf::from(output),
        method,
        subset.as_ref(),
        threads,
    )
}

fn solve(args: &[String]) -> Result<i32, CliError> {
    let (positional, flags) = split_flags(args)?;
    if let Some((name, _)) = flags.first() {
        return Err(CliError::Usage(format!("unknown flag --{name}")));
    }
    let [input, objective, start] = positional.as_slice() else {
        return Err(CliError::Usage(
            "solve needs <input.poly> <objective.vec> <start.vec>".into(),
        ));
    };
    cmd_solve(
        &PathBuf::from(input),
        &PathBuf::from(objective),
        &PathBuf::from(start),
    )
}

fn walk(args: &[String]) -> Result<i32, CliError> {
    let (positional, flags) = split_flags(args)?;
    let [input, from, to, objective] = positional.as_slice() else {
        return Err(CliError::Usage(
            "walk needs <input.poly> <from.vec> <to.vec> <objective.vec>".into(),
        ));
    };
    let mut picker = Picker::Steepest;
    for (name, value) in flags {
        match name {
            "picker" => {
                picker = match value {
                    "steepest" => Picker::Steepest,
                    "gaussian" => Picker::Gaussian,
                    other => {
                        return Err(CliError::FlagConflict(format!("unknown picker {other:?}")))
                    }
                };
            }
            other => return Err(CliError::Usage(format!("unknown flag --{other}"))),
        }
    }
    cmd_walk(
        &PathBuf::from(input),
        &PathBuf::from(from),
        &PathBuf::from(to),
        &PathBuf::from(objective),
        picker,
    )
}

fn gen(args: &[String]) -> Result<i32, CliError> {
    let (positional, flags) = split_flags(args)?;
    let [output] = positional.as_slice() else {
        return Err(CliError::Usage("gen needs <output.poly>".into()));
    };
    let mut kind_name = None;
    let mut seed = None;
    let mut n = None;
    let mut m_a = None;
    let mut m_b = None;
    let mut magnitude = 5i64;
    let mut p = None;
    let mut q = None;
    for (name, value) in flags {
        match name {
            "type" => kind_name = Some(value.to_string()),
            "seed" => seed = Some(parse_number(value, "seed")?),
            "n" => n = Some(parse_number(value, "dimension")?),
            "ma" => m_a = Some(parse_number(value, "equality count")?),
            "mb" => m_b = Some(parse_number(value, "inequality count")?),
            "magnitude" => magnitude = parse_number(value, "magnitude")?,
            "p" => p = Some(parse_number(value, "p")?),
            "q" => q = Some(parse_number(value, "q")?),
            other => return Err(CliError::Usage(format!("unknown flag --{other}"))),
        }
    }
    let seed = seed.ok_or_else(|| CliError::Usage("gen needs --seed".into()))?;
    let kind = match kind_name.as_deref() {
        Some("random") => GenKind::Random {
            n: n.ok_or_else(|| CliError::Usage("gen --type random needs --n".into()))?,
            m_a: m_a.ok_or_else(|| CliError::Usage("gen --type random needs --ma".into()))?,
            m_b: m_b.ok_or_else(|| CliError::Usage("gen --type random needs --mb".into()))?,
            magnitude,
        },
        Some("dualtp") => GenKind::DualTransportation {
            p: p.ok_or_else(|| CliError::Usage("gen --type dualtp needs --p".into()))?,
            q: q.ok_or_else(|| CliError::Usage("gen --type dualtp needs --q".into()))?,
        },
        Some(other) => return Err(CliError::Usage(format!("unknown --type {other:?}"))),
        None => return Err(CliError::Usage("gen needs --type random|dualtp".into())),
    };
    cmd_gen(&kind, seed, &PathBuf::from(output))
}

fn check_counts(args: &[String]) -> Result<i32, CliError> {
    let (positional, flags) = split_flags(args)?;
    if let Some((name, _)) = flags.first() {
        return Err(CliError::Usage(format!("unknown flag --{name}")));
    }
    let [n, m_b, seed] = positional.as_slice() else {
        return Err(CliError::Usage("check-counts needs <n> <m_B> <seed>".into()));
    };
    cmd_check_counts(
        parse_number(n, "dimension")?,
        parse_number(m_b, "inequality count")?,
        parse_number(seed, "seed")?,
    )
}
