//! Command implementations behind the `circuits` binary. Each command
//! returns the process exit code on success; failures map to the fixed
//! taxonomy in [`CliError::exit_code`].

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use circuits_core::augment::{solve_steepest_descent, verify_trace, Terminal};
use circuits_core::circuit_enum::{
    count_canonical, count_slack_standard, count_splitfree_standard, naive_circuits,
    standard_form_circuits, support_minimal_kernel,
};
use circuits_core::exactnum::rat;
use circuits_core::polyhedron::{gen_dual_transportation, gen_random, CircuitSet, Polyhedron};
use circuits_core::rng::SplitMix64;
use circuits_core::vertex_enum::{feasible_circuits, model_circuits, sign_compatible_circuits};
use circuits_core::walks::{c_steepest_walk, sign_compatible_sum, validate_walk, CircuitPicker, CircuitWalk};
use circuits_core::{Error, RatMatrix, RatVector};

use crate::format::{
    parse_poly, parse_vec, render_trace, render_walk, serialize_circ, serialize_poly, ParseError,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Parse { path: PathBuf, err: ParseError },
    NotPointed,
    FlagConflict(String),
    InvalidSizes(String),
    InfeasiblePoint(String),
    IdenticalEndpoints,
    CountMismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 1,
            CliError::Parse { .. } => 2,
            CliError::NotPointed => 3,
            CliError::FlagConflict(_) | CliError::InvalidSizes(_) => 4,
            CliError::InfeasiblePoint(_) => 6,
            CliError::IdenticalEndpoints => 7,
            CliError::CountMismatch(_) => 8,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Io(path, err) => write!(f, "{}: {err}", path.display()),
            CliError::Parse { path, err } => write!(f, "{}: {err}", path.display()),
            CliError::NotPointed => write!(f, "instance is not pointed: rank([A; B]) < n"),
            CliError::FlagConflict(msg) => write!(f, "flag conflict: {msg}"),
            CliError::InvalidSizes(msg) => write!(f, "invalid sizes: {msg}"),
            CliError::InfeasiblePoint(msg) => write!(f, "{msg}"),
            CliError::IdenticalEndpoints => write!(f, "endpoints are identical"),
            CliError::CountMismatch(msg) => write!(f, "count mismatch: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Naive,
    Standard,
    Model,
}

#[derive(Debug, Clone)]
pub enum Subset {
    FeasibleAt(PathBuf),
    SignCompatibleWith(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picker {
    Steepest,
    Gaussian,
}

#[derive(Debug, Clone)]
pub enum GenKind {
    Random {
        n: usize,
        m_a: usize,
        m_b: usize,
        magnitude: i64,
    },
    DualTransportation {
        p: usize,
        q: usize,
    },
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_poly(path: &Path) -> Result<Polyhedron, CliError> {
    let poly = parse_poly(&read_file(path)?).map_err(|err| CliError::Parse {
        path: path.to_path_buf(),
        err,
    })?;
    match poly.validate() {
        Ok(()) => Ok(poly),
        Err(Error::NotPointed) => Err(CliError::NotPointed),
        Err(other) => Err(CliError::Parse {
            path: path.to_path_buf(),
            err: ParseError {
                line: 0,
                message: other.to_string(),
            },
        }),
    }
}

fn load_vec(path: &Path) -> Result<RatVector, CliError> {
    parse_vec(&read_file(path)?).map_err(|err| CliError::Parse {
        path: path.to_path_buf(),
        err,
    })
}

fn infeasible(what: &str) -> CliError {
    CliError::InfeasiblePoint(format!("{what} does not lie in the polyhedron"))
}

/// `enumerate`: write the circuit set (or a face-selected subset) as .circ.
pub fn cmd_enumerate(
    input: &Path,
    output: &Path,
    method: Method,
    subset: Option<&Subset>,
    _threads: usize,
) -> Result<i32, CliError> {
    if subset.is_some() && method != Method::Model {
        return Err(CliError::FlagConflict(
            "subset selection requires --method model".into(),
        ));
    }
    let poly = load_poly(input)?;
    let started = Instant::now();
    let set: CircuitSet = match (method, subset) {
        (Method::Naive, _) => naive_circuits(&poly),
        (Method::Standard, _) => standard_form_circuits(&poly),
        (Method::Model, None) => model_circuits(&poly),
        (Method::Model, Some(Subset::FeasibleAt(path))) => {
            let x0 = load_vec(path)?;
            feasible_circuits(&poly, &x0).map_err(|e| match e {
                Error::PointNotInPolyhedron => infeasible("the --feasible-at point"),
                other => CliError::InfeasiblePoint(other.to_string()),
            })?
        }
        (Method::Model, Some(Subset::SignCompatibleWith(path))) => {
            let u = load_vec(path)?;
            sign_compatible_circuits(&poly, &u)
                .map_err(|e| CliError::InfeasiblePoint(e.to_string()))?
        }
    };
    let elapsed = started.elapsed();
    fs::write(output, serialize_circ(&set, poly.dim()))
        .map_err(|e| CliError::Io(output.to_path_buf(), e))?;
    println!("cardinality {}", set.cardinality());
    eprintln!("time: {elapsed:?}");
    Ok(0)
}

/// `solve`: steepest-descent augmentation from a feasible start, printing
/// the trace, the terminal status, and the verification report.
pub fn cmd_solve(input: &Path, objective: &Path, start: &Path) -> Result<i32, CliError> {
    let poly = load_poly(input)?;
    let c = load_vec(objective)?;
    let x0 = load_vec(start)?;
    if c.len() != poly.dim() || x0.len() != poly.dim() {
        return Err(CliError::InvalidSizes(
            "objective/start length must match the instance dimension".into(),
        ));
    }
    if !poly.contains(&x0) {
        return Err(infeasible("the start point"));
    }
    let trace = solve_steepest_descent(&poly, &c, &x0).expect("start point verified feasible");
    print!("{}", render_trace(&trace));
    let report = verify_trace(&poly, &c, &trace, None);
    println!(
        "verify: exact_and_feasible={} steepness_monotone={} no_repeated_circuit={} orthant_change_strict={}",
        report.exact_and_feasible,
        report.steepness_monotone,
        report.no_repeated_circuit,
        report.orthant_change_strict
    );
    for violation in &report.violations {
        println!("verify violation: {violation}");
    }
    Ok(match trace.terminal {
        Terminal::Optimal { .. } => 0,
        Terminal::Unbounded { .. } => 5,
    })
}

/// `walk`: c-steepest (or Gaussian-picked) sign-compatible circuit walk
/// between two feasible points, printing the walk and its report.
pub fn cmd_walk(
    input: &Path,
    from: &Path,
    to: &Path,
    objective: &Path,
    picker: Picker,
) -> Result<i32, CliError> {
    let poly = load_poly(input)?;
    let v1 = load_vec(from)?;
    let v2 = load_vec(to)?;
    let c = load_vec(objective)?;
    if v1.len() != poly.dim() || v2.len() != poly.dim() || c.len() != poly.dim() {
        return Err(CliError::InvalidSizes(
            "vector length must match the instance dimension".into(),
        ));
    }
    if !poly.contains(&v1) {
        return Err(infeasible("the from-point"));
    }
    if !poly.contains(&v2) {
        return Err(infeasible("the to-point"));
    }
    if v1 == v2 {
        return Err(CliError::IdenticalEndpoints);
    }
    let walk = match picker {
        Picker::Steepest => {
            c_steepest_walk(&poly, &v1, &v2, &c).expect("endpoints verified distinct and feasible")
        }
        Picker::Gaussian => {
            let u = circuits_core::exactnum::sub_vec(&v2, &v1);
            let terms = sign_compatible_sum(&poly, &u, CircuitPicker::NaiveGaussian)
                .expect("u verified nonzero and in ker(A)");
            CircuitWalk::from_sum(&v1, terms)
        }
    };
    print!("{}", render_walk(&walk, poly.dim()));
    let report = validate_walk(&poly, &walk, Some(&c), None);
    println!(
        "report: feasible={} sign_compatible={} integral={} steepness_monotone={} x_support_contained={}",
        report.feasible,
        report.sign_compatible,
        report.integral,
        report.steepness_monotone.unwrap_or(true),
        report.x_support_contained
    );
    Ok(0)
}

/// `gen`: write a deterministic seeded instance.
pub fn cmd_gen(kind: &GenKind, seed: u64, output: &Path) -> Result<i32, CliError> {
    let poly = match *kind {
        GenKind::Random { n, m_a, m_b, magnitude } => gen_random(n, m_a, m_b, seed, magnitude)
            .map_err(|_| {
                CliError::InvalidSizes(format!(
                    "cannot build a pointed instance with n={n} mA={m_a} mB={m_b} magnitude={magnitude}"
                ))
            })?
            .poly,
        GenKind::DualTransportation { p, q } => {
            if p == 0 || q == 0 {
                return Err(CliError::InvalidSizes("p and q must be positive".into()));
            }
            let mut rng = SplitMix64::new(seed);
            let costs = RatMatrix::from_rows(
                (0..p)
                    .map(|_| (0..q).map(|_| rat(rng.int_in(0, 9))).collect())
                    .collect(),
                q,
            );
            gen_dual_transportation(p, q, &costs)
        }
    };
    fs::write(output, serialize_poly(&poly)).map_err(|e| CliError::Io(output.to_path_buf(), e))?;
    println!(
        "poly {} {} {}",
        poly.dim(),
        poly.eq_mat().rows(),
        poly.ineq_mat().rows()
    );
    Ok(0)
}

/// `check-counts`: draw a random B with every subdeterminant nonzero,
/// enumerate the three standard-form circuit sets by brute force, and
/// compare against the closed-form counts.
pub fn cmd_check_counts(n: usize, m_b: usize, seed: u64) -> Result<i32, CliError> {
    if n < 1 || m_b < n || n > 3 || m_b > 5 {
        return Err(CliError::InvalidSizes(
            "check-counts needs 1 <= n <= 3 and n <= m_B <= 5".into(),
        ));
    }
    let mut rng = SplitMix64::new(seed);
    let b = loop {
        let candidate = RatMatrix::from_rows(
            (0..m_b)
                .map(|_| (0..n).map(|_| rat(rng.int_in(-9, 9))).collect())
                .collect(),
            n,
        );
        if candidate.all_square_subdeterminants_nonzero() {
            break candidate;
        }
    };

    // C_<=(B) on the full-dimensional instance {Bx <= 1}.
    let full_dim = Polyhedron::new(
        RatMatrix::zero(0, n),
        vec![],
        b.clone(),
        vec![rat(1); m_b],
    )
    .expect("B has no zero rows by the subdeterminant check");
    let canonical = naive_circuits(&full_dim).cardinality() as u64;

    // C([B I]) and C([B -B I]).
    let mut slack = RatMatrix::zero(m_b, n + m_b);
    let mut split = RatMatrix::zero(m_b, 2 * n + m_b);
    for r in 0..m_b {
        for c in 0..n {
            *slack.at_mut(r, c) = b.at(r, c).clone();
            *split.at_mut(r, c) = b.at(r, c).clone();
            *split.at_mut(r, n + c) = -b.at(r, c).clone();
        }
        *slack.at_mut(r, n + r) = rat(1);
        *split.at_mut(r, 2 * n + r) = rat(1);
    }
    let slack_count = support_minimal_kernel(&slack).cardinality() as u64;
    let split_count = support_minimal_kernel(&split).cardinality() as u64;

    let checks = [
        ("splitfree", split_count, count_splitfree_standard(n as u64, m_b as u64)),
        ("slack", slack_count, count_slack_standard(n as u64, m_b as u64)),
        ("canonical", canonical, count_canonical(n as u64, 0, m_b as u64)),
    ];
    let mut failures = Vec::new();
    for (name, enumerated, formula) in checks {
        println!("{name}: formula={formula} enumerated={enumerated}");
        if enumerated != formula {
            failures.push(format!("{name}: formula={formula} enumerated={enumerated}"));
        }
    }
    if failures.is_empty() {
        Ok(0)
    } else {
        Err(CliError::CountMismatch(failures.join("; ")))
    }
}
