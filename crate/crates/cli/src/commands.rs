use crate::format::{
    read_system, to_json_text, write_atomic, CanonicalFile, FloatComparison, FloatRow,
    RawSystemFile, ReportFile,
};
use crate::render::{fraction, poly_vector, witness_line, witness_tables};
use crate::{CheckArgs, CliError, GenArgs, SelftestArgs, SolveArgs, WitnessArgs};
use impobs_core::criteria::{
    build_obs_matrix, is_impulse_observable_with, order_reduce, search_witness, ObservabilityReport,
};
use impobs_core::float_rank::{float_rank, TolerancePolicy};
use impobs_core::frequency::{impulse_order, polynomial_witness_from_solution};
use impobs_core::rational::{format_vector, parse_decimal, parse_rational};
use impobs_core::suites::{run_all, SuiteConfig};
use impobs_core::weierstrass::{assemble, random_canonical};
use impobs_core::{solve_frequency, DescriptorSystem, Execution, Rational, RationalPolynomial};
use std::path::PathBuf;

fn policy_name(p: TolerancePolicy) -> String {
    match p {
        TolerancePolicy::Default => "default".into(),
        TolerancePolicy::Absolute(t) => format!("abs:{t}"),
        TolerancePolicy::Relative(f) => format!("rel:{f}"),
    }
}

fn compare_float(
    sys: &DescriptorSystem,
    rep: &ObservabilityReport,
    policy: TolerancePolicy,
) -> Result<FloatComparison, CliError> {
    let mut rows = Vec::with_capacity(rep.rank_table.len());
    for row in &rep.rank_table {
        let obs = build_obs_matrix(sys, row.r + 2)?;
        rows.push(FloatRow {
            r: row.r,
            exact: row.rank,
            float: float_rank(obs.matrix(), policy),
        });
    }
    Ok(FloatComparison {
        policy: policy_name(policy),
        disagreements: rows.iter().filter(|r| r.exact != r.float).count(),
        rows,
    })
}

pub fn check(args: &CheckArgs, exec: Execution) -> Result<u8, CliError> {
    let file = read_system(&args.input.system, args.input.approx)?;
    let sys = &file.system;
    let rep = is_impulse_observable_with(sys, args.strategy, exec)?;
    let mut report = ReportFile::new(file.name.clone(), sys, &rep);
    if args.compare_float {
        report.float_comparison = Some(compare_float(sys, &rep, args.float_tol)?);
    }

    if let Some(name) = &file.name {
        println!("system: {name}");
    }
    println!(
        "n = {}, m = {}, rank E = {}",
        sys.n(),
        sys.m(),
        sys.rank_e()
    );
    println!("det(sE - A) = {}", sys.det_pencil());
    println!("strategy: {}", report.strategy);
    println!("{:>4} {:>6} {:>9}", "r", "rank", "required");
    for row in &rep.rank_table {
        println!("{:>4} {:>6} {:>9}", row.r, row.rank, row.required);
    }
    if let Some(fc) = &report.float_comparison {
        for row in &fc.rows {
            println!(
                "float rank r = {}: exact {}, float {}",
                row.r, row.exact, row.float
            );
        }
        println!("float disagreements ({}): {}", fc.policy, fc.disagreements);
    }
    if rep.verdict {
        println!("verdict: impulse observable");
    } else {
        println!("verdict: not impulse observable");
    }
    if let Some(w) = &rep.witness {
        println!("witness: {}", witness_line(w));
        println!("{}", witness_tables(w, "  "));
    }

    let json = to_json_text(&report);
    match &args.out {
        Some(path) => write_atomic(path, &json)?,
        None => print!("{json}"),
    }
    Ok(if rep.verdict { 0 } else { 1 })
}

pub fn witness(args: &WitnessArgs) -> Result<u8, CliError> {
    let file = read_system(&args.input.system, args.input.approx)?;
    let sys = &file.system;
    let max = args.max_order.unwrap_or(sys.n() - 1);
    let Some(minimal) = (0..=max).find_map(|r| search_witness(sys, r)) else {
        println!("no unobservable impulse up to order {max}");
        return Ok(1);
    };
    println!("minimal-order witness: {}", witness_line(&minimal));
    println!("{}", witness_tables(&minimal, "  "));
    if let Some(top) = search_witness(sys, max).filter(|w| w.order() > minimal.order()) {
        println!(
            "highest-order witness up to order {max}: {}",
            witness_line(&top)
        );
        println!("{}", witness_tables(&top, "  "));
        let reduced = order_reduce(sys, &top)?;
        println!("  reduces to: {}", witness_line(&reduced));
    }
    Ok(0)
}

fn parse_vector(text: &str, approx: bool) -> Result<Vec<Rational>, CliError> {
    let inner = text
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|part| {
            let part = part.trim();
            parse_rational(part)
                .or_else(|e| if approx { parse_decimal(part) } else { Err(e) })
                .map_err(|e| CliError::Input(format!("--w: {e} in {part:?}")))
        })
        .collect()
}

/// `num / den` in lowest terms with a monic denominator.
fn reduce(num: &RationalPolynomial, den: &RationalPolynomial) -> String {
    if num.is_zero() {
        return "0".into();
    }
    let g = num.gcd(den);
    let (n, _) = num.div_rem(&g).expect("gcd is nonzero");
    let (d, _) = den.div_rem(&g).expect("gcd is nonzero");
    let lead = d.leading().expect("nonzero").recip();
    fraction(&n.scale(&lead), &d.scale(&lead))
}

pub fn solve(args: &SolveArgs) -> Result<u8, CliError> {
    let file = read_system(&args.input.system, args.input.approx)?;
    let sys = &file.system;
    let w = parse_vector(&args.w, args.input.approx)?;
    let sol = solve_frequency(sys, &w).map_err(|e| CliError::Input(e.to_string()))?;

    println!("w = {}", format_vector(&w));
    println!("X_P = {}", poly_vector(&sol.x_poly));
    match impulse_order(&sol.x_poly) {
        Some(k) => println!("impulse order: {k}"),
        None => println!("no impulse"),
    }
    let x_a: Vec<String> = (0..sys.n())
        .map(|i| {
            let (num, den) = sol.reduced_proper(i);
            fraction(&num, &den)
        })
        .collect();
    println!("X_A = ({})", x_a.join(", "));
    println!("q = {}", format_vector(&sol.q));
    let cx: Vec<String> = sol
        .output_numerators(sys)
        .iter()
        .map(|num| reduce(num, &sol.denom))
        .collect();
    if sol.output_vanishes(sys) {
        println!("CX = 0");
    } else {
        println!("CX = ({}) != 0", cx.join(", "));
    }
    let derived =
        polynomial_witness_from_solution(sys, &sol).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(wit) = derived {
        println!("witness (w - q, X_P): {}", witness_line(&wit));
        println!("{}", witness_tables(&wit, "  "));
    }
    Ok(0)
}

pub fn gen(args: &GenArgs) -> Result<u8, CliError> {
    let data = random_canonical(args.seed, args.n1, args.n2, args.m, args.bound)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let sys = assemble(&data).map_err(|e| CliError::Input(e.to_string()))?;
    let name = format!(
        "gen seed={} n1={} n2={} m={} bound={}",
        args.seed, args.n1, args.n2, args.m, args.bound
    );
    let system = RawSystemFile::from_matrices(Some(name), sys.e(), sys.a(), sys.c());
    let sidecar = CanonicalFile::new(args.seed, args.bound, &data);
    let sidecar_path: Option<PathBuf> = args.sidecar.clone().or_else(|| {
        args.out
            .as_ref()
            .map(|p| p.with_extension("canonical.json"))
    });

    match &args.out {
        Some(path) => write_atomic(path, &to_json_text(&system))?,
        None => print!("{}", to_json_text(&system)),
    }
    if let Some(path) = sidecar_path {
        write_atomic(&path, &to_json_text(&sidecar))?;
    }
    Ok(0)
}

pub fn selftest(args: &SelftestArgs, exec: Execution) -> Result<u8, CliError> {
    let cfg = SuiteConfig {
        trials: args.trials,
        max_n: args.max_n.max(1),
        seed: args.seed,
        exec,
        inject_failure: args.inject_failure,
    };
    let outcomes = run_all(&cfg);
    for o in &outcomes {
        let counters: Vec<String> = o.counters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!(
            "[{}] {}: {} checks, {} failures{}{}",
            if o.passed() { "PASS" } else { "FAIL" },
            o.name,
            o.checks,
            o.failures.len(),
            if counters.is_empty() { "" } else { ", " },
            counters.join(", ")
        );
    }
    let Some((suite, ce)) = outcomes
        .iter()
        .find_map(|o| o.failures.first().map(|f| (o.name, f)))
    else {
        return Ok(0);
    };
    let name = format!("{suite}, trial {}: {}", ce.trial, ce.detail);
    let raw = RawSystemFile::from_matrices(Some(name.clone()), &ce.e, &ce.a, &ce.c);
    write_atomic(&args.artifact, &to_json_text(&raw))?;
    println!(
        "first counterexample ({name}) written to {}",
        args.artifact.display()
    );
    Ok(1)
}
