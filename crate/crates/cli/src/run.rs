//! Command dispatch.

use std::fmt;
use std::path::Path;

use serde_json::{json, Value};
use thauma_core::bounds::{
    asymptotic_bound, efficiency_bound_mana, efficiency_bound_thauma, figure1_sweep, interconversion_bound,
    one_shot_bound, overhead_bound, second_order_bound, sweep_csv, TargetState,
};
use thauma_core::measures::{dh_epsilon, mana, min_dh_over_w, theta, theta_max, theta_min, MeasureResult};
use thauma_core::stabilizer::{enumerate_pure_stabilizer_states, named::NAMES};
use thauma_core::{named_state, DimensionSpec, Error, HermitianOperator, PhaseSpace, PureState};

use crate::cli::{Command, StateArgs, XiArgs};
use crate::output::{operator_json, round_numbers, Field, Report};

/// Largest tolerated |computed − closed form| in `verify-prop2`.
pub const PROP2_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
    /// The command ran but its check failed.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_solver_failure() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) | CliError::Check(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// A state together with the phase space it lives on.
struct Input {
    rho: HermitianOperator,
    pure: Option<PureState>,
    ps: PhaseSpace,
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Factors from `--factors`, or from `dim` when it is a prime power.
fn resolve_factors(dim: usize, given: Option<&[usize]>) -> Result<Vec<usize>> {
    if let Some(f) = given {
        let product: usize = f.iter().product();
        if product != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: product }.into());
        }
        return Ok(f.to_vec());
    }
    let primes = prime_factors(dim);
    match primes.first() {
        Some(&p) if primes.iter().all(|&q| q == p) => Ok(primes),
        Some(_) => Err(CliError::Usage(format!(
            "dimension {dim} mixes several primes; pass --factors to fix their order"
        ))),
        None => Err(Error::UnsupportedDimension { dim, reason: "dimension must exceed 1".into() }.into()),
    }
}

fn read_operator(path: &Path) -> Result<HermitianOperator> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    HermitianOperator::from_json_str(&text).map_err(|e| match e {
        Error::Parse(m) => CliError::Core(Error::Parse(format!("{}: {m}", path.display()))),
        other => other.into(),
    })
}

fn load_operator(name: Option<&str>, file: Option<&Path>, what: &str) -> Result<(HermitianOperator, Option<PureState>)> {
    match (name, file) {
        (Some(n), None) => {
            let s = named_state(n)?;
            Ok((s.density(), s.as_pure().cloned()))
        }
        (None, Some(p)) => Ok((read_operator(p)?, None)),
        _ => Err(CliError::Usage(format!("{what}: give exactly one of a name or a file"))),
    }
}

fn load(args: &StateArgs) -> Result<Input> {
    let (rho, pure) = load_operator(args.state.as_deref(), args.file.as_deref(), "state (--state or --file)")?;
    let factors = resolve_factors(rho.dim(), args.factors.as_deref())?;
    let ps = PhaseSpace::new(DimensionSpec::new(factors)?);
    Ok(Input { rho, pure, ps })
}

fn load_xi(args: &XiArgs, dim: usize) -> Result<HermitianOperator> {
    let (xi, _) = load_operator(args.xi.as_deref(), args.xi_file.as_deref(), "output state (--xi or --xi-file)")?;
    if xi.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: xi.dim() }.into());
    }
    Ok(xi)
}

/// `START:STEP:STOP`, inclusive of `STOP` up to rounding.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || CliError::Usage(format!("--grid `{spec}`: expected START:STEP:STOP"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let [start, step, stop] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || stop < start || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    // 12 decimals removes the drift of start + k·step without touching real grid values
    Ok((0..count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect())
}

fn measure_report(r: &MeasureResult, witness: bool) -> Report {
    let mut fields = vec![
        ("value".to_string(), Field::Num(r.value)),
        ("gap".to_string(), Field::Num(r.gap)),
        ("iterations".to_string(), Field::Int(r.iterations as u64)),
    ];
    if !r.diagnostics.is_empty() {
        fields.push(("diagnostics".into(), Field::Json(json!(r.diagnostics))));
    }
    if witness {
        let w = |o: &Option<HermitianOperator>| o.as_ref().map_or(Value::Null, operator_json);
        fields.push(("primal_witness".into(), Field::Json(w(&r.primal_witness))));
        fields.push(("dual_witness".into(), Field::Json(w(&r.dual_witness))));
    }
    Report::Record(fields)
}

fn value(x: f64) -> Report {
    Report::Record(vec![("value".into(), Field::Num(x))])
}

fn pure_input(input: &Input) -> Result<PureState> {
    if let Some(p) = &input.pure {
        return Ok(p.clone());
    }
    let (vals, vecs) = input.rho.eigh();
    let top = vals.len() - 1;
    if vals[..top].iter().any(|v| v.abs() > 1e-9) {
        return Err(Error::NotAState { reason: "stab-fidelity needs a pure state".into() }.into());
    }
    Ok(PureState::new(vecs.column(top).into_owned())?)
}

/// Closed forms of the four qutrit golden states; each has `θ_min = θ = θ_max`.
pub fn prop2_table() -> [(&'static str, &'static str, f64); 4] {
    [
        ("Strange", "log2(5/3)", (5.0f64 / 3.0).log2()),
        ("Norrell", "log2(3/2)", 1.5f64.log2()),
        ("Hplus", "log2(3-sqrt3)", (3.0 - 3f64.sqrt()).log2()),
        ("T", "log2(1+2sin(pi/18))", (1.0 + 2.0 * (std::f64::consts::PI / 18.0).sin()).log2()),
    ]
}

fn verify_prop2(tol: f64) -> Result<(Report, Option<String>)> {
    let ps = PhaseSpace::build(&[3])?;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for (name, form, want) in prop2_table() {
        let rho = named_state(name)?.density();
        let computed = [
            ("theta_min", theta_min(&ps, &rho)?.value),
            ("theta", theta(&ps, &rho, tol)?.value),
            ("theta_max", theta_max(&ps, &rho)?.value),
        ];
        for (measure, got) in computed {
            let delta = (got - want).abs();
            worst = worst.max(delta);
            rows.push(vec![
                Field::Text(name.into()),
                Field::Text(measure.into()),
                Field::Num(got),
                Field::Text(form.into()),
                Field::Num(want),
                Field::Num(delta),
                Field::Bool(delta < PROP2_TOL),
            ]);
        }
    }
    let header = ["state", "measure", "computed", "closed_form", "expected", "abs_delta", "pass"]
        .map(String::from)
        .to_vec();
    let failure = (worst >= PROP2_TOL).then(|| format!("verify-prop2: max |Δ| = {worst:.3e} ≥ {PROP2_TOL:e}"));
    Ok((Report::Table { header, rows }, failure))
}

/// Runs one command; a returned message alongside the report marks a failed check.
pub fn execute(cmd: &Command) -> Result<(Report, Option<String>)> {
    let report = match cmd {
        Command::Wigner { state } => {
            let i = load(state)?;
            let w = i.ps.wigner_rep(&i.rho)?;
            let points: Vec<Value> = w
                .values
                .iter()
                .enumerate()
                .map(|(k, &x)| {
                    let coords: Vec<[usize; 2]> = i.ps.point(k).coords.iter().map(|&(a, b)| [a, b]).collect();
                    json!({ "u": coords, "w": thauma_core::io::json_number(x) })
                })
                .collect();
            Report::Raw {
                json: json!({ "factors": i.ps.spec().factors(), "points": points }),
                csv: Some(w.to_csv(&i.ps)),
            }
        }
        Command::Mana { state } => {
            let i = load(state)?;
            value(mana(&i.ps, &i.rho)?)
        }
        Command::ThetaMin { state, witness } => {
            let i = load(state)?;
            measure_report(&theta_min(&i.ps, &i.rho)?, *witness)
        }
        Command::ThetaMax { state, witness } => {
            let i = load(state)?;
            measure_report(&theta_max(&i.ps, &i.rho)?, *witness)
        }
        Command::Theta { state, tol, witness } => {
            let i = load(state)?;
            measure_report(&theta(&i.ps, &i.rho, tol.tol)?, *witness)
        }
        Command::Dh { state, sigma, sigma_file, eps, witness } => {
            let i = load(state)?;
            let (s, _) = load_operator(sigma.as_deref(), sigma_file.as_deref(), "σ (--sigma or --sigma-file)")?;
            let r = dh_epsilon(&i.rho, &s, *eps)?;
            let mut fields = vec![
                ("value".to_string(), Field::Num(r.value)),
                ("type_two_error".to_string(), Field::Num(r.type_two_error)),
                ("iterations".to_string(), Field::Int(r.iterations as u64)),
            ];
            if *witness {
                fields.push(("test".into(), Field::Json(operator_json(&r.test))));
            }
            Report::Record(fields)
        }
        Command::MinDh { state, eps, witness } => {
            let i = load(state)?;
            measure_report(&min_dh_over_w(&i.ps, &i.rho, *eps)?, *witness)
        }
        Command::OneShot { state, eps, target } => {
            let i = load(state)?;
            bound_report(one_shot_bound(&i.ps, &i.rho, *eps, target.target)?, target.target)
        }
        Command::Overhead { state, eps, target } => {
            let i = load(state)?;
            bound_report(overhead_bound(&i.ps, &i.rho, *eps, target.target)?, target.target)
        }
        Command::Asymptotic { state, target, tol } => {
            let i = load(state)?;
            bound_report(asymptotic_bound(&i.ps, &i.rho, target.target, tol.tol)?, target.target)
        }
        Command::SecondOrder { state, n, eps, target, tol } => {
            let i = load(state)?;
            let b = second_order_bound(&i.ps, &i.rho, *n, *eps, target.target, tol.tol)?;
            Report::Record(vec![
                ("value".into(), Field::Num(b.value)),
                ("theta".into(), Field::Num(b.theta)),
                ("variance".into(), Field::Num(b.variance)),
                ("quantile".into(), Field::Num(b.quantile)),
                ("target".into(), Field::Text(target.target.name().into())),
                ("note".into(), Field::Text(b.note.into())),
            ])
        }
        Command::Efficiency { state, xi } => {
            let i = load(state)?;
            let x = load_xi(xi, i.rho.dim())?;
            Report::Record(vec![
                ("n_mana".into(), Field::Num(efficiency_bound_mana(&i.ps, &i.rho, &x)?)),
                ("n_thauma_max".into(), Field::Num(efficiency_bound_thauma(&i.ps, &i.rho, &x)?)),
            ])
        }
        Command::Interconversion { state, xi } => {
            let i = load(state)?;
            let x = load_xi(xi, i.rho.dim())?;
            let b = interconversion_bound(&i.ps, &i.rho, &x)?;
            let kind = serde_json::to_value(b.kind).expect("enum serializes");
            Report::Record(vec![
                ("upper".into(), Field::Num(b.upper)),
                ("kind".into(), Field::Text(kind.as_str().unwrap_or_default().into())),
                ("strictly_below_one".into(), Field::Bool(b.strictly_below_one)),
                ("theta_min_rho".into(), Field::Num(b.bracket_rho[0])),
                ("theta_max_rho".into(), Field::Num(b.bracket_rho[1])),
                ("theta_min_xi".into(), Field::Num(b.bracket_xi[0])),
                ("theta_max_xi".into(), Field::Num(b.bracket_xi[1])),
            ])
        }
        Command::Figure1 { p2, grid } => {
            let ps = PhaseSpace::build(&[3])?;
            let rows = figure1_sweep(&ps, *p2, &parse_grid(grid)?)?;
            Report::Raw {
                json: round_numbers(serde_json::to_value(&rows).expect("finite rows")),
                csv: Some(sweep_csv(&rows)),
            }
        }
        Command::NamedState { name, list, stabilizers, factors } => {
            if *list {
                let names = NAMES.iter().map(|n| vec![Field::Text((*n).into())]).collect();
                Report::Table { header: vec!["name".into()], rows: names }
            } else if *stabilizers {
                let set = enumerate_pure_stabilizer_states(&DimensionSpec::new(factors.clone())?)?;
                Report::Raw { json: set.to_json(), csv: None }
            } else {
                let name = name
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("named-state: give a NAME, --list or --stabilizers".into()))?;
                // full precision so that the printed operator reloads bit for bit
                let op = serde_json::to_value(named_state(name)?.density().to_json()).expect("finite operator");
                Report::Raw { json: op, csv: None }
            }
        }
        Command::VerifyProp2 { tol } => return verify_prop2(tol.tol),
        Command::StabFidelity { state } => {
            let i = load(state)?;
            let psi = pure_input(&i)?;
            let set = enumerate_pure_stabilizer_states(i.ps.spec())?;
            let f = set.stabilizer_fidelity(&psi)?;
            Report::Record(vec![
                ("fidelity".into(), Field::Num(f)),
                ("neg_log2".into(), Field::Num(-f.log2())),
            ])
        }
    };
    Ok((report, None))
}

fn bound_report(v: f64, target: TargetState) -> Report {
    Report::Record(vec![
        ("value".into(), Field::Num(v)),
        ("target".into(), Field::Text(target.name().into())),
    ])
}
