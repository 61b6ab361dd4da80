//! Command dispatch, report assembly and exit codes.

use clap::{Parser, Subcommand, ValueEnum};
use hypertoric::arrangement::{check_generic, circuits, cocircuits, fixed_point, fixed_points, invariant_curve, attracting_contains, FixedPoint};
use hypertoric::error::Error;
use hypertoric::hypertoric_data::{dualize, load_data, HypertoricData};
use hypertoric::instances::{fixture, fixtures, random_instances};
use hypertoric::mirror::{check_combinatorial_duality, check_limit_matches_dual_polarization, check_log_identities, check_mirror_vertex, MirrorPair, MirrorParams, POptions};
use hypertoric::qkring::{check_rank, check_vanishing_at_fixed_points, classical_relations, quantum_relations};
use hypertoric::stab::{check_duality, check_stab_axioms, duality_interface_check, stab_restrict, stab_section};
use hypertoric::vertex::{bare_vertex, check_circuit_qde, check_cocircuit_qde, check_jfunction_residues, parse_laurent, q_boundedness};
use serde_json::{json, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hypertoric", version, about = "Vertex functions, stable envelopes and mirror checks for hypertoric varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug, Clone)]
pub struct DataArg {
    /// Data file (JSON with iota, optional beta, theta_lift, sigma_lift) or a bundled fixture name.
    #[arg(long)]
    pub data: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sizes, lifts, genericity and the mirror data.
    Describe(DataArg),
    /// Fixed points with sign splittings and restrictions.
    Vertices(DataArg),
    /// Circuits and cocircuits with their pairings.
    Circuits(DataArg),
    /// Bare vertex coefficients at one fixed point.
    Vertex {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, default_value_t = 4)]
        degree: i64,
        /// Fixed point such as "{1,2}" (1-based).
        #[arg(long)]
        fixed_point: String,
        /// Insertion, a Laurent polynomial in x1.., a1.., hbar, q.
        #[arg(long)]
        tau: Option<String>,
    },
    /// Exact circuit and cocircuit q-difference checks at every fixed point.
    QdeCheck {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, default_value_t = 6)]
        degree: i64,
    },
    /// The elliptic stable envelope of a fixed point and its restrictions.
    Stab {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        fixed_point: String,
        /// Restrict only to this fixed point.
        #[arg(long)]
        restrict: Option<String>,
    },
    /// Stable-envelope axioms on both sides and the duality interface.
    StabCheck {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, default_value_t = 40)]
        q_trunc: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ring presentation with vanishing and dimension checks.
    Ring {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        quantum: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Combinatorial duality, log identities and the numeric mirror theorem.
    MirrorCheck {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, default_value_t = 12)]
        degree: i64,
        /// JSON file or inline object overriding any of q, hbar, s, t, w, u, q_trunc.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        q_trunc: Option<usize>,
    },
    /// Every suite on the bundled fixtures and a few seeded random instances.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failure that maps to an exit code.
#[derive(Debug)]
pub enum Failure {
    Data(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_data_error() {
            Failure::Data(e.to_string())
        } else {
            Failure::Check(e.to_string())
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read_data(arg: &DataArg) -> Result<HypertoricData, Failure> {
    match std::fs::read_to_string(&arg.data) {
        Ok(text) => Ok(load_data(&text)?),
        Err(e) => fixture(&arg.data).ok_or_else(|| Failure::Data(format!("cannot read {}: {}", arg.data, e))),
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn parse_fixed_point(data: &HypertoricData, s: &str) -> Result<FixedPoint, Failure> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let mut p = Vec::new();
    for part in inner.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let i: usize = part.parse().map_err(|_| Failure::Data(format!("bad fixed point {s}")))?;
        if i == 0 || i > data.n {
            return Err(Failure::Data(format!("index {i} out of range 1..={}", data.n)));
        }
        p.push(i - 1);
    }
    p.sort();
    Ok(fixed_point(data, &p)?)
}

fn fixed_point_view(p: &FixedPoint, n: usize) -> Value {
    json!({
        "fixed_point": p.label(),
        "a_plus": one_based(&p.a_plus),
        "a_minus": one_based(&p.a_minus),
        "p_plus": one_based(&p.p_plus),
        "p_minus": one_based(&p.p_minus),
        "c": p.c,
        "restrictions": (0..n).map(|i| p.restriction(i).to_string()).collect::<Vec<_>>(),
    })
}

fn describe(data: &HypertoricData) -> Outcome {
    let g = check_generic(data)?;
    let dual = dualize(data)?;
    Ok(json!({
        "name": data.label(),
        "n": data.n, "k": data.k, "d": data.d,
        "iota": data.iota, "beta": data.beta,
        "theta_lift": data.theta_lift, "sigma_lift": data.sigma_lift,
        "generic": g.generic,
        "offending": g.offending,
        "fixed_points": fixed_points(data)?.len(),
        "circuits": circuits(data)?.len(),
        "cocircuits": cocircuits(data)?.len(),
        "mirror": {"iota": dual.iota, "beta": dual.beta, "theta_lift": dual.theta_lift, "sigma_lift": dual.sigma_lift},
        "pass": g.generic,
    }))
}

fn signed_sets(v: &[hypertoric::arrangement::SignedSet], lift: &[i64]) -> Value {
    v.iter().map(|c| json!({"plus": one_based(&c.plus), "minus": one_based(&c.minus), "pairing": c.pairing(lift)})).collect()
}

fn qde_check(data: &HypertoricData, degree: i64) -> Outcome {
    let mut reports = Vec::new();
    let cs = circuits(data)?;
    let cos = cocircuits(data)?;
    for p in fixed_points(data)? {
        let v = bare_vertex(&p, data.n, None, degree)?;
        for c in &cs {
            reports.push(serde_json::to_value(check_circuit_qde(&p, data.n, c, &v)?).expect("serializable"));
        }
        for c in &cos {
            reports.push(serde_json::to_value(check_cocircuit_qde(&p, data.n, data.k, c, &v)?).expect("serializable"));
        }
    }
    Ok(json!({"degree": degree, "checks": reports, "pass": true}))
}

fn stab_check(data: &HypertoricData, q_trunc: usize, seed: u64) -> Outcome {
    let pair = MirrorPair::new(data)?;
    let x = check_stab_axioms(&pair.fps)?;
    let xd = check_stab_axioms(&pair.dual_fps)?;
    let interface = duality_interface_check(&pair)?;
    let dual = check_duality(&pair, 5, seed, 0.3, q_trunc, 1e-10)?;
    let pass = x.pass && xd.pass && interface.iter().all(|c| c.pass) && dual.pass;
    Ok(json!({"axioms": x, "mirror_axioms": xd, "interface": interface, "duality": dual, "pass": pass}))
}

fn ring(data: &HypertoricData, quantum: bool, seed: u64) -> Outcome {
    let pres = if quantum { quantum_relations(data)? } else { classical_relations(data)? };
    let vanishing = check_vanishing_at_fixed_points(data, 3)?;
    let rank = check_rank(data, seed, &[2, 3, 4, 5])?;
    let pass = vanishing.pass && rank.pass;
    Ok(json!({"presentation": pres, "vanishing": vanishing, "rank": rank, "pass": pass}))
}

fn merged_params(n: usize, params: Option<&str>, q_trunc: Option<usize>) -> Result<MirrorParams, Failure> {
    let mut base = serde_json::to_value(MirrorParams::standard(n)).expect("serializable");
    if let Some(path) = params {
        let text = if path.trim_start().starts_with('{') {
            path.to_string()
        } else {
            std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("cannot read {path}: {e}")))?
        };
        let over: Value = serde_json::from_str(&text).map_err(|e| Failure::Data(format!("parse error in {path}: {e}")))?;
        let Value::Object(over) = over else { return Err(Failure::Data(format!("{path} is not a JSON object"))) };
        for (k, v) in over {
            base[k] = v;
        }
    }
    if let Some(t) = q_trunc {
        base["q_trunc"] = json!(t);
    }
    let prm: MirrorParams = serde_json::from_value(base).map_err(|e| Failure::Data(format!("bad parameters: {e}")))?;
    let q = (prm.q[0] * prm.q[0] + prm.q[1] * prm.q[1]).sqrt();
    if q >= 1.0 || prm.w.len() != n || prm.u.len() != n || prm.q_trunc == 0 {
        return Err(Failure::Data("parameters need |q| < 1, q_trunc ≥ 1 and n entries in w and u".into()));
    }
    Ok(prm)
}

fn mirror_check(data: &HypertoricData, degree: i64, prm: &MirrorParams) -> Outcome {
    let pair = MirrorPair::new(data)?;
    let comb = check_combinatorial_duality(&pair)?;
    let logs = check_log_identities(&pair)?;
    let limit = check_limit_matches_dual_polarization(&pair)?;
    let r = check_mirror_vertex(&pair, degree, prm, POptions::default())?;
    let pairs: Vec<String> = pair.fps.iter().zip(&pair.dual_fps).map(|(p, d)| format!("{} <-> {}", p.label(), d.label())).collect();
    let pass = comb.iter().all(|c| c.pass) && limit && r.pass;
    Ok(json!({
        "pairs": pairs,
        "combinatorial": comb,
        "log_identities": logs,
        "deviations": r.entries,
        "max_deviation": r.max_deviation,
        "tolerance": r.entries.iter().map(|e| e.tolerance).fold(0.0, f64::max),
        "pass": pass,
    }))
}

fn selftest(seed: u64) -> Outcome {
    let mut suites = Vec::new();
    let mut pass = true;
    let mut record = |name: String, out: Outcome| {
        let (ok, detail) = match out {
            Ok(v) => (v["pass"].as_bool().unwrap_or(false), Value::Null),
            Err(Failure::Data(m) | Failure::Check(m)) => (false, json!(m)),
        };
        pass &= ok;
        suites.push(json!({"suite": name, "pass": ok, "error": detail}));
    };
    for data in fixtures() {
        let name = data.label();
        record(format!("{name}: describe"), describe(&data));
        record(format!("{name}: qde-check"), qde_check(&data, 4));
        record(format!("{name}: stab-check"), stab_check(&data, 40, seed));
        record(format!("{name}: ring"), ring(&data, true, seed));
        record(format!("{name}: boundedness and residues"), analytic(&data));
        let degree = if data.k == 1 { 12 } else { 6 };
        record(format!("{name}: mirror-check"), mirror_check(&data, degree, &MirrorParams::standard(data.n)));
    }
    for data in random_instances(seed, 3, 5, 2) {
        let name = data.label();
        record(format!("{name}: qde-check"), qde_check(&data, 3));
        record(format!("{name}: stab-check"), stab_check(&data, 40, seed));
        let pair = MirrorPair::new(&data).map_err(Failure::from);
        record(
            format!("{name}: duality"),
            pair.and_then(|p| {
                let comb = check_combinatorial_duality(&p)?;
                check_log_identities(&p)?;
                Ok(json!({"pass": comb.iter().all(|c| c.pass)}))
            }),
        );
    }
    Ok(json!({"suites": suites, "pass": pass}))
}

fn analytic(data: &HypertoricData) -> Outcome {
    let fps = fixed_points(data)?;
    let mut bounded = true;
    for p in &fps {
        bounded &= q_boundedness(&bare_vertex(p, data.n, None, 4)?)?.all_bounded;
    }
    let mut residues = 0;
    for p in &fps {
        for q in &fps {
            if p.p != q.p && attracting_contains(p, q) {
                if let Ok(curve) = invariant_curve(p, q, data.n) {
                    for m in 1..=2 {
                        residues += check_jfunction_residues(p, q, &curve, data.n, m, 4)?.poles_checked;
                    }
                }
            }
        }
    }
    Ok(json!({"bounded": bounded, "residue_poles": residues, "pass": bounded}))
}

pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Describe(d) => describe(&read_data(d)?),
        Command::Vertices(d) => {
            let data = read_data(d)?;
            let fps = fixed_points(&data)?;
            Ok(json!({"fixed_points": fps.iter().map(|p| fixed_point_view(p, data.n)).collect::<Vec<_>>(), "pass": true}))
        }
        Command::Circuits(d) => {
            let data = read_data(d)?;
            Ok(json!({
                "circuits": signed_sets(&circuits(&data)?, &data.theta_lift),
                "cocircuits": signed_sets(&cocircuits(&data)?, &data.sigma_lift),
                "pass": true,
            }))
        }
        Command::Vertex { data, degree, fixed_point, tau } => {
            let data = read_data(data)?;
            let p = parse_fixed_point(&data, fixed_point)?;
            let tau = tau.as_deref().map(parse_laurent).transpose()?;
            let v = bare_vertex(&p, data.n, tau.as_ref(), *degree)?;
            Ok(json!({"fixed_point": p.label(), "degree": degree, "coefficients": v.to_json(), "pass": true}))
        }
        Command::QdeCheck { data, degree } => qde_check(&read_data(data)?, *degree),
        Command::Stab { data, fixed_point, restrict } => {
            let data = read_data(data)?;
            let p = parse_fixed_point(&data, fixed_point)?;
            let sec = stab_section(&p);
            let targets = match restrict {
                Some(q) => vec![parse_fixed_point(&data, q)?],
                None => fixed_points(&data)?,
            };
            let mut rs = Vec::new();
            for q in &targets {
                rs.push(json!({"fixed_point": q.label(), "restriction": stab_restrict(&sec, q)?.to_string()}));
            }
            Ok(json!({"fixed_point": p.label(), "section": sec.body.to_string(), "restrictions": rs, "pass": true}))
        }
        Command::StabCheck { data, q_trunc, seed } => stab_check(&read_data(data)?, *q_trunc, *seed),
        Command::Ring { data, quantum, seed } => ring(&read_data(data)?, *quantum, *seed),
        Command::MirrorCheck { data, degree, params, q_trunc } => {
            let data = read_data(data)?;
            let prm = merged_params(data.n, params.as_deref(), *q_trunc)?;
            mirror_check(&data, *degree, &prm)
        }
        Command::Selftest { seed } => selftest(*seed),
    }
}

/// Renders a JSON report as indented `key: value` lines.
pub fn render_text(v: &Value) -> String {
    fn walk(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    if !flat(x) {
                        out.push_str(&format!("{pad}{k}:\n"));
                        walk(x, indent + 1, out);
                    } else {
                        out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                    }
                }
            }
            Value::Array(a) => {
                for x in a {
                    if !flat(x) {
                        out.push_str(&format!("{pad}-\n"));
                        walk(x, indent + 1, out);
                    } else {
                        out.push_str(&format!("{pad}- {}\n", scalar(x)));
                    }
                }
            }
            other => out.push_str(&format!("{pad}{}\n", scalar(other))),
        }
    }
    // scalars and arrays without objects print on one line
    fn flat(v: &Value) -> bool {
        match v {
            Value::Object(_) => false,
            Value::Array(a) => a.iter().all(flat),
            _ => true,
        }
    }
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}

/// Parses arguments, runs the command and returns the exit code and the report text.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            return (code, e.to_string());
        }
    };
    let (code, report) = match execute(&cli) {
        Ok(v) => (if v["pass"].as_bool() == Some(true) { EXIT_PASS } else { EXIT_FAIL }, v),
        Err(Failure::Check(m)) => (EXIT_FAIL, json!({"error": m, "pass": false})),
        Err(Failure::Data(m)) => (EXIT_DATA, json!({"error": m, "pass": false})),
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        Format::Text => render_text(&report),
    };
    (code, text)
}
