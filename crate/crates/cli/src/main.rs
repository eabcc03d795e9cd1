use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use belyi::acceptance::{run_all, run_criterion, Hooks, CRITERIA};
use belyi::curve::{Curve, Divisor, Place};
use belyi::descent::{
    descent_verdict, end_algebra, indecomposable_test, invariants_transversal, line_point_name,
    verify_invariant_subbundle, verify_pullback_splits, TowerSpec, Verdict,
};
use belyi::field::parse::{format_elem, format_nf, parse_elem, parse_ft};
use belyi::field::{rat_to_string, Poly, Rat, Scalar};
use belyi::fixtures::cyclotomic_field;
use belyi::pushpar::{assemble_parabolic, verify_algebraic_direct_image, SplitBundle, BRANCH_VALUES};
use belyi::rr::{rr_space, DEFAULT_MAX_TAU};
use belyi::{stats, Error, FieldTower};
use clap::Parser;
use serde::Deserialize;
use serde_json::{json, Value};

const COMMANDS: [&str; 10] = [
    "genus",
    "lspace",
    "pushforward",
    "parabolic",
    "verify-prop1",
    "verify-e18",
    "verify-tower",
    "krull-schmidt",
    "descend",
    "selftest",
];

#[derive(Parser, Debug)]
#[command(name = "belyi", version, about = "Direct images and descent on superelliptic Belyi covers")]
struct Args {
    /// Problem file; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Overrides the command of the problem.
    #[arg(long)]
    command: Option<String>,
    /// Number of specialization values tried by the descent oracle.
    #[arg(long, default_value_t = DEFAULT_MAX_TAU)]
    max_tau: usize,
    /// Seed for the randomized choices of splitting sections.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Restricts selftest to the given criteria (repeatable).
    #[arg(long)]
    criterion: Vec<usize>,
    #[arg(long, hide = true)]
    corrupt_weight: bool,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FieldSpec {
    /// Integer coefficients of the minimal polynomial of `alpha`, constant
    /// term first.
    base_min_poly: Vec<i64>,
    #[serde(default)]
    transcendentals: Vec<String>,
    /// Coefficients of `g(u)` over `F(t)`, constant term first.
    algebraic_ext: Option<Vec<String>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct CurveSpec {
    #[serde(rename = "N")]
    n: u64,
    a: u64,
    b: u64,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct TowerBlock {
    #[serde(rename = "N")]
    n: u64,
    a: u64,
    b: u64,
    #[serde(rename = "M")]
    m: u64,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum PointSpec {
    Named(String),
    Branch { branch: String, index: u64 },
    Coords { x: String, y: String },
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct Term {
    point: PointSpec,
    coeff: i64,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ProblemSpec {
    field: Option<FieldSpec>,
    curve: Option<CurveSpec>,
    tower: Option<TowerBlock>,
    bundle: Option<Vec<Vec<Term>>>,
    divisor: Option<Vec<Term>>,
    command: Option<String>,
}

/// Failure of a run, mapped to the exit code contract.
enum Failure {
    Schema(String),
    Module(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Schema(m),
            other => Failure::Module(other),
        }
    }
}

type Run<T> = Result<T, Failure>;

fn schema<T>(msg: impl Into<String>) -> Run<T> {
    Err(Failure::Schema(msg.into()))
}

fn build_tower(spec: Option<&FieldSpec>, n: u64) -> Run<FieldTower> {
    let Some(f) = spec else { return Ok(cyclotomic_field(n)) };
    let base = Poly::new(f.base_min_poly.iter().map(|&c| Rat::from_i64(c)).collect());
    let plain = FieldTower::new(base.clone(), f.transcendentals.clone(), None)?;
    let ext = match &f.algebraic_ext {
        None => None,
        Some(cs) => {
            let coeffs = cs.iter().map(|c| parse_ft(&plain, c)).collect::<belyi::Result<Vec<_>>>()?;
            Some(Poly::new(coeffs))
        }
    };
    if ext.is_none() {
        return Ok(plain);
    }
    Ok(FieldTower::new(base, f.transcendentals.clone(), ext)?)
}

fn parse_place(c: &Curve, p: &PointSpec) -> Run<Place> {
    let place = match p {
        PointSpec::Named(s) if s == "infinity" => Place::Infinity,
        PointSpec::Named(s) => return schema(format!("unknown point {s:?}")),
        PointSpec::Branch { branch, index } => match branch.as_str() {
            "0" => Place::Zero(*index),
            "1" => Place::One(*index),
            other => return schema(format!("branch must be \"0\" or \"1\", got {other:?}")),
        },
        PointSpec::Coords { x, y } => {
            let k = c.tower();
            c.finite_place(parse_elem(k, x)?, parse_elem(k, y)?)?
        }
    };
    c.check_place(&place)?;
    Ok(place)
}

fn parse_divisor(c: &Curve, terms: &[Term]) -> Run<Divisor> {
    let mut d = Divisor::zero();
    for t in terms {
        d.add_at(parse_place(c, &t.point)?, t.coeff);
    }
    Ok(d)
}

fn point_json(c: &Curve, p: &Place) -> Value {
    match p {
        Place::Infinity => json!("infinity"),
        Place::Zero(k) => json!({"branch": "0", "index": k}),
        Place::One(k) => json!({"branch": "1", "index": k}),
        Place::Finite { x, y } => json!({"x": format_elem(c.tower(), x), "y": format_elem(c.tower(), y)}),
    }
}

fn divisor_json(c: &Curve, d: &Divisor) -> Value {
    Value::Array(d.iter().map(|(p, k)| json!({"point": point_json(c, p), "coeff": k})).collect())
}

struct Problem {
    spec: ProblemSpec,
    seed: u64,
    max_tau: usize,
    criteria: Vec<usize>,
}

impl Problem {
    fn curve(&self) -> Run<Curve> {
        let Some(cs) = &self.spec.curve else {
            if let Some(t) = &self.spec.tower {
                return Ok(self.tower_spec_of(t)?.top);
            }
            return schema("missing curve block");
        };
        let tower = build_tower(self.spec.field.as_ref(), cs.n)?;
        Ok(Curve::new(cs.n, cs.a, cs.b, tower)?)
    }

    fn tower_spec_of(&self, t: &TowerBlock) -> Run<TowerSpec> {
        let tower = build_tower(self.spec.field.as_ref(), t.n)?;
        Ok(TowerSpec::new(t.n, t.a, t.b, t.m, tower)?)
    }

    fn bundle_on(&self, c: &Curve) -> Run<SplitBundle> {
        let Some(b) = &self.spec.bundle else { return schema("missing bundle block") };
        let divisors = b.iter().map(|d| parse_divisor(c, d)).collect::<Run<Vec<_>>>()?;
        Ok(SplitBundle::new(c.clone(), divisors)?)
    }

    fn bundle(&self) -> Run<SplitBundle> {
        self.bundle_on(&self.curve()?)
    }
}

fn weights_json(w: &belyi::pushpar::ParabolicP1Bundle, only_ramified: bool) -> Value {
    let mut out = serde_json::Map::new();
    for y in BRANCH_VALUES {
        let Some(fiber) = w.fiber(&y) else { continue };
        if only_ramified && fiber.flags.iter().all(|f| f.ramification == 1) {
            continue;
        }
        let mut list = Vec::new();
        for (wt, m) in w.weight_multiset(&y) {
            list.extend(std::iter::repeat_n(rat_to_string(&wt), m));
        }
        out.insert(line_point_name(&y).into(), json!(list));
    }
    Value::Object(out)
}

fn genus(p: &Problem) -> Run<Value> {
    let c = p.curve()?;
    Ok(json!({"genus": c.genus()}))
}

fn lspace(p: &Problem) -> Run<Value> {
    let c = p.curve()?;
    let d = match (&p.spec.divisor, &p.spec.bundle) {
        (Some(d), _) => parse_divisor(&c, d)?,
        (None, Some(b)) if b.len() == 1 => parse_divisor(&c, &b[0])?,
        _ => return schema("lspace needs a divisor block"),
    };
    let basis = rr_space(&c, &d)?;
    let functions: Vec<String> = basis.functions.iter().map(|f| c.format_function(f)).collect();
    Ok(json!({"dimension": basis.dim(), "basis": functions}))
}

fn pushforward(p: &Problem) -> Run<Value> {
    let e = p.bundle()?;
    let w = assemble_parabolic(&e, p.seed)?;
    Ok(json!({"splitting": w.splitting, "weights": weights_json(&w, true)}))
}

fn parabolic(p: &Problem) -> Run<Value> {
    let e = p.bundle()?;
    let c = &e.curve;
    let w = assemble_parabolic(&e, p.seed)?;
    let sections: Vec<Value> = w
        .maps
        .sections
        .iter()
        .map(|s| json!({"degree": s.m, "parts": s.parts.iter().map(|f| c.format_function(f)).collect::<Vec<_>>()}))
        .collect();
    let mut fibers = serde_json::Map::new();
    for fiber in &w.fibers {
        let places: Vec<Value> = fiber
            .flags
            .iter()
            .map(|flag| {
                let spaces: Vec<Vec<Vec<String>>> = flag
                    .subspaces
                    .iter()
                    .map(|m| m.rows().map(|r| r.iter().map(|x| format_elem(c.tower(), x)).collect()).collect())
                    .collect();
                json!({
                    "place": point_json(c, &flag.place),
                    "ramification": flag.ramification,
                    "weights": flag.weights.iter().map(rat_to_string).collect::<Vec<_>>(),
                    "flags": spaces,
                })
            })
            .collect();
        fibers.insert(line_point_name(&fiber.base).into(), Value::Array(places));
    }
    Ok(json!({
        "splitting": w.splitting,
        "sections": sections,
        "fibers": fibers,
        "weights": weights_json(&w, false),
        "algebraic": w.is_algebraic(c.tower()),
    }))
}

fn tower_problem(p: &Problem) -> Run<Value> {
    let Some(tb) = &p.spec.tower else { return schema("verify-tower needs a tower block") };
    let t = p.tower_spec_of(tb)?;
    let e = p.bundle_on(&t.middle)?;
    let (s, eps) = invariants_transversal(&t)?;
    let check = verify_invariant_subbundle(&t, &e, p.seed)?;
    let classes: Vec<Value> = check.matching.classes.iter().map(|d| divisor_json(&t.top, d)).collect();
    Ok(json!({
        "verify_tower": check.holds,
        "transversal": s,
        "epsilon": eps,
        "invariant_candidates": check.invariant_candidates,
        "classes": classes,
    }))
}

fn krull_schmidt(p: &Problem) -> Run<Value> {
    let e = p.bundle()?;
    let alg = end_algebra(&e)?;
    let mut summands = Vec::new();
    for d in &e.divisors {
        let a = end_algebra(&SplitBundle::new(e.curve.clone(), vec![d.clone()])?)?;
        summands.push(json!({"end_dimension": a.dim(), "indecomposable": indecomposable_test(&a)}));
    }
    Ok(json!({"end_dimension": alg.dim(), "indecomposable": indecomposable_test(&alg), "summands": summands}))
}

fn descend(p: &Problem) -> Run<Value> {
    let e = p.bundle()?;
    let c = &e.curve;
    Ok(match descent_verdict(&e, p.seed, p.max_tau)? {
        Verdict::DefinedOverF { representatives, certificates, same_tower } => json!({
            "verdict": "DefinedOverF",
            "certificate": {
                "representatives": representatives.iter().map(|d| divisor_json(c, d)).collect::<Vec<_>>(),
                "functions": certificates
                    .iter()
                    .map(|f| f.as_ref().map(|f| c.format_function(f)))
                    .collect::<Vec<_>>(),
                "same_field": same_tower,
            },
        }),
        Verdict::NotDefined { summand, witness } => {
            let wc = c.base_change(witness.tower.clone(), |x| x.clone());
            json!({
                "verdict": "NotDefined",
                "witness": {
                    "summand": summand,
                    "tau": format_nf(&witness.tau),
                    "specialized": divisor_json(&wc, &witness.specialized),
                    "ell": witness.ell,
                },
            })
        }
        Verdict::Unknown { reason } => json!({"verdict": "Unknown", "reason": reason}),
    })
}

fn selftest(p: &Problem, hooks: Hooks) -> Run<(Value, bool)> {
    if let Some(bad) = p.criteria.iter().find(|&&id| id == 0 || id > CRITERIA.len()) {
        return schema(format!("no criterion {bad}; criteria are numbered 1 to {}", CRITERIA.len()));
    }
    let outcomes = if p.criteria.is_empty() {
        run_all(p.seed, hooks)
    } else {
        p.criteria.iter().map(|&id| run_criterion(id, p.seed, hooks)).collect()
    };
    for o in &outcomes {
        eprintln!("{} ({:.2?})", o.line(), o.elapsed);
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let criteria: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({"id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail}))
        .collect();
    Ok((json!({"passed": passed, "criteria": criteria}), passed))
}

fn dispatch(command: &str, p: &Problem, hooks: Hooks) -> Run<(Value, bool)> {
    let v = match command {
        "genus" => genus(p)?,
        "lspace" => lspace(p)?,
        "pushforward" => pushforward(p)?,
        "parabolic" => parabolic(p)?,
        "verify-prop1" => {
            json!({"verify_algebraic_direct_image": verify_algebraic_direct_image(&p.bundle()?, p.seed)?})
        }
        "verify-e18" => json!({"verify_pullback_splits": verify_pullback_splits(&p.bundle()?, p.seed)?}),
        "verify-tower" => tower_problem(p)?,
        "krull-schmidt" => krull_schmidt(p)?,
        "descend" => descend(p)?,
        "selftest" => return selftest(p, hooks),
        other => return schema(format!("unknown command {other:?}; expected one of {}", COMMANDS.join(", "))),
    };
    Ok((v, true))
}

fn read_input(args: &Args) -> Run<String> {
    let text = match &args.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))?,
        None if args.command.as_deref() == Some("selftest") => String::new(),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Schema(e.to_string()))?;
            s
        }
    };
    Ok(text)
}

fn run(args: &Args) -> Run<(String, Value, bool)> {
    let text = read_input(args)?;
    let spec: ProblemSpec = if text.trim().is_empty() && args.command.as_deref() == Some("selftest") {
        ProblemSpec::default()
    } else {
        serde_json::from_str(&text).map_err(|e| Failure::Schema(e.to_string()))?
    };
    let command = match (&args.command, &spec.command) {
        (Some(c), _) | (None, Some(c)) => c.clone(),
        (None, None) => return schema("missing command"),
    };
    let problem = Problem { spec, seed: args.seed, max_tau: args.max_tau, criteria: args.criterion.clone() };
    let hooks = Hooks { corrupt_weight: args.corrupt_weight };
    let (result, ok) = dispatch(&command, &problem, hooks)?;
    Ok((command, result, ok))
}

fn main() -> ExitCode {
    let args = Args::parse();
    stats::reset();
    let start = Instant::now();
    let outcome = run(&args);
    let s = stats::snapshot();
    let statistics = json!({"rr_spaces": s.rr_spaces, "constraints": s.constraints, "unknowns": s.unknowns});
    eprintln!("elapsed {:.3?}", start.elapsed());
    let (report, code) = match outcome {
        Ok((command, result, ok)) => {
            let mut report = BTreeMap::new();
            report.insert("command", json!(command));
            report.insert("result", result);
            report.insert("statistics", statistics);
            (json!(report), if ok { 0 } else { 4 })
        }
        Err(Failure::Schema(m)) => (json!({"error": {"kind": "schema", "message": m}}), 2),
        Err(Failure::Module(e)) => {
            let (kind, code) = match e {
                Error::Internal(_) => ("internal", 4),
                _ => ("math", 3),
            };
            eprintln!("{e}");
            (json!({"error": {"kind": kind, "message": e.to_string()}}), code)
        }
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    ExitCode::from(code)
}
