//! Subcommand execution. Every runner returns the envelope pieces; the
//! recorded params are exactly the command's long flags, so replaying them
//! through the parser reproduces the run.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use cpw_core::algebra::rational::{parse_rational, parse_rational_list};
use cpw_core::algebra::{AlgebraError, Monomial, Rational, TruncatedSeries};
use cpw_core::exotic::{
    build_structure, channel_coefficient, channel_coefficient_via_g, closed_form_2d, g_series,
    positivity_report, pw4_expand, pw4_residual, restrict_2d, verify_g_biharmonic, AmplitudeMatrix,
    ChannelStructure, ClosedForm2d, ExoticError, GMethod, GSeries, StructureName, Weighting,
};
use cpw_core::intertwiners::{
    assemble_tensor_intertwiner, chiral_d, chiral_e, chiral_pde_residual, reduce_wave,
    solve_intertwiner_space, IntertwinerError, ReductionOutcome, TensorIntertwiner, WavePair,
};
use cpw_core::waves::{
    casimir_residual, prop1_series, CasimirEquation, ChiralWave, WaveError, WaveRecord, WaveSpec,
};
use serde_json::{json, Map, Value};

use crate::args::*;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Parse(_) => CliError::Usage(e.to_string()),
            AlgebraError::HypergeometricPole { .. } => CliError::Domain(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<WaveError> for CliError {
    fn from(e: WaveError) -> Self {
        match e {
            WaveError::Algebra(a) => a.into(),
            WaveError::PrefactorMismatch => CliError::Internal(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<IntertwinerError> for CliError {
    fn from(e: IntertwinerError) -> Self {
        match e {
            IntertwinerError::Wave(w) => w.into(),
            IntertwinerError::Algebra(a) => a.into(),
            IntertwinerError::InconsistentCTable { .. } | IntertwinerError::Internal(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<ExoticError> for CliError {
    fn from(e: ExoticError) -> Self {
        match e {
            ExoticError::Algebra(a) => a.into(),
            ExoticError::NonzeroWeight(_) | ExoticError::AsymmetricBlock(..) | ExoticError::Internal(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

/// Result of one run before rendering.
pub struct Outcome {
    pub command: String,
    pub params: Map<String, Value>,
    pub result: Value,
    pub checks: Option<Value>,
    /// Nonzero when a self-check failed; the output is still written.
    pub failed_check: Option<String>,
    /// Extra file that receives the rendered envelope.
    pub also_write: Option<PathBuf>,
}

impl Outcome {
    fn new(command: &str, params: Map<String, Value>, result: Value) -> Self {
        Outcome {
            command: command.into(),
            params,
            result,
            checks: None,
            failed_check: None,
            also_write: None,
        }
    }
}

/// Space-separated subcommand path, as stored in the envelope.
pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Wave(_) => "wave",
        Command::CasimirCheck(_) => "casimir-check",
        Command::Intertwiner(IntertwinerCommand::Chiral(_)) => "intertwiner chiral",
        Command::Intertwiner(IntertwinerCommand::Tensor(_)) => "intertwiner tensor",
        Command::Reduce(_) => "reduce",
        Command::Exotic(ExoticCommand::Build(_)) => "exotic build",
        Command::Exotic(ExoticCommand::G(_)) => "exotic g",
        Command::Exotic(ExoticCommand::Coeff(_)) => "exotic coeff",
        Command::Exotic(ExoticCommand::Amplitudes(_)) => "exotic amplitudes",
        Command::Exotic(ExoticCommand::Positivity(_)) => "exotic positivity",
    }
}

/// A parsed previous output.
pub struct InputFile {
    pub command: Option<String>,
    pub params: Map<String, Value>,
    pub result: Value,
}

pub fn read_input(path: &Path) -> Result<InputFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{} is not JSON: {e}", path.display())))?;
    match (v.get("command"), v.get("result")) {
        (Some(Value::String(c)), Some(r)) => Ok(InputFile {
            command: Some(c.clone()),
            params: v
                .get("params")
                .and_then(Value::as_object)
                .cloned()
                .unwrap_or_default(),
            result: r.clone(),
        }),
        _ => Ok(InputFile {
            command: None,
            params: Map::new(),
            result: v,
        }),
    }
}

/// Argument vector that replays `params` for `command`.
pub fn replay_argv(command: &str, params: &Map<String, Value>) -> Result<Vec<String>, CliError> {
    let mut argv = vec!["cpw".to_string()];
    argv.extend(command.split(' ').map(String::from));
    for (k, v) in params {
        match v {
            Value::Bool(true) => argv.push(format!("--{k}")),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => {
                argv.push(format!("--{k}"));
                argv.push(s.clone());
            }
            Value::Number(n) => {
                argv.push(format!("--{k}"));
                argv.push(n.to_string());
            }
            _ => return Err(CliError::Usage(format!("parameter {k} cannot be replayed"))),
        }
    }
    Ok(argv)
}

fn rational(flag: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn rationals(flag: &str, s: &str) -> Result<Vec<Rational>, CliError> {
    parse_rational_list(s).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn wave_from_file(path: &Path) -> Result<ChiralWave, CliError> {
    let input = read_input(path)?;
    wave_from_input(&input, path)
}

fn wave_from_input(input: &InputFile, path: &Path) -> Result<ChiralWave, CliError> {
    if let Some(c) = &input.command {
        if c != "wave" {
            return Err(CliError::Usage(format!(
                "{} holds `{c}` output, not a wave",
                path.display()
            )));
        }
    }
    let rec: WaveRecord = serde_json::from_value(input.result.clone())
        .map_err(|e| CliError::Usage(format!("{} is not a wave record: {e}", path.display())))?;
    Ok(ChiralWave::from_record(&rec)?)
}

/// Builds the wave from flags; records the flags it used in `params`.
fn wave_from_flags(a: &WaveArgs, params: &mut Map<String, Value>) -> Result<ChiralWave, CliError> {
    let dims_s = a
        .dims
        .as_deref()
        .ok_or_else(|| CliError::Usage("--dims is required".into()))?;
    let cap = a.cap.ok_or_else(|| CliError::Usage("--cap is required".into()))?;
    let dims = rationals("dims", dims_s)?;
    if let Some(n) = a.n {
        if n != dims.len() {
            return Err(CliError::Usage(format!(
                "--n {n} but {} dimensions given",
                dims.len()
            )));
        }
    }
    let proj = rationals("proj", &a.proj)?;
    let spec = WaveSpec::new(dims, proj)?;
    params.insert("n".into(), json!(spec.n().to_string()));
    params.insert("dims".into(), json!(dims_s));
    params.insert("proj".into(), json!(a.proj));
    params.insert("cap".into(), json!(cap.to_string()));
    Ok(prop1_series(&spec, cap)?)
}

pub fn run(cmd: &Command, input: Option<&Path>) -> Result<Outcome, CliError> {
    match cmd {
        Command::Wave(a) => run_wave(a),
        Command::CasimirCheck(a) => run_casimir(a, input),
        Command::Intertwiner(IntertwinerCommand::Chiral(a)) => run_chiral(a),
        Command::Intertwiner(IntertwinerCommand::Tensor(a)) => run_tensor(a),
        Command::Reduce(a) => run_reduce(a, input),
        Command::Exotic(ExoticCommand::Build(a)) => run_build(a),
        Command::Exotic(ExoticCommand::G(a)) => run_g(a, input),
        Command::Exotic(ExoticCommand::Coeff(a)) => run_coeff(a),
        Command::Exotic(ExoticCommand::Amplitudes(a)) => run_amplitudes(a),
        Command::Exotic(ExoticCommand::Positivity(a)) => run_positivity(a),
    }
}

fn run_wave(a: &WaveArgs) -> Result<Outcome, CliError> {
    let mut params = Map::new();
    let wave = wave_from_flags(a, &mut params)?;
    let rec = serde_json::to_value(wave.to_record()).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(Outcome::new("wave", params, rec))
}

fn run_casimir(a: &CasimirArgs, input: Option<&Path>) -> Result<Outcome, CliError> {
    let mut params = Map::new();
    let source = a.wave_file.as_deref().or(input);
    let wave = match source {
        Some(p) => {
            params.insert("wave".into(), json!(p.display().to_string()));
            let w = wave_from_file(p)?;
            if let Some(c) = a.wave.cap {
                params.insert("cap".into(), json!(c.to_string()));
            }
            w
        }
        None => wave_from_flags(&a.wave, &mut params)?,
    };
    let cap = a.wave.cap.unwrap_or(wave.cap()).min(wave.cap());
    let n = wave.spec.n();
    if !(4..=6).contains(&n) {
        return Err(WaveError::UnsupportedPointCount(n).into());
    }
    let which: Vec<u8> = match a.which {
        Some(k) => {
            params.insert("which".into(), json!(k.to_string()));
            vec![k]
        }
        None => (1..=(n as u8 - 3)).collect(),
    };
    let mut equations = Map::new();
    let mut failed = Vec::new();
    for k in which {
        let r = casimir_residual(&wave, &CasimirEquation::new(k), cap)?;
        if !r.is_zero() {
            failed.push(k.to_string());
        }
        equations.insert(
            k.to_string(),
            json!({
                "zero": r.is_zero(),
                "residual_order": r.order(),
                "residual_terms": r.len(),
            }),
        );
    }
    let mut out = Outcome::new(
        "casimir-check",
        params,
        json!({"cap": cap, "equations": equations}),
    );
    if !failed.is_empty() {
        out.failed_check = Some(format!(
            "Casimir residual nonzero for equation(s) {}",
            failed.join(", ")
        ));
    }
    Ok(out)
}

fn run_chiral(a: &ChiralArgs) -> Result<Outcome, CliError> {
    let d1 = rational("d1", &a.d1)?;
    let d2 = rational("d2", &a.d2)?;
    let (op, kind) = match a.kind {
        Kind::E => (chiral_e(a.h, &d1, &d2), "e"),
        Kind::D => {
            if d1 != d2 {
                return Err(CliError::Usage(
                    "D_h acts on equal dimensions; pass --d1 only".into(),
                ));
            }
            (chiral_d(a.h, &d1)?, "d")
        }
    };
    let mut params = Map::new();
    params.insert("h".into(), json!(a.h.to_string()));
    params.insert("d1".into(), json!(a.d1));
    params.insert("d2".into(), json!(a.d2));
    params.insert("kind".into(), json!(kind));
    let mut out = Outcome::new("intertwiner chiral", params, json!(op.coefficient_map()));
    if a.kind == Kind::E {
        let zero = chiral_pde_residual(&op).is_zero();
        out.checks = Some(json!({"pde_residual_zero": zero}));
        if !zero {
            out.failed_check = Some("E_h does not satisfy the intertwining equation".into());
        }
    }
    Ok(out)
}

fn tensor_json(t: &TensorIntertwiner) -> Value {
    json!({
        "terms": t.terms_map(),
        "pde_residual_zero": t.pde_residual().iter().all(|r| r.is_zero()),
    })
}

fn run_tensor(a: &TensorArgs) -> Result<Outcome, CliError> {
    let mut params = Map::new();
    params.insert("kappa".into(), json!(a.kappa.to_string()));
    params.insert("L".into(), json!(a.l.to_string()));
    let (result, ok) = match (&a.d1, &a.d2) {
        (Some(s1), Some(s2)) => {
            params.insert("d1".into(), json!(s1));
            params.insert("d2".into(), json!(s2));
            let basis = solve_intertwiner_space(a.kappa, a.l, &rational("d1", s1)?, &rational("d2", s2)?)?;
            let ok = basis.iter().all(|t| t.pde_residual().iter().all(|r| r.is_zero()));
            let items: Vec<Value> = basis.iter().map(tensor_json).collect();
            (json!({"dimension": basis.len(), "basis": items}), ok)
        }
        _ => {
            let t = assemble_tensor_intertwiner(a.kappa, a.l)?;
            t.check_homogeneity()?;
            let mut v = tensor_json(&t);
            if let Some(tab) = &t.c_table {
                let entries: BTreeMap<String, String> = tab
                    .entries
                    .iter()
                    .map(|(&(m, n), c)| (format!("c{m}{n}"), c.to_string()))
                    .collect();
                v["c_table"] = json!(entries);
                v["kernel_dim"] = json!(tab.kernel_dim);
            }
            let ok = v["pde_residual_zero"] == json!(true);
            (v, ok)
        }
    };
    let mut out = Outcome::new("intertwiner tensor", params, result);
    if !ok {
        out.failed_check = Some("tensor operator fails the intertwining equations".into());
    }
    Ok(out)
}

fn run_reduce(a: &ReduceArgs, input: Option<&Path>) -> Result<Outcome, CliError> {
    let path = a
        .wave
        .as_deref()
        .or(input)
        .ok_or_else(|| CliError::Usage("reduce needs a wave file (--wave or --input)".into()))?;
    let wave = wave_from_file(path)?;
    let pts: Vec<usize> = a
        .pair
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--pair: bad point {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    let [p, r] = pts[..] else {
        return Err(CliError::Usage("--pair takes two points".into()));
    };
    let pair = WavePair::from_points(wave.spec.n(), p, r)?;
    let red = reduce_wave(&wave, pair, a.h)?;
    let mut params = Map::new();
    params.insert("wave".into(), json!(path.display().to_string()));
    params.insert("pair".into(), json!(a.pair));
    params.insert("h".into(), json!(a.h.to_string()));
    let (outcome, constant) = match &red.outcome {
        ReductionOutcome::Zero => ("zero", Value::Null),
        ReductionOutcome::Multiple(c) => ("multiple", json!(c.to_string())),
        ReductionOutcome::Mismatch { .. } => ("mismatch", Value::Null),
    };
    let reduced: BTreeMap<String, String> = red
        .reduced
        .iter()
        .map(|(k, v)| (format!("{k:?}"), v.to_string()))
        .collect();
    let mut result = json!({
        "outcome": outcome,
        "constant": constant,
        "compared_order": red.compared_order,
        "reduced": reduced,
    });
    if let Some(e) = &red.expected {
        result["expected"] =
            serde_json::to_value(e.to_record()).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    if let ReductionOutcome::Mismatch { label } = &red.outcome {
        result["mismatch_label"] = json!(label);
    }
    Ok(Outcome::new("reduce", params, result))
}

fn run_build(a: &BuildArgs) -> Result<Outcome, CliError> {
    let (name, closed, flag) = match a.name {
        BuildName::E6 => (StructureName::E6, None, "E6"),
        BuildName::B => (StructureName::B, Some(ClosedForm2d::B), "B"),
        BuildName::BMinusHalfE => (
            StructureName::BMinusHalfE,
            Some(ClosedForm2d::BMinusHalfE),
            "B-E/2",
        ),
    };
    let s = build_structure(name)?;
    let terms: Vec<Value> = s
        .terms
        .iter()
        .map(|(m, c)| json!({"coeff": c.to_string(), "monomial": m.to_map()}))
        .collect();
    let restricted = restrict_2d(&s)?;
    let mut result = json!({
        "name": name.to_string(),
        "count": s.len(),
        "terms": terms,
        "prefactor": restricted.prefactor.to_map(),
    });
    let mut params = Map::new();
    params.insert("name".into(), json!(flag));
    let mut failed = None;
    if let Some(which) = closed {
        let ok = closed_form_2d(&restricted, which);
        result["matches_2d_closed_form"] = json!(ok);
        if !ok {
            failed = Some(format!("{name} does not restrict to its 2D closed form"));
        }
    }
    let mut out = Outcome::new("exotic build", params, result);
    out.failed_check = failed;
    Ok(out)
}

fn g_terms_json(g: &GSeries) -> Value {
    let m: BTreeMap<String, String> = g
        .terms()
        .iter()
        .map(|(&(a, b), c)| (format!("({a},{b})"), c.to_string()))
        .collect();
    json!(m)
}

fn g_from_result(v: &Value) -> Result<GSeries, CliError> {
    let bad = |m: &str| CliError::Usage(format!("g input: {m}"));
    let cap = v
        .get("cap")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing cap"))? as u32;
    let terms = v
        .get("terms")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing terms"))?;
    let mut s = TruncatedSeries::zero(vec!["up".into(), "um".into()], cap);
    for (k, c) in terms {
        let inner = k
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| bad(k))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| bad(k))?;
        let a: u32 = a.trim().parse().map_err(|_| bad(k))?;
        let b: u32 = b.trim().parse().map_err(|_| bad(k))?;
        let c = c.as_str().ok_or_else(|| bad(k))?;
        s.add_term(Monomial(vec![a, b]), rational("input", c)?);
    }
    Ok(GSeries { series: s })
}

fn run_g(a: &GArgs, input: Option<&Path>) -> Result<Outcome, CliError> {
    let mut params = Map::new();
    let (g, method) = match input {
        Some(p) => {
            let f = read_input(p)?;
            if f.command.as_deref().is_some_and(|c| c != "exotic g") {
                return Err(CliError::Usage(format!(
                    "{} does not hold a g series",
                    p.display()
                )));
            }
            params.insert("input".into(), json!(p.display().to_string()));
            let method = f.result.get("method").cloned().unwrap_or(Value::Null);
            (g_from_result(&f.result)?, method)
        }
        None => {
            let (m, name) = match a.method {
                Method::Recursion => (GMethod::Recursion, "recursion"),
                Method::Closed => (GMethod::Closed, "closed"),
            };
            params.insert("cap".into(), json!(a.cap.to_string()));
            params.insert("method".into(), json!(name));
            (g_series(a.cap, m)?, json!(name))
        }
    };
    let mut result = json!({"cap": g.cap(), "method": method, "terms": g_terms_json(&g)});
    let mut failed = None;
    if a.check_biharmonic {
        params.insert("check-biharmonic".into(), json!(true));
        let r = verify_g_biharmonic(&g)?;
        let zero = r.residual.is_zero();
        result["biharmonic"] = json!({
            "valid_order": r.valid_order,
            "zero": zero,
            "residual_order": r.residual.order(),
        });
        if !zero {
            failed = Some("g is not biharmonic through the checked order".into());
        }
    }
    let mut out = Outcome::new("exotic g", params, result);
    out.failed_check = failed;
    Ok(out)
}

fn run_coeff(a: &CoeffArgs) -> Result<Outcome, CliError> {
    let (w, name) = match a.structure {
        Weight::B => (Weighting::B, "B"),
        Weight::H => (Weighting::H, "H"),
    };
    let c = channel_coefficient(a.hplus, a.hminus, w)?;
    let via_g = channel_coefficient_via_g(a.hplus, a.hminus, w)?;
    let mut params = Map::new();
    params.insert("hplus".into(), json!(a.hplus.to_string()));
    params.insert("hminus".into(), json!(a.hminus.to_string()));
    params.insert("structure".into(), json!(name));
    let mut out = Outcome::new("exotic coeff", params, json!(c.to_string()));
    out.checks = Some(json!({"agrees_with_g_integral": c == via_g}));
    if c != via_g {
        out.failed_check = Some(format!("coefficient {c} disagrees with the g integral {via_g}"));
    }
    Ok(out)
}

fn run_amplitudes(a: &AmplitudeArgs) -> Result<Outcome, CliError> {
    let m = pw4_expand(a.h, a.hprime, a.cap)?;
    let entries: BTreeMap<String, String> = m
        .entries
        .iter()
        .enumerate()
        .map(|(n, c)| (AmplitudeMatrix::k_label(n as u32).to_string(), c.to_string()))
        .collect();
    let zero = pw4_residual(&m)?.is_zero();
    let mut params = Map::new();
    params.insert("h".into(), json!(a.h.to_string()));
    params.insert("hprime".into(), json!(a.hprime.to_string()));
    params.insert("cap".into(), json!(a.cap.to_string()));
    let mut out = Outcome::new("exotic amplitudes", params, json!({"entries": entries}));
    out.checks = Some(json!({"expansion_residual_zero": zero}));
    if !zero {
        out.failed_check = Some("partial-wave expansion does not reproduce 1".into());
    }
    Ok(out)
}

fn run_positivity(a: &PositivityArgs) -> Result<Outcome, CliError> {
    let (s, name) = match a.structure {
        PosStructure::B => (ChannelStructure::B, "b"),
        PosStructure::H => (ChannelStructure::H, "h"),
        PosStructure::E => (ChannelStructure::E, "e"),
    };
    let report = positivity_report(s, a.hmax, a.kmax)?;
    let mut params = Map::new();
    params.insert("structure".into(), json!(name));
    params.insert("hmax".into(), json!(a.hmax.to_string()));
    params.insert("kmax".into(), json!(a.kmax.to_string()));
    let result = serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut out = Outcome::new("exotic positivity", params, result);
    out.also_write = a.out.clone();
    Ok(out)
}
