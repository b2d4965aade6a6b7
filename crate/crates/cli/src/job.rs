//! Running a validated job and assembling its report.

use gateforge::{
    audit_matrices, build_extended_general, build_extended_restricted, build_simple_not,
    canonical_as_restricted, evolve_time_ordered, evolve_unordered, fit_extended_general,
    normalize_protocol, not_shape_leak, pauli_compose, phase_distance, protocol_integral,
    synthesize_canonical_extended, synthesize_extended, synthesize_general, synthesize_simple,
    verify_gate_with_tolerance, BranchChoice, Dim, ExtendedGeneralParams, ExtendedRestrictedParams,
    GateError, HamiltonianResult64, PauliDecomposition, PauliLabel, Protocol, ProtocolShape,
    QMatrix64, SimpleNotParams, TimeBase64, TimedHamiltonian,
};
use serde_json::{Map, Value};

use crate::report::{self, num, obj};
use crate::spec::{
    parse_document, validate_value, Command, GateParams, JobSpec, ShapeSpec, SpecError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

const REPORT_FORMAT: u32 = 1;

/// Exit status and report of one job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobOutcome {
    pub exit_code: i32,
    pub report: Value,
}

impl JobOutcome {
    /// The report as pretty-printed text with a trailing newline.
    pub fn report_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Command-line values that take precedence over the spec document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub command: Option<Command>,
    pub steps: Option<usize>,
    pub tolerance: Option<f64>,
    pub output_path: Option<String>,
}

/// Parses, validates and runs a spec document.
pub fn run_document(text: &str, overrides: &Overrides) -> JobOutcome {
    let mut doc = match parse_document(text) {
        Ok(d) => d,
        Err(e) => return input_error(&e),
    };
    if let (Some(c), Value::Object(m)) = (overrides.command, &mut doc) {
        m.insert("command".into(), Value::from(c.as_str()));
    }
    let mut spec = match validate_value(&doc) {
        Ok(s) => s,
        Err(e) => return input_error(&e),
    };
    if let Some(n) = overrides.steps {
        spec.steps = n;
    }
    if let Some(t) = overrides.tolerance {
        spec.tolerance = t;
    }
    if let Some(p) = &overrides.output_path {
        spec.output_path = Some(p.clone());
    }
    run_job(&spec)
}

/// Runs a validated job. Exit 0 on success, 2 when verification (or a
/// parameter fit) fails, 1 on input or module errors.
pub fn run_job(spec: &JobSpec) -> JobOutcome {
    if let Err(reason) = check_overrides(spec) {
        return input_error(&SpecError::Fields(vec![reason]));
    }
    match execute(spec) {
        Ok((pass, result)) => {
            let (status, exit_code) = match pass {
                Some(true) => ("pass", EXIT_OK),
                Some(false) => ("fail", EXIT_FAILED),
                None => ("ok", EXIT_OK),
            };
            let mut m = header(status, spec);
            m.insert("result".into(), result);
            finish(m, spec, exit_code)
        }
        Err(e) => {
            let mut m = header("error", spec);
            m.insert("code".into(), Value::from(e.code()));
            m.insert("message".into(), Value::from(e.to_string()));
            let exit_code = match e {
                GateError::Fit { .. } => EXIT_FAILED,
                _ => EXIT_INPUT,
            };
            finish(m, spec, exit_code)
        }
    }
}

fn check_overrides(spec: &JobSpec) -> Result<(), crate::spec::FieldError> {
    let bad = |path: &str, message: String| crate::spec::FieldError {
        path: path.into(),
        message,
    };
    if spec.steps == 0 {
        return Err(bad("steps", "must be at least 1".into()));
    }
    if !(spec.tolerance.is_finite() && spec.tolerance > 0.0) {
        return Err(bad(
            "tolerance",
            format!("must be positive, got {}", spec.tolerance),
        ));
    }
    Ok(())
}

fn header(status: &str, spec: &JobSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("status".into(), Value::from(status));
    m.insert("command".into(), Value::from(spec.command.as_str()));
    if let Some(g) = &spec.gate {
        m.insert("family".into(), Value::from(g.family()));
    }
    m
}

fn finish(mut m: Map<String, Value>, spec: &JobSpec, exit_code: i32) -> JobOutcome {
    m.insert("exit_code".into(), Value::from(exit_code));
    m.insert("spec".into(), spec.to_value());
    m.insert("meta".into(), meta());
    JobOutcome {
        exit_code,
        report: Value::Object(m),
    }
}

fn meta() -> Value {
    obj([
        ("tool", Value::from("gateforge")),
        ("version", Value::from(env!("CARGO_PKG_VERSION"))),
        ("report_format", Value::from(REPORT_FORMAT)),
    ])
}

/// Report for a document that failed to parse or validate.
pub fn input_error(e: &SpecError) -> JobOutcome {
    let mut m = Map::new();
    m.insert("status".into(), Value::from("error"));
    match e {
        SpecError::Parse {
            line,
            column,
            message,
        } => {
            m.insert("code".into(), Value::from("PARSE"));
            m.insert("message".into(), Value::from(message.as_str()));
            m.insert("line".into(), Value::from(*line));
            m.insert("column".into(), Value::from(*column));
        }
        SpecError::Fields(errors) => {
            m.insert("code".into(), Value::from("INPUT"));
            m.insert("message".into(), Value::from(e.to_string()));
            let list = errors
                .iter()
                .map(|f| {
                    obj([
                        ("path", Value::from(f.path.as_str())),
                        ("message", Value::from(f.message.as_str())),
                    ])
                })
                .collect();
            m.insert("errors".into(), Value::Array(list));
        }
    }
    m.insert("exit_code".into(), Value::from(EXIT_INPUT));
    m.insert("meta".into(), meta());
    JobOutcome {
        exit_code: EXIT_INPUT,
        report: Value::Object(m),
    }
}

struct Synthesized {
    target: QMatrix64,
    hamiltonian: HamiltonianResult64,
    up_to_phase: bool,
}

fn timebase(spec: &JobSpec) -> gateforge::Result<TimeBase64> {
    TimeBase64::new(spec.delta_t, spec.hbar)
}

fn branch(spec: &JobSpec) -> BranchChoice {
    let [n1, n2, n3, n4] = spec.branch;
    BranchChoice::new(n1, n2, n3, n4)
}

/// Target unitary of a gate description.
fn target_of(gate: &GateParams, tb: &TimeBase64) -> QMatrix64 {
    match gate {
        GateParams::Simple { alpha, beta } => {
            build_simple_not(&SimpleNotParams::new(*alpha, *beta))
        }
        GateParams::ExtendedGeneral(a) => build_extended_general(&ExtendedGeneralParams::new(*a)),
        GateParams::ExtendedRestricted {
            alpha,
            beta,
            rho,
            delta,
        } => build_extended_restricted(&ExtendedRestrictedParams::new(*alpha, *beta, *rho, *delta)),
        GateParams::Canonical { ising, gamma, n } => {
            let (p, _) = canonical_as_restricted(*ising, *n, *gamma, tb);
            build_extended_restricted(&p)
        }
    }
}

fn synthesize(spec: &JobSpec, gate: &GateParams) -> gateforge::Result<Synthesized> {
    let tb = timebase(spec)?;
    let b = branch(spec);
    let opts = &spec.options;
    let hamiltonian = match gate {
        GateParams::Simple { alpha, beta } => {
            synthesize_simple(&SimpleNotParams::new(*alpha, *beta), &b, &tb, opts)?
        }
        GateParams::ExtendedGeneral(a) => {
            synthesize_general(&ExtendedGeneralParams::new(*a), &b, &tb, opts)?
        }
        GateParams::ExtendedRestricted {
            alpha,
            beta,
            rho,
            delta,
        } => synthesize_extended(
            &ExtendedRestrictedParams::new(*alpha, *beta, *rho, *delta),
            &b,
            &tb,
            opts,
        )?,
        GateParams::Canonical { ising, gamma, n } => {
            synthesize_canonical_extended(*ising, *n, *gamma, &tb)?
        }
    };
    let up_to_phase = opts.drop_identity || matches!(gate, GateParams::Canonical { .. });
    Ok(Synthesized {
        target: target_of(gate, &tb),
        hamiltonian,
        up_to_phase,
    })
}

fn require_gate(spec: &JobSpec) -> gateforge::Result<&GateParams> {
    spec.gate.as_ref().ok_or_else(|| GateError::Parameter {
        reason: format!("{} needs a gate family", spec.command),
    })
}

/// `Some(pass)` for verifying commands, `None` for informational ones.
fn execute(spec: &JobSpec) -> gateforge::Result<(Option<bool>, Value)> {
    match spec.command {
        Command::Synth => synth(spec),
        Command::Verify => verify(spec),
        Command::Evolve => evolve(spec).map(|v| (None, v)),
        Command::Audit => audit(spec).map(|v| (None, v)),
        Command::Fit => fit(spec).map(|v| (None, v)),
    }
}

fn synth(spec: &JobSpec) -> gateforge::Result<(Option<bool>, Value)> {
    let s = synthesize(spec, require_gate(spec)?)?;
    let v = verify_gate_with_tolerance(
        &s.hamiltonian,
        &s.target,
        &timebase(spec)?,
        s.up_to_phase,
        spec.tolerance,
    )?;
    let result = obj([
        ("hamiltonian", report::hamiltonian(&s.hamiltonian)),
        ("target", report::matrix(&s.target)),
        ("verification", report::verification(&v)),
    ]);
    Ok((Some(v.pass), result))
}

fn build_protocol(spec: &JobSpec) -> gateforge::Result<Option<Protocol<f64>>> {
    let Some(p) = &spec.protocol else {
        return Ok(None);
    };
    let shape = match &p.shape {
        ShapeSpec::Rectangular => ProtocolShape::Rectangular,
        ShapeSpec::RaisedCosine => ProtocolShape::RaisedCosine,
        ShapeSpec::ConstPlusCosine { a, b, omega, phase } => ProtocolShape::ConstPlusCosine {
            a: *a,
            b: *b,
            omega: *omega,
            phase: *phase,
        },
        ShapeSpec::Sampled(samples) => ProtocolShape::Sampled(samples.clone()),
    };
    Protocol::new(shape, p.start, spec.delta_t, p.scale).map(Some)
}

fn protocol_summary(raw: &Protocol<f64>, normalized: &Protocol<f64>) -> gateforge::Result<Value> {
    Ok(obj([
        ("integral", num(protocol_integral(raw)?)),
        ("normalized_scale", num(normalized.scale)),
        ("start", num(raw.start)),
        ("duration", num(raw.duration)),
    ]))
}

fn verify(spec: &JobSpec) -> gateforge::Result<(Option<bool>, Value)> {
    let s = synthesize(spec, require_gate(spec)?)?;
    let tb = timebase(spec)?;
    let Some(raw) = build_protocol(spec)? else {
        let v = verify_gate_with_tolerance(
            &s.hamiltonian,
            &s.target,
            &tb,
            s.up_to_phase,
            spec.tolerance,
        )?;
        let result = obj([
            ("mode", Value::from("constant")),
            ("hamiltonian", report::pauli(&s.hamiltonian.decomposition)),
            ("verification", report::verification(&v)),
        ]);
        return Ok((Some(v.pass), result));
    };
    let normalized = normalize_protocol(&raw)?;
    let th = TimedHamiltonian::single(s.hamiltonian.hamiltonian.clone(), normalized.clone());
    let evolution = evolve_time_ordered(&th, &tb, spec.steps)?;
    let exact = evolution.max_diff(&s.target);
    let up_to = phase_distance(&evolution, &s.target)?;
    let distance = if s.up_to_phase { up_to } else { exact };
    let leak = match evolution.dim() {
        Dim::Four => Some(not_shape_leak(&evolution)?),
        Dim::Two => None,
    };
    let pass = distance <= spec.tolerance && leak.is_none_or(|l| l <= spec.tolerance);
    let mut v = report::obj_map([
        ("pass", Value::from(pass)),
        ("up_to_phase", Value::from(s.up_to_phase)),
        ("tolerance", num(spec.tolerance)),
        ("exact_distance", num(exact)),
        ("phase_distance", num(up_to)),
        ("steps", Value::from(spec.steps)),
    ]);
    if let Some(l) = leak {
        v.insert("behavior_leak".into(), num(l));
    }
    v.insert("evolution".into(), report::matrix(&evolution));
    let result = obj([
        ("mode", Value::from("protocol")),
        ("hamiltonian", report::pauli(&s.hamiltonian.decomposition)),
        ("protocol", protocol_summary(&raw, &normalized)?),
        ("verification", Value::Object(v)),
    ]);
    Ok((Some(pass), result))
}

fn evolve(spec: &JobSpec) -> gateforge::Result<Value> {
    let s = synthesize(spec, require_gate(spec)?)?;
    let tb = timebase(spec)?;
    let raw = build_protocol(spec)?.ok_or_else(|| GateError::Parameter {
        reason: "evolve needs a protocol".into(),
    })?;
    let normalized = normalize_protocol(&raw)?;
    let th = TimedHamiltonian::single(s.hamiltonian.hamiltonian.clone(), normalized.clone());
    let ordered = evolve_time_ordered(&th, &tb, spec.steps)?;
    let unordered = evolve_unordered(&th, &tb)?;
    Ok(obj([
        ("hamiltonian", report::pauli(&s.hamiltonian.decomposition)),
        ("protocol", protocol_summary(&raw, &normalized)?),
        ("steps", Value::from(spec.steps)),
        ("ordered", report::matrix(&ordered)),
        ("unordered", report::matrix(&unordered)),
        ("ordering_discrepancy", num(ordered.max_diff(&unordered))),
        (
            "target_phase_distance",
            num(phase_distance(&ordered, &s.target)?),
        ),
    ]))
}

/// Pauli terms grouped the way the coupling is usually split: identity,
/// single-spin `σz` terms, the Ising term and the two tensor pairs. Any other
/// term is its own group.
fn group_terms(d: &PauliDecomposition<f64>) -> Vec<(String, PauliDecomposition<f64>)> {
    fn group_of(label: &str) -> &str {
        match label {
            "II" => "identity",
            "ZI" | "IZ" => "linear",
            "ZZ" => "ising",
            "XX" | "YY" => "tensor_cos",
            "XY" | "YX" => "tensor_sin",
            other => other,
        }
    }
    let fixed = ["identity", "linear", "ising", "tensor_cos", "tensor_sin"];
    let mut groups: Vec<(String, Vec<(PauliLabel, f64)>)> = Vec::new();
    for (label, coeff) in d.terms() {
        let text = label.to_string();
        let name = if d.dim() == Dim::Four {
            group_of(&text)
        } else {
            text.as_str()
        }
        .to_string();
        match groups.iter_mut().find(|(n, _)| *n == name) {
            Some((_, terms)) => terms.push((label, coeff)),
            None => groups.push((name, vec![(label, coeff)])),
        }
    }
    let rank = |name: &str| fixed.iter().position(|f| *f == name).unwrap_or(fixed.len());
    groups.sort_by_key(|(name, _)| rank(name));
    groups
        .into_iter()
        .map(|(name, terms)| {
            let decomposition =
                PauliDecomposition::from_terms(terms).expect("terms share one dimension");
            (name, decomposition)
        })
        .collect()
}

fn audit(spec: &JobSpec) -> gateforge::Result<Value> {
    let s = synthesize(spec, require_gate(spec)?)?;
    let groups = group_terms(&s.hamiltonian.decomposition);
    let names: Vec<String> = groups.iter().map(|(n, _)| n.clone()).collect();
    let mats: Vec<QMatrix64> = groups.iter().map(|(_, d)| pauli_compose(d)).collect();
    let refs: Vec<&QMatrix64> = mats.iter().collect();
    let r = audit_matrices(&refs)?;
    let mut listing = Map::new();
    for (name, d) in &groups {
        listing.insert(name.clone(), report::pauli(d));
    }
    Ok(obj([
        ("groups", Value::Object(listing)),
        ("audit", report::audit(&names, &r)),
    ]))
}

fn fit(spec: &JobSpec) -> gateforge::Result<Value> {
    let (u, source) = match (&spec.unitary, &spec.gate) {
        (Some(rows), _) => (QMatrix64::from_rows(rows)?, "unitary"),
        (None, Some(g)) => (target_of(g, &timebase(spec)?), "family"),
        (None, None) => {
            return Err(GateError::Parameter {
                reason: "fit needs a unitary or a gate family".into(),
            })
        }
    };
    let p = fit_extended_general(&u)?;
    let rebuilt = build_extended_general(&p);
    let a = p.angles();
    let angles = obj([
        ("chi", num(a.chi)),
        ("beta", num(a.beta)),
        ("alpha", num(a.alpha)),
        ("rho", num(a.rho)),
        ("eta", num(a.eta)),
        ("delta", num(a.delta)),
        ("omega", num(a.omega)),
        ("upsilon", num(a.upsilon)),
    ]);
    Ok(obj([
        ("source", Value::from(source)),
        ("params", angles),
        ("residual", num(rebuilt.max_diff(&u))),
        ("rebuilt", report::matrix(&rebuilt)),
    ]))
}
