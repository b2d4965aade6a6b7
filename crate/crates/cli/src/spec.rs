//! Job specification documents: parsing, validation and canonical re-emission.

use std::fmt;
use std::str::FromStr;

use gateforge::{Complex64, ExtendedGeneralAngles, SynthesisOptions};
use serde_json::{Map, Value};

use crate::report::num;

pub const DEFAULT_STEPS: usize = 10_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Synth,
    Evolve,
    Fit,
    Audit,
    Verify,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Synth,
        Command::Evolve,
        Command::Fit,
        Command::Audit,
        Command::Verify,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Synth => "synth",
            Command::Evolve => "evolve",
            Command::Fit => "fit",
            Command::Audit => "audit",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                format!("unknown command {s:?} (expected one of synth, evolve, fit, audit, verify)")
            })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Gate family together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GateParams {
    Simple {
        alpha: f64,
        beta: f64,
    },
    ExtendedGeneral(ExtendedGeneralAngles<f64>),
    ExtendedRestricted {
        alpha: f64,
        beta: f64,
        rho: f64,
        delta: f64,
    },
    /// `n` is `N1 - N2` of the coupling.
    Canonical {
        ising: f64,
        gamma: f64,
        n: i64,
    },
}

impl GateParams {
    pub fn family(&self) -> &'static str {
        match self {
            GateParams::Simple { .. } => "simple",
            GateParams::ExtendedGeneral(_) => "extended_general",
            GateParams::ExtendedRestricted { .. } => "extended_restricted",
            GateParams::Canonical { .. } => "canonical",
        }
    }

    fn to_value(&self) -> Value {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        match self {
            GateParams::Simple { alpha, beta } => {
                put("alpha", num(*alpha));
                put("beta", num(*beta));
            }
            GateParams::ExtendedGeneral(a) => {
                for (k, v) in general_fields(a) {
                    put(k, num(v));
                }
            }
            GateParams::ExtendedRestricted {
                alpha,
                beta,
                rho,
                delta,
            } => {
                put("alpha", num(*alpha));
                put("beta", num(*beta));
                put("rho", num(*rho));
                put("delta", num(*delta));
            }
            GateParams::Canonical { ising, gamma, n } => {
                put("ising", num(*ising));
                put("gamma", num(*gamma));
                put("n", Value::from(*n));
            }
        }
        Value::Object(m)
    }
}

fn general_fields(a: &ExtendedGeneralAngles<f64>) -> [(&'static str, f64); 8] {
    [
        ("chi", a.chi),
        ("beta", a.beta),
        ("alpha", a.alpha),
        ("rho", a.rho),
        ("eta", a.eta),
        ("delta", a.delta),
        ("omega", a.omega),
        ("upsilon", a.upsilon),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    Rectangular,
    RaisedCosine,
    ConstPlusCosine {
        a: f64,
        b: f64,
        omega: f64,
        phase: f64,
    },
    Sampled(Vec<(f64, f64)>),
}

/// Protocol description; the window length is the job's `delta_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    pub shape: ShapeSpec,
    pub start: f64,
    pub scale: f64,
}

impl ProtocolSpec {
    fn to_value(&self) -> Value {
        let mut m = Map::new();
        let name = match &self.shape {
            ShapeSpec::Rectangular => "rectangular",
            ShapeSpec::RaisedCosine => "raised_cosine",
            ShapeSpec::ConstPlusCosine { .. } => "const_plus_cosine",
            ShapeSpec::Sampled(_) => "sampled",
        };
        m.insert("shape".into(), Value::from(name));
        m.insert("start".into(), num(self.start));
        m.insert("scale".into(), num(self.scale));
        match &self.shape {
            ShapeSpec::ConstPlusCosine { a, b, omega, phase } => {
                m.insert("a".into(), num(*a));
                m.insert("b".into(), num(*b));
                m.insert("omega".into(), num(*omega));
                m.insert("phase".into(), num(*phase));
            }
            ShapeSpec::Sampled(samples) => {
                let rows = samples
                    .iter()
                    .map(|(t, v)| Value::Array(vec![num(*t), num(*v)]))
                    .collect();
                m.insert("samples".into(), Value::Array(rows));
            }
            ShapeSpec::Rectangular | ShapeSpec::RaisedCosine => {}
        }
        Value::Object(m)
    }
}

/// A fully defaulted, validated job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub gate: Option<GateParams>,
    /// `N1..N4`; two-element input leaves `N3 = N4 = 0`.
    pub branch: [i64; 4],
    pub delta_t: f64,
    pub hbar: f64,
    pub options: SynthesisOptions,
    pub protocol: Option<ProtocolSpec>,
    /// Row-major 4×4 matrix to fit.
    pub unitary: Option<Vec<Vec<Complex64>>>,
    pub steps: usize,
    pub tolerance: f64,
    pub output_path: Option<String>,
}

impl JobSpec {
    /// Canonical document form; `validate_spec` of its text gives back `self`.
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::from(self.command.as_str()));
        if let Some(g) = &self.gate {
            m.insert("family".into(), Value::from(g.family()));
            m.insert("params".into(), g.to_value());
        }
        m.insert(
            "branch".into(),
            Value::Array(self.branch.iter().map(|&n| Value::from(n)).collect()),
        );
        let mut tb = Map::new();
        tb.insert("delta_t".into(), num(self.delta_t));
        tb.insert("hbar".into(), num(self.hbar));
        m.insert("timebase".into(), Value::Object(tb));
        let mut opts = Map::new();
        opts.insert(
            "drop_identity".into(),
            Value::from(self.options.drop_identity),
        );
        opts.insert(
            "require_no_linear".into(),
            Value::from(self.options.require_no_linear),
        );
        opts.insert(
            "minimize_splitting".into(),
            Value::from(self.options.minimize_splitting),
        );
        m.insert("options".into(), Value::Object(opts));
        if let Some(p) = &self.protocol {
            m.insert("protocol".into(), p.to_value());
        }
        if let Some(u) = &self.unitary {
            m.insert("unitary".into(), crate::report::complex_rows(u));
        }
        m.insert("steps".into(), Value::from(self.steps));
        m.insert("tolerance".into(), num(self.tolerance));
        if let Some(path) = &self.output_path {
            m.insert("output_path".into(), Value::from(path.as_str()));
        }
        Value::Object(m)
    }

    pub fn to_document(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("spec serializes")
    }
}

/// One validation problem, located by a dotted path into the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    /// The text is not a well-formed document.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// The document is well formed but has invalid fields.
    Fields(Vec<FieldError>),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Parse {
                line,
                column,
                message,
            } => write!(f, "line {line}, column {column}: {message}"),
            SpecError::Fields(errors) => {
                let parts: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
                write!(f, "{}", parts.join("; "))
            }
        }
    }
}

impl std::error::Error for SpecError {}

pub fn parse_document(text: &str) -> Result<Value, SpecError> {
    serde_json::from_str(text).map_err(|e| SpecError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses and validates a spec document.
pub fn validate_spec(text: &str) -> Result<JobSpec, SpecError> {
    validate_value(&parse_document(text)?)
}

/// Validates an already parsed document, collecting every field error.
pub fn validate_value(doc: &Value) -> Result<JobSpec, SpecError> {
    let mut v = Validator::default();
    let spec = v.job(doc);
    match spec {
        Some(s) if v.errors.is_empty() => Ok(s),
        _ => Err(SpecError::Fields(v.errors)),
    }
}

#[derive(Default)]
struct Validator {
    errors: Vec<FieldError>,
}

impl Validator {
    fn err(&mut self, path: &str, message: impl Into<String>) {
        self.errors.push(FieldError {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn object<'a>(&mut self, path: &str, v: &'a Value) -> Option<&'a Map<String, Value>> {
        match v {
            Value::Object(m) => Some(m),
            _ => {
                self.err(path, "expected an object");
                None
            }
        }
    }

    fn reject_unknown(&mut self, path: &str, m: &Map<String, Value>, allowed: &[&str]) {
        for key in m.keys() {
            if !allowed.contains(&key.as_str()) {
                self.err(
                    &join(path, key),
                    format!("unknown key (allowed: {})", allowed.join(", ")),
                );
            }
        }
    }

    fn real(&mut self, path: &str, v: &Value) -> Option<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            Some(_) => {
                self.err(path, "must be finite");
                None
            }
            None => {
                self.err(path, "expected a number");
                None
            }
        }
    }

    fn opt_real(&mut self, m: &Map<String, Value>, path: &str, key: &str, default: f64) -> f64 {
        match m.get(key) {
            Some(v) => self.real(&join(path, key), v).unwrap_or(default),
            None => default,
        }
    }

    fn req_real(&mut self, m: &Map<String, Value>, path: &str, key: &str) -> Option<f64> {
        match m.get(key) {
            Some(v) => self.real(&join(path, key), v),
            None => {
                self.err(&join(path, key), "required");
                None
            }
        }
    }

    fn positive(&mut self, m: &Map<String, Value>, path: &str, key: &str, default: f64) -> f64 {
        let x = self.opt_real(m, path, key, default);
        if x <= 0.0 {
            self.err(&join(path, key), format!("must be positive, got {x}"));
        }
        x
    }

    fn integer(&mut self, path: &str, v: &Value) -> Option<i64> {
        let n = v.as_i64();
        if n.is_none() {
            self.err(path, "expected an integer");
        }
        n
    }

    fn string<'a>(&mut self, path: &str, v: &'a Value) -> Option<&'a str> {
        let s = v.as_str();
        if s.is_none() {
            self.err(path, "expected a string");
        }
        s
    }

    fn flag(&mut self, m: &Map<String, Value>, path: &str, key: &str) -> bool {
        match m.get(key) {
            None => false,
            Some(Value::Bool(b)) => *b,
            Some(_) => {
                self.err(&join(path, key), "expected true or false");
                false
            }
        }
    }

    fn job(&mut self, doc: &Value) -> Option<JobSpec> {
        let m = self.object("$", doc)?;
        self.reject_unknown(
            "",
            m,
            &[
                "command",
                "family",
                "params",
                "branch",
                "timebase",
                "options",
                "protocol",
                "unitary",
                "steps",
                "tolerance",
                "output_path",
            ],
        );

        let command = match m.get("command") {
            None => {
                self.err("command", "required");
                None
            }
            Some(v) => self
                .string("command", v)
                .and_then(|s| match s.parse::<Command>() {
                    Ok(c) => Some(c),
                    Err(e) => {
                        self.err("command", e);
                        None
                    }
                }),
        };

        let branch = self.branch(m.get("branch"));
        let gate = self.gate(m, branch);

        let (delta_t, hbar) = match m.get("timebase") {
            None => (1.0, 1.0),
            Some(v) => match self.object("timebase", v) {
                Some(tb) => {
                    self.reject_unknown("timebase", tb, &["delta_t", "hbar"]);
                    (
                        self.positive(tb, "timebase", "delta_t", 1.0),
                        self.positive(tb, "timebase", "hbar", 1.0),
                    )
                }
                None => (1.0, 1.0),
            },
        };

        let options = match m.get("options") {
            None => SynthesisOptions::default(),
            Some(v) => match self.object("options", v) {
                Some(o) => {
                    let keys = ["drop_identity", "require_no_linear", "minimize_splitting"];
                    self.reject_unknown("options", o, &keys);
                    SynthesisOptions {
                        drop_identity: self.flag(o, "options", keys[0]),
                        require_no_linear: self.flag(o, "options", keys[1]),
                        minimize_splitting: self.flag(o, "options", keys[2]),
                    }
                }
                None => SynthesisOptions::default(),
            },
        };

        let protocol = m.get("protocol").and_then(|v| self.protocol(v));
        let unitary = m.get("unitary").and_then(|v| self.unitary(v));

        let steps = match m.get("steps") {
            None => DEFAULT_STEPS,
            Some(v) => match self.integer("steps", v) {
                Some(n) if n >= 1 => n as usize,
                Some(n) => {
                    self.err("steps", format!("must be at least 1, got {n}"));
                    DEFAULT_STEPS
                }
                None => DEFAULT_STEPS,
            },
        };
        let tolerance = self.positive(m, "", "tolerance", DEFAULT_TOLERANCE);
        let output_path = m
            .get("output_path")
            .and_then(|v| self.string("output_path", v))
            .map(str::to_string);

        let command = command?;
        self.requirements(command, &gate, &protocol, &unitary);

        Some(JobSpec {
            command,
            gate: gate.flatten(),
            branch: branch.unwrap_or([0; 4]),
            delta_t,
            hbar,
            options,
            protocol,
            unitary,
            steps,
            tolerance,
            output_path,
        })
    }

    fn requirements(
        &mut self,
        command: Command,
        gate: &Option<Option<GateParams>>,
        protocol: &Option<ProtocolSpec>,
        unitary: &Option<Vec<Vec<Complex64>>>,
    ) {
        // `gate` is None when family/params were invalid (already reported)
        let absent = matches!(gate, Some(None));
        match command {
            Command::Fit => {
                if unitary.is_some() && matches!(gate, Some(Some(_))) {
                    self.err(
                        "unitary",
                        "give either a unitary or family/params to fit, not both",
                    );
                } else if unitary.is_none() && absent {
                    self.err(
                        "unitary",
                        "fit needs a unitary or a two-spin family with params",
                    );
                }
                if let Some(Some(GateParams::Simple { .. })) = gate {
                    self.err("family", "fit needs a two-spin family");
                }
            }
            _ => {
                if absent {
                    self.err("family", format!("required for {command}"));
                }
                if unitary.is_some() {
                    self.err("unitary", format!("only used by fit, not {command}"));
                }
            }
        }
        if command == Command::Evolve && protocol.is_none() {
            self.err("protocol", "required for evolve");
        }
    }

    fn branch(&mut self, v: Option<&Value>) -> Option<[i64; 4]> {
        let Some(v) = v else {
            return Some([0; 4]);
        };
        let Some(items) = v.as_array() else {
            self.err("branch", "expected an array of 2 or 4 integers");
            return None;
        };
        if items.len() != 2 && items.len() != 4 {
            self.err(
                "branch",
                format!("expected 2 or 4 integers, got {}", items.len()),
            );
            return None;
        }
        let mut out = [0i64; 4];
        let mut ok = true;
        for (k, item) in items.iter().enumerate() {
            match self.integer(&format!("branch[{k}]"), item) {
                Some(n) => out[k] = n,
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    /// `Some(None)` when the document names no family, `None` when the
    /// family or params are invalid.
    fn gate(
        &mut self,
        m: &Map<String, Value>,
        branch: Option<[i64; 4]>,
    ) -> Option<Option<GateParams>> {
        let family = match m.get("family") {
            None => {
                if m.contains_key("params") {
                    self.err("family", "required when params are given");
                    return None;
                }
                return Some(None);
            }
            Some(v) => self.string("family", v)?,
        };
        let keys: &[&str] = match family {
            "simple" => &["alpha", "beta"],
            "extended_general" => &[
                "chi", "beta", "alpha", "rho", "eta", "delta", "omega", "upsilon",
            ],
            "extended_restricted" => &["alpha", "beta", "rho", "delta"],
            "canonical" => &["ising", "gamma", "n"],
            other => {
                self.err(
                    "family",
                    format!(
                        "unknown family {other:?} (expected simple, extended_general, extended_restricted or canonical)"
                    ),
                );
                return None;
            }
        };
        let Some(pv) = m.get("params") else {
            self.err("params", format!("required for family {family}"));
            return None;
        };
        let p = self.object("params", pv)?;
        self.reject_unknown("params", p, keys);
        let before = self.errors.len();
        let gate = match family {
            "simple" => GateParams::Simple {
                alpha: self.req_real(p, "params", "alpha").unwrap_or(0.0),
                beta: self.req_real(p, "params", "beta").unwrap_or(0.0),
            },
            "extended_restricted" => GateParams::ExtendedRestricted {
                alpha: self.req_real(p, "params", "alpha").unwrap_or(0.0),
                beta: self.req_real(p, "params", "beta").unwrap_or(0.0),
                rho: self.req_real(p, "params", "rho").unwrap_or(0.0),
                delta: self.req_real(p, "params", "delta").unwrap_or(0.0),
            },
            "extended_general" => {
                let mut x = |k: &str| self.req_real(p, "params", k).unwrap_or(0.0);
                GateParams::ExtendedGeneral(ExtendedGeneralAngles {
                    chi: x("chi"),
                    beta: x("beta"),
                    alpha: x("alpha"),
                    rho: x("rho"),
                    eta: x("eta"),
                    delta: x("delta"),
                    omega: x("omega"),
                    upsilon: x("upsilon"),
                })
            }
            _ => {
                let default_n = branch.map_or(0, |b| b[0] - b[1]);
                let n = match p.get("n") {
                    Some(v) => self.integer("params.n", v).unwrap_or(0),
                    None => default_n,
                };
                GateParams::Canonical {
                    ising: self.req_real(p, "params", "ising").unwrap_or(0.0),
                    gamma: self.req_real(p, "params", "gamma").unwrap_or(0.0),
                    n,
                }
            }
        };
        (self.errors.len() == before).then_some(Some(gate))
    }

    fn protocol(&mut self, v: &Value) -> Option<ProtocolSpec> {
        let m = self.object("protocol", v)?;
        let shape_name = match m.get("shape") {
            Some(s) => self.string("protocol.shape", s)?,
            None => {
                self.err("protocol.shape", "required");
                return None;
            }
        };
        let before = self.errors.len();
        let start = self.opt_real(m, "protocol", "start", 0.0);
        let scale = self.opt_real(m, "protocol", "scale", 1.0);
        let common = ["shape", "start", "scale"];
        let shape = match shape_name {
            "rectangular" | "raised_cosine" => {
                self.reject_unknown("protocol", m, &common);
                if shape_name == "rectangular" {
                    ShapeSpec::Rectangular
                } else {
                    ShapeSpec::RaisedCosine
                }
            }
            "const_plus_cosine" => {
                self.reject_unknown(
                    "protocol",
                    m,
                    &["shape", "start", "scale", "a", "b", "omega", "phase"],
                );
                ShapeSpec::ConstPlusCosine {
                    a: self.req_real(m, "protocol", "a").unwrap_or(0.0),
                    b: self.req_real(m, "protocol", "b").unwrap_or(0.0),
                    omega: self.req_real(m, "protocol", "omega").unwrap_or(0.0),
                    phase: self.opt_real(m, "protocol", "phase", 0.0),
                }
            }
            "sampled" => {
                self.reject_unknown("protocol", m, &["shape", "start", "scale", "samples"]);
                ShapeSpec::Sampled(self.samples(m.get("samples")))
            }
            other => {
                self.err(
                    "protocol.shape",
                    format!("unknown shape {other:?} (expected rectangular, raised_cosine, const_plus_cosine or sampled)"),
                );
                return None;
            }
        };
        (self.errors.len() == before).then_some(ProtocolSpec {
            shape,
            start,
            scale,
        })
    }

    fn samples(&mut self, v: Option<&Value>) -> Vec<(f64, f64)> {
        let Some(items) = v.and_then(Value::as_array) else {
            self.err("protocol.samples", "required: array of [time, value] pairs");
            return Vec::new();
        };
        let mut out = Vec::with_capacity(items.len());
        for (k, item) in items.iter().enumerate() {
            let path = format!("protocol.samples[{k}]");
            match item.as_array().map(Vec::as_slice) {
                Some([t, x]) => {
                    let t = self.real(&format!("{path}[0]"), t);
                    let x = self.real(&format!("{path}[1]"), x);
                    if let (Some(t), Some(x)) = (t, x) {
                        out.push((t, x));
                    }
                }
                _ => self.err(&path, "expected a [time, value] pair"),
            }
        }
        out
    }

    fn unitary(&mut self, v: &Value) -> Option<Vec<Vec<Complex64>>> {
        let rows = match v.as_array() {
            Some(r) if r.len() == 4 => r,
            _ => {
                self.err("unitary", "expected 4 rows of 4 {re, im} entries");
                return None;
            }
        };
        let before = self.errors.len();
        let mut out = Vec::with_capacity(4);
        for (i, row) in rows.iter().enumerate() {
            let path = format!("unitary[{i}]");
            let Some(entries) = row.as_array().filter(|r| r.len() == 4) else {
                self.err(&path, "expected 4 entries");
                continue;
            };
            let mut r = Vec::with_capacity(4);
            for (j, e) in entries.iter().enumerate() {
                let p = format!("{path}[{j}]");
                let Some(obj) = self.object(&p, e) else {
                    continue;
                };
                self.reject_unknown(&p, obj, &["re", "im"]);
                let re = self.req_real(obj, &p, "re").unwrap_or(0.0);
                let im = self.req_real(obj, &p, "im").unwrap_or(0.0);
                r.push(Complex64::new(re, im));
            }
            out.push(r);
        }
        (self.errors.len() == before).then_some(out)
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}
