//! Report documents. Reals are written with 17 significant digits so that
//! every value parses back to the same `f64`; complex numbers are `{re, im}`.

use gateforge::{
    AuditReport, Complex64, EnergySpectrum, HamiltonianResult64, PauliDecomposition64, QMatrix64,
    VerificationReport64,
};
use serde_json::{Map, Number, Value};

/// A real as a JSON number with 17 significant digits; non-finite becomes null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let x = if x == 0.0 { 0.0 } else { x };
    let text = format!("{x:.16e}");
    Value::Number(
        text.parse::<Number>()
            .expect("formatted float is a JSON number"),
    )
}

pub fn complex(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

pub fn complex_rows(rows: &[Vec<Complex64>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().copied().map(complex).collect()))
            .collect(),
    )
}

pub fn matrix(m: &QMatrix64) -> Value {
    complex_rows(&m.rows())
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

/// Nonzero Pauli coefficients keyed by label, in lexicographic label order.
pub fn pauli(d: &PauliDecomposition64) -> Value {
    let mut m = Map::new();
    for (label, coeff) in d.terms() {
        m.insert(label.to_string(), num(coeff));
    }
    Value::Object(m)
}

pub fn spectrum(s: &EnergySpectrum<f64>, dropped: f64) -> Value {
    let shifted: Vec<f64> = s.levels.iter().map(|e| e - dropped).collect();
    obj([
        ("levels", reals(&s.levels)),
        ("levels_without_identity", reals(&shifted)),
        ("splitting", num(s.splitting)),
    ])
}

pub fn hamiltonian(h: &HamiltonianResult64) -> Value {
    let b = h.branch;
    obj([
        ("pauli", pauli(&h.decomposition)),
        ("matrix", matrix(&h.hamiltonian)),
        (
            "spectrum",
            spectrum(&h.spectrum, h.dropped_identity_coefficient),
        ),
        (
            "dropped_identity_coefficient",
            num(h.dropped_identity_coefficient),
        ),
        ("expected_global_phase", num(h.expected_global_phase)),
        (
            "branch",
            Value::Array(
                [b.n1, b.n2, b.n3, b.n4]
                    .into_iter()
                    .map(Value::from)
                    .collect(),
            ),
        ),
    ])
}

pub fn verification(v: &VerificationReport64) -> Value {
    let mut m = obj_map([
        ("pass", Value::from(v.pass)),
        ("up_to_phase", Value::from(v.up_to_phase)),
        ("tolerance", num(v.tolerance)),
        ("exact_distance", num(v.exact_distance)),
        ("phase_distance", num(v.phase_distance)),
        ("restored_distance", num(v.restored_distance)),
        ("realized_phase", num(v.realized_phase)),
    ]);
    if let Some(b) = &v.behavior {
        m.insert(
            "behavior".into(),
            obj([
                ("pass", Value::from(b.pass)),
                ("input_up_leak", num(b.input_up_leak)),
                ("input_down_leak", num(b.input_down_leak)),
            ]),
        );
    }
    m.insert("evolution".into(), matrix(&v.evolution));
    Value::Object(m)
}

pub fn audit(names: &[String], r: &AuditReport<f64>) -> Value {
    let pairs = r
        .pairs
        .iter()
        .map(|p| {
            obj([
                ("first", Value::from(names[p.i].as_str())),
                ("second", Value::from(names[p.j].as_str())),
                ("commutator_norm", num(p.commutator_norm)),
                ("anticommutator_norm", num(p.anticommutator_norm)),
                ("commuting", Value::from(p.commuting)),
                ("anticommuting", Value::from(p.anticommuting)),
            ])
        })
        .collect();
    obj([
        (
            "terms",
            Value::Array(names.iter().map(|n| Value::from(n.as_str())).collect()),
        ),
        ("pairs", Value::Array(pairs)),
        ("ordering_free", Value::from(r.ordering_free)),
    ])
}

pub fn obj<const N: usize>(entries: [(&str, Value); N]) -> Value {
    Value::Object(obj_map(entries))
}

pub fn obj_map<const N: usize>(entries: [(&str, Value); N]) -> Map<String, Value> {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}
