//! Text renderings shared by the command line and the browser demo.
//! Arbitrary-precision values are always emitted as decimal strings.

use serde_json::{json, Map, Value};

use crate::census::AsymptoticsRow;
use crate::separability::SeparabilityReport;
use crate::state::StateVector;

/// Sparse JSON form `{n, amps: {index: amplitude}}`, indices ascending.
pub fn state_json(s: &StateVector) -> Value {
    let amps: Map<String, Value> = s
        .nonzero()
        .map(|(x, a)| (x.to_string(), Value::String(a.to_string())))
        .collect();
    json!({ "n": s.m(), "amps": amps })
}

/// `index,amplitude` rows for the nonzero entries.
pub fn state_csv(s: &StateVector) -> String {
    let mut out = String::from("index,amplitude\n");
    for (x, a) in s.nonzero() {
        out.push_str(&format!("{x},{a}\n"));
    }
    out
}

/// Ket notation with qubit 1 leftmost, e.g. `+1|00> -1|11>`.
pub fn state_kets(s: &StateVector) -> String {
    let n = s.m();
    s.nonzero()
        .map(|(x, a)| {
            let sign = if a.sign() == num_bigint::Sign::Minus {
                ""
            } else {
                "+"
            };
            format!(
                "{sign}{a}|{}>",
                crate::function::format_bit_string(x as u64, n)
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn report_json(r: &SeparabilityReport) -> Value {
    serde_json::to_value(r.to_json()).expect("reports serialize")
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// One row per block: `q,label,block,qubits,amps`; lists are space separated.
pub fn report_csv(r: &SeparabilityReport) -> String {
    let mut out = String::from("q,label,block,qubits,amps\n");
    for (i, b) in r.factorization.blocks().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.q,
            r.label,
            i + 1,
            join(&b.qubits),
            join(b.state.amps())
        ));
    }
    out
}

pub fn report_table(r: &SeparabilityReport) -> String {
    let mut out = format!(
        "n = {}  q = {}  label = {}  block sizes = {:?}\n",
        r.n(),
        r.q,
        r.label,
        r.block_sizes
    );
    for b in r.factorization.blocks() {
        out.push_str(&format!(
            "  qubits {:<12} {}\n",
            format!("{:?}", b.qubits),
            state_kets(&b.state)
        ));
    }
    out
}

fn fixed(v: f64) -> String {
    format!("{v:.9}")
}

pub fn asymptotics_json(rows: &[AsymptoticsRow]) -> Value {
    let opt = |v: Option<f64>| v.map(fixed).map(Value::String).unwrap_or(Value::Null);
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "log2_sep_exact": fixed(r.sep_exact),
                "log2_sep_stirling": fixed(r.sep_asymptotic),
                "log2_bisep_bound": fixed(r.bisep_bound),
                "log2_grover_m2": opt(r.grover_m2),
                "log2_grover_m4": opt(r.grover_m4),
            })
        })
        .collect();
    json!({ "schema": "asymptotics-v1", "rows": rows })
}

pub const ASYMPTOTICS_HEADER: [&str; 6] = [
    "n",
    "log2_sep_exact",
    "log2_sep_stirling",
    "log2_bisep_bound",
    "log2_grover_m2",
    "log2_grover_m4",
];

fn asymptotics_cells(r: &AsymptoticsRow) -> [String; 6] {
    let opt = |v: Option<f64>| v.map(fixed).unwrap_or_default();
    [
        r.n.to_string(),
        fixed(r.sep_exact),
        fixed(r.sep_asymptotic),
        fixed(r.bisep_bound),
        opt(r.grover_m2),
        opt(r.grover_m4),
    ]
}

pub fn asymptotics_csv(rows: &[AsymptoticsRow]) -> String {
    let mut out = ASYMPTOTICS_HEADER.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&asymptotics_cells(r).join(","));
        out.push('\n');
    }
    out
}

pub fn asymptotics_table(rows: &[AsymptoticsRow]) -> String {
    let line = |cells: &[String]| {
        let mut l: String = cells.iter().map(|c| format!("{c:>18}")).collect();
        l.truncate(l.trim_end().len());
        l.push('\n');
        l
    };
    let header: Vec<String> = ASYMPTOTICS_HEADER.iter().map(|h| h.to_string()).collect();
    let mut out = line(&header);
    for r in rows {
        out.push_str(&line(&asymptotics_cells(r)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separability::classify;

    #[test]
    fn sparse_state_keys_are_ordered_numerically() {
        let s = StateVector::from_sparse(4, [(2, 1.into()), (10, (-3).into())]).unwrap();
        assert_eq!(
            serde_json::to_string(&state_json(&s)).unwrap(),
            r#"{"n":4,"amps":{"2":"1","10":"-3"}}"#
        );
        assert_eq!(state_kets(&s), "+1|0010> -3|1010>");
        assert_eq!(state_csv(&s), "index,amplitude\n2,1\n10,-3\n");
    }

    #[test]
    fn report_csv_rows() {
        let s = StateVector::from_i64s(2, &[1, -1, 1, -1]).unwrap();
        let csv = report_csv(&classify(&s).unwrap());
        assert_eq!(
            csv,
            "q,label,block,qubits,amps\n2,fully-separable,1,1,1 1\n2,fully-separable,2,2,1 -1\n"
        );
    }
}
