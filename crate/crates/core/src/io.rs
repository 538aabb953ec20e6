//! Canonical JSON for matrices, complexes, codes, sited codes, circuits and reports.
//!
//! Objects are `serde_json::Value` maps, which keep keys sorted, so
//! [`to_canonical_string`] is byte-stable for equal inputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::chain::{Chain, ChainComplex, SliceTag};
use crate::css::{sparsity_stats, CodeOrigin, CssCode};
use crate::error::{Error, Result};
use crate::lift::search::{objective_of, LiftReport};
use crate::lift::{
    apply_correction, error_matrix, explicit_solution, residual, verify_lift, LiftPair,
};
use crate::linalg::{ExactMatrix, Gf2Vec, Ring};
use crate::local::{LocalCircuit, Move, SitedCssCode};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| bad(format!("{what} must be an integer")))
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))?
        .iter()
        .map(|x| as_usize(x, what))
        .collect()
}

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    let entries: Vec<Value> = m.entries().map(|(r, c, v)| json!([r, c, v])).collect();
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "ring": m.ring().name(),
        "entries": entries,
    })
}

/// Strict: entries must be in range, distinct and canonical for the ring.
pub fn matrix_from_json(v: &Value) -> Result<ExactMatrix> {
    let rows = as_usize(field(v, "rows")?, "rows")?;
    let cols = as_usize(field(v, "cols")?, "cols")?;
    let ring_name = field(v, "ring")?
        .as_str()
        .ok_or_else(|| bad("ring must be a string"))?;
    let ring = Ring::parse(ring_name).ok_or_else(|| bad(format!("unknown ring {ring_name:?}")))?;
    let entries = field(v, "entries")?
        .as_array()
        .ok_or_else(|| bad("entries must be an array"))?
        .iter()
        .map(|e| match e.as_array().map(Vec::as_slice) {
            Some([r, c, x]) => Ok((
                as_usize(r, "row")?,
                as_usize(c, "col")?,
                as_i64(x, "value")?,
            )),
            _ => Err(bad("each entry must be [row, col, value]")),
        })
        .collect::<Result<Vec<_>>>()?;
    ExactMatrix::from_entries(ring, rows, cols, entries)
}

/// Rows of a square GF(2) matrix as a `Z2` matrix fragment.
fn gf2_rows_to_json(rows: &[Gf2Vec]) -> Value {
    let n = rows.len();
    let m = ExactMatrix::accumulate(
        Ring::Z2,
        n,
        n,
        rows.iter()
            .enumerate()
            .flat_map(|(r, v)| v.support().into_iter().map(move |c| (r, c, 1))),
    );
    matrix_to_json(&m)
}

fn gf2_rows_from_json(v: &Value) -> Result<Vec<Gf2Vec>> {
    let m = matrix_from_json(v)?;
    if m.ring() != Ring::Z2 || m.rows() != m.cols() {
        return Err(bad("move matrix must be square over Z2"));
    }
    Ok((0..m.rows())
        .map(|r| {
            Gf2Vec::from_support(
                m.cols(),
                &m.row(r).iter().map(|&(c, _)| c).collect::<Vec<_>>(),
            )
        })
        .collect())
}

pub fn complex_to_json(c: &ChainComplex) -> Value {
    let dims: Map<String, Value> = c
        .degrees()
        .map(|d| (d.to_string(), json!(c.dim(d))))
        .collect();
    let boundaries: Map<String, Value> = (c.d_min() + 1..=c.d_max())
        .map(|d| (d.to_string(), matrix_to_json(&c.boundary(d))))
        .collect();
    let mut out = json!({
        "name": c.name,
        "ring": c.ring().name(),
        "degrees": [c.d_min(), c.d_max()],
        "dims": dims,
        "boundaries": boundaries,
        "distinguished": serde_json::to_value(&c.distinguished).expect("chains serialize"),
        "provenance": c.provenance.clone().unwrap_or(Value::Null),
    });
    if !c.labels.is_empty() {
        out["labels"] = keyed(&c.labels);
    }
    if !c.slices.is_empty() {
        out["slices"] = keyed(&c.slices);
    }
    out
}

fn keyed<T: serde::Serialize>(m: &BTreeMap<i32, T>) -> Value {
    Value::Object(
        m.iter()
            .map(|(d, x)| {
                (
                    d.to_string(),
                    serde_json::to_value(x).expect("serializable"),
                )
            })
            .collect(),
    )
}

fn unkeyed<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<BTreeMap<i32, T>> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad(format!("{what} must be an object")))?;
    obj.iter()
        .map(|(k, x)| {
            let d: i32 = k
                .parse()
                .map_err(|_| bad(format!("{what} key {k:?} is not a degree")))?;
            Ok((d, serde_json::from_value(x.clone())?))
        })
        .collect()
}

pub fn complex_from_json(v: &Value) -> Result<ChainComplex> {
    let name = field(v, "name")?
        .as_str()
        .ok_or_else(|| bad("name must be a string"))?;
    let ring_name = field(v, "ring")?
        .as_str()
        .ok_or_else(|| bad("ring must be a string"))?;
    let ring = Ring::parse(ring_name).ok_or_else(|| bad(format!("unknown ring {ring_name:?}")))?;
    let degrees = field(v, "degrees")?
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| bad("degrees must be [d_min, d_max]"))?;
    let d_min = as_i64(&degrees[0], "d_min")? as i32;
    let d_max = as_i64(&degrees[1], "d_max")? as i32;
    if d_max < d_min {
        return Err(bad("d_max < d_min"));
    }
    let dims_v = field(v, "dims")?;
    let dims = (d_min..=d_max)
        .map(|d| as_usize(field(dims_v, &d.to_string())?, "dim"))
        .collect::<Result<Vec<_>>>()?;
    let b_v = field(v, "boundaries")?;
    let boundaries = (d_min + 1..=d_max)
        .map(|d| matrix_from_json(field(b_v, &d.to_string())?))
        .collect::<Result<Vec<_>>>()?;
    let mut c = ChainComplex::new(name, ring, d_min, dims, boundaries)?;
    if let Some(d) = v.get("distinguished") {
        c.distinguished = serde_json::from_value::<BTreeMap<String, Chain>>(d.clone())?;
    }
    if let Some(l) = v.get("labels") {
        c.labels = unkeyed(l, "labels")?;
    }
    if let Some(s) = v.get("slices") {
        c.slices = unkeyed(s, "slices")?;
    }
    c.provenance = v.get("provenance").filter(|p| !p.is_null()).cloned();
    Ok(c)
}

pub fn code_to_json(code: &CssCode) -> Value {
    let mut out = json!({
        "n_z": code.n_z(),
        "n_q": code.n_q(),
        "n_x": code.n_x(),
        "dz": matrix_to_json(&code.dz),
        "dq": matrix_to_json(&code.dq),
        "added_columns": code.added_columns,
        "provenance": code.provenance.clone().unwrap_or(Value::Null),
    });
    if let Some(s) = &code.slice_of_qubit {
        out["slice_of_qubit"] = serde_json::to_value(s).expect("tags serialize");
    }
    // integer boundaries, needed for cellular lifts
    if let Some(o) = &code.origin {
        out["origin"] = json!({
            "degree": o.degree,
            "dz": matrix_to_json(&o.dz),
            "dq": matrix_to_json(&o.dq),
            "dx": matrix_to_json(&o.dx),
        });
    }
    out
}

/// Parses and checks a code, including `dq · dz = 0`.
pub fn code_from_json(v: &Value) -> Result<CssCode> {
    let dz = matrix_from_json(field(v, "dz")?)?;
    let dq = matrix_from_json(field(v, "dq")?)?;
    for (key, n) in [("n_z", dz.cols()), ("n_q", dz.rows()), ("n_x", dq.rows())] {
        if let Some(x) = v.get(key) {
            if as_usize(x, key)? != n {
                return Err(bad(format!("{key} = {x} does not match the matrices")));
            }
        }
    }
    let origin = match v.get("origin") {
        Some(o) if !o.is_null() => Some(CodeOrigin {
            degree: as_i64(field(o, "degree")?, "degree")? as i32,
            dz: matrix_from_json(field(o, "dz")?)?,
            dq: matrix_from_json(field(o, "dq")?)?,
            dx: matrix_from_json(field(o, "dx")?)?,
        }),
        _ => None,
    };
    let code = CssCode {
        dz,
        dq,
        origin,
        added_columns: match v.get("added_columns") {
            Some(a) => usize_list(a, "added_columns")?,
            None => Vec::new(),
        },
        slice_of_qubit: match v.get("slice_of_qubit") {
            Some(s) if !s.is_null() => Some(serde_json::from_value::<Vec<SliceTag>>(s.clone())?),
            _ => None,
        },
        provenance: v.get("provenance").filter(|p| !p.is_null()).cloned(),
    };
    code.check()?;
    Ok(code)
}

pub fn sited_to_json(s: &SitedCssCode) -> Value {
    let mut out = code_to_json(&s.code);
    out["site_of_qubit"] = json!(s.site_of_qubit);
    out
}

pub fn sited_from_json(v: &Value) -> Result<SitedCssCode> {
    let code = code_from_json(v)?;
    let sites = field(v, "site_of_qubit")?
        .as_array()
        .ok_or_else(|| bad("site_of_qubit must be an array"))?
        .iter()
        .map(|x| as_i64(x, "site"))
        .collect::<Result<Vec<_>>>()?;
    SitedCssCode::new(code, sites)
}

fn move_to_json(m: &Move) -> Value {
    json!({
        "sites": m.sites,
        "qubits": m.qubits,
        "matrix": gf2_rows_to_json(&m.matrix),
    })
}

pub fn circuit_to_json(c: &LocalCircuit) -> Value {
    let rounds: Vec<Value> = c
        .rounds
        .iter()
        .map(|r| Value::Array(r.iter().map(move_to_json).collect()))
        .collect();
    json!({ "rounds": rounds })
}

pub fn circuit_from_json(v: &Value) -> Result<LocalCircuit> {
    let rounds = field(v, "rounds")?
        .as_array()
        .filter(|r| r.len() == 2)
        .ok_or_else(|| bad("rounds must hold two arrays"))?;
    let parse_round = |r: &Value| -> Result<Vec<Move>> {
        r.as_array()
            .ok_or_else(|| bad("a round must be an array"))?
            .iter()
            .map(|m| {
                let sites = field(m, "sites")?
                    .as_array()
                    .ok_or_else(|| bad("sites must be an array"))?
                    .iter()
                    .map(|x| as_i64(x, "site"))
                    .collect::<Result<Vec<_>>>()?;
                let qubits = usize_list(field(m, "qubits")?, "qubits")?;
                let matrix = gf2_rows_from_json(field(m, "matrix")?)?;
                if matrix.len() != qubits.len() {
                    return Err(bad("move matrix size differs from its qubit count"));
                }
                Ok(Move {
                    sites,
                    qubits,
                    matrix,
                })
            })
            .collect()
    };
    Ok(LocalCircuit {
        rounds: [parse_round(&rounds[0])?, parse_round(&rounds[1])?],
    })
}

pub fn lift_report_to_json(r: &LiftReport) -> Value {
    let o = &r.outcome;
    json!({
        "instance": r.instance,
        "strategy": r.strategy.name(),
        "seed": r.seed,
        "budget": r.budget,
        "objective_best": o.best,
        "objective_history": o.history,
        "certificate": {
            "delta_z": matrix_to_json(&o.certificate.delta_z),
            "delta_q": matrix_to_json(&o.certificate.delta_q),
        },
        "verified": r.verified,
        "complete": o.complete,
        "iterations": o.iterations,
        "generators": o.generators,
        "kernel_dim": o.kernel_dim,
        "residual_weight": r.residual_weight,
        "delta_q_sparsity": r.delta_q_sparsity,
        "delta_z_sparsity": r.delta_z_sparsity,
    })
}

/// Report for the closed-form correction, in the layout of [`lift_report_to_json`].
pub fn explicit_report_to_json(code: &CssCode, lift: &LiftPair) -> Result<Value> {
    let e = error_matrix(lift)?;
    let corr = explicit_solution(code, &e)?;
    Ok(json!({
        "instance": code.provenance,
        "strategy": "explicit",
        "seed": null,
        "budget": 0,
        "objective_best": objective_of(&corr),
        "objective_history": [],
        "certificate": {
            "delta_z": matrix_to_json(&corr.delta_z),
            "delta_q": matrix_to_json(&corr.delta_q),
        },
        "verified": verify_lift(&apply_correction(lift, &corr)?, code),
        "complete": false,
        "residual_weight": residual(&e, code, &corr)?.nnz(),
        "delta_q_sparsity": sparsity_stats(&corr.delta_q),
        "delta_z_sparsity": sparsity_stats(&corr.delta_z),
    }))
}

/// What a JSON input file holds, decided by its fields.
#[derive(Clone, Debug)]
pub enum Document {
    Complex(ChainComplex),
    Code(CssCode),
    Sited(SitedCssCode),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Complex(_) => "complex",
            Document::Code(_) => "code",
            Document::Sited(_) => "sited_code",
        }
    }

    pub fn provenance(&self) -> Value {
        let p = match self {
            Document::Complex(c) => &c.provenance,
            Document::Code(c) => &c.provenance,
            Document::Sited(s) => &s.code.provenance,
        };
        p.clone().unwrap_or(Value::Null)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Document::Complex(c) => complex_to_json(c),
            Document::Code(c) => code_to_json(c),
            Document::Sited(s) => sited_to_json(s),
        }
    }

    pub fn from_json(v: &Value) -> Result<Document> {
        if v.get("boundaries").is_some() {
            Ok(Document::Complex(complex_from_json(v)?))
        } else if v.get("site_of_qubit").is_some() {
            Ok(Document::Sited(sited_from_json(v)?))
        } else if v.get("dz").is_some() {
            Ok(Document::Code(code_from_json(v)?))
        } else {
            Err(bad("not a complex, code or sited code"))
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn read_document(path: &Path) -> Result<Document> {
    Document::from_json(&read_json(path)?)
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_json_atomic(path: &Path, v: &Value) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| bad("output path has no file name"))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, to_canonical_string(v))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::{disentangle, random_sited_instance};
    use crate::topo::build_rp3;

    #[test]
    fn matrix_round_trip_and_strictness() {
        let m = ExactMatrix::from_dense(Ring::Z4, &[vec![1, 0, 3], vec![0, 2, 0]]);
        let v = matrix_to_json(&m);
        assert_eq!(v["entries"], json!([[0, 0, 1], [0, 2, 3], [1, 1, 2]]));
        assert_eq!(matrix_from_json(&v).unwrap(), m);
        let dup = json!({"rows": 1, "cols": 1, "ring": "Z2", "entries": [[0, 0, 1], [0, 0, 1]]});
        assert!(matrix_from_json(&dup).is_err());
        let big = json!({"rows": 1, "cols": 1, "ring": "Z2", "entries": [[0, 0, 3]]});
        assert!(matrix_from_json(&big).is_err());
    }

    #[test]
    fn complex_round_trip() {
        let c = build_rp3(2).unwrap();
        let v = complex_to_json(&c);
        assert_eq!(complex_from_json(&v).unwrap(), c);
        assert_eq!(
            to_canonical_string(&v),
            to_canonical_string(&complex_to_json(&c))
        );
    }

    #[test]
    fn sited_and_circuit_round_trip() {
        let s = random_sited_instance(3, 2, 0.5, 4).unwrap();
        let v = sited_to_json(&s);
        assert_eq!(sited_from_json(&v).unwrap(), s);
        assert!(matches!(
            Document::from_json(&v).unwrap(),
            Document::Sited(_)
        ));
        let c = disentangle(&s).unwrap();
        assert_eq!(circuit_from_json(&circuit_to_json(&c)).unwrap(), c);
    }
}
