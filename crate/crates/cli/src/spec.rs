//! JSON spec documents: a group block, an operator block and an optional
//! annihilator block. Rationals are strings `"p/q"`; word letters are 1-based.

use std::sync::Arc;

use serde_json::Value;

use carnot_core::lie::CustomAlgebra;
use carnot_core::linalg::Matrix;
use carnot_core::operators::OperatorMatrix;
use carnot_core::{rational, GradedLieAlgebra, Preset, Rational};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct SpecDocument {
    pub group: Arc<GradedLieAlgebra>,
    pub operator: Option<OperatorMatrix>,
    pub annihilator: Option<OperatorMatrix>,
}

fn field(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Field { path: path.to_string(), msg: msg.into() }
}

fn get<'a>(obj: &'a Value, path: &str, key: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| field(&format!("{path}.{key}"), "missing"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize, CliError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| field(path, "expected a nonnegative integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| field(path, "expected an array"))
}

fn as_rational(v: &Value, path: &str) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => rational::parse(s).map_err(|e| field(path, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().unwrap())),
        _ => Err(field(path, "expected a rational string \"p/q\"")),
    }
}

pub fn parse_document(text: &str) -> Result<SpecDocument, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    if !doc.is_object() {
        return Err(field("$", "expected an object"));
    }
    let group = Arc::new(parse_group(get(&doc, "$", "group")?, "$.group")?);
    let operator = doc.get("operator").map(|v| parse_operator(v, "$.operator", &group)).transpose()?;
    let annihilator = doc.get("annihilator").map(|v| parse_operator(v, "$.annihilator", &group)).transpose()?;
    Ok(SpecDocument { group, operator, annihilator })
}

pub fn parse_group(v: &Value, path: &str) -> Result<GradedLieAlgebra, CliError> {
    if let Some(custom) = v.get("custom") {
        let p = format!("{path}.custom");
        let layer_dims = as_array(get(custom, &p, "layer_dims")?, &format!("{p}.layer_dims"))?
            .iter()
            .enumerate()
            .map(|(i, d)| as_usize(d, &format!("{p}.layer_dims[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut brackets = Vec::new();
        for (i, b) in as_array(get(custom, &p, "brackets")?, &format!("{p}.brackets"))?.iter().enumerate() {
            let bp = format!("{p}.brackets[{i}]");
            let parts = as_array(b, &bp)?;
            if parts.len() != 3 {
                return Err(field(&bp, "expected [a, b, [coefficients]]"));
            }
            let coeffs = as_array(&parts[2], &format!("{bp}[2]"))?
                .iter()
                .enumerate()
                .map(|(k, c)| as_rational(c, &format!("{bp}[2][{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            brackets.push((
                as_usize(&parts[0], &format!("{bp}[0]"))?,
                as_usize(&parts[1], &format!("{bp}[1]"))?,
                coeffs,
            ));
        }
        return GradedLieAlgebra::preset(&Preset::Custom(CustomAlgebra { layer_dims, brackets }))
            .map_err(|e| field(path, e.to_string()));
    }
    let name = get(v, path, "preset")?.as_str().ok_or_else(|| field(&format!("{path}.preset"), "expected a string"))?;
    let num = |key: &str| as_usize(get(v, path, key)?, &format!("{path}.{key}"));
    let preset = match name {
        "abelian" => Preset::Abelian(num("n")?),
        "heisenberg" => Preset::Heisenberg(num("n")?),
        "free" => Preset::Free { generators: num("m")?, step: num("r")? },
        other => return Err(field(&format!("{path}.preset"), format!("unknown preset `{other}`"))),
    };
    GradedLieAlgebra::preset(&preset).map_err(|e| field(path, e.to_string()))
}

pub fn parse_operator(v: &Value, path: &str, alg: &Arc<GradedLieAlgebra>) -> Result<OperatorMatrix, CliError> {
    let order = as_usize(get(v, path, "order")?, &format!("{path}.order"))?;
    let dim_v = as_usize(get(v, path, "dimV")?, &format!("{path}.dimV"))?;
    let dim_e = as_usize(get(v, path, "dimE")?, &format!("{path}.dimE"))?;
    if dim_v == 0 || dim_e == 0 {
        return Err(field(path, "dimV and dimE must be positive"));
    }
    let mut op = OperatorMatrix::zero(alg.clone(), dim_v, dim_e, order);
    let m = alg.m();
    for (t, term) in as_array(get(v, path, "terms")?, &format!("{path}.terms"))?.iter().enumerate() {
        let tp = format!("{path}.terms[{t}]");
        let letters = as_array(get(term, &tp, "word")?, &format!("{tp}.word"))?;
        if letters.len() != order {
            return Err(field(&format!("{tp}.word"), format!("length {} differs from order {order}", letters.len())));
        }
        let mut word = Vec::with_capacity(order);
        for (k, l) in letters.iter().enumerate() {
            let lp = format!("{tp}.word[{k}]");
            let l = as_usize(l, &lp)?;
            if l == 0 || l > m {
                return Err(field(&lp, format!("letter {l} out of range 1..={m}")));
            }
            word.push(l - 1);
        }
        let rows = as_array(get(term, &tp, "matrix")?, &format!("{tp}.matrix"))?;
        if rows.len() != dim_e {
            return Err(field(&format!("{tp}.matrix"), format!("expected {dim_e} rows, found {}", rows.len())));
        }
        let mut data = Vec::with_capacity(dim_e);
        for (i, row) in rows.iter().enumerate() {
            let rp = format!("{tp}.matrix[{i}]");
            let cells = as_array(row, &rp)?;
            if cells.len() != dim_v {
                return Err(field(&rp, format!("expected {dim_v} columns, found {}", cells.len())));
            }
            data.push(
                cells
                    .iter()
                    .enumerate()
                    .map(|(j, c)| as_rational(c, &format!("{rp}[{j}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        op.add_term(word, &Matrix::from_rows(data)).map_err(|e| field(&tp, e.to_string()))?;
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_curl() {
        let doc = parse_document(
            r#"{"group": {"preset": "heisenberg", "n": 1},
                "operator": {"order": 1, "dimV": 2, "dimE": 1, "terms": [
                  {"word": [1], "matrix": [["0", "1"]]},
                  {"word": [2], "matrix": [["-1", "0"]]}]}}"#,
        )
        .unwrap();
        assert_eq!(doc.operator.unwrap().terms().len(), 2);
    }

    #[test]
    fn reports_field_paths() {
        let err = parse_document(
            r#"{"group": {"preset": "abelian", "n": 2},
                "operator": {"order": 1, "dimV": 1, "dimE": 1, "terms": [{"word": [3], "matrix": [["1"]]}]}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("$.operator.terms[0].word[0]"), "{err}");
        let err = parse_document("{\n  \"group\": [\n").unwrap_err();
        assert!(matches!(err, CliError::Json { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn custom_group() {
        let doc =
            parse_document(r#"{"group": {"custom": {"layer_dims": [2, 1], "brackets": [[1, 2, ["0", "0", "1"]]]}}}"#)
                .unwrap();
        assert_eq!(doc.group.dim(), 3);
        assert!(doc.operator.is_none());
    }
}
