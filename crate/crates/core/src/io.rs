//! Reading and writing correspondence files.
//!
//! CSV: one pair per line as `x1,x2,y1,y2`; blank lines and `#` comments are
//! skipped, and `# name: …` / `# source: …` comments carry metadata.
//!
//! JSON: `{"name": …, "source": …, "correspondences": [{"x": [a, b], "y": [c, d]}, …]}`
//! where each coordinate is a string such as `"-5/12"` or a JSON number.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::ParseError;
use crate::linalg::RationalMatrix;
use crate::projective::{Correspondence, CorrespondenceSet, HomogeneousPoint};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Json,
    Csv,
}

impl InputFormat {
    /// `.json` is JSON, everything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub correspondences: CorrespondenceSet,
}

pub fn parse_input(text: &str, format: InputFormat) -> Result<InputDocument, ParseError> {
    match format {
        InputFormat::Csv => parse_csv(text),
        InputFormat::Json => parse_json(text),
    }
}

pub fn read_input(path: &Path, format: Option<InputFormat>) -> Result<InputDocument, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io(format!("{}: {e}", path.display())))?;
    parse_input(&text, format.unwrap_or_else(|| InputFormat::from_path(path)))
}

fn parse_csv(text: &str) -> Result<InputDocument, ParseError> {
    let (mut name, mut source) = (None, None);
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("name:") {
                name = Some(v.trim().to_string());
            } else if let Some(v) = comment.strip_prefix("source:") {
                source = Some(v.trim().to_string());
            }
            continue;
        }
        if line.is_empty() || line.eq_ignore_ascii_case("x1,x2,y1,y2") {
            continue;
        }
        let at = |message: String| ParseError::Line { line: idx + 1, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(at(format!("expected 4 fields, found {}", fields.len())));
        }
        let v = fields.iter().map(|f| parse_rational(f).map_err(|e| at(e.to_string()))).collect::<Result<Vec<_>, _>>()?;
        let [a, b, c, d]: [Rational; 4] = v.try_into().expect("four fields");
        pairs.push(Correspondence::new(HomogeneousPoint::new(a, b), HomogeneousPoint::new(c, d)));
    }
    let correspondences = CorrespondenceSet::new(pairs).map_err(|_| ParseError::Empty)?;
    Ok(InputDocument { name, source, correspondences })
}

fn json_rational(v: &Value, what: &str) -> Result<Rational, ParseError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(ParseError::Json(format!("{what}: expected a number or string, found {other}"))),
    }
}

fn json_point(v: Option<&Value>, what: &str) -> Result<HomogeneousPoint, ParseError> {
    match v.and_then(Value::as_array).map(Vec::as_slice) {
        Some([a, b]) => Ok(HomogeneousPoint::new(json_rational(a, what)?, json_rational(b, what)?)),
        _ => Err(ParseError::Json(format!("{what}: expected a two-element array"))),
    }
}

fn json_string(doc: &Value, key: &str) -> Result<Option<String>, ParseError> {
    match doc.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(ParseError::Json(format!("`{key}` must be a string"))),
    }
}

fn parse_json(text: &str) -> Result<InputDocument, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let list = doc
        .get("correspondences")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::Json("missing `correspondences` array".into()))?;
    let pairs = list
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let x = json_point(entry.get("x"), &format!("correspondences[{i}].x"))?;
            let y = json_point(entry.get("y"), &format!("correspondences[{i}].y"))?;
            Ok(Correspondence::new(x, y))
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    let correspondences = CorrespondenceSet::new(pairs).map_err(|_| ParseError::Empty)?;
    Ok(InputDocument { name: json_string(&doc, "name")?, source: json_string(&doc, "source")?, correspondences })
}

pub fn serialize_input(doc: &InputDocument, format: InputFormat) -> String {
    match format {
        InputFormat::Json => serde_json::to_string_pretty(doc).expect("serializable") + "\n",
        InputFormat::Csv => {
            let mut out = String::new();
            if let Some(n) = &doc.name {
                writeln!(out, "# name: {n}").unwrap();
            }
            if let Some(s) = &doc.source {
                writeln!(out, "# source: {s}").unwrap();
            }
            for c in doc.correspondences.pairs() {
                let (x1, x2) = c.x.affine();
                let (y1, y2) = c.y.affine();
                let f = [x1, x2, y1, y2].map(format_rational);
                writeln!(out, "{}", f.join(",")).unwrap();
            }
            out
        }
    }
}

/// A 3×3 matrix as JSON rows (strings or numbers) or as three text lines of
/// comma- or space-separated entries.
pub fn parse_matrix(text: &str) -> Result<RationalMatrix, ParseError> {
    let trimmed = text.trim();
    let entries: Vec<Rational> = if trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed).map_err(|e| ParseError::Json(e.to_string()))?;
        let rows = v.as_array().filter(|r| r.len() == 3).ok_or_else(|| ParseError::Json("expected three rows".into()))?;
        let mut out = Vec::with_capacity(9);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == 3).ok_or_else(|| ParseError::Json(format!("row {i}: expected three entries")))?;
            for e in row {
                out.push(json_rational(e, &format!("row {i}"))?);
            }
        }
        out
    } else {
        let lines: Vec<(usize, &str)> =
            text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#')).collect();
        if lines.len() != 3 {
            return Err(ParseError::Line { line: lines.get(3).map_or(text.lines().count(), |l| l.0), message: "expected three rows".into() });
        }
        let mut out = Vec::with_capacity(9);
        for (line, l) in lines {
            let fields: Vec<&str> = l.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
            if fields.len() != 3 {
                return Err(ParseError::Line { line, message: format!("expected 3 entries, found {}", fields.len()) });
            }
            for f in fields {
                out.push(parse_rational(f).map_err(|e| ParseError::Line { line, message: e.to_string() })?);
            }
        }
        out
    };
    Ok(RationalMatrix::from_vec(3, 3, entries).expect("nine entries"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn csv_row() {
        let doc = parse_input("3,0,2,0\n", InputFormat::Csv).unwrap();
        let c = &doc.correspondences.pairs()[0];
        assert_eq!(c.x, HomogeneousPoint::from_ints(3, 0));
        assert_eq!(c.y, HomogeneousPoint::from_ints(2, 0));
    }

    #[test]
    fn json_fraction_and_number() {
        let doc = parse_input(r#"{"correspondences": [{"x": [0.25, "1"], "y": ["3", "-5/12"]}]}"#, InputFormat::Json).unwrap();
        let c = &doc.correspondences.pairs()[0];
        assert_eq!(c.x.affine(), (&ratio(1, 4), &rat(1)));
        assert_eq!(c.y.affine(), (&rat(3), &ratio(-5, 12)));
        let minus = parse_input("{\"correspondences\": [{\"x\": [\"\u{2212}5/12\", 0], \"y\": [0, 0]}]}", InputFormat::Json).unwrap();
        assert_eq!(minus.correspondences.pairs()[0].x.affine().0, &ratio(-5, 12));
    }

    #[test]
    fn json_numbers_are_exact() {
        let doc = parse_input(r#"{"correspondences": [{"x": [0.1, 1e-3], "y": [123456789012345678901234567890, 0]}]}"#, InputFormat::Json).unwrap();
        let c = &doc.correspondences.pairs()[0];
        assert_eq!(c.x.affine(), (&ratio(1, 10), &ratio(1, 1000)));
        assert_eq!(format_rational(c.y.affine().0), "123456789012345678901234567890");
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let err = parse_input("# header\n1,2,3,4\n1,two,3,4\n", InputFormat::Csv).unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 3, .. }), "{err}");
        assert!(matches!(parse_input("1,2,3\n", InputFormat::Csv), Err(ParseError::Line { line: 1, .. })));
        assert_eq!(parse_input("\n# only comments\n", InputFormat::Csv), Err(ParseError::Empty));
        assert_eq!(parse_input(r#"{"correspondences": []}"#, InputFormat::Json), Err(ParseError::Empty));
        assert!(parse_input("1e999999,0,0,0", InputFormat::Csv).is_err());
    }

    #[test]
    fn round_trips() {
        let text = "# name: sample\n# source: test\n1/5,-1,0,1\n-57/4,8,4,7\n0.5,2,3,-5/12\n";
        let doc = parse_input(text, InputFormat::Csv).unwrap();
        assert_eq!(doc.name.as_deref(), Some("sample"));
        for format in [InputFormat::Csv, InputFormat::Json] {
            let again = parse_input(&serialize_input(&doc, format), format).unwrap();
            assert_eq!(again, doc);
        }
    }

    #[test]
    fn matrices_in_both_layouts() {
        let m = RationalMatrix::from_ints(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        assert_eq!(parse_matrix("0 1 0\n0,0,1\n0 0 0\n").unwrap(), m);
        assert_eq!(parse_matrix(r#"[["0", 1, 0], [0, 0, "1"], [0, 0, 0]]"#).unwrap(), m);
        assert!(parse_matrix("0 1\n0 0 1\n0 0 0\n").is_err());
    }
}
