use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, C64};

pub const FORMAT_VERSION: &str = "1";

/// Largest accepted total matrix entry count across one document.
pub const MAX_ENTRIES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Operator,
    ChoiChannel,
    KrausChannel,
    Stinespring,
    Liouville,
    SuperchannelChoi,
    Gour,
    MeasurePrepare,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Operator,
        Kind::ChoiChannel,
        Kind::KrausChannel,
        Kind::Stinespring,
        Kind::Liouville,
        Kind::SuperchannelChoi,
        Kind::Gour,
        Kind::MeasurePrepare,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Operator => "operator",
            Kind::ChoiChannel => "choi-channel",
            Kind::KrausChannel => "kraus-channel",
            Kind::Stinespring => "stinespring",
            Kind::Liouville => "liouville",
            Kind::SuperchannelChoi => "superchannel-choi",
            Kind::Gour => "gour",
            Kind::MeasurePrepare => "measure-prepare",
        }
    }

    pub fn is_channel(&self) -> bool {
        matches!(
            self,
            Kind::ChoiChannel | Kind::KrausChannel | Kind::Stinespring | Kind::Liouville
        )
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Input,
    Output,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Output => "output",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemEntry {
    pub name: String,
    pub dim: usize,
    pub role: Role,
}

impl SystemEntry {
    pub fn new(name: impl Into<String>, dim: usize, role: Role) -> Self {
        SystemEntry {
            name: name.into(),
            dim,
            role,
        }
    }
}

/// On-disk form of every object the library reads and writes.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDocument {
    pub format_version: String,
    pub kind: Kind,
    pub systems: Vec<SystemEntry>,
    pub matrices: Vec<CMatrix>,
    pub metadata: BTreeMap<String, String>,
}

impl OperatorDocument {
    pub fn new(kind: Kind, systems: Vec<SystemEntry>, matrices: Vec<CMatrix>) -> Self {
        OperatorDocument {
            format_version: FORMAT_VERSION.to_string(),
            kind,
            systems,
            matrices,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn systems_with_role(&self, role: Role) -> impl Iterator<Item = &SystemEntry> {
        self.systems.iter().filter(move |s| s.role == role)
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn number(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::OutOfRange(format!(
            "cannot serialize non-finite value {x}"
        )));
    }
    Ok(format!("{x:.16e}"))
}

/// Canonical text of a document: fixed field order, one matrix row per
/// line, 17 significant digits per float.
pub fn document_to_string(doc: &OperatorDocument) -> Result<String> {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"format_version\": {},", quote(&doc.format_version));
    let _ = writeln!(out, "  \"kind\": {},", quote(doc.kind.as_str()));
    out.push_str("  \"systems\": [");
    for (i, s) in doc.systems.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(
            out,
            "    {{\"name\": {}, \"dim\": {}, \"role\": {}}}",
            quote(&s.name),
            s.dim,
            quote(s.role.as_str())
        );
    }
    out.push_str(if doc.systems.is_empty() {
        "],\n"
    } else {
        "\n  ],\n"
    });
    out.push_str("  \"matrices\": [");
    for (k, m) in doc.matrices.iter().enumerate() {
        out.push_str(if k == 0 { "\n    [" } else { ",\n    [" });
        for r in 0..m.nrows() {
            out.push_str(if r == 0 { "\n      [" } else { ",\n      [" });
            for c in 0..m.ncols() {
                if c > 0 {
                    out.push_str(", ");
                }
                let z = m[(r, c)];
                let _ = write!(out, "[{}, {}]", number(z.re)?, number(z.im)?);
            }
            out.push(']');
        }
        out.push_str(if m.nrows() == 0 { "]" } else { "\n    ]" });
    }
    out.push_str(if doc.matrices.is_empty() {
        "],\n"
    } else {
        "\n  ],\n"
    });
    out.push_str("  \"metadata\": {");
    for (i, (k, v)) in doc.metadata.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(out, "    {}: {}", quote(k), quote(v));
    }
    out.push_str(if doc.metadata.is_empty() {
        "}\n"
    } else {
        "\n  }\n"
    });
    out.push_str("}\n");
    Ok(out)
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::parse(path, format!("missing field `{key}`")))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::parse(path, "expected a string"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::parse(path, "expected an array"))
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::parse(path, "expected a number"))
}

fn parse_systems(v: &Value) -> Result<Vec<SystemEntry>> {
    let arr = as_array(v, "systems")?;
    arr.iter()
        .enumerate()
        .map(|(i, s)| {
            let path = format!("systems[{i}]");
            let obj = s
                .as_object()
                .ok_or_else(|| Error::parse(&path, "expected an object"))?;
            let name = as_str(field(obj, "name", &path)?, &format!("{path}.name"))?;
            if name.is_empty() {
                return Err(Error::parse(format!("{path}.name"), "empty system name"));
            }
            let dim_path = format!("{path}.dim");
            let dim = field(obj, "dim", &path)?
                .as_u64()
                .ok_or_else(|| Error::parse(&dim_path, "expected a non-negative integer"))?;
            let dim = usize::try_from(dim)
                .ok()
                .filter(|&d| d <= MAX_ENTRIES)
                .ok_or_else(|| Error::parse(&dim_path, "dimension too large"))?;
            let role_path = format!("{path}.role");
            let role = match as_str(field(obj, "role", &path)?, &role_path)? {
                "input" => Role::Input,
                "output" => Role::Output,
                other => {
                    return Err(Error::parse(
                        role_path,
                        format!("role must be `input` or `output`, got `{other}`"),
                    ))
                }
            };
            Ok(SystemEntry::new(name, dim, role))
        })
        .collect()
}

fn parse_matrix(v: &Value, k: usize, budget: &mut usize) -> Result<CMatrix> {
    let path = format!("matrices[{k}]");
    let rows = as_array(v, &path)?;
    let n_rows = rows.len();
    let mut n_cols = None;
    let mut data = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{r}]");
        let entries = as_array(row, &row_path)?;
        match n_cols {
            None => n_cols = Some(entries.len()),
            Some(c) if c != entries.len() => {
                return Err(Error::parse(
                    row_path,
                    format!("row has {} entries, expected {c}", entries.len()),
                ))
            }
            _ => {}
        }
        if entries.len() > *budget {
            return Err(Error::parse(row_path, "document exceeds the entry limit"));
        }
        *budget -= entries.len();
        for (c, e) in entries.iter().enumerate() {
            let e_path = format!("{row_path}[{c}]");
            let pair = as_array(e, &e_path)?;
            if pair.len() != 2 {
                return Err(Error::parse(
                    e_path,
                    format!("complex entry must be [re, im], got {} values", pair.len()),
                ));
            }
            let re = as_f64(&pair[0], &format!("{e_path}[0]"))?;
            let im = as_f64(&pair[1], &format!("{e_path}[1]"))?;
            data.push(C64::new(re, im));
        }
    }
    Ok(CMatrix::from_row_slice(n_rows, n_cols.unwrap_or(0), &data))
}

/// Parses the document syntax and field structure. Entry counts are
/// checked against the declared systems later, by the decoder.
pub fn parse_document(text: &str) -> Result<OperatorDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse("document", "expected a JSON object"))?;
    let format_version = as_str(field(obj, "format_version", "document")?, "format_version")?;
    if format_version != FORMAT_VERSION {
        return Err(Error::parse(
            "format_version",
            format!("unsupported version `{format_version}`"),
        ));
    }
    let kind: Kind = as_str(field(obj, "kind", "document")?, "kind")?.parse()?;
    let systems = parse_systems(field(obj, "systems", "document")?)?;
    let mut budget = MAX_ENTRIES;
    let matrices = as_array(field(obj, "matrices", "document")?, "matrices")?
        .iter()
        .enumerate()
        .map(|(k, m)| parse_matrix(m, k, &mut budget))
        .collect::<Result<Vec<_>>>()?;
    let mut metadata = BTreeMap::new();
    if let Some(m) = obj.get("metadata") {
        let m = m
            .as_object()
            .ok_or_else(|| Error::parse("metadata", "expected an object"))?;
        for (k, v) in m {
            metadata.insert(k.clone(), as_str(v, &format!("metadata.{k}"))?.to_string());
        }
    }
    Ok(OperatorDocument {
        format_version: format_version.to_string(),
        kind,
        systems,
        matrices,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OperatorDocument {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.1, -2.5e-17),
                C64::new(-0.0, 3.0),
                C64::new(1e300, 0.0),
            ],
        );
        OperatorDocument::new(
            Kind::Operator,
            vec![
                SystemEntry::new("A", 2, Role::Input),
                SystemEntry::new("A", 2, Role::Output),
            ],
            vec![m],
        )
        .with_metadata("note", "x\"y")
    }

    #[test]
    fn round_trip_is_exact() {
        let doc = sample();
        let text = document_to_string(&doc).unwrap();
        let back = parse_document(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(document_to_string(&back).unwrap(), text);
    }

    #[test]
    fn canonical_field_order() {
        let text = document_to_string(&sample()).unwrap();
        let pos = |k: &str| text.find(k).unwrap();
        assert!(pos("format_version") < pos("\"kind\""));
        assert!(pos("\"kind\"") < pos("\"systems\""));
        assert!(pos("\"systems\"") < pos("\"matrices\""));
        assert!(pos("\"matrices\"") < pos("\"metadata\""));
    }

    #[test]
    fn malformed_entry_names_the_field() {
        let text = document_to_string(&sample()).unwrap().replacen(
            "[1.0000000000000000e0, 0.0000000000000000e0]",
            "[1]",
            1,
        );
        match parse_document(&text) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "matrices[0][0][0]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_kind_and_syntax_errors() {
        let text = document_to_string(&sample())
            .unwrap()
            .replace("\"operator\"", "\"banana\"");
        assert_eq!(
            parse_document(&text),
            Err(Error::UnknownKind("banana".into()))
        );
        assert!(matches!(parse_document("{"), Err(Error::Parse { .. })));
        assert!(matches!(parse_document("[]"), Err(Error::Parse { .. })));
    }

    #[test]
    fn ragged_rows_rejected() {
        let text = r#"{"format_version":"1","kind":"operator","systems":[],
            "matrices":[[[[1,0],[2,0]],[[3,0]]]],"metadata":{}}"#;
        assert!(
            matches!(parse_document(text), Err(Error::Parse { location, .. }) if location == "matrices[0][1]")
        );
    }

    #[test]
    fn non_finite_values_refused() {
        let mut doc = sample();
        doc.matrices[0][(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(document_to_string(&doc).is_err());
    }
}
