use std::path::Path;

use crate::breaking::MeasurePrepare;
use crate::channel::{ChannelRep, ChoiRep, KrausRep, LiouvilleRep, StinespringRep};
use crate::error::{Error, Result};
use crate::superchannel::{SuperchannelChoi, A1, A2, B1, B2};
use crate::tensor::{CMatrix, LabeledOperator, System, SystemList};

use super::document::{
    document_to_string, parse_document, Kind, OperatorDocument, Role, SystemEntry,
};

/// Metadata key naming the Stinespring environment system.
pub const ENVIRONMENT_KEY: &str = "environment";

/// In-memory form of a decoded document.
#[derive(Debug, Clone, PartialEq)]
pub enum Object {
    Operator(LabeledOperator),
    Channel(ChannelRep),
    Superchannel(SuperchannelChoi),
    Gour(LabeledOperator),
    MeasurePrepare(MeasurePrepare),
}

impl Object {
    pub fn kind(&self) -> Kind {
        match self {
            Object::Operator(_) => Kind::Operator,
            Object::Channel(ChannelRep::Choi(_)) => Kind::ChoiChannel,
            Object::Channel(ChannelRep::Kraus(_)) => Kind::KrausChannel,
            Object::Channel(ChannelRep::Stinespring(_)) => Kind::Stinespring,
            Object::Channel(ChannelRep::Liouville(_)) => Kind::Liouville,
            Object::Superchannel(_) => Kind::SuperchannelChoi,
            Object::Gour(_) => Kind::Gour,
            Object::MeasurePrepare(_) => Kind::MeasurePrepare,
        }
    }
}

fn entries(list: &SystemList, role: Role) -> impl Iterator<Item = SystemEntry> + '_ {
    list.iter()
        .map(move |s| SystemEntry::new(s.label.clone(), s.dim, role))
}

fn channel_systems(inputs: &SystemList, outputs: &SystemList) -> Vec<SystemEntry> {
    entries(inputs, Role::Input)
        .chain(entries(outputs, Role::Output))
        .collect()
}

/// Builds the document of `obj`.
pub fn encode(obj: &Object) -> OperatorDocument {
    match obj {
        Object::Operator(op) => OperatorDocument::new(
            Kind::Operator,
            channel_systems(op.inputs(), op.outputs()),
            vec![op.matrix().clone()],
        ),
        Object::Gour(op) => {
            // square on B1 A2 A1 B2: the first two are the input channel's legs
            let systems = op
                .outputs()
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let role = if i < 2 { Role::Input } else { Role::Output };
                    SystemEntry::new(s.label.clone(), s.dim, role)
                })
                .collect();
            OperatorDocument::new(Kind::Gour, systems, vec![op.matrix().clone()])
        }
        Object::Superchannel(t) => {
            let d = t.dims();
            let systems = vec![
                SystemEntry::new(A1, d.a1, Role::Input),
                SystemEntry::new(A2, d.a2, Role::Input),
                SystemEntry::new(B1, d.b1, Role::Output),
                SystemEntry::new(B2, d.b2, Role::Output),
            ];
            OperatorDocument::new(Kind::SuperchannelChoi, systems, vec![t.matrix().clone()])
        }
        Object::Channel(rep) => {
            let systems = channel_systems(rep.inputs(), rep.outputs());
            match rep {
                ChannelRep::Choi(c) => {
                    OperatorDocument::new(Kind::ChoiChannel, systems, vec![c.op().matrix().clone()])
                }
                ChannelRep::Kraus(k) => OperatorDocument::new(
                    Kind::KrausChannel,
                    systems,
                    k.ops().iter().map(|o| o.matrix().clone()).collect(),
                ),
                ChannelRep::Liouville(l) => {
                    OperatorDocument::new(Kind::Liouville, systems, vec![l.op().matrix().clone()])
                }
                ChannelRep::Stinespring(s) => {
                    let mut systems = systems;
                    systems.push(SystemEntry::new(
                        s.env().label.clone(),
                        s.env_dim(),
                        Role::Output,
                    ));
                    OperatorDocument::new(Kind::Stinespring, systems, vec![s.v().matrix().clone()])
                        .with_metadata(ENVIRONMENT_KEY, s.env().label.clone())
                }
            }
        }
        Object::MeasurePrepare(mp) => {
            let ins = mp.povm()[0].outputs();
            let outs = mp.states()[0].outputs();
            let matrices = mp
                .povm()
                .iter()
                .zip(mp.states())
                .flat_map(|(m, s)| [m.matrix().clone(), s.matrix().clone()])
                .collect();
            OperatorDocument::new(Kind::MeasurePrepare, channel_systems(ins, outs), matrices)
        }
    }
}

fn checked_total(list: &[System]) -> Result<usize> {
    list.iter().try_fold(1usize, |acc, s| {
        acc.checked_mul(s.dim)
            .ok_or_else(|| Error::dims("system dimensions overflow"))
    })
}

fn side(doc: &OperatorDocument, role: Role) -> Result<SystemList> {
    SystemList::new(
        doc.systems_with_role(role)
            .map(|s| System::new(s.name.clone(), s.dim))
            .collect(),
    )
}

fn expect_count(doc: &OperatorDocument, n: usize) -> Result<()> {
    if doc.matrices.len() != n {
        return Err(Error::dims(format!(
            "{} document needs {n} matrix, found {}",
            doc.kind,
            doc.matrices.len()
        )));
    }
    Ok(())
}

fn expect_shape(m: &CMatrix, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::dims(format!(
            "{what} is {}x{}, systems require {rows}x{cols}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn mul(a: usize, b: usize) -> Result<usize> {
    a.checked_mul(b)
        .ok_or_else(|| Error::dims("system dimensions overflow"))
}

fn expect_labels(list: &SystemList, labels: &[&str], role: Role) -> Result<()> {
    if list.labels() != labels {
        return Err(Error::dims(format!(
            "{} systems must be {}, got {list}",
            role.as_str(),
            labels.join(",")
        )));
    }
    Ok(())
}

/// Structural decoding; no validity checks beyond shapes and labels.
pub fn decode(doc: &OperatorDocument) -> Result<Object> {
    let ins = side(doc, Role::Input)?;
    let outs = side(doc, Role::Output)?;
    let d_in = checked_total(ins.as_slice())?;
    let d_out = checked_total(outs.as_slice())?;
    match doc.kind {
        Kind::Operator => {
            expect_count(doc, 1)?;
            expect_shape(&doc.matrices[0], d_out, d_in, "matrix")?;
            Ok(Object::Operator(LabeledOperator::new(
                doc.matrices[0].clone(),
                ins,
                outs,
            )?))
        }
        Kind::ChoiChannel => {
            expect_count(doc, 1)?;
            let n = mul(d_in, d_out)?;
            expect_shape(&doc.matrices[0], n, n, "Choi matrix")?;
            Ok(Object::Channel(ChannelRep::Choi(ChoiRep::from_matrix(
                doc.matrices[0].clone(),
                ins,
                outs,
            )?)))
        }
        Kind::KrausChannel => {
            if doc.matrices.is_empty() {
                return Err(Error::dims("Kraus document has no operators"));
            }
            for m in &doc.matrices {
                expect_shape(m, d_out, d_in, "Kraus operator")?;
            }
            Ok(Object::Channel(ChannelRep::Kraus(KrausRep::from_matrices(
                doc.matrices.clone(),
                ins,
                outs,
            )?)))
        }
        Kind::Stinespring => {
            expect_count(doc, 1)?;
            let env_label = doc.metadata.get(ENVIRONMENT_KEY).ok_or_else(|| {
                Error::parse("metadata", format!("stinespring needs `{ENVIRONMENT_KEY}`"))
            })?;
            let full = outs;
            let last = full
                .as_slice()
                .last()
                .filter(|s| &s.label == env_label)
                .cloned()
                .ok_or_else(|| {
                    Error::dims(format!("environment `{env_label}` must be the last output"))
                })?;
            expect_shape(&doc.matrices[0], d_out, d_in, "Stinespring isometry")?;
            let outs = full.without(&[env_label.as_str()]);
            let v = LabeledOperator::new(doc.matrices[0].clone(), ins.clone(), full)?;
            Ok(Object::Channel(ChannelRep::Stinespring(
                StinespringRep::new(v, ins, outs, last)?,
            )))
        }
        Kind::Liouville => {
            expect_count(doc, 1)?;
            let (r, c) = (mul(d_out, d_out)?, mul(d_in, d_in)?);
            expect_shape(&doc.matrices[0], r, c, "Liouville matrix")?;
            Ok(Object::Channel(ChannelRep::Liouville(
                LiouvilleRep::from_matrix(doc.matrices[0].clone(), ins, outs)?,
            )))
        }
        Kind::SuperchannelChoi | Kind::Gour => {
            expect_count(doc, 1)?;
            let (want_in, want_out) = if doc.kind == Kind::Gour {
                ([B1, A2], [A1, B2])
            } else {
                ([A1, A2], [B1, B2])
            };
            expect_labels(&ins, &want_in, Role::Input)?;
            expect_labels(&outs, &want_out, Role::Output)?;
            let n = mul(d_in, d_out)?;
            expect_shape(&doc.matrices[0], n, n, "matrix")?;
            let all = ins.concat(&outs)?;
            let op = LabeledOperator::square(doc.matrices[0].clone(), all)?;
            Ok(if doc.kind == Kind::Gour {
                Object::Gour(op)
            } else {
                Object::Superchannel(SuperchannelChoi::new(op)?)
            })
        }
        Kind::MeasurePrepare => {
            if doc.matrices.is_empty() || !doc.matrices.len().is_multiple_of(2) {
                return Err(Error::dims(
                    "measure-prepare document needs alternating POVM elements and states",
                ));
            }
            let mut povm = Vec::new();
            let mut states = Vec::new();
            for pair in doc.matrices.chunks(2) {
                expect_shape(&pair[0], d_in, d_in, "POVM element")?;
                expect_shape(&pair[1], d_out, d_out, "state")?;
                povm.push(LabeledOperator::square(pair[0].clone(), ins.clone())?);
                states.push(LabeledOperator::square(pair[1].clone(), outs.clone())?);
            }
            Ok(Object::MeasurePrepare(MeasurePrepare::from_parts(
                povm, states,
            )?))
        }
    }
}

/// Parses and decodes a document.
pub fn parse_object(text: &str) -> Result<Object> {
    decode(&parse_document(text)?)
}

pub fn object_to_string(obj: &Object) -> Result<String> {
    document_to_string(&encode(obj))
}

pub fn load_document(path: impl AsRef<Path>) -> Result<Object> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_object(&text)
}

pub fn save_document(obj: &Object, path: impl AsRef<Path>) -> Result<()> {
    let text = object_to_string(obj)?;
    std::fs::write(path.as_ref(), text)
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))
}
