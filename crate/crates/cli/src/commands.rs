use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use supermaps::breaking::{
    depolarizing_channel, eb_channel_report, example_type1_not_type2, random_eb_superchannel,
    superchannel_breaking_report, MeasurePrepare, PptVerdict,
};
use supermaps::channel::{
    apply_channel, compose_channels, random_channel, validate_channel, ChannelRep, KrausRep,
};
use supermaps::io::{
    load_document, object_to_string, save_document, CliConfig, Object, ReportFormat,
};
use supermaps::random::rng;
use supermaps::superchannel::{
    apply_to_channel, choi_from_gour, ensure_valid, gour_from_choi, memory_cost,
    random_superchannel, realize, validate_superchannel, SuperDims, SuperchannelChoi,
};
use supermaps::{Error, LabeledOperator, SystemList};

use crate::args::{Cli, Command, Format, GenCommand, TargetKind};

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
    Output(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
            CliError::Output(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl CliError {
    /// 2 for inputs that parsed but failed a validity check, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(
                Error::NotHermitian { .. }
                | Error::NotPsd { .. }
                | Error::NotTracePreserving { .. }
                | Error::NotIsometry { .. }
                | Error::InvalidChannel(_)
                | Error::NotAValidSuperchannel(_)
                | Error::ResidualTooLarge { .. }
                | Error::IncompleteDecomposition { .. },
            ) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Ctx<'a> {
    cfg: CliConfig,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, obj: &Object) -> Result<()> {
        match &self.cfg.output_path {
            Some(p) => save_document(obj, p)?,
            None => self.out.write_all(object_to_string(obj)?.as_bytes())?,
        }
        Ok(())
    }

    fn report(&mut self, value: &Value) -> Result<()> {
        match self.cfg.report_format {
            ReportFormat::Json => {
                let text = serde_json::to_string_pretty(value).expect("reports serialize");
                writeln!(self.out, "{text}")?;
            }
            ReportFormat::Text => {
                let mut lines = Vec::new();
                flatten("", value, &mut lines);
                for l in lines {
                    writeln!(self.out, "{l}")?;
                }
            }
        }
        Ok(())
    }
}

fn flatten(prefix: &str, v: &Value, lines: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, lines);
            }
        }
        Value::String(s) => lines.push(format!("{prefix}: {s}")),
        other => lines.push(format!("{prefix}: {other}")),
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    let g = cli.global;
    let cfg = CliConfig {
        tol: g.tol,
        rank_rtol: g.rank_rtol,
        seed: g.seed,
        output_path: g.out,
        report_format: match g.format {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
        },
    };
    cfg.validate()?;
    let mut ctx = Ctx { cfg, out };
    match cli.command {
        Command::Validate { file } => validate(&mut ctx, &file),
        Command::Convert { file, to } => convert(&mut ctx, &file, to),
        Command::Apply { map, input } => apply(&mut ctx, &map, &input),
        Command::Compose { f1, f2 } => compose(&mut ctx, &f1, &f2),
        Command::Gour { file, inverse } => gour(&mut ctx, &file, inverse),
        Command::Realize { file } => realize_cmd(&mut ctx, &file),
        Command::MemoryCost { file } => memory_cost_cmd(&mut ctx, &file),
        Command::Breaking { file } => breaking(&mut ctx, &file),
        Command::Gen(g) => generate(&mut ctx, g),
    }
}

fn wrong_kind(file: &Path, obj: &Object, what: &str) -> CliError {
    CliError::Usage(format!(
        "{}: expected {what}, found a {} document",
        file.display(),
        obj.kind()
    ))
}

fn load_channel(file: &Path) -> Result<ChannelRep> {
    match load_document(file)? {
        Object::Channel(c) => Ok(c),
        other => Err(wrong_kind(file, &other, "a channel")),
    }
}

/// Superchannel held by `obj`, or `obj` back if it holds none.
fn superchannel_of(obj: Object) -> Result<std::result::Result<SuperchannelChoi, Object>> {
    Ok(match obj {
        Object::Superchannel(t) => Ok(t),
        Object::Gour(g) => Ok(choi_from_gour(&g)?),
        other => Err(other),
    })
}

fn load_superchannel(file: &Path) -> Result<SuperchannelChoi> {
    superchannel_of(load_document(file)?)?
        .map_err(|other| wrong_kind(file, &other, "a superchannel"))
}

fn verdict(v: bool) -> Outcome {
    if v {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn validate(ctx: &mut Ctx, file: &Path) -> Result<Outcome> {
    let tol = ctx.cfg.tol;
    let obj = match superchannel_of(load_document(file)?)? {
        Ok(theta) => {
            let r = validate_superchannel(&theta, tol);
            ctx.report(&json!({
                "object": "superchannel",
                "valid": r.is_valid(),
                "hermitian": r.hermitian,
                "hermiticity_deviation": r.hermiticity_deviation,
                "cp": r.cp,
                "min_eigenvalue": r.min_eigenvalue,
                "tp": r.tp,
                "tp_deviation": r.tp_deviation,
                "ns": r.ns,
                "ns_deviation": r.ns_deviation,
                "tol": tol,
            }))?;
            return Ok(verdict(r.is_valid()));
        }
        Err(obj) => obj,
    };
    match obj {
        Object::Channel(c) => {
            let r = validate_channel(&c.to_choi()?, tol);
            ctx.report(&json!({
                "object": "channel",
                "valid": r.is_valid(),
                "hermitian": r.hermitian,
                "hermiticity_deviation": r.hermiticity_deviation,
                "cp": r.cp,
                "min_eigenvalue": r.min_eigenvalue,
                "tp": r.tp,
                "tp_deviation": r.tp_deviation,
                "tol": tol,
            }))?;
            Ok(verdict(r.is_valid()))
        }
        Object::MeasurePrepare(mp) => {
            let checked = MeasurePrepare::new(mp.povm().to_vec(), mp.states().to_vec(), tol);
            let valid = checked.is_ok();
            let mut report = json!({
                "object": "measure-prepare",
                "valid": valid,
                "outcomes": mp.len(),
                "completeness_deviation": mp.completeness_deviation(),
                "tol": tol,
            });
            if let Err(e) = checked {
                report["problem"] = json!(e.to_string());
            }
            ctx.report(&report)?;
            Ok(verdict(valid))
        }
        other => Err(wrong_kind(
            file,
            &other,
            "a channel, superchannel or measure-prepare",
        )),
    }
}

fn convert(ctx: &mut Ctx, file: &Path, to: TargetKind) -> Result<Outcome> {
    let tol = ctx.cfg.tol;
    let obj = load_document(file)?;
    let result = match (obj, to) {
        (Object::Channel(c), TargetKind::Choi) => Object::Channel(ChannelRep::Choi(c.to_choi()?)),
        (Object::Channel(c), TargetKind::Kraus) => {
            Object::Channel(ChannelRep::Kraus(c.to_kraus(tol)?))
        }
        (Object::Channel(c), TargetKind::Stinespring) => {
            Object::Channel(ChannelRep::Stinespring(c.to_stinespring(tol)?))
        }
        (Object::Channel(c), TargetKind::Liouville) => {
            Object::Channel(ChannelRep::Liouville(c.to_liouville(tol)?))
        }
        (Object::Superchannel(t), TargetKind::Gour) => Object::Gour(gour_from_choi(&t)?),
        (Object::Superchannel(t), TargetKind::Superchannel) => Object::Superchannel(t),
        (Object::Gour(g), TargetKind::Superchannel) => Object::Superchannel(choi_from_gour(&g)?),
        (Object::Gour(g), TargetKind::Gour) => Object::Gour(g),
        (other, to) => {
            return Err(CliError::Usage(format!(
                "cannot convert a {} document to {to:?}",
                other.kind()
            )))
        }
    };
    ctx.emit(&result)?;
    Ok(Outcome::Pass)
}

fn apply(ctx: &mut Ctx, map: &Path, input: &Path) -> Result<Outcome> {
    let tol = ctx.cfg.tol;
    let m = superchannel_of(load_document(map)?)?;
    let x = load_document(input)?;
    let result = match (m, x) {
        (Ok(theta), Object::Channel(e)) => {
            ensure_valid(&theta, tol)?;
            Object::Channel(ChannelRep::Choi(apply_to_channel(
                &theta,
                &e.to_choi()?,
                tol,
            )?))
        }
        (Err(Object::Channel(c)), Object::Operator(rho)) => {
            Object::Operator(apply_channel(&c, &rho)?)
        }
        (m, x) => {
            let mk = match m {
                Ok(_) => "superchannel-choi".to_string(),
                Err(o) => o.kind().to_string(),
            };
            return Err(CliError::Usage(format!(
                "cannot apply a {mk} document to a {} document",
                x.kind()
            )));
        }
    };
    ctx.emit(&result)?;
    Ok(Outcome::Pass)
}

fn compose(ctx: &mut Ctx, f1: &Path, f2: &Path) -> Result<Outcome> {
    let first = load_channel(f1)?.to_choi()?;
    let second = load_channel(f2)?.to_choi()?;
    let c = compose_channels(&first, &second)?;
    ctx.emit(&Object::Channel(ChannelRep::Choi(c)))?;
    Ok(Outcome::Pass)
}

fn gour(ctx: &mut Ctx, file: &Path, inverse: bool) -> Result<Outcome> {
    let obj = load_document(file)?;
    let result = match (obj, inverse) {
        (Object::Superchannel(t), false) => Object::Gour(gour_from_choi(&t)?),
        (Object::Gour(g), true) => Object::Superchannel(choi_from_gour(&g)?),
        (other, false) => return Err(wrong_kind(file, &other, "a superchannel-choi document")),
        (other, true) => return Err(wrong_kind(file, &other, "a gour document")),
    };
    ctx.emit(&result)?;
    Ok(Outcome::Pass)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// An isometry stored as a one-operator Kraus channel.
fn isometry_channel(op: &LabeledOperator) -> Result<Object> {
    let k = KrausRep::new(vec![op.clone()], op.inputs().clone(), op.outputs().clone())?;
    Ok(Object::Channel(ChannelRep::Kraus(k)))
}

fn realize_cmd(ctx: &mut Ctx, file: &Path) -> Result<Outcome> {
    let theta = load_superchannel(file)?;
    let r = realize(&theta, ctx.cfg.tol)?;
    let prefix = ctx
        .cfg
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from("realization"));
    let v_path = with_suffix(&prefix, ".V.json");
    let w_path = with_suffix(&prefix, ".W.json");
    save_document(&isometry_channel(&r.v)?, &v_path)?;
    save_document(&isometry_channel(&r.w)?, &w_path)?;
    ctx.report(&json!({
        "memory_dim": r.e1_dim,
        "environment_dim": r.e2_dim,
        "residual": r.residual,
        "v_isometry_deviation": r.v_deviation,
        "w_isometry_deviation": r.w_deviation,
        "v_path": v_path.display().to_string(),
        "w_path": w_path.display().to_string(),
    }))?;
    Ok(Outcome::Pass)
}

fn memory_cost_cmd(ctx: &mut Ctx, file: &Path) -> Result<Outcome> {
    let theta = load_superchannel(file)?;
    ensure_valid(&theta, ctx.cfg.tol)?;
    let d = memory_cost(&theta, ctx.cfg.tol, ctx.cfg.rank_rtol)?;
    match ctx.cfg.report_format {
        ReportFormat::Text => writeln!(ctx.out, "{d}")?,
        ReportFormat::Json => ctx.report(&json!({ "memory_cost": d }))?,
    }
    Ok(Outcome::Pass)
}

fn ppt_json(v: &PptVerdict) -> Value {
    json!({
        "cut": v.bipartition.to_string(),
        "ppt": v.is_ppt,
        "min_eigenvalue": v.min_eigenvalue,
        "exactness": v.exactness.as_str(),
    })
}

fn breaking(ctx: &mut Ctx, file: &Path) -> Result<Outcome> {
    let tol = ctx.cfg.tol;
    match superchannel_of(load_document(file)?)? {
        Ok(theta) => {
            let r = superchannel_breaking_report(&theta, tol)?;
            ctx.report(&json!({
                "object": "superchannel",
                "type_i": ppt_json(&r.type_i),
                "type_ii": ppt_json(&r.type_ii),
                "common_cause_breaking": r.common_cause_breaking,
            }))?;
        }
        Err(Object::Channel(c)) => {
            let r = eb_channel_report(&c.to_choi()?, tol)?;
            ctx.report(&json!({
                "object": "channel",
                "verdict": r.verdict.as_str(),
                "ppt": ppt_json(&r.ppt),
            }))?;
        }
        Err(other) => return Err(wrong_kind(file, &other, "a channel or superchannel")),
    }
    Ok(Outcome::Pass)
}

fn dims4(v: &[usize]) -> Result<SuperDims> {
    match v {
        [a1, a2, b1, b2] => Ok(SuperDims::new(*a1, *a2, *b1, *b2)),
        _ => Err(CliError::Usage(
            "--dims needs four values A1,A2,B1,B2".into(),
        )),
    }
}

fn generate(ctx: &mut Ctx, g: GenCommand) -> Result<Outcome> {
    let mut r = rng(ctx.cfg.seed);
    let obj = match g {
        GenCommand::Channel { d_in, d_out, rank } => {
            let k = random_channel(
                &mut r,
                SystemList::single("A", d_in),
                SystemList::single("B", d_out),
                rank,
            )?;
            Object::Channel(ChannelRep::Kraus(k))
        }
        GenCommand::Superchannel { dims, memory } => {
            Object::Superchannel(random_superchannel(&mut r, dims4(&dims)?, memory)?)
        }
        GenCommand::EbSuperchannel { dims, terms } => {
            Object::Superchannel(random_eb_superchannel(&mut r, dims4(&dims)?, terms)?)
        }
        GenCommand::Type1Example { dim } => {
            Object::Superchannel(example_type1_not_type2(dim, None)?)
        }
        GenCommand::Depolarizing { p, dim } => {
            Object::Channel(ChannelRep::Choi(depolarizing_channel(dim, p)?))
        }
    };
    ctx.emit(&obj)?;
    Ok(Outcome::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn run_args(args: &[&str]) -> (Result<Outcome>, String) {
        let cli = Cli::try_parse_from(std::iter::once("supermaps").chain(args.iter().copied()))
            .expect("arguments parse");
        let mut buf = Vec::new();
        let r = run(cli, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn validity_errors_map_to_two() {
        let e = CliError::Lib(Error::NotAValidSuperchannel("x".into()));
        assert_eq!(e.exit_code(), 2);
        assert_eq!(CliError::Lib(Error::UnknownKind("x".into())).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
    }

    #[test]
    fn text_reports_flatten_nested_keys() {
        let mut lines = Vec::new();
        flatten("", &json!({"a": {"b": 1, "c": "x"}, "d": true}), &mut lines);
        assert_eq!(lines, ["a.b: 1", "a.c: x", "d: true"]);
    }

    #[test]
    fn dims_need_four_values() {
        assert!(dims4(&[1, 2, 3]).is_err());
        assert_eq!(dims4(&[1, 2, 3, 4]).unwrap(), SuperDims::new(1, 2, 3, 4));
    }

    #[test]
    fn generated_documents_go_to_the_writer() {
        let (r, text) = run_args(&["--seed", "1", "gen", "depolarizing", "--p", "0.25"]);
        assert_eq!(r.unwrap(), Outcome::Pass);
        assert!(text.contains("\"kind\": \"choi-channel\""));
    }

    #[test]
    fn bad_tolerance_is_a_usage_error() {
        let (r, _) = run_args(&["--tol", "0", "gen", "type1-example"]);
        assert_eq!(r.unwrap_err().exit_code(), 1);
    }
}
