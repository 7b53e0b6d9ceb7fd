//! Command-line surface: JSON instance files, seeded instance generation and
//! one report per subcommand. Exit codes: 0 all checks pass, 2 bad input,
//! 3 internal error or failed check.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bimodules::{
    classify_bimodule, ext_dims, ext_dims_descriptor, hilbert_data, hochschild_dims, split_from_cohomology, split_table,
    stability_classify, BimodConcrete, BimodDescriptor,
};
use crate::curves::KodairaType;
use crate::error::{Error, Result};
use crate::exactmath::{Field, Scalar};
use crate::linebundles::{nr_cech_sub, nr_split_sub, BundleJson, LineBundleRep, NRLineBundle};
use crate::mckay::mckay_verify;
use crate::moduli::{psi0, psi1, random_admissible, roundtrip0, Quadruple, QuadrupleJson};
use crate::quivers::{hom_ext_matrix, is_strong, mrel_dim_check, strong_m1_table, toric_matrices_check};
use crate::samples::{random_bimodule, random_non_reduced};

/// A concrete bimodule: an invertible sheaf on a reduced (2,2) curve, or the
/// chart model on the doubled diagonal with a divisor of finite points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BimodJson {
    Reduced { bundle: BundleJson },
    NonReduced { k_u: i64, k_v: i64, a: Scalar, divisor: Vec<(Scalar, u32)> },
}

impl BimodJson {
    pub fn from_concrete(b: &BimodConcrete) -> BimodJson {
        match b {
            BimodConcrete::Reduced { u } => BimodJson::Reduced { bundle: u.to_json() },
            BimodConcrete::NonReduced { l, d } => {
                BimodJson::NonReduced { k_u: l.k_u, k_v: l.k_v, a: l.a.clone(), divisor: d.clone() }
            }
        }
    }

    pub fn to_concrete(&self) -> Result<BimodConcrete> {
        match self {
            BimodJson::Reduced { bundle } => Ok(BimodConcrete::Reduced { u: LineBundleRep::from_json(bundle)? }),
            BimodJson::NonReduced { k_u, k_v, a, divisor } => {
                for (z, _) in divisor {
                    if z.field() != a.field() {
                        return Err(Error::MixedFields(z.field().to_string(), a.field().to_string()));
                    }
                }
                Ok(BimodConcrete::NonReduced { l: NRLineBundle::new(*k_u, *k_v, a.clone()), d: divisor.clone() })
            }
        }
    }
}

/// Input file: exactly one of the fields is expected by each subcommand.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<BimodDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodule: Option<BimodJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadruple: Option<QuadrupleJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InstanceKind {
    #[value(name = "smooth-bimodule-chi2", alias = "smooth-bimodule-χ2")]
    SmoothChi2,
    #[value(name = "smooth-bimodule-chi1", alias = "smooth-bimodule-χ1")]
    SmoothChi1,
    NonReduced,
    Reducible,
    Quadruple,
}

#[derive(Parser, Debug)]
#[command(name = "bimodulus", version, about = "Rank-2 sheaf bimodules on P1: classification, quivers, moduli")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input JSON file.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Characteristic of the base field.
    #[arg(long, global = true, default_value_t = 101)]
    pub prime: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Number of generated instances when no input file is given.
    #[arg(long, global = true, default_value_t = 1)]
    pub count: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Kind of generated instance.
    #[arg(long, global = true, value_enum, default_value = "smooth-bimodule-chi2")]
    pub kind: InstanceKind,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Discrete invariants of a concrete bimodule.
    Classify,
    /// Splitting types from the tables and from cohomology.
    Split,
    /// Gieseker stability and the reduced Hilbert polynomial.
    Stability,
    /// Ext dimensions of the bimodule with itself.
    Ext,
    /// Hochschild dimensions for a degree-d component.
    Hochschild {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
    },
    /// Strongness of the exceptional collection.
    Strong {
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        m: i64,
    },
    /// Hom and Ext^1 dimensions of the exceptional collection.
    HomMatrix {
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        m: i64,
    },
    /// Relations of the quiver attached to a quadruple.
    Psi,
    /// Bimodule -> quadruple -> relations -> N_I and back.
    Roundtrip,
    /// Cech cohomology and splitting on the doubled diagonal.
    Cech {
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        ku: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        kv: i64,
        /// Extension parameter.
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        a: i64,
        /// Work over Q instead of F_p.
        #[arg(long)]
        rational: bool,
    },
    /// Weight and kernel matrices of the torus acting on Q1 representations.
    ToricCheck,
    /// Sigma2 relations against the explicit bundle maps.
    Mckay {
        /// Optional action word; only "verify" exists.
        action: Option<String>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 5)]
        lambda: i64,
        #[arg(long)]
        rational: bool,
    },
    /// Dimension of the stack of relations of Q0.
    MrelDim,
    /// Emit seeded random instances.
    Generate,
}

/// Report plus whether every asserted check passed.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) | Error::Unstabilized(_) | Error::RetriesExhausted(_) => 3,
        _ => 2,
    }
}

fn config_field(p: u64) -> Result<Field> {
    if p == 2 || p == 3 {
        return Err(Error::Invalid(format!("characteristic {p} is not supported")));
    }
    Field::prime(p)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64))
}

/// One seeded instance of the requested kind.
pub fn generate_instance(kind: InstanceKind, seed: u64, p: u64) -> Result<InstanceJson> {
    generate_indexed(kind, seed, 0, p)
}

fn generate_indexed(kind: InstanceKind, seed: u64, index: usize, p: u64) -> Result<InstanceJson> {
    let field = config_field(p)?;
    let mut rng = instance_rng(seed, index);
    let b = match kind {
        InstanceKind::SmoothChi2 => random_admissible(field, 2, &mut rng)?.0,
        InstanceKind::SmoothChi1 => random_admissible(field, 1, &mut rng)?.0,
        InstanceKind::NonReduced => random_non_reduced(field, rng.gen_range(0..=4), &mut rng)?,
        InstanceKind::Reducible => {
            let t = if rng.gen_bool(0.5) { KodairaType::I2 } else { KodairaType::III };
            random_bimodule(field, t, rng.gen_range(-2..=4), &mut rng)?
        }
        InstanceKind::Quadruple => {
            let q = random_admissible(field, 2, &mut rng)?.1;
            return Ok(InstanceJson { quadruple: Some(q.to_json()), ..Default::default() });
        }
    };
    classify_bimodule(&b)?;
    Ok(InstanceJson { bimodule: Some(BimodJson::from_concrete(&b)), ..Default::default() })
}

fn load_instances(cli: &Cli) -> Result<Vec<InstanceJson>> {
    match &cli.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("malformed JSON: {e}")))?;
            let items = match v {
                Value::Array(xs) => xs,
                x => vec![x],
            };
            items
                .into_iter()
                .map(|x| serde_json::from_value(x).map_err(|e| Error::Invalid(format!("malformed instance: {e}"))))
                .collect()
        }
        None => (0..cli.count).map(|i| generate_indexed(cli.kind, cli.seed, i, cli.prime)).collect(),
    }
}

fn concrete(inst: &InstanceJson) -> Result<Option<BimodConcrete>> {
    inst.bimodule.as_ref().map(BimodJson::to_concrete).transpose()
}

/// The descriptor given directly or computed from the concrete bimodule.
fn descriptor_of(inst: &InstanceJson) -> Result<(BimodDescriptor, Option<BimodConcrete>)> {
    let b = concrete(inst)?;
    let d = match (&inst.descriptor, &b) {
        (Some(d), _) => {
            d.validate()?;
            d.clone()
        }
        (None, Some(b)) => classify_bimodule(b)?,
        (None, None) => return Err(Error::Invalid("instance has neither a descriptor nor a bimodule".into())),
    };
    Ok((d, b))
}

fn per_instance(cli: &Cli, f: impl Fn(&InstanceJson) -> Result<Outcome>) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut ok = true;
    for inst in load_instances(cli)? {
        let o = f(&inst)?;
        ok &= o.ok;
        reports.push(o.report);
    }
    let report = if reports.len() == 1 { reports.pop().expect("one report") } else { Value::Array(reports) };
    Ok(Outcome { report, ok })
}

fn cmd_split(inst: &InstanceJson) -> Result<Outcome> {
    let (d, b) = descriptor_of(inst)?;
    let table = split_table(&d)?;
    let Some(b) = b else {
        return Ok(Outcome { report: json!({ "descriptor": d, "table": table }), ok: true });
    };
    let coh = split_from_cohomology(&b)?;
    let agree = coh == table;
    Ok(Outcome { report: json!({ "descriptor": d, "table": table, "cohomology": coh, "agree": agree }), ok: agree })
}

fn cmd_stability(inst: &InstanceJson) -> Result<Outcome> {
    let (d, _) = descriptor_of(inst)?;
    let st = stability_classify(&d)?;
    let h = hilbert_data(&d);
    let c = h.reduced_constant();
    Ok(Outcome {
        report: json!({
            "descriptor": d,
            "stability": st.to_string(),
            "hilbert": { "leading": h.leading, "chi": h.chi },
            "reduced_constant": format!("{}/{}", c.numer(), c.denom()),
        }),
        ok: true,
    })
}

fn cmd_ext(inst: &InstanceJson) -> Result<Outcome> {
    let (d, b) = descriptor_of(inst)?;
    let table = ext_dims_descriptor(&d)?;
    let Some(b) = b else {
        return Ok(Outcome { report: json!({ "descriptor": d, "table": table }), ok: true });
    };
    let computed = ext_dims(&b)?;
    let agree = table.dims.is_none() || computed.dims.is_none() || table.dims == computed.dims;
    Ok(Outcome { report: json!({ "descriptor": d, "table": table, "computed": computed, "agree": agree }), ok: agree })
}

fn cmd_strong(inst: &InstanceJson, m: i64) -> Result<Outcome> {
    let (d, b) = descriptor_of(inst)?;
    let split = split_table(&d)?;
    let strong = is_strong(&split, m);
    let by_inequality = split.a_prime >= -m - 1;
    let mut report = json!({ "descriptor": d, "m": m, "strong": strong, "a_prime": split.a_prime });
    let mut ok = strong == by_inequality;
    if m == 1 && matches!(d.chi(), 1 | 2) {
        let listed = strong_m1_table(&d)?;
        report["listed"] = json!(listed);
        ok &= listed == strong;
    }
    if let Some(b) = b {
        let coh = split_from_cohomology(&b)?;
        report["strong_from_cohomology"] = json!(is_strong(&coh, m));
        ok &= is_strong(&coh, m) == strong;
    }
    report["consistent"] = json!(ok);
    Ok(Outcome { report, ok })
}

fn cmd_hom_matrix(inst: &InstanceJson, m: i64) -> Result<Outcome> {
    let (d, b) = descriptor_of(inst)?;
    let split = match &b {
        Some(b) => split_from_cohomology(b)?,
        None => split_table(&d)?,
    };
    let h = hom_ext_matrix(&split, m);
    Ok(Outcome { report: json!({ "descriptor": d, "split": split, "m": m, "hom": h.hom, "ext1": h.ext1 }), ok: true })
}

fn cmd_psi(inst: &InstanceJson) -> Result<Outcome> {
    let q = match (&inst.quadruple, concrete(inst)?) {
        (Some(qj), _) => Quadruple::from_json(qj)?,
        (None, Some(b)) => crate::moduli::phi(&b)?,
        (None, None) => return Err(Error::Invalid("psi needs a quadruple or a smooth bimodule".into())),
    };
    let ideal = if q.component == 0 { psi0(&q)? } else { psi1(&q)? };
    Ok(Outcome {
        report: json!({
            "component": q.component,
            "paths": ideal.space.labels(),
            "relations": ideal.basis,
            "dim": ideal.dim(),
        }),
        ok: true,
    })
}

fn cmd_roundtrip(cli: &Cli) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut ok = true;
    for inst in load_instances(cli)? {
        let b = concrete(&inst)?.ok_or_else(|| Error::Invalid("roundtrip needs a bimodule".into()))?;
        let r = roundtrip0(&b);
        ok &= r.pass && r.theta_all_stable;
        reports.push(to_value(&r));
    }
    Ok(Outcome { report: Value::Array(reports), ok })
}

fn cmd_cech(cli: &Cli, ku: i64, kv: i64, a: i64, rational: bool) -> Result<Outcome> {
    let field = if rational { Field::Q } else { config_field(cli.prime)? };
    let (l, d) = match &cli.input {
        Some(_) => {
            let inst = load_instances(cli)?.into_iter().next().ok_or_else(|| Error::Invalid("empty input".into()))?;
            match concrete(&inst)? {
                Some(BimodConcrete::NonReduced { l, d }) => (l, d),
                _ => return Err(Error::Invalid("cech needs a bimodule on the doubled diagonal".into())),
            }
        }
        None => (NRLineBundle::new(ku, kv, field.from_i64(a)), Vec::new()),
    };
    let (h0, h1) = nr_cech_sub(&l, &d)?;
    let (sa, sb) = nr_split_sub(&l, &d)?;
    Ok(Outcome { report: json!({ "h0": h0, "h1": h1, "split": [sa, sb] }), ok: true })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Classify => per_instance(cli, |inst| {
            let b = concrete(inst)?.ok_or_else(|| Error::Invalid("classify needs a bimodule".into()))?;
            Ok(Outcome { report: to_value(&classify_bimodule(&b)?), ok: true })
        }),
        Command::Split => per_instance(cli, cmd_split),
        Command::Stability => per_instance(cli, cmd_stability),
        Command::Ext => per_instance(cli, cmd_ext),
        Command::Hochschild { d } => {
            let h = hochschild_dims(*d)?;
            Ok(Outcome { report: json!({ "dims": [h.hh1, h.hh2, h.hh3], "altsum": h.altsum }), ok: h.altsum == 3 })
        }
        Command::Strong { m } => per_instance(cli, |i| cmd_strong(i, *m)),
        Command::HomMatrix { m } => per_instance(cli, |i| cmd_hom_matrix(i, *m)),
        Command::Psi => per_instance(cli, cmd_psi),
        Command::Roundtrip => cmd_roundtrip(cli),
        Command::Cech { ku, kv, a, rational } => cmd_cech(cli, *ku, *kv, *a, *rational),
        Command::ToricCheck => {
            let t = toric_matrices_check();
            let ok = t.product_zero && t.weight_rank == 3 && t.kernel_rank == 4;
            Ok(Outcome { report: to_value(&t), ok })
        }
        Command::Mckay { action, lambda, rational } => {
            if action.as_deref().is_some_and(|a| a != "verify") {
                return Err(Error::Invalid(format!("unknown mckay action {action:?}")));
            }
            let field = if *rational { Field::Q } else { config_field(cli.prime)? };
            let r = mckay_verify(&field.from_i64(*lambda))?;
            Ok(Outcome { ok: r.pass, report: to_value(&r) })
        }
        Command::MrelDim => {
            let r = mrel_dim_check();
            Ok(Outcome { ok: r.dim == 3, report: to_value(&r) })
        }
        Command::Generate => {
            let xs: Vec<InstanceJson> =
                (0..cli.count).map(|i| generate_indexed(cli.kind, cli.seed, i, cli.prime)).collect::<Result<_>>()?;
            let report = if xs.len() == 1 { to_value(&xs[0]) } else { to_value(&xs) };
            Ok(Outcome { report, ok: true })
        }
    }
}

/// Parse, run and print; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (text, code) = match dispatch(&cli) {
        Ok(o) => (serde_json::to_string_pretty(&o.report).expect("json"), if o.ok { 0 } else { 3 }),
        Err(e) => (serde_json::to_string_pretty(&json!({ "error": e.to_string() })).expect("json"), exit_code(&e)),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("{}: {e}", path.display());
                return 2;
            }
        }
        None => {
            use std::io::Write;
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    code
}
