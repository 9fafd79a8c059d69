//! Command-line front end. All output is a single JSON document on standard
//! output; diagnostics go to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::aut::{aut_check, aut_closed_form, aut_instantiate};
use crate::classify::{classify, iso_test, t2_to_t1, AltLabel, ClassificationResult};
use crate::der::{der_check, der_solve};
use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldCtx, FieldDescriptor, Rationals};
use crate::oracle::{brute_aut, census};
use crate::tensor::{mat2_inv, mat2_mul, transform, BasisChange, EvolutionMsc, Mat2, Msc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONSISTENCY: i32 = 2;
pub const EXIT_NEEDS_EXTENSION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "evoalg", version, about = "Classify 2-dimensional evolution algebras over exact fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical key and witness basis change for an algebra
    Classify {
        /// Algebra JSON (path or inline)
        #[arg(short = 'a', long = "algebra")]
        algebra: String,
    },
    /// Automorphism group of an algebra's canonical form
    Aut {
        #[arg(short = 'a', long = "algebra")]
        algebra: String,
        /// Also list every automorphism of the given algebra (finite fields only)
        #[arg(long)]
        enumerate: bool,
    },
    /// Basis of the derivation algebra
    Der {
        #[arg(short = 'a', long = "algebra")]
        algebra: String,
    },
    /// Decide isomorphism and produce a basis change
    Iso {
        #[arg(short = 'a', long = "algebra")]
        a: String,
        #[arg(short = 'b')]
        b: String,
    },
    /// Check an automorphism, isomorphism or derivation claim
    Verify {
        #[arg(short = 'a', long = "algebra")]
        algebra: String,
        /// Matrix JSON: a bare 2×2 array, or {"matrix": ..., "witness_field": ...}
        #[arg(short = 'g', long = "matrix")]
        matrix: String,
        /// aut | der | iso:<target algebra JSON>
        #[arg(long)]
        mode: String,
    },
    /// Exhaustive cross-check over a small finite field
    Census {
        /// Field descriptor JSON (path or inline)
        #[arg(long)]
        field: String,
        #[arg(long = "max-ext", default_value_t = 6)]
        max_ext: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write a CSV summary to this path
        #[arg(long)]
        csv: Option<String>,
    },
    /// Map a label of the alternative six-item list to its canonical key
    T2map {
        /// E1 | E2 | E3 | E4 | E5ab | E6c
        #[arg(long)]
        label: String,
        #[arg(long = "param")]
        params: Vec<String>,
        /// Field descriptor JSON; the rationals by default
        #[arg(long)]
        field: Option<String>,
    },
}

/// Runs against a field chosen at runtime.
macro_rules! with_field {
    ($ctx:expr, $f:ident => $body:expr) => {
        match $ctx {
            FieldCtx::Rationals($f) => $body,
            FieldCtx::Galois($f) => $body,
        }
    };
}

/// Outcome of a subcommand: the JSON document and the exit code.
struct Output {
    doc: Value,
    code: i32,
}

impl Output {
    fn ok(doc: Value) -> Self {
        Output { doc, code: EXIT_OK }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let target: &mut dyn Write = if informational { out } else { err };
            let _ = write!(target, "{}", e.render());
            return if informational { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match execute(cli.command) {
        Ok(output) => {
            let text = serde_json::to_string_pretty(&output.doc).expect("JSON values always serialize");
            let _ = writeln!(out, "{text}");
            output.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read_json(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with(['{', '[']) && !Path::new(arg).exists() {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

struct AlgebraInput {
    ctx: FieldCtx,
    json: Value,
}

fn read_algebra(arg: &str) -> Result<AlgebraInput> {
    let json = read_json(arg)?;
    let desc = json
        .get("field")
        .ok_or_else(|| Error::Parse("algebra needs a \"field\"".into()))?;
    let ctx = FieldCtx::make(&FieldDescriptor::from_json(desc)?)?;
    Ok(AlgebraInput { ctx, json })
}

fn decode_msc<F: Field>(f: &F, v: &Value) -> Result<Msc<F::Elem>> {
    let elems = |row: &Value, n: usize, what: &str| -> Result<Vec<F::Elem>> {
        let items = row
            .as_array()
            .filter(|a| a.len() == n)
            .ok_or_else(|| Error::Parse(format!("{what} must be an array of {n} elements")))?;
        items.iter().map(|x| f.decode(x)).collect()
    };
    if let Some(m) = v.get("msc") {
        let e = elems(m, 4, "\"msc\"")?;
        Ok(EvolutionMsc::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()).to_msc(f))
    } else if let Some(m) = v.get("msc8") {
        let rows = m
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse("\"msc8\" must have two rows".into()))?;
        let r0 = elems(&rows[0], 4, "each \"msc8\" row")?;
        let r1 = elems(&rows[1], 4, "each \"msc8\" row")?;
        let to4 = |r: Vec<F::Elem>| -> [F::Elem; 4] { r.try_into().unwrap_or_else(|_| unreachable!()) };
        Ok(Msc::new([to4(r0), to4(r1)]))
    } else {
        Err(Error::Parse("algebra needs \"msc\" or \"msc8\"".into()))
    }
}

fn decode_evolution<F: Field>(f: &F, v: &Value) -> Result<EvolutionMsc<F::Elem>> {
    decode_msc(f, v)?
        .as_evolution(f)
        .ok_or_else(|| Error::Parse("the structure matrix is not of evolution form in the given basis".into()))
}

fn decode_mat2<F: Field>(f: &F, v: &Value) -> Result<Mat2<F::Elem>> {
    let rows = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse("matrix must be a 2×2 array".into()))?;
    let row = |r: &Value| -> Result<[F::Elem; 2]> {
        let items = r
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse("matrix must be a 2×2 array".into()))?;
        Ok([f.decode(&items[0])?, f.decode(&items[1])?])
    };
    Ok([row(&rows[0])?, row(&rows[1])?])
}

pub fn encode_mat2<F: Field>(f: &F, m: &Mat2<F::Elem>) -> Value {
    json!(m.iter().map(|r| r.iter().map(|x| f.encode(x)).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// JSON form of a classification result.
pub fn classification_json<F: Field>(f: &F, r: &ClassificationResult<F>) -> Value {
    let k = &r.witness_field;
    json!({
        "key": r.key.encode(f),
        "witness": r.witness.as_ref().map(|w| encode_mat2(k, w.ginv())),
        "convention": "g_inverse",
        "witness_field": k.descriptor().to_json(),
        "extension_degree": r.extension_degree(f),
        "needs_extension": r.needs_extension.as_ref().map(|p| p.encode(f)),
        "needs_extension_text": r.needs_extension.as_ref().map(|p| p.to_text(f)),
        "trace": r.trace.iter().map(|t| t.as_str()).collect::<Vec<_>>(),
        "lambda": r.lambda.as_ref().map(|l| f.encode(l)),
    })
}

fn execute(command: Command) -> Result<Output> {
    match command {
        Command::Classify { algebra } => {
            let input = read_algebra(&algebra)?;
            with_field!(&input.ctx, f => cmd_classify(f, &input.json))
        }
        Command::Aut { algebra, enumerate } => {
            let input = read_algebra(&algebra)?;
            with_field!(&input.ctx, f => cmd_aut(f, &input.json, enumerate))
        }
        Command::Der { algebra } => {
            let input = read_algebra(&algebra)?;
            with_field!(&input.ctx, f => {
                let e = decode_msc(f, &input.json)?;
                Ok(Output::ok(der_solve(f, &e).to_json(f)))
            })
        }
        Command::Iso { a, b } => {
            let ia = read_algebra(&a)?;
            let ib = read_algebra(&b)?;
            if ia.ctx != ib.ctx {
                return Err(Error::MixedFields);
            }
            with_field!(&ia.ctx, f => cmd_iso(f, &ia.json, &ib.json))
        }
        Command::Verify { algebra, matrix, mode } => {
            let input = read_algebra(&algebra)?;
            let matrix = read_json(&matrix)?;
            with_field!(&input.ctx, f => cmd_verify(f, &input, &matrix, &mode))
        }
        Command::Census {
            field,
            max_ext,
            jobs,
            csv,
        } => {
            let ctx = FieldCtx::make(&FieldDescriptor::from_json(&read_json(&field)?)?)?;
            let FieldCtx::Galois(f) = ctx else {
                return Err(Error::InfiniteField);
            };
            let report = census(&f, max_ext, jobs)?;
            if let Some(path) = csv {
                std::fs::write(&path, report.to_csv())
                    .map_err(|e| Error::Parse(format!("cannot write {path}: {e}")))?;
            }
            let code = if report.flags.all() { EXIT_OK } else { EXIT_CONSISTENCY };
            Ok(Output {
                doc: report.to_json(),
                code,
            })
        }
        Command::T2map { label, params, field } => {
            let ctx = match field {
                Some(desc) => FieldCtx::make(&FieldDescriptor::from_json(&read_json(&desc)?)?)?,
                None => FieldCtx::Rationals(Rationals),
            };
            let label = AltLabel::parse(&label)?;
            with_field!(&ctx, f => {
                let params = params
                    .iter()
                    .map(|p| f.decode(&serde_json::from_str::<Value>(p).unwrap_or_else(|_| Value::String(p.clone()))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Output::ok(t2_to_t1(f, label, &params)?.encode(f)))
            })
        }
    }
}

fn cmd_classify<F: Field>(f: &F, json: &Value) -> Result<Output> {
    let e = decode_evolution(f, json)?;
    let r = classify(f, &e);
    let code = if r.needs_extension.is_some() {
        EXIT_NEEDS_EXTENSION
    } else {
        EXIT_OK
    };
    Ok(Output {
        doc: classification_json(f, &r),
        code,
    })
}

/// Automorphisms of `e` itself: conjugates of the canonical group when the
/// witness is defined over the base field, brute force otherwise.
fn aut_elements<F: Field>(f: &F, e: &EvolutionMsc<F::Elem>, r: &ClassificationResult<F>) -> Result<Vec<Mat2<F::Elem>>> {
    let msc = e.to_msc(f);
    match (&r.witness, r.embedding.is_identity()) {
        (Some(w), true) => {
            let desc = aut_closed_form(f, &r.key)?;
            let g = w.g(f);
            let ginv = w.ginv();
            let mut out: Vec<Mat2<F::Elem>> = aut_instantiate(f, &desc)?
                .iter()
                .map(|phi| mat2_mul(f, ginv, &mat2_mul(f, phi, &g)))
                .collect();
            if !out.iter().all(|m| aut_check(f, &msc, m)) {
                return Err(Error::Internal("conjugated automorphism failed its check".into()));
            }
            out.sort_by(|a, b| {
                a.iter()
                    .flatten()
                    .zip(b.iter().flatten())
                    .map(|(x, y)| f.cmp_elems(x, y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            Ok(out)
        }
        _ => brute_aut(f, &msc),
    }
}

fn cmd_aut<F: Field>(f: &F, json: &Value, enumerate: bool) -> Result<Output> {
    let e = decode_evolution(f, json)?;
    let r = classify(f, &e);
    let desc = aut_closed_form(f, &r.key)?;
    let mut doc = desc.to_json(f);
    doc["key"] = r.key.encode(f);
    if enumerate {
        let elements = aut_elements(f, &e, &r)?;
        doc["order"] = json!(elements.len());
        doc["elements"] = json!(elements.iter().map(|m| encode_mat2(f, m)).collect::<Vec<_>>());
    }
    Ok(Output::ok(doc))
}

fn cmd_iso<F: Field>(f: &F, a: &Value, b: &Value) -> Result<Output> {
    let ea = decode_evolution(f, a)?;
    let eb = decode_evolution(f, b)?;
    match iso_test(f, &ea, &eb) {
        Ok(None) => Ok(Output::ok(json!({"isomorphic": false}))),
        Ok(Some(w)) => Ok(Output::ok(json!({
            "isomorphic": true,
            "witness": encode_mat2(&w.field, w.change.ginv()),
            "convention": "g_inverse",
            "witness_field": w.field.descriptor().to_json(),
        }))),
        Err(Error::NeedsExtension { poly }) => Ok(Output {
            doc: json!({
                "isomorphic": true,
                "witness": null,
                "convention": "g_inverse",
                "needs_extension_text": poly,
            }),
            code: EXIT_NEEDS_EXTENSION,
        }),
        Err(e) => Err(e),
    }
}

/// Decodes a matrix argument, possibly living in an extension of `f`.
fn lift_matrix<F: Field>(f: &F, v: &Value) -> Result<(F, F::Embedding, Mat2<F::Elem>)> {
    let (matrix, field) = match v {
        Value::Object(obj) => {
            if let Some(conv) = obj.get("convention").and_then(Value::as_str) {
                if conv != "g_inverse" && conv != "g" {
                    return Err(Error::Parse(format!("unknown convention {conv:?}")));
                }
            }
            (
                obj.get("matrix")
                    .or_else(|| obj.get("witness"))
                    .ok_or_else(|| Error::Parse("matrix object needs \"matrix\"".into()))?,
                obj.get("witness_field"),
            )
        }
        other => (other, None),
    };
    let ctx_same = |desc: &Value| -> Result<Option<F>> {
        let target = FieldDescriptor::from_json(desc)?;
        if target == f.descriptor() {
            return Ok(None);
        }
        Ok(Some(target_field::<F>(&target)?))
    };
    match field.map(ctx_same).transpose()?.flatten() {
        None => Ok((f.clone(), f.identity_embedding(), decode_mat2(f, matrix)?)),
        Some(k) => {
            let emb = f.embedding_into(&k)?;
            let m = decode_mat2(&k, matrix)?;
            Ok((k, emb, m))
        }
    }
}

/// Rebuilds a field of the static type `F` from a descriptor.
fn target_field<F: Field>(desc: &FieldDescriptor) -> Result<F> {
    let ctx = FieldCtx::make(desc)?;
    let any: Box<dyn std::any::Any> = match ctx {
        FieldCtx::Rationals(q) => Box::new(q),
        FieldCtx::Galois(g) => Box::new(g),
    };
    any.downcast::<F>().map(|b| *b).map_err(|_| Error::MixedFields)
}

fn cmd_verify<F: Field>(f: &F, input: &AlgebraInput, matrix: &Value, mode: &str) -> Result<Output> {
    let e = decode_msc(f, &input.json)?;
    let (k, emb, m) = lift_matrix(f, matrix)?;
    let lifted = e.map::<F>(&emb);
    let holds = match mode {
        "aut" => aut_check(&k, &lifted, &m),
        "der" => der_check(&k, &lifted, &m),
        other => {
            let Some(target) = other.strip_prefix("iso:") else {
                return Err(Error::Parse(format!("unknown mode {other:?}")));
            };
            let t = read_algebra(target)?;
            if t.ctx != input.ctx {
                return Err(Error::MixedFields);
            }
            let target = decode_msc(f, &t.json)?.map::<F>(&emb);
            mat2_inv(&k, &m).is_ok() && transform(&k, &lifted, &BasisChange::new(&k, m.clone())?) == target
        }
    };
    Ok(Output::ok(json!({
        "mode": mode.split(':').next().unwrap_or(mode),
        "holds": holds,
        "field": k.descriptor().to_json(),
    })))
}
