use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use mzv_core::cellzeta::{self, format_class, format_monomial, parse_mzv_product, Reducer};
use mzv_core::combo::QCombo;
use mzv_core::depthgraded::{build_m, depth_graded_dims, depth_two_reduction};
use mzv_core::insertion::{dim_delta, dim_delta_formula, insertion_basis, words_to_forms};
use mzv_core::linalg::{q_to_string, QMatrix, QRational};
use mzv_core::partialcohom::{basis_rank, case_formula, classify, cohom_basis, describe_sides, parse_divisors};
use mzv_core::picard::{expand, format_expansion, Divisor, Order};
use mzv_core::polygons::{format_forms, rewrite_01, PolySum};
use mzv_core::verify::{run_all, run_check, Level};
use mzv_core::words::{format_poly, parse_poly_xy, parse_poly_y, shuffle_poly, stuffle_poly, IntComposition, WordY};

const SCHEMA_VERSION: u32 = 1;
const DEFAULT_SEED: u64 = 42;
const OUTPUT_DIR_VAR: &str = "MZV_OUTPUT_DIR";

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("invalid value for {flag}: {reason}")]
    Usage { flag: &'static str, reason: String },
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn domain(e: impl std::fmt::Display) -> Self {
        CliError::Domain(e.to_string())
    }

    fn usage(flag: &'static str, e: impl std::fmt::Display) -> Self {
        CliError::Usage { flag, reason: e.to_string() }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Parser, Debug)]
#[command(name = "mzv", version, about = "Exact computations with multizeta values and moduli space cell forms")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output to this file instead of stdout (relative paths are
    /// resolved against $MZV_OUTPUT_DIR when set).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shuffle product of two polynomials in x, y (e.g. "xy", "2*xxy - yx").
    Shuffle {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Stuffle product of two polynomials in the y_i (e.g. "y2 y1", "y3").
    Stuffle {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Dimensions of the depth 1 and depth 2 graded pieces in a weight.
    DepthDims {
        #[arg(long)]
        weight: u32,
        /// Include the matrix M in the output.
        #[arg(long)]
        matrix: bool,
    },
    /// Depth-two reduction coefficient for indices i, j.
    Depth2Coeff {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
    /// Insertion basis of the convergent forms on M_{0,n}.
    InsertionBasis {
        #[arg(long)]
        n: usize,
    },
    /// Dimension of the convergent forms on M_{0,n}, by enumeration and by formula.
    DimDelta {
        #[arg(long)]
        n: usize,
    },
    /// Reduce the formal cell-zeta values of weight n - 3.
    Reduce {
        #[arg(long)]
        n: usize,
        /// Also write the reduction as JSON to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Compare two multizeta expressions ("2,1", "2*2") in the formal algebra.
    Identity {
        #[arg(long)]
        mzv: String,
        #[arg(long)]
        against: String,
    },
    /// Monte Carlo integral of a multizeta form compared with the series value.
    Numeric {
        #[arg(long, default_value = "2,1")]
        mzv: String,
        /// Expression for the expected value (defaults to the form's own value).
        #[arg(long)]
        against: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Cohomology of a partial compactification (divisors "t1=t2;t3=inf" or "delta").
    PartialDim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        divisors: String,
        /// Omit the basis forms from the output.
        #[arg(long)]
        no_basis: bool,
    },
    /// Expand a boundary divisor in the non-adjacent basis of a dihedral order.
    PicExpand {
        #[arg(long)]
        n: usize,
        /// Dihedral order of 1..n (defaults to 1,2,...,n).
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        divisor: String,
    },
    /// Run the numbered reference checks.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
        /// Run only this check.
        #[arg(long)]
        only: Option<u32>,
    },
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Self { text, json, ok: true }
    }
}

fn rat(x: &QRational) -> Value {
    Value::String(q_to_string(x))
}

fn combo_json<T: Ord + Clone>(c: &QCombo<T>, key: impl Fn(&T) -> String) -> Value {
    let map: serde_json::Map<String, Value> = c.iter().map(|(k, v)| (key(k), rat(v))).collect();
    Value::Object(map)
}

fn forms_json(form: &PolySum, n: usize) -> Value {
    Value::Array(
        form.iter()
            .map(|(p, c)| {
                let labels: Vec<String> = p.labels().iter().map(|&l| mzv_core::polygons::label_name(l, n)).collect();
                json!({ "polygon": labels, "coeff": rat(c) })
            })
            .collect(),
    )
}

fn matrix_json(m: &QMatrix) -> Value {
    Value::Array(m.to_dense().iter().map(|row| Value::Array(row.iter().map(rat).collect())).collect())
}

fn with_header(command: &str, body: Value) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command));
    if let Value::Object(b) = body {
        map.extend(b);
    }
    Value::Object(map)
}

fn resolve(path: &PathBuf) -> PathBuf {
    if path.is_absolute() {
        return path.clone();
    }
    match std::env::var_os(OUTPUT_DIR_VAR) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<PathBuf, CliError> {
    let path = resolve(path);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| CliError::Io { path: parent.display().to_string(), source })?;
    }
    fs::write(&path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(path)
}

fn shuffle_cmd(a: &str, b: &str) -> Result<Output, CliError> {
    let pa = parse_poly_xy(a).map_err(|e| CliError::usage("--a", e))?;
    let pb = parse_poly_xy(b).map_err(|e| CliError::usage("--b", e))?;
    let r = shuffle_poly(&pa, &pb);
    let text = format_poly(&r);
    Ok(Output::new(text.clone(), json!({ "a": a, "b": b, "product": text, "terms": combo_json(&r, |w| w.to_string()) })))
}

fn stuffle_cmd(a: &str, b: &str) -> Result<Output, CliError> {
    let to_comp = |p: QCombo<WordY>| p.map_keys(|w| IntComposition(w.0.clone()));
    let pa = to_comp(parse_poly_y(a).map_err(|e| CliError::usage("--a", e))?);
    let pb = to_comp(parse_poly_y(b).map_err(|e| CliError::usage("--b", e))?);
    let r = stuffle_poly(&pa, &pb).map_keys(|k| WordY::from(k));
    let text = format_poly(&r);
    Ok(Output::new(text.clone(), json!({ "a": a, "b": b, "product": text, "terms": combo_json(&r, |w| w.to_string()) })))
}

fn depth_dims_cmd(weight: u32, matrix: bool) -> Result<Output, CliError> {
    let d = depth_graded_dims(weight).map_err(CliError::domain)?;
    let mut text = format!("({}, {})", d.d1, d.d2);
    let mut body = json!({ "weight": weight, "depth1": d.d1, "depth2": d.d2 });
    if matrix {
        let m = build_m(weight);
        for row in m.to_dense() {
            text.push('\n');
            text.push_str(&row.iter().map(q_to_string).collect::<Vec<_>>().join(" "));
        }
        body["matrix_m"] = matrix_json(&m);
    }
    Ok(Output::new(text, body))
}

fn depth2_cmd(i: u32, j: u32) -> Result<Output, CliError> {
    let v = depth_two_reduction(i, j).map_err(CliError::domain)?;
    Ok(Output::new(q_to_string(&v), json!({ "i": i, "j": j, "coefficient": rat(&v) })))
}

fn check_n(n: usize, lo: usize, hi: usize) -> Result<(), CliError> {
    if n < lo || n > hi {
        return Err(CliError::usage("--n", format!("{n} is outside {lo}..={hi}")));
    }
    Ok(())
}

fn insertion_cmd(n: usize) -> Result<Output, CliError> {
    check_n(n, 4, 10)?;
    let basis = insertion_basis(n);
    let mut text = String::new();
    let mut elements = Vec::new();
    for (i, e) in basis.iter().enumerate() {
        let words = e.expand();
        let form = rewrite_01(&words_to_forms(&words, n - 1), n);
        text.push_str(&format!("{i}: {} = {}\n", e.expr, format_forms(&form, n)));
        elements.push(json!({
            "index": i,
            "expr": e.expr.to_string(),
            "words": combo_json(&words, |w| w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")),
            "form": forms_json(&form, n),
        }));
    }
    text.push_str(&format!("dimension {}", basis.len()));
    Ok(Output::new(text, json!({ "n": n, "dim": basis.len(), "basis": elements })))
}

fn dim_delta_cmd(n: usize) -> Result<Output, CliError> {
    check_n(n, 4, 10)?;
    let d = dim_delta(n);
    let f = dim_delta_formula(n);
    let mut out = Output::new(d.to_string(), json!({ "n": n, "dim": d, "formula": f.to_string() }));
    if f != d.into() {
        out.ok = false;
        out.text.push_str(&format!(" (formula gives {f})"));
    }
    Ok(out)
}

fn reduce_cmd(n: usize, emit: Option<&PathBuf>) -> Result<Output, CliError> {
    check_n(n, 5, 9)?;
    let mut reducer = Reducer::new();
    reducer.reduce(n).map_err(CliError::domain)?;
    let mut lower = BTreeMap::new();
    for m in 5..=n {
        let r = reducer.reduce(m).map_err(CliError::domain)?;
        lower.insert(m, r.insertion.iter().map(|e| e.expr.to_string()).collect::<Vec<_>>());
    }
    let red = reducer.reduce(n).map_err(CliError::domain)?;
    let generator = |(m, i): &(usize, usize)| -> Value {
        json!({ "name": format!("P{m}_{i}"), "n": m, "index": i, "expr": lower[m][*i] })
    };
    let basis: Vec<Value> = red
        .basis
        .iter()
        .map(|mono| json!({ "monomial": format_monomial(mono), "factors": mono.iter().map(generator).collect::<Vec<_>>() }))
        .collect();
    let table: Vec<Value> = red
        .insertion
        .iter()
        .enumerate()
        .map(|(i, e)| {
            json!({
                "index": i,
                "name": format!("P{n}_{i}"),
                "expr": e.expr.to_string(),
                "form": forms_json(&red.forms[i], n),
                "class": combo_json(&red.table[i], format_monomial),
            })
        })
        .collect();
    let body = json!({
        "n": n,
        "weight": n - 3,
        "dim": red.dim,
        "basis": basis,
        "table": table,
        "relations": {
            "dihedral": red.dihedral_relations,
            "product": red.product_relations,
            "product_types": red.product_types,
        },
    });
    let mut text = format!(
        "weight {} (n = {n}): dimension {}\nbasis: {}\nrelations: {} dihedral, {} product ({} product maps)\n",
        n - 3,
        red.dim,
        red.basis.iter().map(format_monomial).collect::<Vec<_>>().join(", "),
        red.dihedral_relations,
        red.product_relations,
        red.product_types
    );
    for (i, e) in red.insertion.iter().enumerate() {
        text.push_str(&format!("P{n}_{i} = {}   [{}]\n", format_class(&red.table[i]), e.expr));
    }
    if let Some(path) = emit {
        let doc = with_header("reduce", body.clone());
        let written = write_file(path, &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"))?;
        text.push_str(&format!("wrote {}", written.display()));
    }
    Ok(Output::new(text.trim_end().to_string(), body))
}

fn parse_expr(flag: &'static str, s: &str) -> Result<Vec<IntComposition>, CliError> {
    parse_mzv_product(s).map_err(|e| match e {
        cellzeta::CellZetaError::DivergentComposition(_) => CliError::domain(e),
        other => CliError::usage(flag, other),
    })
}

fn expr_name(ks: &[IntComposition]) -> String {
    ks.iter().map(|k| format!("zeta{k}")).collect::<Vec<_>>().join("*")
}

fn identity_cmd(mzv: &str, against: &str) -> Result<Output, CliError> {
    let lhs = parse_expr("--mzv", mzv)?;
    let rhs = parse_expr("--against", against)?;
    let wl: u32 = lhs.iter().map(IntComposition::weight).sum();
    let wr: u32 = rhs.iter().map(IntComposition::weight).sum();
    if wl != wr {
        return Err(CliError::Domain(format!("weights differ ({wl} and {wr})")));
    }
    let mut reducer = Reducer::new();
    let ratio = reducer.identity_ratio(&lhs, &rhs).map_err(CliError::domain)?;
    let a = reducer.mzv_class(&lhs).map_err(CliError::domain)?;
    let b = reducer.mzv_class(&rhs).map_err(CliError::domain)?;
    let text = match &ratio {
        Some(r) => format!("{} = {} * {}", expr_name(&lhs), q_to_string(r), expr_name(&rhs)),
        None => format!("{} and {} are independent in weight {wl}", expr_name(&lhs), expr_name(&rhs)),
    };
    Ok(Output::new(
        text,
        json!({
            "mzv": mzv,
            "against": against,
            "weight": wl,
            "ratio": ratio.as_ref().map(rat),
            "class_mzv": combo_json(&a, format_monomial),
            "class_against": combo_json(&b, format_monomial),
        }),
    ))
}

fn numeric_cmd(mzv: &str, against: Option<&str>, samples: usize, seed: u64) -> Result<Output, CliError> {
    let ks = parse_expr("--mzv", mzv)?;
    if ks.len() != 1 {
        return Err(CliError::usage("--mzv", "expected a single composition"));
    }
    let against = against.unwrap_or(mzv);
    let rhs = parse_expr("--against", against)?;
    let form = cellzeta::mzv_form(&ks[0]).map_err(CliError::domain)?;
    let expected = cellzeta::zeta_product_value(&rhs).map_err(CliError::domain)?;
    let v = cellzeta::numeric_check(&form, expected, samples, seed).map_err(CliError::domain)?;
    let mut out = Output::new(
        format!("{}: {v}", expr_name(&ks)),
        json!({
            "mzv": mzv,
            "against": against,
            "samples": samples,
            "seed": seed,
            "estimate": v.estimate,
            "std_error": v.std_error,
            "expected": v.expected,
            "verdict": if v.pass { "PASS" } else { "FAIL" },
        }),
    );
    out.ok = v.pass;
    Ok(out)
}

fn partial_cmd(n: usize, divisors: &str, no_basis: bool) -> Result<Output, CliError> {
    check_n(n, 4, 8)?;
    let sides = parse_divisors(divisors, n).map_err(|e| CliError::usage("--divisors", e))?;
    let set = classify(n, &sides).map_err(CliError::domain)?;
    let basis = cohom_basis(&set).map_err(CliError::domain)?;
    let rank = basis_rank(n, &basis);
    let formula = case_formula(&set);
    let mut text = format!(
        "{} on M_0,{n} ({:?}): dimension {}, rank {rank}, formula {}\n",
        describe_sides(n, &set.sides),
        set.kind,
        basis.len(),
        formula.as_ref().map_or("none".to_string(), |f| f.to_string())
    );
    let mut elements = Vec::new();
    if !no_basis {
        for el in &basis {
            text.push_str(&format!("{} {}: {}\n", el.family, el.description, format_forms(&el.form, n)));
            elements.push(json!({ "family": el.family, "description": el.description, "form": forms_json(&el.form, n) }));
        }
    }
    let mut out = Output::new(
        text.trim_end().to_string(),
        json!({
            "n": n,
            "divisors": describe_sides(n, &set.sides),
            "kind": format!("{:?}", set.kind),
            "dim": basis.len(),
            "rank": rank,
            "formula": formula.map(|f| f.to_string()),
            "basis": elements,
        }),
    );
    out.ok = rank == basis.len();
    Ok(out)
}

fn parse_points(flag: &'static str, s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',').map(|p| p.trim().parse::<usize>().map_err(|e| CliError::usage(flag, format!("{p:?}: {e}")))).collect()
}

fn pic_cmd(n: usize, order: Option<&str>, divisor: &str) -> Result<Output, CliError> {
    check_n(n, 4, 12)?;
    let order = match order {
        Some(s) => Order::new(parse_points("--order", s)?).map_err(|e| CliError::usage("--order", e))?,
        None => Order::standard(n),
    };
    if order.n() != n {
        return Err(CliError::usage("--order", format!("expected {n} points")));
    }
    let d = Divisor::from_points(&parse_points("--divisor", divisor)?, n).map_err(|e| CliError::usage("--divisor", e))?;
    let e = expand(&d, &order);
    let text = format!("{d} = {}", format_expansion(&e));
    let terms: Vec<Value> = e.iter().map(|(k, c)| json!({ "divisor": k.points(), "coeff": rat(c) })).collect();
    Ok(Output::new(
        text.clone(),
        json!({ "n": n, "order": order.0, "divisor": d.points(), "expansion": terms, "text": text }),
    ))
}

fn verify_cmd(level: VerifyLevel, only: Option<u32>) -> Result<Output, CliError> {
    let level = match level {
        VerifyLevel::Quick => Level::Quick,
        VerifyLevel::Full => Level::Full,
    };
    let outcomes = match only {
        Some(id) if (1..=13).contains(&id) => vec![run_check(id, level)],
        Some(id) => return Err(CliError::usage("--only", format!("no check numbered {id}"))),
        None => run_all(level),
    };
    let text = outcomes.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("\n");
    let ok = outcomes.iter().all(|o| o.pass || o.skipped);
    let items: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "id": o.id, "title": o.title, "pass": o.pass, "skipped": o.skipped, "detail": o.detail }))
        .collect();
    let mut out = Output::new(text, json!({ "level": level, "checks": items, "all_pass": ok }));
    out.ok = ok;
    Ok(out)
}

fn dispatch(cli: &Cli) -> Result<(String, Output), CliError> {
    let (name, out) = match &cli.command {
        Command::Shuffle { a, b } => ("shuffle", shuffle_cmd(a, b)?),
        Command::Stuffle { a, b } => ("stuffle", stuffle_cmd(a, b)?),
        Command::DepthDims { weight, matrix } => ("depth-dims", depth_dims_cmd(*weight, *matrix)?),
        Command::Depth2Coeff { i, j } => ("depth2-coeff", depth2_cmd(*i, *j)?),
        Command::InsertionBasis { n } => ("insertion-basis", insertion_cmd(*n)?),
        Command::DimDelta { n } => ("dim-delta", dim_delta_cmd(*n)?),
        Command::Reduce { n, emit } => ("reduce", reduce_cmd(*n, emit.as_ref())?),
        Command::Identity { mzv, against } => ("identity", identity_cmd(mzv, against)?),
        Command::Numeric { mzv, against, samples, seed } => ("numeric", numeric_cmd(mzv, against.as_deref(), *samples, *seed)?),
        Command::PartialDim { n, divisors, no_basis } => ("partial-dim", partial_cmd(*n, divisors, *no_basis)?),
        Command::PicExpand { n, order, divisor } => ("pic-expand", pic_cmd(*n, order.as_deref(), divisor)?),
        Command::VerifyAll { level, only } => ("verify-all", verify_cmd(*level, *only)?),
    };
    Ok((name.to_string(), out))
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let (name, out) = dispatch(cli)?;
    let rendered = match cli.format {
        Format::Text => out.text + "\n",
        Format::Json => serde_json::to_string_pretty(&with_header(&name, out.json)).expect("serializable") + "\n",
    };
    match &cli.output {
        Some(path) => {
            write_file(path, &rendered)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.as_bytes())
                .map_err(|source| CliError::Io { path: "stdout".into(), source })?;
        }
    }
    Ok(out.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
