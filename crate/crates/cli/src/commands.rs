use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use fatpoint::cohomology::{hilbert_function, profile, FatPointScheme, PointModel};
use fatpoint::cremona::{certify_orbit, orbit_bounded};
use fatpoint::lattice::DivisorClass;
use fatpoint::maxrank::{
    classify, conjectural_uniform_bounds, odd_convergents, pell_solutions, umrp_status, BoundsVerdict,
};
use fatpoint::oracle::{betti_by_oracle, verify_report, OracleConfig};
use fatpoint::resolution::betti_table;
use fatpoint::Error;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Command, OracleArgs, Order, OutputArgs, SchemeArgs};
use crate::output::{cached, canonical, csv_text, envelope};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Lib(Error),
    /// Rendered output of a verification that did not agree.
    Mismatch(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<String, Failure>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

fn format(out: &OutputArgs, csv_allowed: bool) -> Result<Format, Failure> {
    if out.csv && !csv_allowed {
        return Err(Failure::Usage("--csv is only available for `scan` and `verify`".into()));
    }
    Ok(if out.json {
        Format::Json
    } else if out.csv {
        Format::Csv
    } else {
        Format::Text
    })
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn scheme(args: &SchemeArgs) -> Result<FatPointScheme, Failure> {
    let mults = match (&args.mults, args.m) {
        (Some(m), _) => {
            if let Some(r) = args.r {
                if r != m.len() {
                    return Err(Failure::Usage(format!("-r {r} disagrees with {} multiplicities", m.len())));
                }
            }
            m.clone()
        }
        (None, Some(m)) => {
            let r = args.r.ok_or_else(|| Failure::Usage("-m needs -r".into()))?;
            vec![m; r]
        }
        (None, None) => return Err(Failure::Usage("give -r with -m, or --mults".into())),
    };
    let model = model_for(mults.len(), args.order)?;
    Ok(FatPointScheme::new(mults, model)?)
}

fn model_for(r: usize, order: Option<Order>) -> Result<PointModel, Failure> {
    if order.is_some() && r != 9 {
        return Err(Error::domain(format!("--order only applies to nine points, got r = {r}")).into());
    }
    Ok(PointModel::for_points(r, order.and_then(Order::as_option)))
}

fn oracle_config(args: &OracleArgs) -> OracleConfig {
    let d = OracleConfig::default();
    OracleConfig {
        prime: args.prime.unwrap_or(d.prime),
        seed: args.seed.unwrap_or(d.seed),
        max_degree: args.max_degree.unwrap_or(d.max_degree),
        resample_limit: d.resample_limit,
    }
}

/// Shared tail of every command: cache lookup, envelope, rendering.
fn finish(
    command: &str,
    inputs: Value,
    conjectural: bool,
    out: &OutputArgs,
    fmt: Format,
    compute: impl FnOnce() -> Result<Value, Failure>,
    render: impl FnOnce(&Value, Format) -> String,
) -> Result<(String, Value), Failure> {
    let (result, hit, elapsed) = cached(out.cache.as_deref().map(Path::new), command, &inputs, compute).map_err(Failure::Io)??;
    let text = match fmt {
        Format::Json => {
            let env = envelope(command, &inputs, result.clone(), conjectural, elapsed, hit);
            format!("{}\n", canonical(&env))
        }
        _ => render(&result, fmt),
    };
    Ok((text, result))
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Hilbert { scheme: s, degrees, out } => hilbert(&s, degrees, &out),
        Command::Betti { scheme: s, oracle, oracle_cfg, out } => betti(&s, oracle, &oracle_cfg, &out),
        Command::Maxrank { scheme: s, out } => maxrank(&s, &out),
        Command::Scan { r, m_max, order, out } => scan(r, m_max, order, &out),
        Command::Orbit { seed, bound, certify, order, out } => orbit(&seed, &bound, certify, order, &out),
        Command::Pell { r, count, out } => pell(r, count, &out),
        Command::Convergents { c, a, count, out } => convergents(c, a, count, &out),
        Command::Verify { scheme: s, oracle_cfg, out } => verify(&s, &oracle_cfg, &out),
    }
}

fn scheme_inputs(z: &FatPointScheme) -> Value {
    json!({ "mults": z.mults(), "model": value(&z.model()) })
}

fn int(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Entries of a JSON object keyed by integers, in numeric order.
fn by_degree(v: &Value) -> Vec<(i64, &Value)> {
    let mut out: Vec<(i64, &Value)> = v
        .as_object()
        .map(|m| m.iter().filter_map(|(k, x)| k.parse().ok().map(|k| (k, x))).collect())
        .unwrap_or_default();
    out.sort_by_key(|(k, _)| *k);
    out
}

fn degree_line(v: &Value) -> String {
    let parts: Vec<String> = by_degree(v).into_iter().map(|(k, x)| format!("{k}:{}", int(x))).collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(" ")
    }
}

fn hilbert(args: &SchemeArgs, degrees: Option<(i64, i64)>, out: &OutputArgs) -> Outcome {
    let fmt = format(out, false)?;
    let z = scheme(args)?;
    let mut inputs = scheme_inputs(&z);
    if let Some((a, b)) = degrees {
        inputs["degrees"] = json!([a, b]);
    }
    let conj = z.is_conjectural();
    let compute = || -> Result<Value, Failure> {
        let p = profile(&z)?;
        let (lo, hi) = degrees.unwrap_or((p.alpha - 1, p.tau + 2));
        let mut values = BTreeMap::new();
        for d in lo..=hi {
            values.insert(d, hilbert_function(&z, d)?);
        }
        let mut v = value(&p);
        v["values"] = value(&values);
        Ok(v)
    };
    let render = |v: &Value, _| {
        let mut s = String::new();
        let _ = writeln!(s, "alpha {}  beta {}  tau {}  regularity {}", v["alpha"], v["beta"], v["tau"], v["regularity"]);
        for (d, h) in by_degree(&v["values"]) {
            let _ = writeln!(s, "{d:>8} {}", int(h));
        }
        s
    };
    finish("hilbert", inputs, conj, out, fmt, compute, render).map(|(t, _)| t)
}

fn betti(args: &SchemeArgs, use_oracle: bool, oracle_args: &OracleArgs, out: &OutputArgs) -> Outcome {
    let fmt = format(out, false)?;
    let z = scheme(args)?;
    let mut inputs = scheme_inputs(&z);
    let cfg = oracle_config(oracle_args);
    if use_oracle {
        inputs["oracle"] = value(&cfg);
    }
    let conj = z.is_conjectural();
    let compute = || -> Result<Value, Failure> {
        let (table, source) = match betti_table(&z) {
            Ok(t) => (t, "closed_form"),
            Err(Error::ClosedFormGap(_)) if use_oracle => (betti_by_oracle(&z, &cfg)?, "oracle"),
            Err(e) => return Err(e.into()),
        };
        let mut v = value(&table);
        v["source"] = json!(source);
        Ok(v)
    };
    let render = |v: &Value, _| {
        let mut s = String::new();
        let _ = writeln!(s, "generators  {}", degree_line(&v["generators"]));
        let _ = writeln!(s, "syzygies    {}", degree_line(&v["syzygies"]));
        let _ = writeln!(s, "alpha {}  beta {}  regularity {}  source {}", v["alpha"], v["beta"], v["regularity"], int(&v["source"]));
        s
    };
    finish("betti", inputs, conj, out, fmt, compute, render).map(|(t, _)| t)
}

fn maxrank(args: &SchemeArgs, out: &OutputArgs) -> Outcome {
    let fmt = format(out, false)?;
    let z = scheme(args)?;
    let inputs = scheme_inputs(&z);
    let conj = z.is_conjectural();
    let compute = || -> Result<Value, Failure> { Ok(value(&classify(&z)?)) };
    let render = |v: &Value, _| {
        let mut s = String::new();
        for (t, e) in by_degree(&v["per_degree"]) {
            let _ = writeln!(s, "{t:>8}  R {:>6}  S {:>6}  {}", int(&e["R"]), int(&e["S"]), int(&e["status"]));
        }
        let verdict = if v["has_mrp"] == json!(true) { "maximal rank in every degree" } else { "maximal rank fails" };
        let _ = writeln!(s, "{verdict}");
        s
    };
    finish("maxrank", inputs, conj, out, fmt, compute, render).map(|(t, _)| t)
}

fn scan(r: usize, m_max: i64, order: Option<Order>, out: &OutputArgs) -> Outcome {
    let fmt = format(out, true)?;
    if r == 0 || m_max < 1 {
        return Err(Error::domain("need r ≥ 1 and --m-max ≥ 1").into());
    }
    let model = model_for(r, order)?;
    let inputs = json!({ "r": r, "m_max": m_max, "model": value(&model) });
    let conj = r >= 10;
    let compute = || -> Result<Value, Failure> {
        if r < 10 {
            return Ok(value(&umrp_status(r, m_max, &model)?));
        }
        let rows = (1..=m_max).map(|m| conjectural_uniform_bounds(r, m)).collect::<Result<Vec<_>, _>>()?;
        let count = |k: BoundsVerdict| rows.iter().filter(|b| b.verdict == k).count();
        Ok(json!({
            "r": r,
            "m_max": m_max,
            "bounds": value(&rows),
            "frequencies": {
                "trivial": count(BoundsVerdict::Trivial),
                "forced": count(BoundsVerdict::Forced),
                "undetermined": count(BoundsVerdict::Undetermined),
            },
            "conjectural": true,
        }))
    };
    let render = |v: &Value, fmt| {
        if r < 10 {
            let rows: Vec<Vec<String>> = v["failures"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|f| ["m", "degree", "alpha", "beta", "kind"].iter().map(|k| int(&f[*k])).collect())
                .collect();
            if fmt == Format::Csv {
                return csv_text(&["m", "degree", "alpha", "beta", "kind"], &rows);
            }
            let mut s = String::new();
            for row in &rows {
                let _ = writeln!(s, "m {:>4}  degree {:>5}  alpha {:>5}  beta {:>5}  {}", row[0], row[1], row[2], row[3], row[4]);
            }
            let _ = writeln!(s, "{} failures; umrp {}; restricted umrp {}", rows.len(), v["umrp"], v["restricted_umrp"]);
            return s;
        }
        let keys = ["m", "alpha", "h", "l1", "q1", "lower", "upper", "verdict"];
        let rows: Vec<Vec<String>> = v["bounds"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|b| keys.iter().map(|k| int(&b[*k])).collect())
            .collect();
        if fmt == Format::Csv {
            return csv_text(&keys, &rows);
        }
        let mut s = String::new();
        for row in &rows {
            let _ = writeln!(s, "{}", row.join("\t"));
        }
        let f = &v["frequencies"];
        let _ = writeln!(s, "trivial {}  forced {}  undetermined {}  (conjectural)", f["trivial"], f["forced"], f["undetermined"]);
        s
    };
    finish("scan", inputs, conj, out, fmt, compute, render).map(|(t, _)| t)
}

fn orbit(seed: &str, bound: &str, certify: bool, order: Option<Order>, out: &OutputArgs) -> Outcome {
    let fmt = format(out, false)?;
    let g: DivisorClass = seed.parse()?;
    let bound: BigInt = bound
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("--bound expects an integer, got `{bound}`")))?;
    let model = model_for(g.r(), order)?;
    let inputs = json!({ "seed": value(&g), "bound": bound.to_string(), "certify": certify, "model": value(&model) });
    let conj = g.r() >= 10;
    let compute = || -> Result<Value, Failure> {
        if certify {
            let c = certify_orbit(&g, &bound, &model)?;
            let mut v = value(&c);
            v["uncertified_fraction"] = json!(format!("{}/{}", c.exceptions.len(), c.elements.len()));
            Ok(v)
        } else {
            Ok(value(&orbit_bounded(&g, &bound, &model)?))
        }
    };
    let render = |v: &Value, _| {
        let mut s = String::new();
        for e in v["elements"].as_array().into_iter().flatten() {
            let class: DivisorClass = serde_json::from_value(e["class"].clone()).expect("classes round-trip");
            let word: Vec<String> = e["word"].as_array().into_iter().flatten().map(int).collect();
            let cert = match e.get("certificate") {
                Some(Value::Null) => "  no certificate".to_string(),
                Some(i) => format!("  certificate {}", int(i)),
                None => String::new(),
            };
            let _ = writeln!(s, "{class}  [{}]{cert}", word.join(" "));
        }
        let n = v["elements"].as_array().map_or(0, Vec::len);
        let _ = writeln!(s, "{n} classes");
        s
    };
    finish("orbit", inputs, conj, out, fmt, compute, render).map(|(t, _)| t)
}

fn pell(r: u64, count: usize, out: &OutputArgs) -> Outcome {
    let fmt = format(out, false)?;
    let inputs = json!({ "r": r, "count": count });
    let compute = || -> Result<Value, Failure> {
        let sols = pell_solutions(r, count)?;
        let rows: Vec<Value> = sols
            .iter()
            .map(|(b, m)| json!({ "b": big(b), "m": big(m) }))
            .collect();
        Ok(Value::Array(rows))
    };
    let render = |v: &Value, _| {
        let mut s = String::new();
        for x in v.as_array().into_iter().flatten() {
            let _ = writeln!(s, "{} {}", int(&x["b"]), int(&x["m"]));
        }
        s
    };
    finish("pell", inputs, r >= 10, out, fmt, compute, render).map(|(t, _)| t)
}

fn big(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse().expect("integers are JSON numbers"))
}

fn convergents(c: u64, a: u64, count: usize, out: &OutputArgs) -> Outcome {
    let fmt = format(out, false)?;
    let inputs = json!({ "c": c, "a": a, "count": count });
    let r = (c as u128 * a as u128).pow(2) + 4 * (c as u128).pow(2);
    let compute = || -> Result<Value, Failure> {
        let v = odd_convergents(c, a, count)?;
        Ok(json!({ "r": r.to_string().parse::<serde_json::Number>().expect("integer"), "convergents": value(&v) }))
    };
    let render = |v: &Value, _| {
        let mut s = String::new();
        let _ = writeln!(s, "r = {}", int(&v["r"]));
        for x in v["convergents"].as_array().into_iter().flatten() {
            let _ = writeln!(s, "#{:<4} {}/{}", int(&x["index"]), int(&x["p"]), int(&x["q"]));
        }
        s
    };
    finish("convergents", inputs, r >= 10, out, fmt, compute, render).map(|(t, _)| t)
}

fn verify(args: &SchemeArgs, oracle_args: &OracleArgs, out: &OutputArgs) -> Outcome {
    let fmt = format(out, true)?;
    let z = scheme(args)?;
    let cfg = oracle_config(oracle_args);
    let mut inputs = scheme_inputs(&z);
    inputs["oracle"] = value(&cfg);
    let conj = z.is_conjectural();
    let compute = || -> Result<Value, Failure> { Ok(value(&verify_report(&z, &cfg)?)) };
    let render = |v: &Value, fmt| {
        let keys = ["dim", "nu", "kernel", "cokernel"];
        let rows: Vec<Vec<String>> = v["rows"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|row| {
                let mut cells = vec![int(&row["degree"])];
                for k in keys {
                    cells.push(int(&row["closed"][k]));
                    cells.push(int(&row["oracle"][k]));
                }
                cells.push(int(&row["match"]));
                cells
            })
            .collect();
        let header = [
            "degree", "closed_dim", "oracle_dim", "closed_nu", "oracle_nu", "closed_kernel", "oracle_kernel",
            "closed_cokernel", "oracle_cokernel", "match",
        ];
        if fmt == Format::Csv {
            return csv_text(&header, &rows);
        }
        let mut s = String::new();
        let _ = writeln!(s, "{}", header.join("\t"));
        for row in &rows {
            let _ = writeln!(s, "{}", row.join("\t"));
        }
        let _ = writeln!(s, "matched {} after {} attempt(s)", v["matched"], v["attempts"]);
        s
    };
    let (text, result) = finish("verify", inputs, conj, out, fmt, compute, render)?;
    if result["matched"] == json!(true) {
        Ok(text)
    } else {
        Err(Failure::Mismatch(text))
    }
}
