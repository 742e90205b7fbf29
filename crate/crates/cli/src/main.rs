use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ltconj::acceptance;
use ltconj::classify::{decide, decide_elements, ConjugacyMode};
use ltconj::covering::Covering;
use ltconj::exact::{parse_rational, AngleValue};
use ltconj::group::{recognize_angle, reduce::reduction_defect, reduce_to_torus, torus_element, GroupElement, GroupId, RotationVector};
use ltconj::orbit::{classify_orbit_closure, count_components, sample_orbit};
use ltconj::witness::{normalize_witness, torus_witness, verify_conjugacy, Witness};
use ltconj::{IrrationalBasis, Status, Verdict};

#[derive(Parser)]
#[command(name = "ltconj", version, about = "Conjugacy of left translations on SU2, U2, SO3, SO3xS1 and SpinC3")]
struct Cli {
    /// JSON file declaring the irrational symbols and their values.
    #[arg(long, global = true)]
    basis: Option<PathBuf>,
    #[arg(long, global = true, default_value = "0x5EED", value_parser = parse_seed)]
    seed: u64,
    /// Exit with status 3 when a verdict is Unknown.
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Read plain numbers in angle lists as floats and recognise them.
    #[arg(long, global = true)]
    numeric: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide conjugacy of two translations, given by rotation vectors or elements.
    Classify {
        #[arg(long)]
        group: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rho_prime: Option<String>,
        #[arg(long)]
        element: Option<String>,
        #[arg(long)]
        element_prime: Option<String>,
        /// topological, smooth, algebraic or all.
        #[arg(long, default_value = "topological")]
        mode: String,
    },
    /// Conjugate an element into the maximal torus.
    Reduce {
        #[arg(long)]
        element: String,
    },
    /// Build a conjugating homeomorphism of torus translations.
    Witness {
        #[arg(long)]
        group: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[arg(long, allow_hyphen_values = true)]
        rho_prime: String,
        /// Check the witness on this many Haar samples.
        #[arg(long)]
        verify: Option<usize>,
        /// Fix the identity by a right translation.
        #[arg(long)]
        normalize: bool,
    },
    /// Orbit closure of the identity, optionally with the clustering oracle.
    Orbit {
        #[arg(long)]
        group: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
        #[arg(long)]
        emit_points: Option<PathBuf>,
    },
    /// Rotation vectors of all lifts through a covering.
    Lift {
        #[arg(long)]
        covering: String,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
    },
    /// Image of an element under a covering.
    Project {
        #[arg(long)]
        covering: String,
        #[arg(long)]
        element: String,
    },
    /// Maximum conjugacy defect of the built witness.
    Verify {
        #[arg(long)]
        group: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[arg(long, allow_hyphen_values = true)]
        rho_prime: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Selftest,
}

/// Failure with its exit status.
enum Failure {
    Invalid(anyhow::Error),
    Runtime(anyhow::Error),
}

type Res<T> = Result<T, Failure>;

fn invalid(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Invalid(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed `{s}`: {e}"))
}

struct Session {
    basis: IrrationalBasis,
    seed: u64,
    numeric: bool,
}

/// Inline JSON or `@path`.
fn read_arg(s: &str) -> Res<String> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("cannot read `{path}`")).map_err(invalid),
        None => Ok(s.to_string()),
    }
}

fn parse_json(s: &str) -> Res<Value> {
    serde_json::from_str(s).map_err(|e| invalid(anyhow!("malformed JSON: {e}")))
}

fn parse_group(s: &str) -> Res<GroupId> {
    s.parse().map_err(invalid)
}

/// One angle written as `1/4 + 2*alpha - beta/3`, or a plain number.
fn parse_expression(s: &str, numeric: bool) -> Res<AngleValue> {
    let s = s.trim();
    if numeric {
        if let Ok(x) = s.parse::<f64>() {
            return Ok(recognize_angle(x.rem_euclid(1.0)));
        }
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 && !s[..i].trim_end().ends_with(['*', '/']) {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut total = AngleValue::zero();
    for t in terms {
        let t: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, t.trim_start_matches('+').to_string()),
        };
        if body.is_empty() {
            return Err(invalid(anyhow!("malformed angle `{s}`")));
        }
        let term = match body.find(|c: char| c.is_ascii_alphabetic() || c == '_') {
            None => AngleValue::from_rational(parse_rational(&body).map_err(invalid)?),
            Some(pos) => {
                let coef = body[..pos].trim_end_matches('*');
                let rest = &body[pos..];
                let (sym, div) = match rest.split_once('/') {
                    Some((a, b)) => (a, Some(b)),
                    None => (rest, None),
                };
                if !sym.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(invalid(anyhow!("malformed angle `{s}`")));
                }
                let mut c = if coef.is_empty() { parse_rational("1") } else { parse_rational(coef) }.map_err(invalid)?;
                if let Some(d) = div {
                    c /= parse_rational(d).map_err(invalid)?;
                }
                AngleValue::symbol(sym, c)
            }
        };
        total = if neg { &total - &term } else { &total + &term };
    }
    Ok(total)
}

/// A rotation vector: a JSON array of angles, a `{"group", "angles"}` object,
/// comma-joined angle objects, or comma-separated expressions.
fn parse_rho(raw: &str, group: Option<GroupId>, numeric: bool) -> Res<RotationVector> {
    let s = read_arg(raw)?;
    let t = s.trim();
    let (g, angles) = if t.starts_with('[') || t.starts_with('{') {
        let v = parse_json(t).or_else(|_| parse_json(&format!("[{t}]")))?;
        let (g, list) = match v {
            Value::Object(ref m) if m.contains_key("angles") => {
                let g = m.get("group").and_then(Value::as_str).map(parse_group).transpose()?;
                (g, m["angles"].clone())
            }
            Value::Object(_) => (None, Value::Array(vec![v])),
            other => (None, other),
        };
        let Value::Array(items) = list else {
            return Err(invalid(anyhow!("malformed JSON: rotation vector must be an array of angles")));
        };
        let angles = items
            .iter()
            .map(|x| match (x, numeric) {
                (Value::Number(n), true) => Ok(recognize_angle(n.as_f64().unwrap_or(f64::NAN).rem_euclid(1.0))),
                _ => AngleValue::from_json(x).map_err(|e| invalid(anyhow!("malformed JSON angle: {e}"))),
            })
            .collect::<Res<Vec<_>>>()?;
        (g, angles)
    } else {
        let angles = t.split(',').map(|p| parse_expression(p, numeric)).collect::<Res<Vec<_>>>()?;
        (None, angles)
    };
    let g = match (group, g) {
        (Some(a), Some(b)) if a != b => return Err(invalid(anyhow!("group mismatch: --group {a} but rotation vector is for {b}"))),
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(invalid(anyhow!("missing --group"))),
    };
    RotationVector::new(g, angles).map_err(invalid)
}

fn parse_element(raw: &str) -> Res<GroupElement<f64>> {
    let v = parse_json(&read_arg(raw)?)?;
    if let Some(g) = v.get("group").and_then(Value::as_str) {
        parse_group(g)?;
    }
    let e: GroupElement<f64> = serde_json::from_value(v).map_err(|e| invalid(anyhow!("malformed JSON element: {e}")))?;
    e.validate().map_err(invalid)?;
    Ok(e)
}

fn modes(m: &str) -> Res<Vec<ConjugacyMode>> {
    if m.eq_ignore_ascii_case("all") {
        return Ok(ConjugacyMode::ALL.to_vec());
    }
    Ok(vec![m.parse().map_err(invalid)?])
}

fn check_basis(session: &Session, rhos: &[&RotationVector]) -> Res<()> {
    for r in rhos {
        for a in &r.angles {
            session.basis.validate(a).map_err(invalid)?;
        }
    }
    Ok(())
}

fn group_of(group: &Option<String>) -> Res<Option<GroupId>> {
    group.as_deref().map(parse_group).transpose()
}

fn verdicts_json(modes: &[ConjugacyMode], verdicts: &[Verdict]) -> Value {
    if modes.len() == 1 {
        return json!({ "mode": modes[0], "verdict": verdicts[0] });
    }
    let map: serde_json::Map<String, Value> =
        modes.iter().zip(verdicts).map(|(m, v)| (m.to_string(), serde_json::to_value(v).unwrap())).collect();
    json!({ "verdicts": map })
}

struct Outcome {
    body: String,
    unknown: bool,
    failed: bool,
}

impl Outcome {
    fn json(v: Value) -> Self {
        Outcome { body: serde_json::to_string_pretty(&v).unwrap() + "\n", unknown: false, failed: false }
    }
}

fn run(cli: Cli) -> Res<Outcome> {
    let basis = match &cli.basis {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("cannot read basis `{}`", p.display())).map_err(invalid)?;
            serde_json::from_str(&text).map_err(|e| invalid(anyhow!("malformed JSON basis: {e}")))?
        }
        None => IrrationalBasis::standard(),
    };
    let session = Session { basis, seed: cli.seed, numeric: cli.numeric };
    let numeric = session.numeric;
    match cli.command {
        Command::Classify { group, rho, rho_prime, element, element_prime, mode } => {
            let modes = modes(&mode)?;
            match (rho, rho_prime, element, element_prime) {
                (Some(r), Some(rp), None, None) => {
                    let g = group_of(&group)?;
                    let r = parse_rho(&r, g, numeric)?;
                    let rp = parse_rho(&rp, Some(g.unwrap_or(r.group)), numeric)?;
                    let vs = modes.iter().map(|m| decide(r.group, *m, &r, &rp).map_err(invalid)).collect::<Res<Vec<_>>>()?;
                    let unknown = vs.iter().any(|v| v.status == Status::Unknown);
                    let mut out = json!({ "group": r.group, "rho": r.angles, "rho_prime": rp.angles });
                    merge(&mut out, verdicts_json(&modes, &vs));
                    Ok(Outcome { unknown, ..Outcome::json(out) })
                }
                (None, None, Some(e), Some(ep)) => {
                    let (e, ep) = (parse_element(&e)?, parse_element(&ep)?);
                    if let Some(g) = group_of(&group)? {
                        e.expect_group(g).map_err(invalid)?;
                    }
                    let mut vs = Vec::new();
                    let mut rhos = None;
                    for m in &modes {
                        let (v, r, rp) = decide_elements(&e, &ep, *m).map_err(invalid)?;
                        vs.push(v);
                        rhos = Some((r.rho, rp.rho));
                    }
                    let (r, rp) = rhos.unwrap();
                    let unknown = vs.iter().any(|v| v.status == Status::Unknown);
                    let mut out = json!({ "group": e.group(), "rho": r.angles, "rho_prime": rp.angles });
                    merge(&mut out, verdicts_json(&modes, &vs));
                    Ok(Outcome { unknown, ..Outcome::json(out) })
                }
                _ => Err(invalid(anyhow!("give either --rho and --rho-prime, or --element and --element-prime"))),
            }
        }
        Command::Reduce { element } => {
            let e = parse_element(&element)?;
            let r = reduce_to_torus(&e).map_err(runtime)?;
            let defect = reduction_defect(&e, &r);
            let unknown = r.rho.has_anonymous();
            Ok(Outcome {
                unknown,
                ..Outcome::json(json!({
                    "rho": r.rho, "torus_rep": r.torus_rep, "conjugator": r.conjugator, "defect": defect
                }))
            })
        }
        Command::Witness { group, rho, rho_prime, verify, normalize } => {
            let (r, rp) = pair(&session, &group, &rho, &rho_prime)?;
            let (t, tp) = torus_pair(&session, &r, &rp)?;
            let mut w = torus_witness(&r, &rp, Some((&t, &tp))).map_err(runtime)?;
            if normalize {
                w = normalize_witness(w).map_err(runtime)?;
            }
            let verdict = decide(r.group, ConjugacyMode::Topological, &r, &rp).map_err(invalid)?;
            let mut out = json!({ "group": r.group, "verdict": verdict, "witness": w });
            if let Some(n) = verify {
                let e = verify_conjugacy(&w, &t, &tp, n, session.seed).map_err(runtime)?;
                merge(&mut out, json!({ "samples": n, "seed": session.seed, "max_error": e }));
            }
            Ok(Outcome::json(out))
        }
        Command::Verify { group, rho, rho_prime, samples } => {
            let (r, rp) = pair(&session, &group, &rho, &rho_prime)?;
            let (t, tp) = torus_pair(&session, &r, &rp)?;
            let w: Witness<f64> = torus_witness(&r, &rp, Some((&t, &tp))).map_err(runtime)?;
            let e = verify_conjugacy(&w, &t, &tp, samples, session.seed).map_err(runtime)?;
            Ok(Outcome::json(json!({ "group": r.group, "samples": samples, "seed": session.seed, "max_error": e })))
        }
        Command::Orbit { group, rho, samples, radius, emit_points } => {
            let r = parse_rho(&rho, group_of(&group)?, numeric)?;
            let closure = classify_orbit_closure(&r).map_err(invalid)?;
            let mut out = json!({ "group": r.group, "rho": r.angles, "closure": closure });
            if let Some(n) = samples {
                check_basis(&session, &[&r])?;
                let pts: Vec<GroupElement<f64>> = sample_orbit(&r, n, &session.basis).map_err(runtime)?;
                merge(&mut out, json!({ "samples": n, "radius": radius, "components": count_components(&pts, radius) }));
                if let Some(path) = emit_points {
                    let text = serde_json::to_string(&pts).unwrap();
                    fs::write(&path, text).with_context(|| format!("cannot write `{}`", path.display())).map_err(runtime)?;
                }
            }
            Ok(Outcome::json(out))
        }
        Command::Lift { covering, rho } => {
            let c: Covering = covering.parse().map_err(invalid)?;
            let r = parse_rho(&rho, Some(c.base()), numeric)?;
            let lifts = c.lift_rotation_vectors(&r).map_err(invalid)?;
            Ok(Outcome::json(json!({ "covering": c, "rho": r, "lifts": lifts })))
        }
        Command::Project { covering, element } => {
            let c: Covering = covering.parse().map_err(invalid)?;
            let e = parse_element(&element)?;
            let img = c.project(&e).map_err(invalid)?;
            Ok(Outcome::json(json!({ "covering": c, "element": img })))
        }
        Command::Selftest => {
            let results = acceptance::run_all(session.seed);
            let failed = results.iter().any(|r| !r.passed);
            Ok(Outcome { body: acceptance::format_table(&results), unknown: false, failed })
        }
    }
}

fn pair(session: &Session, group: &Option<String>, rho: &str, rho_prime: &str) -> Res<(RotationVector, RotationVector)> {
    let r = parse_rho(rho, group_of(group)?, session.numeric)?;
    let rp = parse_rho(rho_prime, Some(r.group), session.numeric)?;
    check_basis(session, &[&r, &rp])?;
    Ok((r, rp))
}

fn torus_pair(session: &Session, r: &RotationVector, rp: &RotationVector) -> Res<(GroupElement<f64>, GroupElement<f64>)> {
    Ok((
        torus_element(r, &session.basis).map_err(invalid)?,
        torus_element(rp, &session.basis).map_err(invalid)?,
    ))
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (strict, output) = (cli.strict, cli.output.clone());
    match run(cli) {
        Ok(out) => {
            let written = match &output {
                Some(p) => fs::write(p, &out.body).with_context(|| format!("cannot write `{}`", p.display())),
                None => std::io::stdout().write_all(out.body.as_bytes()).context("cannot write to stdout"),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            if out.failed {
                ExitCode::from(1)
            } else if strict && out.unknown {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
