mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use vcycle::bounds::{self, multbound_check, SingularityProfile};
use vcycle::mult::{hilbert_samuel_multiplicity, multiplicity_along_linear, Center, DEFAULT_TRIALS};
use vcycle::oracle::macaulay_colength;
use vcycle::problem::{parse_component, ProblemFile};
use vcycle::vogel::{map_degree, second_seed, vogel_run, DEFAULT_SEED};
use vcycle::{corpus, Error, Field, FieldKind, Ideal, PrimeField, Rationals, Rng};

use report::{digest, Failure, Report};

#[derive(Parser)]
#[command(name = "vcycle", version, about = "Degrees of rational maps and multiplicities of singular loci")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree of the map given by `system:` on the variety `ideal:`.
    Degree(DegreeArgs),
    /// Samuel multiplicity of `system:` along `center:`.
    Multiplicity(MultiplicityArgs),
    /// Numeric bounds on the singularities of a theta divisor in genus G.
    Bounds(BoundsArgs),
    /// The bundled example problems.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Args)]
struct DegreeArgs {
    file: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// `q` or `fp:<prime>`; overrides the file.
    #[arg(long)]
    field: Option<FieldKind>,
    /// Skip the run over F_p that confirms a rational computation.
    #[arg(long)]
    no_verify: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MultiplicityArgs {
    file: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Also compute the Hilbert–Samuel function and a Macaulay-matrix colength.
    #[arg(long)]
    cross_check: bool,
    /// Largest power of the ideal sampled by the Hilbert–Samuel cross-check.
    #[arg(long)]
    max_power: Option<u32>,
    /// Degree cap for the Macaulay-matrix cross-check.
    #[arg(long, default_value_t = 10)]
    macaulay_cap: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BoundsArgs {
    /// Genus; may be omitted when `--profile` is given.
    g: Option<usize>,
    /// Singular component `dim,mult,degree[,flags]`; repeatable.
    #[arg(long = "component", value_name = "D,M,DEG[,FLAGS]")]
    components: Vec<String>,
    /// Problem file with a `profile:` section.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Gauss-map degree to test against (default 4).
    #[arg(long)]
    gauss_degree: Option<u64>,
    /// Maximal number of isolated singular points.
    #[arg(long)]
    max_isolated: bool,
    /// Degrees of the Gauss map on known loci.
    #[arg(long)]
    known: bool,
    /// Admissible degree strata (g = 2, 3, 4).
    #[arg(long)]
    strata: bool,
    /// Gauss degree in genus 4 with K vanishing thetanulls.
    #[arg(long, value_name = "K")]
    genus4: Option<u32>,
    /// Check that the theta divisor cannot be singular in codimension 1.
    #[arg(long)]
    codim1: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum ExamplesAction {
    /// Run every bundled example and compare with the expected values.
    RunAll {
        #[arg(long)]
        json: bool,
    },
    /// List the bundled problem files.
    List,
    /// Print a bundled problem file.
    Show { name: String },
}

fn read(path: &Path) -> Result<(String, String), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let d = digest(text.as_bytes());
    Ok((text, d))
}

fn degree(a: &DegreeArgs) -> Result<Report, Failure> {
    let (text, d) = read(&a.file)?;
    let file = ProblemFile::parse(&text)?;
    let seed = a.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let field = a.field.unwrap_or(file.field);
    let p = file.vogel_problem(seed)?;
    let mut rep = Report::new("degree", Some(d), Some(seed), Some(field));
    let (results, trace, steps, human_verify) = match field {
        FieldKind::Rationals => {
            let fp = (!a.no_verify).then(PrimeField::default_prime);
            let r = map_degree(&p, fp.as_ref())?;
            let v = &r.verification;
            let mut lines = vec![format!("seed {}: delta = {}", v.second_seed, v.second_delta)];
            if let (Some(m), Some(md)) = (v.modulus, v.modular_delta) {
                lines.push(format!("fp:{m}: delta = {md}"));
            }
            (
                json!({
                    "degree_x_l": r.degree_x_l,
                    "delta": r.delta,
                    "degree": r.degree,
                    "residual_points": r.residual_points,
                    "v_degrees": r.v_degrees,
                    "verification": v,
                }),
                serde_json::to_value(&r.trace.steps).expect("steps serialize"),
                r.trace.steps.iter().map(|s| (s.step, s.v_degree, s.residual_degree, s.resamples)).collect::<Vec<_>>(),
                lines,
            )
        }
        FieldKind::PrimeField { characteristic } => {
            let fp = PrimeField::new(characteristic)?;
            let q = p
                .reduce_mod(&fp)
                .ok_or_else(|| Error::InvalidInput(format!("coefficients do not reduce mod {characteristic}")))?;
            let t = vogel_run(&q)?;
            let mut lines = Vec::new();
            let mut verification = json!(null);
            if !a.no_verify {
                let s2 = second_seed(seed);
                let t2 = vogel_run(&q.with_seed(s2))?;
                if t2.v_degrees() != t.v_degrees() {
                    return Err(Error::Disagreement(format!(
                        "seed {seed} gives delta {}, seed {s2} gives {}",
                        t.discrepancy(),
                        t2.discrepancy()
                    ))
                    .into());
                }
                lines.push(format!("seed {s2}: delta = {}", t2.discrepancy()));
                verification = json!({ "second_seed": s2, "second_delta": t2.discrepancy() });
            }
            if !t.check_bookkeeping() {
                return Err(Error::Disagreement("residual degree bookkeeping failed".into()).into());
            }
            let delta = t.discrepancy();
            let degree = t.degree_x_l - delta;
            (
                json!({
                    "degree_x_l": t.degree_x_l,
                    "delta": delta,
                    "degree": degree,
                    "residual_points": t.residual_points(),
                    "v_degrees": t.v_degrees(),
                    "verification": verification,
                }),
                serde_json::to_value(&t.steps).expect("steps serialize"),
                t.steps.iter().map(|s| (s.step, s.v_degree, s.residual_degree, s.resamples)).collect(),
                lines,
            )
        }
    };
    let r = &results;
    rep.line(format!("degX L = {}, delta = {}, deg f = {}", r["degree_x_l"], r["delta"], r["degree"]));
    rep.line(format!("{:>4} {:>10} {:>10} {:>10}", "step", "deg V", "deg R", "resamples"));
    for (j, v, res, rs) in steps {
        rep.line(format!("{j:>4} {v:>10} {res:>10} {rs:>10}"));
    }
    for l in human_verify {
        rep.line(format!("verified: {l}"));
    }
    rep.results = results;
    rep.trace = trace;
    Ok(rep)
}

fn multiplicity(a: &MultiplicityArgs) -> Result<Report, Failure> {
    let (text, d) = read(&a.file)?;
    let file = ProblemFile::parse(&text)?;
    if file.field != FieldKind::Rationals {
        return Err(Error::Unsupported("multiplicities are computed over q only".into()).into());
    }
    let seed = a.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let q = file.multiplicity_query()?;
    let mut rep = Report::new("multiplicity", Some(d), Some(seed), Some(FieldKind::Rationals));
    let r = multiplicity_along_linear(&q, &Rng::new(seed), a.trials)?;
    let e = r.finite().ok_or(Error::NotIsolated)?;
    rep.line(format!("e = {e}"));
    let draws: Vec<String> = r.trials.iter().map(|t| t.colength.to_string()).collect();
    rep.line(format!(
        "method: {} over {} trials [{}], localized at power {}",
        serde_json::to_value(r.method).expect("method serializes").as_str().unwrap_or("?"),
        r.trials.len(),
        draws.join(", "),
        r.stabilization
    ));
    let mut results = json!({ "multiplicity": e, "local_dim": q.local_dim });
    if a.cross_check {
        let checks = cross_check(&q, e, a)?;
        match (&checks["hilbert-samuel"], &checks["macaulay"]) {
            (Value::Number(hs), Value::Number(mac)) => {
                rep.line(format!("hilbert-samuel: {hs}"));
                if checks["macaulay_exact"] == json!(true) {
                    rep.line(format!("macaulay: {mac}"));
                } else {
                    rep.line(format!("macaulay colength: {mac} (not a parameter ideal, not compared)"));
                }
            }
            _ => rep.line("cross-checks skipped for a positive-dimensional center".into()),
        }
        results["cross_check"] = checks;
    }
    if let Some(p) = &file.profile {
        let gauss = bounds::factorial(p.g) - e;
        rep.line(format!("deg G = {}! - {e} = {gauss}", p.g));
        results["gauss_degree"] = json!(gauss.to_string().parse::<i64>().ok());
    }
    rep.results = results;
    rep.trace = serde_json::to_value(&r).expect("result serializes");
    Ok(rep)
}

/// Hilbert–Samuel and Macaulay values for a point center.
fn cross_check(q: &vcycle::mult::MultiplicityQuery<Rationals>, e: u64, a: &MultiplicityArgs) -> Result<Value, Failure> {
    let Center::Point(p) = &q.center else {
        return Ok(json!({ "hilbert-samuel": "skipped (positive-dimensional center)", "macaulay": "skipped" }));
    };
    let max_t = a.max_power.unwrap_or(q.local_dim as u32 + 4);
    let hs = hilbert_samuel_multiplicity(q, max_t)?.finite().ok_or(Error::NotIsolated)?;
    if hs != e {
        return Err(Error::Disagreement(format!("generic reduction gives {e}, Hilbert–Samuel gives {hs}")).into());
    }
    let n = q.nvars();
    let identity: Vec<Vec<_>> = (0..n)
        .map(|i| (0..n).map(|k| Rationals.from_i64(i64::from(i == k))).collect())
        .collect();
    let mut gens = q.variety.generators().to_vec();
    gens.extend(q.target.iter().cloned());
    let j = Ideal::new(Rationals, n, gens)?.substitute_linear(&identity, p)?;
    let mac = macaulay_colength(&j, a.macaulay_cap)?.finite().ok_or(Error::NotIsolated)?;
    // the colength is the multiplicity only for parameter ideals of a complete intersection
    let exact = q.target.len() == q.local_dim && q.variety.generators().len() + q.local_dim == n;
    if exact && mac != e {
        return Err(Error::Disagreement(format!("generic reduction gives {e}, Macaulay colength is {mac}")).into());
    }
    Ok(json!({ "hilbert-samuel": hs, "macaulay": mac, "macaulay_exact": exact }))
}

fn bounds_cmd(a: &BoundsArgs) -> Result<Report, Failure> {
    let (file, d) = match &a.profile {
        Some(path) => {
            let (text, d) = read(path)?;
            (Some(ProblemFile::parse(&text)?), Some(d))
        }
        None => (None, None),
    };
    let file_g = file.as_ref().and_then(|f| f.profile.as_ref()).map(|p| p.g);
    let g = match (a.g, file_g) {
        (Some(g), Some(h)) if g != h => {
            return Err(Error::InvalidInput(format!("genus {g} given but the profile is for genus {h}")).into())
        }
        (Some(g), _) | (None, Some(g)) => g,
        (None, None) => return Err(Error::InvalidInput("no genus given".into()).into()),
    };
    let mut rep = Report::new("bounds", d, None, None);
    let mut results = serde_json::Map::new();
    let mut components = match &file {
        Some(f) => f.singularity_profile()?.components,
        None => Vec::new(),
    };
    for (i, c) in a.components.iter().enumerate() {
        components.push(parse_component(i + 1, c)?);
    }
    let tables = a.max_isolated || a.known || a.strata || a.genus4.is_some() || a.codim1;
    if !components.is_empty() || !tables {
        let profile = SingularityProfile::new(g, components)?;
        let deg = a.gauss_degree.or(file.as_ref().and_then(|f| f.gauss_degree));
        let r = multbound_check(&profile, deg)?;
        rep.line(r.to_string());
        results.insert("profile".into(), serde_json::to_value(&r).expect("report serializes"));
    }
    if a.max_isolated {
        let pts = bounds::max_isolated_points(g)?;
        let m = bounds::max_isolated_multiplicity(g)?;
        rep.line(format!("max isolated points: {pts}"));
        rep.line(format!("max isolated multiplicity: {m}"));
        results.insert("max_isolated_points".into(), json!(pts.to_string()));
        results.insert("max_isolated_multiplicity".into(), json!(m));
    }
    if a.codim1 {
        let r = bounds::smooth_in_codim1_check(g)?;
        rep.line(format!("codimension 1 singular locus: lhs {} vs rhs {}, feasible: {}", r.lhs, r.rhs, r.feasible));
        results.insert("codim1".into(), serde_json::to_value(&r).expect("report serializes"));
    }
    if a.known {
        let k = bounds::known_degrees(g)?;
        rep.line(k.to_string());
        results.insert("known_degrees".into(), serde_json::to_value(&k).expect("report serializes"));
    }
    if let Some(k) = a.genus4 {
        if g != 4 {
            return Err(Error::InvalidInput("--genus4 needs g = 4".into()).into());
        }
        let deg = bounds::genus4_degree(k)?;
        rep.line(format!("deg G with {k} vanishing thetanulls: {deg}"));
        results.insert("genus4_degree".into(), json!(deg));
    }
    if a.strata {
        let rows = bounds::strata_tables(g)?;
        rep.line(bounds::format_strata(&rows));
        results.insert("strata".into(), serde_json::to_value(&rows).expect("rows serialize"));
    }
    rep.results = Value::Object(results);
    Ok(rep)
}

fn examples(action: &ExamplesAction) -> Result<Report, Failure> {
    match action {
        ExamplesAction::List => {
            let mut rep = Report::new("examples-list", None, None, None);
            for (name, _) in corpus::PROBLEMS {
                rep.line(name.to_string());
            }
            rep.results = json!(corpus::PROBLEMS.iter().map(|(n, _)| n).collect::<Vec<_>>());
            Ok(rep)
        }
        ExamplesAction::Show { name } => {
            let p = corpus::problem(name)?;
            let mut rep = Report::new("examples-show", None, None, None);
            rep.line(p.to_text().trim_end().to_string());
            Ok(rep)
        }
        ExamplesAction::RunAll { .. } => {
            let outcomes = corpus::run_all();
            let mut rep = Report::new("examples-run-all", None, None, None);
            let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
            for o in &outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                rep.line(format!("{status} {:<width$} {:>7} ms  {}", o.name, o.millis, o.detail));
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            rep.line(format!("{} passed, {failed} failed", outcomes.len() - failed));
            rep.results = serde_json::to_value(&outcomes).expect("outcomes serialize");
            if failed > 0 {
                return Err(Failure::corpus(rep, failed));
            }
            Ok(rep)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json, name, res) = match &cli.command {
        Command::Degree(a) => (a.json, "degree", degree(a)),
        Command::Multiplicity(a) => (a.json, "multiplicity", multiplicity(a)),
        Command::Bounds(a) => (a.json, "bounds", bounds_cmd(a)),
        Command::Examples { action } => {
            let json = matches!(action, ExamplesAction::RunAll { json: true });
            (json, "examples", examples(action))
        }
    };
    match res {
        Ok(rep) => {
            rep.emit(json);
            ExitCode::SUCCESS
        }
        Err(f) => f.emit(name, json),
    }
}
