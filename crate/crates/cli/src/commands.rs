//! Command-line subcommands. Each produces a JSON report and a verdict;
//! exit codes are 0 (holds), 1 (condition fails), 2 (input error).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use ordrep::criteria::{self, Criterion, Semi, Witness};
use ordrep::exactla::fmt_rat;
use ordrep::extend::{self, BnnResult, ExtensionProblem, Route};
use ordrep::represent::{self, Check};
use ordrep::{Functional, RVec};
use serde_json::{json, Value};

use crate::fixtures::{all_fixtures, expectations};
use crate::format::{parse_instance, parse_vector_arg, strings, Instance, FORMAT_VERSION};
use crate::generate::{generate_instance, Flavor, GenParams};
use crate::suite::{run_suite, SuiteOptions};

#[derive(Debug, Parser)]
#[command(
    name = "ordrep",
    version,
    about = "Exact decision procedures for finite-dimensional calibrated ordered spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Representability criteria for one or every seminorm.
    Check {
        file: PathBuf,
        #[arg(long)]
        alpha: Option<usize>,
        /// full_ball, sandwich, semi_all, state_sup or gk_decomposable.
        #[arg(long)]
        criterion: Option<String>,
    },
    /// A state attaining the seminorm at `x0`, or the cone element that rules one out.
    State {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value_t = 0)]
        alpha: usize,
    },
    /// Norm-preserving positive extension of a functional given on a subspace.
    Bnn {
        file: PathBuf,
        #[arg(long)]
        subspace: String,
        /// Label in `subspace_functionals`.
        #[arg(long)]
        functional: String,
        #[arg(long, default_value_t = 0)]
        alpha: usize,
        /// Decision route; the dual construction when omitted.
        #[arg(long)]
        route: Option<String>,
    },
    /// Positive decomposition `u = v1 - v2`.
    Decompose {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value_t = 0)]
        alpha: usize,
        /// Minimize `|v1| + |v2|`.
        #[arg(long)]
        gk: bool,
    },
    /// State vertices and the properties of the evaluation embedding.
    Represent { file: PathBuf },
    /// Norm additivity of two positive functionals.
    Additivity {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 0)]
        alpha: usize,
    },
    /// The quotient by the kernel of a seminorm.
    Quotient {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        alpha: usize,
    },
    /// A random instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = FlavorArg::Mixed)]
        flavor: FlavorArg,
    },
    /// The equivalence suite on generated instances and/or the fixtures.
    Suite {
        /// Half-open seed range `a..b`.
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long)]
        fixtures: bool,
        /// Largest generated dimension; instance `seed` gets `1 + seed % max_dim`.
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// Omit timing fields.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Random,
    Monotone,
    RankDeficient,
    Mixed,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Random => Flavor::Random,
            FlavorArg::Monotone => Flavor::Monotone,
            FlavorArg::RankDeficient => Flavor::RankDeficient,
            FlavorArg::Mixed => Flavor::Mixed,
        }
    }
}

#[derive(Debug)]
pub enum Outcome {
    /// Report JSON and whether the checked condition holds.
    Report { report: Value, holds: bool },
    /// Raw text printed as is (an instance file).
    Text(String),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Report { holds: false, .. } => 1,
            _ => 0,
        }
    }

    pub fn stdout(&self) -> String {
        match self {
            Outcome::Report { report, .. } => {
                serde_json::to_string_pretty(report).expect("serializes")
            }
            Outcome::Text(t) => t.clone(),
        }
    }
}

/// An input problem: unreadable file, bad syntax, violated invariant or
/// arguments that do not fit the instance.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

impl From<ordrep::Error> for InputError {
    fn from(e: ordrep::Error) -> Self {
        InputError(e.to_string())
    }
}

type Res<T> = std::result::Result<T, InputError>;

pub fn load(path: &Path) -> Res<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn vector(text: &str, dim: usize, what: &str) -> Res<RVec> {
    let v = parse_vector_arg(text).map_err(|e| InputError(format!("--{what}: {e}")))?;
    if v.dim() != dim {
        return Err(InputError(format!(
            "--{what}: expected {dim} entries, found {}",
            v.dim()
        )));
    }
    Ok(v)
}

fn report(command: &str, body: Value, holds: bool) -> Outcome {
    let mut report = json!({ "format": FORMAT_VERSION, "command": command });
    if let (Some(r), Value::Object(b)) = (report.as_object_mut(), body) {
        r.extend(b);
    }
    Outcome::Report { report, holds }
}

fn vec_json(v: &RVec) -> Value {
    json!(strings(v))
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Triple {
            lower,
            middle,
            upper,
        } => json!({
            "kind": "triple",
            "lower": vec_json(lower),
            "middle": vec_json(middle),
            "upper": vec_json(upper),
        }),
        Witness::NonSemi {
            row,
            x,
            l_pos,
            l_neg,
        } => json!({
            "kind": "non_semi",
            "row": vec_json(row),
            "x": vec_json(x),
            "l_pos": vec_json(l_pos),
            "l_neg": vec_json(l_neg),
        }),
    }
}

fn check_json(c: &Check) -> Value {
    match c {
        Check::Holds => json!({ "holds": true }),
        Check::NormGap { x } => json!({ "holds": false, "norm_gap_at": vec_json(x) }),
        Check::UncoveredDualGenerator { h } => {
            json!({ "holds": false, "uncovered_dual_generator": vec_json(h) })
        }
        Check::Kernel { x } => json!({ "holds": false, "kernel_vector": vec_json(x) }),
    }
}

fn bnn_json(r: &BnnResult) -> Value {
    json!({
        "route": r.route.name(),
        "extendable": r.extendable,
        "subspace_norm": r.sub_norm.to_string(),
        "extension": r.extension.as_ref().map(|e| vec_json(&e.coeffs)),
        "violation": r.violation.as_ref().map(|v| json!({
            "coords": vec_json(&v.coords),
            "x": vec_json(&v.x),
            "y": vec_json(&v.y),
        })),
        "farkas": r.farkas.as_ref().map(|f| vec_json(&f.multipliers)),
    })
}

pub fn run(cli: Cli) -> Res<Outcome> {
    match cli.command {
        Command::Check {
            file,
            alpha,
            criterion,
        } => {
            let inst = load(&file)?;
            let s = &inst.space;
            let alphas: Vec<usize> = match alpha {
                Some(a) => {
                    s.seminorm(a)?;
                    vec![a]
                }
                None => (0..s.seminorms().len()).collect(),
            };
            let crits: Vec<Criterion> = match criterion {
                Some(name) => vec![Criterion::from_name(&name).ok_or_else(|| {
                    let names: Vec<&str> = Criterion::ALL.iter().map(|c| c.name()).collect();
                    InputError(format!(
                        "unknown criterion {name:?}; expected one of {}",
                        names.join(", ")
                    ))
                })?],
                None => Criterion::ALL.to_vec(),
            };
            let mut results = Vec::new();
            let mut holds = true;
            for &a in &alphas {
                let states = represent::state_vertices(s.seminorm(a)?, s.cone())?;
                for &c in &crits {
                    let r = criteria::check(s, a, c)?;
                    let verified = match &r.witness {
                        Some(w) => Some(w.verify(s, a, Some(&states))?),
                        None => None,
                    };
                    holds &= r.holds;
                    results.push(json!({
                        "alpha": a,
                        "seminorm": s.seminorms()[a].name(),
                        "criterion": c.name(),
                        "holds": r.holds,
                        "witness": r.witness.as_ref().map(witness_json),
                        "witness_verified": verified,
                    }));
                }
            }
            Ok(report("check", json!({ "results": results }), holds))
        }
        Command::State { file, x0, alpha } => {
            let inst = load(&file)?;
            let s = &inst.space;
            s.seminorm(alpha)?;
            let x0 = vector(&x0, s.dim(), "x0")?;
            let value = s.eval_seminorm(alpha, &x0)?;
            let body = match criteria::find_state(s, alpha, &x0)? {
                Some(c) => {
                    let verified = c.verify(s)?;
                    json!({
                        "alpha": alpha,
                        "x0": vec_json(&x0),
                        "seminorm_value": fmt_rat(&value),
                        "found": true,
                        "sign": c.sign.symbol(),
                        "state": vec_json(&c.f.coeffs),
                        "weights": vec_json(&c.weights),
                        "verified": verified,
                    })
                }
                None => {
                    let lowering = |semi: Semi| match semi {
                        Semi::Fails { l } => Some(vec_json(&l)),
                        Semi::Holds => None,
                    };
                    json!({
                        "alpha": alpha,
                        "x0": vec_json(&x0),
                        "seminorm_value": fmt_rat(&value),
                        "found": false,
                        "lowering_plus": lowering(criteria::semi_positive(s, alpha, &x0)?),
                        "lowering_minus": lowering(criteria::semi_negative(s, alpha, &x0)?),
                    })
                }
            };
            let found = body["found"] == json!(true);
            Ok(report("state", body, found))
        }
        Command::Bnn {
            file,
            subspace,
            functional,
            alpha,
            route,
        } => {
            let inst = load(&file)?;
            let sub = inst
                .subspaces
                .get(&subspace)
                .ok_or_else(|| InputError(format!("no subspace labelled {subspace:?}")))?;
            let sf = inst.subspace_functionals.get(&functional).ok_or_else(|| {
                InputError(format!("no subspace functional labelled {functional:?}"))
            })?;
            if sf.subspace != subspace {
                return Err(InputError(format!(
                    "functional {functional:?} is given on subspace {:?}, not {subspace:?}",
                    sf.subspace
                )));
            }
            let ep =
                ExtensionProblem::new(inst.space.clone(), alpha, sub.clone(), sf.values.clone())?;
            let route = match route {
                None => Route::Dual,
                Some(name) => Route::from_name(&name).ok_or_else(|| {
                    let names: Vec<&str> = Route::ALL.iter().map(|r| r.name()).collect();
                    InputError(format!(
                        "unknown route {name:?}; expected one of {}",
                        names.join(", ")
                    ))
                })?,
            };
            let r = match route {
                Route::Dual => extend::bnn_construct(&ep)?,
                other => extend::bnn_check_route(&ep, other)?,
            };
            let mut body = bnn_json(&r);
            body["alpha"] = json!(alpha);
            body["verified"] = json!(r.verify(&ep)?);
            Ok(report("bnn", body, r.extendable))
        }
        Command::Decompose { file, u, alpha, gk } => {
            let inst = load(&file)?;
            let s = &inst.space;
            s.seminorm(alpha)?;
            let u = Functional::new(vector(&u, s.dim(), "u")?);
            if gk {
                let d = criteria::grosberg_krein(s, alpha, &u)?;
                let holds = d.is_some();
                let body = match d {
                    Some(d) => json!({
                        "alpha": alpha,
                        "v1": vec_json(&d.v1.coeffs),
                        "v2": vec_json(&d.v2.coeffs),
                        "norm_v1": fmt_rat(&d.norm_v1),
                        "norm_v2": fmt_rat(&d.norm_v2),
                        "norm_u": fmt_rat(&d.norm_u),
                        "gap": fmt_rat(&d.gap),
                    }),
                    None => json!({ "alpha": alpha, "decomposable": false }),
                };
                return Ok(report("decompose", body, holds));
            }
            match criteria::krein_decompose(s, alpha, &u) {
                Ok((v1, v2)) => Ok(report(
                    "decompose",
                    json!({ "alpha": alpha, "v1": vec_json(&v1.coeffs), "v2": vec_json(&v2.coeffs) }),
                    true,
                )),
                Err(ordrep::Error::Infeasible { farkas, .. }) => Ok(report(
                    "decompose",
                    json!({ "alpha": alpha, "decomposable": false, "farkas": vec_json(&farkas.multipliers) }),
                    false,
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Represent { file } => {
            let inst = load(&file)?;
            let s = &inst.space;
            let fs = represent::build_representation(s)?;
            let r = represent::verify_representation(s, &fs)?;
            let families: Vec<Value> = (0..fs.families())
                .map(|a| {
                    Ok(json!({
                        "alpha": a,
                        "seminorm": s.seminorms()[a].name(),
                        "states": fs.vertices(a)?.iter().map(vec_json).collect::<Vec<_>>(),
                        "isometric_on_positives": check_json(&r.isometric_on_positives[a]),
                        "isometric_everywhere": check_json(&r.isometric_everywhere[a]),
                    }))
                })
                .collect::<ordrep::Result<_>>()?;
            Ok(report(
                "represent",
                json!({
                    "families": families,
                    "injective": check_json(&r.injective),
                    "bipositive": check_json(&r.bipositive),
                }),
                r.all_hold(),
            ))
        }
        Command::Additivity { file, f, g, alpha } => {
            let inst = load(&file)?;
            let s = &inst.space;
            s.seminorm(alpha)?;
            let f = Functional::new(vector(&f, s.dim(), "f")?);
            let g = Functional::new(vector(&g, s.dim(), "g")?);
            let a = extend::norm_additivity_check(s, alpha, &f, &g)?;
            let mut body = json!({
                "alpha": alpha,
                "norm_f": fmt_rat(&a.norm_f),
                "norm_g": fmt_rat(&a.norm_g),
                "norm_f_plus_g": fmt_rat(&a.lhs),
                "additive": a.additive,
            });
            match extend::additivity_extension_witness(s, alpha, &f, &g) {
                Ok(w) => {
                    body["weights"] = match &w {
                        Some(w) => json!({
                            "states": w.states.iter().map(vec_json).collect::<Vec<_>>(),
                            "w_f": vec_json(&w.w_f),
                            "w_f_plus_g": vec_json(&w.w_h),
                            "verified": w.verify(&f, &g, &a.norm_f, &a.lhs),
                        }),
                        None => Value::Null,
                    };
                }
                Err(ordrep::Error::Hypothesis(msg)) => body["weights_unavailable"] = json!(msg),
                Err(e) => return Err(e.into()),
            }
            Ok(report("additivity", body, a.additive))
        }
        Command::Quotient { file, alpha } => {
            let inst = load(&file)?;
            let q = inst.space.quotient(alpha)?;
            Ok(report(
                "quotient",
                json!({
                    "alpha": alpha,
                    "dim": q.dim(),
                    "projection": q.projection().rows().iter().map(vec_json).collect::<Vec<_>>(),
                    "cone_generators": q.cone().generators().iter().map(vec_json).collect::<Vec<_>>(),
                    "norm_rows": q.norm().rows().iter().map(vec_json).collect::<Vec<_>>(),
                }),
                true,
            ))
        }
        Command::Gen { seed, dim, flavor } => {
            if dim == 0 || dim > represent::max_dim() {
                return Err(InputError(format!(
                    "--dim must lie in 1..={}",
                    represent::max_dim()
                )));
            }
            let inst = generate_instance(seed, &GenParams::new(dim).flavor(flavor.into()))?;
            Ok(Outcome::Text(inst.to_json()))
        }
        Command::Suite {
            seeds,
            fixtures,
            max_dim,
            no_timing,
        } => {
            if max_dim == 0 || max_dim > represent::max_dim() {
                return Err(InputError(format!(
                    "--max-dim must lie in 1..={}",
                    represent::max_dim()
                )));
            }
            let range = match seeds.as_deref() {
                Some(text) => parse_seed_range(text)?,
                None if fixtures => 0..0,
                None => 0..50,
            };
            let mut instances = Vec::new();
            let mut pinned = Vec::new();
            if fixtures {
                for inst in all_fixtures() {
                    let exp = expectations(&inst);
                    pinned.push(json!({
                        "name": inst.name,
                        "expectations": exp.iter().map(|e| json!({ "label": e.label, "ok": e.ok })).collect::<Vec<_>>(),
                    }));
                    instances.push(inst);
                }
            }
            for seed in range {
                let dim = 1 + (seed as usize) % max_dim;
                instances.push(generate_instance(seed, &GenParams::new(dim))?);
            }
            let r = run_suite(&instances, &SuiteOptions::default());
            let mut value = serde_json::to_value(&r).expect("serializes");
            if no_timing {
                value.as_object_mut().expect("object").remove("timing");
            }
            let pinned_ok = pinned
                .iter()
                .flat_map(|p| p["expectations"].as_array().cloned().unwrap_or_default())
                .all(|e| e["ok"] == json!(true));
            if fixtures {
                value["fixture_expectations"] = json!(pinned);
            }
            Ok(Outcome::Report {
                report: value,
                holds: r.all_agree() && pinned_ok,
            })
        }
    }
}

pub fn parse_seed_range(text: &str) -> Res<std::ops::Range<u64>> {
    let bad = || InputError(format!("--seeds: expected a..b, found {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..b)
}

/// Parses `args`, runs the command and returns (stdout, stderr, exit code).
pub fn main_with<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (String::new(), text, 2)
            } else {
                (text, String::new(), 0)
            };
        }
    };
    match run(cli) {
        Ok(o) => (o.stdout(), String::new(), o.exit_code()),
        Err(e) => (String::new(), format!("error: {e}\n"), 2),
    }
}
