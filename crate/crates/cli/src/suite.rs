//! The equivalence suite: on each instance and seminorm, every decision
//! procedure for representability must give the same answer, and every
//! certificate they emit must verify.

use std::time::Instant;

use num_traits::Zero;
use ordrep::criteria::{self, Witness};
use ordrep::extend::{self, ExtensionProblem, Route};
use ordrep::represent;
use ordrep::{CalibratedSpace, Functional, Norm, RVec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{Instance, RawInstance, FORMAT_VERSION};
use crate::generate::{combination, int_vector, random_subspace, rng_for};

pub const STATE_SAMPLES: usize = 20;
pub const GK_SAMPLES: usize = 20;
pub const ADDITIVITY_PAIRS: usize = 10;
pub const BNN_TRIPLES: usize = 2;

/// Deliberate checker faults, for testing that disagreements are caught.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Corruption {
    #[default]
    None,
    /// Reports the negation of the fullness check.
    FlipFull,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteOptions {
    /// Mixed into every sampling stream.
    pub sample_seed: u64,
    #[doc(hidden)]
    pub corruption: Corruption,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaResult {
    pub alpha: usize,
    pub seminorm: String,
    pub full: bool,
    pub state_cover: bool,
    /// Every sampled element had a norming state.
    pub state_attainment: bool,
    pub isometric_everywhere: bool,
    pub witnesses_verified: bool,
    pub gk_samples: usize,
    pub gk_gap_zero: usize,
    pub additivity_pairs: usize,
    pub additivity_agree: usize,
}

impl AlphaResult {
    fn disagreements(&self) -> Vec<String> {
        let mut out = Vec::new();
        let verdicts = [
            ("full", self.full),
            ("state_cover", self.state_cover),
            ("state_attainment", self.state_attainment),
            ("isometric_everywhere", self.isometric_everywhere),
        ];
        if verdicts.iter().any(|(_, b)| *b != self.full) {
            let list: Vec<String> = verdicts.iter().map(|(n, b)| format!("{n}={b}")).collect();
            out.push(format!("alpha {}: {}", self.alpha, list.join(", ")));
        }
        if !self.witnesses_verified {
            out.push(format!(
                "alpha {}: a witness failed verification",
                self.alpha
            ));
        }
        if self.gk_gap_zero != self.gk_samples {
            out.push(format!(
                "alpha {}: Grosberg-Krein gap zero on {}/{} samples",
                self.alpha, self.gk_gap_zero, self.gk_samples
            ));
        }
        if self.additivity_agree != self.additivity_pairs {
            out.push(format!(
                "alpha {}: additivity and weights agree on {}/{} pairs",
                self.alpha, self.additivity_agree, self.additivity_pairs
            ));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BnnAgreement {
    pub subspace_dim: usize,
    pub subspace_norm: String,
    /// Route name and its verdict, dual construction last.
    pub routes: Vec<(String, bool)>,
    pub certificates_verified: bool,
    pub extension_norm_matches: bool,
}

impl BnnAgreement {
    fn agrees(&self) -> bool {
        let first = self.routes.first().map(|r| r.1);
        self.routes.iter().all(|r| Some(r.1) == first)
            && self.certificates_verified
            && self.extension_norm_matches
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub index: usize,
    pub name: Option<String>,
    pub alphas: Vec<AlphaResult>,
    pub bnn: Vec<BnnAgreement>,
    pub disagreements: Vec<String>,
    /// Checker errors; any error counts as a disagreement.
    pub error: Option<String>,
}

impl InstanceResult {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty() && self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    AllAgree,
    Disagreement {
        index: usize,
        reasons: Vec<String>,
        /// The smallest instance found that still disagrees, verbatim.
        reproducer: Box<RawInstance>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    pub per_instance_ms: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub format: u32,
    pub instances: Vec<InstanceResult>,
    pub verdict: Verdict,
    pub timing: Timing,
}

impl SuiteReport {
    pub fn all_agree(&self) -> bool {
        self.verdict == Verdict::AllAgree
    }

    /// The report without its timing fields.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timing");
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn nonzero_states(states: &[RVec]) -> Vec<RVec> {
    states.iter().filter(|v| !v.is_zero()).cloned().collect()
}

fn check_alpha(
    s: &CalibratedSpace,
    alpha: usize,
    iso_everywhere: bool,
    rng: &mut ChaCha8Rng,
    corruption: Corruption,
) -> ordrep::Result<AlphaResult> {
    let n = s.dim();
    let sn = s.seminorm(alpha)?;
    let states = represent::state_vertices(sn, s.cone())?;
    let full = criteria::check_full(s, alpha)?;
    let cover = criteria::check_state_cover_with(s, alpha, &states, criteria::Criterion::StateSup)?;

    let mut verified = true;
    if let Some(w) = &full.witness {
        verified &= w.verify(s, alpha, None)?;
    }
    let mut samples: Vec<RVec> = (0..STATE_SAMPLES)
        .map(|_| int_vector(rng, n, 6, false))
        .collect();
    if let Some(w) = &cover.witness {
        verified &= w.verify(s, alpha, Some(&states))?;
        if let Witness::NonSemi { x, .. } = w {
            samples.push(x.clone());
        }
    }
    let mut attained = true;
    for x in &samples {
        match criteria::find_state(s, alpha, x)? {
            Some(c) => verified &= c.verify(s)?,
            None => attained = false,
        }
    }

    let mut r = AlphaResult {
        alpha,
        seminorm: sn.name().to_string(),
        full: full.holds ^ (corruption == Corruption::FlipFull),
        state_cover: cover.holds,
        state_attainment: attained,
        isometric_everywhere: iso_everywhere,
        witnesses_verified: verified,
        gk_samples: 0,
        gk_gap_zero: 0,
        additivity_pairs: 0,
        additivity_agree: 0,
    };
    if !cover.holds {
        return Ok(r);
    }

    for _ in 0..GK_SAMPLES {
        let u = Functional::new(combination(rng, n, sn.rows(), -4, 4));
        r.gk_samples += 1;
        if let Some(d) = criteria::grosberg_krein(s, alpha, &u)? {
            if d.gap.is_zero() && d.v1.coeffs.sub(&d.v2.coeffs) == u.coeffs {
                r.gk_gap_zero += 1;
            }
        }
    }

    let positive = nonzero_states(&states);
    if !positive.is_empty() {
        let pick = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(1..=2);
            let chosen: Vec<RVec> = (0..k)
                .map(|_| positive[rng.gen_range(0..positive.len())].clone())
                .collect();
            Functional::new(combination(rng, n, &chosen, 1, 3))
        };
        for _ in 0..ADDITIVITY_PAIRS {
            let f = pick(rng);
            let g = pick(rng);
            let a = extend::norm_additivity_check(s, alpha, &f, &g)?;
            let w = extend::additivity_extension_witness(s, alpha, &f, &g)?;
            r.additivity_pairs += 1;
            let ok = match &w {
                Some(w) => a.additive && w.verify(&f, &g, &a.norm_f, &a.lhs),
                None => !a.additive,
            };
            r.additivity_agree += ok as usize;
        }
    }
    Ok(r)
}

/// All routes and the dual construction on one random extension problem.
pub fn bnn_agreement(ep: &ExtensionProblem) -> ordrep::Result<BnnAgreement> {
    let mut routes = Vec::new();
    let mut verified = true;
    let mut norm_ok = true;
    let mut sub_norm = Norm::Infinite;
    let results = Route::ALL
        .into_iter()
        .filter(|r| *r != Route::Dual)
        .map(|r| extend::bnn_check_route(ep, r))
        .chain(std::iter::once(extend::bnn_construct(ep)));
    for r in results {
        let r = r?;
        verified &= r.verify(ep)?;
        if let (Some(e), Norm::Finite(n)) = (&r.extension, &r.sub_norm) {
            norm_ok &= ep.space.functional_norm(ep.alpha, e)? == Norm::Finite(n.clone());
        }
        sub_norm = r.sub_norm.clone();
        routes.push((r.route.name().to_string(), r.extendable));
    }
    Ok(BnnAgreement {
        subspace_dim: ep.sub.dim(),
        subspace_norm: sub_norm.to_string(),
        routes,
        certificates_verified: verified,
        extension_norm_matches: norm_ok,
    })
}

fn evaluate(index: usize, inst: &Instance, opts: &SuiteOptions) -> ordrep::Result<InstanceResult> {
    let s = &inst.space;
    let mut rng = rng_for(opts.sample_seed, index as u64 + 1);
    let fs = represent::build_representation(s)?;
    let report = represent::verify_representation(s, &fs)?;
    let mut alphas = Vec::new();
    for alpha in 0..s.seminorms().len() {
        let iso = report.isometric_everywhere[alpha].holds();
        alphas.push(check_alpha(s, alpha, iso, &mut rng, opts.corruption)?);
    }
    let mut bnn = Vec::new();
    for _ in 0..BNN_TRIPLES {
        let (sub, values) = random_subspace(&mut rng, s.dim());
        let ep = ExtensionProblem::new(s.clone(), 0, sub, values)?;
        bnn.push(bnn_agreement(&ep)?);
    }
    let mut disagreements: Vec<String> =
        alphas.iter().flat_map(AlphaResult::disagreements).collect();
    for (k, b) in bnn.iter().enumerate() {
        if !b.agrees() {
            disagreements.push(format!("extension problem {k}: routes {:?}", b.routes));
        }
    }
    Ok(InstanceResult {
        index,
        name: inst.name.clone(),
        alphas,
        bnn,
        disagreements,
        error: None,
    })
}

fn evaluate_or_error(index: usize, inst: &Instance, opts: &SuiteOptions) -> InstanceResult {
    evaluate(index, inst, opts).unwrap_or_else(|e| InstanceResult {
        index,
        name: inst.name.clone(),
        alphas: Vec::new(),
        bnn: Vec::new(),
        disagreements: Vec::new(),
        error: Some(e.to_string()),
    })
}

/// Shrinks a disagreeing instance to a single seminorm when that seminorm
/// alone still spans and still disagrees.
fn reproducer(inst: &Instance, result: &InstanceResult, opts: &SuiteOptions) -> Instance {
    let bad = result
        .alphas
        .iter()
        .find(|a| !a.disagreements().is_empty())
        .map(|a| a.alpha);
    if let Some(alpha) = bad {
        let s = &inst.space;
        if let Ok(single) =
            CalibratedSpace::new(s.cone().clone(), vec![s.seminorms()[alpha].clone()])
        {
            let mut small = Instance::bare(single);
            small.name = inst.name.clone();
            if !evaluate_or_error(result.index, &small, opts).agrees() {
                return small;
            }
        }
    }
    let mut out = Instance::bare(inst.space.clone());
    out.name = inst.name.clone();
    out
}

pub fn run_suite(instances: &[Instance], opts: &SuiteOptions) -> SuiteReport {
    let start = Instant::now();
    let timed: Vec<(InstanceResult, f64)> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let t = Instant::now();
            let r = evaluate_or_error(i, inst, opts);
            (r, t.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let (results, per_instance_ms): (Vec<_>, Vec<_>) = timed.into_iter().unzip();
    let verdict = match results.iter().find(|r| !r.agrees()) {
        None => Verdict::AllAgree,
        Some(r) => {
            let mut reasons = r.disagreements.clone();
            reasons.extend(r.error.clone());
            Verdict::Disagreement {
                index: r.index,
                reasons,
                reproducer: Box::new(reproducer(&instances[r.index], r, opts).to_raw()),
            }
        }
    };
    SuiteReport {
        format: FORMAT_VERSION,
        instances: results,
        verdict,
        timing: Timing {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
            per_instance_ms,
        },
    }
}

/// Rational as its exact string, for report fields.
pub fn exact(r: &ordrep::Rat) -> String {
    ordrep::exactla::fmt_rat(r)
}
