//! Acceptance run: one pass/fail line per criterion, with its runtime
//! against a fixed budget. Every LP solved along the way re-checks its own
//! certificate; the last criterion reports that tally.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Signed;
use ordrep::criteria::{self, Witness};
use ordrep::extend::{self, ExtensionProblem};
use ordrep::lp::audit;
use ordrep::represent;
use ordrep::space::Monotonicity;
use ordrep::{rat, Functional, Norm, RVec};
use ordrep_cli::fixtures::{extension_problem, fixture};
use ordrep_cli::generate::{
    combination, generate_instance, generate_space, random_subspace, rng_for, Flavor, GenParams,
};
use ordrep_cli::suite::{bnn_agreement, run_suite, SuiteOptions};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn bnn_failure() -> ordrep::Result<Outcome> {
    let inst = fixture("bnn-sup").expect("fixture");
    let ep = extension_problem(&inst, 0).expect("declared");
    let n = extend::subspace_norm(&ep)?;
    let check = extend::bnn_check(&ep)?;
    let violation_ok = match &check.violation {
        Some(viol) => {
            let p_y = ep.space.eval_seminorm(0, &viol.y)?;
            let fx = ep.value_at(&viol.coords);
            check.verify(&ep)? && fx > p_y
        }
        None => false,
    };
    let construct = extend::bnn_construct(&ep)?;
    let farkas_ok = construct.farkas.is_some() && construct.verify(&ep)?;
    let pass = n == Norm::Finite(rat(1))
        && !check.extendable
        && violation_ok
        && !construct.extendable
        && farkas_ok;
    Ok(outcome(
        pass,
        format!(
            "subspace norm {n}; check extendable={} violation verified={violation_ok}; construct extendable={} farkas verified={farkas_ok}",
            check.extendable, construct.extendable
        ),
    ))
}

fn bnn_success() -> ordrep::Result<Outcome> {
    let inst = fixture("bnn-first-coordinate").expect("fixture");
    let ep = extension_problem(&inst, 0).expect("declared");
    let n = extend::subspace_norm(&ep)?;
    let r = extend::bnn_construct(&ep)?;
    let ext_norm = match &r.extension {
        Some(e) => Some(ep.space.functional_norm(0, e)?),
        None => None,
    };
    let pass = n == Norm::Finite(rat(2))
        && r.extendable
        && r.verify(&ep)?
        && ext_norm == Some(Norm::Finite(rat(2)));
    let ext = r
        .extension
        .as_ref()
        .map(|e| e.coeffs.to_string())
        .unwrap_or_default();
    Ok(outcome(
        pass,
        format!(
            "subspace norm {n}; extension {ext} with norm {}",
            ext_norm
                .map(|n| n.to_string())
                .unwrap_or_else(|| "none".into())
        ),
    ))
}

fn additivity_failure() -> ordrep::Result<Outcome> {
    let inst = fixture("additivity-wedge").expect("fixture");
    let f = Functional::new(inst.functionals["f"].clone());
    let g = Functional::new(inst.functionals["g"].clone());
    let a = extend::norm_additivity_check(&inst.space, 0, &f, &g)?;
    let pass = a.norm_f == rat(2) && a.norm_g == rat(3) && a.lhs == rat(3) && !a.additive;
    Ok(outcome(
        pass,
        format!(
            "|f|={} |g|={} |f+g|={} additive={}",
            a.norm_f, a.norm_g, a.lhs, a.additive
        ),
    ))
}

fn fullness_counterexample() -> ordrep::Result<Outcome> {
    let inst = fixture("l1-gauge").expect("fixture");
    let s = &inst.space;
    let sn = &s.seminorms()[0];
    let full = criteria::check_full(s, 0)?;
    // Direct evaluation, independent of the witness verifier.
    let triple_ok = match &full.witness {
        Some(Witness::Triple {
            lower,
            middle,
            upper,
        }) => {
            let one = rat(1);
            s.cone().contains_by_facets(&middle.sub(lower))?
                && s.cone().contains_by_facets(&upper.sub(middle))?
                && sn.eval(lower)? <= one
                && sn.eval(upper)? <= one
                && sn.eval(middle)? > one
        }
        _ => false,
    };
    let states = represent::state_vertices(sn, s.cone())?;
    let cover = criteria::check_state_cover(s, 0)?;
    let separating_ok = match &cover.witness {
        Some(Witness::NonSemi { row, x, .. }) => {
            let best = states
                .iter()
                .map(|v| v.dot(x).abs())
                .max()
                .unwrap_or_else(|| rat(0));
            sn.rows().iter().any(|a| a == row || a.neg() == *row) && row.dot(x) > best
        }
        _ => false,
    };
    let pass = !full.holds && triple_ok && !cover.holds && separating_ok;
    Ok(outcome(
        pass,
        format!(
            "full={} triple verified={triple_ok}; state cover={} separating element verified={separating_ok}",
            full.holds, cover.holds
        ),
    ))
}

fn equivalence_suite() -> ordrep::Result<Outcome> {
    let instances: Vec<_> = (0..50u64)
        .map(|seed| generate_instance(seed, &GenParams::new(1 + seed as usize % 3)))
        .collect::<ordrep::Result<_>>()?;
    let r = run_suite(&instances, &SuiteOptions::default());
    let alphas: Vec<_> = r.instances.iter().flat_map(|i| &i.alphas).collect();
    let holding = alphas.iter().filter(|a| a.full).count();
    let gk: usize = alphas.iter().map(|a| a.gk_samples).sum();
    let pairs: usize = alphas.iter().map(|a| a.additivity_pairs).sum();
    let bad = r.instances.iter().filter(|i| !i.agrees()).count();
    Ok(outcome(
        r.all_agree(),
        format!(
            "{} instances, {} seminorms ({holding} representable); {gk} decompositions, {pairs} additivity pairs; {bad} disagreements",
            instances.len(),
            alphas.len()
        ),
    ))
}

fn bnn_routes() -> ordrep::Result<Outcome> {
    let mut agree = 0;
    let mut extendable = 0;
    for seed in 0..30u64 {
        let s = generate_space(seed, &GenParams::new(2 + seed as usize % 2))?;
        let mut rng = rng_for(seed, 7);
        let (sub, values) = random_subspace(&mut rng, s.dim());
        let ep = ExtensionProblem::new(s, 0, sub, values)?;
        let b = bnn_agreement(&ep)?;
        let first = b.routes[0].1;
        if b.routes.iter().all(|r| r.1 == first)
            && b.certificates_verified
            && b.extension_norm_matches
        {
            agree += 1;
        }
        extendable += first as usize;
    }
    Ok(outcome(
        agree == 30,
        format!("{agree}/30 triples agree across all routes ({extendable} extendable)"),
    ))
}

fn increasing_positives() -> ordrep::Result<Outcome> {
    let mut instances = 0;
    let mut checked = 0;
    let mut exact = 0;
    let mut seed = 0u64;
    while instances < 30 && seed < 1000 {
        let s = generate_space(seed, &GenParams::new(1 + seed as usize % 3))?;
        let mut rng = rng_for(seed, 11);
        seed += 1;
        let increasing: Vec<usize> = (0..s.seminorms().len())
            .filter(|&a| {
                s.is_increasing(a)
                    .map(|m| m == Monotonicity::Increasing)
                    .unwrap_or(false)
            })
            .collect();
        if increasing.is_empty() {
            continue;
        }
        instances += 1;
        let fs = represent::build_representation(&s)?;
        for &alpha in &increasing {
            for _ in 0..20 {
                let x = combination(&mut rng, s.dim(), s.cone().generators(), 0, 4);
                let best = fs
                    .vertices(alpha)?
                    .iter()
                    .map(|v| v.dot(&x))
                    .max()
                    .expect("nonempty");
                checked += 1;
                exact += (best == s.eval_seminorm(alpha, &x)?) as usize;
            }
        }
    }
    Ok(outcome(
        instances == 30 && checked > 0 && exact == checked,
        format!("{instances} instances with an increasing seminorm (seeds 0..{seed}); {exact}/{checked} points exact"),
    ))
}

fn quotient_identity() -> ordrep::Result<Outcome> {
    let mut points = 0;
    let mut points_ok = 0;
    let mut functionals = 0;
    let mut functionals_ok = 0;
    for seed in 0..20u64 {
        let s = generate_space(
            seed,
            &GenParams::new(2 + seed as usize % 2).flavor(Flavor::RankDeficient),
        )?;
        let mut rng = rng_for(seed, 13);
        let alpha = (0..s.seminorms().len())
            .find(|&a| s.seminorms()[a].matrix().rank() < s.dim())
            .expect("rank deficient by construction");
        let q = s.quotient(alpha)?;
        for _ in 0..20 {
            let x = RVec::from_i64s(
                &(0..s.dim())
                    .map(|_| rng.gen_range(-9..=9))
                    .collect::<Vec<_>>(),
            );
            points += 1;
            points_ok += (q.norm().eval(&q.project(&x)?)? == s.eval_seminorm(alpha, &x)?) as usize;
        }
        for _ in 0..10 {
            let f = Functional::new(combination(
                &mut rng,
                s.dim(),
                s.seminorms()[alpha].rows(),
                -4,
                4,
            ));
            functionals += 1;
            let ok = match q.functional(&f)? {
                Some(fq) => q.norm().dual_norm(&fq.coeffs)? == s.functional_norm(alpha, &f)?,
                None => false,
            };
            functionals_ok += ok as usize;
        }
    }
    Ok(outcome(
        points_ok == points && functionals_ok == functionals,
        format!("20 instances; norms match on {points_ok}/{points} points and {functionals_ok}/{functionals} functionals"),
    ))
}

type Criterion = (&'static str, Duration, fn() -> ordrep::Result<Outcome>);

fn main() -> ExitCode {
    audit::reset();
    audit::enable();
    let criteria: [Criterion; 8] = [
        ("BNN failure example", Duration::from_secs(1), bnn_failure),
        ("BNN success example", Duration::from_secs(1), bnn_success),
        (
            "norm additivity failure example",
            Duration::from_secs(1),
            additivity_failure,
        ),
        (
            "fullness counterexample",
            Duration::from_secs(1),
            fullness_counterexample,
        ),
        (
            "theorem-equivalence suite",
            Duration::from_secs(60),
            equivalence_suite,
        ),
        ("BNN route agreement", Duration::from_secs(30), bnn_routes),
        (
            "increasing seminorms on positives",
            Duration::from_secs(30),
            increasing_positives,
        ),
        (
            "quotient identity",
            Duration::from_secs(15),
            quotient_identity,
        ),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed < budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += !pass as usize;
        println!(
            "criterion {} {} {name}: {detail} [{:.3} s, budget {} s]",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    audit::disable();
    let t = audit::tally();
    let pass = t.failed == 0 && t.passed > 0;
    failed += !pass as usize;
    println!(
        "criterion 9 {} LP self-verification: {} certificates verified, {} failed",
        if pass { "PASS" } else { "FAIL" },
        t.passed,
        t.failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
