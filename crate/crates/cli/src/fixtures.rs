//! The fixture corpus: worked examples with known exact values, plus small
//! spaces whose answers are evident.

use ordrep::criteria::{self, Witness};
use ordrep::extend::{self, ExtensionProblem, Route};
use ordrep::represent;
use ordrep::{rat, Functional, Norm, RVec};

use crate::format::{parse_instance, Instance};

pub const FIXTURES: [(&str, &str); 9] = [
    ("bnn-sup", include_str!("../fixtures/bnn-sup.json")),
    (
        "bnn-first-coordinate",
        include_str!("../fixtures/bnn-first-coordinate.json"),
    ),
    (
        "additivity-wedge",
        include_str!("../fixtures/additivity-wedge.json"),
    ),
    ("l1-gauge", include_str!("../fixtures/l1-gauge.json")),
    ("ray-line", include_str!("../fixtures/ray-line.json")),
    (
        "orthant-sup-2",
        include_str!("../fixtures/orthant-sup-2.json"),
    ),
    (
        "orthant-sup-3",
        include_str!("../fixtures/orthant-sup-3.json"),
    ),
    ("flat-sup", include_str!("../fixtures/flat-sup.json")),
    (
        "orthant-difference",
        include_str!("../fixtures/orthant-difference.json"),
    ),
];

pub fn fixture(name: &str) -> Option<Instance> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_instance(text).expect("fixtures are valid"))
}

pub fn all_fixtures() -> Vec<Instance> {
    FIXTURES
        .iter()
        .map(|(_, text)| parse_instance(text).expect("fixtures are valid"))
        .collect()
}

/// One pinned value of a fixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub label: String,
    pub ok: bool,
}

fn v(x: &[i64]) -> RVec {
    RVec::from_i64s(x)
}

/// The extension problem a fixture declares (first subspace functional).
pub fn extension_problem(inst: &Instance, alpha: usize) -> Option<ExtensionProblem> {
    let (_, sf) = inst.subspace_functionals.iter().next()?;
    let sub = inst.subspaces.get(&sf.subspace)?.clone();
    ExtensionProblem::new(inst.space.clone(), alpha, sub, sf.values.clone()).ok()
}

struct Checks(Vec<Expectation>);

impl Checks {
    fn add(&mut self, label: &str, ok: ordrep::Result<bool>) {
        self.0.push(Expectation {
            label: label.to_string(),
            ok: ok.unwrap_or(false),
        });
    }
}

/// Exact values pinned for the named fixtures; empty for unknown names.
pub fn expectations(inst: &Instance) -> Vec<Expectation> {
    let mut c = Checks(Vec::new());
    let s = &inst.space;
    let f = |label: &str| Functional::new(inst.functionals[label].clone());
    match inst.name.as_deref() {
        Some("bnn-sup") => {
            let ep = extension_problem(inst, 0).expect("declared");
            c.add(
                "subspace norm is 1",
                extend::subspace_norm(&ep).map(|n| n == Norm::Finite(rat(1))),
            );
            c.add(
                "condition route rejects with a verified violation",
                extend::bnn_check(&ep)
                    .and_then(|r| Ok(!r.extendable && r.violation.is_some() && r.verify(&ep)?)),
            );
            c.add(
                "dual route is infeasible with a valid Farkas certificate",
                extend::bnn_construct(&ep)
                    .and_then(|r| Ok(!r.extendable && r.farkas.is_some() && r.verify(&ep)?)),
            );
        }
        Some("bnn-first-coordinate") => {
            let ep = extension_problem(inst, 0).expect("declared");
            c.add(
                "subspace norm is 2",
                extend::subspace_norm(&ep).map(|n| n == Norm::Finite(rat(2))),
            );
            c.add(
                "dual route returns 2x with norm 2",
                extend::bnn_construct(&ep).and_then(|r| {
                    Ok(r.extension == Some(Functional::from_i64s(&[2, 0])) && r.verify(&ep)?)
                }),
            );
            c.add(
                "every route extends",
                Route::ALL
                    .into_iter()
                    .map(|route| extend::bnn_check_route(&ep, route).map(|r| r.extendable))
                    .collect::<ordrep::Result<Vec<_>>>()
                    .map(|v| v.into_iter().all(|b| b)),
            );
        }
        Some("additivity-wedge") => {
            let a = extend::norm_additivity_check(s, 0, &f("f"), &f("g"));
            c.add(
                "|f| = 2, |g| = 3, |f+g| = 3, not additive",
                a.map(|a| {
                    a.norm_f == rat(2) && a.norm_g == rat(3) && a.lhs == rat(3) && !a.additive
                }),
            );
            c.add(
                "no dominated extension weights",
                extend::additivity_extension_witness(s, 0, &f("f"), &f("g")).map(|w| w.is_none()),
            );
            c.add(
                "order seminorm of (4,1) for e = (6,1) is 2",
                s.order_seminorm(&inst.order_units["e"], &v(&[4, 1]))
                    .map(|t| t == rat(2)),
            );
        }
        Some("l1-gauge") => {
            let hand = Witness::Triple {
                lower: v(&[0, -1]),
                middle: v(&[1, -1]),
                upper: v(&[1, 0]),
            };
            c.add(
                "hand triple (0,-1) <= (1,-1) <= (1,0) verifies",
                hand.verify(s, 0, None),
            );
            c.add(
                "ball is not full, witness verifies",
                criteria::check_full(s, 0)
                    .and_then(|r| Ok(!r.holds && r.witness.unwrap().verify(s, 0, None)?)),
            );
            c.add(
                "state cover fails, separating element verifies",
                represent::state_vertices(&s.seminorms()[0], s.cone()).and_then(|states| {
                    let r = criteria::check_state_cover(s, 0)?;
                    Ok(!r.holds && r.witness.unwrap().verify(s, 0, Some(&states))?)
                }),
            );
            c.add(
                "u = (1,-1) has norm 1 and minimal positive split 2",
                criteria::grosberg_krein(s, 0, &f("u"))
                    .map(|d| d.is_some_and(|d| d.norm_u == rat(1) && d.gap == rat(1))),
            );
        }
        Some("orthant-sup-2") => {
            c.add(
                "states are 0, (0,1), (1,0)",
                represent::build_representation(s)
                    .and_then(|fs| Ok(fs.vertices(0)? == [v(&[0, 0]), v(&[0, 1]), v(&[1, 0])])),
            );
            c.add(
                "u = (1,-1) splits as (1,0) - (0,1) with gap 0",
                criteria::grosberg_krein(s, 0, &f("u")).map(|d| {
                    d.is_some_and(|d| {
                        d.v1 == Functional::from_i64s(&[1, 0])
                            && d.v2 == Functional::from_i64s(&[0, 1])
                            && d.gap == rat(0)
                    })
                }),
            );
            c.add(
                "order seminorm of (1,-2) for e = (1,1) is 2",
                s.order_seminorm(&inst.order_units["e"], &v(&[1, -2]))
                    .map(|t| t == rat(2)),
            );
        }
        Some("flat-sup") => {
            c.add(
                "states are the four cross-polytope vertices",
                represent::build_representation(s)
                    .map(|fs| fs.vertices(0).map(|v| v.len()).unwrap_or(0) == 4),
            );
        }
        Some("orthant-difference") => {
            c.add(
                "only the zero state",
                represent::build_representation(s)
                    .and_then(|fs| Ok(fs.vertices(0)? == [v(&[0, 0])])),
            );
        }
        Some("ray-line") | Some("orthant-sup-3") => {
            c.add("ball is full", criteria::check_full(s, 0).map(|r| r.holds));
        }
        _ => {}
    }
    c.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse_round_trip_and_meet_expectations() {
        for inst in all_fixtures() {
            let back = parse_instance(&inst.to_json()).unwrap();
            assert_eq!(back, inst);
            let exp = expectations(&inst);
            assert!(!exp.is_empty(), "{:?}", inst.name);
            for e in exp {
                assert!(e.ok, "{:?}: {}", inst.name, e.label);
            }
        }
    }
}
