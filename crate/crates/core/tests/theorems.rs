//! Property tests: the equivalences and identities that the decision
//! procedures must respect, checked on small random spaces.

mod common;

use common::{finite_functional, int_vec, nonneg_weights, positive_point, space};
use num_traits::{One, Signed, Zero};
use ordrep::criteria::{self, Semi, Sign};
use ordrep::extend::{self, ExtensionProblem, Route};
use ordrep::lp::{self, Bound, LpProblem, Relation, Sense};
use ordrep::represent::{self, Check};
use ordrep::space::Monotonicity;
use ordrep::{rat, CalibratedSpace, Functional, Norm, RMat, RVec, Rat, Subspace};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// Brute-force vertices of `{x : |⟨a_i, x⟩| ≤ 1}` for spanning rows.
fn ball_vertices(rows: &[RVec], dim: usize) -> Vec<RVec> {
    let m = rows.len();
    let mut out = Vec::new();
    let mut pick = vec![0usize; dim];
    fn rec(
        start: usize,
        depth: usize,
        m: usize,
        pick: &mut Vec<usize>,
        subsets: &mut Vec<Vec<usize>>,
    ) {
        if depth == pick.len() {
            subsets.push(pick.clone());
            return;
        }
        for i in start..m {
            pick[depth] = i;
            rec(i + 1, depth + 1, m, pick, subsets);
        }
    }
    let mut subsets = Vec::new();
    rec(0, 0, m, &mut pick, &mut subsets);
    for subset in subsets {
        let a = RMat::new(subset.iter().map(|&i| rows[i].clone()).collect(), dim).unwrap();
        if a.rank() < dim {
            continue;
        }
        for signs in 0..(1u32 << dim) {
            let b: RVec = (0..dim)
                .map(|k| {
                    if signs >> k & 1 == 1 {
                        -Rat::one()
                    } else {
                        Rat::one()
                    }
                })
                .collect();
            let x = a.solve(&b).unwrap().unwrap();
            if rows.iter().all(|r| r.dot(&x).abs() <= Rat::one()) {
                out.push(x);
            }
        }
    }
    out
}

fn full_rank_alpha(s: &CalibratedSpace) -> usize {
    (0..s.seminorms().len())
        .find(|&a| s.seminorms()[a].matrix().rank() == s.dim())
        .expect("the appended sup-norm spans")
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn seminorm_axioms(s in space(), x in int_vec(3, 9), y in int_vec(3, 9), l in -5i64..=5) {
        let n = s.dim();
        let x = RVec::new(x[..n].to_vec());
        let y = RVec::new(y[..n].to_vec());
        for p in s.seminorms() {
            let px = p.eval(&x).unwrap();
            prop_assert!(p.eval(&x.add(&y)).unwrap() <= &px + p.eval(&y).unwrap());
            prop_assert_eq!(p.eval(&x.scale(&rat(l))).unwrap(), rat(l).abs() * px);
        }
    }

    #[test]
    fn gauge_matches_ball_vertex_oracle(s in space(), c in prop::collection::vec(-4i64..=4, 8), xs in prop::collection::vec(int_vec(3, 6), 5)) {
        let alpha = full_rank_alpha(&s);
        let sn = &s.seminorms()[alpha];
        let u = finite_functional(&s, alpha, &c);
        let t = s.functional_norm(alpha, &Functional::new(u.clone())).unwrap();
        let oracle = ball_vertices(sn.rows(), s.dim())
            .iter()
            .map(|x| u.dot(x))
            .max()
            .unwrap();
        prop_assert_eq!(t.clone(), Norm::Finite(oracle));
        let t = t.finite().unwrap().clone();
        for x in xs {
            let x = RVec::new(x[..s.dim()].to_vec());
            prop_assert!(u.dot(&x).abs() <= &t * sn.eval(&x).unwrap());
        }
        let (t2, w) = sn.dual_norm_witness(&u).unwrap().unwrap();
        prop_assert_eq!(&t2, &t);
        prop_assert!(sn.eval(&w).unwrap() <= Rat::one());
        prop_assert_eq!(u.dot(&w), t);
    }

    #[test]
    fn increasing_means_no_sampled_violation(s in space(), ws in prop::collection::vec((nonneg_weights(4), nonneg_weights(4)), 20)) {
        for alpha in 0..s.seminorms().len() {
            match s.is_increasing(alpha).unwrap() {
                Monotonicity::Increasing => {
                    for (wy, wl) in &ws {
                        let y = positive_point(&s, wy);
                        let x = y.add(&positive_point(&s, wl));
                        prop_assert!(s.eval_seminorm(alpha, &y).unwrap() <= s.eval_seminorm(alpha, &x).unwrap());
                    }
                }
                Monotonicity::Violated { y, x } => {
                    prop_assert!(s.verify_monotonicity_witness(alpha, &y, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn quotient_is_isometric(s in space(), xs in prop::collection::vec(int_vec(3, 9), 10), cs in prop::collection::vec(prop::collection::vec(-4i64..=4, 8), 5)) {
        for alpha in 0..s.seminorms().len() {
            let q = s.quotient(alpha).unwrap();
            for x in &xs {
                let x = RVec::new(x[..s.dim()].to_vec());
                prop_assert_eq!(q.norm().eval(&q.project(&x).unwrap()).unwrap(), s.eval_seminorm(alpha, &x).unwrap());
            }
            for c in &cs {
                let f = Functional::new(finite_functional(&s, alpha, c));
                let fq = q.functional(&f).unwrap().unwrap();
                prop_assert_eq!(q.norm().dual_norm(&fq.coeffs).unwrap(), s.functional_norm(alpha, &f).unwrap());
            }
        }
    }

    #[test]
    fn states_exist_exactly_for_semi_elements(s in space(), xs in prop::collection::vec(int_vec(3, 5), 6)) {
        for alpha in 0..s.seminorms().len() {
            for x in &xs {
                let x = RVec::new(x[..s.dim()].to_vec());
                for (sign, semi) in [
                    (Sign::Plus, criteria::semi_positive(&s, alpha, &x).unwrap()),
                    (Sign::Minus, criteria::semi_negative(&s, alpha, &x).unwrap()),
                ] {
                    let state = criteria::find_state_signed(&s, alpha, &x, sign).unwrap();
                    prop_assert_eq!(semi.holds(), state.is_some());
                    match (state, semi) {
                        (Some(c), _) => prop_assert!(c.verify(&s).unwrap()),
                        (None, Semi::Fails { l }) => {
                            prop_assert!(s.cone().contains_by_facets(&l).unwrap());
                            let moved = x.add(&l.scale(&sign.factor()));
                            prop_assert!(s.eval_seminorm(alpha, &moved).unwrap() < s.eval_seminorm(alpha, &x).unwrap());
                        }
                        (None, Semi::Holds) => unreachable!(),
                    }
                }
            }
        }
    }

    #[test]
    fn increasing_seminorms_are_recovered_on_positives(s in space(), ws in prop::collection::vec(nonneg_weights(4), 10)) {
        let fs = represent::build_representation(&s).unwrap();
        let report = represent::verify_representation(&s, &fs).unwrap();
        for alpha in 0..s.seminorms().len() {
            let increasing = s.is_increasing(alpha).unwrap() == Monotonicity::Increasing;
            if increasing {
                prop_assert!(report.isometric_on_positives[alpha].holds());
            }
            if report.isometric_on_positives[alpha].holds() {
                for w in &ws {
                    let x = positive_point(&s, w);
                    prop_assert_eq!(fs.state_sup(alpha, &x).unwrap(), s.eval_seminorm(alpha, &x).unwrap());
                }
            }
            if let Check::NormGap { x } = &report.isometric_on_positives[alpha] {
                prop_assert!(s.cone().contains_by_facets(x).unwrap());
                prop_assert!(fs.induced_norm(alpha, x).unwrap() < s.eval_seminorm(alpha, x).unwrap());
            }
        }
    }

    #[test]
    fn representability_conditions_agree(s in space(), us in prop::collection::vec(prop::collection::vec(-4i64..=4, 8), 8), xs in prop::collection::vec(int_vec(3, 6), 8)) {
        for alpha in 0..s.seminorms().len() {
            let states = represent::state_vertices(&s.seminorms()[alpha], s.cone()).unwrap();
            let full = criteria::check_full(&s, alpha).unwrap();
            let cover = criteria::check_state_cover(&s, alpha).unwrap();
            let iso = represent::isometric_everywhere(&s, alpha).unwrap();
            prop_assert_eq!(full.holds, cover.holds);
            prop_assert_eq!(cover.holds, iso);
            if let Some(w) = &full.witness {
                prop_assert!(w.verify(&s, alpha, None).unwrap());
            }
            if let Some(w) = &cover.witness {
                prop_assert!(w.verify(&s, alpha, Some(&states)).unwrap());
                let criteria::Witness::NonSemi { x, .. } = w else { unreachable!() };
                prop_assert!(criteria::find_state(&s, alpha, x).unwrap().is_none());
            }
            if cover.holds {
                for c in &us {
                    let u = Functional::new(finite_functional(&s, alpha, c));
                    let d = criteria::grosberg_krein(&s, alpha, &u).unwrap().unwrap();
                    prop_assert!(d.gap.is_zero());
                    prop_assert_eq!(d.v1.coeffs.sub(&d.v2.coeffs), u.coeffs.clone());
                }
                for x in &xs {
                    let x = RVec::new(x[..s.dim()].to_vec());
                    let c = criteria::find_state(&s, alpha, &x).unwrap();
                    prop_assert!(c.is_some());
                    prop_assert!(c.unwrap().verify(&s).unwrap());
                }
            }
        }
    }

    #[test]
    fn state_vertices_carry_every_supremum(s in space(), xs in prop::collection::vec(int_vec(3, 7), 5)) {
        let alpha = 0;
        let sn = &s.seminorms()[alpha];
        let states = represent::state_vertices(sn, s.cone()).unwrap();
        for v in &states {
            prop_assert!(Functional::new(v.clone()).is_positive_on(s.cone()));
            prop_assert!(sn.dual_norm(v).unwrap().finite().unwrap() <= &Rat::one());
        }
        let m = sn.rows().len();
        for x in xs {
            let x = RVec::new(x[..s.dim()].to_vec());
            // max ⟨f, x⟩ over f = Σ(μ⁺ - μ⁻) a_i, Σμ ≤ 1, f ≥ 0 on generators
            let mut p = LpProblem::new(Sense::Maximize);
            p.add_vars(2 * m, Bound::nonneg());
            for (i, a) in sn.rows().iter().enumerate() {
                p.set_objective(i, a.dot(&x));
                p.set_objective(m + i, -a.dot(&x));
            }
            p.add_terms((0..2 * m).map(|j| (j, Rat::one())), Relation::Le, Rat::one());
            for g in s.cone().generators() {
                let terms: Vec<(usize, Rat)> = sn
                    .rows()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, a)| [(i, a.dot(g)), (m + i, -a.dot(g))])
                    .collect();
                p.add_terms(terms, Relation::Ge, Rat::zero());
            }
            let best = lp::solve(&p).unwrap().optimum().unwrap().value.clone();
            let finite = states.iter().map(|v| v.dot(&x)).max().unwrap();
            prop_assert_eq!(best, finite);
        }
    }

    #[test]
    fn bipositive_representation_detects_the_cone(s in space(), xs in prop::collection::vec(int_vec(3, 6), 10)) {
        let fs = represent::build_representation(&s).unwrap();
        let report = represent::verify_representation(&s, &fs).unwrap();
        for x in xs {
            let x = RVec::new(x[..s.dim()].to_vec());
            let phi_nonneg = fs.evaluate(&x).unwrap().iter().all(|sv| !sv.value.is_negative());
            let inside = s.cone().contains_by_facets(&x).unwrap();
            if inside {
                prop_assert!(phi_nonneg);
            }
            if report.bipositive.holds() && phi_nonneg {
                prop_assert!(inside);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn extension_routes_agree(
        s in space(),
        basis in prop::collection::vec(int_vec(3, 3), 1..=2),
        values in prop::collection::vec(-4i64..=4, 2),
    ) {
        let dim = s.dim();
        let rows: Vec<RVec> = basis.iter().map(|b| RVec::new(b[..dim].to_vec())).collect();
        let Ok(sub) = Subspace::new(RMat::new(rows, dim).unwrap()) else {
            return Ok(());
        };
        let f = RVec::from_i64s(&values[..sub.dim()]);
        let ep = ExtensionProblem::new(s, 0, sub, f).unwrap();
        let reference = extend::bnn_construct(&ep).unwrap();
        prop_assert!(reference.verify(&ep).unwrap());
        for route in Route::ALL {
            let r = extend::bnn_check_route(&ep, route).unwrap();
            prop_assert_eq!(r.extendable, reference.extendable, "route {}", route);
            prop_assert!(r.verify(&ep).unwrap(), "route {}", route);
            if let (Some(e), Norm::Finite(n)) = (&r.extension, &r.sub_norm) {
                prop_assert_eq!(ep.space.functional_norm(0, e).unwrap(), Norm::Finite(n.clone()));
            }
        }
    }

    #[test]
    fn trivial_cone_reduces_to_norm_preserving_extension(
        s in space(),
        dir in int_vec(3, 3),
        value in -4i64..=4,
    ) {
        let dim = s.dim();
        let dir = RVec::new(dir[..dim].to_vec());
        let Ok(sub) = Subspace::new(RMat::new(vec![dir], dim).unwrap()) else {
            return Ok(());
        };
        let flat = CalibratedSpace::new(ordrep::cone::PolyCone::trivial(dim), s.seminorms().to_vec()).unwrap();
        let ep = ExtensionProblem::new(flat, 0, sub, RVec::from_i64s(&[value])).unwrap();
        let finite = !extend::subspace_norm(&ep).unwrap().is_infinite();
        prop_assert_eq!(extend::bnn_check(&ep).unwrap().extendable, finite);
    }

    #[test]
    fn additivity_matches_dominated_weights(s in space(), picks in prop::collection::vec((0usize..16, 1i64..=3), 4)) {
        let alpha = 0;
        let states = represent::state_vertices(&s.seminorms()[alpha], s.cone()).unwrap();
        let positive = |k: usize, c: i64| Functional::new(states[k % states.len()].scale(&rat(c)));
        for pair in picks.chunks(2) {
            let f = positive(pair[0].0, pair[0].1);
            let g = positive(pair[1].0, pair[1].1);
            let a = extend::norm_additivity_check(&s, alpha, &f, &g).unwrap();
            let w = extend::additivity_weights(&s, alpha, &states, &f, &g).unwrap();
            prop_assert_eq!(a.additive, w.is_some());
            if let Some(w) = w {
                prop_assert!(w.verify(&f, &g, &a.norm_f, &a.lhs));
            }
        }
    }
}
