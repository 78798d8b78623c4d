//! Exact decision procedures for the representability conditions, state
//! construction, and (norm-additive) decompositions of functionals.
//!
//! Every negative answer carries a witness that [`Witness::verify`] checks by
//! plain evaluation, without trusting an LP.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{rat, RVec, Rat};
use crate::lp::{self, Bound, LpOutcome, LpProblem, Relation, Sense};
use crate::model::{self, VecExpr};
use crate::represent::{self, max_abs_over};
use crate::space::{CalibratedSpace, Functional, Norm, PolyhedralSeminorm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    /// `a ≤ x ≤ b`, `p(a), p(b) ≤ 1` forces `p(x) ≤ 1`.
    FullBall,
    /// `p(y) ≤ max{p(x), p(z)}` whenever `x ≤ y ≤ z`.
    Sandwich,
    /// Every element is semi positive or semi negative.
    SemiAll,
    /// `p(x) = sup |f(x)|` over the states.
    StateSup,
    /// Every functional splits as `v₁ - v₂` with `|u| = |v₁| + |v₂|`.
    GkDecomposable,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::FullBall,
        Criterion::Sandwich,
        Criterion::SemiAll,
        Criterion::StateSup,
        Criterion::GkDecomposable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::FullBall => "full_ball",
            Criterion::Sandwich => "sandwich",
            Criterion::SemiAll => "semi_all",
            Criterion::StateSup => "state_sup",
            Criterion::GkDecomposable => "gk_decomposable",
        }
    }

    pub fn from_name(name: &str) -> Option<Criterion> {
        Criterion::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `lower ≤ middle ≤ upper` with `p(lower), p(upper) ≤ 1 < p(middle)`.
    Triple {
        lower: RVec,
        middle: RVec,
        upper: RVec,
    },
    /// `x` with `⟨row, x⟩ > max_V |⟨v, x⟩|` over the states. `l_pos`,
    /// `l_neg ∈ E₊` show directly that `x` is neither semi positive
    /// (`p(x + l_pos) < p(x)`) nor semi negative (`p(x - l_neg) < p(x)`).
    NonSemi {
        row: RVec,
        x: RVec,
        l_pos: RVec,
        l_neg: RVec,
    },
}

impl Witness {
    /// Evaluation-only check. The separation part of a `NonSemi` witness
    /// needs the state list; pass it to include that check.
    pub fn verify(
        &self,
        s: &CalibratedSpace,
        alpha: usize,
        states: Option<&[RVec]>,
    ) -> Result<bool> {
        let sn = s.seminorm(alpha)?;
        let cone = s.cone();
        let one = Rat::one();
        Ok(match self {
            Witness::Triple {
                lower,
                middle,
                upper,
            } => {
                cone.contains_by_facets(&middle.sub(lower))?
                    && cone.contains_by_facets(&upper.sub(middle))?
                    && sn.eval(lower)? <= one
                    && sn.eval(upper)? <= one
                    && sn.eval(middle)? > one
            }
            Witness::NonSemi {
                row,
                x,
                l_pos,
                l_neg,
            } => {
                let px = sn.eval(x)?;
                let is_row = sn.signed_rows().any(|a| a == *row);
                let separated = match states {
                    Some(v) => row.dot(x) > max_abs_over(v, x),
                    None => true,
                };
                is_row
                    && separated
                    && cone.contains_by_facets(l_pos)?
                    && cone.contains_by_facets(l_neg)?
                    && sn.eval(&x.add(l_pos))? < px
                    && sn.eval(&x.sub(l_neg))? < px
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub alpha: usize,
    pub holds: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> Rat {
        match self {
            Sign::Plus => Rat::one(),
            Sign::Minus => -Rat::one(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// A state `f` with `f(x0) = sign·p_α(x0)`. `weights` are the `2m`
/// multipliers `μ⁺, μ⁻ ≥ 0`, `Σμ ≤ 1`, with `f = Σ (μ⁺_i - μ⁻_i) a_i`,
/// proving `f ∈ K_α` without an LP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateCertificate {
    pub f: Functional,
    pub alpha: usize,
    pub sign: Sign,
    pub x0: RVec,
    pub weights: RVec,
}

impl StateCertificate {
    pub fn verify(&self, s: &CalibratedSpace) -> Result<bool> {
        let sn = s.seminorm(self.alpha)?;
        let m = sn.rows().len();
        let w = &self.weights;
        if w.dim() != 2 * m || w.iter().any(Signed::is_negative) {
            return Ok(false);
        }
        if w.iter().sum::<Rat>() > Rat::one() {
            return Ok(false);
        }
        let mut f = RVec::zeros(s.dim());
        for (i, a) in sn.rows().iter().enumerate() {
            f = f.axpy(&(&w[i] - &w[m + i]), a);
        }
        Ok(f == self.f.coeffs
            && self.f.is_positive_on(s.cone())
            && self.f.apply(&self.x0) == self.sign.factor() * sn.eval(&self.x0)?)
    }
}

/// Result of a semi-positivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Semi {
    Holds,
    /// `l ∈ E₊` lowering the seminorm.
    Fails {
        l: RVec,
    },
}

impl Semi {
    pub fn holds(&self) -> bool {
        matches!(self, Semi::Holds)
    }
}

/// `p_α(x + l) ≥ p_α(x)` for every `l ∈ E₊`, decided by minimizing
/// `max_i |⟨a_i, x + l⟩|` over the cone.
pub fn semi_positive(s: &CalibratedSpace, alpha: usize, x: &RVec) -> Result<Semi> {
    semi(s, alpha, x, Rat::one())
}

/// `p_α(x - l) ≥ p_α(x)` for every `l ∈ E₊`.
pub fn semi_negative(s: &CalibratedSpace, alpha: usize, x: &RVec) -> Result<Semi> {
    semi(s, alpha, x, -Rat::one())
}

fn semi(s: &CalibratedSpace, alpha: usize, x: &RVec, sign: Rat) -> Result<Semi> {
    s.check_vec(x, "semi positivity argument")?;
    let sn = s.seminorm(alpha)?;
    let n = s.dim();
    let mut p = LpProblem::new(Sense::Minimize);
    let ls = p.add_vars(n, Bound::free());
    let t = p.add_var(Bound::free());
    p.set_objective(t, Rat::one());
    let l = VecExpr::vars(ls.clone());
    model::in_cone(&mut p, s.cone(), &l);
    // |⟨a, x + sign·l⟩| ≤ t, written with the constant moved right.
    for a in sn.rows() {
        let ax = a.dot(x);
        let mut e = model::scaled(&l.dot(a), &sign);
        e.push((t, -Rat::one()));
        p.add_terms(e.clone(), Relation::Le, -ax.clone());
        let mut e = model::scaled(&l.dot(a), &sign);
        e.push((t, Rat::one()));
        p.add_terms(e, Relation::Ge, -ax);
    }
    let px = sn.value(x);
    match lp::solve(&p)? {
        LpOutcome::Optimal(o) if o.value < px => Ok(Semi::Fails {
            l: model::slice(&o.primal, ls),
        }),
        LpOutcome::Optimal(_) => Ok(Semi::Holds),
        other => unreachable!(
            "semi positivity LP is bounded and feasible, got {}",
            other.status()
        ),
    }
}

/// A state with `f(x0) = sign·p_α(x0)`, by LP feasibility over the
/// multiplier encoding of `K_α` intersected with the dual cone.
pub fn find_state_signed(
    s: &CalibratedSpace,
    alpha: usize,
    x0: &RVec,
    sign: Sign,
) -> Result<Option<StateCertificate>> {
    s.check_vec(x0, "state target")?;
    let sn = s.seminorm(alpha)?;
    let m = sn.rows().len();
    let px = sn.value(x0);
    if px.is_zero() {
        return Ok(Some(StateCertificate {
            f: Functional::zero(s.dim()),
            alpha,
            sign,
            x0: x0.clone(),
            weights: RVec::zeros(2 * m),
        }));
    }
    let mut p = LpProblem::feasibility(2 * m, Bound::nonneg());
    let f = model::dual_ball_point(s.dim(), sn.rows(), 0..2 * m);
    p.add_terms(model::sum_of(0..2 * m), Relation::Le, Rat::one());
    for g in s.cone().generators() {
        p.add_terms(f.dot(g), Relation::Ge, Rat::zero());
    }
    p.add_terms(f.dot(x0), Relation::Eq, sign.factor() * px);
    let Some(o) = lp::solve(&p)?.optimum().cloned() else {
        return Ok(None);
    };
    let weights = o.primal;
    let mut coeffs = RVec::zeros(s.dim());
    for (i, a) in sn.rows().iter().enumerate() {
        coeffs = coeffs.axpy(&(&weights[i] - &weights[m + i]), a);
    }
    Ok(Some(StateCertificate {
        f: Functional::new(coeffs),
        alpha,
        sign,
        x0: x0.clone(),
        weights,
    }))
}

/// A `+` state if one exists, else a `-` state.
pub fn find_state(
    s: &CalibratedSpace,
    alpha: usize,
    x0: &RVec,
) -> Result<Option<StateCertificate>> {
    match find_state_signed(s, alpha, x0, Sign::Plus)? {
        Some(c) => Ok(Some(c)),
        None => find_state_signed(s, alpha, x0, Sign::Minus),
    }
}

/// Point `anchor + t·ray` whose objective reaches `target`.
fn along_ray(anchor: &RVec, ray: &RVec, objective: &RVec, target: &Rat) -> RVec {
    let slope = objective.dot(ray);
    debug_assert!(slope.is_positive());
    let deficit = target - objective.dot(anchor);
    if deficit.is_positive() {
        anchor.axpy(&(deficit / slope), ray)
    } else {
        anchor.clone()
    }
}

/// Full unit ball test. Per signed row `a`: maximize `⟨a, y⟩` over
/// `x ≤ y ≤ z` with `p(x), p(z) ≤ 1`; the ball is full iff no optimum
/// exceeds 1.
pub fn check_full(s: &CalibratedSpace, alpha: usize) -> Result<CriterionReport> {
    sandwich_test(s, alpha, Criterion::FullBall)
}

/// Same decision as [`check_full`], reported under the sandwich tag.
pub fn check_sandwich(s: &CalibratedSpace, alpha: usize) -> Result<CriterionReport> {
    sandwich_test(s, alpha, Criterion::Sandwich)
}

fn sandwich_test(
    s: &CalibratedSpace,
    alpha: usize,
    criterion: Criterion,
) -> Result<CriterionReport> {
    let sn = s.seminorm(alpha)?;
    let n = s.dim();
    for a in sn.signed_rows() {
        let mut p = LpProblem::new(Sense::Maximize);
        let xs = p.add_vars(n, Bound::free());
        let ys = p.add_vars(n, Bound::free());
        let zs = p.add_vars(n, Bound::free());
        let mut objective = vec![Rat::zero(); 3 * n];
        for (k, c) in a.iter().enumerate() {
            p.set_objective(ys.start + k, c.clone());
            objective[n + k] = c.clone();
        }
        let objective = RVec::new(objective);
        let (x, y, z) = (
            VecExpr::vars(xs.clone()),
            VecExpr::vars(ys.clone()),
            VecExpr::vars(zs.clone()),
        );
        model::in_cone(&mut p, s.cone(), &y.minus(&x));
        model::in_cone(&mut p, s.cone(), &z.minus(&y));
        model::in_unit_ball(&mut p, sn.rows(), &x);
        model::in_unit_ball(&mut p, sn.rows(), &z);
        let point = match lp::solve(&p)? {
            LpOutcome::Optimal(o) if o.value > Rat::one() => Some(o.primal),
            LpOutcome::Unbounded { anchor, ray } => {
                Some(along_ray(&anchor, &ray, &objective, &rat(2)))
            }
            _ => None,
        };
        if let Some(pt) = point {
            return Ok(CriterionReport {
                criterion,
                alpha,
                holds: false,
                witness: Some(Witness::Triple {
                    lower: model::slice(&pt, xs),
                    middle: model::slice(&pt, ys),
                    upper: model::slice(&pt, zs),
                }),
            });
        }
    }
    Ok(CriterionReport {
        criterion,
        alpha,
        holds: true,
        witness: None,
    })
}

/// Decides `conv(B_α ∪ -B_α) = K_α` by one membership LP per row, using the
/// state vertices of `α`.
pub fn check_state_cover(s: &CalibratedSpace, alpha: usize) -> Result<CriterionReport> {
    let states = represent::state_vertices(s.seminorm(alpha)?, s.cone())?;
    check_state_cover_with(s, alpha, &states, Criterion::StateSup)
}

/// [`check_state_cover`] with precomputed states, reported under `criterion`.
pub fn check_state_cover_with(
    s: &CalibratedSpace,
    alpha: usize,
    states: &[RVec],
    criterion: Criterion,
) -> Result<CriterionReport> {
    let sn = s.seminorm(alpha)?;
    for a in sn.rows() {
        if let Some(x) = uncovered(s.dim(), states, a)? {
            let (row, x) = if a.dot(&x) > max_abs_over(states, &x) {
                (a.clone(), x)
            } else {
                (a.neg(), x.neg())
            };
            let witness = non_semi_witness(s, alpha, row, x)?;
            return Ok(CriterionReport {
                criterion,
                alpha,
                holds: false,
                witness: Some(witness),
            });
        }
    }
    Ok(CriterionReport {
        criterion,
        alpha,
        holds: true,
        witness: None,
    })
}

/// `None` when `a ∈ conv(V ∪ -V)`; otherwise `x` with
/// `⟨a, x⟩ > max_V |⟨v, x⟩|`, read off the Farkas multipliers.
fn uncovered(dim: usize, states: &[RVec], a: &RVec) -> Result<Option<RVec>> {
    let nonzero: Vec<RVec> = states.iter().filter(|v| !v.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(Some(a.clone()));
    }
    let k = nonzero.len();
    let mut p = LpProblem::feasibility(2 * k, Bound::nonneg());
    let comb = model::dual_ball_point(dim, &nonzero, 0..2 * k);
    model::equals(&mut p, &comb, a);
    p.add_terms(model::sum_of(0..2 * k), Relation::Le, Rat::one());
    match lp::solve(&p)? {
        LpOutcome::Infeasible(farkas) => {
            // Multipliers η on the coordinate rows, y₀ on the mass row give
            // ⟨η, a⟩ + y₀ < 0 ≤ y₀ - |⟨η, v⟩|, so x = -η separates.
            let eta = RVec::new(farkas.multipliers[..dim].to_vec());
            let x = eta.neg();
            if a.dot(&x) > max_abs_over(&nonzero, &x) {
                Ok(Some(x))
            } else {
                Err(Error::Hypothesis(format!(
                    "Farkas multipliers for row {a} do not separate"
                )))
            }
        }
        _ => Ok(None),
    }
}

fn non_semi_witness(s: &CalibratedSpace, alpha: usize, row: RVec, x: RVec) -> Result<Witness> {
    let l_pos = match semi_positive(s, alpha, &x)? {
        Semi::Fails { l } => l,
        Semi::Holds => {
            return Err(Error::Hypothesis(format!(
                "{x} attains no state value yet is semi positive"
            )))
        }
    };
    let l_neg = match semi_negative(s, alpha, &x)? {
        Semi::Fails { l } => l,
        Semi::Holds => {
            return Err(Error::Hypothesis(format!(
                "{x} attains no state value yet is semi negative"
            )))
        }
    };
    Ok(Witness::NonSemi {
        row,
        x,
        l_pos,
        l_neg,
    })
}

/// Dispatch by criterion tag. The five conditions are equivalent; each tag
/// is decided by the exact procedure matching its formulation.
pub fn check(s: &CalibratedSpace, alpha: usize, criterion: Criterion) -> Result<CriterionReport> {
    match criterion {
        Criterion::FullBall => check_full(s, alpha),
        Criterion::Sandwich => check_sandwich(s, alpha),
        Criterion::SemiAll | Criterion::StateSup | Criterion::GkDecomposable => {
            let states = represent::state_vertices(s.seminorm(alpha)?, s.cone())?;
            check_state_cover_with(s, alpha, &states, criterion)
        }
    }
}

/// Dual-cone membership of the decomposition parts and `v₁ - v₂ = u`, with
/// `v_k = Σ (μ⁺ - μ⁻) a_i` so that both have finite norm.
fn decomposition_lp(
    s: &CalibratedSpace,
    sn: &PolyhedralSeminorm,
    u: &RVec,
    sense: Sense,
) -> LpProblem {
    let n = s.dim();
    let m = sn.rows().len();
    let mut p = LpProblem::new(sense);
    let mu1 = p.add_vars(2 * m, Bound::nonneg());
    let mu2 = p.add_vars(2 * m, Bound::nonneg());
    let v1 = model::dual_ball_point(n, sn.rows(), mu1);
    let v2 = model::dual_ball_point(n, sn.rows(), mu2);
    for g in s.cone().generators() {
        p.add_terms(v1.dot(g), Relation::Ge, Rat::zero());
        p.add_terms(v2.dot(g), Relation::Ge, Rat::zero());
    }
    model::equals(&mut p, &v1.minus(&v2), u);
    p
}

fn parts(sn: &PolyhedralSeminorm, n: usize, primal: &RVec) -> (Functional, Functional, Rat, Rat) {
    let m = sn.rows().len();
    let build = |off: usize| {
        let mut v = RVec::zeros(n);
        for (i, a) in sn.rows().iter().enumerate() {
            v = v.axpy(&(&primal[off + i] - &primal[off + m + i]), a);
        }
        v
    };
    let mass = |off: usize| primal[off..off + 2 * m].iter().sum::<Rat>();
    (
        Functional::new(build(0)),
        Functional::new(build(2 * m)),
        mass(0),
        mass(2 * m),
    )
}

fn finite_norm(s: &CalibratedSpace, alpha: usize, u: &Functional) -> Result<Rat> {
    s.check_vec(&u.coeffs, "functional")?;
    match s.functional_norm(alpha, u)? {
        Norm::Finite(t) => Ok(t),
        Norm::Infinite => Err(Error::InfiniteNorm(u.coeffs.clone())),
    }
}

/// `u = v₁ - v₂` with `v₁, v₂` positive. No norm optimality.
pub fn krein_decompose(
    s: &CalibratedSpace,
    alpha: usize,
    u: &Functional,
) -> Result<(Functional, Functional)> {
    let sn = s.seminorm(alpha)?;
    finite_norm(s, alpha, u)?;
    let p = decomposition_lp(s, sn, &u.coeffs, Sense::Minimize);
    match lp::solve(&p)? {
        LpOutcome::Optimal(o) => {
            let (v1, v2, _, _) = parts(sn, s.dim(), &o.primal);
            Ok((v1, v2))
        }
        LpOutcome::Infeasible(farkas) => Err(Error::Infeasible {
            context: "positive decomposition",
            farkas: Box::new(farkas),
        }),
        LpOutcome::Unbounded { .. } => unreachable!("zero objective"),
    }
}

/// A positive decomposition of minimal norm sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkDecomposition {
    pub v1: Functional,
    pub v2: Functional,
    pub norm_v1: Rat,
    pub norm_v2: Rat,
    pub norm_u: Rat,
    /// `|v₁| + |v₂| - |u| ≥ 0`
    pub gap: Rat,
}

/// Minimizes `|v₁| + |v₂|` over positive `v₁ - v₂ = u`; `None` when `u` has
/// no positive decomposition.
pub fn grosberg_krein(
    s: &CalibratedSpace,
    alpha: usize,
    u: &Functional,
) -> Result<Option<GkDecomposition>> {
    let sn = s.seminorm(alpha)?;
    let norm_u = finite_norm(s, alpha, u)?;
    let mut p = decomposition_lp(s, sn, &u.coeffs, Sense::Minimize);
    for v in 0..p.nvars() {
        p.set_objective(v, Rat::one());
    }
    match lp::solve(&p)? {
        LpOutcome::Optimal(o) => {
            // At the optimum each mass equals the gauge of its part.
            let (v1, v2, t1, t2) = parts(sn, s.dim(), &o.primal);
            let gap = &o.value - &norm_u;
            Ok(Some(GkDecomposition {
                v1,
                v2,
                norm_v1: t1,
                norm_v2: t2,
                norm_u,
                gap,
            }))
        }
        LpOutcome::Infeasible(_) => Ok(None),
        LpOutcome::Unbounded { .. } => unreachable!("objective bounded below by 0"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::PolyCone;
    use crate::exactla::rat;

    fn v(x: &[i64]) -> RVec {
        RVec::from_i64s(x)
    }

    fn sn(rows: &[&[i64]]) -> PolyhedralSeminorm {
        PolyhedralSeminorm::new("p", rows[0].len(), rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn orthant(rows: &[&[i64]]) -> CalibratedSpace {
        let p = sn(rows);
        let mut family = vec![p.clone()];
        if p.matrix().rank() < 2 {
            family.push(PolyhedralSeminorm::sup(2));
        }
        CalibratedSpace::new(PolyCone::orthant(2), family).unwrap()
    }

    fn wedge_sup() -> CalibratedSpace {
        let cone = PolyCone::from_generators(2, vec![v(&[4, 1]), v(&[8, 1])]).unwrap();
        CalibratedSpace::new(cone, vec![PolyhedralSeminorm::sup(2)]).unwrap()
    }

    #[test]
    fn semi_positivity_examples() {
        let s = orthant(&[&[1, 0], &[0, 1]]);
        assert!(semi_positive(&s, 0, &v(&[1, 1])).unwrap().holds());
        // (1,1) - (1,1) = 0, so (1,1) is not semi negative.
        let Semi::Fails { l } = semi_negative(&s, 0, &v(&[1, 1])).unwrap() else {
            panic!()
        };
        assert!(s.eval_seminorm(0, &v(&[1, 1]).sub(&l)).unwrap() < rat(1));
        assert!(semi_negative(&s, 0, &v(&[1, -2])).unwrap().holds());
        let Semi::Fails { l } = semi_positive(&s, 0, &v(&[1, -2])).unwrap() else {
            panic!()
        };
        assert!(s.cone().contains_by_facets(&l).unwrap());
        assert!(s.eval_seminorm(0, &v(&[1, -2]).add(&l)).unwrap() < rat(2));
        // the hand witness
        assert_eq!(s.eval_seminorm(0, &v(&[1, 0])).unwrap(), rat(1));

        let s = orthant(&[&[1, 0]]);
        assert!(semi_positive(&s, 0, &v(&[1, -2])).unwrap().holds());
    }

    #[test]
    fn states() {
        let s = orthant(&[&[1, 0]]);
        let c = find_state(&s, 0, &v(&[1, -2])).unwrap().unwrap();
        assert!(c.verify(&s).unwrap());
        assert_eq!(c.sign, Sign::Plus);
        assert_eq!(c.f, Functional::from_i64s(&[1, 0]));

        let s = orthant(&[&[1, 0], &[0, 1]]);
        assert!(find_state_signed(&s, 0, &v(&[1, -2]), Sign::Plus)
            .unwrap()
            .is_none());
        let c = find_state(&s, 0, &v(&[1, -2])).unwrap().unwrap();
        assert_eq!(c.sign, Sign::Minus);
        assert_eq!(c.f, Functional::from_i64s(&[0, 1]));
        assert!(c.verify(&s).unwrap());

        let s = orthant(&[&[1, -1]]);
        let c = find_state(&s, 0, &v(&[3, 3])).unwrap().unwrap();
        assert!(c.f.coeffs.is_zero());
        assert!(c.verify(&s).unwrap());
    }

    #[test]
    fn tampered_state_is_rejected() {
        let s = orthant(&[&[1, 0], &[0, 1]]);
        let mut c = find_state(&s, 0, &v(&[2, 1])).unwrap().unwrap();
        assert!(c.verify(&s).unwrap());
        c.f = Functional::from_i64s(&[2, 0]);
        assert!(!c.verify(&s).unwrap());
    }

    #[test]
    fn sup_orthant_is_full() {
        let s = orthant(&[&[1, 0], &[0, 1]]);
        assert!(check_full(&s, 0).unwrap().holds);
        assert!(check_state_cover(&s, 0).unwrap().holds);
    }

    #[test]
    fn l1_gauge_is_not_full() {
        let s = orthant(&[&[1, 1], &[1, -1]]);
        let full = check_full(&s, 0).unwrap();
        assert!(!full.holds);
        assert!(full.witness.unwrap().verify(&s, 0, None).unwrap());

        let hand = Witness::Triple {
            lower: v(&[0, -1]),
            middle: v(&[1, -1]),
            upper: v(&[1, 0]),
        };
        assert!(hand.verify(&s, 0, None).unwrap());

        let states = represent::state_vertices(s.seminorm(0).unwrap(), s.cone()).unwrap();
        let cover = check_state_cover(&s, 0).unwrap();
        assert!(!cover.holds);
        let w = cover.witness.unwrap();
        assert!(w.verify(&s, 0, Some(&states)).unwrap());
        let Witness::NonSemi { x, .. } = &w else {
            panic!()
        };
        assert!(find_state(&s, 0, x).unwrap().is_none());
    }

    #[test]
    fn difference_seminorm_cover_fails() {
        let s = orthant(&[&[1, -1]]);
        let r = check_state_cover(&s, 0).unwrap();
        assert!(!r.holds);
        let states = [v(&[0, 0])];
        assert!(r.witness.unwrap().verify(&s, 0, Some(&states)).unwrap());
        assert!(!check_full(&s, 0).unwrap().holds);
    }

    #[test]
    fn wedge_full_agrees_with_cover() {
        let s = wedge_sup();
        assert_eq!(
            check_full(&s, 0).unwrap().holds,
            check_state_cover(&s, 0).unwrap().holds
        );
    }

    #[test]
    fn criterion_names_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(Criterion::from_name(c.name()), Some(c));
        }
        assert_eq!(Criterion::from_name("nope"), None);
    }

    #[test]
    fn krein_examples() {
        let s = orthant(&[&[1, 0], &[0, 1]]);
        let u = Functional::from_i64s(&[1, -1]);
        let (v1, v2) = krein_decompose(&s, 0, &u).unwrap();
        assert_eq!(v1.coeffs.sub(&v2.coeffs), u.coeffs);
        assert!(v1.is_positive_on(s.cone()) && v2.is_positive_on(s.cone()));

        let s = wedge_sup();
        let u = Functional::from_i64s(&[0, 1]);
        let (v1, v2) = krein_decompose(&s, 0, &u).unwrap();
        assert_eq!(v1.coeffs.sub(&v2.coeffs), u.coeffs);
        assert!(v1.is_positive_on(s.cone()) && v2.is_positive_on(s.cone()));
    }

    #[test]
    fn gk_examples() {
        let s = orthant(&[&[1, 0], &[0, 1]]);
        let d = grosberg_krein(&s, 0, &Functional::from_i64s(&[1, -1]))
            .unwrap()
            .unwrap();
        assert_eq!(d.v1, Functional::from_i64s(&[1, 0]));
        assert_eq!(d.v2, Functional::from_i64s(&[0, 1]));
        assert_eq!((d.norm_u.clone(), d.gap.clone()), (rat(2), rat(0)));

        let d = grosberg_krein(&s, 0, &Functional::zero(2))
            .unwrap()
            .unwrap();
        assert!(d.v1.coeffs.is_zero() && d.v2.coeffs.is_zero() && d.gap.is_zero());

        // Non-full space: |u| = 1 but every positive split costs 2.
        let s = orthant(&[&[1, 1], &[1, -1]]);
        let d = grosberg_krein(&s, 0, &Functional::from_i64s(&[1, -1]))
            .unwrap()
            .unwrap();
        assert_eq!(d.norm_u, rat(1));
        assert_eq!(d.gap, rat(1));
        // u = (0, 1) is itself positive, so it splits without loss.
        let d = grosberg_krein(&s, 0, &Functional::from_i64s(&[0, 1]))
            .unwrap()
            .unwrap();
        assert_eq!(d.gap, rat(0));
    }

    #[test]
    fn infinite_norm_is_an_error() {
        let s = orthant(&[&[1, 0]]);
        assert!(matches!(
            grosberg_krein(&s, 0, &Functional::from_i64s(&[0, 1])),
            Err(Error::InfiniteNorm(_))
        ));
    }
}
