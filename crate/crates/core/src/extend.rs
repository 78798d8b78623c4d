//! Norm-preserving positive extensions of functionals from a subspace, and
//! norm additivity of positive functionals.
//!
//! The extension question has four primal formulations and one dual one;
//! each is a separate LP so that their agreement can be tested. Primal
//! routes run on `f / N`, where `N` is the norm of `f` on the subspace.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::criteria;
use crate::error::{Error, Result};
use crate::exactla::{rat, RMat, RVec, Rat};
use crate::lp::{self, Bound, Farkas, LpOutcome, LpProblem, Relation, Sense};
use crate::model::{self, VecExpr};
use crate::represent;
use crate::space::{CalibratedSpace, Functional, Norm, Subspace};

/// Extend `f`, given by its values on the basis rows of `sub`, from `sub`
/// to the whole space, positively and without increasing `|f|_α`.
#[derive(Clone, Debug)]
pub struct ExtensionProblem {
    pub space: CalibratedSpace,
    pub alpha: usize,
    pub sub: Subspace,
    pub f_on_sub: RVec,
}

impl ExtensionProblem {
    pub fn new(
        space: CalibratedSpace,
        alpha: usize,
        sub: Subspace,
        f_on_sub: RVec,
    ) -> Result<Self> {
        space.seminorm(alpha)?;
        if sub.ambient_dim() != space.dim() {
            return Err(Error::Dimension {
                context: "subspace basis",
                expected: space.dim(),
                found: sub.ambient_dim(),
            });
        }
        if f_on_sub.dim() != sub.dim() {
            return Err(Error::Dimension {
                context: "functional values on the subspace basis",
                expected: sub.dim(),
                found: f_on_sub.dim(),
            });
        }
        Ok(ExtensionProblem {
            space,
            alpha,
            sub,
            f_on_sub,
        })
    }

    /// `f(Σ c_j b_j) = Σ c_j f_j`
    pub fn value_at(&self, coords: &RVec) -> Rat {
        coords.dot(&self.f_on_sub)
    }

    fn basis(&self) -> &RMat {
        self.sub.basis()
    }

    fn point(&self, block: std::ops::Range<usize>) -> VecExpr {
        VecExpr::combination(self.space.dim(), block, self.basis().rows(), &Rat::one())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// `x ∈ X ∩ (A + E₊) ⇒ f(x) ≥ -1`, `A` the unit ball.
    BallPlusCone,
    /// `x ∈ X ∩ (A - E₊) ⇒ f(x) ≤ 1`.
    BallMinusCone,
    /// `x ∈ X`, `x ≤ y ⇒ f(x) ≤ p(y)`.
    DominatedAbove,
    /// `x ∈ X`, `y ≤ x ⇒ f(-x) ≤ p(y)`.
    DominatedBelow,
    /// A positive extension inside `N·K_α`, found directly.
    Dual,
}

impl Route {
    pub const ALL: [Route; 5] = [
        Route::BallPlusCone,
        Route::BallMinusCone,
        Route::DominatedAbove,
        Route::DominatedBelow,
        Route::Dual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::BallPlusCone => "ball_plus_cone",
            Route::BallMinusCone => "ball_minus_cone",
            Route::DominatedAbove => "dominated_above",
            Route::DominatedBelow => "dominated_below",
            Route::Dual => "dual",
        }
    }

    pub fn from_name(name: &str) -> Option<Route> {
        Route::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `x ∈ X` (as `Σ coords_j b_j`) and `y` with `x ≤ y` and `f(x) > N·p(y)`;
/// for infinite `N`, `p(y) = 0 < f(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub coords: RVec,
    pub x: RVec,
    pub y: RVec,
}

impl Violation {
    fn new(ep: &ExtensionProblem, coords: RVec, y: RVec) -> Self {
        let x = ep.basis().combine_rows(&coords);
        Violation { coords, x, y }
    }

    /// `(-x, -y)`: turns `y ≤ x, f(-x) > N·p(y)` into the canonical form.
    fn negated(self) -> Self {
        Violation {
            coords: self.coords.neg(),
            x: self.x.neg(),
            y: self.y.neg(),
        }
    }

    pub fn verify(&self, ep: &ExtensionProblem, sub_norm: &Norm) -> Result<bool> {
        let s = &ep.space;
        let p_y = s.eval_seminorm(ep.alpha, &self.y)?;
        let fx = ep.value_at(&self.coords);
        let in_x = ep.basis().combine_rows(&self.coords) == self.x;
        let ordered = s.cone().contains_by_facets(&self.y.sub(&self.x))?;
        let strict = match sub_norm {
            Norm::Finite(n) => fx > n * p_y,
            Norm::Infinite => p_y.is_zero() && fx.is_positive(),
        };
        Ok(in_x && ordered && strict)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnnResult {
    pub route: Route,
    pub extendable: bool,
    pub extension: Option<Functional>,
    pub sub_norm: Norm,
    pub violation: Option<Violation>,
    pub farkas: Option<Farkas>,
}

impl BnnResult {
    /// Evaluation check of the extension or the violation. The norm of an
    /// extension is confirmed with a gauge LP.
    pub fn verify(&self, ep: &ExtensionProblem) -> Result<bool> {
        if let Some(e) = &self.extension {
            let agrees = ep
                .basis()
                .rows()
                .iter()
                .zip(ep.f_on_sub.iter())
                .all(|(b, fb)| e.apply(b) == *fb);
            let norm_ok = ep.space.functional_norm(ep.alpha, e)? == self.sub_norm;
            return Ok(self.extendable && agrees && e.is_positive_on(ep.space.cone()) && norm_ok);
        }
        match &self.violation {
            Some(v) => Ok(!self.extendable && v.verify(ep, &self.sub_norm)?),
            None => match (&self.farkas, &self.sub_norm) {
                (Some(farkas), Norm::Finite(n)) if self.route == Route::Dual => {
                    Ok(!self.extendable && lp::verify_farkas(&dual_problem(ep, n)?, farkas))
                }
                _ => Ok(false),
            },
        }
    }
}

/// `N = sup{|f(x)| : x ∈ X, p_α(x) ≤ 1}` and, when infinite, coordinates of
/// some `x ∈ X ∩ ker p_α` with `f(x) > 0`.
fn subspace_norm_lp(ep: &ExtensionProblem) -> Result<(Norm, Option<RVec>)> {
    let k = ep.sub.dim();
    if ep.f_on_sub.is_zero() || k == 0 {
        return Ok((Norm::Finite(Rat::zero()), None));
    }
    let sn = ep.space.seminorm(ep.alpha)?;
    let mut p = LpProblem::new(Sense::Maximize);
    let cs = p.add_vars(k, Bound::free());
    for (v, fj) in cs.clone().zip(ep.f_on_sub.iter()) {
        p.set_objective(v, fj.clone());
    }
    model::in_unit_ball(&mut p, sn.rows(), &ep.point(cs.clone()));
    match lp::solve(&p)? {
        LpOutcome::Optimal(o) => Ok((Norm::Finite(o.value), None)),
        LpOutcome::Unbounded { ray, .. } => Ok((Norm::Infinite, Some(model::slice(&ray, cs)))),
        LpOutcome::Infeasible(_) => unreachable!("the origin is feasible"),
    }
}

pub fn subspace_norm(ep: &ExtensionProblem) -> Result<Norm> {
    Ok(subspace_norm_lp(ep)?.0)
}

/// The verdict of one route, before any extension is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteVerdict {
    pub holds: bool,
    pub violation: Option<Violation>,
    pub extension: Option<Functional>,
    pub farkas: Option<Farkas>,
}

impl RouteVerdict {
    fn holds() -> Self {
        RouteVerdict {
            holds: true,
            violation: None,
            extension: None,
            farkas: None,
        }
    }

    fn violated(v: Violation) -> Self {
        RouteVerdict {
            holds: false,
            violation: Some(v),
            extension: None,
            farkas: None,
        }
    }
}

/// Runs one route with the degenerate cases (`N = 0`, `N = ∞`) settled first.
pub fn route_verdict(ep: &ExtensionProblem, route: Route) -> Result<(Norm, RouteVerdict)> {
    let (norm, ray) = subspace_norm_lp(ep)?;
    let n = match &norm {
        Norm::Infinite => {
            let coords = ray.expect("unbounded norm LP yields a ray");
            let x = ep.basis().combine_rows(&coords);
            let v = Violation::new(ep, coords, x);
            return Ok((norm, RouteVerdict::violated(v)));
        }
        Norm::Finite(n) if n.is_zero() => {
            let mut v = RouteVerdict::holds();
            v.extension = Some(Functional::zero(ep.space.dim()));
            return Ok((norm, v));
        }
        Norm::Finite(n) => n.clone(),
    };
    let g: RVec = ep.f_on_sub.iter().map(|fj| fj / &n).collect();
    let verdict = match route {
        Route::BallPlusCone => ball_route(ep, &g, false)?,
        Route::BallMinusCone => ball_route(ep, &g, true)?,
        Route::DominatedAbove => dominated_route(ep, &g, true)?,
        Route::DominatedBelow => dominated_route(ep, &g, false)?,
        Route::Dual => dual_route(ep, &n)?,
    };
    Ok((norm, verdict))
}

/// Point `anchor + s·ray` with `objective` at least `target`.
fn along_ray(anchor: &RVec, ray: &RVec, objective: &RVec, target: &Rat) -> RVec {
    let slope = objective.dot(ray);
    let deficit = target - objective.dot(anchor);
    if deficit.is_positive() && slope.is_positive() {
        anchor.axpy(&(deficit / slope), ray)
    } else {
        anchor.clone()
    }
}

/// `upper`: maximize `g(x)` over `y - x ∈ E₊`, `p(y) ≤ 1`; holds iff `≤ 1`.
/// Otherwise: minimize `g(x)` over `x - y ∈ E₊`, `p(y) ≤ 1`; holds iff `≥ -1`.
fn ball_route(ep: &ExtensionProblem, g: &RVec, upper: bool) -> Result<RouteVerdict> {
    let s = &ep.space;
    let sn = s.seminorm(ep.alpha)?;
    let (k, n) = (ep.sub.dim(), s.dim());
    let mut p = LpProblem::new(if upper {
        Sense::Maximize
    } else {
        Sense::Minimize
    });
    let cs = p.add_vars(k, Bound::free());
    let ys = p.add_vars(n, Bound::free());
    for (v, gj) in cs.clone().zip(g.iter()) {
        p.set_objective(v, gj.clone());
    }
    let x = ep.point(cs.clone());
    let y = VecExpr::vars(ys.clone());
    let gap = if upper { y.minus(&x) } else { x.minus(&y) };
    model::in_cone(&mut p, s.cone(), &gap);
    model::in_unit_ball(&mut p, sn.rows(), &y);

    // Objective oriented so that "violation" means "exceeds 1".
    let sign = if upper { Rat::one() } else { -Rat::one() };
    let mut objective = vec![Rat::zero(); k + n];
    for (j, gj) in g.iter().enumerate() {
        objective[j] = &sign * gj;
    }
    let objective = RVec::new(objective);
    let point = match lp::solve(&p)? {
        LpOutcome::Optimal(o) if &sign * &o.value > Rat::one() => o.primal,
        LpOutcome::Unbounded { anchor, ray } => along_ray(&anchor, &ray, &objective, &rat(2)),
        _ => return Ok(RouteVerdict::holds()),
    };
    let v = Violation::new(ep, model::slice(&point, cs), model::slice(&point, ys));
    Ok(RouteVerdict::violated(if upper { v } else { v.negated() }))
}

/// Homogeneous form. `above`: maximize `g(x) - t` over `y - x ∈ E₊`,
/// `p(y) ≤ t`. Otherwise: maximize `g(-x) - t` over `x - y ∈ E₊`,
/// `p(y) ≤ t`. The optimum is 0 when the condition holds and the LP is
/// unbounded when it fails.
fn dominated_route(ep: &ExtensionProblem, g: &RVec, above: bool) -> Result<RouteVerdict> {
    let s = &ep.space;
    let sn = s.seminorm(ep.alpha)?;
    let (k, n) = (ep.sub.dim(), s.dim());
    let mut p = LpProblem::new(Sense::Maximize);
    let cs = p.add_vars(k, Bound::free());
    let ys = p.add_vars(n, Bound::free());
    let t = p.add_var(Bound::free());
    let sign = if above { Rat::one() } else { -Rat::one() };
    let mut objective = vec![Rat::zero(); k + n + 1];
    for (v, gj) in cs.clone().zip(g.iter()) {
        p.set_objective(v, &sign * gj);
        objective[v] = &sign * gj;
    }
    p.set_objective(t, -Rat::one());
    objective[t] = -Rat::one();
    let x = ep.point(cs.clone());
    let y = VecExpr::vars(ys.clone());
    let gap = if above { y.minus(&x) } else { x.minus(&y) };
    model::in_cone(&mut p, s.cone(), &gap);
    model::in_ball_radius(&mut p, sn.rows(), &y, t);
    match lp::solve(&p)? {
        LpOutcome::Unbounded { anchor, ray } => {
            let point = along_ray(&anchor, &ray, &RVec::new(objective), &Rat::one());
            let v = Violation::new(ep, model::slice(&point, cs), model::slice(&point, ys));
            Ok(RouteVerdict::violated(if above { v } else { v.negated() }))
        }
        LpOutcome::Optimal(o) => {
            debug_assert!(o.value.is_zero());
            Ok(RouteVerdict::holds())
        }
        LpOutcome::Infeasible(_) => unreachable!("the origin is feasible"),
    }
}

/// `f̃ = Σ (μ⁺ - μ⁻) a_i` with `Σμ ≤ N`, positive on the generators and
/// equal to `f` on the basis of `X`.
fn dual_problem(ep: &ExtensionProblem, n: &Rat) -> Result<LpProblem> {
    let s = &ep.space;
    let sn = s.seminorm(ep.alpha)?;
    let m = sn.rows().len();
    let mut p = LpProblem::feasibility(2 * m, Bound::nonneg());
    let f = model::dual_ball_point(s.dim(), sn.rows(), 0..2 * m);
    p.add_terms(model::sum_of(0..2 * m), Relation::Le, n.clone());
    for g in s.cone().generators() {
        p.add_terms(f.dot(g), Relation::Ge, Rat::zero());
    }
    for (b, fb) in ep.basis().rows().iter().zip(ep.f_on_sub.iter()) {
        p.add_terms(f.dot(b), Relation::Eq, fb.clone());
    }
    Ok(p)
}

fn dual_route(ep: &ExtensionProblem, n: &Rat) -> Result<RouteVerdict> {
    let sn = ep.space.seminorm(ep.alpha)?;
    let m = sn.rows().len();
    match lp::solve(&dual_problem(ep, n)?)? {
        LpOutcome::Optimal(o) => {
            let mut coeffs = RVec::zeros(ep.space.dim());
            for (i, a) in sn.rows().iter().enumerate() {
                coeffs = coeffs.axpy(&(&o.primal[i] - &o.primal[m + i]), a);
            }
            let mut v = RouteVerdict::holds();
            v.extension = Some(Functional::new(coeffs));
            Ok(v)
        }
        LpOutcome::Infeasible(farkas) => Ok(RouteVerdict {
            holds: false,
            violation: None,
            extension: None,
            farkas: Some(farkas),
        }),
        LpOutcome::Unbounded { .. } => unreachable!("zero objective"),
    }
}

fn result(route: Route, sub_norm: Norm, v: RouteVerdict) -> BnnResult {
    BnnResult {
        route,
        extendable: v.holds,
        extension: v.extension,
        sub_norm,
        violation: v.violation,
        farkas: v.farkas,
    }
}

/// Decides extendability through `route`. A positive verdict from a primal
/// route is completed with an extension from the dual route; a mismatch
/// between the two is reported as an error.
pub fn bnn_check_route(ep: &ExtensionProblem, route: Route) -> Result<BnnResult> {
    let (norm, mut v) = route_verdict(ep, route)?;
    if v.holds && v.extension.is_none() {
        let (_, dual) = route_verdict(ep, Route::Dual)?;
        if !dual.holds {
            return Err(Error::Hypothesis(format!(
                "route {route} accepts but no positive extension exists"
            )));
        }
        v.extension = dual.extension;
    }
    Ok(result(route, norm, v))
}

/// Condition route: `x ≤ y` forces `f(x) ≤ N·p(y)`.
pub fn bnn_check(ep: &ExtensionProblem) -> Result<BnnResult> {
    bnn_check_route(ep, Route::DominatedAbove)
}

/// Dual route: a positive extension in `N·K_α`, or a Farkas certificate.
pub fn bnn_construct(ep: &ExtensionProblem) -> Result<BnnResult> {
    let (norm, v) = route_verdict(ep, Route::Dual)?;
    Ok(result(Route::Dual, norm, v))
}

/// `|f + g|_α` against `|f|_α + |g|_α` for positive `f`, `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Additivity {
    pub norm_f: Rat,
    pub norm_g: Rat,
    /// `|f + g|_α`
    pub lhs: Rat,
    /// `|f|_α + |g|_α`
    pub rhs: Rat,
    pub additive: bool,
}

fn positive_finite(s: &CalibratedSpace, alpha: usize, f: &Functional) -> Result<Rat> {
    s.check_vec(&f.coeffs, "functional")?;
    if !f.is_positive_on(s.cone()) {
        return Err(Error::NotPositive(f.coeffs.clone()));
    }
    match s.functional_norm(alpha, f)? {
        Norm::Finite(t) => Ok(t),
        Norm::Infinite => Err(Error::InfiniteNorm(f.coeffs.clone())),
    }
}

pub fn norm_additivity_check(
    s: &CalibratedSpace,
    alpha: usize,
    f: &Functional,
    g: &Functional,
) -> Result<Additivity> {
    let norm_f = positive_finite(s, alpha, f)?;
    let norm_g = positive_finite(s, alpha, g)?;
    let h = Functional::new(f.coeffs.add(&g.coeffs));
    let lhs = positive_finite(s, alpha, &h)?;
    let rhs = &norm_f + &norm_g;
    Ok(Additivity {
        additive: lhs == rhs,
        norm_f,
        norm_g,
        lhs,
        rhs,
    })
}

/// Extensions of `f` and `h = f + g` to the finite state model, as weights
/// on the states of `α`: `w_f, w_h ≥ 0`, `Σ w_f v = f` with mass `|f|`,
/// `Σ w_h v = h` with mass `|h|`, and `w_h ≥ w_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivityWitness {
    pub states: Vec<RVec>,
    pub w_f: RVec,
    pub w_h: RVec,
}

impl AdditivityWitness {
    pub fn verify(&self, f: &Functional, g: &Functional, norm_f: &Rat, norm_h: &Rat) -> bool {
        let k = self.states.len();
        if self.w_f.dim() != k || self.w_h.dim() != k {
            return false;
        }
        let dim = f.dim();
        let Ok(v) = RMat::new(self.states.clone(), dim) else {
            return false;
        };
        let nonneg = |w: &RVec| w.iter().all(|c| !c.is_negative());
        let dominated = self.w_h.iter().zip(self.w_f.iter()).all(|(h, f)| h >= f);
        nonneg(&self.w_f)
            && dominated
            && v.combine_rows(&self.w_f) == f.coeffs
            && v.combine_rows(&self.w_h) == f.coeffs.add(&g.coeffs)
            && self.w_f.iter().sum::<Rat>() == *norm_f
            && self.w_h.iter().sum::<Rat>() == *norm_h
    }
}

/// The weight LP on an explicit state list, with no hypothesis check.
pub fn additivity_weights(
    s: &CalibratedSpace,
    alpha: usize,
    states: &[RVec],
    f: &Functional,
    g: &Functional,
) -> Result<Option<AdditivityWitness>> {
    let a = norm_additivity_check(s, alpha, f, g)?;
    let k = states.len();
    let n = s.dim();
    let h = f.coeffs.add(&g.coeffs);
    let mut p = LpProblem::feasibility(2 * k, Bound::nonneg());
    let wf = 0..k;
    let wh = k..2 * k;
    model::equals(
        &mut p,
        &VecExpr::combination(n, wf.clone(), states, &Rat::one()),
        &f.coeffs,
    );
    p.add_terms(model::sum_of(wf.clone()), Relation::Eq, a.norm_f.clone());
    model::equals(
        &mut p,
        &VecExpr::combination(n, wh.clone(), states, &Rat::one()),
        &h,
    );
    p.add_terms(model::sum_of(wh.clone()), Relation::Eq, a.lhs.clone());
    for j in 0..k {
        p.add_terms(
            [(k + j, Rat::one()), (j, -Rat::one())],
            Relation::Ge,
            Rat::zero(),
        );
    }
    Ok(lp::solve(&p)?.optimum().map(|o| AdditivityWitness {
        states: states.to_vec(),
        w_f: model::slice(&o.primal, wf),
        w_h: model::slice(&o.primal, wh),
    }))
}

/// Weights exist iff `|f + g|_α = |f|_α + |g|_α`, on spaces whose states
/// recover the seminorm. Errors when that hypothesis fails.
pub fn additivity_extension_witness(
    s: &CalibratedSpace,
    alpha: usize,
    f: &Functional,
    g: &Functional,
) -> Result<Option<AdditivityWitness>> {
    let states = represent::state_vertices(s.seminorm(alpha)?, s.cone())?;
    let cover = criteria::check_state_cover_with(s, alpha, &states, criteria::Criterion::StateSup)?;
    if !cover.holds {
        return Err(Error::Hypothesis(
            "states do not recover the seminorm on this space; only the implication \
             weights => additivity is available"
                .into(),
        ));
    }
    additivity_weights(s, alpha, &states, f, g)
}
