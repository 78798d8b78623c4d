//! Calibrated ordered spaces `(E, E₊, {p_α})` with polyhedral seminorms.
//!
//! A seminorm is `p(x) = max_i |⟨a_i, x⟩|`; its dual unit ball is
//! `K = conv{±a_i}`, and `|u(x)| ≤ t·p(x)` for all `x` exactly when
//! `u ∈ t·K`. Every functional norm below is that gauge, computed by LP.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::exactla::{RMat, RVec, Rat};
use crate::lp::{self, Bound, LpOutcome, LpProblem, Relation, Sense};
use crate::model::{self, VecExpr};

/// `p(x) = max_i |⟨a_i, x⟩|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralSeminorm {
    name: String,
    dim: usize,
    rows: Vec<RVec>,
}

impl PolyhedralSeminorm {
    /// Zero rows are dropped; among rows on a common line only the longest
    /// is kept, since the shorter ones never attain the max.
    pub fn new(name: impl Into<String>, dim: usize, rows: Vec<RVec>) -> Result<Self> {
        let name = name.into();
        let mut kept: Vec<(RVec, RVec)> = Vec::new();
        for r in rows {
            if r.dim() != dim {
                return Err(Error::Dimension {
                    context: "seminorm row",
                    expected: dim,
                    found: r.dim(),
                });
            }
            if r.is_zero() {
                continue;
            }
            let r = sign_normalized(r);
            let dir = r.primitive();
            match kept.iter_mut().find(|(d, _)| *d == dir) {
                Some((_, existing)) => {
                    if r.max_abs() > existing.max_abs() {
                        *existing = r;
                    }
                }
                None => kept.push((dir, r)),
            }
        }
        if kept.is_empty() {
            return Err(Error::EmptySeminorm { name });
        }
        Ok(PolyhedralSeminorm {
            name,
            dim,
            rows: kept.into_iter().map(|(_, r)| r).collect(),
        })
    }

    /// The sup-norm `max_i |x_i|`.
    pub fn sup(dim: usize) -> Self {
        PolyhedralSeminorm::new("sup", dim, (0..dim).map(|k| RVec::unit(dim, k)).collect()).unwrap()
    }

    /// Pointwise maximum of several seminorms: the union of their rows.
    pub fn saturate(name: impl Into<String>, parts: &[&PolyhedralSeminorm]) -> Result<Self> {
        let dim = parts.first().map_or(0, |p| p.dim);
        let rows = parts.iter().flat_map(|p| p.rows.iter().cloned()).collect();
        PolyhedralSeminorm::new(name, dim, rows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[RVec] {
        &self.rows
    }

    pub fn matrix(&self) -> RMat {
        RMat::new(self.rows.clone(), self.dim).unwrap()
    }

    pub fn eval(&self, x: &RVec) -> Result<Rat> {
        if x.dim() != self.dim {
            return Err(Error::Dimension {
                context: "seminorm argument",
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(self.value(x))
    }

    pub(crate) fn value(&self, x: &RVec) -> Rat {
        self.rows
            .iter()
            .map(|a| a.dot(x).abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// Rows and their negations: the vertex candidates of `K`.
    pub fn signed_rows(&self) -> impl Iterator<Item = RVec> + '_ {
        self.rows.iter().flat_map(|a| [a.clone(), a.neg()])
    }

    /// Gauge of `u` with respect to `K`, plus a maximizer `x` with
    /// `p(x) ≤ 1` and `⟨u, x⟩ = |u|`. `None` when `u ∉ span{a_i}`.
    pub fn dual_norm_witness(&self, u: &RVec) -> Result<Option<(Rat, RVec)>> {
        if u.dim() != self.dim {
            return Err(Error::Dimension {
                context: "functional",
                expected: self.dim,
                found: u.dim(),
            });
        }
        let m = self.rows.len();
        let mut p = LpProblem::new(Sense::Minimize);
        let mu = p.add_vars(2 * m, Bound::nonneg());
        for v in mu.clone() {
            p.set_objective(v, Rat::one());
        }
        let f = model::dual_ball_point(self.dim, &self.rows, mu);
        model::equals(&mut p, &f, u);
        match lp::solve(&p)? {
            LpOutcome::Optimal(o) => Ok(Some((o.value, o.dual))),
            LpOutcome::Infeasible(_) => Ok(None),
            LpOutcome::Unbounded { .. } => unreachable!("gauge LP is bounded below by 0"),
        }
    }

    pub fn dual_norm(&self, u: &RVec) -> Result<Norm> {
        Ok(match self.dual_norm_witness(u)? {
            Some((t, _)) => Norm::Finite(t),
            None => Norm::Infinite,
        })
    }
}

fn sign_normalized(r: RVec) -> RVec {
    match r.iter().find(|a| !a.is_zero()) {
        Some(a) if a.is_negative() => r.neg(),
        _ => r,
    }
}

/// `(Σ |x_i|^p)` for integer `p ≥ 1`; compares ℓ^p norms without roots.
/// Evaluation only, never used by a decision procedure.
#[derive(Clone, Copy, Debug)]
pub struct PowerSumSeminorm {
    pub p: u32,
}

impl PowerSumSeminorm {
    pub fn pth_power(&self, x: &RVec) -> Rat {
        x.iter()
            .map(|a| num_traits::pow(a.abs(), self.p as usize))
            .sum()
    }

    /// `‖x‖_p ≤ 1`
    pub fn in_unit_ball(&self, x: &RVec) -> bool {
        self.pth_power(x) <= Rat::one()
    }
}

/// A functional norm, possibly infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Norm {
    Finite(Rat),
    Infinite,
}

impl Norm {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Norm::Finite(t) => Some(t),
            Norm::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Norm::Infinite)
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Finite(t) => f.write_str(&crate::exactla::fmt_rat(t)),
            Norm::Infinite => f.write_str("inf"),
        }
    }
}

/// `u(x) = ⟨coeffs, x⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    pub coeffs: RVec,
}

impl Functional {
    pub fn new(coeffs: RVec) -> Self {
        Functional { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Functional::new(RVec::from_i64s(c))
    }

    pub fn zero(dim: usize) -> Self {
        Functional::new(RVec::zeros(dim))
    }

    pub fn apply(&self, x: &RVec) -> Rat {
        self.coeffs.dot(x)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    /// Nonnegative on every generator of `cone`.
    pub fn is_positive_on(&self, cone: &PolyCone) -> bool {
        cone.generators()
            .iter()
            .all(|g| !self.apply(g).is_negative())
    }
}

impl From<RVec> for Functional {
    fn from(coeffs: RVec) -> Self {
        Functional { coeffs }
    }
}

/// A linear subspace given by independent basis rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: RMat,
}

impl Subspace {
    pub fn new(basis: RMat) -> Result<Self> {
        let rank = basis.rank();
        if rank != basis.nrows() {
            return Err(Error::DependentBasis {
                rank,
                rows: basis.nrows(),
            });
        }
        Ok(Subspace { basis })
    }

    pub fn basis(&self) -> &RMat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `Σ c_j b_j`
    pub fn point(&self, coords: &[Rat]) -> RVec {
        self.basis.combine_rows(coords)
    }
}

/// Outcome of the monotonicity test for one seminorm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    /// `0 ≤ y ≤ x` with `p(y) > p(x)`.
    Violated {
        y: RVec,
        x: RVec,
    },
}

/// `E = ℝⁿ` with a pointed cone and a separating family of polyhedral seminorms.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibratedSpace {
    dim: usize,
    cone: PolyCone,
    seminorms: Vec<PolyhedralSeminorm>,
}

impl CalibratedSpace {
    pub fn new(cone: PolyCone, seminorms: Vec<PolyhedralSeminorm>) -> Result<Self> {
        let dim = cone.dim();
        if seminorms.is_empty() {
            return Err(Error::EmptySeminorm {
                name: "<family>".into(),
            });
        }
        for s in &seminorms {
            if s.dim() != dim {
                return Err(Error::Dimension {
                    context: "seminorm",
                    expected: dim,
                    found: s.dim(),
                });
            }
        }
        if let Some(witness) = cone.line_witness() {
            return Err(Error::NotPointed { witness });
        }
        let stacked = RMat::new(
            seminorms
                .iter()
                .flat_map(|s| s.rows.iter().cloned())
                .collect(),
            dim,
        )?;
        let rank = stacked.rank();
        if rank != dim {
            return Err(Error::NotSpanning { rank, dim });
        }
        Ok(CalibratedSpace {
            dim,
            cone,
            seminorms,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cone(&self) -> &PolyCone {
        &self.cone
    }

    pub fn seminorms(&self) -> &[PolyhedralSeminorm] {
        &self.seminorms
    }

    pub fn seminorm(&self, alpha: usize) -> Result<&PolyhedralSeminorm> {
        self.seminorms.get(alpha).ok_or(Error::BadIndex {
            index: alpha,
            count: self.seminorms.len(),
        })
    }

    pub(crate) fn check_vec(&self, x: &RVec, context: &'static str) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::Dimension {
                context,
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn eval_seminorm(&self, alpha: usize, x: &RVec) -> Result<Rat> {
        self.seminorm(alpha)?.eval(x)
    }

    /// `|u|_α`, infinite when `u` does not vanish on `ker p_α`.
    pub fn functional_norm(&self, alpha: usize, u: &Functional) -> Result<Norm> {
        self.seminorm(alpha)?.dual_norm(&u.coeffs)
    }

    /// Decides whether `0 ≤ y ≤ x` forces `p_α(y) ≤ p_α(x)`.
    ///
    /// One LP per signed row: maximize `±⟨a_i, y⟩` over `y ∈ E₊`,
    /// `x - y ∈ E₊`, `p_α(x) ≤ 1`. The seminorm is increasing iff every
    /// optimum is at most 1.
    pub fn is_increasing(&self, alpha: usize) -> Result<Monotonicity> {
        let sn = self.seminorm(alpha)?;
        let n = self.dim;
        for a in sn.signed_rows() {
            let mut p = LpProblem::new(Sense::Maximize);
            let xs = p.add_vars(n, Bound::free());
            let ys = p.add_vars(n, Bound::free());
            for (v, c) in ys.clone().zip(a.iter()) {
                p.set_objective(v, c.clone());
            }
            let x = VecExpr::vars(xs.clone());
            let y = VecExpr::vars(ys.clone());
            model::in_cone(&mut p, &self.cone, &y);
            model::in_cone(&mut p, &self.cone, &x.minus(&y));
            model::in_unit_ball(&mut p, sn.rows(), &x);
            match lp::solve(&p)? {
                LpOutcome::Optimal(o) if o.value > Rat::one() => {
                    return Ok(Monotonicity::Violated {
                        y: model::slice(&o.primal, ys),
                        x: model::slice(&o.primal, xs),
                    });
                }
                LpOutcome::Unbounded { ray, .. } => {
                    return Ok(Monotonicity::Violated {
                        y: model::slice(&ray, ys),
                        x: model::slice(&ray, xs),
                    });
                }
                _ => {}
            }
        }
        Ok(Monotonicity::Increasing)
    }

    /// Direct check of a monotonicity witness (facet evaluation, no LP).
    pub fn verify_monotonicity_witness(&self, alpha: usize, y: &RVec, x: &RVec) -> Result<bool> {
        let sn = self.seminorm(alpha)?;
        Ok(self.cone.contains_by_facets(y)?
            && self.cone.contains_by_facets(&x.sub(y))?
            && sn.eval(y)? > sn.eval(x)?)
    }

    /// `e` is an order unit iff every `±b_k` lies below some `λe`.
    pub fn order_unit_check(&self, e: &RVec) -> Result<bool> {
        self.check_vec(e, "order unit")?;
        for k in 0..self.dim {
            for sign in [Rat::one(), -Rat::one()] {
                let b = RVec::unit(self.dim, k).scale(&sign);
                let mut p = LpProblem::feasibility(1, Bound::nonneg());
                for h in self.cone.inequalities() {
                    // ⟨h, λe - b⟩ ≥ 0
                    p.add_terms([(0, h.dot(e))], Relation::Ge, h.dot(&b));
                }
                if !lp::solve(&p)?.is_feasible() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `p_e(x) = inf{λ : -λe ≤ x ≤ λe}`.
    pub fn order_seminorm(&self, e: &RVec, x: &RVec) -> Result<Rat> {
        self.check_vec(x, "order seminorm argument")?;
        if !self.order_unit_check(e)? {
            return Err(Error::NotOrderUnit(e.clone()));
        }
        let mut p = LpProblem::new(Sense::Minimize);
        p.add_var(Bound::nonneg());
        p.set_objective(0, Rat::one());
        for h in self.cone.inequalities() {
            let he = h.dot(e);
            let hx = h.dot(x);
            p.add_terms([(0, he.clone())], Relation::Ge, hx.clone());
            p.add_terms([(0, he)], Relation::Ge, -hx);
        }
        match lp::solve(&p)? {
            LpOutcome::Optimal(o) => Ok(o.value),
            other => unreachable!("order unit LP must be solvable, got {}", other.status()),
        }
    }

    /// The normed quotient `E / ker p_α`.
    pub fn quotient(&self, alpha: usize) -> Result<Quotient> {
        let sn = self.seminorm(alpha)?;
        let m = sn.matrix();
        let projection = if m.rank() == self.dim {
            RMat::identity(self.dim)
        } else {
            let keep = m.independent_rows();
            RMat::new(keep.iter().map(|&i| m[i].clone()).collect(), self.dim)?
        };
        let q = projection.nrows();
        let transpose = transpose(&projection);
        let mut rows = Vec::with_capacity(sn.rows().len());
        for a in sn.rows() {
            let c = transpose
                .solve(a)?
                .expect("seminorm rows lie in their own span");
            rows.push(c);
        }
        let norm = PolyhedralSeminorm::new(format!("{}/ker", sn.name()), q, rows)?;
        let gens = self
            .cone
            .generators()
            .iter()
            .map(|g| projection.mul_vec(g))
            .collect::<Result<Vec<_>>>()?;
        let cone = PolyCone::from_generators(q, gens)?;
        Ok(Quotient {
            projection,
            transpose,
            cone,
            norm,
        })
    }
}

fn transpose(m: &RMat) -> RMat {
    let rows = (0..m.ncols())
        .map(|j| m.rows().iter().map(|r| r[j].clone()).collect())
        .collect();
    RMat::new(rows, m.nrows()).unwrap()
}

/// `E / ker p_α` in coordinates `x ↦ P x`, with the induced norm and the
/// image of the cone. The image cone need not be pointed.
#[derive(Clone, Debug)]
pub struct Quotient {
    projection: RMat,
    transpose: RMat,
    cone: PolyCone,
    norm: PolyhedralSeminorm,
}

impl Quotient {
    pub fn projection(&self) -> &RMat {
        &self.projection
    }

    pub fn dim(&self) -> usize {
        self.projection.nrows()
    }

    pub fn cone(&self) -> &PolyCone {
        &self.cone
    }

    pub fn norm(&self) -> &PolyhedralSeminorm {
        &self.norm
    }

    pub fn project(&self, x: &RVec) -> Result<RVec> {
        self.projection.mul_vec(x)
    }

    /// `f_q` with `f = f_q ∘ P`; `None` when `f` does not vanish on the kernel.
    pub fn functional(&self, f: &Functional) -> Result<Option<Functional>> {
        Ok(self.transpose.solve(&f.coeffs)?.map(Functional::new))
    }

    /// The quotient as a calibrated space; fails when the image cone is not pointed.
    pub fn as_calibrated(&self) -> Result<CalibratedSpace> {
        CalibratedSpace::new(self.cone.clone(), vec![self.norm.clone()])
    }
}
