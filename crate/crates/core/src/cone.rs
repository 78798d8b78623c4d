//! Finitely generated convex cones.
//!
//! A [`PolyCone`] is stored by its generators; the facet description
//! `{x : ⟨h, x⟩ ≥ 0}` is derived on first use with the double description
//! method and cached. Finitely generated cones are closed, so every cone
//! here is Archimedean and the bipolar identity `C = C**` holds exactly.

use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{rat, RMat, RVec, Rat};
use crate::lp::{self, Bound, LpOutcome, LpProblem, Relation};

#[derive(Debug)]
pub struct PolyCone {
    dim: usize,
    generators: Vec<RVec>,
    inequalities: OnceLock<Vec<RVec>>,
}

impl Clone for PolyCone {
    fn clone(&self) -> Self {
        let inequalities = OnceLock::new();
        if let Some(h) = self.inequalities.get() {
            let _ = inequalities.set(h.clone());
        }
        PolyCone {
            dim: self.dim,
            generators: self.generators.clone(),
            inequalities,
        }
    }
}

impl PartialEq for PolyCone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.generators == other.generators
    }
}

impl PolyCone {
    /// Cone spanned by `generators`. Each generator is scaled to a primitive
    /// integer vector; zeros and duplicates are dropped.
    pub fn from_generators(dim: usize, generators: Vec<RVec>) -> Result<Self> {
        let mut gens: Vec<RVec> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.dim() != dim {
                return Err(Error::Dimension {
                    context: "cone generator",
                    expected: dim,
                    found: g.dim(),
                });
            }
            let g = g.primitive();
            if !g.is_zero() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(PolyCone {
            dim,
            generators: gens,
            inequalities: OnceLock::new(),
        })
    }

    pub fn trivial(dim: usize) -> Self {
        PolyCone::from_generators(dim, Vec::new()).unwrap()
    }

    pub fn orthant(dim: usize) -> Self {
        PolyCone::from_generators(dim, (0..dim).map(|k| RVec::unit(dim, k)).collect()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RVec] {
        &self.generators
    }

    /// Facet normals `h` with `C = {x : ⟨h, x⟩ ≥ 0 ∀h}`. Equalities appear
    /// as `±h` pairs.
    pub fn inequalities(&self) -> &[RVec] {
        self.inequalities
            .get_or_init(|| DoubleDescription::run(self.dim, &self.generators).generators())
    }

    /// Returns a copy with the facet description populated.
    pub fn dual_description(&self) -> PolyCone {
        self.inequalities();
        self.clone()
    }

    /// `C* = {f : ⟨f, g⟩ ≥ 0 ∀g}` with generators from double description.
    pub fn dual_cone(&self) -> PolyCone {
        PolyCone::from_generators(self.dim, self.inequalities().to_vec()).unwrap()
    }

    fn check_dim(&self, x: &RVec) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::Dimension {
                context: "cone point",
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// Membership decided by an LP over generator weights.
    pub fn contains(&self, x: &RVec) -> Result<bool> {
        Ok(self.combination(x)?.is_some())
    }

    /// Nonnegative weights `λ` with `Σ λ_k g_k = x`, if any.
    pub fn combination(&self, x: &RVec) -> Result<Option<RVec>> {
        self.check_dim(x)?;
        if x.is_zero() {
            return Ok(Some(RVec::zeros(self.generators.len())));
        }
        if self.generators.is_empty() {
            return Ok(None);
        }
        let k = self.generators.len();
        let mut p = LpProblem::feasibility(k, Bound::nonneg());
        for i in 0..self.dim {
            p.add_terms(
                (0..k).map(|j| (j, self.generators[j][i].clone())),
                Relation::Eq,
                x[i].clone(),
            );
        }
        Ok(match lp::solve(&p)? {
            LpOutcome::Optimal(o) => Some(o.primal),
            _ => None,
        })
    }

    /// Membership decided from the facet description.
    pub fn contains_by_facets(&self, x: &RVec) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.inequalities().iter().all(|h| !h.dot(x).is_negative()))
    }

    /// `None` when the cone is pointed, otherwise a nonzero `v` with
    /// `v, -v` both in the cone.
    pub fn line_witness(&self) -> Option<RVec> {
        let k = self.generators.len();
        if k == 0 {
            return None;
        }
        // Σλg = -Σμg, Σλ = 1, λ, μ ≥ 0
        let mut p = LpProblem::feasibility(2 * k, Bound::nonneg());
        for i in 0..self.dim {
            p.add_terms(
                (0..k).flat_map(|j| {
                    let a = self.generators[j][i].clone();
                    [(j, a.clone()), (k + j, a)]
                }),
                Relation::Eq,
                Rat::zero(),
            );
        }
        p.add_terms((0..k).map(|j| (j, rat(1))), Relation::Eq, rat(1));
        let LpOutcome::Optimal(o) = lp::solve(&p).expect("well-formed LP") else {
            return None;
        };
        let lambda = &o.primal[..k];
        let v = RMat::new(self.generators.clone(), self.dim)
            .unwrap()
            .combine_rows(lambda);
        if !v.is_zero() {
            return Some(v.primitive());
        }
        // Σλg = 0 with λ ≠ 0: any generator in the support is on a line.
        let j = lambda.iter().position(|l| l.is_positive())?;
        Some(self.generators[j].clone())
    }

    pub fn is_pointed(&self) -> bool {
        self.line_witness().is_none()
    }
}

/// Incremental double description: generators of `{x : ⟨a, x⟩ ≥ 0}` for a
/// list of inequality rows `a`, with the lineality space kept separately.
pub(crate) struct DoubleDescription {
    pub rays: Vec<RVec>,
    pub lineality: Vec<RVec>,
}

impl DoubleDescription {
    pub fn run(dim: usize, inequalities: &[RVec]) -> Self {
        let mut lineality: Vec<RVec> = (0..dim).map(|k| RVec::unit(dim, k)).collect();
        // Each ray carries the indices of processed rows it makes tight.
        let mut rays: Vec<(RVec, Vec<usize>)> = Vec::new();
        let mut processed: Vec<RVec> = Vec::new();

        for a in inequalities {
            if a.is_zero() {
                continue;
            }
            let idx = processed.len();
            if let Some(pos) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
                let mut l = lineality.swap_remove(pos);
                let mut al = a.dot(&l);
                if al.is_negative() {
                    l = l.neg();
                    al = -al;
                }
                for other in lineality.iter_mut() {
                    let c = a.dot(other) / &al;
                    if !c.is_zero() {
                        *other = other.axpy(&-c, &l);
                    }
                }
                for (r, tight) in rays.iter_mut() {
                    let c = a.dot(r) / &al;
                    if !c.is_zero() {
                        *r = r.axpy(&-c, &l);
                    }
                    tight.push(idx);
                }
                rays.push((l, (0..idx).collect()));
                processed.push(a.clone());
                continue;
            }

            let target_rank = RMat::new(processed.clone(), dim).unwrap().rank();
            let values: Vec<Rat> = rays.iter().map(|(r, _)| a.dot(r)).collect();
            let mut next: Vec<(RVec, Vec<usize>)> = Vec::new();
            for ((r, tight), v) in rays.iter().zip(&values) {
                if v.is_positive() {
                    next.push((r.clone(), tight.clone()));
                } else if v.is_zero() {
                    let mut t = tight.clone();
                    t.push(idx);
                    next.push((r.clone(), t));
                }
            }
            for (i, vp) in values.iter().enumerate() {
                if !vp.is_positive() {
                    continue;
                }
                for (j, vn) in values.iter().enumerate() {
                    if !vn.is_negative() {
                        continue;
                    }
                    let common: Vec<usize> = rays[i]
                        .1
                        .iter()
                        .copied()
                        .filter(|t| rays[j].1.contains(t))
                        .collect();
                    if target_rank < 2 || common.len() < target_rank - 2 {
                        continue;
                    }
                    let face_rank =
                        RMat::new(common.iter().map(|&t| processed[t].clone()).collect(), dim)
                            .unwrap()
                            .rank();
                    if face_rank + 2 != target_rank {
                        continue;
                    }
                    let combo = rays[j].0.scale(vp).axpy(&-vn.clone(), &rays[i].0);
                    let mut t = common;
                    t.push(idx);
                    next.push((combo.primitive(), t));
                }
            }
            rays = next;
            processed.push(a.clone());
        }

        let mut out_rays: Vec<RVec> = Vec::new();
        for (r, _) in rays {
            let r = r.primitive();
            if !r.is_zero() && !out_rays.contains(&r) {
                out_rays.push(r);
            }
        }
        DoubleDescription {
            rays: out_rays,
            lineality: lineality.into_iter().map(|l| l.primitive()).collect(),
        }
    }

    /// Rays followed by `±` each lineality basis vector.
    pub fn generators(&self) -> Vec<RVec> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.neg());
        }
        g
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn cone_strategy() -> impl Strategy<Value = PolyCone> {
        (1usize..=3).prop_flat_map(|d| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, d), 0..5).prop_map(move |gs| {
                PolyCone::from_generators(d, gs.iter().map(|g| RVec::from_i64s(g)).collect())
                    .unwrap()
            })
        })
    }

    fn point(d: usize) -> impl Strategy<Value = RVec> {
        prop::collection::vec(-4i64..=4, d).prop_map(|v| RVec::from_i64s(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn generators_satisfy_facets(c in cone_strategy()) {
            for g in c.generators() {
                for h in c.inequalities() {
                    prop_assert!(!h.dot(g).is_negative());
                }
            }
        }

        #[test]
        fn bipolar_identity((c, xs) in cone_strategy().prop_flat_map(|c| {
            let d = c.dim();
            (Just(c), prop::collection::vec(point(d), 6))
        })) {
            let dual = c.dual_cone();
            let bidual = dual.dual_cone();
            for x in &xs {
                let by_lp = c.contains(x).unwrap();
                let by_dual = dual.generators().iter().all(|f| !f.dot(x).is_negative());
                prop_assert_eq!(by_lp, by_dual);
                prop_assert_eq!(by_lp, bidual.contains(x).unwrap());
            }
            for g in c.generators() {
                prop_assert!(bidual.contains(g).unwrap());
            }
        }

        #[test]
        fn round_trip_spans_same_cone(c in cone_strategy()) {
            // V -> H -> V
            let back = PolyCone::from_generators(
                c.dim(),
                DoubleDescription::run(c.dim(), c.inequalities()).generators(),
            ).unwrap();
            for g in c.generators() {
                prop_assert!(back.contains(g).unwrap());
            }
            for g in back.generators() {
                prop_assert!(c.contains(g).unwrap());
            }
        }
    }
}
